#ifndef LATDEFORM_H
#define LATDEFORM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes. Library errors use the same numbers as the CLI exit codes.
typedef enum LdStatus {
  LD_STATUS_OK = 0,
  LD_STATUS_INTERNAL = 1,
  LD_STATUS_INVALID_INPUT = 2,
  LD_STATUS_NOT_STRONGLY_CONNECTED = 3,
  LD_STATUS_NOT_FINITE_INDEX = 4,
  LD_STATUS_NON_GENERIC = 5,
  LD_STATUS_TEMPLATE_MISMATCH = 6,
  LD_STATUS_NOT_A_RESOLUTION = 7,
  LD_STATUS_NULL_POINTER = 8,
  LD_STATUS_BUFFER_TOO_SMALL = 9,
  LD_STATUS_PANIC = 10,
} LdStatus;

// A finite-index sublattice of `A_n`.
typedef struct LdLattice LdLattice;

// A Laplacian presentation `(Q, Σ)`.
typedef struct LdPresentation LdPresentation;

// Output of the full pipeline.
typedef struct LdResolution LdResolution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Owned by the
// library; valid until the next failing call on the same thread.
const char *ld_last_error(void);

// Library version as a static string.
const char *ld_version(void);

// Frees a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void ld_string_free(char *s);

// Lattice generated by `nrows` row vectors of length `ncols`, stored
// row-major in `rows`. Each row must sum to zero and the generators must
// span a finite-index sublattice of `A_{ncols-1}`.
//
// # Safety
// `rows` must point to `nrows * ncols` values; `out` must be writable.
enum LdStatus ld_lattice_new(const int64_t *rows,
                             size_t nrows,
                             size_t ncols,
                             struct LdLattice **out);

// # Safety
// `l` must be null or a handle from [`ld_lattice_new`].
void ld_lattice_free(struct LdLattice *l);

// Index of the lattice in `A_n`.
//
// # Safety
// `l` must be a live lattice handle; `out` must be writable.
enum LdStatus ld_lattice_index(const struct LdLattice *l, int64_t *out);

// # Safety
// `l` must be a live lattice handle; `out` must be writable.
enum LdStatus ld_laplacianize(const struct LdLattice *l, struct LdPresentation **out);

// Presentation from an integral Laplacian, `size × size`, row-major.
//
// # Safety
// `entries` must point to `size * size` values; `out` must be writable.
enum LdStatus ld_presentation_from_laplacian(const int64_t *entries,
                                             size_t size,
                                             struct LdPresentation **out);

// # Safety
// `p` must be null or a presentation handle.
void ld_presentation_free(struct LdPresentation *p);

// Number of vertices `n + 1`, or 0 for a null handle.
//
// # Safety
// `p` must be null or a live presentation handle.
size_t ld_presentation_size(const struct LdPresentation *p);

// Copies the Laplacian row-major into `out` (capacity `cap`) and writes
// the entry count to `len`.
//
// # Safety
// `p` must be live; `out` must hold `cap` values; `len` may be null.
enum LdStatus ld_presentation_laplacian(const struct LdPresentation *p,
                                        int64_t *out,
                                        size_t cap,
                                        size_t *len);

// Copies `Σ` into `out`.
//
// # Safety
// As for [`ld_presentation_laplacian`].
enum LdStatus ld_presentation_sigma(const struct LdPresentation *p,
                                    int64_t *out,
                                    size_t cap,
                                    size_t *len);

// Runs deformation, Scarf complex, relabeling, exactness and minimization
// over the rationals with `δ = delta_num / delta_den`.
//
// # Safety
// `p` must be live; `out` must be writable.
enum LdStatus ld_resolve(const struct LdPresentation *p,
                         int64_t delta_num,
                         int64_t delta_den,
                         uint64_t seed,
                         struct LdResolution **out);

// # Safety
// `r` must be null or a resolution handle.
void ld_resolution_free(struct LdResolution *r);

// Ranks of the free modules of the degenerated Scarf complex.
//
// # Safety
// `r` must be live; `out` must hold `cap` values; `len` may be null.
enum LdStatus ld_resolution_ranks(const struct LdResolution *r,
                                  size_t *out,
                                  size_t cap,
                                  size_t *len);

// Betti numbers after minimization.
//
// # Safety
// As for [`ld_resolution_ranks`].
enum LdStatus ld_resolution_betti(const struct LdResolution *r,
                                  size_t *out,
                                  size_t cap,
                                  size_t *len);

// 1 if the complex passed the exactness check, 0 if not, -1 for null.
//
// # Safety
// `r` must be null or live.
int32_t ld_resolution_is_exact(const struct LdResolution *r);

// The resolution as the JSON document printed by `latdeform resolve`.
// Free with [`ld_string_free`].
//
// # Safety
// `r` must be live; `out` must be writable.
enum LdStatus ld_resolution_json(const struct LdResolution *r, char **out);

// Runs a CLI command on JSON text. `options` holds the flags as a JSON
// object (`delta`, `seed`, `field`, `levels`, `template`, `epsilon`,
// `config`, `order`, `check_spairs`, `k`) and may be null. The output
// document, or the error object on failure, is written to `out`.
//
// # Safety
// `command` and `input` must be NUL-terminated; `options` may be null;
// `out` must be writable.
enum LdStatus ld_run_json(const char *command, const char *options, const char *input, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LATDEFORM_H */
