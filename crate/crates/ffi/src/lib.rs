//! C ABI over `latdeform`. Objects live behind opaque handles that the
//! caller frees with the matching `*_free`. Every fallible call returns an
//! [`LdStatus`]; the message of the last failure on the calling thread is
//! available from [`ld_last_error`]. Strings returned by the library are
//! freed with [`ld_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use latdeform::cli::{parse_order, run, Command, PipelineConfig};
use latdeform::exact::{BigRat, Lattice};
use latdeform::laplacianize::{laplacianize, LaplacianPresentation};
use latdeform::pipeline::{resolve_presentation, Resolution, ResolveOptions};
use latdeform::digraph::LaplacianMatrix;
use latdeform::scarf::Field;
use latdeform::Error;
use num_bigint::BigInt;
use serde_json::Value;

/// Status codes. Library errors use the same numbers as the CLI exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LdStatus {
    Ok = 0,
    Internal = 1,
    InvalidInput = 2,
    NotStronglyConnected = 3,
    NotFiniteIndex = 4,
    NonGeneric = 5,
    TemplateMismatch = 6,
    NotAResolution = 7,
    NullPointer = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

impl From<&Error> for LdStatus {
    fn from(e: &Error) -> Self {
        match e.exit_code() {
            2 => LdStatus::InvalidInput,
            3 => LdStatus::NotStronglyConnected,
            4 => LdStatus::NotFiniteIndex,
            5 => LdStatus::NonGeneric,
            6 => LdStatus::TemplateMismatch,
            7 => LdStatus::NotAResolution,
            _ => LdStatus::Internal,
        }
    }
}

/// A finite-index sublattice of `A_n`.
pub struct LdLattice(Lattice);

/// A Laplacian presentation `(Q, Σ)`.
pub struct LdPresentation(LaplacianPresentation);

/// Output of the full pipeline.
pub struct LdResolution {
    inner: Resolution,
    delta: BigRat,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), (LdStatus, String)>) -> LdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => LdStatus::Ok,
        Ok(Err((s, m))) => {
            set_error(m);
            s
        }
        Err(_) => {
            set_error("panic inside latdeform".into());
            LdStatus::Panic
        }
    }
}

fn lib(e: Error) -> (LdStatus, String) {
    ((&e).into(), e.to_string())
}

fn null(what: &str) -> (LdStatus, String) {
    (LdStatus::NullPointer, format!("{what} is null"))
}

fn copy_out<T: Copy>(src: &[T], out: *mut T, cap: usize, len: *mut usize) -> Result<(), (LdStatus, String)> {
    if !len.is_null() {
        unsafe { *len = src.len() };
    }
    if src.len() > cap {
        return Err((LdStatus::BufferTooSmall, format!("need room for {} values", src.len())));
    }
    if out.is_null() && !src.is_empty() {
        return Err(null("output buffer"));
    }
    if !src.is_empty() {
        unsafe { ptr::copy_nonoverlapping(src.as_ptr(), out, src.len()) };
    }
    Ok(())
}

fn to_i64(v: &BigInt) -> Result<i64, (LdStatus, String)> {
    i64::try_from(v).map_err(|_| (LdStatus::Internal, format!("{v} does not fit in 64 bits")))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// Message of the last failed call on this thread, or null. Owned by the
/// library; valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ld_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ld_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ld_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Lattice generated by `nrows` row vectors of length `ncols`, stored
/// row-major in `rows`. Each row must sum to zero and the generators must
/// span a finite-index sublattice of `A_{ncols-1}`.
///
/// # Safety
/// `rows` must point to `nrows * ncols` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ld_lattice_new(rows: *const i64, nrows: usize, ncols: usize, out: *mut *mut LdLattice) -> LdStatus {
    guard(|| {
        if rows.is_null() {
            return Err(null("rows"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let flat = std::slice::from_raw_parts(rows, nrows * ncols);
        let gens: Vec<Vec<BigInt>> = flat.chunks(ncols.max(1)).map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        let l = Lattice::from_generators(&gens).map_err(lib)?;
        *out = Box::into_raw(Box::new(LdLattice(l)));
        Ok(())
    })
}

/// # Safety
/// `l` must be null or a handle from [`ld_lattice_new`].
#[no_mangle]
pub unsafe extern "C" fn ld_lattice_free(l: *mut LdLattice) {
    if !l.is_null() {
        drop(Box::from_raw(l));
    }
}

/// Index of the lattice in `A_n`.
///
/// # Safety
/// `l` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ld_lattice_index(l: *const LdLattice, out: *mut i64) -> LdStatus {
    guard(|| {
        let l = l.as_ref().ok_or_else(|| null("lattice"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = to_i64(&l.0.index())?;
        Ok(())
    })
}

/// # Safety
/// `l` must be a live lattice handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ld_laplacianize(l: *const LdLattice, out: *mut *mut LdPresentation) -> LdStatus {
    guard(|| {
        let l = l.as_ref().ok_or_else(|| null("lattice"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let p = laplacianize(&l.0).map_err(lib)?;
        *out = Box::into_raw(Box::new(LdPresentation(p)));
        Ok(())
    })
}

/// Presentation from an integral Laplacian, `size × size`, row-major.
///
/// # Safety
/// `entries` must point to `size * size` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ld_presentation_from_laplacian(
    entries: *const i64,
    size: usize,
    out: *mut *mut LdPresentation,
) -> LdStatus {
    guard(|| {
        if entries.is_null() {
            return Err(null("entries"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let flat = std::slice::from_raw_parts(entries, size * size);
        let rows: Vec<Vec<i64>> = flat.chunks(size.max(1)).map(|r| r.to_vec()).collect();
        let q = LaplacianMatrix::from_i64_rows(&rows).map_err(lib)?;
        let p = LaplacianPresentation::from_laplacian(q).map_err(lib)?;
        *out = Box::into_raw(Box::new(LdPresentation(p)));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a presentation handle.
#[no_mangle]
pub unsafe extern "C" fn ld_presentation_free(p: *mut LdPresentation) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Number of vertices `n + 1`, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live presentation handle.
#[no_mangle]
pub unsafe extern "C" fn ld_presentation_size(p: *const LdPresentation) -> usize {
    p.as_ref().map_or(0, |p| p.0.q.size())
}

/// Copies the Laplacian row-major into `out` (capacity `cap`) and writes
/// the entry count to `len`.
///
/// # Safety
/// `p` must be live; `out` must hold `cap` values; `len` may be null.
#[no_mangle]
pub unsafe extern "C" fn ld_presentation_laplacian(
    p: *const LdPresentation,
    out: *mut i64,
    cap: usize,
    len: *mut usize,
) -> LdStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("presentation"))?;
        let rows = p.0.q.integer_rows().map_err(lib)?;
        copy_out(&rows.concat(), out, cap, len)
    })
}

/// Copies `Σ` into `out`.
///
/// # Safety
/// As for [`ld_presentation_laplacian`].
#[no_mangle]
pub unsafe extern "C" fn ld_presentation_sigma(
    p: *const LdPresentation,
    out: *mut i64,
    cap: usize,
    len: *mut usize,
) -> LdStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("presentation"))?;
        let s: Vec<i64> = p.0.sigma.entries().iter().map(to_i64).collect::<Result<_, _>>()?;
        copy_out(&s, out, cap, len)
    })
}

/// Runs deformation, Scarf complex, relabeling, exactness and minimization
/// over the rationals with `δ = delta_num / delta_den`.
///
/// # Safety
/// `p` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ld_resolve(
    p: *const LdPresentation,
    delta_num: i64,
    delta_den: i64,
    seed: u64,
    out: *mut *mut LdResolution,
) -> LdStatus {
    guard(|| {
        let p = p.as_ref().ok_or_else(|| null("presentation"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        if delta_den == 0 || (delta_num > 0) != (delta_den > 0) || delta_num == 0 {
            return Err((LdStatus::InvalidInput, "delta must be a positive fraction".into()));
        }
        let delta = BigRat::new(delta_num.into(), delta_den.into());
        let opts = ResolveOptions {
            delta: delta.clone(),
            field: Field::Rationals,
            seed,
        };
        let inner = resolve_presentation(p.0.clone(), &opts).map_err(lib)?;
        *out = Box::into_raw(Box::new(LdResolution { inner, delta }));
        Ok(())
    })
}

/// # Safety
/// `r` must be null or a resolution handle.
#[no_mangle]
pub unsafe extern "C" fn ld_resolution_free(r: *mut LdResolution) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Ranks of the free modules of the degenerated Scarf complex.
///
/// # Safety
/// `r` must be live; `out` must hold `cap` values; `len` may be null.
#[no_mangle]
pub unsafe extern "C" fn ld_resolution_ranks(r: *const LdResolution, out: *mut usize, cap: usize, len: *mut usize) -> LdStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("resolution"))?;
        copy_out(&r.inner.complex.ranks(), out, cap, len)
    })
}

/// Betti numbers after minimization.
///
/// # Safety
/// As for [`ld_resolution_ranks`].
#[no_mangle]
pub unsafe extern "C" fn ld_resolution_betti(r: *const LdResolution, out: *mut usize, cap: usize, len: *mut usize) -> LdStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("resolution"))?;
        copy_out(&r.inner.betti, out, cap, len)
    })
}

/// 1 if the complex passed the exactness check, 0 if not, -1 for null.
///
/// # Safety
/// `r` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn ld_resolution_is_exact(r: *const LdResolution) -> i32 {
    r.as_ref().map_or(-1, |r| i32::from(r.inner.exact))
}

/// The resolution as the JSON document printed by `latdeform resolve`.
/// Free with [`ld_string_free`].
///
/// # Safety
/// `r` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ld_resolution_json(r: *const LdResolution, out: *mut *mut c_char) -> LdStatus {
    guard(|| {
        let r = r.as_ref().ok_or_else(|| null("resolution"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let v = latdeform::json::resolution(&r.inner, &r.delta).map_err(lib)?;
        *out = c_string(v.to_string());
        Ok(())
    })
}

fn options_config(command: &str, opts: &Value) -> Result<PipelineConfig, Error> {
    use latdeform::json::{parse_rational, read_i64, read_vector};
    let bad = |m: &str| Error::InvalidInput(m.to_string());
    let get = |k: &str| opts.get(k).filter(|v| !v.is_null());
    let cmd = match command {
        "laplacianize" => Command::Laplacianize,
        "superstabilize" => Command::Superstabilize {
            config: read_vector(get("config").ok_or_else(|| bad("superstabilize needs \"config\""))?)?,
        },
        "grobner" => Command::Grobner {
            order: parse_order(get("order").and_then(Value::as_str).unwrap_or("standard"))?,
            check_spairs: get("check_spairs").and_then(Value::as_bool).unwrap_or(false),
        },
        "deform" => Command::Deform {
            levels: get("levels").map(read_i64).transpose()?.map(|l| l.max(0) as usize),
        },
        "resolve" => Command::Resolve,
        "demo-pitfall" => Command::DemoPitfall {
            k: read_i64(get("k").ok_or_else(|| bad("demo-pitfall needs \"k\""))?)?,
        },
        other => return Err(Error::InvalidInput(format!("unknown command {other:?}"))),
    };
    let mut cfg = PipelineConfig::new(cmd);
    if let Some(d) = get("delta") {
        cfg.delta = latdeform::json::read_rational(d)?;
    }
    if let Some(s) = get("seed") {
        cfg.seed = u64::try_from(read_i64(s)?).map_err(|_| bad("seed must be nonnegative"))?;
    }
    if let Some(f) = get("field").and_then(Value::as_str) {
        cfg.field = Field::parse(f)?;
    }
    if let Some(t) = get("template").and_then(Value::as_array) {
        for step in t {
            let v = read_vector(step)?;
            if v.len() != 2 || v.iter().any(|&x| x < 0) {
                return Err(bad("template steps are [i, j]"));
            }
            cfg.template.push((v[0] as usize, v[1] as usize));
        }
    }
    if let Some(e) = get("epsilon").and_then(Value::as_array) {
        for x in e {
            cfg.epsilons.push(match x {
                Value::String(s) => parse_rational(s)?,
                other => latdeform::json::read_rational(other)?,
            });
        }
    }
    Ok(cfg)
}

/// Runs a CLI command on JSON text. `options` holds the flags as a JSON
/// object (`delta`, `seed`, `field`, `levels`, `template`, `epsilon`,
/// `config`, `order`, `check_spairs`, `k`) and may be null. The output
/// document, or the error object on failure, is written to `out`.
///
/// # Safety
/// `command` and `input` must be NUL-terminated; `options` may be null;
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ld_run_json(
    command: *const c_char,
    options: *const c_char,
    input: *const c_char,
    out: *mut *mut c_char,
) -> LdStatus {
    guard(|| {
        if command.is_null() {
            return Err(null("command"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = |p: *const c_char| -> Result<Value, (LdStatus, String)> {
            if p.is_null() {
                return Ok(Value::Null);
            }
            let s = CStr::from_ptr(p)
                .to_str()
                .map_err(|_| (LdStatus::InvalidInput, "input is not UTF-8".to_string()))?;
            serde_json::from_str(s).map_err(|e| (LdStatus::InvalidInput, format!("malformed JSON: {e}")))
        };
        let command = CStr::from_ptr(command)
            .to_str()
            .map_err(|_| (LdStatus::InvalidInput, "command is not UTF-8".to_string()))?;
        let opts = text(options)?;
        let doc = text(input)?;
        let cfg = match options_config(command, &opts) {
            Ok(c) => c,
            Err(e) => {
                *out = c_string(latdeform::json::error(&e).to_string());
                return Err(lib(e));
            }
        };
        let (v, code) = run(&cfg, &doc);
        *out = c_string(v.to_string());
        if code == 0 {
            Ok(())
        } else {
            let status = match code {
                2 => LdStatus::InvalidInput,
                3 => LdStatus::NotStronglyConnected,
                4 => LdStatus::NotFiniteIndex,
                5 => LdStatus::NonGeneric,
                6 => LdStatus::TemplateMismatch,
                7 => LdStatus::NotAResolution,
                _ => LdStatus::Internal,
            };
            Err((status, v["error"]["message"].as_str().unwrap_or("error").to_string()))
        }
    })
}
