//! Scarf complexes, their relabeled degenerations and the resulting free
//! resolutions.

mod field;
mod monomial;
mod periodic;
mod resolution;

pub use field::{Field, Poly};
pub use monomial::{lcm_poset, scarf_complex_monomial, LcmPoset, MonomialIdeal, MonomialScarf};
pub use periodic::{canonical, scarf_complex_laplacian, scarf_complex_lattice, sweep_edges, PointFinder, ScarfQuotient};
pub use resolution::{
    check_exactness, free_complex, minimize_complex, relabel_degenerate, subcomplex_below, test_degrees, FreeComplex,
    LabelledComplex, LabelledFace, PolyMatrix, Relabeling,
};
