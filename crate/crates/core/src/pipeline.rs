//! End-to-end runs: Laplacian presentation, deformation, Scarf complex,
//! relabeling, free complex, exactness and minimization.

use crate::deformation::{apply_template, deform_laplacian, stable_sequence_from, DeformationResult};
use crate::digraph::LaplacianMatrix;
use crate::error::Result;
use crate::exact::{BigRat, Lattice};
use crate::groebner::{grobner_basis, initial_ideal_mingens, spanning_tree_order};
use crate::laplacianize::{laplacianize, LaplacianPresentation};
use crate::scarf::{
    check_exactness, free_complex, lcm_poset, minimize_complex, relabel_degenerate, scarf_complex_laplacian,
    scarf_complex_monomial, Field, FreeComplex, LabelledComplex, LcmPoset, MonomialIdeal, ScarfQuotient,
};

#[derive(Clone, Debug)]
pub struct ResolveOptions {
    pub delta: BigRat,
    pub field: Field,
    pub seed: u64,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions {
            delta: BigRat::from_integer(1.into()),
            field: Field::Rationals,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub presentation: LaplacianPresentation,
    pub deformation: DeformationResult,
    pub scarf: ScarfQuotient,
    pub quotient_homology: Vec<usize>,
    pub initial_ideal: MonomialIdeal,
    pub initial_scarf_f_vector: Vec<usize>,
    pub labelled: LabelledComplex,
    pub complex: FreeComplex,
    pub exact: bool,
    pub betti: Vec<usize>,
}

fn rows_i64(q: &LaplacianMatrix) -> Result<Vec<Vec<i64>>> {
    q.integer_rows()
}

/// Initial ideal of the deformed lattice ideal under the spanning-tree
/// grevlex order.
pub fn deformed_initial_ideal(def: &DeformationResult) -> Result<MonomialIdeal> {
    let scaled = def.scaled_laplacian();
    let ord = spanning_tree_order(&scaled.digraph())?;
    let gb = grobner_basis(&scaled, &def.sigma, &ord)?;
    MonomialIdeal::new(initial_ideal_mingens(&gb))
}

pub fn resolve_deformation(
    presentation: LaplacianPresentation,
    deformation: DeformationResult,
    opts: &ResolveOptions,
) -> Result<Resolution> {
    let scaled = deformation.scaled_laplacian();
    let scarf = scarf_complex_laplacian(&scaled, &deformation.sigma)?;
    let quotient_homology = scarf.homology_ranks(opts.field);
    let initial_ideal = deformed_initial_ideal(&deformation)?;
    let initial_scarf_f_vector = scarf_complex_monomial(&initial_ideal).f_vector();
    let base = rows_i64(&presentation.q)?[1..].to_vec();
    let gen = rows_i64(&scaled)?[1..].to_vec();
    let labelled = relabel_degenerate(&scarf, &base, &gen)?;
    let complex = free_complex(&labelled)?;
    let exact = check_exactness(&complex, &labelled, opts.field);
    let betti = minimize_complex(&complex, opts.field, Some(opts.seed))?;
    Ok(Resolution {
        presentation,
        deformation,
        scarf,
        quotient_homology,
        initial_ideal,
        initial_scarf_f_vector,
        labelled,
        complex,
        exact,
        betti,
    })
}

pub fn resolve_presentation(p: LaplacianPresentation, opts: &ResolveOptions) -> Result<Resolution> {
    let def = deform_laplacian(&p.q, &p.sigma, &opts.delta)?;
    resolve_deformation(p, def, opts)
}

pub fn resolve(l: &Lattice, opts: &ResolveOptions) -> Result<Resolution> {
    resolve_presentation(laplacianize(l)?, opts)
}

/// Resolution through an explicit deformation template.
pub fn resolve_with_template(
    p: LaplacianPresentation,
    template: &[(usize, usize)],
    epsilons: &[BigRat],
    opts: &ResolveOptions,
) -> Result<Resolution> {
    let def = apply_template(&p.q, &p.sigma, template, epsilons)?;
    resolve_deformation(p, def, opts)
}

#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub levels: Vec<DeformationResult>,
    pub posets: Vec<LcmPoset>,
    pub posets_isomorphic: bool,
    pub scarf_f_vectors: Vec<Vec<usize>>,
    /// Scarf complexes agree face by face in basis coordinates.
    pub scarf_identical: bool,
}

impl StabilityReport {
    pub fn stable(&self) -> bool {
        self.posets_isomorphic && self.scarf_identical
    }
}

pub fn stability(p: &LaplacianPresentation, delta: &BigRat, levels: usize) -> Result<StabilityReport> {
    let results = stable_sequence_from(&p.q, &p.sigma, delta, levels)?;
    let mut posets = Vec::new();
    let mut coords = Vec::new();
    let mut scarf_f_vectors = Vec::new();
    for r in &results {
        posets.push(lcm_poset(&deformed_initial_ideal(r)?));
        let sc = scarf_complex_laplacian(&r.scaled_laplacian(), &r.sigma)?;
        scarf_f_vectors.push(sc.f_vector());
        coords.push(sc.coefficient_faces()?);
    }
    let posets_isomorphic = posets.iter().all(|x| x.is_isomorphic(&posets[0]));
    let scarf_identical = coords.iter().all(|c| *c == coords[0]);
    Ok(StabilityReport {
        levels: results,
        posets,
        posets_isomorphic,
        scarf_f_vectors,
        scarf_identical,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn example() -> LaplacianPresentation {
        LaplacianPresentation::from_laplacian(
            LaplacianMatrix::from_i64_rows(&[vec![5, -3, -2], vec![-1, 3, -2], vec![-1, -1, 2]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn example_through_template() {
        let r = resolve_with_template(example(), &[(1, 2)], &[rat(1, 2)], &ResolveOptions::default()).unwrap();
        assert_eq!(r.scarf.f_vector(), vec![1, 3, 2]);
        assert_eq!(r.quotient_homology, vec![1, 2, 1]);
        assert_eq!(r.complex.ranks(), vec![1, 3, 2]);
        assert!(r.exact);
        assert_eq!(r.betti, vec![1, 2, 1]);
        assert_eq!(r.initial_scarf_f_vector, vec![3, 2]);
    }

    #[test]
    fn example_through_algorithm() {
        let r = resolve_presentation(example(), &ResolveOptions::default()).unwrap();
        assert_eq!(r.complex.ranks(), vec![1, 3, 2]);
        assert!(r.exact);
        assert_eq!(r.betti, vec![1, 2, 1]);
    }

    #[test]
    fn example_is_stable() {
        let rep = stability(&example(), &rat(1, 1), 3).unwrap();
        assert!(rep.stable(), "{:?}", rep.scarf_f_vectors);
    }
}
