//! Presenting a finite-index sublattice of `A_n` as the row lattice of the
//! Laplacian of a strongly connected digraph with `Σ_0 = 1`.
//!
//! Construction: project `L` to coordinates `1..n`, search for a basis `M` of
//! the projection that is a Z-matrix (positive diagonal, nonpositive
//! off-diagonal) with nonnegative row sums, homogenize its rows, and prepend
//! `−σᵀ·rows` where `σ` is the least positive script vector of `M`. Then
//! `(1, σ)` spans the left kernel, so the digraph is strongly connected.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::digraph::{left_kernel_sigma, LaplacianMatrix, SigmaVector, WeightedDigraph};
use crate::error::{Error, Result};
use crate::exact::{
    bareiss_determinant, enumerate_triangular, hnf, vec_to_i64, ExactMatrix, Lattice,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplacianPresentation {
    pub graph: WeightedDigraph,
    pub q: LaplacianMatrix,
    pub sigma: SigmaVector,
    /// Rows `1..n` of `q` restricted to coordinates `1..n`.
    pub reduced_basis: Vec<Vec<BigInt>>,
}

impl LaplacianPresentation {
    /// Wraps an integral Laplacian whose left kernel vector has `Σ_0 = 1`.
    pub fn from_laplacian(q: LaplacianMatrix) -> Result<Self> {
        if !q.is_integral() {
            return Err(Error::InvalidInput("Laplacian must be integral".into()));
        }
        let sigma = left_kernel_sigma(&q)?;
        if sigma.entries()[0] != BigInt::from(1) {
            return Err(Error::InvalidInput(format!(
                "left kernel vector must have first entry 1, got {}",
                sigma.entries()[0]
            )));
        }
        let rows = q.matrix().to_int_rows().expect("checked integral");
        let reduced_basis = rows[1..].iter().map(|r| r[1..].to_vec()).collect();
        Ok(LaplacianPresentation {
            graph: q.digraph(),
            q,
            sigma,
            reduced_basis,
        })
    }

    pub fn dim(&self) -> usize {
        self.q.size() - 1
    }

    /// Rows `1..n` of `q`: a basis of the presented lattice.
    pub fn basis_rows(&self) -> Vec<Vec<BigInt>> {
        let rows = self.q.matrix().to_int_rows().expect("presentations are integral");
        rows[1..].to_vec()
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::from_basis(self.basis_rows()).expect("rows 1..n of a presentation form a basis")
    }
}

pub fn laplacianize(l: &Lattice) -> Result<LaplacianPresentation> {
    let n = l.rank();
    let index = l
        .index()
        .to_i64()
        .ok_or_else(|| Error::Overflow("lattice index".into()))?;
    let projected = l.projected_basis();
    let h = hnf(&projected);
    let h64: Vec<Vec<i64>> = h.basis().iter().map(|r| vec_to_i64(r)).collect::<Result<_>>()?;

    let mut bound = index.max(1);
    let m = loop {
        if let Some(m) = sign_patterned_basis(&h64, n, index, bound) {
            break m;
        }
        bound = bound
            .checked_mul(2)
            .ok_or_else(|| Error::Overflow("candidate search bound".into()))?;
    };

    let reduced: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let sigma_tail = script_vector(&reduced)?;
    let q = homogenize(&reduced, &sigma_tail)?;
    let pres = LaplacianPresentation::from_laplacian(q)?;
    debug_assert_eq!(&pres.sigma.entries()[1..], &sigma_tail[..]);
    Ok(pres)
}

/// Full Laplacian whose rows `1..n` are the homogenized rows of `reduced` and
/// whose row 0 is `−Σ σ_i r_i`.
pub fn homogenize(reduced: &[Vec<BigInt>], sigma: &[BigInt]) -> Result<LaplacianMatrix> {
    let n = reduced.len();
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for r in reduced {
        let mut full = vec![-r.iter().sum::<BigInt>()];
        full.extend(r.iter().cloned());
        rows.push(full);
    }
    let mut row0 = vec![BigInt::zero(); n + 1];
    for (s, r) in sigma.iter().zip(&rows) {
        for (o, x) in row0.iter_mut().zip(r) {
            *o -= s * x;
        }
    }
    rows.insert(0, row0);
    LaplacianMatrix::new(ExactMatrix::from_int_rows(&rows)?)
}

/// Least strictly positive integer vector `σ` with `σᵀ·m ≥ 0`.
///
/// `m` must be a nonsingular Z-matrix with nonnegative row sums. The feasible
/// set is closed under componentwise minimum, so raising coordinates from the
/// all-ones vector until every column is nonnegative reaches its least
/// element.
pub fn script_vector(m: &[Vec<BigInt>]) -> Result<Vec<BigInt>> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("script vector needs a square matrix".into()));
    }
    for (i, r) in m.iter().enumerate() {
        if r.iter().enumerate().any(|(j, x)| i != j && x.is_positive()) || r.iter().sum::<BigInt>().is_negative() {
            return Err(Error::InvalidInput("matrix is not a Z-matrix with nonnegative row sums".into()));
        }
    }
    if bareiss_determinant(m).is_zero() {
        return Err(Error::Singular);
    }
    let mut sigma = vec![BigInt::from(1); n];
    loop {
        let mut changed = false;
        for j in 0..n {
            let rest: BigInt = (0..n).filter(|&i| i != j).map(|i| &sigma[i] * &m[i][j]).sum();
            // need sigma_j * m_jj >= -rest
            let need = Integer::div_ceil(&-rest, &m[j][j]);
            if need > sigma[j] {
                sigma[j] = need;
                changed = true;
            }
        }
        if !changed {
            return Ok(sigma);
        }
    }
}

/// Depth-first search for one sign-patterned candidate per pivot forming a
/// basis (|det| = index). Candidates are ordered by 1-norm, then
/// lexicographically; partial selections must stay primitive in the lattice.
fn sign_patterned_basis(h: &[Vec<i64>], n: usize, index: i64, bound: i64) -> Option<Vec<Vec<i64>>> {
    let candidates: Vec<Vec<(Vec<i64>, Vec<i64>)>> = (0..n)
        .map(|pivot| {
            let mut out = Vec::new();
            enumerate_triangular(
                h,
                &mut |j, _| Some(if j == pivot { (1, bound) } else { (-bound, 0) }),
                &mut |p, c| {
                    if p.iter().sum::<i64>() >= 0 {
                        out.push((p.to_vec(), c.to_vec()));
                    }
                },
            );
            out.sort_by(|a, b| {
                let na: i64 = a.0.iter().map(|x| x.abs()).sum();
                let nb: i64 = b.0.iter().map(|x| x.abs()).sum();
                na.cmp(&nb).then_with(|| a.0.cmp(&b.0))
            });
            out
        })
        .collect();
    if candidates.iter().any(Vec::is_empty) {
        return None;
    }
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    if select(&candidates, &mut chosen, index) {
        Some(chosen.iter().enumerate().map(|(i, &k)| candidates[i][k].0.clone()).collect())
    } else {
        None
    }
}

fn select(candidates: &[Vec<(Vec<i64>, Vec<i64>)>], chosen: &mut Vec<usize>, index: i64) -> bool {
    let depth = chosen.len();
    if depth == candidates.len() {
        let rows: Vec<Vec<BigInt>> = chosen
            .iter()
            .enumerate()
            .map(|(i, &k)| candidates[i][k].0.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        return bareiss_determinant(&rows).abs() == BigInt::from(index);
    }
    for k in 0..candidates[depth].len() {
        chosen.push(k);
        let coeffs: Vec<Vec<i64>> = chosen
            .iter()
            .enumerate()
            .map(|(i, &c)| candidates[i][c].1.clone())
            .collect();
        if is_primitive_system(&coeffs) && select(candidates, chosen, index) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Whether the rows span a saturated sublattice of `Z^n`, i.e. extend to a
/// unimodular basis. Equivalent to the columns generating `Z^k`.
fn is_primitive_system(rows: &[Vec<i64>]) -> bool {
    let k = rows.len();
    let cols: Vec<Vec<BigInt>> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| BigInt::from(r[c])).collect())
        .collect();
    let h = hnf(&cols);
    h.rank == k && (0..k).all(|i| h.hermite[i][i] == BigInt::from(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::left_kernel_sigma;
    use crate::exact::{int, BigRat};

    fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn check_contract(l: &Lattice, p: &LaplacianPresentation) {
        assert_eq!(&p.lattice(), l);
        assert!(p.graph.is_strongly_connected());
        let sigma = left_kernel_sigma(&p.q).unwrap();
        assert_eq!(sigma, p.sigma);
        assert_eq!(sigma.entries()[0], int(1));
        let rows = p.q.matrix().to_int_rows().unwrap();
        assert_eq!(Lattice::from_generators(&rows).unwrap(), *l);
        for (i, r) in p.reduced_basis.iter().enumerate() {
            assert!(r[i].is_positive());
            assert!(r.iter().enumerate().all(|(j, x)| i == j || !x.is_positive()));
            assert!(!r.iter().sum::<BigInt>().is_negative());
        }
        // M-matrix certificate
        let inv = ExactMatrix::from_int_rows(&p.reduced_basis).unwrap().inverse().unwrap();
        assert!(inv.entries().all(|v| *v >= BigRat::zero()));
    }

    #[test]
    fn k3_lattice() {
        let l = Lattice::from_i64_generators(&[vec![2, -1, -1], vec![-1, 2, -1]]).unwrap();
        let p = laplacianize(&l).unwrap();
        check_contract(&l, &p);
        assert_eq!(p.sigma.entries(), &[int(1), int(1), int(1)]);
    }

    #[test]
    fn a1_lattice() {
        let l = Lattice::from_i64_generators(&[vec![1, -1]]).unwrap();
        let p = laplacianize(&l).unwrap();
        check_contract(&l, &p);
        assert_eq!(p.q, LaplacianMatrix::from_i64_rows(&[vec![1, -1], vec![-1, 1]]).unwrap());
        assert_eq!(p.sigma.entries(), &[int(1), int(1)]);
    }

    #[test]
    fn example_lattice_from_binomial_exponents() {
        // exponent vectors of the eleven generators
        let gens = vec![
            vec![-1, -1, 2],
            vec![-2, -2, 4],
            vec![-3, -3, 6],
            vec![-1, 3, -2],
            vec![-2, 2, 0],
            vec![-3, 1, 2],
            vec![-4, 0, 4],
            vec![-2, 6, -4],
            vec![-3, 5, -2],
            vec![-4, 4, 0],
            vec![-5, 3, 2],
        ];
        let l = Lattice::from_i64_generators(&gens).unwrap();
        let reference = Lattice::from_i64_generators(&[vec![5, -3, -2], vec![-1, 3, -2], vec![-1, -1, 2]]).unwrap();
        assert_eq!(l, reference);
        let p = laplacianize(&l).unwrap();
        check_contract(&l, &p);
    }

    #[test]
    fn script_vector_examples() {
        assert_eq!(script_vector(&big(&[vec![1]])).unwrap(), vec![int(1)]);
        assert_eq!(script_vector(&big(&[vec![2, -1], vec![-1, 2]])).unwrap(), vec![int(1), int(1)]);
        // least script of the example's reduced Laplacian
        let m = big(&[vec![3, -2], vec![-1, 2]]);
        let s = script_vector(&m).unwrap();
        assert_eq!(s, vec![int(1), int(1)]);
        // the kernel-derived script (2,3) is feasible but not least
        let feasible = |s: &[i64]| (0..2).all(|j| (0..2).map(|i| s[i] * [[3, -2], [-1, 2]][i][j]).sum::<i64>() >= 0);
        assert!(feasible(&[2, 3]));
        assert!(feasible(&[1, 1]));
        // brute-force least element over a small box
        let least = (1..=4)
            .flat_map(|a| (1..=4).map(move |b| [a, b]))
            .filter(|s| feasible(s))
            .min_by_key(|s| s[0] + s[1])
            .unwrap();
        assert_eq!(least, [1, 1]);
        assert_eq!(script_vector(&big(&[vec![1, -1], vec![-1, 1]])), Err(Error::Singular));
    }

    #[test]
    fn kernel_script_of_example_laplacian() {
        let q = LaplacianMatrix::from_i64_rows(&[vec![5, -3, -2], vec![-1, 3, -2], vec![-1, -1, 2]]).unwrap();
        let p = LaplacianPresentation::from_laplacian(q.clone()).unwrap();
        assert_eq!(&p.sigma.entries()[1..], &[int(2), int(3)]);
        assert_eq!(homogenize(&p.reduced_basis, &p.sigma.entries()[1..]).unwrap(), q);
    }

    #[test]
    fn lower_rank_is_rejected() {
        assert!(matches!(
            Lattice::from_i64_generators(&[vec![1, 1, -1, -1]]),
            Err(Error::NotFiniteIndex(_))
        ));
    }

    #[test]
    fn random_a3_sublattices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..15 {
            let n = rng.gen_range(2..=3);
            let gens: Vec<Vec<i64>> = (0..n + 1)
                .map(|_| {
                    let mut v: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
                    v.insert(0, -v.iter().sum::<i64>());
                    v
                })
                .collect();
            let Ok(l) = Lattice::from_i64_generators(&gens) else { continue };
            if l.index() > int(12) {
                continue;
            }
            let p = laplacianize(&l).unwrap();
            check_contract(&l, &p);
        }
    }
}
