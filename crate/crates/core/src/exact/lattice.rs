use num_bigint::BigInt;
use num_rational::BigRational as BigRat;
use num_traits::{Signed, Zero};

use super::{bareiss_determinant, hnf, ExactMatrix};
use crate::error::{Error, Result};

/// A full-rank sublattice of the root lattice `A_n ⊂ Z^{n+1}`, stored by an
/// integer basis of `n` rows whose coordinates each sum to zero.
///
/// Dropping coordinate 0 is an isomorphism `A_n → Z^n`; all index and
/// membership computations go through that projection.
#[derive(Clone, Debug)]
pub struct Lattice {
    ambient_dim: usize,
    basis: Vec<Vec<BigInt>>,
}

fn check_rows(rows: &[Vec<BigInt>]) -> Result<usize> {
    let ambient = rows
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidInput("empty basis".into()))?;
    if ambient < 2 {
        return Err(Error::InvalidInput("ambient dimension must be at least 2".into()));
    }
    for row in rows {
        if row.len() != ambient {
            return Err(Error::InvalidInput("ragged basis rows".into()));
        }
        if !row.iter().sum::<BigInt>().is_zero() {
            return Err(Error::NotFiniteIndex(format!(
                "row {:?} does not sum to zero",
                row.iter().map(ToString::to_string).collect::<Vec<_>>()
            )));
        }
    }
    Ok(ambient)
}

/// Prepends the coordinate that makes a projected vector sum to zero.
pub(crate) fn lift(projected: &[BigInt]) -> Vec<BigInt> {
    let mut v = Vec::with_capacity(projected.len() + 1);
    v.push(-projected.iter().sum::<BigInt>());
    v.extend(projected.iter().cloned());
    v
}

impl Lattice {
    /// Builds a lattice from exactly `n` independent rows in `A_n`.
    pub fn from_basis(basis: Vec<Vec<BigInt>>) -> Result<Self> {
        let ambient = check_rows(&basis)?;
        if basis.len() != ambient - 1 {
            return Err(Error::NotFiniteIndex(format!(
                "expected {} basis rows, got {}",
                ambient - 1,
                basis.len()
            )));
        }
        let l = Lattice {
            ambient_dim: ambient,
            basis,
        };
        if bareiss_determinant(&l.projected_basis()).is_zero() {
            return Err(Error::NotFiniteIndex("basis rows are linearly dependent".into()));
        }
        Ok(l)
    }

    /// Builds the lattice spanned by an arbitrary generating set.
    pub fn from_generators(generators: &[Vec<BigInt>]) -> Result<Self> {
        let ambient = check_rows(generators)?;
        let projected: Vec<Vec<BigInt>> = generators.iter().map(|r| r[1..].to_vec()).collect();
        let h = hnf(&projected);
        if h.rank != ambient - 1 {
            return Err(Error::NotFiniteIndex(format!(
                "generators span rank {} but A_{} has rank {}",
                h.rank,
                ambient - 1,
                ambient - 1
            )));
        }
        Ok(Lattice {
            ambient_dim: ambient,
            basis: h.basis().iter().map(|r| lift(r)).collect(),
        })
    }

    pub fn from_i64_generators(generators: &[Vec<i64>]) -> Result<Self> {
        let g: Vec<Vec<BigInt>> = generators
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_generators(&g)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.ambient_dim - 1
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    pub fn projected_basis(&self) -> Vec<Vec<BigInt>> {
        self.basis.iter().map(|r| r[1..].to_vec()).collect()
    }

    /// Canonical fingerprint: the Hermite form of the projected basis.
    pub fn hermite_fingerprint(&self) -> Vec<Vec<BigInt>> {
        hnf(&self.projected_basis()).hermite
    }

    /// `[A_n : L]`.
    pub fn index(&self) -> BigInt {
        bareiss_determinant(&self.projected_basis()).abs()
    }

    pub fn member(&self, v: &[BigInt]) -> bool {
        v.len() == self.ambient_dim
            && v.iter().sum::<BigInt>().is_zero()
            && self.solve_in_basis(v).is_ok()
    }

    /// Integer coefficients `α` with `Σ α_k b_k = v`.
    pub fn solve_in_basis(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.ambient_dim || !v.iter().sum::<BigInt>().is_zero() {
            return Err(Error::NotMember);
        }
        let p = ExactMatrix::from_int_rows(&self.projected_basis())?;
        let target: Vec<BigRat> = v[1..].iter().cloned().map(BigRat::from_integer).collect();
        let coeffs = p.inverse()?.left_mul(&target);
        coeffs
            .iter()
            .map(|c| if c.is_integer() { Ok(c.to_integer()) } else { Err(Error::NotMember) })
            .collect()
    }

    /// `Σ c_k b_k`.
    pub fn combine(&self, coeffs: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.ambient_dim];
        for (c, row) in coeffs.iter().zip(&self.basis) {
            for (o, b) in out.iter_mut().zip(row) {
                *o += c * b;
            }
        }
        out
    }
}

impl PartialEq for Lattice {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.hermite_fingerprint() == other.hermite_fingerprint()
    }
}

impl Eq for Lattice {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| int(a)).collect()
    }

    #[test]
    fn index_examples() {
        let a2 = Lattice::from_i64_generators(&[vec![1, -1, 0], vec![0, 1, -1]]).unwrap();
        assert_eq!(a2.index(), int(1));
        let q = Lattice::from_i64_generators(&[vec![5, -3, -2], vec![-1, 3, -2], vec![-1, -1, 2]]).unwrap();
        assert_eq!(q.index(), int(4));
        let twice = Lattice::from_i64_generators(&[vec![2, -2, 0], vec![0, 2, -2]]).unwrap();
        assert_eq!(twice.index(), int(4));
    }

    #[test]
    fn rank_deficient_is_rejected() {
        let err = Lattice::from_i64_generators(&[vec![1, 1, -1, -1]]).unwrap_err();
        assert!(matches!(err, Error::NotFiniteIndex(_)));
        let err = Lattice::from_basis(vec![v(&[1, -1, 0]), v(&[2, -2, 0])]).unwrap_err();
        assert!(matches!(err, Error::NotFiniteIndex(_)));
    }

    #[test]
    fn membership() {
        let twice = Lattice::from_i64_generators(&[vec![2, -2, 0], vec![0, 2, -2]]).unwrap();
        assert!(twice.member(&v(&[0, 0, 0])));
        assert!(!twice.member(&v(&[1, -1, 0])));
        assert!(twice.member(&v(&[2, 0, -2])));
        assert!(!twice.member(&v(&[2, 0, -1])));
    }

    #[test]
    fn solve_examples() {
        let l = Lattice::from_basis(vec![v(&[-1, 3, -2]), v(&[-1, -1, 2])]).unwrap();
        assert_eq!(l.solve_in_basis(&v(&[-1, 3, -2])).unwrap(), v(&[1, 0]));
        assert_eq!(l.solve_in_basis(&v(&[-2, 2, 0])).unwrap(), v(&[1, 1]));
        assert_eq!(l.solve_in_basis(&v(&[1, -1, 0])), Err(Error::NotMember));
    }

    #[test]
    fn membership_agrees_with_bounded_search() {
        let l = Lattice::from_i64_generators(&[vec![3, -1, -2], vec![-1, 2, -1]]).unwrap();
        let basis: Vec<Vec<i64>> = vec![vec![3, -1, -2], vec![-1, 2, -1]];
        // det of projection is 5, so coefficients of a point with entries <= 4 stay within 10
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                let p = vec![-(a + b), a, b];
                let brute = (-10i64..=10).any(|s| {
                    (-10i64..=10).any(|t| (0..3).all(|k| s * basis[0][k] + t * basis[1][k] == p[k]))
                });
                assert_eq!(l.member(&v(&p)), brute, "point {p:?}");
            }
        }
    }

    #[test]
    fn generating_sets_agree() {
        let a = Lattice::from_i64_generators(&[vec![5, -3, -2], vec![-1, 3, -2], vec![-1, -1, 2]]).unwrap();
        let b = Lattice::from_basis(vec![v(&[-1, 3, -2]), v(&[-1, -1, 2])]).unwrap();
        assert_eq!(a, b);
        let c = Lattice::from_basis(vec![v(&[-1, 3, -2]), v(&[-2, -2, 4])]).unwrap();
        assert_ne!(a, c);
    }
}
