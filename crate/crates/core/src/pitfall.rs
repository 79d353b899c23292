//! Deforming the exponents of an arbitrary generating set need not give a
//! lattice ideal. For `I_k = ⟨x0^k x2 x3 − x1^{k+2}, x1^k x0 x3 − x2^{k+2},
//! x2^k x1 x0 − x3^{k+2}⟩` the binomial `x1² x2^{k+1} − x0^{k+1} x3²` lies in
//! the saturation but not in `I_k`.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exact::{BigRat, ExactMatrix, Lattice};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PitfallReport {
    pub k: i64,
    /// `(positive term, negative term)` exponents of each generator.
    pub generators: Vec<(Vec<i64>, Vec<i64>)>,
    pub witness: Vec<i64>,
    /// Coefficients of the witness in terms of the generator exponents.
    pub coefficients: Vec<BigRat>,
    pub in_lattice: bool,
    pub monomial: Vec<i64>,
    /// For each generator, whether its leading (first) term divides `monomial`.
    pub leading_divides: Vec<bool>,
    /// Whether any of the six terms divides `monomial`.
    pub any_term_divides: bool,
}

impl PitfallReport {
    /// Membership holds and no term divides, so `I_k` is not saturated.
    pub fn not_saturated(&self) -> bool {
        self.in_lattice && !self.any_term_divides && self.leading_divides.iter().all(|d| !d)
    }
}

fn divides(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

pub fn pitfall_demo(k: i64) -> Result<PitfallReport> {
    if k < 1 {
        return Err(Error::InvalidInput(format!("k must be positive, got {k}")));
    }
    let generators = vec![
        (vec![k, 0, 1, 1], vec![0, k + 2, 0, 0]),
        (vec![1, k, 0, 1], vec![0, 0, k + 2, 0]),
        (vec![1, 1, k, 0], vec![0, 0, 0, k + 2]),
    ];
    let exps: Vec<Vec<BigInt>> = generators
        .iter()
        .map(|(p, n)| p.iter().zip(n).map(|(a, b)| BigInt::from(a - b)).collect())
        .collect();
    let witness = vec![-k - 1, 2, k + 1, -2];
    let monomial = vec![0, 2, k + 1, 0];

    let lattice = Lattice::from_generators(&exps)?;
    let w: Vec<BigInt> = witness.iter().map(|&v| BigInt::from(v)).collect();
    let in_lattice = lattice.member(&w);

    // Generators are independent, so the combination is unique.
    let proj: Vec<Vec<BigInt>> = exps.iter().map(|r| r[1..].to_vec()).collect();
    let target: Vec<BigRat> = w[1..].iter().cloned().map(BigRat::from_integer).collect();
    let coefficients = ExactMatrix::from_int_rows(&proj)?.inverse()?.left_mul(&target);

    let leading_divides = generators.iter().map(|(p, _)| divides(p, &monomial)).collect();
    let any_term_divides = generators
        .iter()
        .any(|(p, n)| divides(p, &monomial) || divides(n, &monomial));
    Ok(PitfallReport {
        k,
        generators,
        witness,
        coefficients,
        in_lattice,
        monomial,
        leading_divides,
        any_term_divides,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_k() {
        for k in 1..=6 {
            let r = pitfall_demo(k).unwrap();
            assert!(r.in_lattice, "k={k}");
            assert!(r.coefficients.iter().all(|c| c.is_integer()));
            assert!(r.not_saturated());
        }
    }

    #[test]
    fn witness_is_the_stated_combination() {
        let r = pitfall_demo(3).unwrap();
        let mut acc = vec![BigRat::from_integer(0.into()); 4];
        for ((p, n), c) in r.generators.iter().zip(&r.coefficients) {
            for t in 0..4 {
                acc[t] += c * BigRat::from_integer((p[t] - n[t]).into());
            }
        }
        let want: Vec<BigRat> = r.witness.iter().map(|&v| BigRat::from_integer(v.into())).collect();
        assert_eq!(acc, want);
    }

    #[test]
    fn rejects_nonpositive_k() {
        assert!(pitfall_demo(0).is_err());
    }
}
