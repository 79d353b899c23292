//! Deformation of a Laplacian lattice into a generic one by adding small
//! multiples of two-vertex cycle Laplacians, with exact step certificates.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::digraph::{cone_membership, left_kernel_sigma, LaplacianMatrix, SigmaVector};
use crate::error::{Error, Result};
use crate::exact::{dyadic_floor, int, lcm_of_denominators, rat, sqrt_decimal, BigRat, ExactMatrix, Lattice};
use crate::groebner::{box_points, genericity_violation};
use crate::laplacianize::laplacianize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationStep {
    pub r: usize,
    /// Laplacian before this step.
    pub q_r: LaplacianMatrix,
    pub lambda_r: BigRat,
    pub violation: Option<(Vec<i64>, usize)>,
    pub i: usize,
    pub j: usize,
    pub epsilon_r: BigRat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceBound {
    /// Squared Frobenius norm, exact.
    pub squared: BigRat,
    pub decimal: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeformationResult {
    pub q0: LaplacianMatrix,
    pub sigma: SigmaVector,
    pub q_gen: LaplacianMatrix,
    pub lambda: BigRat,
    pub steps: Vec<DeformationStep>,
    pub distance_bound: DistanceBound,
}

impl DeformationResult {
    /// `λ·Q_gen` as an integral Laplacian.
    pub fn scaled_laplacian(&self) -> LaplacianMatrix {
        self.q_gen.scaled(&self.lambda).expect("positive scaling keeps a Laplacian")
    }

    pub fn template(&self) -> Vec<(usize, usize)> {
        self.steps.iter().map(|s| (s.i, s.j)).collect()
    }
}

/// Laplacian of the 2-cycle with edge `v_i → v_j` of weight `1/Σ_i` and
/// `v_j → v_i` of weight `1/Σ_j`.
pub fn hat_laplacian(i: usize, j: usize, sigma: &SigmaVector) -> Result<LaplacianMatrix> {
    let n = sigma.len();
    if i == j || i >= n || j >= n {
        return Err(Error::InvalidInput(format!("invalid vertex pair ({i},{j})")));
    }
    let s = sigma.as_rationals();
    let mut m = ExactMatrix::zeros(n, n);
    let wi = BigRat::one() / &s[i];
    let wj = BigRat::one() / &s[j];
    m.set(i, i, wi.clone());
    m.set(i, j, -wi);
    m.set(j, j, wj.clone());
    m.set(j, i, -wj);
    LaplacianMatrix::new(m)
}

/// Smallest `j` with `x_j/Σ_j ≠ x_i/Σ_i`.
pub fn choose_j(x: &[i64], i: usize, sigma: &SigmaVector) -> Result<usize> {
    let s = sigma.as_rationals();
    let ratio = |k: usize| BigRat::from_integer(int(x[k])) / &s[k];
    let target = ratio(i);
    (0..x.len())
        .find(|&k| ratio(k) != target)
        .ok_or_else(|| Error::InvalidInput("x is a multiple of Σ".into()))
}

fn transpose_column(q: &LaplacianMatrix, y: &[i64], k: usize) -> BigRat {
    let mut s = BigRat::zero();
    for (r, &yr) in y.iter().enumerate() {
        if yr != 0 {
            s += q.get(r, k) * BigRat::from_integer(int(yr));
        }
    }
    s
}

fn entrywise_l1(q: &LaplacianMatrix) -> BigRat {
    q.matrix().entries().map(|v| v.abs()).sum()
}

/// The term `δ / (|Q̂|₁ · (n+1) · Π Σ_s)`.
pub fn delta_term(q_hat: &LaplacianMatrix, sigma: &SigmaVector, delta: &BigRat) -> BigRat {
    let size = BigRat::from_integer(int(sigma.len() as i64));
    delta / (entrywise_l1(q_hat) * size * BigRat::from_integer(sigma.product()))
}

/// Half the minimum of the sign-flip ratios over the box and the δ-term.
pub fn epsilon_bound(
    q_r: &LaplacianMatrix,
    q_hat: &LaplacianMatrix,
    sigma: &SigmaVector,
    delta: &BigRat,
    i: usize,
    j: usize,
) -> Result<BigRat> {
    if !delta.is_positive() {
        return Err(Error::InvalidInput("δ must be positive".into()));
    }
    let mut best = delta_term(q_hat, sigma, delta);
    for y in box_points(&sigma.to_i64()?) {
        for k in [i, j] {
            let a = transpose_column(q_r, &y, k);
            let b = transpose_column(q_hat, &y, k);
            if (&a * &b).is_negative() {
                let ratio = -(a / b);
                if ratio < best {
                    best = ratio;
                }
            }
        }
    }
    Ok(best / rat(2, 1))
}

/// Least `λ` (lcm of denominators) making `λ·q` integral.
pub fn integral_scale(q: &ExactMatrix) -> (BigRat, Vec<Vec<BigInt>>) {
    let lambda = BigRat::from_integer(lcm_of_denominators(q.entries()));
    let scaled = q.scale(&lambda).to_int_rows().expect("scaled by the lcm of denominators");
    (lambda, scaled)
}

pub fn distance_upper_bound(b1: &ExactMatrix, b2: &ExactMatrix) -> Result<DistanceBound> {
    if b1.rows() != b2.rows() || b1.cols() != b2.cols() {
        return Err(Error::InvalidInput("basis shapes differ".into()));
    }
    let d = b1.sub(b2)?;
    let squared: BigRat = d.entries().map(|v| v * v).sum();
    let decimal = sqrt_decimal(&squared, 12);
    Ok(DistanceBound { squared, decimal })
}

fn reduced_basis(q: &LaplacianMatrix) -> ExactMatrix {
    let rows = (1..q.size()).map(|r| q.matrix().row(r).to_vec()).collect();
    ExactMatrix::from_rows(rows).expect("rows of equal length")
}

/// The stated bound `(n+1)·ΠΣ_s`. Checked by [`certify`], not enforced.
pub fn iteration_bound(sigma: &SigmaVector) -> BigInt {
    sigma.product() * int(sigma.len() as i64)
}

/// Number of pairs `(x, i)` with `0 ≤ x ≤ Σ`. Each step clears at least
/// one vanishing pair and creates none, so this caps the loop. It can
/// exceed [`iteration_bound`], e.g. for `Σ = 1`.
fn pair_count(sigma: &SigmaVector) -> BigInt {
    sigma.entries().iter().map(|s| s + 1).product::<BigInt>() * int(sigma.len() as i64)
}

fn finish(q0: LaplacianMatrix, sigma: SigmaVector, q_gen: LaplacianMatrix, steps: Vec<DeformationStep>) -> Result<DeformationResult> {
    let (lambda, _) = integral_scale(q_gen.matrix());
    let distance_bound = distance_upper_bound(&reduced_basis(&q0), &reduced_basis(&q_gen))?;
    Ok(DeformationResult {
        q0,
        sigma,
        q_gen,
        lambda,
        steps,
        distance_bound,
    })
}

/// Repair the lex-first violation until none remains. Each ε is the
/// largest power of two not exceeding the exact bound.
pub fn deform_laplacian(q0: &LaplacianMatrix, sigma: &SigmaVector, delta: &BigRat) -> Result<DeformationResult> {
    if !delta.is_positive() {
        return Err(Error::InvalidInput("δ must be positive".into()));
    }
    let limit = pair_count(sigma);
    let mut q = q0.clone();
    let mut steps = Vec::new();
    while let Some((x, i)) = genericity_violation(&q, sigma)? {
        if BigInt::from(steps.len()) >= limit {
            return Err(Error::NonGeneric(format!("no generic lattice after {limit} steps")));
        }
        let j = choose_j(&x, i, sigma)?;
        let hat = hat_laplacian(i, j, sigma)?;
        let eps = dyadic_floor(&epsilon_bound(&q, &hat, sigma, delta, i, j)?);
        let next = q.add_scaled(&hat, &eps)?;
        let (lambda_r, _) = integral_scale(q.matrix());
        steps.push(DeformationStep {
            r: steps.len(),
            q_r: q,
            lambda_r,
            violation: Some((x, i)),
            i,
            j,
            epsilon_r: eps,
        });
        q = next;
    }
    finish(q0.clone(), sigma.clone(), q, steps)
}

pub fn deform(l: &Lattice, delta: &BigRat) -> Result<DeformationResult> {
    let p = laplacianize(l)?;
    deform_laplacian(&p.q, &p.sigma, delta)
}

/// Add `ε_t·Q̂_{i_t,j_t}` for each template entry, recording the violation
/// present before each step. Fails with `NonGeneric` if the result still
/// has a violation.
pub fn apply_template(
    q0: &LaplacianMatrix,
    sigma: &SigmaVector,
    template: &[(usize, usize)],
    epsilons: &[BigRat],
) -> Result<DeformationResult> {
    if template.len() != epsilons.len() {
        return Err(Error::InvalidInput("one ε per template step is required".into()));
    }
    let mut q = q0.clone();
    let mut steps = Vec::new();
    for (r, (&(i, j), eps)) in template.iter().zip(epsilons).enumerate() {
        if !eps.is_positive() {
            return Err(Error::InvalidInput("ε must be positive".into()));
        }
        let hat = hat_laplacian(i, j, sigma)?;
        let violation = genericity_violation(&q, sigma)?;
        let next = q.add_scaled(&hat, eps)?;
        let (lambda_r, _) = integral_scale(q.matrix());
        steps.push(DeformationStep {
            r,
            q_r: q,
            lambda_r,
            violation,
            i,
            j,
            epsilon_r: eps.clone(),
        });
        q = next;
    }
    if let Some((x, i)) = genericity_violation(&q, sigma)? {
        return Err(Error::NonGeneric(format!("template leaves violation x={x:?}, i={i}")));
    }
    finish(q0.clone(), sigma.clone(), q, steps)
}

/// Deform once, then replay the same `(i, j)` template with every ε scaled
/// by `2^{-level}`. Each replayed step must meet the same violation and
/// stay under the exact ε bound.
pub fn stable_deformation_sequence(l: &Lattice, delta: &BigRat, levels: usize) -> Result<Vec<DeformationResult>> {
    let p = laplacianize(l)?;
    stable_sequence_from(&p.q, &p.sigma, delta, levels)
}

pub fn stable_sequence_from(
    q0: &LaplacianMatrix,
    sigma: &SigmaVector,
    delta: &BigRat,
    levels: usize,
) -> Result<Vec<DeformationResult>> {
    if levels < 2 {
        return Err(Error::InvalidInput("at least two levels are required".into()));
    }
    let base = deform_laplacian(q0, sigma, delta)?;
    let mut out = vec![base.clone()];
    let mut scale = BigRat::one();
    for level in 1..levels {
        scale /= rat(2, 1);
        let mut q = q0.clone();
        let mut steps = Vec::new();
        for (r, s) in base.steps.iter().enumerate() {
            let found = genericity_violation(&q, sigma)?;
            if found != s.violation {
                return Err(Error::TemplateMismatch {
                    level,
                    step: r,
                    detail: format!("expected violation {:?}, found {found:?}", s.violation),
                });
            }
            let hat = hat_laplacian(s.i, s.j, sigma)?;
            let eps = &s.epsilon_r * &scale;
            let cap = epsilon_bound(&q, &hat, sigma, delta, s.i, s.j)?;
            if eps > cap {
                return Err(Error::TemplateMismatch {
                    level,
                    step: r,
                    detail: format!("ε = {eps} exceeds the bound {cap}"),
                });
            }
            let next = q.add_scaled(&hat, &eps)?;
            let (lambda_r, _) = integral_scale(q.matrix());
            steps.push(DeformationStep {
                r,
                q_r: q,
                lambda_r,
                violation: found,
                i: s.i,
                j: s.j,
                epsilon_r: eps,
            });
            q = next;
        }
        if let Some(v) = genericity_violation(&q, sigma)? {
            return Err(Error::TemplateMismatch {
                level,
                step: steps.len(),
                detail: format!("replayed template leaves violation {v:?}"),
            });
        }
        out.push(finish(q0.clone(), sigma.clone(), q, steps)?);
    }
    Ok(out)
}

/// Outcome of each certificate check on a deformation result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub sign_preservation: bool,
    pub strict_progress: bool,
    pub sigma_invariant: bool,
    pub cone_membership: bool,
    pub drift_within: bool,
    pub iterations_within: bool,
    pub generic: bool,
    pub distance_within: bool,
}

impl Certificate {
    pub fn all(&self) -> bool {
        self.sign_preservation
            && self.strict_progress
            && self.sigma_invariant
            && self.cone_membership
            && self.drift_within
            && self.iterations_within
            && self.generic
            && self.distance_within
    }
}

/// Recheck every step of `res` from scratch.
pub fn certify(res: &DeformationResult, delta: &BigRat) -> Result<Certificate> {
    let sigma = &res.sigma;
    let n1 = sigma.len();
    let boxed = box_points(&sigma.to_i64()?);
    let mut chain: Vec<&LaplacianMatrix> = res.steps.iter().map(|s| &s.q_r).collect();
    chain.push(&res.q_gen);

    let mut sign_preservation = true;
    let mut strict_progress = true;
    for (r, s) in res.steps.iter().enumerate() {
        let (a, b) = (chain[r], chain[r + 1]);
        for y in &boxed {
            for k in 0..n1 {
                let before = transpose_column(a, y, k);
                let after = transpose_column(b, y, k);
                if !before.is_zero() && before.signum() != after.signum() {
                    sign_preservation = false;
                }
            }
        }
        if let Some((x, i)) = &s.violation {
            if transpose_column(b, x, *i).is_zero() {
                strict_progress = false;
            }
        }
    }
    let mut sigma_invariant = true;
    let mut cone = true;
    for q in &chain {
        if left_kernel_sigma(q).ok().as_ref() != Some(sigma) {
            sigma_invariant = false;
        }
        if !cone_membership(q.matrix(), sigma) {
            cone = false;
        }
    }
    let drift_cap = delta / BigRat::from_integer(int(n1 as i64));
    let diff = res.q_gen.matrix().sub(res.q0.matrix())?;
    let drift_within = diff.entries().all(|v| v.abs() <= drift_cap);
    let iterations_within = BigInt::from(res.steps.len()) <= iteration_bound(sigma);
    let generic = genericity_violation(&res.q_gen, sigma)?.is_none();
    let distance_within = res.distance_bound.squared <= delta * delta;
    Ok(Certificate {
        sign_preservation,
        strict_progress,
        sigma_invariant,
        cone_membership: cone,
        drift_within,
        iterations_within,
        generic,
        distance_within,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example() -> (LaplacianMatrix, SigmaVector) {
        (
            LaplacianMatrix::from_i64_rows(&[vec![5, -3, -2], vec![-1, 3, -2], vec![-1, -1, 2]]).unwrap(),
            SigmaVector::from_i64(&[1, 2, 3]).unwrap(),
        )
    }

    #[test]
    fn hat_examples() {
        let s = SigmaVector::from_i64(&[1, 2, 3]).unwrap();
        let h = hat_laplacian(1, 2, &s).unwrap();
        let want = ExactMatrix::from_rows(vec![
            vec![rat(0, 1), rat(0, 1), rat(0, 1)],
            vec![rat(0, 1), rat(1, 2), rat(-1, 2)],
            vec![rat(0, 1), rat(-1, 3), rat(1, 3)],
        ])
        .unwrap();
        assert_eq!(h.matrix(), &want);
        assert!(h.matrix().left_mul(&s.as_rationals()).iter().all(|v| v.is_zero()));
        let s1 = SigmaVector::from_i64(&[1, 1]).unwrap();
        assert_eq!(hat_laplacian(0, 1, &s1).unwrap(), LaplacianMatrix::from_i64_rows(&[vec![1, -1], vec![-1, 1]]).unwrap());
        assert!(hat_laplacian(1, 1, &s).is_err());
    }

    #[test]
    fn choose_j_examples() {
        let s = SigmaVector::from_i64(&[1, 2, 3]).unwrap();
        assert_eq!(choose_j(&[0, 1, 0], 2, &s).unwrap(), 1);
        assert_eq!(choose_j(&[0, 0, 1], 1, &s).unwrap(), 2);
        assert_eq!(choose_j(&[0, 1, 1], 0, &s).unwrap(), 1);
        assert_eq!(choose_j(&[0, 1, 1], 2, &s).unwrap(), 0);
    }

    #[test]
    fn delta_term_examples() {
        let (q, s) = example();
        let h = hat_laplacian(1, 2, &s).unwrap();
        // |Q̂|₁ = 5/3, (n+1) = 3, ΠΣ = 6
        assert_eq!(delta_term(&h, &s, &rat(1, 1)), rat(1, 30));
        assert_eq!(delta_term(&h, &s, &rat(1, 2)), rat(1, 60));
        let eps = epsilon_bound(&q, &h, &s, &rat(1, 1), 1, 2).unwrap();
        assert!(eps.is_positive() && eps <= rat(1, 60));
    }

    #[test]
    fn epsilon_bound_preserves_signs() {
        let (q, s) = example();
        for (i, j) in [(1, 2), (0, 2), (0, 1)] {
            let h = hat_laplacian(i, j, &s).unwrap();
            let eps = epsilon_bound(&q, &h, &s, &rat(1, 1), i, j).unwrap();
            let next = q.add_scaled(&h, &eps).unwrap();
            for y in box_points(&[1, 2, 3]) {
                for k in 0..3 {
                    let a = transpose_column(&q, &y, k);
                    let b = transpose_column(&next, &y, k);
                    assert!(a.is_zero() || a.signum() == b.signum());
                }
            }
        }
    }

    #[test]
    fn integral_scale_examples() {
        let (q, s) = example();
        let (l, _) = integral_scale(q.matrix());
        assert_eq!(l, rat(1, 1));
        let h = hat_laplacian(1, 2, &s).unwrap();
        let qe = q.add_scaled(&h, &rat(1, 2)).unwrap();
        let (l, scaled) = integral_scale(qe.matrix());
        assert_eq!(l, rat(12, 1));
        let want: Vec<Vec<BigInt>> = [[60, -36, -24], [-12, 39, -27], [-12, -14, 26]]
            .iter()
            .map(|r| r.iter().map(|&v| int(v)).collect())
            .collect();
        assert_eq!(scaled, want);
        let m = ExactMatrix::from_rows(vec![vec![rat(1, 2), rat(1, 3)]]).unwrap();
        assert_eq!(integral_scale(&m).0, rat(6, 1));
    }

    #[test]
    fn distance_of_template() {
        let (q, s) = example();
        let res = apply_template(&q, &s, &[(1, 2)], &[rat(1, 2)]).unwrap();
        let e = rat(1, 2);
        let want = &e * &e * (rat(1, 4) + rat(1, 4) + rat(1, 9) + rat(1, 9));
        assert_eq!(res.distance_bound.squared, want);
        assert_eq!(res.lambda, rat(12, 1));
        assert_eq!(distance_upper_bound(q.matrix(), q.matrix()).unwrap().squared, rat(0, 1));
    }

    #[test]
    fn deform_example() {
        let (q, s) = example();
        let delta = rat(1, 1);
        let res = deform_laplacian(&q, &s, &delta).unwrap();
        assert!(!res.steps.is_empty());
        assert_eq!(res.steps[0].violation, Some((vec![0, 1, 1], 2)));
        let cert = certify(&res, &delta).unwrap();
        assert!(cert.all(), "{cert:?}");
    }

    #[test]
    fn generic_inputs_take_no_steps() {
        let a1 = Lattice::from_i64_generators(&[vec![1, -1]]).unwrap();
        assert!(deform(&a1, &rat(1, 1)).unwrap().steps.is_empty());
        let q = LaplacianMatrix::from_i64_rows(&[vec![60, -36, -24], vec![-12, 39, -27], vec![-12, -14, 26]]).unwrap();
        let s = SigmaVector::from_i64(&[1, 2, 3]).unwrap();
        let res = deform_laplacian(&q, &s, &rat(1, 1)).unwrap();
        assert!(res.steps.is_empty());
        assert_eq!(res.q_gen, q);
    }

    #[test]
    fn stable_sequence_example() {
        let (q, s) = example();
        let seq = stable_sequence_from(&q, &s, &rat(1, 1), 3).unwrap();
        assert_eq!(seq.len(), 3);
        assert_eq!(seq[0].template(), seq[1].template());
        assert_eq!(seq[1].template(), seq[2].template());
        for r in &seq {
            assert!(certify(r, &rat(1, 1)).unwrap().all());
        }
        assert!(stable_sequence_from(&q, &s, &rat(1, 1), 1).is_err());
    }
}
