use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-style Hermite normal form with its unimodular transform.
///
/// `hermite = transform · input`. Pivots are positive and entries above a
/// pivot lie in `[0, pivot)`. Zero rows collect at the bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteForm {
    pub hermite: Vec<Vec<BigInt>>,
    pub transform: Vec<Vec<BigInt>>,
    pub rank: usize,
}

impl HermiteForm {
    /// The nonzero rows: a canonical basis of the row lattice.
    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.hermite[..self.rank]
    }
}

fn row_sub(rows: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    if factor.is_zero() {
        return;
    }
    let src = rows[source].clone();
    for (t, s) in rows[target].iter_mut().zip(&src) {
        *t -= factor * s;
    }
}

fn negate_row(row: &mut [BigInt]) {
    for v in row.iter_mut() {
        *v = -&*v;
    }
}

pub fn hnf(m: &[Vec<BigInt>]) -> HermiteForm {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut h: Vec<Vec<BigInt>> = m.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..rows).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();

    let mut pr = 0;
    for c in 0..cols {
        if pr == rows {
            break;
        }
        // Euclid down the column until a single nonzero entry remains.
        loop {
            let best = (pr..rows)
                .filter(|&r| !h[r][c].is_zero())
                .min_by(|&a, &b| h[a][c].abs().cmp(&h[b][c].abs()));
            let Some(best) = best else { break };
            h.swap(pr, best);
            u.swap(pr, best);
            let mut clean = true;
            for r in pr + 1..rows {
                if h[r][c].is_zero() {
                    continue;
                }
                let q = h[r][c].div_floor(&h[pr][c]);
                row_sub(&mut h, r, pr, &q);
                row_sub(&mut u, r, pr, &q);
                if !h[r][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[pr][c].is_zero() {
            continue;
        }
        if h[pr][c].is_negative() {
            negate_row(&mut h[pr]);
            negate_row(&mut u[pr]);
        }
        for r in 0..pr {
            let q = h[r][c].div_floor(&h[pr][c]);
            row_sub(&mut h, r, pr, &q);
            row_sub(&mut u, r, pr, &q);
        }
        pr += 1;
    }
    HermiteForm {
        hermite: h,
        transform: u,
        rank: pr,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{bareiss_determinant, int};
    use proptest::prelude::*;

    fn big(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect()
    }

    fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        a.iter()
            .map(|row| {
                (0..b[0].len())
                    .map(|c| row.iter().zip(b).map(|(x, brow)| x * &brow[c]).sum())
                    .collect()
            })
            .collect()
    }

    #[test]
    fn identity_is_fixed() {
        let id = big(&[vec![1, 0], vec![0, 1]]);
        let h = hnf(&id);
        assert_eq!(h.hermite, id);
        assert_eq!(h.transform, id);
    }

    #[test]
    fn small_a2_projection() {
        // hand reduction: (-1,-1),(2,-1) -> (1,-2),(0,3) -> reduce -2 mod 3
        let h = hnf(&big(&[vec![-1, -1], vec![2, -1]]));
        assert_eq!(h.hermite, big(&[vec![1, 1], vec![0, 3]]));
        assert_eq!(mat_mul(&h.transform, &big(&[vec![-1, -1], vec![2, -1]])), h.hermite);
    }

    #[test]
    fn laplacian_rows_have_determinant_four() {
        let h = hnf(&big(&[vec![-3, -2], vec![3, -2], vec![-1, 2]]));
        assert_eq!(h.rank, 2);
        assert_eq!(bareiss_determinant(h.basis()).abs(), int(4));
        assert!(h.hermite[2].iter().all(Zero::is_zero));
    }

    fn unimodular(ops: &[(usize, usize, i64)], n: usize) -> Vec<Vec<BigInt>> {
        let mut u: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| int((i == j) as i64)).collect())
            .collect();
        for &(a, b, k) in ops {
            let (a, b) = (a % n, b % n);
            if a != b {
                row_sub(&mut u, a, b, &int(-k));
            }
        }
        u
    }

    proptest! {
        #[test]
        fn hnf_is_a_lattice_fingerprint(
            entries in proptest::collection::vec(-6i64..=6, 9),
            ops in proptest::collection::vec((0usize..3, 0usize..3, -3i64..=3), 0..8),
        ) {
            let m: Vec<Vec<BigInt>> = entries.chunks(3).map(|c| c.iter().map(|&x| int(x)).collect()).collect();
            let h = hnf(&m);
            prop_assert_eq!(mat_mul(&h.transform, &m), h.hermite.clone());
            prop_assert_eq!(bareiss_determinant(&h.transform).abs(), int(1));
            // idempotent
            prop_assert_eq!(hnf(&h.hermite).hermite, h.hermite.clone());
            // invariant under unimodular change of generators
            let u = unimodular(&ops, 3);
            let moved = mat_mul(&u, &m);
            prop_assert_eq!(hnf(&moved).hermite, h.hermite);
        }
    }
}
