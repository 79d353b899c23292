//! LLL reduction and short-vector enumeration for small integer bases.
//!
//! Floating point is used only to steer the search. Bases are changed by
//! exact integer row operations, and enumeration bounds are widened so that
//! callers can filter candidates exactly without losing points.

/// Gram–Schmidt data of `rows` under `inner`: `(μ, |b*_i|²)`.
fn gram_schmidt(rows: &[Vec<i64>], inner: &dyn Fn(&[f64], &[f64]) -> f64) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = rows.len();
    let b: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    let mut norms = vec![0.0; n];
    for i in 0..n {
        let mut v = b[i].clone();
        for j in 0..i {
            mu[i][j] = if norms[j] > 0.0 { inner(&b[i], &star[j]) / norms[j] } else { 0.0 };
            for (x, y) in v.iter_mut().zip(&star[j]) {
                *x -= mu[i][j] * y;
            }
        }
        norms[i] = inner(&v, &v);
        star.push(v);
    }
    (mu, norms)
}

/// LLL-reduces the rows (δ = 0.99) with respect to `inner`, which must be
/// positive definite. The result spans the same lattice.
pub fn lll_reduce(rows: &[Vec<i64>], inner: &dyn Fn(&[f64], &[f64]) -> f64) -> Vec<Vec<i64>> {
    let mut b = rows.to_vec();
    let n = b.len();
    let mut k = 1;
    let mut guard = 0;
    while k < n && guard < 100_000 {
        guard += 1;
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&b, inner);
            let q = mu[k][j].round() as i64;
            if q != 0 {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
            }
        }
        let (mu, norms) = gram_schmidt(&b, inner);
        if norms[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    b
}

/// Integer coefficient vectors `c` with `|Σ c_i b_i − t|² ≤ r2` under
/// `inner`, possibly with a few extra candidates near the boundary.
/// `visit` returns `false` to stop the search.
pub fn enumerate_ball(
    rows: &[Vec<i64>],
    inner: &dyn Fn(&[f64], &[f64]) -> f64,
    target: &[f64],
    r2: f64,
    visit: &mut dyn FnMut(&[i64]) -> bool,
) {
    let n = rows.len();
    let (mu, norms) = gram_schmidt(rows, inner);
    let center = solve_coefficients(rows, target);
    let r2 = r2 * (1.0 + 1e-9) + 1e-6;
    let mut c = vec![0i64; n];
    descend(n, &mu, &norms, &center, r2, &mut c, visit);
}

fn descend(
    level: usize,
    mu: &[Vec<f64>],
    norms: &[f64],
    center: &[f64],
    rem: f64,
    c: &mut Vec<i64>,
    visit: &mut dyn FnMut(&[i64]) -> bool,
) -> bool {
    if level == 0 {
        return visit(c);
    }
    let i = level - 1;
    let n = c.len();
    let mid = center[i] - (i + 1..n).map(|j| mu[j][i] * (c[j] as f64 - center[j])).sum::<f64>();
    let half = (rem.max(0.0) / norms[i]).sqrt();
    let lo = (mid - half - 1e-6).ceil() as i64;
    let hi = (mid + half + 1e-6).floor() as i64;
    for v in lo..=hi {
        c[i] = v;
        let y = v as f64 - mid;
        if !descend(i, mu, norms, center, rem - norms[i] * y * y, c, visit) {
            return false;
        }
    }
    c[i] = 0;
    true
}

/// Solves `Σ c_i rows_i = t` for real `c` by Gaussian elimination.
fn solve_coefficients(rows: &[Vec<i64>], t: &[f64]) -> Vec<f64> {
    let n = rows.len();
    // columns of the system are the rows of the basis
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|r| {
            let mut row: Vec<f64> = (0..n).map(|c| rows[c][r] as f64).collect();
            row.push(t[r]);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("nonempty range");
        a.swap(col, piv);
        for r in 0..n {
            if r != col && a[col][col] != 0.0 {
                let f = a[r][col] / a[col][col];
                for k in col..=n {
                    a[r][k] -= f * a[col][k];
                }
            }
        }
    }
    (0..n).map(|i| a[i][n] / a[i][i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn reduction_keeps_the_lattice() {
        let rows = vec![vec![1, 0, 0], vec![4, 1, 0], vec![7, 3, 1001]];
        let red = lll_reduce(&rows, &dot);
        let det = |m: &[Vec<i64>]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        assert_eq!(det(&red).abs(), 1001);
        assert!(red.iter().take(2).all(|r| r.iter().map(|x| x * x).sum::<i64>() <= 2));
    }

    #[test]
    fn ball_matches_scan() {
        let rows = vec![vec![2, 1], vec![-1, 3]];
        let mut got = Vec::new();
        enumerate_ball(&rows, &dot, &[0.5, -0.25], 30.0, &mut |c| {
            got.push(c.to_vec());
            true
        });
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                let p = [(2 * a - b) as f64 - 0.5, (a + 3 * b) as f64 + 0.25];
                if dot(&p, &p) <= 30.0 {
                    assert!(got.contains(&vec![a, b]), "missing {a},{b}");
                }
            }
        }
    }
}
