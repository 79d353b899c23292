use num_integer::Integer;

/// Walks the points of the lattice spanned by the rows of `h`, an upper
/// triangular `n×n` integer matrix with positive diagonal (a row-style
/// Hermite basis), one coordinate at a time.
///
/// `bounds(j, prefix)` returns the inclusive range allowed for coordinate `j`
/// given the already fixed coordinates `prefix = (x_0, …, x_{j-1})`, or `None`
/// to prune the branch. `visit(point, coeffs)` receives each surviving point
/// together with its coordinates in the basis `h`.
pub fn enumerate_triangular(
    h: &[Vec<i64>],
    bounds: &mut dyn FnMut(usize, &[i64]) -> Option<(i64, i64)>,
    visit: &mut dyn FnMut(&[i64], &[i64]),
) {
    let n = h.len();
    debug_assert!(h.iter().enumerate().all(|(i, r)| r[i] > 0 && r[..i].iter().all(|&x| x == 0)));
    let mut point = vec![0i64; n];
    let mut coeffs = vec![0i64; n];
    recurse(h, 0, &mut point, &mut coeffs, bounds, visit);
}

fn recurse(
    h: &[Vec<i64>],
    j: usize,
    point: &mut Vec<i64>,
    coeffs: &mut Vec<i64>,
    bounds: &mut dyn FnMut(usize, &[i64]) -> Option<(i64, i64)>,
    visit: &mut dyn FnMut(&[i64], &[i64]),
) {
    let n = h.len();
    if j == n {
        visit(point, coeffs);
        return;
    }
    let Some((lo, hi)) = bounds(j, &point[..j]) else {
        return;
    };
    if lo > hi {
        return;
    }
    let partial: i64 = (0..j).map(|k| coeffs[k] * h[k][j]).sum();
    let d = h[j][j];
    let cmin = Integer::div_ceil(&(lo - partial), &d);
    let cmax = Integer::div_floor(&(hi - partial), &d);
    for c in cmin..=cmax {
        coeffs[j] = c;
        point[j] = partial + c * d;
        // later coordinates depend on the chosen coefficient only through h
        recurse(h, j + 1, point, coeffs, bounds, visit);
    }
    coeffs[j] = 0;
    point[j] = 0;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_brute_force_box_scan() {
        // lattice with HNF rows (1,1),(0,3) i.e. points with y ≡ x (mod 3)
        let h = vec![vec![1, 1], vec![0, 3]];
        let mut found = Vec::new();
        enumerate_triangular(&h, &mut |_, _| Some((-4, 4)), &mut |p, _| found.push(p.to_vec()));
        let mut brute = Vec::new();
        for x in -4i64..=4 {
            for y in -4i64..=4 {
                if (y - x).rem_euclid(3) == 0 {
                    brute.push(vec![x, y]);
                }
            }
        }
        found.sort();
        brute.sort();
        assert_eq!(found, brute);
    }

    #[test]
    fn coefficients_reconstruct_points() {
        let h = vec![vec![2, -1, 3], vec![0, 3, 1], vec![0, 0, 5]];
        enumerate_triangular(&h, &mut |_, _| Some((-6, 6)), &mut |p, c| {
            for col in 0..3 {
                let v: i64 = (0..3).map(|k| c[k] * h[k][col]).sum();
                assert_eq!(v, p[col]);
            }
        });
    }
}
