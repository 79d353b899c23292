#![allow(dead_code)]

use latdeform::digraph::{LaplacianMatrix, SigmaVector};
use latdeform::exact::Lattice;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn example_laplacian() -> LaplacianMatrix {
    LaplacianMatrix::from_i64_rows(&[vec![5, -3, -2], vec![-1, 3, -2], vec![-1, -1, 2]]).unwrap()
}

pub fn example_sigma() -> SigmaVector {
    SigmaVector::from_i64(&[1, 2, 3]).unwrap()
}

pub fn example_lattice() -> Lattice {
    Lattice::from_i64_generators(&[vec![5, -3, -2], vec![-1, 3, -2], vec![-1, -1, 2]]).unwrap()
}

/// Random full-rank sublattices of `A_2` and `A_3` (alternating) with
/// index at most `max_index`, as scrambled generating sets.
pub fn corpus(seed: u64, count: usize, max_index: i64) -> Vec<(usize, Lattice)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = if out.len() % 2 == 0 { 2 } else { 3 };
        let index = rng.gen_range(1..=max_index);
        // spread the prime factors of the index over the diagonal
        let mut diag = vec![1i64; n];
        let mut rest = index;
        let mut f = 2;
        while rest > 1 {
            while rest % f == 0 {
                diag[rng.gen_range(0..n)] *= f;
                rest /= f;
            }
            f += 1;
        }
        let mut proj: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut r = vec![0i64; n];
                r[i] = diag[i];
                for j in i + 1..n {
                    r[j] = rng.gen_range(0..diag[j]);
                }
                r
            })
            .collect();
        for _ in 0..2 * n {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b {
                let k = rng.gen_range(-1..=1);
                for c in 0..n {
                    proj[a][c] += k * proj[b][c];
                }
            }
        }
        let rows: Vec<Vec<i64>> = proj
            .into_iter()
            .map(|p| {
                let mut full = vec![-p.iter().sum::<i64>()];
                full.extend(p);
                full
            })
            .collect();
        let l = Lattice::from_i64_generators(&rows).expect("full rank by construction");
        assert_eq!(l.index(), index.into());
        out.push((n, l));
    }
    out
}

/// Integral Laplacians with `Σ_0 = 1` and some `Σ_i > 1`, built as sums of
/// cycle rays (always including the cycle `0 → 1 → … → n → 0`). Lattices
/// with index above `max_index` are skipped.
pub fn digraph_corpus(seed: u64, count: usize, max_index: i64) -> Vec<(LaplacianMatrix, SigmaVector)> {
    use latdeform::digraph::{ray_laplacian, LaplacianMatrix as L};
    use latdeform::exact::{lcm_of_denominators, BigRat};
    use rand::seq::SliceRandom;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let n = if out.len() % 2 == 0 { 2 } else { 3 };
        let mut s = vec![1i64];
        s.extend((0..n).map(|_| rng.gen_range(1..=3)));
        if s.iter().all(|&x| x == 1) {
            continue;
        }
        let sigma = SigmaVector::from_i64(&s).unwrap();
        let mut cycles: Vec<(Vec<usize>, i64)> = vec![((0..=n).collect(), rng.gen_range(1..=2))];
        for _ in 0..rng.gen_range(1..=2) {
            let mut vs: Vec<usize> = (0..=n).collect();
            vs.shuffle(&mut rng);
            vs.truncate(rng.gen_range(2..=n + 1));
            cycles.push((vs, rng.gen_range(1..=2)));
        }
        let mut q = L::from_i64_rows(&vec![vec![0; n + 1]; n + 1]).unwrap();
        for (c, w) in &cycles {
            q = q.add_scaled(&ray_laplacian(c, &sigma).unwrap(), &BigRat::from_integer((*w).into())).unwrap();
        }
        let lambda = BigRat::from_integer(lcm_of_denominators(q.matrix().entries()));
        let q = q.scaled(&lambda).unwrap();
        let rows = q.matrix().to_int_rows().unwrap();
        let l = Lattice::from_generators(&rows).unwrap();
        if l.index() > max_index.into() {
            continue;
        }
        out.push((q, sigma));
    }
    out
}
