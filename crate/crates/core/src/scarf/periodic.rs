//! Scarf complexes of generic Laurent monomial modules `⟨x^a : a ∈ L⟩`,
//! stored as one representative per translation class.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::field::Field;
use super::monomial::join;
use crate::digraph::{LaplacianMatrix, SigmaVector};
use crate::error::{Error, Result};
use crate::exact::{enumerate_ball, enumerate_triangular, hnf, int, lll_reduce, to_i64, BigRat, ExactMatrix, Lattice};
use crate::groebner::{genericity_violation, grobner_basis, TermOrder};
use crate::laplacianize::laplacianize;

/// Enumerates points of a full-rank sublattice of `A_n` lying below a
/// given vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointFinder {
    dim: usize,
    h: Vec<Vec<i64>>,
    /// LLL-reduced basis of the projection to coordinates `1..n`.
    reduced: Vec<Vec<i64>>,
}

/// Euclidean inner product of the full vectors `(−Σa, a)` and `(−Σb, b)`.
fn full_inner(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() + a.iter().sum::<f64>() * b.iter().sum::<f64>()
}

impl PointFinder {
    /// `rows` must span a rank-`n` sublattice of `A_n ⊂ Z^{n+1}`.
    pub fn new(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.len());
        let projected: Vec<Vec<BigInt>> = rows.iter().map(|r| r[1..].iter().map(|&x| int(x)).collect()).collect();
        let hf = hnf(&projected);
        if hf.rank != dim - 1 {
            return Err(Error::NotFiniteIndex("rows do not span a full-rank lattice".into()));
        }
        let h = hf
            .basis()
            .iter()
            .map(|r| r.iter().map(to_i64).collect::<Result<Vec<i64>>>())
            .collect::<Result<Vec<_>>>()?;
        let reduced = lll_reduce(&h, &full_inner);
        Ok(PointFinder { dim, h, reduced })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Lattice points `b ≤ m`, sorted. They lie in the simplex
    /// `{b ≤ m, Σb = 0}`, so the search runs over its circumscribed ball
    /// and filters exactly. Stops early once more than `limit` points are
    /// found.
    pub fn points_below(&self, m: &[i64], limit: Option<usize>) -> Vec<Vec<i64>> {
        let n = self.dim - 1;
        let s: i64 = m.iter().sum();
        if s < 0 {
            return Vec::new();
        }
        let shift = s as f64 / (n + 1) as f64;
        let target: Vec<f64> = m[1..].iter().map(|&x| x as f64 - shift).collect();
        let r2 = (s as f64) * (s as f64) * n as f64 / (n + 1) as f64;
        let cap = limit.unwrap_or(usize::MAX);
        let mut out = Vec::new();
        enumerate_ball(&self.reduced, &full_inner, &target, r2, &mut |c| {
            let mut p = vec![0i64; n];
            for (ci, row) in c.iter().zip(&self.reduced) {
                for (x, r) in p.iter_mut().zip(row) {
                    *x += ci * r;
                }
            }
            let mut full = Vec::with_capacity(n + 1);
            full.push(-p.iter().sum::<i64>());
            full.extend_from_slice(&p);
            if full.iter().zip(m).all(|(a, b)| a <= b) {
                out.push(full);
            }
            out.len() <= cap
        });
        out.sort();
        out
    }

    /// Lattice points with every coordinate in `[-r, r]`.
    pub fn points_in_box(&self, r: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        enumerate_triangular(&self.h, &mut |_, _| Some((-r, r)), &mut |p, _| {
            let s = -p.iter().sum::<i64>();
            if s.abs() <= r {
                let mut full = vec![s];
                full.extend_from_slice(p);
                out.push(full);
            }
        });
        out
    }
}

fn sub(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Translate a vertex set so its lex-smallest vertex is the origin.
/// Returns the sorted representative and the translation removed.
pub fn canonical(face: &[Vec<i64>]) -> (Vec<Vec<i64>>, Vec<i64>) {
    let mut v = face.to_vec();
    v.sort();
    let shift = v[0].clone();
    (v.iter().map(|p| sub(p, &shift)).collect(), shift)
}

/// The `L`-periodic Scarf complex modulo `L`.
#[derive(Clone, Debug)]
pub struct ScarfQuotient {
    rows: Vec<Vec<i64>>,
    finder: PointFinder,
    /// `faces[k]`: canonical representatives of the `k`-dimensional classes.
    faces: Vec<Vec<Vec<Vec<i64>>>>,
    index: Vec<BTreeMap<Vec<Vec<i64>>, usize>>,
}

impl ScarfQuotient {
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(|f| f.len()).collect()
    }

    pub fn faces(&self, k: usize) -> &[Vec<Vec<i64>>] {
        self.faces.get(k).map_or(&[], |f| f.as_slice())
    }

    pub fn dimension(&self) -> usize {
        self.faces.len() - 1
    }

    /// Integral Laplacian rows generating the lattice.
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn finder(&self) -> &PointFinder {
        &self.finder
    }

    pub fn class_index(&self, k: usize, canonical_face: &[Vec<i64>]) -> Option<usize> {
        self.index.get(k)?.get(canonical_face).copied()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &c)| if k % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Boundary matrix from `k`-classes to `(k−1)`-classes.
    pub fn boundary(&self, k: usize) -> Vec<Vec<BigRat>> {
        let rows = self.faces(k - 1).len();
        let mut out = vec![vec![BigRat::from_integer(int(0)); self.faces(k).len()]; rows];
        for (c, face) in self.faces(k).iter().enumerate() {
            for t in 0..face.len() {
                let facet: Vec<Vec<i64>> = face.iter().enumerate().filter(|(s, _)| *s != t).map(|(_, v)| v.clone()).collect();
                let (rep, _) = canonical(&facet);
                let r = self.class_index(k - 1, &rep).expect("facets of faces are faces");
                let sign = if t % 2 == 0 { 1 } else { -1 };
                out[r][c] += BigRat::from_integer(int(sign));
            }
        }
        out
    }

    /// Betti numbers of the quotient cell complex.
    pub fn homology_ranks(&self, field: Field) -> Vec<usize> {
        let top = self.faces.len();
        let ranks: Vec<usize> = (0..=top)
            .map(|k| {
                if k == 0 || k >= top {
                    0
                } else {
                    field.rank(self.boundary(k))
                }
            })
            .collect();
        (0..top).map(|k| self.faces(k).len() - ranks[k] - ranks[k + 1]).collect()
    }

    /// Faces in coordinates with respect to rows `1..n` of the Laplacian.
    pub fn coefficient_faces(&self) -> Result<Vec<BTreeSet<Vec<Vec<BigInt>>>>> {
        let b: Vec<Vec<BigRat>> = self.rows[1..]
            .iter()
            .map(|r| r[1..].iter().map(|&x| BigRat::from_integer(int(x))).collect())
            .collect();
        let inv = ExactMatrix::from_rows(b)?.inverse()?;
        let coords = |p: &Vec<i64>| -> Vec<BigInt> {
            let v: Vec<BigRat> = p[1..].iter().map(|&x| BigRat::from_integer(int(x))).collect();
            inv.left_mul(&v).into_iter().map(|x| x.to_integer()).collect()
        };
        Ok(self
            .faces
            .iter()
            .map(|layer| layer.iter().map(|f| f.iter().map(coords).collect()).collect())
            .collect())
    }

    /// Exact face test: the points below the join are exactly the face and
    /// every vertex is needed to reach the join.
    pub fn is_face(&self, verts: &[Vec<i64>]) -> bool {
        is_face(&self.finder, verts)
    }
}

fn is_face(finder: &PointFinder, verts: &[Vec<i64>]) -> bool {
    let m = join(verts);
    if finder.points_below(&m, Some(verts.len())).len() != verts.len() {
        return false;
    }
    verts.len() == 1
        || (0..verts.len()).all(|t| join(verts.iter().enumerate().filter(|(s, _)| *s != t).map(|(_, v)| v)) != m)
}

/// Scarf complex of the lattice spanned by the rows of an integral
/// Laplacian with `Σ_0 = 1`, whose lattice ideal must be generic.
///
/// Edges are searched among `±u` for the chip-firing Gröbner basis
/// exponents `u`, which contain every minimal generator; higher faces are
/// cliques of edges, each confirmed by the exact face test.
pub fn scarf_complex_laplacian(q: &LaplacianMatrix, sigma: &SigmaVector) -> Result<ScarfQuotient> {
    if let Some((x, i)) = genericity_violation(q, sigma)? {
        return Err(Error::NonGeneric(format!("x = {x:?}, coordinate {i}")));
    }
    let rows = q.integer_rows()?;
    let finder = PointFinder::new(&rows[1..])?;
    let gb = grobner_basis(q, sigma, &TermOrder::standard(q.size()))?;
    let mut candidates = BTreeSet::new();
    for b in &gb.binomials {
        let u = b.binomial.exponent().to_vec();
        candidates.insert(u.iter().map(|x| -x).collect::<Vec<i64>>());
        candidates.insert(u);
    }
    let neighbours: Vec<Vec<i64>> = candidates
        .into_iter()
        .filter(|u| is_face(&finder, &[vec![0; u.len()], u.clone()]))
        .collect();
    let adjacent: BTreeSet<&Vec<i64>> = neighbours.iter().collect();

    let origin = vec![0i64; rows.len()];
    let mut classes: Vec<BTreeSet<Vec<Vec<i64>>>> = vec![BTreeSet::from([vec![origin.clone()]])];
    // star faces as increasing index lists into `neighbours`
    let mut layer: Vec<Vec<usize>> = (0..neighbours.len()).map(|i| vec![i]).collect();
    while !layer.is_empty() {
        let mut found = BTreeSet::new();
        let mut accepted = Vec::new();
        for s in layer {
            let mut verts: Vec<Vec<i64>> = s.iter().map(|&i| neighbours[i].clone()).collect();
            verts.push(origin.clone());
            if verts.len() > 2 && !is_face(&finder, &verts) {
                continue;
            }
            found.insert(canonical(&verts).0);
            accepted.push(s);
        }
        let mut next = Vec::new();
        for s in &accepted {
            for w in s.last().unwrap() + 1..neighbours.len() {
                if s.iter().all(|&i| adjacent.contains(&sub(&neighbours[w], &neighbours[i]))) {
                    let mut t = s.clone();
                    t.push(w);
                    next.push(t);
                }
            }
        }
        if found.is_empty() {
            break;
        }
        classes.push(found);
        layer = next;
    }
    let faces: Vec<Vec<Vec<Vec<i64>>>> = classes.into_iter().map(|c| c.into_iter().collect()).collect();
    let index = faces
        .iter()
        .map(|layer| layer.iter().enumerate().map(|(i, f)| (f.clone(), i)).collect())
        .collect();
    Ok(ScarfQuotient {
        rows,
        finder,
        faces,
        index,
    })
}

/// Scarf complex of a generic lattice through its Laplacian presentation.
pub fn scarf_complex_lattice(l: &Lattice) -> Result<ScarfQuotient> {
    let p = laplacianize(l)?;
    scarf_complex_laplacian(&p.q, &p.sigma)
}

/// Edge classes found by testing every lattice point in a box of radius
/// `r`; used to confirm that the Gröbner candidates missed nothing.
pub fn sweep_edges(s: &ScarfQuotient, r: i64) -> BTreeSet<Vec<Vec<i64>>> {
    let origin = vec![0i64; s.finder.dim()];
    s.finder
        .points_in_box(r)
        .into_iter()
        .filter(|p| *p != origin)
        .filter(|p| is_face(&s.finder, &[origin.clone(), p.clone()]))
        .map(|p| canonical(&[origin.clone(), p]).0)
        .collect()
}
