//! Relabeling the Scarf complex of a deformation by points of the original
//! lattice, the associated complex of free modules, its exactness test and
//! its minimization.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::One;
use rayon::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::field::{sparse_rank_mod, Field, Poly, SparseColumn, CHECK_PRIME};
use super::monomial::join;
use super::periodic::{canonical, PointFinder, ScarfQuotient};
use crate::error::{Error, Result};
use crate::exact::{int, BigRat, ExactMatrix};

/// Sends a point of the deformed lattice to the point of the original
/// lattice with the same coordinates in the designated bases.
#[derive(Clone, Debug)]
pub struct Relabeling {
    gen_inverse: ExactMatrix,
    base: Vec<Vec<i64>>,
}

impl Relabeling {
    pub fn new(base: &[Vec<i64>], gen: &[Vec<i64>]) -> Result<Self> {
        if base.len() != gen.len() || base.iter().chain(gen).any(|r| r.len() != base.len() + 1) {
            return Err(Error::InvalidInput("bases must both be n×(n+1)".into()));
        }
        let proj: Vec<Vec<BigRat>> = gen
            .iter()
            .map(|r| r[1..].iter().map(|&x| BigRat::from_integer(int(x))).collect())
            .collect();
        Ok(Relabeling {
            gen_inverse: ExactMatrix::from_rows(proj)?.inverse()?,
            base: base.to_vec(),
        })
    }

    pub fn coordinates(&self, p: &[i64]) -> Result<Vec<i64>> {
        let v: Vec<BigRat> = p[1..].iter().map(|&x| BigRat::from_integer(int(x))).collect();
        self.gen_inverse
            .left_mul(&v)
            .into_iter()
            .map(|c| {
                if c.is_integer() {
                    crate::exact::to_i64(&c.to_integer())
                } else {
                    Err(Error::InvalidInput(format!("point {p:?} is not in the deformed lattice")))
                }
            })
            .collect()
    }

    pub fn apply(&self, p: &[i64]) -> Result<Vec<i64>> {
        let c = self.coordinates(p)?;
        let mut out = vec![0i64; p.len()];
        for (ck, row) in c.iter().zip(&self.base) {
            for (o, b) in out.iter_mut().zip(row) {
                *o += ck * b;
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledFace {
    /// Canonical vertices in the deformed lattice.
    pub vertices: Vec<Vec<i64>>,
    /// Relabeled vertices, in the same order.
    pub vertex_labels: Vec<Vec<i64>>,
    pub label: Vec<i64>,
}

/// Quotient complex with faces labelled by points of the original lattice.
#[derive(Clone, Debug)]
pub struct LabelledComplex {
    pub classes: Vec<Vec<LabelledFace>>,
    relabel: Relabeling,
    base_finder: PointFinder,
    index: Vec<BTreeMap<Vec<Vec<i64>>, usize>>,
}

impl LabelledComplex {
    pub fn f_vector(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    pub fn relabeling(&self) -> &Relabeling {
        &self.relabel
    }

    fn from_classes(classes: Vec<Vec<LabelledFace>>, relabel: Relabeling, base_finder: PointFinder) -> Self {
        let index = classes
            .iter()
            .map(|layer| layer.iter().enumerate().map(|(i, f)| (f.vertices.clone(), i)).collect())
            .collect();
        LabelledComplex {
            classes,
            relabel,
            base_finder,
            index,
        }
    }

    /// Facet `t` of class `c` in dimension `k`: its class and its label.
    fn facet(&self, k: usize, c: usize, t: usize) -> Result<(usize, Vec<i64>)> {
        let face = &self.classes[k][c];
        let verts: Vec<Vec<i64>> = face.vertices.iter().enumerate().filter(|(s, _)| *s != t).map(|(_, v)| v.clone()).collect();
        let (rep, shift) = canonical(&verts);
        let r = *self.index[k - 1]
            .get(&rep)
            .ok_or_else(|| Error::NotAResolution("a facet class is missing".into()))?;
        let offset = self.relabel.apply(&shift)?;
        let label = self.classes[k - 1][r].label.iter().zip(&offset).map(|(a, b)| a + b).collect();
        Ok((r, label))
    }

    /// Removes one class together with every class having it as a facet.
    pub fn drop_class(&self, k: usize, c: usize) -> LabelledComplex {
        let mut removed: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.classes.len()];
        removed[k].insert(c);
        for d in k + 1..self.classes.len() {
            for (i, face) in self.classes[d].iter().enumerate() {
                let hit = (0..face.vertices.len()).any(|t| {
                    let verts: Vec<Vec<i64>> =
                        face.vertices.iter().enumerate().filter(|(s, _)| *s != t).map(|(_, v)| v.clone()).collect();
                    let rep = canonical(&verts).0;
                    self.index[d - 1].get(&rep).is_some_and(|r| removed[d - 1].contains(r))
                });
                if hit {
                    removed[d].insert(i);
                }
            }
        }
        let classes: Vec<Vec<LabelledFace>> = self
            .classes
            .iter()
            .enumerate()
            .map(|(d, layer)| {
                layer.iter().enumerate().filter(|(i, _)| !removed[d].contains(i)).map(|(_, f)| f.clone()).collect()
            })
            .filter(|layer: &Vec<LabelledFace>| !layer.is_empty())
            .collect();
        LabelledComplex::from_classes(classes, self.relabel.clone(), self.base_finder.clone())
    }
}

/// Relabel each vertex `Σ c_k b_{k,gen}` by `Σ c_k b_k`; face labels become
/// joins of the new vertex labels.
pub fn relabel_degenerate(scarf: &ScarfQuotient, base: &[Vec<i64>], gen: &[Vec<i64>]) -> Result<LabelledComplex> {
    let relabel = Relabeling::new(base, gen)?;
    let base_finder = PointFinder::new(base)?;
    let mut classes = Vec::new();
    for k in 0..=scarf.dimension() {
        let mut layer = Vec::new();
        for f in scarf.faces(k) {
            let vertex_labels = f.iter().map(|v| relabel.apply(v)).collect::<Result<Vec<_>>>()?;
            let label = join(&vertex_labels);
            layer.push(LabelledFace {
                vertices: f.clone(),
                vertex_labels,
                label,
            });
        }
        classes.push(layer);
    }
    Ok(LabelledComplex::from_classes(classes, relabel, base_finder))
}

pub type PolyMatrix = Vec<Vec<Poly>>;

/// Free modules with generators in the given degrees; `d[k]` maps
/// homological degree `k` to `k − 1` (`d[0]` is empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    pub degrees: Vec<Vec<Vec<i64>>>,
    pub d: Vec<PolyMatrix>,
}

impl FreeComplex {
    pub fn ranks(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.len()).collect()
    }

    pub fn differential_squares_vanish(&self, field: Field) -> bool {
        (2..self.d.len()).all(|k| {
            let (a, b) = (&self.d[k - 1], &self.d[k]);
            (0..a.len()).all(|r| {
                (0..b.first().map_or(0, |row| row.len())).all(|c| {
                    let mut acc = Poly::zero();
                    for (m, bm) in b.iter().enumerate() {
                        if !a[r][m].is_zero() && !bm[c].is_zero() {
                            acc = acc.add(&a[r][m].mul(&bm[c], field), field);
                        }
                    }
                    acc.is_zero()
                })
            })
        })
    }

    /// Every entry has nonnegative exponents, so each map lowers labels.
    pub fn exponents_nonnegative(&self) -> bool {
        self.d.iter().flatten().flatten().all(|p| p.terms().all(|(e, _)| e.iter().all(|&x| x >= 0)))
    }
}

/// Simplicial chain complex with monomial coefficients: the facet obtained
/// by dropping vertex `t` enters with sign `(−1)^t` and monomial
/// `x^{label(F) − label(facet)}`.
pub fn free_complex(lc: &LabelledComplex) -> Result<FreeComplex> {
    let degrees: Vec<Vec<Vec<i64>>> = lc.classes.iter().map(|l| l.iter().map(|f| f.label.clone()).collect()).collect();
    let mut d = vec![Vec::new()];
    for k in 1..lc.classes.len() {
        let mut m = vec![vec![Poly::zero(); lc.classes[k].len()]; lc.classes[k - 1].len()];
        for (c, face) in lc.classes[k].iter().enumerate() {
            for t in 0..face.vertices.len() {
                let (r, facet_label) = lc.facet(k, c, t)?;
                let exp: Vec<i64> = face.label.iter().zip(&facet_label).map(|(a, b)| a - b).collect();
                if exp.iter().any(|&x| x < 0) {
                    return Err(Error::NotAResolution("facet label exceeds face label".into()));
                }
                let sign = if t % 2 == 0 { BigRat::one() } else { -BigRat::one() };
                m[r][c].add_term(exp, sign, Field::Rationals);
            }
        }
        d.push(m);
    }
    Ok(FreeComplex { degrees, d })
}

fn boundary_columns(faces: &[BTreeSet<Vec<Vec<i64>>>]) -> Vec<Vec<SparseColumn>> {
    let indexed: Vec<BTreeMap<&Vec<Vec<i64>>, usize>> =
        faces.iter().map(|l| l.iter().enumerate().map(|(i, f)| (f, i)).collect()).collect();
    let mut out = vec![faces[0].iter().map(|_| vec![(0usize, 1i64)]).collect::<Vec<SparseColumn>>()];
    for k in 1..faces.len() {
        let cols = faces[k]
            .iter()
            .map(|f| {
                let mut col: SparseColumn = (0..f.len())
                    .map(|t| {
                        let facet: Vec<Vec<i64>> =
                            f.iter().enumerate().filter(|(s, _)| *s != t).map(|(_, v)| v.clone()).collect();
                        (indexed[k - 1][&facet], if t % 2 == 0 { 1 } else { -1 })
                    })
                    .collect();
                col.sort();
                col
            })
            .collect();
        out.push(cols);
    }
    out
}

fn acyclic_with(faces: &[BTreeSet<Vec<Vec<i64>>>], cols: &[Vec<SparseColumn>], rank: &dyn Fn(&[SparseColumn], usize) -> usize) -> bool {
    // ranks of ∂_k for k = 0..=top, ∂_0 being the augmentation
    let mut ranks: Vec<usize> = (0..faces.len())
        .map(|k| rank(&cols[k], if k == 0 { 1 } else { faces[k - 1].len() }))
        .collect();
    ranks.push(0);
    (0..faces.len()).all(|k| faces[k].len() == ranks[k] + ranks[k + 1])
}

fn reduced_homology_vanishes(faces: &[BTreeSet<Vec<Vec<i64>>>], field: Field) -> bool {
    if faces.first().is_none_or(|v| v.is_empty()) {
        return true;
    }
    let cols = boundary_columns(faces);
    if field == Field::Rationals {
        // ranks mod p never exceed ranks over Q, so acyclicity mod p
        // already forces acyclicity over Q
        if acyclic_with(faces, &cols, &|c, _| sparse_rank_mod(c, CHECK_PRIME)) {
            return true;
        }
    }
    acyclic_with(faces, &cols, &|c, rows| field.sparse_rank(c, rows))
}

/// Degrees at which the `≤ b` subcomplexes are tested: labels of all faces
/// through the origin, and joins `0 ∨ a ∨ b` for `a, b` within two edges of
/// the origin. The latter catch cycles that no single face label sees.
pub fn test_degrees(lc: &LabelledComplex) -> BTreeSet<Vec<i64>> {
    let mut out = BTreeSet::new();
    for layer in &lc.classes {
        for f in layer {
            for v in &f.vertex_labels {
                let shifted: Vec<Vec<i64>> =
                    f.vertex_labels.iter().map(|w| w.iter().zip(v).map(|(a, b)| a - b).collect()).collect();
                out.insert(join(&shifted));
            }
        }
    }
    let dim = lc.base_finder.dim();
    let origin = vec![0i64; dim];
    let mut near: BTreeSet<Vec<i64>> = BTreeSet::new();
    for f in lc.classes.get(1).map_or(&[][..], |l| l.as_slice()) {
        let v = &f.vertex_labels[1];
        near.insert(v.clone());
        near.insert(v.iter().map(|x| -x).collect());
    }
    let step: Vec<Vec<i64>> = near.iter().cloned().collect();
    for a in &step {
        for b in &step {
            near.insert(a.iter().zip(b).map(|(x, y)| x + y).collect());
        }
    }
    near.insert(origin.clone());
    let near: Vec<Vec<i64>> = near.into_iter().collect();
    for i in 0..near.len() {
        for j in i..near.len() {
            out.insert(join([&origin, &near[i], &near[j]]));
        }
    }
    out
}

/// All faces of the periodic labelled complex whose label is `≤ b`, as
/// sorted lists of vertex labels, grouped by dimension.
pub fn subcomplex_below(lc: &LabelledComplex, b: &[i64]) -> Vec<BTreeSet<Vec<Vec<i64>>>> {
    let mut faces = vec![BTreeSet::new(); lc.classes.len()];
    for (k, layer) in lc.classes.iter().enumerate() {
        for f in layer {
            let room: Vec<i64> = b.iter().zip(&f.label).map(|(x, y)| x - y).collect();
            for t in lc.base_finder.points_below(&room, None) {
                let mut verts: Vec<Vec<i64>> =
                    f.vertex_labels.iter().map(|v| v.iter().zip(&t).map(|(a, c)| a + c).collect()).collect();
                verts.sort();
                faces[k].insert(verts);
            }
        }
    }
    while faces.last().is_some_and(|l| l.is_empty()) {
        faces.pop();
    }
    faces
}

/// Checks `d² = 0` and that every `≤ b` subcomplex is acyclic for `b` in
/// [`test_degrees`]. Subcomplexes only change at joins of labels, and the
/// labels are periodic, so finitely many `b` up to translation arise.
pub fn check_exactness(fc: &FreeComplex, lc: &LabelledComplex, field: Field) -> bool {
    if !fc.differential_squares_vanish(field) {
        return false;
    }
    let degrees: Vec<Vec<i64>> = test_degrees(lc).into_iter().collect();
    degrees
        .par_iter()
        .all(|b| reduced_homology_vanishes(&subcomplex_below(lc, b), field))
}

/// Cancels generator pairs joined by scalar entries until none remain and
/// returns the resulting ranks. With a seed, the pivot is drawn at random
/// among all scalar entries.
pub fn minimize_complex(fc: &FreeComplex, field: Field, seed: Option<u64>) -> Result<Vec<usize>> {
    if !fc.differential_squares_vanish(field) {
        return Err(Error::NotAResolution("differentials do not compose to zero".into()));
    }
    let mut rng = seed.map(ChaCha8Rng::seed_from_u64);
    let mut degrees = fc.degrees.clone();
    let mut d: Vec<PolyMatrix> = fc
        .d
        .iter()
        .map(|m| m.iter().map(|row| row.iter().map(|p| p.normalized(field)).collect()).collect())
        .collect();
    loop {
        let mut pivots = Vec::new();
        for k in 1..d.len() {
            for (r, row) in d[k].iter().enumerate() {
                for (c, p) in row.iter().enumerate() {
                    if p.scalar().is_some() {
                        pivots.push((k, r, c));
                    }
                }
            }
        }
        if pivots.is_empty() {
            break;
        }
        let pick = match rng.as_mut() {
            Some(g) => g.gen_range(0..pivots.len()),
            None => 0,
        };
        let (k, r, c) = pivots[pick];
        let inv = field.inv(d[k][r][c].scalar().expect("pivot is scalar"));
        let m = &d[k];
        let mut next: PolyMatrix = Vec::with_capacity(m.len() - 1);
        for (r2, row) in m.iter().enumerate() {
            if r2 == r {
                continue;
            }
            let factor = row[c].scale(&inv, field);
            let mut new_row = Vec::with_capacity(row.len() - 1);
            for (c2, p) in row.iter().enumerate() {
                if c2 == c {
                    continue;
                }
                if factor.is_zero() || m[r][c2].is_zero() {
                    new_row.push(p.clone());
                } else {
                    let corr = factor.mul(&m[r][c2], field).scale(&(-BigRat::one()), field);
                    new_row.push(p.add(&corr, field));
                }
            }
            next.push(new_row);
        }
        d[k] = next;
        if k + 1 < d.len() {
            d[k + 1].remove(c);
        }
        if k >= 2 {
            for row in d[k - 1].iter_mut() {
                row.remove(r);
            }
        }
        degrees[k].remove(c);
        degrees[k - 1].remove(r);
    }
    Ok(degrees.iter().map(|g| g.len()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::{LaplacianMatrix, SigmaVector};
    use crate::scarf::periodic::scarf_complex_laplacian;

    fn example_resolution() -> (LabelledComplex, FreeComplex) {
        let gen = LaplacianMatrix::from_i64_rows(&[vec![60, -36, -24], vec![-12, 39, -27], vec![-12, -14, 26]]).unwrap();
        let s = SigmaVector::from_i64(&[1, 2, 3]).unwrap();
        let sc = scarf_complex_laplacian(&gen, &s).unwrap();
        let base = vec![vec![-1, 3, -2], vec![-1, -1, 2]];
        let gen_rows = vec![vec![-12, 39, -27], vec![-12, -14, 26]];
        let lc = relabel_degenerate(&sc, &base, &gen_rows).unwrap();
        let fc = free_complex(&lc).unwrap();
        (lc, fc)
    }

    #[test]
    fn relabeled_vertices() {
        let (lc, _) = example_resolution();
        let r = lc.relabeling();
        assert_eq!(r.apply(&[0, 0, 0]).unwrap(), vec![0, 0, 0]);
        assert_eq!(r.apply(&[-12, -14, 26]).unwrap(), vec![-1, -1, 2]);
        assert_eq!(r.apply(&[-36, -42, 78]).unwrap(), vec![-3, -3, 6]);
        assert_eq!(r.apply(&[-48, -56, 104]).unwrap(), vec![-4, -4, 8]);
        assert!(r.apply(&[-1, -1, 2]).is_err());
    }

    #[test]
    fn example_complex() {
        let (lc, fc) = example_resolution();
        assert_eq!(fc.ranks(), vec![1, 3, 2]);
        assert!(fc.differential_squares_vanish(Field::Rationals));
        assert!(fc.exponents_nonnegative());
        assert!(check_exactness(&fc, &lc, Field::Rationals));
        assert!(check_exactness(&fc, &lc, Field::Prime(3)));
        assert_eq!(minimize_complex(&fc, Field::Rationals, None).unwrap(), vec![1, 2, 1]);
        for seed in 0..10 {
            assert_eq!(minimize_complex(&fc, Field::Rationals, Some(seed)).unwrap(), vec![1, 2, 1]);
        }
    }

    #[test]
    fn dropping_an_edge_breaks_exactness() {
        let (lc, _) = example_resolution();
        for e in 0..lc.classes[1].len() {
            let broken = lc.drop_class(1, e);
            let fc = free_complex(&broken).unwrap();
            assert!(!check_exactness(&fc, &broken, Field::Rationals));
        }
    }

    #[test]
    fn small_complexes() {
        let single = FreeComplex {
            degrees: vec![vec![vec![0, 0]]],
            d: vec![Vec::new()],
        };
        assert_eq!(minimize_complex(&single, Field::Rationals, None).unwrap(), vec![1]);
        let unit = FreeComplex {
            degrees: vec![vec![vec![0, 0]], vec![vec![0, 0]]],
            d: vec![Vec::new(), vec![vec![Poly::monomial(vec![0, 0], BigRat::one())]]],
        };
        assert_eq!(minimize_complex(&unit, Field::Rationals, None).unwrap(), vec![0, 0]);
        let x = FreeComplex {
            degrees: vec![vec![vec![0, 0]], vec![vec![1, 0]]],
            d: vec![Vec::new(), vec![vec![Poly::monomial(vec![1, 0], BigRat::one())]]],
        };
        assert_eq!(minimize_complex(&x, Field::Rationals, None).unwrap(), vec![1, 1]);
        let bad = FreeComplex {
            degrees: vec![vec![vec![0]], vec![vec![1]], vec![vec![2]]],
            d: vec![
                Vec::new(),
                vec![vec![Poly::monomial(vec![1], BigRat::one())]],
                vec![vec![Poly::monomial(vec![1], BigRat::one())]],
            ],
        };
        assert!(minimize_complex(&bad, Field::Rationals, None).is_err());
    }
}

