//! Scarf complexes and lcm posets of monomial ideals.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::groebner::minimalize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialIdeal {
    generators: Vec<Vec<i64>>,
}

impl MonomialIdeal {
    /// Reduces the given monomials to a minimal generating set.
    pub fn new(generators: Vec<Vec<i64>>) -> Result<Self> {
        let vars = generators.first().map_or(0, |g| g.len());
        if generators.iter().any(|g| g.len() != vars || g.iter().any(|&x| x < 0)) {
            return Err(Error::InvalidInput("monomial exponents must be nonnegative and of equal length".into()));
        }
        Ok(MonomialIdeal {
            generators: minimalize(generators),
        })
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn vars(&self) -> usize {
        self.generators.first().map_or(0, |g| g.len())
    }
}

pub(crate) fn join<'a>(points: impl IntoIterator<Item = &'a Vec<i64>>) -> Vec<i64> {
    let mut it = points.into_iter();
    let mut m = it.next().expect("join of an empty set").clone();
    for p in it {
        for (a, b) in m.iter_mut().zip(p) {
            *a = (*a).max(*b);
        }
    }
    m
}

fn leq(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Finite simplicial complex on the generators of a monomial ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialScarf {
    pub vertices: Vec<Vec<i64>>,
    /// Sorted index sets, grouped by dimension.
    pub faces: Vec<Vec<Vec<usize>>>,
}

impl MonomialScarf {
    pub fn f_vector(&self) -> Vec<usize> {
        self.faces.iter().map(|f| f.len()).collect()
    }

    pub fn label(&self, face: &[usize]) -> Vec<i64> {
        join(face.iter().map(|&i| &self.vertices[i]))
    }
}

/// `S` is a face iff no generator outside `S` divides `lcm(S)` and
/// dropping any element lowers `lcm(S)`; this is equivalent to `lcm(S)`
/// being attained by no other subset.
pub fn scarf_complex_monomial(m: &MonomialIdeal) -> MonomialScarf {
    let g = m.generators();
    let mut faces: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut layer: Vec<Vec<usize>> = (0..g.len()).map(|i| vec![i]).collect();
    while !layer.is_empty() {
        let accepted: Vec<Vec<usize>> = layer
            .into_iter()
            .filter(|s| {
                let lcm = join(s.iter().map(|&i| &g[i]));
                let outside = (0..g.len()).filter(|i| !s.contains(i)).any(|i| leq(&g[i], &lcm));
                let needed = s.len() == 1
                    || (0..s.len()).all(|t| {
                        join(s.iter().enumerate().filter(|(k, _)| *k != t).map(|(_, &i)| &g[i])) != lcm
                    });
                !outside && needed
            })
            .collect();
        layer = Vec::new();
        for s in &accepted {
            for i in s.last().unwrap() + 1..g.len() {
                let mut t = s.clone();
                t.push(i);
                // every facet must already be a face
                let facets_ok = (0..t.len() - 1).all(|drop| {
                    let f: Vec<usize> = t.iter().enumerate().filter(|(k, _)| *k != drop).map(|(_, &x)| x).collect();
                    accepted.binary_search(&f).is_ok()
                });
                if facets_ok {
                    layer.push(t);
                }
            }
        }
        if !accepted.is_empty() {
            faces.push(accepted);
        }
    }
    MonomialScarf {
        vertices: g.to_vec(),
        faces,
    }
}

/// Distinct lcms of nonempty generator subsets, ordered by divisibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcmPoset {
    pub elements: Vec<Vec<i64>>,
    /// `below[a][b]` iff element `a` divides element `b`.
    below: Vec<Vec<bool>>,
}

impl LcmPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.below[a][b]
    }

    fn signature(&self, a: usize) -> (usize, usize) {
        let down = (0..self.len()).filter(|&b| self.below[b][a]).count();
        let up = (0..self.len()).filter(|&b| self.below[a][b]).count();
        (down, up)
    }

    /// Order isomorphism by backtracking over signature-compatible maps.
    pub fn is_isomorphic(&self, other: &LcmPoset) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let sa: Vec<_> = (0..self.len()).map(|a| self.signature(a)).collect();
        let sb: Vec<_> = (0..other.len()).map(|b| other.signature(b)).collect();
        let mut ka = sa.clone();
        let mut kb = sb.clone();
        ka.sort();
        kb.sort();
        if ka != kb {
            return false;
        }
        let mut map = vec![usize::MAX; self.len()];
        let mut used = vec![false; other.len()];
        self.extend_map(other, &sa, &sb, 0, &mut map, &mut used)
    }

    fn extend_map(
        &self,
        other: &LcmPoset,
        sa: &[(usize, usize)],
        sb: &[(usize, usize)],
        a: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if a == self.len() {
            return true;
        }
        for b in 0..other.len() {
            if used[b] || sa[a] != sb[b] {
                continue;
            }
            let consistent = (0..a).all(|c| {
                self.below[c][a] == other.below[map[c]][b] && self.below[a][c] == other.below[b][map[c]]
            });
            if !consistent {
                continue;
            }
            map[a] = b;
            used[b] = true;
            if self.extend_map(other, sa, sb, a + 1, map, used) {
                return true;
            }
            used[b] = false;
        }
        map[a] = usize::MAX;
        false
    }
}

/// Closure of the generators under pairwise joins, which equals the set of
/// subset lcms.
pub fn lcm_poset(m: &MonomialIdeal) -> LcmPoset {
    let mut set: BTreeSet<Vec<i64>> = m.generators().iter().cloned().collect();
    loop {
        let items: Vec<Vec<i64>> = set.iter().cloned().collect();
        let mut grew = false;
        for i in 0..items.len() {
            for j in i + 1..items.len() {
                if set.insert(join([&items[i], &items[j]])) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    let elements: Vec<Vec<i64>> = set.into_iter().collect();
    let below = elements
        .iter()
        .map(|a| elements.iter().map(|b| leq(a, b)).collect())
        .collect();
    LcmPoset { elements, below }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example_ideal() -> MonomialIdeal {
        MonomialIdeal::new(vec![vec![0, 25, 0], vec![12, 14, 0], vec![36, 0, 0]]).unwrap()
    }

    #[test]
    fn example_scarf_counts() {
        let s = scarf_complex_monomial(&example_ideal());
        assert_eq!(s.f_vector(), vec![3, 2]);
        let one = MonomialIdeal::new(vec![vec![2, 1]]).unwrap();
        assert_eq!(scarf_complex_monomial(&one).f_vector(), vec![1]);
        let xy = MonomialIdeal::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(scarf_complex_monomial(&xy).f_vector(), vec![2, 1]);
    }

    #[test]
    fn scarf_matches_unique_lcm_definition() {
        let ideals = [
            example_ideal(),
            MonomialIdeal::new(vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2], vec![1, 1, 1]]).unwrap(),
            MonomialIdeal::new(vec![vec![3, 1, 0], vec![0, 2, 2], vec![1, 0, 3], vec![2, 2, 1]]).unwrap(),
        ];
        for m in &ideals {
            let g = m.generators();
            let k = g.len();
            let lcms: Vec<Vec<i64>> = (1u32..1 << k)
                .map(|mask| join((0..k).filter(|i| mask >> i & 1 == 1).map(|i| &g[i])))
                .collect();
            let mut brute: Vec<Vec<usize>> = Vec::new();
            for mask in 1u32..1 << k {
                let l = &lcms[mask as usize - 1];
                if lcms.iter().filter(|x| *x == l).count() == 1 {
                    brute.push((0..k).filter(|i| mask >> i & 1 == 1).collect());
                }
            }
            brute.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
            let ours: Vec<Vec<usize>> = scarf_complex_monomial(m).faces.concat();
            assert_eq!(ours, brute);
        }
    }

    #[test]
    fn lcm_posets() {
        let xy = MonomialIdeal::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(lcm_poset(&xy).elements, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
        let p = lcm_poset(&example_ideal());
        assert_eq!(p.len(), 6);
        let doubled = MonomialIdeal::new(example_ideal().generators().iter().map(|g| g.iter().map(|x| 2 * x).collect()).collect()).unwrap();
        assert!(p.is_isomorphic(&lcm_poset(&doubled)));
        assert!(!p.is_isomorphic(&lcm_poset(&xy)));
    }
}
