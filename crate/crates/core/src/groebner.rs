//! Chip-firing Gröbner bases of Laplacian lattice ideals, grevlex term
//! orders, normal forms and the genericity test.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

use num_traits::Zero;

use crate::digraph::{LaplacianMatrix, SigmaVector, WeightedDigraph};
use crate::error::{Error, Result};
use crate::exact::{int, BigRat};

/// Exponent difference `u` of the binomial `x^{u⁺} − x^{u⁻}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Binomial {
    u: Vec<i64>,
}

impl Binomial {
    pub fn new(u: Vec<i64>) -> Result<Self> {
        if u.iter().all(|&x| x == 0) {
            return Err(Error::InvalidInput("binomial exponent must be nonzero".into()));
        }
        Ok(Binomial { u })
    }

    pub fn exponent(&self) -> &[i64] {
        &self.u
    }

    pub fn positive_part(&self) -> Vec<i64> {
        self.u.iter().map(|&x| x.max(0)).collect()
    }

    pub fn negative_part(&self) -> Vec<i64> {
        self.u.iter().map(|&x| (-x).max(0)).collect()
    }

    pub fn has_full_support(&self) -> bool {
        self.u.iter().all(|&x| x != 0)
    }

    pub fn negated(&self) -> Binomial {
        Binomial {
            u: self.u.iter().map(|x| -x).collect(),
        }
    }
}

/// Graded reverse lexicographic order. `ranking` lists the variables from
/// largest to smallest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TermOrder {
    ranking: Vec<usize>,
}

impl TermOrder {
    pub fn grevlex(ranking: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; ranking.len()];
        for &v in &ranking {
            if v >= ranking.len() || seen[v] {
                return Err(Error::InvalidInput("term order ranking is not a permutation".into()));
            }
            seen[v] = true;
        }
        Ok(TermOrder { ranking })
    }

    /// `x_1 > x_2 > … > x_n > x_0`.
    pub fn standard(vars: usize) -> Self {
        let mut ranking: Vec<usize> = (1..vars).collect();
        ranking.push(0);
        TermOrder { ranking }
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    pub fn vars(&self) -> usize {
        self.ranking.len()
    }

    pub fn root_is_minimal(&self) -> bool {
        self.ranking.last() == Some(&0)
    }

    pub fn compare(&self, a: &[i64], b: &[i64]) -> Ordering {
        let da: i64 = a.iter().sum();
        let db: i64 = b.iter().sum();
        if da != db {
            return da.cmp(&db);
        }
        for &v in self.ranking.iter().rev() {
            if a[v] != b[v] {
                // more of the smallest variable means smaller
                return b[v].cmp(&a[v]);
            }
        }
        Ordering::Equal
    }
}

/// Term order from a BFS in-tree rooted at `v_0`: vertices farther from the
/// root are larger, ties broken by smaller index first.
pub fn spanning_tree_order(g: &WeightedDigraph) -> Result<TermOrder> {
    if !g.is_strongly_connected() {
        return Err(Error::NotStronglyConnected("spanning tree order needs a strongly connected digraph".into()));
    }
    let n = g.vertex_count();
    let mut preds = vec![Vec::new(); n];
    for (s, d, _) in g.edges() {
        preds[d].push(s);
    }
    let mut level = vec![usize::MAX; n];
    level[0] = 0;
    let mut queue = VecDeque::from([0usize]);
    while let Some(v) = queue.pop_front() {
        for &p in &preds[v] {
            if level[p] == usize::MAX {
                level[p] = level[v] + 1;
                queue.push_back(p);
            }
        }
    }
    let mut ranking: Vec<usize> = (0..n).collect();
    ranking.sort_by(|&a, &b| level[b].cmp(&level[a]).then(a.cmp(&b)));
    Ok(TermOrder { ranking })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedBinomial {
    pub binomial: Binomial,
    /// True when `x^{u⁺}` is the leading term.
    pub positive_leads: bool,
    /// Firing vector that produced the binomial.
    pub source: Vec<i64>,
}

impl MarkedBinomial {
    pub fn mark(binomial: Binomial, ord: &TermOrder, source: Vec<i64>) -> Result<Self> {
        let p = binomial.positive_part();
        let m = binomial.negative_part();
        let positive_leads = match ord.compare(&p, &m) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => return Err(Error::InvalidInput("binomial has equal terms".into())),
        };
        Ok(MarkedBinomial {
            binomial,
            positive_leads,
            source,
        })
    }

    pub fn leading(&self) -> Vec<i64> {
        if self.positive_leads {
            self.binomial.positive_part()
        } else {
            self.binomial.negative_part()
        }
    }

    pub fn trailing(&self) -> Vec<i64> {
        if self.positive_leads {
            self.binomial.negative_part()
        } else {
            self.binomial.positive_part()
        }
    }

    /// Exponent oriented as leading minus trailing.
    pub fn oriented(&self) -> Vec<i64> {
        if self.positive_leads {
            self.binomial.u.clone()
        } else {
            self.binomial.negated().u
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedGb {
    pub order: TermOrder,
    pub binomials: Vec<MarkedBinomial>,
}

impl MarkedGb {
    pub fn len(&self) -> usize {
        self.binomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.binomials.is_empty()
    }
}

/// All `x` in `0 ≤ x ≤ bound` in lexicographic order.
pub(crate) fn box_points(bound: &[i64]) -> Vec<Vec<i64>> {
    let n = bound.len();
    let mut out = Vec::new();
    let mut x = vec![0i64; n];
    loop {
        out.push(x.clone());
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if x[k] < bound[k] {
                x[k] += 1;
                break;
            }
            x[k] = 0;
        }
    }
}

fn transpose_apply(q: &[Vec<i64>], x: &[i64]) -> Result<Vec<i64>> {
    let n = q.len();
    let mut u = vec![0i64; n];
    for (xi, row) in x.iter().zip(q) {
        for (uj, qij) in u.iter_mut().zip(row) {
            *uj = xi
                .checked_mul(*qij)
                .and_then(|t| uj.checked_add(t))
                .ok_or_else(|| Error::Overflow("binomial exponent".into()))?;
        }
    }
    debug_assert_eq!(u.len(), n);
    Ok(u)
}

/// `{x^{u⁺} − x^{u⁻} : u = Qᵀx, 0 ≤ x ≤ Σ, x_0 = 0, x ≠ 0}` with `±u`
/// duplicates merged and leading terms marked.
pub fn grobner_basis(q: &LaplacianMatrix, sigma: &SigmaVector, ord: &TermOrder) -> Result<MarkedGb> {
    if sigma.entries().first() != Some(&int(1)) {
        return Err(Error::InvalidInput("the chip-firing basis needs Σ_0 = 1".into()));
    }
    if !q.is_integral() {
        return Err(Error::InvalidInput("the chip-firing basis needs an integral Laplacian".into()));
    }
    if ord.vars() != q.size() || sigma.len() != q.size() {
        return Err(Error::InvalidInput("dimension mismatch".into()));
    }
    let rows = q.integer_rows()?;
    let mut bound = sigma.to_i64()?;
    bound[0] = 0;
    let mut seen = BTreeSet::new();
    let mut binomials = Vec::new();
    for x in box_points(&bound).into_iter().skip(1) {
        let u = transpose_apply(&rows, &x)?;
        let neg: Vec<i64> = u.iter().map(|v| -v).collect();
        if seen.contains(&u) || seen.contains(&neg) {
            continue;
        }
        seen.insert(u.clone());
        binomials.push(MarkedBinomial::mark(Binomial::new(u)?, ord, x)?);
    }
    Ok(MarkedGb {
        order: ord.clone(),
        binomials,
    })
}

fn divides(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Largest `k` with `k·lead ≤ m`, zero if `lead` does not divide `m`.
fn reduction_multiplicity(lead: &[i64], m: &[i64]) -> i64 {
    lead.iter()
        .zip(m)
        .filter(|(l, _)| **l > 0)
        .map(|(l, x)| x / l)
        .min()
        .unwrap_or(0)
}

/// Reduce with the first applicable binomial, applied as many times as
/// its leading term divides, until no leading term divides.
pub fn normal_form(gb: &MarkedGb, monomial: &[i64]) -> Vec<i64> {
    normal_form_by(gb, monomial, &mut |candidates| candidates[0])
}

/// Normal form with a caller-chosen reducer among the applicable ones.
pub fn normal_form_by(gb: &MarkedGb, monomial: &[i64], pick: &mut dyn FnMut(&[usize]) -> usize) -> Vec<i64> {
    let leads: Vec<Vec<i64>> = gb.binomials.iter().map(|b| b.leading()).collect();
    let oriented: Vec<Vec<i64>> = gb.binomials.iter().map(|b| b.oriented()).collect();
    let mut m = monomial.to_vec();
    loop {
        let applicable: Vec<usize> = (0..leads.len()).filter(|&i| divides(&leads[i], &m)).collect();
        if applicable.is_empty() {
            return m;
        }
        let i = pick(&applicable);
        let k = reduction_multiplicity(&leads[i], &m);
        for (x, d) in m.iter_mut().zip(&oriented[i]) {
            *x -= k * d;
        }
    }
}

/// Minimal generators of the ideal of leading terms, sorted.
pub fn initial_ideal_mingens(gb: &MarkedGb) -> Vec<Vec<i64>> {
    let leads: BTreeSet<Vec<i64>> = gb.binomials.iter().map(|b| b.leading()).collect();
    minimalize(leads.into_iter().collect())
}

pub(crate) fn minimalize(mut gens: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    gens.sort();
    gens.dedup();
    let keep: Vec<bool> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| !gens.iter().enumerate().any(|(j, h)| j != i && divides(h, g)))
        .collect();
    gens.into_iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| g).collect()
}

/// Lex-smallest `x` with `0 ≤ x ≤ Σ`, `x ∉ {0, Σ}`, together with the
/// smallest `i` such that `(Qᵀx)_i = 0`.
pub fn genericity_violation(q: &LaplacianMatrix, sigma: &SigmaVector) -> Result<Option<(Vec<i64>, usize)>> {
    let n = q.size();
    if sigma.len() != n {
        return Err(Error::InvalidInput("dimension mismatch".into()));
    }
    let bound = sigma.to_i64()?;
    let m = q.matrix();
    for x in box_points(&bound) {
        if x.iter().all(|&v| v == 0) || x == bound {
            continue;
        }
        for i in 0..n {
            let mut s = BigRat::zero();
            for (r, &xr) in x.iter().enumerate() {
                if xr != 0 {
                    s += m.get(r, i) * BigRat::from_integer(int(xr));
                }
            }
            if s.is_zero() {
                return Ok(Some((x, i)));
            }
        }
    }
    Ok(None)
}

/// Every S-pair of the basis reduces to zero.
pub fn check_spairs(gb: &MarkedGb) -> bool {
    let b = &gb.binomials;
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let (li, ti) = (b[i].leading(), b[i].trailing());
            let (lj, tj) = (b[j].leading(), b[j].trailing());
            let lcm: Vec<i64> = li.iter().zip(&lj).map(|(a, c)| *a.max(c)).collect();
            let left: Vec<i64> = (0..lcm.len()).map(|k| lcm[k] - li[k] + ti[k]).collect();
            let right: Vec<i64> = (0..lcm.len()).map(|k| lcm[k] - lj[k] + tj[k]).collect();
            if normal_form(gb, &left) != normal_form(gb, &right) {
                return false;
            }
        }
    }
    true
}

/// Monomials not divisible by any generator; `cap` bounds each exponent.
pub fn standard_monomials(gens: &[Vec<i64>], cap: &[i64]) -> Vec<Vec<i64>> {
    box_points(cap)
        .into_iter()
        .filter(|m| !gens.iter().any(|g| divides(g, m)))
        .collect()
}
