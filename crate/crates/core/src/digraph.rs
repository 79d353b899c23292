//! Weighted digraphs, their Laplacians `Q = D − A`, the positive left-kernel
//! vector `Σ`, and the cone of Laplacians sharing a given `Σ`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{primitive_integer_vector, vec_to_i64, BigRat, ExactMatrix};

/// Directed graph on vertices `0..vertex_count` with positive rational edge
/// weights. Parallel edges are merged by adding weights.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedDigraph {
    vertex_count: usize,
    edges: BTreeMap<(usize, usize), BigRat>,
}

impl WeightedDigraph {
    pub fn new(vertex_count: usize) -> Self {
        WeightedDigraph {
            vertex_count,
            edges: BTreeMap::new(),
        }
    }

    pub fn add_edge(&mut self, src: usize, dst: usize, weight: BigRat) -> Result<()> {
        if src >= self.vertex_count || dst >= self.vertex_count {
            return Err(Error::InvalidInput(format!("edge ({src},{dst}) out of range")));
        }
        if src == dst {
            return Err(Error::InvalidInput(format!("self-loop at vertex {src}")));
        }
        if !weight.is_positive() {
            return Err(Error::InvalidInput(format!("edge ({src},{dst}) has weight {weight}")));
        }
        *self.edges.entry((src, dst)).or_insert_with(BigRat::zero) += weight;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &BigRat)> {
        self.edges.iter().map(|(&(s, d), w)| (s, d, w))
    }

    pub fn successors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.range((v, 0)..(v + 1, 0)).map(|(&(_, d), _)| d)
    }

    pub fn laplacian(&self) -> LaplacianMatrix {
        let n = self.vertex_count;
        let mut m = ExactMatrix::zeros(n, n);
        for (&(s, d), w) in &self.edges {
            m.set(s, s, m.get(s, s) + w);
            m.set(s, d, m.get(s, d) - w);
        }
        LaplacianMatrix { m }
    }

    /// Strong connectivity via Tarjan's strongly connected components.
    pub fn is_strongly_connected(&self) -> bool {
        self.vertex_count <= 1 || strongly_connected_components(self).len() == 1
    }
}

/// Tarjan's algorithm; components are returned in reverse topological order.
pub fn strongly_connected_components(g: &WeightedDigraph) -> Vec<Vec<usize>> {
    struct State {
        index: Vec<Option<usize>>,
        low: Vec<usize>,
        on_stack: Vec<bool>,
        stack: Vec<usize>,
        next: usize,
        out: Vec<Vec<usize>>,
    }

    fn visit(g: &WeightedDigraph, v: usize, st: &mut State) {
        st.index[v] = Some(st.next);
        st.low[v] = st.next;
        st.next += 1;
        st.stack.push(v);
        st.on_stack[v] = true;
        for w in g.successors(v) {
            match st.index[w] {
                None => {
                    visit(g, w, st);
                    st.low[v] = st.low[v].min(st.low[w]);
                }
                Some(iw) if st.on_stack[w] => st.low[v] = st.low[v].min(iw),
                Some(_) => {}
            }
        }
        if Some(st.low[v]) == st.index[v] {
            let mut comp = Vec::new();
            while let Some(w) = st.stack.pop() {
                st.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            st.out.push(comp);
        }
    }

    let n = g.vertex_count();
    let mut st = State {
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        out: Vec::new(),
    };
    for v in 0..n {
        if st.index[v].is_none() {
            visit(g, v, &mut st);
        }
    }
    st.out
}

/// Square matrix with zero row sums, nonpositive off-diagonal and
/// nonnegative diagonal entries. Row `i` is the firing vector of `v_i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LaplacianMatrix {
    m: ExactMatrix,
}

impl LaplacianMatrix {
    pub fn new(m: ExactMatrix) -> Result<Self> {
        if !m.is_square() || m.rows() < 1 {
            return Err(Error::InvalidInput("Laplacian must be square".into()));
        }
        for r in 0..m.rows() {
            if !m.row(r).iter().sum::<BigRat>().is_zero() {
                return Err(Error::InvalidInput(format!("Laplacian row {r} does not sum to zero")));
            }
            for c in 0..m.cols() {
                let v = m.get(r, c);
                if r != c && v.is_positive() {
                    return Err(Error::InvalidInput(format!("positive off-diagonal entry at ({r},{c})")));
                }
            }
        }
        Ok(LaplacianMatrix { m })
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(ExactMatrix::from_i64_rows(rows)?)
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.m
    }

    /// Number of vertices, `n + 1`.
    pub fn size(&self) -> usize {
        self.m.rows()
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRat {
        self.m.get(r, c)
    }

    pub fn digraph(&self) -> WeightedDigraph {
        let mut g = WeightedDigraph::new(self.size());
        for r in 0..self.size() {
            for c in 0..self.size() {
                if r != c && self.get(r, c).is_negative() {
                    g.add_edge(r, c, -self.get(r, c).clone())
                        .expect("negative off-diagonal entries are valid edges");
                }
            }
        }
        g
    }

    /// `self + s·other`, which stays a Laplacian for `s ≥ 0`.
    pub fn add_scaled(&self, other: &LaplacianMatrix, s: &BigRat) -> Result<Self> {
        Self::new(self.m.add(&other.m.scale(s))?)
    }

    pub fn scaled(&self, s: &BigRat) -> Result<Self> {
        Self::new(self.m.scale(s))
    }

    pub fn is_integral(&self) -> bool {
        self.m.is_integral()
    }

    /// Entries as machine integers; fails on fractional or huge entries.
    pub fn integer_rows(&self) -> Result<Vec<Vec<i64>>> {
        let rows = self
            .m
            .to_int_rows()
            .ok_or_else(|| Error::InvalidInput("Laplacian has non-integral entries".into()))?;
        rows.iter().map(|r| vec_to_i64(r)).collect()
    }
}

/// The primitive, strictly positive integer vector spanning the left kernel
/// of a strongly connected Laplacian.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaVector(Vec<BigInt>);

impl SigmaVector {
    pub fn new(entries: Vec<BigInt>) -> Result<Self> {
        if entries.is_empty() || entries.iter().any(|e| !e.is_positive()) {
            return Err(Error::InvalidInput("sigma entries must be strictly positive".into()));
        }
        let g = entries.iter().fold(BigInt::zero(), |a, e| a.gcd(e));
        if !g.is_one() {
            return Err(Error::InvalidInput("sigma must be primitive".into()));
        }
        Ok(SigmaVector(entries))
    }

    pub fn from_i64(entries: &[i64]) -> Result<Self> {
        Self::new(entries.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_i64(&self) -> Result<Vec<i64>> {
        vec_to_i64(&self.0)
    }

    pub fn as_rationals(&self) -> Vec<BigRat> {
        self.0.iter().cloned().map(BigRat::from_integer).collect()
    }

    /// `Π_s Σ_s`.
    pub fn product(&self) -> BigInt {
        self.0.iter().product()
    }
}

pub fn left_kernel_sigma(q: &LaplacianMatrix) -> Result<SigmaVector> {
    let kernel = q.matrix().left_kernel();
    if kernel.len() != 1 {
        return Err(Error::NotStronglyConnected(format!(
            "left kernel has dimension {}",
            kernel.len()
        )));
    }
    let mut v = primitive_integer_vector(&kernel[0]);
    if v.iter().all(|x| !x.is_positive()) {
        v = v.into_iter().map(|x| -x).collect();
    }
    if v.iter().any(|x| !x.is_positive()) {
        return Err(Error::NotStronglyConnected("left kernel has no positive generator".into()));
    }
    SigmaVector::new(v)
}

/// Membership in the cone `C_Σ`: Laplacian sign pattern, zero row sums and a
/// one-dimensional left kernel spanned by `sigma`.
pub fn cone_membership(q: &ExactMatrix, sigma: &SigmaVector) -> bool {
    if !q.is_square() || q.rows() != sigma.len() {
        return false;
    }
    let Ok(lap) = LaplacianMatrix::new(q.clone()) else {
        return false;
    };
    if lap.matrix().left_mul(&sigma.as_rationals()).iter().any(|v| !v.is_zero()) {
        return false;
    }
    q.left_kernel().len() == 1
}

/// A weighted directed cycle `v_{c_0} → v_{c_1} → … → v_{c_0}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleRay {
    pub vertices: Vec<usize>,
    pub weight: BigRat,
}

/// Laplacian of the cycle with edge `v_i → v_j` of weight `1/Σ_i` for each
/// consecutive pair.
pub fn ray_laplacian(cycle: &[usize], sigma: &SigmaVector) -> Result<LaplacianMatrix> {
    let n = sigma.len();
    if cycle.len() < 2 || cycle.iter().any(|&v| v >= n) {
        return Err(Error::InvalidInput("cycle needs at least two in-range vertices".into()));
    }
    let mut g = WeightedDigraph::new(n);
    for (k, &a) in cycle.iter().enumerate() {
        let b = cycle[(k + 1) % cycle.len()];
        g.add_edge(a, b, BigRat::new(BigInt::one(), sigma.entries()[a].clone()))?;
    }
    Ok(g.laplacian())
}

/// Writes a member of `C_Σ` as a positive combination of cycle rays by
/// peeling cycles off the Eulerian rescaling `diag(Σ)·Q`.
pub fn cycle_ray_decomposition(q: &LaplacianMatrix, sigma: &SigmaVector) -> Result<Vec<CycleRay>> {
    if !cone_membership(q.matrix(), sigma) {
        return Err(Error::InvalidInput("matrix is not in the cone C_sigma".into()));
    }
    let n = q.size();
    let mut w: Vec<Vec<BigRat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRat::zero()
                    } else {
                        -q.get(i, j) * BigRat::from_integer(sigma.entries()[i].clone())
                    }
                })
                .collect()
        })
        .collect();

    let mut rays = Vec::new();
    while let Some(start) = (0..n).find(|&i| w[i].iter().any(|x| x.is_positive())) {
        let cycle = smallest_cycle_from(&w, start)
            .ok_or_else(|| Error::InvalidInput("rescaled matrix is not Eulerian".into()))?;
        let weight = (0..cycle.len())
            .map(|k| w[cycle[k]][cycle[(k + 1) % cycle.len()]].clone())
            .min()
            .expect("cycle is nonempty");
        for k in 0..cycle.len() {
            let (a, b) = (cycle[k], cycle[(k + 1) % cycle.len()]);
            w[a][b] -= &weight;
        }
        rays.push(CycleRay {
            vertices: cycle,
            weight,
        });
    }
    Ok(rays)
}

fn smallest_cycle_from(w: &[Vec<BigRat>], start: usize) -> Option<Vec<usize>> {
    fn dfs(w: &[Vec<BigRat>], start: usize, path: &mut Vec<usize>, seen: &mut [bool]) -> bool {
        let v = *path.last().expect("path starts at the root");
        for next in 0..w.len() {
            if !w[v][next].is_positive() {
                continue;
            }
            if next == start {
                return true;
            }
            if !seen[next] {
                seen[next] = true;
                path.push(next);
                if dfs(w, start, path, seen) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
    let mut path = vec![start];
    let mut seen = vec![false; w.len()];
    seen[start] = true;
    dfs(w, start, &mut path, &mut seen).then_some(path)
}

/// `Σ weight_c · RayLaplacian(c)`.
pub fn reconstruct_from_rays(rays: &[CycleRay], sigma: &SigmaVector) -> Result<LaplacianMatrix> {
    let n = sigma.len();
    let mut acc = LaplacianMatrix::new(ExactMatrix::zeros(n, n))?;
    for ray in rays {
        acc = acc.add_scaled(&ray_laplacian(&ray.vertices, sigma)?, &ray.weight)?;
    }
    Ok(acc)
}
