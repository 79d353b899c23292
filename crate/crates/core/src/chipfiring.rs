//! Directed chip-firing with `v_0` as the exempt vertex: legal firings,
//! superstabilization and randomized confluence checks.
//!
//! Only vertices other than `v_0` must stay out of debt.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::digraph::{LaplacianMatrix, SigmaVector};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChipConfig(pub Vec<i64>);

impl ChipConfig {
    pub fn chips(&self) -> &[i64] {
        &self.0
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilization {
    pub config: ChipConfig,
    pub script: Vec<i64>,
}

/// Integer Laplacian together with its kernel vector, ready for firing.
#[derive(Clone, Debug)]
pub struct ChipGame {
    q: Vec<Vec<i64>>,
    sigma: Vec<i64>,
}

impl ChipGame {
    pub fn new(q: &LaplacianMatrix, sigma: &SigmaVector) -> Result<Self> {
        let rows = q.integer_rows()?;
        let sigma = sigma.to_i64()?;
        if sigma.len() != rows.len() {
            return Err(Error::InvalidInput("sigma length does not match the Laplacian".into()));
        }
        Ok(ChipGame { q: rows, sigma })
    }

    pub fn size(&self) -> usize {
        self.q.len()
    }

    /// `c − Qᵀ·f`.
    pub fn fire(&self, c: &[i64], f: &[i64]) -> Vec<i64> {
        let mut out = c.to_vec();
        for (fi, row) in f.iter().zip(&self.q) {
            if *fi == 0 {
                continue;
            }
            for (o, q) in out.iter_mut().zip(row) {
                *o -= fi * q;
            }
        }
        out
    }

    fn check_config(&self, c: &[i64]) -> Result<()> {
        if c.len() != self.size() {
            return Err(Error::InvalidInput("configuration has the wrong length".into()));
        }
        if c[1..].iter().any(|&x| x < 0) {
            return Err(Error::InvalidInput("configuration must be nonnegative away from v_0".into()));
        }
        Ok(())
    }

    fn is_legal(&self, c: &[i64], f: &[i64]) -> bool {
        let after = self.fire(c, f);
        after[1..].iter().all(|&x| x >= 0)
    }

    /// Every nonzero `f` with `0 ≤ f ≤ Σ` and `f_0 = 0`, in lexicographic order.
    pub fn firing_box(&self) -> Vec<Vec<i64>> {
        let n = self.size();
        let mut out = Vec::new();
        let mut f = vec![0i64; n];
        loop {
            // odometer increment on coordinates 1..n, last coordinate fastest
            let mut k = n - 1;
            loop {
                if k == 0 {
                    return out;
                }
                if f[k] < self.sigma[k] {
                    f[k] += 1;
                    break;
                }
                f[k] = 0;
                k -= 1;
            }
            out.push(f.clone());
        }
    }

    pub fn legal_firings(&self, c: &[i64]) -> Result<Vec<Vec<i64>>> {
        self.check_config(c)?;
        Ok(self.firing_box().into_iter().filter(|f| self.is_legal(c, f)).collect())
    }

    /// Deterministic strategy: the lexicographically smallest legal
    /// single-vertex firing, else the lexicographically smallest legal firing.
    pub fn superstabilize(&self, c: &[i64]) -> Result<Stabilization> {
        self.check_config(c)?;
        let n = self.size();
        let all = self.firing_box();
        let mut cur = c.to_vec();
        let mut script = vec![0i64; n];
        loop {
            let single = (1..n).rev().find(|&i| cur[i] >= self.q[i][i] && self.q[i][i] > 0);
            let f = match single {
                Some(i) => {
                    let mut e = vec![0i64; n];
                    e[i] = 1;
                    e
                }
                None => match all.iter().find(|f| self.is_legal(&cur, f)) {
                    Some(f) => f.clone(),
                    None => break,
                },
            };
            cur = self.fire(&cur, &f);
            for (s, x) in script.iter_mut().zip(&f) {
                *s += x;
            }
        }
        Ok(Stabilization {
            config: ChipConfig(cur),
            script,
        })
    }

    /// Superstabilization choosing uniformly among all legal firings.
    pub fn superstabilize_random(&self, c: &[i64], seed: u64) -> Result<Stabilization> {
        self.check_config(c)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all = self.firing_box();
        let mut cur = c.to_vec();
        let mut script = vec![0i64; self.size()];
        loop {
            let legal: Vec<&Vec<i64>> = all.iter().filter(|f| self.is_legal(&cur, f)).collect();
            let Some(f) = legal.choose(&mut rng) else { break };
            cur = self.fire(&cur, f);
            for (s, x) in script.iter_mut().zip(f.iter()) {
                *s += x;
            }
        }
        Ok(Stabilization {
            config: ChipConfig(cur),
            script,
        })
    }

    /// Superstable configurations with `c_0 = 0`.
    pub fn superstables(&self) -> Vec<Vec<i64>> {
        let n = self.size();
        let all = self.firing_box();
        let mut out = Vec::new();
        let mut c = vec![0i64; n];
        // any legal firing is blocked once some vertex cannot fire alone, so
        // superstables satisfy c_i < Q_ii
        let caps: Vec<i64> = (0..n).map(|i| self.q[i][i]).collect();
        if caps[1..].iter().any(|&x| x <= 0) {
            return out;
        }
        loop {
            if all.iter().all(|f| !self.is_legal(&c, f)) {
                out.push(c.clone());
            }
            let mut k = n - 1;
            loop {
                if k == 0 {
                    return out;
                }
                if c[k] + 1 < caps[k] {
                    c[k] += 1;
                    break;
                }
                c[k] = 0;
                k -= 1;
            }
        }
    }
}

pub fn apply_firing(q: &LaplacianMatrix, c: &ChipConfig, f: &[i64]) -> Result<ChipConfig> {
    let rows = q.integer_rows()?;
    if f.len() != rows.len() || c.0.len() != rows.len() {
        return Err(Error::InvalidInput("firing has the wrong length".into()));
    }
    let mut out = c.0.clone();
    for (fi, row) in f.iter().zip(&rows) {
        for (o, x) in out.iter_mut().zip(row) {
            *o -= fi * x;
        }
    }
    Ok(ChipConfig(out))
}

pub fn legal_firings(q: &LaplacianMatrix, sigma: &SigmaVector, c: &ChipConfig) -> Result<Vec<Vec<i64>>> {
    ChipGame::new(q, sigma)?.legal_firings(&c.0)
}

pub fn superstabilize(q: &LaplacianMatrix, sigma: &SigmaVector, c: &ChipConfig) -> Result<Stabilization> {
    ChipGame::new(q, sigma)?.superstabilize(&c.0)
}

/// True iff randomized firing orders, one per seed, all reach the same
/// final configuration.
pub fn confluence_fuzz(q: &LaplacianMatrix, sigma: &SigmaVector, c: &ChipConfig, seeds: &[u64]) -> Result<bool> {
    let game = ChipGame::new(q, sigma)?;
    let reference = game.superstabilize(&c.0)?.config;
    for &s in seeds {
        if game.superstabilize_random(&c.0, s)?.config != reference {
            return Ok(false);
        }
    }
    Ok(true)
}
