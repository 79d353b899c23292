//! Coefficient fields, sparse Laurent-free polynomials and ranks.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::BigRat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Field {
    #[default]
    Rationals,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        let is_prime = p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0);
        if !is_prime {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "Q" | "q" | "rationals" | "QQ" => Ok(Field::Rationals),
            _ => {
                let digits = s.trim_start_matches("GF(").trim_start_matches("F").trim_end_matches(')');
                let p: u64 = digits
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("unknown field {s:?}")))?;
                Field::prime(p)
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Field::Rationals => "Q".into(),
            Field::Prime(p) => format!("F{p}"),
        }
    }

    /// Canonical representative: unchanged over Q, an integer in `[0,p)`
    /// over `F_p`.
    pub fn normalize(&self, v: BigRat) -> BigRat {
        match self {
            Field::Rationals => v,
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                let num = v.numer().mod_floor(&p);
                let den = v.denom().mod_floor(&p);
                BigRat::from_integer((num * mod_inverse(&den, &p)).mod_floor(&p))
            }
        }
    }

    pub fn is_zero(&self, v: &BigRat) -> bool {
        self.normalize(v.clone()).is_zero()
    }

    pub fn inv(&self, v: &BigRat) -> BigRat {
        match self {
            Field::Rationals => BigRat::one() / v,
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                let n = self.normalize(v.clone()).to_integer();
                BigRat::from_integer(mod_inverse(&n, &p))
            }
        }
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self, mut rows: Vec<Vec<BigRat>>) -> usize {
        for r in rows.iter_mut() {
            for v in r.iter_mut() {
                *v = self.normalize(std::mem::take(v));
            }
        }
        let cols = rows.first().map_or(0, |r| r.len());
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let inv = self.inv(&rows[rank][c]);
            let pivot: Vec<BigRat> = rows[rank].iter().map(|v| self.normalize(v * &inv)).collect();
            for r in rank + 1..rows.len() {
                if rows[r][c].is_zero() {
                    continue;
                }
                let f = rows[r][c].clone();
                for k in c..cols {
                    if !pivot[k].is_zero() {
                        let v = &rows[r][k] - &f * &pivot[k];
                        rows[r][k] = self.normalize(v);
                    }
                }
            }
            rows[rank] = pivot;
            rank += 1;
        }
        rank
    }
}

/// Sparse integer column, sorted by row.
pub type SparseColumn = Vec<(usize, i64)>;

/// Prime used for the fast modular pass over the rationals.
pub const CHECK_PRIME: u64 = 2_147_483_647;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as u128 * b as u128 % p as u128) as u64;
        }
        b = (b as u128 * b as u128 % p as u128) as u64;
        e >>= 1;
    }
    r
}

/// Rank modulo a prime `p < 2^32` by column reduction on the lowest
/// nonzero row.
pub fn sparse_rank_mod(cols: &[SparseColumn], p: u64) -> usize {
    let mut pivots: std::collections::HashMap<usize, Vec<(usize, u64)>> = std::collections::HashMap::new();
    let to_field = |v: i64| v.rem_euclid(p as i64) as u64;
    for col in cols {
        let mut v: Vec<(usize, u64)> = col.iter().map(|&(r, x)| (r, to_field(x))).filter(|(_, x)| *x != 0).collect();
        while let Some(&(low, lv)) = v.last() {
            let Some(pc) = pivots.get(&low) else {
                pivots.insert(low, v);
                break;
            };
            let (_, pv) = *pc.last().expect("pivot columns are nonempty");
            // v -= (lv / pv) * pc
            let f = (lv as u128 * pow_mod(pv, p - 2, p) as u128 % p as u128) as u64;
            let mut merged = Vec::with_capacity(v.len() + pc.len());
            let (mut i, mut j) = (0, 0);
            while i < v.len() || j < pc.len() {
                let take_v = j == pc.len() || (i < v.len() && v[i].0 < pc[j].0);
                let take_p = i == v.len() || (j < pc.len() && pc[j].0 < v[i].0);
                if take_v {
                    merged.push(v[i]);
                    i += 1;
                } else if take_p {
                    let x = (p - (f as u128 * pc[j].1 as u128 % p as u128) as u64) % p;
                    if x != 0 {
                        merged.push((pc[j].0, x));
                    }
                    j += 1;
                } else {
                    let sub = (f as u128 * pc[j].1 as u128 % p as u128) as u64;
                    let x = (v[i].1 + p - sub) % p;
                    if x != 0 {
                        merged.push((v[i].0, x));
                    }
                    i += 1;
                    j += 1;
                }
            }
            v = merged;
        }
    }
    pivots.len()
}

impl Field {
    /// Rank of an integer matrix given by sparse columns.
    pub fn sparse_rank(&self, cols: &[SparseColumn], rows: usize) -> usize {
        match self {
            Field::Prime(p) if *p < (1 << 32) => sparse_rank_mod(cols, *p),
            _ => {
                let mut dense = vec![vec![BigRat::zero(); cols.len()]; rows];
                for (c, col) in cols.iter().enumerate() {
                    for &(r, x) in col {
                        dense[r][c] = BigRat::from_integer(BigInt::from(x));
                    }
                }
                self.rank(dense)
            }
        }
    }
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    assert!(e.gcd.is_one(), "{a} is not invertible modulo {p}");
    e.x.mod_floor(p)
}

/// Polynomial with exponent vectors as keys; zero coefficients are never
/// stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Poly {
    terms: BTreeMap<Vec<i64>, BigRat>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn monomial(exp: Vec<i64>, coeff: BigRat) -> Self {
        let mut p = Poly::zero();
        if !coeff.is_zero() {
            p.terms.insert(exp, coeff);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigRat)> {
        self.terms.iter()
    }

    /// The coefficient if this is a nonzero scalar.
    pub fn scalar(&self) -> Option<&BigRat> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        e.iter().all(|&x| x == 0).then_some(c)
    }

    pub fn add_term(&mut self, exp: Vec<i64>, coeff: BigRat, field: Field) {
        let entry = self.terms.entry(exp).or_insert_with(BigRat::zero);
        *entry = field.normalize(&*entry + coeff);
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn add(&self, other: &Poly, field: Field) -> Poly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone(), field);
        }
        out
    }

    pub fn scale(&self, s: &BigRat, field: Field) -> Poly {
        let mut out = Poly::zero();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s, field);
        }
        out
    }

    pub fn mul(&self, other: &Poly, field: Field) -> Poly {
        let mut out = Poly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb, field);
            }
        }
        out
    }

    pub fn normalized(&self, field: Field) -> Poly {
        self.scale(&BigRat::one(), field)
    }
}
