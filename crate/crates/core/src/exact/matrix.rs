use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational as BigRat;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRat>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            data: vec![BigRat::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRat::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRat>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(ExactMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_int_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().cloned().map(BigRat::from_integer).collect())
                .collect(),
        )
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRat::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRat {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRat) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRat] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRat>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &BigRat> {
        self.data.iter()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput("matrix shape mismatch in product".into()));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let v = out.get(r, c) + a * other.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &ExactMatrix) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidInput("matrix shape mismatch in sum".into()));
        }
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &ExactMatrix) -> Result<Self> {
        self.add(&other.scale(&-BigRat::one()))
    }

    pub fn scale(&self, s: &BigRat) -> Self {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Row vector times matrix: `vᵀ·M`.
    pub fn left_mul(&self, v: &[BigRat]) -> Vec<BigRat> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![BigRat::zero(); self.cols];
        for (r, vr) in v.iter().enumerate() {
            if vr.is_zero() {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o += vr * self.get(r, c);
            }
        }
        out
    }

    /// Matrix times column vector: `M·v`.
    pub fn right_mul(&self, v: &[BigRat]) -> Vec<BigRat> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Reduced row echelon form and the pivot columns.
    pub fn rref(&self) -> (ExactMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(p) = (pr..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            m.swap_rows(pr, p);
            let inv = m.get(pr, c).recip();
            for k in 0..m.cols {
                let v = m.get(pr, k) * &inv;
                m.set(pr, k, v);
            }
            for r in 0..m.rows {
                if r == pr || m.get(r, c).is_zero() {
                    continue;
                }
                let f = m.get(r, c).clone();
                for k in 0..m.cols {
                    let v = m.get(r, k) - &f * m.get(pr, k);
                    m.set(r, k, v);
                }
            }
            pivots.push(c);
            pr += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{x : M·x = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<BigRat>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![BigRat::zero(); self.cols];
                x[f] = BigRat::one();
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = -r.get(i, f).clone();
                }
                x
            })
            .collect()
    }

    /// Basis of the left kernel `{y : yᵀ·M = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<BigRat>> {
        self.transpose().nullspace()
    }

    pub fn determinant(&self) -> Result<BigRat> {
        if !self.is_square() {
            return Err(Error::InvalidInput("determinant of non-square matrix".into()));
        }
        let mut m = self.clone();
        let mut det = BigRat::one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                return Ok(BigRat::zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let piv = m.get(c, c).clone();
            det *= &piv;
            for r in c + 1..m.rows {
                if m.get(r, c).is_zero() {
                    continue;
                }
                let f = m.get(r, c) / &piv;
                for k in c..m.cols {
                    let v = m.get(r, k) - &f * m.get(c, k);
                    m.set(r, k, v);
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::InvalidInput("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, BigRat::one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c).clone());
            }
        }
        Ok(inv)
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.is_integer())
    }

    pub fn to_int_rows(&self) -> Option<Vec<Vec<BigInt>>> {
        if !self.is_integral() {
            return None;
        }
        Some(
            (0..self.rows)
                .map(|r| self.row(r).iter().map(|v| v.to_integer()).collect())
                .collect(),
        )
    }

    /// Entrywise 1-norm (sum of absolute values).
    pub fn entrywise_l1(&self) -> BigRat {
        self.data.iter().map(|v| v.abs()).sum()
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Fraction-free determinant of a square integer matrix.
pub fn bareiss_determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
