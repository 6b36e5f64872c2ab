//! Dense matrices over a cyclotomic field, with exact rank/kernel/solve.
//!
//! Elimination uses the deterministic pivot rule "first nonzero in column
//! order", so echelon forms, kernel bases and quotient bases are
//! reproducible bit for bit.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::cyclo::CycloNum;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    order: u64,
    rows: usize,
    cols: usize,
    entries: Vec<CycloNum>,
}

impl Matrix {
    pub fn zeros(order: u64, rows: usize, cols: usize) -> Matrix {
        Matrix {
            order,
            rows,
            cols,
            entries: vec![CycloNum::zero(order); rows * cols],
        }
    }

    pub fn identity(order: u64, n: usize) -> Matrix {
        let mut m = Matrix::zeros(order, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = CycloNum::one(order);
        }
        m
    }

    /// Build from rows, promoting every entry to the lcm of entry orders.
    pub fn from_rows(rows: Vec<Vec<CycloNum>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map(|row| row.len()).unwrap_or(0);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let mut order = 1u64;
        for row in &rows {
            for e in row {
                order = num::Integer::lcm(&order, &e.order());
            }
        }
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            for e in row {
                entries.push(e.promote(order)?);
            }
        }
        Ok(Matrix {
            order,
            rows: r,
            cols: c,
            entries,
        })
    }

    pub fn from_columns(order: u64, cols: &[Vec<CycloNum>]) -> Result<Matrix> {
        let c = cols.len();
        let r = cols.first().map(|v| v.len()).unwrap_or(0);
        let mut m = Matrix::zeros(order, r, c);
        for (j, col) in cols.iter().enumerate() {
            if col.len() != r {
                return Err(Error::DimensionMismatch("ragged columns".into()));
            }
            for (i, e) in col.iter().enumerate() {
                *m.at_mut(i, j) = e.promote(order)?;
            }
        }
        Ok(m)
    }

    pub fn from_int_rows(order: u64, rows: &[&[i64]]) -> Matrix {
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&k| CycloNum::from_int(k).promote(order).unwrap()).collect())
            .collect();
        Matrix::from_rows(data).unwrap()
    }

    pub fn order(&self) -> u64 {
        self.order
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

    pub fn at(&self, i: usize, j: usize) -> &CycloNum {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut CycloNum {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> Vec<CycloNum> {
        (0..self.cols).map(|j| self.at(i, j).clone()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<CycloNum> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn promote_order(&self, target: u64) -> Result<Matrix> {
        if target == self.order {
            return Ok(self.clone());
        }
        let entries: Result<Vec<CycloNum>> =
            self.entries.iter().map(|e| e.promote(target)).collect();
        Ok(Matrix {
            order: target,
            rows: self.rows,
            cols: self.cols,
            entries: entries?,
        })
    }

    /// Promote two matrices to a shared field order.
    pub fn common_order(a: &Matrix, b: &Matrix) -> Result<(Matrix, Matrix)> {
        let target = num::Integer::lcm(&a.order, &b.order);
        Ok((a.promote_order(target)?, b.promote_order(target)?))
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.order, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *m.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        m
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("add".into()));
        }
        let (a, b) = Matrix::common_order(self, other)?;
        let entries = a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| x + y)
            .collect();
        Ok(Matrix {
            order: a.order,
            rows: a.rows,
            cols: a.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn scale(&self, s: &CycloNum) -> Matrix {
        let target = num::Integer::lcm(&self.order, &s.order());
        let s = s.promote(target).unwrap();
        let m = self.promote_order(target).unwrap();
        Matrix {
            order: target,
            rows: m.rows,
            cols: m.cols,
            entries: m.entries.iter().map(|e| e * &s).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (a, b) = Matrix::common_order(self, other)?;
        let mut m = Matrix::zeros(a.order, a.rows, b.cols);
        for i in 0..a.rows {
            for k in 0..a.cols {
                let aik = a.at(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let bkj = b.at(k, j);
                    if !bkj.is_zero() {
                        let t = aik * bkj;
                        let cur = m.at(i, j).clone();
                        *m.at_mut(i, j) = &cur + &t;
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn mul_vec(&self, v: &[CycloNum]) -> Result<Vec<CycloNum>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("mul_vec".into()));
        }
        let mut out = vec![CycloNum::zero(self.order); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if !a.is_zero() && !v[j].is_zero() {
                    out[i] = &out[i] + &(a * &v[j]);
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> CycloNum {
        let mut t = CycloNum::zero(self.order);
        for i in 0..self.rows.min(self.cols) {
            t = &t + self.at(i, i);
        }
        t
    }

    /// Reduced row echelon form; returns (rref, pivot columns).
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut piv = None;
            for i in r..m.rows {
                if !m.at(i, c).is_zero() {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            if p != r {
                for j in 0..m.cols {
                    let tmp = m.at(r, j).clone();
                    *m.at_mut(r, j) = m.at(p, j).clone();
                    *m.at_mut(p, j) = tmp;
                }
            }
            let inv = m.at(r, c).try_inv().expect("pivot nonzero");
            for j in c..m.cols {
                let v = m.at(r, j) * &inv;
                *m.at_mut(r, j) = v;
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let f = m.at(i, c).clone();
                    for j in c..m.cols {
                        let v = m.at(i, j) - &(m.at(r, j) * &f);
                        *m.at_mut(i, j) = v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Rank and the canonical reduced-echelon kernel basis.
    ///
    /// For each non-pivot column f the basis vector has 1 at f and
    /// -rref[p][f] at each pivot column; vectors are listed by ascending
    /// free column, so the output is deterministic.
    pub fn rank_and_kernel(&self) -> (usize, Vec<Vec<CycloNum>>) {
        let (rref, pivots) = self.rref();
        let rank = pivots.len();
        let pivot_set: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in &pivots {
                v[c] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivot_set[f] {
                continue;
            }
            let mut v = vec![CycloNum::zero(self.order); self.cols];
            v[f] = CycloNum::one(self.order);
            for (p, &c) in pivots.iter().enumerate() {
                if c < f {
                    v[c] = -rref.at(p, f);
                }
            }
            basis.push(v);
        }
        (rank, basis)
    }

    /// Fraction-free (Bareiss) rank; the independent elimination route used
    /// as an oracle against `rank`.
    pub fn rank_bareiss(&self) -> usize {
        let mut m = self.clone();
        let mut prev = CycloNum::one(m.order);
        let mut rank = 0usize;
        let mut r = 0usize;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let mut piv = None;
            for i in r..m.rows {
                if !m.at(i, c).is_zero() {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else { continue };
            if p != r {
                for j in 0..m.cols {
                    let tmp = m.at(r, j).clone();
                    *m.at_mut(r, j) = m.at(p, j).clone();
                    *m.at_mut(p, j) = tmp;
                }
            }
            let pivot = m.at(r, c).clone();
            for i in (r + 1)..m.rows {
                for j in (c + 1)..m.cols {
                    let num = &(&pivot * m.at(i, j)) - &(m.at(i, c) * m.at(r, j));
                    let v = num.try_div(&prev).expect("bareiss division is exact");
                    *m.at_mut(i, j) = v;
                }
                *m.at_mut(i, c) = CycloNum::zero(m.order);
            }
            prev = pivot;
            rank += 1;
            r += 1;
        }
        rank
    }

    pub fn det(&self) -> Result<CycloNum> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("det of non-square".into()));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = CycloNum::one(m.order);
        for c in 0..n {
            let mut piv = None;
            for i in c..n {
                if !m.at(i, c).is_zero() {
                    piv = Some(i);
                    break;
                }
            }
            let Some(p) = piv else {
                return Ok(CycloNum::zero(m.order));
            };
            if p != c {
                for j in 0..n {
                    let tmp = m.at(c, j).clone();
                    *m.at_mut(c, j) = m.at(p, j).clone();
                    *m.at_mut(p, j) = tmp;
                }
                det = -&det;
            }
            let pivot = m.at(c, c).clone();
            det = &det * &pivot;
            let inv = pivot.try_inv().expect("pivot nonzero");
            for i in (c + 1)..n {
                if !m.at(i, c).is_zero() {
                    let f = m.at(i, c) * &inv;
                    for j in c..n {
                        let v = m.at(i, j) - &(m.at(c, j) * &f);
                        *m.at_mut(i, j) = v;
                    }
                }
            }
        }
        Ok(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of non-square".into()));
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(self.order, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = CycloNum::one(self.order);
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots.iter().enumerate().any(|(k, &c)| c != k) {
            return Err(Error::NotInvertible { index: 0 });
        }
        let mut inv = Matrix::zeros(self.order, n, n);
        for i in 0..n {
            for j in 0..n {
                *inv.at_mut(i, j) = r.at(i, n + j).clone();
            }
        }
        Ok(inv)
    }

    /// Characteristic polynomial, ascending coefficients, monic of degree n
    /// (Faddeev-LeVerrier; exact over characteristic zero).
    pub fn char_poly(&self) -> Result<Vec<CycloNum>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("char_poly of non-square".into()));
        }
        let n = self.rows;
        let mut coeffs = vec![CycloNum::zero(self.order); n + 1];
        coeffs[n] = CycloNum::one(self.order);
        let mut ak = self.clone();
        for k in 1..=n {
            let c = {
                let t = ak.trace();
                let kq = CycloNum::from_int(k as i64).promote(self.order).unwrap();
                -&t.try_div(&kq).unwrap()
            };
            coeffs[n - k] = c.clone();
            if k < n {
                let mut shifted = ak.clone();
                for i in 0..n {
                    let v = shifted.at(i, i) + &c;
                    *shifted.at_mut(i, i) = v;
                }
                ak = self.mul(&shifted)?;
            }
        }
        Ok(coeffs)
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch("hstack".into()));
        }
        let (a, b) = Matrix::common_order(self, other)?;
        let mut m = Matrix::zeros(a.order, a.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                *m.at_mut(i, j) = a.at(i, j).clone();
            }
            for j in 0..b.cols {
                *m.at_mut(i, a.cols + j) = b.at(i, j).clone();
            }
        }
        Ok(m)
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch("vstack".into()));
        }
        let (a, b) = Matrix::common_order(self, other)?;
        let mut m = Matrix::zeros(a.order, a.rows + b.rows, a.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                *m.at_mut(i, j) = a.at(i, j).clone();
            }
        }
        for i in 0..b.rows {
            for j in 0..a.cols {
                *m.at_mut(a.rows + i, j) = b.at(i, j).clone();
            }
        }
        Ok(m)
    }

    pub fn block(&self, top: usize, left: usize, height: usize, width: usize) -> Matrix {
        let mut m = Matrix::zeros(self.order, height, width);
        for i in 0..height {
            for j in 0..width {
                *m.at_mut(i, j) = self.at(top + i, left + j).clone();
            }
        }
        m
    }

    /// Write `block` into self at (top, left).
    pub fn set_block(&mut self, top: usize, left: usize, block: &Matrix) {
        let b = block.promote_order(self.order).expect("order divides");
        for i in 0..b.rows {
            for j in 0..b.cols {
                *self.at_mut(top + i, left + j) = b.at(i, j).clone();
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.at(i, j).is_one()
                    } else {
                        self.at(i, j).is_zero()
                    }
                })
            })
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Matrix {}x{} over Q(zeta_{})",
            self.rows, self.cols, self.order
        )?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.at(i, j).render()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    order: u64,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<String>>,
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).render()).collect())
            .collect();
        MatrixRepr {
            order: self.order,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(deserializer)?;
        if repr.entries.len() != repr.rows
            || repr.entries.iter().any(|r| r.len() != repr.cols)
        {
            return Err(D::Error::custom("entry shape mismatch"));
        }
        let rows: std::result::Result<Vec<Vec<CycloNum>>, D::Error> = repr
            .entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| CycloNum::parse(repr.order, s).map_err(D::Error::custom))
                    .collect()
            })
            .collect();
        let m = Matrix::from_rows(rows?).map_err(D::Error::custom)?;
        m.promote_order(repr.order).map_err(D::Error::custom)
    }
}
