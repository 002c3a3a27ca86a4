//! Dense exact linear algebra, generic over the scalar ring. The scalar trait
//! uses `zero_like`/`one_like` because our rings carry runtime parameters
//! (the cyclotomic prime p, the field size q), so nullary constructors cannot
//! build elements.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
}

pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
}

pub trait FieldScalar: Scalar {
    /// None exactly when the element is zero.
    fn inv(&self) -> Option<Self>;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| self.mul(&i))
    }
}

impl Scalar for crate::cyclotomic::CyclotomicRat {
    fn zero_like(&self) -> Self {
        Self::zero(self.p())
    }
    fn one_like(&self) -> Self {
        Self::one(self.p())
    }
    fn is_zero(&self) -> bool {
        // the inherent method shadows the trait method in this path
        CyclotomicRat::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        CyclotomicRat::add(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        CyclotomicRat::sub(self, rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        CyclotomicRat::mul(self, rhs)
    }
    fn neg(&self) -> Self {
        CyclotomicRat::neg(self)
    }
}

use crate::cyclotomic::CyclotomicRat;

impl FieldScalar for CyclotomicRat {
    fn inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        if r == 0 {
            return Err(LinalgError::Shape("empty matrix".into()));
        }
        let c = rows[0].len();
        if c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, elem: T) -> Self {
        Matrix { rows, cols, data: vec![elem; rows * cols] }
    }

    pub fn identity(n: usize, sample: &T) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { sample.one_like() } else { sample.zero_like() })
    }

    pub fn diagonal(entries: Vec<T>) -> Self {
        let n = entries.len();
        assert!(n > 0);
        let zero = entries[0].zero_like();
        let mut m = Self::filled(n, n, zero);
        for (i, e) in entries.into_iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn sample(&self) -> &T {
        &self.data[0]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn map<U: Scalar>(&self, mut f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| f(x)).collect() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.neg()).collect() }
    }

    pub fn scalar_mul(&self, s: &T) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| a.mul(s)).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in mul");
        let zero = self.data[0].zero_like();
        let mut out = Matrix::filled(self.rows, rhs.cols, zero);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u64) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows, self.sample());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square());
        let mut t = self.data[0].zero_like();
        for i in 0..self.rows {
            t = t.add(self.get(i, i));
        }
        t
    }

    pub fn is_identity(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        let one = self.data[0].one_like();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if i == j {
                    if *e != one {
                        return false;
                    }
                } else if !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// If the matrix is s * Id, return s.
    pub fn as_scalar(&self) -> Option<T> {
        if !self.is_square() {
            return None;
        }
        let s = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                if i == j {
                    if *e != s {
                        return None;
                    }
                } else if !e.is_zero() {
                    return None;
                }
            }
        }
        Some(s)
    }

    pub fn is_diagonal(&self) -> bool {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && !self.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

impl<T: FieldScalar> Matrix<T> {
    pub fn det(&self) -> T {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut det = self.data[0].one_like();
        for col in 0..n {
            // pivot search
            let pivot = (col..n).find(|&r| !m.get(r, col).is_zero());
            let pr = match pivot {
                Some(pr) => pr,
                None => return self.data[0].zero_like(),
            };
            if pr != col {
                for j in 0..n {
                    let a = m.get(col, j).clone();
                    let b = m.get(pr, j).clone();
                    m.set(col, j, b);
                    m.set(pr, j, a);
                }
                det = det.neg();
            }
            let piv = m.get(col, col).clone();
            det = det.mul(&piv);
            let piv_inv = piv.inv().expect("nonzero pivot");
            for r in col + 1..n {
                let factor = m.get(r, col).mul(&piv_inv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = m.get(r, j).sub(&factor.mul(m.get(col, j)));
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = Self::identity(n, self.sample());
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m.get(r, col).is_zero()).ok_or(LinalgError::Singular)?;
            if pivot != col {
                for j in 0..n {
                    let a = m.get(col, j).clone();
                    m.set(col, j, m.get(pivot, j).clone());
                    m.set(pivot, j, a);
                    let a = inv.get(col, j).clone();
                    inv.set(col, j, inv.get(pivot, j).clone());
                    inv.set(pivot, j, a);
                }
            }
            let piv_inv = m.get(col, col).inv().ok_or(LinalgError::Singular)?;
            for j in 0..n {
                m.set(col, j, m.get(col, j).mul(&piv_inv));
                inv.set(col, j, inv.get(col, j).mul(&piv_inv));
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = m.get(r, j).sub(&factor.mul(m.get(col, j)));
                    m.set(r, j, v);
                    let v = inv.get(r, j).sub(&factor.mul(inv.get(col, j)));
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Basis of the right kernel { v : M v = 0 }.
    pub fn kernel(&self) -> Vec<Vec<T>> {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let zero = m.data[0].zero_like();
        let one = m.data[0].one_like();
        let mut pivot_col_of_row: Vec<usize> = Vec::new();
        let mut row = 0usize;
        for col in 0..cols {
            let pr = (row..rows).find(|&r| !m.get(r, col).is_zero());
            let pr = match pr {
                Some(pr) => pr,
                None => continue,
            };
            if pr != row {
                for j in 0..cols {
                    let a = m.get(row, j).clone();
                    m.set(row, j, m.get(pr, j).clone());
                    m.set(pr, j, a);
                }
            }
            let piv_inv = m.get(row, col).inv().expect("nonzero pivot");
            for j in 0..cols {
                m.set(row, j, m.get(row, j).mul(&piv_inv));
            }
            for r in 0..rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in 0..cols {
                    let v = m.get(r, j).sub(&factor.mul(m.get(row, j)));
                    m.set(r, j, v);
                }
            }
            pivot_col_of_row.push(col);
            row += 1;
            if row == rows {
                break;
            }
        }
        let pivot_cols: Vec<usize> = pivot_col_of_row.clone();
        let mut basis = Vec::new();
        for free in 0..cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![zero.clone(); cols];
            v[free] = one.clone();
            for (r, &pc) in pivot_col_of_row.iter().enumerate() {
                v[pc] = m.get(r, free).neg();
            }
            basis.push(v);
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.cols - self.kernel().len()
    }

    /// If self == s * rhs for a scalar s, return it.
    pub fn scalar_quotient(&self, rhs: &Self) -> Option<T> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return None;
        }
        let idx = rhs.data.iter().position(|x| !x.is_zero())?;
        let s = self.data[idx].div(&rhs.data[idx])?;
        for (a, b) in self.data.iter().zip(&rhs.data) {
            if *a != s.mul(b) {
                return None;
            }
        }
        Some(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::CyclotomicRat;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> CyclotomicRat {
        CyclotomicRat::new(
            crate::cyclotomic::CyclotomicInt::from_integer(7, BigInt::from(n)),
            BigInt::from(d),
        )
        .unwrap()
    }

    fn m(rows: Vec<Vec<i64>>) -> Matrix<CyclotomicRat> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(|x| q(x, 1)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn det_and_inverse() {
        let a = m(vec![vec![2, 1], vec![1, 1]]);
        assert_eq!(a.det(), q(1, 1));
        let ai = a.inverse().unwrap();
        assert!(a.mul(&ai).is_identity());
        let b = m(vec![vec![1, 2], vec![2, 4]]);
        assert!(b.det().is_zero());
        assert!(b.inverse().is_err());
    }

    #[test]
    fn det_with_zeta_entries() {
        // det [[zeta, 0],[0, zeta^-1]] = 1
        let z = CyclotomicRat::zeta_pow(7, 1);
        let zi = CyclotomicRat::zeta_pow(7, -1);
        let d = Matrix::diagonal(vec![z, zi]);
        assert!(d.det().is_one());
    }

    #[test]
    fn kernel_of_rank_one() {
        let b = m(vec![vec![1, 2], vec![2, 4]]);
        let k = b.kernel();
        assert_eq!(k.len(), 1);
        // M v = 0
        let v = &k[0];
        for i in 0..2 {
            let mut s = q(0, 1);
            for j in 0..2 {
                s = s.add(&b.get(i, j).mul(&v[j]));
            }
            assert!(s.is_zero());
        }
        assert_eq!(b.rank(), 1);
    }

    #[test]
    fn power_and_scalar_quotient() {
        let a = m(vec![vec![0, -1], vec![1, 0]]);
        assert!(a.pow(4).is_identity());
        let two_a = a.scalar_mul(&q(2, 1));
        assert_eq!(two_a.scalar_quotient(&a), Some(q(2, 1)));
        let b = m(vec![vec![0, -1], vec![1, 1]]);
        assert_eq!(two_a.scalar_quotient(&b), None);
    }

    #[test]
    fn fraction_entries_round_trip() {
        let a = Matrix::from_rows(vec![vec![q(1, 2), q(1, 3)], vec![q(1, 5), q(1, 7)]]).unwrap();
        let ai = a.inverse().unwrap();
        assert!(ai.mul(&a).is_identity());
        let js = serde_json::to_string(&a).unwrap();
        let back: Matrix<CyclotomicRat> = serde_json::from_str(&js).unwrap();
        assert_eq!(back, a);
    }
}
