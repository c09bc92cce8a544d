use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flat_map(|row| row.iter().cloned().map(Into::into)).collect();
        IntegerMatrix { rows: r, cols: c, data }
    }

    pub(crate) fn from_row_vecs(rows: usize, cols: usize, vecs: Vec<Vec<BigInt>>) -> Self {
        debug_assert_eq!(vecs.len(), rows);
        let data: Vec<BigInt> = vecs.into_iter().flatten().collect();
        debug_assert_eq!(data.len(), rows * cols);
        IntegerMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    t.set(c, r, v.clone());
                }
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|v| !v.is_zero()).count()
    }

    /// Product `self · rhs`, skipping zero entries of `rhs`.
    pub fn mul(&self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for k in 0..rhs.rows {
            for j in 0..rhs.cols {
                let b = rhs.get(k, j);
                if b.is_zero() {
                    continue;
                }
                for i in 0..self.rows {
                    let a = self.get(i, k);
                    if !a.is_zero() {
                        out.data[i * rhs.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in product");
        let mut out = vec![BigInt::zero(); self.rows];
        for (k, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, k);
                if !a.is_zero() {
                    *o += a * x;
                }
            }
        }
        out
    }

    /// Rows `range` as a new matrix.
    pub fn select_rows(&self, range: std::ops::Range<usize>) -> IntegerMatrix {
        let rows = range.len();
        let data = self.data[range.start * self.cols..range.end * self.cols].to_vec();
        IntegerMatrix { rows, cols: self.cols, data }
    }

    /// Columns with the given indices as a new matrix.
    pub fn select_cols(&self, cols: &[usize]) -> IntegerMatrix {
        let mut out = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + k] = self.get(r, c).clone();
            }
        }
        out
    }

    /// `[self | rhs]`.
    pub fn hcat(&self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.rows, rhs.rows);
        let mut vecs = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = self.row(r).to_vec();
            row.extend_from_slice(rhs.row(r));
            vecs.push(row);
        }
        Self::from_row_vecs(self.rows, self.cols + rhs.cols, vecs)
    }

    /// `[self; rhs]`.
    pub fn vcat(&self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, rhs.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&rhs.data);
        IntegerMatrix { rows: self.rows + rhs.rows, cols: self.cols, data }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<BigInt>]) -> IntegerMatrix {
        let mut out = Self::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (r, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    out.set(r, c, v.clone());
                }
            }
        }
        out
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_row_vecs();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
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
        sign * a[n - 1][n - 1].clone()
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.determinant().abs().is_one()
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntegerMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// JSON number when the value fits in 64 bits, decimal string otherwise.
pub fn int_to_json(v: &BigInt) -> serde_json::Value {
    match i64::try_from(v) {
        Ok(x) => serde_json::Value::from(x),
        Err(_) => serde_json::Value::from(v.to_string()),
    }
}

pub fn int_from_json(v: &serde_json::Value) -> Option<BigInt> {
    match v {
        serde_json::Value::Number(n) => n.as_i64().map(BigInt::from),
        serde_json::Value::String(s) => s.parse().ok(),
        _ => None,
    }
}

impl Serialize for IntegerMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<serde_json::Value>> =
            (0..self.rows).map(|r| self.row(r).iter().map(int_to_json).collect()).collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntegerMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<Vec<serde_json::Value>> = Vec::deserialize(d)?;
        let rows = raw
            .iter()
            .map(|r| r.iter().map(int_from_json).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| serde::de::Error::custom("matrix entries must be integers"))?;
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != c) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        Ok(IntegerMatrix::from_row_vecs(rows.len(), c, rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinant_small() {
        let m = IntegerMatrix::from_rows(&[vec![2, 4], vec![6, 8]]);
        assert_eq!(m.determinant(), BigInt::from(-8));
        let m = IntegerMatrix::from_rows(&[vec![0, 1, 2], vec![1, 0, 3], vec![4, -3, 8]]);
        assert_eq!(m.determinant(), BigInt::from(-2));
        assert_eq!(IntegerMatrix::identity(4).determinant(), BigInt::one());
    }

    #[test]
    fn product_and_transpose() {
        let a = IntegerMatrix::from_rows(&[vec![1, 2, 0], vec![0, -1, 3]]);
        let b = a.transpose();
        let p = a.mul(&b);
        assert_eq!(p, IntegerMatrix::from_rows(&[vec![5, -2], vec![-2, 10]]));
        assert_eq!(a.mul_vec(&[1.into(), 1.into(), 1.into()]), vec![BigInt::from(3), BigInt::from(2)]);
    }

    #[test]
    #[should_panic]
    fn out_of_bounds_access_panics() {
        IntegerMatrix::zeros(2, 2).get(2, 0);
    }

    #[test]
    fn json_is_dense_rows() {
        let a = IntegerMatrix::from_rows(&[vec![1, -2], vec![0, 3]]);
        let text = serde_json::to_string(&a).unwrap();
        assert_eq!(text, "[[1,-2],[0,3]]");
        let back: IntegerMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
    }
}
