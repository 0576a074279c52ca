//! Symmetric and square matrices over the scalar tower.
//!
//! `SymMatrix` stores only the upper triangle, so symmetry holds by
//! construction in both modes. The JSON form of any matrix is an
//! array-of-arrays whose entries are numbers or `"p/q"` strings.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::exact::{self, QMat, Q};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Symmetric n-by-n matrix; entry (i,j) with i <= j lives at the packed
/// upper-triangle index.
#[derive(Clone, Debug)]
pub struct SymMatrix {
    n: usize,
    ut: Vec<Scalar>,
}

fn pack(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

impl SymMatrix {
    pub fn zero(n: usize) -> Self {
        SymMatrix {
            n,
            ut: vec![Scalar::zero(); n * (n + 1) / 2],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SymMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn diag(entries: &[Scalar]) -> Self {
        let mut m = SymMatrix::zero(entries.len());
        for (i, v) in entries.iter().enumerate() {
            m.set(i, i, v.clone());
        }
        m
    }

    /// Build from full rows, verifying symmetry entry by entry.
    pub fn from_rows(rows: &[Vec<Scalar>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        for i in 0..n {
            for j in i + 1..n {
                let same = match (&rows[i][j], &rows[j][i]) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
                    (a, b) => a.to_f64() == b.to_f64(),
                };
                if !same {
                    return Err(Error::NotSymmetric(i, j));
                }
            }
        }
        let mut m = SymMatrix::zero(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, rows[i][j].clone());
            }
        }
        Ok(m)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = SymMatrix::zero(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Rank-one matrix `v vᵀ`.
    pub fn outer(v: &[Scalar]) -> Self {
        SymMatrix::from_fn(v.len(), |i, j| &v[i] * &v[j])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.ut[pack(self.n, i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.ut[pack(self.n, i, j)] = v;
    }

    pub fn is_exact(&self) -> bool {
        self.ut.iter().all(|v| v.is_exact())
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        SymMatrix::from_fn(self.n, |i, j| self.entry(i, j) + other.entry(i, j))
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, other.n);
        SymMatrix::from_fn(self.n, |i, j| self.entry(i, j) - other.entry(i, j))
    }

    pub fn scale(&self, s: &Scalar) -> SymMatrix {
        SymMatrix::from_fn(self.n, |i, j| self.entry(i, j) * s)
    }

    pub fn neg(&self) -> SymMatrix {
        SymMatrix::from_fn(self.n, |i, j| -self.entry(i, j))
    }

    pub fn trace(&self) -> Scalar {
        let mut t = Scalar::zero();
        for i in 0..self.n {
            t += self.entry(i, i);
        }
        t
    }

    /// The pairing tr(A·B) of two symmetric matrices.
    pub fn dot(&self, other: &SymMatrix) -> Scalar {
        assert_eq!(self.n, other.n);
        let mut t = Scalar::zero();
        for i in 0..self.n {
            t += &(self.entry(i, i) * other.entry(i, i));
            for j in i + 1..self.n {
                let two = Scalar::int(2);
                t += &(&(self.entry(i, j) * other.entry(i, j)) * &two);
            }
        }
        t
    }

    pub fn to_sq(&self) -> SqMatrix {
        SqMatrix::from_fn(self.n, |i, j| self.entry(i, j).clone())
    }

    pub fn det(&self) -> Scalar {
        self.to_sq().det()
    }

    pub fn inverse(&self) -> Result<SymMatrix> {
        let inv = self.to_sq().inverse()?;
        // The inverse of a symmetric matrix is symmetric; keep the upper
        // triangle of the computed product.
        Ok(SymMatrix::from_fn(self.n, |i, j| inv.entry(i, j).clone()))
    }

    /// Exact conversion; errors when any entry is a float.
    pub fn to_qmat(&self) -> Result<QMat> {
        if !self.is_exact() {
            return Err(Error::InexactInput("symmetric matrix".into()));
        }
        Ok(QMat::from_fn(self.n, self.n, |i, j| {
            self.entry(i, j).exact().unwrap().clone()
        }))
    }

    pub fn from_qmat(m: &QMat) -> SymMatrix {
        SymMatrix::from_fn(m.rows, |i, j| Scalar::Exact(m[(i, j)].clone()))
    }

    pub fn to_na(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.entry(i, j).to_f64())
    }

    pub fn from_na(m: &DMatrix<f64>) -> SymMatrix {
        SymMatrix::from_fn(m.nrows(), |i, j| Scalar::float((m[(i, j)] + m[(j, i)]) / 2.0))
    }

    /// Symmetric matrices as vectors: the packed upper triangle. The pairing
    /// tr(A·B) doubles off-diagonal products, see [`pairing_functional`].
    pub fn packed(&self) -> Vec<Scalar> {
        self.ut.clone()
    }

    pub fn from_packed(n: usize, ut: Vec<Scalar>) -> SymMatrix {
        assert_eq!(ut.len(), n * (n + 1) / 2);
        SymMatrix { n, ut }
    }

    /// Exact packed vector over the rationals.
    pub fn packed_q(&self) -> Result<Vec<Q>> {
        self.ut
            .iter()
            .map(|v| v.expect_exact("packed entry").cloned())
            .collect::<std::result::Result<Vec<_>, _>>()
    }

    pub fn from_packed_q(n: usize, v: &[Q]) -> SymMatrix {
        SymMatrix::from_packed(n, v.iter().map(|q| Scalar::Exact(q.clone())).collect())
    }

    /// Coefficients c with tr(A·Y) = Σ c_k y_k over packed coordinates of Y.
    pub fn pairing_functional(&self) -> Result<Vec<Q>> {
        let mut c = Vec::with_capacity(self.n * (self.n + 1) / 2);
        for i in 0..self.n {
            for j in i..self.n {
                let a = self.entry(i, j).expect_exact("pairing coefficient")?.clone();
                c.push(if i == j { a } else { a * exact::q_int(2) });
            }
        }
        Ok(c)
    }

    pub fn approx_eq(&self, other: &SymMatrix, tol: f64) -> bool {
        self.n == other.n
            && (0..self.n).all(|i| {
                (i..self.n).all(|j| (self.entry(i, j).to_f64() - other.entry(i, j).to_f64()).abs() <= tol)
            })
    }

    /// Exact equality of two exact matrices.
    pub fn exact_eq(&self, other: &SymMatrix) -> bool {
        self.n == other.n
            && self
                .ut
                .iter()
                .zip(other.ut.iter())
                .all(|(a, b)| match (a, b) {
                    (Scalar::Exact(x), Scalar::Exact(y)) => x == y,
                    _ => false,
                })
    }

    /// Frobenius norm of the float image.
    pub fn norm_f64(&self) -> f64 {
        let m = self.to_na();
        m.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

impl Serialize for SymMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Scalar>>::deserialize(d)?;
        SymMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// General square matrix over the scalar tower.
#[derive(Clone, Debug)]
pub struct SqMatrix {
    n: usize,
    m: Vec<Scalar>,
}

impl SqMatrix {
    pub fn zero(n: usize) -> Self {
        SqMatrix {
            n,
            m: vec![Scalar::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SqMatrix::zero(n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Scalar>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(SqMatrix {
            n,
            m: rows.iter().flatten().cloned().collect(),
        })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = SqMatrix::zero(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Integer literal rows, convenient for fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        SqMatrix::from_fn(rows.len(), |i, j| Scalar::int(rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.m[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.m[i * self.n + j] = v;
    }

    pub fn is_exact(&self) -> bool {
        self.m.iter().all(|v| v.is_exact())
    }

    pub fn rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.entry(i, j).clone()).collect())
            .collect()
    }

    pub fn transpose(&self) -> SqMatrix {
        SqMatrix::from_fn(self.n, |i, j| self.entry(j, i).clone())
    }

    pub fn mul(&self, other: &SqMatrix) -> SqMatrix {
        assert_eq!(self.n, other.n);
        SqMatrix::from_fn(self.n, |i, j| {
            let mut acc = Scalar::zero();
            for k in 0..self.n {
                acc += &(self.entry(i, k) * other.entry(k, j));
            }
            acc
        })
    }

    pub fn mul_sym(&self, s: &SymMatrix) -> SqMatrix {
        self.mul(&s.to_sq())
    }

    pub fn det(&self) -> Scalar {
        if let Ok(q) = self.to_qmat() {
            return Scalar::Exact(exact::det(&q));
        }
        let na = self.to_na();
        Scalar::float(na.determinant())
    }

    pub fn inverse(&self) -> Result<SqMatrix> {
        if let Ok(q) = self.to_qmat() {
            let inv = exact::inverse(&q)?;
            return Ok(SqMatrix::from_qmat(&inv));
        }
        let na = self.to_na();
        let inv = na.try_inverse().ok_or(Error::Singular)?;
        Ok(SqMatrix::from_na(&inv))
    }

    /// The congruence gᵀ M g, symmetric by construction.
    pub fn congruence(&self, m: &SymMatrix) -> SymMatrix {
        let gt = self.transpose();
        let prod = gt.mul_sym(m).mul(self);
        SymMatrix::from_fn(self.n, |i, j| prod.entry(i, j).clone())
    }

    pub fn to_qmat(&self) -> Result<QMat> {
        if !self.is_exact() {
            return Err(Error::InexactInput("square matrix".into()));
        }
        Ok(QMat::from_fn(self.n, self.n, |i, j| {
            self.entry(i, j).exact().unwrap().clone()
        }))
    }

    pub fn from_qmat(m: &QMat) -> SqMatrix {
        SqMatrix::from_fn(m.rows, |i, j| Scalar::Exact(m[(i, j)].clone()))
    }

    pub fn to_na(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.entry(i, j).to_f64())
    }

    pub fn from_na(m: &DMatrix<f64>) -> SqMatrix {
        SqMatrix::from_fn(m.nrows(), |i, j| Scalar::float(m[(i, j)]))
    }

    pub fn exact_eq(&self, other: &SqMatrix) -> bool {
        self.n == other.n
            && self
                .m
                .iter()
                .zip(other.m.iter())
                .all(|(a, b)| match (a, b) {
                    (Scalar::Exact(x), Scalar::Exact(y)) => x == y,
                    _ => false,
                })
    }

    pub fn is_identity_exact(&self) -> bool {
        self.exact_eq(&SqMatrix::identity(self.n))
    }
}

impl Serialize for SqMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SqMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<Scalar>>::deserialize(d)?;
        SqMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn packed_symmetry() {
        let m = SymMatrix::from_fn(3, |i, j| Scalar::int((i + 2 * j) as i64));
        assert_eq!(m.entry(0, 2), m.entry(2, 0));
        assert_eq!(m.entry(1, 2).to_f64(), 5.0);
    }

    #[test]
    fn from_rows_rejects_asymmetry() {
        let rows = vec![
            vec![Scalar::int(1), Scalar::int(2)],
            vec![Scalar::int(3), Scalar::int(4)],
        ];
        assert!(SymMatrix::from_rows(&rows).is_err());
    }

    #[test]
    fn dot_matches_trace_of_product() {
        let a = SymMatrix::from_fn(3, |i, j| Scalar::int((i * j + 1) as i64));
        let b = SymMatrix::from_fn(3, |i, j| Scalar::int((i + j) as i64));
        let prod = a.to_sq().mul(&b.to_sq());
        let mut tr = Scalar::zero();
        for i in 0..3 {
            tr += prod.entry(i, i);
        }
        assert_eq!(a.dot(&b), tr);
    }

    #[test]
    fn congruence_is_symmetric_and_exact() {
        let g = SqMatrix::from_i64(&[&[1, 2, 0], &[0, 1, 1], &[1, 0, 1]]);
        let x = SymMatrix::identity(3);
        let y = g.congruence(&x);
        assert!(y.is_exact());
        assert_eq!(y.entry(0, 1), y.entry(1, 0));
    }

    #[test]
    fn matrix_json_literal() {
        let m: SymMatrix =
            serde_json::from_str(r#"[["1/2","1/2"],["1/2","-1/2"]]"#).unwrap();
        assert!(m.is_exact());
        assert_eq!(m.entry(0, 1), &Scalar::ratio(1, 2));
        let sq: SqMatrix = serde_json::from_str(r#"[[1,0],[2,1]]"#).unwrap();
        assert_eq!(sq.det(), Scalar::one());
    }
}
