//! Exact rational linear algebra.
//!
//! Rank decisions run fraction-free (Bareiss elimination on the
//! denominator-cleared integer matrix); everything else is Gaussian
//! elimination over rationals with exact pivots. No floating pivots.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

use crate::{Error, Result};

pub type Q = BigRational;

pub fn q_zero() -> Q {
    Q::zero()
}

pub fn q_one() -> Q {
    Q::one()
}

pub fn q_int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn q_ratio(p: i64, q: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(q))
}

/// Dense row-major rational matrix used inside exact algorithms.
#[derive(Clone, Debug, PartialEq)]
pub struct QMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Q>,
}

impl QMat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        QMat {
            rows,
            cols,
            data: vec![Q::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = QMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Q::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Q>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        QMat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Q) -> Self {
        let mut m = QMat::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn row(&self, i: usize) -> &[Q] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> QMat {
        QMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn mul(&self, other: &QMat) -> QMat {
        assert_eq!(self.cols, other.rows);
        QMat::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Q::zero();
            for k in 0..self.cols {
                acc += &self[(i, k)] * &other[(k, j)];
            }
            acc
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn scale(&self, s: &Q) -> QMat {
        QMat::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * s)
    }

    pub fn trace(&self) -> Q {
        assert_eq!(self.rows, self.cols);
        let mut t = Q::zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        t
    }
}

impl std::ops::Index<(usize, usize)> for QMat {
    type Output = Q;
    fn index(&self, (i, j): (usize, usize)) -> &Q {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Q {
        &mut self.data[i * self.cols + j]
    }
}

/// Rank via fraction-free (Bareiss) elimination on the integer matrix
/// obtained by clearing row denominators. Exact for any input.
pub fn rank(m: &QMat) -> usize {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|i| {
            let lcm = m.row(i).iter().fold(BigInt::one(), |acc, v| {
                if v.is_zero() {
                    acc
                } else {
                    acc.lcm(v.denom())
                }
            });
            m.row(i)
                .iter()
                .map(|v| v.numer() * (&lcm / v.denom()))
                .collect()
        })
        .collect();
    let rows = m.rows;
    let cols = m.cols;
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
    }
    r
}

/// Reduced row echelon form; returns (rref, pivot columns).
pub fn rref(m: &QMat) -> (QMat, Vec<usize>) {
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..a.cols {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        for j in 0..a.cols {
            let tmp = a[(r, j)].clone();
            a[(r, j)] = a[(p, j)].clone();
            a[(p, j)] = tmp;
        }
        let inv = a[(r, c)].recip();
        for j in 0..a.cols {
            a[(r, j)] = &a[(r, j)] * &inv;
        }
        for i in 0..a.rows {
            if i != r && !a[(i, c)].is_zero() {
                let f = a[(i, c)].clone();
                for j in 0..a.cols {
                    let v = &a[(i, j)] - &(&f * &a[(r, j)]);
                    a[(i, j)] = v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn det(m: &QMat) -> Q {
    assert_eq!(m.rows, m.cols);
    let mut a = m.clone();
    let n = a.rows;
    let mut sign = 1i64;
    let mut d = Q::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[(i, c)].is_zero()) else {
            return Q::zero();
        };
        if p != c {
            for j in 0..n {
                let tmp = a[(c, j)].clone();
                a[(c, j)] = a[(p, j)].clone();
                a[(p, j)] = tmp;
            }
            sign = -sign;
        }
        d *= &a[(c, c)];
        let inv = a[(c, c)].recip();
        for i in c + 1..n {
            if a[(i, c)].is_zero() {
                continue;
            }
            let f = &a[(i, c)] * &inv;
            for j in c + 1..n {
                let v = &a[(i, j)] - &(&f * &a[(c, j)]);
                a[(i, j)] = v;
            }
            a[(i, c)] = Q::zero();
        }
    }
    if sign < 0 {
        -d
    } else {
        d
    }
}

pub fn inverse(m: &QMat) -> Result<QMat> {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut aug = QMat::zero(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, n + i)] = Q::one();
    }
    let (r, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] >= n {
        return Err(Error::Singular);
    }
    Ok(QMat::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
}

/// Solve `m x = b` for a single right-hand side. Errors when inconsistent
/// or underdetermined.
pub fn solve(m: &QMat, b: &[Q]) -> Result<Vec<Q>> {
    assert_eq!(m.rows, b.len());
    let mut aug = QMat::zero(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            aug[(i, j)] = m[(i, j)].clone();
        }
        aug[(i, m.cols)] = b[i].clone();
    }
    let (r, pivots) = rref(&aug);
    if pivots.contains(&m.cols) {
        return Err(Error::Singular);
    }
    if pivots.len() < m.cols {
        return Err(Error::Degenerate("underdetermined system".into()));
    }
    let mut x = vec![Q::zero(); m.cols];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = r[(row, m.cols)].clone();
    }
    Ok(x)
}

/// Basis of the column space, returned as columns of an n-by-rank matrix.
pub fn column_space(m: &QMat) -> QMat {
    let (_, pivots) = rref(m);
    QMat::from_fn(m.rows, pivots.len(), |i, j| m[(i, pivots[j])].clone())
}

/// Exact positive-semidefiniteness and rank of a symmetric rational matrix,
/// by pivoted Schur-complement descent.
pub fn psd_status(m: &QMat) -> (bool, usize) {
    assert_eq!(m.rows, m.cols);
    let mut a = m.clone();
    let mut alive: Vec<usize> = (0..m.rows).collect();
    let mut rank = 0;
    loop {
        if alive.is_empty() {
            return (true, rank);
        }
        // A PSD matrix with a zero diagonal entry has a zero row/column.
        let mut pivot = None;
        for (ai, &i) in alive.iter().enumerate() {
            let d = &a[(i, i)];
            if d.is_negative() {
                return (false, rank);
            }
            if d.is_positive() && pivot.is_none() {
                pivot = Some(ai);
            }
        }
        match pivot {
            None => {
                // All diagonal entries vanish: PSD iff the rest vanishes too.
                for &i in &alive {
                    for &j in &alive {
                        if !a[(i, j)].is_zero() {
                            return (false, rank);
                        }
                    }
                }
                return (true, rank);
            }
            Some(ai) => {
                let i = alive.remove(ai);
                let inv = a[(i, i)].recip();
                for &r in &alive {
                    for &c in &alive {
                        let v = &a[(r, c)] - &(&(&a[(r, i)] * &a[(i, c)]) * &inv);
                        a[(r, c)] = v;
                    }
                }
                rank += 1;
            }
        }
    }
}

/// Exact definiteness class of a symmetric rational matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefinite { rank: usize },
    Indefinite,
    NegativeSemidefinite,
}

pub fn definiteness(m: &QMat) -> Definiteness {
    let (psd, rank) = psd_status(m);
    if psd {
        if rank == m.rows {
            return Definiteness::PositiveDefinite;
        }
        return Definiteness::PositiveSemidefinite { rank };
    }
    let neg = m.scale(&-Q::one());
    let (nsd, _) = psd_status(&neg);
    if nsd {
        Definiteness::NegativeSemidefinite
    } else {
        Definiteness::Indefinite
    }
}

/// Leading principal minor of order `k` (1-based order).
pub fn leading_principal_minor(m: &QMat, k: usize) -> Q {
    det(&QMat::from_fn(k, k, |i, j| m[(i, j)].clone()))
}

/// Clear denominators and divide by the content, preserving sign: the
/// primitive integer representative of a rational vector.
pub fn primitive_vector(v: &[Q]) -> Vec<Q> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| {
        if x.is_zero() {
            acc
        } else {
            acc.lcm(x.denom())
        }
    });
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let gcd = ints
        .iter()
        .fold(BigInt::zero(), |acc, x| acc.gcd(&x.abs()));
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter()
        .map(|x| Q::from_integer(x / &gcd))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m3(rows: [[i64; 3]; 3]) -> QMat {
        QMat::from_fn(3, 3, |i, j| q_int(rows[i][j]))
    }

    #[test]
    fn rank_and_det() {
        let m = m3([[1, 2, 3], [4, 5, 6], [7, 8, 9]]);
        assert_eq!(rank(&m), 2);
        assert_eq!(det(&m), q_zero());
        let id = QMat::identity(3);
        assert_eq!(rank(&id), 3);
        assert_eq!(det(&id), q_one());
    }

    #[test]
    fn inverse_round_trip() {
        let m = m3([[2, 1, 0], [1, 3, 1], [0, 1, 2]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv), QMat::identity(3));
    }

    #[test]
    fn psd_detection() {
        let pd = m3([[2, 1, 0], [1, 2, 0], [0, 0, 1]]);
        assert_eq!(definiteness(&pd), Definiteness::PositiveDefinite);
        let rank1 = m3([[1, 1, 0], [1, 1, 0], [0, 0, 0]]);
        assert_eq!(
            definiteness(&rank1),
            Definiteness::PositiveSemidefinite { rank: 1 }
        );
        let indef = m3([[1, 0, 0], [0, -1, 0], [0, 0, 0]]);
        assert_eq!(definiteness(&indef), Definiteness::Indefinite);
        // Zero diagonal with a nonzero off-diagonal entry is not PSD.
        let hollow = m3([[0, 1, 0], [1, 0, 0], [0, 0, 0]]);
        assert!(!psd_status(&hollow).0);
    }

    #[test]
    fn primitive_vectors() {
        let v = vec![q_ratio(2, 3), q_ratio(-4, 3), q_zero()];
        let p = primitive_vector(&v);
        assert_eq!(p, vec![q_int(1), q_int(-2), q_zero()]);
    }

    #[test]
    fn column_space_basis() {
        let m = m3([[1, 1, 2], [0, 0, 0], [1, 1, 2]]);
        let cs = column_space(&m);
        assert_eq!(cs.cols, 1);
        assert_eq!(cs[(0, 0)], q_int(1));
        assert_eq!(cs[(2, 0)], q_int(1));
    }
}
