//! Univariate polynomials over the rationals, used to take exact limits of
//! matrix expressions along straight paths `β + εY` as `ε → 0⁺`.
//!
//! Degrees stay tiny (bounded by the matrix dimension), so dense
//! coefficient vectors and permutation-expansion determinants are fine.

use crate::exact::{Q, QMat};
use num::{One, Zero};

/// Polynomial in one variable with rational coefficients; index = power.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<Q>);

impl Poly {
    pub fn zero() -> Self {
        Poly(vec![])
    }

    pub fn constant(c: Q) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }

    /// `a + b·ε`.
    pub fn linear(a: Q, b: Q) -> Self {
        let mut p = Poly(vec![a, b]);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Q::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        let mut p = Poly(out);
        p.trim();
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Q::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        let mut p = Poly(out);
        p.trim();
        p
    }

    pub fn scale(&self, s: &Q) -> Poly {
        let mut p = Poly(self.0.iter().map(|c| c * s).collect());
        p.trim();
        p
    }

    /// Order of vanishing at 0 and the coefficient there, i.e. the term that
    /// dominates as the variable tends to 0⁺. `None` for the zero polynomial.
    pub fn lowest_term(&self) -> Option<(usize, &Q)> {
        self.0.iter().enumerate().find(|(_, c)| !c.is_zero())
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.0.iter().rev() {
            acc = acc * x + crate::scalar::rational_to_f64(c);
        }
        acc
    }
}

/// Determinant of a square matrix of polynomials by signed permutation
/// expansion (Heap's algorithm); exact, fine for n ≤ 6.
pub fn poly_det(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::constant(Q::one());
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    let mut sign = 1i32;
    let mut acc = perm_term(m, &perm, sign);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            acc = acc.add(&perm_term(m, &perm, sign));
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    acc
}

fn perm_term(m: &[Vec<Poly>], perm: &[usize], sign: i32) -> Poly {
    let mut t = Poly::constant(Q::one());
    for (row, &col) in perm.iter().enumerate() {
        t = t.mul(&m[row][col]);
        if t.is_zero() {
            return t;
        }
    }
    if sign < 0 {
        t.neg()
    } else {
        t
    }
}

/// The matrix `β + εY` as a polynomial matrix.
pub fn path_matrix(beta: &QMat, y: &QMat) -> Vec<Vec<Poly>> {
    let n = beta.rows;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Poly::linear(beta[(i, j)].clone(), y[(i, j)].clone()))
                .collect()
        })
        .collect()
}

/// Adjugate of a polynomial matrix: adj(M)ᵢⱼ = (-1)^{i+j} det(M without row j
/// and column i).
pub fn poly_adjugate(m: &[Vec<Poly>]) -> Vec<Vec<Poly>> {
    let n = m.len();
    let mut adj = vec![vec![Poly::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<Poly>> = (0..n)
                .filter(|&r| r != j)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != i)
                        .map(|c| m[r][c].clone())
                        .collect()
                })
                .collect();
            let d = poly_det(&minor);
            adj[i][j] = if (i + j) % 2 == 0 { d } else { d.neg() };
        }
    }
    adj
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q_int, QMat};

    #[test]
    fn det_of_linear_path() {
        // det(diag(1,0) + eps*I) = (1+eps)*eps
        let beta = QMat::from_fn(2, 2, |i, j| if i == 0 && j == 0 { q_int(1) } else { q_int(0) });
        let y = QMat::identity(2);
        let d = poly_det(&path_matrix(&beta, &y));
        assert_eq!(d.0, vec![q_int(0), q_int(1), q_int(1)]);
        assert_eq!(d.lowest_term().unwrap().0, 1);
    }

    #[test]
    fn adjugate_times_matrix_is_det() {
        let beta = QMat::from_fn(3, 3, |i, j| q_int((i * j) as i64));
        let y = QMat::from_fn(3, 3, |i, j| q_int((i + j + 1) as i64));
        let m = path_matrix(&beta, &y);
        let adj = poly_adjugate(&m);
        let det = poly_det(&m);
        // (M · adj M)_00 must equal det M.
        let mut acc = Poly::zero();
        for k in 0..3 {
            acc = acc.add(&m[0][k].mul(&adj[k][0]));
        }
        assert_eq!(acc, det);
    }
}
