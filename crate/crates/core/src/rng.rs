//! Seeded generators of rational test data: unimodular matrices, rational
//! points of the symmetric space, semidefinite matrices of a given rank.

use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::exact::{self, q_int, QMat, Q};
use crate::mat::{SqMatrix, SymMatrix};
use crate::scalar::Scalar;

pub struct SeededGen {
    rng: ChaCha12Rng,
}

impl SeededGen {
    pub fn new(seed: u64) -> Self {
        SeededGen {
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn f64_in(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.random_range(lo..hi)
    }

    /// Random integer matrix with entries in [-bound, bound] and nonzero
    /// determinant.
    pub fn invertible_int(&mut self, n: usize, bound: i64) -> QMat {
        loop {
            let m = QMat::from_fn(n, n, |_, _| q_int(self.int_in(-bound, bound)));
            if !exact::det(&m).is_zero() {
                return m;
            }
        }
    }

    /// Random rational matrix of determinant one: an integer invertible
    /// matrix with one column rescaled by the inverse determinant.
    pub fn unimodular(&mut self, n: usize) -> SqMatrix {
        let mut m = self.invertible_int(n, 2);
        let d = exact::det(&m);
        let inv = d.recip();
        for i in 0..n {
            let v = &m[(i, 0)] * &inv;
            m[(i, 0)] = v;
        }
        SqMatrix::from_qmat(&m)
    }

    /// Random rational point of the symmetric space: gᵀg for unimodular g.
    pub fn space_point_exact(&mut self, n: usize) -> SymMatrix {
        let g = self.unimodular(n);
        g.congruence(&SymMatrix::identity(n))
    }

    /// Random rational vector, not identically zero.
    pub fn nonzero_vector(&mut self, n: usize, bound: i64) -> Vec<Q> {
        loop {
            let v: Vec<Q> = (0..n).map(|_| q_int(self.int_in(-bound, bound))).collect();
            if v.iter().any(|x| !x.is_zero()) {
                return v;
            }
        }
    }

    /// Random positive semidefinite rational matrix of exact rank `r`.
    pub fn psd_of_rank(&mut self, n: usize, r: usize) -> SymMatrix {
        loop {
            let vecs: Vec<Vec<Q>> = (0..r).map(|_| self.nonzero_vector(n, 2)).collect();
            let stack = QMat::from_rows(vecs.clone());
            if exact::rank(&stack) < r {
                continue;
            }
            let mut m = SymMatrix::zero(n);
            for v in &vecs {
                let sv: Vec<Scalar> = v.iter().map(|q| Scalar::Exact(q.clone())).collect();
                m = m.add(&SymMatrix::outer(&sv));
            }
            return m;
        }
    }

    /// Random subspace of dimension `k` extending the span of `inside`
    /// (rational column vectors). Returns an n-by-k rational basis.
    pub fn subspace_containing(&mut self, n: usize, k: usize, inside: &QMat) -> QMat {
        assert!(inside.cols <= k);
        loop {
            let mut cols: Vec<Vec<Q>> = (0..inside.cols)
                .map(|j| (0..n).map(|i| inside[(i, j)].clone()).collect())
                .collect();
            while cols.len() < k {
                cols.push(self.nonzero_vector(n, 2));
            }
            let m = QMat::from_rows(cols).transpose();
            if exact::rank(&m) == k {
                return m;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn unimodular_has_det_one() {
        let mut g = SeededGen::new(7);
        for _ in 0..20 {
            let m = g.unimodular(3);
            assert_eq!(m.det(), Scalar::one());
        }
    }

    #[test]
    fn space_points_are_positive_definite() {
        let mut g = SeededGen::new(11);
        for _ in 0..10 {
            let x = g.space_point_exact(3);
            let q = x.to_qmat().unwrap();
            assert_eq!(
                exact::definiteness(&q),
                exact::Definiteness::PositiveDefinite
            );
            assert_eq!(x.det(), Scalar::one());
        }
    }

    #[test]
    fn psd_rank_is_exact() {
        let mut g = SeededGen::new(13);
        for r in 1..=3 {
            let m = g.psd_of_rank(3, r);
            let (psd, rank) = exact::psd_status(&m.to_qmat().unwrap());
            assert!(psd);
            assert_eq!(rank, r);
        }
    }
}
