//! Points of the symmetric space, the congruence action, and the
//! Riemannian distance.
//!
//! The hypersurface model: unit-determinant positive definite symmetric
//! matrices, with g.X = gᵀXg for unit-determinant g. All values are
//! immutable after construction.

use nalgebra::DMatrix;

use crate::exact::{self, Definiteness};
use crate::mat::{SqMatrix, SymMatrix};
use crate::scalar::Scalar;
use crate::{Error, Result};

pub const DET_TOL: f64 = 1e-12;

/// A positive definite symmetric matrix of determinant one.
#[derive(Clone, Debug)]
pub struct SpacePoint {
    m: SymMatrix,
}

impl SpacePoint {
    /// Validate positive definiteness and unit determinant. Exact matrices
    /// are checked exactly; float matrices within [`DET_TOL`].
    pub fn new(m: SymMatrix) -> Result<Self> {
        if let Ok(q) = m.to_qmat() {
            if exact::definiteness(&q) != Definiteness::PositiveDefinite {
                return Err(Error::NotPositiveDefinite("exact check".into()));
            }
            let d = exact::det(&q);
            if d != exact::q_one() {
                return Err(Error::NotUnimodular(format!("det = {d}")));
            }
        } else {
            let na = m.to_na();
            let eig = na.clone().symmetric_eigen();
            if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
                return Err(Error::NotPositiveDefinite("float eigenvalues".into()));
            }
            let d = na.determinant();
            if (d - 1.0).abs() > DET_TOL {
                return Err(Error::NotUnimodular(format!("det = {d}")));
            }
        }
        Ok(SpacePoint { m })
    }

    pub fn identity(n: usize) -> Self {
        SpacePoint {
            m: SymMatrix::identity(n),
        }
    }

    /// Rescale a positive definite matrix onto the unit-determinant
    /// hypersurface (float normalization).
    pub fn from_pd(m: &SymMatrix) -> Result<Self> {
        let na = m.to_na();
        let d = na.determinant();
        if d <= 0.0 {
            return Err(Error::NotPositiveDefinite(format!("det = {d}")));
        }
        let s = d.powf(-1.0 / m.dim() as f64);
        let scaled = SymMatrix::from_fn(m.dim(), |i, j| Scalar::float(m.entry(i, j).to_f64() * s));
        SpacePoint::new(scaled)
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.m
    }

    pub fn inverse(&self) -> SymMatrix {
        self.m.inverse().expect("positive definite matrices are invertible")
    }
}

/// An element of the isometry group: a matrix of determinant one.
#[derive(Clone, Debug)]
pub struct Isometry {
    g: SqMatrix,
}

impl Isometry {
    pub fn new(g: SqMatrix) -> Result<Self> {
        let d = g.det();
        match &d {
            Scalar::Exact(r) => {
                if *r != exact::q_one() {
                    return Err(Error::NotUnimodular(format!("det = {d}")));
                }
            }
            Scalar::Float(v) => {
                if (v - 1.0).abs() > DET_TOL {
                    return Err(Error::NotUnimodular(format!("det = {v}")));
                }
            }
        }
        Ok(Isometry { g })
    }

    pub fn identity(n: usize) -> Self {
        Isometry {
            g: SqMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.g.dim()
    }

    pub fn matrix(&self) -> &SqMatrix {
        &self.g
    }

    pub fn inverse(&self) -> Isometry {
        Isometry {
            g: self.g.inverse().expect("determinant-one matrices are invertible"),
        }
    }

    pub fn compose(&self, then: &Isometry) -> Isometry {
        // Applying self first and `then` second acts by (self·then)ᵀ Y (self·then).
        Isometry {
            g: self.g.mul(&then.g),
        }
    }

    /// Congruence action on an arbitrary symmetric matrix.
    pub fn act_sym(&self, m: &SymMatrix) -> SymMatrix {
        self.g.congruence(m)
    }

    pub fn exact_eq(&self, other: &Isometry) -> bool {
        self.g.exact_eq(&other.g)
    }
}

/// An ordered word of isometries with its cached product. The product is
/// the left-to-right evaluation: letters[0] acts first.
#[derive(Clone, Debug)]
pub struct IsometryWord {
    letters: Vec<Isometry>,
    product: Isometry,
}

impl IsometryWord {
    pub fn new(letters: Vec<Isometry>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidSpec("empty word".into()));
        }
        let mut product = letters[0].clone();
        for l in &letters[1..] {
            product = product.compose(l);
        }
        Ok(IsometryWord { letters, product })
    }

    pub fn identity(n: usize) -> Self {
        IsometryWord {
            letters: vec![Isometry::identity(n)],
            product: Isometry::identity(n),
        }
    }

    pub fn letters(&self) -> &[Isometry] {
        &self.letters
    }

    pub fn product(&self) -> &Isometry {
        &self.product
    }

    pub fn reversed(&self) -> IsometryWord {
        let letters: Vec<Isometry> = self.letters.iter().rev().map(|l| l.inverse()).collect();
        IsometryWord::new(letters).expect("nonempty")
    }
}

/// g.X = gᵀXg.
pub fn act(g: &Isometry, x: &SpacePoint) -> Result<SpacePoint> {
    if g.dim() != x.dim() {
        return Err(Error::DimensionMismatch(format!(
            "isometry dim {} vs point dim {}",
            g.dim(),
            x.dim()
        )));
    }
    SpacePoint::new(g.act_sym(x.matrix()))
}

/// Eigenvalues in descending order, with the residual bound
/// ‖Mv - λv‖ ≤ tol·‖M‖ enforced for every pair.
pub fn spectrum_with_tol(m: &SymMatrix, tol: f64) -> Result<Vec<f64>> {
    let na = m.to_na();
    let norm = na.norm();
    let eig = na.clone().symmetric_eigen();
    let mut worst: f64 = 0.0;
    for k in 0..na.nrows() {
        let v = eig.eigenvectors.column(k);
        let res = (&na * v - eig.eigenvalues[k] * v).norm();
        worst = worst.max(res);
    }
    if norm > 0.0 && worst > tol * norm {
        return Err(Error::NonConvergence(worst / norm));
    }
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(vals)
}

pub fn spectrum(m: &SymMatrix) -> Result<Vec<f64>> {
    spectrum_with_tol(m, 1e-10)
}

/// Eigenvalues of X⁻¹Y for positive definite X, Y (real and positive),
/// computed through the symmetric reduction L⁻¹ Y L⁻ᵀ with X = LLᵀ.
pub fn relative_eigenvalues(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<Vec<f64>> {
    let chol = x
        .clone()
        .cholesky()
        .ok_or_else(|| Error::NotPositiveDefinite("cholesky failed".into()))?;
    let l = chol.l();
    let li = l
        .clone()
        .try_inverse()
        .ok_or(Error::Singular)?;
    let m = &li * y * li.transpose();
    let sym = (&m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(vals)
}

/// Riemannian distance: the square root of Σ (log λᵢ)² over the
/// eigenvalues of X⁻¹Y.
pub fn geodesic_distance(x: &SpacePoint, y: &SpacePoint) -> Result<f64> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch("distance".into()));
    }
    let vals = relative_eigenvalues(&x.matrix().to_na(), &y.matrix().to_na())?;
    Ok(vals.iter().map(|l| l.ln().powi(2)).sum::<f64>().sqrt())
}

/// Same formula on raw positive definite matrices (used by projections,
/// where determinants are normalized separately).
pub fn geodesic_distance_pd(x: &DMatrix<f64>, y: &DMatrix<f64>) -> Result<f64> {
    let vals = relative_eigenvalues(x, y)?;
    Ok(vals.iter().map(|l| l.ln().powi(2)).sum::<f64>().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn act_identity_fixes_points() {
        let x = SpacePoint::identity(3);
        let g = Isometry::identity(3);
        let y = act(&g, &x).unwrap();
        assert!(y.matrix().exact_eq(x.matrix()));
    }

    #[test]
    fn act_preserves_determinant() {
        let mut gen = crate::rng::SeededGen::new(5);
        for _ in 0..100 {
            let g = Isometry::new(gen.unimodular(3)).unwrap();
            let x = SpacePoint::new(gen.space_point_exact(3)).unwrap();
            let y = act(&g, &x).unwrap();
            assert_eq!(y.matrix().det(), Scalar::one());
        }
    }

    #[test]
    fn act_inverse_round_trip_exact() {
        let mut gen = crate::rng::SeededGen::new(6);
        for _ in 0..20 {
            let g = Isometry::new(gen.unimodular(3)).unwrap();
            let x = SpacePoint::new(gen.space_point_exact(3)).unwrap();
            let y = act(&g, &x).unwrap();
            let back = act(&g.inverse(), &y).unwrap();
            assert!(back.matrix().exact_eq(x.matrix()));
        }
    }

    #[test]
    fn distance_identity_and_diagonal() {
        let i = SpacePoint::identity(3);
        assert!(geodesic_distance(&i, &i).unwrap().abs() < 1e-12);
        let e = std::f64::consts::E;
        let d = SymMatrix::diag(&[Scalar::float(e), Scalar::float(1.0), Scalar::float(1.0 / e)]);
        let y = SpacePoint::new(d).unwrap();
        let dist = geodesic_distance(&i, &y).unwrap();
        assert!((dist - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn distance_is_isometry_invariant() {
        let mut gen = crate::rng::SeededGen::new(9);
        for _ in 0..50 {
            let g = Isometry::new(gen.unimodular(3)).unwrap();
            let x = SpacePoint::new(gen.space_point_exact(3)).unwrap();
            let y = SpacePoint::new(gen.space_point_exact(3)).unwrap();
            let d0 = geodesic_distance(&x, &y).unwrap();
            let d1 = geodesic_distance(&act(&g, &x).unwrap(), &act(&g, &y).unwrap()).unwrap();
            assert!((d0 - d1).abs() < 1e-9, "d0={d0} d1={d1}");
        }
    }

    #[test]
    fn triangle_inequality_sampled() {
        let mut gen = crate::rng::SeededGen::new(10);
        for _ in 0..1000 {
            let x = SpacePoint::new(gen.space_point_exact(3)).unwrap();
            let y = SpacePoint::new(gen.space_point_exact(3)).unwrap();
            let z = SpacePoint::new(gen.space_point_exact(3)).unwrap();
            let xy = geodesic_distance(&x, &y).unwrap();
            let yz = geodesic_distance(&y, &z).unwrap();
            let xz = geodesic_distance(&x, &z).unwrap();
            assert!(xz <= xy + yz + 1e-9);
        }
    }

    #[test]
    fn spectrum_diagonal_and_trace() {
        let m = SymMatrix::diag(&[Scalar::int(3), Scalar::int(1), Scalar::int(0)]);
        let s = spectrum(&m).unwrap();
        assert_eq!(s, vec![3.0, 1.0, 0.0]);
        let mut gen = crate::rng::SeededGen::new(12);
        for _ in 0..50 {
            let m = gen.psd_of_rank(3, 3);
            let s = spectrum(&m).unwrap();
            let tr = m.trace().to_f64();
            assert!((s.iter().sum::<f64>() - tr).abs() <= 1e-10 * (1.0 + tr.abs()));
        }
    }
}
