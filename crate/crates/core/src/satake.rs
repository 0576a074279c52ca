//! The compactification of the symmetric space by projective classes of
//! positive semidefinite matrices: boundary points, boundary components,
//! the closure partial order, and the frame projections onto lower rank.
//!
//! Boundary classification never depends on rounding: whenever the input is
//! rational the decision is made in exact arithmetic, and the trace-one
//! representative of a semidefinite class is exact as well.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::exact::{self, Definiteness, QMat, Q};
use crate::mat::SymMatrix;
use crate::scalar::Scalar;
use crate::space::spectrum;
use crate::{Error, Result};

/// Where a symmetric matrix sits relative to the compactification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CompactificationClass {
    /// Positive definite: an interior point (after projectivization).
    Interior,
    /// Positive semidefinite and singular; the payload is the rank.
    BoundaryType(usize),
    /// Not a semidefinite class at all.
    Outside,
}

/// Classify a nonzero symmetric matrix. Exact for exact inputs; float
/// inputs use an eigenvalue threshold relative to the matrix norm.
pub fn classify(m: &SymMatrix) -> Result<CompactificationClass> {
    if let Ok(q) = m.to_qmat() {
        if q.is_zero() {
            return Err(Error::ZeroMatrix);
        }
        return Ok(match exact::definiteness(&q) {
            Definiteness::PositiveDefinite => CompactificationClass::Interior,
            Definiteness::PositiveSemidefinite { rank } => {
                CompactificationClass::BoundaryType(rank)
            }
            _ => CompactificationClass::Outside,
        });
    }
    let vals = spectrum(m)?;
    let norm = vals.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    if norm == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let thr = 1e-10 * norm;
    if vals.iter().any(|&v| v < -thr) {
        return Ok(CompactificationClass::Outside);
    }
    let rank = vals.iter().filter(|&&v| v > thr).count();
    if rank == m.dim() {
        Ok(CompactificationClass::Interior)
    } else {
        Ok(CompactificationClass::BoundaryType(rank))
    }
}

/// A projective class of a nonzero positive semidefinite matrix, stored as
/// its trace-one representative.
#[derive(Clone, Debug)]
pub struct SatakePoint {
    m: SymMatrix,
    rank: usize,
}

impl SatakePoint {
    pub fn new(m: SymMatrix) -> Result<Self> {
        let class = classify(&m)?;
        let rank = match class {
            CompactificationClass::Interior => m.dim(),
            CompactificationClass::BoundaryType(r) => r,
            CompactificationClass::Outside => return Err(Error::NotPositiveSemidefinite),
        };
        // The trace is positive on nonzero semidefinite matrices, so the
        // trace-one chart contains every class.
        let tr = m.trace();
        let normalized = m.scale(&tr.recip());
        Ok(SatakePoint { m: normalized, rank })
    }

    /// The class of `v vᵀ`.
    pub fn from_vector(v: &[Scalar]) -> Result<Self> {
        SatakePoint::new(SymMatrix::outer(v))
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_boundary(&self) -> bool {
        self.rank < self.m.dim()
    }

    /// Projective image under g, i.e. the class of gᵀ α g.
    pub fn transform(&self, g: &crate::space::Isometry) -> SatakePoint {
        SatakePoint::new(g.act_sym(&self.m)).expect("congruence preserves semidefiniteness")
    }

    /// Exact projective equality (trace-one representatives agree).
    pub fn exact_eq(&self, other: &SatakePoint) -> bool {
        self.m.exact_eq(&other.m)
    }
}

/// A k-dimensional subspace carried two ways: a rational basis for exact
/// incidence decisions and a float orthonormal frame for metric ones.
#[derive(Clone, Debug)]
pub struct BoundaryComponent {
    basis: QMat,            // n x k, rational, rank k
    frame: DMatrix<f64>,    // n x k, orthonormal columns
}

impl BoundaryComponent {
    /// Build from rational spanning vectors (each of length n); reduces to
    /// a basis of the span.
    pub fn from_span(vectors: &[Vec<Q>]) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidSpec("empty spanning set".into()));
        }
        let n = vectors[0].len();
        if vectors.iter().any(|v| v.len() != n) {
            return Err(Error::DimensionMismatch("spanning set".into()));
        }
        let cols = QMat::from_rows(vectors.to_vec()).transpose();
        let basis = exact::column_space(&cols);
        if basis.cols == 0 {
            return Err(Error::ZeroMatrix);
        }
        if basis.cols == n {
            return Err(Error::InvalidSpec(
                "a boundary component spans a proper subspace".into(),
            ));
        }
        let frame = orthonormal_frame(&basis)?;
        Ok(BoundaryComponent { basis, frame })
    }

    pub fn from_basis_matrix(basis: QMat) -> Result<Self> {
        let vectors: Vec<Vec<Q>> = (0..basis.cols)
            .map(|j| (0..basis.rows).map(|i| basis[(i, j)].clone()).collect())
            .collect();
        BoundaryComponent::from_span(&vectors)
    }

    /// Standard coordinate subspace spanned by the first k basis vectors.
    pub fn coordinate(n: usize, k: usize) -> Self {
        let basis = QMat::from_fn(n, k, |i, j| {
            if i == j {
                exact::q_one()
            } else {
                exact::q_zero()
            }
        });
        BoundaryComponent::from_basis_matrix(basis).expect("coordinate subspace")
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    pub fn basis(&self) -> &QMat {
        &self.basis
    }

    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    /// Exact test: does this component contain the column space of `m`?
    pub fn contains_col_space(&self, m: &QMat) -> bool {
        let k = self.basis.cols;
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for j in 0..k {
            rows.push((0..self.basis.rows).map(|i| self.basis[(i, j)].clone()).collect());
        }
        for j in 0..m.cols {
            rows.push((0..m.rows).map(|i| m[(i, j)].clone()).collect());
        }
        exact::rank(&QMat::from_rows(rows).transpose()) == k
    }

    /// Exact subspace equality.
    pub fn same_subspace(&self, other: &BoundaryComponent) -> bool {
        self.dim() == other.dim() && component_leq(self, other)
    }

    /// Image subspace under g: columns map to gᵀ·columns.
    pub fn transform(&self, g: &crate::space::Isometry) -> Result<BoundaryComponent> {
        let gt = g.matrix().transpose().to_qmat()?;
        BoundaryComponent::from_basis_matrix(gt.mul(&self.basis))
    }
}

/// Closure relation: W ≤ V iff span(W) ⊆ span(V), decided exactly.
pub fn component_leq(w: &BoundaryComponent, v: &BoundaryComponent) -> bool {
    v.contains_col_space(w.basis())
}

/// The boundary component of a boundary point: its column space.
pub fn component_of(alpha: &SatakePoint) -> Result<BoundaryComponent> {
    if !alpha.is_boundary() {
        return Err(Error::NotBoundary(format!(
            "rank {} equals the dimension",
            alpha.rank()
        )));
    }
    let q = alpha
        .matrix()
        .to_qmat()
        .map_err(|_| Error::InexactInput("boundary point".into()))?;
    let basis = exact::column_space(&q);
    BoundaryComponent::from_basis_matrix(basis)
}

fn orthonormal_frame(basis: &QMat) -> Result<DMatrix<f64>> {
    let n = basis.rows;
    let k = basis.cols;
    let mut cols: Vec<nalgebra::DVector<f64>> = Vec::with_capacity(k);
    for j in 0..k {
        let mut v = nalgebra::DVector::from_fn(n, |i, _| {
            crate::scalar::rational_to_f64(&basis[(i, j)])
        });
        for u in &cols {
            let c = u.dot(&v);
            v -= u * c;
        }
        // Re-orthogonalize once; cheap and keeps columns orthonormal to
        // machine precision.
        for u in &cols {
            let c = u.dot(&v);
            v -= u * c;
        }
        let norm = v.norm();
        if norm < 1e-300 {
            return Err(Error::Degenerate("dependent frame column".into()));
        }
        cols.push(v / norm);
    }
    Ok(DMatrix::from_columns(&cols))
}

/// Frame projection onto the component, normalized to determinant one.
/// Requires the projected block to be positive definite (the matrix is
/// interior, or lies in the star of the component).
pub fn project(v: &BoundaryComponent, m: &SymMatrix) -> Result<SymMatrix> {
    if m.dim() != v.ambient_dim() {
        return Err(Error::DimensionMismatch("projection".into()));
    }
    let block = v.frame().transpose() * m.to_na() * v.frame();
    let block = (&block + block.transpose()) * 0.5;
    let eig = block.clone().symmetric_eigen();
    if eig.eigenvalues.iter().any(|&l| l <= 0.0) {
        return Err(Error::NotPositiveDefinite(
            "projected block is singular or indefinite".into(),
        ));
    }
    let d = block.determinant();
    let s = d.powf(-1.0 / v.dim() as f64);
    Ok(SymMatrix::from_na(&(block * s)))
}

/// Exact projected block over the rational basis, not normalized. This is a
/// projective representative only; gauge factors cancel in the ratios that
/// consume it.
pub fn project_block_exact(v: &BoundaryComponent, m: &SymMatrix) -> Result<QMat> {
    let q = m.to_qmat()?;
    let b = v.basis();
    let block = b.transpose().mul(&q).mul(b);
    Ok(block)
}

/// Serialized form of a boundary component: its rational spanning vectors.
#[derive(Serialize, Deserialize)]
struct SpanRepr {
    span: Vec<Vec<Scalar>>,
}

impl Serialize for BoundaryComponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let span = (0..self.basis.cols)
            .map(|j| {
                (0..self.basis.rows)
                    .map(|i| Scalar::Exact(self.basis[(i, j)].clone()))
                    .collect()
            })
            .collect();
        SpanRepr { span }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BoundaryComponent {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = SpanRepr::deserialize(d)?;
        let vectors: std::result::Result<Vec<Vec<Q>>, _> = repr
            .span
            .iter()
            .map(|v| {
                v.iter()
                    .map(|s| {
                        s.exact()
                            .cloned()
                            .ok_or_else(|| serde::de::Error::custom("span entries must be rational"))
                    })
                    .collect()
            })
            .collect();
        BoundaryComponent::from_span(&vectors?).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q_int, q_ratio};
    use crate::rng::SeededGen;
    use crate::space::Isometry;

    fn e(i: usize, n: usize) -> Vec<Q> {
        (0..n).map(|j| if i == j { q_int(1) } else { q_int(0) }).collect()
    }

    #[test]
    fn classify_basic() {
        assert_eq!(
            classify(&SymMatrix::identity(3)).unwrap(),
            CompactificationClass::Interior
        );
        let indef = SymMatrix::diag(&[Scalar::int(1), Scalar::int(-1), Scalar::int(0)]);
        assert_eq!(classify(&indef).unwrap(), CompactificationClass::Outside);
        let zero = SymMatrix::zero(3);
        assert!(classify(&zero).is_err());
    }

    #[test]
    fn classify_scale_invariant() {
        let mut gen = SeededGen::new(21);
        for _ in 0..30 {
            let m = gen.psd_of_rank(3, 2);
            let scaled = m.scale(&Scalar::ratio(7, 3));
            assert_eq!(classify(&m).unwrap(), classify(&scaled).unwrap());
        }
    }

    #[test]
    fn component_of_rank_one() {
        let alpha = SatakePoint::from_vector(&[Scalar::one(), Scalar::zero(), Scalar::zero()])
            .unwrap();
        let c = component_of(&alpha).unwrap();
        assert_eq!(c.dim(), 1);
        assert!(c.contains_col_space(&QMat::from_rows(vec![e(0, 3)]).transpose()));
    }

    #[test]
    fn component_of_sum_is_two_dimensional() {
        let a1 = SymMatrix::outer(&[Scalar::one(), Scalar::one(), Scalar::zero()]);
        let a2 = SymMatrix::outer(&[Scalar::one(), -Scalar::one(), Scalar::zero()]);
        let alpha = SatakePoint::new(a1.add(&a2)).unwrap();
        let c = component_of(&alpha).unwrap();
        assert_eq!(c.dim(), 2);
        let e12 = BoundaryComponent::from_span(&[e(0, 3), e(1, 3)]).unwrap();
        assert!(c.same_subspace(&e12));
    }

    #[test]
    fn leq_relation() {
        let v1 = BoundaryComponent::from_span(&[e(0, 3)]).unwrap();
        let v12 = BoundaryComponent::from_span(&[e(0, 3), e(1, 3)]).unwrap();
        let v13 = BoundaryComponent::from_span(&[e(0, 3), e(2, 3)]).unwrap();
        let diag = BoundaryComponent::from_span(&[vec![q_int(1), q_int(1), q_int(0)]]).unwrap();
        assert!(component_leq(&v1, &v12));
        assert!(!component_leq(&diag, &v13));
        assert!(component_leq(&v12, &v12));
    }

    #[test]
    fn leq_reflexive_on_random_subspaces() {
        let mut gen = SeededGen::new(33);
        for _ in 0..20 {
            let b = gen.subspace_containing(3, 2, &QMat::zero(3, 0));
            let v = BoundaryComponent::from_basis_matrix(b).unwrap();
            assert!(component_leq(&v, &v));
        }
    }

    #[test]
    fn component_transforms_equivariantly() {
        // The column space of gᵀ α g is gᵀ·(column space of α).
        let mut gen = SeededGen::new(34);
        for _ in 0..20 {
            let g = Isometry::new(gen.unimodular(3)).unwrap();
            let alpha = SatakePoint::new(gen.psd_of_rank(3, 1)).unwrap();
            let lhs = component_of(&alpha.transform(&g)).unwrap();
            let rhs = component_of(&alpha).unwrap().transform(&g).unwrap();
            assert!(lhs.same_subspace(&rhs));
        }
    }

    #[test]
    fn project_block_diagonal() {
        let v = BoundaryComponent::coordinate(3, 2);
        let p = project(&v, &SymMatrix::identity(3)).unwrap();
        assert!(p.approx_eq(&SymMatrix::identity(2), 1e-12));

        let m = SymMatrix::from_rows(&[
            vec![Scalar::int(2), Scalar::int(1), Scalar::zero()],
            vec![Scalar::int(1), Scalar::int(2), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), Scalar::int(5)],
        ])
        .unwrap();
        let p = project(&v, &m).unwrap();
        // Block [[2,1],[1,2]] has determinant 3; normalize by sqrt(3).
        let s = 3f64.sqrt().recip();
        assert!((p.entry(0, 0).to_f64() - 2.0 * s).abs() < 1e-12);
        assert!((p.entry(0, 1).to_f64() - s).abs() < 1e-12);
        assert!((p.to_na().determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn project_rejects_singular_block() {
        let v = BoundaryComponent::coordinate(3, 2);
        let m = SymMatrix::diag(&[Scalar::one(), Scalar::zero(), Scalar::one()]);
        assert!(project(&v, &m).is_err());
    }

    #[test]
    fn project_frame_gauge() {
        // Two different orthonormal frames for the same plane give
        // congruent outputs: equal trace and determinant.
        let v1 = BoundaryComponent::from_span(&[e(0, 3), e(1, 3)]).unwrap();
        let v2 = BoundaryComponent::from_span(&[
            vec![q_ratio(3, 5), q_ratio(4, 5), q_int(0)],
            vec![q_ratio(-4, 5), q_ratio(3, 5), q_int(0)],
        ])
        .unwrap();
        let mut gen = SeededGen::new(35);
        for _ in 0..10 {
            let m = gen.space_point_exact(3);
            let p1 = project(&v1, &m).unwrap();
            let p2 = project(&v2, &m).unwrap();
            assert!((p1.trace().to_f64() - p2.trace().to_f64()).abs() < 1e-10);
            assert!((p1.to_na().determinant() - p2.to_na().determinant()).abs() < 1e-10);
        }
    }

    #[test]
    fn interior_projection_has_unit_determinant() {
        let mut gen = SeededGen::new(36);
        let v = BoundaryComponent::from_span(&[e(0, 3), vec![q_int(1), q_int(1), q_int(1)]])
            .unwrap();
        for _ in 0..10 {
            let m = gen.space_point_exact(3);
            let p = project(&v, &m).unwrap();
            assert!((p.to_na().determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn span_serde_round_trip() {
        let v = BoundaryComponent::from_span(&[vec![q_ratio(1, 2), q_int(1), q_int(0)]]).unwrap();
        let s = serde_json::to_string(&v).unwrap();
        let back: BoundaryComponent = serde_json::from_str(&s).unwrap();
        assert!(v.same_subspace(&back));
    }
}
