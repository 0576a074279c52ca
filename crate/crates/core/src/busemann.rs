//! The Selberg invariant, Busemann-Selberg functions of type 0 and type k,
//! horoballs, classical Busemann functions at boundary vertices, and the
//! asymptotic classifier toward the compactification boundary.
//!
//! Values are scale-invariant in the evaluation point, so positive definite
//! representatives may be passed without unit-determinant normalization.
//! Block determinants are always taken through the same rational spanning
//! set for the point and the reference, which cancels the frame gauge and
//! keeps the exact pieces rational.

use serde::{Deserialize, Serialize};

use crate::exact::{self, QMat, Q};
use crate::laurent::{path_matrix, poly_adjugate, poly_det, Poly};
use crate::mat::SymMatrix;
use crate::satake::{component_of, BoundaryComponent, SatakePoint};
use crate::scalar::{rational_to_f64, Scalar};
use crate::space::{geodesic_distance, SpacePoint};
use crate::{Error, Result};

/// Selberg invariant from X to Y: tr(X⁻¹Y). Asymmetric; at least n, with
/// equality exactly at Y = X.
pub fn selberg(x: &SpacePoint, y: &SpacePoint) -> Result<Scalar> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch("selberg invariant".into()));
    }
    Ok(x.inverse().dot(y.matrix()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BusemannKind {
    Type0,
    TypeK,
}

/// A Busemann-Selberg function: a boundary class `alpha`, an optional
/// enclosing boundary component (type k only), and a reference point.
#[derive(Clone, Debug)]
pub struct BusemannSpec {
    kind: BusemannKind,
    alpha: SatakePoint,
    component: Option<BoundaryComponent>,
    reference: SpacePoint,
}

impl BusemannSpec {
    pub fn type0(alpha: SatakePoint, reference: SpacePoint) -> Result<Self> {
        if !alpha.is_boundary() {
            return Err(Error::NotBoundary("type-0 base point".into()));
        }
        if alpha.dim() != reference.dim() {
            return Err(Error::DimensionMismatch("type-0 spec".into()));
        }
        Ok(BusemannSpec {
            kind: BusemannKind::Type0,
            alpha,
            component: None,
            reference,
        })
    }

    /// Type-k spec: `alpha` must sit on the boundary of the component,
    /// i.e. its column space is strictly smaller and contained (checked
    /// exactly).
    pub fn type_k(
        alpha: SatakePoint,
        component: BoundaryComponent,
        reference: SpacePoint,
    ) -> Result<Self> {
        if alpha.dim() != reference.dim() || alpha.dim() != component.ambient_dim() {
            return Err(Error::DimensionMismatch("type-k spec".into()));
        }
        if alpha.rank() >= component.dim() {
            return Err(Error::InvalidSpec(format!(
                "rank {} must be smaller than the component dimension {}",
                alpha.rank(),
                component.dim()
            )));
        }
        let aq = alpha.matrix().to_qmat()?;
        if !component.contains_col_space(&aq) {
            return Err(Error::InvalidSpec(
                "the base class must lie in the closure of the component".into(),
            ));
        }
        Ok(BusemannSpec {
            kind: BusemannKind::TypeK,
            alpha,
            component: Some(component),
            reference,
        })
    }

    pub fn kind(&self) -> BusemannKind {
        self.kind
    }

    pub fn alpha(&self) -> &SatakePoint {
        &self.alpha
    }

    pub fn component(&self) -> Option<&BoundaryComponent> {
        self.component.as_ref()
    }

    pub fn reference(&self) -> &SpacePoint {
        &self.reference
    }

    pub fn dim(&self) -> usize {
        self.alpha.dim()
    }

    /// The type index k (zero for type-0 specs).
    pub fn k(&self) -> usize {
        match &self.component {
            None => 0,
            Some(c) => self.dim() - c.dim(),
        }
    }

    /// The block order m: the component dimension for type k, the full
    /// dimension for type 0 (whose block is the whole inverse).
    fn block_order(&self) -> usize {
        self.component.as_ref().map_or(self.dim(), |c| c.dim())
    }

    /// Raw pieces at a positive definite representative Y:
    /// `(tr(Y⁻¹ alpha), det(Bᵀ Y⁻¹ B))` with B the component basis. For
    /// type 0 the block is all of Y⁻¹, which makes the evaluation
    /// scale-invariant off the unit-determinant slice (and trivial on it).
    /// Exact when Y is exact.
    pub fn parts(&self, y: &SymMatrix) -> Result<(Scalar, Scalar)> {
        let yinv = y.inverse()?;
        let t = yinv.dot(self.alpha.matrix());
        let d = match &self.component {
            None => yinv.det(),
            Some(c) => {
                if let Ok(q) = yinv.to_qmat() {
                    let b = c.basis();
                    Scalar::Exact(exact::det(&b.transpose().mul(&q).mul(b)))
                } else {
                    let bf = c.basis();
                    let b = nalgebra::DMatrix::from_fn(bf.rows, bf.cols, |i, j| {
                        rational_to_f64(&bf[(i, j)])
                    });
                    Scalar::float((b.transpose() * yinv.to_na() * b).determinant())
                }
            }
        };
        Ok((t, d))
    }

    /// Evaluate at a positive definite representative; invariant under
    /// rescaling of the representative. Values stay exact whenever the
    /// block determinants of the point and the reference agree exactly
    /// (in particular for type-0 data on the unit-determinant slice).
    pub fn eval_sym(&self, y: &SymMatrix) -> Result<Scalar> {
        let (ty, dy) = self.parts(y)?;
        let (tx, dx) = self.parts(self.reference.matrix())?;
        if let (Some(a), Some(b)) = (dy.exact(), dx.exact()) {
            if a == b {
                return Ok(&ty / &tx);
            }
        }
        let m = self.block_order() as f64;
        let ratio_t = (&ty / &tx).to_f64();
        let ratio_d = (&dy / &dx).to_f64();
        Ok(Scalar::float(ratio_t * ratio_d.powf(-1.0 / m)))
    }

    pub fn eval(&self, y: &SpacePoint) -> Result<Scalar> {
        self.eval_sym(y.matrix())
    }

    /// Exact test of 𝔟(y1) = 𝔟(y2) without taking roots: cross-multiplied
    /// m-th powers of the two sides must agree as rationals.
    pub fn values_equal_exact(&self, y1: &SymMatrix, y2: &SymMatrix) -> Result<bool> {
        let (t1, d1) = self.parts(y1)?;
        let (t2, d2) = self.parts(y2)?;
        let (t1, d1, t2, d2) = (
            t1.expect_exact("value")?.clone(),
            d1.expect_exact("value")?.clone(),
            t2.expect_exact("value")?.clone(),
            d2.expect_exact("value")?.clone(),
        );
        let m = self.block_order() as u32;
        // t1^m / d1 == t2^m / d2
        Ok(pow_q(&t1, m) * d2 == pow_q(&t2, m) * d1)
    }
}

fn pow_q(q: &Q, e: u32) -> Q {
    let mut acc = exact::q_one();
    for _ in 0..e {
        acc *= q;
    }
    acc
}

/// The 1-Lipschitz constant of a type-k function in dimension n:
/// sqrt((n-k-1)/(n-k)).
pub fn lipschitz_constant(n: usize, k: usize) -> f64 {
    let m = (n - k) as f64;
    ((m - 1.0) / m).sqrt()
}

/// bound - |log 𝔟(y1) - log 𝔟(y2)|, nonnegative up to float slack for all
/// valid inputs.
pub fn lipschitz_margin(spec: &BusemannSpec, y1: &SpacePoint, y2: &SpacePoint) -> Result<f64> {
    let b1 = spec.eval(y1)?.to_f64();
    let b2 = spec.eval(y2)?.to_f64();
    let diff = (b1.ln() - b2.ln()).abs();
    let bound = lipschitz_constant(spec.dim(), spec.k()) * geodesic_distance(y1, y2)?;
    Ok(bound - diff)
}

/// Classical Busemann function at the boundary vertex of a subspace V,
/// evaluated via block determinants after moving V to coordinate position:
/// sqrt(n/(j(n-j))) · log(det(BᵀY⁻¹B)/det(BᵀX⁻¹B)) with j = dim V.
pub fn classical_busemann_vertex(
    v: &BoundaryComponent,
    x: &SpacePoint,
    y: &SpacePoint,
) -> Result<f64> {
    let n = v.ambient_dim();
    let j = v.dim();
    if x.dim() != n || y.dim() != n {
        return Err(Error::DimensionMismatch("classical Busemann".into()));
    }
    let b = v.basis();
    let block = |m: &SymMatrix| -> Result<f64> {
        let inv = m.inverse()?;
        if let Ok(q) = inv.to_qmat() {
            Ok(rational_to_f64(&exact::det(&b.transpose().mul(&q).mul(b))))
        } else {
            let bf = nalgebra::DMatrix::from_fn(b.rows, b.cols, |i, jj| {
                rational_to_f64(&b[(i, jj)])
            });
            Ok((bf.transpose() * inv.to_na() * bf).determinant())
        }
    };
    let ry = block(y.matrix())?;
    let rx = block(x.matrix())?;
    let c = (n as f64 / (j as f64 * (n - j) as f64)).sqrt();
    Ok(c * (ry / rx).ln())
}

/// Sublevel (horoball) membership at level r.
#[derive(Clone, Debug)]
pub struct HoroballSpec {
    pub busemann: BusemannSpec,
    pub level: Scalar,
    pub closed: bool,
}

impl HoroballSpec {
    pub fn new(busemann: BusemannSpec, level: Scalar, closed: bool) -> Result<Self> {
        if level.signum() <= 0 {
            return Err(Error::InvalidSpec("horoball level must be positive".into()));
        }
        Ok(HoroballSpec {
            busemann,
            level,
            closed,
        })
    }

    pub fn contains(&self, y: &SymMatrix) -> Result<bool> {
        let v = self.busemann.eval_sym(y)?;
        Ok(match (&v, &self.level) {
            (Scalar::Exact(a), Scalar::Exact(r)) => {
                if self.closed {
                    a <= r
                } else {
                    a < r
                }
            }
            _ => {
                let (a, r) = (v.to_f64(), self.level.to_f64());
                if self.closed {
                    a <= r
                } else {
                    a < r
                }
            }
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum LimitTag {
    Zero,
    Infinity,
    Finite,
}

/// Outcome of the boundary-limit classification of 𝔟 along `beta + εY`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AsymptoticResult {
    /// Classification by the exact column-space conditions.
    pub symbolic: LimitTag,
    /// Classification by the exact expansion along the path.
    pub path: LimitTag,
    /// The finite limit, when there is one.
    pub value: Option<f64>,
    /// Float evaluations at the requested schedule.
    pub numeric: Vec<(f64, f64)>,
    /// Whether the numeric trend agrees with the symbolic answer; the
    /// symbolic answer wins either way.
    pub numeric_consistent: bool,
}

pub const DEFAULT_EPS_SCHEDULE: [f64; 3] = [1e-2, 1e-4, 1e-6];

/// Classify lim 𝔟(beta + εY) for ε → 0⁺.
///
/// The decision is symbolic: exact column-space relations between the base
/// class, the enclosing component, and `beta`. The exact expansion of the
/// trace and block-determinant polynomials along the path provides the
/// finite value and a second certificate; the float schedule is only a
/// cross-check.
pub fn asymptotic_limit(
    spec: &BusemannSpec,
    beta: &SatakePoint,
    y: &SymMatrix,
    schedule: &[f64],
) -> Result<AsymptoticResult> {
    if spec.kind() != BusemannKind::TypeK {
        return Err(Error::InvalidSpec("asymptotics requires a type-k spec".into()));
    }
    if !beta.is_boundary() {
        return Err(Error::NotBoundary("asymptotic base".into()));
    }
    let comp = spec.component().unwrap();
    let alpha_q = spec.alpha().matrix().to_qmat()?;
    let beta_q = beta.matrix().to_qmat()?;
    let y_q = y.to_qmat()?;

    // Exact table conditions.
    let beta_comp = component_of(beta)?;
    let alpha_in_beta = beta_comp.contains_col_space(&exact::column_space(&alpha_q));
    let pi_in_beta = beta_comp.contains_col_space(comp.basis());
    let pi_meets_beta = {
        // col(beta) ∩ col(Pi) nontrivial iff dims don't add up.
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for j in 0..comp.basis().cols {
            rows.push((0..comp.basis().rows).map(|i| comp.basis()[(i, j)].clone()).collect());
        }
        for j in 0..beta_comp.basis().cols {
            rows.push(
                (0..beta_comp.basis().rows)
                    .map(|i| beta_comp.basis()[(i, j)].clone())
                    .collect(),
            );
        }
        let joint = exact::rank(&QMat::from_rows(rows).transpose());
        joint < comp.dim() + beta_comp.dim()
    };
    let symbolic = if alpha_in_beta {
        if pi_in_beta {
            LimitTag::Finite
        } else {
            LimitTag::Zero
        }
    } else if pi_meets_beta {
        LimitTag::Infinity
    } else {
        LimitTag::Finite
    };

    // Exact expansion along the path: 𝔟(beta+εY) is proportional to
    // N(ε)·P(ε)^(-1/m) with N = tr(adj(beta+εY)·alpha) and
    // P = det(Bᵀ adj(beta+εY) B).
    let m = comp.dim();
    let path = path_matrix(&beta_q, &y_q);
    let adj = poly_adjugate(&path);
    let n_dim = beta_q.rows;
    let mut n_poly = Poly::zero();
    for i in 0..n_dim {
        for j in 0..n_dim {
            n_poly = n_poly.add(&adj[i][j].scale(&alpha_q[(j, i)]));
        }
    }
    let b = comp.basis();
    let mut block = vec![vec![Poly::zero(); m]; m];
    for r in 0..m {
        for s in 0..m {
            let mut acc = Poly::zero();
            for i in 0..n_dim {
                for j in 0..n_dim {
                    let c = &b[(i, r)] * &b[(j, s)];
                    acc = acc.add(&adj[i][j].scale(&c));
                }
            }
            block[r][s] = acc;
        }
    }
    let p_poly = poly_det(&block);
    let (a_ord, a_coeff) = n_poly
        .lowest_term()
        .ok_or_else(|| Error::Degenerate("trace part vanishes identically".into()))?;
    let (b_ord, b_coeff) = p_poly
        .lowest_term()
        .ok_or_else(|| Error::Degenerate("block part vanishes identically".into()))?;
    // Exponent of the leading term: a_ord - b_ord/m, compared to 0 exactly.
    let lead = a_ord as i64 * m as i64 - b_ord as i64;
    let path_tag = if lead > 0 {
        LimitTag::Zero
    } else if lead < 0 {
        LimitTag::Infinity
    } else {
        LimitTag::Finite
    };

    let value = if path_tag == LimitTag::Finite {
        let (tx, dx) = spec.parts(spec.reference().matrix())?;
        let r1 = rational_to_f64(a_coeff) / tx.to_f64();
        let r2 = rational_to_f64(b_coeff) / dx.to_f64();
        Some(r1 * r2.powf(-1.0 / m as f64))
    } else {
        None
    };

    // Float cross-check along the schedule.
    let mut numeric = Vec::new();
    for &eps in schedule {
        let z = SymMatrix::from_fn(n_dim, |i, j| {
            Scalar::float(
                beta.matrix().entry(i, j).to_f64() + eps * y.entry(i, j).to_f64(),
            )
        });
        let v = spec.eval_sym(&z)?.to_f64();
        numeric.push((eps, v));
    }
    let numeric_consistent = match symbolic {
        LimitTag::Zero => trend_decreasing(&numeric),
        LimitTag::Infinity => trend_increasing(&numeric),
        LimitTag::Finite => {
            let v = value.unwrap_or(f64::NAN);
            numeric
                .last()
                .is_some_and(|&(_, last)| (last - v).abs() <= 1e-3 * v.abs().max(1e-30))
        }
    };

    Ok(AsymptoticResult {
        symbolic,
        path: path_tag,
        value,
        numeric,
        numeric_consistent,
    })
}

fn trend_decreasing(vals: &[(f64, f64)]) -> bool {
    vals.windows(2).all(|w| w[1].1 <= w[0].1) && vals.last().is_some_and(|&(_, v)| v < 0.5)
}

fn trend_increasing(vals: &[(f64, f64)]) -> bool {
    vals.windows(2).all(|w| w[1].1 >= w[0].1) && vals.last().is_some_and(|&(_, v)| v > 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededGen;
    use crate::space::{act, Isometry};

    fn sat_e1() -> SatakePoint {
        SatakePoint::from_vector(&[Scalar::one(), Scalar::zero(), Scalar::zero()]).unwrap()
    }

    #[test]
    fn selberg_at_identity() {
        let i = SpacePoint::identity(3);
        assert_eq!(selberg(&i, &i).unwrap(), Scalar::int(3));
    }

    #[test]
    fn selberg_is_asymmetric_witness() {
        let mut gen = SeededGen::new(40);
        let x = SpacePoint::new(gen.space_point_exact(3)).unwrap();
        let g = Isometry::new(gen.unimodular(3)).unwrap();
        let y = act(&g, &SpacePoint::identity(3)).unwrap();
        let ab = selberg(&x, &y).unwrap();
        let ba = selberg(&y, &x).unwrap();
        assert_ne!(ab, ba);
    }

    #[test]
    fn type0_diagonal_values() {
        let spec = BusemannSpec::type0(sat_e1(), SpacePoint::identity(3)).unwrap();
        let i = SpacePoint::identity(3);
        assert_eq!(spec.eval(&i).unwrap(), Scalar::one());
        let y = SymMatrix::diag(&[Scalar::int(4), Scalar::one(), Scalar::ratio(1, 4)]);
        let v = spec.eval_sym(&y).unwrap();
        assert_eq!(v, Scalar::ratio(1, 4));
    }

    #[test]
    fn type0_representative_independent() {
        let a1 = SymMatrix::outer(&[Scalar::one(), Scalar::zero(), Scalar::zero()]);
        let a2 = a1.scale(&Scalar::int(2));
        let s1 = BusemannSpec::type0(SatakePoint::new(a1).unwrap(), SpacePoint::identity(3))
            .unwrap();
        let s2 = BusemannSpec::type0(SatakePoint::new(a2).unwrap(), SpacePoint::identity(3))
            .unwrap();
        let mut gen = SeededGen::new(41);
        for _ in 0..10 {
            let y = gen.space_point_exact(3);
            assert_eq!(s1.eval_sym(&y).unwrap(), s2.eval_sym(&y).unwrap());
        }
    }

    #[test]
    fn type_k_closed_form() {
        // Component spanned by the first two coordinates, base class e1e1ᵀ,
        // reference I: the value at Y is
        // ((Y⁻¹)₁₁/sqrt(det of the leading 2x2 block of Y⁻¹)) over the same
        // expression at I (which is 1).
        let comp = BoundaryComponent::coordinate(3, 2);
        let spec = BusemannSpec::type_k(sat_e1(), comp, SpacePoint::identity(3)).unwrap();
        let mut gen = SeededGen::new(42);
        for _ in 0..10 {
            let y = gen.space_point_exact(3);
            let yinv = y.inverse().unwrap().to_qmat().unwrap();
            let expect = rational_to_f64(&yinv[(0, 0)])
                / rational_to_f64(
                    &(&yinv[(0, 0)] * &yinv[(1, 1)] - &yinv[(0, 1)] * &yinv[(1, 0)]),
                )
                .sqrt();
            let got = spec.eval_sym(&y).unwrap().to_f64();
            assert!((got - expect).abs() <= 1e-12 * expect.abs());
        }
    }

    #[test]
    fn type_k_value_at_reference_is_one() {
        let comp = BoundaryComponent::coordinate(3, 2);
        let mut gen = SeededGen::new(43);
        let x = SpacePoint::new(gen.space_point_exact(3)).unwrap();
        let spec = BusemannSpec::type_k(sat_e1(), comp, x.clone()).unwrap();
        let v = spec.eval(&x).unwrap().to_f64();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn type_k_frame_gauge_invariance() {
        // Same plane, two spanning sets: values agree.
        let c1 = BoundaryComponent::coordinate(3, 2);
        let c2 = BoundaryComponent::from_span(&[
            vec![exact::q_int(2), exact::q_int(1), exact::q_int(0)],
            vec![exact::q_int(1), exact::q_int(1), exact::q_int(0)],
        ])
        .unwrap();
        let s1 = BusemannSpec::type_k(sat_e1(), c1, SpacePoint::identity(3)).unwrap();
        let s2 = BusemannSpec::type_k(sat_e1(), c2, SpacePoint::identity(3)).unwrap();
        let mut gen = SeededGen::new(44);
        for _ in 0..10 {
            let y = gen.space_point_exact(3);
            let v1 = s1.eval_sym(&y).unwrap().to_f64();
            let v2 = s2.eval_sym(&y).unwrap().to_f64();
            assert!((v1 - v2).abs() <= 1e-12 * v1.abs());
        }
    }

    #[test]
    fn type_k_rejects_base_outside_component() {
        let comp = BoundaryComponent::coordinate(3, 2);
        let alpha = SatakePoint::from_vector(&[Scalar::zero(), Scalar::zero(), Scalar::one()])
            .unwrap();
        assert!(BusemannSpec::type_k(alpha, comp, SpacePoint::identity(3)).is_err());
    }

    #[test]
    fn classical_vertex_formula() {
        // V = span(e1), n = 3: b = sqrt(3/2) log((Y⁻¹)₁₁/(X⁻¹)₁₁).
        let v = BoundaryComponent::coordinate(3, 1);
        let x = SpacePoint::identity(3);
        let y = SpacePoint::new(SymMatrix::diag(&[
            Scalar::float(4.0),
            Scalar::float(1.0),
            Scalar::float(0.25),
        ]))
        .unwrap();
        let b = classical_busemann_vertex(&v, &x, &y).unwrap();
        let expect = (3.0f64 / 2.0).sqrt() * 0.25f64.ln();
        assert!((b - expect).abs() < 1e-12);
        assert!(classical_busemann_vertex(&v, &x, &x).unwrap().abs() < 1e-15);
    }

    #[test]
    fn log_type0_matches_classical_vertex() {
        // For rank-one alpha = v vᵀ the log of the type-0 value is
        // sqrt((n-1)/n) times the classical Busemann function at the vertex.
        let mut gen = SeededGen::new(45);
        for _ in 0..100 {
            let vvec = gen.nonzero_vector(3, 2);
            let alpha = SatakePoint::new(SymMatrix::outer(
                &vvec.iter().map(|q| Scalar::Exact(q.clone())).collect::<Vec<_>>(),
            ))
            .unwrap();
            let comp = component_of(&alpha).unwrap();
            let x = SpacePoint::new(gen.space_point_exact(3)).unwrap();
            let y = SpacePoint::new(gen.space_point_exact(3)).unwrap();
            let spec = BusemannSpec::type0(alpha, x.clone()).unwrap();
            let lhs = spec.eval(&y).unwrap().to_f64().ln();
            let rhs = (2.0f64 / 3.0).sqrt() * classical_busemann_vertex(&comp, &x, &y).unwrap();
            assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()), "lhs={lhs} rhs={rhs}");
        }
    }

    #[test]
    fn horoball_membership_and_nesting() {
        let spec = BusemannSpec::type0(sat_e1(), SpacePoint::identity(3)).unwrap();
        let h1 = HoroballSpec::new(spec.clone(), Scalar::ratio(1, 2), true).unwrap();
        let h2 = HoroballSpec::new(spec.clone(), Scalar::int(2), true).unwrap();
        // At the reference the value is 1.
        let i = SymMatrix::identity(3);
        assert!(!h1.contains(&i).unwrap());
        assert!(h2.contains(&i).unwrap());
        // Nesting on random samples.
        let mut gen = SeededGen::new(46);
        for _ in 0..50 {
            let y = gen.space_point_exact(3);
            if h1.contains(&y).unwrap() {
                assert!(h2.contains(&y).unwrap());
            }
        }
    }

    #[test]
    fn lipschitz_margin_zero_at_equal_points() {
        let spec = BusemannSpec::type0(sat_e1(), SpacePoint::identity(3)).unwrap();
        let mut gen = SeededGen::new(47);
        let y = SpacePoint::new(gen.space_point_exact(3)).unwrap();
        let m = lipschitz_margin(&spec, &y, &y).unwrap();
        assert!(m.abs() < 1e-12);
    }

    #[test]
    fn asymptotic_star_case_gives_projected_value() {
        // Component = first two coordinates, alpha = e1e1ᵀ, beta = diag(b0, 0)
        // positive definite in the block: the limit is the type-0 value of
        // the projected data.
        let comp = BoundaryComponent::coordinate(3, 2);
        let spec =
            BusemannSpec::type_k(sat_e1(), comp, SpacePoint::identity(3)).unwrap();
        let b0 = [[2i64, 1], [1, 1]];
        let beta = SatakePoint::new(SymMatrix::from_fn(3, |i, j| {
            if i < 2 && j < 2 {
                Scalar::int(b0[i][j])
            } else {
                Scalar::zero()
            }
        }))
        .unwrap();
        let mut gen = SeededGen::new(48);
        let y = gen.space_point_exact(3);
        let res = asymptotic_limit(&spec, &beta, &y, &DEFAULT_EPS_SCHEDULE).unwrap();
        assert_eq!(res.symbolic, LimitTag::Finite);
        assert_eq!(res.path, LimitTag::Finite);
        // Projected limit: tr(beta0⁻¹ e1e1ᵀ)/det(beta0⁻¹)^(1/2) over the
        // reference part (=1 at I): beta0⁻¹ = [[1,-1],[-1,2]], so the
        // value is 1/sqrt(det(beta0⁻¹)) · (beta0⁻¹)₁₁ = 1·1 = 1.
        assert!((res.value.unwrap() - 1.0).abs() < 1e-12);
        assert!(res.numeric_consistent);
    }

    #[test]
    fn asymptotic_transverse_case_depends_on_direction() {
        let comp = BoundaryComponent::coordinate(3, 2);
        let spec =
            BusemannSpec::type_k(sat_e1(), comp, SpacePoint::identity(3)).unwrap();
        let beta = SatakePoint::from_vector(&[Scalar::zero(), Scalar::zero(), Scalar::one()])
            .unwrap();
        let mut gen = SeededGen::new(49);
        let y = gen.space_point_exact(3);
        let res = asymptotic_limit(&spec, &beta, &y, &DEFAULT_EPS_SCHEDULE).unwrap();
        assert_eq!(res.symbolic, LimitTag::Finite);
        assert_eq!(res.path, LimitTag::Finite);
        // Limit equals the type-0 value of the projected direction Y0
        // (leading 2x2 block of Y).
        let y0 = QMat::from_fn(2, 2, |i, j| y.entry(i, j).exact().unwrap().clone());
        let y0inv = exact::inverse(&y0).unwrap();
        let expect = rational_to_f64(&y0inv[(0, 0)])
            / rational_to_f64(&exact::det(&y0inv)).sqrt();
        assert!((res.value.unwrap() - expect).abs() <= 1e-12 * expect.abs());
        assert!(res.numeric_consistent);
    }

    #[test]
    fn asymptotic_zero_and_infinity_cases() {
        let comp = BoundaryComponent::coordinate(3, 2);
        let spec =
            BusemannSpec::type_k(sat_e1(), comp, SpacePoint::identity(3)).unwrap();
        let mut gen = SeededGen::new(50);
        let y = gen.space_point_exact(3);
        // col(alpha) ⊆ col(beta), col(Pi) ⊄ col(beta): zero.
        let beta_zero = SatakePoint::new(SymMatrix::outer(&[
            Scalar::one(),
            Scalar::zero(),
            Scalar::zero(),
        ]))
        .unwrap();
        let res = asymptotic_limit(&spec, &beta_zero, &y, &DEFAULT_EPS_SCHEDULE).unwrap();
        assert_eq!(res.symbolic, LimitTag::Zero);
        assert_eq!(res.path, LimitTag::Zero);
        assert!(res.numeric_consistent);
        // col(alpha) ⊄ col(beta), col(beta) ∩ col(Pi) nontrivial: infinity.
        let beta_inf = SatakePoint::from_vector(&[Scalar::zero(), Scalar::one(), Scalar::zero()])
            .unwrap();
        let res = asymptotic_limit(&spec, &beta_inf, &y, &DEFAULT_EPS_SCHEDULE).unwrap();
        assert_eq!(res.symbolic, LimitTag::Infinity);
        assert_eq!(res.path, LimitTag::Infinity);
        assert!(res.numeric_consistent);
    }
}
