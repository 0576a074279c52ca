//! Projective convex polytopes in the trace-one chart of the space of
//! symmetric matrices: half-space and vertex descriptions, the face poset,
//! boundary (Satake) faces, bisector normals, and the finite-volume test.
//!
//! The trace is positive on nonzero semidefinite matrices, so the whole
//! compactified space sits inside the trace-one chart and polytope
//! computation is ordinary affine double description there. The
//! semidefinite cone itself is never linearized: the linear polyhedron is
//! computed first, and definiteness of vertices and faces is interrogated
//! afterwards, in exact arithmetic.

pub mod dd;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::exact::{self, Definiteness, QMat, Q};
use crate::mat::SymMatrix;
use crate::satake::BoundaryComponent;
use crate::scalar::Scalar;
use crate::space::{Isometry, SpacePoint};
use crate::{Error, Result};

/// Scale an exact symmetric matrix to its primitive integer form,
/// preserving sign/orientation.
pub fn primitive_sym(a: &SymMatrix) -> Result<SymMatrix> {
    let packed = a.packed_q()?;
    let prim = exact::primitive_vector(&packed);
    Ok(SymMatrix::from_packed_q(a.dim(), &prim))
}

/// Canonical unoriented representative of a hyperplane normal: primitive
/// with its first nonzero packed entry positive.
pub fn canonical_hyperplane(a: &SymMatrix) -> Result<SymMatrix> {
    let prim = primitive_sym(a)?;
    let packed = prim.packed_q()?;
    match packed.iter().find(|v| !v.is_zero()) {
        None => Err(Error::ZeroMatrix),
        Some(v) if v < &exact::q_zero() => Ok(prim.scale(&Scalar::int(-1))),
        Some(_) => Ok(prim),
    }
}

/// A hyperplane normal must be indefinite for its perpendicular locus to
/// meet the space in a hyperplane.
pub fn is_indefinite(a: &SymMatrix) -> Result<bool> {
    let q = a.to_qmat()?;
    Ok(exact::definiteness(&q) == Definiteness::Indefinite)
}

/// Inward normal of the bisector between X and g.X: the primitive positive
/// multiple of (g.X)⁻¹ - X⁻¹. The half-space {tr(A·Y) >= 0} then contains
/// the center X, which makes the center's membership a stored certificate.
pub fn bisector_normal(x: &SpacePoint, g: &Isometry) -> Result<SymMatrix> {
    if x.dim() != g.dim() {
        return Err(Error::DimensionMismatch("bisector".into()));
    }
    let gx = g.act_sym(x.matrix());
    let a = gx.inverse()?.sub(&x.inverse());
    if a.packed().iter().all(|v| v.is_zero()) {
        return Err(Error::Degenerate("the isometry stabilizes the center".into()));
    }
    let prim = primitive_sym(&a)?;
    debug_assert!(prim.dot(x.matrix()).signum() > 0);
    Ok(prim)
}

/// A face of the polytope, identified by the vertices it contains.
#[derive(Clone, Debug, Serialize)]
pub struct Face {
    /// Sorted vertex indices.
    pub vertices: Vec<usize>,
    /// Affine dimension.
    pub dim: usize,
    /// Half-space indices tight on every vertex of the face.
    pub tight: Vec<usize>,
}

/// Graded face lattice (proper nonempty faces plus the whole polytope).
#[derive(Clone, Debug, Serialize)]
pub struct FacePoset {
    /// faces[d] lists the faces of dimension d; the last layer is the
    /// polytope itself.
    pub by_dim: Vec<Vec<Face>>,
    pub dim: usize,
}

impl FacePoset {
    pub fn facets(&self) -> &[Face] {
        if self.dim == 0 {
            &self.by_dim[0]
        } else {
            &self.by_dim[self.dim - 1]
        }
    }

    pub fn ridges(&self) -> &[Face] {
        &self.by_dim[self.dim - 2]
    }

    pub fn count(&self, d: usize) -> usize {
        self.by_dim.get(d).map_or(0, |v| v.len())
    }

    pub fn all_proper_faces(&self) -> impl Iterator<Item = &Face> {
        self.by_dim[..self.dim].iter().flatten()
    }
}

/// A convex polytope in the trace-one chart, carried as an exact
/// half-space list together with its enumerated vertex list.
#[derive(Clone, Debug)]
pub struct ProjPolytope {
    n: usize,
    halfspaces: Vec<SymMatrix>,
    vertices: Vec<SymMatrix>,
    /// Extreme rays whose trace is not positive: directions in which the
    /// polytope escapes the chart.
    recession: Vec<SymMatrix>,
    lineality_dim: usize,
    /// Indices of half-spaces that support facets (the irredundant core).
    facet_support: Vec<usize>,
}

impl ProjPolytope {
    /// Enumerate the vertex description of `{Y | tr(Aᵢ·Y) >= 0}` in the
    /// trace-one chart. All half-space data must be exact.
    pub fn from_halfspaces(n: usize, halfspaces: Vec<SymMatrix>) -> Result<Self> {
        if halfspaces.iter().any(|h| h.dim() != n) {
            return Err(Error::DimensionMismatch("half-space dimension".into()));
        }
        let mut canon: Vec<SymMatrix> = Vec::new();
        for h in &halfspaces {
            let p = primitive_sym(h)?;
            if p.packed().iter().all(|v| v.is_zero()) {
                return Err(Error::ZeroMatrix);
            }
            if !canon.iter().any(|c| c.exact_eq(&p)) {
                canon.push(p);
            }
        }
        let constraints: Vec<Vec<Q>> = canon
            .iter()
            .map(|h| h.pairing_functional())
            .collect::<Result<Vec<_>>>()?;
        let dim = n * (n + 1) / 2;
        let cone = dd::double_description(dim, &constraints)?;
        let mut vertices = Vec::new();
        let mut recession = Vec::new();
        for ray in &cone.rays {
            let m = SymMatrix::from_packed_q(n, &ray.vec);
            let tr = m.trace();
            match tr.signum() {
                1 => {
                    let t = tr.expect_exact("trace")?.clone();
                    vertices.push(m.scale(&Scalar::Exact(t.recip())));
                }
                _ => recession.push(m),
            }
        }
        let facet_support = (0..canon.len())
            .filter(|&i| cone.supports_facet(i))
            .collect();
        Ok(ProjPolytope {
            n,
            halfspaces: canon,
            vertices,
            recession,
            lineality_dim: cone.lineality.len(),
            facet_support,
        })
    }

    /// Build directly from known data (used by serde and tests); verifies
    /// that every vertex satisfies every half-space exactly.
    pub fn from_parts(n: usize, halfspaces: Vec<SymMatrix>, vertices: Vec<SymMatrix>) -> Result<Self> {
        let poly = ProjPolytope::from_halfspaces(n, halfspaces)?;
        for v in &vertices {
            for h in &poly.halfspaces {
                if h.dot(v).signum() < 0 {
                    return Err(Error::InvalidSpec(
                        "a listed vertex violates a half-space".into(),
                    ));
                }
            }
        }
        Ok(poly)
    }

    pub fn matrix_dim(&self) -> usize {
        self.n
    }

    pub fn halfspaces(&self) -> &[SymMatrix] {
        &self.halfspaces
    }

    pub fn vertices(&self) -> &[SymMatrix] {
        &self.vertices
    }

    pub fn recession(&self) -> &[SymMatrix] {
        &self.recession
    }

    pub fn lineality_dim(&self) -> usize {
        self.lineality_dim
    }

    /// Indices of half-spaces supporting facets.
    pub fn facet_support(&self) -> &[usize] {
        &self.facet_support
    }

    pub fn is_bounded_in_chart(&self) -> bool {
        self.lineality_dim == 0 && self.recession.is_empty() && !self.vertices.is_empty()
    }

    /// Exact vertex-halfspace incidence matrix: incident[v][h].
    pub fn incidence(&self) -> Vec<Vec<bool>> {
        self.vertices
            .iter()
            .map(|v| self.halfspaces.iter().map(|h| h.dot(v).is_zero()).collect())
            .collect()
    }

    /// The graded face lattice. Requires the polytope to be bounded inside
    /// the chart; otherwise the recession information is reported as the
    /// error.
    pub fn face_poset(&self) -> Result<FacePoset> {
        if !self.is_bounded_in_chart() {
            return Err(Error::Degenerate(format!(
                "not bounded in the trace-one chart: {} recession ray(s), lineality {}",
                self.recession.len(),
                self.lineality_dim
            )));
        }
        let nv = self.vertices.len();
        let inc = self.incidence();
        // Facet incidence sets over the irredundant core.
        let facet_sets: Vec<Vec<usize>> = self
            .facet_support
            .iter()
            .map(|&h| (0..nv).filter(|&v| inc[v][h]).collect())
            .collect();
        let top: Vec<usize> = (0..nv).collect();
        let mut seen: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
        seen.insert(top.clone());
        let mut work = vec![top.clone()];
        while let Some(f) = work.pop() {
            for fs in &facet_sets {
                let inter: Vec<usize> = f.iter().copied().filter(|v| fs.contains(v)).collect();
                if inter.is_empty() || inter == f {
                    continue;
                }
                if seen.insert(inter.clone()) {
                    work.push(inter);
                }
            }
        }
        let poly_dim = self.affine_dim(&top);
        let mut by_dim: Vec<Vec<Face>> = vec![Vec::new(); poly_dim + 1];
        for vs in seen {
            let d = self.affine_dim(&vs);
            let tight = (0..self.halfspaces.len())
                .filter(|&h| vs.iter().all(|&v| inc[v][h]))
                .collect();
            by_dim[d].push(Face {
                vertices: vs,
                dim: d,
                tight,
            });
        }
        for layer in by_dim.iter_mut() {
            layer.sort_by(|a, b| a.vertices.cmp(&b.vertices));
        }
        let poset = FacePoset {
            by_dim,
            dim: poly_dim,
        };
        // Dual-description sanity: every facet supports exactly one core
        // half-space, and its vertex set spans a hyperplane of the chart.
        for f in poset.facets() {
            if f.dim + 1 != poly_dim {
                return Err(Error::Degenerate("facet of unexpected dimension".into()));
            }
        }
        Ok(poset)
    }

    /// Affine dimension of the span of a vertex subset inside the
    /// trace-one chart.
    fn affine_dim(&self, vs: &[usize]) -> usize {
        let rows: Vec<Vec<Q>> = vs
            .iter()
            .map(|&v| self.vertices[v].packed_q().expect("vertices are exact"))
            .collect();
        exact::rank(&QMat::from_rows(rows)) - 1
    }

    /// Exact check that a symmetric matrix satisfies every half-space.
    pub fn contains_sym(&self, y: &SymMatrix) -> bool {
        self.halfspaces.iter().all(|h| h.dot(y).signum() >= 0)
    }
}

/// A face lying entirely in the compactification boundary: all vertices
/// positive semidefinite, with a common singular enclosing column space.
#[derive(Clone, Debug)]
pub struct SatakeFace {
    /// (dimension, index) of the face inside the poset layers.
    pub face_dim: usize,
    pub face_index: usize,
    /// Sorted vertex indices of the face.
    pub vertices: Vec<usize>,
    /// Minimal enclosing boundary component.
    pub component: BoundaryComponent,
    /// Type of the component (its dimension).
    pub satake_type: usize,
}

/// All boundary faces of the polytope, annotated with their minimal
/// enclosing components. A face qualifies when every vertex is positive
/// semidefinite (exact) and the joint column space stays singular.
pub fn satake_faces(p: &ProjPolytope, poset: &FacePoset) -> Result<Vec<SatakeFace>> {
    let n = p.matrix_dim();
    let nv = p.vertices().len();
    let mut vert_psd = vec![false; nv];
    let mut vert_cols: Vec<Option<QMat>> = vec![None; nv];
    for (i, v) in p.vertices().iter().enumerate() {
        let q = v.to_qmat()?;
        let (psd, _) = exact::psd_status(&q);
        vert_psd[i] = psd;
        if psd {
            vert_cols[i] = Some(exact::column_space(&q));
        }
    }
    let mut out = Vec::new();
    for (d, layer) in poset.by_dim.iter().enumerate() {
        for (idx, face) in layer.iter().enumerate() {
            if !face.vertices.iter().all(|&v| vert_psd[v]) {
                continue;
            }
            // Joint column space of the vertex classes; positive
            // combinations of semidefinite matrices have exactly this
            // column space, so the face is singular iff it is proper.
            let mut rows: Vec<Vec<Q>> = Vec::new();
            for &v in &face.vertices {
                let cols = vert_cols[v].as_ref().unwrap();
                for j in 0..cols.cols {
                    rows.push((0..cols.rows).map(|i| cols[(i, j)].clone()).collect());
                }
            }
            let joint = QMat::from_rows(rows).transpose();
            let basis = exact::column_space(&joint);
            if basis.cols >= n {
                continue;
            }
            let component = BoundaryComponent::from_basis_matrix(basis)?;
            out.push(SatakeFace {
                face_dim: d,
                face_index: idx,
                vertices: face.vertices.clone(),
                satake_type: component.dim(),
                component,
            });
        }
    }
    Ok(out)
}

/// Finite volume iff the projective polytope sits inside the closure of
/// the space: bounded in the chart and every vertex positive semidefinite
/// (exact). Unbounded-in-chart polytopes report false.
pub fn finite_volume(p: &ProjPolytope) -> Result<bool> {
    if !p.is_bounded_in_chart() {
        return Ok(false);
    }
    for v in p.vertices() {
        let q = v.to_qmat()?;
        if !exact::psd_status(&q).0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// JSON form: half-space list and vertex list of matrix literals.
#[derive(Serialize, Deserialize)]
pub struct PolytopeJson {
    pub halfspaces: Vec<SymMatrix>,
    #[serde(default)]
    pub vertices: Vec<SymMatrix>,
}

impl ProjPolytope {
    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            halfspaces: self.halfspaces.clone(),
            vertices: self.vertices.clone(),
        }
    }

    pub fn from_json(j: &PolytopeJson) -> Result<Self> {
        let n = j
            .halfspaces
            .first()
            .map(|h| h.dim())
            .ok_or_else(|| Error::InvalidSpec("no half-spaces".into()))?;
        ProjPolytope::from_parts(n, j.halfspaces.clone(), j.vertices.clone())
    }
}

/// Poset JSON: faces as sorted vertex-index lists grouped by dimension.
pub fn poset_to_json(poset: &FacePoset) -> serde_json::Value {
    let layers: Vec<serde_json::Value> = poset
        .by_dim
        .iter()
        .enumerate()
        .map(|(d, layer)| {
            serde_json::json!({
                "dim": d,
                "faces": layer.iter().map(|f| f.vertices.clone()).collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::json!({ "dim": poset.dim, "layers": layers })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededGen;

    #[test]
    fn canonical_hyperplane_fixes_scale_and_sign() {
        let a = SymMatrix::from_rows(&[
            vec![Scalar::zero(), Scalar::ratio(-1, 2)],
            vec![Scalar::ratio(-1, 2), Scalar::int(1)],
        ])
        .unwrap();
        let c = canonical_hyperplane(&a).unwrap();
        assert_eq!(c.entry(0, 1), &Scalar::int(1));
        assert_eq!(c.entry(1, 1), &Scalar::int(-2));
        let rescaled = a.scale(&Scalar::ratio(-7, 3));
        let c2 = canonical_hyperplane(&rescaled).unwrap();
        assert!(c.exact_eq(&c2));
    }

    #[test]
    fn bisector_normal_contains_center() {
        let mut gen = SeededGen::new(60);
        for _ in 0..20 {
            let g = Isometry::new(gen.unimodular(3)).unwrap();
            let x = SpacePoint::identity(3);
            if g.act_sym(x.matrix()).exact_eq(x.matrix()) {
                continue;
            }
            let a = bisector_normal(&x, &g).unwrap();
            assert!(a.dot(x.matrix()).signum() > 0);
            assert!(is_indefinite(&a).unwrap());
        }
    }

    #[test]
    fn bisector_rejects_stabilizer() {
        let x = SpacePoint::identity(3);
        let g = Isometry::identity(3);
        assert!(bisector_normal(&x, &g).is_err());
    }

    #[test]
    fn single_halfspace_polytope_is_unbounded() {
        let a = SymMatrix::diag(&[Scalar::int(1), Scalar::int(-1), Scalar::zero()]);
        let p = ProjPolytope::from_halfspaces(3, vec![a]).unwrap();
        assert!(!p.is_bounded_in_chart());
        assert!(p.face_poset().is_err());
        assert!(!finite_volume(&p).unwrap());
        assert_eq!(p.facet_support().len(), 1);
    }

    #[test]
    fn triangle_in_the_two_by_two_chart() {
        // Three half-spaces cutting the cone over {e1e1ᵀ, e2e2ᵀ, (e1+e2)(e1+e2)ᵀ}.
        let a = SymMatrix::from_rows(&[
            vec![Scalar::zero(), Scalar::int(1)],
            vec![Scalar::int(1), Scalar::zero()],
        ])
        .unwrap();
        let b = SymMatrix::from_rows(&[
            vec![Scalar::zero(), Scalar::int(-1)],
            vec![Scalar::int(-1), Scalar::int(2)],
        ])
        .unwrap();
        let c = SymMatrix::from_rows(&[
            vec![Scalar::int(2), Scalar::int(-1)],
            vec![Scalar::int(-1), Scalar::zero()],
        ])
        .unwrap();
        let p = ProjPolytope::from_halfspaces(2, vec![a, b, c]).unwrap();
        assert!(p.is_bounded_in_chart());
        assert_eq!(p.vertices().len(), 3);
        let poset = p.face_poset().unwrap();
        assert_eq!(poset.dim, 2);
        assert_eq!(poset.count(0), 3);
        assert_eq!(poset.count(1), 3);
        let v = poset_to_json(&poset);
        assert_eq!(v["dim"], 2);
        // All vertices are semidefinite classes, so the polytope has
        // finite volume; the boundary faces are the three vertices.
        assert!(finite_volume(&p).unwrap());
        let sf = satake_faces(&p, &poset).unwrap();
        assert_eq!(sf.len(), 3);
        assert!(sf.iter().all(|f| f.satake_type == 1 && f.face_dim == 0));
    }
}
