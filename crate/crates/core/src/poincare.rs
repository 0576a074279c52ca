//! Dirichlet-Selberg domain construction and the checkable steps of the
//! fundamental-polyhedron algorithm: facet pairings and exactness, ridge
//! cycles with dihedral-angle sums, boundary-face cycles with their fixed
//! classes and invariance certificates, and expressibility of generators
//! as pairing words.
//!
//! Everything combinatorial (incidence, pairing images, cycle closing,
//! fixed classes) is exact rational arithmetic; only angles and distances
//! are floats.

use std::collections::{HashMap, VecDeque};

use num::Zero;

use crate::exact::{self, QMat, Q};
use crate::mat::{SqMatrix, SymMatrix};
use crate::polytope::{bisector_normal, FacePoset, ProjPolytope, SatakeFace};
use crate::satake::SatakePoint;
use crate::scalar::Scalar;
use crate::space::{Isometry, IsometryWord, SpacePoint};
use crate::{Error, Result};

/// A finite symmetric generator set together with the center point.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    elements: Vec<Isometry>,
    center: SpacePoint,
}

impl GeneratorSet {
    /// Validates exactness, closure under inverse, and that no element
    /// stabilizes the center.
    pub fn new(elements: Vec<Isometry>, center: SpacePoint) -> Result<Self> {
        for g in &elements {
            if !g.matrix().is_exact() {
                return Err(Error::InexactInput("generator entries".into()));
            }
            if g.dim() != center.dim() {
                return Err(Error::DimensionMismatch("generator vs center".into()));
            }
            if g.act_sym(center.matrix()).exact_eq(center.matrix()) {
                return Err(Error::Degenerate(
                    "a generator stabilizes the center".into(),
                ));
            }
        }
        for g in &elements {
            let inv = g.inverse();
            if !elements.iter().any(|h| h.exact_eq(&inv)) {
                return Err(Error::InvalidSpec(
                    "generator set is not closed under inverse".into(),
                ));
            }
        }
        Ok(GeneratorSet { elements, center })
    }

    pub fn elements(&self) -> &[Isometry] {
        &self.elements
    }

    pub fn center(&self) -> &SpacePoint {
        &self.center
    }
}

/// Per-facet pairing data.
#[derive(Clone, Debug)]
pub struct FacetInfo {
    /// Index into the poset facet layer.
    pub poset_index: usize,
    /// Sorted vertex indices of the facet.
    pub vertices: Vec<usize>,
    /// Supporting half-space index in the polytope.
    pub halfspace: usize,
    /// Index of the generator g with facet ⊂ Bis(X, g.X).
    pub generator: usize,
    /// The facet supported by the bisector of g⁻¹, when present.
    pub partner: Option<usize>,
}

/// A Dirichlet-Selberg domain with its canonical facet pairing.
#[derive(Clone, Debug)]
pub struct DomainWithPairing {
    pub center: SpacePoint,
    pub generators: Vec<Isometry>,
    pub polytope: ProjPolytope,
    /// halfspace index -> generator index.
    pub halfspace_source: Vec<usize>,
    /// Present only when the hull is bounded inside the chart.
    pub poset: Option<FacePoset>,
    pub facets: Vec<FacetInfo>,
    pub warning: Option<String>,
}

/// Build the domain of a generator set: one bisector half-space per
/// element, vertex enumeration, and the facet pairing map.
pub fn build_domain(gens: &GeneratorSet) -> Result<DomainWithPairing> {
    let x = gens.center();
    let n = x.dim();
    let mut normals: Vec<SymMatrix> = Vec::new();
    let mut sources: Vec<usize> = Vec::new();
    for (i, g) in gens.elements().iter().enumerate() {
        let a = bisector_normal(x, g)?;
        if normals.iter().any(|b| b.exact_eq(&a)) {
            // Two elements with the same bisector; keep the first source.
            continue;
        }
        normals.push(a);
        sources.push(i);
    }
    let polytope = ProjPolytope::from_halfspaces(n, normals.clone())?;
    // from_halfspaces preserves the order of deduplicated primitives.
    let halfspace_source: Vec<usize> = polytope
        .halfspaces()
        .iter()
        .map(|h| {
            let k = normals
                .iter()
                .position(|a| a.exact_eq(h))
                .expect("half-space order preserved");
            sources[k]
        })
        .collect();
    if !polytope.is_bounded_in_chart() {
        let warning = format!(
            "hull not bounded in the trace-one chart ({} recession ray(s), lineality {}); no vertex list",
            polytope.recession().len(),
            polytope.lineality_dim()
        );
        return Ok(DomainWithPairing {
            center: x.clone(),
            generators: gens.elements().to_vec(),
            polytope,
            halfspace_source,
            poset: None,
            facets: Vec::new(),
            warning: Some(warning),
        });
    }
    let poset = polytope.face_poset()?;
    let mut facets = Vec::new();
    for (fi, face) in poset.facets().iter().enumerate() {
        let hs: Vec<usize> = face
            .tight
            .iter()
            .copied()
            .filter(|h| polytope.facet_support().contains(h))
            .collect();
        if hs.len() != 1 {
            return Err(Error::Degenerate(format!(
                "facet {fi} supported by {} half-spaces",
                hs.len()
            )));
        }
        facets.push(FacetInfo {
            poset_index: fi,
            vertices: face.vertices.clone(),
            halfspace: hs[0],
            generator: halfspace_source[hs[0]],
            partner: None,
        });
    }
    // Pair each facet with the facet of the inverse generator.
    let gens_list = gens.elements();
    let partner_of: Vec<Option<usize>> = facets
        .iter()
        .map(|f| {
            let inv = gens_list[f.generator].inverse();
            let gi = gens_list.iter().position(|h| h.exact_eq(&inv))?;
            facets.iter().position(|f2| f2.generator == gi)
        })
        .collect();
    for (f, p) in facets.iter_mut().zip(partner_of) {
        f.partner = p;
    }
    Ok(DomainWithPairing {
        center: x.clone(),
        generators: gens.elements().to_vec(),
        polytope,
        halfspace_source,
        poset: Some(poset),
        facets,
        warning: None,
    })
}

impl DomainWithPairing {
    pub fn poset(&self) -> Result<&FacePoset> {
        self.poset
            .as_ref()
            .ok_or_else(|| Error::Degenerate(self.warning.clone().unwrap_or_default()))
    }

    /// Locate a trace-one exact matrix among the vertices.
    pub fn vertex_index_of(&self, m: &SymMatrix) -> Option<usize> {
        self.polytope.vertices().iter().position(|v| v.exact_eq(m))
    }

    /// Apply an isometry to a vertex and locate the image vertex.
    pub fn map_vertex(&self, g: &Isometry, v: usize) -> Option<usize> {
        let img = g.act_sym(&self.polytope.vertices()[v]);
        let tr = img.trace();
        let t = tr.exact()?.clone();
        let normalized = img.scale(&Scalar::Exact(t.recip()));
        self.vertex_index_of(&normalized)
    }

    /// Apply an isometry to a vertex set; None when any image is not a
    /// vertex of the domain.
    pub fn map_vertex_set(&self, g: &Isometry, vs: &[usize]) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(vs.len());
        for &v in vs {
            out.push(self.map_vertex(g, v)?);
        }
        out.sort_unstable();
        Some(out)
    }

    pub fn generator_index_of(&self, g: &Isometry) -> Option<usize> {
        self.generators.iter().position(|h| h.exact_eq(g))
    }

    /// The facets whose closures contain a given vertex set.
    pub fn facets_of_ridge(&self, ridge_vertices: &[usize]) -> Vec<usize> {
        self.facets
            .iter()
            .enumerate()
            .filter(|(_, f)| ridge_vertices.iter().all(|v| f.vertices.contains(v)))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Result of one facet-pair verification.
#[derive(Clone, Debug)]
pub struct PairCheck {
    pub facet: usize,
    pub partner: Option<usize>,
    pub generator: usize,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct ExactnessReport {
    pub pairs: Vec<PairCheck>,
}

impl ExactnessReport {
    pub fn all_ok(&self) -> bool {
        self.pairs.iter().all(|p| p.ok)
    }
}

/// Verify that each facet's pairing transformation carries its vertex set
/// exactly onto the partner facet's vertex set: F' = g_F⁻¹.F.
pub fn check_exact(d: &DomainWithPairing) -> Result<ExactnessReport> {
    let _ = d.poset()?;
    let mut report = ExactnessReport::default();
    for (fi, f) in d.facets.iter().enumerate() {
        let g = &d.generators[f.generator];
        let image = d.map_vertex_set(&g.inverse(), &f.vertices);
        let (ok, detail) = match (&image, f.partner) {
            (Some(img), Some(pi)) => {
                let expected = &d.facets[pi].vertices;
                if img == expected {
                    (true, format!("facet {fi} -> facet {pi}"))
                } else {
                    (
                        false,
                        format!("facet {fi}: image {img:?} differs from partner {expected:?}"),
                    )
                }
            }
            (None, _) => (false, format!("facet {fi}: image leaves the vertex set")),
            (_, None) => (false, format!("facet {fi}: no partner facet")),
        };
        report.pairs.push(PairCheck {
            facet: fi,
            partner: f.partner,
            generator: f.generator,
            ok,
            detail,
        });
    }
    Ok(report)
}

/// A ridge cycle: the orbit of a codimension-two face under the pairings.
#[derive(Clone, Debug)]
pub struct RidgeCycle {
    /// Vertex sets of the ridges visited, in order.
    pub ridges: Vec<Vec<usize>>,
    /// Generator index of each applied step transformation.
    pub letters: Vec<usize>,
    /// Product of the letters, applied left to right.
    pub word: IsometryWord,
}

impl RidgeCycle {
    pub fn len(&self) -> usize {
        self.ridges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ridges.is_empty()
    }

    /// Compare against an expected cycle up to rotation and reversal.
    /// `expected` pairs each ridge vertex-set with the letter applied to
    /// leave it.
    pub fn matches(&self, d: &DomainWithPairing, expected: &[(Vec<usize>, Isometry)]) -> bool {
        if expected.len() != self.len() {
            return false;
        }
        let m = self.len();
        let mine: Vec<(Vec<usize>, &Isometry)> = self
            .ridges
            .iter()
            .zip(self.letters.iter())
            .map(|(r, &l)| (r.clone(), &d.generators[l]))
            .collect();
        let expect_fwd: Vec<(Vec<usize>, Isometry)> = expected.to_vec();
        // Reversal: traverse backwards with inverted letters.
        let mut expect_rev: Vec<(Vec<usize>, Isometry)> = Vec::new();
        for i in 0..m {
            let ridge = expected[(m - i) % m].0.clone();
            let letter = expected[(m - 1 - i) % m].1.inverse();
            expect_rev.push((ridge, letter));
        }
        for cand in [expect_fwd, expect_rev] {
            for rot in 0..m {
                if (0..m).all(|i| {
                    let (r, l) = &cand[(i + rot) % m];
                    mine[i].0 == *r && mine[i].1.exact_eq(l)
                }) {
                    return true;
                }
            }
        }
        false
    }
}

/// Partition all ridges into cycles by following the facet pairings.
///
/// From a state (ridge, facet-to-glue-through) the step applies
/// h = g_facet⁻¹, lands on the ridge h.r inside the partner facet, and
/// continues through the other facet of the landed ridge.
pub fn ridge_cycles(d: &DomainWithPairing) -> Result<Vec<RidgeCycle>> {
    let poset = d.poset()?;
    let ridge_sets: Vec<Vec<usize>> = poset.ridges().iter().map(|r| r.vertices.clone()).collect();
    let mut used: Vec<bool> = vec![false; ridge_sets.len()];
    let mut cycles = Vec::new();
    for start in 0..ridge_sets.len() {
        if used[start] {
            continue;
        }
        let sfacets = d.facets_of_ridge(&ridge_sets[start]);
        if sfacets.len() != 2 {
            return Err(Error::Degenerate(format!(
                "ridge {start} lies in {} facets",
                sfacets.len()
            )));
        }
        let mut ridges = Vec::new();
        let mut letters = Vec::new();
        let mut state = (start, sfacets[0]);
        let budget = 2 * ridge_sets.len() + 2;
        loop {
            if ridges.len() > budget {
                return Err(Error::BudgetExhausted(
                    "ridge orbit failed to close (non-exact pairing?)".into(),
                ));
            }
            let (r, through) = state;
            used[r] = true;
            let f = &d.facets[through];
            let h = d.generators[f.generator].inverse();
            let h_idx = d
                .generator_index_of(&h)
                .ok_or_else(|| Error::InvalidSpec("inverse not in generator set".into()))?;
            let image = d
                .map_vertex_set(&h, &ridge_sets[r])
                .ok_or_else(|| Error::Degenerate(format!("ridge {r} maps off the domain")))?;
            let next_r = ridge_sets
                .iter()
                .position(|s| *s == image)
                .ok_or_else(|| Error::Degenerate("image is not a ridge".into()))?;
            let arrived = f
                .partner
                .ok_or_else(|| Error::Degenerate("unpaired facet in cycle".into()))?;
            let nfacets = d.facets_of_ridge(&ridge_sets[next_r]);
            let next_through = *nfacets
                .iter()
                .find(|&&x| x != arrived)
                .ok_or_else(|| Error::Degenerate("landed ridge misses the partner facet".into()))?;
            ridges.push(ridge_sets[r].clone());
            letters.push(h_idx);
            state = (next_r, next_through);
            if state == (start, sfacets[0]) {
                break;
            }
        }
        let word = IsometryWord::new(letters.iter().map(|&l| d.generators[l].clone()).collect())?;
        cycles.push(RidgeCycle {
            ridges,
            letters,
            word,
        });
    }
    Ok(cycles)
}

/// Flip a normal so that the half-space {tr(A·Y) >= 0} contains the
/// reference point.
pub fn orient_toward(a: &SymMatrix, reference: &SymMatrix) -> Result<SymMatrix> {
    match a.dot(reference).signum() {
        1 => Ok(a.clone()),
        -1 => Ok(a.neg()),
        _ => Err(Error::Degenerate(
            "reference point lies on the hyperplane".into(),
        )),
    }
}

fn gram_inner(
    x: &nalgebra::DMatrix<f64>,
    a: &nalgebra::DMatrix<f64>,
    b: &nalgebra::DMatrix<f64>,
) -> f64 {
    (x * a * x * b).trace()
}

fn gram_det(
    x: &nalgebra::DMatrix<f64>,
    rows: &[&nalgebra::DMatrix<f64>],
    cols: &[&nalgebra::DMatrix<f64>],
) -> f64 {
    let k = rows.len();
    let g = nalgebra::DMatrix::from_fn(k, k, |i, j| gram_inner(x, rows[i], cols[j]));
    g.determinant()
}

/// Interior Riemannian dihedral angle at a point of the intersection of
/// two planes sharing the normals in `shared` and separated by `b`, `b2`.
///
/// Both `b` and `b2` must be oriented so their half-spaces contain the
/// domain side; the reported angle is the one measured through that side.
/// The formula is the wedge Gram ratio with inner product
/// ⟨A,B⟩ = tr(XAXB); flipping one of b, b2 replaces the angle by π minus
/// it. Scale-invariant in x, so any positive multiple of a point works.
pub fn dihedral_angle(
    x: &SymMatrix,
    shared: &[SymMatrix],
    b: &SymMatrix,
    b2: &SymMatrix,
    incidence_tol: f64,
) -> Result<f64> {
    for a in shared.iter().chain([b, b2]) {
        let v = a.dot(x);
        let ok = match &v {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(f) => f.abs() <= incidence_tol * (1.0 + a.norm_f64() * x.norm_f64()),
        };
        if !ok {
            return Err(Error::InvalidSpec(format!(
                "base point is not incident with a defining plane (tr = {v})"
            )));
        }
    }
    let xf = x.to_na();
    let sh: Vec<nalgebra::DMatrix<f64>> = shared.iter().map(|a| a.to_na()).collect();
    let bf = b.to_na();
    let b2f = b2.to_na();
    let mut rows: Vec<&nalgebra::DMatrix<f64>> = sh.iter().collect();
    rows.push(&bf);
    let mut cols: Vec<&nalgebra::DMatrix<f64>> = sh.iter().collect();
    cols.push(&b2f);
    let guu = gram_det(&xf, &rows, &rows);
    let gvv = gram_det(&xf, &cols, &cols);
    if guu <= 0.0 || gvv <= 0.0 {
        return Err(Error::Degenerate("linearly dependent normals".into()));
    }
    let guv = gram_det(&xf, &rows, &cols);
    let cos_raw = guv / (guu * gvv).sqrt();
    Ok((-cos_raw).clamp(-1.0, 1.0).acos())
}

/// Limit of the interior dihedral angle toward a boundary class alpha:
/// the same Gram ratio with inner product ⟨A,B⟩ = tr(alpha·A·alpha·B),
/// which is exactly the projected-block inner product on the boundary
/// component of alpha.
pub fn angle_limit(
    alpha: &SatakePoint,
    shared: &[SymMatrix],
    b: &SymMatrix,
    b2: &SymMatrix,
) -> Result<f64> {
    for a in shared.iter().chain([b, b2]) {
        let v = a.dot(alpha.matrix());
        let ok = match &v {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(f) => f.abs() <= 1e-10,
        };
        if !ok {
            return Err(Error::InvalidSpec(
                "alpha is not in the closure of both planes".into(),
            ));
        }
    }
    let af = alpha.matrix().to_na();
    let sh: Vec<nalgebra::DMatrix<f64>> = shared.iter().map(|a| a.to_na()).collect();
    let bf = b.to_na();
    let b2f = b2.to_na();
    let mut rows: Vec<&nalgebra::DMatrix<f64>> = sh.iter().collect();
    rows.push(&bf);
    let mut cols: Vec<&nalgebra::DMatrix<f64>> = sh.iter().collect();
    cols.push(&b2f);
    let guu = gram_det(&af, &rows, &rows);
    let gvv = gram_det(&af, &cols, &cols);
    if guu <= 1e-30 || gvv <= 1e-30 {
        return Err(Error::Degenerate(
            "transversality failure: projected normals dependent".into(),
        ));
    }
    let guv = gram_det(&af, &rows, &cols);
    let cos_raw = guv / (guu * gvv).sqrt();
    Ok((-cos_raw).clamp(-1.0, 1.0).acos())
}

/// Angle sums of one ridge cycle at deterministic interior samples.
#[derive(Clone, Debug)]
pub struct AngleSumResult {
    /// One dihedral-angle sum per sample point.
    pub sums: Vec<f64>,
    /// k with all sums within tolerance of 2π/k, when unambiguous.
    pub inferred_k: Option<u32>,
    pub failures: Vec<String>,
}

fn van_der_corput(mut k: u64, p: u64) -> Q {
    let mut num = Q::zero();
    let mut scale = exact::q_one();
    while k > 0 {
        scale = scale / exact::q_int(p as i64);
        num = num + exact::q_int((k % p) as i64) * scale.clone();
        k /= p;
    }
    num
}

const VDC_PRIMES: [u64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

/// Rational interior samples of the convex hull of `verts` (trace-one
/// points), from a fixed low-discrepancy sequence. Deterministic.
pub fn ridge_samples(verts: &[&SymMatrix], count: usize) -> Result<Vec<SymMatrix>> {
    let m = verts.len();
    if m < 2 {
        return Err(Error::InvalidSpec("need at least two vertices".into()));
    }
    let mut out = Vec::with_capacity(count);
    for t in 0..count {
        let mut ws: Vec<Q> = (0..m)
            .map(|j| van_der_corput(t as u64 + 1, VDC_PRIMES[j % VDC_PRIMES.len()]))
            .collect();
        for w in ws.iter_mut() {
            // Strictly positive weights.
            *w = w.clone() + exact::q_ratio(1, 64);
        }
        let total: Q = ws.iter().fold(Q::zero(), |a, b| a + b.clone());
        let mut p = SymMatrix::zero(verts[0].dim());
        for (w, v) in ws.iter().zip(verts.iter()) {
            p = p.add(&v.scale(&Scalar::Exact(w / &total)));
        }
        out.push(p);
    }
    Ok(out)
}

/// Sum the interior dihedral angles along a ridge cycle at `samples`
/// deterministic interior points of the starting ridge.
///
/// Sample points are carried as exact rational representatives of
/// projective points (rescaling onto the unit-determinant slice changes
/// no angle); transported exactly by the cycle letters; incidence with
/// each visited ridge is certified exactly.
pub fn angle_sum(
    d: &DomainWithPairing,
    cycle: &RidgeCycle,
    samples: usize,
    angle_tol: f64,
) -> Result<AngleSumResult> {
    let mut failures = Vec::new();
    let verts: Vec<&SymMatrix> = cycle.ridges[0]
        .iter()
        .map(|&v| &d.polytope.vertices()[v])
        .collect();
    let points = ridge_samples(&verts, samples)?;
    // Facet normal pair for each ridge in the cycle.
    let mut normal_pairs = Vec::new();
    for r in &cycle.ridges {
        let fs = d.facets_of_ridge(r);
        if fs.len() != 2 {
            return Err(Error::Degenerate("ridge without exactly two facets".into()));
        }
        let a = d.polytope.halfspaces()[d.facets[fs[0]].halfspace].clone();
        let b = d.polytope.halfspaces()[d.facets[fs[1]].halfspace].clone();
        normal_pairs.push((a, b));
    }
    let mut sums = Vec::with_capacity(points.len());
    for (si, p0) in points.iter().enumerate() {
        let mut p = p0.clone();
        let mut total = 0.0;
        let mut ok = true;
        for (step, (a, b)) in normal_pairs.iter().enumerate() {
            if !a.dot(&p).is_zero() || !b.dot(&p).is_zero() {
                failures.push(format!(
                    "sample {si}: transported point is off ridge at step {step}"
                ));
                ok = false;
                break;
            }
            match dihedral_angle(&p, &[], a, b, 1e-10) {
                Ok(theta) => total += theta,
                Err(e) => {
                    failures.push(format!("sample {si} step {step}: {e}"));
                    ok = false;
                    break;
                }
            }
            let h = &d.generators[cycle.letters[step]];
            p = h.act_sym(&p);
        }
        if ok {
            sums.push(total);
        }
    }
    let inferred_k = infer_turn_order(&sums, angle_tol);
    if inferred_k.is_none() && failures.is_empty() {
        failures.push(format!(
            "angle sums match no 2π/k within {angle_tol:e}: {sums:?}"
        ));
    }
    Ok(AngleSumResult {
        sums,
        inferred_k,
        failures,
    })
}

/// The unique k in 1..=12 with every sum within tolerance of 2π/k.
pub fn infer_turn_order(sums: &[f64], tol: f64) -> Option<u32> {
    if sums.is_empty() {
        return None;
    }
    let mut hit = None;
    for k in 1..=12u32 {
        let target = 2.0 * std::f64::consts::PI / k as f64;
        if sums.iter().all(|s| (s - target).abs() <= tol) {
            if hit.is_some() {
                return None;
            }
            hit = Some(k);
        }
    }
    hit
}

/// A pairing-orbit cycle of a boundary face: a word mapping the face onto
/// itself through facet gluings.
#[derive(Clone, Debug)]
pub struct FaceCycle {
    /// Index into the supplied boundary-face list.
    pub face: usize,
    /// Generator indices of the applied letters.
    pub letters: Vec<usize>,
    pub word: IsometryWord,
}

fn face_neighbors(
    d: &DomainWithPairing,
    face_sets: &[Vec<usize>],
    fi: usize,
) -> Result<Vec<(usize, usize)>> {
    // All (image face, letter) reachable by gluing through one facet whose
    // closure contains the face.
    let mut out = Vec::new();
    for f in &d.facets {
        if !face_sets[fi].iter().all(|v| f.vertices.contains(v)) {
            continue;
        }
        let h = d.generators[f.generator].inverse();
        let h_idx = d
            .generator_index_of(&h)
            .ok_or_else(|| Error::InvalidSpec("inverse not in generator set".into()))?;
        if let Some(img) = d.map_vertex_set(&h, &face_sets[fi]) {
            if let Some(tj) = face_sets.iter().position(|s| *s == img) {
                out.push((tj, h_idx));
            }
        }
    }
    Ok(out)
}

/// Shortest backtrack-free pairing word carrying `faces[from]` onto
/// `faces[to]` (nontrivial when from == to). Breadth-first over the
/// gluing graph; a step never immediately undoes the previous letter.
pub fn face_pairing_word(
    d: &DomainWithPairing,
    faces: &[SatakeFace],
    from: usize,
    to: usize,
) -> Result<Option<FaceCycle>> {
    let face_sets: Vec<Vec<usize>> = faces.iter().map(|f| f.vertices.clone()).collect();
    let inverse_letter: Vec<usize> = d
        .generators
        .iter()
        .map(|g| {
            d.generator_index_of(&g.inverse())
                .ok_or_else(|| Error::InvalidSpec("inverse not in generator set".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut queue: VecDeque<(usize, usize, Vec<usize>)> = VecDeque::new();
    // Visited states: (face, arrived-from, last letter).
    let mut seen = std::collections::HashSet::new();
    for (nb, letter) in face_neighbors(d, &face_sets, from)? {
        queue.push_back((nb, from, vec![letter]));
    }
    let max_len = 2 * faces.len() + 2;
    while let Some((at, prev, word)) = queue.pop_front() {
        if at == to {
            let iso = IsometryWord::new(word.iter().map(|&l| d.generators[l].clone()).collect())?;
            return Ok(Some(FaceCycle {
                face: from,
                letters: word,
                word: iso,
            }));
        }
        let last = *word.last().expect("nonempty word");
        if !seen.insert((at, prev, last)) || word.len() >= max_len {
            continue;
        }
        for (nb, letter) in face_neighbors(d, &face_sets, at)? {
            // Never exactly undo the previous gluing step.
            if nb == prev && letter == inverse_letter[last] {
                continue;
            }
            let mut w = word.clone();
            w.push(letter);
            queue.push_back((nb, at, w));
        }
    }
    Ok(None)
}

/// For every boundary face, a cycle word mapping it onto itself.
pub fn satake_face_cycles(d: &DomainWithPairing, faces: &[SatakeFace]) -> Result<Vec<FaceCycle>> {
    let mut out = Vec::new();
    for fi in 0..faces.len() {
        if let Some(cycle) = face_pairing_word(d, faces, fi, fi)? {
            out.push(cycle);
        }
    }
    Ok(out)
}

/// The minimizing boundary class of a component with respect to the
/// center: B (BᵀX⁻¹B)⁻¹ Bᵀ over a rational basis B of the component.
/// Basis-independent.
pub fn component_minimizer(face: &SatakeFace, x: &SpacePoint) -> Result<SatakePoint> {
    let b = face.component.basis();
    let xinv = x.matrix().inverse()?.to_qmat()?;
    let core = exact::inverse(&b.transpose().mul(&xinv).mul(b))?;
    let alpha = b.mul(&core).mul(&b.transpose());
    SatakePoint::new(SymMatrix::from_qmat(&alpha))
}

/// A fixed boundary class of a face cycle: the center minimizer when the
/// word already fixes it, otherwise the barycenter of the finite orbit of
/// the restricted action. Exact throughout.
pub fn cycle_fixed_point(
    face: &SatakeFace,
    w: &IsometryWord,
    x: &SpacePoint,
    order_budget: usize,
) -> Result<SatakePoint> {
    let candidate = component_minimizer(face, x)?;
    let wp = w.product();
    if candidate.transform(wp).exact_eq(&candidate) {
        return Ok(candidate);
    }
    // Restricted action rho on the component: wᵀ B = B rho.
    let b = face.component.basis();
    let wq = wp.matrix().to_qmat()?;
    let wtb = wq.transpose().mul(b);
    let gram_inv = exact::inverse(&b.transpose().mul(b))?;
    let rho = gram_inv.mul(&b.transpose()).mul(&wtb);
    if b.mul(&rho) != wtb {
        return Err(Error::InvalidSpec(
            "the word does not preserve the boundary component".into(),
        ));
    }
    // Finite order of the restricted action, up to sign.
    let m = rho.rows;
    let id = QMat::identity(m);
    let neg_id = id.scale(&-exact::q_one());
    let mut pw = rho.clone();
    let mut order = None;
    for l in 1..=order_budget {
        if pw == id || pw == neg_id {
            order = Some(l);
            break;
        }
        pw = pw.mul(&rho);
    }
    let Some(order) = order else {
        let det = exact::det(&rho);
        return Err(Error::BudgetExhausted(format!(
            "restricted action has no order <= {order_budget}; det of restriction = {det} \
             (the word rescales instead of fixing the component)"
        )));
    };
    // Average the candidate core over the orbit of the restricted action.
    let xinv = x.matrix().inverse()?.to_qmat()?;
    let core = exact::inverse(&b.transpose().mul(&xinv).mul(b))?;
    let mut acc = QMat::zero(m, m);
    let mut pw = QMat::identity(m);
    for _ in 0..order {
        let term = pw.mul(&core).mul(&pw.transpose());
        acc = QMat::from_fn(m, m, |i, j| &acc[(i, j)] + &term[(i, j)]);
        pw = rho.mul(&pw);
    }
    let alpha = b.mul(&acc).mul(&b.transpose());
    let fixed = SatakePoint::new(SymMatrix::from_qmat(&alpha))?;
    if !fixed.transform(wp).exact_eq(&fixed) {
        return Err(Error::Degenerate(
            "orbit barycenter is not fixed by the word".into(),
        ));
    }
    Ok(fixed)
}

/// Invariance certificates for a word fixing a boundary class.
#[derive(Clone, Debug)]
pub struct InvarianceReport {
    pub fixes_alpha: bool,
    /// tr(X⁻¹ alpha) = tr(X⁻¹ (w.alpha)), exact.
    pub trace_certificate: bool,
    pub type0_trials: usize,
    pub type0_failures: usize,
    pub typek_trials: usize,
    pub typek_failures: usize,
}

impl InvarianceReport {
    pub fn all_ok(&self) -> bool {
        self.fixes_alpha
            && self.trace_certificate
            && self.type0_failures == 0
            && self.typek_failures == 0
    }
}

/// Exact check of the invariances at seeded rational samples: the type-0
/// equality 𝔟(Y) = 𝔟(w.Y) for random references Z, and the type-k
/// equality through the component when one is supplied.
pub fn invariance_check(
    w: &IsometryWord,
    alpha: &SatakePoint,
    component: Option<&crate::satake::BoundaryComponent>,
    x: &SpacePoint,
    trials: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    use crate::busemann::BusemannSpec;
    let wp = w.product();
    let fixes_alpha = alpha.transform(wp).exact_eq(alpha);
    let xinv = x.matrix().inverse()?;
    let walpha = alpha.transform(wp);
    let trace_certificate = {
        let a = xinv.dot(alpha.matrix());
        let b = xinv.dot(walpha.matrix());
        match (a.exact(), b.exact()) {
            (Some(p), Some(q)) => p == q,
            _ => false,
        }
    };
    let mut gen = crate::rng::SeededGen::new(seed);
    let mut type0_failures = 0;
    let mut typek_failures = 0;
    let mut typek_trials = 0;
    for _ in 0..trials {
        let y = gen.space_point_exact(x.dim());
        let z = SpacePoint::new(gen.space_point_exact(x.dim()))?;
        let wy = wp.act_sym(&y);
        let spec0 = BusemannSpec::type0(alpha.clone(), z.clone())?;
        if !spec0.values_equal_exact(&y, &wy)? {
            type0_failures += 1;
        }
        // The through-component certificate applies when alpha sits on the
        // boundary of the component (strictly smaller rank).
        if let Some(c) = component.filter(|c| alpha.rank() < c.dim()) {
            typek_trials += 1;
            let speck = BusemannSpec::type_k(alpha.clone(), c.clone(), z)?;
            if !speck.values_equal_exact(&y, &wy)? {
                typek_failures += 1;
            }
        }
    }
    Ok(InvarianceReport {
        fixes_alpha,
        trace_certificate,
        type0_trials: trials,
        type0_failures,
        typek_trials,
        typek_failures,
    })
}

/// Measured multiplicative constant of a word carrying one boundary edge
/// to another: the ratio of the type-k value at (w.Π, w.alpha, X) on w.Y
/// to the value at (Π, alpha, X) on Y, constant over samples.
#[derive(Clone, Debug)]
pub struct ScalingMeasurement {
    pub constant: f64,
    pub max_relative_spread: f64,
    pub samples: usize,
}

pub fn measure_edge_scaling(
    w: &IsometryWord,
    alpha: &SatakePoint,
    component: &crate::satake::BoundaryComponent,
    x: &SpacePoint,
    trials: usize,
    seed: u64,
) -> Result<ScalingMeasurement> {
    use crate::busemann::BusemannSpec;
    let wp = w.product();
    let alpha2 = alpha.transform(wp);
    let comp2 = component.transform(wp)?;
    let spec1 = BusemannSpec::type_k(alpha.clone(), component.clone(), x.clone())?;
    let spec2 = BusemannSpec::type_k(alpha2, comp2, x.clone())?;
    let mut gen = crate::rng::SeededGen::new(seed);
    let mut ratios = Vec::with_capacity(trials);
    for _ in 0..trials {
        let y = gen.space_point_exact(x.dim());
        let wy = wp.act_sym(&y);
        let v1 = spec1.eval_sym(&y)?.to_f64();
        let v2 = spec2.eval_sym(&wy)?.to_f64();
        ratios.push(v2 / v1);
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    let spread = ratios
        .iter()
        .map(|r| (r - mean).abs() / mean.abs())
        .fold(0.0f64, f64::max);
    Ok(ScalingMeasurement {
        constant: mean,
        max_relative_spread: spread,
        samples: trials,
    })
}

/// Witness for one generator in the expressibility search.
#[derive(Clone, Debug)]
pub struct ExpressWitness {
    pub generator: usize,
    /// Indices into the pairing list forming the witness word, applied
    /// left to right; None when the search depth is exhausted.
    pub word: Option<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct ExpressReport {
    pub witnesses: Vec<ExpressWitness>,
    pub depth: usize,
}

impl ExpressReport {
    pub fn all_expressed(&self) -> bool {
        self.witnesses.iter().all(|w| w.word.is_some())
    }
}

fn matrix_key(m: &SqMatrix) -> String {
    m.rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

/// Breadth-first search over pairing words up to `depth`, reporting a
/// witness word per generator (or exhaustion).
pub fn expressibility(
    generators: &[Isometry],
    pairings: &[Isometry],
    depth: usize,
) -> Result<ExpressReport> {
    if depth == 0 {
        return Err(Error::InvalidSpec("depth must be at least 1".into()));
    }
    let n = pairings
        .first()
        .map(|p| p.dim())
        .ok_or_else(|| Error::InvalidSpec("no pairings".into()))?;
    let mut frontier: Vec<(SqMatrix, Vec<usize>)> = vec![(SqMatrix::identity(n), Vec::new())];
    let mut seen: HashMap<String, Vec<usize>> = HashMap::new();
    seen.insert(matrix_key(&SqMatrix::identity(n)), Vec::new());
    for _ in 0..depth {
        let mut next = Vec::new();
        for (m, word) in &frontier {
            for (pi, p) in pairings.iter().enumerate() {
                let prod = m.mul(p.matrix());
                let key = matrix_key(&prod);
                if seen.contains_key(&key) {
                    continue;
                }
                let mut w = word.clone();
                w.push(pi);
                seen.insert(key, w.clone());
                next.push((prod, w));
            }
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    let witnesses = generators
        .iter()
        .enumerate()
        .map(|(gi, g)| ExpressWitness {
            generator: gi,
            word: seen.get(&matrix_key(g.matrix())).cloned(),
        })
        .collect();
    Ok(ExpressReport { witnesses, depth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededGen;

    #[test]
    fn empty_generator_set_is_whole_space() {
        let gens = GeneratorSet::new(Vec::new(), SpacePoint::identity(3)).unwrap();
        let d = build_domain(&gens).unwrap();
        assert!(d.polytope.halfspaces().is_empty());
        assert!(d.poset.is_none());
        assert!(d.warning.is_some());
    }

    #[test]
    fn generator_set_requires_inverses() {
        let mut gen = SeededGen::new(70);
        let g = Isometry::new(gen.unimodular(3)).unwrap();
        let r = GeneratorSet::new(vec![g], SpacePoint::identity(3));
        assert!(r.is_err());
    }

    #[test]
    fn orient_toward_flips_sign() {
        let a = SymMatrix::diag(&[Scalar::int(1), Scalar::int(-1), Scalar::zero()]);
        let r = SymMatrix::diag(&[Scalar::int(1), Scalar::int(2), Scalar::int(1)]);
        let o = orient_toward(&a, &r).unwrap();
        assert!(o.dot(&r).signum() > 0);
        let o2 = orient_toward(&a.neg(), &r).unwrap();
        assert!(o.exact_eq(&o2));
    }

    #[test]
    fn dihedral_orthogonal_pair() {
        let x = SymMatrix::identity(3);
        let b = SymMatrix::diag(&[Scalar::int(1), Scalar::int(-1), Scalar::zero()]);
        let mut b2 = SymMatrix::zero(3);
        b2.set(0, 1, Scalar::int(1));
        let theta = dihedral_angle(&x, &[], &b, &b2, 1e-10).unwrap();
        assert!((theta - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn dihedral_supplementary_on_flip() {
        let mut gen = SeededGen::new(71);
        let mut done = 0;
        while done < 20 {
            // Random trace-free symmetric normals are incident with I.
            let m1 = gen.invertible_int(3, 2);
            let m2 = gen.invertible_int(3, 2);
            let sym = |m: &QMat| {
                SymMatrix::from_fn(3, |i, j| {
                    Scalar::Exact(&m[(i, j)] + &m[(j, i)])
                })
            };
            let mut b = sym(&m1);
            let mut b2 = sym(&m2);
            for m in [&mut b, &mut b2] {
                let t = m.trace();
                let third = &t / &Scalar::int(3);
                for i in 0..3 {
                    let v = m.entry(i, i) - &third;
                    m.set(i, i, v);
                }
            }
            let x = SymMatrix::identity(3);
            let Ok(a1) = dihedral_angle(&x, &[], &b, &b2, 1e-10) else {
                continue;
            };
            let a2 = dihedral_angle(&x, &[], &b, &b2.neg(), 1e-10).unwrap();
            assert!((a1 + a2 - std::f64::consts::PI).abs() < 1e-9);
            done += 1;
        }
    }

    #[test]
    fn planar_worked_angle() {
        // Two geodesics in the 2x2 chart meeting at a known class with
        // interior angle 2π/3.
        let a0 = SymMatrix::from_rows(&[
            vec![Scalar::zero(), Scalar::int(-1)],
            vec![Scalar::int(-1), Scalar::int(1)],
        ])
        .unwrap();
        let b0 = SymMatrix::from_rows(&[
            vec![Scalar::int(1), Scalar::int(-1)],
            vec![Scalar::int(-1), Scalar::zero()],
        ])
        .unwrap();
        let x = SymMatrix::from_rows(&[
            vec![Scalar::one(), Scalar::ratio(1, 2)],
            vec![Scalar::ratio(1, 2), Scalar::one()],
        ])
        .unwrap();
        let theta = dihedral_angle(&x, &[], &a0, &b0, 1e-10).unwrap();
        assert!((theta - 2.0 * std::f64::consts::FRAC_PI_3).abs() < 1e-12);
    }

    #[test]
    fn expressibility_of_products() {
        let mut gen = SeededGen::new(72);
        let a = Isometry::new(gen.unimodular(3)).unwrap();
        let b = Isometry::new(gen.unimodular(3)).unwrap();
        let ab = a.compose(&b);
        let pairings = vec![a.clone(), b.clone(), a.inverse(), b.inverse()];
        let report = expressibility(&[ab], &pairings, 2).unwrap();
        let w = report.witnesses[0].word.as_ref().unwrap();
        assert_eq!(w, &vec![0usize, 1]);
    }

    #[test]
    fn van_der_corput_values() {
        assert_eq!(van_der_corput(1, 2), exact::q_ratio(1, 2));
        assert_eq!(van_der_corput(2, 2), exact::q_ratio(1, 4));
        assert_eq!(van_der_corput(3, 2), exact::q_ratio(3, 4));
        assert_eq!(van_der_corput(1, 3), exact::q_ratio(1, 3));
    }
}
