//! End-to-end verification of the bundled worked example: domain
//! reconstruction, combinatorics, pairing exactness, ridge cycles and
//! angle sums, volume finiteness, boundary-face census, relators, and
//! provenance. Each item reports pass/flag/fail with detail.

use serde::Serialize;

use crate::harness::corpus::{is_unipotent3, relator_check, Corpus, PINNED_HASH};
use crate::poincare::{
    angle_sum, build_domain, check_exact, ridge_cycles, DomainWithPairing, RidgeCycle,
};
use crate::polytope::{finite_volume, satake_faces};
use crate::satake::component_leq;
use crate::scalar::Scalar;
use crate::space::Isometry;
use crate::{Result, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ItemStatus {
    Pass,
    /// A measured deviation that must be surfaced rather than silently
    /// accepted; the report carries the measurements.
    Flagged,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyItem {
    pub name: String,
    pub status: ItemStatus,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, Default)]
pub struct VerifyReport {
    pub items: Vec<VerifyItem>,
}

impl VerifyReport {
    fn push(&mut self, name: &str, status: ItemStatus, detail: impl Into<String>) {
        self.items.push(VerifyItem {
            name: name.to_string(),
            status,
            detail: detail.into(),
        });
    }

    fn check(&mut self, name: &str, ok: bool, detail: impl Into<String>) {
        self.push(
            name,
            if ok { ItemStatus::Pass } else { ItemStatus::Fail },
            detail,
        );
    }

    /// True when no item failed (flags are surfaced but not fatal).
    pub fn all_ok(&self) -> bool {
        self.items.iter().all(|i| i.status != ItemStatus::Fail)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "items": self.items,
            "all_ok": self.all_ok(),
        })
    }
}

/// The printed ridge cycles with their step letters; ridge r(i,j) is the
/// face missing vertices i and j (1-based printed labels).
fn expected_cycles(c: &Corpus) -> Vec<Vec<((usize, usize), Isometry)>> {
    let a = c.gen_a.clone();
    let b = c.gen_b.clone();
    let cc = c.gen_c.clone();
    vec![
        vec![((5, 6), a.clone()), ((1, 2), b.clone()), ((3, 4), cc.clone())],
        vec![
            ((1, 4), a.inverse()),
            ((3, 6), b.inverse()),
            ((2, 5), cc.inverse()),
        ],
        vec![((2, 6), a.clone()), ((1, 6), a.clone()), ((1, 3), b.inverse())],
        vec![((2, 4), b.clone()), ((2, 3), b.clone()), ((3, 5), cc.inverse())],
        vec![((4, 6), cc.clone()), ((4, 5), cc.clone()), ((1, 5), a.inverse())],
    ]
}

/// Map printed vertex labels (1..=6) to enumerated vertex indices.
fn vertex_map(c: &Corpus, d: &DomainWithPairing) -> Option<Vec<usize>> {
    c.vertices
        .iter()
        .map(|v| d.vertex_index_of(v.matrix()))
        .collect()
}

fn ridge_set(vmap: &[usize], miss: (usize, usize)) -> Vec<usize> {
    let mut out: Vec<usize> = (0..6)
        .filter(|&i| i + 1 != miss.0 && i + 1 != miss.1)
        .map(|i| vmap[i])
        .collect();
    out.sort_unstable();
    out
}

/// Run the whole pipeline on a corpus and report pass/fail per item.
pub fn verify_with(c: &Corpus, tol: &Tolerances, samples: usize) -> Result<VerifyReport> {
    let mut rep = VerifyReport::default();

    rep.check(
        "corpus-provenance",
        c.hash() == PINNED_HASH,
        format!("sha256 {}", c.hash()),
    );

    let dets_ok = [&c.gen_a, &c.gen_b, &c.gen_c, &c.par_u, &c.par_v, &c.par_w]
        .iter()
        .all(|g| g.matrix().det() == Scalar::one());
    rep.check("generator-determinants", dets_ok, "all six exactly 1");

    let unipotent_ok = [&c.par_u, &c.par_v, &c.par_w].iter().all(|g| is_unipotent3(g));
    rep.check("unipotent-cusp-generators", unipotent_ok, "(g - I)^3 = 0, exact");

    let mut relator_fails = Vec::new();
    for (name, w) in c.presentation_relators.iter().chain(&c.parabolic_relators) {
        if !relator_check(w) {
            relator_fails.push(name.clone());
        }
    }
    rep.check(
        "relators",
        relator_fails.is_empty(),
        if relator_fails.is_empty() {
            "4 presentation + 3 unipotent relators are the exact identity".to_string()
        } else {
            format!("failing relators: {relator_fails:?}")
        },
    );

    // Domain reconstruction.
    let gens = c.generator_set()?;
    let d = build_domain(&gens)?;
    let vmap = vertex_map(c, &d);
    let vertices_ok = d.polytope.vertices().len() == 6 && vmap.is_some();
    rep.check(
        "domain-vertices",
        vertices_ok,
        format!(
            "{} enumerated vertices; printed classes {}",
            d.polytope.vertices().len(),
            if vmap.is_some() { "all found (exact trace-one equality)" } else { "NOT all found" }
        ),
    );
    let Some(vmap) = vmap else {
        return Ok(rep);
    };

    // Exact incidence: the facet of each bisector misses exactly one
    // printed vertex and vanishes on the other five.
    let mut incid_ok = true;
    let mut facet_label = vec![0usize; d.facets.len()];
    for (fi, f) in d.facets.iter().enumerate() {
        let normal = &d.polytope.halfspaces()[f.halfspace];
        let mut missing = Vec::new();
        for (pi, &vi) in vmap.iter().enumerate() {
            let v = &d.polytope.vertices()[vi];
            let pairing = normal.dot(v);
            match pairing.signum() {
                0 => {
                    if !f.vertices.contains(&vi) {
                        incid_ok = false;
                    }
                }
                1 => missing.push(pi + 1),
                _ => incid_ok = false,
            }
        }
        if missing.len() != 1 {
            incid_ok = false;
        } else {
            facet_label[fi] = missing[0];
        }
    }
    rep.check(
        "facet-incidence",
        incid_ok,
        "tr(normal · vertex) = 0 exactly on incident pairs, > 0 opposite",
    );

    let poset = d.poset()?;
    let counts: Vec<usize> = (0..poset.dim).map(|k| poset.count(k)).collect();
    rep.check(
        "face-counts",
        counts == vec![6, 15, 20, 15, 6],
        format!("proper faces by dimension: {counts:?}"),
    );

    // Pairing exactness, including the printed facet assignment
    // a: F6 -> F1, b: F2 -> F3, c: F4 -> F5.
    let exact_rep = check_exact(&d)?;
    let mut pairing_ok = exact_rep.all_ok();
    let printed_pairs = [(6, 1, &c.gen_a), (2, 3, &c.gen_b), (4, 5, &c.gen_c)];
    for (from, to, g) in printed_pairs {
        let fi = facet_label.iter().position(|&l| l == from);
        let ti = facet_label.iter().position(|&l| l == to);
        match (fi, ti) {
            (Some(fi), Some(ti)) => {
                // Gluing through F_from applies g and must land on F_to.
                let img = d.map_vertex_set(g, &d.facets[fi].vertices);
                if img.as_deref() != Some(&d.facets[ti].vertices) {
                    pairing_ok = false;
                }
            }
            _ => pairing_ok = false,
        }
    }
    rep.check(
        "exactness",
        pairing_ok,
        "all six facet pairs verified; printed pairings reproduced exactly",
    );

    // Ridge cycles against the printed lists.
    let cycles = ridge_cycles(&d)?;
    let expected = expected_cycles(c);
    let mut matched = vec![false; expected.len()];
    let mut cycles_ok = cycles.len() == expected.len();
    for cy in &cycles {
        let mut hit = None;
        for (ei, e) in expected.iter().enumerate() {
            let exp: Vec<(Vec<usize>, Isometry)> = e
                .iter()
                .map(|(miss, g)| (ridge_set(&vmap, *miss), g.clone()))
                .collect();
            if cy.matches(&d, &exp) {
                hit = Some(ei);
                break;
            }
        }
        match hit {
            Some(ei) if !matched[ei] => matched[ei] = true,
            _ => cycles_ok = false,
        }
    }
    cycles_ok &= matched.iter().all(|&m| m);
    rep.check(
        "ridge-cycles",
        cycles_ok,
        format!(
            "{} cycles; printed cycles matched up to rotation/reversal: {matched:?}",
            cycles.len()
        ),
    );

    // Angle sums: the cycle through the ridge missing vertices 5,6 must
    // close up to a full turn; the other four to a half turn. A deviating
    // full-turn cycle is flagged with its measured sums, never silently
    // passed (the base-point-invariant angle used to certify it lives
    // outside this crate's scope).
    let first_ridge = ridge_set(&vmap, (5, 6));
    let mut angles_ok = true;
    let mut flagged = None;
    let mut sums_detail = Vec::new();
    for cy in &cycles {
        let is_first = cy.ridges.contains(&first_ridge);
        let res = angle_sum(&d, cy, samples, tol.angle)?;
        let expect_k = if is_first { 1 } else { 2 };
        sums_detail.push(format!(
            "cycle through {:?}: k={:?} sums[0]={:.9}",
            cy.ridges[0],
            res.inferred_k,
            res.sums.first().copied().unwrap_or(f64::NAN)
        ));
        if res.inferred_k != Some(expect_k) {
            if is_first {
                flagged = Some(format!(
                    "full-turn cycle deviates: measured sums {:?} (expected 2π within {:.0e}); \
                     see the open question on base-point-invariant angles",
                    res.sums, tol.angle
                ));
            } else {
                angles_ok = false;
            }
        }
    }
    match (angles_ok, flagged) {
        (true, None) => rep.push("angle-sums", ItemStatus::Pass, sums_detail.join("; ")),
        (true, Some(msg)) => rep.push("angle-sums", ItemStatus::Flagged, msg),
        (false, _) => rep.push(
            "angle-sums",
            ItemStatus::Fail,
            sums_detail.join("; "),
        ),
    }

    rep.check(
        "finite-volume",
        finite_volume(&d.polytope)?,
        "all vertices positive semidefinite, hull bounded in the chart",
    );

    // Boundary-face census: 6 type-1 vertices; 15 type-2 edges; the four
    // coplanar vertex triples span type-2 triangles; nothing else.
    let sf = satake_faces(&d.polytope, poset)?;
    let t1 = sf.iter().filter(|f| f.satake_type == 1).count();
    let t2_edges = sf
        .iter()
        .filter(|f| f.satake_type == 2 && f.face_dim == 1)
        .count();
    let t2_tris = sf
        .iter()
        .filter(|f| f.satake_type == 2 && f.face_dim == 2)
        .count();
    let mut nesting_ok = true;
    for edge in sf.iter().filter(|f| f.face_dim == 1) {
        for &v in &edge.vertices {
            let vf = sf
                .iter()
                .find(|f| f.face_dim == 0 && f.vertices == vec![v]);
            match vf {
                Some(vf) => {
                    if !component_leq(&vf.component, &edge.component) {
                        nesting_ok = false;
                    }
                }
                None => nesting_ok = false,
            }
        }
    }
    rep.check(
        "satake-census",
        t1 == 6 && t2_edges == 15 && t2_tris == 4 && sf.len() == 25 && nesting_ok,
        format!(
            "type-1 vertices {t1}, type-2 edges {t2_edges}, type-2 triangles {t2_tris}; \
             vertex components nest into edge components"
        ),
    );

    Ok(rep)
}

/// Verification of the unmodified bundled corpus.
pub fn verify_example(tol: &Tolerances, samples: usize) -> Result<VerifyReport> {
    verify_with(&crate::harness::corpus::corpus(), tol, samples)
}

/// The five ridge cycles of the bundled domain, for reuse by callers.
pub fn corpus_cycles(d: &DomainWithPairing) -> Result<Vec<RidgeCycle>> {
    ridge_cycles(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::corpus::corpus;
    use crate::mat::SymMatrix;

    #[test]
    fn full_verification_passes() {
        let rep = verify_example(&Tolerances::default(), 4).unwrap();
        for item in &rep.items {
            assert_ne!(
                item.status,
                ItemStatus::Fail,
                "{}: {}",
                item.name,
                item.detail
            );
        }
        // The full-turn cycle closes, so nothing should even be flagged.
        assert!(rep.items.iter().all(|i| i.status == ItemStatus::Pass));
        assert_eq!(rep.items.len(), 12);
    }

    #[test]
    fn perturbed_vertex_breaks_finite_volume() {
        // Adding an indefinite vertex to the polytope description is the
        // negative control for the volume criterion.
        let c = corpus();
        let gens = c.generator_set().unwrap();
        let d = build_domain(&gens).unwrap();
        let mut bad = d.polytope.vertices()[0].clone();
        bad.set(0, 1, Scalar::int(5));
        // Not semidefinite any more.
        let q = bad.to_qmat().unwrap();
        assert!(!crate::exact::psd_status(&q).0);
    }

    #[test]
    fn corrupted_corpus_fails_provenance() {
        let mut c = corpus();
        c.vertices_raw[0].set(0, 1, Scalar::int(2));
        let rep = verify_with(&c, &Tolerances::default(), 2).unwrap();
        let prov = rep.items.iter().find(|i| i.name == "corpus-provenance").unwrap();
        assert_eq!(prov.status, ItemStatus::Fail);
    }
}
