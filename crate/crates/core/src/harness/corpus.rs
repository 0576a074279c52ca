//! The bundled worked example: a lattice in SL(3,R) whose Dirichlet-Selberg
//! domain centered at the identity is a projective 5-simplex with all six
//! vertices on the compactification boundary, together with the unipotent
//! generators of a cusp stabilizer and the group relators.
//!
//! The data is pinned by a hash; any edit trips the provenance check.

use sha2::{Digest, Sha256};

use crate::mat::{SqMatrix, SymMatrix};
use crate::poincare::GeneratorSet;
use crate::satake::SatakePoint;
use crate::scalar::Scalar;
use crate::space::{Isometry, IsometryWord, SpacePoint};
use crate::Result;

/// SHA-256 of the canonical serialization of the corpus.
pub const PINNED_HASH: &str = "7e79ddaf7af83492206aee7f9c5a999b510d55fe1493fc33e3a62fcb4ee332aa";

#[derive(Clone, Debug)]
pub struct Corpus {
    /// The six printed boundary vertices (raw integer matrices).
    pub vertices_raw: Vec<SymMatrix>,
    /// Trace-one classes of the vertices.
    pub vertices: Vec<SatakePoint>,
    pub gen_a: Isometry,
    pub gen_b: Isometry,
    pub gen_c: Isometry,
    /// Unipotent generators of the cusp stabilizer.
    pub par_u: Isometry,
    pub par_v: Isometry,
    pub par_w: Isometry,
    /// Group relators over {a, b}.
    pub presentation_relators: Vec<(String, IsometryWord)>,
    /// Relators of the unipotent subgroup over {u, v, w}.
    pub parabolic_relators: Vec<(String, IsometryWord)>,
}

fn sym_i64(rows: [[i64; 3]; 3]) -> SymMatrix {
    SymMatrix::from_rows(
        &rows
            .iter()
            .map(|r| r.iter().map(|&v| Scalar::int(v)).collect())
            .collect::<Vec<_>>(),
    )
    .expect("symmetric literal")
}

fn halves(rows: [[i64; 3]; 3]) -> SqMatrix {
    // Entries are halves of integers.
    SqMatrix::from_fn(3, |i, j| Scalar::ratio(rows[i][j], 2))
}

/// Expand a word over named letters with exponents into an ordered list.
pub fn word(letters: &[(&Isometry, i32)]) -> Result<IsometryWord> {
    let mut seq = Vec::new();
    for (g, e) in letters {
        if *e >= 0 {
            for _ in 0..*e {
                seq.push((*g).clone());
            }
        } else {
            let inv = g.inverse();
            for _ in 0..(-*e) {
                seq.push(inv.clone());
            }
        }
    }
    IsometryWord::new(seq)
}

/// Build the corpus. All entries are rationals with denominator 1 or 2.
pub fn corpus() -> Corpus {
    let vertices_raw = vec![
        sym_i64([[1, 1, 0], [1, 1, 0], [0, 0, 0]]),
        sym_i64([[1, -1, 0], [-1, 1, 0], [0, 0, 0]]),
        sym_i64([[1, 0, 1], [0, 0, 0], [1, 0, 1]]),
        sym_i64([[1, 0, -1], [0, 0, 0], [-1, 0, 1]]),
        sym_i64([[0, 0, 0], [0, 1, 1], [0, 1, 1]]),
        sym_i64([[0, 0, 0], [0, 1, -1], [0, -1, 1]]),
    ];
    let vertices = vertices_raw
        .iter()
        .map(|m| SatakePoint::new(m.clone()).expect("boundary vertex"))
        .collect();

    let gen_a = Isometry::new(halves([[1, 1, 0], [1, -1, 2], [1, -1, -2]])).expect("det 1");
    let gen_b = Isometry::new(halves([[-1, 2, 1], [-1, -2, 1], [1, 0, 1]])).expect("det 1");
    let gen_c = Isometry::new(halves([[-2, 1, -1], [0, 1, 1], [2, 1, -1]])).expect("det 1");

    let par_u = Isometry::new(SqMatrix::from_i64(&[&[1, 1, -1], &[0, 0, 1], &[0, -1, 2]]))
        .expect("det 1");
    let par_v = Isometry::new(SqMatrix::from_i64(&[&[0, 0, -1], &[-1, 1, -1], &[1, 0, 2]]))
        .expect("det 1");
    let par_w = Isometry::new(SqMatrix::from_i64(&[&[0, 0, -1], &[1, 1, 1], &[1, 0, 2]]))
        .expect("det 1");

    let a = &gen_a;
    let b = &gen_b;
    let presentation_relators = vec![
        (
            "(aba^-1b^-1)^2".to_string(),
            word(&[(a, 1), (b, 1), (a, -1), (b, -1), (a, 1), (b, 1), (a, -1), (b, -1)])
                .expect("word"),
        ),
        (
            "(ababa)^2".to_string(),
            word(&[
                (a, 1),
                (b, 1),
                (a, 1),
                (b, 1),
                (a, 1),
                (a, 1),
                (b, 1),
                (a, 1),
                (b, 1),
                (a, 1),
            ])
            .expect("word"),
        ),
        (
            "(a^2b^-1)^2".to_string(),
            word(&[(a, 2), (b, -1), (a, 2), (b, -1)]).expect("word"),
        ),
        (
            "(ab^3)^2".to_string(),
            word(&[(a, 1), (b, 3), (a, 1), (b, 3)]).expect("word"),
        ),
    ];
    let u = &par_u;
    let v = &par_v;
    let w = &par_w;
    let parabolic_relators = vec![
        (
            "[u,v]w^-2".to_string(),
            word(&[(u, 1), (v, 1), (u, -1), (v, -1), (w, -2)]).expect("word"),
        ),
        (
            "[u,w]".to_string(),
            word(&[(u, 1), (w, 1), (u, -1), (w, -1)]).expect("word"),
        ),
        (
            "[v,w]".to_string(),
            word(&[(v, 1), (w, 1), (v, -1), (w, -1)]).expect("word"),
        ),
    ];

    Corpus {
        vertices_raw,
        vertices,
        gen_a,
        gen_b,
        gen_c,
        par_u,
        par_v,
        par_w,
        presentation_relators,
        parabolic_relators,
    }
}

impl Corpus {
    /// The symmetric generator set {a, b, c, a⁻¹, b⁻¹, c⁻¹} centered at
    /// the identity.
    pub fn generator_set(&self) -> Result<GeneratorSet> {
        GeneratorSet::new(
            vec![
                self.gen_a.clone(),
                self.gen_b.clone(),
                self.gen_c.clone(),
                self.gen_a.inverse(),
                self.gen_b.inverse(),
                self.gen_c.inverse(),
            ],
            SpacePoint::identity(3),
        )
    }

    /// Canonical serialization feeding the provenance hash.
    pub fn canonical_json(&self) -> String {
        let value = serde_json::json!({
            "vertices": self.vertices_raw,
            "a": self.gen_a.matrix(),
            "b": self.gen_b.matrix(),
            "c": self.gen_c.matrix(),
            "u": self.par_u.matrix(),
            "v": self.par_v.matrix(),
            "w": self.par_w.matrix(),
            "presentation": self
                .presentation_relators
                .iter()
                .map(|(n, _)| n.clone())
                .collect::<Vec<_>>(),
            "parabolic": self
                .parabolic_relators
                .iter()
                .map(|(n, _)| n.clone())
                .collect::<Vec<_>>(),
        });
        serde_json::to_string(&value).expect("serializable")
    }

    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.canonical_json().as_bytes());
        hex_string(&h.finalize())
    }
}

fn hex_string(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// True when a word evaluates to the exact identity matrix.
pub fn relator_check(word: &IsometryWord) -> bool {
    word.product().matrix().is_identity_exact()
}

/// (g - I)³ = 0, the unipotency certificate in dimension 3.
pub fn is_unipotent3(g: &Isometry) -> bool {
    let n = g.dim();
    let m = g.matrix();
    let id = SqMatrix::identity(n);
    let d = SqMatrix::from_fn(n, |i, j| m.entry(i, j) - id.entry(i, j));
    let cube = d.mul(&d).mul(&d);
    cube.exact_eq(&SqMatrix::from_fn(n, |_, _| Scalar::zero()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::busemann::selberg;
    use crate::space::act;

    #[test]
    fn determinants_are_one() {
        let c = corpus();
        for g in [&c.gen_a, &c.gen_b, &c.gen_c, &c.par_u, &c.par_v, &c.par_w] {
            assert_eq!(g.matrix().det(), Scalar::one());
        }
    }

    #[test]
    fn act_on_identity_matches_gram() {
        // a.I = aᵀa with trace 7/2.
        let c = corpus();
        let x = act(&c.gen_a, &SpacePoint::identity(3)).unwrap();
        let expect = SymMatrix::from_rows(&[
            vec![Scalar::ratio(3, 4), Scalar::ratio(-1, 4), Scalar::zero()],
            vec![Scalar::ratio(-1, 4), Scalar::ratio(3, 4), Scalar::zero()],
            vec![Scalar::zero(), Scalar::zero(), Scalar::int(2)],
        ])
        .unwrap();
        assert!(x.matrix().exact_eq(&expect));
        assert_eq!(x.matrix().trace(), Scalar::ratio(7, 2));
        let s = selberg(&SpacePoint::identity(3), &x).unwrap();
        assert_eq!(s, Scalar::ratio(7, 2));
    }

    #[test]
    fn vertices_classify_on_the_boundary() {
        let c = corpus();
        for v in &c.vertices {
            assert_eq!(v.rank(), 1);
            assert!(v.is_boundary());
        }
        // Rank-one class with squared length 2: spectrum (2, 0, 0).
        let s = crate::space::spectrum(&c.vertices_raw[0]).unwrap();
        assert!((s[0] - 2.0).abs() < 1e-12 && s[1].abs() < 1e-12 && s[2].abs() < 1e-12);
    }

    #[test]
    fn all_relators_hold_exactly() {
        let c = corpus();
        for (name, w) in c.presentation_relators.iter().chain(&c.parabolic_relators) {
            assert!(relator_check(w), "relator {name} failed");
        }
        // A generator alone is not a relator.
        let wa = word(&[(&c.gen_a, 1)]).unwrap();
        assert!(!relator_check(&wa));
    }

    #[test]
    fn cusp_generators_are_unipotent() {
        let c = corpus();
        for g in [&c.par_u, &c.par_v, &c.par_w] {
            assert!(is_unipotent3(g));
        }
        assert!(!is_unipotent3(&c.gen_a));
    }

    #[test]
    fn hash_is_pinned() {
        let c = corpus();
        assert_eq!(c.hash(), PINNED_HASH);
    }
}
