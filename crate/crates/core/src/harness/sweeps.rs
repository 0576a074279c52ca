//! Seeded property sweeps: Lipschitz margins, projection contraction, the
//! log-decomposition identities, boundary-limit classification, interlaced
//! deviations, bisector-boundary equivariance, and horoball contact trends.
//!
//! Every sweep is deterministic in its seed and reports the extremal
//! statistic it observed.

use num::Zero;

use crate::busemann::{
    asymptotic_limit, classical_busemann_vertex, lipschitz_margin, BusemannSpec, LimitTag,
    DEFAULT_EPS_SCHEDULE,
};
use crate::exact::{self, QMat};
use crate::harness::corpus::Corpus;
use crate::harness::interlace::{deviation, interlacing_check, interlacing_oracle};
use crate::mat::SymMatrix;
use crate::poincare::build_domain;
use crate::rng::SeededGen;
use crate::satake::{component_of, BoundaryComponent, SatakePoint};
use crate::scalar::Scalar;
use crate::space::{geodesic_distance, geodesic_distance_pd, SpacePoint};
use crate::{Error, Result};

#[derive(Clone, Debug, serde::Serialize)]
pub struct SweepOutcome {
    pub suite: String,
    pub trials: usize,
    pub violations: usize,
    /// Extremal statistic (suite-specific; see `detail`).
    pub worst: f64,
    pub pass: bool,
    pub detail: String,
}

fn spd(gen: &mut SeededGen) -> Result<SpacePoint> {
    SpacePoint::new(gen.space_point_exact(3))
}

fn rank1(gen: &mut SeededGen) -> Result<SatakePoint> {
    SatakePoint::new(gen.psd_of_rank(3, 1))
}

fn component_over(gen: &mut SeededGen, alpha: &SatakePoint, dim: usize) -> Result<BoundaryComponent> {
    let cols = exact::column_space(&alpha.matrix().to_qmat()?);
    let basis = gen.subspace_containing(3, dim, &cols);
    BoundaryComponent::from_basis_matrix(basis)
}

/// Margin of the 1-Lipschitz bound for type-0 and type-1 functions at
/// n = 3; the worst statistic is the minimum margin.
pub fn lipschitz_sweep(trials: usize, seed: u64, slack: f64) -> Result<SweepOutcome> {
    let mut gen = SeededGen::new(seed);
    let mut violations = 0;
    let mut worst = f64::INFINITY;
    for t in 0..trials {
        let x = spd(&mut gen)?;
        let y1 = spd(&mut gen)?;
        let y2 = spd(&mut gen)?;
        let spec = if t % 2 == 0 {
            let rank = 1 + (t / 2) % 2;
            let alpha = SatakePoint::new(gen.psd_of_rank(3, rank))?;
            BusemannSpec::type0(alpha, x)?
        } else {
            let alpha = rank1(&mut gen)?;
            let comp = component_over(&mut gen, &alpha, 2)?;
            BusemannSpec::type_k(alpha, comp, x)?
        };
        let margin = lipschitz_margin(&spec, &y1, &y2)?;
        worst = worst.min(margin);
        if margin < -slack {
            violations += 1;
        }
    }
    Ok(SweepOutcome {
        suite: "lipschitz".into(),
        trials,
        violations,
        worst,
        pass: violations == 0,
        detail: format!("min margin {worst:.3e} (slack {slack:.0e})"),
    })
}

/// d(π(Y1), π(Y2)) <= d(Y1, Y2) for the frame projection onto random
/// subspaces of dimension 1 and 2; worst = max excess.
pub fn contraction_sweep(trials: usize, seed: u64, slack: f64) -> Result<SweepOutcome> {
    let mut gen = SeededGen::new(seed);
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for t in 0..trials {
        let dim = 1 + t % 2;
        let basis = gen.subspace_containing(3, dim, &QMat::zero(3, 0));
        let v = BoundaryComponent::from_basis_matrix(basis)?;
        let y1 = spd(&mut gen)?;
        let y2 = spd(&mut gen)?;
        let p1 = crate::satake::project(&v, y1.matrix())?;
        let p2 = crate::satake::project(&v, y2.matrix())?;
        let dp = if dim == 1 {
            0.0
        } else {
            geodesic_distance_pd(&p1.to_na(), &p2.to_na())?
        };
        let d = geodesic_distance(&y1, &y2)?;
        let excess = dp - d;
        worst = worst.max(excess);
        if excess > slack {
            violations += 1;
        }
    }
    Ok(SweepOutcome {
        suite: "contraction".into(),
        trials,
        violations,
        worst,
        pass: violations == 0,
        detail: format!("max excess {worst:.3e} (slack {slack:.0e})"),
    })
}

/// The two decomposition identities for rank-one classes at n = 3, k = 1:
/// log of the type-0 value against the classical vertex function, and log
/// of the type-1 value against the difference of vertex functions.
pub fn decomposition_sweep(trials: usize, seed: u64, tol: f64) -> Result<SweepOutcome> {
    let mut gen = SeededGen::new(seed);
    let c_v = (2.0f64 / 3.0).sqrt();
    let c_vk = (1.0f64 / 6.0).sqrt();
    let mut violations = 0;
    let mut worst = 0.0f64;
    for _ in 0..trials {
        let alpha = rank1(&mut gen)?;
        let line = component_of(&alpha)?;
        let plane = component_over(&mut gen, &alpha, 2)?;
        let x = spd(&mut gen)?;
        let y = spd(&mut gen)?;
        let b_v = classical_busemann_vertex(&line, &x, &y)?;
        let b_plane = classical_busemann_vertex(&plane, &x, &y)?;
        let s0 = BusemannSpec::type0(alpha.clone(), x.clone())?;
        let s1 = BusemannSpec::type_k(alpha, plane, x)?;
        let lhs0 = s0.eval(&y)?.to_f64().ln();
        let lhs1 = s1.eval(&y)?.to_f64().ln();
        let e0 = (lhs0 - c_v * b_v).abs();
        let e1 = (lhs1 - (c_v * b_v - c_vk * b_plane)).abs();
        let scale = 1.0 + lhs0.abs().max(lhs1.abs());
        worst = worst.max(e0 / scale).max(e1 / scale);
        if e0 > tol * scale || e1 > tol * scale {
            violations += 1;
        }
    }
    Ok(SweepOutcome {
        suite: "decomposition".into(),
        trials,
        violations,
        worst,
        pass: violations == 0,
        detail: format!("max relative error {worst:.3e} (tol {tol:.0e})"),
    })
}

/// Boundary-limit classification: constructed instances for each of the
/// four column-space configurations, transported into general position by
/// random unimodular conjugation. The symbolic class, the exact path
/// expansion, and the float schedule must all agree; finite limits must
/// match the evaluation at 1e-6 within 1e-3 relative.
pub fn asymptotic_sweep(per_column: usize, seed: u64) -> Result<SweepOutcome> {
    let mut gen = SeededGen::new(seed);
    let mut violations = 0;
    let mut worst = 0.0f64;
    let columns: [(&str, LimitTag); 4] = [
        ("zero", LimitTag::Zero),
        ("finite-star", LimitTag::Finite),
        ("finite-transverse", LimitTag::Finite),
        ("infinity", LimitTag::Infinity),
    ];
    for (ci, (name, expected)) in columns.iter().enumerate() {
        for t in 0..per_column {
            let g = crate::space::Isometry::new(gen.unimodular(3))?;
            // Model data in coordinates, then conjugate by g.
            let alpha0 = SymMatrix::outer(&[Scalar::one(), Scalar::zero(), Scalar::zero()]);
            let beta0 = match ci {
                0 => {
                    if t % 2 == 0 {
                        alpha0.clone()
                    } else {
                        // rank 2 spanned by e1 and e3: contains the base
                        // line, not the component plane.
                        let mut m = SymMatrix::zero(3);
                        m.set(0, 0, Scalar::one());
                        m.set(2, 2, Scalar::one());
                        m.set(0, 2, Scalar::ratio(1, 2));
                        m
                    }
                }
                1 => {
                    // Positive definite block on the component plane.
                    let h = gen.invertible_int(2, 2);
                    let hh = h.transpose().mul(&h);
                    SymMatrix::from_fn(3, |i, j| {
                        if i < 2 && j < 2 {
                            Scalar::Exact(hh[(i, j)].clone())
                        } else {
                            Scalar::zero()
                        }
                    })
                }
                2 => {
                    // Line transverse to the component plane.
                    let p = gen.int_in(-2, 2);
                    let q = gen.int_in(-2, 2);
                    SymMatrix::outer(&[Scalar::int(p), Scalar::int(q), Scalar::one()])
                }
                _ => {
                    // Line inside the plane but different from the base.
                    let p = gen.int_in(-2, 2);
                    SymMatrix::outer(&[Scalar::int(p), Scalar::one(), Scalar::zero()])
                }
            };
            let comp0 = BoundaryComponent::coordinate(3, 2);
            let alpha = SatakePoint::new(g.act_sym(&alpha0))?;
            let beta = SatakePoint::new(g.act_sym(&beta0))?;
            let comp = comp0.transform(&g)?;
            let x = spd(&mut gen)?;
            let y = gen.space_point_exact(3);
            let spec = BusemannSpec::type_k(alpha, comp, x)?;
            let res = asymptotic_limit(&spec, &beta, &y, &DEFAULT_EPS_SCHEDULE)?;
            let mut bad = res.symbolic != *expected || res.path != *expected;
            if !bad && *expected == LimitTag::Finite {
                let v = res.value.unwrap_or(f64::NAN);
                let at6 = res
                    .numeric
                    .iter()
                    .find(|(e, _)| (*e - 1e-6).abs() < 1e-18)
                    .map(|&(_, val)| val)
                    .unwrap_or(f64::NAN);
                let rel = (at6 - v).abs() / v.abs().max(1e-30);
                worst = worst.max(rel);
                bad = rel > 1e-3;
            }
            if !res.numeric_consistent {
                bad = true;
            }
            if bad {
                violations += 1;
                if violations == 1 {
                    worst = worst.max(f64::NAN);
                    let _ = name;
                }
            }
        }
    }
    Ok(SweepOutcome {
        suite: "asymptotic".into(),
        trials: 4 * per_column,
        violations,
        worst,
        pass: violations == 0,
        detail: format!("max finite-limit relative error {worst:.3e}"),
    })
}

fn random_descending(gen: &mut SeededGen, n: usize) -> Vec<exact::Q> {
    let mut xs: Vec<exact::Q> = (0..n)
        .map(|_| exact::q_ratio(gen.int_in(-60, 60), gen.int_in(1, 6)))
        .collect();
    xs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    xs
}

/// Random interlaced instances checked exactly; the box sample is sorted
/// descending, which preserves the interlacing intervals.
pub fn interlacing_sweep(trials: usize, seed: u64, nmax: usize, kmax: usize) -> Result<SweepOutcome> {
    let mut gen = SeededGen::new(seed);
    let mut violations = 0;
    for _ in 0..trials {
        let n = gen.int_in(3, nmax as i64) as usize;
        let k = gen.int_in(1, (kmax.min(n - 1)) as i64) as usize;
        let a = random_descending(&mut gen, n);
        let mut b: Vec<exact::Q> = (0..n - k)
            .map(|i| {
                let lo = &a[i + k];
                let hi = &a[i];
                let t = exact::q_ratio(gen.int_in(0, 16), 16);
                lo + (hi - lo) * t
            })
            .collect();
        b.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let out = interlacing_check(&a, &b, k)?;
        if !out.holds {
            violations += 1;
        }
    }
    Ok(SweepOutcome {
        suite: "interlacing".into(),
        trials,
        violations,
        worst: violations as f64,
        pass: violations == 0,
        detail: format!("n <= {nmax}, k <= {kmax}, exact comparisons"),
    })
}

/// Corner-oracle cross-check at k = 1, n <= 6: the oracle maximum never
/// exceeds the bound, and a deletion pattern reaches it exactly when the
/// deleted element equals the mean.
pub fn interlacing_oracle_sweep(trials: usize, seed: u64, nmax: usize) -> Result<SweepOutcome> {
    let mut gen = SeededGen::new(seed);
    let mut violations = 0;
    for t in 0..trials {
        let n = gen.int_in(3, nmax.min(6) as i64) as usize;
        let mut a = random_descending(&mut gen, n);
        if t % 4 == 0 {
            // Force an exact mean-deletion equality case: plant the mean.
            let mean = a.iter().fold(exact::Q::zero(), |acc, v| acc + v)
                / exact::q_int(n as i64);
            a.push(mean);
            a.sort_by(|x, y| y.partial_cmp(x).unwrap());
        }
        let n = a.len();
        let bound = deviation(&a);
        let oracle = interlacing_oracle(&a, 1)?;
        if oracle > bound {
            violations += 1;
            continue;
        }
        for j in 0..n {
            let b: Vec<exact::Q> = (0..n).filter(|&i| i != j).map(|i| a[i].clone()).collect();
            let d = deviation(&b);
            if d > bound {
                violations += 1;
            }
            let mean = a.iter().fold(exact::Q::zero(), |acc, v| acc + v)
                / exact::q_int(n as i64);
            let is_equality = d == bound;
            let deleted_mean = a[j] == mean;
            if is_equality != deleted_mean {
                violations += 1;
            }
        }
    }
    Ok(SweepOutcome {
        suite: "interlacing-oracle".into(),
        trials,
        violations,
        worst: violations as f64,
        pass: violations == 0,
        detail: "deletion patterns vs corner oracle, exact".into(),
    })
}

/// Bisector-boundary equivariance on the bundled corpus: for every
/// generator g and every vertex class alpha on the bisector boundary of
/// g⁻¹, the reference trace is preserved and the based function satisfies
/// the transport identity exactly.
pub fn equivariance_sweep(c: &Corpus, samples_per_pair: usize, seed: u64) -> Result<SweepOutcome> {
    let gens = c.generator_set()?;
    let d = build_domain(&gens)?;
    let x = SpacePoint::identity(3);
    let xinv = x.matrix().inverse()?;
    let mut gen = SeededGen::new(seed);
    let mut trials = 0;
    let mut violations = 0;
    for (gi, g) in d.generators.iter().enumerate() {
        let ginv = g.inverse();
        let gid = d
            .generator_index_of(&ginv)
            .ok_or_else(|| Error::InvalidSpec("inverse missing".into()))?;
        // Half-space of g⁻¹ and its incident vertices.
        let Some(h) = d.halfspace_source.iter().position(|&s| s == gid) else {
            continue;
        };
        let normal = &d.polytope.halfspaces()[h];
        for v in d.polytope.vertices() {
            if !normal.dot(v).is_zero() {
                continue;
            }
            let alpha = v;
            let g_alpha = g.act_sym(alpha);
            // tr(X⁻¹ alpha) = tr(X⁻¹ (g.alpha)), exact.
            if xinv.dot(alpha) != xinv.dot(&g_alpha) {
                violations += 1;
            }
            for _ in 0..samples_per_pair {
                trials += 1;
                let y = gen.space_point_exact(3);
                let gy = g.act_sym(&y);
                // tr(Y⁻¹ alpha)/tr(X⁻¹ alpha) = tr((gY)⁻¹ g.alpha)/tr(X⁻¹ g.alpha)
                let lhs = y.inverse()?.dot(alpha).exact().cloned();
                let rhs = gy.inverse()?.dot(&g_alpha).exact().cloned();
                let da = xinv.dot(alpha).exact().cloned();
                let db = xinv.dot(&g_alpha).exact().cloned();
                match (lhs, rhs, da, db) {
                    (Some(l), Some(r), Some(p), Some(q)) => {
                        if l * q != r * p {
                            violations += 1;
                        }
                    }
                    _ => violations += 1,
                }
            }
        }
        let _ = gi;
    }
    Ok(SweepOutcome {
        suite: "equivariance".into(),
        trials,
        violations,
        worst: violations as f64,
        pass: violations == 0,
        detail: "bisector-boundary transport identities, exact".into(),
    })
}

/// Horoball boundary contact along straight paths: toward classes whose
/// column space encloses the base the values collapse to zero (eventual
/// membership at every level); toward classes that do not enclose it the
/// values blow up past any level.
pub fn tangency_sweep(paths: usize, seed: u64) -> Result<SweepOutcome> {
    let mut gen = SeededGen::new(seed);
    let mut violations = 0;
    for t in 0..paths {
        let alpha = rank1(&mut gen)?;
        let x = spd(&mut gen)?;
        let spec = BusemannSpec::type0(alpha.clone(), x)?;
        let y = gen.space_point_exact(3);
        let enclosing = t % 2 == 0;
        let beta = if enclosing {
            // col(beta) contains col(alpha).
            let u = gen.nonzero_vector(3, 2);
            let uu = SymMatrix::outer(&u.iter().map(|q| Scalar::Exact(q.clone())).collect::<Vec<_>>());
            let m = alpha.matrix().add(&uu);
            match SatakePoint::new(m) {
                Ok(b) if b.is_boundary() => b,
                _ => continue,
            }
        } else {
            loop {
                let b = rank1(&mut gen)?;
                if !component_of(&b)?.contains_col_space(
                    &exact::column_space(&alpha.matrix().to_qmat()?),
                ) {
                    break b;
                }
            }
        };
        let mut vals = Vec::new();
        for &eps in &DEFAULT_EPS_SCHEDULE {
            let z = SymMatrix::from_fn(3, |i, j| {
                Scalar::float(beta.matrix().entry(i, j).to_f64() + eps * y.entry(i, j).to_f64())
            });
            vals.push(spec.eval_sym(&z)?.to_f64());
        }
        // The block-determinant factor decays like a fractional power of
        // eps, so compare trends by ratio rather than absolute size.
        let ok = if enclosing {
            vals.windows(2).all(|w| w[1] <= w[0]) && vals[2] < 0.25 * vals[0]
        } else {
            vals.windows(2).all(|w| w[1] >= w[0]) && vals[2] > 4.0 * vals[0]
        };
        if !ok {
            violations += 1;
        }
    }
    Ok(SweepOutcome {
        suite: "tangency".into(),
        trials: paths,
        violations,
        worst: violations as f64,
        pass: violations == 0,
        detail: "horoball contact trends along boundary paths".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::corpus::corpus;

    #[test]
    fn lipschitz_small_run() {
        let out = lipschitz_sweep(200, 17, 1e-9).unwrap();
        assert!(out.pass, "{}", out.detail);
    }

    #[test]
    fn lipschitz_bound_tight_along_defining_ray() {
        // For alpha at the first coordinate line and the geodesic pushing
        // toward that vertex, the bound is attained.
        let alpha = SatakePoint::from_vector(&[Scalar::one(), Scalar::zero(), Scalar::zero()])
            .unwrap();
        let spec = BusemannSpec::type0(alpha, SpacePoint::identity(3)).unwrap();
        let y1 = SpacePoint::identity(3);
        for s in [0.3f64, 1.0, 2.0] {
            let y2 = SpacePoint::new(SymMatrix::diag(&[
                Scalar::float((2.0 * s).exp()),
                Scalar::float((-s).exp()),
                Scalar::float((-s).exp()),
            ]))
            .unwrap();
            let m = lipschitz_margin(&spec, &y1, &y2).unwrap();
            assert!(m.abs() <= 1e-9, "margin {m} at s={s}");
        }
    }

    #[test]
    fn contraction_small_run() {
        let out = contraction_sweep(200, 18, 1e-9).unwrap();
        assert!(out.pass, "{}", out.detail);
    }

    #[test]
    fn decomposition_small_run() {
        let out = decomposition_sweep(25, 19, 1e-10).unwrap();
        assert!(out.pass, "{}", out.detail);
    }

    #[test]
    fn asymptotic_small_run() {
        let out = asymptotic_sweep(3, 20).unwrap();
        assert_eq!(out.violations, 0, "{}", out.detail);
    }

    #[test]
    fn interlacing_small_run() {
        let out = interlacing_sweep(2000, 21, 8, 2).unwrap();
        assert!(out.pass);
        let out = interlacing_oracle_sweep(100, 22, 6).unwrap();
        assert!(out.pass, "{}", out.detail);
    }

    #[test]
    fn equivariance_on_corpus() {
        let out = equivariance_sweep(&corpus(), 3, 23).unwrap();
        assert!(out.pass, "{}", out.detail);
        assert!(out.trials > 0);
    }

    #[test]
    fn tangency_small_run() {
        let out = tangency_sweep(10, 24).unwrap();
        assert!(out.pass, "{}", out.detail);
    }
}
