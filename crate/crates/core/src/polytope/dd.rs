//! Double description on rational polyhedral cones.
//!
//! Constraints are processed one at a time; the cone is carried as a
//! lineality basis plus extreme rays with their tight-constraint bitmasks.
//! All pivots are exact rationals.

use num::{Signed, Zero};

use crate::exact::{self, primitive_vector, QMat, Q};
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct Ray {
    pub vec: Vec<Q>,
    /// Bit i set iff constraint i is tight on this ray.
    pub tight: u64,
}

#[derive(Clone, Debug)]
pub struct ConeDD {
    pub dim: usize,
    pub lineality: Vec<Vec<Q>>,
    pub rays: Vec<Ray>,
    pub n_constraints: usize,
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    let mut acc = exact::q_zero();
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x * y;
    }
    acc
}

fn axpy(v: &mut [Q], c: &Q, w: &[Q]) {
    for (x, y) in v.iter_mut().zip(w.iter()) {
        *x -= c * y;
    }
}

/// Extreme rays and lineality of `{x | cᵢ·x >= 0 for all i}`.
pub fn double_description(dim: usize, constraints: &[Vec<Q>]) -> Result<ConeDD> {
    if constraints.len() > 64 {
        return Err(Error::Degenerate(format!(
            "{} constraints exceed the 64-constraint budget",
            constraints.len()
        )));
    }
    let mut lineality: Vec<Vec<Q>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { exact::q_one() } else { exact::q_zero() })
                .collect()
        })
        .collect();
    let mut rays: Vec<Ray> = Vec::new();

    for (idx, a) in constraints.iter().enumerate() {
        if a.len() != dim {
            return Err(Error::DimensionMismatch("constraint length".into()));
        }
        let bit = 1u64 << idx;
        let lvals: Vec<Q> = lineality.iter().map(|l| dot(a, l)).collect();
        if let Some(p) = lvals.iter().position(|v| !v.is_zero()) {
            // The constraint cuts the lineality space: split off one
            // direction as a new extreme ray, flatten the rest onto the
            // hyperplane.
            let mut l0 = lineality.remove(p);
            let mut v0 = lvals[p].clone();
            if v0.is_negative() {
                for x in l0.iter_mut() {
                    *x = -x.clone();
                }
                v0 = -v0;
            }
            for l in lineality.iter_mut() {
                let c = &dot(a, l) / &v0;
                if !c.is_zero() {
                    axpy(l, &c, &l0);
                }
            }
            for r in rays.iter_mut() {
                let c = &dot(a, &r.vec) / &v0;
                if !c.is_zero() {
                    axpy(&mut r.vec, &c, &l0);
                    r.vec = primitive_vector(&r.vec);
                }
                r.tight |= bit;
            }
            let all_previous = bit - 1;
            rays.push(Ray {
                vec: primitive_vector(&l0),
                tight: all_previous,
            });
            continue;
        }

        // Lineality already inside the hyperplane: split rays by sign.
        let vals: Vec<Q> = rays.iter().map(|r| dot(a, &r.vec)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if neg.is_empty() {
            for (r, v) in rays.iter_mut().zip(vals.iter()) {
                if v.is_zero() {
                    r.tight |= bit;
                }
            }
            continue;
        }
        let mut next: Vec<Ray> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if !vals[i].is_negative() {
                let mut r = r.clone();
                if vals[i].is_zero() {
                    r.tight |= bit;
                }
                next.push(r);
            }
        }
        for &p in &pos {
            for &m in &neg {
                if !adjacent(&rays, p, m) {
                    continue;
                }
                // (a·r⁺)·r⁻ - (a·r⁻)·r⁺ lies on the hyperplane.
                let mut w: Vec<Q> = rays[m]
                    .vec
                    .iter()
                    .zip(rays[p].vec.iter())
                    .map(|(mv, pv)| &vals[p] * mv - &vals[m] * pv)
                    .collect();
                w = primitive_vector(&w);
                if w.iter().all(|x| x.is_zero()) {
                    continue;
                }
                next.push(Ray {
                    vec: w,
                    tight: (rays[p].tight & rays[m].tight) | bit,
                });
            }
        }
        rays = next;
    }

    Ok(ConeDD {
        dim,
        lineality,
        rays,
        n_constraints: constraints.len(),
    })
}

/// Combinatorial adjacency: no third extreme ray is tight on every
/// constraint that both of these are tight on.
fn adjacent(rays: &[Ray], i: usize, j: usize) -> bool {
    let common = rays[i].tight & rays[j].tight;
    rays.iter().enumerate().all(|(k, r)| {
        k == i || k == j || (r.tight & common) != common
    })
}

impl ConeDD {
    /// Rank of the cone: dim(lineality) + rank of the ray matrix.
    pub fn cone_dim(&self) -> usize {
        if self.rays.is_empty() && self.lineality.is_empty() {
            return 0;
        }
        let mut rows: Vec<Vec<Q>> = self.lineality.clone();
        rows.extend(self.rays.iter().map(|r| r.vec.clone()));
        exact::rank(&QMat::from_rows(rows))
    }

    /// Does constraint `i` support a facet of the cone?
    pub fn supports_facet(&self, i: usize) -> bool {
        let bit = 1u64 << i;
        let mut rows: Vec<Vec<Q>> = self.lineality.clone();
        rows.extend(
            self.rays
                .iter()
                .filter(|r| r.tight & bit != 0)
                .map(|r| r.vec.clone()),
        );
        if rows.is_empty() {
            return false;
        }
        exact::rank(&QMat::from_rows(rows)) + 1 == self.cone_dim()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q_int;

    fn qv(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q_int(x)).collect()
    }

    #[test]
    fn orthant_rays() {
        // x >= 0, y >= 0, z >= 0: rays are the coordinate axes.
        let cs = vec![qv(&[1, 0, 0]), qv(&[0, 1, 0]), qv(&[0, 0, 1])];
        let dd = double_description(3, &cs).unwrap();
        assert!(dd.lineality.is_empty());
        assert_eq!(dd.rays.len(), 3);
        assert_eq!(dd.cone_dim(), 3);
        for i in 0..3 {
            assert!(dd.supports_facet(i));
        }
    }

    #[test]
    fn single_halfspace_keeps_lineality() {
        let cs = vec![qv(&[1, 0, 0])];
        let dd = double_description(3, &cs).unwrap();
        assert_eq!(dd.lineality.len(), 2);
        assert_eq!(dd.rays.len(), 1);
        assert!(dd.supports_facet(0));
    }

    #[test]
    fn square_cone_over_four_constraints() {
        // x >= ±z, y >= ±z: cone over a square, 4 extreme rays.
        let cs = vec![
            qv(&[1, 0, -1]),
            qv(&[1, 0, 1]),
            qv(&[0, 1, -1]),
            qv(&[0, 1, 1]),
        ];
        let dd = double_description(3, &cs).unwrap();
        assert!(dd.lineality.is_empty());
        assert_eq!(dd.rays.len(), 4);
        assert!((0..4).all(|i| dd.supports_facet(i)));
    }

    #[test]
    fn redundant_constraint_is_not_a_facet() {
        // x >= 0, y >= 0, x + y >= 0 (redundant in the plane).
        let cs = vec![qv(&[1, 0]), qv(&[0, 1]), qv(&[1, 1])];
        let dd = double_description(2, &cs).unwrap();
        assert_eq!(dd.rays.len(), 2);
        assert!(dd.supports_facet(0));
        assert!(dd.supports_facet(1));
        assert!(!dd.supports_facet(2));
    }

    #[test]
    fn simplex_cone_in_dim_6() {
        // Six generic constraints in R^6 whose cone is simplicial.
        let mut cs = Vec::new();
        for i in 0..6usize {
            let mut v = vec![0i64; 6];
            v[i] = 1;
            if i > 0 {
                v[0] -= 1;
            }
            cs.push(qv(&v));
        }
        let dd = double_description(6, &cs).unwrap();
        assert_eq!(dd.cone_dim(), 6);
        assert_eq!(dd.rays.len(), 6);
    }
}
