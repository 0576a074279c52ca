//! Deviation inequality for interlaced sequences, with a brute-force
//! corner oracle.
//!
//! For descending a (length n) and b (length n-k) with
//! aᵢ >= bᵢ >= a_{i+k}, the centered sum of squares of a dominates that
//! of b. Checks run in exact rationals.

use num::{BigRational, Zero};

use crate::exact::{q_int, Q};
use crate::{Error, Result};

fn is_descending(xs: &[Q]) -> bool {
    xs.windows(2).all(|w| w[0] >= w[1])
}

/// Centered sum of squares Σ(xᵢ - mean)².
pub fn deviation(xs: &[Q]) -> Q {
    let n = q_int(xs.len() as i64);
    let mean = xs.iter().fold(Q::zero(), |a, b| a + b) / &n;
    xs.iter()
        .map(|x| {
            let d = x - &mean;
            &d * &d
        })
        .fold(Q::zero(), |a, b| a + b)
}

#[derive(Clone, Debug)]
pub struct InterlacingOutcome {
    pub holds: bool,
    pub lhs: Q,
    pub rhs: Q,
}

/// Exact check of the deviation inequality. Errors when the interlacing
/// precondition is violated (including k = 0 or length mismatch).
pub fn interlacing_check(a: &[Q], b: &[Q], k: usize) -> Result<InterlacingOutcome> {
    let n = a.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidSpec(format!("need 1 <= k < n, got k={k}, n={n}")));
    }
    if b.len() != n - k {
        return Err(Error::InvalidSpec(format!(
            "b has length {}, expected {}",
            b.len(),
            n - k
        )));
    }
    if !is_descending(a) || !is_descending(b) {
        return Err(Error::InvalidSpec("sequences must be descending".into()));
    }
    for i in 0..n - k {
        if !(a[i] >= b[i] && b[i] >= a[i + k]) {
            return Err(Error::InvalidSpec(format!(
                "interlacing violated at index {i}"
            )));
        }
    }
    let lhs = deviation(a);
    let rhs = deviation(b);
    Ok(InterlacingOutcome {
        holds: lhs >= rhs,
        lhs,
        rhs,
    })
}

/// Float convenience wrapper; converts through exact rationals.
pub fn interlacing_check_f64(a: &[f64], b: &[f64], k: usize) -> Result<InterlacingOutcome> {
    let conv = |xs: &[f64]| -> Result<Vec<Q>> {
        xs.iter()
            .map(|&x| {
                BigRational::from_float(x)
                    .ok_or_else(|| Error::Parse(format!("non-finite value {x}")))
            })
            .collect()
    };
    interlacing_check(&conv(a)?, &conv(b)?, k)
}

/// Brute-force maximum of the centered deviation over all corner
/// assignments bᵢ ∈ {aᵢ, a_{i+k}} (plus, for k = 1, the n deletion
/// patterns). The convexity of the deviation puts the box maximum at a
/// corner, so this bounds every interlaced b from above.
pub fn interlacing_oracle(a: &[Q], k: usize) -> Result<Q> {
    let n = a.len();
    if n > 12 {
        return Err(Error::BudgetExhausted("corner oracle limited to n <= 12".into()));
    }
    if !(1..=2).contains(&k) || k >= n {
        return Err(Error::InvalidSpec("corner oracle supports k in {1,2}".into()));
    }
    if !is_descending(a) {
        return Err(Error::InvalidSpec("sequence must be descending".into()));
    }
    let m = n - k;
    let mut best: Option<Q> = None;
    for mask in 0u64..(1u64 << m) {
        let b: Vec<Q> = (0..m)
            .map(|i| {
                if mask & (1 << i) != 0 {
                    a[i].clone()
                } else {
                    a[i + k].clone()
                }
            })
            .collect();
        let d = deviation(&b);
        if best.as_ref().is_none_or(|cur| d > *cur) {
            best = Some(d);
        }
    }
    if k == 1 {
        for j in 0..n {
            let b: Vec<Q> = (0..n).filter(|&i| i != j).map(|i| a[i].clone()).collect();
            let d = deviation(&b);
            if best.as_ref().is_none_or(|cur| d > *cur) {
                best = Some(d);
            }
        }
    }
    best.ok_or_else(|| Error::InvalidSpec("empty sequence".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q_ratio;

    #[test]
    fn worked_instance() {
        let a = vec![q_int(2), q_int(1), q_int(0)];
        let b = vec![q_ratio(3, 2), q_ratio(1, 2)];
        let out = interlacing_check(&a, &b, 1).unwrap();
        assert!(out.holds);
        assert_eq!(out.lhs, q_int(2));
        assert_eq!(out.rhs, q_ratio(1, 2));
    }

    #[test]
    fn equality_on_mean_deletion() {
        let a = vec![q_int(1), q_int(0), q_int(-1)];
        let b = vec![q_int(1), q_int(-1)];
        let out = interlacing_check(&a, &b, 1).unwrap();
        assert!(out.holds);
        assert_eq!(out.lhs, q_int(2));
        assert_eq!(out.rhs, q_int(2));
    }

    #[test]
    fn degenerate_k_zero_rejected() {
        let a = vec![q_int(1), q_int(0)];
        assert!(interlacing_check(&a, &a, 0).is_err());
    }

    #[test]
    fn oracle_on_small_sequences() {
        let a = vec![q_int(1), q_int(0), q_int(-1)];
        assert_eq!(interlacing_oracle(&a, 1).unwrap(), q_int(2));
        let a = vec![q_int(3), q_int(2), q_int(1), q_int(0)];
        let m = interlacing_oracle(&a, 1).unwrap();
        assert_eq!(deviation(&a), q_int(5));
        assert!(m <= q_int(5));
    }
}
