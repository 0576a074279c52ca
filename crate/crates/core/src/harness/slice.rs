//! CSV emission of Busemann-Selberg values over the diagonal two-plane
//! diag(e^s, e^t, e^(-s-t)). Contouring is left to plotting tools; the
//! emitted grid is bit-exact and diffable.

use std::io::Write;

use crate::busemann::BusemannSpec;
use crate::mat::SymMatrix;
use crate::scalar::Scalar;
use crate::{Error, Result};

#[derive(Clone, Debug, serde::Serialize, serde::Deserialize)]
pub struct SliceConfig {
    pub s_min: f64,
    pub s_max: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub resolution: usize,
}

impl Default for SliceConfig {
    fn default() -> Self {
        SliceConfig {
            s_min: -3.0,
            s_max: 3.0,
            t_min: -3.0,
            t_max: 3.0,
            resolution: 101,
        }
    }
}

impl SliceConfig {
    fn validate(&self) -> Result<()> {
        if self.resolution < 2 || !(self.s_min < self.s_max) || !(self.t_min < self.t_max) {
            return Err(Error::Degenerate("slice grid configuration".into()));
        }
        Ok(())
    }
}

/// Grid point (s, t) of the diagonal plane as a unit-determinant point.
pub fn diagonal_point(s: f64, t: f64) -> SymMatrix {
    SymMatrix::diag(&[
        Scalar::float(s.exp()),
        Scalar::float(t.exp()),
        Scalar::float((-s - t).exp()),
    ])
}

/// Evaluate the spec over the grid; rows of (s, t, value).
pub fn slice_values(spec: &BusemannSpec, cfg: &SliceConfig) -> Result<Vec<(f64, f64, f64)>> {
    cfg.validate()?;
    if spec.dim() != 3 {
        return Err(Error::DimensionMismatch(
            "the diagonal-plane slice is three-dimensional".into(),
        ));
    }
    let r = cfg.resolution;
    let mut out = Vec::with_capacity(r * r);
    for i in 0..r {
        let s = cfg.s_min + (cfg.s_max - cfg.s_min) * i as f64 / (r - 1) as f64;
        for j in 0..r {
            let t = cfg.t_min + (cfg.t_max - cfg.t_min) * j as f64 / (r - 1) as f64;
            let v = spec.eval_sym(&diagonal_point(s, t))?.to_f64();
            out.push((s, t, v));
        }
    }
    Ok(out)
}

/// Write the CSV with the requested contour levels recorded in the header.
pub fn write_slice_csv(
    spec: &BusemannSpec,
    cfg: &SliceConfig,
    levels: &[f64],
    out: &mut impl Write,
) -> Result<()> {
    if levels.iter().any(|&l| !(l > 0.0)) {
        return Err(Error::InvalidSpec("levels must be positive".into()));
    }
    let rows = slice_values(spec, cfg)?;
    let mut write = || -> std::io::Result<()> {
        writeln!(
            out,
            "# levels: {}",
            levels
                .iter()
                .map(|l| l.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        )?;
        writeln!(out, "s,t,value")?;
        for (s, t, v) in &rows {
            writeln!(out, "{s},{t},{v}")?;
        }
        Ok(())
    };
    write().map_err(|e| Error::Parse(format!("write failed: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::satake::SatakePoint;
    use crate::space::SpacePoint;

    fn e1_spec() -> BusemannSpec {
        let alpha =
            SatakePoint::from_vector(&[Scalar::one(), Scalar::zero(), Scalar::zero()]).unwrap();
        BusemannSpec::type0(alpha, SpacePoint::identity(3)).unwrap()
    }

    #[test]
    fn value_at_origin_is_one() {
        let spec = e1_spec();
        let cfg = SliceConfig {
            resolution: 3,
            ..SliceConfig::default()
        };
        let rows = slice_values(&spec, &cfg).unwrap();
        let center = rows
            .iter()
            .find(|(s, t, _)| s.abs() < 1e-12 && t.abs() < 1e-12)
            .unwrap();
        assert!((center.2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn value_decays_toward_the_base_vertex() {
        // As s grows at t = 0 the grid point diag(e^s, 1, e^-s) approaches
        // the rank-one class at e1 projectively, and the value e^-s tends
        // to zero: eventual membership in every sublevel set. In the
        // opposite direction (another boundary vertex) it blows up.
        let spec = e1_spec();
        let v1 = spec.eval_sym(&diagonal_point(1.0, 0.0)).unwrap().to_f64();
        let v2 = spec.eval_sym(&diagonal_point(3.0, 0.0)).unwrap().to_f64();
        let v3 = spec.eval_sym(&diagonal_point(6.0, 0.0)).unwrap().to_f64();
        assert!(v1 > v2 && v2 > v3);
        assert!(v3 < 5e-3);
        let away = spec.eval_sym(&diagonal_point(-6.0, 0.0)).unwrap().to_f64();
        assert!(away > 100.0);
    }

    #[test]
    fn csv_shape_and_header() {
        let spec = e1_spec();
        let cfg = SliceConfig {
            resolution: 4,
            ..SliceConfig::default()
        };
        let mut buf = Vec::new();
        write_slice_csv(&spec, &cfg, &[0.5, 1.0], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# levels: 0.5 1"));
        assert_eq!(lines[1], "s,t,value");
        assert_eq!(lines.len(), 2 + 16);
        assert!(write_slice_csv(&spec, &cfg, &[-1.0], &mut Vec::new()).is_err());
    }

    #[test]
    fn degenerate_grid_rejected() {
        let spec = e1_spec();
        let cfg = SliceConfig {
            resolution: 1,
            ..SliceConfig::default()
        };
        assert!(slice_values(&spec, &cfg).is_err());
    }
}
