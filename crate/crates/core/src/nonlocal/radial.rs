use std::collections::BTreeMap;

use super::{CartesianGrid, CubicSpline, ScalarField2D, VectorField2D};
use crate::error::{Error, Result};

/// Relative size of `f(0)` tolerated when embedding a radial vector field.
pub const ORIGIN_TOLERANCE: f64 = 1e-10;
/// Relative size of the last sample below which a profile counts as decayed.
pub const DECAY_TOLERANCE: f64 = 1e-12;

/// Samples `f(r_k)` of a radial function at increasing radii.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    pub radii: Vec<f64>,
    pub values: Vec<f64>,
}

impl RadialProfile {
    pub fn new(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() || radii.len() < 2 {
            return Err(Error::Data(format!(
                "radial profile needs >= 2 matching samples, got {} radii and {} values",
                radii.len(),
                values.len()
            )));
        }
        if radii[0] < 0.0 || radii.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Data(
                "radial profile radii must be non-negative and increasing".into(),
            ));
        }
        Ok(RadialProfile { radii, values })
    }

    /// Uniform samples `f(k dr)` for `k dr <= r_max`, starting at `r = 0`.
    pub fn sample(dr: f64, r_max: f64, f: impl Fn(f64) -> f64) -> Self {
        let count = (r_max / dr).floor() as usize + 1;
        let radii: Vec<f64> = (0..count).map(|k| k as f64 * dr).collect();
        let values = radii.iter().map(|&r| f(r)).collect();
        RadialProfile { radii, values }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(f64, f64) -> f64) -> Self {
        RadialProfile {
            radii: self.radii.clone(),
            values: self
                .radii
                .iter()
                .zip(&self.values)
                .map(|(&r, &v)| f(r, v))
                .collect(),
        }
    }

    fn check_coverage(&self, grid: &CartesianGrid) -> Result<()> {
        let last = *self.values.last().unwrap();
        let r_last = *self.radii.last().unwrap();
        let half_diagonal = grid.box_length() * std::f64::consts::FRAC_1_SQRT_2;
        if r_last < half_diagonal && last.abs() > DECAY_TOLERANCE * self.sup_norm() {
            return Err(Error::Data(format!(
                "radial profile ends at r = {r_last} with |f| = {:e}, neither covering the box nor decayed",
                last.abs()
            )));
        }
        Ok(())
    }

    fn spline(&self) -> Result<CubicSpline> {
        CubicSpline::new(&self.radii, &self.values)
    }
}

/// `η(x) = f(|x|) x/|x|` with natural-cubic-spline interpolation in `r`
/// and `η(0) = 0`. The profile must start at `r = 0` with `f(0) = 0`.
pub fn embed_radial(profile: &RadialProfile, grid: &CartesianGrid) -> Result<VectorField2D> {
    let scale = profile.sup_norm();
    let f0 = profile.values[0];
    if profile.radii[0] != 0.0 || f0.abs() > ORIGIN_TOLERANCE * scale {
        return Err(Error::OriginRegularity {
            value: if profile.radii[0] == 0.0 { f0 } else { f64::NAN },
        });
    }
    profile.check_coverage(grid)?;
    let spline = profile.spline()?;
    Ok(VectorField2D::from_fn(*grid, |x, y| {
        let r = x.hypot(y);
        if r == 0.0 {
            (0.0, 0.0)
        } else {
            let s = spline.eval(r) / r;
            (s * x, s * y)
        }
    }))
}

/// Scalar field `s(x) = f(|x|)`.
pub fn embed_radial_scalar(profile: &RadialProfile, grid: &CartesianGrid) -> Result<ScalarField2D> {
    profile.check_coverage(grid)?;
    let spline = profile.spline()?;
    Ok(ScalarField2D::from_fn(*grid, |x, y| spline.eval(x.hypot(y))))
}

/// Angular average of the radial component of `η` on the exact rings of
/// the grid (`i² + j²` constant), restricted to complete rings
/// `r < L/2`.
///
/// Returns the averaged profile (the origin contributes `0`) and the
/// asymmetry: max over rings of the angular standard deviation, divided by
/// the global sup norm of `η`.
pub fn extract_radial(eta: &VectorField2D) -> (RadialProfile, f64) {
    let grid = eta.grid;
    let n = grid.num_points_per_side();
    let half = (n / 2) as i64;
    let mut rings: BTreeMap<i64, Vec<f64>> = BTreeMap::new();
    for j in 0..n {
        let dj = j as i64 - half;
        for i in 0..n {
            let di = i as i64 - half;
            let key = di * di + dj * dj;
            if key == 0 || key >= half * half {
                continue;
            }
            let idx = j * n + i;
            let r = (key as f64).sqrt();
            let radial = (di as f64 * eta.x_component[idx] + dj as f64 * eta.y_component[idx]) / r;
            rings.entry(key).or_default().push(radial);
        }
    }

    let sup = eta.sup_norm();
    let h = grid.spacing();
    let mut radii = vec![0.0];
    let mut values = vec![0.0];
    let mut asymmetry = 0.0f64;
    for (key, samples) in rings {
        let count = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / count;
        let var = samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / count;
        if sup > 0.0 {
            asymmetry = asymmetry.max(var.sqrt() / sup);
        }
        radii.push((key as f64).sqrt() * h);
        values.push(mean);
    }
    (RadialProfile { radii, values }, asymmetry)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> CartesianGrid {
        CartesianGrid::new(128, 20.0).unwrap()
    }

    fn profile() -> RadialProfile {
        RadialProfile::sample(1e-3, 15.0, |r| r * (-r * r).exp())
    }

    #[test]
    fn embedding_matches_closed_form() {
        let eta = embed_radial(&profile(), &grid()).unwrap();
        let exact = VectorField2D::from_fn(grid(), |x, y| {
            let e = (-(x * x + y * y)).exp();
            (x * e, y * e)
        });
        assert!(eta.distance(&exact) <= 1e-8, "{}", eta.distance(&exact));
    }

    #[test]
    fn zero_profile_embeds_to_zero() {
        let p = RadialProfile::sample(0.1, 15.0, |_| 0.0);
        let eta = embed_radial(&p, &grid()).unwrap();
        assert_eq!(eta.sup_norm(), 0.0);
        let (q, asym) = extract_radial(&eta);
        assert!(q.values.iter().all(|&v| v == 0.0));
        assert_eq!(asym, 0.0);
    }

    #[test]
    fn origin_regularity_is_enforced() {
        let p = RadialProfile::sample(0.01, 15.0, |r| (-r * r).exp());
        assert!(matches!(
            embed_radial(&p, &grid()),
            Err(Error::OriginRegularity { .. })
        ));
        let shifted = RadialProfile::new(vec![0.5, 1.0, 20.0], vec![0.0, 0.0, 0.0]).unwrap();
        assert!(embed_radial(&shifted, &grid()).is_err());
    }

    #[test]
    fn truncated_profile_is_rejected() {
        let p = RadialProfile::sample(0.01, 2.0, |r| r * (-r * r / 4.0).exp());
        assert!(matches!(embed_radial(&p, &grid()), Err(Error::Data(_))));
    }

    #[test]
    fn extraction_roundtrip() {
        let p = profile();
        let eta = embed_radial(&p, &grid()).unwrap();
        let (q, asym) = extract_radial(&eta);
        assert!(asym <= 1e-8, "{asym}");
        for (r, v) in q.radii.iter().zip(&q.values) {
            assert!((v - r * (-r * r).exp()).abs() <= 1e-8);
        }
    }

    #[test]
    fn constant_field_is_asymmetric() {
        let eta = VectorField2D::from_fn(grid(), |_, _| (1.0, 0.0));
        let (_, asym) = extract_radial(&eta);
        assert!(asym > 0.5, "{asym}");
    }
}
