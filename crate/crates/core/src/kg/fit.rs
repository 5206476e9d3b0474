use crate::error::{Error, Result};

/// Fewest samples accepted inside a fit window.
pub const MIN_SAMPLES: usize = 8;

/// Power law `sup ≈ amplitude (1 + t)^(-exponent)` fitted in log-log space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    pub amplitude: f64,
    /// RMS of the residuals of `log(sup)`.
    pub residual: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

/// Least-squares slope of `log(sup)` against `log(1 + t)` over the samples
/// with `t` in `window`.
pub fn fit_decay_exponent(times: &[f64], sup_norms: &[f64], window: (f64, f64)) -> Result<DecayFit> {
    if times.len() != sup_norms.len() {
        return Err(Error::Data(format!(
            "{} times but {} norms",
            times.len(),
            sup_norms.len()
        )));
    }
    let (t_min, t_max) = window;
    if !(t_min >= 1.0 && t_max > t_min && t_max.is_finite()) {
        return Err(Error::Data(format!(
            "fit window [{t_min}, {t_max}] must satisfy 1 <= t_min < t_max"
        )));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Data("sample times must be increasing".into()));
    }
    if let Some(k) = sup_norms.iter().position(|s| !(*s > 0.0 && s.is_finite())) {
        return Err(Error::Data(format!(
            "sup norm {} at t = {} is not positive",
            sup_norms[k], times[k]
        )));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(sup_norms)
        .filter(|(t, _)| **t >= t_min && **t <= t_max)
        .map(|(t, s)| ((1.0 + t).ln(), s.ln()))
        .unzip();
    if xs.len() < MIN_SAMPLES {
        return Err(Error::Data(format!(
            "fit window [{t_min}, {t_max}] holds {} samples, need {MIN_SAMPLES}",
            xs.len()
        )));
    }
    let count = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / count;
    let my = ys.iter().sum::<f64>() / count;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / count)
        .sqrt();
    Ok(DecayFit {
        exponent: -slope,
        amplitude: intercept.exp(),
        residual,
        window,
        samples: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let times: Vec<f64> = (0..40).map(|k| 1.0 + 5.0 * k as f64).collect();
        let norms: Vec<f64> = times.iter().map(|t| 3.0 / (1.0 + t)).collect();
        let fit = fit_decay_exponent(&times, &norms, (1.0, 200.0)).unwrap();
        assert!((fit.exponent - 1.0).abs() < 1e-12);
        assert!((fit.amplitude - 3.0).abs() < 1e-10);
        assert!(fit.residual < 1e-12);
    }

    #[test]
    fn rejects_short_windows_and_bad_norms() {
        let times: Vec<f64> = (1..20).map(f64::from).collect();
        let norms = vec![1.0; times.len()];
        assert!(fit_decay_exponent(&times, &norms, (1.0, 5.0)).is_err());
        assert!(fit_decay_exponent(&times, &norms, (0.5, 15.0)).is_err());
        let mut bad = norms.clone();
        bad[3] = 0.0;
        assert!(fit_decay_exponent(&times, &bad, (1.0, 15.0)).is_err());
    }
}
