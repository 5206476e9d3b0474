//! Physical constants, derived constants and the change of variables
//! between the fluid variables `(n, u, E)` and the rescaled variables
//! `(m, v, g)`.
//!
//! With `a = (γ-1)/2` and `p = 2/(γ-1)`:
//!
//! ```text
//! m = ((n/n0)^a - 1) / a        v = u / c0        τ = c0 t
//! n = n0 (1 + a m)^p            u = c0 v
//! h(m) = m - ((1 + a m)^p - 1)  so that  m - h(m) = n/n0 - 1
//! ```

use crate::error::{Error, Result};

/// Densities below this fraction of `n0` are treated as vacuum.
pub const VACUUM_FRACTION: f64 = 1e-10;

/// Unit conventions for the Poisson coupling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    /// `A = m_e = e = κ = 1`; the rescaled system then carries exactly the
    /// coefficients `1/c0²` and `n0`.
    Paper,
    /// Gaussian-style coupling `κ = 4π e` with `A = m_e = e = 1`.
    SiLike,
}

impl Units {
    pub fn as_str(self) -> &'static str {
        match self {
            Units::Paper => "paper",
            Units::SiLike => "si-like",
        }
    }
}

/// γ-law fluid and Poisson coupling constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub gamma: f64,
    pub entropy_const_a: f64,
    pub charge_e: f64,
    pub mass_me: f64,
    pub n0: f64,
    pub kappa: f64,
}

impl PhysicalParams {
    /// Paper-units preset: `A = m_e = e = κ = 1`.
    pub fn paper(gamma: f64, n0: f64) -> Self {
        PhysicalParams {
            gamma,
            entropy_const_a: 1.0,
            charge_e: 1.0,
            mass_me: 1.0,
            n0,
            kappa: 1.0,
        }
    }

    pub fn with_units(units: Units, gamma: f64, n0: f64) -> Self {
        match units {
            Units::Paper => Self::paper(gamma, n0),
            Units::SiLike => PhysicalParams {
                kappa: 4.0 * std::f64::consts::PI,
                ..Self::paper(gamma, n0)
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name, value: f64, reason| {
            if value.is_finite() && value > 0.0 {
                Ok(())
            } else {
                Err(Error::ParameterDomain {
                    name,
                    value,
                    reason,
                })
            }
        };
        if !(self.gamma.is_finite() && self.gamma > 1.0) {
            return Err(Error::ParameterDomain {
                name: "gamma",
                value: self.gamma,
                reason: "the change of variables requires gamma > 1",
            });
        }
        positive("n0", self.n0, "equilibrium density must be positive")?;
        positive("mass_me", self.mass_me, "mass must be positive")?;
        positive(
            "entropy_const_a",
            self.entropy_const_a,
            "pressure constant must be positive",
        )?;
        if !self.charge_e.is_finite() {
            return Err(Error::ParameterDomain {
                name: "charge_e",
                value: self.charge_e,
                reason: "charge must be finite",
            });
        }
        if !(self.kappa.is_finite() && self.kappa >= 0.0) {
            return Err(Error::ParameterDomain {
                name: "kappa",
                value: self.kappa,
                reason: "Poisson coupling must be non-negative",
            });
        }
        Ok(())
    }

    /// True when the rescaled system applies with its literal coefficients.
    pub fn is_paper_units(&self) -> bool {
        self.entropy_const_a == 1.0
            && self.charge_e == 1.0
            && self.mass_me == 1.0
            && self.kappa == 1.0
    }

    /// Local sound speed `sqrt(A γ n^(γ-1) / m_e)`.
    #[inline]
    pub fn sound_speed(&self, n: f64) -> f64 {
        (self.entropy_const_a * self.gamma * n.powf(self.gamma - 1.0) / self.mass_me).sqrt()
    }

    /// `(γ-1)/2`
    #[inline]
    pub fn half_gamma_minus_one(&self) -> f64 {
        0.5 * (self.gamma - 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// Sound speed at the equilibrium density.
    pub c0: f64,
    /// Klein-Gordon mass parameter `n0 / c0²`.
    pub m0: f64,
}

pub fn derive_constants(params: &PhysicalParams) -> Result<DerivedConstants> {
    params.validate()?;
    let c0 = params.sound_speed(params.n0);
    Ok(DerivedConstants {
        c0,
        m0: params.n0 / (c0 * c0),
    })
}

/// `h(m) = m - [((γ-1)/2 m + 1)^(2/(γ-1)) - 1]`, quadratic at the origin.
pub fn h_of_m(m: f64, gamma: f64) -> Result<f64> {
    let a = 0.5 * (gamma - 1.0);
    let base = a * m;
    check_base(base, 0, m)?;
    let p = 1.0 / a;
    if p == 1.0 {
        return Ok(0.0);
    }
    Ok(m - (p * base.ln_1p()).exp_m1())
}

/// `m - h(m) = n/n0 - 1`, evaluated without cancellation.
pub fn density_excess_of_m(m: f64, gamma: f64) -> Result<f64> {
    let a = 0.5 * (gamma - 1.0);
    let base = a * m;
    check_base(base, 0, m)?;
    Ok((base.ln_1p() / a).exp_m1())
}

fn check_base(base: f64, index: usize, m: f64) -> Result<()> {
    // (1 + a m) > 0 and the implied density stays above the vacuum guard
    if !(base > -1.0) || !m.is_finite() {
        return Err(Error::Vacuum {
            index,
            detail: format!("m = {m} leaves the transform domain"),
        });
    }
    Ok(())
}

/// Pointwise map `(n, u) -> (m, v)`.
pub fn to_normalized(
    n: &[f64],
    u: &[f64],
    params: &PhysicalParams,
    consts: &DerivedConstants,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if n.len() != u.len() {
        return Err(Error::Data(format!(
            "profile lengths differ: {} vs {}",
            n.len(),
            u.len()
        )));
    }
    let a = params.half_gamma_minus_one();
    let mut m = Vec::with_capacity(n.len());
    for (index, &nj) in n.iter().enumerate() {
        let ratio = nj / params.n0;
        if !(ratio >= VACUUM_FRACTION) || !ratio.is_finite() {
            return Err(Error::Vacuum {
                index,
                detail: format!("density {nj} below vacuum threshold"),
            });
        }
        m.push((a * ratio.ln()).exp_m1() / a);
    }
    let v = u.iter().map(|&uj| uj / consts.c0).collect();
    Ok((m, v))
}

/// Pointwise map `(m, v) -> (n, u)`, the exact inverse of [`to_normalized`].
pub fn from_normalized(
    m: &[f64],
    v: &[f64],
    params: &PhysicalParams,
    consts: &DerivedConstants,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if m.len() != v.len() {
        return Err(Error::Data(format!(
            "profile lengths differ: {} vs {}",
            m.len(),
            v.len()
        )));
    }
    let mut n = Vec::with_capacity(m.len());
    for (index, &mj) in m.iter().enumerate() {
        n.push(density_of_m(mj, params).map_err(|e| match e {
            Error::Vacuum { detail, .. } => Error::Vacuum { index, detail },
            other => other,
        })?);
    }
    let u = v.iter().map(|&vj| vj * consts.c0).collect();
    Ok((n, u))
}

/// `n0 (1 + a m)^p` with the vacuum guard applied.
pub fn density_of_m(m: f64, params: &PhysicalParams) -> Result<f64> {
    let a = params.half_gamma_minus_one();
    let base = a * m;
    check_base(base, 0, m)?;
    let ratio = (base.ln_1p() / a).exp();
    if ratio < VACUUM_FRACTION {
        return Err(Error::Vacuum {
            index: 0,
            detail: format!("m = {m} maps to density ratio {ratio:e}"),
        });
    }
    Ok(params.n0 * ratio)
}
