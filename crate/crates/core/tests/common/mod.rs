//! Closed-form fluid state with its exact time derivatives, used as an
//! independent oracle for the discrete right-hand side.
#![allow(dead_code)]

use ep2d::params::PhysicalParams;
use ep2d::radial::{PrimalState, RadialGrid, RadialOperators};

/// `n = n0 (1 + ε q)` with `q = Δ exp(-r²) = (4r² - 4) exp(-r²)` so the
/// data carry no net charge, `u = ε r exp(-r²)`, and the Gauss field
/// `E = κ n0 ε ∂ᵣ exp(-r²)`.
pub struct Manufactured {
    pub eps: f64,
    pub params: PhysicalParams,
}

pub struct ExactRates {
    pub n: Vec<f64>,
    pub u: Vec<f64>,
    pub e: Vec<f64>,
}

impl Manufactured {
    pub fn paper(eps: f64) -> Self {
        Manufactured {
            eps,
            params: PhysicalParams::paper(3.0, 1.0),
        }
    }

    fn pieces(&self, r: f64) -> (f64, f64, f64, f64, f64) {
        let (eps, n0, kappa) = (self.eps, self.params.n0, self.params.kappa);
        let f = (-r * r).exp();
        let q = (4.0 * r * r - 4.0) * f;
        let dq = (16.0 * r - 8.0 * r.powi(3)) * f;
        let n = n0 * (1.0 + eps * q);
        let dn = n0 * eps * dq;
        let u = eps * r * f;
        let du = eps * (1.0 - 2.0 * r * r) * f;
        let e = kappa * n0 * eps * (-2.0 * r * f);
        (n, dn, u, du, e)
    }

    pub fn state(&self, grid: &RadialGrid) -> PrimalState {
        let centers = grid.centers();
        let mut s = PrimalState::equilibrium(grid, self.params.n0);
        for (j, &r) in centers.iter().enumerate() {
            let (n, _, u, _, e) = self.pieces(r);
            s.n[j] = n;
            s.u[j] = u;
            s.e[j] = e;
        }
        s
    }

    /// Exact `(∂ₜn, ∂ₜu, ∂ₜE)` with the dynamic field law.
    pub fn rates(&self, grid: &RadialGrid) -> ExactRates {
        let p = &self.params;
        let pressure = p.entropy_const_a * p.gamma / p.mass_me;
        let force = p.charge_e / p.mass_me;
        let mut out = ExactRates {
            n: vec![],
            u: vec![],
            e: vec![],
        };
        for r in grid.centers() {
            let (n, dn, u, du, e) = self.pieces(r);
            let flux_r = dn * u + n * du;
            out.n.push(-(flux_r + n * u / r));
            out.u.push(-u * du - pressure * n.powf(p.gamma - 2.0) * dn + force * e);
            out.e.push(-p.kappa * n * u);
        }
        out
    }
}

/// `sqrt(Σ r̃ Δr d²)`, the r-weighted L2 norm of the discrete quadrature.
pub fn weighted_l2(grid: &RadialGrid, d: &[f64]) -> f64 {
    let ops = RadialOperators::new(grid);
    let sq: Vec<f64> = d.iter().map(|x| x * x).collect();
    ops.integrate(&sq).sqrt()
}

pub fn sup_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn diff(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}
