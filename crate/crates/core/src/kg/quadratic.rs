use crate::error::{Error, Result};
use crate::nonlocal::{embed_radial, riesz_apply, CartesianGrid, RadialProfile, VectorField2D};
use crate::params::{density_excess_of_m, h_of_m, DerivedConstants, PhysicalParams};
use crate::radial::{RadialGrid, RadialOperators};

/// Above this size the non-local term is not considered zero.
const ZERO_LEVEL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct NonlocalComparison {
    pub local: VectorField2D,
    pub nonlocal: VectorField2D,
    /// `‖local - nonlocal‖∞ / ‖local‖∞`, zero when both vanish.
    pub rel_diff: f64,
}

/// Local term `-m0 η` against the non-local `-m0 ∇Δ⁻¹∇·η`.
pub fn nonlocal_comparison(eta: &VectorField2D, m0: f64) -> Result<NonlocalComparison> {
    let local = eta.clone().scaled(-m0);
    let nonlocal = riesz_apply(eta).scaled(-m0);
    let scale = local.sup_norm();
    let rel_diff = if scale > 0.0 {
        local.distance(&nonlocal) / scale
    } else if nonlocal.sup_norm() > ZERO_LEVEL {
        return Err(Error::Data(format!(
            "local term vanishes but the non-local term has size {:e}",
            nonlocal.sup_norm()
        )));
    } else {
        0.0
    };
    Ok(NonlocalComparison {
        local,
        nonlocal,
        rel_diff,
    })
}

/// The quadratic coupling `(m - h(m)) v` of the rescaled system, embedded
/// as a radial vector field and compared with its Riesz projection.
/// `m` and `v` are sampled on the same radii, starting at `r = 0`.
pub fn kg_nonlocal_term(
    m: &RadialProfile,
    v: &RadialProfile,
    params: &PhysicalParams,
    consts: &DerivedConstants,
    grid: &CartesianGrid,
) -> Result<NonlocalComparison> {
    if m.radii != v.radii {
        return Err(Error::Data("m and v must share their radii".into()));
    }
    let product = m
        .values
        .iter()
        .zip(&v.values)
        .map(|(&mj, &vj)| Ok(density_excess_of_m(mj, params.gamma)? * vj))
        .collect::<Result<Vec<f64>>>()?;
    let eta = embed_radial(&RadialProfile::new(m.radii.clone(), product)?, grid)?;
    nonlocal_comparison(&eta, consts.m0)
}

/// Right-hand sides of `(∂ₜ² - Δ + m0) m = rhs_m` and
/// `(∂ₜ² - Δ + m0) v = rhs_v` on the radial grid, with the non-local
/// term in its local radial form. The time derivatives `mt`, `vt` are
/// supplied by the caller; time is the rescaled `τ`.
pub fn kg_quadratic_rhs(
    m: &[f64],
    v: &[f64],
    mt: &[f64],
    vt: &[f64],
    grid: &RadialGrid,
    params: &PhysicalParams,
    consts: &DerivedConstants,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let cells = grid.num_cells();
    if [m, v, mt, vt].iter().any(|f| f.len() != cells) {
        return Err(Error::Data(format!("profiles must have {cells} entries")));
    }
    let gamma = params.gamma;
    let a = params.half_gamma_minus_one();
    let m0 = consts.m0;
    let h: Vec<f64> = m
        .iter()
        .enumerate()
        .map(|(index, &mj)| {
            h_of_m(mj, gamma).map_err(|e| match e {
                Error::Vacuum { detail, .. } => Error::Vacuum { index, detail },
                other => other,
            })
        })
        .collect::<Result<_>>()?;
    let ops = RadialOperators::new(grid);
    let dm = ops.gradient(m);
    let dmt = ops.gradient(mt);
    let dv = ops.odd_gradient(v);
    let dvt = ops.odd_gradient(vt);
    let div_v = ops.divergence(v);
    let div_vt = ops.divergence(vt);

    // odd: v ∂v + a m ∂m; even: v ∂m + a m div v
    let odd: Vec<f64> = (0..cells).map(|j| v[j] * dv[j] + a * m[j] * dm[j]).collect();
    let even: Vec<f64> = (0..cells).map(|j| v[j] * dm[j] + a * m[j] * div_v[j]).collect();
    let div_odd = ops.divergence(&odd);
    let grad_even = ops.gradient(&even);

    let mut rhs_m = Vec::with_capacity(cells);
    let mut rhs_v = Vec::with_capacity(cells);
    for j in 0..cells {
        let even_t = vt[j] * dm[j] + v[j] * dmt[j] + a * (mt[j] * div_v[j] + m[j] * div_vt[j]);
        let odd_t = vt[j] * dv[j] + v[j] * dvt[j] + a * (mt[j] * dm[j] + m[j] * dmt[j]);
        rhs_m.push(div_odd[j] - even_t + m0 * h[j]);
        rhs_v.push(grad_even[j] - odd_t - m0 * (m[j] - h[j]) * v[j]);
    }
    Ok((rhs_m, rhs_v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive_constants;

    #[test]
    fn zero_inputs_give_zero() {
        let grid = RadialGrid::new(64, 10.0).unwrap();
        let params = PhysicalParams::paper(3.0, 1.0);
        let consts = derive_constants(&params).unwrap();
        let z = vec![0.0; 64];
        let (a, b) = kg_quadratic_rhs(&z, &z, &z, &z, &grid, &params, &consts).unwrap();
        assert!(a.iter().chain(&b).all(|x| *x == 0.0));

        let cart = CartesianGrid::new(32, 20.0).unwrap();
        let radii: Vec<f64> = (0..200).map(|k| k as f64 * 0.1).collect();
        let zero = RadialProfile::new(radii.clone(), vec![0.0; 200]).unwrap();
        let cmp = kg_nonlocal_term(&zero, &zero, &params, &consts, &cart).unwrap();
        assert_eq!(cmp.rel_diff, 0.0);
    }
}
