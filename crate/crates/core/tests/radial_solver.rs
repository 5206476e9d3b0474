mod common;

use common::{diff, sup_diff, weighted_l2, Manufactured};
use ep2d::params::{derive_constants, from_normalized, PhysicalParams};
use ep2d::radial::init::InitialProfile;
use ep2d::radial::*;
use ep2d::Error;
use proptest::prelude::*;

fn paper() -> PhysicalParams {
    PhysicalParams::paper(3.0, 1.0)
}

fn config(cells: usize, r_max: f64, t_end: f64, mode: FieldMode) -> SolverConfig {
    let mut c = SolverConfig::new(paper(), RadialGrid::new(cells, r_max).unwrap(), t_end);
    c.field_mode = mode;
    c
}

#[test]
fn equilibrium_is_a_bit_exact_fixed_point() {
    for mode in [FieldMode::Dynamic, FieldMode::Gauss, FieldMode::Off] {
        let mut c = config(128, 20.0, 1.0, mode);
        c.filter = None;
        let solver = PrimalSolver::new(&c).unwrap();
        let start = PrimalState::equilibrium(&c.grid, 1.0);
        let mut s = start.clone();
        for _ in 0..50 {
            s = solver.step(&s, 0.05).unwrap();
        }
        assert_eq!((s.n.clone(), s.u.clone(), s.e.clone()), (start.n, start.u, start.e));

        if mode != FieldMode::Gauss {
            let mut c = c.clone();
            c.formulation = Formulation::Normalized;
            let solver = NormalizedSolver::new(&c).unwrap();
            let zero = NormalizedState::zeros(&c.grid);
            let mut s = zero.clone();
            for _ in 0..50 {
                s = solver.step(&s, 0.05).unwrap();
            }
            assert_eq!((s.m, s.v, s.g), (zero.m, zero.v, zero.g));
        }
    }
}

#[test]
fn zero_amplitude_run_keeps_diagnostics_constant() {
    let c = config(128, 20.0, 3.0, FieldMode::Gauss);
    let result = run(&c, PrimalState::equilibrium(&c.grid, 1.0)).unwrap();
    assert_eq!(result.status, RunStatus::Completed);
    let first = result.diagnostics[0];
    for d in &result.diagnostics {
        assert_eq!(
            (d.excess_mass, d.energy, d.sup_density_pert, d.sup_velocity, d.sup_e),
            (0.0, 0.0, 0.0, 0.0, 0.0)
        );
        assert_eq!(d.max_grad_u, first.max_grad_u);
    }
    assert_eq!(result.diagnostics.last().unwrap().time, 3.0);
}

#[test]
fn gauss_field_of_a_neutral_top_hat() {
    let grid = RadialGrid::new(400, 10.0).unwrap();
    let ops = RadialOperators::new(&grid);
    let params = paper();
    let (c, inner, ring) = (0.01, (0.0, 2.0), (3.0, 4.0));
    let inside = |r: f64, (a, b): (f64, f64)| r >= a && r < b;
    let centers = grid.centers();
    let indicator = |band| -> Vec<f64> {
        centers.iter().map(|&r| if inside(r, band) { 1.0 } else { 0.0 }).collect()
    };
    let weight = ops.integrate(&indicator(inner)) / ops.integrate(&indicator(ring));
    let n: Vec<f64> = centers
        .iter()
        .map(|&r| {
            1.0 + if inside(r, inner) {
                c
            } else if inside(r, ring) {
                -c * weight
            } else {
                0.0
            }
        })
        .collect();
    let e = gauss_field(&n, &grid, &params).unwrap();
    let dr = grid.dr();
    for (j, &r) in centers.iter().enumerate() {
        if r < inner.1 - 3.0 * dr {
            let exact = params.kappa * c * r / 2.0;
            assert!((e[j] - exact).abs() < 1e-12, "r = {r}: {} vs {exact}", e[j]);
        }
        if r > ring.1 + 3.0 * dr {
            assert!(e[j].abs() <= 1e-8, "r = {r}: {}", e[j]);
        }
    }
    let flat = vec![1.0; 400];
    assert!(gauss_field(&flat, &grid, &params).unwrap().iter().all(|&x| x == 0.0));

    let charged: Vec<f64> = centers.iter().map(|&r| if r < 2.0 { 1.01 } else { 1.0 }).collect();
    assert!(matches!(
        gauss_field(&charged, &grid, &params),
        Err(Error::Neutrality { .. })
    ));
}

#[test]
fn rhs_matches_the_linearized_system() {
    let eps = 1e-6;
    let grid = RadialGrid::new(256, 8.0).unwrap();
    let params = paper();
    let c0sq = params.sound_speed(1.0).powi(2);
    let state = Manufactured::paper(eps).state(&grid);
    let mut c = config(256, 8.0, 1.0, FieldMode::Dynamic);
    c.filter = None;
    let rates = primal_rhs(&state, &c).unwrap();
    let mut lin_n = Vec::new();
    let mut lin_u = Vec::new();
    for (j, r) in grid.centers().into_iter().enumerate() {
        let f = (-r * r).exp();
        let q = eps * r * f;
        let dq = eps * (1.0 - 2.0 * r * r) * f;
        let dn = eps * (16.0 * r - 8.0 * r.powi(3)) * f;
        lin_n.push(-(dq + q / r));
        lin_u.push(-c0sq * dn + state.e[j]);
    }
    let err_n = weighted_l2(&grid, &diff(&rates.n, &lin_n)) / weighted_l2(&grid, &lin_n);
    let err_u = weighted_l2(&grid, &diff(&rates.u, &lin_u)) / weighted_l2(&grid, &lin_u);
    assert!(err_n < 1e-4 && err_u < 1e-4, "{err_n:e} {err_u:e}");
}

#[test]
fn rhs_converges_at_fourth_order() {
    let m = Manufactured::paper(0.1);
    let mut errors = Vec::new();
    for cells in [64, 128, 256] {
        let mut c = config(cells, 8.0, 1.0, FieldMode::Dynamic);
        c.filter = None;
        let state = m.state(&c.grid);
        let rates = primal_rhs(&state, &c).unwrap();
        let exact = m.rates(&c.grid);
        errors.push([
            weighted_l2(&c.grid, &diff(&rates.n, &exact.n)),
            weighted_l2(&c.grid, &diff(&rates.u, &exact.u)),
            weighted_l2(&c.grid, &diff(&rates.e, &exact.e)),
        ]);
    }
    for k in 0..3 {
        for w in errors.windows(2) {
            let ratio = w[0][k] / w[1][k];
            assert!(ratio >= 12.0, "component {k}: ratio {ratio} from {:?}", errors);
        }
    }
}

#[test]
fn dynamic_field_stays_on_the_gauss_law() {
    let c = config(512, 40.0, 5.0, FieldMode::Dynamic);
    let profile = InitialProfile {
        velocity_amplitude: 0.02,
        ..InitialProfile::gaussian(0.05, 2.0)
    };
    let params = paper();
    let mut state = profile
        .resolve(&c.grid, &params)
        .unwrap()
        .primal_state(&c.grid, &params, FieldMode::Dynamic)
        .unwrap();
    let solver = PrimalSolver::new(&c).unwrap();
    while state.time < 5.0 {
        let dt = solver.cfl_dt(&state).min(5.0 - state.time);
        state = solver.step(&state, dt).unwrap();
        let rebuilt = gauss_field(&state.n, &c.grid, &params).unwrap();
        let scale = state.e.iter().fold(1e-12f64, |a, v| a.max(v.abs()));
        let gap = sup_diff(&state.e, &rebuilt);
        assert!(gap <= 1e-6 * scale, "t = {}: {gap:e} vs {scale:e}", state.time);
    }
}

#[test]
fn excess_mass_is_conserved_per_step() {
    let c = config(512, 60.0, 1.0, FieldMode::Gauss);
    let params = paper();
    let profile = InitialProfile {
        velocity_amplitude: 0.05,
        neutralize: false,
        ..InitialProfile::gaussian(0.1, 2.0)
    };
    let resolved = profile.resolve(&c.grid, &params).unwrap();
    let mut state = resolved.primal_state(&c.grid, &params, FieldMode::Off).unwrap();
    let mut c = c;
    c.field_mode = FieldMode::Off;
    let solver = PrimalSolver::new(&c).unwrap();
    let ops = RadialOperators::new(&c.grid);
    let excess = |s: &PrimalState| s.n.iter().map(|n| n - 1.0).collect::<Vec<_>>();
    let scale = ops.integrate(&excess(&state).iter().map(|x| x.abs()).collect::<Vec<_>>());
    let mut mass = ops.integrate(&excess(&state));
    for _ in 0..200 {
        state = solver.step(&state, solver.cfl_dt(&state)).unwrap();
        let next = ops.integrate(&excess(&state));
        assert!((next - mass).abs() <= 1e-12 * scale, "{:e}", (next - mass).abs() / scale);
        mass = next;
    }
}

#[test]
fn energy_drift_is_small_on_a_smooth_run() {
    let c = config(2048, 200.0, 50.0, FieldMode::Gauss);
    let params = paper();
    let profile = InitialProfile {
        velocity_amplitude: 0.01,
        ..InitialProfile::gaussian(0.02, 2.0)
    };
    let state = profile
        .resolve(&c.grid, &params)
        .unwrap()
        .primal_state(&c.grid, &params, FieldMode::Gauss)
        .unwrap();
    let result = run(&c, state).unwrap();
    assert_eq!(result.status, RunStatus::Completed);
    let e0 = result.diagnostics[0].energy;
    let drift = result
        .diagnostics
        .iter()
        .map(|d| (d.energy - e0).abs() / e0)
        .fold(0.0, f64::max);
    assert!(drift <= 1e-5, "{drift:e}");
}

#[test]
fn odd_profiles_stay_regular_at_the_origin() {
    let c = config(512, 40.0, 10.0, FieldMode::Dynamic);
    let params = paper();
    let profile = InitialProfile {
        velocity_amplitude: 0.05,
        ..InitialProfile::gaussian(0.05, 2.0)
    };
    let state = profile
        .resolve(&c.grid, &params)
        .unwrap()
        .primal_state(&c.grid, &params, FieldMode::Dynamic)
        .unwrap();
    let result = run(&c, state).unwrap();
    let s = &result.final_state;
    let dr = c.grid.dr();
    for f in [&s.u, &s.e] {
        // cubic extrapolation from the first four centers to r = 0
        let at_origin = (35.0 * f[0] - 35.0 * f[1] + 21.0 * f[2] - 5.0 * f[3]) / 16.0;
        let scale = f.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        assert!(at_origin.abs() <= dr * dr * scale, "{at_origin:e} vs {scale:e}");
    }
}

#[test]
fn shock_monitor_reads_the_slope() {
    for cells in [128, 256] {
        let c = config(cells, 10.0, 1.0, FieldMode::Off);
        let mut s = PrimalState::equilibrium(&c.grid, 1.0);
        let centers = c.grid.centers();
        for (j, &r) in centers.iter().enumerate() {
            s.u[j] = 0.3 * r * (-r * r / 4.0).exp();
        }
        let exact = centers
            .iter()
            .map(|&r| (0.3 * (1.0 - r * r / 2.0) * (-r * r / 4.0).exp()).abs())
            .fold(0.0, f64::max);
        let m = shock_monitor(&s, &c).unwrap();
        assert!((m.max_grad_u - exact).abs() <= 5.0 * c.grid.dr().powi(4), "{cells}");
        assert_eq!(m.max_grad_n, 0.0);
    }
}

#[test]
fn simple_wave_steepens_monotonically_until_the_trip() {
    let mut c = config(2048, 200.0, 60.0, FieldMode::Off);
    c.diagnostics_stride = 1;
    let c0 = paper().sound_speed(1.0);
    let mut s = PrimalState::equilibrium(&c.grid, 1.0);
    for (j, r) in c.grid.centers().into_iter().enumerate() {
        let b = 0.1 * (-((r - 40.0) / 4.0).powi(2)).exp();
        s.n[j] = 1.0 + b;
        s.u[j] = c0 * b;
    }
    let result = run(&c, s).unwrap();
    assert_eq!(result.status, RunStatus::BlowupDetected);
    assert!(result.final_state.time < c.t_end);
    let history: Vec<f64> = result.grad_u_history.iter().map(|h| h.1).collect();
    // while the front spans many cells the sampled maximum must not dip
    let resolved: Vec<f64> = history
        .iter()
        .copied()
        .take_while(|g| *g < 2.0 * history[0])
        .collect();
    assert!(resolved.len() > 100);
    let worst = resolved
        .windows(2)
        .map(|w| 1.0 - w[1] / w[0])
        .fold(0.0f64, f64::max);
    assert!(worst <= 1e-3, "{worst:e}");
    assert!(*history.last().unwrap() > 5.0 * history[0]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn field_law_coefficient_matches_the_fluid_form(
        amp in -0.3f64..0.3,
        vel in -0.3f64..0.3,
        width in 1.0f64..4.0,
        gamma in 1.5f64..4.0,
    ) {
        let params = PhysicalParams::paper(gamma, 1.0);
        let consts = derive_constants(&params).unwrap();
        let mut c = SolverConfig::new(params, RadialGrid::new(128, 20.0).unwrap(), 1.0);
        c.formulation = Formulation::Normalized;
        c.field_mode = FieldMode::Dynamic;
        let centers = c.grid.centers();
        let state = NormalizedState {
            time: 0.0,
            m: centers.iter().map(|r| amp * (-(r / width).powi(2)).exp()).collect(),
            v: centers.iter().map(|r| vel * r * (-(r / width).powi(2)).exp()).collect(),
            g: vec![0.0; 128],
        };
        let rates = normalized_rhs(&state, &c).unwrap();
        let (n, u) = from_normalized(&state.m, &state.v, &params, &consts).unwrap();
        for j in 0..128 {
            let primal_rate = -params.kappa * n[j] * u[j];
            prop_assert!((rates.g[j] * consts.c0 - primal_rate).abs() <= 1e-10);
        }
    }

    #[test]
    fn equilibrium_rates_vanish_for_any_constants(
        gamma in 1.1f64..5.0,
        n0 in 0.1f64..10.0,
        cells in 64usize..300,
    ) {
        let params = PhysicalParams::paper(gamma, n0);
        let c = SolverConfig::new(params, RadialGrid::new(cells, 10.0).unwrap(), 1.0);
        let rates = primal_rhs(&PrimalState::equilibrium(&c.grid, n0), &c).unwrap();
        prop_assert!(rates.n.iter().chain(&rates.u).chain(&rates.e).all(|&x| x == 0.0));
    }
}

#[test]
fn small_amplitude_rescaled_flow_is_klein_gordon() {
    let eps = 1e-8;
    let params = paper();
    let consts = derive_constants(&params).unwrap();
    let mut c = SolverConfig::new(params, RadialGrid::new(256, 8.0).unwrap(), 1.0);
    c.formulation = Formulation::Normalized;
    c.field_mode = FieldMode::Dynamic;
    c.filter = None;
    let centers = c.grid.centers();
    let m: Vec<f64> = centers
        .iter()
        .map(|r| eps * (4.0 * r * r - 4.0) * (-r * r).exp())
        .collect();
    let g = centers
        .iter()
        .map(|r| -2.0 * eps * params.kappa * params.n0 * r * (-r * r).exp())
        .collect();
    let state = NormalizedState {
        time: 0.0,
        g,
        v: vec![0.0; 256],
        m,
    };
    let first = normalized_rhs(&state, &c).unwrap();
    let delta = 1e-3;
    let nudged = NormalizedState {
        time: 0.0,
        m: state.m.iter().zip(&first.m).map(|(a, b)| a + delta * b).collect(),
        v: state.v.iter().zip(&first.v).map(|(a, b)| a + delta * b).collect(),
        g: state.g.iter().zip(&first.g).map(|(a, b)| a + delta * b).collect(),
    };
    let second = normalized_rhs(&nudged, &c).unwrap();
    let m_tt: Vec<f64> = second.m.iter().zip(&first.m).map(|(a, b)| (a - b) / delta).collect();
    let kg: Vec<f64> = centers
        .iter()
        .zip(&state.m)
        .map(|(r, m)| {
            let lap = eps * (32.0 - 64.0 * r * r + 16.0 * r.powi(4)) * (-r * r).exp();
            lap - consts.m0 * m
        })
        .collect();
    let rel = weighted_l2(&c.grid, &diff(&m_tt, &kg)) / weighted_l2(&c.grid, &kg);
    assert!(rel < 1e-4, "{rel:e}");
}
