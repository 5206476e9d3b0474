use ep2d::nonlocal::*;
use ep2d::Error;
use proptest::prelude::*;

fn grid() -> CartesianGrid {
    CartesianGrid::new(128, 40.0).unwrap()
}

fn blob(x: f64, y: f64, (cx, cy, w): (f64, f64, f64)) -> f64 {
    (-((x - cx).powi(2) + (y - cy).powi(2)) / (w * w)).exp()
}

fn blobs() -> impl Strategy<Value = Vec<(f64, f64, f64)>> {
    prop::collection::vec((-8.0f64..8.0, -8.0f64..8.0, 1.0f64..3.0), 1..4)
}

/// A vector field with both a gradient and a rotational part.
fn mixed_field(a: &[(f64, f64, f64)], b: &[(f64, f64, f64)]) -> VectorField2D {
    VectorField2D::from_fn(grid(), |x, y| {
        let p: f64 = a.iter().map(|&c| blob(x, y, c)).sum();
        let q: f64 = b.iter().map(|&c| blob(x, y, c)).sum();
        (p + y * q, -x * q + 0.5 * p)
    })
}

#[test]
fn rejects_bad_grids() {
    assert!(CartesianGrid::new(100, 10.0).is_err());
    assert!(CartesianGrid::new(64, -1.0).is_err());
}

#[test]
fn poisson_needs_a_neutral_source() {
    let rho = ScalarField2D::from_fn(grid(), |x, y| blob(x, y, (0.0, 0.0, 2.0)));
    assert!(matches!(poisson_solve(&rho), Err(Error::Neutrality { .. })));
}

#[test]
fn poisson_inverts_the_laplacian() {
    let phi = ScalarField2D::from_fn(grid(), |x, y| blob(x, y, (1.0, -2.0, 2.0)));
    let solved = poisson_solve(&laplacian(&phi)).unwrap();
    let mean = phi.mean();
    let err = solved
        .values
        .iter()
        .zip(&phi.values)
        .map(|(s, p)| (s - (p - mean)).abs())
        .fold(0.0, f64::max);
    assert!(err <= 1e-12, "{err:e}");
}

#[test]
fn embedding_demands_a_regular_origin() {
    let radii: Vec<f64> = (0..400).map(|k| k as f64 * 0.1).collect();
    let values = radii.iter().map(|r| (-r * r).exp()).collect();
    let profile = RadialProfile::new(radii, values).unwrap();
    assert!(matches!(
        embed_radial(&profile, &grid()),
        Err(Error::OriginRegularity { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn projection_is_idempotent(a in blobs(), b in blobs()) {
        let eta = mixed_field(&a, &b);
        let once = riesz_apply(&eta);
        let twice = riesz_apply(&once);
        prop_assert!(twice.distance(&once) <= 1e-12 * eta.sup_norm().max(1.0));
    }

    #[test]
    fn projection_output_is_curl_free(a in blobs(), b in blobs()) {
        let eta = mixed_field(&a, &b);
        let curl = curl2d(&riesz_apply(&eta));
        prop_assert!(curl.sup_norm() <= 1e-11 * eta.sup_norm().max(1.0));
    }

    #[test]
    fn projection_keeps_the_divergence(a in blobs(), b in blobs()) {
        let eta = mixed_field(&a, &b);
        let d0 = divergence(&eta);
        let d1 = divergence(&riesz_apply(&eta));
        let gap = d0.values.iter().zip(&d1.values).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
        prop_assert!(gap <= 1e-11 * d0.sup_norm().max(1.0));
    }

    #[test]
    fn gradients_are_fixed_points(a in blobs()) {
        let f = ScalarField2D::from_fn(grid(), |x, y| a.iter().map(|&c| blob(x, y, c)).sum());
        let g = gradient(&f);
        prop_assert!(riesz_apply(&g).distance(&g) <= 1e-12 * g.sup_norm());
    }

    #[test]
    fn embedded_radial_fields_are_curl_free(
        terms in prop::collection::vec((-1.0f64..1.0, 1.5f64..4.0), 1..4),
    ) {
        let profile = RadialProfile::sample(0.01, 30.0, |r| {
            terms.iter().map(|(a, w)| a * r * (-(r / w).powi(2)).exp()).sum()
        });
        let eta = embed_radial(&profile, &grid()).unwrap();
        let curl = curl2d(&eta);
        prop_assert!(curl.sup_norm() <= 1e-6 * eta.sup_norm().max(1e-3));
        prop_assert!(riesz_apply(&eta).distance(&eta) <= 1e-6 * eta.sup_norm().max(1e-3));
    }
}
