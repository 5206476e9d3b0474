//! Difference operators on the cell-centered radial grid.
//!
//! Even profiles are differentiated with a gradient `G` that is the
//! fourth-order central stencil away from the origin and a dedicated
//! closure on the first three cells. The radial divergence is its negative
//! adjoint in the weighted inner product `Σ_j r̃_j h a_j b_j`, where `r̃_j`
//! equals `r_j` except on the closure cells:
//!
//! `div F = -(1/r̃) Gᵀ (r̃ F)`.
//!
//! The linear acoustic part of the scheme is therefore skew in that inner
//! product, and the mass `Σ r̃_j h (n_j - n0)` changes only through the far
//! boundary.

use super::RadialGrid;

/// Ghost cells on each side of the grid.
pub const GHOSTS: usize = 3;

/// Fourth-order central first derivative, to be divided by `h`.
pub const CENTRAL4: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];

const CLOSURE_CELLS: usize = 3;
const CLOSURE_WIDTH: usize = 5;

/// `r̃_j / h` on the closure cells.
const CLOSURE_RADII: [f64; CLOSURE_CELLS] =
    [0.466_652_199_074_133_5, 1.491_427_951_388_839_5, 2.500_253_182_870_397];

/// Rows `0..3` of `h G`, columns `0..5`.
const CLOSURE_ROWS: [[f64; CLOSURE_WIDTH]; CLOSURE_CELLS] = [
    [
        -0.654_139_932_592_304_9,
        0.737_213_338_182_529_8,
        -0.091_724_012_508_380_5,
        0.012_136_842_459_718_14,
        -0.003_486_235_541_569_58,
    ],
    [
        -0.506_486_578_554_543_5,
        -0.078_531_273_839_679_5,
        0.615_385_811_240_859_8,
        -0.009_013_357_145_872_47,
        -0.021_354_601_700_766_51,
    ],
    [
        0.056_379_231_300_036_14,
        -0.639_937_550_476_331_8,
        0.019_735_042_544_396_87,
        0.639_375_085_868_944_8,
        -0.075_551_809_237_052_53,
    ],
];

/// Midpoint interpolation of the enclosed charge, `Φ(r_j) ≈ Σ s_k (Φ_{j-k} + Φ_{j+1+k})`,
/// with the `h²` and `h⁴` terms of the cumulative sum removed. What is left
/// is a constant of order `h⁴` from the origin closure, kept so that a
/// neutral density has no field outside its support.
const FIELD_STENCIL: [f64; 3] = [401.0 / 720.0, -31.0 / 480.0, 11.0 / 1440.0];

/// Cells whose field comes from the even polynomial through the first
/// charge densities rather than from [`FIELD_STENCIL`].
const NEAR_CELLS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Copies `values` into a buffer padded with [`GHOSTS`] cells per side:
/// mirrored through `r = 0` with the given parity, zero beyond `r_max`.
pub fn extend_cells(values: &[f64], parity: Parity, out: &mut Vec<f64>) {
    let n = values.len();
    out.clear();
    out.resize(n + 2 * GHOSTS, 0.0);
    let sign = match parity {
        Parity::Even => 1.0,
        Parity::Odd => -1.0,
    };
    for g in 0..GHOSTS {
        out[GHOSTS - 1 - g] = sign * values[g.min(n - 1)];
    }
    out[GHOSTS..GHOSTS + n].copy_from_slice(values);
}

#[derive(Debug, Clone)]
pub struct RadialOperators {
    h: f64,
    cells: usize,
    centers: Vec<f64>,
    /// `r̃_j`.
    radius: Vec<f64>,
    /// `r̃_j h`.
    weight: Vec<f64>,
    /// Field at the first centers from the charge densities of the first
    /// cells, in units of `h`.
    near: [[f64; NEAR_CELLS]; NEAR_CELLS],
}

impl RadialOperators {
    pub fn new(grid: &RadialGrid) -> Self {
        let h = grid.dr();
        let cells = grid.num_cells();
        let centers = grid.centers();
        let mut radius = centers.clone();
        for (r, c) in radius.iter_mut().zip(CLOSURE_RADII) {
            *r = c * h;
        }
        let weight = radius.iter().map(|r| r * h).collect();

        // even polynomial Σ c_p x^{2p} through the first densities, x = r/h
        let x: Vec<f64> = (0..NEAR_CELLS).map(|k| k as f64 + 0.5).collect();
        let vandermonde: Vec<Vec<f64>> = x
            .iter()
            .map(|xk| (0..NEAR_CELLS).map(|p| xk.powi(2 * p as i32)).collect())
            .collect();
        // inverse[p][k]: coefficient c_p per unit density in cell k
        let mut inverse = [[0.0; NEAR_CELLS]; NEAR_CELLS];
        for k in 0..NEAR_CELLS {
            let mut unit = vec![0.0; NEAR_CELLS];
            unit[k] = 1.0;
            let c = crate::linalg::solve(vandermonde.clone(), unit)
                .expect("near-origin interpolation is nonsingular");
            for p in 0..NEAR_CELLS {
                inverse[p][k] = c[p];
            }
        }
        let mut near = [[0.0; NEAR_CELLS]; NEAR_CELLS];
        for (j, row) in near.iter_mut().enumerate() {
            for (k, w) in row.iter_mut().enumerate() {
                *w = (0..NEAR_CELLS)
                    .map(|p| {
                        let q = 2 * p as i32 + 2;
                        inverse[p][k] * x[j].powi(q - 1) / q as f64
                    })
                    .sum();
            }
        }
        RadialOperators {
            h,
            cells,
            centers,
            radius,
            weight,
            near,
        }
    }

    pub fn dr(&self) -> f64 {
        self.h
    }

    /// Quadrature weights `r̃_j h` of `∫ f r dr`.
    pub fn weights(&self) -> &[f64] {
        &self.weight
    }

    /// `Σ_j r̃_j h f_j`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.weight.iter().zip(f).map(|(w, v)| w * v).sum()
    }

    /// `∂ᵣ` of an even profile.
    pub fn gradient(&self, f: &[f64]) -> Vec<f64> {
        let n = self.cells;
        let mut out = vec![0.0; n];
        for (j, row) in CLOSURE_ROWS.iter().enumerate() {
            out[j] = row.iter().zip(f).map(|(a, b)| a * b).sum();
        }
        for j in CLOSURE_CELLS..n {
            let mut acc = 0.0;
            for (o, w) in CENTRAL4.iter().enumerate() {
                let k = j + o - 2;
                if k < n {
                    acc += w * f[k];
                }
            }
            out[j] = acc;
        }
        out.iter_mut().for_each(|v| *v /= self.h);
        out
    }

    /// `Gᵀ y`.
    fn gradient_transpose(&self, y: &[f64]) -> Vec<f64> {
        let n = self.cells;
        let mut out = vec![0.0; n];
        for (j, row) in CLOSURE_ROWS.iter().enumerate() {
            for (k, a) in row.iter().enumerate() {
                out[k] += a * y[j];
            }
        }
        for j in CLOSURE_CELLS..n {
            for (o, w) in CENTRAL4.iter().enumerate() {
                let k = j + o - 2;
                if k < n {
                    out[k] += w * y[j];
                }
            }
        }
        out.iter_mut().for_each(|v| *v /= self.h);
        out
    }

    /// `∂ᵣF + F/r` of an odd flux.
    pub fn divergence(&self, flux: &[f64]) -> Vec<f64> {
        let scaled: Vec<f64> = flux.iter().zip(&self.radius).map(|(f, r)| f * r).collect();
        self.gradient_transpose(&scaled)
            .iter()
            .zip(&self.radius)
            .map(|(g, r)| -g / r)
            .collect()
    }

    /// `∂ᵣ` of an odd profile by central differences with mirrored ghosts.
    pub fn odd_gradient(&self, f: &[f64]) -> Vec<f64> {
        let mut ext = Vec::new();
        extend_cells(f, Parity::Odd, &mut ext);
        (0..f.len())
            .map(|j| {
                CENTRAL4
                    .iter()
                    .zip(&ext[j + GHOSTS - 2..j + GHOSTS + 3])
                    .map(|(a, b)| a * b)
                    .sum::<f64>()
                    / self.h
            })
            .collect()
    }

    /// Enclosed charge `Φ_f = Σ_{k<f} r̃_k h q_k` at faces `0..=N`.
    pub fn enclosed(&self, q: &[f64]) -> Vec<f64> {
        let mut out = Vec::with_capacity(q.len() + 1);
        let mut acc = 0.0;
        out.push(0.0);
        for (w, v) in self.weight.iter().zip(q) {
            acc += w * v;
            out.push(acc);
        }
        out
    }

    /// Field `Φ(r_j) / r_j` at the centers from the enclosed charge at the
    /// faces. Linear in `Φ`, so it commutes with the time integration.
    pub fn center_field(&self, enclosed: &[f64]) -> Vec<f64> {
        let n = self.cells;
        let h = self.h;
        let density: Vec<f64> = (0..NEAR_CELLS)
            .map(|k| (enclosed[k + 1] - enclosed[k]) / self.weight[k])
            .collect();
        let mut out = Vec::with_capacity(n);
        for row in &self.near {
            out.push(h * row.iter().zip(&density).map(|(a, b)| a * b).sum::<f64>());
        }
        let at = |f: usize| enclosed[f.min(n)];
        for j in NEAR_CELLS..n {
            let mid = FIELD_STENCIL
                .iter()
                .enumerate()
                .map(|(k, s)| s * (at(j - k) + at(j + 1 + k)))
                .sum::<f64>();
            out.push(mid / self.centers[j]);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(cells: usize, r_max: f64) -> RadialGrid {
        RadialGrid::new(cells, r_max).unwrap()
    }

    #[test]
    fn divergence_is_negative_adjoint_of_gradient() {
        let ops = RadialOperators::new(&grid(64, 6.0));
        let a: Vec<f64> = (0..64).map(|j| ((j * 7 % 11) as f64).sin()).collect();
        let b: Vec<f64> = (0..64).map(|j| ((j * 5 % 13) as f64).cos()).collect();
        let ga = ops.gradient(&a);
        let db = ops.divergence(&b);
        let lhs: f64 = ops.weights().iter().zip(&ga).zip(&b).map(|((w, x), y)| w * x * y).sum();
        let rhs: f64 = ops.weights().iter().zip(&a).zip(&db).map(|((w, x), y)| w * x * y).sum();
        assert!((lhs + rhs).abs() < 1e-11 * lhs.abs().max(1.0), "{lhs} {rhs}");
    }

    #[test]
    fn closure_is_exact_on_low_even_powers() {
        let g = grid(64, 6.4);
        let ops = RadialOperators::new(&g);
        let r = g.centers();
        for p in [0, 2, 4] {
            let f: Vec<f64> = r.iter().map(|x| x.powi(p)).collect();
            let d = ops.gradient(&f);
            for j in 0..10 {
                let exact = p as f64 * r[j].powi(p - 1);
                assert!((d[j] - exact).abs() < 1e-11, "p={p} j={j}");
            }
        }
        let d = ops.divergence(&r);
        for v in &d[..10] {
            assert!((v - 2.0).abs() < 1e-11);
        }
    }

    #[test]
    fn center_field_reproduces_polynomial_charges() {
        let g = grid(64, 64.0);
        let ops = RadialOperators::new(&g);
        let r = g.centers();
        let q = vec![1.0; 64];
        let e = ops.center_field(&ops.enclosed(&q));
        for j in 0..60 {
            assert!((e[j] - r[j] / 2.0).abs() < 1e-12 * r[j], "j={j}");
        }
        // near the origin the field follows the even interpolant exactly
        let q: Vec<f64> = r.iter().map(|x| 1.0 - x * x + 0.01 * x.powi(4)).collect();
        let e = ops.center_field(&ops.enclosed(&q));
        for j in 0..5 {
            let exact = r[j] / 2.0 - r[j].powi(3) / 4.0 + 0.01 * r[j].powi(5) / 6.0;
            assert!((e[j] - exact).abs() < 1e-12 * exact.abs().max(1.0), "j={j}");
        }
    }

    #[test]
    fn center_field_is_fourth_order() {
        let err = |cells: usize| {
            let g = grid(cells, 10.0);
            let ops = RadialOperators::new(&g);
            let r = g.centers();
            let q: Vec<f64> = r.iter().map(|x| (-x * x).exp() * (1.0 - x * x)).collect();
            let e = ops.center_field(&ops.enclosed(&q));
            let h = g.dr();
            r.iter()
                .zip(&e)
                .map(|(x, v)| (v - 0.5 * x * (-x * x).exp()).powi(2) * x * h)
                .sum::<f64>()
                .sqrt()
        };
        let (e1, e2, e3) = (err(100), err(200), err(400));
        assert!(e1 / e2 > 12.0 && e2 / e3 > 12.0, "{e1} {e2} {e3}");
    }

    #[test]
    fn ghost_extension_parity() {
        let mut out = Vec::new();
        extend_cells(&[1.0, 2.0, 3.0, 4.0], Parity::Odd, &mut out);
        assert_eq!(out, vec![-3.0, -2.0, -1.0, 1.0, 2.0, 3.0, 4.0, 0.0, 0.0, 0.0]);
    }
}
