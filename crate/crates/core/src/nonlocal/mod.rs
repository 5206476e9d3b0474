//! Spectral workbench on a square periodic box for the Riesz operator
//! `∇Δ⁻¹∇·`, the Poisson inverse and the first-order differential
//! operators, together with the embedding of radial profiles into the
//! plane.

mod fourier;
mod ops;
mod radial;
mod spline;

pub use fourier::Fourier2D;
pub use ops::{
    curl2d, divergence, gradient, laplacian, poisson_solve, riesz_apply, NEUTRALITY_TOLERANCE,
};
pub use radial::{embed_radial, embed_radial_scalar, extract_radial, RadialProfile};
pub use spline::CubicSpline;

use crate::error::{Error, Result};

/// Square periodic grid centered at the origin. Node `(i, j)` sits at
/// `((i - N/2) h, (j - N/2) h)`, so the origin is a grid node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartesianGrid {
    num_points_per_side: usize,
    box_length: f64,
}

impl CartesianGrid {
    pub fn new(num_points_per_side: usize, box_length: f64) -> Result<Self> {
        if num_points_per_side < 16 || !num_points_per_side.is_power_of_two() {
            return Err(Error::Grid(format!(
                "points per side must be a power of two >= 16, got {num_points_per_side}"
            )));
        }
        if !(box_length.is_finite() && box_length > 0.0) {
            return Err(Error::Grid(format!(
                "box length must be positive, got {box_length}"
            )));
        }
        Ok(CartesianGrid {
            num_points_per_side,
            box_length,
        })
    }

    pub fn num_points_per_side(&self) -> usize {
        self.num_points_per_side
    }

    pub fn box_length(&self) -> f64 {
        self.box_length
    }

    pub fn spacing(&self) -> f64 {
        self.box_length / self.num_points_per_side as f64
    }

    pub fn len(&self) -> usize {
        self.num_points_per_side * self.num_points_per_side
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Coordinate of node index `i` along either axis.
    #[inline]
    pub fn coord(&self, i: usize) -> f64 {
        (i as f64 - (self.num_points_per_side / 2) as f64) * self.spacing()
    }

    /// Iterates `(flat_index, x, y)` in row-major order (`y` slowest).
    pub fn nodes(&self) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        let n = self.num_points_per_side;
        (0..n).flat_map(move |j| {
            let y = self.coord(j);
            (0..n).map(move |i| (j * n + i, self.coord(i), y))
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField2D {
    pub grid: CartesianGrid,
    pub values: Vec<f64>,
}

impl ScalarField2D {
    pub fn zeros(grid: CartesianGrid) -> Self {
        ScalarField2D {
            values: vec![0.0; grid.len()],
            grid,
        }
    }

    pub fn from_fn(grid: CartesianGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        ScalarField2D {
            values: grid.nodes().map(|(_, x, y)| f(x, y)).collect(),
            grid,
        }
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Largest magnitude on the outermost row and column of the box.
    pub fn boundary_sup(&self) -> f64 {
        let n = self.grid.num_points_per_side();
        let mut sup = 0.0f64;
        for k in 0..n {
            for idx in [k, k * n, (n - 1) * n + k, k * n + n - 1] {
                sup = sup.max(self.values[idx].abs());
            }
        }
        sup
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorField2D {
    pub grid: CartesianGrid,
    pub x_component: Vec<f64>,
    pub y_component: Vec<f64>,
}

impl VectorField2D {
    pub fn zeros(grid: CartesianGrid) -> Self {
        VectorField2D {
            x_component: vec![0.0; grid.len()],
            y_component: vec![0.0; grid.len()],
            grid,
        }
    }

    pub fn from_fn(grid: CartesianGrid, f: impl Fn(f64, f64) -> (f64, f64)) -> Self {
        let (x_component, y_component) = grid.nodes().map(|(_, x, y)| f(x, y)).unzip();
        VectorField2D {
            grid,
            x_component,
            y_component,
        }
    }

    /// Sup over nodes of the Euclidean magnitude.
    pub fn sup_norm(&self) -> f64 {
        self.x_component
            .iter()
            .zip(&self.y_component)
            .fold(0.0, |acc, (x, y)| acc.max(x.hypot(*y)))
    }

    /// Sup norm of `self - other`.
    pub fn distance(&self, other: &VectorField2D) -> f64 {
        self.x_component
            .iter()
            .zip(&self.y_component)
            .zip(other.x_component.iter().zip(&other.y_component))
            .fold(0.0, |acc, ((ax, ay), (bx, by))| {
                acc.max((ax - bx).hypot(ay - by))
            })
    }

    pub fn scaled(mut self, factor: f64) -> Self {
        self.x_component.iter_mut().for_each(|x| *x *= factor);
        self.y_component.iter_mut().for_each(|y| *y *= factor);
        self
    }

    pub fn add(mut self, other: &VectorField2D) -> Self {
        for (a, b) in self.x_component.iter_mut().zip(&other.x_component) {
            *a += b;
        }
        for (a, b) in self.y_component.iter_mut().zip(&other.y_component) {
            *a += b;
        }
        self
    }

    /// Pointwise product with a scalar field.
    pub fn multiplied_by(mut self, scalar: &ScalarField2D) -> Self {
        for ((x, y), s) in self
            .x_component
            .iter_mut()
            .zip(self.y_component.iter_mut())
            .zip(&scalar.values)
        {
            *x *= s;
            *y *= s;
        }
        self
    }
}
