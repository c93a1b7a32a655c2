//! Uniform time discretization of [0, T] with trapezoid quadrature and
//! second-order finite-difference operators under Dirichlet boundary
//! handling.
//!
//! Only interior nodes t_i = i*dt, i = 1..N are stored; boundary values are
//! data carried by [`Trajectory`], not unknowns. Interior quadrature weights
//! are uniformly dt; integrands that do not vanish at the endpoints get their
//! trapezoid half-cells from the boundary data where an operation has access
//! to it.

use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{QplaError, Result};

pub const MIN_INTERIOR_NODES: usize = 8;

/// Uniform interior grid on [0, T].
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t_total: f64,
    n: usize,
    dt: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// make_grid
pub fn make_grid(t_total: f64, n: usize) -> Result<Arc<TimeGrid>> {
    if !(t_total > 0.0) {
        return Err(QplaError::Config(format!(
            "total duration must be positive, got {t_total}"
        )));
    }
    if n < MIN_INTERIOR_NODES {
        return Err(QplaError::Config(format!(
            "need at least {MIN_INTERIOR_NODES} interior nodes, got {n}"
        )));
    }
    let dt = t_total / (n as f64 + 1.0);
    let nodes = (1..=n).map(|i| i as f64 * dt).collect();
    let weights = vec![dt; n];
    Ok(Arc::new(TimeGrid { t_total, n, dt, nodes, weights }))
}

impl TimeGrid {
    pub fn t_total(&self) -> f64 {
        self.t_total
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn dt(&self) -> f64 {
        self.dt
    }
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Interior quadrature sum of `f` over the grid nodes.
    ///
    /// quadrature. The boundary half-cells are not included here; for a
    /// constant integrand this returns T - dt (documented O(dt) boundary
    /// convention, second order once boundary data is supplied by the
    /// caller).
    pub fn quadrature(&self, f: &[f64]) -> Result<f64> {
        self.check_len(f.len())?;
        Ok(f.iter().zip(&self.weights).map(|(v, w)| v * w).sum())
    }

    /// Weighted inner product sum_i w_i f_i g_i.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        debug_assert_eq!(f.len(), self.n);
        debug_assert_eq!(g.len(), self.n);
        f.iter().zip(g).zip(&self.weights).map(|((a, b), w)| a * b * w).sum()
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&t| f(t)).collect()
    }

    pub fn check_len(&self, len: usize) -> Result<()> {
        if len != self.n {
            return Err(QplaError::LengthMismatch { expected: self.n, got: len });
        }
        Ok(())
    }

    pub fn same_grid(&self, other: &TimeGrid) -> bool {
        self.n == other.n && self.t_total == other.t_total
    }
}

/// Dense interior-to-interior matrix tied to a grid; applied pointwise
/// (no quadrature weights folded in).
#[derive(Debug, Clone)]
pub struct GridMatrix {
    pub grid: Arc<TimeGrid>,
    pub values: DMatrix<f64>,
}

impl GridMatrix {
    pub fn new(grid: Arc<TimeGrid>, values: DMatrix<f64>) -> Self {
        assert_eq!(values.nrows(), grid.n());
        assert_eq!(values.ncols(), grid.n());
        Self { grid, values }
    }

    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        self.grid.check_len(f.len())?;
        let v = nalgebra::DVector::from_column_slice(f);
        Ok((&self.values * v).as_slice().to_vec())
    }
}

/// Finite-difference operator: interior block plus the stencil coefficients
/// multiplying the stored boundary values of the target trajectory.
#[derive(Debug, Clone)]
pub struct DiffOperator {
    pub matrix: GridMatrix,
    /// Coefficient applied to f(0) in the first interior row.
    pub boundary_start: f64,
    /// Coefficient applied to f(T) in the last interior row.
    pub boundary_end: f64,
}

impl DiffOperator {
    pub fn apply(&self, f: &[f64], f0: f64, f_t: f64) -> Result<Vec<f64>> {
        let mut out = self.matrix.apply(f)?;
        out[0] += self.boundary_start * f0;
        let n = out.len();
        out[n - 1] += self.boundary_end * f_t;
        Ok(out)
    }
}

/// diff_matrix: central second-order stencil of the requested order
/// with Dirichlet closure.
pub fn diff_matrix(grid: &Arc<TimeGrid>, order: u32) -> Result<DiffOperator> {
    let n = grid.n();
    let dt = grid.dt();
    let mut m = DMatrix::zeros(n, n);
    let (boundary_start, boundary_end) = match order {
        1 => {
            let c = 1.0 / (2.0 * dt);
            for i in 0..n {
                if i > 0 {
                    m[(i, i - 1)] = -c;
                }
                if i + 1 < n {
                    m[(i, i + 1)] = c;
                }
            }
            (-c, c)
        }
        2 => {
            let c = 1.0 / (dt * dt);
            for i in 0..n {
                m[(i, i)] = -2.0 * c;
                if i > 0 {
                    m[(i, i - 1)] = c;
                }
                if i + 1 < n {
                    m[(i, i + 1)] = c;
                }
            }
            (c, c)
        }
        other => {
            return Err(QplaError::Config(format!(
                "unsupported derivative order {other}, expected 1 or 2"
            )))
        }
    };
    Ok(DiffOperator {
        matrix: GridMatrix::new(Arc::clone(grid), m),
        boundary_start,
        boundary_end,
    })
}

/// Stencil application without materializing the matrix (O(N)).
pub fn d1_apply(f: &[f64], dt: f64, f0: f64, f_t: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let left = if i == 0 { f0 } else { f[i - 1] };
        let right = if i + 1 == n { f_t } else { f[i + 1] };
        out[i] = (right - left) / (2.0 * dt);
    }
    out
}

pub fn d2_apply(f: &[f64], dt: f64, f0: f64, f_t: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    for i in 0..n {
        let left = if i == 0 { f0 } else { f[i - 1] };
        let right = if i + 1 == n { f_t } else { f[i + 1] };
        out[i] = (right - 2.0 * f[i] + left) / (dt * dt);
    }
    out
}

/// Interior trajectory values plus boundary data.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub grid: Arc<TimeGrid>,
    pub q0: f64,
    pub q_t: f64,
    pub values: Vec<f64>,
    /// Boundary velocities (v0, vT) when known exactly; estimated one-sided
    /// from the interior values otherwise.
    pub boundary_velocities: Option<(f64, f64)>,
}

impl Trajectory {
    pub fn new(grid: Arc<TimeGrid>, q0: f64, q_t: f64, values: Vec<f64>) -> Result<Self> {
        grid.check_len(values.len())?;
        Ok(Self { grid, q0, q_t, values, boundary_velocities: None })
    }

    pub fn with_boundary_velocities(mut self, v0: f64, v_t: f64) -> Self {
        self.boundary_velocities = Some((v0, v_t));
        self
    }

    pub fn from_fn(grid: &Arc<TimeGrid>, f: impl Fn(f64) -> f64) -> Self {
        let values = grid.sample(&f);
        Trajectory {
            grid: Arc::clone(grid),
            q0: f(0.0),
            q_t: f(grid.t_total()),
            values,
            boundary_velocities: None,
        }
    }

    /// Central-difference velocity on interior nodes.
    pub fn velocity(&self) -> Vec<f64> {
        d1_apply(&self.values, self.grid.dt(), self.q0, self.q_t)
    }

    /// Central-difference acceleration on interior nodes.
    pub fn acceleration(&self) -> Vec<f64> {
        d2_apply(&self.values, self.grid.dt(), self.q0, self.q_t)
    }

    /// Boundary velocities: stored data, or second-order one-sided estimates.
    pub fn boundary_velocity(&self) -> (f64, f64) {
        if let Some(bv) = self.boundary_velocities {
            return bv;
        }
        let dt = self.grid.dt();
        let q = &self.values;
        let n = q.len();
        let v0 = (-3.0 * self.q0 + 4.0 * q[0] - q[1]) / (2.0 * dt);
        let v_t = (3.0 * self.q_t - 4.0 * q[n - 1] + q[n - 2]) / (2.0 * dt);
        (v0, v_t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn grid_arithmetic() {
        let g = make_grid(1.0, 9).unwrap();
        assert_relative_eq!(g.dt(), 0.1, epsilon = 1e-15);
        assert_relative_eq!(g.nodes()[0], 0.1, epsilon = 1e-15);
        assert_relative_eq!(g.nodes()[8], 0.9, epsilon = 1e-15);

        let g = make_grid(2.0, 19).unwrap();
        assert_relative_eq!(g.dt(), 0.1, epsilon = 1e-15);
        assert_relative_eq!(g.nodes()[0], 0.1, epsilon = 1e-15);
    }

    #[test]
    fn grid_nodes_equally_spaced() {
        let g = make_grid(3.0, 100).unwrap();
        for i in 1..g.n() {
            let gap = g.nodes()[i] - g.nodes()[i - 1];
            assert_relative_eq!(gap, g.dt(), max_relative = 1e-12);
        }
    }

    #[test]
    fn grid_rejects_bad_config() {
        assert!(make_grid(1.0, 4).is_err());
        assert!(make_grid(0.0, 100).is_err());
        assert!(make_grid(-1.0, 100).is_err());
    }

    #[test]
    fn quadrature_constant_and_zero() {
        let g = make_grid(1.0, 99).unwrap();
        let one = vec![1.0; 99];
        assert_relative_eq!(g.quadrature(&one).unwrap(), 0.99, epsilon = 1e-12);
        let zero = vec![0.0; 99];
        assert_eq!(g.quadrature(&zero).unwrap(), 0.0);
    }

    #[test]
    fn quadrature_sine() {
        let g = make_grid(1.0, 999).unwrap();
        let f = g.sample(|t| (PI * t).sin());
        let got = g.quadrature(&f).unwrap();
        assert!((got - 2.0 / PI).abs() < 1e-4, "got {got}");
    }

    #[test]
    fn quadrature_length_mismatch() {
        let g = make_grid(1.0, 16).unwrap();
        assert!(g.quadrature(&[1.0; 10]).is_err());
    }

    #[test]
    fn second_derivative_of_sine_mode() {
        let t_total = 1.0;
        let g = make_grid(t_total, 500).unwrap();
        let d2 = diff_matrix(&g, 2).unwrap();
        for n_mode in [1u32, 3] {
            let k = n_mode as f64 * PI / t_total;
            let v = g.sample(|t| (k * t).sin());
            let dd = d2.apply(&v, 0.0, 0.0).unwrap();
            for i in 0..g.n() {
                assert_relative_eq!(dd[i], -k * k * v[i], epsilon = 6.0 * k.powi(4) * g.dt() * g.dt());
            }
        }
    }

    #[test]
    fn first_derivative_of_constant_is_zero() {
        let g = make_grid(1.0, 64).unwrap();
        let d1 = diff_matrix(&g, 1).unwrap();
        let out = d1.apply(&vec![2.5; 64], 2.5, 2.5).unwrap();
        for v in out {
            assert_relative_eq!(v, 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn unsupported_order_rejected() {
        let g = make_grid(1.0, 16).unwrap();
        assert!(diff_matrix(&g, 3).is_err());
    }

    #[test]
    fn d2_symmetric_negative_semidefinite() {
        let g = make_grid(1.0, 32).unwrap();
        let d2 = diff_matrix(&g, 2).unwrap();
        let m = &d2.matrix.values;
        assert_eq!(m, &m.transpose());
        // Rayleigh quotients on a few vectors must be <= 0 under zero
        // boundary data.
        for seed in 0..5u64 {
            let v: Vec<f64> = (0..32).map(|i| ((i as f64 + 1.3) * (seed as f64 + 0.7)).sin()).collect();
            let mv = d2.apply(&v, 0.0, 0.0).unwrap();
            let quad: f64 = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
            assert!(quad <= 1e-10);
        }
    }

    #[test]
    fn second_order_convergence() {
        // Refining N by 2x reduces the derivative error by >= 3.5x.
        let err = |n: usize| {
            let g = make_grid(1.0, n).unwrap();
            let v = g.sample(|t| (2.0 * PI * t).sin());
            let dd = d2_apply(&v, g.dt(), 0.0, 0.0);
            g.nodes()
                .iter()
                .zip(&dd)
                .map(|(&t, &d)| (d + (2.0 * PI) * (2.0 * PI) * (2.0 * PI * t).sin()).abs())
                .fold(0.0f64, f64::max)
        };
        let e1 = err(199);
        let e2 = err(399);
        assert!(e1 / e2 >= 3.5, "ratio {}", e1 / e2);
    }

    #[test]
    fn trajectory_boundary_velocity_estimate() {
        let g = make_grid(1.0, 400).unwrap();
        let traj = Trajectory::from_fn(&g, |t| (PI * t).sin());
        let (v0, v_t) = traj.boundary_velocity();
        assert_relative_eq!(v0, PI, epsilon = 1e-4);
        assert_relative_eq!(v_t, -PI, epsilon = 1e-4);
    }
}
