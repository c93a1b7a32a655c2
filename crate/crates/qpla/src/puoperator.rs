//! The nonlocal operator L = 1 + r^2 d^2/dt^2 on [0, T] with Dirichlet
//! velocity boundary conditions: its Green's kernel, its spectrum, spectral
//! operator functions, and the trace of 1/sqrt(L).

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{QplaError, Result};
use crate::linalg::{SymTridiag, TridiagLu};
use crate::timegrid::{diff_matrix, GridMatrix, TimeGrid};

/// Guard on |sin(omega T)| below which the analytic kernel is singular.
pub const RESONANCE_GUARD: f64 = 1e-8;
/// Guard on |lambda_n| below which L is treated as non-invertible.
pub const EIGENVALUE_GUARD: f64 = 1e-10;

/// Physical and numerical parameters of the Pais-Uhlenbeck operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PUParams {
    /// Higher-derivative timescale; r = 0 selects the harmonic limit.
    pub r: f64,
    /// Total duration T of the interval.
    pub t_total: f64,
    /// Action scale.
    pub hbar: f64,
    /// Dimensionless calibration constant relating hbar-tilde to r*hbar.
    pub alpha: f64,
    /// Mode cutoff for spectral sums and kernels.
    pub n_max: usize,
}

impl PUParams {
    pub fn new(r: f64, t_total: f64, n_max: usize) -> Result<Self> {
        let p = Self { r, t_total, hbar: 1.0, alpha: 1.0, n_max };
        p.validate()?;
        Ok(p)
    }

    pub fn with_hbar(mut self, hbar: f64) -> Self {
        self.hbar = hbar;
        self
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn omega(&self) -> f64 {
        1.0 / self.r
    }

    pub fn validate(&self) -> Result<()> {
        if self.r < 0.0 || !self.r.is_finite() {
            return Err(QplaError::Config(format!("r must be >= 0, got {}", self.r)));
        }
        if !(self.t_total > 0.0) {
            return Err(QplaError::Config(format!(
                "T must be positive, got {}",
                self.t_total
            )));
        }
        if self.n_max < 1 {
            return Err(QplaError::Config("n_max must be >= 1".into()));
        }
        if self.r > 0.0 {
            self.check_resonance()?;
        }
        Ok(())
    }

    pub fn check_resonance(&self) -> Result<()> {
        let omega_t = self.omega() * self.t_total;
        if omega_t.sin().abs() <= RESONANCE_GUARD {
            let m = (omega_t / std::f64::consts::PI).round() as i64;
            return Err(QplaError::Resonance { omega_t, m, guard: RESONANCE_GUARD });
        }
        Ok(())
    }

    /// Continuum eigenvalue lambda_n = 1 - n^2 pi^2 (r/T)^2.
    pub fn lambda_analytic(&self, n: usize) -> f64 {
        let x = n as f64 * std::f64::consts::PI * self.r / self.t_total;
        1.0 - x * x
    }

    /// Largest n with lambda_n > 0 in the continuum formula.
    pub fn n_critical_analytic(&self) -> usize {
        if self.r == 0.0 {
            return usize::MAX;
        }
        let x = self.t_total / (std::f64::consts::PI * self.r);
        x.floor() as usize
    }
}

/// Two-point kernel on the grid with the quadrature contraction convention
/// (K o f)_i = sum_j K_ij w_j f_j.
#[derive(Debug, Clone)]
pub struct GridKernel {
    pub grid: Arc<TimeGrid>,
    pub values: DMatrix<Complex64>,
    pub symmetric: bool,
}

impl GridKernel {
    pub fn from_complex(grid: Arc<TimeGrid>, values: DMatrix<Complex64>) -> Self {
        assert_eq!(values.nrows(), grid.n());
        assert_eq!(values.ncols(), grid.n());
        let symmetric = is_symmetric(&values);
        Self { grid, values, symmetric }
    }

    pub fn from_real(grid: Arc<TimeGrid>, values: DMatrix<f64>) -> Self {
        let complex = values.map(|v| Complex64::new(v, 0.0));
        Self::from_complex(grid, complex)
    }

    /// Discrete Dirac delta under the contraction convention: delta_ij / w_j.
    pub fn delta(grid: Arc<TimeGrid>) -> Self {
        let n = grid.n();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0 / grid.weights()[i], 0.0);
        }
        Self { grid, values: m, symmetric: true }
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn contract(&self, f: &[Complex64]) -> Vec<Complex64> {
        let n = self.n();
        assert_eq!(f.len(), n);
        let w = self.grid.weights();
        let mut out = vec![Complex64::default(); n];
        for i in 0..n {
            let row = self.values.row(i);
            let mut acc = Complex64::default();
            for j in 0..n {
                acc += row[j] * w[j] * f[j];
            }
            out[i] = acc;
        }
        out
    }

    pub fn contract_real(&self, f: &[f64]) -> Vec<Complex64> {
        let fc: Vec<Complex64> = f.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        self.contract(&fc)
    }

    /// Kernel composition (A o B)(t, s) = int A(t, u) B(u, s) du.
    pub fn compose(&self, other: &GridKernel) -> GridKernel {
        assert!(self.grid.same_grid(&other.grid));
        let w = self.grid.weights();
        let mut weighted = self.values.clone();
        for j in 0..self.n() {
            let scale = Complex64::new(w[j], 0.0);
            for i in 0..self.n() {
                weighted[(i, j)] *= scale;
            }
        }
        GridKernel::from_complex(Arc::clone(&self.grid), weighted * &other.values)
    }

    /// Weighted trace sum_i w_i K(t_i, t_i).
    pub fn weighted_trace(&self) -> Complex64 {
        let w = self.grid.weights();
        (0..self.n()).map(|i| self.values[(i, i)] * w[i]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag_abs(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag_abs() <= tol * self.max_abs().max(1.0)
    }
}

fn is_symmetric(values: &DMatrix<Complex64>) -> bool {
    let mut max_abs = 0.0f64;
    let mut max_asym = 0.0f64;
    for i in 0..values.nrows() {
        for j in i..values.ncols() {
            max_abs = max_abs.max(values[(i, j)].norm());
            max_asym = max_asym.max((values[(i, j)] - values[(j, i)]).norm());
        }
    }
    max_asym <= 1e-10 * max_abs.max(f64::MIN_POSITIVE)
}

/// Dirichlet eigenpairs of L, sorted by descending eigenvalue.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub grid: Arc<TimeGrid>,
    /// lambda_1 > lambda_2 > ... > lambda_n_max.
    pub eigenvalues: Vec<f64>,
    /// Column n holds v_{n+1} sampled on the grid, w-normalized
    /// (sum_i w_i v_n(t_i)^2 = 1) and sign-fixed so v_n(t_1) > 0.
    pub modes: DMatrix<f64>,
    /// Largest retained n with lambda_n > 0.
    pub n_critical: usize,
}

impl Spectrum {
    pub fn n_max(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn mode(&self, n: usize) -> Vec<f64> {
        self.modes.column(n).as_slice().to_vec()
    }
}

/// build_L: L = I + r^2 * D2 with zero Dirichlet closure.
pub fn build_l(grid: &Arc<TimeGrid>, params: &PUParams) -> Result<GridMatrix> {
    params.validate()?;
    let d2 = diff_matrix(grid, 2)?;
    let n = grid.n();
    let mut m = d2.matrix.values * (params.r * params.r);
    for i in 0..n {
        m[(i, i)] += 1.0;
    }
    Ok(GridMatrix::new(Arc::clone(grid), m))
}

/// Symmetric tridiagonal representation of build_L.
pub fn l_tridiag(grid: &TimeGrid, params: &PUParams) -> SymTridiag {
    let n = grid.n();
    let dt = grid.dt();
    let x = params.r * params.r / (dt * dt);
    SymTridiag::new(vec![1.0 - 2.0 * x; n], vec![x; n - 1])
}

/// Count of positive eigenvalues of the discrete L (Sturm count).
pub fn count_positive_eigenvalues(grid: &TimeGrid, params: &PUParams) -> usize {
    if params.r == 0.0 {
        return grid.n();
    }
    let tri = l_tridiag(grid, params);
    grid.n() - tri.count_below(0.0)
}

/// Eigenvalue of L closest to zero in magnitude.
fn min_abs_eigenvalue(tri: &SymTridiag) -> f64 {
    let n = tri.n();
    let below = tri.count_below(0.0);
    let mut best = f64::INFINITY;
    if below > 0 {
        best = best.min(tri.eigenvalue_by_index(below - 1).abs());
    }
    if below < n {
        best = best.min(tri.eigenvalue_by_index(below).abs());
    }
    best
}

/// green_kernel_analytic: closed-form Dirichlet Green's kernel of L,
/// K(t, s) = omega/sin(omega T) * sin(omega t_<) * sin(omega (t_> - T)).
pub fn green_kernel_analytic(grid: &Arc<TimeGrid>, params: &PUParams) -> Result<GridKernel> {
    params.validate()?;
    if params.r == 0.0 {
        return Err(QplaError::Config(
            "analytic kernel needs r > 0; at r = 0 the kernel is the delta".into(),
        ));
    }
    params.check_resonance()?;
    let omega = params.omega();
    let t_total = params.t_total;
    let prefactor = omega / (omega * t_total).sin();
    let nodes = grid.nodes();
    let n = grid.n();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let t_lo = nodes[j];
            let t_hi = nodes[i];
            let v = prefactor * (omega * t_lo).sin() * (omega * (t_hi - t_total)).sin();
            m[(i, j)] = Complex64::new(v, 0.0);
            m[(j, i)] = Complex64::new(v, 0.0);
        }
    }
    Ok(GridKernel { grid: Arc::clone(grid), values: m, symmetric: true })
}

/// LU factorization of the discrete L, guarded against near-zero modes.
pub fn l_factorization(grid: &TimeGrid, params: &PUParams) -> Result<TridiagLu> {
    let tri = l_tridiag(grid, params);
    let min_abs = min_abs_eigenvalue(&tri);
    if min_abs <= EIGENVALUE_GUARD {
        return Err(QplaError::Conditioning { min_abs_eigenvalue: min_abs, guard: EIGENVALUE_GUARD });
    }
    TridiagLu::factor(&tri.offdiag, &tri.diag, &tri.offdiag)
}

/// green_kernel_numeric: exact inverse of the discrete L, rescaled by
/// the contraction convention so K o (L f) = f on the grid.
pub fn green_kernel_numeric(grid: &Arc<TimeGrid>, params: &PUParams) -> Result<GridKernel> {
    params.validate()?;
    let n = grid.n();
    let lu = l_factorization(grid, params)?;
    let w = grid.weights();
    let mut m = DMatrix::zeros(n, n);
    let mut col = vec![0.0f64; n];
    for j in 0..n {
        col.fill(0.0);
        col[j] = 1.0;
        lu.solve_in_place(&mut col);
        // K_ij = (L^-1)_ij / w_j
        for i in 0..n {
            m[(i, j)] = Complex64::new(col[i] / w[j], 0.0);
        }
    }
    Ok(GridKernel::from_complex(Arc::clone(grid), m))
}

/// Apply the numeric Green kernel to a vector without materializing it.
pub fn green_apply(lu: &TridiagLu, f: &[f64]) -> Vec<f64> {
    lu.solve(f)
}

/// spectrum: eigen-decomposition of the symmetric tridiagonal L.
pub fn spectrum(grid: &Arc<TimeGrid>, params: &PUParams) -> Result<Spectrum> {
    params.validate()?;
    let n = grid.n();
    if params.n_max > n {
        return Err(QplaError::Config(format!(
            "n_max = {} exceeds grid size N = {}",
            params.n_max, n
        )));
    }
    let n_max = params.n_max;
    let dt = grid.dt();
    let mut eigenvalues = Vec::with_capacity(n_max);
    let mut modes = DMatrix::zeros(n, n_max);

    if params.r == 0.0 {
        // L = I: every vector is an eigenvector; keep the Dirichlet sine
        // basis so spectral kernels stay consistent with the r > 0 family.
        for m in 1..=n_max {
            eigenvalues.push(1.0);
            let k = m as f64 * std::f64::consts::PI / params.t_total;
            let mut v: Vec<f64> = grid.nodes().iter().map(|&t| (k * t).sin()).collect();
            let norm = (dt * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
            for x in v.iter_mut() {
                *x /= norm;
            }
            modes.column_mut(m - 1).copy_from_slice(&v);
        }
    } else {
        let tri = l_tridiag(grid, params);
        for m in 1..=n_max {
            // m-th largest eigenvalue has ascending index n - m.
            let lambda = tri.eigenvalue_by_index(n - m);
            let mut v = tri.eigenvector(lambda)?;
            let norm = (dt * v.iter().map(|x| x * x).sum::<f64>()).sqrt();
            let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
            for x in v.iter_mut() {
                *x *= sign / norm;
            }
            eigenvalues.push(lambda);
            modes.column_mut(m - 1).copy_from_slice(&v);
        }
    }
    let n_critical = eigenvalues.iter().filter(|&&l| l > 0.0).count();
    Ok(Spectrum { grid: Arc::clone(grid), eigenvalues, modes, n_critical })
}

/// Principal branch square root: sqrt(lambda) = i sqrt(|lambda|) for
/// lambda < 0.
pub fn principal_sqrt(lambda: f64) -> Complex64 {
    if lambda >= 0.0 {
        Complex64::new(lambda.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-lambda).sqrt())
    }
}

/// operator_function: kernel sum_n f(lambda_n) v_n(t_i) v_n(t_j).
pub fn operator_function(
    spec: &Spectrum,
    f: impl Fn(f64) -> Complex64,
) -> Result<GridKernel> {
    let n = spec.grid.n();
    let n_max = spec.n_max();
    let mut coeffs = Vec::with_capacity(n_max);
    for &lambda in &spec.eigenvalues {
        let value = f(lambda);
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(QplaError::Pole { lambda });
        }
        coeffs.push(value);
    }
    // V diag(f) V^T assembled as one complex GEMM.
    let v_complex = spec.modes.map(|x| Complex64::new(x, 0.0));
    let mut scaled = v_complex.clone();
    for (c, &coeff) in coeffs.iter().enumerate() {
        for i in 0..n {
            scaled[(i, c)] *= coeff;
        }
    }
    let values = scaled * v_complex.transpose();
    Ok(GridKernel::from_complex(Arc::clone(&spec.grid), values))
}

/// Result of summing the trace series for 1/sqrt(L).
#[derive(Debug, Clone, Copy)]
pub struct TraceInvSqrt {
    pub re: f64,
    pub im: f64,
    /// Number of retained modes with lambda_n > 0.
    pub n_critical: usize,
}

/// trace_inv_sqrt: S = sum_{n=1}^{n_max} lambda_n^{-1/2} with the
/// continuum eigenvalues and the principal branch.
pub fn trace_inv_sqrt(params: &PUParams) -> Result<TraceInvSqrt> {
    params.validate()?;
    let mut re = 0.0;
    let mut im = 0.0;
    let mut n_critical = 0;
    for n in 1..=params.n_max {
        let lambda = params.lambda_analytic(n);
        if lambda.abs() <= EIGENVALUE_GUARD {
            return Err(QplaError::Pole { lambda });
        }
        let inv_sqrt = principal_sqrt(lambda).inv();
        re += inv_sqrt.re;
        im += inv_sqrt.im;
        if lambda > 0.0 {
            n_critical += 1;
        }
    }
    Ok(TraceInvSqrt { re, im, n_critical })
}

/// The two competing closed forms for the real part of the trace.
#[derive(Debug, Clone, Copy)]
pub struct TraceIntegralApprox {
    /// The commonly quoted closed form pi^2 T / r.
    pub quoted_value: f64,
    /// Midpoint/Riemann-sum value (T/(pi r)) * arcsin(n_c pi r / T).
    pub derived_value: f64,
    pub n_critical: usize,
}

/// trace_integral_approx: reports both the quoted approximation and the
/// Riemann-sum value it should correspond to; downstream calibration decides.
pub fn trace_integral_approx(params: &PUParams) -> Result<TraceIntegralApprox> {
    params.validate()?;
    if params.r <= 0.0 {
        return Err(QplaError::Config("trace integral approximation needs r > 0".into()));
    }
    let pi = std::f64::consts::PI;
    let n_c = params.n_critical_analytic();
    let x = (n_c as f64 * pi * params.r / params.t_total).min(1.0);
    Ok(TraceIntegralApprox {
        quoted_value: pi * pi * params.t_total / params.r,
        derived_value: params.t_total / (pi * params.r) * x.asin(),
        n_critical: n_c,
    })
}
