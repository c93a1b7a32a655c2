//! Tridiagonal linear algebra: pivoting LU factorization and a
//! bisection / inverse-iteration eigensolver for symmetric tridiagonal
//! matrices.
//!
//! The discrete operator L = 1 + r^2 d^2/dt^2 is symmetric tridiagonal and
//! indefinite, so the LU factorization uses partial pivoting (the LAPACK
//! `dgttrf`/`dgtts2` scheme) and the eigensolver locates eigenvalues by
//! Sturm-sequence bisection before refining eigenvectors with inverse
//! iteration.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{QplaError, Result};

/// LU factorization of a general tridiagonal matrix with partial pivoting.
pub struct TridiagLu {
    n: usize,
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    ipiv: Vec<usize>,
}

impl TridiagLu {
    /// Factor the tridiagonal matrix with subdiagonal `dl`, diagonal `d`
    /// and superdiagonal `du`.
    pub fn factor(dl: &[f64], d: &[f64], du: &[f64]) -> Result<Self> {
        let n = d.len();
        assert!(n >= 2, "tridiagonal factorization needs n >= 2");
        assert_eq!(dl.len(), n - 1);
        assert_eq!(du.len(), n - 1);
        let mut dl = dl.to_vec();
        let mut d = d.to_vec();
        let mut du = du.to_vec();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut ipiv: Vec<usize> = (0..n).collect();

        for i in 0..n - 1 {
            if d[i].abs() >= dl[i].abs() {
                ipiv[i] = i;
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                ipiv[i] = i + 1;
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let tmp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = tmp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
            }
        }
        if d[n - 1] == 0.0 {
            return Err(QplaError::SingularSystem(
                "zero pivot in tridiagonal factorization".into(),
            ));
        }
        Ok(Self { n, dl, d, du, du2, ipiv })
    }

    /// Solve in place for one right-hand side. The scalar may be real or
    /// complex; the factors themselves are real.
    pub fn solve_in_place<T>(&self, b: &mut [T])
    where
        T: Copy
            + std::ops::Mul<f64, Output = T>
            + std::ops::Sub<Output = T>
            + std::ops::Div<f64, Output = T>,
    {
        let n = self.n;
        assert_eq!(b.len(), n);
        for i in 0..n - 1 {
            if self.ipiv[i] == i {
                b[i + 1] = b[i + 1] - b[i] * self.dl[i];
            } else {
                let tmp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = tmp - b[i] * self.dl[i];
            }
        }
        b[n - 1] = b[n - 1] / self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - b[n - 1] * self.du[n - 2]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - b[i + 1] * self.du[i] - b[i + 2] * self.du2[i]) / self.d[i];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }

    pub fn solve_complex(&self, b: &[Complex64]) -> Vec<Complex64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// Symmetric tridiagonal matrix given by its diagonal and off-diagonal.
pub struct SymTridiag {
    pub diag: Vec<f64>,
    pub offdiag: Vec<f64>,
}

impl SymTridiag {
    pub fn new(diag: Vec<f64>, offdiag: Vec<f64>) -> Self {
        assert_eq!(offdiag.len() + 1, diag.len());
        Self { diag, offdiag }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues at or below `x` (Sturm sequence count). A zero
    /// pivot is clamped to a tiny negative value before counting so the
    /// count stays monotone in `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.n();
        let tiny = f64::MIN_POSITIVE / f64::EPSILON;
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() <= tiny {
            q = -tiny;
        }
        if q <= 0.0 {
            count += 1;
        }
        for i in 1..n {
            q = self.diag[i] - x - self.offdiag[i - 1] * self.offdiag[i - 1] / q;
            if q.abs() <= tiny {
                q = -tiny;
            }
            if q <= 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin bounds on the spectrum.
    pub fn bounds(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.offdiag[i - 1].abs();
            }
            if i + 1 < n {
                radius += self.offdiag[i].abs();
            }
            lo = lo.min(self.diag[i] - radius);
            hi = hi.max(self.diag[i] + radius);
        }
        (lo, hi)
    }

    /// Eigenvalue of ascending index `j` (0-based: j = 0 is the smallest),
    /// located by bisection on the Sturm count.
    pub fn eigenvalue_by_index(&self, j: usize) -> f64 {
        let (mut lo, mut hi) = self.bounds();
        let scale = hi.abs().max(lo.abs()).max(1.0);
        // count_below(x) <= j  <=>  lambda_j >= x
        for _ in 0..120 {
            let mid = 0.5 * (lo + hi);
            if self.count_below(mid) <= j {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 4.0 * f64::EPSILON * scale {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector for an isolated eigenvalue via inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Result<Vec<f64>> {
        let n = self.n();
        let scale = {
            let (lo, hi) = self.bounds();
            hi.abs().max(lo.abs()).max(1.0)
        };
        // Shift slightly off the eigenvalue so the factorization stays finite.
        let shift = lambda + 2.0 * f64::EPSILON * scale;
        let d: Vec<f64> = self.diag.iter().map(|&v| v - shift).collect();
        let lu = TridiagLu::factor(&self.offdiag, &d, &self.offdiag)?;

        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        normalize(&mut v);
        for _ in 0..5 {
            lu.solve_in_place(&mut v);
            normalize(&mut v);
        }
        // Residual check against the unshifted matrix.
        let mut res = 0.0f64;
        for i in 0..n {
            let mut t = (self.diag[i] - lambda) * v[i];
            if i > 0 {
                t += self.offdiag[i - 1] * v[i - 1];
            }
            if i + 1 < n {
                t += self.offdiag[i] * v[i + 1];
            }
            res = res.max(t.abs());
        }
        if res > 1e-8 * scale {
            return Err(QplaError::NonConvergence(format!(
                "inverse iteration residual {res:.3e} at lambda = {lambda}"
            )));
        }
        Ok(v)
    }
}

fn normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for x in v.iter_mut() {
            *x /= norm;
        }
    }
}
