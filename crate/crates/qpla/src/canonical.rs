//! The generalized canonical structure on trajectory space: momentum from
//! velocity, velocity reconstruction through the Green's kernel, the Hamilton
//! functional and the generalized canonical action.

use std::sync::Arc;

use crate::error::{QplaError, Result};
use crate::puoperator::{green_kernel_analytic, l_factorization, PUParams};
use crate::timegrid::{d2_apply, TimeGrid, Trajectory, MIN_INTERIOR_NODES};

/// Generalized momentum sampled on the interior grid.
#[derive(Debug, Clone)]
pub struct MomentumTrajectory {
    pub grid: Arc<TimeGrid>,
    pub values: Vec<f64>,
    pub v0: f64,
    pub v_t: f64,
}

impl MomentumTrajectory {
    pub fn new(grid: Arc<TimeGrid>, values: Vec<f64>, v0: f64, v_t: f64) -> Result<Self> {
        grid.check_len(values.len())?;
        if !values.iter().all(|v| v.is_finite()) {
            return Err(QplaError::Config("momentum values must be finite".into()));
        }
        Ok(Self { grid, values, v0, v_t })
    }
}

/// momentum_from_velocity: p = L(qdot) = qdot + r^2 * d^2/dt^2 qdot,
/// with the velocity field closed by the v0 = vT = 0 endpoint convention.
pub fn momentum_from_velocity(traj: &Trajectory, params: &PUParams) -> Result<MomentumTrajectory> {
    params.validate()?;
    if traj.grid.n() < MIN_INTERIOR_NODES {
        return Err(QplaError::Config(format!(
            "third differences need at least {MIN_INTERIOR_NODES} interior nodes"
        )));
    }
    let dt = traj.grid.dt();
    let v = traj.velocity();
    let (v0, v_t) = traj.boundary_velocities.unwrap_or((0.0, 0.0));
    let vdd = d2_apply(&v, dt, v0, v_t);
    let r2 = params.r * params.r;
    let p: Vec<f64> = v.iter().zip(&vdd).map(|(a, b)| a + r2 * b).collect();
    MomentumTrajectory::new(Arc::clone(&traj.grid), p, v0, v_t)
}

/// velocity_from_momentum: homogeneous boundary solution plus K o p.
pub fn velocity_from_momentum(
    p: &MomentumTrajectory,
    params: &PUParams,
    v0: f64,
    v_t: f64,
) -> Result<Vec<f64>> {
    params.validate()?;
    let grid = &p.grid;
    if params.r == 0.0 {
        // L is the identity: velocity equals momentum.
        return Ok(p.values.clone());
    }
    params.check_resonance()?;
    let omega = params.omega();
    let t_total = params.t_total;
    let sin_wt = (omega * t_total).sin();
    let cos_wt = (omega * t_total).cos();

    let kernel = green_kernel_analytic(grid, params)?;
    let kp = kernel.contract_real(&p.values);
    let mut out = Vec::with_capacity(grid.n());
    for (i, &t) in grid.nodes().iter().enumerate() {
        let homogeneous =
            v0 * (omega * t).cos() + (omega * t).sin() / sin_wt * (v_t - v0 * cos_wt);
        out.push(homogeneous + kp[i].re);
    }
    Ok(out)
}

/// hamilton_functional: H = (1/2)[<p, K o p> + <q, q>], the q^2 term as
/// a full trapezoid including the boundary half-cells.
///
/// K is realized through the grid-exact inverse of L so that the discrete
/// Legendre identity with the Lagrangian action is exact.
pub fn hamilton_functional(
    q: &Trajectory,
    p: &MomentumTrajectory,
    params: &PUParams,
) -> Result<f64> {
    params.validate()?;
    if !q.grid.same_grid(&p.grid) {
        return Err(QplaError::Config("trajectory and momentum grids differ".into()));
    }
    let grid = &q.grid;
    let dt = grid.dt();
    let kp = if params.r == 0.0 {
        p.values.clone()
    } else {
        let lu = l_factorization(grid, params)?;
        lu.solve(&p.values)
    };
    let p_term = grid.inner(&p.values, &kp);
    let mut q_term = grid.inner(&q.values, &q.values);
    q_term += 0.5 * dt * (q.q0 * q.q0 + q.q_t * q.q_t);
    Ok(0.5 * (p_term + q_term))
}

/// canonical_action: I = <qdot, p> - H[q, p].
pub fn canonical_action(q: &Trajectory, p: &MomentumTrajectory, params: &PUParams) -> Result<f64> {
    let qdot = q.velocity();
    let kinetic = q.grid.inner(&qdot, &p.values);
    Ok(kinetic - hamilton_functional(q, p, params)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::lagrangian_action;
    use crate::timegrid::make_grid;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn params(r: f64) -> PUParams {
        PUParams { r, t_total: 1.0, hbar: 1.0, alpha: 1.0, n_max: 1 }
    }

    /// Trajectory whose velocity is a combination of Dirichlet sine modes,
    /// hence vanishes at both endpoints.
    pub fn sine_velocity_trajectory(
        grid: &Arc<TimeGrid>,
        coeffs: &[f64],
        q0: f64,
    ) -> Trajectory {
        let t_total = grid.t_total();
        let shape = |t: f64| -> f64 {
            q0 + coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let n = (i + 1) as f64;
                    c * t_total / (n * PI) * (1.0 - (n * PI * t / t_total).cos())
                })
                .sum::<f64>()
        };
        Trajectory::from_fn(grid, shape).with_boundary_velocities(0.0, 0.0)
    }

    #[test]
    fn momentum_of_sine_velocity_is_eigen_scaled() {
        let g = make_grid(1.0, 1500).unwrap();
        let p = params(0.1);
        for n_mode in [1usize, 2, 3] {
            let mut coeffs = vec![0.0; n_mode];
            coeffs[n_mode - 1] = 1.0;
            let traj = sine_velocity_trajectory(&g, &coeffs, 0.0);
            let mom = momentum_from_velocity(&traj, &p).unwrap();
            let lambda = p.lambda_analytic(n_mode);
            for (i, &t) in g.nodes().iter().enumerate() {
                let expected = lambda * (n_mode as f64 * PI * t).sin();
                assert!((mom.values[i] - expected).abs() < 2e-4, "mode {n_mode} node {i}");
            }
        }
    }

    #[test]
    fn momentum_r_zero_is_velocity() {
        let g = make_grid(1.0, 200).unwrap();
        let traj = sine_velocity_trajectory(&g, &[0.4, -0.2], 0.1);
        let mom = momentum_from_velocity(&traj, &params(0.0)).unwrap();
        let v = traj.velocity();
        for i in 0..g.n() {
            assert_relative_eq!(mom.values[i], v[i], epsilon = 1e-14);
        }
    }

    #[test]
    fn momentum_of_constant_is_zero() {
        let g = make_grid(1.0, 100).unwrap();
        let traj = Trajectory::new(g, 2.0, 2.0, vec![2.0; 100])
            .unwrap()
            .with_boundary_velocities(0.0, 0.0);
        let mom = momentum_from_velocity(&traj, &params(0.2)).unwrap();
        assert!(mom.values.iter().all(|&v| v.abs() < 1e-12));
    }

    #[test]
    fn velocity_momentum_round_trip() {
        let g = make_grid(1.0, 1500).unwrap();
        let p = params(0.1);
        let traj = sine_velocity_trajectory(&g, &[0.7, -0.3, 0.2], 0.0);
        let mom = momentum_from_velocity(&traj, &p).unwrap();
        let v_back = velocity_from_momentum(&mom, &p, 0.0, 0.0).unwrap();
        let v = traj.velocity();
        for i in 0..g.n() {
            assert!((v_back[i] - v[i]).abs() < 5e-4, "node {i}: {} vs {}", v_back[i], v[i]);
        }
    }

    #[test]
    fn homogeneous_velocity_solution() {
        // p = 0, v0 = vT = 1, omega T = pi/2 gives cos(wt) + sin(wt).
        let t_total = 1.0;
        let g = make_grid(t_total, 300).unwrap();
        let omega = PI / 2.0;
        let p = PUParams { r: 1.0 / omega, t_total, hbar: 1.0, alpha: 1.0, n_max: 1 };
        let mom = MomentumTrajectory::new(Arc::clone(&g), vec![0.0; 300], 1.0, 1.0).unwrap();
        let v = velocity_from_momentum(&mom, &p, 1.0, 1.0).unwrap();
        for (i, &t) in g.nodes().iter().enumerate() {
            assert_relative_eq!(v[i], (omega * t).cos() + (omega * t).sin(), epsilon = 1e-10);
        }
    }

    #[test]
    fn zero_momentum_zero_boundary_gives_zero() {
        let g = make_grid(1.0, 64).unwrap();
        let p = params(0.2);
        let mom = MomentumTrajectory::new(Arc::clone(&g), vec![0.0; 64], 0.0, 0.0).unwrap();
        let v = velocity_from_momentum(&mom, &p, 0.0, 0.0).unwrap();
        assert!(v.iter().all(|&x| x.abs() < 1e-14));
    }

    #[test]
    fn hamilton_functional_values() {
        let g = make_grid(1.0, 2000).unwrap();
        let p = params(0.1);
        // p = 0, q = sin(pi t): H = 1/2 * int q^2 = 1/4
        let q = Trajectory::from_fn(&g, |t| (PI * t).sin());
        let zero_p = MomentumTrajectory::new(Arc::clone(&g), vec![0.0; 2000], 0.0, 0.0).unwrap();
        assert_relative_eq!(hamilton_functional(&q, &zero_p, &p).unwrap(), 0.25, epsilon = 1e-6);

        // q = 0, p = L qdot with qdot = sin(pi t): <p, K p> = lambda_1 T / 2
        let traj = sine_velocity_trajectory(&g, &[1.0], 0.0);
        let mom = momentum_from_velocity(&traj, &p).unwrap();
        let zero_q = Trajectory::new(Arc::clone(&g), 0.0, 0.0, vec![0.0; 2000]).unwrap();
        let h = hamilton_functional(&zero_q, &mom, &p).unwrap();
        assert_relative_eq!(h, 0.5 * p.lambda_analytic(1) * 0.5, epsilon = 1e-5);

        // both zero
        let h = hamilton_functional(&zero_q, &zero_p, &p).unwrap();
        assert_eq!(h, 0.0);
    }

    #[test]
    fn canonical_action_constant_trajectory() {
        let g = make_grid(1.0, 400).unwrap();
        let p = params(0.2);
        let c = 1.3;
        let q = Trajectory::new(Arc::clone(&g), c, c, vec![c; 400])
            .unwrap()
            .with_boundary_velocities(0.0, 0.0);
        let zero_p = MomentumTrajectory::new(Arc::clone(&g), vec![0.0; 400], 0.0, 0.0).unwrap();
        let i_can = canonical_action(&q, &zero_p, &p).unwrap();
        let i_lag = lagrangian_action(&q, &p).unwrap();
        assert_relative_eq!(i_can, -0.5 * c * c, epsilon = 1e-12);
        assert_relative_eq!(i_can, i_lag, epsilon = 1e-12);
    }

    #[test]
    fn legendre_consistency_random_modes() {
        let g = make_grid(1.0, 2000).unwrap();
        let p = params(0.1);
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let coeffs: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let q0: f64 = rng.gen_range(-1.0..1.0);
            let q = sine_velocity_trajectory(&g, &coeffs, q0);
            let mom = momentum_from_velocity(&q, &p).unwrap();
            let i_can = canonical_action(&q, &mom, &p).unwrap();
            let i_lag = lagrangian_action(&q, &p).unwrap();
            let rel = (i_can - i_lag).abs() / i_lag.abs();
            assert!(rel <= 1e-5, "relative deviation {rel}");
        }
    }

    #[test]
    fn r_zero_reduces_to_standard_action() {
        let g = make_grid(1.0, 2000).unwrap();
        let p = params(0.0);
        let q = sine_velocity_trajectory(&g, &[0.8, 0.1], 0.2);
        let mom = momentum_from_velocity(&q, &p).unwrap();
        let i_can = canonical_action(&q, &mom, &p).unwrap();
        // standard action int (qdot p - p^2/2 - q^2/2) with p = qdot
        let qdot = q.velocity();
        let mut direct = g.inner(&qdot, &qdot) / 2.0 - g.inner(&q.values, &q.values) / 2.0;
        direct -= 0.25 * g.dt() * (q.q0 * q.q0 + q.q_t * q.q_t);
        assert_relative_eq!(i_can, direct, epsilon = 1e-10);
    }

    #[test]
    fn hamilton_functional_time_reversal_symmetry() {
        // For time-symmetric q, flipping p's sign together with reversing p
        // in time leaves the quadratic form unchanged.
        let g = make_grid(1.0, 501).unwrap();
        let p = params(0.15);
        let q = Trajectory::from_fn(&g, |t| (PI * t).sin());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let vals: Vec<f64> = (0..501).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mom = MomentumTrajectory::new(Arc::clone(&g), vals.clone(), 0.0, 0.0).unwrap();
        let mut reversed: Vec<f64> = vals.iter().rev().map(|&v| -v).collect();
        let mom_rev = MomentumTrajectory::new(Arc::clone(&g), reversed.drain(..).collect(), 0.0, 0.0).unwrap();
        let h1 = hamilton_functional(&q, &mom, &p).unwrap();
        let h2 = hamilton_functional(&q, &mom_rev, &p).unwrap();
        assert_relative_eq!(h1, h2, max_relative = 1e-10);
    }
}
