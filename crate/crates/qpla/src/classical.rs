//! Classical Pais-Uhlenbeck dynamics: the Lagrangian action, Ostrogradsky's
//! constrained canonical form, RK4 Hamiltonian flow, the ghost energy
//! demonstration and the harmonic limit.

use crate::error::{QplaError, Result};
use crate::puoperator::PUParams;
use crate::timegrid::Trajectory;

/// Classical phase point of the Ostrogradsky reduction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OstrogradskyState {
    pub q: f64,
    pub y: f64,
    pub p_q: f64,
    pub p_y: f64,
    /// Multiplier pair (lambda, p_lambda) when tracked explicitly.
    pub multiplier: Option<(f64, f64)>,
}

impl OstrogradskyState {
    pub fn new(q: f64, y: f64, p_q: f64, p_y: f64) -> Self {
        Self { q, y, p_q, p_y, multiplier: None }
    }

    pub fn is_finite(&self) -> bool {
        self.q.is_finite() && self.y.is_finite() && self.p_q.is_finite() && self.p_y.is_finite()
    }
}

/// lagrangian_action: full-trapezoid quadrature of
/// (1/2)(qdot^2 - r^2 qddot^2 - q^2).
///
/// The acceleration term is evaluated as the staggered square sum of the
/// central-difference velocity so that the discrete Legendre identity with
/// the canonical action is exact when the boundary velocities vanish.
pub fn lagrangian_action(traj: &Trajectory, params: &PUParams) -> Result<f64> {
    params.validate()?;
    let grid = &traj.grid;
    let dt = grid.dt();
    let r2 = params.r * params.r;
    let (v0, v_t) = traj.boundary_velocity();
    let v = traj.velocity();
    let n = v.len();

    // velocity-squared and coordinate-squared terms, trapezoid with
    // boundary half-cells
    let mut kinetic: f64 = v.iter().map(|x| x * x).sum::<f64>() * dt;
    kinetic += 0.5 * dt * (v0 * v0 + v_t * v_t);
    let mut potential: f64 = traj.values.iter().map(|x| x * x).sum::<f64>() * dt;
    potential += 0.5 * dt * (traj.q0 * traj.q0 + traj.q_t * traj.q_t);

    // acceleration term: staggered differences of the velocity field,
    // covering all N+1 half-cells of [0, T]
    let mut accel = 0.0;
    for i in 0..=n {
        let left = if i == 0 { v0 } else { v[i - 1] };
        let right = if i == n { v_t } else { v[i] };
        let m = (right - left) / dt;
        accel += m * m * dt;
    }

    Ok(0.5 * (kinetic - r2 * accel - potential))
}

/// ostro_hamiltonian: h = -(1/2)(p_y^2/r^2 + y^2) + q^2/2 + y p_q.
pub fn ostro_hamiltonian(state: &OstrogradskyState, params: &PUParams) -> Result<f64> {
    if params.r == 0.0 {
        return Err(QplaError::HarmonicLimit(
            "ostro_hamiltonian is singular at r = 0; use harmonic_limit_hamiltonian".into(),
        ));
    }
    let r2 = params.r * params.r;
    Ok(-0.5 * (state.p_y * state.p_y / r2 + state.y * state.y)
        + 0.5 * state.q * state.q
        + state.y * state.p_q)
}

/// ostro_flow: Hamilton's equations of the reduced Hamiltonian.
pub fn ostro_flow(state: &OstrogradskyState, params: &PUParams) -> Result<OstrogradskyState> {
    if params.r == 0.0 {
        return Err(QplaError::HarmonicLimit("ostro_flow needs r > 0".into()));
    }
    let r2 = params.r * params.r;
    Ok(OstrogradskyState {
        q: state.y,
        y: -state.p_y / r2,
        p_q: -state.q,
        p_y: state.y - state.p_q,
        multiplier: None,
    })
}

/// Sampled classical run with its energy series.
#[derive(Debug, Clone)]
pub struct IntegrationResult {
    pub times: Vec<f64>,
    pub states: Vec<OstrogradskyState>,
    pub energies: Vec<f64>,
    /// Step index at which the state stopped being finite (ghost blow-up is
    /// reported, not treated as an error).
    pub blow_up_step: Option<usize>,
}

impl IntegrationResult {
    pub fn max_energy_drift(&self) -> f64 {
        let h0 = self.energies[0];
        self.energies
            .iter()
            .map(|&h| (h - h0).abs())
            .fold(0.0, f64::max)
            / h0.abs().max(1.0)
    }
}

/// integrate: classical RK4 over `steps` steps of size `dt`.
pub fn integrate(
    state0: &OstrogradskyState,
    params: &PUParams,
    dt: f64,
    steps: usize,
) -> Result<IntegrationResult> {
    if !(dt > 0.0) {
        return Err(QplaError::Config(format!("step size must be positive, got {dt}")));
    }
    let mut s = *state0;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut energies = Vec::with_capacity(steps + 1);
    let mut blow_up_step = None;
    times.push(0.0);
    states.push(s);
    energies.push(ostro_hamiltonian(&s, params)?);
    for step in 1..=steps {
        let k1 = ostro_flow(&s, params)?;
        let k2 = ostro_flow(&advance(&s, &k1, dt / 2.0), params)?;
        let k3 = ostro_flow(&advance(&s, &k2, dt / 2.0), params)?;
        let k4 = ostro_flow(&advance(&s, &k3, dt), params)?;
        s = OstrogradskyState {
            q: s.q + dt / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q),
            y: s.y + dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
            p_q: s.p_q + dt / 6.0 * (k1.p_q + 2.0 * k2.p_q + 2.0 * k3.p_q + k4.p_q),
            p_y: s.p_y + dt / 6.0 * (k1.p_y + 2.0 * k2.p_y + 2.0 * k3.p_y + k4.p_y),
            multiplier: None,
        };
        if !s.is_finite() && blow_up_step.is_none() {
            blow_up_step = Some(step);
        }
        times.push(step as f64 * dt);
        states.push(s);
        energies.push(ostro_hamiltonian(&s, params)?);
        if blow_up_step.is_some() {
            break;
        }
    }
    Ok(IntegrationResult { times, states, energies, blow_up_step })
}

fn advance(s: &OstrogradskyState, ds: &OstrogradskyState, h: f64) -> OstrogradskyState {
    OstrogradskyState {
        q: s.q + h * ds.q,
        y: s.y + h * ds.y,
        p_q: s.p_q + h * ds.p_q,
        p_y: s.p_y + h * ds.p_y,
        multiplier: None,
    }
}

/// Residuals of the constraint chain.
#[derive(Debug, Clone, Copy)]
pub struct ConstraintResiduals {
    /// p_lambda = 0 (primary constraint).
    pub primary: f64,
    /// y - (p_q + lambda) = 0 (secondary constraint).
    pub secondary: f64,
    /// y - p_q = 0 (local-limit constraint surface).
    pub local_limit: f64,
    /// p_y itself, reported when the local-limit flag is set.
    pub p_y: Option<f64>,
}

/// constraint_residuals.
pub fn constraint_residuals(
    state: &OstrogradskyState,
    lambda: f64,
    local_limit: bool,
) -> ConstraintResiduals {
    let p_lambda = state.multiplier.map(|(_, p)| p).unwrap_or(0.0);
    ConstraintResiduals {
        primary: p_lambda,
        secondary: state.y - (state.p_q + lambda),
        local_limit: state.y - state.p_q,
        p_y: local_limit.then_some(state.p_y),
    }
}

/// harmonic_limit_hamiltonian: (p_q^2 + q^2) / 2.
pub fn harmonic_limit_hamiltonian(q: f64, p_q: f64) -> f64 {
    0.5 * (p_q * p_q + q * q)
}

/// Classical oscillation frequencies squared: roots of
/// r^2 W^2 - W + 1 = 0 in W = Omega^2.
pub fn pu_frequencies_squared(r: f64) -> Option<(f64, f64)> {
    if r == 0.0 || 1.0 - 4.0 * r * r < 0.0 {
        return None;
    }
    let disc = (1.0 - 4.0 * r * r).sqrt();
    let r2 = r * r;
    Some(((1.0 - disc) / (2.0 * r2), (1.0 + disc) / (2.0 * r2)))
}
