//! Lorenz system integrated with classical fourth-order Runge-Kutta.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest step accepted by [`lorenz_trajectory`].
pub const MAX_DT: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorenzParams {
    pub sigma: f64,
    pub rho: f64,
    pub beta: f64,
}

impl Default for LorenzParams {
    fn default() -> Self {
        LorenzParams { sigma: 10.0, rho: 28.0, beta: 8.0 / 3.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorenzState {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl LorenzState {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        LorenzState { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &LorenzState) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    fn offset(&self, d: &LorenzState, h: f64) -> LorenzState {
        LorenzState::new(self.x + h * d.x, self.y + h * d.y, self.z + h * d.z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum LorenzError {
    #[error("DT_TOO_LARGE: step {0} exceeds {MAX_DT}")]
    DtTooLarge(f64),
    #[error("step must be positive and finite, got {0}")]
    BadDt(f64),
}

impl LorenzError {
    pub fn code(&self) -> &'static str {
        match self {
            LorenzError::DtTooLarge(_) => "DT_TOO_LARGE",
            LorenzError::BadDt(_) => "BAD_DT",
        }
    }
}

pub fn derivative(s: &LorenzState, p: &LorenzParams) -> LorenzState {
    LorenzState::new(p.sigma * (s.y - s.x), s.x * (p.rho - s.z) - s.y, s.x * s.y - p.beta * s.z)
}

pub fn rk4_step(s: &LorenzState, p: &LorenzParams, dt: f64) -> LorenzState {
    let k1 = derivative(s, p);
    let k2 = derivative(&s.offset(&k1, dt / 2.0), p);
    let k3 = derivative(&s.offset(&k2, dt / 2.0), p);
    let k4 = derivative(&s.offset(&k3, dt), p);
    LorenzState::new(
        s.x + dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x),
        s.y + dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y),
        s.z + dt / 6.0 * (k1.z + 2.0 * k2.z + 2.0 * k3.z + k4.z),
    )
}

/// The initial state followed by `steps` integration steps.
pub fn lorenz_trajectory(
    initial: LorenzState,
    params: &LorenzParams,
    dt: f64,
    steps: usize,
) -> Result<Vec<LorenzState>, LorenzError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(LorenzError::BadDt(dt));
    }
    if dt > MAX_DT {
        return Err(LorenzError::DtTooLarge(dt));
    }
    let mut out = Vec::with_capacity(steps + 1);
    let mut s = initial;
    out.push(s);
    for _ in 0..steps {
        s = rk4_step(&s, params, dt);
        out.push(s);
    }
    Ok(out)
}
