//! Route variation driven by a Lorenz trajectory.
//!
//! Sample `i` of a seeded trajectory is paired with move `i` of the beta. Its
//! `(x, y)` components, scaled by the attractor's extent, give the direction
//! and size of a shift of that move's destination hold; its `z` component
//! decides whether the hold's type is swapped for the type of nearest nominal
//! difficulty. A hold reached by several moves is shifted only once.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lorenz::{lorenz_trajectory, LorenzParams, LorenzState};
use crate::model::{HoldType, Route, Wall};
use crate::planner::Beta;

/// Largest shift, in meters, at intensity 1.
pub const MAX_SHIFT: f64 = 0.5;
pub const DT: f64 = 0.01;
/// Steps discarded so the trajectory settles onto the attractor.
pub const BURN_IN: usize = 1000;
/// Steps between consecutive samples.
pub const STRIDE: usize = 25;

// Rough half-extents of the classic attractor.
const X_SCALE: f64 = 20.0;
const Y_SCALE: f64 = 27.0;
const Z_SCALE: f64 = 50.0;

/// The hand type whose nominal difficulty is closest to `t`'s. Footholds
/// keep their type.
pub fn nearest_type(t: HoldType) -> HoldType {
    if t == HoldType::Foothold {
        return t;
    }
    let d = t.nominal_difficulty();
    HoldType::ALL
        .into_iter()
        .filter(|&o| o != t && o != HoldType::Foothold)
        .min_by(|a, b| (a.nominal_difficulty() - d).abs().total_cmp(&(b.nominal_difficulty() - d).abs()))
        .unwrap_or(t)
}

fn samples(seed: u64, count: usize) -> Vec<LorenzState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial = LorenzState::new(
        rng.random_range(-10.0..10.0),
        rng.random_range(-10.0..10.0),
        rng.random_range(10.0..40.0),
    );
    let steps = BURN_IN + STRIDE * count;
    let t = lorenz_trajectory(initial, &LorenzParams::default(), DT, steps).expect("fixed step is stable");
    (0..count).map(|i| t[BURN_IN + STRIDE * i]).collect()
}

/// Varies `route` on a copy of `wall`. `beta` should be the route's planned
/// beta. `intensity` is clamped to [0, 1]; at 0 both are returned unchanged.
pub fn vary_route(route: &Route, wall: &Wall, beta: &Beta, intensity: f64, seed: u64) -> (Route, Wall) {
    let intensity = if intensity.is_nan() { 0.0 } else { intensity.clamp(0.0, 1.0) };
    let mut wall = wall.clone();
    if intensity == 0.0 || beta.moves.is_empty() {
        return (route.clone(), wall);
    }
    let reach = intensity * MAX_SHIFT;
    let swap_above = 1.0 - 0.5 * intensity;
    let mut done = HashSet::new();
    for (mv, s) in beta.moves.iter().zip(samples(seed, beta.moves.len())) {
        let Some(id) = mv.to.as_deref() else { continue };
        if !route.uses(id) || !done.insert(id.to_string()) {
            continue;
        }
        let (width, height) = (wall.width, wall.height);
        let Some(h) = wall.hold_mut(id) else { continue };
        let (ux, uy) = ((s.x / X_SCALE).clamp(-1.0, 1.0), (s.y / Y_SCALE).clamp(-1.0, 1.0));
        let scale = reach / ux.hypot(uy).max(1.0);
        // The wall is a box containing the original point, so clamping only
        // shortens the shift.
        h.x = (h.x + ux * scale).clamp(0.0, width);
        h.y = (h.y + uy * scale).clamp(0.0, height);
        if s.z / Z_SCALE > swap_above {
            let to = nearest_type(h.hold_type);
            let offset = h.difficulty - h.hold_type.nominal_difficulty();
            h.difficulty = (to.nominal_difficulty() + offset).clamp(0.0, 1.0);
            h.hold_type = to;
        }
    }
    (route.clone(), wall)
}
