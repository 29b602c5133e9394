//! Success model for single moves and whole routes, the fear penalty, and
//! seeded climber populations for Monte-Carlo grading.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::model::{ClimberProfile, MoveType, Route, StyleVector, Wall};
use crate::planner::{Beta, BodyState, Limb, Move, Planner};

/// Tunables of the success model and the planner's cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    /// Slope of the logistic link.
    pub kappa: f64,
    /// Weight of the exposure-deficit term, in [0, 1].
    pub exposure_weight: f64,
    /// Effort weight on normalized move distance in the planner cost.
    pub lambda_effort: f64,
    /// Added difficulty of a hand move per dangling foot.
    pub unsupported_foot_penalty: f64,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            kappa: 4.0,
            exposure_weight: 0.25,
            lambda_effort: 0.1,
            unsupported_foot_penalty: 0.25,
        }
    }
}

pub fn logistic(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

/// `-ln(logistic(z))`, stable for large |z|.
pub fn neg_ln_logistic(z: f64) -> f64 {
    if z > 0.0 {
        (-z).exp().ln_1p()
    } else {
        -z + z.exp().ln_1p()
    }
}

/// Fear term for a body whose center of mass sits at `com_y`.
pub fn fear_penalty_at(wall: &Wall, climber: &ClimberProfile, com_y: f64) -> f64 {
    if climber.fear_sensitivity == 0.0 {
        return 0.0;
    }
    let overhang = (wall.panel_angle_at(com_y) - 90.0).max(0.0) / 90.0;
    if overhang == 0.0 {
        return 0.0;
    }
    climber.fear_sensitivity * overhang * (com_y / wall.height).max(0.0)
}

pub fn fear_penalty(_mv: &Move, state: &BodyState, wall: &Wall, climber: &ClimberProfile) -> f64 {
    fear_penalty_at(wall, climber, state.com_y)
}

/// The inputs of one move's success probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveFactors {
    /// Difficulty of the destination hold, 0 for a foot let go.
    pub hold_difficulty: f64,
    pub distance: f64,
    pub move_type: MoveType,
    /// Dangling feet when a hand moves; always 0 for foot moves.
    pub unsupported_feet: u8,
    pub fear: f64,
}

/// Per-type exposure deficit: positive for under-practised move types.
pub fn exposure_terms(exposure: &StyleVector, weight: f64) -> [f64; MoveType::COUNT] {
    let n = MoveType::COUNT as f64;
    let mut out = [0.0; MoveType::COUNT];
    for (o, e) in out.iter_mut().zip(exposure.0.iter()) {
        *o = weight * (1.0 - n * e);
    }
    out
}

pub fn effective_difficulty(
    f: &MoveFactors,
    climber: &ClimberProfile,
    config: &ModelConfig,
    exposure_term: f64,
) -> f64 {
    let raw = f.hold_difficulty
        + 0.5 * (f.distance / climber.arm_span)
        + exposure_term
        + config.unsupported_foot_penalty * f64::from(f.unsupported_feet);
    raw.max(f.hold_difficulty)
}

/// Logit of the move's success probability: `kappa * (ability - d_eff - fear)`.
pub fn success_logit(
    f: &MoveFactors,
    climber: &ClimberProfile,
    config: &ModelConfig,
    exposure_term: f64,
) -> f64 {
    config.kappa * (climber.ability - effective_difficulty(f, climber, config, exposure_term) - f.fear)
}

pub(crate) fn factors_of(mv: &Move, state: &BodyState, wall: &Wall, climber: &ClimberProfile) -> MoveFactors {
    let hold_difficulty = mv
        .to
        .as_deref()
        .and_then(|id| wall.hold(id))
        .map_or(0.0, |h| h.difficulty);
    let unsupported_feet = if mv.limb.is_hand() {
        u8::from(state.lf.is_none()) + u8::from(state.rf.is_none())
    } else {
        0
    };
    MoveFactors {
        hold_difficulty,
        distance: mv.distance,
        move_type: mv.move_type,
        unsupported_feet,
        fear: fear_penalty_at(wall, climber, state.com_y),
    }
}

pub fn move_success_probability_with(
    mv: &Move,
    state: &BodyState,
    wall: &Wall,
    climber: &ClimberProfile,
    config: &ModelConfig,
) -> f64 {
    let f = factors_of(mv, state, wall, climber);
    let term = exposure_terms(&climber.exposure, config.exposure_weight)[f.move_type as usize];
    logistic(success_logit(&f, climber, config, term))
}

pub fn move_success_probability(
    mv: &Move,
    state: &BodyState,
    wall: &Wall,
    climber: &ClimberProfile,
    exposure_weight: f64,
) -> f64 {
    let config = ModelConfig { exposure_weight, ..ModelConfig::default() };
    move_success_probability_with(mv, state, wall, climber, &config)
}

/// Product of per-move success probabilities along a beta.
pub fn beta_success_probability(
    beta: &Beta,
    wall: &Wall,
    climber: &ClimberProfile,
    config: &ModelConfig,
) -> f64 {
    move_probabilities(beta, wall, climber, config).iter().product()
}

pub fn move_probabilities(beta: &Beta, wall: &Wall, climber: &ClimberProfile, config: &ModelConfig) -> Vec<f64> {
    beta.moves
        .iter()
        .zip(&beta.states)
        .map(|(mv, state)| move_success_probability_with(mv, state, wall, climber, config))
        .collect()
}

/// Success probability of the climber on their own least-resistance beta;
/// 0 when the route cannot be climbed at all.
pub fn route_success_probability(
    route: &Route,
    wall: &Wall,
    climber: &ClimberProfile,
    config: &ModelConfig,
) -> f64 {
    match Planner::new(route, wall, climber, config).and_then(|p| p.plan()) {
        Ok(beta) => beta_success_probability(&beta, wall, climber, config),
        Err(_) => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PopulationSpec {
    pub size: usize,
    pub ability_mean: f64,
    pub ability_std: f64,
    pub height_mean: f64,
    pub height_std: f64,
    pub fear_mean: f64,
    pub exposure_skew: f64,
}

impl Default for PopulationSpec {
    fn default() -> Self {
        PopulationSpec {
            size: 2000,
            ability_mean: 1.4,
            ability_std: 0.5,
            height_mean: 1.75,
            height_std: 0.07,
            fear_mean: 0.5,
            exposure_skew: 0.0,
        }
    }
}

/// Shortest climber the sampler will produce.
const MIN_HEIGHT: f64 = 1.2;

/// Draws `spec.size` climbers. Deterministic in `(spec, seed)`.
pub fn sample_population(spec: &PopulationSpec, seed: u64) -> Vec<ClimberProfile> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ability = Normal::new(spec.ability_mean, spec.ability_std.max(0.0)).expect("finite ability");
    let height = Normal::new(spec.height_mean, spec.height_std.max(0.0)).expect("finite height");
    let skew = spec.exposure_skew.clamp(0.0, 1.0);
    (0..spec.size)
        .map(|_| {
            let a = ability.sample(&mut rng);
            let h = height.sample(&mut rng).max(MIN_HEIGHT.min(spec.height_mean));
            let favourite = MoveType::ALL[rng.random_range(0..MoveType::COUNT)];
            let mut exposure = StyleVector::uniform();
            if skew > 0.0 {
                let hot = StyleVector::one_hot(favourite);
                for (e, o) in exposure.0.iter_mut().zip(hot.0) {
                    *e = (1.0 - skew) * *e + skew * o;
                }
            }
            ClimberProfile {
                ability: a,
                height: h,
                arm_span: h,
                fear_sensitivity: spec.fear_mean.max(0.0),
                exposure,
            }
        })
        .collect()
}

/// Mean profile of a population, used where one representative climber
/// stands in for everyone.
pub fn representative_climber(population: &[ClimberProfile]) -> ClimberProfile {
    if population.is_empty() {
        return ClimberProfile::default();
    }
    let n = population.len() as f64;
    let mut exposure = [0.0; MoveType::COUNT];
    for c in population {
        for (e, v) in exposure.iter_mut().zip(c.exposure.0) {
            *e += v / n;
        }
    }
    ClimberProfile {
        ability: population.iter().map(|c| c.ability).sum::<f64>() / n,
        height: population.iter().map(|c| c.height).sum::<f64>() / n,
        arm_span: population.iter().map(|c| c.arm_span).sum::<f64>() / n,
        fear_sensitivity: population.iter().map(|c| c.fear_sensitivity).sum::<f64>() / n,
        exposure: StyleVector(exposure),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AscentResult {
    pub success: bool,
    pub fall_move_index: Option<usize>,
}

impl AscentResult {
    pub const SENT: AscentResult = AscentResult { success: true, fall_move_index: None };

    pub fn fell_at(i: usize) -> Self {
        AscentResult { success: false, fall_move_index: Some(i) }
    }
}

/// One Bernoulli trial per move; the first failure ends the attempt.
pub fn ascend<R: Rng + ?Sized>(move_probabilities: &[f64], rng: &mut R) -> AscentResult {
    for (i, p) in move_probabilities.iter().enumerate() {
        let u: f64 = rng.random();
        if u >= *p {
            return AscentResult::fell_at(i);
        }
    }
    AscentResult::SENT
}

pub fn simulate_ascent<R: Rng + ?Sized>(
    route: &Route,
    wall: &Wall,
    climber: &ClimberProfile,
    config: &ModelConfig,
    rng: &mut R,
) -> AscentResult {
    match Planner::new(route, wall, climber, config).and_then(|p| p.plan()) {
        Ok(beta) => ascend(&move_probabilities(&beta, wall, climber, config), rng),
        Err(_) => AscentResult::fell_at(0),
    }
}

impl Limb {
    pub fn is_hand(self) -> bool {
        matches!(self, Limb::LH | Limb::RH)
    }
}
