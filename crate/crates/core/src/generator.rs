//! Route generation by simulated annealing over hold edits.
//!
//! Every candidate is re-planned, so the objective always scores the beta a
//! climber would actually use.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grade::{grade_step_distance, GradeLabel};
use crate::grading::{route_key, GradeSet, Grader, GradingError};
use crate::model::{ClimberProfile, Hold, HoldType, Roles, Route, StyleVector, Wall};
use crate::planner::{Beta, PlanError, Planner};
use crate::sim::{representative_climber, ModelConfig};
use crate::style::{key_moves, move_types, reward, RewardWeights};
use crate::validate::{validate_route, validate_wall};

/// Margin reported when no alternative beta avoids a key move.
pub const NO_ALTERNATIVE: f64 = 1e6;
/// Objective of a candidate nobody can climb.
pub const UNREACHABLE_PENALTY: f64 = 1e6;
pub const MAX_SHIFT: f64 = 0.4;
pub const EDIT_RETRIES: usize = 16;
pub const START_ATTEMPTS: usize = 1000;
pub const KEY_MOVES: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenerationConfig {
    pub target_grade: GradeLabel,
    pub target_style: Option<StyleVector>,
    pub max_iterations: usize,
    pub initial_temperature: f64,
    pub cooling_rate: f64,
    pub w_grade: f64,
    pub w_reward: f64,
    pub w_necessity: f64,
    pub seed: u64,
    pub hold_budget: usize,
    /// Climbers used to grade candidates inside the loop; the result is
    /// re-graded with the full population.
    pub grading_population: usize,
    pub reward_weights: RewardWeights,
    pub route_name: String,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        GenerationConfig {
            target_grade: GradeLabel::new(10, Some(crate::grade::Letter::A)).expect("valid grade"),
            target_style: None,
            max_iterations: 2000,
            initial_temperature: 1.0,
            cooling_rate: 0.997,
            w_grade: 1.0,
            w_reward: 0.5,
            w_necessity: 0.5,
            seed: 0,
            hold_budget: 12,
            grading_population: 200,
            reward_weights: RewardWeights::default(),
            route_name: "generated".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerationError {
    #[error("NO_VALID_START: no climbable initial route in {START_ATTEMPTS} attempts")]
    NoValidStart,
    #[error("BAD_CONFIG: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Grading(#[from] GradingError),
}

impl GenerationError {
    pub fn code(&self) -> &'static str {
        match self {
            GenerationError::NoValidStart => "NO_VALID_START",
            GenerationError::BadConfig(_) => "BAD_CONFIG",
            GenerationError::Grading(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationReport {
    pub iterations: usize,
    pub best_objective: f64,
    /// Best objective so far, after each iteration.
    pub objective_trace: Vec<f64>,
    /// Objective of the chain's current route, after each iteration.
    pub current_trace: Vec<f64>,
    /// Grade from the full population.
    pub achieved_grade: GradeLabel,
    /// Grade from the in-loop population.
    pub in_loop_grade: GradeLabel,
    pub achieved_reward: f64,
    pub necessitation_margin: f64,
    pub accepted: usize,
    pub canceled: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub route: Route,
    pub wall: Wall,
    pub beta: Beta,
    pub report: GenerationReport,
}

/// Smallest extra cost of a beta that avoids one of the key moves of
/// `beta`: the `KEY_MOVES` moves contributing most to its reward.
pub fn necessitation_margin(
    route: &Route,
    wall: &Wall,
    beta: &Beta,
    climber: &ClimberProfile,
    model: &ModelConfig,
    weights: &RewardWeights,
) -> f64 {
    let Ok(planner) = Planner::new(route, wall, climber, model) else { return NO_ALTERNATIVE };
    let keys = key_moves(&move_types(beta), None, weights, KEY_MOVES);
    keys.iter()
        .map(|&i| {
            let mv = &beta.moves[i];
            match planner.plan_without(mv.limb, mv.to.as_deref()) {
                Ok(alt) => (alt.total_cost - beta.total_cost).max(0.0),
                Err(_) => NO_ALTERNATIVE,
            }
        })
        .fold(NO_ALTERNATIVE, f64::min)
}

fn softplus(x: f64) -> f64 {
    if x > 30.0 {
        x
    } else {
        x.exp().ln_1p()
    }
}

/// Terms of the objective for one candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub objective: f64,
    pub grade: Option<GradeLabel>,
    pub reward: f64,
    pub margin: f64,
    pub beta: Option<Beta>,
}

/// Scores candidates against a target. Lower is better.
pub struct Objective<'a> {
    pub config: &'a GenerationConfig,
    pub corpus: &'a [GradeSet],
    pub grader: &'a Grader,
    pub climber: ClimberProfile,
}

impl<'a> Objective<'a> {
    pub fn new(config: &'a GenerationConfig, corpus: &'a [GradeSet], grader: &'a Grader) -> Self {
        Objective { config, corpus, grader, climber: representative_climber(grader.population()) }
    }

    pub fn evaluate(&self, route: &Route, wall: &Wall) -> Result<Evaluation, GradingError> {
        let model = &self.grader.settings().model;
        let unreachable = Evaluation { objective: UNREACHABLE_PENALTY, grade: None, reward: 0.0, margin: 0.0, beta: None };
        let beta = match Planner::new(route, wall, &self.climber, model).and_then(|p| p.plan()) {
            Ok(b) => b,
            Err(PlanError::Invalid(r)) => return Err(GradingError::Invalid(r)),
            Err(_) => return Ok(unreachable),
        };
        let c = self.config;
        let mut unlocked = route.clone();
        unlocked.grade_locked = false;
        let grade = self.grader.assign_grade(&unlocked, wall, self.corpus)?.grade;
        let r = reward(&beta, c.target_style.as_ref(), &[], &c.reward_weights);
        let margin = if c.w_necessity > 0.0 {
            necessitation_margin(route, wall, &beta, &self.climber, model, &c.reward_weights)
        } else {
            NO_ALTERNATIVE
        };
        let objective = c.w_grade * grade_step_distance(grade, c.target_grade) as f64
            + c.w_reward * (1.0 - r)
            + c.w_necessity * softplus(-margin);
        Ok(Evaluation { objective, grade: Some(grade), reward: r, margin, beta: Some(beta) })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Edit {
    Move,
    Swap,
    Add,
    Remove,
}

fn random_hand_type<R: Rng>(rng: &mut R) -> HoldType {
    const HAND: [HoldType; 6] =
        [HoldType::Jug, HoldType::Crimp, HoldType::Sloper, HoldType::Pinch, HoldType::Pocket, HoldType::Volume];
    HAND[rng.random_range(0..HAND.len())]
}

fn typed_difficulty<R: Rng>(t: HoldType, rng: &mut R) -> f64 {
    (t.nominal_difficulty() + rng.random_range(-0.1..0.1)).clamp(0.0, 1.0)
}

fn disc<R: Rng>(rng: &mut R, radius: f64) -> (f64, f64) {
    let r = radius * rng.random::<f64>().sqrt();
    let a = rng.random_range(0.0..std::f64::consts::TAU);
    (r * a.cos(), r * a.sin())
}

fn is_valid(route: &Route, wall: &Wall) -> bool {
    validate_route(route, wall).ok && validate_wall(wall).ok
}

/// Proposes one random edit of `route`. Start and finish holds never move
/// or disappear. Gives back the input unchanged after `EDIT_RETRIES`
/// invalid attempts.
pub fn neighbor<R: Rng>(route: &Route, wall: &Wall, hold_budget: usize, reach: f64, rng: &mut R) -> (Route, Wall) {
    let free: Vec<&String> = route.hold_ids.iter().filter(|id| !route.is_anchor(id)).collect();
    let mut kinds = vec![Edit::Swap];
    if !free.is_empty() {
        kinds.push(Edit::Move);
        kinds.push(Edit::Remove);
    }
    if route.hold_ids.len() < hold_budget {
        kinds.push(Edit::Add);
    }
    for _ in 0..EDIT_RETRIES {
        let mut r = route.clone();
        let mut w = wall.clone();
        match kinds[rng.random_range(0..kinds.len())] {
            Edit::Move => {
                let id = free[rng.random_range(0..free.len())];
                let (dx, dy) = disc(rng, MAX_SHIFT);
                let h = w.hold_mut(id).expect("route hold on wall");
                h.x = (h.x + dx).clamp(0.0, wall.width);
                h.y = (h.y + dy).clamp(0.0, wall.height);
            }
            Edit::Swap => {
                let id = &route.hold_ids[rng.random_range(0..route.hold_ids.len())];
                let h = w.hold_mut(id).expect("route hold on wall");
                let to = if h.hold_type != HoldType::Foothold && !route.is_anchor(id) && rng.random_bool(1.0 / 7.0) {
                    HoldType::Foothold
                } else {
                    random_hand_type(rng)
                };
                if to == h.hold_type {
                    continue;
                }
                h.roles = match (h.hold_type, to) {
                    (_, HoldType::Foothold) => Roles::FOOT,
                    (HoldType::Foothold, _) => Roles::BOTH,
                    _ => h.roles,
                };
                h.hold_type = to;
                h.difficulty = typed_difficulty(to, rng);
            }
            Edit::Add => {
                let near = &route.hold_ids[rng.random_range(0..route.hold_ids.len())];
                let base = wall.hold(near).expect("route hold on wall");
                let (dx, dy) = disc(rng, reach);
                let foothold = rng.random_bool(0.25);
                let hold_type = if foothold { HoldType::Foothold } else { random_hand_type(rng) };
                let id = w.fresh_hold_id("g");
                w.holds.push(Hold {
                    id: id.clone(),
                    x: (base.x + dx).clamp(0.0, wall.width),
                    y: (base.y + dy).clamp(0.0, wall.height),
                    hold_type,
                    difficulty: typed_difficulty(hold_type, rng),
                    roles: if foothold { Roles::FOOT } else { Roles::BOTH },
                    orientation: 0.0,
                });
                r.hold_ids.push(id);
            }
            Edit::Remove => {
                let id = free[rng.random_range(0..free.len())].clone();
                r.hold_ids.retain(|h| *h != id);
                w.holds.retain(|h| h.id != id);
            }
        }
        if is_valid(&r, &w) {
            return (r, w);
        }
    }
    (route.clone(), wall.clone())
}

/// A random route of `budget` holds rising up the middle of the wall.
fn random_start<R: Rng>(wall: &Wall, budget: usize, name: &str, rng: &mut R) -> (Route, Wall) {
    let mut w = wall.clone();
    let n = budget.max(2);
    let (lo, hi) = (0.8_f64.min(wall.height * 0.2), (wall.height - 0.4).max(wall.height * 0.6));
    let mut ids = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        let foothold = i > 0 && i + 1 < n && rng.random_bool(0.25);
        let hold_type = if foothold { HoldType::Foothold } else { random_hand_type(rng) };
        let id = w.fresh_hold_id("g");
        let y = if foothold { lo + (hi - lo) * t - 0.6 } else { lo + (hi - lo) * t };
        w.holds.push(Hold {
            id: id.clone(),
            x: (wall.width / 2.0 + rng.random_range(-0.6..0.6)).clamp(0.0, wall.width),
            y: (y + rng.random_range(-0.15..0.15)).clamp(0.0, wall.height),
            hold_type,
            difficulty: typed_difficulty(hold_type, rng),
            roles: if foothold { Roles::FOOT } else { Roles::BOTH },
            orientation: 0.0,
        });
        ids.push(id);
    }
    let start = ids[0].clone();
    let finish = ids[n - 1].clone();
    (Route::new(name, ids, vec![start], finish), w)
}

/// Progress of a run: iteration count and best objective so far.
pub type Progress<'a> = &'a mut dyn FnMut(usize, f64);

/// Anneals from `seed_route` (or a random climbable route) toward the
/// configured target. Deterministic in the inputs and `config.seed`.
/// Setting `cancel` stops the run and returns the best route so far.
pub fn generate_route(
    wall: &Wall,
    seed_route: Option<&Route>,
    config: &GenerationConfig,
    corpus: &[GradeSet],
    grader: &Grader,
    progress: Option<Progress>,
    cancel: Option<&AtomicBool>,
) -> Result<Generated, GenerationError> {
    if !(config.cooling_rate > 0.0 && config.cooling_rate < 1.0) {
        return Err(GenerationError::BadConfig(format!("cooling rate {} outside (0, 1)", config.cooling_rate)));
    }
    if config.hold_budget < 2 {
        return Err(GenerationError::BadConfig(format!("hold budget {} below 2", config.hold_budget)));
    }
    if corpus.is_empty() {
        return Err(GradingError::EmptyCorpus.into());
    }
    let mut progress = progress;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let in_loop = grader.truncated(config.grading_population.max(1));
    let objective = Objective::new(config, corpus, &in_loop);
    let reach = objective.climber.arm_span * 0.75;

    let mut memo: HashMap<u64, Evaluation> = HashMap::new();
    let mut eval = |r: &Route, w: &Wall| -> Result<Evaluation, GradingError> {
        let key = route_key(r, w);
        if let Some(e) = memo.get(&key) {
            return Ok(e.clone());
        }
        let e = objective.evaluate(r, w)?;
        memo.insert(key, e.clone());
        Ok(e)
    };

    let (mut current, mut current_wall, mut current_eval) = match seed_route {
        Some(r) => {
            let report = validate_route(r, wall);
            if !report.ok {
                return Err(GradingError::Invalid(report).into());
            }
            let e = eval(r, wall)?;
            (r.clone(), wall.clone(), e)
        }
        None => {
            let mut found = None;
            for _ in 0..START_ATTEMPTS {
                let (r, w) = random_start(wall, config.hold_budget, &config.route_name, &mut rng);
                if !is_valid(&r, &w) {
                    continue;
                }
                let e = eval(&r, &w)?;
                if e.beta.is_some() {
                    found = Some((r, w, e));
                    break;
                }
            }
            found.ok_or(GenerationError::NoValidStart)?
        }
    };

    let mut best = (current.clone(), current_wall.clone(), current_eval.clone());
    let mut trace = Vec::with_capacity(config.max_iterations);
    let mut current_trace = Vec::with_capacity(config.max_iterations);
    let mut temperature = config.initial_temperature.max(0.0);
    let mut accepted = 0;
    let mut canceled = false;
    for it in 0..config.max_iterations {
        if cancel.is_some_and(|c| c.load(Ordering::Relaxed)) {
            canceled = true;
            break;
        }
        let (r, w) = neighbor(&current, &current_wall, config.hold_budget, reach, &mut rng);
        let e = eval(&r, &w)?;
        let delta = e.objective - current_eval.objective;
        let u: f64 = rng.random();
        let accept = delta <= 0.0 || (temperature > 0.0 && u < (-delta / temperature).exp());
        if accept {
            accepted += 1;
            if e.objective < best.2.objective {
                best = (r.clone(), w.clone(), e.clone());
            }
            current = r;
            current_wall = w;
            current_eval = e;
        }
        trace.push(best.2.objective);
        current_trace.push(current_eval.objective);
        temperature *= config.cooling_rate;
        if let Some(p) = progress.as_mut() {
            p(it + 1, best.2.objective);
        }
    }

    let (route, wall_out, e) = best;
    let model = &grader.settings().model;
    let climber = representative_climber(grader.population());
    let beta = match Planner::new(&route, &wall_out, &climber, model).and_then(|p| p.plan()) {
        Ok(b) => b,
        Err(_) => e.beta.clone().unwrap_or(Beta { states: vec![], moves: vec![], total_cost: f64::INFINITY }),
    };
    let mut unlocked = route.clone();
    unlocked.grade_locked = false;
    let achieved = grader.assign_grade(&unlocked, &wall_out, corpus)?.grade;
    let margin = necessitation_margin(&route, &wall_out, &beta, &climber, model, &config.reward_weights);
    let report = GenerationReport {
        iterations: trace.len(),
        best_objective: e.objective,
        objective_trace: trace,
        current_trace,
        achieved_grade: achieved,
        in_loop_grade: e.grade.unwrap_or(achieved),
        achieved_reward: reward(&beta, config.target_style.as_ref(), &[], &config.reward_weights),
        necessitation_margin: margin,
        accepted,
        canceled,
        seed: config.seed,
    };
    Ok(Generated { route, wall: wall_out, beta, report })
}
