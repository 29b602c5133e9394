//! Operations shared by the CLI and the HTTP service. Both transports call
//! these with the same inputs, so their results agree byte for byte.

use std::collections::HashMap;
use std::sync::atomic::AtomicBool;
use std::sync::{Arc, Mutex};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crux_core::format::json::{route_to_json, wall_to_json};
use crux_core::format::serialize_document;
use crux_core::generator::{generate_route, GenerationConfig, GenerationReport};
use crux_core::grading::{GradeSet, Grader, GradingSettings, MembershipScore, TNormKind};
use crux_core::sim::{ascend, beta_success_probability, move_probabilities, sample_population};
use crux_core::style::vary_route;
use crux_core::{Beta, ClimberProfile, GradeLabel, Planner, Route, Wall};

use crate::config::Settings;
use crate::error::{EngineError, Kind};

#[derive(Debug, Clone, Serialize)]
pub struct BetaOutput {
    pub route: String,
    pub beta: Beta,
    pub success_probability: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GradeOutput {
    pub route: String,
    pub grade: GradeLabel,
    pub scores: Vec<MembershipScore>,
}

/// A route together with the wall it lives on, in the JSON object form.
#[derive(Debug, Clone, Serialize)]
pub struct RouteOutput {
    pub route: Value,
    pub wall: Value,
    pub crux: String,
}

impl RouteOutput {
    pub fn new(route: &Route, wall: &Wall) -> Self {
        RouteOutput {
            route: route_to_json(route),
            wall: wall_to_json(wall),
            crux: serialize_document(wall, std::slice::from_ref(route)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GenerateOutput {
    #[serde(flatten)]
    pub result: RouteOutput,
    pub beta: Beta,
    pub report: GenerationReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct SimulateOutput {
    pub route: String,
    pub trials: usize,
    pub successes: usize,
    pub frequency: f64,
    pub success_probability: f64,
    /// Binomial standard error of the frequency at `success_probability`.
    pub std_error: f64,
    /// Falls counted by the index of the failed move.
    pub falls: Vec<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct GradeOptions {
    pub tnorm: Option<TNormKind>,
    pub threshold: Option<f64>,
    pub seed: Option<u64>,
}

type GraderKey = (u64, TNormKind, u64);

pub struct Engine {
    settings: Settings,
    population: Vec<ClimberProfile>,
    graders: Mutex<HashMap<GraderKey, Arc<Grader>>>,
}

impl Engine {
    pub fn new(settings: Settings) -> Self {
        let population = sample_population(&settings.population.spec, settings.population.seed);
        Engine { settings, population, graders: Mutex::new(HashMap::new()) }
    }

    pub fn settings(&self) -> &Settings {
        &self.settings
    }

    /// Graders are kept per seed and settings so their outcome caches
    /// survive across requests.
    pub fn grader(&self, options: GradeOptions) -> Result<Arc<Grader>, EngineError> {
        let threshold = options.threshold.unwrap_or(self.settings.grading.threshold);
        if !(threshold > 0.0 && threshold < 1.0) {
            return Err(EngineError::new(Kind::Invalid, "RANGE", format!("threshold {threshold} must lie in (0, 1)")));
        }
        let settings = GradingSettings {
            tnorm: options.tnorm.unwrap_or(self.settings.grading.tnorm),
            threshold,
            ..self.settings.grading
        };
        let seed = options.seed.unwrap_or(0);
        let key = (seed, settings.tnorm, threshold.to_bits());
        let mut graders = self.graders.lock().expect("grader cache");
        let grader = graders
            .entry(key)
            .or_insert_with(|| Arc::new(Grader::new(self.population.clone(), settings, seed)));
        Ok(grader.clone())
    }

    pub fn beta(&self, route: &Route, wall: &Wall, climber: Option<&ClimberProfile>) -> Result<BetaOutput, EngineError> {
        let climber = climber.unwrap_or(&self.settings.climber);
        let model = &self.settings.grading.model;
        let beta = Planner::new(route, wall, climber, model)?.plan()?;
        let success_probability = beta_success_probability(&beta, wall, climber, model);
        Ok(BetaOutput { route: route.name.clone(), beta, success_probability })
    }

    pub fn grade(&self, route: &Route, wall: &Wall, corpus: &[GradeSet], options: GradeOptions) -> Result<GradeOutput, EngineError> {
        let assignment = self.grader(options)?.assign_grade(route, wall, corpus)?;
        Ok(GradeOutput { route: route.name.clone(), grade: assignment.grade, scores: assignment.scores })
    }

    pub fn vary(&self, route: &Route, wall: &Wall, intensity: f64, seed: u64) -> Result<RouteOutput, EngineError> {
        if !(0.0..=1.0).contains(&intensity) {
            return Err(EngineError::new(Kind::Invalid, "RANGE", format!("intensity {intensity} must lie in [0, 1]")));
        }
        let beta = self.beta(route, wall, None)?.beta;
        let (r, w) = vary_route(route, wall, &beta, intensity, seed);
        Ok(RouteOutput::new(&r, &w))
    }

    pub fn generate(
        &self,
        wall: &Wall,
        seed_route: Option<&Route>,
        config: &GenerationConfig,
        corpus: &[GradeSet],
        progress: Option<&mut dyn FnMut(usize, f64)>,
        cancel: Option<&AtomicBool>,
    ) -> Result<GenerateOutput, EngineError> {
        if config.target_style.is_some_and(|s| !s.is_distribution(1e-9)) {
            return Err(EngineError::new(Kind::Invalid, "RANGE", "target style weights must be non-negative and sum to 1"));
        }
        let grader = self.grader(GradeOptions { seed: Some(config.seed), ..Default::default() })?;
        let out = generate_route(wall, seed_route, config, corpus, &grader, progress, cancel)?;
        Ok(GenerateOutput { result: RouteOutput::new(&out.route, &out.wall), beta: out.beta, report: out.report })
    }

    pub fn simulate(&self, route: &Route, wall: &Wall, trials: usize, seed: u64) -> Result<SimulateOutput, EngineError> {
        let BetaOutput { beta, success_probability, .. } = self.beta(route, wall, None)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut falls = vec![0; beta.moves.len()];
        let mut successes = 0;
        let probs = move_probabilities(&beta, wall, &self.settings.climber, &self.settings.grading.model);
        for _ in 0..trials {
            let r = ascend(&probs, &mut rng);
            match r.fall_move_index {
                None => successes += 1,
                Some(i) => falls[i] += 1,
            }
        }
        let p = success_probability;
        Ok(SimulateOutput {
            route: route.name.clone(),
            trials,
            successes,
            frequency: if trials == 0 { 0.0 } else { successes as f64 / trials as f64 },
            success_probability: p,
            std_error: if trials == 0 { 0.0 } else { (p * (1.0 - p) / trials as f64).sqrt() },
            falls,
        })
    }
}
