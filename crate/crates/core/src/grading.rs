//! Grade assignment against a graded corpus.
//!
//! A route belongs to grade set S when both P(R|S), the chance of climbing R
//! for someone who has climbed S, and P(S|R), the chance of climbing the
//! routes of S for someone who has climbed R, are high. Both are estimated by
//! Monte Carlo over a sampled climber population and combined with a T-norm;
//! the grade with the largest conjunction wins.

use std::collections::HashMap;
use std::hash::{DefaultHasher, Hash, Hasher};
use std::sync::{Arc, Mutex};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::format::serialize_document;
use crate::grade::GradeLabel;
use crate::model::{ClimberProfile, Route, Wall};
use crate::planner::Planner;
use crate::sim::{ascend, move_probabilities, ModelConfig};
use crate::validate::{validate_route, ValidationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TNormKind {
    Product,
    #[default]
    Minimum,
    Lukasiewicz,
}

impl TNormKind {
    pub const ALL: [TNormKind; 3] = [TNormKind::Product, TNormKind::Minimum, TNormKind::Lukasiewicz];
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GradingError {
    #[error("DOMAIN: T-norm arguments ({0}, {1}) must lie in [0, 1]")]
    Domain(f64, f64),
    #[error("EMPTY_SET: grade set {0} has no routes")]
    EmptySet(GradeLabel),
    #[error("EMPTY_CORPUS: no grade sets to compare against")]
    EmptyCorpus,
    #[error("LOCKED: route `{0}` has a locked grade")]
    Locked(String),
    #[error("INVALID: route fails validation")]
    Invalid(ValidationReport),
}

impl GradingError {
    pub fn code(&self) -> &'static str {
        match self {
            GradingError::Domain(..) => "DOMAIN",
            GradingError::EmptySet(_) => "EMPTY_SET",
            GradingError::EmptyCorpus => "EMPTY_CORPUS",
            GradingError::Locked(_) => "LOCKED",
            GradingError::Invalid(_) => "INVALID",
        }
    }
}

pub fn tnorm(kind: TNormKind, a: f64, b: f64) -> Result<f64, GradingError> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) {
        return Err(GradingError::Domain(a, b));
    }
    Ok(match kind {
        TNormKind::Product => a * b,
        TNormKind::Minimum => a.min(b),
        // Subtracting from the larger argument first keeps T(1, x) = x exact.
        TNormKind::Lukasiewicz => ((a.max(b) - 1.0) + a.min(b)).max(0.0),
    })
}

/// Routes sharing one grade.
#[derive(Debug, Clone, PartialEq)]
pub struct GradeSet {
    pub label: GradeLabel,
    pub routes: Vec<(Route, Wall)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ScoreFlag {
    NoQualifiers,
    LowConfidence,
}

/// A Monte-Carlo estimate and how many climbers it averages over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub qualifiers: usize,
}

impl Estimate {
    pub fn no_qualifiers(&self) -> bool {
        self.qualifiers == 0
    }
}

/// One row of the audit table. `qualifiers` is the smaller of the two
/// conditioning groups: climbers who climbed the set and climbers who
/// climbed the route.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipScore {
    pub grade: GradeLabel,
    pub p_route_given_set: f64,
    pub p_set_given_route: f64,
    pub conjunction: f64,
    pub qualifiers: usize,
    pub flags: Vec<ScoreFlag>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradeAssignment {
    pub grade: GradeLabel,
    pub scores: Vec<MembershipScore>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GradingSettings {
    pub tnorm: TNormKind,
    /// What counts as a "high" probability, in (0, 1).
    pub threshold: f64,
    /// Conditioning groups smaller than this are flagged low-confidence.
    pub min_qualifiers: usize,
    /// Equal conjunctions resolve to the lower grade when set.
    pub prefer_lower: bool,
    pub model: ModelConfig,
}

impl Default for GradingSettings {
    fn default() -> Self {
        GradingSettings {
            tnorm: TNormKind::Minimum,
            threshold: 0.5,
            min_qualifiers: 30,
            prefer_lower: true,
            model: ModelConfig::default(),
        }
    }
}

/// What one climber does on one route: their success probability on their
/// own beta, and the outcome of one seeded attempt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Outcome {
    pub probability: f64,
    pub sent: bool,
}

/// Content hash of a route together with the geometry of its holds.
pub fn route_key(route: &Route, wall: &Wall) -> u64 {
    let holds = route.hold_ids.iter().filter_map(|id| wall.hold(id)).cloned().collect();
    let sub = Wall { holds, ..wall.clone() };
    let mut h = DefaultHasher::new();
    serialize_document(&sub, std::slice::from_ref(route)).hash(&mut h);
    h.finish()
}

/// Independent stream for (seed, climber, route).
fn stream(seed: u64, climber: usize, route: u64) -> ChaCha8Rng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&(climber as u64).to_le_bytes());
    bytes[16..24].copy_from_slice(&route.to_le_bytes());
    ChaCha8Rng::from_seed(bytes)
}

/// Grades routes against a fixed population. Per-climber outcomes on corpus
/// routes are cached by route content, so grading many routes against one
/// corpus plans each corpus route once per climber.
pub struct Grader {
    population: Vec<ClimberProfile>,
    settings: GradingSettings,
    seed: u64,
    cache: Mutex<HashMap<u64, Arc<[Outcome]>>>,
}

impl Grader {
    pub fn new(population: Vec<ClimberProfile>, settings: GradingSettings, seed: u64) -> Self {
        Grader { population, settings, seed, cache: Mutex::new(HashMap::new()) }
    }

    pub fn population(&self) -> &[ClimberProfile] {
        &self.population
    }

    pub fn settings(&self) -> &GradingSettings {
        &self.settings
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// A grader over the first `size` climbers, sharing nothing with `self`.
    pub fn truncated(&self, size: usize) -> Grader {
        let n = size.min(self.population.len());
        Grader::new(self.population[..n].to_vec(), self.settings, self.seed)
    }

    /// Outcomes of every climber on `route`, in population order.
    pub fn outcomes(&self, route: &Route, wall: &Wall) -> Vec<Outcome> {
        let key = route_key(route, wall);
        let model = &self.settings.model;
        self.population
            .iter()
            .enumerate()
            .map(|(i, c)| match Planner::new(route, wall, c, model).and_then(|p| p.plan()) {
                Ok(beta) => {
                    let probs = move_probabilities(&beta, wall, c, model);
                    let sent = ascend(&probs, &mut stream(self.seed, i, key)).success;
                    Outcome { probability: probs.iter().product(), sent }
                }
                Err(_) => Outcome { probability: 0.0, sent: false },
            })
            .collect()
    }

    fn cached(&self, route: &Route, wall: &Wall) -> Arc<[Outcome]> {
        let key = route_key(route, wall);
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let fresh: Arc<[Outcome]> = self.outcomes(route, wall).into();
        self.cache.lock().expect("cache lock").insert(key, fresh.clone());
        fresh
    }

    fn set_outcomes(&self, set: &GradeSet) -> Result<Vec<Arc<[Outcome]>>, GradingError> {
        if set.routes.is_empty() {
            return Err(GradingError::EmptySet(set.label));
        }
        Ok(set.routes.iter().map(|(r, w)| self.cached(r, w)).collect())
    }

    fn route_given_set(&self, route: &[Outcome], set: &[Arc<[Outcome]>]) -> Estimate {
        let need = self.settings.threshold * set.len() as f64;
        let (mut sum, mut n) = (0.0, 0);
        for (i, o) in route.iter().enumerate() {
            let sends = set.iter().filter(|s| s[i].sent).count();
            if sends as f64 >= need {
                sum += o.probability;
                n += 1;
            }
        }
        Estimate { value: if n == 0 { 0.0 } else { sum / n as f64 }, qualifiers: n }
    }

    fn set_given_route(&self, route: &[Outcome], set: &[Arc<[Outcome]>]) -> Estimate {
        let t = self.settings.threshold;
        let (mut sum, mut n) = (0.0, 0);
        for i in (0..route.len()).filter(|&i| route[i].sent) {
            let high = set.iter().filter(|s| s[i].probability >= t).count();
            sum += high as f64 / set.len() as f64;
            n += 1;
        }
        Estimate { value: if n == 0 { 0.0 } else { sum / n as f64 }, qualifiers: n }
    }

    pub fn p_route_given_set(&self, route: &Route, wall: &Wall, set: &GradeSet) -> Result<Estimate, GradingError> {
        let s = self.set_outcomes(set)?;
        Ok(self.route_given_set(&self.outcomes(route, wall), &s))
    }

    pub fn p_set_given_route(&self, route: &Route, wall: &Wall, set: &GradeSet) -> Result<Estimate, GradingError> {
        let s = self.set_outcomes(set)?;
        Ok(self.set_given_route(&self.outcomes(route, wall), &s))
    }

    fn score(&self, route: &[Outcome], set: &GradeSet) -> Result<MembershipScore, GradingError> {
        let s = self.set_outcomes(set)?;
        let a = self.route_given_set(route, &s);
        let b = self.set_given_route(route, &s);
        let qualifiers = a.qualifiers.min(b.qualifiers);
        let mut flags = Vec::new();
        if qualifiers == 0 {
            flags.push(ScoreFlag::NoQualifiers);
        }
        if qualifiers < self.settings.min_qualifiers {
            flags.push(ScoreFlag::LowConfidence);
        }
        Ok(MembershipScore {
            grade: set.label,
            p_route_given_set: a.value,
            p_set_given_route: b.value,
            conjunction: tnorm(self.settings.tnorm, a.value, b.value)?,
            qualifiers,
            flags,
        })
    }

    /// Scores `route` against every grade set and picks the largest
    /// conjunction. The score table is sorted by grade.
    pub fn assign_grade(&self, route: &Route, wall: &Wall, corpus: &[GradeSet]) -> Result<GradeAssignment, GradingError> {
        if route.grade_locked {
            return Err(GradingError::Locked(route.name.clone()));
        }
        if corpus.is_empty() {
            return Err(GradingError::EmptyCorpus);
        }
        let report = validate_route(route, wall);
        if !report.ok {
            return Err(GradingError::Invalid(report));
        }
        let outcomes = self.outcomes(route, wall);
        let mut scores = corpus
            .iter()
            .map(|set| self.score(&outcomes, set))
            .collect::<Result<Vec<_>, _>>()?;
        scores.sort_by(|a, b| a.grade.cmp(&b.grade));
        let mut best = &scores[0];
        for s in &scores[1..] {
            let better = if self.settings.prefer_lower {
                s.conjunction > best.conjunction
            } else {
                s.conjunction >= best.conjunction
            };
            if better {
                best = s;
            }
        }
        Ok(GradeAssignment { grade: best.grade, scores })
    }
}

pub fn p_route_given_set(
    route: &Route,
    wall: &Wall,
    set: &GradeSet,
    population: &[ClimberProfile],
    threshold: f64,
    seed: u64,
) -> Result<Estimate, GradingError> {
    let settings = GradingSettings { threshold, ..Default::default() };
    Grader::new(population.to_vec(), settings, seed).p_route_given_set(route, wall, set)
}

pub fn p_set_given_route(
    route: &Route,
    wall: &Wall,
    set: &GradeSet,
    population: &[ClimberProfile],
    threshold: f64,
    seed: u64,
) -> Result<Estimate, GradingError> {
    let settings = GradingSettings { threshold, ..Default::default() };
    Grader::new(population.to_vec(), settings, seed).p_set_given_route(route, wall, set)
}

pub fn assign_grade(
    route: &Route,
    wall: &Wall,
    corpus: &[GradeSet],
    population: &[ClimberProfile],
    tnorm: TNormKind,
    threshold: f64,
    seed: u64,
) -> Result<GradeAssignment, GradingError> {
    let settings = GradingSettings { tnorm, threshold, ..Default::default() };
    Grader::new(population.to_vec(), settings, seed).assign_grade(route, wall, corpus)
}

pub const DEFAULT_LOCK_THRESHOLD: u32 = 50;

/// Adds community exposure to a route; the grade locks once exposure
/// reaches `lock_threshold`. A locked grade stays locked.
pub fn record_ascent_and_maybe_lock(route: &Route, increment: u32, lock_threshold: u32) -> Route {
    let mut out = route.clone();
    out.exposure_count = out.exposure_count.saturating_add(increment);
    if out.exposure_count >= lock_threshold {
        out.grade_locked = true;
    }
    out
}

/// Groups routes that carry a grade into grade sets, ordered by grade.
/// Routes without a grade are skipped.
pub fn grade_sets(routes: impl IntoIterator<Item = (Route, Wall)>) -> Vec<GradeSet> {
    let mut by: HashMap<GradeLabel, Vec<(Route, Wall)>> = HashMap::new();
    for (r, w) in routes {
        if let Some(g) = r.assigned_grade {
            by.entry(g).or_default().push((r, w));
        }
    }
    let mut sets: Vec<GradeSet> = by.into_iter().map(|(label, routes)| GradeSet { label, routes }).collect();
    sets.sort_by(|a, b| a.label.cmp(&b.label));
    sets
}
