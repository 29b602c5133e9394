//! Beta prediction: least-cost paths over four-limb body states.
//!
//! A body state assigns each hand to a hand-capable route hold and each foot
//! to a foot-capable route hold or to nothing (dangling). A move relocates
//! exactly one limb. The cost of a move is the negative log of its success
//! probability plus an effort term proportional to its length, so the
//! minimum-cost path is the climber's path of least resistance.
//!
//! [`Planner`] holds the per-(route, wall, climber) tables; [`Planner::plan`]
//! runs A* with an admissible per-hand bound, [`Planner::greedy`] is the
//! myopic baseline and [`Planner::brute_force`] the exhaustive test oracle.

mod oracle;
pub use oracle::{MAX_HOLDS, MAX_MOVES};
mod search;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{reach_limit, ClimberProfile, Hold, MoveType, ReachLimit, Route, Wall};
use crate::sim::{exposure_terms, fear_penalty_at, neg_ln_logistic, success_logit, ModelConfig, MoveFactors};
use crate::style::classify::{classify, LimbView};
use crate::validate::{validate_route, ValidationReport};

/// Dangling feet hang this fraction of body height below the lower hand.
const DANGLE_DROP: f64 = 0.6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Limb {
    LH,
    RH,
    LF,
    RF,
}

impl Limb {
    pub const ALL: [Limb; 4] = [Limb::LH, Limb::RH, Limb::LF, Limb::RF];

    pub fn other(self) -> Limb {
        match self {
            Limb::LH => Limb::RH,
            Limb::RH => Limb::LH,
            Limb::LF => Limb::RF,
            Limb::RF => Limb::LF,
        }
    }
}

impl fmt::Display for Limb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Limb::LH => "LH",
            Limb::RH => "RH",
            Limb::LF => "LF",
            Limb::RF => "RF",
        })
    }
}

/// Where every limb is. Feet set to `None` are dangling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyState {
    #[serde(rename = "LH")]
    pub lh: String,
    #[serde(rename = "RH")]
    pub rh: String,
    #[serde(rename = "LF")]
    pub lf: Option<String>,
    #[serde(rename = "RF")]
    pub rf: Option<String>,
    pub com_y: f64,
}

impl BodyState {
    pub fn limb(&self, limb: Limb) -> Option<&str> {
        match limb {
            Limb::LH => Some(&self.lh),
            Limb::RH => Some(&self.rh),
            Limb::LF => self.lf.as_deref(),
            Limb::RF => self.rf.as_deref(),
        }
    }

    pub fn holds_used(&self) -> impl Iterator<Item = &str> {
        Limb::ALL.into_iter().filter_map(|l| self.limb(l))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Move {
    pub limb: Limb,
    pub from: Option<String>,
    pub to: Option<String>,
    pub distance: f64,
    pub move_type: MoveType,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Beta {
    pub states: Vec<BodyState>,
    pub moves: Vec<Move>,
    pub total_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("route is not valid on this wall")]
    Invalid(ValidationReport),
    #[error("no feasible start state")]
    Empty,
    #[error("no sequence of moves reaches the finish")]
    Unreachable,
    #[error("greedy search found no improving move")]
    Stuck,
    #[error("oracle limits exceeded: {0}")]
    LimitExceeded(String),
}

impl PlanError {
    pub fn code(&self) -> &'static str {
        match self {
            PlanError::Invalid(_) => "INVALID",
            PlanError::Empty => "EMPTY",
            PlanError::Unreachable => "UNREACHABLE",
            PlanError::Stuck => "STUCK",
            PlanError::LimitExceeded(_) => "LIMIT_EXCEEDED",
        }
    }
}

/// Compact body state: hold indices for LH, RH, LF, RF; `free` marks a
/// dangling foot. Hold indices follow sorted hold ids, so numeric key
/// order is the canonical state order.
pub(crate) type Limbs = [u8; 4];

#[derive(Debug, Clone, Copy)]
struct Pt {
    x: f64,
    y: f64,
}

/// Quantities of a body state that every outgoing move needs.
pub(crate) struct Site {
    state: Limbs,
    pos: [Option<(f64, f64)>; 4],
    com_y: f64,
    fear: f64,
    dangle: Pt,
    free_feet: u8,
}

/// Avoid a particular (limb, destination) pair; used to find the cheapest
/// alternative to a key move.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Forbidden {
    pub limb: Limb,
    pub to: u8,
}

/// Per-(route, wall, climber) planning tables.
pub struct Planner<'a> {
    wall: &'a Wall,
    climber: &'a ClimberProfile,
    config: ModelConfig,
    holds: Vec<&'a Hold>,
    pts: Vec<Pt>,
    n: usize,
    free: u8,
    dist: Vec<f64>,
    hand_ok: Vec<bool>,
    foot_ok: Vec<bool>,
    finish: u8,
    starts: Vec<u8>,
    reach: ReachLimit,
    expo: [f64; MoveType::COUNT],
    fear_active: bool,
    /// False when every move type carries the same exposure term, so the
    /// cost does not depend on classification.
    type_matters: bool,
    heuristic: Vec<f64>,
    /// `hands_fit[lh * n + rh]`: both hand holds usable and within arm span.
    hands_fit: Vec<bool>,
    /// `foot_fits[(lh * n + rh) * n + f]`: foot hold `f` usable, in reach of
    /// both hands and not above both.
    foot_fits: Vec<bool>,
}

impl<'a> Planner<'a> {
    /// Builds the planning tables. Fails when the route does not validate
    /// against the wall.
    pub fn new(
        route: &'a Route,
        wall: &'a Wall,
        climber: &'a ClimberProfile,
        config: &ModelConfig,
    ) -> Result<Self, PlanError> {
        let report = validate_route(route, wall);
        if !report.ok {
            return Err(PlanError::Invalid(report));
        }
        let mut holds: Vec<&Hold> = route
            .hold_ids
            .iter()
            .map(|id| wall.hold(id).expect("validated"))
            .collect();
        holds.sort_by(|a, b| a.id.cmp(&b.id));
        if holds.len() >= u8::MAX as usize {
            return Err(PlanError::LimitExceeded(format!("{} holds in one route", holds.len())));
        }
        let n = holds.len();
        let index_of = |id: &str| holds.iter().position(|h| h.id == id).expect("validated") as u8;
        let pts: Vec<Pt> = holds.iter().map(|h| Pt { x: h.x, y: h.y }).collect();
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                dist[i * n + j] = holds[i].distance_to(holds[j]);
            }
        }
        let finish = index_of(&route.finish_hold_id);
        let mut starts: Vec<u8> = route.start_hold_ids.iter().map(|id| index_of(id)).collect();
        starts.sort_by(|a, b| pts[*a as usize].x.total_cmp(&pts[*b as usize].x).then(a.cmp(b)));
        starts.dedup();

        let expo = exposure_terms(&climber.exposure, config.exposure_weight);
        let fear_active = climber.fear_sensitivity > 0.0 && wall.panels.iter().any(|p| p.angle > 90.0);
        let mut planner = Planner {
            wall,
            climber,
            config: *config,
            hand_ok: holds.iter().map(|h| h.roles.hand).collect(),
            foot_ok: holds.iter().map(|h| h.roles.foot).collect(),
            holds,
            pts,
            n,
            free: n as u8,
            dist,
            finish,
            starts,
            reach: reach_limit(climber),
            expo,
            fear_active,
            type_matters: expo.iter().any(|&e| e != expo[0]),
            heuristic: Vec::new(),
            hands_fit: Vec::new(),
            foot_fits: Vec::new(),
        };
        planner.heuristic = planner.hand_bounds();
        planner.build_fit_tables();
        Ok(planner)
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    fn d(&self, a: u8, b: u8) -> f64 {
        self.dist[a as usize * self.n + b as usize]
    }

    pub(crate) fn key(&self, s: &Limbs) -> u32 {
        let b = self.n as u32 + 1;
        ((s[0] as u32 * b + s[1] as u32) * b + s[2] as u32) * b + s[3] as u32
    }

    pub(crate) fn state_space(&self) -> usize {
        (self.n + 1).pow(4)
    }

    pub(crate) fn is_terminal(&self, s: &Limbs) -> bool {
        s[0] == self.finish && s[1] == self.finish
    }

    fn build_fit_tables(&mut self) {
        let n = self.n;
        self.hands_fit = vec![false; n * n];
        self.foot_fits = vec![false; n * n * n];
        for lh in 0..n {
            for rh in 0..n {
                let (l, r) = (lh as u8, rh as u8);
                self.hands_fit[lh * n + rh] =
                    self.hand_ok[lh] && self.hand_ok[rh] && self.d(l, r) <= self.reach.hand_hand;
                let top = self.pts[lh].y.max(self.pts[rh].y);
                for f in 0..n {
                    self.foot_fits[(lh * n + rh) * n + f] = self.foot_ok[f]
                        && self.pts[f].y <= top
                        && self.d(f as u8, l) <= self.reach.hand_foot
                        && self.d(f as u8, r) <= self.reach.hand_foot;
                }
            }
        }
    }

    /// Body-state invariants: hands within arm span, each set foot within
    /// hand-foot reach of both hands and not above both hands.
    pub(crate) fn is_valid(&self, s: &Limbs) -> bool {
        let n = self.n;
        let (lh, rh) = (s[0] as usize, s[1] as usize);
        if lh >= n || rh >= n || !self.hands_fit[lh * n + rh] {
            return false;
        }
        let base = (lh * n + rh) * n;
        s[2..].iter().all(|&f| f == self.free || self.foot_fits[base + f as usize])
    }

    /// Per-state quantities shared by every move out of `s`.
    pub(crate) fn site(&self, s: &Limbs) -> Site {
        let mut pos = [None; 4];
        let (mut sum, mut count) = (0.0, 0.0);
        for (slot, &h) in pos.iter_mut().zip(s) {
            if h != self.free {
                let p = self.pts[h as usize];
                *slot = Some((p.x, p.y));
                sum += p.y;
                count += 1.0;
            }
        }
        let com_y = sum / count;
        let (l, r) = (self.pts[s[0] as usize], self.pts[s[1] as usize]);
        Site {
            state: *s,
            pos,
            com_y,
            fear: if self.fear_active { fear_penalty_at(self.wall, self.climber, com_y) } else { 0.0 },
            dangle: Pt { x: 0.5 * (l.x + r.x), y: l.y.min(r.y) - DANGLE_DROP * self.climber.height },
            free_feet: u8::from(s[2] == self.free) + u8::from(s[3] == self.free),
        }
    }

    fn distance_at(&self, site: &Site, limb: usize, to: u8) -> f64 {
        let from = site.state[limb];
        if to == self.free {
            0.0
        } else if from == self.free {
            let t = self.pts[to as usize];
            (site.dangle.x - t.x).hypot(site.dangle.y - t.y)
        } else {
            self.d(from, to)
        }
    }

    fn type_at(&self, site: &Site, limb: usize, to: u8, distance: f64) -> MoveType {
        let target = (to != self.free).then(|| {
            let p = self.pts[to as usize];
            (p.x, p.y)
        });
        let s = &site.state;
        classify(&LimbView {
            limbs: site.pos,
            same_as: std::array::from_fn(|i| to != self.free && s[i] == to),
            limb: Limb::ALL[limb],
            target,
            distance,
            com_y: site.com_y,
            arm_span: self.climber.arm_span,
            hand_foot: self.reach.hand_foot,
        })
    }

    fn factors_at(&self, site: &Site, limb: usize, to: u8) -> MoveFactors {
        let distance = self.distance_at(site, limb, to);
        MoveFactors {
            hold_difficulty: if to == self.free { 0.0 } else { self.holds[to as usize].difficulty },
            distance,
            move_type: self.type_at(site, limb, to, distance),
            unsupported_feet: if limb < 2 { site.free_feet } else { 0 },
            fear: site.fear,
        }
    }

    pub(crate) fn cost_at(&self, site: &Site, limb: usize, to: u8) -> f64 {
        let f = if self.type_matters {
            self.factors_at(site, limb, to)
        } else {
            let distance = self.distance_at(site, limb, to);
            MoveFactors {
                hold_difficulty: if to == self.free { 0.0 } else { self.holds[to as usize].difficulty },
                distance,
                move_type: MoveType::Reach,
                unsupported_feet: if limb < 2 { site.free_feet } else { 0 },
                fear: site.fear,
            }
        };
        let z = success_logit(&f, self.climber, &self.config, self.expo[f.move_type as usize]);
        neg_ln_logistic(z) + self.config.lambda_effort * (f.distance / self.climber.arm_span)
    }

    pub(crate) fn com_y(&self, s: &Limbs) -> f64 {
        self.site(s).com_y
    }

    pub(crate) fn move_distance(&self, s: &Limbs, limb: usize, to: u8) -> f64 {
        self.distance_at(&self.site(s), limb, to)
    }

    pub(crate) fn move_type(&self, s: &Limbs, limb: usize, to: u8) -> MoveType {
        let site = self.site(s);
        self.type_at(&site, limb, to, self.distance_at(&site, limb, to))
    }

    /// Cost of moving `limb` of state `s` to hold index `to`.
    pub(crate) fn edge_cost(&self, s: &Limbs, limb: usize, to: u8) -> f64 {
        self.cost_at(&self.site(s), limb, to)
    }

    /// Legal single-limb moves from `s`, in canonical order.
    pub(crate) fn expand(&self, s: &Limbs, forbidden: Option<Forbidden>, out: &mut Vec<(usize, u8, Limbs)>) {
        out.clear();
        let terminal = self.is_terminal(s);
        for limb in 0..4 {
            let hand = limb < 2;
            if hand && terminal {
                continue;
            }
            let last = if hand { self.n as u8 - 1 } else { self.free };
            for to in 0..=last {
                if to == s[limb] {
                    continue;
                }
                if let Some(f) = forbidden {
                    if f.limb as usize == limb && f.to == to {
                        continue;
                    }
                }
                if to != self.free {
                    let ok = if hand { self.hand_ok[to as usize] } else { self.foot_ok[to as usize] };
                    if !ok {
                        continue;
                    }
                }
                let mut next = *s;
                next[limb] = to;
                if self.is_valid(&next) {
                    out.push((limb, to, next));
                }
            }
        }
    }

    /// Lower bound per hand hold on the cost still needed to bring that hand
    /// to the finish: shortest paths to the finish in the hold graph where a
    /// hand move into hold j is charged only for j's difficulty and the move
    /// length, with the most favourable exposure and no support or fear
    /// terms. Every real move costs at least its relaxed edge, so the sum of
    /// both hands' bounds is a consistent A* heuristic.
    fn hand_bounds(&self) -> Vec<f64> {
        let n = self.n;
        let min_expo = self.expo.iter().cloned().fold(f64::INFINITY, f64::min);
        let a = self.climber.arm_span;
        let relaxed = |i: usize, j: usize| {
            let d = self.d(i as u8, j as u8);
            let hd = self.holds[j].difficulty;
            let d_eff = hd + (0.5 * d / a + min_expo).max(0.0);
            neg_ln_logistic(self.config.kappa * (self.climber.ability - d_eff)) + self.config.lambda_effort * d / a
        };
        let mut h = vec![f64::INFINITY; n];
        let mut done = vec![false; n];
        h[self.finish as usize] = 0.0;
        loop {
            let Some(j) = (0..n).filter(|&j| !done[j] && h[j].is_finite()).min_by(|&a, &b| h[a].total_cmp(&h[b])) else {
                break;
            };
            done[j] = true;
            for i in (0..n).filter(|&i| !done[i] && self.hand_ok[i]) {
                let via = h[j] + relaxed(i, j);
                if via < h[i] {
                    h[i] = via;
                }
            }
        }
        // Shave rounding so the bound never exceeds a true cost.
        h.iter().map(|v| v * (1.0 - 1e-12)).collect()
    }

    pub(crate) fn bound(&self, s: &Limbs) -> f64 {
        self.heuristic[s[0] as usize] + self.heuristic[s[1] as usize]
    }

    /// Start states in canonical order: hands on the start hold(s), feet
    /// dangling or on foot-capable route holds below both hands.
    pub(crate) fn start_limbs(&self) -> Vec<Limbs> {
        let hand_starts: Vec<u8> = self.starts.iter().copied().filter(|&i| self.hand_ok[i as usize]).collect();
        let foot_only: Vec<u8> = self.starts.iter().copied().filter(|&i| !self.hand_ok[i as usize]).collect();
        let (lh, rh) = match hand_starts.as_slice() {
            [] => return Vec::new(),
            [one] => (*one, *one),
            [a, b, ..] => (*a, *b),
        };
        let low = self.pts[lh as usize].y.min(self.pts[rh as usize].y);
        let foot_options: Vec<u8> = (0..self.n as u8)
            .filter(|&f| self.foot_ok[f as usize] && self.pts[f as usize].y < low)
            .chain(std::iter::once(self.free))
            .collect();
        let mut out = Vec::new();
        for &lf in &foot_options {
            for &rf in &foot_options {
                let s = [lh, rh, lf, rf];
                if foot_only.iter().all(|f| lf == *f || rf == *f) && self.is_valid(&s) {
                    out.push(s);
                }
            }
        }
        out.sort_by_key(|s| self.key(s));
        out.dedup();
        out
    }

    fn id(&self, h: u8) -> Option<String> {
        (h != self.free).then(|| self.holds[h as usize].id.clone())
    }

    pub(crate) fn to_body(&self, s: &Limbs) -> BodyState {
        BodyState {
            lh: self.id(s[0]).expect("hands are always placed"),
            rh: self.id(s[1]).expect("hands are always placed"),
            lf: self.id(s[2]),
            rf: self.id(s[3]),
            com_y: self.com_y(s),
        }
    }

    pub(crate) fn from_body(&self, b: &BodyState) -> Option<Limbs> {
        let idx = |id: Option<&str>| -> Option<u8> {
            match id {
                None => Some(self.free),
                Some(id) => self.holds.iter().position(|h| h.id == id).map(|i| i as u8),
            }
        };
        Some([
            idx(Some(&b.lh))?,
            idx(Some(&b.rh))?,
            idx(b.lf.as_deref())?,
            idx(b.rf.as_deref())?,
        ])
    }

    pub(crate) fn to_move(&self, s: &Limbs, limb: usize, to: u8) -> Move {
        Move {
            limb: Limb::ALL[limb],
            from: self.id(s[limb]),
            to: self.id(to),
            distance: self.move_distance(s, limb, to),
            move_type: self.move_type(s, limb, to),
        }
    }

    pub(crate) fn build_beta(&self, path: &[Limbs]) -> Beta {
        let mut moves = Vec::with_capacity(path.len().saturating_sub(1));
        let mut total = 0.0;
        for w in path.windows(2) {
            let limb = (0..4).find(|&l| w[0][l] != w[1][l]).expect("one limb changes");
            total += self.edge_cost(&w[0], limb, w[1][limb]);
            moves.push(self.to_move(&w[0], limb, w[1][limb]));
        }
        Beta {
            states: path.iter().map(|s| self.to_body(s)).collect(),
            moves,
            total_cost: total,
        }
    }

    pub fn start_states(&self) -> Result<Vec<BodyState>, PlanError> {
        let starts = self.start_limbs();
        if starts.is_empty() {
            return Err(PlanError::Empty);
        }
        Ok(starts.iter().map(|s| self.to_body(s)).collect())
    }

    /// All legal single-limb moves from `state`. Once both hands are on
    /// the finish only foot moves remain.
    pub fn successors(&self, state: &BodyState) -> Vec<(Move, BodyState)> {
        let Some(s) = self.from_body(state) else { return Vec::new() };
        let mut out = Vec::new();
        self.expand(&s, None, &mut out);
        out.iter()
            .map(|(limb, to, next)| (self.to_move(&s, *limb, *to), self.to_body(next)))
            .collect()
    }

    /// Planner cost of `mv` from `from`, recomputing its geometry.
    pub fn move_cost(&self, mv: &Move, from: &BodyState) -> Option<f64> {
        let s = self.from_body(from)?;
        let limb = mv.limb as usize;
        let to = match &mv.to {
            None => self.free,
            Some(id) => self.holds.iter().position(|h| &h.id == id)? as u8,
        };
        Some(self.edge_cost(&s, limb, to))
    }

    /// Checks every body-state invariant and move rule along `beta`.
    pub fn replay_ok(&self, beta: &Beta) -> bool {
        let Some(path) = beta.states.iter().map(|b| self.from_body(b)).collect::<Option<Vec<_>>>() else {
            return false;
        };
        if path.is_empty() || beta.moves.len() + 1 != path.len() {
            return false;
        }
        if !self.start_limbs().contains(&path[0]) || !self.is_terminal(path.last().unwrap()) {
            return false;
        }
        path.iter().all(|s| self.is_valid(s))
            && path.windows(2).all(|w| (0..4).filter(|&l| w[0][l] != w[1][l]).count() == 1)
    }

    pub fn plan(&self) -> Result<Beta, PlanError> {
        self.plan_avoiding(None)
    }

    pub(crate) fn plan_avoiding(&self, forbidden: Option<Forbidden>) -> Result<Beta, PlanError> {
        let starts = self.start_limbs();
        if starts.is_empty() {
            return Err(PlanError::Empty);
        }
        let path = search::astar(self, &starts, forbidden).ok_or(PlanError::Unreachable)?;
        Ok(self.build_beta(&path))
    }

    /// Cheapest beta that never moves `limb` onto hold `to`.
    pub fn plan_without(&self, limb: Limb, to: Option<&str>) -> Result<Beta, PlanError> {
        let to = match to {
            None => self.free,
            Some(id) => match self.holds.iter().position(|h| h.id == id) {
                Some(i) => i as u8,
                None => return self.plan(),
            },
        };
        self.plan_avoiding(Some(Forbidden { limb, to }))
    }

    pub fn greedy(&self) -> Result<Beta, PlanError> {
        let starts = self.start_limbs();
        if starts.is_empty() {
            return Err(PlanError::Empty);
        }
        let path = search::greedy(self, &starts).ok_or(PlanError::Stuck)?;
        Ok(self.build_beta(&path))
    }

    /// Exhaustive minimum over all move sequences of at most `max_moves`
    /// moves. Only for small routes: at most 8 holds and 12 moves.
    pub fn brute_force(&self, max_moves: usize) -> Result<Beta, PlanError> {
        oracle::brute_force(self, max_moves)
    }
}

pub fn start_states(route: &Route, wall: &Wall, climber: &ClimberProfile) -> Result<Vec<BodyState>, PlanError> {
    let config = ModelConfig::default();
    match Planner::new(route, wall, climber, &config) {
        Ok(p) => p.start_states(),
        Err(PlanError::Invalid(r)) if r.issues.iter().all(|i| i.code.as_str().starts_with("START")) => {
            Err(PlanError::Empty)
        }
        Err(e) => Err(e),
    }
}

pub fn successors(state: &BodyState, route: &Route, wall: &Wall, climber: &ClimberProfile) -> Vec<(Move, BodyState)> {
    let config = ModelConfig::default();
    Planner::new(route, wall, climber, &config)
        .map(|p| p.successors(state))
        .unwrap_or_default()
}

fn with_lambda(lambda_effort: f64) -> ModelConfig {
    ModelConfig { lambda_effort, ..ModelConfig::default() }
}

/// Planner cost of one move: `-ln p + lambda * distance / arm span`.
pub fn move_cost(mv: &Move, from: &BodyState, route: &Route, wall: &Wall, climber: &ClimberProfile, lambda_effort: f64) -> Option<f64> {
    let config = with_lambda(lambda_effort);
    Planner::new(route, wall, climber, &config).ok()?.move_cost(mv, from)
}

pub fn plan_beta(route: &Route, wall: &Wall, climber: &ClimberProfile, lambda_effort: f64) -> Result<Beta, PlanError> {
    let config = with_lambda(lambda_effort);
    Planner::new(route, wall, climber, &config)?.plan()
}

pub fn greedy_beta(route: &Route, wall: &Wall, climber: &ClimberProfile, lambda_effort: f64) -> Result<Beta, PlanError> {
    let config = with_lambda(lambda_effort);
    Planner::new(route, wall, climber, &config)?.greedy()
}

pub fn brute_force_beta(
    route: &Route,
    wall: &Wall,
    climber: &ClimberProfile,
    lambda_effort: f64,
    max_moves: usize,
) -> Result<Beta, PlanError> {
    let config = with_lambda(lambda_effort);
    Planner::new(route, wall, climber, &config)?.brute_force(max_moves)
}
