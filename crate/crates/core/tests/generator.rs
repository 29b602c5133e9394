use std::cmp::Ordering as Cmp;
use std::collections::{BinaryHeap, HashMap};
use std::sync::atomic::AtomicBool;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crux_core::fixtures::{self, synthetic_corpus};
use crux_core::format::parse_document;
use crux_core::generator::{
    generate_route, necessitation_margin, neighbor, GenerationConfig, Objective, NO_ALTERNATIVE, UNREACHABLE_PENALTY,
};
use crux_core::grading::{GradeSet, Grader, GradingSettings};
use crux_core::planner::{BodyState, Limb, Planner};
use crux_core::sim::{sample_population, ModelConfig, PopulationSpec};
use crux_core::style::RewardWeights;
use crux_core::{ClimberProfile, GradeLabel, Hold, Panel, Route, Wall};

fn climber() -> ClimberProfile {
    ClimberProfile::default()
}

type Key = (String, String, Option<String>, Option<String>);

fn key(s: &BodyState) -> Key {
    (s.lh.clone(), s.rh.clone(), s.lf.clone(), s.rf.clone())
}

struct Item(f64, Key, BodyState);

impl PartialEq for Item {
    fn eq(&self, o: &Self) -> bool {
        self.0 == o.0
    }
}
impl Eq for Item {}
impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Cmp> {
        Some(self.cmp(o))
    }
}
impl Ord for Item {
    fn cmp(&self, o: &Self) -> Cmp {
        o.0.total_cmp(&self.0)
    }
}

/// Plain Dijkstra over the public successor relation, never taking
/// `(limb, to)`. None when the finish cannot be reached.
fn cheapest_avoiding(p: &Planner, finish: &str, limb: Limb, to: Option<&str>) -> Option<f64> {
    let mut dist: HashMap<Key, f64> = HashMap::new();
    let mut heap = BinaryHeap::new();
    for s in p.start_states().ok()? {
        dist.insert(key(&s), 0.0);
        heap.push(Item(0.0, key(&s), s));
    }
    while let Some(Item(d, k, s)) = heap.pop() {
        if d > dist[&k] {
            continue;
        }
        if s.lh == finish && s.rh == finish {
            return Some(d);
        }
        for (mv, next) in p.successors(&s) {
            if mv.limb == limb && mv.to.as_deref() == to {
                continue;
            }
            let nd = d + p.move_cost(&mv, &s).unwrap();
            let nk = key(&next);
            if dist.get(&nk).is_none_or(|&old| nd < old) {
                dist.insert(nk.clone(), nd);
                heap.push(Item(nd, nk, next));
            }
        }
    }
    None
}

#[test]
fn trap_margin_matches_exhaustive_alternatives() {
    let doc = fixtures::trap();
    let route = &doc.routes[0];
    let c = climber();
    let cfg = ModelConfig::default();
    let p = Planner::new(route, &doc.wall, &c, &cfg).unwrap();
    let beta = p.plan().unwrap();
    let margin = necessitation_margin(route, &doc.wall, &beta, &c, &cfg, &RewardWeights::default());

    // Three moves, so every move is a key move. The right hand can take
    // the crimp at the same cost as the crossing left hand.
    assert_eq!(beta.moves.len(), 3);
    let expected = beta
        .moves
        .iter()
        .map(|m| match cheapest_avoiding(&p, "f", m.limb, m.to.as_deref()) {
            Some(cost) => cost - beta.total_cost,
            None => NO_ALTERNATIVE,
        })
        .fold(NO_ALTERNATIVE, f64::min);
    assert!((margin - expected).abs() < 1e-9, "{margin} vs {expected}");
}

#[test]
fn unavoidable_key_move_gives_sentinel() {
    let doc = fixtures::two_hold();
    let c = climber();
    let cfg = ModelConfig::default();
    let beta = Planner::new(&doc.routes[0], &doc.wall, &c, &cfg).unwrap().plan().unwrap();
    let m = necessitation_margin(&doc.routes[0], &doc.wall, &beta, &c, &cfg, &RewardWeights::default());
    assert_eq!(m, NO_ALTERNATIVE);
}

const MIRRORED: &str = "
WALL 3 4.5
PANEL 0 4.5 90
HOLD s 1.5 1.0 jug 0.1 hand 0
HOLD m1 1.25 1.95 crimp 0.5 hand 0
HOLD m2 1.75 1.95 crimp 0.5 hand 0
HOLD f 1.5 2.9 jug 0.1 hand 0
ROUTE mirrored
START s
FINISH f
USE m1 m2
";

#[test]
fn mirrored_duplicate_hold_gives_zero_margin() {
    let doc = parse_document(MIRRORED).unwrap();
    let c = climber();
    let cfg = ModelConfig::default();
    let beta = Planner::new(&doc.routes[0], &doc.wall, &c, &cfg).unwrap().plan().unwrap();
    assert!(beta.moves.iter().any(|m| matches!(m.to.as_deref(), Some("m1" | "m2"))));
    let m = necessitation_margin(&doc.routes[0], &doc.wall, &beta, &c, &cfg, &RewardWeights::default());
    assert!(m.abs() < 1e-12, "{m}");
}

fn one_set(label: &str) -> Vec<GradeSet> {
    let mut sets = synthetic_corpus(1, 2);
    sets.truncate(1);
    sets[0].label = label.parse().unwrap();
    sets
}

fn grader(size: usize) -> Grader {
    Grader::new(sample_population(&PopulationSpec { size, ..Default::default() }, 3), GradingSettings::default(), 4)
}

#[test]
fn objective_terms() {
    let corpus = one_set("5.9");
    let gr = grader(20);
    let doc = fixtures::two_hold();

    let target: GradeLabel = "5.10a".parse().unwrap();
    let cfg = GenerationConfig { target_grade: target, w_grade: 1.0, w_reward: 0.0, w_necessity: 0.0, ..Default::default() };
    let e = Objective::new(&cfg, &corpus, &gr).evaluate(&doc.routes[0], &doc.wall).unwrap();
    assert_eq!(e.objective, 1.0);

    let cfg = GenerationConfig { target_grade: "5.9".parse().unwrap(), w_reward: 0.0, w_necessity: 1.0, ..cfg };
    let e = Objective::new(&cfg, &corpus, &gr).evaluate(&doc.routes[0], &doc.wall).unwrap();
    assert_eq!(e.margin, NO_ALTERNATIVE);
    assert!(e.objective.abs() < 1e-300);

    let far = parse_document("WALL 3 4.5\nPANEL 0 4.5 90\nHOLD a 1.5 0.5 jug 0.1 hand 0\nHOLD b 1.5 4.4 jug 0.1 hand 0\nROUTE r\nSTART a\nFINISH b\n").unwrap();
    let e = Objective::new(&cfg, &corpus, &gr).evaluate(&far.routes[0], &far.wall).unwrap();
    assert_eq!(e.objective, UNREACHABLE_PENALTY);
}

#[test]
fn neighbor_respects_budget_and_anchors() {
    let doc = fixtures::ladder();
    let route = &doc.routes[0];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let budget = route.hold_ids.len();
    for _ in 0..200 {
        let (r, w) = neighbor(route, &doc.wall, budget, 1.0, &mut rng);
        assert!(r.hold_ids.len() <= budget);
        for id in route.start_hold_ids.iter().chain([&route.finish_hold_id]) {
            let (a, b) = (doc.wall.hold(id).unwrap(), w.hold(id).unwrap());
            assert_eq!((a.x, a.y), (b.x, b.y));
            assert!(r.uses(id));
        }
    }

    let two = fixtures::two_hold();
    for _ in 0..100 {
        let (r, w) = neighbor(&two.routes[0], &two.wall, 2, 1.0, &mut rng);
        assert_eq!(r, two.routes[0]);
        for (a, b) in two.wall.holds.iter().zip(&w.holds) {
            assert_eq!((&a.id, a.x, a.y), (&b.id, b.x, b.y));
            assert!(b.roles.hand);
        }
    }
}

#[test]
fn neighbor_falls_back_to_identity() {
    let mut doc = fixtures::ladder();
    let mut broken = doc.wall.holds[0].clone();
    broken.id = "bad".into();
    broken.difficulty = 2.0;
    doc.wall.holds.push(broken);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (r, w) = neighbor(&doc.routes[0], &doc.wall, 12, 1.0, &mut rng);
    assert_eq!(r, doc.routes[0]);
    assert_eq!(w, doc.wall);
}

fn empty_wall() -> Wall {
    Wall { width: 3.0, height: 4.5, panels: vec![Panel { y0: 0.0, y1: 4.5, angle: 90.0 }], holds: vec![] }
}

fn small_config(seed: u64) -> GenerationConfig {
    GenerationConfig {
        target_grade: "5.10a".parse().unwrap(),
        max_iterations: 25,
        grading_population: 12,
        seed,
        hold_budget: 8,
        ..Default::default()
    }
}

#[test]
fn optimal_seed_route_is_kept() {
    let corpus = one_set("5.9");
    let gr = grader(20);
    let doc = fixtures::ladder();
    let cfg = GenerationConfig { w_grade: 0.0, w_reward: 0.0, w_necessity: 0.0, ..small_config(2) };
    let out = generate_route(&doc.wall, Some(&doc.routes[0]), &cfg, &corpus, &gr, None, None).unwrap();
    assert_eq!(out.route, doc.routes[0]);
    assert_eq!(out.wall, doc.wall);
    assert_eq!(out.report.iterations, 25);
    assert!(out.report.objective_trace.iter().all(|&o| o == 0.0));
}

#[test]
fn generation_is_deterministic() {
    let corpus = synthetic_corpus(1, 2);
    let gr = grader(30);
    let run = || {
        let out = generate_route(&empty_wall(), None, &small_config(9), &corpus, &gr, None, None).unwrap();
        let text = crux_core::format::serialize_document(&out.wall, &[out.route.clone()]);
        (text, serde_json::to_string(&out.report).unwrap(), serde_json::to_string(&out.beta).unwrap())
    };
    assert_eq!(run(), run());
}

#[test]
fn traces_and_hill_climbing() {
    let corpus = synthetic_corpus(1, 2);
    let gr = grader(30);
    let cfg = GenerationConfig { initial_temperature: 0.0, ..small_config(4) };
    let mut calls = 0;
    let mut progress = |_: usize, _: f64| calls += 1;
    let out = generate_route(&empty_wall(), None, &cfg, &corpus, &gr, Some(&mut progress), None).unwrap();
    assert_eq!(calls, 25);
    let r = &out.report;
    assert!(r.objective_trace.windows(2).all(|w| w[1] <= w[0]));
    assert!(r.current_trace.windows(2).all(|w| w[1] <= w[0]));
    assert_eq!(r.best_objective, *r.objective_trace.last().unwrap());
    assert!(crux_core::validate::validate_route(&out.route, &out.wall).ok);
}

#[test]
fn canceled_run_returns_its_start() {
    let corpus = synthetic_corpus(1, 2);
    let gr = grader(10);
    let cancel = AtomicBool::new(true);
    let out = generate_route(&empty_wall(), None, &small_config(1), &corpus, &gr, None, Some(&cancel)).unwrap();
    assert!(out.report.canceled);
    assert_eq!(out.report.iterations, 0);
    assert!(!out.beta.moves.is_empty());
}

#[test]
fn hopeless_wall_has_no_valid_start() {
    let corpus = synthetic_corpus(1, 2);
    let gr = grader(4);
    let mut wall = empty_wall();
    wall.holds.push(Hold { difficulty: 3.0, ..fixtures::ladder().wall.holds[0].clone() });
    let err = generate_route(&wall, None, &small_config(1), &corpus, &gr, None, None).unwrap_err();
    assert_eq!(err.code(), "NO_VALID_START");
    let bad = GenerationConfig { cooling_rate: 1.0, ..small_config(1) };
    assert!(generate_route(&empty_wall(), None, &bad, &corpus, &gr, None, None).is_err());
    let seed = Route::new("x", vec!["nope".into()], vec!["nope".into()], "nope");
    assert!(generate_route(&empty_wall(), Some(&seed), &small_config(1), &corpus, &gr, None, None).is_err());
}
