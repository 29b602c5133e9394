//! Small reference documents shared by tests, examples and the CLI.

use crate::format::{parse_document, Document};

pub const LADDER: &str = include_str!("../fixtures/ladder.crux");
pub const TRAP: &str = include_str!("../fixtures/trap.crux");
pub const TWO_HOLD: &str = include_str!("../fixtures/two_hold.crux");
pub const OVERHANG: &str = include_str!("../fixtures/overhang.crux");
pub const LEDGE: &str = include_str!("../fixtures/ledge.crux");

/// Every bundled single-route fixture.
pub const ALL: [&str; 5] = [LADDER, TRAP, TWO_HOLD, OVERHANG, LEDGE];

fn load(text: &str) -> Document {
    parse_document(text).expect("bundled fixture parses")
}

/// Five jugs in a vertical line, 0.4 m apart.
pub fn ladder() -> Document {
    load(LADDER)
}

/// A cheap high jug that dead-ends; greedy climbing gets stuck on it.
pub fn trap() -> Document {
    load(TRAP)
}

/// Two start jugs, one of which is the finish: a single matching move.
pub fn two_hold() -> Document {
    load(TWO_HOLD)
}

/// A vertical start under a 120 degree roof, with footholds.
pub fn overhang() -> Document {
    load(OVERHANG)
}

/// A ledge that can be mantled with a heel hook.
pub fn ledge() -> Document {
    load(LEDGE)
}

/// A random route of `holds` holds (at least 2) on a 3 m x 4.5 m wall,
/// deterministic in `seed`. Holds rise through a central corridor; the
/// lowest hand hold (or two) starts and the highest finishes. Some routes
/// are unclimbable by design.
pub fn random_route(seed: u64, holds: usize) -> Document {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::model::{Hold, HoldType, Panel, Roles, Route, Wall};

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = holds.max(2);
    let overhang = rng.random_bool(0.4);
    let panels = if overhang {
        vec![Panel { y0: 0.0, y1: 2.0, angle: 90.0 }, Panel { y0: 2.0, y1: 4.5, angle: rng.random_range(95.0..140.0) }]
    } else {
        vec![Panel { y0: 0.0, y1: 4.5, angle: rng.random_range(75.0..=90.0) }]
    };
    let hand_types = [HoldType::Jug, HoldType::Crimp, HoldType::Sloper, HoldType::Pinch, HoldType::Pocket, HoldType::Volume];
    let mut list = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        let y = 0.5 + 2.5 * t + rng.random_range(-0.25..0.25);
        let x = rng.random_range(0.9..2.1);
        let foothold = i > 1 && i + 1 < n && rng.random_bool(0.25);
        let (hold_type, roles) = if foothold {
            (HoldType::Foothold, Roles::FOOT)
        } else {
            let t = hand_types[rng.random_range(0..hand_types.len())];
            (t, if rng.random_bool(0.6) { Roles::BOTH } else { Roles::HAND })
        };
        list.push(Hold {
            id: format!("h{i}"),
            x,
            y,
            hold_type,
            difficulty: (hold_type.nominal_difficulty() + rng.random_range(-0.1..0.1)).clamp(0.0, 1.0),
            roles,
            orientation: rng.random_range(0.0..360.0),
        });
    }
    let mut hand: Vec<&Hold> = list.iter().filter(|h| h.roles.hand).collect();
    hand.sort_by(|a, b| a.y.total_cmp(&b.y).then(a.id.cmp(&b.id)));
    let two_starts = hand.len() >= 3 && rng.random_bool(0.5);
    let starts: Vec<String> = hand.iter().take(if two_starts { 2 } else { 1 }).map(|h| h.id.clone()).collect();
    let finish = hand.last().expect("at least two hand holds").id.clone();
    let ids = list.iter().map(|h| h.id.clone()).collect();
    let route = Route::new(format!("random-{seed}"), ids, starts, finish);
    Document {
        wall: Wall { width: 3.0, height: 4.5, panels, holds: list },
        routes: vec![route],
    }
}

/// Grades of the synthetic corpus, easiest first, with the base hold
/// difficulty of each.
pub const SYNTHETIC_GRADES: [(&str, f64); 3] = [("5.8", 0.2), ("5.10a", 0.5), ("5.11a", 0.8)];

/// A vertical ladder-like route of six to eight hand holds whose
/// difficulties scatter by ±0.05 around `difficulty`. Each route comes with
/// its own wall. Numbers are rounded to the text format's precision so the
/// document survives a round trip unchanged.
pub fn synthetic_route(seed: u64, difficulty: f64, name: &str) -> Document {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::model::{Hold, HoldType, Panel, Roles, Route, Wall};

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mm = |v: f64| (v * 1000.0).round() / 1000.0;
    let n = rng.random_range(6..=8);
    let holds: Vec<Hold> = (0..n)
        .map(|i| Hold {
            id: format!("s{i}"),
            x: mm(1.5 + if i % 2 == 0 { -0.25 } else { 0.25 } + rng.random_range(-0.1..0.1)),
            y: mm(0.9 + 0.42 * i as f64 + rng.random_range(-0.05..0.05)),
            hold_type: HoldType::Crimp,
            difficulty: mm((difficulty + rng.random_range(-0.05..0.05)).clamp(0.0, 1.0)),
            roles: Roles::BOTH,
            orientation: 0.0,
        })
        .collect();
    let ids: Vec<String> = holds.iter().map(|h| h.id.clone()).collect();
    let finish = ids[n - 1].clone();
    let route = Route::new(name, ids.clone(), vec![ids[0].clone(), ids[1].clone()], finish);
    Document {
        wall: Wall { width: 3.0, height: 4.5, panels: vec![Panel { y0: 0.0, y1: 4.5, angle: 90.0 }], holds },
        routes: vec![route],
    }
}

/// `per_grade` routes for each of [`SYNTHETIC_GRADES`], graded and ordered
/// by grade.
pub fn synthetic_corpus(seed: u64, per_grade: usize) -> Vec<crate::grading::GradeSet> {
    SYNTHETIC_GRADES
        .iter()
        .enumerate()
        .map(|(g, &(label, difficulty))| {
            let label: crate::grade::GradeLabel = label.parse().expect("valid grade");
            let routes = (0..per_grade)
                .map(|i| {
                    let s = seed.wrapping_mul(1000).wrapping_add((g * per_grade + i) as u64);
                    let mut doc = synthetic_route(s, difficulty, &format!("syn-{label}-{i}"));
                    let mut r = doc.routes.remove(0);
                    r.assigned_grade = Some(label);
                    (r, doc.wall)
                })
                .collect();
            crate::grading::GradeSet { label, routes }
        })
        .collect()
}
