use proptest::prelude::*;

use crux_core::fixtures::random_route;
use crux_core::format::json::{from_json_object, to_json_object};
use crux_core::format::{parse_document, Document, parse_document_bytes, serialize_document};
use crux_core::grading::{tnorm, TNormKind};
use crux_core::planner::Planner;
use crux_core::sim::{route_success_probability, ModelConfig};
use crux_core::style::{reward_of_types, style_vector_of, vary_route, RewardWeights};
use crux_core::validate::validate_route;
use crux_core::{ClimberProfile, MoveType, StyleVector};

fn planner_for<'a>(doc: &'a Document, climber: &'a ClimberProfile, cfg: &'a ModelConfig) -> Option<Planner<'a>> {
    Planner::new(&doc.routes[0], &doc.wall, climber, cfg).ok()
}

fn unit() -> impl Strategy<Value = f64> {
    (0u32..=1000).prop_map(|i| i as f64 / 1000.0)
}

fn move_type() -> impl Strategy<Value = MoveType> {
    (0..MoveType::COUNT).prop_map(|i| MoveType::ALL[i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn planner_agrees_with_exhaustive_search(seed in 0u64..10_000, holds in 3usize..=7) {
        let doc = random_route(seed, holds);
        let (climber, cfg) = (ClimberProfile::default(), ModelConfig::default());
        let Some(p) = planner_for(&doc, &climber, &cfg) else { return Ok(()) };
        match (p.plan(), p.brute_force(12)) {
            (Ok(best), Ok(oracle)) => {
                prop_assert!(best.total_cost <= oracle.total_cost + 1e-9);
                if best.moves.len() <= 12 {
                    prop_assert!((best.total_cost - oracle.total_cost).abs() < 1e-9);
                }
            }
            (Err(_), Err(_)) => {}
            (Ok(best), Err(_)) => prop_assert!(best.moves.len() > 12),
            (Err(e), Ok(_)) => prop_assert!(false, "planner failed: {e}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn planned_betas_replay_and_repeat(seed in 0u64..10_000, holds in 2usize..=10) {
        let doc = random_route(seed, holds);
        let (climber, cfg) = (ClimberProfile::default(), ModelConfig::default());
        let Some(p) = planner_for(&doc, &climber, &cfg) else { return Ok(()) };
        if let Ok(beta) = p.plan() {
            prop_assert!(p.replay_ok(&beta));
            prop_assert_eq!(serde_json::to_string(&beta).unwrap(), serde_json::to_string(&p.plan().unwrap()).unwrap());
            let g = p.greedy();
            if let Ok(g) = g {
                prop_assert!(g.total_cost >= beta.total_cost - 1e-9);
            }
        }
    }

    #[test]
    fn stronger_climbers_succeed_more(seed in 0u64..10_000, holds in 2usize..=8, a in -3.0f64..3.0, gain in 0.0f64..3.0) {
        let doc = random_route(seed, holds);
        let cfg = ModelConfig::default();
        let weak = ClimberProfile { ability: a, ..Default::default() };
        let strong = ClimberProfile { ability: a + gain, ..Default::default() };
        let pw = route_success_probability(&doc.routes[0], &doc.wall, &weak, &cfg);
        let ps = route_success_probability(&doc.routes[0], &doc.wall, &strong, &cfg);
        prop_assert!((0.0..=1.0).contains(&pw));
        prop_assert!(ps >= pw - 1e-12, "{} < {}", ps, pw);
    }

    #[test]
    fn text_and_json_round_trip(seed in 0u64..10_000, holds in 2usize..=12) {
        let doc = random_route(seed, holds);
        let text = serialize_document(&doc.wall, &doc.routes);
        let back = parse_document(&text).unwrap();
        prop_assert_eq!(serialize_document(&back.wall, &back.routes), text);
        let json = from_json_object(&to_json_object(&doc.wall, &doc.routes)).unwrap();
        prop_assert_eq!(json.wall, doc.wall);
        prop_assert_eq!(json.routes, doc.routes);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn parser_never_panics(bytes in proptest::collection::vec(any::<u8>(), 0..400)) {
        let _ = parse_document_bytes(&bytes);
    }

    #[test]
    fn parser_survives_line_noise(lines in proptest::collection::vec(
        prop_oneof![
            Just("WALL 3 4.5".to_string()),
            Just("PANEL 0 4.5 90".to_string()),
            "HOLD [a-c] -?[0-9]\\.[0-9] [0-9]\\.[0-9] (jug|crimp|sloper|foothold|bogus) [0-9]\\.[0-9] (hand|foot|hand\\|foot) [0-9]{1,3}",
            "ROUTE [a-c]",
            "(START|FINISH|USE|GRADE) [a-c0-9. ]{0,8}",
            "[ -~]{0,20}",
        ],
        0..12,
    )) {
        let _ = parse_document(&lines.join("\n"));
    }

    #[test]
    fn tnorm_axioms(a in unit(), b in unit(), c in unit(), d in unit()) {
        for kind in TNormKind::ALL {
            let t = |x, y| tnorm(kind, x, y).unwrap();
            prop_assert_eq!(t(a, b), t(b, a));
            prop_assert_eq!(t(a, 1.0), a);
            prop_assert!((t(t(a, b), c) - t(a, t(b, c))).abs() < 1e-12);
            let (lo, hi) = if b <= d { (b, d) } else { (d, b) };
            prop_assert!(t(a, lo) <= t(a, hi) + 1e-15);
            prop_assert!((0.0..=1.0).contains(&t(a, b)));
        }
    }

    #[test]
    fn style_vectors_and_rewards_stay_in_range(
        types in proptest::collection::vec(move_type(), 0..30),
        prior in proptest::collection::vec(move_type(), 0..30),
        target in proptest::collection::vec(unit(), MoveType::COUNT),
    ) {
        let v = style_vector_of(&types);
        prop_assert!((v.sum() - 1.0).abs() <= 1e-12);
        prop_assert!(v.0.iter().all(|&w| w >= 0.0));
        let total: f64 = target.iter().sum();
        let target = if total > 0.0 {
            let mut t = [0.0; MoveType::COUNT];
            for (slot, w) in t.iter_mut().zip(&target) {
                *slot = w / total;
            }
            StyleVector(t)
        } else {
            StyleVector::uniform()
        };
        let w = RewardWeights::default();
        for r in [
            reward_of_types(&types, None, &[], &w),
            reward_of_types(&types, Some(&target), &[prior.clone()], &w),
        ] {
            prop_assert!((-0.1 - 1e-12..=1.0 + 1e-12).contains(&r), "{}", r);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn variations_stay_valid_and_bounded(seed in 0u64..10_000, holds in 3usize..=10, intensity in unit(), vseed in any::<u64>()) {
        let doc = random_route(seed, holds);
        let (climber, cfg) = (ClimberProfile::default(), ModelConfig::default());
        let Some(p) = planner_for(&doc, &climber, &cfg) else { return Ok(()) };
        let Ok(beta) = p.plan() else { return Ok(()) };
        let (route, wall) = (&doc.routes[0], &doc.wall);
        let (r, w) = vary_route(route, wall, &beta, intensity, vseed);
        prop_assert!(validate_route(&r, &w).ok);
        prop_assert_eq!(&r.hold_ids, &route.hold_ids);
        for (a, b) in wall.holds.iter().zip(&w.holds) {
            prop_assert_eq!(&a.id, &b.id);
            let shift = (a.x - b.x).hypot(a.y - b.y);
            prop_assert!(shift <= 0.5 * intensity + 1e-12, "{} moved {}", a.id, shift);
            prop_assert!(b.x >= 0.0 && b.x <= w.width && b.y >= 0.0 && b.y <= w.height);
            if !route.uses(&a.id) {
                prop_assert_eq!(a, b);
            }
        }
        prop_assert_eq!(vary_route(route, wall, &beta, intensity, vseed), (r, w));
    }
}
