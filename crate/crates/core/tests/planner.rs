use crux_core::fixtures;
use crux_core::format::parse_document;
use crux_core::model::reach_limit;
use crux_core::planner::{self, BodyState, Limb, Move, PlanError, Planner};
use crux_core::sim::{beta_success_probability, move_success_probability_with, ModelConfig};
use crux_core::{ClimberProfile, MoveType, Route, Wall};

fn climber() -> ClimberProfile {
    ClimberProfile::default()
}

fn planner<'a>(route: &'a Route, wall: &'a Wall, c: &'a ClimberProfile, cfg: &ModelConfig) -> Planner<'a> {
    Planner::new(route, wall, c, cfg).expect("valid route")
}

#[test]
fn two_hold_route_is_one_match() {
    let doc = fixtures::two_hold();
    let (c, cfg) = (climber(), ModelConfig::default());
    let p = planner(&doc.routes[0], &doc.wall, &c, &cfg);
    let beta = p.plan().unwrap();
    assert_eq!(beta.moves.len(), 1);
    let mv = &beta.moves[0];
    assert_eq!((mv.limb, mv.to.as_deref(), mv.move_type), (Limb::LH, Some("b"), MoveType::Match));
    assert_eq!(p.greedy().unwrap(), beta);
    assert!((p.brute_force(4).unwrap().total_cost - beta.total_cost).abs() < 1e-12);
}

#[test]
fn ladder_matches_oracle_and_greedy_completes() {
    let doc = fixtures::ladder();
    let (c, cfg) = (climber(), ModelConfig::default());
    let p = planner(&doc.routes[0], &doc.wall, &c, &cfg);
    let best = p.plan().unwrap();
    let oracle = p.brute_force(12).unwrap();
    assert!((best.total_cost - oracle.total_cost).abs() < 1e-9);
    let greedy = p.greedy().unwrap();
    assert!(greedy.total_cost >= best.total_cost - 1e-12);
    assert!(p.replay_ok(&greedy));
    // Greedy only ever raises the top hand.
    let top = |s: &BodyState| {
        let y = |id: &str| doc.wall.hold(id).unwrap().y;
        y(&s.lh).max(y(&s.rh))
    };
    for w in greedy.states.windows(2) {
        assert!(top(&w[1]) > top(&w[0]) || (w[1].lh == "r5" && w[1].rh == "r5"));
    }
}

#[test]
fn trap_sticks_greedy_but_not_planner() {
    let doc = fixtures::trap();
    let (c, cfg) = (climber(), ModelConfig::default());
    let p = planner(&doc.routes[0], &doc.wall, &c, &cfg);
    assert_eq!(p.greedy().unwrap_err(), PlanError::Stuck);
    let beta = p.plan().unwrap();
    assert!(p.replay_ok(&beta));
    assert!((p.brute_force(12).unwrap().total_cost - beta.total_cost).abs() < 1e-9);
    // The greedy's first move is the trap jug; the planner never touches it.
    assert!(beta.moves.iter().all(|m| m.to.as_deref() != Some("t")));
}

#[test]
fn finish_out_of_reach_is_unreachable() {
    let doc = parse_document(
        "WALL 3 4.5\nPANEL 0 4.5 90\n\
         HOLD s 1.5 0.8 jug 0.1 hand|foot 0\nHOLD m 1.5 1.2 jug 0.1 hand|foot 0\nHOLD f 1.5 4.3 jug 0.1 hand 0\n\
         ROUTE r\nSTART s\nFINISH f\nUSE m\n",
    )
    .unwrap();
    let (c, cfg) = (climber(), ModelConfig::default());
    let p = planner(&doc.routes[0], &doc.wall, &c, &cfg);
    assert_eq!(p.plan().unwrap_err(), PlanError::Unreachable);
    assert_eq!(p.brute_force(12).unwrap_err(), PlanError::Unreachable);
}

#[test]
fn oracle_guards() {
    let doc = fixtures::ladder();
    let (c, cfg) = (climber(), ModelConfig::default());
    let p = planner(&doc.routes[0], &doc.wall, &c, &cfg);
    assert_eq!(p.brute_force(0).unwrap_err(), PlanError::Unreachable);
    assert!(matches!(p.brute_force(13), Err(PlanError::LimitExceeded(_))));
    let nine = fixtures::random_route(1, 9);
    let p = planner(&nine.routes[0], &nine.wall, &c, &cfg);
    assert_eq!(p.brute_force(4).unwrap_err().code(), "LIMIT_EXCEEDED");
}

#[test]
fn single_start_without_footholds_has_one_state() {
    let doc = fixtures::trap();
    let states = planner::start_states(&doc.routes[0], &doc.wall, &climber()).unwrap();
    assert_eq!(states.len(), 1);
    assert_eq!((states[0].lh.as_str(), states[0].rh.as_str()), ("s", "s"));
    assert_eq!((states[0].lf.as_deref(), states[0].rf.as_deref()), (None, None));
}

#[test]
fn foot_only_start_is_rejected() {
    let doc = parse_document(
        "WALL 3 4.5\nPANEL 0 4.5 90\nHOLD a 1 1 foothold 0.2 foot 0\nHOLD b 1 2 jug 0.1 hand 0\n",
    )
    .unwrap();
    let route = Route::new("r", vec!["a".into(), "b".into()], vec!["a".into()], "b");
    let err = planner::start_states(&route, &doc.wall, &climber()).unwrap_err();
    assert!(matches!(err, PlanError::Empty | PlanError::Invalid(_)));
}

/// Independent enumeration of start states over the 3 x 3 foot options.
#[test]
fn start_states_match_exhaustive_enumeration() {
    let doc = parse_document(
        "WALL 3 4.5\nPANEL 0 4.5 90\n\
         HOLD s1 1.2 1.6 jug 0.1 hand 0\nHOLD s2 1.8 1.7 jug 0.1 hand 0\n\
         HOLD f1 1.1 0.5 foothold 0.2 foot 0\nHOLD f2 1.9 0.1 foothold 0.2 foot 0\n\
         HOLD top 1.5 2.8 jug 0.1 hand 0\n\
         ROUTE r\nSTART s1 s2\nFINISH top\nUSE f1 f2\n",
    )
    .unwrap();
    let c = ClimberProfile { height: 1.3, arm_span: 1.3, ..climber() };
    let got = planner::start_states(&doc.routes[0], &doc.wall, &c).unwrap();
    let reach = reach_limit(&c);
    let hold = |id: &str| doc.wall.hold(id).unwrap();
    let options = [Some("f1"), Some("f2"), None];
    let mut want = Vec::new();
    for lf in options {
        for rf in options {
            let ok = |f: Option<&str>| {
                f.is_none_or(|f| {
                    let h = hold(f);
                    h.distance_to(hold("s1")) <= reach.hand_foot && h.distance_to(hold("s2")) <= reach.hand_foot
                })
            };
            if ok(lf) && ok(rf) {
                want.push((lf.map(String::from), rf.map(String::from)));
            }
        }
    }
    let mut got_pairs: Vec<_> = got.iter().map(|s| (s.lf.clone(), s.rf.clone())).collect();
    assert!(got.iter().all(|s| s.lh == "s1" && s.rh == "s2"));
    got_pairs.sort();
    want.sort();
    assert_eq!(got_pairs, want);
    // f2 is more than 1.2 * 1.3 m from both hands.
    assert_eq!(want.len(), 4);
}

#[test]
fn start_reach_excludes_far_footholds() {
    let doc = parse_document(
        "WALL 3 4.5\nPANEL 0 4.5 90\n\
         HOLD s 1.5 2.4 jug 0.1 hand 0\nHOLD near 1.4 1.2 foothold 0.2 foot 0\nHOLD far 1.5 0.1 foothold 0.2 foot 0\n\
         HOLD top 1.5 3.2 jug 0.1 hand 0\nROUTE r\nSTART s\nFINISH top\nUSE near far\n",
    )
    .unwrap();
    let states = planner::start_states(&doc.routes[0], &doc.wall, &climber()).unwrap();
    assert_eq!(states.len(), 4);
    assert!(states.iter().all(|s| s.lf.as_deref() != Some("far") && s.rf.as_deref() != Some("far")));
}

#[test]
fn ladder_successors_include_each_limb_up_one_rung() {
    let doc = fixtures::ladder();
    let c = climber();
    let state = BodyState {
        lh: "r3".into(),
        rh: "r3".into(),
        lf: Some("r1".into()),
        rf: Some("r1".into()),
        com_y: 0.8,
    };
    let next = planner::successors(&state, &doc.routes[0], &doc.wall, &c);
    for (limb, from, to) in [(Limb::LH, "r3", "r4"), (Limb::RH, "r3", "r4"), (Limb::LF, "r1", "r2"), (Limb::RF, "r1", "r2")] {
        assert!(
            next.iter().any(|(m, _)| m.limb == limb && m.from.as_deref() == Some(from) && m.to.as_deref() == Some(to)),
            "{limb} {from}->{to}"
        );
    }
    // Feet may not rise above both hands.
    assert!(!next.iter().any(|(m, _)| !m.limb.is_hand() && m.to.as_deref() == Some("r4")));
    let reach = reach_limit(&c);
    for (_, s) in &next {
        let h = |id: &str| doc.wall.hold(id).unwrap();
        assert!(h(&s.lh).distance_to(h(&s.rh)) <= reach.hand_hand);
    }
}

#[test]
fn finished_state_only_moves_feet() {
    let doc = fixtures::ladder();
    let state = BodyState { lh: "r5".into(), rh: "r5".into(), lf: Some("r3".into()), rf: None, com_y: 1.6 };
    let next = planner::successors(&state, &doc.routes[0], &doc.wall, &climber());
    assert!(!next.is_empty());
    assert!(next.iter().all(|(m, _)| !m.limb.is_hand()));
}

#[test]
fn reach_breaking_moves_are_excluded() {
    let doc = fixtures::ladder();
    let c = ClimberProfile { height: 1.0, arm_span: 1.0, ..climber() };
    let state = BodyState { lh: "r2".into(), rh: "r2".into(), lf: None, rf: None, com_y: 0.8 };
    let next = planner::successors(&state, &doc.routes[0], &doc.wall, &c);
    // r5 is 1.2 m above r2, beyond a 1.0 m span.
    assert!(next.iter().all(|(m, _)| m.to.as_deref() != Some("r5")));
    assert!(next.iter().any(|(m, _)| m.to.as_deref() == Some("r4")));
}

fn one_move() -> (Move, BodyState) {
    let mv = Move { limb: Limb::RH, from: Some("r2".into()), to: Some("r3".into()), distance: 0.4, move_type: MoveType::Reach };
    let state = BodyState { lh: "r2".into(), rh: "r2".into(), lf: Some("r1".into()), rf: Some("r1".into()), com_y: 0.6 };
    (mv, state)
}

#[test]
fn move_cost_definition() {
    let doc = fixtures::ladder();
    let (mv, state) = one_move();
    let mut c = ClimberProfile { fear_sensitivity: 0.0, ..climber() };
    // d_eff = 0.1 + 0.5 * 0.4 / 1.75 with uniform exposure and both feet set.
    c.ability = 0.1 + 0.5 * (0.4 / 1.75);
    let route = &doc.routes[0];
    let cost0 = planner::move_cost(&mv, &state, route, &doc.wall, &c, 0.0).unwrap();
    assert!((cost0 - 2f64.ln()).abs() < 1e-12);
    let cost1 = planner::move_cost(&mv, &state, route, &doc.wall, &c, 1.0).unwrap();
    assert!((cost1 - (2f64.ln() + 0.4 / 1.75)).abs() < 1e-12);
    c.ability = 1e9;
    assert_eq!(planner::move_cost(&mv, &state, route, &doc.wall, &c, 0.0).unwrap(), 0.0);
}

#[test]
fn full_arm_span_effort_adds_one() {
    let doc = parse_document(
        "WALL 3 4.5\nPANEL 0 4.5 90\nHOLD a 1.5 1.0 jug 0.1 hand 0\nHOLD b 1.5 2.75 jug 0.1 hand 0\n\
         ROUTE r\nSTART a\nFINISH b\n",
    )
    .unwrap();
    let state = BodyState { lh: "a".into(), rh: "a".into(), lf: None, rf: None, com_y: 1.0 };
    let mv = Move { limb: Limb::RH, from: Some("a".into()), to: Some("b".into()), distance: 1.75, move_type: MoveType::Dyno };
    let cfg = ModelConfig { lambda_effort: 1.0, ..ModelConfig::default() };
    let mut c = ClimberProfile { fear_sensitivity: 0.0, ..climber() };
    c.ability = 0.1 + 0.5 + 2.0 * cfg.unsupported_foot_penalty;
    let p = move_success_probability_with(&mv, &state, &doc.wall, &c, &cfg);
    assert_eq!(p, 0.5);
    let cost = planner::move_cost(&mv, &state, &doc.routes[0], &doc.wall, &c, 1.0).unwrap();
    assert!((cost - (2f64.ln() + 1.0)).abs() < 1e-12);
}

#[test]
fn success_probability_is_exp_of_cost_without_effort() {
    let cfg = ModelConfig { lambda_effort: 0.0, ..ModelConfig::default() };
    for doc in [fixtures::ladder(), fixtures::trap(), fixtures::two_hold()] {
        let c = climber();
        let beta = planner(&doc.routes[0], &doc.wall, &c, &cfg).plan().unwrap();
        let p = beta_success_probability(&beta, &doc.wall, &c, &cfg);
        assert!(((-beta.total_cost).exp() - p).abs() < 1e-12);
    }
}

#[test]
fn plan_is_deterministic_and_serializes_identically() {
    let doc = fixtures::trap();
    let (c, cfg) = (climber(), ModelConfig::default());
    let a = serde_json::to_string(&planner(&doc.routes[0], &doc.wall, &c, &cfg).plan().unwrap()).unwrap();
    let b = serde_json::to_string(&planner(&doc.routes[0], &doc.wall, &c, &cfg).plan().unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"LH\""));
}

#[test]
fn plan_without_a_key_move_costs_more() {
    let doc = fixtures::trap();
    let (c, cfg) = (climber(), ModelConfig::default());
    let p = planner(&doc.routes[0], &doc.wall, &c, &cfg);
    let beta = p.plan().unwrap();
    for mv in &beta.moves {
        match p.plan_without(mv.limb, mv.to.as_deref()) {
            Ok(alt) => {
                assert!(alt.total_cost >= beta.total_cost - 1e-12);
                assert!(!alt.moves.iter().any(|m| m.limb == mv.limb && m.to == mv.to));
            }
            Err(e) => assert_eq!(e, PlanError::Unreachable),
        }
    }
}
