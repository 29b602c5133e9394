//! Exhaustive reference planner for tests: a layered relaxation over every
//! body state, with its own move enumeration and state checks. Only the
//! per-move cost is shared with the A* planner.

use super::{Beta, Limbs, PlanError, Planner};

pub const MAX_HOLDS: usize = 8;
pub const MAX_MOVES: usize = 12;

const NONE: usize = usize::MAX;

fn legal(p: &Planner, s: &Limbs) -> bool {
    let holds = &p.holds;
    let free = p.free;
    let (lh, rh) = (s[0], s[1]);
    if lh == free || rh == free {
        return false;
    }
    let (a, b) = (holds[lh as usize], holds[rh as usize]);
    if !a.roles.hand || !b.roles.hand || a.distance_to(b) > p.climber.arm_span {
        return false;
    }
    let hand_foot = 1.2 * p.climber.height;
    s[2..].iter().filter(|&&f| f != free).all(|&f| {
        let h = holds[f as usize];
        h.roles.foot
            && h.distance_to(a) <= hand_foot
            && h.distance_to(b) <= hand_foot
            && (h.y <= a.y || h.y <= b.y)
    })
}

fn starts(p: &Planner) -> Vec<Limbs> {
    let hands: Vec<u8> = p.starts.iter().copied().filter(|&i| p.holds[i as usize].roles.hand).collect();
    let forced: Vec<u8> = p.starts.iter().copied().filter(|&i| !p.holds[i as usize].roles.hand).collect();
    let (lh, rh) = match hands[..] {
        [] => return Vec::new(),
        [h] => (h, h),
        [h0, h1, ..] => (h0, h1),
    };
    let below = p.holds[lh as usize].y.min(p.holds[rh as usize].y);
    let n = p.n as u8;
    let mut out = Vec::new();
    for lf in 0..=n {
        for rf in 0..=n {
            let s = [lh, rh, lf, rf];
            let foot_ok = |f: u8| f == p.free || p.holds[f as usize].y < below;
            if foot_ok(lf) && foot_ok(rf) && forced.iter().all(|f| lf == *f || rf == *f) && legal(p, &s) {
                out.push(s);
            }
        }
    }
    out
}

fn index(p: &Planner, s: &Limbs) -> usize {
    s.iter().fold(0, |acc, &h| acc * (p.n + 1) + h as usize)
}

fn terminal(p: &Planner, s: &Limbs) -> bool {
    s[0] == p.finish && s[1] == p.finish
}

pub(super) fn brute_force(p: &Planner, max_moves: usize) -> Result<Beta, PlanError> {
    if p.n > MAX_HOLDS || max_moves > MAX_MOVES {
        return Err(PlanError::LimitExceeded(format!(
            "{} holds, {} moves (limits {MAX_HOLDS}, {MAX_MOVES})",
            p.n, max_moves
        )));
    }
    let size = (p.n + 1).pow(4);
    let mut states = vec![[0u8; 4]; size];
    for (i, s) in states.iter_mut().enumerate() {
        let mut k = i;
        for slot in s.iter_mut().rev() {
            *slot = (k % (p.n + 1)) as u8;
            k /= p.n + 1;
        }
    }
    // cost[layer][state] is the cheapest way to stand in `state` after
    // exactly `layer` moves, without passing through a finish state.
    let mut cost = vec![vec![f64::INFINITY; size]; max_moves + 1];
    let mut parent = vec![vec![NONE; size]; max_moves + 1];
    let start = starts(p);
    if start.is_empty() {
        return Err(PlanError::Empty);
    }
    for s in &start {
        cost[0][index(p, s)] = 0.0;
    }
    for layer in 0..max_moves {
        for i in 0..size {
            let g = cost[layer][i];
            if !g.is_finite() || terminal(p, &states[i]) {
                continue;
            }
            let s = states[i];
            for limb in 0..4 {
                for to in 0..=p.n as u8 {
                    if to == s[limb] || (limb < 2 && to == p.free) {
                        continue;
                    }
                    let mut next = s;
                    next[limb] = to;
                    if !legal(p, &next) {
                        continue;
                    }
                    let j = index(p, &next);
                    let c = g + p.edge_cost(&s, limb, to);
                    if c < cost[layer + 1][j] {
                        cost[layer + 1][j] = c;
                        parent[layer + 1][j] = i;
                    }
                }
            }
        }
    }
    let mut best: Option<(f64, usize, usize)> = None;
    for (layer, row) in cost.iter().enumerate() {
        for (i, &c) in row.iter().enumerate() {
            if c.is_finite() && terminal(p, &states[i]) && best.is_none_or(|(b, _, _)| c < b) {
                best = Some((c, layer, i));
            }
        }
    }
    let (_, layer, mut i) = best.ok_or(PlanError::Unreachable)?;
    let mut path = vec![states[i]];
    for l in (1..=layer).rev() {
        i = parent[l][i];
        path.push(states[i]);
    }
    path.reverse();
    Ok(p.build_beta(&path))
}
