//! A* over body states, and the greedy baseline.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use super::{Forbidden, Limbs, Planner};

/// Largest state space stored in a flat table; bigger routes use a map.
const DENSE_LIMIT: usize = 1 << 18;
const NO_PARENT: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct Node {
    g: f64,
    moves: u32,
    parent: u32,
    closed: bool,
}

const UNSEEN: Node = Node { g: f64::INFINITY, moves: u32::MAX, parent: NO_PARENT, closed: false };

/// Flat node table reused across searches on one thread. A slot belongs to
/// the current search only if its stamp matches, so nothing is cleared
/// between searches.
struct Dense {
    nodes: Vec<(u32, Node)>,
    stamp: u32,
}

thread_local! {
    static SCRATCH: RefCell<Dense> = const { RefCell::new(Dense { nodes: Vec::new(), stamp: 0 }) };
}

enum Table<'a> {
    Dense(&'a mut Dense),
    Sparse(HashMap<u32, Node>),
}

impl Table<'_> {
    fn get(&self, key: u32) -> Node {
        match self {
            Table::Dense(d) => {
                let (stamp, node) = d.nodes[key as usize];
                if stamp == d.stamp {
                    node
                } else {
                    UNSEEN
                }
            }
            Table::Sparse(m) => m.get(&key).copied().unwrap_or(UNSEEN),
        }
    }

    fn set(&mut self, key: u32, node: Node) {
        match self {
            Table::Dense(d) => d.nodes[key as usize] = (d.stamp, node),
            Table::Sparse(m) => {
                m.insert(key, node);
            }
        }
    }
}

fn with_table<R>(size: usize, f: impl FnOnce(&mut Table) -> R) -> R {
    if size > DENSE_LIMIT {
        return f(&mut Table::Sparse(HashMap::new()));
    }
    SCRATCH.with(|cell| {
        let mut dense = cell.borrow_mut();
        if dense.nodes.len() < size {
            dense.nodes.resize(size, (0, UNSEEN));
        }
        dense.stamp = dense.stamp.wrapping_add(1);
        if dense.stamp == 0 {
            dense.nodes.iter_mut().for_each(|slot| *slot = (0, UNSEEN));
            dense.stamp = 1;
        }
        f(&mut Table::Dense(&mut dense))
    })
}

/// Heap entry ordered so the smallest (f, moves, key) pops first.
#[derive(PartialEq)]
struct Entry {
    f: f64,
    moves: u32,
    key: u32,
    state: Limbs,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .f
            .total_cmp(&self.f)
            .then(other.moves.cmp(&self.moves))
            .then(other.key.cmp(&self.key))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn better(g: f64, moves: u32, than: &Node) -> bool {
    match g.total_cmp(&than.g) {
        Ordering::Less => true,
        Ordering::Equal => moves < than.moves,
        Ordering::Greater => false,
    }
}

fn decode(p: &Planner, mut key: u32) -> Limbs {
    let b = p.n as u32 + 1;
    let mut s = [0u8; 4];
    for slot in s.iter_mut().rev() {
        *slot = (key % b) as u8;
        key /= b;
    }
    s
}

fn unwind(p: &Planner, table: &Table, mut key: u32) -> Vec<Limbs> {
    let mut path = vec![decode(p, key)];
    loop {
        let parent = table.get(key).parent;
        if parent == NO_PARENT {
            break;
        }
        path.push(decode(p, parent));
        key = parent;
    }
    path.reverse();
    path
}

/// Least-cost path from any start to a state with both hands on the finish.
/// Ties go to fewer moves, then to the smaller state key.
pub(super) fn astar(p: &Planner, starts: &[Limbs], forbidden: Option<Forbidden>) -> Option<Vec<Limbs>> {
    with_table(p.state_space(), |table| search(p, table, starts, forbidden))
}

fn search(p: &Planner, table: &mut Table, starts: &[Limbs], forbidden: Option<Forbidden>) -> Option<Vec<Limbs>> {
    let mut heap = BinaryHeap::new();
    for s in starts {
        let key = p.key(s);
        table.set(key, Node { g: 0.0, moves: 0, parent: NO_PARENT, closed: false });
        heap.push(Entry { f: p.bound(s), moves: 0, key, state: *s });
    }
    let mut succ = Vec::with_capacity(64);
    while let Some(Entry { key, state, .. }) = heap.pop() {
        let mut node = table.get(key);
        if node.closed {
            continue;
        }
        node.closed = true;
        table.set(key, node);
        if p.is_terminal(&state) {
            return Some(unwind(p, table, key));
        }
        p.expand(&state, forbidden, &mut succ);
        let site = p.site(&state);
        for &(limb, to, next) in &succ {
            let nk = p.key(&next);
            let old = table.get(nk);
            if old.closed {
                continue;
            }
            let g = node.g + p.cost_at(&site, limb, to);
            let moves = node.moves + 1;
            if better(g, moves, &old) {
                table.set(nk, Node { g, moves, parent: key, closed: false });
                heap.push(Entry { f: g + p.bound(&next), moves, key: nk, state: next });
            }
        }
    }
    None
}

fn top_hand(p: &Planner, s: &Limbs) -> f64 {
    p.pts[s[0] as usize].y.max(p.pts[s[1] as usize].y)
}

fn greedy_from(p: &Planner, start: Limbs) -> Option<(f64, Vec<Limbs>)> {
    let mut path = vec![start];
    let mut cost = 0.0;
    let mut s = start;
    let mut succ = Vec::with_capacity(64);
    // Every step raises the top hand, so the walk cannot revisit a state.
    while !p.is_terminal(&s) {
        p.expand(&s, None, &mut succ);
        let step = succ
            .iter()
            .filter(|(_, _, next)| p.is_terminal(next) || top_hand(p, next) > top_hand(p, &s))
            .map(|&(limb, to, next)| (p.edge_cost(&s, limb, to), next))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(p.key(&a.1).cmp(&p.key(&b.1))))?;
        cost += step.0;
        s = step.1;
        path.push(s);
    }
    Some((cost, path))
}

/// Myopic baseline: from each start, repeatedly take the cheapest move that
/// raises the top hand or reaches the finish.
/// Returns the cheapest completed walk.
pub(super) fn greedy(p: &Planner, starts: &[Limbs]) -> Option<Vec<Limbs>> {
    let mut best: Option<(f64, Vec<Limbs>)> = None;
    for &s in starts {
        if let Some((cost, path)) = greedy_from(p, s) {
            if best.as_ref().is_none_or(|(c, _)| cost < *c) {
                best = Some((cost, path));
            }
        }
    }
    best.map(|(_, path)| path)
}
