//! Movement style: move classification, style vectors, the reward of a beta,
//! and chaotic route variation.

pub mod classify;
pub mod lorenz;
pub mod vary;

use serde::{Deserialize, Serialize};

use crate::model::{MoveType, StyleVector};
use crate::planner::Beta;

pub use classify::classify_move;
pub use lorenz::{lorenz_trajectory, LorenzError, LorenzParams, LorenzState};
pub use vary::vary_route;

/// Normalized histogram of move types; an empty sequence is uniform.
pub fn style_vector_of(types: &[MoveType]) -> StyleVector {
    if types.is_empty() {
        return StyleVector::uniform();
    }
    let mut w = [0.0; MoveType::COUNT];
    for t in types {
        w[*t as usize] += 1.0;
    }
    let n = types.len() as f64;
    w.iter_mut().for_each(|v| *v /= n);
    StyleVector(w)
}

pub fn style_vector(beta: &Beta) -> StyleVector {
    style_vector_of(&move_types(beta))
}

pub fn move_types(beta: &Beta) -> Vec<MoveType> {
    beta.moves.iter().map(|m| m.move_type).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RewardWeights {
    pub diversity: f64,
    pub style_match: f64,
    pub novelty: f64,
    pub repetition: f64,
}

impl Default for RewardWeights {
    fn default() -> Self {
        RewardWeights { diversity: 0.4, style_match: 0.3, novelty: 0.2, repetition: 0.1 }
    }
}

/// Shannon entropy divided by its maximum, ln 7.
pub fn normalized_entropy(v: &StyleVector) -> f64 {
    let h: f64 = v.0.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum();
    (h / (MoveType::COUNT as f64).ln()).clamp(0.0, 1.0)
}

/// Levenshtein distance over the longer length; 0 for two empty sequences.
pub fn normalized_edit_distance(a: &[MoveType], b: &[MoveType]) -> f64 {
    let longest = a.len().max(b.len());
    if longest == 0 {
        return 0.0;
    }
    strsim::generic_levenshtein(&a.to_vec(), &b.to_vec()) as f64 / longest as f64
}

/// Longest run of one move type over the sequence length; 0 when empty.
pub fn repetition(types: &[MoveType]) -> f64 {
    if types.is_empty() {
        return 0.0;
    }
    let (mut best, mut run) = (1, 1);
    for w in types.windows(2) {
        run = if w[0] == w[1] { run + 1 } else { 1 };
        best = best.max(run);
    }
    best as f64 / types.len() as f64
}

/// Reward of a move-type sequence. With no prior sequences the novelty term
/// is 1: nothing has been climbed yet, so the sequence is entirely new.
pub fn reward_of_types(
    types: &[MoveType],
    target: Option<&StyleVector>,
    priors: &[Vec<MoveType>],
    w: &RewardWeights,
) -> f64 {
    let style = style_vector_of(types);
    let matched = target.map_or(0.0, |t| 1.0 - style.l1_distance(t) / 2.0);
    let novelty = priors
        .iter()
        .map(|p| normalized_edit_distance(types, p))
        .fold(1.0, f64::min);
    w.diversity * normalized_entropy(&style) + w.style_match * matched + w.novelty * novelty
        - w.repetition * repetition(types)
}

pub fn reward(beta: &Beta, target: Option<&StyleVector>, priors: &[Beta], w: &RewardWeights) -> f64 {
    let priors: Vec<Vec<MoveType>> = priors.iter().map(move_types).collect();
    reward_of_types(&move_types(beta), target, &priors, w)
}

/// Each move's contribution: the reward lost when that move is left out.
pub fn move_contributions(types: &[MoveType], target: Option<&StyleVector>, w: &RewardWeights) -> Vec<f64> {
    let full = reward_of_types(types, target, &[], w);
    (0..types.len())
        .map(|i| {
            let rest: Vec<MoveType> = types.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, t)| *t).collect();
            full - reward_of_types(&rest, target, &[], w)
        })
        .collect()
}

/// Indices of the `k` largest contributions, earliest first on ties.
pub fn key_moves(types: &[MoveType], target: Option<&StyleVector>, w: &RewardWeights, k: usize) -> Vec<usize> {
    let c = move_contributions(types, target, w);
    let mut idx: Vec<usize> = (0..types.len()).collect();
    idx.sort_by(|&a, &b| c[b].total_cmp(&c[a]).then(a.cmp(&b)));
    idx.truncate(k.min(types.len()));
    idx
}
