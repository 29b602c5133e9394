//! Structural checks for walls and routes. Problems are reported, never thrown.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::model::{HoldType, Route, Wall};

const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IssueCode {
    EmptyRoute,
    UnknownHold,
    DuplicateHold,
    StartCount,
    StartNotInRoute,
    StartNotHandhold,
    FinishNotInRoute,
    FinishNotHandhold,
    WallSize,
    PanelAngle,
    PanelCoverage,
    HoldOutOfBounds,
    DifficultyRange,
    OrientationRange,
    DuplicateHoldId,
    FootholdRoles,
    EmptyRoles,
}

impl IssueCode {
    pub fn as_str(self) -> &'static str {
        match self {
            IssueCode::EmptyRoute => "EMPTY_ROUTE",
            IssueCode::UnknownHold => "UNKNOWN_HOLD",
            IssueCode::DuplicateHold => "DUPLICATE_HOLD",
            IssueCode::StartCount => "START_COUNT",
            IssueCode::StartNotInRoute => "START_NOT_IN_ROUTE",
            IssueCode::StartNotHandhold => "START_NOT_HANDHOLD",
            IssueCode::FinishNotInRoute => "FINISH_NOT_IN_ROUTE",
            IssueCode::FinishNotHandhold => "FINISH_NOT_HANDHOLD",
            IssueCode::WallSize => "WALL_SIZE",
            IssueCode::PanelAngle => "PANEL_ANGLE",
            IssueCode::PanelCoverage => "PANEL_COVERAGE",
            IssueCode::HoldOutOfBounds => "HOLD_OUT_OF_BOUNDS",
            IssueCode::DifficultyRange => "DIFFICULTY_RANGE",
            IssueCode::OrientationRange => "ORIENTATION_RANGE",
            IssueCode::DuplicateHoldId => "DUPLICATE_HOLD_ID",
            IssueCode::FootholdRoles => "FOOTHOLD_ROLES",
            IssueCode::EmptyRoles => "EMPTY_ROLES",
        }
    }
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Issue {
    pub code: IssueCode,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hold_id: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    fn from_issues(issues: Vec<Issue>) -> Self {
        ValidationReport { ok: issues.is_empty(), issues }
    }

    pub fn has(&self, code: IssueCode) -> bool {
        self.issues.iter().any(|i| i.code == code)
    }
}

struct Collector(Vec<Issue>);

impl Collector {
    fn push(&mut self, code: IssueCode, message: String, hold_id: Option<&str>) {
        self.0.push(Issue { code, message, hold_id: hold_id.map(str::to_string) });
    }
}

pub fn validate_wall(wall: &Wall) -> ValidationReport {
    let mut out = Collector(Vec::new());
    if !(wall.width > 0.0 && wall.height > 0.0) {
        out.push(
            IssueCode::WallSize,
            format!("wall size {}x{} must be positive", wall.width, wall.height),
            None,
        );
    }

    for p in &wall.panels {
        if !(60.0..=180.0).contains(&p.angle) {
            out.push(
                IssueCode::PanelAngle,
                format!("panel {}..{} angle {} outside [60, 180]", p.y0, p.y1, p.angle),
                None,
            );
        }
    }
    let mut panels = wall.panels.clone();
    panels.sort_by(|a, b| a.y0.total_cmp(&b.y0));
    let mut cursor = 0.0;
    let mut covered = !panels.is_empty();
    for p in &panels {
        if (p.y0 - cursor).abs() > EPS || p.y1 <= p.y0 {
            covered = false;
            break;
        }
        cursor = p.y1;
    }
    if !covered || (cursor - wall.height).abs() > EPS {
        out.push(
            IssueCode::PanelCoverage,
            format!("panels must partition [0, {}] without gaps or overlap", wall.height),
            None,
        );
    }

    let mut seen = HashSet::new();
    for h in &wall.holds {
        let id = Some(h.id.as_str());
        if !seen.insert(h.id.as_str()) {
            out.push(IssueCode::DuplicateHoldId, format!("hold id `{}` repeated", h.id), id);
        }
        if !(0.0..=wall.width).contains(&h.x) || !(0.0..=wall.height).contains(&h.y) {
            out.push(
                IssueCode::HoldOutOfBounds,
                format!("hold `{}` at ({}, {}) lies outside the wall", h.id, h.x, h.y),
                id,
            );
        }
        if !(0.0..=1.0).contains(&h.difficulty) {
            out.push(
                IssueCode::DifficultyRange,
                format!("hold `{}` difficulty {} outside [0, 1]", h.id, h.difficulty),
                id,
            );
        }
        if !(0.0..360.0).contains(&h.orientation) {
            out.push(
                IssueCode::OrientationRange,
                format!("hold `{}` orientation {} outside [0, 360)", h.id, h.orientation),
                id,
            );
        }
        if h.roles.is_empty() {
            out.push(IssueCode::EmptyRoles, format!("hold `{}` has no roles", h.id), id);
        } else if h.hold_type == HoldType::Foothold && h.roles.hand {
            out.push(
                IssueCode::FootholdRoles,
                format!("foothold `{}` may only be used by feet", h.id),
                id,
            );
        }
    }
    ValidationReport::from_issues(out.0)
}

/// Checks the route against its own invariants and the wall it is set on.
/// The wall itself is assumed to have been checked with [`validate_wall`].
pub fn validate_route(route: &Route, wall: &Wall) -> ValidationReport {
    let mut out = Collector(Vec::new());
    if route.hold_ids.is_empty() {
        out.push(IssueCode::EmptyRoute, format!("route `{}` uses no holds", route.name), None);
    }
    let mut seen = HashSet::new();
    for id in &route.hold_ids {
        if !seen.insert(id.as_str()) {
            out.push(IssueCode::DuplicateHold, format!("hold `{id}` listed twice"), Some(id));
        }
        if wall.hold(id).is_none() {
            out.push(IssueCode::UnknownHold, format!("hold `{id}` is not on the wall"), Some(id));
        }
    }

    if !(1..=2).contains(&route.start_hold_ids.len()) {
        out.push(
            IssueCode::StartCount,
            format!("route needs 1 or 2 start holds, found {}", route.start_hold_ids.len()),
            None,
        );
    }
    for id in &route.start_hold_ids {
        if !route.uses(id) {
            out.push(
                IssueCode::StartNotInRoute,
                format!("start hold `{id}` is not part of the route"),
                Some(id),
            );
        }
    }
    let any_start_hand = route
        .start_hold_ids
        .iter()
        .any(|id| wall.hold(id).is_some_and(|h| h.roles.hand));
    if !route.start_hold_ids.is_empty() && !any_start_hand {
        out.push(
            IssueCode::StartNotHandhold,
            "no start hold can be used by a hand".to_string(),
            route.start_hold_ids.first().map(String::as_str),
        );
    }

    let finish = route.finish_hold_id.as_str();
    if !route.uses(finish) {
        out.push(
            IssueCode::FinishNotInRoute,
            format!("finish hold `{finish}` is not part of the route"),
            Some(finish),
        );
    }
    if let Some(h) = wall.hold(finish) {
        if !h.roles.hand {
            out.push(
                IssueCode::FinishNotHandhold,
                format!("finish hold `{finish}` cannot be used by a hand"),
                Some(finish),
            );
        }
    }
    ValidationReport::from_issues(out.0)
}
