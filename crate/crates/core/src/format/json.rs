//! Structured-object form used by the HTTP API.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::grade::GradeLabel;
use crate::model::{Hold, HoldType, MoveType, Panel, Roles, Route, Wall};
use crate::validate::{validate_route, validate_wall, IssueCode};

use super::{Document, ParseError, ParseErrorCode, SourceLocation};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PanelJson {
    pub y0: f64,
    pub y1: f64,
    pub angle_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoldJson {
    pub id: String,
    pub x: f64,
    pub y: f64,
    #[serde(rename = "type")]
    pub hold_type: HoldType,
    pub difficulty: f64,
    pub roles: Roles,
    pub orientation_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallJson {
    pub width_m: f64,
    pub height_m: f64,
    pub panels: Vec<PanelJson>,
    pub holds: Vec<HoldJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RouteJson {
    pub name: String,
    pub hold_ids: Vec<String>,
    pub start_hold_ids: Vec<String>,
    pub finish_hold_id: String,
    #[serde(default)]
    pub grade: Option<GradeLabel>,
    #[serde(default)]
    pub style_tags: Vec<MoveType>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DocumentJson {
    pub wall: WallJson,
    #[serde(default)]
    pub routes: Vec<RouteJson>,
}

impl From<&Wall> for WallJson {
    fn from(w: &Wall) -> Self {
        WallJson {
            width_m: w.width,
            height_m: w.height,
            panels: w
                .panels
                .iter()
                .map(|p| PanelJson { y0: p.y0, y1: p.y1, angle_deg: p.angle })
                .collect(),
            holds: w
                .holds
                .iter()
                .map(|h| HoldJson {
                    id: h.id.clone(),
                    x: h.x,
                    y: h.y,
                    hold_type: h.hold_type,
                    difficulty: h.difficulty,
                    roles: h.roles,
                    orientation_deg: h.orientation,
                })
                .collect(),
        }
    }
}

impl From<WallJson> for Wall {
    fn from(w: WallJson) -> Self {
        Wall {
            width: w.width_m,
            height: w.height_m,
            panels: w
                .panels
                .into_iter()
                .map(|p| Panel { y0: p.y0, y1: p.y1, angle: p.angle_deg })
                .collect(),
            holds: w
                .holds
                .into_iter()
                .map(|h| Hold {
                    id: h.id,
                    x: h.x,
                    y: h.y,
                    hold_type: h.hold_type,
                    difficulty: h.difficulty,
                    roles: h.roles,
                    orientation: h.orientation_deg,
                })
                .collect(),
        }
    }
}

impl From<&Route> for RouteJson {
    fn from(r: &Route) -> Self {
        RouteJson {
            name: r.name.clone(),
            hold_ids: r.hold_ids.clone(),
            start_hold_ids: r.start_hold_ids.clone(),
            finish_hold_id: r.finish_hold_id.clone(),
            grade: r.assigned_grade,
            style_tags: r.style_tags.clone(),
        }
    }
}

impl From<RouteJson> for Route {
    fn from(r: RouteJson) -> Self {
        let mut route = Route::new(r.name, r.hold_ids, r.start_hold_ids, r.finish_hold_id);
        route.assigned_grade = r.grade;
        route.style_tags = r.style_tags;
        route
    }
}

fn json_error(path: &str, message: impl std::fmt::Display, code: ParseErrorCode) -> ParseError {
    let path = if path.is_empty() || path == "." { "$".to_string() } else { format!("$.{path}") };
    ParseError::new(SourceLocation::new(1, 1), code, format!("{path}: {message}"))
}

/// Decodes any serde type from a JSON value, reporting the failing path.
pub fn decode<T: for<'de> Deserialize<'de>>(value: &Value) -> Result<T, ParseError> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        json_error(&path, e.inner(), ParseErrorCode::Arity)
    })
}

pub fn wall_to_json(wall: &Wall) -> Value {
    serde_json::to_value(WallJson::from(wall)).expect("wall serializes")
}

pub fn route_to_json(route: &Route) -> Value {
    serde_json::to_value(RouteJson::from(route)).expect("route serializes")
}

pub fn to_json_object(wall: &Wall, routes: &[Route]) -> Value {
    let doc = DocumentJson {
        wall: WallJson::from(wall),
        routes: routes.iter().map(RouteJson::from).collect(),
    };
    serde_json::to_value(doc).expect("document serializes")
}

/// Semantic checks shared by every JSON entry point; `prefix` is the path of
/// the wall object in the request.
pub fn check_wall(wall: &Wall, prefix: &str) -> Vec<ParseError> {
    validate_wall(wall)
        .issues
        .into_iter()
        .map(|issue| {
            let path = match &issue.hold_id {
                Some(id) => {
                    let i = wall.holds.iter().position(|h| &h.id == id).unwrap_or(0);
                    format!("{prefix}.holds[{i}]")
                }
                None => prefix.to_string(),
            };
            let code = match issue.code {
                IssueCode::DuplicateHoldId => ParseErrorCode::DuplicateId,
                _ => ParseErrorCode::Range,
            };
            json_error(&path, issue.message, code)
        })
        .collect()
}

pub fn check_route(route: &Route, wall: &Wall, prefix: &str) -> Vec<ParseError> {
    validate_route(route, wall)
        .issues
        .into_iter()
        .map(|issue| {
            let (field, code) = match issue.code {
                IssueCode::UnknownHold => ("hold_ids", ParseErrorCode::UndefinedRef),
                IssueCode::DuplicateHold => ("hold_ids", ParseErrorCode::DuplicateId),
                IssueCode::EmptyRoute => ("hold_ids", ParseErrorCode::Arity),
                IssueCode::StartCount => ("start_hold_ids", ParseErrorCode::Arity),
                IssueCode::StartNotInRoute => ("start_hold_ids", ParseErrorCode::UndefinedRef),
                IssueCode::StartNotHandhold => ("start_hold_ids", ParseErrorCode::Range),
                IssueCode::FinishNotInRoute => ("finish_hold_id", ParseErrorCode::UndefinedRef),
                _ => ("finish_hold_id", ParseErrorCode::Range),
            };
            json_error(&format!("{prefix}.{field}"), issue.message, code)
        })
        .collect()
}

pub fn from_json_object(obj: &Value) -> Result<Document, Vec<ParseError>> {
    let doc: DocumentJson = decode(obj).map_err(|e| vec![e])?;
    let wall = Wall::from(doc.wall);
    let routes: Vec<Route> = doc.routes.into_iter().map(Route::from).collect();
    let mut errors = check_wall(&wall, "wall");
    for (i, r) in routes.iter().enumerate() {
        errors.extend(check_route(r, &wall, &format!("routes[{i}]")));
        if routes[..i].iter().any(|other| other.name == r.name) {
            errors.push(json_error(
                &format!("routes[{i}].name"),
                format!("route `{}` already defined", r.name),
                ParseErrorCode::DuplicateId,
            ));
        }
    }
    if errors.is_empty() {
        Ok(Document { wall, routes })
    } else {
        Err(errors)
    }
}
