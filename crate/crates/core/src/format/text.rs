//! The line-based route document format.
//!
//! ```text
//! WALL <width> <height>
//! PANEL <y0> <y1> <angle>
//! HOLD <id> <x> <y> <type> <difficulty> <roles> <orientation>
//! ROUTE <name>
//! START <id> [<id>]
//! FINISH <id>
//! USE <id>...
//! GRADE <label>
//! STYLE <tag>...
//! ```
//!
//! `START`, `FINISH`, `USE`, `GRADE` and `STYLE` apply to the most recent
//! `ROUTE`. A route's holds are the union of its `USE`, `START` and `FINISH`
//! references. Parsing collects every error instead of stopping at the first.

use std::collections::{HashMap, HashSet};

use crate::grade::GradeLabel;
use crate::model::{Hold, HoldType, MoveType, Panel, Roles, Route, Wall};
use crate::validate::{validate_route, validate_wall};

use super::{fmt_num, Document, ParseError, ParseErrorCode, SourceLocation};

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let content = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    let mut column = 0;
    for (byte, ch) in content.char_indices() {
        column += 1;
        if ch.is_whitespace() {
            if let Some((b, c)) = start.take() {
                tokens.push(Token { text: &content[b..byte], column: c });
            }
        } else if start.is_none() {
            start = Some((byte, column));
        }
    }
    if let Some((b, c)) = start {
        tokens.push(Token { text: &content[b..], column: c });
    }
    tokens
}

struct PendingRoute {
    route: Route,
    line: usize,
    start_loc: Option<SourceLocation>,
    finish_loc: Option<SourceLocation>,
    refs: Vec<(String, SourceLocation)>,
}

#[derive(Default)]
struct Parser {
    errors: Vec<ParseError>,
    wall_dims: Option<(f64, f64, SourceLocation)>,
    panels: Vec<(Panel, SourceLocation)>,
    holds: Vec<(Hold, SourceLocation, SourceLocation)>,
    hold_index: HashMap<String, usize>,
    /// Ids of HOLD records that were rejected; references to them are not
    /// reported again.
    broken_holds: HashSet<String>,
    routes: Vec<PendingRoute>,
    route_names: HashMap<String, usize>,
}

impl Parser {
    fn err(&mut self, loc: SourceLocation, code: ParseErrorCode, msg: impl Into<String>) {
        self.errors.push(ParseError::new(loc, code, msg));
    }

    fn number(&mut self, line: usize, tok: &Token<'_>, what: &str) -> Option<f64> {
        match tok.text.parse::<f64>() {
            Ok(v) if v.is_finite() => Some(v),
            _ => {
                self.err(
                    SourceLocation::new(line, tok.column),
                    ParseErrorCode::NumberFormat,
                    format!("{what}: `{}` is not a finite number", tok.text),
                );
                None
            }
        }
    }

    fn arity(&mut self, line: usize, keyword: &Token<'_>, expected: &str, got: usize) -> bool {
        self.err(
            SourceLocation::new(line, keyword.column),
            ParseErrorCode::Arity,
            format!("{} expects {expected} argument(s), got {got}", keyword.text),
        );
        false
    }

    fn current_route(&mut self, line: usize, keyword: &Token<'_>) -> Option<usize> {
        if self.routes.is_empty() {
            self.err(
                SourceLocation::new(line, keyword.column),
                ParseErrorCode::UndefinedRef,
                format!("{} appears before any ROUTE", keyword.text),
            );
            None
        } else {
            Some(self.routes.len() - 1)
        }
    }

    fn record(&mut self, line: usize, tokens: &[Token<'_>]) {
        let kw = &tokens[0];
        let args = &tokens[1..];
        let loc = |t: &Token<'_>| SourceLocation::new(line, t.column);
        match kw.text {
            "WALL" => {
                if args.len() != 2 {
                    self.arity(line, kw, "2", args.len());
                    return;
                }
                let w = self.number(line, &args[0], "wall width");
                let h = self.number(line, &args[1], "wall height");
                if self.wall_dims.is_some() {
                    self.err(loc(kw), ParseErrorCode::DuplicateId, "second WALL record");
                    return;
                }
                if let (Some(w), Some(h)) = (w, h) {
                    for (v, t) in [(w, &args[0]), (h, &args[1])] {
                        if v <= 0.0 {
                            self.err(loc(t), ParseErrorCode::Range, format!("wall size {v} must be positive"));
                        }
                    }
                    self.wall_dims = Some((w, h, loc(kw)));
                }
            }
            "PANEL" => {
                if args.len() != 3 {
                    self.arity(line, kw, "3", args.len());
                    return;
                }
                let y0 = self.number(line, &args[0], "panel y0");
                let y1 = self.number(line, &args[1], "panel y1");
                let angle = self.number(line, &args[2], "panel angle");
                if let Some(a) = angle {
                    if !(60.0..=180.0).contains(&a) {
                        self.err(loc(&args[2]), ParseErrorCode::Range, format!("panel angle {a} outside [60, 180]"));
                    }
                }
                if let (Some(y0), Some(y1), Some(angle)) = (y0, y1, angle) {
                    if y1 <= y0 {
                        self.err(loc(&args[1]), ParseErrorCode::Range, format!("panel y1 {y1} must exceed y0 {y0}"));
                    }
                    self.panels.push((Panel { y0, y1, angle }, loc(kw)));
                }
            }
            "HOLD" => {
                if args.len() != 7 {
                    self.arity(line, kw, "7", args.len());
                    return;
                }
                let id = args[0].text.to_string();
                let x = self.number(line, &args[1], "hold x");
                let y = self.number(line, &args[2], "hold y");
                let hold_type = args[3].text.parse::<HoldType>().ok();
                if hold_type.is_none() {
                    self.err(loc(&args[3]), ParseErrorCode::UnknownKeyword, format!("unknown hold type `{}`", args[3].text));
                }
                let difficulty = self.number(line, &args[4], "hold difficulty");
                if let Some(d) = difficulty {
                    if !(0.0..=1.0).contains(&d) {
                        self.err(loc(&args[4]), ParseErrorCode::Range, format!("difficulty {d} outside [0, 1]"));
                    }
                }
                let roles = args[5].text.parse::<Roles>().ok();
                if roles.is_none() {
                    self.err(loc(&args[5]), ParseErrorCode::UnknownKeyword, format!("unknown roles `{}`", args[5].text));
                }
                if let (Some(HoldType::Foothold), Some(r)) = (hold_type, roles) {
                    if r.hand {
                        self.err(loc(&args[5]), ParseErrorCode::Range, "a foothold may only carry the foot role");
                    }
                }
                let orientation = self.number(line, &args[6], "hold orientation");
                if let Some(o) = orientation {
                    if !(0.0..360.0).contains(&o) {
                        self.err(loc(&args[6]), ParseErrorCode::Range, format!("orientation {o} outside [0, 360)"));
                    }
                }
                if self.hold_index.contains_key(&id) {
                    self.err(loc(&args[0]), ParseErrorCode::DuplicateId, format!("hold `{id}` already defined"));
                    return;
                }
                if let (Some(x), Some(y), Some(hold_type), Some(difficulty), Some(roles), Some(orientation)) =
                    (x, y, hold_type, difficulty, roles, orientation)
                {
                    self.hold_index.insert(id.clone(), self.holds.len());
                    self.holds.push((
                        Hold { id, x, y, hold_type, difficulty, roles, orientation },
                        loc(&args[1]),
                        loc(kw),
                    ));
                } else {
                    self.broken_holds.insert(id);
                }
            }
            "ROUTE" => {
                if args.len() != 1 {
                    self.arity(line, kw, "1", args.len());
                    return;
                }
                let name = args[0].text.to_string();
                if self.route_names.contains_key(&name) {
                    self.err(loc(&args[0]), ParseErrorCode::DuplicateId, format!("route `{name}` already defined"));
                }
                self.route_names.insert(name.clone(), self.routes.len());
                self.routes.push(PendingRoute {
                    route: Route::new(name, Vec::new(), Vec::new(), String::new()),
                    line,
                    start_loc: None,
                    finish_loc: None,
                    refs: Vec::new(),
                });
            }
            "START" => {
                let Some(r) = self.current_route(line, kw) else { return };
                if !(1..=2).contains(&args.len()) {
                    self.arity(line, kw, "1 or 2", args.len());
                    return;
                }
                if self.routes[r].start_loc.is_some() {
                    self.err(loc(kw), ParseErrorCode::DuplicateId, "route already has a START record");
                    return;
                }
                let pending = &mut self.routes[r];
                pending.start_loc = Some(loc(kw));
                for a in args {
                    pending.route.start_hold_ids.push(a.text.to_string());
                    pending.refs.push((a.text.to_string(), loc(a)));
                }
            }
            "FINISH" => {
                let Some(r) = self.current_route(line, kw) else { return };
                if args.len() != 1 {
                    self.arity(line, kw, "1", args.len());
                    return;
                }
                if self.routes[r].finish_loc.is_some() {
                    self.err(loc(kw), ParseErrorCode::DuplicateId, "route already has a FINISH record");
                    return;
                }
                let pending = &mut self.routes[r];
                pending.finish_loc = Some(loc(kw));
                pending.route.finish_hold_id = args[0].text.to_string();
                pending.refs.push((args[0].text.to_string(), loc(&args[0])));
            }
            "USE" => {
                let Some(r) = self.current_route(line, kw) else { return };
                if args.is_empty() {
                    self.arity(line, kw, "at least 1", 0);
                    return;
                }
                let pending = &mut self.routes[r];
                for a in args {
                    pending.refs.push((a.text.to_string(), loc(a)));
                }
            }
            "GRADE" => {
                let Some(r) = self.current_route(line, kw) else { return };
                if args.len() != 1 {
                    self.arity(line, kw, "1", args.len());
                    return;
                }
                match args[0].text.parse::<GradeLabel>() {
                    Ok(g) => self.routes[r].route.assigned_grade = Some(g),
                    Err(e) => self.err(loc(&args[0]), ParseErrorCode::Range, e.to_string()),
                }
            }
            "STYLE" => {
                let Some(r) = self.current_route(line, kw) else { return };
                if args.is_empty() {
                    self.arity(line, kw, "at least 1", 0);
                    return;
                }
                for a in args {
                    match a.text.parse::<MoveType>() {
                        Ok(t) => self.routes[r].route.style_tags.push(t),
                        Err(()) => self.err(loc(a), ParseErrorCode::UnknownKeyword, format!("unknown style tag `{}`", a.text)),
                    }
                }
            }
            other => self.err(loc(kw), ParseErrorCode::UnknownKeyword, format!("unknown record `{other}`")),
        }
    }

    fn finish(mut self) -> Result<Document, Vec<ParseError>> {
        let Some((width, height, wall_loc)) = self.wall_dims else {
            self.err(SourceLocation::new(1, 1), ParseErrorCode::UndefinedRef, "document has no WALL record");
            return Err(self.errors);
        };

        if self.panels.is_empty() {
            self.err(wall_loc, ParseErrorCode::UndefinedRef, "wall has no PANEL records");
        } else {
            let mut sorted: Vec<&(Panel, SourceLocation)> = self.panels.iter().collect();
            sorted.sort_by(|a, b| a.0.y0.total_cmp(&b.0.y0));
            let mut cursor = 0.0;
            let mut bad: Option<SourceLocation> = None;
            for (p, l) in &sorted {
                if (p.y0 - cursor).abs() > 1e-9 {
                    bad = Some(*l);
                    break;
                }
                cursor = p.y1;
            }
            if bad.is_none() && (cursor - height).abs() > 1e-9 {
                bad = Some(sorted.last().unwrap().1);
            }
            if let Some(l) = bad {
                self.err(l, ParseErrorCode::Range, format!("panels must partition [0, {height}] without gaps or overlap"));
            }
        }

        for (h, xy_loc, _) in &self.holds {
            if !(0.0..=width).contains(&h.x) || !(0.0..=height).contains(&h.y) {
                self.errors.push(ParseError::new(
                    *xy_loc,
                    ParseErrorCode::Range,
                    format!("hold `{}` at ({}, {}) lies outside the {width}x{height} wall", h.id, h.x, h.y),
                ));
            }
        }

        let mut routes = Vec::with_capacity(self.routes.len());
        let route_lines: Vec<usize> = self.routes.iter().map(|r| r.line).collect();
        for pending in std::mem::take(&mut self.routes) {
            let route_loc = SourceLocation::new(pending.line, 1);
            let mut route = pending.route;
            for (id, l) in &pending.refs {
                if self.broken_holds.contains(id) {
                    continue;
                }
                if !self.hold_index.contains_key(id) {
                    self.err(*l, ParseErrorCode::UndefinedRef, format!("hold `{id}` is not defined"));
                } else if !route.uses(id) {
                    route.hold_ids.push(id.clone());
                }
            }
            if pending.start_loc.is_none() {
                self.err(route_loc, ParseErrorCode::UndefinedRef, format!("route `{}` has no START record", route.name));
            }
            if pending.finish_loc.is_none() {
                self.err(route_loc, ParseErrorCode::UndefinedRef, format!("route `{}` has no FINISH record", route.name));
            }
            let start_loc = pending.start_loc.unwrap_or(route_loc);
            let finish_loc = pending.finish_loc.unwrap_or(route_loc);
            let role_of = |id: &str| self.hold_index.get(id).map(|&i| self.holds[i].0.roles);
            if pending.start_loc.is_some()
                && route.start_hold_ids.iter().all(|id| role_of(id).is_some())
                && !route.start_hold_ids.iter().any(|id| role_of(id).is_some_and(|r| r.hand))
            {
                self.errors.push(ParseError::new(start_loc, ParseErrorCode::Range, "no start hold can be used by a hand"));
            }
            if role_of(&route.finish_hold_id).is_some_and(|r| !r.hand) {
                self.errors.push(ParseError::new(
                    finish_loc,
                    ParseErrorCode::Range,
                    format!("finish hold `{}` cannot be used by a hand", route.finish_hold_id),
                ));
            }
            routes.push(route);
        }

        let doc = Document {
            wall: Wall {
                width,
                height,
                panels: self.panels.iter().map(|(p, _)| *p).collect(),
                holds: self.holds.into_iter().map(|(h, _, _)| h).collect(),
            },
            routes,
        };
        if !self.errors.is_empty() {
            self.errors.sort_by_key(|e| e.location);
            return Err(self.errors);
        }
        // Any invariant the record-level checks missed still surfaces here.
        let wall_report = validate_wall(&doc.wall);
        for issue in wall_report.issues {
            self.errors.push(ParseError::new(wall_loc, ParseErrorCode::Range, issue.message));
        }
        for (route, line) in doc.routes.iter().zip(route_lines) {
            for issue in validate_route(route, &doc.wall).issues {
                self.errors.push(ParseError::new(SourceLocation::new(line, 1), ParseErrorCode::Range, issue.message));
            }
        }
        if self.errors.is_empty() {
            Ok(doc)
        } else {
            Err(self.errors)
        }
    }
}

/// Parses a text document, returning every error found.
pub fn parse_document(text: &str) -> Result<Document, Vec<ParseError>> {
    let mut parser = Parser::default();
    for (i, line) in text.lines().enumerate() {
        let tokens = tokenize(line);
        if !tokens.is_empty() {
            parser.record(i + 1, &tokens);
        }
    }
    parser.finish()
}

/// Parses raw bytes. Invalid UTF-8 sequences are replaced and then reported
/// by the ordinary record checks.
pub fn parse_document_bytes(bytes: &[u8]) -> Result<Document, Vec<ParseError>> {
    parse_document(&String::from_utf8_lossy(bytes))
}

/// Canonical text form: WALL, panels by ascending y0, holds by id, then
/// routes by name. Output is byte-stable for equal inputs.
pub fn serialize_document(wall: &Wall, routes: &[Route]) -> String {
    let mut out = String::new();
    out.push_str(&format!("WALL {} {}\n", fmt_num(wall.width), fmt_num(wall.height)));

    let mut panels = wall.panels.clone();
    panels.sort_by(|a, b| a.y0.total_cmp(&b.y0).then(a.y1.total_cmp(&b.y1)));
    for p in &panels {
        out.push_str(&format!("PANEL {} {} {}\n", fmt_num(p.y0), fmt_num(p.y1), fmt_num(p.angle)));
    }

    let mut holds: Vec<&Hold> = wall.holds.iter().collect();
    holds.sort_by(|a, b| a.id.cmp(&b.id));
    for h in holds {
        out.push_str(&format!(
            "HOLD {} {} {} {} {} {} {}\n",
            h.id,
            fmt_num(h.x),
            fmt_num(h.y),
            h.hold_type,
            fmt_num(h.difficulty),
            h.roles,
            fmt_num(h.orientation)
        ));
    }

    let mut sorted: Vec<&Route> = routes.iter().collect();
    sorted.sort_by(|a, b| a.name.cmp(&b.name));
    for r in sorted {
        out.push('\n');
        out.push_str(&format!("ROUTE {}\n", r.name));
        let mut starts = r.start_hold_ids.clone();
        starts.sort();
        out.push_str(&format!("START {}\n", starts.join(" ")));
        out.push_str(&format!("FINISH {}\n", r.finish_hold_id));
        let mut used = r.hold_ids.clone();
        used.sort();
        used.dedup();
        out.push_str(&format!("USE {}\n", used.join(" ")));
        if let Some(g) = r.assigned_grade {
            out.push_str(&format!("GRADE {g}\n"));
        }
        if !r.style_tags.is_empty() {
            let tags: Vec<&str> = r.style_tags.iter().map(|t| t.as_str()).collect();
            out.push_str(&format!("STYLE {}\n", tags.join(" ")));
        }
    }
    out
}
