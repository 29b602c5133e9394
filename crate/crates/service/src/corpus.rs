//! File-backed corpus: graded `.crux` documents, the working wall, and a
//! `meta.json` of exposure counts and locks.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

use serde::{Deserialize, Serialize};

use crux_core::format::{parse_document, serialize_document, Document};
use crux_core::grading::{grade_sets, record_ascent_and_maybe_lock, GradeSet};
use crux_core::{GradeLabel, Panel, Route, Wall};

use crate::error::{EngineError, Kind};

/// The working wall edited through the API; not part of the graded corpus.
pub const WALL_FILE: &str = "wall.crux";
pub const META_FILE: &str = "meta.json";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteMeta {
    pub exposure_count: u32,
    pub grade_locked: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub routes: BTreeMap<String, RouteMeta>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RouteRef {
    pub file: String,
    pub name: String,
}

/// 3 m x 4.5 m vertical wall with no holds.
pub fn empty_wall() -> Wall {
    Wall { width: 3.0, height: 4.5, panels: vec![Panel { y0: 0.0, y1: 4.5, angle: 90.0 }], holds: vec![] }
}

/// An immutable view of the directory; readers keep using theirs while a
/// writer publishes the next one.
#[derive(Debug, Clone)]
pub struct Snapshot {
    pub routes: Vec<(RouteRef, Route, Wall)>,
    pub index: BTreeMap<GradeLabel, Vec<RouteRef>>,
    pub working: Document,
    pub meta: Meta,
}

impl Snapshot {
    pub fn grade_sets(&self) -> Vec<GradeSet> {
        grade_sets(self.routes.iter().map(|(_, r, w)| (r.clone(), w.clone())))
    }

    /// A corpus route or a route of the working wall, by name.
    pub fn find(&self, name: &str) -> Option<(Route, Wall)> {
        if let Some((_, r, w)) = self.routes.iter().find(|(_, r, _)| r.name == name) {
            return Some((r.clone(), w.clone()));
        }
        let r = self.working.route(name)?;
        Some((self.apply(r.clone()), self.working.wall.clone()))
    }

    fn apply(&self, mut route: Route) -> Route {
        if let Some(m) = self.meta.routes.get(&route.name) {
            route.exposure_count = m.exposure_count;
            route.grade_locked = m.grade_locked;
        }
        route
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> EngineError {
    EngineError::internal(format!("{}: {e}", path.display()))
}

/// Loads `root` without modifying it.
pub fn load(root: &Path) -> Result<Snapshot, EngineError> {
    if !root.is_dir() {
        return Err(EngineError::new(Kind::Invalid, "CORPUS", format!("{} is not a directory", root.display())));
    }
    let meta: Meta = match fs::read_to_string(root.join(META_FILE)) {
        Ok(text) => serde_json::from_str(&text)
            .map_err(|e| EngineError::new(Kind::Invalid, "CORPUS", format!("{META_FILE}: {e}")))?,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => Meta::default(),
        Err(e) => return Err(io_error(&root.join(META_FILE), e)),
    };
    let mut files: Vec<PathBuf> = fs::read_dir(root)
        .map_err(|e| io_error(root, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "crux") && p.file_name().is_some_and(|n| n != WALL_FILE))
        .collect();
    files.sort();

    let mut snap = Snapshot {
        routes: vec![],
        index: BTreeMap::new(),
        working: Document { wall: empty_wall(), routes: vec![] },
        meta,
    };
    for path in files {
        let file = path.file_name().expect("listed file").to_string_lossy().into_owned();
        let doc = read_document(&path)?;
        for route in doc.routes {
            if snap.routes.iter().any(|(_, r, _)| r.name == route.name) {
                return Err(EngineError::new(Kind::Invalid, "CORPUS", format!("{file}: route `{}` defined twice", route.name)));
            }
            let route = snap.apply(route);
            let reference = RouteRef { file: file.clone(), name: route.name.clone() };
            if let Some(g) = route.assigned_grade {
                snap.index.entry(g).or_default().push(reference.clone());
            }
            snap.routes.push((reference, route, doc.wall.clone()));
        }
    }
    let wall_path = root.join(WALL_FILE);
    if wall_path.exists() {
        snap.working = read_document(&wall_path)?;
    }
    Ok(snap)
}

fn read_document(path: &Path) -> Result<Document, EngineError> {
    let bytes = fs::read(path).map_err(|e| io_error(path, e))?;
    crux_core::format::parse_document_bytes(&bytes).map_err(|errors| {
        let mut e = EngineError::invalid(errors);
        e.message = format!("{}: {}", path.display(), e.message);
        e
    })
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let tmp = dir.join(format!(".{name}.tmp"));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// The corpus directory with a single writer.
pub struct CorpusStore {
    root: PathBuf,
    current: RwLock<Arc<Snapshot>>,
    writer: Mutex<()>,
}

impl CorpusStore {
    /// Opens `root`, creating it when missing.
    pub fn open(root: impl Into<PathBuf>) -> Result<CorpusStore, EngineError> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|e| io_error(&root, e))?;
        let snap = load(&root)?;
        Ok(CorpusStore { root, current: RwLock::new(Arc::new(snap)), writer: Mutex::new(()) })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn snapshot(&self) -> Arc<Snapshot> {
        self.current.read().expect("snapshot lock").clone()
    }

    fn publish(&self, snap: Snapshot) -> Arc<Snapshot> {
        let snap = Arc::new(snap);
        *self.current.write().expect("snapshot lock") = snap.clone();
        snap
    }

    /// Replaces the working wall document.
    pub fn put_working(&self, doc: Document) -> Result<Arc<Snapshot>, EngineError> {
        let _guard = self.writer.lock().expect("writer lock");
        let path = self.root.join(WALL_FILE);
        write_atomic(&path, serialize_document(&doc.wall, &doc.routes).as_bytes()).map_err(|e| io_error(&path, e))?;
        let mut next = (*self.snapshot()).clone();
        next.working = doc;
        Ok(self.publish(next))
    }

    /// Adds `increment` ascents to the named route and locks its grade at
    /// `threshold`.
    pub fn record_ascent(&self, name: &str, increment: u32, threshold: u32) -> Result<Route, EngineError> {
        let _guard = self.writer.lock().expect("writer lock");
        let mut next = (*self.snapshot()).clone();
        let (route, _) = next.find(name).ok_or_else(|| EngineError::not_found(format!("route `{name}`")))?;
        let updated = record_ascent_and_maybe_lock(&route, increment, threshold);
        next.meta.routes.insert(
            name.to_string(),
            RouteMeta { exposure_count: updated.exposure_count, grade_locked: updated.grade_locked },
        );
        let path = self.root.join(META_FILE);
        let text = serde_json::to_string_pretty(&next.meta).expect("meta serializes") + "\n";
        write_atomic(&path, text.as_bytes()).map_err(|e| io_error(&path, e))?;
        for (_, r, _) in next.routes.iter_mut().filter(|(_, r, _)| r.name == name) {
            r.exposure_count = updated.exposure_count;
            r.grade_locked = updated.grade_locked;
        }
        self.publish(next);
        Ok(updated)
    }
}

/// Parses one `.crux` file from disk.
pub fn read_file(path: &Path) -> Result<Document, EngineError> {
    read_document(path)
}

/// Parses `.crux` text, reporting every error.
pub fn parse_text(text: &str) -> Result<Document, EngineError> {
    parse_document(text).map_err(EngineError::invalid)
}
