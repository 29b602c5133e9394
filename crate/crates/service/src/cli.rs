//! The `crux` command line.

use std::io::Write;
use std::net::{IpAddr, SocketAddr};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crux_core::format::json::to_json_object;
use crux_core::format::{serialize_document, Document};
use crux_core::grading::TNormKind;
use crux_core::{GradeLabel, Route, StyleVector, Wall};

use crate::config::Settings;
use crate::corpus::{self, CorpusStore};
use crate::engine::{Engine, GradeOptions};
use crate::error::{EngineError, Kind};
use crate::http::{self, AppState};

/// Exit status for command-line usage errors.
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "crux", version, about = "Plan, grade, vary and generate climbing routes")]
pub struct Cli {
    /// Seed for grading, variation, simulation and generation.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// JSON settings file.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Print results as JSON, one document per line.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_tnorm(s: &str) -> Result<TNormKind, String> {
    serde_json::from_value(serde_json::Value::String(s.to_string()))
        .map_err(|_| "expected product, minimum or lukasiewicz".to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check documents and print them in canonical form.
    Parse {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Predict the beta of each route.
    Beta {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Only this route of each document.
        #[arg(long)]
        route: Option<String>,
    },
    /// Grade routes against a graded corpus.
    Grade {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        route: Option<String>,
        /// Directory of graded `.crux` files.
        #[arg(long, value_name = "DIR")]
        corpus: Option<PathBuf>,
        /// Conjunction: product, minimum or lukasiewicz.
        #[arg(long, value_parser = parse_tnorm)]
        tnorm: Option<TNormKind>,
        /// Probability counted as high, in (0, 1).
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Search hold placements for a route at a target grade.
    Generate {
        /// Wall to set on; its routes are ignored.
        #[arg(long, value_name = "FILE")]
        wall: PathBuf,
        /// Grade to aim for, e.g. 5.10a.
        #[arg(long)]
        target_grade: Option<GradeLabel>,
        /// JSON map from move type to weight.
        #[arg(long, value_name = "FILE")]
        target_style: Option<PathBuf>,
        /// Annealing iterations.
        #[arg(long)]
        iterations: Option<usize>,
        /// Most holds the route may use.
        #[arg(long)]
        hold_budget: Option<usize>,
        /// Directory of graded `.crux` files.
        #[arg(long, value_name = "DIR")]
        corpus: Option<PathBuf>,
        /// Where to write the generated `.crux` document.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Perturb a route with Lorenz-driven hold shifts.
    Vary {
        file: PathBuf,
        #[arg(long)]
        route: Option<String>,
        #[arg(long, default_value_t = 0.3)]
        intensity: f64,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Sample seeded ascents of a route.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        route: Option<String>,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
    },
    /// Run the HTTP service.
    Serve {
        /// Port to listen on; 0 picks a free one.
        #[arg(long)]
        port: Option<u16>,
        #[arg(long, default_value = "127.0.0.1")]
        host: IpAddr,
        /// Corpus directory, created if missing.
        #[arg(long, value_name = "DIR")]
        corpus: Option<PathBuf>,
        /// Directory of a built UI bundle to serve at `/`.
        #[arg(long, value_name = "DIR")]
        ui: Option<PathBuf>,
    },
}

/// Parses arguments and runs; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let mut out = std::io::stdout().lock();
    match run(cli, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            for issue in &e.issues {
                eprintln!("  {issue}");
            }
            e.kind.exit_code()
        }
    }
}

fn routes_of(doc: &Document, name: Option<&str>, file: &Path) -> Result<Vec<Route>, EngineError> {
    match name {
        Some(n) => doc
            .route(n)
            .cloned()
            .map(|r| vec![r])
            .ok_or_else(|| EngineError::not_found(format!("{}: no route `{n}`", file.display()))),
        None if doc.routes.is_empty() => Err(EngineError::new(Kind::Invalid, "NO_ROUTE", format!("{}: no routes", file.display()))),
        None => Ok(doc.routes.clone()),
    }
}

fn first_route(doc: &Document, name: Option<&str>, file: &Path) -> Result<Route, EngineError> {
    Ok(routes_of(doc, name, file)?.remove(0))
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), EngineError> {
    out.write_all(text.as_bytes()).map_err(EngineError::internal)
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), EngineError> {
    let line = serde_json::to_string(value).map_err(EngineError::internal)?;
    write_out(out, &format!("{line}\n"))
}

fn write_file(path: &Path, text: &str) -> Result<(), EngineError> {
    corpus::write_atomic(path, text.as_bytes()).map_err(|e| EngineError::internal(format!("{}: {e}", path.display())))
}

fn read_style(path: &Path) -> Result<StyleVector, EngineError> {
    let text = std::fs::read_to_string(path).map_err(|e| EngineError::new(Kind::Invalid, "STYLE", format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| EngineError::new(Kind::Invalid, "STYLE", format!("{}: {e}", path.display())))
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), EngineError> {
    let settings = Settings::load(cli.config.as_deref())?;
    let seed = cli.seed;
    match cli.command {
        Command::Parse { files } => {
            for file in files {
                let doc = corpus::read_file(&file)?;
                if cli.json {
                    json_line(out, &to_json_object(&doc.wall, &doc.routes))?;
                } else {
                    write_out(out, &serialize_document(&doc.wall, &doc.routes))?;
                }
            }
        }
        Command::Beta { files, route } => {
            let engine = Engine::new(settings);
            for file in files {
                let doc = corpus::read_file(&file)?;
                for r in routes_of(&doc, route.as_deref(), &file)? {
                    let b = engine.beta(&r, &doc.wall, None)?;
                    if cli.json {
                        json_line(out, &b)?;
                        continue;
                    }
                    let mut text = format!(
                        "{}: {} moves, cost {:.4}, success {:.4}\n",
                        b.route,
                        b.beta.moves.len(),
                        b.beta.total_cost,
                        b.success_probability
                    );
                    for (i, m) in b.beta.moves.iter().enumerate() {
                        let to = m.to.as_deref().unwrap_or("-");
                        text += &format!("  {:>2}. {:?} -> {to} ({}, {:.3} m)\n", i + 1, m.limb, m.move_type.as_str(), m.distance);
                    }
                    write_out(out, &text)?;
                }
            }
        }
        Command::Grade { files, route, corpus, tnorm, threshold } => {
            let snap = corpus::load(&settings.corpus_path(corpus.as_deref()))?;
            let sets = snap.grade_sets();
            let engine = Engine::new(settings);
            let options = GradeOptions { tnorm, threshold, seed: Some(seed.unwrap_or(0)) };
            for file in files {
                let doc = corpus::read_file(&file)?;
                for r in routes_of(&doc, route.as_deref(), &file)? {
                    let g = engine.grade(&r, &doc.wall, &sets, options)?;
                    if cli.json {
                        json_line(out, &g)?;
                        continue;
                    }
                    let mut text = format!("{}: {}\n", g.route, g.grade);
                    text += "  grade   P(R|S)  P(S|R)  conj    qualifiers\n";
                    for s in &g.scores {
                        let flags: Vec<String> = s.flags.iter().map(|f| format!("{f:?}")).collect();
                        text += &format!(
                            "  {:<7} {:.4}  {:.4}  {:.4}  {:>5} {}\n",
                            s.grade.to_string(),
                            s.p_route_given_set,
                            s.p_set_given_route,
                            s.conjunction,
                            s.qualifiers,
                            flags.join(",")
                        );
                    }
                    write_out(out, &text)?;
                }
            }
        }
        Command::Generate { wall, target_grade, target_style, iterations, hold_budget, corpus, out: target } => {
            let doc = corpus::read_file(&wall)?;
            let snap = corpus::load(&settings.corpus_path(corpus.as_deref()))?;
            let mut config = settings.generation.clone();
            if let Some(g) = target_grade {
                config.target_grade = g;
            }
            if let Some(path) = target_style {
                config.target_style = Some(read_style(&path)?);
            }
            if let Some(n) = iterations {
                config.max_iterations = n;
            }
            if let Some(n) = hold_budget {
                config.hold_budget = n;
            }
            if let Some(s) = seed {
                config.seed = s;
            }
            let engine = Engine::new(settings);
            let g = engine.generate(&doc.wall, None, &config, &snap.grade_sets(), None, None)?;
            match target {
                Some(path) => {
                    write_file(&path, &g.result.crux)?;
                    json_line(out, &g.report)?;
                }
                None if cli.json => json_line(out, &g)?,
                None => write_out(out, &g.result.crux)?,
            }
        }
        Command::Vary { file, route, intensity, out: target } => {
            let doc = corpus::read_file(&file)?;
            let r = first_route(&doc, route.as_deref(), &file)?;
            let v = Engine::new(settings).vary(&r, &doc.wall, intensity, seed.unwrap_or(0))?;
            if let Some(path) = target {
                write_file(&path, &v.crux)?;
            }
            if cli.json {
                json_line(out, &v)?;
            } else {
                write_out(out, &v.crux)?;
            }
        }
        Command::Simulate { file, route, trials } => {
            let doc = corpus::read_file(&file)?;
            let r = first_route(&doc, route.as_deref(), &file)?;
            let s = Engine::new(settings).simulate(&r, &doc.wall, trials, seed.unwrap_or(0))?;
            if cli.json {
                json_line(out, &s)?;
            } else {
                write_out(
                    out,
                    &format!(
                        "{}: {}/{} sends ({:.4}), model {:.4} +/- {:.4}\n",
                        s.route, s.successes, s.trials, s.frequency, s.success_probability, s.std_error
                    ),
                )?;
            }
        }
        Command::Serve { port, host, corpus, ui } => {
            let root = settings.corpus_path(corpus.as_deref());
            let store = CorpusStore::open(&root)?;
            let addr = SocketAddr::new(host, port.unwrap_or(settings.port));
            let state = AppState::new(Engine::new(settings), store);
            let runtime = tokio::runtime::Runtime::new().map_err(EngineError::internal)?;
            runtime
                .block_on(http::serve(state, addr, ui, |bound| {
                    println!("listening on http://{bound}");
                    let _ = std::io::stdout().flush();
                }))
                .map_err(EngineError::internal)?;
        }
    }
    Ok(())
}

/// Loads a single document's first route, for callers outside the CLI.
pub fn load_route(file: &Path, name: Option<&str>) -> Result<(Route, Wall), EngineError> {
    let doc = corpus::read_file(file)?;
    let r = first_route(&doc, name, file)?;
    Ok((r, doc.wall))
}
