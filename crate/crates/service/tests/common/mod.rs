#![allow(dead_code)]

use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::process::{Child, Command, Output, Stdio};
use std::time::{Duration, Instant};

use serde_json::Value;

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

pub fn corpus_dir() -> PathBuf {
    fixture("corpus")
}

/// A writable copy of the bundled corpus.
pub fn corpus_copy() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(corpus_dir()).unwrap() {
        let path = entry.unwrap().path();
        std::fs::copy(&path, dir.path().join(path.file_name().unwrap())).unwrap();
    }
    dir
}

/// Settings with a 200-climber grading population, for fast tests.
pub fn small_config(dir: &Path) -> PathBuf {
    let path = dir.join("settings.json");
    std::fs::write(&path, r#"{"population": {"size": 200, "seed": 3}}"#).unwrap();
    path
}

pub fn crux(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crux")).args(args).env_remove("CRUX_CORPUS").output().unwrap()
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

pub struct Server {
    child: Child,
    pub base: String,
    pub http: reqwest::blocking::Client,
}

impl Server {
    pub fn start(corpus: &Path, extra: &[&str]) -> Server {
        let mut args = vec!["serve", "--port", "0", "--corpus", p(corpus)];
        args.extend_from_slice(extra);
        let mut child = Command::new(env!("CARGO_BIN_EXE_crux"))
            .args(&args)
            .env_remove("CRUX_CORPUS")
            .stdout(Stdio::piped())
            .spawn()
            .unwrap();
        let mut line = String::new();
        BufReader::new(child.stdout.take().unwrap()).read_line(&mut line).unwrap();
        let base = line.trim().strip_prefix("listening on ").expect("server announces its address").to_string();
        let http = reqwest::blocking::Client::builder().timeout(Duration::from_secs(600)).build().unwrap();
        Server { child, base, http }
    }

    pub fn url(&self, path: &str) -> String {
        format!("{}{path}", self.base)
    }

    pub fn post(&self, path: &str, body: &Value) -> (u16, Value) {
        let r = self.http.post(self.url(path)).json(body).send().unwrap();
        (r.status().as_u16(), r.json().unwrap())
    }

    /// Raw body text, for byte comparisons with CLI output.
    pub fn post_text(&self, path: &str, body: &Value) -> (u16, String) {
        let r = self.http.post(self.url(path)).json(body).send().unwrap();
        (r.status().as_u16(), r.text().unwrap())
    }

    pub fn get(&self, path: &str) -> (u16, Value) {
        let r = self.http.get(self.url(path)).send().unwrap();
        (r.status().as_u16(), r.json().unwrap())
    }

    /// Polls a job until it reaches a terminal status.
    pub fn wait_job(&self, id: u64, limit: Duration) -> Value {
        let start = Instant::now();
        loop {
            let (status, job) = self.get(&format!("/api/jobs/{id}"));
            assert_eq!(status, 200);
            if matches!(job["status"].as_str(), Some("done" | "failed" | "canceled")) {
                return job;
            }
            assert!(start.elapsed() < limit, "job {id} still {}", job["status"]);
            std::thread::sleep(Duration::from_millis(100));
        }
    }
}

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}
