//! Background generation jobs.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use serde::Serialize;
use serde_json::Value;
use tokio::sync::Semaphore;

use crate::error::EngineError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JobStatus {
    Queued,
    Running,
    Done,
    Failed,
    Canceled,
}

impl JobStatus {
    pub fn is_terminal(self) -> bool {
        matches!(self, JobStatus::Done | JobStatus::Failed | JobStatus::Canceled)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Progress {
    pub iteration: usize,
    pub total: usize,
    pub best_objective: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct JobView {
    pub id: u64,
    pub status: JobStatus,
    pub progress: Progress,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Value>,
}

struct Outcome {
    status: JobStatus,
    result: Option<Value>,
    error: Option<Value>,
}

/// One run. Progress lives in atomics so the run never waits on readers.
pub struct Job {
    pub id: u64,
    total: usize,
    iteration: AtomicUsize,
    best: AtomicU64,
    cancel: AtomicBool,
    outcome: Mutex<Outcome>,
}

impl Job {
    pub fn cancel_flag(&self) -> &AtomicBool {
        &self.cancel
    }

    pub fn report(&self, iteration: usize, best: f64) {
        self.iteration.store(iteration, Ordering::Relaxed);
        self.best.store(best.to_bits(), Ordering::Relaxed);
    }

    pub fn cancel(&self) {
        self.cancel.store(true, Ordering::SeqCst);
    }

    fn set(&self, status: JobStatus, result: Option<Value>, error: Option<Value>) {
        *self.outcome.lock().expect("job state") = Outcome { status, result, error };
    }

    pub fn status(&self) -> JobStatus {
        self.outcome.lock().expect("job state").status
    }

    pub fn view(&self) -> JobView {
        let o = self.outcome.lock().expect("job state");
        let best = f64::from_bits(self.best.load(Ordering::Relaxed));
        JobView {
            id: self.id,
            status: o.status,
            progress: Progress {
                iteration: self.iteration.load(Ordering::Relaxed),
                total: self.total,
                best_objective: best.is_finite().then_some(best),
            },
            result: o.result.clone(),
            error: o.error.clone(),
        }
    }
}

pub struct JobManager {
    next: AtomicU64,
    jobs: Mutex<HashMap<u64, Arc<Job>>>,
    slots: Arc<Semaphore>,
}

impl JobManager {
    pub fn new(max_jobs: usize) -> Self {
        JobManager { next: AtomicU64::new(1), jobs: Mutex::new(HashMap::new()), slots: Arc::new(Semaphore::new(max_jobs.max(1))) }
    }

    /// Queues `work` on the blocking pool once a slot is free. A run that
    /// finishes after cancellation keeps its best-so-far result.
    pub fn submit<F>(&self, total: usize, work: F) -> Arc<Job>
    where
        F: FnOnce(&Job) -> Result<Value, EngineError> + Send + 'static,
    {
        let job = Arc::new(Job {
            id: self.next.fetch_add(1, Ordering::SeqCst),
            total,
            iteration: AtomicUsize::new(0),
            best: AtomicU64::new(f64::NAN.to_bits()),
            cancel: AtomicBool::new(false),
            outcome: Mutex::new(Outcome { status: JobStatus::Queued, result: None, error: None }),
        });
        self.jobs.lock().expect("job table").insert(job.id, job.clone());
        let slots = self.slots.clone();
        let runner = job.clone();
        tokio::spawn(async move {
            let Ok(_permit) = slots.acquire_owned().await else { return };
            if runner.cancel.load(Ordering::SeqCst) {
                runner.set(JobStatus::Canceled, None, None);
                return;
            }
            runner.set(JobStatus::Running, None, None);
            let worker = runner.clone();
            let done = tokio::task::spawn_blocking(move || work(&worker)).await;
            match done {
                Ok(Ok(value)) => {
                    let status = if runner.cancel.load(Ordering::SeqCst) { JobStatus::Canceled } else { JobStatus::Done };
                    runner.set(status, Some(value), None);
                }
                Ok(Err(e)) => runner.set(JobStatus::Failed, None, Some(e.body())),
                Err(e) => runner.set(JobStatus::Failed, None, Some(EngineError::internal(e).body())),
            }
        });
        job
    }

    pub fn get(&self, id: u64) -> Option<Arc<Job>> {
        self.jobs.lock().expect("job table").get(&id).cloned()
    }
}
