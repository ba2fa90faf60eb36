//! Benchmark harness: runs (game, solver) pairs under a wall-clock
//! timeout on a worker pool and emits CSV or JSON-lines records.

use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use anyhow::Result;
use pgfatal_core::ctl::Ctl;
use pgfatal_core::reference::zielonka_ctl;
use pgfatal_core::{Game, GameView};
use serde::{Deserialize, Serialize};

use crate::solver_choice::SolverChoice;

/// One benchmark measurement. `outcome` is `abo` when the run hit the
/// timeout; `elapsed_ms` is then at least the configured timeout.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BenchRecord {
    pub game_id: String,
    pub family: String,
    pub params: String,
    pub solver: String,
    pub solved_completely: bool,
    pub residual_nodes: u64,
    pub fatal_attractors: u64,
    pub edges_removed: u64,
    pub elapsed_ms: f64,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Ok,
    Abo,
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::Ok => write!(f, "ok"),
            Outcome::Abo => write!(f, "abo"),
        }
    }
}

pub const CSV_HEADER: &str = "game_id,family,params,solver,solved_completely,residual_nodes,\
                              fatal_attractors,edges_removed,elapsed_ms,outcome";

fn csv_field(text: &str) -> String {
    if text.contains([',', '"', '\n']) {
        format!("\"{}\"", text.replace('"', "\"\""))
    } else {
        text.to_string()
    }
}

impl BenchRecord {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{:.3},{}",
            csv_field(&self.game_id),
            csv_field(&self.family),
            csv_field(&self.params),
            csv_field(&self.solver),
            self.solved_completely,
            self.residual_nodes,
            self.fatal_attractors,
            self.edges_removed,
            self.elapsed_ms,
            self.outcome
        )
    }
}

pub struct BenchJob {
    pub game_id: String,
    pub family: String,
    pub params: String,
    pub game: Game,
}

pub struct BenchConfig {
    pub solvers: Vec<SolverChoice>,
    pub timeout: Duration,
    pub repetitions: u32,
    pub jobs: usize,
}

/// Runs every (game, solver) pair and returns records sorted by
/// (game_id, solver). Each measurement is repeated `repetitions` times;
/// the reported time is the mean (counts are identical across reps).
pub fn run_bench(jobs: &[BenchJob], config: &BenchConfig) -> Vec<BenchRecord> {
    let tasks: Vec<(usize, usize)> = (0..jobs.len())
        .flat_map(|g| (0..config.solvers.len()).map(move |s| (g, s)))
        .collect();
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, BenchRecord)>> = Mutex::new(Vec::with_capacity(tasks.len()));

    std::thread::scope(|scope| {
        for _ in 0..config.jobs.max(1) {
            let builder = std::thread::Builder::new().stack_size(256 * 1024 * 1024);
            builder
                .spawn_scoped(scope, || loop {
                    let t = next.fetch_add(1, Ordering::Relaxed);
                    if t >= tasks.len() {
                        return;
                    }
                    let (g, s) = tasks[t];
                    let record = measure(&jobs[g], config.solvers[s], config);
                    results.lock().unwrap().push((t, record));
                })
                .expect("spawn bench worker");
        }
    });

    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|(t, _)| *t);
    let mut records: Vec<BenchRecord> = results.into_iter().map(|(_, r)| r).collect();
    records.sort_by(|a, b| a.game_id.cmp(&b.game_id).then(a.solver.cmp(&b.solver)));
    records
}

fn measure(job: &BenchJob, solver: SolverChoice, config: &BenchConfig) -> BenchRecord {
    let mut total_ms = 0.0;
    let mut last: Option<BenchRecord> = None;
    for _ in 0..config.repetitions.max(1) {
        let record = measure_once(job, solver, config);
        total_ms += record.elapsed_ms;
        last = Some(record);
    }
    let mut record = last.expect("at least one repetition");
    record.elapsed_ms = total_ms / config.repetitions.max(1) as f64;
    record
}

fn measure_once(job: &BenchJob, solver: SolverChoice, config: &BenchConfig) -> BenchRecord {
    let view = GameView::full(&job.game);
    let ctl = Ctl::with_timeout(config.timeout);
    let started = Instant::now();

    let mut record = BenchRecord {
        game_id: job.game_id.clone(),
        family: job.family.clone(),
        params: job.params.clone(),
        solver: solver.to_string(),
        solved_completely: false,
        residual_nodes: view.alive_count() as u64,
        fatal_attractors: 0,
        edges_removed: 0,
        elapsed_ms: 0.0,
        outcome: Outcome::Abo,
    };

    match solver {
        SolverChoice::Zielonka => {
            if zielonka_ctl(&view, &ctl).is_ok() {
                record.solved_completely = true;
                record.residual_nodes = 0;
                record.outcome = Outcome::Ok;
            }
        }
        SolverChoice::Partial(rho) | SolverChoice::Complete(rho) => {
            if let Ok(partial) = rho.run(&view, &ctl) {
                record.solved_completely = partial.solved_completely();
                record.residual_nodes = partial.residual.alive_count() as u64;
                record.fatal_attractors = partial.stats.fatal_attractors;
                record.edges_removed = partial.stats.edges_removed;
                record.outcome = Outcome::Ok;
                // a completion run adds the time of zielonka on the rest
                if matches!(solver, SolverChoice::Complete(_))
                    && zielonka_ctl(&partial.residual, &ctl).is_err()
                {
                    record.outcome = Outcome::Abo;
                }
            }
        }
    }

    record.elapsed_ms = started.elapsed().as_secs_f64() * 1e3;
    record
}

pub fn write_records(
    out: &mut dyn Write,
    records: &[BenchRecord],
    jsonl: bool,
) -> Result<()> {
    if jsonl {
        for record in records {
            writeln!(out, "{}", serde_json::to_string(record)?)?;
        }
    } else {
        writeln!(out, "{CSV_HEADER}")?;
        for record in records {
            writeln!(out, "{}", record.to_csv_row())?;
        }
    }
    Ok(())
}
