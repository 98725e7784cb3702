//! Batch runner: reads a per-kind TOML config, runs the experiment on a
//! fixed-size worker pool, and writes CSV outputs plus a JSON manifest
//! with SHA-256 digests.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod experiments;
pub mod manifest;

pub use config::{ExperimentConfig, Kind};
pub use error::{RunError, RunResult};
pub use experiments::{execute, OutputFile};
pub use manifest::{RunManifest, MANIFEST_NAME};

use std::path::{Path, PathBuf};

pub const WORKERS_ENV: &str = "PSMOM_WORKERS";

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub kind: Kind,
    pub config: PathBuf,
    pub workers: Option<usize>,
    pub out: PathBuf,
    pub verify: Option<PathBuf>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub manifest: RunManifest,
    pub outputs: Vec<OutputFile>,
    pub workers: usize,
}

/// `--workers`, then `PSMOM_WORKERS`, then the available parallelism.
pub fn resolve_workers(flag: Option<usize>) -> RunResult<usize> {
    let n = match flag {
        Some(n) => n,
        None => match std::env::var(WORKERS_ENV) {
            Ok(v) => v.trim().parse().map_err(|_| RunError::schema(WORKERS_ENV, format!("not a worker count: {v:?}")))?,
            Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
        },
    };
    if n == 0 {
        return Err(RunError::schema("workers", "must be at least 1"));
    }
    Ok(n)
}

fn read(path: &Path) -> RunResult<String> {
    std::fs::read_to_string(path).map_err(|e| RunError::io(path.display().to_string(), e))
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// Run `config` on a pool of `workers` threads.
pub fn run_config(mut config: ExperimentConfig, workers: usize, seed_fallback: Option<u64>) -> RunResult<RunOutcome> {
    let seed = config.resolve_seed(|| seed_fallback.unwrap_or_else(rand::random));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| RunError::io("worker pool", std::io::Error::other(e)))?;
    let started = now();
    let outputs = pool.install(|| execute(&config, seed))?;
    let finished = now();
    let manifest = RunManifest {
        kind: config.kind(),
        config: serde_json::to_value(&config).expect("configs serialise"),
        seed,
        version: manifest::version_tag(),
        started,
        finished,
        outputs: manifest::digests(&outputs),
    };
    Ok(RunOutcome { manifest, outputs, workers })
}

/// Parse, execute, and either write outputs or check them against a manifest.
pub fn run(options: &RunOptions) -> RunResult<RunOutcome> {
    let config = ExperimentConfig::parse(options.kind, &read(&options.config)?)?;
    let workers = resolve_workers(options.workers)?;
    let expected = match &options.verify {
        Some(path) => {
            let m: RunManifest = serde_json::from_str(&read(path)?)
                .map_err(|e| RunError::Verify(format!("unreadable manifest {}: {e}", path.display())))?;
            if m.kind != options.kind {
                return Err(RunError::Verify(format!("manifest is for {}, not {}", m.kind, options.kind)));
            }
            Some(m)
        }
        None => None,
    };
    let outcome = run_config(config, workers, expected.as_ref().and_then(|m| m.seed))?;
    if let Some(m) = expected {
        let problems = manifest::compare(&m.outputs, &outcome.manifest.outputs);
        if !problems.is_empty() {
            return Err(RunError::Verify(problems.join("; ")));
        }
        return Ok(outcome);
    }
    write_outputs(&options.out, &outcome)?;
    Ok(outcome)
}

pub fn write_outputs(dir: &Path, outcome: &RunOutcome) -> RunResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| RunError::io(dir.display().to_string(), e))?;
    for f in &outcome.outputs {
        let path = dir.join(&f.name);
        std::fs::write(&path, &f.bytes).map_err(|e| RunError::io(path.display().to_string(), e))?;
    }
    let path = dir.join(MANIFEST_NAME);
    let mut json = serde_json::to_string_pretty(&outcome.manifest).expect("manifest serialises");
    json.push('\n');
    std::fs::write(&path, json).map_err(|e| RunError::io(path.display().to_string(), e))
}
