use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use drsubmax::instances::{generate, Instance, Problem};
use drsubmax::solvers::{solve, Summary, Trajectory};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{InstanceSource, RunConfig};
use crate::error::CliError;

#[derive(Serialize)]
struct RunSummary {
    label: String,
    run: usize,
    seed: u64,
    csv: String,
    #[serde(flatten)]
    summary: Summary,
}

#[derive(Serialize)]
struct SummaryFile {
    seed: u64,
    repeats: usize,
    runs: Vec<RunSummary>,
}

fn load_problem(config: &RunConfig, seed: u64) -> Result<Problem, CliError> {
    let (instance, base) = match &config.instance {
        InstanceSource::Inline(inst) => (inst.clone(), config.base_dir.clone()),
        InstanceSource::Path(p) => {
            let path = config.base_dir.join(p);
            let inst = Instance::load(&path).map_err(|e| CliError::from_core(&path.display().to_string(), e))?;
            (inst, path.parent().map(Path::to_path_buf).unwrap_or_default())
        }
        InstanceSource::Generate { family, n } => (
            generate(family, *n, seed).map_err(|e| CliError::from_core("config.instance.generate", e))?,
            config.base_dir.clone(),
        ),
    };
    instance.build(Some(&base)).map_err(|e| CliError::from_core("instance", e))
}

/// One repeat: every configured solver on the repeat's instance.
fn run_repeat(config: &RunConfig, run: usize) -> Result<Vec<(String, Trajectory)>, CliError> {
    let seed = config.run_seed(run);
    let problem = load_problem(config, seed)?;
    config
        .solvers
        .iter()
        .map(|entry| {
            let mut solver_config = entry.config.clone();
            solver_config.seed = seed;
            let traj = solve(entry.kind, problem.objective.as_ref(), &problem.constraint, &solver_config)
                .map_err(|e| CliError::runtime(format!("{} (run {run}): {e}", entry.label)))?;
            Ok((entry.label.clone(), traj))
        })
        .collect()
}

/// Runs every repeat and writes `trajectory_<label>_<run>.csv` and
/// `summary.json` into `out`.
pub fn run(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism)
        .build()
        .map_err(|e| CliError::runtime(format!("thread pool: {e}")))?;
    let results: Vec<Result<Vec<(String, Trajectory)>, CliError>> =
        pool.install(|| (0..config.repeats).into_par_iter().map(|run| run_repeat(config, run)).collect());

    fs::create_dir_all(out).map_err(|e| CliError::runtime(format!("cannot create {}: {e}", out.display())))?;
    let mut runs = Vec::new();
    for (run, result) in results.into_iter().enumerate() {
        for (label, traj) in result? {
            let name = format!("trajectory_{label}_{run}.csv");
            let path = out.join(&name);
            let file = File::create(&path).map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
            traj.write_csv(BufWriter::new(file), false)
                .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
            runs.push(RunSummary { label, run, seed: config.run_seed(run), csv: name, summary: traj.summary() });
        }
    }
    let summary = SummaryFile { seed: config.seed, repeats: config.repeats, runs };
    let text = serde_json::to_string_pretty(&summary).map_err(|e| CliError::runtime(e.to_string()))?;
    fs::write(out.join("summary.json"), text + "\n")?;
    Ok(())
}
