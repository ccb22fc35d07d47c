//! `mgrid` — run closed-loop microgrid network designs and verify the solver
//! against an exhaustive oracle.
//!
//! `mgrid simulate` writes `trace.csv`, `run.json`, and (optionally) one
//! `front_XXXX.jsonl` per step into the output directory. Runs are
//! deterministic: the same scenario file and seed produce byte-identical
//! files. `mgrid verify` cross-checks, on a scenario's first step, the two
//! front formulations against each other and the solver archive against the
//! exhaustive front; it exits non-zero when a check fails and reports `SKIP`
//! (exit zero) when the requested grid exceeds the evaluation budget.

use std::fs;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use mgrid_core::error::Error;
use mgrid_core::moia::{run_moia, ParetoArchive, Problem};
use mgrid_core::oracle::{
    brute_force_front, front_coverage, same_decision_set, FrontMode, GridSpec, DEFAULT_BUDGET,
};
use mgrid_core::sim::{self, SimObserver, StepProblem, StepRecord};
use mgrid_core::trace_io;
use mgrid_core::Scenario64;

#[derive(Parser)]
#[command(name = "mgrid", version, about = "Networked-microgrid design engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the closed-loop simulation and write trace files.
    Simulate(SimulateArgs),
    /// Cross-check solver and penalty formulation on a scenario's first step.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario TOML file.
    #[arg(long)]
    scenario: PathBuf,
    /// Run seed; step `k` derives its solver stream from `seed + k`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Shorten the run to this many steps.
    #[arg(long)]
    horizon: Option<usize>,
    /// Output directory (created if missing).
    #[arg(long, default_value = "out")]
    out_dir: PathBuf,
    /// Also write one nondominated-front file per step.
    #[arg(long)]
    dump_front: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Scenario TOML file.
    #[arg(long)]
    scenario: PathBuf,
    /// Seed of the solver run under test.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Grid samples per decision dimension (default: 201 for up to two
    /// dimensions, 21 beyond; the consistency tolerance widens to match
    /// coarse grids).
    #[arg(long)]
    samples: Option<usize>,
    /// Evaluation budget the grid must fit in.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

/// Resolved identity of a simulation run, persisted as `run.json`.
#[derive(Serialize)]
struct RunManifest {
    /// Scenario file the run was loaded from.
    scenario: String,
    /// Hex SHA-256 of the loaded scenario (profiles materialized).
    scenario_sha256: String,
    /// Run seed.
    seed: u64,
    /// Steps actually simulated.
    horizon: usize,
    /// Whether per-step front files were written.
    dump_front: bool,
}

/// Writes per-step front files while the simulation runs.
struct FrontDumper {
    dir: PathBuf,
    enabled: bool,
}

impl SimObserver<f64> for FrontDumper {
    fn on_step(
        &mut self,
        record: &StepRecord<f64>,
        archive: &ParetoArchive<f64>,
    ) -> Result<(), Error> {
        if self.enabled {
            let text = trace_io::render_front_jsonl(record.k, archive);
            fs::write(self.dir.join(trace_io::front_file_name(record.k)), text)?;
        }
        Ok(())
    }
}

fn load_scenario(path: &PathBuf, horizon: Option<usize>) -> anyhow::Result<Scenario64> {
    let scenario = Scenario64::from_path(path)
        .with_context(|| format!("loading scenario {}", path.display()))?;
    match horizon {
        Some(h) => Ok(scenario.with_horizon(h)?),
        None => Ok(scenario),
    }
}

fn cmd_simulate(args: &SimulateArgs) -> anyhow::Result<()> {
    let scenario = load_scenario(&args.scenario, args.horizon)?;
    fs::create_dir_all(&args.out_dir)
        .with_context(|| format!("creating {}", args.out_dir.display()))?;

    let mut dumper = FrontDumper {
        dir: args.out_dir.clone(),
        enabled: args.dump_front,
    };
    let trace = sim::simulate_observed(&scenario, args.seed, &mut dumper)?;

    let csv = trace_io::render_trace_csv(&trace, &scenario.config);
    fs::write(args.out_dir.join(trace_io::TRACE_FILE), csv)?;

    let manifest = RunManifest {
        scenario: args.scenario.display().to_string(),
        scenario_sha256: trace.fingerprint.scenario_sha256.clone(),
        seed: args.seed,
        horizon: scenario.config.horizon,
        dump_front: args.dump_front,
    };
    let mut manifest_json = serde_json::to_string_pretty(&manifest)?;
    manifest_json.push('\n');
    fs::write(args.out_dir.join(trace_io::RUN_FILE), manifest_json)?;

    let fallbacks = trace.records.iter().filter(|r| r.fallback).count();
    println!(
        "wrote {} steps to {} ({} fallback steps)",
        trace.records.len(),
        args.out_dir.display(),
        fallbacks
    );
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> anyhow::Result<()> {
    let scenario = load_scenario(&args.scenario, None)?;
    let config = &scenario.config;
    let state = config.state_at(0, config.initial_stored());
    let problem = StepProblem::new(config, &state, 0);

    let dims = problem.bounds().len();
    let per_dim = args.samples.unwrap_or(if dims <= 2 { 201 } else { 21 });
    let mut grid = GridSpec::over(problem.bounds().clone(), vec![per_dim; dims]);
    grid.budget = args.budget;

    let total = match grid.total_points() {
        Ok(total) => total,
        Err(Error::BudgetExceeded { points, budget }) => {
            println!("SKIP  grid of {points} points exceeds the budget of {budget}");
            return Ok(());
        }
        Err(e) => return Err(e.into()),
    };

    let by_penalty = brute_force_front(&problem, &grid, FrontMode::PenaltyForm)?;
    let by_constraint = brute_force_front(&problem, &grid, FrontMode::ConstrainedForm)?;
    let formulations_agree = same_decision_set(&by_penalty, &by_constraint);
    println!(
        "{}  formulation cross-check: {} vs {} front points on a {total}-point grid",
        verdict(formulations_agree),
        by_penalty.len(),
        by_constraint.len(),
    );

    let params = scenario.solver.params(args.seed);
    let archive = run_moia(&problem, &params)?;
    let candidate = sim::objective_rows_without_penalty(&archive.entries);
    let reference: Vec<Vec<f64>> = by_constraint.iter().map(|m| m.objectives.clone()).collect();
    // The tolerance must dominate the reference front's own discretization:
    // a continuous-space solver point may legitimately beat a grid front by
    // roughly one grid cell, so never check tighter than that.
    let epsilon = 0.01f64.max(2.0 / (per_dim - 1) as f64);
    let coverage = front_coverage(&candidate, &reference, &[epsilon; 3]);
    let covered = coverage.candidate_covered >= 0.90;
    println!(
        "{}  solver consistency: {:.1}% of {} archive points within {:.3}-relative tolerance of the exhaustive front",
        verdict(covered),
        100.0 * coverage.candidate_covered,
        archive.len(),
        epsilon,
    );

    if !(formulations_agree && covered) {
        bail!("verification failed");
    }
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn main() -> anyhow::Result<()> {
    env_logger::init();
    let cli = Cli::parse();
    match &cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Verify(args) => cmd_verify(args),
    }
}
