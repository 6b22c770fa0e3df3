use quadsearch::analytic::{render_sweep_csv, sweep as sweep_curves};
use quadsearch::cost::{strategy_cost, CostReport};
use quadsearch::statevector::run_main_phase;
use quadsearch::strategy::{search, verify_with_tolerance, SearchOutcome, VerifyReport, VERIFY_TOL};
use quadsearch::{Embedding, OracleSet, ProblemSpec};
use serde::Serialize;

use crate::config::{Format, RunConfig};
use crate::CliError;

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct TrialSummary {
    trials: u64,
    target_hits: u64,
    frequency: f64,
}

#[derive(Serialize)]
struct RunReport {
    embedding: Embedding,
    outcome: SearchOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<TrialSummary>,
}

pub fn run(config: &RunConfig) -> Result<String, CliError> {
    let spec = config.problem()?;
    let seed = config.seed();
    let outcome = search(&spec, seed)?;
    let oracle = OracleSet::new(&spec)?;
    let trials = match config.trials.unwrap_or(1) {
        0 => return Err(CliError::Config("`trials` must be at least 1".into())),
        1 => None,
        n => {
            let state = run_main_phase(&oracle, outcome.iterations_used)?;
            let counts = state.sample(seed, n);
            let hits = counts.iter().filter(|(&i, _)| oracle.f(i)).map(|(_, &c)| c).sum();
            Some(TrialSummary {
                trials: n,
                target_hits: hits,
                frequency: hits as f64 / n as f64,
            })
        }
    };
    to_json(&RunReport {
        embedding: *oracle.embedding(),
        outcome,
        trials,
    })
}

pub fn cost(config: &RunConfig) -> Result<String, CliError> {
    let report = match (config.iterations, config.catalog_size) {
        (Some(n), _) => CostReport::for_iterations(n)?,
        (None, Some(catalog)) => strategy_cost(&Embedding::from_counts(catalog, config.target_count()?)?)?,
        (None, None) => {
            return Err(CliError::Config(
                "cost needs `catalog_size` and a target count, or `iterations`".into(),
            ))
        }
    };
    to_json(&report)
}

pub fn sweep(config: &RunConfig, format: Format) -> Result<String, CliError> {
    let grid = config.grid().points()?;
    let curves = sweep_curves(&config.q_list(), &grid)?;
    match format {
        Format::Csv => Ok(render_sweep_csv(&curves)),
        Format::Json => to_json(&curves),
    }
}

/// Problems checked by every `verify` run.
fn builtin_grid() -> Vec<ProblemSpec> {
    let mut specs = Vec::new();
    for (catalog, nu0) in [(1, 1), (7, 4), (16, 4), (64, 16), (100, 1)] {
        specs.push(ProblemSpec::first(catalog, nu0).expect("valid built-in problem"));
    }
    for nu0 in 2..=4 {
        specs.push(ProblemSpec::seeded_random(8, nu0, nu0).expect("valid built-in problem"));
    }
    for nu0 in 5..=16 {
        specs.push(ProblemSpec::seeded_random(32, nu0, nu0).expect("valid built-in problem"));
    }
    for nu0 in [17, 24, 32, 40, 63, 64] {
        specs.push(ProblemSpec::seeded_random(64, nu0, nu0).expect("valid built-in problem"));
    }
    specs
}

#[derive(Serialize)]
struct VerifySummary {
    passed: bool,
    problems: usize,
    failed_checks: usize,
    max_deviation: f64,
    reports: Vec<VerifyReport>,
}

pub fn verify(config: &RunConfig) -> Result<(String, bool), CliError> {
    let q_max = config.q_max.unwrap_or(3);
    let tolerance = config.tolerance.unwrap_or(VERIFY_TOL);
    let mut specs = builtin_grid();
    if config.has_problem() {
        specs.push(config.problem()?);
    }
    let reports = specs
        .iter()
        .map(|spec| verify_with_tolerance(spec, q_max, tolerance))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = VerifySummary {
        passed: reports.iter().all(|r| r.passed),
        problems: reports.len(),
        failed_checks: reports.iter().map(|r| r.failures().count()).sum(),
        max_deviation: reports.iter().map(|r| r.max_deviation).fold(0.0, f64::max),
        reports,
    };
    Ok((to_json(&summary)?, summary.passed))
}
