//! Iteration-count selection, single searches, and the cross-path
//! verification harness.
//!
//! Measuring right after the `ñ − p̃` main-phase iterations succeeds with
//! probability `ρ`; one extra iteration succeeds with `ρ(3 − 4ρ)²`. The
//! strategy measures after the main phase when `ρ >= 1/2` and adds the
//! extra iteration otherwise, which guarantees at least 1/2. A failed
//! search is reported as data; repeating until success is left to callers.

use serde::Serialize;

use crate::analytic;
use crate::cost::{self, recursive_execute, total_cost};
use crate::embedding::{count_marked, signed_sum_all, signed_sum_within, Embedding, OracleSet, ProblemSpec, SymbolMap};
use crate::error::Result;
use crate::statevector::{run_main_phase, StateVector};

/// Cross-path agreement threshold used by [`verify`].
pub const VERIFY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `ν₀` is a power of four; measuring after the main phase always
    /// finds a target.
    Certainty,
    /// `1/2 <= ρ < 1`: measure after the main phase.
    MeasureAfterMainPhase,
    /// `1/4 < ρ < 1/2`: one extra iteration first.
    ExtraIteration,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Choice {
    pub branch: Branch,
    pub iterations: u32,
    pub predicted_probability: f64,
}

pub fn choose_iterations(embedding: &Embedding) -> Choice {
    let main = embedding.main_phase_len();
    let rho = embedding.rho();
    if embedding.is_power_of_four() {
        return Choice {
            branch: Branch::Certainty,
            iterations: main,
            predicted_probability: 1.0,
        };
    }
    let value = rho.value();
    if rho.cmp_half().is_ge() {
        Choice {
            branch: Branch::MeasureAfterMainPhase,
            iterations: main,
            predicted_probability: analytic::p0(value).expect("physical rho lies in (1/4, 1]"),
        }
    } else {
        Choice {
            branch: Branch::ExtraIteration,
            iterations: main + 1,
            predicted_probability: analytic::p1(value).expect("physical rho lies in (1/4, 1]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MeasuredItem {
    Catalog(u64),
    /// Any basis state outside the catalog.
    Padding,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchOutcome {
    pub measured_item: MeasuredItem,
    pub basis_index: u64,
    pub is_target: bool,
    pub branch: Branch,
    pub iterations_used: u32,
    pub predicted_probability: f64,
    pub oracle_calls_abstract: u64,
    pub oracle_calls_recursive_model: u128,
    pub seed: u64,
}

/// Runs the chosen number of iterations and performs one measurement.
pub fn search(spec: &ProblemSpec, seed: u64) -> Result<SearchOutcome> {
    let oracle = OracleSet::new(spec)?;
    let embedding = *oracle.embedding();
    let choice = choose_iterations(&embedding);
    let state = run_main_phase(&oracle, choice.iterations)?;
    let basis_index = state.measure(seed);
    let measured_item = match SymbolMap::new(embedding).catalog_item(basis_index) {
        Some(item) => MeasuredItem::Catalog(item),
        None => MeasuredItem::Padding,
    };
    Ok(SearchOutcome {
        measured_item,
        basis_index,
        is_target: oracle.f(basis_index),
        branch: choice.branch,
        iterations_used: choice.iterations,
        predicted_probability: choice.predicted_probability,
        oracle_calls_abstract: oracle.calls(),
        oracle_calls_recursive_model: total_cost(choice.iterations)?,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub observed: f64,
    pub deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub catalog_size: u64,
    pub target_count: u64,
    pub rho: f64,
    pub q_max: u32,
    pub tolerance: f64,
    pub checks: Vec<Check>,
    pub max_deviation: f64,
    pub passed: bool,
}

impl VerifyReport {
    fn push(&mut self, name: impl Into<String>, expected: f64, observed: f64) {
        let deviation = (expected - observed).abs();
        let passed = deviation < self.tolerance;
        self.max_deviation = self.max_deviation.max(deviation);
        self.passed &= passed;
        self.checks.push(Check {
            name: name.into(),
            expected,
            observed,
            deviation,
            passed,
        });
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Budget of amplitude updates for the recursive path; larger instances
/// skip it.
const RECURSIVE_BUDGET: u128 = 20_000_000;

/// [`verify_with_tolerance`] at [`VERIFY_TOL`].
pub fn verify(spec: &ProblemSpec, q_max: u32) -> Result<VerifyReport> {
    verify_with_tolerance(spec, q_max, VERIFY_TOL)
}

/// Cross-checks the simulator, the closed forms and the recursive
/// implementation on one problem. Failures are recorded in the report;
/// only setup errors (size gates, malformed input) are returned as `Err`.
pub fn verify_with_tolerance(spec: &ProblemSpec, q_max: u32, tolerance: f64) -> Result<VerifyReport> {
    let oracle = OracleSet::new(spec)?;
    let e = *oracle.embedding();
    let q_max = q_max.min(analytic::MAX_EXTRA_ITERATIONS);
    let rho = e.rho().value();
    let mut report = VerifyReport {
        catalog_size: e.catalog_size(),
        target_count: e.target_count(),
        rho,
        q_max,
        tolerance,
        checks: Vec::new(),
        max_deviation: 0.0,
        passed: true,
    };
    let main = e.main_phase_len();
    let n_tilde = e.extended_exponent();

    report.push(
        "count.signed_sum_all(1)",
        (e.extended_size() / 2) as f64,
        signed_sum_all(&oracle, 1) as f64,
    );
    for j in 1..main {
        let expected = 1u64 << (2 * (n_tilde - j) - 1);
        report.push(
            format!("count.signed_sum_within({j})"),
            expected as f64,
            signed_sum_within(&oracle, j) as f64,
        );
    }
    let boundary = e.target_envelope() as i64 - 2 * e.target_count() as i64;
    report.push(
        format!("count.signed_sum_within({main})"),
        boundary as f64,
        signed_sum_within(&oracle, main) as f64,
    );
    for j in 1..=main {
        report.push(
            format!("count.marked({j})"),
            e.zero_prefix_block(j) as f64,
            count_marked(&oracle, j) as f64,
        );
    }

    let mut state = StateVector::uniform(&e)?;
    for j in 1..=main {
        state.iterate(&oracle);
        let amp = analytic::main_phase_amplitude(&e, j)?;
        let worst = state
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let expected = if oracle.marked(i as u64, j) { amp } else { 0.0 };
                (a - expected).abs()
            })
            .fold(0.0, f64::max);
        report.push(format!("main_phase.amplitude({j})"), 0.0, worst);
    }

    for q in 0..=q_max {
        let simulated = state.success_probability(&oracle);
        let predicted = analytic::p_q(rho, q)?;
        report.push(format!("probability(q={q})"), predicted, simulated);
        if e.is_power_of_four() {
            report.push(format!("certainty(q={q})"), 1.0, simulated);
        }

        let iterations = main + q;
        let work = cost::pow3(iterations)
            .unwrap_or(u128::MAX)
            .saturating_mul(e.extended_size() as u128);
        if (iterations as usize) <= cost::MAX_RECURSIVE_ITERATIONS && work <= RECURSIVE_BUDGET {
            let (recursive, calls) = recursive_execute(&oracle, iterations as usize)?;
            let worst = recursive
                .amplitudes()
                .iter()
                .zip(state.amplitudes())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            report.push(format!("recursive.state(q={q})"), 0.0, worst);
            report.push(
                format!("recursive.calls(q={q})"),
                total_cost(iterations)? as f64,
                calls as f64,
            );
        }
        state.iterate(&oracle);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::Rho;

    #[test]
    fn power_of_four_choice() {
        let e = Embedding::from_counts(16, 4).unwrap();
        let c = choose_iterations(&e);
        assert_eq!(
            (c.branch, c.iterations, c.predicted_probability),
            (Branch::Certainty, 2, 1.0)
        );
    }

    #[test]
    fn extra_iteration_choice() {
        let e = Embedding::from_counts(20, 6).unwrap();
        let c = choose_iterations(&e);
        assert_eq!(c.branch, Branch::ExtraIteration);
        assert_eq!(c.iterations, e.extended_exponent() - 2 + 1);
        assert!((c.predicted_probability - 27.0 / 32.0).abs() < 1e-15);
    }

    #[test]
    fn half_takes_fewer_iterations() {
        let e = Embedding::from_counts(4, 2).unwrap();
        assert_eq!(
            e.rho(),
            Rho {
                targets: 2,
                envelope: 4
            }
        );
        let c = choose_iterations(&e);
        assert_eq!(c.branch, Branch::MeasureAfterMainPhase);
        assert_eq!(c.iterations, e.main_phase_len());
        assert_eq!(c.predicted_probability, 0.5);
    }

    #[test]
    fn power_of_four_search_always_hits() {
        let spec = ProblemSpec::seeded_random(40, 16, 9).unwrap();
        for seed in 0..50 {
            let out = search(&spec, seed).unwrap();
            assert!(out.is_target);
            let MeasuredItem::Catalog(item) = out.measured_item else {
                panic!("padding measured")
            };
            assert!(spec.is_target(item));
        }
    }

    #[test]
    fn search_reports_costs() {
        let spec = ProblemSpec::first(20, 6).unwrap();
        let out = search(&spec, 1).unwrap();
        assert_eq!(out.iterations_used, 3);
        assert_eq!(out.oracle_calls_abstract, 3);
        assert_eq!(out.oracle_calls_recursive_model, 13);
        assert_eq!(out, search(&spec, 1).unwrap());
    }

    #[test]
    fn verify_passes_and_fails_on_tolerance() {
        let spec = ProblemSpec::first(32, 6).unwrap();
        let report = verify(&spec, 3).unwrap();
        assert!(report.passed, "{:?}", report.failures().collect::<Vec<_>>());
        assert!(report.checks.iter().any(|c| c.name.starts_with("recursive.calls")));
        let broken = verify_with_tolerance(&spec, 3, 0.0).unwrap();
        assert!(!broken.passed);
    }

    #[test]
    fn verify_power_of_four_is_exact() {
        let report = verify(&ProblemSpec::first(64, 16).unwrap(), 2).unwrap();
        assert!(report.passed);
        for c in report.checks.iter().filter(|c| c.name.starts_with("certainty")) {
            assert_eq!(c.observed, 1.0);
        }
    }
}
