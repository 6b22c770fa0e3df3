//! Oracle-call accounting when `I_{s_j}` is implemented through the
//! relation `I_{s_{j+1}} = I_{s_j} I_j I_{s_j} I_j I_{s_j}`.
//!
//! Every `I_j` costs one oracle call and `I_{s_0}` costs none, so one
//! application of `I_{s_j}` costs `t(j) = 3^j − 1` calls and `n_I` full
//! iterations cost `𝒞(n_I) = (3^{n_I} − 1)/2`. All counts use exact integer
//! arithmetic.

use serde::Serialize;

use crate::embedding::{Embedding, OracleSet};
use crate::error::{Error, Result};
use crate::statevector::StateVector;
use crate::strategy::{choose_iterations, Branch};

/// `log₄ 3`, the scaling exponent of the call count in `N/ν`.
pub const LOG4_3: f64 = 0.792_481_250_360_578_1;

/// Deepest expansion [`recursive_execute`] will perform.
pub const MAX_RECURSIVE_ITERATIONS: usize = 12;

/// `3^k`, or `None` on overflow.
pub fn pow3(k: u32) -> Option<u128> {
    (0..k).try_fold(1u128, |acc, _| acc.checked_mul(3))
}

fn pow3_or_overflow(k: u32) -> Result<u128> {
    pow3(k).ok_or(Error::CostOverflow(k))
}

/// Oracle calls used by one application of `I_{s_j}`: `3^j − 1`.
pub fn t(j: u32) -> Result<u128> {
    Ok(pow3_or_overflow(j)? - 1)
}

/// `t(j)` from `t(0) = 0`, `t(j+1) = 3t(j) + 2`.
pub fn t_by_recursion(j: u32) -> Result<u128> {
    (0..j).try_fold(0u128, |acc, _| {
        acc.checked_mul(3)
            .and_then(|x| x.checked_add(2))
            .ok_or(Error::CostOverflow(j))
    })
}

/// `𝒞(n_I) = (3^{n_I} − 1)/2`.
pub fn total_cost(iterations: u32) -> Result<u128> {
    Ok((pow3_or_overflow(iterations)? - 1) / 2)
}

/// `𝒞(n_I)` as `Σ t(j) + n_I`.
pub fn total_cost_by_sum(iterations: u32) -> Result<u128> {
    let mut total = iterations as u128;
    for j in 0..iterations {
        total = total.checked_add(t(j)?).ok_or(Error::CostOverflow(iterations))?;
    }
    Ok(total)
}

/// `(1/2)(k (N/ν)^{log₄3} − 1)` with `(N/ν)^{log₄3} = 3^n / 3^p̃`, in exact
/// integer arithmetic.
pub fn closed_form_exact(coefficient: u128, embedding: &Embedding) -> Result<u128> {
    let n = embedding.padded_exponent();
    let p = embedding.target_exponent();
    let ratio = pow3_or_overflow(n)? / pow3_or_overflow(p)?;
    let scaled = coefficient.checked_mul(ratio).ok_or(Error::CostOverflow(n + 2))?;
    Ok((scaled - 1) / 2)
}

/// The same formula with a floating-point power, as printed.
pub fn closed_form_float(coefficient: f64, embedding: &Embedding) -> f64 {
    let ratio = embedding.padded_size() as f64 / embedding.target_envelope() as f64;
    0.5 * (coefficient * ratio.powf(LOG4_3) - 1.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedForm {
    /// `C0`, `C>` or `C<`.
    pub name: &'static str,
    pub coefficient: u128,
    pub exact: u128,
    pub float: f64,
}

/// Reference cost of the original single-target algorithm, which runs two
/// series of iterations. The printed closed form `3N^{log₄3} − 1` equals
/// two series of `n + 1` iterations, while two series of `n` iterations
/// cost `N^{log₄3} − 1`; both are reported.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoSeriesReference {
    pub series_length: u32,
    pub two_series_cost: u128,
    pub printed_form: u128,
    pub printed_form_series_length: u32,
    pub consistent: bool,
}

pub fn two_series_cost(series_length: u32) -> Result<u128> {
    total_cost(series_length)?
        .checked_mul(2)
        .ok_or(Error::CostOverflow(series_length))
}

impl TwoSeriesReference {
    pub fn new(embedding: &Embedding) -> Result<Self> {
        let n = embedding.padded_exponent();
        let two_series = two_series_cost(n)?;
        // 3 N^{log₄3} − 1 = 3^{n+1} − 1
        let printed = pow3_or_overflow(n + 1)? - 1;
        Ok(Self {
            series_length: n,
            two_series_cost: two_series,
            printed_form: printed,
            printed_form_series_length: n + 1,
            consistent: two_series == printed,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CostReport {
    pub branch: Option<Branch>,
    pub iterations: u32,
    /// `t(j)` for `j = 0 .. iterations`.
    pub t_table: Vec<u128>,
    pub total_calls: u128,
    /// Calls if every `I_{s_j}` were a single idealized reflection.
    pub abstract_calls: u128,
    pub closed_form: Option<ClosedForm>,
    pub two_series_reference: Option<TwoSeriesReference>,
    pub exponent: f64,
    pub exponent_4dp: f64,
}

impl CostReport {
    /// Report for an explicit iteration count, without branch selection.
    pub fn for_iterations(iterations: u32) -> Result<Self> {
        Ok(Self {
            branch: None,
            iterations,
            t_table: (0..iterations).map(t).collect::<Result<_>>()?,
            total_calls: total_cost(iterations)?,
            abstract_calls: iterations as u128,
            closed_form: None,
            two_series_reference: None,
            exponent: LOG4_3,
            exponent_4dp: (LOG4_3 * 1e4).round() / 1e4,
        })
    }
}

/// Cost of the measurement strategy chosen for `embedding`.
pub fn strategy_cost(embedding: &Embedding) -> Result<CostReport> {
    let choice = choose_iterations(embedding);
    let mut report = CostReport::for_iterations(choice.iterations)?;
    let (name, coefficient) = match choice.branch {
        Branch::Certainty => ("C0", 3),
        Branch::MeasureAfterMainPhase => ("C>", 3),
        Branch::ExtraIteration => ("C<", 9),
    };
    report.branch = Some(choice.branch);
    report.closed_form = Some(ClosedForm {
        name,
        coefficient,
        exact: closed_form_exact(coefficient, embedding)?,
        float: closed_form_float(coefficient as f64, embedding),
    });
    report.two_series_reference = Some(TwoSeriesReference::new(embedding)?);
    Ok(report)
}

/// Runs `iterations` steps with every `I_{s_j}` expanded recursively down to
/// the oracle-free `I_{s_0}`, returning the final state and the number of
/// oracle calls actually made.
pub fn recursive_execute(oracle: &OracleSet, iterations: usize) -> Result<(StateVector, u64)> {
    if iterations > MAX_RECURSIVE_ITERATIONS {
        return Err(Error::ExpansionGate {
            requested: iterations,
            limit: MAX_RECURSIVE_ITERATIONS,
        });
    }
    let start = StateVector::uniform(oracle.embedding())?;
    let uniform_sqr = start.amplitudes()[0].powi(2);
    let calls_before = oracle.calls();
    let mut amplitudes = start.amplitudes().to_vec();
    for j in 0..iterations as u32 {
        apply_phase(oracle, &mut amplitudes, j);
        apply_state_reflection(oracle, &mut amplitudes, j, uniform_sqr);
        for a in &mut amplitudes {
            *a = -*a;
        }
    }
    let state = StateVector::from_amplitudes(amplitudes, iterations as u32);
    Ok((state, oracle.calls() - calls_before))
}

fn apply_phase(oracle: &OracleSet, v: &mut [f64], j: u32) {
    oracle.apply_target_phase(v);
    oracle.apply_aux_phase(v, j + 1);
}

fn apply_state_reflection(oracle: &OracleSet, v: &mut [f64], level: u32, uniform_sqr: f64) {
    if level == 0 {
        let shift = 2.0 * uniform_sqr * v.iter().sum::<f64>();
        for a in v.iter_mut() {
            *a -= shift;
        }
        return;
    }
    let below = level - 1;
    apply_state_reflection(oracle, v, below, uniform_sqr);
    apply_phase(oracle, v, below);
    apply_state_reflection(oracle, v, below, uniform_sqr);
    apply_phase(oracle, v, below);
    apply_state_reflection(oracle, v, below, uniform_sqr);
}
