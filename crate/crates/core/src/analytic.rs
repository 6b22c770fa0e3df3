//! Closed-form success probabilities after the main phase and after `q`
//! extra iterations.
//!
//! After `ñ − p̃ + q` iterations (`q >= 1`) the state is
//! `2^{−p̃+1} [A_q Σ_T |w⟩ + B_q Σ_{f_{ñ−p̃}=1} |w⟩]`, so only the pair
//! `(A_q, B_q)` and the filling fraction `ρ` are needed to predict the
//! measurement statistics, for any database size.

use std::fmt::Write as _;

use serde::Serialize;

use crate::embedding::Embedding;
use crate::error::{Error, Result};

/// Largest number of extra iterations accepted by [`p_q`].
pub const MAX_EXTRA_ITERATIONS: u32 = 64;

fn check_rho(rho: f64) -> Result<()> {
    if rho > 0.25 && rho <= 1.0 {
        Ok(())
    } else {
        Err(Error::RhoOutOfDomain(rho))
    }
}

/// `δ = (4ρ − 1)/2`.
pub fn delta(rho: f64) -> f64 {
    (4.0 * rho - 1.0) / 2.0
}

/// Probability of a target when measuring right after the main phase.
pub fn p0(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(rho)
}

/// One extra iteration: `ρ(3 − 4ρ)²`.
pub fn p1(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    Ok(rho * (3.0 - 4.0 * rho).powi(2))
}

/// Two extra iterations, in closed form.
pub fn p2(rho: f64) -> Result<f64> {
    check_rho(rho)?;
    let d = delta(rho);
    let c = 8.0 * ((1.0 - d).powi(2) * rho - d * d * (1.0 - rho));
    Ok(4.0 * rho * (1.0 - d).powi(2) * (1.0 - c).powi(2))
}

/// `(A_q, B_q)` for a given `q >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CollapsedState {
    pub q: u32,
    pub a: f64,
    pub b: f64,
    pub rho: f64,
}

impl CollapsedState {
    /// The state after one extra iteration: `(1 − δ, −δ)`.
    pub fn first(rho: f64) -> Result<Self> {
        check_rho(rho)?;
        let d = delta(rho);
        Ok(Self {
            q: 1,
            a: 1.0 - d,
            b: -d,
            rho,
        })
    }

    /// Applies [`recurse`] and rescales back onto `4(A²ρ + B²(1 − ρ)) = 1`.
    ///
    /// In exact arithmetic the rescaling is the identity. In floating point a
    /// norm error `ε` becomes `(1 + c²)ε` per step with `|c| <= 2`, so
    /// without it the norm drifts away within a few dozen steps.
    pub fn next(&self) -> Self {
        let (a, b) = recurse(self.a, self.b, self.rho);
        let mut next = Self {
            q: self.q + 1,
            a,
            b,
            rho: self.rho,
        };
        let scale = next.norm().sqrt().recip();
        next.a *= scale;
        next.b *= scale;
        next
    }

    /// `4(A²ρ + B²(1 − ρ))`, identically 1.
    pub fn norm(&self) -> f64 {
        4.0 * (self.a * self.a * self.rho + self.b * self.b * (1.0 - self.rho))
    }

    /// `4A²ρ`.
    pub fn probability(&self) -> f64 {
        4.0 * self.a * self.a * self.rho
    }

    /// Amplitude on each target for a concrete embedding.
    pub fn target_amplitude(&self, embedding: &Embedding) -> f64 {
        self.a * 0.5f64.powi(embedding.target_exponent() as i32 - 1)
    }

    /// Amplitude on each index with `f_{ñ−p̃} = 1`.
    pub fn aux_amplitude(&self, embedding: &Embedding) -> f64 {
        self.b * 0.5f64.powi(embedding.target_exponent() as i32 - 1)
    }
}

/// One step of the `(A, B)` recursion.
pub fn recurse(a: f64, b: f64, rho: f64) -> (f64, f64) {
    let c = 8.0 * (a * a * rho - b * b * (1.0 - rho));
    ((1.0 - c) * a, -(1.0 + c) * b)
}

/// Collapsed state after `q >= 1` extra iterations.
pub fn collapsed_state(rho: f64, q: u32) -> Result<CollapsedState> {
    if q == 0 {
        return Err(Error::NoCollapsedForm);
    }
    check_q(q)?;
    let mut state = CollapsedState::first(rho)?;
    for _ in 1..q {
        state = state.next();
    }
    Ok(state)
}

fn check_q(q: u32) -> Result<()> {
    if q > MAX_EXTRA_ITERATIONS {
        return Err(Error::TooManyExtraIterations {
            requested: q,
            limit: MAX_EXTRA_ITERATIONS,
        });
    }
    Ok(())
}

/// Success probability after `q` extra iterations.
pub fn p_q(rho: f64, q: u32) -> Result<f64> {
    check_q(q)?;
    if q == 0 {
        return p0(rho);
    }
    Ok(collapsed_state(rho, q)?.probability())
}

/// Amplitude `2^{−ñ+j}` of every marked index after `j` main-phase
/// iterations.
pub fn main_phase_amplitude(embedding: &Embedding, j: u32) -> Result<f64> {
    let max = embedding.main_phase_len();
    if j > max {
        return Err(Error::StepOutOfRange { j, max });
    }
    Ok(0.5f64.powi(embedding.extended_exponent() as i32 - j as i32))
}

/// `(ρ, P_q(ρ))` samples for one `q`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityCurve {
    pub q: u32,
    pub samples: Vec<(f64, f64)>,
}

/// Evenly spaced `ρ` values from `start` to `stop` inclusive.
///
/// Points are rounded to 12 decimals so that grid values such as 0.5 land
/// exactly on their decimal value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoGrid {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for RhoGrid {
    fn default() -> Self {
        Self {
            start: 0.26,
            stop: 1.0,
            step: 0.01,
        }
    }
}

impl RhoGrid {
    pub fn points(&self) -> Result<Vec<f64>> {
        let Self { start, stop, step } = *self;
        if !step.is_finite() || step <= 0.0 {
            return Err(Error::InvalidGrid(format!("step must be positive, got {step}")));
        }
        if stop < start {
            return Err(Error::InvalidGrid(format!("stop {stop} below start {start}")));
        }
        check_rho(start).map_err(|_| Error::InvalidGrid(format!("start {start} outside (1/4, 1]")))?;
        check_rho(stop).map_err(|_| Error::InvalidGrid(format!("stop {stop} outside (1/4, 1]")))?;
        let count = ((stop - start) / step + 1e-9).floor() as u64;
        Ok((0..=count)
            .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
            .filter(|&rho| rho <= 1.0)
            .collect())
    }
}

/// One curve per entry of `qs`, evaluated on `grid`.
pub fn sweep(qs: &[u32], grid: &[f64]) -> Result<Vec<ProbabilityCurve>> {
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("rho values must be strictly increasing".into()));
    }
    qs.iter()
        .map(|&q| {
            let samples = grid
                .iter()
                .map(|&rho| p_q(rho, q).map(|p| (rho, p)))
                .collect::<Result<Vec<_>>>()?;
            Ok(ProbabilityCurve { q, samples })
        })
        .collect()
}

/// Locale-independent decimal with 17 significant digits.
pub fn format_sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{:.16}", x);
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (16 - exponent).max(0) as usize;
    format!("{:.*}", decimals, x)
}

/// CSV with header `rho,P<q>,...` and one row per grid point.
pub fn render_sweep_csv(curves: &[ProbabilityCurve]) -> String {
    let mut out = String::from("rho");
    for c in curves {
        write!(out, ",P{}", c.q).unwrap();
    }
    out.push('\n');
    let rows = curves.first().map_or(0, |c| c.samples.len());
    for r in 0..rows {
        out.push_str(&format_sig17(curves[0].samples[r].0));
        for c in curves {
            out.push(',');
            out.push_str(&format_sig17(c.samples[r].1));
        }
        out.push('\n');
    }
    out
}
