//! Dense real-amplitude simulation of the iteration `s_{j+1} = −I_{s_j} I_j s_j`.

use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::embedding::{Embedding, OracleSet};
use crate::error::{Error, Result};

/// Largest number of amplitudes the dense simulator will allocate.
pub const MAX_AMPLITUDES: u64 = 1 << 22;

/// Tolerance for unitarity and entrywise comparisons.
pub const UNITARY_TOL: f64 = 1e-12;

/// Real amplitudes over the extended database plus the number of
/// iterations applied so far.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<f64>,
    step: u32,
}

/// Fails with [`Error::SizeGate`] if `embedding` is too large to simulate.
pub fn check_size(embedding: &Embedding) -> Result<usize> {
    let required = embedding.extended_size();
    if required > MAX_AMPLITUDES {
        return Err(Error::SizeGate {
            required,
            limit: MAX_AMPLITUDES,
        });
    }
    Ok(required as usize)
}

impl StateVector {
    /// The equal superposition `s₀`.
    pub fn uniform(embedding: &Embedding) -> Result<Self> {
        let len = check_size(embedding)?;
        // Ñ = 4^ñ, so 1/√Ñ = 2^-ñ is exact.
        let amp = 0.5f64.powi(embedding.extended_exponent() as i32);
        Ok(Self {
            amplitudes: vec![amp; len],
            step: 0,
        })
    }

    pub fn from_amplitudes(amplitudes: Vec<f64>, step: u32) -> Self {
        Self { amplitudes, step }
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn step(&self) -> u32 {
        self.step
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum()
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        self.amplitudes.iter().zip(other).map(|(a, b)| a * b).sum()
    }

    /// `I_j = Σ (−1)^{F_{j+1}(w)} |w⟩⟨w|`, applied as the product of the
    /// target phase (one oracle call) and the oracle-free `(−1)^{f_{j+1}}`.
    pub fn apply_phase_oracle(&mut self, oracle: &OracleSet, j: u32) {
        oracle.apply_target_phase(&mut self.amplitudes);
        oracle.apply_aux_phase(&mut self.amplitudes, j + 1);
    }

    /// Reflection `I − 2|axis⟩⟨axis|` for a unit vector `axis`.
    pub fn reflect_about(&mut self, axis: &[f64]) {
        let overlap = 2.0 * self.dot(axis);
        for (a, s) in self.amplitudes.iter_mut().zip(axis) {
            *a -= overlap * s;
        }
    }

    pub fn negate(&mut self) {
        for a in &mut self.amplitudes {
            *a = -*a;
        }
    }

    /// One step `s_{j+1} = −I_{s_j} I_j s_j`, reflecting about the current
    /// state.
    pub fn iterate(&mut self, oracle: &OracleSet) {
        let axis = self.amplitudes.clone();
        self.apply_phase_oracle(oracle, self.step);
        self.reflect_about(&axis);
        self.negate();
        self.step += 1;
    }

    /// `Σ_{f = 1} |amplitude|²`.
    pub fn success_probability(&self, oracle: &OracleSet) -> f64 {
        oracle
            .target_indices()
            .iter()
            .map(|&t| self.amplitudes[t as usize].powi(2))
            .sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a * a).collect()
    }

    /// Draws `trials` computational-basis measurements; deterministic in `seed`.
    pub fn sample(&self, seed: u64, trials: u64) -> BTreeMap<u64, u64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dist = WeightedIndex::new(self.probabilities()).expect("normalized state has positive weight");
        let mut counts = BTreeMap::new();
        for _ in 0..trials {
            *counts.entry(dist.sample(&mut rng) as u64).or_insert(0) += 1;
        }
        counts
    }

    /// A single measurement.
    pub fn measure(&self, seed: u64) -> u64 {
        let counts = self.sample(seed, 1);
        *counts.keys().next().expect("one draw")
    }
}

/// Applies `n_iter` iterations to the uniform state.
pub fn run_main_phase(oracle: &OracleSet, n_iter: u32) -> Result<StateVector> {
    let mut state = StateVector::uniform(oracle.embedding())?;
    for _ in 0..n_iter {
        state.iterate(oracle);
    }
    Ok(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::ProblemSpec;

    fn oracle(catalog: u64, targets: u64) -> OracleSet {
        OracleSet::new(&ProblemSpec::first(catalog, targets).unwrap()).unwrap()
    }

    #[test]
    fn uniform_states() {
        let s = StateVector::uniform(oracle(1, 1).embedding()).unwrap();
        assert_eq!(s.amplitudes(), &[0.5; 4]);
        assert_eq!(s.norm_sqr(), 1.0);
        assert_eq!(s.step(), 0);
        let s = StateVector::uniform(&Embedding::from_counts(4, 1).unwrap()).unwrap();
        assert_eq!(s.amplitudes(), &[0.25; 16]);
        let s = StateVector::uniform(&Embedding::from_counts(1000, 3).unwrap()).unwrap();
        assert_eq!(s.norm_sqr(), 1.0);
    }

    #[test]
    fn size_gate() {
        assert!(StateVector::uniform(&Embedding::from_counts(1 << 20, 1).unwrap()).is_ok());
        let err = StateVector::uniform(&Embedding::from_counts((1 << 20) + 1, 1).unwrap()).unwrap_err();
        assert_eq!(
            err,
            Error::SizeGate {
                required: 1 << 24,
                limit: MAX_AMPLITUDES
            }
        );
    }

    #[test]
    fn phase_oracle_on_smallest_case() {
        // Ñ = 4, G = {0}, target at index 1; F_1 marks only the target, so
        // one sign flips and the signed sum Σ(−1)^{F_1} is Ñ/2 = 2.
        let o = oracle(1, 1);
        let mut s = StateVector::uniform(o.embedding()).unwrap();
        s.apply_phase_oracle(&o, 0);
        assert_eq!(s.amplitudes(), &[0.5, -0.5, 0.5, 0.5]);
        assert_eq!(s.amplitudes().iter().sum::<f64>() * 2.0, 2.0);
        assert_eq!(o.calls(), 1);
    }

    #[test]
    fn phase_oracle_is_an_involution() {
        let o = oracle(20, 6);
        let mut s = run_main_phase(&o, 1).unwrap();
        let before = s.clone();
        for j in 0..4 {
            s.apply_phase_oracle(&o, j);
            s.apply_phase_oracle(&o, j);
            assert_eq!(s.amplitudes(), before.amplitudes());
        }
    }

    #[test]
    fn phase_oracle_leaves_unmarked_untouched() {
        let o = oracle(20, 6);
        let s0 = StateVector::uniform(o.embedding()).unwrap();
        let mut s = s0.clone();
        s.apply_phase_oracle(&o, 1);
        for i in 0..s.len() {
            let expect = if o.marked(i as u64, 2) {
                -s0.amplitudes()[i]
            } else {
                s0.amplitudes()[i]
            };
            assert_eq!(s.amplitudes()[i], expect);
        }
    }

    #[test]
    fn smallest_case_finds_target_in_one_step() {
        let o = oracle(1, 1);
        let s = run_main_phase(&o, 1).unwrap();
        let target = o.target_indices()[0] as usize;
        for (i, &a) in s.amplitudes().iter().enumerate() {
            assert_eq!(a, if i == target { 1.0 } else { 0.0 });
        }
    }

    #[test]
    fn first_iterate_is_uniform_on_first_marked_set() {
        let o = oracle(20, 6);
        let s = run_main_phase(&o, 1).unwrap();
        let amp = 0.5f64.powi(o.embedding().extended_exponent() as i32 - 1);
        for (i, &a) in s.amplitudes().iter().enumerate() {
            assert_eq!(a, if o.marked(i as u64, 1) { amp } else { 0.0 });
        }
    }

    #[test]
    fn zero_iterations_is_uniform() {
        let o = oracle(20, 6);
        assert_eq!(
            run_main_phase(&o, 0).unwrap(),
            StateVector::uniform(o.embedding()).unwrap()
        );
    }

    #[test]
    fn success_probability_of_uniform_state() {
        let o = oracle(20, 6);
        let s = StateVector::uniform(o.embedding()).unwrap();
        assert!((s.success_probability(&o) - 6.0 / 256.0).abs() < 1e-15);
    }

    #[test]
    fn certainty_state_samples_only_targets() {
        let o = oracle(16, 4);
        let s = run_main_phase(&o, o.embedding().main_phase_len()).unwrap();
        assert_eq!(s.success_probability(&o), 1.0);
        let counts = s.sample(7, 1000);
        assert!(counts.keys().all(|&i| o.f(i)));
        assert_eq!(counts.values().sum::<u64>(), 1000);
    }

    #[test]
    fn sampling_is_deterministic() {
        let o = oracle(20, 6);
        let s = run_main_phase(&o, 3).unwrap();
        assert_eq!(s.sample(11, 500), s.sample(11, 500));
        assert_eq!(s.measure(3), s.measure(3));
    }

    #[test]
    fn uniform_four_sampling_frequencies() {
        let s = StateVector::uniform(oracle(1, 1).embedding()).unwrap();
        let trials = 100_000u64;
        let counts = s.sample(2024, trials);
        let sigma = (trials as f64 * 0.25 * 0.75).sqrt();
        for i in 0..4 {
            let c = counts.get(&i).copied().unwrap_or(0) as f64;
            assert!((c - 25_000.0).abs() < 3.0 * sigma, "index {i}: {c}");
        }
    }
}
