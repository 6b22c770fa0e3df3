use quadsearch::cost::{
    closed_form_exact, closed_form_float, pow3, recursive_execute, strategy_cost, t, t_by_recursion, total_cost,
};
use quadsearch::dense::DenseMatrix;
use quadsearch::statevector::run_main_phase;
use quadsearch::strategy::Branch;
use quadsearch::{Embedding, OracleSet, ProblemSpec, StateVector};

#[test]
fn state_reflections_satisfy_the_five_factor_relation() {
    for (catalog, nu0) in [
        (1u64, 1u64),
        (4, 1),
        (4, 3),
        (16, 1),
        (16, 2),
        (16, 6),
        (16, 16),
        (13, 4),
    ] {
        let o = OracleSet::new(&ProblemSpec::first(catalog, nu0).unwrap()).unwrap();
        let e = *o.embedding();
        assert!(e.extended_size() <= 64);
        let mut s = StateVector::uniform(&e).unwrap();
        for j in 0..e.main_phase_len() {
            let reflect_j = DenseMatrix::reflection(s.amplitudes());
            let phase_j = DenseMatrix::phase_oracle(&o, j);
            s.iterate(&o);
            let reflect_next = DenseMatrix::reflection(s.amplitudes());
            let product = &(&(&(&reflect_j * &phase_j) * &reflect_j) * &phase_j) * &reflect_j;
            let diff = reflect_next.max_abs_diff(&product);
            assert!(diff < 1e-12, "{catalog} {nu0} j={j}: {diff}");
        }
    }
}

#[test]
fn measured_calls_equal_closed_form() {
    let o = OracleSet::new(&ProblemSpec::first(256, 3).unwrap()).unwrap();
    for n in 0..=7usize {
        let (state, calls) = recursive_execute(&o, n).unwrap();
        assert_eq!(calls as u128, (pow3(n as u32).unwrap() - 1) / 2);
        let direct = run_main_phase(&o, n as u32).unwrap();
        let worst = state
            .amplitudes()
            .iter()
            .zip(direct.amplitudes())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10, "n={n}: {worst}");
    }
}

#[test]
fn t_recursion_and_closed_form_agree() {
    for j in 0..=20 {
        assert_eq!(t_by_recursion(j).unwrap(), t(j).unwrap());
    }
}

#[test]
fn certainty_formula_matches_integer_count() {
    for n in 0..=8u32 {
        let big_n = 1u64 << (2 * n);
        for p in 0..=n {
            let e = Embedding::from_counts(big_n, 1 << (2 * p)).unwrap();
            assert!(e.is_power_of_four());
            let exact = closed_form_exact(3, &e).unwrap();
            assert_eq!(exact, total_cost(n + 1 - p).unwrap());
            assert_eq!(exact, total_cost(e.main_phase_len()).unwrap());
            assert!((closed_form_float(3.0, &e) - exact as f64).abs() < 1e-6 * exact.max(1) as f64);
            let report = strategy_cost(&e).unwrap();
            assert_eq!(report.branch, Some(Branch::Certainty));
            assert_eq!(report.closed_form.unwrap().exact, report.total_calls);
        }
    }
}

#[test]
fn all_branches_report_consistent_totals() {
    for catalog in [5u64, 20, 64, 100, 1000, 1 << 20, 1 << 40] {
        for nu0 in [1u64, 2, 3, 5, 6, 9, 12, 16, 17, 40]
            .into_iter()
            .filter(|&c| c <= catalog)
        {
            let e = Embedding::from_counts(catalog, nu0).unwrap();
            let report = strategy_cost(&e).unwrap();
            let cf = report.closed_form.as_ref().unwrap();
            assert_eq!(cf.exact, report.total_calls, "{catalog} {nu0}");
            let rel = (cf.float - cf.exact as f64).abs() / (cf.exact as f64).max(1.0);
            assert!(rel < 1e-9);
            assert_eq!(report.t_table.len(), report.iterations as usize);
            assert!(report.t_table.windows(2).all(|w| w[1] == 3 * w[0] + 2));
            assert_eq!(
                report.t_table.iter().sum::<u128>() + report.iterations as u128,
                report.total_calls
            );
        }
    }
}
