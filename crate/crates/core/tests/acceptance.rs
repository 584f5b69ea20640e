//! Exit criteria. Run with `cargo test -p tcale-core --test acceptance -- --nocapture`
//! to see one PASS/FAIL line per criterion.

use std::f64::consts::FRAC_1_SQRT_2;
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng as _;
use rand_distr::StandardNormal;

use tcale_core::election::{real_amplitudes, run_trials, TrialStats};
use tcale_core::majorana::{
    degeneracy_config, elementary_symmetric, majorana_extract, majorana_state,
    majorana_sum_enumerated, phi_set, roots_rn, verify_lemma1, DEFAULT_POINT_TOL,
};
use tcale_core::rng;
use tcale_core::slocc::{
    apply_symmetric_ilo, builtin_m3, builtin_m4, degeneracy_verdict, search_symmetric_ilo,
    IloSearchConfig, IloSearchResult,
};
use tcale_core::statekit::{fidelity, ghz_state, w_state, wtilde_equal, DickeDecomposition, PureState};

fn report(id: u32, name: &str, pass: bool, detail: &str) {
    println!("criterion {id} [{}] {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "criterion {id} failed: {detail}");
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

// Five-case closed form, written out independently of the library.
fn closed_form(n: usize, h: usize) -> f64 {
    if h == 1 || h == n - 1 {
        factorial(n - 1) * FRAC_1_SQRT_2.powi(n as i32 - 2)
    } else {
        0.0
    }
}

#[test]
fn criterion_1_lemma1() {
    let start = Instant::now();
    let mut worst_err: f64 = 0.0;
    let mut worst_infidelity: f64 = 0.0;
    for n in 3..=8 {
        let brute = majorana_sum_enumerated(&phi_set(n).unwrap()).unwrap();
        for (v, amp) in brute.amps().iter().enumerate() {
            let want = closed_form(n, v.count_ones() as usize);
            worst_err = worst_err.max((amp - Complex64::new(want, 0.0)).norm());
        }
        let norm = 1.0 / ((2.0 * n as f64).sqrt() * factorial(n - 1) * FRAC_1_SQRT_2.powi(n as i32 - 2));
        let scaled: Vec<Complex64> = brute.amps().iter().map(|a| a * norm).collect();
        let scaled = PureState::from_amps_unnormalized(scaled).unwrap();
        let f = fidelity(&wtilde_equal(n).unwrap(), &scaled).unwrap();
        worst_infidelity = worst_infidelity.max(1.0 - f);

        let report = verify_lemma1(n).unwrap();
        assert!(report.holds(1e-9, 1e-10), "library report disagrees at n={n}");
        assert!((report.normalization - norm).abs() <= 1e-15 * norm);
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = worst_err <= 1e-9 && worst_infidelity <= 1e-10 && secs < 60.0;
    report(
        1,
        "permutation sum brute force vs closed form, n=3..8",
        pass,
        &format!("max |err| {worst_err:.2e}, max infidelity {worst_infidelity:.2e}, {secs:.2}s"),
    );
}

#[test]
fn criterion_2_root_identities() {
    let mut worst: f64 = 0.0;
    for n in 4..=12 {
        let roots = roots_rn(n).unwrap();
        for k in 1..=n - 3 {
            worst = worst.max(elementary_symmetric(&roots, k).unwrap().norm());
        }
        worst = worst.max((elementary_symmetric(&roots, n - 2).unwrap() - 1.0).norm());
    }
    report(2, "elementary symmetric sums of R_n, n=4..12", worst <= 1e-10, &format!("max deviation {worst:.2e}"));
}

#[test]
fn criterion_3_w_vs_wtilde_inequivalent() {
    let mut failures = Vec::new();
    for n in 3..=10 {
        let w = w_state(n).unwrap();
        let wt = wtilde_equal(n).unwrap();
        let cw = degeneracy_config(&majorana_extract(&w, DEFAULT_POINT_TOL).unwrap(), DEFAULT_POINT_TOL);
        let ct = degeneracy_config(&majorana_extract(&wt, DEFAULT_POINT_TOL).unwrap(), DEFAULT_POINT_TOL);
        let verdict = degeneracy_verdict(&w, &wt, DEFAULT_POINT_TOL).unwrap();
        let ok = cw.cardinalities() == [n - 1, 1]
            && ct.cardinalities() == vec![1; n].as_slice()
            && verdict.inequivalent_proven;
        if !ok {
            failures.push(format!("n={n}: W {cw} W~ {ct}"));
        }
    }
    report(
        3,
        "W_n (n-1,1) vs W~_n (1,...,1), inequivalent, n=3..10",
        failures.is_empty(),
        &if failures.is_empty() { "all n".to_string() } else { failures.join("; ") },
    );
}

#[test]
fn criterion_4_builtin_ilos() {
    let f3 = fidelity(&apply_symmetric_ilo(&builtin_m3(), &ghz_state(3).unwrap()).unwrap(), &wtilde_equal(3).unwrap()).unwrap();
    let f4 = fidelity(&apply_symmetric_ilo(&builtin_m4(), &ghz_state(4).unwrap()).unwrap(), &wtilde_equal(4).unwrap()).unwrap();
    let unitarity = builtin_m4().unitarity_error();
    let pass = f3 >= 1.0 - 1e-9 && f4 >= 1.0 - 1e-9 && unitarity <= 1e-12;
    report(
        4,
        "M_3 and M_4 take GHZ to W~",
        pass,
        &format!("1-F3 {:.2e}, 1-F4 {:.2e}, |M4 M4^dag - I| {unitarity:.2e}", 1.0 - f3, 1.0 - f4),
    );
}

fn ilo_search(n: usize) -> IloSearchResult {
    let config = IloSearchConfig { restarts: 200, seed: 0, ..Default::default() };
    search_symmetric_ilo(&ghz_state(n).unwrap(), &wtilde_equal(n).unwrap(), &config).unwrap()
}

#[test]
fn criterion_5_ilo_search() {
    let start = Instant::now();
    let results: Vec<IloSearchResult> = (3..=6).map(ilo_search).collect();
    let secs = start.elapsed().as_secs_f64();
    let positive = results[..2].iter().all(|r| r.found && r.best_infidelity < 1e-8);
    let negative = results[2..].iter().all(|r| !r.found && r.best_infidelity > 1e-4);
    let detail: Vec<String> = results
        .iter()
        .map(|r| format!("n={} found={} inf={:.2e} restarts={}", r.n, r.found, r.best_infidelity, r.restarts_used))
        .collect();
    report(
        5,
        "ILO search GHZ->W~ (found n=3,4; not found n=5,6)",
        positive && negative && secs < 300.0,
        &format!("{}; {secs:.1}s", detail.join(", ")),
    );
}

fn election_stats(n: usize, alpha2: f64, seed: u64) -> TrialStats {
    let (a, b) = real_amplitudes(alpha2);
    run_trials(n, a, b, 10_000, seed).unwrap()
}

#[test]
fn criterion_6_total_correctness() {
    let mut bad = Vec::new();
    for n in 3..=10 {
        for alpha2 in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let s = election_stats(n, alpha2, 0);
            if s.failures != 0 || s.leader_counts.iter().sum::<usize>() != s.trials {
                bad.push(format!("n={n} alpha2={alpha2}: {} failures", s.failures));
            }
        }
    }
    report(
        6,
        "exactly one leader in 10^4 trials, n=3..10 x 5 alpha2",
        bad.is_empty(),
        &if bad.is_empty() { "0 failures in 400000 trials".to_string() } else { bad.join("; ") },
    );
}

#[test]
fn criterion_7_election_statistics() {
    let mut bad = Vec::new();
    let mut min_p: f64 = 1.0;
    let mut max_dev: f64 = 0.0;
    for n in 3..=10 {
        let s = election_stats(n, 0.5, 0);
        let chi = s.chi_square_uniformity();
        min_p = min_p.min(chi.p_value);
        let dev = (s.leader_bit_one_frac - 0.5).abs();
        max_dev = max_dev.max(dev);
        if chi.p_value < 0.001 || dev > 0.02 {
            bad.push(format!("n={n}: p={:.4} dev={dev:.4}", chi.p_value));
        }
        let pure_w = election_stats(n, 1.0, 0);
        if pure_w.leader_bit_one_frac != 1.0 {
            bad.push(format!("n={n}: alpha2=1 frac {}", pure_w.leader_bit_one_frac));
        }
    }
    report(
        7,
        "leader uniformity (chi2, 0.001) and leader-bit law, n=3..10",
        bad.is_empty(),
        &format!("min p {min_p:.4}, max |frac-0.5| {max_dev:.4}{}", if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) }),
    );
}

#[test]
fn criterion_8_extraction_round_trip() {
    let mut rng = rng::seeded(2024);
    let mut worst: f64 = 1.0;
    let mut count = 0;
    for case in 0..60 {
        let n = 3 + case % 10;
        let mut coeffs: Vec<Complex64> = (0..=n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        coeffs.iter_mut().for_each(|c| *c /= norm);
        let state = DickeDecomposition::new(n, coeffs).unwrap().to_state();
        let points = majorana_extract(&state, DEFAULT_POINT_TOL).unwrap();
        assert_eq!(points.len(), n);
        let f = fidelity(&majorana_state(&points).unwrap(), &state).unwrap();
        worst = worst.min(f);
        count += 1;
    }
    report(
        8,
        "Majorana extraction round trip on random symmetric states",
        count >= 50 && worst >= 1.0 - 1e-8,
        &format!("{count} states, n=3..12, min fidelity 1-{:.2e}", 1.0 - worst),
    );
}

#[test]
fn criterion_9_determinism() {
    let search = |n| serde_json::to_string(&ilo_search(n)).unwrap();
    let elect = |n, a2| serde_json::to_string(&election_stats(n, a2, 0)).unwrap();
    let mut same = true;
    for n in 3..=6 {
        same &= search(n) == search(n);
    }
    for n in [3, 6, 10] {
        for a2 in [0.0, 0.5, 1.0] {
            same &= elect(n, a2) == elect(n, a2);
        }
    }
    report(9, "repeat runs of criteria 5-7 give byte-identical JSON", same, "ILO search n=3..6, elections n=3,6,10");
}
