//! Totally correct anonymous leader election on a pre-shared
//! `αW_n + βW̄_n` resource.
//!
//! Network model: `n` processors with identical initial classical state,
//! one qubit each of a symmetric shared state, and faultless synchronous
//! all-to-all classical broadcast. Since every message reaches every other
//! processor, topology plays no role.
//!
//! Each processor measures its qubit, broadcasts the bit, counts zeros and
//! ones over its own bit plus the `n - 1` received ones, and becomes leader
//! iff its bit is in the strict minority. Every outcome of the resource has
//! weight 1 or `n - 1`, so exactly one processor holds the minority bit.
//!
//! The `n` local measurements are sampled as one whole-register measurement,
//! which has the same outcome distribution.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::rng;
use crate::statekit::{self, PureState};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ProcessorState {
    pub c: Option<u8>,
    pub count_zeros: usize,
    pub count_ones: usize,
    pub leader: Option<bool>,
}

impl ProcessorState {
    /// Identical starting state for every processor.
    pub fn new() -> Self {
        Self::default()
    }

    /// Record the measurement result and seed the counters with it.
    pub fn measured(&mut self, bit: u8) {
        self.c = Some(bit);
        if bit == 0 {
            self.count_zeros = 1;
            self.count_ones = 0;
        } else {
            self.count_ones = 1;
            self.count_zeros = 0;
        }
    }

    pub fn outgoing(&self) -> Option<u8> {
        self.c
    }

    pub fn receive(&mut self, messages: impl IntoIterator<Item = u8>) {
        for j in messages {
            match j {
                1 => self.count_ones += 1,
                0 => self.count_zeros += 1,
                _ => {}
            }
        }
    }

    pub fn decide(&mut self) -> bool {
        let leader = match self.c {
            Some(c) => decide_leader(c, self.count_zeros, self.count_ones),
            None => false,
        };
        self.leader = Some(leader);
        leader
    }
}

/// Leader iff the processor's bit is in the strict minority. Ties give
/// `false`.
pub fn decide_leader(c: u8, count_zeros: usize, count_ones: usize) -> bool {
    (count_ones > count_zeros && c == 0) || (count_zeros > count_ones && c == 1)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElectionTrace {
    pub n: usize,
    /// Bit measured by processor `i` (holding qubit `i + 1`).
    pub measured_bits: Vec<u8>,
    /// The messages sent in the single broadcast round; each processor
    /// receives all of them except its own.
    pub broadcast_round: Vec<u8>,
    pub messages_delivered: usize,
    pub processors: Vec<ProcessorState>,
    pub leader_flags: Vec<bool>,
    pub rounds_used: usize,
}

impl ElectionTrace {
    /// The unique leader, or `None` if zero or several processors claim it.
    pub fn leader(&self) -> Option<usize> {
        let mut leaders = self.leader_flags.iter().enumerate().filter(|(_, &f)| f);
        match (leaders.next(), leaders.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }
}

fn check_resource(n: usize, alpha: Complex64, beta: Complex64) -> Result<PureState> {
    statekit::wtilde_state(n, alpha, beta)
}

/// Execute the protocol once for a given measurement outcome.
pub fn run_protocol(measured_bits: &[u8]) -> ElectionTrace {
    let n = measured_bits.len();
    let mut processors = vec![ProcessorState::new(); n];
    for (p, &bit) in processors.iter_mut().zip(measured_bits) {
        p.measured(bit);
    }
    let broadcast_round: Vec<u8> = processors.iter().filter_map(ProcessorState::outgoing).collect();
    let mut messages_delivered = 0;
    for (i, p) in processors.iter_mut().enumerate() {
        let inbox = broadcast_round.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, &b)| b);
        let before = p.count_zeros + p.count_ones;
        p.receive(inbox);
        messages_delivered += p.count_zeros + p.count_ones - before;
    }
    let leader_flags = processors.iter_mut().map(ProcessorState::decide).collect();
    ElectionTrace {
        n,
        measured_bits: measured_bits.to_vec(),
        broadcast_round,
        messages_delivered,
        processors,
        leader_flags,
        rounds_used: 1,
    }
}

fn sample_and_run<R: Rng + ?Sized>(resource: &PureState, rng: &mut R) -> Result<ElectionTrace> {
    // measurement bits come most significant qubit first; processor i holds qubit i + 1
    let mut bits = statekit::measure_computational(resource, rng)?;
    bits.reverse();
    Ok(run_protocol(&bits))
}

pub fn run_election<R: Rng + ?Sized>(
    n: usize,
    alpha: Complex64,
    beta: Complex64,
    rng: &mut R,
) -> Result<ElectionTrace> {
    let resource = check_resource(n, alpha, beta)?;
    sample_and_run(&resource, rng)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialStats {
    pub n: usize,
    pub alpha2: f64,
    pub trials: usize,
    pub failures: usize,
    pub leader_counts: Vec<usize>,
    pub leader_bit_one_count: usize,
    pub leader_bit_one_frac: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

impl TrialStats {
    /// Pearson chi-square test of `leader_counts` against the uniform
    /// distribution over processors.
    pub fn chi_square_uniformity(&self) -> ChiSquareTest {
        let total: usize = self.leader_counts.iter().sum();
        let expected = total as f64 / self.n as f64;
        let statistic = self
            .leader_counts
            .iter()
            .map(|&o| (o as f64 - expected).powi(2) / expected)
            .sum();
        let dof = self.n - 1;
        let dist = ChiSquared::new(dof as f64).expect("positive degrees of freedom");
        ChiSquareTest { statistic, dof, p_value: dist.sf(statistic) }
    }
}

/// Run `trials` independent elections; trial `i` draws from stream
/// `(seed, i)`. A trial fails unless exactly one processor is leader.
pub fn run_trials(n: usize, alpha: Complex64, beta: Complex64, trials: usize, seed: u64) -> Result<TrialStats> {
    if trials == 0 {
        return Err(Error::NoTrials);
    }
    let resource = check_resource(n, alpha, beta)?;
    let outcomes: Vec<Option<(usize, u8)>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(seed, i as u64);
            let trace = sample_and_run(&resource, &mut rng)?;
            Ok(trace.leader().map(|l| (l, trace.measured_bits[l])))
        })
        .collect::<Result<_>>()?;

    let mut leader_counts = vec![0; n];
    let mut failures = 0;
    let mut leader_bit_one_count = 0;
    for outcome in outcomes {
        match outcome {
            Some((leader, bit)) => {
                leader_counts[leader] += 1;
                leader_bit_one_count += bit as usize;
            }
            None => failures += 1,
        }
    }
    Ok(TrialStats {
        n,
        alpha2: alpha.norm_sqr(),
        trials,
        failures,
        leader_counts,
        leader_bit_one_count,
        leader_bit_one_frac: leader_bit_one_count as f64 / trials as f64,
        seed,
    })
}

/// Real non-negative `(alpha, beta)` with `|alpha|^2 = alpha2`.
pub fn real_amplitudes(alpha2: f64) -> (Complex64, Complex64) {
    let alpha2 = alpha2.clamp(0.0, 1.0);
    (Complex64::new(alpha2.sqrt(), 0.0), Complex64::new((1.0 - alpha2).sqrt(), 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn decide_leader_branches() {
        assert!(decide_leader(0, 1, 3));
        assert!(!decide_leader(1, 1, 3));
        assert!(!decide_leader(0, 2, 2));
        assert!(!decide_leader(1, 2, 2));
        assert!(decide_leader(1, 3, 1));
        assert!(!decide_leader(0, 3, 1));
    }

    #[test]
    fn unique_one_wins() {
        let t = run_protocol(&[1, 0, 0]);
        assert_eq!(t.processors[0].count_zeros, 2);
        assert_eq!(t.processors[0].count_ones, 1);
        assert_eq!(t.leader_flags, vec![true, false, false]);
        assert_eq!(t.leader(), Some(0));
    }

    #[test]
    fn unique_zero_wins() {
        let t = run_protocol(&[1, 1, 0]);
        assert_eq!(t.processors[2].count_ones, 2);
        assert_eq!(t.processors[2].count_zeros, 1);
        assert_eq!(t.leader(), Some(2));
    }

    #[test]
    fn counters_and_messages() {
        for n in 3..=8 {
            let mut bits = vec![0; n];
            bits[n / 2] = 1;
            let t = run_protocol(&bits);
            assert_eq!(t.rounds_used, 1);
            assert_eq!(t.messages_delivered, n * (n - 1));
            assert_eq!(t.broadcast_round.len(), n);
            for p in &t.processors {
                assert_eq!(p.count_zeros + p.count_ones, n);
                assert!(p.leader.is_some());
            }
        }
    }

    #[test]
    fn anonymous_initial_state() {
        let p = ProcessorState::new();
        assert_eq!(p.c, None);
        assert_eq!(p.leader, None);
    }

    #[test]
    fn pure_w_resource_elects_the_one() {
        let mut r = rng::seeded(8);
        for _ in 0..200 {
            let t = run_election(4, c(1.0), c(0.0), &mut r).unwrap();
            let leader = t.leader().unwrap();
            assert_eq!(t.measured_bits[leader], 1);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut r = rng::seeded(0);
        assert!(matches!(run_election(2, c(1.0), c(0.0), &mut r), Err(Error::QubitCount { .. })));
        assert!(matches!(
            run_election(4, c(1.0), c(1.0), &mut r),
            Err(Error::UnnormalizedCoefficients { .. })
        ));
        assert_eq!(run_trials(4, c(1.0), c(0.0), 0, 0), Err(Error::NoTrials));
    }

    #[test]
    fn complex_phases_are_accepted() {
        let mut r = rng::seeded(4);
        let alpha = Complex64::from_polar(0.6, 1.1);
        let beta = Complex64::from_polar(0.8, -2.0);
        for _ in 0..50 {
            assert!(run_election(5, alpha, beta, &mut r).unwrap().leader().is_some());
        }
    }

    #[test]
    fn trials_are_reproducible() {
        let h = c(FRAC_1_SQRT_2);
        let a = run_trials(5, h, h, 2000, 99).unwrap();
        let b = run_trials(5, h, h, 2000, 99).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.failures, 0);
        assert_eq!(a.leader_counts.iter().sum::<usize>(), 2000);
    }

    #[test]
    fn chi_square_of_flat_counts_is_zero() {
        let stats = TrialStats {
            n: 4,
            alpha2: 0.5,
            trials: 400,
            failures: 0,
            leader_counts: vec![100; 4],
            leader_bit_one_count: 200,
            leader_bit_one_frac: 0.5,
            seed: 0,
        };
        let t = stats.chi_square_uniformity();
        assert_eq!(t.statistic, 0.0);
        assert_eq!(t.dof, 3);
        assert!((t.p_value - 1.0).abs() < 1e-12);
        let skewed = TrialStats { leader_counts: vec![190, 70, 70, 70], ..stats };
        assert!(skewed.chi_square_uniformity().p_value < 1e-6);
    }

    #[test]
    fn json_fields() {
        let (a, b) = real_amplitudes(0.25);
        let s = run_trials(3, a, b, 10, 1).unwrap();
        let json = serde_json::to_value(&s).unwrap();
        for key in ["n", "alpha2", "trials", "failures", "leader_counts", "leader_bit_one_frac", "seed"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        assert!((json["alpha2"].as_f64().unwrap() - 0.25).abs() < 1e-15);
    }
}
