//! SLOCC relations between symmetric states.
//!
//! Two symmetric states with different degeneracy configurations lie in
//! different SLOCC classes; equal configurations prove nothing. Equivalence
//! is shown constructively by an invertible operator `m` with
//! `m^{⊗n}|source> ∝ |target>`, either one of the known operators or one
//! found by [`search_symmetric_ilo`].

mod simplex;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::majorana::{self, DegeneracyConfig};
use crate::rng;
use crate::statekit::{self, PureState, NORM_TOL};
use crate::{Error, Result};

pub use simplex::{minimize, SimplexOptions, SimplexResult};

/// `|det|` below which an operator is refused as an ILO.
pub const SINGULAR_DET: f64 = 1e-10;

/// Floor on `|det m| / ||m||_F^2` during the search.
pub const SEARCH_DET_FLOOR: f64 = 1e-6;

pub const DEFAULT_SUCCESS_THRESHOLD: f64 = 1e-8;

/// A 2x2 complex matrix acting on one qubit as `m|0> = m00|0> + m10|1>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LocalOperator {
    pub entries: [[Complex64; 2]; 2],
}

impl LocalOperator {
    pub fn new(entries: [[Complex64; 2]; 2]) -> Self {
        Self { entries }
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::new([[one, zero], [zero, one]])
    }

    /// Entries from `[re00, im00, re01, im01, re10, im10, re11, im11]`.
    pub fn from_params(p: &[f64]) -> Self {
        Self::new([
            [Complex64::new(p[0], p[1]), Complex64::new(p[2], p[3])],
            [Complex64::new(p[4], p[5]), Complex64::new(p[6], p[7])],
        ])
    }

    pub fn to_params(&self) -> [f64; 8] {
        let [[a, b], [c, d]] = self.entries;
        [a.re, a.im, b.re, b.im, c.re, c.im, d.re, d.im]
    }

    pub fn det(&self) -> Complex64 {
        let [[a, b], [c, d]] = self.entries;
        a * d - b * c
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::new(self.entries.map(|row| row.map(|z| z * factor)))
    }

    pub fn dagger(&self) -> Self {
        let [[a, b], [c, d]] = self.entries;
        Self::new([[a.conj(), c.conj()], [b.conj(), d.conj()]])
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let (x, y) = (&self.entries, &rhs.entries);
        let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = x[i][0] * y[0][j] + x[i][1] * y[1][j];
            }
        }
        Self::new(out)
    }

    pub fn inverse(&self) -> Result<Self> {
        let det = self.det();
        if det.norm() <= SINGULAR_DET {
            return Err(Error::SingularOperator { det_abs: det.norm() });
        }
        let [[a, b], [c, d]] = self.entries;
        Ok(Self::new([[d / det, -b / det], [-c / det, a / det]]))
    }

    /// Largest entry-wise deviation of `m m†` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let prod = self.mul(&self.dagger());
        let id = Self::identity();
        prod.entries
            .iter()
            .flatten()
            .zip(id.entries.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `m^{⊗n}` applied to raw amplitudes, in place.
    fn apply_all(&self, amps: &mut [Complex64], n: usize) {
        for q in 0..n {
            self.apply_on(amps, q);
        }
    }

    fn apply_on(&self, amps: &mut [Complex64], qubit: usize) {
        let [[a, b], [c, d]] = self.entries;
        let bit = 1usize << qubit;
        for v in 0..amps.len() {
            if v & bit != 0 {
                continue;
            }
            let x = amps[v];
            let y = amps[v | bit];
            amps[v] = a * x + b * y;
            amps[v | bit] = c * x + d * y;
        }
    }
}

/// `M_3`, taking `GHZ_3` to `W̃_3`.
pub fn builtin_m3() -> LocalOperator {
    use std::f64::consts::PI;
    let scale = 3f64.cbrt();
    let diag = Complex64::from_polar(1.0, PI / 6.0) / scale;
    let off = -Complex64::from_polar(1.0, 5.0 * PI / 6.0) / scale;
    LocalOperator::new([[diag, off], [off, diag]])
}

/// `M_4`, a unitary taking `GHZ_4` to `W̃_4`.
pub fn builtin_m4() -> LocalOperator {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    LocalOperator::new([
        [Complex64::new(r, 0.0), Complex64::new(-0.5, 0.5)],
        [Complex64::new(r, 0.0), Complex64::new(0.5, -0.5)],
    ])
}

/// Known GHZ-to-`W̃` operator for `n`, if any.
pub fn builtin_for(n: usize) -> Option<LocalOperator> {
    match n {
        3 => Some(builtin_m3()),
        4 => Some(builtin_m4()),
        _ => None,
    }
}

/// Every party applies `m` to its qubit; the result is renormalized.
pub fn apply_symmetric_ilo(m: &LocalOperator, state: &PureState) -> Result<PureState> {
    let det_abs = m.det().norm();
    if det_abs <= SINGULAR_DET {
        return Err(Error::SingularOperator { det_abs });
    }
    let mut amps = state.amps().to_vec();
    m.apply_all(&mut amps, state.n_qubits());
    statekit::normalize(&PureState::from_amps_unnormalized(amps)?)
}

/// Party `i` (qubit `i + 1`) applies `ops[i]`; the result is renormalized.
pub fn apply_local_ilos(ops: &[LocalOperator], state: &PureState) -> Result<PureState> {
    if ops.len() != state.n_qubits() {
        return Err(Error::DimensionMismatch { left: state.n_qubits(), right: ops.len() });
    }
    let mut amps = state.amps().to_vec();
    for (q, m) in ops.iter().enumerate() {
        let det_abs = m.det().norm();
        if det_abs <= SINGULAR_DET {
            return Err(Error::SingularOperator { det_abs });
        }
        m.apply_on(&mut amps, q);
    }
    statekit::normalize(&PureState::from_amps_unnormalized(amps)?)
}

/// `1 - |<target| m^{⊗n} source>|^2` after normalizing the image. Invariant
/// under `m -> c m`. A vanishing image scores 1.
pub fn infidelity(m: &LocalOperator, source: &PureState, target: &PureState) -> f64 {
    let mut amps = source.amps().to_vec();
    m.apply_all(&mut amps, source.n_qubits());
    projected_infidelity(&amps, target)
}

fn projected_infidelity(image: &[Complex64], target: &PureState) -> f64 {
    let norm_sqr: f64 = image.iter().map(|a| a.norm_sqr()).sum();
    if !(norm_sqr > 0.0) || !norm_sqr.is_finite() {
        return 1.0;
    }
    let overlap: Complex64 = target.amps().iter().zip(image).map(|(t, a)| t.conj() * a).sum();
    (1.0 - overlap.norm_sqr() / norm_sqr).max(0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SloccVerdict {
    pub config_a: DegeneracyConfig,
    pub config_b: DegeneracyConfig,
    /// True only when the configurations differ. False is inconclusive.
    pub inequivalent_proven: bool,
}

/// Compare the degeneracy configurations of two symmetric states.
pub fn degeneracy_verdict(a: &PureState, b: &PureState, tol: f64) -> Result<SloccVerdict> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::DimensionMismatch { left: a.n_qubits(), right: b.n_qubits() });
    }
    let config_a = majorana::degeneracy_config(&majorana::majorana_extract(a, tol)?, tol);
    let config_b = majorana::degeneracy_config(&majorana::majorana_extract(b, tol)?, tol);
    let inequivalent_proven = config_a != config_b;
    Ok(SloccVerdict { config_a, config_b, inequivalent_proven })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IloSearchConfig {
    pub restarts: usize,
    /// Simplex iterations per restart.
    pub iters: usize,
    pub seed: u64,
    pub success_threshold: f64,
}

impl Default for IloSearchConfig {
    fn default() -> Self {
        Self { restarts: 200, iters: 4000, seed: 0, success_threshold: DEFAULT_SUCCESS_THRESHOLD }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IloSearchResult {
    pub n: usize,
    /// `best_infidelity < success_threshold`. A false value means no ILO
    /// was found within the budget, not that none exists.
    pub found: bool,
    pub best_infidelity: f64,
    #[serde(rename = "operator")]
    pub best_operator: LocalOperator,
    pub restarts_used: usize,
    pub seed: u64,
    pub best_restart: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerPartySearchResult {
    pub n: usize,
    pub found: bool,
    pub best_infidelity: f64,
    pub operators: Vec<LocalOperator>,
    pub restarts_used: usize,
    pub seed: u64,
    pub best_restart: usize,
}

// Restarts run in fixed-size batches; the search stops after the first batch
// containing a success, so the outcome does not depend on scheduling.
const RESTART_BATCH: usize = 16;

fn check_search_inputs(source: &PureState, target: &PureState, config: &IloSearchConfig) -> Result<()> {
    if source.n_qubits() != target.n_qubits() {
        return Err(Error::DimensionMismatch { left: source.n_qubits(), right: target.n_qubits() });
    }
    for s in [source, target] {
        let norm_sqr = s.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::UnnormalizedState { norm_sqr });
        }
    }
    if config.restarts == 0 {
        return Err(Error::NoRestarts);
    }
    Ok(())
}

/// Scale-free conditioning measure used for the determinant floor.
fn relative_det(m: &LocalOperator) -> f64 {
    let f = m.frobenius_norm();
    if f == 0.0 {
        0.0
    } else {
        m.det().norm() / (f * f)
    }
}

fn random_operator<R: Rng>(rng: &mut R) -> LocalOperator {
    loop {
        let p: Vec<f64> = (0..8).map(|_| rng.sample(StandardNormal)).collect();
        let m = LocalOperator::from_params(&p);
        if relative_det(&m) >= SEARCH_DET_FLOOR {
            return m;
        }
    }
}

// Penalty for parameters under the determinant floor; above any infidelity.
const REJECTED: f64 = 2.0;

/// Run the simplex repeatedly from the current best point until the budget
/// is spent or a restart brings no improvement.
fn descend<F>(objective: &F, mut x: Vec<f64>, iters: usize, renormalize: impl Fn(&mut [f64])) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let mut remaining = iters;
    let mut best = objective(&x);
    let mut step = 0.3;
    while remaining > 0 {
        renormalize(&mut x);
        let opts = SimplexOptions { max_iters: remaining, initial_step: step, f_tol: 1e-18, x_tol: 1e-12 };
        let result = simplex::minimize(objective, &x, &opts);
        remaining -= result.iters.min(remaining);
        let improved = result.f < best * (1.0 - 1e-9);
        if result.f <= best {
            best = result.f;
            x = result.x;
        }
        if !improved || result.iters == 0 || best == 0.0 {
            break;
        }
        step = (step * 0.5).max(1e-3);
    }
    (x, best)
}

fn unit_frobenius(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
}

fn run_batched<T, F>(restarts: usize, threshold: f64, run: F) -> (T, f64, usize, usize)
where
    T: Send,
    F: Fn(usize) -> (T, f64) + Sync,
{
    let mut best: Option<(T, f64, usize)> = None;
    let mut used = 0;
    while used < restarts {
        let end = (used + RESTART_BATCH).min(restarts);
        let batch: Vec<(T, f64)> = (used..end).into_par_iter().map(&run).collect();
        for (offset, (x, f)) in batch.into_iter().enumerate() {
            let idx = used + offset;
            if best.as_ref().is_none_or(|(_, bf, _)| f < *bf) {
                best = Some((x, f, idx));
            }
        }
        used = end;
        if best.as_ref().is_some_and(|(_, f, _)| *f < threshold) {
            break;
        }
    }
    let (x, f, idx) = best.expect("at least one restart");
    (x, f, idx, used)
}

/// Randomized search for a single operator `m` with
/// `m^{⊗n}|source> ∝ |target>`.
///
/// Each restart draws the 8 real entries of `m` from a unit Gaussian on
/// stream `(seed, restart)` and minimizes [`infidelity`] with simplex
/// descent. Operators with `|det m| / ||m||_F^2 < 1e-6` are rejected.
pub fn search_symmetric_ilo(
    source: &PureState,
    target: &PureState,
    config: &IloSearchConfig,
) -> Result<IloSearchResult> {
    check_search_inputs(source, target, config)?;
    let n = source.n_qubits();
    let objective = |p: &[f64]| {
        let m = LocalOperator::from_params(p);
        if relative_det(&m) < SEARCH_DET_FLOOR {
            return REJECTED;
        }
        infidelity(&m, source, target)
    };
    let (x, best_infidelity, best_restart, restarts_used) =
        run_batched(config.restarts, config.success_threshold, |restart| {
            let mut rng = rng::stream(config.seed, restart as u64);
            let start = random_operator(&mut rng).to_params().to_vec();
            descend(&objective, start, config.iters, unit_frobenius)
        });
    let mut best_operator = LocalOperator::from_params(&x);
    let norm = best_operator.frobenius_norm();
    if norm > 0.0 {
        best_operator = best_operator.scaled(Complex64::new(1.0 / norm, 0.0));
    }
    Ok(IloSearchResult {
        n,
        found: best_infidelity < config.success_threshold,
        best_infidelity,
        best_operator,
        restarts_used,
        seed: config.seed,
        best_restart,
    })
}

/// As [`search_symmetric_ilo`] but with an independent operator per party
/// (`8n` real parameters).
pub fn search_per_party_ilo(
    source: &PureState,
    target: &PureState,
    config: &IloSearchConfig,
) -> Result<PerPartySearchResult> {
    check_search_inputs(source, target, config)?;
    let n = source.n_qubits();
    let objective = |p: &[f64]| {
        let mut amps = source.amps().to_vec();
        for (q, chunk) in p.chunks_exact(8).enumerate() {
            let m = LocalOperator::from_params(chunk);
            if relative_det(&m) < SEARCH_DET_FLOOR {
                return REJECTED;
            }
            m.apply_on(&mut amps, q);
        }
        projected_infidelity(&amps, target)
    };
    let per_block = |x: &mut [f64]| x.chunks_exact_mut(8).for_each(unit_frobenius);
    let (x, best_infidelity, best_restart, restarts_used) =
        run_batched(config.restarts, config.success_threshold, |restart| {
            let mut rng = rng::stream(config.seed, restart as u64);
            let start: Vec<f64> =
                (0..n).flat_map(|_| random_operator(&mut rng).to_params()).collect();
            descend(&objective, start, config.iters, per_block)
        });
    Ok(PerPartySearchResult {
        n,
        found: best_infidelity < config.success_threshold,
        best_infidelity,
        operators: x.chunks_exact(8).map(LocalOperator::from_params).collect(),
        restarts_used,
        seed: config.seed,
        best_restart,
    })
}
