//! Dense state vectors over the `n`-qubit computational basis.
//!
//! Basis index `v` encodes the string `a_n a_{n-1} ... a_1`, qubit 1 being
//! the least significant bit. Bit vectors passed to or returned from this
//! module are written in that same left-to-right order, so `bits[0]` is
//! `a_n` and `bits[n - 1]` is `a_1`.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type ComplexAmp = Complex64;

/// Largest register held densely (`2^20` amplitudes).
pub const MAX_QUBITS: usize = 20;

/// Squared-norm tolerance used when validating inputs.
pub const NORM_TOL: f64 = 1e-10;

/// Component-wise tolerance used by checks that need a symmetric input.
pub const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amps: Vec<Complex64>,
    intermediate: bool,
}

impl PureState {
    /// Validated normalized state from a full amplitude vector.
    pub fn from_amps(amps: Vec<Complex64>) -> Result<Self> {
        let state = Self::from_amps_unnormalized(amps)?;
        let norm_sqr = state.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::UnnormalizedState { norm_sqr });
        }
        Ok(Self { intermediate: false, ..state })
    }

    /// Amplitude vector that is explicitly flagged as an un-normalized
    /// intermediate. Length and finiteness are still checked.
    pub fn from_amps_unnormalized(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::AmplitudeLength { len, expected: len.next_power_of_two().max(2) });
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_qubits(n_qubits, 1)?;
        if let Some(index) = amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { n_qubits, amps, intermediate: true })
    }

    // Callers guarantee length and normalization.
    pub(crate) fn from_parts(n_qubits: usize, amps: Vec<Complex64>, intermediate: bool) -> Self {
        debug_assert_eq!(amps.len(), 1 << n_qubits);
        Self { n_qubits, amps, intermediate }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    /// Amplitude of the basis string `bits` (most significant qubit first).
    pub fn amp_of(&self, bits: &[u8]) -> Result<Complex64> {
        if bits.len() != self.n_qubits {
            return Err(Error::DimensionMismatch { left: self.n_qubits, right: bits.len() });
        }
        Ok(self.amps[index_of(bits)?])
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    /// True when this value was built as an un-normalized intermediate.
    pub fn is_intermediate(&self) -> bool {
        self.intermediate
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn to_file(&self) -> StateFile {
        StateFile { n: self.n_qubits, amps: self.amps.clone() }
    }
}

/// On-disk form `{"n": int, "amps": [[re, im], ...]}`, amplitudes in basis
/// index order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub n: usize,
    pub amps: Vec<Complex64>,
}

impl StateFile {
    pub fn into_state(self) -> Result<PureState> {
        let state = PureState::from_amps(self.amps)?;
        if state.n_qubits() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: state.n_qubits() });
        }
        Ok(state)
    }
}

/// Weights of a symmetric state on the normalized Dicke basis.
///
/// `coeffs[k]` is the overlap with the normalized Dicke state of Hamming
/// weight `k`. These differ from un-normalized permutation-sum weights by a
/// factor `sqrt(C(n, k))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DickeDecomposition {
    pub n: usize,
    pub coeffs: Vec<Complex64>,
}

impl DickeDecomposition {
    pub fn new(n: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        check_qubits(n, 1)?;
        if coeffs.len() != n + 1 {
            return Err(Error::AmplitudeLength { len: coeffs.len(), expected: n + 1 });
        }
        Ok(Self { n, coeffs })
    }

    /// Re-expand on the computational basis. The result is normalized
    /// whenever the coefficients are.
    pub fn to_state(&self) -> PureState {
        let weights: Vec<Complex64> =
            (0..=self.n).map(|k| self.coeffs[k] / binomial(self.n, k).sqrt()).collect();
        let amps = (0..1usize << self.n).map(|v| weights[v.count_ones() as usize]).collect();
        let norm: f64 = self.coeffs.iter().map(|c| c.norm_sqr()).sum();
        PureState::from_parts(self.n, amps, (norm - 1.0).abs() > NORM_TOL)
    }
}

pub(crate) fn check_qubits(n: usize, min: usize) -> Result<()> {
    if n < min || n > MAX_QUBITS {
        return Err(Error::QubitCount { n, min, max: MAX_QUBITS });
    }
    Ok(())
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64).round()
}

/// Basis index of a bit string written most significant qubit first.
pub fn index_of(bits: &[u8]) -> Result<usize> {
    bits.iter().try_fold(0usize, |acc, &b| match b {
        0 | 1 => Ok((acc << 1) | b as usize),
        other => Err(Error::InvalidBit(other)),
    })
}

/// Inverse of [`index_of`].
pub fn bits_of(index: usize, n: usize) -> Vec<u8> {
    (0..n).rev().map(|q| ((index >> q) & 1) as u8).collect()
}

pub fn basis_state(bits: &[u8]) -> Result<PureState> {
    let n = bits.len();
    check_qubits(n, 1)?;
    let index = index_of(bits)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[index] = Complex64::new(1.0, 0.0);
    Ok(PureState::from_parts(n, amps, false))
}

pub fn dicke_state(n: usize, k: usize) -> Result<PureState> {
    check_qubits(n, 1)?;
    if k > n {
        return Err(Error::WeightOutOfRange { n, k });
    }
    let amp = Complex64::new(1.0 / binomial(n, k).sqrt(), 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let amps = (0..1usize << n)
        .map(|v| if v.count_ones() as usize == k { amp } else { zero })
        .collect();
    Ok(PureState::from_parts(n, amps, false))
}

pub fn w_state(n: usize) -> Result<PureState> {
    check_qubits(n, 3)?;
    dicke_state(n, 1)
}

/// Bit complement of [`w_state`].
pub fn wbar_state(n: usize) -> Result<PureState> {
    check_qubits(n, 3)?;
    dicke_state(n, n - 1)
}

/// `alpha * W_n + beta * W̄_n`. With `alpha = beta = 1/sqrt(2)` this is `W̃_n`,
/// the equal superposition of every weight-1 and weight-`(n-1)` string.
pub fn wtilde_state(n: usize, alpha: Complex64, beta: Complex64) -> Result<PureState> {
    check_qubits(n, 3)?;
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if (norm_sqr - 1.0).abs() > 1e-12 {
        return Err(Error::UnnormalizedCoefficients { norm_sqr });
    }
    let scale = 1.0 / (n as f64).sqrt();
    let zero = Complex64::new(0.0, 0.0);
    let amps = (0..1usize << n)
        .map(|v| match v.count_ones() as usize {
            1 => alpha * scale,
            w if w == n - 1 => beta * scale,
            _ => zero,
        })
        .collect();
    Ok(PureState::from_parts(n, amps, false))
}

/// `W̃_n` with equal real weights.
pub fn wtilde_equal(n: usize) -> Result<PureState> {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    wtilde_state(n, h, h)
}

pub fn ghz_state(n: usize) -> Result<PureState> {
    check_qubits(n, 2)?;
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    amps[0] = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    amps[(1 << n) - 1] = amps[0];
    Ok(PureState::from_parts(n, amps, false))
}

/// Equal superposition of the distinct arrangements of the bit multiset.
pub fn symmetrize(bits: &[u8]) -> Result<PureState> {
    let n = bits.len();
    check_qubits(n, 1)?;
    index_of(bits)?;
    let mut arrangement = bits.to_vec();
    arrangement.sort_unstable();
    let mut indices = vec![index_of(&arrangement)?];
    while next_permutation(&mut arrangement) {
        indices.push(index_of(&arrangement)?);
    }
    let amp = Complex64::new(1.0 / (indices.len() as f64).sqrt(), 0.0);
    let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
    for i in indices {
        amps[i] = amp;
    }
    Ok(PureState::from_parts(n, amps, false))
}

// Lexicographic successor; false once the sequence is non-increasing.
fn next_permutation(seq: &mut [u8]) -> bool {
    let Some(i) = seq.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = seq.iter().rposition(|&x| x > seq[i]).expect("pivot has a successor");
    seq.swap(i, j);
    seq[i + 1..].reverse();
    true
}

/// Swap the bits of qubits `q` and `q + 1` (0-based) in basis index `v`.
fn swap_adjacent(v: usize, q: usize) -> usize {
    let a = (v >> q) & 1;
    let b = (v >> (q + 1)) & 1;
    if a == b {
        v
    } else {
        v ^ (0b11 << q)
    }
}

/// Invariance under every adjacent transposition of qubits, which generate
/// the full symmetric group.
pub fn is_symmetric(state: &PureState, tol: f64) -> bool {
    let n = state.n_qubits();
    let amps = state.amps();
    (0..n.saturating_sub(1)).all(|q| {
        amps.iter()
            .enumerate()
            .all(|(v, a)| (a - amps[swap_adjacent(v, q)]).norm() <= tol)
    })
}

pub fn dicke_decompose(state: &PureState) -> Result<DickeDecomposition> {
    if !is_symmetric(state, SYMMETRY_TOL) {
        return Err(Error::NotSymmetric);
    }
    let n = state.n_qubits();
    let mut sums = vec![Complex64::new(0.0, 0.0); n + 1];
    for (v, a) in state.amps().iter().enumerate() {
        sums[v.count_ones() as usize] += a;
    }
    let coeffs = sums
        .into_iter()
        .enumerate()
        .map(|(k, s)| s / binomial(n, k).sqrt())
        .collect();
    DickeDecomposition::new(n, coeffs)
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner_product(a: &PureState, b: &PureState) -> Result<Complex64> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::DimensionMismatch { left: a.n_qubits(), right: b.n_qubits() });
    }
    Ok(a.amps().iter().zip(b.amps()).map(|(x, y)| x.conj() * y).sum())
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    inner_product(a, b).map(|z| z.norm_sqr())
}

/// `|a> ⊗ |b>`, with `a` on the more significant qubits.
pub fn tensor(a: &PureState, b: &PureState) -> Result<PureState> {
    let n = a.n_qubits() + b.n_qubits();
    check_qubits(n, 1)?;
    let amps = a
        .amps()
        .iter()
        .flat_map(|x| b.amps().iter().map(move |y| x * y))
        .collect();
    Ok(PureState::from_parts(n, amps, a.is_intermediate() || b.is_intermediate()))
}

pub fn normalize(a: &PureState) -> Result<PureState> {
    let norm = a.norm_sqr().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let amps = a.amps().iter().map(|x| x / norm).collect();
    Ok(PureState::from_parts(a.n_qubits(), amps, false))
}

/// Sample one computational-basis outcome of the whole register by inverse
/// CDF over `|amp|^2`. Returned bits are most significant qubit first.
pub fn measure_computational<R: Rng + ?Sized>(state: &PureState, rng: &mut R) -> Result<Vec<u8>> {
    let norm_sqr = state.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOL {
        return Err(Error::UnnormalizedState { norm_sqr });
    }
    let u: f64 = rng.random::<f64>() * norm_sqr;
    let mut acc = 0.0;
    let mut last_supported = 0;
    for (v, a) in state.amps().iter().enumerate() {
        let p = a.norm_sqr();
        if p == 0.0 {
            continue;
        }
        last_supported = v;
        acc += p;
        if u < acc {
            return Ok(bits_of(v, state.n_qubits()));
        }
    }
    Ok(bits_of(last_supported, state.n_qubits()))
}
