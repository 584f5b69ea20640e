//! Majorana representations of symmetric states.
//!
//! A symmetric state is, up to normalization, the sum over all qubit
//! permutations of a product `|φ_1> ⊗ ... ⊗ |φ_n>`. This module builds the
//! point set `Φ_n` of `W̃_n` from the roots of `x^(n-2) ± 1`, evaluates
//! permutation sums three ways (literal `n!` enumeration, subset recursion,
//! and the elementary-symmetric fast path), checks the closed-form overlaps
//! of `Φ_n` against brute force, and recovers the points of an arbitrary
//! symmetric state from the roots of its Majorana polynomial.
//!
//! In every permutation sum the `i`-th tensor factor sits on qubit `i`
//! (qubit 1 least significant), matching [`crate::statekit`].

mod polyroots;

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::statekit::{self, binomial, check_qubits, PureState};
use crate::{Error, Result};

pub use polyroots::roots as polynomial_roots;

/// Overlap tolerance below which two points count as the same.
pub const DEFAULT_POINT_TOL: f64 = 1e-8;

/// Largest `n` for [`majorana_sum`].
pub const MAX_PERMUTATION_SUM: usize = 12;

/// Largest `n` for [`majorana_sum_enumerated`].
pub const MAX_ENUMERATION: usize = 9;

/// Largest `n` for [`majorana_extract`].
pub const MAX_EXTRACT: usize = 16;

/// A single-qubit state `a0|0> + a1|1>`, compared up to global phase.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[Complex64; 2]", try_from = "[Complex64; 2]")]
pub struct ProjectiveQubit {
    a0: Complex64,
    a1: Complex64,
}

impl ProjectiveQubit {
    /// Normalizes `(a0, a1)`; rejects the zero vector.
    pub fn new(a0: Complex64, a1: Complex64) -> Result<Self> {
        let norm = (a0.norm_sqr() + a1.norm_sqr()).sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroVector);
        }
        Ok(Self { a0: a0 / norm, a1: a1 / norm })
    }

    pub fn zero() -> Self {
        Self { a0: Complex64::new(1.0, 0.0), a1: Complex64::new(0.0, 0.0) }
    }

    pub fn one() -> Self {
        Self { a0: Complex64::new(0.0, 0.0), a1: Complex64::new(1.0, 0.0) }
    }

    pub fn a0(&self) -> Complex64 {
        self.a0
    }

    pub fn a1(&self) -> Complex64 {
        self.a1
    }

    /// `|<self|other>|`.
    pub fn overlap(&self, other: &Self) -> f64 {
        (self.a0.conj() * other.a0 + self.a1.conj() * other.a1).norm()
    }

    pub fn same_point(&self, other: &Self, tol: f64) -> bool {
        self.overlap(other) > 1.0 - tol
    }
}

impl From<ProjectiveQubit> for [Complex64; 2] {
    fn from(q: ProjectiveQubit) -> Self {
        [q.a0, q.a1]
    }
}

impl TryFrom<[Complex64; 2]> for ProjectiveQubit {
    type Error = Error;

    fn try_from([a0, a1]: [Complex64; 2]) -> Result<Self> {
        Self::new(a0, a1)
    }
}

/// The `n - 2` roots of `x^(n-2) + 1` (even `n`) or `x^(n-2) - 1` (odd `n`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet {
    pub n: usize,
    pub roots: Vec<Complex64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DegeneracyConfig {
    cardinalities: Vec<usize>,
}

impl DegeneracyConfig {
    /// Sorts the group sizes into non-increasing order.
    pub fn new(mut cardinalities: Vec<usize>) -> Self {
        cardinalities.retain(|&c| c > 0);
        cardinalities.sort_unstable_by(|a, b| b.cmp(a));
        Self { cardinalities }
    }

    pub fn cardinalities(&self) -> &[usize] {
        &self.cardinalities
    }

    pub fn total(&self) -> usize {
        self.cardinalities.iter().sum()
    }

    /// True when every point is distinct.
    pub fn is_nondegenerate(&self) -> bool {
        self.cardinalities.iter().all(|&c| c == 1)
    }
}

impl fmt::Display for DegeneracyConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.cardinalities.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

pub fn roots_rn(n: usize) -> Result<RootSet> {
    check_qubits(n, 3)?;
    let m = (n - 2) as f64;
    let roots = (1..=n - 2)
        .map(|k| {
            let k = k as f64;
            let angle = if n % 2 == 0 { (2.0 * k - 1.0) * PI / m } else { 2.0 * k * PI / m };
            Complex64::from_polar(1.0, angle)
        })
        .collect();
    Ok(RootSet { n, roots })
}

/// `Φ_n`: the points `(|0> + r|1>)/sqrt(2)` for each `r` in [`roots_rn`],
/// followed by `|0>` and `|1>`.
pub fn phi_set(n: usize) -> Result<Vec<ProjectiveQubit>> {
    let roots = roots_rn(n)?;
    let mut points: Vec<ProjectiveQubit> = roots
        .roots
        .iter()
        .map(|&r| ProjectiveQubit {
            a0: Complex64::new(FRAC_1_SQRT_2, 0.0),
            a1: r * FRAC_1_SQRT_2,
        })
        .collect();
    points.push(ProjectiveQubit::zero());
    points.push(ProjectiveQubit::one());
    Ok(points)
}

/// Sum of all distinct products of `k` members of `roots`; `k = 0` gives 1.
pub fn elementary_symmetric(roots: &RootSet, k: usize) -> Result<Complex64> {
    let m = roots.roots.len();
    if k > m {
        return Err(Error::IndexOutOfRange { k, max: m });
    }
    let mut e = vec![Complex64::new(0.0, 0.0); m + 1];
    e[0] = Complex64::new(1.0, 0.0);
    for (i, &r) in roots.roots.iter().enumerate() {
        for j in (1..=i + 1).rev() {
            let prev = e[j - 1];
            e[j] += r * prev;
        }
    }
    Ok(e[k])
}

fn qubit_amps(q: &ProjectiveQubit) -> [Complex64; 2] {
    [q.a0, q.a1]
}

/// Exact sum over all `n!` orderings of the tensor product, un-normalized.
///
/// Orderings that share their assignment of a subset of points to the low
/// qubits are summed once and reused, so the cost is `O(n 3^n)` rather than
/// `O(n! 2^n)`. Summation order is fixed, so results are bitwise
/// reproducible.
pub fn majorana_sum(qubits: &[ProjectiveQubit]) -> Result<PureState> {
    let n = qubits.len();
    if !(3..=MAX_PERMUTATION_SUM).contains(&n) {
        return Err(Error::QubitCount { n, min: 3, max: MAX_PERMUTATION_SUM });
    }
    // partial[mask]: sum over bijections from qubits 1..=|mask| onto mask.
    let mut partial: Vec<Vec<Complex64>> = vec![Vec::new(); 1 << n];
    partial[0] = vec![Complex64::new(1.0, 0.0)];
    let mut masks: Vec<usize> = (1..1usize << n).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let size = mask.count_ones() as usize;
        let half = 1usize << (size - 1);
        let mut acc = vec![Complex64::new(0.0, 0.0); 1 << size];
        for (j, q) in qubits.iter().enumerate() {
            if mask & (1 << j) == 0 {
                continue;
            }
            let rest = &partial[mask ^ (1 << j)];
            let [q0, q1] = qubit_amps(q);
            for (i, &r) in rest.iter().enumerate() {
                acc[i] += q0 * r;
                acc[half + i] += q1 * r;
            }
        }
        partial[mask] = acc;
    }
    let amps = std::mem::take(&mut partial[(1 << n) - 1]);
    Ok(PureState::from_parts(n, amps, true))
}

/// [`majorana_sum`] divided by its own norm.
pub fn majorana_sum_normalized(qubits: &[ProjectiveQubit]) -> Result<PureState> {
    statekit::normalize(&majorana_sum(qubits)?)
}

/// The permutation sum by literal enumeration of every ordering. Slow; used
/// as a brute-force reference.
pub fn majorana_sum_enumerated(qubits: &[ProjectiveQubit]) -> Result<PureState> {
    let n = qubits.len();
    if !(1..=MAX_ENUMERATION).contains(&n) {
        return Err(Error::QubitCount { n, min: 1, max: MAX_ENUMERATION });
    }
    let mut acc = vec![Complex64::new(0.0, 0.0); 1 << n];
    let mut used = vec![false; n];
    enumerate_orderings(qubits, &mut used, vec![Complex64::new(1.0, 0.0)], &mut acc);
    Ok(PureState::from_parts(n, acc, true))
}

fn enumerate_orderings(
    qubits: &[ProjectiveQubit],
    used: &mut [bool],
    prefix: Vec<Complex64>,
    acc: &mut [Complex64],
) {
    if prefix.len() == acc.len() {
        for (a, p) in acc.iter_mut().zip(&prefix) {
            *a += p;
        }
        return;
    }
    for j in 0..qubits.len() {
        if used[j] {
            continue;
        }
        used[j] = true;
        let [q0, q1] = qubit_amps(&qubits[j]);
        let next: Vec<Complex64> =
            prefix.iter().map(|&p| q0 * p).chain(prefix.iter().map(|&p| q1 * p)).collect();
        enumerate_orderings(qubits, used, next, acc);
        used[j] = false;
    }
}

/// The permutation sum from its weight structure: a weight-`h` basis vector
/// receives `h! (n-h)!` times the coefficient of `z^h` in
/// `prod_j (a0_j + a1_j z)`.
pub fn majorana_sum_fast(qubits: &[ProjectiveQubit]) -> Result<PureState> {
    let n = qubits.len();
    check_qubits(n, 1)?;
    let poly = product_polynomial(qubits);
    let factorial = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    let weights: Vec<Complex64> =
        (0..=n).map(|h| poly[h] * (factorial(h) * factorial(n - h))).collect();
    let amps = (0..1usize << n).map(|v| weights[v.count_ones() as usize]).collect();
    Ok(PureState::from_parts(n, amps, true))
}

/// Normalized symmetric state whose Majorana points are `qubits`.
pub fn majorana_state(qubits: &[ProjectiveQubit]) -> Result<PureState> {
    let n = qubits.len();
    check_qubits(n, 1)?;
    // Normalized-Dicke weights poly[h] / sqrt(C(n,h)) avoid the factorial growth.
    let poly = product_polynomial(qubits);
    let coeffs = (0..=n).map(|h| poly[h] / binomial(n, h).sqrt()).collect();
    let dicke = statekit::DickeDecomposition::new(n, coeffs)?;
    statekit::normalize(&dicke.to_state())
}

fn product_polynomial(qubits: &[ProjectiveQubit]) -> Vec<Complex64> {
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for q in qubits {
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (k, &c) in poly.iter().enumerate() {
            next[k] += c * q.a0;
            next[k + 1] += c * q.a1;
        }
        poly = next;
    }
    poly
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightOverlap {
    pub h: usize,
    /// `<v|M_n>` for the lowest basis index of weight `h`.
    pub direct: Complex64,
    /// Five-case closed form.
    pub closed_form: Complex64,
    pub abs_err: f64,
    /// `h! (n-h)! 2^{-(n-2)/2} G_{h-1}` evaluated from the roots, for
    /// `1 <= h <= n-1`; zero at the edges.
    pub symmetric_sum_form: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma1Report {
    pub n: usize,
    pub per_weight: Vec<WeightOverlap>,
    pub normalization: f64,
    pub fidelity_to_wtilde: f64,
    /// Largest `|<v|M_n> - closed form|` over all `2^n` basis vectors.
    pub max_abs_err_all_basis: f64,
    /// Largest deviation between overlaps of equal Hamming weight.
    pub max_same_weight_spread: f64,
    /// `"enumeration"` for `n <= 8`, `"subset_recursion"` beyond.
    pub direct_method: String,
}

impl Lemma1Report {
    pub fn holds(&self, overlap_tol: f64, fidelity_tol: f64) -> bool {
        self.max_abs_err_all_basis <= overlap_tol
            && self.max_same_weight_spread <= overlap_tol
            && self.fidelity_to_wtilde >= 1.0 - fidelity_tol
    }
}

/// Five-case closed form for `<v|M_n>` at Hamming weight `h`.
pub fn lemma1_closed_form(n: usize, h: usize) -> f64 {
    let edge = factorial(n - 1) * FRAC_1_SQRT_2.powi(n as i32 - 2);
    if h == 1 || h == n - 1 {
        edge
    } else {
        0.0
    }
}

/// Normalization `1 / [sqrt(2n) (n-1)! (1/sqrt 2)^(n-2)]` taking `M_n` to `W̃_n`.
pub fn lemma1_normalization(n: usize) -> f64 {
    1.0 / ((2.0 * n as f64).sqrt() * factorial(n - 1) * FRAC_1_SQRT_2.powi(n as i32 - 2))
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Compute `M_n` from `Φ_n` directly and compare it to the closed form,
/// basis vector by basis vector.
pub fn verify_lemma1(n: usize) -> Result<Lemma1Report> {
    if !(3..=MAX_PERMUTATION_SUM).contains(&n) {
        return Err(Error::QubitCount { n, min: 3, max: MAX_PERMUTATION_SUM });
    }
    let roots = roots_rn(n)?;
    let phis = phi_set(n)?;
    let (sum, direct_method) = if n <= 8 {
        (majorana_sum_enumerated(&phis)?, "enumeration")
    } else {
        (majorana_sum(&phis)?, "subset_recursion")
    };
    let amps = sum.amps();
    let root_half = FRAC_1_SQRT_2.powi(n as i32 - 2);

    let mut per_weight = Vec::with_capacity(n + 1);
    for h in 0..=n {
        let direct = amps[(1usize << h) - 1];
        let closed_form = Complex64::new(lemma1_closed_form(n, h), 0.0);
        let symmetric_sum_form = if (1..n).contains(&h) {
            elementary_symmetric(&roots, h - 1)? * (factorial(h) * factorial(n - h) * root_half)
        } else {
            Complex64::new(0.0, 0.0)
        };
        per_weight.push(WeightOverlap {
            h,
            direct,
            closed_form,
            abs_err: (direct - closed_form).norm(),
            symmetric_sum_form,
        });
    }

    let mut max_abs_err_all_basis: f64 = 0.0;
    let mut max_same_weight_spread: f64 = 0.0;
    for (v, a) in amps.iter().enumerate() {
        let h = v.count_ones() as usize;
        max_abs_err_all_basis = max_abs_err_all_basis.max((a - per_weight[h].closed_form).norm());
        max_same_weight_spread = max_same_weight_spread.max((a - per_weight[h].direct).norm());
    }

    let normalization = lemma1_normalization(n);
    let scaled: Vec<Complex64> = amps.iter().map(|a| a * normalization).collect();
    let scaled = PureState::from_parts(n, scaled, true);
    let fidelity_to_wtilde = statekit::fidelity(&statekit::wtilde_equal(n)?, &scaled)?;

    Ok(Lemma1Report {
        n,
        per_weight,
        normalization,
        fidelity_to_wtilde,
        max_abs_err_all_basis,
        max_same_weight_spread,
        direct_method: direct_method.to_string(),
    })
}

// Coefficients below this fraction of the largest are treated as zero when
// reading off roots at 0 and at infinity.
const ZERO_COEFF_REL: f64 = 1e-13;

/// Majorana points of a symmetric state.
///
/// With normalized Dicke coefficients `c_k`, the polynomial
/// `p(z) = sum_k sqrt(C(n,k)) c_k z^k` factors as `prod_j (a0_j + a1_j z)`.
/// A finite root `z` yields the point `∝ -z|0> + |1>`; each unit of degree
/// deficiency is a root at infinity and yields `|0>`. The result is accepted
/// only if the state rebuilt from the points has fidelity above
/// `1 - 10 tol` with the input.
pub fn majorana_extract(state: &PureState, tol: f64) -> Result<Vec<ProjectiveQubit>> {
    let n = state.n_qubits();
    if !(3..=MAX_EXTRACT).contains(&n) {
        return Err(Error::QubitCount { n, min: 3, max: MAX_EXTRACT });
    }
    let dicke = statekit::dicke_decompose(state)?;
    let poly: Vec<Complex64> = dicke
        .coeffs
        .iter()
        .enumerate()
        .map(|(k, &c)| c * binomial(n, k).sqrt())
        .collect();
    let largest = poly.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if largest == 0.0 {
        return Err(Error::ZeroVector);
    }
    let significant = |c: &Complex64| c.norm() > ZERO_COEFF_REL * largest;
    let low = poly.iter().position(significant).expect("nonzero polynomial");
    let high = poly.iter().rposition(significant).expect("nonzero polynomial");

    let required = 1.0 - 10.0 * tol;
    let finite = polyroots::roots(&poly[low..=high])
        .map_err(|_| Error::ReconstructionFailed { fidelity: 0.0, required })?;

    let mut points = Vec::with_capacity(n);
    points.extend(std::iter::repeat_n(ProjectiveQubit::one(), low));
    for z in finite {
        points.push(ProjectiveQubit::new(-z, Complex64::new(1.0, 0.0))?);
    }
    points.extend(std::iter::repeat_n(ProjectiveQubit::zero(), n - high));

    let fidelity = statekit::fidelity(&majorana_state(&points)?, state)?;
    if !(fidelity > required) {
        return Err(Error::ReconstructionFailed { fidelity, required });
    }
    Ok(points)
}

/// Group points by projective equality and return the group sizes in
/// non-increasing order. Grouping is the transitive closure of pairwise
/// equality, so it does not depend on input order.
pub fn degeneracy_config(qubits: &[ProjectiveQubit], tol: f64) -> DegeneracyConfig {
    let n = qubits.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if qubits[i].same_point(&qubits[j], tol) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut sizes = vec![0usize; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        sizes[root] += 1;
    }
    DegeneracyConfig::new(sizes)
}
