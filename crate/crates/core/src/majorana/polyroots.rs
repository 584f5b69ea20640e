//! Complex polynomial roots via companion-matrix eigenvalues.
//!
//! The companion matrix is already upper Hessenberg, so the eigenvalues come
//! from a single-shift complex QR iteration with Wilkinson shifts. Periodic
//! exceptional shifts break the stagnation that unitary companions such as
//! that of `z^m + 1` otherwise cause. Each root is then polished by Newton
//! steps on the original coefficients.

use num_complex::Complex64;

const MAX_SWEEPS_PER_ROOT: usize = 60;
const NEWTON_STEPS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoConvergence;

/// Roots of `sum_k coeffs[k] z^k`. The leading coefficient must be nonzero.
pub fn roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>, NoConvergence> {
    let degree = coeffs.len().saturating_sub(1);
    if degree == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[degree];
    assert!(lead.norm() > 0.0, "leading coefficient must be nonzero");
    if degree == 1 {
        return Ok(vec![-coeffs[0] / lead]);
    }

    let mut h = vec![vec![Complex64::new(0.0, 0.0); degree]; degree];
    for i in 1..degree {
        h[i][i - 1] = Complex64::new(1.0, 0.0);
    }
    for (i, row) in h.iter_mut().enumerate() {
        row[degree - 1] = -coeffs[i] / lead;
    }
    let mut found = hessenberg_eigenvalues(h)?;
    for z in &mut found {
        *z = polish(coeffs, *z);
    }
    Ok(found)
}

pub(crate) fn eval(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let (mut p, _) = eval(coeffs, z);
    for _ in 0..NEWTON_STEPS {
        let (_, dp) = eval(coeffs, z);
        if dp.norm() == 0.0 || p.norm() == 0.0 {
            break;
        }
        let candidate = z - p / dp;
        let (pc, _) = eval(coeffs, candidate);
        if !(pc.norm() < p.norm()) {
            break;
        }
        z = candidate;
        p = pc;
    }
    z
}

fn hessenberg_eigenvalues(mut h: Vec<Vec<Complex64>>) -> Result<Vec<Complex64>, NoConvergence> {
    let n = h.len();
    let mut eig = vec![Complex64::new(0.0, 0.0); n];
    let mut hi = n - 1;
    let mut sweeps = 0usize;

    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = h[lo][lo - 1].norm();
            let scale = h[lo - 1][lo - 1].norm() + h[lo][lo].norm();
            if sub <= f64::EPSILON * scale || sub < f64::MIN_POSITIVE {
                h[lo][lo - 1] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[hi][hi];
            hi -= 1;
            sweeps = 0;
            continue;
        }

        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_ROOT {
            return Err(NoConvergence);
        }
        let shift = if sweeps % 10 == 0 {
            let below = if hi >= lo + 2 { h[hi - 1][hi - 2].norm() } else { 0.0 };
            let s = h[hi][hi - 1].norm() + below;
            h[hi][hi] + Complex64::new(0.75 * s, 0.4375 * s)
        } else {
            wilkinson(h[hi - 1][hi - 1], h[hi - 1][hi], h[hi][hi - 1], h[hi][hi])
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    eig[0] = h[0][0];
    Ok(eig)
}

// Eigenvalue of the trailing 2x2 block closest to its bottom-right entry.
fn wilkinson(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powu(2) + b * c;
    let root = disc.sqrt();
    let l1 = half_tr + root;
    let l2 = half_tr - root;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

// One explicit shifted QR step H - sI = QR, H <- RQ + sI on rows/cols lo..=hi.
fn qr_sweep(h: &mut [Vec<Complex64>], lo: usize, hi: usize, shift: Complex64) {
    for k in lo..=hi {
        h[k][k] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let a = h[k][k];
        let b = h[k + 1][k];
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (a / r, b / r)
        };
        for j in k..=hi {
            let x = h[k][j];
            let y = h[k + 1][j];
            h[k][j] = c.conj() * x + s.conj() * y;
            h[k + 1][j] = -s * x + c * y;
        }
        rotations.push((c, s));
    }
    for (offset, (c, s)) in rotations.into_iter().enumerate() {
        let k = lo + offset;
        for row in h.iter_mut().take((k + 2).min(hi + 1)).skip(lo) {
            let x = row[k];
            let y = row[k + 1];
            row[k] = x * c + y * s;
            row[k + 1] = -x * s.conj() + y * c.conj();
        }
    }
    for k in lo..=hi {
        h[k][k] += shift;
    }
}
