use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::square_wave::{square_wave_coeffs, DEFAULT_M};
use super::{frac, NameSource};
use crate::error::{LabError, Result};

const RATIONAL_TOL: f64 = 1e-12;
const MAX_DENOMINATOR: u32 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NilCorrelation {
    pub n: i64,
    pub value: Complex64,
    pub error_bar: f64,
    /// Lebesgue measure of `{y : sum_j [{y + j beta} + beta] = 0}`; when it is
    /// zero the correlation vanishes exactly.
    pub support: f64,
}

fn nearly_rational(v: f64) -> Option<(i64, u32)> {
    (1..=MAX_DENOMINATOR).find_map(|q| {
        let p = (v * q as f64).round();
        ((v - p / q as f64).abs() <= RATIONAL_TOL).then_some((p as i64, q))
    })
}

fn check_params(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(LabError::arg(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if !(beta > 0.0 && beta < 1.0) {
        return Err(LabError::arg(format!(
            "beta must lie in (0, 1), got {beta}"
        )));
    }
    if let Some((p, q)) = nearly_rational(alpha) {
        return Err(LabError::arg(format!(
            "alpha = {alpha} is within {RATIONAL_TOL} of {p}/{q}"
        )));
    }
    Ok(())
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `(length, midpoint, sum_j {midpoint + j beta})` for every maximal interval
/// of `[0, 1)` on which `{y + j beta} < 1 - beta` for all `j < n`.
fn support_pieces(beta: f64, n: usize) -> Vec<(f64, f64, f64)> {
    let mut cuts = vec![0.0, 1.0];
    for j in 0..n {
        let jb = frac(j as f64 * beta);
        cuts.push(frac(-jb));
        cuts.push(frac(1.0 - beta - jb));
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    cuts.windows(2)
        .filter(|w| w[1] > w[0])
        .filter_map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            let mut sum = 0.0;
            for j in 0..n {
                let v = frac(mid + frac(j as f64 * beta));
                if v >= 1.0 - beta {
                    return None;
                }
                sum += v;
            }
            Some((w[1] - w[0], mid, sum))
        })
        .collect()
}

/// `sigma_F(n)` for the nil-rotation written as the skew product
/// `(x, y, z) -> (x + alpha, y + beta, z + phi(x, y))` with
/// `phi(x, y) = alpha {y} - ({x} + alpha) [{y} + beta] + gamma` and `F = f(z)`.
///
/// The `x`-integral kills every `y` at which some `[{y + j beta} + beta]` is
/// `1`; on the remaining set the phase `alpha sum_j {y + j beta}` is linear
/// between the breakpoints `{-j beta}` and `{1 - beta - j beta}`, so each
/// piece integrates in closed form.
pub fn nil_rotation_correlation(
    alpha: f64,
    beta: f64,
    gamma: f64,
    n: i64,
    m_max: usize,
) -> Result<NilCorrelation> {
    check_params(alpha, beta)?;
    let sw = square_wave_coeffs(m_max)?;
    if n == 0 {
        return Ok(NilCorrelation {
            n,
            value: Complex64::new(1.0, 0.0),
            error_bar: 0.0,
            support: 1.0,
        });
    }
    let na = n.unsigned_abs() as usize;
    let pieces = support_pieces(beta, na);
    let support: f64 = pieces.iter().map(|p| p.0).sum();
    if pieces.is_empty() {
        return Ok(NilCorrelation {
            n,
            value: Complex64::new(0.0, 0.0),
            error_bar: 0.0,
            support: 0.0,
        });
    }
    let shift = frac(na as f64 * gamma);
    let mut re = 0.0;
    for (m, w) in sw.odd_weights() {
        let mf = m as f64;
        let piece_sum: f64 = pieces
            .iter()
            .map(|&(len, _, sum)| {
                let arg = 2.0 * PI * frac(mf * frac(alpha * sum + shift));
                len * sinc(PI * mf * alpha * na as f64 * len) * arg.cos()
            })
            .sum();
        re += 2.0 * w * piece_sum;
    }
    Ok(NilCorrelation {
        n,
        value: Complex64::new(re, 0.0),
        error_bar: sw.truncation_bound() * support,
        support,
    })
}

/// `sum_{|m| <= M, m odd} |f^(m)|^2 e^{2 pi i m gamma} (e^{2 pi i m alpha (1 - beta)} - 1) / (2 pi i m alpha)`,
/// the closed form of the `n = 1` correlation.
pub fn nil_closed_form_n1(alpha: f64, beta: f64, gamma: f64, m_max: usize) -> Result<Complex64> {
    check_params(alpha, beta)?;
    let sw = square_wave_coeffs(m_max)?;
    let mut total = Complex64::new(0.0, 0.0);
    for (m, w) in sw.odd_weights() {
        for m in [m, -m] {
            let mf = m as f64;
            let num = Complex64::cis(2.0 * PI * frac(mf * alpha * (1.0 - beta))) - 1.0;
            let den = Complex64::new(0.0, 2.0 * PI * mf * alpha);
            total += w * Complex64::cis(2.0 * PI * frac(mf * gamma)) * num / den;
        }
    }
    Ok(total)
}

/// Names of the nil-rotation with `P0 = {z in [0, 1/2)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NilSource {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl NilSource {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        check_params(alpha, beta)?;
        Ok(NilSource { alpha, beta, gamma })
    }
}

impl NameSource for NilSource {
    fn id(&self) -> String {
        format!(
            "nil(alpha={},beta={},gamma={})",
            self.alpha, self.beta, self.gamma
        )
    }

    fn fill_name(&self, rng: &mut ChaCha8Rng, name: &mut [bool]) {
        let (mut x, mut y, mut z): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
        for b in name.iter_mut() {
            *b = z >= 0.5;
            let carry = (y + self.beta).floor();
            z = frac(z + self.alpha * y - (x + self.alpha) * carry + self.gamma);
            x = frac(x + self.alpha);
            y = frac(y + self.beta);
        }
    }

    fn exact_correlation(&self, n: i64) -> Option<f64> {
        nil_rotation_correlation(self.alpha, self.beta, self.gamma, n, DEFAULT_M)
            .ok()
            .map(|c| c.value.re)
    }
}
