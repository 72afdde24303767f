use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use super::square_wave::{square_wave_coeffs, SquareWaveCoeffs, DEFAULT_M};
use super::{frac, NameSource};
use crate::error::{LabError, Result};

/// Agreement required between a quadrature and its half-resolution copy.
pub const QUAD_TOL: f64 = 1e-8;
pub const MAX_QUAD_POINTS: usize = 1 << 22;

const CHUNK: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AcCorrelation {
    pub n: i64,
    pub value: f64,
    /// Truncation bound plus the half-resolution disagreement.
    pub error_bar: f64,
    pub quadrature_diff: f64,
    pub grid: usize,
}

/// `theta(x) = n x + g^(n)(x)` for `g(x) = (delta / 2 pi) sin(2 pi x)`, using
/// `g^(n)(x) = (delta / 2 pi) Im(e^{2 pi i x} S_n)` with
/// `S_n = sum_{j<n} e^{2 pi i j alpha}`.
struct Phase {
    n: f64,
    amp: f64,
    s: Complex64,
}

impl Phase {
    fn theta(&self, x: f64) -> f64 {
        self.n * x + self.amp * (Complex64::cis(2.0 * PI * x) * self.s).im
    }

    fn dtheta(&self, x: f64) -> f64 {
        self.n + 2.0 * PI * self.amp * (Complex64::cis(2.0 * PI * x) * self.s).re
    }

    /// The `x` with `theta(x) - theta(0) = target`, by safeguarded Newton.
    fn invert(&self, target: f64, guess: f64, theta0: f64) -> f64 {
        let slack = 2.0 * self.amp * self.s.norm() / self.n;
        let (mut lo, mut hi) = (target / self.n - slack, target / self.n + slack);
        let mut x = guess.clamp(lo, hi);
        for _ in 0..100 {
            let f = self.theta(x) - theta0 - target;
            if f == 0.0 {
                break;
            }
            if f > 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            let mut next = x - f / self.dtheta(x);
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 1e-16 * (1.0 + x.abs()) || hi - lo <= 1e-16 * (1.0 + x.abs()) {
                x = next;
                break;
            }
            x = next;
        }
        x
    }
}

/// `rho(t_i) = sum_{k<n} 1 / theta'(x(t_i + k))` on `t_i = i / grid`.
fn density_samples(p: &Phase, n: usize, grid: usize, theta0: f64) -> Vec<f64> {
    let mut rho = vec![0.0; grid];
    rho.par_chunks_mut(CHUNK).enumerate().for_each(|(c, out)| {
        let mut warm: Vec<f64> = (0..n)
            .map(|k| (c * CHUNK) as f64 / grid as f64 / p.n + k as f64 / p.n)
            .collect();
        for (o, slot) in out.iter_mut().enumerate() {
            let t = (c * CHUNK + o) as f64 / grid as f64;
            let mut acc = 0.0;
            for (k, w) in warm.iter_mut().enumerate() {
                *w = p.invert(t + k as f64, *w, theta0);
                acc += 1.0 / p.dtheta(*w);
            }
            *slot = acc;
        }
    });
    rho
}

/// `int_0^1 e^{2 pi i m t} rho(t) dt` for `0 <= m < len/2` by the periodic
/// trapezoid rule.
fn fourier_integrals(rho: &[f64]) -> Vec<Complex64> {
    let g = rho.len();
    let mut buf: Vec<Complex64> = rho.iter().map(|&r| Complex64::new(r, 0.0)).collect();
    FftPlanner::new().plan_fft_inverse(g).process(&mut buf);
    buf.truncate(g / 2);
    buf.iter_mut().for_each(|z| *z /= g as f64);
    buf
}

fn check_params(alpha: f64, delta: f64, delta0: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(LabError::arg(format!(
            "alpha must lie in (0, 1), got {alpha}"
        )));
    }
    if !(delta0 > 0.0 && delta0 < 1.0) {
        return Err(LabError::arg(format!(
            "delta0 must lie in (0, 1), got {delta0}"
        )));
    }
    if !(delta >= 0.0 && delta < 1.0 - delta0) {
        return Err(LabError::arg(format!(
            "need 0 <= delta < 1 - delta0 = {}, got delta = {delta}",
            1.0 - delta0
        )));
    }
    Ok(())
}

/// `sigma_F(n)` for the skew product `(x, y) -> (x + alpha, y + x + g(x))`
/// with `g(x) = (delta / 2 pi) sin(2 pi x)` and `F = f(y)` the square wave:
///
/// ```text
/// sigma_F(n) = sum_{|m| <= M, m odd} |f^(m)|^2 int_0^1 e^{2 pi i m (n x + n(n-1) alpha / 2 + g^(n)(x))} dx
/// ```
///
/// The substitution `t = theta(x)` turns every `x`-integral into a Fourier
/// coefficient of one smooth periodic density, so a single FFT serves all `m`.
/// The grid starts at `max(quad_points, 4M + 4)` (rounded up to a power of two)
/// and doubles until it agrees with the half grid to [`QUAD_TOL`].
pub fn rotation_ac_cocycle_correlation(
    alpha: f64,
    delta: f64,
    delta0: f64,
    n: i64,
    m_max: usize,
    quad_points: usize,
) -> Result<AcCorrelation> {
    check_params(alpha, delta, delta0)?;
    if n == 0 {
        return Err(LabError::arg("n must be nonzero"));
    }
    let sw = square_wave_coeffs(m_max)?;
    let na = n.unsigned_abs() as usize;

    let mut s = Complex64::new(0.0, 0.0);
    let mut shift = 0.0;
    for j in 0..na {
        let ja = frac(j as f64 * alpha);
        s += Complex64::cis(2.0 * PI * ja);
        shift = frac(shift + ja);
    }
    let phase = Phase {
        n: na as f64,
        amp: delta / (2.0 * PI),
        s,
    };
    let theta0 = phase.theta(0.0);

    let mut grid = quad_points.max(4 * m_max + 4).next_power_of_two();
    loop {
        if grid > MAX_QUAD_POINTS {
            return Err(LabError::Quadrature(format!(
                "no agreement to {QUAD_TOL} below {MAX_QUAD_POINTS} nodes (n={n})"
            )));
        }
        let rho = density_samples(&phase, na, grid, theta0);
        let fine = fourier_integrals(&rho);
        let half: Vec<f64> = rho.iter().step_by(2).copied().collect();
        let coarse = fourier_integrals(&half);
        let (mut value, mut diff) = (0.0, 0.0);
        for (m, w) in sw.odd_weights() {
            let mu = m as usize;
            let rot = Complex64::cis(2.0 * PI * frac(m as f64 * frac(theta0 + shift)));
            value += 2.0 * w * (rot * fine[mu]).re;
            diff += 2.0 * w * (fine[mu] - coarse[mu]).norm();
        }
        if diff <= QUAD_TOL {
            return Ok(AcCorrelation {
                n,
                value,
                error_bar: sw.truncation_bound() + diff,
                quadrature_diff: diff,
                grid,
            });
        }
        grid *= 2;
    }
}

/// `(sum_{|m| <= M, m odd} |f^(m)|^2 / (2 pi |m|)) Var(g') / (1 - delta0)^2`
/// with `Var(g') = 4 delta`, the constant of the `O(1/|n|)` decay.
pub fn c_analytic(delta: f64, delta0: f64, m_max: usize) -> Result<f64> {
    let sw: SquareWaveCoeffs = square_wave_coeffs(m_max)?;
    let series: f64 = 2.0
        * sw.odd_weights()
            .map(|(m, w)| w / (2.0 * PI * m as f64))
            .sum::<f64>();
    Ok(series * 4.0 * delta / (1.0 - delta0).powi(2))
}

/// Names of the skew product `(x, y) -> (x + alpha, y + x + g(x))` with
/// `P0 = {y in [0, 1/2)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotationCocycleSource {
    alpha: f64,
    delta: f64,
}

impl RotationCocycleSource {
    pub fn new(alpha: f64, delta: f64) -> Result<Self> {
        check_params(alpha, delta, (1.0 - delta) / 2.0)?;
        Ok(RotationCocycleSource { alpha, delta })
    }
}

impl NameSource for RotationCocycleSource {
    fn id(&self) -> String {
        format!("rotation(alpha={},delta={})", self.alpha, self.delta)
    }

    fn fill_name(&self, rng: &mut ChaCha8Rng, name: &mut [bool]) {
        let (mut x, mut y): (f64, f64) = (rng.random(), rng.random());
        let amp = self.delta / (2.0 * PI);
        for b in name.iter_mut() {
            *b = y >= 0.5;
            y = frac(y + x + amp * (2.0 * PI * x).sin());
            x = frac(x + self.alpha);
        }
    }

    fn exact_correlation(&self, n: i64) -> Option<f64> {
        if n == 0 {
            return Some(1.0);
        }
        if self.delta == 0.0 {
            return Some(0.0);
        }
        rotation_ac_cocycle_correlation(
            self.alpha,
            self.delta,
            (1.0 - self.delta) / 2.0,
            n,
            DEFAULT_M,
            0,
        )
        .ok()
        .map(|c| c.value)
    }
}
