//! Stationary Gaussian processes, their orthant laws and Gaussian cocycles.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::measure::{self, FourierTable};
use crate::parallel::{derive_seed, map_blocks, stream_rng};
use crate::sbh::epsilon0;
use crate::systems::square_wave_coeffs;

/// Diagonal jitter tried, in order, when factorizing a Toeplitz covariance.
pub const JITTER_LADDER: [f64; 6] = [0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8];

const ORTHANT_DOMAIN: u64 = 0x0A7A;
const PATH_DOMAIN: u64 = 0x9A7E;

/// Autocovariance `r(n)`, `0 <= n <= N`, of a stationary centred Gaussian
/// process with `r(0) = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianSpec {
    autocov: Vec<f64>,
    psd_checked: bool,
}

impl GaussianSpec {
    /// Validates the table, including positive semidefiniteness.
    pub fn new(autocov: Vec<f64>) -> Result<Self> {
        let t = FourierTable::from_real("gaussian spec", &autocov, 0.0)?;
        Self::from_table(&t)
    }

    /// Uses a real measure table as autocovariance, checking PSD.
    pub fn from_table(t: &FourierTable) -> Result<Self> {
        let autocov = t.real_coeffs().ok_or_else(|| {
            LabError::invariant("real autocovariance", "table has complex coefficients")
        })?;
        measure::check_psd(t)?;
        Ok(GaussianSpec {
            autocov,
            psd_checked: true,
        })
    }

    /// Accepts the table without the PSD check; sampling still fails if the
    /// covariance cannot be factorized.
    pub fn unchecked(autocov: Vec<f64>) -> Result<Self> {
        let t = FourierTable::from_real("gaussian spec", &autocov, 0.0)?;
        Ok(GaussianSpec {
            autocov: t.real_coeffs().expect("built from reals"),
            psd_checked: false,
        })
    }

    pub fn white_noise(n: usize) -> Self {
        let mut autocov = vec![0.0; n + 1];
        autocov[0] = 1.0;
        GaussianSpec {
            autocov,
            psd_checked: true,
        }
    }

    /// `r(n) = rho^|n|`, the AR(1) covariance.
    pub fn geometric(rho: f64, n: usize) -> Result<Self> {
        if !(rho.abs() < 1.0) {
            return Err(LabError::arg(format!("|rho| must be < 1, got {rho}")));
        }
        Ok(GaussianSpec {
            autocov: (0..=n as i32).map(|k| rho.powi(k)).collect(),
            psd_checked: true,
        })
    }

    /// Two-point spec `[1, r]`, enough for lag-1 orthant experiments.
    pub fn lag_one(r: f64) -> Result<Self> {
        if !(r.abs() <= 1.0) {
            return Err(LabError::arg(format!("|r| must be <= 1, got {r}")));
        }
        Ok(GaussianSpec {
            autocov: vec![1.0, r],
            psd_checked: true,
        })
    }

    pub fn half_width(&self) -> usize {
        self.autocov.len() - 1
    }

    pub fn psd_checked(&self) -> bool {
        self.psd_checked
    }

    pub fn autocov(&self) -> &[f64] {
        &self.autocov
    }

    /// `r(n)`, or an error outside the table.
    pub fn r(&self, n: i64) -> Result<f64> {
        self.autocov
            .get(n.unsigned_abs() as usize)
            .copied()
            .ok_or_else(|| {
                LabError::arg(format!(
                    "lag {n} outside the table (N = {})",
                    self.half_width()
                ))
            })
    }

    pub fn to_table(&self) -> FourierTable {
        FourierTable::from_real("gaussian spec", &self.autocov, 0.0)
            .expect("validated on construction")
    }
}

/// `count` paths of length `length`, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PathMatrix {
    pub count: usize,
    pub length: usize,
    pub data: Vec<f64>,
    /// Diagonal jitter that made the factorization succeed.
    pub jitter: f64,
}

impl PathMatrix {
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.length..(i + 1) * self.length]
    }
}

fn toeplitz_factor(spec: &GaussianSpec, length: usize) -> Result<(DMatrix<f64>, f64)> {
    let base = DMatrix::from_fn(length, length, |i, j| spec.autocov[i.abs_diff(j)]);
    for jitter in JITTER_LADDER {
        let mut m = base.clone();
        for i in 0..length {
            m[(i, i)] += jitter;
        }
        if let Some(ch) = m.cholesky() {
            return Ok((ch.unpack(), jitter));
        }
    }
    Err(LabError::Factorization(format!(
        "Toeplitz covariance of order {length} is not positive definite even with jitter {}",
        JITTER_LADDER[JITTER_LADDER.len() - 1]
    )))
}

/// Independent draws of `(X_0, ..., X_{L-1})` by a Cholesky factor of the
/// Toeplitz covariance. Row `i` uses its own stream, so the output does not
/// depend on the worker count.
pub fn sample_path(
    spec: &GaussianSpec,
    length: usize,
    count: usize,
    seed: u64,
) -> Result<PathMatrix> {
    if length == 0 || length > spec.half_width() + 1 {
        return Err(LabError::arg(format!(
            "path length must lie in 1..={}, got {length}",
            spec.half_width() + 1
        )));
    }
    let (l, jitter) = toeplitz_factor(spec, length)?;
    let seed = derive_seed(seed, PATH_DOMAIN);
    let mut data = vec![0.0; count * length];
    data.par_chunks_mut(length)
        .enumerate()
        .for_each(|(i, row)| {
            let mut rng = stream_rng(seed, i as u64);
            let z = DVector::from_fn(length, |_, _| StandardNormal.sample(&mut rng));
            let x = &l * z;
            row.copy_from_slice(x.as_slice());
        });
    Ok(PathMatrix {
        count,
        length,
        data,
        jitter,
    })
}

/// How many independent copies are multiplied coordinatewise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Fold {
    One,
    Two,
    Four,
}

impl Fold {
    pub fn copies(self) -> usize {
        match self {
            Fold::One => 1,
            Fold::Two => 2,
            Fold::Four => 4,
        }
    }

    /// Closed form of `P(Y_0 > 0, Y_n > 0)` for correlation `r`.
    pub fn formula(self, r: f64) -> f64 {
        let a = r.asin();
        match self {
            Fold::One => 0.25 + a / (2.0 * PI),
            Fold::Two => 0.25 + a * a / (PI * PI),
            Fold::Four => 0.25 + 4.0 * a.powi(4) / PI.powi(4),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quadrant {
    PosPos,
    NegNeg,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub estimate: f64,
    pub stderr: f64,
    pub formula_value: f64,
    pub z_score: f64,
    pub samples: u64,
    pub seed: u64,
    pub lag: i64,
    pub correlation: f64,
    pub fold: Fold,
    pub quadrant: Quadrant,
}

impl McReport {
    /// `4 sqrt(p (1 - p) / samples)` with `p` the closed-form value.
    pub fn tolerance(&self) -> f64 {
        4.0 * (self.formula_value * (1.0 - self.formula_value) / self.samples as f64).sqrt()
    }

    pub fn within_tolerance(&self) -> bool {
        (self.estimate - self.formula_value).abs() <= self.tolerance()
    }
}

/// Monte Carlo frequency of `{Y_0 > 0, Y_n > 0}` (or `{< 0, < 0}`), where `Y`
/// is the coordinatewise product of `fold` independent copies of the process.
/// Only the pair `(X_0, X_n)` is drawn, via its 2x2 Cholesky factor.
pub fn orthant_mc(
    spec: &GaussianSpec,
    n: i64,
    fold: Fold,
    quadrant: Quadrant,
    samples: u64,
    seed: u64,
) -> Result<McReport> {
    let r = spec.r(n)?;
    if !(r.abs() < 1.0) {
        return Err(LabError::Domain(format!(
            "degenerate correlation r({n}) = {r}"
        )));
    }
    if samples == 0 {
        return Err(LabError::arg("samples must be positive"));
    }
    let s = (1.0 - r * r).sqrt();
    let stream_seed = derive_seed(seed, ORTHANT_DOMAIN);
    let hits: Vec<u64> = map_blocks(samples as usize, |b, len| {
        let mut rng = stream_rng(stream_seed, b as u64);
        let mut hits = 0u64;
        for _ in 0..len {
            let (mut y0, mut yn) = (1.0f64, 1.0f64);
            for _ in 0..fold.copies() {
                let z0: f64 = StandardNormal.sample(&mut rng);
                let z1: f64 = StandardNormal.sample(&mut rng);
                y0 *= z0;
                yn *= r * z0 + s * z1;
            }
            let hit = match quadrant {
                Quadrant::PosPos => y0 > 0.0 && yn > 0.0,
                Quadrant::NegNeg => y0 < 0.0 && yn < 0.0,
            };
            hits += hit as u64;
        }
        hits
    });
    let total: u64 = hits.iter().sum();
    let estimate = total as f64 / samples as f64;
    let stderr = (estimate * (1.0 - estimate) / samples as f64).sqrt();
    let formula_value = fold.formula(r);
    let z_score = if stderr > 0.0 {
        (estimate - formula_value) / stderr
    } else {
        0.0
    };
    Ok(McReport {
        estimate,
        stderr,
        formula_value,
        z_score,
        samples,
        seed,
        lag: n,
        correlation: r,
        fold,
        quadrant,
    })
}

/// `mu{X_0 > 0, X_n > 0}` against `1/4 + arcsin(r(n)) / (2 pi)`.
pub fn sign_orthant_mc(spec: &GaussianSpec, n: i64, samples: u64, seed: u64) -> Result<McReport> {
    orthant_mc(spec, n, Fold::One, Quadrant::PosPos, samples, seed)
}

/// Twofold or fourfold product version of [`sign_orthant_mc`].
pub fn product_orthant_mc(
    spec: &GaussianSpec,
    n: i64,
    fold: Fold,
    samples: u64,
    seed: u64,
) -> Result<McReport> {
    if fold == Fold::One {
        return Err(LabError::arg("product orthant needs fold two or four"));
    }
    orthant_mc(spec, n, fold, Quadrant::PosPos, samples, seed)
}

/// `Var(X_0 + ... + X_{n-1}) = sum_{|k| < n} (n - |k|) r(k)`.
pub fn cocycle_variance(spec: &GaussianSpec, n: usize) -> Result<f64> {
    if n == 0 || n > spec.half_width() {
        return Err(LabError::arg(format!(
            "n must lie in 1..={}, got {n}",
            spec.half_width()
        )));
    }
    let off: f64 = (1..n).map(|k| (n - k) as f64 * spec.autocov[k]).sum();
    Ok(n as f64 * spec.autocov[0] + 2.0 * off)
}

/// Correlation table of the sign partition of the circle fibre under the
/// Gaussian-cocycle skew product:
///
/// ```text
/// c(n) = sum_{|m| <= M, m odd} |f^(m)|^2 exp(-2 pi^2 m^2 Var(X_0^(n)))
/// ```
///
/// With `r >= 0` the variance is at least `n`, which bounds the tail beyond
/// `n_max` by `2 exp(-2 pi^2 (n_max + 1)) / (1 - exp(-2 pi^2))`.
pub fn cocycle_correlation_table(
    spec: &GaussianSpec,
    m_max: usize,
    n_max: usize,
) -> Result<FourierTable> {
    if let Some((k, r)) = spec.autocov.iter().enumerate().find(|(_, r)| **r < 0.0) {
        return Err(LabError::invariant(
            "nonnegative autocovariance",
            format!("r({k}) = {r} < 0"),
        ));
    }
    let sw = square_wave_coeffs(m_max)?;
    let mut coeffs = vec![1.0];
    for n in 1..=n_max {
        let v = cocycle_variance(spec, n)?;
        let c: f64 = 2.0
            * sw.odd_weights()
                .map(|(m, w)| w * (-2.0 * PI * PI * (m * m) as f64 * v).exp())
                .take_while(|t| *t > 0.0)
                .sum::<f64>();
        coeffs.push(c);
    }
    let q = (-2.0 * PI * PI).exp();
    let tail = 2.0 * (-2.0 * PI * PI * (n_max + 1) as f64).exp() / (1.0 - q);
    FourierTable::from_real(format!("gaussian cocycle M={m_max}"), &coeffs, tail)
}

/// Half width of the template used by [`gnoat_constant_check`].
pub const GNOAT_TEMPLATE_N: usize = 10_000;
/// Terms summed explicitly in the constant chain.
pub const GNOAT_TERMS: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantCheckReport {
    pub epsilon0: f64,
    pub c: f64,
    /// Upper end `c / ln 2` of the range on which `|arcsin x| <= 2|x|` is used.
    pub arcsin_range: f64,
    /// `2 - arcsin(x)/x` at the range end; positive means the bound holds on
    /// the whole range (the ratio increases in `x`).
    pub arcsin_margin: f64,
    /// `(32/pi^4) sum_{k>=1} arcsin^4(c/sqrt k)`, truncated, plus tail bound.
    pub arcsine_sum: f64,
    pub arcsine_sum_tail: f64,
    /// `(512 c^4 / pi^4) zeta(2)`.
    pub power_sum: f64,
    /// `power_sum - arcsine_sum`.
    pub first_margin: f64,
    /// `1 + eps0 - power_sum`.
    pub chain_margin: f64,
    pub chain_holds: bool,
    /// `l1_tail` of the fourfold arcsine transform of the `c / sqrt|n|` template.
    pub template_l1_tail: f64,
    /// `eps0 - template_l1_tail`: margin of the l1 certificate.
    pub template_margin: f64,
    pub template_verdict: crate::sbh::Verdict,
}

/// `pi^{1/2} ((1 + eps0) / 86)^{1/4}`.
pub fn gnoat_constant() -> f64 {
    PI.sqrt() * ((1.0 + epsilon0()) / 86.0).powf(0.25)
}

/// Checks the constant chain
/// `(32/pi^4) sum arcsin^4(c/sqrt k) <= (512 c^4 / pi^4) zeta(2) <= 1 + eps0`.
pub fn gnoat_constant_check_at(c: f64) -> Result<ConstantCheckReport> {
    if !(0.0..=1.0).contains(&c) {
        return Err(LabError::arg(format!("c must lie in [0, 1], got {c}")));
    }
    let eps0 = epsilon0();
    let arcsin_range = c / std::f64::consts::LN_2;
    let arcsin_margin = if arcsin_range == 0.0 {
        1.0
    } else if arcsin_range <= 1.0 {
        2.0 - arcsin_range.asin() / arcsin_range
    } else {
        f64::NEG_INFINITY
    };
    let k4 = 32.0 / PI.powi(4);
    let terms: Vec<f64> = (1..=GNOAT_TERMS)
        .into_par_iter()
        .map(|k| k4 * (c / (k as f64).sqrt()).asin().powi(4))
        .collect();
    let explicit = crate::parallel::compensated_sum(terms);
    // arcsin x <= 2x on the range gives arcsin^4(c/sqrt k) <= 16 c^4 / k^2
    let arcsine_sum_tail = k4 * 16.0 * c.powi(4) / GNOAT_TERMS as f64;
    let arcsine_sum = explicit + arcsine_sum_tail;
    let power_sum = 512.0 * c.powi(4) / PI.powi(4) * (PI * PI / 6.0);

    let template = measure::sqrt_template(c, GNOAT_TEMPLATE_N)?;
    let transformed = measure::arcsine_fourth_transform(&template)?;
    let tail = 2.0 * (16.0 / PI.powi(4)) * (2.0 * c).powi(4) / GNOAT_TEMPLATE_N as f64;
    let transformed = FourierTable::new(
        format!("arcsine4(sqrt-template c={c})"),
        transformed.nonnegative().to_vec(),
        tail,
    )?;
    let template_l1_tail = measure::l1_tail(&transformed);
    let params = crate::sbh::CertifyParams {
        exhaustive: None,
        heuristic: None,
        grid_size: None,
    };
    let verdict = crate::sbh::certify(&transformed, &params)?.verdict;

    Ok(ConstantCheckReport {
        epsilon0: eps0,
        c,
        arcsin_range,
        arcsin_margin,
        arcsine_sum,
        arcsine_sum_tail,
        power_sum,
        first_margin: power_sum - arcsine_sum,
        chain_margin: 1.0 + eps0 - power_sum,
        chain_holds: arcsin_margin >= 0.0 && arcsine_sum <= power_sum && power_sum <= 1.0 + eps0,
        template_l1_tail,
        template_margin: eps0 - template_l1_tail,
        template_verdict: verdict,
    })
}

/// [`gnoat_constant_check_at`] with `c` at its largest admissible value.
pub fn gnoat_constant_check() -> Result<ConstantCheckReport> {
    gnoat_constant_check_at(gnoat_constant())
}
