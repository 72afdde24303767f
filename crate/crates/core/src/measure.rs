//! Probability measures on the circle, represented by truncated tables of
//! Fourier coefficients.
//!
//! A [`FourierTable`] stores `c(n)` for `0 <= n <= N`; negative frequencies are
//! implied by Hermitian symmetry `c(-n) = conj(c(n))`. The mass of the
//! coefficients beyond `N` is carried explicitly as `tail_bound`, an upper
//! bound on `sum_{|n| > N} |c(n)|`, and every bound derived from a table adds it.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Slack allowed on the structural invariants `c(0) = 1` and `|c(n)| <= 1`.
pub const COEFF_TOL: f64 = 1e-12;

/// Minimal Toeplitz eigenvalue accepted as positive semidefinite.
pub const PSD_TOL: f64 = -1e-8;

/// Largest Toeplitz order checked by a dense eigensolver when validating input
/// files; larger tables are validated through a certified density lower bound.
pub const DENSE_PSD_LIMIT: usize = 512;

#[derive(Clone, Debug, PartialEq)]
pub struct FourierTable {
    label: String,
    coeffs: Vec<Complex64>,
    tail_bound: f64,
}

impl FourierTable {
    /// Builds a table from the nonnegative-frequency coefficients `c(0..=N)`.
    ///
    /// Checks `c(0) = 1`, `|c(n)| <= 1` and that `tail_bound` is a finite
    /// nonnegative number. Positive semidefiniteness is *not* checked here; see
    /// [`is_positive_definite`].
    pub fn new(label: impl Into<String>, coeffs: Vec<Complex64>, tail_bound: f64) -> Result<Self> {
        let Some(c0) = coeffs.first() else {
            return Err(LabError::invariant("c(0) = 1", "table has no coefficients"));
        };
        if (c0.re - 1.0).abs() > COEFF_TOL || c0.im.abs() > COEFF_TOL {
            return Err(LabError::invariant("c(0) = 1", format!("c(0) = {c0}")));
        }
        for (n, c) in coeffs.iter().enumerate() {
            if !c.re.is_finite() || !c.im.is_finite() {
                return Err(LabError::invariant(
                    "|c(n)| <= 1",
                    format!("c({n}) is not finite"),
                ));
            }
            if c.norm() > 1.0 + COEFF_TOL {
                return Err(LabError::invariant(
                    "|c(n)| <= 1",
                    format!("|c({n})| = {}", c.norm()),
                ));
            }
        }
        if !(tail_bound.is_finite() && tail_bound >= 0.0) {
            return Err(LabError::invariant(
                "tail_bound >= 0",
                format!("tail_bound = {tail_bound}"),
            ));
        }
        let mut coeffs = coeffs;
        coeffs[0] = Complex64::new(1.0, 0.0);
        Ok(FourierTable {
            label: label.into(),
            coeffs,
            tail_bound,
        })
    }

    pub fn from_real(label: impl Into<String>, coeffs: &[f64], tail_bound: f64) -> Result<Self> {
        Self::new(
            label,
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
            tail_bound,
        )
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn half_width(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    /// Coefficients `c(0..=N)`.
    pub fn nonnegative(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `c(n)` for any integer `n`; zero outside the stored range.
    pub fn coeff(&self, n: i64) -> Complex64 {
        self.get(n).unwrap_or_default()
    }

    /// `c(n)` if `|n| <= N`.
    pub fn get(&self, n: i64) -> Option<Complex64> {
        let c = *self.coeffs.get(n.unsigned_abs() as usize)?;
        Some(if n < 0 { c.conj() } else { c })
    }

    /// Real parts of `c(0..=N)`, or `None` if some imaginary part exceeds
    /// [`COEFF_TOL`].
    pub fn real_coeffs(&self) -> Option<Vec<f64>> {
        self.coeffs
            .iter()
            .map(|c| (c.im.abs() <= COEFF_TOL).then_some(c.re))
            .collect()
    }
}

/// Lebesgue measure: `c(0) = 1`, all other coefficients zero.
pub fn lebesgue_table(n: usize) -> FourierTable {
    let mut coeffs = vec![Complex64::default(); n + 1];
    coeffs[0] = Complex64::new(1.0, 0.0);
    FourierTable {
        label: "lebesgue".into(),
        coeffs,
        tail_bound: 0.0,
    }
}

/// Dirac mass at `1`: `c(n) = 1` for every `n`.
///
/// The true tail is not summable and is left at 0; use the table as a
/// non-Rajchman witness, not as input to a certificate.
pub fn dirac_table(n: usize) -> FourierTable {
    FourierTable {
        label: "dirac".into(),
        coeffs: vec![Complex64::new(1.0, 0.0); n + 1],
        tail_bound: 0.0,
    }
}

/// Poisson-kernel measure `c(n) = rho^|n|`, `|rho| < 1`, with exact tail.
pub fn geometric_table(rho: f64, n: usize) -> Result<FourierTable> {
    if !(rho.abs() < 1.0) {
        return Err(LabError::arg(format!(
            "geometric ratio must satisfy |rho| < 1, got {rho}"
        )));
    }
    let coeffs: Vec<f64> = (0..=n).map(|k| rho.powi(k as i32)).collect();
    let a = rho.abs();
    let tail = 2.0 * a.powi(n as i32 + 1) / (1.0 - a);
    FourierTable::from_real(format!("geometric rho={rho}"), &coeffs, tail)
}

/// Coefficients of the measure seen by the `m`-th power of the system:
/// `c_m(n) = c(mn)`, half width `floor(N/m)`.
///
/// Every coefficient dropped by the truncation is a coefficient of the
/// original tail, so the tail bound carries over unchanged.
pub fn power_subsample(t: &FourierTable, m: usize) -> Result<FourierTable> {
    if m == 0 {
        return Err(LabError::arg("subsampling factor m must be >= 1"));
    }
    let half = t.half_width() / m;
    let coeffs = (0..=half).map(|n| t.coeffs[n * m]).collect();
    Ok(FourierTable {
        label: format!("{} | power m={m}", t.label),
        coeffs,
        tail_bound: t.tail_bound,
    })
}

/// `sum_{0 < |n| <= N} |c(n)| + tail_bound`.
pub fn l1_tail(t: &FourierTable) -> f64 {
    2.0 * t.coeffs[1..].iter().map(|c| c.norm()).sum::<f64>() + t.tail_bound
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityBoundReport {
    pub grid_size: usize,
    pub sup_estimate: f64,
    /// Grid point where the maximum was attained, as a fraction of the circle.
    pub argmax_theta: f64,
    /// `D / (2 grid_size)` with `D = 2 pi sum |n||c(n)|` (Bernstein).
    pub grid_margin: f64,
    pub certified_upper: f64,
}

fn check_grid(t: &FourierTable, grid_size: usize) -> Result<()> {
    let need = 4 * t.half_width() + 4;
    if grid_size < need {
        return Err(LabError::arg(format!(
            "density grid of {grid_size} points is too coarse for half width {} (need >= {need})",
            t.half_width()
        )));
    }
    Ok(())
}

/// Truncated density `d(theta) = sum_{|n|<=N} c(n) e^{2 pi i n theta}` at
/// `theta = j / grid_size`.
pub fn density_on_grid(t: &FourierTable, grid_size: usize) -> Result<Vec<f64>> {
    check_grid(t, grid_size)?;
    let mut buf = vec![Complex64::default(); grid_size];
    buf[0] = t.coeffs[0];
    for (n, &c) in t.coeffs.iter().enumerate().skip(1) {
        buf[n] = c;
        buf[grid_size - n] = c.conj();
    }
    FftPlanner::new()
        .plan_fft_inverse(grid_size)
        .process(&mut buf);
    Ok(buf.into_iter().map(|z| z.re).collect())
}

fn bernstein_margin(t: &FourierTable, grid_size: usize) -> f64 {
    let weighted: f64 = t
        .coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, c)| n as f64 * c.norm())
        .sum();
    2.0 * PI * (2.0 * weighted) / (2.0 * grid_size as f64)
}

/// Certified upper bound on the density of the measure.
pub fn density_sup(t: &FourierTable, grid_size: usize) -> Result<DensityBoundReport> {
    let values = density_on_grid(t, grid_size)?;
    let (j, sup) =
        values
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (j, v)| {
                if v > best.1 {
                    (j, v)
                } else {
                    best
                }
            });
    let grid_margin = bernstein_margin(t, grid_size);
    Ok(DensityBoundReport {
        grid_size,
        sup_estimate: sup,
        argmax_theta: j as f64 / grid_size as f64,
        grid_margin,
        certified_upper: sup + t.tail_bound + grid_margin,
    })
}

/// Certified lower bound on the density: grid minimum minus tail and grid
/// margins. A nonnegative value certifies that every Toeplitz section of the
/// table is positive semidefinite.
pub fn density_inf(t: &FourierTable, grid_size: usize) -> Result<f64> {
    let values = density_on_grid(t, grid_size)?;
    let inf = values.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(inf - t.tail_bound - bernstein_margin(t, grid_size))
}

/// Smallest admissible power-of-two grid for [`density_sup`].
pub fn default_grid(t: &FourierTable) -> usize {
    (4 * t.half_width() + 4).next_power_of_two().max(1024)
}

fn map_real_offdiagonal(
    t: &FourierTable,
    what: &str,
    f: impl Fn(f64) -> f64,
) -> Result<FourierTable> {
    let mut coeffs = Vec::with_capacity(t.coeffs.len());
    coeffs.push(Complex64::new(1.0, 0.0));
    for (n, c) in t.coeffs.iter().enumerate().skip(1) {
        if c.im.abs() > COEFF_TOL {
            return Err(LabError::Domain(format!(
                "{what} needs real coefficients, c({n}) = {c}"
            )));
        }
        if !(c.re.abs() < 1.0) {
            return Err(LabError::Domain(format!(
                "{what} needs |c(n)| < 1 off the origin, c({n}) = {}",
                c.re
            )));
        }
        coeffs.push(Complex64::new(f(c.re), 0.0));
    }
    Ok(FourierTable {
        label: format!("{what}({})", t.label),
        coeffs,
        tail_bound: t.tail_bound,
    })
}

/// Correlation table of the sign process of a Gaussian process with
/// autocovariance `t`: `(2/pi) arcsin c(n)`.
///
/// `|(2/pi) arcsin x| <= |x|`, so the tail bound is inherited.
pub fn arcsine_transform(t: &FourierTable) -> Result<FourierTable> {
    map_real_offdiagonal(t, "arcsine", |x| x.asin() / FRAC_PI_2)
}

/// Correlation table of the sign of the fourfold product process:
/// `(16/pi^4) arcsin^4 c(n)`.
pub fn arcsine_fourth_transform(t: &FourierTable) -> Result<FourierTable> {
    map_real_offdiagonal(t, "arcsine4", |x| (x.asin() / FRAC_PI_2).powi(4))
}

/// Riesz product `prod_j (1 + a_j cos(2 pi lambda_j x))` for lacunary
/// frequencies `lambda_{j+1} >= 3 lambda_j`.
///
/// Each `n` has at most one representation `n = sum eps_j lambda_j` with
/// `eps_j in {-1, 0, 1}`, and then `c(n) = prod_j (a_j / 2)^{|eps_j|}`. The
/// total coefficient mass is `prod_j (1 + |a_j|)`, which makes the tail exact.
pub fn riesz_product(amplitudes: &[f64], frequencies: &[u64], n: usize) -> Result<FourierTable> {
    if amplitudes.len() != frequencies.len() {
        return Err(LabError::arg(format!(
            "{} amplitudes but {} frequencies",
            amplitudes.len(),
            frequencies.len()
        )));
    }
    if let Some(a) = amplitudes.iter().find(|a| !(a.abs() <= 1.0)) {
        return Err(LabError::arg(format!("amplitude {a} outside [-1, 1]")));
    }
    if frequencies.first() == Some(&0) {
        return Err(LabError::arg("frequencies must be positive"));
    }
    for w in frequencies.windows(2) {
        if w[1] < w[0].saturating_mul(3) {
            return Err(LabError::arg(format!(
                "lacunarity violated: {} < 3 * {}",
                w[1], w[0]
            )));
        }
    }

    let mut coeffs = vec![0.0f64; n + 1];
    // below[j] = sum of frequencies strictly below factor j
    let mut below = Vec::with_capacity(frequencies.len() + 1);
    let mut acc = 0i128;
    for &f in frequencies {
        below.push(acc);
        acc += f as i128;
    }

    fn walk(
        j: usize,
        sum: i128,
        weight: f64,
        amps: &[f64],
        freqs: &[u64],
        below: &[i128],
        coeffs: &mut [f64],
    ) {
        let limit = (coeffs.len() - 1) as i128;
        if j == 0 {
            if (0..=limit).contains(&sum) {
                coeffs[sum as usize] = weight;
            }
            return;
        }
        let k = j - 1;
        for eps in [-1i128, 0, 1] {
            let next = sum + eps * freqs[k] as i128;
            if next.abs() - below[k] > limit {
                continue;
            }
            let w = if eps == 0 {
                weight
            } else {
                weight * amps[k] / 2.0
            };
            walk(k, next, w, amps, freqs, below, coeffs);
        }
    }
    walk(
        frequencies.len(),
        0,
        1.0,
        amplitudes,
        frequencies,
        &below,
        &mut coeffs,
    );

    let total: f64 = amplitudes.iter().map(|a| 1.0 + a.abs()).product();
    let kept = coeffs[0] + 2.0 * coeffs[1..].iter().map(|c| c.abs()).sum::<f64>();
    let tail = (total - kept).max(0.0);
    FourierTable::from_real(
        format!("riesz a={amplitudes:?} lambda={frequencies:?}"),
        &coeffs,
        tail,
    )
}

/// Symmetric coefficient template `c(n) = c / sqrt|n|`.
///
/// This is a template, not a certified measure: its tail is not summable and
/// is recorded as 0, and positive definiteness must be checked separately.
pub fn sqrt_template(c: f64, n: usize) -> Result<FourierTable> {
    if !(0.0..=1.0).contains(&c) {
        return Err(LabError::arg(format!(
            "template constant must lie in [0, 1], got {c}"
        )));
    }
    let coeffs: Vec<f64> = (0..=n)
        .map(|k| if k == 0 { 1.0 } else { c / (k as f64).sqrt() })
        .collect();
    FourierTable::from_real(
        format!("sqrt-template c={c} (coefficient template, not certified PSD)"),
        &coeffs,
        0.0,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsdCheck {
    pub passed: bool,
    pub min_eigenvalue: f64,
}

/// Smallest eigenvalue of the `k x k` Toeplitz matrix `[c(i - j)]`.
pub fn is_positive_definite(t: &FourierTable, k: usize) -> Result<PsdCheck> {
    if k == 0 || k > t.half_width() + 1 {
        return Err(LabError::arg(format!(
            "Toeplitz order {k} outside 1..={}",
            t.half_width() + 1
        )));
    }
    let min_eigenvalue = match t.real_coeffs() {
        Some(re) => {
            let m = DMatrix::from_fn(k, k, |i, j| re[i.abs_diff(j)]);
            m.symmetric_eigenvalues().min()
        }
        None => {
            let m = DMatrix::from_fn(k, k, |i, j| t.coeff(i as i64 - j as i64));
            m.symmetric_eigenvalues().min()
        }
    };
    Ok(PsdCheck {
        passed: min_eigenvalue >= PSD_TOL,
        min_eigenvalue,
    })
}

/// Whether a file reader should insist on positive semidefiniteness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsdPolicy {
    Enforce,
    Skip,
}

/// On-disk measure format. Only `n >= 0` is listed.
#[derive(Debug, Serialize, Deserialize)]
struct MeasureFile {
    label: String,
    half_width: usize,
    tail_bound: f64,
    coeffs: Vec<(i64, f64, f64)>,
}

pub fn to_json(t: &FourierTable) -> String {
    let file = MeasureFile {
        label: t.label.clone(),
        half_width: t.half_width(),
        tail_bound: t.tail_bound,
        coeffs: t
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| (n as i64, c.re, c.im))
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("measure serialization cannot fail")
}

pub fn from_json(text: &str, policy: PsdPolicy) -> Result<FourierTable> {
    let file: MeasureFile = serde_json::from_str(text)?;
    let mut coeffs = vec![Complex64::default(); file.half_width + 1];
    let mut last: Option<i64> = None;
    let mut saw_origin = false;
    for &(n, re, im) in &file.coeffs {
        if last.is_some_and(|l| n <= l) {
            return Err(LabError::invariant(
                "coefficients sorted by n",
                format!("n = {n} follows n = {}", last.unwrap_or_default()),
            ));
        }
        if n < 0 {
            return Err(LabError::invariant(
                "Hermitian symmetry (only n >= 0 listed)",
                format!("negative frequency {n} in file"),
            ));
        }
        if n as usize > file.half_width {
            return Err(LabError::invariant(
                "|n| <= half_width",
                format!("n = {n} exceeds half width {}", file.half_width),
            ));
        }
        if n == 0 {
            saw_origin = true;
            if im.abs() > COEFF_TOL {
                return Err(LabError::invariant(
                    "Hermitian symmetry (c(0) real)",
                    format!("c(0) has imaginary part {im}"),
                ));
            }
        }
        coeffs[n as usize] = Complex64::new(re, im);
        last = Some(n);
    }
    if !saw_origin {
        return Err(LabError::invariant("c(0) = 1", "c(0) missing from file"));
    }
    let table = FourierTable::new(file.label, coeffs, file.tail_bound)?;
    if policy == PsdPolicy::Enforce {
        check_psd(&table)?;
    }
    Ok(table)
}

/// Full positive-semidefiniteness validation used by readers.
pub fn check_psd(t: &FourierTable) -> Result<()> {
    let order = t.half_width() + 1;
    if order <= DENSE_PSD_LIMIT {
        let check = is_positive_definite(t, order)?;
        if !check.passed {
            return Err(LabError::invariant(
                "Toeplitz positive semidefinite",
                format!(
                    "minimal eigenvalue {} of the {order}x{order} section",
                    check.min_eigenvalue
                ),
            ));
        }
    } else {
        // Truncated density bounded below on the whole circle => every section is PSD.
        let lower = density_inf(
            &FourierTable {
                tail_bound: 0.0,
                ..t.clone()
            },
            default_grid(t),
        )?;
        if lower < PSD_TOL {
            return Err(LabError::invariant(
                "Toeplitz positive semidefinite",
                format!("density lower bound {lower} does not certify positivity"),
            ));
        }
    }
    Ok(())
}

pub fn read_measure(path: &Path, policy: PsdPolicy) -> Result<FourierTable> {
    let text = std::fs::read_to_string(path)?;
    from_json(&text, policy)
}

pub fn write_measure(path: &Path, t: &FourierTable) -> Result<()> {
    std::fs::write(path, to_json(t) + "\n")?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sparse(pairs: &[(usize, f64)], n: usize) -> FourierTable {
        let mut c = vec![0.0; n + 1];
        c[0] = 1.0;
        for &(k, v) in pairs {
            c[k] = v;
        }
        FourierTable::from_real("test", &c, 0.0).unwrap()
    }

    #[test]
    fn lebesgue_constructor() {
        let t = lebesgue_table(0);
        assert_eq!(t.half_width(), 0);
        assert_eq!(t.coeff(0), Complex64::new(1.0, 0.0));
        let t = lebesgue_table(4);
        for n in 1..=4 {
            assert_eq!(t.coeff(n), Complex64::default());
            assert_eq!(t.coeff(-n), Complex64::default());
        }
        assert_eq!(t.tail_bound(), 0.0);
        let d = density_on_grid(&t, 64).unwrap();
        assert!(d.iter().all(|&v| v == 1.0));
    }

    #[test]
    fn hermitian_access() {
        let t = FourierTable::new(
            "h",
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.2)],
            0.0,
        )
        .unwrap();
        assert_eq!(t.coeff(-1), Complex64::new(0.1, -0.2));
        assert_eq!(t.coeff(5), Complex64::default());
        assert!(t.get(2).is_none());
    }

    #[test]
    fn constructor_rejects_bad_tables() {
        assert!(matches!(
            FourierTable::from_real("x", &[0.9], 0.0),
            Err(LabError::Invariant {
                invariant: "c(0) = 1",
                ..
            })
        ));
        assert!(matches!(
            FourierTable::from_real("x", &[1.0, 1.5], 0.0),
            Err(LabError::Invariant {
                invariant: "|c(n)| <= 1",
                ..
            })
        ));
        assert!(FourierTable::from_real("x", &[1.0], -1.0).is_err());
        assert!(FourierTable::new("x", vec![], 0.0).is_err());
    }

    #[test]
    fn subsample_examples() {
        let t = power_subsample(&lebesgue_table(8), 3).unwrap();
        assert_eq!(t.nonnegative(), lebesgue_table(2).nonnegative());
        let g = geometric_table(0.5, 10).unwrap();
        let s = power_subsample(&g, 2).unwrap();
        assert_eq!(s.half_width(), 5);
        for n in 0..=5 {
            assert!((s.coeff(n).re - 0.25f64.powi(n as i32)).abs() < 1e-15);
        }
        assert_eq!(s.tail_bound(), g.tail_bound());
        assert!(power_subsample(&g, 0).is_err());
    }

    #[test]
    fn l1_tail_examples() {
        assert_eq!(l1_tail(&lebesgue_table(16)), 0.0);
        assert!((l1_tail(&sparse(&[(1, 0.025)], 4)) - 0.05).abs() < 1e-15);
    }

    #[test]
    fn density_examples() {
        let r = density_sup(&lebesgue_table(8), 64).unwrap();
        assert_eq!(r.sup_estimate, 1.0);
        assert_eq!(r.certified_upper, 1.0);

        let t = sparse(&[(1, 0.05)], 1);
        let r = density_sup(&t, 64).unwrap();
        assert!((r.sup_estimate - 1.1).abs() < 1e-14);
        assert_eq!(r.argmax_theta, 0.0);
        assert!((r.grid_margin - 2.0 * PI * 0.1 / 128.0).abs() < 1e-15);
        assert!(r.certified_upper <= 1.1 + r.grid_margin + 1e-14);

        assert!(density_sup(&t, 7).is_err());
    }

    #[test]
    fn arcsine_examples() {
        let t = sparse(&[(1, 0.5)], 2);
        let a = arcsine_transform(&t).unwrap();
        assert!((a.coeff(1).re - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(a.coeff(2).re, 0.0);
        let a4 = arcsine_fourth_transform(&t).unwrap();
        assert!((a4.coeff(1).re - 1.0 / 81.0).abs() < 1e-15);
        assert_eq!(
            arcsine_transform(&lebesgue_table(3)).unwrap().nonnegative(),
            lebesgue_table(3).nonnegative()
        );

        assert!(matches!(
            arcsine_transform(&dirac_table(2)),
            Err(LabError::Domain(_))
        ));
        let complex = FourierTable::new(
            "c",
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.1, 0.3)],
            0.0,
        )
        .unwrap();
        assert!(matches!(
            arcsine_fourth_transform(&complex),
            Err(LabError::Domain(_))
        ));
    }

    #[test]
    fn riesz_examples() {
        let t = riesz_product(&[], &[], 5).unwrap();
        assert_eq!(t.nonnegative(), lebesgue_table(5).nonnegative());

        let t = riesz_product(&[1.0], &[1], 2).unwrap();
        assert_eq!(t.coeff(1).re, 0.5);
        assert_eq!(t.coeff(-1).re, 0.5);
        assert_eq!(t.coeff(2).re, 0.0);
        assert_eq!(t.tail_bound(), 0.0);

        let t = riesz_product(&[1.0, 1.0], &[1, 3], 4).unwrap();
        assert_eq!(t.coeff(1).re, 0.5);
        assert_eq!(t.coeff(2).re, 0.25);
        assert_eq!(t.coeff(3).re, 0.5);
        assert_eq!(t.coeff(4).re, 0.25);
        assert_eq!(t.tail_bound(), 0.0);

        // truncated: the +-4 terms land in the tail
        let t = riesz_product(&[1.0, 1.0], &[1, 3], 3).unwrap();
        assert!((t.tail_bound() - 0.5).abs() < 1e-15);

        assert!(riesz_product(&[1.0, 1.0], &[1, 2], 4).is_err());
        assert!(riesz_product(&[1.5], &[1], 4).is_err());
        assert!(riesz_product(&[0.5], &[0], 4).is_err());
        assert!(riesz_product(&[0.5], &[1, 3], 4).is_err());
    }

    #[test]
    fn sqrt_template_examples() {
        assert_eq!(
            sqrt_template(0.0, 6).unwrap().nonnegative(),
            lebesgue_table(6).nonnegative()
        );
        let t = sqrt_template(0.3, 4).unwrap();
        let want = [0.3, 0.212_132_034_355_964_25, 0.173_205_080_756_887_7, 0.15];
        for (n, w) in want.iter().enumerate() {
            assert!((t.coeff(n as i64 + 1).re - w).abs() < 1e-15);
        }
        assert!(t.label().contains("not certified PSD"));
        assert!(sqrt_template(1.5, 4).is_err());
    }

    #[test]
    fn psd_examples() {
        let r = is_positive_definite(&lebesgue_table(12), 10).unwrap();
        assert!(r.passed);
        assert!((r.min_eigenvalue - 1.0).abs() < 1e-12);

        // [[1,.6,.9],[.6,1,.6],[.9,.6,1]] is positive definite: 0.1 on (1,0,-1),
        // the rest from the 2x2 block [[1.9, 0.6 sqrt2], [0.6 sqrt2, 1]].
        let t = sparse(&[(1, 0.6), (2, 0.9)], 2);
        let r = is_positive_definite(&t, 3).unwrap();
        let block_min = {
            let (a, b, d) = (1.9f64, 0.6 * 2f64.sqrt(), 1.0f64);
            (a + d) / 2.0 - (((a - d) / 2.0).powi(2) + b * b).sqrt()
        };
        assert!(r.passed);
        assert!((r.min_eigenvalue - block_min.min(0.1)).abs() < 1e-12);
        // its density 1 + 1.2 cos + 1.8 cos2 is -0.5 at theta = 1/3, which
        // longer sections of the zero-padded table expose
        let padded = sparse(&[(1, 0.6), (2, 0.9)], 12);
        assert!(!is_positive_definite(&padded, 13).unwrap().passed);
        assert!(is_positive_definite(&t, 4).is_err());
    }

    #[test]
    fn psd_failure_detected() {
        // c(1) = 0.6, c(2) = -0.9 is not positive definite
        let t = sparse(&[(1, 0.6), (2, -0.9)], 2);
        let r = is_positive_definite(&t, 3).unwrap();
        assert!(!r.passed, "{r:?}");
    }

    #[test]
    fn complex_psd() {
        let z = Complex64::from_polar(0.5, 0.7);
        let t = FourierTable::new("rot", vec![Complex64::new(1.0, 0.0), z], 0.0).unwrap();
        let r = is_positive_definite(&t, 2).unwrap();
        assert!((r.min_eigenvalue - 0.5).abs() < 1e-12);
    }

    #[test]
    fn json_roundtrip_and_rejections() {
        let t = riesz_product(&[0.8, -0.5], &[1, 4], 6).unwrap();
        let back = from_json(&to_json(&t), PsdPolicy::Enforce).unwrap();
        assert_eq!(back, t);

        let bad =
            r#"{"label":"x","half_width":2,"tail_bound":0,"coeffs":[[0,1,0],[2,0.1,0],[1,0.1,0]]}"#;
        let err = from_json(bad, PsdPolicy::Skip).unwrap_err();
        assert!(err.to_string().contains("sorted"), "{err}");

        let bad = r#"{"label":"x","half_width":1,"tail_bound":0,"coeffs":[[0,0.5,0]]}"#;
        assert!(from_json(bad, PsdPolicy::Skip)
            .unwrap_err()
            .to_string()
            .contains("c(0) = 1"));

        let bad = r#"{"label":"x","half_width":2,"tail_bound":0,"coeffs":[[0,1,0],[1,0.6,0],[2,-0.9,0]]}"#;
        assert!(from_json(bad, PsdPolicy::Skip).is_ok());
        let err = from_json(bad, PsdPolicy::Enforce).unwrap_err();
        assert!(err.to_string().contains("positive semidefinite"), "{err}");

        let bad = r#"{"label":"x","half_width":1,"tail_bound":0,"coeffs":[[0,1,0],[3,0.1,0]]}"#;
        assert!(from_json(bad, PsdPolicy::Skip)
            .unwrap_err()
            .to_string()
            .contains("half_width"));

        let bad = r#"{"label":"x","half_width":1,"tail_bound":0,"coeffs":[[-1,0.1,0],[0,1,0]]}"#;
        assert!(from_json(bad, PsdPolicy::Skip)
            .unwrap_err()
            .to_string()
            .contains("Hermitian"));
    }

    #[test]
    fn large_tables_validated_by_density() {
        let t = geometric_table(0.7, 2000).unwrap();
        check_psd(&t).unwrap();
        let t = sqrt_template(1.0, 2000).unwrap();
        assert!(check_psd(&t).is_err());
    }
}
