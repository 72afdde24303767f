//! Funny words, the `Theta` statistic and an empirical probe of the AT
//! necessary condition.
//!
//! For a word `W` on `Lambda = {n_1 < ... < n_k}` and a point `x`,
//! `Theta^W(x) = 1 - 2 d(W, pi(x)|_Lambda)` where `d` is the normalized
//! Hamming distance. Its second moment is the quadratic form
//! `(1/k^2) sum_{i,j} (-1)^{W_i + W_j} c(n_i - n_j)` in the correlation table
//! of the partition.

use std::io::Write;

use rand::seq::index::sample as sample_indices;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::measure::FourierTable;
use crate::parallel::{derive_seed, stream_rng};
use crate::sbh::{epsilon0, sbh_form};
use crate::systems::{sample_names, NameSource};

/// Default `eps` values for `mass_below` reporting.
pub const EPS_GRID: [f64; 3] = [0.05, 0.1, 0.2];
/// Symmetry test threshold, in standard errors.
pub const SYMMETRY_THRESHOLD: f64 = 4.0;

pub const CAVEAT: &str = "finite-sample probe: no searched word exceeding the bound is evidence \
     only; the condition is necessary for AT and the search cannot certify non-AT";

const FAMILY_DOMAIN: u64 = 0xFA31;
const SEARCH_DOMAIN: u64 = 0x5EA2;
const THETA_DOMAIN: u64 = 0x7E7A;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunnyWord {
    indices: Vec<i64>,
    #[serde(with = "crate::bits::as_string")]
    bits: Vec<bool>,
}

impl FunnyWord {
    pub fn new(indices: Vec<i64>, bits: Vec<bool>) -> Result<Self> {
        if indices.is_empty() {
            return Err(LabError::arg("a funny word needs at least one index"));
        }
        if indices.len() != bits.len() {
            return Err(LabError::arg(format!(
                "{} indices but {} bits",
                indices.len(),
                bits.len()
            )));
        }
        if indices.windows(2).any(|w| w[1] <= w[0]) {
            return Err(LabError::arg("word indices must be strictly increasing"));
        }
        Ok(FunnyWord { indices, bits })
    }

    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Name length needed to read the word off a sampled name.
    fn horizon(&self) -> Result<usize> {
        if self.indices[0] < 0 {
            return Err(LabError::arg(
                "sampled names start at index 0; word has a negative index",
            ));
        }
        Ok(*self.indices.last().expect("nonempty") as usize + 1)
    }

    /// Number of positions where `name` (a full name from index 0) disagrees.
    fn disagreements(&self, name: &[bool]) -> usize {
        self.indices
            .iter()
            .zip(&self.bits)
            .filter(|(&i, &b)| name[i as usize] != b)
            .count()
    }
}

/// Normalized Hamming distance.
pub fn hamming(a: &[bool], b: &[bool]) -> Result<f64> {
    if a.len() != b.len() || a.is_empty() {
        return Err(LabError::arg(format!(
            "hamming distance needs equal nonzero lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let d = a.iter().zip(b).filter(|(x, y)| x != y).count();
    Ok(d as f64 / a.len() as f64)
}

/// `Theta^W = 1 - 2 d(W, name)` for a name already restricted to `Lambda`.
pub fn theta_of_name(name_on_lambda: &[bool], w: &FunnyWord) -> Result<f64> {
    Ok(1.0 - 2.0 * hamming(name_on_lambda, &w.bits)?)
}

/// `||Theta^W||^2 = (1/k) sbh_form(t, Lambda, W)`.
pub fn theta_l2_exact(t: &FourierTable, w: &FunnyWord) -> Result<f64> {
    Ok(sbh_form(t, &w.indices, &w.bits)? / w.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub estimate: f64,
    pub stderr: f64,
}

/// Exact per-sample tallies: `a` = number of agreements, so `k Theta = 2a - k`.
fn agreement_counts<S: NameSource + ?Sized>(
    src: &S,
    w: &FunnyWord,
    samples: usize,
    seed: u64,
) -> Result<Vec<u32>> {
    let horizon = w.horizon()?;
    let k = w.len();
    let batch = sample_names(src, samples, horizon, derive_seed(seed, THETA_DOMAIN));
    Ok((0..samples)
        .into_par_iter()
        .map(|i| (k - w.disagreements(batch.row(i))) as u32)
        .collect())
}

/// Monte Carlo mean of `Theta^2` with its standard error; sums of `(k Theta)^2`
/// and `(k Theta)^4` are accumulated in integers.
pub fn theta_l2_empirical<S: NameSource + ?Sized>(
    src: &S,
    w: &FunnyWord,
    samples: usize,
    seed: u64,
) -> Result<Estimate> {
    if samples < 2 {
        return Err(LabError::arg("need at least two samples"));
    }
    let k = w.len() as i128;
    let counts = agreement_counts(src, w, samples, seed)?;
    let (s2, s4) = counts.iter().fold((0i128, 0i128), |(s2, s4), &a| {
        let kt = 2 * a as i128 - k;
        (s2 + kt * kt, s4 + kt * kt * kt * kt)
    });
    let n = samples as f64;
    let k2 = (k * k) as f64;
    let mean = s2 as f64 / k2 / n;
    let mean_sq = s4 as f64 / (k2 * k2) / n;
    let var = (mean_sq - mean * mean).max(0.0) * n / (n - 1.0);
    Ok(Estimate {
        estimate: mean,
        stderr: (var / n).sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThetaReport {
    pub word: FunnyWord,
    pub exact_l2: Option<f64>,
    pub empirical_l2: Option<Estimate>,
    /// `(theta, mass)` for every attainable value `(2a - k)/k`.
    pub empirical_hist: Vec<(f64, f64)>,
    /// `(eps, mu{d < eps})` over [`EPS_GRID`].
    pub mass_below: Vec<(f64, f64)>,
    pub samples: usize,
    pub seed: u64,
}

impl ThetaReport {
    /// `mu{d < eps}` from the histogram.
    pub fn mass_below(&self, eps: f64) -> f64 {
        self.empirical_hist
            .iter()
            .filter(|(theta, _)| (1.0 - theta) / 2.0 < eps)
            .map(|(_, m)| m)
            .sum()
    }
}

/// Empirical `Theta` distribution of `w` under `src`, with the exact second
/// moment when a correlation table is supplied.
pub fn theta_report<S: NameSource + ?Sized>(
    src: &S,
    w: &FunnyWord,
    table: Option<&FourierTable>,
    samples: usize,
    seed: u64,
) -> Result<ThetaReport> {
    let k = w.len();
    let counts = agreement_counts(src, w, samples, seed)?;
    let mut hist = vec![0usize; k + 1];
    counts.iter().for_each(|&a| hist[a as usize] += 1);
    let empirical_hist: Vec<(f64, f64)> = hist
        .iter()
        .enumerate()
        .map(|(a, &c)| ((2 * a) as f64 / k as f64 - 1.0, c as f64 / samples as f64))
        .collect();
    let mut report = ThetaReport {
        word: w.clone(),
        exact_l2: table.map(|t| theta_l2_exact(t, w)).transpose()?,
        empirical_l2: if samples >= 2 {
            Some(theta_l2_empirical(src, w, samples, seed)?)
        } else {
            None
        },
        empirical_hist,
        mass_below: Vec::new(),
        samples,
        seed,
    };
    report.mass_below = EPS_GRID
        .iter()
        .map(|&e| (e, report.mass_below(e)))
        .collect();
    Ok(report)
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 0.5) {
        return Err(LabError::arg(format!(
            "epsilon must lie in (0, 1/2), got {eps}"
        )));
    }
    Ok(())
}

/// `(1 + eps0) / (2 (1 - 2 eps)^2)`: bound on `|Lambda| mu{d < eps}` for every
/// funny word when the correlation measure is SBH.
pub fn non_at_bound(eps: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok((1.0 + epsilon0()) / (2.0 * (1.0 - 2.0 * eps).powi(2)))
}

/// The same bound with numerator `1 + eps`.
pub fn non_at_bound_eps_numerator(eps: f64) -> Result<f64> {
    check_eps(eps)?;
    Ok((1.0 + eps) / (2.0 * (1.0 - 2.0 * eps).powi(2)))
}

/// Candidate sets `Lambda` for [`funny_word_search`]: arithmetic progressions
/// `{a + j d : j < k}` with `a < offsets`, and `random_subsets` uniform
/// `k`-subsets of `[0, horizon)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaFamily {
    pub k: usize,
    pub horizon: usize,
    pub offsets: usize,
    pub random_subsets: usize,
}

impl LambdaFamily {
    pub fn candidates(&self, seed: u64) -> Result<Vec<Vec<i64>>> {
        if self.k == 0 || self.k > self.horizon {
            return Err(LabError::arg(format!(
                "need 1 <= k <= horizon, got k={} horizon={}",
                self.k, self.horizon
            )));
        }
        let mut out = Vec::new();
        let span = |d: usize| (self.k - 1) * d;
        let mut d = 1;
        while span(d) < self.horizon {
            for a in 0..self.offsets.min(self.horizon - span(d)) {
                out.push((0..self.k).map(|j| (a + j * d) as i64).collect());
            }
            if self.k == 1 {
                break;
            }
            d += 1;
        }
        let mut rng = stream_rng(derive_seed(seed, FAMILY_DOMAIN), 0);
        for _ in 0..self.random_subsets {
            let mut s: Vec<i64> = sample_indices(&mut rng, self.horizon, self.k)
                .into_iter()
                .map(|i| i as i64)
                .collect();
            s.sort_unstable();
            out.push(s);
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CandidateRow {
    pub lambda: Vec<i64>,
    #[serde(with = "crate::bits::as_string")]
    pub word: Vec<bool>,
    pub mass_below: f64,
    pub k_times_mass: f64,
    pub bound: f64,
    pub stderr: f64,
}

impl CandidateRow {
    /// `k mu > bound + 4 stderr`.
    pub fn violates(&self) -> bool {
        self.k_times_mass > self.bound + 4.0 * self.stderr
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub source: String,
    pub epsilon: f64,
    pub bound: f64,
    /// The bound with numerator `1 + eps` instead of `1 + eps0`.
    pub bound_eps_numerator: f64,
    pub candidates: usize,
    pub violations: usize,
    pub best: CandidateRow,
    pub train_samples: usize,
    pub test_samples: usize,
    pub seed: u64,
    pub caveat: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchReport {
    pub rows: Vec<CandidateRow>,
    pub summary: SearchSummary,
}

impl SearchReport {
    /// One JSON object per candidate, then the summary.
    pub fn write_jsonl<W: Write>(&self, mut w: W) -> Result<()> {
        for r in &self.rows {
            serde_json::to_writer(&mut w, r)?;
            writeln!(w)?;
        }
        serde_json::to_writer(&mut w, &self.summary)?;
        writeln!(w)?;
        Ok(())
    }
}

/// For each `Lambda` of the family, picks `W` by coordinatewise majority over
/// `samples` training names (ties to `0`) and estimates `mu{d < eps}` on
/// `samples` fresh names. Returns every candidate plus the maximizer of
/// `|Lambda| mu`, ties broken by smallest `Lambda` and then smallest `W`.
pub fn funny_word_search<S: NameSource + ?Sized>(
    src: &S,
    family: &LambdaFamily,
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<SearchReport> {
    let bound = non_at_bound(eps)?;
    if samples == 0 {
        return Err(LabError::arg("samples must be positive"));
    }
    let lambdas = family.candidates(seed)?;
    let k = family.k;
    let names = sample_names(
        src,
        2 * samples,
        family.horizon,
        derive_seed(seed, SEARCH_DOMAIN),
    );
    let (train, test) = (names.slice(0, samples), names.slice(samples, 2 * samples));
    // d < eps  <=>  disagreements < eps k
    let max_dis = (0..=k).filter(|&d| (d as f64) < eps * k as f64).max();

    let rows: Vec<CandidateRow> = lambdas
        .into_par_iter()
        .map(|lambda| {
            let ones: Vec<usize> = lambda
                .iter()
                .map(|&i| train.rows().filter(|r| r[i as usize]).count())
                .collect();
            let word: Vec<bool> = ones.iter().map(|&c| 2 * c > samples).collect();
            let hits = match max_dis {
                None => 0,
                Some(m) => test
                    .rows()
                    .filter(|r| {
                        lambda
                            .iter()
                            .zip(&word)
                            .filter(|(&i, &b)| r[i as usize] != b)
                            .count()
                            <= m
                    })
                    .count(),
            };
            let mu = hits as f64 / samples as f64;
            CandidateRow {
                lambda,
                word,
                mass_below: mu,
                k_times_mass: k as f64 * mu,
                bound,
                stderr: k as f64 * (mu * (1.0 - mu) / samples as f64).sqrt(),
            }
        })
        .collect();

    let best = rows
        .iter()
        .fold(None::<&CandidateRow>, |best, r| match best {
            None => Some(r),
            Some(b) => {
                let better = r.k_times_mass > b.k_times_mass
                    || (r.k_times_mass == b.k_times_mass
                        && (r.lambda < b.lambda || (r.lambda == b.lambda && r.word < b.word)));
                Some(if better { r } else { b })
            }
        })
        .expect("family is nonempty")
        .clone();
    let summary = SearchSummary {
        source: src.id(),
        epsilon: eps,
        bound,
        bound_eps_numerator: non_at_bound_eps_numerator(eps)?,
        candidates: rows.len(),
        violations: rows.iter().filter(|r| r.violates()).count(),
        best,
        train_samples: samples,
        test_samples: samples,
        seed,
        caveat: CAVEAT.to_string(),
    };
    Ok(SearchReport { rows, summary })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryReport {
    /// `max_v |z_v|` over levels `v > 0`, where `z_v` standardizes
    /// `mu{Theta >= v} - mu{Theta <= -v}`.
    pub statistic: f64,
    pub threshold: f64,
    pub symmetric: bool,
    pub samples: usize,
    pub seed: u64,
}

/// Compares the empirical laws of `Theta` and `-Theta` level by level.
pub fn theta_symmetry_check<S: NameSource + ?Sized>(
    src: &S,
    w: &FunnyWord,
    samples: usize,
    seed: u64,
) -> Result<SymmetryReport> {
    if samples == 0 {
        return Err(LabError::arg("samples must be positive"));
    }
    let k = w.len();
    let counts = agreement_counts(src, w, samples, seed)?;
    let mut hist = vec![0usize; k + 1];
    counts.iter().for_each(|&a| hist[a as usize] += 1);
    let n = samples as f64;
    let mut statistic = 0.0f64;
    // level v = (2a - k)/k > 0, i.e. a > k/2; the mirror level is a' = k - a
    for a in (k / 2 + 1)..=k {
        let upper: usize = hist[a..].iter().sum();
        let lower: usize = hist[..=k - a].iter().sum();
        let (p, q) = (upper as f64 / n, lower as f64 / n);
        let var = p + q - (p - q) * (p - q);
        if var > 0.0 {
            statistic = statistic.max(((p - q) / (var / n).sqrt()).abs());
        } else if upper != lower {
            statistic = f64::INFINITY;
        }
    }
    Ok(SymmetryReport {
        statistic,
        threshold: SYMMETRY_THRESHOLD,
        symmetric: statistic <= SYMMETRY_THRESHOLD,
        samples,
        seed,
    })
}
