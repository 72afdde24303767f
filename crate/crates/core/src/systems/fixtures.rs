//! Degenerate and reference sources used to calibrate the harness.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::NameSource;
use crate::error::{LabError, Result};

/// Independent fair bits (a Bernoulli shift).
#[derive(Clone, Copy, Debug, Default)]
pub struct CoinSource;

impl NameSource for CoinSource {
    fn id(&self) -> String {
        "coin".into()
    }

    fn fill_name(&self, rng: &mut ChaCha8Rng, name: &mut [bool]) {
        name.iter_mut().for_each(|b| *b = rng.random_bool(0.5));
    }

    fn exact_correlation(&self, n: i64) -> Option<f64> {
        Some(if n == 0 { 1.0 } else { 0.0 })
    }
}

/// The identity on two points: each name is constantly `0` or constantly `1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct ConstantSource;

impl NameSource for ConstantSource {
    fn id(&self) -> String {
        "constant".into()
    }

    fn fill_name(&self, rng: &mut ChaCha8Rng, name: &mut [bool]) {
        let v = rng.random_bool(0.5);
        name.fill(v);
    }

    fn exact_correlation(&self, _n: i64) -> Option<f64> {
        Some(1.0)
    }
}

/// Independent bits with `P(bit = 0) = p0`; not sign-symmetric unless
/// `p0 = 1/2`.
#[derive(Clone, Copy, Debug)]
pub struct BiasedSource {
    p0: f64,
}

impl BiasedSource {
    pub fn new(p0: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p0) {
            return Err(LabError::arg(format!("p0 must lie in [0, 1], got {p0}")));
        }
        Ok(BiasedSource { p0 })
    }
}

impl NameSource for BiasedSource {
    fn id(&self) -> String {
        format!("biased(p0={})", self.p0)
    }

    fn fill_name(&self, rng: &mut ChaCha8Rng, name: &mut [bool]) {
        name.iter_mut().for_each(|b| *b = !rng.random_bool(self.p0));
    }

    fn exact_correlation(&self, n: i64) -> Option<f64> {
        let mean = 2.0 * self.p0 - 1.0;
        Some(if n == 0 { 1.0 } else { mean * mean })
    }
}
