use num_complex::Complex64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{frac, NameSource};
use crate::error::{LabError, Result};

/// `int_0^1 exp(i pi chi_A(s y mod 1)) dy` with `A = [0, 1/2)` and
/// `s = m_scale * n`.
///
/// `[0, 1)` is cut into `2|s|` intervals on each of which `s y mod 1` stays in
/// `A` or in its complement; the integrand is `-1` on the first kind and `+1`
/// on the second. For `s = 0` the mean of the square wave, `0`, is returned.
pub fn distal_integral(n: i64, m_scale: i64) -> Complex64 {
    let s = n.saturating_mul(m_scale);
    if s == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let pieces = 2 * s.unsigned_abs();
    // interval j maps into A when j is even (s > 0) or odd (s < 0)
    let (mut in_a, mut off_a) = (0u64, 0u64);
    for j in 0..pieces {
        if (j % 2 == 0) == (s > 0) {
            in_a += 1;
        } else {
            off_a += 1;
        }
    }
    let total = off_a as i64 - in_a as i64;
    Complex64::new(total as f64 / pieces as f64, 0.0)
}

/// The two-step extension `(x, y, z) -> (x + alpha, y + x, z + m y)` of an
/// irrational rotation; `P0 = {z in [0, 1/2)}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistalSource {
    alpha: f64,
    m_scale: i64,
}

impl DistalSource {
    pub fn new(alpha: f64, m_scale: i64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(LabError::arg(format!(
                "alpha must lie in (0, 1), got {alpha}"
            )));
        }
        if m_scale == 0 {
            return Err(LabError::arg("m_scale must be nonzero"));
        }
        Ok(DistalSource { alpha, m_scale })
    }
}

impl NameSource for DistalSource {
    fn id(&self) -> String {
        format!("distal(alpha={},m={})", self.alpha, self.m_scale)
    }

    fn fill_name(&self, rng: &mut ChaCha8Rng, name: &mut [bool]) {
        let (mut x, mut y, mut z): (f64, f64, f64) = (rng.random(), rng.random(), rng.random());
        for b in name.iter_mut() {
            *b = z >= 0.5;
            z = frac(z + self.m_scale as f64 * y);
            y = frac(y + x);
            x = frac(x + self.alpha);
        }
    }

    fn exact_correlation(&self, n: i64) -> Option<f64> {
        Some(if n == 0 {
            1.0
        } else {
            distal_integral(n, self.m_scale).re
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn piecewise_oracle(s: i64) -> f64 {
        // midpoint of each of 2|s| pieces decides the sign
        let p = 2 * s.abs();
        (0..p)
            .map(|j| {
                let mid = (j as f64 + 0.5) / p as f64;
                let v = (s as f64 * mid).rem_euclid(1.0);
                if v < 0.5 {
                    -1.0
                } else {
                    1.0
                }
            })
            .sum::<f64>()
            / p as f64
    }

    #[test]
    fn examples() {
        assert_eq!(distal_integral(1, 1), Complex64::new(0.0, 0.0));
        assert_eq!(distal_integral(0, 3), Complex64::new(0.0, 0.0));
        assert_eq!(distal_integral(5, 3), Complex64::new(0.0, 0.0));
        assert_eq!(distal_integral(-4, 3), Complex64::new(0.0, 0.0));
        for s in [-7, -1, 1, 2, 15] {
            assert_eq!(piecewise_oracle(s), 0.0);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(DistalSource::new(1.5, 1).is_err());
        assert!(DistalSource::new(0.3, 0).is_err());
    }
}
