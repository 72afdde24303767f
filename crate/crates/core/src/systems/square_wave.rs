use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{LabError, Result};

/// Default truncation of the square-wave series.
pub const DEFAULT_M: usize = 10_000;

/// Fourier coefficients of `f(y) = 2 chi_[0,1/2)(y) - 1` for `|m| <= M`.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareWaveCoeffs {
    m_max: usize,
}

pub fn square_wave_coeffs(m_max: usize) -> Result<SquareWaveCoeffs> {
    if m_max == 0 {
        return Err(LabError::arg("square-wave truncation M must be >= 1"));
    }
    Ok(SquareWaveCoeffs { m_max })
}

impl SquareWaveCoeffs {
    pub fn m_max(&self) -> usize {
        self.m_max
    }

    /// `f^(m)`: zero for even `m`, `2 / (pi i m)` for odd `m`.
    pub fn coeff(&self, m: i64) -> Complex64 {
        if m % 2 == 0 || m.unsigned_abs() as usize > self.m_max {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(0.0, -2.0 / (PI * m as f64))
        }
    }

    /// `|f^(m)|^2 = 4 / (pi^2 m^2)` for odd `m`.
    pub fn weight(&self, m: i64) -> f64 {
        self.coeff(m).norm_sqr()
    }

    /// Positive odd `m <= M` with their weights.
    pub fn odd_weights(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        (1..=self.m_max as i64)
            .step_by(2)
            .map(move |m| (m, self.weight(m)))
    }

    /// `sum_{|m| <= M} |f^(m)|^2`.
    pub fn energy(&self) -> f64 {
        2.0 * self.odd_weights().map(|(_, w)| w).sum::<f64>()
    }

    /// Bound on the weight left out by truncation, `8 / (pi^2 M)`.
    pub fn truncation_bound(&self) -> f64 {
        8.0 / (PI * PI * self.m_max as f64)
    }
}
