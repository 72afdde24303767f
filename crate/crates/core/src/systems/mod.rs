//! Concrete Z-systems with a sign-symmetric two-set partition `{P0, P1}`.
//!
//! Every system exposes its `P`-names through [`NameSource`]; most also expose
//! the exact correlation sequence of `chi_{P0} - chi_{P1}`.

mod distal;
mod fixtures;
mod nil;
mod odometer;
mod rotation;
mod rudin_shapiro;
mod square_wave;

use std::io::{Read, Write};

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::measure::FourierTable;
use crate::parallel::stream_rng;

pub use distal::{distal_integral, DistalSource};
pub use fixtures::{BiasedSource, CoinSource, ConstantSource};
pub use nil::{nil_closed_form_n1, nil_rotation_correlation, NilCorrelation, NilSource};
pub use odometer::{
    two_point_extension_correlation, OdometerCocycle, OdometerSource, MAX_ODOMETER_DEPTH,
};
pub use rotation::{
    c_analytic, rotation_ac_cocycle_correlation, AcCorrelation, RotationCocycleSource,
    MAX_QUAD_POINTS, QUAD_TOL,
};
pub use rudin_shapiro::{rudin_shapiro_signs, RudinShapiroSource, RS_POOL_LEN};
pub use square_wave::{square_wave_coeffs, SquareWaveCoeffs, DEFAULT_M};

/// `sqrt(2) - 1`.
pub const SQRT2_MINUS_1: f64 = std::f64::consts::SQRT_2 - 1.0;
/// `(sqrt(5) - 1) / 2`.
pub const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// A measure-preserving system together with its distinguished partition.
pub trait NameSource: Sync {
    /// Short identifier with parameters, used in reports.
    fn id(&self) -> String;

    /// Draws an initial point from `rng` and writes `name[j] = 1` iff the
    /// `j`-th iterate lies in `P1`.
    fn fill_name(&self, rng: &mut ChaCha8Rng, name: &mut [bool]);

    /// `<F o T^n, F>` for `F = chi_{P0} - chi_{P1}`, when known.
    fn exact_correlation(&self, _n: i64) -> Option<f64> {
        None
    }
}

/// `count` names of length `length`, packed row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NameBatch {
    count: usize,
    length: usize,
    bits: Vec<bool>,
}

const BATCH_MAGIC: &[u8; 4] = b"PNM1";

impl NameBatch {
    pub fn new(count: usize, length: usize, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != count * length {
            return Err(LabError::arg(format!(
                "{} bits cannot form {count} rows of length {length}",
                bits.len()
            )));
        }
        Ok(NameBatch {
            count,
            length,
            bits,
        })
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn row(&self, i: usize) -> &[bool] {
        &self.bits[i * self.length..(i + 1) * self.length]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[bool]> {
        self.bits.chunks(self.length.max(1)).take(self.count)
    }

    /// Rows `start..end` as a new batch.
    pub fn slice(&self, start: usize, end: usize) -> NameBatch {
        NameBatch {
            count: end - start,
            length: self.length,
            bits: self.bits[start * self.length..end * self.length].to_vec(),
        }
    }

    /// Binary layout: `PNM1`, count and length as little-endian `u64`, then
    /// the bits row-major, eight per byte, most significant bit first.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(BATCH_MAGIC)?;
        w.write_all(&(self.count as u64).to_le_bytes())?;
        w.write_all(&(self.length as u64).to_le_bytes())?;
        let bytes: Vec<u8> = self
            .bits
            .chunks(8)
            .map(|c| {
                c.iter()
                    .enumerate()
                    .fold(0u8, |b, (i, &bit)| b | ((bit as u8) << (7 - i)))
            })
            .collect();
        w.write_all(&bytes)?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut header = [0u8; 20];
        r.read_exact(&mut header)?;
        if &header[..4] != BATCH_MAGIC {
            return Err(LabError::Format("not a name batch (bad magic)".into()));
        }
        let count = u64::from_le_bytes(header[4..12].try_into().expect("8 bytes")) as usize;
        let length = u64::from_le_bytes(header[12..20].try_into().expect("8 bytes")) as usize;
        let total = count
            .checked_mul(length)
            .ok_or_else(|| LabError::Format("batch dimensions overflow".into()))?;
        let mut bytes = Vec::new();
        r.read_to_end(&mut bytes)?;
        if bytes.len() != total.div_ceil(8) {
            return Err(LabError::Format(format!(
                "expected {} payload bytes for {count}x{length} bits, found {}",
                total.div_ceil(8),
                bytes.len()
            )));
        }
        let bits = (0..total)
            .map(|i| bytes[i / 8] & (1 << (7 - i % 8)) != 0)
            .collect();
        Ok(NameBatch {
            count,
            length,
            bits,
        })
    }
}

/// Samples `count` independent names; row `i` uses its own stream of `seed`,
/// so the batch does not depend on the worker count.
pub fn sample_names<S: NameSource + ?Sized>(
    src: &S,
    count: usize,
    length: usize,
    seed: u64,
) -> NameBatch {
    let mut bits = vec![false; count * length];
    if length > 0 {
        bits.par_chunks_mut(length)
            .enumerate()
            .for_each(|(i, row)| {
                let mut rng = stream_rng(seed, i as u64);
                src.fill_name(&mut rng, row);
            });
    }
    NameBatch {
        count,
        length,
        bits,
    }
}

fn check_length(length: usize, n_max: usize) -> Result<()> {
    if length < 4 * n_max || length == 0 {
        return Err(LabError::arg(format!(
            "sequence length {length} is too short for n_max={n_max} (need >= {})",
            (4 * n_max).max(1)
        )));
    }
    Ok(())
}

/// Birkhoff estimate `c(n) = (1/(L-n)) sum_k s_k s_{k+n}` of a single `+-1`
/// sequence, for `0 <= n <= n_max`.
pub fn empirical_correlation(signs: &[i8], n_max: usize) -> Result<FourierTable> {
    check_length(signs.len(), n_max)?;
    let l = signs.len();
    let c: Vec<f64> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let dot: i64 = signs[..l - n]
                .iter()
                .zip(&signs[n..])
                .map(|(&a, &b)| (a * b) as i64)
                .sum();
            dot as f64 / (l - n) as f64
        })
        .collect();
    FourierTable::from_real("empirical", &c, 0.0)
}

/// Correlation estimate pooled over every row of a batch, with `bit 0 -> +1`.
pub fn empirical_correlation_batch(batch: &NameBatch, n_max: usize) -> Result<FourierTable> {
    check_length(batch.length(), n_max)?;
    if batch.count() == 0 {
        return Err(LabError::arg("empty name batch"));
    }
    let l = batch.length();
    let c: Vec<f64> = (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let agree: i64 = batch
                .rows()
                .map(|row| {
                    row[..l - n]
                        .iter()
                        .zip(&row[n..])
                        .map(|(a, b)| if a == b { 1i64 } else { -1 })
                        .sum::<i64>()
                })
                .sum();
            agree as f64 / (batch.count() * (l - n)) as f64
        })
        .collect();
    FourierTable::from_real("empirical", &c, 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Series,
    Quadrature,
    Empirical,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Series => "series",
            Method::Quadrature => "quadrature",
            Method::Empirical => "empirical",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationRow {
    pub n: i64,
    pub value: Complex64,
    pub method: Method,
    pub error_bar: f64,
}

/// CSV with header `n,re,im,method,error_bar`; floats carry 17 significant
/// digits.
pub fn write_correlation_csv<W: Write>(mut w: W, rows: &[CorrelationRow]) -> Result<()> {
    writeln!(w, "n,re,im,method,error_bar")?;
    for r in rows {
        writeln!(
            w,
            "{},{:.16e},{:.16e},{},{:.16e}",
            r.n,
            r.value.re,
            r.value.im,
            r.method.as_str(),
            r.error_bar
        )?;
    }
    Ok(())
}

/// Rows `0..=n_max` of a table, all tagged with `method`.
pub fn table_rows(t: &FourierTable, method: Method) -> Vec<CorrelationRow> {
    t.nonnegative()
        .iter()
        .enumerate()
        .map(|(n, &value)| CorrelationRow {
            n: n as i64,
            value,
            method,
            error_bar: 0.0,
        })
        .collect()
}

pub(crate) fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_and_alternating_sequences() {
        let t = empirical_correlation(&[1; 40], 10).unwrap();
        assert!(t.nonnegative().iter().all(|c| c.re == 1.0));
        let alt: Vec<i8> = (0..40).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        let t = empirical_correlation(&alt, 10).unwrap();
        for n in 0..=10 {
            assert_eq!(t.coeff(n).re, if n % 2 == 0 { 1.0 } else { -1.0 });
        }
        assert_eq!(t.label(), "empirical");
        assert!(empirical_correlation(&[1; 39], 10).is_err());
    }

    #[test]
    fn batch_roundtrip() {
        let b = sample_names(&CoinSource, 7, 13, 5);
        let mut buf = Vec::new();
        b.write_to(&mut buf).unwrap();
        assert_eq!(&buf[..4], b"PNM1");
        assert_eq!(buf.len(), 20 + (7 * 13usize).div_ceil(8));
        assert_eq!(NameBatch::read_from(&buf[..]).unwrap(), b);
        assert!(NameBatch::read_from(&buf[..buf.len() - 1]).is_err());
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(NameBatch::read_from(&bad[..]).is_err());
    }

    #[test]
    fn bit_packing_is_msb_first() {
        let b = NameBatch::new(1, 3, vec![true, false, true]).unwrap();
        let mut buf = Vec::new();
        b.write_to(&mut buf).unwrap();
        assert_eq!(buf[20], 0b1010_0000);
    }

    #[test]
    fn batch_correlation_of_constant_fixture() {
        let b = sample_names(&ConstantSource, 50, 16, 1);
        let t = empirical_correlation_batch(&b, 4).unwrap();
        assert!(t.nonnegative().iter().all(|c| c.re == 1.0));
    }

    #[test]
    fn csv_layout() {
        let mut out = Vec::new();
        let rows = [CorrelationRow {
            n: 1,
            value: Complex64::new(0.5, 0.0),
            method: Method::Exact,
            error_bar: 0.0,
        }];
        write_correlation_csv(&mut out, &rows).unwrap();
        let s = String::from_utf8(out).unwrap();
        assert_eq!(
            s,
            "n,re,im,method,error_bar\n1,5.0000000000000000e-1,0.0000000000000000e0,exact,0.0000000000000000e0\n"
        );
    }

    #[test]
    fn frac_stays_in_unit_interval() {
        assert_eq!(frac(-1e-18), 0.0);
        assert_eq!(frac(2.25), 0.25);
        assert!((frac(-0.25) - 0.75).abs() < 1e-15);
    }
}
