use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::NameSource;
use crate::error::{LabError, Result};

/// Largest cocycle depth accepted by [`two_point_extension_correlation`].
pub const MAX_ODOMETER_DEPTH: u32 = 24;

/// A `Z/2`-valued cocycle on the dyadic odometer that reads the first `depth`
/// digits of `x`: `phi(x) = table[x mod 2^depth]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OdometerCocycle {
    depth: u32,
    table: Vec<bool>,
}

impl OdometerCocycle {
    pub fn new(table: Vec<bool>) -> Result<Self> {
        if !table.len().is_power_of_two() {
            return Err(LabError::arg(format!(
                "cocycle table length {} is not a power of two",
                table.len()
            )));
        }
        let depth = table.len().trailing_zeros();
        if depth > MAX_ODOMETER_DEPTH {
            return Err(LabError::Budget(format!(
                "cocycle depth {depth} exceeds {MAX_ODOMETER_DEPTH}"
            )));
        }
        Ok(OdometerCocycle { depth, table })
    }

    pub fn constant(v: bool) -> Self {
        OdometerCocycle {
            depth: 0,
            table: vec![v],
        }
    }

    /// `phi(x) = x_0`, the first dyadic digit.
    pub fn first_digit() -> Self {
        OdometerCocycle {
            depth: 1,
            table: vec![false, true],
        }
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    fn eval(&self, x: u64) -> bool {
        self.table[(x & ((1u64 << self.depth) - 1)) as usize]
    }
}

/// `mu{phi^(n) = 0} - mu{phi^(n) = 1}` for the skew product over the odometer.
///
/// Adding `j` to `x` changes its first `d` digits through those digits alone,
/// so `phi^(n)(x)` is a function of `x mod 2^d` and the measure is a count over
/// the `2^d` residues.
pub fn two_point_extension_correlation(phi: &OdometerCocycle, n: i64) -> Result<f64> {
    if n < 0 {
        return two_point_extension_correlation(phi, -n);
    }
    let size = phi.table.len();
    let n = n as u64;
    // parity of a full turn around the residue cycle
    let cycle: bool = phi.table.iter().fold(false, |a, &b| a ^ b);
    let (turns, rest) = (n / size as u64, (n % size as u64) as usize);
    let base = cycle && turns % 2 == 1;
    // prefix[i] = parity of table[0..i] over the doubled table
    let mut prefix = vec![false; 2 * size + 1];
    for i in 0..2 * size {
        prefix[i + 1] = prefix[i] ^ phi.table[i % size];
    }
    let odd = (0..size)
        .filter(|&r| base ^ prefix[r + rest] ^ prefix[r])
        .count();
    Ok((size as f64 - 2.0 * odd as f64) / size as f64)
}

/// Two-point extension `(x, i) -> (x + 1, i + phi(x))` of the odometer with
/// `P0 = X x {0}`.
#[derive(Clone, Debug)]
pub struct OdometerSource {
    phi: OdometerCocycle,
}

impl OdometerSource {
    pub fn new(phi: OdometerCocycle) -> Self {
        OdometerSource { phi }
    }
}

impl NameSource for OdometerSource {
    fn id(&self) -> String {
        format!("odometer(depth={})", self.phi.depth)
    }

    fn fill_name(&self, rng: &mut ChaCha8Rng, name: &mut [bool]) {
        let mut x: u64 = rng.random();
        let mut z: bool = rng.random();
        for b in name.iter_mut() {
            *b = z;
            z ^= self.phi.eval(x);
            x = x.wrapping_add(1);
        }
    }

    fn exact_correlation(&self, n: i64) -> Option<f64> {
        two_point_extension_correlation(&self.phi, n).ok()
    }
}
