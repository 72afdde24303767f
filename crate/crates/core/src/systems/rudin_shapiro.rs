use std::sync::OnceLock;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::NameSource;

/// Length of the shared prefix that names are cut from.
pub const RS_POOL_LEN: usize = 1 << 22;

/// First `len` signs of the Rudin-Shapiro sequence, generated by the
/// substitution `a -> ab, b -> ac, c -> db, d -> dc` read as `a, b -> +1`,
/// `c, d -> -1`.
pub fn rudin_shapiro_signs(len: usize) -> Vec<i8> {
    let mut word: Vec<u8> = vec![0];
    while word.len() < len {
        word = word
            .iter()
            .flat_map(|&l| match l {
                0 => [0, 1],
                1 => [0, 2],
                2 => [3, 1],
                _ => [3, 2],
            })
            .collect();
    }
    word.truncate(len);
    word.into_iter()
        .map(|l| if l < 2 { 1 } else { -1 })
        .collect()
}

fn pool() -> &'static [i8] {
    static POOL: OnceLock<Vec<i8>> = OnceLock::new();
    POOL.get_or_init(|| rudin_shapiro_signs(RS_POOL_LEN))
}

/// Names read off the Rudin-Shapiro sequence at a uniform offset, with a
/// uniform global sign flip (the involution swapping `P0` and `P1`).
#[derive(Clone, Copy, Debug, Default)]
pub struct RudinShapiroSource;

impl NameSource for RudinShapiroSource {
    fn id(&self) -> String {
        "rudin-shapiro".into()
    }

    fn fill_name(&self, rng: &mut ChaCha8Rng, name: &mut [bool]) {
        let pool = pool();
        assert!(
            name.len() <= pool.len(),
            "name longer than the Rudin-Shapiro pool"
        );
        let start = rng.random_range(0..=pool.len() - name.len());
        let flip = rng.random_bool(0.5);
        for (b, &s) in name.iter_mut().zip(&pool[start..]) {
            *b = (s < 0) != flip;
        }
    }

    fn exact_correlation(&self, n: i64) -> Option<f64> {
        Some(if n == 0 { 1.0 } else { 0.0 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_property() {
        let a = rudin_shapiro_signs(1 << 10);
        let b = rudin_shapiro_signs(1 << 11);
        assert_eq!(a[..], b[..1 << 10]);
        assert_eq!(rudin_shapiro_signs(1), vec![1]);
        assert_eq!(rudin_shapiro_signs(5).len(), 5);
    }
}
