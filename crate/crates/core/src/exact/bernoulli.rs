use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};

use super::{int, Rational};

static CACHE: OnceLock<RwLock<Vec<Rational>>> = OnceLock::new();

/// Bernoulli number `B_m` with `B_1 = -1/2`, i.e. `z/(e^z - 1) = Σ B_m z^m/m!`.
///
/// Values are produced by the Akiyama–Tanigawa table and memoized; the cache
/// serves concurrent readers and fills under a write lock.
pub fn bernoulli(m: usize) -> Rational {
    let cache = CACHE.get_or_init(|| RwLock::new(Vec::new()));
    if let Some(b) = cache.read().expect("bernoulli cache poisoned").get(m) {
        return b.clone();
    }
    let mut table = cache.write().expect("bernoulli cache poisoned");
    let target = (m + 1).max(2 * table.len()).max(32);
    if table.len() < target {
        *table = akiyama_tanigawa(target);
    }
    table[m].clone()
}

fn akiyama_tanigawa(count: usize) -> Vec<Rational> {
    let mut row: Vec<Rational> = Vec::with_capacity(count);
    let mut out = Vec::with_capacity(count);
    for n in 0..count {
        row.push(Rational::one() / int(n as i64 + 1));
        for j in (1..=n).rev() {
            let diff = &row[j - 1] - &row[j];
            row[j - 1] = diff * int(j as i64);
        }
        // the table yields B_1 = +1/2
        let b = if n == 1 {
            -row[0].clone()
        } else {
            row[0].clone()
        };
        out.push(b);
    }
    debug_assert!(count < 4 || out[3].is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{binomial, rat};

    #[test]
    fn small_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(-1, 2));
        assert_eq!(bernoulli(2), rat(1, 6));
        assert_eq!(bernoulli(4), rat(-1, 30));
        assert_eq!(bernoulli(12), rat(-691, 2730));
        assert_eq!(bernoulli(7), int(0));
    }

    #[test]
    fn classical_recursion_up_to_60() {
        for m in 1..=60usize {
            let mut s = Rational::zero();
            for k in 0..=m {
                s += binomial(&int(m as i64 + 1), k as u32) * bernoulli(k);
            }
            assert!(s.is_zero(), "m={m}");
        }
    }

    #[test]
    fn concurrent_reads_agree() {
        let handles: Vec<_> = (0..8)
            .map(|t| std::thread::spawn(move || bernoulli(20 + 2 * t)))
            .collect();
        for (t, h) in handles.into_iter().enumerate() {
            assert_eq!(h.join().unwrap(), bernoulli(20 + 2 * t));
        }
    }
}
