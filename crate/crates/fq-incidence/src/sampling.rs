//! Deterministic per-trial randomness.
//!
//! Trial t of a run with master seed s uses a ChaCha8 stream seeded with
//! splitmix64(s ^ (t+1) * 0x9E3779B97F4A7C15); random subsets are drawn by
//! partial Fisher-Yates over canonical indices and returned sorted. Reports
//! produced from the same config and seed are therefore byte-identical.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E3779B97F4A7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
    z ^ (z >> 31)
}

/// hash(master_seed, trial_index) -> per-trial RNG.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha8Rng {
    let mixed = splitmix64(master_seed ^ (trial.wrapping_add(1)).wrapping_mul(0x9E3779B97F4A7C15));
    ChaCha8Rng::seed_from_u64(mixed)
}

/// Sorted k-subset of [0, universe) by partial Fisher-Yates.
pub fn sample_subset(rng: &mut ChaCha8Rng, universe: u64, k: usize) -> Vec<u64> {
    assert!(k as u64 <= universe);
    let mut pool: Vec<u64> = (0..universe).collect();
    for i in 0..k {
        let j = rng.gen_range(i..pool.len());
        pool.swap(i, j);
    }
    let mut out: Vec<u64> = pool[..k].to_vec();
    out.sort_unstable();
    out
}

/// Uniform subset size in [0, universe].
pub fn sample_size(rng: &mut ChaCha8Rng, universe: u64) -> usize {
    rng.gen_range(0..=universe) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_subsets() {
        let a = sample_subset(&mut trial_rng(7, 3), 100, 10);
        let b = sample_subset(&mut trial_rng(7, 3), 100, 10);
        assert_eq!(a, b);
        let c = sample_subset(&mut trial_rng(7, 4), 100, 10);
        assert_ne!(a, c);
    }

    #[test]
    fn subsets_are_sorted_unique_in_range() {
        for trial in 0..50 {
            let s = sample_subset(&mut trial_rng(42, trial), 30, 12);
            assert_eq!(s.len(), 12);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|&x| x < 30));
        }
        assert!(sample_subset(&mut trial_rng(0, 0), 5, 0).is_empty());
        assert_eq!(sample_subset(&mut trial_rng(0, 0), 5, 5).len(), 5);
    }
}
