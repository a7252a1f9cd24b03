//! Small numeric helpers shared by the sampler and the causal estimators.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::real::Real;

/// log(sum(exp(v))) without overflow.
pub fn logsumexp<T: Real>(v: &[T]) -> T {
    let m = v.iter().cloned().fold(T::neg_infinity(), T::max);
    if !m.is_finite() {
        return m;
    }
    let s = v.iter().map(|&x| (x - m).exp()).sum::<T>();
    m + s.ln()
}

/// Sample an index proportional to `exp(logw)`.
pub fn sample_log_weights<T: Real, R: Rng + ?Sized>(logw: &[T], rng: &mut R) -> usize {
    debug_assert!(!logw.is_empty());
    let m = logw.iter().cloned().fold(T::neg_infinity(), T::max);
    let mut total = T::zero();
    for &w in logw {
        total += (w - m).exp();
    }
    let u = T::open01(rng) * total;
    let mut acc = T::zero();
    for (i, &w) in logw.iter().enumerate() {
        acc += (w - m).exp();
        if u <= acc {
            return i;
        }
    }
    logw.len() - 1
}

/// Lower nearest-rank empirical quantile of a sorted slice.
///
/// Uses `x_(ceil(q * n))` with one-based ranks, so `q = 0.5` on four points
/// picks the second one.
pub fn quantile_sorted<T: Real>(sorted: &[T], q: T) -> T {
    assert!(!sorted.is_empty(), "quantile of empty slice");
    let n = sorted.len();
    let rank = (q * T::from_usize(n).unwrap()).ceil();
    let idx = rank.as_f64() as usize;
    sorted[idx.clamp(1, n) - 1]
}

/// Convenience: sort a copy and take several quantiles.
pub fn quantiles<T: Real>(values: &[T], qs: &[T]) -> Vec<T> {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    qs.iter().map(|&q| quantile_sorted(&sorted, q)).collect()
}

pub fn mean<T: Real>(values: &[T]) -> T {
    values.iter().cloned().sum::<T>() / T::from_usize(values.len()).unwrap()
}

/// Unbiased sample variance; zero for fewer than two points.
pub fn variance<T: Real>(values: &[T]) -> T {
    if values.len() < 2 {
        return T::zero();
    }
    let m = mean(values);
    values.iter().map(|&x| (x - m) * (x - m)).sum::<T>()
        / T::from_usize(values.len() - 1).unwrap()
}

/// Deterministic stream derivation: every parallel unit of work draws its
/// randomness from `derive_rng(master_seed, stream)` so results do not depend
/// on thread scheduling. The mix is SplitMix64 over seed XOR stream.
pub fn derive_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    ChaCha12Rng::seed_from_u64(z)
}
