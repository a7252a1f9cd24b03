//! Floating-point abstraction for the model scalars.

use rand::Rng;
use rand_distr::{Beta, Distribution, Gamma, Normal, Open01, StandardNormal};

/// Floating point scalar: `f32` or `f64`.
///
/// Bundles the numeric traits the model code relies on together with the
/// handful of random draws and special functions that `rand_distr`/`statrs`
/// only expose for concrete float types. Generic code calls these methods;
/// the per-type impls delegate to the concrete crates.
pub trait Real:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + num_traits::NumAssign
    + std::iter::Sum
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
    /// Inject an `f64` constant (lossy for `f32`).
    fn of(v: f64) -> Self;

    /// Widen to `f64`.
    fn as_f64(self) -> f64;

    /// Natural log of the gamma function.
    fn ln_gamma(self) -> Self;

    /// One standard normal draw.
    fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// One Gamma(shape, scale) draw (mean = shape * scale).
    fn gamma_draw<R: Rng + ?Sized>(shape: Self, scale: Self, rng: &mut R) -> Self;

    /// One Beta(a, b) draw.
    fn beta_draw<R: Rng + ?Sized>(a: Self, b: Self, rng: &mut R) -> Self;

    /// One uniform draw on the open interval (0, 1).
    fn open01<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

macro_rules! impl_real {
    ($t:ty) => {
        impl Real for $t {
            #[inline]
            fn of(v: f64) -> Self {
                v as $t
            }

            #[inline]
            fn as_f64(self) -> f64 {
                self as f64
            }

            fn ln_gamma(self) -> Self {
                statrs::function::gamma::ln_gamma(self as f64) as $t
            }

            #[inline]
            fn std_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
                StandardNormal.sample(rng)
            }

            fn gamma_draw<R: Rng + ?Sized>(shape: Self, scale: Self, rng: &mut R) -> Self {
                Gamma::new(shape, scale)
                    .expect("gamma parameters must be positive")
                    .sample(rng)
            }

            fn beta_draw<R: Rng + ?Sized>(a: Self, b: Self, rng: &mut R) -> Self {
                Beta::new(a, b)
                    .expect("beta parameters must be positive")
                    .sample(rng)
            }

            #[inline]
            fn open01<R: Rng + ?Sized>(rng: &mut R) -> Self {
                Open01.sample(rng)
            }
        }

        // Keep `Normal` reachable for the impls even though draws go through
        // mean + sd * std_normal in generic code.
        const _: fn() = || {
            let _ = Normal::<$t>::new(0.0, 1.0);
        };
    };
}

impl_real!(f32);
impl_real!(f64);

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn ln_gamma_matches_factorials() {
        // Gamma(n) = (n-1)!
        assert!((f64::ln_gamma(5.0) - (24f64).ln()).abs() < 1e-12);
        assert!((f32::ln_gamma(4.0) - (6f32).ln()).abs() < 1e-5);
    }

    #[test]
    fn gamma_draw_mean_close() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let n = 20_000;
        let mean: f64 = (0..n)
            .map(|_| f64::gamma_draw(3.0, 2.0, &mut rng))
            .sum::<f64>()
            / n as f64;
        assert!((mean - 6.0).abs() < 0.1, "mean {mean}");
    }
}
