//! Deterministic pseudo-random number generation for initial data.
//!
//! The generator is a fixed xorshift64* so that seeded runs produce
//! byte-identical output on every platform. The stream must never change:
//! recorded runs, presets, and regression baselines all depend on it.

/// Replacement state used when a caller seeds the generator with zero,
/// which is the one state xorshift64* cannot leave.
const ZERO_SEED_FALLBACK: u64 = 0x9E37_79B9_7F4A_7C15;

/// Multiplier for the xorshift64* output scramble.
const SCRAMBLE: u64 = 0x2545_F491_4F6C_DD1D;

/// xorshift64* generator with a pinned output stream.
#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    /// Creates a generator from a seed. A zero seed is replaced by a fixed
    /// nonzero constant so every seed yields a usable stream.
    pub fn new(seed: u64) -> Self {
        let state = if seed == 0 { ZERO_SEED_FALLBACK } else { seed };
        Self { state }
    }

    /// Advances the state and returns the next scrambled 64-bit word.
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(SCRAMBLE)
    }

    /// Returns a uniform sample in `[0, 1)` built from the top 53 bits,
    /// so every value is exactly representable.
    pub fn uniform01(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Returns a uniform sample in `[lo, hi)`.
    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform01()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_seed_falls_back_to_fixed_state() {
        let mut a = XorShift64Star::new(0);
        let mut b = XorShift64Star::new(ZERO_SEED_FALLBACK);
        for _ in 0..8 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn stream_is_pinned() {
        // Reference values computed directly from the recurrence
        // x ^= x >> 12; x ^= x << 25; x ^= x >> 27; out = x * SCRAMBLE.
        let mut x: u64 = 1;
        let mut expect = Vec::new();
        for _ in 0..4 {
            x ^= x >> 12;
            x ^= x << 25;
            x ^= x >> 27;
            expect.push(x.wrapping_mul(SCRAMBLE));
        }
        let mut rng = XorShift64Star::new(1);
        let got: Vec<u64> = (0..4).map(|_| rng.next_u64()).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn uniform01_stays_in_unit_interval() {
        let mut rng = XorShift64Star::new(12345);
        for _ in 0..10_000 {
            let u = rng.uniform01();
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn uniform_in_respects_bounds_and_seeding() {
        let mut a = XorShift64Star::new(7);
        let mut b = XorShift64Star::new(7);
        for _ in 0..100 {
            let x = a.uniform_in(-2.0, 3.0);
            assert!((-2.0..3.0).contains(&x));
            assert_eq!(x, b.uniform_in(-2.0, 3.0));
        }
    }
}
