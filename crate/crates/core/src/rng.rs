//! Deterministic, portable pseudo-random generator for sampled checks.
//!
//! `xorshift64*`: the 64-bit state is updated by three xor-shifts
//! (`x ^= x >> 12; x ^= x << 25; x ^= x >> 27`) and the output is the state
//! multiplied by `0x2545F4914F6CDD1D` (wrapping). A zero seed is replaced by
//! a fixed nonzero constant. The generator is defined bit-exactly here so
//! that seeded runs reproduce across platforms and languages.

use num_bigint::BigInt;
use num_rational::BigRational;

#[derive(Clone, Debug)]
pub struct Xorshift64Star {
    state: u64,
}

impl Xorshift64Star {
    pub fn new(seed: u64) -> Self {
        Self {
            state: if seed == 0 { 0x9E3779B97F4A7C15 } else { seed },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545F4914F6CDD1D)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn f64_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn f64_range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.f64_unit()
    }

    /// Uniform integer in `[0, n)`.
    pub fn index(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn i64_range(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(hi > lo);
        lo + (self.next_u64() % (hi - lo) as u64) as i64
    }

    /// Random exact rational `n/d` with `n ∈ [−bound, bound]` and
    /// `d ∈ [1, denom_bound]`.
    pub fn rational(&mut self, bound: i64, denom_bound: i64) -> BigRational {
        let n = self.i64_range(-bound, bound + 1);
        let d = self.i64_range(1, denom_bound + 1);
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Random rational point with all coordinates in `[−bound, bound]`.
    pub fn rational_point(&mut self, dim: usize, bound: i64, denom_bound: i64) -> Vec<BigRational> {
        (0..dim).map(|_| self.rational(bound, denom_bound)).collect()
    }

    /// Random unit vector in ℝ^n (f64).
    pub fn unit_vector(&mut self, n: usize) -> Vec<f64> {
        loop {
            let v: Vec<f64> = (0..n).map(|_| self.f64_range(-1.0, 1.0)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-3 {
                return v.iter().map(|x| x / norm).collect();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_stream() {
        let mut a = Xorshift64Star::new(42);
        let mut b = Xorshift64Star::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
    }

    #[test]
    fn first_outputs_pinned() {
        // Frozen values guard the bit-exact definition above.
        let mut r = Xorshift64Star::new(1);
        assert_eq!(r.next_u64(), 0x47E4CE4B896CDD1D);
        assert_eq!(r.next_u64(), 0xABCFA6A8E079651D);
    }

    #[test]
    fn unit_interval() {
        let mut r = Xorshift64Star::new(7);
        for _ in 0..1000 {
            let u = r.f64_unit();
            assert!((0.0..1.0).contains(&u));
        }
    }
}
