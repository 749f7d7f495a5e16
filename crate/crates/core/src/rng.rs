//! Seeded pseudo-random streams for the search harness.
//!
//! Generator: xorshift64* (Vigna 2016) with shift triple (12, 25, 27) and
//! output multiplier `0x2545_F491_4F6C_DD1D`. State is initialised from the
//! seed with one SplitMix64 step (increment `0x9E37_79B9_7F4A_7C15`, mix
//! multipliers `0xBF58_476D_1CE4_E5B9` and `0x94D0_49BB_1331_11EB`), which
//! never yields the forbidden all-zero state for the generator in practice;
//! a zero result is replaced by the increment constant.
//!
//! Per-sample streams are derived as `stream(seed, index)` so that the
//! values drawn for a sample do not depend on how samples are scheduled.

use crate::rational::Rational;

pub const SPLITMIX_INCREMENT: u64 = 0x9E37_79B9_7F4A_7C15;
pub const XORSHIFT_MULTIPLIER: u64 = 0x2545_F491_4F6C_DD1D;

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(SPLITMIX_INCREMENT);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub fn new(seed: u64) -> Self {
        let s = splitmix64(seed);
        XorShift64Star {
            state: if s == 0 { SPLITMIX_INCREMENT } else { s },
        }
    }

    /// Independent stream for sample `index` of a run seeded with `seed`.
    pub fn stream(seed: u64, index: u64) -> Self {
        Self::new(seed ^ splitmix64(index.wrapping_mul(2).wrapping_add(1)))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(XORSHIFT_MULTIPLIER)
    }

    /// Uniform in `0..n` by rejection; `n > 0`.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// Uniform in the closed range `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        let span = (hi as i128 - lo as i128 + 1) as u128;
        if span > u64::MAX as u128 {
            return self.next_u64() as i64;
        }
        (lo as i128 + self.below(span as u64) as i128) as i64
    }

    /// Numerator uniform in `[-num_bound, num_bound]`, denominator uniform
    /// in `[1, den_bound]`, reduced.
    pub fn rational(&mut self, num_bound: i64, den_bound: i64) -> Rational {
        let n = self.range_i64(-num_bound, num_bound);
        let d = self.range_i64(1, den_bound);
        Rational::new(n, d)
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}
