//! Small deterministic PRNG used for the per-level permutations.
//!
//! The index is contractually reproducible: the same (text, seed, config)
//! must yield a bit-identical structure on every build, on every platform.
//! A hand-rolled generator pins that behaviour down; a library generator
//! could change its stream between versions.

/// splitmix64 step, used for seeding and cheap mixing.
#[inline]
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// xoshiro256++ with splitmix64 seeding.
#[derive(Debug, Clone)]
pub struct Rng {
    s: [u64; 4],
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let mut st = seed;
        let s = [
            splitmix64(&mut st),
            splitmix64(&mut st),
            splitmix64(&mut st),
            splitmix64(&mut st),
        ];
        Rng { s }
    }

    /// Independent stream for retry attempt `attempt` of a build with `seed`.
    pub fn for_attempt(seed: u64, attempt: u32) -> Self {
        let mut st = seed ^ (attempt as u64).wrapping_mul(0xA076_1D64_78BD_642F);
        let _ = splitmix64(&mut st);
        Rng::new(splitmix64(&mut st))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        let result = (self.s[0].wrapping_add(self.s[3]))
            .rotate_left(23)
            .wrapping_add(self.s[0]);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform value in `[0, bound)` by rejection sampling.
    #[inline]
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        // Zone-based rejection keeps the distribution exactly uniform.
        let zone = u64::MAX - (u64::MAX % bound + 1) % bound;
        loop {
            let v = self.next_u64();
            if v <= zone {
                return v % bound;
            }
        }
    }

    pub fn range(&mut self, lo: usize, hi_inclusive: usize) -> usize {
        lo + self.below((hi_inclusive - lo + 1) as u64) as usize
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below((i + 1) as u64) as usize;
            xs.swap(i, j);
        }
    }

    /// A uniformly random permutation of `[1, m]`, as a lookup table
    /// `perm[v] = π(v)` with index 0 unused.
    pub fn permutation_1based(&mut self, m: usize) -> Vec<u32> {
        let mut image: Vec<u32> = (1..=m as u32).collect();
        self.shuffle(&mut image);
        let mut perm = vec![0u32; m + 1];
        perm[1..].copy_from_slice(&image);
        perm
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_streams() {
        let mut a = Rng::new(42);
        let mut b = Rng::new(42);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut c = Rng::new(43);
        assert_ne!(a.next_u64(), c.next_u64());
    }

    #[test]
    fn permutation_is_a_bijection() {
        let mut rng = Rng::new(7);
        for m in [1usize, 2, 10, 257] {
            let p = rng.permutation_1based(m);
            let mut seen = vec![false; m + 1];
            for v in 1..=m {
                let img = p[v] as usize;
                assert!((1..=m).contains(&img));
                assert!(!seen[img]);
                seen[img] = true;
            }
        }
    }

    #[test]
    fn below_stays_in_bounds() {
        let mut rng = Rng::new(3);
        for bound in [1u64, 2, 3, 7, 100] {
            for _ in 0..200 {
                assert!(rng.below(bound) < bound);
            }
        }
    }
}
