//! Wavelet matrix over a sequence of integers, supporting the counting
//! queries that range-successor and range-predecessor reduce to.

use crate::succinct::BitVector;

/// Wavelet matrix of a sequence `vals[0..n)` of values in `[0, sigma)`.
#[derive(Debug, Clone)]
pub struct WaveletMatrix {
    levels: Vec<BitVector>,
    zeros: Vec<usize>,
    n: usize,
    bits: u32,
}

impl WaveletMatrix {
    pub fn new(vals: &[u32]) -> WaveletMatrix {
        let n = vals.len();
        let max = vals.iter().copied().max().unwrap_or(0);
        let bits = (32 - max.leading_zeros()).max(1);
        let mut levels = Vec::with_capacity(bits as usize);
        let mut zeros = Vec::with_capacity(bits as usize);
        let mut cur: Vec<u32> = vals.to_vec();
        let mut next: Vec<u32> = Vec::with_capacity(n);
        for level in 0..bits {
            let shift = bits - 1 - level;
            let mut bv = BitVector::zeros(n);
            let mut zero_count = 0usize;
            for (i, &v) in cur.iter().enumerate() {
                if v >> shift & 1 == 1 {
                    bv.set(i + 1);
                } else {
                    zero_count += 1;
                }
            }
            bv.finish();
            next.clear();
            next.extend(cur.iter().copied().filter(|v| v >> shift & 1 == 0));
            next.extend(cur.iter().copied().filter(|v| v >> shift & 1 == 1));
            std::mem::swap(&mut cur, &mut next);
            levels.push(bv);
            zeros.push(zero_count);
        }
        WaveletMatrix {
            levels,
            zeros,
            n,
            bits,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of entries in positions `[l, r)` (0-based) with value < v.
    pub fn count_below(&self, mut l: usize, mut r: usize, v: u32) -> usize {
        if l >= r {
            return 0;
        }
        if (v as u64) >> self.bits > 0 {
            return r - l;
        }
        let mut acc = 0usize;
        for (level, bv) in self.levels.iter().enumerate() {
            let shift = self.bits - 1 - level as u32;
            let ones_l = bv.rank(l);
            let ones_r = bv.rank(r);
            if v >> shift & 1 == 1 {
                // Everything that went left here is below v.
                acc += (r - l) - (ones_r - ones_l);
                l = self.zeros[level] + ones_l;
                r = self.zeros[level] + ones_r;
            } else {
                l -= ones_l;
                r -= ones_r;
            }
            if l >= r {
                break;
            }
        }
        acc
    }

    /// The k-th smallest value (k 0-based) among positions `[l, r)`.
    pub fn quantile(&self, mut l: usize, mut r: usize, mut k: usize) -> u32 {
        debug_assert!(k < r - l);
        let mut value = 0u32;
        for (level, bv) in self.levels.iter().enumerate() {
            let ones_l = bv.rank(l);
            let ones_r = bv.rank(r);
            let zeros_here = (r - l) - (ones_r - ones_l);
            if k < zeros_here {
                l -= ones_l;
                r -= ones_r;
            } else {
                k -= zeros_here;
                value |= 1 << (self.bits - 1 - level as u32);
                l = self.zeros[level] + ones_l;
                r = self.zeros[level] + ones_r;
            }
        }
        value
    }

    /// Smallest value >= v among positions `[l, r)`.
    pub fn successor_value(&self, l: usize, r: usize, v: u32) -> Option<u32> {
        if l >= r {
            return None;
        }
        let below = self.count_below(l, r, v);
        if below == r - l {
            None
        } else {
            Some(self.quantile(l, r, below))
        }
    }

    /// Largest value <= v among positions `[l, r)`.
    pub fn predecessor_value(&self, l: usize, r: usize, v: u32) -> Option<u32> {
        if l >= r {
            return None;
        }
        let not_above = if v == u32::MAX {
            r - l
        } else {
            self.count_below(l, r, v + 1)
        };
        if not_above == 0 {
            None
        } else {
            Some(self.quantile(l, r, not_above - 1))
        }
    }

    /// Number of entries in `[l, r)` with value in `[a, b]`.
    pub fn count_in(&self, l: usize, r: usize, a: u32, b: u32) -> usize {
        if l >= r || a > b {
            return 0;
        }
        let hi = if b == u32::MAX {
            r - l
        } else {
            self.count_below(l, r, b + 1)
        };
        hi - self.count_below(l, r, a)
    }

    /// Leftmost position in `[l, r)` whose value lies in `[a, b]`, by
    /// binary search over counting queries.
    pub fn first_position_in(&self, l: usize, r: usize, a: u32, b: u32) -> Option<usize> {
        if self.count_in(l, r, a, b) == 0 {
            return None;
        }
        let (mut lo, mut hi) = (l + 1, r); // smallest prefix end with a hit
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.count_in(l, mid, a, b) > 0 {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        Some(lo - 1)
    }
}
