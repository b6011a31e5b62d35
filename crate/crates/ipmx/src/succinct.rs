//! Bit vectors with rank/select, step-function evaluators and sparse-set
//! locators: the three abstract components the per-level structures are
//! assembled from.

use crate::error::{Error, Result};

/// One 64-bit block of a bit vector together with the number of set bits
/// before it, so a rank query touches a single cache line.
#[derive(Debug, Clone, Copy, Default)]
struct BitCell {
    bits: u64,
    rank_before: u32,
}

/// Plain bit vector over positions `1..=len`; rank counters are
/// interleaved with the words, select binary-searches them.
#[derive(Debug, Clone, Default)]
pub struct BitVector {
    len: usize,
    cells: Vec<BitCell>,
    ones: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            len,
            cells: vec![BitCell::default(); len.div_ceil(64)],
            ones: 0,
        }
    }

    pub fn from_positions(len: usize, positions: impl IntoIterator<Item = usize>) -> Self {
        let mut bv = BitVector::zeros(len);
        for p in positions {
            bv.set(p);
        }
        bv.finish();
        bv
    }

    /// Set bit at 1-based position `i`. Only valid before `finish`.
    pub fn set(&mut self, i: usize) {
        debug_assert!(i >= 1 && i <= self.len);
        self.cells[(i - 1) >> 6].bits |= 1u64 << ((i - 1) & 63);
    }

    pub fn set_range(&mut self, lo: usize, hi: usize) {
        for i in lo..=hi {
            self.set(i);
        }
    }

    /// Builds the rank counters.
    pub fn finish(&mut self) {
        let mut acc = 0u32;
        for cell in &mut self.cells {
            cell.rank_before = acc;
            acc += cell.bits.count_ones();
        }
        self.ones = acc as usize;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i >= 1 && i <= self.len);
        self.cells[(i - 1) >> 6].bits >> ((i - 1) & 63) & 1 == 1
    }

    /// Number of set bits at positions `<= i`; `rank(0) = 0`.
    #[inline]
    pub fn rank(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        if i == 0 {
            return 0;
        }
        let cell = &self.cells[(i - 1) >> 6];
        let keep = (i - 1) & 63;
        cell.rank_before as usize + (cell.bits << (63 - keep)).count_ones() as usize
    }

    /// Position of the i-th set bit (1-based), or None past the last one.
    pub fn select(&self, i: usize) -> Option<usize> {
        if i == 0 || i > self.ones {
            return None;
        }
        let target = i as u32;
        // Last cell whose rank_before < target holds the bit.
        let w = self.cells.partition_point(|c| c.rank_before < target) - 1;
        let mut word = self.cells[w].bits;
        for _ in 1..target - self.cells[w].rank_before {
            word &= word - 1;
        }
        Some((w << 6) + word.trailing_zeros() as usize + 1)
    }

    /// Smallest set position `>= i`, equal to `select(rank(i-1) + 1)`.
    /// Nearby hits resolve by scanning a few cells; distant ones fall back
    /// to the rank/select route.
    #[inline]
    pub fn successor(&self, i: usize) -> Option<usize> {
        assert!(i >= 1 && i <= self.len, "successor query out of range");
        let mut w = (i - 1) >> 6;
        let mut masked = self.cells[w].bits & (u64::MAX << ((i - 1) & 63));
        let scan_end = (w + 4).min(self.cells.len());
        loop {
            if masked != 0 {
                return Some((w << 6) + masked.trailing_zeros() as usize + 1);
            }
            w += 1;
            if w >= scan_end {
                break;
            }
            masked = self.cells[w].bits;
        }
        if w >= self.cells.len() {
            return None;
        }
        self.select(self.rank(i - 1) + 1)
    }
}

/// Sorted-breakpoint encoding of a piecewise-constant map over
/// `[breakpoints[0], domain_end]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepFunction<V> {
    pub breakpoints: Vec<u32>,
    pub values: Vec<V>,
    pub domain_end: u32,
}

impl<V: Clone> StepFunction<V> {
    pub fn new(breakpoints: Vec<u32>, values: Vec<V>, domain_end: u32) -> Self {
        debug_assert_eq!(breakpoints.len(), values.len());
        debug_assert!(breakpoints.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(breakpoints.last().is_none_or(|&b| b <= domain_end));
        StepFunction {
            breakpoints,
            values,
            domain_end,
        }
    }

    pub fn size(&self) -> usize {
        self.breakpoints.len()
    }

    /// Direct evaluation by binary search (the evaluator is the O(1) path).
    pub fn eval(&self, i: usize) -> Option<&V> {
        if self.breakpoints.is_empty()
            || (i as u32) < self.breakpoints[0]
            || i as u32 > self.domain_end
        {
            return None;
        }
        let idx = self.breakpoints.partition_point(|&b| b <= i as u32) - 1;
        Some(&self.values[idx])
    }
}

/// Constant-time evaluation of a step function: a bit vector with ones at
/// the breakpoints plus the value array, queried through rank.
#[derive(Debug, Clone)]
pub struct Evaluator<V> {
    marks: BitVector,
    values: Vec<V>,
    first: u32,
    domain_end: u32,
}

impl<V: Clone> Evaluator<V> {
    pub fn build(step: &StepFunction<V>, universe: usize) -> Evaluator<V> {
        let marks =
            BitVector::from_positions(universe, step.breakpoints.iter().map(|&b| b as usize));
        Evaluator {
            marks,
            values: step.values.clone(),
            first: step.breakpoints.first().copied().unwrap_or(u32::MAX),
            domain_end: step.domain_end,
        }
    }

    /// `g(i)`; `i` must lie in the domain.
    #[inline]
    pub fn evaluate(&self, i: usize) -> Result<&V> {
        if (i as u32) < self.first || i as u32 > self.domain_end {
            return Err(Error::ConstraintViolation(
                "evaluator argument outside domain",
            ));
        }
        Ok(&self.values[self.marks.rank(i) - 1])
    }

    /// Number of stored steps.
    pub fn values_len(&self) -> usize {
        self.values.len()
    }
}

const EMPTY_KEY: u64 = u64::MAX;

#[derive(Debug, Clone, Copy)]
struct FlatEntry {
    key: u64,
    val: u32,
}

/// Open-addressing map from u64 keys to u32 values, duplicate keys
/// allowed, with a fixed multiplicative hash. A lookup walks the probe
/// chain until the first empty slot, so all values of a key are found;
/// the callers' sparsity arguments keep chains short.
#[derive(Debug, Clone, Default)]
pub struct FlatMultiMap {
    entries: Vec<FlatEntry>,
    mask: usize,
}

impl FlatMultiMap {
    pub fn with_capacity(entries: usize) -> Self {
        let cap = (entries * 2).next_power_of_two().max(8);
        FlatMultiMap { entries: vec![FlatEntry { key: EMPTY_KEY, val: 0 }; cap], mask: cap - 1 }
    }

    #[inline]
    fn slot(&self, key: u64) -> usize {
        (key.wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 32) as usize & self.mask
    }

    pub fn insert(&mut self, key: u64, value: u32) {
        debug_assert_ne!(key, EMPTY_KEY);
        let mut s = self.slot(key);
        while self.entries[s].key != EMPTY_KEY {
            s = (s + 1) & self.mask;
        }
        self.entries[s] = FlatEntry { key, val: value };
    }

    /// Calls `f` once per value stored under `key`.
    #[inline]
    pub fn for_each(&self, key: u64, mut f: impl FnMut(u32)) {
        let mut s = self.slot(key);
        loop {
            let e = self.entries[s];
            if e.key == key {
                f(e.val);
            } else if e.key == EMPTY_KEY {
                return;
            }
            s = (s + 1) & self.mask;
        }
    }
}

/// Locator over an indexed family of d-sparse position sets: hashing
/// (block, set index) pairs lets a range of length O(d) be answered with
/// O(1) probes. Blocks are 2d wide, so a key holds at most three
/// positions of one set.
#[derive(Debug, Clone)]
pub struct Locator {
    map: FlatMultiMap,
    d: usize,
    width: usize,
}

impl Locator {
    /// `entries` are (set index, position) pairs; every set must be
    /// d-sparse (pairwise gaps > d).
    pub fn build(entries: &[(u32, usize)], d: usize) -> Result<Locator> {
        let width = 2 * d.max(1);
        let mut sorted: Vec<(u32, usize)> = entries.to_vec();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            let ((ia, pa), (ib, pb)) = (w[0], w[1]);
            if ia == ib && pb - pa <= d {
                return Err(Error::SparsityViolation {
                    set: ia as usize,
                    a: pa,
                    b: pb,
                    d,
                });
            }
        }
        let mut map = FlatMultiMap::with_capacity(sorted.len());
        for (id, pos) in sorted {
            let block = pos.div_ceil(width);
            map.insert(((block as u64) << 32) | id as u64, pos as u32);
        }
        Ok(Locator { map, d, width })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `A_i ∩ [lo, hi]`, sorted, written into `out`. The range must have
    /// length O(d); the probe count is proportional to its block cover.
    pub fn locate_into(&self, set: u32, lo: usize, hi: usize, out: &mut Vec<usize>) {
        out.clear();
        if lo > hi || hi == 0 {
            return;
        }
        let lo = lo.max(1);
        let b_lo = lo.div_ceil(self.width);
        let b_hi = hi.div_ceil(self.width);
        for b in b_lo..=b_hi {
            self.map.for_each(((b as u64) << 32) | set as u64, |p| {
                let p = p as usize;
                if p >= lo && p <= hi {
                    out.push(p);
                }
            });
        }
        out.sort_unstable();
    }

    pub fn locate(&self, set: u32, lo: usize, hi: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.locate_into(set, lo, hi, &mut out);
        out
    }
}
