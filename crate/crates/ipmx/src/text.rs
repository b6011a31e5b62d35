//! Host text, the 1-based position convention, fragment comparisons and
//! arithmetic-progression algebra.
//!
//! All public positions are 1-based and inclusive: the fragment `[i, j]`
//! is the occurrence of the subword spanning positions `i..=j` of the text.

use crate::error::{Error, Result};
use crate::suffix::{lcp_array, suffix_array, Rmq};

/// The indexed word. Bytes are the alphabet; queries address its subwords
/// by position only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Text {
    bytes: Vec<u8>,
}

impl Text {
    pub fn new(bytes: Vec<u8>) -> Result<Self> {
        if bytes.is_empty() {
            return Err(Error::EmptyText);
        }
        Ok(Text { bytes })
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Byte at 1-based position `i`.
    #[inline]
    pub fn at(&self, i: usize) -> u8 {
        self.bytes[i - 1]
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Word value of a fragment.
    pub fn word(&self, frag: Fragment) -> &[u8] {
        &self.bytes[frag.start - 1..frag.end]
    }

    pub fn check_fragment(&self, frag: Fragment) -> Result<()> {
        if frag.start >= 1 && frag.start <= frag.end && frag.end <= self.len() {
            Ok(())
        } else {
            Err(Error::FragmentOutOfBounds {
                start: frag.start,
                end: frag.end,
                n: self.len(),
            })
        }
    }
}

/// A subword occurrence: a 1-based inclusive position interval of the host
/// text. Always non-empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fragment {
    pub start: usize,
    pub end: usize,
}

impl Fragment {
    #[inline]
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start >= 1 && start <= end);
        Fragment { start, end }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    /// The k-basic fragment starting at `i`.
    #[inline]
    pub fn basic(i: usize, k: u32) -> Self {
        Fragment::new(i, i + (1usize << k) - 1)
    }

    #[inline]
    pub fn contains(&self, other: Fragment) -> bool {
        self.start <= other.start && other.end <= self.end
    }

    pub fn intersect(&self, other: Fragment) -> Option<Fragment> {
        let s = self.start.max(other.start);
        let e = self.end.min(other.end);
        (s <= e).then(|| Fragment::new(s, e))
    }
}

/// `{first + t*diff : 0 <= t < count}` in canonical form: `count == 0`
/// encodes the empty set as (0,0,0), and `diff == 0` whenever `count <= 1`,
/// so equal sets compare equal bitwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ArithProgression {
    pub first: usize,
    pub diff: usize,
    pub count: usize,
}

impl ArithProgression {
    pub const EMPTY: ArithProgression = ArithProgression {
        first: 0,
        diff: 0,
        count: 0,
    };

    pub fn new(first: usize, diff: usize, count: usize) -> Self {
        if count == 0 {
            ArithProgression::EMPTY
        } else if count == 1 {
            ArithProgression {
                first,
                diff: 0,
                count: 1,
            }
        } else {
            ArithProgression { first, diff, count }
        }
    }

    pub fn singleton(v: usize) -> Self {
        ArithProgression::new(v, 0, 1)
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn last(&self) -> usize {
        debug_assert!(self.count > 0);
        self.first + self.diff * (self.count - 1)
    }

    pub fn contains(&self, v: usize) -> bool {
        if self.count == 0 || v < self.first {
            return false;
        }
        if self.diff == 0 {
            return v == self.first;
        }
        let d = v - self.first;
        d % self.diff == 0 && d / self.diff < self.count
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.count).map(move |t| self.first + t * self.diff)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Restriction to `[lo, hi]`, which is again a progression.
    pub fn clip(&self, lo: usize, hi: usize) -> ArithProgression {
        if self.count == 0 || lo > hi || self.last() < lo || self.first > hi {
            return ArithProgression::EMPTY;
        }
        if self.diff == 0 {
            return *self;
        }
        let skip = if self.first >= lo {
            0
        } else {
            (lo - self.first).div_ceil(self.diff)
        };
        let first = self.first + skip * self.diff;
        if first > hi {
            return ArithProgression::EMPTY;
        }
        let count = (hi - first) / self.diff + 1;
        ArithProgression::new(first, self.diff, count.min(self.count - skip))
    }

    /// Canonicalizes a strictly increasing list of hits, which must form a
    /// single progression.
    pub fn from_hits(hits: &[usize]) -> Result<ArithProgression> {
        match hits.len() {
            0 => Ok(ArithProgression::EMPTY),
            1 => Ok(ArithProgression::singleton(hits[0])),
            _ => {
                let diff = hits[1] - hits[0];
                for w in hits.windows(2) {
                    if w[1] - w[0] != diff || diff == 0 {
                        return Err(Error::ChainViolation("hits do not form a progression"));
                    }
                }
                Ok(ArithProgression::new(hits[0], diff, hits.len()))
            }
        }
    }
}

/// Merges progressions whose union is guaranteed by the occurrence
/// structure to be a single progression.
///
/// Parts must be sorted and non-overlapping, each with difference 0 or
/// `per_hint`; once the merged result holds two or more elements its
/// difference is established and every later gap must match it. A failure
/// signals an internal bug and is surfaced as `ChainViolation`.
pub fn merge_progressions(parts: &[ArithProgression], per_hint: usize) -> Result<ArithProgression> {
    let mut acc = ArithProgression::EMPTY;
    for &p in parts {
        if p.count == 0 {
            continue;
        }
        if p.count >= 2 && p.diff != per_hint {
            return Err(Error::ChainViolation(
                "part difference disagrees with period",
            ));
        }
        if acc.count == 0 {
            acc = p;
            continue;
        }
        if p.first <= acc.last() {
            return Err(Error::ChainViolation("parts overlap or are unsorted"));
        }
        let gap = p.first - acc.last();
        let merged_diff = if acc.count >= 2 {
            acc.diff
        } else if p.count >= 2 {
            p.diff
        } else {
            gap
        };
        if (acc.count >= 2 && gap != merged_diff)
            || (p.count >= 2 && (gap != p.diff || (acc.count >= 2 && acc.diff != p.diff)))
        {
            return Err(Error::ChainViolation(
                "parts do not chain into one progression",
            ));
        }
        acc = ArithProgression::new(acc.first, merged_diff, acc.count + p.count);
    }
    Ok(acc)
}

/// Suffix array with its inverse, the LCP table and a range-minimum
/// structure over it: the toolbox answering longest-common-prefix queries
/// about fragments in constant time.
#[derive(Debug, Clone)]
pub struct TextIndex {
    n: usize,
    sa: Vec<u32>,
    isa: Vec<u32>,
    lcp: Vec<u32>,
    rmq: Rmq,
}

impl TextIndex {
    pub fn build(t: &Text) -> TextIndex {
        let (sa, isa) = suffix_array(t.bytes());
        let lcp = lcp_array(t.bytes(), &sa, &isa);
        let rmq = Rmq::new(lcp.clone());
        TextIndex {
            n: t.len(),
            sa,
            isa,
            lcp,
            rmq,
        }
    }

    /// Rebuilds the derived tables from a stored suffix array.
    pub(crate) fn from_parts(t: &Text, sa: Vec<u32>) -> TextIndex {
        let n = t.len();
        let mut isa = vec![0u32; n];
        for (r, &p) in sa.iter().enumerate() {
            isa[p as usize] = r as u32;
        }
        let lcp = lcp_array(t.bytes(), &sa, &isa);
        let rmq = Rmq::new(lcp.clone());
        TextIndex {
            n,
            sa,
            isa,
            lcp,
            rmq,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// 1-based suffix array: position of the suffix with rank `r` (1-based).
    pub fn sa1(&self, r: usize) -> usize {
        self.sa[r - 1] as usize + 1
    }

    /// 1-based rank of the suffix starting at position `i`.
    pub fn rank1(&self, i: usize) -> usize {
        self.isa[i - 1] as usize + 1
    }

    pub(crate) fn isa0(&self) -> &[u32] {
        &self.isa
    }

    /// `lcp[r]` for 1-based rank pairs (r-1, r): kept for tests.
    pub fn lcp_at_rank(&self, r: usize) -> usize {
        self.lcp[r - 1] as usize
    }

    /// Longest common prefix of the suffixes starting at 1-based `i` and `j`.
    #[inline]
    pub fn lcp_suffixes(&self, i: usize, j: usize) -> usize {
        if i == j {
            return self.n - i + 1;
        }
        let (mut a, mut b) = (self.isa[i - 1], self.isa[j - 1]);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        self.rmq.min(a as usize + 1, b as usize) as usize
    }

    /// Longest common prefix of two single fragments.
    #[inline]
    pub fn lcp_fragments_single(&self, x: Fragment, y: Fragment) -> usize {
        self.lcp_suffixes(x.start, y.start)
            .min(x.len())
            .min(y.len())
    }

    /// Tests equality of two single fragments.
    #[inline]
    pub fn fragments_equal_single(&self, x: Fragment, y: Fragment) -> bool {
        x.len() == y.len() && self.lcp_fragments_single(x, y) == x.len()
    }
}

/// Equality of two equal-length single fragments; short ones compare
/// bytes directly, longer ones go through the lcp toolbox.
#[inline]
pub fn fragments_equal_fast(t: &Text, ix: &TextIndex, a: Fragment, b: Fragment) -> bool {
    debug_assert_eq!(a.len(), b.len());
    if a.len() <= 64 {
        t.bytes()[a.start - 1..a.end] == t.bytes()[b.start - 1..b.end]
    } else {
        ix.fragments_equal_single(a, b)
    }
}

/// Longest common prefix of two words, each given as a concatenation of at
/// most three fragments of the host text.
pub fn lcp_fragments(ix: &TextIndex, xs: &[Fragment], ys: &[Fragment]) -> usize {
    debug_assert!(xs.len() <= 3 && ys.len() <= 3);
    let mut total = 0usize;
    let mut xi = 0usize; // piece index
    let mut xo = 0usize; // offset consumed within current piece
    let mut yi = 0usize;
    let mut yo = 0usize;
    loop {
        if xi == xs.len() || yi == ys.len() {
            return total;
        }
        let xp = xs[xi];
        let yp = ys[yi];
        let xrem = xp.len() - xo;
        let yrem = yp.len() - yo;
        let l = ix
            .lcp_suffixes(xp.start + xo, yp.start + yo)
            .min(xrem)
            .min(yrem);
        total += l;
        xo += l;
        yo += l;
        if xo == xp.len() {
            xi += 1;
            xo = 0;
        }
        if yo == yp.len() {
            yi += 1;
            yo = 0;
        }
        if l < xrem && l < yrem {
            // Mismatch strictly inside both pieces.
            return total;
        }
    }
}

/// Equality of two fragment-concatenations.
pub fn fragments_equal(ix: &TextIndex, xs: &[Fragment], ys: &[Fragment]) -> bool {
    let xl: usize = xs.iter().map(|f| f.len()).sum();
    let yl: usize = ys.iter().map(|f| f.len()).sum();
    xl == yl && lcp_fragments(ix, xs, ys) == xl
}

/// Length of the longest prefix of the concatenation `xs` that has period
/// `p`: equals `p + lcp(x, x[p+1..])`, capped at `|x|`.
pub fn longest_prefix_with_period(ix: &TextIndex, xs: &[Fragment], p: usize) -> Result<usize> {
    let total: usize = xs.iter().map(|f| f.len()).sum();
    if p == 0 || p > total {
        return Err(Error::ConstraintViolation(
            "period must satisfy 1 <= p <= |x|",
        ));
    }
    // Drop p symbols from the front of the concatenation.
    let mut shifted: Vec<Fragment> = Vec::with_capacity(xs.len());
    let mut to_drop = p;
    for &f in xs {
        if to_drop >= f.len() {
            to_drop -= f.len();
        } else {
            shifted.push(Fragment::new(f.start + to_drop, f.end));
            to_drop = 0;
        }
    }
    if shifted.is_empty() {
        return Ok(total); // p == |x|
    }
    Ok((p + lcp_fragments(ix, xs, &shifted)).min(total))
}
