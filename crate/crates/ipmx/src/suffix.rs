//! Suffix array, LCP array and range-minimum machinery backing the
//! constant-time fragment comparisons.
//!
//! Everything in this file is 0-based; the public 1-based position
//! convention is applied one layer up, in `text`.

/// Suffix array by prefix doubling with radix sort, O(n log n).
///
/// Returns `(sa, rank)` where `sa[r]` is the 0-based start of the r-th
/// smallest suffix and `rank` is its inverse. Shorter suffixes sort before
/// their extensions, matching the implicit end-of-text sentinel convention.
pub fn suffix_array(text: &[u8]) -> (Vec<u32>, Vec<u32>) {
    let n = text.len();
    if n == 0 {
        return (Vec::new(), Vec::new());
    }
    if n == 1 {
        return (vec![0], vec![0]);
    }

    let mut rank: Vec<u32> = vec![0; n];
    let mut sa: Vec<u32> = (0..n as u32).collect();

    // Initial ranks from byte values (dense).
    {
        let mut count = [0usize; 257];
        for &b in text {
            count[b as usize + 1] += 1;
        }
        let mut r = 0u32;
        let mut map = [0u32; 256];
        for b in 0..256 {
            if count[b + 1] > 0 {
                map[b] = r;
                r += 1;
            }
        }
        for (i, &b) in text.iter().enumerate() {
            rank[i] = map[b as usize];
        }
    }

    let mut tmp_sa: Vec<u32> = vec![0; n];
    let mut new_rank: Vec<u32> = vec![0; n];
    let mut count: Vec<u32> = Vec::new();

    let mut k = 1usize;
    while k < n {
        let classes = (*rank.iter().max().unwrap() + 1) as usize;

        // Sort by second key: positions i with i + k >= n (empty second part,
        // smallest) first, then the rest ordered by rank of the tail.
        let mut idx = 0usize;
        for i in (n - k)..n {
            tmp_sa[idx] = i as u32;
            idx += 1;
        }
        // Stable pass over suffixes ordered by rank gives tail order.
        count.clear();
        count.resize(classes + 1, 0);
        for &r in rank.iter() {
            count[r as usize + 1] += 1;
        }
        for c in 1..=classes {
            count[c] += count[c - 1];
        }
        // Order positions by rank via counting sort.
        {
            let mut by_rank = vec![0u32; n];
            let mut offs = count.clone();
            for i in 0..n {
                let r = rank[i] as usize;
                by_rank[offs[r] as usize] = i as u32;
                offs[r] += 1;
            }
            for &pos in by_rank.iter() {
                if pos as usize >= k {
                    tmp_sa[idx] = pos - k as u32;
                    idx += 1;
                }
            }
        }

        // Sort by first key (stable counting sort on rank of the head).
        {
            let mut offs = count;
            for &pos in tmp_sa.iter() {
                let r = rank[pos as usize] as usize;
                sa[offs[r] as usize] = pos;
                offs[r] += 1;
            }
            count = offs;
        }

        // Re-rank.
        new_rank[sa[0] as usize] = 0;
        let mut r = 0u32;
        for w in 1..n {
            let a = sa[w - 1] as usize;
            let b = sa[w] as usize;
            let head_equal = rank[a] == rank[b];
            let tail_a = if a + k < n { rank[a + k] as i64 } else { -1 };
            let tail_b = if b + k < n { rank[b + k] as i64 } else { -1 };
            if !(head_equal && tail_a == tail_b) {
                r += 1;
            }
            new_rank[b] = r;
        }
        std::mem::swap(&mut rank, &mut new_rank);
        if r as usize == n - 1 {
            break;
        }
        k <<= 1;
    }

    // Ensure sa matches rank even when we broke out early.
    for (i, &r) in rank.iter().enumerate() {
        sa[r as usize] = i as u32;
    }
    (sa, rank)
}

/// Kasai's algorithm. `lcp[r]` (r >= 1) is the longest common prefix of the
/// suffixes at sa ranks `r-1` and `r`; `lcp[0] = 0`.
pub fn lcp_array(text: &[u8], sa: &[u32], rank: &[u32]) -> Vec<u32> {
    let n = text.len();
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r == 0 {
            h = 0;
            continue;
        }
        let j = sa[r - 1] as usize;
        while i + h < n && j + h < n && text[i + h] == text[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

const BLOCK: usize = 64;

/// Range-minimum structure with O(1) queries and O(n) words:
/// a sparse table over per-block minima plus in-block monotone masks.
#[derive(Debug, Clone, Default)]
pub struct Rmq {
    vals: Vec<u32>,
    masks: Vec<u64>,
    sparse: Vec<u32>,
    blocks: usize,
}

impl Rmq {
    pub fn new(vals: Vec<u32>) -> Self {
        let n = vals.len();
        if n == 0 {
            return Rmq::default();
        }
        let mut masks = vec![0u64; n];
        let mut mask: u64 = 0;
        for i in (0..n).rev() {
            mask <<= 1;
            // Drop positions holding values larger than vals[i]; they can
            // never be the minimum of a window that includes i.
            while mask != 0 {
                let j = i + mask.trailing_zeros() as usize;
                if vals[j] > vals[i] {
                    mask &= mask - 1;
                } else {
                    break;
                }
            }
            mask |= 1;
            masks[i] = mask;
        }

        let blocks = n.div_ceil(BLOCK);
        let mins: Vec<u32> = (0..blocks)
            .map(|b| {
                let lo = b * BLOCK;
                let hi = (lo + BLOCK).min(n);
                *vals[lo..hi].iter().min().unwrap()
            })
            .collect();
        let levels = if blocks <= 1 {
            1
        } else {
            blocks.ilog2() as usize + 1
        };
        let mut sparse = vec![u32::MAX; blocks * levels];
        sparse[..blocks].copy_from_slice(&mins);
        for l in 1..levels {
            let half = 1usize << (l - 1);
            for b in 0..blocks {
                let lo = sparse[(l - 1) * blocks + b];
                let hi = if b + half < blocks {
                    sparse[(l - 1) * blocks + b + half]
                } else {
                    u32::MAX
                };
                sparse[l * blocks + b] = lo.min(hi);
            }
        }
        Rmq {
            vals,
            masks,
            sparse,
            blocks,
        }
    }

    #[inline]
    fn mask_min(&self, pos: usize, width: usize) -> u32 {
        let bitmask = if width >= BLOCK {
            u64::MAX
        } else {
            (1u64 << width) - 1
        };
        let m = self.masks[pos] & bitmask;
        let offset = 63 - m.leading_zeros() as usize;
        self.vals[pos + offset]
    }

    /// Minimum of `vals[l..=r]`.
    #[inline]
    pub fn min(&self, l: usize, r: usize) -> u32 {
        debug_assert!(l <= r && r < self.vals.len());
        let len = r - l + 1;
        if len <= BLOCK {
            return self.mask_min(l, len);
        }
        let ends = self
            .mask_min(l, BLOCK)
            .min(self.mask_min(r + 1 - BLOCK, BLOCK));
        let bl = l.div_ceil(BLOCK);
        let br = (r + 1) / BLOCK;
        if bl >= br {
            return ends;
        }
        let level = (br - bl).ilog2() as usize;
        let span = 1usize << level;
        let inner =
            self.sparse[level * self.blocks + bl].min(self.sparse[level * self.blocks + br - span]);
        ends.min(inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_sa(text: &[u8]) -> Vec<u32> {
        let mut sa: Vec<u32> = (0..text.len() as u32).collect();
        sa.sort_by(|&a, &b| text[a as usize..].cmp(&text[b as usize..]));
        sa
    }

    #[test]
    fn doubling_matches_brute_force() {
        let words: Vec<&[u8]> = vec![
            b"banana",
            b"a",
            b"aaa",
            b"abab",
            b"mississippi",
            b"cabacabcbacbcabcbaca",
            b"zyxzyxzyx",
        ];
        for w in words {
            let (sa, rank) = suffix_array(w);
            assert_eq!(sa, brute_sa(w), "word {:?}", String::from_utf8_lossy(w));
            for (i, &r) in rank.iter().enumerate() {
                assert_eq!(sa[r as usize] as usize, i);
            }
        }
    }

    #[test]
    fn doubling_matches_brute_force_random() {
        let mut state = 0x1234u64;
        for trial in 0..200 {
            let n = 1 + (crate::rng::splitmix64(&mut state) % 80) as usize;
            let sigma = [2u64, 3, 26][trial % 3];
            let text: Vec<u8> = (0..n)
                .map(|_| b'a' + (crate::rng::splitmix64(&mut state) % sigma) as u8)
                .collect();
            let (sa, _) = suffix_array(&text);
            assert_eq!(sa, brute_sa(&text));
        }
    }

    #[test]
    fn kasai_and_rmq_match_scans() {
        let mut state = 99u64;
        for _ in 0..100 {
            let n = 2 + (crate::rng::splitmix64(&mut state) % 60) as usize;
            let text: Vec<u8> = (0..n)
                .map(|_| b'a' + (crate::rng::splitmix64(&mut state) % 3) as u8)
                .collect();
            let (sa, rank) = suffix_array(&text);
            let lcp = lcp_array(&text, &sa, &rank);
            for r in 1..n {
                let a = &text[sa[r - 1] as usize..];
                let b = &text[sa[r] as usize..];
                let l = a.iter().zip(b).take_while(|(x, y)| x == y).count();
                assert_eq!(lcp[r] as usize, l);
            }
            let rmq = Rmq::new(lcp.clone());
            for l in 0..n {
                for r in l..n {
                    let want = *lcp[l..=r].iter().min().unwrap();
                    assert_eq!(rmq.min(l, r), want);
                }
            }
        }
    }

    #[test]
    fn rmq_large_blocks() {
        let mut state = 5u64;
        let vals: Vec<u32> = (0..1000)
            .map(|_| (crate::rng::splitmix64(&mut state) % 50) as u32)
            .collect();
        let rmq = Rmq::new(vals.clone());
        for l in (0..1000).step_by(7) {
            for r in (l..1000).step_by(13) {
                assert_eq!(rmq.min(l, r), *vals[l..=r].iter().min().unwrap());
            }
        }
    }
}
