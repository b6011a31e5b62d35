//! Substring-compression queries: range-successor plumbing over suffix
//! ranks, interval-LCP and occurrence decisions, bounded longest common
//! prefix, and the LZ77 parse of one subword against another as context.

use crate::error::Result;
use crate::index::IpmIndex;
use crate::text::{lcp_fragments, longest_prefix_with_period, Fragment, TextIndex};
use crate::wavelet::WaveletMatrix;

/// Static structure over the points (position, suffix rank) answering
/// range-successor and range-predecessor queries in rank space, plus
/// leftmost-position queries, all in O(log n) per probe.
#[derive(Debug, Clone)]
pub struct RangeSuccessorIndex {
    wm: WaveletMatrix,
}

impl RangeSuccessorIndex {
    pub fn build(tix: &TextIndex) -> RangeSuccessorIndex {
        RangeSuccessorIndex {
            wm: WaveletMatrix::new(tix.isa0()),
        }
    }

    /// Smallest suffix rank >= `rank` among 1-based positions [lo, hi].
    pub fn successor_rank(&self, lo: usize, hi: usize, rank: u32) -> Option<u32> {
        if lo > hi || lo < 1 {
            return None;
        }
        self.wm.successor_value(lo - 1, hi.min(self.wm.len()), rank)
    }

    /// Largest suffix rank <= `rank` among 1-based positions [lo, hi].
    pub fn predecessor_rank(&self, lo: usize, hi: usize, rank: u32) -> Option<u32> {
        if lo > hi || lo < 1 {
            return None;
        }
        self.wm
            .predecessor_value(lo - 1, hi.min(self.wm.len()), rank)
    }

    /// Leftmost 1-based position in [lo, hi] whose suffix rank lies in
    /// [rank_lo, rank_hi].
    pub fn first_position_with_rank_in(
        &self,
        lo: usize,
        hi: usize,
        rank_lo: u32,
        rank_hi: u32,
    ) -> Option<usize> {
        if lo > hi || lo < 1 {
            return None;
        }
        self.wm
            .first_position_in(lo - 1, hi.min(self.wm.len()), rank_lo, rank_hi)
            .map(|p| p + 1)
    }
}

/// Maximal 0-based rank interval of suffixes having word(frag) as a
/// prefix, by binary search with O(1) lcp probes per comparison.
pub fn sa_interval(tix: &TextIndex, text: &crate::text::Text, frag: Fragment) -> (u32, u32) {
    let n = tix.len();
    let flen = frag.len();
    // -1: suffix < frag (as prefix), 0: frag is a prefix, 1: suffix > frag.
    let cmp = |rank0: usize| -> i32 {
        let s1 = tix.sa1(rank0 + 1);
        let l = tix.lcp_suffixes(s1, frag.start).min(flen);
        if l >= flen {
            return 0;
        }
        if s1 + l > n {
            return -1; // suffix exhausted: it is a proper prefix of word(frag)
        }
        if text.at(s1 + l) < text.at(frag.start + l) {
            -1
        } else {
            1
        }
    };
    let lo = partition(n, |r| cmp(r) < 0);
    let hi = partition(n, |r| cmp(r) <= 0);
    debug_assert!(lo < hi, "fragment must occur in its own text");
    (lo as u32, hi as u32 - 1)
}

fn partition(n: usize, pred: impl Fn(usize) -> bool) -> usize {
    let mut lo = 0usize;
    let mut hi = n;
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Whether word(x) occurs inside y: one range-successor probe against the
/// suffix-array interval of x.
pub fn occurs_in(ix: &IpmIndex, x: Fragment, y: Fragment) -> bool {
    if x.len() > y.len() {
        return false;
    }
    let (rlo, rhi) = sa_interval(ix.text_index(), ix.text(), x);
    match ix
        .range_successor()
        .successor_rank(y.start, y.end - x.len() + 1, rlo)
    {
        Some(r) => r <= rhi,
        None => false,
    }
}

/// Longest prefix of x occurring at some text position t in [lo, hi],
/// with a witness position realizing it. The two rank neighbours of x's
/// own suffix are the only candidates that can maximize the lcp.
pub fn ilcp(ix: &IpmIndex, lo: usize, hi: usize, x: Fragment) -> (usize, Option<usize>) {
    if lo > hi || lo < 1 || hi > ix.text().len() {
        return (0, None);
    }
    let tix = ix.text_index();
    let rx = tix.rank1(x.start) as u32 - 1;
    let rs = ix.range_successor();
    let mut best = 0usize;
    let mut witness = None;
    for cand in [
        rs.predecessor_rank(lo, hi, rx),
        rs.successor_rank(lo, hi, rx),
    ] {
        let Some(r) = cand else { continue };
        let pos = tix.sa1(r as usize + 1);
        let l = tix.lcp_suffixes(pos, x.start).min(x.len());
        if witness.is_none() || l > best {
            best = l;
            witness = Some(pos);
        }
    }
    (best, witness)
}

/// Longest prefix of x that is a subword of y, with a witness start in y.
///
/// Exponential-then-binary search over prefix lengths 2^k brackets the
/// answer; one interval-LCP query catches occurrences that fit before the
/// final stretch of y, and a period analysis of the last window reduces
/// the near-end case to at most two verified candidates.
pub fn blcp(ix: &IpmIndex, x: Fragment, y: Fragment) -> Result<(usize, Option<usize>)> {
    let cap = x.len().min(y.len());
    let prefix = |len: usize| Fragment::new(x.start, x.start + len - 1);
    let occ = |len: usize| occurs_in(ix, prefix(len), y);
    if !occ(1) {
        return Ok((0, None));
    }
    if cap == 1 {
        let (l, w) = ilcp(ix, y.start, y.end, prefix(1));
        debug_assert_eq!(l, 1);
        return Ok((l, w));
    }

    // Gallop on the exponent, then binary search the failing gap. Lengths
    // beyond the cap cannot occur, so the cap ceiling acts as a failure.
    let max_k = cap.ilog2();
    let mut k_lo = 0u32; // occ(2^k_lo) holds
    let mut k_hi = max_k + 1; // smallest failing exponent (or cap ceiling)
    let mut step = 1u32;
    while k_lo + step < k_hi {
        let k = k_lo + step;
        if occ(1usize << k) {
            k_lo = k;
            step *= 2;
        } else {
            k_hi = k;
            break;
        }
    }
    while k_hi - k_lo > 1 {
        let mid = (k_lo + k_hi) / 2;
        if occ(1usize << mid) {
            k_lo = mid;
        } else {
            k_hi = mid;
        }
    }
    let big_k = k_lo;
    let window = 1usize << (big_k + 1); // answer < 2^(K+1) unless capped

    let mut best = 0usize;
    let mut witness = None;
    // Occurrences starting early enough leave room for the whole bracket:
    // a tight bracket keeps their lengths under 2^(K+1), inside y.
    if y.end >= window && y.start <= y.end - window {
        let (l, w) = ilcp(ix, y.start, y.end - window, x);
        let room = w.map_or(0, |t| y.end - t + 1);
        debug_assert!(l.min(cap) <= room);
        best = l.min(cap).min(room);
        witness = w;
    }
    let (l, w) = near_end_best(ix, x, y, 1usize << big_k)?;
    if l.min(cap) > best {
        best = l.min(cap);
        witness = w;
    }
    debug_assert!(best >= (1usize << big_k));
    Ok((best, witness))
}

/// Longest prefix of x occurring in y with the occurrence starting in the
/// final min(2d, |y|) window, given that the d-prefix of x does occur
/// somewhere in y.
fn near_end_best(
    ix: &IpmIndex,
    x: Fragment,
    y: Fragment,
    d: usize,
) -> Result<(usize, Option<usize>)> {
    let tix = ix.text_index();
    let x_prefix = Fragment::new(x.start, x.start + d - 1);
    let y_tail_len = (2 * d).min(y.len());
    let y_tail = Fragment::new(y.end - y_tail_len + 1, y.end);
    let occs = ix.ipm_query(x_prefix, y_tail)?;

    let measure = |t: usize| -> usize { lcp_fragments(tix, &[Fragment::new(t, y.end)], &[x]) };
    let mut best = 0usize;
    let mut witness = None;
    let consider = |t: usize, best: &mut usize, witness: &mut Option<usize>| {
        let l = measure(t);
        if witness.is_none() || l > *best {
            *best = l;
            *witness = Some(t);
        }
    };
    if occs.count <= 2 {
        for t in occs.iter() {
            consider(t, &mut best, &mut witness);
        }
        return Ok((best, witness));
    }
    // Three or more occurrences: the prefix is periodic with period q and
    // only the first occurrence and the one aligning the period breaks can
    // win.
    let q = occs.diff;
    let t1 = occs.first;
    let d_prime = longest_prefix_with_period(tix, &[x], q)?;
    let d1 = longest_prefix_with_period(tix, &[Fragment::new(t1, y.end)], q)?;
    consider(t1, &mut best, &mut witness);
    if d1 >= d_prime && (d1 - d_prime) % q == 0 {
        let i = (d1 - d_prime) / q; // 0-based index into the progression
        if i < occs.count {
            consider(t1 + i * q, &mut best, &mut witness);
        }
    }
    Ok((best, witness))
}

/// One phrase of the LZ77 parse of x relative to the virtual string y$x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LzPhrase {
    Literal(u8),
    /// 1-based start in y$x of an earlier occurrence; the copy may
    /// self-overlap.
    Copy {
        reference: usize,
        len: usize,
    },
}

/// The part of LZ77(y$x) covering x: greedy longest match against the
/// context y and the already-parsed prefix of x, ties broken toward the
/// smallest reference position.
pub fn gsc(ix: &IpmIndex, x: Fragment, y: Fragment) -> Result<Vec<LzPhrase>> {
    let tix = ix.text_index();
    let rs = ix.range_successor();
    let mut out = Vec::new();
    let mut cur = x.start;
    while cur <= x.end {
        let rem = Fragment::new(cur, x.end);
        let (l_ctx, _) = blcp(ix, rem, y)?;
        let l_self = if cur > x.start {
            ilcp(ix, x.start, cur - 1, rem).0
        } else {
            0
        };
        let best = l_ctx.max(l_self);
        if best == 0 {
            out.push(LzPhrase::Literal(ix.text().at(cur)));
            cur += 1;
            continue;
        }
        let phrase = Fragment::new(cur, cur + best - 1);
        let (rlo, rhi) = sa_interval(tix, ix.text(), phrase);
        let reference = if l_ctx == best {
            let p = rs
                .first_position_with_rank_in(y.start, y.end - best + 1, rlo, rhi)
                .expect("context match must have an in-context occurrence");
            p - y.start + 1
        } else {
            let p = rs
                .first_position_with_rank_in(x.start, cur - 1, rlo, rhi)
                .expect("self match must have a source");
            (p - x.start + 1) + y.len() + 1
        };
        out.push(LzPhrase::Copy {
            reference,
            len: best,
        });
        cur += best;
    }
    Ok(out)
}

/// Reconstructs x from its phrases and the context y; test helper and
/// decoder for the CLI.
pub fn decode_gsc(y: &[u8], phrases: &[LzPhrase]) -> Vec<u8> {
    const SEP: u16 = 256;
    let mut w: Vec<u16> = y.iter().map(|&b| b as u16).collect();
    w.push(SEP);
    for ph in phrases {
        match *ph {
            LzPhrase::Literal(b) => w.push(b as u16),
            LzPhrase::Copy { reference, len } => {
                for i in 0..len {
                    let v = w[reference - 1 + i];
                    w.push(v);
                }
            }
        }
    }
    w[y.len() + 1..].iter().map(|&v| v as u8).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::IndexConfig;
    use crate::oracle;
    use crate::text::Text;

    fn build(word: &[u8], seed: u64) -> IpmIndex {
        let config = IndexConfig {
            seed,
            ..IndexConfig::default()
        };
        IpmIndex::build(Text::new(word.to_vec()).unwrap(), config).unwrap()
    }

    #[test]
    fn sa_interval_examples() {
        let ix = build(b"banana", 0);
        let (lo, hi) = sa_interval(ix.text_index(), ix.text(), Fragment::new(2, 4)); // "ana"
        assert_eq!((lo, hi), (1, 2));
        let (lo, hi) = sa_interval(ix.text_index(), ix.text(), Fragment::new(1, 6));
        assert_eq!(lo, hi);
        let (lo, hi) = sa_interval(ix.text_index(), ix.text(), Fragment::new(2, 2)); // "a"
        assert_eq!((lo, hi), (0, 2));
    }

    #[test]
    fn occurs_in_examples() {
        let ix = build(b"cabacabcbacbcabcbaca", 0);
        // "cabc" = [5,8]
        assert!(occurs_in(&ix, Fragment::new(5, 8), Fragment::new(5, 12)));
        assert!(!occurs_in(&ix, Fragment::new(5, 8), Fragment::new(9, 12)));
        assert!(!occurs_in(&ix, Fragment::new(1, 8), Fragment::new(9, 12)));
    }

    #[test]
    fn ilcp_examples() {
        let ix = build(b"abaababa", 0);
        let (l, w) = ilcp(&ix, 1, 2, Fragment::new(4, 8)); // x = "ababa"
        assert_eq!(l, 3);
        assert_eq!(w, Some(1));
        // x occurring verbatim in the range.
        let (l, _) = ilcp(&ix, 4, 4, Fragment::new(4, 8));
        assert_eq!(l, 5);
        // Single-candidate range.
        let (l, w) = ilcp(&ix, 2, 2, Fragment::new(4, 8));
        assert_eq!(w, Some(2));
        let want = oracle::naive_ilcp(b"abaababa", (2, 2), (4, 8)).0;
        assert_eq!(l, want);
    }

    #[test]
    fn blcp_examples() {
        let ix = build(b"abaababa", 0);
        let (l, _) = blcp(&ix, Fragment::new(4, 8), Fragment::new(1, 4)).unwrap();
        assert_eq!(l, 3);
        // x a subword of y.
        let (l, _) = blcp(&ix, Fragment::new(4, 6), Fragment::new(1, 8)).unwrap();
        assert_eq!(l, 3);
        // Disjoint alphabets.
        let ix = build(b"aaabbb", 0);
        let (l, w) = blcp(&ix, Fragment::new(1, 3), Fragment::new(4, 6)).unwrap();
        assert_eq!((l, w), (0, None));
    }

    #[test]
    fn blcp_matches_oracle_exhaustively() {
        let mut state = 0xB1CBu64;
        for trial in 0..80 {
            let n = 2 + (crate::rng::splitmix64(&mut state) % 40) as usize;
            let sigma = [2u64, 3][trial % 2];
            let bytes: Vec<u8> = (0..n)
                .map(|_| b'a' + (crate::rng::splitmix64(&mut state) % sigma) as u8)
                .collect();
            let ix = build(&bytes, crate::rng::splitmix64(&mut state));
            for xs in 1..=n {
                for xe in xs..=n {
                    for ys in 1..=n {
                        for ye in ys..=n {
                            let x = Fragment::new(xs, xe);
                            let y = Fragment::new(ys, ye);
                            let (l, w) = blcp(&ix, x, y).unwrap();
                            let want = oracle::naive_blcp(&bytes, (xs, xe), (ys, ye));
                            assert_eq!(
                                l,
                                want,
                                "text={:?} x={x:?} y={y:?}",
                                String::from_utf8_lossy(&bytes)
                            );
                            if let Some(t) = w {
                                // Witness realizes the length inside y.
                                assert!(t >= ys && t + l - 1 <= ye);
                                assert_eq!(bytes[t - 1..t - 1 + l], bytes[xs - 1..xs - 1 + l]);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn ilcp_and_occurs_match_oracle() {
        let mut state = 0x11C9u64;
        for _ in 0..60 {
            let n = 2 + (crate::rng::splitmix64(&mut state) % 36) as usize;
            let bytes: Vec<u8> = (0..n)
                .map(|_| b'a' + (crate::rng::splitmix64(&mut state) % 2) as u8)
                .collect();
            let ix = build(&bytes, crate::rng::splitmix64(&mut state));
            for xs in 1..=n {
                for xe in xs..=n {
                    let x = Fragment::new(xs, xe);
                    for lo in 1..=n {
                        for hi in lo..=n {
                            let (l, w) = ilcp(&ix, lo, hi, x);
                            let want = oracle::naive_ilcp(&bytes, (lo, hi), (xs, xe));
                            assert_eq!(l, want.0);
                            let t = w.unwrap();
                            assert!((lo..=hi).contains(&t));
                            assert_eq!(bytes[t - 1..(t - 1 + l).min(n)], bytes[xs - 1..xs - 1 + l]);
                        }
                    }
                    for ys in 1..=n {
                        for ye in ys..=n {
                            let y = Fragment::new(ys, ye);
                            let got = occurs_in(&ix, x, y);
                            let want = !oracle::naive_ipm(&bytes, (xs, xe), (ys, ye)).is_empty();
                            assert_eq!(got, want);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gsc_examples() {
        // y = "ab", x = "abab".
        let ix = build(b"abab", 0);
        let phrases = gsc(&ix, Fragment::new(1, 4), Fragment::new(1, 2)).unwrap();
        assert_eq!(
            phrases,
            vec![
                LzPhrase::Copy {
                    reference: 1,
                    len: 2
                },
                LzPhrase::Copy {
                    reference: 1,
                    len: 2
                }
            ]
        );
        // y = "a", x = "aaaa": self-overlapping copy.
        let ix = build(b"aaaaa", 0);
        let phrases = gsc(&ix, Fragment::new(2, 5), Fragment::new(1, 1)).unwrap();
        assert_eq!(
            phrases,
            vec![
                LzPhrase::Copy {
                    reference: 1,
                    len: 1
                },
                LzPhrase::Copy {
                    reference: 3,
                    len: 3
                }
            ]
        );
        // Leading symbol absent from the context.
        let ix = build(b"ba", 0);
        let phrases = gsc(&ix, Fragment::new(1, 1), Fragment::new(2, 2)).unwrap();
        assert_eq!(phrases, vec![LzPhrase::Literal(b'b')]);
    }

    #[test]
    fn gsc_matches_oracle_and_decodes() {
        let mut state = 0x6ECu64;
        for trial in 0..40 {
            let n = 2 + (crate::rng::splitmix64(&mut state) % 28) as usize;
            let sigma = [2u64, 3][trial % 2];
            let bytes: Vec<u8> = (0..n)
                .map(|_| b'a' + (crate::rng::splitmix64(&mut state) % sigma) as u8)
                .collect();
            let ix = build(&bytes, crate::rng::splitmix64(&mut state));
            for xs in 1..=n {
                for xe in xs..=n {
                    for ys in 1..=n {
                        for ye in ys..=n {
                            let phrases =
                                gsc(&ix, Fragment::new(xs, xe), Fragment::new(ys, ye)).unwrap();
                            let want = oracle::naive_lz(&bytes, (xs, xe), (ys, ye));
                            let got_cmp: Vec<oracle::NaivePhrase> = phrases
                                .iter()
                                .map(|p| match *p {
                                    LzPhrase::Literal(b) => oracle::NaivePhrase::Literal(b),
                                    LzPhrase::Copy { reference, len } => {
                                        oracle::NaivePhrase::Copy { reference, len }
                                    }
                                })
                                .collect();
                            assert_eq!(
                                got_cmp,
                                want,
                                "text={:?} x=({xs},{xe}) y=({ys},{ye})",
                                String::from_utf8_lossy(&bytes)
                            );
                            let decoded = decode_gsc(&bytes[ys - 1..ye], &phrases);
                            assert_eq!(decoded, &bytes[xs - 1..xe]);
                        }
                    }
                }
            }
        }
    }
}
