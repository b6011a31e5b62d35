//! Application queries on top of the occurrence index: prefix-suffix
//! detection, full period enumeration, 2-periodicity, and cyclic
//! equivalence.

use crate::error::{Error, Result};
use crate::index::IpmIndex;
use crate::text::{lcp_fragments, longest_prefix_with_period, ArithProgression, Fragment};

/// All periods of a subword, as disjoint sorted progressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodSet {
    pub progressions: Vec<ArithProgression>,
}

impl PeriodSet {
    pub fn to_vec(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.progressions.iter().flat_map(|p| p.to_vec()).collect();
        out.sort_unstable();
        out
    }
}

/// Lengths L in [d, 2d] such that the length-L prefix of x equals the
/// length-L suffix of y, as one ascending progression.
pub fn prefix_suffix(
    ix: &IpmIndex,
    x: Fragment,
    y: Fragment,
    d: usize,
) -> Result<ArithProgression> {
    if d == 0 {
        return Err(Error::ConstraintViolation("prefix-suffix requires d >= 1"));
    }
    if x.len() < d || y.len() < d {
        return Ok(ArithProgression::EMPTY);
    }
    let tix = ix.text_index();
    let x_prefix = Fragment::new(x.start, x.start + d - 1);
    let y_tail_len = (2 * d).min(y.len());
    let y_tail = Fragment::new(y.end - y_tail_len + 1, y.end);
    let occs = ix.ipm_query(x_prefix, y_tail)?;

    // A candidate occurrence at t matches the suffix of y of length
    // y.end - t + 1; it is a prefix-suffix of length L when that suffix
    // equals the L-prefix of x.
    let check = |t: usize| -> Option<usize> {
        let len = y.end - t + 1;
        if len > x.len() {
            return None;
        }
        let xp = Fragment::new(x.start, x.start + len - 1);
        let yp = Fragment::new(t, y.end);
        tix.fragments_equal_single(xp, yp).then_some(len)
    };

    if occs.count <= 2 {
        let mut lens: Vec<usize> = occs.iter().filter_map(check).collect();
        lens.sort_unstable();
        return ArithProgression::from_hits(&lens);
    }

    // Many occurrences force the d-prefix periodic with period q; the
    // period analysis cuts the candidates to one verified length or a tail
    // progression of fully periodic suffixes.
    let q = occs.diff;
    let t1 = occs.first;
    let y1 = Fragment::new(t1, y.end);
    let d_prime = longest_prefix_with_period(tix, &[x], q)?;
    let d1 = longest_prefix_with_period(tix, &[y1], q)?;
    let m = occs.count;

    if d1 < y1.len() {
        // Periodicity of y_i breaks before its end: only d_i = d' can work.
        if d1 >= d_prime && (d1 - d_prime) % q == 0 {
            let i = (d1 - d_prime) / q;
            if i < m {
                if let Some(len) = check(t1 + i * q) {
                    return Ok(ArithProgression::singleton(len));
                }
            }
        }
        Ok(ArithProgression::EMPTY)
    } else {
        // Every y_i is fully q-periodic: y_i qualifies iff the periodic
        // prefix of x covers it, i.e. |y_i| <= d'.
        let len1 = y1.len();
        // Smallest progression index whose suffix both fits in x and is
        // covered by the periodic prefix of x.
        let bound = d_prime.min(x.len());
        let i_min = if len1 <= bound {
            0
        } else {
            (len1 - bound).div_ceil(q)
        };
        if i_min >= m {
            return Ok(ArithProgression::EMPTY);
        }
        let shortest = len1 - (m - 1) * q;
        let longest = len1 - i_min * q;
        Ok(ArithProgression::new(
            shortest,
            q,
            (longest - shortest) / q + 1,
        ))
    }
}

/// All periods of word(x): prefix-suffix queries enumerate the borders in
/// doubling windows, and border lengths b map to periods |x| - b.
pub fn period_query(ix: &IpmIndex, x: Fragment) -> Result<PeriodSet> {
    let m = x.len();
    let mut progressions: Vec<ArithProgression> = Vec::new();
    // Borders of length in [2^k - 1, 2(2^k - 1)], k >= 1; the empty border
    // (the trivial period |x|) is appended separately.
    let mut k = 1u32;
    while (1usize << k) - 1 < m {
        let d = (1usize << k) - 1;
        let borders = prefix_suffix(ix, x, x, d)?;
        // Proper borders only: drop length |x| (x itself).
        let borders = borders.clip(d, m - 1);
        if !borders.is_empty() {
            // Ascending border lengths become descending periods.
            let first_period = m - borders.last();
            progressions.push(ArithProgression::new(
                first_period,
                borders.diff,
                borders.count,
            ));
        }
        k += 1;
    }
    progressions.push(ArithProgression::singleton(m));
    progressions.sort_by_key(|p| p.first);
    // Adjacent windows often chain (unary-like words): coalesce where the
    // union stays a single progression.
    let mut merged: Vec<ArithProgression> = Vec::new();
    for p in progressions {
        match merged.last_mut() {
            Some(last) => match try_chain(*last, p) {
                Some(joined) => *last = joined,
                None => merged.push(p),
            },
            None => merged.push(p),
        }
    }
    Ok(PeriodSet {
        progressions: merged,
    })
}

/// Union of two sorted disjoint progressions when it is again a single
/// progression.
fn try_chain(a: ArithProgression, b: ArithProgression) -> Option<ArithProgression> {
    debug_assert!(a.last() < b.first);
    let gap = b.first - a.last();
    let diff = match (a.count >= 2, b.count >= 2) {
        (true, true) if a.diff == b.diff && gap == a.diff => a.diff,
        (true, false) if gap == a.diff => a.diff,
        (false, true) if gap == b.diff => b.diff,
        (false, false) => gap,
        _ => return None,
    };
    Some(ArithProgression::new(a.first, diff, a.count + b.count))
}

/// Whether word(x) is periodic (shortest period at most |x|/2), and the
/// shortest period if so. Runs machinery only; no sampling involved.
pub fn two_period_query(ix: &IpmIndex, x: Fragment) -> (bool, Option<usize>) {
    match ix.run_extension().run_of(ix.runs(), x) {
        Some(run) => (true, Some(run.period)),
        None => (false, None),
    }
}

/// Whether the shortest period properly divides the length: words that are
/// not a proper power of a shorter word are primitive.
pub fn is_primitive(ix: &IpmIndex, x: Fragment) -> bool {
    match two_period_query(ix, x) {
        (true, Some(p)) => x.len() % p != 0,
        _ => {
            // Aperiodic words can still be squares only if 2p <= |x|;
            // they are not, so any non-2-periodic word is primitive.
            true
        }
    }
}

/// Cyclic shifts r in [0, |x| - 1] with y = Rot^r(x), where Rot moves the
/// last symbol to the front; empty when |x| != |y| or the words are not
/// rotations of each other.
pub fn cyclic_equivalence(ix: &IpmIndex, x: Fragment, y: Fragment) -> Result<ArithProgression> {
    if x.len() != y.len() {
        return Ok(ArithProgression::EMPTY);
    }
    let d = x.len();
    if d == 1 {
        return Ok(if ix.text().at(x.start) == ix.text().at(y.start) {
            ArithProgression::singleton(0)
        } else {
            ArithProgression::EMPTY
        });
    }
    // Shifts up to floor(d/2) from (x, y); the rest via (y, x) and
    // r <-> d - r.
    let low = half_shifts(ix, x, y)?;
    let other = half_shifts(ix, y, x)?;
    let mut high: Vec<usize> = other.iter().filter(|&s| s != 0).map(|s| d - s).collect();
    high.sort_unstable();
    union_rotation_sets(&low, &high)
}

/// R(x, y) ∩ [0, floor(d/2)]: occurrences of x in yy starting in the first
/// half, found through the occurrences of x's half-length prefix in y.
fn half_shifts(ix: &IpmIndex, x: Fragment, y: Fragment) -> Result<ArithProgression> {
    let tix = ix.text_index();
    let d = x.len();
    let half = d.div_ceil(2);
    let x_prefix = Fragment::new(x.start, x.start + half - 1);
    // |y| = d <= 2 * half, so the window restriction holds.
    let occs = ix.ipm_query(x_prefix, y)?;

    // Shift candidate r = t - y.start; valid iff x equals y[r+1..] y[..r].
    let check = |t: usize| -> Option<usize> {
        let r = t - y.start;
        if r > d / 2 {
            return None;
        }
        let rot_eq = if r == 0 {
            tix.fragments_equal_single(x, y)
        } else {
            lcp_fragments(
                tix,
                &[x],
                &[
                    Fragment::new(t, y.end),
                    Fragment::new(y.start, y.start + r - 1),
                ],
            ) == d
        };
        rot_eq.then_some(r)
    };

    if occs.count <= 2 {
        let mut shifts: Vec<usize> = occs.iter().filter_map(check).collect();
        shifts.sort_unstable();
        return ArithProgression::from_hits(&shifts);
    }

    let q = occs.diff;
    let t1 = occs.first;
    // y_1 = y[j_1..] y, as a fragment concatenation.
    let y1 = [Fragment::new(t1, y.end), Fragment::new(y.start, y.end)];
    let d_prime = longest_prefix_with_period(tix, &[x], q)?;
    let d1 = longest_prefix_with_period(tix, &y1, q)?;
    let m = occs.count;

    if d_prime < d {
        // Only the candidate aligning the periodic breaks can match.
        if d1 >= d_prime && (d1 - d_prime) % q == 0 {
            let i = (d1 - d_prime) / q;
            if i < m {
                if let Some(r) = check(t1 + i * q) {
                    return Ok(ArithProgression::singleton(r));
                }
            }
        }
        Ok(ArithProgression::EMPTY)
    } else {
        // x is fully q-periodic: x occurs at j_i exactly when the periodic
        // run of y_i lasts at least |x|, i.e. d_i = d1 - (i-1)q >= d.
        if d1 < d {
            return Ok(ArithProgression::EMPTY);
        }
        let i_max = ((d1 - d) / q).min(m - 1); // 0-based
        let mut shifts: Vec<usize> = (0..=i_max)
            .map(|i| t1 + i * q - y.start)
            .filter(|&r| r <= d / 2)
            .collect();
        shifts.sort_unstable();
        ArithProgression::from_hits(&shifts)
    }
}

/// Union of the two half shift sets, which the occurrence structure of
/// x in yy forces to be a single progression; midpoint overlap is
/// deduplicated.
fn union_rotation_sets(low: &ArithProgression, high: &[usize]) -> Result<ArithProgression> {
    let mut all: Vec<usize> = low.iter().collect();
    all.extend_from_slice(high);
    all.sort_unstable();
    all.dedup();
    if all.len() <= 3 {
        return ArithProgression::from_hits(&all);
    }
    // Large sets are periodic: verify the common difference symbolically.
    let diff = all[1] - all[0];
    for w in all.windows(2) {
        if w[1] - w[0] != diff {
            return Err(Error::ChainViolation("rotation shifts not a progression"));
        }
    }
    Ok(ArithProgression::new(all[0], diff, all.len()))
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
    fn prefix_suffix_examples() {
        let ix = build(b"abaababa", 0);
        let whole = Fragment::new(1, 8);
        let got = prefix_suffix(&ix, whole, whole, 2).unwrap();
        assert_eq!(got, ArithProgression::singleton(3));

        let ix = build(b"aaaaaa", 0);
        let whole = Fragment::new(1, 6);
        let got = prefix_suffix(&ix, whole, whole, 2).unwrap();
        assert_eq!(got, ArithProgression::new(2, 1, 3));

        let ix = build(b"ab", 0);
        let got = prefix_suffix(&ix, Fragment::new(1, 2), Fragment::new(1, 2), 5).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn prefix_suffix_matches_oracle() {
        let mut state = 0x9515u64;
        for trial in 0..60 {
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
                            for d in 1..=(ye - ys + 2).min(8) {
                                let got = prefix_suffix(
                                    &ix,
                                    Fragment::new(xs, xe),
                                    Fragment::new(ys, ye),
                                    d,
                                )
                                .unwrap();
                                let want =
                                    oracle::naive_prefix_suffix(&bytes, (xs, xe), (ys, ye), d);
                                assert_eq!(
                                    got.to_vec(),
                                    want,
                                    "text={:?} x=({xs},{xe}) y=({ys},{ye}) d={d}",
                                    String::from_utf8_lossy(&bytes)
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn period_examples() {
        let ix = build(b"abaababa", 0);
        let got = period_query(&ix, Fragment::new(1, 8)).unwrap();
        assert_eq!(got.to_vec(), vec![5, 7, 8]);

        let ix = build(b"aaaa", 0);
        let got = period_query(&ix, Fragment::new(1, 4)).unwrap();
        assert_eq!(got.to_vec(), vec![1, 2, 3, 4]);
        assert_eq!(got.progressions, vec![ArithProgression::new(1, 1, 4)]);

        let got = period_query(&ix, Fragment::new(2, 2)).unwrap();
        assert_eq!(got.to_vec(), vec![1]);
    }

    #[test]
    fn period_progression_count_is_logarithmic() {
        let ix = build(&[b'a'; 200], 0);
        let ps = period_query(&ix, Fragment::new(1, 177)).unwrap();
        assert!(ps.progressions.len() <= (177usize + 1).ilog2() as usize + 1);
        assert_eq!(ps.to_vec(), (1..=177).collect::<Vec<_>>());
    }

    #[test]
    fn period_query_matches_failure_function() {
        let mut state = 0xFEAu64;
        for trial in 0..80 {
            let n = 1 + (crate::rng::splitmix64(&mut state) % 64) as usize;
            let sigma = [2u64, 3][trial % 2];
            let bytes: Vec<u8> = (0..n)
                .map(|_| b'a' + (crate::rng::splitmix64(&mut state) % sigma) as u8)
                .collect();
            let ix = build(&bytes, crate::rng::splitmix64(&mut state));
            for xs in 1..=n {
                for xe in xs..=n {
                    let got = period_query(&ix, Fragment::new(xs, xe)).unwrap();
                    let mut want = oracle::naive_periods(&bytes, (xs, xe));
                    want.sort_unstable();
                    assert_eq!(
                        got.to_vec(),
                        want,
                        "text={:?} x=({xs},{xe})",
                        String::from_utf8_lossy(&bytes)
                    );
                    // Disjoint sorted progressions.
                    for w in got.progressions.windows(2) {
                        assert!(w[0].last() < w[1].first);
                    }
                }
            }
        }
    }

    #[test]
    fn two_period_examples() {
        let ix = build(b"caabaabaabaabaabaabac", 0);
        assert_eq!(two_period_query(&ix, Fragment::new(2, 7)), (true, Some(3)));
        let ix = build(b"ab", 0);
        assert_eq!(two_period_query(&ix, Fragment::new(1, 2)), (false, None));
        let ix = build(b"abab", 0);
        assert_eq!(two_period_query(&ix, Fragment::new(1, 4)), (true, Some(2)));
        assert!(!is_primitive(&ix, Fragment::new(1, 4)));
        assert!(is_primitive(&ix, Fragment::new(1, 3)));
    }

    #[test]
    fn two_period_agrees_with_period_query_minimum() {
        let mut state = 0x2BADu64;
        for _ in 0..60 {
            let n = 1 + (crate::rng::splitmix64(&mut state) % 50) as usize;
            let bytes: Vec<u8> = (0..n)
                .map(|_| b'a' + (crate::rng::splitmix64(&mut state) % 2) as u8)
                .collect();
            let ix = build(&bytes, crate::rng::splitmix64(&mut state));
            for xs in 1..=n {
                for xe in xs..=n {
                    let x = Fragment::new(xs, xe);
                    let (periodic, p) = two_period_query(&ix, x);
                    let min_period = period_query(&ix, x).unwrap().to_vec()[0];
                    if periodic {
                        assert_eq!(p, Some(min_period));
                        assert!(2 * min_period <= x.len());
                    } else {
                        assert!(2 * min_period > x.len());
                    }
                }
            }
        }
    }

    #[test]
    fn cyclic_examples() {
        let ix = build(b"abaabaabab", 0);
        let got = cyclic_equivalence(&ix, Fragment::new(1, 5), Fragment::new(6, 10)).unwrap();
        assert_eq!(got, ArithProgression::singleton(3));

        let ix = build(b"aaa", 0);
        let got = cyclic_equivalence(&ix, Fragment::new(1, 3), Fragment::new(1, 3)).unwrap();
        assert_eq!(got, ArithProgression::new(0, 1, 3));

        let ix = build(b"abba", 0);
        let got = cyclic_equivalence(&ix, Fragment::new(1, 2), Fragment::new(3, 4)).unwrap();
        assert_eq!(got, ArithProgression::singleton(1));

        // Different lengths.
        let got = cyclic_equivalence(&ix, Fragment::new(1, 2), Fragment::new(2, 4)).unwrap();
        assert!(got.is_empty());
    }

    #[test]
    fn cyclic_matches_rotation_scan() {
        let mut state = 0xC11Cu64;
        for trial in 0..60 {
            let n = 2 + (crate::rng::splitmix64(&mut state) % 40) as usize;
            let sigma = [2u64, 3][trial % 2];
            let bytes: Vec<u8> = (0..n)
                .map(|_| b'a' + (crate::rng::splitmix64(&mut state) % sigma) as u8)
                .collect();
            let ix = build(&bytes, crate::rng::splitmix64(&mut state));
            for xs in 1..=n {
                for xe in xs..=n {
                    let len = xe - xs + 1;
                    for ys in 1..=n - len + 1 {
                        let ye = ys + len - 1;
                        let got =
                            cyclic_equivalence(&ix, Fragment::new(xs, xe), Fragment::new(ys, ye))
                                .unwrap();
                        let want = oracle::naive_rotations(&bytes, (xs, xe), (ys, ye));
                        assert_eq!(
                            got.to_vec(),
                            want,
                            "text={:?} x=({xs},{xe}) y=({ys},{ye})",
                            String::from_utf8_lossy(&bytes)
                        );
                    }
                }
            }
        }
    }
}
