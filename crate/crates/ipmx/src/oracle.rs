//! Brute-force reference implementations for every query family.
//!
//! These are deliberately independent of the main code paths: definitional
//! scans over byte slices, sharing nothing but the position convention
//! (1-based inclusive fragments). Property tests and the `selftest` command
//! compare the index against them; they are not built for speed.

/// Upper bound on the quadratic work size accepted by the oracles: the
/// text length for whole-text scans, the combined fragment length for
/// per-fragment scans.
pub const ORACLE_CAP: usize = 5000;

fn word(text: &[u8], start: usize, end: usize) -> &[u8] {
    &text[start - 1..end]
}

fn assert_cap(work: usize) {
    assert!(work <= ORACLE_CAP, "oracle cap exceeded: {work}");
}

fn frag_cap(x: (usize, usize), y: (usize, usize)) {
    assert_cap((x.1 - x.0 + 1) + (y.1 - y.0 + 1));
}

/// All 1-based positions where word(x) occurs fully inside y, by scanning.
pub fn naive_ipm(text: &[u8], x: (usize, usize), y: (usize, usize)) -> Vec<usize> {
    frag_cap(x, y);
    let xw = word(text, x.0, x.1);
    let mut out = Vec::new();
    if y.1 - y.0 + 1 < xw.len() {
        return out;
    }
    for c in y.0..=(y.1 + 1 - xw.len()) {
        if word(text, c, c + xw.len() - 1) == xw {
            out.push(c);
        }
    }
    out
}

/// All periods of word(x), via the KMP failure function.
pub fn naive_periods(text: &[u8], x: (usize, usize)) -> Vec<usize> {
    assert_cap(x.1 - x.0 + 1);
    let w = word(text, x.0, x.1);
    let m = w.len();
    let mut fail = vec![0usize; m];
    for i in 1..m {
        let mut b = fail[i - 1];
        loop {
            if w[i] == w[b] {
                fail[i] = b + 1;
                break;
            }
            if b == 0 {
                fail[i] = 0;
                break;
            }
            b = fail[b - 1];
        }
    }
    let mut periods = Vec::new();
    let mut border = fail[m - 1];
    loop {
        periods.push(m - border);
        if border == 0 {
            break;
        }
        border = fail[border - 1];
    }
    periods
}

/// Shortest period of a word.
pub fn naive_shortest_period(w: &[u8]) -> usize {
    'outer: for p in 1..=w.len() {
        for i in p..w.len() {
            if w[i] != w[i - p] {
                continue 'outer;
            }
        }
        return p;
    }
    unreachable!("every non-empty word has a period")
}

/// A maximal repetition found by the quadratic oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct NaiveRun {
    pub start: usize,
    pub end: usize,
    pub period: usize,
}

/// All runs: for each candidate period, maximal stretches where the shift
/// by p matches, filtered to exponent >= 2 and grouped by interval keeping
/// the shortest period.
pub fn naive_runs(text: &[u8]) -> Vec<NaiveRun> {
    assert_cap(text.len());
    let n = text.len();
    let mut by_interval: std::collections::BTreeMap<(usize, usize), usize> =
        std::collections::BTreeMap::new();
    for p in 1..=n / 2 {
        let mut i = 0;
        while i + p < n {
            if text[i] != text[i + p] {
                i += 1;
                continue;
            }
            let run_start = i;
            while i + p < n && text[i] == text[i + p] {
                i += 1;
            }
            let len = i - run_start + p; // region [run_start, i + p - 1]
            if len >= 2 * p {
                let entry = by_interval
                    .entry((run_start + 1, run_start + len))
                    .or_insert(p);
                *entry = (*entry).min(p);
            }
        }
    }
    by_interval
        .into_iter()
        .map(|((start, end), period)| NaiveRun { start, end, period })
        .collect()
}

/// Shifts r in [0, d-1] with y = Rot^r(x), where Rot moves the last symbol
/// to the front.
pub fn naive_rotations(text: &[u8], x: (usize, usize), y: (usize, usize)) -> Vec<usize> {
    frag_cap(x, y);
    let xw = word(text, x.0, x.1);
    let yw = word(text, y.0, y.1);
    if xw.len() != yw.len() {
        return Vec::new();
    }
    let d = xw.len();
    (0..d)
        .filter(|&r| {
            // Rot^r(x) = x[d-r..] ++ x[..d-r]
            yw[..r] == xw[d - r..] && yw[r..] == xw[..d - r]
        })
        .collect()
}

/// One LZ phrase of the oracle parse.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NaivePhrase {
    Literal(u8),
    Copy { reference: usize, len: usize },
}

/// Greedy self-referential LZ77 parse of x against context y, over the
/// virtual string y$x. References are 1-based positions in y$x; ties on
/// phrase length are broken toward the smallest reference.
pub fn naive_lz(text: &[u8], x: (usize, usize), y: (usize, usize)) -> Vec<NaivePhrase> {
    frag_cap(x, y);
    const SEP: u16 = 256;
    let mut w: Vec<u16> = word(text, y.0, y.1).iter().map(|&b| b as u16).collect();
    w.push(SEP);
    w.extend(word(text, x.0, x.1).iter().map(|&b| b as u16));
    let x_begin = (y.1 - y.0 + 1) + 1; // 0-based index of first x symbol in w
    let mut out = Vec::new();
    let mut cur = x_begin;
    while cur < w.len() {
        let mut best_len = 0usize;
        let mut best_ref = 0usize;
        for t in 0..cur {
            let mut l = 0usize;
            while cur + l < w.len() && w[t + l] == w[cur + l] {
                l += 1;
            }
            if l > best_len {
                best_len = l;
                best_ref = t + 1;
            }
        }
        if best_len == 0 {
            out.push(NaivePhrase::Literal(w[cur] as u8));
            cur += 1;
        } else {
            out.push(NaivePhrase::Copy {
                reference: best_ref,
                len: best_len,
            });
            cur += best_len;
        }
    }
    out
}

/// Lengths in [d, 2d] of prefixes of x that are suffixes of y.
pub fn naive_prefix_suffix(
    text: &[u8],
    x: (usize, usize),
    y: (usize, usize),
    d: usize,
) -> Vec<usize> {
    frag_cap(x, y);
    let xw = word(text, x.0, x.1);
    let yw = word(text, y.0, y.1);
    let hi = (2 * d).min(xw.len()).min(yw.len());
    (d..=hi)
        .filter(|&l| l >= 1 && xw[..l] == yw[yw.len() - l..])
        .collect()
}

/// Length of the longest prefix of x occurring inside y.
pub fn naive_blcp(text: &[u8], x: (usize, usize), y: (usize, usize)) -> usize {
    frag_cap(x, y);
    let xw = word(text, x.0, x.1);
    let yw = word(text, y.0, y.1);
    for l in (1..=xw.len().min(yw.len())).rev() {
        if yw.windows(l).any(|win| win == &xw[..l]) {
            return l;
        }
    }
    0
}

/// Longest prefix of x occurring at a start position within [l, r] of the
/// text; returns (length, leftmost witness) with length possibly 0.
pub fn naive_ilcp(text: &[u8], range: (usize, usize), x: (usize, usize)) -> (usize, Option<usize>) {
    assert_cap((x.1 - x.0 + 1) + (range.1.saturating_sub(range.0) + 1));
    let xw = word(text, x.0, x.1);
    let n = text.len();
    let mut best = 0usize;
    let mut witness = None;
    for t in range.0..=range.1.min(n) {
        let avail = n - t + 1;
        let mut l = 0usize;
        while l < xw.len() && l < avail && text[t - 1 + l] == xw[l] {
            l += 1;
        }
        if l > best || witness.is_none() {
            best = l;
            witness = Some(t);
        }
    }
    (best, witness)
}

/// FillGaps by literal window enumeration: the union of A with every
/// interval [i, i+delta] contained in I and disjoint from A.
pub fn naive_fillgaps(a: &[usize], delta: usize, interval: (usize, usize)) -> Vec<usize> {
    let (lo, hi) = interval;
    let in_a: std::collections::BTreeSet<usize> = a.iter().copied().collect();
    let mut keep: std::collections::BTreeSet<usize> = in_a.clone();
    if hi >= lo + delta {
        for i in lo..=hi - delta {
            if (i..=i + delta).all(|j| !in_a.contains(&j)) {
                keep.extend(i..=i + delta);
            }
        }
    }
    keep.into_iter().collect()
}

/// Sliding lexicographic minimum by direct scan: for each i in
/// [1, m - d], the smallest (id, pos) pair with pos in [i, i+d].
pub fn naive_slider(pairs: &[(u32, usize)], d: usize, m: usize) -> Vec<Option<(u32, usize)>> {
    let mut out = Vec::new();
    if m < d + 1 {
        return out;
    }
    for i in 1..=m - d {
        let best = pairs
            .iter()
            .filter(|&&(_, p)| p >= i && p <= i + d)
            .min_by_key(|&&(id, p)| (id, p))
            .copied();
        out.push(best);
    }
    out
}

/// Z-array: `z[i]` is the length of the longest common prefix of `w` and
/// `w[i..]`, with `z[0] = |w|`.
pub fn z_array(w: &[u8]) -> Vec<usize> {
    let n = w.len();
    let mut z = vec![0usize; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0usize, 0usize);
    for i in 1..n {
        if i < r {
            z[i] = z[i - l].min(r - i);
        }
        while i + z[i] < n && w[z[i]] == w[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}

/// Occurrences of word(x) inside y via the Z-array of x#y: a linear-time
/// route for the corpus sizes where the quadratic scan would dominate.
/// Agrees with `naive_ipm` (cross-checked in tests).
pub fn z_ipm(text: &[u8], x: (usize, usize), y: (usize, usize)) -> Vec<usize> {
    let xw = word(text, x.0, x.1);
    let yw = word(text, y.0, y.1);
    if xw.len() > yw.len() {
        return Vec::new();
    }
    let mut w = Vec::with_capacity(xw.len() + 1 + yw.len());
    w.extend_from_slice(xw);
    w.push(0); // separator outside the alphabet of interest
    w.extend_from_slice(yw);
    let z = z_array(&w);
    let base = xw.len() + 1;
    (0..=yw.len() - xw.len())
        .filter(|&o| z[base + o] >= xw.len())
        .map(|o| y.0 + o)
        .collect()
}

/// Longest prefix of x that is a subword of y, via one Z-array.
pub fn z_blcp(text: &[u8], x: (usize, usize), y: (usize, usize)) -> usize {
    let xw = word(text, x.0, x.1);
    let yw = word(text, y.0, y.1);
    let mut w = Vec::with_capacity(xw.len() + 1 + yw.len());
    w.extend_from_slice(xw);
    w.push(0);
    w.extend_from_slice(yw);
    let z = z_array(&w);
    let base = xw.len() + 1;
    (0..yw.len())
        .map(|o| z[base + o].min(yw.len() - o))
        .max()
        .unwrap_or(0)
        .min(xw.len())
}

/// Interval-LCP by the same route: longest prefix of x starting at some
/// text position in [l, r], with its leftmost witness.
pub fn z_ilcp(text: &[u8], range: (usize, usize), x: (usize, usize)) -> (usize, Option<usize>) {
    let xw = word(text, x.0, x.1);
    if range.0 > range.1 {
        return (0, None);
    }
    let mut w = Vec::with_capacity(xw.len() + 1 + text.len());
    w.extend_from_slice(xw);
    w.push(0);
    w.extend_from_slice(text);
    let z = z_array(&w);
    let base = xw.len() + 1;
    let mut best = 0usize;
    let mut witness = None;
    for t in range.0..=range.1.min(text.len()) {
        let l = z[base + t - 1].min(xw.len());
        if witness.is_none() || l > best {
            best = l;
            witness = Some(t);
        }
    }
    (best, witness)
}

/// Prefix-suffix lengths in [d, 2d] via one Z-array of x#y.
pub fn z_prefix_suffix(text: &[u8], x: (usize, usize), y: (usize, usize), d: usize) -> Vec<usize> {
    let xw = word(text, x.0, x.1);
    let yw = word(text, y.0, y.1);
    let mut w = Vec::with_capacity(xw.len() + 1 + yw.len());
    w.extend_from_slice(xw);
    w.push(0);
    w.extend_from_slice(yw);
    let z = z_array(&w);
    let base = xw.len() + 1;
    let hi = (2 * d).min(xw.len()).min(yw.len());
    (d.max(1)..=hi)
        .filter(|&len| z[base + yw.len() - len] >= len)
        .collect()
}

/// All periods of word(x) via its Z-array: b is a border length exactly
/// when z[|x| - b] = b.
pub fn z_periods(text: &[u8], x: (usize, usize)) -> Vec<usize> {
    let xw = word(text, x.0, x.1);
    let m = xw.len();
    let z = z_array(xw);
    let mut periods: Vec<usize> = (1..m).filter(|&b| z[m - b] == b).map(|b| m - b).collect();
    periods.push(m);
    periods.sort_unstable();
    periods
}

/// Cyclic shifts via occurrences of x in yy.
pub fn z_rotations(text: &[u8], x: (usize, usize), y: (usize, usize)) -> Vec<usize> {
    let xw = word(text, x.0, x.1);
    let yw = word(text, y.0, y.1);
    if xw.len() != yw.len() {
        return Vec::new();
    }
    let d = xw.len();
    let mut w = Vec::with_capacity(3 * d + 1);
    w.extend_from_slice(xw);
    w.push(0);
    w.extend_from_slice(yw);
    w.extend_from_slice(yw);
    let z = z_array(&w);
    let base = d + 1;
    (0..d).filter(|&r| z[base + r] >= d).collect()
}

/// Direct per-position argmin assignment for one level: given per-position
/// identifiers and a periodicity flag per position, computes the samples
/// partial assignment by definition.
pub fn naive_argmin_assignment(
    ids: &[u32],       // ids[j-1] is the identifier of the k-basic fragment at j
    periodic: &[bool], // periodic[j-1] says whether that fragment is periodic
    window: usize,     // 2^k
) -> Vec<Option<usize>> {
    let nk = ids.len();
    if nk < window + 1 {
        return Vec::new();
    }
    let nk1 = nk - window;
    (1..=nk1)
        .map(|i| {
            if (i..=i + window).any(|j| periodic[j - 1]) {
                None
            } else {
                let mut best = i;
                for j in i + 1..=i + window {
                    if ids[j - 1] < ids[best - 1] {
                        best = j;
                    }
                }
                Some(best)
            }
        })
        .collect()
}
