//! Maximal repetitions (runs) with Lyndon representations, and the per-level
//! periodic machinery: P_k tables, run-extension queries, k-run locators,
//! Lyndon-root compatibility and occurrence progressions.

use crate::succinct::{BitVector, Evaluator, FlatMultiMap, StepFunction};
use crate::suffix::{lcp_array, suffix_array, Rmq};
use crate::text::{ArithProgression, Fragment, Text, TextIndex};

/// A maximal repetition: a periodic fragment that cannot be extended in
/// either direction without breaking its shortest period, stored with its
/// Lyndon representation lead + reps * root + trail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Run {
    pub frag: Fragment,
    pub period: usize,
    /// |λ'|: length of the partial root before the first full root.
    pub lead: usize,
    /// Number of full Lyndon-root repetitions.
    pub reps: usize,
    /// |λ''|: length of the partial root after the last full root.
    pub trail: usize,
}

impl Run {
    pub fn len(&self) -> usize {
        self.frag.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// The fragment holding the run's Lyndon root.
    pub fn root(&self) -> Fragment {
        Fragment::new(
            self.frag.start + self.lead,
            self.frag.start + self.lead + self.period - 1,
        )
    }

    /// Lyndon representation (lead, reps, trail) of a subfragment, derived
    /// by offset arithmetic alone: `u` must lie inside the run.
    pub fn lyndon_of_subfragment(&self, u: Fragment) -> (usize, usize, usize) {
        debug_assert!(self.frag.contains(u));
        let root_start = self.frag.start + self.lead;
        let p = self.period;
        // Distance from u.start to the next root boundary on the lattice
        // root_start + t*p.
        let lead = ((root_start % p) + p - (u.start % p)) % p;
        let rest = u.len() - lead;
        (lead, rest / p, rest % p)
    }
}

/// Start index (0-based) of the lexicographically minimal rotation, by
/// Booth's algorithm.
pub fn minimal_rotation_shift(w: &[u8]) -> usize {
    let n = w.len();
    if n <= 1 {
        return 0;
    }
    let mut i = 0usize;
    let mut j = 1usize;
    let mut k = 0usize;
    while i < n && j < n && k < n {
        let a = w[(i + k) % n];
        let b = w[(j + k) % n];
        if a == b {
            k += 1;
            continue;
        }
        if a > b {
            i = (i + k + 1).max(j + 1);
        } else {
            j = (j + k + 1).max(i + 1);
        }
        if i == j {
            j += 1;
        }
        k = 0;
    }
    i.min(j)
}

/// Longest-common-extension toolbox for both directions, used only during
/// run construction.
struct Lce {
    fwd_isa: Vec<u32>,
    fwd_rmq: Rmq,
    rev_isa: Vec<u32>,
    rev_rmq: Rmq,
    n: usize,
}

impl Lce {
    fn new(text: &[u8]) -> Lce {
        let (sa_f, isa_f) = suffix_array(text);
        let lcp_f = lcp_array(text, &sa_f, &isa_f);
        let rmq_f = Rmq::new(lcp_f);
        let rev: Vec<u8> = text.iter().rev().copied().collect();
        let (sa_r, isa_r) = suffix_array(&rev);
        let lcp_r = lcp_array(&rev, &sa_r, &isa_r);
        let rmq_r = Rmq::new(lcp_r);
        Lce {
            fwd_isa: isa_f,
            fwd_rmq: rmq_f,
            rev_isa: isa_r,
            rev_rmq: rmq_r,
            n: text.len(),
        }
    }

    /// lcp of the suffixes at 0-based starts a, b.
    fn forward(&self, a: usize, b: usize) -> usize {
        if a == b {
            return self.n - a;
        }
        if a >= self.n || b >= self.n {
            return 0;
        }
        let (mut x, mut y) = (self.fwd_isa[a], self.fwd_isa[b]);
        if x > y {
            std::mem::swap(&mut x, &mut y);
        }
        self.fwd_rmq.min(x as usize + 1, y as usize) as usize
    }

    /// Longest common suffix of the prefixes ending at 0-based a, b
    /// (inclusive).
    fn backward(&self, a: isize, b: isize) -> usize {
        if a < 0 || b < 0 {
            return 0;
        }
        let (a, b) = (a as usize, b as usize);
        if a == b {
            return a + 1;
        }
        let ra = self.n - 1 - a;
        let rb = self.n - 1 - b;
        let (mut x, mut y) = (self.rev_isa[ra], self.rev_isa[rb]);
        if x > y {
            std::mem::swap(&mut x, &mut y);
        }
        self.rev_rmq.min(x as usize + 1, y as usize) as usize
    }
}

/// Longest-Lyndon-prefix lengths (the Lyndon array) via next-smaller-value
/// over the inverse suffix array.
fn lyndon_array(isa: &[u32]) -> Vec<usize> {
    let n = isa.len();
    let mut lyn = vec![0usize; n];
    let mut stack: Vec<usize> = Vec::new();
    for i in (0..n).rev() {
        while let Some(&top) = stack.last() {
            if isa[top] > isa[i] {
                stack.pop();
            } else {
                break;
            }
        }
        lyn[i] = stack.last().map_or(n - i, |&j| j - i);
        stack.push(i);
    }
    lyn
}

/// Computes all runs with their Lyndon representations, sorted by start
/// position: candidate roots come from the Lyndon arrays of the text under
/// both symbol orders, extended by longest-common-extension queries.
pub fn compute_runs(t: &Text) -> Vec<Run> {
    let text = t.bytes();
    let n = text.len();
    if n < 2 {
        return Vec::new();
    }
    let lce = Lce::new(text);
    let lyn_fwd = lyndon_array(&lce.fwd_isa);
    let complement: Vec<u8> = text.iter().map(|&b| 255 - b).collect();
    let (_, isa_c) = suffix_array(&complement);
    let lyn_rev_order = lyndon_array(&isa_c);

    let mut candidates: Vec<(usize, usize, usize)> = Vec::new();
    for lyn in [&lyn_fwd, &lyn_rev_order] {
        for i in 0..n {
            let p = lyn[i];
            if i + p > n {
                continue;
            }
            let ext_right = if i + p < n { lce.forward(i, i + p) } else { 0 };
            let ext_left = lce.backward(i as isize - 1, (i + p - 1) as isize);
            if ext_left + ext_right >= p {
                let start = i - ext_left; // 0-based
                let len = p + ext_left + ext_right;
                candidates.push((start + 1, start + len, p));
            }
        }
    }
    candidates.sort_unstable();
    candidates.dedup();

    let mut runs = Vec::with_capacity(candidates.len());
    let mut last_interval = (0usize, 0usize);
    for (start, end, period) in candidates {
        if (start, end) == last_interval {
            // Same maximal region reached from both orders; the shortest
            // period is the one already kept.
            continue;
        }
        last_interval = (start, end);
        let window = &text[start - 1..start - 1 + period];
        let lead = minimal_rotation_shift(window);
        let len = end - start + 1;
        let rest = len - lead;
        runs.push(Run {
            frag: Fragment::new(start, end),
            period,
            lead,
            reps: rest / period,
            trail: rest % period,
        });
    }
    runs
}

/// Highest k with 2^k <= n.
pub fn max_level(n: usize) -> u32 {
    debug_assert!(n >= 1);
    n.ilog2()
}

/// Per-level bit vectors and block representations of
/// P_k = positions of periodic k-basic fragments, plus the complement
/// blocks N_k.
#[derive(Debug, Clone)]
pub struct PeriodicTables {
    pub n: usize,
    /// Indexed by level k; bit i set iff the k-basic fragment at i is
    /// periodic.
    pub bitvecs: Vec<BitVector>,
    /// Block representation of each P_k.
    pub p_blocks: Vec<Vec<(usize, usize)>>,
    /// Block representation of each N_k = [1, n_k] \ P_k.
    pub n_blocks: Vec<Vec<(usize, usize)>>,
}

impl PeriodicTables {
    pub fn build(runs: &[Run], n: usize) -> PeriodicTables {
        let levels = max_level(n) + 1;
        let mut intervals: Vec<Vec<(usize, usize)>> = vec![Vec::new(); levels as usize];
        for run in runs {
            let (i, j) = (run.frag.start, run.frag.end);
            // BF_k(i') is periodic iff it fits in a run of period <= 2^(k-1).
            let mut k = usize::BITS - run.period.leading_zeros(); // smallest k with 2^(k-1) >= period
            if 1usize << (k - 1) < run.period {
                k += 1;
            }
            while k < levels && (1usize << k) <= run.len() {
                intervals[k as usize].push((i, j - (1usize << k) + 1));
                k += 1;
            }
        }
        let mut bitvecs = Vec::with_capacity(levels as usize);
        let mut p_blocks = Vec::with_capacity(levels as usize);
        let mut n_blocks = Vec::with_capacity(levels as usize);
        for k in 0..levels {
            let nk = n - (1usize << k) + 1;
            let ivs = &mut intervals[k as usize];
            ivs.sort_unstable();
            let mut blocks: Vec<(usize, usize)> = Vec::new();
            for &(s, e) in ivs.iter() {
                match blocks.last_mut() {
                    Some(last) if s <= last.1 + 1 => last.1 = last.1.max(e),
                    _ => blocks.push((s, e)),
                }
            }
            let mut bv = BitVector::zeros(nk);
            for &(s, e) in &blocks {
                bv.set_range(s, e);
            }
            bv.finish();
            let mut compl = Vec::new();
            let mut cursor = 1usize;
            for &(s, e) in &blocks {
                if cursor < s {
                    compl.push((cursor, s - 1));
                }
                cursor = e + 1;
            }
            if cursor <= nk {
                compl.push((cursor, nk));
            }
            bitvecs.push(bv);
            p_blocks.push(blocks);
            n_blocks.push(compl);
        }
        PeriodicTables {
            n,
            bitvecs,
            p_blocks,
            n_blocks,
        }
    }

    pub fn levels(&self) -> usize {
        self.bitvecs.len()
    }

    /// Number of k-basic fragments.
    pub fn nk(&self, k: u32) -> usize {
        self.n - (1usize << k) + 1
    }

    #[inline]
    pub fn is_periodic(&self, k: u32, i: usize) -> bool {
        self.bitvecs[k as usize].get(i)
    }

    /// Step A: the smallest i with a periodic k-basic fragment
    /// [i, i + 2^k - 1] inside `frag`, via successor on the bit vector.
    pub fn find_periodic_kbasic(&self, k: u32, frag: Fragment) -> Option<usize> {
        let w = 1usize << k;
        if frag.len() < w {
            return None;
        }
        let bv = &self.bitvecs[k as usize];
        if frag.start > bv.len() {
            return None;
        }
        let i = bv.successor(frag.start)?;
        (i + w - 1 <= frag.end).then_some(i)
    }
}

/// Step B: per-level step functions R_k sending a position to the (at most
/// two) k-runs that induce a k-periodic fragment starting there.
#[derive(Debug, Clone)]
pub struct RunExtensionTable {
    /// Values are run indices into the runs list; u32::MAX is empty.
    evals: Vec<Evaluator<[u32; 2]>>,
}

const NO_RUN: u32 = u32::MAX;

impl RunExtensionTable {
    pub fn build(runs: &[Run], n: usize) -> RunExtensionTable {
        let levels = max_level(n) + 1;
        let mut events: Vec<Vec<(usize, bool, u32)>> = vec![Vec::new(); levels as usize];
        for (idx, run) in runs.iter().enumerate() {
            let (i, j) = (run.frag.start, run.frag.end);
            // run is a k-run iff |run| >= 2^k and per < 2^k; the smallest
            // such k is the bit length of the period.
            let mut k = (usize::BITS - run.period.leading_zeros()) as usize;
            while k < levels as usize && (1usize << k) <= run.len() {
                let w = 1usize << k;
                let hi = (j - 2 * run.period).min(j - w) + 1;
                debug_assert!(hi >= i);
                events[k].push((i, true, idx as u32));
                events[k].push((hi + 1, false, idx as u32));
                k += 1;
            }
        }
        let mut evals = Vec::with_capacity(levels as usize);
        for k in 0..levels as usize {
            let nk = n - (1usize << k) + 1;
            let evs = &mut events[k];
            evs.sort_unstable_by_key(|&(pos, add, _)| (pos, add));
            let mut active: Vec<u32> = Vec::new();
            let mut breakpoints: Vec<u32> = vec![1];
            let mut values: Vec<[u32; 2]> = vec![[NO_RUN, NO_RUN]];
            let mut e = 0usize;
            while e < evs.len() {
                let pos = evs[e].0;
                while e < evs.len() && evs[e].0 == pos {
                    let (_, add, idx) = evs[e];
                    if add {
                        active.push(idx);
                    } else {
                        active.retain(|&r| r != idx);
                    }
                    e += 1;
                }
                if pos > nk {
                    break;
                }
                assert!(
                    active.len() <= 2,
                    "more than two k-runs through one position"
                );
                let mut v = [NO_RUN, NO_RUN];
                for (slot, &r) in v.iter_mut().zip(active.iter()) {
                    *slot = r;
                }
                if *values.last().unwrap() != v {
                    if *breakpoints.last().unwrap() == pos as u32 {
                        *values.last_mut().unwrap() = v;
                    } else {
                        breakpoints.push(pos as u32);
                        values.push(v);
                    }
                }
            }
            let step = StepFunction::new(breakpoints, values, nk as u32);
            evals.push(Evaluator::build(&step, nk));
        }
        RunExtensionTable { evals }
    }

    /// The unique run extending `u` with the same shortest period, if `u`
    /// is periodic.
    pub fn run_of<'r>(&self, runs: &'r [Run], u: Fragment) -> Option<&'r Run> {
        if u.len() < 2 {
            return None;
        }
        let k = u.len().ilog2() as usize;
        if k >= self.evals.len() {
            return None;
        }
        let cands = self.evals[k].evaluate(u.start).ok()?;
        for &idx in cands.iter() {
            if idx == NO_RUN {
                continue;
            }
            let run = &runs[idx as usize];
            if run.frag.contains(u) && 2 * run.period <= u.len() {
                return Some(run);
            }
        }
        None
    }

    /// Total step-representation size, for the structural bound checks.
    pub fn total_steps(&self) -> usize {
        self.evals.iter().map(|e| e.values_len()).sum()
    }
}

/// Step C: per-level hash tables finding all k-runs of a given period that
/// intersect a range of length O(2^k).
#[derive(Debug, Clone)]
pub struct KRunLocator {
    maps: Vec<FlatMultiMap>,
    pub entry_count: usize,
}

impl KRunLocator {
    pub fn build(runs: &[Run], n: usize) -> KRunLocator {
        let levels = (max_level(n) + 1) as usize;
        let mut per_level: Vec<Vec<(u64, u32)>> = vec![Vec::new(); levels];
        let mut entry_count = 0usize;
        for (idx, run) in runs.iter().enumerate() {
            let mut k = (usize::BITS - run.period.leading_zeros()) as usize;
            while k < levels && (1usize << k) <= run.len() {
                let w = 1usize << k;
                let b_lo = run.frag.start.div_ceil(w);
                let b_hi = run.frag.end.div_ceil(w);
                for b in b_lo..=b_hi {
                    per_level[k].push((((b as u64) << 32) | run.period as u64, idx as u32));
                    entry_count += 1;
                }
                k += 1;
            }
        }
        let maps = per_level
            .into_iter()
            .map(|entries| {
                let mut map = FlatMultiMap::with_capacity(entries.len());
                for (key, idx) in entries {
                    map.insert(key, idx);
                }
                map
            })
            .collect();
        KRunLocator { maps, entry_count }
    }

    /// All k-runs with period `p` intersecting `[lo, hi]`, deduplicated,
    /// as indices into the runs list, appended to `out`.
    pub fn locate_into(&self, k: u32, p: usize, lo: usize, hi: usize, out: &mut Vec<u32>) {
        out.clear();
        let w = 1usize << k;
        let map = &self.maps[k as usize];
        let b_lo = lo.div_ceil(w);
        let b_hi = hi.div_ceil(w);
        for b in b_lo..=b_hi {
            map.for_each(((b as u64) << 32) | p as u64, |idx| {
                if !out.contains(&idx) {
                    out.push(idx);
                }
            });
        }
        out.sort_unstable();
    }

    pub fn locate<'r>(
        &self,
        runs: &'r [Run],
        k: u32,
        p: usize,
        lo: usize,
        hi: usize,
    ) -> Vec<&'r Run> {
        let mut idxs = Vec::new();
        self.locate_into(k, p, lo, hi, &mut idxs);
        idxs.iter()
            .map(|&i| &runs[i as usize])
            .filter(|r| r.frag.start <= hi && r.frag.end >= lo)
            .collect()
    }
}

/// Step D: two runs are compatible when they share period and Lyndon root.
pub fn runs_compatible(ix: &TextIndex, a: &Run, b: &Run) -> bool {
    a.period == b.period && ix.fragments_equal_single(a.root(), b.root())
}

/// Step F: occurrences of x in y when both are periodic with a common
/// Lyndon root of length `root_len`, as 1-based positions inside y.
///
/// Synchronization of primitive roots forces every occurrence to align the
/// root boundaries, so the positions are exactly one congruence class.
pub fn lyndon_occurrences(
    x_rep: (usize, usize, usize),
    y_rep: (usize, usize, usize),
    root_len: usize,
    x_len: usize,
    y_len: usize,
) -> ArithProgression {
    debug_assert_eq!(x_len, x_rep.0 + x_rep.1 * root_len + x_rep.2);
    debug_assert_eq!(y_len, y_rep.0 + y_rep.1 * root_len + y_rep.2);
    if x_len > y_len {
        return ArithProgression::EMPTY;
    }
    // Positions i with i ≡ lead_y - lead_x + 1 (mod root_len).
    let residue = (y_rep.0 + root_len - x_rep.0 % root_len) % root_len; // (lead_y - lead_x) mod L
    let first = residue + 1;
    let limit = y_len - x_len + 1;
    if first > limit {
        return ArithProgression::EMPTY;
    }
    ArithProgression::new(first, root_len, (limit - first) / root_len + 1)
}
