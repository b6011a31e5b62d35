//! Construction of the samples partial assignments: candidate sets grown
//! by FillGaps, the sliding-window minimum (Slider), and packaging into
//! per-level evaluators and locators.

use crate::dbf::{DbfLevel, DbfStream};
use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::runs::PeriodicTables;
use crate::succinct::{Evaluator, Locator, StepFunction};
use crate::text::Text;

/// Candidate positions for one level, each with its identifier.
#[derive(Debug, Clone, Default)]
pub struct LevelCandidates {
    pub k: u32,
    pub positions: Vec<u32>,
    pub ids: Vec<u32>,
}

/// Candidate sets for all levels; guaranteed to cover every sample
/// position of the assignment drawn from the same identifier stream.
#[derive(Debug, Clone, Default)]
pub struct CandidateSet {
    pub levels: Vec<LevelCandidates>,
    pub total: usize,
}

/// `A ∪ ⋃ {[i, i+delta] ⊆ I \ A}`: adds every maximal gap of `I` longer
/// than `delta`, in full. `a` must be sorted and contained in `I`.
pub fn fill_gaps(a: &[usize], delta: usize, interval: (usize, usize)) -> Vec<usize> {
    let (lo, hi) = interval;
    let mut out = Vec::new();
    let mut cursor = lo;
    let push_gap = |out: &mut Vec<usize>, from: usize, to: usize| {
        // Gap [from, to] gets included entirely when it fits a window of
        // delta + 1 consecutive absent positions.
        if to >= from && to - from >= delta {
            out.extend(from..=to);
        }
    };
    for &p in a {
        debug_assert!((lo..=hi).contains(&p));
        if p > cursor {
            push_gap(&mut out, cursor, p - 1);
        }
        out.push(p);
        cursor = p + 1;
    }
    if cursor <= hi {
        push_gap(&mut out, cursor, hi);
    }
    out
}

/// The per-level candidate threshold ℓ_k = ⌊k·m_k / 2^(k-1)⌋, with the
/// degenerate level 0 taking every identifier.
fn level_threshold(k: u32, m: usize) -> u32 {
    if k == 0 {
        m as u32
    } else {
        ((k as u64 * m as u64) >> (k - 1)).min(m as u64) as u32
    }
}

/// Builds candidate sets for every level from a fresh identifier stream:
/// positions of low identifiers, restricted to non-periodic basic
/// fragments, closed with FillGaps per block of N_k.
pub fn build_candidates(
    text: &Text,
    tables: &PeriodicTables,
    rng: Rng,
    deterministic: bool,
) -> CandidateSet {
    let mut stream = DbfStream::new(text, rng, deterministic);
    let mut set = CandidateSet::default();
    while let Some(level) = stream.next_level() {
        let k = level.k;
        if text.len() < (1usize << (k + 1)) {
            break; // no (k+1)-basic fragments, so no assignment at level k
        }
        let lc = build_level_candidates(&level, tables);
        set.total += lc.positions.len();
        set.levels.push(lc);
    }
    set
}

fn build_level_candidates(level: &DbfLevel, tables: &PeriodicTables) -> LevelCandidates {
    let k = level.k;
    let threshold = level_threshold(k, level.count());
    let mut a: Vec<usize> = Vec::new();
    for id in 1..=threshold {
        let occ = level.occurrences(id);
        if occ.is_empty() {
            continue;
        }
        // Periodicity is a property of the factor: checking one occurrence
        // settles the whole bucket.
        if tables.is_periodic(k, occ[0] as usize) {
            continue;
        }
        a.extend(occ.iter().map(|&p| p as usize));
    }
    a.sort_unstable();

    let delta = 1usize << k;
    let mut positions: Vec<u32> = Vec::new();
    let blocks = &tables.n_blocks[k as usize];
    let mut lo = 0usize;
    for &(bs, be) in blocks {
        let hi = a.partition_point(|&p| p <= be);
        let filled = fill_gaps(&a[lo..hi], delta, (bs, be));
        positions.extend(filled.into_iter().map(|p| p as u32));
        lo = hi;
    }
    let ids = positions.iter().map(|&p| level.id(p as usize)).collect();
    LevelCandidates { k, positions, ids }
}

/// Re-draws candidate sets until their total size fits the budget
/// (`threshold_factor * n`), reseeding independently per attempt.
/// In deterministic mode the first attempt is taken as-is: with the
/// identity permutation there is no size expectation to retry against.
pub fn retry_until_small(
    text: &Text,
    tables: &PeriodicTables,
    seed: u64,
    deterministic: bool,
    threshold_factor: usize,
    attempt_cap: u32,
) -> Result<(CandidateSet, u32)> {
    let budget = threshold_factor * text.len();
    let mut last_total = 0usize;
    for attempt in 0..attempt_cap.max(1) {
        let rng = Rng::for_attempt(seed, attempt);
        let set = build_candidates(text, tables, rng, deterministic);
        if deterministic || set.total <= budget {
            return Ok((set, attempt + 1));
        }
        last_total = set.total;
    }
    Err(Error::AttemptCap {
        attempts: attempt_cap,
        last_total,
        budget,
    })
}

/// Sliding lexicographic minimum: for each `i` in `[1, m - d]`, the
/// smallest `(id, pos)` pair with `pos` in `[i, i + d]`, as a step
/// representation (None where the window is empty).
///
/// `pairs` must be sorted by position. A monotone deque provides the
/// min-tracking queue.
pub fn slider(pairs: &[(u32, u32)], d: usize, m: usize) -> StepFunction<Option<(u32, u32)>> {
    debug_assert!(pairs.windows(2).all(|w| w[0].1 < w[1].1));
    let domain_end = m.saturating_sub(d);
    let mut breakpoints: Vec<u32> = Vec::new();
    let mut values: Vec<Option<(u32, u32)>> = Vec::new();
    if domain_end == 0 {
        return StepFunction::new(breakpoints, values, 0);
    }

    // Events: window [i, i+d] gains pairs at pos = i + d when i = pos - d,
    // and loses pos = i - 1 when i = pos + 1. Between events the minimum
    // is constant, so only event positions can start a new step.
    let mut deque: std::collections::VecDeque<(u32, u32)> = std::collections::VecDeque::new();
    let mut enter = 0usize; // next pair to enqueue
    let mut leave = 0usize; // next pair to expire

    // Prime the window for i = 1: all pairs with pos <= 1 + d.
    let push = |deque: &mut std::collections::VecDeque<(u32, u32)>, pair: (u32, u32)| {
        while deque.back().is_some_and(|&b| b > pair) {
            deque.pop_back();
        }
        deque.push_back(pair);
    };

    let mut i = 1usize;
    loop {
        while enter < pairs.len() && (pairs[enter].1 as usize) <= i + d {
            push(&mut deque, pairs[enter]);
            enter += 1;
        }
        while leave < pairs.len() && (pairs[leave].1 as usize) < i {
            if deque.front() == Some(&pairs[leave]) {
                deque.pop_front();
            }
            leave += 1;
        }
        let value = deque.front().copied();
        if values.last() != Some(&value) {
            breakpoints.push(i as u32);
            values.push(value);
        }
        // Jump to the next event position: a pair entering the window at
        // pos - d or the current front expiring at pos + 1. Both lie
        // strictly ahead of i after the drains above.
        let next_enter = (enter < pairs.len()).then(|| pairs[enter].1 as usize - d);
        let next_leave = (leave < pairs.len()).then(|| pairs[leave].1 as usize + 1);
        let next = match (next_enter, next_leave) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => break,
        };
        debug_assert!(next > i);
        if next > domain_end {
            break;
        }
        i = next;
    }
    StepFunction::new(breakpoints, values, domain_end as u32)
}

/// Per-level samples partial assignment in step representation: payload is
/// (sample position, identifier), None marking the periodic (undefined)
/// stretches.
pub type SampleStep = StepFunction<Option<(u32, u32)>>;

/// Combines the slider output with the defined-domain blocks derived from
/// N_k: blocks of length at most 2^k disappear, the rest are trimmed by
/// 2^k on the right, and everything outside is undefined.
pub fn assemble_assignment(cand: &CandidateSet, tables: &PeriodicTables) -> Vec<SampleStep> {
    let mut out = Vec::with_capacity(cand.levels.len());
    for lc in &cand.levels {
        let k = lc.k;
        let w = 1usize << k;
        let nk = tables.nk(k);
        let nk1 = nk - w; // domain of sample_k is [1, n_{k+1}]
        let pairs: Vec<(u32, u32)> = lc
            .ids
            .iter()
            .zip(&lc.positions)
            .map(|(&id, &p)| (id, p))
            .collect();
        let g = slider(&pairs, w, nk);

        let mut breakpoints: Vec<u32> = Vec::new();
        let mut values: Vec<Option<(u32, u32)>> = Vec::new();
        let emit = |bp: u32,
                    v: Option<(u32, u32)>,
                    bps: &mut Vec<u32>,
                    vals: &mut Vec<Option<(u32, u32)>>| {
            if vals.last() == Some(&v) {
                return;
            }
            bps.push(bp);
            vals.push(v);
        };
        let mut cursor = 1usize;
        for &(bs, be) in &tables.n_blocks[k as usize] {
            if be - bs < w {
                continue; // too short to host a defined stretch
            }
            let end = be - w; // trimmed block [bs, be - 2^k]
            if bs > nk1 {
                break;
            }
            let end = end.min(nk1);
            if cursor < bs {
                emit(cursor as u32, None, &mut breakpoints, &mut values);
            }
            // Copy the slider steps restricted to [bs, end].
            let start_idx = g.breakpoints.partition_point(|&b| b <= bs as u32) - 1;
            emit(
                bs as u32,
                g.values[start_idx],
                &mut breakpoints,
                &mut values,
            );
            for idx in start_idx + 1..g.breakpoints.len() {
                let b = g.breakpoints[idx] as usize;
                if b > end {
                    break;
                }
                emit(b as u32, g.values[idx], &mut breakpoints, &mut values);
            }
            cursor = end + 1;
        }
        if cursor <= nk1 {
            emit(cursor as u32, None, &mut breakpoints, &mut values);
        }
        out.push(StepFunction::new(breakpoints, values, nk1 as u32));
    }
    out
}

/// The queryable form of one level: the evaluator over the assignment and
/// the locator over sample occurrences keyed by identifier.
#[derive(Debug, Clone)]
pub struct LevelStructures {
    pub k: u32,
    /// Payload is [id, position]; id takes `NO_SAMPLE` on the undefined
    /// (periodic) stretches.
    pub evaluator: Evaluator<[u32; 2]>,
    pub locator: Locator,
    pub step_size: usize,
}

/// Sentinel identifier marking the undefined stretches of an assignment.
pub const NO_SAMPLE: u32 = u32::MAX;

/// Builds the evaluator and locator for one level; `d = 2^(k-1)` sparsity
/// is verified by the locator build.
pub fn build_level_structures(step: &SampleStep, k: u32, nk1: usize) -> Result<LevelStructures> {
    let packed = StepFunction::new(
        step.breakpoints.clone(),
        step.values
            .iter()
            .map(|v| v.map_or([NO_SAMPLE, 0], |(id, pos)| [id, pos]))
            .collect(),
        step.domain_end,
    );
    let evaluator = Evaluator::build(&packed, nk1);
    let mut entries: Vec<(u32, usize)> = step
        .values
        .iter()
        .filter_map(|v| v.map(|(id, pos)| (id, pos as usize)))
        .collect();
    entries.sort_unstable();
    entries.dedup();
    let d = if k == 0 { 0 } else { 1usize << (k - 1) };
    let locator = Locator::build(&entries, d)?;
    Ok(LevelStructures {
        k,
        evaluator,
        locator,
        step_size: step.size(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::runs::compute_runs;

    #[test]
    fn fill_gaps_reference_instance() {
        let a = [7usize, 9, 13, 20, 21, 26, 32, 34];
        let c = fill_gaps(&a, 4, (1, 34));
        assert_eq!(c, oracle::naive_fillgaps(&a, 4, (1, 34)));
        assert_eq!(c.len(), a.len() + 17);
    }

    #[test]
    fn fill_gaps_degenerate() {
        let full: Vec<usize> = (3..=9).collect();
        assert_eq!(fill_gaps(&full, 2, (3, 9)), full);
        assert_eq!(fill_gaps(&[], 4, (1, 3)), Vec::<usize>::new());
        assert_eq!(fill_gaps(&[], 2, (1, 3)), vec![1, 2, 3]);
    }

    #[test]
    fn fill_gaps_matches_naive_on_random_inputs() {
        let mut state = 0xFA11u64;
        for _ in 0..200 {
            let lo = 1 + (crate::rng::splitmix64(&mut state) % 5) as usize;
            let hi = lo + (crate::rng::splitmix64(&mut state) % 60) as usize;
            let delta = (crate::rng::splitmix64(&mut state) % 8) as usize + 1;
            let mut a: Vec<usize> = (lo..=hi)
                .filter(|_| crate::rng::splitmix64(&mut state) % 4 == 0)
                .collect();
            a.dedup();
            assert_eq!(
                fill_gaps(&a, delta, (lo, hi)),
                oracle::naive_fillgaps(&a, delta, (lo, hi)),
                "a={a:?} delta={delta} I=({lo},{hi})"
            );
        }
    }

    #[test]
    fn slider_reference_instance() {
        // a = 4 3 1 2 4 1 2 4 1 2 3 4 2 under π = (3,2,1,4), Δ = 4.
        let a = [4u32, 3, 1, 2, 4, 1, 2, 4, 1, 2, 3, 4, 2];
        let pi = [0u32, 3, 2, 1, 4];
        let pairs: Vec<(u32, u32)> = a
            .iter()
            .enumerate()
            .map(|(i, &v)| (pi[v as usize], i as u32 + 1))
            .collect();
        let mut sorted = pairs.clone();
        sorted.sort_by_key(|&(_, p)| p);
        let step = slider(&sorted, 4, 13);
        let got: Vec<(u32, u32)> = step
            .breakpoints
            .iter()
            .zip(&step.values)
            .map(|(&b, v)| (b, v.unwrap().1))
            .collect();
        assert_eq!(got, vec![(1, 2), (3, 4), (5, 7), (7, 11)]);
    }

    #[test]
    fn slider_trivial_cases() {
        // Single pair covering the whole domain.
        let step = slider(&[(5, 5)], 4, 9);
        assert_eq!(step.breakpoints, vec![1]);
        assert_eq!(step.values, vec![Some((5, 5))]);

        // Single pair leaving the window mid-domain.
        let step = slider(&[(5, 3)], 4, 8);
        assert_eq!(step.breakpoints, vec![1, 4]);
        assert_eq!(step.values, vec![Some((5, 3)), None]);

        // No pairs: all undefined.
        let step = slider(&[], 2, 6);
        assert_eq!(step.breakpoints, vec![1]);
        assert_eq!(step.values, vec![None]);
    }

    #[test]
    fn slider_matches_naive() {
        let mut state = 0x51D3u64;
        for _ in 0..300 {
            let m = 2 + (crate::rng::splitmix64(&mut state) % 40) as usize;
            let d = 1 + (crate::rng::splitmix64(&mut state) % 6) as usize;
            if m <= d {
                continue;
            }
            let mut pairs: Vec<(u32, u32)> = Vec::new();
            for p in 1..=m {
                if crate::rng::splitmix64(&mut state) % 3 != 0 {
                    pairs.push((
                        (crate::rng::splitmix64(&mut state) % 9) as u32 + 1,
                        p as u32,
                    ));
                }
            }
            pairs.sort_by_key(|&(_, p)| p);
            let step = slider(&pairs, d, m);
            let naive_pairs: Vec<(u32, usize)> =
                pairs.iter().map(|&(id, p)| (id, p as usize)).collect();
            let want = oracle::naive_slider(&naive_pairs, d, m);
            for (i, w) in want.iter().enumerate() {
                let got = step.eval(i + 1).unwrap();
                let got = got.map(|(id, p)| (id, p as usize));
                assert_eq!(got, *w, "i={} pairs={pairs:?} d={d} m={m}", i + 1);
            }
        }
    }

    fn assignment_for(word: &[u8], seed: u64, deterministic: bool) -> (Text, Vec<SampleStep>) {
        let t = Text::new(word.to_vec()).unwrap();
        let runs = compute_runs(&t);
        let tables = PeriodicTables::build(&runs, t.len());
        let (cand, _) = retry_until_small(&t, &tables, seed, deterministic, 40, 32).unwrap();
        let steps = assemble_assignment(&cand, &tables);
        (t, steps)
    }

    #[test]
    fn reference_word_assignment_deterministic() {
        let (_, steps) = assignment_for(b"cabacabcbacbcabcbaca", 0, true);
        let printable: Vec<Vec<(u32, u32)>> = steps
            .iter()
            .map(|s| {
                s.breakpoints
                    .iter()
                    .zip(&s.values)
                    .map(|(&b, v)| (b, v.unwrap().1))
                    .collect()
            })
            .collect();
        assert_eq!(
            printable[0],
            vec![
                (1, 2),
                (3, 4),
                (5, 6),
                (7, 7),
                (8, 9),
                (9, 10),
                (11, 12),
                (13, 14),
                (15, 15),
                (16, 17),
                (17, 18),
                (19, 20)
            ]
        );
        assert_eq!(
            printable[1],
            vec![
                (1, 2),
                (3, 4),
                (4, 6),
                (7, 9),
                (8, 10),
                (11, 12),
                (12, 14),
                (15, 17),
                (16, 18)
            ]
        );
        assert_eq!(printable[2], vec![(1, 2), (3, 6), (7, 10), (10, 14)]);
        assert_eq!(printable[3], vec![(1, 2), (3, 6)]);
    }

    #[test]
    fn unary_text_assignment() {
        let (_, steps) = assignment_for(&[b'a'; 64], 1, false);
        // Level 0 is fully defined (no length-1 fragment is periodic);
        // all higher levels are fully undefined.
        assert!(steps[0].values.iter().all(|v| v.is_some()));
        for s in &steps[1..] {
            assert_eq!(s.values, vec![None]);
        }
    }

    #[test]
    fn assignment_matches_direct_argmin() {
        let mut state = 0xAB5u64;
        for trial in 0..60 {
            let n = 2 + (crate::rng::splitmix64(&mut state) % 200) as usize;
            let sigma = [2u64, 3][trial % 2];
            let bytes: Vec<u8> = (0..n)
                .map(|_| b'a' + (crate::rng::splitmix64(&mut state) % sigma) as u8)
                .collect();
            let t = Text::new(bytes.clone()).unwrap();
            let runs = compute_runs(&t);
            let tables = PeriodicTables::build(&runs, n);
            let seed = crate::rng::splitmix64(&mut state);
            let (cand, _) = retry_until_small(&t, &tables, seed, false, 40, 32).unwrap();
            let steps = assemble_assignment(&cand, &tables);

            // Recompute the identifier stream with the same seed to drive
            // the direct per-position argmin oracle.
            let mut stream = DbfStream::new(&t, Rng::for_attempt(seed, 0), false);
            let mut k = 0u32;
            while let Some(level) = stream.next_level() {
                if n < (1usize << (k + 1)) {
                    break;
                }
                let w = 1usize << k;
                let nk = level.nk();
                let ids: Vec<u32> = (1..=nk).map(|i| level.id(i)).collect();
                let periodic: Vec<bool> = (1..=nk).map(|i| tables.is_periodic(k, i)).collect();
                let want = oracle::naive_argmin_assignment(&ids, &periodic, w);
                let step = &steps[k as usize];
                for (i, w_i) in want.iter().enumerate() {
                    let got = step.eval(i + 1).unwrap().map(|(_, p)| p as usize);
                    assert_eq!(
                        got,
                        *w_i,
                        "n={n} k={k} i={} text={:?}",
                        i + 1,
                        String::from_utf8_lossy(&bytes)
                    );
                }
                k += 1;
            }
        }
    }

    #[test]
    fn equal_fragments_get_equal_sample_offsets() {
        // Equal (k+1)-basic fragments must agree on sample position
        // relative to their own start, or both be undefined.
        let mut state = 0x0FF5u64;
        for _ in 0..40 {
            let n = 4 + (crate::rng::splitmix64(&mut state) % 120) as usize;
            let bytes: Vec<u8> = (0..n)
                .map(|_| b'a' + (crate::rng::splitmix64(&mut state) % 2) as u8)
                .collect();
            let t = Text::new(bytes.clone()).unwrap();
            let runs = compute_runs(&t);
            let tables = PeriodicTables::build(&runs, n);
            let seed = crate::rng::splitmix64(&mut state);
            let (cand, _) = retry_until_small(&t, &tables, seed, false, 40, 32).unwrap();
            let steps = assemble_assignment(&cand, &tables);
            for (k, step) in steps.iter().enumerate() {
                let w = 1usize << (k + 1);
                let nk1 = n - w + 1;
                for i in 1..=nk1 {
                    for j in i + 1..=nk1 {
                        if bytes[i - 1..i - 1 + w] != bytes[j - 1..j - 1 + w] {
                            continue;
                        }
                        let a = step.eval(i).unwrap().map(|(_, p)| p as usize - i);
                        let b = step.eval(j).unwrap().map(|(_, p)| p as usize - j);
                        assert_eq!(a, b, "k={k} i={i} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn candidates_cover_all_sample_positions() {
        // Coverage guarantee: C_k contains every value the assignment
        // takes, for any seed.
        let mut state = 0x600Du64;
        for _ in 0..40 {
            let n = 2 + (crate::rng::splitmix64(&mut state) % 300) as usize;
            let bytes: Vec<u8> = (0..n)
                .map(|_| b'a' + (crate::rng::splitmix64(&mut state) % 2) as u8)
                .collect();
            let t = Text::new(bytes).unwrap();
            let runs = compute_runs(&t);
            let tables = PeriodicTables::build(&runs, n);
            let seed = crate::rng::splitmix64(&mut state);
            let (cand, _) = retry_until_small(&t, &tables, seed, false, 40, 32).unwrap();
            let steps = assemble_assignment(&cand, &tables);
            for (lc, step) in cand.levels.iter().zip(&steps) {
                let cset: std::collections::HashSet<u32> = lc.positions.iter().copied().collect();
                for v in step.values.iter().flatten() {
                    assert!(cset.contains(&v.1));
                }
            }
        }
    }

    #[test]
    fn retry_cap_is_enforced() {
        let t = Text::new(vec![b'a'; 100]).unwrap();
        let runs = compute_runs(&t);
        let tables = PeriodicTables::build(&runs, 100);
        // Budget of zero candidates cannot be met.
        let err = retry_until_small(&t, &tables, 0, false, 0, 4).unwrap_err();
        assert!(matches!(err, Error::AttemptCap { attempts: 4, .. }));
        // A generous budget succeeds on the first attempt.
        let (_, attempts) = retry_until_small(&t, &tables, 0, false, 40, 4).unwrap();
        assert_eq!(attempts, 1);
    }

    #[test]
    fn level_structures_hold_sample_occurrences() {
        let (_, steps) = assignment_for(b"cabacabcbacbcabcbaca", 0, true);
        let nk1 = |k: u32| 20usize - (1usize << (k + 1)) + 1;
        let level3 = build_level_structures(&steps[3], 3, nk1(3)).unwrap();
        let id2 = steps[3].values[0].unwrap().0;
        let id6 = steps[3].values[1].unwrap().0;
        assert_eq!(level3.locator.locate(id2, 1, 13), vec![2]);
        assert_eq!(level3.locator.locate(id6, 1, 13), vec![6]);
        assert_eq!(level3.step_size, 2);
    }
}
