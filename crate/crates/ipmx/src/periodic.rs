//! Occurrence queries for patterns containing a periodic basic factor:
//! extend the factor to a run, locate compatible runs in the target window,
//! and read occurrences off the Lyndon representations.

use crate::error::{Error, Result};
use crate::runs::{lyndon_occurrences, KRunLocator, PeriodicTables, Run, RunExtensionTable};
use crate::text::{
    fragments_equal_fast, merge_progressions, ArithProgression, Fragment, Text, TextIndex,
};

/// Bundles the periodic-case structures; borrowed from the index.
pub struct PeriodicEngine<'a> {
    pub text: &'a Text,
    pub ix: &'a TextIndex,
    pub runs: &'a [Run],
    pub tables: &'a PeriodicTables,
    pub ext: &'a RunExtensionTable,
    pub kloc: &'a KRunLocator,
}

impl<'a> PeriodicEngine<'a> {
    /// All occurrence start positions of word(x) inside y, absolute, as a
    /// single progression. Requires |y| <= 2|x| and that x contains a
    /// periodic k-basic fragment for the given level.
    pub fn query(&self, x: Fragment, y: Fragment, k: u32) -> Result<ArithProgression> {
        if y.len() < x.len() {
            return Ok(ArithProgression::EMPTY);
        }
        // Step A: a periodic k-basic fragment z inside x.
        let z_start = self
            .tables
            .find_periodic_kbasic(k, x)
            .ok_or(Error::ConstraintViolation(
                "pattern has no periodic basic factor at this level",
            ))?;
        let z = Fragment::basic(z_start, k);

        // Step B: the run extending z.
        let alpha = self
            .ext
            .run_of(self.runs, z)
            .expect("periodic basic fragment must extend to a run");

        // Step C: k-runs of the same period intersecting y. Any occurrence
        // of x carries an image of z, so probing the span of those images
        // suffices and touches fewer blocks than all of y.
        let z_off = z.start - x.start;
        let p_lo = y.start + z_off;
        let p_hi = y.end - x.len() + z_off + (1usize << k);
        let mut idxs: Vec<u32> = Vec::with_capacity(8);
        self.kloc.locate_into(k, alpha.period, p_lo, p_hi, &mut idxs);

        // Step D: keep the compatible ones.
        let covered = alpha.frag.contains(x);
        let mut parts: Vec<ArithProgression> = Vec::with_capacity(idxs.len());
        let mut candidates: Vec<usize> = Vec::new();
        for &idx in &idxs {
            let other = &self.runs[idx as usize];
            if other.frag.end < y.start || other.frag.start > y.end {
                continue;
            }
            if other.period != alpha.period
                || !fragments_equal_fast(self.text, self.ix, alpha.root(), other.root())
            {
                continue;
            }
            if covered {
                // Step F: occurrences inside y ∩ α' via Lyndon arithmetic.
                let Some(w) = other.frag.intersect(y) else {
                    continue;
                };
                if w.len() < x.len() {
                    continue;
                }
                let x_rep = alpha.lyndon_of_subfragment(x);
                let w_rep = other.lyndon_of_subfragment(w);
                let rel = lyndon_occurrences(x_rep, w_rep, alpha.period, x.len(), w.len());
                if !rel.is_empty() {
                    parts.push(ArithProgression::new(
                        w.start - 1 + rel.first,
                        rel.diff,
                        rel.count,
                    ));
                }
            } else {
                // Step E: at most two boundary-aligned candidates.
                if alpha.frag.end < x.end {
                    let rel = alpha.frag.end - x.start; // offset of the run's right end in x
                    if other.frag.end >= rel {
                        let c = other.frag.end - rel;
                        self.verify_candidate(x, y, c, &mut candidates);
                    }
                }
                if alpha.frag.start > x.start {
                    let rel = alpha.frag.start - x.start;
                    if other.frag.start > rel {
                        let c = other.frag.start - rel;
                        self.verify_candidate(x, y, c, &mut candidates);
                    }
                }
            }
        }

        if !covered {
            candidates.sort_unstable();
            candidates.dedup();
            for &c in &candidates {
                parts.push(ArithProgression::singleton(c));
            }
        }
        parts.sort_by_key(|p| p.first);
        // Step G: symbolic merge with the run period as the expected
        // difference of any multi-element part.
        merge_progressions(&parts, alpha.period)
    }

    fn verify_candidate(&self, x: Fragment, y: Fragment, c: usize, out: &mut Vec<usize>) {
        if c < y.start || c + x.len() - 1 > y.end {
            return;
        }
        let cand = Fragment::new(c, c + x.len() - 1);
        if fragments_equal_fast(self.text, self.ix, cand, x) {
            out.push(c);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::runs::{compute_runs, KRunLocator, PeriodicTables, RunExtensionTable};
    use crate::text::Text;

    struct Fixture {
        text: Text,
        ix: TextIndex,
        runs: Vec<Run>,
        tables: PeriodicTables,
        ext: RunExtensionTable,
        kloc: KRunLocator,
    }

    impl Fixture {
        fn new(word: &[u8]) -> Fixture {
            let text = Text::new(word.to_vec()).unwrap();
            let ix = TextIndex::build(&text);
            let runs = compute_runs(&text);
            let tables = PeriodicTables::build(&runs, text.len());
            let ext = RunExtensionTable::build(&runs, text.len());
            let kloc = KRunLocator::build(&runs, text.len());
            Fixture {
                text,
                ix,
                runs,
                tables,
                ext,
                kloc,
            }
        }

        fn engine(&self) -> PeriodicEngine<'_> {
            PeriodicEngine {
                text: &self.text,
                ix: &self.ix,
                runs: &self.runs,
                tables: &self.tables,
                ext: &self.ext,
                kloc: &self.kloc,
            }
        }
    }

    fn layer(m: usize) -> u32 {
        m.ilog2() - 1
    }

    #[test]
    fn periodic_word_queries() {
        let f = Fixture::new(b"caabaabaabaabaabaabac");
        let x = Fragment::new(2, 7);
        let y = Fragment::new(5, 16);
        let got = f.engine().query(x, y, layer(x.len())).unwrap();
        assert_eq!(got, ArithProgression::new(5, 3, 3));

        let y = Fragment::new(13, 20);
        let got = f.engine().query(x, y, layer(x.len())).unwrap();
        assert_eq!(got, ArithProgression::singleton(14));
    }

    #[test]
    fn boundary_mismatch_candidates_are_verified() {
        let f = Fixture::new(b"aabaaxaabaa");
        // x = "aabaa" contains the periodic 1-basic "aa"; its run does not
        // cover x.
        let x = Fragment::new(1, 5);
        let y = Fragment::new(5, 11);
        let got = f.engine().query(x, y, layer(x.len())).unwrap();
        assert_eq!(
            got.to_vec(),
            oracle::naive_ipm(f.text.bytes(), (1, 5), (5, 11))
        );
    }

    #[test]
    fn step_e_can_return_three_spread_occurrences() {
        // Occurrences chained with per(x), not the run period.
        let f = Fixture::new(b"aabaabaabaab");
        let x = Fragment::new(1, 6); // "aabaab", per 3; run of "aa" is [1,2]
        let y = Fragment::new(1, 12);
        let got = f.engine().query(x, y, 1).unwrap();
        assert_eq!(got, ArithProgression::new(1, 3, 3));
    }

    #[test]
    fn periodic_queries_match_oracle_on_periodic_rich_texts() {
        let mut state = 0x9E12u64;
        for _ in 0..250 {
            let n = 4 + (crate::rng::splitmix64(&mut state) % 60) as usize;
            let bytes: Vec<u8> = (0..n)
                .map(|_| b'a' + (crate::rng::splitmix64(&mut state) % 2) as u8)
                .collect();
            let f = Fixture::new(&bytes);
            let eng = f.engine();
            for xs in 1..=n {
                for xl in 2..=(n - xs + 1) {
                    let x = Fragment::new(xs, xs + xl - 1);
                    let k = layer(xl);
                    // Only patterns the periodic path is responsible for.
                    if f.tables.find_periodic_kbasic(k, x).is_none() {
                        continue;
                    }
                    // A couple of target windows per pattern.
                    for _ in 0..2 {
                        let max_len = (2 * xl).min(n);
                        let yl = xl
                            + (crate::rng::splitmix64(&mut state) % (max_len - xl + 1) as u64)
                                as usize;
                        let ys =
                            1 + (crate::rng::splitmix64(&mut state) % (n - yl + 1) as u64) as usize;
                        let y = Fragment::new(ys, ys + yl - 1);
                        let got = eng.query(x, y, k).unwrap();
                        let want = oracle::naive_ipm(&bytes, (x.start, x.end), (y.start, y.end));
                        assert_eq!(
                            got.to_vec(),
                            want,
                            "text={:?} x={:?} y={:?} k={k}",
                            String::from_utf8_lossy(&bytes),
                            x,
                            y
                        );
                    }
                }
            }
        }
    }
}
