//! The complete immutable query structure: text toolbox, runs machinery,
//! per-level sample evaluators and locators, and the range-successor
//! index, with the top-level occurrence queries and serialization.

use crate::compression::RangeSuccessorIndex;
use crate::error::{Error, Result};
use crate::periodic::PeriodicEngine;
use crate::runs::{compute_runs, KRunLocator, PeriodicTables, Run, RunExtensionTable};
use crate::sampling::{
    assemble_assignment, build_level_structures, retry_until_small, LevelStructures, SampleStep,
};
use crate::succinct::StepFunction;
use crate::text::{ArithProgression, Fragment, Text, TextIndex};

/// Build-time knobs. The index is fully determined by (text, config).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexConfig {
    pub seed: u64,
    /// Identity permutations instead of random ones: samples become the
    /// lexicographically smallest sub-window, handy for worked examples,
    /// but the size guarantees no longer hold.
    pub deterministic: bool,
    /// Candidate budget as a multiple of n.
    pub candidate_budget_factor: usize,
    /// Attempts before construction gives up.
    pub attempt_cap: u32,
}

impl Default for IndexConfig {
    fn default() -> Self {
        IndexConfig {
            seed: 0,
            deterministic: false,
            candidate_budget_factor: 40,
            attempt_cap: 32,
        }
    }
}

/// Counters recorded during construction, used by the structural checks.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    pub attempts: u32,
    pub candidate_total: usize,
    pub sample_steps_total: usize,
}

/// The immutable index; safe for any number of concurrent readers.
pub struct IpmIndex {
    text: Text,
    tix: TextIndex,
    runs: Vec<Run>,
    tables: PeriodicTables,
    ext: RunExtensionTable,
    kloc: KRunLocator,
    sample_steps: Vec<SampleStep>,
    levels: Vec<LevelStructures>,
    rsucc: RangeSuccessorIndex,
    config: IndexConfig,
    stats: BuildStats,
}

/// The level consulted for a pattern of length m >= 2: k with
/// 2^(k+1) <= m < 2^(k+2), so the (k+1)-basic prefix and the sample both
/// fit inside the pattern.
pub fn layer(m: usize) -> u32 {
    debug_assert!(m >= 2);
    m.ilog2() - 1
}

impl IpmIndex {
    pub fn build(text: Text, config: IndexConfig) -> Result<IpmIndex> {
        let tix = TextIndex::build(&text);
        let runs = compute_runs(&text);
        let tables = PeriodicTables::build(&runs, text.len());
        let ext = RunExtensionTable::build(&runs, text.len());
        let kloc = KRunLocator::build(&runs, text.len());
        let (cand, attempts) = retry_until_small(
            &text,
            &tables,
            config.seed,
            config.deterministic,
            config.candidate_budget_factor,
            config.attempt_cap,
        )?;
        let sample_steps = assemble_assignment(&cand, &tables);
        let levels = Self::levels_from_steps(&sample_steps, &tables)?;
        let rsucc = RangeSuccessorIndex::build(&tix);
        let stats = BuildStats {
            attempts,
            candidate_total: cand.total,
            sample_steps_total: sample_steps.iter().map(|s| s.size()).sum(),
        };
        Ok(IpmIndex {
            text,
            tix,
            runs,
            tables,
            ext,
            kloc,
            sample_steps,
            levels,
            rsucc,
            config,
            stats,
        })
    }

    fn levels_from_steps(
        steps: &[SampleStep],
        tables: &PeriodicTables,
    ) -> Result<Vec<LevelStructures>> {
        steps
            .iter()
            .enumerate()
            .map(|(k, step)| {
                let k = k as u32;
                build_level_structures(step, k, tables.nk(k) - (1usize << k))
            })
            .collect()
    }

    pub fn text(&self) -> &Text {
        &self.text
    }

    pub fn text_index(&self) -> &TextIndex {
        &self.tix
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }

    pub fn periodic_tables(&self) -> &PeriodicTables {
        &self.tables
    }

    pub fn run_extension(&self) -> &RunExtensionTable {
        &self.ext
    }

    pub fn krun_locator(&self) -> &KRunLocator {
        &self.kloc
    }

    pub fn range_successor(&self) -> &RangeSuccessorIndex {
        &self.rsucc
    }

    pub fn config(&self) -> &IndexConfig {
        &self.config
    }

    pub fn stats(&self) -> &BuildStats {
        &self.stats
    }

    pub fn sample_steps(&self) -> &[SampleStep] {
        &self.sample_steps
    }

    pub fn levels(&self) -> &[LevelStructures] {
        &self.levels
    }

    pub(crate) fn periodic_engine(&self) -> PeriodicEngine<'_> {
        PeriodicEngine {
            text: &self.text,
            ix: &self.tix,
            runs: &self.runs,
            tables: &self.tables,
            ext: &self.ext,
            kloc: &self.kloc,
        }
    }

    fn check_pair(&self, x: Fragment, y: Fragment) -> Result<()> {
        self.text.check_fragment(x)?;
        self.text.check_fragment(y)
    }

    /// Whether the periodic machinery answers for this pattern: the
    /// (k+1)-basic prefix contains a periodic k-basic fragment.
    pub fn dispatches_periodic(&self, x: Fragment) -> bool {
        if x.len() < 2 {
            return false;
        }
        let k = layer(x.len());
        self.levels[k as usize]
            .evaluator
            .evaluate(x.start)
            .map(|v| v[0] == crate::sampling::NO_SAMPLE)
            .unwrap_or(true)
    }

    /// All start positions of occurrences of word(x) lying fully inside y,
    /// as one arithmetic progression of absolute positions.
    /// Requires |y| <= 2|x|.
    pub fn ipm_query(&self, x: Fragment, y: Fragment) -> Result<ArithProgression> {
        self.check_pair(x, y)?;
        if y.len() > 2 * x.len() {
            return Err(Error::ConstraintViolation("|y| > 2|x| in an IPM query"));
        }
        self.ipm_query_unchecked(x, y)
    }

    fn ipm_query_unchecked(&self, x: Fragment, y: Fragment) -> Result<ArithProgression> {
        if x.len() > y.len() {
            return Ok(ArithProgression::EMPTY);
        }
        if x.len() == 1 {
            let c = self.text.at(x.start);
            let mut hits = [0usize; 2];
            let mut count = 0usize;
            for p in y.start..=y.end {
                if self.text.at(p) == c {
                    hits[count.min(1)] = p;
                    count += 1;
                }
            }
            return Ok(match count {
                0 => ArithProgression::EMPTY,
                1 => ArithProgression::singleton(hits[0]),
                _ => ArithProgression::new(hits[0], hits[1] - hits[0], 2),
            });
        }

        let k = layer(x.len());
        let sample = *self.levels[k as usize].evaluator.evaluate(x.start)?;
        if sample[0] == crate::sampling::NO_SAMPLE {
            return self.periodic_engine().query(x, y, k);
        }
        let (id, j) = (sample[0], sample[1]);
        let delta = j as usize - x.start;
        let lo = y.start + delta;
        let hi = y.end + 1 - x.len() + delta;
        let mut occs: Vec<usize> = Vec::with_capacity(18);
        self.levels[k as usize]
            .locator
            .locate_into(id, lo, hi, &mut occs);
        debug_assert!(occs.len() <= 17, "sparsity bound exceeded: {}", occs.len());
        let mut hits: Vec<usize> = Vec::with_capacity(occs.len());
        for &s in &occs {
            let c = s - delta;
            let cand = Fragment::new(c, c + x.len() - 1);
            if crate::text::fragments_equal_fast(&self.text, &self.tix, cand, x) {
                hits.push(c);
            }
        }
        ArithProgression::from_hits(&hits)
    }

    /// Occurrence query without the window restriction: covers y with
    /// windows of length 2|x| overlapping by |x| and reports one
    /// progression per window that matched.
    pub fn ipm_query_long(&self, x: Fragment, y: Fragment) -> Result<Vec<ArithProgression>> {
        self.check_pair(x, y)?;
        let mut out = Vec::new();
        if x.len() > y.len() {
            return Ok(out);
        }
        let m = x.len();
        let mut wstart = y.start;
        while wstart + m - 1 <= y.end {
            let wend = (wstart + 2 * m - 1).min(y.end);
            let window = Fragment::new(wstart, wend);
            let prog = self.ipm_query_unchecked(x, window)?;
            // Occurrences are owned by the window holding their first m
            // positions, so boundary repeats drop out.
            let prog = prog.clip(wstart, wstart + m - 1);
            if !prog.is_empty() {
                out.push(prog);
            }
            wstart += m;
        }
        Ok(out)
    }
}

mod serial {
    //! Versioned little-endian binary format: magic "IPMX", format version,
    //! then section-tagged payloads. Loading rebuilds every derived table
    //! so that re-serialization is byte-identical.

    use super::*;

    pub const MAGIC: &[u8; 4] = b"IPMX";
    pub const VERSION: u32 = 1;

    const TAG_TEXT: u8 = 1;
    const TAG_CONF: u8 = 2;
    const TAG_STAT: u8 = 3;
    const TAG_SA: u8 = 4;
    const TAG_RUNS: u8 = 5;
    const TAG_SAMP: u8 = 6;
    const TAG_END: u8 = 255;

    struct Writer {
        buf: Vec<u8>,
    }

    impl Writer {
        fn u8(&mut self, v: u8) {
            self.buf.push(v);
        }
        fn u32(&mut self, v: u32) {
            self.buf.extend_from_slice(&v.to_le_bytes());
        }
        fn u64(&mut self, v: u64) {
            self.buf.extend_from_slice(&v.to_le_bytes());
        }
        fn section(&mut self, tag: u8, body: impl FnOnce(&mut Writer)) {
            self.u8(tag);
            let len_at = self.buf.len();
            self.u64(0);
            body(self);
            let len = (self.buf.len() - len_at - 8) as u64;
            self.buf[len_at..len_at + 8].copy_from_slice(&len.to_le_bytes());
        }
    }

    struct Reader<'a> {
        buf: &'a [u8],
        pos: usize,
    }

    impl<'a> Reader<'a> {
        fn u8(&mut self) -> Result<u8> {
            let v = *self
                .buf
                .get(self.pos)
                .ok_or(Error::ConstraintViolation("truncated index file"))?;
            self.pos += 1;
            Ok(v)
        }
        fn u32(&mut self) -> Result<u32> {
            let bytes = self
                .buf
                .get(self.pos..self.pos + 4)
                .ok_or(Error::ConstraintViolation("truncated index file"))?;
            self.pos += 4;
            Ok(u32::from_le_bytes(bytes.try_into().unwrap()))
        }
        fn u64(&mut self) -> Result<u64> {
            let bytes = self
                .buf
                .get(self.pos..self.pos + 8)
                .ok_or(Error::ConstraintViolation("truncated index file"))?;
            self.pos += 8;
            Ok(u64::from_le_bytes(bytes.try_into().unwrap()))
        }
        fn bytes(&mut self, len: usize) -> Result<&'a [u8]> {
            let out = self
                .buf
                .get(self.pos..self.pos + len)
                .ok_or(Error::ConstraintViolation("truncated index file"))?;
            self.pos += len;
            Ok(out)
        }
    }

    pub fn serialize(ix: &IpmIndex) -> Vec<u8> {
        let mut w = Writer { buf: Vec::new() };
        w.buf.extend_from_slice(MAGIC);
        w.u32(VERSION);

        w.section(TAG_TEXT, |w| {
            w.buf.extend_from_slice(ix.text.bytes());
        });
        w.section(TAG_CONF, |w| {
            w.u64(ix.config.seed);
            w.u8(ix.config.deterministic as u8);
            w.u32(ix.config.candidate_budget_factor as u32);
            w.u32(ix.config.attempt_cap);
        });
        w.section(TAG_STAT, |w| {
            w.u32(ix.stats.attempts);
            w.u64(ix.stats.candidate_total as u64);
            w.u64(ix.stats.sample_steps_total as u64);
        });
        w.section(TAG_SA, |w| {
            for r in 1..=ix.text.len() {
                w.u32(ix.tix.sa1(r) as u32 - 1);
            }
        });
        w.section(TAG_RUNS, |w| {
            w.u64(ix.runs.len() as u64);
            for run in &ix.runs {
                w.u32(run.frag.start as u32);
                w.u32(run.frag.end as u32);
                w.u32(run.period as u32);
                w.u32(run.lead as u32);
            }
        });
        w.section(TAG_SAMP, |w| {
            w.u32(ix.sample_steps.len() as u32);
            for step in &ix.sample_steps {
                w.u32(step.domain_end);
                w.u32(step.size() as u32);
                for (bp, v) in step.breakpoints.iter().zip(&step.values) {
                    w.u32(*bp);
                    match v {
                        None => {
                            w.u8(0);
                            w.u32(0);
                            w.u32(0);
                        }
                        Some((id, pos)) => {
                            w.u8(1);
                            w.u32(*id);
                            w.u32(*pos);
                        }
                    }
                }
            }
        });
        w.u8(TAG_END);
        w.buf
    }

    pub fn deserialize(bytes: &[u8]) -> Result<IpmIndex> {
        let mut r = Reader { buf: bytes, pos: 0 };
        if r.bytes(4)? != MAGIC {
            return Err(Error::ConstraintViolation("bad magic"));
        }
        if r.u32()? != VERSION {
            return Err(Error::ConstraintViolation("unsupported index version"));
        }

        let mut text: Option<Text> = None;
        let mut config = IndexConfig::default();
        let mut stats = BuildStats::default();
        let mut sa: Vec<u32> = Vec::new();
        let mut runs: Vec<Run> = Vec::new();
        let mut steps: Vec<SampleStep> = Vec::new();

        loop {
            let tag = r.u8()?;
            if tag == TAG_END {
                break;
            }
            let len = r.u64()? as usize;
            match tag {
                TAG_TEXT => {
                    text = Some(Text::new(r.bytes(len)?.to_vec())?);
                }
                TAG_CONF => {
                    config.seed = r.u64()?;
                    config.deterministic = r.u8()? != 0;
                    config.candidate_budget_factor = r.u32()? as usize;
                    config.attempt_cap = r.u32()?;
                }
                TAG_STAT => {
                    stats.attempts = r.u32()?;
                    stats.candidate_total = r.u64()? as usize;
                    stats.sample_steps_total = r.u64()? as usize;
                }
                TAG_SA => {
                    sa = (0..len / 4).map(|_| r.u32()).collect::<Result<_>>()?;
                }
                TAG_RUNS => {
                    let count = r.u64()?;
                    for _ in 0..count {
                        let start = r.u32()? as usize;
                        let end = r.u32()? as usize;
                        let period = r.u32()? as usize;
                        let lead = r.u32()? as usize;
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
                }
                TAG_SAMP => {
                    let levels = r.u32()?;
                    for _ in 0..levels {
                        let domain_end = r.u32()?;
                        let size = r.u32()?;
                        let mut bps = Vec::with_capacity(size as usize);
                        let mut vals = Vec::with_capacity(size as usize);
                        for _ in 0..size {
                            bps.push(r.u32()?);
                            let defined = r.u8()? != 0;
                            let id = r.u32()?;
                            let pos = r.u32()?;
                            vals.push(defined.then_some((id, pos)));
                        }
                        steps.push(StepFunction::new(bps, vals, domain_end));
                    }
                }
                _ => {
                    r.bytes(len)?; // unknown section: skip
                }
            }
        }

        let text = text.ok_or(Error::ConstraintViolation("index file missing text"))?;
        if sa.len() != text.len() {
            return Err(Error::ConstraintViolation("suffix array length mismatch"));
        }
        let tix = TextIndex::from_parts(&text, sa);
        let tables = PeriodicTables::build(&runs, text.len());
        let ext = RunExtensionTable::build(&runs, text.len());
        let kloc = KRunLocator::build(&runs, text.len());
        let levels = IpmIndex::levels_from_steps(&steps, &tables)?;
        let rsucc = RangeSuccessorIndex::build(&tix);
        Ok(IpmIndex {
            text,
            tix,
            runs,
            tables,
            ext,
            kloc,
            sample_steps: steps,
            levels,
            rsucc,
            config,
            stats,
        })
    }
}

impl IpmIndex {
    pub fn to_bytes(&self) -> Vec<u8> {
        serial::serialize(self)
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<IpmIndex> {
        serial::deserialize(bytes)
    }
}
