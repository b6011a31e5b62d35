//! Timing harness behind the `bench` command and the query-time scaling
//! checks: builds an index, runs batches of random queries per family and
//! reports means and percentiles.

use crate::compression;
use crate::error::Result;
use crate::index::{IndexConfig, IpmIndex};
use crate::queries;
use crate::rng::Rng;
use crate::text::{Fragment, Text};
use std::time::Instant;

#[derive(Debug, Clone)]
pub struct FamilyStats {
    pub name: &'static str,
    pub queries: usize,
    pub mean_ns: f64,
    pub p50_ns: u64,
    pub p95_ns: u64,
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub n: usize,
    pub build_ms: f64,
    pub index_bytes: usize,
    pub families: Vec<FamilyStats>,
}

/// Log-uniform pattern length in [2, max_len]: lengths double as often as
/// they step, matching the layered structure of the index.
fn random_len(rng: &mut Rng, max_len: usize) -> usize {
    let top = max_len.max(2).ilog2();
    let k = rng.below(top as u64 + 1) as u32;
    let lo = 1usize << k;
    let hi = ((1usize << (k + 1)) - 1).min(max_len);
    rng.range(lo.max(2).min(hi), hi)
}

/// An (x, y) pair with |y| <= 2|x|, both inside [1, n].
pub fn random_ipm_pair(rng: &mut Rng, n: usize, max_len: usize) -> (Fragment, Fragment) {
    let xl = random_len(rng, max_len.min(n));
    let xs = rng.range(1, n - xl + 1);
    let yl = rng.range(xl, (2 * xl).min(n));
    let ys = rng.range(1, n - yl + 1);
    (
        Fragment::new(xs, xs + xl - 1),
        Fragment::new(ys, ys + yl - 1),
    )
}

/// Mean over a pre-generated batch, timed as one block; percentiles from
/// individually-timed samples of the same batch.
fn run_family<Q>(name: &'static str, queries: &[Q], mut f: impl FnMut(&Q)) -> FamilyStats {
    let start = Instant::now();
    for q in queries {
        f(q);
    }
    let total = start.elapsed().as_nanos() as f64;
    let sample_every = (queries.len() / 4096).max(1);
    let mut samples: Vec<u64> = Vec::with_capacity(4096);
    for q in queries.iter().step_by(sample_every) {
        let t = Instant::now();
        f(q);
        samples.push(t.elapsed().as_nanos() as u64);
    }
    samples.sort_unstable();
    let pick = |q: f64| samples[((samples.len() - 1) as f64 * q) as usize];
    FamilyStats {
        name,
        queries: queries.len(),
        mean_ns: total / queries.len() as f64,
        p50_ns: pick(0.5),
        p95_ns: pick(0.95),
    }
}

/// Mean latency of occurrence queries alone, for scaling comparisons.
pub fn mean_ipm_latency(ix: &IpmIndex, queries: &[(Fragment, Fragment)]) -> f64 {
    let start = Instant::now();
    let mut guard = 0usize;
    for &(x, y) in queries {
        guard += ix.ipm_query(x, y).map(|p| p.count).unwrap_or(0);
    }
    let total = start.elapsed().as_nanos() as f64;
    std::hint::black_box(guard);
    total / queries.len() as f64
}

/// Mean latency of period queries at a fixed pattern length.
pub fn mean_period_latency(ix: &IpmIndex, len: usize, count: usize, rng: &mut Rng) -> f64 {
    let n = ix.text().len();
    assert!(len <= n);
    let queries: Vec<Fragment> = (0..count)
        .map(|_| {
            let s = rng.range(1, n - len + 1);
            Fragment::new(s, s + len - 1)
        })
        .collect();
    let start = Instant::now();
    let mut guard = 0usize;
    for &x in &queries {
        guard += queries::period_query(ix, x)
            .map(|p| p.progressions.len())
            .unwrap_or(0);
    }
    let total = start.elapsed().as_nanos() as f64;
    std::hint::black_box(guard);
    total / count as f64
}

/// Builds the index and times every query family on random inputs.
pub fn bench_text(
    bytes: Vec<u8>,
    config: IndexConfig,
    per_family: usize,
    rng: &mut Rng,
) -> Result<BenchReport> {
    let n = bytes.len();
    let start = Instant::now();
    let ix = IpmIndex::build(Text::new(bytes)?, config)?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    let index_bytes = ix.to_bytes().len();

    let max_len = 4096usize.min(n / 2).max(2);
    let pairs: Vec<(Fragment, Fragment)> = (0..per_family)
        .map(|_| random_ipm_pair(rng, n, max_len))
        .collect();
    let frags: Vec<Fragment> = pairs.iter().map(|&(x, _)| x).collect();
    let ps_inputs: Vec<(Fragment, Fragment, usize)> = pairs
        .iter()
        .map(|&(x, y)| (x, y, rng.range(1, y.len())))
        .collect();
    let equal_pairs: Vec<(Fragment, Fragment)> = pairs
        .iter()
        .map(|&(x, y)| {
            let y2 = Fragment::new(y.start, y.start + x.len().min(y.len()) - 1);
            (Fragment::new(x.start, x.start + y2.len() - 1), y2)
        })
        .collect();
    let gsc_pairs: Vec<(Fragment, Fragment)> = (0..per_family.min(2000).max(1))
        .map(|_| {
            let (x, y) = random_ipm_pair(rng, n, (n / 2).clamp(2, 256));
            (x, y)
        })
        .collect();

    let mut families = Vec::new();
    families.push(run_family("ipm", &pairs, |&(x, y)| {
        std::hint::black_box(ix.ipm_query(x, y).unwrap());
    }));
    families.push(run_family("prefix-suffix", &ps_inputs, |&(x, y, d)| {
        std::hint::black_box(queries::prefix_suffix(&ix, x, y, d).unwrap());
    }));
    families.push(run_family("period", &frags, |&x| {
        std::hint::black_box(queries::period_query(&ix, x).unwrap());
    }));
    families.push(run_family("two-period", &frags, |&x| {
        std::hint::black_box(queries::two_period_query(&ix, x));
    }));
    families.push(run_family("cyclic", &equal_pairs, |&(x, y)| {
        std::hint::black_box(queries::cyclic_equivalence(&ix, x, y).unwrap());
    }));
    families.push(run_family("blcp", &pairs, |&(x, y)| {
        std::hint::black_box(compression::blcp(&ix, x, y).unwrap());
    }));
    families.push(run_family("gsc", &gsc_pairs, |&(x, y)| {
        std::hint::black_box(compression::gsc(&ix, x, y).unwrap());
    }));

    Ok(BenchReport {
        n,
        build_ms,
        index_bytes,
        families,
    })
}
