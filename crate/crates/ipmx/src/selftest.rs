//! The selftest suite: reference-example reproductions and randomized
//! oracle equivalence for every query family, runnable from the CLI.

use crate::compression::{self, LzPhrase};
use crate::corpus;
use crate::index::{IndexConfig, IpmIndex};
use crate::oracle;
use crate::queries;
use crate::rng::Rng;
use crate::sampling;
use crate::text::{Fragment, Text};

/// Outcome of one named check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &str, passed: bool, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        name: name.to_string(),
        passed,
        detail: detail.into(),
    }
}

/// Runs the whole suite. `max_n` bounds the text sizes of the randomized
/// sections; `seed` drives both text generation and index construction.
pub fn run(max_n: usize, seed: u64) -> Vec<CheckResult> {
    let mut out = vec![
        reference_assignment(),
        reference_slider(),
        reference_fillgaps(),
        reference_run(),
    ];
    let mut rng = Rng::new(seed ^ 0x5E1F);
    out.push(ipm_equivalence(&mut rng, max_n, seed));
    out.push(application_equivalence(&mut rng, max_n, seed));
    out.push(determinism(max_n, seed));
    out
}

/// The reference word reproduces its hand-computed sample assignment
/// under identity permutations.
fn reference_assignment() -> CheckResult {
    let config = IndexConfig {
        deterministic: true,
        ..IndexConfig::default()
    };
    let ix = match IpmIndex::build(Text::new(b"cabacabcbacbcabcbaca".to_vec()).unwrap(), config) {
        Ok(ix) => ix,
        Err(e) => return check("reference-assignment", false, format!("build failed: {e}")),
    };
    let printable: Vec<Vec<(u32, u32)>> = ix
        .sample_steps()
        .iter()
        .map(|s| {
            s.breakpoints
                .iter()
                .zip(&s.values)
                .map(|(&b, v)| (b, v.map(|(_, p)| p).unwrap_or(0)))
                .collect()
        })
        .collect();
    let want: Vec<Vec<(u32, u32)>> = vec![
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
            (19, 20),
        ],
        vec![
            (1, 2),
            (3, 4),
            (4, 6),
            (7, 9),
            (8, 10),
            (11, 12),
            (12, 14),
            (15, 17),
            (16, 18),
        ],
        vec![(1, 2), (3, 6), (7, 10), (10, 14)],
        vec![(1, 2), (3, 6)],
    ];
    let passed = printable == want;
    check(
        "reference-assignment",
        passed,
        if passed {
            "4 levels match".to_string()
        } else {
            format!("got {printable:?}")
        },
    )
}

fn reference_slider() -> CheckResult {
    let a = [4u32, 3, 1, 2, 4, 1, 2, 4, 1, 2, 3, 4, 2];
    let pi = [0u32, 3, 2, 1, 4];
    let pairs: Vec<(u32, u32)> = a
        .iter()
        .enumerate()
        .map(|(i, &v)| (pi[v as usize], i as u32 + 1))
        .collect();
    let step = sampling::slider(&pairs, 4, 13);
    let got: Vec<(u32, u32)> = step
        .breakpoints
        .iter()
        .zip(&step.values)
        .map(|(&b, v)| (b, v.unwrap().1))
        .collect();
    let want = vec![(1, 2), (3, 4), (5, 7), (7, 11)];
    let passed = got == want;
    check(
        "reference-slider",
        passed,
        if passed {
            "step representation matches".to_string()
        } else {
            format!("got {got:?}")
        },
    )
}

fn reference_fillgaps() -> CheckResult {
    let a = [7usize, 9, 13, 20, 21, 26, 32, 34];
    let c = sampling::fill_gaps(&a, 4, (1, 34));
    let inserted = c.len() - a.len();
    let passed = inserted == 17 && c == oracle::naive_fillgaps(&a, 4, (1, 34));
    check(
        "reference-fillgaps",
        passed,
        format!("{inserted} elements inserted"),
    )
}

fn reference_run() -> CheckResult {
    let t = Text::new(b"caabaabaabaabaabaabac".to_vec()).unwrap();
    let runs = crate::runs::compute_runs(&t);
    let big = runs
        .iter()
        .find(|r| r.frag == Fragment::new(2, 20) && r.period == 3);
    check(
        "reference-run",
        big.is_some(),
        "run [2,20] with period 3 present",
    )
}

fn random_fragment_pair(rng: &mut Rng, n: usize) -> (Fragment, Fragment) {
    let xs = rng.range(1, n);
    let xe = rng.range(xs, n);
    let xl = xe - xs + 1;
    let max_yl = (2 * xl).min(n);
    let yl = rng.range(1, max_yl);
    let ys = rng.range(1, n - yl + 1);
    (Fragment::new(xs, xe), Fragment::new(ys, ys + yl - 1))
}

fn ipm_equivalence(rng: &mut Rng, max_n: usize, seed: u64) -> CheckResult {
    let mut queries_run = 0usize;
    for trial in 0..24 {
        let n = rng.range(1, max_n.max(2));
        let bytes = match trial % 6 {
            0 => corpus::unary(n),
            1 => corpus::alternating(n),
            2 => corpus::fibonacci(n),
            3 => corpus::thue_morse(n),
            4 => corpus::random_text(rng, n, 2),
            _ => corpus::random_text(rng, n, 3),
        };
        let config = IndexConfig {
            seed: seed.wrapping_add(trial),
            ..IndexConfig::default()
        };
        let ix = match IpmIndex::build(Text::new(bytes.clone()).unwrap(), config) {
            Ok(ix) => ix,
            Err(e) => return check("ipm-oracle", false, format!("build failed: {e}")),
        };
        for _ in 0..400 {
            let (x, y) = random_fragment_pair(rng, n);
            let got = match ix.ipm_query(x, y) {
                Ok(p) => p.to_vec(),
                Err(e) => return check("ipm-oracle", false, format!("query failed: {e}")),
            };
            let want = oracle::naive_ipm(&bytes, (x.start, x.end), (y.start, y.end));
            if got != want {
                return check(
                    "ipm-oracle",
                    false,
                    format!("mismatch at n={n} x={x:?} y={y:?}: {got:?} vs {want:?}"),
                );
            }
            queries_run += 1;
        }
    }
    check("ipm-oracle", true, format!("{queries_run} queries matched"))
}

fn application_equivalence(rng: &mut Rng, max_n: usize, seed: u64) -> CheckResult {
    let mut checks = 0usize;
    for trial in 0..12 {
        let n = rng.range(2, max_n.max(3));
        let bytes = match trial % 4 {
            0 => corpus::fibonacci(n),
            1 => corpus::thue_morse(n),
            2 => corpus::random_text(rng, n, 2),
            _ => corpus::random_text(rng, n, 26),
        };
        let config = IndexConfig {
            seed: seed.wrapping_add(100 + trial),
            ..IndexConfig::default()
        };
        let ix = match IpmIndex::build(Text::new(bytes.clone()).unwrap(), config) {
            Ok(ix) => ix,
            Err(e) => return check("application-oracle", false, format!("build failed: {e}")),
        };
        for _ in 0..120 {
            let xs = rng.range(1, n);
            let xe = rng.range(xs, n);
            let x = Fragment::new(xs, xe);
            let ys = rng.range(1, n);
            let ye = rng.range(ys, n);
            let y = Fragment::new(ys, ye);

            // Periods.
            let got = queries::period_query(&ix, x).unwrap().to_vec();
            let mut want = oracle::naive_periods(&bytes, (xs, xe));
            want.sort_unstable();
            if got != want {
                return check(
                    "application-oracle",
                    false,
                    format!("periods mismatch at x={x:?}"),
                );
            }
            // Two-periodicity.
            let (periodic, p) = queries::two_period_query(&ix, x);
            if periodic != (2 * want[0] <= x.len()) || (periodic && p != Some(want[0])) {
                return check(
                    "application-oracle",
                    false,
                    format!("2-period mismatch at x={x:?}"),
                );
            }
            // Prefix-suffix.
            let d = rng.range(1, y.len() + 1);
            let got = queries::prefix_suffix(&ix, x, y, d).unwrap().to_vec();
            let want = oracle::naive_prefix_suffix(&bytes, (xs, xe), (ys, ye), d);
            if got != want {
                return check(
                    "application-oracle",
                    false,
                    format!("prefix-suffix mismatch x={x:?} y={y:?} d={d}"),
                );
            }
            // Cyclic equivalence on equal lengths.
            if y.len() >= x.len() {
                let y2 = Fragment::new(y.start, y.start + x.len() - 1);
                let got = queries::cyclic_equivalence(&ix, x, y2).unwrap().to_vec();
                let want = oracle::naive_rotations(&bytes, (x.start, x.end), (y2.start, y2.end));
                if got != want {
                    return check(
                        "application-oracle",
                        false,
                        format!("cyclic mismatch x={x:?} y={y2:?}"),
                    );
                }
            }
            // Bounded LCP.
            let (l, _) = compression::blcp(&ix, x, y).unwrap();
            if l != oracle::naive_blcp(&bytes, (xs, xe), (ys, ye)) {
                return check(
                    "application-oracle",
                    false,
                    format!("blcp mismatch x={x:?} y={y:?}"),
                );
            }
            // Occurrence decision and interval LCP.
            if compression::occurs_in(&ix, x, y)
                != !oracle::naive_ipm(&bytes, (xs, xe), (ys, ye)).is_empty()
            {
                return check(
                    "application-oracle",
                    false,
                    format!("occurs mismatch x={x:?} y={y:?}"),
                );
            }
            let (l, _) = compression::ilcp(&ix, ys, ye, x);
            if l != oracle::naive_ilcp(&bytes, (ys, ye), (xs, xe)).0 {
                return check(
                    "application-oracle",
                    false,
                    format!("ilcp mismatch x={x:?} range={y:?}"),
                );
            }
            // Substring compression, phrase for phrase.
            let phrases = compression::gsc(&ix, x, y).unwrap();
            let want = oracle::naive_lz(&bytes, (xs, xe), (ys, ye));
            let same = phrases.len() == want.len()
                && phrases.iter().zip(&want).all(|(a, b)| match (*a, *b) {
                    (LzPhrase::Literal(x), oracle::NaivePhrase::Literal(y)) => x == y,
                    (
                        LzPhrase::Copy { reference, len },
                        oracle::NaivePhrase::Copy {
                            reference: r2,
                            len: l2,
                        },
                    ) => reference == r2 && len == l2,
                    _ => false,
                });
            if !same {
                return check(
                    "application-oracle",
                    false,
                    format!("gsc mismatch x={x:?} y={y:?}"),
                );
            }
            checks += 1;
        }
    }
    check(
        "application-oracle",
        true,
        format!("{checks} query bundles matched"),
    )
}

fn determinism(max_n: usize, seed: u64) -> CheckResult {
    let mut rng = Rng::new(seed ^ 0xDE7);
    let n = rng.range(2, max_n.max(3));
    let bytes = corpus::random_text(&mut rng, n, 3);
    let config = IndexConfig {
        seed,
        ..IndexConfig::default()
    };
    let a = IpmIndex::build(Text::new(bytes.clone()).unwrap(), config).map(|ix| ix.to_bytes());
    let b = IpmIndex::build(Text::new(bytes).unwrap(), config).map(|ix| ix.to_bytes());
    match (a, b) {
        (Ok(a), Ok(b)) if a == b => check(
            "determinism",
            true,
            format!("{} byte index reproduced", a.len()),
        ),
        (Ok(_), Ok(_)) => check("determinism", false, "same seed produced different bytes"),
        (Err(e), _) | (_, Err(e)) => check("determinism", false, format!("build failed: {e}")),
    }
}
