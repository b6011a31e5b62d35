//! Command-line front end: build and persist indexes, execute query
//! scripts, run benchmarks and the selftest suite.

use ipmx::bench;
use ipmx::compression::{self, LzPhrase};
use ipmx::queries;
use ipmx::rng::Rng;
use ipmx::selftest;
use ipmx::text::{ArithProgression, Fragment};
use ipmx::{IndexConfig, IpmIndex, Text};
use std::io::{BufRead, Write};
use std::process::ExitCode;

const USAGE: &str = "\
usage:
  ipmx build <text> [--seed N] [--deterministic] [--out PATH] [--threshold T]
  ipmx query <text|index> [--script PATH]
  ipmx bench <text> [--sizes N,N,...] [--queries N] [--seed N]
  ipmx selftest [--max-n N] [--seed N]

query script verbs (1-based inclusive coordinates, one query per line):
  IPM l1 r1 l2 r2     occurrences of v[l1,r1] in v[l2,r2]  (|y| <= 2|x|)
  IPML l1 r1 l2 r2    occurrences without the window restriction
  PS l1 r1 l2 r2 d    prefix-suffix lengths in [d, 2d]
  PERIOD l r          all periods of v[l,r]
  TWOPER l r          2-periodicity and shortest period
  CYC l1 r1 l2 r2     cyclic shifts taking v[l1,r1] to v[l2,r2]
  BLCP l1 r1 l2 r2    longest prefix of x that is a subword of y
  GSC l1 r1 l2 r2     LZ77 phrases of x with context y";

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("ipmx: {msg}");
            ExitCode::FAILURE
        }
    }
}

struct Flags {
    positional: Vec<String>,
    seed: u64,
    deterministic: bool,
    out: Option<String>,
    threshold: usize,
    script: Option<String>,
    sizes: Vec<usize>,
    queries: usize,
    max_n: usize,
}

fn parse_flags(args: &[String]) -> Result<Flags, String> {
    let mut f = Flags {
        positional: Vec::new(),
        seed: 0,
        deterministic: false,
        out: None,
        threshold: 40,
        script: None,
        sizes: vec![4096, 65536],
        queries: 20_000,
        max_n: 256,
    };
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let mut take = |name: &str| -> Result<String, String> {
            it.next()
                .cloned()
                .ok_or_else(|| format!("missing value for {name}"))
        };
        match a.as_str() {
            "--seed" => {
                f.seed = take("--seed")?
                    .parse()
                    .map_err(|e| format!("--seed: {e}"))?
            }
            "--deterministic" => f.deterministic = true,
            "--out" => f.out = Some(take("--out")?),
            "--threshold" => {
                f.threshold = take("--threshold")?
                    .parse()
                    .map_err(|e| format!("--threshold: {e}"))?
            }
            "--script" => f.script = Some(take("--script")?),
            "--sizes" => {
                f.sizes = take("--sizes")?
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|e| format!("--sizes: {e}")))
                    .collect::<Result<_, _>>()?
            }
            "--queries" => {
                f.queries = take("--queries")?
                    .parse()
                    .map_err(|e| format!("--queries: {e}"))?
            }
            "--max-n" => {
                f.max_n = take("--max-n")?
                    .parse()
                    .map_err(|e| format!("--max-n: {e}"))?
            }
            other if other.starts_with("--") => return Err(format!("unknown flag {other}")),
            other => f.positional.push(other.to_string()),
        }
    }
    Ok(f)
}

fn run(args: &[String]) -> Result<(), String> {
    let Some(cmd) = args.first() else {
        return Err(format!("missing command\n{USAGE}"));
    };
    let flags = parse_flags(&args[1..])?;
    match cmd.as_str() {
        "build" => cmd_build(&flags),
        "query" => cmd_query(&flags),
        "bench" => cmd_bench(&flags),
        "selftest" => cmd_selftest(&flags),
        "--help" | "help" => {
            println!("{USAGE}");
            Ok(())
        }
        other => Err(format!("unknown command {other}\n{USAGE}")),
    }
}

fn config_from(flags: &Flags) -> IndexConfig {
    IndexConfig {
        seed: flags.seed,
        deterministic: flags.deterministic,
        candidate_budget_factor: flags.threshold,
        ..IndexConfig::default()
    }
}

fn read_file(path: &str) -> Result<Vec<u8>, String> {
    std::fs::read(path).map_err(|e| format!("{path}: {e}"))
}

fn cmd_build(flags: &Flags) -> Result<(), String> {
    let [path] = flags.positional.as_slice() else {
        return Err("build needs exactly one text path".to_string());
    };
    let bytes = read_file(path)?;
    let text = Text::new(bytes).map_err(|e| e.to_string())?;
    let ix = IpmIndex::build(text, config_from(flags)).map_err(|e| e.to_string())?;
    let out = flags.out.clone().unwrap_or_else(|| format!("{path}.ipmx"));
    let data = ix.to_bytes();
    std::fs::write(&out, &data).map_err(|e| format!("{out}: {e}"))?;
    let stats = ix.stats();
    println!(
        "built {out}: n={} bytes={} attempts={} candidates={} steps={}",
        ix.text().len(),
        data.len(),
        stats.attempts,
        stats.candidate_total,
        stats.sample_steps_total
    );
    Ok(())
}

fn load_index(path: &str, flags: &Flags) -> Result<IpmIndex, String> {
    let bytes = read_file(path)?;
    if bytes.starts_with(b"IPMX") {
        IpmIndex::from_bytes(&bytes).map_err(|e| e.to_string())
    } else {
        let text = Text::new(bytes).map_err(|e| e.to_string())?;
        IpmIndex::build(text, config_from(flags)).map_err(|e| e.to_string())
    }
}

fn cmd_query(flags: &Flags) -> Result<(), String> {
    let [path] = flags.positional.as_slice() else {
        return Err("query needs exactly one text or index path".to_string());
    };
    let ix = load_index(path, flags)?;
    let stdout = std::io::stdout();
    let mut out = std::io::BufWriter::new(stdout.lock());
    let answer = |line: &str, lineno: usize, out: &mut dyn Write| -> Result<(), String> {
        match answer_line(&ix, line) {
            Ok(Some(ans)) => {
                writeln!(out, "{ans}").map_err(|e| e.to_string())?;
                Ok(())
            }
            Ok(None) => Ok(()),
            Err(msg) => Err(format!("line {lineno}: {msg}")),
        }
    };
    match &flags.script {
        Some(script) => {
            let content = read_file(script)?;
            let content = String::from_utf8_lossy(&content).into_owned();
            for (i, line) in content.lines().enumerate() {
                answer(line, i + 1, &mut out)?;
            }
        }
        None => {
            let stdin = std::io::stdin();
            for (i, line) in stdin.lock().lines().enumerate() {
                let line = line.map_err(|e| e.to_string())?;
                answer(&line, i + 1, &mut out)?;
            }
        }
    }
    out.flush().map_err(|e| e.to_string())
}

fn parse_fragment(n: usize, l: &str, r: &str) -> Result<Fragment, String> {
    let l: usize = l.parse().map_err(|_| format!("bad position {l}"))?;
    let r: usize = r.parse().map_err(|_| format!("bad position {r}"))?;
    if l < 1 || l > r || r > n {
        return Err(format!("fragment [{l},{r}] out of bounds (n={n})"));
    }
    Ok(Fragment::new(l, r))
}

fn prog_line(p: &ArithProgression) -> String {
    if p.is_empty() {
        "NONE".to_string()
    } else {
        format!("PROG {} {} {}", p.first, p.diff, p.count)
    }
}

fn progs_line(ps: &[ArithProgression]) -> String {
    let mut s = format!("PROGS {}", ps.len());
    for p in ps {
        s.push_str(&format!("; {} {} {}", p.first, p.diff, p.count));
    }
    s
}

/// Answers one script line; empty and comment lines produce no output.
fn answer_line(ix: &IpmIndex, line: &str) -> Result<Option<String>, String> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.is_empty() || toks[0].starts_with('#') {
        return Ok(None);
    }
    let n = ix.text().len();
    let frag = |l: &str, r: &str| parse_fragment(n, l, r);
    let need = |count: usize| -> Result<(), String> {
        if toks.len() == count + 1 {
            Ok(())
        } else {
            Err(format!("{} expects {} arguments", toks[0], count))
        }
    };
    let ans = match toks[0] {
        "IPM" => {
            need(4)?;
            let x = frag(toks[1], toks[2])?;
            let y = frag(toks[3], toks[4])?;
            prog_line(&ix.ipm_query(x, y).map_err(|e| e.to_string())?)
        }
        "IPML" => {
            need(4)?;
            let x = frag(toks[1], toks[2])?;
            let y = frag(toks[3], toks[4])?;
            progs_line(&ix.ipm_query_long(x, y).map_err(|e| e.to_string())?)
        }
        "PS" => {
            need(5)?;
            let x = frag(toks[1], toks[2])?;
            let y = frag(toks[3], toks[4])?;
            let d: usize = toks[5].parse().map_err(|_| "bad d".to_string())?;
            prog_line(&queries::prefix_suffix(ix, x, y, d).map_err(|e| e.to_string())?)
        }
        "PERIOD" => {
            need(2)?;
            let x = frag(toks[1], toks[2])?;
            let ps = queries::period_query(ix, x).map_err(|e| e.to_string())?;
            progs_line(&ps.progressions)
        }
        "TWOPER" => {
            need(2)?;
            let x = frag(toks[1], toks[2])?;
            match queries::two_period_query(ix, x) {
                (true, Some(p)) => format!("PERIODIC {p}"),
                _ => "APERIODIC".to_string(),
            }
        }
        "CYC" => {
            need(4)?;
            let x = frag(toks[1], toks[2])?;
            let y = frag(toks[3], toks[4])?;
            prog_line(&queries::cyclic_equivalence(ix, x, y).map_err(|e| e.to_string())?)
        }
        "BLCP" => {
            need(4)?;
            let x = frag(toks[1], toks[2])?;
            let y = frag(toks[3], toks[4])?;
            let (len, _) = compression::blcp(ix, x, y).map_err(|e| e.to_string())?;
            format!("LEN {len}")
        }
        "GSC" => {
            need(4)?;
            let x = frag(toks[1], toks[2])?;
            let y = frag(toks[3], toks[4])?;
            let phrases = compression::gsc(ix, x, y).map_err(|e| e.to_string())?;
            let mut parts = Vec::with_capacity(phrases.len());
            for ph in phrases {
                match ph {
                    LzPhrase::Literal(b) => parts.push(format!("LIT {b}")),
                    LzPhrase::Copy { reference, len } => {
                        parts.push(format!("COPY {reference} {len}"))
                    }
                }
            }
            parts.join(" ")
        }
        other => return Err(format!("unknown verb {other}")),
    };
    Ok(Some(ans))
}

fn cmd_bench(flags: &Flags) -> Result<(), String> {
    let [path] = flags.positional.as_slice() else {
        return Err("bench needs exactly one text path".to_string());
    };
    let bytes = read_file(path)?;
    let mut rng = Rng::new(flags.seed ^ 0xBE7C);
    for &size in &flags.sizes {
        if size > bytes.len() {
            println!("-- n={size}: skipped (text has only {} bytes)", bytes.len());
            continue;
        }
        let slice = bytes[..size].to_vec();
        let report = bench::bench_text(slice, config_from(flags), flags.queries, &mut rng)
            .map_err(|e| e.to_string())?;
        println!(
            "-- n={} build={:.1}ms index={}B ({} words)",
            report.n,
            report.build_ms,
            report.index_bytes,
            report.index_bytes / 8
        );
        for f in &report.families {
            println!(
                "   {:<14} {:>8} queries  mean {:>9.1}ns  p50 {:>7}ns  p95 {:>7}ns",
                f.name, f.queries, f.mean_ns, f.p50_ns, f.p95_ns
            );
        }
    }
    Ok(())
}

fn cmd_selftest(flags: &Flags) -> Result<(), String> {
    let results = selftest::run(flags.max_n, flags.seed);
    let mut all_ok = true;
    for r in &results {
        println!(
            "{} {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.detail
        );
        all_ok &= r.passed;
    }
    if all_ok {
        Ok(())
    } else {
        Err("selftest failed".to_string())
    }
}
