//! The `aprng` command line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::time::Instant;

use aperiodic::morphic::{FixedPointStream, Morphism, DEFAULT_BLOCK_CAP};
use aperiodic::prng::{
    chi_square_equidist, gap_test, lattice_search, plane_count, serial_pairs, stream_export,
    BitFilter, LatticeSample, Prng,
};
use aperiodic::rotation::{Convention, RotationCoding};
use aperiodic::spec::{parse_gen_spec, parse_word_spec, GenSpec, WordSpec};
use aperiodic::welldoc::{welldoc_check, welldoc_scan, WelldocQuery, WelldocReport};
use aperiodic::words::letters_to_string;
use aperiodic::{Error, Execution, WordStream};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "aprng",
    version,
    about = "Aperiodic words and word-steered random number generators"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print letters of a word
    Word(WordArgs),
    /// Write raw little-endian 32-bit outputs of a generator
    Gen(GenArgs),
    /// Same as `gen`; the `shuffle:` prefix is optional
    Shuffle(GenArgs),
    /// Check well distributed occurrences on a prefix
    Welldoc(WelldocArgs),
    /// Search for hyperplane families covering t-tuples
    Lattice(LatticeArgs),
    /// Run a χ² test on a generator
    Stats(StatsArgs),
    /// Measure word generation throughput
    Bench(BenchArgs),
}

#[derive(Args, Debug, Clone)]
struct GenOptions {
    /// Seed for every generator without an explicit one
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Outputs discarded before use
    #[arg(long, default_value = "1e9", value_parser = parse_count)]
    warmup: u64,
}

#[derive(Args, Debug)]
struct WordArgs {
    spec: String,
    #[arg(long, default_value = "32", value_parser = parse_count)]
    count: u64,
    /// First position to print
    #[arg(long, value_parser = parse_count)]
    start: Option<u64>,
    /// One byte per letter instead of ASCII digits
    #[arg(long)]
    raw: bool,
    /// Interval convention for `rot:` words
    #[arg(long)]
    convention: Option<Convention>,
    #[arg(long, default_value_t = DEFAULT_BLOCK_CAP)]
    block_cap: usize,
}

#[derive(Args, Debug)]
struct GenArgs {
    spec: String,
    #[arg(long, value_parser = parse_count)]
    count: u64,
    /// Output file, `-` for stdout
    #[arg(long, default_value = "-")]
    out: String,
    #[command(flatten)]
    gen: GenOptions,
}

#[derive(Args, Debug)]
struct WelldocArgs {
    spec: String,
    #[arg(long, default_value_t = 2)]
    m: u64,
    /// Scan every factor up to this length
    #[arg(long, default_value_t = 4)]
    factor_len: usize,
    /// Check a single factor instead, stopping once covered
    #[arg(long)]
    factor: Option<String>,
    #[arg(long, default_value = "1e7", value_parser = parse_count)]
    prefix: u64,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug)]
struct LatticeArgs {
    spec: String,
    #[arg(long, default_value_t = 3)]
    t: usize,
    /// Coefficient bound for the normal search
    #[arg(long, default_value_t = 10)]
    bound: i64,
    #[arg(long, default_value = "1e6", value_parser = parse_count)]
    sample: u64,
    /// Evaluate one normal, e.g. `9,-6,1`, instead of searching
    #[arg(long, allow_hyphen_values = true)]
    normal: Option<String>,
    /// Write the tuples, normalized to [0,1), as CSV
    #[arg(long)]
    dump: Option<PathBuf>,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    sequential: bool,
    #[command(flatten)]
    gen: GenOptions,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TestKind {
    Chi2,
    Serial,
    Gap,
}

#[derive(Args, Debug)]
struct StatsArgs {
    spec: String,
    #[arg(long, value_enum, default_value = "chi2")]
    test: TestKind,
    #[arg(long, default_value = "1e7", value_parser = parse_count)]
    n: u64,
    #[arg(long, default_value_t = 256)]
    bins: usize,
    /// Gap interval `lo,hi` as fractions of the output range
    #[arg(long, default_value = "0,0.25")]
    interval: String,
    /// Test only the least significant output bit
    #[arg(long)]
    low_bit: bool,
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    gen: GenOptions,
}

#[derive(Args, Debug)]
struct BenchArgs {
    spec: String,
    #[arg(long, default_value = "1e8", value_parser = parse_count)]
    letters: u64,
    #[arg(long, default_value_t = DEFAULT_BLOCK_CAP)]
    block_cap: usize,
    /// Also time one-letter-per-step expansion of a morphic word
    #[arg(long)]
    compare: bool,
    #[arg(long)]
    json: bool,
}

/// Parses `1000`, `10_000`, `1e7`, `2^20`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let t: String = s.chars().filter(|&c| c != '_').collect();
    let bad = || format!("invalid count {s:?} (examples: 1000, 1e7, 2^20)");
    let pair = |sep: char| -> Result<(u64, u32), String> {
        let (b, e) = t.split_once(sep).ok_or_else(bad)?;
        Ok((b.parse().map_err(|_| bad())?, e.parse().map_err(|_| bad())?))
    };
    if t.contains(['e', 'E']) {
        let t = t.replace('E', "e");
        let (m, e) = t.split_once('e').ok_or_else(bad)?;
        let m: u64 = m.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        10u64
            .checked_pow(e)
            .and_then(|p| p.checked_mul(m))
            .ok_or_else(bad)
    } else if t.contains('^') {
        let (b, e) = pair('^')?;
        b.checked_pow(e).ok_or_else(bad)
    } else {
        t.parse().map_err(|_| bad())
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
    /// The reader went away; stop quietly.
    Closed,
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        if e.kind() == io::ErrorKind::BrokenPipe {
            Failure::Closed
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

fn descriptor_error(text: &str, e: Error) -> Failure {
    match e {
        Error::Parse {
            position,
            message,
            expected,
        } => Failure::Usage(format!(
            "{message}\n  {text}\n  {caret:>width$}\n  expected {expected}",
            caret = "^",
            width = position + 1
        )),
        other => Failure::Usage(other.to_string()),
    }
}

fn runtime(e: Error) -> Failure {
    Failure::Runtime(e.to_string())
}

fn word_spec(text: &str) -> Result<WordSpec, Failure> {
    parse_word_spec(text).map_err(|e| descriptor_error(text, e))
}

fn gen_spec(text: &str) -> Result<GenSpec, Failure> {
    parse_gen_spec(text).map_err(|e| descriptor_error(text, e))
}

fn build_gen(text: &str, opts: &GenOptions) -> Result<Box<dyn Prng>, Failure> {
    let mut g = gen_spec(text)?.build(opts.seed).map_err(runtime)?;
    g.discard(opts.warmup);
    Ok(g)
}

fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}

fn write_json<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(|e| Failure::Runtime(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

/// Runs the command line `args` (including the program name) and returns the
/// exit status: 0 on success, 1 on runtime failure, 2 on usage errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Word(a) => cmd_word(a, out),
        Command::Gen(a) => cmd_gen(a, out),
        Command::Shuffle(mut a) => {
            if !a.spec.starts_with("shuffle:") {
                a.spec = format!("shuffle:{}", a.spec);
            }
            cmd_gen(a, out)
        }
        Command::Welldoc(a) => cmd_welldoc(a, out),
        Command::Lattice(a) => cmd_lattice(a, out),
        Command::Stats(a) => cmd_stats(a, out),
        Command::Bench(a) => cmd_bench(a, out),
    };
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(()), Ok(())) | (Err(Failure::Closed), _) => 0,
        (Ok(()), Err(e)) if e.kind() == io::ErrorKind::BrokenPipe => 0,
        (Err(Failure::Usage(m)), _) => {
            let _ = writeln!(err, "error: {m}");
            2
        }
        (Err(Failure::Runtime(m)), _) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
        (Ok(()), Err(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn cmd_word(a: WordArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let mut spec = word_spec(&a.spec)?;
    if let Some(conv) = a.convention {
        let WordSpec::Rotation(c) = &spec else {
            return Err(Failure::Usage(
                "--convention applies to rot: words only".into(),
            ));
        };
        spec = WordSpec::Rotation(
            RotationCoding::new(c.alpha().clone(), c.rho().clone(), conv).map_err(runtime)?,
        );
    }
    let mut stream = spec.build_with_cap(a.block_cap).map_err(runtime)?;
    if let Some(start) = a.start {
        stream.seek(&BigUint::from(start)).map_err(runtime)?;
    }
    let mut buf = vec![0; 1 << 16];
    let mut left = a.count;
    while left > 0 {
        let n = left.min(buf.len() as u64) as usize;
        stream.fill(&mut buf[..n]);
        if a.raw {
            out.write_all(&buf[..n])?;
        } else {
            out.write_all(letters_to_string(&buf[..n]).as_bytes())?;
        }
        left -= n as u64;
    }
    if !a.raw {
        writeln!(out)?;
    }
    Ok(())
}

fn cmd_gen(a: GenArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let mut g = build_gen(&a.spec, &a.gen)?;
    if a.out == "-" {
        stream_export(g.as_mut(), a.count, out)?;
    } else {
        let file = File::create(&a.out).map_err(|e| Failure::Runtime(format!("{}: {e}", a.out)))?;
        stream_export(g.as_mut(), a.count, file)?;
    }
    Ok(())
}

#[derive(Serialize)]
struct WelldocOutput<'a> {
    word: String,
    m: u64,
    prefix: u64,
    all_covered: bool,
    reports: &'a [WelldocReport],
}

fn cmd_welldoc(a: WelldocArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let spec = word_spec(&a.spec)?;
    let mut stream = spec.build().map_err(runtime)?;
    let reports = match &a.factor {
        Some(w) => {
            let factor = w
                .parse()
                .map_err(|e| Failure::Usage(format!("factor: {e}")))?;
            let q = WelldocQuery::new(factor, a.m, a.prefix)
                .map_err(|e| Failure::Usage(e.to_string()))?;
            vec![welldoc_check(stream.as_mut(), &q).map_err(runtime)?]
        }
        None => {
            let prefix =
                usize::try_from(a.prefix).map_err(|_| Failure::Usage("prefix too large".into()))?;
            welldoc_scan(
                stream.as_mut(),
                a.m,
                a.factor_len,
                prefix,
                execution(a.sequential),
            )
            .map_err(runtime)?
        }
    };
    let all_covered = reports.iter().all(|r| r.is_covered());
    if a.json {
        return write_json(
            out,
            &WelldocOutput {
                word: spec.to_string(),
                m: a.m,
                prefix: a.prefix,
                all_covered,
                reports: &reports,
            },
        );
    }
    let total = a.m.pow(spec.alphabet_size() as u32);
    writeln!(
        out,
        "{:<12} {:<13} {:>9} {:>12} {:>12}",
        "factor", "verdict", "covered", "occurrences", "covered_at"
    )?;
    for r in &reports {
        let at = r.covered_at.map_or("-".to_string(), |x| x.to_string());
        writeln!(
            out,
            "{:<12} {:<13} {:>9} {:>12} {:>12}",
            r.factor.to_string(),
            r.verdict.to_string(),
            format!("{}/{}", r.covered.len(), total),
            r.occurrences_seen,
            at
        )?;
        if !r.is_covered() && r.missing.len() <= 8 {
            writeln!(out, "  missing {:?}", r.missing)?;
        }
    }
    Ok(())
}

fn parse_normal(s: &str) -> Result<Vec<i64>, Failure> {
    s.split(',')
        .map(|c| c.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Failure::Usage(format!("invalid normal {s:?} (example: 9,-6,1)")))
}

fn cmd_lattice(a: LatticeArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let mut g = build_gen(&a.spec, &a.gen)?;
    let tuples =
        usize::try_from(a.sample).map_err(|_| Failure::Usage("sample too large".into()))?;
    let sample = LatticeSample::from_prng(g.as_mut(), a.t, tuples).map_err(runtime)?;
    if let Some(path) = &a.dump {
        let file =
            File::create(path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
        let mut w = io::BufWriter::new(file);
        let header: Vec<&str> = ["x", "y", "z", "w"]
            .into_iter()
            .chain(std::iter::repeat("v"))
            .take(a.t)
            .collect();
        writeln!(w, "{}", header.join(","))?;
        for i in 0..sample.len() {
            let row: Vec<String> = sample
                .normalized(i)
                .iter()
                .map(|x| format!("{x:.9}"))
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        w.flush()?;
    }
    match &a.normal {
        Some(n) => {
            let normal = parse_normal(n)?;
            let r = plane_count(&sample, &normal).map_err(|e| Failure::Usage(e.to_string()))?;
            if a.json {
                return write_json(out, &r);
            }
            writeln!(
                out,
                "normal {:?}: {} planes of {} (covering: {}) over {} tuples",
                r.normal, r.plane_count, r.comparison, r.covering, r.sample_size
            )?;
        }
        None => {
            let s = lattice_search(&sample, a.bound, execution(a.sequential)).map_err(runtime)?;
            if a.json {
                return write_json(out, &s);
            }
            let b = &s.best;
            writeln!(
                out,
                "{} normals tested, {} covering; best {:?}: {} planes of {} (covering: {}) over {} tuples",
                s.normals_tested, s.covering_normals, b.normal, b.plane_count, b.comparison, b.covering, b.sample_size
            )?;
        }
    }
    Ok(())
}

fn cmd_stats(a: StatsArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let g = build_gen(&a.spec, &a.gen)?;
    let mut g: Box<dyn Prng> = if a.low_bit {
        Box::new(BitFilter::low_bit(g))
    } else {
        g
    };
    let bins = if a.low_bit { 2 } else { a.bins };
    let report = match a.test {
        TestKind::Chi2 => chi_square_equidist(g.as_mut(), bins, a.n),
        TestKind::Serial => serial_pairs(g.as_mut(), bins, a.n),
        TestKind::Gap => {
            let (lo, hi) = a
                .interval
                .split_once(',')
                .and_then(|(l, h)| Some((l.trim().parse().ok()?, h.trim().parse().ok()?)))
                .ok_or_else(|| {
                    Failure::Usage(format!(
                        "invalid interval {:?} (example: 0,0.25)",
                        a.interval
                    ))
                })?;
            gap_test(g.as_mut(), lo, hi, a.n)
        }
    }
    .map_err(|e| Failure::Usage(e.to_string()))?;
    if a.json {
        return write_json(out, &report);
    }
    writeln!(
        out,
        "{}: statistic {:.4}, df {}, p = {:.6e} over {} samples",
        report.test, report.statistic, report.df, report.p_value, report.samples
    )?;
    Ok(())
}

#[derive(Serialize)]
struct BenchRun {
    mode: String,
    seconds: f64,
    letters_per_second: f64,
    peak_stack_depth: Option<usize>,
    checksum: u64,
}

#[derive(Serialize)]
struct BenchOutput {
    word: String,
    letters: u64,
    runs: Vec<BenchRun>,
    speedup: Option<f64>,
}

fn time_stream(stream: &mut dyn WordStream, letters: u64) -> (f64, u64) {
    let mut buf = vec![0; 1 << 16];
    let mut left = letters;
    let mut checksum = 0u64;
    let start = Instant::now();
    while left > 0 {
        let n = left.min(buf.len() as u64) as usize;
        stream.fill(&mut buf[..n]);
        checksum = checksum.wrapping_add(buf[..n].iter().map(|&a| u64::from(a)).sum::<u64>());
        left -= n as u64;
    }
    (start.elapsed().as_secs_f64(), checksum)
}

fn bench_fixed_point(mut s: FixedPointStream, letters: u64, mode: String) -> BenchRun {
    let (seconds, checksum) = time_stream(&mut s, letters);
    BenchRun {
        mode,
        seconds,
        letters_per_second: letters as f64 / seconds,
        peak_stack_depth: Some(s.peak_stack_depth()),
        checksum,
    }
}

fn cmd_bench(a: BenchArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let spec = word_spec(&a.spec)?;
    let mut runs = Vec::new();
    if let WordSpec::Morphic { morphism, seed } = &spec {
        let block = FixedPointStream::new(morphism.clone(), *seed, a.block_cap).map_err(runtime)?;
        let power = block.power();
        runs.push(bench_fixed_point(
            block,
            a.letters,
            format!("block (power {power})"),
        ));
        if a.compare {
            let plain = FixedPointStream::with_power(Morphism::clone(morphism), *seed, 1)
                .map_err(runtime)?;
            runs.push(bench_fixed_point(
                plain,
                a.letters,
                "per-letter (power 1)".into(),
            ));
        }
    } else {
        if a.compare {
            return Err(Failure::Usage("--compare needs a morphic word".into()));
        }
        let mut s = spec.build_with_cap(a.block_cap).map_err(runtime)?;
        let (seconds, checksum) = time_stream(s.as_mut(), a.letters);
        runs.push(BenchRun {
            mode: "stream".into(),
            seconds,
            letters_per_second: a.letters as f64 / seconds,
            peak_stack_depth: None,
            checksum,
        });
    }
    let speedup = (runs.len() == 2).then(|| runs[1].seconds / runs[0].seconds);
    let report = BenchOutput {
        word: spec.to_string(),
        letters: a.letters,
        runs,
        speedup,
    };
    if a.json {
        return write_json(out, &report);
    }
    for r in &report.runs {
        let depth = r
            .peak_stack_depth
            .map_or("-".to_string(), |d| d.to_string());
        writeln!(
            out,
            "{:<22} {:>9.3} s {:>14.0} letters/s  peak stack {}",
            r.mode, r.seconds, r.letters_per_second, depth
        )?;
    }
    if let Some(x) = report.speedup {
        writeln!(out, "speedup {x:.1}x")?;
    }
    Ok(())
}
