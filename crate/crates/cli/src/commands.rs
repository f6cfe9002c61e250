use std::path::PathBuf;

use serde::Serialize;
use signwalk_core::analysis::{
    alternation_tail, hits, level_density, liminf_stat, tm_scan, write_hits_csv, AlternationReport,
    AnalysisReport, HitRecord, LiminfSummary,
};
use signwalk_core::conditions::{diamond_uniform, reachable_sum, section33_inequality, ReachableSum};
use signwalk_core::exactnum::{rational_to_f64, DEFAULT_CAP_BITS, DEFAULT_INITIAL_BITS};
use signwalk_core::greedy::{run, ArithMode, GreedyRun, GreedyTrace};
use signwalk_core::moments::{band_start, SequenceSpec};
use signwalk_core::vectorwalk::{parse_vectors, walk, Generator, WalkSpec};
use signwalk_core::{PrecisionInterval, PrecisionPolicy, Scalar, TargetExpr, WalkHp};

use crate::args::{AnalyzeArgs, ApproximateArgs, CheckArgs, Command, Format, Gen, WalkArgs};
use crate::output::{emit, write_atomic};
use crate::{repro, CliError};

const DEFAULT_STRIDE: u64 = 100;
const DEFAULT_NMIN: u64 = 10;
const DEFAULT_WINDOW: u64 = 1000;
const DEFAULT_TM_MIN: u64 = 12;
const DEFAULT_JMAX: u64 = 1000;
const DEFAULT_SUM_BITS: u32 = 64;
const SUMMARY_LEVELS: std::ops::RangeInclusive<u32> = 1..=6;

pub fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Approximate(a) => approximate(a.resolve()?),
        Command::Analyze(a) => analyze(a.resolve()?),
        Command::Check(a) => check(a.resolve()?),
        Command::Walk(a) => walk_cmd(a.resolve()?),
        Command::Repro(a) => repro::run(a),
    }
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing {flag}")))
}

fn parse_target(s: &str) -> Result<TargetExpr, CliError> {
    Ok(s.parse::<TargetExpr>()?)
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Hit scans for several levels, one thread per level.
fn hit_records(trace: &GreedyTrace, levels: &[u32], n_min: u64) -> Result<Vec<HitRecord>, CliError> {
    std::thread::scope(|s| {
        let handles: Vec<_> = levels
            .iter()
            .map(|&k| s.spawn(move || hits(trace, k, n_min)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("hit scan panicked").map_err(CliError::from))
            .collect()
    })
}

#[derive(Serialize)]
struct HitCount {
    k: u32,
    count: usize,
    last: Option<u64>,
    ambiguous: usize,
}

#[derive(Serialize)]
struct BestError {
    n: u64,
    log10_upper: f64,
}

#[derive(Serialize)]
struct Summary {
    target: String,
    seq: String,
    steps: u64,
    final_bits: u32,
    exact_mode: bool,
    first_crossing: Option<u64>,
    best_checkpoint_error: Option<BestError>,
    n_min: u64,
    hits: Vec<HitCount>,
    highest_level_hit: Option<u32>,
    alternation: AlternationReport,
    suspected_exceptional: bool,
    trace_file: PathBuf,
    checkpoint_file: PathBuf,
}

impl Summary {
    fn text(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| s.push_str(&format!("{k:<24}{v}\n"));
        line("target", self.target.clone());
        line("sequence", self.seq.clone());
        let mode = if self.exact_mode { "exact".to_string() } else { format!("{} bits", self.final_bits) };
        line("steps", format!("{} ({mode})", self.steps));
        line(
            "first crossing",
            self.first_crossing.map_or("none".into(), |n| format!("n = {n}")),
        );
        line(
            "best checkpoint error",
            self.best_checkpoint_error.as_ref().map_or("none".into(), |b| {
                if b.log10_upper.is_finite() {
                    format!("n = {}, |x - a_n| <= 10^{:.2}", b.n, b.log10_upper)
                } else {
                    format!("n = {}, exact hit", b.n)
                }
            }),
        );
        for h in &self.hits {
            let last = h.last.map_or(String::new(), |n| format!(", last n = {n}"));
            let amb = if h.ambiguous > 0 { format!(", {} ambiguous", h.ambiguous) } else { String::new() };
            line(&format!("hits k={} (n >= {})", h.k, self.n_min), format!("{}{last}{amb}", h.count));
        }
        line(
            "highest level hit",
            self.highest_level_hit.map_or("none".into(), |k| format!("k = {k}")),
        );
        let alt = &self.alternation;
        let verdict = if self.suspected_exceptional {
            format!("alternating from n = {}: suspected exceptional target", alt.tail_start)
        } else if let Some(note) = &alt.note {
            note.clone()
        } else {
            format!("not alternating (tail from n = {})", alt.tail_start)
        };
        line("alternation", verdict);
        line("trace", self.trace_file.display().to_string());
        line("checkpoints", self.checkpoint_file.display().to_string());
        s
    }
}

fn approximate(a: ApproximateArgs) -> Result<(), CliError> {
    let target = parse_target(&required(a.target, "--target")?)?;
    let spec: SequenceSpec = required(a.seq, "--seq")?.parse()?;
    let steps = required(a.steps, "--steps")?;
    let policy = PrecisionPolicy::new(
        a.prec_init.unwrap_or(DEFAULT_INITIAL_BITS),
        a.prec_cap.unwrap_or(DEFAULT_CAP_BITS),
    )?;
    let mut cfg = GreedyRun::new(target, spec, steps)
        .stride(a.stride.unwrap_or(DEFAULT_STRIDE))
        .precision(policy);
    if a.exact {
        cfg = cfg.mode(ArithMode::Exact);
    }
    cfg.validate()?;
    let n_min = a.nmin.unwrap_or(DEFAULT_NMIN);
    let window = a.window.unwrap_or(DEFAULT_WINDOW);
    if window < 2 {
        return Err(CliError::Usage("--window must be at least 2".into()));
    }

    let trace = run(&cfg)?;
    let trace_file = a.out.unwrap_or_else(|| PathBuf::from("trace.json"));
    let checkpoint_file = trace_file.with_extension("csv");
    write_atomic(&trace_file, |w| w.write_all(trace.to_json().as_bytes()))?;
    write_atomic(&checkpoint_file, |w| trace.write_checkpoint_csv(w))?;

    let levels: Vec<u32> = SUMMARY_LEVELS.collect();
    let records = hit_records(&trace, &levels, n_min)?;
    let best = trace
        .checkpoints()
        .iter()
        .min_by(|x, y| x.error.hi().cmp(y.error.hi()))
        .map(|c| BestError {
            n: c.n,
            log10_upper: c.error.log10_bounds().1,
        });
    let alternation = alternation_tail(&trace, window)?;
    let summary = Summary {
        target: trace.target().to_string(),
        seq: trace.spec().to_string(),
        steps: trace.len(),
        final_bits: trace.final_bits(),
        exact_mode: trace.exact_mode(),
        first_crossing: trace.first_crossing(),
        best_checkpoint_error: best,
        n_min,
        highest_level_hit: records.iter().filter(|r| !r.indices.is_empty()).map(|r| r.k).max(),
        hits: records
            .iter()
            .map(|r| HitCount {
                k: r.k,
                count: r.indices.len(),
                last: r.indices.last().copied(),
                ambiguous: r.ambiguous.len(),
            })
            .collect(),
        suspected_exceptional: alternation.alternating,
        alternation,
        trace_file,
        checkpoint_file,
    };
    match a.format {
        Some(Format::Json) => print!("{}", json_line(&summary)),
        Some(Format::Csv) => {
            return Err(CliError::Usage("the approximate summary is text or json".into()));
        }
        None => print!("{}", summary.text()),
    }
    Ok(())
}

pub fn read_trace(path: &std::path::Path) -> Result<GreedyTrace, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read trace {}: {e}", path.display())))?;
    Ok(GreedyTrace::from_json(&text)?)
}

fn analyze(a: AnalyzeArgs) -> Result<(), CliError> {
    let trace = read_trace(&required(a.file, "--file")?)?;
    let levels = a.k.unwrap_or_else(|| SUMMARY_LEVELS.collect());
    let n_min = a.nmin.unwrap_or(DEFAULT_NMIN);
    let records = hit_records(&trace, &levels, n_min)?;
    if a.format == Some(Format::Csv) {
        return emit(a.out.as_deref(), |w| write_hits_csv(&records, w));
    }
    let mut report = AnalysisReport::new(&trace, a.window.unwrap_or(DEFAULT_WINDOW))?;
    report.hits = records;
    if let Some(beta) = a.beta {
        report.density = Some(level_density(&trace, beta, a.c.unwrap_or(1.0), trace.len())?);
    }
    if !a.no_liminf {
        report.liminf = LiminfSummary::from_series(&liminf_stat(&trace)?);
    }
    report.thue_morse = Some(tm_scan(&trace, a.tm_min.unwrap_or(DEFAULT_TM_MIN)));
    let text = json_line(&report);
    emit(a.out.as_deref(), |w| w.write_all(text.as_bytes()))
}

#[derive(Serialize)]
struct Enclosure {
    lo: String,
    hi: String,
    lo_approx: f64,
    hi_approx: f64,
}

impl From<&PrecisionInterval> for Enclosure {
    fn from(iv: &PrecisionInterval) -> Self {
        Enclosure {
            lo: iv.lo().to_string(),
            hi: iv.hi().to_string(),
            lo_approx: rational_to_f64(iv.lo()),
            hi_approx: rational_to_f64(iv.hi()),
        }
    }
}

#[derive(Serialize)]
struct SumReport {
    seq: String,
    bits: u32,
    divergent: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    enclosure: Option<Enclosure>,
}

#[derive(Serialize)]
struct BandReport {
    seq: String,
    k: u32,
    start: u64,
}

#[derive(Serialize)]
struct InequalityReport {
    n: u64,
    k: u32,
    lhs: String,
    rhs: String,
    lhs_approx: f64,
    rhs_approx: f64,
    holds: bool,
}

#[derive(Serialize, Default)]
struct CheckReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    diamond: Option<signwalk_core::conditions::DiamondReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sum: Option<SumReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    band: Option<BandReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sec33: Option<InequalityReport>,
}

fn check(a: CheckArgs) -> Result<(), CliError> {
    if a.format == Some(Format::Csv) {
        return Err(CliError::Usage("check reports are json only".into()));
    }
    if a.ell.is_none() && !a.sum && !a.band && !a.sec33 {
        return Err(CliError::Usage("nothing to check: give --ell, --sum, --band or --sec33".into()));
    }
    let spec = || -> Result<SequenceSpec, CliError> { Ok(required(a.seq.clone(), "--seq")?.parse()?) };
    let mut report = CheckReport::default();
    if let Some(ell) = a.ell {
        report.diamond = Some(diamond_uniform(&spec()?, a.jmax.unwrap_or(DEFAULT_JMAX), ell)?);
    }
    if a.sum {
        let s = spec()?;
        let bits = a.prec_init.unwrap_or(DEFAULT_SUM_BITS);
        let (divergent, enclosure) = match reachable_sum(&s, bits)? {
            ReachableSum::Divergent => (true, None),
            ReachableSum::Enclosure(iv) => (false, Some(Enclosure::from(&iv))),
        };
        report.sum = Some(SumReport {
            seq: s.to_string(),
            bits,
            divergent,
            enclosure,
        });
    }
    if a.band {
        let s = spec()?;
        let k = a.k.unwrap_or(0);
        report.band = Some(BandReport {
            seq: s.to_string(),
            k,
            start: band_start(&s, k)?,
        });
    }
    if a.sec33 {
        let n = required(a.n, "--n")?;
        let k = required(a.k, "--k")?;
        let r = section33_inequality(n, k)?;
        report.sec33 = Some(InequalityReport {
            n,
            k,
            lhs: r.lhs.to_string(),
            rhs: r.rhs.to_string(),
            lhs_approx: rational_to_f64(&r.lhs),
            rhs_approx: rational_to_f64(&r.rhs),
            holds: r.holds,
        });
    }
    let text = json_line(&report);
    emit(a.out.as_deref(), |w| w.write_all(text.as_bytes()))
}

fn walk_cmd(a: WalkArgs) -> Result<(), CliError> {
    let (generator, steps) = match required(a.gen, "--gen")? {
        Gen::Rotation => (
            Generator::Rotation(parse_target(&required(a.alpha, "--alpha")?)?),
            required(a.steps, "--steps")?,
        ),
        Gen::Nearestint => (
            Generator::NearestIntPhase(parse_target(&required(a.beta, "--beta")?)?),
            required(a.steps, "--steps")?,
        ),
        Gen::Explicit => {
            let path = required(a.file, "--file")?;
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let vectors = parse_vectors(&text)?;
            let steps = a.steps.unwrap_or(vectors.len() as u64);
            (Generator::Explicit(vectors), steps)
        }
    };
    let trace: WalkHp = walk(&WalkSpec { generator, steps })?;
    match a.format {
        Some(Format::Json) => {
            let points: Vec<[f64; 2]> = trace.points.iter().map(|p| [p.x.to_f64(), p.y.to_f64()]).collect();
            let text = json_line(&serde_json::json!({ "steps": steps, "points": points }));
            emit(a.out.as_deref(), |w| w.write_all(text.as_bytes()))
        }
        _ => emit(a.out.as_deref(), |w| trace.write_csv(w)),
    }
}
