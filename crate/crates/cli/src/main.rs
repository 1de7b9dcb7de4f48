mod cache;
mod job;
mod render;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rsweight_core::quadratic::{char_poly_rt, DeltaMultiset};
use rsweight_core::report::SuiteReport;
use rsweight_core::rs::Caps;
use rsweight_core::sft::TransferSystem;
use rsweight_core::tuples::TupleCollection;
use rsweight_core::verify::{run_suite, Suite, VerifyOptions};
use rsweight_core::weights::{compute_weights, Context, Method, WeightSequence};
use rsweight_core::weil::{curve_degree, recover_weil_poly};
use rsweight_core::{gf2poly, Error};
use serde::Serialize;
use serde_json::Value;

use cache::ModulusCache;
use job::{Command, JobSpec, RangeSpec, TuplesSpec};
use render::table;

#[derive(Parser)]
#[command(name = "rsweight", version, about = "Exact weights of rotation-symmetric and trace Boolean function families")]
struct Cli {
    /// Run the job described in a JSON file instead of flags.
    #[arg(long, global = true)]
    job: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Weights over a range of n, as CSV (or JSON with --json).
    Weights(WeightsArgs),
    /// Run verification suites; exit 1 if any claim fails.
    Verify(VerifyArgs),
    /// Human-readable tables for a family, for R(t), or for a saved artifact.
    Report(ReportArgs),
}

#[derive(Args)]
struct Common {
    /// Enumeration cap for the brute-force counts.
    #[arg(long)]
    cap_n: Option<usize>,
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct WeightsArgs {
    /// Tuples like "0,1;0,1,2".
    #[arg(long)]
    tuples: String,
    /// "1..16", "3,5,8" or a single n.
    #[arg(long)]
    n: String,
    /// rs, trace or both.
    #[arg(long, default_value = "rs")]
    context: String,
    /// auto, oracle, sft, formula or recurrence.
    #[arg(long, default_value = "auto")]
    method: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    /// sft, quadratic, weil or all.
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long)]
    t_max: Option<usize>,
    #[arg(long)]
    e_max: Option<u128>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    tuples: Option<String>,
    /// Report on R(t).
    #[arg(long)]
    t: Option<usize>,
    /// A weights or verify JSON file written earlier.
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::CapExceeded { .. } | Error::InsufficientData { .. } => 3,
            Error::InvalidTuples(_)
            | Error::EmptyCollection
            | Error::NonQuadratic(_)
            | Error::Parse(_)
            | Error::Precondition(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            code: 1,
            message: e.to_string(),
        }
    }
}

/// Text for stdout plus the exit code.
struct Outcome {
    stdout: String,
    code: u8,
}

fn job_from_flags(cmd: Cmd) -> JobSpec {
    let fill = |job: &mut JobSpec, c: Common| {
        job.cap_n = c.cap_n;
        job.cache_dir = c.cache_dir;
        job.out = c.out;
        job.json = c.json;
    };
    match cmd {
        Cmd::Weights(a) => {
            let mut job = JobSpec::new(Command::Weights);
            job.tuples = Some(TuplesSpec::Text(a.tuples));
            job.n = Some(RangeSpec::Text(a.n));
            job.context = Some(a.context);
            job.method = Some(a.method);
            fill(&mut job, a.common);
            job
        }
        Cmd::Verify(a) => {
            let mut job = JobSpec::new(Command::Verify);
            job.suite = Some(a.suite);
            job.t_max = a.t_max;
            job.e_max = a.e_max;
            fill(&mut job, a.common);
            job
        }
        Cmd::Report(a) => {
            let mut job = JobSpec::new(Command::Report);
            job.tuples = a.tuples.map(TuplesSpec::Text);
            job.t = a.t;
            job.input = a.input;
            fill(&mut job, a.common);
            job
        }
    }
}

fn caps_for(job: &JobSpec) -> Caps {
    let mut caps = Caps::default();
    if let Some(n) = job.cap_n {
        caps.rs_oracle = n;
        caps.trace_oracle = n;
        caps.solution_count = n;
    }
    caps
}

fn cache_dir(job: &JobSpec) -> Option<PathBuf> {
    std::env::var_os("RSWEIGHT_CACHE")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or_else(|| job.cache_dir.clone())
}

fn touch_cache(job: &JobSpec, n_max: usize) -> Result<(), Failure> {
    if let Some(dir) = cache_dir(job) {
        let mut cache = ModulusCache::open(&dir)?;
        cache.ensure(n_max.min(64))?;
    }
    Ok(())
}

fn collection(job: &JobSpec) -> Result<TupleCollection, Failure> {
    job.tuples
        .as_ref()
        .ok_or_else(|| Failure::usage("--tuples is required"))?
        .collection()
        .map_err(Failure::from)
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn write_out(path: &Path, text: &str) -> Result<(), Failure> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, text)?;
    Ok(())
}

#[derive(Serialize)]
struct BothContexts<'a> {
    rs: &'a WeightSequence,
    trace: &'a WeightSequence,
}

fn paired_csv(rs: &WeightSequence, trace: &WeightSequence) -> String {
    let mut out = String::from("n,rs_weight,rs_provenance,trace_weight,trace_provenance\n");
    for (a, b) in rs.entries.iter().zip(&trace.entries) {
        out += &format!("{},{},{},{},{}\n", a.n, a.weight, a.provenance, b.weight, b.provenance);
    }
    out
}

fn cmd_weights(job: &JobSpec) -> Result<Outcome, Failure> {
    let c = collection(job)?;
    let ns = job
        .n
        .as_ref()
        .ok_or_else(|| Failure::usage("--n is required"))?
        .values()?;
    let method: Method = job.method.as_deref().unwrap_or("auto").parse()?;
    let caps = caps_for(job);
    let context = job.context.as_deref().unwrap_or("rs");
    let n_max = ns.iter().copied().max().unwrap_or(0);
    let (csv, json) = match context {
        "both" => {
            touch_cache(job, n_max)?;
            let rs = compute_weights(&c, Context::Rs, method, &ns, &caps)?;
            let trace = compute_weights(&c, Context::Trace, method, &ns, &caps)?;
            (paired_csv(&rs, &trace), to_json(&BothContexts { rs: &rs, trace: &trace }))
        }
        other => {
            let ctx: Context = other.parse()?;
            if ctx == Context::Trace {
                touch_cache(job, n_max)?;
            }
            let seq = compute_weights(&c, ctx, method, &ns, &caps)?;
            (seq.to_csv()?, to_json(&seq))
        }
    };
    let (primary, mirror, mirror_ext) = if job.json { (json, csv, "csv") } else { (csv, json, "json") };
    if let Some(path) = &job.out {
        write_out(path, &primary)?;
        write_out(&path.with_extension(mirror_ext), &mirror)?;
        return Ok(Outcome {
            stdout: String::new(),
            code: 0,
        });
    }
    Ok(Outcome {
        stdout: primary,
        code: 0,
    })
}

#[derive(Serialize)]
struct VerifyReport {
    suite: Suite,
    options: VerifyOptions,
    passed: bool,
    suites: Vec<SuiteReport>,
}

fn verify_summary(report: &VerifyReport) -> String {
    let mut out = String::new();
    for s in &report.suites {
        out += &format!("suite {}: {}/{} claims pass\n", s.suite, s.pass_count(), s.claims.len());
        for c in s.failures() {
            out += &format!("FAIL {} {}\n", c.claim, c.params);
        }
    }
    out += if report.passed { "result: pass\n" } else { "result: FAIL\n" };
    out
}

fn cmd_verify(job: &JobSpec) -> Result<Outcome, Failure> {
    let suite: Suite = job.suite.as_deref().unwrap_or("all").parse()?;
    let mut opts = VerifyOptions {
        caps: caps_for(job),
        ..VerifyOptions::default()
    };
    if let Some(t) = job.t_max {
        opts.t_max = t;
    }
    if let Some(e) = job.e_max {
        opts.e_max = e;
    }
    touch_cache(job, opts.trace_n_max.max(opts.n_max))?;
    let suites = run_suite(suite, &opts)?;
    let report = VerifyReport {
        suite,
        options: opts,
        passed: suites.iter().all(SuiteReport::passed),
        suites,
    };
    let json = to_json(&report);
    if let Some(path) = &job.out {
        write_out(path, &json)?;
    }
    Ok(Outcome {
        stdout: if job.json { json } else { verify_summary(&report) },
        code: if report.passed { 0 } else { 1 },
    })
}

fn family_report(c: &TupleCollection, caps: &Caps) -> Result<String, Failure> {
    let sys = TransferSystem::for_collection(c)?;
    let zeta = format!("1/({})", sys.zeta_denominator().render("s", true, true));
    let mut rows = vec![
        vec!["tuples".into(), c.to_string()],
        vec!["graph".into(), format!("{} vertices, {} edges", sys.vertex_count(), sys.edge_count())],
        vec!["zeta".into(), zeta],
        vec!["char values".into(), sys.char_values().render()],
    ];
    if c.is_quadratic() {
        if let Ok(n) = gf2poly::period_n(c) {
            rows.push(vec!["period N".into(), n.to_string()]);
        }
    }
    let e = curve_degree(c)?;
    let m = (e - 1) as usize;
    rows.push(vec!["curve degree e".into(), e.to_string()]);
    if m + 2 <= caps.trace_oracle {
        let n_max = (m + 4).min(caps.trace_oracle);
        let seq = compute_weights(c, Context::Trace, Method::Oracle, &(1..=n_max).collect::<Vec<_>>(), caps)?;
        let w = recover_weil_poly(c, &seq)?;
        rows.push(vec!["genus g".into(), w.g.to_string()]);
        rows.push(vec!["weil polynomial".into(), w.coefficients.to_string()]);
        rows.push(vec!["moduli sqrt 2".into(), w.moduli_ok.to_string()]);
        rows.push(vec!["extra terms".into(), w.delta_count.to_string()]);
        rows.push(vec!["case".into(), w.case.clone()]);
    }
    Ok(table(&["property", "value"], &rows))
}

fn rt_report(t: usize) -> Result<String, Failure> {
    let delta = DeltaMultiset::new(t)?;
    let mut out = format!("R({t}) characteristic polynomial: {}\n\n", char_poly_rt(t)?.render());
    let rows: Vec<Vec<String>> = delta
        .groups
        .iter()
        .map(|g| vec![g.d.to_string(), g.order.to_string(), g.multiplicity.to_string()])
        .collect();
    out += &table(&["d", "root order", "multiplicity"], &rows);
    out += "\n";
    let th: Vec<Vec<String>> = delta
        .theta_multiplicities()
        .into_iter()
        .map(|(d, m)| vec![format!("Theta_{d}"), m.to_string()])
        .collect();
    out += &table(&["factor", "multiplicity"], &th);
    Ok(out)
}

fn artifact_report(path: &Path) -> Result<String, Failure> {
    let text = fs::read_to_string(path).map_err(|_| Failure::usage(format!("artifact {} not found", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Failure::usage(format!("artifact is not JSON: {e}")))?;
    let str_of = |v: &Value| match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    if let Some(suites) = v.get("suites").and_then(Value::as_array) {
        let mut rows = Vec::new();
        for s in suites {
            for c in s["claims"].as_array().into_iter().flatten() {
                rows.push(vec![
                    str_of(&s["suite"]),
                    str_of(&c["claim"]),
                    c["params"].to_string(),
                    if c["pass"].as_bool() == Some(true) { "pass" } else { "FAIL" }.to_string(),
                ]);
            }
        }
        return Ok(table(&["suite", "claim", "params", "result"], &rows));
    }
    let sequences: Vec<&Value> = if v.get("entries").is_some() {
        vec![&v]
    } else if let (Some(a), Some(b)) = (v.get("rs"), v.get("trace")) {
        vec![a, b]
    } else {
        return Err(Failure::usage("unrecognized artifact"));
    };
    let mut out = String::new();
    for s in sequences {
        out += &format!("{} weights of {}\n", str_of(&s["context"]), s["collection"]);
        let rows: Vec<Vec<String>> = s["entries"]
            .as_array()
            .into_iter()
            .flatten()
            .map(|e| vec![str_of(&e["n"]), str_of(&e["weight"]), str_of(&e["provenance"])])
            .collect();
        out += &table(&["n", "weight", "provenance"], &rows);
    }
    Ok(out)
}

fn cmd_report(job: &JobSpec) -> Result<Outcome, Failure> {
    let mut parts = Vec::new();
    if let Some(path) = &job.input {
        parts.push(artifact_report(path)?);
    }
    if job.tuples.is_some() {
        parts.push(family_report(&collection(job)?, &caps_for(job))?);
    }
    if let Some(t) = job.t {
        parts.push(rt_report(t)?);
    }
    if parts.is_empty() {
        return Err(Failure::usage("report needs --input, --tuples or --t"));
    }
    let text = parts.join("\n");
    if let Some(path) = &job.out {
        write_out(path, &text)?;
    }
    Ok(Outcome { stdout: text, code: 0 })
}

fn run(job: &JobSpec) -> Result<Outcome, Failure> {
    match job.command {
        Command::Weights => cmd_weights(job),
        Command::Verify => cmd_verify(job),
        Command::Report => cmd_report(job),
    }
}

fn load_job(path: &Path) -> Result<JobSpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("bad job file: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let job = match (cli.job, cli.command) {
        (Some(path), None) => load_job(&path),
        (None, Some(cmd)) => Ok(job_from_flags(cmd)),
        (Some(_), Some(_)) => Err(Failure::usage("give either --job or a subcommand, not both")),
        (None, None) => Err(Failure::usage("a subcommand or --job is required")),
    };
    match job.and_then(|j| run(&j)) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            ExitCode::from(outcome.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
