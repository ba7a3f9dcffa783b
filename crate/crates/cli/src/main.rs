use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use picard_core::chabauty::{run_pipeline, ChabautyReport, CurveRecord, PipelineParams, RunStatus};
use picard_core::frobenius::{frobenius_matrix, zeta_consistency_check};
use picard_core::io::{parse_jsonl, parse_record, ReportRecord};
use picard_core::padic::PadicContext;
use picard_core::series::hensel_system_of_roots;

#[derive(Parser)]
#[command(name = "picard", version, about = "Coleman integration and Chabauty-Coleman on Picard curves y^3 = f(x)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct RunOpts {
    /// Prime p; by default the first good prime at which every generator splits.
    #[arg(long, env = "PICARD_PRIME")]
    prime: Option<u64>,
    /// Output p-adic digits N.
    #[arg(long, env = "PICARD_PRECISION", default_value_t = 15)]
    precision: i64,
    /// Starting ramification index for boundary points.
    #[arg(long = "e", env = "PICARD_E", default_value_t = 40)]
    e: u32,
    #[arg(long, env = "PICARD_E_INCREMENT", default_value_t = 20)]
    e_increment: u32,
    #[arg(long, env = "PICARD_E_CAP", default_value_t = 200)]
    e_cap: u32,
    /// Bound on |n|, |m| in the search for n [Q - oo] = m D.
    #[arg(long, env = "PICARD_RELATION_BOUND", default_value_t = 50)]
    relation_bound: i64,
}

impl RunOpts {
    fn params(&self) -> Result<PipelineParams> {
        if self.precision < 5 {
            bail!("precision must be at least 5");
        }
        if self.e == 0 || self.e_cap < self.e {
            bail!("need 1 <= e <= e-cap");
        }
        Ok(PipelineParams {
            precision: self.precision,
            e0: self.e,
            e_increment: self.e_increment,
            e_cap: self.e_cap,
            prime: self.prime,
            relation_bound: self.relation_bound,
            ..Default::default()
        })
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the pipeline on one curve record.
    Analyze {
        /// JSON record, or a path to a file holding one.
        #[arg(long, env = "PICARD_CURVE")]
        curve: String,
        #[command(flatten)]
        opts: RunOpts,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the pipeline on every record of a JSON-lines file.
    Batch {
        #[arg(long = "in", env = "PICARD_IN")]
        input: PathBuf,
        #[arg(long, env = "PICARD_OUT")]
        out: PathBuf,
        #[arg(long, env = "PICARD_JOBS", default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Roots in Z_p of an integer polynomial, as (residue, digits).
    Roots {
        #[arg(long, env = "PICARD_P")]
        p: u64,
        #[arg(long, env = "PICARD_N")]
        n: u32,
        /// Coefficients c0,c1,... from the constant term up.
        #[arg(long, allow_hyphen_values = true, value_delimiter = ',')]
        poly: Vec<i64>,
    },
    /// Frobenius matrix, characteristic polynomial and zeta checks.
    Zeta {
        #[arg(long, env = "PICARD_CURVE")]
        curve: String,
        #[arg(long, env = "PICARD_PRIME")]
        prime: Option<u64>,
        #[arg(long, env = "PICARD_PRECISION", default_value_t = 8)]
        precision: u32,
    },
}

fn read_record(arg: &str) -> Result<CurveRecord> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    };
    parse_record(text.trim()).map_err(|e| anyhow::anyhow!("invalid curve record: {e}"))
}

fn summary(r: &ChabautyReport) -> String {
    let mut s = String::new();
    let label = r.label.clone().unwrap_or_else(|| "-".into());
    s += &format!("curve {label}  p = {}  N = {}  e = {}\n", r.p, r.n, r.e);
    match &r.status {
        RunStatus::Success => s += "status: success\n",
        RunStatus::Failure(why) => s += &format!("status: failure ({why})\n"),
    }
    s += &format!("vanishing differentials: {} (to {} digits)\n", r.vanishing_dimension, r.vanishing_precision);
    s += &format!("S ({}):", r.s.len());
    for q in &r.s {
        s += &format!(" {q}");
    }
    s += "\n";
    s += &format!("T ({}):\n", r.t.len());
    for t in &r.t {
        let c = &t.classification;
        let x = c.x.as_ref().map(|x| x.value.clone()).unwrap_or_default();
        s += &format!("  disk {:?}  {}  x = {}", t.disk, c.name(), x);
        if let Some(m) = &c.x_minpoly {
            s += &format!("  minpoly(x) = {m:?}");
        }
        s += "\n";
    }
    s
}

fn analyze(curve: &str, opts: &RunOpts, out: Option<PathBuf>) -> Result<ExitCode> {
    let rec = read_record(curve)?;
    let params = opts.params()?;
    if let Some(p) = params.prime {
        if let Some(why) = rec.curve()?.prime_obstruction(p) {
            bail!("prime {p} refused: {why}");
        }
    }
    let t0 = Instant::now();
    let report = run_pipeline(&rec, &params);
    let record = ReportRecord::new(report, t0.elapsed());
    eprint!("{}", summary(&record.report));
    let json = serde_json::to_string_pretty(&record)?;
    match out {
        Some(path) => fs::write(&path, json + "\n").with_context(|| format!("writing {}", path.display()))?,
        None => println!("{json}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn batch(input: &PathBuf, out: &PathBuf, jobs: usize, opts: &RunOpts) -> Result<ExitCode> {
    let params = opts.params()?;
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let records = parse_jsonl(&text);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let results: Vec<ReportRecord> = pool.install(|| {
        records
            .par_iter()
            .map(|(_, r)| match r {
                Ok(rec) => {
                    let t0 = Instant::now();
                    let rep = run_pipeline(rec, &params);
                    ReportRecord::new(rep, t0.elapsed())
                }
                Err(why) => ReportRecord::new(ChabautyReport::failed(None, params.precision, why.clone()), Default::default()),
            })
            .collect()
    });
    let mut f = fs::File::create(out).with_context(|| format!("creating {}", out.display()))?;
    for r in &results {
        writeln!(f, "{}", serde_json::to_string(r)?)?;
    }
    let invalid = records.iter().filter(|(_, r)| r.is_err()).count();
    for (_, r) in &records {
        if let Err(why) = r {
            eprintln!("invalid record: {why}");
        }
    }
    let ok = results.iter().filter(|r| r.report.is_success()).count();
    println!("records: {}  success: {}  failure: {}  invalid: {}", results.len(), ok, results.len() - ok - invalid, invalid);
    let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
    for r in results.iter().filter(|r| r.report.is_success()) {
        *hist.entry(r.report.s.len()).or_default() += 1;
    }
    for (k, v) in &hist {
        println!("  |S| = {k}: {v}");
    }
    let mut labels: HashMap<&str, usize> = HashMap::new();
    for (_, r) in &records {
        if let Ok(CurveRecord { label: Some(l), .. }) = r {
            *labels.entry(l.as_str()).or_default() += 1;
        }
    }
    let mut dups: Vec<_> = labels.into_iter().filter(|(_, c)| *c > 1).map(|(l, _)| l).collect();
    dups.sort();
    if !dups.is_empty() {
        println!("duplicate labels: {}", dups.join(", "));
    }
    Ok(if invalid == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn roots(p: u64, n: u32, poly: &[i64]) -> Result<ExitCode> {
    if p < 2 || !picard_core::padic::is_prime(p) {
        bail!("{p} is not prime");
    }
    let ctx = PadicContext::new(p, n);
    let f: Vec<_> = poly.iter().map(|&c| c.into()).collect();
    for r in hensel_system_of_roots(&f, &ctx, n) {
        let tag = if r.certified_simple { "" } else { " non-simple" };
        println!("({},{}){}", r.residue, r.known_digits, tag);
    }
    Ok(ExitCode::SUCCESS)
}

fn zeta(curve: &str, prime: Option<u64>, precision: u32) -> Result<ExitCode> {
    let rec = read_record(curve)?;
    let c = rec.curve()?;
    let p = match prime {
        Some(p) => {
            if let Some(why) = c.prime_obstruction(p) {
                bail!("prime {p} refused: {why}");
            }
            p
        }
        None => c.good_prime(5, None),
    };
    let ctx = PadicContext::new(p, precision);
    let data = frobenius_matrix(&c, &ctx, None)?;
    let z = zeta_consistency_check(&data, &c);
    println!("p = {p}, Frobenius known to {} digits", data.precision);
    let chi: Vec<String> = z.charpoly.iter().map(|c| c.to_string()).collect();
    println!("det(T - M) = [{}]  (T^6 first)", chi.join(", "));
    println!("det M = {}  (p^3 = {})", z.charpoly[6], p.pow(3));
    println!("trace M = {}", -&z.charpoly[1]);
    println!("#X(F_{p}) = {}  (p + 1 - trace = {})", z.point_count, (p as i64 + 1) + &z.charpoly[1]);
    println!(
        "checks: determinant {}  functional equation {}  point count {}",
        ok(z.determinant_ok),
        ok(z.functional_equation_ok),
        ok(z.point_count_ok)
    );
    Ok(if z.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Analyze { curve, opts, out } => analyze(&curve, &opts, out),
        Cmd::Batch { input, out, jobs, opts } => batch(&input, &out, jobs, &opts),
        Cmd::Roots { p, n, poly } => roots(p, n, &poly),
        Cmd::Zeta { curve, prime, precision } => zeta(&curve, prime, precision),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
