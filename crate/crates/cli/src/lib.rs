//! The `fcc` command line: distance matrices, graphs, bounds and
//! constructions for function-correcting codes.
//!
//! Exit status: 0 success, 1 negative result, 2 input error, 3 budget exhausted.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fcc_core::bounds::{
    a_q_upper, bgs_bound, bound_report, compare_csv, compare_report, systematic_ecc_bound, zll_bound, AqOracle,
    AqTable, ReportBudget, UpperMethod,
};
use fcc_core::coset_coding::{build_cosetwise_encoder, classwise_encoder, subspace_selection};
use fcc_core::distance::{build_drm, build_fdm, n_q_exact, DistanceMatrix, NqBudget, ParityCode};
use fcc_core::encoder::{decode, find_violation, Decoded, FccEncoder};
use fcc_core::graph::{
    build_graph, find_fcc, independence_number, message_graph_alpha, AlphaBudget, AlphaResult,
};
use fcc_core::spectrum::{eigenvalue_redundancy_bound, graph_spectrum};
use fcc_core::{Error, FieldVec, FunctionSpec, Limits, PrimeField};

#[derive(Parser)]
#[command(name = "fcc", version, about = "Function-correcting codes over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance requirement matrix over all messages.
    Drm(FuncOpts),
    /// Function distance matrix over the image classes.
    Fdm(FuncOpts),
    /// Lower and upper bounds on the redundancy of an FCC, or of a systematic
    /// code when `--k` and `--d` are given without a function.
    Bounds(BoundsOpts),
    /// Independence number of G_f(t,k,r), or a decision against `--target`.
    Alpha(AlphaOpts),
    /// Shortest code meeting a distance matrix (the FDM by default).
    Nq(NqOpts),
    /// Eigenvalues of G_f(t,k,r), or the eigenvalue bound with `--r-max`.
    Spectrum(SpectrumOpts),
    /// Builds and verifies an FCC encoder.
    Construct(ConstructOpts),
    /// Checks an encoder file against the FCC distance condition.
    Verify(EncoderOpts),
    /// Recovers f(u) from a received word.
    Decode(DecodeOpts),
    /// Redundancy bounds for systematic codes over a range of k.
    Compare(CompareOpts),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct Common {
    /// Node limit for every exhaustive search.
    #[arg(long)]
    budget_nodes: Option<u64>,
    /// Wall-clock limit for graph searches.
    #[arg(long)]
    budget_seconds: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(skip)]
    args: String,
}

#[derive(Args, Clone)]
struct Function {
    /// Function file: `q k l linear` and rows, or `q k l table` and `rank label` lines.
    #[arg(long, conflicts_with = "matrix")]
    func: Option<PathBuf>,
    /// Inline matrix, rows separated by `;`, e.g. "1110;0110".
    #[arg(long)]
    matrix: Option<String>,
    #[arg(long, default_value_t = 2)]
    q: u64,
}

#[derive(Args)]
struct FuncOpts {
    #[command(flatten)]
    f: Function,
    #[arg(long, default_value_t = 1)]
    t: usize,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct BoundsOpts {
    #[command(flatten)]
    f: Function,
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Eigenvalue bound scans `r` up to this value.
    #[arg(long, default_value_t = 12)]
    r_max: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    aq_table: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct AlphaOpts {
    #[command(flatten)]
    f: Function,
    #[arg(long, default_value_t = 1)]
    t: usize,
    #[arg(long, default_value_t = 0)]
    r: usize,
    /// Decide `alpha >= target` instead of computing alpha.
    #[arg(long)]
    target: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct NqOpts {
    #[command(flatten)]
    f: Function,
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Distance matrix file instead of a function.
    #[arg(long)]
    dm: Option<PathBuf>,
    /// Use the full distance requirement matrix instead of the FDM.
    #[arg(long)]
    full: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct SpectrumOpts {
    #[command(flatten)]
    f: Function,
    #[arg(long, default_value_t = 1)]
    t: usize,
    #[arg(long, default_value_t = 0)]
    r: usize,
    #[arg(long)]
    r_max: Option<usize>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ConstructOpts {
    #[command(flatten)]
    f: Function,
    #[arg(long, default_value_t = 1)]
    t: usize,
    /// Search the FCC graph at this redundancy.
    #[arg(long, conflicts_with = "parity")]
    r: Option<usize>,
    /// Parity part of a classical code, used on a subspace of representatives.
    #[arg(long)]
    parity: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct EncoderOpts {
    #[command(flatten)]
    f: Function,
    #[arg(long)]
    encoder: PathBuf,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct DecodeOpts {
    #[command(flatten)]
    f: Function,
    #[arg(long)]
    encoder: PathBuf,
    /// Received word of length k + r.
    #[arg(long)]
    word: String,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct CompareOpts {
    #[arg(long, default_value_t = 2)]
    q: u64,
    #[arg(long)]
    d: usize,
    /// Inclusive range `A:B`.
    #[arg(long)]
    k_range: String,
    #[arg(long)]
    aq_table: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

impl Command {
    fn common_mut(&mut self) -> &mut Common {
        match self {
            Command::Drm(o) | Command::Fdm(o) => &mut o.common,
            Command::Bounds(o) => &mut o.common,
            Command::Alpha(o) => &mut o.common,
            Command::Nq(o) => &mut o.common,
            Command::Spectrum(o) => &mut o.common,
            Command::Construct(o) => &mut o.common,
            Command::Verify(o) => &mut o.common,
            Command::Decode(o) => &mut o.common,
            Command::Compare(o) => &mut o.common,
        }
    }
}

/// A completed run whose answer may be negative.
enum Outcome {
    Done,
    Negative,
}

/// Runs one command line (program name first) and returns the exit status.
pub fn run_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli, &args) {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::Negative) => 1,
        Err(e) => {
            eprintln!("error: {e:#}");
            let budget = e.chain().any(|c| c.downcast_ref::<Error>().is_some_and(Error::is_budget));
            if budget {
                3
            } else {
                2
            }
        }
    }
}

fn run(cli: Cli, args: &[String]) -> anyhow::Result<Outcome> {
    let mut command = cli.command;
    command.common_mut().args = args.join(" ");
    match command {
        Command::Drm(o) => cmd_drm(o),
        Command::Fdm(o) => cmd_fdm(o),
        Command::Bounds(o) => cmd_bounds(o),
        Command::Alpha(o) => cmd_alpha(o),
        Command::Nq(o) => cmd_nq(o),
        Command::Spectrum(o) => cmd_spectrum(o),
        Command::Construct(o) => cmd_construct(o),
        Command::Verify(o) => cmd_verify(o),
        Command::Decode(o) => cmd_decode(o),
        Command::Compare(o) => cmd_compare(o),
    }
}

fn read(path: &PathBuf) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

impl Function {
    fn load(&self) -> anyhow::Result<FunctionSpec> {
        match (&self.func, &self.matrix) {
            (Some(p), None) => FunctionSpec::parse(&read(p)?).with_context(|| format!("parsing {}", p.display())),
            (None, Some(m)) => {
                let field = PrimeField::new(self.q)?;
                let rows = m
                    .split(';')
                    .map(|r| Ok(FieldVec::parse(field, r.trim())?.symbols().to_vec()))
                    .collect::<anyhow::Result<Vec<_>>>()?;
                Ok(FunctionSpec::linear(field, rows)?)
            }
            _ => bail!("give the function with --func PATH or --matrix \"r1;r2;...\""),
        }
    }

    fn given(&self) -> bool {
        self.func.is_some() || self.matrix.is_some()
    }
}

impl Common {
    fn header(&self) -> Vec<String> {
        vec![
            format!("fcc {}", env!("CARGO_PKG_VERSION")),
            format!("command: {}", self.args),
            format!(
                "budgets: nodes={} seconds={}",
                self.budget_nodes.map_or("default".into(), |n| n.to_string()),
                self.budget_seconds.map_or("none".into(), |s| s.to_string())
            ),
        ]
    }

    fn alpha_budget(&self) -> AlphaBudget {
        AlphaBudget {
            node_limit: self.budget_nodes,
            deadline: self.budget_seconds.map(|s| Instant::now() + Duration::from_secs_f64(s)),
        }
    }

    fn nq_budget(&self) -> NqBudget {
        let d = NqBudget::default();
        NqBudget {
            node_limit: self.budget_nodes.unwrap_or(d.node_limit),
            ..d
        }
    }

    fn oracle(&self, table: &Option<PathBuf>) -> anyhow::Result<AqOracle> {
        let table = match table {
            Some(p) => Some(AqTable::parse_csv(&read(p)?).with_context(|| format!("parsing {}", p.display()))?),
            None => None,
        };
        let mut o = AqOracle::with_table(table);
        if let Some(n) = self.budget_nodes {
            o.exact_node_limit = n;
        }
        Ok(o)
    }

    fn emit(&self, csv: impl FnOnce(&[String]) -> String, json: impl FnOnce() -> Value) -> anyhow::Result<()> {
        let header = self.header();
        let text = match self.format {
            Format::Csv => csv(&header),
            Format::Json => {
                let mut v = json!({ "header": header });
                if let (Value::Object(m), Value::Object(extra)) = (&mut v, json()) {
                    m.extend(extra);
                }
                serde_json::to_string_pretty(&v)? + "\n"
            }
        };
        match &self.out {
            Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

fn comments(header: &[String]) -> String {
    header.iter().map(|h| format!("# {h}\n")).collect()
}

fn cmd_drm(o: FuncOpts) -> anyhow::Result<Outcome> {
    let f = o.f.load()?;
    let d = build_drm(&f, o.t, &Limits::default())?;
    o.common.emit(|h| d.to_csv(h), || json!({ "t": o.t, "rows": d.rows() }))?;
    Ok(Outcome::Done)
}

fn cmd_fdm(o: FuncOpts) -> anyhow::Result<Outcome> {
    let f = o.f.load()?;
    let (d, labels) = build_fdm(&f, o.t, &Limits::default())?;
    let labels: Vec<String> = labels.iter().map(|l| l.to_string()).collect();
    o.common.emit(
        |h| {
            let mut h = h.to_vec();
            h.push(format!("classes: {}", labels.join(" ")));
            d.to_csv(&h)
        },
        || json!({ "t": o.t, "labels": labels, "rows": d.rows() }),
    )?;
    Ok(Outcome::Done)
}

fn cmd_bounds(o: BoundsOpts) -> anyhow::Result<Outcome> {
    if !o.f.given() {
        return classical_bounds(o);
    }
    let f = o.f.load()?;
    let budget = ReportBudget {
        alpha: o.common.alpha_budget(),
        nq: o.common.nq_budget(),
        rep_nodes: o.common.budget_nodes.unwrap_or(ReportBudget::default().rep_nodes),
        spectral_r_max: o.r_max,
    };
    let report = bound_report(&f, o.t, &budget, &Limits::default())?;
    o.common.emit(
        |h| {
            let mut h = h.to_vec();
            h.push(format!(
                "best lower {} / best upper {}",
                report.lower_max().map_or("-".into(), |v| v.to_string()),
                report.upper_min().map_or("-".into(), |v| v.to_string())
            ));
            report.to_csv(&h)
        },
        || {
            json!({
                "report": report,
                "best_lower": report.lower_max(),
                "best_upper": report.upper_min(),
            })
        },
    )?;
    Ok(Outcome::Done)
}

fn classical_bounds(o: BoundsOpts) -> anyhow::Result<Outcome> {
    let (Some(k), Some(d)) = (o.k, o.d) else {
        bail!("give a function, or --k and --d for a systematic code");
    };
    let q = o.f.q;
    let mut oracle = o.common.oracle(&o.aq_table)?;
    let mut rows: Vec<(String, usize, String)> = Vec::new();
    let est = oracle.estimate(PrimeField::new(q)?.q(), k, d)?;
    rows.push(("a_q".into(), systematic_ecc_bound(q, k, d, &est)?, format!("{} = {}", est.kind, est.value)));
    for (name, m) in [("hamming", UpperMethod::Hamming), ("singleton", UpperMethod::Singleton), ("plotkin", UpperMethod::Plotkin)] {
        if let Ok(e) = a_q_upper(q, k, d, m) {
            rows.push((name.into(), systematic_ecc_bound(q, k, d, &e)?, format!("{} = {}", e.kind, e.value)));
        }
    }
    if d >= 2 {
        let z = zll_bound(q, k, d, &mut oracle)?;
        rows.push(("zll".into(), z.r, kinds(&z.kinds)));
        let b = bgs_bound(q, k, d, &mut oracle)?;
        rows.push(("bgs".into(), b.r, kinds(&b.kinds)));
    }
    o.common.emit(
        |h| {
            let mut s = comments(h);
            s.push_str("bound,r,estimator\n");
            for (n, r, e) in &rows {
                s.push_str(&format!("{n},{r},{e}\n"));
            }
            s
        },
        || {
            let v: Vec<Value> = rows.iter().map(|(n, r, e)| json!({ "bound": n, "r": r, "estimator": e })).collect();
            json!({ "q": q, "k": k, "d": d, "bounds": v })
        },
    )?;
    Ok(Outcome::Done)
}

fn kinds(k: &[fcc_core::bounds::AqKind]) -> String {
    k.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn cmd_alpha(o: AlphaOpts) -> anyhow::Result<Outcome> {
    let f = o.f.load()?;
    let limits = Limits::default();
    let budget = o.common.alpha_budget();
    let (result, alpha, witness): (&str, Option<u64>, Vec<usize>) = match (o.r, o.target) {
        (0, None) => ("exact", Some(message_graph_alpha(&f, o.t, &budget, &limits)?), Vec::new()),
        (r, target) => {
            let g = build_graph(&f, o.t, r, &limits)?;
            match independence_number(&g, target, &budget, &limits)? {
                AlphaResult::Exact { alpha, witness } => ("exact", Some(alpha as u64), witness),
                AlphaResult::AtLeast { witness, .. } => ("at_least", Some(witness.len() as u64), witness),
                AlphaResult::Below { .. } => ("below", None, Vec::new()),
            }
        }
    };
    o.common.emit(
        |h| {
            let mut s = comments(h);
            s.push_str("t,r,target,result,alpha\n");
            s.push_str(&format!(
                "{},{},{},{result},{}\n",
                o.t,
                o.r,
                o.target.map_or(String::new(), |x| x.to_string()),
                alpha.map_or(String::new(), |x| x.to_string())
            ));
            s
        },
        || json!({ "t": o.t, "r": o.r, "target": o.target, "result": result, "alpha": alpha, "witness": witness }),
    )?;
    Ok(if result == "below" { Outcome::Negative } else { Outcome::Done })
}

fn cmd_nq(o: NqOpts) -> anyhow::Result<Outcome> {
    let (d, q) = match &o.dm {
        Some(p) => (DistanceMatrix::parse_csv(&read(p)?).with_context(|| format!("parsing {}", p.display()))?, o.f.q),
        None => {
            let f = o.f.load()?;
            let d = if o.full { build_drm(&f, o.t, &Limits::default())? } else { build_fdm(&f, o.t, &Limits::default())?.0 };
            (d, f.q() as u64)
        }
    };
    let res = n_q_exact(&d, q, &o.common.nq_budget())?;
    let words: Vec<String> = res.witness.words.iter().map(|w| w.to_string()).collect();
    o.common.emit(
        |h| {
            let mut s = comments(h);
            s.push_str(&format!("# length: {}\n# nodes: {}\nindex,parity\n", res.length, res.nodes));
            for (i, w) in words.iter().enumerate() {
                s.push_str(&format!("{i},{w}\n"));
            }
            s
        },
        || json!({ "length": res.length, "nodes": res.nodes, "witness": words }),
    )?;
    Ok(Outcome::Done)
}

fn cmd_spectrum(o: SpectrumOpts) -> anyhow::Result<Outcome> {
    let f = o.f.load()?;
    let limits = Limits::default();
    if let Some(r_max) = o.r_max {
        let (r, trace) = eigenvalue_redundancy_bound(&f, o.t, r_max, &limits)?;
        o.common.emit(
            |h| {
                let mut s = comments(h);
                s.push_str(&format!("# bound: {}\n", r.map_or("none".into(), |r| r.to_string())));
                s.push_str("r,lambda_max,lambda_min,ratio,holds\n");
                for x in &trace {
                    s.push_str(&format!("{},{},{},{},{}\n", x.r, x.lambda_max, x.lambda_min, x.ratio, x.holds));
                }
                s
            },
            || {
                let steps: Vec<Value> = trace
                    .iter()
                    .map(|x| json!({ "r": x.r, "lambda_max": x.lambda_max, "lambda_min": x.lambda_min, "ratio": x.ratio, "holds": x.holds }))
                    .collect();
                json!({ "bound": r, "trace": steps })
            },
        )?;
        return Ok(if r.is_some() { Outcome::Done } else { Outcome::Negative });
    }
    let g = build_graph(&f, o.t, o.r, &limits)?;
    let s = graph_spectrum(&g)?;
    o.common.emit(
        |h| s.to_csv(h),
        || json!({ "t": o.t, "r": o.r, "lambda_max": s.max(), "lambda_min": s.min(), "eigenvalues": s.eigenvalues }),
    )?;
    Ok(Outcome::Done)
}

fn cmd_construct(o: ConstructOpts) -> anyhow::Result<Outcome> {
    let f = o.f.load()?;
    let (e, method) = if let Some(p) = &o.parity {
        let src = ParityCode::parse(&read(p)?, Some(f.q() as u64)).with_context(|| format!("parsing {}", p.display()))?;
        let sel = subspace_selection(&f)?;
        (build_cosetwise_encoder(&f, o.t, &sel, &src)?, "subspace of representatives")
    } else if let Some(r) = o.r {
        match find_fcc(&f, o.t, r, &o.common.alpha_budget(), &Limits::default())? {
            Some(e) => (e, "graph search"),
            None => {
                eprintln!("no (f,{})-FCC with r = {r}", o.t);
                return Ok(Outcome::Negative);
            }
        }
    } else {
        let (fdm, _) = build_fdm(&f, o.t, &Limits::default())?;
        let res = n_q_exact(&fdm, f.q() as u64, &o.common.nq_budget())?;
        (classwise_encoder(&f, o.t, &res.witness)?, "shortest FDM code")
    };
    if let Some(v) = find_violation(&e)? {
        bail!("internal: constructed encoder fails at messages {} and {}", v.a, v.b);
    }
    let parities: Vec<String> = e.parities().iter().map(|p| p.to_string()).collect();
    o.common.emit(
        |h| {
            let mut h = h.to_vec();
            h.push(format!("method: {method}; verified"));
            comments(&h) + &e.to_text()
        },
        || json!({ "q": f.q(), "k": f.k(), "r": e.r(), "t": e.t(), "method": method, "parities": parities }),
    )?;
    Ok(Outcome::Done)
}

fn load_encoder(f: &Function, path: &PathBuf) -> anyhow::Result<FccEncoder> {
    let f = f.load()?;
    FccEncoder::parse(&read(path)?, f).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_verify(o: EncoderOpts) -> anyhow::Result<Outcome> {
    let e = load_encoder(&o.f, &o.encoder)?;
    let v = find_violation(&e)?;
    o.common.emit(
        |h| {
            let mut s = comments(h);
            s.push_str("valid,a,b,distance\n");
            match v {
                None => s.push_str("true,,,\n"),
                Some(v) => s.push_str(&format!("false,{},{},{}\n", v.a, v.b, v.distance)),
            }
            s
        },
        || match v {
            None => json!({ "valid": true }),
            Some(v) => json!({ "valid": false, "a": v.a, "b": v.b, "distance": v.distance }),
        },
    )?;
    Ok(if v.is_none() { Outcome::Done } else { Outcome::Negative })
}

fn cmd_decode(o: DecodeOpts) -> anyhow::Result<Outcome> {
    let e = load_encoder(&o.f, &o.encoder)?;
    let y = FieldVec::parse(e.function().field(), &o.word)?;
    let d = decode(&e, &y)?;
    o.common.emit(
        |h| {
            let mut s = comments(h);
            s.push_str("decoded,value,message,distance\n");
            match &d {
                Decoded::Value { label, message, distance } => s.push_str(&format!("true,{label},{message},{distance}\n")),
                Decoded::Failure { nearest } => s.push_str(&format!("false,,,{nearest}\n")),
            }
            s
        },
        || match &d {
            Decoded::Value { label, message, distance } => {
                json!({ "decoded": true, "value": label.to_string(), "message": message, "distance": distance })
            }
            Decoded::Failure { nearest } => json!({ "decoded": false, "distance": nearest }),
        },
    )?;
    Ok(match d {
        Decoded::Value { .. } => Outcome::Done,
        Decoded::Failure { .. } => Outcome::Negative,
    })
}

fn parse_range(s: &str) -> anyhow::Result<Vec<usize>> {
    let (a, b) = s.split_once(':').context("expected A:B")?;
    let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
    if a > b {
        bail!("empty range {s}");
    }
    Ok((a..=b).collect())
}

fn cmd_compare(o: CompareOpts) -> anyhow::Result<Outcome> {
    let ks = parse_range(&o.k_range).with_context(|| format!("--k-range {}", o.k_range))?;
    let mut oracle = o.common.oracle(&o.aq_table)?;
    let rows = compare_report(o.q, o.d, &ks, &mut oracle)?;
    let tables = o.aq_table.is_some();
    o.common.emit(|h| compare_csv(&rows, h, tables), || json!({ "q": o.q, "d": o.d, "rows": rows }))?;
    Ok(Outcome::Done)
}
