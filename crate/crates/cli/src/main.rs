//! `atgraph`: generate (α,t)-graphs, score them, and run the validation suites.
//!
//! Exit status: 0 on success, 1 when a computation or validation fails, 2 on usage
//! errors (bad flags, unparseable specs, invalid parameters).

use anyhow::{bail, Context};
use atgraph::arrivals::ArrivalSpec;
use atgraph::asymptotics::{
    density_exponent, gamma_linear, log_checkpoints, scaled_degrees, simulate_trajectory, tail_exponent, trajectory_from_labels,
    DMinRule, Regime, TrajectoryStats,
};
use atgraph::identities::{run_identity, simulate_immigration_urn_jump, CrpForm, IdentitySpec, Route, YsForm};
use atgraph::io::{format_edge_list, format_labels, format_psi, format_schedule, parse_edge_list, read_labels_file, read_schedule_file};
use atgraph::likelihood::{crp_marginal_log_prob, log_prob_labels};
use atgraph::partition::sample_urn;
use atgraph::rng::{stream, stream_at, Component};
use atgraph::samplers::{sample_db, sample_stick_breaking};
use atgraph::stats::degree_counts;
use atgraph::validate::{run_criterion, CriterionRow, NUM_CRITERIA};
use atgraph::{ArrivalSchedule, Error, LabelSequence, ModelParams, MultigraphView};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "atgraph", version, about = "Preferential attachment graphs with vertex arrival times")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a graph and write its label sequence or edge list.
    Generate(GenerateArgs),
    /// Degree histogram, tail exponent and density exponent of a graph file.
    Degrees(DegreesArgs),
    /// Exact log-probability of a labels file under (alpha, t).
    Loglik(LoglikArgs),
    /// Tables of the limiting degree pmf.
    LimitPmf(LimitPmfArgs),
    /// Checkpointed simulation of vertex counts and head degrees.
    Trajectory(TrajectoryArgs),
    /// Run one distributional identity test.
    Identity(IdentityArgs),
    /// Immigration urn: white-ball counts and their scaled limits.
    Urn(UrnArgs),
    /// Run the acceptance criteria; exits 1 if any fails.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Db,
    Stick,
    Urn,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Edgelist,
    Labels,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// constant:d | every:c | geom:beta | poisplus:lambda | pmf:v=p,... | crp:alpha,theta | file:path | doubled:<spec>
    #[arg(long)]
    arrivals: String,
    /// Number of edges; the graph has twice as many ends.
    #[arg(long, conflicts_with = "ends")]
    edges: Option<u64>,
    /// Number of edge ends (may be odd).
    #[arg(long)]
    ends: Option<u64>,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "db")]
    method: Method,
    #[arg(long, value_enum, default_value = "labels")]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write the realized arrival schedule here.
    #[arg(long)]
    schedule_out: Option<PathBuf>,
    /// Also write the stick-breaking variables here (stick method only).
    #[arg(long)]
    psi_out: Option<PathBuf>,
}

#[derive(Args)]
struct DegreesArgs {
    /// A labels file, or an edge list with `--edgelist`.
    input: PathBuf,
    #[arg(long)]
    edgelist: bool,
    #[arg(long, default_value_t = 20)]
    dmax: usize,
    /// Fixed lower cutoff for the tail fit instead of the 1% tail rule.
    #[arg(long)]
    dmin: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LoglikArgs {
    /// Labels file (an `alpha=` header is used unless `--alpha` is given).
    input: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Deterministic arrival spec (constant, every, file) or crp:alpha,theta to
    /// marginalize over CRP arrival times.
    #[arg(long, conflicts_with = "schedule")]
    arrivals: Option<String>,
    /// Schedule file (one arrival time per line).
    #[arg(long)]
    schedule: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Linear,
    Sublinear,
}

#[derive(Args)]
struct LimitPmfArgs {
    #[arg(long, value_enum)]
    regime: RegimeArg,
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    /// Mean interarrival time (linear regime).
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long, default_value_t = 20)]
    dmax: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TrajectoryArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: f64,
    #[arg(long)]
    arrivals: String,
    #[arg(long)]
    ends: u64,
    #[arg(long)]
    seed: u64,
    /// Head vertices whose degrees are recorded.
    #[arg(long, default_value_t = 3)]
    r: usize,
    /// Histogram cutoff; 0 tracks only the head (much faster).
    #[arg(long, default_value_t = 0)]
    dmax: usize,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Joint,
    Marginal,
    GammaMarginal,
    Conditional,
    ConditionalProduct,
}

#[derive(Args)]
struct IdentityArgs {
    /// BETA_GAMMA_ALGEBRA | BETA_PRODUCT_SPLIT | PA_LIMITS | CRP_LIMITS | YS_LIMITS | URN_IMMIGRATION
    name: String,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Edges per vertex (PA_LIMITS).
    #[arg(long, default_value_t = 1)]
    d: u64,
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long, default_value_t = 1)]
    which: u8,
    /// Conditioning arrival times, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1,3")]
    times: Vec<u64>,
    #[arg(long, value_enum, default_value = "joint")]
    form: FormArg,
    /// White seed balls (URN_IMMIGRATION).
    #[arg(long, default_value_t = 1)]
    white: u64,
    /// Black seed balls (URN_IMMIGRATION).
    #[arg(long, default_value_t = 1)]
    black: u64,
    /// Use the simulation route with graphs of this many ends.
    #[arg(long)]
    simulate: Option<u64>,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct UrnArgs {
    #[arg(long, default_value_t = 1)]
    white: u64,
    #[arg(long, default_value_t = 1)]
    black: u64,
    #[arg(long)]
    beta: f64,
    /// Balls at the end of each run.
    #[arg(long)]
    n: u64,
    #[arg(long, default_value_t = 1)]
    reps: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    seed: u64,
    /// Subset of criteria, comma separated (default: all).
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<u8>,
    /// Write the per-criterion rows as JSON here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Print every component of every criterion.
    #[arg(long, short)]
    verbose: bool,
}

/// Raised when a check ran but did not pass.
#[derive(Debug)]
struct Failed;

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("validation failed")
    }
}

impl std::error::Error for Failed {}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Degrees(a) => degrees(a),
        Command::Loglik(a) => loglik(a),
        Command::LimitPmf(a) => limit_pmf(a),
        Command::Trajectory(a) => trajectory(a),
        Command::Identity(a) => identity(a),
        Command::Urn(a) => urn(a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.is::<Failed>() => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::Parse(_) | Error::BadParams(_)) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Error::BadParams(msg.into()).into()
}

fn parse_arrivals(s: &str) -> anyhow::Result<ArrivalSpec> {
    Ok(s.parse::<ArrivalSpec>()?)
}

#[derive(Serialize)]
struct GeneratedGraph<'a> {
    alpha: f64,
    arrival_times: &'a [u64],
    labels: &'a [atgraph::Label],
}

fn generate(a: GenerateArgs) -> anyhow::Result<()> {
    let n = match (a.edges, a.ends) {
        (Some(e), None) => 2 * e,
        (None, Some(n)) => n,
        _ => return Err(usage("give --edges or --ends")),
    };
    if n == 0 {
        return Err(usage("the graph needs at least one end"));
    }
    let params = ModelParams::new(a.alpha)?;
    let spec = parse_arrivals(&a.arrivals)?;
    let schedule = spec.realize(n, &mut stream(a.seed, Component::Arrivals))?;
    let mut psi = None;
    let labels = match a.method {
        Method::Db => sample_db(&params, &schedule, n, &mut stream(a.seed, Component::Graph))?.labels,
        Method::Stick => {
            let out = sample_stick_breaking(&params, &schedule, n, &mut stream(a.seed, Component::Stick))?;
            psi = out.psi;
            out.labels
        }
        Method::Urn => sample_urn(&params, &schedule, n, &mut stream(a.seed, Component::Urn))?.labels().clone(),
    };
    let text = match a.format {
        Format::Labels => format_labels(a.alpha, &labels),
        Format::Edgelist => format_edge_list(&labels),
        Format::Json => to_json(&GeneratedGraph {
            alpha: a.alpha,
            arrival_times: MultigraphView::new(labels.clone()).arrival_times(),
            labels: labels.as_slice(),
        })?,
        Format::Csv => return Err(usage("generate writes labels, edgelist or json")),
    };
    emit(a.output.as_deref(), &text)?;
    if let Some(p) = &a.schedule_out {
        fs::write(p, format_schedule(&schedule))?;
    }
    if let Some(p) = &a.psi_out {
        let w = psi.ok_or_else(|| usage("--psi-out needs --method stick"))?;
        fs::write(p, format_psi(w.psi()))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct DegreeReport {
    num_vertices: usize,
    num_ends: usize,
    max_degree: u64,
    /// Counts for `d ≤ dmax`.
    histogram: Vec<DegreeCount>,
    above_dmax: u64,
    tail: Option<atgraph::asymptotics::TailFit>,
    tail_error: Option<String>,
    density: Option<atgraph::asymptotics::DensityEstimate>,
    density_error: Option<String>,
}

#[derive(Serialize)]
struct DegreeCount {
    d: u64,
    count: u64,
}

fn read_graph(path: &Path, edgelist: bool) -> anyhow::Result<LabelSequence> {
    if edgelist {
        Ok(parse_edge_list(&fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)?)
    } else {
        Ok(read_labels_file(path)?.1)
    }
}

fn degrees(a: DegreesArgs) -> anyhow::Result<()> {
    let labels = read_graph(&a.input, a.edgelist)?;
    let n = labels.len() as u64;
    let view = MultigraphView::new(labels.clone());
    let (counts, above) = degree_counts(view.degrees(), a.dmax);
    let rule = a.dmin.map_or(DMinRule::default(), DMinRule::Fixed);
    let (tail, tail_error) = split(tail_exponent(view.degrees(), rule));
    let traj = trajectory_from_labels(&labels, 1, 0, &log_checkpoints(n));
    let (density, density_error) = split(density_exponent(&traj));
    let report = DegreeReport {
        num_vertices: view.num_vertices(),
        num_ends: view.num_edge_ends(),
        max_degree: view.degrees().iter().copied().max().unwrap_or(0),
        histogram: counts.iter().enumerate().map(|(i, &count)| DegreeCount { d: i as u64 + 1, count }).collect(),
        above_dmax: above,
        tail,
        tail_error,
        density,
        density_error,
    };
    let text = match a.format {
        Format::Json => to_json(&report)?,
        Format::Csv => {
            let mut s = String::from("degree,count,fraction\n");
            let k = report.num_vertices.max(1) as f64;
            for DegreeCount { d, count } in &report.histogram {
                writeln!(s, "{d},{count},{}", *count as f64 / k)?;
            }
            s
        }
        _ => return Err(usage("degrees writes json or csv")),
    };
    emit(a.output.as_deref(), &text)
}

fn split<T>(r: atgraph::Result<T>) -> (Option<T>, Option<String>) {
    match r {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

fn loglik(a: LoglikArgs) -> anyhow::Result<()> {
    let (header, labels) = read_labels_file(&a.input)?;
    let alpha = a.alpha.or(header).ok_or_else(|| usage("no alpha: pass --alpha or add an alpha= header"))?;
    let params = ModelParams::new(alpha)?;
    let n = labels.len() as u64;
    let value = match (&a.arrivals, &a.schedule) {
        (_, Some(path)) => log_prob_labels(&params, &read_schedule_file(path)?, &labels)?.into_result()?,
        (Some(s), None) => match parse_arrivals(s)? {
            ArrivalSpec::Crp { alpha: ca, theta } => {
                if ca != alpha {
                    return Err(usage(format!("crp:{ca},{theta} must use the graph's alpha {alpha}")));
                }
                crp_marginal_log_prob(alpha, theta, &labels)?
            }
            spec @ (ArrivalSpec::Constant(_) | ArrivalSpec::Every(_) | ArrivalSpec::File(_)) => {
                // Deterministic specs ignore the RNG.
                let schedule: ArrivalSchedule = spec.realize(n, &mut stream(0, Component::Arrivals))?;
                log_prob_labels(&params, &schedule, &labels)?.into_result()?
            }
            _ => return Err(usage("random arrival specs have no fixed t; pass a schedule file or crp:alpha,theta")),
        },
        (None, None) => return Err(usage("pass --arrivals or --schedule")),
    };
    if value == f64::NEG_INFINITY {
        bail!(Error::Inconsistent("labels have probability zero under this arrival law".into()));
    }
    #[derive(Serialize)]
    struct Loglik {
        logprob: f64,
        n: u64,
        k: usize,
        alpha: f64,
    }
    print!("{}", to_json(&Loglik { logprob: value, n, k: labels.num_vertices(), alpha })?);
    Ok(())
}

fn limit_pmf(a: LimitPmfArgs) -> anyhow::Result<()> {
    let regime = match a.regime {
        RegimeArg::Sublinear => Regime::SubLinear { alpha: a.alpha },
        RegimeArg::Linear => {
            let mu = a.mu.ok_or_else(|| usage("the linear regime needs --mu"))?;
            gamma_linear(a.alpha, mu)?;
            Regime::Linear { alpha: a.alpha, mu }
        }
    };
    let pmf = regime.pmf(a.dmax)?;
    let text = match a.format {
        Format::Csv => {
            let mut s = String::from("d,pmf\n");
            for (i, p) in pmf.iter().enumerate() {
                writeln!(s, "{},{p}", i + 1)?;
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Table {
                regime: Regime,
                tail_exponent: f64,
                pmf: Vec<(usize, f64)>,
            }
            to_json(&Table { regime, tail_exponent: regime.tail_exponent(), pmf: pmf.iter().enumerate().map(|(i, &p)| (i + 1, p)).collect() })?
        }
        _ => return Err(usage("limit-pmf writes csv or json")),
    };
    emit(a.output.as_deref(), &text)
}

fn trajectory(a: TrajectoryArgs) -> anyhow::Result<()> {
    use atgraph::arrivals::{CrpArrivals, FixedArrivals};
    ModelParams::new(a.alpha)?;
    let spec = parse_arrivals(&a.arrivals)?;
    let checkpoints = log_checkpoints(a.ends);
    let mut rng = stream(a.seed, Component::Trajectory);
    let traj: TrajectoryStats = match &spec {
        ArrivalSpec::Crp { alpha, theta } => {
            simulate_trajectory(a.alpha, &mut CrpArrivals::new(*alpha, *theta)?, a.ends, a.r, a.dmax, &checkpoints, &mut rng)
        }
        other => {
            let schedule = other.realize(a.ends, &mut stream(a.seed, Component::Arrivals))?;
            simulate_trajectory(a.alpha, &mut FixedArrivals::new(&schedule), a.ends, a.r, a.dmax, &checkpoints, &mut rng)
        }
    };
    let gamma = spec.mean_interarrival().and_then(|mu| gamma_linear(a.alpha, mu).ok());
    let traj = match gamma {
        Some(g) => traj.with_gamma(g),
        None => traj,
    };
    let text = match a.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                trajectory: TrajectoryStats,
                scaled: atgraph::asymptotics::ScaledDegrees,
            }
            let scaled = scaled_degrees(&traj, a.r, gamma.unwrap_or(1.0));
            to_json(&Out { trajectory: traj, scaled })?
        }
        Format::Csv => {
            let mut s = String::from("n,vertices");
            for j in 1..=a.r {
                write!(s, ",deg_{j}")?;
            }
            s.push('\n');
            for c in &traj.checkpoints {
                write!(s, "{},{}", c.n, c.num_vertices)?;
                for j in 0..a.r {
                    match c.head_degrees.get(j) {
                        Some(d) => write!(s, ",{d}")?,
                        None => s.push(','),
                    }
                }
                s.push('\n');
            }
            s
        }
        _ => return Err(usage("trajectory writes json or csv")),
    };
    emit(a.output.as_deref(), &text)
}

fn identity_spec(a: &IdentityArgs) -> anyhow::Result<IdentitySpec> {
    let need = |v: Option<f64>, flag: &str| v.ok_or_else(|| usage(format!("{} needs --{flag}", a.name)));
    let route = match a.simulate {
        Some(n) => Route::Simulation { n },
        None => Route::Exact,
    };
    let spec = match a.name.parse::<atgraph::identities::IdentityName>()? {
        atgraph::identities::IdentityName::BetaGammaAlgebra => IdentitySpec::BetaGammaAlgebra { a: need(a.a, "a")?, b: need(a.b, "b")? },
        atgraph::identities::IdentityName::BetaProductSplit => {
            IdentitySpec::BetaProductSplit { a: need(a.a, "a")?, b: need(a.b, "b")?, c: need(a.c, "c")? }
        }
        atgraph::identities::IdentityName::PaLimits => IdentitySpec::PaLimits { d: a.d, alpha: need(a.alpha, "alpha")?, r: a.r, which: a.which, route },
        atgraph::identities::IdentityName::CrpLimits => {
            let form = match a.form {
                FormArg::Joint => CrpForm::Joint,
                FormArg::Marginal => CrpForm::Marginal,
                FormArg::Conditional => CrpForm::Conditional,
                _ => return Err(usage("CRP_LIMITS forms: joint, marginal, conditional")),
            };
            IdentitySpec::CrpLimits { alpha: need(a.alpha, "alpha")?, theta: need(a.theta, "theta")?, times: a.times.clone(), form }
        }
        atgraph::identities::IdentityName::YsLimits => {
            let form = match a.form {
                FormArg::Joint => YsForm::Joint,
                FormArg::Marginal => YsForm::Marginal,
                FormArg::GammaMarginal => YsForm::GammaMarginal,
                FormArg::Conditional => YsForm::Conditional,
                FormArg::ConditionalProduct => YsForm::ConditionalProduct,
            };
            IdentitySpec::YsLimits { beta: need(a.beta, "beta")?, times: a.times.clone(), form, route }
        }
        atgraph::identities::IdentityName::UrnImmigration => {
            IdentitySpec::UrnImmigration { w: a.white, b: a.black, beta: need(a.beta, "beta")?, which: a.which, route }
        }
    };
    spec.validate()?;
    Ok(spec)
}

fn identity(a: IdentityArgs) -> anyhow::Result<()> {
    let spec = identity_spec(&a)?;
    let report = run_identity(&spec, a.samples, a.seed)?;
    if a.json {
        print!("{}", to_json(&report)?);
    } else {
        for line in report.summary_lines() {
            println!("{line}");
        }
    }
    if report.passed {
        Ok(())
    } else {
        Err(Failed.into())
    }
}

fn urn(a: UrnArgs) -> anyhow::Result<()> {
    if a.reps == 0 {
        return Err(usage("--reps must be >= 1"));
    }
    let scale = (a.n as f64).powf(-(1.0 - a.beta));
    let mut rows = Vec::with_capacity(a.reps);
    for i in 0..a.reps {
        let d = simulate_immigration_urn_jump(a.white, a.black, a.beta, a.n, &mut stream_at(a.seed, Component::Urn, i as u64))?;
        rows.push((d, d as f64 * scale));
    }
    let text = match a.format {
        Format::Csv => {
            let mut s = String::from("rep,white,scaled\n");
            for (i, (d, x)) in rows.iter().enumerate() {
                writeln!(s, "{i},{d},{x}")?;
            }
            s
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Out {
                white: u64,
                black: u64,
                beta: f64,
                n: u64,
                scaling_exponent: f64,
                mean_scaled: f64,
                counts: Vec<u64>,
            }
            let mean = rows.iter().map(|r| r.1).sum::<f64>() / rows.len() as f64;
            to_json(&Out {
                white: a.white,
                black: a.black,
                beta: a.beta,
                n: a.n,
                scaling_exponent: 1.0 - a.beta,
                mean_scaled: mean,
                counts: rows.iter().map(|r| r.0).collect(),
            })?
        }
        _ => return Err(usage("urn writes csv or json")),
    };
    emit(a.output.as_deref(), &text)
}

fn validate(a: ValidateArgs) -> anyhow::Result<()> {
    let criteria: Vec<u8> = if a.criteria.is_empty() { (1..=NUM_CRITERIA).collect() } else { a.criteria.clone() };
    if let Some(&bad) = criteria.iter().find(|&&c| c == 0 || c > NUM_CRITERIA) {
        return Err(usage(format!("criteria are numbered 1..={NUM_CRITERIA}, got {bad}")));
    }
    let mut rows: Vec<CriterionRow> = Vec::new();
    let mut all_passed = true;
    for c in criteria {
        let outcome = run_criterion(c, a.seed)?;
        println!("{}", outcome.line());
        if a.verbose || !outcome.report.passed {
            for line in outcome.report.summary_lines() {
                println!("    {line}");
            }
        }
        all_passed &= outcome.report.passed;
        rows.push(outcome.row());
    }
    if let Some(p) = &a.json {
        fs::write(p, to_json(&rows)?)?;
    }
    if all_passed {
        Ok(())
    } else {
        Err(Failed.into())
    }
}
