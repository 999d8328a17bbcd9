use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use geofreq::analysis::{analytic_jets, analyze_jets, numeric_jets, Mode, NumericOptions};
use geofreq::config::Config;
use geofreq::hilbert::{analytic_embed, analytic_embed_tapered, geometric_equivalence};
use geofreq::io::{push_float, read_waveform, write_analysis, write_waveform};
use geofreq::park::{derivative_frame_check, dq0_invariants, to_dq0, FRAME_TOL};
use geofreq::validate::{self, Mutation, Suite};
use geofreq::{make_scenario, Error, Jet2, ParkConfig, ScenarioId, SignalModel, Thresholds, TimeSeries};

const EXIT_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(name = "geofreq", version, about = "Geometric frequency analysis of three-phase waveforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a closed-form scenario to a waveform CSV.
    Generate(GenerateArgs),
    /// Compute invariants per sample, from a scenario or a waveform CSV.
    Analyze(AnalyzeArgs),
    /// Run the invariant suites.
    Validate(ValidateArgs),
    /// dq0 transform with the rotating-frame derivative checks.
    Park(ParkArgs),
    /// Analytic-signal embedding of one channel and the equivalence report.
    Hilbert(HilbertArgs),
}

#[derive(Args, Clone, Default)]
struct Sampling {
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long)]
    t1: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
}

#[derive(Args, Clone, Default)]
struct ScenarioArgs {
    /// Scenario id: DC, SINGLE_PHASE, E0..E8, CUSTOM.
    #[arg(long)]
    scenario: Option<String>,
    /// DC level for the DC scenario.
    #[arg(long)]
    vdc: Option<f64>,
    /// Scenario parameter override, `key=value` (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct GenerateArgs {
    /// Scenario id (alternative to --scenario).
    #[arg(value_name = "SCENARIO")]
    id: Option<String>,
    #[command(flatten)]
    scenario: ScenarioArgs,
    #[command(flatten)]
    sampling: Sampling,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone, Default)]
struct Input {
    #[command(flatten)]
    scenario: ScenarioArgs,
    /// Waveform CSV with header `t,va,vb,vc`.
    #[arg(long, conflicts_with = "scenario")]
    csv: Option<PathBuf>,
    #[command(flatten)]
    sampling: Sampling,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Analytic,
    Numeric,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct AnalyzeArgs {
    #[command(flatten)]
    input: Input,
    /// analytic: exact jets from the scenario; numeric: 5-point differences.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// First-order low-pass time constant (s) applied before differentiation.
    #[arg(long)]
    filter_tau: Option<f64>,
    /// Subtract (va+vb+vc)/3 before differentiation.
    #[arg(long)]
    remove_zero_seq: bool,
    #[arg(long)]
    eps_v: Option<f64>,
    #[arg(long)]
    eps_w: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    /// `all` or one of: geometry, frenet_core, threephase_forms, signals,
    /// numdiff, hilbert, park, cli_io.
    #[arg(default_value = "all")]
    scope: String,
    /// Inject a known fault to confirm the suites catch it.
    #[arg(long, hide = true)]
    mutate: Option<String>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct ParkArgs {
    #[command(flatten)]
    input: Input,
    #[arg(long)]
    mode: Option<ModeArg>,
    /// Frame angular speed (rad/s).
    #[arg(long)]
    wdq: Option<f64>,
    /// Frame angle at t = 0 (rad).
    #[arg(long)]
    theta0: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct HilbertArgs {
    #[command(flatten)]
    input: Input,
    /// Channel to embed.
    #[arg(long, default_value = "va")]
    channel: String,
    /// Tukey taper fraction applied before the transform (0 = none).
    #[arg(long, default_value_t = 0.0)]
    taper: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Error plus the exit code it maps to.
struct Failure {
    code: u8,
    msg: String,
    // downstream closed early (e.g. `| head`); not worth reporting
    broken_pipe: bool,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Io(_) | Error::MalformedCsv(_) | Error::DegenerateInput(_) => EXIT_IO,
            Error::UnknownScenario(_)
            | Error::InvalidParameter(_)
            | Error::InvalidRange(_)
            | Error::Config(_) => EXIT_USAGE,
            _ => EXIT_IO,
        };
        let broken_pipe = matches!(&e, Error::Io(io) if io.kind() == io::ErrorKind::BrokenPipe);
        Failure {
            code,
            msg: e.to_string(),
            broken_pipe,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::Io(e).into()
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: msg.into(),
        broken_pipe: false,
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Analyze(a) => analyze(a),
        Command::Validate(a) => run_validate(a),
        Command::Park(a) => park(a),
        Command::Hilbert(a) => hilbert(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) if f.broken_pipe => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("geofreq: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<Config, Failure> {
    match path {
        Some(p) => Ok(Config::load(p)?),
        None => Ok(Config::default()),
    }
}

fn parse_set(items: &[String]) -> Result<BTreeMap<String, f64>, Failure> {
    let mut out = BTreeMap::new();
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| usage(format!("--set expects key=value, got `{item}`")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| usage(format!("--set {k}: `{v}` is not a number")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

/// Scenario id and parameters: config first, then flags.
fn resolve_model(id_flag: Option<&str>, s: &ScenarioArgs, cfg: &Config) -> Result<Option<(ScenarioId, SignalModel)>, Failure> {
    let Some(id) = id_flag.or(s.scenario.as_deref()).or(cfg.scenario.id.as_deref()) else {
        return Ok(None);
    };
    let id: ScenarioId = id.parse()?;
    let mut params = cfg.scenario.params.clone();
    params.extend(parse_set(&s.set)?);
    if let Some(v) = s.vdc {
        params.insert("vdc".into(), v);
    }
    Ok(Some((id, make_scenario(id, &params)?)))
}

struct Range {
    t0: f64,
    t1: f64,
    dt: f64,
}

fn resolve_range(s: &Sampling, cfg: &Config) -> Range {
    Range {
        t0: s.t0.or(cfg.sampling.t0).unwrap_or(0.0),
        t1: s.t1.or(cfg.sampling.t1).unwrap_or(0.1),
        dt: s.dt.or(cfg.sampling.dt).unwrap_or(1e-4),
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_csv(path: &Path) -> Result<TimeSeries, Failure> {
    Ok(read_waveform(BufReader::new(File::open(path)?))?)
}

fn generate(a: GenerateArgs) -> CmdResult {
    let cfg = load_config(a.config.as_deref())?;
    let (_, model) = resolve_model(a.id.as_deref(), &a.scenario, &cfg)?
        .ok_or_else(|| usage("generate needs a scenario id"))?;
    let r = resolve_range(&a.sampling, &cfg);
    let series = model.sample(r.t0, r.t1, r.dt)?;
    write_waveform(open_out(a.out.as_deref())?, &series)?;
    Ok(0)
}

/// Jets for analyze/park: exact from a scenario in analytic mode, otherwise
/// differentiated samples.
fn input_jets(input: &Input, mode: Option<ModeArg>, opts: &NumericOptions, cfg: &Config) -> Result<Vec<Jet2>, Failure> {
    let mode = match mode {
        Some(ModeArg::Analytic) => Mode::Analytic,
        Some(ModeArg::Numeric) => Mode::Numeric,
        None => cfg.analysis.mode.unwrap_or(if input.csv.is_some() {
            Mode::Numeric
        } else {
            Mode::Analytic
        }),
    };
    let model = resolve_model(None, &input.scenario, cfg)?;
    let r = resolve_range(&input.sampling, cfg);
    match (&input.csv, model, mode) {
        (Some(_), _, Mode::Analytic) => Err(usage("analytic mode needs --scenario, not --csv")),
        (Some(path), _, Mode::Numeric) => Ok(numeric_jets(&read_csv(path)?, opts)?),
        (None, Some((_, m)), Mode::Analytic) => {
            if opts.filter_tau.is_some() || opts.remove_zero_seq {
                return Err(usage("--filter-tau and --remove-zero-seq apply to numeric mode only"));
            }
            Ok(analytic_jets(&m, r.t0, r.t1, r.dt)?)
        }
        (None, Some((_, m)), Mode::Numeric) => Ok(numeric_jets(&m.sample(r.t0, r.t1, r.dt)?, opts)?),
        (None, None, _) => Err(usage("need --scenario or --csv")),
    }
}

fn thresholds(eps_v: Option<f64>, eps_w: Option<f64>, cfg: &Config) -> Result<Thresholds, Failure> {
    let d = Thresholds::default();
    let th = Thresholds {
        eps_v: eps_v.or(cfg.analysis.eps_v).unwrap_or(d.eps_v),
        eps_w: eps_w.or(cfg.analysis.eps_w).unwrap_or(d.eps_w),
    };
    if !(th.eps_v >= 0.0 && th.eps_w >= 0.0) {
        return Err(usage("thresholds must be non-negative"));
    }
    Ok(th)
}

fn analyze(a: AnalyzeArgs) -> CmdResult {
    let cfg = load_config(a.input.config.as_deref())?;
    let opts = NumericOptions {
        remove_zero_seq: a.remove_zero_seq || cfg.analysis.remove_zero_seq.unwrap_or(false),
        filter_tau: a.filter_tau.or(cfg.analysis.filter_tau),
    };
    let th = thresholds(a.eps_v, a.eps_w, &cfg)?;
    let jets = input_jets(&a.input, a.mode, &opts, &cfg)?;
    let table = analyze_jets(&jets, &th)?;
    write_analysis(open_out(a.out.as_deref())?, &table.rows, table.degenerate_speed_rows)?;
    Ok(0)
}

fn run_validate(a: ValidateArgs) -> CmdResult {
    let scope = match a.scope.as_str() {
        "all" => None,
        s => Some(s.parse::<Suite>()?),
    };
    let mutation = a.mutate.as_deref().map(str::parse::<Mutation>).transpose()?;
    let report = validate::run(scope, mutation)?;
    println!("{report}");
    Ok(if report.passed() { 0 } else { EXIT_FAILED })
}

fn park(a: ParkArgs) -> CmdResult {
    let cfg = load_config(a.input.config.as_deref())?;
    let pc = ParkConfig::new(
        a.wdq.or(cfg.park.w_dq).unwrap_or(0.0),
        a.theta0.or(cfg.park.theta0).unwrap_or(0.0),
    )?;
    let th = thresholds(None, None, &cfg)?;
    let opts = NumericOptions {
        remove_zero_seq: cfg.analysis.remove_zero_seq.unwrap_or(false),
        filter_tau: cfg.analysis.filter_tau,
    };
    let jets = input_jets(&a.input, a.mode, &opts, &cfg)?;

    let mut out = open_out(a.out.as_deref())?;
    writeln!(
        out,
        "t,vd,vq,vo,dvd,dvq,dvo,rho,w_d,w_q,w_o,delta_omega,sum_dev,term_dev,clarke_dev"
    )?;
    let mut worst_sum: f64 = 0.0;
    let mut skipped = 0usize;
    let mut line = String::new();
    for j in &jets {
        let y = to_dq0(j, &pc);
        let (inv, chk) = match (dq0_invariants(&y, &pc, &th), derivative_frame_check(&y, &pc, &th)) {
            (Ok(i), Ok(c)) => (i, c),
            (Err(Error::DegenerateSpeed { .. }), _) | (_, Err(Error::DegenerateSpeed { .. })) => {
                skipped += 1;
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        };
        worst_sum = worst_sum.max(chk.sum_dev);
        line.clear();
        let fields = [
            y.t,
            y.vdq0.x,
            y.vdq0.y,
            y.vdq0.z,
            y.dvdq0.x,
            y.dvdq0.y,
            y.dvdq0.z,
            inv.rho,
            inv.omega_vec.x,
            inv.omega_vec.y,
            inv.omega_vec.z,
            inv.delta_omega,
            chk.sum_dev,
            chk.term_dev,
            chk.clarke_dev,
        ];
        for (k, x) in fields.into_iter().enumerate() {
            if k > 0 {
                line.push(',');
            }
            push_float(&mut line, x);
        }
        writeln!(out, "{line}")?;
    }
    writeln!(out, "# degenerate_speed_rows={skipped}")?;
    out.flush()?;
    let ok = worst_sum <= FRAME_TOL;
    eprintln!(
        "sum identity v_hat' + r x v = rho v + omega x v: worst {worst_sum:.3e} ({})",
        if ok { "pass" } else { "FAIL" }
    );
    Ok(if ok { 0 } else { EXIT_FAILED })
}

fn hilbert(a: HilbertArgs) -> CmdResult {
    let cfg = load_config(a.input.config.as_deref())?;
    let series = match (&a.input.csv, resolve_model(None, &a.input.scenario, &cfg)?) {
        (Some(p), _) => read_csv(p)?,
        (None, Some((_, m))) => {
            let r = resolve_range(&a.input.sampling, &cfg);
            m.sample(r.t0, r.t1, r.dt)?
        }
        (None, None) => return Err(usage("need --scenario or --csv")),
    };
    let c = series
        .channels()
        .iter()
        .position(|n| *n == a.channel)
        .ok_or_else(|| usage(format!("no channel `{}`", a.channel)))?;
    let u = series.column(c);
    let mut p = if a.taper > 0.0 {
        analytic_embed_tapered(&u, series.dt(), a.taper)?
    } else {
        analytic_embed(&u, series.dt())?
    };
    p.t0 = series.t0();
    let rep = geometric_equivalence(&p)?;

    let mut out = open_out(a.out.as_deref())?;
    writeln!(out, "t,u,uh,phi_dot,w,rho,xi")?;
    let mut line = String::new();
    for k in 0..rep.phi_dot.len() {
        let i = k + rep.first_index;
        line.clear();
        let fields = [series.times()[i], p.u[i], p.uh[i], rep.phi_dot[k], rep.omega_mag[k], rep.rho[k], rep.xi[k]];
        for (n, x) in fields.into_iter().enumerate() {
            if n > 0 {
                line.push(',');
            }
            push_float(&mut line, x);
        }
        writeln!(out, "{line}")?;
    }
    writeln!(out, "# max_omega_dev_mid={:e}", rep.max_omega_dev)?;
    writeln!(out, "# max_abs_xi={:e}", rep.max_abs_xi)?;
    out.flush()?;
    let ok = rep.max_omega_dev <= 1e-9 && rep.max_abs_xi <= 1e-12;
    eprintln!(
        "|omega| vs classical phi' (middle half): {:.3e}; max |xi|: {:.3e} ({})",
        rep.max_omega_dev,
        rep.max_abs_xi,
        if ok { "pass" } else { "FAIL" }
    );
    Ok(if ok { 0 } else { EXIT_FAILED })
}
