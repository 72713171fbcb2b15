mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;
use spincav::fidelity::DEFAULT_GRID_N;
use spincav::*;

use config::Config;
use report::{fmt_c, num, terms_json, terms_text, Format, Report};

const UNITS: &str = "All rates and detunings (g, kappa-s, gamma, detuning-c, detuning-x) are \
dimensionless ratios to the cavity field decay rate kappa. Times for the timing command \
(tau, t-e, t-c, delta-t) are in seconds. Flags override values from --config, a plain \
key = value file keyed by long flag name.";

#[derive(Parser)]
#[command(name = "spincav", version, about = "Spin-cavity photonic CNOT and entanglement swapping simulator", long_about = UNITS)]
struct Cli {
    /// key = value file; command-line flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coupled and uncoupled reflection/transmission amplitudes
    Coeffs {
        #[command(flatten)]
        cavity: CavityArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Scatter one photon basis configuration off the spin-cavity unit
    Scatter {
        #[command(flatten)]
        cavity: CavityArgs,
        #[command(flatten)]
        mode: ModeArgs,
        /// photon polarization, R or L
        #[arg(long)]
        pol: Option<String>,
        /// propagation direction, up or down
        #[arg(long)]
        dir: Option<String>,
        /// spin state, up or down
        #[arg(long)]
        spin: Option<String>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run the CNOT on one product input and report every spin outcome
    Cnot {
        #[command(flatten)]
        cavity: CavityArgs,
        #[command(flatten)]
        mode: ModeArgs,
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        conv: ConvArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run entanglement swapping and report the swap fidelity and outcomes
    Swap {
        #[command(flatten)]
        cavity: CavityArgs,
        #[command(flatten)]
        mode: ModeArgs,
        #[command(flatten)]
        conv: ConvArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// CNOT fidelity averaged over real product inputs
    AvgFidelity {
        #[command(flatten)]
        cavity: CavityArgs,
        #[command(flatten)]
        mode: ModeArgs,
        #[command(flatten)]
        conv: ConvArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Fidelity over a (kappa_s, g) grid, written as CSV or JSON
    Sweep {
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        conv: ConvArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Critical photon number, photon spacing and decoherence factors
    Timing {
        #[command(flatten)]
        timing: TimingArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Args)]
struct CavityArgs {
    /// coupling strength g/kappa
    #[arg(long, allow_hyphen_values = true)]
    g: Option<f64>,
    /// side leakage kappa_s/kappa
    #[arg(long, allow_hyphen_values = true)]
    kappa_s: Option<f64>,
    /// dipole decay rate gamma/kappa [default: 0.1]
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
    /// cavity detuning (omega_c - omega)/kappa [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    detuning_c: Option<f64>,
    /// transition detuning (omega_X - omega)/kappa [default: 0]
    #[arg(long, allow_hyphen_values = true)]
    detuning_x: Option<f64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeKind {
    Ideal,
    Realistic,
}

#[derive(Args)]
struct ModeArgs {
    /// scattering rule [default: realistic]
    #[arg(long, value_enum)]
    mode: Option<ModeKind>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum NormArg {
    Conditioned,
    Raw,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HandlingArg {
    PerOutcome,
    ProbabilityWeighted,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum F2Arg {
    AsPrinted,
    Complement,
}

#[derive(Args)]
struct ConvArgs {
    /// fidelity normalization [default: conditioned]
    #[arg(long, value_enum)]
    normalization: Option<NormArg>,
    /// spin-outcome handling [default: probability-weighted]
    #[arg(long, value_enum)]
    outcome_handling: Option<HandlingArg>,
    /// quadrature points per angle, at least 9 [default: 32]
    #[arg(long)]
    grid_n: Option<usize>,
}

#[derive(Args)]
struct InputArgs {
    /// control amplitude on R, e.g. 0.6 or 0.3+0.4i
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<Complex64>,
    /// control amplitude on L
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<Complex64>,
    /// target amplitude on R
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<Complex64>,
    /// target amplitude on L
    #[arg(long, allow_hyphen_values = true)]
    gamma_amp: Option<Complex64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum QuantityArg {
    CnotUp,
    CnotDown,
    Cnot,
    Swap,
}

/// Inclusive range `lo:hi`; a single number is a one-point range.
#[derive(Clone, Copy, Debug)]
struct Range(f64, f64);

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
        match s.split_once(':') {
            Some((lo, hi)) => Ok(Range(parse(lo)?, parse(hi)?)),
            None => {
                let v = parse(s)?;
                Ok(Range(v, v))
            }
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// swept fidelity
    #[arg(long, value_enum)]
    quantity: Option<QuantityArg>,
    /// kappa_s/kappa range lo:hi [default: 0:2]
    #[arg(long)]
    range_ks: Option<Range>,
    /// g/kappa range lo:hi [default: 0:3]
    #[arg(long)]
    range_g: Option<Range>,
    /// points per axis [default: 101]
    #[arg(long)]
    resolution: Option<usize>,
    /// dipole decay rate gamma/kappa [default: 0.1]
    #[arg(long)]
    gamma: Option<f64>,
    /// worker threads; 1 evaluates serially, 0 uses all cores [default: 0]
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct TimingArgs {
    /// dipole decay rate gamma/kappa [default: 0.1]
    #[arg(long)]
    gamma: Option<f64>,
    /// coupling strength g/kappa
    #[arg(long)]
    g: Option<f64>,
    /// critical photon number; overrides the value derived from gamma and g
    #[arg(long)]
    n0: Option<f64>,
    /// cavity photon lifetime in seconds [default: 9e-12]
    #[arg(long)]
    tau: Option<f64>,
    /// electron spin coherence time in seconds [default: 3e-6]
    #[arg(long)]
    t_e: Option<f64>,
    /// exciton coherence time in seconds [default: 1e-7]
    #[arg(long)]
    t_c: Option<f64>,
    /// photon spacing in seconds [default: tau/n0]
    #[arg(long)]
    delta_t: Option<f64>,
    /// reading of the exciton dephasing factor [default: as-printed]
    #[arg(long, value_enum)]
    f2_convention: Option<F2Arg>,
}

#[derive(Args)]
struct OutArgs {
    /// output format [default: text, csv for sweep]
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// write to this file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let (report, out) = match cli.command {
        Command::Coeffs { cavity, out } => (cmd_coeffs(&cfg, &cavity)?, out),
        Command::Scatter {
            cavity,
            mode,
            pol,
            dir,
            spin,
            out,
        } => (cmd_scatter(&cfg, &cavity, &mode, pol, dir, spin)?, out),
        Command::Cnot {
            cavity,
            mode,
            input,
            conv,
            out,
        } => (cmd_cnot(&cfg, &cavity, &mode, &input, &conv)?, out),
        Command::Swap {
            cavity,
            mode,
            conv,
            out,
        } => (cmd_swap(&cfg, &cavity, &mode, &conv)?, out),
        Command::AvgFidelity {
            cavity,
            mode,
            conv,
            out,
        } => (cmd_avg_fidelity(&cfg, &cavity, &mode, &conv)?, out),
        Command::Sweep { sweep, conv, out } => (cmd_sweep(&cfg, &sweep, &conv)?, out),
        Command::Timing { timing, out } => (cmd_timing(&cfg, &timing)?, out),
    };
    let format = cfg.or_enum(out.format, "format")?;
    let path = cfg.or::<PathBuf>(out.out, "out")?;
    report.emit(format, path.as_deref())
}

fn cavity_params(cfg: &Config, a: &CavityArgs) -> Result<Params> {
    let g = cfg.require(a.g, "g")?;
    let kappa_s = cfg.require(a.kappa_s, "kappa-s")?;
    let gamma = cfg.or(a.gamma, "gamma")?.unwrap_or(0.1);
    let dc = cfg.or(a.detuning_c, "detuning-c")?.unwrap_or(0.0);
    let dx = cfg.or(a.detuning_x, "detuning-x")?.unwrap_or(0.0);
    Ok(CavityParams::new(g, kappa_s, gamma, dc, dx)?)
}

fn scatter_mode(
    cfg: &Config,
    cavity: &CavityArgs,
    mode: &ModeArgs,
) -> Result<(Mode, serde_json::Value)> {
    match cfg
        .or_enum(mode.mode, "mode")?
        .unwrap_or(ModeKind::Realistic)
    {
        ModeKind::Ideal => Ok((ScatterMode::Ideal, json!({ "mode": "ideal" }))),
        ModeKind::Realistic => {
            let p = cavity_params(cfg, cavity)?;
            let m = ScatterMode::from_params(&p)?;
            Ok((m, json!({ "mode": "realistic", "params": params_json(&p) })))
        }
    }
}

fn params_json(p: &Params) -> serde_json::Value {
    json!({
        "g": num(p.g),
        "kappa": num(p.kappa),
        "kappa_s": num(p.kappa_s),
        "gamma": num(p.gamma),
        "detuning_c": num(p.detuning_c),
        "detuning_x": num(p.detuning_x),
    })
}

fn mode_text(meta: &serde_json::Value) -> String {
    match meta.get("params") {
        None => "mode: ideal\n".to_string(),
        Some(p) => format!(
            "mode: realistic (g = {}, kappa_s = {}, gamma = {})\n",
            p["g"], p["kappa_s"], p["gamma"]
        ),
    }
}

fn convention(cfg: &Config, c: &ConvArgs) -> Result<(FidelityConvention, usize)> {
    let normalization = match cfg.or_enum(c.normalization, "normalization")? {
        Some(NormArg::Raw) => Normalization::Raw,
        Some(NormArg::Conditioned) | None => Normalization::Conditioned,
    };
    let outcome_handling = match cfg.or_enum(c.outcome_handling, "outcome-handling")? {
        Some(HandlingArg::PerOutcome) => OutcomeHandling::PerOutcome,
        Some(HandlingArg::ProbabilityWeighted) | None => OutcomeHandling::ProbabilityWeighted,
    };
    let grid_n = cfg.or(c.grid_n, "grid-n")?.unwrap_or(DEFAULT_GRID_N);
    Ok((
        FidelityConvention::new(normalization, outcome_handling),
        grid_n,
    ))
}

fn convention_json(c: &FidelityConvention) -> serde_json::Value {
    serde_json::to_value(c).expect("plain enum fields")
}

fn norm_name(n: Normalization) -> &'static str {
    match n {
        Normalization::Conditioned => "conditioned",
        Normalization::Raw => "raw",
    }
}

fn cmd_coeffs(cfg: &Config, cavity: &CavityArgs) -> Result<Report> {
    let p = cavity_params(cfg, cavity)?;
    let k = scatter_coefficients(&p)?;
    let (e1, e0) = k.identity_residuals();
    let mut text = String::new();
    for (name, z) in [("r", k.r), ("t", k.t), ("r0", k.r0), ("t0", k.t0)] {
        text += &format!("{name:<3}= {:+.12} {:+.12}i\n", z.re, z.im);
    }
    text += &format!("|r - t - 1|   = {e1:.3e}\n|r0 - t0 - 1| = {e0:.3e}\n");
    let c = |z: Complex64| json!({ "re": num(z.re), "im": num(z.im) });
    let value = json!({
        "params": params_json(&p),
        "r": c(k.r), "t": c(k.t), "r0": c(k.r0), "t0": c(k.t0),
        "residual_r_t": num(e1),
        "residual_r0_t0": num(e0),
    });
    Ok(Report::new(text, value))
}

fn parse_choice(value: Option<String>, key: &str, cfg: &Config, choices: &[&str]) -> Result<usize> {
    let v = cfg.require(value, key)?;
    choices
        .iter()
        .position(|c| c.eq_ignore_ascii_case(&v))
        .ok_or_else(|| anyhow!("--{key} must be one of {choices:?}, got `{v}`"))
}

fn cmd_scatter(
    cfg: &Config,
    cavity: &CavityArgs,
    mode: &ModeArgs,
    pol: Option<String>,
    dir: Option<String>,
    spin: Option<String>,
) -> Result<Report> {
    let (m, meta) = scatter_mode(cfg, cavity, mode)?;
    let pol = parse_choice(pol, "pol", cfg, &["R", "L"])?;
    let dir = Direction::from_index(parse_choice(dir, "dir", cfg, &["up", "down"])?);
    let spin = parse_choice(spin, "spin", cfg, &["up", "down"])?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let pick = |i: usize, k: usize| if i == k { one } else { zero };
    let photon = JointState::photon(1, pick(pol, 0), pick(pol, 1))?.attach_path(1, dir)?;
    let input = tensor(&photon, &JointState::spin(pick(spin, 0), pick(spin, 1))?)?;
    let output = spin_cavity_scatter(&input, 1, &m)?;
    let text = format!(
        "{}input:  {}\noutput: {}\n",
        mode_text(&meta),
        terms_text(&input),
        terms_text(&output)
    );
    let value = json!({
        "scatter": meta,
        "input": terms_json(&input),
        "output": terms_json(&output),
        "output_norm_sqr": num(output.norm_sqr()),
    });
    Ok(Report::new(text, value))
}

fn cmd_cnot(
    cfg: &Config,
    cavity: &CavityArgs,
    mode: &ModeArgs,
    input: &InputArgs,
    conv: &ConvArgs,
) -> Result<Report> {
    let (m, meta) = scatter_mode(cfg, cavity, mode)?;
    let (c, _) = convention(cfg, conv)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let alpha = cfg.or(input.alpha, "alpha")?.unwrap_or(one);
    let beta = cfg.or(input.beta, "beta")?.unwrap_or(zero);
    let delta = cfg.or(input.delta, "delta")?.unwrap_or(one);
    let gamma_amp = cfg.or(input.gamma_amp, "gamma-amp")?.unwrap_or(zero);
    let input = CnotInput::new(alpha, beta, delta, gamma_amp)?;
    let reference = ideal_cnot_reference(&input)?;
    let res = run_cnot(&input, &m)?;
    let mut text = mode_text(&meta);
    text += &format!(
        "input: alpha = {}, beta = {}, delta = {}, gamma = {}\n",
        fmt_c(alpha),
        fmt_c(beta),
        fmt_c(delta),
        fmt_c(gamma_amp)
    );
    text += &format!("success probability: {:.10}\n", res.success_probability);
    text += &format!(
        "{:<8}{:>14}{:>14}{:>14}\n",
        "spin", "probability", "F conditioned", "F raw"
    );
    let mut rows = Vec::new();
    let mut weighted = [0.0; 2];
    for o in &res.outcomes {
        let fc = cnot_outcome_fidelity(o, &reference, Normalization::Conditioned)?;
        let fr = cnot_outcome_fidelity(o, &reference, Normalization::Raw)?;
        weighted[0] += o.probability * fc;
        weighted[1] += 0.5 * fr;
        text += &format!(
            "{:<8}{:>14.10}{:>14.10}{:>14.10}\n  corrected: {}\n",
            o.outcome_label,
            o.probability,
            fc,
            fr,
            terms_text(&o.conditioned_state)
        );
        rows.push(json!({
            "spin": o.outcome_label,
            "probability": num(o.probability),
            "fidelity_conditioned": num(fc),
            "fidelity_raw": num(fr),
            "corrected_state": terms_json(&o.conditioned_state),
        }));
    }
    let selected_norm = c.normalization;
    let weighted = match selected_norm {
        Normalization::Conditioned => weighted[0] / res.success_probability,
        Normalization::Raw => weighted[1],
    };
    text += &format!(
        "probability-weighted fidelity ({}): {:.10}\n",
        norm_name(selected_norm),
        weighted
    );
    let value = json!({
        "scatter": meta,
        "convention": convention_json(&c),
        "input": {
            "alpha": fmt_c(alpha), "beta": fmt_c(beta),
            "delta": fmt_c(delta), "gamma_amp": fmt_c(gamma_amp),
        },
        "success_probability": num(res.success_probability),
        "outcomes": rows,
        "weighted_fidelity": num(weighted),
    });
    Ok(Report::new(text, value))
}

fn cmd_swap(cfg: &Config, cavity: &CavityArgs, mode: &ModeArgs, conv: &ConvArgs) -> Result<Report> {
    let (m, meta) = scatter_mode(cfg, cavity, mode)?;
    let (c, _) = convention(cfg, conv)?;
    let res = run_entanglement_swap(&m)?;
    let f = swap_fidelity(&m, c.normalization)?;
    let f_cond = swap_fidelity(&m, Normalization::Conditioned)?;
    let f_raw = swap_fidelity(&m, Normalization::Raw)?;
    let mut text = mode_text(&meta);
    text += &format!(
        "swap fidelity ({}): {:.10}\n",
        norm_name(c.normalization),
        f
    );
    text += &format!("  conditioned: {f_cond:.10}\n  raw:         {f_raw:.10}\n");
    text += &format!("success probability: {:.10}\n", res.success_probability);
    text += &format!(
        "{:<10}{:>14}{:>8}{:>14}\n",
        "outcome", "probability", "bell", "F bell"
    );
    let mut rows = Vec::new();
    for (o, kind) in res.outcomes.iter().zip(SwapOutcome::all()) {
        let bell = kind.bell_state();
        let fb = state_fidelity(
            &o.conditioned_state,
            &bell.state(2, 4)?,
            Normalization::Conditioned,
        )?;
        text += &format!(
            "{:<10}{:>14.10}{:>8}{:>14.10}\n",
            o.outcome_label,
            o.probability,
            bell.name(),
            fb
        );
        rows.push(json!({
            "outcome": o.outcome_label,
            "probability": num(o.probability),
            "bell_state": bell.name(),
            "bell_fidelity": num(fb),
        }));
    }
    let value = json!({
        "scatter": meta,
        "normalization": norm_name(c.normalization),
        "fidelity": num(f),
        "fidelity_conditioned": num(f_cond),
        "fidelity_raw": num(f_raw),
        "success_probability": num(res.success_probability),
        "outcomes": rows,
    });
    Ok(Report::new(text, value))
}

fn cmd_avg_fidelity(
    cfg: &Config,
    cavity: &CavityArgs,
    mode: &ModeArgs,
    conv: &ConvArgs,
) -> Result<Report> {
    let (m, meta) = scatter_mode(cfg, cavity, mode)?;
    let (c, grid_n) = convention(cfg, conv)?;
    let f = average_cnot_fidelity(&m, c.normalization, grid_n)?;
    let selected = f.selected(c.outcome_handling);
    let mut text = mode_text(&meta);
    text += &format!(
        "normalization: {}, grid: {grid_n} x {grid_n}\n",
        norm_name(c.normalization)
    );
    text += &format!(
        "spin up:              {:.10}\nspin down:            {:.10}\nprobability-weighted: {:.10}\n",
        f.up, f.down, f.weighted
    );
    text += &format!("average CNOT fidelity: {selected:.10}\n");
    let value = json!({
        "scatter": meta,
        "convention": convention_json(&c),
        "grid_n": grid_n,
        "up": num(f.up),
        "down": num(f.down),
        "weighted": num(f.weighted),
        "fidelity": num(selected),
    });
    Ok(Report::new(text, value))
}

fn cmd_sweep(cfg: &Config, a: &SweepArgs, conv: &ConvArgs) -> Result<Report> {
    let quantity = match cfg
        .or_enum(a.quantity, "quantity")?
        .ok_or_else(|| anyhow!("missing required value --quantity"))?
    {
        QuantityArg::CnotUp => SweepQuantity::CnotUp,
        QuantityArg::CnotDown => SweepQuantity::CnotDown,
        QuantityArg::Cnot => SweepQuantity::Cnot,
        QuantityArg::Swap => SweepQuantity::Swap,
    };
    let (c, grid_n) = convention(cfg, conv)?;
    let mut spec = SweepSpec::<f64>::default_for(quantity);
    if let Some(Range(lo, hi)) = cfg.or(a.range_ks, "range-ks")? {
        spec.kappa_s_range = (lo, hi);
    }
    if let Some(Range(lo, hi)) = cfg.or(a.range_g, "range-g")? {
        spec.g_range = (lo, hi);
    }
    if let Some(r) = cfg.or(a.resolution, "resolution")? {
        spec.resolution = r;
    }
    if let Some(gamma) = cfg.or(a.gamma, "gamma")? {
        spec.gamma = gamma;
    }
    spec.convention = c;
    spec.grid_n = grid_n;
    let threads = cfg.or(a.threads, "threads")?.unwrap_or(0);
    let table = if threads == 1 {
        sweep(&spec, false)?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .context("starting worker threads")?
            .install(|| sweep(&spec, true))?
    };
    Report::sweep(&table)
}

fn cmd_timing(cfg: &Config, a: &TimingArgs) -> Result<Report> {
    let gamma = cfg.or(a.gamma, "gamma")?.unwrap_or(0.1);
    let g = cfg.or(a.g, "g")?;
    let tau = cfg.or(a.tau, "tau")?.unwrap_or(9e-12);
    let t_e = cfg.or(a.t_e, "t-e")?.unwrap_or(3e-6);
    let t_c = cfg.or(a.t_c, "t-c")?.unwrap_or(1e-7);
    let derived = g.map(|g| critical_photon_number(gamma, g)).transpose()?;
    let n0 = match (cfg.or(a.n0, "n0")?, derived) {
        (Some(n0), _) | (None, Some(n0)) => n0,
        (None, None) => bail!("timing needs --g or --n0"),
    };
    let interval = photon_interval(n0, tau)?;
    let delta_t = cfg.or(a.delta_t, "delta-t")?.unwrap_or(interval);
    let params = TimingParams::new(t_e, delta_t, tau, t_c)?;
    let f2_conv = match cfg.or_enum(a.f2_convention, "f2-convention")? {
        Some(F2Arg::Complement) => F2Convention::Complement,
        Some(F2Arg::AsPrinted) | None => F2Convention::AsPrinted,
    };
    let (f1, f2_printed) = decoherence_factors(&params, F2Convention::AsPrinted);
    let (_, f2_complement) = decoherence_factors(&params, F2Convention::Complement);
    let f2 = match f2_conv {
        F2Convention::AsPrinted => f2_printed,
        F2Convention::Complement => f2_complement,
    };
    let mut text = String::new();
    if let Some(d) = derived {
        text += &format!("n0 = gamma^2 / (2 g^2) = {d:.6e}\n");
    }
    text += &format!("n0 used:             {n0:.6e}\n");
    text += &format!("tau / n0:            {interval:.6e} s\n");
    text += &format!("delta_t:             {delta_t:.6e} s\n");
    text += &format!("F1' = (1 + exp(-delta_t/T_e))/2 = {f1:.10}\n");
    text += &format!("F2' as printed  1 - exp(-tau/T_c) = {f2_printed:.6e}\n");
    text += &format!("F2' complement  exp(-tau/T_c)     = {f2_complement:.10}\n");
    let f2_name = match f2_conv {
        F2Convention::AsPrinted => "as-printed",
        F2Convention::Complement => "complement",
    };
    text += &format!("F2' ({f2_name}): {f2:.10}\n");
    let value = json!({
        "gamma": num(gamma),
        "g": g.map(num),
        "n0_derived": derived.map(num),
        "n0": num(n0),
        "tau": num(tau),
        "t_e": num(t_e),
        "t_c": num(t_c),
        "tau_over_n0": num(interval),
        "delta_t": num(delta_t),
        "f1": num(f1),
        "f2_as_printed": num(f2_printed),
        "f2_complement": num(f2_complement),
        "f2_convention": f2_name,
        "f2": num(f2),
    });
    Ok(Report::new(text, value))
}
