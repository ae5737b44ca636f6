//! Batch front end: reproducible experiment grids over the library, emitted
//! as CSV or JSON with the resolved configuration echoed in every header.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use config::{ExperimentConfig, OutputFormat};

#[derive(Parser)]
#[command(
    name = "expcluster",
    version,
    about = "Coefficient tables, tilt equations, cluster-size laws, and \
             coagulation-fragmentation simulation for exponential structures"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit a (window-restricted) coefficient table
    Coeffs(CommonOpts),
    /// Solve the tilt equation on an n grid and emit its exact moments
    Saddle(CommonOpts),
    /// Exact solver vs closed-form asymptotics for sigma, B^2, ln c
    Compare(CommonOpts),
    /// Largest/smallest-component window densities vs their limit laws
    ClusterLaw(CommonOpts),
    /// Component-count marginals and joints vs the factorised limits
    Kp(CommonOpts),
    /// Gillespie trace of the reversible chain, with a TV report
    Simulate(CommonOpts),
    /// Geometric-generator pipeline vs the counting asymptotic
    AnsVerify(CommonOpts),
    /// Coefficient recurrence vs brute-force partition enumeration
    OracleCheck(CommonOpts),
}

#[derive(Args)]
struct CommonOpts {
    /// TOML experiment file; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Regular-variation exponent of the weight sequence
    #[arg(long)]
    l: Option<f64>,
    /// Slowly varying kind: constant | log-power
    #[arg(long = "L-kind")]
    l_kind: Option<String>,
    /// Slowly varying prefactor h
    #[arg(long = "L-h")]
    l_h: Option<f64>,
    /// Slowly varying log exponent p
    #[arg(long = "L-p")]
    l_p: Option<f64>,
    /// Geometric rescale factor applied as h^j
    #[arg(long = "h-scale")]
    h_scale: Option<f64>,
    /// Total-mass grid (comma separated)
    #[arg(long, value_delimiter = ',')]
    n: Option<Vec<u64>>,
    /// Window exponent grid (comma separated)
    #[arg(long, value_delimiter = ',')]
    beta: Option<Vec<f64>>,
    /// Fixed smallest-component cuts (comma separated)
    #[arg(long, value_delimiter = ',')]
    r: Option<Vec<u64>>,
    /// Component sizes for count distributions (comma separated)
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<u64>>,
    /// Largest count per size in `kp`
    #[arg(long = "k-max")]
    k_max: Option<u64>,
    /// Component-size window lo:hi (hi may be "n")
    #[arg(long)]
    window: Option<String>,
    /// Generator prefactor for ans-verify (p_j ~ h q^j)
    #[arg(long)]
    h: Option<f64>,
    /// Generator base for ans-verify
    #[arg(long)]
    q: Option<f64>,
    /// Base RNG seed
    #[arg(long)]
    seed: Option<u64>,
    /// Gillespie flips per replica
    #[arg(long)]
    steps: Option<u64>,
    /// Independent replicas (seeds seed..seed+replicas-1)
    #[arg(long)]
    replicas: Option<u64>,
    /// Burn-in fraction of flips discarded from statistics
    #[arg(long = "burn-in")]
    burn_in: Option<f64>,
    /// Emit a full occupancy snapshot every this many events
    #[arg(long = "snapshot-every")]
    snapshot_every: Option<u64>,
    /// Tolerance used by --assert checks
    #[arg(long)]
    tol: Option<f64>,
    /// Exit nonzero if any tolerance check fails
    #[arg(long = "assert")]
    assert_mode: bool,
    /// Compute the quadratic-cost local-limit column (saddle)
    #[arg(long)]
    llt: bool,
    /// Carry exact rationals alongside the table (coeffs)
    #[arg(long)]
    exact: bool,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv | json
    #[arg(long)]
    format: Option<String>,
}

fn resolve(opts: &CommonOpts, command: &str) -> Result<ExperimentConfig> {
    let mut cfg = match &opts.config {
        Some(path) => ExperimentConfig::from_toml_file(path)?,
        None => ExperimentConfig::default(),
    };
    cfg.command = command.to_string();
    if let Some(v) = opts.l {
        cfg.pf.l = v;
    }
    if let Some(v) = &opts.l_kind {
        cfg.pf.sv.kind = v.clone();
    }
    if let Some(v) = opts.l_h {
        cfg.pf.sv.h = v;
    }
    if let Some(v) = opts.l_p {
        cfg.pf.sv.p = v;
    }
    if let Some(v) = opts.h_scale {
        cfg.pf.h_scale = v;
    }
    if let Some(v) = &opts.n {
        cfg.n = v.clone();
    }
    if let Some(v) = &opts.beta {
        cfg.beta = v.clone();
    }
    if let Some(v) = &opts.r {
        cfg.r = v.clone();
    }
    if let Some(v) = &opts.p {
        cfg.p = v.clone();
    }
    if let Some(v) = opts.k_max {
        cfg.k_max = v;
    }
    if let Some(v) = &opts.window {
        cfg.window = Some(v.clone());
    }
    if let Some(v) = opts.h {
        cfg.h = v;
    }
    if let Some(v) = opts.q {
        cfg.q = v;
    }
    if let Some(v) = opts.seed {
        cfg.seed = v;
    }
    if let Some(v) = opts.steps {
        cfg.steps = v;
    }
    if let Some(v) = opts.replicas {
        cfg.replicas = v;
    }
    if let Some(v) = opts.burn_in {
        cfg.burn_in = v;
    }
    if let Some(v) = opts.snapshot_every {
        cfg.snapshot_every = v;
    }
    if let Some(v) = opts.tol {
        cfg.tol = v;
    }
    if opts.assert_mode {
        cfg.assert_mode = true;
    }
    if opts.llt {
        cfg.llt = true;
    }
    if opts.exact {
        cfg.exact = true;
    }
    if let Some(v) = &opts.out {
        cfg.out = Some(v.clone());
    }
    if let Some(v) = &opts.format {
        cfg.format = match v.as_str() {
            "csv" => OutputFormat::Csv,
            "json" => OutputFormat::Json,
            other => anyhow::bail!("unknown format {other:?} (csv | json)"),
        };
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let (cfg, outcome) = match &cli.cmd {
        Cmd::Coeffs(o) => {
            let cfg = resolve(o, "coeffs")?;
            let out = commands::coeffs(&cfg)?;
            (cfg, out)
        }
        Cmd::Saddle(o) => {
            let cfg = resolve(o, "saddle")?;
            let out = commands::saddle(&cfg)?;
            (cfg, out)
        }
        Cmd::Compare(o) => {
            let cfg = resolve(o, "compare")?;
            let out = commands::compare(&cfg)?;
            (cfg, out)
        }
        Cmd::ClusterLaw(o) => {
            let cfg = resolve(o, "cluster-law")?;
            let out = commands::cluster_law(&cfg)?;
            (cfg, out)
        }
        Cmd::Kp(o) => {
            let cfg = resolve(o, "kp")?;
            let out = commands::kp(&cfg)?;
            (cfg, out)
        }
        Cmd::Simulate(o) => {
            // writes its own (possibly very large) trace stream
            let cfg = resolve(o, "simulate")?;
            let breaches = commands::simulate(&cfg)?;
            return finish(&cfg, breaches);
        }
        Cmd::AnsVerify(o) => {
            let cfg = resolve(o, "ans-verify")?;
            let out = commands::ans_verify(&cfg)?;
            (cfg, out)
        }
        Cmd::OracleCheck(o) => {
            let cfg = resolve(o, "oracle-check")?;
            let out = commands::oracle_check(&cfg)?;
            (cfg, out)
        }
    };
    output::write_doc(&cfg, &outcome.doc, cfg.out.as_deref())?;
    finish(&cfg, outcome.breaches)
}

fn finish(cfg: &ExperimentConfig, breaches: Vec<String>) -> Result<ExitCode> {
    if !breaches.is_empty() {
        for b in &breaches {
            eprintln!("check failed: {b}");
        }
        if cfg.assert_mode {
            return Ok(ExitCode::from(1));
        }
    }
    Ok(ExitCode::SUCCESS)
}
