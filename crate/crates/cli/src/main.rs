mod config;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{BuildConfig, ExperimentConfig, ScanRunConfig, SimulateConfig};
use seqpe_core::circuit::CostSummary;
use seqpe_core::post::RunStats;
use seqpe_core::resources::{reports_csv, scan, DfSpec, ResourceReport, SyntheticSpec};
use seqpe_core::sim::{self, NoiseConfig};
use seqpe_core::verify::{self, VerifyConfig, CHECKS};

#[derive(Parser, Debug)]
#[command(
    name = "seqpe",
    version,
    about = "Split-evolution phase estimation: circuits, simulation and resource scans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build an ethylene phase-estimation circuit and report its gate metrics.
    Build(BuildArgs),
    /// Simulate an ethylene circuit exactly or by shots.
    Simulate(SimulateArgs),
    /// Resource scan over double-factorized models.
    Scan(ScanArgs),
    /// Run the verification checks.
    Verify(VerifyArgs),
}

#[derive(Args, Debug, Default)]
struct ExperimentArgs {
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    tau: Option<f64>,
    /// qpe, cu-qpe, se-qpe, cat-se-qpe, cat-se-qpe-mr, mixed-se-qpe or policy:<c|g...>[+cat][+mr]
    #[arg(long)]
    variant: Option<String>,
    /// mean-field, optimal, eigenstate or an ansatz angle
    #[arg(long)]
    input: Option<String>,
    /// Per-bit block choice, e.g. ccggg
    #[arg(long)]
    policy: Option<String>,
    #[arg(long)]
    cat: bool,
    #[arg(long)]
    mr: bool,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta1: Option<f64>,
    #[arg(long)]
    beta2: Option<f64>,
}

impl ExperimentArgs {
    fn apply(&self, e: &mut ExperimentConfig) {
        set(&mut e.m, self.m);
        set(&mut e.tau, self.tau);
        set(&mut e.variant, self.variant.clone());
        set(&mut e.input, self.input.clone());
        if self.policy.is_some() {
            e.policy = self.policy.clone();
        }
        e.cat |= self.cat;
        e.mr |= self.mr;
        set(&mut e.params.alpha, self.alpha);
        set(&mut e.params.beta1, self.beta1);
        set(&mut e.params.beta2, self.beta2);
    }
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    experiment: ExperimentArgs,
    #[arg(long)]
    t_eps: Option<u64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    experiment: ExperimentArgs,
    #[arg(long)]
    shots: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    p2: Option<f64>,
    #[arg(long)]
    pm: Option<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Double-factorized model JSON; replaces the synthetic sweep.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Comma-separated spin-orbital counts of the synthetic sweep.
    #[arg(long, value_delimiter = ',')]
    ns: Option<Vec<usize>>,
    #[arg(long)]
    l_per_n: Option<usize>,
    /// Fixed factor count for every synthetic model (disables l_per_n).
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    spin_block: bool,
    #[arg(long)]
    order: Option<u32>,
    #[arg(long)]
    no_cat: bool,
    #[arg(long)]
    eps_chem: Option<f64>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print check ids and titles without running them.
    #[arg(long)]
    list: bool,
    /// Run only these checks (repeatable).
    #[arg(long)]
    id: Vec<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    beta2: Option<f64>,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn round6(x: f64) -> f64 {
    (x * 1e6).round() / 1e6
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

#[derive(Serialize)]
struct BuildSummary {
    variant: String,
    m: usize,
    tau: f64,
    input_theta: f64,
    metrics: CostSummary,
}

fn cmd_build(args: BuildArgs) -> Result<()> {
    let mut cfg: BuildConfig = config::load(args.config.as_deref())?;
    args.experiment.apply(&mut cfg.experiment);
    set(&mut cfg.t_eps, args.t_eps.map(Some));
    let variant = cfg.experiment.resolve_variant()?;
    let exp = cfg.experiment.experiment()?;
    let circuit = exp.circuit(&variant)?;
    let summary = BuildSummary {
        variant: variant.to_string(),
        m: exp.m(),
        tau: exp.tau(),
        input_theta: exp.input_theta,
        metrics: CostSummary::of(&circuit, cfg.t_eps.unwrap_or(1)),
    };
    let dir = config::output_dir(args.out_dir.as_deref(), cfg.out_dir.as_deref())?;
    write_file(&dir, "circuit.txt", &circuit.to_text())?;
    let json = to_json(&summary)?;
    write_file(&dir, "metrics.json", &json)?;
    print!("{json}");
    Ok(())
}

#[derive(Serialize)]
struct SimulateSummary {
    variant: String,
    input_theta: f64,
    m: usize,
    tau: f64,
    qubits: usize,
    shots: usize,
    seed: u64,
    p2: f64,
    pm: f64,
    modal: String,
    energy: f64,
    ground_energy: f64,
    resolution_mha: f64,
    modal_share_raw: f64,
    modal_share_filtered: Option<f64>,
    retention: f64,
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let mut cfg: SimulateConfig = config::load(args.config.as_deref())?;
    args.experiment.apply(&mut cfg.experiment);
    set(&mut cfg.shots, args.shots);
    set(&mut cfg.seed, args.seed);
    set(&mut cfg.p2, args.p2);
    set(&mut cfg.pm, args.pm);
    let noise = NoiseConfig {
        p2: cfg.p2,
        pm: cfg.pm,
    };
    noise.validate()?;
    let variant = cfg.experiment.resolve_variant()?;
    let exp = cfg.experiment.experiment()?;
    let circuit = exp.circuit(&variant)?;
    let dir = config::output_dir(args.out_dir.as_deref(), cfg.out_dir.as_deref())?;

    let (dist, stats) = if cfg.shots == 0 {
        if !noise.is_noiseless() {
            bail!("noise needs shots > 0");
        }
        let dist = sim::phase_marginal::<f64>(&circuit)?;
        let stats =
            RunStats::from_distribution(&dist, exp.m(), exp.tau(), Some(exp.energies.ground))?;
        (dist, stats)
    } else {
        let noise = (!noise.is_noiseless()).then_some(noise);
        let records = sim::sample(&circuit, cfg.shots, noise.as_ref(), cfg.seed)?;
        write_file(&dir, "records.csv", &sim::records_csv(&records))?;
        (sim::histogram(&records)?, exp.sampled_stats(&records)?)
    };
    write_file(&dir, "distribution.csv", &sim::distribution_csv(&dist))?;
    let summary = SimulateSummary {
        variant: variant.to_string(),
        input_theta: exp.input_theta,
        m: exp.m(),
        tau: exp.tau(),
        qubits: circuit.n_qubits(),
        shots: cfg.shots,
        seed: cfg.seed,
        p2: cfg.p2,
        pm: cfg.pm,
        modal: stats.modal,
        energy: round6(stats.energy),
        ground_energy: round6(exp.energies.ground),
        resolution_mha: round6(stats.resolution * 1e3),
        modal_share_raw: stats.modal_share_raw,
        modal_share_filtered: stats.modal_share_filtered,
        retention: stats.retention,
    };
    let json = to_json(&summary)?;
    write_file(&dir, "stats.json", &json)?;
    print!("{json}");
    Ok(())
}

fn cmd_scan(args: ScanArgs) -> Result<()> {
    let mut cfg: ScanRunConfig = config::load(args.config.as_deref())?;
    if args.spec.is_some() {
        cfg.spec = args.spec.clone();
    }
    set(&mut cfg.ns, args.ns.clone());
    if args.l.is_some() {
        cfg.l_per_n = None;
        set(&mut cfg.synthetic.l, args.l);
    }
    if args.l_per_n.is_some() {
        cfg.l_per_n = args.l_per_n;
    }
    set(&mut cfg.synthetic.seed, args.seed);
    cfg.synthetic.spin_block |= args.spin_block;
    set(&mut cfg.scan.trotter_order, args.order);
    if args.no_cat {
        cfg.scan.cat = false;
    }
    set(&mut cfg.scan.eps_chem, args.eps_chem);
    cfg.scan.validate()?;

    let reports: Vec<ResourceReport> = match &cfg.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            vec![scan(&DfSpec::from_json(&text)?, &cfg.scan)?]
        }
        None => {
            if cfg.ns.is_empty() {
                bail!("ns is empty");
            }
            cfg.ns
                .iter()
                .map(|&n| {
                    let l = match cfg.l_per_n {
                        Some(0) => bail!("l_per_n must be at least 1"),
                        Some(k) => k * n,
                        None => cfg.synthetic.l,
                    };
                    let spec = SyntheticSpec {
                        n,
                        l,
                        ..cfg.synthetic.clone()
                    }
                    .generate()?;
                    Ok(scan(&spec, &cfg.scan)?)
                })
                .collect::<Result<_>>()?
        }
    };
    let dir = config::output_dir(args.out_dir.as_deref(), cfg.out_dir.as_deref())?;
    let csv = reports_csv(&reports);
    write_file(&dir, "scan.csv", &csv)?;
    write_file(&dir, "scan.json", &to_json(&reports)?)?;
    print!("{csv}");
    Ok(())
}

/// Returns whether every selected check passed.
fn cmd_verify(args: VerifyArgs) -> Result<bool> {
    let mut out = std::io::stdout().lock();
    if args.list {
        for (id, title) in CHECKS {
            writeln!(out, "{id:>2}  {title}")?;
        }
        return Ok(true);
    }
    let mut cfg: VerifyConfig = config::load(args.config.as_deref())?;
    set(&mut cfg.seed, args.seed);
    set(&mut cfg.params.beta2, args.beta2);
    let ids: Vec<u32> = if args.id.is_empty() {
        CHECKS.iter().map(|c| c.0).collect()
    } else {
        args.id.clone()
    };
    for id in &ids {
        if verify::check_title(*id).is_none() {
            bail!("no check with id {id}");
        }
    }
    let mut all = true;
    for id in ids {
        let r = verify::run_check(id, &cfg).unwrap_or_else(|e| verify::CheckResult {
            id,
            title: verify::check_title(id).unwrap_or_default().to_string(),
            passed: false,
            detail: format!("error: {e}"),
        });
        all &= r.passed;
        let status = if r.passed { "PASS" } else { "FAIL" };
        writeln!(out, "{:>2} {status} {}: {}", r.id, r.title, r.detail)?;
        out.flush()?;
    }
    Ok(all)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Build(a) => cmd_build(a).map(|_| true),
        Command::Simulate(a) => cmd_simulate(a).map(|_| true),
        Command::Scan(a) => cmd_scan(a).map(|_| true),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.downcast_ref::<std::io::Error>()
        .is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}
