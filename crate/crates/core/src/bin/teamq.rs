use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use teamq::classical::{classical_optimum, deterministic_costs, DeterministicPolicy};
use teamq::nosignalling::{ns_bounds, ns_optimum, ns_vertex_cost, NsVertex};
use teamq::optimizer::{full_quantum_optimum, sym_quantum_optimum, thresholds, OptimizerConfig};
use teamq::quantum::occupation_from_table;
use teamq::schema::{load_instance, load_strategy, strategy_to_json};
use teamq::sweep::{run_sweep, write_csv, SweepScale, SweepSpec};
use teamq::verify::{corrupted_table, run_verification, VerifyLevel, VerifyOptions};
use teamq::{Error, SymPrior, TeamInstance};

#[derive(Parser)]
#[command(name = "teamq", version, about = "Classical, no-signalling and quantum optima for binary team problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expected cost, occupation table and no-signalling residuals of a qubit strategy
    Evaluate { instance: PathBuf, strategy: PathBuf },
    /// Best deterministic policy
    Classical {
        instance: PathBuf,
        /// Print all 16 policy costs
        #[arg(long)]
        all: bool,
    },
    /// No-signalling optimum and advantage interval
    Nosignalling { instance: PathBuf },
    /// Optimal entangled-qubit strategy
    Quantum {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Restricted)]
        mode: Mode,
        #[command(flatten)]
        opt: OptFlags,
        /// Print the optimal strategy as a strategy file
        #[arg(long)]
        json: bool,
    },
    /// Quantum advantage thresholds of a symmetric prior
    Thresholds {
        instance: Option<PathBuf>,
        #[arg(long, conflicts_with = "instance")]
        lambda: Option<f64>,
        #[arg(long)]
        json: bool,
    },
    /// Classical, no-signalling and quantum optima over a range of chi
    Sweep {
        instance: Option<PathBuf>,
        #[arg(long, conflicts_with = "instance")]
        lambda: Option<f64>,
        #[arg(long)]
        chi_from: f64,
        #[arg(long)]
        chi_to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Scale::Log)]
        scale: Scale,
        /// Output CSV path (stdout if omitted)
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        opt: OptFlags,
    },
    /// Run the cross-check suite
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Fast)]
        level: Level,
        #[arg(long, hide = true)]
        inject_fault: Option<Fault>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Restricted,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scale {
    Lin,
    Log,
}

#[derive(Clone, Copy, ValueEnum)]
enum Level {
    Fast,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fault {
    TableConstant,
}

#[derive(Args)]
struct OptFlags {
    /// Grid points per angle for seeding
    #[arg(long)]
    grid: Option<usize>,
    /// Random starts per search
    #[arg(long)]
    starts: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

impl OptFlags {
    fn config(&self) -> OptimizerConfig {
        let d = OptimizerConfig::default();
        OptimizerConfig {
            grid_points_per_angle: self.grid.unwrap_or(d.grid_points_per_angle),
            multistart_count: self.starts.unwrap_or(d.multistart_count),
            refine_tolerance: self.tol.unwrap_or(d.refine_tolerance),
            max_refine_iterations: self.max_iter.unwrap_or(d.max_refine_iterations),
            seed: self.seed.unwrap_or(d.seed),
        }
    }
}

enum Failure {
    Lib { context: Option<String>, error: Error },
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Failure::Lib { context: None, error }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::Io(e).into()
    }
}

fn in_file<T>(path: &Path, r: teamq::Result<T>) -> Result<T, Failure> {
    r.map_err(|error| Failure::Lib {
        context: Some(path.display().to_string()),
        error,
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnsupportedInstance { .. } => 3,
        Error::Io(_) => 4,
        Error::Csv(c) if c.is_io_error() => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib { context, error }) => {
            match context {
                Some(c) => eprintln!("error: {c}: {error}"),
                None => eprintln!("error: {error}"),
            }
            ExitCode::from(exit_code(&error))
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => ExitCode::from(1),
    }
}

fn instance_or_lambda(instance: Option<&Path>, lambda: Option<f64>) -> Result<TeamInstance, Failure> {
    match (instance, lambda) {
        (Some(path), _) => in_file(path, load_instance(path)),
        (None, Some(l)) => Ok(TeamInstance::sym_cac(&SymPrior::from_lambda(l)?, 1.0)?),
        (None, None) => Err(Failure::Usage("pass an instance file or --lambda".into())),
    }
}

fn not_sym(instance: &TeamInstance) -> Failure {
    let hint = match ns_bounds(instance) {
        Ok(b) => format!("; the no-signalling bounds ({:.6}, {:.6}) still apply", b.lo, b.hi),
        Err(_) => String::new(),
    };
    Error::UnsupportedInstance {
        required: "a sym-CAC instance (symmetric prior with s > k)",
        found: format!("{} with a non-symmetric prior{hint}", instance.class()),
    }
    .into()
}

fn run(command: Command) -> Result<(), Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match command {
        Command::Evaluate { instance, strategy } => {
            let inst = in_file(&instance, load_instance(&instance))?;
            let s = in_file(&strategy, load_strategy(&strategy))?;
            let q = occupation_from_table(&s);
            let (ra, rb) = q.no_signalling_residuals();
            writeln!(out, "class      {}", inst.class())?;
            writeln!(out, "chi        {}", inst.chi())?;
            writeln!(out, "cost       {:.12}", inst.expected_cost(&q))?;
            writeln!(out, "ns residual A {ra:.3e}  B {rb:.3e}")?;
            writeln!(out)?;
            write!(out, "{q}")?;
        }
        Command::Classical { instance, all } => {
            let inst = in_file(&instance, load_instance(&instance))?;
            let (best, cost) = classical_optimum(&inst);
            writeln!(out, "policy {best}")?;
            writeln!(out, "cost   {cost:.12}")?;
            if all {
                writeln!(out)?;
                for (i, c) in deterministic_costs(&inst).iter().enumerate() {
                    writeln!(out, "{}  {c:.12}", DeterministicPolicy::from_index(i))?;
                }
            }
        }
        Command::Nosignalling { instance } => {
            let inst = in_file(&instance, load_instance(&instance))?;
            let (point, cost) = ns_optimum(&inst);
            let (_, local) = classical_optimum(&inst);
            writeln!(out, "vertex    {point}")?;
            writeln!(out, "cost      {cost:.12}")?;
            writeln!(out, "classical {local:.12}")?;
            writeln!(out, "gap       {:.3e}", cost - local)?;
            for v in NsVertex::all() {
                writeln!(out, "  {v}  {:.12}", ns_vertex_cost(&inst, v))?;
            }
            match ns_bounds(&inst) {
                Ok(b) => writeln!(out, "interval  ({:.6}, {:.6})  [{:?}]", b.lo, b.hi, b.family)?,
                Err(Error::UnsupportedInstance { .. }) => writeln!(out, "interval  none for {}", inst.class())?,
                Err(e) => return Err(e.into()),
            }
        }
        Command::Quantum { instance, mode, opt, json } => {
            let inst = in_file(&instance, load_instance(&instance))?;
            let cfg = opt.config();
            let (strategy, cost) = match mode {
                Mode::Restricted => {
                    let p = inst.sym_prior().ok_or_else(|| not_sym(&inst))?;
                    let r = sym_quantum_optimum(&p, inst.chi(), &cfg)?;
                    (r.strategy, r.cost)
                }
                Mode::Full => {
                    let r = full_quantum_optimum(&inst, &cfg)?;
                    (r.strategy, r.cost)
                }
            };
            if json {
                writeln!(out, "{}", strategy_to_json(&strategy))?;
            } else {
                let (_, local) = classical_optimum(&inst);
                writeln!(out, "cost       {cost:.12}")?;
                writeln!(out, "classical  {local:.12}")?;
                writeln!(out, "gap        {:.3e}", cost - local)?;
                writeln!(out, "alpha      {:.9}", strategy.alpha)?;
                writeln!(out, "theta      {:.9?}", strategy.theta)?;
                writeln!(out, "phi        {:.9?}", strategy.phi)?;
                writeln!(out, "assignment {}", strategy.assignment)?;
            }
        }
        Command::Thresholds { instance, lambda, json } => {
            let inst = instance_or_lambda(instance.as_deref(), lambda)?;
            // thresholds depend only on the prior, so any CAC orbit member qualifies
            let p = match inst.prior().as_sym() {
                Some(p) if inst.class().is_cac_orbit() => p,
                _ => return Err(not_sym(&inst)),
            };
            let r = thresholds(&p)?;
            if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&r).map_err(Error::from)?)?;
            } else {
                writeln!(out, "chi_lower_ns {:.6}", r.chi_lower_ns)?;
                writeln!(out, "chi_upper_ns {:.6}", r.chi_upper_ns)?;
                writeln!(out, "chi_th       {:.6}", r.chi_th)?;
                writeln!(out, "chi_up_th    {:.6}", r.chi_up_th)?;
                writeln!(out, "A            {:.6}", r.a)?;
            }
        }
        Command::Sweep {
            instance,
            lambda,
            chi_from,
            chi_to,
            steps,
            scale,
            out: path,
            opt,
        } => {
            let inst = instance_or_lambda(instance.as_deref(), lambda)?;
            let spec = SweepSpec {
                chi_from,
                chi_to,
                steps,
                scale: match scale {
                    Scale::Lin => SweepScale::Lin,
                    Scale::Log => SweepScale::Log,
                },
            };
            spec.validate()?;
            let cfg = opt.config();
            cfg.validate()?;
            match path {
                Some(path) => {
                    let file = File::create(&path).map_err(|e| Failure::Lib {
                        context: Some(path.display().to_string()),
                        error: e.into(),
                    })?;
                    let rows = run_sweep(&inst, &spec, &cfg)?;
                    in_file(&path, write_csv(&rows, BufWriter::new(file)))?;
                }
                None => write_csv(&run_sweep(&inst, &spec, &cfg)?, &mut out)?,
            }
        }
        Command::Verify { level, inject_fault } => {
            let mut opts = VerifyOptions {
                level: match level {
                    Level::Fast => VerifyLevel::Fast,
                    Level::Full => VerifyLevel::Full,
                },
                ..VerifyOptions::default()
            };
            if let Some(Fault::TableConstant) = inject_fault {
                opts.table = corrupted_table;
            }
            let report = run_verification(&opts);
            for c in &report.checks {
                let status = if c.passed { "ok  " } else { "FAIL" };
                writeln!(
                    out,
                    "{status} {:<28} residual {:<10.3e} {:>7.2}s  {}",
                    c.name, c.residual, c.seconds, c.detail
                )?;
            }
            if !report.all_passed() {
                let names: Vec<_> = report.failures().map(|c| c.name).collect();
                eprintln!("verification failed: {}", names.join(", "));
                return Err(Failure::Verification);
            }
        }
    }
    Ok(())
}
