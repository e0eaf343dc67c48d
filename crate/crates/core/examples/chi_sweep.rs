// Log-spaced χ sweep written as CSV to stdout.

use teamq::optimizer::OptimizerConfig;
use teamq::sweep::{run_sweep, write_csv, SweepScale, SweepSpec};
use teamq::{SymPrior, TeamInstance};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let instance = TeamInstance::sym_cac(&SymPrior::from_lambda(0.8)?, 1.0)?;
    let spec = SweepSpec {
        chi_from: 0.05,
        chi_to: 20.0,
        steps: 24,
        scale: SweepScale::Log,
    };
    let rows = run_sweep(&instance, &spec, &OptimizerConfig::default())?;
    write_csv(&rows, std::io::stdout().lock())?;
    let advantaged = rows.iter().filter(|r| r.quantum_advantage).count();
    eprintln!("{advantaged}/{} points with a quantum advantage", rows.len());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("chi_sweep");
}
