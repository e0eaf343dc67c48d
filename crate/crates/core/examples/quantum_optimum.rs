// Restricted and full quantum searches on the same sym-CAC instance.

use std::time::Instant;

use teamq::classical::sym_classical_optimum;
use teamq::optimizer::{full_quantum_optimum_over, sym_quantum_optimum, OptimizerConfig};
use teamq::schema::strategy_to_json;
use teamq::{ActionAssignment, SymPrior, TeamInstance};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let p = SymPrior::from_lambda(0.8)?;
    let chi = 2.0;
    let cfg = OptimizerConfig::default();
    let instance = TeamInstance::sym_cac(&p, chi)?;

    let t = Instant::now();
    let restricted = sym_quantum_optimum(&p, chi, &cfg)?;
    println!("restricted {:.12} ({:?}, {:.2?})", restricted.cost, restricted.branch, t.elapsed());

    // a slice of the 256 assignments keeps the example quick
    let subset: Vec<_> = ActionAssignment::all().step_by(32).chain([ActionAssignment::optimal()]).collect();
    let t = Instant::now();
    let full = full_quantum_optimum_over(&instance, &subset, &cfg)?;
    println!("full       {:.12} ({:.2?})", full.cost, t.elapsed());
    println!("classical  {:.12}", sym_classical_optimum(&p, chi));
    println!("{}", strategy_to_json(&full.strategy));
    assert!((restricted.cost - full.cost).abs() < 1e-6);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("quantum_optimum");
}
