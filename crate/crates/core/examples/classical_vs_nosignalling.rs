// Deterministic policies against the no-signalling vertices for one CAC instance.

use teamq::classical::{classical_optimum, deterministic_costs, DeterministicPolicy};
use teamq::nosignalling::{ns_optimum, ns_vertex_cost, NsVertex};
use teamq::{SymPrior, TeamInstance};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let p = SymPrior::from_lambda(0.8)?;
    let instance = TeamInstance::sym_cac(&p, 2.0)?;

    let costs = deterministic_costs(&instance);
    for (i, c) in costs.iter().enumerate() {
        println!("{:<10} {c:>10.6}", DeterministicPolicy::from_index(i).to_string());
    }
    for v in NsVertex::all() {
        println!("{:<10} {:>10.6}", v.to_string(), ns_vertex_cost(&instance, v));
    }

    let (policy, local) = classical_optimum(&instance);
    let (point, ns) = ns_optimum(&instance);
    println!("classical  {policy} {local:.6}");
    println!("ns         {point:?} {ns:.6}");
    assert!(ns <= local);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("classical_vs_nosignalling");
}
