// Expected cost of a hand-written entangled strategy on a sym-CAC instance.
//
// The strategy measures the maximally entangled state along `φ = π/2`
// rotations; the closed-form occupation table and the projector trace
// give the same measure.

use std::f64::consts::PI;

use teamq::quantum::{occupation_from_table, occupation_from_trace};
use teamq::{ActionAssignment, QubitStrategy, SymPrior, TeamInstance};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let p = SymPrior::from_lambda(0.8)?;
    let instance = TeamInstance::sym_cac(&p, 2.0)?;
    let strategy = QubitStrategy::new(
        PI / 2.0,
        [0.0, PI, 0.0, 0.0],
        [0.0, PI / 2.0, PI / 4.0, PI / 4.0],
        ActionAssignment::optimal(),
    )?;

    let q = occupation_from_table(&strategy);
    let drift = q.max_abs_diff(&occupation_from_trace(&strategy));
    println!("{q}");
    println!("cost            {:.9}", instance.expected_cost(&q));
    println!("table vs trace  {drift:.1e}");
    println!("no-signalling   {:.1e}", q.no_signalling_residual());
    assert!(drift < 1e-12);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("evaluate_strategy");
}
