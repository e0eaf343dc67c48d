// Rewrites an arbitrary pure-state strategy in Schmidt form.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use teamq::quantum::{occupation_from_state, occupation_from_table, schmidt_reduce};
use teamq::{ActionAssignment, PureTwoQubitState, QubitBasis};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..5 {
        let psi = PureTwoQubitState::random(&mut rng);
        let bases = [(); 4].map(|_| QubitBasis::random(&mut rng));
        let asg = ActionAssignment::from_index(rng.gen_range(0..ActionAssignment::COUNT));

        let reduced = schmidt_reduce(&psi, &bases, &asg)?;
        let diff = occupation_from_state(&psi, &bases, &asg).max_abs_diff(&occupation_from_table(&reduced));
        println!("alpha {:.6}  assignment {}  |diff| {diff:.1e}", reduced.alpha, reduced.assignment);
        assert!(diff < 1e-10);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("schmidt_reduction");
}
