// Quantum advantage thresholds for the i.i.d. symmetric prior family.

use teamq::optimizer::thresholds;
use teamq::SymPrior;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>6} {:>10} {:>10} {:>10} {:>10}", "lambda", "k/s", "chi_th", "chi^th", "s/k");
    for lambda in [0.55, 0.6, 0.7, 0.8, 0.9, 0.95] {
        let r = thresholds(&SymPrior::from_lambda(lambda)?)?;
        println!(
            "{lambda:>6.2} {:>10.6} {:>10.6} {:>10.6} {:>10.4}",
            r.chi_lower_ns, r.chi_th, r.chi_up_th, r.chi_upper_ns
        );
        assert!((r.chi_th * r.chi_up_th - 1.0).abs() < 1e-12);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("thresholds");
}
