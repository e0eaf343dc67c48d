// Stationary points of the sym-CAC objective and the vertex minima at both thresholds.

use teamq::optimizer::{stationarity_check, thresholds, vertex_minimum_check, StationaryPoint, ThresholdSide};
use teamq::SymPrior;

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let p = SymPrior::from_lambda(0.8)?;
    for (point, chi) in [
        (StationaryPoint::PiZeroZero, 0.9),
        (StationaryPoint::ZeroPiPi, 3.0),
        (StationaryPoint::Origin, 0.3),
    ] {
        let r = stationarity_check(&p, chi, point);
        println!("{point:?} at chi {chi}: delta {:.1e} |grad| {:.1e} passed {}", r.delta, r.grad_norm, r.passed);
    }

    let t = thresholds(&p)?;
    for side in [ThresholdSide::AtChiTh, ThresholdSide::AtChiUpTh] {
        let r = vertex_minimum_check(&p, side, 32)?;
        println!(
            "{side:?} (chi {:.6}): grid min {:.9} at {:?}, vertex {:?}",
            r.chi, r.grid_min, r.grid_argmin, r.vertex
        );
        assert!(r.passed);
    }
    println!("interval ({:.6}, {:.6})", t.chi_th, t.chi_up_th);
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("threshold_structure");
}
