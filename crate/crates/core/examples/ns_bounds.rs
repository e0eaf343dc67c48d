// χ-intervals outside which no no-signalling correlation beats the local optimum.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use teamq::classical::classical_optimum;
use teamq::nosignalling::{ns_bounds, ns_optimum, orbit_transform, OrbitOp};
use teamq::{Prior, TeamInstance};

pub fn run() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let prior = Prior::random(&mut rng);

    let cac = TeamInstance::cac(prior, 1.0)?;
    let half = TeamInstance::half_cac(prior, 1.0)?;
    let exchanged = orbit_transform(&half, OrbitOp::E);
    for inst in [&cac, &half, &exchanged] {
        let b = ns_bounds(inst)?;
        println!("{:<12} [{:.6}, {:.6}] {:?}", inst.class().to_string(), b.lo, b.hi, b.family);
        // just outside the interval the NS optimum collapses to the local one
        for chi in [b.lo * 0.99, b.hi * 1.01] {
            if !chi.is_finite() {
                continue;
            }
            let probe = inst.with_chi(chi)?;
            let gap = ns_optimum(&probe).1 - classical_optimum(&probe).1;
            println!("  chi {chi:>10.6}  ns - local {gap:+.1e}");
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    run().expect("ns_bounds");
}
