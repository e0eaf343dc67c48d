//! Brute-force reference implementations shared by the integration tests.
//!
//! None of these call into the closed forms they are compared against.

#![allow(dead_code)]

use num_complex::Complex64;
use teamq::{OccupationMeasure, Prior, QubitStrategy};

pub type Mat = [[u8; 2]; 2];

pub const CAC: (Mat, Mat) = ([[1, 0], [0, 1]], [[0, 1], [1, 0]]);
pub const HALF_CAC: (Mat, Mat) = ([[1, 0], [0, 0]], [[0, 1], [1, 0]]);

/// `Σ P(ξ) Q(u|ξ_A,ξ_B) ℓ(u, ξ_W)` with `ℓ(·,0) = −M`, `ℓ(·,1) = −χN`.
pub fn cost(m: &Mat, n: &Mat, prior: &Prior, chi: f64, q: impl Fn(usize, usize, usize, usize) -> f64) -> f64 {
    let mut j = 0.0;
    for xa in 0..2 {
        for xb in 0..2 {
            for xw in 0..2 {
                let p = prior.get(xa, xb, xw);
                for ua in 0..2 {
                    for ub in 0..2 {
                        let loss = if xw == 0 {
                            -f64::from(m[ua][ub])
                        } else {
                            -chi * f64::from(n[ua][ub])
                        };
                        j += p * q(ua, ub, xa, xb) * loss;
                    }
                }
            }
        }
    }
    j
}

/// Minimum over the 16 maps `ξ_A ↦ u_A`, `ξ_B ↦ u_B`.
pub fn local_min(m: &Mat, n: &Mat, prior: &Prior, chi: f64) -> f64 {
    let mut best = f64::INFINITY;
    for fa in 0..4usize {
        for fb in 0..4usize {
            let act = |f: usize, x: usize| (f >> x) & 1;
            let j = cost(m, n, prior, chi, |ua, ub, xa, xb| {
                f64::from(u8::from(act(fa, xa) == ua && act(fb, xb) == ub))
            });
            best = best.min(j);
        }
    }
    best
}

/// Minimum over the local vertices and the eight PR-type boxes.
pub fn ns_min(m: &Mat, n: &Mat, prior: &Prior, chi: f64) -> f64 {
    let mut best = local_min(m, n, prior, chi);
    for v in 0..8usize {
        let (a, b, d) = (v >> 2 & 1, v >> 1 & 1, v & 1);
        let j = cost(m, n, prior, chi, |ua, ub, xa, xb| {
            let g = (xa & xb) ^ (a & xa) ^ (b & xb) ^ d;
            if ua ^ ub == g {
                0.5
            } else {
                0.0
            }
        });
        best = best.min(j);
    }
    best
}

/// Outcome probabilities of `cos(α/2)|00⟩ + sin(α/2)|11⟩` summed over amplitudes.
pub fn amplitude_occupation(s: &QubitStrategy) -> OccupationMeasure {
    let (sa, ca) = (s.alpha / 2.0).sin_cos();
    let state = [ca, 0.0, 0.0, sa];
    let vector = |theta: f64, phi: f64, minus: bool| -> [Complex64; 2] {
        let (sp, cp) = (phi / 2.0).sin_cos();
        let e = Complex64::from_polar(1.0, theta);
        if minus {
            [Complex64::new(-sp, 0.0), e * cp]
        } else {
            [Complex64::new(cp, 0.0), e * sp]
        }
    };
    let actions = s.assignment.values();
    let mut q = OccupationMeasure::zeros();
    for xa in 0..2 {
        for xb in 0..2 {
            for oa in 0..2 {
                for ob in 0..2 {
                    let va = vector(s.theta[xa], s.phi[xa], oa == 1);
                    let vb = vector(s.theta[2 + xb], s.phi[2 + xb], ob == 1);
                    let mut amp = Complex64::new(0.0, 0.0);
                    for i in 0..2 {
                        for j in 0..2 {
                            amp += (va[i] * vb[j]).conj() * state[2 * i + j];
                        }
                    }
                    let ua = usize::from(actions[2 * xa + oa]);
                    let ub = usize::from(actions[4 + 2 * xb + ob]);
                    q.set(ua, ub, xa, xb, q.get(ua, ub, xa, xb) + amp.norm_sqr());
                }
            }
        }
    }
    q
}

/// Piecewise-linear classical optimum of the symmetric family, from the six cost groups.
pub fn sym_local_by_groups(s: f64, k: f64, t: f64, chi: f64) -> f64 {
    [
        -(s + k + 2.0 * t),
        -chi * (s + k + 2.0 * t),
        -(s + k) - 2.0 * chi * t,
        -chi * (s + k) - 2.0 * t,
        -(1.0 + chi) * (s + t),
        -(1.0 + chi) * (k + t),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min)
}

/// `(χ_th, χ^th)` from the quadratic `χ² − 2Aχ + 1 = 0`.
pub fn threshold_roots(s: f64, k: f64, t: f64) -> (f64, f64) {
    let a = (s * s + k * k + (k + s) * t) / (2.0 * k * s + (k + s) * t);
    let disc = (a * a - 1.0).sqrt();
    (a - disc, a + disc)
}

/// Parity of the `(α, β, δ)` PR box.
fn parity(v: usize, xa: usize, xb: usize) -> f64 {
    let (a, b, d) = (v >> 2 & 1, v >> 1 & 1, v & 1);
    ((xa & xb) ^ (a & xa) ^ (b & xb) ^ d) as f64
}

/// `(χ̲, χ̄)` for CAC by scanning the eight boxes.
pub fn cac_interval(prior: &Prior) -> (f64, f64) {
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for v in 0..8 {
        let (mut p0g, mut p1g, mut p0n, mut p1n) = (0.0, 0.0, 0.0, 0.0);
        for xa in 0..2 {
            for xb in 0..2 {
                let g = parity(v, xa, xb);
                p0g += prior.get(xa, xb, 0) * g;
                p1g += prior.get(xa, xb, 1) * g;
                p0n += prior.get(xa, xb, 0) * (1.0 - g);
                p1n += prior.get(xa, xb, 1) * (1.0 - g);
            }
        }
        if p1g > 0.0 {
            lo = lo.min(p0g / p1g);
        }
        if p1n > 0.0 {
            hi = hi.max(p0n / p1n);
        } else if p0n > 0.0 {
            hi = f64::INFINITY;
        }
    }
    (lo, hi)
}

/// `χ̲_½` for the canonical ½-CAC form.
pub fn half_cac_lower(prior: &Prior) -> f64 {
    let mut lo = f64::INFINITY;
    for v in 0..8 {
        let (mut num, mut den) = (0.0, 0.0);
        for xa in 0..2 {
            for xb in 0..2 {
                let g = parity(v, xa, xb);
                num += prior.get(xa, xb, 0) * (1.0 + g);
                den += 2.0 * prior.get(xa, xb, 1) * g;
            }
        }
        if den > 0.0 {
            lo = lo.min(num / den);
        }
    }
    lo
}
