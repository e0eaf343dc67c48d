//! Structural checks behind the threshold characterisation: the quadratic
//! whose roots are the thresholds, stationary points of the cost gap and
//! the vertex location of its minimum at the thresholds.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use super::local::gradient;
use super::{j_bar, j_underbar, thresholds};
use crate::error::{Error, Result};
use crate::instance::SymPrior;

/// `f̄(χ) = 2(χk − s)(χs − k) + (χ − 1)²(k + s)t`.
pub fn f_bar(p: &SymPrior, chi: f64) -> f64 {
    let (s, k, t) = (p.s(), p.k(), p.t());
    2.0 * (chi * k - s) * (chi * s - k) + (chi - 1.0).powi(2) * (k + s) * t
}

/// The three stationary points of the gap `Δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StationaryPoint {
    /// `(π, 0, 0)` on `J̄`, where it meets `−(1+χ)(s+t)`.
    PiZeroZero,
    /// `(0, π, π)` on `J̄`, where it meets `−χ(s+k+2t)`.
    ZeroPiPi,
    /// `(0, 0, 0)` on `J̲`, where it meets `−(s+k+2t)`.
    Origin,
}

impl StationaryPoint {
    pub const ALL: [StationaryPoint; 3] = [
        StationaryPoint::PiZeroZero,
        StationaryPoint::ZeroPiPi,
        StationaryPoint::Origin,
    ];

    pub fn phi(self) -> [f64; 3] {
        match self {
            StationaryPoint::PiZeroZero => [PI, 0.0, 0.0],
            StationaryPoint::ZeroPiPi => [0.0, PI, PI],
            StationaryPoint::Origin => [0.0, 0.0, 0.0],
        }
    }

    /// Gap between the associated φ-objective and its classical branch.
    pub fn delta(self, p: &SymPrior, chi: f64, phi: &[f64; 3]) -> f64 {
        let (s, k, t) = (p.s(), p.k(), p.t());
        match self {
            StationaryPoint::PiZeroZero => j_bar(p, chi, phi[0], phi[1], phi[2]) + (1.0 + chi) * (s + t),
            StationaryPoint::ZeroPiPi => j_bar(p, chi, phi[0], phi[1], phi[2]) + chi * (s + k + 2.0 * t),
            StationaryPoint::Origin => j_underbar(p, chi, phi[0], phi[1], phi[2]) + (s + k + 2.0 * t),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StationarityReport {
    pub point: StationaryPoint,
    pub chi: f64,
    pub delta: f64,
    pub grad_norm: f64,
    pub passed: bool,
}

/// `|Δ|` and the central-difference `‖∇_φ Δ‖` (step 1e-5) at `point`; both must be below 1e-6.
pub fn stationarity_check(p: &SymPrior, chi: f64, point: StationaryPoint) -> StationarityReport {
    let f = |phi: &[f64; 3]| point.delta(p, chi, phi);
    let at = point.phi();
    let delta = f(&at);
    let g = gradient(&f, &at, 1e-5);
    let grad_norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    StationarityReport {
        point,
        chi,
        delta,
        grad_norm,
        passed: delta.abs() < 1e-6 && grad_norm < 1e-6,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ThresholdSide {
    AtChiTh,
    AtChiUpTh,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexMinimumReport {
    pub side: ThresholdSide,
    pub chi: f64,
    pub grid_min: f64,
    pub grid_argmin: [f64; 3],
    pub vertex_min: f64,
    /// Best cube vertex; near-ties go to the lexicographically smallest.
    pub vertex: [f64; 3],
    pub passed: bool,
}

/// Evaluates the gap on a `grid_n³` grid over `[0, π]³` at the chosen threshold.
///
/// Passes when the best vertex is within 1e-9 of the grid minimum and its
/// value is zero to within 1e-6.
pub fn vertex_minimum_check(p: &SymPrior, side: ThresholdSide, grid_n: usize) -> Result<VertexMinimumReport> {
    if grid_n < 32 {
        return Err(Error::InvalidConfig(format!("grid_n must be at least 32 (got {grid_n})")));
    }
    let report = thresholds(p)?;
    let (chi, point) = match side {
        ThresholdSide::AtChiTh => (report.chi_th, StationaryPoint::Origin),
        ThresholdSide::AtChiUpTh => (report.chi_up_th, StationaryPoint::ZeroPiPi),
    };
    let step = PI / (grid_n - 1) as f64;
    let coord = |i: usize| if i == grid_n - 1 { PI } else { i as f64 * step };

    let (grid_argmin, grid_min) = (0..grid_n)
        .into_par_iter()
        .map(|i| {
            let mut best = ([0.0; 3], f64::INFINITY);
            for j in 0..grid_n {
                for l in 0..grid_n {
                    let phi = [coord(i), coord(j), coord(l)];
                    let v = point.delta(p, chi, &phi);
                    if v < best.1 {
                        best = (phi, v);
                    }
                }
            }
            best
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(([0.0; 3], f64::INFINITY), |acc, r| if r.1 < acc.1 { r } else { acc });

    let mut vertex = [0.0; 3];
    let mut vertex_min = f64::INFINITY;
    for c in 0..8 {
        let phi = [0, 1, 2].map(|b| if c >> (2 - b) & 1 == 1 { PI } else { 0.0 });
        let v = point.delta(p, chi, &phi);
        if v < vertex_min - 1e-12 {
            vertex_min = v;
            vertex = phi;
        }
    }
    Ok(VertexMinimumReport {
        side,
        chi,
        grid_min,
        grid_argmin,
        vertex_min,
        vertex,
        passed: vertex_min <= grid_min + 1e-9 && vertex_min.abs() < 1e-6,
    })
}
