//! χ-sweeps comparing the classical, no-signalling and quantum optima.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::classical::classical_optimum;
use crate::error::{Error, Result};
use crate::instance::TeamInstance;
use crate::nosignalling::ns_optimum;
use crate::optimizer::{full_quantum_optimum, sym_quantum_optimum, OptimizerConfig, ADVANTAGE_TOL};

pub const CSV_HEADER: [&str; 8] = [
    "chi",
    "j_classical",
    "j_ns",
    "j_quantum",
    "gap_quantum",
    "gap_ns",
    "quantum_advantage",
    "ns_advantage",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum SweepScale {
    Lin,
    #[default]
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub chi_from: f64,
    pub chi_to: f64,
    pub steps: usize,
    pub scale: SweepScale,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.chi_from > 0.0 && self.chi_from.is_finite()) {
            return Err(Error::InvalidSweep(format!("chi-from must be positive (got {})", self.chi_from)));
        }
        if !(self.chi_to > self.chi_from && self.chi_to.is_finite()) {
            return Err(Error::InvalidSweep(format!(
                "chi-to must exceed chi-from (got {} .. {})",
                self.chi_from, self.chi_to
            )));
        }
        if self.steps < 2 {
            return Err(Error::InvalidSweep(format!("steps must be at least 2 (got {})", self.steps)));
        }
        Ok(())
    }

    /// Grid points in ascending order; both endpoints are exact.
    pub fn grid(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let last = (self.steps - 1) as f64;
        let mut out: Vec<f64> = (0..self.steps)
            .map(|i| {
                let f = i as f64 / last;
                match self.scale {
                    SweepScale::Lin => self.chi_from + f * (self.chi_to - self.chi_from),
                    SweepScale::Log => self.chi_from * (self.chi_to / self.chi_from).powf(f),
                }
            })
            .collect();
        out[0] = self.chi_from;
        out[self.steps - 1] = self.chi_to;
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub chi: f64,
    pub j_classical: f64,
    pub j_ns: f64,
    pub j_quantum: f64,
    pub gap_quantum: f64,
    pub gap_ns: f64,
    pub quantum_advantage: bool,
    pub ns_advantage: bool,
}

/// One row; sym-CAC instances use the restricted optimiser, others the full search.
pub fn sweep_row(instance: &TeamInstance, cfg: &OptimizerConfig) -> Result<SweepRow> {
    let chi = instance.chi();
    let (_, j_classical) = classical_optimum(instance);
    let (_, j_ns) = ns_optimum(instance);
    let j_quantum = match instance.sym_prior() {
        Some(p) => sym_quantum_optimum(&p, chi, cfg)?.cost,
        None => full_quantum_optimum(instance, cfg)?.cost,
    };
    let gap_quantum = j_quantum - j_classical;
    let gap_ns = j_ns - j_classical;
    Ok(SweepRow {
        chi,
        j_classical,
        j_ns,
        j_quantum,
        gap_quantum,
        gap_ns,
        quantum_advantage: gap_quantum < ADVANTAGE_TOL,
        ns_advantage: gap_ns < ADVANTAGE_TOL,
    })
}

pub fn run_sweep(instance: &TeamInstance, spec: &SweepSpec, cfg: &OptimizerConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    spec.grid()?
        .into_par_iter()
        .map(|chi| sweep_row(&instance.with_chi(chi)?, cfg))
        .collect()
}

fn real(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            real(r.chi),
            real(r.j_classical),
            real(r.j_ns),
            real(r.j_quantum),
            real(r.gap_quantum),
            real(r.gap_ns),
            r.quantum_advantage.to_string(),
            r.ns_advantage.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
