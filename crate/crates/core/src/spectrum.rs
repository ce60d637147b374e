//! Probe transmission/reflection spectra in the undepleted-pump picture.

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{invalid, Error, Result};
use crate::raman::{chi_normalized, index_profile_from_chi, AtomParams, PumpSpec};
use crate::stack::LayerStack;
use crate::tmm::{coefficients_with_defect, pump_field_profile};
use crate::units::Frequency;

/// Default number of defect slices; see the convergence tests.
pub const DEFAULT_DEFECT_SLICES: usize = 4000;

/// Probe grid around the Raman line center: a dense uniform core plus a
/// coarse uniform skirt covering the passive defect-mode band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    /// Half span of the dense core, rad/s.
    pub inner_halfspan: f64,
    pub inner_points: usize,
    /// Half span of the coarse skirt, rad/s; ignored when not wider than
    /// the core or when `outer_points < 2`.
    pub outer_halfspan: f64,
    pub outer_points: usize,
}

impl GridSpec {
    /// 2001 points over ±0.5γ₁₀ plus 201 points over ±40γ₁₀.
    pub fn default_for(gamma10: f64) -> Self {
        GridSpec {
            inner_halfspan: 0.5 * gamma10,
            inner_points: 2001,
            outer_halfspan: 40.0 * gamma10,
            outer_points: 201,
        }
    }

    pub fn uniform(halfspan: f64, points: usize) -> Self {
        GridSpec {
            inner_halfspan: halfspan,
            inner_points: points,
            outer_halfspan: 0.0,
            outer_points: 0,
        }
    }

    /// Strictly increasing offsets from line center, rad/s.
    pub fn offsets(&self) -> Result<Vec<f64>> {
        if self.inner_points < 2 || !(self.inner_halfspan > 0.0) {
            return Err(invalid("grid needs at least 2 points over a positive span"));
        }
        let inner = linspace(-self.inner_halfspan, self.inner_halfspan, self.inner_points);
        if self.outer_points < 2 || self.outer_halfspan <= self.inner_halfspan {
            return Ok(inner);
        }
        let outer = linspace(-self.outer_halfspan, self.outer_halfspan, self.outer_points);
        let mut all: Vec<f64> = outer
            .into_iter()
            .filter(|x| x.abs() > self.inner_halfspan)
            .chain(inner)
            .collect();
        all.sort_by(f64::total_cmp);
        all.dedup();
        Ok(all)
    }
}

/// `n` evenly spaced values; symmetric grids with odd `n` hit 0 exactly.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let mid = (n - 1) as f64 / 2.0;
    let half = (hi - lo) / 2.0;
    let center = lo + half;
    (0..n)
        .map(|i| center + half * ((i as f64 - mid) / mid))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumMeta {
    /// SHA-256 over the inputs that produced the spectrum.
    pub config_digest: String,
    /// Probe frequency of exact Raman resonance, `ω₁ − ω₂₀`.
    pub line_center: f64,
    pub gamma10: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub omegas: Vec<f64>,
    pub t_values: Vec<f64>,
    pub r_values: Vec<f64>,
    pub metadata: SpectrumMeta,
}

impl Spectrum {
    pub fn new(omegas: Vec<f64>, t_values: Vec<f64>, r_values: Vec<f64>, metadata: SpectrumMeta) -> Result<Self> {
        if omegas.len() != t_values.len() || omegas.len() != r_values.len() {
            return Err(invalid("spectrum arrays differ in length"));
        }
        if omegas.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("spectrum grid must be strictly increasing"));
        }
        Ok(Spectrum {
            omegas,
            t_values,
            r_values,
            metadata,
        })
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// Probe detuning from Raman line center in units of `γ₁₀`, signed like
    /// `Ω₂ = ω₁₂ − ω₂` (positive below line center).
    pub fn detunings_over_gamma10(&self) -> Vec<f64> {
        let m = &self.metadata;
        self.omegas
            .iter()
            .map(|w| (m.line_center - w) / m.gamma10)
            .collect()
    }
}

/// Precomputed pump standing wave, reused for every probe frequency.
pub struct ProbeSolver<'a> {
    stack: &'a LayerStack,
    atom: AtomParams,
    pump: PumpSpec,
    g1_sq: Vec<f64>,
    omega1: Frequency,
}

impl<'a> ProbeSolver<'a> {
    /// Solves the pump once on the passive `stack`.
    pub fn new(stack: &'a LayerStack, atom: &AtomParams, pump: &PumpSpec) -> Result<Self> {
        atom.validate()?;
        pump.check(atom)?;
        if stack.defect_slice_count() == 0 {
            return Err(invalid("stack has no defect slices"));
        }
        let omega1 = pump.frequency(atom);
        let g1_sq = pump_field_profile(stack, omega1, pump.rabi_g1)?;
        Ok(ProbeSolver {
            stack,
            atom: *atom,
            pump: *pump,
            g1_sq,
            omega1,
        })
    }

    /// Local `|G₁|²` at the defect-slice midpoints.
    pub fn pump_profile(&self) -> &[f64] {
        &self.g1_sq
    }

    pub fn line_center(&self) -> Frequency {
        Frequency(self.omega1.0 - self.atom.omega20.0)
    }

    /// `(T, R)` at probe frequency `omega2` with Raman detuning `detuning`.
    pub fn point(&self, omega2: Frequency, detuning: f64) -> Result<(f64, f64)> {
        let chi = chi_normalized(&self.atom, self.pump.detuning_omega1, detuning);
        let indices = index_profile_from_chi(chi, self.atom.gamma10, &self.g1_sq);
        let (t, r) = coefficients_with_defect(self.stack, Some(&indices), omega2).map_err(|e| Error::AtFrequency {
            omega: omega2.0,
            source: Box::new(e),
        })?;
        Ok((t.norm_sqr(), r.norm_sqr()))
    }

    fn sweep(&self, points: &[(f64, f64)], digest: String) -> Result<Spectrum> {
        let results: Vec<Result<(f64, f64)>> = points
            .par_iter()
            .map(|&(w, det)| self.point(Frequency(w), det))
            .collect();
        let mut t_values = Vec::with_capacity(points.len());
        let mut r_values = Vec::with_capacity(points.len());
        for res in results {
            let (t, r) = res?;
            t_values.push(t);
            r_values.push(r);
        }
        Spectrum::new(
            points.iter().map(|p| p.0).collect(),
            t_values,
            r_values,
            SpectrumMeta {
                config_digest: digest,
                line_center: self.line_center().0,
                gamma10: self.atom.gamma10,
            },
        )
    }

    /// Spectrum on absolute probe frequencies.
    pub fn spectrum(&self, omega2_grid: &[Frequency]) -> Result<Spectrum> {
        let points: Vec<(f64, f64)> = omega2_grid
            .iter()
            .map(|w| (w.0, self.atom.omega20.0 - (self.omega1.0 - w.0)))
            .collect();
        let digest = self.digest(&points);
        self.sweep(&points, digest)
    }

    /// Spectrum at `line_center + offset`; the Raman detuning is taken as the
    /// offset itself, free of the large-number cancellation.
    pub fn spectrum_around(&self, offsets: &[f64]) -> Result<Spectrum> {
        let center = self.line_center().0;
        let points: Vec<(f64, f64)> = offsets.iter().map(|&o| (center + o, o)).collect();
        let digest = self.digest(&points);
        self.sweep(&points, digest)
    }

    fn digest(&self, points: &[(f64, f64)]) -> String {
        #[derive(Serialize)]
        struct Inputs<'b> {
            stack: &'b LayerStack,
            atom: &'b AtomParams,
            pump: &'b PumpSpec,
        }
        let inputs = Inputs {
            stack: self.stack,
            atom: &self.atom,
            pump: &self.pump,
        };
        let mut hasher = Sha256::new();
        hasher.update(serde_json::to_vec(&inputs).expect("plain data serializes"));
        for (w, det) in points {
            hasher.update(w.to_le_bytes());
            hasher.update(det.to_le_bytes());
        }
        hex(&hasher.finalize())
    }
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    use std::fmt::Write;
    bytes.iter().fold(String::with_capacity(2 * bytes.len()), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Probe `T(ω₂)`, `R(ω₂)` through the pumped cavity.
///
/// The pump is solved once on the passive stack; each probe frequency then
/// gets its own slice-wise defect index from the local pump intensity.
/// `T + R` may exceed 1 since the defect is active.
pub fn probe_spectrum(
    stack: &LayerStack,
    atom: &AtomParams,
    pump: &PumpSpec,
    omega2_grid: &[Frequency],
) -> Result<Spectrum> {
    ProbeSolver::new(stack, atom, pump)?.spectrum(omega2_grid)
}
