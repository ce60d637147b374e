//! Third-order Raman response of a Λ system driven by an off-resonant pump.
//!
//! Detuning conventions:
//!
//! * one-photon pump detuning `Ω₁ = ω₁₀ − ω₁` (positive when the pump is
//!   red of the `|0⟩–|1⟩` line),
//! * Raman detuning `Ω_R = ω₂₀ − (ω₁ − ω₂)`, zero on two-photon resonance.
//!
//! Dipole moments, density and ħ are folded into one coupling constant
//! `K = 2πN|d₂₁|²/ħ` (rad/s), so the probe index perturbation is
//!
//! ```text
//! δn = K·|G₁|² / (Ω₁² (Ω_R + iγ₂₀))
//! ```
//!
//! with `G₁` the local pump Rabi frequency. Its imaginary part is negative
//! for every real `Ω_R`: the probe is amplified, never absorbed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::units::{ComplexIndex, Frequency};

/// The pump detuning must exceed this many `γ₁₀` for the perturbative
/// susceptibility to hold; below it a warning is logged.
pub const MIN_DETUNING_OVER_GAMMA10: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomParams {
    /// `|0⟩–|1⟩` transition frequency.
    pub omega10: Frequency,
    /// `|0⟩–|2⟩` Raman transition frequency.
    pub omega20: Frequency,
    /// Halfwidth of the `|0⟩–|1⟩` transition, rad/s.
    pub gamma10: f64,
    /// Halfwidth of the Raman transition, rad/s.
    pub gamma20: f64,
    /// `2πN|d₂₁|²/ħ`, rad/s.
    pub coupling_k: f64,
}

impl AtomParams {
    pub fn new(
        omega10: Frequency,
        omega20: Frequency,
        gamma10: f64,
        gamma20: f64,
        coupling_k: f64,
    ) -> Result<Self> {
        let atom = AtomParams {
            omega10,
            omega20,
            gamma10,
            gamma20,
            coupling_k,
        };
        atom.validate()?;
        Ok(atom)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega10.0 > 0.0 && self.omega20.0 > 0.0) {
            return Err(invalid("transition frequencies must be positive"));
        }
        if self.omega20.0 >= 1e-2 * self.omega10.0 {
            return Err(invalid(format!(
                "Raman frequency {:e} is not small against the optical transition {:e}",
                self.omega20.0, self.omega10.0
            )));
        }
        if !(self.gamma10 > 0.0 && self.gamma20 > 0.0) {
            return Err(invalid("halfwidths must be positive"));
        }
        if self.gamma20 >= self.gamma10 {
            return Err(invalid(format!(
                "gamma20 ({:e}) must be below gamma10 ({:e}): |2> is metastable",
                self.gamma20, self.gamma10
            )));
        }
        if !(self.coupling_k >= 0.0 && self.coupling_k.is_finite()) {
            return Err(invalid("coupling_k must be finite and non-negative"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PumpSpec {
    /// Pump Rabi frequency `G₁` in rad/s.
    pub rabi_g1: f64,
    /// `Ω₁ = ω₁₀ − ω₁` in rad/s.
    pub detuning_omega1: f64,
}

impl PumpSpec {
    pub fn new(rabi_g1: f64, detuning_omega1: f64) -> Self {
        PumpSpec {
            rabi_g1,
            detuning_omega1,
        }
    }

    /// Pump carrier frequency `ω₁ = ω₁₀ − Ω₁`.
    pub fn frequency(&self, atom: &AtomParams) -> Frequency {
        Frequency(atom.omega10.0 - self.detuning_omega1)
    }

    /// Errors on `Ω₁ = 0`; warns when `|Ω₁| < 10γ₁₀`.
    pub fn check(&self, atom: &AtomParams) -> Result<()> {
        if self.detuning_omega1 == 0.0 {
            return Err(Error::Singularity("pump detuning Omega1 is zero"));
        }
        if !self.rabi_g1.is_finite() {
            return Err(invalid("pump Rabi frequency must be finite"));
        }
        if self.detuning_omega1.abs() < MIN_DETUNING_OVER_GAMMA10 * atom.gamma10 {
            log::warn!(
                "|Omega1| = {:.3} gamma10 is below {} gamma10; the third-order Raman susceptibility is unreliable",
                self.detuning_omega1.abs() / atom.gamma10,
                MIN_DETUNING_OVER_GAMMA10
            );
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamanResponse {
    /// Index perturbation per unit normalized pump intensity `(|G₁|/γ₁₀)²`.
    pub chi_r: Complex64,
    /// Complex index perturbation at the pump's `G₁`.
    pub delta_n: Complex64,
    /// `Ω_R` in rad/s.
    pub detuning_raman: f64,
}

/// Raman detuning `Ω_R = ω₂₀ − (ω₁ − ω₂)`.
pub fn raman_detuning(atom: &AtomParams, omega1: Frequency, omega2: Frequency) -> f64 {
    atom.omega20.0 - (omega1.0 - omega2.0)
}

/// `χ_R` and `δn` at probe frequency `omega2`.
pub fn raman_susceptibility(
    atom: &AtomParams,
    pump: &PumpSpec,
    omega2: Frequency,
) -> Result<RamanResponse> {
    let detuning = raman_detuning(atom, pump.frequency(atom), omega2);
    raman_response_at_detuning(atom, pump, detuning)
}

/// Same as [`raman_susceptibility`] with `Ω_R` given directly, which avoids
/// the cancellation in `ω₂₀ − (ω₁ − ω₂)` for tiny detunings.
pub fn raman_response_at_detuning(
    atom: &AtomParams,
    pump: &PumpSpec,
    detuning_raman: f64,
) -> Result<RamanResponse> {
    pump.check(atom)?;
    let chi_r = chi_normalized(atom, pump.detuning_omega1, detuning_raman);
    let g1_sq = pump.rabi_g1 * pump.rabi_g1;
    Ok(RamanResponse {
        chi_r,
        delta_n: chi_r * (g1_sq / (atom.gamma10 * atom.gamma10)),
        detuning_raman,
    })
}

/// `K γ₁₀² / (Ω₁² (Ω_R + iγ₂₀))`, the perturbation per `(|G₁|/γ₁₀)²`.
#[inline]
pub(crate) fn chi_normalized(atom: &AtomParams, omega1_detuning: f64, detuning_raman: f64) -> Complex64 {
    let scale = atom.coupling_k * atom.gamma10 * atom.gamma10 / (omega1_detuning * omega1_detuning);
    scale / Complex64::new(detuning_raman, atom.gamma20)
}

/// Probe index at each defect sample, `n₂(z) = 1 + δn(z)`.
///
/// `g1_sq_profile[i]` is the local `|G₁(z_i)|²` in (rad/s)².
pub fn defect_index_profile(
    atom: &AtomParams,
    g1_sq_profile: &[f64],
    omega1: Frequency,
    omega2: Frequency,
    z_grid: &[f64],
) -> Result<Vec<ComplexIndex>> {
    if g1_sq_profile.len() != z_grid.len() {
        return Err(invalid(format!(
            "pump profile has {} samples but the z grid has {}",
            g1_sq_profile.len(),
            z_grid.len()
        )));
    }
    let pump = PumpSpec::new(0.0, atom.omega10.0 - omega1.0);
    pump.check(atom)?;
    let chi = chi_normalized(
        atom,
        pump.detuning_omega1,
        raman_detuning(atom, omega1, omega2),
    );
    Ok(index_profile_from_chi(chi, atom.gamma10, g1_sq_profile))
}

pub(crate) fn index_profile_from_chi(
    chi: Complex64,
    gamma10: f64,
    g1_sq_profile: &[f64],
) -> Vec<ComplexIndex> {
    let inv = 1.0 / (gamma10 * gamma10);
    g1_sq_profile
        .iter()
        .map(|&g| {
            let dn = chi * (g * inv);
            ComplexIndex::new(1.0 + dn.re, dn.im)
        })
        .collect()
}

/// Intensity gain coefficient `α = −(4π/λ)·Im n`, in 1/m.
pub fn gain_coefficient(n2_im: f64, wavelength: f64) -> Result<f64> {
    if !(wavelength > 0.0) {
        return Err(invalid(format!("wavelength must be positive, got {wavelength}")));
    }
    Ok(-4.0 * std::f64::consts::PI / wavelength * n2_im)
}

/// Dispersion factor `η = F·ω₀·K·|G₁|² / (Ω₁² γ₂₀²)`.
///
/// This is `ω₀·∂(Re n_eff)/∂ω₂` at Raman line center; the group-index
/// factor of the probe is `1 + η`.
pub fn eta_factor(
    atom: &AtomParams,
    pump: &PumpSpec,
    overlap_f: f64,
    omega0: Frequency,
) -> Result<f64> {
    if atom.gamma20 == 0.0 {
        return Err(Error::Singularity("Raman halfwidth gamma20 is zero"));
    }
    if pump.detuning_omega1 == 0.0 {
        return Err(Error::Singularity("pump detuning Omega1 is zero"));
    }
    if !(overlap_f > 0.0 && overlap_f <= 1.0) {
        return Err(invalid(format!("overlap factor must lie in (0, 1], got {overlap_f}")));
    }
    let g1_sq = pump.rabi_g1 * pump.rabi_g1;
    let o1_sq = pump.detuning_omega1 * pump.detuning_omega1;
    Ok(overlap_f * omega0.0 * atom.coupling_k * g1_sq / (o1_sq * atom.gamma20 * atom.gamma20))
}

/// Group-index factor `1 + η`.
pub fn group_index_factor(eta: f64) -> f64 {
    1.0 + eta
}
