//! Reduced Fabry-Perot description of the defect cavity.
//!
//! The defect is treated as a cavity of length `d` between two identical
//! mirrors `(T_M, R_M)`, filled with a medium of single-pass intensity gain
//! `e^{αd}` and round-trip phase `Φ`. This model interprets the full
//! transfer-matrix results: it predicts the peak height, the peak-to-dip
//! threshold and the dispersion-narrowed linewidth.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quad::adaptive_simpson;
use crate::raman::{chi_normalized, eta_factor, gain_coefficient, AtomParams, PumpSpec};
use crate::stack::LayerStack;
use crate::tmm::{mirror_coefficients, pump_field_profile, solve_fields, THRESHOLD_TRANSMITTANCE};
use crate::units::{Frequency, SPEED_OF_LIGHT};

/// Above this `αd` the small-gain forms are poor; a warning is logged.
const SMALL_GAIN_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FpcParams {
    /// Mirror intensity transmission `T_M`.
    pub t_m: f64,
    /// Mirror intensity reflection `R_M`.
    pub r_m: f64,
    /// Single-pass gain exponent `αd`.
    pub alpha_d: f64,
    /// Round-trip phase `Φ`, rad.
    pub phi: f64,
    /// Dispersion factor `η`.
    pub eta: f64,
    /// Cavity length, m.
    pub d: f64,
}

impl FpcParams {
    pub fn validate(&self) -> Result<()> {
        let unit = 0.0..=1.0;
        if !unit.contains(&self.t_m) || !unit.contains(&self.r_m) {
            return Err(invalid(format!(
                "mirror coefficients must lie in [0, 1], got T_M={} R_M={}",
                self.t_m, self.r_m
            )));
        }
        if self.t_m + self.r_m > 1.0 + 1e-9 {
            return Err(invalid(format!(
                "T_M + R_M = {} exceeds 1",
                self.t_m + self.r_m
            )));
        }
        if !(self.alpha_d >= 0.0) {
            return Err(invalid(format!("alpha*d must be non-negative, got {}", self.alpha_d)));
        }
        if !(self.eta >= 0.0) {
            return Err(invalid(format!("eta must be non-negative, got {}", self.eta)));
        }
        if !self.phi.is_finite() {
            return Err(invalid("phase must be finite"));
        }
        Ok(())
    }

    fn gain(&self) -> f64 {
        self.alpha_d.exp()
    }

    /// `αd·R_M / T_M`: below 1 the peak grows with pumping, above 2 it is a dip.
    pub fn threshold_ratio(&self) -> f64 {
        self.alpha_d * self.r_m / self.t_m
    }
}

fn check_pole(value: f64) -> Result<f64> {
    if value.is_finite() && value <= THRESHOLD_TRANSMITTANCE {
        Ok(value)
    } else {
        Err(Error::ThresholdReached(format!(
            "R_M e^(alpha d) reached 1 on resonance (T = {value:.3e})"
        )))
    }
}

/// `T = T_M² e^{αd} / [(1 − R_M e^{αd})² + 4 R_M e^{αd} sin²(Φ/2)]`.
pub fn fpc_transmittance(p: &FpcParams) -> Result<f64> {
    p.validate()?;
    let g = p.gain();
    let rg = p.r_m * g;
    let s = (p.phi / 2.0).sin();
    let denom = (1.0 - rg).powi(2) + 4.0 * rg * s * s;
    check_pole(p.t_m * p.t_m * g / denom)
}

/// Reflectance of the same cavity (mirror loss `1 − T_M − R_M` allowed).
pub fn fpc_reflectance(p: &FpcParams) -> Result<f64> {
    p.validate()?;
    let g = p.gain();
    let rg = p.r_m * g;
    let sg = (p.r_m + p.t_m) * g;
    let s2 = (p.phi / 2.0).sin().powi(2);
    let denom = (1.0 - rg).powi(2) + 4.0 * rg * s2;
    check_pole(p.r_m * ((1.0 - sg).powi(2) + 4.0 * sg * s2) / denom)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FpcPeak {
    /// `T_M² e^{αd}/(1 − R_M e^{αd})²`.
    pub exact: f64,
    /// `T_M²/(T_M − αd R_M)²`, valid for `αd ≪ 1`; infinite at its pole.
    pub small_gain: f64,
}

/// On-resonance (`Φ = 2πm`) transmittance; the phase in `p` is ignored.
pub fn fpc_peak(p: &FpcParams) -> Result<FpcPeak> {
    p.validate()?;
    warn_large_gain(p);
    let g = p.gain();
    let exact = check_pole(p.t_m * p.t_m * g / (1.0 - p.r_m * g).powi(2))?;
    let small_gain = p.t_m * p.t_m / (p.t_m - p.alpha_d * p.r_m).powi(2);
    Ok(FpcPeak { exact, small_gain })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Linewidth {
    /// Narrowed FWHM `δω = Δω/(1 + η)`, rad/s.
    pub narrowed: f64,
    /// Cavity FWHM without dispersion, `(c/d)|1 − R_M e^{αd}|/(e^{αd/2}√R_M)`.
    pub empty: f64,
    /// Small-gain form `(c/d)|T_M − αd R_M|/√R_M`.
    pub empty_small_gain: f64,
    /// `Δω_small/(1 + η)`.
    pub narrowed_small_gain: f64,
}

/// FWHM of the resonance, with and without Raman-dispersion narrowing.
pub fn fpc_linewidth(p: &FpcParams) -> Result<Linewidth> {
    p.validate()?;
    if p.r_m <= 0.0 {
        return Err(invalid("R_M = 0: no cavity"));
    }
    if !(p.d > 0.0) {
        return Err(invalid("cavity length must be positive"));
    }
    let g = p.gain();
    let c_over_d = SPEED_OF_LIGHT / p.d;
    let empty = c_over_d * (1.0 - p.r_m * g).abs() / (g.sqrt() * p.r_m.sqrt());
    let empty_small_gain = c_over_d * (p.t_m - p.alpha_d * p.r_m).abs() / p.r_m.sqrt();
    let factor = 1.0 + p.eta;
    Ok(Linewidth {
        narrowed: empty / factor,
        empty,
        empty_small_gain,
        narrowed_small_gain: empty_small_gain / factor,
    })
}

/// Overlap of the pump standing wave with the probe mode,
/// `F = ∫₀^d sin(k₂z) sin²(k₁z) dz / ∫₀^d sin²(k₂z) dz`.
pub fn overlap_integral(k1: f64, k2: f64, d: f64) -> Result<f64> {
    if !(k1 > 0.0 && k2 > 0.0 && d > 0.0) {
        return Err(invalid("overlap integral needs positive k1, k2 and d"));
    }
    // Integrate in the dimensionless coordinate u = z/d.
    let (a1, a2) = (k1 * d, k2 * d);
    let num = adaptive_simpson(&|u: f64| (a2 * u).sin() * (a1 * u).sin().powi(2), 0.0, 1.0, 1e-14);
    let den = adaptive_simpson(&|u: f64| (a2 * u).sin().powi(2), 0.0, 1.0, 1e-14);
    if den == 0.0 {
        return Err(Error::Singularity("probe mode vanishes over the cavity"));
    }
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `αd R_M < T_M`: the peak grows with pumping.
    Growth,
    /// `T_M ≤ αd R_M ≤ 2T_M`: past the maximum, still a peak.
    Saturated,
    /// `αd R_M > 2T_M`: the peak has turned into a dip.
    Dip,
}

pub fn classify_regime(p: &FpcParams) -> Regime {
    warn_large_gain(p);
    let loaded = p.alpha_d * p.r_m;
    if loaded < p.t_m {
        Regime::Growth
    } else if loaded > 2.0 * p.t_m {
        Regime::Dip
    } else {
        Regime::Saturated
    }
}

fn warn_large_gain(p: &FpcParams) {
    if p.alpha_d > SMALL_GAIN_LIMIT {
        log::warn!("alpha*d = {:.3} is not small; small-gain cavity forms are approximate", p.alpha_d);
    }
}

/// Fabry-Perot reduction of a pumped canonical cavity.
///
/// Gain and dispersion are the defect-slice averages of the probe index,
/// weighted by the passive probe-mode intensity at `ω₀`. The effective
/// overlap is `F = ⟨|G₁|²⟩_probe / max |G₁|²`, so `η` uses the peak local
/// Rabi frequency together with that `F`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CavityFpc {
    pub t_m: f64,
    pub r_m: f64,
    /// Defect thickness, m.
    pub d: f64,
    /// Empty-cavity resonance, rad/s.
    pub omega0: f64,
    /// Peak local pump Rabi frequency in the defect, rad/s.
    pub g1_peak: f64,
    /// Probe-weighted pump overlap.
    pub overlap_f: f64,
    pub eta: f64,
    /// `αd` at Raman line center.
    pub alpha_d: f64,
    atom: AtomParams,
    detuning_omega1: f64,
}

impl CavityFpc {
    /// Reduces `stack` (passive) pumped by `pump`, with the probe tuned to
    /// the empty-cavity resonance `omega0`.
    pub fn from_cavity(stack: &LayerStack, atom: &AtomParams, pump: &PumpSpec, omega0: Frequency) -> Result<Self> {
        atom.validate()?;
        pump.check(atom)?;
        let (t_m, r_m) = mirror_coefficients(stack, omega0)?;
        let d = stack.defect_thickness();

        let probe = solve_fields(stack, omega0, true)?;
        let starts = stack.layer_starts();
        let range = stack.defect_range();
        let weights: Vec<f64> = stack
            .defect_slice_midpoints()
            .iter()
            .zip(range.clone())
            .map(|(&z, j)| probe.field_at(z).norm_sqr() * stack.layers()[j].thickness)
            .collect();
        debug_assert_eq!(starts.len(), stack.len());

        let g1_sq = pump_field_profile(stack, pump.frequency(atom), pump.rabi_g1)?;
        let wsum: f64 = weights.iter().sum();
        let mean_g1_sq = weights.iter().zip(&g1_sq).map(|(w, g)| w * g).sum::<f64>() / wsum;
        let peak_g1_sq = g1_sq.iter().cloned().fold(0.0, f64::max);

        let (overlap_f, g1_peak) = if peak_g1_sq > 0.0 {
            (mean_g1_sq / peak_g1_sq, peak_g1_sq.sqrt())
        } else {
            // Pump off: the overlap is undefined but irrelevant.
            (1.0, 0.0)
        };
        let eta = eta_factor(
            atom,
            &PumpSpec::new(g1_peak, pump.detuning_omega1),
            overlap_f,
            omega0,
        )?;

        let mut model = CavityFpc {
            t_m,
            r_m,
            d,
            omega0: omega0.0,
            g1_peak,
            overlap_f,
            eta,
            alpha_d: 0.0,
            atom: *atom,
            detuning_omega1: pump.detuning_omega1,
        };
        model.alpha_d = model.params_at(0.0)?.alpha_d;
        Ok(model)
    }

    /// Effective complex index perturbation at Raman detuning `detuning`.
    pub fn effective_delta_n(&self, detuning: f64) -> num_complex::Complex64 {
        let chi = chi_normalized(&self.atom, self.detuning_omega1, detuning);
        let g_sq = self.overlap_f * self.g1_peak * self.g1_peak;
        chi * (g_sq / (self.atom.gamma10 * self.atom.gamma10))
    }

    /// FPC parameters for a probe at `ω₀ + detuning` (Raman detuning equal to
    /// the probe offset). `αd` is clamped at zero, which only matters if the
    /// pump is off.
    pub fn params_at(&self, detuning: f64) -> Result<FpcParams> {
        let dn = self.effective_delta_n(detuning);
        let omega = self.omega0 + detuning;
        let lambda = Frequency(omega).wavelength();
        let alpha_d = (gain_coefficient(dn.im, lambda)? * self.d).max(0.0);
        let phi = 2.0 * omega * (1.0 + dn.re) * self.d / SPEED_OF_LIGHT;
        Ok(FpcParams {
            t_m: self.t_m,
            r_m: self.r_m,
            alpha_d,
            phi,
            eta: self.eta,
            d: self.d,
        })
    }

    /// Line-center parameters with `Φ` pinned to exactly `2π`.
    pub fn resonant_params(&self) -> Result<FpcParams> {
        let mut p = self.params_at(0.0)?;
        p.phi = 2.0 * PI;
        Ok(p)
    }

    /// `αd R_M / T_M` at line center.
    pub fn threshold_ratio(&self) -> f64 {
        self.alpha_d * self.r_m / self.t_m
    }
}
