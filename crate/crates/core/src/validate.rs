//! Oracle suite behind `pcraman validate`.
//!
//! Each check compares a solver against an independent closed form or a
//! synthetic signal and reports the worst deviation it saw.

use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::analysis::{find_feature, FeatureKind};
use crate::error::Result;
use crate::fpc::{fpc_reflectance, fpc_transmittance, overlap_integral, FpcParams};
use crate::oracle;
use crate::raman::{eta_factor, raman_response_at_detuning, AtomParams, PumpSpec};
use crate::spectrum::{linspace, DEFAULT_DEFECT_SLICES};
use crate::stack::{build_canonical_stack, Layer, LayerKind, LayerStack};
use crate::tmm::{intensity_enhancement, mirror_coefficients, transmittance_reflectance};
use crate::units::{ComplexIndex, Frequency};

const LAMBDA: f64 = 589.6e-9;
const N_H: f64 = 2.35;
const N_L: f64 = 1.45;

#[derive(Debug, Clone)]
pub struct OracleOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn outcome(name: &'static str, worst: f64, tol: f64, what: &str) -> OracleOutcome {
    OracleOutcome {
        name,
        passed: worst < tol,
        detail: format!("{what} {worst:.3e} (tolerance {tol:.0e})"),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn canonical(m: usize, slices: usize) -> Result<LayerStack> {
    build_canonical_stack(ComplexIndex::real(N_H), ComplexIndex::real(N_L), m, LAMBDA, slices)
}

/// Worst relative T/R deviation from the Airy slab over `cases` random
/// lossy slabs.
pub fn slab_oracle(cases: usize, seed: u64) -> Result<f64> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..cases {
        let n = ComplexIndex::new(rng.gen_range(1.2..4.0), rng.gen_range(0.0..0.3));
        let t = rng.gen_range(10e-9..2e-6);
        let lambda = rng.gen_range(400e-9..1600e-9);
        let stack = LayerStack::new(vec![Layer::new(LayerKind::Custom, t, n)?], ComplexIndex::VACUUM)?;
        let (tt, rr) = transmittance_reflectance(&stack, Frequency::from_wavelength(lambda))?;
        let (t0, r0) = oracle::slab_airy(n, t, lambda);
        worst = worst.max(rel(tt, t0)).max(rel(rr, r0));
    }
    Ok(worst)
}

/// Worst relative `R_M` deviation for `(HL)^M H`, `M = 1..=10`.
pub fn mirror_oracle() -> Result<f64> {
    let w0 = Frequency::from_wavelength(LAMBDA);
    let mut worst: f64 = 0.0;
    for m in 1..=10 {
        let (_, r) = mirror_coefficients(&canonical(m, 1)?, w0)?;
        worst = worst.max(rel(r, oracle::quarter_wave_mirror_reflectance(N_H, N_L, m, 1.0, 1.0)));
    }
    Ok(worst)
}

/// `(max |T+R−1|, |T(ω₀)−1|)` for the passive canonical stack over 2001
/// frequencies spanning ±`halfspan` around `ω₀`.
pub fn energy_oracle(slices: usize, halfspan: f64) -> Result<(f64, f64)> {
    let stack = canonical(10, slices)?;
    let w0 = Frequency::from_wavelength(LAMBDA).0;
    let mut worst: f64 = 0.0;
    for off in linspace(-halfspan, halfspan, 2001) {
        let (t, r) = transmittance_reflectance(&stack, Frequency(w0 + off))?;
        worst = worst.max((t + r - 1.0).abs());
    }
    let (t0, _) = transmittance_reflectance(&stack, Frequency(w0))?;
    Ok((worst, (t0 - 1.0).abs()))
}

/// Pump intensity enhancement at the defect center of the M=10 stack.
pub fn enhancement_at_center() -> Result<f64> {
    let stack = canonical(10, 1)?;
    let (z0, z1) = stack.defect_bounds().expect("canonical stack has a defect");
    intensity_enhancement(&stack, Frequency::from_wavelength(LAMBDA), 0.5 * (z0 + z1))
}

/// Worst relative gap between analytic `η` and `F ω₀ ∂Re δn/∂ω₂` by central
/// differences with step `γ₂₀/1000`, over ten pump levels.
pub fn eta_oracle() -> Result<f64> {
    let gamma10 = 2.0 * PI * 1e8;
    let w0 = Frequency::from_wavelength(LAMBDA);
    let omega20 = Frequency::from_hz(1.8e9);
    let atom = AtomParams::new(w0 + omega20 + Frequency(30.0 * gamma10), omega20, gamma10, 0.1 * gamma10, 2.4e5)?;
    let f = 0.75;
    let h = atom.gamma20 / 1000.0;
    let mut worst: f64 = 0.0;
    for g in linspace(0.001, 0.01, 10) {
        let pump = PumpSpec::new(g * gamma10, 30.0 * gamma10);
        let re = |d: f64| raman_response_at_detuning(&atom, &pump, d).map(|r| r.delta_n.re);
        let fd = f * w0.0 * (re(h)? - re(-h)?) / (2.0 * h);
        worst = worst.max(rel(fd, eta_factor(&atom, &pump, f, w0)?));
    }
    Ok(worst)
}

pub fn overlap_oracle() -> Result<f64> {
    let d = LAMBDA / 2.0;
    let k = PI / d;
    Ok((overlap_integral(k, k, d)? - oracle::half_wave_overlap()).abs())
}

/// Passive FPC against the Airy function with `T_M = 1 − R_M`, plus `T+R`.
pub fn fpc_airy_oracle() -> Result<f64> {
    let mut worst: f64 = 0.0;
    for r_m in [0.3, 0.9, 0.999, 0.99995] {
        for phi in linspace(0.0, 2.0 * PI, 101) {
            let p = FpcParams {
                t_m: 1.0 - r_m,
                r_m,
                alpha_d: 0.0,
                phi,
                eta: 0.0,
                d: LAMBDA / 2.0,
            };
            let t = fpc_transmittance(&p)?;
            let r = fpc_reflectance(&p)?;
            worst = worst.max((t - oracle::airy(r_m, phi)).abs()).max((t + r - 1.0).abs());
        }
    }
    Ok(worst)
}

/// Worst relative height/width error of the feature finder on synthetic
/// Lorentzian peak and dip.
pub fn feature_oracle() -> f64 {
    let fwhm = 1.0;
    let x = linspace(-40.0, 40.0, 4001);
    let mut worst: f64 = 0.0;
    for (height, kind) in [(1.0, FeatureKind::Peak), (-0.5, FeatureKind::Dip)] {
        let y: Vec<f64> = x.iter().map(|&v| oracle::lorentzian(v, 0.0, fwhm / 2.0, height, 1.0)).collect();
        match find_feature(&x, &y) {
            Some(p) if p.kind == kind => {
                worst = worst.max(rel(p.height, 1.0 + height)).max(rel(p.fwhm, fwhm));
            }
            _ => return f64::INFINITY,
        }
    }
    worst
}

/// Runs every oracle. Solver errors count as failures.
pub fn run_suite() -> Vec<OracleOutcome> {
    let wrap = |name: &'static str, r: Result<OracleOutcome>| {
        r.unwrap_or_else(|e| OracleOutcome {
            name,
            passed: false,
            detail: format!("error: {e}"),
        })
    };
    let gamma10 = 2.0 * PI * 1e8;
    vec![
        wrap("single-slab Airy", slab_oracle(100, 7).map(|w| outcome("single-slab Airy", w, 1e-10, "worst rel dev"))),
        wrap("quarter-wave mirror", mirror_oracle().map(|w| outcome("quarter-wave mirror", w, 1e-8, "worst rel dev"))),
        wrap(
            "energy conservation",
            energy_oracle(DEFAULT_DEFECT_SLICES, 40.0 * gamma10).map(|(w, t0)| OracleOutcome {
                name: "energy conservation",
                passed: w < 1e-10 && t0 < 1e-8,
                detail: format!("max |T+R-1| {w:.3e} (1e-10), |T(w0)-1| {t0:.3e} (1e-8)"),
            }),
        ),
        wrap(
            "defect field enhancement",
            enhancement_at_center().map(|e| OracleOutcome {
                name: "defect field enhancement",
                passed: (1e4..=1e6).contains(&e),
                detail: format!("|E|^2/|E_in|^2 = {e:.4e} (expected in [1e4, 1e6])"),
            }),
        ),
        wrap("eta finite difference", eta_oracle().map(|w| outcome("eta finite difference", w, 1e-4, "worst rel dev"))),
        wrap("overlap integral 8/(3pi)", overlap_oracle().map(|w| outcome("overlap integral 8/(3pi)", w, 1e-9, "abs dev"))),
        wrap("passive FPC = Airy", fpc_airy_oracle().map(|w| outcome("passive FPC = Airy", w, 1e-12, "worst abs dev"))),
        outcome("Lorentzian feature finder", feature_oracle(), 5e-3, "worst rel dev"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cheap_oracles_pass() {
        assert!(slab_oracle(20, 1).unwrap() < 1e-10);
        assert!(mirror_oracle().unwrap() < 1e-8);
        assert!(overlap_oracle().unwrap() < 1e-9);
        assert!(fpc_airy_oracle().unwrap() < 1e-12);
        assert!(feature_oracle() < 5e-3);
        assert!(eta_oracle().unwrap() < 1e-4);
    }
}
