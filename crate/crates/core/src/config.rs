//! Flat key/value run configuration with units in the key names.
//!
//! ```toml
//! n_high = 2.35
//! periods = 10
//! probe_wavelength_m = 589.6e-9
//! gamma10_rad_s = 6.283185307179586e8
//! pump_rabi_over_gamma10 = 0.007
//! ```
//!
//! Every key has a default (the canonical sodium cavity); unknown keys are
//! rejected. Errors carry the line of the offending entry.

use std::ops::Range;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use toml::Spanned;

use crate::error::{Error, Result};
use crate::raman::{AtomParams, PumpSpec};
use crate::spectrum::{GridSpec, ProbeSolver, Spectrum, DEFAULT_DEFECT_SLICES};
use crate::stack::{build_canonical_stack, LayerStack};
use crate::units::{ComplexIndex, Frequency};

/// Rabi-scan settings, all in units of γ₁₀ except the point counts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSpec {
    pub g1_min_over_gamma10: f64,
    pub g1_max_over_gamma10: f64,
    pub points: usize,
    /// Half width of the probe window around line center.
    pub window_halfspan_over_gamma10: f64,
    pub window_points: usize,
}

impl ScanSpec {
    /// Pump Rabi frequencies in rad/s.
    pub fn g1_grid(&self, gamma10: f64) -> Vec<f64> {
        crate::spectrum::linspace(self.g1_min_over_gamma10, self.g1_max_over_gamma10, self.points)
            .into_iter()
            .map(|g| g * gamma10)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub n_high: f64,
    pub n_low: f64,
    pub periods: usize,
    /// Design (probe) wavelength λ₂; the defect mode sits at `2πc/λ₂`.
    pub probe_wavelength_m: f64,
    pub defect_slices: usize,
    pub raman_frequency_hz: f64,
    pub gamma10_rad_s: f64,
    pub gamma20_over_gamma10: f64,
    /// `K = 2πN|d₂₁|²/ħ`, rad/s.
    pub coupling_k_rad_s: f64,
    /// `Ω₁ = ω₁₀ − ω₁`.
    pub pump_detuning_over_gamma10: f64,
    pub pump_rabi_over_gamma10: f64,
    pub grid: GridSpec,
    pub scan: ScanSpec,
    pub output_stem: String,
    #[serde(skip)]
    pub source: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let gamma10 = 2.0 * std::f64::consts::PI * 1e8;
        RunConfig {
            n_high: 2.35,
            n_low: 1.45,
            periods: 10,
            probe_wavelength_m: 589.6e-9,
            defect_slices: DEFAULT_DEFECT_SLICES,
            raman_frequency_hz: 1.8e9,
            gamma10_rad_s: gamma10,
            gamma20_over_gamma10: 0.1,
            coupling_k_rad_s: 2.4e5,
            pump_detuning_over_gamma10: 30.0,
            pump_rabi_over_gamma10: 0.0,
            grid: GridSpec::default_for(gamma10),
            scan: ScanSpec {
                g1_min_over_gamma10: 0.0,
                g1_max_over_gamma10: 0.03,
                points: 41,
                window_halfspan_over_gamma10: 0.1,
                window_points: 401,
            },
            output_stem: "spectrum".into(),
            source: None,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    n_high: Option<Spanned<f64>>,
    n_low: Option<Spanned<f64>>,
    periods: Option<Spanned<i64>>,
    probe_wavelength_m: Option<Spanned<f64>>,
    defect_slices: Option<Spanned<i64>>,
    raman_frequency_hz: Option<Spanned<f64>>,
    gamma10_rad_s: Option<Spanned<f64>>,
    gamma20_over_gamma10: Option<Spanned<f64>>,
    coupling_k_rad_s: Option<Spanned<f64>>,
    pump_detuning_over_gamma10: Option<Spanned<f64>>,
    pump_rabi_over_gamma10: Option<Spanned<f64>>,
    grid_inner_halfspan_over_gamma10: Option<Spanned<f64>>,
    grid_inner_points: Option<Spanned<i64>>,
    grid_outer_halfspan_over_gamma10: Option<Spanned<f64>>,
    grid_outer_points: Option<Spanned<i64>>,
    scan_g1_min_over_gamma10: Option<Spanned<f64>>,
    scan_g1_max_over_gamma10: Option<Spanned<f64>>,
    scan_points: Option<Spanned<i64>>,
    scan_window_halfspan_over_gamma10: Option<Spanned<f64>>,
    scan_window_points: Option<Spanned<i64>>,
    output_stem: Option<Spanned<String>>,
}

fn line_of(text: &str, span: Range<usize>) -> usize {
    text[..span.start.min(text.len())].matches('\n').count() + 1
}

struct Checker<'a> {
    text: &'a str,
    path: String,
    errors: Vec<Error>,
}

impl Checker<'_> {
    fn fail(&mut self, span: Range<usize>, message: String) {
        self.errors.push(Error::Config {
            path: self.path.clone(),
            line: line_of(self.text, span),
            message,
        });
    }

    fn float(&mut self, v: Option<Spanned<f64>>, key: &str, default: f64, ok: impl Fn(f64) -> bool, rule: &str) -> f64 {
        match v {
            None => default,
            Some(s) => {
                let x = *s.get_ref();
                if !x.is_finite() || !ok(x) {
                    self.fail(s.span(), format!("{key} = {x}: must be {rule}"));
                }
                x
            }
        }
    }

    fn count(&mut self, v: Option<Spanned<i64>>, key: &str, default: usize, min: i64) -> usize {
        match v {
            None => default,
            Some(s) => {
                let x = *s.get_ref();
                if x < min {
                    self.fail(s.span(), format!("{key} = {x}: must be an integer >= {min}"));
                    return default;
                }
                x as usize
            }
        }
    }
}

impl RunConfig {
    /// Parses configuration text; `path` is only used in messages.
    pub fn from_toml_str(text: &str, path: &str) -> Result<Self> {
        let raw: Raw = toml::from_str(text).map_err(|e| Error::Config {
            path: path.to_string(),
            line: e.span().map_or(0, |s| line_of(text, s)),
            message: e.message().trim().to_string(),
        })?;
        let d = RunConfig::default();
        let mut c = Checker {
            text,
            path: path.to_string(),
            errors: Vec::new(),
        };
        let pos = |x: f64| x > 0.0;
        let nonneg = |x: f64| x >= 0.0;

        let gamma10 = c.float(raw.gamma10_rad_s, "gamma10_rad_s", d.gamma10_rad_s, pos, "> 0");
        let cfg = RunConfig {
            n_high: c.float(raw.n_high, "n_high", d.n_high, pos, "> 0"),
            n_low: c.float(raw.n_low, "n_low", d.n_low, pos, "> 0"),
            periods: c.count(raw.periods, "periods", d.periods, 0),
            probe_wavelength_m: c.float(raw.probe_wavelength_m, "probe_wavelength_m", d.probe_wavelength_m, pos, "> 0"),
            defect_slices: c.count(raw.defect_slices, "defect_slices", d.defect_slices, 1),
            raman_frequency_hz: c.float(raw.raman_frequency_hz, "raman_frequency_hz", d.raman_frequency_hz, pos, "> 0"),
            gamma10_rad_s: gamma10,
            gamma20_over_gamma10: c.float(
                raw.gamma20_over_gamma10,
                "gamma20_over_gamma10",
                d.gamma20_over_gamma10,
                |x| x > 0.0 && x < 1.0,
                "in (0, 1)",
            ),
            coupling_k_rad_s: c.float(raw.coupling_k_rad_s, "coupling_k_rad_s", d.coupling_k_rad_s, nonneg, ">= 0"),
            pump_detuning_over_gamma10: c.float(
                raw.pump_detuning_over_gamma10,
                "pump_detuning_over_gamma10",
                d.pump_detuning_over_gamma10,
                |x| x != 0.0,
                "non-zero",
            ),
            pump_rabi_over_gamma10: c.float(raw.pump_rabi_over_gamma10, "pump_rabi_over_gamma10", d.pump_rabi_over_gamma10, nonneg, ">= 0"),
            grid: GridSpec {
                inner_halfspan: gamma10
                    * c.float(raw.grid_inner_halfspan_over_gamma10, "grid_inner_halfspan_over_gamma10", 0.5, pos, "> 0"),
                inner_points: c.count(raw.grid_inner_points, "grid_inner_points", d.grid.inner_points, 2),
                outer_halfspan: gamma10
                    * c.float(raw.grid_outer_halfspan_over_gamma10, "grid_outer_halfspan_over_gamma10", 40.0, nonneg, ">= 0"),
                outer_points: c.count(raw.grid_outer_points, "grid_outer_points", d.grid.outer_points, 0),
            },
            scan: ScanSpec {
                g1_min_over_gamma10: c.float(raw.scan_g1_min_over_gamma10, "scan_g1_min_over_gamma10", d.scan.g1_min_over_gamma10, nonneg, ">= 0"),
                g1_max_over_gamma10: c.float(raw.scan_g1_max_over_gamma10, "scan_g1_max_over_gamma10", d.scan.g1_max_over_gamma10, nonneg, ">= 0"),
                points: c.count(raw.scan_points, "scan_points", d.scan.points, 1),
                window_halfspan_over_gamma10: c.float(
                    raw.scan_window_halfspan_over_gamma10,
                    "scan_window_halfspan_over_gamma10",
                    d.scan.window_halfspan_over_gamma10,
                    pos,
                    "> 0",
                ),
                window_points: c.count(raw.scan_window_points, "scan_window_points", d.scan.window_points, 3),
            },
            output_stem: match raw.output_stem {
                None => d.output_stem,
                Some(s) => {
                    let v = s.get_ref().clone();
                    if v.is_empty() || v.contains(['/', '\\']) {
                        c.fail(s.span(), format!("output_stem = {v:?}: must be a plain file name"));
                    }
                    v
                }
            },
            source: None,
        };
        if cfg.scan.points > 1 && !(cfg.scan.g1_max_over_gamma10 > cfg.scan.g1_min_over_gamma10) {
            c.errors.push(Error::Config {
                path: path.to_string(),
                line: 0,
                message: "scan_g1_max_over_gamma10 must exceed scan_g1_min_over_gamma10".into(),
            });
        }
        if let Some(first) = c.errors.into_iter().next() {
            return Err(first);
        }
        // Physics-level checks (γ₂₀ < γ₁₀, ω₂₀ ≪ ω₁₀, pump far detuned).
        cfg.atom().and_then(|a| cfg.pump().check(&a)).map_err(|e| Error::Config {
            path: path.to_string(),
            line: 0,
            message: e.to_string(),
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut cfg = Self::from_toml_str(&text, &path.display().to_string())?;
        cfg.source = Some(path.to_path_buf());
        Ok(cfg)
    }

    /// Defect-mode (design) frequency `2πc/λ₂`.
    pub fn omega0(&self) -> Frequency {
        Frequency::from_wavelength(self.probe_wavelength_m)
    }

    pub fn stack(&self) -> Result<LayerStack> {
        build_canonical_stack(
            ComplexIndex::real(self.n_high),
            ComplexIndex::real(self.n_low),
            self.periods,
            self.probe_wavelength_m,
            self.defect_slices,
        )
    }

    /// The pump is placed so that Raman resonance `ω₁ − ω₂ = ω₂₀` falls on
    /// the defect mode: `ω₁ = ω₀ + ω₂₀`, `ω₁₀ = ω₁ + Ω₁`.
    pub fn atom(&self) -> Result<AtomParams> {
        let omega20 = Frequency::from_hz(self.raman_frequency_hz);
        let omega1 = self.omega0() + omega20;
        let omega10 = omega1 + Frequency(self.pump_detuning_over_gamma10 * self.gamma10_rad_s);
        AtomParams::new(
            omega10,
            omega20,
            self.gamma10_rad_s,
            self.gamma20_over_gamma10 * self.gamma10_rad_s,
            self.coupling_k_rad_s,
        )
    }

    pub fn pump(&self) -> PumpSpec {
        self.pump_with(self.pump_rabi_over_gamma10 * self.gamma10_rad_s)
    }

    /// Same pump detuning, Rabi frequency `g1` in rad/s.
    pub fn pump_with(&self, g1: f64) -> PumpSpec {
        PumpSpec::new(g1, self.pump_detuning_over_gamma10 * self.gamma10_rad_s)
    }

    /// SHA-256 of the parsed configuration (hex).
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let bytes = serde_json::to_vec(self).expect("plain data serializes");
        crate::spectrum::hex(&Sha256::digest(bytes))
    }

    /// Probe spectrum on the configured grid around the Raman line center.
    pub fn run_spectrum(&self) -> Result<Spectrum> {
        let stack = self.stack()?;
        let atom = self.atom()?;
        let solver = ProbeSolver::new(&stack, &atom, &self.pump())?;
        solver.spectrum_around(&self.grid.offsets()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        let c = RunConfig::from_toml_str("", "x.cfg").unwrap();
        assert_eq!(c, RunConfig::default());
    }

    #[test]
    fn values_and_derived_frequencies() {
        let c = RunConfig::from_toml_str(
            "n_high = 2.0\nperiods = 3\npump_rabi_over_gamma10 = 0.01\ncoupling_k_rad_s = 100000\n",
            "x.cfg",
        )
        .unwrap();
        assert_eq!(c.n_high, 2.0);
        assert_eq!(c.periods, 3);
        assert_eq!(c.coupling_k_rad_s, 1e5);
        let atom = c.atom().unwrap();
        let pump = c.pump();
        assert!((pump.rabi_g1 - 0.01 * c.gamma10_rad_s).abs() < 1e-6);
        // Raman line center lands on the design frequency.
        let center = pump.frequency(&atom).0 - atom.omega20.0;
        assert!((center / c.omega0().0 - 1.0).abs() < 1e-15);
        assert_eq!(c.stack().unwrap().len(), 2 * (2 * 3 + 1) + c.defect_slices);
    }

    #[test]
    fn errors_point_at_the_line() {
        let text = "n_high = 2.35\n\nn_low = -1.0\n";
        match RunConfig::from_toml_str(text, "bad.cfg") {
            Err(Error::Config { path, line, message }) => {
                assert_eq!(path, "bad.cfg");
                assert_eq!(line, 3);
                assert!(message.contains("n_low"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        match RunConfig::from_toml_str("periods = 10\nbogus_key = 1\n", "bad.cfg") {
            Err(Error::Config { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("bogus_key"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        match RunConfig::from_toml_str("periods = \"ten\"\n", "bad.cfg") {
            Err(Error::Config { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        let e = RunConfig::from_toml_str("gamma20_over_gamma10 = 1.5\n", "bad.cfg").unwrap_err();
        assert_eq!(e.category(), crate::ErrorCategory::Config);
        let e = RunConfig::from_toml_str("pump_detuning_over_gamma10 = 0.0\n", "bad.cfg").unwrap_err();
        assert_eq!(e.category(), crate::ErrorCategory::Config);
    }

    #[test]
    fn missing_file_is_io() {
        let e = RunConfig::load(Path::new("/nonexistent/dir/x.cfg")).unwrap_err();
        assert_eq!(e.category(), crate::ErrorCategory::Io);
        assert!(e.to_string().contains("/nonexistent/dir/x.cfg"));
    }
}
