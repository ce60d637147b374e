//! Narrow-feature extraction and Rabi-frequency scans.

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{invalid, Error, Result};
use crate::spectrum::{linspace, ProbeSolver, Spectrum};

/// Relative contrast below which a spectrum counts as featureless.
pub const MIN_CONTRAST: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FeatureKind {
    Peak,
    Dip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    T,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakReport {
    pub center_omega: f64,
    /// T or R at the interpolated extremum.
    pub height: f64,
    /// Full width at half contrast relative to `baseline`, rad/s.
    pub fwhm: f64,
    pub kind: FeatureKind,
    /// Median of the outer 20% of the window.
    pub baseline: f64,
}

impl PeakReport {
    /// `|height − baseline|`.
    pub fn contrast(&self) -> f64 {
        (self.height - self.baseline).abs()
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Vertex of the parabola through three points, as `(x, y)`.
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> Option<(f64, f64)> {
    // Work relative to the middle sample to keep the numbers small.
    let (h0, h2) = (x[0] - x[1], x[2] - x[1]);
    let (d0, d2) = (y[0] - y[1], y[2] - y[1]);
    // y − y1 = a u² + b u through (h0, d0) and (h2, d2)
    let det = h0 * h2 * (h0 - h2);
    if det == 0.0 {
        return None;
    }
    let a = (d0 * h2 - d2 * h0) / det;
    let b = (d2 * h0 * h0 - d0 * h2 * h2) / det;
    if a == 0.0 {
        return None;
    }
    let u = -b / (2.0 * a);
    if u < h0 || u > h2 {
        return None;
    }
    Some((x[1] + u, y[1] + a * u * u + b * u))
}

/// Narrow peak or dip in `y(x)`; `None` when nothing stands out from the
/// baseline by more than [`MIN_CONTRAST`].
pub fn find_feature(x: &[f64], y: &[f64]) -> Option<PeakReport> {
    let n = x.len();
    if n < 3 || y.len() != n {
        return None;
    }
    let (lo, hi) = (x[0], x[n - 1]);
    let edge = 0.1 * (hi - lo);
    let outer: Vec<f64> = x
        .iter()
        .zip(y)
        .filter(|(&xi, _)| xi <= lo + edge || xi >= hi - edge)
        .map(|(_, &yi)| yi)
        .collect();
    let baseline = median(outer);

    let (i_ext, _) = y
        .iter()
        .enumerate()
        .map(|(i, &v)| (i, (v - baseline).abs()))
        .fold((0, f64::NEG_INFINITY), |acc, c| if c.1 > acc.1 { c } else { acc });
    let y_ext = y[i_ext];
    let scale = baseline.abs().max(y_ext.abs());
    if !(scale > 0.0) || (y_ext - baseline).abs() < MIN_CONTRAST * scale {
        return None;
    }
    let kind = if y_ext > baseline { FeatureKind::Peak } else { FeatureKind::Dip };

    let (center, height) = if i_ext > 0 && i_ext + 1 < n {
        parabola_vertex(
            [x[i_ext - 1], x[i_ext], x[i_ext + 1]],
            [y[i_ext - 1], y_ext, y[i_ext + 1]],
        )
        .unwrap_or((x[i_ext], y_ext))
    } else {
        (x[i_ext], y_ext)
    };

    let half = baseline + 0.5 * (height - baseline);
    let inside = |v: f64| match kind {
        FeatureKind::Peak => v > half,
        FeatureKind::Dip => v < half,
    };
    let cross = |i: usize, j: usize| x[i] + (half - y[i]) * (x[j] - x[i]) / (y[j] - y[i]);
    let left = (1..=i_ext).rev().find(|&i| !inside(y[i - 1])).map(|i| cross(i - 1, i));
    let right = (i_ext..n - 1).find(|&i| !inside(y[i + 1])).map(|i| cross(i, i + 1));
    let fwhm = match (left, right) {
        (Some(l), Some(r)) => r - l,
        (Some(l), None) => 2.0 * (center - l),
        (None, Some(r)) => 2.0 * (r - center),
        (None, None) => return None,
    };
    if !(fwhm > 0.0) {
        return None;
    }
    Some(PeakReport {
        center_omega: center,
        height,
        fwhm,
        kind,
        baseline,
    })
}

pub fn find_narrow_feature(spec: &Spectrum, channel: Channel) -> Option<PeakReport> {
    let y = match channel {
        Channel::T => &spec.t_values,
        Channel::R => &spec.r_values,
    };
    // T and R are intensities; the parabolic vertex may dip just below 0.
    find_feature(&spec.omegas, y).map(|mut p| {
        p.height = p.height.max(0.0);
        p
    })
}

/// Sub-spectrum with `lo <= ω <= hi`.
pub fn restrict(spec: &Spectrum, lo: f64, hi: f64) -> Spectrum {
    let keep: Vec<usize> = (0..spec.len()).filter(|&i| spec.omegas[i] >= lo && spec.omegas[i] <= hi).collect();
    Spectrum {
        omegas: keep.iter().map(|&i| spec.omegas[i]).collect(),
        t_values: keep.iter().map(|&i| spec.t_values[i]).collect(),
        r_values: keep.iter().map(|&i| spec.r_values[i]).collect(),
        metadata: spec.metadata.clone(),
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RabiScan {
    /// Pump Rabi frequencies, rad/s.
    pub g1_values: Vec<f64>,
    pub t_max: Vec<f64>,
    pub r_max: Vec<f64>,
    /// Feature type of the central T structure; `None` when flat.
    pub t_kind: Vec<Option<FeatureKind>>,
    pub r_kind: Vec<Option<FeatureKind>>,
    /// First G₁ that hit the oscillation threshold, if the scan stopped early.
    pub truncated_at: Option<f64>,
}

impl RabiScan {
    pub fn len(&self) -> usize {
        self.g1_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g1_values.is_empty()
    }
}

/// Extremum heights of the central T and R features for one spectrum; the
/// line-center value stands in when there is no feature.
pub fn central_extrema(spec: &Spectrum) -> (f64, f64, Option<FeatureKind>, Option<FeatureKind>) {
    let center = spec.metadata.line_center;
    let i0 = (0..spec.len())
        .min_by(|&a, &b| (spec.omegas[a] - center).abs().total_cmp(&(spec.omegas[b] - center).abs()))
        .unwrap_or(0);
    let t = find_narrow_feature(spec, Channel::T);
    let r = find_narrow_feature(spec, Channel::R);
    (
        t.map_or(spec.t_values[i0], |p| p.height),
        r.map_or(spec.r_values[i0], |p| p.height),
        t.map(|p| p.kind),
        r.map(|p| p.kind),
    )
}

/// T and R extremum heights at line center for each `G₁` in `g1_grid`
/// (rad/s), using the configuration's scan window.
///
/// Stops at the first point whose spectrum reaches the oscillation
/// threshold and records it in `truncated_at`.
pub fn scan_rabi(config: &RunConfig, g1_grid: &[f64]) -> Result<RabiScan> {
    if g1_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("G1 grid must be strictly increasing"));
    }
    if g1_grid.iter().any(|g| !(*g >= 0.0)) {
        return Err(invalid("G1 values must be non-negative"));
    }
    let stack = config.stack()?;
    let atom = config.atom()?;
    let half = config.scan.window_halfspan_over_gamma10 * atom.gamma10;
    let offsets = linspace(-half, half, config.scan.window_points);

    let mut scan = RabiScan::default();
    for &g1 in g1_grid {
        let pump = config.pump_with(g1);
        let spec = match ProbeSolver::new(&stack, &atom, &pump).and_then(|s| s.spectrum_around(&offsets)) {
            Ok(s) => s,
            Err(e) if matches!(e.root(), Error::ThresholdReached(_)) => {
                log::warn!("scan stopped at G1 = {g1:.4e} rad/s: {e}");
                scan.truncated_at = Some(g1);
                break;
            }
            Err(e) => return Err(e),
        };
        let (t, r, tk, rk) = central_extrema(&spec);
        scan.g1_values.push(g1);
        scan.t_max.push(t);
        scan.r_max.push(r);
        scan.t_kind.push(tk);
        scan.r_kind.push(rk);
    }
    Ok(scan)
}
