//! CSV / JSON / SVG emission.
//!
//! Numbers are written with 17 significant digits so that CSV files parse
//! back to the same `f64` bits.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use crate::analysis::{find_narrow_feature, Channel, RabiScan};
use crate::error::{Error, Result};
use crate::spectrum::Spectrum;

pub const SPECTRUM_HEADER: &str = "omega_rad_s,detuning_over_gamma10,T,R";
pub const SCAN_HEADER: &str = "g1_over_gamma10,t_max,r_max";

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn spectrum_csv(spec: &Spectrum) -> String {
    let mut out = String::with_capacity(80 * (spec.len() + 1));
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for (((w, det), t), r) in spec
        .omegas
        .iter()
        .zip(spec.detunings_over_gamma10())
        .zip(&spec.t_values)
        .zip(&spec.r_values)
    {
        let _ = writeln!(out, "{},{},{},{}", num(*w), num(det), num(*t), num(*r));
    }
    out
}

pub fn scan_csv(scan: &RabiScan, gamma10: f64) -> String {
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for ((g, t), r) in scan.g1_values.iter().zip(&scan.t_max).zip(&scan.r_max) {
        let _ = writeln!(out, "{},{},{}", num(g / gamma10), num(*t), num(*r));
    }
    out
}

#[derive(Serialize)]
struct SpectrumJson<'a> {
    omegas: &'a [f64],
    t: &'a [f64],
    r: &'a [f64],
    config_digest: &'a str,
}

pub fn spectrum_json(spec: &Spectrum) -> String {
    serde_json::to_string_pretty(&SpectrumJson {
        omegas: &spec.omegas,
        t: &spec.t_values,
        r: &spec.r_values,
        config_digest: &spec.metadata.config_digest,
    })
    .expect("plain data serializes")
}

pub fn scan_json(scan: &RabiScan, config_digest: &str) -> String {
    #[derive(Serialize)]
    struct ScanJson<'a> {
        #[serde(flatten)]
        scan: &'a RabiScan,
        config_digest: &'a str,
    }
    serde_json::to_string_pretty(&ScanJson { scan, config_digest }).expect("plain data serializes")
}

/// Writes `contents` to `path`, creating parent directories.
pub fn write_text(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, contents).map_err(|e| Error::io(path, e))
}

// --- SVG -------------------------------------------------------------------

struct Series<'a> {
    label: &'a str,
    x: &'a [f64],
    y: &'a [f64],
    color: &'a str,
}

struct Panel<'a> {
    title: &'a str,
    xlabel: &'a str,
    ylabel: &'a str,
    series: Vec<Series<'a>>,
    log_y: bool,
}

/// Roughly five round tick positions covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) {
        return vec![lo];
    }
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| span / s <= 6.0)
        .unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e4 || v.abs() < 1e-3 {
        format!("{v:.0e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn render_panel(out: &mut String, p: &Panel, x0: f64, y0: f64, w: f64, h: f64) {
    // Non-positive values have no place on a log axis and are skipped.
    let tf = |v: f64| if !p.log_y { v } else if v > 0.0 { v.log10() } else { f64::NAN };
    let finite = |v: &f64| v.is_finite();
    let xs: Vec<f64> = p.series.iter().flat_map(|s| s.x.iter().copied()).filter(finite).collect();
    let ys: Vec<f64> = p
        .series
        .iter()
        .flat_map(|s| s.y.iter().map(|&v| tf(v)))
        .filter(finite)
        .collect();
    let (mut xmin, mut xmax) = xs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, &v| (a.0.min(v), a.1.max(v)));
    let (mut ymin, mut ymax) = ys.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, &v| (a.0.min(v), a.1.max(v)));
    if !xmin.is_finite() {
        (xmin, xmax) = (0.0, 1.0);
    }
    if !ymin.is_finite() {
        (ymin, ymax) = (0.0, 1.0);
    }
    if xmax <= xmin {
        xmax = xmin + 1.0;
    }
    if ymax <= ymin {
        ymax = ymin + 1.0;
    }
    let pad = 0.05 * (ymax - ymin);
    let (ymin, ymax) = (ymin - pad, ymax + pad);
    let px = |v: f64| x0 + (v - xmin) / (xmax - xmin) * w;
    let py = |v: f64| y0 + h - (v - ymin) / (ymax - ymin) * h;

    let _ = writeln!(
        out,
        r#"<rect x="{x0:.1}" y="{y0:.1}" width="{w:.1}" height="{h:.1}" fill="none" stroke="black"/>"#
    );
    for t in ticks(xmin, xmax) {
        let x = px(t);
        let _ = writeln!(
            out,
            r#"<line x1="{x:.1}" y1="{:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/><text x="{x:.1}" y="{:.1}" text-anchor="middle" font-size="11">{}</text>"#,
            y0 + h,
            y0 + h - 5.0,
            y0 + h + 15.0,
            fmt_tick(t)
        );
    }
    for t in ticks(ymin, ymax) {
        let y = py(t);
        let label = if p.log_y { fmt_tick(10f64.powf(t)) } else { fmt_tick(t) };
        let _ = writeln!(
            out,
            r#"<line x1="{x0:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="black"/><text x="{:.1}" y="{:.1}" text-anchor="end" font-size="11">{}</text>"#,
            x0 + 5.0,
            x0 - 4.0,
            y + 4.0,
            label
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="13">{}</text>"#,
        x0 + w / 2.0,
        y0 - 8.0,
        esc(p.title)
    );
    let _ = writeln!(
        out,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" font-size="12">{}</text>"#,
        x0 + w / 2.0,
        y0 + h + 34.0,
        esc(p.xlabel)
    );
    let _ = writeln!(
        out,
        r#"<text transform="translate({:.1},{:.1}) rotate(-90)" text-anchor="middle" font-size="12">{}</text>"#,
        x0 - 48.0,
        y0 + h / 2.0,
        esc(p.ylabel)
    );
    for (k, s) in p.series.iter().enumerate() {
        let mut pts = String::new();
        for (&x, &y) in s.x.iter().zip(s.y) {
            let ty = tf(y);
            if x.is_finite() && ty.is_finite() {
                let _ = write!(pts, "{:.2},{:.2} ", px(x), py(ty));
            }
        }
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{}" stroke-width="1.2" points="{}"/>"#,
            s.color,
            pts.trim_end()
        );
        if p.series.len() > 1 {
            let ly = y0 + h - 40.0 + 16.0 * k as f64;
            let _ = writeln!(
                out,
                r#"<line x1="{:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{}"/><text x="{:.1}" y="{:.1}" font-size="11">{}</text>"#,
                x0 + w - 90.0,
                x0 + w - 70.0,
                s.color,
                x0 + w - 65.0,
                ly + 4.0,
                esc(s.label)
            );
        }
    }
}

fn svg_document(width: f64, height: f64, body: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<g font-family=\"sans-serif\">\n{body}</g>\n</svg>\n"
    )
}

/// T and R against `Ω₂/γ₁₀`, side by side; a second row zooms in on the
/// narrow central feature when there is one.
pub fn spectrum_svg(spec: &Spectrum) -> String {
    let det = spec.detunings_over_gamma10();
    let zoom = find_narrow_feature(spec, Channel::T)
        .map(|p| 10.0 * p.fwhm / spec.metadata.gamma10)
        .filter(|&hw| det.iter().any(|d| d.abs() > hw));
    let mut body = String::new();
    let channels = [
        ("transmission", "T", &spec.t_values, "#1f4e9c"),
        ("reflection", "R", &spec.r_values, "#b22222"),
    ];
    for (row, window) in [None, zoom].into_iter().enumerate() {
        if row == 1 && window.is_none() {
            break;
        }
        for (i, (name, ylabel, y, color)) in channels.into_iter().enumerate() {
            let keep: Vec<usize> = (0..det.len()).filter(|&j| window.is_none_or(|hw| det[j].abs() <= hw)).collect();
            let xs: Vec<f64> = keep.iter().map(|&j| det[j]).collect();
            let ys: Vec<f64> = keep.iter().map(|&j| y[j]).collect();
            let letter = [["a", "b"], ["c", "d"]][row][i];
            let title = match window {
                None => format!("({letter}) {name}"),
                Some(hw) => format!("({letter}) {name}, |Ω₂| < {} γ₁₀", fmt_tick(hw)),
            };
            let panel = Panel {
                title: &title,
                xlabel: "Ω₂/γ₁₀",
                ylabel,
                series: vec![Series {
                    label: ylabel,
                    x: &xs,
                    y: &ys,
                    color,
                }],
                log_y: false,
            };
            render_panel(&mut body, &panel, 70.0 + 440.0 * i as f64, 40.0 + 380.0 * row as f64, 360.0, 280.0);
        }
    }
    let height = if zoom.is_some() { 760.0 } else { 380.0 };
    svg_document(900.0, height, &body)
}

/// `T_max` and `R_max` against `G₁/γ₁₀` on a log axis.
pub fn scan_svg(scan: &RabiScan, gamma10: f64) -> String {
    let g: Vec<f64> = scan.g1_values.iter().map(|v| v / gamma10).collect();
    let panel = Panel {
        title: "extremum heights at line center",
        xlabel: "G₁/γ₁₀",
        ylabel: "T_max, R_max",
        series: vec![
            Series {
                label: "T_max",
                x: &g,
                y: &scan.t_max,
                color: "#1f4e9c",
            },
            Series {
                label: "R_max",
                x: &g,
                y: &scan.r_max,
                color: "#b22222",
            },
        ],
        log_y: true,
    };
    let mut body = String::new();
    render_panel(&mut body, &panel, 80.0, 40.0, 520.0, 320.0);
    svg_document(660.0, 420.0, &body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::SpectrumMeta;

    fn spec(n: usize) -> Spectrum {
        let omegas: Vec<f64> = (0..n).map(|i| 3.2e15 + 1e6 * i as f64 / 3.0).collect();
        let t = (0..n).map(|i| 1.0 / (1.0 + i as f64).sqrt()).collect();
        let r = (0..n).map(|i| std::f64::consts::PI * i as f64 * 1e-7).collect();
        Spectrum::new(
            omegas,
            t,
            r,
            SpectrumMeta {
                config_digest: "abc".into(),
                line_center: 3.2e15,
                gamma10: 6.283185307179586e8,
            },
        )
        .unwrap()
    }

    fn parse(csv: &str) -> Vec<Vec<f64>> {
        csv.lines()
            .skip(1)
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect()
    }

    #[test]
    fn empty_spectrum_is_header_only() {
        assert_eq!(spectrum_csv(&spec(0)), format!("{SPECTRUM_HEADER}\n"));
        assert_eq!(scan_csv(&RabiScan::default(), 1.0), format!("{SCAN_HEADER}\n"));
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let s = spec(257);
        let rows = parse(&spectrum_csv(&s));
        assert_eq!(rows.len(), 257);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row[0].to_bits(), s.omegas[i].to_bits());
            assert_eq!(row[2].to_bits(), s.t_values[i].to_bits());
            assert_eq!(row[3].to_bits(), s.r_values[i].to_bits());
        }
    }

    #[test]
    fn json_has_the_contract_keys() {
        let v: serde_json::Value = serde_json::from_str(&spectrum_json(&spec(3))).unwrap();
        for key in ["omegas", "t", "r", "config_digest"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["t"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let svg = spectrum_svg(&spec(50));
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.matches("<polyline").count() >= 2);
        let scan = RabiScan {
            g1_values: vec![0.0, 1.0, 2.0],
            t_max: vec![1.0, 10.0, 0.5],
            r_max: vec![0.0, 9.0, 1.2],
            ..Default::default()
        };
        let svg = scan_svg(&scan, 1.0);
        assert_eq!(svg.matches("<polyline").count(), 2);
        // Empty data must not produce NaN coordinates.
        assert!(!spectrum_svg(&spec(0)).contains("NaN"));
    }

    #[test]
    fn tick_positions_are_round() {
        assert_eq!(ticks(0.0, 1.0), vec![0.0, 0.2, 0.4, 0.6000000000000001, 0.8, 1.0]);
        assert_eq!(ticks(-0.5, 0.5).len(), 5);
    }

    #[test]
    fn unwritable_path_is_io_error() {
        let dir = tempfile::tempdir().unwrap();
        let blocker = dir.path().join("file");
        std::fs::write(&blocker, "x").unwrap();
        let e = write_text(&blocker.join("sub/out.csv"), "x").unwrap_err();
        assert_eq!(e.category(), crate::ErrorCategory::Io);
    }
}
