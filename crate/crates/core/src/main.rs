use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pcraman::analysis::{find_narrow_feature, scan_rabi, Channel, PeakReport};
use pcraman::config::RunConfig;
use pcraman::fpc::{classify_regime, fpc_linewidth, fpc_peak, fpc_reflectance, fpc_transmittance, FpcParams};
use pcraman::output;
use pcraman::validate::run_suite;
use pcraman::Error;

/// Probe spectra of a photonic-crystal cavity with a Raman-gain defect.
#[derive(Parser)]
#[command(name = "pcraman", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration (flat TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Skip the SVG plot.
    #[arg(long)]
    no_plot: bool,
}

#[derive(Subcommand)]
enum Command {
    /// T and R of the probe around the Raman line: <stem>_T_R.csv + <stem>.svg
    Spectrum(RunArgs),
    /// Central T/R extrema against the pump Rabi frequency: <stem>_maxima.csv + <stem>.svg
    Scan(RunArgs),
    /// Run the oracle suite.
    Validate,
    /// Evaluate the analytic Fabry-Perot model.
    Fpc {
        /// Mirror intensity transmittance T_M.
        #[arg(long = "tm")]
        t_m: f64,
        /// Mirror intensity reflectance R_M.
        #[arg(long = "rm")]
        r_m: f64,
        /// Single-pass intensity gain alpha*d.
        #[arg(long = "alphad")]
        alpha_d: f64,
        /// Round-trip phase.
        #[arg(long)]
        phi: f64,
        /// Dispersion factor eta.
        #[arg(long, default_value_t = 0.0)]
        eta: f64,
        /// Defect thickness in m (only sets the linewidth scale).
        #[arg(long = "d-m", default_value_t = 589.6e-9 / 2.0)]
        d: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

fn describe(name: &str, p: &Option<PeakReport>, center: f64, gamma10: f64) {
    match p {
        Some(p) => println!(
            "{name}: {:?} height {:.6e} at {:+.4e} gamma10, fwhm {:.4e} gamma10 (baseline {:.4e})",
            p.kind,
            p.height,
            (center - p.center_omega) / gamma10,
            p.fwhm / gamma10,
            p.baseline
        ),
        None => println!("{name}: no narrow feature"),
    }
}

fn data_path(args: &RunArgs, stem: &str, suffix: &str) -> PathBuf {
    let ext = match args.format {
        Format::Csv => "csv",
        Format::Json => "json",
    };
    args.out.join(format!("{stem}{suffix}.{ext}"))
}

fn announce(path: &Path) {
    println!("wrote {}", path.display());
}

fn spectrum(args: &RunArgs) -> Result<(), Error> {
    let cfg = RunConfig::load(&args.config)?;
    let spec = cfg.run_spectrum()?;
    let data = data_path(args, &cfg.output_stem, "_T_R");
    let text = match args.format {
        Format::Csv => output::spectrum_csv(&spec),
        Format::Json => output::spectrum_json(&spec),
    };
    output::write_text(&data, &text)?;
    announce(&data);
    if !args.no_plot {
        let svg = args.out.join(format!("{}.svg", cfg.output_stem));
        output::write_text(&svg, &output::spectrum_svg(&spec))?;
        announce(&svg);
    }
    let center = spec.metadata.line_center;
    describe("T", &find_narrow_feature(&spec, Channel::T), center, cfg.gamma10_rad_s);
    describe("R", &find_narrow_feature(&spec, Channel::R), center, cfg.gamma10_rad_s);
    println!("config digest {}", spec.metadata.config_digest);
    Ok(())
}

fn scan(args: &RunArgs) -> Result<(), Error> {
    let cfg = RunConfig::load(&args.config)?;
    let gamma10 = cfg.gamma10_rad_s;
    let result = scan_rabi(&cfg, &cfg.scan.g1_grid(gamma10))?;
    let data = data_path(args, &cfg.output_stem, "_maxima");
    let text = match args.format {
        Format::Csv => output::scan_csv(&result, gamma10),
        Format::Json => output::scan_json(&result, &cfg.digest()),
    };
    output::write_text(&data, &text)?;
    announce(&data);
    if !args.no_plot {
        let svg = args.out.join(format!("{}.svg", cfg.output_stem));
        output::write_text(&svg, &output::scan_svg(&result, gamma10))?;
        announce(&svg);
    }
    if let Some(g) = result.truncated_at {
        println!("scan truncated: oscillation threshold at G1 = {:.4e} gamma10", g / gamma10);
    }
    Ok(())
}

fn validate() -> bool {
    let results = run_suite();
    for r in &results {
        println!("{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} oracles, {} failed", results.len(), failed);
    failed == 0
}

/// 12 significant digits, printed in shortest form.
fn short(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn fpc(p: FpcParams, format: Format) -> Result<(), Error> {
    p.validate()?;
    let t = fpc_transmittance(&p)?;
    let r = fpc_reflectance(&p)?;
    let regime = classify_regime(&p);
    let peak = fpc_peak(&p).ok();
    let width = fpc_linewidth(&p).ok();
    match format {
        Format::Csv => {
            println!("T={}", short(t));
            println!("R={}", short(r));
            println!("regime={regime:?}");
            println!("threshold_ratio={}", short(p.threshold_ratio()));
            if let Some(pk) = peak {
                println!("T_peak={}", short(pk.exact));
                println!("T_peak_small_gain={}", short(pk.small_gain));
            }
            if let Some(w) = width {
                println!("linewidth_rad_s={}", short(w.narrowed));
                println!("empty_linewidth_rad_s={}", short(w.empty));
            }
        }
        Format::Json => {
            let v = serde_json::json!({
                "T": t,
                "R": r,
                "regime": format!("{regime:?}"),
                "threshold_ratio": p.threshold_ratio(),
                "T_peak": peak.map(|x| x.exact),
                "T_peak_small_gain": peak.map(|x| x.small_gain),
                "linewidth_rad_s": width.map(|w| w.narrowed),
                "empty_linewidth_rad_s": width.map(|w| w.empty),
            });
            println!("{}", serde_json::to_string_pretty(&v).expect("plain data serializes"));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum(a) => spectrum(a),
        Command::Scan(a) => scan(a),
        Command::Validate => {
            return if validate() { ExitCode::SUCCESS } else { ExitCode::from(1) };
        }
        Command::Fpc {
            t_m,
            r_m,
            alpha_d,
            phi,
            eta,
            d,
            format,
        } => fpc(
            FpcParams {
                t_m: *t_m,
                r_m: *r_m,
                alpha_d: *alpha_d,
                phi: *phi,
                eta: *eta,
                d: *d,
            },
            *format,
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let cat = e.category();
            eprintln!("error[{}]: {e}", cat.as_str());
            ExitCode::from(cat.exit_code() as u8)
        }
    }
}
