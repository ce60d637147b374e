//! Probe-light transmission and reflection of a one-dimensional
//! photonic-crystal cavity whose defect layer holds a pumped Λ-type Raman
//! gain medium.
//!
//! The crate is organised bottom-up:
//!
//! * [`units`], [`stack`]: SI quantities and the `(HL)^M H D H (LH)^M` geometry,
//! * [`raman`]: Raman susceptibility, probe index perturbation, gain and `η`,
//! * [`tmm`], [`spectrum`]: transfer-matrix fields and probe spectra,
//! * [`fpc`]: the reduced Fabry-Perot model used to interpret spectra,
//! * [`analysis`], [`config`], [`output`], [`validate`]: peak metrics,
//!   Rabi-frequency scans, run configuration, CSV/JSON/SVG output and the
//!   oracle suite behind the `pcraman` command.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod config;
pub mod error;
pub mod fpc;
pub mod oracle;
pub mod output;
pub mod quad;
pub mod raman;
pub mod spectrum;
pub mod stack;
pub mod tmm;
pub mod units;
pub mod validate;

pub use error::{Error, ErrorCategory, Result};
pub use units::{ComplexIndex, Frequency, SPEED_OF_LIGHT};
