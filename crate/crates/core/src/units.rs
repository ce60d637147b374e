//! SI quantities shared across the crate.
//!
//! Angular frequencies are rad/s, lengths are metres. Fields follow the
//! forward-wave convention `E ∝ A·exp(+ik(z − z_j))`, so a medium with
//! `Im n < 0` amplifies and `Im n > 0` absorbs.

use std::fmt;
use std::ops::{Add, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Angular frequency (or detuning) in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
pub struct Frequency(pub f64);

impl Frequency {
    pub const fn rad_per_s(value: f64) -> Self {
        Frequency(value)
    }

    pub fn from_hz(hz: f64) -> Self {
        Frequency(2.0 * std::f64::consts::PI * hz)
    }

    /// Carrier frequency of light with the given vacuum wavelength.
    pub fn from_wavelength(wavelength: f64) -> Self {
        Frequency(2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / wavelength)
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn wavelength(self) -> f64 {
        2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / self.0
    }

    /// Vacuum wavenumber ω/c in 1/m.
    pub fn vacuum_wavenumber(self) -> f64 {
        self.0 / SPEED_OF_LIGHT
    }
}

impl Add for Frequency {
    type Output = Frequency;
    fn add(self, rhs: Frequency) -> Frequency {
        Frequency(self.0 + rhs.0)
    }
}

impl Sub for Frequency {
    type Output = Frequency;
    fn sub(self, rhs: Frequency) -> Frequency {
        Frequency(self.0 - rhs.0)
    }
}

/// Complex refractive index `re + i·im`; gain media have `im < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexIndex {
    pub re: f64,
    pub im: f64,
}

impl ComplexIndex {
    pub const VACUUM: ComplexIndex = ComplexIndex { re: 1.0, im: 0.0 };

    pub const fn new(re: f64, im: f64) -> Self {
        ComplexIndex { re, im }
    }

    pub const fn real(re: f64) -> Self {
        ComplexIndex { re, im: 0.0 }
    }

    pub fn is_lossless(self) -> bool {
        self.im == 0.0
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl From<Complex64> for ComplexIndex {
    fn from(c: Complex64) -> Self {
        ComplexIndex { re: c.re, im: c.im }
    }
}

impl From<ComplexIndex> for Complex64 {
    fn from(n: ComplexIndex) -> Self {
        n.to_complex()
    }
}

impl fmt::Display for ComplexIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im < 0.0 {
            write!(f, "{}-{}i", self.re, -self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}
