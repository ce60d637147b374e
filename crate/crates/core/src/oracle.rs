//! Closed-form references that share no code with the solvers they check.
//!
//! These back the unit tests, the acceptance suite and `pcraman validate`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::units::ComplexIndex;

/// `(T, R)` of a single slab of index `n` and thickness `t` in vacuum at
/// vacuum wavelength `lambda`, from the Fresnel coefficients summed as an
/// Airy series.
pub fn slab_airy(n: ComplexIndex, t: f64, lambda: f64) -> (f64, f64) {
    let n = n.to_complex();
    let one = Complex64::new(1.0, 0.0);
    let r01 = (one - n) / (one + n);
    let r12 = (n - one) / (n + one);
    let t01 = 2.0 * one / (one + n);
    let t12 = 2.0 * n / (n + one);
    let delta = 2.0 * PI * n * t / lambda;
    let round_trip = (Complex64::i() * 2.0 * delta).exp();
    let denom = one + r01 * r12 * round_trip;
    let r = (r01 + r12 * round_trip) / denom;
    let tt = t01 * t12 * (Complex64::i() * delta).exp() / denom;
    (tt.norm_sqr(), r.norm_sqr())
}

/// Reflectance at the design wavelength of the quarter-wave stack
/// `(HL)^M H` between media of index `n_in` and `n_out`.
///
/// Each quarter-wave layer inverts the load admittance, `Y → n²/Y`, so the
/// stack presents `Y = (n_H/n_L)^{2M}·n_H²/n_out` to the incident side.
pub fn quarter_wave_mirror_reflectance(n_h: f64, n_l: f64, m: usize, n_in: f64, n_out: f64) -> f64 {
    let y = (n_h / n_l).powi(2 * m as i32) * n_h * n_h / n_out;
    ((n_in - y) / (n_in + y)).powi(2)
}

/// Airy transmittance of a passive Fabry-Perot with mirror reflectance `r`.
pub fn airy(r: f64, phi: f64) -> f64 {
    let coeff = 4.0 * r / (1.0 - r).powi(2);
    1.0 / (1.0 + coeff * (phi / 2.0).sin().powi(2))
}

/// Overlap factor for `k₁ = k₂ = π/d`: `∫sin³ / ∫sin² = (4/3)/(π/2)`.
pub fn half_wave_overlap() -> f64 {
    8.0 / (3.0 * PI)
}

/// Composite Simpson rule with `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = if n % 2 == 1 { n + 1 } else { n };
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Lorentzian `baseline + height·w²/((x−x₀)² + w²)` with half width `w`.
pub fn lorentzian(x: f64, center: f64, half_width: f64, height: f64, baseline: f64) -> f64 {
    let w2 = half_width * half_width;
    baseline + height * w2 / ((x - center).powi(2) + w2)
}
