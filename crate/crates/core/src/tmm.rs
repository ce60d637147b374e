//! Recurrent solution for the counter-propagating amplitudes in each layer.
//!
//! In medium `j` the field is `A_j e^{ik_j(z−z_j)} + B_j e^{−ik_j(z−z_j)}`
//! with `z_j` the medium's left edge and `k_j = n_j ω/c`. Continuity of E
//! and dE/dz at each interface links neighbouring media. The sweep starts in
//! the exit half-space with `A = 1, B = 0` and walks back to the input,
//! where the result is rescaled to unit incident amplitude.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::stack::{compensated_sum, LayerStack};
use crate::units::{ComplexIndex, Frequency};

/// Largest allowed `|Im k|·t` in a single layer.
pub const MAX_LAYER_EXPONENT: f64 = 50.0;

/// Transmittance above which the cavity is treated as oscillating.
pub const THRESHOLD_TRANSMITTANCE: f64 = 1e15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerAmplitudes {
    /// Forward amplitude at the layer's left edge.
    pub a: Complex64,
    /// Backward amplitude at the layer's left edge.
    pub b: Complex64,
    /// Left edge, m.
    pub z0: f64,
    /// Complex wavenumber, 1/m.
    pub k: Complex64,
}

impl LayerAmplitudes {
    fn field(&self, z: f64) -> Complex64 {
        let phase = Complex64::i() * self.k * (z - self.z0);
        self.a * phase.exp() + self.b * (-phase).exp()
    }

    fn derivative(&self, z: f64) -> Complex64 {
        let phase = Complex64::i() * self.k * (z - self.z0);
        Complex64::i() * self.k * (self.a * phase.exp() - self.b * (-phase).exp())
    }
}

/// Amplitudes in every medium at one frequency.
///
/// `per_layer[0]` is the input half-space (`z0 = 0`), the last entry is the
/// exit half-space (`z0 = L`, `b = 0`); the stack layers sit in between.
#[derive(Debug, Clone)]
pub struct FieldSolution {
    pub per_layer: Vec<LayerAmplitudes>,
    /// Field transmission `A(L)/A₀`.
    pub t_coeff: Complex64,
    /// Field reflection `B(0)/A₀`.
    pub r_coeff: Complex64,
    pub frequency: Frequency,
}

impl FieldSolution {
    /// Intensity transmittance. Both half-spaces share one index, so no
    /// admittance factor is needed.
    pub fn transmittance(&self) -> f64 {
        self.t_coeff.norm_sqr()
    }

    pub fn reflectance(&self) -> f64 {
        self.r_coeff.norm_sqr()
    }

    pub fn incident_amplitude(&self) -> Complex64 {
        self.per_layer[0].a
    }

    fn medium_at(&self, z: f64) -> &LayerAmplitudes {
        // First medium whose left edge is beyond z, minus one.
        let idx = self.per_layer[1..].partition_point(|m| m.z0 <= z);
        &self.per_layer[idx]
    }

    /// E(z) anywhere, including the two half-spaces.
    pub fn field_at(&self, z: f64) -> Complex64 {
        self.medium_at(z).field(z)
    }

    pub fn field_derivative_at(&self, z: f64) -> Complex64 {
        self.medium_at(z).derivative(z)
    }

    /// Largest relative mismatch of E or dE/dz between the expressions of
    /// the two media meeting at each interface.
    pub fn interface_mismatch(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for pair in self.per_layer.windows(2) {
            let (left, right) = (&pair[0], &pair[1]);
            let z = right.z0;
            let e_l = left.field(z);
            let e_r = right.field(z);
            let d_l = left.derivative(z);
            let d_r = right.derivative(z);
            let e_scale = e_l.norm().max(e_r.norm()).max(f64::MIN_POSITIVE);
            let d_scale = d_l.norm().max(d_r.norm()).max(f64::MIN_POSITIVE);
            // Scale by the local amplitude size so nodes do not blow up the ratio.
            let amp = (right.a.norm() + right.b.norm()).max(f64::MIN_POSITIVE);
            worst = worst
                .max((e_l - e_r).norm() / e_scale.max(amp))
                .max((d_l - d_r).norm() / d_scale.max(amp * right.k.norm()));
        }
        worst
    }
}

/// `e^{iθ} − 1` without cancellation for small `θ`.
#[inline]
fn expm1_i(theta: Complex64) -> Complex64 {
    let (sin, cos) = theta.re.sin_cos();
    let decay = (-theta.im).exp_m1();
    let half_sin = (0.5 * theta.re).sin();
    Complex64::new(decay * cos - 2.0 * half_sin * half_sin, (decay + 1.0) * sin)
}

/// One backward step across the interface from medium `j` (index `n`) into
/// `j+1` (index `n_next`), then back across medium `j`.
///
/// Both the interface mixing and the propagation are applied as small
/// increments on the amplitudes. Across a finely sliced gain region the
/// per-slice factors differ from 1 by ~1e-11, and forming them directly
/// would repeat nearly the same rounding error in every slice.
#[inline]
fn step_back(
    next_a: Complex64,
    next_b: Complex64,
    n_next: Complex64,
    n: Complex64,
    k0: f64,
    thickness: f64,
) -> (Complex64, Complex64) {
    let minus = (n - n_next) / (2.0 * n);
    let diff = minus * (next_b - next_a);
    let right_a = next_a + diff;
    let right_b = next_b - diff;
    if thickness == 0.0 {
        return (right_a, right_b);
    }
    let theta = n * (k0 * thickness);
    (right_a + right_a * expm1_i(-theta), right_b + right_b * expm1_i(theta))
}

fn wavenumber(index: Complex64, k0: f64, layer: usize) -> Result<Complex64> {
    if index.norm() == 0.0 || !index.re.is_finite() || !index.im.is_finite() {
        return Err(Error::InvalidMedium {
            layer,
            index: ComplexIndex::from(index).to_string(),
        });
    }
    Ok(index * k0)
}

fn check_exponent(k: Complex64, thickness: f64, layer: usize) -> Result<()> {
    let exponent = k.im.abs() * thickness;
    if exponent > MAX_LAYER_EXPONENT {
        return Err(Error::DivergingGain { layer, exponent });
    }
    Ok(())
}

fn finish(a0: Complex64, b0: Complex64) -> Result<(Complex64, Complex64)> {
    let t = 1.0 / a0;
    if !(t.norm_sqr().is_finite() && (b0 / a0).norm_sqr().is_finite()) {
        return Err(Error::Singularity("non-finite transfer amplitude (overflow in the sweep)"));
    }
    if t.norm_sqr() > THRESHOLD_TRANSMITTANCE {
        return Err(Error::ThresholdReached(format!(
            "transmittance {:.3e} exceeds {:.0e}",
            t.norm_sqr(),
            THRESHOLD_TRANSMITTANCE
        )));
    }
    Ok((t, b0 / a0))
}

/// Backward sweep over the stack with layer `j` carrying index `index_of(j)`.
///
/// Neighbouring layers with bit-identical index form one homogeneous run and
/// are crossed in a single step; a finely sliced but uniform defect then
/// costs no more rounding than an unsliced one. When `record` is given, the
/// amplitudes of every layer are filled in, each taken directly from the
/// left edge of its run.
fn sweep(
    stack: &LayerStack,
    index_of: impl Fn(usize) -> ComplexIndex,
    omega: Frequency,
    mut record: Option<&mut [LayerAmplitudes]>,
) -> Result<(Complex64, Complex64)> {
    let k0 = omega.vacuum_wavenumber();
    let layers = stack.layers();
    wavenumber(stack.surround_index().to_complex(), k0, layers.len() + 1)?;

    let mut a = Complex64::new(1.0, 0.0);
    let mut b = Complex64::new(0.0, 0.0);
    let n_out = stack.surround_index().to_complex();
    let mut n_next = n_out;
    let mut end = layers.len();
    while end > 0 {
        let index = index_of(end - 1);
        let mut start = end - 1;
        while start > 0 && index_of(start - 1) == index {
            start -= 1;
        }
        let k = wavenumber(index.to_complex(), k0, start + 1)?;
        for (j, layer) in layers.iter().enumerate().take(end).skip(start) {
            check_exponent(k, layer.thickness, j + 1)?;
        }
        let run_thickness = compensated_sum(layers[start..end].iter().map(|l| l.thickness));
        (a, b) = step_back(a, b, n_next, index.to_complex(), k0, run_thickness);
        if let Some(out) = record.as_deref_mut() {
            let mut offset = 0.0;
            for j in start..end {
                let phase = (Complex64::i() * k * offset).exp();
                out[j + 1].a = a * phase;
                out[j + 1].b = b / phase;
                out[j + 1].k = k;
                offset += layers[j].thickness;
            }
        }
        n_next = index.to_complex();
        end = start;
    }
    let (a0, b0) = step_back(a, b, n_next, n_out, k0, 0.0);
    if let Some(out) = record {
        out[0].a = a0;
        out[0].b = b0;
    }
    Ok((a0, b0))
}

/// Full amplitude solution at `omega`; with `unit_input` the amplitudes are
/// rescaled so the incident wave has `A₀ = 1`.
pub fn solve_fields(stack: &LayerStack, omega: Frequency, unit_input: bool) -> Result<FieldSolution> {
    let k_out = wavenumber(
        stack.surround_index().to_complex(),
        omega.vacuum_wavenumber(),
        stack.len() + 1,
    )?;
    let zero = Complex64::new(0.0, 0.0);
    let mut per_layer: Vec<LayerAmplitudes> = std::iter::once(0.0)
        .chain(stack.layer_starts())
        .chain(std::iter::once(stack.total_thickness()))
        .map(|z0| LayerAmplitudes {
            a: zero,
            b: zero,
            z0,
            k: k_out,
        })
        .collect();
    per_layer.last_mut().expect("exit medium").a = Complex64::new(1.0, 0.0);

    let layers = stack.layers();
    let (a0, b0) = sweep(stack, |j| layers[j].index, omega, Some(&mut per_layer))?;
    let (t_coeff, r_coeff) = finish(a0, b0)?;
    if unit_input {
        let scale = 1.0 / a0;
        for m in &mut per_layer {
            m.a *= scale;
            m.b *= scale;
        }
    }
    Ok(FieldSolution {
        per_layer,
        t_coeff,
        r_coeff,
        frequency: omega,
    })
}

/// `(t, r)` only, with the defect slices re-indexed by `defect_indices`.
pub(crate) fn coefficients_with_defect(
    stack: &LayerStack,
    defect_indices: Option<&[ComplexIndex]>,
    omega: Frequency,
) -> Result<(Complex64, Complex64)> {
    let layers = stack.layers();
    let range = stack.defect_range();
    let (a0, b0) = match defect_indices {
        Some(d) => sweep(
            stack,
            |j| {
                if range.contains(&j) {
                    d[j - range.start]
                } else {
                    layers[j].index
                }
            },
            omega,
            None,
        )?,
        None => sweep(stack, |j| layers[j].index, omega, None)?,
    };
    finish(a0, b0)
}

/// Intensity `(T, R)` of the whole stack at `omega`.
pub fn transmittance_reflectance(stack: &LayerStack, omega: Frequency) -> Result<(f64, f64)> {
    let (t, r) = coefficients_with_defect(stack, None, omega)?;
    Ok((t.norm_sqr(), r.norm_sqr()))
}

/// Local `|G₁(z)|²` at each defect-slice midpoint for a pump of input Rabi
/// frequency `input_g1`, i.e. `|E₁(z)/E₁(0⁻)|²·G₁²`.
///
/// The stack is solved as given; pass the passive stack (defect index 1),
/// since the pump's own resonant index is neglected.
pub fn pump_field_profile(stack: &LayerStack, omega1: Frequency, input_g1: f64) -> Result<Vec<f64>> {
    let solution = solve_fields(stack, omega1, true)?;
    let g1_sq = input_g1 * input_g1;
    Ok(stack
        .defect_slice_midpoints()
        .into_iter()
        .map(|z| solution.field_at(z).norm_sqr() * g1_sq)
        .collect())
}

/// `|E(z)|²/|E_in|²` at a single point.
pub fn intensity_enhancement(stack: &LayerStack, omega: Frequency, z: f64) -> Result<f64> {
    Ok(solve_fields(stack, omega, true)?.field_at(z).norm_sqr())
}

/// Intensity coefficients `(T_M, R_M)` of the input mirror `(HL)^M H`
/// standing alone between two half-spaces of the surround index.
pub fn mirror_coefficients(stack: &LayerStack, omega: Frequency) -> Result<(f64, f64)> {
    transmittance_reflectance(&stack.front_mirror()?, omega)
}
