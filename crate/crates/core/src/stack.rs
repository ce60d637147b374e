//! Layer geometry of the `(HL)^M H D H (LH)^M` cavity.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::units::ComplexIndex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LayerKind {
    /// High-index quarter-wave mirror layer.
    High,
    /// Low-index quarter-wave mirror layer.
    Low,
    /// One slice of the defect layer.
    DefectSlice,
    /// Anything else (test slabs, user-built stacks).
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub kind: LayerKind,
    /// Thickness in metres.
    pub thickness: f64,
    pub index: ComplexIndex,
}

impl Layer {
    pub fn new(kind: LayerKind, thickness: f64, index: ComplexIndex) -> Result<Self> {
        let layer = Layer {
            kind,
            thickness,
            index,
        };
        layer.validate()?;
        Ok(layer)
    }

    fn validate(&self) -> Result<()> {
        if !(self.thickness > 0.0 && self.thickness.is_finite()) {
            return Err(invalid(format!(
                "layer thickness must be positive, got {}",
                self.thickness
            )));
        }
        if matches!(self.kind, LayerKind::High | LayerKind::Low) && !self.index.is_lossless() {
            return Err(invalid(format!(
                "mirror layers must be lossless, got index {}",
                self.index
            )));
        }
        Ok(())
    }
}

/// Ordered layers between two half-spaces of index `surround_index`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerStack {
    layers: Vec<Layer>,
    surround_index: ComplexIndex,
    period_count: usize,
    defect_slice_count: usize,
}

impl LayerStack {
    /// Arbitrary stack. Defect slices, if any, must be contiguous.
    pub fn new(layers: Vec<Layer>, surround_index: ComplexIndex) -> Result<Self> {
        if layers.is_empty() {
            return Err(invalid("stack has no layers"));
        }
        for layer in &layers {
            layer.validate()?;
        }
        if surround_index.re <= 0.0 {
            return Err(invalid("surround index must have a positive real part"));
        }
        let defect_slice_count = layers
            .iter()
            .filter(|l| l.kind == LayerKind::DefectSlice)
            .count();
        let stack = LayerStack {
            layers,
            surround_index,
            period_count: 0,
            defect_slice_count,
        };
        if defect_slice_count > 0 {
            let range = stack.defect_range();
            if range.len() != defect_slice_count {
                return Err(invalid("defect slices must be contiguous"));
            }
        }
        Ok(stack)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn surround_index(&self) -> ComplexIndex {
        self.surround_index
    }

    pub fn period_count(&self) -> usize {
        self.period_count
    }

    pub fn defect_slice_count(&self) -> usize {
        self.defect_slice_count
    }

    pub fn total_thickness(&self) -> f64 {
        self.layers.iter().map(|l| l.thickness).sum()
    }

    /// Start coordinate of every layer, with z = 0 at the input face.
    pub fn layer_starts(&self) -> Vec<f64> {
        // Running Neumaier sum, matching the thickness totals used by the solver.
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        self.layers
            .iter()
            .map(|l| {
                let start = sum + comp;
                let t = sum + l.thickness;
                comp += if sum.abs() >= l.thickness { (sum - t) + l.thickness } else { (l.thickness - t) + sum };
                sum = t;
                start
            })
            .collect()
    }

    /// Index range of the defect slices in `layers()`; empty when absent.
    pub fn defect_range(&self) -> Range<usize> {
        let first = self
            .layers
            .iter()
            .position(|l| l.kind == LayerKind::DefectSlice);
        match first {
            Some(start) => {
                let len = self.layers[start..]
                    .iter()
                    .take_while(|l| l.kind == LayerKind::DefectSlice)
                    .count();
                start..start + len
            }
            None => 0..0,
        }
    }

    /// Defect thickness (sum of its slices) in metres.
    pub fn defect_thickness(&self) -> f64 {
        compensated_sum(self.layers[self.defect_range()].iter().map(|l| l.thickness))
    }

    /// `(z_start, z_end)` of the defect layer.
    pub fn defect_bounds(&self) -> Option<(f64, f64)> {
        let range = self.defect_range();
        if range.is_empty() {
            return None;
        }
        let starts = self.layer_starts();
        let last = range.end - 1;
        Some((starts[range.start], starts[last] + self.layers[last].thickness))
    }

    /// Midpoint coordinate of every defect slice.
    pub fn defect_slice_midpoints(&self) -> Vec<f64> {
        let starts = self.layer_starts();
        self.defect_range()
            .map(|i| starts[i] + 0.5 * self.layers[i].thickness)
            .collect()
    }

    /// Copy of the stack with the defect slices re-indexed.
    pub fn with_defect_indices(&self, indices: &[ComplexIndex]) -> Result<LayerStack> {
        let range = self.defect_range();
        if indices.len() != range.len() {
            return Err(invalid(format!(
                "expected {} defect indices, got {}",
                range.len(),
                indices.len()
            )));
        }
        let mut out = self.clone();
        for (layer, &index) in out.layers[range].iter_mut().zip(indices) {
            if index.re <= 0.0 {
                return Err(invalid(format!("defect index {index} has non-positive real part")));
            }
            layer.index = index;
        }
        Ok(out)
    }

    /// The input mirror `(HL)^M H`: every layer in front of the defect.
    pub fn front_mirror(&self) -> Result<LayerStack> {
        let range = self.defect_range();
        if range.start == 0 {
            return Err(invalid("stack has no mirror in front of a defect"));
        }
        let mut mirror = LayerStack::new(self.layers[..range.start].to_vec(), self.surround_index)?;
        mirror.period_count = self.period_count;
        Ok(mirror)
    }

    /// Same stack traversed from the exit face.
    pub fn reversed(&self) -> LayerStack {
        let mut out = self.clone();
        out.layers.reverse();
        out
    }
}

/// Builds `(HL)^M H D H (LH)^M` designed around `probe_wavelength`.
///
/// Mirror layers are quarter-wave (`n·t = λ/4`); the defect has background
/// index 1 and is a half wave thick, cut into `defect_slice_count` equal
/// slices so a position-dependent index can be assigned later.
/// Neumaier summation; hundreds of equal slices otherwise drift by ~N ulp.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() { (sum - t) + v } else { (v - t) + sum };
        sum = t;
    }
    sum + comp
}

pub fn build_canonical_stack(
    n_h: ComplexIndex,
    n_l: ComplexIndex,
    m: usize,
    probe_wavelength: f64,
    defect_slice_count: usize,
) -> Result<LayerStack> {
    if !(probe_wavelength > 0.0 && probe_wavelength.is_finite()) {
        return Err(invalid(format!(
            "probe wavelength must be positive, got {probe_wavelength}"
        )));
    }
    if defect_slice_count == 0 {
        return Err(invalid("defect slice count must be at least 1"));
    }
    if n_h.re <= 0.0 || n_l.re <= 0.0 {
        return Err(invalid("mirror indices must have positive real parts"));
    }

    let quarter = probe_wavelength / 4.0;
    let high = Layer::new(LayerKind::High, quarter / n_h.re, n_h)?;
    let low = Layer::new(LayerKind::Low, quarter / n_l.re, n_l)?;
    let defect_thickness = probe_wavelength / 2.0;
    let slice = Layer::new(
        LayerKind::DefectSlice,
        defect_thickness / defect_slice_count as f64,
        ComplexIndex::VACUUM,
    )?;

    let mut layers = Vec::with_capacity(4 * m + 2 + defect_slice_count);
    for _ in 0..m {
        layers.push(high);
        layers.push(low);
    }
    layers.push(high);
    layers.extend(std::iter::repeat_n(slice, defect_slice_count));
    layers.push(high);
    for _ in 0..m {
        layers.push(low);
        layers.push(high);
    }

    Ok(LayerStack {
        layers,
        surround_index: ComplexIndex::VACUUM,
        period_count: m,
        defect_slice_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const LAMBDA: f64 = 589.6e-9;

    fn canonical(slices: usize) -> LayerStack {
        build_canonical_stack(
            ComplexIndex::real(2.35),
            ComplexIndex::real(1.45),
            10,
            LAMBDA,
            slices,
        )
        .unwrap()
    }

    #[test]
    fn canonical_layout() {
        let s = canonical(1);
        assert_eq!(s.len(), 43);
        assert_eq!(s.defect_range(), 21..22);
        assert_eq!(s.layers()[0].kind, LayerKind::High);
        assert_eq!(s.layers()[1].kind, LayerKind::Low);
        assert_eq!(s.layers()[20].kind, LayerKind::High);
        assert_eq!(s.layers()[22].kind, LayerKind::High);
        assert_eq!(s.layers()[23].kind, LayerKind::Low);
        assert_eq!(s.layers()[0].thickness, LAMBDA / 4.0 / 2.35);
        assert_eq!(s.layers()[1].thickness, LAMBDA / 4.0 / 1.45);
        assert_eq!(s.layers()[21].thickness, LAMBDA / 2.0);
    }

    #[test]
    fn zero_periods_is_hdh() {
        let s = build_canonical_stack(
            ComplexIndex::real(2.35),
            ComplexIndex::real(1.45),
            0,
            LAMBDA,
            1,
        )
        .unwrap();
        let kinds: Vec<_> = s.layers().iter().map(|l| l.kind).collect();
        assert_eq!(
            kinds,
            [LayerKind::High, LayerKind::DefectSlice, LayerKind::High]
        );
    }

    #[test]
    fn sliced_defect_partitions_half_wave() {
        let s = canonical(200);
        assert_eq!(s.len(), 242);
        assert_eq!(s.defect_slice_count(), 200);
        let d = s.defect_thickness();
        assert!((d - LAMBDA / 2.0).abs() <= 2.0 * f64::EPSILON * d);
        let (z0, z1) = s.defect_bounds().unwrap();
        assert!((z1 - z0 - LAMBDA / 2.0).abs() < 1e-20);
    }

    #[test]
    fn mirror_layers_are_quarter_wave_and_stack_is_symmetric() {
        let s = canonical(7);
        for l in s.layers() {
            if matches!(l.kind, LayerKind::High | LayerKind::Low) {
                let opl = l.thickness * l.index.re;
                assert!((opl - LAMBDA / 4.0).abs() <= 2.0 * f64::EPSILON * opl);
            }
        }
        assert_eq!(s.reversed().layers(), s.layers());
    }

    #[test]
    fn rejects_bad_arguments() {
        let h = ComplexIndex::real(2.35);
        let l = ComplexIndex::real(1.45);
        assert!(build_canonical_stack(h, l, 10, 0.0, 1).is_err());
        assert!(build_canonical_stack(h, l, 10, -1.0, 1).is_err());
        assert!(build_canonical_stack(h, l, 10, LAMBDA, 0).is_err());
        assert!(build_canonical_stack(ComplexIndex::new(2.35, 0.1), l, 10, LAMBDA, 1).is_err());
    }

    #[test]
    fn defect_reindexing() {
        let s = canonical(4);
        let idx = vec![ComplexIndex::new(1.0, -1e-6); 4];
        let t = s.with_defect_indices(&idx).unwrap();
        assert!(t.layers()[s.defect_range()].iter().all(|l| l.index.im == -1e-6));
        assert!(s.with_defect_indices(&idx[..3]).is_err());
        assert_eq!(s.front_mirror().unwrap().len(), 21);
    }
}
