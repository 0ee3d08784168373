//! Dense coefficient tensors indexed by multi-indices, and per-axis sign
//! assignments (one ±1 value per coordinate of each axis).

use crate::error::{Error, Result};
use crate::kahan::KahanSum;

/// Dense row-major tensor of order m >= 1. The last axis varies fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTensor {
    shape: Vec<usize>,
    strides: Vec<usize>,
    entries: Vec<f64>,
}

impl CoefficientTensor {
    pub fn new(shape: Vec<usize>, entries: Vec<f64>) -> Result<CoefficientTensor> {
        if shape.is_empty() {
            return Err(Error::Domain("tensor order must be >= 1".into()));
        }
        if shape.contains(&0) {
            return Err(Error::Domain(format!(
                "tensor dimensions must be >= 1, got {shape:?}"
            )));
        }
        let mut len = 1usize;
        for &n in &shape {
            len = len.checked_mul(n).ok_or_else(|| {
                Error::Domain(format!("tensor shape {shape:?} overflows addressable size"))
            })?;
        }
        if entries.len() != len {
            return Err(Error::ShapeMismatch(format!(
                "shape {shape:?} needs {len} entries, got {}",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|x| !x.is_finite()) {
            return Err(Error::Domain(format!(
                "tensor entries must be finite, found {bad}"
            )));
        }
        let strides = strides_for(&shape);
        Ok(CoefficientTensor {
            shape,
            strides,
            entries,
        })
    }

    pub fn order(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub(crate) fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total number of sign bits a full enumeration over this tensor's
    /// index set needs: the sum of the axis lengths.
    pub fn total_sign_bits(&self) -> u64 {
        self.shape.iter().map(|&n| n as u64).sum()
    }

    pub fn get(&self, idx: &[usize]) -> Result<f64> {
        if idx.len() != self.shape.len() {
            return Err(Error::ShapeMismatch(format!(
                "index of length {} for order-{} tensor",
                idx.len(),
                self.shape.len()
            )));
        }
        let mut flat = 0usize;
        for (a, (&i, &n)) in idx.iter().zip(&self.shape).enumerate() {
            if i >= n {
                return Err(Error::Domain(format!(
                    "index {i} out of bounds for axis {a} of length {n}"
                )));
            }
            flat += i * self.strides[a];
        }
        Ok(self.entries[flat])
    }
}

fn strides_for(shape: &[usize]) -> Vec<usize> {
    let mut strides = vec![1usize; shape.len()];
    for a in (0..shape.len().saturating_sub(1)).rev() {
        strides[a] = strides[a + 1] * shape[a + 1];
    }
    strides
}

/// One ±1 sign per coordinate of each axis.
#[derive(Debug, Clone, PartialEq)]
pub struct SignAssignment {
    signs: Vec<Vec<f64>>,
}

impl SignAssignment {
    pub fn new(signs: Vec<Vec<f64>>) -> Result<SignAssignment> {
        if signs.is_empty() || signs.iter().any(|axis| axis.is_empty()) {
            return Err(Error::Domain(
                "sign assignment must cover at least one coordinate per axis".into(),
            ));
        }
        for axis in &signs {
            for &s in axis {
                if s != 1.0 && s != -1.0 {
                    return Err(Error::Domain(format!(
                        "signs must be exactly +1 or -1, got {s}"
                    )));
                }
            }
        }
        Ok(SignAssignment { signs })
    }

    /// The canonical sign assignment at position `index` of the Gray-code
    /// walk over all sign configurations of `shape`. Bit b of the Gray
    /// word `index ^ (index >> 1)` flips coordinate b of the concatenated
    /// axes (axis 0 first, then axis 1, ...); a set bit means -1.
    pub fn from_gray_index(shape: &[usize], index: u64) -> Result<SignAssignment> {
        let bits: u64 = shape.iter().map(|&n| n as u64).sum();
        if shape.is_empty() || shape.contains(&0) {
            return Err(Error::Domain(format!(
                "sign assignment shape must have positive axes, got {shape:?}"
            )));
        }
        if bits >= 63 {
            return Err(Error::Domain(format!(
                "sign space of {bits} bits is not addressable"
            )));
        }
        if index >= (1u64 << bits) {
            return Err(Error::Domain(format!(
                "index {index} out of range for {bits} sign bits"
            )));
        }
        let word = index ^ (index >> 1);
        let mut signs = Vec::with_capacity(shape.len());
        let mut bit = 0u32;
        for &n in shape {
            let mut axis = Vec::with_capacity(n);
            for _ in 0..n {
                axis.push(if word >> bit & 1 == 1 { -1.0 } else { 1.0 });
                bit += 1;
            }
            signs.push(axis);
        }
        Ok(SignAssignment { signs })
    }

    pub fn axes(&self) -> &[Vec<f64>] {
        &self.signs
    }

    pub fn shape(&self) -> Vec<usize> {
        self.signs.iter().map(|axis| axis.len()).collect()
    }
}

/// Entry-wise product of a tensor with the rank-one sign tensor
/// s_1[i_1] * ... * s_m[i_m].
pub fn sign_transform(y: &CoefficientTensor, s: &SignAssignment) -> Result<CoefficientTensor> {
    if s.shape() != y.shape() {
        return Err(Error::ShapeMismatch(format!(
            "sign shape {:?} does not match tensor shape {:?}",
            s.shape(),
            y.shape()
        )));
    }
    let mut entries = Vec::with_capacity(y.len());
    for (flat, &v) in y.entries().iter().enumerate() {
        let mut rem = flat;
        let mut sign = 1.0;
        for (a, &stride) in y.strides().iter().enumerate() {
            let i = rem / stride;
            rem %= stride;
            sign *= s.signs[a][i];
        }
        entries.push(sign * v);
    }
    CoefficientTensor::new(y.shape().to_vec(), entries)
}

/// Euclidean norm of all entries.
pub fn l2_of_tensor(y: &CoefficientTensor) -> f64 {
    let mut acc = KahanSum::new();
    for &v in y.entries() {
        acc.add(v * v);
    }
    acc.value().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_validates_shape_and_entries() {
        assert!(CoefficientTensor::new(vec![], vec![]).is_err());
        assert!(CoefficientTensor::new(vec![2, 0], vec![]).is_err());
        assert!(CoefficientTensor::new(vec![2, 2], vec![1.0; 3]).is_err());
        assert!(CoefficientTensor::new(vec![2], vec![1.0, f64::INFINITY]).is_err());
        let t = CoefficientTensor::new(vec![2, 3], (0..6).map(|k| k as f64).collect()).unwrap();
        assert_eq!(t.order(), 2);
        assert_eq!(t.total_sign_bits(), 5);
        assert_eq!(t.get(&[1, 2]).unwrap(), 5.0);
        assert!(t.get(&[2, 0]).is_err());
        assert!(t.get(&[0]).is_err());
    }

    #[test]
    fn row_major_strides() {
        let t = CoefficientTensor::new(vec![2, 3, 4], vec![0.0; 24]).unwrap();
        assert_eq!(t.strides(), &[12, 4, 1]);
    }

    #[test]
    fn sign_assignment_rejects_non_unit_values() {
        assert!(SignAssignment::new(vec![vec![1.0, -1.0]]).is_ok());
        assert!(SignAssignment::new(vec![vec![0.5]]).is_err());
        assert!(SignAssignment::new(vec![vec![]]).is_err());
        assert!(SignAssignment::new(vec![]).is_err());
    }

    #[test]
    fn gray_index_walk_flips_one_sign_per_step() {
        let shape = [2usize, 3usize];
        let mut prev = SignAssignment::from_gray_index(&shape, 0).unwrap();
        assert!(prev.axes().iter().flatten().all(|&s| s == 1.0));
        for idx in 1..(1u64 << 5) {
            let cur = SignAssignment::from_gray_index(&shape, idx).unwrap();
            let diffs: usize = prev
                .axes()
                .iter()
                .flatten()
                .zip(cur.axes().iter().flatten())
                .filter(|(a, b)| a != b)
                .count();
            assert_eq!(diffs, 1, "step {idx} flipped {diffs} signs");
            prev = cur;
        }
        assert!(SignAssignment::from_gray_index(&shape, 1 << 5).is_err());
    }

    #[test]
    fn sign_transform_multiplies_axis_signs() {
        let y = CoefficientTensor::new(vec![2, 2], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let s = SignAssignment::new(vec![vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let z = sign_transform(&y, &s).unwrap();
        assert_eq!(z.entries(), &[-1.0, 2.0, 3.0, -4.0]);
        let bad = SignAssignment::new(vec![vec![1.0], vec![1.0, -1.0]]).unwrap();
        assert!(sign_transform(&y, &bad).is_err());
    }

    #[test]
    fn l2_matches_hand_value() {
        let y = CoefficientTensor::new(vec![2, 2], vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!((l2_of_tensor(&y) - 2.0).abs() < 1e-15);
        let z = CoefficientTensor::new(vec![3], vec![3.0, 0.0, 4.0]).unwrap();
        assert!((l2_of_tensor(&z) - 5.0).abs() < 1e-15);
    }
}
