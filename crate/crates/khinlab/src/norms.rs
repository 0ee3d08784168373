//! lp and mixed (outer, inner) norms on vectors and matrices.

use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::kahan::KahanSum;

/// |x|^p with exact handling of the common exponents.
#[inline]
pub(crate) fn pow_abs(x: f64, p: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if p == 1.0 {
        x.abs()
    } else if p == 2.0 {
        x * x
    } else {
        x.abs().powf(p)
    }
}

/// x^(1/p) for x >= 0, with exact handling of the common exponents.
#[inline]
pub(crate) fn root(x: f64, p: f64) -> f64 {
    if p == 1.0 {
        x
    } else if p == 2.0 {
        x.sqrt()
    } else {
        x.powf(1.0 / p)
    }
}

/// lp norm (quasi-norm for p < 1) of a vector; the empty vector has norm 0
/// and `Infinity` gives the max of absolute values.
pub fn lp_norm(v: &[f64], p: Exponent) -> f64 {
    match p {
        Exponent::Infinity => v.iter().fold(0.0f64, |acc, x| acc.max(x.abs())),
        Exponent::Finite(p) => {
            let mut acc = KahanSum::new();
            for &x in v {
                acc.add(pow_abs(x, p));
            }
            root(acc.value(), p)
        }
    }
}

/// Dense row-major real matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl RealMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<RealMatrix> {
        if rows == 0 || cols == 0 {
            return Err(Error::Domain(
                "matrix must have at least one row and one column".into(),
            ));
        }
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|x| !x.is_finite()) {
            return Err(Error::Domain(format!(
                "matrix entries must be finite, found {bad}"
            )));
        }
        Ok(RealMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> RealMatrix {
        let mut entries = vec![0.0; self.entries.len()];
        for i in 0..self.rows {
            for j in 0..self.cols {
                entries[j * self.rows + i] = self.get(i, j);
            }
        }
        RealMatrix {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }
}

/// Mixed norm: inner lp norm over each row, then the outer norm of the
/// vector of row norms.
pub fn mixed_norm(a: &RealMatrix, outer: Exponent, inner: Exponent) -> f64 {
    let row_norms: Vec<f64> = (0..a.rows()).map(|i| lp_norm(a.row(i), inner)).collect();
    lp_norm(&row_norms, outer)
}

/// Minkowski defect for 0 < p < q < inf:
/// mixed_norm(a^T, p over columns outer, q inner) minus
/// mixed_norm(a, q outer, p inner). Nonnegative up to rounding.
pub fn minkowski_gap(a: &RealMatrix, p: f64, q: f64) -> Result<f64> {
    if !(p.is_finite() && q.is_finite()) || p <= 0.0 || p >= q {
        return Err(Error::Domain(format!(
            "minkowski_gap requires 0 < p < q < inf, got p={p}, q={q}"
        )));
    }
    let ep = Exponent::new(p)?;
    let eq = Exponent::new(q)?;
    let lhs = mixed_norm(a, eq, ep);
    let rhs = mixed_norm(&a.transpose(), ep, eq);
    Ok(rhs - lhs)
}
