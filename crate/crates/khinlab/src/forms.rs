//! M-linear forms on X_p x X_inf^(M-1): exact norms, the two mixed
//! Littlewood left-hand sides, and the equivalence construction that
//! turns a coefficient tensor into a form whose norm is a Rademacher
//! moment.
//!
//! The form norm is computed exactly: the supremum over the l_inf unit
//! balls is attained at sign vectors (each slot is affine in its
//! argument), and for fixed signs the supremum over the l_p ball of the
//! first slot is the dual l_{p*} norm of the contraction vector. The
//! sign vectors are enumerated in Gray order with incremental updates of
//! the contraction, exactly like the moment engine.

use crate::constants::{mixed_littlewood_constant, multiple_khintchine_constant};
use crate::error::{Error, Result};
use crate::exponent::Exponent;
use crate::gray::{self, EnumConfig};
use crate::kahan::KahanSum;
use crate::norms::lp_norm;
use crate::tensor::{sign_transform, CoefficientTensor, SignAssignment};

/// Largest coefficient tensor the equivalence construction materializes.
const MAX_CONSTRUCTION_ENTRIES: u64 = 1 << 26;

/// An M-linear form T on X_p x X_inf^(M-1), stored through its
/// coefficients T(e_{i_1}, ..., e_{i_M}).
#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearForm {
    coefficients: CoefficientTensor,
    first_exponent: Exponent,
}

impl MultilinearForm {
    pub fn new(coefficients: CoefficientTensor, first_exponent: Exponent) -> Result<MultilinearForm> {
        if coefficients.order() < 2 {
            return Err(Error::Domain(format!(
                "a multilinear form needs order >= 2, got {}",
                coefficients.order()
            )));
        }
        if let Exponent::Finite(p) = first_exponent {
            if p.is_nan() || p < 1.0 {
                return Err(Error::Domain(format!(
                    "the first factor exponent must satisfy p >= 1, got {p}"
                )));
            }
        }
        Ok(MultilinearForm {
            coefficients,
            first_exponent,
        })
    }

    pub fn coefficients(&self) -> &CoefficientTensor {
        &self.coefficients
    }

    pub fn first_exponent(&self) -> Exponent {
        self.first_exponent
    }

    pub fn order(&self) -> usize {
        self.coefficients.order()
    }

    pub fn shape(&self) -> &[usize] {
        self.coefficients.shape()
    }

    /// Sign bits a norm enumeration needs: the lengths of axes 2..M.
    /// The first axis is contracted, not enumerated, so it may be large.
    pub fn enumerated_sign_bits(&self) -> u64 {
        self.shape()[1..].iter().map(|&n| n as u64).sum()
    }
}

/// Which mixed Littlewood statement a report refers to: MIXED_C bounds
/// the outer-first nesting, MIXED_D the inner-first nesting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixedTheorem {
    MixedC,
    MixedD,
}

impl MixedTheorem {
    pub fn as_str(self) -> &'static str {
        match self {
            MixedTheorem::MixedC => "MIXED_C",
            MixedTheorem::MixedD => "MIXED_D",
        }
    }
}

impl std::fmt::Display for MixedTheorem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Slack applied to the `holds` comparison.
pub const HOLDS_SLACK: f64 = 1e-9;

/// Outcome of checking lhs <= constant * norm * (1 + slack).
/// `ratio` is lhs / norm, absent for a degenerate (zero-norm) form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    pub lhs: f64,
    pub norm: f64,
    pub ratio: Option<f64>,
    pub constant: f64,
    pub theorem: MixedTheorem,
    pub holds: bool,
}

fn signs_from_word(shape: &[usize], word: u64) -> Vec<Vec<f64>> {
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
    signs
}

/// Max over one Gray chunk of the dual norm of the contraction vector.
fn norm_chunk(
    coeffs: &CoefficientTensor,
    dual: Exponent,
    bit_map: &[(usize, usize)],
    base: u64,
    len: u64,
) -> f64 {
    let shape = coeffs.shape();
    let strides = coeffs.strides();
    let entries = coeffs.entries();
    let mdim = shape.len();
    let n0 = shape[0];
    let row_len = strides[0];
    // signs[a - 1] holds the sign vector of coefficient axis a.
    let mut signs = signs_from_word(&shape[1..], gray::gray_word(base));
    let mut b = vec![KahanSum::new(); n0];
    for (i0, acc) in b.iter_mut().enumerate() {
        for off in 0..row_len {
            let mut rem = off;
            let mut sp = 1.0;
            for (a, &stride) in strides.iter().enumerate().skip(1) {
                sp *= signs[a - 1][rem / stride];
                rem %= stride;
            }
            acc.add(sp * entries[i0 * row_len + off]);
        }
    }
    let mut values = vec![0.0f64; n0];
    for (v, acc) in values.iter_mut().zip(&b) {
        *v = acc.value();
    }
    let mut best = lp_norm(&values, dual);
    let mut idx = vec![0usize; mdim];
    for step in 1..len {
        let (axis, coord) = bit_map[gray::flip_position(step) as usize];
        let old = signs[axis - 1][coord];
        let factor = -2.0 * old;
        for i in idx.iter_mut() {
            *i = 0;
        }
        // Every index combination of the other enumerated axes, with the
        // flipped axis pinned at `coord`, contributes one slice column.
        'walk: loop {
            let mut off = coord * strides[axis];
            let mut sp = 1.0;
            for a in 1..mdim {
                if a == axis {
                    continue;
                }
                off += idx[a] * strides[a];
                sp *= signs[a - 1][idx[a]];
            }
            let g = factor * sp;
            for (i0, acc) in b.iter_mut().enumerate() {
                acc.add(g * entries[i0 * row_len + off]);
            }
            let mut a = mdim;
            loop {
                if a == 1 {
                    break 'walk;
                }
                a -= 1;
                if a == axis {
                    continue;
                }
                idx[a] += 1;
                if idx[a] < shape[a] {
                    break;
                }
                idx[a] = 0;
            }
        }
        signs[axis - 1][coord] = -old;
        for (v, acc) in values.iter_mut().zip(&b) {
            *v = acc.value();
        }
        let norm = lp_norm(&values, dual);
        if norm > best {
            best = norm;
        }
    }
    best
}

/// Exact operator norm of the form on X_p x X_inf^(M-1) with the default
/// enumeration configuration.
pub fn form_norm(t: &MultilinearForm) -> Result<f64> {
    form_norm_with(t, &EnumConfig::default())
}

/// Exact operator norm: max over sign assignments of axes 2..M of the
/// dual l_{p*} norm of the first-axis contraction vector. Deterministic
/// for every thread count.
pub fn form_norm_with(t: &MultilinearForm, cfg: &EnumConfig) -> Result<f64> {
    let dual = t.first_exponent().conjugate()?;
    let bits = cfg.check_budget(t.enumerated_sign_bits())?;
    let mut bit_map = Vec::with_capacity(bits as usize);
    for (axis, &n) in t.shape().iter().enumerate().skip(1) {
        for coord in 0..n {
            bit_map.push((axis, coord));
        }
    }
    let coeffs = t.coefficients();
    let parts = gray::run_chunked(bits, cfg.threads, &|base, len| {
        norm_chunk(coeffs, dual, &bit_map, base, len)
    });
    Ok(parts.into_iter().fold(0.0f64, f64::max))
}

fn require_p_at_least_two(t: &MultilinearForm) -> Result<()> {
    if let Exponent::Finite(p) = t.first_exponent() {
        if p < 2.0 {
            return Err(Error::Domain(format!(
                "mixed Littlewood left-hand sides need p >= 2 or p = inf, got {p}"
            )));
        }
    }
    Ok(())
}

/// Outer-first mixed norm: exponent p/(p-1) over i_1 of the l2 norms
/// over the remaining flattened indices.
pub fn mixed_lhs_outer(t: &MultilinearForm) -> Result<f64> {
    require_p_at_least_two(t)?;
    let outer = t.first_exponent().conjugate()?;
    let coeffs = t.coefficients();
    let row_len = coeffs.strides()[0];
    let n0 = coeffs.shape()[0];
    let two = Exponent::Finite(2.0);
    let row_norms: Vec<f64> = (0..n0)
        .map(|i0| lp_norm(&coeffs.entries()[i0 * row_len..(i0 + 1) * row_len], two))
        .collect();
    Ok(lp_norm(&row_norms, outer))
}

/// Inner-first mixed norm: l2 over the flattened indices (i_2, ..., i_M)
/// of the l_{p/(p-1)} norms along i_1.
pub fn mixed_lhs_inner(t: &MultilinearForm) -> Result<f64> {
    require_p_at_least_two(t)?;
    let inner = t.first_exponent().conjugate()?;
    let coeffs = t.coefficients();
    let row_len = coeffs.strides()[0];
    let n0 = coeffs.shape()[0];
    let mut col = vec![0.0f64; n0];
    let mut col_norms = vec![0.0f64; row_len];
    for (off, out) in col_norms.iter_mut().enumerate() {
        for (i0, c) in col.iter_mut().enumerate() {
            *c = coeffs.entries()[i0 * row_len + off];
        }
        *out = lp_norm(&col, inner);
    }
    Ok(lp_norm(&col_norms, Exponent::Finite(2.0)))
}

/// Checks the chosen mixed Littlewood inequality for one form.
pub fn verify_mixed_littlewood(t: &MultilinearForm, which: MixedTheorem) -> Result<InequalityReport> {
    verify_mixed_littlewood_with(t, which, &EnumConfig::default())
}

pub fn verify_mixed_littlewood_with(
    t: &MultilinearForm,
    which: MixedTheorem,
    cfg: &EnumConfig,
) -> Result<InequalityReport> {
    let lhs = match which {
        MixedTheorem::MixedC => mixed_lhs_outer(t)?,
        MixedTheorem::MixedD => mixed_lhs_inner(t)?,
    };
    let norm = form_norm_with(t, cfg)?;
    let constant = mixed_littlewood_constant(t.order() as u32, t.first_exponent())?;
    Ok(InequalityReport {
        lhs,
        norm,
        ratio: (norm > 0.0).then(|| lhs / norm),
        constant,
        theorem: which,
        holds: lhs <= constant * norm * (1.0 + HOLDS_SLACK),
    })
}

/// The equivalence construction: from an order-m tensor y and p in [1, 2]
/// build the (m+1)-linear form with first exponent p* whose rows, one per
/// sign assignment i in canonical Gray order, are
/// 2^(-(sum N_j)/p) * (sign-transformed y). Its norm equals the L_p
/// moment of y and its inner mixed LHS equals l2(y).
pub fn littlewood_form_construction(y: &CoefficientTensor, p: f64) -> Result<MultilinearForm> {
    littlewood_form_construction_with(y, p, &EnumConfig::default())
}

pub fn littlewood_form_construction_with(
    y: &CoefficientTensor,
    p: f64,
    cfg: &EnumConfig,
) -> Result<MultilinearForm> {
    if !p.is_finite() || !(1.0..=2.0).contains(&p) {
        return Err(Error::Domain(format!(
            "the construction needs p in [1, 2], got {p}"
        )));
    }
    let bits = cfg.check_budget(y.total_sign_bits())?;
    let rows = 1u64 << bits;
    if rows.saturating_mul(y.len() as u64) > MAX_CONSTRUCTION_ENTRIES {
        return Err(Error::Domain(format!(
            "construction of {rows} x {} entries exceeds the materialization limit",
            y.len()
        )));
    }
    let scale = (-(bits as f64) / p).exp2();
    let mut entries = Vec::with_capacity(rows as usize * y.len());
    for i in 0..rows {
        let assignment = SignAssignment::from_gray_index(y.shape(), i)?;
        let signed = sign_transform(y, &assignment)?;
        entries.extend(signed.entries().iter().map(|&v| scale * v));
    }
    let mut shape = Vec::with_capacity(y.order() + 1);
    shape.push(rows as usize);
    shape.extend_from_slice(y.shape());
    let first_exponent = Exponent::new(p)?.conjugate()?;
    MultilinearForm::new(CoefficientTensor::new(shape, entries)?, first_exponent)
}

/// Builds the construction for y and reports how close the ratio
/// mixed_lhs_inner / form_norm comes to the claimed constant (A_p)^m.
pub fn equivalence_report(y: &CoefficientTensor, p: f64) -> Result<InequalityReport> {
    equivalence_report_with(y, p, &EnumConfig::default())
}

pub fn equivalence_report_with(
    y: &CoefficientTensor,
    p: f64,
    cfg: &EnumConfig,
) -> Result<InequalityReport> {
    let form = littlewood_form_construction_with(y, p, cfg)?;
    let lhs = mixed_lhs_inner(&form)?;
    let norm = form_norm_with(&form, cfg)?;
    let constant = multiple_khintchine_constant(y.order() as u32, p)?;
    Ok(InequalityReport {
        lhs,
        norm,
        ratio: (norm > 0.0).then(|| lhs / norm),
        constant,
        theorem: MixedTheorem::MixedD,
        holds: lhs <= constant * norm * (1.0 + HOLDS_SLACK),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::haagerup_constant;
    use crate::moments::exact_moment;
    use crate::tensor::l2_of_tensor;
    use crate::witness::{block_ones_witness, uniform_witness};

    fn form(shape: Vec<usize>, entries: Vec<f64>, p: Exponent) -> MultilinearForm {
        MultilinearForm::new(CoefficientTensor::new(shape, entries).unwrap(), p).unwrap()
    }

    fn littlewood_matrix(p: Exponent) -> MultilinearForm {
        form(vec![2, 2], vec![1.0, 1.0, 1.0, -1.0], p)
    }

    #[test]
    fn form_validation() {
        let t = CoefficientTensor::new(vec![4], vec![0.0; 4]).unwrap();
        assert!(MultilinearForm::new(t, Exponent::Infinity).is_err());
        let t = CoefficientTensor::new(vec![2, 2], vec![0.0; 4]).unwrap();
        assert!(MultilinearForm::new(t.clone(), Exponent::Finite(0.5)).is_err());
        assert!(MultilinearForm::new(t, Exponent::Finite(1.0)).is_ok());
    }

    #[test]
    fn form_norm_littlewood_matrix_at_infinity() {
        let t = littlewood_matrix(Exponent::Infinity);
        assert!((form_norm(&t).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn form_norm_identity_at_p_two() {
        let t = form(
            vec![2, 2],
            vec![1.0, 0.0, 0.0, 1.0],
            Exponent::Finite(2.0),
        );
        let want = std::f64::consts::SQRT_2;
        assert!((form_norm(&t).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn form_norm_zero_form() {
        let t = form(vec![3, 2, 2], vec![0.0; 12], Exponent::Finite(3.0));
        assert_eq!(form_norm(&t).unwrap(), 0.0);
    }

    #[test]
    fn form_norm_brute_force_cross_check() {
        // Independent slow path: rebuild the contraction from scratch for
        // every sign word, no incremental updates.
        let entries = vec![0.7, -1.2, 0.4, 2.0, -0.6, 0.9, 1.5, -0.8, 0.1, 1.1, -2.2, 0.3];
        let t = form(vec![2, 3, 2], entries.clone(), Exponent::Finite(2.5));
        let dual = t.first_exponent().conjugate().unwrap();
        let mut best = 0.0f64;
        for word in 0u64..(1 << 5) {
            let mut signs = Vec::new();
            let mut bit = 0;
            for &n in &t.shape()[1..] {
                let mut axis = Vec::new();
                for _ in 0..n {
                    axis.push(if word >> bit & 1 == 1 { -1.0 } else { 1.0 });
                    bit += 1;
                }
                signs.push(axis);
            }
            let mut b = vec![0.0f64; 2];
            for i0 in 0..2 {
                for j in 0..3 {
                    for k in 0..2 {
                        b[i0] += entries[i0 * 6 + j * 2 + k] * signs[0][j] * signs[1][k];
                    }
                }
            }
            best = best.max(lp_norm(&b, dual));
        }
        let got = form_norm(&t).unwrap();
        assert!((got - best).abs() <= 1e-12 * best);
    }

    #[test]
    fn form_norm_budget_counts_only_enumerated_axes() {
        let t = form(vec![100, 2], vec![0.25; 200], Exponent::Finite(2.0));
        assert_eq!(t.enumerated_sign_bits(), 2);
        assert!(form_norm(&t).is_ok());
        let wide = form(vec![2, 27], vec![0.0; 54], Exponent::Finite(2.0));
        match form_norm(&wide) {
            Err(Error::BudgetExceeded { required, .. }) => assert_eq!(required, 27),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn form_norm_is_sign_invariant() {
        let y = CoefficientTensor::new(
            vec![3, 2, 2],
            vec![0.3, -0.8, 1.2, 0.5, -1.5, 0.2, 0.9, -0.1, 2.0, 0.4, -0.7, 1.1],
        )
        .unwrap();
        let s = crate::tensor::SignAssignment::new(vec![
            vec![-1.0, 1.0, -1.0],
            vec![1.0, -1.0],
            vec![-1.0, -1.0],
        ])
        .unwrap();
        let z = sign_transform(&y, &s).unwrap();
        let a = form_norm(&MultilinearForm::new(y, Exponent::Finite(2.0)).unwrap()).unwrap();
        let b = form_norm(&MultilinearForm::new(z, Exponent::Finite(2.0)).unwrap()).unwrap();
        assert!((a - b).abs() <= 1e-12 * a);
    }

    #[test]
    fn mixed_lhs_hand_values() {
        let t = littlewood_matrix(Exponent::Infinity);
        let want = 2.0 * std::f64::consts::SQRT_2;
        assert!((mixed_lhs_outer(&t).unwrap() - want).abs() < 1e-14);
        assert!((mixed_lhs_inner(&t).unwrap() - want).abs() < 1e-14);
        let id = form(vec![2, 2], vec![1.0, 0.0, 0.0, 1.0], Exponent::Finite(2.0));
        assert!((mixed_lhs_outer(&id).unwrap() - std::f64::consts::SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn mixed_lhs_rank_one_separates() {
        let u = [0.5, -1.5, 2.0];
        let v = [1.0, 0.25];
        let w = [0.75, -0.5];
        let mut entries = Vec::new();
        for &a in &u {
            for &b in &v {
                for &c in &w {
                    entries.push(a * b * c);
                }
            }
        }
        let p = Exponent::Finite(3.0);
        let t = form(vec![3, 2, 2], entries, p);
        let dual = p.conjugate().unwrap();
        let want = lp_norm(&u, dual)
            * lp_norm(&v, Exponent::Finite(2.0))
            * lp_norm(&w, Exponent::Finite(2.0));
        let got = mixed_lhs_outer(&t).unwrap();
        assert!((got - want).abs() <= 1e-13 * want);
    }

    #[test]
    fn mixed_lhs_p_two_degeneracy() {
        let entries = vec![0.6, -1.1, 0.8, 0.2, 1.4, -0.9, 0.05, 2.1];
        let t = form(vec![2, 2, 2], entries, Exponent::Finite(2.0));
        let flat = lp_norm(t.coefficients().entries(), Exponent::Finite(2.0));
        let outer = mixed_lhs_outer(&t).unwrap();
        let inner = mixed_lhs_inner(&t).unwrap();
        assert!((outer - flat).abs() <= 1e-13 * flat);
        assert!((inner - flat).abs() <= 1e-13 * flat);
    }

    #[test]
    fn mixed_lhs_rejects_small_p() {
        let t = form(vec![2, 2], vec![1.0; 4], Exponent::Finite(1.5));
        assert!(mixed_lhs_outer(&t).is_err());
        assert!(mixed_lhs_inner(&t).is_err());
    }

    #[test]
    fn inner_never_exceeds_outer() {
        let entries = vec![0.3, -1.7, 0.9, 0.4, -0.2, 1.3, 0.8, -0.5, 1.9, -1.1, 0.6, 0.1];
        for p in [Exponent::Finite(2.0), Exponent::Finite(2.5), Exponent::Finite(4.0), Exponent::Infinity] {
            let t = form(vec![3, 2, 2], entries.clone(), p);
            let inner = mixed_lhs_inner(&t).unwrap();
            let outer = mixed_lhs_outer(&t).unwrap();
            assert!(inner <= outer * (1.0 + 1e-12), "p = {p}");
        }
    }

    #[test]
    fn verify_littlewood_extremal_equality() {
        let t = littlewood_matrix(Exponent::Infinity);
        let rep = verify_mixed_littlewood(&t, MixedTheorem::MixedC).unwrap();
        assert!(rep.holds);
        let want = std::f64::consts::SQRT_2;
        assert!((rep.lhs - 2.0 * want).abs() < 1e-14);
        assert!((rep.norm - 2.0).abs() < 1e-14);
        assert!((rep.ratio.unwrap() - want).abs() < 1e-14);
        assert!((rep.constant - want).abs() < 1e-13);
        assert_eq!(rep.theorem, MixedTheorem::MixedC);
    }

    #[test]
    fn verify_zero_form_holds_with_no_ratio() {
        let t = form(vec![2, 2], vec![0.0; 4], Exponent::Finite(2.0));
        let rep = verify_mixed_littlewood(&t, MixedTheorem::MixedD).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.lhs, 0.0);
        assert_eq!(rep.norm, 0.0);
        assert_eq!(rep.ratio, None);
    }

    #[test]
    fn construction_rows_follow_gray_order() {
        let y = CoefficientTensor::new(vec![2], vec![1.0, 1.0]).unwrap();
        let t = littlewood_form_construction(&y, 2.0).unwrap();
        assert_eq!(t.shape(), &[4, 2]);
        assert_eq!(t.first_exponent(), Exponent::Finite(2.0));
        // Gray words 00, 01, 11, 10 over two sign bits, set bit = -1.
        assert_eq!(
            t.coefficients().entries(),
            &[0.5, 0.5, -0.5, 0.5, -0.5, -0.5, 0.5, -0.5]
        );
        let inner = mixed_lhs_inner(&t).unwrap();
        assert!((inner - std::f64::consts::SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn construction_norm_is_the_moment() {
        let y = CoefficientTensor::new(vec![3], vec![0.8, -1.3, 0.5]).unwrap();
        for p in [1.0, 1.4, 1.8, 2.0] {
            let t = littlewood_form_construction(&y, p).unwrap();
            let norm = form_norm(&t).unwrap();
            let moment = exact_moment(&y, p).unwrap().value;
            assert!(
                (norm - moment).abs() <= 1e-10 * moment,
                "p = {p}: {norm} vs {moment}"
            );
            let inner = mixed_lhs_inner(&t).unwrap();
            let l2 = l2_of_tensor(&y);
            assert!((inner - l2).abs() <= 1e-12 * l2);
        }
    }

    #[test]
    fn construction_on_matrix_coefficients() {
        let y = CoefficientTensor::new(vec![2, 2], vec![0.9, -0.4, 1.1, 0.3]).unwrap();
        let p = 1.5;
        let t = littlewood_form_construction(&y, p).unwrap();
        assert_eq!(t.shape(), &[16, 2, 2]);
        let norm = form_norm(&t).unwrap();
        let moment = exact_moment(&y, p).unwrap().value;
        assert!((norm - moment).abs() <= 1e-10 * moment);
    }

    #[test]
    fn construction_domain_and_budget() {
        let y = CoefficientTensor::new(vec![2], vec![1.0, 2.0]).unwrap();
        assert!(littlewood_form_construction(&y, 0.9).is_err());
        assert!(littlewood_form_construction(&y, 2.1).is_err());
        let big = CoefficientTensor::new(vec![30], vec![1.0; 30]).unwrap();
        assert!(matches!(
            littlewood_form_construction(&big, 1.5),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn equivalence_pair_of_ones_at_p_one() {
        let y = CoefficientTensor::new(vec![2], vec![1.0, 1.0]).unwrap();
        let rep = equivalence_report(&y, 1.0).unwrap();
        let want = std::f64::consts::SQRT_2;
        assert!((rep.ratio.unwrap() - want).abs() <= 1e-12);
        assert!((rep.constant - want).abs() <= 1e-13);
        assert!(rep.holds);
    }

    #[test]
    fn equivalence_block_ones_attains_dyadic_square() {
        let y = block_ones_witness(2, 2).unwrap();
        for p in [1.0, 1.5, 1.8] {
            let rep = equivalence_report(&y, p).unwrap();
            let a = haagerup_constant(Exponent::new(p).unwrap()).unwrap().value;
            let want = a * a;
            assert!(
                (rep.ratio.unwrap() - want).abs() <= 1e-10 * want,
                "p = {p}"
            );
        }
    }

    #[test]
    fn equivalence_uniform_approaches_gaussian_constant() {
        let y = uniform_witness(1, 12).unwrap();
        let p = 1.9;
        let rep = equivalence_report(&y, p).unwrap();
        let a = haagerup_constant(Exponent::new(p).unwrap()).unwrap().value;
        let ratio = rep.ratio.unwrap();
        assert!((ratio - a).abs() / a <= 0.05, "{ratio} vs {a}");
        assert!(ratio <= a * (1.0 + 1e-9));
    }
}
