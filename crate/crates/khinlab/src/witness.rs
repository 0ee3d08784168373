//! Extremal witness arrays and the lower bounds they certify.
//!
//! Two families matter. The block-ones array (ones on the {1,2}^m corner
//! of an N^m cube) attains the dyadic-branch constant exactly at finite
//! size. The uniform array (every entry N^(-m/2)) has unit l2 norm and
//! its moment converges, by the central limit theorem, to the m-th power
//! of the Gaussian L_r norm, certifying the Gaussian-branch constant in
//! the limit.

use std::f64::consts::LN_2;

use crate::constants::{breakpoint, ln_gamma_raw, multiple_khintchine_constant};
use crate::error::{Error, Result};
use crate::gray::EnumConfig;
use crate::kahan::KahanSum;
use crate::moments::{exact_moment_with, moment_rank_one_with};
use crate::tensor::{l2_of_tensor, CoefficientTensor};

/// Largest tensor a witness constructor will materialize.
const MAX_WITNESS_ENTRIES: u64 = 1 << 26;

/// Which extremal family a witness belongs to. `Custom` covers tensors
/// handed to `witness_ratio` that match neither canonical construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    BlockOnes,
    Uniform,
    Custom,
}

impl WitnessKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessKind::BlockOnes => "BLOCK_ONES",
            WitnessKind::Uniform => "UNIFORM",
            WitnessKind::Custom => "CUSTOM",
        }
    }
}

impl std::fmt::Display for WitnessKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One measured lower bound: ratio = l2 / moment never exceeds the
/// theoretical constant K_{m,r}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessReport {
    pub m: u32,
    pub r: f64,
    pub n: usize,
    pub l2: f64,
    pub moment: f64,
    pub ratio: f64,
    pub theoretical_bound: f64,
    pub kind: WitnessKind,
}

fn check_witness_size(m: u32, n: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::Domain("witness order m must be >= 1".into()));
    }
    let mut len = 1u64;
    for _ in 0..m {
        len = len
            .checked_mul(n as u64)
            .filter(|&l| l <= MAX_WITNESS_ENTRIES)
            .ok_or_else(|| {
                Error::Domain(format!(
                    "witness of shape {n}^{m} exceeds the materialization limit of {MAX_WITNESS_ENTRIES} entries"
                ))
            })?;
    }
    Ok(len as usize)
}

/// Tensor of shape N^m holding 1 where every index lies in {1, 2} (the
/// first two coordinates of each axis) and 0 elsewhere.
pub fn block_ones_witness(m: u32, n: usize) -> Result<CoefficientTensor> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "block-ones witness needs N >= 2, got {n}"
        )));
    }
    let len = check_witness_size(m, n)?;
    let mut entries = vec![0.0f64; len];
    for (flat, e) in entries.iter_mut().enumerate() {
        let mut rem = flat;
        let mut inside = true;
        for _ in 0..m {
            if rem % n >= 2 {
                inside = false;
                break;
            }
            rem /= n;
        }
        if inside {
            *e = 1.0;
        }
    }
    CoefficientTensor::new(vec![n; m as usize], entries)
}

/// Tensor of shape N^m with every entry N^(-m/2); its l2 norm is 1 in
/// exact arithmetic.
pub fn uniform_witness(m: u32, n: usize) -> Result<CoefficientTensor> {
    if n < 1 {
        return Err(Error::Domain(format!(
            "uniform witness needs N >= 1, got {n}"
        )));
    }
    let len = check_witness_size(m, n)?;
    let value = (n as f64).powf(-(m as f64) / 2.0);
    CoefficientTensor::new(vec![n; m as usize], vec![value; len])
}

/// Exact 1-D moment of the uniform vector (1/sqrt(N), ..., 1/sqrt(N)):
/// ( 2^(-N) * sum_k C(N,k) |N-2k|^r )^(1/r) / sqrt(N). Coefficients are
/// kept in the log domain so the sum is overflow-safe for N up to 1e5.
pub fn binomial_moment(n: u64, r: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("binomial moment needs N >= 1".into()));
    }
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::Domain(format!(
            "moment exponent r must be a positive finite real, got {r}"
        )));
    }
    let nf = n as f64;
    let ln_n_fact = ln_gamma_raw(nf + 1.0);
    let mut log_terms = Vec::with_capacity(n as usize + 1);
    let mut max_log = f64::NEG_INFINITY;
    for k in 0..=n {
        let d = nf - 2.0 * k as f64;
        if d == 0.0 {
            continue;
        }
        let ln_c = ln_n_fact - ln_gamma_raw(k as f64 + 1.0) - ln_gamma_raw((n - k) as f64 + 1.0);
        let l = ln_c - nf * LN_2 + r * d.abs().ln();
        max_log = max_log.max(l);
        log_terms.push(l);
    }
    let mut sum = KahanSum::new();
    for l in log_terms {
        sum.add((l - max_log).exp());
    }
    Ok(((max_log + sum.value().ln()) / r).exp() / nf.sqrt())
}

fn matches_block_ones(y: &CoefficientTensor, n: usize) -> bool {
    if n < 2 {
        return false;
    }
    y.entries().iter().enumerate().all(|(flat, &v)| {
        let mut rem = flat;
        let mut inside = true;
        for _ in 0..y.order() {
            if rem % n >= 2 {
                inside = false;
                break;
            }
            rem /= n;
        }
        v == if inside { 1.0 } else { 0.0 }
    })
}

fn classify(y: &CoefficientTensor) -> WitnessKind {
    let shape = y.shape();
    let n = shape[0];
    if !shape.iter().all(|&d| d == n) {
        return WitnessKind::Custom;
    }
    if matches_block_ones(y, n) {
        return WitnessKind::BlockOnes;
    }
    let uniform_value = (n as f64).powf(-(y.order() as f64) / 2.0);
    if y.entries().iter().all(|&v| v == uniform_value) {
        return WitnessKind::Uniform;
    }
    WitnessKind::Custom
}

/// l2-to-moment ratio of a witness tensor, with the theoretical constant
/// K_{m,r} it bounds from below.
pub fn witness_ratio(y: &CoefficientTensor, r: f64) -> Result<WitnessReport> {
    witness_ratio_with(y, r, &EnumConfig::default())
}

pub fn witness_ratio_with(
    y: &CoefficientTensor,
    r: f64,
    cfg: &EnumConfig,
) -> Result<WitnessReport> {
    if y.entries().iter().all(|&v| v == 0.0) {
        return Err(Error::Degenerate(
            "witness tensor is identically zero, its moment vanishes".into(),
        ));
    }
    let m = y.order() as u32;
    let moment = exact_moment_with(y, r, cfg)?.value;
    if moment <= 0.0 {
        return Err(Error::Degenerate(
            "witness moment underflowed to zero".into(),
        ));
    }
    let l2 = l2_of_tensor(y);
    Ok(WitnessReport {
        m,
        r,
        n: y.shape()[0],
        l2,
        moment,
        ratio: l2 / moment,
        theoretical_bound: multiple_khintchine_constant(m, r)?,
        kind: classify(y),
    })
}

fn check_sweep_r(r: f64) -> Result<()> {
    if !r.is_finite() || r <= 0.0 || r >= 2.0 {
        return Err(Error::Domain(format!(
            "lower-bound sweeps cover r in (0, 2), got {r}"
        )));
    }
    Ok(())
}

fn block_report(m: u32, r: f64, n: usize, cfg: &EnumConfig) -> Result<WitnessReport> {
    if m == 0 {
        return Err(Error::Domain("witness order m must be >= 1".into()));
    }
    if n < 2 {
        return Err(Error::Domain(format!(
            "block-ones witness needs N >= 2, got {n}"
        )));
    }
    // Axis coordinates beyond the first two never meet a nonzero entry,
    // so the moment is independent of N and factorizes into m copies of
    // the 1-D moment of (1, 1).
    let factors = vec![vec![1.0, 1.0]; m as usize];
    let moment = moment_rank_one_with(&factors, r, cfg)?.value;
    let l2 = (m as f64 / 2.0).exp2();
    Ok(WitnessReport {
        m,
        r,
        n,
        l2,
        moment,
        ratio: l2 / moment,
        theoretical_bound: multiple_khintchine_constant(m, r)?,
        kind: WitnessKind::BlockOnes,
    })
}

fn uniform_report(m: u32, r: f64, n: usize) -> Result<WitnessReport> {
    if m == 0 {
        return Err(Error::Domain("witness order m must be >= 1".into()));
    }
    if n < 1 {
        return Err(Error::Domain(format!(
            "uniform witness needs N >= 1, got {n}"
        )));
    }
    // The uniform array is rank-one, so its moment is the m-th power of
    // the 1-D binomial moment; l2 is 1 by construction.
    let moment = binomial_moment(n as u64, r)?.powi(m as i32);
    let l2 = 1.0;
    Ok(WitnessReport {
        m,
        r,
        n,
        l2,
        moment,
        ratio: l2 / moment,
        theoretical_bound: multiple_khintchine_constant(m, r)?,
        kind: WitnessKind::Uniform,
    })
}

/// Sweep of a chosen witness family over a list of sizes.
pub fn witness_sweep_with(
    m: u32,
    r: f64,
    n_values: &[usize],
    kind: WitnessKind,
    cfg: &EnumConfig,
) -> Result<Vec<WitnessReport>> {
    check_sweep_r(r)?;
    n_values
        .iter()
        .map(|&n| match kind {
            WitnessKind::BlockOnes => block_report(m, r, n, cfg),
            WitnessKind::Uniform => uniform_report(m, r, n),
            WitnessKind::Custom => Err(Error::Domain(
                "sweeps cover the BLOCK_ONES and UNIFORM families only".into(),
            )),
        })
        .collect()
}

/// Lower-bound sweep with the family picked by the regime of r: the
/// block-ones array for r <= p0 (exact attainment), the uniform array
/// for r in (p0, 2) (CLT convergence).
pub fn lower_bound_sweep(m: u32, r: f64, n_values: &[usize]) -> Result<Vec<WitnessReport>> {
    lower_bound_sweep_with(m, r, n_values, &EnumConfig::default())
}

pub fn lower_bound_sweep_with(
    m: u32,
    r: f64,
    n_values: &[usize],
    cfg: &EnumConfig,
) -> Result<Vec<WitnessReport>> {
    check_sweep_r(r)?;
    let kind = if r <= breakpoint().p0 {
        WitnessKind::BlockOnes
    } else {
        WitnessKind::Uniform
    };
    witness_sweep_with(m, r, n_values, kind, cfg)
}
