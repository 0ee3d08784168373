//! Gamma evaluation and the sharp Khintchine constant family.
//!
//! The constant A_p has three regimes. For p >= 2 it is 1. Between the
//! breakpoint p0 and 2 it is the Gaussian-moment expression
//! (1/sqrt(2)) * (Gamma((p+1)/2)/sqrt(pi))^(-1/p). At and below p0 it is
//! the dyadic value 2^(1/p - 1/2). The breakpoint p0 is the unique root
//! of Gamma((p+1)/2) = sqrt(pi)/2 in (1, 2), where the last two formulas
//! meet.

use std::f64::consts::{E, PI};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::exponent::Exponent;

// Digit strings here and in GAMMA_DK are kept past f64 precision.
#[allow(clippy::excessive_precision)]
const SQRT_PI: f64 = 1.7724538509055160273;
#[allow(clippy::excessive_precision)]
const SQRT_PI_OVER_2: f64 = 0.8862269254527580136;

// Lanczos approximation, g = 10.900511 with 11 coefficients. Relative
// error is a few ulp over the positive axis, far inside the 1e-13 bound
// needed on (0.5, 2].
const GAMMA_R: f64 = 10.900511;

#[allow(clippy::excessive_precision)]
const GAMMA_DK: [f64; 11] = [
    2.48574089138753565546e-5,
    1.05142378581721974210,
    -3.45687097222016235469,
    4.51227709466894823700,
    -2.98285225323576655721,
    1.05639711577126713077,
    -1.95428773191645869583e-1,
    1.70970543404441224307e-2,
    -5.71926117404305781283e-4,
    4.63399473359905636708e-6,
    -2.71994908488607703910e-9,
];

const TWO_SQRT_E_OVER_PI: f64 = 1.8603827342052657173362492472666631120594218414085755;
const LN_2_SQRT_E_OVER_PI: f64 = 0.6207822376352452223455184457816472122518527279025978;
const LN_PI: f64 = 1.1447298858494001741434273513530587116472948129153;

fn lanczos_series(x: f64) -> f64 {
    let mut s = GAMMA_DK[0];
    for (k, dk) in GAMMA_DK.iter().enumerate().skip(1) {
        s += dk / (x + k as f64 - 1.0);
    }
    s
}

pub(crate) fn gamma_raw(x: f64) -> f64 {
    if x < 0.5 {
        let mut s = GAMMA_DK[0];
        for (k, dk) in GAMMA_DK.iter().enumerate().skip(1) {
            s += dk / (k as f64 - x);
        }
        PI / ((PI * x).sin() * s * TWO_SQRT_E_OVER_PI * ((0.5 - x + GAMMA_R) / E).powf(0.5 - x))
    } else {
        lanczos_series(x) * TWO_SQRT_E_OVER_PI * ((x - 0.5 + GAMMA_R) / E).powf(x - 0.5)
    }
}

pub(crate) fn ln_gamma_raw(x: f64) -> f64 {
    if x < 0.5 {
        let mut s = GAMMA_DK[0];
        for (k, dk) in GAMMA_DK.iter().enumerate().skip(1) {
            s += dk / (k as f64 - x);
        }
        LN_PI
            - (PI * x).sin().ln()
            - s.ln()
            - LN_2_SQRT_E_OVER_PI
            - (0.5 - x) * ((0.5 - x + GAMMA_R) / E).ln()
    } else {
        lanczos_series(x).ln()
            + LN_2_SQRT_E_OVER_PI
            + (x - 0.5) * ((x - 0.5 + GAMMA_R) / E).ln()
    }
}

/// Gamma function on the positive reals.
pub fn gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "gamma requires a positive finite argument, got {x}"
        )));
    }
    Ok(gamma_raw(x))
}

/// Natural log of the gamma function on the positive reals.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "ln_gamma requires a positive finite argument, got {x}"
        )));
    }
    Ok(ln_gamma_raw(x))
}

/// Location of the Khintchine branch point together with the achieved
/// residual |Gamma((p0+1)/2) - sqrt(pi)/2|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoint {
    pub p0: f64,
    pub residual: f64,
}

fn breakpoint_residual(p: f64) -> f64 {
    gamma_raw((p + 1.0) / 2.0) - SQRT_PI_OVER_2
}

/// Bisection for the root of Gamma((p+1)/2) = sqrt(pi)/2 on [1.8, 1.9].
/// The residual is positive at 1.8 and negative at 1.9, so the bracket
/// is valid and the iteration stops once |residual| <= tolerance.
pub fn solve_p0(tolerance: f64) -> Result<Breakpoint> {
    if !tolerance.is_finite() || tolerance < 1e-14 {
        return Err(Error::Domain(format!(
            "p0 tolerance must be >= 1e-14, got {tolerance}"
        )));
    }
    let mut lo = 1.8f64;
    let mut hi = 1.9f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let res = breakpoint_residual(mid);
        if res.abs() <= tolerance {
            return Ok(Breakpoint {
                p0: mid,
                residual: res.abs(),
            });
        }
        if res > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Domain(format!(
        "p0 bisection did not reach tolerance {tolerance}"
    )))
}

static BREAKPOINT: OnceLock<Breakpoint> = OnceLock::new();

/// The cached branch point, solved once at tolerance 1e-12.
pub fn breakpoint() -> Breakpoint {
    *BREAKPOINT.get_or_init(|| solve_p0(1e-12).expect("fixed bracket [1.8, 1.9] converges"))
}

/// Which of the three A_p formulas applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Flat,
    Gaussian,
    Dyadic,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Flat => "FLAT",
            Branch::Gaussian => "GAUSSIAN",
            Branch::Dyadic => "DYADIC",
        }
    }
}

impl std::fmt::Display for Branch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The sharp Khintchine constant A_p with the branch that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaagerupConstant {
    pub p: Exponent,
    pub value: f64,
    pub branch: Branch,
}

/// A_p for p in (0, inf]. Ties at the breakpoint go to the dyadic branch.
pub fn haagerup_constant(p: Exponent) -> Result<HaagerupConstant> {
    let p_val = match p {
        Exponent::Infinity => {
            return Ok(HaagerupConstant {
                p,
                value: 1.0,
                branch: Branch::Flat,
            })
        }
        Exponent::Finite(v) => v,
    };
    if !p_val.is_finite() || p_val <= 0.0 {
        return Err(Error::Domain(format!(
            "Khintchine exponent must be positive, got {p_val}"
        )));
    }
    let p0 = breakpoint().p0;
    let (value, branch) = if p_val >= 2.0 {
        (1.0, Branch::Flat)
    } else if p_val > p0 {
        let g = gamma_raw((p_val + 1.0) / 2.0) / SQRT_PI;
        (std::f64::consts::FRAC_1_SQRT_2 * g.powf(-1.0 / p_val), Branch::Gaussian)
    } else {
        ((1.0 / p_val - 0.5).exp2(), Branch::Dyadic)
    };
    Ok(HaagerupConstant { p, value, branch })
}

/// L_r norm of a standard Gaussian: sqrt(2) * (Gamma((r+1)/2)/sqrt(pi))^(1/r),
/// the limit of the normalized binomial moments. Defined here for r in (0, 2),
/// the range where it is the reciprocal of the Gaussian-branch A_r.
pub fn gaussian_moment_limit(r: f64) -> Result<f64> {
    if !r.is_finite() || r <= 0.0 || r >= 2.0 {
        return Err(Error::Domain(format!(
            "gaussian moment limit requires r in (0, 2), got {r}"
        )));
    }
    let g = gamma_raw((r + 1.0) / 2.0) / SQRT_PI;
    Ok(std::f64::consts::SQRT_2 * g.powf(1.0 / r))
}

/// Sharp constant K_{m,r} = (A_r)^m of the m-fold Khintchine inequality,
/// computed as an integer power of a single A_r evaluation.
pub fn multiple_khintchine_constant(m: u32, r: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("Khintchine order m must be >= 1".into()));
    }
    let a = haagerup_constant(Exponent::new(r)?)?;
    Ok(a.value.powi(m as i32))
}

/// Sharp constant (A_{p/(p-1)})^{M-1} of the mixed (l_{p/(p-1)}, l_2)
/// Littlewood inequality for M-linear forms, p in [2, inf].
pub fn mixed_littlewood_constant(m_linear: u32, p: Exponent) -> Result<f64> {
    if m_linear < 2 {
        return Err(Error::Domain(format!(
            "mixed Littlewood degree must be >= 2, got {m_linear}"
        )));
    }
    match p {
        Exponent::Finite(v) if v < 2.0 => {
            return Err(Error::Domain(format!(
                "mixed Littlewood exponent must satisfy p >= 2, got {v}"
            )));
        }
        _ => {}
    }
    let a = haagerup_constant(p.conjugate()?)?;
    Ok(a.value.powi(m_linear as i32 - 1))
}
