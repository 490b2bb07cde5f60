//! Special functions evaluated in a numerically stable way.
//!
//! The Sauter-pulse coefficients contain `cosh` and `sinh` of arguments like
//! `πτ(ω_in + ω_out)`, which overflow `f64` once they exceed ~710. Everything
//! here therefore works with natural logarithms of non-negative reals, wrapped
//! in [`LogValue`], and only converts back to the linear domain on request.

use std::f64::consts::{LN_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest `ln x` for which `x` is a finite `f64`.
const LN_MAX: f64 = 709.782712893384;

/// Natural log of a non-negative real; `-∞` represents zero.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LogValue(f64);

impl LogValue {
    pub const ZERO: LogValue = LogValue(f64::NEG_INFINITY);
    pub const ONE: LogValue = LogValue(0.0);

    /// Wraps a natural logarithm. NaN and `+∞` are rejected.
    pub fn from_ln(ln: f64) -> Result<Self> {
        if ln.is_nan() || ln == f64::INFINITY {
            Err(Error::Domain {
                function: "LogValue::from_ln",
                value: ln,
            })
        } else {
            Ok(Self(ln))
        }
    }

    pub(crate) fn from_ln_unchecked(ln: f64) -> Self {
        debug_assert!(!ln.is_nan() && ln != f64::INFINITY, "bad log value {ln}");
        Self(ln)
    }

    pub fn from_linear(x: f64) -> Result<Self> {
        if x.is_finite() && x >= 0.0 {
            Ok(Self(x.ln()))
        } else {
            Err(Error::Domain {
                function: "LogValue::from_linear",
                value: x,
            })
        }
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    pub fn log2(self) -> f64 {
        self.0 / LN_2
    }

    pub fn is_zero(self) -> bool {
        self.0 == f64::NEG_INFINITY
    }

    /// Linear value, or [`Error::Saturated`] if it exceeds `f64::MAX`.
    pub fn exp(self) -> Result<f64> {
        if self.0 > LN_MAX {
            Err(Error::Saturated(self.0))
        } else {
            Ok(self.0.exp())
        }
    }

    /// `ln(a + b)`.
    pub fn add(self, other: Self) -> Self {
        Self(log_add_exp(self.0, other.0))
    }

    pub fn mul(self, other: Self) -> Self {
        Self(self.0 + other.0)
    }

    pub fn div(self, other: Self) -> Self {
        Self(self.0 - other.0)
    }

    /// `ln(1 - x)` for `x ≤ 1`; used for the fermion complement `1 - |β|²`.
    pub fn one_minus(self) -> Result<Self> {
        if self.0 > 0.0 {
            return Err(Error::Domain {
                function: "LogValue::one_minus",
                value: self.0,
            });
        }
        Ok(Self(log1m_exp(self.0)))
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp({})", self.0)
    }
}

/// `ln(eᵃ + eᵇ)` without overflow.
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(1 - eˣ)` for `x ≤ 0`.
pub fn log1m_exp(x: f64) -> f64 {
    if x > -LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `ln cosh x`.
pub fn log_cosh(x: f64) -> f64 {
    let a = x.abs();
    if a < 1.0 {
        a.cosh().ln()
    } else {
        a + (-2.0 * a).exp().ln_1p() - LN_2
    }
}

/// `ln sinh x` for `x > 0`.
pub fn log_sinh(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain {
            function: "log_sinh",
            value: x,
        });
    }
    if x < 1.0 {
        Ok(x.sinh().ln())
    } else {
        Ok(x + (-(-2.0 * x).exp_m1()).ln() - LN_2)
    }
}

/// `cosh z` for a purely real or purely imaginary `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoshValue {
    /// Real argument: `cosh x ≥ 1`, kept in log domain.
    Hyperbolic(LogValue),
    /// Imaginary argument `iy`: `cos y`, linear and possibly negative.
    Trigonometric(f64),
}

pub fn cosh_real_or_imaginary(z: Complex64) -> Result<CoshValue> {
    if z.im == 0.0 {
        Ok(CoshValue::Hyperbolic(LogValue(log_cosh(z.re))))
    } else if z.re == 0.0 {
        Ok(CoshValue::Trigonometric(z.im.cos()))
    } else {
        Err(Error::NotRealOrImaginary { re: z.re, im: z.im })
    }
}

/// `ln|Γ(1/2 + ix)|² = ln π - ln cosh(πx)`.
pub fn abs_gamma_sq_half_plus_ix(x: f64) -> LogValue {
    LogValue(PI.ln() - log_cosh(PI * x))
}

/// `ln|Γ(ix)|² = ln π - ln|x| - ln sinh(π|x|)`, undefined at the pole `x = 0`.
pub fn abs_gamma_sq_ix(x: f64) -> Result<LogValue> {
    if x == 0.0 || !x.is_finite() {
        return Err(Error::Domain {
            function: "abs_gamma_sq_ix",
            value: x,
        });
    }
    let a = x.abs();
    Ok(LogValue(PI.ln() - a.ln() - log_sinh(PI * a)?))
}

// B_{2k} / (2k (2k - 1)) for k = 1..=8.
const STIRLING: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
];

/// Below this real part the upward recurrence gets too long and the
/// reflection formula takes over.
const REFLECTION_CUTOFF: f64 = -2000.0;

/// Principal branch of `ln Γ(z)`, analytic on the plane cut along the negative
/// real axis and satisfying `ln Γ(z+1) = ln Γ(z) + ln z` there.
///
/// Stirling series after shifting `z` until `Re z ≥ 1/2` and `|z| ≥ 20`.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain {
            function: "ln_gamma",
            value: if z.re.is_finite() { z.im } else { z.re },
        });
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor() {
        return Err(Error::GammaPole { re: z.re, im: z.im });
    }
    if z.re < REFLECTION_CUTOFF {
        // ln Γ(z) = ln π - ln sin(πz) - ln Γ(1 - z); the imaginary part is
        // only fixed modulo 2π out here.
        let sin = (Complex64::new(PI, 0.0) * z).sin();
        return Ok(Complex64::new(PI.ln(), 0.0) - sin.ln() - ln_gamma(1.0 - z)?);
    }

    let mut w = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while w.re < 0.5 || w.norm_sqr() < 400.0 {
        shift += w.ln();
        w += 1.0;
    }
    Ok(stirling(w) - shift)
}

fn stirling(w: Complex64) -> Complex64 {
    let half_ln_2pi = 0.5 * (2.0 * PI).ln();
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for c in STIRLING {
        series += pow * c;
        pow *= inv2;
    }
    (w - 0.5) * w.ln() - w + half_ln_2pi + series
}

/// `ln|Γ(z)|²`.
pub fn ln_abs_gamma_sq(z: Complex64) -> Result<f64> {
    Ok(2.0 * ln_gamma(z)?.re)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Reference values: mpmath loggamma at 30 digits.
    const REFERENCE: [(f64, f64, f64, f64); 12] = [
        (1.0, 0.0, 0.0, 0.0),
        (0.5, 0.0, 0.57236494292470008707, 0.0),
        (1.0, 1.0, -0.65092319930185633889, -0.30164032046753319789),
        (0.5, 3.0, -3.7934504504362231734, 0.30981927108643916606),
        (0.3, -5.0, -7.2566488183218252769, -2.7373708904538277669),
        (2.5, 0.1, 0.28223201383076956839, 0.070355005286251556752),
        (10.0, 10.0, 8.2361317504487178437, 23.94870341378203736),
        (50.0, 100.0, 73.683127190521758822, 426.47739102830491315),
        (0.1, 20.0, -31.695265907346562615, 39.284410010649361162),
        (-2.5, 0.5, -0.93508562129827747868, -8.8709628852474591986),
        (-0.5, 0.0, 1.2655121234846453965, -PI),
        (300.0, -700.0, 872.0856148125492659, -4293.9624931908849415),
    ];

    #[test]
    fn ln_gamma_matches_reference() {
        for (re, im, lre, lim) in REFERENCE {
            let got = ln_gamma(c(re, im)).unwrap();
            let scale = lre.abs().max(1.0);
            assert!(
                (got.re - lre).abs() <= 1e-12 * scale,
                "re at {re}+{im}i: {} vs {lre}",
                got.re
            );
            assert!(
                (got.im - lim).abs() <= 1e-12 * lim.abs().max(1.0),
                "im at {re}+{im}i: {} vs {lim}",
                got.im
            );
        }
    }

    #[test]
    fn ln_gamma_poles() {
        for n in [0.0, -1.0, -7.0] {
            assert!(matches!(ln_gamma(c(n, 0.0)), Err(Error::GammaPole { .. })));
        }
        assert!(ln_gamma(c(-1.0, 1e-9)).is_ok());
    }

    #[test]
    fn gamma_at_i_matches_identity() {
        let lhs = ln_abs_gamma_sq(c(0.0, 1.0)).unwrap().exp();
        let rhs = PI / PI.sinh();
        assert!((lhs / rhs - 1.0).abs() < 1e-13);
        assert!((rhs - 0.2720290).abs() < 1e-7);
    }

    #[test]
    fn recurrence_grid() {
        for i in 0..10 {
            for j in 0..10 {
                let z = c(0.1 + 9.9 * i as f64 / 9.0, -10.0 + 20.0 * j as f64 / 9.0);
                let d = ln_gamma(z + 1.0).unwrap() - ln_gamma(z).unwrap() - z.ln();
                assert!(d.norm() < 1e-11, "z = {z}: {d}");
            }
        }
    }

    #[test]
    fn reflection_region_keeps_modulus() {
        // |Γ(-3000.5 + i)|² via reflection equals π² / (|sin|² |Γ(3001.5 - i)|²).
        let z = c(-3000.5, 1.0);
        let got = ln_gamma(z).unwrap().re;
        let sin = (c(PI, 0.0) * z).sin().norm().ln();
        let expect = PI.ln() - sin - ln_gamma(1.0 - z).unwrap().re;
        assert!((got - expect).abs() < 1e-9 * expect.abs());
    }

    #[test]
    fn gamma_identities() {
        for x in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0] {
            let half = ln_abs_gamma_sq(c(0.5, x)).unwrap();
            assert!((half - abs_gamma_sq_half_plus_ix(x).ln()).abs() < 1e-11 * half.abs().max(1.0));
            assert!((PI / half.exp() / (PI * x).cosh() - 1.0).abs() < 1e-11);

            let imag = ln_abs_gamma_sq(c(0.0, x)).unwrap();
            let closed = abs_gamma_sq_ix(x).unwrap().ln();
            assert!((imag - closed).abs() < 1e-11 * imag.abs().max(1.0));
            assert!((imag.exp() / (PI / (x * (PI * x).sinh())) - 1.0).abs() < 1e-11);
        }
    }

    #[test]
    fn half_plus_ix_examples() {
        assert_eq!(abs_gamma_sq_half_plus_ix(0.0).ln(), PI.ln());
        let v = abs_gamma_sq_half_plus_ix(1.0).exp().unwrap();
        assert!((v - PI / PI.cosh()).abs() < 1e-15);
        assert!((v - 0.2711).abs() < 1e-4);
        for x in [0.3, 2.0, 7.5, 100.0] {
            let v = abs_gamma_sq_half_plus_ix(x);
            let back = (v.ln() + log_cosh(PI * x)).exp();
            assert!((back / PI - 1.0).abs() < 1e-12);
        }
        assert!(abs_gamma_sq_half_plus_ix(1e6).ln().is_finite());
        for x in [0.01, 1.0, 10.0, 50.0] {
            let direct = ln_abs_gamma_sq(c(0.5, x)).unwrap();
            assert!((direct - abs_gamma_sq_half_plus_ix(x).ln()).abs() < 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn ix_examples() {
        let v = abs_gamma_sq_ix(1.0).unwrap().exp().unwrap();
        assert!((v / (PI / PI.sinh()) - 1.0).abs() < 1e-15);
        assert!(abs_gamma_sq_ix(0.0).is_err());
        for x in [0.2, 3.0, 40.0] {
            assert_eq!(abs_gamma_sq_ix(x).unwrap(), abs_gamma_sq_ix(-x).unwrap());
        }
        // |Γ(ix)|² ~ 1/x² near the pole.
        let small = abs_gamma_sq_ix(1e-6).unwrap().ln();
        assert!((small - (-2.0 * 1e-6f64.ln())).abs() < 1e-6);
    }

    #[test]
    fn hyperbolic_logs() {
        assert_eq!(log_cosh(0.0), 0.0);
        assert_eq!(log_cosh(1000.0), 1000.0 - LN_2);
        assert_eq!(log_cosh(-3.0), log_cosh(3.0));
        let mut x: f64 = -20.0;
        while x <= 20.0 {
            let naive = x.cosh().ln();
            assert!((log_cosh(x) - naive).abs() <= 1e-13 * naive.abs().max(1e-300) + 1e-300);
            if x > 0.0 {
                let naive = x.sinh().ln();
                assert!((log_sinh(x).unwrap() - naive).abs() <= 1e-13 * naive.abs() + 1e-15);
            }
            x += 0.37;
        }
        assert!(log_cosh(1e8).is_finite());
        assert!(log_sinh(1e8).unwrap().is_finite());
        assert!(log_sinh(0.0).is_err());
        assert!(log_sinh(-1.0).is_err());
    }

    #[test]
    fn cosh_of_imaginary_quarter_period() {
        match cosh_real_or_imaginary(c(0.0, 2.0 * PI * 0.25)).unwrap() {
            CoshValue::Trigonometric(v) => assert!(v.abs() < 1e-15),
            other => panic!("unexpected {other:?}"),
        }
        match cosh_real_or_imaginary(c(2.0, 0.0)).unwrap() {
            CoshValue::Hyperbolic(v) => assert!((v.exp().unwrap() - 2f64.cosh()).abs() < 1e-14),
            other => panic!("unexpected {other:?}"),
        }
        assert!(cosh_real_or_imaginary(c(1.0, 1.0)).is_err());
    }

    #[test]
    fn log_value_arithmetic() {
        let a = LogValue::from_linear(3.0).unwrap();
        let b = LogValue::from_linear(5.0).unwrap();
        assert!((a.add(b).exp().unwrap() - 8.0).abs() < 1e-14);
        assert!((a.mul(b).exp().unwrap() - 15.0).abs() < 1e-13);
        assert_eq!(LogValue::ZERO.add(a), a);
        assert!(LogValue::ZERO.exp().unwrap() == 0.0);
        let q = LogValue::from_linear(0.25).unwrap().one_minus().unwrap();
        assert!((q.exp().unwrap() - 0.75).abs() < 1e-15);
        assert!(LogValue::from_ln(1000.0).unwrap().exp().is_err());
        assert!(LogValue::from_ln(f64::NAN).is_err());
        assert!(LogValue::from_linear(-1.0).is_err());
        assert!(a.one_minus().is_err());
    }

    #[test]
    fn log1m_exp_accuracy() {
        let cases = [
            (-1e-12, -27.631021115929048208),
            (-1e-3, -6.9082552373154707326),
            (-0.5, -0.93275212956718857189),
            (-1.0, -0.45867514538708189102),
            (-30.0, -9.3576229688406124351e-14),
        ];
        for (x, expect) in cases {
            assert!((log1m_exp(x) - expect).abs() < 1e-14 * expect.abs(), "{x}");
        }
    }
}
