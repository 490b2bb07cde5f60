//! Bogoliubov coefficient moduli `|α_k|²`, `|β_k|²`.
//!
//! Constant field: `|β|² = exp(-πμ)` with `μ = (m² + k_⊥²)/(qE₀)` for both
//! statistics; `|α|² = 1 ± |β|²`.
//!
//! Sauter pulse, with `X = πτ(ω_out + ω_in)`, `Y = πτ(ω_out - ω_in)` and
//! `D = 2 sinh(πτω_in) sinh(πτω_out)`:
//!
//! ```text
//! boson    |β|² = (cosh Y + cosh 2πλ) / D     |α|² = (cosh X + cosh 2πλ) / D
//! fermion  |β|² = (cosh 2πλ - cosh Y) / D     |α|² = (cosh X - cosh 2πλ) / D
//! ```
//!
//! The numerators are rewritten as products of `cosh`/`sinh` of half sums and
//! differences, so every factor is evaluated in log domain without
//! cancellation. The fermion half differences `(2πλ - |Y|)/2` and
//! `(X - 2πλ)/2` are non-negative by the triangle inequality and are formed
//! from `m_⊥²`-proportional pieces directly.
//!
//! [`sauter_ratio_via_gamma`] recomputes `|β|²/|α|²` from the hypergeometric
//! connection coefficients and serves as an independent check.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{sauter_lambda, FieldProfile, ModeParams, SauterPulse};
use crate::specfun::{self, log_add_exp, log_cosh, log_sinh, LogValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistics {
    /// Charged scalar, spin 0.
    Boson,
    /// Dirac fermion, both spin projections.
    Fermion,
}

impl Statistics {
    pub fn name(self) -> &'static str {
        match self {
            Self::Boson => "boson",
            Self::Fermion => "fermion",
        }
    }
}

/// Exponent used for the constant-field fermion `|β|²`.
///
/// `Consistent` is `exp(-πμ)`, the value that puts the entropy maximum at
/// `E₀ = π(m² + k_⊥²)/(q ln 2)` and agrees with the mode-equation oracle.
/// `Paper` is `exp(-πμ/2)`, kept only so figure data can be produced under
/// both readings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ExponentConvention {
    #[default]
    Consistent,
    Paper,
}

impl ExponentConvention {
    pub fn name(self) -> &'static str {
        match self {
            Self::Consistent => "consistent",
            Self::Paper => "paper",
        }
    }
}

/// Clamp window for fermion moduli that overshoot 1 through rounding.
const CLAMP_WINDOW: f64 = 1e-12;

/// `|β|²` and `|α|²` of one mode pair, both in log domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BogoliubovModuli {
    pub beta2: LogValue,
    pub alpha2: LogValue,
    pub stat: Statistics,
}

impl BogoliubovModuli {
    /// Builds moduli from `|β|²` alone using `|α|² = 1 ± |β|²`.
    pub fn from_beta2(beta2: LogValue, stat: Statistics) -> Result<Self> {
        let alpha2 = match stat {
            Statistics::Boson => LogValue::ONE.add(beta2),
            Statistics::Fermion => {
                if beta2.ln() >= 0.0 {
                    return Err(Error::DegenerateMode(
                        "fermion |β|² = 1 leaves |α|² = 0",
                    ));
                }
                beta2.one_minus()?
            }
        };
        Ok(Self {
            beta2,
            alpha2,
            stat,
        })
    }

    /// `|β|²/|α|²`.
    pub fn ratio(&self) -> LogValue {
        self.beta2.div(self.alpha2)
    }

    /// Deviation from `|α|² ∓ |β|² = 1`, relative to the largest of the three
    /// terms. `None` if a modulus does not fit the linear range.
    pub fn normalization_defect(&self) -> Option<f64> {
        let a = self.alpha2.exp().ok()?;
        let b = self.beta2.exp().ok()?;
        let lhs = match self.stat {
            Statistics::Boson => a - b,
            Statistics::Fermion => a + b,
        };
        Some((lhs - 1.0).abs() / a.max(b).max(1.0))
    }

    /// Same check as [`normalization_defect`](Self::normalization_defect), but
    /// done in log domain so it also works for saturated moduli.
    pub fn log_normalization_defect(&self) -> f64 {
        let (a, b) = (self.alpha2.ln(), self.beta2.ln());
        match self.stat {
            // ln α² - ln(1 + β²)
            Statistics::Boson => (a - log_add_exp(0.0, b)).abs(),
            Statistics::Fermion => log_add_exp(a, b).abs(),
        }
    }
}

/// Dispatches on the field profile.
pub fn moduli(mode: &ModeParams, field: &FieldProfile, stat: Statistics) -> Result<BogoliubovModuli> {
    match field {
        FieldProfile::Constant(c) => constant_field_moduli(mode, c.e0(), stat),
        FieldProfile::Sauter(s) => sauter_moduli(mode, s, stat),
    }
}

pub fn constant_field_moduli(mode: &ModeParams, e0: f64, stat: Statistics) -> Result<BogoliubovModuli> {
    constant_field_moduli_with(mode, e0, stat, ExponentConvention::Consistent)
}

pub fn constant_field_moduli_with(
    mode: &ModeParams,
    e0: f64,
    stat: Statistics,
    convention: ExponentConvention,
) -> Result<BogoliubovModuli> {
    if !(e0.is_finite() && e0 > 0.0) {
        return Err(Error::InvalidField {
            name: "E0",
            value: e0,
            reason: "amplitude must be finite and positive",
        });
    }
    if stat == Statistics::Fermion && mode.transverse_mass_sq() == 0.0 {
        return Err(Error::DegenerateMode(
            "fermion with m = k_perp = 0 has |β|² = 1 and |α|² = 0",
        ));
    }
    let mu = mode.transverse_mass_sq() / (mode.q() * e0);
    let exponent = match (stat, convention) {
        (Statistics::Fermion, ExponentConvention::Paper) => -PI * mu / 2.0,
        _ => -PI * mu,
    };
    BogoliubovModuli::from_beta2(LogValue::from_ln_unchecked(exponent), stat)
}

/// Pieces of the Sauter closed forms shared by both statistics.
struct SauterKinematics {
    /// `qE₀τ`
    shift: f64,
    w_in: f64,
    w_out: f64,
    tau: f64,
    mt2: f64,
    k_z: f64,
}

impl SauterKinematics {
    fn new(mode: &ModeParams, pulse: &SauterPulse) -> Result<Self> {
        let (w_in, w_out) = pulse.asymptotic_frequencies(mode);
        if !(w_in > 0.0 && w_out > 0.0) {
            return Err(Error::DegenerateMode(
                "vanishing asymptotic frequency (m_⊥ = 0 and |k_z| = qE₀τ)",
            ));
        }
        Ok(Self {
            shift: mode.q() * pulse.e0() * pulse.tau(),
            w_in,
            w_out,
            tau: pulse.tau(),
            mt2: mode.transverse_mass_sq(),
            k_z: mode.k_z(),
        })
    }

    /// `ln D = ln 2 + ln sinh(πτω_in) + ln sinh(πτω_out)`.
    fn ln_denominator(&self) -> Result<f64> {
        Ok(LN_2 + log_sinh(PI * self.tau * self.w_in)? + log_sinh(PI * self.tau * self.w_out)?)
    }

    /// `ω_in - |k_z + qE₀τ| + ω_out - |k_z - qE₀τ|`, formed without cancellation.
    fn mass_excess(&self) -> f64 {
        let p_in = (self.k_z + self.shift).abs();
        let p_out = (self.k_z - self.shift).abs();
        self.mt2 / (self.w_in + p_in) + self.mt2 / (self.w_out + p_out)
    }

    /// `X/2 = πτ(ω_in + ω_out)/2`
    fn half_sum(&self) -> f64 {
        0.5 * PI * self.tau * (self.w_in + self.w_out)
    }

    /// `|Y|/2 = πτ|ω_out - ω_in|/2`, using `ω_out² - ω_in² = -4 k_z qE₀τ`.
    fn half_diff(&self) -> f64 {
        let d = 4.0 * self.k_z.abs() * self.shift / (self.w_in + self.w_out);
        0.5 * PI * self.tau * d
    }
}

fn ln_sinh_or_zero(x: f64) -> Result<f64> {
    if x == 0.0 {
        Ok(f64::NEG_INFINITY)
    } else {
        log_sinh(x)
    }
}

/// `ln(cosh u + cosh 2πλ)` for the boson numerators, `u ≥ 0`.
fn ln_boson_numerator(u: f64, lambda: Complex64) -> Result<f64> {
    if lambda.im == 0.0 {
        // cosh u + cosh v = 2 cosh((u+v)/2) cosh((u-v)/2)
        let v = 2.0 * PI * lambda.re;
        Ok(LN_2 + log_cosh(0.5 * (u + v)) + log_cosh(0.5 * (u - v)))
    } else {
        // cosh u + cos θ = 2 sinh²(u/2) + 2 cos²(θ/2), with θ/2 = π|λ| < π/2.
        let half_theta = PI * lambda.im.abs();
        let s = 2.0 * ln_sinh_or_zero(0.5 * u)?;
        let c = 2.0 * half_theta.cos().ln();
        Ok(LN_2 + log_add_exp(s, c))
    }
}

/// Closed-form moduli for the Sauter pulse.
pub fn sauter_moduli(mode: &ModeParams, pulse: &SauterPulse, stat: Statistics) -> Result<BogoliubovModuli> {
    if stat == Statistics::Fermion && mode.transverse_mass_sq() == 0.0 {
        return Err(Error::DegenerateMode("fermion with m = k_perp = 0"));
    }
    let kin = SauterKinematics::new(mode, pulse)?;
    let ln_den = kin.ln_denominator()?;
    let lambda = sauter_lambda(mode.q() * pulse.e0() * pulse.tau() * pulse.tau(), stat);

    let (ln_beta2, ln_alpha2) = match stat {
        Statistics::Boson => {
            let x = 2.0 * kin.half_sum();
            let y = 2.0 * kin.half_diff();
            (
                ln_boson_numerator(y, lambda)? - ln_den,
                ln_boson_numerator(x, lambda)? - ln_den,
            )
        }
        Statistics::Fermion => {
            let half_l = PI * lambda.re;
            let half_y = kin.half_diff();
            let half_x = kin.half_sum();
            let excess = kin.mass_excess();
            let w_sum = kin.w_in + kin.w_out;
            // (2πλ - |Y|)/2 = πτ qE₀τ (ω_in + ω_out - 2|k_z|)/(ω_in + ω_out)
            let below = excess + 2.0 * (kin.shift - kin.k_z.abs()).max(0.0);
            let gap_beta = PI * kin.tau * kin.shift * below / w_sum;
            // (X - 2πλ)/2 = πτ (ω_in + ω_out - 2qE₀τ)/2
            let above = excess + 2.0 * (kin.k_z.abs() - kin.shift).max(0.0);
            let gap_alpha = 0.5 * PI * kin.tau * above;
            (
                LN_2 + ln_sinh_or_zero(half_l + half_y)? + ln_sinh_or_zero(gap_beta)? - ln_den,
                LN_2 + ln_sinh_or_zero(half_x + half_l)? + ln_sinh_or_zero(gap_alpha)? - ln_den,
            )
        }
    };

    let (ln_beta2, ln_alpha2) = match stat {
        Statistics::Boson => (ln_beta2, ln_alpha2),
        Statistics::Fermion => (clamp_unit(ln_beta2)?, clamp_unit(ln_alpha2)?),
    };
    Ok(BogoliubovModuli {
        beta2: LogValue::from_ln(ln_beta2)?,
        alpha2: LogValue::from_ln(ln_alpha2)?,
        stat,
    })
}

fn clamp_unit(ln: f64) -> Result<f64> {
    if ln <= 0.0 {
        Ok(ln)
    } else if ln < CLAMP_WINDOW {
        Ok(0.0)
    } else {
        Err(Error::Normalization(format!(
            "fermion modulus exp({ln}) exceeds 1 beyond the clamp window"
        )))
    }
}

/// Sign choice `a = … ± iλ`, `b = … ∓ iλ` in the fermion hypergeometric
/// parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
}

/// Parameters `a, b, c` of the hypergeometric solutions in
/// `z = (1 + tanh(t/τ))/2`. Always `c = 1 - iτω_in` and `a + b - c = iτω_out`.
///
/// The gamma-function arguments built from them are formed directly from the
/// kinematics rather than by subtracting `a, b, c`: arguments close to the
/// imaginary axis make `|Γ|²` as sensitive as `1/|z|²`, and naive
/// differences lose digits there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeomParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    parts: Parts,
}

/// `a = re_a + i·im_a`, `b = re_b + i·im_b` with `re_a + re_b = 1`, plus
/// `g_a = τω_in + im_a`, `g_b = τω_in + im_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Parts {
    re_a: f64,
    re_b: f64,
    im_a: f64,
    im_b: f64,
    g_a: f64,
    g_b: f64,
    tau_w_in: f64,
    tau_w_out: f64,
}

/// Kinematics of the asymptotic momenta `p_in = k_z + qE₀τ`,
/// `p_out = k_z - qE₀τ` in cancellation-free form.
struct Asymptotics {
    tau: f64,
    w_in: f64,
    w_out: f64,
    /// `ω + p` and `ω - p` at `t → -∞` and `t → +∞`.
    in_plus: f64,
    in_minus: f64,
    out_plus: f64,
    out_minus: f64,
    /// `τ(ω_out - ω_in)/2`.
    half: f64,
}

impl Asymptotics {
    fn new(mode: &ModeParams, pulse: &SauterPulse) -> Self {
        let (w_in, w_out) = pulse.asymptotic_frequencies(mode);
        let tau = pulse.tau();
        let a = mode.q() * pulse.e0() * tau;
        let mt2 = mode.transverse_mass_sq();
        // ω ± p without cancellation.
        let split = |w: f64, p: f64| {
            let big = w + p.abs();
            let small = if big > 0.0 { mt2 / big } else { 0.0 };
            if p >= 0.0 {
                (big, small)
            } else {
                (small, big)
            }
        };
        let (in_plus, in_minus) = split(w_in, mode.k_z() + a);
        let (out_plus, out_minus) = split(w_out, mode.k_z() - a);
        // ω_out² - ω_in² = -4 k_z qE₀τ
        let half = -2.0 * tau * mode.k_z() * a / (w_in + w_out);
        Self {
            tau,
            w_in,
            w_out,
            in_plus,
            in_minus,
            out_plus,
            out_minus,
            half,
        }
    }
}

impl HypergeomParams {
    fn from_parts(parts: Parts) -> Self {
        Self {
            a: Complex64::new(parts.re_a, parts.im_a),
            b: Complex64::new(parts.re_b, parts.im_b),
            c: Complex64::new(1.0, -parts.tau_w_in),
            parts,
        }
    }

    pub fn boson(mode: &ModeParams, pulse: &SauterPulse) -> Self {
        let k = Asymptotics::new(mode, pulse);
        let s = mode.q() * pulse.e0() * k.tau * k.tau;
        let lambda = sauter_lambda(s, Statistics::Boson);
        // a = 1/2 + iτ(ω_out - ω_in)/2 - iλ, b = 1/2 + iτ(ω_out - ω_in)/2 + iλ
        let (re_a, re_b) = if lambda.im > 0.0 {
            // 1/2 - sqrt(1/4 - s²) = s²/(1/2 + sqrt(1/4 - s²))
            (0.5 + lambda.im, s * s / (0.5 + lambda.im))
        } else {
            (0.5, 0.5)
        };
        let (im_a, im_b) = (k.half - lambda.re, k.half + lambda.re);
        let centre = 0.5 * k.tau * (k.w_in + k.w_out);
        Self::from_parts(Parts {
            re_a,
            re_b,
            im_a,
            im_b,
            g_a: centre - lambda.re,
            g_b: centre + lambda.re,
            tau_w_in: k.tau * k.w_in,
            tau_w_out: k.tau * k.w_out,
        })
    }

    pub fn fermion(mode: &ModeParams, pulse: &SauterPulse, branch: Branch) -> Self {
        let k = Asymptotics::new(mode, pulse);
        let lambda = mode.q() * pulse.e0() * k.tau * k.tau;
        let sum = k.w_in + k.w_out;
        let qet = mode.q() * pulse.e0() * k.tau;
        // half ± λ and τ(ω_in + ω_out)/2 ± λ, each as a sum of positive terms.
        let half_plus = k.tau * qet * (k.in_minus + k.out_minus) / sum;
        let half_minus = -k.tau * qet * (k.in_plus + k.out_plus) / sum;
        let centre_plus = 0.5 * k.tau * sum + lambda;
        let centre_minus = 0.5 * k.tau * (k.in_minus + k.out_plus);
        let ((im_a, g_a), (im_b, g_b)) = match branch {
            Branch::Plus => ((half_plus, centre_plus), (half_minus, centre_minus)),
            Branch::Minus => ((half_minus, centre_minus), (half_plus, centre_plus)),
        };
        Self::from_parts(Parts {
            re_a: 0.0,
            re_b: 1.0,
            im_a,
            im_b,
            g_a,
            g_b,
            tau_w_in: k.tau * k.w_in,
            tau_w_out: k.tau * k.w_out,
        })
    }
}

/// `ln|λ_ij|²` of the four connection coefficients
///
/// ```text
/// λ11 = Γ(c)Γ(c-a-b) / (Γ(c-a)Γ(c-b))      λ12 = Γ(c)Γ(a+b-c) / (Γ(a)Γ(b))
/// λ21 = Γ(2-c)Γ(c-a-b) / (Γ(1-a)Γ(1-b))    λ22 = Γ(2-c)Γ(a+b-c) / (Γ(a-c+1)Γ(b-c+1))
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionCoefficients {
    pub ln_l11: f64,
    pub ln_l12: f64,
    pub ln_l21: f64,
    pub ln_l22: f64,
}

impl ConnectionCoefficients {
    pub fn new(h: &HypergeomParams) -> Result<Self> {
        let g = |re: f64, im: f64| specfun::ln_abs_gamma_sq(Complex64::new(re, im));
        let p = &h.parts;
        // |Γ(z)| = |Γ(z*)|, so only |Im| matters; c - a - b = -iτω_out.
        let gamma_c = g(1.0, p.tau_w_in)?;
        let gamma_cab = g(0.0, p.tau_w_out)?;
        Ok(Self {
            ln_l11: gamma_c + gamma_cab - g(p.re_b, p.g_a)? - g(p.re_a, p.g_b)?,
            ln_l12: gamma_c + gamma_cab - g(p.re_a, p.im_a)? - g(p.re_b, p.im_b)?,
            ln_l21: gamma_c + gamma_cab - g(p.re_b, p.im_a)? - g(p.re_a, p.im_b)?,
            ln_l22: gamma_c + gamma_cab - g(p.re_a, p.g_a)? - g(p.re_b, p.g_b)?,
        })
    }
}

/// `|β|²/|α|²` obtained from the connection coefficients in two ways.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaRatio {
    /// From the positive-frequency in-solution: `|λ12|²/|λ11|²`.
    pub positive: LogValue,
    /// From the negative-frequency in-solution: `|λ21|²/|λ22|²`.
    pub negative: LogValue,
}

/// `ln((ω_out + p_out)/(ω_out - p_out))` with `p_out = k_z - qE₀τ`: the ratio
/// of the spinor norms of the outgoing antiparticle and particle solutions.
fn ln_spinor_factor(mode: &ModeParams, pulse: &SauterPulse) -> f64 {
    let (_, w_out) = pulse.asymptotic_frequencies(mode);
    let p_out = mode.k_z() - mode.q() * pulse.e0() * pulse.tau();
    let ln = 2.0 * ((w_out + p_out.abs()).ln() - mode.transverse_mass().ln());
    ln.copysign(p_out)
}

/// `|β|²/|α|²` for a Sauter pulse from gamma-function connection coefficients.
///
/// For bosons the ratio is `|λ12|²/|λ11|²`, or equivalently `|λ21|²/|λ22|²`.
/// For fermions the scalar solutions still have to be lifted to spinors, whose
/// norms differ between outgoing particle and antiparticle by
/// `(ω_out ± p_out)/(ω_out ∓ p_out)`; with that factor both branches give the
/// same ratio. `branch` is ignored for bosons.
pub fn sauter_ratio_via_gamma(
    mode: &ModeParams,
    pulse: &SauterPulse,
    stat: Statistics,
    branch: Branch,
) -> Result<GammaRatio> {
    let (params, factor) = match stat {
        Statistics::Boson => (HypergeomParams::boson(mode, pulse), 0.0),
        Statistics::Fermion => {
            if mode.transverse_mass_sq() == 0.0 {
                return Err(Error::DegenerateMode("fermion with m = k_perp = 0"));
            }
            let f = ln_spinor_factor(mode, pulse);
            let f = match branch {
                Branch::Plus => f,
                Branch::Minus => -f,
            };
            (HypergeomParams::fermion(mode, pulse, branch), f)
        }
    };
    let l = ConnectionCoefficients::new(&params)?;
    Ok(GammaRatio {
        positive: LogValue::from_ln(l.ln_l12 - l.ln_l11 + factor)?,
        negative: LogValue::from_ln(l.ln_l21 - l.ln_l22 - factor)?,
    })
}
