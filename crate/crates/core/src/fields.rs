//! Background field profiles and the mode frequencies they induce.
//!
//! The field points along `z`. For a constant field `E(t) = E₀` the gauge
//! potential is `A_z = -E₀ t`; for the Sauter pulse `E(t) = E₀ sech²(t/τ)` it is
//! `A_z = -E₀ τ tanh(t/τ)`. The kinetic longitudinal momentum of a mode is then
//! `k_z - qE₀t` or `k_z - qE₀τ tanh(t/τ)` respectively.

use num_complex::Complex64;

use crate::bogoliubov::Statistics;
use crate::error::{Error, Result};

/// One charged field mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeParams {
    m: f64,
    q: f64,
    k_perp: f64,
    k_z: f64,
}

impl ModeParams {
    pub fn new(m: f64, q: f64, k_perp: f64, k_z: f64) -> Result<Self> {
        let check = |name, value: f64, ok: bool, reason| {
            if value.is_finite() && ok {
                Ok(())
            } else {
                Err(Error::InvalidMode {
                    name,
                    value,
                    reason,
                })
            }
        };
        check("m", m, m >= 0.0, "mass must be finite and non-negative")?;
        check("q", q, q > 0.0, "charge must be finite and positive")?;
        check(
            "k_perp",
            k_perp,
            k_perp >= 0.0,
            "transverse momentum must be finite and non-negative",
        )?;
        check("k_z", k_z, true, "longitudinal momentum must be finite")?;
        Ok(Self { m, q, k_perp, k_z })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn k_perp(&self) -> f64 {
        self.k_perp
    }

    pub fn k_z(&self) -> f64 {
        self.k_z
    }

    /// `m² + k_⊥²`, the only combination of mass and transverse momentum that
    /// enters any coefficient.
    pub fn transverse_mass_sq(&self) -> f64 {
        self.m * self.m + self.k_perp * self.k_perp
    }

    pub fn transverse_mass(&self) -> f64 {
        self.m.hypot(self.k_perp)
    }

    /// The same mode with `k_z → -k_z`.
    pub fn reflected(&self) -> Self {
        Self {
            k_z: -self.k_z,
            ..*self
        }
    }

    pub fn with_k_z(&self, k_z: f64) -> Result<Self> {
        Self::new(self.m, self.q, self.k_perp, k_z)
    }
}

/// Constant field of amplitude `E₀ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantField {
    e0: f64,
}

/// Sauter pulse `E₀ sech²(t/τ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SauterPulse {
    e0: f64,
    tau: f64,
}

fn check_amplitude(e0: f64) -> Result<()> {
    if e0.is_finite() && e0 > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidField {
            name: "E0",
            value: e0,
            reason: "amplitude must be finite and positive",
        })
    }
}

impl ConstantField {
    pub fn new(e0: f64) -> Result<Self> {
        check_amplitude(e0)?;
        Ok(Self { e0 })
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }
}

impl SauterPulse {
    pub fn new(e0: f64, tau: f64) -> Result<Self> {
        check_amplitude(e0)?;
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidField {
                name: "tau",
                value: tau,
                reason: "pulse width must be finite and positive",
            });
        }
        Ok(Self { e0, tau })
    }

    pub fn e0(&self) -> f64 {
        self.e0
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    /// `(ω_in, ω_out)`, the mode frequencies at `t → -∞` and `t → +∞`.
    pub fn asymptotic_frequencies(&self, mode: &ModeParams) -> (f64, f64) {
        let shift = mode.q * self.e0 * self.tau;
        let mt = mode.transverse_mass();
        ((mode.k_z + shift).hypot(mt), (mode.k_z - shift).hypot(mt))
    }
}

/// Background field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FieldProfile {
    Constant(ConstantField),
    Sauter(SauterPulse),
}

impl FieldProfile {
    pub fn constant(e0: f64) -> Result<Self> {
        ConstantField::new(e0).map(Self::Constant)
    }

    pub fn sauter(e0: f64, tau: f64) -> Result<Self> {
        SauterPulse::new(e0, tau).map(Self::Sauter)
    }

    pub fn e0(&self) -> f64 {
        match self {
            Self::Constant(c) => c.e0,
            Self::Sauter(s) => s.e0,
        }
    }

    pub fn tau(&self) -> Option<f64> {
        match self {
            Self::Constant(_) => None,
            Self::Sauter(s) => Some(s.tau),
        }
    }

    /// Electric field `E(t)`.
    pub fn strength(&self, t: f64) -> f64 {
        match self {
            Self::Constant(c) => c.e0,
            Self::Sauter(s) => {
                let sech = 1.0 / (t / s.tau).cosh();
                s.e0 * sech * sech
            }
        }
    }
}

/// `A_z(t)`, with `E(t) = -∂A_z/∂t`.
pub fn gauge_potential(field: &FieldProfile, t: f64) -> f64 {
    match field {
        FieldProfile::Constant(c) => -c.e0 * t,
        FieldProfile::Sauter(s) => -s.e0 * s.tau * (t / s.tau).tanh(),
    }
}

/// Kinetic longitudinal momentum `k_z + q A_z(t)`.
pub fn kinetic_momentum(mode: &ModeParams, field: &FieldProfile, t: f64) -> f64 {
    match field {
        FieldProfile::Constant(c) => mode.k_z - mode.q * c.e0 * t,
        FieldProfile::Sauter(s) => mode.k_z - mode.q * s.e0 * s.tau * (t / s.tau).tanh(),
    }
}

/// Instantaneous mode frequency `ω(t)`.
pub fn omega(mode: &ModeParams, field: &FieldProfile, t: f64) -> f64 {
    kinetic_momentum(mode, field, t).hypot(mode.transverse_mass())
}

/// `(ω_in, ω_out)` for a Sauter pulse; a constant field has no finite
/// asymptotic frequencies.
pub fn asymptotic_frequencies(mode: &ModeParams, field: &FieldProfile) -> Result<(f64, f64)> {
    match field {
        FieldProfile::Constant(_) => Err(Error::NotSauter),
        FieldProfile::Sauter(s) => Ok(s.asymptotic_frequencies(mode)),
    }
}

/// Dimensionless combinations entering the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessParams {
    /// `(m² + k_⊥²) / (qE₀)`.
    pub mu: f64,
    /// Purely real or purely imaginary; `None` for a constant field.
    pub lambda: Option<Complex64>,
    pub tau_omega_in: Option<f64>,
    pub tau_omega_out: Option<f64>,
}

pub fn dimensionless(
    mode: &ModeParams,
    field: &FieldProfile,
    stat: Statistics,
) -> DimensionlessParams {
    let mu = mode.transverse_mass_sq() / (mode.q * field.e0());
    match field {
        FieldProfile::Constant(_) => DimensionlessParams {
            mu,
            lambda: None,
            tau_omega_in: None,
            tau_omega_out: None,
        },
        FieldProfile::Sauter(s) => {
            let (w_in, w_out) = s.asymptotic_frequencies(mode);
            let lambda = sauter_lambda(mode.q * s.e0 * s.tau * s.tau, stat);
            DimensionlessParams {
                mu,
                lambda: Some(lambda),
                tau_omega_in: Some(s.tau * w_in),
                tau_omega_out: Some(s.tau * w_out),
            }
        }
    }
}

/// `λ` from `s = qE₀τ²`: `sqrt(s² - 1/4)` for bosons, `s` for fermions.
pub(crate) fn sauter_lambda(s: f64, stat: Statistics) -> Complex64 {
    match stat {
        Statistics::Fermion => Complex64::new(s, 0.0),
        Statistics::Boson => {
            // (s - 1/2)(s + 1/2) keeps the radicand accurate near s = 1/2.
            let radicand = (s - 0.5) * (s + 0.5);
            if radicand >= 0.0 {
                Complex64::new(radicand.sqrt(), 0.0)
            } else {
                Complex64::new(0.0, (-radicand).sqrt())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mode(m: f64, q: f64, kp: f64, kz: f64) -> ModeParams {
        ModeParams::new(m, q, kp, kz).unwrap()
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(ModeParams::new(-1.0, 1.0, 0.0, 0.0).is_err());
        assert!(ModeParams::new(1.0, 0.0, 0.0, 0.0).is_err());
        assert!(ModeParams::new(1.0, 1.0, -0.1, 0.0).is_err());
        assert!(ModeParams::new(1.0, 1.0, 0.0, f64::NAN).is_err());
        assert!(FieldProfile::constant(0.0).is_err());
        assert!(FieldProfile::constant(-2.0).is_err());
        assert!(FieldProfile::constant(f64::INFINITY).is_err());
        assert!(FieldProfile::sauter(1.0, 0.0).is_err());
        assert!(FieldProfile::sauter(0.0, 1.0).is_err());
        assert!(matches!(
            FieldProfile::sauter(1.0, 0.0),
            Err(Error::InvalidField { name: "tau", .. })
        ));
    }

    #[test]
    fn gauge_potential_examples() {
        let c = FieldProfile::constant(1.0).unwrap();
        assert_eq!(gauge_potential(&c, 0.0), 0.0);
        let s = FieldProfile::sauter(1.0, 1.0).unwrap();
        assert_eq!(gauge_potential(&s, 1e3), -1.0);
        let s = FieldProfile::sauter(2.0, 3.0).unwrap();
        let expected = -6.0 * 1f64.tanh();
        assert!((gauge_potential(&s, 3.0) - expected).abs() < 1e-15);
        assert!((gauge_potential(&s, 3.0) + 4.569565).abs() < 1e-6);
    }

    #[test]
    fn omega_examples() {
        let s = FieldProfile::sauter(1.0, 1.0).unwrap();
        assert_eq!(omega(&mode(1.0, 1.0, 0.0, 0.0), &s, 0.0), 1.0);
        let c = FieldProfile::constant(1.0).unwrap();
        let w = omega(&mode(1.0, 1.0, 1.0, 1.0), &c, 1.0);
        assert!((w - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn asymptotic_frequency_examples() {
        let s = FieldProfile::sauter(1.0, 1.0).unwrap();
        let (wi, wo) = asymptotic_frequencies(&mode(1.0, 1.0, 1.0, 1.0), &s).unwrap();
        assert!((wi - 6f64.sqrt()).abs() < 1e-15);
        assert!((wo - 2f64.sqrt()).abs() < 1e-15);

        let s = FieldProfile::sauter(1.0, 2.0).unwrap();
        let (wi, wo) = asymptotic_frequencies(&mode(0.0, 1.0, 0.0, 0.0), &s).unwrap();
        assert_eq!((wi, wo), (2.0, 2.0));

        let (wi, wo) = asymptotic_frequencies(&mode(0.7, 1.3, 0.2, 0.0), &s).unwrap();
        assert_eq!(wi, wo);

        let c = FieldProfile::constant(1.0).unwrap();
        assert_eq!(
            asymptotic_frequencies(&mode(1.0, 1.0, 1.0, 1.0), &c),
            Err(Error::NotSauter)
        );
    }

    #[test]
    fn dimensionless_examples() {
        let c = FieldProfile::constant(2.0).unwrap();
        let d = dimensionless(&mode(1.0, 1.0, 1.0, 0.3), &c, Statistics::Boson);
        assert_eq!(d.mu, 1.0);
        assert!(d.lambda.is_none() && d.tau_omega_in.is_none());

        // qE₀τ² = 1/2
        let s = FieldProfile::sauter(0.5, 1.0).unwrap();
        let d = dimensionless(&mode(1.0, 1.0, 0.0, 0.0), &s, Statistics::Boson);
        assert_eq!(d.lambda, Some(Complex64::new(0.0, 0.0)));

        let s = FieldProfile::sauter(2.0, 3.0).unwrap();
        let d = dimensionless(&mode(1.0, 1.0, 0.0, 0.0), &s, Statistics::Fermion);
        assert_eq!(d.lambda, Some(Complex64::new(18.0, 0.0)));
    }

    #[test]
    fn boson_lambda_regimes() {
        let real = sauter_lambda(1.0, Statistics::Boson);
        assert_eq!(real.im, 0.0);
        assert!((real.re * real.re - 0.75).abs() < 1e-15);
        let imag = sauter_lambda(0.3, Statistics::Boson);
        assert_eq!(imag.re, 0.0);
        assert!((imag.im * imag.im - (0.25 - 0.09)).abs() < 1e-15);
    }

    #[test]
    fn omega_reaches_asymptotic_values() {
        let m = mode(1.2, 0.8, 0.5, 0.9);
        let s = SauterPulse::new(1.7, 0.6).unwrap();
        let f = FieldProfile::Sauter(s);
        let (wi, wo) = s.asymptotic_frequencies(&m);
        assert!((omega(&m, &f, -50.0 * 0.6) - wi).abs() < 1e-10);
        assert!((omega(&m, &f, 50.0 * 0.6) - wo).abs() < 1e-10);
    }
}
