//! Schwinger pair production in constant and Sauter-pulse electric fields.
//!
//! The crate computes Bogoliubov coefficient moduli `|α|²`, `|β|²` for a single
//! charged mode pair `(k, -k)` of a scalar (bosonic) or Dirac (fermionic) field,
//! and the von Neumann entropy of entanglement between the produced particle and
//! antiparticle. All quantities are in natural units (`c = ħ = 1`).
//!
//! Module map:
//!
//! * [`fields`]: field profiles, gauge potential and mode frequencies.
//! * [`specfun`]: complex log-gamma and log-domain hyperbolic arithmetic.
//! * [`bogoliubov`]: closed-form coefficient moduli and the hypergeometric
//!   connection-coefficient route for the Sauter pulse.
//! * [`entanglement`]: Schmidt spectra of the in-vacuum and entropies.
//! * [`oracle`]: direct time integration of the mode equations, used as an
//!   independent check of every closed form.
//!
//! ```
//! use schwinger_core::{bogoliubov, entanglement, FieldProfile, ModeParams, Statistics};
//!
//! let mode = ModeParams::new(1.0, 1.0, 1.0, 0.0).unwrap();
//! let field = FieldProfile::constant(10.0).unwrap();
//! let moduli = bogoliubov::moduli(&mode, &field, Statistics::Boson).unwrap();
//! let report = entanglement::entropy(&moduli).unwrap();
//! assert!((report.beta2 - (-std::f64::consts::PI / 5.0).exp()).abs() < 1e-15);
//! ```

pub mod bogoliubov;
pub mod entanglement;
pub mod error;
pub mod fields;
pub mod oracle;
pub mod specfun;

pub use bogoliubov::{BogoliubovModuli, ExponentConvention, Statistics};
pub use entanglement::{EntropyReport, SchmidtSpectrum};
pub use error::{Error, Result};
pub use fields::{DimensionlessParams, FieldProfile, ModeParams};
pub use specfun::LogValue;
