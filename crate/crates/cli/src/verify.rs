//! Invariant checks over all modules, shared by `schwinger verify` and the
//! acceptance tests.

use std::f64::consts::{LN_2, PI};
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use schwinger_core::bogoliubov::{constant_field_moduli, moduli, sauter_ratio_via_gamma, Branch};
use schwinger_core::entanglement::{
    boson_entropy_beta2_form, boson_entropy_x_form, entropy, fermion_max_entropy_field, schmidt_spectrum,
};
use schwinger_core::oracle::{boson_mode_beta2, fermion_mode_beta2, OracleConfig};
use schwinger_core::specfun::{ln_abs_gamma_sq, log_add_exp, log_cosh, log_sinh};
use schwinger_core::{BogoliubovModuli, Error, FieldProfile, LogValue, ModeParams, Statistics};

use crate::presets::figure_preset;
use crate::sampling::{Sampler, DEFAULT_SEED};
use crate::sweep::{run_sweep, FieldKind};
use crate::{CliError, Result};

pub const NORMALIZATION_RTOL: f64 = 1e-10;
pub const GAMMA_RTOL: f64 = 1e-11;
pub const CONNECTION_RTOL: f64 = 1e-9;
pub const ORACLE_RTOL_SAUTER: f64 = 1e-4;
pub const ORACLE_RTOL_CONSTANT: f64 = 1e-3;
pub const MAX_ENTROPY_ATOL: f64 = 1e-12;
pub const SATURATION_ATOL: f64 = 1e-4;
pub const ENTROPY_FORMS_RTOL: f64 = 1e-12;
pub const SPECTRUM_ENTROPY_ATOL: f64 = 1e-10;
pub const SPECTRUM_TAIL: f64 = 1e-15;
pub const SUM_RULE_ATOL: f64 = 1e-12;
pub const LONG_PULSE_RTOL: f64 = 1e-2;
pub const SHORT_PULSE_BOUND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

impl FromStr for Level {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "quick" => Ok(Self::Quick),
            "full" => Ok(Self::Full),
            _ => Err(CliError::BadValue {
                key: "level".into(),
                message: format!("{s:?} is not one of quick, full"),
            }),
        }
    }
}

fn finite_or_null<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_none()
    }
}

/// One oracle-vs-closed-form comparison.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPoint {
    pub stat: &'static str,
    pub field: &'static str,
    pub m: f64,
    pub k_perp: f64,
    pub k_z: f64,
    pub e0: f64,
    pub tau: Option<f64>,
    pub closed_form: Option<f64>,
    pub oracle: Option<f64>,
    pub rel_error: Option<f64>,
    /// `ok`, `degenerate`, or the error message.
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub tolerance: f64,
    /// Worst error seen, in the units of `tolerance`.
    #[serde(serialize_with = "finite_or_null")]
    pub max_error: f64,
    pub points: usize,
    pub detail: String,
    /// An oracle run failed to converge or ran out of steps.
    pub numerical_error: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub grid: Vec<GridPoint>,
}

/// Accumulates errors against a tolerance.
struct Tally {
    tolerance: f64,
    worst: f64,
    points: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(tolerance: f64) -> Self {
        Self {
            tolerance,
            worst: 0.0,
            points: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, err: f64, context: impl FnOnce() -> String) {
        self.points += 1;
        if err.is_nan() {
            self.worst = f64::NAN;
        } else if !self.worst.is_nan() {
            self.worst = self.worst.max(err);
        }
        if !(err <= self.tolerance) {
            self.fail(format!("{} (error {err:.3e})", context()));
        }
    }

    fn fail(&mut self, message: String) {
        if self.failures.len() < 5 {
            self.failures.push(message);
        } else if self.failures.len() == 5 {
            self.failures.push("...".into());
        }
    }

    fn finish(self, name: &str) -> CheckResult {
        let passed = self.failures.is_empty();
        let detail = if passed {
            format!("{} points, worst error {:.3e}", self.points, self.worst)
        } else {
            self.failures.join("; ")
        };
        CheckResult {
            name: name.into(),
            passed,
            tolerance: self.tolerance,
            max_error: self.worst,
            points: self.points,
            detail,
            numerical_error: false,
            grid: Vec::new(),
        }
    }
}

/// `|a/b - 1|` from logs.
fn rel_from_ln(ln_a: f64, ln_b: f64) -> f64 {
    if ln_a == ln_b {
        0.0
    } else {
        (ln_a - ln_b).exp_m1().abs()
    }
}

const CASES: [(Statistics, FieldKind); 4] = [
    (Statistics::Boson, FieldKind::Constant),
    (Statistics::Boson, FieldKind::Sauter),
    (Statistics::Fermion, FieldKind::Constant),
    (Statistics::Fermion, FieldKind::Sauter),
];

pub type ModuliFn = dyn Fn(&ModeParams, &FieldProfile, Statistics) -> schwinger_core::Result<BogoliubovModuli>;

/// `|α|² ∓ |β|² = 1` on `per_case` random tuples for each statistics and
/// field kind. The moduli source is a parameter so a broken implementation can
/// be shown to fail.
pub fn check_normalization(source: &ModuliFn, per_case: usize, rtol: f64) -> CheckResult {
    let mut tally = Tally::new(rtol);
    let mut rng = Sampler::new(DEFAULT_SEED);
    for (stat, kind) in CASES {
        for _ in 0..per_case {
            let mode = rng.mode();
            let field = rng.field(kind);
            match source(&mode, &field, stat) {
                Ok(m) => {
                    let defect = m
                        .normalization_defect()
                        .unwrap_or_else(|| m.log_normalization_defect());
                    tally.record(defect, || format!("{stat:?} {mode:?} {field:?}"));
                }
                Err(e) => tally.fail(format!("{stat:?} {mode:?} {field:?}: {e}")),
            }
        }
    }
    tally.finish("normalization")
}

/// `π/|Γ(1/2 + ix)|² = cosh πx` and `|Γ(ix)|² = π/(x sinh πx)` on `n` points
/// of `[0.1, 20]`, with the log-gamma implementation on the left.
pub fn check_gamma_identities(n: usize, rtol: f64) -> CheckResult {
    let mut tally = Tally::new(rtol);
    for i in 0..n {
        let x = 0.1 + (20.0 - 0.1) * i as f64 / (n - 1) as f64;
        let half = ln_abs_gamma_sq(Complex64::new(0.5, x));
        let imag = ln_abs_gamma_sq(Complex64::new(0.0, x));
        let sinh = log_sinh(PI * x);
        match (half, imag, sinh) {
            (Ok(half), Ok(imag), Ok(sinh)) => {
                tally.record(rel_from_ln(PI.ln() - half, log_cosh(PI * x)), || {
                    format!("cosh identity at x = {x}")
                });
                tally.record(rel_from_ln(imag, PI.ln() - x.ln() - sinh), || {
                    format!("sinh identity at x = {x}")
                });
            }
            _ => tally.fail(format!("gamma evaluation failed at x = {x}")),
        }
    }
    tally.finish("gamma_identities")
}

/// Connection-coefficient ratios `|λ12/λ11|²` and `|λ21/λ22|²` against the
/// cosh closed form of `|β/α|²` on `n` random Sauter tuples, both statistics,
/// both fermion branches. Fermion ratios include the spinor-norm factor.
pub fn check_connection_coefficients(n: usize, rtol: f64) -> CheckResult {
    let mut tally = Tally::new(rtol);
    let mut rng = Sampler::new(DEFAULT_SEED ^ 0xa);
    for _ in 0..n {
        let mode = rng.mode();
        let field = rng.field(FieldKind::Sauter);
        let FieldProfile::Sauter(pulse) = field else {
            unreachable!("sampled a Sauter pulse")
        };
        for (stat, branches) in [
            (Statistics::Boson, &[Branch::Plus][..]),
            (Statistics::Fermion, &[Branch::Plus, Branch::Minus][..]),
        ] {
            let closed = match moduli(&mode, &field, stat) {
                Ok(m) => m.ratio().ln(),
                Err(e) => {
                    tally.fail(format!("{stat:?} {mode:?} {field:?}: {e}"));
                    continue;
                }
            };
            for &branch in branches {
                match sauter_ratio_via_gamma(&mode, &pulse, stat, branch) {
                    Ok(r) => {
                        for route in [r.positive, r.negative] {
                            tally.record(rel_from_ln(route.ln(), closed), || {
                                format!("{stat:?} {branch:?} {mode:?} {field:?}")
                            });
                        }
                    }
                    Err(e) => tally.fail(format!("{stat:?} {branch:?} {mode:?} {field:?}: {e}")),
                }
            }
        }
    }
    tally.finish("connection_coefficients")
}

/// Draws `|β|²` in `(0, 1)`: alternately uniform and log-uniform down to 1e-15.
fn sample_beta2(rng: &mut Sampler, i: usize) -> f64 {
    if i.is_multiple_of(2) {
        rng.uniform(f64::MIN_POSITIVE, 1.0)
    } else {
        rng.log_uniform(1e-15, 1.0)
    }
}

/// The two boson entropy expressions, in `|β|²` and in `x = |β/α|²`.
pub fn check_entropy_forms(n: usize, rtol: f64) -> CheckResult {
    let mut tally = Tally::new(rtol);
    let mut rng = Sampler::new(DEFAULT_SEED ^ 0xb);
    for i in 0..n {
        let beta2 = sample_beta2(&mut rng, i);
        let ln_b = beta2.ln();
        let via_beta = boson_entropy_beta2_form(ln_b);
        let via_x = boson_entropy_x_form(ln_b - log_add_exp(0.0, ln_b));
        tally.record((via_x - via_beta).abs() / via_beta, || format!("beta2 = {beta2}"));
    }
    tally.finish("entropy_forms")
}

/// `-Σ|c_n|² log₂|c_n|²` over the truncated boson Schmidt spectrum against
/// the closed-form entropy.
pub fn check_spectrum_entropy(n: usize, tail: f64, atol: f64) -> CheckResult {
    let mut tally = Tally::new(atol);
    let mut rng = Sampler::new(DEFAULT_SEED ^ 0xc);
    for i in 0..n {
        let beta2 = sample_beta2(&mut rng, i);
        let outcome = LogValue::from_linear(beta2)
            .and_then(|b| BogoliubovModuli::from_beta2(b, Statistics::Boson))
            .and_then(|m| Ok((entropy(&m)?, schmidt_spectrum(&m)?.summed_entropy(tail)?)));
        match outcome {
            Ok((report, summed)) => tally.record((summed - report.s_bits).abs(), || format!("beta2 = {beta2}")),
            Err(e) => tally.fail(format!("beta2 = {beta2}: {e}")),
        }
    }
    tally.finish("spectrum_entropy")
}

/// Largest boson `|β|²` whose truncated spectrum is materialized in the sum
/// rule check; beyond it the series needs tens of millions of terms.
pub const SUM_RULE_MAX_BOSON_BETA2: f64 = 1e4;

/// Boson `Σ|c_n|² = 1` after truncation, fermion four-weight sum `= 1`, and
/// equal four-party fermion entropies, on random physical tuples.
pub fn check_sum_rules(per_case: usize, tail: f64, atol: f64) -> Vec<CheckResult> {
    let mut boson = Tally::new(atol);
    let mut fermion = Tally::new(atol);
    let mut parties = Tally::new(atol);
    let mut skipped = 0;
    let mut rng = Sampler::new(DEFAULT_SEED ^ 0xd);
    for (stat, kind) in CASES {
        for _ in 0..per_case {
            let mode = rng.mode();
            let field = rng.field(kind);
            let ctx = || format!("{stat:?} {mode:?} {field:?}");
            let m = match moduli(&mode, &field, stat) {
                Ok(m) => m,
                Err(e) => {
                    let t = if stat == Statistics::Boson { &mut boson } else { &mut fermion };
                    t.fail(format!("{}: {e}", ctx()));
                    continue;
                }
            };
            if stat == Statistics::Boson && m.beta2.ln() > SUM_RULE_MAX_BOSON_BETA2.ln() {
                skipped += 1;
                continue;
            }
            let outcome = schmidt_spectrum(&m).and_then(|s| Ok((s.total_weight(tail)?, s)));
            let (total, spectrum) = match outcome {
                Ok(v) => v,
                Err(e) => {
                    let t = if stat == Statistics::Boson { &mut boson } else { &mut fermion };
                    t.fail(format!("{}: {e}", ctx()));
                    continue;
                }
            };
            match stat {
                Statistics::Boson => boson.record((total - 1.0).abs(), ctx),
                Statistics::Fermion => {
                    fermion.record((total - 1.0).abs(), ctx);
                    let s: Vec<f64> = (0..4)
                        .map(|p| spectrum.fermion_reduced_state(p).map_or(f64::NAN, |r| r.entropy_bits()))
                        .collect();
                    let spread = s.iter().cloned().fold(f64::MIN, f64::max) - s.iter().cloned().fold(f64::MAX, f64::min);
                    parties.record(spread, ctx);
                }
            }
        }
    }
    let mut b = boson.finish("boson_sum_rule");
    b.detail.push_str(&format!(
        ", {skipped} tuples with |beta|^2 > {SUM_RULE_MAX_BOSON_BETA2:e} skipped"
    ));
    vec![b, fermion.finish("fermion_sum_rule"), parties.finish("fermion_party_entropies")]
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

/// Modes for the fermion entropy maximum: `(m, k_⊥, q)`.
pub const MAX_ENTROPY_MODES: [(f64, f64, f64); 3] = [(0.0, 1.0, 1.0), (1.0, 1.0, 1.0), (0.5, 2.0, 0.7)];

/// The constant-field fermion entropy peaks at `E₀ = π m_⊥²/(q ln 2)` to
/// within one step of an `n`-point log grid spanning two decades around it,
/// and equals one bit there to `atol`.
pub fn check_max_entropy_field(n: usize, atol: f64) -> CheckResult {
    let mut tally = Tally::new(atol);
    for (m, kp, q) in MAX_ENTROPY_MODES {
        let mode = ModeParams::new(m, q, kp, 0.0).expect("valid mode");
        let e_star = match fermion_max_entropy_field(&mode) {
            Ok(e) => e,
            Err(e) => {
                tally.fail(format!("{mode:?}: {e}"));
                continue;
            }
        };
        let expected = PI * (m * m + kp * kp) / (q * LN_2);
        if (e_star / expected - 1.0).abs() > 1e-15 {
            tally.fail(format!("{mode:?}: field {e_star} differs from {expected}"));
        }
        let (lo, hi) = ((e_star / 10.0).ln(), (e_star * 10.0).ln());
        let step = (hi - lo) / (n - 1) as f64;
        let s: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| {
                let e = (lo + step * i as f64).exp();
                constant_field_moduli(&mode, e, Statistics::Fermion)
                    .and_then(|m| entropy(&m))
                    .map_or(f64::NAN, |r| r.s_bits)
            })
            .collect();
        let peak = lo + step * argmax(&s) as f64;
        if (peak - e_star.ln()).abs() > step {
            tally.fail(format!("{mode:?}: grid argmax at E0 = {} vs {e_star}", peak.exp()));
        }
        match constant_field_moduli(&mode, e_star, Statistics::Fermion).and_then(|m| entropy(&m)) {
            Ok(r) => tally.record((r.s_bits - 1.0).abs(), || format!("{mode:?}: S at maximum")),
            Err(e) => tally.fail(format!("{mode:?}: {e}")),
        }
    }
    tally.finish("max_entropy_field")
}

/// The constant-field boson entropy at `|β|² = 1 - 1e-6` is two bits.
pub fn check_boson_saturation(atol: f64) -> CheckResult {
    let mut tally = Tally::new(atol);
    let mode = ModeParams::new(1.0, 1.0, 1.0, 0.0).expect("valid mode");
    let target: f64 = 1.0 - 1e-6;
    let e0 = -PI * mode.transverse_mass_sq() / (mode.q() * target.ln());
    match constant_field_moduli(&mode, e0, Statistics::Boson).and_then(|m| entropy(&m)) {
        Ok(r) => {
            if (r.beta2 / target - 1.0).abs() > 1e-12 {
                tally.fail(format!("beta2 = {} at E0 = {e0}", r.beta2));
            }
            tally.record((r.s_bits - 2.0).abs(), || format!("S = {} at E0 = {e0}", r.s_bits));
        }
        Err(e) => tally.fail(e.to_string()),
    }
    tally.finish("boson_saturation")
}

fn diffs(v: &[f64]) -> Vec<f64> {
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

pub fn strictly_increasing(v: &[f64]) -> bool {
    diffs(v).iter().all(|&d| d > 0.0)
}

pub fn strictly_decreasing(v: &[f64]) -> bool {
    diffs(v).iter().all(|&d| d < 0.0)
}

/// A first-difference sign change from `+` to `-`.
pub fn has_interior_maximum(v: &[f64]) -> bool {
    diffs(v).windows(2).any(|d| d[0] > 0.0 && d[1] < 0.0)
}

/// Applies `shape` to the entropy column of every curve of `preset` whose
/// label passes `filter`.
fn check_preset_shape(
    name: &str,
    preset: &str,
    filter: impl Fn(&str) -> bool,
    shape: fn(&[f64]) -> bool,
) -> CheckResult {
    let mut tally = Tally::new(0.0);
    match figure_preset(preset) {
        Ok(specs) => {
            for spec in specs.iter().filter(|s| filter(&s.label)) {
                match run_sweep(spec) {
                    Ok(rows) => {
                        if let Some(r) = rows.iter().find(|r| r.error.is_some()) {
                            tally.fail(format!("{}: {}", spec.label, r.error.as_deref().unwrap_or("")));
                            continue;
                        }
                        let s: Vec<f64> = rows.iter().map(|r| r.entropy_bits).collect();
                        tally.record(if shape(&s) { 0.0 } else { 1.0 }, || spec.label.clone());
                    }
                    Err(e) => tally.fail(format!("{}: {e}", spec.label)),
                }
            }
        }
        Err(e) => tally.fail(e.to_string()),
    }
    if tally.points == 0 && tally.failures.is_empty() {
        tally.fail(format!("no curve of {preset} selected"));
    }
    tally.finish(name)
}

pub fn check_fig1_increasing() -> CheckResult {
    check_preset_shape("fig1_entropy_increasing", "fig1", |_| true, strictly_increasing)
}

pub fn check_figure_shapes() -> Vec<CheckResult> {
    vec![
        check_preset_shape("fig5_interior_maximum", "fig5", |l| l == "fig5_tau0p02", has_interior_maximum),
        check_preset_shape("fig6_interior_maximum", "fig6", |_| true, has_interior_maximum),
        check_preset_shape("fig2_entropy_decreasing", "fig2", |_| true, strictly_decreasing),
    ]
}

/// A long Sauter pulse reproduces the constant-field `e^{-2π}` at
/// `m = k_⊥ = q = E₀ = 1`, `k_z = 0`; a short one produces no fermion pairs.
pub fn check_tau_limits(long_rtol: f64, short_bound: f64) -> Vec<CheckResult> {
    let mode = ModeParams::new(1.0, 1.0, 1.0, 0.0).expect("valid mode");
    let mut long = Tally::new(long_rtol);
    let field = FieldProfile::sauter(1.0, 50.0).expect("valid pulse");
    for stat in [Statistics::Boson, Statistics::Fermion] {
        match moduli(&mode, &field, stat) {
            Ok(m) => long.record(rel_from_ln(m.beta2.ln(), -2.0 * PI), || format!("{stat:?} tau = 50")),
            Err(e) => long.fail(format!("{stat:?}: {e}")),
        }
    }
    let mut short = Tally::new(short_bound);
    let field = FieldProfile::sauter(1.0, 1e-3).expect("valid pulse");
    for kz in [0.0, 1.0] {
        let mode = mode.with_k_z(kz).expect("valid mode");
        match moduli(&mode, &field, Statistics::Fermion).and_then(|m| m.beta2.exp()) {
            Ok(b) => short.record(b, || format!("fermion k_z = {kz} tau = 1e-3")),
            Err(e) => short.fail(format!("k_z = {kz}: {e}")),
        }
    }
    vec![long.finish("long_pulse_limit"), short.finish("short_pulse_limit")]
}

/// The canonical oracle grid: `m, k_⊥ ∈ {0, 1, 2}`, `k_z ∈ {-1, 0, 1}`,
/// `E₀ ∈ {1, 5, 10}`, and `τ ∈ {0.5, 1, 2}` for Sauter pulses.
pub fn oracle_grid(kind: FieldKind) -> Vec<(ModeParams, FieldProfile)> {
    let vals = [0.0, 1.0, 2.0];
    let taus: &[f64] = match kind {
        FieldKind::Sauter => &[0.5, 1.0, 2.0],
        FieldKind::Constant => &[f64::NAN],
    };
    let mut out = Vec::new();
    for m in vals {
        for kp in vals {
            for kz in [-1.0, 0.0, 1.0] {
                for e in [1.0, 5.0, 10.0] {
                    for &tau in taus {
                        let mode = ModeParams::new(m, 1.0, kp, kz).expect("valid mode");
                        let field = match kind {
                            FieldKind::Constant => FieldProfile::constant(e),
                            FieldKind::Sauter => FieldProfile::sauter(e, tau),
                        }
                        .expect("valid field");
                        out.push((mode, field));
                    }
                }
            }
        }
    }
    out
}

fn grid_point(mode: &ModeParams, field: &FieldProfile, stat: Statistics, cfg: &OracleConfig, rtol: f64) -> (GridPoint, bool) {
    let mut p = GridPoint {
        stat: stat.name(),
        field: match field {
            FieldProfile::Constant(_) => "constant",
            FieldProfile::Sauter(_) => "sauter",
        },
        m: mode.m(),
        k_perp: mode.k_perp(),
        k_z: mode.k_z(),
        e0: field.e0(),
        tau: field.tau(),
        closed_form: None,
        oracle: None,
        rel_error: None,
        status: String::new(),
    };
    let run = || match stat {
        Statistics::Boson => boson_mode_beta2(mode, field, cfg),
        Statistics::Fermion => fermion_mode_beta2(mode, field, cfg),
    };
    let numerical = |e: &Error| matches!(e, Error::NonConvergence(_) | Error::StepBudget(_));
    let closed = match moduli(mode, field, stat).and_then(|m| m.beta2.exp()) {
        Ok(b) => b,
        Err(Error::DegenerateMode(_)) => {
            return match run() {
                Err(Error::DegenerateMode(_)) => {
                    p.status = "degenerate".into();
                    (p, false)
                }
                Err(e) => {
                    let n = numerical(&e);
                    p.status = format!("closed form degenerate, oracle: {e}");
                    (p, n)
                }
                Ok(r) => {
                    p.oracle = Some(r.beta2_numeric);
                    p.status = "closed form degenerate, oracle ran".into();
                    (p, false)
                }
            };
        }
        Err(e) => {
            p.status = format!("closed form: {e}");
            return (p, false);
        }
    };
    p.closed_form = Some(closed);
    match run() {
        Ok(r) => {
            let rel = (r.beta2_numeric / closed - 1.0).abs();
            p.oracle = Some(r.beta2_numeric);
            p.rel_error = Some(rel);
            p.status = if rel <= rtol { "ok".into() } else { "mismatch".into() };
            (p, false)
        }
        Err(e) => {
            let n = numerical(&e);
            p.status = format!("oracle: {e}");
            (p, n)
        }
    }
}

/// Oracle against closed form on the canonical grid for one statistics and
/// field kind, with per-point relative errors.
pub fn check_oracle_grid(stat: Statistics, kind: FieldKind, rtol: f64, cfg: &OracleConfig) -> CheckResult {
    let results: Vec<(GridPoint, bool)> = oracle_grid(kind)
        .par_iter()
        .map(|(mode, field)| grid_point(mode, field, stat, cfg, rtol))
        .collect();
    let mut tally = Tally::new(rtol);
    let mut numerical_error = false;
    let mut degenerate = 0;
    let mut grid = Vec::with_capacity(results.len());
    for (p, numerical) in results {
        numerical_error |= numerical;
        match (p.status.as_str(), p.rel_error) {
            ("degenerate", _) => degenerate += 1,
            (_, Some(rel)) => tally.record(rel, || format!("{p:?}")),
            _ => tally.fail(p.status.clone()),
        }
        grid.push(p);
    }
    let mut r = tally.finish(&format!("oracle_grid_{}_{}", stat.name(), kind.name()));
    if r.passed {
        r.detail.push_str(&format!(", {degenerate} degenerate points skipped"));
    }
    r.numerical_error = numerical_error;
    r.grid = grid;
    r
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub level: Level,
    pub passed: bool,
    pub numerical_error: bool,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    /// 0 if every check passed, 3 if an oracle run failed numerically,
    /// otherwise 1.
    pub fn exit_code(&self) -> i32 {
        if self.numerical_error {
            3
        } else if self.passed {
            0
        } else {
            1
        }
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            s.push_str(&format!(
                "{} {}: {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        s
    }
}

pub fn run(level: Level) -> VerifyReport {
    let mut checks = vec![
        check_normalization(&moduli, 1000, NORMALIZATION_RTOL),
        check_gamma_identities(400, GAMMA_RTOL),
        check_connection_coefficients(100, CONNECTION_RTOL),
        check_entropy_forms(1000, ENTROPY_FORMS_RTOL),
        check_spectrum_entropy(1000, SPECTRUM_TAIL, SPECTRUM_ENTROPY_ATOL),
    ];
    checks.extend(check_sum_rules(250, SPECTRUM_TAIL, SUM_RULE_ATOL));
    checks.push(check_max_entropy_field(10_000, MAX_ENTROPY_ATOL));
    checks.push(check_boson_saturation(SATURATION_ATOL));
    checks.push(check_fig1_increasing());
    checks.extend(check_figure_shapes());
    checks.extend(check_tau_limits(LONG_PULSE_RTOL, SHORT_PULSE_BOUND));
    if level == Level::Full {
        let cfg = OracleConfig::default();
        for stat in [Statistics::Boson, Statistics::Fermion] {
            checks.push(check_oracle_grid(stat, FieldKind::Constant, ORACLE_RTOL_CONSTANT, &cfg));
            checks.push(check_oracle_grid(stat, FieldKind::Sauter, ORACLE_RTOL_SAUTER, &cfg));
        }
    }
    VerifyReport {
        level,
        passed: checks.iter().all(|c| c.passed),
        numerical_error: checks.iter().any(|c| c.numerical_error),
        checks,
    }
}
