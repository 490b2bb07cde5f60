use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use schwinger_core::bogoliubov::{constant_field_moduli_with, moduli};
use schwinger_core::entanglement::{entropy, EntropyReport};
use schwinger_core::{ExponentConvention, FieldProfile, ModeParams, Statistics};

use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    E0,
    M,
    KPerp,
    KZ,
    Tau,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Self::E0 => "E0",
            Self::M => "m",
            Self::KPerp => "k_perp",
            Self::KZ => "k_z",
            Self::Tau => "tau",
        }
    }
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E0" | "e0" | "E" => Ok(Self::E0),
            "m" => Ok(Self::M),
            "k_perp" | "kperp" => Ok(Self::KPerp),
            "k_z" | "kz" => Ok(Self::KZ),
            "tau" => Ok(Self::Tau),
            _ => Err(CliError::BadValue {
                key: "axis".into(),
                message: format!("{s:?} is not one of E0, m, k_perp, k_z, tau"),
            }),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

impl Scale {
    pub fn name(self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Log => "log",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldKind {
    Constant,
    Sauter,
}

impl FieldKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Constant => "constant",
            Self::Sauter => "sauter",
        }
    }
}

impl FromStr for FieldKind {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "constant" => Ok(Self::Constant),
            "sauter" => Ok(Self::Sauter),
            _ => Err(CliError::BadValue {
                key: "field".into(),
                message: format!("{s:?} is not one of constant, sauter"),
            }),
        }
    }
}

pub fn parse_stat(s: &str) -> Result<Statistics> {
    match s {
        "boson" => Ok(Statistics::Boson),
        "fermion" => Ok(Statistics::Fermion),
        _ => Err(CliError::BadValue {
            key: "stat".into(),
            message: format!("{s:?} is not one of boson, fermion"),
        }),
    }
}

pub fn parse_convention(s: &str) -> Result<ExponentConvention> {
    match s {
        "consistent" => Ok(ExponentConvention::Consistent),
        "paper" => Ok(ExponentConvention::Paper),
        _ => Err(CliError::BadValue {
            key: "convention".into(),
            message: format!("{s:?} is not one of consistent, paper"),
        }),
    }
}

/// Values of every mode and field parameter; the swept one is overridden per
/// point. `tau` is ignored for a constant field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedParams {
    pub m: f64,
    pub q: f64,
    pub k_perp: f64,
    pub k_z: f64,
    pub e0: f64,
    pub tau: f64,
}

impl Default for FixedParams {
    fn default() -> Self {
        Self {
            m: 1.0,
            q: 1.0,
            k_perp: 1.0,
            k_z: 0.0,
            e0: 1.0,
            tau: 1.0,
        }
    }
}

impl FixedParams {
    pub fn with(mut self, axis: Axis, value: f64) -> Self {
        match axis {
            Axis::E0 => self.e0 = value,
            Axis::M => self.m = value,
            Axis::KPerp => self.k_perp = value,
            Axis::KZ => self.k_z = value,
            Axis::Tau => self.tau = value,
        }
        self
    }

    pub fn build(&self, kind: FieldKind) -> schwinger_core::Result<(ModeParams, FieldProfile)> {
        let mode = ModeParams::new(self.m, self.q, self.k_perp, self.k_z)?;
        let field = match kind {
            FieldKind::Constant => FieldProfile::constant(self.e0)?,
            FieldKind::Sauter => FieldProfile::sauter(self.e0, self.tau)?,
        };
        Ok((mode, field))
    }
}

/// One plotted curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub label: String,
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
    pub scale: Scale,
    pub fixed: FixedParams,
    pub stat: Statistics,
    pub field_kind: FieldKind,
    /// Only affects fermions in a constant field.
    pub convention: ExponentConvention,
    /// Free-form remarks written into the output header.
    pub notes: Vec<String>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(CliError::InvalidSpec(format!("{}: {msg}", self.label)));
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return bad("bounds must be finite");
        }
        if !(self.start < self.stop) {
            return bad("start must be below stop");
        }
        if self.steps < 2 {
            return bad("steps must be at least 2");
        }
        if self.scale == Scale::Log && !(self.start > 0.0) {
            return bad("log scale needs a positive start");
        }
        if self.axis == Axis::Tau && self.field_kind != FieldKind::Sauter {
            return bad("a tau axis needs a Sauter pulse");
        }
        Ok(())
    }

    /// A single evaluation at `fixed`, reported with `axis_value = E0`.
    pub fn is_point(&self) -> bool {
        self.steps == 1
    }

    /// Grid points in axis order; the last one is exactly `stop`.
    pub fn axis_values(&self) -> Vec<f64> {
        let n = self.steps;
        let last = (n - 1) as f64;
        (0..n)
            .map(|i| {
                if i == n - 1 {
                    return self.stop;
                }
                let f = i as f64 / last;
                match self.scale {
                    Scale::Linear => self.start + f * (self.stop - self.start),
                    Scale::Log => (self.start.ln() + f * (self.stop / self.start).ln()).exp(),
                }
            })
            .collect()
    }

    /// `key=value` pairs describing the full parameter set.
    pub fn metadata(&self) -> Vec<(String, String)> {
        let mut meta = vec![
            ("label".to_string(), self.label.clone()),
            ("stat".to_string(), self.stat.name().to_string()),
            ("field".to_string(), self.field_kind.name().to_string()),
        ];
        let point = self.is_point();
        if !point {
            meta.extend([
                ("axis".to_string(), self.axis.name().to_string()),
                ("start".to_string(), fmt_float(self.start)),
                ("stop".to_string(), fmt_float(self.stop)),
                ("steps".to_string(), self.steps.to_string()),
                ("scale".to_string(), self.scale.name().to_string()),
            ]);
        }
        let p = &self.fixed;
        let mut fixed = vec![
            ("m", p.m),
            ("q", p.q),
            ("k_perp", p.k_perp),
            ("k_z", p.k_z),
            ("E0", p.e0),
        ];
        if self.field_kind == FieldKind::Sauter {
            fixed.push(("tau", p.tau));
        }
        for (k, v) in fixed {
            if point || k != self.axis.name() {
                meta.push((k.to_string(), fmt_float(v)));
            }
        }
        meta.push(("convention".to_string(), self.convention.name().to_string()));
        for note in &self.notes {
            meta.push(("note".to_string(), note.clone()));
        }
        meta
    }
}

/// Shortest decimal that round-trips.
pub fn fmt_float(x: f64) -> String {
    format!("{x}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis_value: f64,
    #[serde(serialize_with = "finite_or_null")]
    pub beta2: f64,
    #[serde(serialize_with = "finite_or_null")]
    pub alpha2: f64,
    #[serde(serialize_with = "finite_or_null")]
    pub entropy_bits: f64,
    #[serde(serialize_with = "finite_or_null")]
    pub c0_sq: f64,
    #[serde(serialize_with = "finite_or_null")]
    pub mean_pairs: f64,
    /// Why the point could not be computed; the numeric fields are NaN then.
    pub error: Option<String>,
}

fn finite_or_null<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else {
        s.serialize_none()
    }
}

impl SweepRow {
    pub fn from_report(axis_value: f64, r: &EntropyReport) -> Self {
        Self {
            axis_value,
            beta2: r.beta2,
            alpha2: r.alpha2,
            entropy_bits: r.s_bits,
            c0_sq: r.c0_sq,
            mean_pairs: r.mean_pairs,
            error: None,
        }
    }

    pub fn failed(axis_value: f64, error: String) -> Self {
        Self {
            axis_value,
            beta2: f64::NAN,
            alpha2: f64::NAN,
            entropy_bits: f64::NAN,
            c0_sq: f64::NAN,
            mean_pairs: f64::NAN,
            error: Some(error),
        }
    }
}

/// Moduli and entropy of a single point.
pub fn evaluate(
    mode: &ModeParams,
    field: &FieldProfile,
    stat: Statistics,
    convention: ExponentConvention,
) -> schwinger_core::Result<EntropyReport> {
    let m = match field {
        FieldProfile::Constant(c) => constant_field_moduli_with(mode, c.e0(), stat, convention)?,
        FieldProfile::Sauter(_) => moduli(mode, field, stat)?,
    };
    entropy(&m)
}

/// Evaluates every grid point, in parallel, returning rows in axis order.
/// Per-point failures become rows with an error message.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    Ok(spec
        .axis_values()
        .into_par_iter()
        .map(|x| {
            let outcome = spec
                .fixed
                .with(spec.axis, x)
                .build(spec.field_kind)
                .and_then(|(mode, field)| evaluate(&mode, &field, spec.stat, spec.convention));
            match outcome {
                Ok(r) => SweepRow::from_report(x, &r),
                Err(e) => SweepRow::failed(x, e.to_string()),
            }
        })
        .collect())
}

/// Evaluates a single-point spec at its fixed parameters. On failure the row
/// carries the message and the error is returned alongside.
pub fn run_point(spec: &SweepSpec) -> (SweepRow, Option<schwinger_core::Error>) {
    let e0 = spec.fixed.e0;
    match spec
        .fixed
        .build(spec.field_kind)
        .and_then(|(mode, field)| evaluate(&mode, &field, spec.stat, spec.convention))
    {
        Ok(r) => (SweepRow::from_report(e0, &r), None),
        Err(e) => (SweepRow::failed(e0, e.to_string()), Some(e)),
    }
}

/// Parses `axis:start:stop:steps[:log]`.
pub fn parse_sweep_arg(arg: &str) -> Result<(Axis, f64, f64, usize, Scale)> {
    let bad = |message: String| CliError::BadValue {
        key: "sweep".into(),
        message,
    };
    let parts: Vec<&str> = arg.split(':').collect();
    if !(4..=5).contains(&parts.len()) {
        return Err(bad(format!("{arg:?} is not axis:start:stop:steps[:log]")));
    }
    let axis = parts[0].parse()?;
    let num = |s: &str| s.parse::<f64>().map_err(|e| bad(format!("{s:?}: {e}")));
    let steps = parts[3]
        .parse::<usize>()
        .map_err(|e| bad(format!("{:?}: {e}", parts[3])))?;
    let scale = match parts.get(4) {
        None | Some(&"linear") => Scale::Linear,
        Some(&"log") => Scale::Log,
        Some(other) => return Err(bad(format!("unknown scale {other:?}"))),
    };
    Ok((axis, num(parts[1])?, num(parts[2])?, steps, scale))
}
