//! Plain-text `key=value` run configuration. Blank lines and lines starting
//! with `#` are ignored. Command-line flags override file values.

use crate::output::Format;
use crate::presets::figure_preset;
use crate::sweep::{parse_convention, parse_stat, parse_sweep_arg, FieldKind, FixedParams, SweepSpec};
use crate::{CliError, Result};

pub const KEYS: [&str; 14] = [
    "stat", "field", "m", "q", "kperp", "kz", "E0", "tau", "sweep", "convention", "format", "out",
    "label", "preset",
];

/// Every setting as text, unset ones `None`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub stat: Option<String>,
    pub field: Option<String>,
    pub m: Option<String>,
    pub q: Option<String>,
    pub kperp: Option<String>,
    pub kz: Option<String>,
    pub e0: Option<String>,
    pub tau: Option<String>,
    pub sweep: Option<String>,
    pub convention: Option<String>,
    pub format: Option<String>,
    pub out: Option<String>,
    pub label: Option<String>,
    pub preset: Option<String>,
}

/// What a resolved configuration asks for.
#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Point(SweepSpec),
    Sweep(SweepSpec),
    Preset(String, Vec<SweepSpec>),
}

impl Settings {
    fn slot(&mut self, key: &str) -> Option<&mut Option<String>> {
        Some(match key {
            "stat" => &mut self.stat,
            "field" => &mut self.field,
            "m" => &mut self.m,
            "q" => &mut self.q,
            "kperp" | "k_perp" => &mut self.kperp,
            "kz" | "k_z" => &mut self.kz,
            "E0" | "e0" => &mut self.e0,
            "tau" => &mut self.tau,
            "sweep" => &mut self.sweep,
            "convention" => &mut self.convention,
            "format" => &mut self.format,
            "out" => &mut self.out,
            "label" => &mut self.label,
            "preset" => &mut self.preset,
            _ => return None,
        })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut s = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| CliError::Parse { line: i + 1, message };
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| err("expected key=value".into()))?;
            let (k, v) = (k.trim(), v.trim());
            let slot = s
                .slot(k)
                .ok_or_else(|| err(format!("unknown key {k:?}; expected one of {}", KEYS.join(", "))))?;
            *slot = Some(v.to_string());
        }
        Ok(s)
    }

    /// Values set in `other` replace ours.
    pub fn overlay(mut self, other: Settings) -> Self {
        let Settings {
            stat,
            field,
            m,
            q,
            kperp,
            kz,
            e0,
            tau,
            sweep,
            convention,
            format,
            out,
            label,
            preset,
        } = other;
        let pairs = [
            (&mut self.stat, stat),
            (&mut self.field, field),
            (&mut self.m, m),
            (&mut self.q, q),
            (&mut self.kperp, kperp),
            (&mut self.kz, kz),
            (&mut self.e0, e0),
            (&mut self.tau, tau),
            (&mut self.sweep, sweep),
            (&mut self.convention, convention),
            (&mut self.format, format),
            (&mut self.out, out),
            (&mut self.label, label),
            (&mut self.preset, preset),
        ];
        for (dst, src) in pairs {
            if src.is_some() {
                *dst = src;
            }
        }
        self
    }

    pub fn format(&self) -> Result<Format> {
        self.format.as_deref().unwrap_or("csv").parse()
    }

    fn number(key: &str, v: &Option<String>, default: f64) -> Result<f64> {
        match v {
            None => Ok(default),
            Some(s) => s.parse().map_err(|e| CliError::BadValue {
                key: key.into(),
                message: format!("{s:?}: {e}"),
            }),
        }
    }

    pub fn job(&self) -> Result<Job> {
        if let Some(name) = &self.preset {
            if self.sweep.is_some() {
                return Err(CliError::InvalidSpec("preset and sweep are mutually exclusive".into()));
            }
            return Ok(Job::Preset(name.clone(), figure_preset(name)?));
        }
        let d = FixedParams::default();
        let fixed = FixedParams {
            m: Self::number("m", &self.m, d.m)?,
            q: Self::number("q", &self.q, d.q)?,
            k_perp: Self::number("kperp", &self.kperp, d.k_perp)?,
            k_z: Self::number("kz", &self.kz, d.k_z)?,
            e0: Self::number("E0", &self.e0, d.e0)?,
            tau: Self::number("tau", &self.tau, d.tau)?,
        };
        let stat = parse_stat(self.stat.as_deref().unwrap_or("boson"))?;
        let field_kind: FieldKind = self.field.as_deref().unwrap_or("constant").parse()?;
        let convention = parse_convention(self.convention.as_deref().unwrap_or("consistent"))?;
        let (axis, start, stop, steps, scale) = match &self.sweep {
            Some(arg) => parse_sweep_arg(arg)?,
            None => {
                let point = SweepSpec {
                    label: self.label.clone().unwrap_or_else(|| "point".into()),
                    axis: crate::sweep::Axis::E0,
                    start: fixed.e0,
                    stop: fixed.e0,
                    steps: 1,
                    scale: crate::sweep::Scale::Linear,
                    fixed,
                    stat,
                    field_kind,
                    convention,
                    notes: vec![],
                };
                return Ok(Job::Point(point));
            }
        };
        let spec = SweepSpec {
            label: self.label.clone().unwrap_or_else(|| "sweep".into()),
            axis,
            start,
            stop,
            steps,
            scale,
            fixed,
            stat,
            field_kind,
            convention,
            notes: vec![],
        };
        spec.validate()?;
        Ok(Job::Sweep(spec))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::Axis;

    #[test]
    fn parses_file_and_flags_override() {
        let file = Settings::parse("# run\nstat = fermion\nE0=3\n\nsweep=m:0:2:5\nlabel=a\n").unwrap();
        let flags = Settings {
            e0: Some("4".into()),
            label: Some("b".into()),
            ..Settings::default()
        };
        let merged = file.overlay(flags);
        let Job::Sweep(spec) = merged.job().unwrap() else {
            panic!("expected a sweep");
        };
        assert_eq!(spec.stat, schwinger_core::Statistics::Fermion);
        assert_eq!(spec.fixed.e0, 4.0);
        assert_eq!(spec.axis, Axis::M);
        assert_eq!(spec.label, "b");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Settings::parse("colour=red"), Err(CliError::Parse { line: 1, .. })));
        assert!(matches!(Settings::parse("\nm 3"), Err(CliError::Parse { line: 2, .. })));
        let s = Settings {
            m: Some("heavy".into()),
            ..Settings::default()
        };
        assert!(matches!(s.job(), Err(CliError::BadValue { .. })));
        let s = Settings {
            preset: Some("fig1".into()),
            sweep: Some("m:0:1:3".into()),
            ..Settings::default()
        };
        assert!(matches!(s.job(), Err(CliError::InvalidSpec(_))));
    }

    #[test]
    fn point_without_sweep() {
        let Job::Point(spec) = Settings::default().job().unwrap() else {
            panic!("expected a point");
        };
        assert_eq!(spec.fixed, FixedParams::default());
    }
}
