//! Parameter sets of the ten published figures, one [`SweepSpec`] per curve.

use schwinger_core::{ExponentConvention, Statistics};

use crate::sweep::{Axis, FieldKind, FixedParams, Scale, SweepSpec};
use crate::{CliError, Result};

pub const PRESET_NAMES: [&str; 10] = [
    "fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10",
];

/// Points per curve.
pub const PRESET_STEPS: usize = 401;

struct Curve {
    label: String,
    fixed: FixedParams,
}

fn unit() -> FixedParams {
    FixedParams {
        m: 1.0,
        q: 1.0,
        k_perp: 1.0,
        k_z: 1.0,
        e0: 1.0,
        tau: 1.0,
    }
}

fn tag(x: f64) -> String {
    x.to_string().replace('.', "p")
}

#[allow(clippy::too_many_arguments)]
fn build(
    fig: &str,
    stat: Statistics,
    field_kind: FieldKind,
    axis: Axis,
    (start, stop, scale): (f64, f64, Scale),
    curves: Vec<Curve>,
    notes: &[&str],
) -> Vec<SweepSpec> {
    let conventions: &[ExponentConvention] =
        if stat == Statistics::Fermion && field_kind == FieldKind::Constant {
            &[ExponentConvention::Consistent, ExponentConvention::Paper]
        } else {
            &[ExponentConvention::Consistent]
        };
    let mut specs = Vec::new();
    for curve in &curves {
        for &convention in conventions {
            let mut label = format!("{fig}_{}", curve.label);
            let mut curve_notes: Vec<String> = notes.iter().map(|s| s.to_string()).collect();
            if conventions.len() > 1 {
                label.push('_');
                label.push_str(convention.name());
                if convention == ExponentConvention::Paper {
                    curve_notes.push("fermion |beta|^2 = exp(-pi mu / 2) variant".into());
                }
            }
            specs.push(SweepSpec {
                label,
                axis,
                start,
                stop,
                steps: PRESET_STEPS,
                scale,
                fixed: curve.fixed,
                stat,
                field_kind,
                convention,
                notes: curve_notes,
            });
        }
    }
    specs
}

pub fn figure_preset(name: &str) -> Result<Vec<SweepSpec>> {
    use FieldKind::{Constant, Sauter};
    use Scale::{Linear, Log};
    use Statistics::{Boson, Fermion};

    let base = FixedParams {
        k_z: 0.0,
        ..unit()
    };
    let masses = |f: FixedParams| -> Vec<Curve> {
        [0.0, 1.0, 2.0]
            .into_iter()
            .map(|m| Curve {
                label: format!("m{}", tag(m)),
                fixed: FixedParams { m, ..f },
            })
            .collect()
    };
    let fields = |f: FixedParams, es: &[f64]| -> Vec<Curve> {
        es.iter()
            .map(|&e0| Curve {
                label: format!("E{}", tag(e0)),
                fixed: FixedParams { e0, ..f },
            })
            .collect()
    };
    let widths = |f: FixedParams, taus: &[f64]| -> Vec<Curve> {
        taus.iter()
            .map(|&tau| Curve {
                label: format!("tau{}", tag(tau)),
                fixed: FixedParams { tau, ..f },
            })
            .collect()
    };
    let field_kperp = |f: FixedParams| -> Vec<Curve> {
        [(2.0, 0.0), (2.0, 1.0), (1.0, 0.0), (1.0, 1.0)]
            .into_iter()
            .map(|(e0, k_perp)| Curve {
                label: format!("E{}_kperp{}", tag(e0), tag(k_perp)),
                fixed: FixedParams { e0, k_perp, ..f },
            })
            .collect()
    };

    let specs = match name {
        "fig1" => build("fig1", Boson, Constant, Axis::E0, (0.1, 20.0, Log), masses(base), &[]),
        "fig2" => build(
            "fig2",
            Boson,
            Constant,
            Axis::M,
            (0.0, 5.0, Linear),
            fields(base, &[10.0, 5.0, 3.0]),
            &[],
        ),
        "fig3" => build("fig3", Fermion, Constant, Axis::E0, (0.1, 100.0, Log), masses(base), &[]),
        "fig4" => build(
            "fig4",
            Fermion,
            Constant,
            Axis::M,
            (0.0, 5.0, Linear),
            fields(base, &[7.0, 12.0, 20.0]),
            &[],
        ),
        "fig5" => build(
            "fig5",
            Boson,
            Sauter,
            Axis::E0,
            (0.1, 1e4, Log),
            widths(unit(), &[0.3, 0.2, 0.02, 0.01]),
            &[],
        ),
        "fig6" => build(
            "fig6",
            Boson,
            Sauter,
            Axis::KZ,
            (-10.0, 10.0, Linear),
            widths(FixedParams { e0: 10.0, ..unit() }, &[0.5, 0.2, 0.1]),
            &["E0=10 is shared by all curves"],
        ),
        "fig7" => build(
            "fig7",
            Boson,
            Sauter,
            Axis::Tau,
            (0.01, 10.0, Log),
            field_kperp(unit()),
            &[],
        ),
        "fig8" => build(
            "fig8",
            Fermion,
            Sauter,
            Axis::E0,
            (0.1, 1e4, Log),
            widths(unit(), &[2.0, 0.02, 0.01]),
            &[],
        ),
        "fig9" => build(
            "fig9",
            Fermion,
            Sauter,
            Axis::KZ,
            (-30.0, 30.0, Linear),
            [(20.0, 1.0), (4.0, 2.0), (2.0, 3.0)]
                .into_iter()
                .map(|(e0, tau)| Curve {
                    label: format!("E{}_tau{}", tag(e0), tag(tau)),
                    fixed: FixedParams { e0, tau, ..unit() },
                })
                .collect(),
            &["each curve uses its own E0; a shared E0=10 is not applied"],
        ),
        "fig10" => build(
            "fig10",
            Fermion,
            Sauter,
            Axis::Tau,
            (0.01, 10.0, Log),
            field_kperp(unit()),
            &[],
        ),
        _ => return Err(CliError::UnknownPreset(name.to_string())),
    };
    Ok(specs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn curve_counts() {
        let count = |n: &str| figure_preset(n).unwrap().len();
        assert_eq!(count("fig1"), 3);
        assert_eq!(count("fig2"), 3);
        // Fermion constant-field presets come in both conventions.
        assert_eq!(count("fig3"), 6);
        assert_eq!(count("fig4"), 6);
        assert_eq!(count("fig5"), 4);
        assert_eq!(count("fig6"), 3);
        assert_eq!(count("fig7"), 4);
        assert_eq!(count("fig8"), 3);
        assert_eq!(count("fig9"), 3);
        assert_eq!(count("fig10"), 4);
        assert!(matches!(figure_preset("fig11"), Err(CliError::UnknownPreset(_))));
    }

    #[test]
    fn parameter_sets() {
        let fig1 = figure_preset("fig1").unwrap();
        let masses: Vec<f64> = fig1.iter().map(|s| s.fixed.m).collect();
        assert_eq!(masses, vec![0.0, 1.0, 2.0]);
        assert!(fig1.iter().all(|s| s.fixed.q == 1.0 && s.fixed.k_perp == 1.0));
        let taus: Vec<f64> = figure_preset("fig5").unwrap().iter().map(|s| s.fixed.tau).collect();
        assert_eq!(taus, vec![0.3, 0.2, 0.02, 0.01]);
        let fig10 = figure_preset("fig10").unwrap();
        let pairs: Vec<(f64, f64)> = fig10.iter().map(|s| (s.fixed.e0, s.fixed.k_perp)).collect();
        assert_eq!(pairs, vec![(2.0, 0.0), (2.0, 1.0), (1.0, 0.0), (1.0, 1.0)]);
        assert!(fig10
            .iter()
            .all(|s| s.stat == Statistics::Fermion && s.field_kind == FieldKind::Sauter && s.axis == Axis::Tau));
    }

    #[test]
    fn labels_are_unique_and_specs_valid() {
        let mut labels = std::collections::HashSet::new();
        for name in PRESET_NAMES {
            for spec in figure_preset(name).unwrap() {
                spec.validate().unwrap();
                assert!(labels.insert(spec.label.clone()), "{}", spec.label);
            }
        }
        assert!(labels.contains("fig3_m0_paper") && labels.contains("fig3_m0_consistent"));
    }
}
