//! The ten acceptance criteria at their stated tolerances. Each prints one
//! PASS/FAIL line; the test fails if any criterion does.

use std::io::Write;
use std::time::{Duration, Instant};

use schwinger_cli::sweep::FieldKind;
use schwinger_cli::verify::{
    check_connection_coefficients, check_boson_saturation, check_entropy_forms, check_fig1_increasing,
    check_figure_shapes, check_gamma_identities, check_max_entropy_field, check_normalization,
    check_oracle_grid, check_spectrum_entropy, check_sum_rules, check_tau_limits, CheckResult,
};
use schwinger_core::bogoliubov::moduli;
use schwinger_core::oracle::OracleConfig;
use schwinger_core::Statistics;

struct Criterion {
    number: usize,
    title: &'static str,
    checks: Vec<CheckResult>,
    elapsed: Duration,
    budget: Option<Duration>,
}

impl Criterion {
    fn run(number: usize, title: &'static str, budget: Option<Duration>, f: impl FnOnce() -> Vec<CheckResult>) -> Self {
        let start = Instant::now();
        let checks = f();
        Self {
            number,
            title,
            checks,
            elapsed: start.elapsed(),
            budget,
        }
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.budget.is_none_or(|b| self.elapsed < b)
    }

    fn line(&self) -> String {
        let details: Vec<String> = self
            .checks
            .iter()
            .map(|c| format!("{} [{}] {}", c.name, if c.passed { "ok" } else { "failed" }, c.detail))
            .collect();
        let budget = self
            .budget
            .map(|b| format!(" (budget {:.0?})", b))
            .unwrap_or_default();
        format!(
            "{} criterion {:>2} {}: {:.2?}{budget}; {}",
            if self.passed() { "PASS" } else { "FAIL" },
            self.number,
            self.title,
            self.elapsed,
            details.join(" | ")
        )
    }
}

#[test]
fn acceptance_criteria() {
    let secs = Duration::from_secs;
    let criteria = vec![
        Criterion::run(1, "normalization identities, 1e3 tuples per case, rtol 1e-10", Some(secs(1)), || {
            vec![check_normalization(&moduli, 1000, 1e-10)]
        }),
        Criterion::run(2, "gamma identities on [0.1, 20], rtol 1e-11", None, || {
            vec![check_gamma_identities(400, 1e-11)]
        }),
        Criterion::run(
            3,
            "connection-coefficient ratios vs cosh closed forms, 100 Sauter tuples, rtol 1e-9 \
             (second ratio taken as |l21/l22|^2, fermion ratios with the spinor-norm factor)",
            Some(secs(5)),
            || vec![check_connection_coefficients(100, 1e-9)],
        ),
        Criterion::run(4, "oracle vs closed forms on the canonical grid, rtol 1e-4 / 1e-3", Some(secs(600)), || {
            let cfg = OracleConfig::default();
            let mut v = Vec::new();
            for stat in [Statistics::Boson, Statistics::Fermion] {
                v.push(check_oracle_grid(stat, FieldKind::Sauter, 1e-4, &cfg));
                v.push(check_oracle_grid(stat, FieldKind::Constant, 1e-3, &cfg));
            }
            v
        }),
        Criterion::run(5, "fermion entropy maximum on a 1e4-point log grid, S = 1 +- 1e-12", None, || {
            vec![check_max_entropy_field(10_000, 1e-12)]
        }),
        Criterion::run(6, "boson saturation S = 2 +- 1e-4 and fig1 monotone", None, || {
            vec![check_boson_saturation(1e-4), check_fig1_increasing()]
        }),
        Criterion::run(7, "entropy formula equivalence rtol 1e-12, spectrum sum atol 1e-10", None, || {
            vec![check_entropy_forms(1000, 1e-12), check_spectrum_entropy(1000, 1e-15, 1e-10)]
        }),
        Criterion::run(8, "tau limits: tau = 50 within 1% of exp(-2 pi), fermion tau = 1e-3 below 1e-6", None, || {
            check_tau_limits(1e-2, 1e-6)
        }),
        Criterion::run(9, "figure shapes of fig5, fig6, fig2", None, check_figure_shapes),
        Criterion::run(10, "Schmidt sum rules and party entropies, atol 1e-12", None, || {
            check_sum_rules(250, 1e-15, 1e-12)
        }),
    ];

    // Written past the test harness capture so the lines always show.
    let mut out = std::io::stdout().lock();
    for c in &criteria {
        writeln!(out, "{}", c.line()).unwrap();
    }
    let failed: Vec<usize> = criteria.iter().filter(|c| !c.passed()).map(|c| c.number).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
