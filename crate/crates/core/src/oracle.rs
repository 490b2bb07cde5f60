//! Brute-force `|β|²` by integrating the mode equations in time.
//!
//! Nothing here touches the closed forms: the field enters only through
//! `p(t) = k_z + qA_z(t)` and `E(t)`, and particle content is read off by
//! projecting the numerical solution onto the instantaneous adiabatic basis.
//!
//! * Bosons: `φ'' + ω²(t) φ = 0`, started in the positive-frequency adiabatic
//!   mode. The basis uses the second-order adiabatic frequency, so the
//!   contamination left at the window edges is fourth order in `ω'/ω²`.
//! * Fermions: the spin-diagonal Dirac mode reduces to the two-level system
//!   `iψ' = (p σ_z + m_⊥ σ_x) ψ`, started in the negative-energy eigenstate.
//!   Projections use the second-order superadiabatic basis built from
//!   `θ = atan2(m_⊥, p)`.
//!
//! The integrator is an adaptive Dormand–Prince 5(4) pair.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::{kinetic_momentum, omega, FieldProfile, ModeParams};

/// Gap below which the fermion two-level system is considered closed.
pub const MIN_GAP: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleConfig {
    /// Half-window in units of the natural time scale: `max(τ, 1/ω_asym)` for
    /// a Sauter pulse, `1/sqrt(qE₀) + m_⊥/(qE₀)` for a constant field.
    pub t_span_factor: f64,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// Relative tolerance of the `0.8·T` vs `T` convergence check for a
    /// constant field, whose asymptotics are only power-law adiabatic. Sauter
    /// pulses use `10·rel_tol`.
    pub constant_convergence_rtol: f64,
    /// Largest accepted conservation defect.
    pub max_defect: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            t_span_factor: 25.0,
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_steps: 20_000_000,
            constant_convergence_rtol: 1e-3,
            max_defect: 1e-6,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_span_factor >= 10.0 && self.t_span_factor.is_finite()) {
            return Err(Error::InvalidConfig("t_span_factor must be finite and >= 10"));
        }
        let tol_ok = |x: f64| x > 0.0 && x <= 1e-6;
        if !tol_ok(self.rel_tol) || !tol_ok(self.abs_tol) {
            return Err(Error::InvalidConfig("tolerances must lie in (0, 1e-6]"));
        }
        if self.max_steps == 0 {
            return Err(Error::InvalidConfig("max_steps must be positive"));
        }
        if !(self.constant_convergence_rtol > 0.0 && self.constant_convergence_rtol < 1.0) {
            return Err(Error::InvalidConfig("constant_convergence_rtol must lie in (0, 1)"));
        }
        if !(self.max_defect > 0.0 && self.max_defect < 1.0) {
            return Err(Error::InvalidConfig("max_defect must lie in (0, 1)"));
        }
        Ok(())
    }

    pub fn with_t_span_factor(mut self, factor: f64) -> Self {
        self.t_span_factor = factor;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult {
    pub beta2_numeric: f64,
    /// Value at the convergence checkpoint `center + 0.8·T`.
    pub beta2_checkpoint: f64,
    /// Largest `|W - 1|` (bosons) or `|⟨ψ|ψ⟩ - 1|` (fermions) seen along the
    /// trajectory.
    pub conservation_defect: f64,
    /// Smallest `|β|²` the run can distinguish from zero, set by the
    /// integration error in the amplitude.
    pub noise_floor: f64,
    pub steps_used: usize,
    pub window: (f64, f64),
}

impl OracleResult {
    /// Whether `beta2_numeric` is above the noise floor.
    pub fn resolved(&self) -> bool {
        self.beta2_numeric > self.noise_floor
    }
}

/// Integration window `(t_in, t_out)`.
pub fn window(mode: &ModeParams, field: &FieldProfile, cfg: &OracleConfig) -> (f64, f64) {
    let f = cfg.t_span_factor;
    match field {
        FieldProfile::Sauter(s) => {
            let (w_in, w_out) = s.asymptotic_frequencies(mode);
            let half = f * s.tau().max(1.0 / w_in.min(w_out));
            (-half, half)
        }
        FieldProfile::Constant(c) => {
            let qe = mode.q() * c.e0();
            let center = mode.k_z() / qe;
            let natural = 1.0 / qe.sqrt() + mode.transverse_mass() / qe;
            // qE/ω² < 1e-3 at both edges.
            let half = (f * natural).max((1000.0 / qe).sqrt());
            (center - half, center + half)
        }
    }
}

/// `(p, p', p'')` at time `t`.
fn momentum_derivatives(mode: &ModeParams, field: &FieldProfile, t: f64) -> (f64, f64, f64) {
    let ddp = match field {
        FieldProfile::Constant(_) => 0.0,
        FieldProfile::Sauter(s) => {
            let x = t / s.tau();
            let sech = 1.0 / x.cosh();
            2.0 * mode.q() * s.e0() * sech * sech * x.tanh() / s.tau()
        }
    };
    (
        kinetic_momentum(mode, field, t),
        -mode.q() * field.strength(t),
        ddp,
    )
}

/// Second-order adiabatic frequency `W` and `V = ω'/(2ω)`, with
/// `W² = ω² - ω''/(2ω) + 3ω'²/(4ω²)`. The mode `e^{-i∫W}/sqrt(2W)` solves the
/// mode equation up to fourth adiabatic order.
fn boson_adiabatic(mode: &ModeParams, field: &FieldProfile, t: f64) -> (f64, f64) {
    let (p, dp, ddp) = momentum_derivatives(mode, field, t);
    let w = omega(mode, field, t);
    let dw = p * dp / w;
    let ddw = (dp * dp + p * ddp) / w - dw * dw / w;
    let w2 = w * w - ddw / (2.0 * w) + 0.75 * (dw / w).powi(2);
    (w2.max(0.25 * w * w).sqrt(), dw / (2.0 * w))
}

/// Occupation `|b|²` and Wronskian `|a|² - |b|²` of the boson state
/// `y = [Re φ, Im φ, Re φ', Im φ']` at time `t`.
fn boson_project(mode: &ModeParams, field: &FieldProfile, t: f64, y: &[f64; 4]) -> (f64, f64) {
    let (w, v) = boson_adiabatic(mode, field, t);
    let phi = Complex64::new(y[0], y[1]);
    let psi = Complex64::new(y[2], y[3]) + v * phi;
    let i = Complex64::i();
    let b2 = (w * phi - i * psi).norm_sqr() / (2.0 * w);
    let a2 = (w * phi + i * psi).norm_sqr() / (2.0 * w);
    (b2, a2 - b2)
}

fn boson_wronskian(y: &[f64; 4]) -> f64 {
    // -2 Im(φ* φ')
    -2.0 * (y[0] * y[3] - y[1] * y[2])
}

struct TwoLevelBasis {
    up: [f64; 2],
    dn: [f64; 2],
    /// Admixture of `up` in the superadiabatic negative-energy state,
    /// `-iε + ε'/(2ω)` with `ε = θ'/(4ω)`.
    mix: Complex64,
}

fn two_level_basis(mode: &ModeParams, field: &FieldProfile, t: f64) -> TwoLevelBasis {
    let (p, dp, ddp) = momentum_derivatives(mode, field, t);
    let m = mode.transverse_mass();
    let w2 = p * p + m * m;
    let w = w2.sqrt();
    let dw = p * dp / w;
    let theta = m.atan2(p);
    let dtheta = -m * dp / w2;
    let ddtheta = -m * ddp / w2 + 2.0 * m * dp * dw / (w2 * w);
    let eps = dtheta / (4.0 * w);
    let deps = ddtheta / (4.0 * w) - dtheta * dw / (4.0 * w2);
    let (s, c) = (0.5 * theta).sin_cos();
    TwoLevelBasis {
        up: [c, s],
        dn: [-s, c],
        mix: Complex64::new(deps / (2.0 * w), -eps),
    }
}

fn overlap(e: [f64; 2], y: &[f64; 4]) -> Complex64 {
    Complex64::new(e[0] * y[0] + e[1] * y[2], e[0] * y[1] + e[1] * y[3])
}

/// Positive-energy occupation of `y = [Re u, Im u, Re v, Im v]`.
fn fermion_project(mode: &ModeParams, field: &FieldProfile, t: f64, y: &[f64; 4]) -> f64 {
    let basis = two_level_basis(mode, field, t);
    (overlap(basis.up, y) - basis.mix * overlap(basis.dn, y)).norm_sqr()
}

fn fermion_norm(y: &[f64; 4]) -> f64 {
    y.iter().map(|x| x * x).sum()
}

/// Numerical `|β|²` of a scalar mode.
pub fn boson_mode_beta2(
    mode: &ModeParams,
    field: &FieldProfile,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    cfg.validate()?;
    let (t0, t1) = window(mode, field, cfg);
    let w0 = omega(mode, field, t0);
    if w0 < MIN_GAP || omega(mode, field, t1) < MIN_GAP {
        return Err(Error::DegenerateMode("vanishing asymptotic frequency"));
    }
    let (big_w0, v0) = boson_adiabatic(mode, field, t0);
    let amp = 1.0 / (2.0 * big_w0).sqrt();
    let y0 = [amp, 0.0, -v0 * amp, -big_w0 * amp];

    let m2 = mode.transverse_mass_sq();
    let rhs = |t: f64, y: &[f64; 4]| {
        let p = kinetic_momentum(mode, field, t);
        let w2 = m2 + p * p;
        [y[2], y[3], -w2 * y[0], -w2 * y[1]]
    };
    let defect = |y: &[f64; 4]| (boson_wronskian(y) - 1.0).abs();
    let run = evolve(rhs, defect, |t| omega(mode, field, t), (t0, t1), y0, cfg)?;
    let project = |t: f64, y: &[f64; 4]| boson_project(mode, field, t, y).0;
    let checkpoint = mean(&run.check, project);
    let beta2 = mean(&run.edge, project);
    let wronskian = mean(&run.edge, |t, y| boson_project(mode, field, t, y).1);
    let defect = run.max_defect.max((wronskian - 1.0).abs());
    finish(beta2, checkpoint, defect, run, (t0, t1), field, cfg)
}

/// Numerical `|β|²` of a spin-diagonal Dirac mode.
pub fn fermion_mode_beta2(
    mode: &ModeParams,
    field: &FieldProfile,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    cfg.validate()?;
    let m = mode.transverse_mass();
    if m < MIN_GAP {
        return Err(Error::DegenerateMode("fermion gap m_perp below 1e-8"));
    }
    let (t0, t1) = window(mode, field, cfg);
    let basis = two_level_basis(mode, field, t0);
    // dn + mix·up, normalized.
    let norm = (1.0 + basis.mix.norm_sqr()).sqrt();
    let u = (basis.dn[0] + basis.mix * basis.up[0]) / norm;
    let v = (basis.dn[1] + basis.mix * basis.up[1]) / norm;
    let y0 = [u.re, u.im, v.re, v.im];
    let rhs = |t: f64, y: &[f64; 4]| {
        let p = kinetic_momentum(mode, field, t);
        // ψ' = -iHψ, H = [[p, m], [m, -p]]
        let hu = [p * y[0] + m * y[2], p * y[1] + m * y[3]];
        let hv = [m * y[0] - p * y[2], m * y[1] - p * y[3]];
        [hu[1], -hu[0], hv[1], -hv[0]]
    };
    let defect = |y: &[f64; 4]| (fermion_norm(y) - 1.0).abs();
    let run = evolve(rhs, defect, |t| omega(mode, field, t), (t0, t1), y0, cfg)?;
    let project = |t: f64, y: &[f64; 4]| fermion_project(mode, field, t, y);
    let checkpoint = mean(&run.check, project);
    let beta2 = mean(&run.edge, project);
    let max_defect = run.max_defect;
    finish(beta2, checkpoint, max_defect, run, (t0, t1), field, cfg)
}

/// Samples per averaging period.
const PERIOD_SAMPLES: usize = 16;

struct Run {
    /// States at the sample times of the checkpoint and edge groups.
    check: Vec<(f64, [f64; 4])>,
    edge: Vec<(f64, [f64; 4])>,
    max_defect: f64,
    steps: usize,
}

/// Midpoint samples over one adiabatic period `2π/ω` ending at `t_end`.
fn period_samples(t_end: f64, w: f64) -> Vec<f64> {
    let period = 2.0 * std::f64::consts::PI / w;
    (0..PERIOD_SAMPLES)
        .map(|k| t_end - period + (k as f64 + 0.5) * period / PERIOD_SAMPLES as f64)
        .collect()
}

fn evolve<F, D, W>(
    rhs: F,
    defect: D,
    omega_at: W,
    (t0, t1): (f64, f64),
    y0: [f64; 4],
    cfg: &OracleConfig,
) -> Result<Run>
where
    F: Fn(f64, &[f64; 4]) -> [f64; 4],
    D: Fn(&[f64; 4]) -> f64,
    W: Fn(f64) -> f64,
{
    // Checkpoint at center + 0.8·T.
    let t_check = t0 + 0.9 * (t1 - t0);
    let check_times = period_samples(t_check, omega_at(t_check));
    let edge_times = period_samples(t1, omega_at(t1));
    let mut max_defect = 0.0f64;
    let mut observe = |_t: f64, y: &[f64; 4]| max_defect = max_defect.max(defect(y));
    let mut stepper = DormandPrince::new(cfg.rel_tol, cfg.abs_tol, cfg.max_steps);
    let (mut t, mut y, mut h) = (t0, y0, 0.05 / omega_at(t0));
    let (check, edge) = {
        let mut sample = |times: &[f64], t: &mut f64, y: &mut [f64; 4], h: &mut f64| -> Result<Vec<(f64, [f64; 4])>> {
            let mut out = Vec::with_capacity(times.len());
            for &ts in times {
                let (y_next, h_next) = stepper.integrate(&rhs, *t, *y, ts, *h, &mut observe)?;
                (*t, *y, *h) = (ts, y_next, h_next);
                out.push((ts, y_next));
            }
            Ok(out)
        };
        let check = sample(&check_times, &mut t, &mut y, &mut h)?;
        (check, sample(&edge_times, &mut t, &mut y, &mut h)?)
    };
    Ok(Run {
        check,
        edge,
        max_defect,
        steps: stepper.steps,
    })
}

fn mean<F: Fn(f64, &[f64; 4]) -> f64>(samples: &[(f64, [f64; 4])], f: F) -> f64 {
    samples.iter().map(|(t, y)| f(*t, y)).sum::<f64>() / samples.len() as f64
}

fn finish(
    beta2: f64,
    checkpoint: f64,
    defect: f64,
    run: Run,
    window: (f64, f64),
    field: &FieldProfile,
    cfg: &OracleConfig,
) -> Result<OracleResult> {
    if !(defect < cfg.max_defect) {
        return Err(Error::NonConvergence(format!(
            "conservation defect {defect:.3e} exceeds {:.1e}",
            cfg.max_defect
        )));
    }
    let delta = defect.max(10.0 * cfg.rel_tol);
    let conv = match field {
        FieldProfile::Sauter(_) => 10.0 * cfg.rel_tol,
        FieldProfile::Constant(_) => cfg.constant_convergence_rtol,
    };
    let allowed = conv * beta2 + 2.0 * beta2.sqrt() * delta + delta * delta;
    if (beta2 - checkpoint).abs() > allowed {
        return Err(Error::NonConvergence(format!(
            "|β|² = {beta2:.6e} at the window edge vs {checkpoint:.6e} at 0.8·T"
        )));
    }
    Ok(OracleResult {
        beta2_numeric: beta2,
        beta2_checkpoint: checkpoint,
        conservation_defect: defect,
        noise_floor: delta * delta,
        steps_used: run.steps,
        window,
    })
}

/// Adaptive Dormand–Prince 5(4) stepper with FSAL and a shared step budget.
#[derive(Debug, Clone)]
pub struct DormandPrince {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
    /// Accepted plus rejected steps so far.
    pub steps: usize,
}

const C: [f64; 6] = [1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [&[f64]; 6] = [
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0],
    &[9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0],
    &[35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
/// Fifth-order minus embedded fourth-order weights.
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

impl DormandPrince {
    pub fn new(rel_tol: f64, abs_tol: f64, max_steps: usize) -> Self {
        Self {
            rel_tol,
            abs_tol,
            max_steps,
            steps: 0,
        }
    }

    /// Integrates from `t0` to `t1` (either direction) and returns the state
    /// at `t1` with the last proposed step size. `observe` sees every
    /// accepted state.
    pub fn integrate<const N: usize, F, O>(
        &mut self,
        rhs: &F,
        t0: f64,
        y0: [f64; N],
        t1: f64,
        h0: f64,
        observe: &mut O,
    ) -> Result<([f64; N], f64)>
    where
        F: Fn(f64, &[f64; N]) -> [f64; N],
        O: FnMut(f64, &[f64; N]),
    {
        let dir = if t1 >= t0 { 1.0 } else { -1.0 };
        let span = (t1 - t0).abs();
        let mut t = t0;
        let mut y = y0;
        let mut h = h0.abs().min(span).max(f64::MIN_POSITIVE);
        let mut k1 = rhs(t, &y);
        while dir * (t1 - t) > 0.0 {
            if self.steps >= self.max_steps {
                return Err(Error::StepBudget(self.max_steps));
            }
            self.steps += 1;
            let last = h >= (t1 - t).abs();
            let h_try = if last { (t1 - t).abs() } else { h };
            let dt = dir * h_try;

            let mut k = [[0.0; N]; 7];
            k[0] = k1;
            for stage in 0..6 {
                let mut ys = y;
                for (j, a) in A[stage].iter().enumerate() {
                    if *a != 0.0 {
                        for i in 0..N {
                            ys[i] += dt * a * k[j][i];
                        }
                    }
                }
                if stage == 5 {
                    // Row 6 of the tableau is the fifth-order solution.
                    k[6] = rhs(t + dt, &ys);
                    let mut err_sq = 0.0;
                    for i in 0..N {
                        let e: f64 = (0..7).map(|j| E[j] * k[j][i]).sum::<f64>() * dt;
                        let scale = self.abs_tol + self.rel_tol * y[i].abs().max(ys[i].abs());
                        err_sq += (e / scale).powi(2);
                    }
                    let err = (err_sq / N as f64).sqrt();
                    if !err.is_finite() {
                        return Err(Error::NonConvergence("non-finite integrator state".into()));
                    }
                    if err <= 1.0 {
                        t = if last { t1 } else { t + dt };
                        y = ys;
                        k1 = k[6];
                        observe(t, &y);
                    }
                    let factor = if err == 0.0 {
                        5.0
                    } else {
                        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                    };
                    let factor = if err > 1.0 { factor.min(1.0) } else { factor };
                    h = h_try * factor;
                    if h < 1e-14 * span.max(t.abs()) {
                        return Err(Error::NonConvergence("step size underflow".into()));
                    }
                } else {
                    k[stage + 1] = rhs(t + C[stage] * dt, &ys);
                }
            }
        }
        Ok((y, h))
    }
}
