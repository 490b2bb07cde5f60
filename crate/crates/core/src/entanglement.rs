//! Schmidt spectra of the in-vacuum expanded in out-states, and the von
//! Neumann entropies built from them.
//!
//! Bosons: `|0_k 0_{-k}⟩_in = Σ_n c_n |n_k n_{-k}⟩_out` with geometric weights
//! `|c_n|² = (1 - |c₀|²)ⁿ |c₀|²`, `|c₀|² = 1/|α|²`. Fermions: Pauli exclusion
//! leaves four terms with weights `α⁴, β⁴, α²β², α²β²` (moduli squared, both
//! spins equal).
//!
//! All entropies are in bits, per mode pair, with `0 · log 0 = 0`.

use std::f64::consts::{LN_2, PI};

use crate::bogoliubov::{BogoliubovModuli, Statistics};
use crate::error::{Error, Result};
use crate::fields::ModeParams;
use crate::specfun::{log1m_exp, log_add_exp};

/// Largest number of boson Schmidt weights [`SchmidtSpectrum::weights`] will
/// produce before giving up.
pub const MAX_MATERIALIZED_WEIGHTS: usize = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchmidtSpectrum {
    /// Kept lazily; see [`SchmidtSpectrum::weights`]. `ln_ratio` carries the
    /// digits of `ratio` that a linear `f64` loses as `ratio → 1`.
    BosonGeometric {
        c0_sq: f64,
        ratio: f64,
        ln_ratio: f64,
    },
    /// `[|c₀|², |c₁|², |c₂|², |c₃|²] = [α⁴, β⁴, α²β², α²β²]`.
    FermionFour { c_sq: [f64; 4] },
}

/// Occupations `(A, B, C, D) = (k↑, k↓, -k↑, -k↓)` of the four fermion terms.
const FERMION_OCCUPATIONS: [[u8; 4]; 4] = [
    [0, 0, 0, 0],
    [1, 1, 1, 1],
    [1, 0, 0, 1],
    [0, 1, 1, 0],
];

impl SchmidtSpectrum {
    pub fn stat(&self) -> Statistics {
        match self {
            Self::BosonGeometric { .. } => Statistics::Boson,
            Self::FermionFour { .. } => Statistics::Fermion,
        }
    }

    /// Materializes the weights `|c_n|²`. For bosons the geometric series is
    /// cut once the remaining tail mass `ratioᴺ` drops to `tail` or below.
    pub fn weights(&self, tail: f64) -> Result<Vec<f64>> {
        match *self {
            Self::FermionFour { c_sq } => Ok(c_sq.to_vec()),
            Self::BosonGeometric {
                c0_sq, ln_ratio, ..
            } => {
                if ln_ratio == f64::NEG_INFINITY {
                    return Ok(vec![c0_sq]);
                }
                // ln|c₀|² = ln(1 - x) keeps the series normalized to rounding.
                let (ln_c0, ln_x) = (log1m_exp(ln_ratio), ln_ratio);
                let n = (tail.ln() / ln_x).ceil().max(1.0);
                if !(n <= MAX_MATERIALIZED_WEIGHTS as f64) {
                    return Err(Error::Domain {
                        function: "SchmidtSpectrum::weights",
                        value: ln_x.exp(),
                    });
                }
                Ok((0..n as usize)
                    .map(|k| (ln_c0 + k as f64 * ln_x).exp())
                    .collect())
            }
        }
    }

    /// `Σ |c_n|²` over the materialized spectrum.
    pub fn total_weight(&self, tail: f64) -> Result<f64> {
        Ok(compensated_sum(self.weights(tail)?))
    }

    /// `-Σ |c_n|² log₂ |c_n|²` over the materialized spectrum.
    pub fn summed_entropy(&self, tail: f64) -> Result<f64> {
        Ok(compensated_sum(
            self.weights(tail)?.into_iter().map(|w| -xlog2x(w)),
        ))
    }

    /// Diagonal of the reduced density matrix of one fermion party
    /// (`0 = A, 1 = B, 2 = C, 3 = D`), obtained by an explicit partial trace
    /// of the 16-dimensional four-party state. The off-diagonal element is
    /// returned as well; it vanishes for this state.
    pub fn fermion_reduced_state(&self, party: usize) -> Option<ReducedState> {
        let Self::FermionFour { c_sq } = *self else {
            return None;
        };
        assert!(party < 4, "party index {party} out of range");
        let mut psi = [0.0f64; 16];
        for (w, occ) in c_sq.iter().zip(FERMION_OCCUPATIONS) {
            let index = occ.iter().fold(0usize, |acc, &bit| (acc << 1) | bit as usize);
            psi[index] += w.sqrt();
        }
        let shift = 3 - party;
        let mut rho = [[0.0f64; 2]; 2];
        for rest in 0..8usize {
            // Insert the party bit into the 3-bit `rest` pattern.
            let low = rest & ((1 << shift) - 1);
            let high = (rest >> shift) << (shift + 1);
            let idx = |bit: usize| high | (bit << shift) | low;
            for a in 0..2 {
                for b in 0..2 {
                    rho[a][b] += psi[idx(a)] * psi[idx(b)];
                }
            }
        }
        Some(ReducedState {
            p0: rho[0][0],
            p1: rho[1][1],
            coherence: rho[0][1],
        })
    }
}

/// Reduced 2×2 density matrix of a single fermion party in the occupation
/// basis (real symmetric).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedState {
    pub p0: f64,
    pub p1: f64,
    pub coherence: f64,
}

impl ReducedState {
    pub fn trace(&self) -> f64 {
        self.p0 + self.p1
    }

    /// Von Neumann entropy in bits from the eigenvalues of the 2×2 matrix.
    pub fn entropy_bits(&self) -> f64 {
        let mean = 0.5 * (self.p0 + self.p1);
        let half_gap = (0.5 * (self.p0 - self.p1)).hypot(self.coherence);
        -xlog2x(mean + half_gap) - xlog2x((mean - half_gap).max(0.0))
    }
}

/// Neumaier summation.
fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut carry) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

fn xlog2x(w: f64) -> f64 {
    if w == 0.0 {
        0.0
    } else {
        w * w.log2()
    }
}

/// In-vacuum expansion in the out basis.
pub fn schmidt_spectrum(moduli: &BogoliubovModuli) -> Result<SchmidtSpectrum> {
    match moduli.stat {
        Statistics::Boson => {
            let ln_ratio = moduli.ratio().ln();
            Ok(SchmidtSpectrum::BosonGeometric {
                c0_sq: log1m_exp(ln_ratio).exp(),
                ratio: ln_ratio.exp(),
                ln_ratio,
            })
        }
        Statistics::Fermion => {
            if moduli.alpha2.is_zero() {
                return Err(Error::DegenerateMode("fermion |α|² = 0"));
            }
            let (ln_a, ln_b) = normalized_fermion_pair(moduli);
            let (a, b) = (ln_a.exp(), ln_b.exp());
            Ok(SchmidtSpectrum::FermionFour {
                c_sq: [a * a, b * b, a * b, a * b],
            })
        }
    }
}

/// `(ln|α|², ln|β|²)` with the larger modulus replaced by one minus the
/// smaller, so the pair sums to one to rounding.
fn normalized_fermion_pair(moduli: &BogoliubovModuli) -> (f64, f64) {
    let (ln_a, ln_b) = (moduli.alpha2.ln(), moduli.beta2.ln());
    if ln_b <= ln_a {
        (log1m_exp(ln_b), ln_b)
    } else {
        (ln_a, log1m_exp(ln_a))
    }
}

/// Entropy and the quantities it was derived from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyReport {
    pub stat: Statistics,
    pub s_bits: f64,
    pub beta2: f64,
    pub alpha2: f64,
    /// `|β/α|²`, bosons only.
    pub x: Option<f64>,
    /// Vacuum persistence probability `|⟨0_out|0_in⟩|²`.
    pub c0_sq: f64,
    pub mean_pairs: f64,
    /// `S_A(BCD), S_B(ACD), S_C(ABD), S_D(ABC)`, fermions only.
    pub party_entropies: Option<[f64; 4]>,
}

/// `log₂(x^{x/(x-1)} / (1 - x))` from `ln x`, `x ∈ [0, 1)`.
pub fn boson_entropy_x_form(ln_x: f64) -> f64 {
    if ln_x == f64::NEG_INFINITY {
        return 0.0;
    }
    let ln_1mx = log1m_exp(ln_x);
    // x/(x-1) = -exp(ln x - ln(1-x))
    (-(ln_x - ln_1mx).exp() * ln_x - ln_1mx) / LN_2
}

/// `-β² log₂β² + (1+β²) log₂(1+β²)` from `ln β²`, overflow-free.
pub fn boson_entropy_beta2_form(ln_beta2: f64) -> f64 {
    if ln_beta2 == f64::NEG_INFINITY {
        return 0.0;
    }
    let ln_alpha2 = log_add_exp(0.0, ln_beta2);
    // S ln 2 = ln(1+β²) + β² ln(1 + 1/β²)
    let tail = if ln_beta2 <= 0.0 {
        ln_beta2.exp() * (ln_alpha2 - ln_beta2)
    } else {
        let r = (-ln_beta2).exp();
        if r < 1e-8 {
            1.0 - 0.5 * r
        } else {
            r.ln_1p() / r
        }
    };
    (ln_alpha2 + tail) / LN_2
}

/// `-p log₂ p - q log₂ q` from logs.
pub fn binary_entropy(ln_p: f64, ln_q: f64) -> f64 {
    let term = |ln: f64| if ln == f64::NEG_INFINITY { 0.0 } else { -ln.exp() * ln };
    (term(ln_p) + term(ln_q)) / LN_2
}

pub fn entropy(moduli: &BogoliubovModuli) -> Result<EntropyReport> {
    match moduli.stat {
        Statistics::Boson => entropy_boson(moduli),
        Statistics::Fermion => entropy_fermion(moduli),
    }
}

pub fn entropy_boson(moduli: &BogoliubovModuli) -> Result<EntropyReport> {
    if moduli.stat != Statistics::Boson {
        return Err(Error::Domain {
            function: "entropy_boson",
            value: f64::NAN,
        });
    }
    let ln_b = moduli.beta2.ln();
    let s_beta = boson_entropy_beta2_form(ln_b);
    let s_x = boson_entropy_x_form(moduli.ratio().ln());
    // The x-form loses digits as x → 1, roughly in proportion to |α|².
    let beta2 = moduli.beta2.exp()?;
    let tol = 1e-12 * beta2.max(1.0);
    if (s_beta - s_x).abs() > tol * s_beta.abs() + 1e-300 {
        return Err(Error::Normalization(format!(
            "boson entropy forms disagree: {s_beta} vs {s_x}"
        )));
    }
    Ok(EntropyReport {
        stat: Statistics::Boson,
        s_bits: s_beta,
        beta2,
        alpha2: moduli.alpha2.exp()?,
        x: Some(moduli.ratio().ln().exp()),
        c0_sq: vacuum_persistence(moduli),
        mean_pairs: beta2,
        party_entropies: None,
    })
}

pub fn entropy_fermion(moduli: &BogoliubovModuli) -> Result<EntropyReport> {
    if moduli.stat != Statistics::Fermion {
        return Err(Error::Domain {
            function: "entropy_fermion",
            value: f64::NAN,
        });
    }
    let (ln_a, ln_b) = normalized_fermion_pair(moduli);
    let s = binary_entropy(ln_a, ln_b);
    let spectrum = schmidt_spectrum(moduli)?;
    let mut parties = [0.0; 4];
    for (party, slot) in parties.iter_mut().enumerate() {
        let rho = spectrum
            .fermion_reduced_state(party)
            .expect("fermion spectrum");
        *slot = rho.entropy_bits();
        if (*slot - s).abs() > 1e-12 {
            return Err(Error::Normalization(format!(
                "party {party} entropy {} differs from closed form {s}",
                *slot
            )));
        }
    }
    let beta2 = moduli.beta2.exp()?;
    Ok(EntropyReport {
        stat: Statistics::Fermion,
        s_bits: s,
        beta2,
        alpha2: moduli.alpha2.exp()?,
        x: None,
        c0_sq: vacuum_persistence(moduli),
        mean_pairs: beta2,
        party_entropies: Some(parties),
    })
}

/// `|⟨0,out|0,in⟩|²`: `1/|α|²` for bosons, `|α↑|²|α↓|² = α⁴` for fermions.
pub fn vacuum_persistence(moduli: &BogoliubovModuli) -> f64 {
    match moduli.stat {
        // 1/|α|² = 1 - |β/α|², which stays ≤ 1 under rounding.
        Statistics::Boson => log1m_exp(moduli.ratio().ln()).exp(),
        Statistics::Fermion => (2.0 * normalized_fermion_pair(moduli).0).exp(),
    }
}

/// Mean number of pairs produced in the mode, `|β|²`.
pub fn mean_pair_number(moduli: &BogoliubovModuli) -> Result<f64> {
    moduli.beta2.exp()
}

/// Constant field at which the fermion entropy peaks (`|β|² = 1/2`).
pub fn fermion_max_entropy_field(mode: &ModeParams) -> Result<f64> {
    let mt2 = mode.transverse_mass_sq();
    if mt2 == 0.0 {
        return Err(Error::DegenerateMode(
            "fermion entropy has no maximum for m = k_perp = 0",
        ));
    }
    Ok(PI * mt2 / (mode.q() * LN_2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bogoliubov::constant_field_moduli;
    use crate::specfun::LogValue;

    fn boson(beta2: f64) -> BogoliubovModuli {
        BogoliubovModuli::from_beta2(LogValue::from_linear(beta2).unwrap(), Statistics::Boson).unwrap()
    }

    fn fermion(beta2: f64) -> BogoliubovModuli {
        BogoliubovModuli::from_beta2(LogValue::from_linear(beta2).unwrap(), Statistics::Fermion).unwrap()
    }

    #[test]
    fn boson_vacuum_is_pure() {
        let m = boson(0.0);
        assert_eq!(
            schmidt_spectrum(&m).unwrap(),
            SchmidtSpectrum::BosonGeometric {
                c0_sq: 1.0,
                ratio: 0.0,
                ln_ratio: f64::NEG_INFINITY,
            }
        );
        let r = entropy_boson(&m).unwrap();
        assert_eq!(r.s_bits, 0.0);
        assert_eq!(r.c0_sq, 1.0);
        assert_eq!(r.mean_pairs, 0.0);
    }

    #[test]
    fn boson_entropy_saturates_at_two() {
        let r = entropy_boson(&boson(1.0)).unwrap();
        assert!((r.s_bits - 2.0).abs() < 1e-15);
        assert!((r.c0_sq - 0.5).abs() < 1e-15);
        let r = entropy_boson(&boson(1.0 - 1e-6)).unwrap();
        assert!((r.s_bits - 2.0).abs() < 1e-4);
    }

    #[test]
    fn boson_entropy_reference_value() {
        // -b log2 b + (1+b) log2(1+b) at b = e^{-2π}, 30-digit evaluation.
        let r = entropy_boson(&boson((-2.0 * PI).exp())).unwrap();
        assert!((r.s_bits / 0.019624510398173578085 - 1.0).abs() < 1e-13);
        assert!((r.s_bits - 0.01962).abs() < 1e-5);
    }

    #[test]
    fn boson_forms_agree_off_grid() {
        for b in [1e-300f64, 1e-40, 1e-6, 0.1, 0.5, 0.999, 3.0, 40.0] {
            let ln_b = b.ln();
            let ln_x = ln_b - log_add_exp(0.0, ln_b);
            let s1 = boson_entropy_beta2_form(ln_b);
            let s2 = boson_entropy_x_form(ln_x);
            assert!((s1 - s2).abs() <= 1e-12 * s1 * b.max(1.0), "b = {b}: {s1} vs {s2}");
        }
    }

    #[test]
    fn boson_entropy_for_overflowing_beta2() {
        let s = boson_entropy_beta2_form(2000.0);
        assert!((s - (2000.0 + 1.0) / LN_2).abs() < 1e-9);
    }

    #[test]
    fn boson_spectrum_sums_to_one() {
        for b in [0.01, 0.3, 1.0, 5.0] {
            let spec = schmidt_spectrum(&boson(b)).unwrap();
            let total = spec.total_weight(1e-15).unwrap();
            assert!((total - 1.0).abs() < 1e-12, "b = {b}: {total}");
            let closed = entropy_boson(&boson(b)).unwrap().s_bits;
            assert!((spec.summed_entropy(1e-15).unwrap() - closed).abs() < 1e-10);
        }
    }

    #[test]
    fn fermion_maximal_entanglement() {
        let m = fermion(0.5);
        let SchmidtSpectrum::FermionFour { c_sq } = schmidt_spectrum(&m).unwrap() else {
            panic!("expected fermion spectrum");
        };
        for w in c_sq {
            assert!((w - 0.25).abs() < 1e-15);
        }
        let r = entropy_fermion(&m).unwrap();
        assert!((r.s_bits - 1.0).abs() < 1e-15);
        assert!((r.c0_sq - 0.25).abs() < 1e-15);
    }

    #[test]
    fn fermion_separable_limits() {
        let r = entropy_fermion(&fermion(0.0)).unwrap();
        assert_eq!(r.s_bits, 0.0);
        let one = BogoliubovModuli {
            beta2: LogValue::ONE,
            alpha2: LogValue::ZERO,
            stat: Statistics::Fermion,
        };
        assert_eq!(binary_entropy(one.alpha2.ln(), one.beta2.ln()), 0.0);
        assert!(matches!(schmidt_spectrum(&one), Err(Error::DegenerateMode(_))));
    }

    #[test]
    fn fermion_entropy_symmetric() {
        for b in [0.01, 0.2, 0.37, 0.49] {
            let s1 = entropy_fermion(&fermion(b)).unwrap().s_bits;
            let s2 = entropy_fermion(&fermion(1.0 - b)).unwrap().s_bits;
            assert!((s1 - s2).abs() < 1e-14);
        }
    }

    #[test]
    fn fermion_reduced_states_valid() {
        let spec = schmidt_spectrum(&fermion(0.3)).unwrap();
        for party in 0..4 {
            let rho = spec.fermion_reduced_state(party).unwrap();
            assert!((rho.trace() - 1.0).abs() < 1e-15);
            assert_eq!(rho.coherence, 0.0);
            assert!((rho.p0 - 0.7).abs() < 1e-15 && (rho.p1 - 0.3).abs() < 1e-15);
        }
        assert!(schmidt_spectrum(&boson(0.3)).unwrap().fermion_reduced_state(0).is_none());
    }

    #[test]
    fn vacuum_persistence_examples() {
        assert_eq!(vacuum_persistence(&boson(0.0)), 1.0);
        assert!((vacuum_persistence(&boson(1.0)) - 0.5).abs() < 1e-15);
        assert!((vacuum_persistence(&fermion(0.5)) - 0.25).abs() < 1e-15);
        assert_eq!(vacuum_persistence(&fermion(0.0)), 1.0);
    }

    #[test]
    fn mean_pairs_matches_constant_field() {
        let md = ModeParams::new(1.0, 1.0, 1.0, 0.0).unwrap();
        let m = constant_field_moduli(&md, 10.0, Statistics::Boson).unwrap();
        assert!((mean_pair_number(&m).unwrap() - 0.533488).abs() < 1e-6);
        assert_eq!(mean_pair_number(&boson(0.0)).unwrap(), 0.0);
    }

    #[test]
    fn max_entropy_field_examples() {
        let e = fermion_max_entropy_field(&ModeParams::new(0.0, 1.0, 1.0, 0.0).unwrap()).unwrap();
        assert!((e - PI / LN_2).abs() < 1e-15);
        assert!((e - 4.53236).abs() < 1e-5);
        let md = ModeParams::new(1.0, 2.0, 1.0, 0.0).unwrap();
        let e = fermion_max_entropy_field(&md).unwrap();
        assert!((e - PI / LN_2).abs() < 1e-15);
        let m = constant_field_moduli(&md, e, Statistics::Fermion).unwrap();
        assert!((entropy_fermion(&m).unwrap().s_bits - 1.0).abs() < 1e-12);
        assert!(fermion_max_entropy_field(&ModeParams::new(0.0, 1.0, 0.0, 0.0).unwrap()).is_err());
    }

    #[test]
    fn wrong_statistics_rejected() {
        assert!(entropy_boson(&fermion(0.2)).is_err());
        assert!(entropy_fermion(&boson(0.2)).is_err());
    }

    #[test]
    fn inconsistent_boson_moduli_detected() {
        let bad = BogoliubovModuli {
            beta2: LogValue::from_linear(0.5).unwrap(),
            alpha2: LogValue::from_linear(1.7).unwrap(),
            stat: Statistics::Boson,
        };
        assert!(matches!(entropy_boson(&bad), Err(Error::Normalization(_))));
    }
}
