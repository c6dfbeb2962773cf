//! Lower semicontinuity bounds `f(rho) - f(sigma) <= C eps F(1/eps) + D h_up(eps)`
//! with the optimal main term `F_{H(rho,1,1/eps)}(1/eps)`.

use crate::math::{binary_entropy, ln};
use crate::optimal::optimal_entropy;
use crate::spectra::Spectrum;
use crate::{Error, Result};

/// A characteristic with its bound constants. The metric only documents how
/// `eps` is measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacteristicPreset {
    pub slug: &'static str,
    pub name: &'static str,
    /// Number of subsystems the characteristic depends on.
    pub parties: usize,
    pub c: f64,
    pub d: f64,
    pub metric: &'static str,
}

const TRACE_NORM: &str = "half trace norm";

pub const PRESETS: &[CharacteristicPreset] = &[
    CharacteristicPreset {
        slug: "von-neumann-entropy",
        name: "von Neumann entropy",
        parties: 1,
        c: 1.0,
        d: 1.0,
        metric: TRACE_NORM,
    },
    CharacteristicPreset {
        slug: "qc-conditional-entropy",
        name: "quantum conditional entropy of quantum-classical states",
        parties: 2,
        c: 1.0,
        d: 1.0,
        metric: TRACE_NORM,
    },
    CharacteristicPreset {
        slug: "entanglement-of-formation",
        name: "entanglement of formation",
        parties: 2,
        c: 1.0,
        d: 1.0,
        metric: "sqrt(1 - F), F the fidelity",
    },
    CharacteristicPreset {
        slug: "qmi-commuting",
        name: "quantum mutual information for commuting states",
        parties: 2,
        c: 2.0,
        d: 2.0,
        metric: TRACE_NORM,
    },
    CharacteristicPreset {
        slug: "qcmi-commuting",
        name: "quantum conditional mutual information for commuting states",
        parties: 3,
        c: 2.0,
        d: 2.0,
        metric: TRACE_NORM,
    },
    CharacteristicPreset {
        slug: "relative-entropy-of-entanglement",
        name: "relative entropy of entanglement",
        parties: 2,
        c: 1.0,
        d: 1.0,
        metric: TRACE_NORM,
    },
    CharacteristicPreset {
        slug: "discord-a1",
        name: "quantum discord with measured system A1 for commuting states",
        parties: 2,
        c: 1.0,
        d: 2.0,
        metric: TRACE_NORM,
    },
    CharacteristicPreset {
        slug: "discord-a2",
        name: "quantum discord with measured system A2 for commuting states",
        parties: 2,
        c: 2.0,
        d: 2.0,
        metric: TRACE_NORM,
    },
    CharacteristicPreset {
        slug: "one-way-cc-a1",
        name: "one-way classical correlation with measured system A1 for commuting states",
        parties: 2,
        c: 1.0,
        d: 2.0,
        metric: TRACE_NORM,
    },
    CharacteristicPreset {
        slug: "one-way-cc-a2",
        name: "one-way classical correlation with measured system A2 for commuting states",
        parties: 2,
        c: 1.0,
        d: 2.0,
        metric: TRACE_NORM,
    },
];

/// Looks a preset up by slug or by name (case-insensitive).
pub fn preset(key: &str) -> Option<&'static CharacteristicPreset> {
    PRESETS
        .iter()
        .find(|p| p.slug.eq_ignore_ascii_case(key) || p.name.eq_ignore_ascii_case(key))
}

/// `h_up(eps)`: binary entropy up to `1/2`, then `ln 2`.
pub fn binary_entropy_envelope(eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::OutOfRange { value: eps });
    }
    Ok(if eps <= 0.5 {
        binary_entropy(eps)
    } else {
        ln(2.0)
    })
}

/// `F_{H(rho,1,1/eps)}(1/eps)`.
pub fn lsb_main_term(spec: &Spectrum, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::OutOfRange { value: eps });
    }
    optimal_entropy(spec, 1.0, 1.0 / eps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LsbReport {
    pub preset: CharacteristicPreset,
    pub eps: f64,
    pub main_term: f64,
    pub envelope: f64,
    pub bound: f64,
    /// Whether `sum_i p_i^beta < inf` for all `beta > 0`, under which the bound is
    /// also faithful rather than only a formal inequality.
    pub gibbs_condition: bool,
}

/// `C eps F_{H(rho,1,1/eps)}(1/eps) + D h_up(eps)`.
pub fn lsb_bound(spec: &Spectrum, eps: f64, preset: &CharacteristicPreset) -> Result<LsbReport> {
    let main_term = lsb_main_term(spec, eps)?;
    let envelope = binary_entropy_envelope(eps)?;
    Ok(LsbReport {
        preset: *preset,
        eps,
        main_term,
        envelope,
        bound: preset.c * eps * main_term + preset.d * envelope,
        gibbs_condition: spec.satisfies_gibbs_condition(),
    })
}
