//! Photon addition/subtraction sequences and their action on states.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{apply_annihilate, apply_create, photon_moments_unchecked, FockVector, Parity};

/// Elementary heralded operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Op {
    /// Creation operator `a†`.
    Add,
    /// Annihilation operator `a`.
    Sub,
}

/// The named amplifier sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Catalog {
    Identity,
    /// `a†`
    Add,
    /// `a a†`
    AddSub,
    /// `a†²`
    Add2,
    /// `(a a†)²`
    AddSub2,
    /// `a†⁴`
    Add4,
    /// `a a† a†²`: two additions, then addition-subtraction.
    AddSubAdd2,
    /// `a†² a a†`: addition-subtraction, then two additions.
    Add2AddSub,
}

impl Catalog {
    pub const ALL: [Catalog; 8] = [
        Catalog::Identity,
        Catalog::Add,
        Catalog::AddSub,
        Catalog::Add2,
        Catalog::AddSub2,
        Catalog::Add4,
        Catalog::AddSubAdd2,
        Catalog::Add2AddSub,
    ];
    pub const ONE_CYCLE: [Catalog; 2] = [Catalog::AddSub, Catalog::Add2];
    pub const TWO_CYCLE: [Catalog; 4] = [
        Catalog::AddSub2,
        Catalog::Add4,
        Catalog::AddSubAdd2,
        Catalog::Add2AddSub,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Catalog::Identity => "Identity",
            Catalog::Add => "Add",
            Catalog::AddSub => "AddSub",
            Catalog::Add2 => "Add2",
            Catalog::AddSub2 => "AddSub2",
            Catalog::Add4 => "Add4",
            Catalog::AddSubAdd2 => "AddSubAdd2",
            Catalog::Add2AddSub => "Add2AddSub",
        }
    }

    /// Operator product as written, e.g. `a†² a a†`.
    pub fn algebraic(self) -> &'static str {
        match self {
            Catalog::Identity => "1",
            Catalog::Add => "a†",
            Catalog::AddSub => "a a†",
            Catalog::Add2 => "a†²",
            Catalog::AddSub2 => "(a a†)²",
            Catalog::Add4 => "a†⁴",
            Catalog::AddSubAdd2 => "a a† a†²",
            Catalog::Add2AddSub => "a†² a a†",
        }
    }

    /// Operators in written order (rightmost acts first).
    pub fn written_ops(self) -> Vec<Op> {
        use Op::{Add, Sub};
        match self {
            Catalog::Identity => vec![],
            Catalog::Add => vec![Add],
            Catalog::AddSub => vec![Sub, Add],
            Catalog::Add2 => vec![Add, Add],
            Catalog::AddSub2 => vec![Sub, Add, Sub, Add],
            Catalog::Add4 => vec![Add, Add, Add, Add],
            Catalog::AddSubAdd2 => vec![Sub, Add, Add, Add],
            Catalog::Add2AddSub => vec![Add, Add, Sub, Add],
        }
    }

    pub fn seq(self) -> OperatorSeq {
        OperatorSeq {
            written: self.written_ops(),
            name: self.name().to_string(),
        }
    }
}

impl fmt::Display for Catalog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered product of ladder operators. Stored in written order; the
/// rightmost operator acts first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OperatorSeq {
    written: Vec<Op>,
    name: String,
}

impl OperatorSeq {
    pub fn new(name: impl Into<String>, written: Vec<Op>) -> Self {
        OperatorSeq {
            written,
            name: name.into(),
        }
    }

    /// Catalog lookup by name, case-insensitive.
    pub fn from_name(name: &str) -> Result<Self> {
        Catalog::ALL
            .iter()
            .find(|c| c.name().eq_ignore_ascii_case(name.trim()))
            .map(|c| c.seq())
            .ok_or_else(|| Error::UnknownSequence(name.to_string()))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn written_ops(&self) -> &[Op] {
        &self.written
    }

    /// Operators in the order they act on the state.
    pub fn application_order(&self) -> impl Iterator<Item = Op> + '_ {
        self.written.iter().rev().copied()
    }

    pub fn len(&self) -> usize {
        self.written.len()
    }

    pub fn is_empty(&self) -> bool {
        self.written.is_empty()
    }

    pub fn creations(&self) -> usize {
        self.written.iter().filter(|op| **op == Op::Add).count()
    }

    /// Catalog entry with the same operator product, if any.
    pub fn catalog(&self) -> Option<Catalog> {
        Catalog::ALL
            .iter()
            .copied()
            .find(|c| c.written_ops() == self.written)
    }

    /// Photon-number parity after the sequence acts on a state of parity `input`.
    pub fn output_parity(&self, input: Parity) -> Parity {
        if self.len() % 2 == 0 {
            input
        } else {
            input.flip()
        }
    }

    /// Sequence that applies `self` first and `then` afterwards (`then ∘ self`).
    pub fn followed_by(&self, then: &OperatorSeq) -> OperatorSeq {
        let mut written = then.written.clone();
        written.extend_from_slice(&self.written);
        OperatorSeq {
            written,
            name: format!("{}*{}", then.name, self.name),
        }
    }
}

impl fmt::Display for OperatorSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl From<Catalog> for OperatorSeq {
    fn from(c: Catalog) -> Self {
        c.seq()
    }
}

/// Applies the sequence without normalizing.
pub fn apply_seq(seq: &OperatorSeq, psi: &FockVector) -> Result<FockVector> {
    let mut out = psi.clone();
    for op in seq.application_order() {
        out = match op {
            Op::Add => apply_create(&out),
            Op::Sub => apply_annihilate(&out),
        };
    }
    Ok(out)
}

/// Normalized `Â|ψ⟩` and the factor `1/‖Â|ψ⟩‖`.
pub fn amplify(seq: &OperatorSeq, psi: &FockVector) -> Result<(FockVector, f64)> {
    psi.require_normalized()?;
    apply_seq(seq, psi)?.normalized()
}

pub(crate) fn poly_in_sq(coeffs: &[f64], alpha: f64) -> f64 {
    // coefficients of α^{2k}, highest power first
    let x = alpha * alpha;
    coeffs.iter().fold(0.0, |acc, c| acc * x + c)
}

/// `‖Â|α⟩‖²` as a polynomial in `α²`, highest power first.
pub(crate) fn coherent_norm_poly(cat: Catalog) -> &'static [f64] {
    match cat {
        Catalog::Identity => &[1.0],
        Catalog::Add => &[1.0, 1.0],
        Catalog::AddSub => &[1.0, 3.0, 1.0],
        Catalog::Add2 => &[1.0, 4.0, 2.0],
        Catalog::AddSub2 => &[1.0, 10.0, 25.0, 15.0, 1.0],
        Catalog::Add4 => &[1.0, 16.0, 72.0, 96.0, 24.0],
        Catalog::AddSubAdd2 => &[1.0, 15.0, 63.0, 78.0, 18.0],
        Catalog::Add2AddSub => &[1.0, 11.0, 31.0, 22.0, 2.0],
    }
}

pub(crate) fn coherent_norm_sqr(cat: Catalog, alpha: f64) -> f64 {
    poly_in_sq(coherent_norm_poly(cat), alpha)
}

/// Closed-form normalization `N^Â(α)` of `Â|α⟩` for real `α`.
pub fn analytic_norm(seq: &OperatorSeq, alpha: f64) -> Result<f64> {
    let cat = seq
        .catalog()
        .ok_or_else(|| Error::NoClosedForm(seq.name().to_string()))?;
    Ok(coherent_norm_sqr(cat, alpha).powf(-0.5))
}

/// Normalization of `Â(|α⟩ ± |-α⟩)` in the printed closed form, where the
/// superposition itself is left unnormalized.
pub fn scs_superposition_norm(cat: Catalog, parity: Parity, alpha: f64) -> Result<f64> {
    if parity == Parity::Odd && alpha == 0.0 {
        return Err(Error::OddScsAtZero);
    }
    let a2 = alpha * alpha;
    let e = (-2.0 * a2).exp();
    // 1 - e^{-2α²} without cancellation
    let one_minus_e = -(-2.0 * a2).exp_m1();
    let (c, s) = match cat {
        Catalog::AddSub => (a2 * a2 + 1.0, 3.0 * a2),
        Catalog::Add2 => (a2 * a2 + 2.0, 4.0 * a2),
        _ => return Err(Error::NoClosedForm(cat.name().to_string())),
    };
    // ±e(c - s) + (c + s), regrouped so the odd branch stays accurate as α → 0
    let bracket = match parity {
        Parity::Even => e * (c - s) + (c + s),
        Parity::Odd => c * one_minus_e + s * (1.0 + e),
    };
    Ok((2.0 * bracket).powf(-0.5))
}

/// Normalization `1/‖Â|±_α⟩‖` of an amplified cat state with a normalized input.
pub fn scs_analytic_norm(seq: &OperatorSeq, parity: Parity, alpha: f64) -> Result<f64> {
    let cat = seq
        .catalog()
        .filter(|c| matches!(c, Catalog::AddSub | Catalog::Add2))
        .ok_or_else(|| Error::NoClosedForm(seq.name().to_string()))?;
    let n = scs_superposition_norm(cat, parity, alpha)?;
    let a2 = alpha * alpha;
    let cat_norm_sqr = match parity {
        Parity::Even => 2.0 * (1.0 + (-2.0 * a2).exp()),
        Parity::Odd => -2.0 * (-2.0 * a2).exp_m1(),
    };
    Ok(n * cat_norm_sqr.sqrt())
}

/// Parametric gain and beam-splitter reflectivity of the heralding optics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeraldParams {
    pub lambda_g: f64,
    pub reflectivity: f64,
}

impl HeraldParams {
    pub fn new(lambda_g: f64, reflectivity: f64) -> Result<Self> {
        if !(lambda_g > 0.0 && lambda_g < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "parametric gain must lie in (0, 1), got {lambda_g}"
            )));
        }
        if !(reflectivity > 0.0 && reflectivity < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "reflectivity must lie in (0, 1), got {reflectivity}"
            )));
        }
        Ok(HeraldParams {
            lambda_g,
            reflectivity,
        })
    }

    /// True outside the weak-interaction regime where the first-order
    /// probabilities apply.
    pub fn warning(&self) -> bool {
        self.lambda_g > 0.3 || self.reflectivity > 0.2
    }
}

/// Which mean photon number enters each heralding step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhotonMeanModel {
    /// Every step uses the mean photon number of the input state.
    #[default]
    Initial,
    /// Each step uses the mean photon number of the state it acts on.
    Stepwise,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepProbability {
    pub op: Op,
    pub mean_photons: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessEstimate {
    pub total: f64,
    pub per_step: Vec<StepProbability>,
    pub diagnostic: Option<String>,
}

/// First-order heralding probability of the sequence:
/// `p_add ≈ λ_g²(n̄+1)` per addition and `p_sub ≈ R n̄` per subtraction.
pub fn success_probability(
    seq: &OperatorSeq,
    psi: &FockVector,
    params: &HeraldParams,
    model: PhotonMeanModel,
) -> Result<SuccessEstimate> {
    psi.require_normalized()?;
    let initial_mean = photon_moments_unchecked(psi).0;
    let mut state = psi.clone();
    let mut per_step = Vec::with_capacity(seq.len());
    let mut total = 1.0;
    for (i, op) in seq.application_order().enumerate() {
        let mean = match model {
            PhotonMeanModel::Initial => initial_mean,
            PhotonMeanModel::Stepwise => photon_moments_unchecked(&state).0,
        };
        let probability = match op {
            Op::Add => params.lambda_g * params.lambda_g * (mean + 1.0),
            Op::Sub => params.reflectivity * mean,
        };
        per_step.push(StepProbability {
            op,
            mean_photons: mean,
            probability,
        });
        total *= probability;
        let next = match op {
            Op::Add => apply_create(&state),
            Op::Sub => apply_annihilate(&state),
        };
        match next.normalized() {
            Ok((s, _)) => state = s,
            Err(Error::ZeroNorm) => {
                return Ok(SuccessEstimate {
                    total: 0.0,
                    per_step,
                    diagnostic: Some(format!("step {} ({op:?}) annihilates the state", i + 1)),
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(SuccessEstimate {
        total,
        per_step,
        diagnostic: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{make_state, make_state_with_headroom, Cutoff, StateSpec};

    fn coherent(alpha: f64) -> FockVector {
        make_state_with_headroom(&StateSpec::Coherent { alpha }, Cutoff::Auto, 4).unwrap()
    }

    #[test]
    fn application_order_is_right_to_left() {
        let ops: Vec<_> = Catalog::Add2AddSub.seq().application_order().collect();
        assert_eq!(ops, vec![Op::Add, Op::Sub, Op::Add, Op::Add]);
        let ops: Vec<_> = Catalog::AddSubAdd2.seq().application_order().collect();
        assert_eq!(ops, vec![Op::Add, Op::Add, Op::Add, Op::Sub]);
    }

    #[test]
    fn composition_matches_catalog() {
        let add_sub = Catalog::AddSub.seq();
        let add2 = Catalog::Add2.seq();
        assert_eq!(add_sub.followed_by(&add2).catalog(), Some(Catalog::Add2AddSub));
        assert_eq!(add2.followed_by(&add_sub).catalog(), Some(Catalog::AddSubAdd2));
    }

    #[test]
    fn amplify_vacuum_examples() {
        let vac = FockVector::vacuum();
        let (state, n) = amplify(&Catalog::AddSub.seq(), &vac).unwrap();
        assert!(state.max_abs_diff(&FockVector::vacuum()) < 1e-15);
        assert!((n - 1.0).abs() < 1e-15);

        let (state, n) = amplify(&Catalog::Add2.seq(), &vac).unwrap();
        assert!(state.max_abs_diff(&FockVector::number(2, 2)) < 1e-15);
        assert!((n - 0.5f64.sqrt()).abs() < 1e-15);

        let sub = OperatorSeq::new("Sub", vec![Op::Sub]);
        assert_eq!(amplify(&sub, &vac), Err(Error::ZeroNorm));
    }

    #[test]
    fn analytic_norm_constants() {
        assert_eq!(analytic_norm(&Catalog::AddSub.seq(), 0.0).unwrap(), 1.0);
        assert!((analytic_norm(&Catalog::Add4.seq(), 0.0).unwrap() - 24f64.powf(-0.5)).abs() < 1e-15);
        assert!((analytic_norm(&Catalog::Add2AddSub.seq(), 0.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        let custom = OperatorSeq::new("SubSub", vec![Op::Sub, Op::Sub]);
        assert!(matches!(analytic_norm(&custom, 1.0), Err(Error::NoClosedForm(_))));
    }

    #[test]
    fn analytic_norm_matches_numeric() {
        for cat in Catalog::ALL {
            for alpha in [0.0, 0.5, 1.0, 2.0, 3.0] {
                let (_, numeric) = amplify(&cat.seq(), &coherent(alpha)).unwrap();
                let closed = analytic_norm(&cat.seq(), alpha).unwrap();
                assert!((numeric - closed).abs() < 1e-9, "{cat} at {alpha}");
            }
        }
    }

    #[test]
    fn scs_norm_matches_numeric() {
        for cat in Catalog::ONE_CYCLE {
            for parity in [Parity::Even, Parity::Odd] {
                for alpha in [1e-6, 1e-3, 0.1, 0.5, 1.0, 2.0, 3.0] {
                    let spec = StateSpec::scs(parity, alpha);
                    let psi = make_state_with_headroom(&spec, Cutoff::Auto, 2).unwrap();
                    let (_, numeric) = amplify(&cat.seq(), &psi).unwrap();
                    let closed = scs_analytic_norm(&cat.seq(), parity, alpha).unwrap();
                    assert!(
                        (numeric - closed).abs() < 1e-9,
                        "{cat} {parity} {alpha}: {numeric} vs {closed}"
                    );
                }
            }
        }
        assert_eq!(
            scs_analytic_norm(&Catalog::AddSub.seq(), Parity::Odd, 0.0),
            Err(Error::OddScsAtZero)
        );
    }

    #[test]
    fn order_matters() {
        let psi = coherent(1.0);
        let (a, _) = amplify(&Catalog::AddSubAdd2.seq(), &psi).unwrap();
        let (b, _) = amplify(&Catalog::Add2AddSub.seq(), &psi).unwrap();
        assert!(a.max_abs_diff(&b) > 1e-3);
    }

    #[test]
    fn herald_params_validation() {
        assert!(HeraldParams::new(0.0, 0.1).is_err());
        assert!(HeraldParams::new(0.1, 1.0).is_err());
        assert!(!HeraldParams::new(0.1, 0.05).unwrap().warning());
        assert!(HeraldParams::new(0.5, 0.05).unwrap().warning());
        assert!(HeraldParams::new(0.1, 0.25).unwrap().warning());
    }

    #[test]
    fn success_probability_values() {
        let params = HeraldParams::new(0.1, 0.05).unwrap();
        let psi = coherent(2.0);
        let est = success_probability(&Catalog::AddSub.seq(), &psi, &params, PhotonMeanModel::Initial).unwrap();
        // λ²(n̄+1) · R n̄ with n̄ = 4
        assert!((est.total - 0.05 * 0.2).abs() < 1e-12);
        assert_eq!(est.per_step[0].op, Op::Add);

        let est = success_probability(&Catalog::Add2.seq(), &psi, &params, PhotonMeanModel::Stepwise).unwrap();
        // second step sees n̄ = ⟨(n+1)²⟩/⟨n+1⟩ = 29/5
        assert!((est.per_step[1].mean_photons - 5.8).abs() < 1e-10);
    }

    #[test]
    fn success_probability_zero_norm_is_reported() {
        let params = HeraldParams::new(0.1, 0.05).unwrap();
        let seq = OperatorSeq::new("Sub", vec![Op::Sub]);
        let vac = make_state(&StateSpec::Number { n: 0 }, Cutoff::Auto).unwrap();
        let est = success_probability(&seq, &vac, &params, PhotonMeanModel::Stepwise).unwrap();
        assert_eq!(est.total, 0.0);
        assert!(est.diagnostic.is_some());
    }
}
