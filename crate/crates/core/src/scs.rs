//! Amplification of even and odd cat states.

use rayon::prelude::*;
use serde::Serialize;

use crate::amplifier::{amplify, scs_superposition_norm, Catalog, OperatorSeq};
use crate::error::{Error, Result};
use crate::fock::{make_state, make_state_with_headroom, Cutoff, FockVector, Parity, StateSpec};
use crate::metrics::{max_fidelity_state, phase_uncertainty, TargetFamily};

/// Normalized `Â|±_α⟩`.
pub fn amplified_scs(seq: &OperatorSeq, parity: Parity, alpha_i: f64) -> Result<FockVector> {
    let psi = make_state_with_headroom(&StateSpec::scs(parity, alpha_i), Cutoff::Auto, seq.creations())?;
    Ok(amplify(seq, &psi)?.0)
}

/// `|⟨±_{α_f}|Â|±_{α_i}⟩|²` (normalized) for `Â ∈ {a a†, a†²}` and real amplitudes.
pub fn scs_fidelity_analytic(cat: Catalog, parity: Parity, alpha_i: f64, alpha_f: f64) -> Result<f64> {
    if parity == Parity::Odd && alpha_f == 0.0 {
        return Err(Error::OddScsAtZero);
    }
    let n = scs_superposition_norm(cat, parity, alpha_i)?;
    let x = alpha_i * alpha_f;
    let gauss = (-(alpha_f - alpha_i).powi(2)).exp();
    let e2x = (-2.0 * x).exp();
    // 1 ± e^{-2x} and 1 ± e^{-2α_f²}, cancellation-free for the odd sign
    let (one_pm_e2x, target_norm) = match parity {
        Parity::Even => (1.0 + e2x, 1.0 + (-2.0 * alpha_f * alpha_f).exp()),
        Parity::Odd => (-(-2.0 * x).exp_m1(), -(-2.0 * alpha_f * alpha_f).exp_m1()),
    };
    let overlap = match cat {
        Catalog::AddSub => match parity {
            // (x+1) - (x-1)e^{-2x}
            Parity::Even => x * (1.0 - e2x) + (1.0 + e2x),
            // (x+1) + (x-1)e^{-2x}
            Parity::Odd => x * (1.0 + e2x) + one_pm_e2x,
        },
        Catalog::Add2 => alpha_f * alpha_f * one_pm_e2x,
        _ => return Err(Error::NoClosedForm(cat.name().to_string())),
    };
    Ok(2.0 * n * n * gauss * overlap * overlap / target_norm)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScsSweepRow {
    pub parity: Parity,
    pub alpha_i: f64,
    pub seq: String,
    pub f_max: f64,
    pub alpha_f_opt: f64,
    pub gain_scs: f64,
    pub dphi_amplified: f64,
    pub dphi_bare: f64,
}

pub fn scs_row(seq: &OperatorSeq, parity: Parity, alpha_i: f64) -> Result<ScsSweepRow> {
    if !(alpha_i > 0.0) {
        return Err(Error::InvalidParameter(format!("cat sweep needs alpha_i > 0, got {alpha_i}")));
    }
    let bare = make_state(&StateSpec::scs(parity, alpha_i), Cutoff::Auto)?;
    let out = amplified_scs(seq, parity, alpha_i)?;
    let family = TargetFamily::Scs(seq.output_parity(parity));
    let opt = max_fidelity_state(&out, family, &family.bracket(alpha_i)?)?;
    Ok(ScsSweepRow {
        parity,
        alpha_i,
        seq: seq.name().to_string(),
        f_max: opt.f_max,
        alpha_f_opt: opt.alpha_f_opt,
        gain_scs: opt.alpha_f_opt / alpha_i,
        dphi_amplified: phase_uncertainty(&out)?,
        dphi_bare: phase_uncertainty(&bare)?,
    })
}

/// One row per amplitude, computed in parallel, in grid order.
pub fn scs_sweep(seq: &OperatorSeq, parity: Parity, alphas: &[f64]) -> Result<Vec<ScsSweepRow>> {
    alphas.par_iter().map(|&a| scs_row(seq, parity, a)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::fidelity;

    #[test]
    fn small_amplitude_limits() {
        let out = amplified_scs(&Catalog::Add2.seq(), Parity::Even, 1e-6).unwrap();
        assert!(out.max_abs_diff(&FockVector::number(2, 2)) < 1e-6);
        let out = amplified_scs(&Catalog::AddSub.seq(), Parity::Even, 1e-6).unwrap();
        assert!(out.max_abs_diff(&FockVector::vacuum()) < 1e-6);
    }

    #[test]
    fn parity_is_conserved() {
        for cat in [Catalog::AddSub, Catalog::Add2] {
            for parity in [Parity::Even, Parity::Odd] {
                let out = amplified_scs(&cat.seq(), parity, 1.3).unwrap();
                assert_eq!(out.parity_weight(parity.flip()), 0.0);
            }
        }
    }

    #[test]
    fn closed_form_matches_overlap() {
        for cat in [Catalog::AddSub, Catalog::Add2] {
            for parity in [Parity::Even, Parity::Odd] {
                for (ai, af) in [(1e-3, 2e-3), (0.1, 0.3), (1.0, 1.0), (1.0, 1.3), (2.0, 2.5), (3.0, 3.1)] {
                    let out = amplified_scs(&cat.seq(), parity, ai).unwrap();
                    let target = make_state(&StateSpec::scs(parity, af), Cutoff::Auto).unwrap();
                    let num = fidelity(&out, &target).unwrap();
                    let ana = scs_fidelity_analytic(cat, parity, ai, af).unwrap();
                    assert!((num - ana).abs() < 1e-10, "{cat:?} {parity:?} {ai} {af}: {num} {ana}");
                }
            }
        }
    }

    #[test]
    fn vacuum_fixed_point() {
        let f = scs_fidelity_analytic(Catalog::AddSub, Parity::Even, 1e-6, 1e-6).unwrap();
        assert!((f - 1.0).abs() < 1e-9);
    }

    #[test]
    fn small_amplitude_gains() {
        let seq = Catalog::AddSub.seq();
        let even = scs_row(&seq, Parity::Even, 1e-3).unwrap();
        let odd = scs_row(&seq, Parity::Odd, 1e-3).unwrap();
        assert!((even.gain_scs - 3f64.sqrt()).abs() < 1e-3, "{}", even.gain_scs);
        assert!((odd.gain_scs - 2f64.sqrt()).abs() < 1e-3, "{}", odd.gain_scs);
    }

    #[test]
    fn orderings_and_large_amplitude() {
        for parity in [Parity::Even, Parity::Odd] {
            for k in 1..=6 {
                let a = 0.5 * k as f64;
                let s = scs_row(&Catalog::AddSub.seq(), parity, a).unwrap();
                let d = scs_row(&Catalog::Add2.seq(), parity, a).unwrap();
                assert!(s.f_max > d.f_max, "{parity:?} {a}");
                assert!(d.gain_scs > s.gain_scs, "{parity:?} {a}");
            }
            for cat in [Catalog::AddSub, Catalog::Add2] {
                let rows: Vec<_> = [4.0, 6.0, 10.0].iter().map(|&a| scs_row(&cat.seq(), parity, a).unwrap()).collect();
                assert!(rows[0].f_max > 0.99, "{cat:?} {parity:?}");
                assert!(rows.windows(2).all(|w| w[0].gain_scs > w[1].gain_scs && w[1].gain_scs > 1.0));
                assert!(rows[2].gain_scs - 1.0 < 0.02, "{cat:?} {parity:?}");
            }
        }
    }
}
