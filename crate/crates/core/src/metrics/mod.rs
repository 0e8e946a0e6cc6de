//! Figures of merit of amplified states: fidelity, gain, equivalent input
//! noise and quantum Fisher information, computed from Fock vectors.

pub mod analytic;

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplifier::{amplify, apply_seq, OperatorSeq};
use crate::error::{Error, Result};
use crate::fock::{
    apply_annihilate, inner, make_state, make_state_with_headroom, photon_moments, quadrature_moments, Cutoff,
    FockVector, Parity, StateSpec,
};
use crate::optimize::{maximize_scalar, Bracket, DEFAULT_STARTS};

/// Simpson nodes on `[0, π]` for phase averages.
pub const EIN_NODES: usize = 181;
/// Smallest target amplitude for odd cat targets, which vanish at zero.
pub const MIN_ODD_ALPHA: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRecord {
    pub alpha_i: f64,
    pub seq: String,
    pub f_max: f64,
    pub alpha_f_opt: f64,
    pub gain: f64,
    pub ein_0: f64,
    pub ein_avg: f64,
    pub fisher: f64,
    pub dphi: f64,
    pub n_max: usize,
}

/// `|⟨φ|ψ⟩|²` for normalized states.
pub fn fidelity(psi: &FockVector, phi: &FockVector) -> Result<f64> {
    psi.require_normalized()?;
    phi.require_normalized()?;
    Ok(inner(phi, psi).norm_sqr().clamp(0.0, 1.0))
}

/// `1 - |⟨φ|ψ⟩|²` evaluated as `‖ψ - ⟨φ|ψ⟩φ‖²`, which keeps full relative
/// precision when the fidelity is close to one.
pub fn infidelity(psi: &FockVector, phi: &FockVector) -> Result<f64> {
    psi.require_normalized()?;
    phi.require_normalized()?;
    let ov = inner(phi, psi);
    let zero = Complex64::new(0.0, 0.0);
    let len = psi.amplitudes().len().max(phi.amplitudes().len());
    let s: f64 = (0..len)
        .map(|n| {
            let p = psi.amplitudes().get(n).copied().unwrap_or(zero);
            let q = phi.amplitudes().get(n).copied().unwrap_or(zero);
            (p - ov * q).norm_sqr()
        })
        .sum();
    Ok(s.clamp(0.0, 1.0))
}

/// Family of target states a fidelity is maximized over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TargetFamily {
    Coherent,
    Scs(Parity),
}

impl TargetFamily {
    pub fn state(self, alpha: f64) -> StateSpec {
        match self {
            TargetFamily::Coherent => StateSpec::Coherent { alpha },
            TargetFamily::Scs(p) => StateSpec::scs(p, alpha),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TargetFamily::Coherent => "coherent",
            TargetFamily::Scs(Parity::Even) => "scs-even",
            TargetFamily::Scs(Parity::Odd) => "scs-odd",
        }
    }

    /// Target amplitudes searched for an input of amplitude `alpha_i`.
    pub fn bracket(self, alpha_i: f64) -> Result<Bracket> {
        let lo = match self {
            TargetFamily::Scs(Parity::Odd) => alpha_i.max(MIN_ODD_ALPHA),
            _ => alpha_i,
        };
        Bracket::new(lo, 6.0 * alpha_i.max(1.0) + 3.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FidelityOptimum {
    pub f_max: f64,
    pub alpha_f_opt: f64,
}

/// Maximizes `|⟨target(α_f)|ψ⟩|²` over `α_f` in `bracket`.
pub fn max_fidelity_state(psi: &FockVector, family: TargetFamily, bracket: &Bracket) -> Result<FidelityOptimum> {
    psi.require_normalized()?;
    let objective = |af: f64| match make_state(&family.state(af), Cutoff::Auto) {
        Ok(phi) => infidelity(psi, &phi).map_or(f64::NAN, |v| -v),
        Err(_) => f64::NAN,
    };
    let (alpha_f_opt, _) = maximize_scalar(objective, bracket, DEFAULT_STARTS)?;
    let phi = make_state(&family.state(alpha_f_opt), Cutoff::Auto)?;
    Ok(FidelityOptimum {
        f_max: fidelity(psi, &phi)?,
        alpha_f_opt,
    })
}

fn check_parity(seq: &OperatorSeq, input: &StateSpec, family: TargetFamily) -> Result<()> {
    if let (Some(p), TargetFamily::Scs(q)) = (input.parity(), family) {
        let out = seq.output_parity(p);
        if out != q {
            return Err(Error::ParityMismatch {
                seq: seq.name().to_string(),
                target: family.name().to_string(),
            });
        }
    }
    Ok(())
}

/// Amplifies `input` and maximizes its fidelity over the target family.
pub fn max_fidelity(seq: &OperatorSeq, input: &StateSpec, family: TargetFamily) -> Result<FidelityOptimum> {
    check_parity(seq, input, family)?;
    let psi = make_state_with_headroom(input, Cutoff::Auto, seq.creations())?;
    let (out, _) = amplify(seq, &psi)?;
    max_fidelity_state(&out, family, &family.bracket(input.alpha())?)
}

fn coherent_input(seq: &OperatorSeq, alpha_i: f64) -> Result<FockVector> {
    make_state_with_headroom(&StateSpec::Coherent { alpha: alpha_i }, Cutoff::Auto, seq.creations())
}

fn check_quadrature(lambda: f64) -> Result<()> {
    // distance of λ from the nearest odd multiple of π/2
    let d = (lambda - FRAC_PI_2).rem_euclid(PI);
    if d.min(PI - d) < 1e-12 {
        return Err(Error::SingularQuadrature { lambda });
    }
    Ok(())
}

fn quadrature_ratio(out: &FockVector, input: &FockVector, lambda: f64) -> Result<f64> {
    let (m_out, _) = quadrature_moments(out, lambda)?;
    let (m_in, _) = quadrature_moments(input, lambda)?;
    Ok(m_out.abs() / m_in.abs())
}

/// `|⟨x_λ⟩_out| / |⟨x_λ⟩_in|` for a coherent input of amplitude `α_i > 0`.
pub fn gain_coherent(seq: &OperatorSeq, alpha_i: f64, lambda: f64) -> Result<f64> {
    if !(alpha_i > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "quadrature gain needs alpha_i > 0, got {alpha_i}"
        )));
    }
    check_quadrature(lambda)?;
    let psi = coherent_input(seq, alpha_i)?;
    let (out, _) = amplify(seq, &psi)?;
    quadrature_ratio(&out, &psi, lambda)
}

/// Limit of [`gain_coherent`] as `α_i → 0`.
///
/// To first order `Â|α⟩ ∝ u + α v` with `u = Â|0⟩`, `v = Â|1⟩`, and since
/// `u`, `v` have opposite parity, `⟨a⟩/α → (⟨u|a|v⟩ + ⟨v|a|u⟩)/‖u‖²`.
pub fn zero_amplitude_gain(seq: &OperatorSeq) -> Result<f64> {
    let u = apply_seq(seq, &FockVector::vacuum())?;
    let v = apply_seq(seq, &FockVector::number(1, 1))?;
    let norm_sqr = u.norm_sqr();
    if norm_sqr == 0.0 {
        return Err(Error::ZeroNorm);
    }
    let a_v = apply_annihilate(&v);
    let a_u = apply_annihilate(&u);
    Ok((inner(&u, &a_v) + inner(&v, &a_u)).re.abs() / norm_sqr)
}

/// Gain of a cat-state input: optimal target amplitude over input amplitude.
pub fn gain_scs(seq: &OperatorSeq, parity: Parity, alpha_i: f64) -> Result<f64> {
    if !(alpha_i > 0.0) {
        return Err(Error::InvalidParameter(format!("cat gain needs alpha_i > 0, got {alpha_i}")));
    }
    let input = StateSpec::scs(parity, alpha_i);
    let family = TargetFamily::Scs(seq.output_parity(parity));
    Ok(max_fidelity(seq, &input, family)?.alpha_f_opt / alpha_i)
}

fn ein_from(out: &FockVector, input: &FockVector, gain: f64, lambda: f64) -> Result<f64> {
    let (_, v_out) = quadrature_moments(out, lambda)?;
    let (_, v_in) = quadrature_moments(input, lambda)?;
    Ok(v_out / (gain * gain) - v_in)
}

/// Amplified state, input state and the phase-independent gain (the
/// zero-amplitude limit at `α_i = 0`).
fn amplified_coherent(seq: &OperatorSeq, alpha_i: f64) -> Result<(FockVector, FockVector, f64)> {
    if !(alpha_i >= 0.0) {
        return Err(Error::InvalidParameter(format!("alpha_i must be >= 0, got {alpha_i}")));
    }
    let psi = coherent_input(seq, alpha_i)?;
    let (out, _) = amplify(seq, &psi)?;
    let gain = if alpha_i == 0.0 {
        zero_amplitude_gain(seq)?
    } else {
        quadrature_ratio(&out, &psi, 0.0)?
    };
    Ok((out, psi, gain))
}

/// Equivalent input noise `Var_out(x_λ)/g² - Var_in(x_λ)` of a coherent input.
pub fn ein(seq: &OperatorSeq, alpha_i: f64, lambda: f64) -> Result<f64> {
    let (out, psi, g0) = amplified_coherent(seq, alpha_i)?;
    let gain = if alpha_i == 0.0 {
        g0
    } else {
        check_quadrature(lambda)?;
        quadrature_ratio(&out, &psi, lambda)?
    };
    ein_from(&out, &psi, gain, lambda)
}

/// Composite Simpson average of `f` over `[0, π]` on `nodes` points (odd).
pub fn phase_average<F: FnMut(f64) -> Result<f64>>(mut f: F, nodes: usize) -> Result<f64> {
    if nodes < 3 || nodes % 2 == 0 {
        return Err(Error::InvalidParameter(format!("Simpson needs an odd node count >= 3, got {nodes}")));
    }
    let h = PI / (nodes - 1) as f64;
    let mut sum = 0.0;
    for k in 0..nodes {
        let w = if k == 0 || k == nodes - 1 {
            1.0
        } else if k % 2 == 1 {
            4.0
        } else {
            2.0
        };
        sum += w * f(k as f64 * h)?;
    }
    Ok(sum * h / 3.0 / PI)
}

/// EIN averaged uniformly over the quadrature phase, using the `λ = 0` gain at every node.
pub fn ein_avg(seq: &OperatorSeq, alpha_i: f64) -> Result<f64> {
    ein_avg_with_nodes(seq, alpha_i, EIN_NODES)
}

pub fn ein_avg_with_nodes(seq: &OperatorSeq, alpha_i: f64, nodes: usize) -> Result<f64> {
    let (out, psi, gain) = amplified_coherent(seq, alpha_i)?;
    phase_average(|l| ein_from(&out, &psi, gain, l), nodes)
}

/// Quantum Fisher information `4 Var(n)` of a pure state.
pub fn fisher(psi: &FockVector) -> Result<f64> {
    Ok(4.0 * photon_moments(psi)?.1)
}

/// Cramér-Rao phase uncertainty `1/√F`.
pub fn phase_uncertainty(psi: &FockVector) -> Result<f64> {
    let f = fisher(psi)?;
    if f <= 1e-14 {
        return Err(Error::ZeroFisher);
    }
    Ok(1.0 / f.sqrt())
}

/// All coherent-input metrics of `seq` at `α_i`.
pub fn metric_record(seq: &OperatorSeq, alpha_i: f64) -> Result<MetricRecord> {
    let (out, psi, gain) = amplified_coherent(seq, alpha_i)?;
    let opt = max_fidelity_state(&out, TargetFamily::Coherent, &TargetFamily::Coherent.bracket(alpha_i)?)?;
    let ein_0 = ein_from(&out, &psi, gain, 0.0)?;
    let ein_avg = phase_average(|l| ein_from(&out, &psi, gain, l), EIN_NODES)?;
    let fisher = fisher(&out)?;
    Ok(MetricRecord {
        alpha_i,
        seq: seq.name().to_string(),
        f_max: opt.f_max,
        alpha_f_opt: opt.alpha_f_opt,
        gain,
        ein_0,
        ein_avg,
        fisher,
        dphi: if fisher > 0.0 { 1.0 / fisher.sqrt() } else { f64::INFINITY },
        n_max: out.n_max(),
    })
}

/// Metric records for every `(seq, α_i)` pair, computed in parallel and
/// sorted by sequence name, then amplitude.
pub fn sweep(seqs: &[OperatorSeq], alphas: &[f64]) -> Result<Vec<MetricRecord>> {
    let jobs: Vec<(&OperatorSeq, f64)> = seqs.iter().flat_map(|s| alphas.iter().map(move |&a| (s, a))).collect();
    let mut rows = jobs
        .par_iter()
        .map(|(s, a)| metric_record(s, *a))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|x, y| x.seq.cmp(&y.seq).then(x.alpha_i.total_cmp(&y.alpha_i)));
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplifier::Catalog;

    fn coherent(alpha: f64) -> FockVector {
        make_state(&StateSpec::Coherent { alpha }, Cutoff::Auto).unwrap()
    }

    #[test]
    fn fidelity_trivial_cases() {
        let c = coherent(1.3);
        assert!((fidelity(&c, &c).unwrap() - 1.0).abs() < 1e-14);
        assert!(infidelity(&c, &c).unwrap() < 1e-28);
        assert_eq!(fidelity(&FockVector::number(0, 2), &FockVector::number(2, 2)).unwrap(), 0.0);
        let bad = FockVector::from_real([1.0, 1.0]);
        assert!(matches!(fidelity(&bad, &c), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn add2_fidelity_at_unit_amplitudes() {
        let (out, _) = amplify(&Catalog::Add2.seq(), &coherent(1.0)).unwrap();
        assert!((fidelity(&out, &coherent(1.0)).unwrap() - 1.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn add2_vacuum_optimum() {
        let opt = max_fidelity(&Catalog::Add2.seq(), &StateSpec::Coherent { alpha: 0.0 }, TargetFamily::Coherent)
            .unwrap();
        assert!((opt.f_max - 2.0 * (-2.0f64).exp()).abs() < 1e-12);
        assert!((opt.alpha_f_opt - 2f64.sqrt()).abs() < 1e-7);
    }

    #[test]
    fn parity_mismatch() {
        let add = OperatorSeq::new("Add", vec![crate::amplifier::Op::Add]);
        let r = max_fidelity(&add, &StateSpec::ScsEven { alpha: 1.0 }, TargetFamily::Scs(Parity::Even));
        assert!(matches!(r, Err(Error::ParityMismatch { .. })));
        assert!(max_fidelity(&add, &StateSpec::ScsEven { alpha: 1.0 }, TargetFamily::Scs(Parity::Odd)).is_ok());
    }

    #[test]
    fn gain_is_phase_independent() {
        for cat in Catalog::ALL.iter().skip(1) {
            let seq = cat.seq();
            let g0 = gain_coherent(&seq, 0.8, 0.1).unwrap();
            for k in 1..8 {
                let g = gain_coherent(&seq, 0.8, 0.1 + 0.2 * k as f64).unwrap();
                assert!((g - g0).abs() < 1e-9, "{cat:?}");
            }
        }
    }

    #[test]
    fn singular_quadrature() {
        let seq = Catalog::AddSub.seq();
        assert!(matches!(gain_coherent(&seq, 1.0, FRAC_PI_2), Err(Error::SingularQuadrature { .. })));
        assert!(matches!(gain_coherent(&seq, 1.0, 3.0 * FRAC_PI_2), Err(Error::SingularQuadrature { .. })));
        assert!(matches!(ein(&seq, 1.0, FRAC_PI_2), Err(Error::SingularQuadrature { .. })));
    }

    #[test]
    fn small_amplitude_gains() {
        assert!((gain_coherent(&Catalog::AddSub.seq(), 1e-4, 0.0).unwrap() - 2.0).abs() < 1e-6);
        assert!((gain_coherent(&Catalog::Add2.seq(), 1e-4, 0.0).unwrap() - 3.0).abs() < 1e-6);
        for cat in Catalog::ALL.iter().skip(2) {
            let lim = zero_amplitude_gain(&cat.seq()).unwrap();
            assert!((lim - analytic::coherent_gain(*cat, 0.0).unwrap()).abs() < 1e-14, "{cat:?}");
        }
    }

    #[test]
    fn ein_examples() {
        assert!((ein(&Catalog::AddSub.seq(), 0.0, 0.0).unwrap() + 0.375).abs() < 1e-14);
        assert!((ein_avg(&Catalog::AddSub.seq(), 0.0).unwrap() + 0.375).abs() < 1e-12);
        assert!((ein_avg(&Catalog::Add2.seq(), 0.0).unwrap() + 2.0 / 9.0).abs() < 1e-12);
        // |E_0| falls off roughly as 1/α²
        for cat in Catalog::ALL.iter().skip(2) {
            let e: Vec<f64> = [4.0, 6.0, 10.0, 20.0].iter().map(|&a| ein(&cat.seq(), a, 0.0).unwrap()).collect();
            assert!(e.windows(2).all(|w| w[0] < w[1] && w[1] < 0.0), "{cat:?} {e:?}");
            assert!(e[3].abs() < 0.02, "{cat:?} {e:?}");
        }
    }

    #[test]
    fn ein_average_converged() {
        for cat in [Catalog::AddSub, Catalog::Add2, Catalog::Add4] {
            for a in [0.0, 0.7, 2.5] {
                let coarse = ein_avg(&cat.seq(), a).unwrap();
                let fine = ein_avg_with_nodes(&cat.seq(), a, 361).unwrap();
                assert!((coarse - fine).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn phase_zero_has_lowest_ein() {
        for cat in Catalog::ONE_CYCLE {
            for k in 1..=20 {
                let a = 0.2 * k as f64;
                assert!(ein(&cat.seq(), a, 0.0).unwrap() <= ein_avg(&cat.seq(), a).unwrap());
            }
        }
    }

    #[test]
    fn fisher_examples() {
        assert!((fisher(&coherent(1.5)).unwrap() - 9.0).abs() < 1e-10);
        assert_eq!(fisher(&FockVector::number(3, 5)).unwrap(), 0.0);
        assert!((phase_uncertainty(&coherent(1.0)).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(phase_uncertainty(&FockVector::number(3, 5)), Err(Error::ZeroFisher));
    }

    #[test]
    fn sweep_is_sorted() {
        let seqs = [Catalog::Add2.seq(), Catalog::AddSub.seq()];
        let rows = sweep(&seqs, &[1.0, 0.5]).unwrap();
        let keys: Vec<_> = rows.iter().map(|r| (r.seq.as_str(), r.alpha_i)).collect();
        assert_eq!(keys, [("Add2", 0.5), ("Add2", 1.0), ("AddSub", 0.5), ("AddSub", 1.0)]);
        for r in &rows {
            assert!(r.f_max > 0.0 && r.f_max <= 1.0 && r.gain > 0.0);
            assert!((r.dphi - 1.0 / r.fisher.sqrt()).abs() < 1e-15);
        }
    }
}
