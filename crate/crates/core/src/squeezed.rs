//! Amplified squeezed vacuum and squeezed single-photon states as
//! approximations of cat states.

use std::f64::consts::LN_10;

use rayon::prelude::*;
use serde::Serialize;

use crate::amplifier::{amplify, Catalog, OperatorSeq};
use crate::error::{Error, Result};
use crate::fock::{make_state, make_state_with_headroom, Cutoff, FockVector, Parity, StateSpec};
use crate::metrics::{fidelity, infidelity, TargetFamily};
use crate::optimize::{maximize_scalar, Bracket};

/// Squeezing is searched over `r ∈ [-R_MAX, R_MAX]`.
pub const R_MAX: f64 = 3.0;
/// Probes of the squeezing search (spacing 0.25).
pub const R_STARTS: usize = 25;

/// Squeezing in dB, variance-ratio convention `10 log₁₀ e^{2r}`.
pub fn squeezing_db(r: f64) -> f64 {
    20.0 / LN_10 * r
}

/// Normalized `Â S(r)|0⟩` (even) or `Â S(r)|1⟩` (odd).
pub fn amplified_squeezed(seq: &OperatorSeq, parity: Parity, r: f64) -> Result<FockVector> {
    let psi = make_state_with_headroom(&StateSpec::squeezed(parity, r), Cutoff::Auto, seq.creations())?;
    Ok(amplify(seq, &psi)?.0)
}

/// Closed-form normalization `M_±^Â(r)`.
pub fn squeezed_norm_analytic(cat: Catalog, parity: Parity, r: f64) -> Result<f64> {
    let t2 = r.tanh().powi(2);
    let sech2 = r.cosh().powi(-2);
    let s = parity.sign();
    match cat {
        Catalog::Identity => Ok(1.0),
        Catalog::AddSub => {
            Ok(sech2 * (((1.0 - s) * t2 * t2 + (12.0 - 8.0 * s) * t2 + 5.0 - 3.0 * s) / 2.0).powf(-0.5))
        }
        Catalog::Add2 => Ok(sech2 * ((5.0 - 4.0 * s) * t2 + 4.0 - 2.0 * s).powf(-0.5)),
        _ => Err(Error::NoClosedForm(cat.name().to_string())),
    }
}

/// Closed-form `|⟨±_{α_f}|±S_r^Â⟩|²` for `Â ∈ {a a†, a†²}`.
pub fn squeezed_fidelity_analytic(cat: Catalog, parity: Parity, r: f64, alpha_f: f64) -> Result<f64> {
    if parity == Parity::Odd && alpha_f == 0.0 {
        return Err(Error::OddScsAtZero);
    }
    let t = r.tanh();
    let s = parity.sign();
    let m = squeezed_norm_analytic(cat, parity, r)?;
    let a2 = alpha_f * alpha_f;
    let cosh_pow = r.cosh().powf(2.0 - s);
    // 1 ± e^{-2α_f²}
    let target = match parity {
        Parity::Even => 1.0 + (-2.0 * a2).exp(),
        Parity::Odd => -(-2.0 * a2).exp_m1(),
    };
    let gauss = (-a2 * (t + 1.0)).exp();
    match cat {
        Catalog::AddSub => {
            let poly = a2 * t - (3.0 - s) / 2.0;
            Ok(2.0 * m * m * alpha_f.powf(1.0 - s) * gauss * poly * poly / (target * cosh_pow))
        }
        Catalog::Add2 => Ok(2.0 * m * m * alpha_f.powf(5.0 - s) * gauss / (target * cosh_pow)),
        _ => Err(Error::NoClosedForm(cat.name().to_string())),
    }
}

fn check_seq(seq: &OperatorSeq, parity: Parity) -> Result<()> {
    if seq.output_parity(parity) != parity {
        return Err(Error::ParityMismatch {
            seq: seq.name().to_string(),
            target: TargetFamily::Scs(parity).name().to_string(),
        });
    }
    Ok(())
}

/// Numeric fidelity of the amplified squeezed state with the cat state `|±_{α_f}⟩`.
pub fn squeezed_fidelity(seq: &OperatorSeq, parity: Parity, r: f64, alpha_f: f64) -> Result<f64> {
    check_seq(seq, parity)?;
    let target = make_state(&StateSpec::scs(parity, alpha_f), Cutoff::Auto)?;
    fidelity(&amplified_squeezed(seq, parity, r)?, &target)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SqueezedFitRow {
    pub parity: Parity,
    pub seq: String,
    pub alpha_f: f64,
    pub f_max: f64,
    /// Magnitude of the optimal squeezing.
    pub r_opt: f64,
    /// Optimal `r` in the sign convention of the number-basis series.
    pub r_signed: f64,
    pub squeezing_db: f64,
}

/// Best approximation of `|±_{α_f}⟩` by `Â S(r)|0 or 1⟩` over the squeezing `r`.
pub fn squeezed_fit(seq: &OperatorSeq, parity: Parity, alpha_f: f64) -> Result<SqueezedFitRow> {
    check_seq(seq, parity)?;
    let target = make_state(&StateSpec::scs(parity, alpha_f), Cutoff::Auto)?;
    let objective = |r: f64| match amplified_squeezed(seq, parity, r) {
        Ok(psi) => infidelity(&psi, &target).map_or(f64::NAN, |v| -v),
        Err(_) => f64::NAN,
    };
    let bracket = Bracket::new(-R_MAX, R_MAX)?;
    let (r_signed, _) = maximize_scalar(objective, &bracket, R_STARTS)?;
    let f_max = fidelity(&amplified_squeezed(seq, parity, r_signed)?, &target)?;
    Ok(SqueezedFitRow {
        parity,
        seq: seq.name().to_string(),
        alpha_f,
        f_max,
        r_opt: r_signed.abs(),
        r_signed,
        squeezing_db: squeezing_db(r_signed.abs()),
    })
}

/// Fit rows for every `(seq, α_f)` pair, computed in parallel, sorted by
/// sequence name, then amplitude.
pub fn squeezed_sweep(seqs: &[OperatorSeq], parity: Parity, alphas: &[f64]) -> Result<Vec<SqueezedFitRow>> {
    let jobs: Vec<(&OperatorSeq, f64)> = seqs.iter().flat_map(|s| alphas.iter().map(move |&a| (s, a))).collect();
    let mut rows = jobs
        .par_iter()
        .map(|(s, a)| squeezed_fit(s, parity, *a))
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|x, y| x.seq.cmp(&y.seq).then(x.alpha_f.total_cmp(&y.alpha_f)));
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezedPeak {
    pub alpha_f: f64,
    pub f_max: f64,
}

/// Target amplitude in `[lo, hi]` where the fitted fidelity peaks.
pub fn squeezed_peak(seq: &OperatorSeq, parity: Parity, lo: f64, hi: f64) -> Result<SqueezedPeak> {
    let bracket = Bracket::new(lo, hi)?.with_tol(1e-6)?;
    let curve = |a: f64| squeezed_fit(seq, parity, a).map_or(f64::NAN, |row| row.f_max);
    let (alpha_f, f_max) = maximize_scalar(curve, &bracket, 8)?;
    Ok(SqueezedPeak { alpha_f, f_max })
}

/// The amplified-vs-bare and method-vs-method crossings of the fitted fidelities.
pub fn squeezed_crossovers() -> Result<Vec<crate::crossover::CrossoverReport>> {
    crate::crossover::Crossover::SQUEEZED
        .iter()
        .map(|c| c.compute())
        .collect()
}
