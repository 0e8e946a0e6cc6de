//! Closed-form fidelities, gains, EINs and Fisher information for real
//! amplitudes. The numeric routines in the parent module are authoritative;
//! these exist to be checked against them.

use crate::amplifier::{coherent_norm_sqr, poly_in_sq, scs_superposition_norm, Catalog};
use crate::error::{Error, Result};
use crate::fock::Parity;

fn no_form(cat: Catalog) -> Error {
    Error::NoClosedForm(cat.name().to_string())
}

/// `|⟨α_f|Â|α_i⟩|²` up to normalization, i.e. the polynomial factor of the
/// fidelity with the Gaussian overlap stripped.
fn overlap_factor(cat: Catalog, ai: f64, af: f64) -> Result<f64> {
    let x = ai * af;
    Ok(match cat {
        Catalog::AddSub => (x + 1.0).powi(2),
        Catalog::Add2 => af.powi(4),
        Catalog::AddSub2 => (x * x + 3.0 * x + 1.0).powi(2),
        Catalog::Add4 => af.powi(8),
        Catalog::AddSubAdd2 => af.powi(4) * (x + 3.0).powi(2),
        Catalog::Add2AddSub => af.powi(4) * (x + 1.0).powi(2),
        _ => return Err(no_form(cat)),
    })
}

/// Fidelity of the amplified coherent state `|α_i⟩` with the coherent state `|α_f⟩`.
pub fn coherent_fidelity(cat: Catalog, alpha_i: f64, alpha_f: f64) -> Result<f64> {
    let p = overlap_factor(cat, alpha_i, alpha_f)?;
    Ok(p * (-(alpha_f - alpha_i).powi(2)).exp() / coherent_norm_sqr(cat, alpha_i))
}

/// As printed for `a†⁴`, with `α_i⁸` where the overlap carries `α_f⁸`.
/// Every other sequence returns the correct form.
pub fn coherent_fidelity_printed(cat: Catalog, alpha_i: f64, alpha_f: f64) -> Result<f64> {
    if cat == Catalog::Add4 {
        return Ok(alpha_i.powi(8) * (-(alpha_f - alpha_i).powi(2)).exp() / coherent_norm_sqr(cat, alpha_i));
    }
    coherent_fidelity(cat, alpha_i, alpha_f)
}

/// Numerator of the quadrature gain as a polynomial in `α²`, highest power first.
fn gain_poly(cat: Catalog) -> Result<&'static [f64]> {
    Ok(match cat {
        Catalog::AddSub => &[1.0, 4.0, 2.0],
        Catalog::Add2 => &[1.0, 6.0, 6.0],
        Catalog::AddSub2 => &[1.0, 12.0, 38.0, 32.0, 4.0],
        Catalog::Add4 => &[1.0, 20.0, 120.0, 240.0, 120.0],
        Catalog::AddSubAdd2 => &[1.0, 18.0, 96.0, 168.0, 72.0],
        Catalog::Add2AddSub => &[1.0, 14.0, 54.0, 60.0, 12.0],
        _ => return Err(no_form(cat)),
    })
}

/// Phase-independent quadrature gain for a coherent input. Valid at `α = 0`
/// as the zero-amplitude limit.
pub fn coherent_gain(cat: Catalog, alpha: f64) -> Result<f64> {
    Ok(poly_in_sq(gain_poly(cat)?, alpha) / coherent_norm_sqr(cat, alpha))
}

/// `E = -scale (P(α²) + α² Q(α²) cos 2λ) / G(α²)²`.
struct EinForm {
    scale: f64,
    p: &'static [f64],
    q: &'static [f64],
}

fn two_cycle_ein(cat: Catalog) -> Option<EinForm> {
    Some(match cat {
        Catalog::AddSub2 => EinForm {
            scale: 0.5,
            p: &[4.0, 62.0, 382.0, 1101.0, 1554.0, 955.0, 226.0, 15.0],
            q: &[4.0, 52.0, 250.0, 508.0, 450.0, 132.0, 14.0],
        },
        Catalog::Add4 => EinForm {
            scale: 4.0,
            p: &[1.0, 26.0, 276.0, 1488.0, 4344.0, 6624.0, 4896.0, 1152.0],
            q: &[1.0, 24.0, 228.0, 1056.0, 2520.0, 2880.0, 1440.0],
        },
        Catalog::AddSubAdd2 => EinForm {
            scale: 1.5,
            p: &[2.0, 49.0, 486.0, 2421.0, 6432.0, 8784.0, 5688.0, 1188.0],
            q: &[2.0, 44.0, 378.0, 1560.0, 3252.0, 3168.0, 1296.0],
        },
        Catalog::Add2AddSub => EinForm {
            scale: 0.5,
            p: &[6.0, 103.0, 714.0, 2395.0, 4128.0, 3344.0, 1192.0, 124.0],
            q: &[6.0, 92.0, 542.0, 1432.0, 1772.0, 800.0, 144.0],
        },
        _ => return None,
    })
}

/// Equivalent input noise at phase `λ` for a coherent input.
///
/// `a†²` has no entry: its printed form is wrong (see
/// [`ein_add2_printed`]) and the numeric path covers it.
pub fn coherent_ein(cat: Catalog, alpha: f64, lambda: f64) -> Result<f64> {
    let x = alpha * alpha;
    let c2 = (2.0 * lambda).cos();
    if cat == Catalog::AddSub {
        let num = 2.0 * x * x * x + 11.0 * x * x + 11.0 * x + 2.0 * (x * x + 5.0 * x + 3.0) * x * c2 + 1.0;
        let g = x * x + 4.0 * x + 2.0;
        return Ok(num * coherent_norm_sqr(cat, alpha) / (2.0 * g * g) - 2.0 * x * lambda.cos().powi(2) - 0.5);
    }
    let form = two_cycle_ein(cat).ok_or_else(|| no_form(cat))?;
    let g = poly_in_sq(gain_poly(cat)?, alpha);
    let num = poly_in_sq(form.p, alpha) + x * poly_in_sq(form.q, alpha) * c2;
    Ok(-form.scale * num / (g * g))
}

/// The `a†²` EIN exactly as printed, with `{2N}²` and `{2N}⁴` factors.
pub fn ein_add2_printed(alpha: f64, lambda: f64) -> f64 {
    let x = alpha * alpha;
    let two_n_sqr = 4.0 / coherent_norm_sqr(Catalog::Add2, alpha);
    let inner = x * x + (x + 6.0) * x * (2.0 * lambda).cos() + 6.0 * x + 2.0;
    let g = x * x + 6.0 * x + 6.0;
    (two_n_sqr * (x + 2.0) * inner + 1.0) / (two_n_sqr * two_n_sqr * g * g) - 2.0 * x * lambda.cos().powi(2) - 0.5
}

/// Quantum Fisher information `4 Var(n)` of `Â|±_α⟩` for `Â ∈ {1, a a†, a†²}`.
pub fn scs_fisher(cat: Catalog, parity: Parity, alpha: f64) -> Result<f64> {
    if parity == Parity::Odd && alpha == 0.0 {
        return Err(Error::OddScsAtZero);
    }
    let a2 = alpha * alpha;
    let (sh, ch) = (a2.sinh(), a2.cosh());
    let even = parity == Parity::Even;
    match cat {
        Catalog::Identity => {
            // divided through by e^{4α²}
            let e = (-2.0 * a2).exp();
            let one_minus_e4 = -(-4.0 * a2).exp_m1();
            let (num, den) = if even {
                (4.0 * a2 * e + one_minus_e4, (1.0 + e).powi(2))
            } else {
                (one_minus_e4 - 4.0 * a2 * e, (-2.0 * a2).exp_m1().powi(2))
            };
            Ok(4.0 * a2 * num / den)
        }
        Catalog::AddSub => {
            let n = scs_superposition_norm(cat, parity, alpha)?;
            let (s1, c1) = if even { (sh, ch) } else { (ch, sh) };
            let t1 = a2.exp() / (n * n) * (4.0 * (2.0 * a2 * a2 + 1.0) * s1 + (a2 * a2 + 14.0) * a2 * c1);
            let t2 = 4.0 * ((a2 * a2 + 4.0) * alpha * s1 + 5.0 * a2 * alpha * c1).powi(2);
            Ok(16.0 * n.powi(4) * (-2.0 * a2).exp() * a2 * (t1 - t2))
        }
        Catalog::Add2 => {
            let n = scs_superposition_norm(cat, parity, alpha)?;
            let (s1, c1) = if even { (sh, ch) } else { (ch, sh) };
            let t1 = a2.exp() / (n * n)
                * ((13.0 * a2 * a2 + 46.0) * a2 * s1 + (a2.powi(4) + 46.0 * a2 * a2 + 8.0) * c1);
            let t2 = 4.0 * ((a2 * a2 + 14.0) * a2 * s1 + 4.0 * (2.0 * a2 * a2 + 1.0) * c1).powi(2);
            Ok(16.0 * n.powi(4) * (-2.0 * a2).exp() * (t1 - t2))
        }
        _ => Err(no_form(cat)),
    }
}
