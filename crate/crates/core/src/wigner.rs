//! Wigner functions via displaced parity, plus closed forms for amplified
//! coherent states.

use std::f64::consts::FRAC_2_PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::amplifier::{Catalog, OperatorSeq};
use crate::error::{Error, Result};
use crate::fock::{auto_cutoff, photon_moments, FockVector, NORM_TOL};

/// Doublings of the output dimension tried before giving up.
const MAX_DOUBLINGS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub x: f64,
    pub y: f64,
}

impl PhasePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !(x.is_finite() && y.is_finite()) {
            return Err(Error::InvalidParameter(format!("phase point must be finite, got ({x}, {y})")));
        }
        Ok(PhasePoint { x, y })
    }

    pub fn beta(self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }
}

/// `d_n = ⟨n+k|D(γ)|n⟩` for `n = 0..len`.
///
/// With `x = |γ|²` these are `√(n!/(n+k)!) γ^k e^{-x/2} L_n^{(k)}(x)`; the
/// Laguerre recurrence is carried on `d_n` directly so the factorial ratio
/// never has to be formed.
fn displacement_diagonal(gamma: Complex64, k: usize, len: usize, out: &mut Vec<Complex64>) {
    out.clear();
    if len == 0 {
        return;
    }
    let x = gamma.norm_sqr();
    let kf = k as f64;
    let log_d0 = if k == 0 {
        -0.5 * x
    } else {
        kf * gamma.norm().ln() - 0.5 * ln_factorial(k) - 0.5 * x
    };
    let d0 = Complex64::from_polar(log_d0.exp(), kf * gamma.arg());
    out.push(d0);
    if len == 1 {
        return;
    }
    out.push(d0 * (1.0 + kf - x) / (1.0 + kf).sqrt());
    for n in 1..len - 1 {
        let nf = n as f64;
        let next = (out[n] * (2.0 * nf + 1.0 + kf - x) - out[n - 1] * (nf * (nf + kf)).sqrt())
            / ((nf + 1.0) * (nf + kf + 1.0)).sqrt();
        out.push(next);
    }
}

fn ln_factorial(k: usize) -> f64 {
    (2..=k).map(|j| (j as f64).ln()).sum()
}

/// First `m_len` components of `D(γ)|ψ⟩`.
fn displace(psi: &FockVector, gamma: Complex64, m_len: usize) -> Vec<Complex64> {
    let c = psi.amplitudes();
    let n_len = c.len();
    let mut v = vec![Complex64::new(0.0, 0.0); m_len];
    let mut diag = Vec::with_capacity(m_len.max(n_len));
    // m >= n
    for k in 0..m_len {
        let len = n_len.min(m_len - k);
        displacement_diagonal(gamma, k, len, &mut diag);
        for n in 0..len {
            v[n + k] += diag[n] * c[n];
        }
    }
    // m < n: ⟨m|D(γ)|m+k⟩ = ⟨m+k|D(-γ*)|m⟩
    let reflected = -gamma.conj();
    for k in 1..n_len {
        let len = m_len.min(n_len - k);
        displacement_diagonal(reflected, k, len, &mut diag);
        for m in 0..len {
            v[m] += diag[m] * c[m + k];
        }
    }
    v
}

/// `W(β) = (2/π) Σ_m (-1)^m |⟨m|D(-β)|ψ⟩|²`.
pub fn wigner_numeric(psi: &FockVector, pt: PhasePoint) -> Result<f64> {
    let (mean, _) = photon_moments(psi)?;
    let reach = mean.sqrt() + pt.beta().norm();
    let mut m_len = auto_cutoff(reach * reach).max(psi.amplitudes().len()) + 1;
    let mut tail = 0.0;
    for _ in 0..=MAX_DOUBLINGS {
        let v = displace(psi, -pt.beta(), m_len);
        let mass: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        tail = (psi.norm_sqr() - mass).abs();
        if tail < NORM_TOL {
            let w: f64 = v
                .iter()
                .enumerate()
                .map(|(m, z)| if m % 2 == 0 { z.norm_sqr() } else { -z.norm_sqr() })
                .sum();
            return Ok(FRAC_2_PI * w);
        }
        m_len *= 2;
    }
    Err(Error::CutoffTooSmall {
        n_max: m_len / 2 - 1,
        tail,
    })
}

/// Coherent-state families with closed-form Wigner functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WignerFamily {
    Coherent,
    Add1,
    AddSub,
    Add2,
}

impl WignerFamily {
    pub const ALL: [WignerFamily; 4] = [
        WignerFamily::Coherent,
        WignerFamily::Add1,
        WignerFamily::AddSub,
        WignerFamily::Add2,
    ];

    pub fn seq(self) -> OperatorSeq {
        match self {
            WignerFamily::Coherent => Catalog::Identity,
            WignerFamily::Add1 => Catalog::Add,
            WignerFamily::AddSub => Catalog::AddSub,
            WignerFamily::Add2 => Catalog::Add2,
        }
        .seq()
    }
}

impl std::str::FromStr for WignerFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "coherent" | "identity" => Ok(WignerFamily::Coherent),
            "add1" | "add" => Ok(WignerFamily::Add1),
            "addsub" => Ok(WignerFamily::AddSub),
            "add2" => Ok(WignerFamily::Add2),
            _ => Err(Error::InvalidParameter(format!("unknown Wigner family {s:?}"))),
        }
    }
}

/// Closed-form Wigner function of `Â|α_i⟩` for real `α_i`.
pub fn wigner_analytic(family: WignerFamily, alpha_i: f64, pt: PhasePoint) -> f64 {
    let (a, x, y) = (alpha_i, pt.x, pt.y);
    let g = FRAC_2_PI * (-2.0 * (x - a).powi(2) - 2.0 * y * y).exp();
    let a2 = a * a;
    let u = (a - 2.0 * x).powi(2);
    match family {
        WignerFamily::Coherent => g,
        WignerFamily::Add1 => g * (u + 4.0 * y * y - 1.0) / (1.0 + a2),
        WignerFamily::AddSub => {
            g * (a2 * a2 + a2 * (4.0 * x * x + 4.0 * y * y - 3.0) - 4.0 * a2 * a * x + 4.0 * a * x + 1.0)
                / (a2 * a2 + 3.0 * a2 + 1.0)
        }
        WignerFamily::Add2 => {
            g * (16.0 * y.powi(4) + 8.0 * y * y * (u - 2.0) + u * (u - 4.0) + 2.0) / (a2 * a2 + 4.0 * a2 + 2.0)
        }
    }
}

/// Wigner values on a rectangular grid, stored row-major with `y` indexing
/// rows: `values[iy * xs.len() + ix]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WignerGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
}

impl WignerGrid {
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.xs.len() + ix]
    }

    /// Riemann sum `Σ W Δx Δy`.
    pub fn integral(&self) -> f64 {
        let dx = (self.xs[self.xs.len() - 1] - self.xs[0]) / (self.xs.len() - 1) as f64;
        let dy = (self.ys[self.ys.len() - 1] - self.ys[0]) / (self.ys.len() - 1) as f64;
        self.values.iter().sum::<f64>() * dx * dy
    }

    /// Node `(x, y)` of the largest value.
    pub fn argmax(&self) -> (f64, f64) {
        let i = (0..self.values.len())
            .max_by(|&a, &b| self.values[a].total_cmp(&self.values[b]))
            .unwrap_or(0);
        (self.xs[i % self.xs.len()], self.ys[i / self.xs.len()])
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Equispaced nodes `lo..=hi`.
pub fn axis(lo: f64, hi: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "grid axis needs finite lo < hi and at least 2 nodes, got [{lo}, {hi}] with {n}"
        )));
    }
    let step = (hi - lo) / (n - 1) as f64;
    Ok((0..n).map(|i| if i + 1 == n { hi } else { lo + step * i as f64 }).collect())
}

pub fn wigner_grid(psi: &FockVector, x_range: (f64, f64), y_range: (f64, f64), nx: usize, ny: usize) -> Result<WignerGrid> {
    grid_with(x_range, y_range, nx, ny, |pt| wigner_numeric(psi, pt))
}

pub fn wigner_grid_analytic(
    family: WignerFamily,
    alpha_i: f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    nx: usize,
    ny: usize,
) -> Result<WignerGrid> {
    grid_with(x_range, y_range, nx, ny, |pt| Ok(wigner_analytic(family, alpha_i, pt)))
}

fn grid_with<F>(x_range: (f64, f64), y_range: (f64, f64), nx: usize, ny: usize, f: F) -> Result<WignerGrid>
where
    F: Fn(PhasePoint) -> Result<f64> + Sync,
{
    let xs = axis(x_range.0, x_range.1, nx)?;
    let ys = axis(y_range.0, y_range.1, ny)?;
    let rows = ys
        .par_iter()
        .map(|&y| xs.iter().map(|&x| f(PhasePoint { x, y })).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Ok(WignerGrid {
        xs,
        ys,
        values: rows.concat(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::amplifier::amplify;
    use crate::fock::{make_state, make_state_with_headroom, Cutoff, StateSpec};

    fn amplified(family: WignerFamily, alpha: f64) -> FockVector {
        let seq = family.seq();
        let psi = make_state_with_headroom(&StateSpec::Coherent { alpha }, Cutoff::Auto, seq.creations()).unwrap();
        amplify(&seq, &psi).unwrap().0
    }

    fn pt(x: f64, y: f64) -> PhasePoint {
        PhasePoint::new(x, y).unwrap()
    }

    #[test]
    fn trivial_values() {
        let vac = FockVector::vacuum();
        assert!((wigner_numeric(&vac, pt(0.0, 0.0)).unwrap() - FRAC_2_PI).abs() < 1e-15);
        let one = FockVector::number(1, 1);
        assert!((wigner_numeric(&one, pt(0.0, 0.0)).unwrap() + FRAC_2_PI).abs() < 1e-15);
        let coh = make_state(&StateSpec::Coherent { alpha: 2.0 }, Cutoff::Auto).unwrap();
        assert!((wigner_numeric(&coh, pt(2.0, 0.0)).unwrap() - FRAC_2_PI).abs() < 1e-12);
        assert!((wigner_analytic(WignerFamily::Add1, 0.0, pt(0.0, 0.0)) + FRAC_2_PI).abs() < 1e-15);
    }

    #[test]
    fn number_state_profile() {
        // W_1(β) = (2/π)(4|β|² - 1)e^{-2|β|²}
        let one = FockVector::number(1, 1);
        for (x, y) in [(0.3, -0.2), (1.1, 0.7), (-2.0, 1.5)] {
            let r2: f64 = x * x + y * y;
            let expect = FRAC_2_PI * (4.0 * r2 - 1.0) * (-2.0 * r2).exp();
            assert!((wigner_numeric(&one, pt(x, y)).unwrap() - expect).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_forms_match_numeric_on_grid() {
        for family in WignerFamily::ALL {
            let psi = amplified(family, 2.0);
            let num = wigner_grid(&psi, (-1.0, 5.0), (-3.0, 3.0), 41, 41).unwrap();
            let ana = wigner_grid_analytic(family, 2.0, (-1.0, 5.0), (-3.0, 3.0), 41, 41).unwrap();
            let err = num.values.iter().zip(&ana.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-8, "{family:?}: {err:e}");
        }
    }

    #[test]
    fn bound_and_reflection() {
        for family in WignerFamily::ALL {
            let psi = amplified(family, 1.5);
            let g = wigner_grid(&psi, (-3.0, 5.0), (-3.0, 3.0), 33, 25).unwrap();
            for iy in 0..g.ys.len() {
                for ix in 0..g.xs.len() {
                    let w = g.at(ix, iy);
                    assert!(w.abs() <= FRAC_2_PI + 1e-14);
                    assert!((w - g.at(ix, g.ys.len() - 1 - iy)).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn vacuum_normalization() {
        let g = wigner_grid(&FockVector::vacuum(), (-3.0, 3.0), (-3.0, 3.0), 61, 61).unwrap();
        assert!((g.integral() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn peaks_and_negativity() {
        let coh = make_state(&StateSpec::Coherent { alpha: 2.0 }, Cutoff::Auto).unwrap();
        let g = wigner_grid(&coh, (-1.0, 5.0), (-3.0, 3.0), 41, 41).unwrap();
        let (x, y) = g.argmax();
        assert!((x - 2.0).abs() < 0.076 && y.abs() < 0.076);

        let add2 = wigner_grid(&amplified(WignerFamily::Add2, 2.0), (-1.0, 5.0), (-3.0, 3.0), 41, 41).unwrap();
        assert!(add2.min() < 0.0);
        let add_sub = wigner_grid(&amplified(WignerFamily::AddSub, 2.0), (-1.0, 5.0), (-3.0, 3.0), 41, 41).unwrap();
        assert!(add2.argmax().0 > add_sub.argmax().0);
    }

    #[test]
    fn cutoff_doubling_is_stable() {
        let spec = StateSpec::Coherent { alpha: 2.0 };
        let auto = make_state(&spec, Cutoff::Auto).unwrap();
        let doubled = make_state(&spec, Cutoff::Fixed(2 * auto.n_max())).unwrap();
        for (x, y) in [(0.0, 0.0), (2.0, 0.5), (4.5, -2.5), (-1.0, 3.0)] {
            let a = wigner_numeric(&auto, pt(x, y)).unwrap();
            let b = wigner_numeric(&doubled, pt(x, y)).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn large_displacement() {
        let psi = amplified(WignerFamily::AddSub, 3.0);
        for (x, y) in [(6.0, 0.0), (-3.0, 5.0)] {
            let w = wigner_numeric(&psi, pt(x, y)).unwrap();
            let a = wigner_analytic(WignerFamily::AddSub, 3.0, pt(x, y));
            assert!((w - a).abs() < 1e-10);
        }
    }
}
