//! Truncated number-basis representation of single-mode pure states.
//!
//! Every analytic formula in the crate is checked against the vectors built
//! here, so the constructors favour accuracy over speed: amplitudes come from
//! ratio recurrences (no factorials), and the cutoff is grown until the tail
//! mass is negligible.

use std::f64::consts::SQRT_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `Σ|c_n|² = 1` for a vector treated as normalized.
pub const NORM_TOL: f64 = 1e-12;
/// Bound on `|c_N|² + |c_{N-1}|²` for an adequately truncated vector.
pub const TAIL_TOL: f64 = 1e-14;
const UNDERFLOW: f64 = 1e-300;
const MAX_CUTOFF: usize = 1 << 17;

/// Photon-number parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn sign(self) -> f64 {
        match self {
            Parity::Even => 1.0,
            Parity::Odd => -1.0,
        }
    }

    pub fn of(n: usize) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "even" | "+" => Ok(Parity::Even),
            "odd" | "-" => Ok(Parity::Odd),
            _ => Err(Error::InvalidParameter(format!("unknown parity {s:?}"))),
        }
    }
}

/// Declarative description of an input state. Amplitudes are real.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateSpec {
    Coherent { alpha: f64 },
    ScsEven { alpha: f64 },
    ScsOdd { alpha: f64 },
    /// `S(r)|0⟩` with the `(-tanh r)^n` series convention.
    SqueezedVacuum { r: f64 },
    /// `S(r)|1⟩` with the `(-tanh r)^n` series convention.
    SqueezedOne { r: f64 },
    Number { n: usize },
}

impl StateSpec {
    pub fn scs(parity: Parity, alpha: f64) -> StateSpec {
        match parity {
            Parity::Even => StateSpec::ScsEven { alpha },
            Parity::Odd => StateSpec::ScsOdd { alpha },
        }
    }

    pub fn squeezed(parity: Parity, r: f64) -> StateSpec {
        match parity {
            Parity::Even => StateSpec::SqueezedVacuum { r },
            Parity::Odd => StateSpec::SqueezedOne { r },
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            StateSpec::Coherent { alpha } | StateSpec::ScsEven { alpha } => finite("alpha", alpha),
            StateSpec::ScsOdd { alpha } => {
                finite("alpha", alpha)?;
                if alpha == 0.0 {
                    return Err(Error::OddScsAtZero);
                }
                Ok(())
            }
            StateSpec::SqueezedVacuum { r } | StateSpec::SqueezedOne { r } => finite("r", r),
            StateSpec::Number { .. } => Ok(()),
        }
    }

    /// Photon-number parity, if the state has a definite one.
    pub fn parity(&self) -> Option<Parity> {
        match *self {
            StateSpec::Coherent { alpha: 0.0 } => Some(Parity::Even),
            StateSpec::Coherent { .. } => None,
            StateSpec::ScsEven { .. } | StateSpec::SqueezedVacuum { .. } => Some(Parity::Even),
            StateSpec::ScsOdd { .. } | StateSpec::SqueezedOne { .. } => Some(Parity::Odd),
            StateSpec::Number { n } => Some(Parity::of(n)),
        }
    }

    /// Coherent amplitude, or zero for squeezed and number states.
    pub fn alpha(&self) -> f64 {
        match *self {
            StateSpec::Coherent { alpha }
            | StateSpec::ScsEven { alpha }
            | StateSpec::ScsOdd { alpha } => alpha,
            _ => 0.0,
        }
    }

    /// Analytic mean photon number.
    pub fn mean_photons(&self) -> f64 {
        match *self {
            StateSpec::Coherent { alpha } => alpha * alpha,
            StateSpec::ScsEven { alpha } => {
                let a2 = alpha * alpha;
                a2 * a2.tanh()
            }
            StateSpec::ScsOdd { alpha } => {
                let a2 = alpha * alpha;
                if a2 < 1e-8 {
                    1.0 + a2 * a2 / 3.0
                } else {
                    a2 / a2.tanh()
                }
            }
            StateSpec::SqueezedVacuum { r } => r.sinh().powi(2),
            StateSpec::SqueezedOne { r } => 1.0 + 3.0 * r.sinh().powi(2),
            StateSpec::Number { n } => n as f64,
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            StateSpec::Coherent { alpha } => write!(f, "coherent:{alpha}"),
            StateSpec::ScsEven { alpha } => write!(f, "scs-even:{alpha}"),
            StateSpec::ScsOdd { alpha } => write!(f, "scs-odd:{alpha}"),
            StateSpec::SqueezedVacuum { r } => write!(f, "squeezed-vacuum:{r}"),
            StateSpec::SqueezedOne { r } => write!(f, "squeezed-one:{r}"),
            StateSpec::Number { n } => write!(f, "number:{n}"),
        }
    }
}

impl std::str::FromStr for StateSpec {
    type Err = Error;

    /// Parses `kind:value`, e.g. `coherent:2`, `scs-odd:1.5`, `number:3`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("cannot parse state {s:?}"));
        let (kind, value) = s.split_once(':').ok_or_else(bad)?;
        let x = || value.trim().parse::<f64>().map_err(|_| bad());
        let spec = match kind.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "coherent" => StateSpec::Coherent { alpha: x()? },
            "scs-even" | "even" => StateSpec::ScsEven { alpha: x()? },
            "scs-odd" | "odd" => StateSpec::ScsOdd { alpha: x()? },
            "squeezed-vacuum" => StateSpec::SqueezedVacuum { r: x()? },
            "squeezed-one" => StateSpec::SqueezedOne { r: x()? },
            "number" => StateSpec::Number {
                n: value.trim().parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

fn finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {x}")))
    }
}

/// Fock truncation policy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Cutoff {
    #[default]
    Auto,
    Fixed(usize),
}

impl std::str::FromStr for Cutoff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Cutoff::Auto);
        }
        s.parse()
            .map(Cutoff::Fixed)
            .map_err(|_| Error::InvalidParameter(format!("cutoff must be 'auto' or an integer, got {s:?}")))
    }
}

/// Starting cutoff of the AUTO rule for a state of mean photon number `mean`.
pub fn auto_cutoff(mean: f64) -> usize {
    (mean + 12.0 * (mean + 1.0).sqrt() + 20.0).ceil() as usize
}

/// Complex amplitudes `c_0..c_N` of a pure state in the number basis.
#[derive(Debug, Clone, PartialEq)]
pub struct FockVector {
    amps: Vec<Complex64>,
}

impl FockVector {
    pub fn from_amplitudes(mut amps: Vec<Complex64>) -> Self {
        if amps.is_empty() {
            amps.push(Complex64::new(0.0, 0.0));
        }
        for c in amps.iter_mut() {
            if c.re.abs() < UNDERFLOW {
                c.re = 0.0;
            }
            if c.im.abs() < UNDERFLOW {
                c.im = 0.0;
            }
        }
        FockVector { amps }
    }

    pub fn from_real(amps: impl IntoIterator<Item = f64>) -> Self {
        Self::from_amplitudes(amps.into_iter().map(|x| Complex64::new(x, 0.0)).collect())
    }

    /// `|n⟩` stored with cutoff `n_max >= n`.
    pub fn number(n: usize, n_max: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); n_max.max(n) + 1];
        amps[n] = Complex64::new(1.0, 0.0);
        FockVector { amps }
    }

    pub fn vacuum() -> Self {
        Self::number(0, 0)
    }

    pub fn n_max(&self) -> usize {
        self.amps.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude `c_n`, zero beyond the cutoff.
    pub fn amp(&self, n: usize) -> Complex64 {
        self.amps.get(n).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub fn require_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::NotNormalized { norm_sqr: self.norm_sqr() })
        }
    }

    /// `|c_N|² + |c_{N-1}|²`.
    pub fn tail_mass(&self) -> f64 {
        self.amps.iter().rev().take(2).map(|c| c.norm_sqr()).sum()
    }

    /// Unit vector along `self` and the factor `1/‖self‖` that produced it.
    pub fn normalized(&self) -> Result<(FockVector, f64)> {
        let norm = self.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / norm;
        Ok((self.scaled(inv), inv))
    }

    pub fn scaled(&self, factor: f64) -> FockVector {
        FockVector::from_amplitudes(self.amps.iter().map(|c| c * factor).collect())
    }

    /// Zero-padded or truncated copy with the given cutoff.
    pub fn resized(&self, n_max: usize) -> FockVector {
        let mut amps = self.amps.clone();
        amps.resize(n_max + 1, Complex64::new(0.0, 0.0));
        FockVector { amps }
    }

    /// Largest difference `|c_n - d_n|` over the zero-padded union of supports.
    pub fn max_abs_diff(&self, other: &FockVector) -> f64 {
        let len = self.amps.len().max(other.amps.len());
        (0..len)
            .map(|n| (self.amp(n) - other.amp(n)).norm())
            .fold(0.0, f64::max)
    }

    /// Total squared weight on components of the given parity.
    pub fn parity_weight(&self, parity: Parity) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(n, _)| Parity::of(*n) == parity)
            .map(|(_, c)| c.norm_sqr())
            .sum()
    }
}

/// Builds a normalized state for `spec`.
pub fn make_state(spec: &StateSpec, cutoff: Cutoff) -> Result<FockVector> {
    make_state_with_headroom(spec, cutoff, 0)
}

/// As [`make_state`], but under [`Cutoff::Auto`] the truncation is also made
/// safe for `creations` subsequent applications of the creation operator.
pub fn make_state_with_headroom(spec: &StateSpec, cutoff: Cutoff, creations: usize) -> Result<FockVector> {
    spec.validate()?;
    match cutoff {
        Cutoff::Fixed(n_max) => {
            let psi = build(spec, n_max)?;
            let tail = psi.tail_mass();
            if tail >= TAIL_TOL {
                return Err(Error::CutoffTooSmall { n_max, tail });
            }
            Ok(psi)
        }
        Cutoff::Auto => {
            let mut n_max = auto_cutoff(spec.mean_photons()) + creations;
            if let StateSpec::Number { n } = *spec {
                n_max = n_max.max(n + 2);
            }
            loop {
                let psi = build(spec, n_max)?;
                let tail = psi.tail_mass();
                let growth: f64 = (1..=creations).map(|j| (n_max + j) as f64).product();
                if tail * growth < TAIL_TOL {
                    return Ok(psi);
                }
                if n_max >= MAX_CUTOFF {
                    return Err(Error::CutoffTooSmall { n_max, tail });
                }
                n_max = (2 * n_max).min(MAX_CUTOFF);
            }
        }
    }
}

fn build(spec: &StateSpec, n_max: usize) -> Result<FockVector> {
    let mut amps = vec![0.0; n_max + 1];
    match *spec {
        StateSpec::Coherent { alpha } => coherent_into(&mut amps, alpha),
        StateSpec::ScsEven { alpha } => {
            coherent_into(&mut amps, alpha);
            project_parity(&mut amps, Parity::Even);
            // (|α⟩+|-α⟩)/√(2(1+e^{-2α²})) keeps the even terms with weight 2/√(...)
            let scale = 2.0 / (2.0 * (1.0 + (-2.0 * alpha * alpha).exp())).sqrt();
            amps.iter_mut().for_each(|c| *c *= scale);
        }
        StateSpec::ScsOdd { alpha } => {
            coherent_into(&mut amps, alpha);
            project_parity(&mut amps, Parity::Odd);
            let scale = 2.0 / (-2.0 * (-2.0 * alpha * alpha).exp_m1()).sqrt();
            amps.iter_mut().for_each(|c| *c *= scale);
        }
        StateSpec::SqueezedVacuum { r } => {
            let t = -r.tanh();
            amps[0] = 1.0 / r.cosh().sqrt();
            let mut n = 1;
            while 2 * n <= n_max {
                let k = n as f64;
                amps[2 * n] = amps[2 * n - 2] * t * ((2.0 * k - 1.0) / (2.0 * k)).sqrt();
                n += 1;
            }
        }
        StateSpec::SqueezedOne { r } => {
            if n_max < 1 {
                return Err(Error::CutoffTooSmall { n_max, tail: 1.0 });
            }
            let t = -r.tanh();
            amps[1] = r.cosh().powf(-1.5);
            let mut n = 1;
            while 2 * n < n_max {
                let k = n as f64;
                amps[2 * n + 1] = amps[2 * n - 1] * t * ((2.0 * k + 1.0) / (2.0 * k)).sqrt();
                n += 1;
            }
        }
        StateSpec::Number { n } => {
            if n > n_max {
                return Err(Error::CutoffTooSmall { n_max, tail: 1.0 });
            }
            amps[n] = 1.0;
        }
    }
    let psi = FockVector::from_real(amps);
    // absorb the truncated tail into the normalization
    let (psi, _) = psi.normalized()?;
    Ok(psi)
}

/// `c_n = e^{-α²/2} αⁿ/√(n!)` by the ratio recurrence `c_n = c_{n-1} α/√n`.
fn coherent_into(amps: &mut [f64], alpha: f64) {
    // log-space so e^{-α²/2} cannot underflow the whole vector at large α
    let ln_a = alpha.abs().ln();
    let mut log_c = -0.5 * alpha * alpha;
    amps[0] = log_c.exp();
    for n in 1..amps.len() {
        log_c += ln_a - 0.5 * (n as f64).ln();
        let c = log_c.exp();
        let c = if c < UNDERFLOW { 0.0 } else { c };
        amps[n] = if alpha < 0.0 && n % 2 == 1 { -c } else { c };
    }
}

fn project_parity(amps: &mut [f64], keep: Parity) {
    for (n, c) in amps.iter_mut().enumerate() {
        if Parity::of(n) != keep {
            *c = 0.0;
        }
    }
}

/// `a†|ψ⟩`, unnormalized; the cutoff grows by one so the shift is exact.
pub fn apply_create(psi: &FockVector) -> FockVector {
    let mut out = vec![Complex64::new(0.0, 0.0); psi.amps.len() + 1];
    for (n, c) in psi.amps.iter().enumerate() {
        out[n + 1] = c * ((n + 1) as f64).sqrt();
    }
    FockVector::from_amplitudes(out)
}

/// `a|ψ⟩`, unnormalized; `a|0⟩` is the zero vector.
pub fn apply_annihilate(psi: &FockVector) -> FockVector {
    let mut out = vec![Complex64::new(0.0, 0.0); psi.amps.len()];
    for n in 1..psi.amps.len() {
        out[n - 1] = psi.amps[n] * (n as f64).sqrt();
    }
    FockVector::from_amplitudes(out)
}

/// `⟨ψ|φ⟩`, conjugate-linear in `psi`; the shorter vector is zero-padded.
pub fn inner(psi: &FockVector, phi: &FockVector) -> Complex64 {
    psi.amps
        .iter()
        .zip(phi.amps.iter())
        .map(|(a, b)| a.conj() * b)
        .sum()
}

/// Mean photon number and photon-number variance of a normalized state.
pub fn photon_moments(psi: &FockVector) -> Result<(f64, f64)> {
    psi.require_normalized()?;
    Ok(photon_moments_unchecked(psi))
}

pub(crate) fn photon_moments_unchecked(psi: &FockVector) -> (f64, f64) {
    let probs = psi.amps.iter().map(|c| c.norm_sqr());
    let mean: f64 = probs.clone().enumerate().map(|(n, p)| n as f64 * p).sum();
    let var = probs
        .enumerate()
        .map(|(n, p)| (n as f64 - mean).powi(2) * p)
        .sum();
    (mean, var)
}

/// `⟨a⟩`, `⟨a²⟩` and `⟨a†a⟩`.
pub(crate) fn ladder_expectations(psi: &FockVector) -> (Complex64, Complex64, f64) {
    let c = &psi.amps;
    let mut a1 = Complex64::new(0.0, 0.0);
    let mut a2 = Complex64::new(0.0, 0.0);
    let mut n_mean = 0.0;
    for n in 0..c.len() {
        let nf = n as f64;
        n_mean += nf * c[n].norm_sqr();
        if n >= 1 {
            a1 += c[n - 1].conj() * c[n] * nf.sqrt();
        }
        if n >= 2 {
            a2 += c[n - 2].conj() * c[n] * (nf * (nf - 1.0)).sqrt();
        }
    }
    (a1, a2, n_mean)
}

/// Mean and variance of `x_λ = (a e^{-iλ} + a† e^{iλ})/√2`; the vacuum variance is 1/2.
pub fn quadrature_moments(psi: &FockVector, lambda: f64) -> Result<(f64, f64)> {
    psi.require_normalized()?;
    let (a1, a2, n_mean) = ladder_expectations(psi);
    let phase = Complex64::from_polar(1.0, -lambda);
    let mean = SQRT_2 * (phase * a1).re;
    // Var = Re(e^{-2iλ}(⟨a²⟩-⟨a⟩²)) + ⟨n⟩ - |⟨a⟩|² + 1/2
    let var = (phase * phase * (a2 - a1 * a1)).re + (n_mean - a1.norm_sqr()) + 0.5;
    Ok((mean, var))
}
