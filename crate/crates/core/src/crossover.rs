//! Named crossings between figure-of-merit curves of competing sequences.

use serde::Serialize;

use crate::amplifier::{Catalog, OperatorSeq};
use crate::error::{Error, Result};
use crate::fock::Parity;
use crate::metrics::{ein_avg, phase_uncertainty};
use crate::optimize::{find_crossing_with_scan, Bracket};
use crate::scs::amplified_scs;
use crate::squeezed::squeezed_fit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Crossover {
    /// Averaged EIN, `a a†` vs `a†²`.
    EinOneCycle,
    /// Averaged EIN, `(a a†)²` vs `a†² a a†`.
    EinTwoCycleLow,
    /// Averaged EIN, `a†² a a†` vs `a†⁴`.
    EinTwoCycleHigh,
    /// Phase uncertainty of amplified even cat states, `a a†` vs `a†²`.
    DphiEven,
    DphiOdd,
    /// Fitted squeezed-state fidelity, `a†²` vs no amplification.
    SqueezedEven,
    SqueezedOdd,
    /// Fitted squeezed-state fidelity, `a a†` vs `a†²`.
    SqueezedMethodEven,
    SqueezedMethodOdd,
}

impl Crossover {
    pub const ALL: [Crossover; 9] = [
        Crossover::EinOneCycle,
        Crossover::EinTwoCycleLow,
        Crossover::EinTwoCycleHigh,
        Crossover::DphiEven,
        Crossover::DphiOdd,
        Crossover::SqueezedEven,
        Crossover::SqueezedOdd,
        Crossover::SqueezedMethodEven,
        Crossover::SqueezedMethodOdd,
    ];
    pub const SQUEEZED: [Crossover; 4] = [
        Crossover::SqueezedEven,
        Crossover::SqueezedOdd,
        Crossover::SqueezedMethodEven,
        Crossover::SqueezedMethodOdd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Crossover::EinOneCycle => "ein-one-cycle",
            Crossover::EinTwoCycleLow => "ein-two-cycle-low",
            Crossover::EinTwoCycleHigh => "ein-two-cycle-high",
            Crossover::DphiEven => "dphi-even",
            Crossover::DphiOdd => "dphi-odd",
            Crossover::SqueezedEven => "squeezed-even",
            Crossover::SqueezedOdd => "squeezed-odd",
            Crossover::SqueezedMethodEven => "squeezed-method-even",
            Crossover::SqueezedMethodOdd => "squeezed-method-odd",
        }
    }

    /// The two sequences whose curves cross.
    pub fn sequences(self) -> (Catalog, Catalog) {
        match self {
            Crossover::EinOneCycle | Crossover::DphiEven | Crossover::DphiOdd => (Catalog::AddSub, Catalog::Add2),
            Crossover::SqueezedMethodEven | Crossover::SqueezedMethodOdd => (Catalog::AddSub, Catalog::Add2),
            Crossover::EinTwoCycleLow => (Catalog::AddSub2, Catalog::Add2AddSub),
            Crossover::EinTwoCycleHigh => (Catalog::Add2AddSub, Catalog::Add4),
            Crossover::SqueezedEven | Crossover::SqueezedOdd => (Catalog::Add2, Catalog::Identity),
        }
    }

    /// Curve compared, as a short label.
    pub fn quantity(self) -> &'static str {
        match self {
            Crossover::EinOneCycle | Crossover::EinTwoCycleLow | Crossover::EinTwoCycleHigh => "ein_avg",
            Crossover::DphiEven | Crossover::DphiOdd => "dphi",
            _ => "squeezed_f_max",
        }
    }

    /// Search interval and tolerance.
    pub fn bracket(self) -> Result<Bracket> {
        let (lo, hi, tol) = match self {
            Crossover::EinOneCycle => (0.5, 1.5, 1e-8),
            Crossover::EinTwoCycleLow => (0.3, 0.8, 1e-8),
            Crossover::EinTwoCycleHigh => (0.8, 1.4, 1e-8),
            Crossover::DphiEven => (0.3, 1.2, 1e-8),
            Crossover::DphiOdd => (0.8, 2.0, 1e-8),
            Crossover::SqueezedEven => (1.0, 2.0, 1e-6),
            Crossover::SqueezedOdd => (1.5, 2.6, 1e-6),
            Crossover::SqueezedMethodEven => (1.4, 2.2, 1e-6),
            Crossover::SqueezedMethodOdd => (1.9, 2.8, 1e-6),
        };
        Bracket::new(lo, hi)?.with_tol(tol)
    }

    fn curve(self, cat: Catalog, x: f64) -> f64 {
        let seq = cat.seq();
        let value = match self {
            Crossover::EinOneCycle | Crossover::EinTwoCycleLow | Crossover::EinTwoCycleHigh => ein_avg(&seq, x),
            Crossover::DphiEven => dphi_scs(&seq, Parity::Even, x),
            Crossover::DphiOdd => dphi_scs(&seq, Parity::Odd, x),
            Crossover::SqueezedEven | Crossover::SqueezedMethodEven => {
                squeezed_fit(&seq, Parity::Even, x).map(|r| r.f_max)
            }
            Crossover::SqueezedOdd | Crossover::SqueezedMethodOdd => squeezed_fit(&seq, Parity::Odd, x).map(|r| r.f_max),
        };
        value.unwrap_or(f64::NAN)
    }

    pub fn compute(self) -> Result<CrossoverReport> {
        let bracket = self.bracket()?;
        let (a, b) = self.sequences();
        let c = find_crossing_with_scan(|x| self.curve(a, x), |x| self.curve(b, x), &bracket, 8)?;
        Ok(CrossoverReport {
            name: self.name().to_string(),
            quantity: self.quantity().to_string(),
            seq_a: a.name().to_string(),
            seq_b: b.name().to_string(),
            x: c.x,
            sign_changes: c.sign_changes,
            lo: bracket.lo,
            hi: bracket.hi,
            tol_x: bracket.tol_x,
            width: c.width,
        })
    }
}

impl std::str::FromStr for Crossover {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Crossover::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown crossover {s:?}")))
    }
}

fn dphi_scs(seq: &OperatorSeq, parity: Parity, alpha_i: f64) -> Result<f64> {
    phase_uncertainty(&amplified_scs(seq, parity, alpha_i)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossoverReport {
    pub name: String,
    pub quantity: String,
    pub seq_a: String,
    pub seq_b: String,
    pub x: f64,
    pub sign_changes: usize,
    pub lo: f64,
    pub hi: f64,
    pub tol_x: f64,
    pub width: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for c in Crossover::ALL {
            assert_eq!(c.name().parse::<Crossover>().unwrap(), c);
        }
        assert!("nope".parse::<Crossover>().is_err());
    }

    #[test]
    fn one_cycle_ein_crossing() {
        let r = Crossover::EinOneCycle.compute().unwrap();
        assert!((r.x - 0.91).abs() < 0.02, "{r:?}");
        assert_eq!(r.sign_changes, 1);
        assert!(r.width < r.tol_x);
    }
}
