//! Derivative-free one-dimensional maximization and curve crossings.
//!
//! Both routines are deterministic: probe locations depend only on the
//! bracket, so identical inputs give bit-identical outputs.

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_TOL_X: f64 = 1e-8;
pub const DEFAULT_STARTS: usize = 8;
pub const DEFAULT_MAX_ITER: usize = 200;
/// Subintervals scanned for sign changes before bisecting.
pub const DEFAULT_SCAN: usize = 32;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
    pub tol_x: f64,
    pub max_iter: usize,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        Bracket {
            lo,
            hi,
            tol_x: DEFAULT_TOL_X,
            max_iter: DEFAULT_MAX_ITER,
        }
        .validated()
    }

    pub fn with_tol(self, tol_x: f64) -> Result<Self> {
        Bracket { tol_x, ..self }.validated()
    }

    pub fn with_max_iter(self, max_iter: usize) -> Result<Self> {
        Bracket { max_iter, ..self }.validated()
    }

    fn validated(self) -> Result<Self> {
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "bracket needs finite lo < hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if !(self.tol_x > 0.0) {
            return Err(Error::InvalidParameter(format!("tol_x must be positive, got {}", self.tol_x)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be at least 1".into()));
        }
        Ok(self)
    }

    fn probes(&self, count: usize) -> Vec<f64> {
        if count <= 1 {
            return vec![0.5 * (self.lo + self.hi)];
        }
        let step = (self.hi - self.lo) / (count - 1) as f64;
        (0..count)
            .map(|i| if i + 1 == count { self.hi } else { self.lo + step * i as f64 })
            .collect()
    }
}

fn eval<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::NonFinite { x })
    }
}

/// Maximizes `f` on the bracket: equispaced probes, then golden-section
/// refinement between the neighbours of the best probe.
///
/// Returns `(x_opt, f_opt)`. A flat objective returns the first probe.
pub fn maximize_scalar<F>(mut f: F, bracket: &Bracket, n_starts: usize) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> f64,
{
    let xs = bracket.probes(n_starts.max(1));
    let mut best = 0;
    let mut values = Vec::with_capacity(xs.len());
    for (i, &x) in xs.iter().enumerate() {
        let y = eval(&mut f, x)?;
        if y > values.get(best).copied().unwrap_or(f64::NEG_INFINITY) {
            best = i;
        }
        values.push(y);
    }
    let (x_best, y_best) = (xs[best], values[best]);
    let (mut a, mut b) = if xs.len() == 1 {
        (bracket.lo, bracket.hi)
    } else {
        (xs[best.saturating_sub(1)], xs[(best + 1).min(xs.len() - 1)])
    };

    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(&mut f, c)?;
    let mut fd = eval(&mut f, d)?;
    let mut iter = 0;
    while (b - a) > bracket.tol_x && iter < bracket.max_iter {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(&mut f, c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(&mut f, d)?;
        }
        iter += 1;
    }
    let (x_ref, y_ref) = if fc >= fd { (c, fc) } else { (d, fd) };
    if y_ref > y_best {
        Ok((x_ref, y_ref))
    } else {
        Ok((x_best, y_best))
    }
}

/// Root of `f - g` located by bisection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub x: f64,
    /// Sign changes of `f - g` seen on the scan grid.
    pub sign_changes: usize,
    /// Width of the final bisection interval.
    pub width: f64,
    pub bracket: Bracket,
}

/// Smallest crossing of `f` and `g` on the bracket.
pub fn find_crossing<F, G>(f: F, g: G, bracket: &Bracket) -> Result<Crossing>
where
    F: FnMut(f64) -> f64,
    G: FnMut(f64) -> f64,
{
    find_crossing_with_scan(f, g, bracket, DEFAULT_SCAN)
}

pub fn find_crossing_with_scan<F, G>(mut f: F, mut g: G, bracket: &Bracket, scan: usize) -> Result<Crossing>
where
    F: FnMut(f64) -> f64,
    G: FnMut(f64) -> f64,
{
    let mut diff = |x: f64| -> Result<f64> {
        let y = f(x) - g(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::NonFinite { x })
        }
    };
    let xs = bracket.probes(scan.max(1) + 1);
    let ds = xs.iter().map(|&x| diff(x)).collect::<Result<Vec<_>>>()?;

    let mut first = None;
    let mut sign_changes = 0;
    for i in 0..xs.len() - 1 {
        let changes = ds[i] == 0.0 || (ds[i] < 0.0) != (ds[i + 1] < 0.0) && ds[i + 1] != 0.0;
        if changes {
            sign_changes += 1;
            first.get_or_insert(i);
        }
    }
    if ds[xs.len() - 1] == 0.0 {
        sign_changes += 1;
        first.get_or_insert(xs.len() - 1);
    }
    let i = first.ok_or(Error::NoSignChange {
        lo: bracket.lo,
        hi: bracket.hi,
    })?;
    if ds[i] == 0.0 {
        return Ok(Crossing {
            x: xs[i],
            sign_changes,
            width: 0.0,
            bracket: *bracket,
        });
    }

    let (mut a, mut b) = (xs[i], xs[i + 1]);
    let mut da = ds[i];
    let mut iter = 0;
    while (b - a) >= bracket.tol_x && iter < bracket.max_iter {
        let m = 0.5 * (a + b);
        let dm = diff(m)?;
        if dm == 0.0 {
            a = m;
            b = m;
            break;
        }
        if (dm < 0.0) == (da < 0.0) {
            a = m;
            da = dm;
        } else {
            b = m;
        }
        iter += 1;
    }
    Ok(Crossing {
        x: 0.5 * (a + b),
        sign_changes,
        width: b - a,
        bracket: *bracket,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola_maximum() {
        let br = Bracket::new(0.0, 5.0).unwrap();
        let (x, y) = maximize_scalar(|x| -(x - 2.0).powi(2), &br, DEFAULT_STARTS).unwrap();
        assert!((x - 2.0).abs() < br.tol_x, "{x}");
        assert!(y.abs() < 1e-15);
    }

    #[test]
    fn quartic_gaussian_maximum() {
        // f' = 0 at √2; a smooth maximum can only be located to ~√ε relative
        let br = Bracket::new(0.0, 5.0).unwrap().with_tol(1e-7).unwrap();
        let (x, _) = maximize_scalar(|x: f64| x.powi(4) * (-x * x).exp(), &br, DEFAULT_STARTS).unwrap();
        assert!((x - 2f64.sqrt()).abs() < br.tol_x, "{x}");
    }

    #[test]
    fn flat_objective_returns_first_probe() {
        let br = Bracket::new(-1.0, 3.0).unwrap();
        let (x, y) = maximize_scalar(|_| 0.25, &br, DEFAULT_STARTS).unwrap();
        assert_eq!((x, y), (-1.0, 0.25));
    }

    #[test]
    fn non_finite_objective() {
        let br = Bracket::new(0.0, 1.0).unwrap();
        let err = maximize_scalar(|x| if x > 0.5 { f64::NAN } else { x }, &br, 8).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn bracket_validation() {
        assert!(Bracket::new(1.0, 1.0).is_err());
        assert!(Bracket::new(0.0, 1.0).unwrap().with_tol(0.0).is_err());
        assert!(Bracket::new(0.0, 1.0).unwrap().with_max_iter(0).is_err());
    }

    #[test]
    fn simple_crossing() {
        let br = Bracket::new(0.0, 2.0).unwrap();
        let c = find_crossing(|x| x, |_| 1.0, &br).unwrap();
        assert!((c.x - 1.0).abs() < br.tol_x);
        assert_eq!(c.sign_changes, 1);
    }

    #[test]
    fn smallest_of_several_crossings() {
        let br = Bracket::new(0.1, 10.0).unwrap();
        let c = find_crossing(|x: f64| x.sin(), |_| 0.0, &br).unwrap();
        assert!((c.x - std::f64::consts::PI).abs() < 1e-8);
        assert_eq!(c.sign_changes, 3);
        assert!(c.width < br.tol_x);
    }

    #[test]
    fn no_sign_change() {
        let br = Bracket::new(0.0, 1.0).unwrap();
        assert_eq!(
            find_crossing(|x| x + 1.0, |_| 0.0, &br),
            Err(Error::NoSignChange { lo: 0.0, hi: 1.0 })
        );
    }
}
