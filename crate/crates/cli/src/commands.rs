use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Value};

use nlamp::amplifier::{amplify, success_probability, HeraldParams, OperatorSeq, PhotonMeanModel};
use nlamp::crossover::{Crossover, CrossoverReport};
use nlamp::fock::{make_state, make_state_with_headroom, photon_moments, quadrature_moments, Cutoff, FockVector, Parity, StateSpec};
use nlamp::metrics::{fisher, sweep};
use nlamp::scs::{amplified_scs, scs_sweep};
use nlamp::squeezed::{amplified_squeezed, squeezed_sweep};
use nlamp::verify::{self, Status};
use nlamp::wigner::wigner_grid;
use nlamp::Result;

use crate::output::{json_document, number, Cell, Format, Header, Table};

/// Output text and whether the command should report failure (verify only).
pub struct Rendered {
    pub text: String,
    pub failed: bool,
}

impl From<String> for Rendered {
    fn from(text: String) -> Self {
        Rendered { text, failed: false }
    }
}

/// `lo:hi:step`, or a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub step: f64,
}

impl Range {
    pub const fn new(lo: f64, hi: f64, step: f64) -> Self {
        Range { lo, hi, step }
    }

    pub fn values(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.lo + k as f64 * self.step).collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}"));
        let range = match parts.as_slice() {
            [x] => {
                let x = num(x)?;
                Range::new(x, x, 1.0)
            }
            [lo, hi, step] => Range::new(num(lo)?, num(hi)?, num(step)?),
            _ => return Err(format!("expected lo:hi:step, got {s:?}")),
        };
        if !(range.lo.is_finite() && range.hi.is_finite() && range.step.is_finite()) {
            return Err(format!("range must be finite, got {s:?}"));
        }
        if range.lo > range.hi {
            return Err(format!("range needs lo <= hi, got {s:?}"));
        }
        if !(range.step > 0.0) {
            return Err(format!("range needs step > 0, got {s:?}"));
        }
        Ok(range)
    }
}

impl std::fmt::Display for Range {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.lo, self.hi, self.step)
    }
}

/// `xlo:xhi:nx,ylo:yhi:ny`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub x: (f64, f64, usize),
    pub y: (f64, f64, usize),
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let axis = |t: &str| -> std::result::Result<(f64, f64, usize), String> {
            let p: Vec<&str> = t.split(':').collect();
            let [lo, hi, n] = p.as_slice() else {
                return Err(format!("expected lo:hi:n, got {t:?}"));
            };
            let lo: f64 = lo.trim().parse().map_err(|_| format!("not a number: {lo:?}"))?;
            let hi: f64 = hi.trim().parse().map_err(|_| format!("not a number: {hi:?}"))?;
            let n: usize = n.trim().parse().map_err(|_| format!("not a node count: {n:?}"))?;
            if !(lo.is_finite() && hi.is_finite() && lo < hi && n >= 2) {
                return Err(format!("axis needs finite lo < hi and n >= 2, got {t:?}"));
            }
            Ok((lo, hi, n))
        };
        let (x, y) = s.split_once(',').ok_or_else(|| format!("expected x-axis,y-axis, got {s:?}"))?;
        Ok(Grid { x: axis(x)?, y: axis(y)? })
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (xl, xh, nx) = self.x;
        let (yl, yh, ny) = self.y;
        write!(f, "{xl}:{xh}:{nx},{yl}:{yh}:{ny}")
    }
}

pub fn parse_seqs(names: &[String]) -> Result<Vec<OperatorSeq>> {
    names.iter().map(|n| OperatorSeq::from_name(n)).collect()
}

fn seq_names(seqs: &[OperatorSeq]) -> String {
    seqs.iter().map(|s| s.name()).collect::<Vec<_>>().join(",")
}

/// `label lo-hi` per label, in order of first appearance.
fn cutoff_spans(items: impl IntoIterator<Item = (String, usize)>) -> String {
    let mut spans: Vec<(String, usize, usize)> = Vec::new();
    for (label, n) in items {
        match spans.iter_mut().find(|s| s.0 == label) {
            Some(s) => {
                s.1 = s.1.min(n);
                s.2 = s.2.max(n);
            }
            None => spans.push((label, n, n)),
        }
    }
    spans
        .iter()
        .map(|(l, lo, hi)| if lo == hi { format!("{l} {lo}") } else { format!("{l} {lo}-{hi}") })
        .collect::<Vec<_>>()
        .join("; ")
}

pub fn cmd_sweep(seqs: &[OperatorSeq], alpha: &Range, preset: &str, format: Format) -> Result<Rendered> {
    let records = sweep(seqs, &alpha.values())?;
    let mut header = Header::new("sweep")
        .config("seq", seq_names(seqs))
        .config("alpha", alpha)
        .config("format", format.name())
        .config("preset", preset)
        .config("nmax", "auto");
    header.cutoffs = cutoff_spans(records.iter().map(|r| (r.seq.clone(), r.n_max)));
    let mut table = Table::new(&["seq", "alpha_i", "f_max", "alpha_f_opt", "gain", "ein_0", "ein_avg"]);
    for r in &records {
        table.push(vec![
            r.seq.as_str().into(),
            r.alpha_i.into(),
            r.f_max.into(),
            r.alpha_f_opt.into(),
            r.gain.into(),
            r.ein_0.into(),
            r.ein_avg.into(),
        ]);
    }
    Ok(table.render(&header, format).into())
}

pub fn cmd_scs_sweep(
    seqs: &[OperatorSeq],
    parities: &[Parity],
    alpha: &Range,
    preset: &str,
    format: Format,
) -> Result<Rendered> {
    let alphas = alpha.values();
    let mut rows = Vec::new();
    let mut cutoffs = Vec::new();
    for &parity in parities {
        for seq in seqs {
            rows.extend(scs_sweep(seq, parity, &alphas)?);
            for &a in &alphas {
                cutoffs.push((format!("{} {parity}", seq.name()), amplified_scs(seq, parity, a)?.n_max()));
            }
        }
    }
    rows.sort_by(|x, y| {
        x.parity
            .cmp(&y.parity)
            .then(x.seq.cmp(&y.seq))
            .then(x.alpha_i.total_cmp(&y.alpha_i))
    });
    let mut header = Header::new("scs-sweep")
        .config("seq", seq_names(seqs))
        .config("parity", parity_names(parities))
        .config("alpha", alpha)
        .config("format", format.name())
        .config("preset", preset)
        .config("nmax", "auto");
    header.cutoffs = cutoff_spans(cutoffs);
    let mut table = Table::new(&[
        "parity",
        "seq",
        "alpha_i",
        "f_max",
        "alpha_f_opt",
        "gain_scs",
        "dphi_amplified",
        "dphi_bare",
    ]);
    for r in &rows {
        table.push(vec![
            r.parity.name().into(),
            r.seq.as_str().into(),
            r.alpha_i.into(),
            r.f_max.into(),
            r.alpha_f_opt.into(),
            r.gain_scs.into(),
            r.dphi_amplified.into(),
            r.dphi_bare.into(),
        ]);
    }
    Ok(table.render(&header, format).into())
}

fn parity_names(parities: &[Parity]) -> String {
    parities.iter().map(|p| p.name()).collect::<Vec<_>>().join(",")
}

pub fn cmd_squeezed_fit(
    seqs: &[OperatorSeq],
    parities: &[Parity],
    alpha: &Range,
    preset: &str,
    format: Format,
) -> Result<Rendered> {
    let alphas = alpha.values();
    let mut rows = Vec::new();
    for &parity in parities {
        rows.extend(squeezed_sweep(seqs, parity, &alphas)?);
    }
    rows.sort_by(|x, y| {
        x.parity
            .cmp(&y.parity)
            .then(x.seq.cmp(&y.seq))
            .then(x.alpha_f.total_cmp(&y.alpha_f))
    });
    let cutoffs = rows
        .iter()
        .map(|r| {
            let seq = OperatorSeq::from_name(&r.seq)?;
            Ok((format!("{} {}", r.seq, r.parity), amplified_squeezed(&seq, r.parity, r.r_signed)?.n_max()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut header = Header::new("squeezed-fit")
        .config("seq", seq_names(seqs))
        .config("parity", parity_names(parities))
        .config("alpha", alpha)
        .config("format", format.name())
        .config("preset", preset)
        .config("nmax", "auto");
    header.cutoffs = cutoff_spans(cutoffs);
    let mut table = Table::new(&["parity", "seq", "alpha_f", "f_max", "r_opt", "r_signed", "squeezing_db"]);
    for r in &rows {
        table.push(vec![
            r.parity.name().into(),
            r.seq.as_str().into(),
            r.alpha_f.into(),
            r.f_max.into(),
            r.r_opt.into(),
            r.r_signed.into(),
            r.squeezing_db.into(),
        ]);
    }
    Ok(table.render(&header, format).into())
}

/// Crossovers selected by name; `ein-two-cycle` expands to both boundaries and
/// `all` to every named crossover.
pub fn crossover_selection(name: &str) -> Result<Vec<Crossover>> {
    match name.to_ascii_lowercase().as_str() {
        "all" => Ok(Crossover::ALL.to_vec()),
        "ein-two-cycle" => Ok(vec![Crossover::EinTwoCycleLow, Crossover::EinTwoCycleHigh]),
        _ => Ok(vec![name.parse()?]),
    }
}

pub fn cmd_crossover(name: &str, format: Format) -> Result<Rendered> {
    let selected = crossover_selection(name)?;
    let reports: Vec<CrossoverReport> = selected.par_iter().map(|c| c.compute()).collect::<Result<_>>()?;
    let mut header = Header::new("crossover")
        .config("name", name)
        .config("format", format.name())
        .config("nmax", "auto");
    header.cutoffs = "auto".into();
    let mut table = Table::new(&[
        "name",
        "quantity",
        "seq_a",
        "seq_b",
        "x",
        "lo",
        "hi",
        "tol_x",
        "width",
        "sign_changes",
    ]);
    for r in &reports {
        table.push(vec![
            r.name.as_str().into(),
            r.quantity.as_str().into(),
            r.seq_a.as_str().into(),
            r.seq_b.as_str().into(),
            r.x.into(),
            r.lo.into(),
            r.hi.into(),
            r.tol_x.into(),
            r.width.into(),
            r.sign_changes.into(),
        ]);
    }
    Ok(table.render(&header, format).into())
}

fn prepare(spec: &StateSpec, seq: Option<&OperatorSeq>, cutoff: Cutoff) -> Result<(FockVector, usize)> {
    let creations = seq.map_or(0, |s| s.creations());
    let psi = match cutoff {
        Cutoff::Auto => make_state_with_headroom(spec, Cutoff::Auto, creations)?,
        fixed => make_state(spec, fixed)?,
    };
    let input_nmax = psi.n_max();
    let out = match seq {
        Some(seq) => amplify(seq, &psi)?.0,
        None => psi,
    };
    Ok((out, input_nmax))
}

pub fn cmd_wigner(spec: &StateSpec, seq: Option<&OperatorSeq>, grid: &Grid, cutoff: Cutoff, format: Format) -> Result<Rendered> {
    let (psi, input_nmax) = prepare(spec, seq, cutoff)?;
    let (xl, xh, nx) = grid.x;
    let (yl, yh, ny) = grid.y;
    let w = wigner_grid(&psi, (xl, xh), (yl, yh), nx, ny)?;
    let mut header = Header::new("wigner")
        .config("state", spec)
        .config("seq", seq.map_or("Identity", |s| s.name()))
        .config("grid", grid)
        .config("format", format.name())
        .config("nmax", cutoff_name(cutoff));
    header.cutoffs = format!("input {input_nmax}; output {}", psi.n_max());
    match format {
        Format::Csv => {
            header.extra("x", format!("{} {} {nx}", g(xl), g(xh)));
            header.extra("y", format!("{} {} {ny}", g(yl), g(yh)));
            let mut text = header.comment_block();
            for iy in 0..ny {
                let row: Vec<String> = (0..nx).map(|ix| g(w.at(ix, iy))).collect();
                text.push_str(&row.join(" "));
                text.push('\n');
            }
            Ok(text.into())
        }
        Format::Json => {
            let values: Vec<Value> = (0..ny)
                .map(|iy| Value::Array((0..nx).map(|ix| number(w.at(ix, iy))).collect()))
                .collect();
            let body = json!({
                "x": [number(xl), number(xh), nx],
                "y": [number(yl), number(yh), ny],
                "values": values,
            });
            Ok(json_document(&header, "grid", body).into())
        }
    }
}

fn g(x: f64) -> String {
    crate::output::g12(x)
}

fn cutoff_name(c: Cutoff) -> String {
    match c {
        Cutoff::Auto => "auto".into(),
        Cutoff::Fixed(n) => n.to_string(),
    }
}

pub fn cmd_state(spec: &StateSpec, seq: Option<&OperatorSeq>, lambda: f64, cutoff: Cutoff, format: Format) -> Result<Rendered> {
    let (psi, input_nmax) = prepare(spec, seq, cutoff)?;
    let (mean, var) = photon_moments(&psi)?;
    let (q_mean, q_var) = quadrature_moments(&psi, lambda)?;
    let mut header = Header::new("state")
        .config("state", spec)
        .config("seq", seq.map_or("Identity", |s| s.name()))
        .config("lambda", lambda)
        .config("format", format.name())
        .config("nmax", cutoff_name(cutoff));
    header.cutoffs = format!("input {input_nmax}; output {}", psi.n_max());
    header.extra("norm_sqr", g(psi.norm_sqr()));
    header.extra("mean_photons", g(mean));
    header.extra("photon_variance", g(var));
    header.extra("quadrature_mean", g(q_mean));
    header.extra("quadrature_variance", g(q_var));
    header.extra("fisher", g(fisher(&psi)?));
    let mut table = Table::new(&["n", "re", "im", "prob"]);
    for (n, c) in psi.amplitudes().iter().enumerate() {
        table.push(vec![n.into(), c.re.into(), c.im.into(), c.norm_sqr().into()]);
    }
    Ok(table.render(&header, format).into())
}

pub fn cmd_prob(
    seqs: &[OperatorSeq],
    spec: &StateSpec,
    params: &HeraldParams,
    model: PhotonMeanModel,
    cutoff: Cutoff,
    format: Format,
) -> Result<Rendered> {
    let psi = make_state(spec, cutoff)?;
    let mut header = Header::new("prob")
        .config("seq", seq_names(seqs))
        .config("state", spec)
        .config("lambda_g", params.lambda_g)
        .config("reflectivity", params.reflectivity)
        .config("model", model_name(model))
        .config("format", format.name())
        .config("nmax", cutoff_name(cutoff));
    header.cutoffs = format!("input {}", psi.n_max());
    if params.warning() {
        header.extra("warning", "lambda_g > 0.3 or reflectivity > 0.2; first-order estimates are unreliable");
    }
    let mut table = Table::new(&["seq", "total", "step_ops", "step_probabilities", "diagnostic"]);
    for seq in seqs {
        let est = success_probability(seq, &psi, params, model)?;
        let ops: Vec<String> = est.per_step.iter().map(|s| format!("{:?}", s.op)).collect();
        let probs: Vec<String> = est.per_step.iter().map(|s| g(s.probability)).collect();
        table.push(vec![
            seq.name().into(),
            est.total.into(),
            ops.join(" ").into(),
            probs.join(" ").into(),
            est.diagnostic.unwrap_or_default().into(),
        ]);
    }
    Ok(table.render(&header, format).into())
}

pub fn model_name(m: PhotonMeanModel) -> &'static str {
    match m {
        PhotonMeanModel::Initial => "initial",
        PhotonMeanModel::Stepwise => "stepwise",
    }
}

pub fn cmd_verify(format: Format) -> Result<Rendered> {
    let report = verify::run();
    let mut header = Header::new("verify").config("format", format.name()).config("nmax", "auto");
    header.cutoffs = "auto".into();
    header.extra(
        "summary",
        format!(
            "{} PASS, {} WARN, {} FAIL",
            report.count(Status::Pass),
            report.count(Status::Warn),
            report.count(Status::Fail)
        ),
    );
    let mut table = Table::new(&["status", "name", "max_error", "tol", "detail"]);
    for c in &report.checks {
        table.push(vec![
            c.status.to_string().into(),
            c.name.as_str().into(),
            Cell::Num(c.max_error),
            c.tol.into(),
            c.detail.as_str().into(),
        ]);
    }
    Ok(Rendered {
        text: table.render(&header, format),
        failed: !report.passed(),
    })
}
