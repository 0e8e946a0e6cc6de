//! `nlamp`: sweeps, crossovers, Wigner grids, state dumps and heralding
//! probabilities for photon-addition/subtraction amplifiers.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nlamp::amplifier::{HeraldParams, OperatorSeq, PhotonMeanModel};
use nlamp::fock::{Cutoff, Parity, StateSpec};

use commands::{Grid, Range, Rendered};
use output::Format;

const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(name = "nlamp", version, about = "Noiseless linear amplification by photon addition and subtraction")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fidelity, gain and EIN of amplified coherent states over an amplitude range.
    Sweep(SweepArgs),
    /// Fidelity, gain and phase uncertainty of amplified cat states.
    ScsSweep(CatArgs),
    /// Best squeezed-state approximation of cat states.
    SqueezedFit(CatArgs),
    /// Locate a named crossing of two figure-of-merit curves.
    Crossover(CrossoverArgs),
    /// Wigner function of an (amplified) state on a grid.
    Wigner(WignerArgs),
    /// Number-basis amplitudes and moments of an (amplified) state.
    State(StateArgs),
    /// First-order heralding success probability.
    Prob(ProbArgs),
    /// Compare every closed form with Fock-vector numerics.
    Verify(OutArgs),
}

#[derive(Args)]
struct OutArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    Fig1,
    Fig3,
    Fig4,
    Fig5,
}

impl Preset {
    fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig3 => "fig3",
            Preset::Fig4 => "fig4",
            Preset::Fig5 => "fig5",
        }
    }

    /// Sequences, parities and amplitude range of the preset.
    fn settings(self) -> (&'static [&'static str], &'static [Parity], Range) {
        const BOTH: &[Parity] = &[Parity::Even, Parity::Odd];
        match self {
            Preset::Fig1 => (&["AddSub", "Add2"], &[], Range::new(0.0, 3.0, 0.05)),
            Preset::Fig3 => (&["AddSub2", "Add4", "AddSubAdd2", "Add2AddSub"], &[], Range::new(0.0, 3.0, 0.05)),
            Preset::Fig4 => (&["AddSub", "Add2"], BOTH, Range::new(0.05, 3.0, 0.05)),
            Preset::Fig5 => (&["Identity", "AddSub", "Add2"], BOTH, Range::new(0.05, 3.5, 0.05)),
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
    Both,
}

impl ParityArg {
    fn parities(self) -> Vec<Parity> {
        match self {
            ParityArg::Even => vec![Parity::Even],
            ParityArg::Odd => vec![Parity::Odd],
            ParityArg::Both => vec![Parity::Even, Parity::Odd],
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    /// Comma-separated catalog names, e.g. AddSub,Add2.
    #[arg(long, value_delimiter = ',')]
    seq: Vec<String>,
    /// Amplitude range lo:hi:step.
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<Range>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct CatArgs {
    #[arg(long, value_delimiter = ',')]
    seq: Vec<String>,
    #[arg(long, value_enum)]
    parity: Option<ParityArg>,
    /// Amplitude range lo:hi:step (input amplitude, or target amplitude for squeezed-fit).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<Range>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct CrossoverArgs {
    /// ein-one-cycle, ein-two-cycle, ein-two-cycle-low, ein-two-cycle-high, dphi-even, dphi-odd,
    /// squeezed-even, squeezed-odd, squeezed-method-even, squeezed-method-odd, or all.
    name: String,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct WignerArgs {
    /// Input state kind:value, e.g. coherent:2, scs-odd:1.5, squeezed-vacuum:0.5, number:1.
    #[arg(long, default_value = "coherent:2", allow_hyphen_values = true)]
    state: String,
    /// Amplifying sequence applied to the state.
    #[arg(long)]
    seq: Option<String>,
    /// xlo:xhi:nx,ylo:yhi:ny
    #[arg(long, default_value = "-3:5:161,-4:4:161", allow_hyphen_values = true)]
    grid: Grid,
    /// Fock cutoff of the input state: auto or an integer.
    #[arg(long, default_value = "auto")]
    nmax: String,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Args)]
struct StateArgs {
    #[arg(long, default_value = "coherent:1", allow_hyphen_values = true)]
    state: String,
    #[arg(long)]
    seq: Option<String>,
    /// Quadrature phase for the reported quadrature moments.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    lambda: f64,
    #[arg(long, default_value = "auto")]
    nmax: String,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Initial,
    Stepwise,
}

#[derive(Args)]
struct ProbArgs {
    #[arg(long, value_delimiter = ',', default_value = "AddSub,Add2,AddSub2,Add4,AddSubAdd2,Add2AddSub")]
    seq: Vec<String>,
    #[arg(long, default_value = "coherent:2", allow_hyphen_values = true)]
    state: String,
    /// Parametric gain of the photon-addition stage.
    #[arg(long, default_value_t = 0.1)]
    lambda_g: f64,
    /// Beam-splitter reflectivity of the photon-subtraction stage.
    #[arg(long, default_value_t = 0.05)]
    reflectivity: f64,
    /// Mean photon number used per step: that of the input state, or of the current state.
    #[arg(long, value_enum, default_value = "initial")]
    model: ModelArg,
    #[arg(long, default_value = "auto")]
    nmax: String,
    #[command(flatten)]
    out: OutArgs,
}

enum Failure {
    Usage(String),
    Numerical(String),
}

impl From<nlamp::Error> for Failure {
    fn from(e: nlamp::Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

type Outcome = Result<Rendered, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Flag values with preset fallbacks; a command without either is a usage error.
fn resolve(
    command: &str,
    seq: &[String],
    alpha: &Option<Range>,
    preset: Option<Preset>,
    allowed: &[Preset],
) -> Result<(Vec<OperatorSeq>, Range, String, Vec<Parity>), Failure> {
    if let Some(p) = preset {
        if !allowed.contains(&p) {
            return Err(usage(format!("preset {} does not apply to {command}", p.name())));
        }
    }
    let settings = preset.map(Preset::settings);
    let names: Vec<String> = if seq.is_empty() {
        match settings {
            Some((s, _, _)) => s.iter().map(|n| n.to_string()).collect(),
            None => return Err(usage(format!("{command} needs --seq or --preset"))),
        }
    } else {
        seq.to_vec()
    };
    let range = match (alpha, &settings) {
        (Some(r), _) => r.clone(),
        (None, Some((_, _, r))) => r.clone(),
        (None, None) => return Err(usage(format!("{command} needs --alpha or --preset"))),
    };
    let parities = settings.map(|(_, p, _)| p.to_vec()).unwrap_or_default();
    let preset_name = preset.map_or("none", Preset::name).to_string();
    Ok((commands::parse_seqs(&names)?, range, preset_name, parities))
}

fn parse_state(s: &str) -> Result<StateSpec, Failure> {
    Ok(s.parse::<StateSpec>()?)
}

fn parse_cutoff(s: &str) -> Result<Cutoff, Failure> {
    Ok(s.parse::<Cutoff>()?)
}

fn parse_seq(s: &Option<String>) -> Result<Option<OperatorSeq>, Failure> {
    Ok(s.as_deref().map(OperatorSeq::from_name).transpose()?)
}

fn run(command: Command) -> (Outcome, Option<PathBuf>) {
    match command {
        Command::Sweep(a) => {
            let result = resolve("sweep", &a.seq, &a.alpha, a.preset, &[Preset::Fig1, Preset::Fig3]).and_then(
                |(seqs, range, preset, _)| {
                    Ok(commands::cmd_sweep(&seqs, &range, &preset, a.out.format.unwrap_or(Format::Csv))?)
                },
            );
            (result, a.out.out)
        }
        Command::ScsSweep(a) => (cat_command("scs-sweep", &a, Preset::Fig4), a.out.out),
        Command::SqueezedFit(a) => (cat_command("squeezed-fit", &a, Preset::Fig5), a.out.out),
        Command::Crossover(a) => {
            let result = commands::cmd_crossover(&a.name, a.out.format.unwrap_or(Format::Json)).map_err(Failure::from);
            (result, a.out.out)
        }
        Command::Wigner(a) => {
            let result = (|| {
                let spec = parse_state(&a.state)?;
                let seq = parse_seq(&a.seq)?;
                let cutoff = parse_cutoff(&a.nmax)?;
                Ok(commands::cmd_wigner(&spec, seq.as_ref(), &a.grid, cutoff, a.out.format.unwrap_or(Format::Csv))?)
            })();
            (result, a.out.out)
        }
        Command::State(a) => {
            let result = (|| {
                if !a.lambda.is_finite() {
                    return Err(usage("--lambda must be finite"));
                }
                let spec = parse_state(&a.state)?;
                let seq = parse_seq(&a.seq)?;
                let cutoff = parse_cutoff(&a.nmax)?;
                Ok(commands::cmd_state(&spec, seq.as_ref(), a.lambda, cutoff, a.out.format.unwrap_or(Format::Csv))?)
            })();
            (result, a.out.out)
        }
        Command::Prob(a) => {
            let result = (|| {
                let seqs = commands::parse_seqs(&a.seq)?;
                let spec = parse_state(&a.state)?;
                let params = HeraldParams::new(a.lambda_g, a.reflectivity)?;
                let cutoff = parse_cutoff(&a.nmax)?;
                let model = match a.model {
                    ModelArg::Initial => PhotonMeanModel::Initial,
                    ModelArg::Stepwise => PhotonMeanModel::Stepwise,
                };
                Ok(commands::cmd_prob(&seqs, &spec, &params, model, cutoff, a.out.format.unwrap_or(Format::Csv))?)
            })();
            (result, a.out.out)
        }
        Command::Verify(a) => {
            let result = commands::cmd_verify(a.format.unwrap_or(Format::Csv)).map_err(Failure::from);
            (result, a.out)
        }
    }
}

fn cat_command(name: &str, a: &CatArgs, preset: Preset) -> Outcome {
    let (seqs, range, preset_name, preset_parities) = resolve(name, &a.seq, &a.alpha, a.preset, &[preset])?;
    let parities = match (a.parity, preset_parities.is_empty()) {
        (Some(p), _) => p.parities(),
        (None, false) => preset_parities,
        (None, true) => return Err(usage(format!("{name} needs --parity or --preset"))),
    };
    let format = a.out.format.unwrap_or(Format::Csv);
    Ok(if name == "scs-sweep" {
        commands::cmd_scs_sweep(&seqs, &parities, &range, &preset_name, format)?
    } else {
        commands::cmd_squeezed_fit(&seqs, &parities, &range, &preset_name, format)?
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let (outcome, out) = run(cli.command);
    let rendered = match outcome {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            return ExitCode::from(EXIT_NUMERICAL);
        }
    };
    let written = match &out {
        Some(path) => std::fs::write(path, &rendered.text),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(rendered.text.as_bytes())
        }
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    if rendered.failed {
        eprintln!("verify: at least one check FAILED");
        return ExitCode::from(EXIT_VERIFY);
    }
    ExitCode::SUCCESS
}
