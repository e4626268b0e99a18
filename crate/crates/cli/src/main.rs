use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sequam::figures::{self, CsvTable, Fig2Preset, SweepConfig, SweepParameter};
use sequam::instruments::{from_measuring_process, induced_povm, luders, Instrument};
use sequam::quantum::{random_mixed_state, DensityMatrix, Povm};
use sequam::uncertainty::full_report_labeled;
use sequam::verify::{run_verify, VerifyConfig};
use sequam::{io, Error};

const EXIT_PARSE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;
const EXIT_DIMENSION: u8 = 4;
const EXIT_INEQUALITY: u8 = 5;
const EXIT_INTERNAL: u8 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "sequam",
    version,
    about = "Entropic uncertainty bounds for successive quantum measurements"
)]
struct Cli {
    /// Worker threads for sweeps and verification (results do not depend on it).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// D1 and c versus the angle θ between the two spin axes.
    Fig2(Fig2Args),
    /// Device uncertainties of Z and the disturbed X′ versus s.
    Fig3(Fig3Args),
    /// Full bound report for user-supplied observables.
    Report(ReportArgs),
    /// Randomized check of every inequality chain.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PresetArg {
    A,
    B,
    C,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write to FILE instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit a JSON array of records instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
struct Fig2Args {
    #[arg(long, value_enum, conflicts_with_all = ["s", "t"])]
    preset: Option<PresetArg>,
    /// Unsharpness of the first (Z) measurement.
    #[arg(long, requires = "t")]
    s: Option<f64>,
    /// Unsharpness of the second (X) measurement.
    #[arg(long, requires = "s")]
    t: Option<f64>,
    #[arg(long, default_value_t = 181)]
    points: usize,
    #[arg(long, default_value_t = 0.0)]
    start: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
    stop: f64,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct Fig3Args {
    #[arg(long, default_value_t = 101)]
    points: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Clone, Debug)]
enum InstrumentArg {
    Luders,
    Process(PathBuf),
}

impl FromStr for InstrumentArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once('=') {
            None if s == "luders" => Ok(InstrumentArg::Luders),
            Some(("process", path)) if !path.is_empty() => Ok(InstrumentArg::Process(path.into())),
            _ => Err(format!("expected `luders` or `process=FILE`, got `{s}`")),
        }
    }
}

#[derive(Clone, Debug)]
enum StateArg {
    Mixed,
    File(PathBuf),
    Random(u64),
}

impl FromStr for StateArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once('=') {
            None if s == "mixed" => Ok(StateArg::Mixed),
            Some(("file", path)) if !path.is_empty() => Ok(StateArg::File(path.into())),
            Some(("random", seed)) => seed
                .parse()
                .map(StateArg::Random)
                .map_err(|e| format!("bad seed `{seed}`: {e}")),
            _ => Err(format!("expected `mixed`, `file=F` or `random=SEED`, got `{s}`")),
        }
    }
}

#[derive(Args, Debug)]
struct ReportArgs {
    /// POVM file for the first measurement.
    #[arg(long)]
    a: PathBuf,
    /// POVM file for the second measurement.
    #[arg(long)]
    b: PathBuf,
    #[arg(long, default_value = "luders")]
    instrument: InstrumentArg,
    #[arg(long, default_value = "mixed")]
    state: StateArg,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..=4))]
    dim: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Print the summary as JSON.
    #[arg(long)]
    json: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) | Error::Shape(_) | Error::InvalidArgument(_) | Error::InvalidSweep(_) => {
                EXIT_PARSE
            }
            Error::DimensionMismatch { .. } => EXIT_DIMENSION,
            Error::CrossCheck { .. } => EXIT_INTERNAL,
            _ => EXIT_VALIDATION,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("cannot read {}: {e}", path.display()),
    })
}

fn load_povm(path: &Path) -> Result<Povm, Failure> {
    io::parse_povm(&read(path)?).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })
}

fn emit(output: &OutputArgs, table: &CsvTable) -> Result<(), Failure> {
    let text = if output.json {
        let mut s = serde_json::to_string_pretty(&table.to_json()).expect("table serializes");
        s.push('\n');
        s
    } else {
        table.to_csv()
    };
    match &output.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure {
            code: EXIT_INTERNAL,
            message: format!("cannot write {}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_fig2(args: &Fig2Args) -> Result<(), Failure> {
    let (s, t) = match (args.preset, args.s, args.t) {
        (_, Some(s), Some(t)) => (s, t),
        (Some(PresetArg::B), _, _) => Fig2Preset::B.params(),
        (Some(PresetArg::C), _, _) => Fig2Preset::C.params(),
        _ => Fig2Preset::A.params(),
    };
    let sweep = SweepConfig::new(SweepParameter::Theta, args.start, args.stop, args.points)?
        .with_fixed("s", s)
        .with_fixed("t", t);
    emit(&args.output, &figures::fig2(s, t, &sweep)?)
}

fn cmd_fig3(args: &Fig3Args) -> Result<(), Failure> {
    let sweep = SweepConfig::new(SweepParameter::S, 0.0, 1.0, args.points)?;
    emit(&args.output, &figures::fig3(&sweep)?)
}

fn cmd_report(args: &ReportArgs) -> Result<(), Failure> {
    let a = load_povm(&args.a)?;
    let b = load_povm(&args.b)?;
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        }
        .into());
    }
    let ins: Instrument = match &args.instrument {
        InstrumentArg::Luders => luders(&a)?,
        InstrumentArg::Process(path) => {
            let mp = io::parse_process(&read(path)?)?;
            let ins = from_measuring_process(&mp)?;
            if ins.dim() != a.dim() {
                return Err(Error::DimensionMismatch {
                    expected: a.dim(),
                    found: ins.dim(),
                }
                .into());
            }
            let induced = induced_povm(&ins);
            if induced.len() != a.len() || induced.max_element_diff(&a) > 1e-9 {
                return Err(Failure {
                    code: EXIT_VALIDATION,
                    message: "measuring process does not induce the first POVM".into(),
                });
            }
            ins
        }
    };
    let (rho, label): (DensityMatrix, String) = match &args.state {
        StateArg::Mixed => (DensityMatrix::maximally_mixed(a.dim()), "maximally-mixed".into()),
        StateArg::Random(seed) => (random_mixed_state(a.dim(), *seed), format!("random:{seed}")),
        StateArg::File(path) => (io::parse_state(&read(path)?)?, format!("file:{}", path.display())),
    };
    if rho.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: rho.dim(),
        }
        .into());
    }
    let report = full_report_labeled(&ins, &b, &rho, &label)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    if report.is_consistent() {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_INEQUALITY,
            message: report.violations.join("\n"),
        })
    }
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), Failure> {
    let cfg = VerifyConfig::new(args.trials as usize, args.dim as usize, args.seed)?;
    let summary = run_verify(&cfg)?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&summary).expect("summary serializes")
        );
    } else {
        println!("{summary}");
    }
    if summary.passed {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_INEQUALITY,
            message: "inequality violated beyond tolerance".into(),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("sequam: cannot configure {n} threads: {e}");
            return ExitCode::from(EXIT_INTERNAL);
        }
    }
    let result = match &cli.command {
        Command::Fig2(args) => cmd_fig2(args),
        Command::Fig3(args) => cmd_fig3(args),
        Command::Report(args) => cmd_report(args),
        Command::Verify(args) => cmd_verify(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("sequam: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
