use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qcat::app::{self, Command, Input, Options};
use qcat::json::to_pretty;
use qcat::{Error, QuantaleId};

/// Exact computations with categories enriched in a quantale.
///
/// Exit status: 0 when every check passes or a result was produced, 1 when the
/// mathematical answer is negative (the report carries a witness), 2 on bad
/// input.
#[derive(Debug, Parser)]
#[command(name = "qcat", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args)]
struct Global {
    /// Emit the JSON report (default).
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    /// Emit a human-readable report.
    #[arg(long, global = true)]
    text: bool,
    /// Accept decimal literals such as 0.25, read as exact rationals.
    #[arg(long, global = true)]
    allow_float: bool,
    /// Allow the floating-point morphisms E and L.
    #[arg(long, global = true)]
    inexact: bool,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Check that documents are well formed and satisfy their laws.
    Validate {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Close a matrix into the least category above it.
    Close { file: PathBuf },
    /// Dual category a°(x,y) = a(y,x).
    Dual { file: PathBuf },
    /// Underlying preorder of a category.
    Order { file: PathBuf },
    /// Cartesian product of two categories.
    Product { a: PathBuf, b: PathBuf },
    /// Tensor product of two categories.
    Tensor { a: PathBuf, b: PathBuf },
    /// Composite psi . phi of modules phi: X -> Y and psi: Y -> Z.
    Compose { phi: PathBuf, psi: PathBuf },
    /// Extension of psi: X -> Z along phi: X -> Y.
    Ext { psi: PathBuf, phi: PathBuf },
    /// Lifting of phi: X -> Y through psi: Z -> Y.
    Lift { phi: PathBuf, psi: PathBuf },
    /// Graph modules f_* and f^* of a functor.
    Graph { functor: PathBuf },
    /// Decide whether phi is left adjoint to psi.
    AdjointCheck { phi: PathBuf, psi: PathBuf },
    /// Yoneda image a(-,x) of an object.
    Yoneda { category: PathBuf, object: String },
    /// Distance [psi, psi'] between two presheaves.
    PresheafDist { psi: PathBuf, psi2: PathBuf },
    /// Decide whether a presheaf has a left adjoint.
    RightAdjoint { psi: PathBuf },
    /// Find an object representing a presheaf.
    Representable { psi: PathBuf },
    /// Cauchy completeness: exhaustive over bool2, otherwise over candidates.
    CompleteCheck {
        category: PathBuf,
        candidates: Vec<PathBuf>,
    },
    /// Cauchy measure of an eventually periodic sequence.
    CauchyMeasure { sequence: PathBuf },
    /// Limits of an eventually periodic sequence.
    SeqConverges {
        sequence: PathBuf,
        object: Option<String>,
    },
    /// Apply a quantale morphism (I, O, P, E, L, I_inf, O_inf, P_inf).
    BaseChange {
        morphism: String,
        file: PathBuf,
        /// Target quantale of I.
        #[arg(long)]
        to: Option<QuantaleId>,
    },
    /// Test the exponentiability inequality on a generated family.
    ExpCheck {
        file: PathBuf,
        /// Closure rounds when generating the test family.
        #[arg(long, env = "QCAT_DEPTH", default_value_t = qcat::expinj::DEFAULT_DEPTH)]
        depth: usize,
        /// Write the tested family as JSON to this path.
        #[arg(long)]
        family_dump: Option<PathBuf>,
    },
    /// Exact exponentiability decision for [0,inf]-categories.
    ExpCheckMetric { file: PathBuf },
    /// Two-point interpolation for a value list [u, v, w].
    Interpolate { file: PathBuf },
    /// Run the quantale law suite on a value list or on built-in samples.
    QuantaleTest {
        file: Option<PathBuf>,
        #[arg(long, conflicts_with = "file")]
        quantale: Option<QuantaleId>,
    },
}

fn split(cmd: Cmd) -> (Command, Vec<PathBuf>, Option<PathBuf>) {
    let none = None;
    match cmd {
        Cmd::Validate { files } => (Command::Validate, files, none),
        Cmd::Close { file } => (Command::Close, vec![file], none),
        Cmd::Dual { file } => (Command::Dual, vec![file], none),
        Cmd::Order { file } => (Command::Order, vec![file], none),
        Cmd::Product { a, b } => (Command::Product, vec![a, b], none),
        Cmd::Tensor { a, b } => (Command::Tensor, vec![a, b], none),
        Cmd::Compose { phi, psi } => (Command::Compose, vec![phi, psi], none),
        Cmd::Ext { psi, phi } => (Command::Ext, vec![psi, phi], none),
        Cmd::Lift { phi, psi } => (Command::Lift, vec![phi, psi], none),
        Cmd::Graph { functor } => (Command::Graph, vec![functor], none),
        Cmd::AdjointCheck { phi, psi } => (Command::AdjointCheck, vec![phi, psi], none),
        Cmd::Yoneda { category, object } => (Command::Yoneda { object }, vec![category], none),
        Cmd::PresheafDist { psi, psi2 } => (Command::PresheafDist, vec![psi, psi2], none),
        Cmd::RightAdjoint { psi } => (Command::RightAdjoint, vec![psi], none),
        Cmd::Representable { psi } => (Command::Representable, vec![psi], none),
        Cmd::CompleteCheck {
            category,
            mut candidates,
        } => {
            candidates.insert(0, category);
            (Command::CompleteCheck, candidates, none)
        }
        Cmd::CauchyMeasure { sequence } => (Command::CauchyMeasure, vec![sequence], none),
        Cmd::SeqConverges { sequence, object } => (Command::SeqConverges { object }, vec![sequence], none),
        Cmd::BaseChange { morphism, file, to } => (Command::BaseChange { morphism, to }, vec![file], none),
        Cmd::ExpCheck {
            file,
            depth,
            family_dump,
        } => (
            Command::ExpCheck {
                depth,
                family: family_dump.is_some(),
            },
            vec![file],
            family_dump,
        ),
        Cmd::ExpCheckMetric { file } => (Command::ExpCheckMetric, vec![file], none),
        Cmd::Interpolate { file } => (Command::Interpolate, vec![file], none),
        Cmd::QuantaleTest { file, quantale } => (
            Command::QuantaleTest {
                quantale: if file.is_none() {
                    Some(quantale.unwrap_or(QuantaleId::Bool2))
                } else {
                    None
                },
            },
            file.into_iter().collect(),
            none,
        ),
    }
}

fn run(cli: Cli) -> Result<(String, u8), (String, Error)> {
    let (command, files, family_dump) = split(cli.command);
    let name = command.name().to_string();
    let opts = Options {
        allow_float: cli.global.allow_float,
        inexact: cli.global.inexact,
    };
    let fail = |e: Error| (name.clone(), e);
    let inputs = files
        .iter()
        .map(|f| Input::from_file(f))
        .collect::<Result<Vec<_>, _>>()
        .map_err(fail)?;
    let mut report = app::execute(&command, &inputs, &opts).map_err(fail)?;
    if let Some(path) = family_dump {
        let family = report
            .output
            .as_mut()
            .and_then(|o| o.as_object_mut())
            .and_then(|o| o.remove("family"))
            .unwrap_or_default();
        write_file(&path, &to_pretty(&family)).map_err(fail)?;
    }
    let code = u8::try_from(report.exit_code()).unwrap_or(2);
    let out = if cli.global.text {
        report.to_text()
    } else {
        report.to_json_string()
    };
    Ok((out, code))
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = cli.global.text;
    match run(cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err((command, err)) => {
            if !text {
                print!("{}", to_pretty(&app::error_json(&command, &err)));
            }
            eprintln!("qcat {command}: {err}");
            ExitCode::from(2)
        }
    }
}
