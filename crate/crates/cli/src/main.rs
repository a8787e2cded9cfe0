use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use dp4::expr::parse_scalar;
use dp4::pipeline::{analyze, residue_at, Analysis, FieldChoice, Options, StageError};
use dp4::spec::{parse_symbol, read_pencil, InputError, PencilSpec};
use dp4_core::field::{ConstantMode, FieldDescriptor, Valuation};

/// Brauer group computations for degree 4 del Pezzo surfaces.
#[derive(Parser)]
#[command(name = "dp4", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Field to work over; defaults to the extension when one is declared.
    #[arg(long, global = true, value_enum)]
    field: Option<FieldArg>,
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    #[value(name = "k")]
    K,
    #[value(name = "L")]
    L,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run every stage and print the report.
    Analyze { file: PathBuf },
    /// Stop after the Galois image and H¹.
    H1 { file: PathBuf },
    /// Residue of a constant symbol at `p=0`, `p=<constant>` or `r=0` for the extension generator.
    Residues {
        file: PathBuf,
        #[arg(long)]
        at: String,
        /// Symbol such as "(c, b)"; defaults to the result of the certificate chain.
        #[arg(long)]
        symbol: Option<String>,
    },
    /// Check the certificate chain only.
    VerifyTrace { file: PathBuf },
}

enum Failure {
    Input(InputError),
    Stage(StageError),
    Usage(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<StageError> for Failure {
    fn from(e: StageError) -> Self {
        Failure::Stage(e)
    }
}

fn options(cli: &Cli, spec: &PencilSpec, h1_only: bool) -> Options {
    let field = match cli.field {
        Some(FieldArg::K) => FieldChoice::Base,
        Some(FieldArg::L) => FieldChoice::Extension,
        None if spec.has_extension() => FieldChoice::Extension,
        None => FieldChoice::Base,
    };
    Options { field, threads: Options::threads_from_env(), h1_only }
}

fn print_report(cli: &Cli, a: &Analysis, only: Option<&str>) {
    let mut r = a.report.clone();
    if let Some(name) = only {
        r.stages.retain(|s| s.name == name);
        r.checks.retain(|c| c.name.contains("certificate"));
    }
    if cli.json {
        println!("{}", r.to_json());
    } else {
        print!("{}", r.to_text());
    }
}

fn valuation_for(field: &FieldDescriptor, at: &str) -> Result<Valuation, Failure> {
    let (name, value) = at.split_once('=').ok_or_else(|| Failure::Usage(format!("--at expects name=value, got '{at}'")))?;
    let (name, value) = (name.trim(), value.trim());
    if field.ext.as_ref().is_some_and(|e| e.name == name) {
        if value != "0" {
            return Err(Failure::Usage("the extension generator only supports the valuation at 0".into()));
        }
        return Valuation::at_generator(field).map_err(|e| Failure::Usage(e.to_string()));
    }
    let var = field.param_index(name).ok_or_else(|| Failure::Usage(format!("unknown parameter '{name}'")))?;
    let gauss = FieldDescriptor::new(ConstantMode::Gaussian, Vec::new());
    let root = parse_scalar(value, &gauss)
        .ok()
        .and_then(|x| x.constant_value())
        .ok_or_else(|| Failure::Usage(format!("'{value}' is not a constant")))?;
    Valuation::at_param(field, var, root).map_err(|e| Failure::Usage(e.to_string()))
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    match &cli.cmd {
        Cmd::Analyze { file } => {
            let spec = read_pencil(file)?;
            let a = analyze(&spec, &options(cli, &spec, false))?;
            print_report(cli, &a, None);
            Ok(a.report.all_passed())
        }
        Cmd::H1 { file } => {
            let spec = read_pencil(file)?;
            let a = analyze(&spec, &options(cli, &spec, true))?;
            print_report(cli, &a, None);
            Ok(a.report.all_passed())
        }
        Cmd::VerifyTrace { file } => {
            let spec = read_pencil(file)?;
            if spec.certificate.is_none() {
                return Err(Failure::Usage("the file has no [certificates] section".into()));
            }
            let a = analyze(&spec, &options(cli, &spec, false))?;
            print_report(cli, &a, Some("trace"));
            Ok(a.simplified.is_some())
        }
        Cmd::Residues { file, at, symbol } => {
            let spec = read_pencil(file)?;
            let opts = options(cli, &spec, false);
            let field = match opts.field {
                FieldChoice::Base => spec.base_field(),
                FieldChoice::Extension => spec.field.clone(),
            };
            let v = valuation_for(&field, at)?;
            let sym = match symbol {
                Some(s) => parse_symbol(s, &field).map_err(|m| Failure::Usage(format!("--symbol: {m}")))?,
                None => analyze(&spec, &opts)?
                    .simplified
                    .ok_or_else(|| Failure::Usage("no verified certificate result; pass --symbol".into()))?,
            };
            let (class, trivial) = residue_at(&sym, &v)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&json!({ "at": format!("{} = 0", v.label()), "class": class, "trivial": trivial })).expect("json"));
            } else {
                println!("residue at {} = 0: {class}{}", v.label(), if trivial { " (trivial)" } else { "" });
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(3),
        Err(Failure::Input(e)) => {
            eprintln!("dp4: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("dp4: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Stage(e)) => {
            eprintln!("dp4: {e}");
            ExitCode::from(3)
        }
    }
}
