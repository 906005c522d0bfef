mod commands;
mod input;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sixj::b6j::QuadratureConfig;
use sixj::moduli::Orientation;
use sixj::{Error, Result};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "sixj", version, about = "b-6j symbols and truncated hyperideal tetrahedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify edge lengths as hyperbolic, flat or anti-de Sitter.
    Classify(Common),
    /// Volume, co-volumes and critical points.
    Volume(Common),
    /// Evaluate the b-6j symbol at one value of b.
    B6j {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        b: f64,
    },
    /// Compare the symbol with its asymptotics along decreasing b.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Comma-separated, strictly decreasing, inside (0.05, 1).
        #[arg(long = "b-list", value_delimiter = ',', required = true)]
        b_list: Vec<f64>,
    },
    /// Fenchel-Nielsen coordinates and holonomy traces of anti-de Sitter lengths.
    Fn {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "+1")]
        orientation: OrientationArg,
    },
}

#[derive(Args, Debug)]
struct Common {
    /// JSON file with the input tuple.
    #[arg(long, conflicts_with = "inline", required_unless_present = "inline")]
    input: Option<std::path::PathBuf>,
    /// Input tuple as inline JSON.
    #[arg(long)]
    inline: Option<String>,
    /// Relative quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Run the extra consistency checks.
    #[arg(long)]
    verify: bool,
    /// Seed for randomised checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum OrientationArg {
    #[value(name = "+1")]
    Plus,
    #[value(name = "-1")]
    Minus,
}

impl Common {
    fn read_input(&self) -> Result<input::Input> {
        let text = match (&self.input, &self.inline) {
            (_, Some(s)) => s.clone(),
            (Some(path), None) => std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?,
            (None, None) => return Err(Error::Parse("no input given".into())),
        };
        input::parse(&text)
    }

    fn quadrature(&self) -> Result<QuadratureConfig> {
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(Error::Parse(format!("--tol must lie in (0, 1), got {}", self.tol)));
        }
        Ok(QuadratureConfig { tol: self.tol, ..QuadratureConfig::default() })
    }
}

fn check_b_list(bs: &[f64]) -> Result<()> {
    if bs.iter().any(|&b| !(b > 0.05 && b < 1.0)) {
        return Err(Error::Parse("--b-list values must lie in (0.05, 1)".into()));
    }
    if bs.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Parse("--b-list must be strictly decreasing".into()));
    }
    Ok(())
}

fn json_only(common: &Common) -> Result<()> {
    if common.format == Some(Format::Csv) {
        return Err(Error::Parse("csv output is only available for sweep".into()));
    }
    Ok(())
}

fn envelope(command: &str, body: Value) -> String {
    let mut out = json!({ "schema_version": commands::SCHEMA_VERSION, "command": command });
    if let (Some(o), Value::Object(b)) = (out.as_object_mut(), body) {
        o.extend(b);
    }
    serde_json::to_string_pretty(&out).expect("json output") + "\n"
}

fn run(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Classify(c) => {
            json_only(&c)?;
            Ok(envelope("classify", commands::classify(&c.read_input()?)?))
        }
        Command::Volume(c) => {
            json_only(&c)?;
            Ok(envelope("volume", commands::volume(&c.read_input()?, c.verify)?))
        }
        Command::B6j { common: c, b } => {
            json_only(&c)?;
            let cfg = c.quadrature()?;
            let input = c.read_input()?;
            Ok(envelope("b6j", commands::b6j(&input, b, &cfg, c.verify, c.seed)?))
        }
        Command::Sweep { common: c, b_list } => {
            check_b_list(&b_list)?;
            let cfg = c.quadrature()?;
            let table = commands::sweep(&c.read_input()?, &b_list, &cfg)?;
            match c.format.unwrap_or(Format::Csv) {
                Format::Csv => Ok(commands::sweep_csv(&table)),
                Format::Json => Ok(envelope("sweep", serde_json::to_value(&table).expect("json output"))),
            }
        }
        Command::Fn { common: c, orientation } => {
            json_only(&c)?;
            let o = match orientation {
                OrientationArg::Plus => Orientation::Positive,
                OrientationArg::Minus => Orientation::Negative,
            };
            Ok(envelope("fn", commands::fenchel_nielsen(&c.read_input()?, o)?))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("sixj: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
