//! Argument handling and dispatch.

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use lamop_core::envelopes::{envelope, HomSizeTable, Variant};
use lamop_core::operads::OperadData;
use lamop_core::oplax::enumerate_wn;

use crate::cases::{self, Params};
use crate::expr::{evaluate, parse, MAX_CAP};
use crate::render;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
    Tsv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OperadName {
    I1,
    Comm,
    Ass,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VariantName {
    Bar,
    Hat,
}

#[derive(Debug, Parser)]
#[command(name = "lamop", version, about = "Finite computations with Λ-sequences, their products and operads")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Highest level computed.
    #[arg(long, global = true)]
    pub cap: Option<usize>,
    /// Block cap K for Kelly products (default cap + 2).
    #[arg(long, global = true)]
    pub block_cap: Option<usize>,
    /// Seed for randomised instances (ChaCha8).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sizes of a product expression such as `kelly_lambda(Comm,Comm)`.
    Compute { expr: String },
    /// Run a named verification case, or `all`.
    Verify {
        case: String,
        /// Arity for cases that take one (`wn-connected`, `covariant-negative`).
        #[arg(long)]
        n: Option<usize>,
        /// List every check, not only failures.
        #[arg(long)]
        verbose: bool,
    },
    /// List the verification cases.
    Cases,
    /// The poset W_n.
    Wn {
        #[arg(long)]
        n: usize,
    },
    /// Hom-size table of an envelope.
    Envelope {
        #[arg(long, value_enum)]
        operad: OperadName,
        #[arg(long, value_enum, default_value = "bar")]
        variant: VariantName,
        #[arg(long, default_value_t = 3)]
        max_arity: usize,
    },
}

/// Rendered output and whether it reports success.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

fn pick(format: Option<Format>, default: Format, allowed: &[Format]) -> Result<Format, CliError> {
    let f = format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(CliError::Usage(format!("format {f:?} is not available here; use one of {allowed:?}").to_lowercase()))
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("plain data") + "\n"
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    match &cli.command {
        Command::Compute { expr } => {
            let f = pick(cli.format, Format::Text, &[Format::Text, Format::Json, Format::Tsv])?;
            let c = evaluate(&parse(expr)?, cli.cap.unwrap_or(3), cli.block_cap)?;
            let ok = c.routes.as_ref().is_none_or(|r| r.agree);
            let text = match f {
                Format::Json => pretty(&render::computed_json(&c)),
                Format::Tsv => render::computed_tsv(&c),
                _ => render::computed_text(&c),
            };
            Ok(Output { text, ok })
        }
        Command::Verify { case, n, verbose } => {
            let f = pick(cli.format, Format::Text, &[Format::Text, Format::Json])?;
            let params = Params { cap: cli.cap, block_cap: cli.block_cap, seed: cli.seed, n: *n };
            let reports = if case == "all" {
                cases::run_all(&params)
            } else {
                let def = cases::find(case).ok_or_else(|| CliError::Usage(format!("unknown case `{case}`")))?;
                vec![def.run(&params)]
            };
            let ok = reports.iter().all(|r| r.passed());
            let text = match f {
                Format::Json => pretty(&render::reports_json(&reports)),
                _ => reports.iter().map(|r| render::report_text(r, *verbose)).collect(),
            };
            Ok(Output { text, ok })
        }
        Command::Cases => {
            let text = cases::CASES.iter().map(|c| format!("{:<20} criterion {:>2}  {}\n", c.name, c.criterion, c.about)).collect();
            Ok(Output { text, ok: true })
        }
        Command::Wn { n } => {
            let f = pick(cli.format, Format::Dot, &[Format::Dot, Format::Json, Format::Text])?;
            let w = enumerate_wn(*n).map_err(|e| CliError::Usage(e.to_string()))?;
            let text = match f {
                Format::Json => pretty(&w.to_json()),
                Format::Text => {
                    let mut s = format!("W_{n}: {} elements, {} covers, {} component(s)\n", w.len(), w.covers.len(), w.components());
                    for e in &w.elements {
                        s.push_str(&format!("{e}\n"));
                    }
                    s
                }
                _ => w.to_dot(),
            };
            Ok(Output { text, ok: true })
        }
        Command::Envelope { operad, variant, max_arity } => {
            let f = pick(cli.format, Format::Tsv, &[Format::Tsv, Format::Json, Format::Text])?;
            if *max_arity > MAX_CAP {
                return Err(CliError::CapExceeded { cap: *max_arity, max: MAX_CAP });
            }
            let (name, op) = match operad {
                OperadName::I1 => ("i1", OperadData::i1(*max_arity)),
                OperadName::Comm => ("comm", OperadData::comm(*max_arity)),
                OperadName::Ass => ("ass", OperadData::ass(*max_arity)),
            };
            let v = match variant {
                VariantName::Bar => Variant::Bar,
                VariantName::Hat => Variant::Hat,
            };
            let env = envelope(&op, v, *max_arity).map_err(|e| CliError::Compute(e.to_string()))?;
            let table = HomSizeTable::new(name, &env);
            let text = match f {
                Format::Json => pretty(&serde_json::to_value(&table).expect("plain data")),
                _ => table.to_tsv(),
            };
            Ok(Output { text, ok: true })
        }
    }
}

/// Parse `args`, run, write the output; exit 0 on success, 1 when a
/// verification fails, 2 on usage errors.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|out| {
        match &cli.out {
            Some(p) => std::fs::write(p, &out.text)?,
            None => print!("{}", out.text),
        }
        Ok(out.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
