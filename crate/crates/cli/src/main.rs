use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use modreg_cli::commands::{self, DecomposeRequest, IdentityRequest, TABLE_CHOICES};
use modreg_cli::{exit, CliError, DataStore, Session, Stage, DATA_DIR_ENV};
use num_rational::Rational64;
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(
    name = "modreg",
    version,
    about = "Level-15 modular units, regulators and Mahler measures"
)]
struct Cli {
    /// Emit line-delimited JSON records instead of the text report.
    #[arg(long, global = true)]
    json: bool,
    /// Read data files from this directory instead of the bundled copies.
    #[arg(long, global = true, env = DATA_DIR_ENV)]
    data_dir: Option<PathBuf>,
    /// Write the certificate here when every stage passes.
    #[arg(long, global = true)]
    certificate: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check (1+ũ)²(1+ṽ)² = ũṽ coefficientwise.
    VerifyParametrisation {
        #[arg(long, default_value_t = 200)]
        prec: i64,
    },
    /// Divisor of the cross-ratio unit u1(a,b,c,d).
    Divisors {
        #[arg(long, value_parser = parse_unit)]
        unit: [i64; 4],
        #[arg(long = "N", default_value_t = 15)]
        level: u32,
    },
    /// Build U2 and R2 at level N; optionally decompose a cocycle.
    Complex {
        #[arg(long = "N")]
        level: u32,
        #[arg(long)]
        decompose: Option<String>,
        #[arg(long, num_args = 1.., requires = "decompose")]
        candidates: Vec<String>,
        /// Write the decomposition certificate text to this file.
        #[arg(long, requires = "decompose")]
        emit: Option<PathBuf>,
    },
    /// Manin-symbol homology of X1(N).
    Homology {
        #[arg(long = "N")]
        level: u32,
    },
    /// Identify the Eisenstein combination with a multiple of the newform.
    IdentifyF {
        #[arg(long, default_value_t = 21)]
        prec: i64,
        /// Compare Hecke eigenvalues with point counts up to this bound.
        #[arg(long, default_value_t = 1000)]
        ap_bound: u64,
    },
    /// L(s) for s > 0, or L'(s) at a non-positive integer.
    Lvalue {
        #[arg(long)]
        label: String,
        #[arg(long, allow_hyphen_values = true)]
        s: f64,
    },
    /// Mahler measure of a Laurent polynomial in x, y, z, t.
    Mahler {
        #[arg(long)]
        poly: String,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Compare with r·L'(label, -1) + s·ζ'(-2).
        #[arg(long)]
        label: Option<String>,
        #[arg(
            long,
            default_value = "1",
            allow_hyphen_values = true,
            requires = "label"
        )]
        r: Rational64,
        #[arg(
            long,
            default_value = "0",
            allow_hyphen_values = true,
            requires = "label"
        )]
        s: Rational64,
        #[arg(long, default_value_t = 1e-6, requires = "label")]
        match_tol: f64,
    },
    /// Check the identities of the table manifest.
    VerifyTables {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(TABLE_CHOICES))]
        table: String,
    },
    /// Run every stage of the level-15 argument.
    Pipeline {
        #[arg(long, num_args = 1.., default_value = "xi1(1,4)")]
        candidates: Vec<String>,
    },
}

fn parse_unit(s: &str) -> Result<[i64; 4], String> {
    let v: Vec<i64> = s
        .split(',')
        .map(|x| x.trim().parse::<i64>().map_err(|e| format!("`{x}`: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into()
        .map_err(|_| "expected four comma-separated integers".to_string())
}

impl Command {
    /// Canonical spelling recorded in the certificate.
    fn canonical(&self) -> String {
        match self {
            Command::VerifyParametrisation { prec } => {
                format!("verify-parametrisation --prec {prec}")
            }
            Command::Divisors { unit, level } => {
                format!(
                    "divisors --unit {},{},{},{} --N {level}",
                    unit[0], unit[1], unit[2], unit[3]
                )
            }
            Command::Complex {
                level,
                decompose,
                candidates,
                ..
            } => {
                let mut s = format!("complex --N {level}");
                if let Some(t) = decompose {
                    s += &format!(" --decompose {t}");
                }
                if !candidates.is_empty() {
                    s += &format!(" --candidates {}", candidates.join(" "));
                }
                s
            }
            Command::Homology { level } => format!("homology --N {level}"),
            Command::IdentifyF { prec, ap_bound } => {
                format!("identify-f --prec {prec} --ap-bound {ap_bound}")
            }
            Command::Lvalue { label, s } => format!("lvalue --label {label} --s {s}"),
            Command::Mahler {
                poly,
                tol,
                label,
                r,
                s,
                match_tol,
            } => {
                let mut out = format!("mahler --poly {poly} --tol {tol:e}");
                if let Some(l) = label {
                    out += &format!(" --label {l} --r {r} --s {s} --match-tol {match_tol:e}");
                }
                out
            }
            Command::VerifyTables { table } => format!("verify-tables --table {table}"),
            Command::Pipeline { candidates } => {
                format!("pipeline --candidates {}", candidates.join(" "))
            }
        }
    }
}

fn run(cmd: &Command, s: &mut Session) -> Result<(), CliError> {
    match cmd {
        Command::VerifyParametrisation { prec } => commands::verify_parametrisation_cmd(s, *prec),
        Command::Divisors { unit, level } => commands::divisors_cmd(s, *level, *unit),
        Command::Complex {
            level,
            decompose,
            candidates,
            emit,
        } => {
            let req = decompose.as_deref().map(|target| DecomposeRequest {
                target,
                candidates,
                emit: emit.as_deref(),
            });
            commands::complex_cmd(s, *level, req)
        }
        Command::Homology { level } => commands::homology_cmd(s, *level),
        Command::IdentifyF { prec, ap_bound } => commands::identify_f_cmd(s, *prec, *ap_bound),
        Command::Lvalue { label, s: point } => commands::lvalue_cmd(s, label, *point),
        Command::Mahler {
            poly,
            tol,
            label,
            r,
            s: s_coeff,
            match_tol,
        } => {
            let identity = label.as_ref().map(|l| IdentityRequest {
                label: l.clone(),
                r: *r,
                s: *s_coeff,
                tol: *match_tol,
            });
            commands::mahler_cmd(s, poly, *tol, identity)
        }
        Command::VerifyTables { table } => commands::verify_tables_cmd(s, table),
        Command::Pipeline { candidates } => commands::pipeline_cmd(s, candidates),
    }
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
enum Record<'a> {
    Stage(&'a Stage),
    Certificate(&'a modreg_cli::PipelineCertificate),
    Error { stage: &'a str, message: String },
}

fn emit_json(out: &mut impl Write, r: &Record<'_>) {
    let line = serde_json::to_string(r).expect("records serialise");
    let _ = writeln!(out, "{line}");
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let data = match &cli.data_dir {
        Some(d) => DataStore::from_dir(d),
        None => DataStore::bundled(),
    };
    let mut session = Session::new(cli.command.canonical(), data);
    let result = run(&cli.command, &mut session);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();

    if cli.json {
        for st in &session.stages {
            emit_json(&mut out, &Record::Stage(st));
        }
    } else {
        for l in &session.lines {
            let _ = writeln!(out, "{l}");
        }
    }

    let (stage, message, code) = match (&result, session.first_failure()) {
        (Err(e), _) => (e.stage().to_string(), e.to_string(), exit::INPUT),
        (Ok(()), Some(st)) => (
            st.name.clone(),
            st.failure.clone().unwrap_or_default(),
            exit::CHECK_FAILED,
        ),
        (Ok(()), None) => {
            let cert = session.certificate().expect("all stages passed");
            if cli.json {
                emit_json(&mut out, &Record::Certificate(&cert));
            }
            if let Some(path) = &cli.certificate {
                let text =
                    serde_json::to_string_pretty(&cert).expect("certificate serialises") + "\n";
                if let Err(e) = std::fs::write(path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(exit::INPUT as u8);
                }
            }
            return ExitCode::SUCCESS;
        }
    };
    if cli.json {
        emit_json(
            &mut out,
            &Record::Error {
                stage: &stage,
                message: message.clone(),
            },
        );
    }
    eprintln!("error: stage `{stage}` failed: {message}");
    ExitCode::from(code as u8)
}
