mod magma;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orthinv_core::fields::select_lambda;
use orthinv_core::invariants::{fixed_space, hilbert_dims, reynolds, transfer, LinearAction};
use orthinv_core::matgroups::{orthogonal_group, special_subgroup};
use orthinv_core::suites::{run_suite, Suite, SuiteConfig};
use orthinv_core::{
    Error, FieldElement, MatrixGroup, OrthogonalType, Polynomial, PrimeField, ProductGroup,
};

/// Largest prime accepted by `group` and `compute` unless `ORTHINV_MAX_P` is set.
const DEFAULT_MAX_P: u32 = 97;
/// Largest prime for which `group --show elements` lists every element.
const ELEMENT_LISTING_MAX_P: u32 = 13;

#[derive(Parser)]
#[command(
    name = "orthinv",
    version,
    about = "Invariants of two-dimensional orthogonal groups over F_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Describe an orthogonal group.
    Group {
        #[arg(long = "type", value_enum)]
        kind: GroupType,
        #[arg(long)]
        p: u32,
        /// Non-square defining the minus type; defaults to the canonical choice.
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<i64>,
        #[arg(long, value_enum, default_value = "order")]
        show: Show,
    },
    /// Run a named verification suite.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        p: u32,
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<i64>,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the JSON report to this path.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Run a single computation.
    Compute {
        #[arg(value_enum)]
        op: Operation,
        #[arg(long)]
        p: u32,
        #[arg(long, value_enum)]
        group: GroupName,
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<i64>,
        /// Degree for `fixed-space`.
        #[arg(long)]
        degree: Option<u32>,
        /// Truncation degree for `hilbert`.
        #[arg(long)]
        max_degree: Option<u32>,
        /// Input polynomial for `reynolds` and `transfer`.
        #[arg(long)]
        poly: Option<String>,
    },
    /// Write a MAGMA script recomputing a suite's dimensions.
    ExportMagma {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        p: u32,
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<i64>,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupType {
    Plus,
    Minus,
}

#[derive(Clone, Copy, ValueEnum)]
enum Show {
    Order,
    Elements,
    Generators,
}

#[derive(Clone, Copy, ValueEnum)]
enum Operation {
    Reynolds,
    Transfer,
    FixedSpace,
    Hilbert,
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupName {
    So2plus,
    O2plus,
    O2minus,
    /// `O₂⁻ × O₂⁻` acting on `(x, y)` independently.
    Product,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Failure of a command, mapped to the process exit code.
enum Failure {
    /// Bad arguments or input: exit 2.
    Usage(String),
    /// Unexpected condition inside a computation: exit 3.
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NoGeneratorFound { .. }
            | Error::ClosureBudgetExceeded(_)
            | Error::SingularGenerator(_)
            | Error::NotIrreducible { .. } => Failure::Internal(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Group {
            kind,
            p,
            lambda,
            show,
        } => {
            let field = checked_field(p, max_p(DEFAULT_MAX_P)?)?;
            let group = match kind {
                GroupType::Plus => orthogonal_group(field, OrthogonalType::Plus, None)?,
                GroupType::Minus => minus_group(field, lambda)?,
            };
            print!("{}", describe_group(&group, show)?);
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            p,
            lambda,
            max_degree,
            seed,
            json,
        } => {
            let cfg = SuiteConfig {
                suite,
                p,
                lambda: lambda.map(|l| reduce(l, p)),
                max_degree,
                seed,
                prime_cap: env_max_p()?,
            };
            let report = run_suite(&cfg)?;
            print!("{}", report.render());
            if let Some(path) = json {
                std::fs::write(&path, report.to_json() + "\n")
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(if report.overall.is_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Compute {
            op,
            p,
            group,
            lambda,
            degree,
            max_degree,
            poly,
        } => {
            let field = checked_field(p, max_p(DEFAULT_MAX_P)?)?;
            let action = build_action(field, group, lambda)?;
            let g = action.as_dyn();
            match op {
                Operation::Reynolds | Operation::Transfer => {
                    let text = poly.ok_or_else(|| usage("--poly is required"))?;
                    let f = parse_poly(&text, field)?;
                    let out = match op {
                        Operation::Reynolds => reynolds(g, &f)?,
                        _ => transfer(g, &f)?,
                    };
                    println!("{}", out.to_text());
                }
                Operation::FixedSpace => {
                    let d = degree.ok_or_else(|| usage("--degree is required"))?;
                    let basis = fixed_space(g, d);
                    println!("dimension {}", basis.dim());
                    for f in basis.polynomials() {
                        println!("{}", f.to_text());
                    }
                }
                Operation::Hilbert => {
                    let d = max_degree.ok_or_else(|| usage("--max-degree is required"))?;
                    let dims = hilbert_dims(g, d);
                    println!("{}", serde_json::to_string(&dims).expect("dims serialize"));
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::ExportMagma {
            suite,
            p,
            lambda,
            max_degree,
            out,
        } => {
            let cap = env_max_p()?.unwrap_or(suite.default_prime_cap());
            let field = checked_field(p, cap)?;
            let lambda = lambda
                .map(|l| field.elem(l))
                .unwrap_or_else(|| select_lambda(field));
            let d = max_degree.unwrap_or(suite.default_max_degree(p));
            let script = magma::script(suite, field, lambda, d)?;
            std::fs::write(&out, script)
                .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", out.display())))?;
            println!("wrote {}", out.display());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn usage(msg: &str) -> Failure {
    Failure::Usage(msg.to_string())
}

fn reduce(l: i64, p: u32) -> u32 {
    l.rem_euclid(p as i64) as u32
}

fn env_max_p() -> Result<Option<u32>, Failure> {
    match std::env::var("ORTHINV_MAX_P") {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            Failure::Usage(format!(
                "ORTHINV_MAX_P must be a positive integer (got `{v}`)"
            ))
        }),
        Err(_) => Ok(None),
    }
}

fn max_p(default: u32) -> Result<u32, Failure> {
    Ok(env_max_p()?.unwrap_or(default))
}

fn checked_field(p: u32, max: u32) -> Result<PrimeField, Failure> {
    let field = PrimeField::new(p as u64)?;
    if p > max {
        return Err(Error::PrimeTooLarge { p, max }.into());
    }
    Ok(field)
}

fn minus_group(field: PrimeField, lambda: Option<i64>) -> Result<MatrixGroup, Failure> {
    let lambda: FieldElement = lambda
        .map(|l| field.elem(l))
        .unwrap_or_else(|| select_lambda(field));
    Ok(orthogonal_group(
        field,
        OrthogonalType::Minus,
        Some(lambda),
    )?)
}

fn describe_group(group: &MatrixGroup, show: Show) -> Result<String, Failure> {
    let mut out = String::new();
    match show {
        Show::Order => writeln!(out, "{}", group.order()).unwrap(),
        Show::Generators => {
            for g in group.generators() {
                writeln!(out, "{g}").unwrap();
            }
        }
        Show::Elements => {
            let p = group.field().p();
            if p > ELEMENT_LISTING_MAX_P {
                return Err(Failure::Usage(format!(
                    "element listing is limited to p <= {ELEMENT_LISTING_MAX_P} (got {p})"
                )));
            }
            for g in group.elements() {
                writeln!(out, "{g}").unwrap();
            }
        }
    }
    for note in group.notes() {
        eprintln!("note: {note}");
    }
    Ok(out)
}

enum Action {
    Matrix(MatrixGroup),
    Product(ProductGroup),
}

impl Action {
    fn as_dyn(&self) -> &dyn LinearAction {
        match self {
            Action::Matrix(g) => g,
            Action::Product(g) => g,
        }
    }
}

fn build_action(
    field: PrimeField,
    name: GroupName,
    lambda: Option<i64>,
) -> Result<Action, Failure> {
    let plus = || orthogonal_group(field, OrthogonalType::Plus, None);
    Ok(match name {
        GroupName::So2plus => Action::Matrix(special_subgroup(&plus()?)),
        GroupName::O2plus => Action::Matrix(plus()?),
        GroupName::O2minus => Action::Matrix(minus_group(field, lambda)?),
        GroupName::Product => Action::Product(ProductGroup::square(&minus_group(field, lambda)?)),
    })
}

fn parse_poly(text: &str, field: PrimeField) -> Result<Polynomial, Failure> {
    Polynomial::parse(text, field).map_err(|e| match e {
        Error::Syntax { pos, .. } | Error::UnknownVariable { pos, .. } => {
            Failure::Usage(format!("{e}\n  {text}\n  {}^", " ".repeat(pos)))
        }
        other => other.into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_reduction() {
        assert_eq!(reduce(-1, 7), 6);
        assert_eq!(reduce(9, 7), 2);
    }

    #[test]
    fn error_classes() {
        assert!(matches!(
            Failure::from(Error::NoGeneratorFound { p: 3, lambda: 2 }),
            Failure::Internal(_)
        ));
        assert!(matches!(
            Failure::from(Error::NotPrime(4)),
            Failure::Usage(_)
        ));
    }

    #[test]
    fn caret_under_error_position() {
        let f = PrimeField::new(5).unwrap();
        match parse_poly("x1 + q2", f) {
            Err(Failure::Usage(msg)) => assert!(msg.ends_with("\n  x1 + q2\n       ^"), "{msg}"),
            _ => panic!("expected a usage failure"),
        }
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
