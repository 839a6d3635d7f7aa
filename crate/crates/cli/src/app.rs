//! Argument handling and dispatch. Exit status: 0 success, 1 mathematical
//! failure (reported), 2 usage or parse error.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dialgebra::scalars::parse_rational;
use dialgebra::Scalar;

use crate::commands::{self, Complex, UsageError, VariantChoice};
use crate::report::Report;
use crate::syntax::{self, DefinitionFile};

#[derive(Parser, Debug)]
#[command(name = "dialg", version, about = "Check, classify and deform BiHom-associative dialgebras")]
pub struct Cli {
    /// Emit the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Disable the data-parallel kernels.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct Target {
    /// Definition file.
    pub file: PathBuf,
    /// Block to act on; optional when the file has a single candidate.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the axioms of every block (or of the named one).
    Verify(Target),
    /// Solve for derivations of one bidegree.
    #[command(allow_negative_numbers = true)]
    Derive {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        k: i64,
        #[arg(long)]
        l: i64,
        #[arg(long, value_parser = rational, requires_all = ["beta", "gamma"], conflicts_with_all = ["quasi", "triple"])]
        alpha: Option<Scalar>,
        #[arg(long, value_parser = rational, requires_all = ["alpha", "gamma"])]
        beta: Option<Scalar>,
        #[arg(long, value_parser = rational, requires_all = ["alpha", "beta"])]
        gamma: Option<Scalar>,
        #[arg(long, conflicts_with = "triple")]
        quasi: bool,
        #[arg(long)]
        triple: bool,
    },
    /// Solve the plain, quasi and triple variants over the built-in catalog
    /// or over the dialgebra blocks of a file.
    #[command(allow_negative_numbers = true)]
    Classify {
        file: Option<PathBuf>,
        /// Use the built-in catalog (the default without a file).
        #[arg(long, conflicts_with = "file")]
        catalog: bool,
        /// Parameter overrides, e.g. `a=1,f=-2/3`.
        #[arg(long, default_value = "")]
        bind: String,
        #[arg(long, default_value_t = 1)]
        k: i64,
        #[arg(long, default_value_t = 1)]
        l: i64,
    },
    /// Dimensions of compatible cochains, cocycles, coboundaries and cohomology.
    Cohomology {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        degree: usize,
        /// Defaults to `dialg` for dialgebra blocks and `hoch` for algebra blocks.
        #[arg(long, value_enum)]
        complex: Option<ComplexArg>,
    },
    /// Check `{pi}{pi} = 0` and the case-by-case expressions.
    OperadCheck(Target),
    /// Check the deformation equations up to an order.
    Deform {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        check_order: usize,
    },
    /// Search for an equivalence with the undeformed structure.
    Trivialize {
        #[command(flatten)]
        target: Target,
        #[arg(long)]
        order: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ComplexArg {
    Hoch,
    Dialg,
}

fn rational(s: &str) -> Result<Scalar, String> {
    parse_rational(s).ok_or_else(|| format!("`{s}` is not a rational number"))
}

/// Everything a process would print.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn usage(msg: impl Into<String>) -> Self {
        Outcome { stdout: String::new(), stderr: msg.into(), code: 2 }
    }
}

/// Reads and parses a definition file; errors are rendered as
/// `path:line:col: error: message`.
pub fn load(path: &Path) -> Result<DefinitionFile, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("error: cannot read {}: {e}", path.display()))?;
    syntax::parse(&text).map_err(|e| format!("{}:{}:{}: error: {}", path.display(), e.line, e.col, e.message))
}

/// Runs one command line (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() { Outcome::usage(text) } else { Outcome { stdout: text, stderr: String::new(), code: 0 } };
        }
    };
    dialgebra::par::set_enabled(!cli.sequential);
    match dispatch(&cli.command) {
        Ok(report) => {
            let stdout = if cli.json { report.to_json() } else { report.to_text() };
            Outcome { stdout, stderr: String::new(), code: report.exit_code }
        }
        Err(msg) => Outcome::usage(format!("{msg}\n")),
    }
}

type FileCommand<'a> = dyn Fn(&DefinitionFile, Option<&str>) -> Result<Report, UsageError> + 'a;

fn dispatch(cmd: &Command) -> Result<Report, String> {
    let with_file = |t: &Target, f: &FileCommand| {
        let file = load(&t.file)?;
        f(&file, t.name.as_deref()).map_err(|e| format!("error: {e}"))
    };
    match cmd {
        Command::Verify(t) => with_file(t, &commands::verify),
        Command::Derive { target, k, l, alpha, beta, gamma, quasi, triple } => {
            let variant = match (alpha, beta, gamma) {
                (Some(a), Some(b), Some(c)) => VariantChoice::Generalized(a.clone(), b.clone(), c.clone()),
                _ if *quasi => VariantChoice::Quasi,
                _ if *triple => VariantChoice::Triple,
                _ => VariantChoice::Plain,
            };
            with_file(target, &|f, n| commands::derive(f, n, *k, *l, &variant))
        }
        Command::Classify { file, catalog: _, bind, k, l } => {
            let bindings = commands::parse_bindings(bind).map_err(|e| format!("error: {e}"))?;
            let file = file.as_deref().map(load).transpose()?;
            commands::classify(file.as_ref(), &bindings, *k, *l).map_err(|e| format!("error: {e}"))
        }
        Command::Cohomology { target, degree, complex } => {
            let complex = complex.map(|c| match c {
                ComplexArg::Hoch => Complex::Hoch,
                ComplexArg::Dialg => Complex::Dialg,
            });
            with_file(target, &|f, n| commands::cohomology(f, n, *degree, complex))
        }
        Command::OperadCheck(t) => with_file(t, &commands::operad_check),
        Command::Deform { target, check_order } => with_file(target, &|f, n| commands::deform(f, n, *check_order)),
        Command::Trivialize { target, order } => with_file(target, &|f, n| commands::trivialize(f, n, *order)),
    }
}
