//! Command-line front end: single queries, tables, derivation dumps, the
//! lifting gates and the verification sweeps.

pub mod render;

use std::fmt;
use std::io::{self, Write};

use clap::{Args, Parser, Subcommand};

use lensdim_core::bounds::Catalog;
use lensdim_core::inductive::{run_rounds, RoundOptions};
use lensdim_core::lifting::{
    dm2_lifting_check, encaje_gate, feeding_params_with_lambda, lambda_rule, sharper_lifting_level,
};
use lensdim_core::verify::{self, Scope};
use lensdim_core::{BoundsError, LensSpace, Report, ReportOptions};

use render::{Format, TableRow};

#[derive(Debug, Parser)]
#[command(name = "lensdim", version, about = "Embedding dimension bounds for lens spaces L^{2m+1}(2^e)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Best bounds for one lens space.
    Query(QueryArgs),
    /// One row of bounds per m = 1..max-m.
    Table(TableArgs),
    /// Derivation tree of the inductive upper bound.
    Derive(DeriveArgs),
    /// Embedding gate, lambda rule and carry conditions for one ell.
    Lift(LiftArgs),
    /// Run the invariant sweeps.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct RuleFlags {
    /// Also list the unconditional Euler-class nonembeddings (never used as best).
    #[arg(long)]
    pub conjectural: bool,
    /// Admit bounds resting on imported inputs (PL projective space embeddings).
    #[arg(long)]
    pub external: bool,
}

impl RuleFlags {
    fn options(self) -> ReportOptions {
        ReportOptions { conjectural: self.conjectural, external: self.external }
    }
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub e: u64,
    /// Odd cofactor of the torsion.
    #[arg(long, default_value_t = 1)]
    pub k: u64,
    /// List every applicable bound.
    #[arg(long)]
    pub all: bool,
    #[command(flatten)]
    pub rules: RuleFlags,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub e: u64,
    #[arg(long = "max-m")]
    pub max_m: u64,
    #[command(flatten)]
    pub rules: RuleFlags,
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DeriveArgs {
    #[arg(long)]
    pub m: u64,
    #[arg(long)]
    pub e: u64,
    /// Allow the imported PL input in the second round for e = 1.
    #[arg(long)]
    pub external: bool,
    /// `human` prints an indented tree, `jsonl` one JSON document.
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    #[arg(long)]
    pub ell: u64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// dyadic, cohomology, bounds, rounds, lifting or all.
    #[arg(default_value = "all")]
    pub scope: String,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Verification(String),
    Inconsistent(String),
    Io(io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Verification(_) => 2,
            CliError::Inconsistent(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => write!(f, "error: {msg}"),
            CliError::Verification(msg) => write!(f, "verification failed: {msg}"),
            CliError::Inconsistent(msg) => write!(f, "internal inconsistency: {msg}"),
            CliError::Io(err) => write!(f, "i/o error: {err}"),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(err: io::Error) -> Self {
        CliError::Io(err)
    }
}

impl From<BoundsError> for CliError {
    fn from(err: BoundsError) -> Self {
        match err {
            BoundsError::Inconsistent { space, lower, upper } => {
                let tree = |b: &lensdim_core::Bound| {
                    b.derivation.as_ref().map(|d| d.render_text()).unwrap_or_default()
                };
                CliError::Inconsistent(format!(
                    "{space}: lower {} exceeds upper {}\n{}{}",
                    lower.dim,
                    upper.dim,
                    tree(&lower),
                    tree(&upper)
                ))
            }
            BoundsError::Engine(e) => CliError::Inconsistent(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn space(m: u64, e: u64, k: u64) -> Result<LensSpace, CliError> {
    LensSpace::new(m, e, k).map_err(|err| CliError::Usage(err.to_string()))
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Query(args) => cmd_query(args, out),
        Command::Table(args) => cmd_table(args, out),
        Command::Derive(args) => cmd_derive(args, out),
        Command::Lift(args) => cmd_lift(args, out),
        Command::Verify(args) => cmd_verify(args, out),
    }
}

pub fn query_report(args: &QueryArgs) -> Result<Report, CliError> {
    let s = space(args.m, args.e, args.k)?;
    Ok(Catalog::new(args.rules.options()).report(&s)?)
}

pub fn cmd_query(args: &QueryArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let r = query_report(args)?;
    let text = match args.format {
        Format::Human => render::report_to_human(&r, args.all),
        Format::Md => render::report_to_markdown(&r, args.all),
        Format::Csv => render::rows_to_csv(&[TableRow::from_report(&r)]),
        Format::Jsonl => {
            let mut line = if args.all {
                serde_json::to_string(&r)
            } else {
                serde_json::to_string(&TableRow::from_report(&r))
            }
            .expect("reports serialize");
            line.push('\n');
            line
        }
    };
    out.write_all(text.as_bytes())?;
    Ok(())
}

pub fn table_rows(e: u64, max_m: u64, options: ReportOptions) -> Result<Vec<TableRow>, CliError> {
    if max_m < 1 {
        return Err(CliError::Usage("--max-m must be at least 1".into()));
    }
    let mut catalog = Catalog::new(options);
    (1..=max_m)
        .map(|m| {
            let s = space(m, e, 1)?;
            Ok(TableRow::from_report(&catalog.report(&s)?))
        })
        .collect()
}

pub fn cmd_table(args: &TableArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let rows = table_rows(args.e, args.max_m, args.rules.options())?;
    out.write_all(render::render_rows(&rows, args.format).as_bytes())?;
    Ok(())
}

pub fn cmd_derive(args: &DeriveArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let s = space(args.m, args.e, 1)?;
    let options = ReportOptions { conjectural: false, external: args.external };
    let report = Catalog::new(options).report(&s)?;
    let inductive = if args.m >= 3 {
        run_rounds(args.e, args.m, RoundOptions { external: args.external })
            .map_err(|err| CliError::Inconsistent(err.to_string()))?
            .remove(&args.m)
    } else {
        None
    };
    let bound = if report.upper.is_inductive() {
        report.upper.clone()
    } else if let Some(b) = inductive {
        b
    } else {
        return Err(CliError::Usage(format!(
            "no inductive derivation for {s}; best upper bound {} comes from {}",
            report.upper.dim, report.upper.rule_id
        )));
    };
    let tree = bound.derivation.as_ref().expect("inductive bounds carry derivations");
    let checked = tree
        .replay()
        .map_err(|failure| CliError::Verification(failure.to_string()))?;
    match args.format {
        Format::Jsonl => {
            writeln!(out, "{}", tree.to_json())?;
        }
        _ => {
            writeln!(out, "{s} embeds in R^{} ({}, {})", bound.dim, bound.rule_id, bound.category.as_str())?;
            if bound.dim != report.upper.dim {
                writeln!(out, "note: best upper bound is {} from {}", report.upper.dim, report.upper.rule_id)?;
            }
            out.write_all(tree.render_text().as_bytes())?;
            writeln!(out, "replay: {checked} side conditions checked, all hold")?;
        }
    }
    Ok(())
}

pub fn cmd_lift(args: &LiftArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let ell = args.ell;
    if ell == 0 {
        return Err(CliError::Usage("--ell must be at least 1".into()));
    }
    let lambda = lambda_rule(ell);
    writeln!(out, "ell = {ell}, lambda = {lambda}")?;
    for mu in 1..=2u64 {
        let i = (1u64 << mu) * ell - 1;
        for lam in [0, lambda] {
            if lam == 1 && lambda == 0 {
                continue;
            }
            match feeding_params_with_lambda(mu, ell, lam) {
                Ok(inst) => {
                    let gate = encaje_gate(&inst)
                        .map_or_else(|| "gate closed".to_string(), |d| format!("R^{d}"));
                    writeln!(
                        out,
                        "mu = {mu}, lambda = {lam}: (n, m, d) = ({}, {}, {}), 2m + d = {} vs 4n + 1 = {}{}, {} eta_{i} -> {gate}",
                        inst.n,
                        inst.m,
                        inst.d,
                        inst.codimension_sum(),
                        4 * inst.n + 1,
                        if inst.is_boundary() { " (boundary)" } else { "" },
                        1u64 << mu
                    )?;
                }
                Err(err) => writeln!(out, "mu = {mu}, lambda = {lam}: {err}")?,
            }
        }
    }
    if ell >= 2 {
        let c = dm2_lifting_check(ell).map_err(|err| CliError::Verification(err.to_string()))?;
        writeln!(
            out,
            "carry conditions: nu1 = {}, nu2 = {}, {}",
            c.nu1,
            c.nu2,
            if c.ok { "ok" } else { "not satisfied" }
        )?;
        let level = sharper_lifting_level(ell).map_err(|err| CliError::Verification(err.to_string()))?;
        writeln!(out, "sharpest certified lifting: BO({level})")?;
    }
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let scope = Scope::parse(&args.scope)
        .ok_or_else(|| CliError::Usage(format!("unknown scope {:?}", args.scope)))?;
    let mut failed = Vec::new();
    let mut total = 0;
    for (group, outcomes) in verify::run(scope) {
        for o in outcomes {
            total += 1;
            writeln!(out, "[{group}] {o}")?;
            if !o.passed() {
                failed.push(o.name);
            }
        }
    }
    if failed.is_empty() {
        writeln!(out, "{total} checks passed")?;
        Ok(())
    } else {
        writeln!(out, "{} of {total} checks failed", failed.len())?;
        Err(CliError::Verification(failed.join(", ")))
    }
}
