//! `nodal`: certify, verify and tabulate general-type decompositions.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use nodal_core::catalog::{self, DivisorName, WParams};
use nodal_core::certifier::{self, AuditVerdict, Certificate, CertifyOutcome, Pipeline, Regime, Status, TOOL_VERSION};
use nodal_core::feasibility::{
    self, cutoff_pg, cutoff_pgrk, nmax_formula, pg_closed_form, pg_discriminant, pg_printed_form, pg_root_floors,
    pg_subsystem, pgrk_printed,
};
use nodal_core::known::TableKind;
use nodal_core::numeric::Rational;
use nodal_core::tables::{self, Format};
use nodal_core::SpaceParams;

#[derive(Parser)]
#[command(name = "nodal", version, about = "Exact general-type certificates for moduli of nodal curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineArg {
    Weierstrass,
    Improved,
    Full,
}

impl From<PipelineArg> for Pipeline {
    fn from(p: PipelineArg) -> Pipeline {
        match p {
            PipelineArg::Weierstrass => Pipeline::Weierstrass,
            PipelineArg::Improved => Pipeline::Improved,
            PipelineArg::Full => Pipeline::Full,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum WhichTable {
    Thm2,
    Prop51,
    Prop52,
    #[value(name = "mg2n_reference")]
    Mg2nReference,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Markdown,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Identity {
    Pg,
    Pgrk,
    Trichotomy,
}

#[derive(Subcommand)]
enum Command {
    /// Certify one cell and print the certificate as JSON.
    Certify {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        n: u32,
        /// `auto`, or a comma-separated list of class names such as `Z10,F,W`.
        #[arg(long, default_value = "auto")]
        set: String,
        /// With an explicit set, only ask for effectivity (psi residual may be zero).
        #[arg(long)]
        effective_only: bool,
        #[arg(long, value_enum, default_value = "full")]
        pipeline: PipelineArg,
        /// Print the full-generator audit verdict.
        #[arg(long)]
        audit: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate file against the catalog.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Regenerate a table.
    Table {
        #[arg(long, value_enum)]
        which: WhichTable,
        #[arg(long, value_enum, default_value = "markdown")]
        format: FormatArg,
        /// Compare with the published values; exit 1 on any mismatch.
        #[arg(long)]
        compare: bool,
    },
    /// Certify a range of `n` for one genus.
    Scan {
        #[arg(long)]
        g: u32,
        #[arg(long, default_value_t = 1)]
        n_from: u32,
        #[arg(long)]
        n_to: Option<u32>,
        #[arg(long, value_enum, default_value = "full")]
        pipeline: PipelineArg,
    },
    /// Check a closed-form identity over its full test range.
    IdentityCheck {
        #[arg(long, value_enum)]
        which: Identity,
    },
    /// Print the predicted upper ends for one genus.
    Bounds {
        #[arg(long)]
        g: u32,
    },
}

/// An error the user caused, reported with exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Certify { g, n, set, effective_only, pipeline, audit, out } => {
            cmd_certify(g, n, &set, effective_only, pipeline.into(), audit, out)
        }
        Command::Verify { cert } => cmd_verify(&cert),
        Command::Table { which, format, compare } => cmd_table(which, format, compare),
        Command::Scan { g, n_from, n_to, pipeline } => cmd_scan(g, n_from, n_to, pipeline.into()),
        Command::IdentityCheck { which } => Ok(match which {
            Identity::Pg => identity_pg()?,
            Identity::Pgrk => identity_pgrk()?,
            Identity::Trichotomy => identity_trichotomy()?,
        }),
        Command::Bounds { g } => cmd_bounds(g),
    }
}

fn parse_set(set: &str) -> Result<Option<Vec<DivisorName>>> {
    if set == "auto" {
        return Ok(None);
    }
    let names = set
        .split(',')
        .map(|s| s.trim().parse::<DivisorName>().map_err(|e| usage(e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Some(names))
}

fn check_space(g: u32, n: u32) -> Result<()> {
    SpaceParams::new(g, n).map_err(|e| usage(e.to_string()))?;
    Ok(())
}

fn print_attempts(outcome: &CertifyOutcome) {
    eprintln!("route: {} (g={}, n={})", outcome.route.regime, outcome.route.g, outcome.route.n);
    for a in &outcome.attempts {
        eprintln!("  {a}");
    }
}

fn cmd_certify(
    g: u32,
    n: u32,
    set: &str,
    effective_only: bool,
    pipeline: Pipeline,
    audit: bool,
    out: Option<PathBuf>,
) -> Result<bool> {
    check_space(g, n)?;
    let outcome = match parse_set(set)? {
        None => {
            if effective_only {
                return Err(usage("--effective-only needs an explicit --set"));
            }
            certifier::certify(g, n, pipeline)?
        }
        Some(names) => certifier::certify_set(g, n, &names, !effective_only).map_err(|e| usage(e.to_string()))?,
    };
    print_attempts(&outcome);
    match outcome.route.regime {
        Regime::KnownGeneralType => {
            eprintln!("g >= {} is of general type for every n; no certificate is produced", certifier::KNOWN_GENERAL_TYPE_GENUS);
            return Ok(true);
        }
        Regime::OutOfScope => {
            eprintln!("out of scope: the pointed space is not known to be of general type here");
            return Ok(false);
        }
        _ => {}
    }
    let Some(cert) = outcome.certificate else {
        eprintln!("infeasible: no set certifies (g={g}, n={n})");
        return Ok(false);
    };
    if audit {
        match &cert.audit {
            AuditVerdict::Pass => eprintln!("audit: PASS"),
            AuditVerdict::Inconclusive(gens) => {
                let names: Vec<String> = gens.iter().map(|g| g.to_string()).collect();
                eprintln!("audit: INCONCLUSIVE on {}", names.join(" "));
            }
            AuditVerdict::Fail(gen) => eprintln!("audit: FAIL at {gen}"),
        }
    }
    let text = cert.to_json();
    match out {
        Some(path) => fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    if cert.status == Status::EffectiveOnly {
        eprintln!("effective only: K is effective but the psi residual is {}", cert.epsilon);
        return Ok(false);
    }
    Ok(!matches!(cert.audit, AuditVerdict::Fail(_)))
}

fn cmd_verify(path: &PathBuf) -> Result<bool> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))?;
    let cert = match Certificate::from_json(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("reject: {e}");
            return Ok(false);
        }
    };
    let report = certifier::verify(&cert);
    if report.ok() {
        println!("verified: (g={}, n={}) {}", cert.g, cert.n, cert.status.as_str());
        Ok(true)
    } else {
        for p in &report.problems {
            eprintln!("reject: {p}");
        }
        Ok(false)
    }
}

fn cmd_table(which: WhichTable, format: FormatArg, compare: bool) -> Result<bool> {
    let kind = match which {
        WhichTable::Thm2 => TableKind::Thm2,
        WhichTable::Prop51 => TableKind::Prop51,
        WhichTable::Prop52 => TableKind::Prop52,
        WhichTable::Mg2nReference => TableKind::Mg2nReference,
    };
    let format = match format {
        FormatArg::Markdown => Format::Markdown,
        FormatArg::Csv => Format::Csv,
    };
    let table = tables::gen_table(kind)?;
    if format == Format::Markdown {
        println!("<!-- {TOOL_VERSION} table {} -->", kind.as_str());
    }
    print!("{}", table.render(format));
    if !compare {
        return Ok(true);
    }
    if table.report.is_empty() {
        eprintln!("all cells match the published table");
        Ok(true)
    } else {
        eprint!("{}", table.report.render());
        Ok(false)
    }
}

fn cmd_scan(g: u32, n_from: u32, n_to: Option<u32>, pipeline: Pipeline) -> Result<bool> {
    let n_to = n_to.unwrap_or_else(|| if g >= 5 { tables::scan_limit(g) } else { n_from });
    if n_from < 1 || n_to < n_from {
        return Err(usage(format!("empty range {n_from}..={n_to}")));
    }
    check_space(g, n_from)?;
    println!("g,n,regime,status,set,method,epsilon,audit");
    for n in n_from..=n_to {
        let out = certifier::certify(g, n, pipeline)?;
        match &out.certificate {
            Some(c) => {
                let set: Vec<&str> = c.columns.iter().map(|c| c.name.as_str()).collect();
                println!(
                    "{g},{n},{},{},{},{},{},{}",
                    out.route.regime,
                    c.status.as_str(),
                    set.join(" "),
                    c.method.as_str(),
                    c.epsilon,
                    c.audit.label()
                );
            }
            None => {
                let status = match out.route.regime {
                    Regime::KnownGeneralType => "KNOWN",
                    Regime::OutOfScope => "OUT_OF_SCOPE",
                    _ => "INFEASIBLE",
                };
                println!("{g},{n},{},{status},,,,", out.route.regime);
            }
        }
    }
    Ok(true)
}

fn identity_pg() -> Result<bool> {
    let mut ok = true;
    let (mut cells, mut printed_off) = (0, 0);
    for g in 5..=30u32 {
        let mut last = None;
        for two_n in (g..=6 * g).filter(|t| t % 2 == 0) {
            let n = two_n / 2;
            let def = cutoff_pg(g, n)?;
            cells += 1;
            if def != pg_closed_form(g, n) {
                println!("MISMATCH g={g} n={n}: definition {def} closed form {}", pg_closed_form(g, n));
                ok = false;
            }
            if def != pg_printed_form(g, n) {
                printed_off += 1;
            }
            let feasible = feasibility::solve(&pg_subsystem(g, n)?)?.is_feasible();
            if feasible != def.is_positive() {
                println!("SIGN g={g} n={n}: cutoff {def} but subsystem feasible={feasible}");
                ok = false;
            }
            if !def.is_negative() {
                last = Some(n);
            }
        }
        if last != Some(2 * g - 4) {
            println!("BOUNDARY g={g}: largest admissible n is {last:?}, expected {}", 2 * g - 4);
            ok = false;
        }
    }
    println!("definition = -2n^2 + (2g-5)n + 4g^2 - 11g + 9 at {cells} cells (5 <= g <= 30, g <= 2n <= 6g)");
    println!("largest n with nonnegative cutoff is 2g-4 for every g");
    println!(
        "discrepancy: the published expansion with constant term g^2 - 11g + 9 disagrees with the definition at {printed_off} of {cells} cells"
    );
    Ok(ok)
}

fn identity_pgrk() -> Result<bool> {
    let mut ok = true;
    let mut count = 0;
    for g in (5..=29u32).step_by(2) {
        for n in 1..=8 * g {
            let Some(rk) = catalog::solve_rk(SpaceParams::new(g, n)?) else { continue };
            count += 1;
            let def = cutoff_pgrk(g, n, rk.r, rk.k)?;
            let printed = pgrk_printed(g, n, rk.r, rk.k);
            if def != printed {
                println!("MISMATCH g={g} n={n} r={} k={}: definition {def} printed {printed}", rk.r, rk.k);
                ok = false;
            }
        }
    }
    println!("p(5,8,2,2) = {}", cutoff_pgrk(5, 8, 2, 2)?);
    println!("definition equals the published polynomial at {count} points (g odd, 5 <= g <= 29, n <= 8g)");
    Ok(ok)
}

fn identity_trichotomy() -> Result<bool> {
    let mut ok = true;
    let mut count = 0;
    for g in 5..=40u32 {
        for n in 1..=3 * g {
            let space = SpaceParams::new(g, n)?;
            let w = catalog::w_coefficients(space, WParams::for_space(space)?);
            let diff = &w.w2 - Rational::from_int(3) * &w.w_psi;
            let expected = if 2 * n + 2 <= g {
                1
            } else if 2 * n + 1 == g || 2 * n == g {
                0
            } else {
                -1
            };
            let sign = if diff.is_positive() { 1 } else if diff.is_zero() { 0 } else { -1 };
            count += 1;
            if sign != expected {
                println!("MISMATCH g={g} n={n}: sign {sign}, expected {expected}");
                ok = false;
            }
        }
    }
    println!("w2 - 3 w_psi sign pattern holds at {count} cells (5 <= g <= 40, n <= 3g)");
    Ok(ok)
}

fn cmd_bounds(g: u32) -> Result<bool> {
    if g < 5 {
        bail!(usage(format!("bounds need g >= 5, got {g}")));
    }
    let (lo, hi) = pg_root_floors(g);
    println!("g = {g}");
    println!("2g-4 = {}", 2 * g - 4);
    println!("nmax_formula = {}", nmax_formula(g));
    println!("discriminant 36g^2-108g+97 = {}", pg_discriminant(g));
    println!("cutoff roots (2g-5 -+ sqrt(disc))/4: floors {lo} and {hi}");
    Ok(true)
}
