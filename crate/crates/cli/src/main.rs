//! `disent`: exact multiple point spaces and disentanglement homology from
//! the command line.
//!
//! Exit codes: 0 success, 1 a check failed, 2 input error, 3 mathematical
//! error, 4 budget exceeded.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use disent::bounds::{
    admissible_total_degrees, check_betti, displayed_formula_degrees, first_page_mask,
    BoundsReport, BoundsVerdict, GermProfile,
};
use disent::equivariant::EquivariantError;
use disent::groebner::{GroebnerError, DEFAULT_BUDGET};
use disent::image::{analyze, diagram_from_json_str, ImageError, SpectralPage};
use disent::multipoint::{
    default_kmax, dim_check, dk_ideal, DimCheckReport, DimVerdict, MapGerm, MultipointError,
};
use disent::poly::PolyError;

#[derive(Parser)]
#[command(
    name = "disent",
    version,
    about = "Multiple point spaces and disentanglement homology, in exact arithmetic"
)]
struct Cli {
    /// Emit machine-readable JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
    /// Cap on Gröbner S-polynomial reduction steps.
    #[arg(long, global = true, value_name = "STEPS", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the divided-difference generators of the ideal of D^k.
    Divdiff {
        /// Germ document (JSON with fields n, N, components).
        germ: PathBuf,
        /// Which multiple point space (k >= 2).
        #[arg(long)]
        k: usize,
    },
    /// Check every multiple point space for the expected dimension.
    Dimcheck {
        /// Germ document (JSON with fields n, N, components).
        germ: PathBuf,
        /// Deepest level to scan; defaults to floor(N/(N-n)) + 1.
        #[arg(long)]
        kmax: Option<usize>,
    },
    /// Compute the rational homology of the image from a diagram of
    /// multiple point spaces.
    Image {
        /// Diagram document (JSON with levels and face maps).
        diagram: PathBuf,
        /// Germ profile n,N,d for the degree-bound check.
        #[arg(long, value_name = "n,N,d", value_parser = parse_profile)]
        profile: Option<GermProfile>,
    },
    /// Run every structural invariant of a diagram and report violations.
    Validate {
        /// Diagram document (JSON with levels and face maps).
        diagram: PathBuf,
    },
    /// Print the first-page support mask and admissible total degrees for a
    /// germ profile.
    Bounds { n: usize, target: usize, d: usize },
}

fn parse_profile(s: &str) -> Result<GermProfile, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers n,N,d, got `{s}`"));
    }
    let mut nums = [0usize; 3];
    for (slot, part) in nums.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|_| format!("invalid number `{}` in profile", part.trim()))?;
    }
    GermProfile::new(nums[0], nums[1], nums[2]).map_err(|e| e.to_string())
}

// ---------------------------------------------------------------------------
// Failure classification
// ---------------------------------------------------------------------------

/// A terminal failure, already sorted into its exit-code class.
enum Failure {
    /// Unreadable or malformed input (exit 2).
    Input(String),
    /// The input parses but the mathematics rejects it (exit 3).
    Math(String),
    /// A computation hit the step budget (exit 4).
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Math(_) => 3,
            Failure::Budget(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Math(m) | Failure::Budget(m) => m,
        }
    }
}

fn from_poly(err: PolyError) -> Failure {
    let msg = err.to_string();
    match err {
        PolyError::Parse(_) | PolyError::UnknownVariable(_) | PolyError::NotCentered(_) => {
            Failure::Input(msg)
        }
        _ => Failure::Math(msg),
    }
}

fn from_groebner(err: GroebnerError) -> Failure {
    match err {
        GroebnerError::BudgetExceeded { .. } => Failure::Budget(err.to_string()),
        GroebnerError::Poly(e) => from_poly(e),
    }
}

fn from_multipoint(err: MultipointError) -> Failure {
    let msg = err.to_string();
    match err {
        MultipointError::Json(_) | MultipointError::InvalidGerm(_) => Failure::Input(msg),
        MultipointError::Poly(e) => from_poly(e),
        MultipointError::Groebner(e) => from_groebner(e),
    }
}

fn from_equivariant(err: EquivariantError) -> Failure {
    let msg = err.to_string();
    match err {
        EquivariantError::Json(_)
        | EquivariantError::Shape(_)
        | EquivariantError::GroupTooLarge { .. } => Failure::Input(msg),
        _ => Failure::Math(msg),
    }
}

fn from_image(err: ImageError) -> Failure {
    let msg = err.to_string();
    match err {
        ImageError::Json(_) | ImageError::Shape(_) => Failure::Input(msg),
        ImageError::Equivariant(e) => from_equivariant(e),
        _ => Failure::Math(msg),
    }
}

// ---------------------------------------------------------------------------
// Run results
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct Check {
    name: &'static str,
    pass: bool,
}

/// The machine-readable record of one invocation; identical inputs produce
/// byte-identical serializations.
#[derive(Serialize)]
struct RunResult {
    command: String,
    inputs_digest: String,
    outputs: serde_json::Value,
    checks: Vec<Check>,
}

impl RunResult {
    fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// FNV-1a, 64 bit: a stable content fingerprint for the inputs echo.
fn digest(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    format!("{hash:016x}")
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn emit_json(result: &RunResult) {
    println!("{}", serde_json::to_string_pretty(result).expect("result serializes"));
}

fn format_set<'a>(set: impl IntoIterator<Item = &'a usize>) -> String {
    let items: Vec<String> = set.into_iter().map(usize::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn main() -> ExitCode {
    // Die quietly when stdout is a pipe that closes early (e.g. `| head`)
    // instead of panicking on the failed write.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Divdiff { germ, k } => cmd_divdiff(germ, *k, &cli),
        Command::Dimcheck { germ, kmax } => cmd_dimcheck(germ, *kmax, &cli),
        Command::Image { diagram, profile } => cmd_image(diagram, *profile, &cli),
        Command::Validate { diagram } => cmd_validate(diagram, &cli),
        Command::Bounds { n, target, d } => cmd_bounds(*n, *target, *d, &cli),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

fn cmd_divdiff(path: &Path, k: usize, cli: &Cli) -> Result<u8, Failure> {
    let text = read_input(path)?;
    let germ = MapGerm::from_json_str(&text).map_err(from_multipoint)?;
    let ideal = dk_ideal(&germ, k).map_err(from_multipoint)?;
    let generators: Vec<String> = ideal.generators.iter().map(|g| g.to_string()).collect();
    let result = RunResult {
        command: format!("divdiff {} --k {}", path.display(), k),
        inputs_digest: digest(text.as_bytes()),
        outputs: json!({ "k": k, "vars": ideal.vars, "generators": generators }),
        checks: vec![],
    };
    if cli.json {
        emit_json(&result);
    } else {
        println!("ideal of D^{k} in Q[{}]:", ideal.vars.join(", "));
        for g in &generators {
            println!("  {g}");
        }
    }
    Ok(0)
}

fn cmd_dimcheck(path: &Path, kmax: Option<usize>, cli: &Cli) -> Result<u8, Failure> {
    let text = read_input(path)?;
    let germ = MapGerm::from_json_str(&text).map_err(from_multipoint)?;
    let kmax = kmax.unwrap_or_else(|| default_kmax(germ.source_dim(), germ.target_dim()));
    let report = dim_check(&germ, kmax, cli.budget).map_err(from_multipoint)?;
    let pass = report.verdict == DimVerdict::DimensionallyCorrect;
    let result = RunResult {
        command: format!("dimcheck {} --kmax {}", path.display(), kmax),
        inputs_digest: digest(text.as_bytes()),
        outputs: json!(report),
        checks: vec![Check { name: "dimensionally_correct", pass }],
    };
    if cli.json {
        emit_json(&result);
    } else {
        print!("{}", render_dimcheck(&report));
    }
    Ok(if pass { 0 } else { 1 })
}

fn render_dimcheck(report: &DimCheckReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "germ: source dimension {}, target dimension {}, corank {}",
        report.source_dim, report.target_dim, report.corank
    );
    let _ = writeln!(out, "{:>4} {:>9} {:>7}  status", "k", "expected", "actual");
    for record in &report.records {
        if record.is_empty {
            let _ = writeln!(out, "{:>4} {:>9} {:>7}  empty", record.k, record.expected_dim, "-");
        } else {
            let actual = record
                .actual_dim
                .map_or_else(|| "?".to_string(), |d| d.to_string());
            let status = match record.matches {
                Some(true) => "ok",
                Some(false) => "MISMATCH",
                None => "unknown",
            };
            let _ = writeln!(
                out,
                "{:>4} {:>9} {:>7}  {status}",
                record.k, record.expected_dim, actual
            );
        }
    }
    for note in &report.notes {
        let _ = writeln!(out, "note: {note}");
    }
    let verdict = match report.verdict {
        DimVerdict::DimensionallyCorrect => "dimensionally correct",
        DimVerdict::NotDimensionallyCorrect => "NOT dimensionally correct",
        DimVerdict::Inconclusive => "inconclusive",
    };
    let _ = writeln!(out, "verdict: {verdict}");
    out
}

fn cmd_image(path: &Path, profile: Option<GermProfile>, cli: &Cli) -> Result<u8, Failure> {
    let text = read_input(path)?;
    let diagram = diagram_from_json_str(&text).map_err(from_image)?;
    let analysis = analyze(&diagram).map_err(from_image)?;
    let mut checks = vec![Check { name: "spectral_convergence", pass: true }];
    let bounds: Option<BoundsReport> = profile.map(|p| check_betti(&analysis.betti, &p));
    if let Some(report) = &bounds {
        checks.push(Check {
            name: "betti_within_bounds",
            pass: report.verdict == BoundsVerdict::Consistent,
        });
    }
    let command = match profile {
        Some(p) => format!(
            "image {} --profile {},{},{}",
            path.display(),
            p.n,
            p.target,
            p.d
        ),
        None => format!("image {}", path.display()),
    };
    let result = RunResult {
        command,
        inputs_digest: digest(text.as_bytes()),
        outputs: json!({ "analysis": analysis, "bounds": bounds }),
        checks,
    };
    if cli.json {
        emit_json(&result);
    } else {
        for (p, a) in analysis.column_alt_homology.iter().enumerate() {
            let dims: Vec<String> = a.iter().map(usize::to_string).collect();
            println!("A_*(D^{}) = ({})", p + 1, dims.join(", "));
        }
        println!();
        let last = analysis.pages.len() - 1;
        for (i, page) in analysis.pages.iter().enumerate() {
            print!("{}", render_page(page, i == last));
        }
        let betti: Vec<String> = analysis.betti.iter().map(usize::to_string).collect();
        println!("rational Betti numbers of the image: ({})", betti.join(", "));
        if let Some(h1) = analysis.h1_criterion {
            println!(
                "H_1 component criterion: the involution {} pieces of D^2, so A_0(D^2) {} 0",
                if h1 { "exchanges" } else { "preserves all" },
                if h1 { "!=" } else { "=" }
            );
        }
        if let Some(report) = &bounds {
            let p = &report.profile;
            println!(
                "degree bounds for (n, N, d) = ({}, {}, {}): admissible {}",
                p.n,
                p.target,
                p.d,
                format_set(&report.admissible)
            );
            for violation in &report.violations {
                println!("violation: {violation}");
            }
            let verdict = match report.verdict {
                BoundsVerdict::Consistent => "consistent",
                BoundsVerdict::Inconsistent => "INCONSISTENT",
            };
            println!("bounds verdict: {verdict}");
        }
    }
    Ok(if result.all_pass() { 0 } else { 1 })
}

/// Renders one spectral sequence page in the `×`/`•` style, with the
/// dimension next to each `•`. Columns are labelled by the level k = p + 1.
fn render_page(page: &SpectralPage, is_limit: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "E^{}{}:", page.r, if is_limit { " = E^inf" } else { "" });
    let columns = page.dims.len();
    let qmax = page.dims.iter().map(Vec::len).max().unwrap_or(1) - 1;
    out.push_str("  q\\k");
    for p in 0..columns {
        let _ = write!(out, "{:>5}", p + 1);
    }
    out.push('\n');
    for q in (0..=qmax).rev() {
        let _ = write!(out, "{:>5}", q);
        for col in &page.dims {
            let dim = col.get(q).copied().unwrap_or(0);
            if dim == 0 {
                let _ = write!(out, "{:>5}", "×");
            } else {
                let _ = write!(out, "{:>5}", format!("•{dim}"));
            }
        }
        out.push('\n');
    }
    out.push('\n');
    out
}

fn cmd_validate(path: &Path, cli: &Cli) -> Result<u8, Failure> {
    let text = read_input(path)?;
    let mut violations: Vec<String> = Vec::new();
    // Mathematical construction failures are findings here, not fatal
    // errors: validate exists to list them. Input errors stay fatal.
    let diagram = match diagram_from_json_str(&text) {
        Ok(d) => Some(d),
        Err(err) => match from_image(err) {
            Failure::Math(m) => {
                violations.push(m);
                None
            }
            fatal => return Err(fatal),
        },
    };
    if let Some(diagram) = &diagram {
        violations.extend(diagram.validate().violations);
        if violations.is_empty() {
            if let Err(err) = diagram.double_complex() {
                match from_image(err) {
                    Failure::Math(m) => violations.push(m),
                    fatal => return Err(fatal),
                }
            }
        }
    }
    let pass = violations.is_empty();
    let result = RunResult {
        command: format!("validate {}", path.display()),
        inputs_digest: digest(text.as_bytes()),
        outputs: json!({ "violations": violations }),
        checks: vec![Check { name: "structure_valid", pass }],
    };
    if cli.json {
        emit_json(&result);
    } else if pass {
        println!("all structural invariants hold");
    } else {
        for violation in &violations {
            println!("violation: {violation}");
        }
        println!("{} violation(s)", violations.len());
    }
    Ok(if pass { 0 } else { 1 })
}

fn cmd_bounds(n: usize, target: usize, d: usize, cli: &Cli) -> Result<u8, Failure> {
    let profile = GermProfile::new(n, target, d).map_err(|e| Failure::Input(e.to_string()))?;
    let mask = first_page_mask(&profile);
    let admissible = admissible_total_degrees(&profile);
    let displayed = displayed_formula_degrees(&profile);
    let result = RunResult {
        command: format!("bounds {n} {target} {d}"),
        inputs_digest: digest(format!("{n},{target},{d}").as_bytes()),
        outputs: json!({
            "profile": profile,
            "mask": mask,
            "admissible_total_degrees": admissible,
            "displayed_formula_degrees": displayed,
        }),
        checks: vec![],
    };
    if cli.json {
        emit_json(&result);
    } else {
        println!("possibly nonzero first-page entries (• possible, × forced zero):");
        print!("{}", mask.render());
        println!("admissible total degrees (totalized reading): {}", format_set(&admissible));
        println!(
            "displayed-formula reading, for comparison:      {}",
            format_set(&displayed)
        );
    }
    Ok(0)
}
