//! Command-line front end: bounds lookup, constructions, verification,
//! exhaustive search, the assignment solver and reproduction tables.
//!
//! Exit codes: 0 success, 1 mathematical failure (invalid family, table
//! mismatch, failed self-check), 2 usage or input error.

pub mod tables;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use isect::assignment::{solve_kappa_ilp_with, SolveOutcome, SolverBudget, StartBound};
use isect::bounds::{best_bounds, BoundOptions, BoundParams, BoundReport};
use isect::constructions::Construction;
use isect::oracle::{oracle_kappa, oracle_mu, OracleResult, SearchBudget};
use isect::{read_family, verify_capped, write_family, FamilyFormat, IntersectionLaw, SetFamily};

pub use tables::{run_suite, Suite, Table};

/// Environment variable overriding the default oracle node budget.
pub const BUDGET_ENV: &str = "ISECT_BUDGET_NODES";

#[derive(Debug, Parser)]
#[command(
    name = "isect",
    version,
    about = "Uniform L-intersecting families: bounds, constructions, search"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tightest known interval for kappa or mu.
    Bound(BoundArgs),
    /// Emit a family from one of the explicit constructions.
    Construct(ConstructArgs),
    /// Check a family file against a law.
    Verify(VerifyArgs),
    /// Exhaustive search for kappa (with --m) or mu (with --k).
    Search(SearchArgs),
    /// Exact assignment optimum for an l-intersecting m-family on [n].
    Solve(SolveArgs),
    /// Reproduce a grid of known values and report PASS or FAIL.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QuantityArg {
    Kappa,
    Mu,
}

#[derive(Debug, Args)]
struct LawArgs {
    /// `exact:1,3`, `atmost:2` or `positive`.
    #[arg(long, value_parser = parse_law)]
    law: IntersectionLaw,
    /// Number of members whose common intersection the law constrains.
    #[arg(long, default_value_t = 2)]
    t: usize,
}

impl LawArgs {
    fn law(&self) -> Result<IntersectionLaw> {
        Ok(self.law.clone().with_t(self.t)?)
    }
}

fn parse_law(s: &str) -> std::result::Result<IntersectionLaw, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[arg(long)]
    quantity: QuantityArg,
    #[arg(long)]
    n: u64,
    /// Number of members (kappa).
    #[arg(long)]
    m: Option<u64>,
    /// Member size (mu).
    #[arg(long)]
    k: Option<u64>,
    #[command(flatten)]
    law: LawArgs,
    /// Also run the assignment solver.
    #[arg(long)]
    solver: bool,
    /// Also run exhaustive search.
    #[arg(long)]
    oracle: bool,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Sunflower,
    Curves,
    Strip,
    Plane,
    Trim,
    TwiseCore,
    TwiseDisjoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

impl From<FormatArg> for FamilyFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => FamilyFormat::Json,
            FormatArg::Text => FamilyFormat::Text,
        }
    }
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(long)]
    kind: Kind,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    l: Option<u64>,
    #[arg(long)]
    p: Option<u64>,
    /// Strip width removed (strip) or wiseness (twise kinds).
    #[arg(long)]
    t: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    /// Core size `l_s` (twise kinds).
    #[arg(long)]
    ls: Option<u64>,
    /// Output file; a provenance record is written next to it.
    #[arg(long)]
    out: Option<PathBuf>,
    /// File format; defaults to text for `.txt` paths and JSON otherwise.
    #[arg(long)]
    format: Option<FormatArg>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    path: PathBuf,
    #[command(flatten)]
    law: LawArgs,
    /// Largest number of violations listed.
    #[arg(long, default_value_t = isect::family::DEFAULT_VIOLATION_CAP)]
    cap: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    law: LawArgs,
    /// Require pairwise distinct members (kappa only).
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    distinct: bool,
    /// Node budget; overrides the environment default.
    #[arg(long)]
    budget: Option<u64>,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StartArg {
    Fractional,
    Counting,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[arg(long)]
    l: u64,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = StartArg::Fractional)]
    start: StartArg,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long)]
    json: bool,
}

/// Oracle budget from an explicit flag, else the environment, else the
/// library default.
pub fn search_budget(flag: Option<u64>) -> Result<SearchBudget> {
    if let Some(nodes) = flag {
        return Ok(SearchBudget::nodes(nodes));
    }
    match std::env::var(BUDGET_ENV) {
        Ok(raw) => {
            let nodes = raw
                .trim()
                .parse()
                .with_context(|| format!("{BUDGET_ENV}={raw:?} is not a node count"))?;
            Ok(SearchBudget::nodes(nodes))
        }
        Err(_) => Ok(SearchBudget::default()),
    }
}

/// Parses `args` (program name first) and runs the command. Help and
/// version requests exit 0; parse failures exit 2.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{rendered}")
            } else {
                write!(err, "{rendered}")
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) if is_broken_pipe(&e) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            2
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Bound(a) => cmd_bound(a, out),
        Command::Construct(a) => cmd_construct(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Search(a) => cmd_search(a, out),
        Command::Solve(a) => cmd_solve(a, out),
        Command::Table(a) => cmd_table(a, out),
    }
}

fn print_json(out: &mut dyn Write, value: &Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value)?)?;
    Ok(())
}

fn cmd_bound(a: BoundArgs, out: &mut dyn Write) -> Result<i32> {
    let law = a.law.law()?;
    let params = match (a.quantity, a.m, a.k) {
        (QuantityArg::Kappa, Some(m), None) => BoundParams::Kappa { n: a.n, m, law },
        (QuantityArg::Mu, None, Some(k)) => BoundParams::Mu { n: a.n, k, law },
        (QuantityArg::Kappa, _, _) => bail!("kappa takes --m and not --k"),
        (QuantityArg::Mu, _, _) => bail!("mu takes --k and not --m"),
    };
    let options = BoundOptions {
        solver: a.solver.then(SolverBudget::default),
        oracle: if a.oracle { Some(search_budget(a.budget)?) } else { None },
    };
    let report = best_bounds(&params, &options)?;
    if a.json {
        print_json(out, &report.to_json())?;
    } else {
        write_report(out, &report)?;
    }
    Ok(if report.diagnostics.is_empty() { 0 } else { 1 })
}

fn write_report(out: &mut dyn Write, report: &BoundReport) -> Result<()> {
    let name = match &report.params {
        BoundParams::Kappa { n, m, law } => format!("kappa n={n} m={m} law={law} t={}", law.t()),
        BoundParams::Mu { n, k, law } => format!("mu n={n} k={k} law={law} t={}", law.t()),
    };
    writeln!(out, "{name}")?;
    for item in &report.items {
        let tag = if item.heuristic { " [heuristic, not used]" } else { "" };
        let (dir, value, cite) = (item.dir.to_string(), item.value.to_string(), item.cite.to_string());
        writeln!(out, "  {dir:<5} {value:>6}  {cite:<24} {}{tag}", item.note)?;
    }
    writeln!(out, "lower: {}", report.lower)?;
    writeln!(out, "upper: {}", report.upper)?;
    match report.exact {
        Some(v) => writeln!(out, "exact: {v}")?,
        None => writeln!(out, "exact: unknown")?,
    }
    for d in &report.diagnostics {
        writeln!(out, "diagnostic: {d}")?;
    }
    Ok(())
}

fn need(value: Option<u64>, name: &str, kind: &str) -> Result<u64> {
    value.ok_or_else(|| anyhow!("--kind {kind} needs --{name}"))
}

fn construction(a: &ConstructArgs) -> Result<Construction> {
    let name = a
        .kind
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    let get = |v: Option<u64>, flag: &str| need(v, flag, &name);
    let us = |v: u64| usize::try_from(v).context("parameter too large");
    Ok(match a.kind {
        Kind::Sunflower => Construction::Sunflower {
            m: us(get(a.m, "m")?)?,
            l: us(get(a.l, "l")?)?,
        },
        Kind::Curves => Construction::Curves {
            p: get(a.p, "p")?,
            l: get(a.l, "l")?,
        },
        Kind::Strip => Construction::Strip {
            p: get(a.p, "p")?,
            t: get(a.t, "t")?,
        },
        Kind::Plane => Construction::Plane { q: get(a.q, "q")? },
        Kind::Trim => Construction::Trim {
            q: get(a.q, "q")?,
            n: get(a.n, "n")?,
        },
        Kind::TwiseCore | Kind::TwiseDisjoint => {
            let (n, m, t, ls) = (
                us(get(a.n, "n")?)?,
                us(get(a.m, "m")?)?,
                us(get(a.t, "t")?)?,
                us(get(a.ls, "ls")?)?,
            );
            if a.kind == Kind::TwiseCore {
                Construction::TwiseSharedCore { n, m, t, ls }
            } else {
                Construction::TwiseDisjointCores { n, m, t, ls }
            }
        }
    })
}

/// Path of the provenance record written next to a family file.
pub fn provenance_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(OsString::from).unwrap_or_default();
    name.push(".provenance.json");
    path.with_file_name(name)
}

fn cmd_construct(a: ConstructArgs, out: &mut dyn Write) -> Result<i32> {
    let construction = construction(&a)?;
    let (family, provenance) = construction.build()?;
    let law = construction.law();
    let report = verify_capped(&family, &law, 10);
    if !report.valid {
        writeln!(
            out,
            "internal error: {} output fails {law} (t = {})",
            construction.name(),
            law.t()
        )?;
        for v in &report.violations {
            writeln!(out, "  {v}")?;
        }
        return Ok(1);
    }
    let provenance = serde_json::to_value(&provenance)?;
    let format = a.format.map(FamilyFormat::from).unwrap_or_else(|| match &a.out {
        Some(p) if p.extension().is_some_and(|e| e == "txt") => FamilyFormat::Text,
        _ => FamilyFormat::Json,
    });
    let summary = format!(
        "{} members of size {} on [{}]",
        family.len(),
        family.uniform_size().map_or("-".to_string(), |k| k.to_string()),
        family.n()
    );
    match &a.out {
        Some(path) => {
            fs::write(path, write_family(&family, format)).with_context(|| format!("writing {}", path.display()))?;
            let prov_path = provenance_path(path);
            fs::write(&prov_path, format!("{}\n", serde_json::to_string_pretty(&provenance)?))
                .with_context(|| format!("writing {}", prov_path.display()))?;
            if a.json {
                print_json(out, &json!({"path": path, "provenance": provenance}))?;
            } else {
                writeln!(out, "wrote {summary} to {}", path.display())?;
            }
        }
        None if a.json => print_json(out, &json!({"family": family.to_json(), "provenance": provenance}))?,
        None => {
            if format == FamilyFormat::Text {
                writeln!(out, "# {}", serde_json::to_string(&provenance)?)?;
            }
            out.write_all(&write_family(&family, format))?;
        }
    }
    Ok(0)
}

fn read_path(path: &Path) -> Result<SetFamily> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    read_family(&bytes).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_verify(a: VerifyArgs, out: &mut dyn Write) -> Result<i32> {
    let family = read_path(&a.path)?;
    let law = a.law.law()?;
    let report = verify_capped(&family, &law, a.cap);
    if a.json {
        print_json(out, &serde_json::to_value(&report)?)?;
    } else {
        writeln!(
            out,
            "{}: {}",
            a.path.display(),
            if report.valid { "valid" } else { "invalid" }
        )?;
        writeln!(
            out,
            "members: {}, ground: {}, uniform size: {}, law: {law}, t = {}",
            family.len(),
            family.n(),
            report.uniform_k.map_or("none".to_string(), |k| k.to_string()),
            law.t()
        )?;
        for v in &report.violations {
            writeln!(out, "  {v}")?;
        }
        if report.truncated {
            writeln!(out, "  ... further violations omitted")?;
        }
    }
    Ok(if report.valid { 0 } else { 1 })
}

fn cmd_search(a: SearchArgs, out: &mut dyn Write) -> Result<i32> {
    let law = a.law.law()?;
    if !(1..=isect::oracle::MAX_GROUND).contains(&a.n) {
        bail!("--n must lie in 1..={}", isect::oracle::MAX_GROUND);
    }
    let mut budget = search_budget(a.budget)?;
    if let Some(secs) = a.time_limit {
        budget.time_limit = Some(Duration::try_from_secs_f64(secs).context("--time-limit")?);
    }
    let (label, result) = match (a.m, a.k) {
        (Some(0), None) => bail!("--m must be positive"),
        (Some(m), None) => (
            format!("kappa n={} m={m}", a.n),
            oracle_kappa(a.n, m, &law, a.distinct, budget),
        ),
        (None, Some(k)) => (format!("mu n={} k={k}", a.n), oracle_mu(a.n, k, &law, budget)),
        _ => bail!("search takes exactly one of --m (kappa) and --k (mu)"),
    };
    if a.json {
        print_json(out, &result.to_json())?;
    } else {
        write_search(out, &label, &law, &result)?;
    }
    Ok(0)
}

fn write_search(out: &mut dyn Write, label: &str, law: &IntersectionLaw, r: &OracleResult) -> Result<()> {
    writeln!(out, "{label} law={law} t={}", law.t())?;
    let value = r.value.map_or("-inf".to_string(), |v| v.to_string());
    if r.exact {
        writeln!(out, "value: {value}")?;
    } else {
        let upper = r.upper.map_or("unknown".to_string(), |u| u.to_string());
        writeln!(out, "budget exhausted: best found {value}, upper bound {upper}")?;
    }
    if let Some(w) = &r.witness {
        writeln!(out, "witness:")?;
        for set in w.sets() {
            writeln!(
                out,
                "  {}",
                set.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
            )?;
        }
    }
    writeln!(out, "nodes: {}, millis: {}", r.nodes, r.millis)?;
    Ok(())
}

fn cmd_solve(a: SolveArgs, out: &mut dyn Write) -> Result<i32> {
    let mut budget = SolverBudget {
        start: match a.start {
            StartArg::Fractional => StartBound::Fractional,
            StartArg::Counting => StartBound::Counting,
        },
        ..SolverBudget::default()
    };
    if let Some(nodes) = a.budget {
        budget.max_nodes = nodes;
    }
    let outcome = solve_kappa_ilp_with(a.l, a.m, a.n, budget)?;
    let json = match &outcome {
        SolveOutcome::Optimal { value, witness, nodes } => json!({
            "status": "optimal", "value": value, "nodes": nodes,
            "witness": witness.to_json(Some(value)),
        }),
        SolveOutcome::Infeasible => json!({"status": "infeasible", "value": null}),
        SolveOutcome::Unknown { lower, upper, nodes } => json!({
            "status": "unknown", "value": null, "lower": lower, "upper": upper, "nodes": nodes,
        }),
    };
    if a.json {
        print_json(out, &json)?;
        return Ok(0);
    }
    match outcome {
        SolveOutcome::Optimal { value, witness, nodes } => {
            writeln!(out, "{value}")?;
            let nonzero: Vec<String> = (0..witness.values().len())
                .filter(|&mask| *witness.get(mask) != 0)
                .map(|mask| {
                    format!(
                        "{}={}",
                        isect::assignment::subset_label(mask, witness.m()),
                        witness.get(mask)
                    )
                })
                .collect();
            writeln!(out, "witness: {}", nonzero.join(" "))?;
            writeln!(out, "nodes: {nodes}")?;
        }
        SolveOutcome::Infeasible => writeln!(out, "infeasible (n < l)")?,
        SolveOutcome::Unknown { lower, upper, nodes } => {
            writeln!(out, "budget exhausted after {nodes} nodes: {lower} <= value <= {upper}")?;
        }
    }
    Ok(0)
}

fn cmd_table(a: TableArgs, out: &mut dyn Write) -> Result<i32> {
    let table = run_suite(a.suite, search_budget(a.budget)?);
    if a.json {
        print_json(out, &table.to_json())?;
    } else {
        write!(out, "{}", table.render())?;
    }
    Ok(if table.passed() { 0 } else { 1 })
}
