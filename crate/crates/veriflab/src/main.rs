//! `pgv`: command line for the catalog, cohomology, extensions, the
//! non-inner automorphism search and the claim-check suite.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pgv_core::cohomology::{cohomology, TwoCocycle};
use pgv_core::extensions::build_extension_with_cap;
use pgv_core::gmodule::{module_from_conjugation, GModule, Side};
use pgv_core::group::{quotient, GroupTable, StandardKind, Subgroup, DEFAULT_ORDER_CAP};
use pgv_core::noninner::{descent, engine_sweep, verify_certificate, Certificate, Outcome};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use veriflab::catalog::{Catalog, CatalogEntry, Filter};
use veriflab::presentation::format_presentation;
use veriflab::suite::{run_suite, SuiteConfig};
use veriflab::Error;

#[derive(Parser)]
#[command(name = "pgv", version, about = "Finite p-group cohomology, extensions and automorphism certificates")]
struct Cli {
    /// Largest group order built from presentation files.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    order_cap: usize,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Presentation file used instead of the built-in catalog.
    #[arg(long, global = true)]
    catalog_file: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog listing.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Group invariants.
    Group {
        #[command(subcommand)]
        action: GroupAction,
    },
    /// H1 of G/N with coefficients in a module.
    H1(CohomologyArgs),
    /// H2 of G/N with coefficients in a module.
    H2(CohomologyArgs),
    /// Builds the extension of G by a kernel of rank t from a 2-cocycle.
    Extend {
        #[arg(long)]
        group: String,
        /// Kernel rank t, optionally `t,jordan` for the indecomposable rank-2 kernel.
        #[arg(long, default_value = "1")]
        kernel: String,
        /// `random` or a JSON file with a `table` field.
        #[arg(long, default_value = "random")]
        cocycle: String,
    },
    /// Searches for an outer automorphism of order p and writes a certificate.
    FindNoninner {
        #[arg(long)]
        group: String,
        #[arg(long, value_enum, default_value_t = SearchMode::Search)]
        mode: SearchMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-checks a certificate against a group.
    Verify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Runs claim checks over catalog groups.
    Check {
        /// Check id, a comma-separated list, or `all`.
        #[arg(long, default_value = "all")]
        id: String,
        /// Catalog filter, e.g. `order<=16 & nonabelian`.
        #[arg(long, default_value = "order<=64")]
        catalog: String,
        #[arg(long)]
        budget_ms: Option<u64>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        t: Vec<usize>,
        #[arg(long)]
        no_reverify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CatalogAction {
    List {
        #[arg(long, default_value = "all")]
        filter: String,
    },
}

#[derive(Subcommand)]
enum GroupAction {
    /// A catalog name or a presentation file.
    Info { group: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum SearchMode {
    Search,
    #[value(name = "paper")]
    Descent,
}

#[derive(Args)]
struct CohomologyArgs {
    #[arg(long)]
    group: String,
    /// `trivial`, `center`, `frattini`, `derived`, `whole`, or comma-separated element indices.
    #[arg(long, default_value = "trivial")]
    normal: String,
    /// `omega1-center`, `trivial[:d]` or `free[:n]`.
    #[arg(long, default_value = "omega1-center")]
    module: String,
}

type CliResult<T> = Result<T, Failure>;

enum Failure {
    Usage(String),
    Infra(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::UnknownGroup(_) | Error::UnknownCheck(_) | Error::BadFilter(_) | Error::Parse { .. } => Failure::Usage(e.to_string()),
            Error::Core(pgv_core::Error::Abelian | pgv_core::Error::NotNormal | pgv_core::Error::NotASubgroup) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Infra(other.to_string()),
        }
    }
}

impl From<pgv_core::Error> for Failure {
    fn from(e: pgv_core::Error) -> Self {
        Error::Core(e).into()
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Infra(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Infra(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn catalog(cli: &Cli) -> CliResult<Catalog> {
    match &cli.catalog_file {
        Some(path) => Ok(Catalog::load(path, cli.order_cap)?),
        None => Ok(Catalog::builtin().clone()),
    }
}

/// A catalog name, or the first group of a presentation file.
fn group_entry(cli: &Cli, name: &str) -> CliResult<CatalogEntry> {
    let cat = catalog(cli)?;
    if let Some(e) = cat.get(name) {
        return Ok(e.clone());
    }
    let path = Path::new(name);
    if path.is_file() {
        let file = Catalog::load(path, cli.order_cap)?;
        return file.entries.into_iter().next().ok_or_else(|| Failure::Usage(format!("no group in {name}")));
    }
    Err(Failure::Usage(format!("unknown group '{name}'")))
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("json value serializes")
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Catalog { action: CatalogAction::List { filter } } => {
            let cat = catalog(cli)?;
            for e in cat.select(&Filter::parse(filter)?) {
                let tags: Vec<&str> = e.tags.iter().map(String::as_str).collect();
                println!("{:<24} {:>5}  {}", e.name, e.order(), tags.join(","));
            }
            Ok(())
        }
        Command::Group { action: GroupAction::Info { group } } => group_info(cli, group),
        Command::H1(args) => cohomology_cmd(cli, args, 1),
        Command::H2(args) => cohomology_cmd(cli, args, 2),
        Command::Extend { group, kernel, cocycle } => extend(cli, group, kernel, cocycle),
        Command::FindNoninner { group, mode, out } => find_noninner(cli, group, *mode, out.as_deref()),
        Command::Verify { group, cert } => verify(cli, group, cert),
        Command::Check { id, catalog: filter, budget_ms, n, t, no_reverify, out } => {
            let cat = catalog(cli)?;
            let mut cfg = SuiteConfig::new(Filter::parse(filter)?, cli.seed);
            cfg.checks = id.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
            cfg.budget = budget_ms.map(Duration::from_millis);
            cfg.ns = n.clone();
            cfg.ts = t.clone();
            cfg.reverify = !no_reverify;
            let report = run_suite(&cat, &cfg)?;
            for (check, counts) in &report.counts {
                let cells: Vec<String> = counts.iter().map(|(s, c)| format!("{s}={c}")).collect();
                eprintln!("{check:<44} {}", cells.join(" "));
            }
            let unreproduced = report.unreproduced().len();
            if unreproduced > 0 {
                eprintln!("{unreproduced} counterexample(s) did not reproduce from their replay seed");
            }
            emit(&report.to_json(), out.as_deref())
        }
    }
}

fn group_info(cli: &Cli, name: &str) -> CliResult<()> {
    let e = group_entry(cli, name)?;
    let g = &e.group;
    let info = json!({
        "name": e.name,
        "p": g.p(),
        "order": g.order(),
        "abelian": g.is_abelian(),
        "rank": g.rank(),
        "exponent": g.exponent(),
        "center_order": g.center().order(),
        "derived_order": g.commutator_subgroup().order(),
        "frattini_order": g.frattini().order(),
        "tags": e.tags,
        "presentation": format_presentation(&e.presentation),
    });
    emit(&pretty(&info), None)
}

fn parse_normal(g: &GroupTable, text: &str) -> CliResult<Subgroup> {
    let s = match text {
        "trivial" => g.trivial(),
        "whole" => g.whole(),
        "center" => g.standard_subgroup(StandardKind::Center)?,
        "frattini" => g.standard_subgroup(StandardKind::Frattini)?,
        "derived" => g.standard_subgroup(StandardKind::Commutator)?,
        list => {
            let elems = list
                .split(',')
                .map(|x| x.trim().parse::<u32>().map_err(|_| Failure::Usage(format!("bad subgroup '{text}'"))))
                .collect::<CliResult<Vec<u32>>>()?;
            if elems.iter().any(|&x| x as usize >= g.order()) {
                return Err(Failure::Usage(format!("element out of range in '{text}'")));
            }
            g.closure(&elems)
        }
    };
    if !s.is_normal() {
        return Err(Failure::Usage(format!("'{text}' is not a normal subgroup")));
    }
    Ok(s)
}

fn rank_suffix(text: &str, prefix: &str) -> CliResult<Option<usize>> {
    match text.strip_prefix(prefix) {
        None => Ok(None),
        Some("") => Ok(Some(1)),
        Some(rest) => rest
            .strip_prefix(':')
            .and_then(|d| d.parse().ok())
            .map(Some)
            .ok_or_else(|| Failure::Usage(format!("bad module '{text}'"))),
    }
}

fn cohomology_cmd(cli: &Cli, args: &CohomologyArgs, degree: u8) -> CliResult<()> {
    let e = group_entry(cli, &args.group)?;
    let g = &e.group;
    let n = parse_normal(g, &args.normal)?;
    let module = if args.module == "omega1-center" {
        let w = g.omega1(&g.intersection(&g.centralizer(&n), &n));
        module_from_conjugation(g, &n, &w)?.module
    } else {
        let (qt, _) = quotient(g, &n)?;
        let qt = Arc::new(qt);
        if let Some(d) = rank_suffix(&args.module, "trivial")? {
            GModule::trivial(qt, d)
        } else if let Some(k) = rank_suffix(&args.module, "free")? {
            GModule::free(qt, k, Side::Right)
        } else {
            return Err(Failure::Usage(format!("unknown module '{}'", args.module)));
        }
    };
    let space = cohomology(&module, degree)?;
    let out = json!({
        "group": e.name,
        "normal": n.members(),
        "quotient_order": module.group().order(),
        "module": args.module,
        "module_dim": module.dim(),
        "degree": degree,
        "z_dim": space.z_dim(),
        "b_dim": space.b_dim(),
        "h_dim": space.h_dim(),
    });
    emit(&pretty(&out), None)
}

#[derive(Serialize, Deserialize)]
struct CocycleFile {
    table: Vec<u32>,
}

fn kernel_module(g: &Arc<GroupTable>, spec: &str) -> CliResult<GModule> {
    let (rank, jordan) = match spec.split_once(',') {
        Some((r, "jordan")) => (r, true),
        Some(_) => return Err(Failure::Usage(format!("bad kernel '{spec}'"))),
        None => (spec, false),
    };
    let t: usize = rank.trim().parse().map_err(|_| Failure::Usage(format!("bad kernel '{spec}'")))?;
    if !jordan {
        return Ok(GModule::trivial(g.clone(), t));
    }
    if t != 2 {
        return Err(Failure::Usage("the indecomposable kernel has rank 2".into()));
    }
    let p = g.p();
    let m = g.maximal_subgroups().into_iter().next().ok_or_else(|| Failure::Usage("trivial group".into()))?;
    let (qt, qm) = quotient(g, &m)?;
    let acts = g
        .elements()
        .map(|x| {
            let y = qm.image_of[x as usize];
            let chi = (0..p).find(|&k| qt.pow(1, k as u64) == y).expect("quotient is cyclic of order p");
            pgv_core::fp_linalg::FpMatrix::from_rows(p, 2, &[vec![1, chi], vec![0, 1]])
        })
        .collect();
    Ok(GModule::new(g.clone(), Side::Right, acts)?)
}

fn extend(cli: &Cli, group: &str, kernel: &str, cocycle: &str) -> CliResult<()> {
    let e = group_entry(cli, group)?;
    let g = &e.group;
    let m = kernel_module(g, kernel)?;
    let p = g.p();
    let mut f = TwoCocycle::zero(g.order(), m.dim());
    if cocycle == "random" {
        let reps = cohomology(&m, 2)?.h_cocycles();
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        for r in &reps {
            let c = rng.gen_range(0..p);
            pgv_core::fp_linalg::axpy(&mut f.table, &r.table, c, p);
        }
    } else {
        let file: CocycleFile = serde_json::from_str(&std::fs::read_to_string(cocycle)?).map_err(|e| Failure::Usage(e.to_string()))?;
        if file.table.len() != f.table.len() {
            return Err(Failure::Usage(format!("cocycle table has {} entries, expected {}", file.table.len(), f.table.len())));
        }
        f.table = file.table;
    }
    let ext = build_extension_with_cap(&m, &f, cli.order_cap)?;
    let t = &ext.total;
    let out = json!({
        "base": e.name,
        "kernel": kernel,
        "cocycle_split": pgv_core::extensions::coboundary_preimage(&m, &f).is_some(),
        "order": t.order(),
        "abelian": t.is_abelian(),
        "cyclic": t.rank() == 1,
        "rank": t.rank(),
        "exponent": t.exponent(),
        "center_order": t.center().order(),
        "cocycle": f.table,
    });
    emit(&pretty(&out), None)
}

fn find_noninner(cli: &Cli, group: &str, mode: SearchMode, out: Option<&Path>) -> CliResult<()> {
    let e = group_entry(cli, group)?;
    let g = &e.group;
    if g.is_abelian() {
        return Err(Failure::Usage(format!("{} is abelian", e.name)));
    }
    let text = match mode {
        SearchMode::Search => match engine_sweep(g)? {
            Some(c) => c.to_json(),
            None => pretty(&json!({"kind": "none", "group": e.name})),
        },
        SearchMode::Descent => {
            let outcome = descent(g)?;
            if let Outcome::Diagnostic(d) = &outcome {
                eprintln!("descent stopped at {}: {}", d.step, d.reason);
            }
            match outcome {
                Outcome::Certificate(c) => c.to_json(),
                d => serde_json::to_string_pretty(&d).expect("outcome serializes"),
            }
        }
    };
    emit(&text, out)
}

fn verify(cli: &Cli, group: &str, cert: &Path) -> CliResult<()> {
    let e = group_entry(cli, group)?;
    let c = Certificate::from_json(&std::fs::read_to_string(cert)?).map_err(|e| Failure::Usage(e.to_string()))?;
    let v = match verify_certificate(&e.group, &c) {
        Err(pgv_core::Error::FingerprintMismatch) => {
            return Err(Failure::Usage(format!("certificate was issued for a different group than {}", e.name)))
        }
        r => r?,
    };
    emit(&pretty(&json!({"group": e.name, "ok": v.ok, "transcript": v.transcript})), None)?;
    if v.ok {
        Ok(())
    } else {
        Err(Failure::Usage("certificate does not verify".into()))
    }
}
