use anglekit::angle::CensusMode;
use anglekit::catalog::{self, CatalogEntry, VerifyOutcome};
use anglekit::census::{census, Configuration};
use anglekit::report::Certification;
use anglekit::search::{self, ExtensionGrid, FalsifyOptions, SearchUniverse};
use anglekit_cli::config::{load_config, ConfigFile};
use anglekit_cli::{render, report};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

/// Exit status for a census the precision budget could not settle.
const UNRESOLVED: u8 = 2;

#[derive(Parser)]
#[command(name = "anglekit", version, about = "Count distinct angles in planar point sets")]
struct Cli {
    /// Worker threads for searches and numeric censuses (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Census one configuration.
    Count {
        #[command(flatten)]
        source: Source,
        /// Count the zero angle of collinear triples as well.
        #[arg(long)]
        include_zero: bool,
        /// Write a JSON report here.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Re-census catalog entries, or a config file with declared angles, and
    /// compare against the declaration.
    Verify {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    #[command(subcommand)]
    Search(SearchCommand),
    /// Draw a configuration as SVG.
    Render {
        #[command(flatten)]
        source: Source,
        #[arg(short, long, value_name = "PATH")]
        output: PathBuf,
        /// Mark one witness angle per distinct value.
        #[arg(long)]
        annotate_angles: bool,
    },
    /// Known bounds on the largest set with at most k distinct angles.
    Bounds {
        #[arg(long, conflicts_with = "range", required_unless_present = "range")]
        k: Option<i64>,
        /// Inclusive range `A..B`.
        #[arg(long)]
        range: Option<String>,
        /// Print an aligned table.
        #[arg(long)]
        table: bool,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// List catalog names, or export one entry as a config file.
    Catalog {
        /// Entry to export; lists all names when omitted.
        name: Option<String>,
        #[arg(short, long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum SearchCommand {
    /// Points that can join a base configuration within k angles.
    Extend {
        #[arg(long, value_name = "NAME")]
        base: Option<String>,
        #[arg(long, value_name = "PATH", conflicts_with = "base", required_unless_present = "base")]
        config: Option<PathBuf>,
        #[arg(long)]
        k: usize,
        /// Grid steps per base diameter.
        #[arg(long, default_value_t = 200)]
        resolution: u32,
        /// Residual at which refinement stops.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Largest subset of a universe with at most k angles.
    Subset {
        #[arg(long)]
        universe: String,
        #[arg(long)]
        k: usize,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Seeded search for convex quadrilaterals with three angles outside
    /// the known families.
    Falsify {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 3000)]
        max_evals: usize,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Best subset sizes for k = 1..kmax against the 2⌊k/2⌋+3 conjecture.
    Probe {
        #[arg(long)]
        kmax: usize,
        /// Universe descriptors; `ngon_center:4..16` expands to a range.
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        universe: Vec<String>,
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Config file in the anglekit-config/1 format.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Catalog entry such as `pentagon` or `lb:5`; `verify` also takes `all`.
    #[arg(long, value_name = "NAME")]
    catalog: Option<String>,
}

impl Source {
    fn params(&self) -> Value {
        json!({ "config": self.config.as_ref().map(|p| p.display().to_string()), "catalog": self.catalog })
    }

    fn load(&self) -> Result<Configuration, String> {
        match (&self.config, &self.catalog) {
            (Some(path), _) => load_config(path).map_err(|e| e.to_string()),
            (None, Some(name)) => catalog::get(name).map(|e| e.config).map_err(|e| e.to_string()),
            (None, None) => unreachable!("clap requires a source"),
        }
    }
}

fn write_json(path: Option<&Path>, report: Value) -> Result<(), String> {
    match path {
        Some(p) => report::write(p, &report).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => Ok(()),
    }
}

fn count(source: &Source, include_zero: bool, json_out: Option<&Path>) -> Result<u8, String> {
    let cfg = source.load()?;
    let mode = if include_zero { CensusMode::IncludeZero } else { CensusMode::ExcludeZero };
    let r = census(&cfg, mode).map_err(|e| e.to_string())?;
    println!("{}", r.summary());
    let mut params = source.params();
    params["include_zero"] = json!(include_zero);
    write_json(json_out, report::envelope("count", params, None, report::census(&r)))?;
    Ok(if r.certification == Certification::Unresolved { UNRESOLVED } else { 0 })
}

fn verify(source: &Source, json_out: Option<&Path>) -> Result<u8, String> {
    let entries: Vec<CatalogEntry> = match (&source.config, source.catalog.as_deref()) {
        (None, Some("all")) => catalog::all(),
        (None, Some(name)) => vec![catalog::get(name).map_err(|e| e.to_string())?],
        (Some(path), _) => {
            let cfg = load_config(path).map_err(|e| e.to_string())?;
            let declared = cfg.declared().ok_or("config has no `declared` angles to verify against")?.to_vec();
            vec![CatalogEntry {
                name: cfg.name().map_or_else(|| path.display().to_string(), str::to_string),
                params: Vec::new(),
                declared_count: declared.len(),
                declared: Some(declared),
                config: cfg,
                note: "",
            }]
        }
        (None, None) => unreachable!("clap requires a source"),
    };
    let outcomes: Vec<(VerifyOutcome, usize)> =
        entries.iter().map(|e| (catalog::verify_entry(e), e.config.len())).collect();
    let width = outcomes.iter().map(|(o, _)| o.name.len()).max().unwrap_or(0);
    let mut failed = 0;
    let mut only_unresolved = true;
    for (o, n) in &outcomes {
        match &o.report {
            Ok(r) if o.passed => {
                let noun = if r.count.exact() == Some(1) { "angle" } else { "angles" };
                println!("ok    {:width$}  {n} points, {} distinct {noun}, {}", o.name, r.count, r.certification);
            }
            _ => {
                failed += 1;
                let unresolved = matches!(&o.report, Ok(r) if r.certification == Certification::Unresolved);
                only_unresolved &= unresolved;
                println!("FAIL  {:width$}  {}", o.name, o.detail);
            }
        }
    }
    if outcomes.len() > 1 {
        println!("{} of {} entries verified", outcomes.len() - failed, outcomes.len());
    }
    let payload = json!({
        "entries": outcomes.iter().map(|(o, n)| report::verify(o, *n)).collect::<Vec<_>>(),
        "failed": failed,
    });
    write_json(json_out, report::envelope("verify", source.params(), None, payload))?;
    Ok(match failed {
        0 => 0,
        _ if only_unresolved => UNRESOLVED,
        _ => 1,
    })
}

/// Expands `name:A..B` into `name:A`, ..., `name:B`.
fn expand_universes(descs: &[String]) -> Result<Vec<SearchUniverse>, String> {
    let mut out = Vec::new();
    for desc in descs {
        match desc.split_once(':').and_then(|(kind, arg)| Some((kind, arg.split_once("..")?))) {
            Some((kind, (a, b))) => {
                let bad = || format!("bad universe range `{desc}`");
                let a: u32 = a.trim().parse().map_err(|_| bad())?;
                let b: u32 = b.trim().parse().map_err(|_| bad())?;
                if a > b {
                    return Err(bad());
                }
                for n in a..=b {
                    out.push(format!("{kind}:{n}").parse().map_err(|e: search::UniverseError| e.to_string())?);
                }
            }
            None => out.push(desc.parse().map_err(|e: search::UniverseError| e.to_string())?),
        }
    }
    Ok(out)
}

fn search_cmd(cmd: &SearchCommand) -> Result<u8, String> {
    match cmd {
        SearchCommand::Extend { base, config, k, resolution, tol, json } => {
            let cfg = match (base, config) {
                (Some(name), _) => catalog::get(name).map_err(|e| e.to_string())?.config,
                (None, Some(path)) => load_config(path).map_err(|e| e.to_string())?,
                (None, None) => unreachable!("clap requires a base"),
            };
            let mut grid = ExtensionGrid::default_for(&cfg);
            grid.step *= 200.0 / f64::from((*resolution).max(1));
            let r = search::extend_search(&cfg, *k, &grid, *tol, true).map_err(|e| e.to_string())?;
            println!("base census: {}", r.base_census.summary());
            println!("grid hits: {}, certified points: {}, uncertified: {}", r.grid_hits, r.certified.len(), r.uncertified.len());
            for (i, p) in r.certified.iter().enumerate() {
                println!("  [{i}] {}  ({:?}) -> {}", p.point, p.status, p.census.summary());
            }
            let size = r.max_compatible_sets.first().map_or(0, Vec::len);
            println!("max compatible: {size} {:?}", r.max_compatible_sets);
            let params = json!({ "base": base, "config": config.as_ref().map(|p| p.display().to_string()),
                                 "k": k, "resolution": resolution, "tol": tol });
            write_json(json.as_deref(), report::envelope("search extend", params, None, report::extension(&r)))?;
        }
        SearchCommand::Subset { universe, k, json } => {
            let u: SearchUniverse = universe.parse().map_err(|e: search::UniverseError| e.to_string())?;
            let r = search::subset_search(&u, *k).map_err(|e| e.to_string())?;
            println!("{}: best {} with at most {} angles ({} nodes)", r.universe, r.best_size, r.k, r.nodes_explored);
            for w in &r.witnesses {
                println!("  {:?}  {}", w.indices, w.report.summary());
            }
            let params = json!({ "universe": universe, "k": k });
            write_json(json.as_deref(), report::envelope("search subset", params, None, report::subset(&r)))?;
        }
        SearchCommand::Falsify { trials, seed, tol, max_evals, json } => {
            let opts = FalsifyOptions { trials: *trials, seed: *seed, tol: *tol, max_evals: *max_evals };
            let r = search::falsify_quad_lemma(&opts);
            println!("{trials} trials, seed {seed}, tol {tol:e}");
            println!("  rectangle              {}", r.rectangles);
            println!("  twin equilateral       {}", r.twin_equilateral);
            println!("  pentagon minus vertex  {}", r.pentagon_minus_vertex);
            println!("  four or more angles    {}", r.stays_above);
            println!("  degenerate             {}", r.degenerate);
            println!("  counterexamples        {}", r.counterexamples.len());
            let params = json!({ "trials": trials, "tol": tol, "max_evals": max_evals });
            write_json(json.as_deref(), report::envelope("search falsify", params, Some(*seed), report::falsify(&r)))?;
            if !r.counterexamples.is_empty() {
                return Ok(1);
            }
        }
        SearchCommand::Probe { kmax, universe, json } => {
            if *kmax < 1 {
                return Err("--kmax must be at least 1".into());
            }
            let us = expand_universes(universe)?;
            let rows = search::conjecture_probe(*kmax, &us).map_err(|e| e.to_string())?;
            println!("{:>3}  {:>5}  {:>11}  {:>5}  {:>5}  {:>5}  {:<10}  universe", "k", "best", "conjectured", "lower", "upper", "exact", "status");
            for r in &rows {
                let exact = r.exact.map_or("-".to_string(), |e| e.to_string());
                println!(
                    "{:>3}  {:>5}  {:>11}  {:>5}  {:>5}  {:>5}  {:<10}  {}",
                    r.k, r.best, r.conjectured, r.lower, r.upper, exact, report::probe_status(r.status), r.universe
                );
            }
            let params = json!({ "kmax": kmax, "universes": us.iter().map(|u| u.to_string()).collect::<Vec<_>>() });
            write_json(json.as_deref(), report::envelope("search probe", params, None, report::probe(&rows)))?;
        }
    }
    Ok(0)
}

fn render_cmd(source: &Source, output: &Path, annotate: bool) -> Result<u8, String> {
    let cfg = source.load()?;
    let r = if annotate { Some(census(&cfg, CensusMode::ExcludeZero).map_err(|e| e.to_string())?) } else { None };
    let svg = render::render(&cfg.points_f64(), r.as_ref());
    std::fs::write(output, svg).map_err(|e| format!("cannot write {}: {e}", output.display()))?;
    Ok(0)
}

fn parse_range(s: &str) -> Result<(i64, i64), String> {
    let bad = || format!("bad range `{s}`, expected A..B");
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

fn bounds_cmd(k: Option<i64>, range: Option<&str>, table: bool, json_out: Option<&Path>) -> Result<u8, String> {
    let (a, b) = match (k, range) {
        (Some(k), _) => (k, k),
        (None, Some(r)) => parse_range(r)?,
        (None, None) => unreachable!("clap requires --k or --range"),
    };
    if a < 1 || b < a || b > i64::from(u32::MAX) {
        return Err(format!("k must satisfy 1 ≤ A ≤ B, got {a}..{b}"));
    }
    let rows: Vec<_> = (a..=b).map(|k| catalog::bounds(k as u32).expect("k ≥ 1")).collect();
    let exact = |e: Option<u64>| e.map_or("-".to_string(), |v| v.to_string());
    if table {
        println!("{:>4}  {:>5}  {:>5}  {:>5}", "k", "lower", "upper", "exact");
        for r in &rows {
            println!("{:>4}  {:>5}  {:>5}  {:>5}", r.k, r.lower, r.upper, exact(r.exact));
        }
    } else {
        for r in &rows {
            println!("k = {}: lower {}, upper {}, exact {}", r.k, r.lower, r.upper, exact(r.exact));
        }
    }
    let params = json!({ "k": k, "range": range });
    let payload = json!({ "rows": rows.iter().map(report::bounds).collect::<Vec<_>>() });
    write_json(json_out, report::envelope("bounds", params, None, payload))?;
    Ok(0)
}

fn catalog_cmd(name: Option<&str>, output: Option<&Path>) -> Result<u8, String> {
    let Some(name) = name else {
        for n in catalog::FIXED_NAMES {
            println!("{n}");
        }
        for (n, args) in catalog::PARAM_NAMES {
            println!("{n}:{args}");
        }
        return Ok(0);
    };
    let entry = catalog::get(name).map_err(|e| e.to_string())?;
    let text = ConfigFile::from_configuration(&entry.config).to_json() + "\n";
    match output {
        Some(p) => std::fs::write(p, text).map_err(|e| format!("cannot write {}: {e}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8, String> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())?;
    }
    match &cli.command {
        Command::Count { source, include_zero, json } => count(source, *include_zero, json.as_deref()),
        Command::Verify { source, json } => verify(source, json.as_deref()),
        Command::Search(cmd) => search_cmd(cmd),
        Command::Render { source, output, annotate_angles } => render_cmd(source, output, *annotate_angles),
        Command::Bounds { k, range, table, json } => bounds_cmd(*k, range.as_deref(), *table, json.as_deref()),
        Command::Catalog { name, output } => catalog_cmd(name.as_deref(), output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors share exit 1 with other input errors; 2 is
            // reserved for unresolved censuses.
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
