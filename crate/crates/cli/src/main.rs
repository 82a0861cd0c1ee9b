mod cache;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use posetsat::constructions::{self, ConstructionResult, IsolatedVariant};
use posetsat::saturation::{self, ProjectionRule, SaturationReport};
use posetsat::search::{self, SearchConfig, SearchMode, SearchOutcome};
use posetsat::suite::{self, Scale};
use posetsat::{CopyMode, Error, GroundSet, Poset, SetFamily};
use serde_json::json;

use crate::cache::Cache;

const DEFAULT_CACHE: &str = ".posetsat-cache.jsonl";

#[derive(Parser)]
#[command(name = "posetsat", version, about = "Poset saturation in the Boolean lattice")]
struct Cli {
    /// Worker threads for search and probe scans.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit an explicit family as Family JSON with a provenance header.
    Construct(ConstructArgs),
    /// Check a family against a saturation notion.
    Verify(VerifyArgs),
    /// Exact minimum size search.
    Search(SearchArgs),
    /// Grid of searches as CSV.
    Tabulate(TabulateArgs),
    /// Run the acceptance battery.
    PaperCheck(PaperCheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum ConstructName {
    WedgeDiamond,
    TwoC2,
    Vee,
    AntichainExternal,
    IsolatedVertex,
    IsolatedC2,
    RelaxedProjective,
    Kst,
    KstLift,
}

#[derive(clap::Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    name: ConstructName,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    s: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    /// Pattern for the constructions that take one.
    #[arg(long)]
    poset: Option<String>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyMode {
    Sat,
    SatStar,
    Projective,
    RelaxedProjective,
    External,
    Almost,
}

#[derive(Clone, Copy, ValueEnum)]
enum RuleArg {
    Strict,
    Relaxed,
}

impl From<RuleArg> for ProjectionRule {
    fn from(r: RuleArg) -> Self {
        match r {
            RuleArg::Strict => ProjectionRule::Strict,
            RuleArg::Relaxed => ProjectionRule::Relaxed,
        }
    }
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    mode: VerifyMode,
    /// Poset name, inline Poset JSON, or a path to a Poset JSON file.
    #[arg(long)]
    poset: String,
    /// Family JSON file (`F_1` in almost mode).
    #[arg(long)]
    family: PathBuf,
    /// Upper level `F_2` for almost mode.
    #[arg(long)]
    upper: Option<PathBuf>,
    /// Expected inner dimension; rejected when the family disagrees.
    #[arg(long)]
    n: Option<usize>,
    /// Anchor as a JSON element list; defaults to the family's `A`.
    #[arg(long)]
    anchor: Option<String>,
    #[arg(long, value_enum, default_value = "strict")]
    rule: RuleArg,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Sat,
    SatStar,
    Projective,
    RelaxedProjective,
    External,
}

impl From<ModeArg> for SearchMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Sat => SearchMode::Sat,
            ModeArg::SatStar => SearchMode::SatStar,
            ModeArg::Projective => SearchMode::Projective,
            ModeArg::RelaxedProjective => SearchMode::RelaxedProjective,
            ModeArg::External => SearchMode::External,
        }
    }
}

#[derive(clap::Args)]
struct CacheArgs {
    /// Cache file (JSON lines).
    #[arg(long, env = "POSETSAT_CACHE", default_value = DEFAULT_CACHE)]
    cache: PathBuf,
    #[arg(long)]
    no_cache: bool,
}

#[derive(clap::Args)]
struct CapArgs {
    /// External coordinates allowed (mode default when omitted).
    #[arg(long)]
    cap: Option<usize>,
    #[arg(long)]
    max_size: Option<usize>,
    #[arg(long)]
    node_limit: Option<u64>,
    #[arg(long, value_enum, default_value = "strict")]
    rule: RuleArg,
}

impl CapArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            external_cap: self.cap,
            max_size: self.max_size,
            node_limit: self.node_limit,
            rule: self.rule.into(),
        }
    }
}

#[derive(clap::Args)]
struct SearchArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    #[arg(long)]
    poset: String,
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    caps: CapArgs,
    #[command(flatten)]
    cache: CacheArgs,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct TabulateArgs {
    /// Repeat for several posets.
    #[arg(long = "poset", required = true)]
    posets: Vec<String>,
    /// `2..4` or a comma list.
    #[arg(long)]
    n: String,
    #[arg(long = "mode", value_enum, required = true, value_delimiter = ',')]
    modes: Vec<ModeArg>,
    #[command(flatten)]
    caps: CapArgs,
    #[command(flatten)]
    cache: CacheArgs,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Small,
    FullDesk,
}

#[derive(clap::Args)]
struct PaperCheckArgs {
    #[arg(long, value_enum, default_value = "small")]
    scale: ScaleArg,
    /// Also write the rows as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn parse_poset(spec: &str) -> Result<Poset> {
    let trimmed = spec.trim();
    if !trimmed.starts_with('{') && Path::new(trimmed).is_file() {
        let text = fs::read_to_string(trimmed).with_context(|| format!("reading {trimmed}"))?;
        return Ok(Poset::from_json_str(&text)?);
    }
    Ok(Poset::parse(trimmed)?)
}

fn read_family(path: &Path) -> Result<SetFamily> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SetFamily::from_json_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => Ok(std::io::stdout().write_all(text.as_bytes())?),
    }
}

fn need(value: Option<usize>, flag: &str) -> Result<usize> {
    value.ok_or_else(|| anyhow!("this construction needs --{flag}"))
}

fn need_poset(args: &ConstructArgs) -> Result<Poset> {
    parse_poset(args.poset.as_deref().ok_or_else(|| anyhow!("this construction needs --poset"))?)
}

fn construct(args: &ConstructArgs) -> Result<serde_json::Value> {
    let n = args.n;
    let built: ConstructionResult = match args.name {
        ConstructName::WedgeDiamond => constructions::wedge_diamond_family(n, need(args.k, "k")?)?,
        ConstructName::TwoC2 => constructions::two_c2_family(n)?,
        ConstructName::Vee => constructions::vee_family(n)?,
        ConstructName::AntichainExternal => constructions::antichain_external_family(n, need(args.k, "k")?)?,
        ConstructName::IsolatedVertex => {
            constructions::isolated_element_family(&need_poset(args)?, n, IsolatedVariant::Vertex)?
        }
        ConstructName::IsolatedC2 => {
            constructions::isolated_element_family(&need_poset(args)?, n, IsolatedVariant::C2)?
        }
        ConstructName::RelaxedProjective => constructions::relaxed_projective_family(&need_poset(args)?, n)?,
        ConstructName::Kst | ConstructName::KstLift => {
            let (s, t) = (need(args.s, "s")?, need(args.t, "t")?);
            let (f1, f2) = constructions::kst_almost_saturated(n, s, t)?;
            if matches!(args.name, ConstructName::KstLift) {
                let p = Poset::complete_bipartite(s, t)?;
                constructions::external_lift(&f1, &f2, &p)?
            } else {
                let both = f1.union(&f2)?;
                let provenance = json!({
                    "construction": "kst_almost_saturated",
                    "params": {"n": n, "s": s, "t": t},
                    "f1": f1.sets(),
                    "f2": f2.sets(),
                    "claimed_size": both.len(),
                });
                return Ok(both.to_json_with_provenance(provenance));
            }
        }
    };
    Ok(built.family.to_json_with_provenance(built.provenance()))
}

fn run_construct(args: ConstructArgs) -> Result<ExitCode> {
    match construct(&args) {
        Ok(value) => {
            emit(args.out.as_deref(), &value)?;
            Ok(ExitCode::SUCCESS)
        }
        Err(err) => {
            eprintln!("error: {err}");
            if let Some(Error::ValidityFloor { collision: Some((a, b)), .. }) = err.downcast_ref::<Error>() {
                eprintln!("collision: {a} {b}");
            }
            Ok(ExitCode::from(2))
        }
    }
}

fn verify(args: &VerifyArgs) -> Result<SaturationReport> {
    let p = parse_poset(&args.poset)?;
    let fam = read_family(&args.family)?;
    if let Some(n) = args.n {
        if n != fam.n() {
            bail!("--n {n} disagrees with the family's n = {}", fam.n());
        }
    }
    Ok(match args.mode {
        VerifyMode::Sat => saturation::verify_ordinary(&fam, &p, CopyMode::Weak)?,
        VerifyMode::SatStar => saturation::verify_ordinary(&fam, &p, CopyMode::Strong)?,
        VerifyMode::Projective => saturation::verify_projective(&fam, &p)?,
        VerifyMode::RelaxedProjective => saturation::verify_relaxed_projective(&fam, &p)?,
        VerifyMode::External => {
            let anchor = match &args.anchor {
                Some(text) => serde_json::from_str::<GroundSet>(text).context("parsing --anchor")?,
                None => fam.ground().anchor,
            };
            saturation::verify_external(&fam, &p, anchor, args.rule.into())?
        }
        VerifyMode::Almost => {
            let upper = args.upper.as_deref().ok_or_else(|| anyhow!("almost mode needs --upper"))?;
            saturation::verify_almost_saturated(&fam, &read_family(upper)?, &p)?
        }
    })
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode> {
    match verify(&args) {
        Ok(report) => {
            emit(args.out.as_deref(), &report.to_json_value())?;
            Ok(if report.is_holds() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            Ok(ExitCode::from(2))
        }
    }
}

/// Serves one request from the cache or runs it and records the outcome.
fn cached_search(
    cache: Option<&mut Cache>,
    mode: SearchMode,
    n: usize,
    p: &Poset,
    cfg: SearchConfig,
) -> Result<(SearchOutcome, bool, String)> {
    let key = search::cache_key(p, n, mode, &search::resolve_config(mode, n, p, cfg));
    if let Some(cache) = &cache {
        if let Some(hit) = cache.get(&key) {
            return Ok((hit.clone(), true, key));
        }
    }
    let outcome = search::min_by_mode(mode, n, p, cfg)?;
    if let Some(cache) = cache {
        // abandoned runs depend on the node limit only through the key, so they are kept too
        cache.insert(key.clone(), outcome.clone())?;
    }
    Ok((outcome, false, key))
}

fn open_cache(args: &CacheArgs) -> Result<Option<Cache>> {
    if args.no_cache {
        Ok(None)
    } else {
        Cache::open(&args.cache).map(Some)
    }
}

fn run_search(args: SearchArgs) -> Result<ExitCode> {
    let result = (|| {
        let p = parse_poset(&args.poset)?;
        let mut cache = open_cache(&args.cache)?;
        cached_search(cache.as_mut(), args.mode.into(), args.n, &p, args.caps.config())
    })();
    match result {
        Ok((outcome, hit, key)) => {
            let value = json!({
                "poset": args.poset,
                "cache_hit": hit,
                "key": key,
                "outcome": outcome,
            });
            emit(args.out.as_deref(), &value)?;
            Ok(if outcome.value.is_some() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            Ok(ExitCode::from(2))
        }
    }
}

fn parse_range(text: &str) -> Result<Vec<usize>> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().context("range start")?;
        let hi: usize = hi.trim().parse().context("range end")?;
        if lo > hi {
            bail!("empty range {text}");
        }
        return Ok((lo..=hi).collect());
    }
    text.split(',')
        .map(|s| s.trim().parse::<usize>().with_context(|| format!("bad n value `{s}`")))
        .collect()
}

const CSV_HEADER: [&str; 7] = ["poset", "n", "mode", "value", "witness_hash", "nodes", "millis"];

fn tabulate(args: &TabulateArgs) -> Result<(Vec<u8>, usize, usize)> {
    let ns = parse_range(&args.n)?;
    let posets: Vec<(String, Poset)> =
        args.posets.iter().map(|s| Ok((s.clone(), parse_poset(s)?))).collect::<Result<_>>()?;
    let mut cache = open_cache(&args.cache)?;
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record(CSV_HEADER)?;
    let (mut cells, mut hits) = (0, 0);
    for (name, p) in &posets {
        for &n in &ns {
            for &mode in &args.modes {
                let mode: SearchMode = mode.into();
                cells += 1;
                let row = match cached_search(cache.as_mut(), mode, n, p, args.caps.config()) {
                    Ok((o, hit, _)) => {
                        hits += usize::from(hit);
                        let value = match o.value {
                            Some(v) => v.to_string(),
                            None => "exceeds-cap".to_string(),
                        };
                        [value, search::witness_hash(o.witness.as_ref()), o.stats.nodes.to_string(), o.stats.millis.to_string()]
                    }
                    Err(err) => {
                        log::warn!("{name} n={n} {}: {err:#}", mode.label());
                        ["cap-exceeded".to_string(), "-".to_string(), "0".to_string(), "0".to_string()]
                    }
                };
                let [value, hash, nodes, millis] = row;
                writer.write_record([name.as_str(), &n.to_string(), mode.label(), &value, &hash, &nodes, &millis])?;
            }
        }
    }
    Ok((writer.into_inner().map_err(|e| anyhow!("{e}"))?, cells, hits))
}

fn run_tabulate(args: TabulateArgs) -> Result<ExitCode> {
    match tabulate(&args) {
        Ok((bytes, cells, hits)) => {
            match &args.out {
                Some(path) => fs::write(path, &bytes).with_context(|| format!("writing {}", path.display()))?,
                None => std::io::stdout().write_all(&bytes)?,
            }
            eprintln!("{cells} cells, {hits} cache hits");
            Ok(ExitCode::SUCCESS)
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            Ok(ExitCode::from(2))
        }
    }
}

fn run_paper_check(args: PaperCheckArgs) -> Result<ExitCode> {
    let scale = match args.scale {
        ScaleArg::Small => Scale::Small,
        ScaleArg::FullDesk => Scale::Full,
    };
    let mut rows = Vec::new();
    println!("{:>2}  {:<4}  {:>8}  criterion", "id", "ok", "ms");
    for id in 1..=11 {
        let row = suite::run_criterion(id, scale);
        let status = if row.passed { "pass" } else { "FAIL" };
        println!("{:>2}  {:<4}  {:>8}  {}: {}", row.id, status, row.millis, row.title, row.measured);
        rows.push(row);
    }
    if let Some(path) = &args.json {
        emit(Some(path), &serde_json::to_value(&rows)?)?;
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    println!("{} passed, {failed} failed", rows.len() - failed);
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global() {
            eprintln!("error: {err}");
            return ExitCode::from(2);
        }
    }
    let result = match cli.command {
        Command::Construct(a) => run_construct(a),
        Command::Verify(a) => run_verify(a),
        Command::Search(a) => run_search(a),
        Command::Tabulate(a) => run_tabulate(a),
        Command::PaperCheck(a) => run_paper_check(a),
    };
    result.unwrap_or_else(|err| {
        eprintln!("error: {err:#}");
        ExitCode::from(2)
    })
}
