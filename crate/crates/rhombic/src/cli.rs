//! Argument parsing and dispatch.

use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rhombic_core::bounds::bound_report;
use rhombic_core::classnum::{class_number, mcd, DEFAULT_MCD_CAP};
use rhombic_core::diophantine::{lrn_search, nagell_search, thue_search, DEFAULT_BIT_BUDGET};
use rhombic_core::field::Domain;
use rhombic_core::lab::{classify_with_cap, ds_to_function, function_to_ds, DEFAULT_PLANARITY_CAP};
use rhombic_core::partition::{
    b, cost, cost_with_k_classes, enumerate_min_witnesses, greedy_sequence, ExceptionKind,
    DEFAULT_TABLE_LIMIT, DEFAULT_WITNESS_LIMIT, GREEDY_CROSSOVER,
};
use rhombic_core::CostTable;
use serde::Serialize;

use crate::cache::Cache;
use crate::config::{default_threads, Config, OutputFormat, DEFAULT_CACHE_DIR, DEFAULT_SCAN_LIMIT, DEFAULT_SEED};
use crate::expr::{parse_natural, parse_u64};
use crate::formats::{BoundsJson, FunctionJson, LrnJson, McdJson, ReportJson};
use crate::verify::{render_text, Harness, Status, Summary, MIN_TABLE_LIMIT};
use crate::{scan, tables, CliError, Result, EXIT_OK, EXIT_VERIFY_FAILED};

/// Minimum-cost equivalence relations, image-size bounds for C4 functions
/// and the number theory behind them.
///
/// Integer arguments accept expressions such as `5^13-1` or `41^11`.
#[derive(Debug, Parser)]
#[command(name = "rhombic", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Directory for the cost table and class number caches.
    #[arg(long, global = true, env = "RHOMBIC_CACHE_DIR", default_value = DEFAULT_CACHE_DIR)]
    pub cache_dir: PathBuf,
    /// Largest cost table that may be built or loaded.
    #[arg(long, global = true, default_value_t = DEFAULT_TABLE_LIMIT)]
    pub table_limit: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Worker threads for scans [default: available cores, at most 16].
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Upper end of the exceptional-size scan.
    #[arg(long, global = true, default_value_t = DEFAULT_SCAN_LIMIT)]
    pub limit: u64,
    /// Largest size whose minimum partitions may be enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_WITNESS_LIMIT)]
    pub witness_limit: u64,
}

impl GlobalArgs {
    pub fn config(&self) -> Config {
        Config {
            cache_dir: self.cache_dir.clone(),
            table_limit: self.table_limit,
            witness_limit: self.witness_limit,
            scan_limit: self.limit,
            format: self.format,
            seed: self.seed,
            threads: self.threads.unwrap_or_else(default_threads),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimum cost of a relation of size N (N even).
    Cost {
        n: String,
        /// Restrict to relations with exactly this many non-singleton classes.
        #[arg(long)]
        classes: Option<u64>,
    },
    /// Every minimum-cost partition of N.
    Witness { n: String },
    /// The greedy descent for N next to the exact cost.
    Greedy { n: String },
    /// Exceptional sizes up to --limit.
    Xset,
    /// B(k) = cost(2k).
    Bk { k: String },
    /// Class number h(-D) for D = 3 mod 8.
    Classnum {
        #[arg(required = true)]
        d: Vec<String>,
    },
    /// Smallest D = 3 mod 8 with gcd(m, h(-D)) > 1.
    Mcd {
        m: String,
        #[arg(long, default_value_t = DEFAULT_MCD_CAP)]
        cap: u64,
    },
    /// Solutions of x^2 + D = 4y^n.
    Dioph {
        #[arg(required = true)]
        d: Vec<String>,
        #[arg(long, default_value_t = 1000)]
        y_max: u64,
        #[arg(long, default_value_t = 13)]
        n_max: u32,
        /// Keep solutions with gcd(x, y) > 1.
        #[arg(long)]
        all: bool,
    },
    /// Integer solutions of the two cubic Thue equations with |a|, |b| <= bound.
    Thue {
        #[arg(long, default_value_t = 10_000)]
        bound: i64,
    },
    /// Solutions of x^2 + x + 1 = y^n.
    Nagell {
        #[arg(long, default_value_t = 1000)]
        y_max: u64,
        #[arg(long, default_value_t = 15)]
        n_max: u32,
    },
    /// Every image-size bound that applies to q, with the exact value.
    Bounds { q: String },
    /// Classify a function given as JSON (path, or - for stdin).
    Analyze {
        input: String,
        /// Largest order for which planarity is checked.
        #[arg(long, default_value_t = DEFAULT_PLANARITY_CAP)]
        cap: u32,
    },
    /// Convert between planar difference sets in Z_m and functions.
    Dsgen {
        /// Group order m of Z_m.
        #[arg(long, requires = "set", conflicts_with = "function")]
        group: Option<u32>,
        /// Comma-separated difference set.
        #[arg(long, value_delimiter = ',')]
        set: Option<Vec<u32>>,
        /// Recover the difference set from a function JSON file.
        #[arg(long)]
        function: Option<String>,
    },
    /// Regenerate the appendix or MCD table as CSV.
    Tables {
        #[arg(value_enum)]
        which: TableKind,
        /// Write `<which>.csv` into this directory instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recompute every published value and report PASS, FAIL or INFO.
    VerifyPaper {
        /// Also scan for exceptional sizes up to this bound (slow).
        #[arg(long)]
        extended: Option<u64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Appendix,
    Mcd,
}

struct Ctx<'w, W: Write> {
    config: Config,
    cache: Cache,
    out: &'w mut W,
}

fn wio(e: std::io::Error) -> CliError {
    CliError::io("<stdout>", e)
}

impl<W: Write> Ctx<'_, W> {
    fn table(&self, needed: u64) -> Result<CostTable> {
        let needed = needed.max(GREEDY_CROSSOVER);
        if needed > self.config.table_limit {
            return Err(CliError::Resource(format!(
                "needs a cost table to {needed}, above --table-limit {}",
                self.config.table_limit
            )));
        }
        self.cache.cost_table(needed)
    }

    fn line(&mut self, s: impl std::fmt::Display) -> Result<()> {
        writeln!(self.out, "{s}").map_err(wio)
    }

    fn json<T: Serialize + ?Sized>(&mut self, v: &T) -> Result<()> {
        serde_json::to_writer_pretty(&mut *self.out, v).map_err(|e| CliError::Resource(e.to_string()))?;
        self.line("")
    }

    fn csv<I, R>(&mut self, header: &[&str], rows: I) -> Result<()>
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator,
        R::Item: AsRef<[u8]>,
    {
        let mut w = csv::Writer::from_writer(&mut *self.out);
        w.write_record(header)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush().map_err(wio)
    }

    fn format(&self) -> OutputFormat {
        self.config.format
    }
}

pub fn run(cli: Cli, out: &mut impl Write) -> Result<i32> {
    let config = cli.global.config();
    config.validate()?;
    let cache = Cache::new(config.cache_dir.clone());
    let mut ctx = Ctx { config, cache, out };
    match cli.command {
        Command::Cost { n, classes } => cmd_cost(&mut ctx, &n, classes),
        Command::Witness { n } => cmd_witness(&mut ctx, &n),
        Command::Greedy { n } => cmd_greedy(&mut ctx, &n),
        Command::Xset => cmd_xset(&mut ctx),
        Command::Bk { k } => cmd_bk(&mut ctx, &k),
        Command::Classnum { d } => cmd_classnum(&mut ctx, &d),
        Command::Mcd { m, cap } => cmd_mcd(&mut ctx, &m, cap),
        Command::Dioph { d, y_max, n_max, all } => cmd_dioph(&mut ctx, &d, y_max, n_max, all),
        Command::Thue { bound } => cmd_thue(&mut ctx, bound),
        Command::Nagell { y_max, n_max } => cmd_nagell(&mut ctx, y_max, n_max),
        Command::Bounds { q } => cmd_bounds(&mut ctx, &q),
        Command::Analyze { input, cap } => cmd_analyze(&mut ctx, &input, cap),
        Command::Dsgen { group, set, function } => cmd_dsgen(&mut ctx, group, set, function),
        Command::Tables { which, out } => cmd_tables(&mut ctx, which, out),
        Command::VerifyPaper { extended } => cmd_verify(&mut ctx, extended),
    }
}

fn read_input(input: &str) -> Result<String> {
    if input == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::io("<stdin>", e))?;
        Ok(s)
    } else {
        std::fs::read_to_string(input).map_err(|e| CliError::io(input, e))
    }
}

fn to_u64(n: &BigUint) -> Option<u64> {
    u64::try_from(n).ok()
}

fn cmd_cost<W: Write>(ctx: &mut Ctx<W>, n: &str, classes: Option<u64>) -> Result<i32> {
    let n = parse_natural(n)?;
    if let Some(k) = classes {
        let small = to_u64(&n).ok_or_else(|| CliError::Input("--classes needs n below 2^64".into()))?;
        let c = cost_with_k_classes(small, k)?;
        let shown = c.map_or("none".to_string(), |c| c.to_string());
        return match ctx.format() {
            OutputFormat::Json => ctx.json(&serde_json::json!({ "n": small, "k": k, "cost": c })),
            OutputFormat::Csv => ctx.csv(&["n", "k", "cost"], [[small.to_string(), k.to_string(), shown]]),
            OutputFormat::Text => ctx.line(shown),
        }
        .map(|_| EXIT_OK);
    }
    let table = ctx.table(ctx.config.table_for(to_u64(&n)))?;
    let c = cost(&n, &table)?;
    match ctx.format() {
        OutputFormat::Json => ctx.json(&serde_json::json!({ "n": n.to_string(), "cost": c.to_string() }))?,
        OutputFormat::Csv => ctx.csv(&["n", "cost"], [[n.to_string(), c.to_string()]])?,
        OutputFormat::Text => ctx.line(c)?,
    }
    Ok(EXIT_OK)
}

fn cmd_witness<W: Write>(ctx: &mut Ctx<W>, n: &str) -> Result<i32> {
    let n = parse_u64(n)?;
    let table = ctx.table(n.min(ctx.config.witness_limit))?;
    let ways = enumerate_min_witnesses(n, &table, ctx.config.witness_limit)?;
    match ctx.format() {
        OutputFormat::Json => {
            let parts: Vec<&[u64]> = ways.iter().map(|w| w.parts()).collect();
            ctx.json(&parts)?
        }
        OutputFormat::Csv => ctx.csv(&["n", "cost", "ways"], [[n.to_string(), ways[0].cost().to_string(), tables::join_ways(&ways)]])?,
        OutputFormat::Text => {
            for w in &ways {
                ctx.line(w)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_greedy<W: Write>(ctx: &mut Ctx<W>, n: &str) -> Result<i32> {
    let n = parse_natural(n)?;
    let table = ctx.table(ctx.config.table_for(to_u64(&n)))?;
    let t = greedy_sequence(&n, &table)?;
    match ctx.format() {
        OutputFormat::Json => ctx.json(&serde_json::json!({
            "n": t.n.to_string(),
            "sizes": t.sizes.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "residuals": t.residuals.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "greedy_cost": t.greedy_cost.to_string(),
            "exact_cost": t.exact_cost.to_string(),
            "exception_hit": t.exception_hit,
        }))?,
        OutputFormat::Csv => ctx.csv(
            &["step", "residual", "size"],
            t.residuals.iter().zip(&t.sizes).enumerate().map(|(j, (r, s))| [j.to_string(), r.to_string(), s.to_string()]),
        )?,
        OutputFormat::Text => {
            for (r, s) in t.residuals.iter().zip(&t.sizes) {
                ctx.line(format!("{r} {s}"))?;
            }
            ctx.line(format!("greedy cost {}, exact cost {}", t.greedy_cost, t.exact_cost))?;
            if let Some(hit) = t.exception_hit {
                ctx.line(format!("strict exception reached at residual {hit}"))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn kind_str(k: ExceptionKind) -> &'static str {
    match k {
        ExceptionKind::Strict => "strict",
        ExceptionKind::Tie => "tie",
    }
}

fn cmd_xset<W: Write>(ctx: &mut Ctx<W>) -> Result<i32> {
    let table = ctx.table(ctx.config.scan_limit)?;
    let records = scan::exception_scan(&table, ctx.config.scan_limit, ctx.config.threads)?;
    match ctx.format() {
        OutputFormat::Json => {
            let rows: Vec<_> = records
                .iter()
                .map(|r| serde_json::json!({ "n": r.n, "cost": r.exact_cost, "greedy_max_cost": r.greedy_max_cost, "kind": kind_str(r.kind) }))
                .collect();
            ctx.json(&rows)?
        }
        OutputFormat::Csv => ctx.csv(
            &["n", "cost", "greedy_max_cost", "kind"],
            records.iter().map(|r| [r.n.to_string(), r.exact_cost.to_string(), r.greedy_max_cost.to_string(), kind_str(r.kind).to_string()]),
        )?,
        OutputFormat::Text => {
            for r in &records {
                ctx.line(format!("{} {} {}", r.n, r.exact_cost, kind_str(r.kind)))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_bk<W: Write>(ctx: &mut Ctx<W>, k: &str) -> Result<i32> {
    let k = parse_u64(k)?;
    let table = ctx.table(ctx.config.table_for(k.checked_mul(2)))?;
    let v = b(k, &table)?;
    match ctx.format() {
        OutputFormat::Json => ctx.json(&serde_json::json!({ "k": k, "B": v }))?,
        OutputFormat::Csv => ctx.csv(&["k", "B"], [[k.to_string(), v.to_string()]])?,
        OutputFormat::Text => ctx.line(v)?,
    }
    Ok(EXIT_OK)
}

fn cmd_classnum<W: Write>(ctx: &mut Ctx<W>, ds: &[String]) -> Result<i32> {
    let mut classes = ctx.cache.class_numbers()?;
    let mut rows = Vec::new();
    for d in ds {
        let d = parse_u64(d)?;
        rows.push((d, classes.get(d)?));
    }
    classes.flush()?;
    match ctx.format() {
        OutputFormat::Json => {
            let v: Vec<_> = rows.iter().map(|(d, h)| serde_json::json!({ "D": d, "h": h })).collect();
            ctx.json(&v)?
        }
        OutputFormat::Csv => ctx.csv(&["D", "h"], rows.iter().map(|(d, h)| [d.to_string(), h.to_string()]))?,
        OutputFormat::Text if rows.len() == 1 => ctx.line(rows[0].1)?,
        OutputFormat::Text => {
            for (d, h) in &rows {
                ctx.line(format!("{d} {h}"))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_mcd<W: Write>(ctx: &mut Ctx<W>, m: &str, cap: u64) -> Result<i32> {
    let m = parse_u64(m)?;
    let r = mcd(m, cap)?;
    debug_assert_eq!(class_number(r.d).ok(), Some(r.h));
    match ctx.format() {
        OutputFormat::Json => ctx.json(&McdJson::from(&r))?,
        OutputFormat::Csv => ctx.csv(&["m", "D", "i", "h"], [[r.m.to_string(), r.d.to_string(), r.i.to_string(), r.h.to_string()]])?,
        OutputFormat::Text => ctx.line(r.d)?,
    }
    Ok(EXIT_OK)
}

fn cmd_dioph<W: Write>(ctx: &mut Ctx<W>, ds: &[String], y_max: u64, n_max: u32, all: bool) -> Result<i32> {
    let mut sols = Vec::new();
    for d in ds {
        sols.extend(lrn_search(parse_u64(d)?, y_max, n_max, !all, DEFAULT_BIT_BUDGET)?);
    }
    let rows: Vec<LrnJson> = sols.iter().map(LrnJson::from).collect();
    match ctx.format() {
        OutputFormat::Json => ctx.json(&rows)?,
        OutputFormat::Csv => ctx.csv(
            &["D", "x", "y", "n", "coprime"],
            rows.iter().map(|r| [r.d.to_string(), r.x.clone(), r.y.to_string(), r.n.to_string(), r.coprime.to_string()]),
        )?,
        OutputFormat::Text => {
            for r in &rows {
                let tag = if r.coprime { "" } else { " (gcd(x,y) > 1)" };
                ctx.line(format!("{}^2 + {} = 4*{}^{}{tag}", r.x, r.d, r.y, r.n))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_thue<W: Write>(ctx: &mut Ctx<W>, bound: i64) -> Result<i32> {
    let (k1, k2) = thue_search(bound)?;
    let tagged: Vec<(u8, i64, i64)> =
        k1.iter().map(|&(a, b)| (1, a, b)).chain(k2.iter().map(|&(a, b)| (2, a, b))).collect();
    match ctx.format() {
        OutputFormat::Json => ctx.json(&serde_json::json!({ "k1": k1, "k2": k2 }))?,
        OutputFormat::Csv => ctx.csv(&["k", "a", "b"], tagged.iter().map(|(k, a, b)| [k.to_string(), a.to_string(), b.to_string()]))?,
        OutputFormat::Text => {
            for (k, a, b) in &tagged {
                ctx.line(format!("k={k} ({a},{b})"))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_nagell<W: Write>(ctx: &mut Ctx<W>, y_max: u64, n_max: u32) -> Result<i32> {
    let sols = nagell_search(y_max, n_max, DEFAULT_BIT_BUDGET);
    match ctx.format() {
        OutputFormat::Json => {
            let v: Vec<_> = sols.iter().map(|s| serde_json::json!({ "x": s.x.to_string(), "y": s.y, "n": s.n })).collect();
            ctx.json(&v)?
        }
        OutputFormat::Csv => ctx.csv(&["x", "y", "n"], sols.iter().map(|s| [s.x.to_string(), s.y.to_string(), s.n.to_string()]))?,
        OutputFormat::Text => {
            for s in &sols {
                ctx.line(format!("{}^2 + {} + 1 = {}^{}", s.x, s.x, s.y, s.n))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_bounds<W: Write>(ctx: &mut Ctx<W>, q: &str) -> Result<i32> {
    let q = parse_natural(q)?;
    let table = ctx.table(ctx.config.table_for(to_u64(&q)))?;
    let report = bound_report(&q, &table, |m| mcd(m, DEFAULT_MCD_CAP).map(|r| r.d))?;
    let j = BoundsJson::from_report(&report)?;
    match ctx.format() {
        OutputFormat::Json => ctx.json(&j)?,
        OutputFormat::Csv => ctx.csv(
            &["q", "id", "value", "floor", "applicable", "case"],
            j.methods.iter().map(|m| {
                [
                    j.q.clone(),
                    m.id.clone(),
                    m.value.clone().unwrap_or_default(),
                    m.floor.clone().unwrap_or_default(),
                    m.applicable.to_string(),
                    m.case.clone(),
                ]
            }),
        )?,
        OutputFormat::Text => {
            ctx.line(format!("q = {} = {}^{}", j.q, j.y, j.n))?;
            if j.below_threshold_warning {
                ctx.line("warning: q <= 7")?;
            }
            ctx.line(format!("lower {}", j.lower))?;
            for m in &j.methods {
                let value = match (&m.value, &m.floor) {
                    (Some(v), Some(f)) => format!("{v} (floor {f})"),
                    _ => "-".to_string(),
                };
                let flag = if m.applicable { "" } else { " [not applicable]" };
                ctx.line(format!("{} {value} {}{flag}", m.id, m.case))?;
            }
            if let Some(e) = &j.exact {
                ctx.line(format!("exact {e}"))?;
            }
            for d in &j.discrepancies {
                ctx.line(format!("discrepancy {} {}: floor {} vs exact {}", d.id, d.kind, d.floor, d.exact))?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_analyze<W: Write>(ctx: &mut Ctx<W>, input: &str, cap: u32) -> Result<i32> {
    let f = FunctionJson::parse(&read_input(input)?, input)?.build()?;
    let r = ReportJson::from(&classify_with_cap(&f, cap)?);
    match ctx.format() {
        OutputFormat::Json => ctx.json(&r)?,
        OutputFormat::Csv => ctx.csv(
            &["q", "V", "N2", "is_permutation", "in_c4", "in_c3", "is_planar", "differential_uniformity"],
            [[
                r.q.to_string(),
                r.v.to_string(),
                r.n2.to_string(),
                r.is_permutation.to_string(),
                r.in_c4.to_string(),
                r.in_c3.to_string(),
                r.is_planar.to_string(),
                r.differential_uniformity.to_string(),
            ]],
        )?,
        OutputFormat::Text => {
            ctx.line(format!("q {}", r.q))?;
            ctx.line(format!("V {}", r.v))?;
            ctx.line(format!("N2 {}", r.n2))?;
            ctx.line(format!("permutation {}", r.is_permutation))?;
            ctx.line(format!("C4 {}", r.in_c4))?;
            ctx.line(format!("C3 {}", r.in_c3))?;
            ctx.line(format!("planar {}", r.is_planar))?;
            ctx.line(format!("differential uniformity {}", r.differential_uniformity))?;
            let sizes: Vec<String> = r.class_sizes.iter().map(|(s, c)| format!("{s}x{c}")).collect();
            ctx.line(format!("class sizes {}", sizes.join(" ")))?;
            if r.below_threshold_warning {
                ctx.line("warning: q <= 7")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_dsgen<W: Write>(
    ctx: &mut Ctx<W>,
    group: Option<u32>,
    set: Option<Vec<u32>>,
    function: Option<String>,
) -> Result<i32> {
    match (group, set, function) {
        (Some(m), Some(set), None) => {
            let f = ds_to_function(&set, &Domain::cyclic(m)?)?;
            let j = FunctionJson::from_table(&f);
            match ctx.format() {
                OutputFormat::Csv => ctx.csv(&["x", "f(x)"], f.images().iter().enumerate().map(|(x, y)| [x.to_string(), y.to_string()]))?,
                _ => ctx.json(&j)?,
            }
        }
        (None, None, Some(path)) => {
            let f = FunctionJson::parse(&read_input(&path)?, &path)?.build()?;
            let set = function_to_ds(&f)?;
            match ctx.format() {
                OutputFormat::Json => ctx.json(&serde_json::json!({ "q": f.order(), "set": set }))?,
                OutputFormat::Csv => ctx.csv(&["element"], set.iter().map(|x| [x.to_string()]))?,
                OutputFormat::Text => ctx.line(set.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))?,
            }
        }
        _ => return Err(CliError::Input("give --group with --set, or --function".into())),
    }
    Ok(EXIT_OK)
}

fn cmd_tables<W: Write>(ctx: &mut Ctx<W>, which: TableKind, out: Option<PathBuf>) -> Result<i32> {
    let (name, csv) = match which {
        TableKind::Appendix => {
            let c = &ctx.config;
            let table = ctx.table(c.scan_limit.max(c.witness_limit))?;
            let rows = tables::appendix_rows(&table, c.scan_limit, c.witness_limit, c.threads)?;
            ("appendix.csv", tables::appendix_csv(&rows)?)
        }
        TableKind::Mcd => {
            let mut classes = ctx.cache.class_numbers()?;
            let rows = tables::mcd_rows(&mut classes, DEFAULT_MCD_CAP)?;
            classes.flush()?;
            ("mcd.csv", tables::mcd_csv(&rows)?)
        }
    };
    match out {
        Some(dir) => {
            std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
            let path = dir.join(name);
            std::fs::write(&path, csv).map_err(|e| CliError::io(&path, e))?;
        }
        None => ctx.out.write_all(csv.as_bytes()).map_err(wio)?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify<W: Write>(ctx: &mut Ctx<W>, extended: Option<u64>) -> Result<i32> {
    let c = ctx.config.clone();
    let needed = MIN_TABLE_LIMIT.max(c.scan_limit).max(c.witness_limit).max(extended.unwrap_or(0));
    let table = ctx.table(needed)?;
    let mut classes = ctx.cache.class_numbers()?;
    let mut harness = Harness {
        table: &table,
        classes: &mut classes,
        scan_limit: c.scan_limit,
        witness_limit: c.witness_limit,
        threads: c.threads,
        seed: c.seed,
    };
    let mut outcomes = harness.run_all()?;
    if let Some(limit) = extended {
        outcomes.push(harness.extended_exceptions(limit)?);
    }
    classes.flush()?;
    match ctx.format() {
        OutputFormat::Json => ctx.json(&outcomes)?,
        OutputFormat::Csv => ctx.csv(
            &["id", "status", "expected", "actual", "anchor"],
            outcomes.iter().map(|o| [o.id.clone(), o.status.to_string(), o.expected.clone(), o.actual.clone(), o.anchor.clone()]),
        )?,
        OutputFormat::Text => ctx.out.write_all(render_text(&outcomes).as_bytes()).map_err(wio)?,
    }
    let summary = Summary::of(&outcomes);
    if ctx.format() != OutputFormat::Text {
        eprintln!("summary: {summary}");
    }
    Ok(if outcomes.iter().any(|o| o.status == Status::Fail) { EXIT_VERIFY_FAILED } else { EXIT_OK })
}
