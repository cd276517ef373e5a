//! Command-line front end.
//!
//! Exit status: 0 success, 1 property violated or counterexample found,
//! 2 usage or parameter error, 3 unreadable or malformed input.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cluster::{
    find_cluster, find_cross_cluster, s_wise_intersecting, sample_random_cluster, union_bound_criterion,
    FindMode,
};
use crate::error::Error;
use crate::family::{self, construct, io, Construction, KSubset, SetFamily};
use crate::junta_analysis::{find_regular_decomposition, regularity_check, stability_report};
use crate::rational::parse_rational;
use crate::shadow::{biased_measure, kk_minimality_test, kk_verify, monotone_closure, upper_shadow, BiasedMeasureQuery};
use crate::solver::{f_monotonicity_scan, solve, Budget, SolveInstance, SolveMode};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "clusterkit", version, about = "Exact tools for (d,k,s)-cluster-free set families")]
pub struct Cli {
    /// Worker threads for parallel searches (default: available parallelism).
    #[arg(long, global = true, env = "CLUSTERKIT_THREADS")]
    pub threads: Option<usize>,
    /// Output format for families; reports are always JSON.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the result here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a named family.
    Construct(ConstructArgs),
    /// Check a property of a family.
    #[command(subcommand)]
    Check(CheckCommand),
    /// Upper shadow at level l, or the Kruskal-Katona bound report with --kk-c.
    Shadow {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        l: u32,
        #[arg(long, value_parser = rational_arg)]
        kk_c: Option<BigRational>,
    },
    /// Uniform measure, or the p-biased measure of the monotone closure with --p.
    Measure {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        p: Option<BigRational>,
    },
    /// The restriction F_J^B.
    Restrict {
        #[arg(long)]
        family: PathBuf,
        #[arg(long = "J", value_parser = list_arg)]
        j: Elements,
        #[arg(long = "B", value_parser = list_arg)]
        b: Elements,
    },
    /// Search for a regular junta decomposition.
    Decompose {
        #[arg(long)]
        family: PathBuf,
        #[arg(long, value_parser = rational_arg)]
        delta: BigRational,
        #[arg(long, value_parser = rational_arg)]
        eps: BigRational,
        #[arg(long)]
        jmax: u32,
    },
    /// Search for A_i ∈ F_i forming a cluster.
    CrossCluster {
        #[arg(long, value_delimiter = ',', required = true)]
        families: Vec<PathBuf>,
        #[arg(long)]
        s: u32,
        /// Evaluate the union-bound criterion and search the level-l shadows.
        #[arg(long)]
        l: Option<u32>,
        /// Let different families contribute the same set.
        #[arg(long)]
        allow_repeats: bool,
    },
    /// Draw a uniform (d,l,⌈(d+1)l/d⌉)-cluster inside [n].
    SampleCluster {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        l: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compute f(d,k,s,n).
    Solve(SolveArgs),
    /// Distance of a family from the nearest star.
    Stability {
        #[arg(long)]
        family: PathBuf,
    },
    /// f(d,k,s,n) over a range of s.
    ScanF {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        s_from: u32,
        #[arg(long)]
        s_to: u32,
        #[arg(long)]
        node_cap: Option<u64>,
    },
    /// Time a fixed set of workloads.
    Bench {
        #[arg(long, value_enum)]
        suite: BenchSuite,
    },
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub kind: KindArg,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long, default_value_t = 1)]
    pub center: u32,
    #[arg(long)]
    pub rank: Option<u128>,
    #[arg(long)]
    pub size: Option<u128>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum KindArg {
    Star,
    FranklFuredi,
    OddBipartite,
    Lex,
    Random,
}

#[derive(Subcommand, Debug)]
pub enum CheckCommand {
    /// Look for a (d,k,s)-cluster.
    Cluster {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        s: u32,
        #[arg(long, value_enum)]
        mode: Option<ClusterModeArg>,
    },
    /// Check that no s members have empty common intersection.
    Swise {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        s: u32,
    },
    /// Check (r, eps)-regularity.
    Regular {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        r: u32,
        #[arg(long, value_parser = rational_arg)]
        eps: BigRational,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ClusterModeArg {
    Simplex,
    SimplexCluster,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub d: u32,
    #[arg(long)]
    pub k: u32,
    #[arg(long)]
    pub s: u32,
    #[arg(long)]
    pub n: u32,
    #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 16)]
    pub restarts: u32,
    #[arg(long)]
    pub node_cap: Option<u64>,
    #[arg(long)]
    pub wall_cap_ms: Option<u64>,
    /// Enumerate all maxima and check each is a star (implied by verify-star).
    #[arg(long)]
    pub uniqueness: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Exact,
    VerifyStar,
    Greedy,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BenchSuite {
    Solver,
    Finders,
    Shadow,
    All,
}

#[derive(Clone, Debug)]
pub struct Elements(pub Vec<u32>);

fn rational_arg(s: &str) -> Result<BigRational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn list_arg(s: &str) -> Result<Elements, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Elements(Vec::new()));
    }
    s.split(',')
        .map(|t| t.trim().parse::<u32>().map_err(|_| format!("'{t}' is not an element")))
        .collect::<Result<Vec<_>, _>>()
        .map(Elements)
}

/// What a subcommand produced.
enum Outcome {
    Family(SetFamily),
    Report(Value, bool),
}

fn report<T: Serialize>(v: &T, ok: bool) -> Outcome {
    Outcome::Report(serde_json::to_value(v).expect("reports serialise"), ok)
}

fn load(path: &Path) -> crate::Result<SetFamily> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::parse(0, format!("cannot read standard input: {e}")))?;
        return io::parse(&text);
    }
    io::read_file(path)
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. } => EXIT_PARSE,
        Error::Budget(_) => EXIT_VIOLATED,
        Error::Parameter(_) | Error::Internal(_) => EXIT_USAGE,
    }
}

fn describe(e: &Error) -> String {
    match e {
        Error::Parse { line: 0, message } => format!("error: {message}"),
        Error::Parse { line, message } => format!("error: line {line}: {message}"),
        other => format!("error: {other}"),
    }
}

/// Parse `args` (including the program name) and run the request.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    let threads = match cli.threads {
        Some(0) => {
            let _ = writeln!(err, "error: --threads must be positive");
            return EXIT_USAGE;
        }
        Some(t) => t,
        None => std::thread::available_parallelism().map_or(1, usize::from),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start thread pool: {e}");
            return EXIT_USAGE;
        }
    };
    let outcome = pool.install(|| dispatch(&cli.command));
    let (text, code) = match outcome {
        Err(e) => {
            let _ = writeln!(err, "{}", describe(&e));
            return exit_code(&e);
        }
        Ok(Outcome::Family(f)) => {
            let text = match cli.format {
                Format::Text => io::to_text(&f),
                Format::Json => io::to_json(&f) + "\n",
            };
            (text, EXIT_OK)
        }
        Ok(Outcome::Report(v, ok)) => (
            serde_json::to_string_pretty(&v).expect("reports serialise") + "\n",
            if ok { EXIT_OK } else { EXIT_VIOLATED },
        ),
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => out.write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return EXIT_USAGE;
    }
    code
}

fn construction(a: &ConstructArgs) -> crate::Result<Construction> {
    Ok(match a.kind {
        KindArg::Star => Construction::Star { center: a.center },
        KindArg::FranklFuredi => Construction::FranklFuredi,
        KindArg::OddBipartite => Construction::OddBipartite,
        KindArg::Lex => Construction::Lex {
            rank: a.rank.ok_or_else(|| Error::param("--kind lex needs --rank"))?,
        },
        KindArg::Random => Construction::Random {
            size: a.size.ok_or_else(|| Error::param("--kind random needs --size"))?,
            seed: a.seed,
        },
    })
}

fn dispatch(cmd: &Command) -> crate::Result<Outcome> {
    match cmd {
        Command::Construct(a) => Ok(Outcome::Family(construct(&construction(a)?, a.n, a.k)?)),
        Command::Check(c) => check(c),
        Command::Shadow { family, l, kk_c } => {
            let f = load(family)?;
            match kk_c {
                Some(c) => {
                    let r = kk_verify(&f, *l, c)?;
                    let ok = r.satisfied.bound1 && r.satisfied.bound2 && r.satisfied.bound3;
                    Ok(report(&r, ok))
                }
                None => Ok(Outcome::Family(upper_shadow(&f, *l)?)),
            }
        }
        Command::Measure { family, p } => {
            let f = load(family)?;
            let v = match p {
                Some(p) => {
                    let q = BiasedMeasureQuery::new(p.clone())?;
                    let m = biased_measure(&monotone_closure(&f), &q);
                    json!({
                        "n": f.n(), "k": f.k(), "size": f.len(),
                        "p": crate::rational::format_rational(p),
                        "biased_measure": m,
                    })
                }
                None => json!({ "n": f.n(), "k": f.k(), "size": f.len(), "measure": f.measure() }),
            };
            Ok(Outcome::Report(v, true))
        }
        Command::Restrict { family, j, b } => {
            let f = load(family)?;
            Ok(Outcome::Family(family::restrict(&f, &j.0, &b.0)?))
        }
        Command::Decompose {
            family,
            delta,
            eps,
            jmax,
        } => {
            let f = load(family)?;
            let d = find_regular_decomposition(&f, delta, eps, *jmax)?;
            Ok(report(&json!({ "found": d.is_some(), "decomposition": d }), true))
        }
        Command::CrossCluster {
            families,
            s,
            l,
            allow_repeats,
        } => cross(families, *s, *l, !*allow_repeats),
        Command::SampleCluster { d, l, n, seed } => {
            let ground = KSubset::new(*n, &(1..=*n).collect::<Vec<_>>())?;
            let w = sample_random_cluster(*d, *l, &ground, *seed)?;
            Ok(report(&w.to_doc(), true))
        }
        Command::Solve(a) => {
            let mode = match a.mode {
                ModeArg::Exact => SolveMode::Exact,
                ModeArg::VerifyStar => SolveMode::VerifyStar,
                ModeArg::Greedy => SolveMode::Greedy,
            };
            let mut inst = SolveInstance::new(a.d, a.k, a.s, a.n, mode);
            inst.seed = a.seed;
            inst.restarts = a.restarts;
            inst.check_uniqueness |= a.uniqueness;
            inst.budget = Budget {
                node_cap: a.node_cap,
                wall_cap_ms: a.wall_cap_ms,
            };
            let r = solve(&inst)?;
            let ok = mode != SolveMode::VerifyStar || !r.exact || r.star_is_max;
            Ok(report(&r, ok))
        }
        Command::Stability { family } => Ok(report(&stability_report(&load(family)?)?, true)),
        Command::ScanF {
            d,
            k,
            n,
            s_from,
            s_to,
            node_cap,
        } => {
            let budget = Budget {
                node_cap: *node_cap,
                wall_cap_ms: None,
            };
            let scan = f_monotonicity_scan(*d, *k, *n, *s_from, *s_to, &budget)?;
            let ok = scan.holds();
            Ok(report(&scan, ok))
        }
        Command::Bench { suite } => Ok(report(&bench(*suite)?, true)),
    }
}

fn check(c: &CheckCommand) -> crate::Result<Outcome> {
    match c {
        CheckCommand::Cluster { family, d, s, mode } => {
            let f = load(family)?;
            if *d == 0 {
                return Err(Error::param("d must be at least 1"));
            }
            let mode = match mode {
                None => FindMode::Exhaustive,
                Some(ClusterModeArg::Simplex) => FindMode::SimplexOnly,
                Some(ClusterModeArg::SimplexCluster) => FindMode::SimplexClusterOnly,
            };
            let w = find_cluster(&f, *d, *s, mode);
            let v = json!({
                "d": d, "s": s, "mode": mode, "family_size": f.len(),
                "cluster_free": w.is_none(),
                "witness": w.map(|w| w.to_doc()),
            });
            let ok = v["cluster_free"] == Value::Bool(true);
            Ok(Outcome::Report(v, ok))
        }
        CheckCommand::Swise { family, s } => {
            let r = s_wise_intersecting(&load(family)?, *s)?;
            let ok = r.intersecting;
            Ok(report(&r, ok))
        }
        CheckCommand::Regular { family, r, eps } => {
            let rep = regularity_check(&load(family)?, *r, eps);
            let ok = rep.regular;
            Ok(report(&rep, ok))
        }
    }
}

fn cross(paths: &[PathBuf], s: u32, l: Option<u32>, distinct: bool) -> crate::Result<Outcome> {
    if paths.len() < 2 {
        return Err(Error::param("cross-cluster needs at least two families"));
    }
    let families = paths.iter().map(|p| load(p)).collect::<crate::Result<Vec<_>>>()?;
    let (criterion, searched) = match l {
        Some(l) => {
            let rep = union_bound_criterion(&families, l)?;
            let shadows = rep.shadows.clone();
            (Some(rep), shadows)
        }
        None => (None, families),
    };
    let w = find_cross_cluster(&searched, s, distinct)?;
    Ok(report(
        &json!({
            "s": s,
            "distinct": distinct,
            "criterion": criterion,
            "found": w.is_some(),
            "witness": w.map(|w| w.to_doc()),
        }),
        true,
    ))
}

#[derive(Serialize)]
struct BenchEntry {
    name: String,
    wall_ms: f64,
    result: Value,
}

#[derive(Serialize)]
struct BenchReport {
    suite: String,
    threads: usize,
    entries: Vec<BenchEntry>,
}

fn timed(name: String, entries: &mut Vec<BenchEntry>, f: impl FnOnce() -> crate::Result<Value>) -> crate::Result<()> {
    let t = Instant::now();
    let result = f()?;
    entries.push(BenchEntry {
        name,
        wall_ms: t.elapsed().as_secs_f64() * 1e3,
        result,
    });
    Ok(())
}

const BENCH_SOLVER: &[(u32, u32, u32, u32)] = &[
    (2, 2, 4, 5),
    (2, 2, 4, 4),
    (2, 3, 6, 6),
    (2, 3, 6, 7),
    (2, 2, 3, 4),
    (2, 2, 3, 6),
    (2, 2, 3, 8),
    (2, 2, 4, 8),
    (3, 2, 3, 7),
    (2, 3, 5, 7),
    (2, 3, 6, 8),
    (3, 3, 6, 8),
    (2, 4, 8, 8),
    (2, 4, 7, 9),
];

fn bench_solver(entries: &mut Vec<BenchEntry>) -> crate::Result<()> {
    for &(d, k, s, n) in BENCH_SOLVER {
        timed(format!("solve d={d} k={k} s={s} n={n}"), entries, || {
            let mut inst = SolveInstance::new(d, k, s, n, SolveMode::Exact);
            inst.budget.wall_cap_ms = Some(5_000);
            let r = solve(&inst)?;
            Ok(json!({
                "value": r.value, "exact": r.exact, "star_is_max": r.star_is_max,
                "clusters": r.clusters, "nodes": r.stats.nodes,
            }))
        })?;
    }
    Ok(())
}

fn bench_finders(entries: &mut Vec<BenchEntry>) -> crate::Result<()> {
    let cases: Vec<(&str, SetFamily, u32, u32)> = vec![
        ("frankl_furedi(8,2)", construct(&Construction::FranklFuredi, 8, 2)?, 2, 3),
        ("odd_bipartite(8,4)", construct(&Construction::OddBipartite, 8, 4)?, 2, 6),
        ("odd_bipartite(10,4)", construct(&Construction::OddBipartite, 10, 4)?, 2, 6),
        ("star(12,4)", construct(&Construction::Star { center: 1 }, 12, 4)?, 3, 8),
        ("full(9,3)", SetFamily::full(9, 3)?, 2, 5),
    ];
    for (name, f, d, s) in cases {
        timed(format!("find_cluster {name} d={d} s={s}"), entries, || {
            let w = find_cluster(&f, d, s, FindMode::Exhaustive);
            Ok(json!({ "family_size": f.len(), "cluster_free": w.is_none() }))
        })?;
    }
    Ok(())
}

fn bench_shadow(entries: &mut Vec<BenchEntry>) -> crate::Result<()> {
    timed("kk_minimality n=8 k=3 l=4 i=20".into(), entries, || {
        let r = kk_minimality_test(20, 3, 4, 8, 200, 1)?;
        Ok(json!({ "violations": r.violations, "lex_shadow": r.lex_shadow }))
    })?;
    timed("biased_measure closure of random(14,3,40)".into(), entries, || {
        let f = construct(&Construction::Random { size: 40, seed: 5 }, 14, 3)?;
        let q = BiasedMeasureQuery::new(parse_rational("1/3")?)?;
        Ok(json!({ "biased_measure": biased_measure(&monotone_closure(&f), &q) }))
    })?;
    timed("regularity r=2 odd_bipartite(12,4)".into(), entries, || {
        let f = construct(&Construction::OddBipartite, 12, 4)?;
        let r = regularity_check(&f, 2, &parse_rational("1/10")?);
        Ok(json!({ "regular": r.regular, "pairs": r.pairs_checked }))
    })?;
    Ok(())
}

fn bench(suite: BenchSuite) -> crate::Result<BenchReport> {
    let mut entries = Vec::new();
    let name = match suite {
        BenchSuite::Solver => "solver",
        BenchSuite::Finders => "finders",
        BenchSuite::Shadow => "shadow",
        BenchSuite::All => "all",
    };
    if matches!(suite, BenchSuite::Solver | BenchSuite::All) {
        bench_solver(&mut entries)?;
    }
    if matches!(suite, BenchSuite::Finders | BenchSuite::All) {
        bench_finders(&mut entries)?;
    }
    if matches!(suite, BenchSuite::Shadow | BenchSuite::All) {
        bench_shadow(&mut entries)?;
    }
    Ok(BenchReport {
        suite: name.into(),
        threads: rayon::current_num_threads(),
        entries,
    })
}
