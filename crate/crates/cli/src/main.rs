use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dyckshift::families::{FamilyIVParams, FamilyVParams, SphericalParams, ThreeVertexParams};
use dyckshift::graph::{are_isomorphic, from_json, to_dot, to_json, DirectedGraph};
use dyckshift::invariants::{compute_invariants_with, InvariantTable};
use dyckshift::reconstruct::{
    classify_family_with, reconstruct, verify_roundtrip, ClassifyOptions, EnumerationOracle, FamilyParams,
    Reconstruction, RoundTripInput, RoundTripOptions, RoundTripReport, RoundTripStatus,
};
use dyckshift::semigroup::{format_word, parse_word, reduce, ShowNormalForm};
use dyckshift::shift::{count_admissible, enumerate_orbits_with, is_periodic_word, orbits_to_json, OrbitClass, ShiftContext};
use dyckshift::{Error, SearchConfig};

/// Periodic-orbit invariants of Markov-Dyck shifts and recovery of graphs in
/// four parametrised families.
#[derive(Parser)]
#[command(name = "dyckshift", version)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Node budget for each enumeration; overrides DYCKSHIFT_BUDGET.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Enumeration worker threads (0 = rayon default).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Print JSON instead of tables.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Build a family graph and print it as graph JSON.
    Family {
        #[command(subcommand)]
        family: FamilyCmd,
        /// Print Graphviz DOT instead of JSON.
        #[arg(long, global = true)]
        dot: bool,
    },
    /// Invariant table of a graph read from a file or stdin.
    Invariants {
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        floor_c3: bool,
        graph: Option<PathBuf>,
    },
    /// Periodic orbits of one period, classified.
    Orbits {
        #[arg(long)]
        period: usize,
        graph: Option<PathBuf>,
    },
    /// Classify a graph and recover its family parameters.
    Reconstruct {
        graph: Option<PathBuf>,
        /// Fixed horizon; by default it grows until reconstruction succeeds.
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        floor_c3: bool,
    },
    /// Build, tabulate, reconstruct, rebuild and compare.
    Roundtrip {
        family: FamilyName,
        /// f4: H h h0 h1; f5: a JSON spec or file; sh2: K L M; tv: Taa Tbb Tab Tba da dA.
        #[arg(required = true)]
        params: Vec<String>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        floor_c3: bool,
    },
    /// Decide whether two graphs are isomorphic.
    Isomorphic { first: PathBuf, second: PathBuf },
    /// Words of the shift: admissibility, normal form, periodicity, counts.
    Language {
        graph: Option<PathBuf>,
        /// Comma-separated word such as `e-,f+`.
        #[arg(long)]
        word: Option<String>,
        /// Count admissible words of each length from 0 to N.
        #[arg(long)]
        count: Option<usize>,
    },
}

#[derive(Subcommand)]
enum FamilyCmd {
    /// Two-branch tree family.
    F4 {
        #[arg(long = "H")]
        big_h: usize,
        #[arg(long)]
        h: usize,
        #[arg(long)]
        h0: usize,
        #[arg(long)]
        h1: usize,
        /// Enforce the strict parameter set.
        #[arg(long)]
        strict: bool,
    },
    /// Trunk-with-legs family from a JSON spec (inline or a file path).
    F5 {
        #[arg(long)]
        spec: String,
    },
    /// Height-two spherically homogeneous graph.
    Sh2 {
        #[arg(long = "K")]
        k: usize,
        #[arg(long = "L")]
        l: usize,
        #[arg(long = "M")]
        m: usize,
    },
    /// Three-vertex graph with one tree edge.
    Tv {
        #[arg(long = "Taa")]
        taa: usize,
        #[arg(long = "Tbb")]
        tbb: usize,
        #[arg(long = "Tab")]
        tab: usize,
        #[arg(long = "Tba")]
        tba: usize,
        #[arg(long)]
        da: usize,
        #[arg(long = "dA")]
        d_up: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyName {
    F4,
    F5,
    Sh2,
    Tv,
}

enum Failure {
    Lib(Error),
    Usage(String),
    RoundTrip,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome<T> = Result<T, Failure>;

const HORIZON_CAP: usize = 40;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let result = run(&cli, &mut out);
    print!("{out}");
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::RoundTrip) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_resource_limit() { 3 } else { 2 })
        }
    }
}

fn config(g: &Global) -> SearchConfig {
    let mut c = SearchConfig::default();
    if let Some(b) = g.budget {
        c = c.with_budget(b);
    }
    if let Some(t) = g.threads {
        c = c.with_threads(t);
    }
    c
}

fn read_input(path: Option<&Path>) -> Outcome<String> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = std::fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
        }
        None => {
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Error::Io(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn read_graph(path: Option<&Path>) -> Outcome<DirectedGraph> {
    Ok(from_json(&read_input(path)?)?)
}

/// A family V spec given inline or as a path to a file.
fn json_arg(arg: &str) -> Outcome<FamilyVParams> {
    let path = Path::new(arg);
    let text = if !arg.trim_start().starts_with('{') && path.exists() {
        read_input(Some(path))?
    } else {
        arg.to_string()
    };
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("bad family spec: {e}")))
}

fn run(cli: &Cli, out: &mut String) -> Outcome<()> {
    let cfg = config(&cli.global);
    let json = cli.global.json;
    match &cli.command {
        Command::Family { family, dot } => {
            let (params, strict) = family_params(family)?;
            let g = params.build(strict)?;
            if *dot {
                out.push_str(&to_dot(&g, ShiftContext::new(&g).ok().map(|c| c.partition).as_ref()));
            } else {
                out.push_str(&to_json(&g));
                out.push('\n');
            }
        }
        Command::Invariants {
            horizon,
            floor_c3,
            graph,
        } => {
            let g = read_graph(graph.as_deref())?;
            let ctx = ShiftContext::new(&g)?;
            let t = compute_invariants_with(&ctx, *horizon, &cfg)?;
            if json {
                out.push_str(&t.to_json());
                out.push('\n');
            } else {
                write_table(out, &t, ClassifyOptions { floor_c3: *floor_c3 });
            }
        }
        Command::Orbits { period, graph } => {
            let g = read_graph(graph.as_deref())?;
            let ctx = ShiftContext::new(&g)?;
            let orbits = enumerate_orbits_with(&ctx, *period, &cfg)?;
            if json {
                out.push_str(&orbits_to_json(&ctx, &orbits));
                out.push('\n');
            } else {
                for (o, class) in &orbits {
                    let _ = writeln!(out, "{:<40} {}", format_word(&g, &o.word), describe(&ctx, class));
                }
                let _ = writeln!(out, "{} orbits of period {period}", orbits.len());
            }
        }
        Command::Reconstruct {
            graph,
            horizon,
            floor_c3,
        } => {
            let g = read_graph(graph.as_deref())?;
            let oracle = EnumerationOracle::new(cfg);
            let classify = ClassifyOptions { floor_c3: *floor_c3 };
            let r = with_horizon(*horizon, 6, |h| {
                let opts = RoundTripOptions {
                    horizon: h,
                    classify,
                    strict: false,
                };
                reconstruct(&g, &opts, &oracle)
            })?;
            if json {
                out.push_str(&serde_json::to_string_pretty(&r).expect("serialisable"));
                out.push('\n');
            } else {
                write_reconstruction(out, &r);
            }
        }
        Command::Roundtrip {
            family,
            params,
            horizon,
            strict,
            floor_c3,
        } => {
            let p = positional_params(*family, params)?;
            let oracle = EnumerationOracle::new(cfg);
            let input = RoundTripInput::Params(p.clone());
            let report = with_horizon(*horizon, p.suggested_horizon(), |h| {
                let opts = RoundTripOptions {
                    horizon: h,
                    classify: ClassifyOptions { floor_c3: *floor_c3 },
                    strict: *strict,
                };
                verify_roundtrip(&input, &opts, &oracle)
            })?;
            if json {
                out.push_str(&serde_json::to_string_pretty(&report).expect("serialisable"));
                out.push('\n');
            } else {
                write_report(out, &report);
            }
            if report.status != RoundTripStatus::Pass {
                return Err(Failure::RoundTrip);
            }
        }
        Command::Isomorphic { first, second } => {
            let a = read_graph(Some(first))?;
            let b = read_graph(Some(second))?;
            let map = are_isomorphic(&a, &b)?;
            if json {
                let witness = map.as_ref().map(|m| {
                    a.vertex_ids()
                        .map(|v| (a.vertex_name(v).to_string(), b.vertex_name(m[v.0]).to_string()))
                        .collect::<std::collections::BTreeMap<_, _>>()
                });
                let v = serde_json::json!({ "isomorphic": map.is_some(), "witness": witness });
                out.push_str(&serde_json::to_string_pretty(&v).expect("serialisable"));
                out.push('\n');
            } else {
                match map {
                    Some(m) => {
                        out.push_str("isomorphic\n");
                        for v in a.vertex_ids() {
                            let _ = writeln!(out, "  {} -> {}", a.vertex_name(v), b.vertex_name(m[v.0]));
                        }
                    }
                    None => out.push_str("not isomorphic\n"),
                }
            }
        }
        Command::Language { graph, word, count } => {
            if word.is_none() && count.is_none() {
                return Err(Failure::Usage("language needs --word or --count".into()));
            }
            let g = read_graph(graph.as_deref())?;
            let mut report = serde_json::Map::new();
            if let Some(text) = word {
                let w = parse_word(&g, text)?;
                if w.is_empty() {
                    return Err(Error::EmptyWord.into());
                }
                let nf = reduce(&g, &w)?;
                let periodic = is_periodic_word(&g, &w);
                report.insert("word".into(), format_word(&g, &w).into());
                report.insert("admissible".into(), (!nf.is_zero()).into());
                report.insert("normal_form".into(), ShowNormalForm(&g, &nf).to_string().into());
                report.insert("periodic".into(), periodic.into());
                if periodic {
                    let ctx = ShiftContext::new(&g)?;
                    report.insert("class".into(), describe(&ctx, &ctx.classify(&w)?).into());
                }
            }
            if let Some(n) = count {
                let counts = count_admissible(&g, *n, &cfg)?;
                report.insert("admissible_counts".into(), counts.into());
            }
            if json {
                out.push_str(&serde_json::to_string_pretty(&report).expect("serialisable"));
                out.push('\n');
            } else {
                for (k, v) in &report {
                    let v = match v {
                        serde_json::Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    let _ = writeln!(out, "{k:<18} {v}");
                }
            }
        }
    }
    Ok(())
}

/// Runs `f` at the given horizon, or from `start` upwards while it reports
/// that the horizon is too small.
fn with_horizon<T>(fixed: Option<usize>, start: usize, f: impl Fn(usize) -> dyckshift::Result<T>) -> Outcome<T> {
    if let Some(h) = fixed {
        return Ok(f(h)?);
    }
    let mut h = start;
    loop {
        match f(h) {
            Err(Error::HorizonTooSmall { needed, .. }) if needed > h && needed <= HORIZON_CAP => h = needed,
            other => return Ok(other?),
        }
    }
}

fn family_params(cmd: &FamilyCmd) -> Outcome<(FamilyParams, bool)> {
    Ok(match cmd {
        FamilyCmd::F4 {
            big_h,
            h,
            h0,
            h1,
            strict,
        } => (FamilyParams::F4(FamilyIVParams::new(*big_h, *h, *h0, *h1)), *strict),
        FamilyCmd::F5 { spec } => (FamilyParams::F5(json_arg(spec)?), false),
        FamilyCmd::Sh2 { k, l, m } => (FamilyParams::Sh2(SphericalParams::new(*k, *l, *m)), false),
        FamilyCmd::Tv {
            taa,
            tbb,
            tab,
            tba,
            da,
            d_up,
        } => (
            FamilyParams::ThreeVertex(ThreeVertexParams::new(*taa, *tbb, *tab, *tba, *da, *d_up)),
            false,
        ),
    })
}

fn positional_params(family: FamilyName, args: &[String]) -> Outcome<FamilyParams> {
    if let FamilyName::F5 = family {
        let [spec] = args else {
            return Err(Failure::Usage("f5 takes one JSON spec".into()));
        };
        return Ok(FamilyParams::F5(json_arg(spec)?));
    }
    let nums = args
        .iter()
        .map(|a| a.parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::Usage(format!("parameters must be natural numbers: {e}")))?;
    let want = match family {
        FamilyName::F4 => 4,
        FamilyName::Sh2 => 3,
        FamilyName::Tv => 6,
        FamilyName::F5 => unreachable!(),
    };
    if nums.len() != want {
        return Err(Failure::Usage(format!("expected {want} parameters, got {}", nums.len())));
    }
    Ok(match family {
        FamilyName::F4 => FamilyParams::F4(FamilyIVParams::new(nums[0], nums[1], nums[2], nums[3])),
        FamilyName::Sh2 => FamilyParams::Sh2(SphericalParams::new(nums[0], nums[1], nums[2])),
        FamilyName::Tv => FamilyParams::ThreeVertex(ThreeVertexParams::new(
            nums[0], nums[1], nums[2], nums[3], nums[4], nums[5],
        )),
        FamilyName::F5 => unreachable!(),
    })
}

fn describe(ctx: &ShiftContext, class: &OrbitClass) -> String {
    match class {
        OrbitClass::Neutral(v) => format!("neutral at {}", ctx.contracted.graph().vertex_name(*v)),
        _ => {
            let m = class.multiplier(&ctx.contracted).expect("multiplier class");
            format!("{m}^{}", class.exponent().expect("multiplier class"))
        }
    }
}

fn write_table(out: &mut String, t: &InvariantTable, opts: ClassifyOptions) {
    let _ = writeln!(
        out,
        "nu {}  tau {}  contracted vertices {}  horizon {}",
        t.nu, t.tau, t.contracted_vertices, t.max_period
    );
    match classify_family_with(t, opts) {
        Ok(c) => {
            let tags: Vec<String> = c.tags.iter().map(|t| t.to_string()).collect();
            let _ = writeln!(out, "family {}  [{}]", c.primary, tags.join(", "));
        }
        Err(e) => {
            let _ = writeln!(out, "family ?  ({e})");
        }
    }
    let _ = writeln!(out, "\n{:>6} {:>10} {:>10} {:>10}", "period", "I0", "I-", "I+");
    for k in 1..=t.max_period {
        let _ = writeln!(out, "{k:>6} {:>10} {:>10} {:>10}", t.i0(k), t.ineg(k), t.ipos(k));
    }
    let width = t
        .multipliers
        .iter()
        .map(|m| m.multiplier.to_string().len())
        .max()
        .unwrap_or(0)
        .max(10);
    let _ = write!(out, "\n{:<width$} {:>6} {:>6} ", "multiplier", "lambda", "delta");
    for k in 1..=t.max_period {
        let _ = write!(out, " {:>6}", format!("I{k}"));
    }
    out.push('\n');
    let show = |x: Option<String>| x.unwrap_or_else(|| "-".into());
    for m in &t.multipliers {
        let _ = write!(
            out,
            "{:<width$} {:>6} {:>6} ",
            m.multiplier.to_string(),
            show(m.lambda.map(|l| l.to_string())),
            show(m.delta.map(|d| d.to_string()))
        );
        for k in 1..=t.max_period {
            let _ = write!(out, " {:>6}", m.count(k));
        }
        out.push('\n');
    }
}

fn write_reconstruction(out: &mut String, r: &Reconstruction) {
    let tags: Vec<String> = r.classification.tags.iter().map(|t| t.to_string()).collect();
    let _ = writeln!(out, "family   {}  [{}]", r.classification.primary, tags.join(", "));
    if !r.classification.undecided.is_empty() {
        let u: Vec<String> = r.classification.undecided.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(out, "         undecided at this horizon: {}", u.join(", "));
    }
    let _ = writeln!(out, "horizon  {}", r.table.max_period);
    match &r.params {
        Some(p) => {
            let _ = writeln!(out, "params   {}", serde_json::to_string(p).expect("serialisable"));
        }
        None => out.push_str("params   none (graph is in no family)\n"),
    }
    if let Some(c) = r.case {
        let _ = writeln!(out, "case     {c}");
    }
}

fn write_report(out: &mut String, r: &RoundTripReport) {
    let status = match r.status {
        RoundTripStatus::Pass => "pass",
        RoundTripStatus::Fail => "FAIL",
        RoundTripStatus::Skipped => "skipped",
    };
    let _ = writeln!(out, "roundtrip {status}");
    if let Some(p) = &r.input {
        let _ = writeln!(out, "input    {}", serde_json::to_string(p).expect("serialisable"));
    }
    write_reconstruction(out, &r.reconstruction);
    if let Some(w) = &r.witness {
        let pairs: Vec<String> = w.iter().map(|(a, b)| format!("{a}->{b}")).collect();
        let _ = writeln!(out, "witness  {}", pairs.join(" "));
    }
    if let Some(d) = &r.diff {
        let _ = writeln!(out, "diff     {d}");
    }
}
