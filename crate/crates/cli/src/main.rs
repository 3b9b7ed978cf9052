use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chipsplit::criteria::{hexagon_determinant, Superfactorial};
use chipsplit::enumeration::{
    check_conjecture, enumerate_fundamental_with, sweep_no_valid_outcomes, EnumerationOptions,
};
use chipsplit::hyperfield::contraction::{gamma_set, Parity};
use chipsplit::hyperfield::pipeline::{run_pipeline, SymbolicProver};
use chipsplit::models::{decompose, is_fundamental, model_to_outcome, reduce_model, tightness_family, ParametricModel};
use chipsplit::pascal::is_outcome;
use chipsplit::{ChipConfiguration, Coord};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};

/// Degree bound and positive-support size of the desk-scale envelope.
const ENVELOPE_DEGREE: u32 = 9;
const ENVELOPE_SUPPORT: u32 = 6;
const SWEEP_DESK_DEGREE: u32 = 20;

#[derive(Parser)]
#[command(name = "chipsplit", version, about = "Chipsplitting outcomes and ML-degree-one models")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParityArg {
    Even,
    Odd,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a configuration as a triangle.
    Render {
        file: PathBuf,
        #[arg(long)]
        ascii_dot: bool,
    },
    /// Read a triangle and print its JSON form.
    Parse { file: PathBuf },
    /// Decide whether a configuration is an outcome; exit 1 if not.
    IsOutcome { file: PathBuf },
    /// Reduce a model and write it as a composite of fundamental models.
    Decompose { file: PathBuf },
    /// Test an exponent set such as `2,0 1,1 0,2` for a fundamental model.
    Fundamental {
        #[arg(required = true)]
        points: Vec<String>,
    },
    /// Count fundamental outcomes by positive support size and degree.
    Enumerate {
        #[arg(long, default_value_t = 4)]
        max_degree: u32,
        /// Largest positive support size.
        #[arg(long, default_value_t = 3)]
        support: u32,
        /// Cache directory for finished cells.
        #[arg(long)]
        resume: Option<PathBuf>,
        #[arg(long)]
        long_run: bool,
        /// Also print counts up to transposition.
        #[arg(long)]
        orbits: bool,
    },
    /// Show that no valid outcome with a given positive support size exists
    /// in a degree range.
    Sweep {
        #[arg(long)]
        support: usize,
        #[arg(long)]
        min_degree: u32,
        #[arg(long)]
        max_degree: u32,
        #[arg(long)]
        long_run: bool,
    },
    /// Contraction points surviving the contracted sign equations.
    Gamma {
        #[arg(long, value_enum)]
        parity: ParityArg,
        #[arg(long, default_value_t = 5)]
        support: usize,
    },
    /// Run the case analysis for positive support five at large degree.
    Pipeline,
    /// Hexagon determinants for every admissible shape up to a degree.
    Hexagon {
        #[arg(long, default_value_t = 20)]
        max_degree: u32,
    },
    /// The degree `2k+1` outcome with `k+2` positive entries.
    Family {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        render: bool,
        #[arg(long)]
        ascii_dot: bool,
    },
}

/// Exit status with a message for stderr.
struct Failure {
    code: u8,
    msg: String,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: 2, msg: msg.into() }
}

type CmdResult = Result<bool, Failure>;

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_config(path: &Path) -> Result<ChipConfiguration, Failure> {
    let text = read_input(path)?;
    let parsed = if text.trim_start().starts_with('{') {
        let v: Json = serde_json::from_str(&text)
            .map_err(|e| usage(format!("{}:{}: {e}", path.display(), e.line())))?;
        ChipConfiguration::from_json(&v)
    } else {
        ChipConfiguration::parse(&text)
    };
    parsed.map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn ambient(w: &ChipConfiguration) -> u32 {
    w.bound().unwrap_or(w.degree().max(0) as u32)
}

fn dot(ascii: bool) -> &'static str {
    if ascii {
        "."
    } else {
        "·"
    }
}

/// A closed pipe (e.g. `| head`) ends output quietly.
fn print_json(v: &Json) {
    use std::io::Write;
    let text = serde_json::to_string_pretty(v).expect("json values serialize");
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn parse_point(s: &str) -> Result<Coord, Failure> {
    let t = s.trim().trim_start_matches('(').trim_end_matches(')');
    let (a, b) = t.split_once(',').ok_or_else(|| usage(format!("point {s:?} must look like i,j")))?;
    let num = |x: &str| x.trim().parse::<u32>().map_err(|_| usage(format!("point {s:?} has a bad coordinate")));
    Ok(Coord::new(num(a)?, num(b)?))
}

fn cmd_render(file: &Path, ascii_dot: bool) -> CmdResult {
    let w = read_config(file)?;
    let text = w.render_with(ambient(&w), dot(ascii_dot)).map_err(|e| usage(e.to_string()))?;
    println!("{text}");
    Ok(true)
}

fn cmd_parse(file: &Path) -> CmdResult {
    let w = read_config(file)?;
    print_json(&w.to_json());
    Ok(true)
}

fn cmd_is_outcome(file: &Path, as_json: bool) -> CmdResult {
    let w = read_config(file)?;
    let d = ambient(&w);
    let outcome = is_outcome(&w, d).map_err(|e| usage(e.to_string()))?;
    let a = w.clone().with_bound(Some(d)).analyze().map_err(|e| usage(e.to_string()))?;
    if as_json {
        print_json(&json!({
            "outcome": outcome, "d": d, "degree": a.degree, "valid": a.is_valid,
            "weakly_valid": a.is_weakly_valid,
            "supp_plus": a.supp_plus.iter().map(|c| [c.i, c.j]).collect::<Vec<_>>(),
        }));
    } else {
        println!("outcome: {}", if outcome { "yes" } else { "no" });
        println!("degree: {}", a.degree);
        println!("valid: {}", if a.is_valid { "yes" } else { "no" });
        println!("positive support: {}", a.supp_plus.len());
    }
    Ok(outcome)
}

fn cmd_decompose(file: &Path, as_json: bool) -> CmdResult {
    let text = read_input(file)?;
    let v: Json = serde_json::from_str(&text).map_err(|e| usage(format!("{}:{}: {e}", file.display(), e.line())))?;
    let model = match ParametricModel::from_json(&v) {
        Ok(m) => m,
        Err(chipsplit::Error::NotAModel(msg)) => {
            return Err(Failure { code: 1, msg: format!("{}: not a model: {msg}", file.display()) })
        }
        Err(e) => return Err(usage(format!("{}: {e}", file.display()))),
    };
    let (reduced, steps) = reduce_model(model.terms()).map_err(|e| usage(e.to_string()))?;
    let dec = decompose(&reduced).map_err(|e| usage(e.to_string()))?;
    let folded = dec.fold().map_err(|e| usage(e.to_string()))?;
    let ok = folded == reduced;
    if as_json {
        print_json(&json!({
            "reduced": reduced.to_json(),
            "embedding_steps": steps.len(),
            "mus": dec.mus.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "leaves": dec.leaves.iter().map(ParametricModel::to_json).collect::<Vec<_>>(),
            "recombines": ok,
        }));
    } else {
        println!("reduced: {reduced}");
        println!("embedding steps: {}", steps.len());
        for (k, leaf) in dec.leaves.iter().enumerate() {
            match dec.mus.get(k) {
                Some(mu) => println!("leaf {k} (mu = {mu}): {leaf}"),
                None => println!("leaf {k}: {leaf}"),
            }
        }
        println!("recombines exactly: {}", if ok { "yes" } else { "no" });
    }
    Ok(ok)
}

fn cmd_fundamental(points: &[String], as_json: bool) -> CmdResult {
    let s: BTreeSet<Coord> = points.iter().map(|p| parse_point(p)).collect::<Result<_, _>>()?;
    if s.contains(&Coord::ORIGIN) {
        return Err(usage("the exponent set must not contain 0,0"));
    }
    let d = s.iter().map(|c| c.deg()).max().unwrap_or(0);
    let v = is_fundamental(&s, d).map_err(|e| usage(e.to_string()))?;
    if as_json {
        print_json(&json!({
            "fundamental": v.fundamental,
            "outcome": v.outcome.as_ref().map(ChipConfiguration::to_json),
            "model": v.model.as_ref().map(ParametricModel::to_json),
        }));
    } else if let (Some(w), Some(m)) = (&v.outcome, &v.model) {
        println!("fundamental: yes");
        println!("{}", w.render(d).expect("degree fits"));
        println!("{m}");
    } else {
        println!("fundamental: no");
    }
    Ok(v.fundamental)
}

fn cmd_enumerate(max_degree: u32, support: u32, resume: Option<PathBuf>, long_run: bool, orbits: bool, as_json: bool) -> CmdResult {
    if support < 2 {
        return Err(usage("--support must be at least 2"));
    }
    if (max_degree > ENVELOPE_DEGREE || support > ENVELOPE_SUPPORT) && !long_run {
        return Err(usage(format!(
            "degree > {ENVELOPE_DEGREE} or support > {ENVELOPE_SUPPORT} needs --long-run"
        )));
    }
    let mut opts = EnumerationOptions::from_env();
    if resume.is_some() {
        opts.cache_dir = resume;
    }
    let report = enumerate_fundamental_with(max_degree, support - 1, &opts).map_err(|e| usage(e.to_string()))?;
    let check = check_conjecture(&report);
    if as_json {
        let mut v = report.to_json();
        if orbits {
            v["orbits"] = report.orbit_table().iter().map(|((n, d), c)| json!([n, d, c])).collect();
        }
        print_json(&v);
    } else {
        println!("{:>3} {:>3} {:>6}", "n", "d", "count");
        for ((n, d), c) in &report.table {
            println!("{n:>3} {d:>3} {c:>6}");
        }
        if orbits {
            println!("up to transposition:");
            for ((n, d), c) in report.orbit_table() {
                println!("{n:>3} {d:>3} {c:>6}");
            }
        }
        let eq: Vec<String> = check.equality_cases.iter().map(|(n, c)| format!("n={n}: {c}")).collect();
        println!("n <= d <= 2n-1 on every outcome: {}", if check.holds { "yes" } else { "no" });
        println!("outcomes with d = 2n-1: {}", eq.join(", "));
        eprintln!("{} cells ({} cached) in {:.2?}", report.stats.cells.len(), report.stats.cached_cells, report.stats.elapsed);
    }
    Ok(check.holds)
}

fn cmd_sweep(support: usize, min_degree: u32, max_degree: u32, long_run: bool, as_json: bool) -> CmdResult {
    if min_degree == 0 || min_degree > max_degree {
        return Err(usage("need 1 <= --min-degree <= --max-degree"));
    }
    if max_degree > SWEEP_DESK_DEGREE && !long_run {
        return Err(usage(format!("degrees above {SWEEP_DESK_DEGREE} need --long-run")));
    }
    let certs = sweep_no_valid_outcomes(support, min_degree..=max_degree).map_err(|e| usage(e.to_string()))?;
    let ok = certs.iter().all(|c| c.proves_absence());
    if as_json {
        print_json(&Json::Array(certs.iter().map(|c| c.to_json()).collect()));
    } else {
        for c in &certs {
            println!(
                "d={:<3} nodes={:<9} hyperfield survivors={:<5} valid={} {}",
                c.d,
                c.search_nodes,
                c.hyperfield_survivors,
                c.valid.len(),
                if c.proves_absence() { "none" } else { "FOUND" }
            );
        }
    }
    Ok(ok)
}

fn cmd_gamma(parity: ParityArg, support: usize, as_json: bool) -> CmdResult {
    let p = match parity {
        ParityArg::Even => Parity::Even,
        ParityArg::Odd => Parity::Odd,
    };
    let pts = gamma_set(p, support).map_err(|e| usage(e.to_string()))?;
    if as_json {
        print_json(&json!({
            "parity": p.name(), "support": support, "count": pts.len(),
            "points": pts.iter().map(|t| t.to_json()).collect::<Vec<_>>(),
        }));
    } else {
        println!("{} points of positive support {support} for {} degrees", pts.len(), p.name());
    }
    Ok(true)
}

fn cmd_pipeline(as_json: bool) -> CmdResult {
    let report = run_pipeline(&SymbolicProver::default()).map_err(|e| usage(e.to_string()))?;
    let c = &report.counts;
    if as_json {
        print_json(&report.to_json());
    } else {
        println!("cases                    {}", c.cases);
        println!("after invertibility      {}", c.after_invertibility);
        println!("after symmetry           {}", c.after_symmetry);
        println!("after hexagon, no strip  {}", c.after_hexagon_no_strip);
        println!("after hexagon            {}", c.after_hexagon);
        println!("survivors                {}", c.survivors);
    }
    Ok(c.survivors == 0)
}

fn cmd_hexagon(max_degree: u32, as_json: bool) -> CmdResult {
    let mut rows = Vec::new();
    let mut all_nonzero = true;
    let mut shifted = 0;
    let mut from_one = 0;
    for d in 2..=max_degree {
        for dp in 1..=d / 3 {
            for l1 in dp..=d - 2 * dp {
                let h = hexagon_determinant(d, dp, l1).map_err(|e| usage(e.to_string()))?;
                all_nonzero &= h.direct != 0.into();
                shifted += h.matching.iter().filter(|m| **m == Superfactorial::Shifted).count();
                from_one += h.matching.iter().filter(|m| **m == Superfactorial::FromOne).count();
                rows.push(h);
            }
        }
    }
    if as_json {
        print_json(&json!({
            "shapes": rows.len(), "all_nonzero": all_nonzero,
            "formula_matches": { "shifted": shifted, "from_one": from_one },
            "determinants": serde_json::to_value(&rows).expect("serializable"),
        }));
    } else {
        println!("{} shapes with d <= {max_degree}", rows.len());
        println!("all determinants nonzero: {}", if all_nonzero { "yes" } else { "no" });
        println!("product formula agrees: shifted superfactorial {shifted}, superfactorial from 1 {from_one}");
    }
    Ok(all_nonzero)
}

fn cmd_family(k: u32, render: bool, ascii_dot: bool, as_json: bool) -> CmdResult {
    let w = tightness_family(k).map_err(|e| usage(e.to_string()))?;
    let d = 2 * k + 1;
    let model = chipsplit::models::integral_outcome_to_model(&w).map_err(|e| usage(e.to_string()))?;
    let back = model_to_outcome(&model).map_err(|e| usage(e.to_string()))?;
    let ok = back == w.to_rational();
    if as_json {
        print_json(&json!({ "k": k, "outcome": w.to_json(), "model": model.to_json() }));
    } else if render {
        println!("{}", w.render_with(d, dot(ascii_dot)).expect("degree fits"));
    } else {
        println!("{model}");
    }
    Ok(ok)
}

fn run(cli: Cli) -> CmdResult {
    let as_json = cli.json;
    match cli.command {
        Command::Render { file, ascii_dot } => cmd_render(&file, ascii_dot),
        Command::Parse { file } => cmd_parse(&file),
        Command::IsOutcome { file } => cmd_is_outcome(&file, as_json),
        Command::Decompose { file } => cmd_decompose(&file, as_json),
        Command::Fundamental { points } => cmd_fundamental(&points, as_json),
        Command::Enumerate { max_degree, support, resume, long_run, orbits } => {
            cmd_enumerate(max_degree, support, resume, long_run, orbits, as_json)
        }
        Command::Sweep { support, min_degree, max_degree, long_run } => {
            cmd_sweep(support, min_degree, max_degree, long_run, as_json)
        }
        Command::Gamma { parity, support } => cmd_gamma(parity, support, as_json),
        Command::Pipeline => cmd_pipeline(as_json),
        Command::Hexagon { max_degree } => cmd_hexagon(max_degree, as_json),
        Command::Family { k, render, ascii_dot } => cmd_family(k, render, ascii_dot, as_json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

