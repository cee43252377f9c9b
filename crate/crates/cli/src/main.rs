use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use borel_core::borel::{borel_bn, bound, bound_factor};
use borel_core::exec::with_threads;
use borel_core::flag::FlagQuad;
use borel_core::hypvol::{dilog_bw, parse_complex, ExtComplex, ProjPoint};
use borel_core::invariant::{borel_invariant, fixtures, lift_veronese, load, maximality_ratio, Verdict};
use borel_core::mathcore::{Complex64, GaussRat, Scalar};
use borel_core::suites::{self, Property, SuiteConfig};
use borel_core::veronese::veronese_flag;
use borel_core::BorelError;
use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "borel", version, about = "Borel cocycle of flag quadruples and the Borel invariant of decorated triangulations")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Tolerance for `verify`, replacing the per-property default.
    #[arg(long, global = true, env = "BOREL_TOL")]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sample batches (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Exact Gaussian-rational arithmetic.
    #[arg(long, global = true)]
    exact: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate B_n on a flag quadruple file.
    Eval { file: PathBuf },
    /// Run a seeded Monte-Carlo property suite.
    Verify {
        #[arg(value_parser = PossibleValuesParser::new(Property::ALL.map(Property::name)).map(|s| s.parse::<Property>().expect("listed name")))]
        property: Property,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Borel invariant of a decorated triangulation.
    Invariant {
        file: PathBuf,
        /// Lift point decorations to flags in C^n through the Veronese embedding.
        #[arg(long)]
        lift: Option<usize>,
    },
    /// Veronese flag of a point of P^1 ("inf", "0.5-1i", ...).
    Veronese {
        #[arg(allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Bloch–Wigner dilogarithm D(z).
    Dilog {
        #[arg(allow_hyphen_values = true)]
        z: String,
    },
    /// Print or write the bundled triangulation fixtures.
    Fixtures {
        name: Option<String>,
        /// Write every fixture as <DIR>/<name>.json.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Input(BorelError),
    Property,
    Invariant(String),
}

impl From<BorelError> for Failure {
    fn from(e: BorelError) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<(), Failure>;

/// `%.15g`-style formatting.
fn sig15(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&exp) {
        return format!("{x:.14e}");
    }
    let decimals = (14 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn read_json(path: &Path) -> Result<Value, BorelError> {
    let text = fs::read_to_string(path).map_err(|e| BorelError::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| BorelError::schema(format!("line {} column {}", e.line(), e.column()), e.to_string()))
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn eval(g: &Global, file: &Path) -> Outcome {
    let doc = read_json(file)?;
    let (value, n) = if g.exact {
        let q = FlagQuad::<GaussRat>::from_json(&doc)?;
        (borel_bn(&q), q.n())
    } else {
        let q = FlagQuad::<Complex64>::from_json(&doc)?;
        (borel_bn(&q), q.n())
    };
    if g.json {
        print_json(&json!({ "value": value, "n": n, "bound": bound(n), "normalized": value / bound(n) }));
    } else {
        println!("{}", sig15(value));
    }
    Ok(())
}

fn verify(g: &Global, property: Property, n: usize, samples: usize) -> Outcome {
    let cfg = SuiteConfig { tol: g.tol, exact: g.exact, ..SuiteConfig::new(property, n, samples, g.seed) };
    let start = Instant::now();
    let report = suites::run(&cfg).map_err(|e| Failure::Usage(e.to_string()))?;
    print_json(&report.to_json());
    eprintln!("wall_time: {:.3}s", start.elapsed().as_secs_f64());
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Property)
    }
}

fn invariant(g: &Global, file: &Path, lift: Option<usize>) -> Outcome {
    let mut dc = load(file)?;
    if let Some(n) = lift {
        dc = lift_veronese(&dc, n).map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let b = borel_invariant(&dc)?;
    let n = dc.n;
    let max = dc.volume.map(|vol| maximality_ratio(b, vol, n)).transpose()?;
    if g.json {
        let mut out = json!({ "command": "invariant", "n": n, "B": b });
        match max {
            Some(m) => {
                out["lambda"] = json!(m.lambda);
                out["normalized"] = json!(m.normalized);
                out["verdict"] = json!(m.verdict.as_str());
            }
            None => out["note"] = json!("no volume metadata; lambda and verdict omitted"),
        }
        print_json(&out);
    } else {
        println!("n = {n}");
        println!("B = {}", sig15(b));
        match max {
            Some(m) => {
                println!("lambda = B/Vol = {}", sig15(m.lambda));
                println!("normalized = lambda / {} = {}", sig15(bound_factor(n)), sig15(m.normalized));
                println!("verdict: {}", m.verdict.as_str());
            }
            None => println!("note: no volume metadata; lambda and verdict omitted"),
        }
    }
    match max {
        Some(m) if m.verdict == Verdict::Inconsistent => {
            Err(Failure::Invariant(format!("|B| exceeds the bound: normalized ratio {}", sig15(m.normalized))))
        }
        _ => Ok(()),
    }
}

fn veronese(g: &Global, point: &str, n: usize) -> Outcome {
    if n == 0 {
        return Err(Failure::Usage("--n must be positive".into()));
    }
    let p = ProjPoint::parse(point).map_err(|e| Failure::Usage(e.to_string()))?;
    let flag = veronese_flag(&p, n).to_json();
    if g.json {
        println!("{flag}");
    } else {
        print_json(&flag);
    }
    Ok(())
}

fn dilog(g: &Global, z: &str) -> Outcome {
    let arg = if z.trim().eq_ignore_ascii_case("inf") {
        ExtComplex::Infinity
    } else {
        ExtComplex::Finite(parse_complex(z).ok_or_else(|| Failure::Usage(format!("not a complex number: {z:?}")))?)
    };
    let value = dilog_bw(arg);
    if g.json {
        let zj = match arg {
            ExtComplex::Infinity => json!("inf"),
            ExtComplex::Finite(w) => w.to_json(),
        };
        print_json(&json!({ "z": zj, "value": value }));
    } else {
        println!("{}", sig15(value));
    }
    Ok(())
}

fn fixtures_cmd(name: Option<&str>, out: Option<&Path>) -> Outcome {
    let all = fixtures();
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| BorelError::Io(format!("{}: {e}", dir.display())))?;
        for (fname, dc) in all.iter().filter(|(f, _)| name.is_none_or(|n| n == *f)) {
            let path = dir.join(format!("{fname}.json"));
            fs::write(&path, dc.to_pretty_string()).map_err(|e| BorelError::Io(format!("{}: {e}", path.display())))?;
            println!("{}", path.display());
        }
        return Ok(());
    }
    match name {
        None => all.iter().for_each(|(f, _)| println!("{f}")),
        Some(n) => {
            let (_, dc) = all.iter().find(|(f, _)| *f == n).ok_or_else(|| Failure::Usage(format!("unknown fixture {n:?}")))?;
            print!("{}", dc.to_pretty_string());
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let g = &cli.global;
    let exact_ok = matches!(cli.command, Command::Eval { .. } | Command::Verify { .. });
    if g.exact && !exact_ok {
        return Err(Failure::Usage("--exact applies to eval and verify only".into()));
    }
    match &cli.command {
        Command::Eval { file } => eval(g, file),
        Command::Verify { property, n, samples } => verify(g, *property, *n, *samples),
        Command::Invariant { file, lift } => invariant(g, file, *lift),
        Command::Veronese { point, n } => veronese(g, point, *n),
        Command::Dilog { z } => dilog(g, z),
        Command::Fixtures { name, out } => fixtures_cmd(name.as_deref(), out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.global.threads;
    match with_threads(threads, || run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Property) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_schema() || matches!(e, BorelError::InvalidInput(_)) { 2 } else { 3 })
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
