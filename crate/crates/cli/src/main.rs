use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tropmu::charpoly::reduced_char_poly;
use tropmu::corpus;
use tropmu::fan::{bergman_weight, face_counts, Fan};
use tropmu::matroid::NamedMatroid;
use tropmu::validate::{
    self, check, check_all, prepare, CheckOptions, Method, ValidationReport, DISPLACEMENT_MAX_N,
};
use tropmu::{Error, Matroid};

/// Characteristic polynomials of matroids, four ways.
#[derive(Parser)]
#[command(name = "tropmu", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print χ, χ̄ and the μ-vector.
    Charpoly { file: PathBuf },
    /// Compute the μ-vector with one method, or all of them.
    Mu {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        method: MethodArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the contributing displacement pairs as NDJSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run every method and check and print a validation report.
    Check {
        file: PathBuf,
        #[command(flatten)]
        opts: CheckArgs,
    },
    /// Export the Bergman fan as a weighted list of maximal cones.
    Fan {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check every built-in matroid.
    Corpus {
        /// Print the full reports instead of a table.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        opts: CheckArgs,
    },
}

#[derive(clap::Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum)]
    skip: Vec<SkipArg>,
    /// Recompute the displacement degrees with this many random vectors.
    #[arg(long, default_value_t = 0)]
    perturbations: usize,
    /// Include wall-clock timings (reports stop being byte-identical).
    #[arg(long)]
    timings: bool,
}

impl CheckArgs {
    fn options(&self) -> CheckOptions {
        CheckOptions {
            seed: self.seed,
            skip_displacement: self.skip.contains(&SkipArg::Displacement),
            perturbations: self.perturbations,
            timings: self.timings,
            ..CheckOptions::default()
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SkipArg {
    Displacement,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Mobius,
    Flags,
    Displacement,
    Divisor,
    All,
}

impl MethodArg {
    fn methods(self) -> Vec<Method> {
        match self {
            MethodArg::Mobius => vec![Method::Mobius],
            MethodArg::Flags => vec![Method::Flags],
            MethodArg::Displacement => vec![Method::Displacement],
            MethodArg::Divisor => vec![Method::Divisor],
            MethodArg::All => Method::ALL.to_vec(),
        }
    }
}

/// Exit codes: 0 pass, 1 disagreement or failed check, 2 bad input,
/// 3 broken invariant.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_input() { 2 } else { 3 },
            message: e.to_string(),
        }
    }
}

fn input_failure(message: String) -> Failure {
    Failure { code: 2, message }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", json!({ "error": f.message }));
            ExitCode::from(f.code)
        }
    }
}

fn run(cmd: Command) -> Result<u8, Failure> {
    match cmd {
        Command::Charpoly { file } => cmd_charpoly(&file),
        Command::Mu {
            file,
            method,
            seed,
            trace,
        } => cmd_mu(&file, method, seed, trace.as_deref()),
        Command::Check { file, opts } => {
            let (name, m) = load(&file)?;
            let report = check(&name, &m, &opts.options());
            println!("{}", report.to_json());
            Ok(report.exit_code() as u8)
        }
        Command::Fan { file, out } => cmd_fan(&file, &out),
        Command::Corpus { json, opts } => cmd_corpus(json, &opts.options()),
    }
}

fn load(path: &Path) -> Result<(String, Matroid), Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| input_failure(format!("cannot read {}: {e}", path.display())))?;
    let spec = NamedMatroid::from_json(&text)?;
    let m = spec.build()?;
    Ok((spec.name, m))
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialize"));
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn cmd_charpoly(file: &Path) -> Result<u8, Failure> {
    let (name, input) = load(file)?;
    let (m, simplification) = prepare(&input);
    let cp = reduced_char_poly(&m)?;
    print(&json!({
        "name": name,
        "simplification": simplification,
        "char_poly": cp.char_poly.to_decimal_strings(),
        "reduced_char_poly": cp.reduced.to_decimal_strings(),
        "mu": strings(&cp.mu),
    }));
    Ok(0)
}

fn cmd_mu(file: &Path, method: MethodArg, seed: u64, trace: Option<&Path>) -> Result<u8, Failure> {
    let (name, input) = load(file)?;
    let (m, simplification) = prepare(&input);
    let mut results = serde_json::Map::new();
    let mut vectors = Vec::new();
    for meth in method.methods() {
        let mu = match meth {
            Method::Mobius => strings(&validate::mu_mobius(&m)?),
            Method::Flags => strings(&validate::mu_flags(&m)?),
            Method::Divisor => strings(&validate::mu_divisor(&m)?.0),
            Method::Displacement => {
                if m.n() > DISPLACEMENT_MAX_N {
                    return Err(input_failure(format!(
                        "displacement needs n <= {DISPLACEMENT_MAX_N}, got {}",
                        m.n()
                    )));
                }
                displacement(&m, seed, trace)?
            }
        };
        results.insert(meth.name().to_string(), json!(mu));
        vectors.push(mu);
    }
    let agreement = vectors.windows(2).all(|w| w[0] == w[1]);
    print(&json!({
        "name": name,
        "simplification": simplification,
        "mu": results,
        "agreement": agreement,
    }));
    Ok(if agreement { 0 } else { 1 })
}

fn displacement(m: &Matroid, seed: u64, trace: Option<&Path>) -> Result<Vec<String>, Failure> {
    let pairings = validate::mu_displacement_seeded(m, seed, 16)?;
    if let Some(p) = trace {
        let mut f = fs::File::create(p)
            .map_err(|e| input_failure(format!("cannot create {}: {e}", p.display())))?;
        for (k, c) in pairings.iter().enumerate() {
            for t in &c.pairing.terms {
                let line = json!({ "k": k, "vector": c.vector.to_strings(), "term": t });
                writeln!(f, "{line}").map_err(|e| Failure {
                    code: 3,
                    message: format!("writing trace: {e}"),
                })?;
            }
        }
    }
    Ok(pairings.iter().map(|c| c.pairing.degree.to_string()).collect())
}

fn cmd_fan(file: &Path, out: &Path) -> Result<u8, Failure> {
    let (name, input) = load(file)?;
    let (m, simplification) = prepare(&input);
    let w = bergman_weight(&m)?;
    let text = serde_json::to_string_pretty(&w.to_json()).expect("weights serialize");
    fs::write(out, text + "\n")
        .map_err(|e| input_failure(format!("cannot write {}: {e}", out.display())))?;
    print(&json!({
        "name": name,
        "simplification": simplification,
        "maximal_cones": w.support_len(),
        "face_counts": face_counts(&Fan::from_weight(&w)),
        "out": out.display().to_string(),
    }));
    Ok(0)
}

fn cmd_corpus(as_json: bool, opts: &CheckOptions) -> Result<u8, Failure> {
    let entries = corpus::builtin();
    let results = check_all(&entries, opts);
    let mut code = 0u8;
    let mut reports: Vec<&ValidationReport> = Vec::new();
    for r in &results {
        match r {
            Ok(rep) => {
                code = code.max(rep.exit_code() as u8);
                reports.push(rep);
            }
            Err(e) => code = code.max(Failure::from(e.clone()).code),
        }
    }
    if as_json {
        let items: Vec<Value> = entries
            .iter()
            .zip(&results)
            .map(|(e, r)| match r {
                Ok(rep) => serde_json::to_value(rep).expect("reports serialize"),
                Err(err) => json!({ "name": e.name(), "error": err.to_string() }),
            })
            .collect();
        print(&Value::Array(items));
    } else {
        println!(
            "{:<10} {:>4} {:>4}  {:<28} {:>5} {:>5} {:>5} {:>5}  result",
            "name", "size", "rank", "mu", "agree", "logc", "trunc", "wm"
        );
        for (e, r) in entries.iter().zip(&results) {
            match r {
                Ok(rep) => println!("{}", table_row(rep)),
                Err(err) => println!("{:<10} error: {err}", e.name()),
            }
        }
        let passed = reports.iter().filter(|r| r.passed).count();
        println!("{passed}/{} passed", entries.len());
    }
    Ok(code)
}

fn table_row(r: &ValidationReport) -> String {
    let mu = r
        .mu(Method::Mobius)
        .map(|v| format!("({})", strings(v).join(",")))
        .unwrap_or_else(|| "-".into());
    let flag = |b: Option<bool>| match b {
        Some(true) => "yes",
        Some(false) => "NO",
        None => "-",
    };
    format!(
        "{:<10} {:>4} {:>4}  {:<28} {:>5} {:>5} {:>5} {:>5}  {}",
        r.name,
        r.size,
        r.rank,
        mu,
        flag(Some(r.agreement)),
        flag(r.log_concave.as_ref().map(|l| l.holds())),
        flag(r.truncation_identity),
        flag(r.welsh_mason.as_ref().map(|w| w.holds)),
        if r.passed { "pass" } else { "FAIL" }
    )
}
