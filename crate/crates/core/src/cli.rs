//! Command-line front door.
//!
//! Every subcommand is first turned into a [`Job`], a plain serializable
//! value. Jobs are what batch mode reads from stdin (one JSON object per
//! line) and what the result cache hashes, so a rerun of an identical job
//! replays the stored JSON byte for byte.
//!
//! Exit codes: 0 success, 1 internal, 2 parse error, 3 semantic error,
//! 4 resource limit.

use std::collections::BTreeSet;
use std::fs::{self, OpenOptions};
use std::io::{self, BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::expr::{
    canonical_combination, combinations_equal, parse_combination, parse_equation, parse_int_string,
    ExprError,
};
use crate::search::{
    fs as finite_sums, min_forcing_n, mt_sums, solutions_in_set, MTSpec, SearchConfig,
    SearchError, DEFAULT_MT_CAP, DEFAULT_NODE_BUDGET,
};
use crate::ueq::{reduce, Polynomial};
use crate::witness::{build_family, build_witness, verify_family, PolynomialFamily, WitnessError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_SEMANTIC: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

/// Environment variable overriding the default node budget of `force`.
pub const BUDGET_ENV: &str = "RADOKIT_BUDGET";

/// One unit of work.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Job {
    Canon {
        string: String,
    },
    Equal {
        left: String,
        right: String,
    },
    Witness {
        equation: String,
        #[serde(default)]
        verify: bool,
    },
    Family {
        equation: String,
    },
    Verify {
        equation: String,
        target: String,
        family: Vec<String>,
        #[serde(default = "default_true")]
        distinct: bool,
    },
    Solve {
        equation: String,
        set: Vec<u64>,
        #[serde(default)]
        distinct: bool,
        #[serde(default = "default_limit")]
        limit: usize,
    },
    Force {
        equation: String,
        colors: usize,
        #[serde(default)]
        distinct: bool,
        max: usize,
        #[serde(default)]
        budget: Option<u64>,
        #[serde(default = "default_true")]
        symmetry: bool,
    },
    Mtsums {
        ground: Vec<u64>,
        coeffs: Vec<u64>,
    },
    Fs {
        ground: Vec<u64>,
    },
}

fn default_true() -> bool {
    true
}

fn default_limit() -> usize {
    100
}

impl Job {
    pub fn name(&self) -> &'static str {
        match self {
            Job::Canon { .. } => "canon",
            Job::Equal { .. } => "equal",
            Job::Witness { .. } => "witness",
            Job::Family { .. } => "family",
            Job::Verify { .. } => "verify",
            Job::Solve { .. } => "solve",
            Job::Force { .. } => "force",
            Job::Mtsums { .. } => "mtsums",
            Job::Fs { .. } => "fs",
        }
    }

    /// Fills in defaults that depend on the environment, so that the cache
    /// key reflects what actually runs.
    pub fn resolved(mut self) -> Result<Self, CliError> {
        if let Job::Force { budget, .. } = &mut self {
            if budget.is_none() {
                *budget = Some(budget_from_env()?);
            }
        }
        Ok(self)
    }

    /// SHA-256 of the job's canonical JSON.
    pub fn digest(&self) -> String {
        let text = serde_json::to_string(self).expect("jobs serialize");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

fn budget_from_env() -> Result<u64, CliError> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            CliError::new(EXIT_SEMANTIC, format!("{BUDGET_ENV}={v:?} is not a node count"))
        }),
        Err(_) => Ok(DEFAULT_NODE_BUDGET),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub exit_code: i32,
    pub message: String,
    /// Partial results, e.g. search progress when a budget ran out.
    pub partial: Option<Value>,
}

impl CliError {
    pub fn new(exit_code: i32, message: impl Into<String>) -> Self {
        CliError {
            exit_code,
            message: message.into(),
            partial: None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "error": self.message,
            "exit_code": self.exit_code,
        });
        if let Some(p) = &self.partial {
            v["partial"] = p.clone();
        }
        v
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        let code = match e {
            ExprError::Parse { .. } => EXIT_PARSE,
            ExprError::Semantic(_) => EXIT_SEMANTIC,
        };
        CliError::new(code, e.to_string())
    }
}

impl From<WitnessError> for CliError {
    fn from(e: WitnessError) -> Self {
        CliError::new(EXIT_SEMANTIC, e.to_string())
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::ResourceExceeded { nodes, longest_prefix } => CliError {
                exit_code: EXIT_RESOURCE,
                message: e.to_string(),
                partial: Some(json!({
                    "nodes": nodes,
                    "longest_valid_prefix": longest_prefix,
                })),
            },
            SearchError::EnumerationCapExceeded { .. } => CliError::new(EXIT_RESOURCE, e.to_string()),
            _ => CliError::new(EXIT_SEMANTIC, e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::new(EXIT_INTERNAL, e.to_string())
    }
}

fn strings(v: impl IntoIterator<Item = impl ToString>) -> Value {
    Value::Array(v.into_iter().map(|x| Value::String(x.to_string())).collect())
}

/// Runs a job and returns its JSON result.
pub fn run_job(job: &Job) -> Result<Value, CliError> {
    match job {
        Job::Canon { string } => {
            let s = parse_int_string(string)?;
            let c = reduce(&s);
            Ok(json!({
                "input": s,
                "canonical": c,
                "text": c.to_string(),
            }))
        }
        Job::Equal { left, right } => {
            let l = parse_combination(left)?;
            let r = parse_combination(right)?;
            Ok(json!({
                "equal": combinations_equal(&l, &r),
                "left": canonical_combination(&l).to_string(),
                "right": canonical_combination(&r).to_string(),
                "left_canonical": strings(canonical_combination(&l).coeffs()),
                "right_canonical": strings(canonical_combination(&r).coeffs()),
            }))
        }
        Job::Witness { equation, verify } => {
            let parsed = parse_equation(equation)?;
            let w = build_witness(&parsed.eq)?;
            let combination: Vec<String> = w
                .coefficients()
                .iter()
                .map(|a| format!("{a}U"))
                .collect();
            let mut out = json!({
                "equation": parsed.eq.to_string(),
                "variables": parsed.variable_names,
                "sorted": w.sorted_equation(),
                "permutation": w.permutation(),
                "witness": strings(w.coefficients()),
                "combination": combination.join(" (+) "),
            });
            if *verify {
                let family = build_family(w.coefficients())?;
                let report = verify_family(w.sorted_equation(), &w.as_string(), &family, true)?
                    .with_permutation(w.permutation().to_vec());
                out["verification"] = serde_json::to_value(&report).expect("report serializes");
            }
            Ok(out)
        }
        Job::Family { equation } => {
            let parsed = parse_equation(equation)?;
            let w = build_witness(&parsed.eq)?;
            let family = build_family(w.coefficients())?;
            Ok(json!({
                "sorted": w.sorted_equation(),
                "permutation": w.permutation(),
                "witness": strings(w.coefficients()),
                "family": family,
                "polynomials": strings(family.members()),
            }))
        }
        Job::Verify {
            equation,
            target,
            family,
            distinct,
        } => {
            let parsed = parse_equation(equation)?;
            let target = parse_int_string(target)?;
            let members = family
                .iter()
                .map(|m| parse_int_string(m).map(Polynomial::from))
                .collect::<Result<Vec<_>, _>>()?;
            let report = verify_family(&parsed.eq, &target, &PolynomialFamily::new(members), *distinct)?;
            let mut out = serde_json::to_value(&report).expect("report serializes");
            out["passed"] = Value::Bool(report.passed());
            Ok(out)
        }
        Job::Solve {
            equation,
            set,
            distinct,
            limit,
        } => {
            let parsed = parse_equation(equation)?;
            let set: BTreeSet<u64> = set.iter().copied().collect();
            let sols = solutions_in_set(&parsed.eq, &set, *distinct, *limit)?;
            Ok(json!({
                "variables": parsed.variable_names,
                "count": sols.len(),
                "solutions": sols,
            }))
        }
        Job::Force {
            equation,
            colors,
            distinct,
            max,
            budget,
            symmetry,
        } => {
            let parsed = parse_equation(equation)?;
            let config = SearchConfig {
                node_budget: budget.unwrap_or(DEFAULT_NODE_BUDGET),
                color_symmetry: *symmetry,
                parallel: true,
            };
            let report = min_forcing_n(&parsed.eq, *colors, *distinct, *max, &config)?;
            Ok(serde_json::to_value(&report.outcome).expect("outcome serializes"))
        }
        Job::Mtsums { ground, coeffs } => {
            let spec = MTSpec::new(ground.clone(), coeffs.clone())?;
            let sums = mt_sums(&spec, DEFAULT_MT_CAP)?;
            Ok(json!({ "count": sums.len(), "sums": strings(&sums) }))
        }
        Job::Fs { ground } => {
            let sums = finite_sums(ground, DEFAULT_MT_CAP)?;
            Ok(json!({ "count": sums.len(), "sums": strings(&sums) }))
        }
    }
}

/// Human-readable rendering of a job result.
pub fn render_human(job: &Job, result: &Value) -> String {
    let list = |v: &Value| -> String {
        let items: Vec<String> = v
            .as_array()
            .map(|a| {
                a.iter()
                    .map(|x| x.as_str().map_or_else(|| x.to_string(), str::to_owned))
                    .collect()
            })
            .unwrap_or_default();
        items.join(",")
    };
    match job {
        Job::Canon { .. } => result["text"].as_str().unwrap_or_default().to_owned(),
        Job::Equal { .. } => format!(
            "{}\n{}\n{}",
            result["equal"], result["left"].as_str().unwrap_or_default(),
            result["right"].as_str().unwrap_or_default()
        ),
        Job::Witness { .. } => {
            let mut s = format!(
                "a = [{}]\npermutation = [{}]\ncombination = {}",
                list(&result["witness"]),
                list(&result["permutation"]),
                result["combination"].as_str().unwrap_or_default()
            );
            if let Some(v) = result.get("verification") {
                s.push_str(&format!(
                    "\nsum_zero = {}\nall_u_equivalent = {}\npairwise_distinct = {}",
                    v["sum_zero"], v["all_u_equivalent"], v["pairwise_distinct"]
                ));
            }
            s
        }
        Job::Family { .. } => {
            let polys = result["polynomials"].as_array().cloned().unwrap_or_default();
            let mut lines = vec![format!("a = [{}]", list(&result["witness"]))];
            for (i, p) in polys.iter().enumerate() {
                lines.push(format!("P{} = {}", i + 1, p.as_str().unwrap_or_default()));
            }
            lines.join("\n")
        }
        Job::Verify { .. } => format!(
            "sum_zero = {}\nall_u_equivalent = {}\npairwise_distinct = {}\npassed = {}",
            result["sum_zero"], result["all_u_equivalent"], result["pairwise_distinct"], result["passed"]
        ),
        Job::Solve { .. } => {
            let sols = result["solutions"].as_array().cloned().unwrap_or_default();
            let mut lines = vec![format!("{} solution(s)", sols.len())];
            lines.extend(sols.iter().map(|s| format!("({})", list(s))));
            lines.join("\n")
        }
        Job::Force { .. } => {
            if result["forced"] == Value::Bool(true) {
                format!(
                    "forced at N = {} (search exhausted, {} nodes)",
                    result["n"], result["nodes"]
                )
            } else {
                format!(
                    "not forced up to N = {}; counterexample coloring [{}] ({} nodes)",
                    result["n"],
                    list(&result["certificate"]),
                    result["nodes"]
                )
            }
        }
        Job::Mtsums { .. } | Job::Fs { .. } => format!("{{{}}}", list(&result["sums"]).replace(',', ", ")),
    }
}

/// Append-only JSON-lines store of job results keyed by input digest.
pub struct ResultCache {
    path: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JobRecord {
    pub command: String,
    pub input_digest: String,
    pub result: Value,
    pub wall_time_ms: f64,
}

impl ResultCache {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        ResultCache { path: path.into() }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn lookup(&self, digest: &str) -> Result<Option<JobRecord>, CliError> {
        let file = match fs::File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.into()),
        };
        for line in io::BufReader::new(file).lines() {
            let line = line?;
            // a torn last line from an interrupted write is skipped
            let Ok(record) = serde_json::from_str::<JobRecord>(&line) else {
                continue;
            };
            if record.input_digest == digest {
                return Ok(Some(record));
            }
        }
        Ok(None)
    }

    pub fn append(&self, record: &JobRecord) -> Result<(), CliError> {
        if let Some(dir) = self.path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        let line = serde_json::to_string(record).expect("records serialize");
        writeln!(f, "{line}")?;
        Ok(())
    }
}

/// Runs a job through the cache when one is given.
pub fn run_cached(job: &Job, cache: Option<&ResultCache>) -> Result<Value, CliError> {
    let Some(cache) = cache else {
        return run_job(job);
    };
    let digest = job.digest();
    if let Some(record) = cache.lookup(&digest)? {
        return Ok(record.result);
    }
    let start = Instant::now();
    let result = run_job(job)?;
    cache.append(&JobRecord {
        command: job.name().to_owned(),
        input_digest: digest,
        result: result.clone(),
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    })?;
    Ok(result)
}

#[derive(Parser, Debug)]
#[command(name = "radokit", version, about = "u-equivalence, Rado witnesses and coloring search")]
pub struct Cli {
    /// Print machine-readable JSON instead of the human form.
    #[arg(long, global = true)]
    pub json: bool,
    /// Do not read or write the result cache.
    #[arg(long, global = true)]
    pub no_cache: bool,
    /// Result cache file.
    #[arg(long, global = true, env = "RADOKIT_CACHE", default_value = ".radokit-cache.jsonl")]
    pub cache: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct EquationArg {
    /// Equation such as "3x1+x2+x3-x4-4x5=0".
    pub equation: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Canonical form of an integer string such as "[3,0,0,-4,1,1]".
    Canon {
        #[arg(required_unless_present = "file")]
        string: Option<String>,
        /// Read the string literal from a file.
        #[arg(long, conflicts_with = "string")]
        file: Option<PathBuf>,
    },
    /// Decide whether two combinations like "2U (+) U" are equal.
    Equal { left: String, right: String },
    /// Witness coefficients for a sum-zero equation.
    Witness {
        #[command(flatten)]
        eq: EquationArg,
        /// Also build and verify the polynomial family.
        #[arg(long)]
        verify: bool,
    },
    /// The polynomial family certifying the witness.
    Family {
        #[command(flatten)]
        eq: EquationArg,
    },
    /// Verify a user-supplied polynomial family against a target string.
    Verify {
        #[command(flatten)]
        eq: EquationArg,
        /// Target string, e.g. "[1,2]".
        #[arg(long)]
        target: String,
        /// One coefficient string per variable, ascending degree.
        #[arg(long = "member", required = true)]
        members: Vec<String>,
        /// Do not require pairwise distinct members.
        #[arg(long)]
        allow_equal: bool,
    },
    /// Solutions with all values in a finite set.
    Solve {
        #[command(flatten)]
        eq: EquationArg,
        /// Comma-separated set of positive integers.
        #[arg(long, value_delimiter = ',', required_unless_present = "max")]
        set: Vec<u64>,
        /// Use the set {1..N}.
        #[arg(long, conflicts_with = "set")]
        max: Option<u64>,
        #[arg(long)]
        distinct: bool,
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Least N forcing a monochromatic solution under every r-coloring.
    Force {
        #[command(flatten)]
        eq: EquationArg,
        #[arg(long, default_value_t = 2)]
        colors: usize,
        #[arg(long)]
        distinct: bool,
        #[arg(long)]
        max: usize,
        /// Node budget; defaults to $RADOKIT_BUDGET or 10^8.
        #[arg(long)]
        budget: Option<u64>,
        /// Only fix the color of 1, without first-occurrence ordering.
        #[arg(long)]
        no_symmetry: bool,
    },
    /// Milliken-Taylor sums of a ground sequence with block coefficients.
    Mtsums {
        #[arg(long, value_delimiter = ',', required = true)]
        ground: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        coeffs: Vec<u64>,
    },
    /// Finite sums FS of a ground sequence.
    Fs {
        #[arg(long, value_delimiter = ',', required = true)]
        ground: Vec<u64>,
    },
    /// Read one JSON job per line from stdin, write one JSON result per line.
    Batch,
}

impl Command {
    fn into_job(self) -> Result<Job, CliError> {
        Ok(match self {
            Command::Canon { string, file } => {
                let string = match (string, file) {
                    (Some(s), _) => s,
                    (None, Some(path)) => fs::read_to_string(&path)?,
                    (None, None) => unreachable!("clap requires one of them"),
                };
                Job::Canon { string }
            }
            Command::Equal { left, right } => Job::Equal { left, right },
            Command::Witness { eq, verify } => Job::Witness {
                equation: eq.equation,
                verify,
            },
            Command::Family { eq } => Job::Family { equation: eq.equation },
            Command::Verify {
                eq,
                target,
                members,
                allow_equal,
            } => Job::Verify {
                equation: eq.equation,
                target,
                family: members,
                distinct: !allow_equal,
            },
            Command::Solve {
                eq,
                set,
                max,
                distinct,
                limit,
            } => Job::Solve {
                equation: eq.equation,
                set: match max {
                    Some(n) => (1..=n).collect(),
                    None => set,
                },
                distinct,
                limit,
            },
            Command::Force {
                eq,
                colors,
                distinct,
                max,
                budget,
                no_symmetry,
            } => Job::Force {
                equation: eq.equation,
                colors,
                distinct,
                max,
                budget,
                symmetry: !no_symmetry,
            },
            Command::Mtsums { ground, coeffs } => Job::Mtsums { ground, coeffs },
            Command::Fs { ground } => Job::Fs { ground },
            Command::Batch => unreachable!("batch is handled separately"),
        })
    }
}

/// Batch mode. Returns 0 when every job succeeded, otherwise the exit code
/// of the first failing job.
pub fn run_batch(
    input: impl BufRead,
    mut out: impl Write,
    cache: Option<&ResultCache>,
) -> Result<i32, CliError> {
    let mut status = EXIT_OK;
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let outcome = serde_json::from_str::<Job>(&line)
            .map_err(|e| CliError::new(EXIT_PARSE, format!("invalid job: {e}")))
            .and_then(Job::resolved)
            .and_then(|job| run_cached(&job, cache));
        let record = match outcome {
            Ok(result) => json!({ "ok": true, "result": result }),
            Err(e) => {
                if status == EXIT_OK {
                    status = e.exit_code;
                }
                let mut v = e.to_json();
                v["ok"] = Value::Bool(false);
                v
            }
        };
        writeln!(out, "{record}")?;
    }
    Ok(status)
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    let cache = (!cli.no_cache).then(|| ResultCache::new(&cli.cache));
    let json_mode = cli.json;

    if let Command::Batch = cli.command {
        let stdin = io::stdin();
        let stdout = io::stdout();
        return match run_batch(stdin.lock(), BufWriter::new(stdout.lock()), cache.as_ref()) {
            Ok(code) => code,
            Err(e) => report_error(&e, json_mode),
        };
    }

    let outcome = cli
        .command
        .into_job()
        .and_then(Job::resolved)
        .and_then(|job| run_cached(&job, cache.as_ref()).map(|v| (job, v)));
    match outcome {
        Ok((job, result)) => {
            if json_mode {
                println!("{result}");
            } else {
                println!("{}", render_human(&job, &result));
            }
            EXIT_OK
        }
        Err(e) => report_error(&e, json_mode),
    }
}

fn report_error(e: &CliError, json_mode: bool) -> i32 {
    if json_mode {
        println!("{}", e.to_json());
    } else {
        eprintln!("error: {}", e.message);
        if let Some(p) = &e.partial {
            eprintln!("partial: {p}");
        }
    }
    e.exit_code
}
