//! The `ncp` command line.
//!
//! Every subcommand reads codes (or box covers) as JSON and writes one JSON
//! document to standard output; `hasse` can emit DOT instead. Exit status is
//! 0 on success, 1 on domain errors, 2 on usage errors.

pub mod hasse;
pub mod verify;

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use ncp_core::ascent::{all_covering_codes, isolated_subsets};
use ncp_core::descent::{classify_neurons, covered_code, essential_neurons, is_minor};
use ncp_core::geometry::{code_of_cover_with_witnesses, format_rational, random_box_cover};
use ncp_core::morphism::is_isomorphic;
use ncp_core::{canonical_form, canonical_key, BoxCover, Code, Codeword};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

pub use hasse::{HasseEdge, HasseFragment, HasseNode, Provenance};

/// Environment variable capping the worker threads.
pub const THREADS_VAR: &str = "NCP_THREADS";

#[derive(Parser, Debug)]
#[command(name = "ncp", version, about = "Trunks, morphisms and covering relations of combinatorial neural codes")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,

    /// Shorthand for `--format dot`.
    #[arg(long, global = true)]
    pub dot: bool,

    /// Seed for every randomized step.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Distinct nonempty trunks of a code.
    Trunks { code: PathBuf },
    /// Intersection-completion of a code.
    Complete { code: PathBuf },
    /// Canonical form and key.
    Canon { code: PathBuf },
    /// Whether two codes are isomorphic.
    Iso { a: PathBuf, b: PathBuf },
    /// Whether the first code is a minor of the second.
    Leq { a: PathBuf, b: PathBuf },
    /// Covered codes, one per essential neuron.
    CoversDown { code: PathBuf },
    /// Covering codes, one per isomorphism class.
    CoversUp { code: PathBuf },
    /// Isolated subsets of an intersection-complete code.
    Isolated { code: PathBuf },
    /// Code of a cover by open boxes.
    Realize { cover: PathBuf },
    /// Seeded random box cover.
    RandomCover {
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 4)]
        boxes: usize,
    },
    /// Local Hasse diagram around a code.
    Hasse {
        code: PathBuf,
        #[arg(long, default_value_t = 1)]
        up: usize,
        #[arg(long, default_value_t = 1)]
        down: usize,
    },
    /// Invariant suite on one code.
    Verify { code: PathBuf },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

impl From<ncp_core::Error> for CliError {
    fn from(e: ncp_core::Error) -> Self {
        CliError::Domain(e.to_string())
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    configure_threads();
    match execute(&cli) {
        Ok(Output { text, failed }) => {
            let _ = out.write_all(text.as_bytes());
            u8::from(failed)
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_VAR).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        // a second call in the same process is harmless
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

pub struct Output {
    pub text: String,
    /// Set when the command ran but reported a failing check.
    pub failed: bool,
}

impl Output {
    fn json<T: Serialize>(value: &T) -> Output {
        let value = serde_json::to_value(value).expect("serializable output");
        let mut text = String::new();
        write_pretty(&value, 0, &mut text);
        text.push('\n');
        Output { text, failed: false }
    }
}

/// Indented JSON in which arrays of scalars (codewords) stay on one line.
pub fn write_pretty(value: &Value, depth: usize, out: &mut String) {
    let pad = |d: usize| "  ".repeat(d);
    match value {
        Value::Array(items) if items.iter().all(|v| !v.is_array() && !v.is_object()) => {
            out.push_str(&serde_json::to_string(value).expect("scalar array"));
        }
        Value::Array(items)
            if items
                .iter()
                .all(|v| matches!(v, Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()))) =>
        {
            out.push_str(&serde_json::to_string(value).expect("array of scalar arrays"));
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (k, item) in items.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                write_pretty(item, depth + 1, out);
                out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push(']');
        }
        Value::Object(map) if !map.is_empty() => {
            out.push_str("{\n");
            for (k, (key, item)) in map.iter().enumerate() {
                out.push_str(&pad(depth + 1));
                out.push_str(&serde_json::to_string(key).expect("string key"));
                out.push_str(": ");
                write_pretty(item, depth + 1, out);
                out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
            }
            out.push_str(&pad(depth));
            out.push('}');
        }
        _ => out.push_str(&serde_json::to_string(value).expect("scalar")),
    }
}

pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let format = if cli.dot { Format::Dot } else { cli.format };
    if format == Format::Dot && !matches!(cli.command, Command::Hasse { .. }) {
        return Err(CliError::Usage("DOT output is only available for `hasse`".into()));
    }
    match &cli.command {
        Command::Trunks { code } => trunks(&read_json(code)?),
        Command::Complete { code } => complete(&read_json(code)?),
        Command::Canon { code } => Ok(Output::json(&canonical_form(&read_json::<Code>(code)?))),
        Command::Iso { a, b } => {
            let (a, b): (Code, Code) = (read_json(a)?, read_json(b)?);
            Ok(Output::json(&json!({ "isomorphic": is_isomorphic(&a, &b)? })))
        }
        Command::Leq { a, b } => {
            let (a, b): (Code, Code) = (read_json(a)?, read_json(b)?);
            Ok(Output::json(&json!({ "leq": is_minor(&b, &a)? })))
        }
        Command::CoversDown { code } => covers_down(&read_json(code)?),
        Command::CoversUp { code } => covers_up(&read_json(code)?),
        Command::Isolated { code } => isolated(&read_json(code)?),
        Command::Realize { cover } => realize(&read_json(cover)?),
        Command::RandomCover { dim, boxes } => {
            if *dim == 0 {
                return Err(CliError::Usage("--dim must be at least 1".into()));
            }
            Ok(Output::json(&random_box_cover(*dim, *boxes, cli.seed)?))
        }
        Command::Hasse { code, up, down } => {
            let fragment = HasseFragment::build(&read_json(code)?, *up, *down)?;
            Ok(match format {
                Format::Json => Output::json(&fragment),
                Format::Dot => Output { text: fragment.to_dot(), failed: false },
            })
        }
        Command::Verify { code } => {
            let report = verify::verify(&read_json(code)?, cli.seed)?;
            let failed = !report.all_pass;
            Ok(Output { failed, ..Output::json(&report) })
        }
    }
}

/// Reads JSON from a file, or from standard input for `-`.
pub fn read_json<T: DeserializeOwned>(path: &PathBuf) -> Result<T, CliError> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| CliError::Domain(format!("reading stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| CliError::Domain(format!("reading {}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Domain(format!("parsing {}: {e}", path.display())))
}

fn trunks(c: &Code) -> Result<Output, CliError> {
    let trunks: Vec<Value> = c
        .distinct_nonempty_trunks()
        .iter()
        .map(|t| json!({ "sigma": t.base(), "members": t.members(c), "proper": t.is_proper() }))
        .collect();
    Ok(Output::json(&json!({ "code": c, "trunk_count": trunks.len(), "trunks": trunks })))
}

fn complete(c: &Code) -> Result<Output, CliError> {
    let hat = c.intersection_completion();
    let added: Vec<Codeword> = hat.words().iter().copied().filter(|&w| !c.contains(w)).collect();
    Ok(Output::json(&json!({
        "code": c,
        "intersection_complete": added.is_empty(),
        "completion": hat,
        "added": added,
    })))
}

fn covers_down(c: &Code) -> Result<Output, CliError> {
    let mut covered = Vec::new();
    for i in essential_neurons(c) {
        let cc = covered_code(c, i)?;
        let trunks: Vec<Vec<Codeword>> =
            (1..=cc.morphism.target_n()).filter_map(|j| cc.morphism.trunk(j)).map(|t| t.members(c)).collect();
        covered.push(json!({
            "neuron": i,
            "key": canonical_key(&cc.code),
            "trunk_count": cc.code.trunk_count(),
            "code": cc.code,
            "determining_trunks": trunks,
        }));
    }
    let mut keys: Vec<&str> = covered.iter().map(|v| v["key"].as_str().unwrap()).collect();
    keys.sort_unstable();
    keys.dedup();
    let classes = keys.len();
    Ok(Output::json(&json!({
        "code": c,
        "trunk_count": c.trunk_count(),
        "neurons": classify_neurons(c),
        "classes": classes,
        "covered": covered,
    })))
}

fn covers_up(d: &Code) -> Result<Output, CliError> {
    let covers: Vec<Value> = all_covering_codes(d)?
        .iter()
        .map(|cc| {
            let mut v = serde_json::to_value(cc).expect("serializable construction");
            v["key"] = Value::String(canonical_key(&cc.result));
            v["trunk_count"] = json!(cc.result.trunk_count());
            v
        })
        .collect();
    Ok(Output::json(&json!({
        "code": d,
        "trunk_count": d.trunk_count(),
        "completion": d.intersection_completion(),
        "covers": covers,
    })))
}

fn isolated(c: &Code) -> Result<Output, CliError> {
    let subsets = isolated_subsets(c)?;
    Ok(Output::json(&json!({ "code": c, "isolated": subsets })))
}

fn realize(cover: &BoxCover) -> Result<Output, CliError> {
    let (code, witnesses) = code_of_cover_with_witnesses(cover);
    let witnesses: Vec<Value> = code
        .words()
        .iter()
        .map(|w| json!({ "codeword": w, "point": witnesses[w].iter().map(format_rational).collect::<Vec<_>>() }))
        .collect();
    Ok(Output::json(&json!({ "cover": cover, "code": code, "witnesses": witnesses })))
}
