//! Config merging, output locations and run manifests.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::Args;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config or values: exit 2.
    Usage(String),
    /// Valid request the library refuses as too large: exit 3.
    Infeasible(String),
    /// I/O failure while writing outputs: exit 1.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Io(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Infeasible(m) | CliError::Io(m) => m,
        }
    }
}

impl From<subsyscode::Error> for CliError {
    fn from(e: subsyscode::Error) -> Self {
        use subsyscode::Error as E;
        match e {
            E::TooLarge { .. } => CliError::Infeasible(e.to_string()),
            E::Io(_) | E::Csv(_) => CliError::Io(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// TOML file whose keys are the long flag names; flags given on the
    /// command line win. A manifest.json from an earlier run is also
    /// accepted and replays its parameters.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Output directory, or a file path ending in .csv or .json (the manifest
    /// is then written next to it as <stem>.manifest.json).
    /// Default: results/<subcommand>/<name>/
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Run name for the default output directory [default: run-<unix time>]
    #[arg(long)]
    pub name: Option<String>,
    /// Print JSON on stdout instead of text
    #[arg(long)]
    pub json: bool,
}

/// Overlays command-line values on the config file. Absent flags serialize
/// as null and are skipped.
pub fn merge_config<T: Serialize + DeserializeOwned>(
    flags: &T,
    config: Option<&Path>,
) -> Result<T, CliError> {
    let mut merged = match config {
        Some(path) => load_config(path)?,
        None => Map::new(),
    };
    let Value::Object(from_flags) = serde_json::to_value(flags).expect("flag structs serialize")
    else {
        unreachable!("flag structs serialize as maps")
    };
    for (k, v) in from_flags {
        if !v.is_null() {
            merged.insert(k, v);
        }
    }
    serde_json::from_value(Value::Object(merged))
        .map_err(|e| CliError::Usage(format!("invalid configuration: {e}")))
}

fn load_config(path: &Path) -> Result<Map<String, Value>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let bad = |e: String| CliError::Usage(format!("cannot parse config {}: {e}", path.display()));
    let value = if path.extension().is_some_and(|e| e == "json") {
        let mut v: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
        match v.get_mut("params") {
            Some(params) => params.take(),
            None => v,
        }
    } else {
        let table: toml::Table = toml::from_str(&text).map_err(|e| bad(e.to_string()))?;
        serde_json::to_value(table).map_err(|e| bad(e.to_string()))?
    };
    match value {
        Value::Object(map) => Ok(map),
        _ => Err(bad("expected a table of parameters".into())),
    }
}

pub fn require<T: Clone>(value: &Option<T>, flag: &str) -> Result<T, CliError> {
    value
        .clone()
        .ok_or_else(|| CliError::Usage(format!("missing required --{flag} (flag or config key)")))
}

pub struct Outputs {
    pub primary: PathBuf,
    pub manifest: PathBuf,
}

impl Outputs {
    pub fn new(subcommand: &str, common: &Common, file_name: &str) -> Result<Self, CliError> {
        let is_file = common
            .out
            .as_ref()
            .and_then(|p| p.extension())
            .is_some_and(|e| e == "csv" || e == "json");
        let out = if is_file {
            let primary = common.out.clone().unwrap();
            let manifest = primary.with_extension("manifest.json");
            Outputs { primary, manifest }
        } else {
            let dir = match &common.out {
                Some(dir) => dir.clone(),
                None => {
                    let name = common.name.clone().unwrap_or_else(|| {
                        let secs = SystemTime::now()
                            .duration_since(UNIX_EPOCH)
                            .map(|d| d.as_secs())
                            .unwrap_or(0);
                        format!("run-{secs}")
                    });
                    Path::new("results").join(subcommand).join(name)
                }
            };
            Outputs {
                primary: dir.join(file_name),
                manifest: dir.join("manifest.json"),
            }
        };
        if let Some(parent) = out.primary.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        Ok(out)
    }
}

#[derive(Serialize)]
struct Manifest<'a, P: Serialize> {
    subcommand: &'a str,
    params: &'a P,
    seed: Option<u64>,
    version: &'a str,
    outputs: Vec<String>,
    duration_seconds: f64,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("outputs serialize");
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

pub fn write_manifest<P: Serialize>(
    subcommand: &str,
    params: &P,
    seed: Option<u64>,
    outputs: &Outputs,
    started: Instant,
) -> Result<(), CliError> {
    let manifest = Manifest {
        subcommand,
        params,
        seed,
        version: env!("CARGO_PKG_VERSION"),
        outputs: vec![outputs.primary.display().to_string()],
        duration_seconds: started.elapsed().as_secs_f64(),
    };
    write_json(&outputs.manifest, &manifest)
}
