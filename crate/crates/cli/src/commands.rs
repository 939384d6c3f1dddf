use std::fs::File;
use std::io::BufWriter;
use std::time::Instant;

use clap::Args;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use subsyscode::noise::write_threshold_csv;
use subsyscode::rng::derive_seed;
use subsyscode::thermal::{write_bifurcation_csv, write_ising_csv, IsingRecord};
use subsyscode::{
    adjudicate, analytic_failure_prob, bifurcation_scan, build_code, build_hamiltonian, decode,
    diagonalize_small, mean_field_delta_e, simulate_ising_memory, threshold_scan, BifurcationScan,
    CodeLayout, Dimension, ErrorSector, MeanFieldParams, NoiseKind,
};

use crate::operator_input::{format_operator, parse_operator};
use crate::run::{merge_config, require, write_json, write_manifest, CliError, Common, Outputs};

type CmdResult = Result<(), CliError>;

fn layout(dim: usize, n: usize) -> Result<CodeLayout, CliError> {
    Ok(build_code(dim, n)?)
}

fn emit(common: &Common, text: String, value: &serde_json::Value) {
    if common.json {
        println!("{}", serde_json::to_string_pretty(value).unwrap());
    } else {
        print!("{text}");
    }
}

/// Writes `report` as the primary JSON output plus the manifest.
fn finish_json<P: Serialize>(
    subcommand: &str,
    params: &P,
    common: &Common,
    report: &serde_json::Value,
    started: Instant,
) -> CmdResult {
    let outputs = Outputs::new(subcommand, common, &format!("{subcommand}.json"))?;
    write_json(&outputs.primary, report)?;
    write_manifest(subcommand, params, None, &outputs, started)
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CodeInfoArgs {
    /// Lattice dimension, 2 or 3 [default: 2]
    #[arg(long)]
    pub dim: Option<usize>,
    /// Side length
    #[arg(long)]
    pub n: Option<usize>,
}

pub fn code_info(args: &CodeInfoArgs, common: &Common) -> CmdResult {
    let started = Instant::now();
    let mut p = merge_config(args, common.config.as_deref())?;
    p.dim.get_or_insert(2);
    let c = layout(p.dim.unwrap(), require(&p.n, "n")?)?;
    let (xs, zs) = (c.x_stabilizers().len(), c.z_stabilizers().len());
    let l = c.logical_operators();
    let report = json!({
        "dimension": c.dimension().as_usize(),
        "n": c.n(),
        "sites": c.num_sites(),
        "gauge_generators": c.gauge_bonds().len(),
        "stabilizer_generators": xs + zs,
        "x_stabilizers": xs,
        "z_stabilizers": zs,
        "logical_x": format_operator(&c, &l.x),
        "logical_z": format_operator(&c, &l.z),
    });
    let text = format!(
        "{}D code, n = {}\nsites: {}\ngauge generators: {}\nstabilizer generators: {} ({xs} X-type, {zs} Z-type)\nlogical X: {}\nlogical Z: {}\n",
        c.dimension(),
        c.n(),
        c.num_sites(),
        c.gauge_bonds().len(),
        xs + zs,
        format_operator(&c, &l.x),
        format_operator(&c, &l.z),
    );
    emit(common, text, &report);
    finish_json("code-info", &p, common, &report, started)
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct OperatorArgs {
    /// Lattice dimension, 2 or 3 [default: 2]
    #[arg(long)]
    pub dim: Option<usize>,
    /// Side length
    #[arg(long)]
    pub n: Option<usize>,
    /// Error operator (see the syntax below)
    #[arg(long)]
    pub error: Option<String>,
}

impl OperatorArgs {
    fn resolve(&self, common: &Common) -> Result<(Self, CodeLayout), CliError> {
        let mut p = merge_config(self, common.config.as_deref())?;
        p.dim.get_or_insert(2);
        let c = layout(p.dim.unwrap(), require(&p.n, "n")?)?;
        Ok((p, c))
    }
}

pub fn classify(args: &OperatorArgs, common: &Common) -> CmdResult {
    let started = Instant::now();
    let (p, c) = args.resolve(common)?;
    let e = parse_operator(&c, &require(&p.error, "error")?).map_err(CliError::Usage)?;
    let class = c.classify(&e)?;
    let syndrome = c.measure_syndrome(&e)?;
    let report = json!({
        "error": format_operator(&c, &e),
        "class": class.name(),
        "syndrome": syndrome.to_string(),
    });
    let text = format!(
        "error: {}\nsyndrome: {syndrome}\nclass: {class}\n",
        format_operator(&c, &e)
    );
    emit(common, text, &report);
    finish_json("classify", &p, common, &report, started)
}

pub fn decode_cmd(args: &OperatorArgs, common: &Common) -> CmdResult {
    let started = Instant::now();
    let (p, c) = args.resolve(common)?;
    let e = parse_operator(&c, &require(&p.error, "error")?).map_err(CliError::Usage)?;
    let out = decode(&c, &e)?;
    let residual = adjudicate(&c, &e, &out)?;
    let report = json!({
        "error": format_operator(&c, &e),
        "syndrome": out.syndrome.to_string(),
        "inferred_e": out.inferred_e.to_string(),
        "inferred_f": out.inferred_f.to_string(),
        "correction": format_operator(&c, &out.correction),
        "residual": residual.name(),
    });
    let text = format!(
        "error: {}\nsyndrome: {}\ninferred e: {}\ninferred f: {}\ncorrection: {}\nresidual: {residual}\n",
        format_operator(&c, &e),
        out.syndrome,
        out.inferred_e,
        out.inferred_f,
        format_operator(&c, &out.correction),
    );
    emit(common, text, &report);
    finish_json("decode", &p, common, &report, started)
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct ThresholdArgs {
    /// Lattice dimension, 2 or 3 [default: 2]
    #[arg(long)]
    pub dim: Option<usize>,
    /// Comma-separated side lengths
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Comma-separated physical error rates
    #[arg(long, value_delimiter = ',')]
    pub p: Option<Vec<f64>>,
    /// Trials per (n, p) point [default: 10000]
    #[arg(long)]
    pub trials: Option<u64>,
    /// Master seed, shared by every point
    #[arg(long)]
    pub seed: Option<u64>,
    /// z, x, xz or depolarizing [default: z]
    #[arg(long)]
    pub noise: Option<String>,
}

pub fn threshold(args: &ThresholdArgs, common: &Common) -> CmdResult {
    let started = Instant::now();
    let mut p = merge_config(args, common.config.as_deref())?;
    p.dim.get_or_insert(2);
    p.trials.get_or_insert(10_000);
    p.noise.get_or_insert_with(|| "z".into());
    let seed = require(&p.seed, "seed")?;
    let dim = Dimension::try_from(p.dim.unwrap())?;
    let noise: NoiseKind = p.noise.as_deref().unwrap().parse()?;
    let n_list = require(&p.n, "n")?;
    let p_list = require(&p.p, "p")?;
    let records = threshold_scan(dim, &n_list, &p_list, noise, p.trials.unwrap(), seed)?;

    let outputs = Outputs::new("threshold", common, "threshold.csv")?;
    write_threshold_csv(BufWriter::new(File::create(&outputs.primary)?), &records)?;
    write_manifest("threshold", &p, Some(seed), &outputs, started)?;

    let mut text = String::new();
    let mut rows = Vec::new();
    for r in &records {
        // the closed form covers single-type flips at odd n only
        let analytic = match noise {
            NoiseKind::Z | NoiseKind::X if r.n % 2 == 1 => {
                let rate = r.p_x.max(r.p_z);
                Some(analytic_failure_prob(&build_code(r.dimension, r.n)?, rate)?)
            }
            _ => None,
        };
        text += &format!(
            "n={} p_x={} p_z={} failure_rate={:.6} ci=[{:.6}, {:.6}]{}\n",
            r.n,
            r.p_x,
            r.p_z,
            r.failure_rate,
            r.ci_low,
            r.ci_high,
            analytic.map_or(String::new(), |a| format!(" analytic={a:.6}"))
        );
        rows.push(json!({ "record": r, "analytic": analytic }));
    }
    text += &format!("wrote {}\n", outputs.primary.display());
    emit(
        common,
        text,
        &json!({ "records": rows, "csv": outputs.primary }),
    );
    Ok(())
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct DiagArgs {
    /// Lattice dimension [default: 2]; only tiny lattices fit
    #[arg(long)]
    pub dim: Option<usize>,
    /// Side length
    #[arg(long)]
    pub n: Option<usize>,
    /// Bond coupling strength [default: 1]
    #[arg(long)]
    pub lambda: Option<f64>,
}

pub fn diag(args: &DiagArgs, common: &Common) -> CmdResult {
    let started = Instant::now();
    let mut p = merge_config(args, common.config.as_deref())?;
    p.dim.get_or_insert(2);
    p.lambda.get_or_insert(1.0);
    let c = layout(p.dim.unwrap(), require(&p.n, "n")?)?;
    let report = diagonalize_small(&build_hamiltonian(&c, p.lambda.unwrap()))?;
    let value = serde_json::to_value(&report).unwrap();
    let mut text = format!(
        "n = {}, Hilbert dimension {}, {} distinct levels\nground energy {:.10} x{} in sector {}|{}\nall multiplicities even: {}\nall-+1 sector holds the ground state: {}\nlevels:\n",
        report.n,
        report.dimension,
        report.eigenvalues.len(),
        report.ground_energy,
        report.ground_multiplicity,
        report.ground_sector.sx,
        report.ground_sector.sz,
        report.all_multiplicities_even(),
        report.ground_in_trivial_sector,
    );
    for l in &report.eigenvalues {
        text += &format!("  {:+.10} x{}\n", l.value, l.multiplicity);
    }
    emit(common, text, &value);
    finish_json("diag", &p, common, &value, started)
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct MeanFieldArgs {
    /// Side length of the 3D code
    #[arg(long)]
    pub n: Option<usize>,
    /// Error operator (see the syntax below)
    #[arg(long)]
    pub error: Option<String>,
    /// Bond strength [default: 1]
    #[arg(long)]
    pub lambda: Option<f64>,
    /// XX coupling along x [default: 1]
    #[arg(long)]
    pub c_xx: Option<f64>,
    /// XX coupling along y [default: 1]
    #[arg(long)]
    pub c_xy: Option<f64>,
    /// ZZ coupling along y [default: 1]
    #[arg(long)]
    pub c_zy: Option<f64>,
    /// ZZ coupling along z [default: 1]
    #[arg(long)]
    pub c_zz: Option<f64>,
}

pub fn meanfield(args: &MeanFieldArgs, common: &Common) -> CmdResult {
    let started = Instant::now();
    let mut p = merge_config(args, common.config.as_deref())?;
    p.lambda.get_or_insert(1.0);
    for c in [&mut p.c_xx, &mut p.c_xy, &mut p.c_zy, &mut p.c_zz] {
        c.get_or_insert(1.0);
    }
    let params = MeanFieldParams::new(
        p.c_xx.unwrap(),
        p.c_xy.unwrap(),
        p.c_zy.unwrap(),
        p.c_zz.unwrap(),
    )?;
    let c = layout(3, require(&p.n, "n")?)?;
    let e = parse_operator(&c, &require(&p.error, "error")?).map_err(CliError::Usage)?;
    let spec = build_hamiltonian(&c, p.lambda.unwrap());
    let delta_e = mean_field_delta_e(&spec, &e, &params)?;
    let report = json!({
        "n": c.n(),
        "lambda": spec.lambda,
        "params": params,
        "error": format_operator(&c, &e),
        "delta_e": delta_e,
    });
    let text = format!("error: {}\ndelta_e: {delta_e}\n", format_operator(&c, &e));
    emit(common, text, &report);
    finish_json("meanfield", &p, common, &report, started)
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct IsingArgs {
    /// 1 (chain) or 2 (square lattice)
    #[arg(long)]
    pub dim: Option<usize>,
    /// Side length
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub side: Option<usize>,
    /// Coupling [default: 1]
    #[arg(long = "J")]
    #[serde(rename = "J")]
    pub coupling: Option<f64>,
    /// Comma-separated temperatures
    #[arg(long = "T", value_delimiter = ',')]
    #[serde(rename = "T")]
    pub temperatures: Option<Vec<f64>>,
    /// Sweeps per temperature
    #[arg(long)]
    pub sweeps: Option<usize>,
    /// Master seed; temperature i uses a seed derived from (seed, i)
    #[arg(long)]
    pub seed: Option<u64>,
}

pub fn ising(args: &IsingArgs, common: &Common) -> CmdResult {
    let started = Instant::now();
    let mut p = merge_config(args, common.config.as_deref())?;
    p.coupling.get_or_insert(1.0);
    let seed = require(&p.seed, "seed")?;
    let dim = require(&p.dim, "dim")?;
    let side = require(&p.side, "L")?;
    let sweeps = require(&p.sweeps, "sweeps")?;
    let temperatures = require(&p.temperatures, "T")?;
    let coupling = p.coupling.unwrap();
    let series = temperatures
        .par_iter()
        .enumerate()
        .map(|(i, &t)| {
            simulate_ising_memory(dim, side, coupling, t, sweeps, derive_seed(seed, i as u64))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut records = Vec::with_capacity(temperatures.len() * sweeps);
    let mut text = String::new();
    let mut summary = Vec::new();
    for (&t, m) in temperatures.iter().zip(&series) {
        let mean = m.iter().sum::<f64>() / m.len().max(1) as f64;
        let mean_abs = m.iter().map(|v| v.abs()).sum::<f64>() / m.len().max(1) as f64;
        text += &format!("T={t} <m>={mean:+.4} <|m|>={mean_abs:.4}\n");
        summary.push(json!({ "T": t, "mean_m": mean, "mean_abs_m": mean_abs }));
        records.extend(m.iter().enumerate().map(|(k, &v)| IsingRecord {
            dim,
            side,
            coupling,
            temperature: t,
            sweep: k + 1,
            magnetization: v,
        }));
    }
    let outputs = Outputs::new("ising", common, "ising.csv")?;
    write_ising_csv(BufWriter::new(File::create(&outputs.primary)?), &records)?;
    write_manifest("ising", &p, Some(seed), &outputs, started)?;
    text += &format!("wrote {}\n", outputs.primary.display());
    emit(
        common,
        text,
        &json!({ "summary": summary, "csv": outputs.primary }),
    );
    Ok(())
}

#[derive(Args, Serialize, Deserialize, Debug, Clone)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct BifurcationArgs {
    /// Odd side length of the 3D code
    #[arg(long)]
    pub n: Option<usize>,
    /// Bond strength [default: 1]
    #[arg(long)]
    pub lambda: Option<f64>,
    /// XX coupling along x, used by the z sector [default: 1]
    #[arg(long)]
    pub c_xx: Option<f64>,
    /// XX coupling along y, used by the z sector [default: 1]
    #[arg(long)]
    pub c_xy: Option<f64>,
    /// ZZ coupling along y [default: 1]
    #[arg(long)]
    pub c_zy: Option<f64>,
    /// ZZ coupling along z [default: 1]
    #[arg(long)]
    pub c_zz: Option<f64>,
    /// Comma-separated temperatures
    #[arg(long = "T", value_delimiter = ',')]
    #[serde(rename = "T")]
    pub temperatures: Option<Vec<f64>>,
    /// Sweeps before the first sample [default: 100]
    #[arg(long)]
    pub equilibration: Option<usize>,
    /// Samples per (T, encoded value) [default: 1000]
    #[arg(long)]
    pub samples: Option<usize>,
    /// Sweeps between samples [default: 5]
    #[arg(long)]
    pub sample_every: Option<usize>,
    /// Master seed; temperature i uses a seed derived from (seed, i)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Simulated error field, x or z [default: x]
    #[arg(long)]
    pub sector: Option<String>,
}

pub fn bifurcation(args: &BifurcationArgs, common: &Common) -> CmdResult {
    let started = Instant::now();
    let mut p = merge_config(args, common.config.as_deref())?;
    p.lambda.get_or_insert(1.0);
    for c in [&mut p.c_xx, &mut p.c_xy, &mut p.c_zy, &mut p.c_zz] {
        c.get_or_insert(1.0);
    }
    p.equilibration.get_or_insert(100);
    p.samples.get_or_insert(1000);
    p.sample_every.get_or_insert(5);
    p.sector.get_or_insert_with(|| "x".into());
    let seed = require(&p.seed, "seed")?;
    let sector = match p.sector.as_deref().unwrap().to_ascii_lowercase().as_str() {
        "x" => ErrorSector::X,
        "z" => ErrorSector::Z,
        other => {
            return Err(CliError::Usage(format!(
                "unknown sector {other:?}, expected x or z"
            )))
        }
    };
    let scan = BifurcationScan {
        n: require(&p.n, "n")?,
        params: MeanFieldParams::new(
            p.c_xx.unwrap(),
            p.c_xy.unwrap(),
            p.c_zy.unwrap(),
            p.c_zz.unwrap(),
        )?,
        lambda: p.lambda.unwrap(),
        temperatures: require(&p.temperatures, "T")?,
        equilibration_sweeps: p.equilibration.unwrap(),
        samples: p.samples.unwrap(),
        sample_every: p.sample_every.unwrap(),
        seed,
        sector,
    };
    let records = bifurcation_scan(&scan)?;
    let outputs = Outputs::new("bifurcation", common, "bifurcation.csv")?;
    write_bifurcation_csv(BufWriter::new(File::create(&outputs.primary)?), &records)?;
    write_manifest("bifurcation", &p, Some(seed), &outputs, started)?;

    let mut text = String::new();
    for r in &records {
        text += &format!(
            "T={} encoded={:+} order_parameter={:+.4} stderr={:.4}\n",
            r.temperature, r.encoded, r.order_parameter, r.stderr
        );
    }
    text += &format!("wrote {}\n", outputs.primary.display());
    emit(
        common,
        text,
        &json!({ "records": records, "csv": outputs.primary }),
    );
    Ok(())
}
