//! Classical Metropolis dynamics for Ising memories and for the mean-field
//! error model of the 3D code.
//!
//! Energies are `-J` per unique nearest-neighbour bond with open boundaries;
//! temperature is in units where Boltzmann's constant is 1.
//!
//! Under the mean-field energetics, the X-error field of the 3D code splits
//! into `n` independent yz-planes (one per x). Each plane is a 2D Ising model
//! with coupling `lambda * c_zy` along y and `lambda * c_zz` along z, spin
//! `-1` marking an X error. The Z-error field is the same construction on
//! xy-planes with `lambda * c_xx` along x and `lambda * c_xy` along y.

use std::io::Write;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::code::{CodeLayout, Dimension};
use crate::decoder::decode_repetition;
use crate::error::{Error, Result};
use crate::hamiltonian::MeanFieldParams;
use crate::pauli::{Pauli, PauliOperator};
use crate::rng::{self, StreamRng};
use crate::stats::mean_and_stderr;

/// Open-boundary Ising model on a chain or a rectangle, possibly anisotropic.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingLattice {
    shape: Vec<usize>,
    couplings: Vec<f64>,
    spins: Vec<i8>,
    energy: f64,
}

impl IsingLattice {
    fn build(shape: Vec<usize>, couplings: Vec<f64>) -> Result<Self> {
        if shape.contains(&0) {
            return Err(Error::InvalidParameter(
                "lattice side lengths must be positive".into(),
            ));
        }
        let len = shape.iter().product();
        let mut lattice = IsingLattice {
            shape,
            couplings,
            spins: vec![1; len],
            energy: 0.0,
        };
        lattice.energy = lattice.recompute_energy();
        Ok(lattice)
    }

    /// 1D chain of `len` spins, all up.
    pub fn chain(len: usize, coupling: f64) -> Result<Self> {
        Self::build(vec![len], vec![coupling])
    }

    /// `side x side` square lattice, all up.
    pub fn square(side: usize, coupling: f64) -> Result<Self> {
        Self::build(vec![side, side], vec![coupling, coupling])
    }

    /// `rows x cols` lattice with coupling `j_rows` between vertically
    /// adjacent spins and `j_cols` between horizontally adjacent spins.
    pub fn rectangle(rows: usize, cols: usize, j_rows: f64, j_cols: f64) -> Result<Self> {
        Self::build(vec![rows, cols], vec![j_rows, j_cols])
    }

    pub fn dimensionality(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    pub fn spin(&self, site: usize) -> i8 {
        self.spins[site]
    }

    /// Replaces the configuration; every entry must be `+1` or `-1`.
    pub fn set_spins(&mut self, spins: &[i8]) -> Result<()> {
        if spins.len() != self.spins.len() || spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidParameter(
                "spins must be +/-1 with matching length".into(),
            ));
        }
        self.spins.copy_from_slice(spins);
        self.energy = self.recompute_energy();
        Ok(())
    }

    pub fn flip_all(&mut self) {
        for s in &mut self.spins {
            *s = -*s;
        }
    }

    pub fn magnetization(&self) -> f64 {
        self.spins.iter().map(|&s| s as f64).sum::<f64>() / self.len() as f64
    }

    /// Incrementally tracked energy.
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn recompute_energy(&self) -> f64 {
        let mut e = 0.0;
        for site in 0..self.len() {
            self.for_each_forward_neighbor(site, |nb, j| {
                e -= j * (self.spins[site] * self.spins[nb]) as f64;
            });
        }
        e
    }

    fn for_each_forward_neighbor(&self, site: usize, mut f: impl FnMut(usize, f64)) {
        match self.shape.as_slice() {
            [len] => {
                if site + 1 < *len {
                    f(site + 1, self.couplings[0]);
                }
            }
            [rows, cols] => {
                let (r, c) = (site / cols, site % cols);
                if r + 1 < *rows {
                    f(site + cols, self.couplings[0]);
                }
                if c + 1 < *cols {
                    f(site + 1, self.couplings[1]);
                }
            }
            _ => unreachable!(),
        }
    }

    /// Energy change from flipping `site`.
    pub fn flip_cost(&self, site: usize) -> f64 {
        let mut field = 0.0;
        match self.shape.as_slice() {
            [len] => {
                if site > 0 {
                    field += self.couplings[0] * self.spins[site - 1] as f64;
                }
                if site + 1 < *len {
                    field += self.couplings[0] * self.spins[site + 1] as f64;
                }
            }
            [rows, cols] => {
                let (r, c) = (site / cols, site % cols);
                let (jr, jc) = (self.couplings[0], self.couplings[1]);
                if r > 0 {
                    field += jr * self.spins[site - cols] as f64;
                }
                if r + 1 < *rows {
                    field += jr * self.spins[site + cols] as f64;
                }
                if c > 0 {
                    field += jc * self.spins[site - 1] as f64;
                }
                if c + 1 < *cols {
                    field += jc * self.spins[site + 1] as f64;
                }
            }
            _ => unreachable!(),
        }
        2.0 * self.spins[site] as f64 * field
    }

    fn flip(&mut self, site: usize, cost: f64) {
        self.spins[site] = -self.spins[site];
        self.energy += cost;
    }

    /// Index of the configuration as a bit pattern (bit `s` set for a down
    /// spin). Only meaningful for small lattices.
    pub fn state_index(&self) -> usize {
        self.spins
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 0)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }
}

fn check_temperature(temperature: f64) -> Result<f64> {
    if temperature.is_nan() || temperature <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "temperature must be positive, got {temperature}"
        )));
    }
    Ok(1.0 / temperature)
}

fn attempt<R: Rng + ?Sized>(
    lattice: &mut IsingLattice,
    site: usize,
    beta: f64,
    rng: &mut R,
) -> bool {
    let u: f64 = rng.random();
    let cost = lattice.flip_cost(site);
    if cost <= 0.0 || u < (-cost * beta).exp() {
        lattice.flip(site, cost);
        true
    } else {
        false
    }
}

/// One Metropolis sweep: `len` flip attempts, each at a uniformly random
/// site and accepted with probability `min(1, exp(-dE / T))`. Every attempt
/// draws a site and one uniform regardless of the outcome, so the sweep
/// kernel itself satisfies detailed balance. Returns the accepted count.
pub fn metropolis_sweep<R: Rng + ?Sized>(
    lattice: &mut IsingLattice,
    temperature: f64,
    rng: &mut R,
) -> Result<usize> {
    let beta = check_temperature(temperature)?;
    let len = lattice.len();
    let mut accepted = 0;
    for _ in 0..len {
        let site = rng.random_range(0..len);
        accepted += attempt(lattice, site, beta, rng) as usize;
    }
    Ok(accepted)
}

/// Sweep visiting sites in index order. Stationary for the Boltzmann
/// distribution but not always ergodic: zero-cost flips are always taken,
/// which on a 2x2 lattice splits the states into two closed classes.
pub fn metropolis_sweep_sequential<R: Rng + ?Sized>(
    lattice: &mut IsingLattice,
    temperature: f64,
    rng: &mut R,
) -> Result<usize> {
    let beta = check_temperature(temperature)?;
    let mut accepted = 0;
    for site in 0..lattice.len() {
        accepted += attempt(lattice, site, beta, rng) as usize;
    }
    Ok(accepted)
}

/// Magnetization per site after each of `sweeps` sweeps, starting all up.
pub fn simulate_ising_memory(
    dimensionality: usize,
    side: usize,
    coupling: f64,
    temperature: f64,
    sweeps: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let mut lattice = match dimensionality {
        1 => IsingLattice::chain(side, coupling)?,
        2 => IsingLattice::square(side, coupling)?,
        d => {
            return Err(Error::InvalidParameter(format!(
                "Ising dimensionality must be 1 or 2, got {d}"
            )))
        }
    };
    let mut rng = rng::stream(seed, 0);
    let mut series = Vec::with_capacity(sweeps);
    for _ in 0..sweeps {
        metropolis_sweep(&mut lattice, temperature, &mut rng)?;
        series.push(lattice.magnetization());
    }
    Ok(series)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingRecord {
    pub dim: usize,
    #[serde(rename = "L")]
    pub side: usize,
    #[serde(rename = "J")]
    pub coupling: f64,
    #[serde(rename = "T")]
    pub temperature: f64,
    pub sweep: usize,
    pub magnetization: f64,
}

pub const ISING_CSV_HEADER: &str = "dim,L,J,T,sweep,magnetization";

pub fn write_ising_csv<W: Write>(writer: W, records: &[IsingRecord]) -> Result<()> {
    write_records(writer, records, ISING_CSV_HEADER)
}

fn write_records<W: Write, T: Serialize>(writer: W, records: &[T], header: &str) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if records.is_empty() {
        w.write_record(header.split(','))?;
    }
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Which Pauli-error field of the 3D code is simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorSector {
    /// X errors on yz-planes; parities per xy-plane (`e`).
    #[default]
    X,
    /// Z errors on xy-planes; parities per yz-plane (`f`).
    Z,
}

/// `n` independent error planes plus the encoded value they protect.
#[derive(Debug, Clone)]
pub struct MeanFieldCodeState {
    n: usize,
    sector: ErrorSector,
    planes: Vec<IsingLattice>,
    encoded: i8,
}

impl MeanFieldCodeState {
    pub fn new(
        n: usize,
        params: &MeanFieldParams,
        lambda: f64,
        sector: ErrorSector,
        encoded: i8,
    ) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "mean-field code needs odd n >= 3, got {n}"
            )));
        }
        if encoded != 1 && encoded != -1 {
            return Err(Error::InvalidParameter(format!(
                "encoded value must be +1 or -1, got {encoded}"
            )));
        }
        // in-plane axes: X sector (y, z), Z sector (x, y)
        let (j0, j1) = match sector {
            ErrorSector::X => (lambda * params.c_zy, lambda * params.c_zz),
            ErrorSector::Z => (lambda * params.c_xx, lambda * params.c_xy),
        };
        let planes = (0..n)
            .map(|_| IsingLattice::rectangle(n, n, j0, j1))
            .collect::<Result<Vec<_>>>()?;
        Ok(MeanFieldCodeState {
            n,
            sector,
            planes,
            encoded,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn encoded(&self) -> i8 {
        self.encoded
    }

    pub fn planes(&self) -> &[IsingLattice] {
        &self.planes
    }

    pub fn planes_mut(&mut self) -> &mut [IsingLattice] {
        &mut self.planes
    }

    pub fn energy(&self) -> f64 {
        self.planes.iter().map(IsingLattice::energy).sum()
    }

    /// 3D site of in-plane spin `(u, v)` on plane `p`.
    fn site_coords(&self, plane: usize, u: usize, v: usize) -> [usize; 3] {
        match self.sector {
            ErrorSector::X => [plane, u, v],
            ErrorSector::Z => [u, v, plane],
        }
    }

    /// Slot of the parity string the in-plane spin `(u, v)` contributes to.
    fn parity_slot(&self, u: usize, v: usize) -> usize {
        match self.sector {
            ErrorSector::X => v,
            ErrorSector::Z => u,
        }
    }

    /// Error-string parities across all planes (`e` for the X sector, `f`
    /// for the Z sector).
    pub fn parities(&self) -> BitString {
        let mut out = BitString::zeros(self.n);
        for plane in &self.planes {
            for (idx, &s) in plane.spins().iter().enumerate() {
                if s < 0 {
                    out.flip(self.parity_slot(idx / self.n, idx % self.n));
                }
            }
        }
        out
    }

    /// Encoded value after syndrome adjustment: flipped exactly when the
    /// minimum-weight decoding of the parities lands on the wrong codeword.
    pub fn decoded_value(&self) -> i8 {
        let parities = self.parities();
        let inferred = decode_repetition(&parities.adjacent_parities());
        if parities.get(0) != inferred.get(0) {
            -self.encoded
        } else {
            self.encoded
        }
    }

    /// The current error pattern as a Pauli operator on the 3D code.
    pub fn error_operator(&self, layout: &CodeLayout) -> Result<PauliOperator> {
        if layout.dimension() != Dimension::Three || layout.n() != self.n {
            return Err(Error::InvalidParameter(
                "layout does not match the mean-field state".into(),
            ));
        }
        let pauli = match self.sector {
            ErrorSector::X => Pauli::X,
            ErrorSector::Z => Pauli::Z,
        };
        let mut sites = Vec::new();
        for (p, plane) in self.planes.iter().enumerate() {
            for (idx, &s) in plane.spins().iter().enumerate() {
                if s < 0 {
                    sites.push(layout.site_index(&self.site_coords(
                        p,
                        idx / self.n,
                        idx % self.n,
                    ))?);
                }
            }
        }
        Ok(PauliOperator::on_sites(layout.num_sites(), sites, pauli))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderParameterSample {
    pub sweep: usize,
    pub decoded_value: i8,
    pub parities: BitString,
}

/// Parameters of one mean-field code simulation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldRun {
    pub n: usize,
    pub params: MeanFieldParams,
    pub lambda: f64,
    pub temperature: f64,
    pub equilibration_sweeps: usize,
    pub samples: usize,
    pub sample_every: usize,
    pub seed: u64,
    pub encoded: i8,
    #[serde(default)]
    pub sector: ErrorSector,
}

/// Starts error-free, equilibrates, then records `samples` readouts spaced
/// `sample_every` sweeps apart. Plane `i` draws from stream `i` of the seed.
pub fn simulate_meanfield_code(run: &MeanFieldRun) -> Result<Vec<OrderParameterSample>> {
    if run.temperature.is_nan() || run.temperature <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "temperature must be positive, got {}",
            run.temperature
        )));
    }
    if run.sample_every == 0 {
        return Err(Error::InvalidParameter(
            "sample_every must be at least 1".into(),
        ));
    }
    let mut state =
        MeanFieldCodeState::new(run.n, &run.params, run.lambda, run.sector, run.encoded)?;
    let mut rngs: Vec<StreamRng> = (0..run.n as u64)
        .map(|i| rng::stream(run.seed, i))
        .collect();
    let mut sweep_all = |state: &mut MeanFieldCodeState| -> Result<()> {
        for (plane, rng) in state.planes.iter_mut().zip(rngs.iter_mut()) {
            metropolis_sweep(plane, run.temperature, rng)?;
        }
        Ok(())
    };
    for _ in 0..run.equilibration_sweeps {
        sweep_all(&mut state)?;
    }
    let mut sweep = run.equilibration_sweeps;
    let mut out = Vec::with_capacity(run.samples);
    for _ in 0..run.samples {
        for _ in 0..run.sample_every {
            sweep_all(&mut state)?;
        }
        sweep += run.sample_every;
        out.push(OrderParameterSample {
            sweep,
            decoded_value: state.decoded_value(),
            parities: state.parities(),
        });
    }
    Ok(out)
}

/// Mean decoded value and its naive standard error.
pub fn order_parameter(samples: &[OrderParameterSample]) -> (f64, f64) {
    let values: Vec<f64> = samples.iter().map(|s| s.decoded_value as f64).collect();
    mean_and_stderr(&values)
}

/// Temperature scan for both encodings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationScan {
    pub n: usize,
    pub params: MeanFieldParams,
    pub lambda: f64,
    pub temperatures: Vec<f64>,
    pub equilibration_sweeps: usize,
    pub samples: usize,
    pub sample_every: usize,
    pub seed: u64,
    #[serde(default)]
    pub sector: ErrorSector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BifurcationRecord {
    pub n: usize,
    pub lambda: f64,
    pub c_zy: f64,
    pub c_zz: f64,
    #[serde(rename = "T")]
    pub temperature: f64,
    pub encoded: i8,
    pub samples: usize,
    pub order_parameter: f64,
    pub stderr: f64,
    pub seed: u64,
}

pub const BIFURCATION_CSV_HEADER: &str =
    "n,lambda,c_zy,c_zz,T,encoded,samples,order_parameter,stderr,seed";

/// One record per `(T, encoded)`, temperatures in input order with `+1`
/// before `-1`. Temperature `t` uses the seed derived from `(seed, t)` for
/// both encodings, recorded in the `seed` column.
pub fn bifurcation_scan(scan: &BifurcationScan) -> Result<Vec<BifurcationRecord>> {
    if scan.temperatures.is_empty() {
        return Err(Error::InvalidParameter("temperature list is empty".into()));
    }
    let per_t: Vec<Result<Vec<BifurcationRecord>>> = scan
        .temperatures
        .par_iter()
        .enumerate()
        .map(|(t, &temperature)| {
            let seed = rng::derive_seed(scan.seed, t as u64);
            [1i8, -1]
                .into_iter()
                .map(|encoded| {
                    let run = MeanFieldRun {
                        n: scan.n,
                        params: scan.params,
                        lambda: scan.lambda,
                        temperature,
                        equilibration_sweeps: scan.equilibration_sweeps,
                        samples: scan.samples,
                        sample_every: scan.sample_every,
                        seed,
                        encoded,
                        sector: scan.sector,
                    };
                    let samples = simulate_meanfield_code(&run)?;
                    let (op, se) = order_parameter(&samples);
                    Ok(BifurcationRecord {
                        n: scan.n,
                        lambda: scan.lambda,
                        c_zy: scan.params.c_zy,
                        c_zz: scan.params.c_zz,
                        temperature,
                        encoded,
                        samples: samples.len(),
                        order_parameter: op,
                        stderr: se,
                        seed,
                    })
                })
                .collect()
        })
        .collect();
    let mut out = Vec::with_capacity(2 * scan.temperatures.len());
    for r in per_t {
        out.extend(r?);
    }
    Ok(out)
}

pub fn write_bifurcation_csv<W: Write>(writer: W, records: &[BifurcationRecord]) -> Result<()> {
    write_records(writer, records, BIFURCATION_CSV_HEADER)
}
