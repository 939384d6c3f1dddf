//! Gauge-bond lattice Hamiltonians `H = -lambda * sum(bonds)`.
//!
//! Small 2D instances are diagonalized exactly, one stabilizer sector at a
//! time. Z-type stabilizers are diagonal in the computational basis, so
//! basis states split by their Z-sector directly; X-type stabilizers flip
//! fixed bit masks, so each orbit under those flips carries one symmetrized
//! vector per X-sector character. Every bond commutes with the stabilizers,
//! so `H` is block diagonal in this basis.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::code::{Bond, BondKind, CodeLayout, Dimension};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator};

/// Largest number of sites accepted by [`diagonalize_small`].
pub const MAX_ED_SITES: usize = 14;

/// Relative tolerance used to group eigenvalues into degenerate levels.
pub const LEVEL_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    pub layout: CodeLayout,
    pub lambda: f64,
    pub terms: Vec<Bond>,
}

pub fn build_hamiltonian(layout: &CodeLayout, lambda: f64) -> HamiltonianSpec {
    HamiltonianSpec {
        layout: *layout,
        lambda,
        terms: layout.gauge_bonds(),
    }
}

/// Ground-state bond expectations assumed by the mean-field energetics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanFieldParams {
    pub c_xx: f64,
    pub c_xy: f64,
    pub c_zy: f64,
    pub c_zz: f64,
}

impl MeanFieldParams {
    pub fn new(c_xx: f64, c_xy: f64, c_zy: f64, c_zz: f64) -> Result<Self> {
        for (name, c) in [
            ("c_xx", c_xx),
            ("c_xy", c_xy),
            ("c_zy", c_zy),
            ("c_zz", c_zz),
        ] {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be positive, got {c}"
                )));
            }
        }
        Ok(MeanFieldParams {
            c_xx,
            c_xy,
            c_zy,
            c_zz,
        })
    }

    pub fn uniform(c: f64) -> Result<Self> {
        Self::new(c, c, c, c)
    }

    pub fn coupling(&self, kind: BondKind) -> Result<f64> {
        match kind {
            BondKind::Xx => Ok(self.c_xx),
            BondKind::Xy => Ok(self.c_xy),
            BondKind::Zy => Ok(self.c_zy),
            BondKind::Zz => Ok(self.c_zz),
            other => Err(Error::Unsupported(format!(
                "mean-field parameters only cover 3D bonds, not {}",
                other.tag()
            ))),
        }
    }
}

fn require_3d(spec: &HamiltonianSpec) -> Result<()> {
    if spec.layout.dimension() != Dimension::Three {
        return Err(Error::Unsupported(
            "mean-field energetics are defined for the 3D Hamiltonian".into(),
        ));
    }
    Ok(())
}

/// Mean-field ground energy `-lambda * sum over bonds of c(bond)`.
pub fn mean_field_ground_energy(spec: &HamiltonianSpec, params: &MeanFieldParams) -> Result<f64> {
    require_3d(spec)?;
    let mut total = 0.0;
    for t in &spec.terms {
        total += params.coupling(t.kind)?;
    }
    Ok(-spec.lambda * total)
}

/// Energy increase of the mean-field ground state after applying `error`:
/// every bond that anticommutes with the error flips its expectation value,
/// contributing `2 * lambda * c(bond)`. Boundaries are counted literally.
pub fn mean_field_delta_e(
    spec: &HamiltonianSpec,
    error: &PauliOperator,
    params: &MeanFieldParams,
) -> Result<f64> {
    require_3d(spec)?;
    if error.num_sites() != spec.layout.num_sites() {
        return Err(Error::SizeMismatch {
            left: error.num_sites(),
            right: spec.layout.num_sites(),
        });
    }
    let mut total = 0.0;
    for t in &spec.terms {
        let (u, v) = t.sites;
        let flipped = match t.kind.pauli() {
            // XX bonds see the Z parts of the error and vice versa.
            Pauli::X => error.z_bit(u) ^ error.z_bit(v),
            _ => error.x_bit(u) ^ error.x_bit(v),
        };
        if flipped {
            total += params.coupling(t.kind)?;
        }
    }
    Ok(2.0 * spec.lambda * total)
}

/// One degenerate energy level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Level {
    pub value: f64,
    pub multiplicity: usize,
}

/// Lowest energy and spectrum of one stabilizer sector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorSpectrum {
    /// Bit `i` set means `S^X_i = -1`.
    pub sx: BitString,
    /// Bit `j` set means `S^Z_j = -1`.
    pub sz: BitString,
    pub dimension: usize,
    pub min_energy: f64,
    pub levels: Vec<Level>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorLabel {
    pub sx: BitString,
    pub sz: BitString,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorReport {
    pub n: usize,
    /// Hilbert-space dimension.
    pub dimension: usize,
    pub lambda: f64,
    pub eigenvalues: Vec<Level>,
    pub ground_energy: f64,
    pub ground_multiplicity: usize,
    /// First (in label order) sector attaining the ground energy.
    pub ground_sector: SectorLabel,
    pub ground_sectors: Vec<SectorLabel>,
    /// Whether the all-`+1` sector contains the ground energy.
    pub ground_in_trivial_sector: bool,
    pub sectors: Vec<SectorSpectrum>,
}

impl SectorReport {
    pub fn all_multiplicities_even(&self) -> bool {
        self.eigenvalues.iter().all(|l| l.multiplicity % 2 == 0)
    }
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= LEVEL_TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// Groups sorted eigenvalues into levels.
pub fn cluster_levels(sorted: &[f64]) -> Vec<Level> {
    let mut levels: Vec<Level> = Vec::new();
    let mut anchor = f64::NAN;
    for &v in sorted {
        match levels.last_mut() {
            Some(last) if close(anchor, v) => last.multiplicity += 1,
            _ => {
                anchor = v;
                levels.push(Level {
                    value: v,
                    multiplicity: 1,
                });
            }
        }
    }
    levels
}

fn mask_of(p: &PauliOperator) -> u32 {
    p.support().fold(0u32, |m, s| m | (1 << s))
}

fn parity(x: u32) -> bool {
    x.count_ones() & 1 == 1
}

/// Exact spectrum of a Hamiltonian with at most [`MAX_ED_SITES`] sites,
/// resolved by stabilizer sector.
pub fn diagonalize_small(spec: &HamiltonianSpec) -> Result<SectorReport> {
    let layout = &spec.layout;
    let sites = layout.num_sites();
    if sites > MAX_ED_SITES {
        return Err(Error::TooLarge {
            sites,
            max_sites: MAX_ED_SITES,
        });
    }
    let dim = 1usize << sites;
    let x_masks: Vec<u32> = layout.x_stabilizers().iter().map(mask_of).collect();
    let z_masks: Vec<u32> = layout.z_stabilizers().iter().map(mask_of).collect();
    let gx = x_masks.len();

    // Flip mask of every element of the X-stabilizer group, indexed by subset.
    let group: Vec<u32> = (0..1u32 << gx)
        .map(|t| {
            (0..gx)
                .filter(|i| t >> i & 1 == 1)
                .fold(0, |m, i| m ^ x_masks[i])
        })
        .collect();

    // orbit representative and group element: x = rep ^ group[elem]
    let mut rep = vec![u32::MAX; dim];
    let mut elem = vec![0u32; dim];
    let mut reps_by_zsector: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for x in 0..dim as u32 {
        if rep[x as usize] != u32::MAX {
            continue;
        }
        for (t, &m) in group.iter().enumerate() {
            rep[(x ^ m) as usize] = x;
            elem[(x ^ m) as usize] = t as u32;
        }
        let zlabel = z_masks
            .iter()
            .enumerate()
            .fold(0u32, |acc, (k, &zm)| acc | (parity(x & zm) as u32) << k);
        reps_by_zsector.entry(zlabel).or_default().push(x);
    }

    let x_terms: Vec<u32> = spec
        .terms
        .iter()
        .filter(|t| t.kind.pauli() == Pauli::X)
        .map(|t| (1 << t.sites.0) | (1 << t.sites.1))
        .collect();
    let z_terms: Vec<u32> = spec
        .terms
        .iter()
        .filter(|t| t.kind.pauli() == Pauli::Z)
        .map(|t| (1 << t.sites.0) | (1 << t.sites.1))
        .collect();

    let mut sectors = Vec::new();
    let mut all_values = Vec::with_capacity(dim);
    for (&zlabel, reps) in &reps_by_zsector {
        let index: BTreeMap<u32, usize> = reps.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        for character in 0..1u32 << gx {
            let d = reps.len();
            let mut h = DMatrix::<f64>::zeros(d, d);
            for (col, &r) in reps.iter().enumerate() {
                let diag: f64 = z_terms
                    .iter()
                    .map(|&m| if parity(r & m) { -1.0 } else { 1.0 })
                    .sum();
                h[(col, col)] += -spec.lambda * diag;
                for &m in &x_terms {
                    let y = r ^ m;
                    let row = index[&rep[y as usize]];
                    let sign = if parity(character & elem[y as usize]) {
                        -1.0
                    } else {
                        1.0
                    };
                    h[(row, col)] += -spec.lambda * sign;
                }
            }
            let mut values: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
            values.sort_by(f64::total_cmp);
            all_values.extend_from_slice(&values);
            sectors.push(SectorSpectrum {
                sx: BitString::from_u64(character as u64, gx),
                sz: BitString::from_u64(zlabel as u64, z_masks.len()),
                dimension: d,
                min_energy: values[0],
                levels: cluster_levels(&values),
            });
        }
    }
    sectors.sort_by(|a, b| (&a.sx, &a.sz).cmp(&(&b.sx, &b.sz)));

    all_values.sort_by(f64::total_cmp);
    let eigenvalues = cluster_levels(&all_values);
    let ground = &eigenvalues[0];
    let ground_sectors: Vec<SectorLabel> = sectors
        .iter()
        .filter(|s| close(s.min_energy, ground.value))
        .map(|s| SectorLabel {
            sx: s.sx.clone(),
            sz: s.sz.clone(),
        })
        .collect();
    let ground_in_trivial_sector = ground_sectors
        .iter()
        .any(|l| l.sx.is_zero() && l.sz.is_zero());
    Ok(SectorReport {
        n: layout.n(),
        dimension: dim,
        lambda: spec.lambda,
        ground_energy: ground.value,
        ground_multiplicity: ground.multiplicity,
        ground_sector: ground_sectors[0].clone(),
        ground_sectors,
        ground_in_trivial_sector,
        eigenvalues,
        sectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::build_code;

    #[test]
    fn term_lists() {
        let c = build_code(2, 2).unwrap();
        let h = build_hamiltonian(&c, 1.0);
        let ops: Vec<String> = h.terms.iter().map(|t| t.operator.to_string()).collect();
        assert_eq!(ops, ["ZZII", "IIZZ", "XIXI", "IXIX"]);
        assert_eq!(
            build_hamiltonian(&build_code(2, 3).unwrap(), 1.0)
                .terms
                .len(),
            12
        );
        assert_eq!(
            build_hamiltonian(&build_code(3, 3).unwrap(), 1.0)
                .terms
                .len(),
            72
        );
    }

    #[test]
    fn terms_commute_with_stabilizers() {
        for (d, n) in [(2, 2), (2, 4), (3, 3), (3, 5)] {
            let c = build_code(d, n).unwrap();
            let h = build_hamiltonian(&c, 1.0);
            for s in c.stabilizer_generators() {
                assert!(h.terms.iter().all(|t| !t.operator.anticommutes(&s)));
            }
        }
    }

    #[test]
    fn too_large_rejected() {
        let h = build_hamiltonian(&build_code(2, 4).unwrap(), 1.0);
        assert!(matches!(
            diagonalize_small(&h),
            Err(Error::TooLarge { sites: 16, .. })
        ));
        let h = build_hamiltonian(&build_code(3, 3).unwrap(), 1.0);
        assert!(diagonalize_small(&h).is_err());
    }

    #[test]
    fn n2_sectors_cover_hilbert_space() {
        let h = build_hamiltonian(&build_code(2, 2).unwrap(), 1.0);
        let r = diagonalize_small(&h).unwrap();
        assert_eq!(r.dimension, 16);
        assert_eq!(r.sectors.len(), 4);
        assert!(r.sectors.iter().all(|s| s.dimension == 4));
        assert_eq!(
            r.eigenvalues.iter().map(|l| l.multiplicity).sum::<usize>(),
            16
        );
        assert!(r.all_multiplicities_even());
    }

    #[test]
    fn mean_field_single_error() {
        let c = build_code(3, 5).unwrap();
        let h = build_hamiltonian(&c, 1.0);
        let params = MeanFieldParams::uniform(1.0).unwrap();
        let x = PauliOperator::single(125, c.site_index(&[2, 2, 2]).unwrap(), Pauli::X);
        assert_eq!(mean_field_delta_e(&h, &x, &params).unwrap(), 8.0);
        assert_eq!(
            mean_field_delta_e(&h, &PauliOperator::identity(125), &params).unwrap(),
            0.0
        );
        let corner = PauliOperator::single(125, 0, Pauli::X);
        assert_eq!(mean_field_delta_e(&h, &corner, &params).unwrap(), 4.0);
    }

    #[test]
    fn mean_field_rejects_2d_and_bad_params() {
        assert!(MeanFieldParams::new(1.0, 0.0, 1.0, 1.0).is_err());
        let h = build_hamiltonian(&build_code(2, 3).unwrap(), 1.0);
        let p = MeanFieldParams::uniform(1.0).unwrap();
        assert!(mean_field_delta_e(&h, &PauliOperator::identity(9), &p).is_err());
        let h3 = build_hamiltonian(&build_code(3, 3).unwrap(), 1.0);
        assert!(mean_field_delta_e(&h3, &PauliOperator::identity(9), &p).is_err());
    }

    #[test]
    fn mean_field_ground_energy_formula() {
        let n = 5usize;
        let h = build_hamiltonian(&build_code(3, n).unwrap(), 0.5);
        let p = MeanFieldParams::new(0.1, 0.2, 0.3, 0.4).unwrap();
        let expected = -0.5 * (n * n * (n - 1)) as f64 * 1.0;
        assert!((mean_field_ground_energy(&h, &p).unwrap() - expected).abs() < 1e-9);
    }

    #[test]
    fn clustering() {
        let levels = cluster_levels(&[-1.0, -1.0 + 1e-12, 0.5, 0.5, 0.5, 2.0]);
        let m: Vec<usize> = levels.iter().map(|l| l.multiplicity).collect();
        assert_eq!(m, [2, 3, 1]);
    }
}
