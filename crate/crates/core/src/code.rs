//! The square-lattice and cubic-lattice subsystem codes.
//!
//! Sites are indexed row-major in 2D (`row * n + col`) and x-major in 3D
//! (`(x * n + y) * n + z`), all zero-based. In 2D the gauge group is generated
//! by vertical `XX` and horizontal `ZZ` bonds; in 3D by `XX` bonds along x and
//! y and `ZZ` bonds along y and z.
//!
//! The X-part error string `e` records per-column (2D) / per-xy-plane (3D)
//! parities of the X bits, and `f` records per-row (2D) / per-yz-plane (3D)
//! parities of the Z bits. Gauge operators have `e = f = 0`; logical
//! operators have constant all-ones strings.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dimension {
    Two,
    Three,
}

impl Dimension {
    pub fn as_usize(self) -> usize {
        match self {
            Dimension::Two => 2,
            Dimension::Three => 3,
        }
    }
}

impl TryFrom<usize> for Dimension {
    type Error = Error;

    fn try_from(d: usize) -> Result<Self> {
        match d {
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            other => Err(Error::InvalidLayout(format!(
                "dimension must be 2 or 3, got {other}"
            ))),
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_usize())
    }
}

/// Lattice geometry of one code instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeLayout {
    dimension: Dimension,
    n: usize,
}

/// Parity strings of an operator; both have length `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ErrorStrings {
    pub e: BitString,
    pub f: BitString,
}

impl ErrorStrings {
    pub fn xor(&self, other: &ErrorStrings) -> ErrorStrings {
        ErrorStrings {
            e: &self.e ^ &other.e,
            f: &self.f ^ &other.f,
        }
    }
}

/// Stabilizer measurement outcomes, bit 1 meaning eigenvalue -1.
///
/// `sx[i]` is the outcome of the i-th X-type generator (`f_i ^ f_{i+1}`) and
/// `sz[j]` of the j-th Z-type generator (`e_j ^ e_{j+1}`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Syndrome {
    pub sx: BitString,
    pub sz: BitString,
}

impl Syndrome {
    pub fn is_trivial(&self) -> bool {
        self.sx.is_zero() && self.sz.is_zero()
    }
}

impl fmt::Display for Syndrome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.sx, self.sz)
    }
}

/// Action of an operator on the encoded subsystem.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "class", content = "syndrome")]
pub enum LogicalClass {
    Gauge,
    LogicalX,
    LogicalY,
    LogicalZ,
    Detectable(Syndrome),
}

impl LogicalClass {
    pub fn name(&self) -> &'static str {
        match self {
            LogicalClass::Gauge => "Gauge",
            LogicalClass::LogicalX => "LogicalX",
            LogicalClass::LogicalY => "LogicalY",
            LogicalClass::LogicalZ => "LogicalZ",
            LogicalClass::Detectable(_) => "Detectable",
        }
    }
}

impl fmt::Display for LogicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogicalClass::Detectable(s) => write!(f, "Detectable({s})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Encoded Pauli operators. `y` is `i * x * z`, which is Hermitian.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Logicals {
    pub x: PauliOperator,
    pub z: PauliOperator,
    pub y: PauliOperator,
}

/// One `(Z, X)` pair acting on a gauge qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaugeQubit {
    pub row: usize,
    pub col: usize,
    pub z: PauliOperator,
    pub x: PauliOperator,
}

/// Orientation of a two-site gauge bond.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BondKind {
    /// 2D: `XX` between vertically adjacent sites (same column).
    XxColumn,
    /// 2D: `ZZ` between horizontally adjacent sites (same row).
    ZzRow,
    /// 3D: `XX` along x.
    Xx,
    /// 3D: `XX` along y.
    Xy,
    /// 3D: `ZZ` along y.
    Zy,
    /// 3D: `ZZ` along z.
    Zz,
}

impl BondKind {
    pub fn pauli(self) -> Pauli {
        match self {
            BondKind::XxColumn | BondKind::Xx | BondKind::Xy => Pauli::X,
            BondKind::ZzRow | BondKind::Zy | BondKind::Zz => Pauli::Z,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            BondKind::XxColumn => "xx-col",
            BondKind::ZzRow => "zz-row",
            BondKind::Xx => "xx",
            BondKind::Xy => "xy",
            BondKind::Zy => "zy",
            BondKind::Zz => "zz",
        }
    }
}

/// A two-site gauge generator with its orientation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bond {
    pub kind: BondKind,
    pub sites: (usize, usize),
    pub operator: PauliOperator,
}

impl CodeLayout {
    /// Validates and builds a layout. 3D codes need odd `n` so the logical
    /// planes intersect in an odd number of sites.
    pub fn new(dimension: Dimension, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidLayout(format!(
                "side length must be at least 2, got {n}"
            )));
        }
        if dimension == Dimension::Three && n.is_multiple_of(2) {
            return Err(Error::InvalidLayout(format!(
                "3D codes require odd side length (logical X and Z must anticommute), got {n}"
            )));
        }
        let sites = n.checked_pow(dimension.as_usize() as u32).ok_or_else(|| {
            Error::InvalidLayout(format!("side length {n} overflows the site count"))
        })?;
        if sites > u32::MAX as usize {
            return Err(Error::InvalidLayout(format!("{sites} sites is too many")));
        }
        Ok(CodeLayout { dimension, n })
    }

    pub fn dimension(&self) -> Dimension {
        self.dimension
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_sites(&self) -> usize {
        self.n.pow(self.dimension.as_usize() as u32)
    }

    /// Flat index of zero-based coordinates (`[row, col]` or `[x, y, z]`).
    pub fn site_index(&self, coords: &[usize]) -> Result<usize> {
        let d = self.dimension.as_usize();
        if coords.len() != d {
            return Err(Error::InvalidParameter(format!(
                "expected {d} coordinates, got {}",
                coords.len()
            )));
        }
        if let Some(&c) = coords.iter().find(|&&c| c >= self.n) {
            return Err(Error::InvalidParameter(format!(
                "coordinate {c} out of range for side length {}",
                self.n
            )));
        }
        Ok(coords.iter().fold(0, |acc, &c| acc * self.n + c))
    }

    pub fn coords(&self, site: usize) -> Vec<usize> {
        let d = self.dimension.as_usize();
        let mut out = vec![0; d];
        let mut rest = site;
        for slot in out.iter_mut().rev() {
            *slot = rest % self.n;
            rest /= self.n;
        }
        out
    }

    fn idx2(&self, row: usize, col: usize) -> usize {
        row * self.n + col
    }

    fn idx3(&self, x: usize, y: usize, z: usize) -> usize {
        (x * self.n + y) * self.n + z
    }

    /// Index of the `e` component this site contributes to (column in 2D,
    /// z-coordinate in 3D).
    pub fn e_slot(&self, site: usize) -> usize {
        site % self.n
    }

    /// Index of the `f` component this site contributes to (row in 2D,
    /// x-coordinate in 3D).
    pub fn f_slot(&self, site: usize) -> usize {
        match self.dimension {
            Dimension::Two => site / self.n,
            Dimension::Three => site / (self.n * self.n),
        }
    }

    fn check(&self, p: &PauliOperator) -> Result<()> {
        if p.num_sites() != self.num_sites() {
            return Err(Error::SizeMismatch {
                left: p.num_sites(),
                right: self.num_sites(),
            });
        }
        Ok(())
    }

    fn bond(&self, kind: BondKind, u: usize, v: usize) -> Bond {
        Bond {
            kind,
            sites: (u, v),
            operator: PauliOperator::on_sites(self.num_sites(), [u, v], kind.pauli()),
        }
    }

    /// Nearest-neighbour gauge generators, tagged by orientation.
    pub fn gauge_bonds(&self) -> Vec<Bond> {
        let n = self.n;
        let mut out = Vec::new();
        match self.dimension {
            Dimension::Two => {
                for i in 0..n {
                    for j in 0..n - 1 {
                        out.push(self.bond(BondKind::ZzRow, self.idx2(i, j), self.idx2(i, j + 1)));
                    }
                }
                for j in 0..n {
                    for i in 0..n - 1 {
                        out.push(self.bond(
                            BondKind::XxColumn,
                            self.idx2(i, j),
                            self.idx2(i + 1, j),
                        ));
                    }
                }
            }
            Dimension::Three => {
                for a in 0..n {
                    for b in 0..n {
                        for k in 0..n - 1 {
                            out.push(self.bond(
                                BondKind::Xx,
                                self.idx3(k, a, b),
                                self.idx3(k + 1, a, b),
                            ));
                            out.push(self.bond(
                                BondKind::Xy,
                                self.idx3(a, k, b),
                                self.idx3(a, k + 1, b),
                            ));
                            out.push(self.bond(
                                BondKind::Zy,
                                self.idx3(a, k, b),
                                self.idx3(a, k + 1, b),
                            ));
                            out.push(self.bond(
                                BondKind::Zz,
                                self.idx3(a, b, k),
                                self.idx3(a, b, k + 1),
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn gauge_generators(&self) -> Vec<PauliOperator> {
        self.gauge_bonds().into_iter().map(|b| b.operator).collect()
    }

    /// Sites of the `f`-slab with index `i`: row `i` in 2D, yz-plane `x = i` in 3D.
    pub fn f_slab(&self, i: usize) -> Vec<usize> {
        (0..self.num_sites())
            .filter(|&s| self.f_slot(s) == i)
            .collect()
    }

    /// Sites of the `e`-slab with index `j`: column `j` in 2D, xy-plane `z = j` in 3D.
    pub fn e_slab(&self, j: usize) -> Vec<usize> {
        (0..self.num_sites())
            .filter(|&s| self.e_slot(s) == j)
            .collect()
    }

    /// X-type generators: X on two adjacent `f`-slabs. Detect Z errors.
    pub fn x_stabilizers(&self) -> Vec<PauliOperator> {
        (0..self.n - 1)
            .map(|i| {
                let sites = self.f_slab(i).into_iter().chain(self.f_slab(i + 1));
                PauliOperator::on_sites(self.num_sites(), sites, Pauli::X)
            })
            .collect()
    }

    /// Z-type generators: Z on two adjacent `e`-slabs. Detect X errors.
    pub fn z_stabilizers(&self) -> Vec<PauliOperator> {
        (0..self.n - 1)
            .map(|j| {
                let sites = self.e_slab(j).into_iter().chain(self.e_slab(j + 1));
                PauliOperator::on_sites(self.num_sites(), sites, Pauli::Z)
            })
            .collect()
    }

    /// All `2(n - 1)` generators, X-type first.
    pub fn stabilizer_generators(&self) -> Vec<PauliOperator> {
        let mut out = self.x_stabilizers();
        out.extend(self.z_stabilizers());
        out
    }

    /// `X` on the first `f`-slab and `Z` on the first `e`-slab.
    pub fn logical_operators(&self) -> Logicals {
        let x = PauliOperator::on_sites(self.num_sites(), self.f_slab(0), Pauli::X);
        let z = PauliOperator::on_sites(self.num_sites(), self.e_slab(0), Pauli::Z);
        let xz = &x * &z;
        let y = xz.clone().with_phase(xz.phase_exp() + 1);
        Logicals { x, z, y }
    }

    /// The `(n - 1)^2` gauge-qubit pairs of the 2D code: `Z` is the horizontal
    /// bond at `(i, j)-(i, j+1)` and `X` the product of vertical pairs joining
    /// row `i` to the last row over columns `0..=j`.
    pub fn gauge_qubit_operators(&self) -> Result<Vec<GaugeQubit>> {
        if self.dimension != Dimension::Two {
            return Err(Error::Unsupported(
                "gauge-qubit operators are only defined for the 2D code".into(),
            ));
        }
        let n = self.n;
        let num = self.num_sites();
        let mut out = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n - 1 {
            for j in 0..n - 1 {
                let z =
                    PauliOperator::on_sites(num, [self.idx2(i, j), self.idx2(i, j + 1)], Pauli::Z);
                let sites = (0..=j).flat_map(|k| [self.idx2(i, k), self.idx2(n - 1, k)]);
                let x = PauliOperator::on_sites(num, sites, Pauli::X);
                out.push(GaugeQubit {
                    row: i,
                    col: j,
                    z,
                    x,
                });
            }
        }
        Ok(out)
    }

    pub fn error_strings(&self, p: &PauliOperator) -> Result<ErrorStrings> {
        self.check(p)?;
        let mut e = BitString::zeros(self.n);
        let mut f = BitString::zeros(self.n);
        for s in 0..self.num_sites() {
            if p.x_bit(s) {
                e.flip(self.e_slot(s));
            }
            if p.z_bit(s) {
                f.flip(self.f_slot(s));
            }
        }
        Ok(ErrorStrings { e, f })
    }

    pub fn syndrome_of_strings(&self, strings: &ErrorStrings) -> Syndrome {
        Syndrome {
            sx: strings.f.adjacent_parities(),
            sz: strings.e.adjacent_parities(),
        }
    }

    /// Syndrome read off the error strings.
    pub fn measure_syndrome(&self, error: &PauliOperator) -> Result<Syndrome> {
        Ok(self.syndrome_of_strings(&self.error_strings(error)?))
    }

    /// Syndrome from direct anticommutation with each stabilizer generator.
    pub fn syndrome_by_commutation(&self, error: &PauliOperator) -> Result<Syndrome> {
        self.check(error)?;
        let sx = self
            .x_stabilizers()
            .iter()
            .map(|s| s.anticommutes(error))
            .collect();
        let sz = self
            .z_stabilizers()
            .iter()
            .map(|s| s.anticommutes(error))
            .collect();
        Ok(Syndrome { sx, sz })
    }

    /// Gauge / logical class of an operator, or `Detectable` when it
    /// anticommutes with some stabilizer generator.
    pub fn classify(&self, p: &PauliOperator) -> Result<LogicalClass> {
        let strings = self.error_strings(p)?;
        Ok(self.classify_strings(&strings))
    }

    pub fn classify_strings(&self, strings: &ErrorStrings) -> LogicalClass {
        let syndrome = self.syndrome_of_strings(strings);
        if !syndrome.is_trivial() {
            return LogicalClass::Detectable(syndrome);
        }
        // Trivial syndrome forces both strings to be constant.
        match (strings.e.get(0), strings.f.get(0)) {
            (false, false) => LogicalClass::Gauge,
            (true, false) => LogicalClass::LogicalX,
            (false, true) => LogicalClass::LogicalZ,
            (true, true) => LogicalClass::LogicalY,
        }
    }
}

/// Convenience constructor taking the dimension as a number.
pub fn build_code(dimension: usize, n: usize) -> Result<CodeLayout> {
    CodeLayout::new(Dimension::try_from(dimension)?, n)
}

/// Conjugates a (control, target) pair by site-wise CNOTs between two
/// copies of the same layout: `X_c -> X_c X_t`, `Z_t -> Z_c Z_t`.
pub fn conjugate_transversal_cnot(
    control: &PauliOperator,
    target: &PauliOperator,
) -> Result<(PauliOperator, PauliOperator)> {
    if control.num_sites() != target.num_sites() {
        return Err(Error::SizeMismatch {
            left: control.num_sites(),
            right: target.num_sites(),
        });
    }
    let n = control.num_sites();
    let mut c = PauliOperator::identity(n).with_phase(control.phase_exp());
    let mut t = PauliOperator::identity(n).with_phase(target.phase_exp());
    for s in 0..n {
        let (xc, zc) = (control.x_bit(s), control.z_bit(s));
        let (xt, zt) = (target.x_bit(s), target.z_bit(s));
        // Per-site factors on distinct qubits commute, so no phase arises.
        c.set_x(s, xc);
        c.set_z(s, zc ^ zt);
        t.set_x(s, xt ^ xc);
        t.set_z(s, zt);
    }
    Ok((c, t))
}
