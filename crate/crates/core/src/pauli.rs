//! Phase-tracked Pauli operators in the symplectic (X-bits, Z-bits) form.
//!
//! An operator is `i^phase * prod_s X_s^{a_s} Z_s^{b_s}`, with the X factor to
//! the left of the Z factor on every site. A site with `a = b = 1` therefore
//! carries `XZ = -iY`, and the Hermitian `Y` is stored as `(1, 1)` with one
//! extra unit of phase.

use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

const WORD: usize = 64;

/// Single-site Pauli label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// `(x, z)` bits of the label. `Y` maps to `(1, 1)`, which as a bare
    /// product is `-iY`.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Self> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }
}

/// An n-site Pauli operator with its phase tracked mod 4.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PauliOperator {
    num_sites: usize,
    phase: u8,
    x: Vec<u64>,
    z: Vec<u64>,
}

fn words_for(num_sites: usize) -> usize {
    num_sites.div_ceil(WORD)
}

fn check_same_size(p: &PauliOperator, q: &PauliOperator) -> Result<()> {
    if p.num_sites != q.num_sites {
        return Err(Error::SizeMismatch {
            left: p.num_sites,
            right: q.num_sites,
        });
    }
    Ok(())
}

impl PauliOperator {
    pub fn identity(num_sites: usize) -> Self {
        let w = words_for(num_sites);
        PauliOperator {
            num_sites,
            phase: 0,
            x: vec![0; w],
            z: vec![0; w],
        }
    }

    /// Hermitian single-site operator (`Y` gets the compensating phase).
    pub fn single(num_sites: usize, site: usize, pauli: Pauli) -> Self {
        let mut p = Self::identity(num_sites);
        p.apply_site(site, pauli);
        p
    }

    /// Product of the same Hermitian Pauli on every listed site.
    pub fn on_sites(
        num_sites: usize,
        sites: impl IntoIterator<Item = usize>,
        pauli: Pauli,
    ) -> Self {
        let mut p = Self::identity(num_sites);
        for s in sites {
            p.apply_site(s, pauli);
        }
        p
    }

    /// Builds `i^phase_exp * P(a, b)` from explicit bit slices.
    pub fn from_bits(phase_exp: u8, a: &[bool], b: &[bool]) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::SizeMismatch {
                left: a.len(),
                right: b.len(),
            });
        }
        let mut p = Self::identity(a.len());
        p.phase = phase_exp & 3;
        for (s, (&xa, &zb)) in a.iter().zip(b).enumerate() {
            p.set_x(s, xa);
            p.set_z(s, zb);
        }
        Ok(p)
    }

    /// Uniformly random bits and phase.
    pub fn random<R: Rng + ?Sized>(num_sites: usize, rng: &mut R) -> Self {
        let mut p = Self::identity(num_sites);
        p.phase = rng.random_range(0..4);
        for s in 0..num_sites {
            p.set_x(s, rng.random());
            p.set_z(s, rng.random());
        }
        p
    }

    pub fn num_sites(&self) -> usize {
        self.num_sites
    }

    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase_exp: u8) -> Self {
        self.phase = phase_exp & 3;
        self
    }

    pub fn x_bit(&self, site: usize) -> bool {
        debug_assert!(site < self.num_sites);
        (self.x[site / WORD] >> (site % WORD)) & 1 == 1
    }

    pub fn z_bit(&self, site: usize) -> bool {
        debug_assert!(site < self.num_sites);
        (self.z[site / WORD] >> (site % WORD)) & 1 == 1
    }

    pub fn set_x(&mut self, site: usize, value: bool) {
        assert!(site < self.num_sites, "site {site} out of range");
        let mask = 1u64 << (site % WORD);
        if value {
            self.x[site / WORD] |= mask;
        } else {
            self.x[site / WORD] &= !mask;
        }
    }

    pub fn set_z(&mut self, site: usize, value: bool) {
        assert!(site < self.num_sites, "site {site} out of range");
        let mask = 1u64 << (site % WORD);
        if value {
            self.z[site / WORD] |= mask;
        } else {
            self.z[site / WORD] &= !mask;
        }
    }

    /// Right-multiplies by the Hermitian single-site operator `pauli` on `site`.
    pub fn apply_site(&mut self, site: usize, pauli: Pauli) {
        let factor = Self::single_bits(self.num_sites, site, pauli);
        *self = &*self * &factor;
    }

    fn single_bits(num_sites: usize, site: usize, pauli: Pauli) -> Self {
        let mut p = Self::identity(num_sites);
        let (x, z) = pauli.bits();
        p.set_x(site, x);
        p.set_z(site, z);
        if pauli == Pauli::Y {
            p.phase = 1;
        }
        p
    }

    /// Label on `site`, ignoring the global phase.
    pub fn site(&self, site: usize) -> Pauli {
        Pauli::from_bits(self.x_bit(site), self.z_bit(site))
    }

    pub fn x_words(&self) -> &[u64] {
        &self.x
    }

    pub fn z_words(&self) -> &[u64] {
        &self.z
    }

    pub fn is_identity(&self) -> bool {
        self.phase == 0 && self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// True when the bit part is trivial, whatever the phase.
    pub fn is_scalar(&self) -> bool {
        self.x.iter().chain(&self.z).all(|&w| w == 0)
    }

    /// Number of sites that are not the identity.
    pub fn weight(&self) -> usize {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a | b).count_ones() as usize)
            .sum()
    }

    /// Sites carrying a non-identity factor, in increasing order.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.num_sites).filter(|&s| self.x_bit(s) || self.z_bit(s))
    }

    /// Resets the phase so the operator reads as Hermitian tokens with a
    /// `+1` prefix.
    pub fn hermitian(mut self) -> Self {
        self.phase = (self.y_count() % 4) as u8;
        self
    }

    /// Number of `(1, 1)` sites.
    fn y_count(&self) -> u32 {
        self.x
            .iter()
            .zip(&self.z)
            .map(|(a, b)| (a & b).count_ones())
            .sum()
    }

    /// Group product `self * rhs`.
    pub fn try_mul(&self, rhs: &PauliOperator) -> Result<PauliOperator> {
        check_same_size(self, rhs)?;
        // Z^b X^a = (-1)^{ab} X^a Z^b per site.
        let swaps: u32 = self
            .z
            .iter()
            .zip(&rhs.x)
            .map(|(b, a)| (b & a).count_ones())
            .sum();
        Ok(PauliOperator {
            num_sites: self.num_sites,
            phase: ((self.phase as u32 + rhs.phase as u32 + 2 * swaps) % 4) as u8,
            x: self.x.iter().zip(&rhs.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&rhs.z).map(|(a, b)| a ^ b).collect(),
        })
    }

    /// Symplectic commutation test.
    pub fn commutes_with(&self, other: &PauliOperator) -> Result<bool> {
        check_same_size(self, other)?;
        Ok(self.symplectic_product(other) == 0)
    }

    /// `<a, b'> + <b, a'>` mod 2; 1 means the operators anticommute.
    /// Panics on size mismatch.
    pub fn symplectic_product(&self, other: &PauliOperator) -> u32 {
        assert_eq!(self.num_sites, other.num_sites, "operator sizes differ");
        let ones: u32 = self
            .x
            .iter()
            .zip(&other.z)
            .zip(self.z.iter().zip(&other.x))
            .map(|((xa, zb), (za, xb))| ((xa & zb) ^ (za & xb)).count_ones())
            .sum();
        ones & 1
    }

    pub fn anticommutes(&self, other: &PauliOperator) -> bool {
        self.symplectic_product(other) == 1
    }

    pub fn inverse(&self) -> PauliOperator {
        // (i^k X^a Z^b)^{-1} = i^{-k} Z^b X^a = i^{-k} (-1)^{|a & b|} X^a Z^b
        let mut inv = self.clone();
        inv.phase = ((4 - self.phase as u32 + 2 * self.y_count()) % 4) as u8;
        inv
    }

    /// Prefix for the Hermitian-token rendering of this operator.
    fn display_phase(&self) -> u8 {
        // i^phase X^a Z^b = i^{phase - #Y} (tokens with Hermitian Y)
        ((self.phase as u32 + 4 * self.num_sites as u32 - self.y_count()) % 4) as u8
    }
}

impl fmt::Debug for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOperator({self})")
    }
}

/// Formats as an optional phase (`-1`, `+i`, `-i`; omitted for `+1`)
/// followed by one `I/X/Y/Z` token per site.
impl fmt::Display for PauliOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.display_phase() {
            0 => {}
            1 => f.write_str("+i ")?,
            2 => f.write_str("-1 ")?,
            _ => f.write_str("-i ")?,
        }
        for s in 0..self.num_sites {
            write!(f, "{}", self.site(s).symbol())?;
        }
        Ok(())
    }
}

impl FromStr for PauliOperator {
    type Err = Error;

    /// Accepts an optional leading phase from `+1 -1 +i -i` (also `+`, `-`,
    /// `i` and the Unicode minus), then per-site tokens. Whitespace between the
    /// phase and the tokens is optional.
    fn from_str(text: &str) -> Result<Self> {
        let normalized = text.trim().replace('\u{2212}', "-");
        let (display_phase, rest) = split_phase(&normalized);
        let tokens: Vec<char> = rest.chars().filter(|c| !c.is_whitespace()).collect();
        if tokens.is_empty() {
            return Err(Error::Parse("empty Pauli string".into()));
        }
        let mut p = PauliOperator::identity(tokens.len());
        for (s, &c) in tokens.iter().enumerate() {
            let pauli = Pauli::from_symbol(c).ok_or_else(|| {
                Error::Parse(format!("unknown Pauli token {c:?} at position {s}"))
            })?;
            let (x, z) = pauli.bits();
            p.set_x(s, x);
            p.set_z(s, z);
        }
        p.phase = ((display_phase as u32 + p.y_count()) % 4) as u8;
        Ok(p)
    }
}

fn split_phase(text: &str) -> (u8, &str) {
    for (prefix, phase) in [
        ("+1", 0),
        ("-1", 2),
        ("+i", 1),
        ("-i", 3),
        ("+", 0),
        ("-", 2),
        ("i", 1),
    ] {
        if let Some(rest) = text.strip_prefix(prefix) {
            return (phase, rest);
        }
    }
    (0, text)
}

/// Parses a string whose token count must equal `num_sites`.
pub fn parse_with_len(text: &str, num_sites: usize) -> Result<PauliOperator> {
    let p: PauliOperator = text.parse()?;
    if p.num_sites() != num_sites {
        return Err(Error::Parse(format!(
            "expected {num_sites} site tokens, found {}",
            p.num_sites()
        )));
    }
    Ok(p)
}

/// Panics on size mismatch; use [`PauliOperator::try_mul`] for checked products.
impl Mul for &PauliOperator {
    type Output = PauliOperator;

    fn mul(self, rhs: &PauliOperator) -> PauliOperator {
        self.try_mul(rhs).expect("operator sizes differ")
    }
}

impl Mul for PauliOperator {
    type Output = PauliOperator;

    fn mul(self, rhs: PauliOperator) -> PauliOperator {
        &self * &rhs
    }
}

/// Checked product.
pub fn pauli_mul(p: &PauliOperator, q: &PauliOperator) -> Result<PauliOperator> {
    p.try_mul(q)
}

/// Checked commutation test.
pub fn commutes(p: &PauliOperator, q: &PauliOperator) -> Result<bool> {
    p.commutes_with(q)
}
