//! Syndrome decoding by minimum-weight repetition-code reconstruction.
//!
//! Each of the error strings `e` and `f` is treated as a word of an n-bit
//! repetition code whose parity checks are the stabilizer outcomes. Given
//! the checks there are exactly two consistent strings, a word and its
//! complement; the lighter one is chosen (first bit 0 on a tie) and undone
//! by single-site operators on a fixed line of the lattice.

use serde::Serialize;

use crate::bits::BitString;
use crate::code::{CodeLayout, Dimension, ErrorStrings, LogicalClass, Syndrome};
use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliOperator};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecodeOutcome {
    pub syndrome: Syndrome,
    pub inferred_e: BitString,
    pub inferred_f: BitString,
    #[serde(serialize_with = "serialize_display")]
    pub correction: PauliOperator,
}

fn serialize_display<S: serde::Serializer>(p: &PauliOperator, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(p)
}

/// Minimum-weight word of the repetition code consistent with the
/// neighbour-parity `checks` (length `n - 1`).
pub fn decode_repetition(checks: &BitString) -> BitString {
    let mut word = BitString::zeros(checks.len() + 1);
    let mut acc = false;
    for (i, c) in checks.iter().enumerate() {
        acc ^= c;
        word.set(i + 1, acc);
    }
    let w = word.weight();
    // Ties keep the word anchored at bit 0 = 0.
    if 2 * w > word.len() {
        word.complement()
    } else {
        word
    }
}

pub fn measure_syndrome(layout: &CodeLayout, error: &PauliOperator) -> Result<Syndrome> {
    layout.measure_syndrome(error)
}

/// Chooses the correction for a syndrome. Z corrections sit on the first
/// column (2D) or on the line `y = z = 0` (3D); X corrections on the first
/// row (2D) or the line `x = y = 0` (3D).
pub fn decode_syndrome(layout: &CodeLayout, syndrome: &Syndrome) -> Result<DecodeOutcome> {
    let n = layout.n();
    if syndrome.sx.len() != n - 1 || syndrome.sz.len() != n - 1 {
        return Err(Error::InvalidParameter(format!(
            "syndrome strings must have length {}, got {} and {}",
            n - 1,
            syndrome.sx.len(),
            syndrome.sz.len()
        )));
    }
    let inferred_f = decode_repetition(&syndrome.sx);
    let inferred_e = decode_repetition(&syndrome.sz);
    let correction = correction_for(layout, &inferred_e, &inferred_f);
    Ok(DecodeOutcome {
        syndrome: syndrome.clone(),
        inferred_e,
        inferred_f,
        correction,
    })
}

/// Operator whose error strings are exactly `(e, f)`, supported on the
/// fixed correction lines.
pub fn correction_for(layout: &CodeLayout, e: &BitString, f: &BitString) -> PauliOperator {
    let mut q = PauliOperator::identity(layout.num_sites());
    let site = |coords: &[usize]| layout.site_index(coords).expect("coordinates in range");
    for i in f.ones_positions() {
        let s = match layout.dimension() {
            Dimension::Two => site(&[i, 0]),
            Dimension::Three => site(&[i, 0, 0]),
        };
        q.apply_site(s, Pauli::Z);
    }
    for j in e.ones_positions() {
        let s = match layout.dimension() {
            Dimension::Two => site(&[0, j]),
            Dimension::Three => site(&[0, 0, j]),
        };
        q.apply_site(s, Pauli::X);
    }
    q
}

pub fn decode(layout: &CodeLayout, error: &PauliOperator) -> Result<DecodeOutcome> {
    let syndrome = layout.measure_syndrome(error)?;
    decode_syndrome(layout, &syndrome)
}

/// Residual class of `correction * error`. `Gauge` is success; the logical
/// classes name the induced encoded error.
pub fn adjudicate(
    layout: &CodeLayout,
    error: &PauliOperator,
    outcome: &DecodeOutcome,
) -> Result<LogicalClass> {
    let strings = layout.error_strings(error)?;
    if layout.syndrome_of_strings(&strings) != outcome.syndrome {
        return Err(Error::OutcomeMismatch);
    }
    let residual = strings.xor(&ErrorStrings {
        e: outcome.inferred_e.clone(),
        f: outcome.inferred_f.clone(),
    });
    let class = layout.classify_strings(&residual);
    debug_assert!(!matches!(class, LogicalClass::Detectable(_)));
    Ok(class)
}

/// Decodes `error` and returns the residual class in one step.
pub fn decode_and_adjudicate(layout: &CodeLayout, error: &PauliOperator) -> Result<LogicalClass> {
    let outcome = decode(layout, error)?;
    adjudicate(layout, error, &outcome)
}

/// Probability that the decoded `f` string lands on the wrong codeword under
/// independent Z flips with probability `p_flip` (the X case is symmetric).
///
/// A slab of `m` sites has odd parity with probability `(1 - (1 - 2p)^m) / 2`;
/// the decoder fails when a majority of the `n` slabs are odd.
pub fn analytic_failure_prob(layout: &CodeLayout, p_flip: f64) -> Result<f64> {
    let n = layout.n();
    if n.is_multiple_of(2) {
        return Err(Error::Unsupported(format!(
            "closed-form failure probability needs odd n (tie-breaking makes even n rule-dependent), got {n}"
        )));
    }
    if !(0.0..=1.0).contains(&p_flip) {
        return Err(Error::InvalidParameter(format!(
            "probability {p_flip} outside [0, 1]"
        )));
    }
    let m = match layout.dimension() {
        Dimension::Two => n,
        Dimension::Three => n * n,
    };
    let q = (1.0 - (1.0 - 2.0 * p_flip).powi(m as i32)) / 2.0;
    Ok(binomial_upper_tail(n, n.div_ceil(2), q))
}

/// `P[Binomial(n, q) >= k]`.
fn binomial_upper_tail(n: usize, k: usize, q: f64) -> f64 {
    let mut coeff = 1.0f64;
    let mut total = 0.0;
    for j in 0..=n {
        if j > 0 {
            coeff = coeff * (n + 1 - j) as f64 / j as f64;
        }
        if j >= k {
            total += coeff * q.powi(j as i32) * (1.0 - q).powi((n - j) as i32);
        }
    }
    total
}
