//! Bounds on the idempotent count and the pipeline dispatcher.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::Mat;

use super::cert::{scalar_copies, DecompCert};
use super::cyclic::{decompose_cyclic, decompose_sum5, require_prime_trace};
use super::prime4::{decompose_prime4, nilfit_max_padding, prime4_threshold};
use super::small::{decompose_char23_4, decompose_small_field3};

/// Lower and upper bounds on the least `s` such that every matrix of
/// `M_n(K)` with trace in the prime subfield is a sum of `s` idempotents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnBounds {
    pub lower: usize,
    pub upper: usize,
    pub notes: Vec<String>,
}

/// `Some(n0)` when the prime-field four-idempotent construction covers `n`.
fn prime4_covers(field: &Field, n: usize) -> Result<Option<usize>> {
    if !field.is_prime_field() {
        return Ok(None);
    }
    let p = field.p();
    let pu = p as usize;
    let cheap = 2 * pu + pu * nilfit_max_padding(p, 2 * pu - 1) + 1;
    if n < cheap {
        return Ok(None);
    }
    let n0 = prime4_threshold(p)?;
    Ok((n >= n0).then_some(n0))
}

pub fn sn_bounds(n: usize, field: &Field) -> SnBounds {
    let p = field.p() as usize;
    let mut notes = Vec::new();
    if n <= 1 {
        let v = (p - 1).max(1);
        notes.push(format!("lower = upper = {v}: [c] needs as many copies of [1] as the residue of c"));
        return SnBounds { lower: v, upper: v, notes };
    }
    let lower = 1 + (p - 1) / n;
    notes.push(format!("lower {lower}: trace argument, 1 + [(p-1)/n]"));
    let mut upper = 5 + (p - 1) / n;
    notes.push(format!("upper {upper}: two staircase idempotents plus a cyclic tail, 5 + [(p-1)/n]"));
    let mut tighten = |value: usize, why: String| {
        if value < upper {
            upper = value;
            notes.push(format!("upper {value}: {why}"));
        }
    };
    if field.order() <= 3 {
        tighten(3, "fields with at most three elements".into());
    }
    if p <= 3 {
        tighten(4, "characteristic 2 or 3".into());
    }
    if let Ok(Some(n0)) = prime4_covers(field, n) {
        tighten(4, format!("prime field with n >= {n0}"));
    }
    SnBounds { lower, upper, notes }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Auto,
    Sum5,
    Small3,
    Char23,
    Prime4,
    Cyclic,
}

impl Mode {
    pub const ALL: [Mode; 6] = [Mode::Auto, Mode::Sum5, Mode::Small3, Mode::Char23, Mode::Prime4, Mode::Cyclic];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Auto => "auto",
            Mode::Sum5 => "sum5",
            Mode::Small3 => "small3",
            Mode::Char23 => "char23",
            Mode::Prime4 => "prime4",
            Mode::Cyclic => "cyclic",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown mode `{s}`")))
    }
}

/// Runs one pipeline.
pub fn decompose_with(a: &Mat, mode: Mode, seed: u64) -> Result<DecompCert> {
    match mode {
        Mode::Auto => decompose_best(a, seed),
        Mode::Sum5 => decompose_sum5(a, seed),
        Mode::Small3 => decompose_small_field3(a, seed),
        Mode::Char23 => decompose_char23_4(a, seed),
        Mode::Prime4 => decompose_prime4(a, seed),
        Mode::Cyclic => decompose_cyclic(a, seed),
    }
}

fn not_applicable(e: &Error) -> bool {
    matches!(
        e,
        Error::FieldTooLarge | Error::WrongCharacteristic(_) | Error::BelowThreshold { .. } | Error::NotPrimeField
    )
}

/// Tries the pipelines with the smallest guaranteed count first.
pub fn decompose_best(a: &Mat, seed: u64) -> Result<DecompCert> {
    let n = a.require_square()?;
    let f = a.field();
    require_prime_trace(a)?;
    if n == 0 {
        return DecompCert::build(a, Vec::new(), "auto", seed);
    }
    if n == 1 {
        return scalar_copies(f, 1, a.get(0, 0), "scalar", seed);
    }
    let mut candidates = Vec::new();
    if f.order() <= 3 {
        candidates.push(Mode::Small3);
    }
    if f.p() <= 3 {
        candidates.push(Mode::Char23);
    }
    if prime4_covers(f, n)?.is_some() {
        candidates.push(Mode::Prime4);
    }
    for mode in candidates {
        match decompose_with(a, mode, seed) {
            Err(e) if not_applicable(&e) => continue,
            other => return other,
        }
    }
    decompose_sum5(a, seed)
}
