//! Signed lists of idempotents and their verification.

use sha2::{Digest, Sha256};

use crate::canon::SimTransform;
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::json::mat_to_json;
use crate::matrix::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// A signed list of idempotents whose signed sum is a target matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompCert {
    pub seed: u64,
    pub signs: Vec<Sign>,
    pub parts: Vec<Mat>,
    pub pipeline: String,
    pub target_hash: String,
    pub size: usize,
    pub field: Field,
}

/// Hex SHA-256 digest of a matrix's canonical JSON encoding.
pub fn matrix_digest(a: &Mat) -> String {
    let bytes = mat_to_json(a).to_string();
    Sha256::digest(bytes.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl DecompCert {
    /// Builds and verifies a certificate for `target`.
    pub fn build(
        target: &Mat,
        terms: Vec<(Sign, Mat)>,
        pipeline: &str,
        seed: u64,
    ) -> Result<DecompCert> {
        let n = target.require_square()?;
        let (signs, parts) = terms.into_iter().unzip();
        let cert = DecompCert {
            seed,
            signs,
            parts,
            pipeline: pipeline.to_string(),
            target_hash: matrix_digest(target),
            size: n,
            field: target.field().clone(),
        };
        if !cert.verify(target) {
            return Err(Error::Internal(format!("{pipeline} produced an invalid certificate")));
        }
        Ok(cert)
    }

    pub fn count(&self) -> usize {
        self.parts.len()
    }

    pub fn is_plain_sum(&self) -> bool {
        self.signs.iter().all(|&s| s == Sign::Plus)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Sign, &Mat)> {
        self.signs.iter().copied().zip(&self.parts)
    }

    pub fn signed_sum(&self) -> Result<Mat> {
        let mut acc = Mat::zeros(&self.field, self.size, self.size);
        for (s, m) in self.terms() {
            acc = match s {
                Sign::Plus => acc.add(m)?,
                Sign::Minus => acc.sub(m)?,
            };
        }
        Ok(acc)
    }

    /// Every part idempotent, signed sum equal to `target`, digest matching.
    pub fn verify(&self, target: &Mat) -> bool {
        if target.field() != &self.field
            || target.rows() != self.size
            || target.cols() != self.size
            || self.signs.len() != self.parts.len()
        {
            return false;
        }
        let parts_ok = self.parts.iter().all(|p| {
            p.field() == &self.field
                && p.rows() == self.size
                && p.cols() == self.size
                && p.is_idempotent().unwrap_or(false)
        });
        parts_ok
            && self.signed_sum().map_or(false, |s| &s == target)
            && self.target_hash == matrix_digest(target)
    }

    pub fn with_pipeline(mut self, pipeline: &str) -> DecompCert {
        self.pipeline = pipeline.to_string();
        self
    }

    /// Conjugates every part, mapping a certificate for `A` to one for
    /// `S A S^-1`.
    pub fn conjugate(&self, t: &SimTransform) -> Result<DecompCert> {
        let parts: Vec<Mat> = self.parts.iter().map(|p| t.apply(p)).collect::<Result<_>>()?;
        let mut out = DecompCert { parts, ..self.clone() };
        out.target_hash = matrix_digest(&out.signed_sum()?);
        Ok(out)
    }

    /// Expands `-Q` as `(p-1)` copies of `Q`; the part count grows.
    pub fn to_plain_sum(&self) -> DecompCert {
        let copies = (self.field.p() - 1) as usize;
        let mut parts = Vec::new();
        for (s, m) in self.terms() {
            match s {
                Sign::Plus => parts.push(m.clone()),
                Sign::Minus => parts.extend(std::iter::repeat(m.clone()).take(copies)),
            }
        }
        DecompCert { signs: vec![Sign::Plus; parts.len()], parts, ..self.clone() }
    }

    /// Drops zero parts.
    pub fn prune(&self) -> DecompCert {
        let (signs, parts) = self
            .terms()
            .filter(|(_, m)| !m.is_zero())
            .map(|(s, m)| (s, m.clone()))
            .unzip();
        DecompCert { signs, parts, ..self.clone() }
    }

    /// Pads with zero parts of the given signs up to `pattern.len()` slots,
    /// checking that nonzero parts agree with the pattern.
    pub(crate) fn align_to(&self, pattern: &[Sign]) -> Result<DecompCert> {
        let mut out = self.clone();
        let zero = Mat::zeros(&self.field, self.size, self.size);
        for (i, (&want, part)) in pattern.iter().zip(out.parts.iter()).enumerate() {
            if out.signs[i] != want && !part.is_zero() {
                return Err(Error::SignPatternConflict(i + 1));
            }
        }
        out.signs = pattern.to_vec();
        if self.parts.len() > pattern.len() {
            return Err(Error::SignPatternConflict(pattern.len() + 1));
        }
        out.parts.resize(pattern.len(), zero);
        Ok(out)
    }
}

pub fn verify_cert(target: &Mat, cert: &DecompCert) -> bool {
    cert.verify(target)
}

/// Certificate for the block-diagonal union of the inputs' targets; part
/// counts are padded with zero matrices to the largest count.
pub fn merge_block_diag(certs: &[DecompCert]) -> Result<DecompCert> {
    let first = certs.first().ok_or(Error::EmptyBlockList)?;
    let field = first.field.clone();
    let count = certs.iter().map(DecompCert::count).max().unwrap_or(0);
    let mut pattern: Vec<Option<Sign>> = vec![None; count];
    for c in certs {
        if c.field != field {
            return Err(Error::FieldMismatch);
        }
        if c.signs.len() != c.parts.len() {
            return Err(Error::ShapeMismatch("signs and parts differ in length".into()));
        }
        for (i, (s, m)) in c.terms().enumerate() {
            if m.is_zero() {
                continue;
            }
            match pattern[i] {
                None => pattern[i] = Some(s),
                Some(t) if t != s => return Err(Error::SignPatternConflict(i + 1)),
                _ => {}
            }
        }
    }
    let pattern: Vec<Sign> = pattern
        .into_iter()
        .enumerate()
        .map(|(i, s)| {
            s.or_else(|| certs.iter().find_map(|c| c.signs.get(i).copied()))
                .unwrap_or(Sign::Plus)
        })
        .collect();
    let aligned: Vec<DecompCert> = certs.iter().map(|c| c.align_to(&pattern)).collect::<Result<_>>()?;
    let size: usize = certs.iter().map(|c| c.size).sum();
    let mut parts = Vec::with_capacity(count);
    for slot in 0..count {
        let mut m = Mat::zeros(&field, size, size);
        let mut off = 0;
        for c in &aligned {
            m.set_block(off, off, &c.parts[slot]);
            off += c.size;
        }
        parts.push(m);
    }
    let mut target = Mat::zeros(&field, size, size);
    let mut off = 0;
    for c in certs {
        target.set_block(off, off, &c.signed_sum()?);
        off += c.size;
    }
    let seed = first.seed;
    let pipeline = first.pipeline.clone();
    DecompCert::build(&target, pattern.into_iter().zip(parts).collect(), &pipeline, seed)
}

/// Certificate with `k` copies of the identity for the scalar `k.1`.
pub(crate) fn scalar_copies(field: &Field, n: usize, c: Elem, pipeline: &str, seed: u64) -> Result<DecompCert> {
    let k = field.prime_residue(c).ok_or(Error::TraceNotInPrimeField)?;
    let id = Mat::identity(field, n);
    let terms = (0..k).map(|_| (Sign::Plus, id.clone())).collect();
    DecompCert::build(&Mat::scalar(field, n, c), terms, pipeline, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_examples() {
        let f3 = Field::prime(3).unwrap();
        let i2 = Mat::identity(&f3, 2);
        let good = DecompCert::build(&i2, vec![(Sign::Plus, i2.clone())], "test", 0).unwrap();
        assert!(verify_cert(&i2, &good));
        let mut bad = good.clone();
        bad.parts[0] = Mat::from_ints(&f3, &[&[1, 1], &[0, 1]]);
        assert!(!verify_cert(&i2, &bad));
    }

    #[test]
    fn conjugating_by_swap() {
        let f5 = Field::prime(5).unwrap();
        let e = Mat::from_ints(&f5, &[&[1, 0], &[0, 0]]);
        let cert = DecompCert::build(&e, vec![(Sign::Plus, e.clone())], "test", 0).unwrap();
        let swap = SimTransform::from_matrix(Mat::permutation(&f5, &[1, 0])).unwrap();
        let moved = cert.conjugate(&swap).unwrap();
        assert_eq!(moved.parts[0], Mat::from_ints(&f5, &[&[0, 0], &[0, 1]]));
        assert!(moved.verify(&swap.apply(&e).unwrap()));
    }

    #[test]
    fn merge_pads_with_zeros() {
        let f2 = Field::prime(2).unwrap();
        let one = Mat::identity(&f2, 1);
        let a = Mat::from_ints(&f2, &[&[1, 1], &[0, 0]]);
        let three = DecompCert::build(
            &Mat::from_ints(&f2, &[&[1, 1], &[0, 0]]),
            vec![(Sign::Plus, a.clone()), (Sign::Plus, a.clone()), (Sign::Plus, a.clone())],
            "x",
            0,
        )
        .unwrap();
        let two = DecompCert::build(
            &Mat::zeros(&f2, 1, 1),
            vec![(Sign::Plus, one.clone()), (Sign::Plus, one.clone())],
            "x",
            0,
        )
        .unwrap();
        let merged = merge_block_diag(&[three, two]).unwrap();
        assert_eq!(merged.count(), 3);
        assert_eq!(merged.size, 3);

        let minus = DecompCert::build(&one.neg(), vec![(Sign::Minus, one.clone())], "x", 0).unwrap();
        let plus = DecompCert::build(&one, vec![(Sign::Plus, one.clone())], "x", 0).unwrap();
        assert_eq!(merge_block_diag(&[plus, minus]).err(), Some(Error::SignPatternConflict(1)));
    }

    #[test]
    fn plain_expansion() {
        let f5 = Field::prime(5).unwrap();
        let e = Mat::from_ints(&f5, &[&[1]]);
        let c = DecompCert::build(&e.neg(), vec![(Sign::Minus, e.clone())], "x", 0).unwrap();
        let plain = c.to_plain_sum();
        assert_eq!(plain.count(), 4);
        assert!(plain.verify(&e.neg()));
    }
}
