//! Finite fields `F_p` and `F_{p^k}`.
//!
//! Elements are stored as packed integer codes: the coordinate vector
//! `(c_0, .., c_{k-1})` in the power basis of the generator is encoded as
//! `c_0 + c_1 p + .. + c_{k-1} p^{k-1}`. For `k = 1` the code is the residue
//! itself, so the prime subfield is exactly the codes below `p`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::Poly;

/// An element of a [`Field`], as its packed code.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Debug)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Arithmetic operations accepted by [`Field::arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Inv,
    Neg,
    Pow(u64),
}

const TABLE_LIMIT: u32 = 256;

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    neg: Vec<u32>,
}

struct Inner {
    p: u32,
    k: usize,
    q: u32,
    /// Monic modulus, little-endian residues, length `k + 1`. Empty for `k = 1`.
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

/// A validated finite field context.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{} mod {:?}", self.0.p, self.0.k, self.0.modulus)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// The prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field> {
        Field::new(p, 1, None)
    }

    /// Builds `F_{p^k}`. Without an explicit modulus the lexicographically
    /// smallest monic irreducible of degree `k` is used, comparing
    /// little-endian coefficient lists (constant term first).
    pub fn new(p: u64, k: usize, modulus: Option<&[u64]>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if k == 0 {
            return Err(Error::DegreeMismatch { expected: 1, found: 0 });
        }
        let q = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
        if q >= (1u128 << 31) {
            return Err(Error::FieldTooLargeForEncoding);
        }
        let p32 = p as u32;
        if k == 1 {
            if let Some(m) = modulus {
                // a degree-1 modulus carries no information; accept X + c
                if m.len() != 2 || m[1] % p != 1 {
                    return Err(Error::DegreeMismatch { expected: 1, found: m.len().saturating_sub(1) });
                }
            }
            return Ok(Field::build(p32, 1, Vec::new()));
        }
        let base = Field::build(p32, 1, Vec::new());
        let modulus: Vec<u32> = match modulus {
            Some(m) => {
                let mut m: Vec<u32> = m.iter().map(|&c| (c % p) as u32).collect();
                while m.last() == Some(&0) {
                    m.pop();
                }
                if m.len() != k + 1 {
                    return Err(Error::DegreeMismatch { expected: k, found: m.len().saturating_sub(1) });
                }
                if m[k] != 1 {
                    return Err(Error::NotMonic);
                }
                let poly = Poly::new(&base, m.iter().map(|&c| Elem(c)).collect());
                if !poly.is_irreducible() {
                    return Err(Error::ReducibleModulus(p));
                }
                m
            }
            None => default_modulus(&base, k),
        };
        Ok(Field::build(p32, k, modulus))
    }

    fn build(p: u32, k: usize, modulus: Vec<u32>) -> Field {
        let q = p.pow(k as u32);
        let mut inner = Inner { p, k, q, modulus, tables: None };
        if k > 1 && q <= TABLE_LIMIT {
            let qs = q as usize;
            let mut add = vec![0u32; qs * qs];
            let mut mul = vec![0u32; qs * qs];
            let mut neg = vec![0u32; qs];
            let mut inv = vec![0u32; qs];
            for a in 0..q {
                neg[a as usize] = slow_neg(&inner, a);
                for b in 0..q {
                    add[(a * q + b) as usize] = slow_add(&inner, a, b);
                    let m = slow_mul(&inner, a, b);
                    mul[(a * q + b) as usize] = m;
                    if m == 1 {
                        inv[a as usize] = b;
                    }
                }
            }
            inner.tables = Some(Tables { add, mul, inv, neg });
        }
        Field(Arc::new(inner))
    }

    pub fn p(&self) -> u64 {
        self.0.p as u64
    }

    pub fn k(&self) -> usize {
        self.0.k
    }

    /// Number of elements.
    pub fn order(&self) -> u64 {
        self.0.q as u64
    }

    /// Monic modulus as little-endian residues (`None` for prime fields).
    pub fn modulus(&self) -> Option<Vec<u64>> {
        if self.0.k == 1 {
            None
        } else {
            Some(self.0.modulus.iter().map(|&c| c as u64).collect())
        }
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }

    /// Validates a packed code.
    pub fn elem(&self, code: u64) -> Result<Elem> {
        if code < self.0.q as u64 {
            Ok(Elem(code as u32))
        } else {
            Err(Error::ElementOutOfRange(code))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> Elem {
        Elem(n.rem_euclid(self.0.p as i64) as u32)
    }

    /// The generator of `F_{p^k}` over `F_p` (the class of `X`).
    pub fn generator(&self) -> Elem {
        if self.0.k == 1 {
            // X mod (X - c) is meaningless; return 1 for uniformity
            Elem::ONE
        } else {
            Elem(self.0.p)
        }
    }

    pub fn coords(&self, a: Elem) -> Vec<u32> {
        let p = self.0.p;
        let mut c = a.0;
        (0..self.0.k)
            .map(|_| {
                let d = c % p;
                c /= p;
                d
            })
            .collect()
    }

    pub fn from_coords(&self, coords: &[u64]) -> Result<Elem> {
        if coords.len() != self.0.k {
            return Err(Error::FieldMismatch);
        }
        let mut code = 0u64;
        for &c in coords.iter().rev() {
            if c >= self.0.p as u64 {
                return Err(Error::ElementOutOfRange(c));
            }
            code = code * self.0.p as u64 + c;
        }
        Ok(Elem(code as u32))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let i = &*self.0;
        if i.k == 1 {
            let s = a.0 + b.0;
            Elem(if s >= i.p { s - i.p } else { s })
        } else if let Some(t) = &i.tables {
            Elem(t.add[(a.0 * i.q + b.0) as usize])
        } else {
            Elem(slow_add(i, a.0, b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let i = &*self.0;
        if i.k == 1 {
            Elem(if a.0 == 0 { 0 } else { i.p - a.0 })
        } else if let Some(t) = &i.tables {
            Elem(t.neg[a.0 as usize])
        } else {
            Elem(slow_neg(i, a.0))
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        let i = &*self.0;
        if i.k == 1 {
            Elem(if a.0 >= b.0 { a.0 - b.0 } else { a.0 + i.p - b.0 })
        } else {
            self.add(a, self.neg(b))
        }
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let i = &*self.0;
        if i.k == 1 {
            Elem(((a.0 as u64 * b.0 as u64) % i.p as u64) as u32)
        } else if let Some(t) = &i.tables {
            Elem(t.mul[(a.0 * i.q + b.0) as usize])
        } else {
            Elem(slow_mul(i, a.0, b.0))
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.inv_nonzero(a))
    }

    /// Inverse of an element already known to be nonzero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: Elem) -> Elem {
        debug_assert!(!a.is_zero());
        let i = &*self.0;
        if let Some(t) = &i.tables {
            return Elem(t.inv[a.0 as usize]);
        }
        if i.k == 1 {
            // extended Euclid on residues
            let (mut r0, mut r1) = (i.p as i64, a.0 as i64);
            let (mut t0, mut t1) = (0i64, 1i64);
            while r1 != 0 {
                let qt = r0 / r1;
                (r0, r1) = (r1, r0 - qt * r1);
                (t0, t1) = (t1, t0 - qt * t1);
            }
            Elem(t0.rem_euclid(i.p as i64) as u32)
        } else {
            self.pow(a, i.q as u64 - 2)
        }
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Checked arithmetic on raw codes; codes outside the field are reported
    /// as belonging to another field.
    pub fn arith(&self, a: Elem, b: Elem, op: FieldOp) -> Result<Elem> {
        for x in [a, b] {
            if x.0 >= self.0.q {
                return Err(Error::FieldMismatch);
            }
        }
        Ok(match op {
            FieldOp::Add => self.add(a, b),
            FieldOp::Sub => self.sub(a, b),
            FieldOp::Mul => self.mul(a, b),
            FieldOp::Div => self.div(a, b)?,
            FieldOp::Inv => self.inv(a)?,
            FieldOp::Neg => self.neg(a),
            FieldOp::Pow(e) => self.pow(a, e),
        })
    }

    /// Membership in `F_p`, tested as `x^p = x`.
    pub fn is_in_prime_subfield(&self, x: Elem) -> bool {
        self.pow(x, self.p()) == x
    }

    /// The residue `r` in `[0, p-1]` with `x = r.1`, if `x` lies in `F_p`.
    pub fn prime_residue(&self, x: Elem) -> Option<u64> {
        if self.is_in_prime_subfield(x) {
            Some(x.0 as u64)
        } else {
            None
        }
    }

    /// All elements in code order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }
}

fn slow_add(i: &Inner, mut a: u32, mut b: u32) -> u32 {
    let mut out = 0u32;
    let mut scale = 1u32;
    for _ in 0..i.k {
        let d = (a % i.p + b % i.p) % i.p;
        out += d * scale;
        a /= i.p;
        b /= i.p;
        scale = scale.wrapping_mul(i.p);
    }
    out
}

fn slow_neg(i: &Inner, mut a: u32) -> u32 {
    let mut out = 0u32;
    let mut scale = 1u32;
    for _ in 0..i.k {
        let d = (i.p - a % i.p) % i.p;
        out += d * scale;
        a /= i.p;
        scale = scale.wrapping_mul(i.p);
    }
    out
}

fn slow_mul(i: &Inner, a: u32, b: u32) -> u32 {
    let p = i.p as u64;
    let k = i.k;
    let digits = |mut x: u32| -> Vec<u64> {
        (0..k)
            .map(|_| {
                let d = (x % i.p) as u64;
                x /= i.p;
                d
            })
            .collect()
    };
    let (da, db) = (digits(a), digits(b));
    let mut prod = vec![0u64; 2 * k - 1];
    for (x, &ca) in da.iter().enumerate() {
        if ca == 0 {
            continue;
        }
        for (y, &cb) in db.iter().enumerate() {
            prod[x + y] = (prod[x + y] + ca * cb) % p;
        }
    }
    // reduce modulo the monic modulus
    for deg in (k..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        prod[deg] = 0;
        for j in 0..k {
            let m = i.modulus[j] as u64;
            prod[deg - k + j] = (prod[deg - k + j] + (p - c) * m) % p;
        }
    }
    let mut out = 0u64;
    for j in (0..k).rev() {
        out = out * p + prod[j];
    }
    out as u32
}

fn default_modulus(base: &Field, k: usize) -> Vec<u32> {
    let p = base.0.p as u64;
    let count = p.pow(k as u32);
    // lexicographic on (c_0, c_1, ..): c_0 is the most significant digit of the scan
    for idx in 0..count {
        let mut coeffs = vec![0u32; k + 1];
        let mut rest = idx;
        for j in (0..k).rev() {
            coeffs[j] = (rest % p) as u32;
            rest /= p;
        }
        coeffs[k] = 1;
        if coeffs[0] == 0 {
            continue;
        }
        let poly = Poly::new(base, coeffs.iter().map(|&c| Elem(c)).collect());
        if poly.is_irreducible() {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_examples() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(f3.mul(Elem(2), Elem(2)), Elem(1));
        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.inv(Elem(2)).unwrap(), Elem(3));
        assert_eq!(f5.inv(Elem(0)), Err(Error::DivisionByZero));
    }

    #[test]
    fn f4_generator_squares_to_a_plus_one() {
        let f4 = Field::new(2, 2, Some(&[1, 1, 1])).unwrap();
        let a = f4.generator();
        assert_eq!(f4.mul(a, a), f4.add(a, Elem::ONE));
        assert!(f4.is_in_prime_subfield(Elem::ONE));
        assert!(!f4.is_in_prime_subfield(a));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(2, 2, Some(&[1, 0, 1])).err(), Some(Error::ReducibleModulus(2)));
        assert_eq!(Field::prime(4).err(), Some(Error::NotPrime(4)));
        assert!(matches!(Field::new(2, 3, Some(&[1, 1, 1])), Err(Error::DegreeMismatch { .. })));
    }

    #[test]
    fn default_moduli() {
        assert_eq!(Field::new(2, 2, None).unwrap().modulus(), Some(vec![1, 1, 1]));
        assert_eq!(Field::new(3, 2, None).unwrap().modulus(), Some(vec![1, 0, 1]));
        let f9 = Field::new(3, 2, None).unwrap();
        assert!(f9.is_in_prime_subfield(Elem(2)));
        assert!(!f9.is_in_prime_subfield(Elem(3)));
    }

    #[test]
    fn tables_agree_with_slow_path() {
        let f8 = Field::new(2, 3, None).unwrap();
        let inner = &*f8.0;
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(f8.mul(Elem(a), Elem(b)).0, slow_mul(inner, a, b));
            }
        }
    }

    #[test]
    fn frobenius_fixes_everything() {
        for (p, k) in [(2, 1), (2, 2), (3, 2), (5, 1), (2, 3), (3, 3), (17, 2)] {
            let f = Field::new(p, k, None).unwrap();
            let q = f.order();
            for x in f.elements().step_by(7.max(1)) {
                assert_eq!(f.pow(x, q), x);
            }
        }
    }
}
