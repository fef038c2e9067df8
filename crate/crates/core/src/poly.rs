//! Dense univariate polynomials over a [`Field`].

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};

/// Little-endian coefficients without trailing zeros; the zero polynomial
/// has no coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Elem>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let codes: Vec<u32> = self.coeffs.iter().map(|c| c.code()).collect();
        write!(f, "Poly{:?}", codes)
    }
}

/// Ordered by degree, then by coefficient codes starting from the constant term.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::hash::Hash for Poly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Elem>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { field: field.clone(), coeffs }
    }

    /// From integer residues in the prime subfield.
    pub fn from_ints(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_int(c)).collect())
    }

    pub fn zero(field: &Field) -> Poly {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(field, Elem::ONE)
    }

    pub fn constant(field: &Field, c: Elem) -> Poly {
        Poly::new(field, vec![c])
    }

    /// The monomial `X^n`.
    pub fn x_pow(field: &Field, n: usize) -> Poly {
        let mut c = vec![Elem::ZERO; n + 1];
        c[n] = Elem::ONE;
        Poly { field: field.clone(), coeffs: c }
    }

    /// `X - c`.
    pub fn linear(field: &Field, root: Elem) -> Poly {
        Poly::new(field, vec![field.neg(root), Elem::ONE])
    }

    /// `(X - root)^e`.
    pub fn linear_pow(field: &Field, root: Elem, e: usize) -> Poly {
        Poly::linear(field, root).pow(e)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == Elem::ONE
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree, treating the zero polynomial as degree 0.
    pub fn deg(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(Elem::ZERO)
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(Elem::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Elem::ONE
    }

    /// For monic `P = X^n - sum a_k X^k`, the coefficient `a_{n-1}`,
    /// i.e. the trace of the companion matrix.
    pub fn trace(&self) -> Elem {
        match self.degree() {
            Some(n) if n >= 1 => self.field.neg(self.coeffs[n - 1]),
            _ => Elem::ZERO,
        }
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            Err(Error::FieldMismatch)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.sub(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, c)
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn scale(&self, s: Elem) -> Poly {
        let f = &self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.mul(c, s)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut e: usize) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiply by `X^n`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![Elem::ZERO; n];
        c.extend_from_slice(&self.coeffs);
        Poly { field: self.field.clone(), coeffs: c }
    }

    /// Euclidean division: `(quotient, remainder)`.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check(divisor)?;
        let dd = divisor.degree().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        if self.coeffs.len() <= dd {
            return Ok((Poly::zero(f), self.clone()));
        }
        let inv_lead = f.inv_nonzero(divisor.leading());
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Elem::ZERO; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = rem[i];
            if c.is_zero() {
                continue;
            }
            let t = f.mul(c, inv_lead);
            quot[i - dd] = t;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(t, d));
            }
        }
        rem.truncate(dd);
        Ok((Poly::new(f, quot), Poly::new(f, rem)))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.divrem(divisor).expect("nonzero divisor").1
    }

    /// Exact quotient; the caller guarantees divisibility.
    pub fn div_exact(&self, divisor: &Poly) -> Poly {
        let (q, r) = self.divrem(divisor).expect("nonzero divisor");
        debug_assert!(r.is_zero(), "division was not exact");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        match other.divrem(self) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv_nonzero(self.leading()))
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn lcm(&self, other: &Poly) -> Poly {
        let g = self.gcd(other).expect("same field");
        self.div_exact(&g).mul(other).monic()
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect();
        Poly::new(f, c)
    }

    pub fn eval(&self, x: Elem) -> Elem {
        let f = &self.field;
        self.coeffs.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn mulmod(&self, other: &Poly, m: &Poly) -> Poly {
        self.mul(other).rem(m)
    }

    /// `self^e mod m` with a 128-bit exponent.
    pub fn powmod(&self, mut e: u128, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(&self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(&base, m);
            }
            e >>= 1;
            if e > 0 {
                base = base.mulmod(&base, m);
            }
        }
        acc
    }

    /// `self^(q^times) mod m`, iterating the Frobenius `x -> x^q`.
    pub fn frobenius_mod(&self, times: usize, m: &Poly) -> Poly {
        let q = self.field.order() as u128;
        let mut acc = self.rem(m);
        for _ in 0..times {
            acc = acc.powmod(q, m);
        }
        acc
    }

    /// `self(g)`.
    pub fn compose(&self, g: &Poly) -> Poly {
        let f = &self.field;
        let mut acc = Poly::zero(f);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(f, c));
        }
        acc
    }

    /// Monic normalisation of `f(aX + b)`; its roots are `(r - b)/a` for the
    /// roots `r` of `f`.
    pub fn substitute_linear(&self, a: Elem, b: Elem) -> Result<Poly> {
        if a.is_zero() {
            return Err(Error::ZeroScale);
        }
        let g = Poly::new(&self.field, vec![b, a]);
        Ok(self.compose(&g).monic())
    }

    /// Distinct-degree irreducibility test.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic();
        let x = Poly::x_pow(&self.field, 1);
        let mut h = x.clone();
        for _ in 1..=n / 2 {
            h = h.frobenius_mod(1, &f);
            let g = f.gcd(&h.sub(&x)).expect("same field");
            if !g.is_one() {
                return false;
            }
        }
        true
    }

    /// Applies `phi` to every coefficient.
    pub fn map_coeffs(&self, phi: impl Fn(Elem) -> Elem) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|&c| phi(c)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn divrem_example() {
        let f2 = f(2);
        let a = Poly::from_ints(&f2, &[1, 0, 1]);
        let b = Poly::from_ints(&f2, &[1, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q, Poly::from_ints(&f2, &[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.divrem(&Poly::zero(&f2)).err(), Some(Error::DivisionByZero));
    }

    #[test]
    fn gcd_example() {
        let f3 = f(3);
        let a = Poly::from_ints(&f3, &[-1, 0, 1]);
        let b = Poly::from_ints(&f3, &[-1, 1]);
        assert_eq!(a.gcd(&b).unwrap(), Poly::from_ints(&f3, &[-1, 1]));
    }

    #[test]
    fn mul_example() {
        let f5 = f(5);
        let a = Poly::from_ints(&f5, &[2, 1]);
        let b = Poly::from_ints(&f5, &[3, 1]);
        assert_eq!(a.mul(&b), Poly::from_ints(&f5, &[1, 0, 1]));
    }

    #[test]
    fn mismatched_fields() {
        let a = Poly::from_ints(&f(3), &[1, 1]);
        let b = Poly::from_ints(&f(5), &[1, 1]);
        assert_eq!(a.gcd(&b).err(), Some(Error::FieldMismatch));
    }

    #[test]
    fn substitute_linear_examples() {
        let f3 = f(3);
        let x_minus_1 = Poly::from_ints(&f3, &[-1, 1]);
        let r = x_minus_1.substitute_linear(f3.from_int(-1), Elem::ZERO).unwrap();
        assert_eq!(r, Poly::from_ints(&f3, &[1, 1]));
        let x = Poly::x_pow(&f3, 1);
        assert_eq!(x.substitute_linear(Elem::ONE, Elem::ZERO).unwrap(), x);
        assert_eq!(x.substitute_linear(Elem::ZERO, Elem::ONE).err(), Some(Error::ZeroScale));
    }

    #[test]
    fn substitute_linear_root_sets_over_f25() {
        // X^2 + 1 over F_5 under X -> 2 - X: compare root sets inside F_25.
        let f5 = f(5);
        let p = Poly::from_ints(&f5, &[1, 0, 1]);
        let s = p.substitute_linear(f5.from_int(-1), f5.from_int(2)).unwrap();
        let f25 = Field::new(5, 2, None).unwrap();
        let lift = |q: &Poly| Poly::new(&f25, q.coeffs().to_vec());
        let roots = |q: &Poly| -> Vec<Elem> { f25.elements().filter(|&x| q.eval(x).is_zero()).collect() };
        let (rp, rs) = (roots(&lift(&p)), roots(&lift(&s)));
        assert_eq!(rp.len(), 2);
        let mut expected: Vec<Elem> = rp.iter().map(|&r| f25.sub(f25.from_int(2), r)).collect();
        expected.sort();
        assert_eq!(expected, rs);
        // frozen by the brute-force root check above: X^2 - 4X + 5 = X^2 + X
        assert_eq!(s, Poly::from_ints(&f5, &[0, 1, 1]));
    }

    #[test]
    fn irreducibility() {
        let f2 = f(2);
        assert!(Poly::from_ints(&f2, &[1, 1, 1]).is_irreducible());
        assert!(!Poly::from_ints(&f2, &[1, 0, 1]).is_irreducible());
        assert!(Poly::from_ints(&f2, &[1, 1, 0, 1]).is_irreducible());
        let f3 = f(3);
        assert!(Poly::from_ints(&f3, &[1, 0, 1]).is_irreducible());
    }
}
