//! Factorization over finite fields: squarefree decomposition, distinct-degree
//! splitting and Cantor–Zassenhaus equal-degree splitting.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::poly::Poly;

/// Factors `f` into monic irreducibles with multiplicities, sorted by the
/// [`Poly`] ordering. The leading unit is dropped.
pub fn factor(f: &Poly, seed: u64) -> Result<Vec<(Poly, usize)>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: BTreeMap<Poly, usize> = BTreeMap::new();
    for (part, mult) in squarefree(&f.monic()) {
        for (d, block) in distinct_degree(&part) {
            for g in equal_degree(&block, d, &mut rng) {
                *out.entry(g).or_insert(0) += mult;
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Squarefree decomposition of a monic polynomial: pairs `(g, i)` with `g`
/// squarefree, pairwise coprime, and `f = prod g^i`.
pub fn squarefree(f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let fd = f.derivative();
    if fd.is_zero() {
        for (g, i) in squarefree(&pth_root(f)) {
            out.push((g, i * f.field().p() as usize));
        }
        return out;
    }
    let mut c = f.gcd(&fd).expect("same field");
    let mut w = f.div_exact(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c).expect("same field");
        let z = w.div_exact(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w);
    }
    if !c.is_one() {
        for (g, i) in squarefree(&pth_root(&c)) {
            out.push((g, i * f.field().p() as usize));
        }
    }
    out
}

/// `g` with `g^p = f`, for `f` whose derivative vanishes.
fn pth_root(f: &Poly) -> Poly {
    let field = f.field();
    let p = field.p() as usize;
    // inverse Frobenius on F_{p^k} is x -> x^(p^(k-1))
    let e = field.p().pow(field.k() as u32 - 1);
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&c| field.pow(c, e))
        .collect();
    Poly::new(field, coeffs)
}

/// Splits a squarefree monic polynomial into products of irreducibles of
/// equal degree: pairs `(d, product of all degree-d factors)`.
pub fn distinct_degree(f: &Poly) -> Vec<(usize, Poly)> {
    let field = f.field();
    let x = Poly::x_pow(field, 1);
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = x.clone();
    let mut d = 1;
    while rest.deg() >= 2 * d {
        h = h.frobenius_mod(1, &rest);
        let g = rest.gcd(&h.sub(&x)).expect("same field");
        if !g.is_one() {
            rest = rest.div_exact(&g);
            h = h.rem(&rest);
            out.push((d, g));
        }
        d += 1;
    }
    if rest.deg() > 0 {
        out.push((rest.deg(), rest));
    }
    out
}

/// Cantor–Zassenhaus splitting of a product of distinct irreducibles of
/// degree `d`.
pub fn equal_degree(f: &Poly, d: usize, rng: &mut impl Rng) -> Vec<Poly> {
    let n = f.deg();
    if n == d {
        return vec![f.clone()];
    }
    let field = f.field();
    let q = field.order();
    loop {
        let a = Poly::new(
            field,
            (0..n).map(|_| Elem(rng.gen_range(0..q) as u32)).collect(),
        );
        if a.deg() == 0 {
            continue;
        }
        let b = if q % 2 == 1 {
            // a^((q^d - 1)/2) = (a^(1 + q + .. + q^(d-1)))^((q-1)/2)
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..d {
                t = t.frobenius_mod(1, f);
                acc = acc.mulmod(&t, f);
            }
            acc.powmod(((q - 1) / 2) as u128, f).sub(&Poly::one(field))
        } else {
            // absolute trace map a + a^2 + a^4 + .. over F_2
            let steps = field.k() * d;
            let mut t = a.rem(f);
            let mut acc = t.clone();
            for _ in 1..steps {
                t = t.mulmod(&t, f);
                acc = acc.add(&t);
            }
            acc
        };
        let g = f.gcd(&b).expect("same field");
        if g.deg() > 0 && g.deg() < n {
            let h = f.div_exact(&g);
            let mut out = equal_degree(&g, d, rng);
            out.extend(equal_degree(&h, d, rng));
            return out;
        }
    }
}
