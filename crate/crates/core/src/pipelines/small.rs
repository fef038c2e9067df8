//! Three idempotents over F_2 and F_3, four in characteristic 2 and 3.

use crate::canon::{frobenius_form, SimTransform};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Mat;
use crate::poly::Poly;
use crate::two_idem::{witness_diff, witness_sum};

use super::cert::{merge_block_diag, scalar_copies, DecompCert, Sign};
use super::cyclic::{cert_from_canonical, cyclicfit_solve, decompose_cyclic, good_cyclic_parts, require_prime_trace};

fn plain_cert(target: &Mat, parts: Vec<Mat>, pipeline: &str, seed: u64) -> Result<DecompCert> {
    DecompCert::build(target, parts.into_iter().map(|p| (Sign::Plus, p)).collect(), pipeline, seed)
}

/// Extends `t` by the coordinate permutation placing old index `order[i]`
/// at position `i`.
pub(crate) fn reorder(t: &SimTransform, order: &[usize]) -> Result<SimTransform> {
    let p = Mat::permutation(t.s().field(), order);
    let perm = SimTransform::new(p.transpose(), p)?;
    t.then(&perm)
}

/// Root of a monic degree-one polynomial.
fn root(p: &Poly) -> Elem {
    p.field().neg(p.coeff(0))
}

fn small_block(p: &Poly, seed: u64) -> Result<DecompCert> {
    let f = p.field();
    let m = p.deg();
    if m == 1 {
        return scalar_copies(f, 1, root(p), "small3", seed);
    }
    let c = Mat::companion(p)?;
    let shift = f.sub(p.trace(), f.from_int(m as i64));
    let p1 = Poly::linear(f, Elem::ONE).pow(m - 1).mul(&Poly::linear(f, shift));
    let c1 = Mat::companion(&p1)?;
    let (q1, q2) = witness_sum(&c1, seed)?;
    let mut e = Mat::zeros(f, m, m);
    for i in 0..m {
        e.set(i, m - 1, f.sub(c.get(i, m - 1), c1.get(i, m - 1)));
    }
    plain_cert(&c, vec![q1, q2, e], "small3", seed)
}

/// Sum of at most three idempotents over a field with at most three
/// elements.
pub fn decompose_small_field3(a: &Mat, seed: u64) -> Result<DecompCert> {
    a.require_square()?;
    if a.field().order() > 3 {
        return Err(Error::FieldTooLarge);
    }
    let (inv, t) = frobenius_form(a)?;
    let blocks = inv.factors().iter().map(|p| small_block(p, seed)).collect::<Result<Vec<_>>>()?;
    let merged = merge_block_diag(&blocks)?;
    let terms = merged.terms().map(|(s, m)| (s, m.clone())).collect();
    Ok(cert_from_canonical(a, &t, terms, "small3", seed)?.prune())
}

/// Staircase over all blocks: `F` on the diagonal, `-H` below; a trailing
/// block of size one gets `0` so that the result stays idempotent.
fn full_staircase(field: &Field, sizes: &[usize]) -> Mat {
    let n: usize = sizes.iter().sum();
    let mut q = Mat::zeros(field, n, n);
    let mut off = 0;
    for (k, &nk) in sizes.iter().enumerate() {
        let last = k + 1 == sizes.len();
        if !(last && nk == 1 && k > 0) {
            q.set(off + nk - 1, off + nk - 1, Elem::ONE);
        }
        if !last {
            q.set(off + nk, off + nk - 1, field.neg(Elem::ONE));
        }
        off += nk;
    }
    q
}

/// `alpha.I_p` as a sum of four idempotents, `p` the characteristic.
fn scalar_chunk(field: &Field, alpha: Elem, seed: u64) -> Result<DecompCert> {
    let target = Mat::scalar(field, field.p() as usize, alpha);
    if field.p() == 2 {
        let e0 = Mat::from_ints(field, &[&[1, 0], &[-1, 0]]);
        let rest = decompose_cyclic(&target.sub(&e0)?, seed)?;
        let mut parts = vec![e0];
        parts.extend(rest.parts);
        return plain_cert(&target, parts, "char23", seed);
    }
    let beta = field.sub(alpha, field.from_int(2));
    let nb = field.neg(beta);
    let w1 = witness_diff(&Mat::diag(field, &[Elem::ZERO, beta, nb]), seed)?;
    let w2 = witness_diff(&Mat::diag(field, &[beta, Elem::ZERO, nb]), seed)?;
    let id = Mat::identity(field, 3);
    let parts = vec![w1.q1().clone(), id.sub(w1.q2())?, w2.q1().clone(), id.sub(w2.q2())?];
    plain_cert(&target, parts, "char23", seed)
}

/// Block-diagonal companion matrix whose interior blocks have degree at
/// least two, as a sum of four idempotents.
fn remainder_cert(field: &Field, blocks: &[Poly], seed: u64) -> Result<DecompCert> {
    let companions = blocks.iter().map(Mat::companion).collect::<Result<Vec<_>>>()?;
    let a = Mat::block_diag(&companions)?;
    let n = a.rows();
    if n == 1 {
        return scalar_copies(field, 1, a.get(0, 0), "char23", seed);
    }
    let sizes: Vec<usize> = blocks.iter().map(Poly::deg).collect();
    let q = full_staircase(field, &sizes);
    let g = a.sub(&q)?;
    let mut parts = vec![q];
    if field.p() == 2 {
        parts.extend(good_cyclic_parts(&g, seed)?);
        return plain_cert(&a, parts, "char23", seed);
    }
    let mut base = g.add_scalar(field.neg(Elem::ONE))?;
    base.set(n - 1, n - 1, field.sub(base.get(n - 1, n - 1), Elem::ONE));
    let delta = base.trace()?;
    let target = Poly::x_pow(field, n - 1).mul(&Poly::linear(field, delta));
    let free: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, n - 1)).collect();
    let filled = cyclicfit_solve(&base, &free, &target)?;
    let e = g.add_scalar(field.neg(Elem::ONE))?.sub(&filled)?;
    let w = witness_diff(&filled, seed)?;
    parts.push(e);
    parts.push(w.q1().clone());
    parts.push(Mat::identity(field, n).sub(w.q2())?);
    plain_cert(&a, parts, "char23", seed)
}

/// Sum of at most four idempotents in characteristic 2 or 3.
pub fn decompose_char23_4(a: &Mat, seed: u64) -> Result<DecompCert> {
    let n = a.require_square()?;
    let f = a.field();
    let p = f.p() as usize;
    if p > 3 {
        return Err(Error::WrongCharacteristic(p as u64));
    }
    require_prime_trace(a)?;
    if n == 0 {
        return DecompCert::build(a, Vec::new(), "char23", seed);
    }
    if n == 1 {
        return scalar_copies(f, 1, a.get(0, 0), "char23", seed);
    }
    let (inv, t) = frobenius_form(a)?;
    let factors = inv.factors();
    let q = factors.iter().take_while(|g| g.deg() == 1).count();
    let rest = &factors[q..];
    let alpha = factors.first().filter(|g| g.deg() == 1).map(root).unwrap_or(Elem::ZERO);
    let (chunks, rq) = (q / p, q % p);

    let mut order: Vec<usize> = (0..q - rq).collect();
    let mut rem_blocks: Vec<Poly> = Vec::new();
    let lin = Poly::linear(f, alpha);
    if rq >= 1 {
        order.push(q - rq);
        rem_blocks.push(lin.clone());
    }
    order.extend(q..n);
    rem_blocks.extend(rest.iter().cloned());
    if rq == 2 {
        order.push(q - 1);
        rem_blocks.push(lin);
    }

    let mut certs = Vec::new();
    if chunks > 0 {
        let chunk = scalar_chunk(f, alpha, seed)?;
        certs.extend(std::iter::repeat(chunk).take(chunks));
    }
    if !rem_blocks.is_empty() {
        certs.push(remainder_cert(f, &rem_blocks, seed)?);
    }
    let merged = merge_block_diag(&certs)?;
    let t = reorder(&t, &order)?;
    let terms = merged.terms().map(|(s, m)| (s, m.clone())).collect();
    Ok(cert_from_canonical(a, &t, terms, "char23", seed)?.prune())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::all_matrices;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn small3_examples() {
        let f2 = Field::prime(2).unwrap();
        let c = Mat::companion(&Poly::from_ints(&f2, &[1, 0, 1])).unwrap();
        let cert = decompose_small_field3(&c, 0).unwrap();
        assert!(cert.count() <= 3 && cert.verify(&c));
        let f3 = Field::prime(3).unwrap();
        let a = Mat::scalar(&f3, 2, f3.from_int(2));
        assert!(decompose_small_field3(&a, 0).unwrap().count() <= 3);
        let f5 = Field::prime(5).unwrap();
        assert_eq!(decompose_small_field3(&Mat::identity(&f5, 2), 0).err(), Some(Error::FieldTooLarge));
    }

    #[test]
    fn small3_exhaustive_m2_f3() {
        let f3 = Field::prime(3).unwrap();
        for a in all_matrices(&f3, 2).unwrap() {
            let cert = decompose_small_field3(&a, 0).unwrap();
            assert!(cert.count() <= 3 && cert.verify(&a), "{a:?}");
        }
    }

    #[test]
    fn full_staircase_idempotent() {
        let f = Field::prime(3).unwrap();
        for sizes in [vec![1, 2, 1], vec![1, 1], vec![2, 3], vec![1, 3, 2, 1], vec![3]] {
            assert!(full_staircase(&f, &sizes).is_idempotent().unwrap());
        }
    }

    #[test]
    fn char23_scalar_chunks() {
        let f4 = Field::new(2, 2, None).unwrap();
        for alpha in f4.elements() {
            let a = Mat::scalar(&f4, 2, alpha);
            let cert = decompose_char23_4(&a, 0).unwrap();
            assert!(cert.count() <= 4 && cert.verify(&a));
        }
        let f9 = Field::new(3, 2, None).unwrap();
        for alpha in f9.elements() {
            let a = Mat::scalar(&f9, 3, alpha);
            let cert = decompose_char23_4(&a, 0).unwrap();
            assert!(cert.count() <= 4 && cert.verify(&a));
        }
        let f5 = Field::prime(5).unwrap();
        assert_eq!(decompose_char23_4(&Mat::identity(&f5, 2), 0).err(), Some(Error::WrongCharacteristic(5)));
    }

    #[test]
    fn char23_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for f in [Field::new(2, 2, None).unwrap(), Field::new(3, 2, None).unwrap(), Field::prime(3).unwrap()] {
            let mut done = 0;
            while done < 40 {
                let n = rng.gen_range(2..6);
                let q = f.order();
                let mut a = Mat::from_fn(&f, n, n, |_, _| Elem(rng.gen_range(0..q) as u32));
                if rng.gen_bool(0.3) {
                    let alpha = Elem(rng.gen_range(0..q) as u32);
                    let k = rng.gen_range(1..=n);
                    for i in 0..n {
                        for j in 0..n {
                            let v = if i < k && j < k { if i == j { alpha } else { Elem::ZERO } } else { a.get(i, j) };
                            a.set(i, j, v);
                        }
                    }
                }
                if !f.is_in_prime_subfield(a.trace().unwrap()) {
                    continue;
                }
                let cert = decompose_char23_4(&a, 0).unwrap();
                assert!(cert.count() <= 4 && cert.verify(&a), "{a:?}");
                done += 1;
            }
        }
    }
}
