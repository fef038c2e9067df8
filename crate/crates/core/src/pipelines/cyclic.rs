//! Choice-of-polynomial solver, cyclic decompositions and the
//! five-idempotent pipeline.

use crate::canon::{companion_diag, frobenius_form, SimTransform};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Mat;
use crate::poly::Poly;
use crate::two_idem::witness_diff;

use super::cert::{DecompCert, Sign};

/// `tr A` lies in the prime subfield.
pub fn is_sum_of_idempotents(a: &Mat) -> Result<bool> {
    Ok(a.field().is_in_prime_subfield(a.trace()?))
}

pub(crate) fn require_prime_trace(a: &Mat) -> Result<()> {
    if is_sum_of_idempotents(a)? {
        Ok(())
    } else {
        Err(Error::TraceNotInPrimeField)
    }
}

/// Characteristic polynomials of the trailing principal submatrices of a
/// unit-subdiagonal Hessenberg matrix: `out[j]` for rows `j..n`.
fn trailing_ladder(m: &Mat) -> Vec<Poly> {
    let n = m.rows();
    let f = m.field();
    let x = Poly::x_pow(f, 1);
    let mut out = vec![Poly::one(f); n + 1];
    for j in (0..n).rev() {
        let mut t = x.sub(&Poly::constant(f, m.get(j, j))).mul(&out[j + 1]);
        for k in j + 1..n {
            let c = m.get(j, k);
            if !c.is_zero() {
                t = t.sub(&out[k + 1].scale(c));
            }
        }
        out[j] = t;
    }
    out
}

/// Fills the free entries of a unit-subdiagonal Hessenberg matrix so that
/// its characteristic polynomial becomes `p`.
///
/// Free positions are 0-based `(row, col)` strictly above the diagonal, and
/// their index intervals must pairwise intersect; under that condition the
/// characteristic polynomial is affine in the free entries, with the entry at
/// `(i, j)` contributing `-lead_i * trail_{j+1}`.
pub fn cyclicfit_solve(m: &Mat, free: &[(usize, usize)], p: &Poly) -> Result<Mat> {
    let n = m.require_square()?;
    let f = m.field();
    m.hessenberg_charpoly()?;
    let (mut max_row, mut min_col) = (0, usize::MAX);
    for &(i, j) in free {
        if j <= i || j >= n {
            return Err(Error::BadFreePosition { row: i + 1, col: j + 1 });
        }
        max_row = max_row.max(i);
        min_col = min_col.min(j);
        if max_row > min_col {
            return Err(Error::BadFreePosition { row: i + 1, col: j + 1 });
        }
    }
    if p.field() != f {
        return Err(Error::FieldMismatch);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    if p.deg() != n {
        return Err(Error::ShapeMismatch(format!("target degree {} for size {}", p.deg(), n)));
    }
    if p.trace() != m.trace()? {
        return Err(Error::TraceMismatch);
    }
    let mut base = m.clone();
    for &(i, j) in free {
        base.set(i, j, Elem::ZERO);
    }
    let (chi0, lead) = base.hessenberg_charpoly()?;
    let trail = trailing_ladder(&base);
    let rhs: Vec<Elem> = (0..n).map(|c| f.sub(p.coeff(c), chi0.coeff(c))).collect();
    let columns: Vec<Vec<Elem>> = free
        .iter()
        .map(|&(i, j)| {
            let delta = lead[i].mul(&trail[j + 1]).neg();
            (0..n).map(|c| delta.coeff(c)).collect()
        })
        .collect();
    let system = Mat::from_columns(f, n, &columns);
    let x = system.solve(&rhs).ok_or(Error::InconsistentSystem)?;
    let mut out = base;
    for (&(i, j), &v) in free.iter().zip(&x) {
        out.set(i, j, v);
    }
    if out.hessenberg_charpoly()?.0 != *p {
        return Err(Error::InconsistentSystem);
    }
    Ok(out)
}

/// `D` with `[[A, D], [H, B]]` similar to `C(P)` for good cyclic `A`, `B`.
pub fn cyclicfit_blocks(a: &Mat, b: &Mat, p: &Poly) -> Result<Mat> {
    let (n, q) = (a.require_square()?, b.require_square()?);
    let f = a.field();
    let mut m = Mat::zeros(f, n + q, n + q);
    m.set_block(0, 0, a);
    m.set_block(n, n, b);
    if n > 0 && q > 0 {
        m.set(n, n - 1, Elem::ONE);
    }
    let free: Vec<(usize, usize)> = (0..n).flat_map(|i| (n..n + q).map(move |j| (i, j))).collect();
    let filled = cyclicfit_solve(&m, &free, p)?;
    Ok(filled.submatrix(0, n, n, q))
}

/// Idempotents summing to a good cyclic matrix with trace in the prime
/// subfield: at most `3 + [(p-1)/n]` of them.
pub(crate) fn good_cyclic_parts(g: &Mat, seed: u64) -> Result<Vec<Mat>> {
    let n = g.require_square()?;
    if n < 2 {
        return Err(Error::SizeTooSmall(n));
    }
    let f = g.field();
    let one = Elem::ONE;
    let shifted_trace = f.sub(g.trace()?, f.from_int(n as i64));
    let k = f.prime_residue(shifted_trace).ok_or(Error::TraceNotInPrimeField)? as usize;
    let (a, l) = (k / n, k % n);
    let lp = l.max(1);
    let m = g.add_scalar(f.neg(f.from_int(a as i64 + 1)))?;
    let d1 = m.submatrix(0, lp, lp, n - lp);
    let mut base = m.clone();
    for i in 0..lp {
        base.set(i, i, f.sub(base.get(i, i), one));
        for j in lp..n {
            base.set(i, j, Elem::ZERO);
        }
    }
    let t = base.trace()?;
    let x = Poly::x_pow(f, 1);
    let target = if t.is_zero() {
        x.pow(n)
    } else if t == f.neg(one) {
        x.pow(n - 1).mul(&Poly::linear(f, f.neg(one)))
    } else {
        return Err(Error::Internal("split trace outside {0, -1}".into()));
    };
    let free: Vec<(usize, usize)> = (0..lp).flat_map(|i| (lp..n).map(move |j| (i, j))).collect();
    let filled = cyclicfit_solve(&base, &free, &target)?;
    let d2 = filled.submatrix(0, lp, lp, n - lp);
    let mut e = Mat::zeros(f, n, n);
    e.set_block(0, 0, &Mat::identity(f, lp));
    e.set_block(0, lp, &d1.sub(&d2)?);
    let w = witness_diff(&filled, seed)?;
    let id = Mat::identity(f, n);
    let mut parts = vec![id.clone(); a];
    parts.push(e);
    parts.push(w.q1().clone());
    parts.push(id.sub(w.q2())?);
    Ok(parts.into_iter().filter(|p| !p.is_zero()).collect())
}

fn plain(parts: Vec<Mat>) -> Vec<(Sign, Mat)> {
    parts.into_iter().map(|p| (Sign::Plus, p)).collect()
}

/// Builds a certificate for `target` from parts written in the canonical
/// basis of `t` (so that `t` maps `target` to the canonical matrix).
pub(crate) fn cert_from_canonical(
    target: &Mat,
    t: &SimTransform,
    terms: Vec<(Sign, Mat)>,
    pipeline: &str,
    seed: u64,
) -> Result<DecompCert> {
    let back = t.inverse();
    let terms = terms
        .into_iter()
        .map(|(s, m)| back.apply(&m).map(|m| (s, m)))
        .collect::<Result<Vec<_>>>()?;
    DecompCert::build(target, terms, pipeline, seed)
}

/// Sum of at most `3 + [(p-1)/n]` idempotents for a cyclic matrix.
pub fn decompose_cyclic(b: &Mat, seed: u64) -> Result<DecompCert> {
    let n = b.require_square()?;
    if n < 2 {
        return Err(Error::SizeTooSmall(n));
    }
    require_prime_trace(b)?;
    if b.is_good_cyclic()? {
        return DecompCert::build(b, plain(good_cyclic_parts(b, seed)?), "cyclic", seed);
    }
    let (inv, t) = frobenius_form(b)?;
    if !inv.is_cyclic() {
        return Err(Error::NotCyclic);
    }
    let c = Mat::companion(&inv.factors()[0])?;
    cert_from_canonical(b, &t, plain(good_cyclic_parts(&c, seed)?), "cyclic", seed)
}

/// Staircase idempotent: `F_{n_k}` on the blocks of the given parity, with
/// `-H_{n_{k+1}, n_k}` right below each of them.
pub(crate) fn staircase(field: &Field, sizes: &[usize], parity: usize) -> Mat {
    let n: usize = sizes.iter().sum();
    let mut q = Mat::zeros(field, n, n);
    let mut off = 0;
    for (k, &nk) in sizes.iter().enumerate() {
        if k % 2 == parity {
            q.set(off + nk - 1, off + nk - 1, Elem::ONE);
            if k + 1 < sizes.len() {
                q.set(off + nk, off + nk - 1, field.neg(Elem::ONE));
            }
        }
        off += nk;
    }
    q
}

/// Sum of at most `5 + [(p-1)/n]` idempotents.
pub fn decompose_sum5(a: &Mat, seed: u64) -> Result<DecompCert> {
    let n = a.require_square()?;
    if n < 2 {
        return Err(Error::SizeTooSmall(n));
    }
    require_prime_trace(a)?;
    if a.is_zero() {
        return DecompCert::build(a, Vec::new(), "sum5", seed);
    }
    let f = a.field();
    let (inv, t) = frobenius_form(a)?;
    let canon = companion_diag(f, inv.factors().iter())?;
    let mut parts = Vec::new();
    let residual = if inv.is_cyclic() {
        canon
    } else {
        let sizes: Vec<usize> = inv.factors().iter().map(Poly::deg).collect();
        let q1 = staircase(f, &sizes, 0);
        let q2 = staircase(f, &sizes, 1);
        let r = canon.sub(&q1)?.sub(&q2)?;
        parts.push(q1);
        parts.push(q2);
        r
    };
    parts.extend(good_cyclic_parts(&residual, seed)?);
    cert_from_canonical(a, &t, plain(parts), "sum5", seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn sum_of_idempotents_examples() {
        let f3 = fp(3);
        assert!(is_sum_of_idempotents(&Mat::from_ints(&f3, &[&[2, 1], &[1, 2]])).unwrap());
        let f4 = Field::new(2, 2, None).unwrap();
        let a = f4.generator();
        assert!(!is_sum_of_idempotents(&Mat::diag(&f4, &[a])).unwrap());
        assert!(is_sum_of_idempotents(&Mat::diag(&f4, &[a, f4.add(a, Elem::ONE)])).unwrap());
    }

    #[test]
    fn cyclicfit_examples() {
        let f5 = fp(5);
        let z = Mat::zeros(&f5, 1, 1);
        let d = cyclicfit_blocks(&z, &z, &Poly::from_ints(&f5, &[-1, 0, 1])).unwrap();
        assert_eq!(d, Mat::from_ints(&f5, &[&[1]]));
        let d = cyclicfit_blocks(&z, &z, &Poly::x_pow(&f5, 2)).unwrap();
        assert_eq!(d, Mat::from_ints(&f5, &[&[0]]));
        assert_eq!(
            cyclicfit_blocks(&z, &z, &Poly::from_ints(&f5, &[0, 1, 1])).err(),
            Some(Error::TraceMismatch)
        );
        let m = Mat::companion(&Poly::x_pow(&f5, 3)).unwrap();
        assert_eq!(
            cyclicfit_solve(&m, &[(1, 1)], &Poly::x_pow(&f5, 3)).err(),
            Some(Error::BadFreePosition { row: 2, col: 2 })
        );
        // disjoint intervals make the model non-affine
        let m = Mat::companion(&Poly::x_pow(&f5, 4)).unwrap();
        assert!(matches!(
            cyclicfit_solve(&m, &[(0, 1), (2, 3)], &Poly::x_pow(&f5, 4)),
            Err(Error::BadFreePosition { .. })
        ));
    }

    fn random_good_cyclic(f: &Field, n: usize, rng: &mut impl Rng) -> Mat {
        let q = f.order();
        Mat::from_fn(f, n, n, |i, j| {
            if j + 1 == i {
                Elem::ONE
            } else if j >= i {
                Elem(rng.gen_range(0..q) as u32)
            } else {
                Elem::ZERO
            }
        })
    }

    #[test]
    fn cyclicfit_random_blocks() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f5 = fp(5);
        for _ in 0..50 {
            let a = random_good_cyclic(&f5, 2, &mut rng);
            let b = random_good_cyclic(&f5, 3, &mut rng);
            let mut coeffs: Vec<i64> = (0..5).map(|_| rng.gen_range(0..5)).collect();
            let tr = f5.add(a.trace().unwrap(), b.trace().unwrap());
            coeffs[4] = -(tr.code() as i64);
            coeffs.push(1);
            let p = Poly::from_ints(&f5, &coeffs);
            let d = cyclicfit_blocks(&a, &b, &p).unwrap();
            let mut m = Mat::zeros(&f5, 5, 5);
            m.set_block(0, 0, &a);
            m.set_block(2, 2, &b);
            m.set_block(0, 2, &d);
            m.set(2, 1, Elem::ONE);
            assert_eq!(m.char_poly().unwrap(), p);
        }
    }

    #[test]
    fn cyclic_examples() {
        let f2 = fp(2);
        let c = Mat::companion(&Poly::x_pow(&f2, 2)).unwrap();
        assert!(decompose_cyclic(&c, 0).unwrap().count() <= 3);
        let f5 = fp(5);
        let c = Mat::companion(&Poly::from_ints(&f5, &[0, -1, 0, 1])).unwrap();
        let cert = decompose_cyclic(&c, 0).unwrap();
        assert!(cert.count() <= 4 && cert.verify(&c));
        let f3 = fp(3);
        let c = Mat::companion(&Poly::from_ints(&f3, &[-1, 0, 1])).unwrap();
        assert!(decompose_cyclic(&c, 0).unwrap().count() <= 4);
        assert_eq!(decompose_cyclic(&Mat::identity(&f3, 2), 0).err(), Some(Error::NotCyclic));
    }

    #[test]
    fn sum5_examples() {
        let f3 = fp(3);
        assert_eq!(decompose_sum5(&Mat::zeros(&f3, 3, 3), 0).unwrap().count(), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let a = Mat::from_fn(&f3, 4, 4, |_, _| Elem(rng.gen_range(0..3)));
            assert!(decompose_sum5(&a, 0).unwrap().count() <= 5);
        }
        let f5 = fp(5);
        for _ in 0..30 {
            let a = Mat::from_fn(&f5, 2, 2, |_, _| Elem(rng.gen_range(0..5)));
            assert!(decompose_sum5(&a, 0).unwrap().count() <= 7);
        }
        let f4 = Field::new(2, 2, None).unwrap();
        let g = f4.generator();
        assert_eq!(decompose_sum5(&Mat::diag(&f4, &[g, Elem::ZERO]), 0).err(), Some(Error::TraceNotInPrimeField));
    }

    #[test]
    fn staircases_are_idempotent() {
        let f = fp(7);
        for sizes in [vec![1, 2, 3], vec![2, 1, 2, 4], vec![3, 3], vec![1, 1, 1]] {
            for parity in 0..2 {
                assert!(staircase(&f, &sizes, parity).is_idempotent().unwrap());
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn cyclicfit_is_affine(
            seed in any::<u64>(),
            (n, q) in (1usize..4, 1usize..4),
        ) {
            let f = fp(5);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random_good_cyclic(&f, n, &mut rng);
            let b = random_good_cyclic(&f, q, &mut rng);
            let build = |d: &Mat| {
                let mut m = Mat::zeros(&f, n + q, n + q);
                m.set_block(0, 0, &a);
                m.set_block(n, n, &b);
                m.set_block(0, n, d);
                m.set(n, n - 1, Elem::ONE);
                m.char_poly().unwrap()
            };
            let d1 = Mat::from_fn(&f, n, q, |_, _| Elem(rng.gen_range(0..5)));
            let d2 = Mat::from_fn(&f, n, q, |_, _| Elem(rng.gen_range(0..5)));
            let c0 = build(&Mat::zeros(&f, n, q));
            let lhs = build(&d1.add(&d2).unwrap()).sub(&c0);
            let rhs = build(&d1).sub(&c0).add(&build(&d2).sub(&c0));
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(build(&d1).coeff(n + q - 1), c0.coeff(n + q - 1));
        }
    }
}
