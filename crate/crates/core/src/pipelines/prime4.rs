//! Four idempotents over prime fields in large dimension.

use std::collections::BTreeMap;

use crate::canon::{companion_diag, frobenius_form, SimTransform};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Mat;
use crate::poly::Poly;
use crate::two_idem::witness_diff;

use super::cert::{merge_block_diag, DecompCert, Sign};
use super::cyclic::{cert_from_canonical, cyclicfit_solve};
use super::small::reorder;

const PATTERN: [Sign; 4] = [Sign::Plus, Sign::Minus, Sign::Plus, Sign::Minus];

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn check_generators(a: &[u64]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::EmptyList);
    }
    if a.iter().fold(0, |g, &x| gcd(g, x)) != 1 {
        return Err(Error::NotCoprime);
    }
    Ok(())
}

/// Least `N` such that every integer `n >= N` is a nonnegative
/// combination of the generators.
pub fn semigroup_frobenius(a: &[u64]) -> Result<u64> {
    check_generators(a)?;
    let lo = a.iter().copied().filter(|&x| x > 0).min().unwrap_or(1);
    let hi = a.iter().copied().max().unwrap_or(1);
    let bound = (lo * hi + hi) as usize;
    let mut reach = vec![false; bound + 1];
    reach[0] = true;
    for n in 1..=bound {
        reach[n] = a.iter().any(|&x| x > 0 && x as usize <= n && reach[n - x as usize]);
    }
    Ok(reach.iter().rposition(|&r| !r).map_or(0, |g| g as u64 + 1))
}

/// Coefficients `b` with `sum b_i a_i = n`, using as few summands as
/// possible (ties go to earlier generators).
pub fn semigroup_represent(a: &[u64], n: u64) -> Result<Vec<u64>> {
    check_generators(a)?;
    let n = n as usize;
    let mut best: Vec<Option<(usize, usize)>> = vec![None; n + 1];
    best[0] = Some((0, usize::MAX));
    for v in 1..=n {
        for (i, &x) in a.iter().enumerate() {
            let x = x as usize;
            if x == 0 || x > v {
                continue;
            }
            if let Some((c, _)) = best[v - x] {
                if best[v].map_or(true, |(b, _)| c + 1 < b) {
                    best[v] = Some((c + 1, i));
                }
            }
        }
    }
    if best[n].is_none() {
        return Err(Error::NoRepresentation(n as u64));
    }
    let mut out = vec![0; a.len()];
    let mut v = n;
    while v > 0 {
        let (_, i) = best[v].expect("reachable");
        out[i] += 1;
        v -= a[i] as usize;
    }
    Ok(out)
}

fn require_prime(field: &Field) -> Result<()> {
    if field.is_prime_field() {
        Ok(())
    } else {
        Err(Error::NotPrimeField)
    }
}

fn is_trivial_scalar(field: &Field, alpha: Elem) -> bool {
    alpha.is_zero() || alpha == Elem::ONE || alpha == field.neg(Elem::ONE)
}

/// Classes of the relation generated by `k ~ -k` (for `k` not `+-1`) and
/// `k ~ 2 alpha - k` (for `k` not `alpha +- 1`), largest first.
pub fn scalar_classes(field: &Field, alpha: Elem) -> Vec<Vec<Elem>> {
    let p = field.p() as usize;
    let mut parent: Vec<usize> = (0..p).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    let one = Elem::ONE;
    let two_alpha = field.add(alpha, alpha);
    for k in field.elements() {
        let mut links = Vec::new();
        if k != one && k != field.neg(one) {
            links.push(field.neg(k));
        }
        if k != field.add(alpha, one) && k != field.sub(alpha, one) {
            links.push(field.sub(two_alpha, k));
        }
        for l in links {
            let (x, y) = (find(&mut parent, k.code() as usize), find(&mut parent, l.code() as usize));
            parent[x.max(y)] = x.min(y);
        }
    }
    let mut classes: BTreeMap<usize, Vec<Elem>> = BTreeMap::new();
    for k in 0..p {
        let r = find(&mut parent, k);
        classes.entry(r).or_default().push(Elem(k as u32));
    }
    let mut out: Vec<Vec<Elem>> = classes.into_values().collect();
    out.sort_by(|x, y| y.len().cmp(&x.len()).then(x[0].cmp(&y[0])));
    out
}

/// Least `n` from which `scalar_4comp(alpha, n)` always succeeds.
pub fn scalar_threshold(field: &Field, alpha: Elem) -> Result<usize> {
    require_prime(field)?;
    if is_trivial_scalar(field, alpha) {
        return Ok(0);
    }
    let sizes: Vec<u64> = scalar_classes(field, alpha).iter().map(|c| c.len() as u64).collect();
    Ok(semigroup_frobenius(&sizes)? as usize)
}

fn zero_cert(field: &Field, n: usize, pipeline: &str, seed: u64) -> Result<DecompCert> {
    let z = Mat::zeros(field, n, n);
    DecompCert::build(&z, PATTERN.iter().map(|&s| (s, z.clone())).collect(), pipeline, seed)
}

/// Idempotents with difference `diag(entries)`, pairing each entry
/// outside `{0, 1, -1}` with an entry equal to its opposite.
fn diagonal_diff(field: &Field, entries: &[Elem], seed: u64) -> Result<(Mat, Mat)> {
    let n = entries.len();
    let (mut q1, mut q2) = (Mat::zeros(field, n, n), Mat::zeros(field, n, n));
    let one = Elem::ONE;
    let mut pending: BTreeMap<Elem, Vec<usize>> = BTreeMap::new();
    for (i, &x) in entries.iter().enumerate() {
        if x == one {
            q1.set(i, i, one);
        } else if x == field.neg(one) {
            q2.set(i, i, one);
        } else if !x.is_zero() {
            pending.entry(x).or_default().push(i);
        }
    }
    let mut cache: BTreeMap<Elem, (Mat, Mat)> = BTreeMap::new();
    for (&x, idx) in &pending {
        let y = field.neg(x);
        if x > y {
            continue;
        }
        let partners = pending.get(&y).map_or(&[][..], Vec::as_slice);
        if partners.len() != idx.len() {
            return Err(Error::UnsupportedStructure(format!("unpaired eigenvalue {}", x.code())));
        }
        if !cache.contains_key(&x) {
            let w = witness_diff(&Mat::diag(field, &[x, y]), seed)?;
            cache.insert(x, (w.q1().clone(), w.q2().clone()));
        }
        let (b1, b2) = &cache[&x];
        for (&i, &j) in idx.iter().zip(partners) {
            q1.scatter(&[i, j], b1);
            q2.scatter(&[i, j], b2);
        }
    }
    Ok((q1, q2))
}

/// `alpha.I_n` as `Q1 - Q2 + Q3 - Q4` over a prime field.
pub fn scalar_4comp(field: &Field, alpha: Elem, n: usize, seed: u64) -> Result<DecompCert> {
    require_prime(field)?;
    let target = Mat::scalar(field, n, alpha);
    if is_trivial_scalar(field, alpha) {
        let (z, id) = (Mat::zeros(field, n, n), Mat::identity(field, n));
        let mut parts = vec![z.clone(), z.clone(), z.clone(), z];
        if alpha == Elem::ONE {
            parts[0] = id;
        } else if !alpha.is_zero() {
            parts[1] = id;
        }
        return DecompCert::build(&target, PATTERN.into_iter().zip(parts).collect(), "scalar4", seed);
    }
    let classes = scalar_classes(field, alpha);
    let sizes: Vec<u64> = classes.iter().map(|c| c.len() as u64).collect();
    let p = field.p() as usize;
    let counts = (0..=n / p)
        .rev()
        .find_map(|rounds| {
            semigroup_represent(&sizes, (n - rounds * p) as u64)
                .ok()
                .map(|b| b.into_iter().map(|x| x as usize + rounds).collect::<Vec<_>>())
        })
        .ok_or_else(|| Error::BelowThreshold {
            n,
            threshold: scalar_threshold(field, alpha).unwrap_or(0),
        })?;
    let entries: Vec<Elem> = classes
        .iter()
        .zip(&counts)
        .flat_map(|(class, &b)| class.iter().flat_map(move |&k| std::iter::repeat(k).take(b)))
        .collect();
    let (p1, p2) = diagonal_diff(field, &entries, seed)?;
    let shifted: Vec<Elem> = entries.iter().map(|&x| field.sub(x, alpha)).collect();
    let (p3, p4) = diagonal_diff(field, &shifted, seed)?;
    let parts = vec![p1, p2, p4, p3];
    DecompCert::build(&target, PATTERN.into_iter().zip(parts).collect(), "scalar4", seed)
}

/// Two idempotents with `A - Q - Q'` similar to `C(P)`, where `A` is the
/// block-diagonal matrix of the given good cyclic blocks.
fn tracefit_blocks(blocks: &[Mat], r: i64, p: &Poly) -> Result<(Mat, Mat)> {
    let last = blocks.last().ok_or(Error::EmptyBlockList)?;
    let f = last.field().clone();
    let sizes: Vec<usize> = blocks.iter().map(Mat::rows).collect();
    if *sizes.last().unwrap() < 2 {
        return Err(Error::LastBlockTooSmall);
    }
    let s = sizes.len();
    let n: usize = sizes.iter().sum();
    let (lo, hi) = (s as i64 + 1, n as i64 + 1);
    if r < lo || r > hi {
        return Err(Error::RangeViolation { r, lo, hi });
    }
    if p.deg() != n {
        return Err(Error::ShapeMismatch(format!("target degree {} for size {}", p.deg(), n)));
    }
    let a = Mat::block_diag(blocks)?;
    if p.trace() != f.sub(a.trace()?, f.from_int(r)) {
        return Err(Error::TraceMismatch);
    }
    let mut left = (r - lo) as usize;
    let mut halves = [Mat::zeros(&f, n, n), Mat::zeros(&f, n, n)];
    let minus_one = f.neg(Elem::ONE);
    let mut owner = vec![0; n];
    let mut off = 0;
    for (k, &nk) in sizes.iter().enumerate() {
        let q = &mut halves[k % 2];
        let ones = left.min(nk - 1);
        left -= ones;
        for i in 0..ones {
            q.set(off + i, off + i, Elem::ONE);
        }
        if k + 1 < s {
            q.set(off + nk - 1, off + nk - 1, Elem::ONE);
            q.set(off + nk, off + nk - 1, minus_one);
        }
        owner[off..off + nk].fill(k % 2);
        off += nk;
    }
    for q in &mut halves {
        q.set(n - 1, n - 1, Elem::ONE);
    }
    let base = a.sub(&halves[0])?.sub(&halves[1])?;
    let free: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, n - 1)).collect();
    let filled = cyclicfit_solve(&base, &free, p)?;
    for i in 0..n - 1 {
        let c0 = f.sub(base.get(i, n - 1), filled.get(i, n - 1));
        halves[1 - owner[i]].set(i, n - 1, c0);
    }
    let [q, q2] = halves;
    if !q.is_idempotent()? || !q2.is_idempotent()? || a.sub(&q)?.sub(&q2)? != filled {
        return Err(Error::Internal("trace fit produced invalid idempotents".into()));
    }
    Ok((q, q2))
}

fn companions(blocks: &[Poly]) -> Result<Vec<Mat>> {
    blocks.iter().map(Mat::companion).collect()
}

/// Idempotents `Q`, `Q'` with `D(C(P_1), ..., C(P_s)) - Q - Q'` similar to
/// `C(P)`, for `r` in `[s+1, N+1]` and `tr P = tr A - r`.
pub fn tracefit_sum(blocks: &[Poly], r: i64, p: &Poly) -> Result<(Mat, Mat)> {
    tracefit_blocks(&companions(blocks)?, r, p)
}

/// Idempotents `Q`, `Q'` with `D(C(P_1), ..., C(P_s)) - (Q - Q')` similar
/// to `C(P)`, for `r` in `[s+1-N, 1]` and `tr P = tr A - r`.
pub fn tracefit_diff(blocks: &[Poly], r: i64, p: &Poly) -> Result<(Mat, Mat)> {
    let mats = companions(blocks)?;
    let s = mats.len() as i64;
    let n: usize = mats.iter().map(Mat::rows).sum();
    let (lo, hi) = (s + 1 - n as i64, 1);
    if r < lo || r > hi {
        return Err(Error::RangeViolation { r, lo, hi });
    }
    let shifted = mats.iter().map(|m| m.add_scalar(Elem::ONE)).collect::<Result<Vec<_>>>()?;
    let (q, q2) = tracefit_blocks(&shifted, r + n as i64, p)?;
    let f = q.field().clone();
    Ok((q, Mat::identity(&f, n).sub(&q2)?))
}

/// Degrees of the ladder `(X+1)^L, (X-1)^(L-1), (X+1)^(L-1), ..., X-1, X+1`.
fn pm1_ladder(field: &Field, l: usize) -> Vec<Poly> {
    let plus = Poly::linear(field, field.neg(Elem::ONE));
    let minus = Poly::linear(field, Elem::ONE);
    let mut out = vec![plus.pow(l)];
    for j in (1..l).rev() {
        out.push(minus.pow(j));
        out.push(plus.pow(j));
    }
    out
}

/// Number of zero blocks `k` with `tr P = r + k + 1`.
fn nilfit_shift(field: &Field, r: usize, trace: Elem) -> usize {
    field.prime_residue(field.sub(trace, field.from_int(r as i64 + 1))).expect("prime field") as usize
}

/// Largest padding `embed_nilfit` uses for degree `r`.
pub fn nilfit_max_padding(p: u64, r: usize) -> usize {
    let k = p as usize - 1;
    k + (r + k) * (r + k)
}

/// `m` and a `(+,-,+,-)` certificate for `D(C(P), 0_m)`.
pub fn embed_nilfit(p: &Poly, seed: u64) -> Result<(usize, DecompCert)> {
    let f = p.field().clone();
    require_prime(&f)?;
    let r = p.deg();
    if r < 2 {
        return Err(Error::DegreeTooSmall);
    }
    let k = nilfit_shift(&f, r, p.trace());
    let l = r + k;
    let m = k + l * l;
    let x = Poly::x_pow(&f, 1);
    let mut blocks = vec![x; k];
    blocks.push(p.clone());
    let target = Poly::linear(&f, Elem::ONE).pow(l);
    let (q1, q2) = tracefit_diff(&blocks, 1, &target)?;
    let a0 = companion_diag(&f, blocks.iter())?;
    let r0 = a0.sub(&q1)?.add(&q2)?;
    let ladder = companion_diag(&f, pm1_ladder(&f, l).iter())?;
    let wl = witness_diff(&ladder, seed)?;
    let joint = Mat::block_diag(&[r0, ladder])?;
    let w = witness_diff(&joint, seed)?;
    let parts = vec![
        Mat::block_diag(&[q1, wl.q2().clone()])?,
        Mat::block_diag(&[q2, wl.q1().clone()])?,
        w.q1().clone(),
        w.q2().clone(),
    ];
    let total = r + m;
    let order: Vec<usize> = (k..k + r).chain(0..k).chain(k + r..total).collect();
    let t = reorder(&SimTransform::identity(&f, total), &order)?;
    let mut target_mat = Mat::zeros(&f, total, total);
    target_mat.set_block(0, 0, &Mat::companion(p)?);
    let terms = PATTERN
        .into_iter()
        .zip(parts)
        .map(|(s, m)| t.apply(&m).map(|m| (s, m)))
        .collect::<Result<Vec<_>>>()?;
    Ok((m, DecompCert::build(&target_mat, terms, "embed_nilfit", seed)?))
}

/// Size from which `decompose_prime4` applies over `F_p`.
pub fn prime4_threshold(p: u64) -> Result<usize> {
    let field = Field::prime(p)?;
    let mut scalar = 0;
    for alpha in field.elements() {
        scalar = scalar.max(scalar_threshold(&field, alpha)?);
    }
    let pu = p as usize;
    let pad = (2..2 * pu).map(|r| nilfit_max_padding(p, r)).max().unwrap_or(0);
    Ok(2 * pu + (pu + scalar).max(pu * pad) + 1)
}

/// `(+,-,+,-)` certificate for a matrix whose rational form is the given
/// block list, all blocks good cyclic and the residue nilpotent.
fn nilpotent_route(blocks: &[Poly], r: i64, seed: u64) -> Result<(Mat, Vec<Mat>)> {
    let f = blocks[0].field().clone();
    let a = companion_diag(&f, blocks.iter())?;
    let n = a.rows();
    let (q1, q2) = tracefit_diff(blocks, r, &Poly::x_pow(&f, n))?;
    let w = witness_diff(&a.sub(&q1)?.add(&q2)?, seed)?;
    Ok((a, vec![q1, q2, w.q1().clone(), w.q2().clone()]))
}

fn signed(parts: Vec<Mat>) -> Vec<(Sign, Mat)> {
    PATTERN.into_iter().zip(parts).collect()
}

/// `A` as `Q1 - Q2 + Q3 - Q4` over a prime field, above the threshold.
pub fn prime4_composite(a: &Mat, seed: u64) -> Result<DecompCert> {
    let n = a.require_square()?;
    let f = a.field().clone();
    require_prime(&f)?;
    let p = f.p();
    let threshold = prime4_threshold(p)?;
    if n < threshold {
        return Err(Error::BelowThreshold { n, threshold });
    }
    let (inv, t) = frobenius_form(a)?;
    let factors = inv.factors();
    let q = factors.iter().take_while(|g| g.deg() == 1).count();
    let rest = &factors[q..];
    let big: usize = n - q;
    let alpha = factors.first().filter(|g| g.deg() == 1).map(|g| f.neg(g.coeff(0))).unwrap_or(Elem::ZERO);
    let pu = p as usize;

    if big >= 2 * pu {
        let d = f.prime_residue(f.sub(Elem::ONE, a.trace()?)).expect("prime field") as i64;
        let (_, parts) = nilpotent_route(factors, 1 - d, seed)?;
        return cert_from_canonical(a, &t, signed(parts), "prime4", seed);
    }
    if !alpha.is_zero() {
        if rest.is_empty() {
            return Ok(scalar_4comp(&f, alpha, n, seed)?.with_pipeline("prime4"));
        }
        let tr1 = rest.iter().fold(Elem::ZERO, |acc, g| f.add(acc, g.trace()));
        let shift = f.div(f.sub(Elem::ONE, tr1), alpha)?;
        let extra = f.prime_residue(shift).expect("prime field") as usize;
        let mut blocks = vec![factors[0].clone(); extra];
        blocks.extend(rest.iter().cloned());
        let (a2, parts) = nilpotent_route(&blocks, 1, seed)?;
        let mut certs = Vec::new();
        if q > extra {
            certs.push(scalar_4comp(&f, alpha, q - extra, seed)?);
        }
        certs.push(DecompCert::build(&a2, signed(parts), "prime4", seed)?);
        let merged = merge_block_diag(&certs)?;
        let terms = merged.terms().map(|(s, m)| (s, m.clone())).collect();
        return cert_from_canonical(a, &t, terms, "prime4", seed);
    }
    let mut certs = Vec::new();
    let mut order = Vec::with_capacity(n);
    let mut zeros = 0..q;
    let mut off = q;
    for g in rest {
        let (m, cert) = embed_nilfit(g, seed)?;
        order.extend(off..off + g.deg());
        off += g.deg();
        for _ in 0..m {
            order.push(zeros.next().ok_or(Error::BelowThreshold { n, threshold })?);
        }
        certs.push(cert);
    }
    let tail: Vec<usize> = zeros.collect();
    if !tail.is_empty() {
        certs.push(zero_cert(&f, tail.len(), "prime4", seed)?);
        order.extend(tail);
    }
    let merged = merge_block_diag(&certs)?;
    let t = reorder(&t, &order)?;
    let terms = merged.terms().map(|(s, m)| (s, m.clone())).collect();
    cert_from_canonical(a, &t, terms, "prime4", seed)
}

/// Four idempotents summing to `A`: `A - 2I` is written as
/// `Q1 - Q2 + Q3 - Q4`, so `A = Q1 + (I - Q2) + Q3 + (I - Q4)`.
pub fn decompose_prime4(a: &Mat, seed: u64) -> Result<DecompCert> {
    let n = a.require_square()?;
    let f = a.field().clone();
    let shifted = a.add_scalar(f.neg(f.from_int(2)))?;
    let comp = prime4_composite(&shifted, seed)?;
    let id = Mat::identity(&f, n);
    let parts = vec![
        comp.parts[0].clone(),
        id.sub(&comp.parts[1])?,
        comp.parts[2].clone(),
        id.sub(&comp.parts[3])?,
    ];
    DecompCert::build(a, parts.into_iter().map(|m| (Sign::Plus, m)).collect(), "prime4", seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::is_similar;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn semigroup_examples() {
        assert_eq!(semigroup_frobenius(&[3, 5]).unwrap(), 8);
        assert_eq!(semigroup_represent(&[3, 5], 8).unwrap(), vec![1, 1]);
        assert_eq!(semigroup_frobenius(&[2, 3]).unwrap(), 2);
        assert_eq!(semigroup_frobenius(&[1]).unwrap(), 0);
        assert_eq!(semigroup_represent(&[1], 9).unwrap(), vec![9]);
        assert_eq!(semigroup_frobenius(&[4, 6]).err(), Some(Error::NotCoprime));
        assert_eq!(semigroup_frobenius(&[]).err(), Some(Error::EmptyList));
        assert_eq!(semigroup_represent(&[3, 5], 7).err(), Some(Error::NoRepresentation(7)));
    }

    #[test]
    fn scalar_classes_example() {
        let f5 = Field::prime(5).unwrap();
        let classes = scalar_classes(&f5, Elem(2));
        let codes: Vec<Vec<u32>> = classes.iter().map(|c| c.iter().map(|e| e.code()).collect()).collect();
        assert_eq!(codes, vec![vec![0, 4], vec![2, 3], vec![1]]);
        let cert = scalar_4comp(&f5, Elem(2), 5, 0).unwrap();
        assert_eq!(cert.signs, PATTERN.to_vec());
        assert!(cert.verify(&Mat::scalar(&f5, 5, Elem(2))));
    }

    #[test]
    fn scalar_trivial_cases() {
        let f7 = Field::prime(7).unwrap();
        let cert = scalar_4comp(&f7, Elem::ONE, 3, 0).unwrap();
        assert_eq!(cert.count(), 4);
        assert_eq!(cert.parts[0], Mat::identity(&f7, 3));
        assert!(scalar_4comp(&f7, Elem::ZERO, 4, 0).unwrap().parts.iter().all(Mat::is_zero));
        let f9 = Field::new(3, 2, None).unwrap();
        assert_eq!(scalar_4comp(&f9, Elem::ONE, 2, 0).err(), Some(Error::NotPrimeField));
    }

    #[test]
    fn scalar_at_thresholds() {
        for p in [5u64, 7, 11] {
            let f = Field::prime(p).unwrap();
            for alpha in f.elements() {
                let thr = scalar_threshold(&f, alpha).unwrap().max(1);
                for n in thr..thr + 3 {
                    let cert = scalar_4comp(&f, alpha, n, 0).unwrap();
                    assert!(cert.verify(&Mat::scalar(&f, n, alpha)));
                }
            }
        }
    }

    fn random_poly(f: &Field, deg: usize, trace: Option<Elem>, rng: &mut impl Rng) -> Poly {
        let q = f.order();
        let mut c: Vec<Elem> = (0..deg).map(|_| Elem(rng.gen_range(0..q) as u32)).collect();
        if let Some(t) = trace {
            c[deg - 1] = f.neg(t);
        }
        c.push(Elem::ONE);
        Poly::new(f, c)
    }

    fn check_sum(blocks: &[Poly], r: i64, p: &Poly) {
        let f = p.field();
        let (q, q2) = tracefit_sum(blocks, r, p).unwrap();
        let a = companion_diag(f, blocks.iter()).unwrap();
        assert!(q.is_idempotent().unwrap() && q2.is_idempotent().unwrap());
        assert!(is_similar(&a.sub(&q).unwrap().sub(&q2).unwrap(), &Mat::companion(p).unwrap()).unwrap());
    }

    #[test]
    fn tracefit_examples() {
        let f5 = Field::prime(5).unwrap();
        let x2 = Poly::x_pow(&f5, 2);
        check_sum(&[x2.clone()], 2, &Poly::from_ints(&f5, &[1, 2, 1]));
        let x3 = Poly::x_pow(&f5, 3);
        let p5 = Poly::from_ints(&f5, &[1, 0, 4, 0, 3, 1]);
        check_sum(&[x2.clone(), x3.clone()], 3, &p5);
        assert_eq!(
            tracefit_sum(&[x2.clone()], 1, &x2).err(),
            Some(Error::RangeViolation { r: 1, lo: 2, hi: 3 })
        );
        assert_eq!(tracefit_sum(&[x2.clone(), Poly::x_pow(&f5, 1)], 3, &x3).err(), Some(Error::LastBlockTooSmall));

        let (q, q2) = tracefit_diff(&[x3.clone()], 0, &x3).unwrap();
        let a = Mat::companion(&x3).unwrap();
        let r = a.sub(&q.sub(&q2).unwrap()).unwrap();
        assert!(is_similar(&r, &a).unwrap());
        let target = Poly::from_ints(&f5, &[0, 0, 1, 1, 1]);
        let (q, q2) = tracefit_diff(&[x2.clone(), x2.clone()], 1, &target).unwrap();
        let a = companion_diag(&f5, [x2.clone(), x2.clone()].iter()).unwrap();
        assert!(is_similar(&a.sub(&q).unwrap().add(&q2).unwrap(), &Mat::companion(&target).unwrap()).unwrap());
        assert!(matches!(tracefit_diff(&[x3.clone()], 2, &x3), Err(Error::RangeViolation { .. })));
    }

    #[test]
    fn tracefit_random_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for p in [2u64, 3, 5, 7] {
            let f = Field::prime(p).unwrap();
            for _ in 0..10 {
                let s = rng.gen_range(1..4);
                let mut blocks: Vec<Poly> = (0..s).map(|_| random_poly(&f, rng.gen_range(1..4), None, &mut rng)).collect();
                blocks.push(random_poly(&f, rng.gen_range(2..4), None, &mut rng));
                let n: usize = blocks.iter().map(Poly::deg).sum();
                let tr = blocks.iter().fold(Elem::ZERO, |a, b| f.add(a, b.trace()));
                let s = blocks.len() as i64;
                for r in [s + 1, n as i64 + 1, rng.gen_range(s + 1..=n as i64 + 1)] {
                    let target = random_poly(&f, n, Some(f.sub(tr, f.from_int(r))), &mut rng);
                    check_sum(&blocks, r, &target);
                }
            }
        }
    }

    #[test]
    fn nilfit_examples() {
        let f2 = Field::prime(2).unwrap();
        for p in [Poly::x_pow(&f2, 2), Poly::from_ints(&f2, &[1, 1, 1])] {
            let (m, cert) = embed_nilfit(&p, 0).unwrap();
            assert!(m <= 2 * 2 + 2 + 16);
            assert_eq!(cert.signs, PATTERN.to_vec());
            assert_eq!(cert.size, 2 + m);
        }
        assert_eq!(embed_nilfit(&Poly::x_pow(&f2, 1), 0).err(), Some(Error::DegreeTooSmall));
        let f4 = Field::new(2, 2, None).unwrap();
        assert_eq!(embed_nilfit(&Poly::x_pow(&f4, 2), 0).err(), Some(Error::NotPrimeField));
    }

    #[test]
    fn thresholds() {
        assert_eq!(prime4_threshold(2).unwrap(), 39);
        assert_eq!(prime4_threshold(3).unwrap(), 160);
    }

    #[test]
    fn prime4_cases_over_f2() {
        let f2 = Field::prime(2).unwrap();
        let n = prime4_threshold(2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let random = Mat::from_fn(&f2, n, n, |_, _| Elem(rng.gen_range(0..2)));
        let mut samples = vec![random, Mat::identity(&f2, n), Mat::zeros(&f2, n, n)];
        let mut mixed = Mat::zeros(&f2, n, n);
        mixed.set_block(0, 0, &Mat::companion(&Poly::from_ints(&f2, &[1, 1, 1])).unwrap());
        samples.push(mixed.clone());
        samples.push(mixed.add_scalar(Elem::ONE).unwrap());
        for a in samples {
            let comp = prime4_composite(&a, 0).unwrap();
            assert!(comp.count() == 4 && comp.verify(&a));
            let cert = decompose_prime4(&a, 0).unwrap();
            assert!(cert.count() == 4 && cert.is_plain_sum() && cert.verify(&a));
        }
        assert!(matches!(
            decompose_prime4(&Mat::identity(&f2, 5), 0),
            Err(Error::BelowThreshold { n: 5, threshold: 39 })
        ));
    }
}
