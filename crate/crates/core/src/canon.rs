//! Rational canonical forms with explicit similarity transforms, and
//! per-irreducible Jordan data.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::factor::factor;
use crate::field::{Elem, Field};
use crate::matrix::Mat;
use crate::poly::Poly;

/// Invariant factors `f_1 | f_2 | .. | f_m`, ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantFactors(pub Vec<Poly>);

impl InvariantFactors {
    pub fn factors(&self) -> &[Poly] {
        &self.0
    }

    pub fn min_poly(&self) -> Option<&Poly> {
        self.0.last()
    }

    pub fn char_poly(&self, field: &Field) -> Poly {
        self.0.iter().fold(Poly::one(field), |acc, f| acc.mul(f))
    }

    pub fn is_cyclic(&self) -> bool {
        self.0.len() <= 1
    }
}

/// An invertible matrix `S` together with its inverse; conjugation maps
/// `A` to `S A S^-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimTransform {
    s: Mat,
    s_inv: Mat,
}

impl SimTransform {
    pub fn new(s: Mat, s_inv: Mat) -> Result<SimTransform> {
        let n = s.require_square()?;
        if s.mul(&s_inv)? != Mat::identity(s.field(), n) {
            return Err(Error::Internal("transform and inverse do not match".into()));
        }
        Ok(SimTransform { s, s_inv })
    }

    pub fn from_matrix(s: Mat) -> Result<SimTransform> {
        s.require_square()?;
        let s_inv = s.inverse().ok_or(Error::Internal("singular transform".into()))?;
        Ok(SimTransform { s, s_inv })
    }

    pub fn identity(field: &Field, n: usize) -> SimTransform {
        SimTransform { s: Mat::identity(field, n), s_inv: Mat::identity(field, n) }
    }

    pub fn s(&self) -> &Mat {
        &self.s
    }

    pub fn s_inv(&self) -> &Mat {
        &self.s_inv
    }

    pub fn size(&self) -> usize {
        self.s.rows()
    }

    pub fn inverse(&self) -> SimTransform {
        SimTransform { s: self.s_inv.clone(), s_inv: self.s.clone() }
    }

    /// The transform applying `self` first, then `outer`.
    pub fn then(&self, outer: &SimTransform) -> Result<SimTransform> {
        Ok(SimTransform { s: outer.s.mul(&self.s)?, s_inv: self.s_inv.mul(&outer.s_inv)? })
    }

    pub fn apply(&self, a: &Mat) -> Result<Mat> {
        if a.rows() != self.size() || a.cols() != self.size() {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} matrix against a transform of size {}",
                a.rows(),
                a.cols(),
                self.size()
            )));
        }
        self.s.mul(a)?.mul(&self.s_inv)
    }
}

/// Generalized kernel increments `n_k` per irreducible factor of the
/// characteristic polynomial, truncated at the first zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EigStructure(pub BTreeMap<Poly, Vec<usize>>);

impl EigStructure {
    pub fn factors(&self) -> impl Iterator<Item = &Poly> {
        self.0.keys()
    }

    pub fn sequence(&self, f: &Poly) -> &[usize] {
        self.0.get(f).map_or(&[], |v| v.as_slice())
    }

    /// `n_k` for `k >= 1`; 0 for absent factors and indices.
    pub fn nk(&self, f: &Poly, k: usize) -> usize {
        assert!(k >= 1, "n_k is indexed from 1");
        self.sequence(f).get(k - 1).copied().unwrap_or(0)
    }

    /// Number of blocks of size exactly `k`.
    pub fn jk(&self, f: &Poly, k: usize) -> usize {
        self.nk(f, k) - self.nk(f, k + 1)
    }

    /// Block sizes for `f`, descending.
    pub fn block_sizes(&self, f: &Poly) -> Vec<usize> {
        let seq = self.sequence(f);
        let mut out = Vec::new();
        for k in (1..=seq.len()).rev() {
            out.extend(std::iter::repeat(k).take(self.jk(f, k)));
        }
        out
    }

    pub(crate) fn from_block_sizes(sizes: BTreeMap<Poly, Vec<usize>>) -> EigStructure {
        let mut out = BTreeMap::new();
        for (f, blocks) in sizes {
            let top = blocks.iter().copied().max().unwrap_or(0);
            let seq: Vec<usize> =
                (1..=top).map(|k| blocks.iter().filter(|&&e| e >= k).count()).collect();
            if !seq.is_empty() {
                out.insert(f, seq);
            }
        }
        EigStructure(out)
    }
}

/// A block of the primary decomposition: `companion(factor^exponent)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryBlock {
    pub factor: Poly,
    pub exponent: usize,
}

impl PrimaryBlock {
    pub fn poly(&self) -> Poly {
        self.factor.pow(self.exponent)
    }

    pub fn size(&self) -> usize {
        self.factor.deg() * self.exponent
    }
}

/// Incrementally maintained row-echelon basis of a subspace.
#[derive(Clone, Debug)]
pub(crate) struct Echelon {
    field: Field,
    rows: Vec<(usize, Vec<Elem>)>,
}

impl Echelon {
    pub(crate) fn new(field: &Field) -> Echelon {
        Echelon { field: field.clone(), rows: Vec::new() }
    }

    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [Elem]) {
        let f = &self.field;
        for (piv, row) in &self.rows {
            let c = v[*piv];
            if c.is_zero() {
                continue;
            }
            let c = f.neg(c);
            for (x, &r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = f.add(*x, f.mul(c, r));
                }
            }
        }
    }

    pub(crate) fn contains(&self, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// Adds `v`; returns false when it was already in the span.
    pub(crate) fn insert(&mut self, v: &[Elem]) -> bool {
        let f = self.field.clone();
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(piv) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = f.inv_nonzero(w[piv]);
        for x in &mut w {
            *x = f.mul(*x, inv);
        }
        for (_, row) in &mut self.rows {
            let c = row[piv];
            if c.is_zero() {
                continue;
            }
            let c = f.neg(c);
            for (x, &r) in row.iter_mut().zip(&w) {
                *x = f.add(*x, f.mul(c, r));
            }
        }
        self.rows.push((piv, w));
        true
    }
}

/// Krylov basis `v, Av, .., A^{d-1} v` and the local minimal polynomial.
pub(crate) fn krylov(a: &Mat, v: &[Elem]) -> (Vec<Vec<Elem>>, Poly) {
    let f = a.field();
    let n = v.len();
    // reduced vectors with their coordinates in the Krylov basis
    let mut reduced: Vec<(usize, Vec<Elem>, Vec<Elem>)> = Vec::new();
    let mut basis: Vec<Vec<Elem>> = Vec::new();
    let mut cur = v.to_vec();
    loop {
        let d = basis.len();
        let mut w = cur.clone();
        let mut coef = vec![Elem::ZERO; d + 1];
        coef[d] = Elem::ONE;
        for (piv, row, rc) in &reduced {
            let c = w[*piv];
            if c.is_zero() {
                continue;
            }
            let c = f.neg(c);
            for (x, &r) in w.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = f.add(*x, f.mul(c, r));
                }
            }
            for (x, &r) in coef.iter_mut().zip(rc) {
                *x = f.add(*x, f.mul(c, r));
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            None => return (basis, Poly::new(f, coef)),
            Some(piv) => {
                let inv = f.inv_nonzero(w[piv]);
                let w: Vec<Elem> = w.iter().map(|&x| f.mul(x, inv)).collect();
                let coef: Vec<Elem> = coef.iter().map(|&x| f.mul(x, inv)).collect();
                reduced.push((piv, w, coef));
                let next = a.mul_vec(&cur);
                basis.push(std::mem::replace(&mut cur, next));
                debug_assert!(basis.len() <= n);
            }
        }
    }
}

fn add_vec(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
}

/// A vector whose local minimal polynomial is the minimal polynomial of `a`.
fn maximal_vector(a: &Mat) -> (Vec<Elem>, Poly) {
    let f = a.field();
    let n = a.rows();
    let unit = |i: usize| {
        let mut e = vec![Elem::ZERO; n];
        e[i] = Elem::ONE;
        e
    };
    let mut span = Echelon::new(f);
    let mut v = unit(0);
    let (kb, mut g) = krylov(a, &v);
    for b in &kb {
        span.insert(b);
    }
    for i in 1..n {
        if span.dim() == n {
            break;
        }
        let w = unit(i);
        if span.contains(&w) {
            continue;
        }
        let (kw, h) = krylov(a, &w);
        for b in &kw {
            span.insert(b);
        }
        if h.divides(&g) {
            continue;
        }
        // split the lcm into coprime parts drawn from g and h
        let l = g.lcm(&h);
        let mut g_part = Poly::one(f);
        let mut h_part = Poly::one(f);
        for (q, e) in factor(&l, 0).expect("nonzero") {
            let qe = q.pow(e);
            if qe.divides(&g) {
                g_part = g_part.mul(&qe);
            } else {
                h_part = h_part.mul(&qe);
            }
        }
        let x1 = a.eval_poly_vec(&g.div_exact(&g_part), &v);
        let x2 = a.eval_poly_vec(&h.div_exact(&h_part), &w);
        v = add_vec(f, &x1, &x2);
        g = l;
    }
    (v, g)
}

/// Basis (as columns) putting `a` into block-diagonal companion form,
/// together with the invariant factors in ascending order.
fn frobenius_basis(a: &Mat) -> (Vec<Poly>, Mat) {
    let f = a.field();
    let n = a.rows();
    if n == 0 {
        return (Vec::new(), Mat::zeros(f, 0, 0));
    }
    let (v, mu) = maximal_vector(a);
    let (kb, mu2) = krylov(a, &v);
    debug_assert_eq!(mu, mu2);
    let d = kb.len();
    let k = Mat::from_columns(f, n, &kb);
    if d == n {
        return (vec![mu], k);
    }
    // functional vanishing on A^i v for i < d-1 and 1 on A^{d-1} v
    let mut target = vec![Elem::ZERO; d];
    target[d - 1] = Elem::ONE;
    let phi = k.transpose().solve(&target).expect("Krylov basis is independent");
    let mut rows = Vec::with_capacity(d);
    let mut cur = phi;
    for _ in 0..d {
        let next = a.vec_mul(&cur);
        rows.push(std::mem::replace(&mut cur, next));
    }
    let big_phi = Mat::from_fn(f, d, n, |i, j| rows[i][j]);
    let comp = big_phi.eliminate().kernel_basis;
    debug_assert_eq!(comp.len(), n - d);
    let mut cols = comp.clone();
    cols.extend(kb);
    let t = Mat::from_columns(f, n, &cols);
    let t_inv = t.inverse().expect("complement is transversal");
    let reduced = t_inv.mul(a).unwrap().mul(&t).unwrap();
    let top = reduced.submatrix(0, 0, n - d, n - d);
    let (mut factors, sub_basis) = frobenius_basis(&top);
    let u = Mat::from_columns(f, n, &comp);
    let lifted = u.mul(&sub_basis).unwrap();
    let mut all: Vec<Vec<Elem>> = (0..n - d).map(|j| lifted.column(j)).collect();
    all.extend((0..d).map(|j| k.column(j)));
    factors.push(mu);
    (factors, Mat::from_columns(f, n, &all))
}

/// Rational canonical form: `S A S^-1 = D(C(f_1), .., C(f_m))`.
pub fn frobenius_form(a: &Mat) -> Result<(InvariantFactors, SimTransform)> {
    let n = a.require_square()?;
    if let Some(chain) = companion_chain(a) {
        return Ok((InvariantFactors(chain), SimTransform::identity(a.field(), n)));
    }
    let (factors, basis) = frobenius_basis(a);
    let t = SimTransform::from_matrix(basis.inverse().ok_or(Error::Internal("singular basis".into()))?)?;
    let canon = companion_diag(a.field(), factors.iter())?;
    if t.apply(a)? != canon {
        return Err(Error::Internal("canonical form failed verification".into()));
    }
    Ok((InvariantFactors(factors), t))
}

/// Recognizes a matrix already in canonical form.
fn companion_chain(a: &Mat) -> Option<Vec<Poly>> {
    let f = a.field();
    let n = a.rows();
    let mut out: Vec<Poly> = Vec::new();
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && a.get(end, end - 1) == Elem::ONE {
            end += 1;
        }
        let d = end - start;
        let mut coeffs: Vec<Elem> = (0..d).map(|i| f.neg(a.get(start + i, end - 1))).collect();
        coeffs.push(Elem::ONE);
        let p = Poly::new(f, coeffs);
        if let Some(prev) = out.last() {
            if !prev.divides(&p) {
                return None;
            }
        }
        out.push(p);
        start = end;
    }
    let canon = companion_diag(f, out.iter()).ok()?;
    (&canon == a).then_some(out)
}

pub fn companion_diag<'a>(field: &Field, polys: impl Iterator<Item = &'a Poly>) -> Result<Mat> {
    let blocks: Vec<Mat> = polys.map(Mat::companion).collect::<Result<_>>()?;
    if blocks.is_empty() {
        return Ok(Mat::zeros(field, 0, 0));
    }
    Mat::block_diag(&blocks)
}

pub fn min_poly(a: &Mat) -> Result<Poly> {
    let (inv, _) = frobenius_form(a)?;
    Ok(inv.min_poly().cloned().unwrap_or_else(|| Poly::one(a.field())))
}

/// Primary decomposition: `S A S^-1 = D(C(q_1^e_1), ..)` with each `q_i`
/// monic irreducible.
pub fn primary_form(a: &Mat, seed: u64) -> Result<(Vec<PrimaryBlock>, SimTransform)> {
    let n = a.require_square()?;
    let f = a.field();
    let (inv, t) = frobenius_form(a)?;
    let basis = t.s_inv();
    let mut cols: Vec<Vec<Elem>> = Vec::with_capacity(n);
    let mut blocks = Vec::new();
    let mut start = 0;
    for fi in inv.factors() {
        let gen = basis.column(start);
        for (q, e) in factor(fi, seed)? {
            let qe = q.pow(e);
            let w = a.eval_poly_vec(&fi.div_exact(&qe), &gen);
            let (kb, local) = krylov(a, &w);
            debug_assert_eq!(local, qe);
            cols.extend(kb);
            blocks.push(PrimaryBlock { factor: q, exponent: e });
        }
        start += fi.deg();
    }
    let b = Mat::from_columns(f, n, &cols);
    let t = SimTransform::from_matrix(b.inverse().ok_or(Error::Internal("singular basis".into()))?)?;
    let polys: Vec<Poly> = blocks.iter().map(PrimaryBlock::poly).collect();
    if t.apply(a)? != companion_diag(f, polys.iter())? {
        return Err(Error::Internal("primary form failed verification".into()));
    }
    Ok((blocks, t))
}

/// Jordan data per irreducible factor, read off the primary form.
pub fn eig_structure(a: &Mat, seed: u64) -> Result<EigStructure> {
    let (blocks, _) = primary_form(a, seed)?;
    let mut sizes: BTreeMap<Poly, Vec<usize>> = BTreeMap::new();
    for b in blocks {
        sizes.entry(b.factor).or_default().push(b.exponent);
    }
    Ok(EigStructure::from_block_sizes(sizes))
}

/// Jordan data from kernel dimensions of powers of `f(A)`.
pub fn eig_structure_by_kernels(a: &Mat, seed: u64) -> Result<EigStructure> {
    let n = a.require_square()?;
    let mut out = BTreeMap::new();
    for (f, mult) in factor(&a.char_poly()?, seed)? {
        let d = f.deg();
        let m = a.eval_poly(&f)?;
        let mut power = Mat::identity(a.field(), n);
        let mut prev_kernel = 0;
        let mut seq = Vec::new();
        while prev_kernel < mult * d {
            power = power.mul(&m)?;
            let kernel = n - power.rank();
            let inc = kernel - prev_kernel;
            if inc == 0 {
                break;
            }
            seq.push(inc / d);
            prev_kernel = kernel;
        }
        out.insert(f, seq);
    }
    Ok(EigStructure(out))
}

/// `S` with `S A S^-1 = B`.
pub fn similarity_witness(a: &Mat, b: &Mat) -> Result<SimTransform> {
    let n = a.require_square()?;
    b.require_square()?;
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if b.rows() != n {
        return Err(Error::ShapeMismatch(format!("sizes {} and {}", n, b.rows())));
    }
    let (fa, ta) = frobenius_form(a)?;
    let (fb, tb) = frobenius_form(b)?;
    if fa != fb {
        return Err(Error::NotSimilar);
    }
    let t = ta.then(&tb.inverse())?;
    if t.s().mul(a)? != b.mul(t.s())? {
        return Err(Error::Internal("similarity witness failed verification".into()));
    }
    Ok(t)
}

pub fn is_similar(a: &Mat, b: &Mat) -> Result<bool> {
    match similarity_witness(a, b) {
        Ok(_) => Ok(true),
        Err(Error::NotSimilar) => Ok(false),
        Err(e) => Err(e),
    }
}

/// `S A S^-1`.
pub fn conjugate(a: &Mat, t: &SimTransform) -> Result<Mat> {
    t.apply(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn frobenius_examples() {
        let f2 = fp(2);
        let (inv, t) = frobenius_form(&Mat::identity(&f2, 2)).unwrap();
        assert_eq!(inv.factors(), &[Poly::from_ints(&f2, &[1, 1]), Poly::from_ints(&f2, &[1, 1])]);
        assert_eq!(t.s(), &Mat::identity(&f2, 2));

        let f3 = fp(3);
        let c = Mat::companion(&Poly::from_ints(&f3, &[1, 0, 1])).unwrap();
        let (inv, t) = frobenius_form(&c).unwrap();
        assert_eq!(inv.factors(), &[Poly::from_ints(&f3, &[1, 0, 1])]);
        assert_eq!(t.s(), &Mat::identity(&f3, 2));

        let d = Mat::from_ints(&f3, &[&[0, 0], &[0, 1]]);
        let (inv, _) = frobenius_form(&d).unwrap();
        assert_eq!(inv.factors(), &[Poly::from_ints(&f3, &[0, -1, 1])]);
    }

    #[test]
    fn eig_examples() {
        let f2 = fp(2);
        let j = Mat::from_ints(&f2, &[&[0, 1], &[0, 0]]);
        let e = eig_structure(&j, 0).unwrap();
        assert_eq!(e.sequence(&Poly::x_pow(&f2, 1)), &[1, 1]);

        let f5 = fp(5);
        let d = Mat::diag(&f5, &[Elem::ONE, Elem::ONE, f5.from_int(2)]);
        let e = eig_structure(&d, 0).unwrap();
        assert_eq!(e.sequence(&Poly::from_ints(&f5, &[-1, 1])), &[2]);
        assert_eq!(e.sequence(&Poly::from_ints(&f5, &[-2, 1])), &[1]);

        let f3 = fp(3);
        let q = Poly::from_ints(&f3, &[1, 0, 1]);
        let c = Mat::companion(&q.pow(2)).unwrap();
        assert_eq!(eig_structure(&c, 0).unwrap().sequence(&q), &[1, 1]);
        assert_eq!(eig_structure_by_kernels(&c, 0).unwrap().sequence(&q), &[1, 1]);
    }

    #[test]
    fn similarity_examples() {
        let f2 = fp(2);
        let j = Mat::from_ints(&f2, &[&[0, 1], &[0, 0]]);
        let c = Mat::companion(&Poly::x_pow(&f2, 2)).unwrap();
        let t = similarity_witness(&j, &c).unwrap();
        assert_eq!(t.apply(&j).unwrap(), c);

        let f3 = fp(3);
        let a = Mat::from_ints(&f3, &[&[0, 0], &[0, 1]]);
        let b = Mat::from_ints(&f3, &[&[1, 0], &[0, 0]]);
        assert_eq!(similarity_witness(&a, &b).unwrap().apply(&a).unwrap(), b);

        let u = Mat::from_ints(&f3, &[&[1, 1], &[0, 1]]);
        assert_eq!(similarity_witness(&Mat::identity(&f3, 2), &u).err(), Some(Error::NotSimilar));
    }

    #[test]
    fn conjugate_identity() {
        let f5 = fp(5);
        let a = Mat::from_ints(&f5, &[&[1, 2], &[3, 4]]);
        assert_eq!(conjugate(&a, &SimTransform::identity(&f5, 2)).unwrap(), a);
    }

    #[test]
    fn primary_form_over_extension() {
        let f4 = Field::new(2, 2, None).unwrap();
        let a = Mat::from_fn(&f4, 4, 4, |i, j| f4.elem(((i * 3 + j * 5 + i * j) % 4) as u64).unwrap());
        let (blocks, t) = primary_form(&a, 3).unwrap();
        let size: usize = blocks.iter().map(PrimaryBlock::size).sum();
        assert_eq!(size, 4);
        let polys: Vec<Poly> = blocks.iter().map(PrimaryBlock::poly).collect();
        assert_eq!(t.apply(&a).unwrap(), companion_diag(&f4, polys.iter()).unwrap());
    }

    fn mat_strategy(p: u64, n: usize) -> impl Strategy<Value = Mat> {
        proptest::collection::vec(0..p, n * n).prop_map(move |v| {
            let f = Field::prime(p).unwrap();
            Mat::from_fn(&f, n, n, |i, j| Elem(v[i * n + j] as u32))
        })
    }

    fn sparse_strategy(p: u64, n: usize) -> impl Strategy<Value = Mat> {
        // low-rank-ish perturbations of scalar matrices exercise many invariant factors
        (proptest::collection::vec(0..p, n * n), 0..p, 0usize..3).prop_map(move |(v, s, keep)| {
            let f = Field::prime(p).unwrap();
            Mat::from_fn(&f, n, n, |i, j| {
                let base = if i == j { s } else { 0 };
                let noise = if i < keep { v[i * n + j] } else { 0 };
                Elem(((base + noise) % p) as u32)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn frobenius_reconstructs(a in mat_strategy(3, 5)) {
            let (inv, t) = frobenius_form(&a).unwrap();
            for w in inv.factors().windows(2) {
                prop_assert!(w[0].divides(&w[1]));
            }
            let canon = companion_diag(a.field(), inv.factors().iter()).unwrap();
            prop_assert_eq!(t.s_inv().mul(&canon).unwrap().mul(t.s()).unwrap(), a.clone());
            prop_assert_eq!(inv.char_poly(a.field()), a.char_poly().unwrap());
        }

        #[test]
        fn frobenius_many_factors(a in sparse_strategy(2, 6)) {
            let (inv, t) = frobenius_form(&a).unwrap();
            let canon = companion_diag(a.field(), inv.factors().iter()).unwrap();
            prop_assert_eq!(t.apply(&a).unwrap(), canon);
            prop_assert_eq!(inv.char_poly(a.field()), a.char_poly().unwrap());
        }

        #[test]
        fn eig_structure_routes_agree(a in sparse_strategy(3, 5)) {
            let e1 = eig_structure(&a, 1).unwrap();
            let e2 = eig_structure_by_kernels(&a, 2).unwrap();
            prop_assert_eq!(&e1, &e2);
            let total: usize = e1.0.iter().map(|(f, s)| f.deg() * s.iter().sum::<usize>()).sum();
            prop_assert_eq!(total, 5);
            for (f, s) in &e1.0 {
                for k in 1..=s.len() {
                    prop_assert!(e1.nk(f, k) >= e1.nk(f, k + 1));
                }
            }
        }

        #[test]
        fn eig_structure_similarity_invariant(a in sparse_strategy(5, 4), s in mat_strategy(5, 4)) {
            prop_assume!(s.inverse().is_some());
            let t = SimTransform::from_matrix(s).unwrap();
            let b = t.apply(&a).unwrap();
            prop_assert_eq!(eig_structure(&a, 0).unwrap(), eig_structure(&b, 0).unwrap());
            let w = similarity_witness(&a, &b).unwrap();
            prop_assert_eq!(w.apply(&a).unwrap(), b);
        }
    }
}
