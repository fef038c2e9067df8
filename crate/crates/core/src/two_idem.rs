//! Sums and differences of two idempotents: decision procedures and
//! explicit witnesses.

use std::collections::BTreeMap;

use crate::canon::{companion_diag, eig_structure, primary_form, similarity_witness, EigStructure, PrimaryBlock};
use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Mat;
use crate::pipelines::{DecompCert, Sign};
use crate::poly::Poly;

/// Which reading of the intertwining relation to evaluate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IntertwineMode {
    /// `u_{k+1} <= v_k` and `v_{k+1} <= u_k`.
    #[default]
    Corrected,
    /// `v_k <= u_{k+1}` and `u_k <= v_{k+1}`.
    Literal,
}

/// Eventually-zero nonincreasing sequence indexed from 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NkSequence(Vec<usize>);

impl NkSequence {
    pub fn new(values: Vec<usize>) -> NkSequence {
        let mut v = values;
        while v.last() == Some(&0) {
            v.pop();
        }
        NkSequence(v)
    }

    pub fn get(&self, k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        self.0.get(k - 1).copied().unwrap_or(0)
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }
}

pub fn intertwined(u: &[usize], v: &[usize], mode: IntertwineMode) -> bool {
    let at = |s: &[usize], k: usize| s.get(k - 1).copied().unwrap_or(0);
    let top = u.len().max(v.len()) + 1;
    (1..=top).all(|k| match mode {
        IntertwineMode::Corrected => at(u, k + 1) <= at(v, k) && at(v, k + 1) <= at(u, k),
        IntertwineMode::Literal => at(v, k) <= at(u, k + 1) && at(u, k) <= at(v, k + 1),
    })
}

fn linear(f: &Field, root: i64) -> Poly {
    Poly::linear(f, f.from_int(root))
}

fn decide_pairing(
    eig: &EigStructure,
    field: &Field,
    (lo, hi): (i64, i64),
    shift: i64,
    mode: IntertwineMode,
) -> Result<bool> {
    let u = eig.sequence(&linear(field, lo));
    let v = eig.sequence(&linear(field, hi));
    if !intertwined(u, v, mode) {
        return Ok(false);
    }
    let special = [linear(field, lo), linear(field, hi), linear(field, (lo + hi) / 2)];
    for f in eig.factors() {
        if special.contains(f) {
            continue;
        }
        let mirror = f.substitute_linear(field.from_int(-1), field.from_int(shift))?;
        if eig.sequence(f) != eig.sequence(&mirror) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn decide_char2(eig: &EigStructure, field: &Field) -> bool {
    let special = [linear(field, 0), linear(field, 1)];
    eig.factors()
        .filter(|f| !special.contains(f))
        .all(|f| eig.block_sizes(f).iter().all(|e| e % 2 == 0))
}

/// Is `a` a difference of two idempotents?
pub fn decide_diff2(a: &Mat) -> Result<bool> {
    decide_diff2_mode(a, IntertwineMode::Corrected)
}

pub fn decide_diff2_mode(a: &Mat, mode: IntertwineMode) -> Result<bool> {
    a.require_square()?;
    let field = a.field();
    let eig = eig_structure(a, 0)?;
    if field.p() == 2 {
        return Ok(decide_char2(&eig, field));
    }
    decide_pairing(&eig, field, (-1, 1), 0, mode)
}

/// Is `a` a sum of two idempotents?
pub fn decide_sum2(a: &Mat) -> Result<bool> {
    decide_sum2_mode(a, IntertwineMode::Corrected)
}

pub fn decide_sum2_mode(a: &Mat, mode: IntertwineMode) -> Result<bool> {
    a.require_square()?;
    let field = a.field();
    if field.p() == 2 {
        return decide_diff2_mode(a, mode);
    }
    let eig = eig_structure(a, 0)?;
    decide_pairing(&eig, field, (0, 2), 2, mode)
}

/// Two idempotents `Q1`, `Q2`; the witnessed matrix is `Q1 - Q2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiffWitness {
    q1: Mat,
    q2: Mat,
}

impl DiffWitness {
    pub fn new(q1: Mat, q2: Mat) -> Result<DiffWitness> {
        if !q1.is_idempotent()? || !q2.is_idempotent()? {
            return Err(Error::GadgetVerificationFailed("part is not idempotent".into()));
        }
        if q1.rows() != q2.rows() {
            return Err(Error::ShapeMismatch("witness parts differ in size".into()));
        }
        Ok(DiffWitness { q1, q2 })
    }

    pub fn q1(&self) -> &Mat {
        &self.q1
    }

    pub fn q2(&self) -> &Mat {
        &self.q2
    }

    pub fn difference(&self) -> Mat {
        self.q1.sub(&self.q2).expect("same shape")
    }
}

/// Shift recipe on one upper Jordan block: `Q1 - Q2 = J_m`.
fn jordan_recipe(f: &Field, m: usize) -> (Mat, Mat) {
    let mut q1 = Mat::zeros(f, m, m);
    let mut q2 = Mat::zeros(f, m, m);
    if m == 1 {
        return (q1, q2);
    }
    for i in 0..m {
        // 0-based even index is a 1-based odd index
        if i % 2 == 0 {
            q1.set(i, i, Elem::ONE);
            q2.set(i, i, Elem::ONE);
            if i + 1 < m {
                q1.set(i, i + 1, Elem::ONE);
            }
        } else if i + 1 < m {
            q2.set(i, i + 1, f.neg(Elem::ONE));
        }
    }
    (q1, q2)
}

/// Sizes of upper Jordan blocks if `n` is a direct sum of `J_m(0)`.
fn upper_jordan_sizes(n: &Mat) -> Option<Vec<usize>> {
    let size = n.rows();
    for i in 0..size {
        for j in 0..size {
            let x = n.get(i, j);
            let ok = if j == i + 1 { x.is_zero() || x == Elem::ONE } else { x.is_zero() };
            if !ok {
                return None;
            }
        }
    }
    let mut sizes = Vec::new();
    let mut start = 0;
    for i in 0..size {
        if i + 1 == size || n.get(i, i + 1).is_zero() {
            sizes.push(i + 1 - start);
            start = i + 1;
        }
    }
    Some(sizes)
}

fn is_nilpotent(n: &Mat) -> Result<bool> {
    let size = n.require_square()?;
    Ok(n.char_poly()? == Poly::x_pow(n.field(), size))
}

/// `Q1 - Q2 = N` for nilpotent `N`.
pub fn witness_nilpotent_diff(n: &Mat) -> Result<DiffWitness> {
    if !is_nilpotent(n)? {
        return Err(Error::NotNilpotent);
    }
    let f = n.field();
    if let Some(sizes) = upper_jordan_sizes(n) {
        let (q1s, q2s): (Vec<Mat>, Vec<Mat>) = sizes.iter().map(|&m| jordan_recipe(f, m)).unzip();
        if q1s.is_empty() {
            return DiffWitness::new(n.clone(), n.clone());
        }
        return DiffWitness::new(Mat::block_diag(&q1s)?, Mat::block_diag(&q2s)?);
    }
    witness_diff(n, 0)
}

fn gadget_failure(what: &str) -> impl Fn(Error) -> Error + '_ {
    move |e| Error::GadgetVerificationFailed(format!("{what}: {e}"))
}

/// `M = Q1 - Q2` similar to `J_a(1) + J_b(-1)`, with
/// `Q1 = [[I_a, Y], [0, 0]]` and `Q2 = [[0, 0], [-X, I_b]]`.
pub fn witness_pm1_pair(field: &Field, a: usize, b: usize) -> Result<(Mat, DiffWitness)> {
    if field.p() == 2 {
        return Err(Error::WrongCharacteristic(2));
    }
    if a + b == 0 || a.abs_diff(b) > 1 {
        return Err(Error::SizeConstraintViolated(format!("block sizes {a} and {b}")));
    }
    let n = a + b;
    // choose Y (a x b) and X (b x a) so that YX and XY are single shift blocks
    let mut y = Mat::zeros(field, a, b);
    let mut x = Mat::zeros(field, b, a);
    if a == b + 1 {
        for i in 0..b {
            y.set(i, i, Elem::ONE);
            x.set(i, i + 1, Elem::ONE);
        }
    } else if a == b {
        for i in 0..a {
            y.set(i, i, Elem::ONE);
            if i + 1 < a {
                x.set(i, i + 1, Elem::ONE);
            }
        }
    } else {
        for i in 0..a {
            x.set(i, i, Elem::ONE);
            y.set(i, i + 1, Elem::ONE);
        }
    }
    let mut q1 = Mat::zeros(field, n, n);
    q1.set_block(0, 0, &Mat::identity(field, a));
    q1.set_block(0, a, &y);
    let mut q2 = Mat::zeros(field, n, n);
    q2.set_block(a, 0, &x.neg());
    q2.set_block(a, a, &Mat::identity(field, b));
    let w = DiffWitness::new(q1, q2)?;
    let m = w.difference();
    let target = pm1_target(field, a, b)?;
    similarity_witness(&m, &target).map_err(gadget_failure("plus/minus one pair"))?;
    Ok((m, w))
}

fn pm1_target(field: &Field, a: usize, b: usize) -> Result<Mat> {
    let mut polys = Vec::new();
    if a > 0 {
        polys.push(linear(field, 1).pow(a));
    }
    if b > 0 {
        polys.push(linear(field, -1).pow(b));
    }
    companion_diag(field, polys.iter())
}

/// `M = [[I, I], [C(g) - I, -I]]` with `M^2 = D(C(g), C(g))` and
/// characteristic polynomial `g(X^2)`; returns `(M, Q1, Q2)`.
fn square_root_gadget(g: &Poly) -> Result<(Mat, DiffWitness)> {
    let f = g.field();
    let m = g.deg();
    let c = Mat::companion(g)?;
    let id = Mat::identity(f, m);
    let mut q1 = Mat::zeros(f, 2 * m, 2 * m);
    q1.set_block(0, 0, &id);
    q1.set_block(0, m, &id);
    let mut q2 = Mat::zeros(f, 2 * m, 2 * m);
    q2.set_block(m, 0, &id.sub(&c)?);
    q2.set_block(m, m, &id);
    let w = DiffWitness::new(q1, q2)?;
    Ok((w.difference(), w))
}

/// `g` with `g(X^2) = h` for an even polynomial `h`.
fn even_part(h: &Poly) -> Option<Poly> {
    if h.coeffs().iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
        return None;
    }
    Some(Poly::new(h.field(), h.coeffs().iter().step_by(2).copied().collect()))
}

/// `g` with `g(X^2) = h^2` in characteristic 2.
fn frobenius_square_root(h: &Poly) -> Poly {
    let f = h.field();
    h.map_coeffs(|c| f.mul(c, c))
}

struct Canonical {
    field: Field,
    blocks: Vec<PrimaryBlock>,
    offsets: Vec<usize>,
    form: Mat,
    q1: Mat,
    q2: Mat,
}

impl Canonical {
    fn new(field: &Field, blocks: Vec<PrimaryBlock>) -> Result<Canonical> {
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut n = 0;
        for b in &blocks {
            offsets.push(n);
            n += b.size();
        }
        let polys: Vec<Poly> = blocks.iter().map(PrimaryBlock::poly).collect();
        let form = companion_diag(field, polys.iter())?;
        Ok(Canonical {
            field: field.clone(),
            blocks,
            offsets,
            form,
            q1: Mat::zeros(field, n, n),
            q2: Mat::zeros(field, n, n),
        })
    }

    fn indices(&self, blocks: &[usize]) -> Vec<usize> {
        blocks
            .iter()
            .flat_map(|&b| self.offsets[b]..self.offsets[b] + self.blocks[b].size())
            .collect()
    }

    /// Transports a witness of `m` onto the principal block of the given
    /// primary blocks.
    fn place(&mut self, blocks: &[usize], m: &Mat, w: &DiffWitness, what: &str) -> Result<()> {
        let idx = self.indices(blocks);
        let target = self.form.gather(&idx);
        let t = similarity_witness(m, &target).map_err(gadget_failure(what))?;
        self.q1.scatter(&idx, &t.apply(w.q1())?);
        self.q2.scatter(&idx, &t.apply(w.q2())?);
        Ok(())
    }

    fn place_direct(&mut self, block: usize, q1: &Mat, q2: &Mat) {
        let idx = self.indices(&[block]);
        self.q1.scatter(&idx, q1);
        self.q2.scatter(&idx, q2);
    }

    fn nilpotent(&mut self, block: usize) {
        // the companion matrix of X^e is the lower shift, the transpose of J_e
        let (q1, q2) = jordan_recipe(&self.field, self.blocks[block].size());
        self.place_direct(block, &q1.transpose(), &q2.transpose());
    }
}

fn unsupported(msg: impl Into<String>) -> Error {
    Error::UnsupportedStructure(msg.into())
}

fn sorted_by_exponent(blocks: &[PrimaryBlock], idx: &[usize]) -> Vec<usize> {
    let mut v = idx.to_vec();
    v.sort_by(|&x, &y| blocks[y].exponent.cmp(&blocks[x].exponent).then(x.cmp(&y)));
    v
}

fn build_canonical(c: &mut Canonical) -> Result<()> {
    let f = c.field.clone();
    let char2 = f.p() == 2;
    let x = linear(&f, 0);
    let plus = linear(&f, 1);
    let minus = linear(&f, -1);
    let mut groups: BTreeMap<Poly, Vec<usize>> = BTreeMap::new();
    for (i, b) in c.blocks.iter().enumerate() {
        groups.entry(b.factor.clone()).or_default().push(i);
    }
    let get = |q: &Poly| groups.get(q).cloned().unwrap_or_default();

    for i in get(&x) {
        c.nilpotent(i);
    }

    if char2 {
        for i in get(&plus) {
            // M - I is nilpotent: M = Q1 + (I - Q2), a difference in characteristic 2
            let e = c.blocks[i].exponent;
            let (n1, n2) = jordan_recipe(&f, e);
            let nil = Mat::from_fn(&f, e, e, |r, s| if s == r + 1 { Elem::ONE } else { Elem::ZERO });
            let m = nil.add_scalar(Elem::ONE)?;
            let w = DiffWitness::new(n1, Mat::identity(&f, e).sub(&n2)?)?;
            debug_assert_eq!(w.difference(), m);
            c.place(&[i], &m, &w, "unipotent block")?;
        }
    } else {
        let ups = sorted_by_exponent(&c.blocks, &get(&plus));
        let downs = sorted_by_exponent(&c.blocks, &get(&minus));
        for k in 0..ups.len().max(downs.len()) {
            let (u, d) = (ups.get(k).copied(), downs.get(k).copied());
            let a = u.map_or(0, |i| c.blocks[i].exponent);
            let b = d.map_or(0, |i| c.blocks[i].exponent);
            if a.abs_diff(b) > 1 {
                return Err(unsupported(format!("blocks of sizes {a} at 1 and {b} at -1 do not pair")));
            }
            let (m, w) = witness_pm1_pair(&f, a, b)?;
            let members: Vec<usize> = u.into_iter().chain(d).collect();
            c.place(&members, &m, &w, "plus/minus one pair")?;
        }
    }

    for (q, idx) in &groups {
        if q == &x || q == &plus || q == &minus {
            continue;
        }
        if char2 {
            for &i in idx {
                let e = c.blocks[i].exponent;
                if e % 2 != 0 {
                    return Err(unsupported("odd block at an eigenvalue outside {0, 1}"));
                }
                let g = frobenius_square_root(&q.pow(e / 2));
                let (m, w) = square_root_gadget(&g)?;
                c.place(&[i], &m, &w, "square-root gadget")?;
            }
            continue;
        }
        let mirror = q.substitute_linear(f.from_int(-1), Elem::ZERO)?;
        if &mirror == q {
            for &i in idx {
                let h = q.pow(c.blocks[i].exponent);
                let g = even_part(&h).ok_or_else(|| unsupported("self-paired factor is not even"))?;
                let (m, w) = square_root_gadget(&g)?;
                c.place(&[i], &m, &w, "square-root gadget")?;
            }
            continue;
        }
        if &mirror < q {
            continue;
        }
        let mine = sorted_by_exponent(&c.blocks, idx);
        let theirs = sorted_by_exponent(&c.blocks, &get(&mirror));
        if mine.len() != theirs.len() {
            return Err(unsupported("blocks at opposite eigenvalues do not pair"));
        }
        for (&i, &j) in mine.iter().zip(&theirs) {
            let e = c.blocks[i].exponent;
            if c.blocks[j].exponent != e {
                return Err(unsupported("blocks at opposite eigenvalues differ in size"));
            }
            let h = q.pow(e).mul(&mirror.pow(e));
            let g = even_part(&h).ok_or_else(|| Error::Internal("paired product is not even".into()))?;
            let (m, w) = square_root_gadget(&g)?;
            c.place(&[i, j], &m, &w, "square-root gadget")?;
        }
    }
    Ok(())
}

/// Idempotents `Q1`, `Q2` with `Q1 - Q2 = A`; fails with
/// `UnsupportedStructure` exactly when no such pair exists.
pub fn witness_diff(a: &Mat, seed: u64) -> Result<DiffWitness> {
    let n = a.require_square()?;
    let f = a.field();
    if n == 0 {
        return DiffWitness::new(a.clone(), a.clone());
    }
    let (blocks, t) = primary_form(a, seed)?;
    let mut c = Canonical::new(f, blocks)?;
    build_canonical(&mut c)?;
    let back = t.inverse();
    let w = DiffWitness::new(back.apply(&c.q1)?, back.apply(&c.q2)?)?;
    if &w.difference() != a {
        return Err(Error::Internal("difference witness does not reproduce the input".into()));
    }
    Ok(w)
}

/// Idempotents `P`, `Q` with `P + Q = A`, from a difference witness of
/// `A - I`.
pub fn witness_sum(a: &Mat, seed: u64) -> Result<(Mat, Mat)> {
    let n = a.require_square()?;
    let shifted = a.add_scalar(a.field().neg(Elem::ONE))?;
    let w = witness_diff(&shifted, seed)?;
    let rest = Mat::identity(a.field(), n).sub(w.q2())?;
    if &w.q1().add(&rest)? != a {
        return Err(Error::Internal("sum witness does not reproduce the input".into()));
    }
    Ok((w.q1().clone(), rest))
}

/// Families of two-idempotent certificates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Nilpotent,
    Pm1Blocks,
    ScalarPairs,
    Sum2Shift,
}

/// Two-part certificate for `a`: `(+Q1, -Q2)` for difference families and
/// `(+P, +Q)` for the sum family.
pub fn witness_family(a: &Mat, family: Family, seed: u64) -> Result<DecompCert> {
    let terms = match family {
        Family::Nilpotent => {
            let w = witness_nilpotent_diff(a).map_err(|e| match e {
                Error::NotNilpotent => unsupported("matrix is not nilpotent"),
                e => e,
            })?;
            vec![(Sign::Plus, w.q1), (Sign::Minus, w.q2)]
        }
        Family::Pm1Blocks | Family::ScalarPairs => {
            let w = witness_diff(a, seed)?;
            vec![(Sign::Plus, w.q1), (Sign::Minus, w.q2)]
        }
        Family::Sum2Shift => {
            let (p, q) = witness_sum(a, seed)?;
            vec![(Sign::Plus, p), (Sign::Plus, q)]
        }
    };
    DecompCert::build(a, terms, "two_idem", seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::SimTransform;
    use proptest::prelude::*;

    fn fp(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn intertwining_examples() {
        use IntertwineMode::*;
        assert!(intertwined(&[], &[1], Corrected));
        assert!(!intertwined(&[], &[1], Literal));
        assert!(!intertwined(&[1, 1], &[], Corrected));
        assert!(!intertwined(&[1, 1], &[], Literal));
        assert!(intertwined(&[], &[], Corrected));
        assert!(intertwined(&[], &[], Literal));
    }

    #[test]
    fn decision_examples() {
        let f3 = fp(3);
        let nil = Mat::from_ints(&f3, &[&[0, 1, 2], &[0, 0, 1], &[0, 0, 0]]);
        assert!(decide_diff2(&nil).unwrap());
        let d = Mat::from_ints(&f3, &[&[0, 0], &[0, -1]]);
        assert!(decide_diff2(&d).unwrap());
        assert!(!decide_diff2_mode(&d, IntertwineMode::Literal).unwrap());
        let j = Mat::from_ints(&f3, &[&[1, 1], &[0, 1]]);
        assert!(!decide_diff2(&j).unwrap());

        let f4 = Field::new(2, 2, None).unwrap();
        let a = Mat::from_fn(&f4, 1, 1, |_, _| f4.generator());
        assert!(!decide_diff2(&a).unwrap());

        let f5 = fp(5);
        assert!(decide_sum2(&Mat::identity(&f5, 3)).unwrap());
        assert!(decide_sum2(&Mat::from_ints(&f5, &[&[0, 0], &[0, 2]])).unwrap());
        assert!(!decide_sum2(&Mat::from_ints(&f5, &[&[4]])).unwrap());
    }

    #[test]
    fn nilpotent_recipes() {
        let f = fp(7);
        let n = Mat::from_ints(&f, &[&[0, 1], &[0, 0]]);
        let w = witness_nilpotent_diff(&n).unwrap();
        assert_eq!(w.q1(), &Mat::from_ints(&f, &[&[1, 1], &[0, 0]]));
        assert_eq!(w.q2(), &Mat::from_ints(&f, &[&[1, 0], &[0, 0]]));

        let z = Mat::zeros(&f, 3, 3);
        let w = witness_nilpotent_diff(&z).unwrap();
        assert!(w.q1().is_zero() && w.q2().is_zero());

        let j3 = Mat::from_ints(&f, &[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let w = witness_nilpotent_diff(&j3).unwrap();
        assert_eq!(w.q1(), &Mat::from_ints(&f, &[&[1, 1, 0], &[0, 0, 0], &[0, 0, 1]]));
        assert_eq!(w.q2(), &Mat::from_ints(&f, &[&[1, 0, 0], &[0, 0, -1], &[0, 0, 1]]));

        assert_eq!(witness_nilpotent_diff(&Mat::identity(&f, 2)).err(), Some(Error::NotNilpotent));
    }

    #[test]
    fn pm1_pairs() {
        for p in [3, 5, 7] {
            let f = fp(p);
            for a in 0..6usize {
                for b in a.saturating_sub(1)..=a + 1 {
                    if a + b == 0 {
                        continue;
                    }
                    let (m, w) = witness_pm1_pair(&f, a, b).unwrap();
                    assert_eq!(w.difference(), m);
                }
            }
        }
        let (m, w) = witness_pm1_pair(&fp(5), 0, 1).unwrap();
        assert_eq!(m, Mat::from_ints(&fp(5), &[&[-1]]));
        assert!(w.q1().is_zero());
        assert!(matches!(witness_pm1_pair(&fp(5), 3, 1), Err(Error::SizeConstraintViolated(_))));
    }

    #[test]
    fn family_examples() {
        let f5 = fp(5);
        // companion of X^{n-1}(X+1)
        let x = Poly::x_pow(&f5, 1);
        let c = Mat::companion(&x.pow(3).mul(&Poly::from_ints(&f5, &[1, 1]))).unwrap();
        let cert = witness_family(&c, Family::Pm1Blocks, 0).unwrap();
        assert!(cert.verify(&c));

        let j = Mat::from_ints(&f5, &[&[1, 1, 0], &[0, 1, 1], &[0, 0, 1]]);
        let cert = witness_family(&j, Family::Sum2Shift, 0).unwrap();
        assert_eq!(cert.signs, vec![Sign::Plus, Sign::Plus]);

        let d = Mat::diag(&f5, &[f5.from_int(2), f5.from_int(-2), Elem::ZERO]);
        assert!(witness_family(&d, Family::ScalarPairs, 0).unwrap().verify(&d));

        let bad = Mat::from_ints(&f5, &[&[1, 1], &[0, 1]]);
        assert!(matches!(witness_family(&bad, Family::Pm1Blocks, 0), Err(Error::UnsupportedStructure(_))));
    }

    #[test]
    fn paired_and_self_paired_factors() {
        let f3 = fp(3);
        // X^2 + 1 is self-paired; (X^2 + 1)^2 as a single block
        let q = Poly::from_ints(&f3, &[1, 0, 1]);
        let a = Mat::companion(&q.pow(2)).unwrap();
        assert!(decide_diff2(&a).unwrap());
        assert!(witness_diff(&a, 0).is_ok());

        let f7 = fp(7);
        // roots 2 and -2 paired, plus a mismatched pair
        let d = Mat::diag(&f7, &[f7.from_int(2), f7.from_int(-2), f7.from_int(3)]);
        assert!(!decide_diff2(&d).unwrap());
        assert!(witness_diff(&d, 0).is_err());

        let f4 = Field::new(2, 2, None).unwrap();
        let g = f4.generator();
        let a = Mat::from_fn(&f4, 2, 2, |i, j| if i == j { g } else if j == i + 1 { Elem::ONE } else { Elem::ZERO });
        assert!(decide_diff2(&a).unwrap());
        assert!(witness_diff(&a, 0).unwrap().difference() == a);
    }

    fn conj_strategy(p: u64, n: usize) -> impl Strategy<Value = (Mat, Mat)> {
        (proptest::collection::vec(0..p, n * n), proptest::collection::vec(0..p, n * n)).prop_map(
            move |(a, s)| {
                let f = Field::prime(p).unwrap();
                let a = Mat::from_fn(&f, n, n, |i, j| Elem(a[i * n + j] as u32));
                let s = Mat::from_fn(&f, n, n, |i, j| Elem(s[i * n + j] as u32));
                (a, s)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn witness_exists_iff_decided((a, _) in conj_strategy(5, 3)) {
            let decided = decide_diff2(&a).unwrap();
            let built = witness_diff(&a, 0);
            prop_assert_eq!(decided, built.is_ok());
            let (sd, ss) = (decide_sum2(&a).unwrap(), witness_sum(&a, 0));
            prop_assert_eq!(sd, ss.is_ok());
        }

        #[test]
        fn decisions_are_similarity_invariant((a, s) in conj_strategy(3, 3)) {
            prop_assume!(s.inverse().is_some());
            let t = SimTransform::from_matrix(s).unwrap();
            let b = t.apply(&a).unwrap();
            prop_assert_eq!(decide_diff2(&a).unwrap(), decide_diff2(&b).unwrap());
            prop_assert_eq!(decide_sum2(&a).unwrap(), decide_sum2(&b).unwrap());
        }

        #[test]
        fn sum_is_shifted_difference((a, _) in conj_strategy(7, 3)) {
            let shifted = a.add_scalar(a.field().neg(Elem::ONE)).unwrap();
            prop_assert_eq!(decide_sum2(&a).unwrap(), decide_diff2(&shifted).unwrap());
        }

        #[test]
        fn char2_sum_equals_difference((a, _) in conj_strategy(2, 4)) {
            prop_assert_eq!(decide_sum2(&a).unwrap(), decide_diff2(&a).unwrap());
        }
    }
}
