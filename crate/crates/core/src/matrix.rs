//! Exact dense matrices over a finite field.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::poly::Poly;

/// Row-major dense matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<u32> = self.row(i).iter().map(|e| e.code()).collect();
            writeln!(f, "  {:?}", row)?;
        }
        Ok(())
    }
}

/// Result of Gauss–Jordan elimination.
#[derive(Clone, Debug)]
pub struct Elimination {
    pub rref: Mat,
    pub rank: usize,
    /// Pivot column of each nonzero row of `rref`.
    pub pivots: Vec<usize>,
    /// Basis of the right kernel, one column vector per entry.
    pub kernel_basis: Vec<Vec<Elem>>,
    /// Invertible matrix with `transform * A = rref`.
    pub transform: Mat,
}

/// Block constructors.
#[derive(Clone, Debug)]
pub enum BlockSpec {
    /// Block-diagonal matrix of the given blocks.
    Diag(Vec<Mat>),
    /// `H_{n,p}`: `n x p`, a single 1 in the first row and last column.
    H(usize, usize),
    /// `F_k = D(0, .., 0, 1)`.
    F(usize),
    /// Companion matrix of a monic nonconstant polynomial.
    Companion(Poly),
}

impl Mat {
    pub fn new(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Mat> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Mat { field: field.clone(), rows, cols, data })
    }

    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Mat {
        Mat { field: field.clone(), rows, cols, data: vec![Elem::ZERO; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Mat {
        Mat::scalar(field, n, Elem::ONE)
    }

    pub fn scalar(field: &Field, n: usize, c: Elem) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, c);
        }
        m
    }

    pub fn diag(field: &Field, entries: &[Elem]) -> Mat {
        let n = entries.len();
        let mut m = Mat::zeros(field, n, n);
        for (i, &c) in entries.iter().enumerate() {
            m.set(i, i, c);
        }
        m
    }

    pub fn from_fn(field: &Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elem) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { field: field.clone(), rows, cols, data }
    }

    /// Builds a matrix from rows of integers (mapped into the prime subfield).
    pub fn from_ints(field: &Field, rows: &[&[i64]]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        Mat::from_fn(field, r, c, |i, j| field.from_int(rows[i][j]))
    }

    /// Builds a matrix from rows of element codes.
    pub fn from_codes(field: &Field, rows: &[Vec<u32>]) -> Result<Mat> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::ShapeMismatch("ragged rows".into()));
            }
            for &x in row {
                data.push(field.elem(x as u64)?);
            }
        }
        Mat::new(field, r, c, data)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn from_columns(field: &Field, rows: usize, cols: &[Vec<Elem>]) -> Mat {
        Mat::from_fn(field, rows, cols.len(), |i, j| cols[j][i])
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.rows == self.cols {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    fn same_shape(&self, other: &Mat) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.same_shape(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Mat { field: f.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.same_shape(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Mat { field: f.clone(), rows: self.rows, cols: self.cols, data })
    }

    pub fn neg(&self) -> Mat {
        let f = &self.field;
        Mat { data: self.data.iter().map(|&a| f.neg(a)).collect(), ..self.clone() }
    }

    pub fn scale(&self, s: Elem) -> Mat {
        let f = &self.field;
        Mat { data: self.data.iter().map(|&a| f.mul(a, s)).collect(), ..self.clone() }
    }

    /// `self + c.I`.
    pub fn add_scalar(&self, c: Elem) -> Result<Mat> {
        let n = self.require_square()?;
        let mut m = self.clone();
        for i in 0..n {
            m.set(i, i, self.field.add(m.get(i, i), c));
        }
        Ok(m)
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.rows * other.cols];
        if f.is_prime_field() {
            // accumulate in u64 and reduce once per entry
            let p = f.p();
            let limit = u64::MAX / 2;
            for i in 0..self.rows {
                let mut acc = vec![0u64; other.cols];
                for k in 0..self.cols {
                    let a = self.get(i, k).code() as u64;
                    if a == 0 {
                        continue;
                    }
                    let row = other.row(k);
                    for (j, &b) in row.iter().enumerate() {
                        acc[j] += a * b.code() as u64;
                        if acc[j] > limit {
                            acc[j] %= p;
                        }
                    }
                }
                for j in 0..other.cols {
                    out[i * other.cols + j] = Elem((acc[j] % p) as u32);
                }
            }
        } else {
            for i in 0..self.rows {
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let row = other.row(k);
                    let dst = &mut out[i * other.cols..(i + 1) * other.cols];
                    for (d, &b) in dst.iter_mut().zip(row) {
                        *d = f.add(*d, f.mul(a, b));
                    }
                }
            }
        }
        Ok(Mat { field: f.clone(), rows: self.rows, cols: other.cols, data: out })
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
            })
            .collect()
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut out = vec![Elem::ZERO; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (o, &b) in out.iter_mut().zip(self.row(i)) {
                *o = f.add(*o, f.mul(a, b));
            }
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(&self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn trace(&self) -> Result<Elem> {
        let n = self.require_square()?;
        Ok((0..n).fold(Elem::ZERO, |acc, i| self.field.add(acc, self.get(i, i))))
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(&self.field, rows, cols, |i, j| self.get(r0 + i, c0 + j))
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Mat) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j));
            }
        }
    }

    /// Scatters a square matrix onto the index set `idx` of a larger one.
    pub fn scatter(&mut self, idx: &[usize], block: &Mat) {
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                self.set(i, j, block.get(a, b));
            }
        }
    }

    /// Principal submatrix on an index set.
    pub fn gather(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(&self.field, idx.len(), idx.len(), |a, b| self.get(idx[a], idx[b]))
    }

    pub fn block_diag(blocks: &[Mat]) -> Result<Mat> {
        let first = blocks.first().ok_or(Error::EmptyBlockList)?;
        let field = first.field.clone();
        let (mut r, mut c) = (0, 0);
        for b in blocks {
            if b.field != field {
                return Err(Error::FieldMismatch);
            }
            r += b.rows;
            c += b.cols;
        }
        let mut m = Mat::zeros(&field, r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        Ok(m)
    }

    pub fn h_block(field: &Field, n: usize, p: usize) -> Mat {
        let mut m = Mat::zeros(field, n, p);
        if n > 0 && p > 0 {
            m.set(0, p - 1, Elem::ONE);
        }
        m
    }

    pub fn f_block(field: &Field, k: usize) -> Mat {
        let mut m = Mat::zeros(field, k, k);
        if k > 0 {
            m.set(k - 1, k - 1, Elem::ONE);
        }
        m
    }

    /// Companion matrix: unit subdiagonal, last column `(a_0, .., a_{n-1})`
    /// for `P = X^n - sum a_k X^k`.
    pub fn companion(p: &Poly) -> Result<Mat> {
        let n = match p.degree() {
            Some(n) if n >= 1 && p.is_monic() => n,
            _ => return Err(Error::NotMonic),
        };
        let f = p.field();
        let mut m = Mat::zeros(f, n, n);
        for i in 1..n {
            m.set(i, i - 1, Elem::ONE);
        }
        for i in 0..n {
            m.set(i, n - 1, f.neg(p.coeff(i)));
        }
        Ok(m)
    }

    pub fn block_build(spec: &BlockSpec, field: &Field) -> Result<Mat> {
        match spec {
            BlockSpec::Diag(blocks) => Mat::block_diag(blocks),
            BlockSpec::H(n, p) => Ok(Mat::h_block(field, *n, *p)),
            BlockSpec::F(k) => Ok(Mat::f_block(field, *k)),
            BlockSpec::Companion(p) => Mat::companion(p),
        }
    }

    /// Permutation matrix `P` with `P e_j = e_{perm[j]}`.
    pub fn permutation(field: &Field, perm: &[usize]) -> Mat {
        let n = perm.len();
        let mut m = Mat::zeros(field, n, n);
        for (j, &i) in perm.iter().enumerate() {
            m.set(i, j, Elem::ONE);
        }
        m
    }

    pub fn eliminate(&self) -> Elimination {
        let f = &self.field;
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.clone();
        let mut t = Mat::identity(f, rows);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(piv) = (r..rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(piv, r);
            t.swap_rows(piv, r);
            let inv = f.inv_nonzero(a.get(r, c));
            a.scale_row(r, inv);
            t.scale_row(r, inv);
            for i in 0..rows {
                if i == r {
                    continue;
                }
                let m = a.get(i, c);
                if m.is_zero() {
                    continue;
                }
                a.row_axpy(i, r, f.neg(m));
                t.row_axpy(i, r, f.neg(m));
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        let mut kernel_basis = Vec::new();
        let mut is_pivot = vec![false; cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        for free in (0..cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Elem::ZERO; cols];
            v[free] = Elem::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(a.get(row, free));
            }
            kernel_basis.push(v);
        }
        Elimination { rref: a, rank, pivots, kernel_basis, transform: t }
    }

    pub fn rank(&self) -> usize {
        let f = &self.field;
        let mut a = self.clone();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(piv) = (r..self.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(piv, r);
            let inv = f.inv_nonzero(a.get(r, c));
            a.scale_row(r, inv);
            for i in r + 1..self.rows {
                let m = a.get(i, c);
                if !m.is_zero() {
                    a.row_axpy(i, r, f.neg(m));
                }
            }
            r += 1;
        }
        r
    }

    pub fn inverse(&self) -> Option<Mat> {
        let n = self.require_square().ok()?;
        let e = self.eliminate();
        if e.rank == n {
            Some(e.transform)
        } else {
            None
        }
    }

    /// Some solution of `self * x = b`, if one exists.
    pub fn solve(&self, b: &[Elem]) -> Option<Vec<Elem>> {
        let e = self.eliminate();
        let tb = e.transform.mul_vec(b);
        if tb[e.rank..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut x = vec![Elem::ZERO; self.cols];
        for (row, &pc) in e.pivots.iter().enumerate() {
            x[pc] = tb[row];
        }
        Some(x)
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn scale_row(&mut self, r: usize, s: Elem) {
        let f = self.field.clone();
        for x in &mut self.data[r * self.cols..(r + 1) * self.cols] {
            *x = f.mul(*x, s);
        }
    }

    /// `row[dst] += s * row[src]`.
    fn row_axpy(&mut self, dst: usize, src: usize, s: Elem) {
        let f = self.field.clone();
        let c = self.cols;
        for j in 0..c {
            let v = self.data[src * c + j];
            if !v.is_zero() {
                self.data[dst * c + j] = f.add(self.data[dst * c + j], f.mul(s, v));
            }
        }
    }

    /// `col[dst] += s * col[src]`.
    fn col_axpy(&mut self, dst: usize, src: usize, s: Elem) {
        let f = self.field.clone();
        for i in 0..self.rows {
            let v = self.get(i, src);
            if !v.is_zero() {
                let cur = self.get(i, dst);
                self.set(i, dst, f.add(cur, f.mul(s, v)));
            }
        }
    }

    /// Characteristic polynomial via similarity reduction to Hessenberg form.
    pub fn char_poly(&self) -> Result<Poly> {
        let n = self.require_square()?;
        let f = &self.field;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = (j + 1..n).find(|&i| !h.get(i, j).is_zero()) else {
                continue;
            };
            h.swap_rows(piv, j + 1);
            h.swap_cols(piv, j + 1);
            let inv = f.inv_nonzero(h.get(j + 1, j));
            for r in j + 2..n {
                let m = f.mul(h.get(r, j), inv);
                if m.is_zero() {
                    continue;
                }
                h.row_axpy(r, j + 1, f.neg(m));
                h.col_axpy(j + 1, r, m);
            }
        }
        Ok(hessenberg_ladder(&h).pop().expect("ladder has n+1 entries"))
    }

    /// Characteristic polynomial of a unit-subdiagonal Hessenberg matrix
    /// together with the ladder of leading principal characteristic
    /// polynomials `chi_0 = 1, .., chi_n`.
    pub fn hessenberg_charpoly(&self) -> Result<(Poly, Vec<Poly>)> {
        self.require_square()?;
        self.check_good_cyclic()?;
        let ladder = hessenberg_ladder(self);
        Ok((ladder.last().cloned().expect("nonempty"), ladder))
    }

    fn check_good_cyclic(&self) -> Result<()> {
        let n = self.rows;
        for i in 0..n {
            for j in 0..i {
                let want = if j + 1 == i { Elem::ONE } else { Elem::ZERO };
                if self.get(i, j) != want {
                    return Err(Error::NotUnitSubdiagonalHessenberg { row: i + 1, col: j + 1 });
                }
            }
        }
        Ok(())
    }

    pub fn is_good_cyclic(&self) -> Result<bool> {
        self.require_square()?;
        Ok(self.check_good_cyclic().is_ok())
    }

    pub fn is_idempotent(&self) -> Result<bool> {
        self.require_square()?;
        Ok(&self.mul(self)? == self)
    }

    /// `P(self)` by Horner's rule.
    pub fn eval_poly(&self, p: &Poly) -> Result<Mat> {
        let n = self.require_square()?;
        let mut acc = Mat::zeros(&self.field, n, n);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(self)?.add_scalar(c)?;
        }
        Ok(acc)
    }

    /// `P(self) v` without forming `P(self)`.
    pub fn eval_poly_vec(&self, p: &Poly, v: &[Elem]) -> Vec<Elem> {
        let f = &self.field;
        let mut acc = vec![Elem::ZERO; v.len()];
        for &c in p.coeffs().iter().rev() {
            acc = self.mul_vec(&acc);
            for (a, &x) in acc.iter_mut().zip(v) {
                *a = f.add(*a, f.mul(c, x));
            }
        }
        acc
    }

    pub fn pow(&self, mut e: usize) -> Result<Mat> {
        let n = self.require_square()?;
        let mut base = self.clone();
        let mut acc = Mat::identity(&self.field, n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

/// `chi_k = (X - h_kk) chi_{k-1} - sum_{i<k} h_ik (prod of subdiagonal) chi_{i-1}`.
fn hessenberg_ladder(h: &Mat) -> Vec<Poly> {
    let n = h.rows;
    let f = &h.field;
    let x = Poly::x_pow(f, 1);
    let mut ladder = vec![Poly::one(f)];
    for k in 0..n {
        let mut next = x.sub(&Poly::constant(f, h.get(k, k))).mul(&ladder[k]);
        let mut prod = Elem::ONE;
        for i in (0..k).rev() {
            prod = f.mul(prod, h.get(i + 1, i));
            if prod.is_zero() {
                break;
            }
            let c = f.mul(h.get(i, k), prod);
            if !c.is_zero() {
                next = next.sub(&ladder[i].scale(c));
            }
        }
        ladder.push(next);
    }
    ladder
}
