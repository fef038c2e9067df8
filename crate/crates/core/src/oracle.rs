//! Exhaustive ground truth on tiny matrix spaces.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::matrix::Mat;
use crate::pipelines::Sign;

/// Bits of state allowed when enumerating idempotents (`n^2 log2 q`).
pub const IDEMPOTENT_BUDGET_BITS: f64 = 36.0;
/// Largest matrix space an exhaustive table will index.
pub const TABLE_BUDGET: u64 = 1 << 20;

const UNREACHED: u8 = u8::MAX;

fn state_bits(field: &Field, n: usize) -> f64 {
    (n * n) as f64 * (field.order() as f64).log2()
}

fn space_size(field: &Field, n: usize) -> Result<u64> {
    let q = field.order();
    let mut size: u64 = 1;
    for _ in 0..n * n {
        size = size
            .checked_mul(q)
            .filter(|&s| s <= TABLE_BUDGET)
            .ok_or_else(|| Error::BudgetExceeded(format!("{}^{} matrices", q, n * n)))?;
    }
    Ok(size)
}

/// Mixed-radix packing of the entries, row-major, first entry least
/// significant.
pub fn digest(a: &Mat) -> u64 {
    let q = a.field().order();
    a.data().iter().rev().fold(0u64, |acc, e| acc * q + e.code() as u64)
}

pub fn undigest(field: &Field, n: usize, mut d: u64) -> Mat {
    let q = field.order();
    Mat::from_fn(field, n, n, |_, _| {
        let c = (d % q) as u32;
        d /= q;
        Elem(c)
    })
}

/// Every matrix of `M_n(F_q)`, in digest order.
pub fn all_matrices(field: &Field, n: usize) -> Result<impl Iterator<Item = Mat> + '_> {
    let size = space_size(field, n)?;
    Ok((0..size).map(move |d| undigest(field, n, d)))
}

/// All `r`-dimensional subspaces of `F_q^n`, as reduced row-echelon bases.
fn subspaces(field: &Field, n: usize, r: usize) -> Vec<Vec<Vec<Elem>>> {
    let mut out = Vec::new();
    let elems: Vec<Elem> = field.elements().collect();
    let mut pivots = Vec::new();
    fn choose(n: usize, r: usize, start: usize, cur: &mut Vec<usize>, all: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            all.push(cur.clone());
            return;
        }
        for c in start..n {
            cur.push(c);
            choose(n, r, c + 1, cur, all);
            cur.pop();
        }
    }
    choose(n, r, 0, &mut Vec::new(), &mut pivots);
    for piv in pivots {
        // free slots: (row i, column c) with c > piv[i] and c not a pivot
        let free: Vec<(usize, usize)> = (0..r)
            .flat_map(|i| {
                let piv = &piv;
                (piv[i] + 1..n).filter(move |c| !piv.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let total = (elems.len() as u64).pow(free.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![vec![Elem::ZERO; n]; r];
            for (i, &c) in piv.iter().enumerate() {
                rows[i][c] = Elem::ONE;
            }
            for &(i, c) in &free {
                rows[i][c] = elems[(code % elems.len() as u64) as usize];
                code /= elems.len() as u64;
            }
            out.push(rows);
        }
    }
    out
}

/// All idempotents of `M_n(F_q)`: one per (image, complementary kernel).
pub fn enumerate_idempotents(n: usize, field: &Field) -> Result<Vec<Mat>> {
    if state_bits(field, n) > IDEMPOTENT_BUDGET_BITS {
        return Err(Error::BudgetExceeded(format!("{:.1} bits of state", state_bits(field, n))));
    }
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for r in 0..=n {
        let images = subspaces(field, n, r);
        let kernels = subspaces(field, n, n - r);
        for u in &images {
            for w in &kernels {
                let cols: Vec<Vec<Elem>> = u.iter().chain(w.iter()).cloned().collect();
                let basis = Mat::from_columns(field, n, &cols);
                let Some(inv) = basis.inverse() else { continue };
                let mut diag = vec![Elem::ZERO; n];
                diag[..r].fill(Elem::ONE);
                let p = basis.mul(&Mat::diag(field, &diag))?.mul(&inv)?;
                debug_assert!(p.is_idempotent()?);
                if seen.insert(p.data().to_vec()) {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

/// Breadth-first distances from 0 over "add one idempotent" edges.
#[derive(Clone, Debug)]
pub struct OracleTable {
    field: Field,
    n: usize,
    cap: usize,
    dist: Vec<u8>,
}

fn add_digits(field: &Field, a: &[u32], b: &[u32], q: u64) -> u64 {
    a.iter()
        .zip(b)
        .rev()
        .fold(0u64, |acc, (&x, &y)| acc * q + field.add(Elem(x), Elem(y)).code() as u64)
}

fn digits(field: &Field, n: usize, mut d: u64) -> Vec<u32> {
    let q = field.order();
    (0..n * n)
        .map(|_| {
            let c = (d % q) as u32;
            d /= q;
            c
        })
        .collect()
}

impl OracleTable {
    pub fn build(field: &Field, n: usize, cap: usize) -> Result<OracleTable> {
        let size = space_size(field, n)?;
        let idem: Vec<Vec<u32>> = enumerate_idempotents(n, field)?
            .iter()
            .map(|m| m.data().iter().map(|e| e.code()).collect())
            .collect();
        let q = field.order();
        let mut dist = vec![UNREACHED; size as usize];
        dist[0] = 0;
        let mut frontier = vec![0u64];
        for layer in 1..=cap.min(UNREACHED as usize - 1) {
            let mut next = Vec::new();
            for &d in &frontier {
                let a = digits(field, n, d);
                for p in &idem {
                    let s = add_digits(field, &a, p, q);
                    if dist[s as usize] == UNREACHED {
                        dist[s as usize] = layer as u8;
                        next.push(s);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            frontier = next;
        }
        Ok(OracleTable { field: field.clone(), n, cap, dist })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Least number of idempotents summing to `a`, if at most `cap`.
    pub fn min_count(&self, a: &Mat) -> Option<usize> {
        assert_eq!((a.rows(), a.cols()), (self.n, self.n), "matrix size differs from the table");
        self.min_count_digest(digest(a))
    }

    pub fn min_count_digest(&self, d: u64) -> Option<usize> {
        match self.dist[d as usize] {
            UNREACHED => None,
            c => Some(c as usize),
        }
    }

    pub fn len(&self) -> usize {
        self.dist.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dist.is_empty()
    }

    /// `(digest, min count)` for every matrix.
    pub fn entries(&self) -> impl Iterator<Item = (u64, Option<usize>)> + '_ {
        (0..self.dist.len() as u64).map(move |d| (d, self.min_count_digest(d)))
    }

    /// Counts of matrices per minimal count; the last slot holds unreachable ones.
    pub fn histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.cap + 2];
        for &c in &self.dist {
            let slot = if c == UNREACHED { self.cap + 1 } else { c as usize };
            h[slot] += 1;
        }
        h
    }
}

pub fn min_idempotent_sum(a: &Mat, cap: usize) -> Result<Option<usize>> {
    let n = a.require_square()?;
    Ok(OracleTable::build(a.field(), n, cap)?.min_count(a))
}

/// `{ sum_i signs[i] Q_i : Q_i idempotent }` as a set of digests.
pub fn composite_set(signs: &[Sign], n: usize, field: &Field) -> Result<HashSet<u64>> {
    space_size(field, n)?;
    let q = field.order();
    let idem: Vec<Vec<u32>> = enumerate_idempotents(n, field)?
        .iter()
        .map(|m| m.data().iter().map(|e| e.code()).collect())
        .collect();
    let negated: Vec<Vec<u32>> = idem
        .iter()
        .map(|p| p.iter().map(|&x| field.neg(Elem(x)).code()).collect())
        .collect();
    let mut set: HashSet<u64> = HashSet::from([0]);
    for &s in signs {
        let terms = if s == Sign::Plus { &idem } else { &negated };
        let mut next = HashSet::new();
        for &d in &set {
            let a = digits(field, n, d);
            for p in terms {
                next.insert(add_digits(field, &a, p, q));
            }
        }
        set = next;
    }
    Ok(set)
}

/// Largest minimal count over matrices with trace in the prime subfield.
pub fn empirical_sn(n: usize, field: &Field, cap: usize) -> Result<usize> {
    let table = OracleTable::build(field, n, cap)?;
    empirical_sn_from(&table)
}

pub fn empirical_sn_from(table: &OracleTable) -> Result<usize> {
    let mut best = 0;
    for (d, count) in table.entries() {
        let a = undigest(&table.field, table.n, d);
        if !table.field.is_in_prime_subfield(a.trace()?) {
            continue;
        }
        match count {
            Some(c) => best = best.max(c),
            None => return Err(Error::CapTooLow(table.cap)),
        }
    }
    Ok(best)
}
