//! Exact linear algebra over a tower: sparse vectors, incremental echelon
//! bases and a few dense routines.

use std::collections::HashMap;

use crate::scalar::{Elem, ScalarError, Tower};

/// Sparse vector with entries sorted by index and no explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseVec {
    pub entries: Vec<(usize, Elem)>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec { entries: Vec::new() }
    }

    /// Build from unsorted terms, summing duplicates.
    pub fn from_terms(t: &Tower, mut terms: Vec<(usize, Elem)>) -> Self {
        terms.sort_by_key(|(i, _)| *i);
        let mut entries: Vec<(usize, Elem)> = Vec::with_capacity(terms.len());
        for (i, x) in terms {
            match entries.last_mut() {
                Some((j, y)) if *j == i => *y = t.add(y, &x),
                _ => entries.push((i, x)),
            }
        }
        entries.retain(|(_, x)| !x.is_zero());
        SparseVec { entries }
    }

    pub fn unit(t: &Tower, i: usize) -> Self {
        SparseVec { entries: vec![(i, t.one())] }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<&Elem> {
        self.entries.binary_search_by_key(&i, |(j, _)| *j).ok().map(|k| &self.entries[k].1)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.entries.last().map(|(i, _)| *i)
    }

    pub fn scale(&self, t: &Tower, k: &Elem) -> SparseVec {
        if k.is_zero() {
            return SparseVec::new();
        }
        SparseVec { entries: self.entries.iter().map(|(i, x)| (*i, t.mul(x, k))).collect() }
    }

    /// self + k * other
    pub fn axpy(&self, t: &Tower, k: &Elem, other: &SparseVec) -> SparseVec {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut a, mut b) = (0, 0);
        while a < self.entries.len() || b < other.entries.len() {
            let ia = self.entries.get(a).map(|e| e.0).unwrap_or(usize::MAX);
            let ib = other.entries.get(b).map(|e| e.0).unwrap_or(usize::MAX);
            if ia < ib {
                out.push(self.entries[a].clone());
                a += 1;
            } else if ib < ia {
                out.push((ib, t.mul(k, &other.entries[b].1)));
                b += 1;
            } else {
                let v = t.add(&self.entries[a].1, &t.mul(k, &other.entries[b].1));
                if !v.is_zero() {
                    out.push((ia, v));
                }
                a += 1;
                b += 1;
            }
        }
        SparseVec { entries: out }
    }

    pub fn add(&self, t: &Tower, other: &SparseVec) -> SparseVec {
        self.axpy(t, &t.one(), other)
    }

    pub fn sub(&self, t: &Tower, other: &SparseVec) -> SparseVec {
        self.axpy(t, &t.from_int(-1), other)
    }

    pub fn map_indices(&self, t: &Tower, f: impl Fn(usize) -> usize) -> SparseVec {
        SparseVec::from_terms(t, self.entries.iter().map(|(i, x)| (f(*i), x.clone())).collect())
    }

    pub fn to_dense(&self, t: &Tower, n: usize) -> Vec<Elem> {
        let mut v = vec![t.zero(); n];
        for (i, x) in &self.entries {
            v[*i] = x.clone();
        }
        v
    }
}

/// Echelon basis of a subspace with each row's pivot at its largest index,
/// normalized to 1. Reduction processes columns in decreasing order, so the
/// reduced form of a vector is canonical: its support avoids pivot columns.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivot_row: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row.contains_key(&col)
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_row.keys().copied()
    }

    /// Reduce modulo the span.
    pub fn reduce(&self, t: &Tower, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut bound = usize::MAX;
        loop {
            // largest pivot column in v below the bound
            let Some(&(col, ref coef)) = v.entries.iter().rev().find(|(i, _)| *i < bound && self.pivot_row.contains_key(i))
            else {
                return v;
            };
            let coef = t.neg(coef);
            let r = self.pivot_row[&col];
            v = v.axpy(t, &coef, &self.rows[r]);
            bound = col;
        }
    }

    /// Insert a vector; returns true when it enlarged the span.
    pub fn insert(&mut self, t: &Tower, v: &SparseVec) -> Result<bool, ScalarError> {
        let v = self.reduce(t, v);
        let Some((col, lead)) = v.entries.last().cloned() else {
            return Ok(false);
        };
        let inv = t.inv(&lead)?;
        let v = v.scale(t, &inv);
        self.pivot_row.insert(col, self.rows.len());
        self.rows.push(v);
        Ok(true)
    }

    /// Fully reduce every row against the others (reduced row echelon form).
    pub fn make_reduced(&mut self, t: &Tower) {
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.rows[r].max_index());
        for &r in &order {
            let row = self.rows[r].clone();
            let col = row.max_index().unwrap();
            let mut head = SparseVec { entries: row.entries[..row.entries.len() - 1].to_vec() };
            head = self.reduce(t, &head);
            head.entries.push((col, t.one()));
            self.rows[r] = head;
        }
    }
}

/// Rank of a list of vectors.
pub fn rank(t: &Tower, vecs: &[SparseVec]) -> Result<usize, ScalarError> {
    let mut e = Echelon::new();
    for v in vecs {
        e.insert(t, v)?;
    }
    Ok(e.rank())
}

/// Rank of a list of vectors together with a basis of their linear relations
/// (kernel of the map sending the i-th unit vector to vecs[i]).
pub fn rank_and_kernel(t: &Tower, vecs: &[SparseVec]) -> Result<(usize, Vec<SparseVec>), ScalarError> {
    // Tag columns 0..n sit below the shifted data columns, so pivots land in
    // data columns while the data part is nonzero.
    let n = vecs.len();
    let mut e = Echelon::new();
    let mut kernel = Vec::new();
    for (i, v) in vecs.iter().enumerate() {
        let mut aug = v.map_indices(t, |c| c + n);
        aug.entries.insert(0, (i, t.one()));
        let red = e.reduce(t, &aug);
        match red.max_index() {
            Some(m) if m >= n => {
                e.insert(t, &red)?;
            }
            Some(_) => kernel.push(red),
            None => unreachable!("tag entry survives reduction"),
        }
    }
    Ok((vecs.len() - kernel.len(), kernel))
}

/// Solve the dense square system `m x = rhs` (m given by rows).
pub fn solve_dense(t: &Tower, m: &[Vec<Elem>], rhs: &[Elem]) -> Result<Vec<Elem>, ScalarError> {
    let n = m.len();
    let mut a: Vec<Vec<Elem>> = m.iter().zip(rhs).map(|(r, b)| r.iter().cloned().chain([b.clone()]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(ScalarError::DivisionByZero)?;
        a.swap(col, piv);
        let inv = t.inv(&a[col][col])?;
        for j in col..=n {
            a[col][j] = t.mul(&a[col][j], &inv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in col..=n {
                let v = t.sub(&a[r][j], &t.mul(&f, &a[col][j]));
                a[r][j] = v;
            }
        }
    }
    Ok(a.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Inverse of a dense square matrix (rows).
pub fn inverse_dense(t: &Tower, m: &[Vec<Elem>]) -> Result<Vec<Vec<Elem>>, ScalarError> {
    let n = m.len();
    let mut a: Vec<Vec<Elem>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| r.iter().cloned().chain((0..n).map(|j| if i == j { t.one() } else { t.zero() })).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(ScalarError::DivisionByZero)?;
        a.swap(col, piv);
        let inv = t.inv(&a[col][col])?;
        for j in col..2 * n {
            a[col][j] = t.mul(&a[col][j], &inv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in col..2 * n {
                let v = t.sub(&a[r][j], &t.mul(&f, &a[col][j]));
                a[r][j] = v;
            }
        }
    }
    Ok(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Nullspace of a dense matrix given by rows with `ncols` columns.
pub fn nullspace_dense(t: &Tower, m: &[Vec<Elem>], ncols: usize) -> Result<Vec<Vec<Elem>>, ScalarError> {
    let mut a: Vec<Vec<Elem>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(piv) = (row..a.len()).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(row, piv);
        let inv = t.inv(&a[row][col])?;
        for j in 0..ncols {
            a[row][j] = t.mul(&a[row][j], &inv);
        }
        for r in 0..a.len() {
            if r == row || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..ncols {
                let v = t.sub(&a[r][j], &t.mul(&f, &a[row][j]));
                a[r][j] = v;
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    Ok(free
        .iter()
        .map(|&f| {
            let mut v = vec![t.zero(); ncols];
            v[f] = t.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = t.neg(&a[r][f]);
            }
            v
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::NumberField;
    use std::sync::Arc;

    fn tower() -> Arc<Tower> {
        Tower::base(Arc::new(NumberField::new(7).unwrap()))
    }

    fn sv(t: &Tower, v: &[(usize, i64)]) -> SparseVec {
        SparseVec::from_terms(t, v.iter().map(|(i, x)| (*i, t.from_int(*x))).collect())
    }

    #[test]
    fn echelon_canonical_reduction() {
        let t = tower();
        let mut e = Echelon::new();
        e.insert(&t, &sv(&t, &[(0, 1), (2, 1)])).unwrap();
        e.insert(&t, &sv(&t, &[(1, 1), (2, 2)])).unwrap();
        assert_eq!(e.rank(), 2);
        // x2 = -x0 ; then x1 = -2 x2 = 2 x0
        let r = e.reduce(&t, &sv(&t, &[(2, 1)]));
        assert_eq!(r, sv(&t, &[(0, -1)]));
        assert!(!e.insert(&t, &sv(&t, &[(0, 2), (1, 1), (2, 4)])).unwrap() || e.rank() == 3);
    }

    #[test]
    fn kernel_of_dependent_vectors() {
        let t = tower();
        let vs = vec![sv(&t, &[(0, 1)]), sv(&t, &[(1, 1)]), sv(&t, &[(0, 1), (1, 1)])];
        let (r, k) = rank_and_kernel(&t, &vs).unwrap();
        assert_eq!(r, 2);
        assert_eq!(k.len(), 1);
        let comb = k[0].entries.iter().fold(SparseVec::new(), |acc, (i, c)| acc.axpy(&t, c, &vs[*i]));
        assert!(comb.is_zero());
    }

    #[test]
    fn dense_inverse() {
        let t = tower();
        let m = vec![vec![t.qint(2), t.one()], vec![t.one(), t.qint(3)]];
        let inv = inverse_dense(&t, &m).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let s = (0..2).fold(t.zero(), |acc, k| t.add(&acc, &t.mul(&m[i][k], &inv[k][j])));
                assert_eq!(s, if i == j { t.one() } else { t.zero() });
            }
        }
        let ns = nullspace_dense(&t, &[vec![t.one(), t.one()]], 2).unwrap();
        assert_eq!(ns.len(), 1);
    }
}
