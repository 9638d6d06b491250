//! Dense linear algebra over Z/p^k.
//!
//! Row spaces are kept in (weak) Howell form so that membership tests,
//! canonical remainders and kernels stay correct over Z/4 as well as over
//! prime fields. Over F2 rows are bit-packed.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::ring::Zm;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Row-major entries, reduced into `ring`.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[i64], ring: Zm) -> Matrix {
        assert_eq!(entries.len(), rows * cols, "entry count mismatch");
        Matrix {
            rows,
            cols,
            data: entries.iter().map(|&x| ring.reduce(x)).collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<u8>]) -> Matrix {
        let cols = columns.len();
        let mut m = Matrix::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &x) in col.iter().enumerate() {
                m.data[i * cols + j] = x;
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, x: u8) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.data
    }

    pub fn mul(&self, other: &Matrix, ring: Zm) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let acc = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                ring.axpy(acc, self.get(i, k), other.row(k));
            }
        }
        out
    }

    pub fn apply(&self, v: &[u8], ring: Zm) -> Vec<u8> {
        let mut out = vec![0; self.rows];
        self.apply_into(v, &mut out, ring);
        out
    }

    /// `out = self * v`
    pub fn apply_into(&self, v: &[u8], out: &mut [u8], ring: Zm) {
        debug_assert_eq!(v.len(), self.cols);
        let m = ring.modulus() as u32;
        for (i, o) in out.iter_mut().enumerate() {
            let row = self.row(i);
            let mut acc = 0u32;
            for (a, b) in row.iter().zip(v) {
                acc += *a as u32 * *b as u32;
            }
            *o = (acc % m) as u8;
        }
    }

    /// `out += self * v`
    pub fn apply_add(&self, v: &[u8], out: &mut [u8], ring: Zm) {
        let m = ring.modulus() as u32;
        for (i, o) in out.iter_mut().enumerate() {
            let row = self.row(i);
            let mut acc = *o as u32;
            for (a, b) in row.iter().zip(v) {
                acc += *a as u32 * *b as u32;
            }
            *o = (acc % m) as u8;
        }
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    /// Kronecker product; row index `i*b.rows + k`, column `j*b.cols + l`.
    pub fn kron(&self, b: &Matrix, ring: Zm) -> Matrix {
        let rows = self.rows * b.rows;
        let cols = self.cols * b.cols;
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..b.rows {
                    for l in 0..b.cols {
                        out.data[(i * b.rows + k) * cols + j * b.cols + l] = ring.mul(a, b.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn sub_identity(&self, ring: Zm) -> Matrix {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let x = out.get(i, i);
            out.set(i, i, ring.sub(x, 1));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Matrix::identity(self.rows)
    }

    /// Invertible over Z/p^k iff invertible mod p.
    pub fn is_invertible(&self, ring: Zm) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let fp = Zm::new(ring.prime() as u32).expect("prime");
        let mut ech = Echelon::new(fp, self.cols);
        for i in 0..self.rows {
            let row: Vec<u8> = self.row(i).iter().map(|&x| x % fp.modulus()).collect();
            ech.insert(&row);
        }
        ech.len() == self.rows
    }
}

/// A submodule of (Z/m)^n held in Howell-style echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    ring: Zm,
    ncols: usize,
    rows: Rows,
}

#[derive(Clone, Debug)]
enum Rows {
    Bits(BTreeMap<usize, Vec<u64>>),
    Dense(BTreeMap<usize, Vec<u8>>),
}

fn pack(v: &[u8]) -> Vec<u64> {
    let mut out = vec![0u64; v.len().div_ceil(64)];
    for (i, &x) in v.iter().enumerate() {
        if x & 1 == 1 {
            out[i / 64] |= 1 << (i % 64);
        }
    }
    out
}

fn unpack(words: &[u64], n: usize) -> Vec<u8> {
    (0..n).map(|i| ((words[i / 64] >> (i % 64)) & 1) as u8).collect()
}

#[inline]
fn bit(words: &[u64], i: usize) -> bool {
    (words[i / 64] >> (i % 64)) & 1 == 1
}

fn first_bit(words: &[u64], from: usize) -> Option<usize> {
    let mut w = from / 64;
    if w >= words.len() {
        return None;
    }
    let mut cur = words[w] & (!0u64 << (from % 64));
    loop {
        if cur != 0 {
            return Some(w * 64 + cur.trailing_zeros() as usize);
        }
        w += 1;
        if w >= words.len() {
            return None;
        }
        cur = words[w];
    }
}

fn xor_into(acc: &mut [u64], v: &[u64]) {
    for (a, b) in acc.iter_mut().zip(v) {
        *a ^= *b;
    }
}

impl Echelon {
    pub fn new(ring: Zm, ncols: usize) -> Echelon {
        let rows = if ring.modulus() == 2 {
            Rows::Bits(BTreeMap::new())
        } else {
            Rows::Dense(BTreeMap::new())
        };
        Echelon { ring, ncols, rows }
    }

    pub fn ring(&self) -> Zm {
        self.ring
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of stored rows (the rank when the ring is a field).
    pub fn len(&self) -> usize {
        match &self.rows {
            Rows::Bits(r) => r.len(),
            Rows::Dense(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `log_p` of the number of elements in the span.
    pub fn log_order(&self) -> u32 {
        match &self.rows {
            Rows::Bits(r) => r.len() as u32,
            Rows::Dense(r) => r
                .iter()
                .map(|(&c, row)| (self.ring.exponent() - self.ring.valuation(row[c])) as u32)
                .sum(),
        }
    }

    /// Adds `v` to the module; returns whether the span grew.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        assert_eq!(v.len(), self.ncols, "vector length mismatch");
        let ring = self.ring;
        match &mut self.rows {
            Rows::Bits(rows) => {
                let mut w = pack(v);
                let mut c = 0;
                while let Some(col) = first_bit(&w, c) {
                    match rows.get(&col) {
                        Some(row) => {
                            xor_into(&mut w, row);
                            c = col + 1;
                        }
                        None => {
                            rows.insert(col, w);
                            return true;
                        }
                    }
                }
                false
            }
            Rows::Dense(rows) => insert_howell(rows, ring, v.to_vec()),
        }
    }

    /// Reduces `v` to its canonical remainder modulo the span.
    pub fn reduce(&self, v: &mut [u8]) {
        match &self.rows {
            Rows::Bits(rows) => {
                let mut w = pack(v);
                for (&c, row) in rows {
                    if bit(&w, c) {
                        xor_into(&mut w, row);
                    }
                }
                v.copy_from_slice(&unpack(&w, v.len()));
            }
            Rows::Dense(rows) => {
                for (&c, row) in rows {
                    let x = v[c];
                    if x >= row[c] {
                        let q = x / row[c];
                        self.ring.axpy(v, self.ring.neg(q), row);
                    }
                }
            }
        }
    }

    pub fn contains(&self, v: &[u8]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(|&x| x == 0)
    }

    /// Rows whose pivot lies at or after `col`, densified.
    pub fn rows_from(&self, col: usize) -> Vec<Vec<u8>> {
        match &self.rows {
            Rows::Bits(rows) => rows.range(col..).map(|(_, r)| unpack(r, self.ncols)).collect(),
            Rows::Dense(rows) => rows.range(col..).map(|(_, r)| r.clone()).collect(),
        }
    }

    pub fn pivots(&self) -> Vec<usize> {
        match &self.rows {
            Rows::Bits(rows) => rows.keys().copied().collect(),
            Rows::Dense(rows) => rows.keys().copied().collect(),
        }
    }

    /// Reduces `v` using only pivots below `limit`; `false` when some entry
    /// before `limit` cannot be cleared.
    fn clear_prefix(&self, v: &mut Vec<u8>, limit: usize) -> bool {
        match &self.rows {
            Rows::Bits(rows) => {
                let mut w = pack(v);
                for (&c, row) in rows.range(..limit) {
                    if bit(&w, c) {
                        xor_into(&mut w, row);
                    }
                }
                if first_bit(&w, 0).is_some_and(|c| c < limit) {
                    return false;
                }
                *v = unpack(&w, v.len());
                true
            }
            Rows::Dense(rows) => {
                for (&c, row) in rows.range(..limit) {
                    let x = v[c];
                    if x == 0 {
                        continue;
                    }
                    if x % row[c] != 0 {
                        return false;
                    }
                    self.ring.axpy(v, self.ring.neg(x / row[c]), row);
                }
                v[..limit].iter().all(|&x| x == 0)
            }
        }
    }
}

fn insert_howell(rows: &mut BTreeMap<usize, Vec<u8>>, ring: Zm, v: Vec<u8>) -> bool {
    let mut grew = false;
    let mut work = vec![v];
    while let Some(mut v) = work.pop() {
        let mut c = 0;
        loop {
            match v[c..].iter().position(|&x| x != 0) {
                None => break,
                Some(off) => c += off,
            }
            let vc = v[c];
            let ev = ring.valuation(vc);
            if let Some(row) = rows.get(&c) {
                let pivot = row[c];
                if ev >= ring.valuation(pivot) {
                    let q = vc / pivot;
                    ring.axpy(&mut v, ring.neg(q), row);
                    continue;
                }
            }
            // v becomes the pivot row at c
            let u = ring.unit_part_inverse(vc);
            ring.scale(&mut v, u);
            let ann = ring.pow_prime(ring.exponent() - ev);
            if ann != 0 && ann != ring.modulus() {
                let mut w = v.clone();
                ring.scale(&mut w, ann);
                if w.iter().any(|&x| x != 0) {
                    work.push(w);
                }
            }
            if let Some(old) = rows.insert(c, v) {
                work.push(old);
            }
            grew = true;
            break;
        }
    }
    grew
}

/// Generators of `{x : A x = 0}` where `A` has the given rows (each of
/// length `nvars`).
pub fn kernel(ring: Zm, nvars: usize, rows: &[Vec<u8>]) -> Vec<Vec<u8>> {
    if ring.is_field() {
        let mut ech = Echelon::new(ring, nvars);
        for r in rows {
            ech.insert(r);
        }
        nullspace_from_echelon(&ech)
    } else {
        // Howell form of [A^T | I]; rows with vanishing A-part span the kernel.
        let nrows = rows.len();
        let mut ech = Echelon::new(ring, nrows + nvars);
        for j in 0..nvars {
            let mut v = vec![0u8; nrows + nvars];
            for (i, r) in rows.iter().enumerate() {
                v[i] = r[j];
            }
            v[nrows + j] = 1;
            ech.insert(&v);
        }
        ech.rows_from(nrows)
            .into_iter()
            .map(|r| r[nrows..].to_vec())
            .collect()
    }
}

/// Generators of the solutions of the constraint rows held in `ech`.
pub fn kernel_of(ech: &Echelon) -> Vec<Vec<u8>> {
    if ech.ring().is_field() {
        nullspace_from_echelon(ech)
    } else {
        kernel(ech.ring(), ech.ncols(), &ech.rows_from(0))
    }
}

/// Same as [`kernel`], feeding constraint rows from an echelon over a field.
pub fn nullspace_from_echelon(ech: &Echelon) -> Vec<Vec<u8>> {
    let ring = ech.ring();
    assert!(ring.is_field());
    let n = ech.ncols();
    let pivots = ech.pivots();
    let mut rows = ech.rows_from(0);
    // normalize and back-substitute to reduced form
    for (idx, &c) in pivots.iter().enumerate() {
        let inv = ring.inverse(rows[idx][c]).expect("field pivot");
        ring.scale(&mut rows[idx], inv);
    }
    for idx in (0..pivots.len()).rev() {
        let c = pivots[idx];
        let (upper, rest) = rows.split_at_mut(idx);
        let pivot_row = &rest[0];
        for r in upper.iter_mut() {
            let x = r[c];
            if x != 0 {
                ring.axpy(r, ring.neg(x), pivot_row);
            }
        }
    }
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    let mut basis = Vec::new();
    for f in (0..n).filter(|&f| !is_pivot[f]) {
        let mut x = vec![0u8; n];
        x[f] = 1;
        for (idx, &c) in pivots.iter().enumerate() {
            x[c] = ring.neg(rows[idx][f]);
        }
        basis.push(x);
    }
    basis
}

/// Expresses targets as combinations of a fixed family of vectors.
#[derive(Clone, Debug)]
pub struct SpanSolver {
    len: usize,
    count: usize,
    ech: Echelon,
}

impl SpanSolver {
    pub fn new<I>(ring: Zm, len: usize, vectors: I) -> SpanSolver
    where
        I: IntoIterator<Item = Vec<u8>>,
    {
        let vectors: Vec<Vec<u8>> = vectors.into_iter().collect();
        let count = vectors.len();
        let mut ech = Echelon::new(ring, len + count);
        for (j, v) in vectors.into_iter().enumerate() {
            assert_eq!(v.len(), len);
            let mut aug = v;
            aug.resize(len + count, 0);
            aug[len + j] = 1;
            ech.insert(&aug);
        }
        SpanSolver { len, count, ech }
    }

    pub fn ring(&self) -> Zm {
        self.ech.ring()
    }

    /// Coefficients `x` with `sum x_j v_j = target`, if any.
    pub fn solve(&self, target: &[u8]) -> Option<Vec<u8>> {
        assert_eq!(target.len(), self.len);
        let mut v = target.to_vec();
        v.resize(self.len + self.count, 0);
        if !self.ech.clear_prefix(&mut v, self.len) {
            return None;
        }
        let ring = self.ech.ring();
        Some(v[self.len..].iter().map(|&x| ring.neg(x)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn combos(ring: Zm, n: usize) -> Vec<Vec<u8>> {
        let m = ring.modulus() as usize;
        (0..m.pow(n as u32))
            .map(|mut code| {
                (0..n)
                    .map(|_| {
                        let x = (code % m) as u8;
                        code /= m;
                        x
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn howell_membership_over_z4_matches_enumeration() {
        let z4 = Zm::new(4).unwrap();
        let gens = [vec![2u8, 1, 0], vec![0, 2, 2], vec![2, 3, 2]];
        let mut ech = Echelon::new(z4, 3);
        for g in &gens {
            ech.insert(g);
        }
        let mut span = alloc::collections::BTreeSet::new();
        for coeffs in combos(z4, 3) {
            let mut v = vec![0u8; 3];
            for (c, g) in coeffs.iter().zip(&gens) {
                z4.axpy(&mut v, *c, g);
            }
            span.insert(v);
        }
        for v in combos(z4, 3) {
            assert_eq!(ech.contains(&v), span.contains(&v), "{v:?}");
        }
        assert_eq!(2usize.pow(ech.log_order()), span.len());
    }

    #[test]
    fn remainders_are_canonical() {
        let z4 = Zm::new(4).unwrap();
        let mut ech = Echelon::new(z4, 2);
        ech.insert(&[2, 2]);
        let mut a = vec![3, 1];
        let mut b = vec![1, 3];
        ech.reduce(&mut a);
        ech.reduce(&mut b);
        assert_eq!(a, b);
    }

    #[test]
    fn kernel_over_f3_and_z4() {
        let f3 = Zm::new(3).unwrap();
        let k = kernel(f3, 3, &[vec![1, 1, 1]]);
        assert_eq!(k.len(), 2);
        for x in &k {
            assert_eq!((x[0] + x[1] + x[2]) % 3, 0);
        }
        let z4 = Zm::new(4).unwrap();
        // 2x = 0 over Z/4 has kernel {0, 2}
        let k = kernel(z4, 1, &[vec![2]]);
        let mut ech = Echelon::new(z4, 1);
        for x in &k {
            assert_eq!(z4.mul(2, x[0]), 0);
            ech.insert(x);
        }
        assert_eq!(ech.log_order(), 1);
    }

    #[test]
    fn solver_finds_witnesses() {
        let f2 = Zm::F2;
        let s = SpanSolver::new(f2, 3, [vec![1, 1, 0], vec![0, 1, 1]]);
        assert_eq!(s.solve(&[1, 0, 1]), Some(vec![1, 1]));
        assert_eq!(s.solve(&[1, 0, 0]), None);
        let z4 = Zm::new(4).unwrap();
        let s = SpanSolver::new(z4, 2, [vec![2, 0], vec![1, 1]]);
        let x = s.solve(&[3, 1]).unwrap();
        assert_eq!(z4.add(z4.mul(x[0], 2), x[1]), 3);
        assert_eq!(x[1], 1);
        assert!(s.solve(&[1, 0]).is_none());
    }

    #[test]
    fn invertibility_mod_p() {
        let z4 = Zm::new(4).unwrap();
        assert!(Matrix::from_row_major(2, 2, &[1, 2, 0, 3], z4).is_invertible(z4));
        assert!(!Matrix::from_row_major(2, 2, &[2, 1, 0, 2], z4).is_invertible(z4));
    }
}
