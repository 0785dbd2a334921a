//! Dense linear algebra over a prime field F_p.
//!
//! Vectors are plain `Vec<u32>` slices of residues. Matrices are row-major.
//! Everything here is exact; there is no notion of tolerance.

use crate::error::{Error, Result};

/// Largest prime accepted for the field.
pub const MAX_PRIME: u32 = 1 << 15;

/// Trial-division primality test, good for the small moduli used here.
pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Checks that `p` is an admissible field characteristic.
pub fn check_prime(p: u32) -> Result<()> {
    if p > MAX_PRIME || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

/// Multiplicative inverse of a nonzero residue.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    // Fermat: a^(p-2).
    pow_mod(a, p - 2, p)
}

pub fn pow_mod(a: u32, mut e: u32, p: u32) -> u32 {
    let m = p as u64;
    let mut r = 1u64 % m;
    let mut b = a as u64 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u32
}

/// `dst += c * src` entrywise, modulo p.
#[inline]
pub fn axpy(dst: &mut [u32], src: &[u32], c: u32, p: u32) {
    if c == 0 {
        return;
    }
    if p == 2 {
        for (d, s) in dst.iter_mut().zip(src) {
            *d ^= *s;
        }
    } else {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = (*d + c * *s) % p;
        }
    }
}

/// Scales a vector in place.
#[inline]
pub fn scale(v: &mut [u32], c: u32, p: u32) {
    if c == 1 {
        return;
    }
    for x in v.iter_mut() {
        *x = *x * c % p;
    }
}

pub fn is_zero(v: &[u32]) -> bool {
    v.iter().all(|&x| x == 0)
}

/// Entrywise `a - b`.
pub fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| (x + p - y) % p).collect()
}

/// Entrywise `a + b`.
pub fn add(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| (x + y) % p).collect()
}

pub fn neg(a: &[u32], p: u32) -> Vec<u32> {
    a.iter().map(|&x| (p - x) % p).collect()
}

/// Dot product of two vectors.
pub fn dot(a: &[u32], b: &[u32], p: u32) -> u32 {
    let mut acc = 0u64;
    for (x, y) in a.iter().zip(b) {
        acc += (*x as u64) * (*y as u64);
    }
    (acc % p as u64) as u32
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl std::fmt::Debug for FpMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "FpMatrix(p={}, {}x{})", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Result of row reduction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: FpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl FpMatrix {
    /// Zero matrix. Panics on a bad modulus; use [`check_prime`] first for
    /// untrusted input.
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        assert!(is_prime(p) && p <= MAX_PRIME, "modulus {p} is not an admissible prime");
        FpMatrix { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from rows, reducing entries mod p.
    pub fn from_rows(p: u32, cols: usize, rows: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged row");
            for (j, &x) in r.iter().enumerate() {
                m.data[i * cols + j] = x % p;
            }
        }
        m
    }

    /// Builds a matrix from a flat row-major buffer.
    pub fn from_flat(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        assert_eq!(data.len(), rows * cols);
        let mut m = Self::zeros(p, 0, 0);
        m.rows = rows;
        m.cols = cols;
        m.data = data.into_iter().map(|x| x % p).collect();
        m
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, r: usize) -> &mut [u32] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn push_row(&mut self, v: &[u32]) {
        assert_eq!(v.len(), self.cols);
        self.data.extend(v.iter().map(|&x| x % self.p));
        self.rows += 1;
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix { p: self.p, rows: self.cols, cols: self.rows, data: vec![0; self.data.len()] };
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        assert_eq!(self.p, other.p);
        let p = self.p;
        let mut out = FpMatrix { p, rows: self.rows, cols: other.cols, data: vec![0; self.rows * other.cols] };
        for r in 0..self.rows {
            let dst = &mut out.data[r * other.cols..(r + 1) * other.cols];
            for k in 0..self.cols {
                let c = self.data[r * self.cols + k];
                if c != 0 {
                    axpy(dst, other.row(k), c, p);
                }
            }
        }
        out
    }

    /// Row vector times matrix: `v · self`.
    pub fn vec_mul(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![0u32; self.cols];
        for (k, &c) in v.iter().enumerate() {
            if c != 0 {
                axpy(&mut out, self.row(k), c, self.p);
            }
        }
        out
    }

    /// Matrix times column vector: `self · v`.
    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows).map(|r| dot(self.row(r), v, self.p)).collect()
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data: add(&self.data, &other.data, self.p) }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FpMatrix { p: self.p, rows: self.rows, cols: self.cols, data: sub(&self.data, &other.data, self.p) }
    }

    pub fn is_zero(&self) -> bool {
        is_zero(&self.data)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|r| (0..self.cols).all(|c| self.get(r, c) == (r == c) as u32))
    }

    /// Vertical concatenation.
    pub fn stack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix { p: self.p, rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Reduced row-echelon form.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        Rref { matrix: m, rank: pivots.len(), pivots }
    }

    /// Reduces in place; returns the pivot columns. Nonzero rows end up first.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let p = self.p;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for c in 0..cols {
            if lead == self.rows {
                break;
            }
            let Some(piv) = (lead..self.rows).find(|&r| self.data[r * cols + c] != 0) else { continue };
            if piv != lead {
                for k in 0..cols {
                    self.data.swap(piv * cols + k, lead * cols + k);
                }
            }
            let inv = inv_mod(self.data[lead * cols + c], p);
            scale(&mut self.data[lead * cols..(lead + 1) * cols], inv, p);
            let pivot_row: Vec<u32> = self.data[lead * cols + c..(lead + 1) * cols].to_vec();
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let f = self.data[r * cols + c];
                if f != 0 {
                    let dst = &mut self.data[r * cols + c..(r + 1) * cols];
                    axpy(dst, &pivot_row, p - f, p);
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref_in_place().len()
    }

    /// Right kernel `{v : self · v = 0}`.
    pub fn kernel(&self) -> FpSubspace {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let cols = self.cols;
        let mut is_pivot = vec![false; cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for f in (0..cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; cols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                let e = m.data[i * cols + f];
                v[pc] = (self.p - e) % self.p;
            }
            basis.push(v);
        }
        FpSubspace::from_spanning(self.p, cols, &basis)
    }

    /// Left kernel `{v : v · self = 0}`.
    pub fn left_kernel(&self) -> FpSubspace {
        self.transpose().kernel()
    }

    /// Solves `self · x = b`, returning the solution whose free variables are zero.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows, "right-hand side length mismatch");
        let p = self.p;
        let cols = self.cols;
        let mut aug = FpMatrix::zeros(p, self.rows, cols + 1);
        for r in 0..self.rows {
            aug.row_mut(r)[..cols].copy_from_slice(self.row(r));
            aug.row_mut(r)[cols] = b[r] % p;
        }
        let pivots = aug.rref_in_place();
        if pivots.last() == Some(&cols) {
            return None;
        }
        let mut x = vec![0u32; cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = aug.get(i, cols);
        }
        Some(x)
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<FpMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = FpMatrix::zeros(self.p, n, 2 * n);
        for r in 0..n {
            aug.row_mut(r)[..n].copy_from_slice(self.row(r));
            aug.row_mut(r)[n + r] = 1;
        }
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = FpMatrix::zeros(self.p, n, n);
        for r in 0..n {
            inv.row_mut(r).copy_from_slice(&aug.row(r)[n..]);
        }
        Some(inv)
    }
}

/// A subspace of F_p^ambient stored by its reduced row-echelon basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpSubspace {
    p: u32,
    ambient: usize,
    basis: FpMatrix,
    pivots: Vec<usize>,
}

impl std::fmt::Debug for FpSubspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FpSubspace(p={}, dim {} in {}, basis {:?})", self.p, self.dim(), self.ambient, self.basis.row_vecs())
    }
}

impl FpSubspace {
    pub fn zero(p: u32, ambient: usize) -> Self {
        FpSubspace { p, ambient, basis: FpMatrix::zeros(p, 0, ambient), pivots: vec![] }
    }

    pub fn full(p: u32, ambient: usize) -> Self {
        FpSubspace { p, ambient, basis: FpMatrix::identity(p, ambient), pivots: (0..ambient).collect() }
    }

    /// Row space of the given vectors.
    pub fn from_spanning(p: u32, ambient: usize, vectors: &[Vec<u32>]) -> Self {
        let m = FpMatrix::from_rows(p, ambient, vectors);
        Self::row_space(&m)
    }

    pub fn row_space(m: &FpMatrix) -> Self {
        let mut r = m.clone();
        let pivots = r.rref_in_place();
        r.data.truncate(pivots.len() * r.cols);
        r.rows = pivots.len();
        FpSubspace { p: m.p, ambient: m.cols, basis: r, pivots }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.basis.rows
    }
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn basis_vecs(&self) -> Vec<Vec<u32>> {
        self.basis.row_vecs()
    }

    /// Subtracts basis multiples so that `v` vanishes on every pivot column.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut w = v.to_vec();
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = w[pc];
            if c != 0 {
                axpy(&mut w, self.basis.row(i), self.p - c, self.p);
            }
        }
        w
    }

    pub fn contains_vec(&self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.ambient);
        is_zero(&self.reduce(v))
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[u32]) -> Option<Vec<u32>> {
        if !self.contains_vec(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc]).collect())
    }

    /// Vector with the given coordinates.
    pub fn combine(&self, coords: &[u32]) -> Vec<u32> {
        self.basis.vec_mul(coords)
    }

    fn compatible(&self, other: &FpSubspace) {
        assert_eq!(self.p, other.p, "subspaces over different fields");
        assert_eq!(self.ambient, other.ambient, "subspaces of different ambient spaces");
    }

    pub fn sum(&self, other: &FpSubspace) -> FpSubspace {
        self.compatible(other);
        FpSubspace::row_space(&self.basis.stack(&other.basis))
    }

    /// Adds vectors to the span.
    pub fn extend(&self, vectors: &[Vec<u32>]) -> FpSubspace {
        let extra = FpMatrix::from_rows(self.p, self.ambient, vectors);
        FpSubspace::row_space(&self.basis.stack(&extra))
    }

    /// Vectors orthogonal to the subspace under the standard dot product.
    pub fn perp(&self) -> FpSubspace {
        if self.dim() == 0 {
            return FpSubspace::full(self.p, self.ambient);
        }
        self.basis.kernel()
    }

    pub fn intersect(&self, other: &FpSubspace) -> FpSubspace {
        self.compatible(other);
        self.perp().sum(&other.perp()).perp()
    }

    pub fn contains(&self, other: &FpSubspace) -> bool {
        self.compatible(other);
        (0..other.dim()).all(|i| self.contains_vec(other.basis.row(i)))
    }

    /// `dim self - dim sub`, requiring `sub ⊆ self`.
    pub fn quotient_dim(&self, sub: &FpSubspace) -> Result<usize> {
        if !self.contains(sub) {
            return Err(Error::NotASubspace);
        }
        Ok(self.dim() - sub.dim())
    }

    /// Canonical complement of `sub` inside `self`: the image of `self` under
    /// the projection killing the pivot columns of `sub`, in echelon form.
    pub fn complement_of(&self, sub: &FpSubspace) -> Result<FpSubspace> {
        if !self.contains(sub) {
            return Err(Error::NotASubspace);
        }
        let reduced: Vec<Vec<u32>> = self.basis_vecs().iter().map(|v| sub.reduce(v)).collect();
        Ok(FpSubspace::from_spanning(self.p, self.ambient, &reduced))
    }

    /// Unit vectors on the non-pivot columns: a complement of `self` in the
    /// ambient space.
    pub fn standard_complement(&self) -> Vec<Vec<u32>> {
        let mut is_pivot = vec![false; self.ambient];
        for &c in &self.pivots {
            is_pivot[c] = true;
        }
        (0..self.ambient)
            .filter(|&c| !is_pivot[c])
            .map(|c| {
                let mut v = vec![0; self.ambient];
                v[c] = 1;
                v
            })
            .collect()
    }

    /// Image of the subspace under `v ↦ v · m`.
    pub fn image_under(&self, m: &FpMatrix) -> FpSubspace {
        FpSubspace::row_space(&self.basis.mul(m))
    }

    /// Every vector of the subspace, in coordinate-lexicographic order.
    /// Only sensible for tiny subspaces.
    pub fn enumerate(&self) -> Vec<Vec<u32>> {
        let d = self.dim();
        let total = (self.p as usize).pow(d as u32);
        let mut out = Vec::with_capacity(total);
        let mut coords = vec![0u32; d];
        for _ in 0..total {
            out.push(self.combine(&coords));
            for c in coords.iter_mut().rev() {
                *c += 1;
                if *c < self.p {
                    break;
                }
                *c = 0;
            }
        }
        out
    }
}

/// Row echelon basis built one vector at a time. Each stored row is zero on
/// the pivot columns of the rows stored before it.
#[derive(Clone, Debug)]
pub struct EchelonBuilder {
    p: u32,
    cols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl EchelonBuilder {
    pub fn new(p: u32, cols: usize) -> Self {
        EchelonBuilder { p, cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<u32>) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        if self.is_full() {
            return false;
        }
        let p = self.p;
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let f = v[c];
            if f != 0 {
                axpy(&mut v, row, p - f, p);
            }
        }
        let Some(lead) = v.iter().position(|&x| x != 0) else { return false };
        let inv = inv_mod(v[lead], p);
        scale(&mut v, inv, p);
        self.rows.push(v);
        self.pivots.push(lead);
        true
    }

    pub fn into_subspace(self) -> FpSubspace {
        FpSubspace::from_spanning(self.p, self.cols, &self.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_vectors(p: u32, n: usize) -> Vec<Vec<u32>> {
        FpSubspace::full(p, n).enumerate()
    }

    #[test]
    fn primality() {
        assert!(is_prime(2) && is_prime(3) && is_prime(32749));
        assert!(!is_prime(1) && !is_prime(9) && !is_prime(32768));
        assert!(check_prime(4).is_err());
    }

    #[test]
    fn rref_identity_and_echelon() {
        let id = FpMatrix::identity(2, 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);
        let m = FpMatrix::from_rows(2, 2, &[vec![1, 1]]);
        let r = m.rref();
        assert_eq!(r.matrix, m);
        assert_eq!((r.rank, r.pivots), (1, vec![0]));
    }

    #[test]
    fn rank_matches_span_enumeration() {
        let m = FpMatrix::from_rows(3, 4, &[vec![1, 2, 0, 1], vec![2, 1, 0, 2], vec![0, 1, 1, 1], vec![1, 0, 1, 2]]);
        let mut span = std::collections::BTreeSet::new();
        for coeffs in all_vectors(3, 4) {
            span.insert(m.vec_mul(&coeffs));
        }
        assert_eq!(span.len(), 3usize.pow(m.rank() as u32));
    }

    #[test]
    fn kernel_small_cases() {
        let k = FpMatrix::from_rows(2, 2, &[vec![1, 1]]).kernel();
        assert_eq!(k.basis_vecs(), vec![vec![1, 1]]);
        assert_eq!(FpMatrix::identity(3, 2).kernel().dim(), 0);
        let m = FpMatrix::from_rows(2, 5, &[vec![1, 0, 1, 1, 0], vec![0, 1, 1, 0, 1], vec![1, 1, 0, 1, 1]]);
        let k = m.kernel();
        for v in all_vectors(2, 5) {
            assert_eq!(k.contains_vec(&v), is_zero(&m.mul_vec(&v)));
        }
    }

    #[test]
    fn solve_cases() {
        let id = FpMatrix::identity(5, 3);
        assert_eq!(id.solve(&[1, 4, 2]), Some(vec![1, 4, 2]));
        let a = FpMatrix::from_rows(2, 1, &[vec![1], vec![1]]);
        assert_eq!(a.solve(&[0, 1]), None);
        let a = FpMatrix::from_rows(3, 3, &[vec![1, 2, 0], vec![0, 1, 1], vec![1, 0, 2]]);
        let b = a.mul_vec(&[2, 1, 1]);
        let x = a.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        let n_solutions = all_vectors(3, 3).into_iter().filter(|v| a.mul_vec(v) == b).count();
        assert_eq!(n_solutions, 3usize.pow(a.kernel().dim() as u32));
    }

    #[test]
    fn canonical_solution_has_zero_free_variables() {
        let a = FpMatrix::from_rows(2, 3, &[vec![1, 1, 0]]);
        assert_eq!(a.solve(&[1]), Some(vec![1, 0, 0]));
    }

    #[test]
    fn subspace_basics() {
        let u = FpSubspace::from_spanning(2, 4, &[vec![1, 1, 0, 0], vec![0, 0, 1, 1]]);
        let z = FpSubspace::zero(2, 4);
        assert_eq!(u.sum(&z), u);
        assert_eq!(u.intersect(&u), u);
        assert_eq!(u.quotient_dim(&z).unwrap(), 2);
        assert!(matches!(z.quotient_dim(&u), Err(Error::NotASubspace)));
    }

    #[test]
    fn inverse_roundtrip() {
        let a = FpMatrix::from_rows(5, 3, &[vec![1, 2, 0], vec![0, 1, 4], vec![3, 0, 2]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let singular = FpMatrix::from_rows(5, 2, &[vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn complement_is_canonical() {
        let z = FpSubspace::from_spanning(3, 3, &[vec![1, 0, 0], vec![0, 1, 2]]);
        let b = FpSubspace::from_spanning(3, 3, &[vec![1, 1, 2]]);
        let c1 = z.complement_of(&b).unwrap();
        let z2 = FpSubspace::from_spanning(3, 3, &[vec![1, 1, 2], vec![2, 0, 0]]);
        assert_eq!(z, z2);
        assert_eq!(c1, z2.complement_of(&b).unwrap());
        assert_eq!(c1.dim(), 1);
        assert_eq!(c1.sum(&b), z);
    }
}
