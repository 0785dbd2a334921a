//! `H¹` and `H²` of a finite group with coefficients in a right module, and
//! the automorphisms induced by derivations.
//!
//! Cochains are flat tables: a 1-cochain stores `τ(g)` at `g·dim`, a
//! 2-cochain stores `f(g,h)` at `(g·|G| + h)·dim`. Only normalized 2-cochains
//! occur.
//!
//! Cocycles are solved by propagation along the right Cayley graph. The
//! values on generators (degree 1) or on pairs `(g, s)` with `s` a generator
//! (degree 2) are the unknowns. The identity at each tree edge defines the
//! remaining values and each non-tree edge gives a linear constraint. This is
//! equivalent to the full system, since an identity that holds for every
//! generator in the last slot holds for their products. The full systems are
//! kept as [`z1_all_pairs`] and [`z2_all_triples`] for cross-checking.

use crate::error::{Error, Result};
use crate::fp_linalg::{self, EchelonBuilder, FpMatrix, FpSubspace};
use crate::gmodule::{ConjugationModule, GModule, Side};
use crate::group::{is_inner, GroupMap, GroupTable, QuotientMap};

/// Default order bound for degree 2.
pub const DEGREE2_ORDER_CAP: usize = 64;

/// A tabulated 1-cochain; a derivation when it satisfies the cocycle identity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Derivation {
    pub dim: usize,
    pub table: Vec<u32>,
}

impl Derivation {
    pub fn zero(order: usize, dim: usize) -> Self {
        Derivation { dim, table: vec![0; order * dim] }
    }
    pub fn value(&self, g: u32) -> &[u32] {
        &self.table[g as usize * self.dim..(g as usize + 1) * self.dim]
    }
    pub fn order(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.table.len() / self.dim
        }
    }
    pub fn is_zero(&self) -> bool {
        fp_linalg::is_zero(&self.table)
    }
}

/// A tabulated normalized 2-cochain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TwoCocycle {
    pub order: usize,
    pub dim: usize,
    pub table: Vec<u32>,
}

impl TwoCocycle {
    pub fn zero(order: usize, dim: usize) -> Self {
        TwoCocycle { order, dim, table: vec![0; order * order * dim] }
    }
    pub fn value(&self, g: u32, h: u32) -> &[u32] {
        let i = (g as usize * self.order + h as usize) * self.dim;
        &self.table[i..i + self.dim]
    }
    pub fn set(&mut self, g: u32, h: u32, v: &[u32]) {
        let i = (g as usize * self.order + h as usize) * self.dim;
        self.table[i..i + self.dim].copy_from_slice(v);
    }
    pub fn is_normalized(&self) -> bool {
        (0..self.order as u32).all(|x| fp_linalg::is_zero(self.value(0, x)) && fp_linalg::is_zero(self.value(x, 0)))
    }
}

/// `Z`, `B` and a canonical complement `H` inside the cochain space of one degree.
#[derive(Clone, Debug)]
pub struct CohomologySpace {
    pub degree: u8,
    pub order: usize,
    pub dim: usize,
    pub z: FpSubspace,
    pub b: FpSubspace,
    pub h: FpSubspace,
}

impl CohomologySpace {
    pub fn z_dim(&self) -> usize {
        self.z.dim()
    }
    pub fn b_dim(&self) -> usize {
        self.b.dim()
    }
    pub fn h_dim(&self) -> usize {
        self.h.dim()
    }

    pub fn z_basis(&self) -> Vec<Vec<u32>> {
        self.z.basis_vecs()
    }
    pub fn b_basis(&self) -> Vec<Vec<u32>> {
        self.b.basis_vecs()
    }
    pub fn h_reps(&self) -> Vec<Vec<u32>> {
        self.h.basis_vecs()
    }

    pub fn h_derivations(&self) -> Vec<Derivation> {
        assert_eq!(self.degree, 1);
        self.h_reps().into_iter().map(|table| Derivation { dim: self.dim, table }).collect()
    }

    pub fn z_derivations(&self) -> Vec<Derivation> {
        assert_eq!(self.degree, 1);
        self.z_basis().into_iter().map(|table| Derivation { dim: self.dim, table }).collect()
    }

    pub fn h_cocycles(&self) -> Vec<TwoCocycle> {
        assert_eq!(self.degree, 2);
        self.h_reps().into_iter().map(|table| TwoCocycle { order: self.order, dim: self.dim, table }).collect()
    }

    pub fn z_cocycles(&self) -> Vec<TwoCocycle> {
        assert_eq!(self.degree, 2);
        self.z_basis().into_iter().map(|table| TwoCocycle { order: self.order, dim: self.dim, table }).collect()
    }

    /// Coordinates of a cocycle's class in the `h_reps` basis.
    pub fn class_of(&self, cochain: &[u32]) -> Option<Vec<u32>> {
        if !self.z.contains_vec(cochain) {
            return None;
        }
        let reduced = self.b.reduce(cochain);
        self.h.coordinates(&reduced)
    }
}

/// Right Cayley graph of `g` with respect to `gens`, explored breadth first.
struct CayleyBfs {
    /// Vertices in discovery order; starts with the identity.
    order: Vec<u32>,
    /// Tree edge `(h, s_idx)` reaching each vertex.
    parent: Vec<Option<(u32, usize)>>,
    /// Edges `(h, s_idx)` not in the tree.
    back_edges: Vec<(u32, usize)>,
}

impl CayleyBfs {
    fn new(g: &GroupTable, gens: &[u32]) -> Self {
        let n = g.order();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut order = vec![0u32];
        let mut back_edges = Vec::new();
        let mut i = 0;
        while i < order.len() {
            let h = order[i];
            for (k, &s) in gens.iter().enumerate() {
                let y = g.mul(h, s);
                if seen[y as usize] {
                    back_edges.push((h, k));
                } else {
                    seen[y as usize] = true;
                    parent[y as usize] = Some((h, k));
                    order.push(y);
                }
            }
            i += 1;
        }
        CayleyBfs { order, parent, back_edges }
    }
}

fn right_module(m: &GModule) -> GModule {
    match m.side() {
        Side::Right => m.clone(),
        Side::Left => m.to_right(),
    }
}

/// Selector matrix: `u · sel` picks the `dim` consecutive parameters at `offset`.
fn add_selector(m: &mut FpMatrix, offset: usize, dim: usize, sign: u32) {
    let p = m.p();
    for j in 0..dim {
        let v = (m.get(offset + j, j) + sign) % p;
        m.set(offset + j, j, v);
    }
}

/// Feeds the columns of a constraint block (`u · c = 0`) into the echelon.
fn push_constraints(ech: &mut EchelonBuilder, c: &FpMatrix) {
    if c.is_zero() {
        return;
    }
    for col in c.transpose().row_vecs() {
        if !fp_linalg::is_zero(&col) {
            ech.insert(col);
        }
    }
}

/// Parameters of `Z¹`: the values on the generators.
fn z1_parameters(m: &GModule) -> (Vec<u32>, FpSubspace) {
    let g = m.group();
    let p = m.p();
    let dim = m.dim();
    let gens = g.generators().to_vec();
    let np = gens.len() * dim;
    let bfs = CayleyBfs::new(g, &gens);
    // expr[x] is the P×dim matrix with τ(x) = u · expr[x].
    let mut expr: Vec<Option<FpMatrix>> = vec![None; g.order()];
    expr[0] = Some(FpMatrix::zeros(p, np, dim));
    let step = |e: &FpMatrix, k: usize| {
        let mut out = e.mul(m.act(gens[k]));
        add_selector(&mut out, k * dim, dim, 1);
        out
    };
    for &x in &bfs.order[1..] {
        let (h, k) = bfs.parent[x as usize].unwrap();
        expr[x as usize] = Some(step(expr[h as usize].as_ref().unwrap(), k));
    }
    let mut ech = EchelonBuilder::new(p, np);
    for &(h, k) in &bfs.back_edges {
        let y = g.mul(h, gens[k]);
        let c = step(expr[h as usize].as_ref().unwrap(), k).sub(expr[y as usize].as_ref().unwrap());
        push_constraints(&mut ech, &c);
    }
    (gens, ech.into_subspace().perp())
}

/// Tabulates the derivation with the given generator values.
fn expand_z1(m: &GModule, gens: &[u32], u: &[u32]) -> Vec<u32> {
    let g = m.group();
    let dim = m.dim();
    let p = m.p();
    let bfs = CayleyBfs::new(g, gens);
    let mut table = vec![0u32; g.order() * dim];
    for &x in &bfs.order[1..] {
        let (h, k) = bfs.parent[x as usize].unwrap();
        let prev = table[h as usize * dim..(h as usize + 1) * dim].to_vec();
        let mut v = m.act(gens[k]).vec_mul(&prev);
        v = fp_linalg::add(&v, &u[k * dim..(k + 1) * dim], p);
        table[x as usize * dim..(x as usize + 1) * dim].copy_from_slice(&v);
    }
    table
}

/// `dim H¹(G, M)` without tabulating cocycles.
pub fn h1_dim(m: &GModule) -> Result<usize> {
    let m = right_module(m);
    let (_, params) = z1_parameters(&m);
    Ok(params.dim() - (m.dim() - m.fixed_points().dim()))
}

/// Inner derivation `g ↦ v·g − v`.
pub fn coboundary1(m: &GModule, v: &[u32]) -> Derivation {
    let p = m.p();
    let table = m.group().elements().flat_map(|g| fp_linalg::sub(&m.apply(v, g), v, p)).collect();
    Derivation { dim: m.dim(), table }
}

/// `∂σ(g,h) = σ(g)·h + σ(h) − σ(gh)` for a 1-cochain with `σ(1) = 0`.
pub fn coboundary2(m: &GModule, sigma: &Derivation) -> TwoCocycle {
    let g = m.group();
    let p = m.p();
    let mut f = TwoCocycle::zero(g.order(), m.dim());
    for x in g.elements() {
        for y in g.elements() {
            let v = fp_linalg::add(&m.apply(sigma.value(x), y), sigma.value(y), p);
            f.set(x, y, &fp_linalg::sub(&v, sigma.value(g.mul(x, y)), p));
        }
    }
    f
}

pub fn is_derivation(m: &GModule, tau: &Derivation) -> bool {
    let g = m.group();
    let p = m.p();
    g.elements().all(|x| {
        g.elements().all(|y| {
            let rhs = fp_linalg::add(&m.apply(tau.value(x), y), tau.value(y), p);
            tau.value(g.mul(x, y)) == rhs.as_slice()
        })
    })
}

/// Normalization and the identity `f(g,h)·k + f(gh,k) = f(h,k) + f(g,hk)` on all triples.
pub fn is_two_cocycle(m: &GModule, f: &TwoCocycle) -> bool {
    if !f.is_normalized() {
        return false;
    }
    let g = m.group();
    let p = m.p();
    for a in g.elements() {
        for b in g.elements() {
            let ab = g.mul(a, b);
            for c in g.elements() {
                let lhs = fp_linalg::add(&m.apply(f.value(a, b), c), f.value(ab, c), p);
                let rhs = fp_linalg::add(f.value(b, c), f.value(a, g.mul(b, c)), p);
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    true
}

/// Degree-1 or degree-2 cohomology with the default degree-2 cap.
pub fn cohomology(m: &GModule, degree: u8) -> Result<CohomologySpace> {
    cohomology_with_cap(m, degree, DEGREE2_ORDER_CAP)
}

pub fn cohomology_with_cap(m: &GModule, degree: u8, degree2_cap: usize) -> Result<CohomologySpace> {
    let m = right_module(m);
    match degree {
        1 => Ok(degree1(&m)),
        2 => {
            let order = m.group().order();
            if order > degree2_cap {
                return Err(Error::OrderCap { order, cap: degree2_cap });
            }
            Ok(degree2(&m))
        }
        d => Err(Error::Invalid(format!("degree {d} is not supported"))),
    }
}

fn assemble(degree: u8, m: &GModule, z: FpSubspace, b: FpSubspace) -> CohomologySpace {
    let h = z.complement_of(&b).expect("coboundaries are cocycles");
    CohomologySpace { degree, order: m.group().order(), dim: m.dim(), z, b, h }
}

fn degree1(m: &GModule) -> CohomologySpace {
    let (gens, params) = z1_parameters(m);
    let len = m.group().order() * m.dim();
    let tables: Vec<Vec<u32>> = params.basis_vecs().iter().map(|u| expand_z1(m, &gens, u)).collect();
    let z = FpSubspace::from_spanning(m.p(), len, &tables);
    let b_rows: Vec<Vec<u32>> = (0..m.dim())
        .map(|i| {
            let mut e = vec![0u32; m.dim()];
            e[i] = 1;
            coboundary1(m, &e).table
        })
        .collect();
    let b = FpSubspace::from_spanning(m.p(), len, &b_rows);
    assemble(1, m, z, b)
}

/// Parameter index of `f(g, s_k)` for `g ≠ 1`.
fn z2_index(g: u32, k: usize, ngens: usize, dim: usize) -> usize {
    ((g as usize - 1) * ngens + k) * dim
}

fn degree2(m: &GModule) -> CohomologySpace {
    let g = m.group();
    let p = m.p();
    let dim = m.dim();
    let n = g.order();
    let gens = g.generators().to_vec();
    let ng = gens.len();
    let np = n.saturating_sub(1) * ng * dim;
    let bfs = CayleyBfs::new(g, &gens);
    // For fixed a, f(a, h s) = f(a, h)·s + f(a h, s) − f(h, s).
    let step = |e: &FpMatrix, a: u32, h: u32, k: usize| {
        let mut out = e.mul(m.act(gens[k]));
        let ah = g.mul(a, h);
        if ah != 0 {
            add_selector(&mut out, z2_index(ah, k, ng, dim), dim, 1);
        }
        if h != 0 {
            add_selector(&mut out, z2_index(h, k, ng, dim), dim, p - 1);
        }
        out
    };
    let mut ech = EchelonBuilder::new(p, np);
    for a in 1..n as u32 {
        let mut expr: Vec<Option<FpMatrix>> = vec![None; n];
        expr[0] = Some(FpMatrix::zeros(p, np, dim));
        for &x in &bfs.order[1..] {
            let (h, k) = bfs.parent[x as usize].unwrap();
            expr[x as usize] = Some(step(expr[h as usize].as_ref().unwrap(), a, h, k));
        }
        for &(h, k) in &bfs.back_edges {
            let y = g.mul(h, gens[k]);
            let c = step(expr[h as usize].as_ref().unwrap(), a, h, k).sub(expr[y as usize].as_ref().unwrap());
            push_constraints(&mut ech, &c);
        }
    }
    let params = ech.into_subspace().perp();
    let len = n * n * dim;
    let tables: Vec<Vec<u32>> = params.basis_vecs().iter().map(|u| expand_z2(m, &gens, &bfs, u)).collect();
    let z = FpSubspace::from_spanning(p, len, &tables);
    let mut b_rows = Vec::new();
    for x in 1..n as u32 {
        for i in 0..dim {
            let mut sigma = Derivation::zero(n, dim);
            sigma.table[x as usize * dim + i] = 1;
            b_rows.push(coboundary2(m, &sigma).table);
        }
    }
    let b = FpSubspace::from_spanning(p, len, &b_rows);
    assemble(2, m, z, b)
}

fn expand_z2(m: &GModule, gens: &[u32], bfs: &CayleyBfs, u: &[u32]) -> Vec<u32> {
    let g = m.group();
    let p = m.p();
    let dim = m.dim();
    let n = g.order();
    let ng = gens.len();
    let mut f = TwoCocycle::zero(n, dim);
    let param = |x: u32, k: usize| -> &[u32] {
        if x == 0 {
            &[]
        } else {
            let i = z2_index(x, k, ng, dim);
            &u[i..i + dim]
        }
    };
    for a in 1..n as u32 {
        for &x in &bfs.order[1..] {
            let (h, k) = bfs.parent[x as usize].unwrap();
            let mut v = m.act(gens[k]).vec_mul(f.value(a, h));
            let ah = g.mul(a, h);
            if ah != 0 {
                v = fp_linalg::add(&v, param(ah, k), p);
            }
            if h != 0 {
                v = fp_linalg::sub(&v, param(h, k), p);
            }
            f.set(a, x, &v);
        }
    }
    f.table
}

/// `Z¹` from the dense system over every pair.
pub fn z1_all_pairs(m: &GModule) -> FpSubspace {
    let m = right_module(m);
    let g = m.group();
    let dim = m.dim();
    let p = m.p();
    let len = g.order() * dim;
    let mut ech = EchelonBuilder::new(p, len);
    // τ(xy) − τ(x)·y − τ(y) = 0, one row per output coordinate.
    for x in g.elements() {
        for y in g.elements() {
            let xy = g.mul(x, y) as usize;
            for j in 0..dim {
                let mut row = vec![0u32; len];
                row[xy * dim + j] = 1;
                for i in 0..dim {
                    let c = m.act(y).get(i, j);
                    let idx = x as usize * dim + i;
                    row[idx] = (row[idx] + p - c) % p;
                }
                let idx = y as usize * dim + j;
                row[idx] = (row[idx] + p - 1) % p;
                ech.insert(row);
            }
        }
    }
    ech.into_subspace().perp()
}

/// Normalized `Z²` from the dense system over every triple.
pub fn z2_all_triples(m: &GModule) -> FpSubspace {
    let m = right_module(m);
    let g = m.group();
    let dim = m.dim();
    let p = m.p();
    let n = g.order();
    let len = n * n * dim;
    let at = |a: u32, b: u32, i: usize| (a as usize * n + b as usize) * dim + i;
    let mut ech = EchelonBuilder::new(p, len);
    for a in g.elements() {
        for i in 0..dim {
            ech.insert(unit_row(len, at(0, a, i)));
            ech.insert(unit_row(len, at(a, 0, i)));
        }
    }
    for a in g.elements() {
        for b in g.elements() {
            for c in g.elements() {
                for j in 0..dim {
                    let mut row = vec![0u32; len];
                    for i in 0..dim {
                        let v = m.act(c).get(i, j);
                        row[at(a, b, i)] = (row[at(a, b, i)] + v) % p;
                    }
                    let mut bump = |idx: usize, s: u32| row[idx] = (row[idx] + s) % p;
                    bump(at(g.mul(a, b), c, j), 1);
                    bump(at(b, c, j), p - 1);
                    bump(at(a, g.mul(b, c), j), p - 1);
                    ech.insert(row);
                }
            }
        }
    }
    ech.into_subspace().perp()
}

fn unit_row(len: usize, idx: usize) -> Vec<u32> {
    let mut r = vec![0u32; len];
    r[idx] = 1;
    r
}

/// Every function `G → M` satisfying the derivation identity, by exhaustion.
/// Returns `None` when there are more than `limit` functions to try.
///
/// Values are coded as integers below `p^dim`; the action and addition are
/// tabulated once so each candidate costs only table lookups.
pub fn enumerate_derivations(m: &GModule, limit: u64) -> Option<Vec<Vec<u32>>> {
    let m = right_module(m);
    let g = m.group();
    let n = g.order();
    let dim = m.dim();
    let p = m.p() as u64;
    // τ(1) = 0 is forced, so only the other values vary.
    let total = p.checked_pow(((n - 1) * dim) as u32)?;
    if total > limit {
        return None;
    }
    let q = p.checked_pow(dim as u32)? as usize;
    if q.checked_mul(q)? > 1 << 24 {
        return None;
    }
    let decode = |mut c: usize| -> Vec<u32> {
        (0..dim)
            .map(|_| {
                let d = (c % p as usize) as u32;
                c /= p as usize;
                d
            })
            .collect()
    };
    let encode = |v: &[u32]| v.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize);
    let vectors: Vec<Vec<u32>> = (0..q).map(decode).collect();
    let moved: Vec<Vec<usize>> = g.elements().map(|y| vectors.iter().map(|v| encode(&m.apply(v, y))).collect()).collect();
    let add: Vec<usize> = (0..q * q).map(|i| encode(&fp_linalg::add(&vectors[i / q], &vectors[i % q], p as u32))).collect();
    let mut out = Vec::new();
    let mut tau = vec![0usize; n];
    for _ in 0..total {
        let ok = (1..n).all(|x| (1..n).all(|y| tau[g.mul(x as u32, y as u32) as usize] == add[moved[y][tau[x]] * q + tau[y]]));
        if ok {
            out.push(tau.iter().flat_map(|&c| vectors[c].iter().copied()).collect());
        }
        // Odometer step over τ(1), …, τ(n−1).
        for slot in tau[1..].iter_mut() {
            *slot += 1;
            if *slot < q {
                break;
            }
            *slot = 0;
        }
    }
    Some(out)
}

/// Every normalized 2-cocycle, by exhaustion over normalized cochains.
pub fn enumerate_two_cocycles(m: &GModule, limit: u64) -> Option<Vec<Vec<u32>>> {
    let m = right_module(m);
    let g = m.group();
    let n = g.order();
    let dim = m.dim();
    let p = m.p() as u64;
    let slots: Vec<usize> = (1..n)
        .flat_map(|a| (1..n).flat_map(move |b| (0..dim).map(move |i| (a * n + b) * dim + i)))
        .collect();
    let total = p.checked_pow(slots.len() as u32)?;
    if total > limit {
        return None;
    }
    let mut out = Vec::new();
    let mut f = TwoCocycle::zero(n, dim);
    for code in 0..total {
        let mut c = code;
        for &s in &slots {
            f.table[s] = (c % p) as u32;
            c /= p;
        }
        if is_two_cocycle(&m, &f) {
            out.push(f.table.clone());
        }
    }
    Some(out)
}

/// `ψ(x) = x · w(τ(x N₁))` where `w(·)` reads a vector as an element of `W`.
pub fn induced_map(g: &GroupTable, cm: &ConjugationModule, tau: &Derivation) -> Vec<u32> {
    g.elements()
        .map(|x| {
            let q = cm.map.image_of[x as usize];
            g.mul(x, cm.wbasis.element_of(tau.value(q)))
        })
        .collect()
}

/// The automorphism induced by a derivation of `G/N₁` into `W`, verified on
/// every pair.
pub fn derivation_to_automorphism(g: &GroupTable, cm: &ConjugationModule, tau: &Derivation) -> Result<GroupMap> {
    if !is_derivation(&cm.module, tau) {
        return Err(Error::Invalid("not a derivation".into()));
    }
    let image = induced_map(g, cm, tau);
    let f = GroupMap::new(g, g, image).map_err(|_| Error::NotAutomorphism)?;
    if !f.is_bijective() {
        return Err(Error::NotAutomorphism);
    }
    Ok(f)
}

/// `δ_x(g N₁) = g⁻¹ g^x` as a derivation into `W`.
pub fn conjugation_derivation(g: &GroupTable, cm: &ConjugationModule, x: u32) -> Result<Derivation> {
    let dim = cm.wbasis.rank();
    let q = cm.quotient_group.order();
    let mut table = vec![0u32; q * dim];
    let mut done = vec![false; q];
    for y in g.elements() {
        let c = g.comm(y, x);
        let v = cm.wbasis.vector_of(c).ok_or(Error::NotWValued(y))?;
        let k = cm.map.image_of[y as usize] as usize;
        if done[k] {
            if table[k * dim..(k + 1) * dim] != v[..] {
                return Err(Error::Invalid("conjugation derivation is not constant on cosets".into()));
            }
        } else {
            table[k * dim..(k + 1) * dim].copy_from_slice(&v);
            done[k] = true;
        }
    }
    let tau = Derivation { dim, table };
    if !is_derivation(&cm.module, &tau) {
        return Err(Error::NotACocycle("conjugation derivation".into()));
    }
    Ok(tau)
}

/// Pulls a derivation on `G/N` back to `G/N₁` for `N₁ ≤ N`.
pub fn inflate(src: &Derivation, coarse: &QuotientMap, fine: &QuotientMap) -> Derivation {
    let table = fine
        .section
        .iter()
        .flat_map(|&x| src.value(coarse.image_of[x as usize]).to_vec())
        .collect();
    Derivation { dim: src.dim, table }
}

/// First `h_reps` basis derivation whose induced automorphism is outer.
/// Since `τ ↦ ψ_τ` turns sums into composites, a span of derivations with
/// inner automorphisms induces only inner automorphisms.
pub fn derivation_span_noninner_probe(
    g: &GroupTable,
    cm: &ConjugationModule,
    space: &CohomologySpace,
) -> Result<Option<(Derivation, GroupMap)>> {
    for tau in space.h_derivations() {
        let psi = derivation_to_automorphism(g, cm, &tau)?;
        if is_inner(g, &psi)?.is_none() {
            return Ok(Some((tau, psi)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gmodule::{module_from_conjugation, sample_ng_module};
    use crate::group::{map_order, quotient, PcPresentation};
    use std::sync::Arc;

    fn grp(p: u32, n: usize, pows: &[(usize, &str)], comms: &[(usize, usize, &str)]) -> Arc<GroupTable> {
        Arc::new(PcPresentation::parse_relations(p, n, pows, comms).unwrap().build().unwrap())
    }

    #[test]
    fn small_examples() {
        let c2 = grp(2, 1, &[], &[]);
        let t = GModule::trivial(c2.clone(), 1);
        let h = cohomology(&t, 1).unwrap();
        assert_eq!((h.z_dim(), h.b_dim(), h.h_dim()), (1, 0, 1));
        assert_eq!(cohomology(&GModule::regular(c2.clone()), 1).unwrap().h_dim(), 0);
        let v4 = grp(2, 2, &[], &[]);
        assert_eq!(cohomology(&GModule::trivial(v4, 1), 1).unwrap().h_dim(), 2);
        let h2 = cohomology(&t, 2).unwrap();
        assert_eq!(h2.h_dim(), 1);
        assert_eq!(enumerate_two_cocycles(&t, 1 << 10).unwrap().len(), 2);
    }

    #[test]
    fn degree1_matches_enumeration_and_all_pairs() {
        let d8 = grp(2, 3, &[(1, "g3")], &[(1, 0, "g3")]);
        let c3 = grp(3, 1, &[], &[]);
        let mut modules = vec![
            GModule::trivial(d8.clone(), 1),
            GModule::trivial(d8.clone(), 2),
            GModule::regular(c3.clone()),
            GModule::trivial(c3.clone(), 2),
        ];
        for seed in 0..3 {
            let s = sample_ng_module(&grp(2, 2, &[], &[]), 1, seed).unwrap();
            modules.push(s.module);
        }
        for m in &modules {
            let h = cohomology(m, 1).unwrap();
            assert_eq!(h.z, z1_all_pairs(m));
            if let Some(all) = enumerate_derivations(m, 1 << 20) {
                assert_eq!(all.len() as u64, (m.p() as u64).pow(h.z_dim() as u32));
                assert!(all.iter().all(|t| h.z.contains_vec(t)));
            }
            assert_eq!(h.b_dim(), m.dim() - m.fixed_points().dim());
            assert_eq!(h1_dim(m).unwrap(), h.h_dim());
            for tau in h.z_derivations() {
                assert!(is_derivation(m, &tau));
            }
        }
    }

    #[test]
    fn degree2_matches_all_triples() {
        let c2 = grp(2, 1, &[], &[]);
        let c4 = grp(2, 2, &[(0, "g2")], &[]);
        let v4 = grp(2, 2, &[], &[]);
        let c3 = grp(3, 1, &[], &[]);
        let modules = vec![
            GModule::trivial(c2.clone(), 2),
            GModule::regular(c2.clone()),
            GModule::trivial(c4.clone(), 1),
            GModule::trivial(v4.clone(), 1),
            GModule::regular(v4.clone()),
            GModule::trivial(c3.clone(), 1),
        ];
        let expect_h = [2, 0, 1, 3, 0, 1];
        for (m, &e) in modules.iter().zip(&expect_h) {
            let h = cohomology(m, 2).unwrap();
            assert_eq!(h.z, z2_all_triples(m));
            assert_eq!(h.h_dim(), e);
            for f in h.z_cocycles() {
                assert!(is_two_cocycle(m, &f));
            }
        }
    }

    #[test]
    fn degree2_cap() {
        let big = grp(2, 7, &[], &[]);
        assert!(matches!(cohomology(&GModule::trivial(big, 1), 2), Err(Error::OrderCap { .. })));
    }

    #[test]
    fn derivations_give_automorphisms_of_order_p() {
        // D16: g1 = s, g2 = r, g3 = r², g4 = r⁴.
        let g = grp(2, 4, &[(1, "g3"), (2, "g4")], &[(1, 0, "g3*g4"), (2, 0, "g4")]);
        let n = g.closure(&[4]);
        assert_eq!(n.order(), 8);
        let w = g.omega1(&g.center());
        let cm = module_from_conjugation(&g, &n, &w).unwrap();
        let h = cohomology(&cm.module, 1).unwrap();
        assert_eq!(h.z_dim(), 1);
        let tau = &h.z_derivations()[0];
        let psi = derivation_to_automorphism(&g, &cm, tau).unwrap();
        assert_eq!(map_order(&psi), 2);
        assert!(n.members().iter().all(|&x| psi.apply(x) == x));
        assert!(psi.apply(8) != 8);
        let zero = Derivation::zero(cm.quotient_group.order(), 1);
        assert!(derivation_to_automorphism(&g, &cm, &zero).unwrap().is_identity());
    }

    #[test]
    fn additivity_and_conjugation_derivations() {
        let heis = grp(3, 3, &[], &[(1, 0, "g3")]);
        let z = heis.center();
        let cm = module_from_conjugation(&heis, &z, &z).unwrap();
        let h = cohomology(&cm.module, 1).unwrap();
        assert_eq!(h.h_dim(), 2);
        let ds = h.z_derivations();
        let p = 3;
        let sum = Derivation { dim: 1, table: fp_linalg::add(&ds[0].table, &ds[1].table, p) };
        let a = derivation_to_automorphism(&heis, &cm, &ds[0]).unwrap();
        let b = derivation_to_automorphism(&heis, &cm, &ds[1]).unwrap();
        let s = derivation_to_automorphism(&heis, &cm, &sum).unwrap();
        assert_eq!(s, a.compose(&b));
        for x in heis.elements() {
            let d = conjugation_derivation(&heis, &cm, x).unwrap();
            let psi = derivation_to_automorphism(&heis, &cm, &d).unwrap();
            assert_eq!(psi, GroupMap::conjugation(&heis, x));
            if z.contains(x) {
                assert!(d.is_zero());
            }
        }
        // Class 2: every central automorphism is inner here.
        assert!(derivation_span_noninner_probe(&heis, &cm, &h).unwrap().is_none());
    }

    #[test]
    fn inflation_is_injective_and_functorial() {
        let g = grp(2, 4, &[(1, "g3"), (2, "g4")], &[(1, 0, "g3*g4"), (2, 0, "g4")]);
        let z = g.center();
        let n = g.closure(&[4]);
        let mid = g.closure(&[2]);
        let (_, coarse) = quotient(&g, &n).unwrap();
        let (_, middle) = quotient(&g, &mid).unwrap();
        let (_, fine) = quotient(&g, &z).unwrap();
        let cm = module_from_conjugation(&g, &n, &z).unwrap();
        let h = cohomology(&cm.module, 1).unwrap();
        let tau = &h.z_derivations()[0];
        let one = inflate(tau, &coarse, &fine);
        let two = inflate(&inflate(tau, &coarse, &middle), &middle, &fine);
        assert_eq!(one, two);
        assert!(!one.is_zero());
        let zero = Derivation::zero(coarse.section.len(), 1);
        assert!(inflate(&zero, &coarse, &fine).is_zero());
        let cm_fine = module_from_conjugation(&g, &z, &z).unwrap();
        assert!(is_derivation(&cm_fine.module, &one));
    }
}
