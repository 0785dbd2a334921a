//! Extensions of an elementary abelian module by a group, built from a
//! normalized 2-cocycle, and the transfer maps between the group algebras of
//! the extension and of the quotient.
//!
//! The extension has elements `(a, g)` with `a ∈ F_p^t` encoded in base `p`
//! (first coordinate least significant) and index `a + |N|·g`.

use std::sync::Arc;

use crate::cohomology::{coboundary2, is_two_cocycle, CohomologySpace, Derivation, TwoCocycle};
use crate::error::{Error, Result};
use crate::fp_linalg::{self, FpMatrix, FpSubspace};
use crate::gmodule::{FreeBimodule, GModule, Side};
use crate::group::{GroupMap, GroupTable, MAX_ORDER_CAP};

#[derive(Clone, Debug)]
pub struct ExtensionResult {
    pub total: Arc<GroupTable>,
    pub base: Arc<GroupTable>,
    /// Rank of the kernel.
    pub t: usize,
    /// `η`: total → base.
    pub projection: GroupMap,
    /// Kernel element with code `a` ↦ total index.
    pub kernel_embed: Vec<u32>,
    /// `g ↦ (0, g)`.
    pub section: Vec<u32>,
}

impl ExtensionResult {
    pub fn kernel_order(&self) -> usize {
        self.kernel_embed.len()
    }

    /// `a_i`: the kernel element with a one in coordinate `i`.
    pub fn kernel_generators(&self) -> Vec<u32> {
        let p = self.base.p() as usize;
        (0..self.t).map(|i| self.kernel_embed[p.pow(i as u32)]).collect()
    }

    pub fn index(&self, a: u32, g: u32) -> u32 {
        a + self.kernel_order() as u32 * g
    }

    /// The module pulled back to the extension along `η`.
    pub fn inflate_module(&self, m: &GModule) -> GModule {
        m.pull_back(self.total.clone(), &self.projection.image_of)
    }
}

fn encode(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn decode(mut code: u32, p: u32, t: usize) -> Vec<u32> {
    (0..t)
        .map(|_| {
            let c = code % p;
            code /= p;
            c
        })
        .collect()
}

/// Builds the group on `N × G` with `(a,g)(b,h) = (a·h + b + f(g,h), gh)`.
pub fn build_extension(m: &GModule, f: &TwoCocycle) -> Result<ExtensionResult> {
    build_extension_with_cap(m, f, MAX_ORDER_CAP)
}

pub fn build_extension_with_cap(m: &GModule, f: &TwoCocycle, cap: usize) -> Result<ExtensionResult> {
    if m.side() != Side::Right {
        return Err(Error::Invalid("extensions need a right module".into()));
    }
    let g = m.group().clone();
    let p = g.p();
    let t = m.dim();
    let nn = (p as usize).pow(t as u32);
    let order = nn * g.order();
    if order > cap {
        return Err(Error::OrderCap { order, cap });
    }
    if f.order != g.order() || f.dim != t {
        return Err(Error::NotACocycle("cochain has the wrong shape".into()));
    }
    if !f.is_normalized() {
        return Err(Error::NotACocycle("cochain is not normalized".into()));
    }
    if !is_two_cocycle(m, f) {
        return Err(Error::NotACocycle("cocycle identity fails".into()));
    }
    let vectors: Vec<Vec<u32>> = (0..nn as u32).map(|c| decode(c, p, t)).collect();
    // a·h for every code and group element.
    let moved: Vec<Vec<u32>> = g
        .elements()
        .map(|h| vectors.iter().map(|v| encode(&m.apply(v, h), p)).collect())
        .collect();
    let mut mul = vec![0u32; order * order];
    for x in 0..order {
        let (a, gx) = (x % nn, (x / nn) as u32);
        for y in 0..order {
            let (b, hy) = (y % nn, (y / nn) as u32);
            let ah = &vectors[moved[hy as usize][a] as usize];
            let sum = fp_linalg::add(&fp_linalg::add(ah, &vectors[b], p), f.value(gx, hy), p);
            mul[x * order + y] = encode(&sum, p) + nn as u32 * g.mul(gx, hy);
        }
    }
    let total = GroupTable::from_table(p, order, mul, None)
        .map_err(|e| Error::NotACocycle(format!("extension table rejected: {e}")))?;
    let projection = GroupMap { image_of: (0..order as u32).map(|x| x / nn as u32).collect() };
    let kernel_embed = (0..nn as u32).collect();
    let section = g.elements().map(|x| x * nn as u32).collect();
    Ok(ExtensionResult { total: Arc::new(total), base: g, t, projection, kernel_embed, section })
}

/// `f(g^i, g^j) = ⌊(i+j)/p⌋` on the cyclic group of order `p` with the
/// trivial one-dimensional module. Elements of `g` are assumed to be
/// `g^0, g^1, …` in index order.
pub fn carry_cocycle(p: u32) -> TwoCocycle {
    let n = p as usize;
    let mut f = TwoCocycle::zero(n, 1);
    for i in 0..p {
        for j in 0..p {
            f.set(i, j, &[(i + j) / p]);
        }
    }
    f
}

/// Solves `f − f2 = ∂σ`; on success returns `(a, g) ↦ (a + σ(g), g)` from the
/// extension of `f` to the extension of `f2`, checked to be a homomorphism.
pub fn equivalence_map(m: &GModule, ext: &ExtensionResult, f: &TwoCocycle, f2: &TwoCocycle) -> Result<Option<GroupMap>> {
    let sigma = match coboundary_preimage(m, &diff(f, f2, m.p())) {
        Some(s) => s,
        None => return Ok(None),
    };
    let ext2 = build_extension(m, f2)?;
    let p = m.p();
    let nn = ext.kernel_order() as u32;
    let image: Vec<u32> = ext
        .total
        .elements()
        .map(|x| {
            let (a, g) = (x % nn, x / nn);
            let v = fp_linalg::add(&decode(a, p, ext.t), sigma.value(g), p);
            encode(&v, p) + nn * g
        })
        .collect();
    let map = GroupMap::new(&ext.total, &ext2.total, image)?;
    Ok(Some(map))
}

fn diff(f: &TwoCocycle, f2: &TwoCocycle, p: u32) -> TwoCocycle {
    TwoCocycle { order: f.order, dim: f.dim, table: fp_linalg::sub(&f.table, &f2.table, p) }
}

/// A 1-cochain `σ` with `σ(1) = 0` and `∂σ = target`, if one exists.
pub fn coboundary_preimage(m: &GModule, target: &TwoCocycle) -> Option<Derivation> {
    let n = m.group().order();
    let dim = m.dim();
    let mut cols = Vec::new();
    for x in 1..n {
        for i in 0..dim {
            let mut s = Derivation::zero(n, dim);
            s.table[x * dim + i] = 1;
            cols.push(coboundary2(m, &s).table);
        }
    }
    if cols.is_empty() {
        return fp_linalg::is_zero(&target.table).then(|| Derivation::zero(n, dim));
    }
    let a = FpMatrix::from_rows(m.p(), target.table.len(), &cols).transpose();
    let c = a.solve(&target.table)?;
    let mut table = vec![0u32; dim];
    table.extend(c);
    Some(Derivation { dim, table })
}

/// Whether two cocycles define the same class.
pub fn cohomologous(space: &CohomologySpace, f: &TwoCocycle, f2: &TwoCocycle) -> bool {
    let d = fp_linalg::sub(&f.table, &f2.table, space.z.p());
    space.b.contains_vec(&d)
}

/// Transfer maps between `∏ⁿ F_p(E)` and `∏ⁿ F_p(G)` for an extension `E`.
#[derive(Clone, Debug)]
pub struct TransferPair {
    pub ext: ExtensionResult,
    pub n: usize,
    /// `∏ⁿ F_p(E) → ∏ⁿ F_p(G)`: sums coefficients over each fiber of `η`.
    pub down: FpMatrix,
    /// `∏ⁿ F_p(G) → ∏ⁿ F_p(E)`: `g ↦ (0,g)·Π(a_i − 1)^{p−1}`.
    pub up: FpMatrix,
    /// `Π_i (a_i − 1)^{k_i}` in `F_p(E)` for every exponent tuple, in
    /// [`exponent_tuples`] order.
    pub kernel_powers: Vec<Vec<u32>>,
    free: FreeBimodule,
}

/// All tuples `(k_1, …, k_t)` with `0 ≤ k_i ≤ p − 1`, first coordinate fastest.
pub fn exponent_tuples(p: u32, t: usize) -> Vec<Vec<u32>> {
    let total = (p as usize).pow(t as u32);
    (0..total as u32).map(|c| decode(c, p, t)).collect()
}

/// Which side the `W_n` coefficients multiply from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionSide {
    /// `y = Σ λ(i,l) · e_{i,l}`.
    Left,
    /// `y = Σ e_{i,l} · λ₁(i,l)`.
    Right,
}

/// Coefficients of a kernel element in the `e`-basis over `W_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    /// `(exponents, copy, coefficients over the section)`; only nonzero entries.
    pub terms: Vec<(Vec<u32>, usize, Vec<u32>)>,
}

impl TransferPair {
    pub fn new(ext: &ExtensionResult, n: usize) -> Self {
        let e = ext.total.clone();
        let g = &ext.base;
        let p = g.p();
        let eo = e.order();
        let go = g.order();
        let free = FreeBimodule::new(e.clone(), n);
        let mut down = FpMatrix::zeros(p, n * eo, n * go);
        for l in 0..n {
            for x in e.elements() {
                down.set(l * eo + x as usize, l * go + ext.projection.apply(x) as usize, 1);
            }
        }
        let single = FreeBimodule::new(e.clone(), 1);
        let gens = ext.kernel_generators();
        let minus_one: Vec<Vec<u32>> = gens
            .iter()
            .map(|&a| {
                let mut v = single.unit(a);
                v[0] = (v[0] + p - 1) % p;
                v
            })
            .collect();
        let kernel_powers: Vec<Vec<u32>> = exponent_tuples(p, ext.t)
            .iter()
            .map(|k| {
                let mut acc = single.unit(0);
                for (i, &ki) in k.iter().enumerate() {
                    for _ in 0..ki {
                        acc = single.alg_mul(&acc, &minus_one[i]);
                    }
                }
                acc
            })
            .collect();
        let norm = kernel_powers.last().unwrap().clone();
        let mut up = FpMatrix::zeros(p, n * go, n * eo);
        for l in 0..n {
            for x in g.elements() {
                let img = single.alg_mul(&single.unit(ext.section[x as usize]), &norm);
                up.row_mut(l * go + x as usize)[l * eo..(l + 1) * eo].copy_from_slice(&img);
            }
        }
        TransferPair { ext: ext.clone(), n, down, up, kernel_powers, free }
    }

    pub fn free(&self) -> &FreeBimodule {
        &self.free
    }

    /// `Π(a_i − 1)^{p−1}`, which equals the sum over the kernel.
    pub fn norm_element(&self) -> &[u32] {
        self.kernel_powers.last().unwrap()
    }

    pub fn apply_down(&self, x: &[u32]) -> Vec<u32> {
        self.down.vec_mul(x)
    }

    pub fn apply_up(&self, x: &[u32]) -> Vec<u32> {
        self.up.vec_mul(x)
    }

    /// `e_{k,l}`: `Π(a_i − 1)^{k_i}` in copy `l`, zero elsewhere.
    pub fn e(&self, k: &[u32], l: usize) -> Vec<u32> {
        let idx = encode(k, self.ext.base.p()) as usize;
        let eo = self.ext.total.order();
        let mut v = vec![0u32; self.n * eo];
        v[l * eo..(l + 1) * eo].copy_from_slice(&self.kernel_powers[idx]);
        v
    }

    /// `(0,g)·e_{k,l}` or `e_{k,l}·(0,g)` for every basis slot with `Σk ≥ 1`,
    /// in the order (exponents, copy, g).
    fn expansion_basis(&self, side: ExpansionSide) -> Vec<(Vec<u32>, usize, u32, Vec<u32>)> {
        let p = self.ext.base.p();
        let mut out = Vec::new();
        for k in exponent_tuples(p, self.ext.t).into_iter().filter(|k| k.iter().any(|&x| x > 0)) {
            for l in 0..self.n {
                let e = self.e(&k, l);
                for g in self.ext.base.elements() {
                    let s = self.free.unit(self.ext.section[g as usize]);
                    let v = match side {
                        ExpansionSide::Left => self.free.left_mul(&s, &e),
                        ExpansionSide::Right => self.free.right_mul(&e, &s),
                    };
                    out.push((k.clone(), l, g, v));
                }
            }
        }
        out
    }

    /// Whether the products `(0,g)·e_{k,l}` are linearly independent and
    /// span `ker(down)`.
    pub fn expansion_basis_is_valid(&self, side: ExpansionSide) -> bool {
        let rows: Vec<Vec<u32>> = self.expansion_basis(side).into_iter().map(|r| r.3).collect();
        let span = FpSubspace::from_spanning(self.ext.base.p(), self.free.dim(), &rows);
        span.dim() == rows.len() && span == self.kernel_of_down()
    }

    /// Expands `y ∈ ker(down)`; `None` if `y` is outside the kernel.
    pub fn expand(&self, y: &[u32], side: ExpansionSide) -> Option<Expansion> {
        let basis = self.expansion_basis(side);
        let rows: Vec<Vec<u32>> = basis.iter().map(|r| r.3.clone()).collect();
        let a = FpMatrix::from_rows(self.ext.base.p(), self.free.dim(), &rows).transpose();
        let c = a.solve(y)?;
        let go = self.ext.base.order();
        let mut terms = Vec::new();
        for (chunk_idx, chunk) in c.chunks(go).enumerate() {
            if !fp_linalg::is_zero(chunk) {
                let (k, l, _, _) = &basis[chunk_idx * go];
                terms.push((k.clone(), *l, chunk.to_vec()));
            }
        }
        Some(Expansion { terms })
    }

    /// Rebuilds `Σ λ(k,l)·e_{k,l}` from an expansion.
    pub fn reconstruct(&self, ex: &Expansion, side: ExpansionSide) -> Vec<u32> {
        let p = self.ext.base.p();
        let mut y = vec![0u32; self.free.dim()];
        for (k, l, coeffs) in &ex.terms {
            let e = self.e(k, *l);
            for g in self.ext.base.elements() {
                let c = coeffs[g as usize];
                if c == 0 {
                    continue;
                }
                let s = self.free.unit(self.ext.section[g as usize]);
                let v = match side {
                    ExpansionSide::Left => self.free.left_mul(&s, &e),
                    ExpansionSide::Right => self.free.right_mul(&e, &s),
                };
                fp_linalg::axpy(&mut y, &v, c, p);
            }
        }
        y
    }

    pub fn kernel_of_down(&self) -> FpSubspace {
        self.down.left_kernel()
    }

    pub fn image_of_up(&self) -> FpSubspace {
        FpSubspace::row_space(&self.up)
    }

    /// `I_{n,m}`: the two-sided submodule generated by `e_{k,l}` with `Σk ≥ m`.
    pub fn filtration(&self, m: u32) -> Result<FpSubspace> {
        let p = self.ext.base.p();
        let gens: Vec<Vec<u32>> = exponent_tuples(p, self.ext.t)
            .into_iter()
            .filter(|k| k.iter().sum::<u32>() >= m)
            .flat_map(|k| (0..self.n).map(move |l| (k.clone(), l)))
            .map(|(k, l)| self.e(&k, l))
            .collect();
        let left = self.free.left_module().submodule_generated(&gens);
        if !self.free.right_module().is_submodule(&left) {
            return Err(Error::NotASubmodule);
        }
        Ok(left)
    }

    /// Span of componentwise products `x·y` with `x ∈ a`, `y ∈ b`.
    pub fn product_span(&self, a: &FpSubspace, b: &FpSubspace) -> FpSubspace {
        let mut ech = fp_linalg::EchelonBuilder::new(self.ext.base.p(), self.free.dim());
        for x in a.basis_vecs() {
            for y in b.basis_vecs() {
                ech.insert(self.free.tuple_mul(&x, &y));
                if ech.is_full() {
                    return ech.into_subspace();
                }
            }
        }
        ech.into_subspace()
    }
}

pub fn transfer_maps(ext: &ExtensionResult, n: usize) -> TransferPair {
    TransferPair::new(ext, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohomology::cohomology;
    use crate::group::{find_isomorphism, PcPresentation};

    fn grp(p: u32, n: usize, pows: &[(usize, &str)], comms: &[(usize, usize, &str)]) -> Arc<GroupTable> {
        Arc::new(PcPresentation::parse_relations(p, n, pows, comms).unwrap().build().unwrap())
    }

    #[test]
    fn carry_cocycle_gives_cyclic_group() {
        for p in [2u32, 3, 5] {
            let cp = grp(p, 1, &[], &[]);
            let m = GModule::trivial(cp, 1);
            let ext = build_extension(&m, &carry_cocycle(p)).unwrap();
            assert_eq!(ext.total.order(), (p * p) as usize);
            assert_eq!(ext.total.exponent(), (p * p) as usize);
        }
    }

    #[test]
    fn split_extension_has_homomorphic_section() {
        let d8 = grp(2, 3, &[(1, "g3")], &[(1, 0, "g3")]);
        let m = GModule::trivial(d8.clone(), 2);
        let ext = build_extension(&m, &TwoCocycle::zero(8, 2)).unwrap();
        assert_eq!(ext.total.order(), 32);
        let t = &ext.total;
        for x in d8.elements() {
            assert_eq!(ext.projection.apply(ext.section[x as usize]), x);
            for y in d8.elements() {
                assert_eq!(t.mul(ext.section[x as usize], ext.section[y as usize]), ext.section[d8.mul(x, y) as usize]);
            }
        }
        GroupMap::new(t, &d8, ext.projection.image_of.clone()).unwrap();
        let kernel: Vec<u32> = t.elements().filter(|&x| ext.projection.apply(x) == 0).collect();
        assert_eq!(kernel, ext.kernel_embed);
    }

    #[test]
    fn broken_cocycle_is_rejected() {
        let c2 = grp(2, 1, &[], &[]);
        let m = GModule::trivial(c2.clone(), 1);
        let c4 = grp(2, 2, &[(0, "g2")], &[]);
        let m4 = GModule::trivial(c4, 1);
        let mut f = TwoCocycle::zero(4, 1);
        f.set(1, 2, &[1]);
        assert!(matches!(build_extension(&m4, &f), Err(Error::NotACocycle(_))));
        let mut g = TwoCocycle::zero(2, 1);
        g.set(0, 1, &[1]);
        assert!(matches!(build_extension(&m, &g), Err(Error::NotACocycle(_))));
    }

    #[test]
    fn equivalence_of_cohomologous_cocycles() {
        let c2 = grp(2, 1, &[], &[]);
        let m = GModule::trivial(c2.clone(), 1);
        let zero = TwoCocycle::zero(2, 1);
        let carry = carry_cocycle(2);
        let ext0 = build_extension(&m, &zero).unwrap();
        assert!(equivalence_map(&m, &ext0, &zero, &zero).unwrap().unwrap().is_identity());
        assert!(equivalence_map(&m, &ext0, &zero, &carry).unwrap().is_none());
        let ext_c = build_extension(&m, &carry).unwrap();
        assert!(find_isomorphism(&ext0.total, &ext_c.total).is_none());

        let v4 = grp(2, 2, &[], &[]);
        let m = GModule::regular(v4.clone());
        let space = cohomology(&m, 2).unwrap();
        assert_eq!(space.h_dim(), 0);
        let f = &space.z_cocycles()[space.z_dim() - 1];
        let mut sigma = Derivation::zero(4, 4);
        sigma.table[5] = 1;
        sigma.table[14] = 1;
        let f2 = TwoCocycle { order: 4, dim: 4, table: fp_linalg::add(&f.table, &coboundary2(&m, &sigma).table, 2) };
        let ext = build_extension(&m, f).unwrap();
        assert!(cohomologous(&space, f, &f2));
        assert!(equivalence_map(&m, &ext, f, &f2).unwrap().is_some());
    }

    fn sample_pair(p: u32, t: usize, n: usize) -> TransferPair {
        let c = grp(p, 1, &[], &[]);
        let m = GModule::trivial(c, t);
        let ext = build_extension(&m, &TwoCocycle::zero(p as usize, t)).unwrap();
        transfer_maps(&ext, n)
    }

    #[test]
    fn transfer_identities() {
        for (p, t, n) in [(2, 1, 2), (2, 2, 1), (3, 1, 1), (3, 2, 1)] {
            let tp = sample_pair(p, t, n);
            // down∘up = 0 and up∘down = right multiplication by the norm.
            assert!(tp.up.mul(&tp.down).is_zero());
            let composite = tp.down.mul(&tp.up);
            let norm = tp.norm_element().to_vec();
            assert_eq!(composite, tp.free().right_mul_matrix(&norm));
            assert_eq!(tp.up.rank(), tp.up.rows());
            assert!(tp.expansion_basis_is_valid(ExpansionSide::Left));
            assert!(tp.expansion_basis_is_valid(ExpansionSide::Right));
            let kernel = tp.kernel_of_down();
            assert_eq!(kernel, tp.filtration(1).unwrap());
        }
    }

    #[test]
    fn down_is_multiplicative() {
        let tp = sample_pair(3, 1, 1);
        let e = &tp.ext;
        let fe = FreeBimodule::new(e.total.clone(), 1);
        let fg = FreeBimodule::new(e.base.clone(), 1);
        let x: Vec<u32> = (0..9).map(|i| (i * 7 + 1) % 3).collect();
        let y: Vec<u32> = (0..9).map(|i| (i * i + 2) % 3).collect();
        assert_eq!(tp.apply_down(&fe.alg_mul(&x, &y)), fg.alg_mul(&tp.apply_down(&x), &tp.apply_down(&y)));
    }

    #[test]
    fn expansion_reconstructs() {
        let tp = sample_pair(3, 2, 1);
        let kernel = tp.kernel_of_down();
        let basis = kernel.basis_vecs();
        let y = fp_linalg::add(&basis[0], &basis[basis.len() / 2], 3);
        for side in [ExpansionSide::Left, ExpansionSide::Right] {
            let ex = tp.expand(&y, side).unwrap();
            assert_eq!(tp.reconstruct(&ex, side), y);
        }
        let mut outside = vec![0u32; 27];
        outside[0] = 1;
        assert!(tp.expand(&outside, ExpansionSide::Left).is_none());
    }

    #[test]
    fn filtration_layers() {
        for (p, t, n) in [(2u32, 1usize, 1usize), (2, 2, 1), (3, 2, 1), (3, 1, 2)] {
            let tp = sample_pair(p, t, n);
            let go = tp.ext.base.order();
            let top = t as u32 * (p - 1) + 1;
            let layers: Vec<FpSubspace> = (0..=top).map(|m| tp.filtration(m).unwrap()).collect();
            assert_eq!(layers[0].dim(), tp.free().dim());
            assert_eq!(layers[top as usize].dim(), 0);
            assert_eq!(layers[1].dim() - layers[2].dim(), n * t * go);
            if t == 2 {
                for i in 0..p as usize {
                    assert_eq!(layers[i].dim() - layers[i + 1].dim(), n * (i + 1) * go);
                }
            }
            for a in 1..top {
                for b in 1..top - a {
                    let prod = tp.product_span(&layers[a as usize], &layers[b as usize]);
                    assert_eq!(prod, layers[(a + b) as usize]);
                }
            }
        }
    }
}
