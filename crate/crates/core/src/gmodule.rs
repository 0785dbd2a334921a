//! Finite-dimensional F_p(G)-modules.
//!
//! Vectors are rows and act on the right: `v ↦ v · act(g)`. A right module
//! satisfies `act(gh) = act(g)·act(h)`. A left module is stored the same way
//! but with `act(gh) = act(h)·act(g)`, i.e. as a right module over the
//! opposite group.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cohomology;
use crate::error::{Error, Result};
use crate::fp_linalg::{self, EchelonBuilder, FpMatrix, FpSubspace};
use crate::group::{quotient, GroupTable, QuotientMap, Subgroup};

/// Default ceiling on module dimension.
pub const DEFAULT_DIM_CAP: usize = 8192;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Side {
    Right,
    Left,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Right => Side::Left,
            Side::Left => Side::Right,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GModule {
    group: Arc<GroupTable>,
    dim: usize,
    act: Vec<FpMatrix>,
    side: Side,
}

impl GModule {
    /// Checks the identity and the product law `act(x s)` against every
    /// generator `s`, which determines the rest.
    pub fn new(group: Arc<GroupTable>, side: Side, act: Vec<FpMatrix>) -> Result<Self> {
        let m = Self::trusted(group, side, act)?;
        m.verify()?;
        Ok(m)
    }

    fn trusted(group: Arc<GroupTable>, side: Side, act: Vec<FpMatrix>) -> Result<Self> {
        if act.len() != group.order() {
            return Err(Error::NotAModule("one matrix per element is required".into()));
        }
        let dim = act.first().map(|a| a.rows()).unwrap_or(0);
        if dim > DEFAULT_DIM_CAP {
            return Err(Error::DimensionCap { dim, cap: DEFAULT_DIM_CAP });
        }
        if act.iter().any(|a| a.rows() != dim || a.cols() != dim || a.p() != group.p()) {
            return Err(Error::NotAModule("action matrices have the wrong shape".into()));
        }
        Ok(GModule { group, dim, act, side })
    }

    pub fn verify(&self) -> Result<()> {
        if !self.act[0].is_identity() {
            return Err(Error::NotAModule("identity does not act trivially".into()));
        }
        let g = &self.group;
        for x in g.elements() {
            for &s in g.generators() {
                let expect = match self.side {
                    Side::Right => self.act(x).mul(self.act(s)),
                    Side::Left => self.act(s).mul(self.act(x)),
                };
                if &expect != self.act(g.mul(x, s)) {
                    return Err(Error::NotAModule(format!("product law fails at ({x}, {s})")));
                }
            }
        }
        Ok(())
    }

    pub fn trivial(group: Arc<GroupTable>, dim: usize) -> Self {
        let id = FpMatrix::identity(group.p(), dim);
        let act = vec![id; group.order()];
        GModule { group, dim, act, side: Side::Right }
    }

    /// Permutation module on `n` copies of the group, with `g` sending the
    /// basis vector `(l, a)` to `(l, a g)` (right) or `(l, g a)` (left).
    pub fn free(group: Arc<GroupTable>, n: usize, side: Side) -> Self {
        let order = group.order();
        let p = group.p();
        let act = group
            .elements()
            .map(|g| {
                let mut m = FpMatrix::zeros(p, n * order, n * order);
                for l in 0..n {
                    for a in 0..order as u32 {
                        let b = match side {
                            Side::Right => group.mul(a, g),
                            Side::Left => group.mul(g, a),
                        };
                        m.set(l * order + a as usize, l * order + b as usize, 1);
                    }
                }
                m
            })
            .collect();
        GModule { group, dim: n * order, act, side }
    }

    pub fn regular(group: Arc<GroupTable>) -> Self {
        Self::free(group, 1, Side::Right)
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }
    pub fn p(&self) -> u32 {
        self.group.p()
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn side(&self) -> Side {
        self.side
    }
    pub fn act(&self, g: u32) -> &FpMatrix {
        &self.act[g as usize]
    }
    pub fn actions(&self) -> &[FpMatrix] {
        &self.act
    }

    /// `v · g` (or `g · v` for a left module).
    pub fn apply(&self, v: &[u32], g: u32) -> Vec<u32> {
        self.act(g).vec_mul(v)
    }

    /// The same module as a right module: a left action is turned into
    /// `v · g := g⁻¹ · v`.
    pub fn to_right(&self) -> GModule {
        match self.side {
            Side::Right => self.clone(),
            Side::Left => {
                let act = self.group.elements().map(|g| self.act[self.group.inv(g) as usize].clone()).collect();
                GModule { group: self.group.clone(), dim: self.dim, act, side: Side::Right }
            }
        }
    }

    /// `M^G`: vectors fixed by every group element.
    pub fn fixed_points(&self) -> FpSubspace {
        let p = self.p();
        let gens = self.group.generators();
        if gens.is_empty() || self.dim == 0 {
            return FpSubspace::full(p, self.dim);
        }
        let id = FpMatrix::identity(p, self.dim);
        let mut stacked = FpMatrix::zeros(p, 0, self.dim);
        for &s in gens {
            stacked = stacked.stack(&self.act(s).sub(&id).transpose());
        }
        stacked.kernel()
    }

    /// `J_G(M) = Σ_g image(act(g) − 1)`: the submodule generated by the
    /// images of `act(s) − 1` for generators `s`, as `gh − 1 = (g − 1)h + (h − 1)`.
    pub fn radical(&self) -> FpSubspace {
        let p = self.p();
        let id = FpMatrix::identity(p, self.dim);
        let mut seeds = Vec::new();
        for &s in self.group.generators() {
            seeds.extend(FpSubspace::row_space(&self.act(s).sub(&id)).basis_vecs());
        }
        self.submodule_generated(&seeds)
    }

    /// Minimal number of module generators, `dim M − dim J_G(M)`.
    pub fn d_g(&self) -> usize {
        self.dim - self.radical().dim()
    }

    /// Unit vectors on the non-pivot columns of `J_G(M)`: they map to a
    /// basis of `M / J_G(M)` and so generate `M`.
    pub fn minimal_generators(&self) -> Vec<Vec<u32>> {
        self.radical().standard_complement()
    }

    /// Contragredient module on the dual space; the side flips.
    pub fn dual(&self) -> GModule {
        let act = self.act.iter().map(|a| a.transpose()).collect();
        GModule { group: self.group.clone(), dim: self.dim, act, side: self.side.flip() }
    }

    pub fn is_submodule(&self, sub: &FpSubspace) -> bool {
        let gens = self.group.generators();
        sub.basis_vecs().iter().all(|v| gens.iter().all(|&s| sub.contains_vec(&self.apply(v, s))))
    }

    /// Smallest submodule containing the given vectors.
    pub fn submodule_generated(&self, vectors: &[Vec<u32>]) -> FpSubspace {
        let mut ech = EchelonBuilder::new(self.p(), self.dim);
        let mut queue: Vec<Vec<u32>> = vectors.iter().filter(|v| ech.insert((*v).clone())).cloned().collect();
        let gens = self.group.generators();
        while let Some(v) = queue.pop() {
            for &s in gens {
                let w = self.apply(&v, s);
                if ech.insert(w.clone()) {
                    queue.push(w);
                }
            }
        }
        ech.into_subspace()
    }

    /// The action on a stable subspace, in the coordinates of its echelon basis.
    pub fn restrict(&self, sub: &FpSubspace) -> Result<GModule> {
        if !self.is_submodule(sub) {
            return Err(Error::NotASubmodule);
        }
        let basis = sub.basis_vecs();
        let act = self
            .act
            .iter()
            .map(|a| {
                let rows: Vec<Vec<u32>> =
                    basis.iter().map(|b| sub.coordinates(&a.vec_mul(b)).expect("stable subspace")).collect();
                FpMatrix::from_rows(self.p(), basis.len(), &rows)
            })
            .collect();
        Ok(GModule { group: self.group.clone(), dim: basis.len(), act, side: self.side })
    }

    /// `M / S`, with coordinates on the non-pivot columns of `S`.
    pub fn quotient(&self, sub: &FpSubspace) -> Result<GModule> {
        if !self.is_submodule(sub) {
            return Err(Error::NotASubmodule);
        }
        let comp = sub.standard_complement();
        let cols: Vec<usize> = comp.iter().map(|v| v.iter().position(|&x| x == 1).unwrap()).collect();
        let act = self
            .act
            .iter()
            .map(|a| {
                let rows: Vec<Vec<u32>> = comp
                    .iter()
                    .map(|c| {
                        let w = sub.reduce(&a.vec_mul(c));
                        cols.iter().map(|&j| w[j]).collect()
                    })
                    .collect();
                FpMatrix::from_rows(self.p(), cols.len(), &rows)
            })
            .collect();
        Ok(GModule { group: self.group.clone(), dim: cols.len(), act, side: self.side })
    }

    /// Pulls the module back along `G → G/N`.
    pub fn inflate(&self, big: Arc<GroupTable>, map: &QuotientMap) -> GModule {
        self.pull_back(big, &map.image_of)
    }

    /// Pulls the module back along a homomorphism given by its image table.
    pub fn pull_back(&self, big: Arc<GroupTable>, image_of: &[u32]) -> GModule {
        let act = big.elements().map(|g| self.act[image_of[g as usize] as usize].clone()).collect();
        GModule { group: big, dim: self.dim, act, side: self.side }
    }

    /// Restriction to the action of a subgroup, re-indexed on its own table.
    pub fn with_group(&self, group: Arc<GroupTable>, act: Vec<FpMatrix>) -> Result<GModule> {
        GModule::new(group, self.side, act)
    }

    /// Checks whether `m` intertwines the two actions.
    pub fn is_equivariant(&self, target: &GModule, m: &FpMatrix) -> bool {
        self.group.generators().iter().all(|&s| self.act(s).mul(m) == m.mul(target.act(s)))
    }
}

/// An equivariant linear map, `v ↦ v · matrix`.
#[derive(Clone, Debug)]
pub struct ModuleHom {
    pub matrix: FpMatrix,
}

impl ModuleHom {
    pub fn new(source: &GModule, target: &GModule, matrix: FpMatrix) -> Result<Self> {
        if matrix.rows() != source.dim() || matrix.cols() != target.dim() || !source.is_equivariant(target, &matrix) {
            return Err(Error::NotAModule("map is not equivariant".into()));
        }
        Ok(ModuleHom { matrix })
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.rank() == self.matrix.rows()
    }
}

/// An elementary abelian normal subgroup viewed as an F_p-vector space.
#[derive(Clone, Debug)]
pub struct WBasis {
    /// Least-index generators `w_1, …, w_r`.
    pub basis: Vec<u32>,
    /// `code_of[x]` is the base-p code of the coordinates of `x`, or `u32::MAX`.
    code_of: Vec<u32>,
    /// Element with a given coordinate code.
    element_of: Vec<u32>,
    p: u32,
}

impl WBasis {
    pub fn new(g: &GroupTable, w: &Subgroup) -> Result<Self> {
        if !w.is_elementary_abelian(g) {
            return Err(Error::NotElementaryAbelian);
        }
        let mut basis: Vec<u32> = Vec::new();
        let mut span = g.trivial();
        for &x in w.members() {
            if !span.contains(x) {
                basis.push(x);
                let mut seeds = span.members().to_vec();
                seeds.push(x);
                span = g.closure(&seeds);
            }
        }
        let p = g.p();
        let r = basis.len();
        let size = (p as usize).pow(r as u32);
        let mut element_of = vec![0u32; size];
        let mut code_of = vec![u32::MAX; g.order()];
        for code in 0..size {
            let coords = Self::decode_with(p, r, code as u32);
            let x = basis.iter().zip(&coords).fold(0u32, |acc, (&b, &c)| g.mul(acc, g.pow(b, c as u64)));
            element_of[code] = x;
            code_of[x as usize] = code as u32;
        }
        Ok(WBasis { basis, code_of, element_of, p })
    }

    fn decode_with(p: u32, r: usize, mut code: u32) -> Vec<u32> {
        let mut v = vec![0u32; r];
        for c in v.iter_mut() {
            *c = code % p;
            code /= p;
        }
        v
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn vector_of(&self, x: u32) -> Option<Vec<u32>> {
        let code = self.code_of[x as usize];
        (code != u32::MAX).then(|| Self::decode_with(self.p, self.rank(), code))
    }

    pub fn element_of(&self, v: &[u32]) -> u32 {
        let code = v.iter().rev().fold(0u32, |acc, &c| acc * self.p + c);
        self.element_of[code as usize]
    }

    pub fn contains(&self, x: u32) -> bool {
        self.code_of[x as usize] != u32::MAX
    }
}

/// `W` as a module for `G/N` under conjugation, with the data needed to move
/// between vectors and group elements.
#[derive(Clone, Debug)]
pub struct ConjugationModule {
    pub module: GModule,
    pub quotient_group: Arc<GroupTable>,
    pub map: QuotientMap,
    pub w: Subgroup,
    pub wbasis: WBasis,
}

/// Realizes an elementary abelian normal `w`, centralized by `n`, as a right
/// `G/N`-module: coset `gN` acts by `x ↦ g⁻¹ x g`.
pub fn module_from_conjugation(g: &GroupTable, n: &Subgroup, w: &Subgroup) -> Result<ConjugationModule> {
    if !w.is_normal() {
        return Err(Error::NotNormal);
    }
    let wbasis = WBasis::new(g, w)?;
    if !n.members().iter().all(|&k| w.members().iter().all(|&x| g.mul(x, k) == g.mul(k, x))) {
        return Err(Error::NotCentralized);
    }
    let (q, map) = quotient(g, n)?;
    let q = Arc::new(q);
    let r = wbasis.rank();
    let act = map
        .section
        .iter()
        .map(|&h| {
            let rows: Vec<Vec<u32>> =
                wbasis.basis.iter().map(|&b| wbasis.vector_of(g.conj(b, h)).expect("w is normal")).collect();
            FpMatrix::from_rows(g.p(), r, &rows)
        })
        .collect();
    let module = GModule::trusted(q.clone(), Side::Right, act)?;
    Ok(ConjugationModule { module, quotient_group: q, map, w: w.clone(), wbasis })
}

/// `∏ⁿ F_p(G)` with coordinates `(l, g) ↦ l·|G| + g`.
#[derive(Clone, Debug)]
pub struct FreeBimodule {
    group: Arc<GroupTable>,
    n: usize,
}

/// Which annihilator: `L_G` of a right submodule or `R_G` of a left one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AnnSide {
    LeftOfRight,
    RightOfLeft,
}

impl FreeBimodule {
    pub fn new(group: Arc<GroupTable>, n: usize) -> Self {
        FreeBimodule { group, n }
    }

    pub fn group(&self) -> &Arc<GroupTable> {
        &self.group
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn dim(&self) -> usize {
        self.n * self.group.order()
    }
    pub fn p(&self) -> u32 {
        self.group.p()
    }

    /// Product in `F_p(G)`.
    pub fn alg_mul(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let g = &self.group;
        let p = g.p();
        let mut out = vec![0u32; g.order()];
        for (x, &ca) in a.iter().enumerate() {
            if ca == 0 {
                continue;
            }
            for (y, &cb) in b.iter().enumerate() {
                if cb != 0 {
                    let z = g.mul(x as u32, y as u32) as usize;
                    out[z] = (out[z] + ca * cb) % p;
                }
            }
        }
        out
    }

    /// Group element as an algebra element.
    pub fn unit(&self, g: u32) -> Vec<u32> {
        let mut v = vec![0u32; self.group.order()];
        v[g as usize] = 1;
        v
    }

    /// `x · (y, …, y)`.
    pub fn right_mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let o = self.group.order();
        (0..self.n).flat_map(|l| self.alg_mul(&x[l * o..(l + 1) * o], y)).collect()
    }

    /// `(y, …, y) · x`.
    pub fn left_mul(&self, y: &[u32], x: &[u32]) -> Vec<u32> {
        let o = self.group.order();
        (0..self.n).flat_map(|l| self.alg_mul(y, &x[l * o..(l + 1) * o])).collect()
    }

    /// Componentwise product of two tuples.
    pub fn tuple_mul(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let o = self.group.order();
        (0..self.n).flat_map(|l| self.alg_mul(&x[l * o..(l + 1) * o], &y[l * o..(l + 1) * o])).collect()
    }

    /// Matrix of `v ↦ v · (y, …, y)`.
    pub fn right_mul_matrix(&self, y: &[u32]) -> FpMatrix {
        let rows: Vec<Vec<u32>> = (0..self.dim()).map(|i| self.right_mul(&self.basis_vector(i), y)).collect();
        FpMatrix::from_rows(self.p(), self.dim(), &rows)
    }

    /// Matrix of `v ↦ (y, …, y) · v`.
    pub fn left_mul_matrix(&self, y: &[u32]) -> FpMatrix {
        let rows: Vec<Vec<u32>> = (0..self.dim()).map(|i| self.left_mul(y, &self.basis_vector(i))).collect();
        FpMatrix::from_rows(self.p(), self.dim(), &rows)
    }

    pub fn basis_vector(&self, i: usize) -> Vec<u32> {
        let mut v = vec![0u32; self.dim()];
        v[i] = 1;
        v
    }

    /// `x · y = Σ_l x_l y_l ∈ F_p(G)`.
    pub fn dot(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let o = self.group.order();
        let p = self.p();
        let mut acc = vec![0u32; o];
        for l in 0..self.n {
            let prod = self.alg_mul(&x[l * o..(l + 1) * o], &y[l * o..(l + 1) * o]);
            acc = fp_linalg::add(&acc, &prod, p);
        }
        acc
    }

    /// Coefficient of the identity in `x · y`.
    pub fn delta_pairing(&self, x: &[u32], y: &[u32]) -> u32 {
        let o = self.group.order();
        let g = &self.group;
        let mut acc = 0u64;
        for l in 0..self.n {
            for a in 0..o {
                let b = l * o + g.inv(a as u32) as usize;
                acc += x[l * o + a] as u64 * y[b] as u64;
            }
        }
        (acc % self.p() as u64) as u32
    }

    /// Gram matrix of the pairing in the standard basis.
    pub fn gram(&self) -> FpMatrix {
        let o = self.group.order();
        let mut m = FpMatrix::zeros(self.p(), self.dim(), self.dim());
        for l in 0..self.n {
            for a in 0..o {
                m.set(l * o + a, l * o + self.group.inv(a as u32) as usize, 1);
            }
        }
        m
    }

    pub fn right_module(&self) -> GModule {
        GModule::free(self.group.clone(), self.n, Side::Right)
    }

    pub fn left_module(&self) -> GModule {
        GModule::free(self.group.clone(), self.n, Side::Left)
    }

    /// Span of the all-ones vector in each copy.
    pub fn socle(&self) -> FpSubspace {
        let o = self.group.order();
        let rows: Vec<Vec<u32>> = (0..self.n)
            .map(|l| {
                let mut v = vec![0u32; self.dim()];
                v[l * o..(l + 1) * o].iter_mut().for_each(|x| *x = 1);
                v
            })
            .collect();
        FpSubspace::from_spanning(self.p(), self.dim(), &rows)
    }

    /// `L_G(Q)` or `R_G(T)` as the orthogonal complement under the pairing.
    pub fn annihilator(&self, q: &FpSubspace, side: AnnSide) -> Result<FpSubspace> {
        let module = match side {
            AnnSide::LeftOfRight => self.right_module(),
            AnnSide::RightOfLeft => self.left_module(),
        };
        if !module.is_submodule(q) {
            return Err(Error::NotASubmodule);
        }
        if q.dim() == 0 {
            return Ok(FpSubspace::full(self.p(), self.dim()));
        }
        // ⟨x, y⟩ = x · Gram · yᵀ, so the complement is the kernel of Q·Gramᵀ.
        Ok(q.basis().mul(&self.gram().transpose()).kernel())
    }

    /// The same annihilator from the product-zero definition:
    /// `{x : x·y = 0 ∀y ∈ Q}` or `{x : y·x = 0 ∀y ∈ T}`.
    pub fn annihilator_by_products(&self, q: &FpSubspace, side: AnnSide) -> FpSubspace {
        let mut rows = FpMatrix::zeros(self.p(), 0, self.dim());
        for y in q.basis_vecs() {
            // Column block: x ↦ x·y (or y·x), a linear map into F_p(G).
            let images: Vec<Vec<u32>> = (0..self.dim())
                .map(|i| {
                    let e = self.basis_vector(i);
                    match side {
                        AnnSide::LeftOfRight => self.dot(&e, &y),
                        AnnSide::RightOfLeft => self.dot(&y, &e),
                    }
                })
                .collect();
            let m = FpMatrix::from_rows(self.p(), self.group.order(), &images);
            rows = rows.stack(&m.transpose());
        }
        if rows.rows() == 0 {
            return FpSubspace::full(self.p(), self.dim());
        }
        rows.kernel()
    }

    /// `Ann_L(x_1..x_s) = {(y_i) ∈ ∏^s F_p(G) : Σ_i (y_i,…,y_i)·x_i = 0}`;
    /// `Ann_R` multiplies on the other side.
    pub fn ann_tuple(&self, xs: &[Vec<u32>], side: AnnSide) -> FpSubspace {
        let o = self.group.order();
        let s = xs.len();
        let mut rows = Vec::with_capacity(s * o);
        for x in xs {
            for b in self.group.elements() {
                let u = self.unit(b);
                rows.push(match side {
                    AnnSide::LeftOfRight => self.left_mul(&u, x),
                    AnnSide::RightOfLeft => self.right_mul(x, &u),
                });
            }
        }
        let m = FpMatrix::from_rows(self.p(), self.dim(), &rows);
        m.left_kernel()
    }
}

/// A sampled submodule of `∏ⁿ F_p(G)` together with its measured `H¹`.
#[derive(Clone, Debug)]
pub struct SampledModule {
    pub carrier: FpSubspace,
    pub module: GModule,
    pub h1_dim: usize,
    pub n: usize,
    pub attempts: usize,
    /// Whether `dim H¹ ≤ n` held for the returned sample.
    pub is_ng: bool,
}

/// Maximum number of rejection-sampling rounds per seed.
pub const SAMPLE_RETRIES: usize = 64;

/// Radical layers `F_p(G) ⊇ J ⊇ J² ⊇ … ⊇ 0` of the regular right module.
pub fn radical_series(group: &Arc<GroupTable>) -> Vec<FpSubspace> {
    let reg = GModule::regular(group.clone());
    let mut layers = vec![FpSubspace::full(group.p(), group.order())];
    loop {
        let cur = layers.last().unwrap();
        if cur.dim() == 0 {
            return layers;
        }
        let sub = reg.restrict(cur).expect("radical layers are submodules");
        let rad = sub.radical();
        // Back to ambient coordinates.
        let vecs: Vec<Vec<u32>> = rad.basis_vecs().iter().map(|c| cur.combine(c)).collect();
        layers.push(FpSubspace::from_spanning(group.p(), group.order(), &vecs));
    }
}

/// Seeded right submodule of `∏ⁿ F_p(G)` containing the socle. Random
/// generators are drawn from random radical layers; up to
/// [`SAMPLE_RETRIES`] rounds look for `dim H¹ ≤ n`.
pub fn sample_ng_module(group: &Arc<GroupTable>, n: usize, seed: u64) -> Result<SampledModule> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let free = FreeBimodule::new(group.clone(), n);
    let right = free.right_module();
    let layers = radical_series(group);
    let o = group.order();
    let p = group.p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = None;
    for attempt in 1..=SAMPLE_RETRIES {
        let k = rng.gen_range(0..=n + 1);
        let mut gens = free.socle().basis_vecs();
        for _ in 0..k {
            let mut v = vec![0u32; free.dim()];
            for l in 0..n {
                let depth = rng.gen_range(0..layers.len() - 1);
                let layer = &layers[depth];
                let coords: Vec<u32> = (0..layer.dim()).map(|_| rng.gen_range(0..p)).collect();
                let part = layer.combine(&coords);
                v[l * o..(l + 1) * o].copy_from_slice(&part);
            }
            gens.push(v);
        }
        let carrier = right.submodule_generated(&gens);
        let module = right.restrict(&carrier)?;
        let h1 = cohomology::h1_dim(&module)?;
        let sample = SampledModule { carrier, module, h1_dim: h1, n, attempts: attempt, is_ng: h1 <= n };
        if sample.is_ng {
            return Ok(sample);
        }
        last = Some(sample);
    }
    Ok(last.expect("at least one attempt"))
}

/// An injective equivariant map `m → ∏ⁿ F_p(G)` sending a basis of `m^G` to
/// the socle vectors. Linear functionals `λ_i` with `λ_i(f_j) = δ_ij` on the
/// fixed basis `f_j` are solved for; then `v ↦ Σ_i Σ_g λ_i(v·g⁻¹) (i, g)`.
pub fn embed_into_free(m: &GModule) -> Result<(FreeBimodule, ModuleHom)> {
    if m.side() != Side::Right {
        return Err(Error::Invalid("embedding is defined for right modules".into()));
    }
    let fixed = m.fixed_points();
    let n = fixed.dim();
    if n == 0 {
        return Err(Error::Invalid("module has no fixed points".into()));
    }
    let g = m.group().clone();
    let o = g.order();
    let p = m.p();
    let fmat = fixed.basis().clone();
    let mut matrix = FpMatrix::zeros(p, m.dim(), n * o);
    for i in 0..n {
        let mut e = vec![0u32; n];
        e[i] = 1;
        let lambda = fmat.solve(&e).ok_or(Error::NoEmbedding)?;
        for a in g.elements() {
            let col = m.act(g.inv(a)).mul_vec(&lambda);
            for (r, &c) in col.iter().enumerate() {
                matrix.set(r, i * o + a as usize, c);
            }
        }
    }
    let free = FreeBimodule::new(g, n);
    let hom = ModuleHom::new(m, &free.right_module(), matrix).map_err(|_| Error::NoEmbedding)?;
    if !hom.is_injective() {
        return Err(Error::NoEmbedding);
    }
    let socle = free.socle();
    for (j, f) in fixed.basis_vecs().iter().enumerate() {
        let img = hom.matrix.vec_mul(f);
        if img != socle.basis().row(j) {
            return Err(Error::NoEmbedding);
        }
    }
    Ok((free, hom))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PcPresentation;

    fn grp(p: u32, n: usize, pows: &[(usize, &str)], comms: &[(usize, usize, &str)]) -> Arc<GroupTable> {
        Arc::new(PcPresentation::parse_relations(p, n, pows, comms).unwrap().build().unwrap())
    }

    fn d8() -> Arc<GroupTable> {
        grp(2, 3, &[(1, "g3")], &[(1, 0, "g3")])
    }

    #[test]
    fn regular_module_fixed_points_and_radical() {
        let g = d8();
        let reg = GModule::regular(g.clone());
        reg.verify().unwrap();
        let fixed = reg.fixed_points();
        assert_eq!(fixed.basis_vecs(), vec![vec![1; 8]]);
        assert_eq!(reg.radical().dim(), 7);
        assert_eq!(reg.d_g(), 1);
        assert_eq!(reg.minimal_generators().len(), 1);
    }

    #[test]
    fn trivial_module_facts() {
        let g = d8();
        let t = GModule::trivial(g, 3);
        assert_eq!(t.fixed_points().dim(), 3);
        assert_eq!(t.radical().dim(), 0);
        assert_eq!(t.dual().dim(), 3);
    }

    #[test]
    fn augmentation_ideal_of_c2_by_enumeration() {
        let g = grp(2, 1, &[], &[]);
        let reg = GModule::regular(g.clone());
        let aug = reg.radical();
        let m = reg.restrict(&aug).unwrap();
        assert_eq!(m.fixed_points().dim(), 1);
        let all = FpSubspace::full(2, 1).enumerate();
        let fixed = all.iter().filter(|v| g.elements().all(|x| m.apply(v, x) == **v)).count();
        assert_eq!(fixed, 2);
    }

    #[test]
    fn radical_of_c3_is_cyclic_on_g_minus_one() {
        let g = grp(3, 1, &[], &[]);
        let reg = GModule::regular(g.clone());
        let j = reg.radical();
        let m = reg.restrict(&j).unwrap();
        assert_eq!(m.d_g(), 1);
        let gen = j.combine(&m.minimal_generators()[0]);
        // g − 1 up to the chain J ⊃ J²: it must lie outside J².
        let j2 = m.radical();
        assert!(!j2.contains_vec(&m.minimal_generators()[0]));
        assert_eq!(gen.iter().sum::<u32>() % 3, 0);
    }

    #[test]
    fn free_module_rank() {
        let g = d8();
        for n in 1..=3 {
            assert_eq!(GModule::free(g.clone(), n, Side::Right).d_g(), n);
        }
    }

    #[test]
    fn dual_fixed_points_match_generator_count() {
        let g = d8();
        for seed in 0..6 {
            let s = sample_ng_module(&g, 2, seed).unwrap();
            let m = &s.module;
            assert_eq!(m.dual().fixed_points().dim(), m.d_g());
            let dd = m.dual().dual();
            assert_eq!(dd.actions(), m.actions());
        }
    }

    #[test]
    fn left_module_conversion() {
        let g = d8();
        let left = GModule::free(g.clone(), 1, Side::Left);
        left.verify().unwrap();
        let right = left.to_right();
        right.verify().unwrap();
        assert_eq!(right.fixed_points().dim(), 1);
    }

    #[test]
    fn bimodule_actions_commute_and_pairing_nondegenerate() {
        let g = d8();
        let f = FreeBimodule::new(g.clone(), 2);
        let a = {
            let mut v = f.unit(2);
            v[5] = 1;
            v
        };
        let b = f.unit(6);
        let la = f.left_mul_matrix(&a);
        let rb = f.right_mul_matrix(&b);
        assert_eq!(la.mul(&rb), rb.mul(&la));
        assert!(f.gram().inverse().is_some());
    }

    #[test]
    fn annihilator_definitions_agree_and_invert() {
        let g = d8();
        let f = FreeBimodule::new(g.clone(), 1);
        for seed in 0..8 {
            let s = sample_ng_module(&g, 1, seed).unwrap();
            let q = &s.carrier;
            let l = f.annihilator(q, AnnSide::LeftOfRight).unwrap();
            assert_eq!(l, f.annihilator_by_products(q, AnnSide::LeftOfRight));
            assert!(f.left_module().is_submodule(&l));
            assert_eq!(l.dim() + q.dim(), f.dim());
            let back = f.annihilator(&l, AnnSide::RightOfLeft).unwrap();
            assert_eq!(&back, q);
        }
        let zero = FpSubspace::zero(2, 8);
        assert_eq!(f.annihilator(&zero, AnnSide::LeftOfRight).unwrap().dim(), 8);
        let full = FpSubspace::full(2, 8);
        assert_eq!(f.annihilator(&full, AnnSide::LeftOfRight).unwrap().dim(), 0);
    }

    #[test]
    fn ann_tuple_brute_force_over_c2() {
        let g = grp(2, 1, &[], &[]);
        let f = FreeBimodule::new(g.clone(), 2);
        let xs = vec![vec![1, 1, 0, 1], vec![1, 1, 1, 1]];
        let ann = f.ann_tuple(&xs, AnnSide::LeftOfRight);
        let tuples = FpSubspace::full(2, 4).enumerate();
        for y in tuples {
            let mut acc = vec![0u32; 4];
            for (i, x) in xs.iter().enumerate() {
                acc = fp_linalg::add(&acc, &f.left_mul(&y[i * 2..i * 2 + 2], x), 2);
            }
            assert_eq!(ann.contains_vec(&y), fp_linalg::is_zero(&acc));
        }
        let unit = FreeBimodule::new(g.clone(), 1);
        assert_eq!(unit.ann_tuple(&[vec![1, 0]], AnnSide::LeftOfRight).dim(), 0);
        assert_eq!(unit.ann_tuple(&[vec![0, 0]], AnnSide::LeftOfRight).dim(), 2);
    }

    #[test]
    fn samples_over_cp_are_radical_powers() {
        let g = grp(3, 1, &[], &[]);
        let layers = radical_series(&g);
        for seed in 0..10 {
            let s = sample_ng_module(&g, 1, seed).unwrap();
            assert!(layers.contains(&s.carrier));
        }
    }

    #[test]
    fn sampling_is_deterministic_with_n_fixed_points() {
        let g = d8();
        let a = sample_ng_module(&g, 2, 7).unwrap();
        let b = sample_ng_module(&g, 2, 7).unwrap();
        assert_eq!(a.carrier, b.carrier);
        assert_eq!(a.module.fixed_points().dim(), 2);
    }

    #[test]
    fn embedding_is_injective_and_equivariant() {
        let g = grp(2, 2, &[], &[]);
        let t = GModule::trivial(g.clone(), 2);
        let (free, hom) = embed_into_free(&t).unwrap();
        assert_eq!(free.n(), 2);
        assert!(hom.is_injective());
        let reg = GModule::regular(g.clone());
        let (free, hom) = embed_into_free(&reg).unwrap();
        assert_eq!(free.n(), 1);
        assert!(hom.matrix.inverse().is_some());
        for seed in 0..5 {
            let s = sample_ng_module(&g, 2, seed).unwrap();
            let (free, hom) = embed_into_free(&s.module).unwrap();
            assert!(s.module.is_equivariant(&free.right_module(), &hom.matrix));
            assert!(hom.is_injective());
        }
    }

    #[test]
    fn conjugation_modules() {
        let g = d8();
        let z = g.center();
        let cm = module_from_conjugation(&g, &g.whole(), &g.omega1(&z)).unwrap();
        assert_eq!(cm.module.dim(), 1);
        assert_eq!(cm.quotient_group.order(), 1);
        let heis = grp(3, 3, &[], &[(1, 0, "g3")]);
        let z = heis.center();
        let cm = module_from_conjugation(&heis, &z, &z).unwrap();
        assert_eq!(cm.module.dim(), 1);
        assert_eq!(cm.quotient_group.order(), 9);
        assert!(cm.module.actions().iter().all(|a| a.is_identity()));
    }

    #[test]
    fn dihedral_sixteen_cyclic_maximal() {
        let g = grp(2, 4, &[(1, "g3"), (2, "g4")], &[(1, 0, "g3*g4"), (2, 0, "g4")]);
        let cyc = g.closure(&[4]);
        assert_eq!(cyc.order(), 8);
        assert!(cyc.is_cyclic(&g));
        let w = g.omega1(&g.center().clone());
        let w = g.intersection(&w, &g.omega1(&cyc));
        let cm = module_from_conjugation(&g, &cyc, &g.omega1(&g.centralizer(&cyc).clone())).unwrap_or_else(|_| {
            module_from_conjugation(&g, &cyc, &w).unwrap()
        });
        assert_eq!(cm.module.dim(), 1);
        assert!(cm.module.actions().iter().all(|a| a.is_identity()));
    }
}
