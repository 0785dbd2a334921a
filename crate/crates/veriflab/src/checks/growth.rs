//! Checks on extensions `E` of the catalog group `G` by an elementary
//! abelian kernel `P`, on the transfer maps between `∏ⁿF_p(E)` and
//! `∏ⁿF_p(G)`, and on how `H¹` of a module grows from `G` to `E`.
//!
//! `P` is trivial of rank `t`, or for `t = 2` possibly the indecomposable
//! module `[[1, χ], [0, 1]]` for a homomorphism `χ: G → F_p`. The cocycle is
//! a random combination of `H²(G,P)` representatives.

use std::sync::Arc;

use pgv_core::cohomology::{cohomology, h1_dim, TwoCocycle};
use pgv_core::extensions::{build_extension_with_cap, ExpansionSide, ExtensionResult, TransferPair};
use pgv_core::fp_linalg::{self, FpMatrix, FpSubspace};
use pgv_core::gmodule::{sample_ng_module, AnnSide, FreeBimodule, GModule, SampledModule, Side};
use pgv_core::group::{quotient, GroupTable, Subgroup};
use pgv_core::noninner::ORDER_CAP;
use pgv_core::Error as CoreError;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::common::*;
use super::modules::MODULE_ORDER_CAP;
use super::{Ctx, Details, Outcome};
use crate::error::Result;

/// Largest base group for extension checks.
pub const GROWTH_ORDER_CAP: usize = 16;
/// Largest extension built.
pub const EXTENSION_ORDER_CAP: usize = 256;
/// Ceiling on `n·|E|` for checks that work inside `∏ⁿF_p(E)`.
pub const ALGEBRA_DIM_CAP: usize = 256;
/// Base cap for checks computing `H²` of the extension or sampling over it.
const SMALL_BASE_CAP: usize = 8;

const ATTEMPTS: usize = 12;
const WANTED: usize = 2;

fn encode(v: &[u32], p: u32) -> u32 {
    v.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn random_vec(rng: &mut ChaCha8Rng, p: u32, dim: usize) -> Vec<u32> {
    (0..dim).map(|_| rng.gen_range(0..p)).collect()
}

fn random_nonzero(rng: &mut ChaCha8Rng, p: u32, dim: usize) -> Vec<u32> {
    loop {
        let v = random_vec(rng, p, dim);
        if !fp_linalg::is_zero(&v) {
            return v;
        }
    }
}

fn random_in(rng: &mut ChaCha8Rng, s: &FpSubspace) -> Vec<u32> {
    let c = random_vec(rng, s.p(), s.dim());
    s.combine(&c)
}

/// Random non-identity element of a subgroup.
fn random_member(rng: &mut ChaCha8Rng, s: &Subgroup) -> u32 {
    let rest: Vec<u32> = s.members().iter().copied().filter(|&x| x != 0).collect();
    rest[rng.gen_range(0..rest.len())]
}

/// Vectors fixed by every listed element.
fn fixed_under(m: &GModule, elems: &[u32]) -> FpSubspace {
    let p = m.p();
    let id = FpMatrix::identity(p, m.dim());
    let mut stacked = FpMatrix::zeros(p, 0, m.dim());
    for &x in elems {
        stacked = stacked.stack(&m.act(x).sub(&id).transpose());
    }
    if stacked.rows() == 0 {
        return FpSubspace::full(p, m.dim());
    }
    stacked.kernel()
}

/// `d` of a submodule, computed in ambient coordinates: the radical of `S`
/// is generated by `v·(s − 1)` for basis vectors `v` and generators `s`.
fn ambient_d_g(m: &GModule, sub: &FpSubspace) -> usize {
    let p = m.p();
    let mut moved = Vec::new();
    for v in sub.basis_vecs() {
        for &s in m.group().generators() {
            moved.push(fp_linalg::sub(&m.apply(&v, s), &v, p));
        }
    }
    sub.dim() - m.submodule_generated(&moved).dim()
}

fn guard(ctx: &Ctx, t: usize, base_cap: usize, algebra: bool) -> Option<Outcome> {
    let g = &ctx.g;
    let e = g.order() * (g.p() as usize).pow(t as u32);
    if g.order() > base_cap {
        return Some(skip(format!("|G| = {} exceeds the extension base cap {base_cap}", g.order())));
    }
    if e > EXTENSION_ORDER_CAP {
        return Some(skip(format!("|E| = {e} exceeds the extension cap {EXTENSION_ORDER_CAP}")));
    }
    if algebra && ctx.instance.n * e > ALGEBRA_DIM_CAP {
        return Some(skip(format!("n|E| = {} exceeds the algebra cap {ALGEBRA_DIM_CAP}", ctx.instance.n * e)));
    }
    None
}

/// `g ↦ [[1, χ(g)], [0, 1]]` for `χ` with kernel a random maximal subgroup.
fn jordan_module(g: &Arc<GroupTable>, rng: &mut ChaCha8Rng) -> Result<GModule> {
    let p = g.p();
    let maxes = g.maximal_subgroups();
    let m = &maxes[rng.gen_range(0..maxes.len())];
    let (qt, qm) = quotient(g, m)?;
    let acts = g
        .elements()
        .map(|x| {
            let y = qm.image_of[x as usize];
            let chi = (0..p).find(|&k| qt.pow(1, k as u64) == y).expect("quotient is cyclic of order p");
            FpMatrix::from_rows(p, 2, &[vec![1, chi], vec![0, 1]])
        })
        .collect();
    Ok(GModule::new(g.clone(), Side::Right, acts)?)
}

/// Random combination of `H²` representatives. `None` when a non-split
/// cocycle is required and `H²` vanishes; the flag marks the split case.
fn random_cocycle(m: &GModule, rng: &mut ChaCha8Rng, nonsplit: bool) -> Result<Option<(TwoCocycle, bool)>> {
    let p = m.p();
    let reps = cohomology(m, 2)?.h_cocycles();
    let mut f = TwoCocycle::zero(m.group().order(), m.dim());
    if reps.is_empty() {
        return Ok((!nonsplit).then_some((f, true)));
    }
    let coeffs = loop {
        let c = random_vec(rng, p, reps.len());
        if !nonsplit || !fp_linalg::is_zero(&c) {
            break c;
        }
    };
    for (c, r) in coeffs.iter().zip(&reps) {
        fp_linalg::axpy(&mut f.table, &r.table, *c, p);
    }
    Ok(Some((f, fp_linalg::is_zero(&coeffs))))
}

struct Setup {
    g: Arc<GroupTable>,
    t: usize,
    jordan: bool,
    split: bool,
    ext: ExtensionResult,
}

impl Setup {
    fn describe(&self, d: &mut Details) {
        d.put("t", self.t)
            .put("kernel", if self.jordan { "jordan" } else { "trivial" })
            .put("split", self.split)
            .put("ext_order", self.ext.total.order());
    }

    /// A kernel line that is a `G`-submodule: random for trivial `P`, the
    /// fixed line for the indecomposable one.
    fn kernel_line(&self, rng: &mut ChaCha8Rng) -> Result<Subgroup> {
        let p = self.g.p();
        let v = if self.jordan { vec![0, 1] } else { random_nonzero(rng, p, self.t) };
        let mut members: Vec<u32> = (0..p)
            .map(|l| {
                let w: Vec<u32> = v.iter().map(|&c| c * l % p).collect();
                self.ext.kernel_embed[encode(&w, p) as usize]
            })
            .collect();
        members.sort_unstable();
        Ok(self.ext.total.subgroup(&members)?)
    }

    /// `E/K` for `K` inside the kernel, the quotient map, and the induced map onto `G`.
    fn over_base(&self, k: &Subgroup) -> Result<(Arc<GroupTable>, Vec<u32>, Vec<u32>)> {
        let (qt, qm) = quotient(&self.ext.total, k)?;
        let to_base = qm.section.iter().map(|&x| self.ext.projection.apply(x)).collect();
        Ok((Arc::new(qt), qm.image_of, to_base))
    }
}

fn setup(g: &Arc<GroupTable>, t: usize, rng: &mut ChaCha8Rng, nonsplit: bool) -> Result<Option<Setup>> {
    let jordan = t == 2 && rng.gen_bool(0.5);
    let kernel = if jordan { jordan_module(g, rng)? } else { GModule::trivial(g.clone(), t) };
    let Some((tau, split)) = random_cocycle(&kernel, rng, nonsplit)? else {
        return Ok(None);
    };
    let ext = build_extension_with_cap(&kernel, &tau, EXTENSION_ORDER_CAP)?;
    Ok(Some(Setup { g: g.clone(), t, jordan, split, ext }))
}

fn no_nonsplit() -> Trial {
    Trial::Skip("H2 vanishes, so every extension splits".into())
}

fn sample_q(g: &Arc<GroupTable>, n: usize, seed: u64) -> Result<Option<SampledModule>> {
    let s = sample_ng_module(g, n, seed)?;
    Ok(s.is_ng.then_some(s))
}

fn not_ng() -> Trial {
    Trial::Skip("sample has dim H1 above n".into())
}

/// Common start of the H¹-growth checks: extension, sampled Q, `m`, `h1(E,Q)`.
struct Growth {
    s: Setup,
    q: SampledModule,
    h1_ext: usize,
    d: Details,
}

fn growth(ctx: &Ctx, seed: u64, t: usize, nonsplit: bool) -> Result<std::result::Result<(Growth, ChaCha8Rng), Trial>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let Some(s) = setup(&ctx.g, t, &mut rng, nonsplit)? else {
        return Ok(Err(no_nonsplit()));
    };
    let Some(q) = sample_q(&ctx.g, ctx.instance.n, seed)? else {
        return Ok(Err(not_ng()));
    };
    let h1_ext = h1_dim(&s.ext.inflate_module(&q.module))?;
    let mut d = Details::new();
    s.describe(&mut d);
    d.put("n", q.n).put("m", q.h1_dim).put("dim_q", q.module.dim()).put("h1_ext", h1_ext);
    Ok(Ok((Growth { s, q, h1_ext, d }, rng)))
}

macro_rules! take {
    ($e:expr) => {
        match $e? {
            Ok(v) => v,
            Err(trial) => return Ok(trial),
        }
    };
}

pub(super) fn kernel_expansion_unique(ctx: &Ctx) -> Result<Outcome> {
    let t = ctx.instance.t;
    if let Some(o) = guard(ctx, t, GROWTH_ORDER_CAP, true) {
        return Ok(o);
    }
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(s) = setup(&ctx.g, t, &mut rng, false)? else {
            return Ok(no_nonsplit());
        };
        let tp = TransferPair::new(&s.ext, ctx.instance.n);
        let left = tp.expansion_basis_is_valid(ExpansionSide::Left);
        let right = tp.expansion_basis_is_valid(ExpansionSide::Right);
        let ker = tp.kernel_of_down();
        let mut round_trips = true;
        for _ in 0..3 {
            let y = random_in(&mut rng, &ker);
            for side in [ExpansionSide::Left, ExpansionSide::Right] {
                round_trips &= tp.expand(&y, side).map(|ex| tp.reconstruct(&ex, side) == y).unwrap_or(false);
            }
        }
        let outside_rejected = tp.expand(&tp.free().basis_vector(0), ExpansionSide::Left).is_none();
        let mut d = Details::new();
        s.describe(&mut d);
        d.put("left_basis", left).put("right_basis", right).put("round_trips", round_trips);
        d.put("outside_rejected", outside_rejected);
        Ok(verdict(left && right && round_trips && outside_rejected, d))
    })
}

pub(super) fn up_image_free(ctx: &Ctx) -> Result<Outcome> {
    let t = ctx.instance.t;
    let n = ctx.instance.n;
    if let Some(o) = guard(ctx, t, GROWTH_ORDER_CAP, true) {
        return Ok(o);
    }
    let g = &ctx.g;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(s) = setup(g, t, &mut rng, false)? else {
            return Ok(no_nonsplit());
        };
        let tp = TransferPair::new(&s.ext, n);
        let free_g = FreeBimodule::new(g.clone(), n);
        let rank = tp.up.rank();
        let down_after_up = tp.up.mul(&tp.down).is_zero();
        let up_after_down = tp.down.mul(&tp.up) == tp.free().right_mul_matrix(tp.norm_element());
        let mut equivariant = true;
        for _ in 0..2 {
            let x = random_vec(&mut rng, g.p(), free_g.dim());
            let ux = tp.apply_up(&x);
            for e in s.ext.total.elements() {
                let ug = free_g.unit(s.ext.projection.apply(e));
                let ue = tp.free().unit(e);
                equivariant &= tp.apply_up(&free_g.right_mul(&x, &ug)) == tp.free().right_mul(&ux, &ue);
                equivariant &= tp.apply_up(&free_g.left_mul(&ug, &x)) == tp.free().left_mul(&ue, &ux);
            }
        }
        let mut d = Details::new();
        s.describe(&mut d);
        d.put("rank_up", rank)
            .put("expected_rank", n * g.order())
            .put("down_after_up_zero", down_after_up)
            .put("up_after_down_is_norm", up_after_down)
            .put("equivariant", equivariant);
        Ok(verdict(rank == n * g.order() && down_after_up && up_after_down && equivariant, d))
    })
}

pub(super) fn annihilator_descends(ctx: &Ctx) -> Result<Outcome> {
    let t = ctx.instance.t;
    let n = ctx.instance.n;
    if let Some(o) = guard(ctx, t, GROWTH_ORDER_CAP, true) {
        return Ok(o);
    }
    let g = &ctx.g;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(s) = setup(g, t, &mut rng, false)? else {
            return Ok(no_nonsplit());
        };
        let q = sample_ng_module(g, n, seed)?;
        let tp = TransferPair::new(&s.ext, n);
        let up_q = q.carrier.image_under(&tp.up);
        let l_e = tp.free().annihilator(&up_q, AnnSide::LeftOfRight)?;
        let down_l = l_e.image_under(&tp.down);
        let l_g = FreeBimodule::new(g.clone(), n).annihilator(&q.carrier, AnnSide::LeftOfRight)?;
        let mut d = Details::new();
        s.describe(&mut d);
        d.put("dim_q", q.carrier.dim()).put("dim_l_ext", l_e.dim()).put("dim_down_l", down_l.dim()).put("dim_l_base", l_g.dim());
        Ok(verdict(down_l == l_g, d))
    })
}

/// `I_{n,m}`, or `None` when it is not a two-sided submodule.
fn layer(tp: &TransferPair, m: u32) -> Result<Option<FpSubspace>> {
    match tp.filtration(m) {
        Ok(s) => Ok(Some(s)),
        Err(CoreError::NotASubmodule) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn layers(tp: &TransferPair, top: u32) -> Result<Option<Vec<FpSubspace>>> {
    let mut out = Vec::new();
    for m in 0..=top + 1 {
        match layer(tp, m)? {
            Some(s) => out.push(s),
            None => return Ok(None),
        }
    }
    Ok(Some(out))
}

/// `span{x·y : x ∈ I_a, y ∈ b}`. `I_a` is the left submodule generated by
/// the `e_{k,l}` with `Σk ≥ a`, so the products `e_{k,l}·y` generate it.
fn ideal_product(tp: &TransferPair, a: u32, b: &FpSubspace) -> FpSubspace {
    let p = tp.ext.base.p();
    let mut gens = Vec::new();
    for k in pgv_core::extensions::exponent_tuples(p, tp.ext.t).into_iter().filter(|k| k.iter().sum::<u32>() >= a) {
        for l in 0..tp.n {
            let e = tp.e(&k, l);
            for y in b.basis_vecs() {
                gens.push(tp.free().tuple_mul(&e, &y));
            }
        }
    }
    tp.free().left_module().submodule_generated(&gens)
}

pub(super) fn filtration_products(ctx: &Ctx) -> Result<Outcome> {
    let t = ctx.instance.t;
    if let Some(o) = guard(ctx, t, GROWTH_ORDER_CAP, true) {
        return Ok(o);
    }
    let g = &ctx.g;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(s) = setup(g, t, &mut rng, false)? else {
            return Ok(no_nonsplit());
        };
        let tp = TransferPair::new(&s.ext, ctx.instance.n);
        let top = t as u32 * (g.p() - 1);
        let mut d = Details::new();
        s.describe(&mut d);
        let Some(ls) = layers(&tp, top)? else {
            d.put("two_sided", false);
            return Ok(Trial::Fail(d));
        };
        let first_is_kernel = ls[1] == tp.kernel_of_down();
        let mut pairs: Vec<(u32, u32)> = (1..=top).flat_map(|b| [(1, b), (b, 1)]).collect();
        if top <= 4 {
            pairs = (1..=top).flat_map(|a| (1..=top + 1 - a).map(move |b| (a, b))).collect();
        }
        pairs.sort_unstable();
        pairs.dedup();
        let mut bad = Vec::new();
        for &(a, b) in &pairs {
            ctx.tick()?;
            let target = &ls[(a + b).min(top + 1) as usize];
            if ideal_product(&tp, a, &ls[b as usize]) != *target {
                bad.push((a, b));
            }
        }
        d.put("two_sided", true)
            .put("layer_dims", ls.iter().map(|x| x.dim()).collect::<Vec<_>>())
            .put("first_is_kernel", first_is_kernel)
            .put("pairs_checked", pairs.len())
            .put("bad_pairs", &bad);
        Ok(verdict(first_is_kernel && bad.is_empty(), d))
    })
}

pub(super) fn filtration_first_layer(ctx: &Ctx) -> Result<Outcome> {
    let t = ctx.instance.t;
    let n = ctx.instance.n;
    if let Some(o) = guard(ctx, t, GROWTH_ORDER_CAP, true) {
        return Ok(o);
    }
    let g = &ctx.g;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(s) = setup(g, t, &mut rng, false)? else {
            return Ok(no_nonsplit());
        };
        let tp = TransferPair::new(&s.ext, n);
        let mut d = Details::new();
        s.describe(&mut d);
        let (Some(i1), Some(i2)) = (layer(&tp, 1)?, layer(&tp, 2)?) else {
            d.put("two_sided", false);
            return Ok(Trial::Fail(d));
        };
        let layer_dim = i1.dim() - i2.dim();
        let gens = ambient_d_g(&tp.free().left_module(), &i1);
        let p = g.p();
        let mut trivial = true;
        for a in s.ext.kernel_generators() {
            let u = tp.free().unit(a);
            for v in i1.basis_vecs() {
                trivial &= i2.contains_vec(&fp_linalg::sub(&tp.free().left_mul(&u, &v), &v, p));
                trivial &= i2.contains_vec(&fp_linalg::sub(&tp.free().right_mul(&v, &u), &v, p));
            }
        }
        d.put("layer_dim", layer_dim).put("expected_layer_dim", n * t * g.order()).put("d_first", gens);
        d.put("kernel_acts_trivially", trivial);
        Ok(verdict(layer_dim == n * t * g.order() && gens == n * t && trivial, d))
    })
}

pub(super) fn filtration_layers_rank2(ctx: &Ctx) -> Result<Outcome> {
    let n = ctx.instance.n;
    if let Some(o) = guard(ctx, 2, GROWTH_ORDER_CAP, true) {
        return Ok(o);
    }
    let g = &ctx.g;
    let p = g.p() as usize;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(s) = setup(g, 2, &mut rng, false)? else {
            return Ok(no_nonsplit());
        };
        let tp = TransferPair::new(&s.ext, n);
        let mut d = Details::new();
        s.describe(&mut d);
        let Some(ls) = layers(&tp, 2 * (p as u32 - 1))? else {
            d.put("two_sided", false);
            return Ok(Trial::Fail(d));
        };
        let got: Vec<usize> = ls.windows(2).map(|w| w[0].dim() - w[1].dim()).collect();
        let want: Vec<usize> = (0..got.len()).map(|i| (i + 1).min(2 * p - 1 - i) * n * g.order()).collect();
        d.put("two_sided", true).put("layer_dims", &got).put("expected", &want);
        Ok(verdict(got == want, d))
    })
}

pub(super) fn extension_h1_upper(ctx: &Ctx) -> Result<Outcome> {
    let t = ctx.instance.t;
    if let Some(o) = guard(ctx, t, GROWTH_ORDER_CAP, false) {
        return Ok(o);
    }
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let (gr, _) = take!(growth(ctx, seed, t, false));
        let bound = gr.q.h1_dim + gr.q.n * t;
        let mut d = gr.d;
        d.put("bound", bound);
        Ok(verdict(gr.h1_ext <= bound, d))
    })
}

pub(super) fn cokernel_bound(ctx: &Ctx) -> Result<Outcome> {
    let t = ctx.instance.t;
    let n = ctx.instance.n;
    if let Some(o) = guard(ctx, t, GROWTH_ORDER_CAP, true) {
        return Ok(o);
    }
    let g = &ctx.g;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(s) = setup(g, t, &mut rng, false)? else {
            return Ok(no_nonsplit());
        };
        let tp = TransferPair::new(&s.ext, n);
        let free = tp.free();
        let left = free.left_module();
        let k = rng.gen_range(1..=n);
        let xs: Vec<Vec<u32>> = (0..k).map(|_| random_vec(&mut rng, g.p(), free.dim())).collect();
        let q = left.submodule_generated(&xs);
        let d_ext = ambient_d_g(&left, &q);
        let down_q = q.image_under(&tp.down);
        let d_base = ambient_d_g(&FreeBimodule::new(g.clone(), n).left_module(), &down_q);
        if d_ext != k || d_base != k {
            return Ok(Trial::Skip("generators are not minimal over both groups".into()));
        }
        let i1 = tp.kernel_of_down();
        let Some(i2) = layer(&tp, 2)? else {
            let mut d = Details::new();
            d.put("two_sided", false);
            return Ok(Trial::Fail(d));
        };
        let image = q.intersect(&i1).sum(&i2);
        let log_coker = (i1.dim() - image.dim()) as i64;
        let bound = (g.order() * (n * t - k)) as i64 - ((t - 1) * down_q.dim()) as i64;
        let rows: Vec<Vec<u32>> = xs
            .iter()
            .flat_map(|x| s.ext.total.elements().map(|e| tp.apply_down(&free.left_mul(&free.unit(e), x))))
            .collect();
        let dim_d = FpMatrix::from_rows(g.p(), n * g.order(), &rows).left_kernel().dim();
        let mut d = Details::new();
        s.describe(&mut d);
        d.put("generators", k)
            .put("dim_q", q.dim())
            .put("dim_down_q", down_q.dim())
            .put("dim_d", dim_d)
            .put("dim_kernel", i1.dim())
            .put("dim_second_layer", i2.dim())
            .put("log_coker", log_coker)
            .put("bound", bound);
        Ok(verdict(log_coker >= bound, d))
    })
}

pub(super) fn annihilator_generators_lower(ctx: &Ctx) -> Result<Outcome> {
    let n = ctx.instance.n;
    if let Some(o) = guard(ctx, 1, GROWTH_ORDER_CAP, true) {
        return Ok(o);
    }
    let g = &ctx.g;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(s) = setup(g, 1, &mut rng, false)? else {
            return Ok(no_nonsplit());
        };
        let Some(q) = sample_q(g, n, seed)? else {
            return Ok(not_ng());
        };
        if q.h1_dim >= n {
            return Ok(Trial::Skip("dim H1 is not below n".into()));
        }
        let tp = TransferPair::new(&s.ext, n);
        let up_q = q.carrier.image_under(&tp.up);
        let l = tp.free().annihilator(&up_q, AnnSide::LeftOfRight)?;
        let gens = ambient_d_g(&tp.free().left_module(), &l);
        let mut d = Details::new();
        s.describe(&mut d);
        d.put("n", n).put("m", q.h1_dim).put("dim_annihilator", l.dim()).put("d_annihilator", gens);
        Ok(verdict(gens >= n, d))
    })
}

pub(super) fn extension_h1_growth(ctx: &Ctx) -> Result<Outcome> {
    if let Some(o) = guard(ctx, 1, GROWTH_ORDER_CAP, false) {
        return Ok(o);
    }
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let (gr, _) = take!(growth(ctx, seed, 1, true));
        if gr.q.h1_dim >= gr.q.n {
            return Ok(Trial::Skip("dim H1 is not below n".into()));
        }
        Ok(verdict(gr.h1_ext >= gr.q.n, gr.d))
    })
}

pub(super) fn stable_h1_is_maximal(ctx: &Ctx) -> Result<Outcome> {
    if let Some(o) = guard(ctx, 1, GROWTH_ORDER_CAP, false) {
        return Ok(o);
    }
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let (gr, _) = take!(growth(ctx, seed, 1, false));
        if gr.h1_ext != gr.q.h1_dim {
            return Ok(Trial::Skip("H1 changes over the extension".into()));
        }
        Ok(verdict(gr.q.h1_dim == gr.q.n, gr.d))
    })
}

pub(super) fn extension_h1_growth_rank_t(ctx: &Ctx) -> Result<Outcome> {
    let t = ctx.instance.t;
    if let Some(o) = guard(ctx, t, GROWTH_ORDER_CAP, false) {
        return Ok(o);
    }
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let (gr, _) = take!(growth(ctx, seed, t, false));
        let (m, n) = (gr.q.h1_dim, gr.q.n);
        if m >= n {
            return Ok(Trial::Skip("dim H1 is not below n".into()));
        }
        let mut d = gr.d;
        let ok = if m == 0 {
            d.put("expected", t * n);
            gr.h1_ext == t * n
        } else {
            let bound = m + t * n - t * m + 1;
            d.put("bound", bound);
            gr.h1_ext >= bound
        };
        Ok(verdict(ok, d))
    })
}

pub(super) fn extension_h1_growth_rank2(ctx: &Ctx) -> Result<Outcome> {
    if let Some(o) = guard(ctx, 2, GROWTH_ORDER_CAP, false) {
        return Ok(o);
    }
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let (gr, mut rng) = take!(growth(ctx, seed, 2, false));
        let (m, n) = (gr.q.h1_dim, gr.q.n);
        let mut d = gr.d;
        let ok = if m == n {
            let line = gr.s.kernel_line(&mut rng)?;
            let (qt, _, to_base) = gr.s.over_base(&line)?;
            let h1_line = h1_dim(&gr.q.module.pull_back(qt, &to_base))?;
            d.put("h1_mod_line", h1_line);
            if h1_line != m {
                return Ok(Trial::Skip("H1 over E/P1 differs from H1 over G".into()));
            }
            d.put("expected", 2 * n);
            gr.h1_ext == 2 * n
        } else if m == 0 {
            d.put("expected", 2 * n);
            gr.h1_ext == 2 * n
        } else if m >= 2 {
            let bound = m + 2 * n - 2 * m + 1;
            d.put("bound", bound);
            gr.h1_ext >= bound
        } else {
            return Ok(Trial::Skip("dim H1 = 1 is not covered".into()));
        };
        Ok(verdict(ok, d))
    })
}

pub(super) fn exact_module_growth(ctx: &Ctx) -> Result<Outcome> {
    if let Some(o) = guard(ctx, 2, GROWTH_ORDER_CAP, false) {
        return Ok(o);
    }
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let (gr, mut rng) = take!(growth(ctx, seed, 2, false));
        if gr.q.h1_dim != gr.q.n {
            return Ok(Trial::Skip("module is not exactly n".into()));
        }
        let line = gr.s.kernel_line(&mut rng)?;
        let (qt, _, to_base) = gr.s.over_base(&line)?;
        let h1_line = h1_dim(&gr.q.module.pull_back(qt, &to_base))?;
        if h1_line != gr.q.h1_dim {
            return Ok(Trial::Skip("H1 over E/N1 differs from H1 over G".into()));
        }
        let mut d = gr.d;
        d.put("h1_mod_line", h1_line).put("expected", h1_line + gr.q.n);
        Ok(verdict(gr.h1_ext == h1_line + gr.q.n, d))
    })
}

pub(super) fn stable_h2_cyclic(ctx: &Ctx) -> Result<Outcome> {
    if let Some(o) = guard(ctx, 1, SMALL_BASE_CAP, false) {
        return Ok(o);
    }
    let g = &ctx.g;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(s) = setup(g, 1, &mut rng, false)? else {
            return Ok(no_nonsplit());
        };
        let Some(q) = sample_q(g, 1, seed)? else {
            return Ok(not_ng());
        };
        let q_ext = s.ext.inflate_module(&q.module);
        let h1_ext = h1_dim(&q_ext)?;
        if h1_ext != q.h1_dim {
            return Ok(Trial::Skip("H1 changes over the extension".into()));
        }
        let h2 = cohomology(&q_ext, 2)?.h_dim();
        let gens = q.module.d_g();
        let mut d = Details::new();
        s.describe(&mut d);
        d.put("dim_q", q.module.dim()).put("h1", h1_ext).put("h2_ext", h2).put("d_q", gens);
        Ok(verdict(h2 == 1 && gens == 1, d))
    })
}

pub(super) fn fixed_dimension_lower(ctx: &Ctx) -> Result<Outcome> {
    if let Some(o) = guard(ctx, 2, SMALL_BASE_CAP, false) {
        return Ok(o);
    }
    let g = &ctx.g;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(s) = setup(g, 2, &mut rng, false)? else {
            return Ok(no_nonsplit());
        };
        let Some(q) = sample_q(&s.ext.total, 1, seed)? else {
            return Ok(not_ng());
        };
        let fixed = fixed_under(&q.module, &s.ext.kernel_generators()).dim();
        let mut d = Details::new();
        s.describe(&mut d);
        d.put("dim_q", q.module.dim()).put("dim_fixed_by_kernel", fixed);
        Ok(verdict(q.module.dim() >= g.p() as usize * fixed, d))
    })
}

pub(super) fn fixed_dimension_equal(ctx: &Ctx) -> Result<Outcome> {
    if let Some(o) = guard(ctx, 2, SMALL_BASE_CAP, false) {
        return Ok(o);
    }
    let g = &ctx.g;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(s) = setup(g, 2, &mut rng, false)? else {
            return Ok(no_nonsplit());
        };
        let line = s.kernel_line(&mut rng)?;
        let (qt, to_quotient, _) = s.over_base(&line)?;
        let Some(q) = sample_q(&qt, 1, seed)? else {
            return Ok(not_ng());
        };
        let q_ext = q.module.pull_back(s.ext.total.clone(), &to_quotient);
        let h1_ext = h1_dim(&q_ext)?;
        if h1_ext != q.h1_dim {
            return Ok(Trial::Skip("H1 changes from E/N1 to E".into()));
        }
        let fixed = fixed_under(&q_ext, &s.ext.kernel_generators());
        let gens = ambient_d_g(&q_ext, &fixed);
        let mut d = Details::new();
        s.describe(&mut d);
        d.put("dim_q", q.module.dim()).put("dim_fixed_by_kernel", fixed.dim()).put("d_fixed", gens).put("h1", h1_ext);
        Ok(verdict(q.module.dim() == g.p() as usize * fixed.dim() && gens == 1, d))
    })
}

pub(super) fn minimal_normal_free(ctx: &Ctx) -> Result<Outcome> {
    let g = &ctx.g;
    if g.order() > MODULE_ORDER_CAP {
        return Ok(skip(format!("|G| = {} exceeds the module cap {MODULE_ORDER_CAP}", g.order())));
    }
    let p = g.p();
    let socle = g.omega1(&g.center());
    let cyc = cyclic_group(p);
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_member(&mut rng, &socle);
        let q = sample_ng_module(g, ctx.instance.n, seed)?.module;
        let fixed = fixed_under(&q, &[a]).dim();
        if q.dim() != p as usize * fixed {
            return Ok(Trial::Skip("dim Q differs from p dim Q^N".into()));
        }
        let image: Vec<u32> = (0..p as u64).map(|k| g.pow(a, k)).collect();
        let h1_n = h1_dim(&q.pull_back(cyc.clone(), &image))?;
        let minus = q.act(a).sub(&FpMatrix::identity(p, q.dim()));
        let mut power = FpMatrix::identity(p, q.dim());
        for _ in 0..p - 1 {
            power = power.mul(&minus);
        }
        let rank = power.rank();
        let mut d = Details::new();
        d.put("a", a).put("dim_q", q.dim()).put("dim_fixed", fixed).put("h1_n", h1_n).put("norm_rank", rank);
        Ok(verdict(h1_n == 0 && rank == q.dim() / p as usize, d))
    })
}

/// The kernel subspace `sub` as a subgroup of the extension.
fn kernel_subgroup(ext: &ExtensionResult, sub: &FpSubspace) -> Result<Subgroup> {
    let p = ext.base.p();
    let mut members: Vec<u32> = sub.enumerate().iter().map(|v| ext.kernel_embed[encode(v, p) as usize]).collect();
    members.sort_unstable();
    Ok(ext.total.subgroup(&members)?)
}

/// A 1-(G/N) module inflated to `G`, kept when its H¹ does not change.
struct Stable {
    quotient_module: GModule,
    module: GModule,
    h1: usize,
}

fn stable_module(g: &Arc<GroupTable>, n_sub: &Subgroup, seed: u64) -> Result<std::result::Result<Stable, Trial>> {
    let (qt, qm) = quotient(g, n_sub)?;
    let Some(q) = sample_q(&Arc::new(qt), 1, seed)? else {
        return Ok(Err(not_ng()));
    };
    let module = q.module.pull_back(g.clone(), &qm.image_of);
    let h1 = h1_dim(&module)?;
    if h1 != q.h1_dim {
        return Ok(Err(Trial::Skip("H1 changes from G/N to G".into())));
    }
    Ok(Ok(Stable { quotient_module: q.module, module, h1 }))
}

fn fits(g: &GroupTable, dim: usize) -> bool {
    (g.p() as usize).checked_pow(dim as u32).is_some_and(|k| k * g.order() <= EXTENSION_ORDER_CAP)
}

fn too_large() -> Trial {
    Trial::Skip(format!("extension would exceed {EXTENSION_ORDER_CAP}"))
}

/// `E/J_G(Q)` with `π` onto `G`.
fn radical_quotient(ext: &ExtensionResult, j: &FpSubspace) -> Result<(Arc<GroupTable>, Vec<u32>)> {
    let js = kernel_subgroup(ext, j)?;
    let (bar, bm) = quotient(&ext.total, &js)?;
    let pi = bm.section.iter().map(|&x| ext.projection.apply(x)).collect();
    Ok((Arc::new(bar), pi))
}

pub(super) fn extension_rank_unique_elementary(ctx: &Ctx) -> Result<Outcome> {
    let g = &ctx.g;
    if let Some(o) = guard(ctx, 0, GROWTH_ORDER_CAP, false) {
        return Ok(o);
    }
    if g.rank() < 2 {
        return Ok(skip("cyclic group"));
    }
    let p = g.p() as usize;
    let all = normals(g)?;
    let elementary: Vec<&Subgroup> = all.iter().filter(|s| !s.is_trivial() && s.is_elementary_abelian(g)).collect();
    let unique = elementary.len() == 1;
    let squares: Vec<&Subgroup> = elementary.iter().copied().filter(|s| s.order() == p * p).collect();
    if !unique && squares.is_empty() {
        return Ok(skip("neither a unique elementary abelian normal subgroup nor a normal C_p x C_p"));
    }
    let socle = g.omega1(&g.center());
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_member(&mut rng, &socle);
        let n_sub = g.closure(&[a]);
        let st = take!(stable_module(g, &n_sub, seed));
        if !fits(g, st.module.dim()) {
            return Ok(too_large());
        }
        let (tau, split) = random_cocycle(&st.module, &mut rng, false)?.expect("split cocycle allowed");
        let ext = build_extension_with_cap(&st.module, &tau, EXTENSION_ORDER_CAP)?;
        let mut d = Details::new();
        d.put("n", n_sub.members()).put("dim_q", st.module.dim()).put("split", split).put("ext_order", ext.total.order());
        let mut ok = true;
        if unique {
            let rank = ext.total.rank();
            d.put("ext_rank", rank).put("base_rank", g.rank());
            ok &= rank == g.rank() + 1;
        }
        if !squares.is_empty() {
            let (bar, pi) = radical_quotient(&ext, &st.module.radical())?;
            let ker: Vec<u32> = bar.elements().filter(|&y| pi[y as usize] == 0).collect();
            let ker = bar.subgroup(&ker)?;
            let mut found = false;
            for t in squares.iter().filter(|t| n_sub.is_subgroup_of(t)) {
                let pre: Vec<u32> = bar.elements().filter(|&y| t.contains(pi[y as usize])).collect();
                let pre = bar.subgroup(&pre)?;
                found |= bar
                    .normal_subgroups(&pre, ORDER_CAP)?
                    .iter()
                    .any(|t1| t1.order() == p * p && bar.intersection(t1, &ker).is_trivial());
                if found {
                    break;
                }
            }
            d.put("complement_found", found);
            ok &= found;
        }
        Ok(verdict(ok, d))
    })
}

pub(super) fn extension_rank_abelian(ctx: &Ctx) -> Result<Outcome> {
    let g = &ctx.g;
    if !g.is_abelian() {
        return Ok(skip("non-abelian group"));
    }
    if let Some(o) = guard(ctx, 0, GROWTH_ORDER_CAP, false) {
        return Ok(o);
    }
    let whole = g.whole();
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_member(&mut rng, &whole);
        let n_sub = g.closure(&[a]);
        let Some(q) = sample_q(g, 1, seed)? else {
            return Ok(not_ng());
        };
        if !fits(g, q.module.dim()) {
            return Ok(too_large());
        }
        let fixed = q.module.restrict(&fixed_under(&q.module, &[a]))?;
        let (qt, qm) = quotient(g, &n_sub)?;
        let acts = qm.section.iter().map(|&h| fixed.act(h).clone()).collect();
        let fixed_bar = GModule::new(Arc::new(qt), Side::Right, acts)?;
        let (h_bar, h_g) = (h1_dim(&fixed_bar)?, h1_dim(&fixed)?);
        if h_bar != h_g {
            return Ok(Trial::Skip("H1 of Q^N changes from G/N to G".into()));
        }
        let mut ranks = Vec::new();
        let zero = TwoCocycle::zero(g.order(), q.module.dim());
        ranks.push(build_extension_with_cap(&q.module, &zero, EXTENSION_ORDER_CAP)?.total.rank());
        if let Some((tau, _)) = random_cocycle(&q.module, &mut rng, true)? {
            ranks.push(build_extension_with_cap(&q.module, &tau, EXTENSION_ORDER_CAP)?.total.rank());
        }
        let mut d = Details::new();
        d.put("n", n_sub.members()).put("dim_q", q.module.dim()).put("d_q", q.module.d_g());
        d.put("ext_ranks", &ranks).put("base_rank", g.rank());
        Ok(verdict(ranks.iter().all(|&r| r == g.rank() + 1), d))
    })
}

pub(super) fn two_minimal_normal_iff(ctx: &Ctx) -> Result<Outcome> {
    let g = &ctx.g;
    if g.order() > MODULE_ORDER_CAP {
        return Ok(skip(format!("|G| = {} exceeds the module cap {MODULE_ORDER_CAP}", g.order())));
    }
    let p = g.p() as usize;
    let socle = g.omega1(&g.center());
    if socle.order() < p * p {
        return Ok(skip("a single minimal normal subgroup"));
    }
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_member(&mut rng, &socle);
        let n1 = g.closure(&[a]);
        let b = loop {
            let b = random_member(&mut rng, &socle);
            if !n1.contains(b) {
                break b;
            }
        };
        let (qt, qm) = quotient(g, &n1)?;
        let Some(q) = sample_q(&Arc::new(qt), 1, seed)? else {
            return Ok(not_ng());
        };
        let q_g = q.module.pull_back(g.clone(), &qm.image_of);
        let c = fixed_under(&q_g, &[b]);
        if q_g.dim() != p * c.dim() {
            return Ok(Trial::Skip("dim Q differs from p dim C_Q(N1 x N2)".into()));
        }
        let c_g = h1_dim(&q_g.restrict(&c)?)?;
        let c_bar = h1_dim(&q.module.restrict(&c)?)?;
        let q_h1 = h1_dim(&q_g)?;
        let mut d = Details::new();
        d.put("n1", n1.members()).put("n2_generator", b).put("dim_q", q_g.dim()).put("dim_c", c.dim());
        d.put("h1_c", c_g).put("h1_c_quotient", c_bar).put("h1_q", q_h1).put("h1_q_quotient", q.h1_dim);
        Ok(verdict((c_g == c_bar) == (q_h1 == q.h1_dim), d))
    })
}

pub(super) fn radical_extension_growth(ctx: &Ctx) -> Result<Outcome> {
    let g = &ctx.g;
    if let Some(o) = guard(ctx, 0, GROWTH_ORDER_CAP, false) {
        return Ok(o);
    }
    let cyclic: Vec<Subgroup> = normals(g)?.into_iter().filter(|s| !s.is_trivial() && s.is_cyclic(g)).collect();
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n_sub = &cyclic[rng.gen_range(0..cyclic.len())];
        let st = take!(stable_module(g, n_sub, seed));
        if !fits(g, st.module.dim()) {
            return Ok(too_large());
        }
        let (tau, split) = random_cocycle(&st.module, &mut rng, false)?.expect("split cocycle allowed");
        let ext = build_extension_with_cap(&st.module, &tau, EXTENSION_ORDER_CAP)?;
        let j = st.module.radical();
        let (h_base, h_bar) = if j.dim() == 0 {
            (0, 0)
        } else {
            let j_mod = st.module.restrict(&j)?;
            let (bar, pi) = radical_quotient(&ext, &j)?;
            (h1_dim(&j_mod)?, h1_dim(&j_mod.pull_back(bar, &pi))?)
        };
        let mut d = Details::new();
        d.put("n", n_sub.members())
            .put("dim_q", st.module.dim())
            .put("quotient_dim_q", st.quotient_module.dim())
            .put("h1_q", st.h1)
            .put("dim_radical", j.dim())
            .put("split", split)
            .put("h1_radical_base", h_base)
            .put("h1_radical_ext", h_bar);
        Ok(verdict(h_bar == h_base + 1, d))
    })
}
