//! Checks on sampled submodules of free modules.

use std::sync::Arc;

use pgv_core::cohomology::h1_dim;
use pgv_core::fp_linalg::{FpMatrix, FpSubspace};
use pgv_core::gmodule::{embed_into_free, sample_ng_module, AnnSide, FreeBimodule, GModule, Side};
use pgv_core::group::GroupTable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::common::*;
use super::{Ctx, Details, Outcome};
use crate::error::Result;

/// Module checks build one action matrix per element; larger groups are
/// skipped.
pub const MODULE_ORDER_CAP: usize = 81;

const ATTEMPTS: usize = 24;
const WANTED: usize = 6;

fn guard(ctx: &Ctx) -> Option<Outcome> {
    (ctx.g.order() > MODULE_ORDER_CAP).then(|| skip(format!("|G| = {} exceeds the module cap {MODULE_ORDER_CAP}", ctx.g.order())))
}

fn random_vec(rng: &mut ChaCha8Rng, p: u32, dim: usize) -> Vec<u32> {
    (0..dim).map(|_| rng.gen_range(0..p)).collect()
}

/// Random element of a subspace.
fn random_in(rng: &mut ChaCha8Rng, s: &FpSubspace) -> Vec<u32> {
    let c = random_vec(rng, s.p(), s.dim());
    s.combine(&c)
}

fn generates(m: &GModule, vs: &[Vec<u32>]) -> bool {
    m.submodule_generated(vs).dim() == m.dim()
}

/// Random proper submodule generated by `k` random radical vectors.
fn random_proper_submodule(rng: &mut ChaCha8Rng, m: &GModule, k: usize) -> FpSubspace {
    let rad = m.radical();
    let gens: Vec<Vec<u32>> = (0..k).map(|_| random_in(rng, &rad)).collect();
    m.submodule_generated(&gens)
}

pub(super) fn generator_count(ctx: &Ctx) -> Result<Outcome> {
    if let Some(s) = guard(ctx) {
        return Ok(s);
    }
    let g = &ctx.g;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let a = sample_ng_module(g, ctx.instance.n, seed)?.module;
        let d = a.d_g();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sizes = Vec::new();
        for _ in 0..4 {
            let mut set: Vec<Vec<u32>> = Vec::new();
            while !generates(&a, &set) {
                set.push(random_vec(&mut rng, a.p(), a.dim()));
            }
            let mut i = 0;
            while i < set.len() {
                let mut rest = set.clone();
                rest.remove(i);
                if generates(&a, &rest) {
                    set = rest;
                } else {
                    i += 1;
                }
            }
            sizes.push(set.len());
        }
        let mut det = Details::new();
        det.put("dim", a.dim()).put("d_g", d).put("minimal_sizes", &sizes);
        Ok(verdict(sizes.iter().all(|&s| s == d), det))
    })
}

pub(super) fn submodule_generator_bound(ctx: &Ctx) -> Result<Outcome> {
    if let Some(s) = guard(ctx) {
        return Ok(s);
    }
    let g = &ctx.g;
    let n = ctx.instance.n;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = if rng.gen_bool(0.5) {
            GModule::free(g.clone(), n, Side::Right)
        } else {
            sample_ng_module(g, n, seed)?.module
        };
        let k = rng.gen_range(1..=2);
        let a1 = random_proper_submodule(&mut rng, &a, k);
        if a1.dim() == 0 {
            return Ok(Trial::Skip("zero submodule".into()));
        }
        let d_a = a.d_g();
        let d_a1 = a.restrict(&a1)?.d_g();
        let d_quot = a.quotient(&a1)?.d_g();
        let mut det = Details::new();
        det.put("dim", a.dim()).put("dim_sub", a1.dim()).put("d_a", d_a).put("d_sub", d_a1).put("d_quotient", d_quot);
        Ok(verdict(d_a1 <= d_quot + d_a, det))
    })
}

/// Candidate modules: a sample and a quotient of it.
fn sampled_and_quotient(g: &Arc<GroupTable>, n: usize, seed: u64) -> Result<Vec<GModule>> {
    let a = sample_ng_module(g, n, seed)?.module;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5151);
    let sub = random_proper_submodule(&mut rng, &a, 1);
    let mut out = vec![a.clone()];
    if sub.dim() > 0 {
        out.push(a.quotient(&sub)?);
    }
    Ok(out)
}

pub(super) fn free_embedding(ctx: &Ctx) -> Result<Outcome> {
    if let Some(s) = guard(ctx) {
        return Ok(s);
    }
    let g = &ctx.g;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut det = Details::new();
        let mut ok = true;
        let mut dims = Vec::new();
        for a in sampled_and_quotient(g, ctx.instance.n, seed)? {
            let (free, hom) = embed_into_free(&a)?;
            let fixed = a.fixed_points();
            let image = fixed.image_under(&hom.matrix);
            let target = free.right_module();
            let equivariant = g.elements().all(|x| a.act(x).mul(&hom.matrix) == hom.matrix.mul(target.act(x)));
            ok &= hom.is_injective() && equivariant && image == free.socle();
            dims.push((a.dim(), free.n()));
        }
        det.put("dims_and_copies", &dims);
        Ok(verdict(ok, det))
    })
}

/// The free module with its basis changed by a random invertible matrix.
fn scrambled_free(g: &Arc<GroupTable>, n: usize, rng: &mut ChaCha8Rng) -> Result<GModule> {
    let free = GModule::free(g.clone(), n, Side::Right);
    let dim = free.dim();
    let (s, inv) = loop {
        let rows: Vec<Vec<u32>> = (0..dim).map(|_| random_vec(rng, g.p(), dim)).collect();
        let s = FpMatrix::from_rows(g.p(), dim, &rows);
        if let Some(inv) = s.inverse() {
            break (s, inv);
        }
    };
    let act = free.actions().iter().map(|m| s.mul(m).mul(&inv)).collect();
    Ok(GModule::new(g.clone(), Side::Right, act)?)
}

pub(super) fn h1_zero_free(ctx: &Ctx) -> Result<Outcome> {
    if let Some(s) = guard(ctx) {
        return Ok(s);
    }
    let g = &ctx.g;
    let n = ctx.instance.n;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut candidates = vec![("scrambled", scrambled_free(g, n, &mut rng)?)];
        for m in sampled_and_quotient(g, n, seed)? {
            candidates.push(("sampled", m));
        }
        let mut checked = Vec::new();
        let mut ok = true;
        for (label, a) in candidates {
            if h1_dim(&a)? != 0 {
                continue;
            }
            let (free, hom) = embed_into_free(&a)?;
            let target = free.right_module();
            let inverse = hom.matrix.inverse();
            let invertible = inverse.is_some();
            let actions_match = inverse
                .map(|inv| g.elements().all(|x| inv.mul(a.act(x)).mul(&hom.matrix) == *target.act(x)))
                .unwrap_or(false);
            ok &= invertible && actions_match;
            checked.push((label, a.dim(), free.n()));
        }
        if checked.is_empty() {
            return Ok(Trial::Skip("no candidate with vanishing H1".into()));
        }
        let mut det = Details::new();
        det.put("checked", &checked);
        Ok(verdict(ok, det))
    })
}

pub(super) fn dual_fixed_points(ctx: &Ctx) -> Result<Outcome> {
    if let Some(s) = guard(ctx) {
        return Ok(s);
    }
    let g = &ctx.g;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut det = Details::new();
        let mut ok = true;
        let mut pairs = Vec::new();
        for a in sampled_and_quotient(g, ctx.instance.n, seed)? {
            let fixed = a.dual().fixed_points().dim();
            let d = a.d_g();
            ok &= fixed == d;
            pairs.push((fixed, d));
        }
        det.put("dual_fixed_and_d_g", &pairs);
        Ok(verdict(ok, det))
    })
}

pub(super) fn dual_generators(ctx: &Ctx) -> Result<Outcome> {
    if let Some(s) = guard(ctx) {
        return Ok(s);
    }
    let g = &ctx.g;
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut det = Details::new();
        let mut ok = true;
        let mut pairs = Vec::new();
        for a in sampled_and_quotient(g, ctx.instance.n, seed)? {
            let d = a.dual().d_g();
            let fixed = a.fixed_points().dim();
            ok &= fixed == d;
            pairs.push((d, fixed));
        }
        det.put("dual_d_g_and_fixed", &pairs);
        Ok(verdict(ok, det))
    })
}

/// Checks the annihilator correspondence on one right submodule `q` of
/// `free`: `L = L_G(q)` is a left submodule, `R_G(L) = q`, the pairing and
/// product definitions agree, and `|L|·|q| = |∏ⁿF_p(G)|`.
pub fn annihilator_duality_on(free: &FreeBimodule, q: &FpSubspace) -> Result<(bool, Details)> {
    let p = free.p();
    let l = free.annihilator(q, AnnSide::LeftOfRight)?;
    let is_left = free.left_module().is_submodule(&l);
    let back = free.annihilator(&l, AnnSide::RightOfLeft)?;
    let by_products = free.annihilator_by_products(q, AnnSide::LeftOfRight) == l;
    let sizes = l.dim() + q.dim() == free.dim();
    let mut det = Details::new();
    det.put("dim", free.dim())
        .put("dim_q", q.dim())
        .put("dim_l", l.dim())
        .put("size_l", size_value(p, l.dim()))
        .put("size_product", size_value(p, l.dim() + q.dim()))
        .put("l_is_left_submodule", is_left)
        .put("round_trip", back == *q)
        .put("products_agree", by_products);
    Ok((is_left && back == *q && by_products && sizes, det))
}

pub(super) fn annihilator_duality(ctx: &Ctx) -> Result<Outcome> {
    if let Some(s) = guard(ctx) {
        return Ok(s);
    }
    let free = FreeBimodule::new(ctx.g.clone(), ctx.instance.n);
    let right = free.right_module();
    let radical = right.radical();
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = rng.gen_range(1..=free.n() + 1);
        let gens: Vec<Vec<u32>> = (0..k)
            .map(|_| if rng.gen_bool(0.5) { random_in(&mut rng, &radical) } else { random_vec(&mut rng, free.p(), free.dim()) })
            .collect();
        let q = right.submodule_generated(&gens);
        let (ok, det) = annihilator_duality_on(&free, &q)?;
        Ok(verdict(ok, det))
    })
}

pub(super) fn h1_annihilator_generators(ctx: &Ctx) -> Result<Outcome> {
    if let Some(s) = guard(ctx) {
        return Ok(s);
    }
    let g = &ctx.g;
    let free = FreeBimodule::new(g.clone(), ctx.instance.n);
    scan(ctx, ATTEMPTS, WANTED, |seed| {
        let s = sample_ng_module(g, ctx.instance.n, seed)?;
        let l = free.annihilator(&s.carrier, AnnSide::LeftOfRight)?;
        let d_l = free.left_module().restrict(&l)?.d_g();
        let mut det = Details::new();
        det.put("dim_q", s.carrier.dim()).put("h1", s.h1_dim).put("d_annihilator", d_l);
        Ok(verdict(s.h1_dim == d_l, det))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::checks::{Instance, Status};

    fn group(name: &str) -> Arc<GroupTable> {
        Catalog::builtin().get(name).unwrap().group.clone()
    }

    #[test]
    fn proper_submodules_are_proper() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for name in ["C4", "D8", "C3xC3"] {
            let m = GModule::free(group(name), 2, Side::Right);
            for k in 1..=2 {
                let s = random_proper_submodule(&mut rng, &m, k);
                assert!(m.is_submodule(&s));
                assert!(s.dim() < m.dim());
            }
        }
    }

    #[test]
    fn scrambled_free_modules_stay_free() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = group("Q8");
        let m = scrambled_free(&g, 1, &mut rng).unwrap();
        assert_eq!(h1_dim(&m).unwrap(), 0);
        assert_eq!(m.fixed_points().dim(), 1);
        assert_eq!(m.d_g(), 1);
    }

    #[test]
    fn generation_test() {
        let g = group("C2xC2");
        let m = GModule::regular(g);
        assert!(generates(&m, &[vec![1, 0, 0, 0]]));
        assert!(!generates(&m, &[vec![1, 1, 1, 1]]));
    }

    #[test]
    fn large_groups_are_skipped() {
        let instance = Instance::new("Heis125", 0);
        let ctx = Ctx { g: group("Heis125"), instance: &instance, replay: None, deadline: None };
        assert_eq!(guard(&ctx).unwrap().status, Status::SkippedHypothesis);
        assert_eq!(h1_zero_free(&ctx).unwrap().status, Status::SkippedHypothesis);
    }

    #[test]
    fn duality_reports_sizes() {
        let free = FreeBimodule::new(group("C3"), 1);
        let q = free.right_module().fixed_points();
        let (ok, d) = annihilator_duality_on(&free, &q).unwrap();
        assert!(ok);
        assert_eq!(d["dim_l"], 2);
        assert_eq!(d["size_product"], 27);
    }
}
