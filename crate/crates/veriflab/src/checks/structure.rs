//! Checks on the subgroup structure of one group. Each ranges over every
//! normal subgroup meeting its hypotheses (or the pinned one) and reports the
//! first violation.
//!
//! Conclusions of the form "G has an outer automorphism of order p" are
//! decided by the exhaustive sweep; whether the construction suggested by
//! the hypotheses produced one is reported as `construction_holds`.

use pgv_core::cohomology::{cohomology, conjugation_derivation, induced_map};
use pgv_core::gmodule::module_from_conjugation;
use pgv_core::group::{GroupTable, Subgroup};
use pgv_core::noninner::{
    brute_force_order_p_noninner, engine_sweep, index_bound, outer_from_basis, outer_from_cocycles, verify_certificate,
    wide_h1_probe, BruteForce, ProbeOutcome, SpecialReport, AUTOMORPHISM_SEARCH, BRUTE_FORCE_CAP, ORDER_CAP,
};

use super::common::*;
use super::{Ctx, Details, Outcome};
use crate::error::Result;

fn members(s: &Subgroup) -> Vec<u32> {
    s.members().to_vec()
}

/// Smallest `k ≥ 1` with `f^k = id`, or 0 when none is found up to `limit`.
fn map_power_order(f: &[u32], limit: usize) -> usize {
    let mut cur: Vec<u32> = f.to_vec();
    for k in 1..=limit {
        if cur.iter().enumerate().all(|(i, &x)| x as usize == i) {
            return k;
        }
        cur = cur.iter().map(|&x| f[x as usize]).collect();
    }
    0
}

pub(super) fn induced_order_p(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let p = g.p() as usize;
    let phi = g.frattini();
    let mut tally = Tally::default();
    for n in pinned(ctx, g.normal_subgroups(&phi, ORDER_CAP)?, |s| s) {
        let w = omega_center(g, &n);
        for n1 in g.normal_subgroups(&n, ORDER_CAP)? {
            if n1.order() == n.order() || !w.is_subgroup_of(&n1) {
                continue;
            }
            ctx.tick()?;
            let cm = module_from_conjugation(g, &n1, &w)?;
            let mut taus = cohomology(&cm.module, 1)?.z_derivations();
            if taus.is_empty() {
                tally.add(None, Trial::Skip("Z1 is zero".into()));
                continue;
            }
            let mut sum = taus[0].clone();
            for t in &taus[1..] {
                for (a, b) in sum.table.iter_mut().zip(&t.table) {
                    *a = (*a + b) % g.p();
                }
            }
            taus.push(sum);
            let orders: Vec<usize> = taus.iter().map(|t| map_power_order(&induced_map(g, &cm, t), p)).collect();
            let mut d = Details::new();
            d.put("n", members(&n)).put("n1", members(&n1)).put("w", members(&w)).put("orders", &orders);
            if let Some(out) = tally.add(None, verdict(orders.iter().all(|&o| o == p), d)) {
                return Ok(out);
            }
        }
    }
    Ok(tally.finish())
}

pub(super) fn iset_index_bound(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    if g.is_abelian() {
        return Ok(skip("abelian group"));
    }
    let zg = g.center();
    let mut tally = Tally::default();
    for n in pinned(ctx, normals(g)?, |s| s) {
        let hyp = zg.is_subgroup_of(&n)
            && g.commutator_of(&n, &n).is_subgroup_of(&zg)
            && g.omega1(&n).is_abelian(g);
        if !hyp {
            tally.add(None, Trial::Skip("[N,N] <= Z(G) <= N with Omega1(N) abelian fails".into()));
            continue;
        }
        let ib = index_bound(g, &n);
        let mut d = Details::new();
        d.put("n", members(&n))
            .put("log_index", ib.log_index)
            .put("bound", ib.bound)
            .put("i_closed", ib.i_closed)
            .put("prime_case", if g.p() == 2 { "p=2" } else { "odd" });
        if let Some(out) = tally.add(None, verdict(ib.holds, d)) {
            return Ok(out);
        }
    }
    Ok(tally.finish())
}

pub(super) fn inner_h1_iso(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let zg = g.center();
    let mut tally = Tally::default();
    for rep in pinned(ctx, specials(g)?, |r| &r.subgroup) {
        ctx.tick()?;
        let n = &rep.subgroup;
        let a = g.product(n, &rep.centralizer);
        let w = omega_center(g, &a);
        let mut d = Details::new();
        d.put("n", members(n)).put("a", members(&a)).put("w", members(&w));
        if !w.is_subgroup_of(n) {
            d.put("w_inside_n", false);
            return Ok(tally.add(None, Trial::Fail(d)).expect("failure"));
        }
        let cm = module_from_conjugation(g, &a, &w)?;
        if !induced_all_inner(g, &cm)? {
            tally.add(None, Trial::Skip("some derivation induces an outer automorphism".into()));
            continue;
        }
        let space = cohomology(&cm.module, 1)?;
        let (mut z, mut b) = (0usize, 0usize);
        for x in g.elements() {
            if let Ok(tau) = conjugation_derivation(g, &cm, x) {
                z += 1;
                if space.b.contains_vec(&tau.table) {
                    b += 1;
                }
            }
        }
        let zb_log = (z % b == 0).then(|| log_p(g.p(), z / b));
        let bottom = g.product(&zg, &g.omega1(n));
        let stated = g.product(&g.closure(&g.iset(n).elements), &zg);
        let proof = g.product(&g.closure(&rep.i_centralizer), &zg);
        let stated_log = log_p(g.p(), stated.order() / bottom.order());
        let proof_log = log_p(g.p(), proof.order() / bottom.order().max(1));
        let h1 = space.h_dim();
        d.put("w_inside_n", true)
            .put("h1", h1)
            .put("z_size", z)
            .put("b_size", b)
            .put("zb_log", zb_log)
            .put("i_quotient_log", stated_log)
            .put("i_centralizer_quotient_log", proof_log);
        if let Some(out) = tally.add(None, verdict(zb_log == Some(h1) && stated_log == h1, d)) {
            return Ok(out);
        }
    }
    Ok(tally.finish())
}

/// Reports existence for an "outer automorphism exists" conclusion.
fn existence(g: &GroupTable, construction: Option<bool>, mut d: Details) -> Result<Trial> {
    let exists = outer_exists(g)?;
    d.put("outer_exists", exists);
    if let Some(c) = construction {
        d.put("construction_holds", c);
    }
    Ok(verdict(exists, d))
}

pub(super) fn wide_h1_certificate(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let n_z = center_rank(g);
    let mut tally = Tally::default();
    for rep in pinned(ctx, specials(g)?, |r| &r.subgroup) {
        ctx.tick()?;
        let n = &rep.subgroup;
        let a = g.product(n, &rep.centralizer);
        let w = omega_center(g, n);
        let cm = module_from_conjugation(g, &a, &w)?;
        let h1 = cohomology(&cm.module, 1)?.h_dim();
        if h1 < n_z + 1 {
            tally.add(None, Trial::Skip(format!("dim H1 = {h1} is below d(Z(G)) + 1")));
            continue;
        }
        let direct = outer_from_basis(g, &cm)?.is_some();
        let probe = match wide_h1_probe(g, n)? {
            ProbeOutcome::Certificate(c) => if verify_certificate(g, &c)?.ok { "certificate" } else { "invalid-certificate" },
            ProbeOutcome::Diagnostic(_) => "diagnostic",
            ProbeOutcome::Absent { .. } => "absent",
            ProbeOutcome::Unmet { .. } => "unmet",
        };
        let mut d = Details::new();
        d.put("n", members(n)).put("h1", h1).put("center_rank", n_z).put("probe", probe);
        if let Some(out) = tally.add(None, existence(g, Some(direct), d)?) {
            return Ok(out);
        }
    }
    Ok(tally.finish())
}

pub(super) fn centralizer_quotient_outer(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let mut tally = Tally::default();
    for rep in pinned(ctx, specials(g)?, |r| &r.subgroup) {
        ctx.tick()?;
        let n = &rep.subgroup;
        let cn = g.product(n, &rep.centralizer);
        if cn.order() == n.order() {
            tally.add(None, Trial::Skip("C(N)N = N".into()));
            continue;
        }
        let w = omega_center(g, n);
        let cm = module_from_conjugation(g, n, &w)?;
        let h_n = cohomology(&cm.module, 1)?.h_dim();
        let h_cn = h1_conj(g, &cn, &w)?;
        if h_n < h_cn + 1 {
            tally.add(None, Trial::Skip(format!("H1 over G/N ({h_n}) does not exceed H1 over G/C(N)N ({h_cn})")));
            continue;
        }
        let mut d = Details::new();
        d.put("n", members(n)).put("h1_n", h_n).put("h1_cn", h_cn);
        let construction = outer_from_cocycles(g, &cm)?.is_some();
        if let Some(out) = tally.add(None, existence(g, Some(construction), d)?) {
            return Ok(out);
        }
    }
    Ok(tally.finish())
}

/// `I(C_G(A)) ⊆ A`.
fn i_centralizer_inside(g: &GroupTable, a: &Subgroup) -> bool {
    g.iset(&g.centralizer(a)).elements.iter().all(|&x| a.contains(x))
}

pub(super) fn frattini_containment(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let phi = g.frattini();
    let zg = g.center();
    let all = normals(g)?;
    let mut tally = Tally::default();
    for a in pinned(ctx, g.normal_subgroups(&phi, ORDER_CAP)?, |s| s) {
        if !i_centralizer_inside(g, &a) {
            continue;
        }
        for a1 in all.iter().filter(|b| b.order() == a.order() * g.p() as usize && a.is_subgroup_of(b)) {
            ctx.tick()?;
            let z_a1 = g.intersection(a1, &g.centralizer(a1));
            if !zg.is_subgroup_of(&z_a1) {
                tally.add(None, Trial::Skip("Z(G) not inside Z(A1)".into()));
                continue;
            }
            let w1 = g.omega1(&z_a1);
            let h_a1 = h1_conj(g, a1, &w1)?;
            let h_a = h1_conj(g, &a, &w1)?;
            if h_a1 != h_a {
                tally.add(None, Trial::Skip("H1 over G/A1 and G/A differ".into()));
                continue;
            }
            let mut d = Details::new();
            d.put("a", members(&a)).put("a1", members(a1)).put("h1", h_a);
            d.put("a1_in_frattini", a1.is_subgroup_of(&phi));
            if let Some(out) = tally.add(None, verdict(a1.is_subgroup_of(&phi), d)) {
                return Ok(out);
            }
        }
    }
    Ok(tally.finish())
}

pub(super) fn omega_center_proper(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let phi = g.frattini();
    let mut tally = Tally::default();
    for n in pinned(ctx, g.normal_subgroups(&phi, ORDER_CAP)?, |s| s) {
        if n.is_trivial() {
            continue;
        }
        ctx.tick()?;
        let w = omega_center(g, &n);
        let h = h1_conj(g, &n, &w)?;
        if h != 0 {
            tally.add(None, Trial::Skip("H1 is nonzero".into()));
            continue;
        }
        let mut d = Details::new();
        d.put("n", members(&n)).put("w", members(&w));
        if let Some(out) = tally.add(None, verdict(w.order() < n.order(), d)) {
            return Ok(out);
        }
    }
    Ok(tally.finish())
}

/// Data shared by the checks that assume every induced map is inner.
struct InnerSetting {
    rep: SpecialReport,
    w: Subgroup,
    /// `Ω₁(Z(N))Z(G)`.
    wz: Subgroup,
    h1: usize,
    fixed: usize,
}

impl InnerSetting {
    fn exactly(&self, n_z: usize) -> bool {
        self.fixed == n_z && self.h1 == n_z
    }
}

/// Special subgroups whose derivation-induced maps are all inner.
fn inner_settings(ctx: &Ctx, tally: &mut Tally) -> Result<Vec<InnerSetting>> {
    let g = &*ctx.g;
    let zg = g.center();
    let mut out = Vec::new();
    for rep in pinned(ctx, specials(g)?, |r| &r.subgroup) {
        ctx.tick()?;
        let w = omega_center(g, &rep.subgroup);
        let cm = module_from_conjugation(g, &rep.subgroup, &w)?;
        if !induced_all_inner(g, &cm)? {
            tally.add(None, Trial::Skip("some derivation induces an outer automorphism".into()));
            continue;
        }
        let h1 = cohomology(&cm.module, 1)?.h_dim();
        let fixed = cm.module.fixed_points().dim();
        let wz = g.product(&w, &zg);
        out.push(InnerSetting { rep, w, wz, h1, fixed });
    }
    Ok(out)
}

/// Inner settings where `Ω₁(Z(N))` is exactly an n-module.
fn exact_settings(ctx: &Ctx, tally: &mut Tally) -> Result<Vec<InnerSetting>> {
    let n_z = center_rank(&ctx.g);
    let all = inner_settings(ctx, tally)?;
    let mut out = Vec::new();
    for s in all {
        if s.exactly(n_z) {
            out.push(s);
        } else {
            tally.add(None, Trial::Skip("Omega1(Z(N)) is not exactly an n-module".into()));
        }
    }
    Ok(out)
}

pub(super) fn centralized_module_bound(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let n_z = center_rank(g);
    let all = normals(g)?;
    let mut tally = Tally::default();
    for s in inner_settings(ctx, &mut tally)? {
        for a in all.iter().filter(|a| s.rep.subgroup.is_subgroup_of(a)) {
            ctx.tick()?;
            let c = g.intersection(&s.w, &g.centralizer(a));
            let cm = module_from_conjugation(g, a, &c)?;
            let fixed = cm.module.fixed_points().dim();
            let h1 = cohomology(&cm.module, 1)?.h_dim();
            let mut d = Details::new();
            d.put("n", members(&s.rep.subgroup)).put("a", members(a)).put("fixed_dim", fixed).put("h1", h1).put("center_rank", n_z);
            if let Some(out) = tally.add(None, verdict(fixed == n_z && h1 <= n_z, d)) {
                return Ok(out);
            }
        }
    }
    Ok(tally.finish())
}

pub(super) fn centralizer_strict(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let all = normals(g)?;
    let mut tally = Tally::default();
    for s in inner_settings(ctx, &mut tally)? {
        let above: Vec<&Subgroup> = all.iter().filter(|a| s.rep.subgroup.is_subgroup_of(a)).collect();
        for a2 in &above {
            for a1 in above.iter().filter(|a1| a1.order() > a2.order() && a2.is_subgroup_of(a1)) {
                ctx.tick()?;
                let c1 = g.intersection(&s.w, &g.centralizer(a1));
                let h = h1_conj(g, a2, &c1)?;
                if h < s.h1 + 1 {
                    tally.add(None, Trial::Skip("H1 over G/A2 does not exceed H1 over G/N".into()));
                    continue;
                }
                let c2 = g.intersection(&s.w, &g.centralizer(a2));
                let mut d = Details::new();
                d.put("n", members(&s.rep.subgroup))
                    .put("a1", members(a1))
                    .put("a2", members(a2))
                    .put("h1_a2", h)
                    .put("h1_n", s.h1)
                    .put("c_w_a1_order", c1.order())
                    .put("c_w_a2_order", c2.order());
                if let Some(out) = tally.add(None, verdict(c1.order() < c2.order(), d)) {
                    return Ok(out);
                }
            }
        }
    }
    Ok(tally.finish())
}

pub(super) fn self_centralizing_descent(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let phi = g.frattini();
    let n_z = center_rank(g);
    let all = normals(g)?;
    let mut tally = Tally::default();
    for n in pinned(ctx, g.normal_subgroups(&phi, ORDER_CAP)?, |s| s) {
        if !g.centralizer(&n).is_subgroup_of(&n) {
            continue;
        }
        ctx.tick()?;
        let w = omega_center(g, &n);
        let m = h1_conj(g, &n, &w)?;
        if m >= n_z {
            tally.add(None, Trial::Skip(format!("dim H1 = {m} is not below d(Z(G)) = {n_z}")));
            continue;
        }
        let smaller = all
            .iter()
            .find(|n1| n1.order() < n.order() && n1.is_subgroup_of(&n) && g.centralizer(n1).is_subgroup_of(n1));
        let exists = outer_exists(g)?;
        let mut d = Details::new();
        d.put("n", members(&n)).put("h1", m).put("center_rank", n_z).put("outer_exists", exists);
        d.put("self_centralizing_below", smaller.map(members));
        if let Some(out) = tally.add(None, verdict(exists || smaller.is_some(), d)) {
            return Ok(out);
        }
    }
    Ok(tally.finish())
}

pub(super) fn centralizer_cyclic(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let all = normals(g)?;
    let mut tally = Tally::default();
    for s in exact_settings(ctx, &mut tally)? {
        let n = &s.rep.subgroup;
        for n1 in all.iter().filter(|x| s.wz.is_subgroup_of(x)) {
            ctx.tick()?;
            let top = g.product(&g.centralizer(n1), n);
            let cyclic = quotient_is_cyclic(g, &top, n);
            let mut d = Details::new();
            d.put("n", members(n)).put("n1", members(n1)).put("quotient_order", top.order() / n.order());
            if let Some(out) = tally.add(None, verdict(cyclic, d)) {
                return Ok(out);
            }
        }
    }
    Ok(tally.finish())
}

pub(super) fn maximal_subgroup_outer(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    if g.is_abelian() {
        return Ok(skip("abelian group"));
    }
    let phi = g.frattini();
    let wz = g.omega1(&g.center());
    let mut tally = Tally::default();
    for n in pinned(ctx, g.normal_subgroups(&phi, ORDER_CAP)?, |s| s) {
        let c = g.centralizer(&n);
        let cn = g.product(&n, &c);
        if !i_centralizer_inside(g, &n) || cn.is_subgroup_of(&phi) {
            continue;
        }
        ctx.tick()?;
        let h = c.members().iter().copied().find(|&x| !phi.contains(x)).expect("C(N) escapes the Frattini subgroup");
        let mut construction = false;
        for m in g.maximal_subgroups().iter().filter(|m| !m.contains(h)) {
            let cm = module_from_conjugation(g, m, &wz)?;
            if outer_from_cocycles(g, &cm)?.is_some() {
                construction = true;
                break;
            }
        }
        let mut d = Details::new();
        d.put("n", members(&n)).put("h", h);
        if let Some(out) = tally.add(None, existence(g, Some(construction), d)?) {
            return Ok(out);
        }
    }
    Ok(tally.finish())
}

/// Normal `N₁` with `WZ ≤ N₁ < N` of index p.
fn index_p_kernels<'a>(g: &GroupTable, all: &'a [Subgroup], s: &InnerSetting) -> Vec<&'a Subgroup> {
    let n = &s.rep.subgroup;
    all.iter()
        .filter(|x| s.wz.is_subgroup_of(x) && x.is_subgroup_of(n) && x.order() * g.p() as usize == n.order())
        .collect()
}

pub(super) fn index_p_kernel_exists(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let all = normals(g)?;
    let mut tally = Tally::default();
    for s in exact_settings(ctx, &mut tally)? {
        let n = &s.rep.subgroup;
        let kernels = index_p_kernels(g, &all, &s);
        let cn = g.product(&s.rep.centralizer, n);
        let noncyclic_top = !quotient_is_cyclic(g, n, &s.wz);
        let good = kernels.iter().find(|k| !quotient_is_cyclic(g, &cn, k));
        let ok = !kernels.is_empty() && (!noncyclic_top || good.is_some());
        let mut d = Details::new();
        d.put("n", members(n))
            .put("kernels", kernels.len())
            .put("n_over_wz_noncyclic", noncyclic_top)
            .put("noncyclic_kernel", good.map(|k| members(k)));
        if let Some(out) = tally.add(None, verdict(ok, d)) {
            return Ok(out);
        }
    }
    Ok(tally.finish())
}

pub(super) fn noncyclic_kernel_outer(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let all = normals(g)?;
    let mut tally = Tally::default();
    for s in exact_settings(ctx, &mut tally)? {
        let n = &s.rep.subgroup;
        let zn = g.intersection(n, &s.rep.centralizer);
        if s.rep.centralizer.order() == zn.order() {
            tally.add(None, Trial::Skip("C(N) = Z(N)".into()));
            continue;
        }
        let cn = g.product(&s.rep.centralizer, n);
        for n1 in index_p_kernels(g, &all, &s) {
            ctx.tick()?;
            if quotient_is_cyclic(g, &cn, n1) {
                tally.add(None, Trial::Skip("C(N)N/N1 is cyclic".into()));
                continue;
            }
            let top = g.product(&g.centralizer(n1), n1);
            if quotient_is_cyclic(g, &top, n1) {
                tally.add(None, Trial::Skip("C(N1)N1/N1 is cyclic".into()));
                continue;
            }
            let cm = module_from_conjugation(g, n1, &s.w)?;
            let construction = outer_from_cocycles(g, &cm)?.is_some();
            let mut d = Details::new();
            d.put("n", members(n)).put("n1", members(n1));
            if let Some(out) = tally.add(None, existence(g, Some(construction), d)?) {
                return Ok(out);
            }
        }
    }
    Ok(tally.finish())
}

/// Which alternatives of a trichotomy hold for `N`.
struct Alternatives {
    outer: bool,
    smaller: bool,
    /// `|M| = |N|` and `I(C(N)) ⊂ I(C(M))`.
    larger_strict: bool,
    /// `|M| = |N|` and `|I(C(N))| < |I(C(M))|`.
    larger_size: bool,
}

fn alternatives(g: &GroupTable, rep: &SpecialReport) -> Result<Alternatives> {
    let all = specials(g)?;
    let n = &rep.subgroup;
    let mine = &rep.i_centralizer;
    let same: Vec<&SpecialReport> = all.iter().filter(|m| m.subgroup.order() == n.order()).collect();
    Ok(Alternatives {
        outer: outer_exists(g)?,
        smaller: all.iter().any(|m| m.subgroup.order() < n.order()),
        larger_strict: same
            .iter()
            .any(|m| m.i_centralizer.len() > mine.len() && mine.iter().all(|x| m.i_centralizer.binary_search(x).is_ok())),
        larger_size: same.iter().any(|m| m.i_centralizer.len() > mine.len()),
    })
}

fn put_alternatives(d: &mut Details, a: &Alternatives) {
    d.put("outer_exists", a.outer)
        .put("smaller_special", a.smaller)
        .put("larger_i_strict", a.larger_strict)
        .put("larger_i_size", a.larger_size);
}

pub(super) fn trichotomy_nontrivial_centralizer(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let mut tally = Tally::default();
    for s in exact_settings(ctx, &mut tally)? {
        let n = &s.rep.subgroup;
        let zn = g.intersection(n, &s.rep.centralizer);
        if quotient_is_cyclic(g, n, &s.wz) || s.rep.centralizer.order() == zn.order() {
            tally.add(None, Trial::Skip("N/Z(G)W cyclic or C(N) = Z(N)".into()));
            continue;
        }
        let a = alternatives(g, &s.rep)?;
        let mut d = Details::new();
        d.put("n", members(n));
        put_alternatives(&mut d, &a);
        if let Some(out) = tally.add(None, verdict(a.outer || a.smaller || a.larger_strict, d)) {
            return Ok(out);
        }
    }
    Ok(tally.finish())
}

pub(super) fn double_growth_outer(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let all = normals(g)?;
    let mut tally = Tally::default();
    for s in exact_settings(ctx, &mut tally)? {
        let n = &s.rep.subgroup;
        if quotient_is_cyclic(g, n, &s.wz) {
            tally.add(None, Trial::Skip("N/Z(G)W is cyclic".into()));
            continue;
        }
        let zn = g.intersection(n, &s.rep.centralizer);
        for n1 in all.iter().filter(|x| s.wz.is_subgroup_of(x) && x.is_subgroup_of(n) && x.order() < n.order()) {
            ctx.tick()?;
            let cover = g.product(&zn, n1).order() == n.order();
            let above = g.product(&g.centralizer(n1), n).order() > n.order();
            if !cover || !above {
                tally.add(None, Trial::Skip("N = Z(N)N1 < C(N1)N fails".into()));
                continue;
            }
            let cm = module_from_conjugation(g, n1, &s.w)?;
            let h = cohomology(&cm.module, 1)?.h_dim();
            if h < s.h1 + 2 {
                tally.add(None, Trial::Skip("H1 grows by less than two".into()));
                continue;
            }
            let construction = outer_from_cocycles(g, &cm)?.is_some();
            let mut d = Details::new();
            d.put("n", members(n)).put("n1", members(n1)).put("h1_n", s.h1).put("h1_n1", h);
            if let Some(out) = tally.add(None, existence(g, Some(construction), d)?) {
                return Ok(out);
            }
        }
    }
    Ok(tally.finish())
}

/// Shared body of the two trivial-centralizer trichotomies.
fn trivial_centralizer(ctx: &Ctx, strict_above_wz: bool, want_noncyclic: bool) -> Result<Outcome> {
    let g = &*ctx.g;
    let all = normals(g)?;
    let mut tally = Tally::default();
    for s in exact_settings(ctx, &mut tally)? {
        let n = &s.rep.subgroup;
        if quotient_is_cyclic(g, n, &s.wz) || !s.rep.centralizer.is_subgroup_of(n) {
            tally.add(None, Trial::Skip("N/Z(G)W cyclic or C(N)N/N nontrivial".into()));
            continue;
        }
        for n1 in index_p_kernels(g, &all, &s) {
            if strict_above_wz && n1.order() == s.wz.order() {
                continue;
            }
            ctx.tick()?;
            let top = g.product(&g.centralizer(n1), n1);
            let cyclic = quotient_is_cyclic(g, &top, n1);
            let applies = if want_noncyclic { !cyclic } else { cyclic && top.order() > n1.order() };
            if !applies {
                tally.add(None, Trial::Skip("C(N1)N1/N1 has the wrong shape".into()));
                continue;
            }
            let a = alternatives(g, &s.rep)?;
            let ok = if want_noncyclic { a.outer || a.larger_size } else { a.outer || a.smaller || a.larger_size };
            let mut d = Details::new();
            d.put("n", members(n)).put("n1", members(n1));
            put_alternatives(&mut d, &a);
            if let Some(out) = tally.add(None, verdict(ok, d)) {
                return Ok(out);
            }
        }
    }
    Ok(tally.finish())
}

pub(super) fn trichotomy_trivial_centralizer_noncyclic(ctx: &Ctx) -> Result<Outcome> {
    trivial_centralizer(ctx, true, true)
}

pub(super) fn trichotomy_trivial_centralizer_cyclic(ctx: &Ctx) -> Result<Outcome> {
    trivial_centralizer(ctx, false, false)
}

pub(super) fn trichotomy_cyclic_quotient(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let mut tally = Tally::default();
    for s in exact_settings(ctx, &mut tally)? {
        let n = &s.rep.subgroup;
        if !quotient_is_cyclic(g, n, &s.wz) {
            tally.add(None, Trial::Skip("N/Z(G)W is not cyclic".into()));
            continue;
        }
        let a = alternatives(g, &s.rep)?;
        let mut d = Details::new();
        d.put("n", members(n));
        put_alternatives(&mut d, &a);
        if let Some(out) = tally.add(None, verdict(a.outer || a.smaller || a.larger_size, d)) {
            return Ok(out);
        }
    }
    Ok(tally.finish())
}

pub(super) fn special_trichotomy(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    let mut tally = Tally::default();
    for rep in pinned(ctx, specials(g)?, |r| &r.subgroup) {
        ctx.tick()?;
        let a = alternatives(g, &rep)?;
        let mut d = Details::new();
        d.put("n", members(&rep.subgroup));
        put_alternatives(&mut d, &a);
        if let Some(out) = tally.add(None, verdict(a.outer || a.smaller || a.larger_size, d)) {
            return Ok(out);
        }
    }
    Ok(tally.finish())
}

pub(super) fn outer_order_p_exists(ctx: &Ctx) -> Result<Outcome> {
    let g = &*ctx.g;
    if g.is_abelian() {
        return Ok(skip("abelian group"));
    }
    let mut d = Details::new();
    let cert = engine_sweep(g)?;
    let verified = match &cert {
        Some(c) => verify_certificate(g, c)?.ok,
        None => false,
    };
    d.put("certificate", cert.is_some()).put("verified", verified);
    if let Some(c) = &cert {
        d.put("route", &c.provenance.route).put("derivation_route", c.provenance.route != AUTOMORPHISM_SEARCH);
    }
    let mut agree = true;
    if g.order() <= BRUTE_FORCE_CAP {
        let brute = matches!(brute_force_order_p_noninner(g), BruteForce::Found(_));
        d.put("brute_force_found", brute);
        agree = brute == cert.is_some();
    }
    let mut tally = Tally::default();
    Ok(tally.add(None, verdict(verified && agree, d)).unwrap_or_else(|| tally.finish()))
}
