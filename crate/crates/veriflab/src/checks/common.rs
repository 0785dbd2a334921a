use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use pgv_core::cohomology::{cohomology, derivation_to_automorphism, h1_dim};
use pgv_core::gmodule::{module_from_conjugation, ConjugationModule};
use pgv_core::group::{is_inner, GroupTable, PcPresentation, Subgroup};
use pgv_core::noninner::{engine_sweep, fingerprint, find_special_subgroups, SpecialReport, ORDER_CAP};
use serde::Serialize;
use serde_json::Value;

use super::{Ctx, Details, Outcome, Status};
use crate::error::Result;

/// SplitMix64 step applied to `seed + k·γ`.
pub fn mix_seed(seed: u64, k: u64) -> u64 {
    let mut z = seed.wrapping_add(k.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub(crate) trait Put {
    fn put(&mut self, key: &str, value: impl Serialize) -> &mut Self;
}

impl Put for Details {
    fn put(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }
}

/// One evaluated sample or subgroup.
pub(crate) enum Trial {
    Skip(String),
    Hold(Details),
    Fail(Details),
}

/// Folds trials: the first failure wins, otherwise any success passes.
#[derive(Default)]
pub(crate) struct Tally {
    held: usize,
    skipped: usize,
    last: Option<(Details, Option<u64>)>,
    reason: Option<String>,
}

impl Tally {
    /// Records a trial; returns the finished outcome on a failure.
    pub(crate) fn add(&mut self, seed: Option<u64>, trial: Trial) -> Option<Outcome> {
        match trial {
            Trial::Skip(r) => {
                self.skipped += 1;
                self.reason = Some(r);
                None
            }
            Trial::Hold(d) => {
                self.held += 1;
                self.last = Some((d, seed));
                None
            }
            Trial::Fail(mut d) => {
                d.put("scan_held", self.held).put("scan_skipped", self.skipped);
                Some(Outcome { status: Status::Counterexample, details: d, replay_seed: seed })
            }
        }
    }

    pub(crate) fn held(&self) -> usize {
        self.held
    }

    pub(crate) fn finish(self) -> Outcome {
        match self.last {
            Some((mut d, seed)) => {
                d.put("scan_held", self.held).put("scan_skipped", self.skipped);
                Outcome { status: Status::Pass, details: d, replay_seed: seed }
            }
            None => {
                let mut d = Details::new();
                d.put("reason", self.reason.unwrap_or_else(|| "no instance meets the hypotheses".into()));
                d.put("scan_skipped", self.skipped);
                Outcome::new(Status::SkippedHypothesis, d)
            }
        }
    }
}

/// Evaluates seeded samples until `wanted` hold or one fails.
pub(crate) fn scan(ctx: &Ctx, attempts: usize, wanted: usize, mut f: impl FnMut(u64) -> Result<Trial>) -> Result<Outcome> {
    let mut tally = Tally::default();
    for seed in ctx.seeds(attempts) {
        ctx.tick()?;
        if let Some(out) = tally.add(Some(seed), f(seed)?) {
            return Ok(out);
        }
        if tally.held() >= wanted {
            break;
        }
    }
    Ok(tally.finish())
}

pub(crate) fn skip(reason: impl Into<String>) -> Outcome {
    let mut d = Details::new();
    d.put("reason", reason.into());
    Outcome::new(Status::SkippedHypothesis, d)
}

pub(crate) fn verdict(ok: bool, details: Details) -> Trial {
    if ok {
        Trial::Hold(details)
    } else {
        Trial::Fail(details)
    }
}

pub(crate) fn log_p(p: u32, mut n: usize) -> usize {
    let mut k = 0;
    while n > 1 {
        n /= p as usize;
        k += 1;
    }
    k
}

/// `Ω₁(Z(N))`.
pub(crate) fn omega_center(g: &GroupTable, n: &Subgroup) -> Subgroup {
    g.omega1(&g.intersection(n, &g.centralizer(n)))
}

/// `d(Z(G)) = log_p |Ω₁(Z(G))|`.
pub(crate) fn center_rank(g: &GroupTable) -> usize {
    log_p(g.p(), g.omega1(&g.center()).order())
}

pub(crate) fn h1_conj(g: &GroupTable, kernel: &Subgroup, w: &Subgroup) -> Result<usize> {
    Ok(h1_dim(&module_from_conjugation(g, kernel, w)?.module)?)
}

/// Whether every derivation of `G/N₁` into `W` induces an inner
/// automorphism. With `W ≤ N₁` the induced maps compose additively, so a
/// basis of `Z¹` decides it.
pub(crate) fn induced_all_inner(g: &GroupTable, cm: &ConjugationModule) -> Result<bool> {
    for tau in cohomology(&cm.module, 1)?.z_derivations() {
        let psi = derivation_to_automorphism(g, cm, &tau)?;
        if is_inner(g, &psi)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `big/small` is cyclic, for `small ⊴ G` inside `big`.
pub(crate) fn quotient_is_cyclic(g: &GroupTable, big: &Subgroup, small: &Subgroup) -> bool {
    let index = big.order() / small.order();
    big.members().iter().any(|&x| {
        let mut k = 1;
        let mut y = x;
        while !small.contains(y) {
            y = g.mul(y, x);
            k += 1;
        }
        k == index
    })
}

pub(crate) fn normals(g: &GroupTable) -> Result<Vec<Subgroup>> {
    Ok(g.normal_subgroups(&g.whole(), ORDER_CAP)?)
}

pub(crate) fn specials(g: &GroupTable) -> Result<Vec<SpecialReport>> {
    if g.is_abelian() {
        return Ok(Vec::new());
    }
    Ok(find_special_subgroups(g)?.into_iter().filter(|r| r.is_special()).collect())
}

/// Keeps only the pinned subgroup, if the instance names one.
pub(crate) fn pinned<T>(ctx: &Ctx, items: Vec<T>, key: impl Fn(&T) -> &Subgroup) -> Vec<T> {
    match &ctx.instance.subgroup {
        Some(m) => items.into_iter().filter(|x| key(x).members() == m.as_slice()).collect(),
        None => items,
    }
}

/// Existence of an outer automorphism of order p, cached per table.
pub(crate) fn outer_exists(g: &GroupTable) -> Result<bool> {
    static CACHE: OnceLock<Mutex<HashMap<String, bool>>> = OnceLock::new();
    let key = fingerprint(g);
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&b) = cache.lock().unwrap().get(&key) {
        return Ok(b);
    }
    let found = engine_sweep(g)?.is_some();
    cache.lock().unwrap().insert(key, found);
    Ok(found)
}

pub(crate) fn cyclic_group(p: u32) -> Arc<GroupTable> {
    Arc::new(PcPresentation::new("C", p, 1).build().expect("cyclic group of prime order"))
}

/// `p^k` as a JSON number when it fits, else as the string `"p^k"`.
pub(crate) fn size_value(p: u32, k: usize) -> Value {
    match (p as u64).checked_pow(k as u32) {
        Some(v) => Value::from(v),
        None => Value::String(format!("{p}^{k}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;

    fn group(name: &str) -> Arc<GroupTable> {
        Catalog::builtin().get(name).unwrap().group.clone()
    }

    #[test]
    fn mixed_seeds_are_stable_and_distinct() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|k| mix_seed(7, k)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(mix_seed(7, 3), mix_seed(7, 3));
        assert_ne!(mix_seed(7, 3), mix_seed(8, 3));
    }

    #[test]
    fn tally_reports_first_failure() {
        let mut t = Tally::default();
        let mut d = Details::new();
        d.put("x", 1);
        assert!(t.add(Some(1), Trial::Hold(d.clone())).is_none());
        assert!(t.add(Some(2), Trial::Skip("no".into())).is_none());
        let out = t.add(Some(3), Trial::Fail(d)).unwrap();
        assert_eq!(out.status, Status::Counterexample);
        assert_eq!(out.replay_seed, Some(3));
        assert_eq!(out.details["scan_held"], 1);
        assert_eq!(out.details["scan_skipped"], 1);
    }

    #[test]
    fn tally_without_holds_skips_with_last_reason() {
        let mut t = Tally::default();
        t.add(None, Trial::Skip("first".into()));
        t.add(None, Trial::Skip("second".into()));
        let out = t.finish();
        assert_eq!(out.status, Status::SkippedHypothesis);
        assert_eq!(out.details["reason"], "second");
        assert_eq!(Tally::default().finish().details["reason"], "no instance meets the hypotheses");
    }

    #[test]
    fn logs_and_sizes() {
        assert_eq!(log_p(2, 1), 0);
        assert_eq!(log_p(2, 64), 6);
        assert_eq!(log_p(3, 81), 4);
        assert_eq!(size_value(2, 10), Value::from(1024u64));
        assert_eq!(size_value(3, 100), Value::String("3^100".into()));
    }

    #[test]
    fn cyclic_quotients() {
        let c4 = group("C4");
        let v4 = group("C2xC2");
        assert!(quotient_is_cyclic(&c4, &c4.whole(), &c4.trivial()));
        assert!(!quotient_is_cyclic(&v4, &v4.whole(), &v4.trivial()));
        let d8 = group("D8");
        assert!(!quotient_is_cyclic(&d8, &d8.whole(), &d8.commutator_subgroup()));
        assert!(quotient_is_cyclic(&d8, &d8.whole(), &d8.maximal_subgroups()[0]));
    }

    #[test]
    fn omega_center_and_rank() {
        let d8 = group("D8");
        assert_eq!(omega_center(&d8, &d8.whole()), d8.center());
        assert_eq!(center_rank(&d8), 1);
        assert_eq!(center_rank(&group("C2xC2")), 2);
        assert_eq!(center_rank(&group("Q8xC2")), 2);
    }

    #[test]
    fn outer_existence_is_cached_and_true_on_small_groups() {
        for name in ["D8", "Q8", "Heis27"] {
            assert!(outer_exists(&group(name)).unwrap());
            assert!(outer_exists(&group(name)).unwrap());
        }
        assert_eq!(specials(&group("C4")).unwrap().len(), 0);
    }
}
