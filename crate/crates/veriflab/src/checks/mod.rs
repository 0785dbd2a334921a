//! Registry of claim checks.
//!
//! A check evaluates its hypotheses on an instance and, when they hold,
//! computes both sides of the conclusion. It reports a [`CheckVerdict`] and
//! never panics on a failed claim. Checks that sample objects draw seeds from
//! the instance seed and stop at the first sample meeting the hypotheses (or
//! the first violation); the seed of the reported sample is the replay seed.

mod common;
mod growth;
mod modules;
mod structure;

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Instant;

use pgv_core::group::GroupTable;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::catalog::{Catalog, CatalogEntry};
use crate::error::{Error, Result};

pub use common::mix_seed;
pub use modules::annihilator_duality_on;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Pass,
    Counterexample,
    SkippedHypothesis,
    Unsupported,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Counterexample => "COUNTEREXAMPLE",
            Status::SkippedHypothesis => "SKIPPED_HYPOTHESIS",
            Status::Unsupported => "UNSUPPORTED",
        }
    }
}

fn one() -> usize {
    1
}

/// What a check runs on. `n` is the number of free copies for module checks,
/// `t` the kernel rank for extension checks, and `subgroup` optionally pins
/// the normal subgroup that group-level checks range over.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub group: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub n: usize,
    #[serde(default = "one")]
    pub t: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subgroup: Option<Vec<u32>>,
}

impl Instance {
    pub fn new(group: &str, seed: u64) -> Self {
        Instance { group: group.to_string(), seed, n: 1, t: 1, subgroup: None }
    }
}

pub type Details = BTreeMap<String, Value>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckVerdict {
    pub check_id: String,
    pub instance: Instance,
    pub status: Status,
    pub details: Details,
    pub replay_seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    /// Ranges over subgroups of the catalog group.
    Group,
    /// Samples modules over the catalog group.
    Module,
    /// Builds extensions of the catalog group.
    Extension,
}

pub struct CheckSpec {
    pub id: &'static str,
    pub kind: Kind,
    /// Highest cohomological degree the check computes.
    pub degree: u8,
    pub summary: &'static str,
    run: fn(&Ctx) -> Result<Outcome>,
}

impl std::fmt::Debug for CheckSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CheckSpec").field("id", &self.id).field("kind", &self.kind).finish()
    }
}

macro_rules! spec {
    ($id:literal, $kind:ident, $deg:literal, $f:path, $summary:literal) => {
        CheckSpec { id: $id, kind: Kind::$kind, degree: $deg, summary: $summary, run: $f }
    };
}

static REGISTRY: &[CheckSpec] = &[
    spec!("induced_order_p", Group, 1, structure::induced_order_p, "maps g -> g*tau(gN1) into Omega1(Z(N)) have order p"),
    spec!("iset_index_bound", Group, 1, structure::iset_index_bound, "|I(N) : Z(G)Omega1(N)| <= p^d(Z(G)) when [N,N] <= Z(G) <= N"),
    spec!("inner_h1_iso", Group, 1, structure::inner_h1_iso, "H1 matches Z/B and the I-quotient when every induced map is inner"),
    spec!("wide_h1_certificate", Group, 1, structure::wide_h1_certificate, "H1 above d(Z(G)) over G/NC(N) forces an outer automorphism of order p"),
    spec!("centralizer_quotient_outer", Group, 1, structure::centralizer_quotient_outer, "H1 growth from G/C(N)N to G/N forces an outer automorphism"),
    spec!("frattini_containment", Group, 1, structure::frattini_containment, "equal H1 over G/A1 and G/A puts A1 inside the Frattini subgroup"),
    spec!("omega_center_proper", Group, 1, structure::omega_center_proper, "vanishing H1 makes Omega1(Z(N)) a proper subgroup of N"),
    spec!("centralized_module_bound", Group, 1, structure::centralized_module_bound, "C_W(A) is an n-(G/A) module for every normal A above N"),
    spec!("centralizer_strict", Group, 1, structure::centralizer_strict, "H1 growth makes C_W(A1) a proper subgroup of C_W(A2)"),
    spec!("self_centralizing_descent", Group, 1, structure::self_centralizing_descent, "small H1 over a self-centralizing N gives an outer map or a smaller one"),
    spec!("centralizer_cyclic", Group, 1, structure::centralizer_cyclic, "C(N1)N/N is cyclic for normal N1 above Omega1(Z(N))Z(G)"),
    spec!("maximal_subgroup_outer", Group, 1, structure::maximal_subgroup_outer, "NC(N) outside the Frattini subgroup forces an outer automorphism"),
    spec!("index_p_kernel_exists", Group, 1, structure::index_p_kernel_exists, "an index-p normal N1 exists above Omega1(Z(N))Z(G)"),
    spec!("noncyclic_kernel_outer", Group, 1, structure::noncyclic_kernel_outer, "non-cyclic C(N1)N1/N1 forces an outer automorphism"),
    spec!("trichotomy_nontrivial_centralizer", Group, 1, structure::trichotomy_nontrivial_centralizer, "outer map, smaller special subgroup, or one with larger I(C(M))"),
    spec!("double_growth_outer", Group, 1, structure::double_growth_outer, "H1 growth by two from G/N to G/N1 forces an outer automorphism"),
    spec!("trichotomy_trivial_centralizer_noncyclic", Group, 1, structure::trichotomy_trivial_centralizer_noncyclic, "outer map or a special subgroup of equal order with larger I(C(M))"),
    spec!("trichotomy_trivial_centralizer_cyclic", Group, 1, structure::trichotomy_trivial_centralizer_cyclic, "outer map, smaller special subgroup, or larger |I(C(M))|"),
    spec!("trichotomy_cyclic_quotient", Group, 1, structure::trichotomy_cyclic_quotient, "cyclic N/Z(G)Omega1(Z(N)): outer map or a better special subgroup"),
    spec!("special_trichotomy", Group, 1, structure::special_trichotomy, "any special subgroup: outer map or a better special subgroup"),
    spec!("outer_order_p_exists", Group, 1, structure::outer_order_p_exists, "a non-abelian p-group has an outer automorphism of order p"),
    spec!("generator_count", Module, 1, modules::generator_count, "every minimal generating set has d_G elements"),
    spec!("submodule_generator_bound", Module, 1, modules::submodule_generator_bound, "d_G(A1) <= d_G(A/A1) + d_G(A)"),
    spec!("free_embedding", Module, 1, modules::free_embedding, "A embeds in n free copies, fixed points onto the socle"),
    spec!("h1_zero_free", Module, 1, modules::h1_zero_free, "vanishing H1 gives an explicit isomorphism to a free module"),
    spec!("dual_fixed_points", Module, 1, modules::dual_fixed_points, "dim of fixed points of the dual equals d_G(A)"),
    spec!("dual_generators", Module, 1, modules::dual_generators, "d_G of the dual equals dim A^G"),
    spec!("annihilator_duality", Module, 1, modules::annihilator_duality, "L and R annihilators are inverse bijections with the size law"),
    spec!("h1_annihilator_generators", Module, 1, modules::h1_annihilator_generators, "dim H1(G,Q) equals d_G of the annihilator of Q"),
    spec!("kernel_expansion_unique", Extension, 2, growth::kernel_expansion_unique, "kernel elements expand uniquely over e_{k,l} on both sides"),
    spec!("up_image_free", Extension, 2, growth::up_image_free, "the image of up is free of rank n with trivial kernel action"),
    spec!("annihilator_descends", Extension, 2, growth::annihilator_descends, "down maps the annihilator over the extension onto the base annihilator"),
    spec!("filtration_products", Extension, 2, growth::filtration_products, "I_a I_b = I_{a+b} and every I_m is two-sided"),
    spec!("filtration_first_layer", Extension, 2, growth::filtration_first_layer, "I_1/I_2 is free of rank nt and d(I_1) = nt"),
    spec!("filtration_layers_rank2", Extension, 2, growth::filtration_layers_rank2, "layer i has min(i+1, 2p-1-i) free copies for t = 2"),
    spec!("extension_h1_upper", Extension, 2, growth::extension_h1_upper, "dim H1(ext,Q) <= dim H1(G,Q) + nt"),
    spec!("cokernel_bound", Extension, 2, growth::cokernel_bound, "log|coker xi| >= |G|(nt-m) - (t-1) dim down(Q)"),
    spec!("annihilator_generators_lower", Extension, 2, growth::annihilator_generators_lower, "d(annihilator over a C_p extension) >= n when m < n"),
    spec!("extension_h1_growth", Extension, 2, growth::extension_h1_growth, "dim H1 over a non-split C_p extension grows by n-m"),
    spec!("stable_h1_is_maximal", Extension, 2, growth::stable_h1_is_maximal, "unchanged H1 over a C_p extension forces dim H1 = n"),
    spec!("extension_h1_growth_rank_t", Extension, 2, growth::extension_h1_growth_rank_t, "growth tn-tm+1 for m >= 1 and exactly tn for m = 0"),
    spec!("extension_h1_growth_rank2", Extension, 2, growth::extension_h1_growth_rank2, "rank-2 kernel growth laws, including dim H1 = 2n"),
    spec!("exact_module_growth", Extension, 2, growth::exact_module_growth, "exactly-n module: stable over E/P1 implies growth by n over E"),
    spec!("stable_h2_cyclic", Extension, 2, growth::stable_h2_cyclic, "stable H1 over a C_p extension: H2 is one-dimensional, Q cyclic"),
    spec!("fixed_dimension_lower", Extension, 2, growth::fixed_dimension_lower, "dim Q >= p dim Q^P for a 1-module over a rank-2 extension"),
    spec!("fixed_dimension_equal", Extension, 2, growth::fixed_dimension_equal, "stable H1 gives dim Q = p dim Q^P with Q^P cyclic"),
    spec!("minimal_normal_free", Extension, 1, growth::minimal_normal_free, "dim Q = p dim Q^N for minimal normal N makes Q free over N"),
    spec!("extension_rank_unique_elementary", Extension, 2, growth::extension_rank_unique_elementary, "rank of the extension by a stable 1-module"),
    spec!("extension_rank_abelian", Extension, 2, growth::extension_rank_abelian, "abelian base: the extension by Q has rank d(G)+1"),
    spec!("two_minimal_normal_iff", Extension, 1, growth::two_minimal_normal_iff, "H1 stability of Q and of C_Q(N1 x N2) coincide"),
    spec!("radical_extension_growth", Extension, 2, growth::radical_extension_growth, "H1 of the radical grows by one over the extension mod the radical"),
];

pub fn registry() -> &'static [CheckSpec] {
    REGISTRY
}

pub fn find_check(id: &str) -> Option<&'static CheckSpec> {
    REGISTRY.iter().find(|c| c.id == id)
}

/// Result of one check body before it is wrapped into a verdict.
#[derive(Clone, Debug)]
pub(crate) struct Outcome {
    status: Status,
    details: Details,
    replay_seed: Option<u64>,
}

impl Outcome {
    fn new(status: Status, details: Details) -> Self {
        Outcome { status, details, replay_seed: None }
    }
}

pub(crate) struct Ctx<'a> {
    pub(crate) g: Arc<GroupTable>,
    pub(crate) instance: &'a Instance,
    replay: Option<u64>,
    deadline: Option<Instant>,
}

impl Ctx<'_> {
    /// Sample seeds: the replay seed alone, or `count` seeds mixed from the
    /// instance seed.
    fn seeds(&self, count: usize) -> Vec<u64> {
        match self.replay {
            Some(s) => vec![s],
            None => (0..count as u64).map(|k| mix_seed(self.instance.seed, k)).collect(),
        }
    }

    fn tick(&self) -> Result<()> {
        match self.deadline {
            Some(d) if Instant::now() >= d => Err(Error::Budget),
            _ => Ok(()),
        }
    }
}

/// Runs a check on a catalog group.
pub fn run_check(id: &str, catalog: &Catalog, instance: &Instance) -> Result<CheckVerdict> {
    let spec = find_check(id).ok_or_else(|| Error::UnknownCheck(id.into()))?;
    let entry = catalog.get(&instance.group).ok_or_else(|| Error::UnknownGroup(instance.group.clone()))?;
    Ok(evaluate(spec, entry, instance, None, None))
}

/// Runs a check with an optional replay seed and deadline. Errors inside the
/// check become `UNSUPPORTED` verdicts.
pub fn evaluate(
    spec: &CheckSpec,
    entry: &CatalogEntry,
    instance: &Instance,
    replay: Option<u64>,
    deadline: Option<Instant>,
) -> CheckVerdict {
    let ctx = Ctx { g: entry.group.clone(), instance, replay, deadline };
    let outcome = (spec.run)(&ctx).unwrap_or_else(|e| {
        let mut d = Details::new();
        d.insert("error".into(), Value::String(e.to_string()));
        Outcome::new(Status::Unsupported, d)
    });
    CheckVerdict {
        check_id: spec.id.to_string(),
        instance: instance.clone(),
        status: outcome.status,
        details: outcome.details,
        replay_seed: outcome.replay_seed.or(replay).unwrap_or(instance.seed),
    }
}

/// Details that describe the scan rather than the reported sample.
fn is_scan_key(k: &str) -> bool {
    k.starts_with("scan_")
}

/// Recomputes a verdict from its replay seed and compares status and the
/// sample's details.
pub fn reverify(verdict: &CheckVerdict, catalog: &Catalog) -> Result<bool> {
    let spec = find_check(&verdict.check_id).ok_or_else(|| Error::UnknownCheck(verdict.check_id.clone()))?;
    let entry = catalog.get(&verdict.instance.group).ok_or_else(|| Error::UnknownGroup(verdict.instance.group.clone()))?;
    let again = evaluate(spec, entry, &verdict.instance, Some(verdict.replay_seed), None);
    let strip = |d: &Details| -> Details { d.iter().filter(|(k, _)| !is_scan_key(k)).map(|(k, v)| (k.clone(), v.clone())).collect() };
    Ok(again.status == verdict.status && strip(&again.details) == strip(&verdict.details))
}
