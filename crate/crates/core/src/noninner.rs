//! Non-inner automorphisms of order p.
//!
//! Two drivers produce [`Certificate`]s. [`engine_sweep`] is exhaustive over
//! derivation-induced maps and falls back to a backtracking search over
//! automorphisms, so it always terminates with an answer. [`descent`] follows
//! the special-subgroup route and reports a [`Diagnostic`] when that route
//! gets stuck on an instance.
//!
//! Every derivation-backed certificate records the kernel `N₁`, the module
//! `W` and the derivation table, so the map can be rebuilt from scratch by
//! [`verify_certificate`].

use std::collections::HashSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::cohomology::{cohomology, derivation_to_automorphism, Derivation};
use crate::error::{Error, Result};
use crate::gmodule::{module_from_conjugation, ConjugationModule};
use crate::group::{automorphisms, is_inner, map_order, GroupMap, GroupTable, Subgroup};

/// Largest order accepted by the subgroup scans.
pub const ORDER_CAP: usize = 1024;
/// Largest order for exhaustive automorphism enumeration.
pub const BRUTE_FORCE_CAP: usize = 16;
/// Most cocycles enumerated when a route tries every derivation.
const ENUMERATION_CAP: u64 = 4096;

fn center_of(g: &GroupTable, s: &Subgroup) -> Subgroup {
    g.intersection(s, &g.centralizer(s))
}

/// Hex SHA-256 of the multiplication table.
pub fn fingerprint(g: &GroupTable) -> String {
    let digest = Sha256::digest(g.table_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// One defining condition of a special subgroup, with the element that
/// proves or refutes it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub holds: bool,
    pub witness: Option<u32>,
}

#[derive(Clone, Debug)]
pub struct SpecialReport {
    pub subgroup: Subgroup,
    pub centralizer: Subgroup,
    /// `I(C_G(N))`.
    pub i_centralizer: Vec<u32>,
    /// `C_G(N)/Z(N)` cyclic; witness generates it modulo `Z(N)`.
    pub cyclic_quotient: ConditionCheck,
    /// `I(C_G(N)) ≤ N`; witness lies in `I(C_G(N)) ∖ N` when it fails.
    pub i_inside: ConditionCheck,
    /// `C_G(N)N ≤ Φ(G)`; witness lies in `C_G(N)N ∖ Φ(G)` when it fails.
    pub inside_frattini: ConditionCheck,
}

impl SpecialReport {
    pub fn is_special(&self) -> bool {
        self.cyclic_quotient.holds && self.i_inside.holds && self.inside_frattini.holds
    }

    /// Selection key: smaller order first, then larger `|I(C_G(N))|`, then members.
    fn key(&self) -> (usize, std::cmp::Reverse<usize>, Vec<u32>) {
        (self.subgroup.order(), std::cmp::Reverse(self.i_centralizer.len()), self.subgroup.members().to_vec())
    }
}

/// The special-subgroup conditions for one normal subgroup.
pub fn special_report(g: &GroupTable, n: &Subgroup) -> SpecialReport {
    report_for(g, n, &g.frattini())
}

fn report_for(g: &GroupTable, n: &Subgroup, phi: &Subgroup) -> SpecialReport {
    let c = g.centralizer(n);
    let zn = g.intersection(n, &c);
    let index = c.order() / zn.order();
    let gen = c.members().iter().copied().find(|&x| {
        let mut k = 1;
        let mut y = x;
        while !zn.contains(y) {
            y = g.mul(y, x);
            k += 1;
        }
        k == index
    });
    let cyclic_quotient = ConditionCheck { holds: gen.is_some(), witness: gen };
    let i_centralizer = g.iset(&c).elements;
    let outside = i_centralizer.iter().copied().find(|&x| !n.contains(x));
    let i_inside = ConditionCheck { holds: outside.is_none(), witness: outside };
    let cn = g.product(&c, n);
    let escape = cn.members().iter().copied().find(|&x| !phi.contains(x));
    let inside_frattini = ConditionCheck { holds: escape.is_none(), witness: escape };
    SpecialReport { subgroup: n.clone(), centralizer: c, i_centralizer, cyclic_quotient, i_inside, inside_frattini }
}

/// Evaluates the special-subgroup conditions on every normal subgroup inside
/// `Φ(G)`, sorted by (order, members).
pub fn find_special_subgroups(g: &GroupTable) -> Result<Vec<SpecialReport>> {
    if g.is_abelian() {
        return Err(Error::Abelian);
    }
    let phi = g.frattini();
    let normals = g.normal_subgroups(&phi, ORDER_CAP)?;
    Ok(normals.iter().map(|n| report_for(g, n, &phi)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Wire name `paper`, fixed by the certificate format.
    #[serde(rename = "paper")]
    Descent,
    Search,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainLink {
    pub role: String,
    pub members: Vec<u32>,
}

impl ChainLink {
    fn new(role: &str, s: &Subgroup) -> Self {
        ChainLink { role: role.to_string(), members: s.members().to_vec() }
    }
}

/// How a certificate was found and the data needed to rebuild its map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub mode: Mode,
    pub route: String,
    pub chain: Vec<ChainLink>,
    /// `N₁`, the kernel of the quotient the derivation lives on.
    pub kernel: Vec<u32>,
    /// Members of the coefficient subgroup `W`.
    pub w: Vec<u32>,
    /// Group elements matching the module's standard basis vectors.
    pub basis: Vec<u32>,
    /// Derivation table over the cosets of `N₁`, `dim` entries per coset.
    pub derivation: Option<Vec<u32>>,
}

/// Route tag used when the map came from automorphism backtracking.
pub const AUTOMORPHISM_SEARCH: &str = "automorphism-search";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub fingerprint: String,
    pub p: u32,
    pub order: usize,
    pub map: Vec<u32>,
    pub provenance: Provenance,
    pub transcript: Vec<String>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Invalid(format!("certificate json: {e}")))
    }

    pub fn map(&self) -> GroupMap {
        GroupMap { image_of: self.map.clone() }
    }
}

/// Outcome of [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub ok: bool,
    pub transcript: Vec<String>,
}

/// Re-checks a certificate from its raw data.
pub fn verify_certificate(g: &GroupTable, c: &Certificate) -> Result<Verification> {
    if c.fingerprint != fingerprint(g) || c.p != g.p() || c.order != g.order() {
        return Err(Error::FingerprintMismatch);
    }
    let mut t = Vec::new();
    let fail = |mut t: Vec<String>, msg: String| {
        t.push(msg);
        Ok(Verification { ok: false, transcript: t })
    };
    let n = g.order();
    if c.map.len() != n || c.map.iter().any(|&y| y as usize >= n) {
        return fail(t, "map has the wrong shape".into());
    }
    for x in g.elements() {
        for y in g.elements() {
            if c.map[g.mul(x, y) as usize] != g.mul(c.map[x as usize], c.map[y as usize]) {
                return fail(t, format!("homomorphism fails at pair ({x}, {y})"));
            }
        }
    }
    t.push(format!("homomorphism on all {} pairs", n * n));
    let f = c.map();
    if !f.is_bijective() {
        return fail(t, "not bijective".into());
    }
    t.push("bijective".into());
    let k = map_order(&f);
    if k != g.p() as usize {
        return fail(t, format!("order {k}, expected {}", g.p()));
    }
    t.push(format!("order {k}"));
    if let Some(h) = is_inner(g, &f)? {
        return fail(t, format!("inner: conjugation by {h}"));
    }
    t.push(format!("non-inner: {} representatives of Z(G)-cosets tried", n / g.center().order()));
    match &c.provenance.derivation {
        Some(table) => match replay(g, &c.provenance, table) {
            Ok(psi) if psi == f => t.push("replay: derivation reproduces the map".into()),
            Ok(_) => return fail(t, "replay: derivation induces a different map".into()),
            Err(e) => return fail(t, format!("replay failed: {e}")),
        },
        None if c.provenance.route == AUTOMORPHISM_SEARCH => {
            t.push("replay: no derivation, map checked directly".into())
        }
        None => return fail(t, "replay: derivation missing".into()),
    }
    Ok(Verification { ok: true, transcript: t })
}

fn replay(g: &GroupTable, prov: &Provenance, table: &[u32]) -> Result<GroupMap> {
    let kernel = g.subgroup(&prov.kernel)?;
    let w = g.subgroup(&prov.w)?;
    let cm = module_from_conjugation(g, &kernel, &w)?;
    if cm.wbasis.basis != prov.basis {
        return Err(Error::Invalid("module basis differs from the recorded one".into()));
    }
    let dim = cm.wbasis.rank();
    if table.len() != cm.quotient_group.order() * dim {
        return Err(Error::Invalid("derivation table has the wrong length".into()));
    }
    derivation_to_automorphism(g, &cm, &Derivation { dim, table: table.to_vec() })
}

fn certificate(
    g: &GroupTable,
    f: &GroupMap,
    mode: Mode,
    route: &str,
    chain: Vec<ChainLink>,
    source: Option<(&ConjugationModule, &Derivation)>,
) -> Result<Certificate> {
    let (kernel, w, basis, derivation) = match source {
        Some((cm, tau)) => (
            cm.map.kernel.members().to_vec(),
            cm.w.members().to_vec(),
            cm.wbasis.basis.clone(),
            Some(tau.table.clone()),
        ),
        None => (Vec::new(), Vec::new(), Vec::new(), None),
    };
    let provenance = Provenance { mode, route: route.to_string(), chain, kernel, w, basis, derivation };
    let mut c = Certificate {
        fingerprint: fingerprint(g),
        p: g.p(),
        order: g.order(),
        map: f.image_of.clone(),
        provenance,
        transcript: Vec::new(),
    };
    let v = verify_certificate(g, &c)?;
    if !v.ok {
        return Err(Error::Invalid(format!("constructed certificate fails: {}", v.transcript.join("; "))));
    }
    c.transcript = v.transcript;
    Ok(c)
}

/// An outer automorphism of order p induced by some derivation in the
/// `h_reps` of `H¹(G/N₁, W)`, if any.
pub fn outer_from_basis(g: &GroupTable, cm: &ConjugationModule) -> Result<Option<(Derivation, GroupMap)>> {
    let space = cohomology(&cm.module, 1)?;
    for tau in space.h_derivations() {
        let Ok(psi) = derivation_to_automorphism(g, cm, &tau) else { continue };
        if map_order(&psi) == g.p() as usize && is_inner(g, &psi)?.is_none() {
            return Ok(Some((tau, psi)));
        }
    }
    Ok(None)
}

/// Like [`outer_from_basis`], but over every nonzero cocycle. Used where the
/// induced maps need not compose additively.
pub fn outer_from_cocycles(g: &GroupTable, cm: &ConjugationModule) -> Result<Option<(Derivation, GroupMap)>> {
    let space = cohomology(&cm.module, 1)?;
    let p = g.p() as u64;
    let basis = space.z_derivations();
    let count = p.checked_pow(basis.len() as u32).unwrap_or(u64::MAX).min(ENUMERATION_CAP);
    for code in 1..count {
        let mut c = code;
        let mut table = vec![0u32; basis.first().map_or(0, |b| b.table.len())];
        for b in &basis {
            let k = (c % p) as u32;
            c /= p;
            for (t, &v) in table.iter_mut().zip(&b.table) {
                *t = (*t + k * v) % g.p();
            }
        }
        let tau = Derivation { dim: cm.wbasis.rank(), table };
        let Ok(psi) = derivation_to_automorphism(g, cm, &tau) else { continue };
        if map_order(&psi) == g.p() as usize && is_inner(g, &psi)?.is_none() {
            return Ok(Some((tau, psi)));
        }
    }
    Ok(None)
}

/// Budget for [`engine_sweep_until`].
#[derive(Clone, Copy, Debug, Default)]
pub struct SweepBudget {
    pub deadline: Option<Instant>,
}

impl SweepBudget {
    fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// Exhaustive search for a non-inner automorphism of order p.
pub fn engine_sweep(g: &GroupTable) -> Result<Option<Certificate>> {
    engine_sweep_until(g, SweepBudget::default())
}

/// [`engine_sweep`] that gives up with an `OrderCap`-free `Invalid` error
/// once the deadline passes.
///
/// Stages, each in (order, members) order:
/// 1. every normal `N ≤ Φ(G)` with `W = Ω₁(Z(N))` and kernels `N₁`,
///    `W ≤ N₁ ≤ N`, normal in `G`;
/// 2. every normal `N₁` with `W = Ω₁(Z(N₁))` or `W = Ω₁(Z(G))`;
/// 3. backtracking over generator images.
pub fn engine_sweep_until(g: &GroupTable, budget: SweepBudget) -> Result<Option<Certificate>> {
    if let Some(c) = derivation_sweep(g, budget)? {
        return Ok(Some(c));
    }
    match search_automorphisms(g, budget)? {
        Some(f) => certificate(g, &f, Mode::Search, AUTOMORPHISM_SEARCH, Vec::new(), None).map(Some),
        None => Ok(None),
    }
}

/// Stages 1 and 2 of [`engine_sweep_until`]: derivation-induced maps only.
pub fn derivation_sweep(g: &GroupTable, budget: SweepBudget) -> Result<Option<Certificate>> {
    if g.is_abelian() {
        return Err(Error::Abelian);
    }
    let timeout = || Error::Invalid("sweep deadline passed".into());
    let phi = g.frattini();
    let mut tried: HashSet<(Vec<u32>, Vec<u32>)> = HashSet::new();
    for n in g.normal_subgroups(&phi, ORDER_CAP)? {
        let zn = g.intersection(&n, &g.centralizer(&n));
        let w = g.omega1(&zn);
        if w.is_trivial() {
            continue;
        }
        for n1 in g.normal_subgroups(&n, ORDER_CAP)? {
            if !w.is_subgroup_of(&n1) || !tried.insert((n1.members().to_vec(), w.members().to_vec())) {
                continue;
            }
            if budget.expired() {
                return Err(timeout());
            }
            let cm = module_from_conjugation(g, &n1, &w)?;
            if let Some((tau, psi)) = outer_from_basis(g, &cm)? {
                let chain = vec![ChainLink::new("N", &n), ChainLink::new("N1", &n1), ChainLink::new("W", &w)];
                return certificate(g, &psi, Mode::Search, "sweep", chain, Some((&cm, &tau))).map(Some);
            }
        }
    }
    let zg = g.center();
    let wz = g.omega1(&zg);
    for n1 in g.normal_subgroups(&g.whole(), ORDER_CAP)? {
        let own = g.omega1(&g.intersection(&n1, &g.centralizer(&n1)));
        for w in [own, wz.clone()] {
            if w.is_trivial()
                || !w.is_subgroup_of(&n1)
                || !tried.insert((n1.members().to_vec(), w.members().to_vec()))
            {
                continue;
            }
            if budget.expired() {
                return Err(timeout());
            }
            let cm = module_from_conjugation(g, &n1, &w)?;
            if let Some((tau, psi)) = outer_from_basis(g, &cm)? {
                let chain = vec![ChainLink::new("N1", &n1), ChainLink::new("W", &w)];
                return certificate(g, &psi, Mode::Search, "sweep-general", chain, Some((&cm, &tau))).map(Some);
            }
        }
    }
    Ok(None)
}

/// Backtracking over automorphisms, stopping at the first outer one of order p.
fn search_automorphisms(g: &GroupTable, budget: SweepBudget) -> Result<Option<GroupMap>> {
    let gens = g.generators().to_vec();
    let inner: HashSet<Vec<u32>> =
        g.elements().map(|h| gens.iter().map(|&x| g.conj(x, h)).collect()).collect();
    let p = g.p() as usize;
    let mut found = None;
    let mut expired = false;
    automorphisms(g, &mut |f| {
        if budget.expired() {
            expired = true;
            return false;
        }
        if f.is_identity() || inner.contains(&gens.iter().map(|&x| f.apply(x)).collect::<Vec<_>>()) {
            return true;
        }
        let mut cur = f.clone();
        for _ in 1..p {
            cur = f.compose(&cur);
        }
        if cur.is_identity() {
            found = Some(f);
            return false;
        }
        true
    });
    if expired && found.is_none() {
        return Err(Error::Invalid("sweep deadline passed".into()));
    }
    Ok(found)
}

/// Result of [`brute_force_order_p_noninner`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BruteForce {
    Found(GroupMap),
    Absent,
    Unsupported,
}

/// Enumerates `Aut(G)` for `|G| ≤ 16` and returns an outer automorphism of order p.
pub fn brute_force_order_p_noninner(g: &GroupTable) -> BruteForce {
    if g.order() > BRUTE_FORCE_CAP {
        return BruteForce::Unsupported;
    }
    let p = g.p() as usize;
    let mut found = None;
    automorphisms(g, &mut |f| {
        if !f.is_identity() && map_order(&f) == p && is_inner(g, &f).ok().flatten().is_none() {
            found = Some(f);
            return false;
        }
        true
    });
    found.map_or(BruteForce::Absent, BruteForce::Found)
}

/// `|I(N)/Z(G)Ω₁(N)| ≤ p^{d(Z(G))}` evaluated on one subgroup.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexBound {
    pub subgroup: Vec<u32>,
    /// Whether `I(N)` is closed under multiplication.
    pub i_closed: bool,
    /// `log_p |⟨I(N)⟩Z(G) : Z(G)Ω₁(N)|`.
    pub log_index: u32,
    /// `d(Z(G))`.
    pub bound: u32,
    pub holds: bool,
}

fn log_p(p: u32, mut n: usize) -> u32 {
    let mut k = 0;
    while n > 1 {
        n /= p as usize;
        k += 1;
    }
    k
}

pub fn index_bound(g: &GroupTable, n: &Subgroup) -> IndexBound {
    let zg = g.center();
    let iset = g.iset(n);
    let i_closed = iset.subgroup.is_some();
    let top = g.product(&g.closure(&iset.elements), &zg);
    let bottom = g.product(&zg, &g.omega1(n));
    let log_index = log_p(g.p(), top.order() / bottom.order());
    let bound = log_p(g.p(), g.omega1(&zg).order());
    IndexBound { subgroup: n.members().to_vec(), i_closed, log_index, bound, holds: log_index <= bound }
}

/// One `H¹` computed along the way.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Record {
    pub label: String,
    pub kernel: Vec<u32>,
    pub w: Vec<u32>,
    pub module_dim: usize,
    pub h1_dim: usize,
}

fn h1_record(label: &str, cm: &ConjugationModule) -> Result<H1Record> {
    Ok(H1Record {
        label: label.to_string(),
        kernel: cm.map.kernel.members().to_vec(),
        w: cm.w.members().to_vec(),
        module_dim: cm.module.dim(),
        h1_dim: cohomology(&cm.module, 1)?.h_dim(),
    })
}

/// Recomputes every recorded `H¹` dimension.
pub fn replay_h1_records(g: &GroupTable, records: &[H1Record]) -> Result<bool> {
    for r in records {
        let cm = module_from_conjugation(g, &g.subgroup(&r.kernel)?, &g.subgroup(&r.w)?)?;
        if h1_record(&r.label, &cm)? != *r {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateDump {
    pub fingerprint: String,
    pub p: u32,
    pub order: usize,
    pub frattini: Vec<u32>,
    pub center: Vec<u32>,
    pub centralizer_of_frattini: Vec<u32>,
    pub special: Vec<Vec<u32>>,
    /// Special subgroups visited, in order.
    pub selected: Vec<Vec<u32>>,
    pub h1: Vec<H1Record>,
    pub index_bounds: Vec<IndexBound>,
}

impl StateDump {
    fn new(g: &GroupTable) -> Self {
        let phi = g.frattini();
        StateDump {
            fingerprint: fingerprint(g),
            p: g.p(),
            order: g.order(),
            frattini: phi.members().to_vec(),
            center: g.center().members().to_vec(),
            centralizer_of_frattini: g.centralizer(&phi).members().to_vec(),
            ..Default::default()
        }
    }
}

/// Why the special-subgroup route stopped, with everything it computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub step: String,
    pub reason: String,
    pub state: StateDump,
    /// A certificate from [`engine_sweep`] for the same group, if one exists.
    pub search_certificate: Option<Certificate>,
}

impl Diagnostic {
    /// Checks the fingerprint and recomputes the recorded `H¹` dimensions.
    pub fn replay(&self, g: &GroupTable) -> Result<bool> {
        if self.state.fingerprint != fingerprint(g) {
            return Err(Error::FingerprintMismatch);
        }
        replay_h1_records(g, &self.state.h1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Outcome {
    Certificate(Certificate),
    Diagnostic(Diagnostic),
}

/// What the wide-`H¹` probe measured when it found nothing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub h1: H1Record,
    /// `d(Z(G)) + 1`.
    pub required: usize,
    pub index_bound: IndexBound,
    /// `log_p |I(C_G(N))Z(G) : Z(G)Ω₁(N)|`, compared against `dim H¹`.
    pub quotient_log: u32,
    pub quotient_matches_h1: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ProbeOutcome {
    Unmet { reason: String },
    Absent { record: ProbeRecord },
    Certificate(Certificate),
    Diagnostic(Diagnostic),
}

/// For a special `N`, computes `H¹(G/NC_G(N), Ω₁(Z(NC_G(N))))` and looks for
/// an outer automorphism among the induced maps. If `dim H¹ > d(Z(G))` and
/// none is found, the instance contradicts the expected existence result.
pub fn wide_h1_probe(g: &GroupTable, n: &Subgroup) -> Result<ProbeOutcome> {
    if g.is_abelian() {
        return Ok(ProbeOutcome::Unmet { reason: "abelian group".into() });
    }
    if !n.is_normal() {
        return Ok(ProbeOutcome::Unmet { reason: "not normal".into() });
    }
    let phi = g.frattini();
    let rep = report_for(g, n, &phi);
    for (name, c) in [
        ("C_G(N)/Z(N) not cyclic", &rep.cyclic_quotient),
        ("I(C_G(N)) not inside N", &rep.i_inside),
        ("C_G(N)N not inside Φ(G)", &rep.inside_frattini),
    ] {
        if !c.holds {
            return Ok(ProbeOutcome::Unmet { reason: name.into() });
        }
    }
    let a = g.product(n, &rep.centralizer);
    let w = g.omega1(&center_of(g, &a));
    let cm = module_from_conjugation(g, &a, &w)?;
    let required = log_p(g.p(), g.omega1(&g.center()).order()) as usize + 1;
    let h1 = h1_record("wide-h1", &cm)?;
    if let Some((tau, psi)) = outer_from_basis(g, &cm)? {
        let chain = vec![ChainLink::new("N", n), ChainLink::new("A", &a), ChainLink::new("W", &w)];
        return certificate(g, &psi, Mode::Descent, "wide-h1", chain, Some((&cm, &tau))).map(ProbeOutcome::Certificate);
    }
    let index_bound = index_bound(g, n);
    let zg = g.center();
    let top = g.product(&g.closure(&rep.i_centralizer), &zg);
    let bottom = g.product(&zg, &g.omega1(n));
    let quotient_log = log_p(g.p(), top.order() / bottom.order());
    let record = ProbeRecord {
        quotient_matches_h1: quotient_log as usize == h1.h1_dim,
        h1,
        required,
        index_bound,
        quotient_log,
    };
    if record.h1.h1_dim >= required {
        let mut state = StateDump::new(g);
        state.selected.push(n.members().to_vec());
        state.h1.push(record.h1.clone());
        state.index_bounds.push(record.index_bound.clone());
        return Ok(ProbeOutcome::Diagnostic(Diagnostic {
            step: "wide-h1".into(),
            reason: format!(
                "dim H1 = {} reaches d(Z(G)) + 1 = {required} but every induced map is inner",
                record.h1.h1_dim
            ),
            state,
            search_certificate: engine_sweep(g).ok().flatten(),
        }));
    }
    Ok(ProbeOutcome::Absent { record })
}

/// Tries `ψ(x) = x·τ(xM)` for maximal `M` avoiding `h` and `τ` into `Ω₁(Z(G))`.
fn maximal_subgroup_route(g: &GroupTable, h: u32, state: &mut StateDump) -> Result<Option<Certificate>> {
    let w = g.omega1(&g.center());
    for m in g.maximal_subgroups() {
        if m.contains(h) || !w.is_subgroup_of(&m) {
            continue;
        }
        let cm = module_from_conjugation(g, &m, &w)?;
        state.h1.push(h1_record("maximal-subgroup", &cm)?);
        if let Some((tau, psi)) = outer_from_cocycles(g, &cm)? {
            let chain = vec![ChainLink::new("M", &m), ChainLink::new("W", &w)];
            let mut c = certificate(g, &psi, Mode::Descent, "maximal-subgroup", chain, Some((&cm, &tau)))?;
            c.provenance.chain.insert(0, ChainLink { role: "h".into(), members: vec![h] });
            return Ok(Some(c));
        }
    }
    Ok(None)
}

fn stuck(g: &GroupTable, step: &str, reason: String, state: StateDump) -> Outcome {
    Outcome::Diagnostic(Diagnostic {
        step: step.into(),
        reason,
        state,
        search_certificate: engine_sweep(g).ok().flatten(),
    })
}

/// The special-subgroup route.
///
/// If `C_G(Φ(G)) ⊄ Φ(G)` it goes straight to the maximal-subgroup
/// construction. Otherwise it selects the special subgroup of least order
/// (ties: larger `|I(C_G(N))|`, then members) and tries in turn: the
/// centralizer quotient `G/N` against `G/C_G(N)N`, the wide-`H¹` probe,
/// kernels of index p in `N`, and the maximal-subgroup construction for
/// normal `B ≤ Φ(G)` with `I(C_G(B)) ≤ B` and `C_G(B)B ⊄ Φ(G)`. When all fail
/// it moves to a strictly better special subgroup, if any, and otherwise
/// reports a [`Diagnostic`].
pub fn descent(g: &GroupTable) -> Result<Outcome> {
    if g.is_abelian() {
        return Err(Error::Abelian);
    }
    let mut state = StateDump::new(g);
    let phi = g.frattini();
    let c_phi = g.centralizer(&phi);
    if let Some(h) = c_phi.members().iter().copied().find(|&x| !phi.contains(x)) {
        return Ok(match maximal_subgroup_route(g, h, &mut state)? {
            Some(c) => Outcome::Certificate(c),
            None => stuck(
                g,
                "maximal-subgroup",
                format!("every map x·τ(xM) with h = {h} outside M is inner or not of order p"),
                state,
            ),
        });
    }
    let reports = find_special_subgroups(g)?;
    let mut special: Vec<&SpecialReport> = reports.iter().filter(|r| r.is_special()).collect();
    state.special = special.iter().map(|r| r.subgroup.members().to_vec()).collect();
    if special.is_empty() {
        return Ok(stuck(g, "entry", "descent stuck at entry: no special subgroup".into(), state));
    }
    special.sort_by_key(|r| r.key());
    let normals = g.normal_subgroups(&g.whole(), ORDER_CAP)?;
    let mut current = special[0];
    for _ in 0..g.order() {
        let n = &current.subgroup;
        state.selected.push(n.members().to_vec());
        state.index_bounds.push(index_bound(g, n));
        let w = g.omega1(&center_of(g, n));
        let a = g.product(n, &current.centralizer);
        let chain = |extra: &[(&str, &Subgroup)]| {
            let mut v = vec![ChainLink::new("N", n)];
            v.extend(extra.iter().map(|(r, s)| ChainLink::new(r, s)));
            v
        };

        if !w.is_trivial() && a.order() > n.order() {
            let fine = module_from_conjugation(g, n, &w)?;
            let coarse = module_from_conjugation(g, &a, &w)?;
            state.h1.push(h1_record("centralizer-quotient/N", &fine)?);
            state.h1.push(h1_record("centralizer-quotient/A", &coarse)?);
            if let Some((tau, psi)) = outer_from_basis(g, &fine)? {
                let ch = chain(&[("A", &a), ("W", &w)]);
                let c = certificate(g, &psi, Mode::Descent, "centralizer-quotient", ch, Some((&fine, &tau)))?;
                return Ok(Outcome::Certificate(c));
            }
        }

        match wide_h1_probe(g, n)? {
            ProbeOutcome::Certificate(c) => return Ok(Outcome::Certificate(c)),
            ProbeOutcome::Diagnostic(mut d) => {
                d.state.special = state.special.clone();
                d.state.h1.splice(0..0, state.h1.iter().cloned());
                return Ok(Outcome::Diagnostic(d));
            }
            ProbeOutcome::Absent { record } => state.h1.push(record.h1),
            ProbeOutcome::Unmet { .. } => {}
        }

        if !w.is_trivial() {
            for n1 in normals.iter().filter(|n1| {
                n1.order() * g.p() as usize == n.order() && n1.is_subgroup_of(n) && w.is_subgroup_of(n1)
            }) {
                let cm = module_from_conjugation(g, n1, &w)?;
                state.h1.push(h1_record("index-p-kernel", &cm)?);
                if let Some((tau, psi)) = outer_from_basis(g, &cm)? {
                    let ch = chain(&[("N1", n1), ("W", &w)]);
                    let c = certificate(g, &psi, Mode::Descent, "index-p-kernel", ch, Some((&cm, &tau)))?;
                    return Ok(Outcome::Certificate(c));
                }
            }
        }

        for b in normals.iter().filter(|b| b.is_subgroup_of(&phi)) {
            let cb = g.centralizer(b);
            let iset = g.iset(&cb).elements;
            if !iset.iter().all(|&x| b.contains(x)) {
                continue;
            }
            if let Some(h) = g.product(&cb, b).members().iter().copied().find(|&x| !phi.contains(x)) {
                let h = cb.members().iter().copied().find(|&x| !phi.contains(x)).unwrap_or(h);
                if let Some(mut c) = maximal_subgroup_route(g, h, &mut state)? {
                    c.provenance.chain.insert(0, ChainLink::new("B", b));
                    return Ok(Outcome::Certificate(c));
                }
            }
        }

        let key = current.key();
        let visited: HashSet<&[u32]> = state.selected.iter().map(|v| v.as_slice()).collect();
        match special.iter().find(|r| r.key() < key && !visited.contains(r.subgroup.members())) {
            Some(next) => current = next,
            None => {
                return Ok(stuck(
                    g,
                    "replacement",
                    format!(
                        "no construction applies to the special subgroup of order {} and no smaller replacement exists",
                        n.order()
                    ),
                    state,
                ))
            }
        }
    }
    Ok(stuck(g, "iteration-bound", format!("no conclusion within {} iterations", g.order()), state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PcPresentation;

    fn grp(p: u32, n: usize, pows: &[(usize, &str)], comms: &[(usize, usize, &str)]) -> GroupTable {
        PcPresentation::parse_relations(p, n, pows, comms).unwrap().build().unwrap()
    }

    fn d8() -> GroupTable {
        grp(2, 3, &[(1, "g3")], &[(1, 0, "g3")])
    }

    fn q8() -> GroupTable {
        grp(2, 3, &[(0, "g3"), (1, "g3")], &[(1, 0, "g3")])
    }

    fn heis27() -> GroupTable {
        grp(3, 3, &[], &[(1, 0, "g3")])
    }

    fn d16() -> GroupTable {
        grp(2, 4, &[(1, "g3"), (2, "g4")], &[(1, 0, "g3*g4"), (2, 0, "g4")])
    }

    #[test]
    fn abelian_inputs() {
        let c4 = grp(2, 2, &[(0, "g2")], &[]);
        assert_eq!(find_special_subgroups(&c4).unwrap_err(), Error::Abelian);
        assert_eq!(engine_sweep(&c4).unwrap_err(), Error::Abelian);
        let BruteForce::Found(f) = brute_force_order_p_noninner(&c4) else { panic!() };
        assert!(!f.is_identity());
        assert!(g_all(&c4, |x| f.apply(x) == c4.inv(x)));
    }

    fn g_all(g: &GroupTable, pred: impl Fn(u32) -> bool) -> bool {
        g.elements().all(pred)
    }

    #[test]
    fn d8_has_no_special_subgroup() {
        let g = d8();
        let reports = find_special_subgroups(&g).unwrap();
        assert!(reports.iter().all(|r| !r.is_special()));
        let z = reports.iter().find(|r| r.subgroup.order() == 2).unwrap();
        assert!(!z.inside_frattini.holds);
        assert!(!g.frattini().contains(z.inside_frattini.witness.unwrap()));
    }

    #[test]
    fn sweep_matches_brute_force_on_small_groups() {
        for g in [d8(), q8(), d16(), grp(2, 4, &[(0, "g4"), (1, "g3"), (2, "g4")], &[(1, 0, "g3"), (2, 0, "g4")])] {
            let c = engine_sweep(&g).unwrap().expect("certificate");
            assert!(verify_certificate(&g, &c).unwrap().ok);
            assert!(matches!(brute_force_order_p_noninner(&g), BruteForce::Found(_)));
        }
    }

    #[test]
    fn heisenberg_certificates() {
        let g = heis27();
        let c = engine_sweep(&g).unwrap().unwrap();
        assert!(verify_certificate(&g, &c).unwrap().ok);
        match descent(&g).unwrap() {
            Outcome::Certificate(c) => assert!(verify_certificate(&g, &c).unwrap().ok),
            Outcome::Diagnostic(d) => {
                assert!(d.replay(&g).unwrap());
                assert!(verify_certificate(&g, d.search_certificate.as_ref().unwrap()).unwrap().ok);
            }
        }
    }

    #[test]
    fn json_round_trip_is_stable() {
        let g = d16();
        let c = engine_sweep(&g).unwrap().unwrap();
        let text = c.to_json();
        let back = Certificate::from_json(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_json(), text);
        assert_eq!(engine_sweep(&g).unwrap().unwrap().to_json(), text);
    }

    #[test]
    fn tampering_is_detected() {
        let g = d16();
        let c = engine_sweep(&g).unwrap().unwrap();
        let mut bad = c.clone();
        let x = (1..g.order()).find(|&x| bad.map[x] != bad.map[1]).unwrap();
        bad.map[1] = c.map[x];
        let v = verify_certificate(&g, &bad).unwrap();
        assert!(!v.ok);
        assert!(v.transcript.last().unwrap().contains("pair") || v.transcript.last().unwrap().contains("shape"));
        if c.provenance.derivation.is_some() {
            let mut zeroed = c.clone();
            zeroed.provenance.derivation = Some(vec![0; c.provenance.derivation.as_ref().unwrap().len()]);
            let v = verify_certificate(&g, &zeroed).unwrap();
            assert!(!v.ok);
            assert!(v.transcript.last().unwrap().starts_with("replay"));
        }
        assert_eq!(verify_certificate(&d8(), &c).unwrap_err(), Error::FingerprintMismatch);
    }

    #[test]
    fn index_bound_holds_on_special_subgroups() {
        for g in [d16(), heis27(), q8()] {
            for r in find_special_subgroups(&g).unwrap() {
                assert!(index_bound(&g, &r.subgroup).holds);
            }
        }
    }

    #[test]
    fn probe_reports_unmet_hypotheses() {
        let g = d8();
        let z = g.center();
        assert!(matches!(wide_h1_probe(&g, &z).unwrap(), ProbeOutcome::Unmet { .. }));
    }
}
