//! Finite p-groups stored as full multiplication tables.
//!
//! Elements are indices `0..order`; index 0 is always the identity. The
//! conjugate `x^h` means `h⁻¹ x h` and the commutator `[x, y]` means
//! `x⁻¹ y⁻¹ x y`.

mod iso;
mod pc;

pub use iso::{automorphisms, extend_homomorphism, find_isomorphism, invariants, Invariants};
pub use pc::{format_word, parse_word, PcPresentation, Word};

use std::collections::HashSet;
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fp_linalg::is_prime;

/// Default ceiling on group order.
pub const DEFAULT_ORDER_CAP: usize = 1024;
/// Hard ceiling on group order.
pub const MAX_ORDER_CAP: usize = 4096;
/// Groups up to this order get the exhaustive associativity check.
pub const EXHAUSTIVE_ASSOC_LIMIT: usize = 512;

pub struct GroupTable {
    p: u32,
    order: usize,
    log_order: u32,
    mul: Vec<u32>,
    inv: Vec<u32>,
    names: Option<Vec<String>>,
    generators: OnceLock<Vec<u32>>,
}

impl std::fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "GroupTable(p={}, order={})", self.p, self.order)
    }
}

impl PartialEq for GroupTable {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.mul == other.mul
    }
}
impl Eq for GroupTable {}

fn log_p(p: u32, mut n: usize) -> Option<u32> {
    let mut k = 0;
    while n > 1 {
        if n % p as usize != 0 {
            return None;
        }
        n /= p as usize;
        k += 1;
    }
    (n == 1).then_some(k)
}

impl GroupTable {
    /// Validates a multiplication table and wraps it. Associativity is checked
    /// exhaustively up to [`EXHAUSTIVE_ASSOC_LIMIT`]; above that the check runs
    /// Light's test over a generating set, which is also a complete proof.
    pub fn from_table(p: u32, order: usize, mul: Vec<u32>, names: Option<Vec<String>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if mul.len() != order * order || order == 0 {
            return Err(Error::NotAGroup("table shape".into()));
        }
        let log_order = log_p(p, order).ok_or_else(|| Error::NotAGroup(format!("order {order} is not a power of {p}")))?;
        if mul.iter().any(|&x| x as usize >= order) {
            return Err(Error::NotAGroup("entry out of range".into()));
        }
        for x in 0..order {
            if mul[x] as usize != x || mul[x * order] as usize != x {
                return Err(Error::NotAGroup("index 0 is not the identity".into()));
            }
        }
        let mut inv = vec![u32::MAX; order];
        for x in 0..order {
            let mut seen = vec![false; order];
            for y in 0..order {
                let z = mul[x * order + y] as usize;
                if seen[z] {
                    return Err(Error::NotAGroup(format!("row {x} is not a permutation")));
                }
                seen[z] = true;
                if z == 0 {
                    inv[x] = y as u32;
                }
            }
        }
        for x in 0..order {
            if mul[inv[x] as usize * order + x] != 0 {
                return Err(Error::NotAGroup("left and right inverses differ".into()));
            }
        }
        let g = GroupTable { p, order, log_order, mul, inv, names, generators: OnceLock::new() };
        if order <= EXHAUSTIVE_ASSOC_LIMIT {
            g.check_associative_exhaustive()?;
        } else {
            g.check_associative_light()?;
        }
        Ok(g)
    }

    /// Wraps a table already known to be a group (e.g. a quotient).
    pub(crate) fn from_trusted(p: u32, order: usize, mul: Vec<u32>) -> Self {
        let log_order = log_p(p, order).expect("order is a power of p");
        let mut inv = vec![0u32; order];
        for x in 0..order {
            for y in 0..order {
                if mul[x * order + y] == 0 {
                    inv[x] = y as u32;
                    break;
                }
            }
        }
        GroupTable { p, order, log_order, mul, inv, names: None, generators: OnceLock::new() }
    }

    /// Full triple check.
    pub fn check_associative_exhaustive(&self) -> Result<()> {
        let n = self.order;
        for x in 0..n {
            for y in 0..n {
                let xy = self.mul[x * n + y] as usize;
                let row_xy = &self.mul[xy * n..(xy + 1) * n];
                for z in 0..n {
                    let yz = self.mul[y * n + z] as usize;
                    if row_xy[z] != self.mul[x * n + yz] {
                        return Err(Error::NotAGroup(format!("not associative at ({x},{y},{z})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Light's test: the elements `z` with `(xy)z = x(yz)` for all `x, y` form
    /// a closed subset, so checking a generating set suffices.
    pub fn check_associative_light(&self) -> Result<()> {
        let seeds = self.naive_generating_set();
        let n = self.order;
        for &z in &seeds {
            let z = z as usize;
            for x in 0..n {
                for y in 0..n {
                    let xy = self.mul[x * n + y] as usize;
                    let yz = self.mul[y * n + z] as usize;
                    if self.mul[xy * n + z] != self.mul[x * n + yz] {
                        return Err(Error::NotAGroup(format!("not associative at ({x},{y},{z})")));
                    }
                }
            }
        }
        Ok(())
    }

    /// Randomized triple check, for spot audits of large tables.
    pub fn check_associative_sampled(&self, samples: usize, seed: u64) -> Result<()> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.order as u32;
        for _ in 0..samples {
            let (x, y, z) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)) {
                return Err(Error::NotAGroup(format!("not associative at ({x},{y},{z})")));
            }
        }
        Ok(())
    }

    /// Seeds whose right-multiplication closure from the identity is everything.
    fn naive_generating_set(&self) -> Vec<u32> {
        let n = self.order;
        let mut reached = vec![false; n];
        reached[0] = true;
        let mut seeds = Vec::new();
        let mut frontier = vec![0u32];
        let mut count = 1;
        while count < n {
            let s = (0..n).find(|&x| !reached[x]).unwrap() as u32;
            seeds.push(s);
            // Re-close from everything reached so far.
            frontier.clear();
            frontier.extend((0..n as u32).filter(|&x| reached[x as usize]));
            while let Some(x) = frontier.pop() {
                for &t in &seeds {
                    let y = self.mul(x, t) as usize;
                    if !reached[y] {
                        reached[y] = true;
                        count += 1;
                        frontier.push(y as u32);
                    }
                }
            }
        }
        seeds
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn order(&self) -> usize {
        self.order
    }
    /// `k` with `order = p^k`.
    pub fn log_order(&self) -> u32 {
        self.log_order
    }
    pub fn table(&self) -> &[u32] {
        &self.mul
    }
    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn name_of(&self, x: u32) -> String {
        match &self.names {
            Some(n) => n[x as usize].clone(),
            None => format!("e{x}"),
        }
    }

    #[inline]
    pub fn mul(&self, x: u32, y: u32) -> u32 {
        self.mul[x as usize * self.order + y as usize]
    }

    #[inline]
    pub fn inv(&self, x: u32) -> u32 {
        self.inv[x as usize]
    }

    pub fn pow(&self, x: u32, mut e: u64) -> u32 {
        let mut r = 0u32;
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    /// `h⁻¹ x h`.
    #[inline]
    pub fn conj(&self, x: u32, h: u32) -> u32 {
        self.mul(self.mul(self.inv(h), x), h)
    }

    /// `x⁻¹ y⁻¹ x y`.
    #[inline]
    pub fn comm(&self, x: u32, y: u32) -> u32 {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn elem_order(&self, x: u32) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = self.mul(y, x);
            k += 1;
        }
        k
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order as u32
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn exponent(&self) -> usize {
        self.elements().map(|x| self.elem_order(x)).max().unwrap_or(1)
    }

    /// Opposite group: `x ∘ y = y x`. Same element indices.
    pub fn opposite(&self) -> GroupTable {
        let n = self.order;
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                mul[x * n + y] = self.mul[y * n + x];
            }
        }
        GroupTable {
            p: self.p,
            order: n,
            log_order: self.log_order,
            mul,
            inv: self.inv.clone(),
            names: self.names.clone(),
            generators: OnceLock::new(),
        }
    }

    /// A minimal generating set: least-index lifts of a basis of `G/Φ(G)`.
    pub fn generators(&self) -> &[u32] {
        self.generators.get_or_init(|| {
            let phi = self.frattini();
            let mut chosen: Vec<u32> = Vec::new();
            let mut span = phi.clone();
            while span.order() < self.order {
                let x = (0..self.order as u32).find(|&x| !span.contains(x)).unwrap();
                chosen.push(x);
                let mut seeds = span.members().to_vec();
                seeds.push(x);
                span = self.closure(&seeds);
            }
            chosen
        })
    }

    /// `d(G)`: size of a minimal generating set.
    pub fn rank(&self) -> usize {
        self.generators().len()
    }

    pub fn whole(&self) -> Subgroup {
        Subgroup::trusted(self, (0..self.order as u32).collect())
    }

    pub fn trivial(&self) -> Subgroup {
        Subgroup::trusted(self, vec![0])
    }

    /// Least subgroup containing `seeds`.
    pub fn closure(&self, seeds: &[u32]) -> Subgroup {
        let n = self.order;
        let mut mask = vec![false; n];
        mask[0] = true;
        let mut members = vec![0u32];
        let gens: Vec<u32> = {
            let mut s: Vec<u32> = seeds.iter().copied().filter(|&x| x != 0).collect();
            s.sort_unstable();
            s.dedup();
            s
        };
        let mut i = 0;
        while i < members.len() {
            let x = members[i];
            for &s in &gens {
                let y = self.mul(x, s);
                if !mask[y as usize] {
                    mask[y as usize] = true;
                    members.push(y);
                }
            }
            i += 1;
        }
        members.sort_unstable();
        Subgroup::from_parts(self, members, mask)
    }

    pub fn center(&self) -> Subgroup {
        let gens = self.generators();
        let members: Vec<u32> =
            self.elements().filter(|&z| gens.iter().all(|&g| self.mul(z, g) == self.mul(g, z))).collect();
        Subgroup::trusted(self, members)
    }

    pub fn centralizer(&self, s: &Subgroup) -> Subgroup {
        self.centralizer_of_set(s.members())
    }

    pub fn centralizer_of_set(&self, set: &[u32]) -> Subgroup {
        let members: Vec<u32> =
            self.elements().filter(|&g| set.iter().all(|&x| self.mul(g, x) == self.mul(x, g))).collect();
        Subgroup::trusted(self, members)
    }

    pub fn commutator_subgroup(&self) -> Subgroup {
        let mut seeds = HashSet::new();
        for x in self.elements() {
            for y in self.elements() {
                seeds.insert(self.comm(x, y));
            }
        }
        let seeds: Vec<u32> = seeds.into_iter().collect();
        self.closure(&seeds)
    }

    /// `[A, B]`.
    pub fn commutator_of(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut seeds = HashSet::new();
        for &x in a.members() {
            for &y in b.members() {
                seeds.insert(self.comm(x, y));
            }
        }
        let seeds: Vec<u32> = seeds.into_iter().collect();
        self.closure(&seeds)
    }

    /// `Φ(G) = G′ ℧₁(G)`.
    pub fn frattini(&self) -> Subgroup {
        let derived = self.commutator_subgroup();
        let agemo = self.agemo1(&self.whole());
        let mut seeds = derived.members().to_vec();
        seeds.extend_from_slice(agemo.members());
        self.closure(&seeds)
    }

    /// Intersection of the maximal subgroups, found as kernels of the
    /// nonzero homomorphisms onto `C_p`. Independent of [`Self::frattini`].
    pub fn frattini_via_maximal(&self) -> Subgroup {
        let maxes = self.maximal_subgroups();
        let mut mask = vec![true; self.order];
        for m in &maxes {
            for x in 0..self.order {
                if !m.contains(x as u32) {
                    mask[x] = false;
                }
            }
        }
        let members = (0..self.order as u32).filter(|&x| mask[x as usize]).collect();
        Subgroup::trusted(self, members)
    }

    /// All subgroups of index p, found by enumerating homomorphisms to `C_p`
    /// on a generating set and checking them on every pair.
    pub fn maximal_subgroups(&self) -> Vec<Subgroup> {
        let gens = self.naive_generating_set();
        let p = self.p;
        let k = gens.len();
        let mut found: Vec<Subgroup> = Vec::new();
        let mut seen = HashSet::new();
        let total = (p as u64).pow(k as u32);
        for code in 1..total {
            let mut c = code;
            let mut vals = vec![0u32; k];
            for v in vals.iter_mut() {
                *v = (c % p as u64) as u32;
                c /= p as u64;
            }
            // Propagate along right multiplication by the seeds.
            let mut chi = vec![u32::MAX; self.order];
            chi[0] = 0;
            let mut stack = vec![0u32];
            let mut ok = true;
            while let Some(x) = stack.pop() {
                for (i, &s) in gens.iter().enumerate() {
                    let y = self.mul(x, s) as usize;
                    let val = (chi[x as usize] + vals[i]) % p;
                    if chi[y] == u32::MAX {
                        chi[y] = val;
                        stack.push(y as u32);
                    } else if chi[y] != val {
                        ok = false;
                    }
                }
            }
            if !ok {
                continue;
            }
            let hom = self.elements().all(|x| {
                self.elements()
                    .all(|y| chi[self.mul(x, y) as usize] == (chi[x as usize] + chi[y as usize]) % p)
            });
            if !hom {
                continue;
            }
            let members: Vec<u32> = self.elements().filter(|&x| chi[x as usize] == 0).collect();
            if seen.insert(members.clone()) {
                found.push(Subgroup::trusted(self, members));
            }
        }
        found.sort_by(|a, b| a.members().cmp(b.members()));
        found
    }

    /// `Ω₁(N) = ⟨x ∈ N : x^p = 1⟩`.
    pub fn omega1(&self, n: &Subgroup) -> Subgroup {
        let seeds: Vec<u32> = n.members().iter().copied().filter(|&x| self.pow(x, self.p as u64) == 0).collect();
        self.closure(&seeds)
    }

    /// `℧₁(N) = ⟨x^p : x ∈ N⟩`.
    pub fn agemo1(&self, n: &Subgroup) -> Subgroup {
        let seeds: Vec<u32> = n.members().iter().map(|&x| self.pow(x, self.p as u64)).collect();
        self.closure(&seeds)
    }

    /// `I(A) = {g ∈ A : g^p ∈ Z(G)}`.
    pub fn iset(&self, a: &Subgroup) -> ISet {
        let z = self.center();
        let elements: Vec<u32> =
            a.members().iter().copied().filter(|&x| z.contains(self.pow(x, self.p as u64))).collect();
        let closed = elements.iter().all(|&x| elements.iter().all(|&y| elements.binary_search(&self.mul(x, y)).is_ok()));
        let subgroup = closed.then(|| Subgroup::trusted(self, elements.clone()));
        ISet { elements, subgroup }
    }

    /// Evaluates one of the named standard subgroups.
    pub fn standard_subgroup(&self, kind: StandardKind<'_>) -> Result<Subgroup> {
        Ok(match kind {
            StandardKind::Center => self.center(),
            StandardKind::Centralizer(s) => self.centralizer(s),
            StandardKind::Commutator => self.commutator_subgroup(),
            StandardKind::Frattini => self.frattini(),
            StandardKind::Omega1(n) => self.omega1(n),
            StandardKind::Agemo1(n) => self.agemo1(n),
            StandardKind::ISet(a) => self.iset(a).subgroup.ok_or(Error::NotASubgroup)?,
        })
    }

    /// Product `HK` of two subgroups, one of them normal.
    pub fn product(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        let mut seeds = h.members().to_vec();
        seeds.extend_from_slice(k.members());
        self.closure(&seeds)
    }

    pub fn intersection(&self, h: &Subgroup, k: &Subgroup) -> Subgroup {
        let members = h.members().iter().copied().filter(|&x| k.contains(x)).collect();
        Subgroup::trusted(self, members)
    }

    /// Checks whether the given members form a subgroup.
    pub fn subgroup(&self, members: &[u32]) -> Result<Subgroup> {
        let mut m = members.to_vec();
        m.sort_unstable();
        m.dedup();
        if m.first() != Some(&0) || m.iter().any(|&x| x as usize >= self.order) {
            return Err(Error::NotASubgroup);
        }
        let closed = m.iter().all(|&x| m.iter().all(|&y| m.binary_search(&self.mul(x, y)).is_ok()));
        if !closed {
            return Err(Error::NotASubgroup);
        }
        Ok(Subgroup::trusted(self, m))
    }

    /// All subgroups of `within` that are normal in `self`, sorted by
    /// (order, members). Built by stacking central order-p layers.
    pub fn normal_subgroups(&self, within: &Subgroup, cap: usize) -> Result<Vec<Subgroup>> {
        if self.order > cap {
            return Err(Error::OrderCap { order: self.order, cap });
        }
        let gens = self.generators().to_vec();
        let p = self.p as u64;
        let mut found: Vec<Subgroup> = vec![self.trivial()];
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        seen.insert(vec![0]);
        let mut i = 0;
        while i < found.len() {
            let k = found[i].clone();
            let mut covered = k.mask.clone();
            for &x in within.members() {
                if covered[x as usize] {
                    continue;
                }
                if !k.contains(self.pow(x, p)) || !gens.iter().all(|&s| k.contains(self.comm(x, s))) {
                    continue;
                }
                let mut members = Vec::with_capacity(k.order() * self.p as usize);
                let mut xi = 0u32;
                for _ in 0..self.p {
                    for &m in k.members() {
                        members.push(self.mul(m, xi));
                    }
                    xi = self.mul(xi, x);
                }
                members.sort_unstable();
                for &m in &members {
                    covered[m as usize] = true;
                }
                if seen.insert(members.clone()) {
                    found.push(Subgroup::trusted(self, members));
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| (a.order(), a.members()).cmp(&(b.order(), b.members())));
        Ok(found)
    }

    /// Every subgroup, by closure of subgroups under adjoining one element.
    /// Exhaustive and slow; meant for oracles on small groups.
    pub fn all_subgroups(&self) -> Vec<Subgroup> {
        let mut found = vec![self.trivial()];
        let mut seen: HashSet<Vec<u32>> = HashSet::new();
        seen.insert(vec![0]);
        let mut i = 0;
        while i < found.len() {
            let h = found[i].clone();
            for x in self.elements() {
                if h.contains(x) {
                    continue;
                }
                let mut seeds = h.members().to_vec();
                seeds.push(x);
                let k = self.closure(&seeds);
                if seen.insert(k.members().to_vec()) {
                    found.push(k);
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| (a.order(), a.members()).cmp(&(b.order(), b.members())));
        found
    }

    /// Normal form used for fingerprints and isomorphism invariants.
    pub fn table_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.mul.len() * 4 + 4);
        out.extend_from_slice(&self.p.to_le_bytes());
        for &x in &self.mul {
            out.extend_from_slice(&x.to_le_bytes());
        }
        out
    }

    /// Direct product; element `(a, b)` has index `a + |A|·b`.
    pub fn direct_product(&self, other: &GroupTable) -> Result<GroupTable> {
        if self.p != other.p {
            return Err(Error::Invalid("direct product of groups for different primes".into()));
        }
        let (na, nb) = (self.order, other.order);
        let n = na * nb;
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            let (xa, xb) = (x % na, x / na);
            for y in 0..n {
                let (ya, yb) = (y % na, y / na);
                let a = self.mul[xa * na + ya] as usize;
                let b = other.mul[xb * nb + yb] as usize;
                mul[x * n + y] = (a + na * b) as u32;
            }
        }
        Ok(GroupTable::from_trusted(self.p, n, mul))
    }
}

/// Selector for [`GroupTable::standard_subgroup`].
pub enum StandardKind<'a> {
    Center,
    Centralizer(&'a Subgroup),
    Commutator,
    Frattini,
    Omega1(&'a Subgroup),
    Agemo1(&'a Subgroup),
    ISet(&'a Subgroup),
}

/// The set `I(A)`; `subgroup` is `None` when the set is not closed.
#[derive(Clone, Debug)]
pub struct ISet {
    pub elements: Vec<u32>,
    pub subgroup: Option<Subgroup>,
}

impl ISet {
    pub fn is_subgroup(&self) -> bool {
        self.subgroup.is_some()
    }
}

/// A subgroup given by its sorted member list.
#[derive(Clone)]
pub struct Subgroup {
    members: Vec<u32>,
    mask: Vec<bool>,
    normal: bool,
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup(order {}, normal {}, {:?})", self.members.len(), self.normal, self.members)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.members == other.members
    }
}
impl Eq for Subgroup {}

impl Subgroup {
    fn trusted(g: &GroupTable, members: Vec<u32>) -> Self {
        let mut mask = vec![false; g.order];
        for &x in &members {
            mask[x as usize] = true;
        }
        Self::from_parts(g, members, mask)
    }

    fn from_parts(g: &GroupTable, members: Vec<u32>, mask: Vec<bool>) -> Self {
        let normal = is_normal_set(g, &members, &mask);
        Subgroup { members, mask, normal }
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.mask.get(x as usize).copied().unwrap_or(false)
    }

    pub fn is_normal(&self) -> bool {
        self.normal
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.members.iter().all(|&x| other.contains(x))
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn is_abelian(&self, g: &GroupTable) -> bool {
        self.members.iter().all(|&x| self.members.iter().all(|&y| g.mul(x, y) == g.mul(y, x)))
    }

    pub fn is_elementary_abelian(&self, g: &GroupTable) -> bool {
        self.is_abelian(g) && self.members.iter().all(|&x| g.pow(x, g.p() as u64) == 0)
    }

    pub fn is_cyclic(&self, g: &GroupTable) -> bool {
        self.members.iter().any(|&x| g.elem_order(x) == self.order())
    }

    /// Elements of `self` outside `other`.
    pub fn minus(&self, other: &Subgroup) -> Vec<u32> {
        self.members.iter().copied().filter(|&x| !other.contains(x)).collect()
    }
}

fn is_normal_set(g: &GroupTable, members: &[u32], mask: &[bool]) -> bool {
    if members.len() == 1 || members.len() == g.order {
        return true;
    }
    // Generators are not known yet while the generating set itself is being
    // computed, so test against every element when the cache is cold.
    let check = |h: u32| members.iter().all(|&x| mask[g.conj(x, h) as usize]);
    match g.generators.get() {
        Some(gens) => gens.iter().all(|&h| check(h)),
        None => g.elements().all(check),
    }
}

/// `G → G/N` with the least element of each coset as its representative.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    pub kernel: Subgroup,
    pub image_of: Vec<u32>,
    pub section: Vec<u32>,
}

/// Quotient by a normal subgroup. Cosets are numbered by their least member.
pub fn quotient(g: &GroupTable, n: &Subgroup) -> Result<(GroupTable, QuotientMap)> {
    if !n.is_normal() {
        return Err(Error::NotNormal);
    }
    let order = g.order();
    let mut least = vec![u32::MAX; order];
    for x in g.elements() {
        if least[x as usize] != u32::MAX {
            continue;
        }
        let coset: Vec<u32> = n.members().iter().map(|&k| g.mul(x, k)).collect();
        let m = *coset.iter().min().unwrap();
        for &y in &coset {
            least[y as usize] = m;
        }
    }
    let mut reps: Vec<u32> = least.clone();
    reps.sort_unstable();
    reps.dedup();
    let mut index_of_rep = vec![u32::MAX; order];
    for (i, &r) in reps.iter().enumerate() {
        index_of_rep[r as usize] = i as u32;
    }
    let image_of: Vec<u32> = g.elements().map(|x| index_of_rep[least[x as usize] as usize]).collect();
    let q = reps.len();
    let mut mul = vec![0u32; q * q];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            mul[i * q + j] = image_of[g.mul(a, b) as usize];
        }
    }
    let target = GroupTable::from_trusted(g.p(), q, mul);
    Ok((target, QuotientMap { kernel: n.clone(), image_of, section: reps }))
}

/// A homomorphism between two tables, stored as the image of every element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupMap {
    pub image_of: Vec<u32>,
}

impl GroupMap {
    /// Checks the homomorphism property on every pair.
    pub fn new(source: &GroupTable, target: &GroupTable, image_of: Vec<u32>) -> Result<Self> {
        if image_of.len() != source.order() || image_of.iter().any(|&y| y as usize >= target.order()) {
            return Err(Error::Invalid("map has the wrong shape".into()));
        }
        for x in source.elements() {
            for y in source.elements() {
                if image_of[source.mul(x, y) as usize] != target.mul(image_of[x as usize], image_of[y as usize]) {
                    return Err(Error::NotAHomomorphism(x, y));
                }
            }
        }
        Ok(GroupMap { image_of })
    }

    pub fn identity(g: &GroupTable) -> Self {
        GroupMap { image_of: g.elements().collect() }
    }

    /// Conjugation `x ↦ h⁻¹ x h`.
    pub fn conjugation(g: &GroupTable, h: u32) -> Self {
        GroupMap { image_of: g.elements().map(|x| g.conj(x, h)).collect() }
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.image_of[x as usize]
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &GroupMap) -> GroupMap {
        GroupMap { image_of: other.image_of.iter().map(|&y| self.image_of[y as usize]).collect() }
    }

    pub fn is_bijective(&self) -> bool {
        let mut seen = vec![false; self.image_of.len()];
        for &y in &self.image_of {
            if y as usize >= seen.len() || seen[y as usize] {
                return false;
            }
            seen[y as usize] = true;
        }
        true
    }

    pub fn is_identity(&self) -> bool {
        self.image_of.iter().enumerate().all(|(i, &y)| i as u32 == y)
    }
}

/// Least `k ≥ 1` with `f^k = id`.
pub fn map_order(f: &GroupMap) -> usize {
    assert!(f.is_bijective(), "map_order needs a permutation");
    let mut k = 1;
    let mut cur = f.clone();
    while !cur.is_identity() {
        cur = f.compose(&cur);
        k += 1;
    }
    k
}

/// Returns `h` with `f(x) = h⁻¹ x h` for all `x`, or `None` if `f` is not inner.
/// One representative per coset of the center is tried.
pub fn is_inner(g: &GroupTable, f: &GroupMap) -> Result<Option<u32>> {
    if f.image_of.len() != g.order() || !f.is_bijective() {
        return Err(Error::NotAutomorphism);
    }
    let gens = g.generators();
    if !gens.iter().all(|&x| gens.iter().all(|&y| f.apply(g.mul(x, y)) == g.mul(f.apply(x), f.apply(y)))) {
        return Err(Error::NotAutomorphism);
    }
    let z = g.center();
    let (_, qm) = quotient(g, &z)?;
    for &h in &qm.section {
        if gens.iter().all(|&x| f.apply(x) == g.conj(x, h)) && g.elements().all(|x| f.apply(x) == g.conj(x, h)) {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

pub type SharedGroup = Arc<GroupTable>;
