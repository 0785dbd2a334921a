//! Built-in and file-backed group catalogs.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::{Arc, OnceLock};

use pgv_core::group::{find_isomorphism, invariants, GroupTable, Invariants, PcPresentation, Word};

use crate::error::{Error, Result};
use crate::presentation::parse_presentations;

const ORDER16: &str = include_str!("../data/order16.pcp");
const ORDER81: &str = include_str!("../data/order81.pcp");

/// Direct products in the built-in catalog stop at this order.
pub const PRODUCT_CAP: usize = 64;

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub presentation: PcPresentation,
    pub tags: BTreeSet<String>,
    pub group: Arc<GroupTable>,
}

impl CatalogEntry {
    fn new(name: &str, mut presentation: PcPresentation, tags: &[&str], cap: usize) -> Result<Self> {
        presentation.name = name.to_string();
        let group = Arc::new(presentation.build_with_cap(cap)?);
        let mut t: BTreeSet<String> = tags.iter().map(|s| s.to_string()).collect();
        t.insert(format!("p{}", group.p()));
        t.insert(if group.is_abelian() { "abelian" } else { "nonabelian" }.into());
        Ok(CatalogEntry { name: name.to_string(), presentation, tags: t, group })
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }
}

#[derive(Clone, Debug, Default)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// The built-in catalog, built once per process.
    pub fn builtin() -> &'static Catalog {
        static CAT: OnceLock<Catalog> = OnceLock::new();
        CAT.get_or_init(|| Catalog::build_builtin(PRODUCT_CAP).expect("built-in catalog is consistent"))
    }

    /// Parses a presentation file. Every group is built under `cap`.
    pub fn from_text(text: &str, cap: usize) -> Result<Catalog> {
        let mut entries = Vec::new();
        for pg in parse_presentations(text)? {
            let name = pg.presentation.name.clone();
            let e = CatalogEntry::new(&name, pg.presentation, &["file"], cap)
                .map_err(|e| Error::Parse { line: pg.line, col: 1, msg: format!("group '{name}': {e}") })?;
            entries.push(e);
        }
        Ok(Catalog { entries })
    }

    pub fn load(path: &Path, cap: usize) -> Result<Catalog> {
        Catalog::from_text(&std::fs::read_to_string(path)?, cap)
    }

    pub fn get(&self, name: &str) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn select(&self, filter: &Filter) -> Vec<&CatalogEntry> {
        self.entries.iter().filter(|e| filter.matches(e)).collect()
    }

    pub fn build_builtin(product_cap: usize) -> Result<Catalog> {
        let mut b = Builder::default();
        for p in primes_below(64) {
            let mut k = 1;
            while (p as usize).pow(k) <= 64 {
                for part in partitions(k) {
                    let tags: &[&str] = if part.len() == 1 { &["cyclic"] } else { &[] };
                    b.add(CatalogEntry::new(&abelian_name(p, &part), abelian(p, &part), tags, usize::MAX)?)?;
                }
                k += 1;
            }
        }
        for n in 3..=6 {
            let o = 1usize << n;
            let ex: &[&str] = if n == 3 { &["extraspecial"] } else { &[] };
            b.add(CatalogEntry::new(&format!("D{o}"), two_power(n, Twist::Dihedral), &[&["dihedral"], ex].concat(), usize::MAX)?)?;
            b.add(CatalogEntry::new(&format!("Q{o}"), two_power(n, Twist::Quaternion), &[&["quaternion"], ex].concat(), usize::MAX)?)?;
            if n >= 4 {
                b.add(CatalogEntry::new(&format!("SD{o}"), two_power(n, Twist::Semidihedral), &["semidihedral"], usize::MAX)?)?;
            }
        }
        for (p, ns) in [(2u32, 4..=6u32), (3, 3..=4), (5, 3..=3), (7, 3..=3)] {
            for n in ns {
                let tags: &[&str] = if n == 3 { &["modular", "extraspecial"] } else { &["modular"] };
                b.add(CatalogEntry::new(&format!("M{}", p.pow(n)), modular(p, n), tags, usize::MAX)?)?;
            }
        }
        for p in [3u32, 5, 7] {
            let pres = PcPresentation::parse_relations(p, 3, &[], &[(1, 0, "g3")])?;
            b.add(CatalogEntry::new(&format!("Heis{}", p.pow(3)), pres, &["extraspecial", "heisenberg"], usize::MAX)?)?;
        }
        let families: Vec<CatalogEntry> = b.entries.iter().map(|(e, _)| e.clone()).collect();
        b.products(&families, &families, product_cap)?;
        let mut data = Vec::new();
        for (text, label) in [(ORDER16, "order16"), (ORDER81, "order81")] {
            for (k, pg) in parse_presentations(text)?.into_iter().enumerate() {
                let tag = format!("{label}#{}", k + 1);
                let name = pg.presentation.name.clone();
                let e = CatalogEntry::new(&name, pg.presentation, &[&tag], usize::MAX)?;
                if b.add(e.clone())? {
                    data.push(e);
                }
            }
        }
        b.products(&data, &families, product_cap)?;
        b.products(&data, &data, product_cap)?;
        let mut entries: Vec<CatalogEntry> = b.entries.into_iter().map(|(e, _)| e).collect();
        entries.sort_by(|a, b| (a.group.p(), a.order()).cmp(&(b.group.p(), b.order())));
        Ok(Catalog { entries })
    }
}

#[derive(Default)]
struct Builder {
    entries: Vec<(CatalogEntry, Invariants)>,
}

impl Builder {
    /// Adds `e` unless an isomorphic group is present; then only its tags
    /// are merged into the existing entry.
    fn add(&mut self, e: CatalogEntry) -> Result<bool> {
        let inv = invariants(&e.group);
        for (old, old_inv) in &mut self.entries {
            if old.name == e.name {
                return Err(Error::DuplicateName(e.name));
            }
            if *old_inv == inv && find_isomorphism(&e.group, &old.group).is_some() {
                old.tags.extend(e.tags.into_iter().filter(|t| t != "product"));
                return Ok(false);
            }
        }
        self.entries.push((e, inv));
        Ok(true)
    }

    fn products(&mut self, left: &[CatalogEntry], right: &[CatalogEntry], cap: usize) -> Result<()> {
        for a in left {
            for c in right {
                if a.group.p() != c.group.p() || a.order() * c.order() > cap || (a.group.is_abelian() && c.group.is_abelian()) {
                    continue;
                }
                let (x, y) = if a.group.is_abelian() || (!c.group.is_abelian() && c.order() > a.order()) { (c, a) } else { (a, c) };
                let name = format!("{}x{}", x.name, y.name);
                if self.entries.iter().any(|(e, _)| e.name == name) {
                    continue;
                }
                let pres = x.presentation.direct_product(&y.presentation, &name)?;
                self.add(CatalogEntry::new(&name, pres, &["product"], usize::MAX)?)?;
            }
        }
        Ok(())
    }
}

fn primes_below(n: u32) -> Vec<u32> {
    (2..n).filter(|&p| pgv_core::fp_linalg::is_prime(p)).collect()
}

/// Partitions of `k` as non-increasing part lists.
fn partitions(k: u32) -> Vec<Vec<u32>> {
    fn go(k: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=k.min(max)).rev() {
            cur.push(part);
            go(k - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, k, &mut Vec::new(), &mut out);
    out
}

fn abelian_name(p: u32, part: &[u32]) -> String {
    part.iter().map(|&e| format!("C{}", p.pow(e))).collect::<Vec<_>>().join("x")
}

fn abelian(p: u32, part: &[u32]) -> PcPresentation {
    let n: u32 = part.iter().sum();
    let mut pres = PcPresentation::new("", p, n as usize);
    let mut at = 0usize;
    for &e in part {
        for i in at..at + e as usize - 1 {
            pres.power[i] = vec![(i + 1, 1)];
        }
        at += e as usize;
    }
    pres
}

#[derive(Clone, Copy)]
enum Twist {
    Dihedral,
    Quaternion,
    Semidihedral,
}

/// `r^x` as a collected word when g2 = r, g3 = r^2, ..., gn = r^(2^(n-2)).
fn rotation_word(x: u64, n: u32) -> Word {
    let x = x % (1 << (n - 1));
    (0..n - 1).filter(|b| x >> b & 1 == 1).map(|b| (b as usize + 1, 1)).collect()
}

/// Groups `<s, r>` of order 2^n with `r` of order 2^(n-1) and `s⁻¹ r s = r^u`.
fn two_power(n: u32, twist: Twist) -> PcPresentation {
    let m = 1u64 << (n - 1);
    let u = match twist {
        Twist::Dihedral | Twist::Quaternion => m - 1,
        Twist::Semidihedral => m / 2 - 1,
    };
    let mut pres = PcPresentation::new("", 2, n as usize);
    if let Twist::Quaternion = twist {
        pres.power[0] = vec![(n as usize - 1, 1)];
    }
    for i in 1..n as usize - 1 {
        pres.power[i] = vec![(i + 1, 1)];
    }
    for k in 1..n as usize {
        // [r^e, s] = r^(e(u-1)) with e = 2^(k-1)
        let e = 1u64 << (k - 1);
        let w = rotation_word(e * (u + m - 1), n);
        if !w.is_empty() {
            pres.comm.insert((k, 0), w);
        }
    }
    pres
}

/// `<a, b | a^(p^(n-1)), b^p, b⁻¹ a b = a^(1+p^(n-2))>` with g1 = b, g2 = a.
fn modular(p: u32, n: u32) -> PcPresentation {
    let mut pres = PcPresentation::new("", p, n as usize);
    for i in 1..n as usize - 1 {
        pres.power[i] = vec![(i + 1, 1)];
    }
    pres.comm.insert((1, 0), vec![(n as usize - 1, 1)]);
    pres
}

/// Catalog selection: `|`-separated alternatives of `&`-joined atoms. An
/// atom is a tag, a group name, `all`, `order<=N`, `order=N`, `order>=N`,
/// optionally negated with `!`.
#[derive(Clone, Debug)]
pub struct Filter {
    source: String,
    alternatives: Vec<Vec<(bool, Atom)>>,
}

#[derive(Clone, Debug)]
enum Atom {
    All,
    Word(String),
    Order(std::cmp::Ordering, bool, usize),
}

impl Filter {
    /// Blank text selects nothing.
    pub fn parse(text: &str) -> Result<Filter> {
        let mut alternatives = Vec::new();
        let source = text.trim().to_string();
        if source.is_empty() {
            return Ok(Filter { source, alternatives });
        }
        for alt in text.split('|') {
            let mut conj = Vec::new();
            for atom in alt.split('&') {
                let atom = atom.trim();
                let (neg, atom) = match atom.strip_prefix('!') {
                    Some(a) => (true, a.trim()),
                    None => (false, atom),
                };
                if atom.is_empty() {
                    return Err(Error::BadFilter(text.into()));
                }
                conj.push((neg, parse_atom(atom).ok_or_else(|| Error::BadFilter(text.into()))?));
            }
            alternatives.push(conj);
        }
        Ok(Filter { source, alternatives })
    }

    /// The expression as given, trimmed.
    pub fn text(&self) -> &str {
        &self.source
    }

    pub fn matches(&self, e: &CatalogEntry) -> bool {
        self.alternatives.iter().any(|conj| {
            conj.iter().all(|(neg, atom)| {
                let hit = match atom {
                    Atom::All => true,
                    Atom::Word(w) => e.name == *w || e.tags.contains(w),
                    Atom::Order(ord, or_eq, n) => {
                        let c = e.order().cmp(n);
                        c == *ord || (*or_eq && c == std::cmp::Ordering::Equal)
                    }
                };
                hit != *neg
            })
        })
    }
}

fn parse_atom(atom: &str) -> Option<Atom> {
    use std::cmp::Ordering::*;
    if atom == "all" {
        return Some(Atom::All);
    }
    if let Some(rest) = atom.strip_prefix("order") {
        let (ord, or_eq, num) = if let Some(n) = rest.strip_prefix("<=") {
            (Less, true, n)
        } else if let Some(n) = rest.strip_prefix(">=") {
            (Greater, true, n)
        } else if let Some(n) = rest.strip_prefix('=') {
            (Equal, false, n)
        } else if let Some(n) = rest.strip_prefix('<') {
            (Less, false, n)
        } else if let Some(n) = rest.strip_prefix('>') {
            (Greater, false, n)
        } else {
            return Some(Atom::Word(atom.into()));
        };
        return num.trim().parse().ok().map(|n| Atom::Order(ord, or_eq, n));
    }
    atom.chars().all(|c| c.is_ascii_alphanumeric() || "#_-.".contains(c)).then(|| Atom::Word(atom.into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_have_expected_shape() {
        for n in 3..=6 {
            for t in [Twist::Dihedral, Twist::Quaternion, Twist::Semidihedral] {
                if n == 3 && matches!(t, Twist::Semidihedral) {
                    continue;
                }
                let g = two_power(n, t).build().unwrap();
                assert_eq!(g.order(), 1 << n);
                assert!(!g.is_abelian());
                assert_eq!(g.center().order(), 2);
                assert_eq!(g.exponent(), 1 << (n - 1));
                let involutions = g.elements().filter(|&x| g.elem_order(x) == 2).count();
                let expect = match t {
                    Twist::Dihedral => (1 << (n - 1)) + 1,
                    Twist::Quaternion => 1,
                    Twist::Semidihedral => (1 << (n - 2)) + 1,
                };
                assert_eq!(involutions, expect);
            }
        }
        let m = modular(3, 3).build().unwrap();
        assert_eq!((m.order(), m.exponent(), m.center().order()), (27, 9, 3));
    }

    #[test]
    fn partitions_count() {
        let counts: Vec<usize> = (1..=6).map(|k| partitions(k).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11]);
    }

    #[test]
    fn filters() {
        let cat = Catalog::build_builtin(16).unwrap();
        let f = Filter::parse("dihedral & order<=16 | Q8").unwrap();
        let names: Vec<&str> = cat.select(&f).iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, vec!["D8", "Q8", "D16"]);
        assert!(Filter::parse("order<=").is_err());
        assert!(Filter::parse("a & ").is_err());
        assert_eq!(cat.select(&Filter::parse("!all").unwrap()).len(), 0);
    }
}
