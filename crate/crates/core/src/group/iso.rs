//! Isomorphism testing and automorphism enumeration by backtracking on the
//! images of a minimal generating set.

use super::{GroupMap, GroupTable};

/// Cheap isomorphism invariants. Equal invariants are necessary, not
/// sufficient, for isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Invariants {
    pub order: usize,
    pub exponent: usize,
    pub center: usize,
    pub derived: usize,
    pub frattini: usize,
    pub rank: usize,
    /// Sorted histogram of (element order, centralizer order, order of x^p).
    pub profile: Vec<((usize, usize, usize), usize)>,
}

pub fn invariants(g: &GroupTable) -> Invariants {
    let mut counts = std::collections::BTreeMap::new();
    for x in g.elements() {
        let key = (g.elem_order(x), centralizer_order(g, x), g.elem_order(g.pow(x, g.p() as u64)));
        *counts.entry(key).or_insert(0usize) += 1;
    }
    Invariants {
        order: g.order(),
        exponent: g.exponent(),
        center: g.center().order(),
        derived: g.commutator_subgroup().order(),
        frattini: g.frattini().order(),
        rank: g.rank(),
        profile: counts.into_iter().collect(),
    }
}

fn centralizer_order(g: &GroupTable, x: u32) -> usize {
    g.elements().filter(|&y| g.mul(x, y) == g.mul(y, x)).count()
}

/// Extends `gens[i] ↦ images[i]` along right multiplication by the
/// generators. Returns the map on the subgroup generated by `gens` (entries
/// outside it are `u32::MAX`), or `None` if the assignment is inconsistent.
pub fn extend_homomorphism(src: &GroupTable, tgt: &GroupTable, gens: &[u32], images: &[u32]) -> Option<Vec<u32>> {
    let mut map = vec![u32::MAX; src.order()];
    map[0] = 0;
    let mut queue = vec![0u32];
    let mut i = 0;
    while i < queue.len() {
        let x = queue[i];
        let fx = map[x as usize];
        for (s, &t) in gens.iter().zip(images) {
            let y = src.mul(x, *s) as usize;
            let fy = tgt.mul(fx, t);
            if map[y] == u32::MAX {
                map[y] = fy;
                queue.push(y as u32);
            } else if map[y] != fy {
                return None;
            }
        }
        i += 1;
    }
    Some(map)
}

struct Search<'a> {
    src: &'a GroupTable,
    tgt: &'a GroupTable,
    gens: Vec<u32>,
    candidates: Vec<Vec<u32>>,
}

impl<'a> Search<'a> {
    fn new(src: &'a GroupTable, tgt: &'a GroupTable) -> Self {
        let gens = src.generators().to_vec();
        let phi = tgt.frattini();
        let candidates = gens
            .iter()
            .map(|&s| {
                let key = (src.elem_order(s), centralizer_order(src, s));
                tgt.elements()
                    .filter(|&t| !phi.contains(t) && (tgt.elem_order(t), centralizer_order(tgt, t)) == key)
                    .collect()
            })
            .collect();
        Search { src, tgt, gens, candidates }
    }

    /// Calls `visit` on every bijective homomorphism; stops when it returns false.
    fn run(&self, visit: &mut dyn FnMut(GroupMap) -> bool) {
        let mut chosen = Vec::with_capacity(self.gens.len());
        self.step(&mut chosen, visit);
    }

    fn step(&self, chosen: &mut Vec<u32>, visit: &mut dyn FnMut(GroupMap) -> bool) -> bool {
        let k = chosen.len();
        if k == self.gens.len() {
            let Some(map) = extend_homomorphism(self.src, self.tgt, &self.gens, chosen) else { return true };
            let f = GroupMap { image_of: map };
            if !f.is_bijective() {
                return true;
            }
            return visit(f);
        }
        for &t in &self.candidates[k] {
            chosen.push(t);
            let ok = extend_homomorphism(self.src, self.tgt, &self.gens[..=k], chosen).is_some();
            if ok && !self.step(chosen, visit) {
                chosen.pop();
                return false;
            }
            chosen.pop();
        }
        true
    }
}

/// An isomorphism `g → h`, if one exists.
pub fn find_isomorphism(g: &GroupTable, h: &GroupTable) -> Option<GroupMap> {
    if g.p() != h.p() || g.order() != h.order() || invariants(g) != invariants(h) {
        return None;
    }
    let mut found = None;
    Search::new(g, h).run(&mut |f| {
        found = Some(f);
        false
    });
    found
}

/// Visits every automorphism of `g` until `visit` returns false.
pub fn automorphisms(g: &GroupTable, visit: &mut dyn FnMut(GroupMap) -> bool) {
    Search::new(g, g).run(visit);
}

#[cfg(test)]
mod tests {
    use super::super::PcPresentation;
    use super::*;

    fn build(p: u32, n: usize, pows: &[(usize, &str)], comms: &[(usize, usize, &str)]) -> GroupTable {
        PcPresentation::parse_relations(p, n, pows, comms).unwrap().build().unwrap()
    }

    fn count_automorphisms(g: &GroupTable) -> usize {
        let mut n = 0;
        automorphisms(g, &mut |_| {
            n += 1;
            true
        });
        n
    }

    #[test]
    fn automorphism_counts() {
        let d8 = build(2, 3, &[(1, "g3")], &[(1, 0, "g3")]);
        let q8 = build(2, 3, &[(0, "g3"), (1, "g3")], &[(1, 0, "g3")]);
        assert_eq!(count_automorphisms(&d8), 8);
        assert_eq!(count_automorphisms(&q8), 24);
        let c4 = build(2, 2, &[(0, "g2")], &[]);
        assert_eq!(count_automorphisms(&c4), 2);
        let klein = build(2, 2, &[], &[]);
        assert_eq!(count_automorphisms(&klein), 6);
    }

    #[test]
    fn isomorphism_detection() {
        let d8 = build(2, 3, &[(1, "g3")], &[(1, 0, "g3")]);
        let q8 = build(2, 3, &[(0, "g3"), (1, "g3")], &[(1, 0, "g3")]);
        // D8 again, with the rotation listed first.
        let d8b = build(2, 3, &[(0, "g3")], &[(1, 0, "g3")]);
        assert!(find_isomorphism(&d8, &q8).is_none());
        let f = find_isomorphism(&d8, &d8b).expect("isomorphic");
        assert!(GroupMap::new(&d8, &d8b, f.image_of.clone()).is_ok());
    }
}
