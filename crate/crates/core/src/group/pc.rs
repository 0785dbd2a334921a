//! Power-commutator presentations and collection.

use std::collections::BTreeMap;

use super::GroupTable;
use crate::error::{Error, Result};
use crate::fp_linalg::is_prime;

/// A word `g_{k1}^{e1} * g_{k2}^{e2} * ...` with 0-based generator indices.
pub type Word = Vec<(usize, u32)>;

/// `g_i^p = power[i]` and `[g_i, g_j] = comm[(i, j)]` for `i > j`.
/// Missing relations are trivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    pub name: String,
    pub p: u32,
    pub ngens: usize,
    pub power: Vec<Word>,
    pub comm: BTreeMap<(usize, usize), Word>,
}

/// Parses `1` or `g<k>` / `g<k>^<e>` terms joined by `*`. Generator numbers
/// are 1-based in text. Returns the term on failure as the error message.
pub fn parse_word(text: &str) -> std::result::Result<Word, String> {
    let text = text.trim();
    if text == "1" {
        return Ok(Vec::new());
    }
    let mut word = Vec::new();
    for term in text.split('*') {
        let term = term.trim();
        let body = term.strip_prefix('g').ok_or_else(|| format!("term '{term}' does not start with g"))?;
        let (k, e) = match body.split_once('^') {
            Some((k, e)) => (k, e.trim().parse::<u32>().map_err(|_| format!("bad exponent in '{term}'"))?),
            None => (body, 1),
        };
        let k: usize = k.trim().parse().map_err(|_| format!("bad generator in '{term}'"))?;
        if k == 0 {
            return Err(format!("generator numbers start at 1 in '{term}'"));
        }
        word.push((k - 1, e));
    }
    Ok(word)
}

pub fn format_word(w: &Word) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|&(k, e)| if e == 1 { format!("g{}", k + 1) } else { format!("g{}^{}", k + 1, e) })
        .collect::<Vec<_>>()
        .join("*")
}

impl PcPresentation {
    pub fn new(name: &str, p: u32, ngens: usize) -> Self {
        PcPresentation { name: name.into(), p, ngens, power: vec![Vec::new(); ngens], comm: BTreeMap::new() }
    }

    /// Convenience constructor from word strings, 0-based relation indices.
    pub fn parse_relations(p: u32, ngens: usize, pows: &[(usize, &str)], comms: &[(usize, usize, &str)]) -> Result<Self> {
        let mut pres = PcPresentation::new("", p, ngens);
        for &(i, w) in pows {
            pres.set_power(i, parse_word(w).map_err(Error::BadWord)?)?;
        }
        for &(i, j, w) in comms {
            pres.set_comm(i, j, parse_word(w).map_err(Error::BadWord)?)?;
        }
        Ok(pres)
    }

    pub fn set_power(&mut self, i: usize, w: Word) -> Result<()> {
        self.check_word(&w, i)?;
        self.power[i] = w;
        Ok(())
    }

    pub fn set_comm(&mut self, i: usize, j: usize, w: Word) -> Result<()> {
        if i <= j || i >= self.ngens {
            return Err(Error::BadWord(format!("commutator [g{}, g{}] needs i > j", i + 1, j + 1)));
        }
        self.check_word(&w, i)?;
        if w.is_empty() {
            self.comm.remove(&(i, j));
        } else {
            self.comm.insert((i, j), w);
        }
        Ok(())
    }

    /// Every generator in `w` must be numbered above `floor`.
    fn check_word(&self, w: &Word, floor: usize) -> Result<()> {
        if floor >= self.ngens {
            return Err(Error::BadWord(format!("generator g{} out of range", floor + 1)));
        }
        for &(k, e) in w {
            if k >= self.ngens {
                return Err(Error::BadWord(format!("generator g{} out of range", k + 1)));
            }
            if k <= floor {
                return Err(Error::BadWord(format!("g{} is not above g{}", k + 1, floor + 1)));
            }
            if e == 0 || e >= self.p {
                return Err(Error::BadWord(format!("exponent {e} outside 1..{}", self.p)));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::NotPrime(self.p));
        }
        if self.power.len() != self.ngens {
            return Err(Error::BadWord("power relation count".into()));
        }
        for (i, w) in self.power.iter().enumerate() {
            self.check_word(w, i)?;
        }
        for (&(i, j), w) in &self.comm {
            if i <= j {
                return Err(Error::BadWord(format!("commutator [g{}, g{}] needs i > j", i + 1, j + 1)));
            }
            self.check_word(w, i)?;
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.ngens as u32)
    }

    fn letters(w: &Word) -> impl Iterator<Item = usize> + '_ {
        w.iter().flat_map(|&(k, e)| std::iter::repeat(k).take(e as usize))
    }

    /// Multiplies the normal word `state` on the right by `g_j`.
    fn collect(&self, state: &mut [u32], j: usize) {
        let p = self.p;
        let mut stack = vec![j];
        let mut pending: Vec<usize> = Vec::new();
        while let Some(j) = stack.pop() {
            // state = A · T with T the part above j; T·g_j = g_j · Π (g_k [g_k, g_j])^{r_k}.
            pending.clear();
            state[j] += 1;
            let overflow = state[j] == p;
            if overflow {
                state[j] = 0;
                pending.extend(Self::letters(&self.power[j]));
            }
            for k in j + 1..self.ngens {
                let r = state[k];
                state[k] = 0;
                let c = self.comm.get(&(k, j));
                for _ in 0..r {
                    pending.push(k);
                    if let Some(c) = c {
                        pending.extend(Self::letters(c));
                    }
                }
            }
            stack.extend(pending.iter().rev());
        }
    }

    fn index_of(&self, state: &[u32]) -> usize {
        state.iter().fold(0usize, |acc, &e| acc * self.p as usize + e as usize)
    }

    fn state_of(&self, mut idx: usize) -> Vec<u32> {
        let mut s = vec![0u32; self.ngens];
        for k in (0..self.ngens).rev() {
            s[k] = (idx % self.p as usize) as u32;
            idx /= self.p as usize;
        }
        s
    }

    /// Display string of the normal word with the given index.
    pub fn element_name(&self, idx: usize) -> String {
        let s = self.state_of(idx);
        let w: Word = s.iter().enumerate().filter(|(_, &e)| e > 0).map(|(k, &e)| (k, e)).collect();
        format_word(&w)
    }

    /// Builds the multiplication table. Elements are the normal words in
    /// lexicographic order of their exponent vectors.
    pub fn build(&self) -> Result<GroupTable> {
        self.build_with_cap(super::MAX_ORDER_CAP)
    }

    pub fn build_with_cap(&self, cap: usize) -> Result<GroupTable> {
        self.validate()?;
        let order = self.order();
        if order > cap {
            return Err(Error::OrderCap { order, cap });
        }
        let n = self.ngens;
        // right[x * n + j] = x · g_j
        let mut right = vec![0u32; order * n];
        let mut state = vec![0u32; n];
        for x in 0..order {
            for j in 0..n {
                state.copy_from_slice(&self.state_of(x));
                self.collect(&mut state, j);
                right[x * n + j] = self.index_of(&state) as u32;
            }
        }
        // For y with last nonzero exponent at k, y = y' · g_k with y' a normal
        // word of smaller index, so x·y = (x·y')·g_k.
        let mut last = vec![(0usize, 0usize); order];
        for y in 1..order {
            let s = self.state_of(y);
            let k = (0..n).rev().find(|&k| s[k] > 0).unwrap();
            let stride = (self.p as usize).pow((n - 1 - k) as u32);
            last[y] = (y - stride, k);
        }
        let mut mul = vec![0u32; order * order];
        for x in 0..order {
            mul[x * order] = x as u32;
            for y in 1..order {
                let (prev, k) = last[y];
                let xy = mul[x * order + prev] as usize;
                mul[x * order + y] = right[xy * n + k];
            }
        }
        let names = (order <= 4096).then(|| (0..order).map(|i| self.element_name(i)).collect());
        GroupTable::from_table(self.p, order, mul, names).map_err(|e| match e {
            Error::NotAGroup(msg) => Error::InconsistentPresentation(msg),
            other => other,
        })
    }

    /// Presentation of `A × B`: generators of `self` first, then `other`.
    pub fn direct_product(&self, other: &PcPresentation, name: &str) -> Result<PcPresentation> {
        if self.p != other.p {
            return Err(Error::Invalid("direct product of presentations for different primes".into()));
        }
        let off = self.ngens;
        let mut out = PcPresentation::new(name, self.p, self.ngens + other.ngens);
        let shift = |w: &Word| -> Word { w.iter().map(|&(k, e)| (k + off, e)).collect() };
        for i in 0..self.ngens {
            out.power[i] = self.power[i].clone();
        }
        for i in 0..other.ngens {
            out.power[i + off] = shift(&other.power[i]);
        }
        for (&k, w) in &self.comm {
            out.comm.insert(k, w.clone());
        }
        for (&(i, j), w) in &other.comm {
            out.comm.insert((i + off, j + off), shift(w));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_four() {
        let g = PcPresentation::parse_relations(2, 2, &[(0, "g2")], &[]).unwrap().build().unwrap();
        assert_eq!(g.order(), 4);
        assert_eq!(g.exponent(), 4);
        assert!(g.is_abelian());
    }

    #[test]
    fn dihedral_eight() {
        let g = PcPresentation::parse_relations(2, 3, &[(1, "g3")], &[(1, 0, "g3")]).unwrap().build().unwrap();
        assert_eq!(g.order(), 8);
        assert!(!g.is_abelian());
        assert_eq!(g.exponent(), 4);
        g.check_associative_exhaustive().unwrap();
    }

    #[test]
    fn lower_generator_in_relation_is_rejected() {
        let err = PcPresentation::parse_relations(2, 3, &[(1, "g1")], &[]).unwrap_err();
        assert!(matches!(err, Error::BadWord(_)));
        let err = PcPresentation::parse_relations(2, 3, &[], &[(2, 1, "g2")]).unwrap_err();
        assert!(matches!(err, Error::BadWord(_)));
    }

    #[test]
    fn inconsistent_presentation_is_rejected() {
        // g2 = g1^2 commutes with g1, so [g2, g1] = g3 is impossible.
        let pres = PcPresentation::parse_relations(2, 3, &[(0, "g2")], &[(1, 0, "g3")]).unwrap();
        assert!(matches!(pres.build(), Err(Error::InconsistentPresentation(_))));
    }

    #[test]
    fn word_roundtrip() {
        let w = parse_word("g2*g3^2").unwrap();
        assert_eq!(w, vec![(1, 1), (2, 2)]);
        assert_eq!(format_word(&w), "g2*g3^2");
        assert!(parse_word("h2").is_err());
        assert!(parse_word("g0").is_err());
    }

    #[test]
    fn heisenberg_mod_three() {
        let g = PcPresentation::parse_relations(3, 3, &[], &[(1, 0, "g3")]).unwrap().build().unwrap();
        assert_eq!(g.order(), 27);
        assert_eq!(g.exponent(), 3);
        assert_eq!(g.center().order(), 3);
    }

    #[test]
    fn relations_hold_in_table() {
        let pres = PcPresentation::parse_relations(2, 4, &[(0, "g4"), (1, "g3"), (2, "g4")], &[(1, 0, "g3*g4"), (2, 0, "g4")]).unwrap();
        let g = pres.build().unwrap();
        let gen = |k: usize| (2usize.pow((3 - k) as u32)) as u32;
        let eval = |w: &Word| w.iter().fold(0u32, |acc, &(k, e)| g.mul(acc, g.pow(gen(k), e as u64)));
        for i in 0..4 {
            assert_eq!(g.pow(gen(i), 2), eval(&pres.power[i]));
        }
        for (&(i, j), w) in &pres.comm {
            assert_eq!(g.comm(gen(i), gen(j)), eval(w));
        }
    }
}
