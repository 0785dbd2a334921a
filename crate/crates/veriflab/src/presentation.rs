//! Line-oriented presentation files.
//!
//! ```text
//! group D8
//! p 2
//! gens 3
//! pow 2 : g3
//! comm 2 1 : g3
//! end
//! ```
//!
//! Generator numbers are 1-based in text. `#` starts a comment.

use std::collections::HashSet;

use pgv_core::group::{format_word, PcPresentation, Word};

use crate::error::{Error, Result};

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, col, msg: msg.into() }
}

/// A parsed block, with the line of its `group` header for later errors.
#[derive(Clone, Debug)]
pub struct ParsedGroup {
    pub presentation: PcPresentation,
    pub line: usize,
}

struct Open {
    name: String,
    line: usize,
    p: Option<u32>,
    pres: Option<PcPresentation>,
}

pub fn parse_presentations(text: &str) -> Result<Vec<ParsedGroup>> {
    let mut out = Vec::new();
    let mut names = HashSet::new();
    let mut open: Option<Open> = None;
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let indent = content.len() - content.trim_start().len();
        let body = content.trim();
        if body.is_empty() {
            continue;
        }
        let kw = body.split(char::is_whitespace).next().unwrap_or(body);
        let after = &body[kw.len()..];
        let rest = after.trim();
        let rest_col = indent + kw.len() + (after.len() - after.trim_start().len()) + 1;
        match kw {
            "group" => {
                if let Some(o) = &open {
                    return Err(parse_err(ln, indent + 1, format!("group '{}' opened on line {} is not closed", o.name, o.line)));
                }
                if rest.is_empty() || rest.contains(char::is_whitespace) {
                    return Err(parse_err(ln, rest_col, "expected a single group name"));
                }
                if !names.insert(rest.to_string()) {
                    return Err(Error::DuplicateName(rest.to_string()));
                }
                open = Some(Open { name: rest.to_string(), line: ln, p: None, pres: None });
            }
            "p" => {
                let o = open.as_mut().ok_or_else(|| parse_err(ln, indent + 1, "'p' outside a group block"))?;
                if o.p.is_some() {
                    return Err(parse_err(ln, indent + 1, "prime given twice"));
                }
                let p: u32 = rest.parse().map_err(|_| parse_err(ln, rest_col, format!("bad prime '{rest}'")))?;
                if !pgv_core::fp_linalg::is_prime(p) {
                    return Err(parse_err(ln, rest_col, format!("{p} is not prime")));
                }
                o.p = Some(p);
            }
            "gens" => {
                let o = open.as_mut().ok_or_else(|| parse_err(ln, indent + 1, "'gens' outside a group block"))?;
                let p = o.p.ok_or_else(|| parse_err(ln, indent + 1, "'gens' before 'p'"))?;
                if o.pres.is_some() {
                    return Err(parse_err(ln, indent + 1, "generator count given twice"));
                }
                let n: usize = rest.parse().map_err(|_| parse_err(ln, rest_col, format!("bad generator count '{rest}'")))?;
                o.pres = Some(PcPresentation::new(&o.name, p, n));
            }
            "pow" | "comm" => {
                let o = open.as_mut().ok_or_else(|| parse_err(ln, indent + 1, format!("'{kw}' outside a group block")))?;
                let pres = o.pres.as_mut().ok_or_else(|| parse_err(ln, indent + 1, format!("'{kw}' before 'gens'")))?;
                let colon = rest.find(':').ok_or_else(|| parse_err(ln, rest_col, "missing ':'"))?;
                let head = &rest[..colon];
                let word_col = rest_col + colon + 1;
                let word = parse_word_at(&rest[colon + 1..], ln, word_col, pres.p)?;
                let idx: Vec<usize> = head
                    .split_whitespace()
                    .map(|t| t.parse::<usize>().ok().filter(|&k| k >= 1 && k <= pres.ngens))
                    .collect::<Option<_>>()
                    .ok_or_else(|| parse_err(ln, rest_col, format!("bad generator index in '{}'", head.trim())))?;
                let res = match (kw, idx.as_slice()) {
                    ("pow", [i]) => pres.set_power(i - 1, word),
                    ("comm", [i, j]) => pres.set_comm(i - 1, j - 1, word),
                    _ => return Err(parse_err(ln, rest_col, format!("wrong number of indices for '{kw}'"))),
                };
                res.map_err(|e| parse_err(ln, word_col, e.to_string()))?;
            }
            "end" => {
                let o = open.take().ok_or_else(|| parse_err(ln, indent + 1, "'end' without 'group'"))?;
                let presentation = o.pres.ok_or_else(|| parse_err(ln, indent + 1, format!("group '{}' has no 'gens' line", o.name)))?;
                out.push(ParsedGroup { presentation, line: o.line });
            }
            other => return Err(parse_err(ln, indent + 1, format!("unknown keyword '{other}'"))),
        }
    }
    if let Some(o) = open {
        return Err(parse_err(o.line, 1, format!("group '{}' is not closed", o.name)));
    }
    Ok(out)
}

/// Parses a word and reports the column of the offending term.
fn parse_word_at(text: &str, line: usize, col: usize, p: u32) -> Result<Word> {
    let lead = text.len() - text.trim_start().len();
    let t = text.trim();
    if t == "1" {
        return Ok(Vec::new());
    }
    if t.is_empty() {
        return Err(parse_err(line, col, "empty word"));
    }
    let mut word = Vec::new();
    let mut offset = col + lead;
    for term in t.split('*') {
        let c = offset + (term.len() - term.trim_start().len());
        offset += term.len() + 1;
        let term = term.trim();
        let bad = || parse_err(line, c, format!("bad term '{term}'"));
        let body = term.strip_prefix('g').ok_or_else(bad)?;
        let (k, e) = match body.split_once('^') {
            Some((k, e)) => (k, e.parse::<u32>().map_err(|_| bad())?),
            None => (body, 1),
        };
        let k: usize = k.parse().map_err(|_| bad())?;
        if k == 0 {
            return Err(bad());
        }
        if e == 0 || e >= p {
            return Err(parse_err(line, c, format!("exponent {e} outside 1..{}", p - 1)));
        }
        word.push((k - 1, e));
    }
    Ok(word)
}

/// Inverse of [`parse_presentations`] for one group.
pub fn format_presentation(pres: &PcPresentation) -> String {
    let mut s = format!("group {}\np {}\ngens {}\n", pres.name, pres.p, pres.ngens);
    for (i, w) in pres.power.iter().enumerate() {
        if !w.is_empty() {
            s.push_str(&format!("pow {} : {}\n", i + 1, format_word(w)));
        }
    }
    for (&(i, j), w) in &pres.comm {
        s.push_str(&format!("comm {} {} : {}\n", i + 1, j + 1, format_word(w)));
    }
    s.push_str("end\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const D8: &str = "group D8\np 2\ngens 3\npow 2 : g3   # r^2 = z\ncomm 2 1 : g3\nend\n";

    #[test]
    fn parses_and_round_trips() {
        let gs = parse_presentations(D8).unwrap();
        assert_eq!(gs.len(), 1);
        let pres = &gs[0].presentation;
        assert_eq!(pres.build().unwrap().order(), 8);
        let again = parse_presentations(&format_presentation(pres)).unwrap();
        assert_eq!(&again[0].presentation, pres);
    }

    #[test]
    fn empty_text_gives_nothing() {
        assert!(parse_presentations("").unwrap().is_empty());
        assert!(parse_presentations("# only a comment\n\n").unwrap().is_empty());
    }

    #[test]
    fn errors_carry_locations() {
        let bad = "group X\np 2\ngens 3\npow 2 : g3 * h1\nend\n";
        match parse_presentations(bad) {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (4, 14)),
            other => panic!("{other:?}"),
        }
        let low = "group X\np 2\ngens 3\ncomm 2 1 : g1\nend\n";
        assert!(matches!(parse_presentations(low), Err(Error::Parse { line: 4, .. })));
        let exp = "group X\np 3\ngens 2\npow 1 : g2^3\nend\n";
        assert!(matches!(parse_presentations(exp), Err(Error::Parse { line: 4, col: 9, .. })));
        assert!(matches!(parse_presentations("group X\np 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_presentations("gens 2\n"), Err(Error::Parse { line: 1, col: 1, .. })));
    }

    #[test]
    fn duplicate_names_rejected() {
        let twice = format!("{D8}{D8}");
        assert!(matches!(parse_presentations(&twice), Err(Error::DuplicateName(n)) if n == "D8"));
    }
}
