#![allow(dead_code)]

use std::collections::BTreeMap;

use plane_aut::poly::Monomial;
use plane_aut::types::{canonical_key, CanonicalKey, CyclicType};

pub struct FixtureRow {
    pub ctype: CyclicType,
    pub support: Vec<Monomial>,
    pub unfiltered_only: bool,
}

fn expand(token: &str) -> Vec<Monomial> {
    let Some(lpos) = token.find('L') else {
        return vec![Monomial::parse(token).unwrap()];
    };
    let prefix = token[..lpos].trim_end_matches('*');
    let pre = if prefix.is_empty() { [0; 3] } else { Monomial::parse(prefix).unwrap().exps() };
    let rest = &token[lpos + 1..];
    let n: u32 = rest[..rest.len() - 1].parse().unwrap();
    let v = "XYZ".find(&rest[rest.len() - 1..]).unwrap();
    Monomial::all(n)
        .into_iter()
        .filter(|m| m.exps()[v] == 0)
        .map(|m| {
            let e = m.exps();
            Monomial::from_exps([e[0] + pre[0], e[1] + pre[1], e[2] + pre[2]])
        })
        .collect()
}

pub fn fixture() -> BTreeMap<u32, Vec<FixtureRow>> {
    let text = include_str!("../data/reference_tables.txt");
    let mut out: BTreeMap<u32, Vec<FixtureRow>> = BTreeMap::new();
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let parts: Vec<&str> = line.split(':').map(str::trim).collect();
        let h: Vec<u64> = parts[0].split_whitespace().map(|x| x.parse().unwrap()).collect();
        let d = h[0] as u32;
        let mut support: Vec<Monomial> = parts[1].split_whitespace().flat_map(expand).collect();
        support.sort();
        support.dedup();
        assert!(support.iter().all(|m| m.degree() == d), "{line}");
        out.entry(d).or_default().push(FixtureRow {
            ctype: CyclicType { d, m: h[1], a: h[2], b: h[3] },
            support,
            unfiltered_only: parts.get(2) == Some(&"unfiltered"),
        });
    }
    out
}

pub fn fixture_keys(d: u32, unfiltered: bool) -> Vec<CanonicalKey> {
    let mut v: Vec<CanonicalKey> = fixture()[&d]
        .iter()
        .filter(|r| unfiltered || !r.unfiltered_only)
        .map(|r| canonical_key(&r.ctype, &r.support))
        .collect();
    v.sort();
    v
}
pub mod oracle;
