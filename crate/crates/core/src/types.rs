//! Cyclic types `m,(a,b)` of smooth plane curves of degree d and their invariant
//! monomial families.
//!
//! A type is the diagonal map `diag(1, ξ_m^a, ξ_m^b)`. A family is a full weight
//! class of degree-d monomials under that map. The six cases below correspond to
//! how the three reference points (1:0:0), (0:1:0), (0:0:1) sit on the curve.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::autgrp::ProjMatrix;
use crate::error::{Error, Result};
use crate::ff::{gcd, Field, PrimeField};
use crate::poly::Monomial;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct CyclicType {
    pub d: u32,
    pub m: u64,
    pub a: u64,
    pub b: u64,
}

impl fmt::Display for CyclicType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},({},{})", self.m, self.a, self.b)
    }
}

impl CyclicType {
    /// Checks `a != b`, `a = 0 => gcd(b, m) = 1` and exact order m.
    pub fn new(d: u32, m: u64, a: u64, b: u64) -> Result<Self> {
        if d < 4 {
            return Err(Error::Domain(format!("degree {d} < 4")));
        }
        if m < 2 || a >= m || b >= m || a == b {
            return Err(Error::Domain(format!("invalid type {m},({a},{b})")));
        }
        if gcd(gcd(a, b), m) != 1 || (a == 0 && gcd(b, m) != 1) {
            return Err(Error::Domain(format!("{m},({a},{b}) does not have exact order {m}")));
        }
        Ok(CyclicType { d, m, a, b })
    }

    /// Exponent of ξ_m by which the map rescales `mono`.
    pub fn weight(&self, mono: &Monomial) -> Result<u64> {
        if mono.degree() != self.d {
            return Err(Error::DegreeMismatch {
                expected: self.d,
                got: mono.degree(),
            });
        }
        Ok(self.weight_unchecked(mono))
    }

    fn weight_unchecked(&self, mono: &Monomial) -> u64 {
        (self.a * mono.j as u64 + self.b * mono.k as u64) % self.m
    }

    /// `diag(1, ξ^a, ξ^b)` over a field containing the m-th roots of unity.
    pub fn matrix(&self, f: &PrimeField) -> Result<ProjMatrix> {
        let xi = f.root_of_unity(self.m)?;
        Ok(ProjMatrix::diag(f, [1, f.pow(&xi, self.a), f.pow(&xi, self.b)]))
    }
}

/// The case of the classification that produced a family.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum CaseTag {
    /// `a = 0`, m | d-1: `Z^{d-1} L_{1,Z} + L_{d,Z}`.
    C1,
    /// `a = 0`, m | d: `Z^d + L_{d,Z}`.
    C2,
    /// all reference points on C, none a flex of the core: core `X^{d-1}Y + Y^{d-1}Z + Z^{d-1}X`.
    C3,
    /// core `X^d + Y^{d-1}Z + YZ^{d-1}`.
    C4_1,
    /// core `X^d + Y^{d-1}Z + XZ^{d-1}`.
    C4_2,
    /// core `X^d + XY^{d-1} + XZ^{d-1}`, with additional terms.
    C4_3,
    /// core `X^d + Y^d + XZ^{d-1}`.
    C5,
    /// core `X^d + Y^d + Z^d`.
    C6,
}

impl CaseTag {
    pub const ALL: [CaseTag; 8] = [
        CaseTag::C1,
        CaseTag::C2,
        CaseTag::C3,
        CaseTag::C4_1,
        CaseTag::C4_2,
        CaseTag::C4_3,
        CaseTag::C5,
        CaseTag::C6,
    ];

    /// The integer every order in this case divides.
    pub fn bound(&self, d: u64) -> u64 {
        match self {
            CaseTag::C1 | CaseTag::C4_3 => d - 1,
            CaseTag::C2 | CaseTag::C6 => d,
            CaseTag::C3 => d * d - 3 * d + 3,
            CaseTag::C4_1 => d * (d - 2),
            CaseTag::C4_2 => (d - 1) * (d - 1),
            CaseTag::C5 => d * (d - 1),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            CaseTag::C1 => "1",
            CaseTag::C2 => "2",
            CaseTag::C3 => "3",
            CaseTag::C4_1 => "4.1",
            CaseTag::C4_2 => "4.2",
            CaseTag::C4_3 => "4.3",
            CaseTag::C5 => "5",
            CaseTag::C6 => "6",
        }
    }

    /// Whether `(a, b)` satisfies the case's congruences mod m.
    fn admits(&self, d: u64, m: u64, a: u64, b: u64) -> bool {
        let z = |x: u64| x.is_multiple_of(m);
        let e = |x: u64, y: u64| (x + m - y % m).is_multiple_of(m);
        match self {
            CaseTag::C1 | CaseTag::C2 => a == 0 && b == 1,
            CaseTag::C3 => e(a, (d - 1) * a + b) && e(a, (d - 1) * b),
            CaseTag::C4_1 => z((d - 1) * a + b) && z(a + (d - 1) * b),
            CaseTag::C4_2 => z((d - 1) * a + b) && z((d - 1) * b),
            CaseTag::C4_3 => z((d - 1) * a) && z((d - 1) * b),
            CaseTag::C5 => z(d * a) && z((d - 1) * b),
            CaseTag::C6 => z(d * a) && z(d * b),
        }
    }

    /// The weight class forced by the case's core monomials.
    fn class(&self, a: u64) -> u64 {
        match self {
            CaseTag::C3 => a,
            _ => 0,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, Serialize, Deserialize)]
pub struct Flags {
    /// one variable divides every monomial
    pub forced_reducible: bool,
    /// some variable has degree < d-1 in every monomial
    pub fails_necessary: bool,
}

impl Flags {
    pub fn of(d: u32, support: &[Monomial]) -> Flags {
        let forced_reducible = (0..3).any(|v| support.iter().all(|m| m.exps()[v] > 0));
        let fails_necessary = (0..3).any(|v| support.iter().all(|m| m.exps()[v] + 1 < d));
        Flags {
            forced_reducible,
            fails_necessary,
        }
    }

    pub fn any(&self) -> bool {
        self.forced_reducible || self.fails_necessary
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TypeFamily {
    pub ctype: CyclicType,
    pub case_tag: CaseTag,
    pub weight_class: u64,
    /// sorted, higher powers of X first
    pub monomials: Vec<Monomial>,
    pub flags: Flags,
}

impl TypeFamily {
    /// The weight-class family of `ctype` containing monomials of weight `weight_class`.
    pub fn new(ctype: CyclicType, case_tag: CaseTag, weight_class: u64) -> TypeFamily {
        let monomials = invariant_monomials(&ctype, weight_class);
        let flags = Flags::of(ctype.d, &monomials);
        TypeFamily {
            ctype,
            case_tag,
            weight_class,
            monomials,
            flags,
        }
    }
}

pub fn weight(t: &CyclicType, mono: &Monomial) -> Result<u64> {
    t.weight(mono)
}

/// All degree-d monomials of weight `c`.
pub fn invariant_monomials(t: &CyclicType, c: u64) -> Vec<Monomial> {
    Monomial::all(t.d)
        .into_iter()
        .filter(|m| t.weight_unchecked(m) == c % t.m)
        .collect()
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|k| n.is_multiple_of(*k)).collect()
}

/// The values among d-1, d, d²-3d+3, (d-1)², d(d-2), d(d-1) that m divides.
pub fn divisor_bound(d: u32, m: u64) -> Vec<u64> {
    let d = d as u64;
    let mut out: Vec<u64> = [d - 1, d, d * d - 3 * d + 3, (d - 1) * (d - 1), d * (d - 2), d * (d - 1)]
        .into_iter()
        .filter(|b| b % m == 0)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// Every (case, m, (a,b)) family before identification, in case order.
pub fn enumerate_types(d: u32) -> Vec<TypeFamily> {
    assert!(d >= 4, "degree must be at least 4");
    let dd = d as u64;
    let mut out = Vec::new();
    for case in CaseTag::ALL {
        for m in divisors(case.bound(dd)).into_iter().filter(|&m| m >= 2) {
            let pairs: Vec<(u64, u64)> = match case {
                CaseTag::C1 | CaseTag::C2 => vec![(0, 1)],
                // Γ_m
                _ => (1..m)
                    .flat_map(|a| (1..m).map(move |b| (a, b)))
                    .filter(|&(a, b)| a != b && gcd(a, b) == 1)
                    .collect(),
            };
            for (a, b) in pairs {
                if !case.admits(dd, m, a, b) {
                    continue;
                }
                let t = CyclicType::new(d, m, a, b).expect("Γ_m pairs have exact order m");
                out.push(TypeFamily::new(t, case, case.class(a)));
            }
        }
    }
    out
}

/// Normal form of an (a, b) pair: a != b; a = 0 forces b = 1; b = 0 is excluded
/// (swap Y and Z instead); otherwise gcd(a, b) = 1 as integers.
fn normalized(m: u64, a: u64, b: u64, strict: bool) -> bool {
    if a == b || b == 0 {
        return false;
    }
    if a == 0 {
        return b == 1;
    }
    if strict {
        gcd(a, b) == 1
    } else {
        gcd(gcd(a, b), m) == 1
    }
}

/// Identifies a family up to coordinate permutation and choice of generator of
/// the cyclic group: the smallest `(m, class, a, b, support)` over all equivalent
/// forms, so forms where the support is invariant (class 0) win.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalKey {
    pub m: u64,
    pub class: u64,
    pub a: u64,
    pub b: u64,
    pub support: Vec<[u32; 3]>,
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Canonical form of a weight-class family of type `t` with support `support`.
pub fn canonical_key(t: &CyclicType, support: &[Monomial]) -> CanonicalKey {
    let m = t.m;
    let w = [0, t.a, t.b];
    let mut best: Option<CanonicalKey> = None;
    for strict in [true, false] {
        for p in PERMS {
            // new variable v is old variable p[v]
            let e = [w[p[0]], w[p[1]], w[p[2]]].map(|x| (x + m - w[p[0]]) % m);
            let mut sup: Vec<[u32; 3]> = support
                .iter()
                .map(|mo| {
                    let x = mo.exps();
                    [x[p[0]], x[p[1]], x[p[2]]]
                })
                .collect();
            sup.sort();
            for k in (1..m).filter(|&k| gcd(k, m) == 1) {
                let (a, b) = (k * e[1] % m, k * e[2] % m);
                if !normalized(m, a, b, strict) {
                    continue;
                }
                let x = sup[0];
                let class = (a * x[1] as u64 + b * x[2] as u64) % m;
                let key = CanonicalKey {
                    m,
                    class,
                    a,
                    b,
                    support: sup.clone(),
                };
                if best.as_ref().is_none_or(|bk| key < *bk) {
                    best = Some(key);
                }
            }
        }
        if best.is_some() {
            break;
        }
    }
    best.expect("every exact-order type has a normalized form")
}

impl TypeFamily {
    pub fn canonical_key(&self) -> CanonicalKey {
        canonical_key(&self.ctype, &self.monomials)
    }

    /// The same family rewritten in its canonical coordinates and label.
    pub fn canonicalized(&self) -> TypeFamily {
        let key = self.canonical_key();
        let t = CyclicType {
            d: self.ctype.d,
            m: key.m,
            a: key.a,
            b: key.b,
        };
        let mut monomials: Vec<Monomial> = key.support.iter().map(|e| Monomial::from_exps(*e)).collect();
        monomials.sort();
        TypeFamily {
            ctype: t,
            case_tag: self.case_tag,
            weight_class: key.class,
            flags: Flags::of(t.d, &monomials),
            monomials,
        }
    }
}

/// Sort order of the printed tables: decreasing m, then (a, b).
pub fn table_order(x: &TypeFamily, y: &TypeFamily) -> std::cmp::Ordering {
    y.ctype
        .m
        .cmp(&x.ctype.m)
        .then(x.ctype.a.cmp(&y.ctype.a))
        .then(x.ctype.b.cmp(&y.ctype.b))
        .then(x.monomials.cmp(&y.monomials))
}

/// One canonical representative per class; the first family of each class (in
/// input order) supplies the case tag.
pub fn dedup(families: &[TypeFamily]) -> Vec<TypeFamily> {
    let mut seen: BTreeMap<CanonicalKey, TypeFamily> = BTreeMap::new();
    for f in families {
        seen.entry(f.canonical_key()).or_insert_with(|| f.canonicalized());
    }
    let mut out: Vec<TypeFamily> = seen.into_values().collect();
    out.sort_by(table_order);
    out
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub enum View {
    /// The listing convention of the published tables: the case with every
    /// reference point on the curve only at m = d²-3d+3, and the case with none
    /// only at m = d.
    #[default]
    Published,
    /// Every divisor of every case bound.
    Complete,
}

/// Deduplicated families of degree d. `filtered` drops families flagged as
/// forced reducible or failing the degree condition.
pub fn table(d: u32, view: View, filtered: bool) -> Vec<TypeFamily> {
    let dd = d as u64;
    let raw: Vec<TypeFamily> = enumerate_types(d)
        .into_iter()
        .filter(|f| match (view, f.case_tag) {
            (View::Published, CaseTag::C3) => f.ctype.m == dd * dd - 3 * dd + 3,
            (View::Published, CaseTag::C6) => f.ctype.m == dd,
            _ => true,
        })
        .filter(|f| !filtered || !f.flags.any())
        .collect();
    dedup(&raw)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(s: &str) -> Monomial {
        Monomial::parse(s).unwrap()
    }

    fn support(d: u32, m: u64, a: u64, b: u64) -> Vec<Monomial> {
        let t = CyclicType::new(d, m, a, b).unwrap();
        invariant_monomials(&t, t.weight(&Monomial::new(d, 0, 0)).unwrap())
    }

    #[test]
    fn weights() {
        let t = CyclicType::new(5, 20, 4, 5).unwrap();
        for s in ["X^5", "Y^5", "XZ^4"] {
            assert_eq!(t.weight(&mono(s)).unwrap(), 0);
        }
        let t = CyclicType::new(5, 13, 1, 10).unwrap();
        for s in ["X^4Y", "Y^4Z", "Z^4X"] {
            assert_eq!(t.weight(&mono(s)).unwrap(), 1);
        }
        let t = CyclicType::new(7, 3, 0, 1).unwrap();
        assert_eq!(t.weight(&mono("Z^7")).unwrap(), 1);
        assert!(t.weight(&mono("Z^5")).is_err());
    }

    #[test]
    fn large_order_supports() {
        for d in 5..=9u64 {
            let dd = d as u32;
            let s = support(dd, d * (d - 1), d - 1, d);
            let want: Vec<Monomial> = vec![Monomial::new(dd, 0, 0), Monomial::new(0, dd, 0), Monomial::new(1, 0, dd - 1)];
            let mut want = want;
            want.sort();
            assert_eq!(s, want, "d={d}");
            let s = support(dd, (d - 1) * (d - 1), 1, (d - 1) * (d - 2));
            let want = vec![Monomial::new(dd, 0, 0), Monomial::new(1, 0, dd - 1), Monomial::new(0, dd - 1, 1)];
            let mut s2 = s.clone();
            s2.sort();
            let mut w2 = want.clone();
            w2.sort();
            assert_eq!(s2, w2, "d={d}");
        }
    }

    #[test]
    fn involution_family_is_even_in_z() {
        let t = CyclicType::new(5, 2, 0, 1).unwrap();
        let s = invariant_monomials(&t, 0);
        assert_eq!(s.len(), 6 + 4 + 2);
        assert!(s.iter().all(|m| m.k % 2 == 0));
    }

    #[test]
    fn divisor_bounds() {
        assert_eq!(divisor_bound(5, 13), vec![13]);
        assert_eq!(divisor_bound(5, 1).len(), 6);
        assert!(divisor_bound(5, 7).is_empty());
    }

    #[test]
    fn quintic_counts() {
        assert_eq!(table(5, View::Published, true).len(), 12);
        let unf = table(5, View::Published, false);
        assert_eq!(unf.len(), 13);
        let extra: Vec<_> = unf.iter().filter(|f| f.flags.any()).collect();
        assert_eq!(extra.len(), 1);
        assert_eq!((extra[0].ctype.m, extra[0].ctype.a, extra[0].ctype.b), (4, 1, 3));
        assert!(extra[0].flags.forced_reducible);
    }

    #[test]
    fn quartic_labels() {
        let got: Vec<(u64, u64, u64)> = table(4, View::Published, true)
            .iter()
            .map(|f| (f.ctype.m, f.ctype.a, f.ctype.b))
            .collect();
        assert_eq!(
            got,
            vec![
                (12, 1, 9),
                (9, 1, 6),
                (8, 1, 5),
                (7, 1, 5),
                (6, 1, 3),
                (4, 0, 1),
                (4, 1, 2),
                (3, 0, 1),
                (3, 1, 2),
                (2, 0, 1),
            ]
        );
    }

    #[test]
    fn conjugate_normalizations_collapse() {
        let fams: Vec<TypeFamily> = [(1, 2), (2, 1), (3, 4), (4, 3), (1, 4), (4, 1)]
            .iter()
            .map(|&(a, b)| TypeFamily::new(CyclicType::new(5, 5, a, b).unwrap(), CaseTag::C6, 0))
            .collect();
        assert_eq!(dedup(&fams).len(), 1);
        assert_eq!(dedup(&fams[..1]).len(), 1);
        let two: Vec<TypeFamily> = [(1, 2), (1, 3)]
            .iter()
            .map(|&(a, b)| TypeFamily::new(CyclicType::new(5, 4, a, b).unwrap(), CaseTag::C4_3, 0))
            .collect();
        assert_eq!(dedup(&two).len(), 2);
    }

    #[test]
    fn every_family_is_one_weight_class() {
        for d in 4..=9 {
            for f in enumerate_types(d) {
                let ws: std::collections::BTreeSet<u64> =
                    f.monomials.iter().map(|m| f.ctype.weight(m).unwrap()).collect();
                assert_eq!(ws.len(), 1);
                assert!(!divisor_bound(d, f.ctype.m).is_empty());
            }
        }
    }
}
