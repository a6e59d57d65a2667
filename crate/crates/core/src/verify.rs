//! Per-degree consistency checks: divisor bounds, large-order families, smooth
//! members, group orders and presentations.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::autgrp::{
    closure, dihedral_type_generators, dihedral_type_relations, exhaustive_aut, fermat_generators,
    hessian_generators, klein_generators, klein_relations, monomial_stabilizer, verify_presentation,
    GroupClosure,
};
use crate::error::Result;
use crate::family::{sample_smooth, specialize, EquationFamily, Params, PlaneCurve};
use crate::ff::{select_prime, Field, PrimeField};
use crate::poly::{is_invariant, is_smooth, HomPoly, Monomial};
use crate::types::{divisor_bound, enumerate_types, table, CaseTag, CyclicType, TypeFamily, View};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, expected: impl ToString, got: impl ToString) -> Check {
        let (expected, got) = (expected.to_string(), got.to_string());
        Check {
            name: name.into(),
            pass: expected == got,
            expected,
            got,
        }
    }

    fn from_result<T: ToString>(name: impl Into<String>, expected: impl ToString, got: Result<T>) -> Check {
        match got {
            Ok(v) => Check::new(name, expected, v),
            Err(e) => Check::new(name, expected, format!("error: {e}")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub trials: u64,
    pub exhaustive: bool,
    pub budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 1,
            trials: 200,
            exhaustive: false,
            budget: 50_000_000,
        }
    }
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

pub fn same_up_to_permutation(a: &[Monomial], b: &[Monomial]) -> bool {
    let mut b: Vec<Monomial> = b.to_vec();
    b.sort();
    PERMS.iter().any(|p| {
        let mut t: Vec<Monomial> = a.iter().map(|m| m.permute(*p)).collect();
        t.sort();
        t == b
    })
}

/// The families of order `m(d)` for the four largest orders, with the support
/// each must collapse to.
pub fn large_order_expectations(d: u32) -> Vec<(u64, Vec<Monomial>)> {
    let dd = d as u64;
    let mo = Monomial::new;
    vec![
        (dd * (dd - 1), vec![mo(d, 0, 0), mo(0, d, 0), mo(1, 0, d - 1)]),
        ((dd - 1) * (dd - 1), vec![mo(d, 0, 0), mo(0, d - 1, 1), mo(1, 0, d - 1)]),
        (dd * (dd - 2), vec![mo(d, 0, 0), mo(0, d - 1, 1), mo(0, 1, d - 1)]),
        (dd * dd - 3 * dd + 3, vec![mo(d - 1, 1, 0), mo(0, d - 1, 1), mo(1, 0, d - 1)]),
    ]
}

/// Supports of the deduplicated families of order exactly m (complete view).
pub fn families_of_order(d: u32, m: u64) -> Vec<TypeFamily> {
    table(d, View::Complete, true)
        .into_iter()
        .filter(|f| f.ctype.m == m)
        .collect()
}

fn large_order_checks(d: u32) -> Vec<Check> {
    large_order_expectations(d)
        .into_iter()
        .map(|(m, want)| {
            let fams = families_of_order(d, m);
            let ok = fams.len() == 1 && same_up_to_permutation(&fams[0].monomials, &want);
            let got = fams
                .iter()
                .map(|f| {
                    f.monomials
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join("+")
                })
                .collect::<Vec<_>>()
                .join(" | ");
            let want_s = want.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("+");
            Check {
                name: format!("order {m} family collapses"),
                expected: want_s,
                got,
                pass: ok,
            }
        })
        .collect()
}

fn divisor_checks(d: u32) -> Check {
    let bad: Vec<String> = enumerate_types(d)
        .iter()
        .filter(|f| divisor_bound(d, f.ctype.m).is_empty() || f.ctype.m > (d as u64) * (d as u64 - 1))
        .map(|f| f.ctype.to_string())
        .collect();
    Check::new("every order divides a case bound", "none", if bad.is_empty() { "none".to_string() } else { bad.join(" ") })
}

/// Published row counts for the reference degrees (d=8 counts the two families
/// behind the conflated 7,(6,1) row separately).
pub fn published_row_count(d: u32) -> Option<usize> {
    match d {
        4 => Some(10),
        5 => Some(12),
        6 => Some(17),
        7 => Some(20),
        8 => Some(21),
        9 => Some(24),
        _ => None,
    }
}

fn smooth_member_checks(d: u32, opts: &VerifyOptions) -> Vec<Check> {
    table(d, View::Published, true)
        .iter()
        .map(|t| {
            let fam = EquationFamily::from_type_family(t);
            let p = select_prime(d, &[t.ctype.m]);
            let got = PrimeField::new(p).and_then(|f| {
                let c = sample_smooth(&fam, &f, opts.trials, opts.seed)?;
                let m = t.ctype.matrix(&f)?;
                Ok(is_invariant(&c.form, &m).is_some())
            });
            Check::from_result(format!("type {} has a smooth member over F_{p}", t.ctype), true, got)
        })
        .collect()
}

/// Group from the generators of the automorphism group of `X^d + Y^{d-1}Z + YZ^{d-1}`.
pub fn dihedral_type_check(d: u32) -> Result<(bool, usize)> {
    let n = (d * (d - 2)) as u64;
    let f = PrimeField::new(select_prime(d, &[n]))?;
    let gens = dihedral_type_generators(&f, d)?;
    let rels = dihedral_type_relations(d);
    let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
    let form = HomPoly::from_terms(
        &f,
        d,
        [(Monomial::new(d, 0, 0), 1), (Monomial::new(0, d - 1, 1), 1), (Monomial::new(0, 1, d - 1), 1)],
    )?;
    let fixes = gens.iter().all(|g| is_invariant(&form, &g.1).is_some());
    let g = closure(&f, &[gens[0].1, gens[1].1], 10_000)?;
    let ok = fixes && verify_presentation(&f, &gens, &rels, 2 * n as usize)?;
    Ok((ok, g.order))
}

/// Group from the generators of the automorphism group of the Klein-type curve.
pub fn klein_type_check(d: u32) -> Result<(bool, usize)> {
    let n = (d * d - 3 * d + 3) as u64;
    let f = PrimeField::new(select_prime(d, &[n]))?;
    let gens = klein_generators(&f, d)?;
    let rels = klein_relations(d);
    let rels: Vec<&str> = rels.iter().map(String::as_str).collect();
    let form = HomPoly::klein(&f, d);
    let fixes = gens.iter().all(|g| is_invariant(&form, &g.1).is_some());
    let g = closure(&f, &[gens[0].1, gens[1].1], 10_000)?;
    let ok = fixes && verify_presentation(&f, &gens, &rels, 3 * n as usize)?;
    Ok((ok, g.order))
}

/// Orders of Hess_216, Hess_72, Hess_36 over F_p (p ≡ 1 mod 3).
pub fn hessian_orders(p: u64) -> Result<[usize; 3]> {
    let f = PrimeField::new(p)?;
    let [s, t, u, v] = hessian_generators(&f)?;
    let uvu = u.mul(&v, &f).mul(&u.inverse(&f), &f);
    Ok([
        closure(&f, &[s, t, u, v], 1000)?.order,
        closure(&f, &[s, t, v, uvu], 1000)?.order,
        closure(&f, &[s, t, v], 1000)?.order,
    ])
}

pub fn fermat_order(d: u32) -> Result<usize> {
    let f = PrimeField::new(select_prime(d, &[d as u64]))?;
    Ok(closure(&f, &fermat_generators(&f, d)?, 100_000)?.order)
}

/// One row of the full-automorphism table in degree 5.
#[derive(Clone, Debug)]
pub struct Degree5Row {
    pub name: &'static str,
    pub expected: usize,
    /// type and a monomial fixing the weight class
    pub ctype: (u64, u64, u64),
    pub anchor: Monomial,
    pub rule: ParamRule,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamRule {
    /// all free parameters 0
    Zero,
    /// all free parameters random nonzero
    Generic,
    /// random, then the coefficients of the two given monomials made equal
    Equal(Monomial, Monomial),
    /// random, with the two given coefficients forced different
    Different(Monomial, Monomial),
    /// random nonzero β avoiding the listed values
    Avoid(&'static [u64]),
}

pub fn degree5_rows() -> Vec<Degree5Row> {
    let m = Monomial::parse;
    let x5 = Monomial::new(5, 0, 0);
    let row = |name, expected, ctype, anchor, rule| Degree5Row {
        name,
        expected,
        ctype,
        anchor,
        rule,
    };
    let (y3, z3) = (m("X^2Y^3").unwrap(), m("X^2Z^3").unwrap());
    vec![
        row("Fermat X^5+Y^5+Z^5", 150, (5, 1, 2), x5, ParamRule::Zero),
        row("Klein X^4Y+Y^4Z+Z^4X", 39, (13, 1, 10), m("X^4Y").unwrap(), ParamRule::Zero),
        row("X^5+Y^4Z+YZ^4", 30, (15, 1, 11), x5, ParamRule::Zero),
        row("C20 X^5+Y^5+XZ^4", 20, (20, 4, 5), x5, ParamRule::Zero),
        row("C16 X^5+Y^4Z+XZ^4", 16, (16, 1, 12), x5, ParamRule::Zero),
        row("C10 X^5+Y^5+XZ^4+βX^3Z^2, β≠0", 10, (10, 2, 5), x5, ParamRule::Generic),
        row("D10 Fermat descendant of type 5,(1,2)", 10, (5, 1, 2), x5, ParamRule::Generic),
        row("C8 X^5+Y^4Z+XZ^4+βX^3Z^2, β∉{0,±2}", 8, (8, 1, 4), x5, ParamRule::Avoid(&[2])),
        row("S3 type 3,(1,2) with β_{3,0}=β_{3,3}", 6, (3, 1, 2), x5, ParamRule::Equal(z3, y3)),
        row("C5 Z^5+L_{5,Z}", 5, (5, 0, 1), x5, ParamRule::Generic),
        row("C4 type 4,(1,2), β_{5,2}≠0", 4, (4, 1, 2), x5, ParamRule::Generic),
        row("C4 Z^4L_{1,Z}+L_{5,Z}", 4, (4, 0, 1), x5, ParamRule::Generic),
        row("C3 type 3,(1,2) with β_{3,0}≠β_{3,3}", 3, (3, 1, 2), x5, ParamRule::Different(z3, y3)),
        row("C2 Z^4L_{1,Z}+Z^2L_{3,Z}+L_{5,Z}", 2, (2, 0, 1), x5, ParamRule::Generic),
    ]
}

fn draw_params(fam: &EquationFamily, f: &PrimeField, rule: ParamRule, rng: &mut ChaCha8Rng) -> Params {
    let free = fam.free_monomials();
    let p = f.p();
    let mut betas: Vec<u64> = free.iter().map(|_| rng.gen_range(1..p)).collect();
    let idx = |m: &Monomial| free.iter().position(|x| x == m).expect("monomial is a free slot");
    match rule {
        ParamRule::Zero => betas.iter_mut().for_each(|b| *b = 0),
        ParamRule::Generic => {}
        ParamRule::Equal(a, b) => betas[idx(&b)] = betas[idx(&a)],
        ParamRule::Different(a, b) => {
            if betas[idx(&a)] == betas[idx(&b)] {
                betas[idx(&b)] = f.add(&betas[idx(&b)], &1).max(1);
            }
        }
        ParamRule::Avoid(vals) => {
            for b in betas.iter_mut() {
                while vals.iter().any(|v| *b == v % p || *b == f.neg(&(v % p))) {
                    *b = rng.gen_range(1..p);
                }
            }
        }
    }
    Params::new(1, &betas)
}

/// A smooth member of the row's family, drawn deterministically from `seed`.
pub fn degree5_curve(row: &Degree5Row, f: &PrimeField, seed: u64) -> Result<PlaneCurve> {
    let (m, a, b) = row.ctype;
    let t = CyclicType::new(5, m, a, b)?;
    let fam = EquationFamily::from_type_family(&TypeFamily::new(t, CaseTag::C6, t.weight(&row.anchor)?));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let c = specialize(&fam, &draw_params(&fam, f, row.rule, &mut rng), f)?;
        if is_smooth(&c.form)?.is_smooth() {
            return Ok(c);
        }
    }
    Err(crate::error::Error::Exhausted(100))
}

/// The field used for the degree-5 table: contains every relevant root of unity.
pub fn degree5_field() -> Result<PrimeField> {
    PrimeField::new(select_prime(5, &[16, 15, 13, 20]))
}

/// `(row, monomial stabilizer)` for every row of the degree-5 table.
pub fn degree5_stabilizers(seed: u64) -> Result<Vec<(Degree5Row, GroupClosure)>> {
    let f = degree5_field()?;
    degree5_rows()
        .into_iter()
        .map(|r| {
            let c = degree5_curve(&r, &f, seed)?;
            Ok((r, monomial_stabilizer(&c.form)))
        })
        .collect()
}

/// Klein quartic in a model with F_11-rational automorphisms:
/// `x^4 + y^4 + z^4 + 3α(x²y² + y²z² + z²x²)` with `α = (-1 + √-7)/2 = 6`.
pub fn klein_quartic_f11() -> Result<HomPoly> {
    let f = PrimeField::new(11)?;
    let c = f.mul(&3, &6);
    let m = Monomial::parse;
    HomPoly::from_terms(
        &f,
        4,
        [
            (m("X^4")?, 1),
            (m("Y^4")?, 1),
            (m("Z^4")?, 1),
            (m("X^2Y^2")?, c),
            (m("Y^2Z^2")?, c),
            (m("X^2Z^2")?, c),
        ],
    )
}

pub fn verify_degree(d: u32, opts: &VerifyOptions) -> Vec<Check> {
    let mut out = vec![divisor_checks(d)];
    let rows = table(d, View::Published, true).len();
    if let Some(n) = published_row_count(d) {
        out.push(Check::new("published table rows", n, rows));
    }
    if d >= 5 {
        out.extend(large_order_checks(d));
    }
    out.extend(smooth_member_checks(d, opts));
    let n41 = 2 * d * (d - 2);
    out.push(Check::from_result(
        "dihedral-type presentation order",
        format!("true/{n41}"),
        dihedral_type_check(d).map(|(ok, o)| format!("{ok}/{o}")),
    ));
    let n43 = 3 * (d * d - 3 * d + 3);
    out.push(Check::from_result(
        "Klein-type presentation order",
        format!("true/{n43}"),
        klein_type_check(d).map(|(ok, o)| format!("{ok}/{o}")),
    ));
    out.push(Check::from_result("Fermat group order", 6 * d * d, fermat_order(d)));
    if d == 4 {
        out.push(Check::from_result(
            "Hessian orders 216/72/36",
            "[216, 72, 36]",
            hessian_orders(31).map(|o| format!("{o:?}")),
        ));
        let f13 = PrimeField::new(13).unwrap();
        out.push(Check::new(
            "Fermat quartic monomial stabilizer",
            96,
            monomial_stabilizer(&HomPoly::fermat(&f13, 4)).order,
        ));
        if opts.exhaustive {
            out.push(Check::from_result(
                "Klein quartic over F_11, exhaustive",
                168,
                klein_quartic_f11().and_then(|k| exhaustive_aut(&k, opts.budget)).map(|g| g.order),
            ));
            out.push(Check::from_result(
                "Fermat quartic over F_13, exhaustive",
                96,
                exhaustive_aut(&HomPoly::fermat(&f13, 4), opts.budget).map(|g| g.order),
            ));
        }
    }
    if d == 5 {
        match degree5_stabilizers(opts.seed) {
            Ok(rows) => {
                for (r, g) in rows {
                    out.push(Check::new(format!("full group: {}", r.name), r.expected, g.order));
                }
            }
            Err(e) => out.push(Check::new("degree-5 full groups", "ok", format!("error: {e}"))),
        }
    }
    if d == 6 {
        out.push(Check::new(
            "order-144 group of X^6+Y^5Z+YZ^5",
            "unverified (no generators beyond the order-48 subgroup)",
            "unverified (no generators beyond the order-48 subgroup)",
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presentations() {
        for (d, n) in [(5, 30), (7, 70), (8, 96), (9, 126), (6, 48)] {
            assert_eq!(dihedral_type_check(d).unwrap(), (true, n), "d={d}");
        }
        assert_eq!(klein_type_check(5).unwrap(), (true, 39));
        assert_eq!(klein_type_check(4).unwrap(), (true, 21));
    }

    #[test]
    fn large_orders_collapse() {
        for d in 5..=9 {
            assert!(large_order_checks(d).iter().all(|c| c.pass), "d={d}");
        }
    }

    #[test]
    fn degree5_full_groups() {
        for (r, g) in degree5_stabilizers(7).unwrap() {
            assert_eq!(g.order, r.expected, "{}", r.name);
        }
    }

    #[test]
    fn all_checks_pass() {
        let opts = VerifyOptions::default();
        for d in 4..=9 {
            for c in verify_degree(d, &opts) {
                assert!(c.pass, "d={d} {}: expected {} got {}", c.name, c.expected, c.got);
            }
        }
    }

    #[test]
    fn exhaustive_quartics() {
        let opts = VerifyOptions { exhaustive: true, ..VerifyOptions::default() };
        let checks = verify_degree(4, &opts);
        let ex: Vec<&Check> = checks.iter().filter(|c| c.name.contains("exhaustive")).collect();
        assert_eq!(ex.len(), 2);
        for c in ex {
            assert!(c.pass, "{}: expected {} got {}", c.name, c.expected, c.got);
        }
    }
}
