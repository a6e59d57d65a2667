//! Finite subgroups of PGL_3(F_p).

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{ExtField, Field, PrimeField};
use crate::linalg;
use crate::poly::{is_invariant, normalize_point, projective_points, HomPoly, Monomial};

/// A projective class of invertible 3x3 matrices, stored with its first nonzero
/// entry (row-major) equal to 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ProjMatrix {
    e: [[u64; 3]; 3],
}

impl fmt::Display for ProjMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .e
            .iter()
            .map(|r| format!("{},{},{}", r[0], r[1], r[2]))
            .collect();
        write!(f, "[{}]", rows.join(";"))
    }
}

impl ProjMatrix {
    pub fn new(f: &PrimeField, e: [[u64; 3]; 3]) -> Result<Self> {
        let e = e.map(|r| r.map(|x| x % f.p()));
        if linalg::det(f, &e) == 0 {
            return Err(Error::Domain("matrix is singular".into()));
        }
        Ok(Self::canonical(f, e))
    }

    fn canonical(f: &PrimeField, e: [[u64; 3]; 3]) -> Self {
        let lead = *e.iter().flatten().find(|&&x| x != 0).expect("nonzero matrix");
        let inv = f.inv(&lead).unwrap();
        ProjMatrix {
            e: e.map(|r| r.map(|x| f.mul(&x, &inv))),
        }
    }

    pub fn identity() -> Self {
        ProjMatrix {
            e: [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        }
    }

    pub fn diag(f: &PrimeField, d: [u64; 3]) -> Self {
        Self::new(f, [[d[0], 0, 0], [0, d[1], 0], [0, 0, d[2]]]).expect("nonzero diagonal")
    }

    /// `[c0 V0; c1 V1; c2 V2]`: the variable X is replaced by `c0 * vars[0]`, etc.
    pub fn monomial(f: &PrimeField, vars: [usize; 3], coeffs: [u64; 3]) -> Result<Self> {
        let mut e = [[0u64; 3]; 3];
        for r in 0..3 {
            e[r][vars[r]] = coeffs[r];
        }
        Self::new(f, e)
    }

    /// Coordinate permutation; `permutation(f, [1, 2, 0])` is `[Y; Z; X]`.
    pub fn permutation(f: &PrimeField, vars: [usize; 3]) -> Self {
        Self::monomial(f, vars, [1, 1, 1]).expect("a permutation of the coordinates")
    }

    pub fn entries(&self) -> &[[u64; 3]; 3] {
        &self.e
    }

    pub fn det(&self, f: &PrimeField) -> u64 {
        linalg::det(f, &self.e)
    }

    pub fn mul(&self, other: &ProjMatrix, f: &PrimeField) -> ProjMatrix {
        Self::canonical(f, linalg::mul(f, &self.e, &other.e))
    }

    pub fn inverse(&self, f: &PrimeField) -> ProjMatrix {
        Self::canonical(f, linalg::inverse(f, &self.e).expect("invertible"))
    }

    pub fn pow(&self, f: &PrimeField, k: i64) -> ProjMatrix {
        let base = if k < 0 { self.inverse(f) } else { *self };
        let mut e = k.unsigned_abs();
        let mut acc = ProjMatrix::identity();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b, f);
            }
            b = b.mul(&b, f);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == ProjMatrix::identity()
    }

    /// Least k >= 1 with `M^k` scalar, searching up to `bound`.
    pub fn order(&self, f: &PrimeField, bound: u64) -> Option<u64> {
        let mut acc = *self;
        for k in 1..=bound {
            if acc.is_identity() {
                return Some(k);
            }
            acc = acc.mul(self, f);
        }
        None
    }

    pub fn is_diagonal(&self) -> bool {
        (0..3).all(|r| (0..3).all(|c| r == c || self.e[r][c] == 0))
    }

    /// Image `M v` of a point with coordinates in an extension.
    pub fn apply<K: Field>(&self, k: &K, v: &[K::Elem; 3]) -> [K::Elem; 3] {
        linalg::apply(k, &linalg::lift(k, &self.e), v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupClosure {
    pub elements: Vec<ProjMatrix>,
    pub order: usize,
    /// element order -> number of elements of that order
    pub order_histogram: BTreeMap<u64, usize>,
}

impl GroupClosure {
    fn from_elements(f: &PrimeField, mut elements: Vec<ProjMatrix>) -> Self {
        elements.sort();
        let n = elements.len() as u64;
        let mut hist = BTreeMap::new();
        for g in &elements {
            let o = g.order(f, n).expect("element order divides the group order");
            *hist.entry(o).or_insert(0) += 1;
        }
        GroupClosure {
            order: elements.len(),
            elements,
            order_histogram: hist,
        }
    }

    pub fn contains(&self, g: &ProjMatrix) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &GroupClosure) -> bool {
        self.elements.iter().all(|g| other.contains(g))
    }

    pub fn is_cyclic(&self) -> bool {
        self.order_histogram.contains_key(&(self.order as u64))
    }

    pub fn is_abelian(&self, f: &PrimeField) -> bool {
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| a.mul(b, f) == b.mul(a, f)))
    }
}

/// Subgroup generated by `gens` (Dimino's coset enumeration).
pub fn closure(f: &PrimeField, gens: &[ProjMatrix], bound: usize) -> Result<GroupClosure> {
    let id = ProjMatrix::identity();
    let mut elements = vec![id];
    let mut seen: HashSet<ProjMatrix> = HashSet::from([id]);
    let mut used: Vec<ProjMatrix> = Vec::new();
    for g in gens {
        used.push(*g);
        if seen.contains(g) {
            continue;
        }
        let sub = elements.clone();
        let mut reps = vec![*g];
        let push_coset = |r: &ProjMatrix, elements: &mut Vec<ProjMatrix>, seen: &mut HashSet<ProjMatrix>| {
            for h in &sub {
                let x = h.mul(r, f);
                seen.insert(x);
                elements.push(x);
            }
            elements.len()
        };
        if push_coset(g, &mut elements, &mut seen) > bound {
            return Err(Error::TooLarge(bound));
        }
        let mut i = 0;
        while i < reps.len() {
            let r = reps[i];
            for s in &used {
                let x = r.mul(s, f);
                if !seen.contains(&x) {
                    if push_coset(&x, &mut elements, &mut seen) > bound {
                        return Err(Error::TooLarge(bound));
                    }
                    reps.push(x);
                }
            }
            i += 1;
        }
    }
    Ok(GroupClosure::from_elements(f, elements))
}

fn ext_gcd_i(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd_i(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Solutions of `a v ≡ b (mod n)` as `v ≡ r (mod m)`.
fn solve_linear(a: i128, b: i128, n: i128) -> Option<(i128, i128)> {
    let a = a.rem_euclid(n);
    let b = b.rem_euclid(n);
    let (g, x, _) = ext_gcd_i(a, n);
    if b % g != 0 {
        return None;
    }
    let m = n / g;
    Some(((x * (b / g)).rem_euclid(m), m))
}

/// Intersection of two residue classes.
fn crt(r1: i128, m1: i128, r2: i128, m2: i128) -> Option<(i128, i128)> {
    let (g, x, _) = ext_gcd_i(m1, m2);
    if (r2 - r1) % g != 0 {
        return None;
    }
    let l = m1 / g * m2;
    let t = ((r2 - r1) / g * x).rem_euclid(m2 / g);
    Some(((r1 + m1 * t).rem_euclid(l), l))
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// All maps `(permutation) ∘ diag(1, u, v)` over F_p that fix the form up to a scalar.
pub fn monomial_stabilizer(form: &HomPoly) -> GroupClosure {
    let f = form.field();
    let n = (f.p() - 1) as i128;
    let terms: Vec<(Monomial, u64)> = form.terms().iter().map(|(m, c)| (*m, *c)).collect();
    let support: HashSet<Monomial> = terms.iter().map(|t| t.0).collect();
    let lg = |c: u64| f.discrete_log(c).unwrap() as i128;
    let mut found: Vec<ProjMatrix> = Vec::new();
    for perm in PERMS {
        if !terms.iter().all(|(m, _)| support.contains(&m.permute(perm))) {
            continue;
        }
        // log f_m + j U + k V ≡ Λ + log f_{π m}
        let eqs: Vec<(i128, i128, i128)> = terms
            .iter()
            .map(|(m, c)| {
                let rhs = lg(form.coeff(&m.permute(perm))) - lg(*c);
                (m.j as i128, m.k as i128, rhs)
            })
            .collect();
        let (j0, k0, c0) = eqs[0];
        for u in 0..n {
            let mut class = Some((0i128, 1i128));
            for &(j, k, c) in &eqs[1..] {
                let Some((r, m)) = class else { break };
                class = solve_linear(k - k0, c - c0 - (j - j0) * u, n)
                    .and_then(|(r2, m2)| crt(r, m, r2, m2));
            }
            let Some((r, m)) = class else { continue };
            let mut v = r;
            while v < n {
                let coeffs = [1, f.exp(u as u64), f.exp(v as u64)];
                found.push(ProjMatrix::monomial(f, perm, coeffs).unwrap());
                v += m;
            }
        }
    }
    found.sort();
    found.dedup();
    debug_assert!(found.iter().all(|g| is_invariant(form, g).is_some()));
    GroupClosure::from_elements(f, found)
}

/// A word in named generators, parsed from e.g. `"(t s)^2 s^3"` or `"s t s = t^-4"`.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Word {
    Gen(String),
    Pow(Box<Word>, i64),
    Seq(Vec<Word>),
}

fn parse_word(s: &str) -> Result<Word> {
    let toks: Vec<char> = s.chars().collect();
    let mut pos = 0;
    let w = parse_seq(&toks, &mut pos)?;
    if pos != toks.len() {
        return Err(Error::Parse(format!("unexpected {:?} in {s:?}", toks[pos])));
    }
    Ok(w)
}

fn parse_seq(t: &[char], pos: &mut usize) -> Result<Word> {
    let mut items = Vec::new();
    loop {
        while *pos < t.len() && t[*pos].is_whitespace() {
            *pos += 1;
        }
        if *pos >= t.len() || t[*pos] == ')' {
            break;
        }
        let atom = if t[*pos] == '(' {
            *pos += 1;
            let inner = parse_seq(t, pos)?;
            if *pos >= t.len() || t[*pos] != ')' {
                return Err(Error::Parse("unbalanced parenthesis".into()));
            }
            *pos += 1;
            inner
        } else if t[*pos].is_alphanumeric() || t[*pos] == '_' {
            let start = *pos;
            while *pos < t.len() && (t[*pos].is_alphanumeric() || t[*pos] == '_') {
                *pos += 1;
            }
            Word::Gen(t[start..*pos].iter().collect())
        } else {
            return Err(Error::Parse(format!("unexpected {:?}", t[*pos])));
        };
        let atom = if *pos < t.len() && t[*pos] == '^' {
            *pos += 1;
            let start = *pos;
            if *pos < t.len() && t[*pos] == '-' {
                *pos += 1;
            }
            while *pos < t.len() && t[*pos].is_ascii_digit() {
                *pos += 1;
            }
            let e: i64 = t[start..*pos]
                .iter()
                .collect::<String>()
                .parse()
                .map_err(|_| Error::Parse("bad exponent".into()))?;
            Word::Pow(Box::new(atom), e)
        } else {
            atom
        };
        items.push(atom);
    }
    Ok(Word::Seq(items))
}

fn eval_word(f: &PrimeField, w: &Word, gens: &HashMap<&str, ProjMatrix>) -> Result<ProjMatrix> {
    match w {
        Word::Gen(name) => gens
            .get(name.as_str())
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown generator {name}"))),
        Word::Pow(inner, e) => Ok(eval_word(f, inner, gens)?.pow(f, *e)),
        Word::Seq(items) => items.iter().try_fold(ProjMatrix::identity(), |acc, x| {
            Ok(acc.mul(&eval_word(f, x, gens)?, f))
        }),
    }
}

/// Evaluates a relation `lhs` or `lhs = rhs`; true iff it holds projectively.
pub fn relation_holds(f: &PrimeField, gens: &[(&str, ProjMatrix)], relation: &str) -> Result<bool> {
    let map: HashMap<&str, ProjMatrix> = gens.iter().copied().collect();
    let mut sides = relation.split('=');
    let lhs = eval_word(f, &parse_word(sides.next().unwrap_or(""))?, &map)?;
    let rhs = match sides.next() {
        Some(r) => eval_word(f, &parse_word(r)?, &map)?,
        None => ProjMatrix::identity(),
    };
    if sides.next().is_some() {
        return Err(Error::Parse(format!("more than one '=' in {relation:?}")));
    }
    Ok(lhs == rhs)
}

/// True iff every relation holds and the generated group has exactly `expected_order` elements.
pub fn verify_presentation(
    f: &PrimeField,
    gens: &[(&str, ProjMatrix)],
    relations: &[&str],
    expected_order: usize,
) -> Result<bool> {
    for r in relations {
        if !relation_holds(f, gens, r)? {
            return Ok(false);
        }
    }
    let mats: Vec<ProjMatrix> = gens.iter().map(|g| g.1).collect();
    match closure(f, &mats, expected_order) {
        Ok(g) => Ok(g.order == expected_order),
        Err(Error::TooLarge(_)) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Generators S, T, U, V of the order-216 Hessian group; needs p ≡ 1 (mod 3).
pub fn hessian_generators(f: &PrimeField) -> Result<[ProjMatrix; 4]> {
    let w = f.root_of_unity(3)?;
    let w2 = f.mul(&w, &w);
    let s = ProjMatrix::diag(f, [1, w, w2]);
    let t = ProjMatrix::permutation(f, [1, 2, 0]);
    let u = ProjMatrix::diag(f, [1, 1, w]);
    let v = ProjMatrix::new(f, [[1, 1, 1], [1, w, w2], [1, w2, w]])?;
    Ok([s, t, u, v])
}

/// `[ξX;Y;Z], [X;ξY;Z], [X;Z;Y], [Y;Z;X]` with ξ of order d; the Fermat group of order 6d².
pub fn fermat_generators(f: &PrimeField, d: u32) -> Result<Vec<ProjMatrix>> {
    let xi = f.root_of_unity(d as u64)?;
    Ok(vec![
        ProjMatrix::diag(f, [xi, 1, 1]),
        ProjMatrix::diag(f, [1, xi, 1]),
        ProjMatrix::permutation(f, [0, 2, 1]),
        ProjMatrix::permutation(f, [1, 2, 0]),
    ])
}

/// Generators `τ = [X; ζY; ζ^{-(d-2)}Z]` (ζ of order d²-3d+3) and `σ = [Z; X; Y]`
/// of the automorphism group of `X^{d-1}Y + Y^{d-1}Z + Z^{d-1}X`.
pub fn klein_generators(f: &PrimeField, d: u32) -> Result<[(&'static str, ProjMatrix); 2]> {
    let n = (d * d - 3 * d + 3) as u64;
    let z = f.root_of_unity(n)?;
    let zi = f.inv(&z).unwrap();
    let tau = ProjMatrix::diag(f, [1, z, f.pow(&zi, (d - 2) as u64)]);
    let sigma = ProjMatrix::permutation(f, [2, 0, 1]);
    Ok([("t", tau), ("s", sigma)])
}

pub fn klein_relations(d: u32) -> Vec<String> {
    let n = d * d - 3 * d + 3;
    vec![
        format!("t^{n}"),
        "s^3".to_string(),
        format!("t s = s t^-{}", d - 1),
    ]
}

/// Generators `σ = [X; Z; Y]` and `τ = [X; ζY; ζ^{-(d-1)}Z]` (ζ of order d(d-2))
/// for `X^d + Y^{d-1}Z + YZ^{d-1}`.
pub fn dihedral_type_generators(f: &PrimeField, d: u32) -> Result<[(&'static str, ProjMatrix); 2]> {
    let n = (d * (d - 2)) as u64;
    let z = f.root_of_unity(n)?;
    let zi = f.inv(&z).unwrap();
    let tau = ProjMatrix::diag(f, [1, z, f.pow(&zi, (d - 1) as u64)]);
    let sigma = ProjMatrix::permutation(f, [0, 2, 1]);
    Ok([("s", sigma), ("t", tau)])
}

pub fn dihedral_type_relations(d: u32) -> Vec<String> {
    vec![
        "s^2".to_string(),
        format!("t^{}", d * (d - 2)),
        format!("s t s = t^-{}", d - 1),
    ]
}

fn in_general_position<K: Field>(k: &K, pts: &[[K::Elem; 3]; 4]) -> bool {
    linalg::frame_matrix(k, pts).is_some()
}

fn is_rational(k: &ExtField, pt: &[Vec<u64>; 3]) -> bool {
    pt.iter().all(|c| k.is_prime_subfield(c))
}

fn frobenius_point(k: &ExtField, pt: &[Vec<u64>; 3]) -> [Vec<u64>; 3] {
    let p = k.characteristic();
    pt.clone().map(|c| k.pow(&c, p))
}

/// Size of the candidate space `exhaustive_aut` would search, and the frame it would use.
struct FramePlan {
    /// number of rational points in the frame (4, 2 or 0); the rest are conjugate pairs
    rational: usize,
    frame: [[Vec<u64>; 3]; 4],
    candidates: u64,
}

fn plan_frame(k: &ExtField, rat: &[[Vec<u64>; 3]], nonrat: &[[Vec<u64>; 3]]) -> Option<FramePlan> {
    let nr = rat.len() as u64;
    let nn = nonrat.len() as u64;
    let mut plans = Vec::new();
    // two conjugate pairs
    'pairs: for a in nonrat.iter().take(64) {
        for b in nonrat.iter().take(64) {
            let fr = [a.clone(), frobenius_point(k, a), b.clone(), frobenius_point(k, b)];
            if in_general_position(k, &fr) {
                plans.push(FramePlan {
                    rational: 0,
                    frame: fr,
                    candidates: nn * nn,
                });
                break 'pairs;
            }
        }
    }
    // two rational points and a pair
    'mixed: for (i, a) in rat.iter().enumerate().take(32) {
        for b in rat.iter().skip(i + 1).take(32) {
            for c in nonrat.iter().take(64) {
                let fr = [a.clone(), b.clone(), c.clone(), frobenius_point(k, c)];
                if in_general_position(k, &fr) {
                    plans.push(FramePlan {
                        rational: 2,
                        frame: fr,
                        candidates: nr * nr.saturating_sub(1) * nn,
                    });
                    break 'mixed;
                }
            }
        }
    }
    // four rational points
    let r: Vec<&[Vec<u64>; 3]> = rat.iter().take(24).collect();
    'four: for a in 0..r.len() {
        for b in a + 1..r.len() {
            for c in b + 1..r.len() {
                for d in c + 1..r.len() {
                    let fr = [r[a].clone(), r[b].clone(), r[c].clone(), r[d].clone()];
                    if in_general_position(k, &fr) {
                        plans.push(FramePlan {
                            rational: 4,
                            frame: fr,
                            candidates: nr * (nr - 1) * (nr - 2) * (nr - 3),
                        });
                        break 'four;
                    }
                }
            }
        }
    }
    plans.into_iter().min_by_key(|p| p.candidates)
}

/// All F_p-rational projective automorphisms of the curve, by brute force over
/// images of a projective frame of curve points. Frames use rational points and
/// conjugate pairs of F_{p²}-points, which any F_p-rational automorphism must
/// permute. `budget` caps the number of candidate frames.
pub fn exhaustive_aut(form: &HomPoly, budget: u64) -> Result<GroupClosure> {
    let f = form.field();
    let k = ExtField::new(f, 2)?;
    let mut rat = Vec::new();
    let mut nonrat = Vec::new();
    for pt in projective_points(&k) {
        if k.is_zero(&form.eval_in(&k, &pt)) {
            if is_rational(&k, &pt) {
                rat.push(pt);
            } else {
                nonrat.push(pt);
            }
        }
    }
    let plan = plan_frame(&k, &rat, &nonrat)
        .ok_or_else(|| Error::Domain("no projective frame of curve points over F_p²".into()))?;
    if plan.candidates > budget {
        return Err(Error::BudgetExceeded {
            budget,
            needed: plan.candidates,
        });
    }
    let all: HashSet<[Vec<u64>; 3]> = rat.iter().chain(nonrat.iter()).cloned().collect();
    let probes: Vec<[Vec<u64>; 3]> = rat
        .iter()
        .chain(nonrat.iter())
        .filter(|p| !plan.frame.contains(p))
        .take(8)
        .cloned()
        .collect();
    let src = linalg::frame_matrix(&k, &plan.frame).unwrap();
    let src_inv = linalg::inverse(&k, &src).unwrap();

    let mut found: HashSet<ProjMatrix> = HashSet::new();
    let mut consider = |images: [[Vec<u64>; 3]; 4]| {
        let Some(dst) = linalg::frame_matrix(&k, &images) else {
            return;
        };
        let m = linalg::mul(&k, &dst, &src_inv);
        let lead = m.iter().flatten().find(|x| !k.is_zero(x)).unwrap().clone();
        let li = k.inv(&lead).unwrap();
        let m = m.map(|r| r.map(|x| k.mul(&x, &li)));
        if !m.iter().flatten().all(|x| k.is_prime_subfield(x)) {
            return;
        }
        for pr in &probes {
            let img = normalize_point(&k, &linalg::apply(&k, &m, pr));
            if !all.contains(&img) {
                return;
            }
        }
        let pm = ProjMatrix::new(f, m.map(|r| r.map(|x| x[0]))).unwrap();
        if is_invariant(form, &pm).is_some() {
            found.insert(pm);
        }
    };
    match plan.rational {
        0 => {
            for a in &nonrat {
                for b in &nonrat {
                    consider([a.clone(), frobenius_point(&k, a), b.clone(), frobenius_point(&k, b)]);
                }
            }
        }
        2 => {
            for a in &rat {
                for b in &rat {
                    if a == b {
                        continue;
                    }
                    for c in &nonrat {
                        consider([a.clone(), b.clone(), c.clone(), frobenius_point(&k, c)]);
                    }
                }
            }
        }
        _ => {
            for a in &rat {
                for b in &rat {
                    if a == b {
                        continue;
                    }
                    for c in &rat {
                        if c == a || c == b {
                            continue;
                        }
                        for d in &rat {
                            if d == a || d == b || d == c {
                                continue;
                            }
                            consider([a.clone(), b.clone(), c.clone(), d.clone()]);
                        }
                    }
                }
            }
        }
    }
    let elements: Vec<ProjMatrix> = found.into_iter().collect();
    Ok(GroupClosure::from_elements(f, elements))
}
