//! Homogeneous ternary forms over F_p and exact smoothness testing.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::autgrp::ProjMatrix;
use crate::error::{Error, Result};
use crate::ff::{ExtField, Field, PrimeField};
use crate::upoly;

/// `X^i Y^j Z^k`. Ordered with higher powers of X first, then of Y.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
    pub k: u32,
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .i
            .cmp(&self.i)
            .then(other.j.cmp(&self.j))
            .then(other.k.cmp(&self.k))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub const fn new(i: u32, j: u32, k: u32) -> Self {
        Monomial { i, j, k }
    }

    pub fn from_exps(e: [u32; 3]) -> Self {
        Monomial::new(e[0], e[1], e[2])
    }

    pub fn exps(&self) -> [u32; 3] {
        [self.i, self.j, self.k]
    }

    pub fn degree(&self) -> u32 {
        self.i + self.j + self.k
    }

    /// Largest single-variable exponent.
    pub fn exponent(&self) -> u32 {
        self.i.max(self.j).max(self.k)
    }

    /// Monomial obtained by sending variable `v` to variable `perm[v]`.
    pub fn permute(&self, perm: [usize; 3]) -> Self {
        let e = self.exps();
        let mut out = [0; 3];
        for v in 0..3 {
            out[perm[v]] = e[v];
        }
        Monomial::from_exps(out)
    }

    /// All monomials of degree d in the canonical order.
    pub fn all(d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for i in (0..=d).rev() {
            for j in (0..=d - i).rev() {
                out.push(Monomial::new(i, j, d - i - j));
            }
        }
        out
    }

    /// Parses `X^2YZ^3`, `XZ^4`, `1`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::new(0, 0, 0));
        }
        let mut e = [0u32; 3];
        let mut chars = s.chars().peekable();
        let mut seen = [false; 3];
        while let Some(c) = chars.next() {
            let v = match c {
                'X' | 'x' => 0,
                'Y' | 'y' => 1,
                'Z' | 'z' => 2,
                _ => return Err(Error::Parse(format!("bad monomial {s:?}"))),
            };
            if seen[v] {
                return Err(Error::Parse(format!("repeated variable in {s:?}")));
            }
            seen[v] = true;
            let mut pow = 1;
            if chars.peek() == Some(&'^') {
                chars.next();
                let mut digits = String::new();
                while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                    digits.push(*d);
                    chars.next();
                }
                pow = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?;
            }
            e[v] = pow;
        }
        Ok(Monomial::from_exps(e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(f, "1");
        }
        for (v, e) in ["X", "Y", "Z"].iter().zip(self.exps()) {
            match e {
                0 => {}
                1 => write!(f, "{v}")?,
                _ => write!(f, "{v}^{e}")?,
            }
        }
        Ok(())
    }
}

/// A homogeneous form of degree `d` in X, Y, Z over F_p.
#[derive(Clone)]
pub struct HomPoly {
    field: PrimeField,
    d: u32,
    terms: BTreeMap<Monomial, u64>,
}

impl PartialEq for HomPoly {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.d == other.d && self.terms == other.terms
    }
}

impl Eq for HomPoly {}

impl fmt::Debug for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {:?}", self, self.field)
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (m, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            if *c != 1 || m.degree() == 0 {
                if m.degree() == 0 {
                    write!(f, "{c}")?;
                    continue;
                }
                write!(f, "{c}*")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl HomPoly {
    pub fn zero(field: &PrimeField, d: u32) -> Self {
        HomPoly {
            field: field.clone(),
            d,
            terms: BTreeMap::new(),
        }
    }

    /// Sums the given terms; coefficients are reduced mod p and zeros dropped.
    pub fn from_terms<I>(field: &PrimeField, d: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, u64)>,
    {
        let mut f = HomPoly::zero(field, d);
        for (m, c) in terms {
            if m.degree() != d {
                return Err(Error::DegreeMismatch {
                    expected: d,
                    got: m.degree(),
                });
            }
            f.add_term(m, c);
        }
        Ok(f)
    }

    pub fn fermat(field: &PrimeField, d: u32) -> Self {
        HomPoly::from_terms(
            field,
            d,
            [(Monomial::new(d, 0, 0), 1), (Monomial::new(0, d, 0), 1), (Monomial::new(0, 0, d), 1)],
        )
        .unwrap()
    }

    /// `X^{d-1}Y + Y^{d-1}Z + Z^{d-1}X`.
    pub fn klein(field: &PrimeField, d: u32) -> Self {
        HomPoly::from_terms(
            field,
            d,
            [
                (Monomial::new(d - 1, 1, 0), 1),
                (Monomial::new(0, d - 1, 1), 1),
                (Monomial::new(1, 0, d - 1), 1),
            ],
        )
        .unwrap()
    }

    pub fn add_term(&mut self, m: Monomial, c: u64) {
        debug_assert_eq!(m.degree(), self.d);
        let f = &self.field;
        let c = c % f.p();
        let entry = self.terms.entry(m).or_insert(0);
        *entry = f.add(entry, &c);
        if *entry == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn degree(&self) -> u32 {
        self.d
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, u64> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> u64 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn support(&self) -> Vec<Monomial> {
        self.terms.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: u64) -> HomPoly {
        let mut out = HomPoly::zero(&self.field, self.d);
        for (m, v) in &self.terms {
            out.add_term(*m, self.field.mul(v, &(c % self.field.p())));
        }
        out
    }

    pub fn add(&self, other: &HomPoly) -> HomPoly {
        assert_eq!(self.d, other.d);
        let mut out = self.clone();
        for (m, v) in &other.terms {
            out.add_term(*m, *v);
        }
        out
    }

    pub fn mul(&self, other: &HomPoly) -> HomPoly {
        let f = &self.field;
        let mut out = HomPoly::zero(f, self.d + other.d);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = Monomial::new(m1.i + m2.i, m1.j + m2.j, m1.k + m2.k);
                out.add_term(m, f.mul(c1, c2));
            }
        }
        out
    }

    pub fn eval(&self, pt: &[u64; 3]) -> u64 {
        self.eval_in(&self.field, pt)
    }

    /// Evaluates at a point with coordinates in an extension field.
    pub fn eval_in<K: Field>(&self, k: &K, pt: &[K::Elem; 3]) -> K::Elem {
        let d = self.d as usize;
        let pows: Vec<Vec<K::Elem>> = pt
            .iter()
            .map(|x| {
                let mut v = Vec::with_capacity(d + 1);
                v.push(k.one());
                for n in 1..=d {
                    let next = k.mul(&v[n - 1], x);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = k.zero();
        for (m, c) in &self.terms {
            let t = k.mul(
                &k.mul(&pows[0][m.i as usize], &pows[1][m.j as usize]),
                &pows[2][m.k as usize],
            );
            acc = k.add(&acc, &k.mul(&t, &k.from_u64(*c)));
        }
        acc
    }

    /// Univariate polynomial `s -> F(lin[0](s), lin[1](s), lin[2](s))` where
    /// each coordinate is the linear polynomial `lin[c][0] + lin[c][1] s`.
    pub fn substitute_linear<K: Field>(&self, k: &K, lin: &[[K::Elem; 2]; 3]) -> Vec<K::Elem> {
        let d = self.d as usize;
        let pows: Vec<Vec<Vec<K::Elem>>> = lin
            .iter()
            .map(|l| {
                let base = upoly::trim(k, l.to_vec());
                let mut v = vec![vec![k.one()]];
                for n in 1..=d {
                    let next = upoly::mul(k, &v[n - 1], &base);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = Vec::new();
        for (m, c) in &self.terms {
            let t = upoly::mul(
                k,
                &upoly::mul(k, &pows[0][m.i as usize], &pows[1][m.j as usize]),
                &pows[2][m.k as usize],
            );
            acc = upoly::add(k, &acc, &upoly::scale(k, &t, &k.from_u64(*c)));
        }
        acc
    }

    pub fn partials(&self) -> [HomPoly; 3] {
        partials(self)
    }
}

/// Formal partial derivatives `(F_X, F_Y, F_Z)`.
pub fn partials(f: &HomPoly) -> [HomPoly; 3] {
    let fld = &f.field;
    let dd = f.d.saturating_sub(1);
    let mut out = [
        HomPoly::zero(fld, dd),
        HomPoly::zero(fld, dd),
        HomPoly::zero(fld, dd),
    ];
    for (m, c) in &f.terms {
        let e = m.exps();
        for v in 0..3 {
            if e[v] == 0 {
                continue;
            }
            let mut e2 = e;
            e2[v] -= 1;
            out[v].add_term(Monomial::from_exps(e2), fld.mul(c, &fld.from_u64(e[v] as u64)));
        }
    }
    out
}

/// `F∘M`: each variable is replaced by the corresponding row of `M` applied to `(X, Y, Z)`.
pub fn apply_proj(f: &HomPoly, m: &ProjMatrix) -> Result<HomPoly> {
    let fld = &f.field;
    if m.det(fld) == 0 {
        return Err(Error::Domain("singular matrix".into()));
    }
    let rows: Vec<HomPoly> = (0..3)
        .map(|r| {
            HomPoly::from_terms(
                fld,
                1,
                (0..3).map(|c| {
                    let mut e = [0; 3];
                    e[c] = 1;
                    (Monomial::from_exps(e), m.entries()[r][c])
                }),
            )
            .unwrap()
        })
        .collect();
    let d = f.d as usize;
    let pows: Vec<Vec<HomPoly>> = rows
        .iter()
        .map(|l| {
            let mut v = vec![HomPoly::from_terms(fld, 0, [(Monomial::new(0, 0, 0), 1)]).unwrap()];
            for n in 1..=d {
                let next = v[n - 1].mul(l);
                v.push(next);
            }
            v
        })
        .collect();
    let mut out = HomPoly::zero(fld, f.d);
    for (mo, c) in &f.terms {
        let t = pows[0][mo.i as usize]
            .mul(&pows[1][mo.j as usize])
            .mul(&pows[2][mo.k as usize]);
        out = out.add(&t.scale(*c));
    }
    Ok(out)
}

/// The scalar λ with `F∘M = λF`, if any.
pub fn is_invariant(f: &HomPoly, m: &ProjMatrix) -> Option<u64> {
    let g = apply_proj(f, m).ok()?;
    let (mono, c) = f.terms.iter().next()?;
    let fld = &f.field;
    let lambda = fld.mul(&g.coeff(mono), &fld.inv(c)?);
    if lambda != 0 && g == f.scale(lambda) {
        Some(lambda)
    } else {
        None
    }
}

/// Terms whose single-variable exponent is maximal.
pub fn core(f: &HomPoly) -> HomPoly {
    let top = f.terms.keys().map(|m| m.exponent()).max().unwrap_or(0);
    HomPoly::from_terms(
        &f.field,
        f.d,
        f.terms
            .iter()
            .filter(|(m, _)| m.exponent() == top)
            .map(|(m, c)| (*m, *c)),
    )
    .unwrap()
}

/// A projective point with coordinates in the canonical `F_{p^degree}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ExtPoint {
    pub degree: u32,
    pub coords: [Vec<u64>; 3],
}

impl ExtPoint {
    pub fn from_field<K: Field>(k: &K, pt: &[K::Elem; 3]) -> Self {
        ExtPoint {
            degree: k.degree(),
            coords: [k.coords(&pt[0]), k.coords(&pt[1]), k.coords(&pt[2])],
        }
    }

    pub fn to_field(&self, k: &ExtField) -> [Vec<u64>; 3] {
        assert_eq!(k.degree(), self.degree);
        [
            k.from_coords(&self.coords[0]),
            k.from_coords(&self.coords[1]),
            k.from_coords(&self.coords[2]),
        ]
    }
}

impl fmt::Display for ExtPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |c: &Vec<u64>| {
            if c.iter().skip(1).all(|&x| x == 0) {
                c[0].to_string()
            } else {
                format!("{c:?}")
            }
        };
        write!(
            f,
            "({} : {} : {})",
            show(&self.coords[0]),
            show(&self.coords[1]),
            show(&self.coords[2])
        )?;
        if self.degree > 1 {
            write!(f, " over F_p^{}", self.degree)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
    /// A common zero of the three partials.
    Singular(ExtPoint),
}

impl Smoothness {
    pub fn is_smooth(&self) -> bool {
        matches!(self, Smoothness::Smooth)
    }
}

/// Points of P^2(K) normalised so that the first nonzero coordinate is 1.
pub fn projective_points<K: Field>(k: &K) -> Vec<[K::Elem; 3]> {
    let els = k.elements();
    let mut out = Vec::with_capacity(els.len() * els.len() + els.len() + 1);
    for a in &els {
        for b in &els {
            out.push([k.one(), a.clone(), b.clone()]);
        }
    }
    for b in &els {
        out.push([k.zero(), k.one(), b.clone()]);
    }
    out.push([k.zero(), k.zero(), k.one()]);
    out
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize_point<K: Field>(k: &K, pt: &[K::Elem; 3]) -> [K::Elem; 3] {
    let lead = pt.iter().find(|c| !k.is_zero(c)).expect("zero vector");
    let inv = k.inv(lead).unwrap();
    [k.mul(&pt[0], &inv), k.mul(&pt[1], &inv), k.mul(&pt[2], &inv)]
}

type Bivar = Vec<Vec<u64>>;

/// Dehomogenise at Y = 1: index by power of z, coefficients are polynomials in x.
fn to_xz(g: &HomPoly) -> Bivar {
    let fld = &g.field;
    let mut out: Bivar = Vec::new();
    for (m, c) in &g.terms {
        let k = m.k as usize;
        if out.len() <= k {
            out.resize(k + 1, Vec::new());
        }
        let row = &mut out[k];
        let i = m.i as usize;
        if row.len() <= i {
            row.resize(i + 1, 0);
        }
        row[i] = fld.add(&row[i], c);
    }
    for row in out.iter_mut() {
        *row = upoly::trim(fld, std::mem::take(row));
    }
    while out.last().is_some_and(|r| r.is_empty()) {
        out.pop();
    }
    out
}

fn bivar_axpy(fld: &PrimeField, a: &Bivar, lambda: u64, b: &Bivar) -> Bivar {
    let n = a.len().max(b.len());
    let mut out: Bivar = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_default();
            let y = b.get(i).map(|r| upoly::scale(fld, r, &lambda)).unwrap_or_default();
            upoly::add(fld, &x, &y)
        })
        .collect();
    while out.last().is_some_and(|r| r.is_empty()) {
        out.pop();
    }
    out
}

/// Fraction-free (Bareiss) determinant over F_p[x].
fn det_poly(fld: &PrimeField, mut m: Vec<Vec<Vec<u64>>>) -> Vec<u64> {
    let n = m.len();
    if n == 0 {
        return vec![1];
    }
    let mut negate = false;
    let mut prev: Vec<u64> = vec![1];
    for c in 0..n - 1 {
        if m[c][c].is_empty() {
            match (c + 1..n).find(|&r| !m[r][c].is_empty()) {
                Some(r) => {
                    m.swap(c, r);
                    negate = !negate;
                }
                None => return Vec::new(),
            }
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let t = upoly::sub(
                    fld,
                    &upoly::mul(fld, &m[i][j], &m[c][c]),
                    &upoly::mul(fld, &m[i][c], &m[c][j]),
                );
                m[i][j] = upoly::div_exact(fld, &t, &prev);
            }
            m[i][c] = Vec::new();
        }
        prev = m[c][c].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        upoly::scale(fld, &det, &fld.neg(&1))
    } else {
        det
    }
}

/// Sylvester resultant in z of two bivariate polynomials, as a polynomial in x.
/// When both have z-degree 0 this returns their gcd, which vanishes at exactly
/// the x where both vanish.
fn res_z(fld: &PrimeField, u: &Bivar, v: &Bivar) -> Vec<u64> {
    if u.is_empty() || v.is_empty() {
        return Vec::new();
    }
    let n1 = u.len() - 1;
    let n2 = v.len() - 1;
    if n1 == 0 && n2 == 0 {
        return upoly::gcd(fld, &u[0], &v[0]);
    }
    let size = n1 + n2;
    let mut m = vec![vec![Vec::new(); size]; size];
    for r in 0..n2 {
        for t in 0..=n1 {
            m[r][r + t] = u[n1 - t].clone();
        }
    }
    for r in 0..n1 {
        for t in 0..=n2 {
            m[n2 + r][r + t] = v[n2 - t].clone();
        }
    }
    det_poly(fld, m)
}

/// Sylvester resultant with respect to Z, returned as a binary form in X, Y of
/// degree `d1*n2 + d2*n1 - n1*n2` (n1, n2 the Z-degrees).
pub fn resultant_z(f: &HomPoly, g: &HomPoly) -> Result<HomPoly> {
    let fld = &f.field;
    let zdeg = |h: &HomPoly| h.terms.keys().map(|m| m.k).max();
    let (n1, n2) = match (zdeg(f), zdeg(g)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::Domain("resultant of the zero form".into())),
    };
    if n1 == 0 && n2 == 0 {
        return Err(Error::Domain("neither form involves Z".into()));
    }
    let r = res_z(fld, &to_xz(f), &to_xz(g));
    let dd = f.d * n2 + g.d * n1 - n1 * n2;
    HomPoly::from_terms(
        fld,
        dd,
        r.iter()
            .enumerate()
            .map(|(i, c)| (Monomial::new(i as u32, dd - i as u32, 0), *c)),
    )
}

fn eval_bivar_at_x<K: Field>(k: &K, u: &Bivar, x0: &K::Elem) -> Vec<K::Elem> {
    let out = u
        .iter()
        .map(|row| {
            let lifted: Vec<K::Elem> = row.iter().map(|c| k.from_u64(*c)).collect();
            upoly::eval(k, &lifted, x0)
        })
        .collect();
    upoly::trim(k, out)
}

fn gcd3<K: Field>(k: &K, a: &[K::Elem], b: &[K::Elem], c: &[K::Elem]) -> Vec<K::Elem> {
    upoly::gcd(k, &upoly::gcd(k, a, b), c)
}

/// Some root of a univariate polynomial over F_p of positive degree, in the
/// smallest canonical extension containing one.
fn some_root(fld: &PrimeField, g: &[u64]) -> (ExtField, Vec<u64>) {
    let q = upoly::irreducible_factors(fld, g)
        .into_iter()
        .min_by_key(|q| q.len())
        .expect("positive degree");
    let l = ExtField::new(fld, (q.len() - 1) as u32).unwrap();
    let lifted: Vec<Vec<u64>> = q.iter().map(|c| l.from_u64(*c)).collect();
    let r = upoly::roots(&l, &lifted)[0].clone();
    (l, r)
}

/// Singular point of the chart Y = 1 lying over a root of the irreducible `q`.
fn chart_witness(fld: &PrimeField, q: &[u64], polys: &[Bivar; 3]) -> Option<ExtPoint> {
    let kq = q.len() as u32 - 1;
    for t in 1..=polys.iter().map(|p| p.len() as u32).max().unwrap_or(1).max(1) {
        let l = ExtField::new(fld, kq * t).ok()?;
        let lifted: Vec<Vec<u64>> = q.iter().map(|c| l.from_u64(*c)).collect();
        let x0 = upoly::roots(&l, &lifted).into_iter().next()?;
        let [a, b, c] = polys.each_ref().map(|p| eval_bivar_at_x(&l, p, &x0));
        let g = gcd3(&l, &a, &b, &c);
        if g.is_empty() {
            return Some(ExtPoint::from_field(&l, &[x0, l.one(), l.zero()]));
        }
        if let Some(z0) = upoly::roots(&l, &g).into_iter().next() {
            return Some(ExtPoint::from_field(&l, &[x0, l.one(), z0]));
        }
    }
    None
}

/// Search for a common zero on the lines x = x0 in small extensions. Used when the
/// partials share a curve component, so singular points are plentiful.
fn probe_witness(fld: &PrimeField, polys: &[Bivar; 3]) -> Option<ExtPoint> {
    for e in 1..=4 {
        let l = ExtField::new(fld, e).ok()?;
        for x0 in l.elements().into_iter().take(4096) {
            let [a, b, c] = polys.each_ref().map(|p| eval_bivar_at_x(&l, p, &x0));
            let g = gcd3(&l, &a, &b, &c);
            if g.is_empty() {
                return Some(ExtPoint::from_field(&l, &[x0, l.one(), l.zero()]));
            }
            if let Some(z0) = upoly::roots(&l, &g).into_iter().next() {
                return Some(ExtPoint::from_field(&l, &[x0, l.one(), z0]));
            }
        }
    }
    None
}

/// Decides whether the partials have a common zero over the algebraic closure.
///
/// The chart Y = 1 is handled by eliminating z with resultants and testing each
/// irreducible factor of the result exactly in `F_p[x]/(q)`; the line Y = 0 is
/// handled directly.
pub fn is_smooth(f: &HomPoly) -> Result<Smoothness> {
    let fld = &f.field;
    let p = fld.p();
    if f.d == 0 || (f.d as u64).is_multiple_of(p) {
        return Err(Error::UnsupportedCharacteristic { p, d: f.d });
    }
    if f.is_zero() {
        return Err(Error::Domain("zero form".into()));
    }
    let parts = partials(f);
    let one = ExtField::new(fld, 1)?;
    let rational = |pt: [u64; 3]| ExtPoint {
        degree: 1,
        coords: [vec![pt[0]], vec![pt[1]], vec![pt[2]]],
    };

    if parts.iter().all(|g| g.eval(&[0, 0, 1]) == 0) {
        return Ok(Smoothness::Singular(rational([0, 0, 1])));
    }

    // line Y = 0, points (1 : 0 : z)
    let on_line: Vec<Vec<u64>> = parts
        .iter()
        .map(|g| {
            let mut v = vec![0u64; f.d as usize];
            for (m, c) in g.terms() {
                if m.j == 0 {
                    v[m.k as usize] = fld.add(&v[m.k as usize], c);
                }
            }
            upoly::trim(fld, v)
        })
        .collect();
    let g_line = gcd3(fld, &on_line[0], &on_line[1], &on_line[2]);
    if g_line.is_empty() {
        return Ok(Smoothness::Singular(rational([1, 0, 0])));
    }
    if g_line.len() > 1 {
        let (l, z0) = some_root(fld, &g_line);
        return Ok(Smoothness::Singular(ExtPoint::from_field(
            &l,
            &[l.one(), l.zero(), z0],
        )));
    }

    // chart Y = 1
    let polys: [Bivar; 3] = parts.each_ref().map(to_xz);
    let nonzero: Vec<usize> = (0..3).filter(|&v| !polys[v].is_empty()).collect();
    let candidates: Option<Vec<u64>> = match nonzero.len() {
        0 => return Err(Error::Domain("all partials vanish".into())),
        1 => None,
        _ => {
            let u = &polys[nonzero[0]];
            let v = &polys[nonzero[1]];
            let w = nonzero.get(2).map(|&i| &polys[i]);
            let tries = match w {
                Some(_) => (f.d as u64 + 1).min(p),
                None => 1,
            };
            let mut acc: Option<Vec<u64>> = None;
            let mut found = 0;
            for lambda in 0..tries {
                let vv = match w {
                    Some(w) => bivar_axpy(fld, v, lambda, w),
                    None => v.clone(),
                };
                let r = res_z(fld, u, &vv);
                if r.is_empty() {
                    continue;
                }
                acc = Some(match acc {
                    None => r,
                    Some(a) => upoly::gcd(fld, &a, &r),
                });
                found += 1;
                if found == 2 {
                    break;
                }
            }
            if acc.is_none() && w.is_some() && tries < f.d as u64 + 1 {
                return Err(Error::Undetermined(format!(
                    "field F_{p} too small to separate common factors"
                )));
            }
            if acc.is_none() && w.is_some() {
                // second pair in case the first carries a private common factor
                let r = res_z(fld, v, w.unwrap());
                if !r.is_empty() {
                    acc = Some(r);
                }
            }
            acc
        }
    };

    if nonzero.len() == 1 {
        let u = &polys[nonzero[0]];
        if u.len() == 1 && u[0].len() == 1 {
            // a nonzero constant on the chart: every common zero lies on Y = 0
            return Ok(Smoothness::Smooth);
        }
    }
    let Some(g) = candidates else {
        // the partials share a component: singular along a curve
        return probe_witness(fld, &polys)
            .map(Smoothness::Singular)
            .ok_or_else(|| Error::Undetermined("no witness found on shared component".into()));
    };

    for q in upoly::irreducible_factors(fld, &g) {
        let k = if q.len() == 2 {
            one.clone()
        } else {
            ExtField::from_irreducible(fld, q.clone())
        };
        let x0 = if q.len() == 2 {
            k.from_u64(fld.neg(&q[0]))
        } else {
            k.gen()
        };
        let [a, b, c] = polys.each_ref().map(|pp| eval_bivar_at_x(&k, pp, &x0));
        let h = gcd3(&k, &a, &b, &c);
        if h.is_empty() || h.len() > 1 {
            let w = chart_witness(fld, &q, &polys)
                .ok_or_else(|| Error::Undetermined("witness construction failed".into()))?;
            return Ok(Smoothness::Singular(w));
        }
    }
    Ok(Smoothness::Smooth)
}
