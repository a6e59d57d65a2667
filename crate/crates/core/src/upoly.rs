//! Dense univariate polynomials over any [`Field`], low degree first.
//!
//! A polynomial is a plain `Vec` of coefficients with no trailing zeros; the
//! zero polynomial is the empty vector.

use num_bigint::BigUint;
use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ff::{prime_power, Field};

pub fn trim<F: Field>(k: &F, mut a: Vec<F::Elem>) -> Vec<F::Elem> {
    while a.last().is_some_and(|c| k.is_zero(c)) {
        a.pop();
    }
    a
}

pub fn degree<E>(a: &[E]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub fn constant<F: Field>(k: &F, c: F::Elem) -> Vec<F::Elem> {
    trim(k, vec![c])
}

pub fn x<F: Field>(k: &F) -> Vec<F::Elem> {
    vec![k.zero(), k.one()]
}

pub fn add<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let z = k.zero();
    let out = (0..n)
        .map(|i| k.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(k, out)
}

pub fn sub<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let z = k.zero();
    let out = (0..n)
        .map(|i| k.sub(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(k, out)
}

pub fn scale<F: Field>(k: &F, a: &[F::Elem], c: &F::Elem) -> Vec<F::Elem> {
    trim(k, a.iter().map(|x| k.mul(x, c)).collect())
}

pub fn mul<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![k.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if k.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(x, y));
        }
    }
    trim(k, out)
}

pub fn monic<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    match a.last() {
        None => Vec::new(),
        Some(lc) => {
            let inv = k.inv(lc).expect("nonzero leading coefficient");
            a.iter().map(|c| k.mul(c, &inv)).collect()
        }
    }
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut r = trim(k, a.to_vec());
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let inv = k.inv(&b[db]).unwrap();
    let mut q = vec![k.zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let c = k.mul(&r[dr], &inv);
        let shift = dr - db;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = k.sub(&r[shift + j], &k.mul(&c, bj));
        }
        q[shift] = c;
        r.pop();
        r = trim(k, r);
    }
    (trim(k, q), r)
}

pub fn rem<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    divrem(k, a, b).1
}

/// Exact quotient; debug-asserts a zero remainder.
pub fn div_exact<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let (q, r) = divrem(k, a, b);
    debug_assert!(r.is_empty(), "inexact division");
    q
}

/// Monic gcd (zero if both inputs are zero).
pub fn gcd<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut a = trim(k, a.to_vec());
    let mut b = trim(k, b.to_vec());
    while !b.is_empty() {
        let r = rem(k, &a, &b);
        a = b;
        b = r;
    }
    monic(k, &a)
}

/// Returns `(g, s, t)` with `s*a + t*b = g`, `g` monic.
pub fn ext_gcd<F: Field>(
    k: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>, Vec<F::Elem>) {
    let (mut r0, mut r1) = (trim(k, a.to_vec()), trim(k, b.to_vec()));
    let (mut s0, mut s1) = (vec![k.one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![k.one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(k, &r0, &r1);
        let s = sub(k, &s0, &mul(k, &q, &s1));
        let t = sub(k, &t0, &mul(k, &q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    match r0.last() {
        None => (r0, s0, t0),
        Some(lc) => {
            let inv = k.inv(lc).unwrap();
            (scale(k, &r0, &inv), scale(k, &s0, &inv), scale(k, &t0, &inv))
        }
    }
}

pub fn mulmod<F: Field>(k: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
    rem(k, &mul(k, a, b), m)
}

pub fn powmod<F: Field>(k: &F, a: &[F::Elem], e: &BigUint, m: &[F::Elem]) -> Vec<F::Elem> {
    let base = rem(k, a, m);
    let mut acc = rem(k, &[k.one()], m);
    for i in (0..e.bits()).rev() {
        acc = mulmod(k, &acc, &acc, m);
        if e.bit(i) {
            acc = mulmod(k, &acc, &base, m);
        }
    }
    acc
}

pub fn derivative<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let out = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| k.mul(c, &k.from_u64(i as u64)))
        .collect();
    trim(k, out)
}

pub fn eval<F: Field>(k: &F, a: &[F::Elem], x: &F::Elem) -> F::Elem {
    a.iter().rev().fold(k.zero(), |acc, c| k.add(&k.mul(&acc, x), c))
}

/// For `a = g(x^p)`, returns the p-th root of `a` (coefficients take inverse Frobenius).
fn pth_root<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let p = k.characteristic() as usize;
    let inv_frob = prime_power(p as u64, k.degree() - 1);
    let out = a
        .iter()
        .step_by(p)
        .map(|c| k.pow_big(c, &inv_frob))
        .collect();
    trim(k, out)
}

/// Product of the distinct monic irreducible factors of `a`.
pub fn radical<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let f = monic(k, &trim(k, a.to_vec()));
    if f.len() <= 1 {
        return if f.is_empty() { f } else { vec![k.one()] };
    }
    let df = derivative(k, &f);
    if df.is_empty() {
        return radical(k, &pth_root(k, &f));
    }
    let c = gcd(k, &f, &df);
    let w = div_exact(k, &f, &c);
    let mut rest = c;
    loop {
        let g = gcd(k, &rest, &w);
        if g.len() <= 1 {
            break;
        }
        rest = div_exact(k, &rest, &g);
    }
    if rest.len() <= 1 {
        w
    } else {
        mul(k, &w, &radical(k, &pth_root(k, &rest)))
    }
}

/// Splits a monic squarefree `f` into `(k, product of its degree-k irreducible factors)`.
pub fn distinct_degree<F: Field>(k: &F, f: &[F::Elem]) -> Vec<(usize, Vec<F::Elem>)> {
    let q = k.order();
    let xp = x(k);
    let mut rest = monic(k, f);
    let mut h = xp.clone();
    let mut out = Vec::new();
    let mut i = 1;
    while degree(&rest).unwrap_or(0) >= 2 * i {
        h = powmod(k, &h, &q, &rest);
        let g = gcd(k, &rest, &sub(k, &h, &xp));
        if g.len() > 1 {
            rest = div_exact(k, &rest, &g);
            h = rem(k, &h, &rest);
            out.push((i, g));
        }
        i += 1;
    }
    if rest.len() > 1 {
        out.push((rest.len() - 1, rest));
    }
    out
}

/// Cantor-Zassenhaus splitting of a product of distinct irreducibles of degree `deg`.
pub fn equal_degree<F: Field>(k: &F, f: &[F::Elem], deg: usize) -> Vec<Vec<F::Elem>> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001 ^ (f.len() as u64));
    let mut done = Vec::new();
    let mut todo = vec![monic(k, f)];
    let p = k.characteristic();
    let qk = prime_power(p, k.degree() * deg as u32);
    let half = if p == 2 { BigUint::one() } else { (&qk - 1u32) / 2u32 };
    while let Some(g) = todo.pop() {
        let n = g.len() - 1;
        if n == deg {
            done.push(g);
            continue;
        }
        loop {
            let a: Vec<F::Elem> = trim(k, (0..n).map(|_| k.random(&mut rng)).collect());
            if degree(&a).unwrap_or(0) == 0 {
                continue;
            }
            let b = if p == 2 {
                // trace map Tr(a) = a + a^2 + ... + a^(2^(e*deg - 1))
                let mut t = rem(k, &a, &g);
                let mut acc = t.clone();
                for _ in 1..(k.degree() as usize * deg) {
                    t = mulmod(k, &t, &t, &g);
                    acc = add(k, &acc, &t);
                }
                acc
            } else {
                sub(k, &powmod(k, &a, &half, &g), &[k.one()])
            };
            let h = gcd(k, &g, &b);
            let dh = h.len().saturating_sub(1);
            if dh > 0 && dh < n {
                let other = div_exact(k, &g, &h);
                todo.push(h);
                todo.push(other);
                break;
            }
        }
    }
    done.sort();
    done
}

/// Monic irreducible factors of the radical of `a`, sorted.
pub fn irreducible_factors<F: Field>(k: &F, a: &[F::Elem]) -> Vec<Vec<F::Elem>> {
    let r = radical(k, a);
    if r.len() <= 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (deg, g) in distinct_degree(k, &r) {
        out.extend(equal_degree(k, &g, deg));
    }
    out.sort();
    out
}

/// Distinct roots in the coefficient field, sorted.
pub fn roots<F: Field>(k: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    let r = radical(k, a);
    if r.len() <= 1 {
        return Vec::new();
    }
    let xq = powmod(k, &x(k), &k.order(), &r);
    let lin = gcd(k, &r, &sub(k, &xq, &x(k)));
    if lin.len() <= 1 {
        return Vec::new();
    }
    let mut out: Vec<F::Elem> = equal_degree(k, &lin, 1)
        .into_iter()
        .map(|l| k.neg(&l[0]))
        .collect();
    out.sort();
    out
}

/// Ben-Or test over the coefficient field.
pub fn is_irreducible<F: Field>(k: &F, f: &[F::Elem]) -> bool {
    let f = monic(k, &trim(k, f.to_vec()));
    let n = match degree(&f) {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    let q = k.order();
    let xp = x(k);
    let mut h = xp.clone();
    for _ in 1..=n / 2 {
        h = powmod(k, &h, &q, &f);
        if gcd(k, &f, &sub(k, &h, &xp)).len() > 1 {
            return false;
        }
    }
    true
}
