//! Prime fields with discrete-log tables and small extension fields.
//!
//! All arithmetic in the crate is written against the [`Field`] trait so that
//! the same polynomial code runs over `F_p` and over `F_{p^e}` when singular
//! points or fixed points only become rational after an extension.

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::error::{Error, Result};
use crate::upoly;

pub trait Field: Clone + Send + Sync + fmt::Debug {
    type Elem: Clone + PartialEq + Eq + Hash + Ord + fmt::Debug + Send + Sync;

    fn characteristic(&self) -> u64;
    /// Degree over the prime field.
    fn degree(&self) -> u32;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    /// Image of an integer (reduced mod p) in the prime subfield.
    fn from_u64(&self, x: u64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
    /// Coordinates in the power basis over F_p (length `degree()`).
    fn coords(&self, a: &Self::Elem) -> Vec<u64>;
    fn from_coords(&self, c: &[u64]) -> Self::Elem;

    fn order(&self) -> BigUint {
        BigUint::from(self.characteristic()).pow(self.degree())
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    fn pow_big(&self, a: &Self::Elem, e: &BigUint) -> Self::Elem {
        let mut acc = self.one();
        for i in (0..e.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if e.bit(i) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Every element, in coordinate order. Only sensible for small fields.
    fn elements(&self) -> Vec<Self::Elem> {
        let p = self.characteristic();
        let e = self.degree() as usize;
        let total = (p as usize).pow(e as u32);
        let mut out = Vec::with_capacity(total);
        let mut c = vec![0u64; e];
        for _ in 0..total {
            out.push(self.from_coords(&c));
            for digit in c.iter_mut() {
                *digit += 1;
                if *digit < p {
                    break;
                }
                *digit = 0;
            }
        }
        out
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut q = 3;
    while q * q <= n {
        if n.is_multiple_of(q) {
            return false;
        }
        q += 2;
    }
    true
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest prime `p > (d-1)(d-2)+1` with `p ≡ 1 (mod lcm(orders))`.
pub fn select_prime(d: u32, orders: &[u64]) -> u64 {
    let l = orders.iter().fold(1u64, |acc, &m| lcm(acc, m.max(1)));
    let d = d as u64;
    let floor = (d.saturating_sub(1)) * (d.saturating_sub(2)) + 1;
    let mut p = 1 + l * (floor / l + 1);
    while !is_prime(p) {
        p += l;
    }
    p
}

struct PrimeInner {
    p: u64,
    generator: u64,
    log: Vec<u32>,
    exp: Vec<u32>,
}

/// The prime field F_p with full log/antilog tables for its smallest primitive root.
#[derive(Clone)]
pub struct PrimeField {
    inner: Arc<PrimeInner>,
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.inner.p)
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p
    }
}

impl Eq for PrimeField {}

impl PrimeField {
    pub const MAX_MODULUS: u64 = 1 << 26;

    pub fn new(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > Self::MAX_MODULUS {
            return Err(Error::FieldTooLarge(p));
        }
        let n = p - 1;
        let factors = prime_factors(n);
        let powmod = |mut b: u64, mut e: u64| {
            let mut acc = 1u64;
            b %= p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * b % p;
                }
                b = b * b % p;
                e >>= 1;
            }
            acc
        };
        let generator = if p == 2 {
            1
        } else {
            (2..p)
                .find(|&g| factors.iter().all(|&q| powmod(g, n / q) != 1))
                .expect("a primitive root exists")
        };
        let mut exp = vec![0u32; n as usize];
        let mut log = vec![0u32; p as usize];
        let mut x = 1u64;
        for (k, slot) in exp.iter_mut().enumerate() {
            *slot = x as u32;
            log[x as usize] = k as u32;
            x = x * generator % p;
        }
        Ok(PrimeField {
            inner: Arc::new(PrimeInner {
                p,
                generator,
                log,
                exp,
            }),
        })
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn generator(&self) -> u64 {
        self.inner.generator
    }

    /// `log_table()[x]` is the discrete log of `x` for `x != 0`.
    pub fn log_table(&self) -> &[u32] {
        &self.inner.log
    }

    pub fn discrete_log(&self, x: u64) -> Result<u64> {
        let x = x % self.inner.p;
        if x == 0 {
            return Err(Error::Domain("discrete log of zero".into()));
        }
        Ok(self.inner.log[x as usize] as u64)
    }

    /// `generator^k`.
    pub fn exp(&self, k: u64) -> u64 {
        self.inner.exp[(k % (self.inner.p - 1)) as usize] as u64
    }

    /// `generator^((p-1)/m)`, an element of exact order `m`.
    pub fn root_of_unity(&self, m: u64) -> Result<u64> {
        let n = self.inner.p - 1;
        if m == 0 || !n.is_multiple_of(m) {
            return Err(Error::IncompatibleField { p: self.inner.p, m });
        }
        Ok(self.exp(n / m))
    }

    /// Multiplicative order of a nonzero element.
    pub fn element_order(&self, x: u64) -> u64 {
        let n = self.inner.p - 1;
        let l = self.inner.log[(x % self.inner.p) as usize] as u64;
        n / gcd(l, n)
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.inner.p as i64) as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn characteristic(&self) -> u64 {
        self.inner.p
    }
    fn degree(&self) -> u32 {
        1
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.inner.p
    }
    fn from_u64(&self, x: u64) -> u64 {
        x % self.inner.p
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.inner.p {
            s - self.inner.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.inner.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.inner.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.inner.p
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        let n = self.inner.p - 1;
        let l = self.inner.log[*a as usize] as u64;
        Some(self.inner.exp[((n - l) % n) as usize] as u64)
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.inner.p)
    }
    fn coords(&self, a: &u64) -> Vec<u64> {
        vec![*a]
    }
    fn from_coords(&self, c: &[u64]) -> u64 {
        c.first().copied().unwrap_or(0) % self.inner.p
    }
    fn pow(&self, a: &u64, e: u64) -> u64 {
        if *a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = self.inner.p - 1;
        let l = self.inner.log[*a as usize] as u128;
        self.inner.exp[((l * e as u128) % n as u128) as usize] as u64
    }
}

struct ExtInner {
    base: PrimeField,
    e: u32,
    /// Monic, low degree first, length e+1.
    modulus: Vec<u64>,
}

/// F_p[x]/(f) for a monic irreducible f of degree e.
#[derive(Clone)]
pub struct ExtField {
    inner: Arc<ExtInner>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.inner.base.p(), self.inner.e, self.inner.modulus)
    }
}

fn modulus_cache() -> &'static Mutex<HashMap<(u64, u32), Vec<u64>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Vec<u64>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Ben-Or: a monic f of degree n is irreducible iff gcd(f, x^{p^i} - x) = 1 for i <= n/2.
pub fn is_irreducible_over_prime(base: &PrimeField, f: &[u64]) -> bool {
    let f = upoly::trim(base, f.to_vec());
    let n = match upoly::degree(&f) {
        Some(n) if n >= 1 => n,
        _ => return false,
    };
    let x = vec![0, 1];
    let p = BigUint::from(base.p());
    let mut h = x.clone();
    for _ in 1..=n / 2 {
        h = upoly::powmod(base, &h, &p, &f);
        let g = upoly::gcd(base, &f, &upoly::sub(base, &h, &x));
        if upoly::degree(&g).unwrap_or(0) > 0 {
            return false;
        }
    }
    true
}

fn canonical_modulus(base: &PrimeField, e: u32) -> Vec<u64> {
    let key = (base.p(), e);
    if let Some(m) = modulus_cache().lock().unwrap().get(&key) {
        return m.clone();
    }
    let p = base.p();
    let mut digits = vec![0u64; e as usize];
    let found = loop {
        let mut f = digits.clone();
        f.push(1);
        if (e == 1 || digits[0] != 0) && is_irreducible_over_prime(base, &f) {
            break f;
        }
        for d in digits.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    };
    modulus_cache().lock().unwrap().insert(key, found.clone());
    found
}

impl ExtField {
    /// F_{p^e} presented by the irreducible monic of degree e with the smallest
    /// coefficient integer `sum c_i p^i`.
    pub fn new(base: &PrimeField, e: u32) -> Result<Self> {
        if e == 0 {
            return Err(Error::Domain("extension degree 0".into()));
        }
        let modulus = canonical_modulus(base, e);
        Ok(ExtField {
            inner: Arc::new(ExtInner {
                base: base.clone(),
                e,
                modulus,
            }),
        })
    }

    pub fn with_modulus(base: &PrimeField, modulus: Vec<u64>) -> Result<Self> {
        let modulus = upoly::monic(base, &upoly::trim(base, modulus));
        if !is_irreducible_over_prime(base, &modulus) {
            return Err(Error::Domain("modulus is not irreducible".into()));
        }
        let e = (modulus.len() - 1) as u32;
        Ok(ExtField {
            inner: Arc::new(ExtInner {
                base: base.clone(),
                e,
                modulus,
            }),
        })
    }

    /// Skips the irreducibility check; for factors already known to be irreducible.
    pub(crate) fn from_irreducible(base: &PrimeField, modulus: Vec<u64>) -> Self {
        let modulus = upoly::monic(base, &modulus);
        let e = (modulus.len() - 1) as u32;
        ExtField {
            inner: Arc::new(ExtInner {
                base: base.clone(),
                e,
                modulus,
            }),
        }
    }

    pub fn base(&self) -> &PrimeField {
        &self.inner.base
    }

    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    /// The class of x.
    pub fn gen(&self) -> Vec<u64> {
        let mut v = vec![0u64; self.inner.e as usize];
        if self.inner.e == 1 {
            v[0] = self.inner.base.neg(&self.inner.modulus[0]);
        } else {
            v[1] = 1;
        }
        v
    }

    /// True when the element lies in the prime subfield.
    pub fn is_prime_subfield(&self, a: &[u64]) -> bool {
        a.iter().skip(1).all(|&c| c == 0)
    }
}

impl Field for ExtField {
    type Elem = Vec<u64>;

    fn characteristic(&self) -> u64 {
        self.inner.base.p()
    }
    fn degree(&self) -> u32 {
        self.inner.e
    }
    fn zero(&self) -> Vec<u64> {
        vec![0; self.inner.e as usize]
    }
    fn one(&self) -> Vec<u64> {
        self.from_u64(1)
    }
    fn from_u64(&self, x: u64) -> Vec<u64> {
        let mut v = self.zero();
        v[0] = x % self.inner.base.p();
        v
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let f = &self.inner.base;
        a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let f = &self.inner.base;
        a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
    }
    fn neg(&self, a: &Vec<u64>) -> Vec<u64> {
        let f = &self.inner.base;
        a.iter().map(|x| f.neg(x)).collect()
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let p = self.inner.base.p();
        let e = self.inner.e as usize;
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        let m = &self.inner.modulus;
        for i in (e..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            for j in 0..e {
                prod[i - e + j] = (prod[i - e + j] + (p - c) * m[j]) % p;
            }
        }
        prod.truncate(e);
        prod
    }
    fn inv(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        let f = &self.inner.base;
        let ap = upoly::trim(f, a.clone());
        if ap.is_empty() {
            return None;
        }
        let (g, s, _) = upoly::ext_gcd(f, &ap, &self.inner.modulus);
        debug_assert_eq!(g, vec![1]);
        let mut out = upoly::rem(f, &s, &self.inner.modulus);
        out.resize(self.inner.e as usize, 0);
        Some(out)
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.iter().all(|&c| c == 0)
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<u64> {
        (0..self.inner.e).map(|_| rng.gen_range(0..self.inner.base.p())).collect()
    }
    fn coords(&self, a: &Vec<u64>) -> Vec<u64> {
        a.clone()
    }
    fn from_coords(&self, c: &[u64]) -> Vec<u64> {
        let p = self.inner.base.p();
        let mut v: Vec<u64> = c.iter().map(|x| x % p).collect();
        v.resize(self.inner.e as usize, 0);
        v
    }
}

/// `p^k` as a big integer.
pub fn prime_power(p: u64, k: u32) -> BigUint {
    let mut acc = BigUint::one();
    for _ in 0..k {
        acc *= p;
    }
    acc
}
