//! Brute-force oracles over F_p and F_{p²}, with their own arithmetic
//! (F_{p²} = F_p[w]/(w² - n) for a non-residue n).

use plane_aut::ff::{ExtField, Field, PrimeField};
use plane_aut::poly::{ExtPoint, HomPoly};

pub type E = (u64, u64);

#[derive(Clone, Copy, Debug)]
pub struct Fp2 {
    pub p: u64,
    pub nr: u64,
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl Fp2 {
    pub fn new(p: u64) -> Fp2 {
        let nr = (2..p).find(|&n| powmod(n, (p - 1) / 2, p) == p - 1).expect("odd prime");
        Fp2 { p, nr }
    }
    pub fn add(&self, a: E, b: E) -> E {
        ((a.0 + b.0) % self.p, (a.1 + b.1) % self.p)
    }
    pub fn sub(&self, a: E, b: E) -> E {
        ((a.0 + self.p - b.0) % self.p, (a.1 + self.p - b.1) % self.p)
    }
    pub fn mul(&self, a: E, b: E) -> E {
        let p = self.p;
        ((a.0 * b.0 + a.1 * b.1 % p * self.nr) % p, (a.0 * b.1 + a.1 * b.0) % p)
    }
    pub fn pow(&self, a: E, mut e: u64) -> E {
        let (mut r, mut b) = ((1, 0), a);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }
    pub fn inv(&self, a: E) -> E {
        // a^(p²-2)
        self.pow(a, self.p * self.p - 2)
    }
    pub fn elements(&self) -> Vec<E> {
        (0..self.p).flat_map(|a| (0..self.p).map(move |b| (a, b))).collect()
    }
    pub fn normalize(&self, pt: [E; 3]) -> [E; 3] {
        let lead = *pt.iter().find(|c| **c != (0, 0)).unwrap();
        let i = self.inv(lead);
        pt.map(|c| self.mul(c, i))
    }
    pub fn sqrt_fp(&self, a: u64) -> Option<u64> {
        (0..self.p).find(|x| x * x % self.p == a % self.p)
    }

    /// Points of P²(F_{p²}) with first nonzero coordinate 1.
    pub fn projective_points(&self) -> Vec<[E; 3]> {
        let els = self.elements();
        let mut out = Vec::with_capacity(els.len() * els.len() + els.len() + 1);
        for &a in &els {
            for &b in &els {
                out.push([(1, 0), a, b]);
            }
        }
        for &b in &els {
            out.push([(0, 0), (1, 0), b]);
        }
        out.push([(0, 0), (0, 0), (1, 0)]);
        out
    }

    /// Maps a point of the library's canonical F_{p^e} (e ≤ 2) into this field.
    pub fn from_ext_point(&self, pt: &ExtPoint) -> [E; 3] {
        let f = PrimeField::new(self.p).unwrap();
        match pt.degree {
            1 => pt.coords.clone().map(|c| (c[0], 0)),
            2 => {
                // root t of the library modulus x² + c1 x + c0, written in our basis
                let k = ExtField::new(&f, 2).unwrap();
                let md = k.modulus();
                let (c0, c1) = (md[0], md[1]);
                let p = self.p;
                let disc = (c1 * c1 % p + p - 4 * c0 % p) % p;
                // disc is a non-residue, so disc / nr = s² with s in F_p
                let q = disc * powmod(self.nr, p - 2, p) % p;
                let s = self.sqrt_fp(q).expect("quotient of non-residues is a square");
                let half = powmod(2, p - 2, p);
                let t = (((p - c1) % p) * half % p, s * half % p);
                let t = (t.0, t.1);
                debug_assert_eq!(
                    self.add(self.add(self.mul(t, t), self.mul((c1, 0), t)), (c0, 0)),
                    (0, 0)
                );
                pt.coords.clone().map(|c| self.add((c[0], 0), self.mul((c[1], 0), t)))
            }
            e => panic!("degree {e} point"),
        }
    }
}

/// A form as a list of `(exponents, coefficient)`, evaluated over F_{p²}.
#[derive(Clone, Debug)]
pub struct Poly {
    pub terms: Vec<([u32; 3], u64)>,
}

impl Poly {
    pub fn from_form(f: &HomPoly) -> Poly {
        Poly {
            terms: f.terms().iter().map(|(m, c)| (m.exps(), *c)).collect(),
        }
    }

    pub fn partial(&self, v: usize, p: u64) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[v] > 0)
                .map(|(e, c)| {
                    let mut e2 = *e;
                    e2[v] -= 1;
                    (e2, c * (e[v] as u64 % p) % p)
                })
                .filter(|t| t.1 != 0)
                .collect(),
        }
    }

    pub fn eval(&self, k: &Fp2, pt: &[E; 3], pows: &mut [Vec<E>; 3]) -> E {
        let deg = self.terms.iter().map(|t| t.0.iter().copied().max().unwrap_or(0)).max().unwrap_or(0) as usize;
        for v in 0..3 {
            pows[v].clear();
            pows[v].push((1, 0));
            for i in 1..=deg {
                let x = k.mul(pows[v][i - 1], pt[v]);
                pows[v].push(x);
            }
        }
        let mut acc = (0, 0);
        for (e, c) in &self.terms {
            let t = k.mul(k.mul(pows[0][e[0] as usize], pows[1][e[1] as usize]), pows[2][e[2] as usize]);
            acc = k.add(acc, k.mul(t, (*c, 0)));
        }
        acc
    }
}

/// Points of the curve over F_{p²}.
pub fn curve_points(k: &Fp2, f: &Poly) -> Vec<[E; 3]> {
    let mut pows = [vec![], vec![], vec![]];
    k.projective_points()
        .into_iter()
        .filter(|pt| f.eval(k, pt, &mut pows) == (0, 0))
        .collect()
}

/// Singular points over F_{p²} (p must not divide the degree).
pub fn singular_points(k: &Fp2, f: &Poly) -> Vec<[E; 3]> {
    let parts: Vec<Poly> = (0..3).map(|v| f.partial(v, k.p)).collect();
    let mut pows = [vec![], vec![], vec![]];
    curve_points(k, f)
        .into_iter()
        .filter(|pt| parts.iter().all(|g| g.eval(k, pt, &mut pows) == (0, 0)))
        .collect()
}

/// Whether a point reported by the library over its own F_{p^e} is singular,
/// evaluated with the library's extension arithmetic.
pub fn singular_in_extension(f: &HomPoly, pt: &ExtPoint) -> bool {
    let k = ExtField::new(f.field(), pt.degree).unwrap();
    let q = pt.to_field(&k);
    let parts = f.partials();
    parts.iter().all(|g| k.is_zero(&g.eval_in(&k, &q))) && k.is_zero(&f.eval_in(&k, &q))
}

/// Points of the curve over F_{p²} with nontrivial stabilizer under the diagonal
/// map `diag(d0, d1, d2)` of projective order n, with their stabilizer orders.
pub fn diagonal_fixed_points(k: &Fp2, f: &Poly, diag: [u64; 3], n: u64) -> Vec<([E; 3], u64)> {
    let p = k.p;
    let mut out = Vec::new();
    for pt in curve_points(k, f) {
        // smallest j | n, j < n, with diag^j fixing pt
        let fixed_by = |j: u64| {
            let d = diag.map(|x| powmod(x, j, p));
            let img = [0, 1, 2].map(|i| k.mul((d[i], 0), pt[i]));
            k.normalize(img) == pt
        };
        if let Some(j) = (1..n).filter(|j| n.is_multiple_of(*j)).find(|&j| fixed_by(j)) {
            out.push((pt, n / j));
        }
    }
    out
}
