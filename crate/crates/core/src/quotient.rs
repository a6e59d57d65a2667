//! Fixed points of cyclic automorphisms and quotient genera by Riemann–Hurwitz.

use serde::{Deserialize, Serialize};

use crate::autgrp::ProjMatrix;
use crate::error::{Error, Result};
use crate::ff::{lcm, ExtField, Field, PrimeField};
use crate::linalg::{self, M3};
use crate::poly::{normalize_point, ExtPoint, HomPoly};
use crate::types::divisors;
use crate::upoly;

/// Genus of a smooth plane curve of degree d.
pub fn genus(d: u32) -> u64 {
    let d = d as u64;
    (d - 1) * (d - 2) / 2
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BranchPoint {
    pub point: ExtPoint,
    /// order of the stabilizer of the point in the cyclic group
    pub stabilizer_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchData {
    pub group_order: u64,
    /// `(orbit size, ramification index)`, sorted
    pub orbits: Vec<(u64, u64)>,
}

impl BranchData {
    pub fn new(group_order: u64, mut orbits: Vec<(u64, u64)>) -> Result<Self> {
        for &(size, e) in &orbits {
            if e < 2 || size * e != group_order {
                return Err(Error::InconsistentBranchData(format!(
                    "orbit of size {size} with index {e} in a group of order {group_order}"
                )));
            }
        }
        orbits.sort();
        Ok(BranchData {
            group_order,
            orbits,
        })
    }

    /// Ramification indices, one per branch point of the quotient, largest first.
    pub fn profile(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.orbits.iter().map(|o| o.1).collect();
        v.sort_by(|a, b| b.cmp(a));
        v
    }
}

/// Solves `2g - 2 = n (2 g0 - 2) + sum size (e - 1)` for g0.
pub fn hurwitz_quotient_genus(g: u64, data: &BranchData) -> Result<u64> {
    let n = data.group_order as i64;
    let ram: i64 = data.orbits.iter().map(|&(s, e)| (s * (e - 1)) as i64).sum();
    let lhs = 2 * g as i64 - 2 - ram;
    if n == 0 || lhs % n != 0 || (lhs / n) % 2 != 0 {
        return Err(Error::InconsistentBranchData(format!(
            "2g-2-R = {lhs} is not n(2g0-2) for n = {n}"
        )));
    }
    let g0 = (lhs / n + 2) / 2;
    if g0 < 0 {
        return Err(Error::InconsistentBranchData(format!("negative quotient genus {g0}")));
    }
    Ok(g0 as u64)
}

fn proportional<K: Field>(k: &K, a: &[K::Elem; 3], b: &[K::Elem; 3]) -> bool {
    (0..3).all(|i| {
        let j = (i + 1) % 3;
        k.mul(&a[i], &b[j]) == k.mul(&a[j], &b[i])
    })
}

/// Fixed locus of `a` on the curve: eigenpoints on C, and intersections of
/// eigenlines with C. `restrictions` collects the restricted forms on eigenlines.
fn fixed_on_curve<K: Field>(
    k: &K,
    form: &HomPoly,
    a: &M3<K::Elem>,
    restrictions: &mut Vec<Vec<K::Elem>>,
) -> Result<Vec<[K::Elem; 3]>> {
    let mut pts = Vec::new();
    let mut dim = 0;
    for mu in upoly::roots(k, &linalg::char_poly(k, a)) {
        let mut shifted = a.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] = k.sub(&row[i], &mu);
        }
        let basis = linalg::null_space(k, &shifted);
        dim += basis.len();
        match basis.len() {
            1 => {
                if k.is_zero(&form.eval_in(k, &basis[0])) {
                    pts.push(basis[0].clone());
                }
            }
            2 => {
                let (v1, v2) = (&basis[0], &basis[1]);
                let lin: [[K::Elem; 2]; 3] = std::array::from_fn(|c| [v1[c].clone(), v2[c].clone()]);
                let r = form.substitute_linear(k, &lin);
                if upoly::degree(&r).is_none() {
                    return Err(Error::Domain("an eigenline is a component of the curve".into()));
                }
                for s in upoly::roots(k, &r) {
                    pts.push(std::array::from_fn(|c| k.add(&v1[c], &k.mul(&s, &v2[c]))));
                }
                if k.is_zero(&form.eval_in(k, v2)) {
                    pts.push(v2.clone());
                }
                restrictions.push(r);
            }
            _ => return Err(Error::Domain("scalar matrix has no isolated fixed locus".into())),
        }
    }
    if dim < 3 {
        return Err(Error::NonDiagonalizable);
    }
    Ok(pts)
}

/// Projective order of M, with M^n not divisible by p checked by the caller.
fn projective_order(f: &PrimeField, m: &ProjMatrix) -> Result<u64> {
    m.order(f, 1 << 20)
        .ok_or_else(|| Error::Domain("matrix of infinite or huge order".into()))
}

fn factor_degree_lcm<K: Field>(k: &K, polys: &[Vec<K::Elem>]) -> u64 {
    polys
        .iter()
        .flat_map(|p| upoly::irreducible_factors(k, p))
        .map(|q| (q.len() - 1) as u64)
        .fold(1, lcm)
}

struct Located {
    field: ExtField,
    points: Vec<([Vec<u64>; 3], u64)>,
}

fn locate(form: &HomPoly, m: &ProjMatrix) -> Result<Located> {
    let f = form.field();
    let n = projective_order(f, m)?;
    if n % f.p() == 0 {
        return Err(Error::Domain(format!("order {n} is divisible by p = {}", f.p())));
    }
    let proper: Vec<u64> = divisors(n).into_iter().filter(|&j| j < n).collect();
    let powers: Vec<ProjMatrix> = proper.iter().map(|&j| m.pow(f, j as i64)).collect();

    // Field of definition: eigenvalues, then points on eigenlines.
    let e0 = factor_degree_lcm(f, &[linalg::char_poly(f, m.entries())]);
    let k0 = ExtField::new(f, e0 as u32)?;
    let mut restrictions = Vec::new();
    for a in &powers {
        fixed_on_curve(&k0, form, &linalg::lift(&k0, a.entries()), &mut restrictions)?;
    }
    let e = e0 * factor_degree_lcm(&k0, &restrictions);
    let k = ExtField::new(f, e as u32)?;

    let mut points: Vec<([Vec<u64>; 3], u64)> = Vec::new();
    let mut scratch = Vec::new();
    for a in &powers {
        for p in fixed_on_curve(&k, form, &linalg::lift(&k, a.entries()), &mut scratch)? {
            let p = normalize_point(&k, &p);
            if points.iter().any(|q| q.0 == p) {
                continue;
            }
            let j = proper
                .iter()
                .copied()
                .find(|&j| proportional(&k, &m.pow(f, j as i64).apply(&k, &p), &p))
                .expect("found as a fixed point of a proper power");
            points.push((p, n / j));
        }
    }
    points.sort();
    Ok(Located { field: k, points })
}

/// Points of the curve with nontrivial stabilizer in `<m>`, over the smallest
/// extension containing all of them.
pub fn fixed_points(form: &HomPoly, m: &ProjMatrix) -> Result<Vec<BranchPoint>> {
    let loc = locate(form, m)?;
    Ok(loc
        .points
        .iter()
        .map(|(p, s)| BranchPoint {
            point: ExtPoint::from_field(&loc.field, p),
            stabilizer_order: *s,
        })
        .collect())
}

/// Orbits of the fixed points under `<m>`.
pub fn branch_data(form: &HomPoly, m: &ProjMatrix) -> Result<BranchData> {
    let f = form.field();
    let n = projective_order(f, m)?;
    let loc = locate(form, m)?;
    let k = &loc.field;
    let mut seen: Vec<[Vec<u64>; 3]> = Vec::new();
    let mut orbits = Vec::new();
    for (p, s) in &loc.points {
        if seen.contains(p) {
            continue;
        }
        let mut q = p.clone();
        let mut size = 0;
        loop {
            seen.push(q.clone());
            size += 1;
            q = normalize_point(k, &m.apply(k, &q));
            if q == *p {
                break;
            }
        }
        orbits.push((size, *s));
    }
    BranchData::new(n, orbits)
}
