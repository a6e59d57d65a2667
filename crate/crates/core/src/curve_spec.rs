//! Text formats for curves and projective maps on the command line.
//!
//! Curves:
//!
//! ```text
//! d=5 type=8,1,4 [class=c] [alpha=A] [beta=B1,B2,...|random]
//! [d=5] coeffs=[(i,j,k,c),...]
//! ```
//!
//! The family form picks the weight-class family of type `m,(a,b)`; `class`
//! selects among several families of the same type (default: the one listed
//! in the complete table, else the class of `X^d`). Missing β values are 0;
//! `beta=random` draws until the curve is smooth. In raw form each tuple is the
//! coefficient `c` (an integer, reduced mod p) of `X^i Y^j Z^k`.
//!
//! Maps:
//!
//! ```text
//! m:e0,e1,e2         diag(ξ^e0, ξ^e1, ξ^e2) with ξ a primitive m-th root of unity
//! perm:i,j,k         X -> V_i, Y -> V_j, Z -> V_k
//! [a,b,c;d,e,f;g,h,i]
//! ```

use crate::autgrp::ProjMatrix;
use crate::error::{Error, Result};
use crate::family::{sample_smooth, specialize, EquationFamily, Params, PlaneCurve};
use crate::ff::{Field, PrimeField};
use crate::poly::{HomPoly, Monomial};
use crate::types::{table, CaseTag, CyclicType, TypeFamily, View};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Betas {
    Given(Vec<u64>),
    Random,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CurveSpec {
    Family {
        d: u32,
        m: u64,
        a: u64,
        b: u64,
        class: Option<u64>,
        alpha: Option<u64>,
        betas: Betas,
    },
    Raw {
        d: Option<u32>,
        coeffs: Vec<([u32; 3], i64)>,
    },
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| perr(format!("bad {what}: {s:?}")))
}

fn nums<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',').filter(|x| !x.trim().is_empty()).map(|x| num(x, what)).collect()
}

fn parse_coeffs(s: &str) -> Result<Vec<([u32; 3], i64)>> {
    let body = s
        .trim()
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| perr("coeffs must be [(i,j,k,c),...]"))?;
    let mut out = Vec::new();
    for tup in body.split(')').map(str::trim).filter(|t| !t.is_empty()) {
        let tup = tup.trim_start_matches(',').trim().strip_prefix('(').ok_or_else(|| perr(format!("bad tuple {tup:?}")))?;
        let v: Vec<i64> = nums(tup, "coefficient tuple")?;
        if v.len() != 4 || v[..3].iter().any(|&e| e < 0) {
            return Err(perr(format!("tuple ({tup}) must be (i,j,k,c) with i,j,k >= 0")));
        }
        out.push(([v[0] as u32, v[1] as u32, v[2] as u32], v[3]));
    }
    if out.is_empty() {
        return Err(perr("coeffs is empty"));
    }
    Ok(out)
}

impl CurveSpec {
    pub fn parse(s: &str) -> Result<CurveSpec> {
        // the coefficient list may contain spaces
        let (rest, coeffs) = match s.find("coeffs=") {
            Some(i) => {
                let tail = &s[i + 7..];
                let end = tail.find(']').ok_or_else(|| perr("unterminated coeffs list"))?;
                let list = parse_coeffs(&tail[..=end])?;
                (format!("{} {}", &s[..i], &tail[end + 1..]), Some(list))
            }
            None => (s.to_string(), None),
        };
        let (mut d, mut ty, mut class, mut alpha, mut betas) = (None, None, None, None, Betas::Given(vec![]));
        for tok in rest.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(|| perr(format!("expected key=value, got {tok:?}")))?;
            match k {
                "d" => d = Some(num::<u32>(v, "degree")?),
                "type" => {
                    let t: Vec<u64> = nums(v, "type")?;
                    if t.len() != 3 {
                        return Err(perr(format!("type must be m,a,b, got {v:?}")));
                    }
                    ty = Some((t[0], t[1], t[2]));
                }
                "class" => class = Some(num(v, "class")?),
                "alpha" => alpha = Some(num(v, "alpha")?),
                "beta" => betas = if v == "random" { Betas::Random } else { Betas::Given(nums(v, "beta")?) },
                _ => return Err(perr(format!("unknown key {k:?}"))),
            }
        }
        match (coeffs, ty) {
            (Some(_), Some(_)) => Err(perr("give either type= or coeffs=, not both")),
            (Some(coeffs), None) => {
                if class.is_some() || alpha.is_some() || betas != Betas::Given(vec![]) {
                    return Err(perr("class/alpha/beta only apply to type="));
                }
                Ok(CurveSpec::Raw { d, coeffs })
            }
            (None, Some((m, a, b))) => Ok(CurveSpec::Family {
                d: d.ok_or_else(|| perr("missing d="))?,
                m,
                a,
                b,
                class,
                alpha,
                betas,
            }),
            (None, None) => Err(perr("missing type= or coeffs=")),
        }
    }

    pub fn degree(&self) -> Result<u32> {
        match self {
            CurveSpec::Family { d, .. } => Ok(*d),
            CurveSpec::Raw { d: Some(d), .. } => Ok(*d),
            CurveSpec::Raw { coeffs, .. } => Ok(coeffs[0].0.iter().sum()),
        }
    }

    /// Group orders the coefficient field should support.
    pub fn orders(&self) -> Vec<u64> {
        match self {
            CurveSpec::Family { m, .. } => vec![*m],
            CurveSpec::Raw { .. } => vec![],
        }
    }

    pub fn family(&self) -> Result<Option<EquationFamily>> {
        let CurveSpec::Family { d, m, a, b, class, .. } = self else {
            return Ok(None);
        };
        let t = CyclicType::new(*d, *m, *a, *b)?;
        let listed: Vec<TypeFamily> = table(*d, View::Complete, false)
            .into_iter()
            .filter(|f| f.ctype == t && class.is_none_or(|c| f.weight_class == c))
            .collect();
        let tf = match listed.len() {
            1 => listed.into_iter().next().unwrap(),
            0 => TypeFamily::new(t, CaseTag::C6, class.unwrap_or(t.weight(&Monomial::new(*d, 0, 0))?)),
            _ => {
                let cs: Vec<String> = listed.iter().map(|f| f.weight_class.to_string()).collect();
                return Err(perr(format!("type {t} has several families; pick class= one of {}", cs.join(","))));
            }
        };
        Ok(Some(EquationFamily::from_type_family(&tf)))
    }

    pub fn build(&self, f: &PrimeField, seed: u64, trials: u64) -> Result<PlaneCurve> {
        match self {
            CurveSpec::Raw { coeffs, .. } => {
                let d = self.degree()?;
                let terms = coeffs
                    .iter()
                    .map(|(e, c)| (Monomial::from_exps(*e), f.reduce(*c)))
                    .collect::<Vec<_>>();
                let form = HomPoly::from_terms(f, d, terms)?;
                if form.is_zero() {
                    return Err(perr("all coefficients vanish mod p"));
                }
                Ok(PlaneCurve::from_form(form))
            }
            CurveSpec::Family { alpha, betas, .. } => {
                let fam = self.family()?.expect("family spec");
                match betas {
                    Betas::Random => sample_smooth(&fam, f, trials, seed),
                    Betas::Given(bs) => specialize(&fam, &Params::new(alpha.unwrap_or(1), bs), f),
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MapSpec {
    Diag { m: u64, exps: [u64; 3] },
    Perm([usize; 3]),
    Matrix([[i64; 3]; 3]),
}

impl MapSpec {
    pub fn parse(s: &str) -> Result<MapSpec> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix('[').and_then(|x| x.strip_suffix(']')) {
            let rows: Vec<Vec<i64>> = body.split(';').map(|r| nums(r, "matrix entry")).collect::<Result<_>>()?;
            if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
                return Err(perr(format!("matrix must be 3x3: {s:?}")));
            }
            return Ok(MapSpec::Matrix(std::array::from_fn(|i| std::array::from_fn(|j| rows[i][j]))));
        }
        let (head, tail) = s.split_once(':').ok_or_else(|| perr(format!("bad map {s:?}")))?;
        if head == "perm" {
            let v: Vec<usize> = nums(tail, "permutation")?;
            let mut sorted = v.clone();
            sorted.sort();
            if sorted != [0, 1, 2] {
                return Err(perr(format!("{tail:?} is not a permutation of 0,1,2")));
            }
            return Ok(MapSpec::Perm([v[0], v[1], v[2]]));
        }
        let m: u64 = num(head, "root-of-unity order")?;
        let v: Vec<u64> = nums(tail, "exponent")?;
        if m == 0 || v.len() != 3 {
            return Err(perr(format!("diagonal map must be m:e0,e1,e2, got {s:?}")));
        }
        Ok(MapSpec::Diag { m, exps: [v[0], v[1], v[2]] })
    }

    pub fn orders(&self) -> Vec<u64> {
        match self {
            MapSpec::Diag { m, .. } => vec![*m],
            _ => vec![],
        }
    }

    pub fn matrix(&self, f: &PrimeField) -> Result<ProjMatrix> {
        match self {
            MapSpec::Diag { m, exps } => {
                let xi = f.root_of_unity(*m)?;
                Ok(ProjMatrix::diag(f, exps.map(|e| f.pow(&xi, e))))
            }
            MapSpec::Perm(v) => Ok(ProjMatrix::permutation(f, *v)),
            MapSpec::Matrix(e) => ProjMatrix::new(f, e.map(|r| r.map(|x| f.reduce(x)))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::select_prime;
    use crate::poly::is_smooth;

    #[test]
    fn family_form() {
        let s = CurveSpec::parse("d=5 type=8,1,4 alpha=1 beta=3").unwrap();
        let f = PrimeField::new(select_prime(5, &s.orders())).unwrap();
        let c = s.build(&f, 1, 10).unwrap();
        assert_eq!(c.form.support().len(), 4);
        assert_eq!(c.form.coeff(&Monomial::parse("X^3Z^2").unwrap()), 3);
        assert!(is_smooth(&c.form).unwrap().is_smooth());
    }

    #[test]
    fn raw_form() {
        let s = CurveSpec::parse("coeffs=[(5,0,0,1), (0,5,0,1), (0,0,5,-1)]").unwrap();
        assert_eq!(s.degree().unwrap(), 5);
        let f = PrimeField::new(11).unwrap();
        let c = s.build(&f, 0, 1).unwrap();
        assert_eq!(c.form.coeff(&Monomial::new(0, 0, 5)), 10);
    }

    #[test]
    fn random_betas_are_smooth() {
        let s = CurveSpec::parse("d=5 type=4,1,2 beta=random").unwrap();
        let f = PrimeField::new(select_prime(5, &s.orders())).unwrap();
        assert!(is_smooth(&s.build(&f, 3, 50).unwrap().form).unwrap().is_smooth());
    }

    #[test]
    fn rejects_bad_input() {
        for bad in ["", "d=5", "d=5 type=8,1", "type=8,1,4", "d=5 type=8,1,4 colour=red", "coeffs=[(1,2)]", "d=5 type=8,1,4 coeffs=[(5,0,0,1)]"] {
            assert!(matches!(CurveSpec::parse(bad), Err(Error::Parse(_))), "{bad:?}");
        }
        for bad in ["8", "8:1,2", "perm:0,0,1", "[1,0;0,1]"] {
            assert!(MapSpec::parse(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn maps() {
        let f = PrimeField::new(41).unwrap();
        let m = MapSpec::parse("8:0,1,4").unwrap().matrix(&f).unwrap();
        assert_eq!(m.order(&f, 100), Some(8));
        let p = MapSpec::parse("perm:1,2,0").unwrap().matrix(&f).unwrap();
        assert_eq!(p, ProjMatrix::permutation(&f, [1, 2, 0]));
        let q = MapSpec::parse("[0,1,0;0,0,1;1,0,0]").unwrap().matrix(&f).unwrap();
        assert_eq!(p, q);
    }
}
