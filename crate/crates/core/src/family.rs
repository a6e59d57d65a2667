//! Parametric equation families and their specializations over F_p.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ff::{Field, PrimeField};
use crate::poly::{core, is_invariant, is_smooth, HomPoly, Monomial};
use crate::types::{CyclicType, TypeFamily};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum CoefficientKind {
    /// normalized to 1
    Unit,
    /// α, must be nonzero
    NonzeroParam,
    /// β, may vanish
    FreeParam,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EquationFamily {
    pub ctype: CyclicType,
    pub entries: Vec<(Monomial, CoefficientKind)>,
}

/// The monomial of the family that pins variable `v`: `V^d` if present, else the
/// first of `V^{d-1}W` in cyclic order.
fn skeleton_monomial(d: u32, v: usize, support: &[Monomial]) -> Option<Monomial> {
    let mk = |w: Option<usize>| {
        let mut e = [0; 3];
        e[v] = if w.is_some() { d - 1 } else { d };
        if let Some(w) = w {
            e[w] = 1;
        }
        Monomial::from_exps(e)
    };
    [None, Some((v + 1) % 3), Some((v + 2) % 3)]
        .into_iter()
        .map(mk)
        .find(|m| support.contains(m))
}

impl EquationFamily {
    /// Coefficient kinds: the monomials pinning X, Y, Z are normalized to 1 by
    /// rescaling the coordinates, except that one of them keeps a nonzero
    /// parameter when the three are not all pure powers. Everything else is free.
    pub fn from_type_family(t: &TypeFamily) -> EquationFamily {
        let d = t.ctype.d;
        let mut skel: Vec<Monomial> = (0..3)
            .filter_map(|v| skeleton_monomial(d, v, &t.monomials))
            .collect();
        skel.dedup();
        let all_pure = skel.iter().all(|m| m.exponent() == d);
        let alpha = if all_pure { None } else { skel.last().copied() };
        let entries = t
            .monomials
            .iter()
            .map(|m| {
                let kind = if Some(*m) == alpha {
                    CoefficientKind::NonzeroParam
                } else if skel.contains(m) {
                    CoefficientKind::Unit
                } else {
                    CoefficientKind::FreeParam
                };
                (*m, kind)
            })
            .collect();
        EquationFamily {
            ctype: t.ctype,
            entries,
        }
    }

    pub fn support(&self) -> Vec<Monomial> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn has_alpha(&self) -> bool {
        self.entries.iter().any(|e| e.1 == CoefficientKind::NonzeroParam)
    }

    /// Free monomials in parameter order.
    pub fn free_monomials(&self) -> Vec<Monomial> {
        self.entries
            .iter()
            .filter(|e| e.1 == CoefficientKind::FreeParam)
            .map(|e| e.0)
            .collect()
    }

    pub fn is_forced_reducible(&self) -> bool {
        is_forced_reducible(&self.support())
    }

    pub fn degree(&self) -> u32 {
        self.ctype.d
    }
}

/// `β_{j,i}` names the coefficient of `X^{d-j} Y^i Z^{j-i}`.
pub fn beta_label(d: u32, m: &Monomial) -> String {
    format!("β_{{{},{}}}", d - m.i, m.j)
}

impl fmt::Display for EquationFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.ctype.d;
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(m, k)| match k {
                CoefficientKind::Unit => m.to_string(),
                CoefficientKind::NonzeroParam => format!("α{m}"),
                CoefficientKind::FreeParam => format!("{}{m}", beta_label(d, m)),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Parameter values: `alpha` for the nonzero slot (defaults to 1) and `betas` for
/// the free slots in `free_monomials` order (missing entries are 0).
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Params {
    pub alpha: Option<u64>,
    pub betas: Vec<u64>,
}

impl Params {
    pub fn new(alpha: u64, betas: &[u64]) -> Params {
        Params {
            alpha: Some(alpha),
            betas: betas.to_vec(),
        }
    }

    pub fn zero_betas() -> Params {
        Params::default()
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Provenance {
    pub family: EquationFamily,
    pub params: Params,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlaneCurve {
    pub form: HomPoly,
    pub provenance: Option<Provenance>,
}

impl PlaneCurve {
    pub fn from_form(form: HomPoly) -> PlaneCurve {
        PlaneCurve {
            form,
            provenance: None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.form.degree()
    }
}

/// Checks that `form` is fixed up to scalar by the type's diagonal map. Uses the
/// matrix when F_p has the needed roots of unity, else the weights directly.
fn assert_invariant(t: &CyclicType, form: &HomPoly) -> Result<()> {
    let ok = match t.matrix(form.field()) {
        Ok(m) => is_invariant(form, &m).is_some(),
        Err(_) => {
            let ws: std::collections::BTreeSet<u64> =
                form.support().iter().map(|m| t.weight(m)).collect::<Result<_>>()?;
            ws.len() <= 1
        }
    };
    if ok {
        Ok(())
    } else {
        Err(Error::NotInvariant(format!("form is not fixed by type {t}")))
    }
}

pub fn specialize(fam: &EquationFamily, params: &Params, f: &PrimeField) -> Result<PlaneCurve> {
    let free = fam.free_monomials();
    if params.betas.len() > free.len() {
        return Err(Error::Domain(format!(
            "{} free parameters given, family has {}",
            params.betas.len(),
            free.len()
        )));
    }
    let alpha = f.from_u64(params.alpha.unwrap_or(1));
    if fam.has_alpha() && alpha == 0 {
        return Err(Error::Domain("α must be nonzero".into()));
    }
    let mut form = HomPoly::zero(f, fam.degree());
    let mut bi = 0;
    for (m, kind) in &fam.entries {
        let c = match kind {
            CoefficientKind::Unit => 1,
            CoefficientKind::NonzeroParam => alpha,
            CoefficientKind::FreeParam => {
                let v = params.betas.get(bi).copied().unwrap_or(0);
                bi += 1;
                f.from_u64(v)
            }
        };
        form.add_term(*m, c);
    }
    assert_invariant(&fam.ctype, &form)?;
    Ok(PlaneCurve {
        form,
        provenance: Some(Provenance {
            family: fam.clone(),
            params: params.clone(),
        }),
    })
}

/// Random draws (α uniform in F_p*, β uniform in F_p) until the specialization is
/// smooth. Deterministic in `seed`.
pub fn sample_smooth(fam: &EquationFamily, f: &PrimeField, trials: u64, seed: u64) -> Result<PlaneCurve> {
    if trials == 0 {
        return Err(Error::Domain("trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nfree = fam.free_monomials().len();
    for _ in 0..trials {
        let alpha = rng.gen_range(1..f.p());
        let betas: Vec<u64> = (0..nfree).map(|_| rng.gen_range(0..f.p())).collect();
        let c = specialize(fam, &Params::new(alpha, &betas), f)?;
        if is_smooth(&c.form)?.is_smooth() {
            return Ok(c);
        }
    }
    Err(Error::Exhausted(trials))
}

/// Some variable divides every monomial.
pub fn is_forced_reducible(support: &[Monomial]) -> bool {
    (0..3).any(|v| support.iter().all(|m| m.exps()[v] > 0))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum CoreKind {
    FermatCore,
    KleinCore,
    Other,
}

const PERMS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Classifies the core of the curve. Three monomials with nonzero coefficients
/// can always be scaled to 1 over the algebraic closure for these two shapes,
/// so the comparison is on supports up to coordinate permutation.
pub fn descendant_core(c: &PlaneCurve) -> CoreKind {
    let d = c.degree();
    let mut sup = core(&c.form).support();
    sup.sort();
    let fermat = [Monomial::new(d, 0, 0), Monomial::new(0, d, 0), Monomial::new(0, 0, d)];
    let klein = [
        Monomial::new(d - 1, 1, 0),
        Monomial::new(0, d - 1, 1),
        Monomial::new(1, 0, d - 1),
    ];
    let matches = |target: &[Monomial; 3]| {
        PERMS.iter().any(|p| {
            let mut t: Vec<Monomial> = target.iter().map(|m| m.permute(*p)).collect();
            t.sort();
            t == sup
        })
    };
    if matches(&fermat) {
        CoreKind::FermatCore
    } else if matches(&klein) {
        CoreKind::KleinCore
    } else {
        CoreKind::Other
    }
}

/// For `X^5 + Y^4Z + XZ^4 + βX^3Z^2` the parameters β and -β give isomorphic
/// curves (via `Z -> iZ` with `i² = -1` and a compensating scaling of Y).
pub fn z8_parameters_equivalent(f: &PrimeField, b1: u64, b2: u64) -> bool {
    let (b1, b2) = (f.from_u64(b1), f.from_u64(b2));
    b1 == b2 || b1 == f.neg(&b2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autgrp::ProjMatrix;
    use crate::poly::apply_proj;
    use crate::types::CaseTag;

    /// Family of type m,(a,b) through `X^d`, in the given coordinates.
    fn family(d: u32, m: u64, a: u64, b: u64) -> EquationFamily {
        let t = CyclicType::new(d, m, a, b).unwrap();
        let c = t.weight(&Monomial::new(d, 0, 0)).unwrap();
        EquationFamily::from_type_family(&TypeFamily::new(t, CaseTag::C6, c))
    }

    fn form(f: &PrimeField, d: u32, terms: &[(&str, u64)]) -> HomPoly {
        HomPoly::from_terms(f, d, terms.iter().map(|(s, c)| (Monomial::parse(s).unwrap(), *c))).unwrap()
    }

    #[test]
    fn z8_specialization() {
        let f = PrimeField::new(41).unwrap();
        let fam = family(5, 8, 1, 4);
        assert_eq!(fam.to_string(), "X^5 + β_{2,0}X^3Z^2 + αXZ^4 + Y^4Z");
        let c = specialize(&fam, &Params::new(1, &[3]), &f).unwrap();
        assert_eq!(c.form, form(&f, 5, &[("X^5", 1), ("Y^4Z", 1), ("XZ^4", 1), ("X^3Z^2", 3)]));
        for beta in [2, 39] {
            let c = specialize(&fam, &Params::new(1, &[beta]), &f).unwrap();
            assert!(!is_smooth(&c.form).unwrap().is_smooth());
        }
        assert!(specialize(&fam, &Params::new(0, &[3]), &f).is_err());
    }

    #[test]
    fn z8_beta_sign() {
        // Z -> iZ, Y -> μY with μ^4 = i^{-1}: sends β to -β
        let f = PrimeField::new(97).unwrap();
        let mu = f.root_of_unity(16).unwrap();
        let i = f.pow(&mu, 4);
        let m = ProjMatrix::diag(&f, [1, f.inv(&mu).unwrap(), i]);
        let fam = family(5, 8, 1, 4);
        let c = specialize(&fam, &Params::new(1, &[5]), &f).unwrap();
        let c2 = specialize(&fam, &Params::new(1, &[92]), &f).unwrap();
        assert_eq!(apply_proj(&c.form, &m).unwrap(), c2.form);
        assert!(z8_parameters_equivalent(&f, 5, 92));
        assert!(!z8_parameters_equivalent(&f, 5, 6));
    }

    #[test]
    fn zero_free_parameters() {
        let f = PrimeField::new(37).unwrap();
        let fam = family(6, 6, 0, 1);
        let c = specialize(&fam, &Params::zero_betas(), &f).unwrap();
        for m in c.form.terms().keys() {
            let kind = fam.entries.iter().find(|e| e.0 == *m).unwrap().1;
            assert_ne!(kind, CoefficientKind::FreeParam);
        }
    }

    #[test]
    fn sampling() {
        let f = PrimeField::new(41).unwrap();
        let fam = family(5, 20, 4, 5);
        let a = sample_smooth(&fam, &f, 20, 7).unwrap();
        let b = sample_smooth(&fam, &f, 20, 7).unwrap();
        assert_eq!(a, b);
        let red = family(5, 4, 1, 3);
        assert!(red.is_forced_reducible());
        assert_eq!(sample_smooth(&red, &f, 30, 1), Err(Error::Exhausted(30)));
        let fermat = family(5, 5, 1, 2);
        assert!(!fermat.is_forced_reducible());
        let c = specialize(&fermat, &Params::zero_betas(), &f).unwrap();
        assert!(is_smooth(&c.form).unwrap().is_smooth());
        assert!(!family(5, 4, 1, 2).is_forced_reducible());
    }

    #[test]
    fn cores() {
        let f = PrimeField::new(41).unwrap();
        let c = PlaneCurve::from_form(form(&f, 5, &[("X^5", 1), ("Y^5", 1), ("Z^5", 1), ("X^2YZ^2", 7)]));
        assert_eq!(descendant_core(&c), CoreKind::FermatCore);
        let c = PlaneCurve::from_form(form(&f, 6, &[("X^5Y", 1), ("Y^5Z", 1), ("Z^5X", 1), ("X^2YZ^3", 3)]));
        assert_eq!(descendant_core(&c), CoreKind::KleinCore);
        let c = PlaneCurve::from_form(form(&f, 5, &[("X^5", 1), ("Y^4Z", 1), ("XZ^4", 1)]));
        assert_eq!(descendant_core(&c), CoreKind::Other);
    }
}
