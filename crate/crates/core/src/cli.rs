//! Command-line front end. `run` returns the exit code and the text to print.

use std::collections::BTreeMap;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde::Serialize;

use crate::autgrp::{
    closure, dihedral_type_generators, exhaustive_aut, fermat_generators, hessian_generators, klein_generators,
    monomial_stabilizer, GroupClosure, ProjMatrix,
};
use crate::curve_spec::{CurveSpec, MapSpec};
use crate::error::{Error, Result};
use crate::ff::{is_prime, select_prime, PrimeField};
use crate::poly::{is_smooth, Smoothness};
use crate::quotient::{branch_data, fixed_points, genus, hurwitz_quotient_genus};
use crate::render::{render_checks, render_record, render_table, table_doc, to_json, CheckReport, Format, TableDoc};
use crate::strata::{equation_components, StratumReport};
use crate::types::{table, View};
use crate::verify::{verify_degree, VerifyOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const CURVE_HELP: &str = "\
Curve: 'd=5 type=8,1,4 [class=c] [alpha=A] [beta=B1,B2,...|random]'
       or '[d=5] coeffs=[(i,j,k,c),...]' (c is the coefficient of X^i Y^j Z^k).
Betas follow the order of the free monomials in the family; missing ones are 0.
Map:   'm:e0,e1,e2' = diag(ξ^e0, ξ^e1, ξ^e2) with ξ of order m,
       'perm:i,j,k', or a matrix '[a,b,c;d,e,f;g,h,i]'.";

#[derive(Parser, Debug)]
#[command(name = "plane-aut", version, about = "Cyclic automorphism types of smooth plane curves", after_help = CURVE_HELP)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
    /// md, csv or json
    #[arg(long, global = true, default_value = "md")]
    pub format: String,
    /// prime p of the coefficient field for smooth, aut, closure and quotient
    /// (default: smallest suitable prime)
    #[arg(long, global = true)]
    pub field: Option<u64>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// random draws when sampling smooth members
    #[arg(long, global = true, default_value_t = 200)]
    pub trials: u64,
    /// worker threads (0: all cores)
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// write output to this file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct Degrees {
    /// degree(s), d >= 4
    #[arg(value_name = "D")]
    pub positional: Vec<u32>,
    #[arg(long = "degree", value_name = "D")]
    pub flag: Vec<u32>,
}

impl Degrees {
    fn resolve(&self) -> Result<Vec<u32>> {
        let mut v: Vec<u32> = self.positional.iter().chain(&self.flag).copied().collect();
        v.sort();
        v.dedup();
        if v.is_empty() {
            return Err(Error::Parse("missing degree".into()));
        }
        if let Some(d) = v.iter().find(|&&d| d < 4) {
            return Err(Error::Parse(format!("degree {d} < 4")));
        }
        Ok(v)
    }
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Table of cyclic types and their invariant families.
    Types {
        #[command(flatten)]
        degrees: Degrees,
        /// include forced-reducible and singular families
        #[arg(long)]
        unfiltered: bool,
        /// every divisor of every case bound, not only the published listing
        #[arg(long)]
        complete: bool,
    },
    /// Consistency checks for a degree; exit status 1 on any mismatch.
    Verify {
        #[command(flatten)]
        degrees: Degrees,
        /// also run the brute-force automorphism search (d = 4)
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Smoothness of a curve.
    Smooth { curve: String },
    /// Automorphisms of a curve: monomial stabilizer, optionally all of them.
    Aut {
        curve: String,
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 50_000_000)]
        budget: u64,
    },
    /// Group generated by maps or by a named generator set.
    Closure {
        maps: Vec<String>,
        /// hessian, fermat, klein or dihedral (needs --degree)
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        degree: Option<u32>,
        #[arg(long, default_value_t = 100_000)]
        bound: usize,
    },
    /// Branch data and quotient genus of a cyclic automorphism.
    Quotient {
        curve: String,
        #[arg(long = "map")]
        map: String,
    },
    /// Equation components of the locus with a given cyclic group.
    Strata {
        #[command(flatten)]
        degrees: Degrees,
        /// group order (default: all orders)
        #[arg(long)]
        order: Option<u64>,
    },
}

fn field_for(cli: &Cli, d: u32, orders: &[u64]) -> Result<PrimeField> {
    match cli.field {
        Some(p) if !is_prime(p) => Err(Error::Parse(format!("--field {p} is not prime"))),
        Some(p) => PrimeField::new(p),
        None => PrimeField::new(select_prime(d, orders)),
    }
}

#[derive(Serialize)]
struct SmoothReport {
    p: u64,
    curve: String,
    smooth: bool,
    singular_point: Option<String>,
}

#[derive(Serialize)]
struct GroupReport {
    p: u64,
    order: usize,
    cyclic: bool,
    abelian: bool,
    element_orders: BTreeMap<u64, usize>,
}

impl GroupReport {
    fn new(f: &PrimeField, g: &GroupClosure) -> GroupReport {
        GroupReport {
            p: f.p(),
            order: g.order,
            cyclic: g.is_cyclic(),
            abelian: g.is_abelian(f),
            element_orders: g.order_histogram.clone(),
        }
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        let hist: Vec<String> = self.element_orders.iter().map(|(o, c)| format!("{c}×{o}")).collect();
        vec![
            ("p", self.p.to_string()),
            ("order", self.order.to_string()),
            ("cyclic", self.cyclic.to_string()),
            ("abelian", self.abelian.to_string()),
            ("element orders", hist.join(" ")),
        ]
    }
}

#[derive(Serialize)]
struct AutReport {
    curve: String,
    monomial_stabilizer: GroupReport,
    exhaustive: Option<GroupReport>,
}

#[derive(Serialize)]
struct QuotientReport {
    p: u64,
    curve: String,
    map: String,
    group_order: u64,
    genus: u64,
    fixed_points: Vec<(String, u64)>,
    orbits: Vec<(u64, u64)>,
    profile: Vec<u64>,
    quotient_genus: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

/// Note for the degree-5 Z/8 locus `X^5 + Y^4Z + XZ^4 + βX^3Z^2`: its four points
/// `(1:0:a)` have index 4 under the order-8 map, a value often misstated as 2.
fn z8_index_note(form: &crate::poly::HomPoly, data: &crate::quotient::BranchData) -> Option<String> {
    let m = |s: &str| crate::poly::Monomial::parse(s).ok();
    let core = [m("X^5")?, m("Y^4Z")?, m("XZ^4")?];
    let allowed = [core[0], core[1], core[2], m("X^3Z^2")?];
    let shape = form.degree() == 5
        && core.iter().all(|c| form.coeff(c) != 0)
        && form.terms().iter().all(|(mo, _)| allowed.contains(mo));
    let quads: u64 = data.orbits.iter().filter(|o| o.1 == 4).map(|o| o.0).sum();
    (shape && data.group_order == 8 && quads == 4)
        .then(|| "the four points (1:0:a) have index 4 (stabilizer of order 4), not 2".to_string())
}

fn cmd_types(fmt: Format, degrees: &Degrees, unfiltered: bool, complete: bool) -> Result<(i32, String)> {
    let view = if complete { View::Complete } else { View::Published };
    let docs: Vec<TableDoc> = degrees.resolve()?.into_iter().map(|d| table_doc(d, view, !unfiltered)).collect();
    if fmt == Format::Json && docs.len() > 1 {
        return Ok((EXIT_OK, to_json(&docs)?));
    }
    let mut out = String::new();
    for doc in &docs {
        out.push_str(&render_table(doc, fmt)?);
        if fmt == Format::Md {
            out.push('\n');
        }
    }
    Ok((EXIT_OK, out))
}

fn cmd_verify(cli: &Cli, fmt: Format, degrees: &Degrees, exhaustive: bool, budget: u64) -> Result<(i32, String)> {
    let opts = VerifyOptions {
        seed: cli.seed,
        trials: cli.trials,
        exhaustive,
        budget,
    };
    let reports: Vec<CheckReport> = degrees
        .resolve()?
        .par_iter()
        .map(|&d| CheckReport::new(d, verify_degree(d, &opts)))
        .collect();
    let code = if reports.iter().all(|r| r.failed == 0) { EXIT_OK } else { EXIT_MISMATCH };
    if fmt == Format::Json && reports.len() > 1 {
        return Ok((code, to_json(&reports)?));
    }
    let mut out = String::new();
    for r in &reports {
        out.push_str(&render_checks(r, fmt)?);
        if fmt == Format::Md {
            out.push('\n');
        }
    }
    Ok((code, out))
}

fn parse_curve(cli: &Cli, s: &str, extra_orders: &[u64]) -> Result<(PrimeField, crate::family::PlaneCurve)> {
    let spec = CurveSpec::parse(s)?;
    let d = spec.degree()?;
    let mut orders = spec.orders();
    orders.extend_from_slice(extra_orders);
    let f = field_for(cli, d, &orders)?;
    let c = spec.build(&f, cli.seed, cli.trials)?;
    Ok((f, c))
}

fn cmd_smooth(cli: &Cli, fmt: Format, curve: &str) -> Result<(i32, String)> {
    let (f, c) = parse_curve(cli, curve, &[])?;
    let s = is_smooth(&c.form)?;
    let rep = SmoothReport {
        p: f.p(),
        curve: c.form.to_string(),
        smooth: s.is_smooth(),
        singular_point: match &s {
            Smoothness::Smooth => None,
            Smoothness::Singular(pt) => Some(pt.to_string()),
        },
    };
    let mut fields = vec![("p", rep.p.to_string()), ("curve", rep.curve.clone()), ("smooth", rep.smooth.to_string())];
    if let Some(pt) = &rep.singular_point {
        fields.push(("singular point", pt.clone()));
    }
    Ok((EXIT_OK, render_record("Smoothness", &fields, &rep, fmt)?))
}

fn cmd_aut(cli: &Cli, fmt: Format, curve: &str, exhaustive: bool, budget: u64) -> Result<(i32, String)> {
    let (f, c) = parse_curve(cli, curve, &[])?;
    let stab = GroupReport::new(&f, &monomial_stabilizer(&c.form));
    let full = if exhaustive {
        Some(GroupReport::new(&f, &exhaustive_aut(&c.form, budget)?))
    } else {
        None
    };
    let mut fields = vec![("curve", c.form.to_string())];
    fields.extend(stab.fields());
    if let Some(g) = &full {
        fields.push(("full group order", g.order.to_string()));
        fields.push(("full group cyclic", g.cyclic.to_string()));
    }
    let rep = AutReport {
        curve: c.form.to_string(),
        monomial_stabilizer: stab,
        exhaustive: full,
    };
    Ok((EXIT_OK, render_record("Automorphisms", &fields, &rep, fmt)?))
}

fn cmd_closure(cli: &Cli, fmt: Format, maps: &[String], preset: Option<&str>, degree: Option<u32>, bound: usize) -> Result<(i32, String)> {
    let specs: Vec<MapSpec> = maps.iter().map(|s| MapSpec::parse(s)).collect::<Result<_>>()?;
    let d = degree.unwrap_or(4);
    let preset_orders = match preset {
        None => vec![],
        Some("hessian") => vec![3],
        Some("fermat") => vec![d as u64],
        Some("klein") => vec![(d * d - 3 * d + 3) as u64],
        Some("dihedral") => vec![(d * (d - 2)) as u64],
        Some(other) => return Err(Error::Parse(format!("unknown preset {other:?}"))),
    };
    if preset.is_some() && preset != Some("hessian") && degree.is_none() {
        return Err(Error::Parse("this preset needs --degree".into()));
    }
    if preset.is_none() && specs.is_empty() {
        return Err(Error::Parse("give maps or --preset".into()));
    }
    let mut orders: Vec<u64> = specs.iter().flat_map(MapSpec::orders).collect();
    orders.extend(preset_orders);
    let f = field_for(cli, d, &orders)?;
    let mut gens: Vec<ProjMatrix> = specs.iter().map(|s| s.matrix(&f)).collect::<Result<_>>()?;
    match preset {
        Some("hessian") => gens.extend(hessian_generators(&f)?),
        Some("fermat") => gens.extend(fermat_generators(&f, d)?),
        Some("klein") => gens.extend(klein_generators(&f, d)?.map(|g| g.1)),
        Some("dihedral") => gens.extend(dihedral_type_generators(&f, d)?.map(|g| g.1)),
        _ => {}
    }
    let g = closure(&f, &gens, bound)?;
    let rep = GroupReport::new(&f, &g);
    Ok((EXIT_OK, render_record("Group closure", &rep.fields(), &rep, fmt)?))
}

fn cmd_quotient(cli: &Cli, fmt: Format, curve: &str, map: &str) -> Result<(i32, String)> {
    let ms = MapSpec::parse(map)?;
    let (f, c) = parse_curve(cli, curve, &ms.orders())?;
    let m = ms.matrix(&f)?;
    if crate::poly::is_invariant(&c.form, &m).is_none() {
        return Err(Error::NotInvariant(format!("{map} does not preserve the curve")));
    }
    if !is_smooth(&c.form)?.is_smooth() {
        return Err(Error::Domain("the curve is singular".into()));
    }
    let pts = fixed_points(&c.form, &m)?;
    let data = branch_data(&c.form, &m)?;
    let g = genus(c.degree());
    let g0 = hurwitz_quotient_genus(g, &data)?;
    let rep = QuotientReport {
        p: f.p(),
        curve: c.form.to_string(),
        map: m.to_string(),
        group_order: data.group_order,
        genus: g,
        fixed_points: pts.iter().map(|b| (b.point.to_string(), b.stabilizer_order)).collect(),
        orbits: data.orbits.clone(),
        profile: data.profile(),
        quotient_genus: g0,
        note: z8_index_note(&c.form, &data),
    };
    let show = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    let mut fields = vec![
        ("p", rep.p.to_string()),
        ("curve", rep.curve.clone()),
        ("map", rep.map.clone()),
        ("group order", rep.group_order.to_string()),
        ("genus", g.to_string()),
    ];
    for (pt, s) in &rep.fixed_points {
        fields.push(("fixed point", format!("{pt}, stabilizer {s}")));
    }
    let orbits: Vec<String> = rep.orbits.iter().map(|(s, e)| format!("{s}×e{e}")).collect();
    fields.push(("orbits", orbits.join(" ")));
    fields.push(("profile", format!("({})", show(&rep.profile))));
    fields.push(("quotient genus", g0.to_string()));
    if let Some(n) = &rep.note {
        fields.push(("note", n.clone()));
    }
    Ok((EXIT_OK, render_record("Quotient", &fields, &rep, fmt)?))
}

fn cmd_strata(fmt: Format, degrees: &Degrees, order: Option<u64>) -> Result<(i32, String)> {
    let mut reports: Vec<StratumReport> = Vec::new();
    for d in degrees.resolve()? {
        let orders: Vec<u64> = match order {
            Some(m) => vec![m],
            None => {
                let mut v: Vec<u64> = table(d, View::Complete, true).iter().map(|f| f.ctype.m).collect();
                v.sort_by(|a, b| b.cmp(a));
                v.dedup();
                v
            }
        };
        reports.extend(orders.into_iter().map(|m| equation_components(d, m)));
    }
    let fields: Vec<(&str, String)> = reports
        .iter()
        .map(|r| {
            let ts: Vec<String> = r.component_types.iter().map(|t| t.to_string()).collect();
            let mut v = format!("d={} m={}: {} [{}]", r.d, r.m, r.count, ts.join(" "));
            if let Some(a) = &r.annotation {
                v.push_str(&format!(" ({a})"));
            }
            ("components", v)
        })
        .collect();
    Ok((EXIT_OK, render_record("Equation components", &fields, &reports, fmt)?))
}

fn dispatch(cli: &Cli) -> Result<(i32, String)> {
    let fmt: Format = cli.format.parse()?;
    if cli.field.is_some() && matches!(cli.cmd, Cmd::Types { .. } | Cmd::Verify { .. } | Cmd::Strata { .. }) {
        return Err(Error::Parse("--field only applies to smooth, aut, closure and quotient".into()));
    }
    match &cli.cmd {
        Cmd::Types { degrees, unfiltered, complete } => cmd_types(fmt, degrees, *unfiltered, *complete),
        Cmd::Verify { degrees, exhaustive, budget } => cmd_verify(cli, fmt, degrees, *exhaustive, *budget),
        Cmd::Smooth { curve } => cmd_smooth(cli, fmt, curve),
        Cmd::Aut { curve, exhaustive, budget } => cmd_aut(cli, fmt, curve, *exhaustive, *budget),
        Cmd::Closure { maps, preset, degree, bound } => cmd_closure(cli, fmt, maps, preset.as_deref(), *degree, *bound),
        Cmd::Quotient { curve, map } => cmd_quotient(cli, fmt, curve, map),
        Cmd::Strata { degrees, order } => cmd_strata(fmt, degrees, *order),
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::NotInvariant(_) | Error::NotPrime(_) | Error::IncompatibleField { .. } => EXIT_USAGE,
        _ => EXIT_MISMATCH,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            return (code, e.render().to_string());
        }
    };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build();
    let res = match pool {
        Ok(pool) => pool.install(|| dispatch(&cli)),
        Err(e) => Err(Error::Domain(format!("thread pool: {e}"))),
    };
    let (code, text) = match res {
        Ok(r) => r,
        Err(e) => return (exit_code(&e), format!("error: {e}\n")),
    };
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            return (EXIT_USAGE, format!("error: cannot write {}: {e}\n", path.display()));
        }
        return (code, String::new());
    }
    (code, text)
}
