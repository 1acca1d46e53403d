//! `repring`: batch JSON front end.
//!
//! Exit codes: 0 success, 1 verified negative, 2 undecided, 3 usage error.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use repring::arith::{divisors, factorize};
use repring::characters::{inner_product, mackey_audit, RepRing, VirtualCharacter};
use repring::cyclicring::{parse_poly, CyclicRingElem};
use repring::cyclotomic::{cyclotomic_poly, psi_idempotent, CycNum, RationalCyclicPoly};
use repring::groups::{catalog_group, eppo_witness, PermGroup};
use repring::homalg::{is_flat, kunneth_ends, mat_mul, tor1, verify_ses, Elem, EuclideanRing, FPModule, Matrix};
use repring::lifting::{assemble_and_glue, audit_family, brauer_coefficients};
use repring::localization::{
    certificates_equal, divisible_primes, is_unit, model_kgroups, verify_answer, Comparison, DivisiblePrimes, MultSet,
    NonUnitCertificate, UnitAnswer, UnitProfile, DEFAULT_BOUND,
};
use repring::Error;

const SCHEMA: &str = "repring-cli/1";

#[derive(Parser, Debug)]
#[command(name = "repring", version, about = "Exact representation-ring computations with JSON output")]
struct Cli {
    /// Indented text instead of one line of JSON.
    #[arg(long, global = true)]
    human: bool,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Exponent bound B for unit searches (powers 2^j, j <= B).
    #[arg(long, global = true, default_value_t = DEFAULT_BOUND)]
    bound: u32,
    /// Add wall-clock timing to the output (makes it non-reproducible).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Order, classes and subgroup lattice.
    Group {
        #[arg(long)]
        group: String,
    },
    /// Whether every element has prime-power order.
    Eppo {
        #[arg(long)]
        group: String,
    },
    /// Character table.
    Chartab {
        #[arg(long)]
        group: String,
    },
    /// The idempotents psi_k of Q[t]/(t^n - 1), k | n.
    Psi {
        #[arg(long)]
        n: usize,
    },
    /// Coefficients of the cyclotomic polynomial Phi_n.
    Phi {
        #[arg(long)]
        n: usize,
    },
    /// Exhaustive check of the Mackey relations.
    MackeyAudit {
        #[arg(long)]
        group: String,
    },
    /// Brauer induction coefficients of 1.
    Brauer {
        #[arg(long)]
        group: String,
    },
    /// Divisible primes and unit tables of a multiplicative set.
    Certify {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "")]
        profile: String,
        /// Second profile to compare saturations with.
        #[arg(long)]
        compare: Option<String>,
    },
    /// Glue compatible families into an element of R(G).
    Lift {
        #[arg(long)]
        group: String,
        #[arg(long)]
        subgroup: String,
        #[arg(long)]
        element: String,
        #[arg(long, default_value = "")]
        profile: String,
    },
    /// Tor_1 of two finitely presented modules.
    Tor {
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
        /// Number of random re-presentations of M checked.
        #[arg(long, default_value_t = 5)]
        samples: usize,
    },
    /// Ends of the Kunneth sequence, optionally checked against a middle term.
    Kunneth {
        #[arg(long, default_value = "z")]
        ring: String,
        #[arg(long)]
        m: String,
        #[arg(long)]
        n: String,
        #[arg(long)]
        middle: Option<String>,
    },
}

/// Status beyond the verification section.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok = 0,
    Negative = 1,
    Undecided = 2,
}

struct Report {
    inputs: Value,
    outputs: Value,
    checks: Vec<(String, bool)>,
    status: Status,
}

impl Report {
    fn new(inputs: Value) -> Self {
        Report { inputs, outputs: Value::Object(Map::new()), checks: Vec::new(), status: Status::Ok }
    }

    fn set(&mut self, key: &str, v: Value) {
        self.outputs.as_object_mut().expect("object").insert(key.to_string(), v);
    }

    fn check(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push((name.into(), ok));
    }

    fn status(&mut self, s: Status) {
        self.status = self.status.max(s);
    }
}

fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

fn rat(x: &BigRational) -> Value {
    if x.is_integer() {
        int(&x.to_integer())
    } else {
        json!(x.to_string())
    }
}

fn cyc(x: &CycNum) -> Value {
    Value::Array(x.coeffs().iter().map(rat).collect())
}

fn coords(f: &VirtualCharacter) -> Value {
    Value::Array(f.coords().iter().map(int).collect())
}

fn load_group(name: &str) -> Result<Arc<PermGroup>, Error> {
    Ok(Arc::new(catalog_group(name)?))
}

fn sub_text(ring: &RepRing, h: usize) -> String {
    ring.subgroup(h).generators_text(ring.group())
}

fn elem_text(g: &PermGroup, x: usize) -> String {
    g.element(x).to_string()
}

/// Splits at `;` outside brackets.
fn split_top(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if c == ';' && depth == 0 {
            out.push(std::mem::take(&mut cur));
        } else {
            cur.push(c);
        }
    }
    out.push(cur);
    out.into_iter().map(|t| t.trim().to_string()).filter(|t| !t.is_empty()).collect()
}

fn parse_coords(ring: &RepRing, h: usize, s: &str) -> Result<VirtualCharacter, Error> {
    let v: Vec<serde_json::Number> =
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("coordinates {:?}: {}", s, e)))?;
    let c: Vec<BigInt> = v
        .iter()
        .map(|n| n.as_i64().map(BigInt::from).ok_or_else(|| Error::Parse(format!("non-integer coordinate {}", n))))
        .collect::<Result<_, _>>()?;
    if c.len() != ring.rank(h) {
        return Err(Error::Parse(format!("expected {} coordinates, got {}", ring.rank(h), c.len())));
    }
    ring.from_coords(h, c)
}

/// Profile items separated by `;`: an integer, coordinates `[..]` in the
/// irreducible basis of G, or `perm(<subgroup generators>)` for the
/// permutation character on the cosets of that subgroup.
fn parse_profile(ring: &RepRing, s: &str) -> Result<MultSet, Error> {
    let w = ring.whole_id();
    let mut gens = Vec::new();
    for item in split_top(s) {
        let v = if item.starts_with('[') {
            parse_coords(ring, w, &item)?
        } else if let Some(inner) = item.strip_prefix("perm(").and_then(|t| t.strip_suffix(')')) {
            let h = ring.id_of(&ring.group().parse_subgroup(inner)?);
            ring.induce(&ring.one(h), w)?
        } else {
            let n: BigInt = item.parse().map_err(|_| Error::Parse(format!("profile item {:?}", item)))?;
            ring.constant(w, &n)
        };
        gens.push(v);
    }
    MultSet::new(w, gens)
}

fn parse_element(ring: &RepRing, k: usize, s: &str) -> Result<VirtualCharacter, Error> {
    if s.trim_start().starts_with('[') {
        return parse_coords(ring, k, s);
    }
    let gen = ring.subgroup(k).cyclic_generator(ring.group()).ok_or(Error::NotCyclic)?;
    let f = parse_poly(s, ring.subgroup(k).order())?;
    ring.from_cyclic(k, gen, &f)
}

fn parse_entry(ring: &EuclideanRing, v: &Value) -> Result<Elem, Error> {
    let bad = || Error::Parse(format!("matrix entry {}", v));
    match v {
        Value::Number(n) => Ok(ring.from_int(n.as_i64().ok_or_else(bad)?)),
        Value::Array(cs) => {
            let c: Vec<i64> = cs.iter().map(|x| x.as_i64().ok_or_else(bad)).collect::<Result<_, _>>()?;
            Ok(ring.elem(&c))
        }
        _ => Err(bad()),
    }
}

/// A JSON array of relation rows (entries are integers or coefficient
/// vectors in zeta), or `{"generators": k, "relations": [...]}`.
fn parse_module(ring: EuclideanRing, s: &str) -> Result<FPModule, Error> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(format!("module {:?}: {}", s, e)))?;
    let (gens, rows) = match &v {
        Value::Array(rows) => (rows.first().and_then(|r| r.as_array()).map_or(0, |r| r.len()), rows.clone()),
        Value::Object(o) => {
            let g = o.get("generators").and_then(|g| g.as_u64()).ok_or_else(|| Error::Parse("missing generators".into()))?;
            let rows = o.get("relations").and_then(|r| r.as_array()).cloned().unwrap_or_default();
            (g as usize, rows)
        }
        _ => return Err(Error::Parse("module must be an array or an object".into())),
    };
    let m: Matrix = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Error::Parse(format!("relation row {}", r)))?
                .iter()
                .map(|x| parse_entry(&ring, x))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<_, _>>()?;
    FPModule::new(ring, gens, m)
}

fn module_json(m: &FPModule) -> Result<Value, Error> {
    let inv = m.invariants()?;
    Ok(json!({
        "free_rank": inv.free_rank,
        "torsion": inv.torsion.iter().map(cyc).collect::<Vec<_>>(),
        "torsion_order": int(&m.torsion_order()?),
        "text": m.to_string(),
    }))
}

fn certificate_json(g: &PermGroup, c: &NonUnitCertificate) -> Value {
    match c {
        NonUnitCertificate::Dimension { f_dim, t_dim } => json!({"kind": "dimension", "f_dim": int(f_dim), "t_dim": int(t_dim)}),
        NonUnitCertificate::ClassValue { element, f_norm, t_norm } => json!({
            "kind": "class_value", "element": elem_text(g, *element), "f_norm": int(f_norm), "t_norm": int(t_norm)
        }),
    }
}

fn answer_json(g: &PermGroup, a: &UnitAnswer) -> Value {
    match a {
        UnitAnswer::Unit(w) => json!({"verdict": "unit", "exponent": w.exponent, "cofactor": coords(&w.cofactor)}),
        UnitAnswer::NonUnit(c) => json!({"verdict": "nonunit", "certificate": certificate_json(g, c)}),
        UnitAnswer::Undecided { bound } => json!({"verdict": "undecided", "bound": bound}),
    }
}

fn primes_json(d: &DivisiblePrimes) -> Value {
    match d {
        DivisiblePrimes::All => json!("all"),
        DivisiblePrimes::Finite(v) => json!(v),
    }
}

fn cmd_group(r: &mut Report, name: &str) -> Result<(), Error> {
    let g = load_group(name)?;
    let ring = RepRing::new(g.clone());
    let classes: Vec<Value> = g
        .conjugacy_classes()
        .iter()
        .map(|c| json!({"representative": elem_text(&g, c[0]), "size": c.len(), "order": g.element_order(c[0])}))
        .collect();
    let subgroups: Vec<Value> = (0..ring.num_subgroups())
        .map(|h| {
            let s = ring.subgroup(h);
            json!({"id": h, "order": s.order(), "generators": sub_text(&ring, h), "cyclic": s.is_cyclic(&g), "normal": s.is_normal_in(&g, &g.whole())})
        })
        .collect();
    let sizes: usize = g.conjugacy_classes().iter().map(|c| c.len()).sum();
    r.check("class sizes sum to the order", sizes == g.order());
    r.check("lattice ends with the whole group", ring.subgroup(ring.whole_id()).order() == g.order());
    r.set("order", json!(g.order()));
    r.set("degree", json!(g.degree()));
    r.set("generators", json!(g.generators().iter().map(|p| p.to_string()).collect::<Vec<_>>()));
    r.set("exponent", json!(g.exponent()));
    r.set("abelian", json!(g.is_abelian()));
    r.set("classes", Value::Array(classes));
    r.set("subgroups", Value::Array(subgroups));
    Ok(())
}

fn cmd_eppo(r: &mut Report, name: &str) -> Result<(), Error> {
    let g = load_group(name)?;
    match eppo_witness(&g) {
        None => r.set("eppo", json!(true)),
        Some(o) => {
            let x = (0..g.order()).find(|&x| g.element_order(x) == o).expect("witness order occurs");
            r.set("eppo", json!(false));
            r.set("witness_order", json!(o));
            r.set("witness", json!(elem_text(&g, x)));
            r.check("witness order is not a prime power", factorize(o).len() > 1);
            r.status(Status::Negative);
        }
    }
    Ok(())
}

fn cmd_chartab(r: &mut Report, name: &str) -> Result<(), Error> {
    let g = load_group(name)?;
    let ring = RepRing::new(g.clone());
    let t = ring.table(ring.whole_id());
    let reps = t.class_representatives();
    let classes: Vec<Value> = reps
        .iter()
        .zip(t.class_sizes())
        .map(|(&x, &s)| json!({"representative": elem_text(&g, x), "size": s, "order": g.element_order(x)}))
        .collect();
    let irr = t.irreducibles();
    let rows: Vec<Value> = irr
        .iter()
        .map(|chi| json!({"degree": chi.degree(), "values": chi.values().iter().map(cyc).collect::<Vec<_>>()}))
        .collect();
    let mut orth = true;
    for (i, a) in irr.iter().enumerate() {
        for (j, b) in irr.iter().enumerate() {
            let ip = inner_product(a, b)?;
            orth &= ip == CycNum::from_int(ip.level(), (i == j) as i64);
        }
    }
    r.check("row orthogonality", orth);
    r.check("number of irreducibles equals number of classes", irr.len() == reps.len());
    r.set("level", json!(t.level()));
    r.set("classes", Value::Array(classes));
    r.set("irreducibles", Value::Array(rows));
    Ok(())
}

fn cmd_psi(r: &mut Report, n: usize) -> Result<(), Error> {
    let ks = divisors(n);
    let psis: Vec<RationalCyclicPoly> = ks.iter().map(|&k| psi_idempotent(k, n)).collect::<Result<_, _>>()?;
    let sum = psis.iter().fold(RationalCyclicPoly::zero(n), |a, b| a.add(b));
    r.check("sum is 1", sum == RationalCyclicPoly::one(n));
    let mut orth = true;
    for (i, a) in psis.iter().enumerate() {
        for (j, b) in psis.iter().enumerate() {
            orth &= a.mul(b) == if i == j { a.clone() } else { RationalCyclicPoly::zero(n) };
        }
    }
    r.check("orthogonal idempotents", orth);
    let list: Vec<Value> = ks
        .iter()
        .zip(&psis)
        .map(|(k, p)| json!({"k": k, "coeffs": p.coeffs.iter().map(rat).collect::<Vec<_>>()}))
        .collect();
    r.set("psi", Value::Array(list));
    Ok(())
}

fn cmd_phi(r: &mut Report, n: usize) -> Result<(), Error> {
    if n == 0 {
        return Err(Error::Parse("n must be positive".into()));
    }
    let p = cyclotomic_poly(n);
    r.check("degree is phi(n)", p.degree() == repring::arith::euler_phi(n));
    r.set("phi", Value::Array(p.coeffs.iter().map(int).collect()));
    Ok(())
}

fn cmd_mackey(r: &mut Report, name: &str) -> Result<(), Error> {
    let ring = RepRing::new(load_group(name)?);
    let audit = mackey_audit(&ring)?;
    for t in &audit.relations {
        r.check(t.name, t.failed == 0);
    }
    r.set(
        "relations",
        Value::Array(audit.relations.iter().map(|t| json!({"name": t.name, "checked": t.checked, "failed": t.failed})).collect()),
    );
    r.set("checked", json!(audit.checked()));
    Ok(())
}

fn cmd_brauer(r: &mut Report, name: &str) -> Result<(), Error> {
    let ring = RepRing::new(load_group(name)?);
    let b = brauer_coefficients(&ring)?;
    r.check("sum of inductions is 1", b.total(&ring) == ring.one(ring.whole_id()));
    let entries: Vec<Value> = b
        .entries
        .iter()
        .map(|(h, phi)| json!({"subgroup": sub_text(&ring, *h), "order": ring.subgroup(*h).order(), "coords": coords(phi)}))
        .collect();
    r.set("entries", Value::Array(entries));
    Ok(())
}

fn cmd_certify(r: &mut Report, name: &str, profile: &str, compare: Option<&str>, bound: u32) -> Result<(), Error> {
    let g = load_group(name)?;
    let ring = RepRing::new(g.clone());
    let s = parse_profile(&ring, profile)?;
    r.set(
        "generators",
        Value::Array(s.generators().iter().map(|x| json!({"coords": coords(x), "dimension": int(&ring.dimension(x))})).collect()),
    );
    r.set("divisible_primes", primes_json(&divisible_primes(&ring, &s)));
    let models = model_kgroups(&ring, &s)?;
    let mut seen = std::collections::HashSet::new();
    let mut tables = Vec::new();
    let mut undecided = 0usize;
    let mut ok = true;
    for model in &models {
        let h = model.subgroup;
        let sub = ring.subgroup(h);
        if !sub.is_cyclic(&g) {
            continue;
        }
        let class = (0..g.order()).map(|x| ring.conjugate_id(x, h)).min().expect("nonempty");
        if !seen.insert(class) {
            continue;
        }
        let gen = sub.cyclic_generator(&g).expect("cyclic");
        let n = sub.order();
        let mut tests: Vec<(String, VirtualCharacter)> = factorize(g.order())
            .into_iter()
            .map(|(p, _)| (p.to_string(), ring.constant(h, &BigInt::from(p))))
            .collect();
        for d in divisors(n).into_iter().filter(|&d| d > 1) {
            let phi = CyclicRingElem::from_coeffs(n, &cyclotomic_poly(d).coeffs);
            tests.push((format!("Phi_{}(t)", d), ring.from_cyclic(h, gen, &phi)?));
        }
        let sh = repring::localization::restricted_profile(&ring, &s, h)?;
        let mut units = Vec::new();
        for (label, x) in &tests {
            let a = is_unit(&ring, x, &sh, bound);
            ok &= verify_answer(&ring, x, &sh, &a);
            if matches!(a, UnitAnswer::Undecided { .. }) {
                undecided += 1;
            }
            let mut v = answer_json(&g, &a);
            v["element"] = json!(label);
            units.push(v);
        }
        let restricted: Vec<String> =
            model.generators.iter().map(|x| ring.to_cyclic(x, gen).map(|c| c.to_text())).collect::<Result<_, _>>()?;
        tables.push(json!({
            "subgroup": sub_text(&ring, h),
            "order": n,
            "restricted_generators": restricted,
            "split_levels": model.split_levels,
            "k1_vanishes": model.k1_vanishes(),
            "units": units,
        }));
    }
    r.check("every unit answer re-verified", ok);
    r.set("cyclic_subgroups", Value::Array(tables));
    r.set("bound", json!(bound));
    r.set("undecided", json!(undecided));
    if undecided > 0 {
        r.status(Status::Undecided);
    }
    if let Some(other) = compare {
        let s2 = parse_profile(&ring, other)?;
        let cmp = certificates_equal(&ring, &s, &s2, bound)?;
        let v = match &cmp {
            Comparison::Equal => json!({"verdict": "equal"}),
            Comparison::Distinct { side, index, certificate } => {
                let (x, o) = if *side == 0 { (&s.generators()[*index], &s2) } else { (&s2.generators()[*index], &s) };
                r.check("distinguishing certificate verifies", verify_answer(&ring, x, o, &UnitAnswer::NonUnit(certificate.clone())));
                r.status(Status::Negative);
                json!({"verdict": "distinct", "side": side, "index": index, "certificate": certificate_json(&g, certificate)})
            }
            Comparison::Undecided { side, index } => {
                r.status(Status::Undecided);
                json!({"verdict": "undecided", "side": side, "index": index})
            }
        };
        if cmp == Comparison::Equal {
            let mut all = true;
            for (a, b) in [(&s, &s2), (&s2, &s)] {
                for x in a.generators() {
                    let ans = is_unit(&ring, x, b, bound);
                    all &= ans.is_unit() && verify_answer(&ring, x, b, &ans);
                }
            }
            r.check("unit witnesses in both directions verify", all);
        }
        r.set("comparison", v);
    }
    Ok(())
}

fn cmd_lift(r: &mut Report, name: &str, subgroup: &str, element: &str, profile: &str, bound: u32) -> Result<(), Error> {
    let g = load_group(name)?;
    let ring = RepRing::new(g.clone());
    let k = ring.id_of(&g.parse_subgroup(subgroup)?);
    let f = parse_element(&ring, k, element)?;
    let s = parse_profile(&ring, profile)?;
    let prof = UnitProfile::new(s, bound);
    let res = assemble_and_glue(&ring, k, &f, &prof)?;
    for fam in &res.families {
        r.check(format!("(res) and (con) audit for p = {}", fam.prime), audit_family(&ring, fam).is_ok());
    }
    let gen = ring.subgroup(k).cyclic_generator(&g).ok_or(Error::NotCyclic)?;
    let fk = ring.to_cyclic(&ring.restrict(&res.f_tilde, k)?, gen)?;
    r.check("res^K(f~) = multiplier * f", fk == &res.multiplier * &ring.to_cyclic(&f, gen)?);
    for l in 0..ring.num_subgroups() {
        if !ring.subgroup(l).is_cyclic(&g) {
            continue;
        }
        let fl = ring.restrict(&res.f_tilde, l)?;
        let o = ring.subgroup(l).order();
        let fam_ok = res.families.iter().any(|fam| fam.get(l) == Some(&fl));
        r.check(format!("res to {} matches its family", sub_text(&ring, l)), o == 1 || fam_ok);
        let sl = prof.at(&ring, l)?;
        let a = is_unit(&ring, &fl, &sl, bound);
        r.check(format!("res to {} is a certified unit", sub_text(&ring, l)), a.is_unit() && verify_answer(&ring, &fl, &sl, &a));
    }
    let families: Vec<Value> = res
        .families
        .iter()
        .map(|fam| {
            json!({
                "prime": fam.prime,
                "entries": fam.entries.iter().map(|(&h, v)| json!({"subgroup": sub_text(&ring, h), "coords": coords(v)})).collect::<Vec<_>>(),
            })
        })
        .collect();
    r.set("f_tilde", coords(&res.f_tilde));
    r.set("dimension", int(&ring.dimension(&res.f_tilde)));
    r.set("multiplier", json!(res.multiplier.to_text()));
    r.set("families", Value::Array(families));
    r.set("log", json!(res.log));
    Ok(())
}

fn random_unimodular(rng: &mut ChaCha8Rng, ring: &EuclideanRing, n: usize) -> Matrix {
    let mut m: Matrix = (0..n).map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect()).collect();
    if n < 2 {
        return m;
    }
    for _ in 0..3 {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            continue;
        }
        let c: Vec<i64> = (0..ring.degree()).map(|_| rng.gen_range(-2..=2)).collect();
        let c = ring.elem(&c);
        let rj = m[j].clone();
        for (x, y) in m[i].iter_mut().zip(&rj) {
            *x = &*x + &(&c * y);
        }
    }
    m
}

fn cmd_tor(r: &mut Report, ring: &str, m: &str, n: &str, samples: usize, seed: u64) -> Result<(), Error> {
    let ring = EuclideanRing::parse(ring)?;
    let (m, n) = (parse_module(ring, m)?, parse_module(ring, n)?);
    let t = tor1(&m, &n)?;
    r.check("symmetric", t.is_isomorphic(&tor1(&n, &m)?)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut same = true;
    for _ in 0..samples {
        let (rows, g) = (m.relations().len(), m.generators());
        let u = random_unimodular(&mut rng, &ring, rows);
        let v = random_unimodular(&mut rng, &ring, g);
        let moved = mat_mul(&ring, &mat_mul(&ring, &u, m.relations(), rows, g), &v, g, g);
        same &= tor1(&FPModule::new(ring, g, moved)?, &n)?.is_isomorphic(&t)?;
    }
    r.check(format!("independent of {} random re-presentations of M", samples), same);
    r.check("Tor(M,M) = 0 iff M flat", tor1(&m, &m)?.is_zero()? == is_flat(&m)?);
    r.set("ring", json!(ring.to_string()));
    r.set("m", module_json(&m)?);
    r.set("n", module_json(&n)?);
    r.set("tor", module_json(&t)?);
    r.set("m_flat", json!(is_flat(&m)?));
    Ok(())
}

fn cmd_kunneth(r: &mut Report, ring: &str, m: &str, n: &str, middle: Option<&str>) -> Result<(), Error> {
    let ring = EuclideanRing::parse(ring)?;
    let (m, n) = (parse_module(ring, m)?, parse_module(ring, n)?);
    let ends = kunneth_ends(&m, &n)?;
    r.set("ring", json!(ring.to_string()));
    r.set("tensor", module_json(&ends.0)?);
    r.set("tor", module_json(&ends.1)?);
    if let Some(mid) = middle {
        let mid = parse_module(ring, mid)?;
        let rep = verify_ses(&ends, &mid)?;
        r.set(
            "ses",
            json!({
                "middle": module_json(&mid)?,
                "ranks": [rep.rank_left, rep.rank_middle, rep.rank_right],
                "torsion_orders": [int(&rep.torsion_left), int(&rep.torsion_middle), int(&rep.torsion_right)],
                "consistent": rep.consistent,
            }),
        );
        if !rep.consistent {
            r.status(Status::Negative);
        }
    }
    Ok(())
}

fn error_kind(e: &Error) -> (&'static str, Status, bool) {
    match e {
        Error::NotUnit(_) => ("not_unit", Status::Negative, false),
        Error::Undecided(_) => ("undecided", Status::Undecided, false),
        Error::Internal(_) | Error::Inexact(_) => ("internal", Status::Negative, false),
        Error::UnknownGroup(_) => ("unknown_group", Status::Ok, true),
        Error::OrderCap(_) => ("order_cap", Status::Ok, true),
        Error::Parse(_) => ("parse", Status::Ok, true),
        Error::NotEppo(_) => ("not_eppo", Status::Ok, true),
        Error::NotCyclic => ("not_cyclic", Status::Ok, true),
        Error::UnsupportedRing(_) => ("unsupported_ring", Status::Ok, true),
        _ => ("invalid_input", Status::Ok, true),
    }
}

fn render_human(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(o) => {
            for (k, x) in o {
                match x {
                    Value::Object(_) | Value::Array(_) if !is_flat_array(x) => {
                        out.push_str(&format!("{}{}:\n", pad, k));
                        render_human(x, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{}{}: {}\n", pad, k, x)),
                }
            }
        }
        Value::Array(a) => {
            for x in a {
                if is_flat_array(x) || !(x.is_object() || x.is_array()) {
                    out.push_str(&format!("{}- {}\n", pad, x));
                } else {
                    out.push_str(&format!("{}-\n", pad));
                    render_human(x, indent + 1, out);
                }
            }
        }
        _ => out.push_str(&format!("{}{}\n", pad, v)),
    }
}

fn is_flat_array(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && (!x.is_array() || is_flat_array(x))),
        _ => false,
    }
}

fn emit(v: &Value, human: bool) {
    if human {
        let mut s = String::new();
        render_human(v, 0, &mut s);
        print!("{}", s);
    } else {
        println!("{}", v);
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Group { .. } => "group",
        Command::Eppo { .. } => "eppo",
        Command::Chartab { .. } => "chartab",
        Command::Psi { .. } => "psi",
        Command::Phi { .. } => "phi",
        Command::MackeyAudit { .. } => "mackey-audit",
        Command::Brauer { .. } => "brauer",
        Command::Certify { .. } => "certify",
        Command::Lift { .. } => "lift",
        Command::Tor { .. } => "tor",
        Command::Kunneth { .. } => "kunneth",
    }
}

fn inputs(cli: &Cli) -> Value {
    let mut v = match &cli.command {
        Command::Group { group } | Command::Eppo { group } | Command::Chartab { group } => json!({"group": group}),
        Command::MackeyAudit { group } | Command::Brauer { group } => json!({"group": group}),
        Command::Psi { n } | Command::Phi { n } => json!({"n": n}),
        Command::Certify { group, profile, compare } => json!({"group": group, "profile": profile, "compare": compare}),
        Command::Lift { group, subgroup, element, profile } => {
            json!({"group": group, "subgroup": subgroup, "element": element, "profile": profile})
        }
        Command::Tor { ring, m, n, samples } => json!({"ring": ring, "m": m, "n": n, "samples": samples}),
        Command::Kunneth { ring, m, n, middle } => json!({"ring": ring, "m": m, "n": n, "middle": middle}),
    };
    let o = v.as_object_mut().expect("object");
    o.insert("seed".into(), json!(cli.seed));
    o.insert("bound".into(), json!(cli.bound));
    v
}

fn run(cli: &Cli) -> (Value, u8) {
    let start = Instant::now();
    let mut r = Report::new(inputs(cli));
    let res = match &cli.command {
        Command::Group { group } => cmd_group(&mut r, group),
        Command::Eppo { group } => cmd_eppo(&mut r, group),
        Command::Chartab { group } => cmd_chartab(&mut r, group),
        Command::Psi { n } => cmd_psi(&mut r, *n),
        Command::Phi { n } => cmd_phi(&mut r, *n),
        Command::MackeyAudit { group } => cmd_mackey(&mut r, group),
        Command::Brauer { group } => cmd_brauer(&mut r, group),
        Command::Certify { group, profile, compare } => cmd_certify(&mut r, group, profile, compare.as_deref(), cli.bound),
        Command::Lift { group, subgroup, element, profile } => cmd_lift(&mut r, group, subgroup, element, profile, cli.bound),
        Command::Tor { ring, m, n, samples } => cmd_tor(&mut r, ring, m, n, *samples, cli.seed),
        Command::Kunneth { ring, m, n, middle } => cmd_kunneth(&mut r, ring, m, n, middle.as_deref()),
    };
    let mut out = json!({
        "schema": SCHEMA,
        "command": command_name(&cli.command),
        "inputs": r.inputs,
    });
    let code = match res {
        Ok(()) => {
            let failed = r.checks.iter().any(|(_, ok)| !ok);
            out["outputs"] = r.outputs;
            out["verification"] =
                Value::Array(r.checks.iter().map(|(name, ok)| json!({"check": name, "pass": ok})).collect());
            if failed {
                Status::Negative as u8
            } else {
                r.status as u8
            }
        }
        Err(e) => {
            let (kind, status, usage) = error_kind(&e);
            out["error"] = json!({"kind": kind, "message": e.to_string()});
            if usage {
                3
            } else {
                status as u8
            }
        }
    };
    if cli.timing {
        out["timing_ms"] = json!(start.elapsed().as_millis() as u64);
    }
    (out, code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                print!("{}", e);
                return ExitCode::SUCCESS;
            }
            let v = json!({"schema": SCHEMA, "error": {"kind": "usage", "message": e.to_string().trim_end()}});
            println!("{}", v);
            return ExitCode::from(3);
        }
    };
    let (out, code) = run(&cli);
    emit(&out, cli.human);
    ExitCode::from(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_items() {
        let ring = RepRing::new(load_group("S3").unwrap());
        let s = parse_profile(&ring, "2; perm((0 1)); [1, 0, 1]").unwrap();
        assert_eq!(s.generators().len(), 3);
        assert_eq!(s.generators()[1], s.generators()[2]);
        assert!(parse_profile(&ring, "").unwrap().generators().is_empty());
        assert!(parse_profile(&ring, "x").is_err());
        assert_eq!(split_top("perm((0 1); (1 2)); 3"), vec!["perm((0 1); (1 2))", "3"]);
    }

    #[test]
    fn module_input() {
        let r3 = EuclideanRing::cyclotomic(3).unwrap();
        let m = parse_module(r3, "[[[1, -1]]]").unwrap();
        assert_eq!(m.torsion_order().unwrap(), BigInt::from(3));
        let z = parse_module(EuclideanRing::integers(), r#"{"generators": 2, "relations": [[4, 0]]}"#).unwrap();
        assert_eq!(z.rank().unwrap(), 1);
        assert!(parse_module(r3, "[[\"a\"]]").is_err());
        assert!(parse_module(r3, "[]").unwrap().is_zero().unwrap());
    }
}
