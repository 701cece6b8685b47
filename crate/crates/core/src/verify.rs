//! Random generators and exact property checks for operators, plus the
//! cross-check of the derivative closed form against point membership.

use std::cell::OnceCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::funcalc::{indicator, probe_points, rational_from_str, rational_to_string, ratio, FunctionRep, Q};
use crate::ordinal::Ordinal;
use crate::space::{derived, derived_point, in_derived, validate, Point, Space, Step};
use crate::synthesis::{OpNode, Operator, Region};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Linear,
    Isometry,
    Pnpp,
    Positive,
    Support,
    Lattice,
    Algebra,
}

impl Check {
    pub const ALL: [Check; 7] =
        [Check::Linear, Check::Isometry, Check::Pnpp, Check::Positive, Check::Support, Check::Lattice, Check::Algebra];

    pub fn name(self) -> &'static str {
        match self {
            Check::Linear => "linear",
            Check::Isometry => "isometry",
            Check::Pnpp => "pnpp",
            Check::Positive => "positive",
            Check::Support => "support",
            Check::Lattice => "lattice",
            Check::Algebra => "algebra",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Check> {
        Check::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| Error::Unsupported(format!("check {s}")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialConfig {
    pub seed: u64,
    pub trials: u64,
    pub max_depth: u32,
    pub max_children: u64,
    pub max_coeff: i64,
    pub checks: BTreeSet<Check>,
}

impl Default for TrialConfig {
    fn default() -> Self {
        TrialConfig {
            seed: 0,
            trials: 100,
            max_depth: 3,
            max_children: 4,
            max_coeff: 5,
            checks: Check::ALL.into_iter().collect(),
        }
    }
}

impl TrialConfig {
    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn random_q(rng: &mut impl Rng, cfg: &TrialConfig) -> Q {
    ratio(rng.gen_range(-cfg.max_coeff..=cfg.max_coeff), rng.gen_range(1..=3))
}

/// A small ordinal in Cantor normal form with exponents up to `w+1`.
pub fn random_ordinal(rng: &mut impl Rng) -> Ordinal {
    let pool = [Ordinal::nat(0), Ordinal::nat(1), Ordinal::nat(2), Ordinal::nat(3), Ordinal::omega(), Ordinal::omega().succ()];
    let mut exps: Vec<usize> = (0..rng.gen_range(1..=2)).map(|_| rng.gen_range(0..pool.len())).collect();
    exps.sort_unstable_by(|a, b| b.cmp(a));
    exps.dedup();
    Ordinal::make(exps.into_iter().map(|i| (pool[i].clone(), rng.gen_range(1..=3))).collect()).expect("valid terms")
}

fn random_limit(rng: &mut impl Rng) -> Ordinal {
    loop {
        let o = random_ordinal(rng);
        if o.is_limit() {
            return o;
        }
    }
}

/// An ordinal strictly below `a`.
pub fn random_below(rng: &mut impl Rng, a: &Ordinal, depth: u32) -> Ordinal {
    let terms = a.terms();
    let i = rng.gen_range(0..terms.len());
    let mut out: Vec<(Ordinal, u64)> = terms[..i].iter().map(|t| (t.exp.clone(), t.coeff)).collect();
    let t = &terms[i];
    let c = rng.gen_range(0..t.coeff);
    if c > 0 {
        out.push((t.exp.clone(), c));
    }
    if !t.exp.is_zero() && depth > 0 && rng.gen_bool(0.7) {
        out.push((random_below(rng, &t.exp, depth - 1), rng.gen_range(1..=3)));
    }
    Ordinal::make(out).expect("descending exponents")
}

/// A constructive zero-dimensional space within the depth bound.
pub fn random_space(rng: &mut impl Rng, cfg: &TrialConfig) -> Space {
    random_space_at(rng, cfg, cfg.max_depth)
}

fn random_space_at(rng: &mut impl Rng, cfg: &TrialConfig, depth: u32) -> Space {
    if depth == 0 {
        return Space::Fin(rng.gen_range(1..=cfg.max_children.max(1)));
    }
    match rng.gen_range(0..10) {
        0 => Space::Fin(rng.gen_range(1..=cfg.max_children.max(1))),
        1..=3 => Space::interval(random_ordinal(rng), rng.gen_range(1..=3)),
        4 => Space::Cantor,
        5 | 6 => Space::Sum((0..rng.gen_range(2..=3)).map(|_| random_space_at(rng, cfg, depth - 1)).collect()),
        7 | 8 => Space::op(random_space_at(rng, cfg, depth - 1)),
        _ => Space::ramp(random_limit(rng)).expect("limit"),
    }
}

/// A random zero-dimensional space with `|K^(alpha)| >= m`.
pub fn random_host(rng: &mut impl Rng, cfg: &TrialConfig, alpha: &Ordinal, m: u64) -> Space {
    let core = match rng.gen_range(0..6) {
        0 => Space::interval(alpha.clone(), m + rng.gen_range(0..2)),
        1 => Space::interval(alpha.succ(), 1),
        2 => Space::op(Space::interval(alpha.clone(), rng.gen_range(1..=2))),
        3 => Space::ramp(alpha.add(&Ordinal::omega())).expect("limit"),
        4 => Space::Cantor,
        _ => Space::Sum((0..m).map(|_| Space::interval(alpha.clone(), 1)).collect()),
    };
    let noise = random_space_at(rng, cfg, cfg.max_depth.min(2));
    if rng.gen_bool(0.5) {
        Space::Sum(vec![noise, core])
    } else {
        Space::Sum(vec![core, noise])
    }
}

/// A random function on a canonical space.
pub fn random_function(rng: &mut impl Rng, space: &Space, cfg: &TrialConfig) -> Result<FunctionRep> {
    random_function_at(rng, space, cfg, cfg.max_depth)
}

fn random_function_at(rng: &mut impl Rng, space: &Space, cfg: &TrialConfig, depth: u32) -> Result<FunctionRep> {
    match space {
        Space::Fin(n) => Ok(FunctionRep::Leaf((0..*n).map(|_| random_q(rng, cfg)).collect())),
        Space::Cantor => {
            let d = rng.gen_range(0..=3usize);
            Ok(FunctionRep::cantor(d, &(0..1usize << d).map(|_| random_q(rng, cfg)).collect::<Vec<_>>()))
        }
        Space::Sum(parts) => Ok(FunctionRep::Sum(
            parts.iter().map(|p| random_function_at(rng, p, cfg, depth)).collect::<Result<_>>()?,
        )),
        Space::OnePoint { .. } => {
            let tail = random_q(rng, cfg);
            let mut children = BTreeMap::new();
            if depth > 0 {
                for _ in 0..rng.gen_range(0..=cfg.max_children) {
                    let n = rng.gen_range(1..=cfg.max_children + 2);
                    let member = space.canonical_member(n)?;
                    children.insert(n, random_function_at(rng, &member, cfg, depth - 1)?);
                }
            }
            Ok(FunctionRep::OnePoint { tail, children })
        }
        _ => FunctionRep::constant(space, &random_q(rng, cfg)),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CheckCount {
    pub passed: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub check: Check,
    pub trial: u64,
    pub f: Value,
    pub g: Value,
    pub c: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub trials: u64,
    pub counts: BTreeMap<Check, CheckCount>,
    pub counterexample: Option<Counterexample>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.counts.values().all(|c| c.failed == 0)
    }

    pub fn failed_checks(&self) -> Vec<Check> {
        self.counts.iter().filter(|(_, c)| c.failed > 0).map(|(k, _)| *k).collect()
    }

    pub fn to_json(&self) -> Value {
        let counts: serde_json::Map<String, Value> = self
            .counts
            .iter()
            .map(|(k, c)| (k.to_string(), json!({ "passed": c.passed, "failed": c.failed })))
            .collect();
        let cex = self.counterexample.as_ref().map(|c| {
            json!({ "check": c.check.name(), "trial": c.trial, "f": c.f, "g": c.g, "c": c.c, "detail": c.detail })
        });
        json!({ "trials": self.trials, "counts": counts, "counterexample": cex })
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in &self.counts {
            writeln!(f, "{k}: {} passed, {} failed", c.passed, c.failed)?;
        }
        if let Some(c) = &self.counterexample {
            writeln!(f, "counterexample ({} at trial {}): {}", c.check, c.trial, c.detail)?;
            writeln!(f, "  f = {}", c.f)?;
            writeln!(f, "  g = {}", c.g)?;
            writeln!(f, "  c = {}", c.c)?;
        }
        Ok(())
    }
}

fn same(a: &FunctionRep, b: &FunctionRep) -> Result<bool> {
    Ok(a.sub(b)?.norm().is_zero())
}

/// Images shared by the checks of one trial, each computed at most once.
struct Trial<'a> {
    t: &'a Operator,
    f: &'a FunctionRep,
    g: &'a FunctionRep,
    c: &'a Q,
    tf: OnceCell<FunctionRep>,
    tg: OnceCell<FunctionRep>,
}

fn cached(cell: &OnceCell<FunctionRep>, make: impl FnOnce() -> Result<FunctionRep>) -> Result<&FunctionRep> {
    if cell.get().is_none() {
        let _ = cell.set(make()?);
    }
    Ok(cell.get().expect("just set"))
}

impl Trial<'_> {
    fn tf(&self) -> Result<&FunctionRep> {
        cached(&self.tf, || self.t.apply(self.f))
    }

    fn tg(&self) -> Result<&FunctionRep> {
        cached(&self.tg, || self.t.apply(self.g))
    }
}

/// The support of `t` and the indicator of its complement.
struct Outside {
    supp: Region,
    chi: FunctionRep,
}

impl Outside {
    fn of(t: &Operator) -> Result<Outside> {
        let kc = t.canonical_codomain();
        let supp = t.support()?;
        let chi = FunctionRep::constant(kc, &Q::from_integer(1.into()))?.sub(&indicator(kc, &supp)?)?;
        Ok(Outside { supp, chi })
    }
}

/// Outcome of one check on one trial: `Ok(None)` passes, `Ok(Some(why))`
/// fails.
fn run_one(x: &Trial, check: Check, outside: &OnceCell<Outside>) -> Result<Option<String>> {
    let (t, f, g, c) = (x.t, x.f, x.g, x.c);
    let kc = t.canonical_codomain();
    match check {
        Check::Linear => {
            let lhs = t.apply(&f.add(&g.scale(c))?)?;
            let rhs = x.tf()?.add(&x.tg()?.scale(c))?;
            Ok((!same(&lhs, &rhs)?).then(|| "T(f+cg) != Tf + cTg".to_string()))
        }
        Check::Isometry => {
            let (a, b) = (x.tf()?.norm(), f.norm());
            Ok((a != b).then(|| format!("||Tf|| = {} but ||f|| = {}", rational_to_string(&a), rational_to_string(&b))))
        }
        Check::Pnpp => {
            let (a, b) = (x.tf()?.norm_pos(), f.norm_pos());
            Ok((a != b).then(|| format!("||(Tf)+|| = {} but ||f+|| = {}", rational_to_string(&a), rational_to_string(&b))))
        }
        Check::Positive => {
            let tp = t.apply(&f.pos_part())?;
            for p in probe_points(kc, &tp)? {
                let v = tp.eval(&p)?;
                if v.is_negative() {
                    return Ok(Some(format!("T(f+) = {} at {p}", rational_to_string(&v))));
                }
            }
            Ok(None)
        }
        Check::Support => {
            if outside.get().is_none() {
                let _ = outside.set(Outside::of(t)?);
            }
            let Outside { supp, chi } = outside.get().expect("just set");
            let leak = x.tf()?.mul(chi)?;
            for p in probe_points(kc, &leak)? {
                if !leak.eval(&p)?.is_zero() {
                    return Ok(Some(format!("Tf does not vanish at {p} outside {supp}")));
                }
            }
            Ok(None)
        }
        Check::Lattice => {
            let (tf, tg) = (x.tf()?, x.tg()?);
            let ok = same(&t.apply(&f.max(g)?)?, &tf.max(tg)?)? && same(&t.apply(&f.min(g)?)?, &tf.min(tg)?)?;
            Ok((!ok).then(|| "T(f v g) != Tf v Tg".to_string()))
        }
        Check::Algebra => {
            let ok = same(&t.apply(&f.mul(g)?)?, &x.tf()?.mul(x.tg()?)?)?;
            Ok((!ok).then(|| "T(fg) != Tf Tg".to_string()))
        }
    }
}

fn applicable(t: &Operator, check: Check) -> bool {
    match check {
        Check::Lattice | Check::Algebra => matches!(t.root, OpNode::Compose { .. }),
        _ => true,
    }
}

/// Runs the selected checks on `cfg.trials` random pairs `(f, g)` and scalars.
pub fn run_checks(t: &Operator, cfg: &TrialConfig) -> Report {
    let mut rng = cfg.rng();
    let lc = t.canonical_domain();
    let checks: Vec<Check> = cfg.checks.iter().copied().filter(|c| applicable(t, *c)).collect();
    let mut report = Report { trials: cfg.trials, ..Report::default() };
    let outside = OnceCell::new();
    for c in &checks {
        report.counts.insert(*c, CheckCount::default());
    }
    for trial in 0..cfg.trials {
        let inputs = random_function(&mut rng, lc, cfg).and_then(|f| Ok((f, random_function(&mut rng, lc, cfg)?)));
        let c = random_q(&mut rng, cfg);
        let (f, g) = match inputs {
            Ok(fg) => fg,
            Err(e) => {
                for check in &checks {
                    report.counts.get_mut(check).expect("initialized").failed += 1;
                }
                report.counterexample.get_or_insert(Counterexample {
                    check: checks.first().copied().unwrap_or(Check::Linear),
                    trial,
                    f: Value::Null,
                    g: Value::Null,
                    c: rational_to_string(&c),
                    detail: e.to_string(),
                });
                continue;
            }
        };
        let x = Trial { t, f: &f, g: &g, c: &c, tf: OnceCell::new(), tg: OnceCell::new() };
        for check in &checks {
            let outcome = run_one(&x, *check, &outside).unwrap_or_else(|e| Some(e.to_string()));
            let count = report.counts.get_mut(check).expect("initialized");
            match outcome {
                None => count.passed += 1,
                Some(detail) => {
                    count.failed += 1;
                    report.counterexample.get_or_insert_with(|| Counterexample {
                        check: *check,
                        trial,
                        f: f.to_json(),
                        g: g.to_json(),
                        c: rational_to_string(&c),
                        detail,
                    });
                }
            }
        }
    }
    report
}

/// Agreement between the membership oracle and the derivative closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub samples: u64,
    pub agreed: u64,
    pub first_disagreement: Option<String>,
}

impl OracleReport {
    pub fn all_agree(&self) -> bool {
        self.samples == self.agreed
    }
}

/// A point of `[1, w^a * m]`.
fn random_ordinal_point(rng: &mut impl Rng, a: &Ordinal, m: u64) -> Ordinal {
    let block = Ordinal::omega_pow(a);
    let j = rng.gen_range(0..m);
    let base = block.mul_nat(j);
    let o = if rng.gen_bool(0.3) { block.clone() } else { random_below(rng, &block, 3) };
    let o = base.add(&o);
    if o.is_zero() {
        block.mul_nat(m)
    } else {
        o
    }
}

/// A valid point of any constructive space.
pub fn random_point(rng: &mut impl Rng, s: &Space, max_copy: u64) -> Result<Point> {
    Ok(Point(match s {
        Space::Fin(n) => vec![Step::LeafIndex(rng.gen_range(0..*n))],
        Space::Interval(a, m) => vec![Step::OrdinalPoint(random_ordinal_point(rng, a, *m))],
        Space::Cantor => vec![Step::CantorPrefix((0..rng.gen_range(0..6)).map(|_| rng.gen_bool(0.5)).collect())],
        Space::Sum(parts) => {
            let i = rng.gen_range(0..parts.len());
            let mut out = vec![Step::SumBranch(i as u64)];
            out.extend(random_point(rng, &parts[i], max_copy)?.0);
            out
        }
        Space::OnePoint { .. } => {
            if rng.gen_bool(0.25) {
                vec![Step::AtInfinity]
            } else {
                let n = rng.gen_range(1..=max_copy);
                let mut out = vec![Step::CopyIndex(n)];
                out.extend(random_point(rng, &s.member(n)?, max_copy)?.0);
                out
            }
        }
        _ => return Err(Error::NotConstructive(s.to_string())),
    }))
}

/// Samples points of `s` and compares the recursive membership test with the
/// image in the closed-form derivative `derived(s, beta)`.
pub fn oracle_derived_membership(s: &Space, beta: &Ordinal, sample: u64, seed: u64) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = derived(s, beta);
    let mut report = OracleReport { samples: sample, agreed: 0, first_disagreement: None };
    for _ in 0..sample {
        let p = random_point(&mut rng, s, 5)?;
        let oracle = in_derived(s, &p, beta)?;
        let image = derived_point(s, beta, &p)?;
        let closed = match &image {
            Some(q) => validate(&d, q.steps()).is_ok(),
            None => false,
        };
        if oracle == closed && oracle == image.is_some() {
            report.agreed += 1;
        } else if report.first_disagreement.is_none() {
            report.first_disagreement =
                Some(format!("{p} in {s}: oracle says {oracle}, closed form {d} gives {image:?}"));
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MutantKind {
    /// Doubles the value of `h` in the first glue.
    TailTweak,
    /// Exchanges the regions of the first two explicit parts.
    RegionSwap,
    /// Removes the first explicit part.
    ChildDrop,
}

impl MutantKind {
    pub const ALL: [MutantKind; 3] = [MutantKind::TailTweak, MutantKind::RegionSwap, MutantKind::ChildDrop];

    pub fn name(self) -> &'static str {
        match self {
            MutantKind::TailTweak => "tail-tweak",
            MutantKind::RegionSwap => "region-swap",
            MutantKind::ChildDrop => "child-drop",
        }
    }
}

/// JSON pointer to the first glue node.
fn first_glue(v: &Value, at: String) -> Option<String> {
    if v.get("glue").is_some() {
        return Some(format!("{at}/glue"));
    }
    let parts = v.get("sum")?.as_array()?;
    parts.iter().enumerate().find_map(|(i, p)| first_glue(p, format!("{at}/sum/{i}")))
}

/// The serialized operator with one field corrupted, or `None` when the
/// operator has no glue to corrupt.
pub fn mutate(op: &Value, kind: MutantKind) -> Option<Value> {
    let ptr = first_glue(op.get("root")?, "/root".into())?;
    let mut out = op.clone();
    let glue = out.pointer_mut(&ptr)?;
    match kind {
        MutantKind::TailTweak => {
            let v = rational_from_str(glue["h"]["value"].as_str()?).ok()?;
            glue["h"]["value"] = json!(rational_to_string(&(v * Q::from_integer(2.into()))));
        }
        MutantKind::RegionSwap => {
            let parts = glue.get_mut("parts")?.as_object_mut()?;
            let r1 = parts.get("1")?.get("region")?.clone();
            let r2 = parts.get("2")?.get("region")?.clone();
            parts.get_mut("1")?["region"] = r2;
            parts.get_mut("2")?["region"] = r1;
        }
        MutantKind::ChildDrop => {
            glue.get_mut("parts")?.as_object_mut()?.remove("1")?;
        }
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum MutantOutcome {
    /// Loading the corrupted operator failed its invariants.
    Rejected(String),
    /// A check found a counterexample.
    Caught(Check),
    Survived,
}

impl MutantOutcome {
    pub fn detected(&self) -> bool {
        !matches!(self, MutantOutcome::Survived)
    }
}

pub fn run_mutant(json: &Value, cfg: &TrialConfig) -> MutantOutcome {
    match Operator::from_json(json) {
        Err(e) => MutantOutcome::Rejected(e.to_string()),
        Ok(t) => match run_checks(&t, cfg).failed_checks().first() {
            Some(c) => MutantOutcome::Caught(*c),
            None => MutantOutcome::Survived,
        },
    }
}
