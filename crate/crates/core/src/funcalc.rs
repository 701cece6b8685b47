//! Exact continuous functions on constructive zero-dimensional spaces.
//!
//! A [`FunctionRep`] lives on the canonical tree of a space. On a one-point
//! node it stores the value `a` at infinity and finitely many copies where the
//! function differs from the constant `a`; every other copy is constantly `a`.
//! Cantor atoms carry functions that depend on finitely many coordinates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::space::{Point, Space, Step};
use crate::synthesis::region::Region;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FunctionRep {
    Leaf(Vec<Q>),
    Sum(Vec<FunctionRep>),
    OnePoint { tail: Q, children: BTreeMap<u64, FunctionRep> },
    Cantor(Cylinders),
}

/// A function on the Cantor set that depends on finitely many coordinates:
/// `Split(zero, one)` branches on the next bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Cylinders {
    Const(Q),
    Split(Box<Cylinders>, Box<Cylinders>),
}

impl Cylinders {
    /// `values[i]` is the value on the cylinder whose bits spell `i` in
    /// binary, most significant bit first. Nothing is merged.
    pub fn from_dense(depth: usize, values: &[Q]) -> Cylinders {
        if depth == 0 {
            return Cylinders::Const(values[0].clone());
        }
        let (zero, one) = values.split_at(values.len() / 2);
        Cylinders::Split(Box::new(Cylinders::from_dense(depth - 1, zero)), Box::new(Cylinders::from_dense(depth - 1, one)))
    }

    pub fn depth(&self) -> usize {
        match self {
            Cylinders::Const(_) => 0,
            Cylinders::Split(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// The `2^depth` values, one per cylinder of length `depth`.
    pub fn to_dense(&self) -> (usize, Vec<Q>) {
        let depth = self.depth();
        let mut out = Vec::with_capacity(1 << depth);
        self.fill(depth, &mut out);
        (depth, out)
    }

    fn fill(&self, depth: usize, out: &mut Vec<Q>) {
        match self {
            Cylinders::Const(c) => out.extend(std::iter::repeat_n(c.clone(), 1 << depth)),
            Cylinders::Split(a, b) => {
                a.fill(depth - 1, out);
                b.fill(depth - 1, out);
            }
        }
    }

    fn split(a: Cylinders, b: Cylinders) -> Cylinders {
        match (a, b) {
            (Cylinders::Const(x), Cylinders::Const(y)) if x == y => Cylinders::Const(x),
            (a, b) => Cylinders::Split(Box::new(a), Box::new(b)),
        }
    }

    /// Equal sibling constants merged bottom-up.
    pub fn merged(&self) -> Cylinders {
        match self {
            Cylinders::Const(c) => Cylinders::Const(c.clone()),
            Cylinders::Split(a, b) => Cylinders::split(a.merged(), b.merged()),
        }
    }

    pub fn map(&self, op: &impl Fn(&Q) -> Q) -> Cylinders {
        match self {
            Cylinders::Const(c) => Cylinders::Const(op(c)),
            Cylinders::Split(a, b) => Cylinders::split(a.map(op), b.map(op)),
        }
    }

    pub fn zip(&self, other: &Cylinders, op: &impl Fn(&Q, &Q) -> Q) -> Cylinders {
        match (self, other) {
            (Cylinders::Const(x), Cylinders::Const(y)) => Cylinders::Const(op(x, y)),
            (Cylinders::Split(a0, a1), Cylinders::Split(b0, b1)) => Cylinders::split(a0.zip(b0, op), a1.zip(b1, op)),
            (Cylinders::Split(a0, a1), Cylinders::Const(y)) => {
                Cylinders::split(a0.map(&|x| op(x, y)), a1.map(&|x| op(x, y)))
            }
            (Cylinders::Const(x), Cylinders::Split(b0, b1)) => {
                Cylinders::split(b0.map(&|y| op(x, y)), b1.map(&|y| op(x, y)))
            }
        }
    }

    /// `inside` where `chi` is nonzero, `outside` elsewhere.
    fn pick(chi: &Cylinders, inside: &Cylinders, outside: &Cylinders) -> Cylinders {
        match chi {
            Cylinders::Const(c) if c.is_zero() => outside.merged(),
            Cylinders::Const(_) => inside.merged(),
            Cylinders::Split(c0, c1) => {
                let (i0, i1) = inside.halves();
                let (o0, o1) = outside.halves();
                Cylinders::split(Cylinders::pick(c0, &i0, &o0), Cylinders::pick(c1, &i1, &o1))
            }
        }
    }

    fn halves(&self) -> (Cylinders, Cylinders) {
        match self {
            Cylinders::Const(_) => (self.clone(), self.clone()),
            Cylinders::Split(a, b) => ((**a).clone(), (**b).clone()),
        }
    }

    pub fn values(&self) -> Vec<&Q> {
        let mut out = Vec::new();
        self.collect_values(&mut out);
        out
    }

    fn collect_values<'a>(&'a self, out: &mut Vec<&'a Q>) {
        match self {
            Cylinders::Const(c) => out.push(c),
            Cylinders::Split(a, b) => {
                a.collect_values(out);
                b.collect_values(out);
            }
        }
    }

    /// The prefix of every constant cylinder, left to right.
    pub fn prefixes(&self) -> Vec<Vec<bool>> {
        let mut out = Vec::new();
        self.collect_prefixes(&mut Vec::new(), &mut out);
        out
    }

    fn collect_prefixes(&self, at: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        match self {
            Cylinders::Const(_) => out.push(at.clone()),
            Cylinders::Split(a, b) => {
                at.push(false);
                a.collect_prefixes(at, out);
                at.pop();
                at.push(true);
                b.collect_prefixes(at, out);
                at.pop();
            }
        }
    }

    /// Value on the cylinder `bits`; the prefix must be long enough to
    /// reach a constant piece.
    pub fn eval(&self, bits: &[bool]) -> Result<Q> {
        let mut node = self;
        for b in bits {
            match node {
                Cylinders::Const(_) => break,
                Cylinders::Split(zero, one) => node = if *b { one } else { zero },
            }
        }
        match node {
            Cylinders::Const(c) => Ok(c.clone()),
            Cylinders::Split(..) => Err(Error::PrefixTooShort { given: bits.len(), needed: bits.len() + node.depth() }),
        }
    }

    /// This function on the cylinder `prefix`, the constant `outside` off it.
    pub fn graft(prefix: &[bool], inner: Cylinders, outside: &Q) -> Cylinders {
        match prefix.split_first() {
            None => inner,
            Some((b, rest)) => {
                let here = Cylinders::graft(rest, inner, outside);
                let off = Cylinders::Const(outside.clone());
                if *b {
                    Cylinders::split(off, here)
                } else {
                    Cylinders::split(here, off)
                }
            }
        }
    }
}

fn mismatch(what: &str) -> Error {
    Error::SpaceMismatch(what.to_string())
}

impl FunctionRep {
    /// A Cantor function from its `2^depth` cylinder values.
    pub fn cantor(depth: usize, values: &[Q]) -> FunctionRep {
        FunctionRep::Cantor(Cylinders::from_dense(depth, values))
    }

    /// The constant function `c` on a canonical space.
    pub fn constant(space: &Space, c: &Q) -> Result<FunctionRep> {
        match space {
            Space::Fin(n) => Ok(FunctionRep::Leaf(vec![c.clone(); *n as usize])),
            Space::Cantor => Ok(FunctionRep::Cantor(Cylinders::Const(c.clone()))),
            Space::Sum(parts) => {
                Ok(FunctionRep::Sum(parts.iter().map(|p| FunctionRep::constant(p, c)).collect::<Result<_>>()?))
            }
            Space::OnePoint { .. } => Ok(FunctionRep::OnePoint { tail: c.clone(), children: BTreeMap::new() }),
            Space::Unit => Err(Error::Unsupported("functions on unit".into())),
            _ => Err(Error::NotConstructive(space.to_string())),
        }
    }

    /// Applies `op` to every value.
    pub fn map(&self, op: &impl Fn(&Q) -> Q) -> FunctionRep {
        match self {
            FunctionRep::Leaf(v) => FunctionRep::Leaf(v.iter().map(op).collect()),
            FunctionRep::Sum(parts) => FunctionRep::Sum(parts.iter().map(|p| p.map(op)).collect()),
            FunctionRep::OnePoint { tail, children } => {
                FunctionRep::OnePoint { tail: op(tail), children: children.iter().map(|(k, c)| (*k, c.map(op))).collect() }
                    .normalized()
            }
            FunctionRep::Cantor(t) => FunctionRep::Cantor(t.map(op)),
        }
    }

    /// Pointwise combination of two functions on the same space.
    pub fn zip(&self, other: &FunctionRep, op: &impl Fn(&Q, &Q) -> Q) -> Result<FunctionRep> {
        match (self, other) {
            (FunctionRep::Leaf(a), FunctionRep::Leaf(b)) if a.len() == b.len() => {
                Ok(FunctionRep::Leaf(a.iter().zip(b).map(|(x, y)| op(x, y)).collect()))
            }
            (FunctionRep::Sum(a), FunctionRep::Sum(b)) if a.len() == b.len() => {
                Ok(FunctionRep::Sum(a.iter().zip(b).map(|(x, y)| x.zip(y, op)).collect::<Result<_>>()?))
            }
            (FunctionRep::OnePoint { tail: a, children: ca }, FunctionRep::OnePoint { tail: b, children: cb }) => {
                let mut children = BTreeMap::new();
                for (k, fa) in ca {
                    let c = match cb.get(k) {
                        Some(fb) => fa.zip(fb, op)?,
                        None => fa.map(&|x| op(x, b)),
                    };
                    children.insert(*k, c);
                }
                for (k, fb) in cb {
                    if !ca.contains_key(k) {
                        children.insert(*k, fb.map(&|y| op(a, y)));
                    }
                }
                Ok(FunctionRep::OnePoint { tail: op(a, b), children }.normalized())
            }
            (FunctionRep::Cantor(a), FunctionRep::Cantor(b)) => Ok(FunctionRep::Cantor(a.zip(b, op))),
            _ => Err(mismatch("functions live on different spaces")),
        }
    }

    /// Canonical form: constant copies pruned, Cantor depth minimal.
    pub fn normalized(self) -> FunctionRep {
        match self {
            FunctionRep::OnePoint { tail, children } => {
                let children = children.into_iter().filter(|(_, c)| !c.is_constant(&tail)).collect();
                FunctionRep::OnePoint { tail, children }
            }
            FunctionRep::Cantor(t) => FunctionRep::Cantor(t.merged()),
            other => other,
        }
    }

    pub fn is_constant(&self, c: &Q) -> bool {
        match self {
            FunctionRep::Leaf(v) => v.iter().all(|x| x == c),
            FunctionRep::Sum(parts) => parts.iter().all(|p| p.is_constant(c)),
            FunctionRep::OnePoint { tail, children } => tail == c && children.values().all(|f| f.is_constant(c)),
            FunctionRep::Cantor(t) => t.values().into_iter().all(|x| x == c),
        }
    }

    pub fn add(&self, g: &FunctionRep) -> Result<FunctionRep> {
        self.zip(g, &|x, y| x + y)
    }

    pub fn sub(&self, g: &FunctionRep) -> Result<FunctionRep> {
        self.zip(g, &|x, y| x - y)
    }

    pub fn mul(&self, g: &FunctionRep) -> Result<FunctionRep> {
        self.zip(g, &|x, y| x * y)
    }

    pub fn max(&self, g: &FunctionRep) -> Result<FunctionRep> {
        self.zip(g, &|x, y| x.max(y).clone())
    }

    pub fn min(&self, g: &FunctionRep) -> Result<FunctionRep> {
        self.zip(g, &|x, y| x.min(y).clone())
    }

    pub fn scale(&self, c: &Q) -> FunctionRep {
        self.map(&|x| x * c)
    }

    pub fn add_const(&self, c: &Q) -> FunctionRep {
        self.map(&|x| x + c)
    }

    pub fn pos_part(&self) -> FunctionRep {
        self.map(&|x| if x.is_positive() { x.clone() } else { Q::zero() })
    }

    pub fn neg_part(&self) -> FunctionRep {
        self.map(&|x| if x.is_negative() { -x } else { Q::zero() })
    }

    /// `||f^+||`, by the one-point recursion
    /// `max(a + max(0, max_g ||(child - a)^+||), 0)`.
    pub fn norm_pos(&self) -> Q {
        let zero = Q::zero();
        match self {
            FunctionRep::Leaf(v) => v.iter().fold(zero, |m, x| m.max(x.clone())),
            FunctionRep::Cantor(t) => t.values().into_iter().fold(zero, |m, x| m.max(x.clone())),
            FunctionRep::Sum(parts) => parts.iter().map(FunctionRep::norm_pos).fold(zero, Q::max),
            FunctionRep::OnePoint { tail, children } => {
                let sup = children.values().map(|c| c.add_const(&-tail).norm_pos()).fold(Q::zero(), Q::max);
                (tail + sup).max(zero)
            }
        }
    }

    pub fn norm_neg(&self) -> Q {
        self.scale(&q(-1)).norm_pos()
    }

    pub fn norm(&self) -> Q {
        self.norm_pos().max(self.norm_neg())
    }

    /// `(a_g, {g_n = child_n - a_g})` for a one-point function.
    pub fn decompose(&self) -> Result<(Q, BTreeMap<u64, FunctionRep>)> {
        match self {
            FunctionRep::OnePoint { tail, children } => {
                Ok((tail.clone(), children.iter().map(|(k, c)| (*k, c.add_const(&-tail))).collect()))
            }
            _ => Err(mismatch("decompose needs a one-point function")),
        }
    }

    pub fn recompose(a: &Q, parts: &BTreeMap<u64, FunctionRep>) -> FunctionRep {
        FunctionRep::OnePoint { tail: a.clone(), children: parts.iter().map(|(k, g)| (*k, g.add_const(a))).collect() }
            .normalized()
    }

    /// Value at a point of the canonical space.
    pub fn eval(&self, p: &Point) -> Result<Q> {
        eval_steps(self, p.steps())
    }

    /// Checks that the representation fits the canonical space.
    pub fn check_shape(&self, space: &Space) -> Result<()> {
        match (self, space) {
            (FunctionRep::Leaf(v), Space::Fin(n)) if v.len() as u64 == *n => Ok(()),
            (FunctionRep::Sum(fs), Space::Sum(ss)) if fs.len() == ss.len() => {
                fs.iter().zip(ss).try_for_each(|(f, s)| f.check_shape(s))
            }
            (FunctionRep::OnePoint { children, .. }, Space::OnePoint { .. }) => {
                for (k, c) in children {
                    if *k == 0 {
                        return Err(mismatch("copy indices start at 1"));
                    }
                    c.check_shape(&space.canonical_member(*k)?)?;
                }
                Ok(())
            }
            (FunctionRep::Cantor(_), Space::Cantor) => Ok(()),
            _ => Err(mismatch(&format!("function does not fit {space}"))),
        }
    }
}

fn eval_steps(f: &FunctionRep, steps: &[Step]) -> Result<Q> {
    let bad = || Error::InvalidPoint(Point(steps.to_vec()).to_string());
    match (f, steps) {
        (FunctionRep::Leaf(v), [Step::LeafIndex(i)]) => v.get(*i as usize).cloned().ok_or_else(bad),
        (FunctionRep::Sum(parts), [Step::SumBranch(i), rest @ ..]) => {
            eval_steps(parts.get(*i as usize).ok_or_else(bad)?, rest)
        }
        (FunctionRep::OnePoint { tail, .. }, [Step::AtInfinity]) => Ok(tail.clone()),
        (FunctionRep::OnePoint { tail, children }, [Step::CopyIndex(n), rest @ ..]) => match children.get(n) {
            Some(c) => eval_steps(c, rest),
            None => Ok(tail.clone()),
        },
        (FunctionRep::Cantor(t), [Step::CantorPrefix(bits)]) => t.eval(bits),
        _ => Err(bad()),
    }
}

/// Evaluates a function on `canonical_tree(space)` at a point of `space`.
pub fn eval_on(space: &Space, f: &FunctionRep, p: &Point) -> Result<Q> {
    f.eval(&crate::space::to_canonical(space, p)?)
}

pub fn const_fn(space: &Space, c: &Q) -> Result<FunctionRep> {
    FunctionRep::constant(&space.canonical_tree()?, c)
}

/// The characteristic function of a clopen region of a canonical space.
pub fn indicator(space: &Space, region: &Region) -> Result<FunctionRep> {
    region.check(space)?;
    indicator_rec(space, region)
}

fn indicator_rec(space: &Space, region: &Region) -> Result<FunctionRep> {
    match region {
        Region::Whole => FunctionRep::constant(space, &q(1)),
        Region::Empty => FunctionRep::constant(space, &q(0)),
        Region::Sum(rs) => match space {
            Space::Sum(ss) => {
                Ok(FunctionRep::Sum(ss.iter().zip(rs).map(|(s, r)| indicator_rec(s, r)).collect::<Result<_>>()?))
            }
            _ => Err(Error::InvalidRegion("sum selector on non-sum".into())),
        },
        Region::Star { inf, children } => {
            let tail = if *inf { q(1) } else { q(0) };
            let mut out = BTreeMap::new();
            for (k, r) in children {
                out.insert(*k, indicator_rec(&space.canonical_member(*k)?, r)?);
            }
            Ok(FunctionRep::OnePoint { tail, children: out }.normalized())
        }
        Region::Leaf(set) => match space {
            Space::Fin(n) => {
                Ok(FunctionRep::Leaf((0..*n).map(|i| if set.contains(&i) { q(1) } else { q(0) }).collect()))
            }
            _ => Err(Error::InvalidRegion("leaf selector on non-leaf".into())),
        },
        Region::Cantor(prefixes) => {
            let mut t = Cylinders::Const(q(0));
            for p in prefixes {
                let piece = Cylinders::graft(p, Cylinders::Const(q(1)), &q(0));
                t = t.zip(&piece, &|x, y| x.max(y).clone());
            }
            Ok(FunctionRep::Cantor(t))
        }
    }
}

/// The function equal to `inside` on `region` and to `outside` elsewhere.
/// Walks only the nodes the region splits, so no indicator is built.
pub fn select(space: &Space, region: &Region, inside: &FunctionRep, outside: &FunctionRep) -> Result<FunctionRep> {
    match (region, space, inside, outside) {
        (Region::Whole, ..) => Ok(inside.clone()),
        (Region::Empty, ..) => Ok(outside.clone()),
        (Region::Sum(rs), Space::Sum(ss), FunctionRep::Sum(a), FunctionRep::Sum(b))
            if rs.len() == ss.len() && a.len() == ss.len() && b.len() == ss.len() =>
        {
            let parts = ss.iter().zip(rs).zip(a.iter().zip(b)).map(|((s, r), (x, y))| select(s, r, x, y));
            Ok(FunctionRep::Sum(parts.collect::<Result<_>>()?))
        }
        (
            Region::Star { inf, children: rc },
            _,
            FunctionRep::OnePoint { tail: ta, children: ca },
            FunctionRep::OnePoint { tail: tb, children: cb },
        ) => {
            let mut keys: Vec<u64> = ca.keys().chain(cb.keys()).chain(rc.keys()).copied().collect();
            keys.sort_unstable();
            keys.dedup();
            let mut children = BTreeMap::new();
            for k in keys {
                let member = space.canonical_member(k)?;
                let r = rc.get(&k).cloned().unwrap_or(if *inf { Region::Whole } else { Region::Empty });
                let x = match ca.get(&k) {
                    Some(x) => x.clone(),
                    None => FunctionRep::constant(&member, ta)?,
                };
                let y = match cb.get(&k) {
                    Some(y) => y.clone(),
                    None => FunctionRep::constant(&member, tb)?,
                };
                children.insert(k, select(&member, &r, &x, &y)?);
            }
            let tail = if *inf { ta.clone() } else { tb.clone() };
            Ok(FunctionRep::OnePoint { tail, children }.normalized())
        }
        (Region::Leaf(set), Space::Fin(n), FunctionRep::Leaf(a), FunctionRep::Leaf(b))
            if a.len() == *n as usize && b.len() == *n as usize =>
        {
            let pick = |i: usize| if set.contains(&(i as u64)) { a[i].clone() } else { b[i].clone() };
            Ok(FunctionRep::Leaf((0..a.len()).map(pick).collect()))
        }
        (Region::Cantor(_), Space::Cantor, FunctionRep::Cantor(a), FunctionRep::Cantor(b)) => {
            let FunctionRep::Cantor(chi) = indicator_rec(space, region)? else {
                return Err(mismatch("cantor indicator"));
            };
            Ok(FunctionRep::Cantor(Cylinders::pick(&chi, a, b)))
        }
        _ => Err(mismatch("region, space and functions disagree")),
    }
}

/// Some point of a canonical space.
pub fn first_point(space: &Space) -> Result<Point> {
    Ok(Point(match space {
        Space::Fin(_) => vec![Step::LeafIndex(0)],
        Space::Cantor => vec![Step::CantorPrefix(vec![])],
        Space::Unit => vec![Step::UnitCoord(Q::zero())],
        Space::Sum(parts) => {
            let mut p = vec![Step::SumBranch(0)];
            p.extend(first_point(parts.first().ok_or_else(|| mismatch("empty sum"))?)?.0);
            p
        }
        Space::OnePoint { .. } => vec![Step::AtInfinity],
        _ => return Err(Error::NotConstructive(space.to_string())),
    }))
}

/// Finitely many points on which `|f|` attains its norm and every value of
/// `f` is attained.
pub fn probe_points(space: &Space, f: &FunctionRep) -> Result<Vec<Point>> {
    let mut out = Vec::new();
    probe_rec(space, f, &mut Vec::new(), &mut out)?;
    Ok(out)
}

fn probe_rec(space: &Space, f: &FunctionRep, prefix: &mut Vec<Step>, out: &mut Vec<Point>) -> Result<()> {
    match (f, space) {
        (FunctionRep::Leaf(v), Space::Fin(_)) => {
            for i in 0..v.len() as u64 {
                out.push(Point(prefix.iter().cloned().chain([Step::LeafIndex(i)]).collect()));
            }
        }
        (FunctionRep::Sum(fs), Space::Sum(ss)) => {
            for (i, (f, s)) in fs.iter().zip(ss).enumerate() {
                prefix.push(Step::SumBranch(i as u64));
                probe_rec(s, f, prefix, out)?;
                prefix.pop();
            }
        }
        (FunctionRep::OnePoint { children, .. }, Space::OnePoint { .. }) => {
            out.push(Point(prefix.iter().cloned().chain([Step::AtInfinity]).collect()));
            for (k, c) in children {
                prefix.push(Step::CopyIndex(*k));
                probe_rec(&space.canonical_member(*k)?, c, prefix, out)?;
                prefix.pop();
            }
            let spare = (1..).find(|k| !children.contains_key(k)).expect("finite map");
            let inner = first_point(&space.canonical_member(spare)?)?;
            out.push(Point(prefix.iter().cloned().chain([Step::CopyIndex(spare)]).chain(inner.0).collect()));
        }
        (FunctionRep::Cantor(t), Space::Cantor) => {
            for bits in t.prefixes() {
                out.push(Point(prefix.iter().cloned().chain([Step::CantorPrefix(bits)]).collect()));
            }
        }
        _ => return Err(mismatch(&format!("function does not fit {space}"))),
    }
    Ok(())
}

pub fn rational_to_string(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn rational_from_str(s: &str) -> Result<Q> {
    crate::cli::parse::parse_rational(s).map_err(|_| Error::Json(format!("bad rational {s:?}")))
}

impl FunctionRep {
    pub fn to_json(&self) -> Value {
        match self {
            FunctionRep::Leaf(v) => json!({ "leaf": v.iter().map(rational_to_string).collect::<Vec<_>>() }),
            FunctionRep::Sum(parts) => json!({ "sum": parts.iter().map(FunctionRep::to_json).collect::<Vec<_>>() }),
            FunctionRep::OnePoint { tail, children } => {
                let mut m = Map::new();
                for (k, c) in children {
                    m.insert(k.to_string(), c.to_json());
                }
                json!({ "tail": rational_to_string(tail), "children": m })
            }
            FunctionRep::Cantor(t) => {
                let (depth, values) = t.to_dense();
                json!({ "cantor": { "depth": depth, "values": values.iter().map(rational_to_string).collect::<Vec<_>>() } })
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<FunctionRep> {
        let bad = |what: &str| Error::Json(format!("function: {what}"));
        let rationals = |v: &Value| -> Result<Vec<Q>> {
            v.as_array()
                .ok_or_else(|| bad("expected array"))?
                .iter()
                .map(|x| rational_from_str(x.as_str().ok_or_else(|| bad("expected rational string"))?))
                .collect()
        };
        let obj = v.as_object().ok_or_else(|| bad("expected object"))?;
        if let Some(l) = obj.get("leaf") {
            return Ok(FunctionRep::Leaf(rationals(l)?));
        }
        if let Some(s) = obj.get("sum") {
            let parts = s.as_array().ok_or_else(|| bad("sum must be an array"))?;
            return Ok(FunctionRep::Sum(parts.iter().map(FunctionRep::from_json).collect::<Result<_>>()?));
        }
        if let Some(c) = obj.get("cantor") {
            let depth = c.get("depth").and_then(Value::as_u64).ok_or_else(|| bad("cantor depth"))? as usize;
            let values = rationals(c.get("values").ok_or_else(|| bad("cantor values"))?)?;
            if values.len() != 1usize << depth {
                return Err(bad("cantor values must have 2^depth entries"));
            }
            return Ok(FunctionRep::cantor(depth, &values));
        }
        if let Some(t) = obj.get("tail") {
            let tail = rational_from_str(t.as_str().ok_or_else(|| bad("tail"))?)?;
            let mut children = BTreeMap::new();
            if let Some(cs) = obj.get("children") {
                for (k, c) in cs.as_object().ok_or_else(|| bad("children must be an object"))? {
                    let key: u64 = k.parse().map_err(|_| bad("copy index"))?;
                    children.insert(key, FunctionRep::from_json(c)?);
                }
            }
            return Ok(FunctionRep::OnePoint { tail, children });
        }
        Err(bad("unknown node"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(s: &str) -> Space {
        s.parse::<Space>().unwrap().canonical_tree().unwrap()
    }

    fn pt(s: &str) -> Point {
        s.parse().unwrap()
    }

    fn one_point(tail: Q, children: Vec<(u64, FunctionRep)>) -> FunctionRep {
        FunctionRep::OnePoint { tail, children: children.into_iter().collect() }
    }

    #[test]
    fn eval_examples() {
        let s = sp("op(w,fin(1))");
        let c = FunctionRep::constant(&s, &q(5)).unwrap();
        assert_eq!(c.eval(&pt("c3/l0")).unwrap(), q(5));
        let f = one_point(q(1), vec![(3, FunctionRep::Leaf(vec![q(2)]))]);
        assert_eq!(f.eval(&pt("c3/l0")).unwrap(), q(2));
        assert_eq!(f.eval(&pt("c9/l0")).unwrap(), q(1));
        assert_eq!(f.eval(&pt("inf")).unwrap(), q(1));
        let g = FunctionRep::cantor(2, &[q(0), q(1), q(2), q(3)]);
        assert_eq!(g.eval(&pt("x10")).unwrap(), q(2));
        assert_eq!(g.eval(&pt("x011")).unwrap(), q(1));
        assert!(matches!(g.eval(&pt("x1")), Err(Error::PrefixTooShort { given: 1, needed: 2 })));
    }

    #[test]
    fn algebra_examples() {
        let s = sp("sum(I(2,1),fin(2),cantor)");
        let c = FunctionRep::constant(&s, &q(-2)).unwrap();
        assert_eq!(c.pos_part(), FunctionRep::constant(&s, &q(0)).unwrap());
        let f = FunctionRep::Sum(vec![
            one_point(q(1), vec![(2, one_point(q(3), vec![]))]),
            FunctionRep::Leaf(vec![q(1), q(-1)]),
            FunctionRep::cantor(1, &[q(4), q(0)]),
        ]);
        assert_eq!(f.add(&f.scale(&q(-1))).unwrap(), FunctionRep::constant(&s, &q(0)).unwrap());
        let a = FunctionRep::cantor(1, &[q(1), q(0)]);
        let b = FunctionRep::cantor(1, &[q(0), q(1)]);
        assert_eq!(a.mul(&b).unwrap(), FunctionRep::cantor(0, &[q(0)]));
        assert!(a.add(&FunctionRep::Leaf(vec![q(1)])).is_err());
    }

    #[test]
    fn pruning_makes_equality_structural() {
        let f = one_point(q(2), vec![(1, FunctionRep::Leaf(vec![q(2)]))]).normalized();
        assert_eq!(f, one_point(q(2), vec![]));
        let g = FunctionRep::cantor(3, &vec![q(1); 8]).normalized();
        assert_eq!(g, FunctionRep::cantor(0, &[q(1)]));
    }

    #[test]
    fn norm_examples() {
        // a = 1, child g = child - a with ||g+|| = 2 and ||g-|| = 1/2
        let f = one_point(q(1), vec![(1, FunctionRep::Leaf(vec![q(3), ratio(1, 2)]))]);
        assert_eq!(f.norm(), q(3));
        assert_eq!(f.norm_pos(), q(3));
        let s = sp("op(w,fin(2))");
        let neg = FunctionRep::constant(&s, &q(-4)).unwrap();
        assert_eq!(neg.norm(), q(4));
        assert_eq!(neg.norm_pos(), q(0));
        let probes = probe_points(&s, &f).unwrap();
        let m = probes.iter().map(|p| f.eval(p).unwrap().abs()).max().unwrap();
        assert_eq!(m, f.norm());
    }

    #[test]
    fn decomposition_examples() {
        let s = sp("op(w,fin(1))");
        let (a, parts) = FunctionRep::constant(&s, &q(7)).unwrap().decompose().unwrap();
        assert_eq!((a, parts.len()), (q(7), 0));
        let f = one_point(q(2), vec![(1, FunctionRep::Leaf(vec![q(5)]))]);
        let (a, parts) = f.decompose().unwrap();
        assert_eq!(a, q(2));
        assert_eq!(parts[&1], FunctionRep::Leaf(vec![q(3)]));
        assert_eq!(FunctionRep::recompose(&a, &parts), f);
    }

    #[test]
    fn indicator_examples() {
        let s = sp("sum(op(w,fin(2)),cantor)");
        assert_eq!(indicator(&s, &Region::Whole).unwrap(), FunctionRep::constant(&s, &q(1)).unwrap());
        let r = Region::Sum(vec![Region::Empty, Region::Cantor(vec![vec![true, false]])]);
        let i = indicator(&s, &r).unwrap();
        assert_eq!(i.norm(), q(1));
        assert_eq!(i.eval(&pt("b1/x10")).unwrap(), q(1));
        assert_eq!(i.eval(&pt("b1/x11")).unwrap(), q(0));
        assert_eq!(i.eval(&pt("b0/inf")).unwrap(), q(0));
    }

    #[test]
    fn json_round_trip() {
        let f = FunctionRep::Sum(vec![
            one_point(ratio(-1, 3), vec![(2, FunctionRep::Leaf(vec![q(3), ratio(1, 2)]))]),
            FunctionRep::cantor(1, &[q(4), q(0)]),
        ]);
        let text = f.to_json().to_string();
        assert!(text.contains("\"-1/3\""));
        assert_eq!(FunctionRep::from_json(&serde_json::from_str(&text).unwrap()).unwrap(), f);
    }
}
