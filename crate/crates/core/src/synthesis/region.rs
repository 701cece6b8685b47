//! Clopen subsets of canonical trees.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::space::{Point, Space, Step};

/// A clopen set, described node by node. On a one-point node the unlisted
/// copies are wholly inside the region when `inf` holds and wholly outside
/// otherwise, so every selector denotes a clopen set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    Whole,
    Empty,
    Sum(Vec<Region>),
    Star { inf: bool, children: BTreeMap<u64, Region> },
    Leaf(BTreeSet<u64>),
    /// Union of cylinders, each given by its prefix bits.
    Cantor(Vec<Vec<bool>>),
}

#[derive(Clone, Copy)]
enum BoolOp {
    And,
    Or,
    AndNot,
}

impl BoolOp {
    fn apply(self, a: bool, b: bool) -> bool {
        match self {
            BoolOp::And => a && b,
            BoolOp::Or => a || b,
            BoolOp::AndNot => a && !b,
        }
    }
}

fn bad(what: impl Into<String>) -> Error {
    Error::InvalidRegion(what.into())
}

fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

impl Region {
    /// The region that is `inner` at the node reached by `path` and empty
    /// everywhere else.
    pub fn at_path(space: &Space, path: &[Step], inner: Region) -> Result<Region> {
        match (space, path) {
            (_, []) => Ok(inner),
            (Space::Sum(parts), [Step::SumBranch(i), rest @ ..]) => {
                let i = *i as usize;
                let part = parts.get(i).ok_or_else(|| bad("branch out of range"))?;
                let mut v = vec![Region::Empty; parts.len()];
                v[i] = Region::at_path(part, rest, inner)?;
                Ok(Region::Sum(v).normalized())
            }
            (Space::OnePoint { .. }, [Step::CopyIndex(n), rest @ ..]) => {
                let child = Region::at_path(&space.canonical_member(*n)?, rest, inner)?;
                Ok(Region::Star { inf: false, children: BTreeMap::from([(*n, child)]) }.normalized())
            }
            _ => Err(bad("path does not fit the space")),
        }
    }

    /// The part of the region inside the node reached by `path`.
    pub fn at(&self, space: &Space, path: &[Step]) -> Result<Region> {
        match path.split_first() {
            None => Ok(self.clone()),
            Some((step, rest)) => {
                let (sub_space, sub) = self.step(space, step)?;
                sub.at(&sub_space, rest)
            }
        }
    }

    fn step(&self, space: &Space, step: &Step) -> Result<(Space, Region)> {
        match (space, step) {
            (Space::Sum(parts), Step::SumBranch(i)) => {
                let part = parts.get(*i as usize).ok_or_else(|| bad("branch out of range"))?.clone();
                let r = match self {
                    Region::Sum(rs) => rs[*i as usize].clone(),
                    Region::Whole | Region::Empty => self.clone(),
                    _ => return Err(bad("selector does not fit a sum")),
                };
                Ok((part, r))
            }
            (Space::OnePoint { .. }, Step::CopyIndex(n)) => {
                let r = match self {
                    Region::Star { inf, children } => children.get(n).cloned().unwrap_or(if *inf {
                        Region::Whole
                    } else {
                        Region::Empty
                    }),
                    Region::Whole | Region::Empty => self.clone(),
                    _ => return Err(bad("selector does not fit a one-point node")),
                };
                Ok((space.canonical_member(*n)?, r))
            }
            _ => Err(bad("path does not fit the space")),
        }
    }

    /// Checks that the selector fits the canonical space.
    pub fn check(&self, space: &Space) -> Result<()> {
        match (self, space) {
            (Region::Whole | Region::Empty, _) => Ok(()),
            (Region::Sum(rs), Space::Sum(ss)) if rs.len() == ss.len() => {
                rs.iter().zip(ss).try_for_each(|(r, s)| r.check(s))
            }
            (Region::Star { children, .. }, Space::OnePoint { .. }) => children.iter().try_for_each(|(k, r)| {
                if *k == 0 {
                    return Err(bad("copy indices start at 1"));
                }
                r.check(&space.canonical_member(*k)?)
            }),
            (Region::Leaf(set), Space::Fin(n)) if set.iter().all(|i| i < n) => Ok(()),
            (Region::Cantor(_), Space::Cantor) => Ok(()),
            _ => Err(bad(format!("selector does not fit {space}"))),
        }
    }

    pub fn contains(&self, p: &Point) -> Result<bool> {
        contains_steps(self, p.steps())
    }

    pub fn is_empty(&self) -> bool {
        match self {
            Region::Empty => true,
            Region::Whole => false,
            Region::Sum(rs) => rs.iter().all(Region::is_empty),
            Region::Star { inf, children } => !inf && children.values().all(Region::is_empty),
            Region::Leaf(set) => set.is_empty(),
            Region::Cantor(cyls) => cyls.is_empty(),
        }
    }

    pub fn intersect(&self, space: &Space, other: &Region) -> Result<Region> {
        combine(space, self, other, BoolOp::And)
    }

    pub fn union(&self, space: &Space, other: &Region) -> Result<Region> {
        combine(space, self, other, BoolOp::Or)
    }

    pub fn difference(&self, space: &Space, other: &Region) -> Result<Region> {
        combine(space, self, other, BoolOp::AndNot)
    }

    pub fn subset_of(&self, space: &Space, other: &Region) -> Result<bool> {
        Ok(self.difference(space, other)?.is_empty())
    }

    pub fn disjoint(&self, space: &Space, other: &Region) -> Result<bool> {
        Ok(self.intersect(space, other)?.is_empty())
    }

    /// Canonical form: trivial selectors collapse to `Whole` or `Empty`.
    pub fn normalized(self) -> Region {
        match self {
            Region::Sum(rs) => {
                let rs: Vec<Region> = rs.into_iter().map(Region::normalized).collect();
                if rs.iter().all(|r| *r == Region::Whole) {
                    Region::Whole
                } else if rs.iter().all(|r| *r == Region::Empty) {
                    Region::Empty
                } else {
                    Region::Sum(rs)
                }
            }
            Region::Star { inf, children } => {
                let default = if inf { Region::Whole } else { Region::Empty };
                let children: BTreeMap<u64, Region> = children
                    .into_iter()
                    .map(|(k, r)| (k, r.normalized()))
                    .filter(|(_, r)| *r != default)
                    .collect();
                if children.is_empty() {
                    default
                } else {
                    Region::Star { inf, children }
                }
            }
            Region::Leaf(set) if set.is_empty() => Region::Empty,
            Region::Cantor(cyls) => {
                let depth = cyls.iter().map(Vec::len).max().unwrap_or(0);
                let map = cylinder_bitmap(&cyls, depth);
                let out = bitmap_to_cylinders(&map, depth);
                if out.is_empty() {
                    Region::Empty
                } else if out == vec![Vec::<bool>::new()] {
                    Region::Whole
                } else {
                    Region::Cantor(out)
                }
            }
            other => other,
        }
    }

    /// A leaf selector that covers every point becomes `Whole`.
    fn normalized_in(self, space: &Space) -> Region {
        match (&self, space) {
            (Region::Leaf(set), Space::Fin(n)) if set.len() as u64 == *n => Region::Whole,
            _ => self.normalized(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Region::Whole => json!("whole"),
            Region::Empty => json!("empty"),
            Region::Sum(rs) => json!({ "sum": rs.iter().map(Region::to_json).collect::<Vec<_>>() }),
            Region::Star { inf, children } => {
                let mut m = Map::new();
                for (k, r) in children {
                    m.insert(k.to_string(), r.to_json());
                }
                json!({ "star": { "inf": inf, "children": m } })
            }
            Region::Leaf(set) => json!({ "leaf": set.iter().collect::<Vec<_>>() }),
            Region::Cantor(cyls) => json!({ "cantor": cyls.iter().map(|c| bits_to_string(c)).collect::<Vec<_>>() }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Region> {
        let err = |w: &str| Error::Json(format!("region: {w}"));
        match v {
            Value::String(s) if s == "whole" => return Ok(Region::Whole),
            Value::String(s) if s == "empty" => return Ok(Region::Empty),
            _ => {}
        }
        let obj = v.as_object().ok_or_else(|| err("expected object or whole/empty"))?;
        if let Some(s) = obj.get("sum") {
            let parts = s.as_array().ok_or_else(|| err("sum must be an array"))?;
            return Ok(Region::Sum(parts.iter().map(Region::from_json).collect::<Result<_>>()?));
        }
        if let Some(s) = obj.get("star") {
            let inf = s.get("inf").and_then(Value::as_bool).ok_or_else(|| err("star.inf"))?;
            let mut children = BTreeMap::new();
            if let Some(cs) = s.get("children") {
                for (k, r) in cs.as_object().ok_or_else(|| err("star.children"))? {
                    children.insert(k.parse().map_err(|_| err("copy index"))?, Region::from_json(r)?);
                }
            }
            return Ok(Region::Star { inf, children });
        }
        if let Some(l) = obj.get("leaf") {
            let items = l.as_array().ok_or_else(|| err("leaf must be an array"))?;
            return Ok(Region::Leaf(
                items.iter().map(|x| x.as_u64().ok_or_else(|| err("leaf index"))).collect::<Result<_>>()?,
            ));
        }
        if let Some(c) = obj.get("cantor") {
            let items = c.as_array().ok_or_else(|| err("cantor must be an array"))?;
            let mut cyls = Vec::new();
            for it in items {
                let s = it.as_str().ok_or_else(|| err("cylinder string"))?;
                if !s.bytes().all(|b| b == b'0' || b == b'1') {
                    return Err(err("cylinder must be a bit string"));
                }
                cyls.push(s.bytes().map(|b| b == b'1').collect());
            }
            return Ok(Region::Cantor(cyls));
        }
        Err(err("unknown selector"))
    }
}

impl std::fmt::Display for Region {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

fn contains_steps(r: &Region, steps: &[Step]) -> Result<bool> {
    match (r, steps) {
        (Region::Whole, _) => Ok(true),
        (Region::Empty, _) => Ok(false),
        (Region::Sum(rs), [Step::SumBranch(i), rest @ ..]) => {
            contains_steps(rs.get(*i as usize).ok_or_else(|| bad("branch out of range"))?, rest)
        }
        (Region::Star { inf, .. }, [Step::AtInfinity]) => Ok(*inf),
        (Region::Star { inf, children }, [Step::CopyIndex(n), rest @ ..]) => match children.get(n) {
            Some(c) => contains_steps(c, rest),
            None => Ok(*inf),
        },
        (Region::Leaf(set), [Step::LeafIndex(i)]) => Ok(set.contains(i)),
        (Region::Cantor(cyls), [Step::CantorPrefix(bits)]) => {
            let mut undecided = false;
            for c in cyls {
                if c.len() <= bits.len() {
                    if bits[..c.len()] == c[..] {
                        return Ok(true);
                    }
                } else if c[..bits.len()] == bits[..] {
                    undecided = true;
                }
            }
            if undecided {
                let needed = cyls.iter().map(Vec::len).max().unwrap_or(0);
                Err(Error::PrefixTooShort { given: bits.len(), needed })
            } else {
                Ok(false)
            }
        }
        _ => Err(Error::InvalidPoint(format!("{} does not fit the region", Point(steps.to_vec())))),
    }
}

fn cylinder_bitmap(cyls: &[Vec<bool>], depth: usize) -> Vec<bool> {
    let mut map = vec![false; 1usize << depth];
    for c in cyls {
        let base = c.iter().fold(0usize, |acc, b| (acc << 1) | usize::from(*b));
        let span = depth - c.len();
        for j in 0..1usize << span {
            map[(base << span) | j] = true;
        }
    }
    map
}

fn bitmap_to_cylinders(map: &[bool], depth: usize) -> Vec<Vec<bool>> {
    fn rec(map: &[bool], prefix: &mut Vec<bool>, depth: usize, out: &mut Vec<Vec<bool>>) {
        if map.iter().all(|b| *b) {
            out.push(prefix.clone());
        } else if map.iter().any(|b| *b) && prefix.len() < depth {
            let half = map.len() / 2;
            prefix.push(false);
            rec(&map[..half], prefix, depth, out);
            prefix.pop();
            prefix.push(true);
            rec(&map[half..], prefix, depth, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(map, &mut Vec::new(), depth, &mut out);
    out
}

/// Expands `Whole`/`Empty` into an explicit selector of the node's shape.
fn expand(space: &Space, r: &Region) -> Region {
    let full = *r == Region::Whole;
    match (r, space) {
        (Region::Whole | Region::Empty, Space::Sum(ss)) => Region::Sum(vec![r.clone(); ss.len()]),
        (Region::Whole | Region::Empty, Space::OnePoint { .. }) => Region::Star { inf: full, children: BTreeMap::new() },
        (Region::Whole | Region::Empty, Space::Fin(n)) => {
            Region::Leaf(if full { (0..*n).collect() } else { BTreeSet::new() })
        }
        (Region::Whole | Region::Empty, Space::Cantor) => Region::Cantor(if full { vec![vec![]] } else { vec![] }),
        _ => r.clone(),
    }
}

fn combine(space: &Space, a: &Region, b: &Region, op: BoolOp) -> Result<Region> {
    let out = match (expand(space, a), expand(space, b), space) {
        (Region::Sum(ra), Region::Sum(rb), Space::Sum(ss)) if ra.len() == ss.len() && rb.len() == ss.len() => {
            Region::Sum(ss.iter().zip(ra.iter().zip(&rb)).map(|(s, (x, y))| combine(s, x, y, op)).collect::<Result<_>>()?)
        }
        (Region::Star { inf: ia, children: ca }, Region::Star { inf: ib, children: cb }, Space::OnePoint { .. }) => {
            let keys: BTreeSet<u64> = ca.keys().chain(cb.keys()).copied().collect();
            let mut children = BTreeMap::new();
            for k in keys {
                let da = if ia { Region::Whole } else { Region::Empty };
                let db = if ib { Region::Whole } else { Region::Empty };
                let x = ca.get(&k).cloned().unwrap_or(da);
                let y = cb.get(&k).cloned().unwrap_or(db);
                children.insert(k, combine(&space.canonical_member(k)?, &x, &y, op)?);
            }
            Region::Star { inf: op.apply(ia, ib), children }
        }
        (Region::Leaf(x), Region::Leaf(y), Space::Fin(n)) => {
            Region::Leaf((0..*n).filter(|i| op.apply(x.contains(i), y.contains(i))).collect())
        }
        (Region::Cantor(x), Region::Cantor(y), Space::Cantor) => {
            let depth = x.iter().chain(&y).map(Vec::len).max().unwrap_or(0);
            let mx = cylinder_bitmap(&x, depth);
            let my = cylinder_bitmap(&y, depth);
            let m: Vec<bool> = mx.iter().zip(&my).map(|(p, q)| op.apply(*p, *q)).collect();
            Region::Cantor(bitmap_to_cylinders(&m, depth))
        }
        _ => return Err(bad(format!("selectors do not fit {space}"))),
    };
    Ok(out.normalized_in(space))
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

    fn star(inf: bool, children: Vec<(u64, Region)>) -> Region {
        Region::Star { inf, children: children.into_iter().collect() }
    }

    #[test]
    fn membership() {
        let r = star(true, vec![(2, Region::Empty)]);
        assert!(r.contains(&pt("inf")).unwrap());
        assert!(!r.contains(&pt("c2/l0")).unwrap());
        assert!(r.contains(&pt("c7/l0")).unwrap());
        let c = Region::Cantor(vec![vec![true, false]]);
        assert!(c.contains(&pt("x100")).unwrap());
        assert!(!c.contains(&pt("x0")).unwrap());
        assert!(matches!(c.contains(&pt("x1")), Err(Error::PrefixTooShort { .. })));
    }

    #[test]
    fn boolean_algebra() {
        let s = sp("sum(op(w,fin(2)),cantor)");
        let a = Region::Sum(vec![star(true, vec![(1, Region::Empty)]), Region::Cantor(vec![vec![false]])]);
        let b = Region::Sum(vec![star(false, vec![(1, Region::Whole), (2, Region::Whole)]), Region::Whole]);
        let u = a.union(&s, &b).unwrap();
        assert_eq!(u, Region::Whole);
        let i = a.intersect(&s, &b).unwrap();
        assert_eq!(i, Region::Sum(vec![star(false, vec![(2, Region::Whole)]), Region::Cantor(vec![vec![false]])]));
        let d = b.difference(&s, &a).unwrap();
        assert!(d.disjoint(&s, &a).unwrap());
        assert!(i.subset_of(&s, &a).unwrap());
        assert!(!b.subset_of(&s, &a).unwrap());
        assert_eq!(Region::Whole.difference(&s, &Region::Whole).unwrap(), Region::Empty);
    }

    #[test]
    fn cylinders_merge() {
        let r = Region::Cantor(vec![vec![true, false], vec![true, true], vec![false]]).normalized();
        assert_eq!(r, Region::Whole);
        let r = Region::Cantor(vec![vec![true, false, true], vec![true, false, false]]).normalized();
        assert_eq!(r, Region::Cantor(vec![vec![true, false]]));
    }

    #[test]
    fn paths() {
        let s = sp("sum(fin(1),op(w,op(w,fin(1))))");
        let r = Region::at_path(&s, &[Step::SumBranch(1), Step::CopyIndex(3)], Region::Whole).unwrap();
        assert!(r.contains(&pt("b1/c3/inf")).unwrap());
        assert!(!r.contains(&pt("b1/inf")).unwrap());
        assert_eq!(r.at(&s, &[Step::SumBranch(1), Step::CopyIndex(3)]).unwrap(), Region::Whole);
        assert_eq!(r.at(&s, &[Step::SumBranch(0)]).unwrap(), Region::Empty);
    }

    #[test]
    fn json_round_trip() {
        let r = Region::Sum(vec![star(true, vec![(3, Region::Leaf([0, 2].into()))]), Region::Cantor(vec![vec![true]])]);
        let back = Region::from_json(&serde_json::from_str(&r.to_json().to_string()).unwrap()).unwrap();
        assert_eq!(back, r);
    }
}
