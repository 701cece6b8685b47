//! Continuous surjections from a clopen region of `K` onto `[1, w^a * m]`
//! or the Cantor set, evaluated pointwise and composed with functions.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde_json::{json, Value};

use super::region::Region;
use super::split::{find_site, split_region, Demand, Site};
use crate::error::{Error, Result};
use crate::funcalc::{select, Cylinders, FunctionRep, Q};
use crate::ordinal::Ordinal;
use crate::space::{Point, Space, Step};

/// A map from `canonical_tree(K)` onto a canonical target.
#[derive(Clone, Debug)]
pub struct SurjectionMap {
    pub domain: Space,
    pub codomain: Space,
    kc: Arc<Space>,
    lc: Space,
    pub root: SurjNode,
}

#[derive(Debug)]
pub enum SurjNode {
    /// Target `fin(m)`: `pieces[i]` goes to leaf `i`, everything else to the
    /// last leaf.
    Leaf { pieces: Vec<Region> },
    /// Target a sum: `parts[i]` is routed into branch `i` by its own map,
    /// everything else into the last branch by `rest`.
    Sum { parts: Vec<(Region, SurjNode)>, rest: Box<SurjNode> },
    /// Target a one-point compactification: part `n` of the site onto copy
    /// `n`, everything else to infinity.
    Star(Box<StarMap>),
    /// Target the Cantor set: the cylinder `prefix` of the Cantor node at
    /// `path` onto the whole Cantor set, everything else to `000...`.
    Cantor { path: Vec<Step>, prefix: Vec<bool> },
}

#[derive(Debug)]
pub struct StarMap {
    pub site: Site,
    pub demand: Demand,
    kc: Arc<Space>,
    cache: Mutex<BTreeMap<u64, Arc<SurjNode>>>,
}

impl Clone for StarMap {
    fn clone(&self) -> Self {
        StarMap {
            site: self.site.clone(),
            demand: self.demand.clone(),
            kc: self.kc.clone(),
            cache: Mutex::new(self.cache.lock().expect("cache poisoned").clone()),
        }
    }
}

impl Clone for SurjNode {
    fn clone(&self) -> Self {
        match self {
            SurjNode::Leaf { pieces } => SurjNode::Leaf { pieces: pieces.clone() },
            SurjNode::Sum { parts, rest } => SurjNode::Sum { parts: parts.clone(), rest: rest.clone() },
            SurjNode::Star(s) => SurjNode::Star(s.clone()),
            SurjNode::Cantor { path, prefix } => SurjNode::Cantor { path: path.clone(), prefix: prefix.clone() },
        }
    }
}

impl StarMap {
    fn part(&self, n: u64) -> Result<(Region, Arc<SurjNode>)> {
        let region = self.site.part_region(&self.kc, &self.demand, n)?;
        let mut cache = self.cache.lock().expect("cache poisoned");
        if let Some(m) = cache.get(&n) {
            return Ok((region, m.clone()));
        }
        let m = Arc::new(surj_node(&self.kc, &self.demand.rank(n)?, 1, &region)?);
        cache.insert(n, m.clone());
        Ok((region, m))
    }
}

/// The map node sending `region` onto `canonical_interval(alpha, m)`.
pub(crate) fn surj_node(kc: &Arc<Space>, alpha: &Ordinal, m: u64, region: &Region) -> Result<SurjNode> {
    if alpha.is_zero() {
        let pieces = split_region(kc, region, &vec![Ordinal::zero(); m as usize])?;
        return Ok(SurjNode::Leaf { pieces: pieces[..m as usize - 1].to_vec() });
    }
    if m > 1 {
        let mut pieces = split_region(kc, region, &vec![alpha.clone(); m as usize])?;
        let last = pieces.pop().expect("m > 1");
        let parts = pieces
            .into_iter()
            .map(|r| Ok((r.clone(), surj_node(kc, alpha, 1, &r)?)))
            .collect::<Result<Vec<_>>>()?;
        return Ok(SurjNode::Sum { parts, rest: Box::new(surj_node(kc, alpha, 1, &last)?) });
    }
    let demand = Demand::for_interval(alpha)?;
    let site = find_site(kc, region, &demand)?.ok_or_else(|| Error::InsufficientHeight(alpha.to_string()))?;
    if let Site::Pieces { .. } = site {
        return Err(Error::Unsupported("surjection over greedy pieces".into()));
    }
    Ok(SurjNode::Star(Box::new(StarMap { site, demand, kc: kc.clone(), cache: Mutex::new(BTreeMap::new()) })))
}

/// Locates a Cantor cylinder inside the region.
pub(crate) fn find_cantor(kc: &Space, r: &Region) -> Result<Option<(Vec<Step>, Vec<bool>)>> {
    // Any demand works: a Cantor node is always a site.
    let probe = Demand::Uniform(Ordinal::zero());
    let mut path = Vec::new();
    find_cantor_rec(kc, r, &probe, &mut path)
}

fn find_cantor_rec(node: &Space, r: &Region, d: &Demand, path: &mut Vec<Step>) -> Result<Option<(Vec<Step>, Vec<bool>)>> {
    if r.is_empty() {
        return Ok(None);
    }
    match node {
        Space::Cantor => match find_site(node, r, d)? {
            Some(Site::Cylinders { prefix, .. }) => Ok(Some((path.clone(), prefix))),
            _ => Ok(None),
        },
        Space::Sum(parts) => {
            for (i, s) in parts.iter().enumerate() {
                path.push(Step::SumBranch(i as u64));
                let found = find_cantor_rec(s, &r.at(node, &[Step::SumBranch(i as u64)])?, d, path)?;
                path.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
            Ok(None)
        }
        Space::OnePoint { .. } => {
            let children = match r {
                Region::Star { children, .. } => children.clone(),
                _ => BTreeMap::new(),
            };
            for (k, c) in &children {
                path.push(Step::CopyIndex(*k));
                let found = find_cantor_rec(&node.canonical_member(*k)?, c, d, path)?;
                path.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
            // a Cantor node among the unlisted copies
            let unlisted = children.keys().last().map_or(1, |k| k + 1);
            let whole = matches!(r, Region::Whole) || matches!(r, Region::Star { inf: true, .. });
            if whole {
                path.push(Step::CopyIndex(unlisted));
                let found = find_cantor_rec(&node.canonical_member(unlisted)?, &Region::Whole, d, path)?;
                path.pop();
                return Ok(found);
            }
            Ok(None)
        }
        _ => Ok(None),
    }
}

impl SurjectionMap {
    /// Assembles a map; `kc` must be `canonical_tree(domain)`.
    pub fn new(domain: Space, codomain: Space, root: SurjNode) -> Result<SurjectionMap> {
        let kc = Arc::new(domain.canonical_tree()?);
        let lc = codomain.canonical_tree()?;
        Ok(SurjectionMap { domain, codomain, kc, lc, root })
    }

    pub(crate) fn with_canonical(domain: Space, codomain: Space, kc: Arc<Space>, root: SurjNode) -> Result<SurjectionMap> {
        let lc = codomain.canonical_tree()?;
        Ok(SurjectionMap { domain, codomain, kc, lc, root })
    }

    pub fn canonical_domain(&self) -> &Space {
        &self.kc
    }

    pub fn canonical_codomain(&self) -> &Space {
        &self.lc
    }

    /// Image of a point of `canonical_tree(K)`, as a point of the canonical
    /// target.
    pub fn eval(&self, p: &Point) -> Result<Point> {
        eval_node(&self.kc, &self.root, p).map(Point)
    }

    /// `f ∘ ρ` for `f` on the canonical target.
    pub fn compose(&self, f: &FunctionRep) -> Result<FunctionRep> {
        f.check_shape(&self.lc)?;
        Ok(compose_node(&self.kc, &self.root, f)?.normalized())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "domain": self.domain.to_string(),
            "codomain": self.codomain.to_string(),
            "root": node_to_json(&self.root),
        })
    }

    pub fn from_json(v: &Value) -> Result<SurjectionMap> {
        let space = |k: &str| -> Result<Space> {
            v.get(k).and_then(Value::as_str).ok_or_else(|| Error::Json(k.into()))?.parse()
        };
        let domain = space("domain")?;
        let codomain = space("codomain")?;
        let kc = Arc::new(domain.canonical_tree()?);
        let root = node_from_json(&kc, v.get("root").ok_or_else(|| Error::Json("root".into()))?)?;
        SurjectionMap::with_canonical(domain, codomain, kc, root)
    }
}

fn eval_node(kc: &Space, node: &SurjNode, p: &Point) -> Result<Vec<Step>> {
    match node {
        SurjNode::Leaf { pieces } => {
            for (i, r) in pieces.iter().enumerate() {
                if r.contains(p)? {
                    return Ok(vec![Step::LeafIndex(i as u64)]);
                }
            }
            Ok(vec![Step::LeafIndex(pieces.len() as u64)])
        }
        SurjNode::Sum { parts, rest } => {
            for (i, (r, m)) in parts.iter().enumerate() {
                if r.contains(p)? {
                    let mut out = vec![Step::SumBranch(i as u64)];
                    out.extend(eval_node(kc, m, p)?);
                    return Ok(out);
                }
            }
            let mut out = vec![Step::SumBranch(parts.len() as u64)];
            out.extend(eval_node(kc, rest, p)?);
            Ok(out)
        }
        SurjNode::Star(s) => match s.site.locate(kc, &s.demand, p)? {
            Some(n) => {
                let (_, m) = s.part(n)?;
                let mut out = vec![Step::CopyIndex(n)];
                out.extend(eval_node(kc, &m, p)?);
                Ok(out)
            }
            None => Ok(vec![Step::AtInfinity]),
        },
        SurjNode::Cantor { path, prefix } => {
            let steps = p.steps();
            if steps.len() == path.len() + 1 && steps[..path.len()] == path[..] {
                if let Step::CantorPrefix(bits) = &steps[path.len()] {
                    let k = bits.len().min(prefix.len());
                    if bits[..k] == prefix[..k] {
                        if bits.len() < prefix.len() {
                            return Err(Error::PrefixTooShort { given: bits.len(), needed: prefix.len() });
                        }
                        return Ok(vec![Step::CantorPrefix(bits[prefix.len()..].to_vec())]);
                    }
                }
            }
            Ok(vec![Step::CantorPrefix(vec![false; steps_bits(steps).max(prefix.len()).max(1)])])
        }
    }
}

fn steps_bits(steps: &[Step]) -> usize {
    match steps.last() {
        Some(Step::CantorPrefix(b)) => b.len(),
        _ => 0,
    }
}

/// `f` placed on the node at `path`, with constant `outside` elsewhere.
fn at_node(space: &Space, path: &[Step], inner: FunctionRep, outside: &Q) -> Result<FunctionRep> {
    let Some((step, rest)) = path.split_first() else { return Ok(inner) };
    match (space, step) {
        (Space::Sum(parts), Step::SumBranch(i)) => {
            let mut fs = Vec::with_capacity(parts.len());
            for (j, s) in parts.iter().enumerate() {
                fs.push(if j as u64 == *i {
                    at_node(s, rest, inner.clone(), outside)?
                } else {
                    FunctionRep::constant(s, outside)?
                });
            }
            Ok(FunctionRep::Sum(fs))
        }
        (Space::OnePoint { .. }, Step::CopyIndex(n)) => {
            let child = at_node(&space.canonical_member(*n)?, rest, inner, outside)?;
            Ok(FunctionRep::OnePoint { tail: outside.clone(), children: BTreeMap::from([(*n, child)]) })
        }
        _ => Err(Error::InvalidRegion("bad path".into())),
    }
}

fn compose_node(kc: &Space, node: &SurjNode, f: &FunctionRep) -> Result<FunctionRep> {
    let mismatch = || Error::SpaceMismatch("function does not fit the target".into());
    match (node, f) {
        (SurjNode::Leaf { pieces }, FunctionRep::Leaf(v)) if v.len() == pieces.len() + 1 => {
            let last = &v[pieces.len()];
            let mut acc = FunctionRep::constant(kc, last)?;
            for (r, x) in pieces.iter().zip(v) {
                if x != last {
                    acc = select(kc, r, &FunctionRep::constant(kc, x)?, &acc)?;
                }
            }
            Ok(acc)
        }
        (SurjNode::Sum { parts, rest }, FunctionRep::Sum(fs)) if fs.len() == parts.len() + 1 => {
            let mut acc = compose_node(kc, rest, &fs[parts.len()])?;
            for ((r, m), g) in parts.iter().zip(fs) {
                acc = select(kc, r, &compose_node(kc, m, g)?, &acc)?;
            }
            Ok(acc)
        }
        (SurjNode::Star(s), FunctionRep::OnePoint { tail, children }) => {
            let mut acc = FunctionRep::constant(kc, tail)?;
            // the parts are disjoint, so `acc` is still `tail` on each of them
            for (n, g) in children {
                let (r, m) = s.part(*n)?;
                acc = select(kc, &r, &compose_node(kc, &m, g)?, &acc)?;
            }
            Ok(acc)
        }
        (SurjNode::Cantor { path, prefix }, FunctionRep::Cantor(t)) => {
            // everything off the cylinder goes to 000...
            let outside = t.eval(&vec![false; t.depth()])?;
            let inner = FunctionRep::Cantor(Cylinders::graft(prefix, t.clone(), &outside));
            at_node(kc, path, inner, &outside)
        }
        _ => Err(mismatch()),
    }
}

fn node_to_json(node: &SurjNode) -> Value {
    match node {
        SurjNode::Leaf { pieces } => json!({ "leaf": pieces.iter().map(Region::to_json).collect::<Vec<_>>() }),
        SurjNode::Sum { parts, rest } => json!({ "sum": {
            "parts": parts.iter().map(|(r, m)| json!({ "region": r.to_json(), "map": node_to_json(m) })).collect::<Vec<_>>(),
            "rest": node_to_json(rest),
        } }),
        SurjNode::Star(s) => json!({ "star": { "site": s.site.to_json(), "demand": s.demand.to_json() } }),
        SurjNode::Cantor { path, prefix } => json!({ "cantor": {
            "path": Point(path.clone()).to_string(),
            "prefix": prefix.iter().map(|b| if *b { '1' } else { '0' }).collect::<String>(),
        } }),
    }
}

fn node_from_json(kc: &Arc<Space>, v: &Value) -> Result<SurjNode> {
    let err = |w: &str| Error::Json(format!("surjection: {w}"));
    if let Some(ps) = v.get("leaf").and_then(Value::as_array) {
        let pieces = ps.iter().map(Region::from_json).collect::<Result<Vec<_>>>()?;
        for p in &pieces {
            p.check(kc)?;
        }
        return Ok(SurjNode::Leaf { pieces });
    }
    if let Some(s) = v.get("sum") {
        let parts = s
            .get("parts")
            .and_then(Value::as_array)
            .ok_or_else(|| err("parts"))?
            .iter()
            .map(|p| {
                let r = Region::from_json(p.get("region").ok_or_else(|| err("region"))?)?;
                r.check(kc)?;
                Ok((r, node_from_json(kc, p.get("map").ok_or_else(|| err("map"))?)?))
            })
            .collect::<Result<Vec<_>>>()?;
        let rest = node_from_json(kc, s.get("rest").ok_or_else(|| err("rest"))?)?;
        return Ok(SurjNode::Sum { parts, rest: Box::new(rest) });
    }
    if let Some(s) = v.get("star") {
        let site = Site::from_json(s.get("site").ok_or_else(|| err("site"))?)?;
        let demand = Demand::from_json(s.get("demand").ok_or_else(|| err("demand"))?)?;
        site.envelope(kc)?.check(kc)?;
        return Ok(SurjNode::Star(Box::new(StarMap { site, demand, kc: kc.clone(), cache: Mutex::new(BTreeMap::new()) })));
    }
    if let Some(c) = v.get("cantor") {
        let site = Site::from_json(&json!({ "cylinders": c }))?;
        let Site::Cylinders { path, prefix } = site else { unreachable!() };
        return Ok(SurjNode::Cantor { path, prefix });
    }
    Err(err("unknown node"))
}
