//! Linear operators `C(L) -> C(K)` built from characteristic functions of
//! clopen regions, glued along one-point compactifications.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_traits::{One, Signed, Zero};
use serde_json::{json, Map, Value};

use super::region::Region;
use super::split::{split_region, Demand, Site};
use super::surjection::SurjectionMap;
use crate::error::{Error, Result};
use crate::funcalc::{indicator, rational_from_str, select, rational_to_string, FunctionRep, Q};
use crate::ordinal::Ordinal;
use crate::space::Space;

/// Number of glue parts written out explicitly; later parts follow the site
/// rule and are built on first use.
pub const EXPLICIT_PARTS: u64 = 2;

#[derive(Debug)]
pub enum OpNode {
    /// Domain `fin(m)`: `T(v) = Σ v_i χ(regions[i])`.
    Base { regions: Vec<Region> },
    /// Domain a finite sum: each block acts on its own summand.
    Sum { parts: Vec<OpNode> },
    /// Domain a one-point compactification:
    /// `T(g) = a·value·χ(h) + Σ T_n(g_n - a)`.
    Glue(Box<Glue>),
    /// `T(f) = (f ∘ ρ)·χ(cutoff)`.
    Compose { map: Arc<SurjectionMap>, cutoff: Option<Region> },
}

#[derive(Clone, Debug)]
pub struct Part {
    pub region: Region,
    pub op: OpNode,
}

#[derive(Debug)]
pub struct Glue {
    pub h: Region,
    pub value: Q,
    pub site: Site,
    pub demand: Demand,
    pub explicit: BTreeMap<u64, Arc<Part>>,
    pub rule_from: u64,
    kc: Arc<Space>,
    cache: Mutex<BTreeMap<u64, Arc<Part>>>,
}

impl Clone for Glue {
    fn clone(&self) -> Self {
        Glue {
            h: self.h.clone(),
            value: self.value.clone(),
            site: self.site.clone(),
            demand: self.demand.clone(),
            explicit: self.explicit.clone(),
            rule_from: self.rule_from,
            kc: self.kc.clone(),
            cache: Mutex::new(self.cache.lock().expect("cache poisoned").clone()),
        }
    }
}

impl Clone for OpNode {
    fn clone(&self) -> Self {
        match self {
            OpNode::Base { regions } => OpNode::Base { regions: regions.clone() },
            OpNode::Sum { parts } => OpNode::Sum { parts: parts.clone() },
            OpNode::Glue(g) => OpNode::Glue(g.clone()),
            OpNode::Compose { map, cutoff } => OpNode::Compose { map: map.clone(), cutoff: cutoff.clone() },
        }
    }
}

impl Glue {
    /// A glue with `h = χ(envelope)` whose parts all come from the rule.
    pub(crate) fn new(kc: &Arc<Space>, site: Site, demand: Demand) -> Result<Glue> {
        let h = site.envelope(kc)?;
        Ok(Glue {
            h,
            value: Q::one(),
            site,
            demand,
            explicit: BTreeMap::new(),
            rule_from: 1,
            kc: kc.clone(),
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    /// Writes parts `1..=EXPLICIT_PARTS` out. Nested glues stay lazy, since
    /// expanding every level doubles the tree along each successor chain.
    fn materialize(&mut self) -> Result<()> {
        for n in self.rule_from..=EXPLICIT_PARTS {
            let part = self.rule_part(n)?;
            self.explicit.insert(n, part);
        }
        self.rule_from = self.rule_from.max(EXPLICIT_PARTS + 1);
        Ok(())
    }

    fn rule_part(&self, n: u64) -> Result<Arc<Part>> {
        if let Some(p) = self.cache.lock().expect("cache poisoned").get(&n) {
            return Ok(p.clone());
        }
        let region = self.site.part_region(&self.kc, &self.demand, n)?;
        let op = synth_node(&self.kc, &self.demand.rank(n)?, 1, &region)?;
        let part = Arc::new(Part { region, op });
        self.cache.lock().expect("cache poisoned").insert(n, part.clone());
        Ok(part)
    }

    /// Part `n`; `None` when an explicit slot is vacant.
    pub fn part(&self, n: u64) -> Result<Option<Arc<Part>>> {
        if n < self.rule_from {
            return Ok(self.explicit.get(&n).cloned());
        }
        self.rule_part(n).map(Some)
    }
}

/// An operator from `C(domain)` into `C(codomain)`, acting on functions over
/// the canonical trees of both spaces.
#[derive(Clone, Debug)]
pub struct Operator {
    pub domain: Space,
    pub codomain: Space,
    kc: Arc<Space>,
    lc: Space,
    pub root: OpNode,
}

impl Operator {
    pub(crate) fn assemble(domain: Space, codomain: Space, kc: Arc<Space>, root: OpNode) -> Result<Operator> {
        let lc = domain.canonical_tree()?;
        validate(&kc, &root)?;
        Ok(Operator { domain, codomain, kc, lc, root })
    }

    /// Assembles a freshly synthesized tree, writing out the parts of its
    /// outermost glues.
    pub(crate) fn synthesized(domain: Space, codomain: Space, kc: Arc<Space>, mut root: OpNode) -> Result<Operator> {
        materialize_outer(&mut root)?;
        Operator::assemble(domain, codomain, kc, root)
    }

    pub fn canonical_domain(&self) -> &Space {
        &self.lc
    }

    pub fn canonical_codomain(&self) -> &Space {
        &self.kc
    }

    /// The clopen set outside which every image vanishes.
    pub fn support(&self) -> Result<Region> {
        support(&self.kc, &self.root)
    }

    pub fn apply(&self, f: &FunctionRep) -> Result<FunctionRep> {
        f.check_shape(&self.lc)?;
        Ok(apply_node(&self.kc, &self.root, f)?.normalized())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "domain": self.domain.to_string(),
            "codomain": self.codomain.to_string(),
            "root": node_to_json(&self.root),
        })
    }

    /// Reads an operator and checks the glue invariants.
    pub fn from_json(v: &Value) -> Result<Operator> {
        let space = |k: &str| -> Result<Space> {
            v.get(k).and_then(Value::as_str).ok_or_else(|| Error::Json(k.into()))?.parse()
        };
        let domain = space("domain")?;
        let codomain = space("codomain")?;
        let kc = Arc::new(codomain.canonical_tree()?);
        let root = node_from_json(&kc, v.get("root").ok_or_else(|| Error::Json("root".into()))?)?;
        Operator::assemble(domain, codomain, kc, root)
    }
}

fn apply_node(kc: &Space, node: &OpNode, f: &FunctionRep) -> Result<FunctionRep> {
    let mismatch = || Error::SpaceMismatch("function does not fit the operator domain".into());
    match (node, f) {
        (OpNode::Base { regions }, FunctionRep::Leaf(v)) if v.len() == regions.len() => {
            let mut acc = FunctionRep::constant(kc, &Q::zero())?;
            for (r, x) in regions.iter().zip(v) {
                if !x.is_zero() {
                    acc = select(kc, r, &FunctionRep::constant(kc, x)?, &acc)?;
                }
            }
            Ok(acc)
        }
        (OpNode::Sum { parts }, FunctionRep::Sum(fs)) if fs.len() == parts.len() => {
            let mut acc = FunctionRep::constant(kc, &Q::zero())?;
            for (t, g) in parts.iter().zip(fs) {
                acc = acc.add(&apply_node(kc, t, g)?)?;
            }
            Ok(acc)
        }
        (OpNode::Glue(glue), FunctionRep::OnePoint { tail, children }) => {
            let mut acc = indicator(kc, &glue.h)?.scale(&(&glue.value * tail));
            for (n, g) in children {
                if let Some(part) = glue.part(*n)? {
                    acc = acc.add(&apply_node(kc, &part.op, &g.add_const(&-tail))?)?;
                }
            }
            Ok(acc)
        }
        (OpNode::Compose { map, cutoff }, _) => {
            let out = map.compose(f)?;
            match cutoff {
                Some(r) => select(kc, r, &out, &FunctionRep::constant(kc, &Q::zero())?),
                None => Ok(out),
            }
        }
        _ => Err(mismatch()),
    }
}

fn materialize_outer(node: &mut OpNode) -> Result<()> {
    match node {
        OpNode::Sum { parts } => parts.iter_mut().try_for_each(materialize_outer),
        OpNode::Glue(g) => g.materialize(),
        OpNode::Base { .. } | OpNode::Compose { .. } => Ok(()),
    }
}

fn support(kc: &Space, node: &OpNode) -> Result<Region> {
    match node {
        OpNode::Base { regions } => regions.iter().try_fold(Region::Empty, |acc, r| acc.union(kc, r)),
        OpNode::Sum { parts } => parts.iter().try_fold(Region::Empty, |acc, t| acc.union(kc, &support(kc, t)?)),
        OpNode::Glue(g) => Ok(g.h.clone()),
        OpNode::Compose { cutoff, .. } => Ok(cutoff.clone().unwrap_or(Region::Whole)),
    }
}

fn pairwise_disjoint(kc: &Space, regions: &[Region]) -> Result<()> {
    for (i, a) in regions.iter().enumerate() {
        for b in &regions[i + 1..] {
            if !a.disjoint(kc, b)? {
                return Err(Error::RegionOverlap(format!("{a} meets {b}")));
            }
        }
    }
    Ok(())
}

fn validate(kc: &Space, node: &OpNode) -> Result<()> {
    match node {
        OpNode::Base { regions } => {
            for r in regions {
                r.check(kc)?;
            }
            pairwise_disjoint(kc, regions)
        }
        OpNode::Sum { parts } => {
            for t in parts {
                validate(kc, t)?;
            }
            let supports = parts.iter().map(|t| support(kc, t)).collect::<Result<Vec<_>>>()?;
            pairwise_disjoint(kc, &supports)
        }
        OpNode::Glue(g) => {
            g.h.check(kc)?;
            if !g.value.is_positive() {
                return Err(Error::InvalidRegion(format!("glue value {} is not positive", g.value)));
            }
            if !g.site.envelope(kc)?.subset_of(kc, &g.h)? {
                return Err(Error::ContainmentViolation("site envelope leaves h".into()));
            }
            if g.explicit.keys().any(|n| *n == 0 || *n >= g.rule_from) {
                return Err(Error::InvalidRegion("explicit part outside 1..rule_from".into()));
            }
            let mut regions = Vec::new();
            for part in g.explicit.values() {
                part.region.check(kc)?;
                if !part.region.subset_of(kc, &g.h)? {
                    return Err(Error::ContainmentViolation(format!("part {} leaves h", part.region)));
                }
                validate(kc, &part.op)?;
                if !support(kc, &part.op)?.subset_of(kc, &part.region)? {
                    return Err(Error::ContainmentViolation(format!("operator leaves its part {}", part.region)));
                }
                regions.push(part.region.clone());
            }
            for n in g.rule_from..g.rule_from + EXPLICIT_PARTS {
                regions.push(g.site.part_region(kc, &g.demand, n)?);
            }
            pairwise_disjoint(kc, &regions)
        }
        OpNode::Compose { cutoff, .. } => match cutoff {
            Some(r) => r.check(kc),
            None => Ok(()),
        },
    }
}

/// The block sending `C(canonical_interval(alpha, m))` into functions
/// supported by `region`.
pub(crate) fn synth_node(kc: &Arc<Space>, alpha: &Ordinal, m: u64, region: &Region) -> Result<OpNode> {
    if alpha.is_zero() {
        let regions = if m == 1 { vec![region.clone()] } else { split_region(kc, region, &vec![Ordinal::zero(); m as usize])? };
        return Ok(OpNode::Base { regions });
    }
    if m > 1 {
        let pieces = split_region(kc, region, &vec![alpha.clone(); m as usize])?;
        let parts = pieces.iter().map(|r| synth_node(kc, alpha, 1, r)).collect::<Result<Vec<_>>>()?;
        return Ok(OpNode::Sum { parts });
    }
    let demand = Demand::for_interval(alpha)?;
    let site = super::split::find_site(kc, region, &demand)?
        .ok_or_else(|| Error::InsufficientDerivedSet { alpha: alpha.to_string(), m })?;
    Ok(OpNode::Glue(Box::new(Glue::new(kc, site, demand)?)))
}

fn node_to_json(node: &OpNode) -> Value {
    match node {
        OpNode::Base { regions } => json!({ "base": regions.iter().map(Region::to_json).collect::<Vec<_>>() }),
        OpNode::Sum { parts } => json!({ "sum": parts.iter().map(node_to_json).collect::<Vec<_>>() }),
        OpNode::Glue(g) => {
            let parts: Map<String, Value> = g
                .explicit
                .iter()
                .map(|(n, p)| (n.to_string(), json!({ "region": p.region.to_json(), "op": node_to_json(&p.op) })))
                .collect();
            json!({ "glue": {
                "h": { "region": g.h.to_json(), "value": rational_to_string(&g.value) },
                "site": g.site.to_json(),
                "demand": g.demand.to_json(),
                "parts": parts,
                "rule_from": g.rule_from,
            } })
        }
        OpNode::Compose { map, cutoff } => json!({ "compose": {
            "map": map.to_json(),
            "cutoff": cutoff.as_ref().map(Region::to_json),
        } }),
    }
}

fn node_from_json(kc: &Arc<Space>, v: &Value) -> Result<OpNode> {
    let err = |w: &str| Error::Json(format!("operator: {w}"));
    if let Some(rs) = v.get("base").and_then(Value::as_array) {
        return Ok(OpNode::Base { regions: rs.iter().map(Region::from_json).collect::<Result<_>>()? });
    }
    if let Some(ps) = v.get("sum").and_then(Value::as_array) {
        return Ok(OpNode::Sum { parts: ps.iter().map(|p| node_from_json(kc, p)).collect::<Result<_>>()? });
    }
    if let Some(g) = v.get("glue") {
        let h = g.get("h").ok_or_else(|| err("h"))?;
        let region = Region::from_json(h.get("region").ok_or_else(|| err("h.region"))?)?;
        let value = rational_from_str(h.get("value").and_then(Value::as_str).ok_or_else(|| err("h.value"))?)?;
        let site = Site::from_json(g.get("site").ok_or_else(|| err("site"))?)?;
        let demand = Demand::from_json(g.get("demand").ok_or_else(|| err("demand"))?)?;
        let rule_from = g.get("rule_from").and_then(Value::as_u64).ok_or_else(|| err("rule_from"))?;
        let mut explicit = BTreeMap::new();
        for (k, p) in g.get("parts").and_then(Value::as_object).ok_or_else(|| err("parts"))? {
            let n: u64 = k.parse().map_err(|_| err("part index"))?;
            let region = Region::from_json(p.get("region").ok_or_else(|| err("part region"))?)?;
            let op = node_from_json(kc, p.get("op").ok_or_else(|| err("part op"))?)?;
            explicit.insert(n, Arc::new(Part { region, op }));
        }
        return Ok(OpNode::Glue(Box::new(Glue {
            h: region,
            value,
            site,
            demand,
            explicit,
            rule_from,
            kc: kc.clone(),
            cache: Mutex::new(BTreeMap::new()),
        })));
    }
    if let Some(c) = v.get("compose") {
        let map = SurjectionMap::from_json(c.get("map").ok_or_else(|| err("map"))?)?;
        if map.canonical_domain() != &**kc {
            return Err(Error::SpaceMismatch("composed map lives on another space".into()));
        }
        let cutoff = match c.get("cutoff") {
            None | Some(Value::Null) => None,
            Some(r) => Some(Region::from_json(r)?),
        };
        return Ok(OpNode::Compose { map: Arc::new(map), cutoff });
    }
    Err(err("unknown node"))
}
