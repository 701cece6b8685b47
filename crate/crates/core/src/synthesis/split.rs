//! Choosing disjoint clopen pieces of prescribed height, and the places where
//! a glued operator puts its infinitely many parts.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::region::Region;
use crate::cardinal::{card_mul, card_sum, Cardinal};
use crate::error::{Error, Result};
use crate::ordinal::{ExtendedOrdinal, Ordinal};
use crate::space::{card_of, derived, height, Family, Point, Space, Step};

/// Whether the point at infinity of a one-point node has rank at least `beta`.
fn infinity_has_rank(node: &Space, beta: &Ordinal) -> bool {
    match node {
        Space::OnePoint { family: Family::Uniform(l), .. } => ExtendedOrdinal::Ord(beta.clone()) <= height(l),
        Space::OnePoint { family: Family::Ramp(a), .. } => beta <= a,
        _ => false,
    }
}

/// Least copy index `>= from` whose member has a point of rank `beta`.
fn qualifying_copy(node: &Space, beta: &Ordinal, from: u64) -> Result<Option<u64>> {
    match node {
        Space::OnePoint { family: Family::Uniform(l), .. } => {
            Ok((ExtendedOrdinal::Ord(beta.clone()) < height(l)).then_some(from))
        }
        Space::OnePoint { family: Family::Ramp(a), .. } => {
            if beta >= a {
                return Ok(None);
            }
            let mut n = from.max(1);
            while &a.fund_seq(n)? < beta {
                n += 1;
            }
            Ok(Some(n))
        }
        _ => Ok(None),
    }
}

fn star_parts(node: &Space, r: &Region) -> Option<(bool, BTreeMap<u64, Region>)> {
    match (r, node) {
        (Region::Whole, Space::OnePoint { .. }) => Some((true, BTreeMap::new())),
        (Region::Star { inf, children }, _) => Some((*inf, children.clone())),
        _ => None,
    }
}

/// Does the region contain a point of `K^(beta)`?
pub fn meets_rank(kc: &Space, r: &Region, beta: &Ordinal) -> Result<bool> {
    Ok(!rank_count(kc, r, beta)?.is_zero())
}

/// `|R ∩ K^(beta)|`.
pub fn rank_count(kc: &Space, r: &Region, beta: &Ordinal) -> Result<Cardinal> {
    match (r, kc) {
        (Region::Empty, _) => Ok(Cardinal::ZERO),
        (Region::Whole, _) => Ok(card_of(&derived(kc, beta))),
        (Region::Sum(rs), Space::Sum(ss)) => {
            let mut acc = Cardinal::ZERO;
            for (r, s) in rs.iter().zip(ss) {
                acc = card_sum(acc, rank_count(s, r, beta)?);
            }
            Ok(acc)
        }
        (Region::Star { inf, children }, Space::OnePoint { .. }) => {
            let mut acc = Cardinal::ZERO;
            for (k, c) in children {
                acc = card_sum(acc, rank_count(&kc.canonical_member(*k)?, c, beta)?);
            }
            if *inf {
                if infinity_has_rank(kc, beta) {
                    acc = card_sum(acc, Cardinal::Finite(1));
                }
                let from = children.keys().last().map_or(1, |k| k + 1);
                if let Some(c) = qualifying_copy(kc, beta, from)? {
                    let member = kc.canonical_member(c)?;
                    acc = card_sum(acc, card_mul(Cardinal::Aleph0, card_of(&derived(&member, beta))));
                }
            }
            Ok(acc)
        }
        (Region::Leaf(set), Space::Fin(_)) => {
            Ok(if beta.is_zero() { Cardinal::Finite(set.len() as u64) } else { Cardinal::ZERO })
        }
        (Region::Cantor(c), Space::Cantor) => Ok(if c.is_empty() { Cardinal::ZERO } else { Cardinal::Continuum }),
        _ => Err(Error::InvalidRegion(format!("selector does not fit {kc}"))),
    }
}

/// One clopen piece of `r` meeting `K^(beta)`, leaving at least `reserve`
/// unlisted copies behind when it has to take a point at infinity.
pub fn first_piece(kc: &Space, r: &Region, beta: &Ordinal, reserve: u64) -> Result<Option<Region>> {
    match (r, kc) {
        (Region::Empty, _) => Ok(None),
        (Region::Whole | Region::Leaf(_), Space::Fin(n)) => {
            if !beta.is_zero() {
                return Ok(None);
            }
            let first = match r {
                Region::Leaf(set) => set.iter().next().copied(),
                _ => (*n > 0).then_some(0),
            };
            Ok(first.map(|i| Region::Leaf([i].into()).normalized()))
        }
        (Region::Whole | Region::Cantor(_), Space::Cantor) => {
            let first = match r {
                Region::Cantor(c) => c.first().cloned(),
                _ => Some(vec![]),
            };
            Ok(first.map(|mut c| {
                c.push(false);
                Region::Cantor(vec![c])
            }))
        }
        (Region::Whole | Region::Sum(_), Space::Sum(ss)) => {
            for (i, s) in ss.iter().enumerate() {
                let sub = r.at(kc, &[Step::SumBranch(i as u64)])?;
                if let Some(p) = first_piece(s, &sub, beta, reserve)? {
                    return Region::at_path(kc, &[Step::SumBranch(i as u64)], p).map(Some);
                }
            }
            Ok(None)
        }
        (_, Space::OnePoint { .. }) => {
            let (inf, children) = star_parts(kc, r).ok_or_else(|| Error::InvalidRegion("expected star".into()))?;
            for (k, c) in &children {
                if let Some(p) = first_piece(&kc.canonical_member(*k)?, c, beta, reserve)? {
                    return Ok(Some(Region::Star { inf: false, children: BTreeMap::from([(*k, p)]) }.normalized()));
                }
            }
            if !inf {
                return Ok(None);
            }
            let after = children.keys().last().map_or(1, |k| k + 1);
            if let Some(c) = qualifying_copy(kc, beta, after)? {
                return Ok(Some(Region::Star { inf: false, children: BTreeMap::from([(c, Region::Whole)]) }));
            }
            if infinity_has_rank(kc, beta) {
                let mut out: BTreeMap<u64, Region> = children.keys().map(|k| (*k, Region::Empty)).collect();
                for k in after..after + reserve {
                    out.insert(k, Region::Empty);
                }
                return Ok(Some(Region::Star { inf: true, children: out }.normalized()));
            }
            Ok(None)
        }
        _ => Err(Error::InvalidRegion(format!("selector does not fit {kc}"))),
    }
}

/// Pairwise disjoint nonempty clopen subsets `R_i` of `region` with
/// `R_i^(demands[i])` nonempty.
pub fn split_region(kc: &Space, region: &Region, demands: &[Ordinal]) -> Result<Vec<Region>> {
    let mut order: Vec<usize> = (0..demands.len()).collect();
    order.sort_by(|a, b| demands[*b].cmp(&demands[*a]));
    let mut remaining = region.clone();
    let mut out = vec![Region::Empty; demands.len()];
    for (done, &i) in order.iter().enumerate() {
        let reserve = (order.len() - done - 1) as u64;
        let piece = first_piece(kc, &remaining, &demands[i], reserve)?
            .ok_or_else(|| Error::InsufficientHeight(demands[i].to_string()))?;
        remaining = remaining.difference(kc, &piece)?;
        out[i] = piece;
    }
    Ok(out)
}

/// What every part of a glued operator must host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Demand {
    /// Each part hosts `[1, w^b]`; the glued domain is `[1, w^(b+1)]`.
    Uniform(Ordinal),
    /// Part `n` hosts `[1, w^(a[n])]`; the glued domain is `[1, w^a]`.
    Ramp(Ordinal),
}

impl Demand {
    pub fn for_interval(alpha: &Ordinal) -> Result<Demand> {
        match alpha.pred() {
            Some(b) => Ok(Demand::Uniform(b)),
            None if alpha.is_limit() => Ok(Demand::Ramp(alpha.clone())),
            None => Err(Error::InsufficientHeight("0".into())),
        }
    }

    pub fn rank(&self, n: u64) -> Result<Ordinal> {
        match self {
            Demand::Uniform(b) => Ok(b.clone()),
            Demand::Ramp(a) => a.fund_seq(n),
        }
    }

    /// Rank of the point at infinity of the glued domain.
    pub fn target(&self) -> Ordinal {
        match self {
            Demand::Uniform(b) => b.succ(),
            Demand::Ramp(a) => a.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Demand::Uniform(b) => json!({ "uniform": b.to_string() }),
            Demand::Ramp(a) => json!({ "ramp": a.to_string() }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Demand> {
        let err = || Error::Json("demand".into());
        if let Some(b) = v.get("uniform").and_then(Value::as_str) {
            return Ok(Demand::Uniform(b.parse().map_err(|_| err())?));
        }
        if let Some(a) = v.get("ramp").and_then(Value::as_str) {
            let a: Ordinal = a.parse().map_err(|_| err())?;
            if !a.is_limit() {
                return Err(Error::NotALimit(a.to_string()));
            }
            return Ok(Demand::Ramp(a));
        }
        Err(err())
    }
}

/// Where the parts of a glued operator live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Site {
    /// Copies `>= first` of the one-point node at `path`; the envelope is
    /// those copies together with the point at infinity.
    Copies { path: Vec<Step>, first: u64 },
    /// Cylinders `prefix 1^(n-1) 0` inside the cylinder `prefix` of the
    /// Cantor node at `path`.
    Cylinders { path: Vec<Step>, prefix: Vec<bool> },
    /// Successive greedy pieces of `region`; the envelope is the whole space.
    Pieces { region: Region },
}

fn node_at(kc: &Space, path: &[Step]) -> Result<Space> {
    let mut cur = kc.clone();
    for step in path {
        cur = match (&cur, step) {
            (Space::Sum(parts), Step::SumBranch(i)) => {
                parts.get(*i as usize).cloned().ok_or_else(|| Error::InvalidRegion("bad site path".into()))?
            }
            (Space::OnePoint { .. }, Step::CopyIndex(n)) => cur.canonical_member(*n)?,
            _ => return Err(Error::InvalidRegion("bad site path".into())),
        };
    }
    Ok(cur)
}

impl Site {
    pub fn envelope(&self, kc: &Space) -> Result<Region> {
        match self {
            Site::Copies { path, first } => {
                let children = (1..*first).map(|k| (k, Region::Empty)).collect();
                Region::at_path(kc, path, Region::Star { inf: true, children }.normalized())
            }
            Site::Cylinders { path, prefix } => Region::at_path(kc, path, Region::Cantor(vec![prefix.clone()])),
            Site::Pieces { .. } => Ok(Region::Whole),
        }
    }

    /// Copy indices used by parts `1..=n`.
    fn copy_sequence(&self, kc: &Space, demand: &Demand, n: u64) -> Result<Vec<u64>> {
        let Site::Copies { path, first } = self else { unreachable!() };
        let node = node_at(kc, path)?;
        let mut out = Vec::with_capacity(n as usize);
        let mut next = *first;
        for i in 1..=n {
            let c = qualifying_copy(&node, &demand.rank(i)?, next)?
                .ok_or_else(|| Error::InsufficientHeight(demand.rank(i).map(|o| o.to_string()).unwrap_or_default()))?;
            out.push(c);
            next = c + 1;
        }
        Ok(out)
    }

    /// Region of part `n` (1-based).
    pub fn part_region(&self, kc: &Space, demand: &Demand, n: u64) -> Result<Region> {
        match self {
            Site::Copies { path, .. } => {
                let c = *self.copy_sequence(kc, demand, n)?.last().expect("n >= 1");
                Region::at_path(kc, path, Region::Star { inf: false, children: BTreeMap::from([(c, Region::Whole)]) })
            }
            Site::Cylinders { path, prefix } => {
                let mut bits = prefix.clone();
                bits.extend(std::iter::repeat_n(true, n as usize - 1));
                bits.push(false);
                Region::at_path(kc, path, Region::Cantor(vec![bits]))
            }
            Site::Pieces { region } => {
                let mut remaining = region.clone();
                let mut piece = Region::Empty;
                for i in 1..=n {
                    let beta = demand.rank(i)?;
                    piece = first_piece(kc, &remaining, &beta, 1)?
                        .ok_or_else(|| Error::InsufficientHeight(beta.to_string()))?;
                    remaining = remaining.difference(kc, &piece)?;
                }
                Ok(piece)
            }
        }
    }

    /// The part containing a point, if any.
    pub fn locate(&self, kc: &Space, demand: &Demand, p: &Point) -> Result<Option<u64>> {
        match self {
            Site::Copies { path, first } => {
                let steps = p.steps();
                if steps.len() <= path.len() || steps[..path.len()] != path[..] {
                    return Ok(None);
                }
                let Step::CopyIndex(c) = steps[path.len()] else { return Ok(None) };
                if c < *first {
                    return Ok(None);
                }
                let seq = self.copy_sequence(kc, demand, c - first + 1)?;
                Ok(seq.iter().position(|x| *x == c).map(|i| i as u64 + 1))
            }
            Site::Cylinders { path, prefix } => {
                let steps = p.steps();
                if steps.len() != path.len() + 1 || steps[..path.len()] != path[..] {
                    return Ok(None);
                }
                let Step::CantorPrefix(bits) = &steps[path.len()] else { return Ok(None) };
                let k = prefix.len().min(bits.len());
                if bits[..k] != prefix[..k] {
                    return Ok(None);
                }
                if bits.len() < prefix.len() {
                    return Err(Error::PrefixTooShort { given: bits.len(), needed: prefix.len() + 1 });
                }
                match bits[prefix.len()..].iter().position(|b| !*b) {
                    Some(i) => Ok(Some(i as u64 + 1)),
                    None => Err(Error::PrefixTooShort { given: bits.len(), needed: bits.len() + 1 }),
                }
            }
            Site::Pieces { .. } => Err(Error::Unsupported("locating greedy pieces".into())),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Site::Copies { path, first } => json!({ "copies": { "path": Point(path.clone()).to_string(), "first": first } }),
            Site::Cylinders { path, prefix } => json!({ "cylinders": {
                "path": Point(path.clone()).to_string(),
                "prefix": prefix.iter().map(|b| if *b { '1' } else { '0' }).collect::<String>(),
            } }),
            Site::Pieces { region } => json!({ "pieces": region.to_json() }),
        }
    }

    pub fn from_json(v: &Value) -> Result<Site> {
        let err = |w: &str| Error::Json(format!("site: {w}"));
        let path_of = |o: &Value| -> Result<Vec<Step>> {
            let s = o.get("path").and_then(Value::as_str).ok_or_else(|| err("path"))?;
            Ok(crate::cli::parse::parse_point(s)?.0)
        };
        if let Some(c) = v.get("copies") {
            let first = c.get("first").and_then(Value::as_u64).filter(|f| *f >= 1).ok_or_else(|| err("first"))?;
            return Ok(Site::Copies { path: path_of(c)?, first });
        }
        if let Some(c) = v.get("cylinders") {
            let s = c.get("prefix").and_then(Value::as_str).ok_or_else(|| err("prefix"))?;
            if !s.bytes().all(|b| b == b'0' || b == b'1') {
                return Err(err("prefix must be a bit string"));
            }
            return Ok(Site::Cylinders { path: path_of(c)?, prefix: s.bytes().map(|b| b == b'1').collect() });
        }
        if let Some(r) = v.get("pieces") {
            return Ok(Site::Pieces { region: Region::from_json(r)? });
        }
        Err(err("unknown site"))
    }
}

/// Preorder search of the region for a node whose parts can host `demand`.
pub fn find_site(kc: &Space, r: &Region, demand: &Demand) -> Result<Option<Site>> {
    let mut path = Vec::new();
    find_site_rec(kc, r, demand, &mut path)
}

fn find_site_rec(node: &Space, r: &Region, demand: &Demand, path: &mut Vec<Step>) -> Result<Option<Site>> {
    if r.is_empty() {
        return Ok(None);
    }
    match node {
        Space::Cantor => {
            let prefix = match r {
                Region::Cantor(c) => c[0].clone(),
                _ => vec![],
            };
            Ok(Some(Site::Cylinders { path: path.clone(), prefix }))
        }
        Space::Sum(parts) => {
            for (i, s) in parts.iter().enumerate() {
                let sub = r.at(node, &[Step::SumBranch(i as u64)])?;
                path.push(Step::SumBranch(i as u64));
                let found = find_site_rec(s, &sub, demand, path)?;
                path.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
            Ok(None)
        }
        Space::OnePoint { .. } => {
            let (inf, children) = star_parts(node, r).ok_or_else(|| Error::InvalidRegion("expected star".into()))?;
            if inf && infinity_has_rank(node, &demand.target()) {
                let first = children.keys().last().map_or(1, |k| k + 1);
                return Ok(Some(Site::Copies { path: path.clone(), first }));
            }
            for (k, c) in &children {
                path.push(Step::CopyIndex(*k));
                let found = find_site_rec(&node.canonical_member(*k)?, c, demand, path)?;
                path.pop();
                if found.is_some() {
                    return Ok(found);
                }
            }
            Ok(None)
        }
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::derived;

    fn kc(s: &str) -> Space {
        s.parse::<Space>().unwrap().canonical_tree().unwrap()
    }

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    /// Height check through the closed form: restrict to the region by
    /// counting rank points.
    fn hosts(k: &Space, r: &Region, beta: &Ordinal) -> bool {
        meets_rank(k, r, beta).unwrap()
    }

    #[test]
    fn three_copies_of_the_convergent_sequence() {
        let k = kc("I(2,1)");
        let pieces = split_region(&k, &Region::Whole, &[o("1"), o("1"), o("1")]).unwrap();
        assert_eq!(pieces.len(), 3);
        for (i, a) in pieces.iter().enumerate() {
            assert!(hosts(&k, a, &o("1")));
            assert!(!a.is_empty());
            for b in &pieces[i + 1..] {
                assert!(a.disjoint(&k, b).unwrap());
            }
        }
        // each piece is a whole copy of [1,w]
        let member = k.canonical_member(1).unwrap();
        assert_eq!(derived(&member, &o("1")), Space::Fin(1));
    }

    #[test]
    fn trivial_splits() {
        assert!(split_region(&kc("I(2,1)"), &Region::Whole, &[]).unwrap().is_empty());
        assert!(matches!(
            split_region(&kc("fin(1)"), &Region::Whole, &[o("1")]),
            Err(Error::InsufficientHeight(_))
        ));
    }

    #[test]
    fn mixed_demands_reserve_copies() {
        // [1,w]: the limit point and one isolated point
        let k = kc("I(1,1)");
        let pieces = split_region(&k, &Region::Whole, &[o("0"), o("1")]).unwrap();
        assert!(hosts(&k, &pieces[1], &o("1")));
        assert!(hosts(&k, &pieces[0], &o("0")));
        assert!(pieces[0].disjoint(&k, &pieces[1]).unwrap());
        let k = kc("sum(I(2,1),fin(5))");
        assert_eq!(rank_count(&k, &Region::Whole, &o("2")).unwrap(), Cardinal::Finite(1));
        assert!(split_region(&k, &Region::Whole, &[o("2"), o("2")]).is_err());
    }

    #[test]
    fn cantor_pieces_are_cylinders() {
        let k = kc("cantor");
        let pieces = split_region(&k, &Region::Whole, &[o("w"), o("3")]).unwrap();
        assert!(pieces[0].disjoint(&k, &pieces[1]).unwrap());
    }

    #[test]
    fn sites() {
        let k = kc("sum(fin(2),I(2,1))");
        let d = Demand::for_interval(&o("2")).unwrap();
        let site = find_site(&k, &Region::Whole, &d).unwrap().unwrap();
        assert_eq!(site, Site::Copies { path: vec![Step::SumBranch(1)], first: 1 });
        let p2 = site.part_region(&k, &d, 2).unwrap();
        assert!(hosts(&k, &p2, &o("1")));
        assert_eq!(site.locate(&k, &d, &"b1/c2/inf".parse().unwrap()).unwrap(), Some(2));
        assert_eq!(site.locate(&k, &d, &"b1/inf".parse().unwrap()).unwrap(), None);
        let ramp = kc("I(w,1)");
        let d = Demand::for_interval(&o("w")).unwrap();
        let site = find_site(&ramp, &Region::Whole, &d).unwrap().unwrap();
        for n in 1..5 {
            let r = site.part_region(&ramp, &d, n).unwrap();
            assert!(hosts(&ramp, &r, &d.rank(n).unwrap()));
        }
        let d3 = Demand::for_interval(&o("3")).unwrap();
        let site = find_site(&ramp, &Region::Whole, &d3).unwrap().unwrap();
        // copies of opramp(w) are [1,w^n]; rank 2 needs n >= 2
        assert_eq!(site.part_region(&ramp, &d3, 1).unwrap(), Region::Star {
            inf: false,
            children: BTreeMap::from([(2, Region::Whole)])
        });
        assert!(find_site(&kc("I(1,3)"), &Region::Whole, &d3).unwrap().is_none());
    }

    #[test]
    fn cylinder_sites_locate_parts() {
        let k = kc("cantor");
        let d = Demand::Uniform(o("5"));
        let site = find_site(&k, &Region::Whole, &d).unwrap().unwrap();
        assert_eq!(site.locate(&k, &d, &"x110".parse().unwrap()).unwrap(), Some(3));
        assert!(site.locate(&k, &d, &"x11".parse().unwrap()).is_err());
    }
}
