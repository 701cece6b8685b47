//! Constructive witnesses: clopen splitting, embedding operators and
//! continuous surjections.

pub mod operator;
pub mod region;
pub mod split;
pub mod surjection;

use std::sync::Arc;

pub use operator::{OpNode, Operator};
pub use region::Region;
pub use split::{split_region, Demand, Site};
pub use surjection::{SurjNode, SurjectionMap};

use crate::cardinal::Cardinal;
use crate::error::{Error, Result};
use crate::ordinal::{ExtendedOrdinal, Ordinal};
use crate::space::{rel_cellularity, IndexSize, Space};
use operator::{synth_node, Glue};
use split::rank_count;
use surjection::{find_cantor, surj_node};

fn prepare(k: &Space, region: &Region) -> Result<Arc<Space>> {
    if !k.zero_dimensional() {
        return Err(Error::NotZeroDimensional(k.to_string()));
    }
    let kc = Arc::new(k.canonical_tree()?);
    region.check(&kc)?;
    Ok(kc)
}

fn check_rank(kc: &Space, region: &Region, alpha: &Ordinal, m: u64) -> Result<()> {
    if m == 0 {
        return Err(Error::Unsupported("m must be positive".into()));
    }
    if rank_count(kc, region, alpha)? < Cardinal::Finite(m) {
        return Err(Error::InsufficientDerivedSet { alpha: alpha.to_string(), m });
    }
    Ok(())
}

/// A positive-norm-preserving isometric embedding `C([1, w^alpha * m]) -> C(K)`
/// supported by `region`.
pub fn synth_interval_embedding(k: &Space, alpha: &Ordinal, m: u64, region: &Region) -> Result<Operator> {
    let kc = prepare(k, region)?;
    check_rank(&kc, region, alpha, m)?;
    let root = synth_node(&kc, alpha, m, region)?;
    Operator::synthesized(Space::interval(alpha.clone(), m), k.clone(), kc, root)
}

/// A continuous map of `K` onto `[1, w^alpha * m]` routing `region` onto the
/// whole target and everything else to the largest point.
pub fn synth_surjection(k: &Space, alpha: &Ordinal, m: u64, region: &Region) -> Result<SurjectionMap> {
    let kc = prepare(k, region)?;
    check_rank(&kc, region, alpha, m)?;
    let root = surj_node(&kc, alpha, m, region)?;
    SurjectionMap::with_canonical(k.clone(), Space::interval(alpha.clone(), m), kc, root)
}

/// `f ↦ f ∘ ρ`.
pub fn composition_operator(rho: SurjectionMap) -> Result<Operator> {
    let kc = Arc::new(rho.canonical_domain().clone());
    let (domain, codomain) = (rho.codomain.clone(), rho.domain.clone());
    Operator::assemble(domain, codomain, kc, OpNode::Compose { map: Arc::new(rho), cutoff: None })
}

/// An isometric embedding of `C(K_{n,[1,w^alpha]})`, the sum of `n` copies of
/// `[1, w^alpha]`, into `C(K)`.
pub fn synth_onepoint_embedding(k: &Space, n: u64, alpha: &Ordinal) -> Result<Operator> {
    let kc = prepare(k, &Region::Whole)?;
    let cell = rel_cellularity(k, &ExtendedOrdinal::Ord(alpha.clone()));
    let short = || Error::InsufficientCellularity { order: alpha.to_string(), n };
    if n == 0 || cell < Cardinal::Finite(n) {
        return Err(short());
    }
    let pieces = split_region(&kc, &Region::Whole, &vec![alpha.clone(); n as usize]).map_err(|_| short())?;
    let one = Space::interval(alpha.clone(), 1);
    if n == 1 {
        let root = synth_node(&kc, alpha, 1, &Region::Whole)?;
        return Operator::synthesized(one, k.clone(), kc, root);
    }
    let parts = pieces.iter().map(|r| synth_node(&kc, alpha, 1, r)).collect::<Result<Vec<_>>>()?;
    Operator::synthesized(Space::Sum(vec![one; n as usize]), k.clone(), kc, OpNode::Sum { parts })
}

/// The countable case: `C(K_{N,[1,w^alpha]})` into `C(K)`, glued with `h = 1`
/// over successive disjoint pieces meeting `K^(alpha)`.
pub fn synth_onepoint_embedding_countable(k: &Space, alpha: &Ordinal) -> Result<Operator> {
    let kc = prepare(k, &Region::Whole)?;
    if rel_cellularity(k, &ExtendedOrdinal::Ord(alpha.clone())) < Cardinal::Aleph0 {
        return Err(Error::InsufficientCellularity { order: alpha.to_string(), n: u64::MAX });
    }
    let site = Site::Pieces { region: Region::Whole };
    let glue = Glue::new(&kc, site, Demand::Uniform(alpha.clone()))?;
    let domain = Space::OnePoint {
        index: IndexSize::Aleph0,
        family: crate::space::Family::Uniform(Box::new(Space::interval(alpha.clone(), 1))),
    };
    Operator::synthesized(domain, k.clone(), kc, OpNode::Glue(Box::new(glue)))
}

/// A continuous map of `K` onto the Cantor set through a Cantor cylinder
/// inside `region`.
pub fn synth_cantor_surjection(k: &Space, region: &Region) -> Result<SurjectionMap> {
    let kc = prepare(k, region)?;
    let (path, prefix) = find_cantor(&kc, region)?.ok_or(Error::KernelEmpty)?;
    SurjectionMap::with_canonical(k.clone(), Space::Cantor, kc, SurjNode::Cantor { path, prefix })
}

/// The composition operator of [`synth_cantor_surjection`] cut off outside
/// `region`.
pub fn synth_cantor_embedding(k: &Space, region: &Region) -> Result<Operator> {
    let rho = synth_cantor_surjection(k, region)?;
    let kc = Arc::new(rho.canonical_domain().clone());
    let cutoff = Some(region.clone());
    Operator::assemble(Space::Cantor, k.clone(), kc, OpNode::Compose { map: Arc::new(rho), cutoff })
}

/// A continuous map of `K` onto the sum of `count` Cantor sets.
pub fn synth_cantor_sum_surjection(k: &Space, count: u64) -> Result<SurjectionMap> {
    if count == 0 {
        return Err(Error::Unsupported("count must be positive".into()));
    }
    let kc = prepare(k, &Region::Whole)?;
    let (path, prefix) = find_cantor(&kc, &Region::Whole)?.ok_or(Error::KernelEmpty)?;
    if count == 1 {
        return SurjectionMap::with_canonical(k.clone(), Space::Cantor, kc, SurjNode::Cantor { path, prefix });
    }
    let cylinder = |i: u64| {
        let mut p = prefix.clone();
        p.extend(std::iter::repeat_n(true, i as usize));
        if i + 1 < count {
            p.push(false);
        }
        p
    };
    let mut parts = Vec::new();
    for i in 0..count - 1 {
        let region = Region::at_path(&kc, &path, Region::Cantor(vec![cylinder(i)]))?;
        parts.push((region, SurjNode::Cantor { path: path.clone(), prefix: cylinder(i) }));
    }
    let rest = SurjNode::Cantor { path: path.clone(), prefix: cylinder(count - 1) };
    let codomain = Space::Sum(vec![Space::Cantor; count as usize]);
    SurjectionMap::with_canonical(k.clone(), codomain, kc, SurjNode::Sum { parts, rest: Box::new(rest) })
}


#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;
    use crate::funcalc::{probe_points, q, FunctionRep};

    fn sp(s: &str) -> Space {
        s.parse().unwrap()
    }

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn sample(lc: &Space) -> FunctionRep {
        // 1 at infinity, children 1..3 with values 2, -3, 5 at their top
        let FunctionRep::OnePoint { .. } = FunctionRep::constant(lc, &q(1)).unwrap() else { panic!() };
        let mut children = BTreeMap::new();
        for (n, v) in [(1u64, 2i64), (2, -3), (3, 5)] {
            children.insert(n, FunctionRep::constant(&lc.canonical_member(n).unwrap(), &q(v)).unwrap());
        }
        FunctionRep::OnePoint { tail: q(1), children }
    }

    #[test]
    fn identity_like_on_convergent_sequence() {
        let k = sp("I(1,1)");
        let t = synth_interval_embedding(&k, &o("1"), 1, &Region::Whole).unwrap();
        let f = sample(t.canonical_domain());
        assert_eq!(t.apply(&f).unwrap(), f.clone().normalized());
        assert_eq!(t.apply(&f).unwrap().norm(), f.norm());
    }

    #[test]
    fn supported_by_first_summand() {
        let k = sp("sum(I(2,1),fin(5))");
        let t = synth_interval_embedding(&k, &o("2"), 1, &Region::Whole).unwrap();
        let supp = t.support().unwrap();
        let first = Region::Sum(vec![Region::Whole, Region::Empty]);
        assert!(supp.subset_of(t.canonical_codomain(), &first).unwrap());
        let f = sample(t.canonical_domain());
        let tf = t.apply(&f).unwrap();
        assert_eq!(tf.norm(), f.norm());
        assert_eq!(tf.pos_part().norm(), f.pos_part().norm());
        for p in probe_points(t.canonical_codomain(), &tf).unwrap() {
            if !supp.contains(&p).unwrap() {
                assert_eq!(tf.eval(&p).unwrap(), q(0));
            }
        }
    }

    #[test]
    fn too_short() {
        assert!(matches!(
            synth_interval_embedding(&sp("I(1,1)"), &o("2"), 1, &Region::Whole),
            Err(Error::InsufficientDerivedSet { .. })
        ));
        assert!(matches!(
            synth_interval_embedding(&sp("sum(cantor,unit)"), &o("1"), 1, &Region::Whole),
            Err(Error::NotZeroDimensional(_))
        ));
    }

    #[test]
    fn constant_goes_to_indicator_of_h() {
        let k = sp("sum(fin(3),I(w,2))");
        let t = synth_interval_embedding(&k, &o("w"), 1, &Region::Whole).unwrap();
        let one = FunctionRep::constant(t.canonical_domain(), &q(1)).unwrap();
        let OpNode::Glue(g) = &t.root else { panic!("expected glue") };
        let h = crate::funcalc::indicator(t.canonical_codomain(), &g.h).unwrap();
        assert_eq!(t.apply(&one).unwrap(), h);
    }

    #[test]
    fn json_round_trip_and_overlap() {
        let k = sp("I(w+1,1)");
        let t = synth_interval_embedding(&k, &o("w+1"), 2, &Region::Whole);
        assert!(t.is_err());
        let k = sp("I(w+1,2)");
        let t = synth_interval_embedding(&k, &o("w+1"), 2, &Region::Whole).unwrap();
        let j = t.to_json();
        let back = Operator::from_json(&j).unwrap();
        assert_eq!(back.to_json(), j);
        let k = sp("I(2,1)");
        let t = synth_interval_embedding(&k, &o("2"), 1, &Region::Whole).unwrap();
        let mut j = t.to_json();
        let r1 = j["root"]["glue"]["parts"]["1"]["region"].clone();
        j["root"]["glue"]["parts"]["2"]["region"] = r1.clone();
        assert!(Operator::from_json(&j).is_err());
    }

    #[test]
    fn surjection_defaults_to_top() {
        let k = sp("sum(I(2,1),fin(2))");
        let rho = synth_surjection(&k, &o("1"), 1, &Region::Whole).unwrap();
        // the finite summand is outside every part
        assert_eq!(rho.eval(&"b1/l0".parse().unwrap()).unwrap().to_string(), "inf");
        let k = sp("I(1,1)");
        let rho = synth_surjection(&k, &o("1"), 1, &Region::Whole).unwrap();
        for s in ["inf", "c1/l0", "c4/l0"] {
            assert_eq!(rho.eval(&s.parse().unwrap()).unwrap().to_string(), s);
        }
        let t = composition_operator(rho).unwrap();
        let f = sample(t.canonical_domain());
        assert_eq!(t.apply(&f).unwrap(), f.normalized());
    }

    #[test]
    fn onepoint_embeddings() {
        let k = sp("sum(I(2,1),I(2,1),fin(4))");
        assert!(synth_onepoint_embedding(&k, 2, &o("2")).is_ok());
        assert!(matches!(
            synth_onepoint_embedding(&k, 3, &o("2")),
            Err(Error::InsufficientCellularity { .. })
        ));
        let t = synth_onepoint_embedding_countable(&sp("I(3,1)"), &o("1")).unwrap();
        let f = sample(t.canonical_domain());
        assert_eq!(t.apply(&f).unwrap().norm(), f.norm());
    }

    #[test]
    fn cantor_witnesses() {
        let k = sp("sum(cantor,I(3,1))");
        let rho = synth_cantor_surjection(&k, &Region::Whole).unwrap();
        assert_eq!(rho.eval(&"b0/x0110".parse().unwrap()).unwrap().to_string(), "x0110");
        let t = synth_cantor_embedding(&k, &Region::Whole).unwrap();
        let f = FunctionRep::cantor(2, &[q(1), q(-4), q(2), q(3)]);
        assert_eq!(t.apply(&f).unwrap().norm(), q(4));
        assert!(matches!(synth_cantor_surjection(&sp("I(3,1)"), &Region::Whole), Err(Error::KernelEmpty)));
        let rho = synth_cantor_sum_surjection(&k, 3).unwrap();
        assert_eq!(rho.eval(&"b0/x110".parse().unwrap()).unwrap().to_string(), "b2/x0");
    }
}
