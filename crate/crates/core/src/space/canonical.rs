//! Rewriting ordinal intervals into trees of one-point compactifications, and
//! the point maps between the two forms.

use super::{Family, IndexSize, Space, Step};
use crate::error::{Error, Result};
use crate::ordinal::{Kind, Ordinal};

impl Space {
    /// Replaces every interval by nested one-point compactifications.
    pub fn canonical_tree(&self) -> Result<Space> {
        match self {
            Space::Empty | Space::Fin(_) | Space::Cantor | Space::Unit => Ok(self.clone()),
            Space::Interval(a, m) => Ok(canonical_interval(a, *m)),
            Space::Sum(parts) => Ok(Space::Sum(parts.iter().map(Space::canonical_tree).collect::<Result<_>>()?)),
            Space::OnePoint { index: IndexSize::Aleph0, family } => Ok(Space::OnePoint {
                index: IndexSize::Aleph0,
                family: match family {
                    Family::Uniform(l) => Family::Uniform(Box::new(l.canonical_tree()?)),
                    Family::Ramp(a) => Family::Ramp(a.clone()),
                },
            }),
            _ => Err(Error::NotConstructive(self.to_string())),
        }
    }

    /// Copy `n` of a one-point node in canonical form.
    pub fn canonical_member(&self, n: u64) -> Result<Space> {
        match self {
            Space::OnePoint { family: Family::Uniform(l), .. } => Ok((**l).clone()),
            Space::OnePoint { family: Family::Ramp(a), .. } => Ok(canonical_interval(&a.fund_seq(n)?, 1)),
            _ => Err(Error::SpaceMismatch(format!("{self} has no copies"))),
        }
    }
}

pub(crate) fn canonical_interval(alpha: &Ordinal, m: u64) -> Space {
    if alpha.is_zero() {
        return Space::Fin(m);
    }
    if m > 1 {
        return Space::Sum((0..m).map(|_| canonical_interval(alpha, 1)).collect());
    }
    match alpha.classify() {
        Kind::Successor(b) => Space::op(canonical_interval(&b, 1)),
        _ => Space::OnePoint { index: IndexSize::Aleph0, family: Family::Ramp(alpha.clone()) },
    }
}

/// Splits `o` in `[1, w^b * k]` as `w^b * (n-1) + inner` with `1 <= inner <= w^b`.
fn split_block(b: &Ordinal, o: &Ordinal) -> (u64, Ordinal) {
    match o.terms().first() {
        Some(t) if &t.exp == b => {
            let rest = Ordinal::make(o.terms()[1..].iter().map(|t| (t.exp.clone(), t.coeff)).collect())
                .expect("tail of a normal form");
            if rest.is_zero() {
                (t.coeff, Ordinal::omega_pow(b))
            } else {
                (t.coeff + 1, rest)
            }
        }
        _ => (1, o.clone()),
    }
}

/// Path in `canonical_tree(I(alpha, m))` of the ordinal point `o`.
pub fn interval_to_canonical(alpha: &Ordinal, m: u64, o: &Ordinal) -> Result<Vec<Step>> {
    let top = Ordinal::monomial(alpha.clone(), m.max(1));
    if o.is_zero() || o > &top {
        return Err(Error::InvalidPoint(format!("o({o}) outside [1,{top}]")));
    }
    if alpha.is_zero() {
        return Ok(vec![Step::LeafIndex(o.as_nat().expect("finite") - 1)]);
    }
    if m > 1 {
        let (i, inner) = split_block(alpha, o);
        let mut path = vec![Step::SumBranch(i - 1)];
        path.extend(interval_to_canonical(alpha, 1, &inner)?);
        return Ok(path);
    }
    if o == &top {
        return Ok(vec![Step::AtInfinity]);
    }
    match alpha.classify() {
        Kind::Successor(b) => {
            let (n, inner) = split_block(&b, o);
            let mut path = vec![Step::CopyIndex(n)];
            path.extend(interval_to_canonical(&b, 1, &inner)?);
            Ok(path)
        }
        _ => {
            let (n, inner) = ramp_locate(alpha, o)?;
            let mut path = vec![Step::CopyIndex(n)];
            path.extend(interval_to_canonical(&alpha.fund_seq(n)?, 1, &inner)?);
            Ok(path)
        }
    }
}

/// For `o < w^alpha` with `alpha` a limit: the ramp copy containing `o` and
/// the position inside `[1, w^(alpha[n])]`. Copy 1 is `[1, w^(alpha[1])]` and
/// copy `n > 1` is the segment above `w^(alpha[n-1])`.
pub(crate) fn ramp_locate(alpha: &Ordinal, o: &Ordinal) -> Result<(u64, Ordinal)> {
    let mut prev: Option<Ordinal> = None;
    for n in 1.. {
        let top = Ordinal::omega_pow(&alpha.fund_seq(n)?);
        if o <= &top {
            let inner = match prev {
                None => o.clone(),
                Some(p) => p.left_subtract(o)?,
            };
            return Ok((n, inner));
        }
        prev = Some(top);
    }
    unreachable!()
}

/// Offset of ramp copy `n` inside `[1, w^alpha]`.
pub(crate) fn ramp_offset(alpha: &Ordinal, n: u64) -> Result<Ordinal> {
    if n <= 1 {
        Ok(Ordinal::zero())
    } else {
        Ok(Ordinal::omega_pow(&alpha.fund_seq(n - 1)?))
    }
}

/// Inverse of [`interval_to_canonical`].
pub fn canonical_to_interval(alpha: &Ordinal, m: u64, path: &[Step]) -> Result<Ordinal> {
    let bad = || Error::InvalidPoint(format!("path does not fit I({alpha},{m})"));
    if alpha.is_zero() {
        return match path {
            [Step::LeafIndex(i)] if *i < m => Ok(Ordinal::nat(i + 1)),
            _ => Err(bad()),
        };
    }
    if m > 1 {
        return match path.split_first() {
            Some((Step::SumBranch(i), rest)) if *i < m => {
                let inner = canonical_to_interval(alpha, 1, rest)?;
                let base = if *i == 0 { Ordinal::zero() } else { Ordinal::monomial(alpha.clone(), *i) };
                Ok(base.add(&inner))
            }
            _ => Err(bad()),
        };
    }
    match path.split_first() {
        Some((Step::AtInfinity, [])) => Ok(Ordinal::omega_pow(alpha)),
        Some((Step::CopyIndex(n), rest)) if *n >= 1 => match alpha.classify() {
            Kind::Successor(b) => {
                let inner = canonical_to_interval(&b, 1, rest)?;
                let base = if *n == 1 { Ordinal::zero() } else { Ordinal::monomial(b, n - 1) };
                Ok(base.add(&inner))
            }
            _ => {
                let inner = canonical_to_interval(&alpha.fund_seq(*n)?, 1, rest)?;
                Ok(ramp_offset(alpha, *n)?.add(&inner))
            }
        },
        _ => Err(bad()),
    }
}
