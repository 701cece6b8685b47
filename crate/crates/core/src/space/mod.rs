//! Compact spaces written as grammar terms, with their Cantor-Bendixson
//! invariants.

mod atoms;
mod canonical;
mod point;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::cardinal::{card_max, card_mul, card_sum, Cardinal};
use crate::error::{Error, Result};
use crate::ordinal::{ExtendedOrdinal, Ordinal};

pub use atoms::{AtomKind, CardinalProfile, ProfileEntry, SymbolicAtom};
pub use canonical::{canonical_to_interval, interval_to_canonical};
pub use point::{
    derived_point, from_canonical, in_derived, isolated, ramp_point, to_canonical, validate, Point, Step,
};

/// Size of the index set of a one-point compactification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IndexSize {
    Aleph0,
    Aleph1,
    Continuum,
}

impl IndexSize {
    pub fn cardinal(self) -> Cardinal {
        match self {
            IndexSize::Aleph0 => Cardinal::Aleph0,
            IndexSize::Aleph1 => Cardinal::Aleph1,
            IndexSize::Continuum => Cardinal::Continuum,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// Every copy is the same space.
    Uniform(Box<Space>),
    /// Copy `n` is `[1, w^(a[n])]` for the canonical sequence of the limit `a`.
    Ramp(Ordinal),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    Empty,
    Fin(u64),
    /// `[1, w^a * m]`.
    Interval(Ordinal, u64),
    Cantor,
    Unit,
    Sum(Vec<Space>),
    OnePoint { index: IndexSize, family: Family },
    Atom(SymbolicAtom),
}

impl Space {
    pub fn interval(alpha: Ordinal, m: u64) -> Space {
        Space::Interval(alpha, m)
    }

    pub fn op(l: Space) -> Space {
        Space::OnePoint { index: IndexSize::Aleph0, family: Family::Uniform(Box::new(l)) }
    }

    pub fn ramp(alpha: Ordinal) -> Result<Space> {
        if !alpha.is_limit() {
            return Err(Error::NotALimit(alpha.to_string()));
        }
        Ok(Space::OnePoint { index: IndexSize::Aleph0, family: Family::Ramp(alpha) })
    }

    pub fn atom(kind: AtomKind) -> Space {
        Space::Atom(SymbolicAtom::new(kind))
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Space::Empty)
    }

    /// Sum of the nonempty parts, collapsing zero or one survivors.
    pub fn sum_of(parts: Vec<Space>) -> Space {
        let mut parts: Vec<Space> = parts.into_iter().filter(|p| !p.is_empty()).collect();
        match parts.len() {
            0 => Space::Empty,
            1 => parts.pop().expect("one part"),
            _ => Space::Sum(parts),
        }
    }

    pub fn metrizable(&self) -> bool {
        match self {
            Space::Sum(parts) => parts.iter().all(Space::metrizable),
            Space::OnePoint { index, family } => {
                *index == IndexSize::Aleph0
                    && match family {
                        Family::Uniform(l) => l.metrizable(),
                        Family::Ramp(_) => true,
                    }
            }
            Space::Atom(_) => false,
            _ => true,
        }
    }

    pub fn zero_dimensional(&self) -> bool {
        match self {
            Space::Unit => false,
            Space::Sum(parts) => parts.iter().all(Space::zero_dimensional),
            Space::OnePoint { family: Family::Uniform(l), .. } => l.zero_dimensional(),
            Space::Atom(a) => a.kind.zero_dimensional(),
            _ => true,
        }
    }

    pub fn constructive(&self) -> bool {
        match self {
            Space::Sum(parts) => parts.iter().all(Space::constructive),
            Space::OnePoint { index, family } => {
                *index == IndexSize::Aleph0
                    && match family {
                        Family::Uniform(l) => l.constructive(),
                        Family::Ramp(_) => true,
                    }
            }
            Space::Atom(_) => false,
            _ => true,
        }
    }

    pub fn scattered(&self) -> bool {
        !self.height().is_infinite()
    }

    pub fn countable(&self) -> bool {
        matches!(card_of(self), Cardinal::Finite(_) | Cardinal::Aleph0)
    }

    pub fn height(&self) -> ExtendedOrdinal {
        height(self)
    }

    /// Member of a one-point compactification at copy `n` (1-based), in the
    /// grammar form: ramp copies are ordinal intervals.
    pub fn member(&self, n: u64) -> Result<Space> {
        match self {
            Space::OnePoint { family: Family::Uniform(l), .. } => Ok((**l).clone()),
            Space::OnePoint { family: Family::Ramp(a), .. } => Ok(Space::Interval(a.fund_seq(n)?, 1)),
            _ => Err(Error::SpaceMismatch(format!("{self} has no copies"))),
        }
    }
}

fn ext_succ(a: &ExtendedOrdinal) -> ExtendedOrdinal {
    a.succ()
}

pub fn height(s: &Space) -> ExtendedOrdinal {
    match s {
        Space::Empty => ExtendedOrdinal::Ord(Ordinal::zero()),
        Space::Fin(_) => ExtendedOrdinal::Ord(Ordinal::one()),
        Space::Interval(a, _) => ExtendedOrdinal::Ord(a.succ()),
        Space::Cantor | Space::Unit => ExtendedOrdinal::Infinity,
        Space::Sum(parts) => parts.iter().map(height).max().unwrap_or(ExtendedOrdinal::Ord(Ordinal::zero())),
        Space::OnePoint { family: Family::Uniform(l), .. } => ext_succ(&height(l)),
        Space::OnePoint { family: Family::Ramp(a), .. } => ExtendedOrdinal::Ord(a.succ()),
        Space::Atom(a) => a.height(),
    }
}

/// `S^(beta)` in closed form.
pub fn derived(s: &Space, beta: &Ordinal) -> Space {
    if beta.is_zero() {
        return s.clone();
    }
    match s {
        Space::Empty | Space::Fin(_) => Space::Empty,
        Space::Interval(a, m) => match beta.left_subtract(a) {
            Ok(g) if g.is_zero() => Space::Fin(*m),
            Ok(g) => Space::Interval(g, *m),
            Err(_) => Space::Empty,
        },
        Space::Cantor | Space::Unit => s.clone(),
        Space::Sum(parts) => Space::sum_of(parts.iter().map(|p| derived(p, beta)).collect()),
        Space::OnePoint { index, family: Family::Uniform(l) } => {
            let lb = derived(l, beta);
            if !lb.is_empty() {
                Space::OnePoint { index: *index, family: Family::Uniform(Box::new(lb)) }
            } else if ExtendedOrdinal::Ord(beta.clone()) <= height(l) {
                Space::Fin(1)
            } else {
                Space::Empty
            }
        }
        Space::OnePoint { family: Family::Ramp(a), .. } => derived(&Space::Interval(a.clone(), 1), beta),
        Space::Atom(at) => {
            let shift = at.shift.add(beta);
            let shifted = SymbolicAtom { kind: at.kind, shift };
            if shifted.at(&ExtendedOrdinal::Ord(Ordinal::zero())).0.is_zero() {
                Space::Empty
            } else {
                Space::Atom(shifted)
            }
        }
    }
}

/// `S^(inf)`: the largest perfect subset.
pub fn perfect_kernel(s: &Space) -> Space {
    match s {
        Space::Empty | Space::Fin(_) | Space::Interval(..) => Space::Empty,
        Space::Cantor | Space::Unit => s.clone(),
        Space::Sum(parts) => Space::sum_of(parts.iter().map(perfect_kernel).collect()),
        Space::OnePoint { index, family: Family::Uniform(l) } => {
            let k = perfect_kernel(l);
            if k.is_empty() {
                Space::Empty
            } else {
                Space::OnePoint { index: *index, family: Family::Uniform(Box::new(k)) }
            }
        }
        Space::OnePoint { family: Family::Ramp(_), .. } => Space::Empty,
        Space::Atom(a) => {
            if a.kind.scattered() {
                Space::Empty
            } else {
                s.clone()
            }
        }
    }
}

/// The derivative at an extended order; uncountable orders reach the kernel of
/// every constructive space.
pub fn derived_ext(s: &Space, order: &ExtendedOrdinal) -> Space {
    match (s, order) {
        (_, ExtendedOrdinal::Ord(b)) => derived(s, b),
        (_, ExtendedOrdinal::Infinity) => perfect_kernel(s),
        (Space::Atom(a), _) => {
            if a.at(order).0.is_zero() {
                Space::Empty
            } else {
                s.clone()
            }
        }
        (Space::Sum(parts), _) => Space::sum_of(parts.iter().map(|p| derived_ext(p, order)).collect()),
        (Space::OnePoint { index, family: Family::Uniform(l) }, _) => {
            let lb = derived_ext(l, order);
            if !lb.is_empty() {
                Space::OnePoint { index: *index, family: Family::Uniform(Box::new(lb)) }
            } else if order <= &height(l) {
                Space::Fin(1)
            } else {
                Space::Empty
            }
        }
        _ => perfect_kernel(s),
    }
}

pub fn card_of(s: &Space) -> Cardinal {
    match s {
        Space::Empty => Cardinal::ZERO,
        Space::Fin(n) => Cardinal::Finite(*n),
        Space::Interval(a, m) => {
            if a.is_zero() {
                Cardinal::Finite(*m)
            } else {
                Cardinal::Aleph0
            }
        }
        Space::Cantor | Space::Unit => Cardinal::Continuum,
        Space::Sum(parts) => parts.iter().map(card_of).fold(Cardinal::ZERO, card_sum),
        Space::OnePoint { index, family: Family::Uniform(l) } => {
            card_sum(card_mul(index.cardinal(), card_of(l)), Cardinal::Finite(1))
        }
        Space::OnePoint { family: Family::Ramp(_), .. } => Cardinal::Aleph0,
        Space::Atom(a) => a.at(&ExtendedOrdinal::Ord(Ordinal::zero())).0,
    }
}

pub fn derived_card(s: &Space, order: &ExtendedOrdinal) -> Cardinal {
    match (s, order) {
        (_, ExtendedOrdinal::Ord(b)) => card_of(&derived(s, b)),
        (Space::Atom(a), _) => a.at(order).0,
        (Space::Sum(parts), _) => parts.iter().map(|p| derived_card(p, order)).fold(Cardinal::ZERO, card_sum),
        (Space::OnePoint { index, family: Family::Uniform(l) }, _) => {
            let top = if order <= &height(l) { Cardinal::Finite(1) } else { Cardinal::ZERO };
            card_sum(card_mul(index.cardinal(), derived_card(l, order)), top)
        }
        _ => card_of(&perfect_kernel(s)),
    }
}

/// `|S^(ht(S)-1)|` for scattered `S`.
pub fn top_card(s: &Space) -> Result<Cardinal> {
    match height(s) {
        ExtendedOrdinal::Infinity => Err(Error::NotScattered(s.to_string())),
        h => match h.pred() {
            Some(p) => Ok(derived_card(s, &p)),
            None if s.is_empty() => Ok(Cardinal::ZERO),
            None => Err(Error::NotScattered(s.to_string())),
        },
    }
}

/// `(a, m)` with `S` homeomorphic to `[1, w^a * m]`.
pub fn ms_normal_form(s: &Space) -> Result<(Ordinal, u64)> {
    let bad = || Error::NotCountableCompact(s.to_string());
    if s.is_empty() || !s.constructive() {
        return Err(bad());
    }
    let h = match height(s) {
        ExtendedOrdinal::Ord(h) => h,
        _ => return Err(bad()),
    };
    let alpha = h.pred().ok_or_else(bad)?;
    let m = top_card(s)?.finite().ok_or_else(bad)?;
    Ok((alpha, m))
}

/// `c(S^(order), S)`.
pub fn rel_cellularity(s: &Space, order: &ExtendedOrdinal) -> Cardinal {
    match s {
        Space::Empty => Cardinal::ZERO,
        Space::Fin(n) => match order.as_ordinal() {
            Some(o) if o.is_zero() => Cardinal::Finite(*n),
            _ => Cardinal::ZERO,
        },
        Space::Interval(a, m) => match order.as_ordinal() {
            Some(o) if o < a => Cardinal::Aleph0,
            Some(o) if o == a => Cardinal::Finite(*m),
            _ => Cardinal::ZERO,
        },
        Space::Cantor | Space::Unit => Cardinal::Aleph0,
        Space::Sum(parts) => parts.iter().map(|p| rel_cellularity(p, order)).fold(Cardinal::ZERO, card_sum),
        Space::OnePoint { index, family: Family::Uniform(l) } => {
            if derived_ext(s, order).is_empty() {
                Cardinal::ZERO
            } else if derived_ext(l, order).is_empty() {
                Cardinal::Finite(1)
            } else {
                card_max(index.cardinal(), rel_cellularity(l, order))
            }
        }
        Space::OnePoint { family: Family::Ramp(a), .. } => rel_cellularity(&Space::Interval(a.clone(), 1), order),
        Space::Atom(at) => at.at(order).1,
    }
}

/// Piecewise-constant cardinal profile of any space: entries at every order
/// where `|S^(b)|` or `c(S^(b), S)` may change.
pub fn profile(s: &Space) -> CardinalProfile {
    let mut points = BTreeSet::new();
    breakpoints(s, &mut points);
    points.insert(ExtendedOrdinal::Ord(Ordinal::zero()));
    let entries = points
        .into_iter()
        .map(|start| ProfileEntry {
            card: derived_card(s, &start),
            cellularity: rel_cellularity(s, &start),
            start,
        })
        .collect();
    let inf = ExtendedOrdinal::Infinity;
    CardinalProfile { entries, kernel_card: derived_card(s, &inf), kernel_cellularity: rel_cellularity(s, &inf) }
}

fn breakpoints(s: &Space, out: &mut BTreeSet<ExtendedOrdinal>) {
    match s {
        Space::Interval(a, _) | Space::OnePoint { family: Family::Ramp(a), .. } => {
            out.insert(ExtendedOrdinal::Ord(a.clone()));
            out.insert(ExtendedOrdinal::Ord(a.succ()));
        }
        Space::Fin(_) => {
            out.insert(ExtendedOrdinal::Ord(Ordinal::one()));
        }
        Space::Sum(parts) => parts.iter().for_each(|p| breakpoints(p, out)),
        Space::OnePoint { family: Family::Uniform(l), .. } => {
            breakpoints(l, out);
            let h = height(l);
            if !h.is_infinite() {
                out.insert(h.succ());
                out.insert(h);
            }
        }
        Space::Atom(a) => out.extend(a.profile().breakpoints()),
        Space::Empty | Space::Cantor | Space::Unit => {}
    }
}

impl fmt::Display for IndexSize {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IndexSize::Aleph0 => "w",
            IndexSize::Aleph1 => "aleph1",
            IndexSize::Continuum => "c",
        })
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Empty => write!(f, "empty"),
            Space::Fin(n) => write!(f, "fin({n})"),
            Space::Interval(a, m) => write!(f, "I({a},{m})"),
            Space::Cantor => write!(f, "cantor"),
            Space::Unit => write!(f, "unit"),
            Space::Sum(parts) => {
                write!(f, "sum(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
            Space::OnePoint { index, family: Family::Uniform(l) } => write!(f, "op({index},{l})"),
            Space::OnePoint { family: Family::Ramp(a), .. } => write!(f, "opramp({a})"),
            Space::Atom(a) => write!(f, "{a}"),
        }
    }
}

impl FromStr for Space {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::cli::parse::parse_space(s)
    }
}

#[cfg(test)]
mod tests;
