//! Points of representable spaces, addressed by paths through the term.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::canonical::{canonical_to_interval, interval_to_canonical, ramp_locate, ramp_offset};
use super::{derived, height, Family, Space};
use crate::error::{Error, Result};
use crate::ordinal::{ExtendedOrdinal, Ordinal};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    /// Branch of a sum, 0-based.
    SumBranch(u64),
    /// Copy of a one-point compactification, 1-based.
    CopyIndex(u64),
    AtInfinity,
    /// Point of a finite discrete space, 0-based.
    LeafIndex(u64),
    OrdinalPoint(Ordinal),
    /// Cylinder of the Cantor set; bit `i` is coordinate `i`.
    CantorPrefix(Vec<bool>),
    /// Coordinate in `[0,1]`.
    UnitCoord(BigRational),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point(pub Vec<Step>);

impl Point {
    pub fn new(steps: Vec<Step>) -> Self {
        Point(steps)
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn prepend(mut self, step: Step) -> Self {
        self.0.insert(0, step);
        self
    }
}

fn invalid(s: &Space, steps: &[Step]) -> Error {
    Error::InvalidPoint(format!("{} is not a point of {s}", Point(steps.to_vec())))
}

fn ordinal_in_interval(alpha: &Ordinal, m: u64, o: &Ordinal) -> bool {
    !o.is_zero() && o <= &Ordinal::monomial(alpha.clone(), m)
}

/// Checks that the path addresses a point of `s`.
pub fn validate(s: &Space, steps: &[Step]) -> Result<()> {
    let ok = match (s, steps) {
        (Space::Fin(n), [Step::LeafIndex(i)]) => i < n,
        (Space::Interval(a, m), [Step::OrdinalPoint(o)]) => ordinal_in_interval(a, *m, o),
        (Space::Interval(a, m), path) if !path.is_empty() => {
            return canonical_to_interval(a, *m, path).map(|_| ());
        }
        (Space::Cantor, [Step::CantorPrefix(_)]) => true,
        (Space::Unit, [Step::UnitCoord(q)]) => !q.is_negative() && q <= &BigRational::one(),
        (Space::Sum(parts), [Step::SumBranch(i), rest @ ..]) => {
            let part = parts.get(*i as usize).ok_or_else(|| invalid(s, steps))?;
            return validate(part, rest);
        }
        (Space::OnePoint { .. }, [Step::AtInfinity]) => true,
        (Space::OnePoint { family, .. }, [Step::CopyIndex(n), rest @ ..]) if *n >= 1 => {
            return match family {
                Family::Uniform(l) => validate(l, rest),
                Family::Ramp(_) => validate(&s.member(*n)?, rest),
            };
        }
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(invalid(s, steps))
    }
}

/// Membership in `S^(beta)` by recursion on the path, using only heights and
/// divisibility, never the closed form of [`derived`].
pub fn in_derived(s: &Space, p: &Point, beta: &Ordinal) -> Result<bool> {
    validate(s, p.steps())?;
    Ok(member_rank(s, p.steps(), beta))
}

fn member_rank(s: &Space, steps: &[Step], beta: &Ordinal) -> bool {
    match (s, steps) {
        (Space::Fin(_), _) => beta.is_zero(),
        (Space::Interval(_, _), [Step::OrdinalPoint(o)]) => o.divisible_by_omega_pow(beta),
        (Space::Interval(a, m), path) => {
            let o = canonical_to_interval(a, *m, path).expect("validated");
            o.divisible_by_omega_pow(beta)
        }
        (Space::Cantor | Space::Unit, _) => true,
        (Space::Sum(parts), [Step::SumBranch(i), rest @ ..]) => member_rank(&parts[*i as usize], rest, beta),
        (Space::OnePoint { family: Family::Uniform(l), .. }, [Step::AtInfinity]) => {
            ExtendedOrdinal::Ord(beta.clone()) <= height(l)
        }
        (Space::OnePoint { family: Family::Ramp(a), .. }, [Step::AtInfinity]) => beta <= a,
        (Space::OnePoint { family: Family::Uniform(l), .. }, [Step::CopyIndex(_), rest @ ..]) => {
            member_rank(l, rest, beta)
        }
        (Space::OnePoint { .. }, [Step::CopyIndex(n), rest @ ..]) => {
            let member = s.member(*n).expect("validated");
            member_rank(&member, rest, beta)
        }
        _ => false,
    }
}

pub fn isolated(s: &Space, p: &Point) -> Result<bool> {
    Ok(!in_derived(s, p, &Ordinal::one())?)
}

/// The image of `p` in the closed form `derived(s, beta)`, or `None` when `p`
/// is not in the derivative.
pub fn derived_point(s: &Space, beta: &Ordinal, p: &Point) -> Result<Option<Point>> {
    validate(s, p.steps())?;
    Ok(derived_steps(s, beta, p.steps()).map(Point))
}

fn derived_steps(s: &Space, beta: &Ordinal, steps: &[Step]) -> Option<Vec<Step>> {
    if beta.is_zero() {
        return Some(steps.to_vec());
    }
    match (s, steps) {
        (Space::Interval(a, m), path) => {
            let o = match path {
                [Step::OrdinalPoint(o)] => o.clone(),
                _ => canonical_to_interval(a, *m, path).ok()?,
            };
            let d = o.div_omega_pow(beta)?;
            let g = beta.left_subtract(a).ok()?;
            if g.is_zero() {
                Some(vec![Step::LeafIndex(d.as_nat()? - 1)])
            } else {
                Some(vec![Step::OrdinalPoint(d)])
            }
        }
        (Space::Cantor | Space::Unit, _) => Some(steps.to_vec()),
        (Space::Sum(parts), [Step::SumBranch(i), rest @ ..]) => {
            let inner = derived_steps(&parts[*i as usize], beta, rest)?;
            let alive: Vec<bool> = parts.iter().map(|p| !derived(p, beta).is_empty()).collect();
            if alive.iter().filter(|a| **a).count() == 1 {
                Some(inner)
            } else {
                let j = alive[..*i as usize].iter().filter(|a| **a).count() as u64;
                Some(std::iter::once(Step::SumBranch(j)).chain(inner).collect())
            }
        }
        (Space::OnePoint { family: Family::Uniform(l), .. }, [Step::AtInfinity]) => {
            let lb = derived(l, beta);
            if !lb.is_empty() {
                Some(vec![Step::AtInfinity])
            } else if ExtendedOrdinal::Ord(beta.clone()) <= height(l) {
                Some(vec![Step::LeafIndex(0)])
            } else {
                None
            }
        }
        (Space::OnePoint { family: Family::Uniform(l), .. }, [Step::CopyIndex(n), rest @ ..]) => {
            let inner = derived_steps(l, beta, rest)?;
            Some(std::iter::once(Step::CopyIndex(*n)).chain(inner).collect())
        }
        (Space::OnePoint { family: Family::Ramp(a), .. }, path) => {
            let o = ramp_to_ordinal(a, path).ok()?;
            derived_steps(&Space::Interval(a.clone(), 1), beta, &[Step::OrdinalPoint(o)])
        }
        _ => None,
    }
}

/// Position in `[1, w^alpha]` of a point of `opramp(alpha)`.
pub(crate) fn ramp_to_ordinal(alpha: &Ordinal, path: &[Step]) -> Result<Ordinal> {
    match path.split_first() {
        Some((Step::AtInfinity, [])) => Ok(Ordinal::omega_pow(alpha)),
        Some((Step::CopyIndex(n), rest)) => {
            let b = alpha.fund_seq(*n)?;
            let inner = match rest {
                [Step::OrdinalPoint(o)] => o.clone(),
                _ => canonical_to_interval(&b, 1, rest)?,
            };
            Ok(ramp_offset(alpha, *n)?.add(&inner))
        }
        _ => Err(Error::InvalidPoint(format!("{} is not a point of opramp({alpha})", Point(path.to_vec())))),
    }
}

/// Converts a point of `s` into the matching point of `s.canonical_tree()`.
pub fn to_canonical(s: &Space, p: &Point) -> Result<Point> {
    validate(s, p.steps())?;
    canon_steps(s, p.steps()).map(Point)
}

fn canon_steps(s: &Space, steps: &[Step]) -> Result<Vec<Step>> {
    match (s, steps) {
        (Space::Interval(a, m), [Step::OrdinalPoint(o)]) => interval_to_canonical(a, *m, o),
        (Space::Sum(parts), [Step::SumBranch(i), rest @ ..]) => {
            Ok(std::iter::once(Step::SumBranch(*i)).chain(canon_steps(&parts[*i as usize], rest)?).collect())
        }
        (Space::OnePoint { .. }, [Step::CopyIndex(n), rest @ ..]) => {
            let member = s.member(*n)?;
            Ok(std::iter::once(Step::CopyIndex(*n)).chain(canon_steps(&member, rest)?).collect())
        }
        _ => Ok(steps.to_vec()),
    }
}

/// Inverse of [`to_canonical`]: intervals get ordinal points back.
pub fn from_canonical(s: &Space, q: &Point) -> Result<Point> {
    uncanon_steps(s, q.steps()).map(Point)
}

fn uncanon_steps(s: &Space, steps: &[Step]) -> Result<Vec<Step>> {
    match (s, steps) {
        (Space::Interval(a, m), path) => match path {
            [Step::OrdinalPoint(_)] => Ok(path.to_vec()),
            _ => Ok(vec![Step::OrdinalPoint(canonical_to_interval(a, *m, path)?)]),
        },
        (Space::Sum(parts), [Step::SumBranch(i), rest @ ..]) => {
            let part = parts.get(*i as usize).ok_or_else(|| invalid(s, steps))?;
            Ok(std::iter::once(Step::SumBranch(*i)).chain(uncanon_steps(part, rest)?).collect())
        }
        (Space::OnePoint { .. }, [Step::CopyIndex(n), rest @ ..]) => {
            let member = s.member(*n)?;
            Ok(std::iter::once(Step::CopyIndex(*n)).chain(uncanon_steps(&member, rest)?).collect())
        }
        _ => {
            validate(s, steps)?;
            Ok(steps.to_vec())
        }
    }
}

/// The ramp copy holding an ordinal point of `[1, w^alpha]`, as a path.
pub fn ramp_point(alpha: &Ordinal, o: &Ordinal) -> Result<Point> {
    if o == &Ordinal::omega_pow(alpha) {
        return Ok(Point(vec![Step::AtInfinity]));
    }
    let (n, inner) = ramp_locate(alpha, o)?;
    Ok(Point(vec![Step::CopyIndex(n), Step::OrdinalPoint(inner)]))
}

fn fmt_bits(bits: &[bool]) -> String {
    bits.iter().map(|b| if *b { '1' } else { '0' }).collect()
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::SumBranch(i) => write!(f, "b{i}"),
            Step::CopyIndex(n) => write!(f, "c{n}"),
            Step::AtInfinity => write!(f, "inf"),
            Step::LeafIndex(i) => write!(f, "l{i}"),
            Step::OrdinalPoint(o) => write!(f, "o({o})"),
            Step::CantorPrefix(bits) => write!(f, "x{}", fmt_bits(bits)),
            Step::UnitCoord(q) => write!(f, "u({q})"),
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "/")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::cli::parse::parse_point(s)
    }
}
