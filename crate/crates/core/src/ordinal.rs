//! Ordinals below epsilon-zero in Cantor normal form.
//!
//! An [`Ordinal`] is a finite list of terms `w^(e)*c` with strictly decreasing
//! exponents, each exponent itself an ordinal in normal form. Only the
//! operations the rest of the crate needs are exposed: addition, left
//! subtraction, multiplication by naturals, `w^a`, successor, classification
//! and canonical fundamental sequences.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub exp: Ordinal,
    pub coeff: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Ordinal {
    terms: Vec<Term>,
}

/// Zero, successor or limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Kind {
    Zero,
    Successor(Ordinal),
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Ordinal::nat(1)
    }

    pub fn nat(n: u64) -> Self {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![Term { exp: Ordinal::zero(), coeff: n }] }
        }
    }

    pub fn omega() -> Self {
        Ordinal::omega_pow(&Ordinal::one())
    }

    /// `w^a`.
    pub fn omega_pow(a: &Ordinal) -> Self {
        Ordinal { terms: vec![Term { exp: a.clone(), coeff: 1 }] }
    }

    /// `w^e * c` for `c >= 1`.
    pub fn monomial(e: Ordinal, c: u64) -> Self {
        assert!(c > 0, "monomial coefficient must be positive");
        Ordinal { terms: vec![Term { exp: e, coeff: c }] }
    }

    /// Sums the given `(exponent, coefficient)` terms left to right.
    pub fn make(terms: Vec<(Ordinal, u64)>) -> Result<Self> {
        let mut acc = Ordinal::zero();
        for (e, c) in terms {
            if c == 0 {
                return Err(Error::ZeroCoefficient);
            }
            acc = acc.add(&Ordinal::monomial(e, c));
        }
        Ok(acc)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.terms.iter().all(|t| t.exp.is_zero())
    }

    /// The natural number value, when finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [t] if t.exp.is_zero() => Some(t.coeff),
            _ => None,
        }
    }

    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|t| &t.exp)
    }

    pub fn add(&self, other: &Ordinal) -> Ordinal {
        let Some(lead) = other.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<Term> = self.terms.iter().take_while(|t| t.exp > lead.exp).cloned().collect();
        let mut rest = other.terms.iter();
        let first = rest.next().expect("nonempty");
        match self.terms.iter().find(|t| t.exp == first.exp) {
            Some(t) => terms.push(Term { exp: first.exp.clone(), coeff: t.coeff + first.coeff }),
            None => terms.push(first.clone()),
        }
        terms.extend(rest.cloned());
        Ordinal { terms }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::one())
    }

    /// `self * n`: multiplies the leading coefficient.
    pub fn mul_nat(&self, n: u64) -> Ordinal {
        if n == 0 || self.is_zero() {
            return Ordinal::zero();
        }
        let mut terms = self.terms.clone();
        terms[0].coeff *= n;
        Ordinal { terms }
    }

    /// The unique `g` with `self + g = a`.
    pub fn left_subtract(&self, a: &Ordinal) -> Result<Ordinal> {
        if self > a {
            return Err(Error::SubtractUnderflow { lhs: self.to_string(), rhs: a.to_string() });
        }
        let mut i = 0;
        while i < self.terms.len() && self.terms[i] == a.terms[i] {
            i += 1;
        }
        if i == self.terms.len() {
            return Ok(Ordinal { terms: a.terms[i..].to_vec() });
        }
        let (b, t) = (&self.terms[i], &a.terms[i]);
        if b.exp == t.exp {
            let mut terms = vec![Term { exp: t.exp.clone(), coeff: t.coeff - b.coeff }];
            terms.extend_from_slice(&a.terms[i + 1..]);
            Ok(Ordinal { terms })
        } else {
            Ok(Ordinal { terms: a.terms[i..].to_vec() })
        }
    }

    pub fn classify(&self) -> Kind {
        match self.terms.last() {
            None => Kind::Zero,
            Some(t) if t.exp.is_zero() => {
                let mut terms = self.terms.clone();
                let last = terms.last_mut().expect("nonempty");
                if last.coeff == 1 {
                    terms.pop();
                } else {
                    last.coeff -= 1;
                }
                Kind::Successor(Ordinal { terms })
            }
            Some(_) => Kind::Limit,
        }
    }

    pub fn is_limit(&self) -> bool {
        matches!(self.classify(), Kind::Limit)
    }

    /// Predecessor of a successor ordinal.
    pub fn pred(&self) -> Option<Ordinal> {
        match self.classify() {
            Kind::Successor(p) => Some(p),
            _ => None,
        }
    }

    /// Canonical fundamental sequence: for `a = c + w^e`, `c + w^d * n` when
    /// `e = d + 1`, and `c + w^(e[n])` when `e` is a limit.
    pub fn fund_seq(&self, n: u64) -> Result<Ordinal> {
        if !self.is_limit() {
            return Err(Error::NotALimit(self.to_string()));
        }
        let mut prefix = self.terms.clone();
        let last = prefix.last_mut().expect("limit is nonzero");
        let e = last.exp.clone();
        if last.coeff == 1 {
            prefix.pop();
        } else {
            last.coeff -= 1;
        }
        let c = Ordinal { terms: prefix };
        let tail = match e.classify() {
            Kind::Successor(d) => {
                if n == 0 {
                    Ordinal::zero()
                } else {
                    Ordinal::monomial(d, n)
                }
            }
            Kind::Limit => Ordinal::omega_pow(&e.fund_seq(n)?),
            Kind::Zero => unreachable!("limit has nonzero last exponent"),
        };
        Ok(c.add(&tail))
    }

    /// True when every exponent is at least `beta`, i.e. `w^beta` divides `self`.
    pub fn divisible_by_omega_pow(&self, beta: &Ordinal) -> bool {
        self.terms.iter().all(|t| &t.exp >= beta)
    }

    /// The quotient `d` with `w^beta * d = self`; requires divisibility.
    pub fn div_omega_pow(&self, beta: &Ordinal) -> Option<Ordinal> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let exp = beta.left_subtract(&t.exp).ok()?;
            terms.push(Term { exp, coeff: t.coeff });
        }
        Some(Ordinal { terms })
    }

    /// `w^beta * d` for any `d`.
    pub fn omega_pow_mul(beta: &Ordinal, d: &Ordinal) -> Ordinal {
        Ordinal {
            terms: d.terms.iter().map(|t| Term { exp: beta.add(&t.exp), coeff: t.coeff }).collect(),
        }
    }

    /// A gamma number is `0` or `w^b`.
    pub fn is_gamma(&self) -> bool {
        match self.terms.as_slice() {
            [] => true,
            [t] => t.coeff == 1,
            _ => false,
        }
    }

    /// Nesting depth of exponents, used to bound random generation.
    pub fn height_of_notation(&self) -> usize {
        self.terms.iter().map(|t| 1 + t.exp.height_of_notation()).max().unwrap_or(0)
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(&other.terms) {
            let o = a.exp.cmp(&b.exp).then(a.coeff.cmp(&b.coeff));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, "+")?;
            }
            if t.exp.is_zero() {
                write!(f, "{}", t.coeff)?;
            } else {
                write!(f, "w^({})", t.exp)?;
                if t.coeff != 1 {
                    write!(f, "*{}", t.coeff)?;
                }
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::cli::parse::parse_ordinal(s)
    }
}

/// An ordinal larger than every CNF ordinal, known only by its uncountable
/// base plus a finite offset. Used for the heights of the symbolic atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UncountableBase {
    /// `w1`
    Omega1,
    /// `w^(w1+1)`, the gamma number following `w1 + n`
    OmegaPowOmega1Succ,
    /// The initial ordinal of `2^c`.
    Initial2c,
    /// `w^(I(2^c)+1)`
    OmegaPowInitial2cSucc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Beyond {
    pub base: UncountableBase,
    pub plus: u64,
}

impl fmt::Display for Beyond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = match self.base {
            UncountableBase::Omega1 => "w1",
            UncountableBase::OmegaPowOmega1Succ => "w^(w1+1)",
            UncountableBase::Initial2c => "W(2^c)",
            UncountableBase::OmegaPowInitial2cSucc => "w^(W(2^c)+1)",
        };
        if self.plus == 0 {
            write!(f, "{b}")
        } else {
            write!(f, "{b}+{}", self.plus)
        }
    }
}

/// An ordinal, an uncountable ordinal known by name, or `inf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedOrdinal {
    Ord(Ordinal),
    Beyond(Beyond),
    Infinity,
}

impl ExtendedOrdinal {
    fn rank(&self) -> u8 {
        match self {
            ExtendedOrdinal::Ord(_) => 0,
            ExtendedOrdinal::Beyond(_) => 1,
            ExtendedOrdinal::Infinity => 2,
        }
    }

    pub fn as_ordinal(&self) -> Option<&Ordinal> {
        match self {
            ExtendedOrdinal::Ord(o) => Some(o),
            _ => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedOrdinal::Infinity)
    }

    pub fn succ(&self) -> ExtendedOrdinal {
        match self {
            ExtendedOrdinal::Ord(o) => ExtendedOrdinal::Ord(o.succ()),
            ExtendedOrdinal::Beyond(b) => ExtendedOrdinal::Beyond(Beyond { base: b.base, plus: b.plus + 1 }),
            ExtendedOrdinal::Infinity => ExtendedOrdinal::Infinity,
        }
    }

    /// Predecessor of a successor; `None` for limits, zero and `inf`.
    pub fn pred(&self) -> Option<ExtendedOrdinal> {
        match self {
            ExtendedOrdinal::Ord(o) => o.pred().map(ExtendedOrdinal::Ord),
            ExtendedOrdinal::Beyond(b) if b.plus > 0 => {
                Some(ExtendedOrdinal::Beyond(Beyond { base: b.base, plus: b.plus - 1 }))
            }
            _ => None,
        }
    }
}

impl From<Ordinal> for ExtendedOrdinal {
    fn from(o: Ordinal) -> Self {
        ExtendedOrdinal::Ord(o)
    }
}

impl PartialOrd for ExtendedOrdinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedOrdinal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtendedOrdinal::Ord(a), ExtendedOrdinal::Ord(b)) => a.cmp(b),
            (ExtendedOrdinal::Beyond(a), ExtendedOrdinal::Beyond(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl fmt::Display for ExtendedOrdinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedOrdinal::Ord(o) => write!(f, "{o}"),
            ExtendedOrdinal::Beyond(b) => write!(f, "{b}"),
            ExtendedOrdinal::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for ExtendedOrdinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "inf" {
            Ok(ExtendedOrdinal::Infinity)
        } else {
            Ok(ExtendedOrdinal::Ord(s.parse()?))
        }
    }
}

/// A gamma number: `0`, `w^b` or `inf`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaNumber(ExtendedOrdinal);

impl GammaNumber {
    pub fn value(&self) -> &ExtendedOrdinal {
        &self.0
    }
}

impl fmt::Display for GammaNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// The least gamma number not below `a`.
pub fn gamma_of(a: &ExtendedOrdinal) -> GammaNumber {
    match a {
        ExtendedOrdinal::Infinity => GammaNumber(ExtendedOrdinal::Infinity),
        ExtendedOrdinal::Ord(o) => {
            if o.is_gamma() {
                GammaNumber(a.clone())
            } else {
                let lead = o.leading_exponent().expect("non-gamma is nonzero");
                GammaNumber(ExtendedOrdinal::Ord(Ordinal::omega_pow(&lead.succ())))
            }
        }
        ExtendedOrdinal::Beyond(b) => {
            if b.plus == 0 {
                return GammaNumber(a.clone());
            }
            let base = match b.base {
                UncountableBase::Omega1 | UncountableBase::OmegaPowOmega1Succ => UncountableBase::OmegaPowOmega1Succ,
                UncountableBase::Initial2c | UncountableBase::OmegaPowInitial2cSucc => {
                    UncountableBase::OmegaPowInitial2cSucc
                }
            };
            GammaNumber(ExtendedOrdinal::Beyond(Beyond { base, plus: 0 }))
        }
    }
}

pub fn is_gamma(a: &ExtendedOrdinal) -> bool {
    match a {
        ExtendedOrdinal::Ord(o) => o.is_gamma(),
        ExtendedOrdinal::Beyond(b) => b.plus == 0,
        ExtendedOrdinal::Infinity => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    /// Explicit small ordinals below w^2 as pairs (a, b) meaning w*a + b; the
    /// addition oracle follows directly from absorption of finite parts.
    fn small_add(x: (u64, u64), y: (u64, u64)) -> (u64, u64) {
        if y.0 > 0 {
            (x.0 + y.0, y.1)
        } else {
            (x.0, x.1 + y.1)
        }
    }

    fn small(x: (u64, u64)) -> Ordinal {
        Ordinal::monomial(Ordinal::one(), 1).mul_nat(x.0).add(&Ordinal::nat(x.1))
    }

    #[test]
    fn make_normalizes() {
        assert_eq!(Ordinal::make(vec![]).unwrap(), Ordinal::zero());
        let a = Ordinal::make(vec![(Ordinal::one(), 2), (Ordinal::zero(), 3)]).unwrap();
        assert_eq!(a.to_string(), "w^(1)*2+3");
        assert_eq!(Ordinal::make(vec![(Ordinal::zero(), 1), (Ordinal::one(), 1)]).unwrap(), Ordinal::omega());
        assert!(matches!(Ordinal::make(vec![(Ordinal::zero(), 0)]), Err(Error::ZeroCoefficient)));
    }

    #[test]
    fn addition_matches_small_oracle() {
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    for d in 0..3 {
                        let (x, y) = ((a, b), (c, d));
                        assert_eq!(small(x).add(&small(y)), small(small_add(x, y)));
                    }
                }
            }
        }
    }

    #[test]
    fn compare_examples() {
        assert_eq!(o("w").cmp(&o("w")), Ordering::Equal);
        assert_eq!(o("w+1").cmp(&o("w^(1)*2")), Ordering::Less);
        assert_eq!(o("w^(w)").cmp(&o("w^(3)*9+5")), Ordering::Greater);
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(Ordinal::one().add(&Ordinal::omega()), Ordinal::omega());
        // (w^2+w)*3 by repeated addition
        let x = o("w^(2)+w");
        assert_eq!(x.mul_nat(3), x.add(&x).add(&x));
        assert_eq!(x.mul_nat(3).to_string(), "w^(2)*3+w^(1)");
        assert_eq!(Ordinal::omega_pow(&Ordinal::zero()), Ordinal::one());
    }

    #[test]
    fn left_subtract_examples() {
        let a = o("w^(w)+3");
        assert_eq!(Ordinal::zero().left_subtract(&a).unwrap(), a);
        assert_eq!(o("w").left_subtract(&o("w^(2)")).unwrap(), o("w^(2)"));
        let b = o("w*2+1");
        let g = b.left_subtract(&o("w*2+5")).unwrap();
        assert_eq!(g, Ordinal::nat(4));
        assert_eq!(b.add(&g), o("w*2+5"));
        assert!(matches!(o("w+1").left_subtract(&o("w")), Err(Error::SubtractUnderflow { .. })));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(Ordinal::zero().classify(), Kind::Zero);
        assert_eq!(o("w^(2)+3").classify(), Kind::Successor(o("w^(2)+2")));
        assert_eq!(o("w^(w)").classify(), Kind::Limit);
    }

    #[test]
    fn fund_seq_examples() {
        assert_eq!(o("w").fund_seq(3).unwrap(), Ordinal::nat(3));
        let a = o("w^(2)");
        assert_eq!(a.fund_seq(2).unwrap(), o("w*2"));
        assert!(a.fund_seq(2).unwrap() < a.fund_seq(3).unwrap());
        assert!(a.fund_seq(3).unwrap() < a);
        assert_eq!(o("w^(w)").fund_seq(2).unwrap(), o("w^(2)"));
        assert!(matches!(o("w+1").fund_seq(1), Err(Error::NotALimit(_))));
    }

    #[test]
    fn gamma_examples() {
        let g = gamma_of(&ExtendedOrdinal::Ord(o("w+1")));
        assert_eq!(g.value(), &ExtendedOrdinal::Ord(o("w^(2)")));
        assert_eq!(gamma_of(&ExtendedOrdinal::Ord(Ordinal::zero())).value(), &ExtendedOrdinal::Ord(Ordinal::zero()));
        assert_eq!(gamma_of(&ExtendedOrdinal::Ord(o("w^(w)"))).value(), &ExtendedOrdinal::Ord(o("w^(w)")));
        assert_eq!(gamma_of(&ExtendedOrdinal::Infinity).value(), &ExtendedOrdinal::Infinity);
    }

    #[test]
    fn division_by_omega_powers() {
        let x = o("w^(3)*2+w^(2)");
        assert!(x.divisible_by_omega_pow(&Ordinal::nat(2)));
        let d = x.div_omega_pow(&Ordinal::nat(2)).unwrap();
        assert_eq!(d, o("w*2+1"));
        assert_eq!(Ordinal::omega_pow_mul(&Ordinal::nat(2), &d), x);
        assert!(!o("w*3+1").divisible_by_omega_pow(&Ordinal::one()));
    }
}
