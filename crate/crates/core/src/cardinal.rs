//! A five-point scale of cardinals with CH-aware comparison.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `Finite(n) < aleph0 < aleph1 <= c < 2^c`.
///
/// The derived order places `Aleph1` strictly below `Continuum`; that is the
/// structural order used for maxima. Comparisons that depend on whether the
/// two are equal go through [`card_le`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cardinal {
    Finite(u64),
    Aleph0,
    Aleph1,
    Continuum,
    TwoToContinuum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Truth3 {
    Yes,
    No,
    Independent,
}

impl Truth3 {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Truth3::Yes
        } else {
            Truth3::No
        }
    }

    /// Conjunction: `No` dominates, then `Independent`.
    pub fn and(self, other: Truth3) -> Truth3 {
        match (self, other) {
            (Truth3::No, _) | (_, Truth3::No) => Truth3::No,
            (Truth3::Independent, _) | (_, Truth3::Independent) => Truth3::Independent,
            _ => Truth3::Yes,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Truth3::Yes => "yes",
            Truth3::No => "no",
            Truth3::Independent => "independent",
        }
    }
}

impl Cardinal {
    pub const ZERO: Cardinal = Cardinal::Finite(0);

    pub fn is_zero(self) -> bool {
        self == Cardinal::ZERO
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Cardinal::Finite(_))
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Cardinal::Finite(n) => Some(n),
            _ => None,
        }
    }
}

pub fn card_le(a: Cardinal, b: Cardinal, assume_ch: bool) -> Truth3 {
    match (a, b) {
        (Cardinal::Continuum, Cardinal::Aleph1) => {
            if assume_ch {
                Truth3::Yes
            } else {
                Truth3::Independent
            }
        }
        _ => Truth3::from_bool(a <= b),
    }
}

pub fn card_max(a: Cardinal, b: Cardinal) -> Cardinal {
    a.max(b)
}

pub fn card_sum(a: Cardinal, b: Cardinal) -> Cardinal {
    match (a, b) {
        (Cardinal::Finite(x), Cardinal::Finite(y)) => Cardinal::Finite(x.saturating_add(y)),
        _ => a.max(b),
    }
}

pub fn card_mul(a: Cardinal, b: Cardinal) -> Cardinal {
    match (a, b) {
        (Cardinal::Finite(0), _) | (_, Cardinal::Finite(0)) => Cardinal::ZERO,
        (Cardinal::Finite(x), Cardinal::Finite(y)) => Cardinal::Finite(x.saturating_mul(y)),
        _ => a.max(b),
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Aleph0 => write!(f, "aleph0"),
            Cardinal::Aleph1 => write!(f, "aleph1"),
            Cardinal::Continuum => write!(f, "c"),
            Cardinal::TwoToContinuum => write!(f, "2^c"),
        }
    }
}

impl FromStr for Cardinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "aleph0" => Ok(Cardinal::Aleph0),
            "aleph1" => Ok(Cardinal::Aleph1),
            "c" => Ok(Cardinal::Continuum),
            "2^c" => Ok(Cardinal::TwoToContinuum),
            t => t.parse::<u64>().map(Cardinal::Finite).map_err(|_| Error::Syntax {
                line: 1,
                col: 1,
                expected: "cardinal (natural, aleph0, aleph1, c, 2^c)".into(),
            }),
        }
    }
}

impl fmt::Display for Truth3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Cardinal::*;

    const ALL: [Cardinal; 7] = [Finite(0), Finite(1), Finite(5), Aleph0, Aleph1, Continuum, TwoToContinuum];

    #[test]
    fn comparison_examples() {
        assert_eq!(card_le(Finite(3), Aleph0, false), Truth3::Yes);
        assert_eq!(card_le(TwoToContinuum, Continuum, false), Truth3::No);
        assert_eq!(card_le(Continuum, Aleph1, false), Truth3::Independent);
        assert_eq!(card_le(Continuum, Aleph1, true), Truth3::Yes);
        assert_eq!(card_le(Aleph1, Continuum, false), Truth3::Yes);
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(card_sum(Finite(2), Finite(3)), Finite(5));
        assert_eq!(card_mul(Aleph0, Finite(7)), Aleph0);
        assert_eq!(card_max(Aleph1, Continuum), Continuum);
        assert_eq!(card_mul(Aleph1, Finite(0)), Finite(0));
    }

    #[test]
    fn ch_flag_only_resolves_independence() {
        for a in ALL {
            for b in ALL {
                let without = card_le(a, b, false);
                let with = card_le(a, b, true);
                if without != Truth3::Independent {
                    assert_eq!(without, with);
                } else {
                    assert_eq!(with, Truth3::Yes);
                }
            }
        }
    }

    #[test]
    fn order_is_reflexive_and_transitive_on_definite_answers() {
        for a in ALL {
            assert_eq!(card_le(a, a, false), Truth3::Yes);
            for b in ALL {
                for c in ALL {
                    if card_le(a, b, false) == Truth3::Yes && card_le(b, c, false) == Truth3::Yes {
                        assert_eq!(card_le(a, c, false), Truth3::Yes);
                    }
                }
            }
        }
    }

    #[test]
    fn sum_and_product_are_commutative_and_associative() {
        for a in ALL {
            for b in ALL {
                assert_eq!(card_sum(a, b), card_sum(b, a));
                assert_eq!(card_mul(a, b), card_mul(b, a));
                for c in ALL {
                    assert_eq!(card_sum(card_sum(a, b), c), card_sum(a, card_sum(b, c)));
                    assert_eq!(card_mul(card_mul(a, b), c), card_mul(a, card_mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn tokens_round_trip() {
        for a in ALL {
            assert_eq!(a.to_string().parse::<Cardinal>().unwrap(), a);
        }
    }
}
