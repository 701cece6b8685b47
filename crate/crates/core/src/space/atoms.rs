//! Symbolic atoms: nonconstructive spaces known only through a declared
//! cardinal profile.

use std::fmt;

use crate::cardinal::Cardinal;
use crate::ordinal::{Beyond, ExtendedOrdinal, Ordinal, UncountableBase};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AtomKind {
    /// `[1, w1]`
    OmegaOne,
    /// The remainder of the Stone-Cech compactification of the naturals.
    BetaNMinusN,
    /// `[0,1]^(w1)`.
    CubeOmegaOne,
    /// `[1, 2^c]` as an ordinal interval.
    InitialTwoToC,
}

/// One segment of a piecewise-constant profile, valid from `start` until the
/// next entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileEntry {
    pub start: ExtendedOrdinal,
    pub card: Cardinal,
    pub cellularity: Cardinal,
}

/// Piecewise-constant description of `|S^(b)|` and `c(S^(b), S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardinalProfile {
    pub entries: Vec<ProfileEntry>,
    pub kernel_card: Cardinal,
    pub kernel_cellularity: Cardinal,
}

impl CardinalProfile {
    pub fn at(&self, order: &ExtendedOrdinal) -> (Cardinal, Cardinal) {
        if order.is_infinite() {
            return (self.kernel_card, self.kernel_cellularity);
        }
        let mut cur = (Cardinal::ZERO, Cardinal::ZERO);
        for e in &self.entries {
            if &e.start <= order {
                cur = (e.card, e.cellularity);
            } else {
                break;
            }
        }
        cur
    }

    /// First order at which the derived set is empty, or `inf`.
    pub fn height(&self) -> ExtendedOrdinal {
        self.entries
            .iter()
            .find(|e| e.card.is_zero())
            .map(|e| e.start.clone())
            .unwrap_or(ExtendedOrdinal::Infinity)
    }

    pub fn breakpoints(&self) -> Vec<ExtendedOrdinal> {
        self.entries.iter().map(|e| e.start.clone()).collect()
    }
}

fn beyond(base: UncountableBase, plus: u64) -> ExtendedOrdinal {
    ExtendedOrdinal::Beyond(Beyond { base, plus })
}

fn entry(start: ExtendedOrdinal, card: Cardinal, cellularity: Cardinal) -> ProfileEntry {
    ProfileEntry { start, card, cellularity }
}

impl AtomKind {
    pub const ALL: [AtomKind; 4] =
        [AtomKind::OmegaOne, AtomKind::BetaNMinusN, AtomKind::CubeOmegaOne, AtomKind::InitialTwoToC];

    pub fn name(self) -> &'static str {
        match self {
            AtomKind::OmegaOne => "[1,omega1]",
            AtomKind::BetaNMinusN => "bN_minus_N",
            AtomKind::CubeOmegaOne => "cube_omega1",
            AtomKind::InitialTwoToC => "[1,2^c]",
        }
    }

    pub fn from_name(s: &str) -> Option<AtomKind> {
        AtomKind::ALL.into_iter().find(|k| k.name() == s)
    }

    pub fn zero_dimensional(self) -> bool {
        !matches!(self, AtomKind::CubeOmegaOne)
    }

    pub fn scattered(self) -> bool {
        matches!(self, AtomKind::OmegaOne | AtomKind::InitialTwoToC)
    }

    /// Declared profile. The cube's cardinal `2^(aleph1)` has no slot on the
    /// five-point scale and is stored as `2^c`.
    pub fn profile(self) -> CardinalProfile {
        use Cardinal::*;
        let zero = ExtendedOrdinal::Ord(Ordinal::zero());
        match self {
            AtomKind::OmegaOne => CardinalProfile {
                entries: vec![
                    entry(zero, Aleph1, Aleph1),
                    entry(beyond(UncountableBase::Omega1, 0), Finite(1), Finite(1)),
                    entry(beyond(UncountableBase::Omega1, 1), Finite(0), Finite(0)),
                ],
                kernel_card: Finite(0),
                kernel_cellularity: Finite(0),
            },
            AtomKind::BetaNMinusN => CardinalProfile {
                entries: vec![entry(zero, TwoToContinuum, Continuum)],
                kernel_card: TwoToContinuum,
                kernel_cellularity: Continuum,
            },
            AtomKind::CubeOmegaOne => CardinalProfile {
                entries: vec![entry(zero, TwoToContinuum, Aleph0)],
                kernel_card: TwoToContinuum,
                kernel_cellularity: Aleph0,
            },
            AtomKind::InitialTwoToC => CardinalProfile {
                entries: vec![
                    entry(zero, TwoToContinuum, TwoToContinuum),
                    entry(beyond(UncountableBase::Initial2c, 0), Finite(1), Finite(1)),
                    entry(beyond(UncountableBase::Initial2c, 1), Finite(0), Finite(0)),
                ],
                kernel_card: Finite(0),
                kernel_cellularity: Finite(0),
            },
        }
    }
}

/// An atom together with a countable derivative already taken.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymbolicAtom {
    pub kind: AtomKind,
    pub shift: Ordinal,
}

impl SymbolicAtom {
    pub fn new(kind: AtomKind) -> Self {
        SymbolicAtom { kind, shift: Ordinal::zero() }
    }

    fn shifted(&self, order: &ExtendedOrdinal) -> ExtendedOrdinal {
        match order {
            ExtendedOrdinal::Ord(o) => ExtendedOrdinal::Ord(self.shift.add(o)),
            other => other.clone(),
        }
    }

    /// `(|A^(order)|, c(A^(order), A))`.
    pub fn at(&self, order: &ExtendedOrdinal) -> (Cardinal, Cardinal) {
        self.kind.profile().at(&self.shifted(order))
    }

    /// The profile seen from the shifted atom. Countable shifts never move an
    /// uncountable breakpoint, and every declared atom is constant on the
    /// countable orders.
    pub fn profile(&self) -> CardinalProfile {
        let mut p = self.kind.profile();
        if !self.shift.is_zero() {
            let (card, cell) = self.at(&ExtendedOrdinal::Ord(Ordinal::zero()));
            p.entries[0].card = card;
            p.entries[0].cellularity = cell;
        }
        p
    }

    pub fn height(&self) -> ExtendedOrdinal {
        self.kind.profile().height()
    }
}

impl fmt::Display for SymbolicAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.shift.is_zero() {
            f.write_str(self.kind.name())
        } else {
            write!(f, "derive({},{})", self.kind.name(), self.shift)
        }
    }
}
