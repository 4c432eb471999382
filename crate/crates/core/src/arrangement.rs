//! Card arrangements of the Five Card Trick.
//!
//! An arrangement is a cyclic sequence of five face-down cards, three black
//! and two red, written as a five character string such as `rBBrB`. Alice
//! places her pair, an extra black card goes in the middle, and Bob places
//! his pair. After a random cut the cards are revealed and the AND of the two
//! input bits is read from whether the red cards sit next to each other.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Number of cards in the deck and of distinct cut indices.
pub const DECK_SIZE: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Card {
    Black,
    Red,
}

impl Card {
    pub fn symbol(self) -> char {
        match self {
            Card::Black => 'B',
            Card::Red => 'r',
        }
    }

    pub fn from_symbol(c: char) -> Result<Self> {
        match c {
            'B' => Ok(Card::Black),
            'r' => Ok(Card::Red),
            other => Err(Error::InvalidCard(other)),
        }
    }
}

impl fmt::Display for Card {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    pub fn new(value: u64) -> Result<Self> {
        match value {
            0 => Ok(Bit::Zero),
            1 => Ok(Bit::One),
            other => Err(Error::InvalidBit(other)),
        }
    }

    pub fn value(self) -> u8 {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }

    pub fn and(self, other: Bit) -> Bit {
        if self == Bit::One && other == Bit::One {
            Bit::One
        } else {
            Bit::Zero
        }
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// A cut index in Z5.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct CutIndex(u8);

impl CutIndex {
    pub const ZERO: CutIndex = CutIndex(0);

    pub fn new(k: u64) -> Result<Self> {
        if k < DECK_SIZE as u64 {
            Ok(CutIndex(k as u8))
        } else {
            Err(Error::CutIndexOutOfRange(k))
        }
    }

    /// Reduces any integer modulo 5.
    pub fn wrapping(k: i64) -> Self {
        CutIndex(k.rem_euclid(DECK_SIZE as i64) as u8)
    }

    pub fn all() -> impl Iterator<Item = CutIndex> {
        (0..DECK_SIZE as u8).map(CutIndex)
    }

    pub fn get(self) -> usize {
        self.0 as usize
    }

    /// Composition of two cuts: rotating by `self` then by `other`.
    pub fn then(self, other: CutIndex) -> CutIndex {
        CutIndex((self.0 + other.0) % DECK_SIZE as u8)
    }
}

impl<'de> Deserialize<'de> for CutIndex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let k = u64::deserialize(deserializer)?;
        CutIndex::new(k).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for CutIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Five cards with exactly three black and two red.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrangement([Card; DECK_SIZE]);

impl Arrangement {
    pub fn new(cards: [Card; DECK_SIZE]) -> Result<Self> {
        let reds = cards.iter().filter(|c| **c == Card::Red).count();
        if reds != 2 {
            return Err(Error::WrongMultiset(
                cards.iter().map(|c| c.symbol()).collect(),
            ));
        }
        Ok(Arrangement(cards))
    }

    pub fn cards(&self) -> &[Card; DECK_SIZE] {
        &self.0
    }

    /// Applies the cut function: `f(abcde, 1) = eabcd`, i.e. a right
    /// rotation by `k` positions.
    pub fn rotate(&self, k: CutIndex) -> Arrangement {
        let mut out = self.0;
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = self.0[(i + DECK_SIZE - k.get()) % DECK_SIZE];
        }
        Arrangement(out)
    }

    /// The cut index taking `self` to `target`, if `target` is a rotation of
    /// `self`. Valid arrangements have no rotational symmetry, so it is unique.
    pub fn cut_to(&self, target: &Arrangement) -> Option<CutIndex> {
        CutIndex::all().find(|&k| self.rotate(k) == *target)
    }

    /// The AND result: 1 iff the two red cards are cyclically adjacent.
    pub fn evaluate_and(&self) -> Bit {
        let adjacent = (0..DECK_SIZE)
            .any(|i| self.0[i] == Card::Red && self.0[(i + 1) % DECK_SIZE] == Card::Red);
        if adjacent {
            Bit::One
        } else {
            Bit::Zero
        }
    }

    /// The other member of the restricted initial set.
    pub fn partner(&self) -> Result<Arrangement> {
        let [x, y] = restricted_initial_set();
        if *self == x {
            Ok(y)
        } else if *self == y {
            Ok(x)
        } else {
            Err(Error::NotRestrictedInitial(self.to_string()))
        }
    }

    pub fn is_restricted_initial(&self) -> bool {
        restricted_initial_set().contains(self)
    }
}

impl FromStr for Arrangement {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        if chars.len() != DECK_SIZE {
            return Err(Error::WrongLength(chars.len()));
        }
        let mut cards = [Card::Black; DECK_SIZE];
        for (slot, c) in cards.iter_mut().zip(chars) {
            *slot = Card::from_symbol(c)?;
        }
        Arrangement::new(cards)
    }
}

impl fmt::Display for Arrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for card in &self.0 {
            write!(f, "{card}")?;
        }
        Ok(())
    }
}

impl Serialize for Arrangement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Arrangement {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

pub fn parse_arrangement(text: &str) -> Result<Arrangement> {
    text.parse()
}

pub fn format_arrangement(arr: &Arrangement) -> String {
    arr.to_string()
}

pub fn rotate(arr: &Arrangement, k: CutIndex) -> Arrangement {
    arr.rotate(k)
}

pub fn evaluate_and(arr: &Arrangement) -> Bit {
    arr.evaluate_and()
}

/// Alice's pair, the extra black card, then Bob's pair.
///
/// Alice encodes 1 as `rB` and Bob encodes 1 as `Br`, so both red cards
/// touch the middle black card only when `a = b = 1`.
pub fn encode_initial(a: Bit, b: Bit) -> Arrangement {
    use Card::{Black as B, Red as R};
    let alice = match a {
        Bit::One => [R, B],
        Bit::Zero => [B, R],
    };
    let bob = match b {
        Bit::One => [B, R],
        Bit::Zero => [R, B],
    };
    Arrangement([alice[0], alice[1], B, bob[0], bob[1]])
}

/// All ten valid arrangements in lexicographic order.
pub fn all_arrangements() -> Vec<Arrangement> {
    let mut out = Vec::with_capacity(10);
    for first in 0..DECK_SIZE {
        for second in first + 1..DECK_SIZE {
            let mut cards = [Card::Black; DECK_SIZE];
            cards[first] = Card::Red;
            cards[second] = Card::Red;
            out.push(Arrangement(cards));
        }
    }
    out.sort();
    out
}

/// The four possible initial arrangements, one per input pair.
pub fn initial_set() -> BTreeSet<Arrangement> {
    [Bit::Zero, Bit::One]
        .into_iter()
        .flat_map(|a| {
            [Bit::Zero, Bit::One]
                .into_iter()
                .map(move |b| encode_initial(a, b))
        })
        .collect()
}

/// Every arrangement reachable from some initial arrangement by a cut.
pub fn final_set() -> BTreeSet<Arrangement> {
    initial_set()
        .iter()
        .flat_map(|i| CutIndex::all().map(move |k| i.rotate(k)))
        .collect()
}

/// Initial arrangements when Bob's bit is fixed to 0: `[rBBrB, BrBrB]`.
pub fn restricted_initial_set() -> [Arrangement; 2] {
    [
        encode_initial(Bit::One, Bit::Zero),
        encode_initial(Bit::Zero, Bit::Zero),
    ]
}

/// All rotations of the restricted initial arrangements (five in total).
pub fn restricted_final_set() -> BTreeSet<Arrangement> {
    restricted_initial_set()
        .iter()
        .flat_map(|i| CutIndex::all().map(move |k| i.rotate(k)))
        .collect()
}

/// Finals `f(I, s*)` for `I` in the restricted initial set. These are the
/// finals that leak information when the cut at `s*` is biased.
pub fn leaky_finals(s_star: CutIndex) -> [Arrangement; 2] {
    restricted_initial_set().map(|i| i.rotate(s_star))
}
