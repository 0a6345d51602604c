//! Operator words such as `Xc^2 Xr^6 Zr^-1`.
//!
//! A word is a whitespace-separated product of factors. Each factor is `X`
//! or `Z`, an optional mode (`c`, `r` for the collective coordinates, `1`,
//! `2` for the particles) and an optional integer power after `^`. Factors
//! compose like operators: the rightmost one acts first. `I` and the empty
//! string are the identity.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::state::Particle;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    X,
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Center,
    Relative,
    Particle(Particle),
}

impl Mode {
    fn suffix(self) -> &'static str {
        match self {
            Mode::Center => "c",
            Mode::Relative => "r",
            Mode::Particle(Particle::One) => "1",
            Mode::Particle(Particle::Two) => "2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Factor {
    pub op: Pauli,
    pub mode: Option<Mode>,
    pub power: i64,
}

impl Factor {
    pub fn new(op: Pauli, mode: Option<Mode>, power: i64) -> Self {
        Self { op, mode, power }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.op {
            Pauli::X => "X",
            Pauli::Z => "Z",
        };
        write!(f, "{op}{}", self.mode.map_or("", Mode::suffix))?;
        if self.power != 1 {
            write!(f, "^{}", self.power)?;
        }
        Ok(())
    }
}

impl FromStr for Factor {
    type Err = Error;

    fn from_str(tok: &str) -> Result<Self> {
        let bad = || Error::WordParse(format!("bad factor `{tok}`"));
        let mut chars = tok.chars();
        let op = match chars.next() {
            Some('X') => Pauli::X,
            Some('Z') => Pauli::Z,
            _ => return Err(bad()),
        };
        let rest = chars.as_str();
        let (mode_str, power_str) = match rest.split_once('^') {
            Some((m, p)) => (m, Some(p)),
            None => (rest, None),
        };
        let mode = match mode_str {
            "" => None,
            "c" => Some(Mode::Center),
            "r" => Some(Mode::Relative),
            "1" => Some(Mode::Particle(Particle::One)),
            "2" => Some(Mode::Particle(Particle::Two)),
            _ => return Err(bad()),
        };
        let power = match power_str {
            None => 1,
            Some(p) => p.parse::<i64>().map_err(|_| bad())?,
        };
        Ok(Factor { op, mode, power })
    }
}

/// A product of factors, stored left to right as written.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    pub factors: Vec<Factor>,
}

impl Word {
    pub fn new(factors: Vec<Factor>) -> Self {
        Self { factors }
    }

    pub fn identity() -> Self {
        Self::default()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Factors in the order they act on a ket.
    pub fn acting_order(&self) -> impl Iterator<Item = &Factor> {
        self.factors.iter().rev()
    }

    /// `self` followed by itself `times` times.
    pub fn repeat(&self, times: usize) -> Word {
        Word { factors: self.factors.repeat(times) }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let factors = s
            .split_whitespace()
            .filter(|t| *t != "I")
            .map(str::parse)
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { factors })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "I");
        }
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_collective_word() {
        let w: Word = "Xc^2 Xr^6 Zr^-1".parse().unwrap();
        assert_eq!(
            w.factors,
            vec![
                Factor::new(Pauli::X, Some(Mode::Center), 2),
                Factor::new(Pauli::X, Some(Mode::Relative), 6),
                Factor::new(Pauli::Z, Some(Mode::Relative), -1),
            ]
        );
        assert_eq!(w.to_string(), "Xc^2 Xr^6 Zr^-1");
    }

    #[test]
    fn canonical_echo() {
        let w: Word = "  Xc^1   Z1  X^3 ".parse().unwrap();
        assert_eq!(w.to_string(), "Xc Z1 X^3");
        assert_eq!("".parse::<Word>().unwrap().to_string(), "I");
        assert!("I".parse::<Word>().unwrap().is_identity());
    }

    #[test]
    fn rejects_malformed() {
        for bad in ["Xq^2", "Y", "Xc^", "Xc^1.5", "Xc^2^3", "xc", "Zcc"] {
            assert!(matches!(bad.parse::<Word>(), Err(Error::WordParse(_))), "{bad}");
        }
    }

    fn factor_strategy() -> impl Strategy<Value = Factor> {
        let op = prop_oneof![Just(Pauli::X), Just(Pauli::Z)];
        let mode = prop_oneof![
            Just(None),
            Just(Some(Mode::Center)),
            Just(Some(Mode::Relative)),
            Just(Some(Mode::Particle(Particle::One))),
            Just(Some(Mode::Particle(Particle::Two))),
        ];
        (op, mode, -50i64..50).prop_map(|(op, mode, power)| Factor { op, mode, power })
    }

    proptest! {
        #[test]
        fn display_parse_roundtrip(factors in prop::collection::vec(factor_strategy(), 0..8)) {
            let w = Word::new(factors);
            let back: Word = w.to_string().parse().unwrap();
            prop_assert_eq!(back, w);
        }
    }
}
