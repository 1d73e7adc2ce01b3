use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exact::{rint, Rational};

/// The four 4-periodic sequences used by character sums.
///
/// Values on `n = 1, 2, 3, 4 (mod 4)`:
/// `One = (1,1,1,1)`, `TwoA = (1,0,1,0)`, `TwoB = (1,-1,1,-1)`, `M4 = (1,0,-1,0)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CharId {
    One,
    TwoA,
    TwoB,
    M4,
}

impl CharId {
    pub const ALL: [CharId; 4] = [CharId::One, CharId::TwoA, CharId::TwoB, CharId::M4];

    /// `chi(n)` for `n = 1, 2, 3, 4 (mod 4)`.
    pub fn table(self) -> [i64; 4] {
        match self {
            CharId::One => [1, 1, 1, 1],
            CharId::TwoA => [1, 0, 1, 0],
            CharId::TwoB => [1, -1, 1, -1],
            CharId::M4 => [1, 0, -1, 0],
        }
    }

    pub fn value(self, n: u64) -> i64 {
        self.table()[((n + 3) % 4) as usize]
    }

    pub fn periodic(self) -> Periodic {
        let t = self.table();
        Periodic::from_table([rint(t[0]), rint(t[1]), rint(t[2]), rint(t[3])])
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CharId::One => "1",
            CharId::TwoA => "2a",
            CharId::TwoB => "2b",
            CharId::M4 => "m4",
        }
    }
}

impl fmt::Display for CharId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CharId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "1" => Ok(CharId::One),
            "2a" => Ok(CharId::TwoA),
            "2b" => Ok(CharId::TwoB),
            "m4" | "-4" => Ok(CharId::M4),
            other => Err(Error::Other(format!("unknown character `{other}`"))),
        }
    }
}

/// A general 4-periodic rational sequence. Stored by `n mod 4`
/// (slot 0 holds the value at `n = 4, 8, ...`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Periodic([Rational; 4]);

impl Periodic {
    /// Build from values on `n = 1, 2, 3, 4`.
    pub fn from_table(t: [Rational; 4]) -> Self {
        let [a, b, c, d] = t;
        Periodic([d, a, b, c])
    }

    pub fn at(&self, n: u64) -> &Rational {
        &self.0[(n % 4) as usize]
    }

    pub fn mean_sum(&self) -> Rational {
        self.0.iter().cloned().sum()
    }

    pub fn abs_sum(&self) -> Rational {
        self.0.iter().map(|x| x.abs()).sum()
    }

    pub fn max_abs(&self) -> Rational {
        self.0.iter().map(|x| x.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, other: &Periodic) -> Periodic {
        Periodic([
            &self.0[0] * &other.0[0],
            &self.0[1] * &other.0[1],
            &self.0[2] * &other.0[2],
            &self.0[3] * &other.0[3],
        ])
    }

    pub fn sub(&self, other: &Periodic) -> Periodic {
        Periodic([
            &self.0[0] - &other.0[0],
            &self.0[1] - &other.0[1],
            &self.0[2] - &other.0[2],
            &self.0[3] - &other.0[3],
        ])
    }

    pub fn scale(&self, r: &Rational) -> Periodic {
        Periodic([&self.0[0] * r, &self.0[1] * r, &self.0[2] * r, &self.0[3] * r])
    }

    pub fn constant(r: Rational) -> Periodic {
        Periodic([r.clone(), r.clone(), r.clone(), r])
    }

    /// Indicator of the residue class `n ≡ r (mod 4)`.
    pub fn class(r: u64) -> Periodic {
        let mut v = [Rational::zero(), Rational::zero(), Rational::zero(), Rational::zero()];
        v[(r % 4) as usize] = rint(1);
        Periodic(v)
    }

    /// Indicator of even `n`.
    pub fn even() -> Periodic {
        Periodic::from_table([rint(0), rint(1), rint(0), rint(1)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_matches_residues() {
        assert_eq!(CharId::M4.value(1), 1);
        assert_eq!(CharId::M4.value(3), -1);
        assert_eq!(CharId::M4.value(4), 0);
        assert_eq!(CharId::TwoB.value(6), -1);
        for c in CharId::ALL {
            let p = c.periodic();
            for n in 1..=8 {
                assert_eq!(p.at(n), &rint(c.value(n)));
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        for c in CharId::ALL {
            assert_eq!(c.as_str().parse::<CharId>().unwrap(), c);
        }
        assert!("3".parse::<CharId>().is_err());
    }
}
