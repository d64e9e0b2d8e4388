use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::MarkovError;

/// A positive integer or the symbol `2^∞`. `Ord` follows the Sharkovskiy
/// ordering: `a > b` means `a ≻ b`, so 3 is the largest element and 1 the smallest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SharkType {
    Finite(u64),
    TwoInfinity,
}

impl SharkType {
    /// Sort key, increasing from the top of the ordering: odd parts above one by
    /// power of two and then odd part, then `2^∞`, then descending powers of two.
    fn key(self) -> (u8, u64, u64) {
        match self {
            SharkType::TwoInfinity => (1, 0, 0),
            SharkType::Finite(n) => {
                debug_assert!(n > 0, "Sharkovskiy types are positive");
                let a = n.trailing_zeros() as u64;
                let odd = n >> a;
                if odd > 1 {
                    (0, a, odd)
                } else {
                    (2, u64::MAX - a, 0)
                }
            }
        }
    }
}

impl Ord for SharkType {
    fn cmp(&self, other: &Self) -> Ordering {
        other.key().cmp(&self.key())
    }
}

impl PartialOrd for SharkType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for SharkType {
    fn from(n: u64) -> Self {
        SharkType::Finite(n)
    }
}

impl fmt::Display for SharkType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SharkType::Finite(n) => write!(f, "{n}"),
            SharkType::TwoInfinity => f.write_str("2^inf"),
        }
    }
}

impl FromStr for SharkType {
    type Err = MarkovError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "2^inf" | "2^∞" => Ok(SharkType::TwoInfinity),
            t => match t.parse::<u64>() {
                Ok(n) if n > 0 => Ok(SharkType::Finite(n)),
                _ => Err(MarkovError::Parse(format!("bad Sharkovskiy type {t:?}"))),
            },
        }
    }
}

impl Serialize for SharkType {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Whether `m ≻ n`.
pub fn sharkovskiy_less(m: SharkType, n: SharkType) -> bool {
    m > n
}

/// Whether `n` belongs to `Sh(k)`: `n = k` or `k ≻ n`. `Sh(2^∞)` is the set of
/// powers of two.
pub fn sh_set_contains(k: SharkType, n: u64) -> bool {
    k >= SharkType::Finite(n)
}
