use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use super::CircleError;

/// A rational point of the circle `R/Z`, stored as a reduced fraction in `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct RatAngle {
    num: u64,
    den: u64,
}

impl RatAngle {
    pub const ZERO: RatAngle = RatAngle { num: 0, den: 1 };

    /// Builds `num/den mod 1`, reduced.
    pub fn new(num: u64, den: u64) -> Result<Self, CircleError> {
        if den == 0 {
            return Err(CircleError::ZeroDenominator);
        }
        Ok(Self::reduced(num % den, den))
    }

    fn reduced(num: u64, den: u64) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let g = num.gcd(&den);
        RatAngle {
            num: num / g,
            den: den / g,
        }
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    /// `d * self mod 1`.
    pub fn sigma(&self, d: u32) -> RatAngle {
        let n = (self.num as u128 * d as u128) % self.den as u128;
        Self::reduced(n as u64, self.den)
    }

    /// `d^n * self mod 1`, by modular exponentiation.
    pub fn sigma_n(&self, d: u32, n: u64) -> RatAngle {
        let m = self.den as u128;
        let mut result: u128 = 1 % m;
        let mut base = d as u128 % m;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % m;
            }
            base = base * base % m;
            e >>= 1;
        }
        Self::reduced((result * self.num as u128 % m) as u64, self.den)
    }

    /// The `d` preimages of this angle under `σ_d`, in increasing order.
    pub fn preimages(&self, d: u32) -> Result<Vec<RatAngle>, CircleError> {
        let den = self
            .den
            .checked_mul(d as u64)
            .ok_or(CircleError::Overflow)?;
        (0..d as u64)
            .map(|j| {
                let num = j
                    .checked_mul(self.den)
                    .and_then(|x| x.checked_add(self.num))
                    .ok_or(CircleError::Overflow)?;
                Ok(Self::reduced(num, den))
            })
            .collect()
    }

    /// Positive (counterclockwise) arc length from `self` to `other`, as a fraction
    /// `(numerator, denominator)` in u128.
    pub fn ccw_gap(&self, other: &RatAngle) -> (u128, u128) {
        let den = self.den as u128 * other.den as u128;
        let a = self.num as u128 * other.den as u128;
        let b = other.num as u128 * self.den as u128;
        if b >= a {
            (b - a, den)
        } else {
            (den - (a - b), den)
        }
    }

    /// Circular distance `min(|a-b|, 1-|a-b|)` as an exact fraction.
    pub fn circle_distance(&self, other: &RatAngle) -> Distance {
        let (n, d) = self.ccw_gap(other);
        let n = n.min(d - n);
        Distance::new(n, d)
    }

    /// Whether `self` has a purely periodic orbit under `σ_d`.
    pub fn is_periodic(&self, d: u32) -> bool {
        self.den.gcd(&(d as u64)) == 1
    }

    /// Preperiod and period of this angle under `σ_d`.
    pub fn orbit_type(&self, d: u32) -> (u64, u64) {
        let mut den = self.den;
        let mut pre = 0u64;
        loop {
            let g = den.gcd(&(d as u64));
            if g == 1 {
                break;
            }
            den /= g;
            pre += 1;
        }
        (pre, multiplicative_order(d as u64, den))
    }

    /// Base-`base` expansion as (preperiod digits, period digits). Terminating
    /// expansions get the period `[0]`.
    pub fn to_digits(&self, base: u32) -> Result<(Vec<u8>, Vec<u8>), CircleError> {
        if !(2..=36).contains(&base) {
            return Err(CircleError::BadBase(base));
        }
        let b = base as u64;
        let mut rest = self.den;
        let mut pre_len = 0usize;
        loop {
            let g = rest.gcd(&b);
            if g == 1 {
                break;
            }
            rest /= g;
            pre_len += 1;
        }
        let per_len = multiplicative_order(b, rest) as usize;
        if pre_len + per_len > MAX_EXPANSION {
            return Err(CircleError::ExpansionTooLong(pre_len + per_len));
        }
        let mut digits = Vec::with_capacity(pre_len + per_len);
        let mut r = self.num as u128;
        let den = self.den as u128;
        for _ in 0..pre_len + per_len {
            r *= b as u128;
            digits.push((r / den) as u8);
            r %= den;
        }
        let per = digits.split_off(pre_len);
        Ok((digits, per))
    }

    /// First `n` base-`base` digits of the (terminating-preferred) expansion.
    pub fn digit_prefix(&self, base: u32, n: usize) -> Vec<u8> {
        let mut r = self.num as u128;
        let den = self.den as u128;
        let b = base as u128;
        (0..n)
            .map(|_| {
                r *= b;
                let dgt = (r / den) as u8;
                r %= den;
                dgt
            })
            .collect()
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

const MAX_EXPANSION: usize = 1 << 16;

/// Multiplicative order of `b` modulo `m` (1 when `m == 1`).
fn multiplicative_order(b: u64, m: u64) -> u64 {
    if m == 1 {
        return 1;
    }
    let m128 = m as u128;
    let b = b as u128 % m128;
    let mut x = b;
    let mut k = 1u64;
    while x != 1 {
        x = x * b % m128;
        k += 1;
        debug_assert!(k <= m, "base not coprime to modulus");
    }
    k
}

impl Ord for RatAngle {
    fn cmp(&self, other: &Self) -> Ordering {
        let a = self.num as u128 * other.den as u128;
        let b = other.num as u128 * self.den as u128;
        a.cmp(&b)
    }
}

impl PartialOrd for RatAngle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RatAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatAngle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for RatAngle {
    type Err = CircleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CircleError::BadAngle(s.to_string());
        let s_trim = s.trim();
        match s_trim.split_once('/') {
            None => {
                let n: u64 = s_trim.parse().map_err(|_| bad())?;
                RatAngle::new(n, 1)
            }
            Some((p, q)) => {
                let p: u64 = p.trim().parse().map_err(|_| bad())?;
                let q: u64 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 {
                    return Err(bad());
                }
                RatAngle::new(p, q)
            }
        }
    }
}

/// An exact nonnegative distance on the circle, kept as a reduced u128 fraction.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Distance {
    num: u128,
    den: u128,
}

impl Distance {
    pub const ZERO: Distance = Distance { num: 0, den: 1 };

    pub fn new(num: u128, den: u128) -> Self {
        if num == 0 {
            return Self::ZERO;
        }
        let g = num.gcd(&den);
        Distance {
            num: num / g,
            den: den / g,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for Distance {
    fn cmp(&self, other: &Self) -> Ordering {
        // Circle distances are at most 1/2 with denominators below 2^64 each side,
        // but products of two u128 fractions can overflow; fall back to
        // continued-fraction style comparison.
        cmp_fractions(self.num, self.den, other.num, other.den)
    }
}

impl PartialOrd for Distance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn cmp_fractions(mut a: u128, mut b: u128, mut c: u128, mut d: u128) -> Ordering {
    // compares a/b with c/d without overflow
    let mut flipped = false;
    loop {
        let (qa, qc) = (a / b, c / d);
        if qa != qc {
            let o = qa.cmp(&qc);
            return if flipped { o.reverse() } else { o };
        }
        let (ra, rc) = (a % b, c % d);
        match (ra == 0, rc == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => {
                return if flipped {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            (false, true) => {
                return if flipped {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
            (false, false) => {
                // a/b = q + ra/b ; compare ra/b vs rc/d  <=> compare d/rc vs b/ra reversed
                let (na, nb, nc, nd) = (b, ra, d, rc);
                a = na;
                b = nb;
                c = nc;
                d = nd;
                flipped = !flipped;
            }
        }
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.num == 0 {
            write!(f, "0")
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl serde::Serialize for Distance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> RatAngle {
        s.parse().unwrap()
    }

    #[test]
    fn sigma_examples() {
        assert_eq!(RatAngle::ZERO.sigma(2), RatAngle::ZERO);
        assert_eq!(a("1/3").sigma(2), a("2/3"));
        assert_eq!(a("1/4").sigma(3), a("3/4"));
        assert_eq!(a("1/12").sigma_n(2, 3), a("2/3"));
    }

    #[test]
    fn reduces_mod_one() {
        assert_eq!(a("5/4"), a("1/4"));
        assert_eq!(a("2/4").to_string(), "1/2");
        assert_eq!(a("3/3"), RatAngle::ZERO);
        assert!("1/0".parse::<RatAngle>().is_err());
        assert!("x/3".parse::<RatAngle>().is_err());
    }

    #[test]
    fn preimages_of_sixth() {
        let pre = a("1/6").preimages(2).unwrap();
        assert_eq!(pre, vec![a("1/12"), a("7/12")]);
    }

    #[test]
    fn digits_of_thirds_and_twelfths() {
        assert_eq!(a("1/3").to_digits(2).unwrap(), (vec![], vec![0, 1]));
        assert_eq!(a("1/12").to_digits(2).unwrap(), (vec![0, 0], vec![0, 1]));
        assert_eq!(a("1/4").to_digits(2).unwrap(), (vec![0, 1], vec![0]));
        assert_eq!(a("1/4").orbit_type(2), (2, 1));
        assert_eq!(a("1/7").orbit_type(2), (0, 3));
    }

    #[test]
    fn distance_ordering() {
        let d1 = a("1/7").circle_distance(&a("6/7"));
        assert_eq!(d1, Distance::new(2, 7));
        assert!(Distance::new(1, 3) > Distance::new(1, 4));
        assert!(Distance::new(u128::MAX / 3, u128::MAX) < Distance::new(1, 2));
    }
}
