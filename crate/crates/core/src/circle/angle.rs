use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;

use super::{CircleError, Precision, RatAngle};

/// An eventually periodic digit expansion `0.pre (per)^∞` in a fixed base.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DigitStream {
    base: u32,
    pre: Vec<u8>,
    per: Vec<u8>,
}

impl DigitStream {
    pub fn new(base: u32, pre: Vec<u8>, per: Vec<u8>) -> Result<Self, CircleError> {
        if !(2..=36).contains(&base) {
            return Err(CircleError::BadBase(base));
        }
        if per.is_empty() || pre.iter().chain(&per).any(|&g| g as u32 >= base) {
            return Err(CircleError::BadAngle(format!(
                "base={base};pre={};per={}",
                digits_to_string(&pre),
                digits_to_string(&per)
            )));
        }
        Ok(DigitStream { base, pre, per })
    }

    pub fn from_rational(a: RatAngle, base: u32) -> Result<Self, CircleError> {
        let (pre, per) = a.to_digits(base)?;
        DigitStream::new(base, pre, per)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn preperiod(&self) -> &[u8] {
        &self.pre
    }

    pub fn period(&self) -> &[u8] {
        &self.per
    }

    pub fn digit(&self, n: usize) -> u8 {
        if n < self.pre.len() {
            self.pre[n]
        } else {
            self.per[(n - self.pre.len()) % self.per.len()]
        }
    }

    /// Left shift by one digit.
    pub fn shift(&self) -> DigitStream {
        if self.pre.is_empty() {
            let mut per = self.per.clone();
            per.rotate_left(1);
            DigitStream {
                base: self.base,
                pre: Vec::new(),
                per,
            }
        } else {
            DigitStream {
                base: self.base,
                pre: self.pre[1..].to_vec(),
                per: self.per.clone(),
            }
        }
    }

    /// Exact value of the expansion.
    pub fn to_rational(&self) -> Result<RatAngle, CircleError> {
        let b = self.base as u128;
        let pow = |k: usize| -> Result<u128, CircleError> {
            (0..k).try_fold(1u128, |acc, _| acc.checked_mul(b).ok_or(CircleError::Overflow))
        };
        let int_of = |ds: &[u8]| -> Result<u128, CircleError> {
            ds.iter().try_fold(0u128, |acc, &g| {
                acc.checked_mul(b)
                    .and_then(|x| x.checked_add(g as u128))
                    .ok_or(CircleError::Overflow)
            })
        };
        let bm1 = pow(self.per.len())? - 1;
        let num = int_of(&self.pre)?
            .checked_mul(bm1)
            .and_then(|x| x.checked_add(int_of(&self.per).ok()?))
            .ok_or(CircleError::Overflow)?;
        let den = pow(self.pre.len())?
            .checked_mul(bm1)
            .ok_or(CircleError::Overflow)?;
        let g = num.gcd(&den).max(1);
        let (num, den) = (num / g, den / g);
        let num = u64::try_from(num % den).map_err(|_| CircleError::Overflow)?;
        let den = u64::try_from(den).map_err(|_| CircleError::Overflow)?;
        RatAngle::new(num, den)
    }
}

/// A Sturmian digit generator: digit `n` is `⌊(n+1)α + ρ⌋ − ⌊nα + ρ⌋`.
///
/// Digits are 0 or 1 and are read in `base` (2 unless stated otherwise), so the
/// stream denotes the angle `Σ digit(n) · base^-(n+1)`. Shifting advances `ρ` by `α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sturmian {
    alpha: RatAngle,
    rho: RatAngle,
    base: u32,
}

impl Sturmian {
    pub fn new(alpha: RatAngle, rho: RatAngle, base: u32) -> Result<Self, CircleError> {
        if !(2..=36).contains(&base) {
            return Err(CircleError::BadBase(base));
        }
        if alpha == RatAngle::ZERO {
            return Err(CircleError::BadAngle(format!(
                "sturmian(alpha={alpha},rho={rho})"
            )));
        }
        Ok(Sturmian { alpha, rho, base })
    }

    pub fn alpha(&self) -> RatAngle {
        self.alpha
    }

    pub fn rho(&self) -> RatAngle {
        self.rho
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    fn floor_at(&self, n: u64) -> u128 {
        let (a, q) = (self.alpha.numer() as u128, self.alpha.denom() as u128);
        let (r, s) = (self.rho.numer() as u128, self.rho.denom() as u128);
        (n as u128 * a * s + r * q) / (q * s)
    }

    pub fn digit(&self, n: usize) -> u8 {
        (self.floor_at(n as u64 + 1) - self.floor_at(n as u64)) as u8
    }

    pub fn digits(&self, n: usize) -> Vec<u8> {
        (0..n).map(|i| self.digit(i)).collect()
    }

    /// The generator after `k` left shifts.
    pub fn shift_n(&self, k: u64) -> Sturmian {
        let (a, q) = (self.alpha.numer() as u128, self.alpha.denom() as u128);
        let (r, s) = (self.rho.numer() as u128, self.rho.denom() as u128);
        let m = q * s;
        let num = (r * q + (k as u128 % m) * (a * s % m) % m) % m;
        let g = num.gcd(&m).max(1);
        let rho = RatAngle::new((num / g) as u64, (m / g) as u64)
            .expect("reduced fraction of nonzero denominator");
        Sturmian {
            alpha: self.alpha,
            rho,
            base: self.base,
        }
    }
}

/// A circle point: exact rational, eventually periodic digit stream, or a
/// generated (not eventually periodic) digit stream.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Angle {
    Rational(RatAngle),
    Periodic(DigitStream),
    Generated(Sturmian),
}

impl From<RatAngle> for Angle {
    fn from(a: RatAngle) -> Self {
        Angle::Rational(a)
    }
}

impl Angle {
    pub fn is_exact(&self) -> bool {
        !matches!(self, Angle::Generated(_))
    }

    /// The exact value, for rational and eventually periodic angles.
    pub fn to_rational(&self) -> Result<RatAngle, CircleError> {
        match self {
            Angle::Rational(a) => Ok(*a),
            Angle::Periodic(s) => s.to_rational(),
            Angle::Generated(_) => Err(CircleError::NotEventuallyPeriodic(self.to_string())),
        }
    }

    /// `σ_d`: multiplication by `d` for rationals, a left shift for streams in base `d`.
    pub fn sigma(&self, d: u32) -> Result<Angle, CircleError> {
        match self {
            Angle::Rational(a) => Ok(Angle::Rational(a.sigma(d))),
            Angle::Periodic(s) if s.base == d => Ok(Angle::Periodic(s.shift())),
            Angle::Periodic(s) => {
                let image = s.to_rational()?.sigma(d);
                Ok(Angle::Periodic(DigitStream::from_rational(image, s.base)?))
            }
            Angle::Generated(g) if g.base == d => Ok(Angle::Generated(g.shift_n(1))),
            Angle::Generated(g) => Err(CircleError::MixedBase {
                stream: g.base,
                degree: d,
            }),
        }
    }

    /// `σ_d^n`.
    pub fn sigma_n(&self, d: u32, n: u64) -> Result<Angle, CircleError> {
        match self {
            Angle::Rational(a) => Ok(Angle::Rational(a.sigma_n(d, n))),
            Angle::Generated(g) if g.base == d => Ok(Angle::Generated(g.shift_n(n))),
            _ => (0..n).try_fold(self.clone(), |a, _| a.sigma(d)),
        }
    }

    /// First `n` digits in `base`.
    pub fn digits(&self, base: u32, n: usize) -> Result<Vec<u8>, CircleError> {
        match self {
            Angle::Rational(a) => Ok(a.digit_prefix(base, n)),
            Angle::Periodic(s) if s.base == base => Ok((0..n).map(|i| s.digit(i)).collect()),
            Angle::Periodic(s) => Ok(s.to_rational()?.digit_prefix(base, n)),
            Angle::Generated(g) if g.base == base => Ok(g.digits(n)),
            Angle::Generated(g) => Err(CircleError::MixedBase {
                stream: g.base,
                degree: base,
            }),
        }
    }

    fn stream_base(&self) -> Option<u32> {
        match self {
            Angle::Generated(g) => Some(g.base),
            _ => None,
        }
    }

    /// Compares positions in `[0, 1)`. Exact angles compare exactly; otherwise the
    /// first `precision` digits decide, and agreement on all of them is reported.
    pub fn cmp_within(&self, other: &Angle, precision: Precision) -> Result<Ordering, CircleError> {
        if self.is_exact() && other.is_exact() {
            return Ok(self.to_rational()?.cmp(&other.to_rational()?));
        }
        let base = match (self.stream_base(), other.stream_base()) {
            (Some(a), Some(b)) if a != b => {
                return Err(CircleError::MixedBase {
                    stream: a,
                    degree: b,
                })
            }
            (Some(a), _) | (_, Some(a)) => a,
            (None, None) => unreachable!("both exact handled above"),
        };
        let n = precision.0 as usize;
        let (x, y) = (self.digits(base, n)?, other.digits(base, n)?);
        match x.cmp(&y) {
            Ordering::Equal => Err(CircleError::Undecided(precision.0)),
            o => Ok(o),
        }
    }
}

fn digit_char(g: u8) -> char {
    std::char::from_digit(g as u32, 36).expect("digit below 36")
}

fn digits_to_string(ds: &[u8]) -> String {
    ds.iter().map(|&g| digit_char(g)).collect()
}

impl fmt::Display for DigitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "base={};pre={};per={}",
            self.base,
            digits_to_string(&self.pre),
            digits_to_string(&self.per)
        )
    }
}

impl fmt::Display for Sturmian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sturmian(alpha={},rho={}", self.alpha, self.rho)?;
        if self.base != 2 {
            write!(f, ",base={}", self.base)?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Angle::Rational(a) => write!(f, "{a}"),
            Angle::Periodic(s) => write!(f, "{s}"),
            Angle::Generated(g) => write!(f, "{g}"),
        }
    }
}

fn parse_digits(s: &str, base: u32, whole: &str) -> Result<Vec<u8>, CircleError> {
    s.chars()
        .map(|c| {
            c.to_digit(36)
                .filter(|&g| g < base && !c.is_ascii_uppercase())
                .map(|g| g as u8)
                .ok_or_else(|| CircleError::BadAngle(whole.to_string()))
        })
        .collect()
}

impl FromStr for DigitStream {
    type Err = CircleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CircleError::BadAngle(s.to_string());
        let mut parts = s.trim().split(';');
        let mut field = |key: &str| -> Result<&str, CircleError> {
            parts
                .next()
                .and_then(|p| p.trim().strip_prefix(key))
                .and_then(|p| p.strip_prefix('='))
                .ok_or_else(bad)
        };
        let base: u32 = field("base")?.trim().parse().map_err(|_| bad())?;
        let pre = field("pre")?;
        let per = field("per")?;
        if parts.next().is_some() || !(2..=36).contains(&base) {
            return Err(bad());
        }
        let pre = parse_digits(pre.trim(), base, s)?;
        let per = parse_digits(per.trim(), base, s)?;
        DigitStream::new(base, pre, per).map_err(|_| bad())
    }
}

impl FromStr for Sturmian {
    type Err = CircleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CircleError::BadAngle(s.to_string());
        let body = s
            .trim()
            .strip_prefix("sturmian(")
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (mut alpha, mut rho, mut base) = (None, None, 2u32);
        for kv in body.split(',') {
            let (k, v) = kv.split_once('=').ok_or_else(bad)?;
            match k.trim() {
                "alpha" if alpha.is_none() => alpha = Some(v.parse::<RatAngle>().map_err(|_| bad())?),
                "rho" if rho.is_none() => rho = Some(v.parse::<RatAngle>().map_err(|_| bad())?),
                "base" => base = v.trim().parse().map_err(|_| bad())?,
                _ => return Err(bad()),
            }
        }
        Sturmian::new(alpha.ok_or_else(bad)?, rho.ok_or_else(bad)?, base).map_err(|_| bad())
    }
}

impl FromStr for Angle {
    type Err = CircleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.starts_with("sturmian") {
            t.parse().map(Angle::Generated)
        } else if t.starts_with("base") {
            t.parse().map(Angle::Periodic)
        } else {
            t.parse().map(Angle::Rational)
        }
    }
}
