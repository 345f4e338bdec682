//! Exact `p`-adic integers as eventually periodic digit streams.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::word::{check_base, parse_digit_list, write_digits, Digits, Word};

/// `preperiod · period^∞`, kept in canonical form: the period is primitive
/// and the preperiod is as short as possible.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DigitStream {
    base: u32,
    preperiod: Vec<u32>,
    period: Vec<u32>,
}

impl DigitStream {
    pub fn new(base: u32, preperiod: &[u32], period: &[u32]) -> Result<Self> {
        check_base(base)?;
        if period.is_empty() {
            return Err(Error::Parse("period must be nonempty".into()));
        }
        if let Some(&digit) = preperiod.iter().chain(period).find(|&&d| d >= base) {
            return Err(Error::InvalidDigit { digit, base });
        }
        let mut stream = DigitStream {
            base,
            preperiod: preperiod.to_vec(),
            period: period.to_vec(),
        };
        stream.canonicalize();
        Ok(stream)
    }

    pub fn periodic(base: u32, period: &[u32]) -> Result<Self> {
        Self::new(base, &[], period)
    }

    fn canonicalize(&mut self) {
        let n = self.period.len();
        if let Some(root) = (1..=n)
            .filter(|d| n.is_multiple_of(*d))
            .find(|&d| (d..n).all(|i| self.period[i] == self.period[i - d]))
        {
            self.period.truncate(root);
        }
        while let Some(&last) = self.preperiod.last() {
            if last != *self.period.last().expect("period is nonempty") {
                break;
            }
            self.preperiod.pop();
            self.period.rotate_right(1);
        }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn preperiod(&self) -> &[u32] {
        &self.preperiod
    }

    pub fn period(&self) -> &[u32] {
        &self.period
    }

    pub fn digit(&self, index: usize) -> u32 {
        match self.preperiod.get(index) {
            Some(&d) => d,
            None => self.period[(index - self.preperiod.len()) % self.period.len()],
        }
    }

    pub fn digits(&self) -> impl Iterator<Item = u32> + '_ {
        (0..).map(|i| self.digit(i))
    }

    /// The first `n` digits: the residue modulo `p^n`.
    pub fn truncate(&self, n: usize) -> Truncation {
        let digits: Digits = (0..n).map(|i| self.digit(i)).collect();
        Truncation(Word::from_digits_unchecked(self.base, digits))
    }

    /// Parses `pre;per`, each part a comma-separated digit list.
    pub fn parse(base: u32, text: &str) -> Result<Self> {
        let (pre, per) = text
            .trim()
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected `pre;per`, found {text:?}")))?;
        let list = |s: &str| -> Result<Vec<u32>> {
            let s = s.trim();
            if s.is_empty() {
                Ok(Vec::new())
            } else {
                parse_digit_list(s)
            }
        };
        Self::new(base, &list(pre)?, &list(per)?)
    }
}

impl fmt::Display for DigitStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_digits(f, &self.preperiod)?;
        f.write_str(";")?;
        write_digits(f, &self.period)
    }
}

/// A residue class modulo `p^n`, given by its first `n` digits.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Truncation(pub Word);

impl Truncation {
    pub fn precision(&self) -> usize {
        self.0.len()
    }

    pub fn word(&self) -> &Word {
        &self.0
    }

    pub fn into_word(self) -> Word {
        self.0
    }
}

impl fmt::Display for Truncation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Anything with a readable digit expansion, finite or not.
pub trait DigitSource {
    fn base(&self) -> u32;
    /// `None` past the end of a finite expansion.
    fn digit_at(&self, index: usize) -> Option<u32>;
}

impl DigitSource for DigitStream {
    fn base(&self) -> u32 {
        self.base
    }

    fn digit_at(&self, index: usize) -> Option<u32> {
        Some(self.digit(index))
    }
}

impl DigitSource for Word {
    fn base(&self) -> u32 {
        Word::base(self)
    }

    fn digit_at(&self, index: usize) -> Option<u32> {
        self.digits().get(index).copied()
    }
}

impl DigitSource for Truncation {
    fn base(&self) -> u32 {
        self.0.base()
    }

    fn digit_at(&self, index: usize) -> Option<u32> {
        self.0.digit_at(index)
    }
}

/// Whether `a` and `b` lie in the same ball of depth `n`, i.e. agree in
/// their first `n` digits. Finite inputs must carry at least `n` digits.
pub fn residue_equal(a: &impl DigitSource, b: &impl DigitSource, n: usize) -> Result<bool> {
    if a.base() != b.base() {
        return Err(Error::BaseMismatch {
            left: a.base(),
            right: b.base(),
        });
    }
    for i in 0..n {
        match (a.digit_at(i), b.digit_at(i)) {
            (Some(x), Some(y)) if x != y => return Ok(false),
            (Some(_), Some(_)) => {}
            _ => {
                return Err(Error::InsufficientPrecision {
                    needed: n,
                    available: i,
                })
            }
        }
    }
    Ok(true)
}

/// The `p`-adic expansion of `numerator / denominator`.
///
/// Each step takes the digit `d ≡ r·den⁻¹ (mod p)` and moves to the
/// remainder `(r − d·den)/p`; remainders stay bounded, so some remainder
/// repeats and the expansion closes into a period.
pub fn rational_to_stream(
    numerator: &BigInt,
    denominator: &BigInt,
    base: u32,
) -> Result<DigitStream> {
    check_base(base)?;
    if denominator.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let g = numerator.gcd(denominator);
    let (mut num, mut den) = (numerator / &g, denominator / &g);
    if num.is_zero() {
        den = BigInt::one();
    }
    if den.is_negative() {
        num = -num;
        den = -den;
    }
    let p = BigInt::from(base);
    let den_mod = den.mod_floor(&p);
    let inverse = mod_inverse(&den_mod, &p).ok_or_else(|| Error::NotAnInteger {
        den: den.to_string(),
        base,
    })?;

    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut digits: Vec<u32> = Vec::new();
    let mut r = num;
    let start = loop {
        if let Some(&pos) = seen.get(&r) {
            break pos;
        }
        seen.insert(r.clone(), digits.len());
        let d = (r.mod_floor(&p) * &inverse).mod_floor(&p);
        r = (&r - &d * &den) / &p;
        digits.push(d.to_u32().expect("digit below base"));
    };
    DigitStream::new(base, &digits[..start], &digits[start..])
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Parses `num/den` (or a bare integer) in decimal.
pub fn parse_rational(text: &str) -> Result<(BigInt, BigInt)> {
    let text = text.trim();
    let (num, den) = text.split_once('/').unwrap_or((text, "1"));
    let parse = |s: &str| {
        s.trim()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("invalid rational {text:?}")))
    };
    Ok((parse(num)?, parse(den)?))
}
