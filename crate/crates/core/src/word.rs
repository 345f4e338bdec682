//! Words over the digit alphabet `{0, …, p−1}`.
//!
//! A word `a_0 a_1 … a_{n−1}` is simultaneously a vertex of the complete
//! `p`-ary tree, the residue `a_0 + a_1 p + … + a_{n−1} p^{n−1}` modulo `p^n`,
//! and the address of the ball of `p`-adic integers whose expansion starts
//! with those digits. Digits are stored little-endian: index `k` multiplies
//! `p^k`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub(crate) type Digits = SmallVec<[u32; 6]>;

pub(crate) fn check_base(base: u32) -> Result<()> {
    if base < 2 {
        return Err(Error::InvalidBase(base));
    }
    Ok(())
}

/// A finite digit string over a fixed base.
#[derive(PartialEq, Eq, Hash)]
pub struct Word {
    base: u32,
    digits: Digits,
}

impl Clone for Word {
    fn clone(&self) -> Self {
        // `from_slice` copies in bulk; the derived clone goes digit by digit.
        Word {
            base: self.base,
            digits: Digits::from_slice(&self.digits),
        }
    }
}

impl Word {
    pub fn new(base: u32, digits: &[u32]) -> Result<Self> {
        check_base(base)?;
        if let Some(&digit) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::InvalidDigit { digit, base });
        }
        Ok(Word {
            base,
            digits: Digits::from_slice(digits),
        })
    }

    /// The empty word ε.
    pub fn empty(base: u32) -> Result<Self> {
        Self::new(base, &[])
    }

    /// Caller guarantees `base >= 2` and every digit is below `base`.
    pub(crate) fn from_digits_unchecked(base: u32, digits: Digits) -> Self {
        debug_assert!(base >= 2 && digits.iter().all(|&d| d < base));
        Word { base, digits }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Appends one digit, returning the child vertex.
    pub fn child(&self, digit: u32) -> Result<Self> {
        if digit >= self.base {
            return Err(Error::InvalidDigit {
                digit,
                base: self.base,
            });
        }
        let mut digits = self.digits.clone();
        digits.push(digit);
        Ok(Word {
            base: self.base,
            digits,
        })
    }

    /// `self · other`.
    pub fn concat(&self, other: &Word) -> Result<Self> {
        same_base(self, other)?;
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        Ok(Word {
            base: self.base,
            digits,
        })
    }

    /// The first `n` digits (or the whole word if shorter).
    pub fn prefix(&self, n: usize) -> Word {
        Word {
            base: self.base,
            digits: Digits::from_slice(&self.digits[..n.min(self.len())]),
        }
    }

    pub(crate) fn push(&mut self, digit: u32) {
        debug_assert!(digit < self.base);
        self.digits.push(digit);
    }

    pub(crate) fn extend_from(&mut self, other: &Word) {
        debug_assert_eq!(self.base, other.base);
        self.digits.extend_from_slice(&other.digits);
    }

    pub(crate) fn clear(&mut self) {
        self.digits.clear();
    }

    /// Parses the comma-separated text form; the empty string is ε.
    pub fn parse(base: u32, text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Self::empty(base);
        }
        let digits = parse_digit_list(text)?;
        Self::new(base, &digits)
    }
}

pub(crate) fn parse_digit_list(text: &str) -> Result<Vec<u32>> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            part.parse::<u32>()
                .map_err(|_| Error::Parse(format!("invalid digit {part:?}")))
        })
        .collect()
}

pub(crate) fn write_digits(f: &mut fmt::Formatter<'_>, digits: &[u32]) -> fmt::Result {
    for (i, d) in digits.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{d}")?;
    }
    Ok(())
}

/// Orders by base, then by ⪯ within a base.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.base
            .cmp(&other.base)
            .then_with(|| shortlex(&self.digits, &other.digits))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Text form: `2,1`; ε is the empty string.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_digits(f, &self.digits)
    }
}

/// Tuple form used in diagnostics: `(2,1)`, or `ε`.
impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("ε");
        }
        f.write_str("(")?;
        write_digits(f, &self.digits)?;
        f.write_str(")")
    }
}

pub(crate) fn same_base(v: &Word, w: &Word) -> Result<()> {
    if v.base != w.base {
        return Err(Error::BaseMismatch {
            left: v.base,
            right: w.base,
        });
    }
    Ok(())
}

/// `ν(w) = a_0 + a_1 p + … + a_{n−1} p^{n−1}`.
pub fn nu(w: &Word) -> BigUint {
    let base = BigUint::from(w.base);
    w.digits
        .iter()
        .rev()
        .fold(BigUint::zero(), |acc, &d| acc * &base + d)
}

/// `ν(w)` when it fits in a machine word.
pub fn nu_u64(w: &Word) -> Option<u64> {
    let base = u64::from(w.base);
    w.digits.iter().rev().try_fold(0u64, |acc, &d| {
        acc.checked_mul(base)?.checked_add(u64::from(d))
    })
}

pub fn is_prefix(v: &Word, w: &Word) -> Result<bool> {
    same_base(v, w)?;
    Ok(w.digits.starts_with(&v.digits))
}

/// Closed ball `B(center, p^{radius_exponent})`: the `p`-adic integers
/// congruent to `center` modulo `p^len`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ball {
    pub base: u32,
    pub center: BigUint,
    pub radius_exponent: i64,
}

impl Ball {
    /// Number of leading digits fixed by the ball.
    pub fn depth(&self) -> usize {
        (1 - self.radius_exponent) as usize
    }

    /// Residue-level membership: does `x` (given to at least `depth` digits) lie in the ball?
    pub fn contains_residue(&self, x: &BigUint) -> bool {
        let modulus = BigUint::from(self.base).pow(self.depth() as u32);
        x % modulus == self.center
    }
}

pub fn ball_of(w: &Word) -> Ball {
    Ball {
        base: w.base,
        center: nu(w),
        radius_exponent: 1 - w.len() as i64,
    }
}

/// `B_v ⊇ B_w`, decided by the prefix relation.
pub fn ball_contains(v: &Word, w: &Word) -> Result<bool> {
    is_prefix(v, w)
}

/// Length-then-lexicographic comparison of digit strings.
pub(crate) fn shortlex(a: &[u32], b: &[u32]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// The total order ⪯: shorter words first, equal lengths lexicographically.
pub fn word_cmp(v: &Word, w: &Word) -> Result<Ordering> {
    same_base(v, w)?;
    Ok(shortlex(&v.digits, &w.digits))
}

/// All words of length `len` over `base`, in ⪯ (lexicographic) order.
pub fn words_of_length(base: u32, len: usize) -> impl Iterator<Item = Word> {
    let mut current: Option<Digits> = Some(smallvec::smallvec![0; len]);
    std::iter::from_fn(move || {
        let out = current.clone()?;
        // Odometer with the last digit changing fastest.
        let mut next = out.clone();
        let mut i = len;
        current = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < base {
                break Some(next);
            }
            next[i] = 0;
        };
        Some(Word::from_digits_unchecked(base, out))
    })
}
