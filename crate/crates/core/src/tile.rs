//! Tiles of the `p`-ary tree: finite rooted subtrees in which every internal
//! node has all `p` children. A tile is stored as its leaf set, which is a
//! complete prefix code; the internal nodes are its proper prefixes.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{Error, Result, TileViolation};
use crate::word::{check_base, shortlex, words_of_length, Digits, Word};

/// Default bound on the number of words any single construction may generate.
pub const DEFAULT_CAP: usize = 10_000_000;

/// A complete prefix code over `{0, …, p−1}` other than `{ε}`.
///
/// Equality is set equality of leaves; leaves are always held in ⪯ order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tile {
    base: u32,
    leaves: Vec<Word>,
}

impl Tile {
    pub fn new(base: u32, leaves: impl IntoIterator<Item = Word>) -> Result<Self> {
        check_base(base)?;
        let mut leaves: Vec<Word> = leaves.into_iter().collect();
        diagnose(base, &leaves)?;
        leaves.sort_by(|a, b| shortlex(a.digits(), b.digits()));
        Ok(Tile { base, leaves })
    }

    pub fn from_digit_lists(base: u32, leaves: &[&[u32]]) -> Result<Self> {
        let words = leaves
            .iter()
            .map(|d| Word::new(base, d))
            .collect::<Result<Vec<_>>>()?;
        Self::new(base, words)
    }

    /// Caller guarantees `leaves` is a complete prefix code in ⪯ order.
    pub(crate) fn from_sorted_unchecked(base: u32, leaves: Vec<Word>) -> Self {
        debug_assert!(verify_tile(base, &leaves));
        debug_assert!(leaves
            .windows(2)
            .all(|w| shortlex(w[0].digits(), w[1].digits()) == Ordering::Less));
        Tile { base, leaves }
    }

    /// The tile obtained by splitting only the root: all words of length 1.
    pub fn single_split(base: u32) -> Result<Self> {
        check_base(base)?;
        Ok(Tile {
            base,
            leaves: words_of_length(base, 1).collect(),
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Leaves in ⪯ order.
    pub fn leaves(&self) -> &[Word] {
        &self.leaves
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves.len()
    }

    /// Number of complete splittings `s`, so that `#L(S) = 1 + (p−1)s`.
    pub fn splitting_count(&self) -> usize {
        (self.leaves.len() - 1) / (self.base as usize - 1)
    }

    pub fn max_leaf_len(&self) -> usize {
        self.leaves.last().map_or(0, Word::len)
    }

    pub fn min_leaf_len(&self) -> usize {
        self.leaves.first().map_or(0, Word::len)
    }

    /// Position of `word` among the leaves, if it is one.
    pub fn leaf_index(&self, word: &Word) -> Option<usize> {
        if word.base() != self.base {
            return None;
        }
        self.leaves
            .binary_search_by(|l| shortlex(l.digits(), word.digits()))
            .ok()
    }

    /// The non-leaf vertices (proper prefixes of leaves), in ⪯ order.
    pub fn internal_nodes(&self) -> Vec<Word> {
        let mut nodes: BTreeSet<(usize, Digits)> = BTreeSet::new();
        for leaf in &self.leaves {
            for k in 0..leaf.len() {
                nodes.insert((k, Digits::from_slice(&leaf.digits()[..k])));
            }
        }
        nodes
            .into_iter()
            .map(|(_, d)| Word::from_digits_unchecked(self.base, d))
            .collect()
    }

    /// Serializes to the line-oriented tile file format.
    pub fn to_file_string(&self) -> String {
        let mut out = format!("base {}\n", self.base);
        for leaf in &self.leaves {
            out.push_str(&leaf.to_string());
            out.push('\n');
        }
        out
    }

    pub fn parse_file(text: &str) -> Result<Self> {
        let (base, leaves) = parse_leaf_file(text)?;
        Self::new(base, leaves)
    }
}

impl fmt::Debug for Tile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tile(base {}, ", self.base)?;
        f.debug_set().entries(&self.leaves).finish()?;
        f.write_str(")")
    }
}

/// Reads a tile file without validating that the words form a tile.
pub fn parse_leaf_file(text: &str) -> Result<(u32, Vec<Word>)> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Parse("empty tile file".into()))?;
    let base = header
        .strip_prefix("base")
        .map(str::trim)
        .and_then(|b| b.parse::<u32>().ok())
        .ok_or_else(|| Error::Parse(format!("expected `base <p>`, found {header:?}")))?;
    check_base(base)?;
    let leaves = lines
        .map(|line| Word::parse(base, line))
        .collect::<Result<Vec<_>>>()?;
    Ok((base, leaves))
}

/// Reports the first condition that keeps `leaves` from being the leaf set
/// of a completely split subtree.
///
/// Walks the leaves in lexicographic order, tracking the next vertex that
/// has not yet been covered; each leaf must sit at the leftmost descendant
/// of that vertex.
pub fn diagnose(base: u32, leaves: &[Word]) -> Result<(), TileViolation> {
    if let Some(word) = leaves.iter().find(|l| l.base() != base) {
        return Err(TileViolation::MixedBase {
            word: word.clone(),
            expected: base,
            found: word.base(),
        });
    }
    scan(base, leaves).map_err(|fault| fault.into_violation(base, leaves))
}

/// Complete-splitting check: do `leaves` form the leaf set of a nontrivial
/// finite subtree in which every internal node has all `p` children?
pub fn verify_tile(base: u32, leaves: &[Word]) -> bool {
    verify_leaves(base, leaves)
}

/// Read access to a leaf for the tile checks. The exhaustive search uses a
/// compact leaf that caches its value and sort order; [`Word`] computes them.
pub(crate) trait LeafView {
    fn view_base(&self) -> u32;
    fn view_digits(&self) -> &[u32];

    /// `ν` of the digits, wrapping on overflow.
    fn view_value(&self) -> usize {
        let p = self.view_base() as usize;
        self.view_digits()
            .iter()
            .rev()
            .fold(0usize, |v, &d| v.wrapping_mul(p).wrapping_add(d as usize))
    }

    /// Strict lexicographic order on digits, a proper prefix first.
    fn view_lex_less(&self, other: &Self) -> bool {
        lex_less(self.view_digits(), other.view_digits())
    }
}

impl LeafView for Word {
    fn view_base(&self) -> u32 {
        self.base()
    }

    fn view_digits(&self) -> &[u32] {
        self.digits()
    }
}

pub(crate) fn verify_leaves<L: LeafView>(base: u32, leaves: &[L]) -> bool {
    if base < 2 || leaves.first().is_some_and(|l| l.view_base() != base) {
        return false;
    }
    let mut sorted = true;
    for w in leaves.windows(2) {
        if w[1].view_base() != base {
            return false;
        }
        sorted &= w[0].view_lex_less(&w[1]);
    }
    scan_in_order(base, leaves, sorted).is_ok()
}

/// A violation found by [`scan`], borrowing from the leaf list.
enum Fault<'a, L> {
    Empty,
    Trivial,
    Duplicate(&'a L),
    NotPrefixFree {
        prefix: &'a L,
        word: &'a L,
    },
    /// The first vertex after `after` (or the root's first child) that no
    /// leaf covers.
    Uncovered {
        after: Option<&'a L>,
    },
}

impl Fault<'_, Word> {
    fn into_violation(self, base: u32, all: &[Word]) -> TileViolation {
        match self {
            Fault::Empty => TileViolation::Empty,
            Fault::Trivial => TileViolation::Trivial,
            Fault::Duplicate(w) => TileViolation::Duplicate(w.clone()),
            Fault::NotPrefixFree { prefix, word } => TileViolation::NotPrefixFree {
                prefix: prefix.clone(),
                word: word.clone(),
            },
            Fault::Uncovered { after } => {
                let mut digits = after
                    .and_then(|prev| successor(base, prev.digits()))
                    .unwrap_or_default();
                let depth = all.iter().map(Word::len).max().unwrap_or(0);
                digits.resize(depth.max(digits.len()), 0);
                TileViolation::Uncovered(Word::from_digits_unchecked(base, digits))
            }
        }
    }
}

/// The first vertex after `w` in preorder that does not extend `w`; `None`
/// when `w` is the last word of its length.
fn successor(base: u32, w: &[u32]) -> Option<Digits> {
    let t = w.iter().rposition(|&d| d + 1 < base)?;
    let mut next = Digits::from_slice(&w[..=t]);
    next[t] += 1;
    Some(next)
}

fn lex_less(a: &[u32], b: &[u32]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x != y {
            return x < y;
        }
    }
    a.len() < b.len()
}

/// Slice equality without a `memcmp` call; leaves are short.
fn same(a: &[u32], b: &[u32]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x == y)
}

fn scan(base: u32, leaves: &[Word]) -> Result<(), Fault<'_, Word>> {
    let sorted = leaves.windows(2).all(|w| w[0].digits() < w[1].digits());
    scan_in_order(base, leaves, sorted)
}

fn scan_in_order<L: LeafView>(base: u32, leaves: &[L], sorted: bool) -> Result<(), Fault<'_, L>> {
    if sorted {
        scan_sorted(base, leaves.iter())
    } else {
        let mut sorted: Vec<&L> = leaves.iter().collect();
        sorted.sort_by(|a, b| a.view_digits().cmp(b.view_digits()));
        scan_sorted(base, sorted.into_iter())
    }
}

fn scan_sorted<'a, L: LeafView>(
    base: u32,
    mut sorted: impl Iterator<Item = &'a L>,
) -> Result<(), Fault<'a, L>> {
    let Some(first) = sorted.next() else {
        return Err(Fault::Empty);
    };
    if first.view_digits().is_empty() {
        return match sorted.next() {
            None => Err(Fault::Trivial),
            Some(next) if next.view_digits().is_empty() => Err(Fault::Duplicate(first)),
            Some(next) => Err(Fault::NotPrefixFree {
                prefix: first,
                word: next,
            }),
        };
    }
    if first.view_digits().iter().any(|&d| d != 0) {
        return Err(Fault::Uncovered { after: None });
    }

    // The cursor is the first vertex after `prev` in preorder that is not a
    // descendant of it: `prev[..t]` followed by `prev[t] + 1`, with `t` the
    // last position holding a digit below `p − 1`. It is held implicitly.
    let top = base - 1;
    let mut prev = first;
    for leaf in sorted {
        let (p, digits) = (prev.view_digits(), leaf.view_digits());
        let Some(t) = p.iter().rposition(|&d| d < top) else {
            // `prev` is the last word of its length in lexicographic order.
            return Err(if same(p, digits) {
                Fault::Duplicate(leaf)
            } else {
                Fault::NotPrefixFree {
                    prefix: prev,
                    word: leaf,
                }
            });
        };
        if digits.len() > t && same(&digits[..t], &p[..t]) && digits[t] == p[t] + 1 {
            if digits[t + 1..].iter().any(|&d| d != 0) {
                return Err(Fault::Uncovered { after: Some(prev) });
            }
        } else if digits.len() >= p.len() && same(&digits[..p.len()], p) {
            return Err(if digits.len() == p.len() {
                Fault::Duplicate(leaf)
            } else {
                Fault::NotPrefixFree {
                    prefix: prev,
                    word: leaf,
                }
            });
        } else if digits.len() <= t && same(digits, &p[..digits.len()]) {
            return Err(Fault::NotPrefixFree {
                prefix: leaf,
                word: prev,
            });
        } else {
            return Err(Fault::Uncovered { after: Some(prev) });
        }
        prev = leaf;
    }
    if prev.view_digits().iter().all(|&d| d == top) {
        Ok(())
    } else {
        Err(Fault::Uncovered { after: Some(prev) })
    }
}

/// Exhaustive leaf-partition check: with `D` the maximal leaf length, every
/// one of the `p^D` words of length `D` must have exactly one leaf as prefix.
///
/// Errors with [`Error::CapExceeded`] when `p^D > cap`.
pub fn verify_tile_oracle(base: u32, leaves: &[Word], cap: usize) -> Result<bool> {
    oracle_leaves(base, leaves, cap)
}

pub(crate) fn oracle_leaves<L: LeafView>(base: u32, leaves: &[L], cap: usize) -> Result<bool> {
    check_base(base)?;
    let p = base as usize;
    let mut depth = 0;
    for leaf in leaves {
        if leaf.view_base() != base {
            return Ok(false);
        }
        depth = depth.max(leaf.view_digits().len());
    }
    if depth == 0 {
        // No leaves, or only ε: trivial.
        return Ok(false);
    }
    let total = p
        .checked_pow(depth as u32)
        .filter(|&t| t <= cap)
        .ok_or_else(|| Error::CapExceeded {
            what: "leaf-partition oracle",
            needed: (base as u128).saturating_pow(depth as u32),
            cap,
        })?;
    // Words of length D are indexed by their value ν; those extending a leaf
    // ℓ of length k are exactly ν(ℓ) + p^k·t for 0 ≤ t < p^{D−k}.
    // Values wrap harmlessly: they are only used once p^D fits the cap.
    if total <= 64 {
        let full = u64::MAX >> (64 - total);
        // comb[k]: one bit at every multiple of p^k below p^D, built from
        // comb[k+1] since those multiples are j·p^k + (multiples of p^{k+1}).
        let mut comb = [0u64; 7];
        comb[depth] = 1;
        let mut stride = total;
        for k in (0..depth).rev() {
            stride /= p;
            comb[k] = (0..p).fold(0, |bits, j| bits | comb[k + 1] << (j * stride));
        }
        let mut hit = 0u64;
        for leaf in leaves {
            let cells = comb[leaf.view_digits().len()] << leaf.view_value();
            if hit & cells != 0 {
                return Ok(false);
            }
            hit |= cells;
        }
        return Ok(hit == full);
    }
    let mut hit = vec![0u64; total.div_ceil(64)];
    for leaf in leaves {
        let (mut index, stride) = (leaf.view_value(), p.pow(leaf.view_digits().len() as u32));
        while index < total {
            let (slot, bit) = (index / 64, 1u64 << (index % 64));
            if hit[slot] & bit != 0 {
                return Ok(false);
            }
            hit[slot] |= bit;
            index += stride;
        }
    }
    let (full, tail) = (total / 64, total % 64);
    Ok(
        hit[..full].iter().all(|&w| w == u64::MAX)
            && (tail == 0 || hit[full] == (1u64 << tail) - 1),
    )
}

/// Kraft sum `Σ p^{−|ℓ|}` as an exact fraction `numerator / p^D`.
pub fn kraft_sum(base: u32, leaves: &[Word]) -> (BigUint, BigUint) {
    let depth = leaves.iter().map(Word::len).max().unwrap_or(0);
    let b = BigUint::from(base);
    let numerator = leaves.iter().map(|l| b.pow((depth - l.len()) as u32)).sum();
    (numerator, b.pow(depth as u32))
}

/// Prefix-free with Kraft sum exactly 1, and not `{ε}`.
pub fn is_complete_by_kraft(base: u32, leaves: &[Word]) -> bool {
    if leaves.iter().any(|l| l.base() != base) || leaves.iter().all(Word::is_empty) {
        return false;
    }
    let mut sorted: Vec<&[u32]> = leaves.iter().map(Word::digits).collect();
    sorted.sort();
    let prefix_free = sorted.windows(2).all(|w| !w[1].starts_with(w[0]));
    let (num, den) = kraft_sum(base, leaves);
    prefix_free && num == den
}

/// `1 + (p−1)s`.
pub fn leaf_count(base: u32, splittings: u64) -> u128 {
    1 + (base as u128 - 1) * splittings as u128
}

/// Parameters of the explicit tile for a given splitting count `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitTileParams {
    pub splittings: u64,
    /// `L`: the maximal leaf length.
    pub max_len: usize,
    /// `s_{L−1}`: how many words of length `L−1` are split.
    pub penultimate_splits: u64,
    /// `n_{L−1}`: leaves of length `L−1`.
    pub n_short: u64,
    /// `n_L`: leaves of length `L`.
    pub n_long: u64,
    /// `A`: the words of length `L−1` kept as leaves.
    pub kept: Vec<Word>,
    /// `B`: the words of length `L−1` that are split.
    pub split: Vec<Word>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitTile {
    pub tile: Tile,
    pub params: ExplicitTileParams,
}

/// The tile built by splitting vertices in ⪯ order until `s` splittings have
/// been made: every vertex of length `< L−1`, then the first `s_{L−1}` words
/// of length `L−1`. Its leaves are `A ⊔ B·Σ_p`.
pub fn explicit_tile(base: u32, splittings: u64) -> Result<ExplicitTile> {
    check_base(base)?;
    if splittings == 0 {
        return Err(Error::InvalidSplitCount);
    }
    let p = base as u128;
    let s = splittings as u128;
    // cumulative = 1 + p + … + p^{L−2}
    let mut cumulative: u128 = 0;
    let mut level: u128 = 1;
    let mut max_len = 1usize;
    while s > cumulative + level {
        cumulative += level;
        level *= p;
        max_len += 1;
    }
    let penultimate_splits = (s - cumulative) as u64;
    let width = level as u64;

    let mut kept = Vec::new();
    let mut split = Vec::new();
    for (i, word) in words_of_length(base, max_len - 1).enumerate() {
        if (i as u64) < penultimate_splits {
            split.push(word);
        } else {
            kept.push(word);
        }
    }
    let mut leaves = kept.clone();
    for word in &split {
        for d in 0..base {
            let mut child = word.clone();
            child.push(d);
            leaves.push(child);
        }
    }
    let params = ExplicitTileParams {
        splittings,
        max_len,
        penultimate_splits,
        n_short: width - penultimate_splits,
        n_long: u64::from(base) * penultimate_splits,
        kept,
        split,
    };
    Ok(ExplicitTile {
        tile: Tile::from_sorted_unchecked(base, leaves),
        params,
    })
}

/// A positive solution `(s, s′)` of `(p−1)s = (q−1)s′`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiophantineSolution {
    pub p: u32,
    pub q: u32,
    /// `gcd(p−1, q−1)`.
    pub d: u64,
    pub m: u64,
    pub s: u64,
    pub s_prime: u64,
}

impl DiophantineSolution {
    /// The common leaf count `1 + (p−1)s = 1 + (q−1)s′`.
    pub fn leaf_count(&self) -> u128 {
        leaf_count(self.p, self.s)
    }
}

/// The `m`-th member `s = (q−1)m/d`, `s′ = (p−1)m/d` of the solution family.
pub fn solve_diophantine(p: u32, q: u32, m: u64) -> Result<DiophantineSolution> {
    check_base(p)?;
    check_base(q)?;
    if m == 0 {
        return Err(Error::InvalidFamilyIndex);
    }
    let (a, b) = (u64::from(p) - 1, u64::from(q) - 1);
    let d = a.gcd(&b);
    Ok(DiophantineSolution {
        p,
        q,
        d,
        m,
        s: b / d * m,
        s_prime: a / d * m,
    })
}

fn check_level_size(tile: &Tile, n: usize, cap: usize, what: &'static str) -> Result<()> {
    let needed = (tile.leaf_count() as u128).checked_pow(n as u32);
    match needed {
        Some(needed) if needed <= cap as u128 => Ok(()),
        _ => Err(Error::CapExceeded {
            what,
            needed: needed.unwrap_or(u128::MAX),
            cap,
        }),
    }
}

/// `L_n(S)`: all concatenations of `n` leaves, in ⪯ order. `L_0(S) = {ε}`.
pub fn partition_at_level(tile: &Tile, n: usize, cap: usize) -> Result<Vec<Word>> {
    check_level_size(tile, n, cap, "partition level")?;
    let mut level = vec![Word::from_digits_unchecked(tile.base, Digits::new())];
    for _ in 0..n {
        let mut next = Vec::with_capacity(level.len() * tile.leaf_count());
        for prefix in &level {
            for leaf in &tile.leaves {
                let mut word = prefix.clone();
                word.extend_from(leaf);
                next.push(word);
            }
        }
        level = next;
    }
    level.sort_by(|a, b| shortlex(a.digits(), b.digits()));
    Ok(level)
}

/// `S_n`, whose leaves are `L_{n+1}(S)`.
pub fn replicate(tile: &Tile, n: usize, cap: usize) -> Result<Tile> {
    check_level_size(tile, n + 1, cap, "replicated tile")?;
    let leaves = partition_at_level(tile, n + 1, cap)?;
    Ok(Tile::from_sorted_unchecked(tile.base, leaves))
}

/// All tiles with at most `max_leaves` leaves, ordered by leaf count and then
/// by generation order. Generated as full `p`-ary trees: a tile with `i`
/// splittings is a root split whose `p` subtrees carry `i−1` splittings in
/// total.
pub fn enumerate_tiles(base: u32, max_leaves: usize, cap: usize) -> Result<Vec<Tile>> {
    check_base(base)?;
    let max_splits = max_leaves.saturating_sub(1) / (base as usize - 1);
    let mut shapes = ShapeTable::new(base as usize);
    let total: u128 = (1..=max_splits).map(|i| shapes.count(i)).sum();
    if total > cap as u128 {
        return Err(Error::CapExceeded {
            what: "tile enumeration",
            needed: total,
            cap,
        });
    }
    let mut tiles = Vec::with_capacity(total as usize);
    for i in 1..=max_splits {
        for leaves in shapes.generate(i) {
            let mut words: Vec<Word> = leaves
                .into_iter()
                .map(|d| Word::from_digits_unchecked(base, d))
                .collect();
            words.sort_by(|a, b| shortlex(a.digits(), b.digits()));
            tiles.push(Tile::from_sorted_unchecked(base, words));
        }
    }
    Ok(tiles)
}

/// Tiles with exactly `leaves` leaves.
pub fn enumerate_tiles_with_leaves(base: u32, leaves: usize, cap: usize) -> Result<Vec<Tile>> {
    Ok(enumerate_tiles(base, leaves, cap)?
        .into_iter()
        .filter(|t| t.leaf_count() == leaves)
        .collect())
}

/// Memoized full `p`-ary tree shapes, keyed by number of internal nodes.
struct ShapeTable {
    arity: usize,
    counts: HashMap<usize, u128>,
}

impl ShapeTable {
    fn new(arity: usize) -> Self {
        ShapeTable {
            arity,
            counts: HashMap::new(),
        }
    }

    fn count(&mut self, internal: usize) -> u128 {
        if internal == 0 {
            return 1;
        }
        if let Some(&c) = self.counts.get(&internal) {
            return c;
        }
        let mut total: u128 = 0;
        for parts in compositions(internal - 1, self.arity) {
            let product = parts
                .iter()
                .try_fold(1u128, |acc, &k| acc.checked_mul(self.count(k)));
            total = total.saturating_add(product.unwrap_or(u128::MAX));
        }
        self.counts.insert(internal, total);
        total
    }

    /// Leaf sets (relative to the subtree root) in lexicographic leaf order.
    fn generate(&self, internal: usize) -> Vec<Vec<Digits>> {
        if internal == 0 {
            return vec![vec![Digits::new()]];
        }
        let mut out = Vec::new();
        for parts in compositions(internal - 1, self.arity) {
            let children: Vec<Vec<Vec<Digits>>> = parts.iter().map(|&k| self.generate(k)).collect();
            let mut acc: Vec<Vec<Digits>> = vec![Vec::new()];
            for (digit, options) in children.iter().enumerate() {
                let mut next = Vec::with_capacity(acc.len() * options.len());
                for partial in &acc {
                    for option in options {
                        let mut leaves = partial.clone();
                        leaves.extend(option.iter().map(|rel| {
                            let mut d = Digits::new();
                            d.push(digit as u32);
                            d.extend_from_slice(rel);
                            d
                        }));
                        next.push(leaves);
                    }
                }
                acc = next;
            }
            out.extend(acc);
        }
        out
    }
}

/// Ordered ways to write `total` as a sum of `parts` non-negative integers.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn words(base: u32, lists: &[&[u32]]) -> Vec<Word> {
        lists.iter().map(|d| Word::new(base, d).unwrap()).collect()
    }

    fn reference_source() -> Vec<Word> {
        words(3, &[&[1], &[2], &[0, 0], &[0, 1], &[0, 2]])
    }

    #[test]
    fn verify_examples() {
        assert!(verify_tile(2, &words(2, &[&[0], &[1]])));
        assert!(!verify_tile(2, &words(2, &[&[0], &[1, 0]])));
        assert!(verify_tile(3, &reference_source()));
        assert!(!verify_tile(2, &words(2, &[&[]])));
        assert!(!verify_tile(2, &[]));
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            verify_tile_oracle(3, &reference_source(), DEFAULT_CAP),
            Ok(true)
        );
        assert_eq!(
            verify_tile_oracle(2, &words(2, &[&[0]]), DEFAULT_CAP),
            Ok(false)
        );
        assert_eq!(
            verify_tile_oracle(2, &words(2, &[&[0], &[1], &[1, 0]]), DEFAULT_CAP),
            Ok(false)
        );
        assert_eq!(
            verify_tile_oracle(2, &words(2, &[&[]]), DEFAULT_CAP),
            Ok(false)
        );
    }

    #[test]
    fn oracle_cap() {
        let deep = words(2, &[&[0; 12], &[1]]);
        assert!(matches!(
            verify_tile_oracle(2, &deep, 1000),
            Err(Error::CapExceeded { needed: 4096, .. })
        ));
    }

    #[test]
    fn diagnose_witnesses() {
        assert_eq!(
            diagnose(2, &words(2, &[&[0]])),
            Err(TileViolation::Uncovered(Word::new(2, &[1]).unwrap()))
        );
        assert_eq!(
            diagnose(2, &words(2, &[&[0], &[0, 1]])),
            Err(TileViolation::NotPrefixFree {
                prefix: Word::new(2, &[0]).unwrap(),
                word: Word::new(2, &[0, 1]).unwrap(),
            })
        );
        assert_eq!(
            diagnose(2, &words(2, &[&[0], &[1, 0]])),
            Err(TileViolation::Uncovered(Word::new(2, &[1, 1]).unwrap()))
        );
        assert_eq!(
            diagnose(2, &words(2, &[&[1], &[0], &[1]])),
            Err(TileViolation::Duplicate(Word::new(2, &[1]).unwrap()))
        );
        assert_eq!(diagnose(2, &words(2, &[&[]])), Err(TileViolation::Trivial));
        assert_eq!(diagnose(2, &[]), Err(TileViolation::Empty));
        assert!(matches!(
            diagnose(2, &words(3, &[&[0], &[1]])),
            Err(TileViolation::MixedBase { .. })
        ));
        // A leaf that is a proper prefix of an earlier-scanned position.
        assert!(matches!(
            diagnose(2, &words(2, &[&[0, 0], &[0, 1], &[1], &[1, 1]])),
            Err(TileViolation::NotPrefixFree { .. })
        ));
        assert!(matches!(
            diagnose(3, &words(3, &[&[0, 0], &[0]])),
            Err(TileViolation::NotPrefixFree { .. })
        ));
    }

    #[test]
    fn tile_accessors() {
        let tile = Tile::new(3, reference_source()).unwrap();
        assert_eq!(tile.leaf_count(), 5);
        assert_eq!(tile.splitting_count(), 2);
        assert_eq!(tile.max_leaf_len(), 2);
        assert_eq!(tile.min_leaf_len(), 1);
        assert_eq!(tile.internal_nodes(), words(3, &[&[], &[0]]));
        assert_eq!(tile.leaf_index(&Word::new(3, &[0, 0]).unwrap()), Some(2));
        assert_eq!(tile.leaf_index(&Word::new(3, &[0]).unwrap()), None);
        let order: Vec<String> = tile.leaves().iter().map(|w| w.to_string()).collect();
        assert_eq!(order, ["1", "2", "0,0", "0,1", "0,2"]);
    }

    #[test]
    fn file_format() {
        let tile = Tile::new(3, reference_source()).unwrap();
        let text = tile.to_file_string();
        assert_eq!(text, "base 3\n1\n2\n0,0\n0,1\n0,2\n");
        let shuffled = "base 3\n\n0,2\n1\n0,0\n2\n0,1\n";
        assert_eq!(Tile::parse_file(shuffled).unwrap(), tile);
        assert!(matches!(
            Tile::parse_file("bass 3\n1"),
            Err(Error::Parse(_))
        ));
        assert!(matches!(
            Tile::parse_file("base 2\n0\n"),
            Err(Error::NotATile(TileViolation::Uncovered(_)))
        ));
    }

    #[test]
    fn explicit_examples() {
        let e = explicit_tile(3, 2).unwrap();
        assert_eq!(e.tile, Tile::new(3, reference_source()).unwrap());
        assert_eq!(e.params.max_len, 2);
        assert_eq!(e.params.kept, words(3, &[&[1], &[2]]));
        assert_eq!(e.params.split, words(3, &[&[0]]));
        assert_eq!((e.params.n_short, e.params.n_long), (2, 3));

        let e = explicit_tile(5, 1).unwrap();
        assert_eq!(e.tile, Tile::single_split(5).unwrap());
        assert_eq!(e.params.max_len, 1);
        assert!(e.params.kept.is_empty());
        assert_eq!(e.params.split, words(5, &[&[]]));
        assert_eq!((e.params.n_short, e.params.n_long), (0, 5));

        let e = explicit_tile(3, 5).unwrap();
        assert_eq!(e.params.max_len, 3);
        assert_eq!(e.params.penultimate_splits, 1);
        assert_eq!(e.tile.leaf_count(), 11);
        let mut expected: Vec<Word> = words_of_length(3, 2)
            .filter(|w| w.digits() != [0, 0])
            .collect();
        expected.extend(words(3, &[&[0, 0, 0], &[0, 0, 1], &[0, 0, 2]]));
        assert_eq!(e.tile, Tile::new(3, expected).unwrap());
        assert_eq!(
            verify_tile_oracle(3, e.tile.leaves(), DEFAULT_CAP),
            Ok(true)
        );

        assert_eq!(explicit_tile(3, 0), Err(Error::InvalidSplitCount));
    }

    #[test]
    fn explicit_full_levels() {
        // s = 1 + p + … + p^{L−1}: every word of length L−1 is split.
        let e = explicit_tile(2, 3).unwrap();
        assert_eq!(e.params.max_len, 2);
        assert!(e.params.kept.is_empty());
        assert_eq!(e.tile.leaves(), words_of_length(2, 2).collect::<Vec<_>>());
    }

    #[test]
    fn explicit_tile_properties() {
        for base in [2u32, 3, 5, 7] {
            for s in 1..=50u64 {
                let e = explicit_tile(base, s).unwrap();
                let p = &e.params;
                assert_eq!(e.tile.leaf_count() as u128, leaf_count(base, s));
                assert!(verify_tile(base, e.tile.leaves()));
                assert!(is_complete_by_kraft(base, e.tile.leaves()));
                let lengths: BTreeSet<usize> = e.tile.leaves().iter().map(Word::len).collect();
                assert!(lengths.len() <= 2);
                assert!(lengths
                    .iter()
                    .all(|&l| l + 1 >= p.max_len && l <= p.max_len));
                assert!(lengths.contains(&p.max_len));
                let width = u64::from(base).pow(p.max_len as u32 - 1);
                assert_eq!(p.n_short, width - p.penultimate_splits);
                assert_eq!(p.n_long, u64::from(base) * p.penultimate_splits);
                assert_eq!(p.n_short + p.n_long, 1 + (u64::from(base) - 1) * s);
                let below: u64 = (0..p.max_len as u32 - 1)
                    .map(|k| u64::from(base).pow(k))
                    .sum();
                assert!(below < s && s <= below + width);
            }
        }
    }

    #[test]
    fn leaf_count_examples() {
        assert_eq!(leaf_count(3, 2), 5);
        assert_eq!(leaf_count(2, 1), 2);
        assert_eq!(leaf_count(5, 1), 5);
    }

    #[test]
    fn diophantine_examples() {
        let sol = solve_diophantine(3, 5, 1).unwrap();
        assert_eq!((sol.d, sol.s, sol.s_prime), (2, 2, 1));
        assert_eq!(sol.leaf_count(), 5);
        let sol = solve_diophantine(7, 7, 1).unwrap();
        assert_eq!((sol.s, sol.s_prime), (1, 1));
        let sol = solve_diophantine(2, 3, 1).unwrap();
        assert_eq!((sol.d, sol.s, sol.s_prime), (1, 2, 1));
        assert_eq!(leaf_count(2, sol.s), leaf_count(3, sol.s_prime));
        assert_eq!(solve_diophantine(2, 3, 0), Err(Error::InvalidFamilyIndex));
        assert_eq!(solve_diophantine(1, 3, 1), Err(Error::InvalidBase(1)));
    }

    #[test]
    fn replicate_examples() {
        let tile = Tile::new(3, reference_source()).unwrap();
        assert_eq!(replicate(&tile, 0, DEFAULT_CAP).unwrap(), tile);
        let s1 = replicate(&tile, 1, DEFAULT_CAP).unwrap();
        assert_eq!(s1.leaf_count(), 25);
        assert!(verify_tile(3, s1.leaves()));
        let binary = Tile::single_split(2).unwrap();
        let s2 = replicate(&binary, 2, DEFAULT_CAP).unwrap();
        assert_eq!(s2.leaves(), words_of_length(2, 3).collect::<Vec<_>>());
        assert!(matches!(
            replicate(&tile, 20, DEFAULT_CAP),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn replicate_small_tiles() {
        for tile in enumerate_tiles(2, 4, DEFAULT_CAP).unwrap() {
            for n in 0..=3 {
                let r = replicate(&tile, n, DEFAULT_CAP).unwrap();
                assert!(verify_tile(2, r.leaves()));
                assert_eq!(r.leaf_count(), tile.leaf_count().pow(n as u32 + 1));
            }
        }
    }

    #[test]
    fn partition_examples() {
        let tile = Tile::new(3, reference_source()).unwrap();
        assert_eq!(
            partition_at_level(&tile, 1, DEFAULT_CAP).unwrap(),
            tile.leaves()
        );
        let level2 = partition_at_level(&tile, 2, DEFAULT_CAP).unwrap();
        assert_eq!(level2.len(), 25);
        for (i, v) in level2.iter().enumerate() {
            for w in &level2[i + 1..] {
                assert!(!w.digits().starts_with(v.digits()));
                assert!(!v.digits().starts_with(w.digits()));
            }
        }
        let binary = Tile::single_split(2).unwrap();
        assert_eq!(
            partition_at_level(&binary, 3, DEFAULT_CAP).unwrap(),
            words_of_length(2, 3).collect::<Vec<_>>()
        );
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(
            enumerate_tiles_with_leaves(2, 4, DEFAULT_CAP)
                .unwrap()
                .len(),
            5
        );
        assert_eq!(
            enumerate_tiles_with_leaves(3, 5, DEFAULT_CAP)
                .unwrap()
                .len(),
            3
        );
        assert!(enumerate_tiles_with_leaves(2, 1, DEFAULT_CAP)
            .unwrap()
            .is_empty());
        let all = enumerate_tiles(2, 6, DEFAULT_CAP).unwrap();
        let distinct: BTreeSet<Vec<String>> = all
            .iter()
            .map(|t| t.leaves().iter().map(|w| w.to_string()).collect())
            .collect();
        assert_eq!(distinct.len(), all.len());
        assert!(all.iter().all(|t| verify_tile(2, t.leaves())));
        assert!(matches!(
            enumerate_tiles(2, 20, 100),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn kraft_examples() {
        assert!(is_complete_by_kraft(3, &reference_source()));
        assert!(!is_complete_by_kraft(2, &words(2, &[&[0], &[0, 1], &[1]])));
        let (num, den) = kraft_sum(2, &words(2, &[&[0], &[1, 0]]));
        assert_eq!((num, den), (BigUint::from(3u32), BigUint::from(4u32)));
    }
}
