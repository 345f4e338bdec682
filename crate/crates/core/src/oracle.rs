//! Brute-force checks of the structural facts the construction relies on:
//! complete splitting ⟺ leaf partition, unique factorization into leaves,
//! the tiling of the tree by leaf translates, uniqueness of the translate
//! set, and the continuity modulus of the transducer.
//!
//! Every check here enumerates its search space outright and only uses the
//! library under test through the function it is checking.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::tile::{oracle_leaves, verify_leaves, LeafView, Tile};
use crate::transducer::{factorize, Homeo};
use crate::word::{words_of_length, Digits, Word};

fn cap_error(what: &'static str, needed: u128, cap: usize) -> Error {
    Error::CapExceeded { what, needed, cap }
}

/// Outcome of comparing the two tile checks over every rooted subtree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    /// Prefix-closed vertex sets examined.
    pub subtrees: u64,
    /// How many of them both checks accepted.
    pub tiles: u64,
    /// Leaf sets on which the checks disagreed (at most a handful kept).
    pub mismatches: Vec<Vec<Word>>,
    pub mismatch_count: u64,
}

type Visit<'v> = dyn FnMut(&mut Vec<Word>) -> Result<()> + 'v;

/// With `v` present, calls `visit` once for every choice of which of its
/// descendants (of length ≤ `depth`) are present, with the resulting leaves
/// appended to `leaves` in lexicographic order.
fn grow(depth: usize, v: &Word, leaves: &mut Vec<Word>, visit: &mut Visit<'_>) -> Result<()> {
    if v.len() == depth {
        leaves.push(v.clone());
        let r = visit(leaves);
        leaves.pop();
        return r;
    }
    grow_children(depth, v, 0, false, leaves, visit)
}

/// Decides children `c..p` of the present vertex `v`; `any` records whether
/// an earlier child is present.
fn grow_children(
    depth: usize,
    v: &Word,
    c: u32,
    any: bool,
    leaves: &mut Vec<Word>,
    visit: &mut Visit<'_>,
) -> Result<()> {
    if c == v.base() {
        if any {
            return visit(leaves);
        }
        leaves.push(v.clone());
        let r = visit(leaves);
        leaves.pop();
        return r;
    }
    grow_children(depth, v, c + 1, any, leaves, visit)?;
    let mut child = v.clone();
    child.push(c);
    grow(depth, &child, leaves, &mut |leaves: &mut Vec<Word>| {
        grow_children(depth, v, c + 1, true, leaves, visit)
    })
}

/// A leaf of the subtree search, copied rather than cloned and carrying its
/// value and a sort key so the checks need not recompute them per subtree.
/// Subtree counts pass any `usize` cap beyond depth 5 in base 2, or beyond
/// depth 0 in bases above 63, so six digits below 255 always suffice.
#[derive(Clone, Copy)]
struct Packed {
    /// Digits plus one, eight bits each from the top: integer order is
    /// lexicographic order with a proper prefix first.
    key: u64,
    value: usize,
    digits: [u32; 6],
    len: u32,
    base: u32,
}

impl Packed {
    fn new(word: &Word) -> Self {
        let digits = word.digits();
        assert!(
            digits.len() <= 6 && word.base() <= 255,
            "subtree search bound"
        );
        let mut packed = Packed {
            key: 0,
            value: word.view_value(),
            digits: [0; 6],
            len: digits.len() as u32,
            base: word.base(),
        };
        for (i, &d) in digits.iter().enumerate() {
            packed.digits[i] = d;
            packed.key |= u64::from(d + 1) << (56 - 8 * i);
        }
        packed
    }

    fn word(&self) -> Word {
        Word::from_digits_unchecked(self.base, Digits::from_slice(self.view_digits()))
    }
}

impl LeafView for Packed {
    fn view_base(&self) -> u32 {
        self.base
    }

    fn view_digits(&self) -> &[u32] {
        &self.digits[..self.len as usize]
    }

    fn view_value(&self) -> usize {
        self.value
    }

    fn view_lex_less(&self, other: &Self) -> bool {
        self.key < other.key
    }
}

fn empty_report() -> EquivalenceReport {
    EquivalenceReport {
        subtrees: 0,
        tiles: 0,
        mismatches: Vec::new(),
        mismatch_count: 0,
    }
}

/// Runs [`verify_tile`] and [`verify_tile_oracle`] on the leaf set of every
/// prefix-closed vertex set of the `p`-ary tree with words of length at most
/// `depth`, and reports where they disagree.
pub fn oracle_equivalence(
    base: u32,
    depth: usize,
    cap: usize,
    exec: Execution,
) -> Result<EquivalenceReport> {
    crate::word::check_base(base)?;
    // f(h) = (1 + f(h−1))^p rooted subtrees of height ≤ h.
    let count = |h: usize| (0..h).try_fold(1u128, |f, _| (f + 1).checked_pow(base));
    let total = count(depth).unwrap_or(u128::MAX);
    if total > cap as u128 {
        return Err(cap_error("subtree enumeration", total, cap));
    }
    let root = Word::empty(base)?;
    let check = |report: &mut EquivalenceReport, leaves: &[Packed]| -> Result<()> {
        let by_splitting = verify_leaves(base, leaves);
        let by_partition = oracle_leaves(base, leaves, cap)?;
        report.subtrees += 1;
        if by_splitting && by_partition {
            report.tiles += 1;
        }
        if by_splitting != by_partition {
            report.mismatch_count += 1;
            if report.mismatches.len() < 8 {
                report
                    .mismatches
                    .push(leaves.iter().map(Packed::word).collect());
            }
        }
        Ok(())
    };
    if depth == 0 {
        let mut report = empty_report();
        check(&mut report, &[Packed::new(&root)])?;
        return Ok(report);
    }

    // options[c]: the leaf lists of every subtree hanging from child `c`,
    // the first one empty for an absent child.
    let options: Vec<Vec<Vec<Packed>>> = (0..base)
        .map(|c| -> Result<_> {
            let mut lists = vec![Vec::new()];
            let child = Word::from_digits_unchecked(base, Digits::from_slice(&[c]));
            grow(depth, &child, &mut Vec::new(), &mut |leaves: &mut Vec<
                Word,
            >| {
                lists.push(leaves.iter().map(Packed::new).collect());
                Ok(())
            })?;
            Ok(lists)
        })
        .collect::<Result<_>>()?;
    let p = base as usize;
    let radix = options[0].len();
    let root_only = [Packed::new(&root)];

    // Split the work on the first child's choice; within a task, run the
    // remaining children as a mixed-radix counter and rebuild the leaf
    // buffer only from the first child that changed.
    let partials = exec::map_range(exec, radix, |first| {
        let mut report = empty_report();
        let mut choice = vec![0usize; p];
        choice[0] = first;
        let mut buffer: Vec<Packed> = Vec::new();
        // offsets[c]: buffer length before child c's leaves.
        let mut offsets = vec![0usize; p + 1];
        let mut c = 0;
        loop {
            buffer.truncate(offsets[c]);
            for k in c..p {
                buffer.extend_from_slice(&options[k][choice[k]]);
                offsets[k + 1] = buffer.len();
            }
            let leaves: &[Packed] = if buffer.is_empty() {
                &root_only
            } else {
                &buffer
            };
            check(&mut report, leaves)?;
            // Mixed-radix increment over children 1..p, last child fastest.
            c = p;
            loop {
                c -= 1;
                if c == 0 {
                    return Ok::<_, Error>(report);
                }
                if choice[c] + 1 < radix {
                    break;
                }
                choice[c] = 0;
            }
            choice[c] += 1;
        }
    });
    partials
        .into_iter()
        .try_fold(empty_report(), |mut acc, part| {
            let part = part?;
            acc.subtrees += part.subtrees;
            acc.tiles += part.tiles;
            acc.mismatch_count += part.mismatch_count;
            acc.mismatches.extend(part.mismatches);
            acc.mismatches.truncate(8);
            Ok(acc)
        })
}

/// Number of ways to write `digits` as a concatenation of leaves, by
/// trying every leaf at every position (no use of prefix-freeness).
pub fn count_factorizations(digits: &[u32], leaves: &[Word]) -> u64 {
    let mut ways = vec![0u64; digits.len() + 1];
    ways[0] = 1;
    for start in 0..digits.len() {
        if ways[start] == 0 {
            continue;
        }
        for leaf in leaves {
            let end = start + leaf.len();
            if !leaf.is_empty() && end <= digits.len() && &digits[start..end] == leaf.digits() {
                ways[end] += ways[start];
            }
        }
    }
    ways[digits.len()]
}

/// Every factorization of `digits` into leaves, found by backtracking.
pub fn all_factorizations(digits: &[u32], leaves: &[Word]) -> Vec<Vec<Word>> {
    fn go(rest: &[u32], leaves: &[Word], path: &mut Vec<Word>, out: &mut Vec<Vec<Word>>) {
        if rest.is_empty() {
            out.push(path.clone());
            return;
        }
        for leaf in leaves {
            if !leaf.is_empty() && rest.starts_with(leaf.digits()) {
                path.push(leaf.clone());
                go(&rest[leaf.len()..], leaves, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(digits, leaves, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationReport {
    /// Distinct leaf-concatenation words examined.
    pub words: u64,
    /// Words with other than exactly one factorization.
    pub ambiguous: Vec<Word>,
    /// Words whose greedy parse differs from the exhaustive one.
    pub greedy_mismatch: Vec<Word>,
}

impl FactorizationReport {
    pub fn holds(&self) -> bool {
        self.ambiguous.is_empty() && self.greedy_mismatch.is_empty()
    }
}

/// For every concatenation of leaves of total length `≤ max_len`, checks
/// that backtracking finds exactly one factorization and that it equals the
/// greedy parse from [`factorize`].
pub fn unique_factorization(tile: &Tile, max_len: usize) -> Result<FactorizationReport> {
    let leaves = tile.leaves();
    let mut words: BTreeSet<Vec<u32>> = BTreeSet::new();
    let mut frontier: Vec<Vec<u32>> = vec![Vec::new()];
    while let Some(prefix) = frontier.pop() {
        for leaf in leaves {
            if prefix.len() + leaf.len() <= max_len {
                let mut next = prefix.clone();
                next.extend_from_slice(leaf.digits());
                if words.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
    }
    let mut report = FactorizationReport {
        words: words.len() as u64,
        ambiguous: Vec::new(),
        greedy_mismatch: Vec::new(),
    };
    for digits in &words {
        let word = Word::new(tile.base(), digits)?;
        let found = all_factorizations(digits, leaves);
        if found.len() != 1 {
            report.ambiguous.push(word);
            continue;
        }
        let greedy = factorize(&word, tile)?;
        if !greedy.remainder.is_empty() || greedy.blocks != found[0] {
            report.greedy_mismatch.push(word);
        }
    }
    Ok(report)
}

/// Checks that every word of length `≤ max_len` is `ω·v` with `ω` a
/// concatenation of leaves and `v` an internal node of the tile. Returns
/// the words for which no such split exists.
pub fn tiling_counterexamples(tile: &Tile, max_len: usize, cap: usize) -> Result<Vec<Word>> {
    let base = tile.base();
    let total: u128 = (0..=max_len as u32)
        .map(|n| (base as u128).saturating_pow(n))
        .sum();
    if total > cap as u128 {
        return Err(cap_error("tiling check", total, cap));
    }
    let internal: HashSet<Vec<u32>> = tile
        .internal_nodes()
        .iter()
        .map(|w| w.digits().to_vec())
        .collect();
    let mut bad = Vec::new();
    for n in 0..=max_len {
        for word in words_of_length(base, n) {
            let d = word.digits();
            let ok = (0..=d.len()).any(|i| {
                internal.contains(&d[i..]) && count_factorizations(&d[..i], tile.leaves()) > 0
            });
            if !ok {
                bad.push(word);
            }
        }
    }
    Ok(bad)
}

/// Sets `Ω` of vertices of length `< depth` whose translates `ωS`, cut at
/// depth `depth`, cover every edge of the tree down to that depth with no
/// edge covered twice. Vertices of length `≥ depth` are not candidates,
/// since their translates contribute no edge within the cut.
pub fn covering_translate_sets(
    tile: &Tile,
    depth: usize,
    exec: Execution,
) -> Result<Vec<BTreeSet<Word>>> {
    let base = tile.base();
    let vertices: Vec<Word> = (0..depth).flat_map(|n| words_of_length(base, n)).collect();
    if vertices.len() > 26 {
        return Err(cap_error(
            "translate subsets",
            1u128 << vertices.len().min(127),
            1 << 26,
        ));
    }
    // Edges are named by their lower endpoint: words of length 1..=depth.
    let edge_words: Vec<Word> = (1..=depth).flat_map(|n| words_of_length(base, n)).collect();
    if edge_words.len() > 128 {
        return Err(cap_error("translate edges", edge_words.len() as u128, 128));
    }
    let edge_index = |digits: &[u32]| edge_words.iter().position(|e| e.digits() == digits);
    // Edges of the tile: (u, u·c) for u internal.
    let tile_edges: Vec<Vec<u32>> = tile
        .internal_nodes()
        .iter()
        .flat_map(|u| {
            (0..base).map(move |c| {
                let mut d = u.digits().to_vec();
                d.push(c);
                d
            })
        })
        .collect();
    let masks: Vec<u128> = vertices
        .iter()
        .map(|omega| {
            tile_edges
                .iter()
                .filter(|e| omega.len() + e.len() <= depth)
                .fold(0u128, |acc, e| {
                    let mut d = omega.digits().to_vec();
                    d.extend_from_slice(e);
                    acc | 1u128 << edge_index(&d).expect("edge within depth")
                })
        })
        .collect();
    let full: u128 = if edge_words.len() == 128 {
        u128::MAX
    } else {
        (1u128 << edge_words.len()) - 1
    };

    let n = vertices.len();
    let high_bits = n.min(8);
    let low_bits = n - high_bits;
    let found = exec::map_range(exec, 1usize << high_bits, |high| {
        let mut hits = Vec::new();
        for low in 0..(1u64 << low_bits) {
            let subset = (high as u64) << low_bits | low;
            let mut covered = 0u128;
            let mut disjoint = true;
            for (i, &mask) in masks.iter().enumerate() {
                if subset >> i & 1 == 1 {
                    if covered & mask != 0 {
                        disjoint = false;
                        break;
                    }
                    covered |= mask;
                }
            }
            if disjoint && covered == full {
                hits.push(subset);
            }
        }
        hits
    });
    Ok(found
        .into_iter()
        .flatten()
        .map(|subset| {
            (0..n)
                .filter(|i| subset >> i & 1 == 1)
                .map(|i| vertices[i].clone())
                .collect()
        })
        .collect())
}

/// Leaf concatenations of length `< depth`, including ε.
pub fn monoid_below(tile: &Tile, depth: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    let mut frontier = vec![Word::from_digits_unchecked(tile.base(), Digits::new())];
    while let Some(w) = frontier.pop() {
        if w.len() >= depth || !out.insert(w.clone()) {
            continue;
        }
        for leaf in tile.leaves() {
            let mut next = w.clone();
            next.extend_from(leaf);
            frontier.push(next);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContinuityReport {
    pub input_precision: usize,
    pub residues: u64,
    pub extensions: u64,
    /// Residues whose image prefix is shorter than `k` or changes under extension.
    pub violations: Vec<Word>,
}

/// Exhaustive check of the precision contract: for every residue `w` modulo
/// `p^n`, `n = required_input_precision(k)`, the emitted image has at least
/// `k` digits, and appending any `maxlen(L(S))` further digits leaves the
/// first `k` output digits unchanged.
pub fn continuity_modulus(
    h: &Homeo,
    k: usize,
    cap: usize,
    exec: Execution,
) -> Result<ContinuityReport> {
    let n = h.required_input_precision(k);
    let p = h.p();
    let ext_len = h.source().max_leaf_len();
    let residues = (p as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let extensions = (p as u128).checked_pow(ext_len as u32).unwrap_or(u128::MAX);
    if residues.saturating_mul(extensions) > cap as u128 {
        return Err(cap_error(
            "continuity check",
            residues.saturating_mul(extensions),
            cap,
        ));
    }
    let tails: Vec<Word> = words_of_length(p, ext_len).collect();
    let word_of = |mut index: usize| {
        let mut d = Digits::new();
        for _ in 0..n {
            d.push((index % p as usize) as u32);
            index /= p as usize;
        }
        Word::from_digits_unchecked(p, d)
    };
    let verdicts = exec::map_range(exec, residues as usize, |i| -> Result<Option<Word>> {
        let w = word_of(i);
        let out = h.apply(&w)?.out;
        if out.len() < k {
            return Ok(Some(w));
        }
        for tail in &tails {
            let longer = h.apply(&w.concat(tail)?)?.out;
            if longer.digits()[..k] != out.digits()[..k] {
                return Ok(Some(w));
            }
        }
        Ok(None)
    });
    let mut violations = Vec::new();
    for v in verdicts {
        if let Some(w) = v? {
            violations.push(w);
        }
    }
    Ok(ContinuityReport {
        input_precision: n,
        residues: residues as u64,
        extensions: (residues * extensions) as u64,
        violations,
    })
}

/// Whether blockwise `τ` maps `L_n(S)` bijectively onto `L_n(S′)`.
pub fn level_bijection(h: &Homeo, n: usize, cap: usize) -> Result<bool> {
    let level = crate::tile::partition_at_level(h.source(), n, cap)?;
    let expected: HashSet<Word> = crate::tile::partition_at_level(h.target(), n, cap)?
        .into_iter()
        .collect();
    let mut images = HashSet::new();
    for w in &level {
        match h.extend_blockwise(w) {
            Some(img) if expected.contains(&img) => {
                images.insert(img);
            }
            _ => return Ok(false),
        }
    }
    Ok(images.len() == level.len() && images.len() == expected.len())
}
