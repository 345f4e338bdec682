//! The homeomorphism `φ: Z_p → Z_q` as a digit-block transducer.
//!
//! Input digits are parsed greedily into leaves of the source tile (the
//! parse is the unique leaf factorization, since leaves form a complete
//! prefix code) and every completed block `ℓ` is replaced by `τ(ℓ)`. Output
//! is emitted only for completed blocks, so every emitted digit is correct
//! for all continuations of the input read so far.

use std::collections::{HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::stream::DigitStream;
use crate::tile::{partition_at_level, Tile};
use crate::word::{same_base, Word};

/// A bijection between the leaves of a base-`p` tile and a base-`q` tile.
#[derive(Clone, PartialEq, Eq)]
pub struct LeafBijection {
    source: Tile,
    target: Tile,
    /// `images[i]` is the image of the `i`-th source leaf (⪯ order).
    images: Vec<Word>,
}

impl LeafBijection {
    pub fn new(
        source: Tile,
        target: Tile,
        pairs: impl IntoIterator<Item = (Word, Word)>,
    ) -> Result<Self> {
        check_counts(&source, &target)?;
        let mut images: Vec<Option<Word>> = vec![None; source.leaf_count()];
        let mut used = vec![false; target.leaf_count()];
        for (from, to) in pairs {
            let i = source
                .leaf_index(&from)
                .ok_or_else(|| invalid(format!("{from:?} is not a source leaf")))?;
            let j = target
                .leaf_index(&to)
                .ok_or_else(|| invalid(format!("{to:?} is not a target leaf")))?;
            if images[i].is_some() {
                return Err(invalid(format!("{from:?} is mapped twice")));
            }
            if used[j] {
                return Err(invalid(format!("{to:?} is hit twice")));
            }
            used[j] = true;
            images[i] = Some(to);
        }
        let images = images
            .into_iter()
            .zip(source.leaves())
            .map(|(img, leaf)| img.ok_or_else(|| invalid(format!("{leaf:?} is unmapped"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(LeafBijection {
            source,
            target,
            images,
        })
    }

    /// The ⪯-order-preserving bijection.
    pub fn canonical(source: Tile, target: Tile) -> Result<Self> {
        check_counts(&source, &target)?;
        let images = target.leaves().to_vec();
        Ok(LeafBijection {
            source,
            target,
            images,
        })
    }

    pub fn source(&self) -> &Tile {
        &self.source
    }

    pub fn target(&self) -> &Tile {
        &self.target
    }

    pub fn image(&self, leaf: &Word) -> Option<&Word> {
        self.source.leaf_index(leaf).map(|i| &self.images[i])
    }

    /// `(leaf, τ(leaf))` in ⪯ order of the source leaf.
    pub fn pairs(&self) -> impl Iterator<Item = (&Word, &Word)> {
        self.source.leaves().iter().zip(&self.images)
    }

    pub fn inverse(&self) -> LeafBijection {
        let mut images = vec![None; self.target.leaf_count()];
        for (from, to) in self.pairs() {
            let j = self.target.leaf_index(to).expect("image is a target leaf");
            images[j] = Some(from.clone());
        }
        LeafBijection {
            source: self.target.clone(),
            target: self.source.clone(),
            images: images.into_iter().map(|w| w.expect("bijection")).collect(),
        }
    }

    /// Serializes to the `tau` file format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::from("tau\n");
        for (from, to) in self.pairs() {
            out.push_str(&format!("{from} -> {to}\n"));
        }
        out
    }

    /// Reads a `tau` file relative to the given tiles.
    pub fn parse_file(source: Tile, target: Tile, text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        match lines.next() {
            Some("tau") => {}
            other => {
                return Err(Error::Parse(format!(
                    "expected `tau` header, found {:?}",
                    other.unwrap_or("")
                )))
            }
        }
        let pairs = lines
            .map(|line| {
                let (from, to) = line.split_once("->").ok_or_else(|| {
                    Error::Parse(format!("expected `leaf -> leaf`, found {line:?}"))
                })?;
                Ok((
                    Word::parse(source.base(), from)?,
                    Word::parse(target.base(), to)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(source, target, pairs)
    }
}

impl fmt::Debug for LeafBijection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs()).finish()
    }
}

fn invalid(msg: String) -> Error {
    Error::InvalidBijection(msg)
}

fn check_counts(source: &Tile, target: &Tile) -> Result<()> {
    if source.leaf_count() != target.leaf_count() {
        return Err(Error::LeafCountMismatch {
            source_leaves: source.leaf_count(),
            target_leaves: target.leaf_count(),
        });
    }
    Ok(())
}

/// The ⪯-order-preserving bijection `L(S) → L(S′)`.
pub fn canonical_tau(source: &Tile, target: &Tile) -> Result<LeafBijection> {
    LeafBijection::canonical(source.clone(), target.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Edge {
    Node(u32),
    Leaf(u32),
}

/// Parse automaton of a tile: one state per internal node.
#[derive(Debug, Clone, PartialEq, Eq)]
struct LeafTrie {
    base: u32,
    /// `nodes[n][d]` is the transition from internal node `n` on digit `d`.
    nodes: Vec<Vec<Edge>>,
}

const ROOT: u32 = 0;

impl LeafTrie {
    fn new(tile: &Tile) -> Self {
        let base = tile.base();
        let mut nodes: Vec<Vec<Option<Edge>>> = vec![vec![None; base as usize]];
        for (index, leaf) in tile.leaves().iter().enumerate() {
            let (last, path) = leaf.digits().split_last().expect("tiles have no ε leaf");
            let mut node = ROOT as usize;
            for &d in path {
                node = match nodes[node][d as usize] {
                    Some(Edge::Node(next)) => next as usize,
                    Some(Edge::Leaf(_)) => unreachable!("leaves are prefix-free"),
                    None => {
                        nodes.push(vec![None; base as usize]);
                        let next = nodes.len() - 1;
                        nodes[node][d as usize] = Some(Edge::Node(next as u32));
                        next
                    }
                };
            }
            nodes[node][*last as usize] = Some(Edge::Leaf(index as u32));
        }
        let nodes = nodes
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| e.expect("tiles are complete"))
                    .collect()
            })
            .collect();
        LeafTrie { base, nodes }
    }

    fn step(&self, node: u32, digit: u32) -> Edge {
        self.nodes[node as usize][digit as usize]
    }

    /// The state reached from the root by reading `word` without completing a leaf.
    fn locate(&self, word: &Word) -> Option<u32> {
        word.digits()
            .iter()
            .try_fold(ROOT, |node, &d| match self.step(node, d) {
                Edge::Node(next) => Some(next),
                Edge::Leaf(_) => None,
            })
    }

    fn internal_count(&self) -> usize {
        self.nodes.len()
    }
}

/// Leaf blocks parsed from a digit string plus the unparsed tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub blocks: Vec<Word>,
    /// A proper prefix of some leaf (possibly ε).
    pub remainder: Word,
}

fn check_digits_base(expected: u32, digits: &Word) -> Result<()> {
    if digits.base() != expected {
        return Err(Error::BaseMismatch {
            left: expected,
            right: digits.base(),
        });
    }
    Ok(())
}

fn factorize_with(trie: &LeafTrie, tile: &Tile, digits: &Word) -> Factorization {
    let mut blocks = Vec::new();
    let mut node = ROOT;
    let mut start = 0;
    for (i, &d) in digits.digits().iter().enumerate() {
        match trie.step(node, d) {
            Edge::Node(next) => node = next,
            Edge::Leaf(index) => {
                debug_assert_eq!(
                    tile.leaves()[index as usize].digits(),
                    &digits.digits()[start..=i]
                );
                blocks.push(tile.leaves()[index as usize].clone());
                node = ROOT;
                start = i + 1;
            }
        }
    }
    Factorization {
        blocks,
        remainder: Word::from_digits_unchecked(tile.base(), digits.digits()[start..].into()),
    }
}

/// Greedy left-to-right leaf parse of `digits`.
pub fn factorize(digits: &Word, tile: &Tile) -> Result<Factorization> {
    check_digits_base(tile.base(), digits)?;
    Ok(factorize_with(&LeafTrie::new(tile), tile, digits))
}

/// Transducer state between digits: the pending, not yet complete block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParseState {
    pub pending: Word,
}

impl fmt::Display for ParseState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.pending.fmt(f)
    }
}

/// The homeomorphism determined by a leaf bijection `τ: L(S) → L(S′)`.
#[derive(Clone, PartialEq, Eq)]
pub struct Homeo {
    tau: LeafBijection,
    trie: LeafTrie,
}

impl fmt::Debug for Homeo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Homeo")
            .field("p", &self.p())
            .field("q", &self.q())
            .field("tau", &self.tau)
            .finish()
    }
}

/// Output of [`Homeo::apply`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Applied {
    pub out: Word,
    pub state: ParseState,
}

impl Homeo {
    pub fn new(tau: LeafBijection) -> Self {
        let trie = LeafTrie::new(tau.source());
        Homeo { tau, trie }
    }

    /// Tiles `S`, `S′` with the ⪯-order-preserving bijection.
    pub fn canonical(source: Tile, target: Tile) -> Result<Self> {
        Ok(Self::new(LeafBijection::canonical(source, target)?))
    }

    /// Explicit tiles for the `m`-th solution of the leaf-count equation,
    /// joined by the canonical bijection.
    pub fn explicit(p: u32, q: u32, m: u64) -> Result<Self> {
        let sol = crate::tile::solve_diophantine(p, q, m)?;
        let source = crate::tile::explicit_tile(p, sol.s)?.tile;
        let target = crate::tile::explicit_tile(q, sol.s_prime)?.tile;
        Self::canonical(source, target)
    }

    /// The identity on `Z_p` via the single-split tile.
    pub fn identity(base: u32) -> Result<Self> {
        let tile = Tile::single_split(base)?;
        Self::canonical(tile.clone(), tile)
    }

    pub fn p(&self) -> u32 {
        self.tau.source().base()
    }

    pub fn q(&self) -> u32 {
        self.tau.target().base()
    }

    pub fn source(&self) -> &Tile {
        self.tau.source()
    }

    pub fn target(&self) -> &Tile {
        self.tau.target()
    }

    pub fn tau(&self) -> &LeafBijection {
        &self.tau
    }

    pub fn inverse(&self) -> Homeo {
        Homeo::new(self.tau.inverse())
    }

    pub fn transducer(&self) -> Transducer<'_> {
        Transducer {
            homeo: self,
            node: ROOT,
            pending: Word::from_digits_unchecked(self.p(), Default::default()),
        }
    }

    /// Resumes from a checkpointed state.
    pub fn resume(&self, state: &ParseState) -> Result<Transducer<'_>> {
        check_digits_base(self.p(), &state.pending)?;
        let node = self.trie.locate(&state.pending).ok_or_else(|| {
            Error::Parse(format!(
                "{:?} is not an internal node of the source tile",
                state.pending
            ))
        })?;
        Ok(Transducer {
            homeo: self,
            node,
            pending: state.pending.clone(),
        })
    }

    /// Image of the longest completely parsed prefix of `digits`.
    pub fn apply(&self, digits: &Word) -> Result<Applied> {
        check_digits_base(self.p(), digits)?;
        let mut t = self.transducer();
        let mut out = Word::from_digits_unchecked(self.q(), Default::default());
        for &d in digits.digits() {
            if let Some(image) = t.feed_unchecked(d) {
                out.extend_from(image);
            }
        }
        Ok(Applied {
            out,
            state: t.state(),
        })
    }

    /// Like [`apply`](Self::apply), also returning the leaf blocks consumed.
    pub fn apply_traced(&self, digits: &Word) -> Result<(Factorization, Applied)> {
        check_digits_base(self.p(), digits)?;
        let factorization = factorize_with(&self.trie, self.source(), digits);
        let mut out = Word::from_digits_unchecked(self.q(), Default::default());
        for block in &factorization.blocks {
            out.extend_from(self.tau.image(block).expect("block is a leaf"));
        }
        let state = ParseState {
            pending: factorization.remainder.clone(),
        };
        Ok((factorization, Applied { out, state }))
    }

    /// The exact eventually periodic image of an eventually periodic input.
    ///
    /// Runs the transducer through the preperiod, then around the period
    /// until a (period offset, parse state) pair repeats; the output emitted
    /// between the two visits is the output period.
    pub fn apply_stream(&self, input: &DigitStream) -> Result<DigitStream> {
        if input.base() != self.p() {
            return Err(Error::BaseMismatch {
                left: self.p(),
                right: input.base(),
            });
        }
        let mut t = self.transducer();
        let mut out: Vec<u32> = Vec::new();
        for &d in input.preperiod() {
            if let Some(image) = t.feed_unchecked(d) {
                out.extend_from_slice(image.digits());
            }
        }
        let period = input.period();
        let mut seen: HashMap<(usize, u32), usize> = HashMap::new();
        let mut offset = 0;
        let start = loop {
            if let Some(&at) = seen.get(&(offset, t.node)) {
                break at;
            }
            seen.insert((offset, t.node), out.len());
            if let Some(image) = t.feed_unchecked(period[offset]) {
                out.extend_from_slice(image.digits());
            }
            offset = (offset + 1) % period.len();
        };
        // A cycle returns to the same pending block after consuming input,
        // so it completes at least one block and emits output.
        debug_assert!(start < out.len());
        DigitStream::new(self.q(), &out[..start], &out[start..])
    }

    /// Input digits sufficient to determine `k` output digits:
    /// `maxlen(L(S)) · ⌈k / minlen(τ(L(S)))⌉`.
    pub fn required_input_precision(&self, k: usize) -> usize {
        let longest = self.source().max_leaf_len();
        let shortest = self.target().min_leaf_len();
        longest * k.div_ceil(shortest)
    }

    /// `τ` extended to leaf concatenations: `τ(ℓ_1⋯ℓ_n) = τ(ℓ_1)⋯τ(ℓ_n)`.
    /// `None` unless `word` factors completely into source leaves.
    pub fn extend_blockwise(&self, word: &Word) -> Option<Word> {
        if word.base() != self.p() {
            return None;
        }
        let applied = self.apply(word).ok()?;
        applied.state.pending.is_empty().then_some(applied.out)
    }

    /// Number of parse states (internal nodes of the source tile).
    pub fn state_count(&self) -> usize {
        self.trie.internal_count()
    }
}

/// A running transducer over one input stream.
#[derive(Debug, Clone)]
pub struct Transducer<'h> {
    homeo: &'h Homeo,
    node: u32,
    pending: Word,
}

impl<'h> Transducer<'h> {
    /// Consumes one digit; returns `τ(ℓ)` when it completes a leaf `ℓ`.
    pub fn feed(&mut self, digit: u32) -> Result<Option<&'h Word>> {
        if digit >= self.homeo.p() {
            return Err(Error::InvalidDigit {
                digit,
                base: self.homeo.p(),
            });
        }
        Ok(self.feed_unchecked(digit))
    }

    fn feed_unchecked(&mut self, digit: u32) -> Option<&'h Word> {
        match self.homeo.trie.step(self.node, digit) {
            Edge::Node(next) => {
                self.node = next;
                self.pending.push(digit);
                None
            }
            Edge::Leaf(index) => {
                self.node = ROOT;
                self.pending.clear();
                Some(&self.homeo.tau.images[index as usize])
            }
        }
    }

    pub fn state(&self) -> ParseState {
        ParseState {
            pending: self.pending.clone(),
        }
    }
}

/// Stage-by-stage composition `φ_k ∘ ⋯ ∘ φ_1`: each stage's output digits
/// are fed to the next.
#[derive(Debug, Clone)]
pub struct Composite<'a> {
    stages: Vec<&'a Homeo>,
}

/// `h2 ∘ h1`.
pub fn compose<'a>(h1: &'a Homeo, h2: &'a Homeo) -> Result<Composite<'a>> {
    Composite::new(h1).then(h2)
}

impl<'a> Composite<'a> {
    pub fn new(first: &'a Homeo) -> Self {
        Composite {
            stages: vec![first],
        }
    }

    pub fn then(mut self, next: &'a Homeo) -> Result<Self> {
        let last = self.stages.last().expect("nonempty");
        if last.q() != next.p() {
            return Err(Error::BaseMismatch {
                left: last.q(),
                right: next.p(),
            });
        }
        self.stages.push(next);
        Ok(self)
    }

    pub fn source_base(&self) -> u32 {
        self.stages[0].p()
    }

    pub fn target_base(&self) -> u32 {
        self.stages.last().expect("nonempty").q()
    }

    pub fn apply(&self, digits: &Word) -> Result<Word> {
        self.stages
            .iter()
            .try_fold(digits.clone(), |w, h| Ok(h.apply(&w)?.out))
    }

    pub fn apply_stream(&self, input: &DigitStream) -> Result<DigitStream> {
        self.stages
            .iter()
            .try_fold(input.clone(), |s, h| h.apply_stream(&s))
    }

    pub fn required_input_precision(&self, k: usize) -> usize {
        self.stages
            .iter()
            .rev()
            .fold(k, |k, h| h.required_input_precision(k))
    }
}

/// Checks that `map` is a bijection `L_n(S) → L_n(S′)` and
/// `L_{n+1}(S) → L_{n+1}(S′)` that preserves and reflects the prefix
/// relation (ball inclusion) between the two levels.
pub fn check_level_map<F>(
    source: &Tile,
    target: &Tile,
    n: usize,
    cap: usize,
    exec: Execution,
    map: F,
) -> Result<bool>
where
    F: Fn(&Word) -> Option<Word> + Sync + Send,
{
    let coarse = partition_at_level(source, n, cap)?;
    let fine = partition_at_level(source, n + 1, cap)?;
    let coarse_img = partition_at_level(target, n, cap)?;
    let fine_img = partition_at_level(target, n + 1, cap)?;

    let image_of = |level: &[Word], expected: &[Word]| -> Option<Vec<Word>> {
        let images: Vec<Word> = exec::map(exec, level, &map)
            .into_iter()
            .collect::<Option<_>>()?;
        let distinct: HashSet<&Word> = images.iter().collect();
        let expected: HashSet<&Word> = expected.iter().collect();
        (distinct.len() == images.len() && distinct == expected).then_some(images)
    };
    let Some(coarse_mapped) = image_of(&coarse, &coarse_img) else {
        return Ok(false);
    };
    let Some(fine_mapped) = image_of(&fine, &fine_img) else {
        return Ok(false);
    };
    for w in &fine {
        same_base(&coarse[0], w)?;
    }
    Ok(exec::all_range(exec, fine.len(), |j| {
        coarse.iter().zip(&coarse_mapped).all(|(v, v_img)| {
            let contains = fine[j].digits().starts_with(v.digits());
            let contains_img = fine_mapped[j].digits().starts_with(v_img.digits());
            contains == contains_img
        })
    }))
}

/// [`check_level_map`] for the blockwise extension of `τ`.
pub fn check_inclusion_isomorphism(h: &Homeo, n: usize, cap: usize) -> Result<bool> {
    check_level_map(h.source(), h.target(), n, cap, Execution::default(), |w| {
        h.extend_blockwise(w)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::worked_example;
    use crate::stream::rational_to_stream;
    use crate::tile::{explicit_tile, DEFAULT_CAP};
    use num_bigint::BigInt;

    fn w(base: u32, digits: &[u32]) -> Word {
        Word::new(base, digits).unwrap()
    }

    const INPUT: [u32; 14] = [2, 1, 0, 1, 0, 2, 0, 0, 0, 0, 0, 1, 0, 0];

    #[test]
    fn factorize_examples() {
        let s = explicit_tile(3, 2).unwrap().tile;
        let f = factorize(&w(3, &INPUT), &s).unwrap();
        let blocks: Vec<String> = f.blocks.iter().map(|b| format!("{b:?}")).collect();
        assert_eq!(
            blocks,
            ["(2)", "(1)", "(0,1)", "(0,2)", "(0,0)", "(0,0)", "(0,1)", "(0,0)"]
        );
        assert!(f.remainder.is_empty());

        let f = factorize(&w(3, &[0]), &s).unwrap();
        assert!(f.blocks.is_empty());
        assert_eq!(f.remainder, w(3, &[0]));

        let f = factorize(&w(3, &[]), &s).unwrap();
        assert!(f.blocks.is_empty() && f.remainder.is_empty());

        assert!(factorize(&w(2, &[0]), &s).is_err());
    }

    #[test]
    fn apply_examples() {
        let h = worked_example();
        let r = h.apply(&w(3, &INPUT)).unwrap();
        assert_eq!(r.out, w(5, &[2, 1, 3, 4, 0, 0, 3, 0]));
        assert!(r.state.pending.is_empty());
        assert!(h.apply(&w(3, &[])).unwrap().out.is_empty());

        let id = Homeo::identity(3).unwrap();
        let x = w(3, &[2, 0, 1, 1, 0]);
        assert_eq!(id.apply(&x).unwrap().out, x);
        assert!(h.apply(&w(5, &[0])).is_err());
    }

    #[test]
    fn traced_matches_apply() {
        let h = worked_example();
        let x = w(3, &[2, 1, 0, 1, 0]);
        let (f, traced) = h.apply_traced(&x).unwrap();
        assert_eq!(traced, h.apply(&x).unwrap());
        assert_eq!(traced.state.pending, w(3, &[0]));
        assert_eq!(f.blocks.len(), 3);
    }

    #[test]
    fn resume_from_checkpoint() {
        let h = worked_example();
        let (head, tail) = INPUT.split_at(7);
        let first = h.apply(&w(3, head)).unwrap();
        assert_eq!(first.state.pending, w(3, &[0]));
        let mut t = h.resume(&first.state).unwrap();
        let mut out = first.out.digits().to_vec();
        for &d in tail {
            if let Some(img) = t.feed(d).unwrap() {
                out.extend_from_slice(img.digits());
            }
        }
        assert_eq!(out, [2, 1, 3, 4, 0, 0, 3, 0]);
        assert!(h
            .resume(&ParseState {
                pending: w(3, &[1])
            })
            .is_err());
        assert!(t.feed(3).is_err());
    }

    #[test]
    fn apply_stream_examples() {
        let h = worked_example();
        let minus_one = DigitStream::periodic(3, &[2]).unwrap();
        assert_eq!(
            h.apply_stream(&minus_one).unwrap(),
            DigitStream::periodic(5, &[2]).unwrap()
        );
        let zero = DigitStream::periodic(3, &[0]).unwrap();
        assert_eq!(
            h.apply_stream(&zero).unwrap(),
            DigitStream::periodic(5, &[0]).unwrap()
        );
        let id = Homeo::identity(3).unwrap();
        let x = DigitStream::new(3, &[1, 2], &[0, 2, 2]).unwrap();
        assert_eq!(id.apply_stream(&x).unwrap(), x);
        for s in [&minus_one, &zero] {
            let exact = h.apply_stream(s).unwrap();
            let prefix = h.apply(s.truncate(50).word()).unwrap().out;
            assert_eq!(exact.truncate(prefix.len()).into_word(), prefix);
        }
    }

    #[test]
    fn inverse_examples() {
        let h = worked_example();
        let inv = h.inverse();
        assert_eq!(
            inv.apply(&w(5, &[2, 1, 3, 4])).unwrap().out,
            w(3, &[2, 1, 0, 1, 0, 2])
        );
        assert_eq!(inv.inverse(), h);
        let id = Homeo::identity(2).unwrap();
        assert_eq!(id.inverse(), id);
    }

    #[test]
    fn compose_examples() {
        let h = worked_example();
        let inv = h.inverse();
        let round = compose(&h, &inv).unwrap();
        let x = w(3, &[2, 1, 0, 1, 0, 2]);
        assert_eq!(round.apply(&x).unwrap(), x);
        assert_eq!(
            round.required_input_precision(4),
            h.required_input_precision(inv.required_input_precision(4))
        );

        let id = Homeo::identity(3).unwrap();
        let after_id = compose(&id, &h).unwrap();
        for len in 0..8 {
            let x = w(3, &INPUT[..len]);
            assert_eq!(after_id.apply(&x).unwrap(), h.apply(&x).unwrap().out);
        }
        assert!(compose(&h, &h).is_err());

        let minus_one = rational_to_stream(&BigInt::from(-1), &BigInt::from(1), 3).unwrap();
        assert_eq!(round.apply_stream(&minus_one).unwrap(), minus_one);
    }

    #[test]
    fn precision_examples() {
        let h = worked_example();
        assert_eq!(h.required_input_precision(4), 8);
        assert_eq!(h.required_input_precision(0), 0);
        let id = Homeo::identity(5).unwrap();
        for k in 0..10 {
            assert_eq!(id.required_input_precision(k), k);
        }
    }

    #[test]
    fn canonical_tau_examples() {
        let s = explicit_tile(3, 2).unwrap().tile;
        let t = explicit_tile(5, 1).unwrap().tile;
        let tau = canonical_tau(&s, &t).unwrap();
        let pairs: Vec<String> = tau.pairs().map(|(a, b)| format!("{a:?}->{b:?}")).collect();
        assert_eq!(
            pairs,
            [
                "(1)->(0)",
                "(2)->(1)",
                "(0,0)->(2)",
                "(0,1)->(3)",
                "(0,2)->(4)"
            ]
        );
        let same = canonical_tau(&s, &s).unwrap();
        assert!(same.pairs().all(|(a, b)| a == b));
        let bigger = explicit_tile(3, 3).unwrap().tile;
        assert!(matches!(
            canonical_tau(&s, &bigger),
            Err(Error::LeafCountMismatch {
                source_leaves: 5,
                target_leaves: 7
            })
        ));
    }

    #[test]
    fn bijection_validation() {
        let s = explicit_tile(3, 2).unwrap().tile;
        let t = explicit_tile(5, 1).unwrap().tile;
        let leaves = s.leaves().to_vec();
        let images = t.leaves().to_vec();
        let mut pairs: Vec<(Word, Word)> =
            leaves.iter().cloned().zip(images.iter().cloned()).collect();
        assert!(LeafBijection::new(s.clone(), t.clone(), pairs.clone()).is_ok());
        pairs[1].1 = images[0].clone();
        assert!(LeafBijection::new(s.clone(), t.clone(), pairs.clone()).is_err());
        pairs.pop();
        assert!(LeafBijection::new(s.clone(), t.clone(), pairs).is_err());
        let bad = vec![(w(3, &[0]), images[0].clone())];
        assert!(LeafBijection::new(s, t, bad).is_err());
    }

    #[test]
    fn tau_file_round_trip() {
        let h = worked_example();
        let text = h.tau().to_file_string();
        assert!(text.starts_with("tau\n1 -> 1\n"));
        let parsed =
            LeafBijection::parse_file(h.source().clone(), h.target().clone(), &text).unwrap();
        assert_eq!(&parsed, h.tau());
        assert!(
            LeafBijection::parse_file(h.source().clone(), h.target().clone(), "1 -> 1").is_err()
        );
        assert!(
            LeafBijection::parse_file(h.source().clone(), h.target().clone(), "tau\n1 1").is_err()
        );
    }

    #[test]
    fn inclusion_isomorphism_examples() {
        let h = worked_example();
        assert_eq!(check_inclusion_isomorphism(&h, 1, DEFAULT_CAP), Ok(true));
        for (p, q) in [(2, 3), (3, 5), (2, 5), (5, 3)] {
            let h = Homeo::explicit(p, q, 1).unwrap();
            for n in 0..=2 {
                assert_eq!(
                    check_inclusion_isomorphism(&h, n, DEFAULT_CAP),
                    Ok(true),
                    "{p}->{q} n={n}"
                );
            }
        }
    }

    #[test]
    fn corrupted_level_map_is_rejected() {
        let h = worked_example();
        let level2 = partition_at_level(h.source(), 2, DEFAULT_CAP).unwrap();
        // Swap the images of two level-2 words under different level-1 parents.
        let (a, b) = (level2[0].clone(), level2[24].clone());
        let (img_a, img_b) = (
            h.extend_blockwise(&a).unwrap(),
            h.extend_blockwise(&b).unwrap(),
        );
        assert_ne!(a.prefix(1), b.prefix(1));
        let corrupted = |x: &Word| {
            if *x == a {
                Some(img_b.clone())
            } else if *x == b {
                Some(img_a.clone())
            } else {
                h.extend_blockwise(x)
            }
        };
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(
                check_level_map(h.source(), h.target(), 1, DEFAULT_CAP, exec, corrupted),
                Ok(false)
            );
        }
        // Not a bijection at all.
        assert_eq!(
            check_level_map(
                h.source(),
                h.target(),
                1,
                DEFAULT_CAP,
                Execution::Sequential,
                |_| None
            ),
            Ok(false)
        );
    }

    #[test]
    fn state_count_is_internal_nodes() {
        let h = worked_example();
        assert_eq!(h.state_count(), h.source().internal_nodes().len());
    }
}
