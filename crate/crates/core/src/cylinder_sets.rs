//! The prefix-free covering set `C_{K,Q}` of minimal cylinders of diameter at most `1/Q`.
//!
//! Built by depth-first expansion from the empty word: a node is split into
//! its `K` children while its diameter exceeds `1/Q`, and becomes a leaf as
//! soon as it does not. Every internal node therefore has exactly `K`
//! children, which are allocated contiguously in the node arena.

use std::io::{BufRead, Write};

use crate::continued_fractions::{Convergents, KContext, Word};
use crate::error::{Error, Result};
use crate::exact_numbers::Surd;

pub const CACHE_MAGIC: &str = "spectra-cylinders v1";

#[derive(Clone, Debug)]
pub struct TrieNode {
    pub parent: Option<usize>,
    /// Digit on the edge from the parent; 0 for the root.
    pub digit: u8,
    pub depth: usize,
    first_child: Option<usize>,
    leaf: Option<usize>,
}

/// Prefix closure of a prefix-free word set, as an arena of nodes.
#[derive(Clone, Debug)]
pub struct PrefixTrie {
    k: u8,
    nodes: Vec<TrieNode>,
}

impl PrefixTrie {
    fn new(k: u8) -> PrefixTrie {
        PrefixTrie { k, nodes: vec![TrieNode { parent: None, digit: 0, depth: 0, first_child: None, leaf: None }] }
    }

    pub const ROOT: usize = 0;

    fn expand(&mut self, node: usize) -> usize {
        let first = self.nodes.len();
        let depth = self.nodes[node].depth + 1;
        for digit in 1..=self.k {
            self.nodes.push(TrieNode { parent: Some(node), digit, depth, first_child: None, leaf: None });
        }
        self.nodes[node].first_child = Some(first);
        first
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, id: usize) -> &TrieNode {
        &self.nodes[id]
    }

    pub fn child(&self, id: usize, digit: u8) -> Option<usize> {
        debug_assert!(digit >= 1 && digit <= self.k);
        self.nodes[id].first_child.map(|f| f + usize::from(digit) - 1)
    }

    pub fn children(&self, id: usize) -> impl Iterator<Item = usize> {
        let k = usize::from(self.k);
        self.nodes[id].first_child.into_iter().flat_map(move |f| f..f + k)
    }

    pub fn is_leaf(&self, id: usize) -> bool {
        self.nodes[id].first_child.is_none()
    }

    /// Index of the leaf in the lexicographic leaf order, if `id` is a leaf.
    pub fn leaf_index(&self, id: usize) -> Option<usize> {
        self.nodes[id].leaf
    }

    pub fn word_of(&self, mut id: usize) -> Word {
        let mut digits = Vec::with_capacity(self.nodes[id].depth);
        while let Some(parent) = self.nodes[id].parent {
            digits.push(self.nodes[id].digit);
            id = parent;
        }
        digits.reverse();
        Word::from_trusted(digits, self.k)
    }

    /// Walks `digits` from `start`; returns the node reached, stopping early at a leaf.
    pub fn walk_from(&self, start: usize, digits: &[u8]) -> (usize, usize) {
        let mut node = start;
        for (consumed, &digit) in digits.iter().enumerate() {
            match self.child(node, digit) {
                Some(c) => node = c,
                None => return (node, consumed),
            }
        }
        (node, digits.len())
    }

    /// Node spelled by `digits` from the root, if every proper prefix is internal.
    pub fn locate(&self, digits: &[u8]) -> Option<usize> {
        let (node, consumed) = self.walk_from(Self::ROOT, digits);
        (consumed == digits.len()).then_some(node)
    }
}

/// `C_{K,Q}` with its prefix trie and per-leaf convergents, diameters and midpoints.
#[derive(Clone, Debug)]
pub struct CylinderSet {
    ctx: KContext,
    q: u64,
    trie: PrefixTrie,
    leaves: Vec<Word>,
    leaf_nodes: Vec<usize>,
    convergents: Vec<Convergents>,
    diams: Vec<Surd>,
    mids: Vec<Surd>,
}

pub fn build_cylinders(ctx: &KContext, q: u64) -> Result<CylinderSet> {
    if q == 0 || ctx.diam_at_most(&Convergents::empty(), q) {
        return Err(Error::ResolutionTooSmall { k: ctx.k(), q });
    }
    let mut trie = PrefixTrie::new(ctx.k());
    let mut leaf_nodes = Vec::new();
    let mut convergents = Vec::new();
    let mut stack = vec![(PrefixTrie::ROOT, Convergents::empty())];
    while let Some((node, conv)) = stack.pop() {
        if node != PrefixTrie::ROOT && ctx.diam_at_most(&conv, q) {
            trie.nodes[node].leaf = Some(leaf_nodes.len());
            leaf_nodes.push(node);
            convergents.push(conv);
            continue;
        }
        let first = trie.expand(node);
        for digit in (1..=ctx.k()).rev() {
            stack.push((first + usize::from(digit) - 1, conv.push(digit)));
        }
    }
    Ok(CylinderSet::assemble(ctx.clone(), q, trie, leaf_nodes, convergents))
}

impl CylinderSet {
    fn assemble(
        ctx: KContext,
        q: u64,
        trie: PrefixTrie,
        leaf_nodes: Vec<usize>,
        convergents: Vec<Convergents>,
    ) -> CylinderSet {
        let leaves = leaf_nodes.iter().map(|&n| trie.word_of(n)).collect();
        let diams = convergents.iter().map(|c| ctx.diam_of(c)).collect();
        let mids = convergents.iter().map(|c| ctx.mid_of(c)).collect();
        CylinderSet { ctx, q, trie, leaves, leaf_nodes, convergents, diams, mids }
    }

    pub fn ctx(&self) -> &KContext {
        &self.ctx
    }

    pub fn k(&self) -> u8 {
        self.ctx.k()
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn trie(&self) -> &PrefixTrie {
        &self.trie
    }

    pub fn len(&self) -> usize {
        self.leaves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leaves.is_empty()
    }

    /// Leaves in lexicographic order.
    pub fn leaves(&self) -> &[Word] {
        &self.leaves
    }

    pub fn leaf(&self, i: usize) -> &Word {
        &self.leaves[i]
    }

    pub fn leaf_node(&self, i: usize) -> usize {
        self.leaf_nodes[i]
    }

    pub fn convergents(&self, i: usize) -> &Convergents {
        &self.convergents[i]
    }

    pub fn diam(&self, i: usize) -> &Surd {
        &self.diams[i]
    }

    pub fn mid(&self, i: usize) -> &Surd {
        &self.mids[i]
    }

    /// Index of the unique leaf that is a prefix of `digits`.
    pub fn prefix_leaf_index(&self, digits: &[u8]) -> Result<usize> {
        let (node, consumed) = self.trie.walk_from(PrefixTrie::ROOT, digits);
        self.trie.leaf_index(node).ok_or_else(|| {
            Error::InsufficientContext(format!(
                "{consumed} digits read without reaching a leaf of C_{{{},{}}}",
                self.k(),
                self.q
            ))
        })
    }

    pub fn prefix_leaf(&self, w: &Word) -> Result<&Word> {
        self.prefix_leaf_index(w.digits()).map(|i| &self.leaves[i])
    }

    /// Writes the line-oriented cache: magic line, `K Q` header, one leaf per line.
    pub fn write_cache<W: Write>(&self, mut out: W) -> Result<()> {
        if self.k() > 9 {
            return Err(Error::Cache(format!(
                "cache format stores one character per digit; K = {} is not supported",
                self.k()
            )));
        }
        writeln!(out, "{CACHE_MAGIC}")?;
        writeln!(out, "{} {}", self.k(), self.q)?;
        for w in &self.leaves {
            let line: String = w.digits().iter().map(|d| char::from(b'0' + d)).collect();
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    /// Reads a cache written by [`CylinderSet::write_cache`] and re-checks that the
    /// leaves are the prefix-free, covering, minimal set for `(ctx, q)`.
    pub fn read_cache<R: BufRead>(ctx: &KContext, q: u64, input: R) -> Result<CylinderSet> {
        let mut lines = input.lines();
        let mut next = || -> Result<String> {
            lines.next().ok_or_else(|| Error::Cache("unexpected end of file".into()))?.map_err(Error::from)
        };
        if next()? != CACHE_MAGIC {
            return Err(Error::Cache("unknown cache version".into()));
        }
        let header = next()?;
        if header != format!("{} {}", ctx.k(), q) {
            return Err(Error::Cache(format!("header {header:?} does not match K = {}, Q = {q}", ctx.k())));
        }
        let mut trie = PrefixTrie::new(ctx.k());
        let mut leaf_nodes = Vec::new();
        let mut convergents = Vec::new();
        let mut previous: Option<Vec<u8>> = None;
        for line in lines {
            let line = line?;
            let digits: Vec<u8> = line.bytes().map(|c| c.wrapping_sub(b'0')).collect();
            let word = Word::new(digits, ctx.k()).map_err(|e| Error::Cache(format!("leaf {line:?}: {e}")))?;
            if word.is_empty() || previous.as_deref().is_some_and(|p| p >= word.digits()) {
                return Err(Error::Cache(format!("leaf {line:?} is empty or out of lexicographic order")));
            }
            let mut node = PrefixTrie::ROOT;
            let mut conv = Convergents::empty();
            for &digit in word.digits() {
                if trie.nodes[node].leaf.is_some() {
                    return Err(Error::Cache(format!("leaf {line:?} extends another leaf")));
                }
                if ctx.diam_at_most(&conv, q) {
                    return Err(Error::Cache(format!("leaf {line:?} is not minimal")));
                }
                let first = match trie.nodes[node].first_child {
                    Some(f) => f,
                    None => trie.expand(node),
                };
                node = first + usize::from(digit) - 1;
                conv = conv.push(digit);
            }
            if trie.nodes[node].first_child.is_some() || !ctx.diam_at_most(&conv, q) {
                return Err(Error::Cache(format!("leaf {line:?} is not a minimal cylinder")));
            }
            trie.nodes[node].leaf = Some(leaf_nodes.len());
            leaf_nodes.push(node);
            convergents.push(conv);
            previous = Some(word.digits().to_vec());
        }
        let uncovered =
            (0..trie.nodes.len()).any(|n| trie.nodes[n].first_child.is_none() && trie.nodes[n].leaf.is_none());
        if uncovered || leaf_nodes.is_empty() {
            return Err(Error::Cache("leaves do not cover every infinite word".into()));
        }
        Ok(CylinderSet::assemble(ctx.clone(), q, trie, leaf_nodes, convergents))
    }
}
