//! Dependency trees, linearizations and their validation.
//!
//! Vertices are addressed by 0-based indices into [`DepTree::tokens`].
//! [`Token::index`] keeps the 1-based identifier used by CoNLL-U, which is
//! what reports print.

mod conllu;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::LazyLock;

use rand::Rng;
use regex::Regex;
use serde::{Serialize, Serializer};
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

pub use conllu::{parse_conllu, to_conllu, ConlluError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("sentence has no tokens")]
    Empty,
    #[error("token at position {position} has index {index}, expected {position}")]
    BadIndex { position: usize, index: usize },
    #[error("token {0} has an empty form and zero length")]
    EmptyToken(usize),
    #[error("token {token} has head {head}, which is not a token of the sentence")]
    HeadOutOfRange { token: usize, head: usize },
    #[error("sentence has {0} root tokens, expected exactly one")]
    MultiRoot(usize),
    #[error("head relation contains a cycle through token {0}")]
    Cycle(usize),
    #[error("token {0} is not attached to the tree")]
    Disconnected(usize),
    #[error("punctuation token {0} has dependents and cannot be dropped")]
    PunctuationNotLeaf(usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinearizationError {
    #[error("order has {got} entries for {expected} tokens")]
    WrongLength { expected: usize, got: usize },
    #[error("order is not a permutation: vertex {0} missing or repeated")]
    NotPermutation(usize),
}

/// Unit in which dependency lengths are measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Words,
    Characters,
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Unit::Words => "words",
            Unit::Characters => "chars",
        })
    }
}

/// Number of characters of `form` after canonical composition.
pub fn char_length(form: &str) -> usize {
    form.nfc().count()
}

static PUNCTUATION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\p{P}+$").unwrap());

pub fn is_punctuation(form: &str) -> bool {
    PUNCTUATION.is_match(form)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Token {
    /// 1-based position in the given linear order.
    pub index: usize,
    pub form: String,
    pub char_length: usize,
}

impl Token {
    pub fn new(index: usize, form: impl Into<String>) -> Result<Self, TreeError> {
        let form = form.into();
        let char_length = char_length(&form);
        if char_length == 0 {
            return Err(TreeError::EmptyToken(index));
        }
        Ok(Token {
            index,
            form,
            char_length,
        })
    }

    /// Token without a form, e.g. for scenarios where only λ matters.
    pub fn synthetic(index: usize, char_length: usize) -> Self {
        assert!(char_length > 0, "synthetic tokens need a positive length");
        Token {
            index,
            form: String::new(),
            char_length,
        }
    }

    pub fn label(&self) -> String {
        if self.form.is_empty() {
            format!("#{}", self.index)
        } else {
            self.form.clone()
        }
    }
}

/// Head of a token in a head map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Head {
    Root,
    /// 1-based token index.
    Token(usize),
}

/// A validated rooted dependency tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepTree {
    tokens: Vec<Token>,
    heads: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    root: usize,
}

impl DepTree {
    /// Build a tree from tokens and a map from 1-based token index to head.
    pub fn build(tokens: Vec<Token>, heads: &BTreeMap<usize, Head>) -> Result<Self, TreeError> {
        let mut vertex_heads = Vec::with_capacity(tokens.len());
        for token in &tokens {
            match heads.get(&token.index) {
                None => return Err(TreeError::Disconnected(token.index)),
                Some(Head::Root) => vertex_heads.push(None),
                Some(Head::Token(h)) => {
                    if *h == 0 || *h > tokens.len() {
                        return Err(TreeError::HeadOutOfRange {
                            token: token.index,
                            head: *h,
                        });
                    }
                    vertex_heads.push(Some(h - 1));
                }
            }
        }
        Self::from_vertex_heads(tokens, vertex_heads)
    }

    /// Build from CoNLL-style head ids: `heads[i]` is the 1-based head of
    /// token `i + 1`, with 0 marking the root.
    pub fn from_head_ids(tokens: Vec<Token>, heads: &[usize]) -> Result<Self, TreeError> {
        let map = heads
            .iter()
            .enumerate()
            .map(|(i, &h)| (i + 1, if h == 0 { Head::Root } else { Head::Token(h) }))
            .collect();
        Self::build(tokens, &map)
    }

    /// Tree over synthetic one-character tokens from CoNLL-style head ids.
    pub fn synthetic(heads: &[usize]) -> Result<Self, TreeError> {
        let tokens = (1..=heads.len()).map(|i| Token::synthetic(i, 1)).collect();
        Self::from_head_ids(tokens, heads)
    }

    /// Build from 0-based vertex heads (`None` for the root).
    pub fn from_vertex_heads(tokens: Vec<Token>, heads: Vec<Option<usize>>) -> Result<Self, TreeError> {
        let n = tokens.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if heads.len() != n {
            let missing = heads.len().min(n) + 1;
            return Err(TreeError::Disconnected(missing));
        }
        for (position, token) in tokens.iter().enumerate() {
            if token.index != position + 1 {
                return Err(TreeError::BadIndex {
                    position: position + 1,
                    index: token.index,
                });
            }
            if token.char_length == 0 {
                return Err(TreeError::EmptyToken(token.index));
            }
        }
        for (v, h) in heads.iter().enumerate() {
            if let Some(h) = *h {
                if h >= n {
                    return Err(TreeError::HeadOutOfRange {
                        token: v + 1,
                        head: h + 1,
                    });
                }
            }
        }
        // Every head chain must end at a root; a chain that revisits a
        // vertex is a cycle.
        let mut state = vec![0u8; n]; // 0 unknown, 1 on current chain, 2 reaches a root
        for v in 0..n {
            if heads[v].is_none() {
                state[v] = 2;
            }
        }
        for start in 0..n {
            let mut chain = Vec::new();
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                chain.push(v);
                v = heads[v].expect("vertices without a head are marked");
            }
            if state[v] == 1 {
                return Err(TreeError::Cycle(v + 1));
            }
            for u in chain {
                state[u] = 2;
            }
        }
        let roots: Vec<usize> = (0..n).filter(|&v| heads[v].is_none()).collect();
        if roots.len() != 1 {
            return Err(TreeError::MultiRoot(roots.len()));
        }
        let root = roots[0];

        let mut children = vec![Vec::new(); n];
        for (v, h) in heads.iter().enumerate() {
            if let Some(h) = *h {
                children[h].push(v);
            }
        }
        let tree = DepTree {
            tokens,
            heads,
            children,
            root,
        };
        debug_assert_eq!(tree.edges().count(), n - 1);
        Ok(tree)
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    pub fn token(&self, v: usize) -> &Token {
        &self.tokens[v]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn head(&self, v: usize) -> Option<usize> {
        self.heads[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Edges as `(head, dependent)` vertex pairs, in dependent order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.heads.iter().enumerate().filter_map(|(d, h)| h.map(|h| (h, d)))
    }

    pub fn edge_count(&self) -> usize {
        self.len() - 1
    }

    pub fn has_edge(&self, head: usize, dependent: usize) -> bool {
        dependent < self.len() && self.heads[dependent] == Some(head)
    }

    /// Vertices adjacent to `v` (head first, then dependents).
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.heads[v].into_iter().chain(self.children[v].iter().copied())
    }

    /// True when `ancestor` dominates `v` (reflexive).
    pub fn dominates(&self, ancestor: usize, mut v: usize) -> bool {
        loop {
            if v == ancestor {
                return true;
            }
            match self.heads[v] {
                Some(h) => v = h,
                None => return false,
            }
        }
    }

    /// Subtree sizes indexed by vertex.
    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![1; self.len()];
        for v in self.postorder() {
            if let Some(h) = self.heads[v] {
                sizes[h] += sizes[v];
            }
        }
        sizes
    }

    /// Vertices with every dependent listed before its head.
    pub fn postorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                order.push(v);
            } else {
                stack.push((v, true));
                for &c in self.children[v].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// CoNLL-style head ids (0 for the root).
    pub fn head_ids(&self) -> Vec<usize> {
        self.heads.iter().map(|h| h.map_or(0, |h| h + 1)).collect()
    }

    /// Remove tokens whose form is made of punctuation only. Such tokens
    /// must be leaves; the remaining tokens are renumbered in order.
    pub fn drop_punctuation(&self) -> Result<DepTree, TreeError> {
        let keep: Vec<bool> = self.tokens.iter().map(|t| !is_punctuation(&t.form)).collect();
        for (v, &k) in keep.iter().enumerate() {
            if !k && !self.children[v].is_empty() {
                return Err(TreeError::PunctuationNotLeaf(self.tokens[v].index));
            }
        }
        let mut new_index = vec![usize::MAX; self.len()];
        let mut tokens = Vec::new();
        for (v, token) in self.tokens.iter().enumerate() {
            if keep[v] {
                new_index[v] = tokens.len();
                tokens.push(Token {
                    index: tokens.len() + 1,
                    ..token.clone()
                });
            }
        }
        let heads = (0..self.len())
            .filter(|&v| keep[v])
            .map(|v| self.heads[v].map(|h| new_index[h]))
            .collect();
        DepTree::from_vertex_heads(tokens, heads)
    }

    /// Uniformly random rooted labelled tree on `n` synthetic tokens.
    ///
    /// Draws a random root and a random head for every other vertex,
    /// rejecting draws that are not trees.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DepTree {
        assert!(n > 0);
        loop {
            let root = rng.gen_range(0..n);
            let heads: Vec<Option<usize>> = (0..n)
                .map(|v| if v == root { None } else { Some(rng.gen_range(0..n)) })
                .collect();
            if heads.iter().enumerate().any(|(v, h)| *h == Some(v)) {
                continue;
            }
            let tokens = (1..=n).map(|i| Token::synthetic(i, 1)).collect();
            if let Ok(tree) = DepTree::from_vertex_heads(tokens, heads) {
                return tree;
            }
        }
    }

    /// Same tree with the given character lengths.
    pub fn with_char_lengths(&self, lengths: &[usize]) -> DepTree {
        assert_eq!(lengths.len(), self.len());
        let tokens = self
            .tokens
            .iter()
            .zip(lengths)
            .map(|(t, &l)| Token {
                char_length: l,
                ..t.clone()
            })
            .collect();
        DepTree { tokens, ..self.clone() }
    }
}

/// Assignment of the tree's vertices to positions `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Linearization {
    sequence: Vec<usize>,
    positions: Vec<usize>,
}

impl Linearization {
    /// The order in which the tokens were given.
    pub fn identity(n: usize) -> Self {
        Linearization {
            sequence: (0..n).collect(),
            positions: (0..n).collect(),
        }
    }

    /// From the vertices listed left to right.
    pub fn from_sequence(sequence: Vec<usize>) -> Result<Self, LinearizationError> {
        let n = sequence.len();
        let mut positions = vec![usize::MAX; n];
        for (p, &v) in sequence.iter().enumerate() {
            if v >= n || positions[v] != usize::MAX {
                return Err(LinearizationError::NotPermutation(v));
            }
            positions[v] = p;
        }
        Ok(Linearization { sequence, positions })
    }

    /// From 1-based token indices listed left to right.
    pub fn from_token_ids(ids: &[usize]) -> Result<Self, LinearizationError> {
        let seq = ids
            .iter()
            .map(|&i| i.checked_sub(1).ok_or(LinearizationError::NotPermutation(0)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_sequence(seq)
    }

    pub fn check_for(&self, tree: &DepTree) -> Result<(), LinearizationError> {
        if self.len() != tree.len() {
            return Err(LinearizationError::WrongLength {
                expected: tree.len(),
                got: self.len(),
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// 0-based position of vertex `v`.
    pub fn position(&self, v: usize) -> usize {
        self.positions[v]
    }

    /// Vertices left to right.
    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    /// 1-based token indices left to right.
    pub fn token_ids(&self) -> Vec<usize> {
        self.sequence.iter().map(|v| v + 1).collect()
    }

    pub fn reversed(&self) -> Self {
        let sequence: Vec<usize> = self.sequence.iter().rev().copied().collect();
        Self::from_sequence(sequence).expect("reversal of a permutation")
    }
}

impl fmt::Display for Linearization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids: Vec<String> = self.token_ids().iter().map(|i| i.to_string()).collect();
        f.write_str(&ids.join(" "))
    }
}

impl Serialize for Linearization {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.token_ids().serialize(serializer)
    }
}

/// Projectivity: for every edge, all tokens strictly between its endpoints
/// are dominated by the head.
pub fn is_projective(tree: &DepTree, lin: &Linearization) -> bool {
    tree.edges().all(|(h, d)| {
        let (lo, hi) = {
            let (a, b) = (lin.position(h), lin.position(d));
            (a.min(b), a.max(b))
        };
        lin.sequence()[lo + 1..hi].iter().all(|&v| tree.dominates(h, v))
    })
}
