//! Reference implementations written independently of the library: plain
//! permutation enumeration, direct position arithmetic and a crossing-based
//! projectivity test.

#![allow(dead_code)]

use deplen::{DepTree, Linearization, Rational};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    q(n, 1)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Parent of each 0-based vertex, from 1-based CoNLL-U style heads.
pub fn parents(heads: &[usize]) -> Vec<Option<usize>> {
    heads.iter().map(|&h| if h == 0 { None } else { Some(h - 1) }).collect()
}

pub fn edges_of(heads: &[usize]) -> Vec<(usize, usize)> {
    parents(heads)
        .iter()
        .enumerate()
        .filter_map(|(d, h)| h.map(|h| (h, d)))
        .collect()
}

/// Coordinate of each vertex. Words: its position. Characters: the
/// midpoint of its span, counting one space between words.
pub fn coordinates(sequence: &[usize], lambdas: Option<&[u64]>) -> Vec<Rational> {
    let mut coords = vec![Rational::zero(); sequence.len()];
    let mut offset = Rational::zero();
    for (pos, &v) in sequence.iter().enumerate() {
        match lambdas {
            None => coords[v] = int(pos as i64 + 1),
            Some(l) => {
                let lambda = int(l[v] as i64);
                coords[v] = &offset + (&lambda + Rational::one()) / int(2);
                offset += lambda + Rational::one();
            }
        }
    }
    coords
}

pub fn lengths(heads: &[usize], sequence: &[usize], lambdas: Option<&[u64]>) -> Vec<Rational> {
    let c = coordinates(sequence, lambdas);
    edges_of(heads)
        .into_iter()
        .map(|(h, d)| {
            let diff = &c[h] - &c[d];
            if diff < Rational::zero() {
                -diff
            } else {
                diff
            }
        })
        .collect()
}

pub fn total<G: Fn(&Rational) -> Rational>(lengths: &[Rational], g: G) -> Rational {
    lengths.iter().map(g).fold(Rational::zero(), |a, b| a + b)
}

/// Exact reference cost functions.
#[derive(Clone, Debug)]
pub enum RefG {
    Power(u32),
    /// Values for `d = 1, 2, ...` (integer lengths only).
    Table(Vec<i64>),
}

impl RefG {
    pub fn eval(&self, d: &Rational) -> Rational {
        match self {
            RefG::Power(k) => {
                let mut x = Rational::one();
                for _ in 0..*k {
                    x *= d;
                }
                x
            }
            RefG::Table(values) => {
                assert!(d.is_integer());
                let i: usize = d.to_integer().try_into().unwrap();
                int(values[i - 1])
            }
        }
    }

    pub fn to_library(&self) -> deplen::CostFunction {
        match self {
            RefG::Power(1) => deplen::CostFunction::identity(),
            RefG::Power(k) => deplen::CostFunction::power(*k as f64).unwrap(),
            RefG::Table(values) => deplen::CostFunction::table(
                values
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (i as u64 + 1, int(v)))
                    .collect(),
                false,
            )
            .unwrap(),
        }
    }
}

/// Two edges cross when exactly one endpoint of one lies strictly inside
/// the other; the root may not be covered by any edge.
pub fn projective_by_crossings(heads: &[usize], sequence: &[usize]) -> bool {
    let mut pos = vec![0; sequence.len()];
    for (i, &v) in sequence.iter().enumerate() {
        pos[v] = i;
    }
    let spans: Vec<(usize, usize)> = edges_of(heads)
        .into_iter()
        .map(|(h, d)| (pos[h].min(pos[d]), pos[h].max(pos[d])))
        .collect();
    let root = heads.iter().position(|&h| h == 0).unwrap();
    if spans.iter().any(|&(a, b)| a < pos[root] && pos[root] < b) {
        return false;
    }
    for (i, &(a, b)) in spans.iter().enumerate() {
        for &(c, d) in &spans[i + 1..] {
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                return false;
            }
        }
    }
    true
}

/// Random labelled tree as 1-based heads: vertices are attached in a random
/// order, each to a random earlier one.
pub fn random_heads<R: Rng>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut heads = vec![0; n];
    for i in 1..n {
        let parent = order[rng.gen_range(0..i)];
        heads[order[i]] = parent + 1;
    }
    heads
}

pub fn heads_from_choices(order: &[usize], choices: &[usize]) -> Vec<usize> {
    let n = order.len();
    let mut heads = vec![0; n];
    for i in 1..n {
        heads[order[i]] = order[choices[i] % i] + 1;
    }
    heads
}

/// Heads of a random tree with `1..=max_n` vertices.
pub fn arb_heads(min_n: usize, max_n: usize) -> impl Strategy<Value = Vec<usize>> {
    (min_n..=max_n).prop_flat_map(|n| {
        (
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            proptest::collection::vec(0usize..1000, n),
        )
            .prop_map(|(order, choices)| heads_from_choices(&order, &choices))
    })
}

/// A tree with a random order and random word lengths.
pub fn arb_instance(min_n: usize, max_n: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<u64>)> {
    arb_heads(min_n, max_n).prop_flat_map(|heads| {
        let n = heads.len();
        (
            Just(heads),
            Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            proptest::collection::vec(1u64..12, n),
        )
    })
}

pub fn tree(heads: &[usize]) -> DepTree {
    DepTree::synthetic(heads).expect("valid tree")
}

pub fn tree_with_lengths(heads: &[usize], lambdas: &[u64]) -> DepTree {
    let l: Vec<usize> = lambdas.iter().map(|&x| x as usize).collect();
    tree(heads).with_char_lengths(&l)
}

pub fn lin(sequence: &[usize]) -> Linearization {
    Linearization::from_sequence(sequence.to_vec()).expect("permutation")
}

/// Minimum cost and all minimizing sequences over `candidates`.
pub fn argmin<I, F>(candidates: I, cost: F) -> (Rational, Vec<Vec<usize>>)
where
    I: IntoIterator<Item = Vec<usize>>,
    F: Fn(&[usize]) -> Rational,
{
    let mut best: Option<Rational> = None;
    let mut all = Vec::new();
    for seq in candidates {
        let c = cost(&seq);
        match &best {
            Some(b) if c > *b => {}
            Some(b) if c == *b => all.push(seq),
            _ => {
                best = Some(c);
                all = vec![seq];
            }
        }
    }
    all.sort();
    (best.expect("non-empty"), all)
}
