//! Spanning trees with low crossing number and the vertex orderings they
//! induce.
//!
//! A set `S` (one vector of the family) crosses a tree edge `{u, v}` when
//! `S_u != S_v`. The builder grows a spanning forest greedily: each round
//! adds the cross-component pair whose crossing sets have the least total
//! weight, then doubles the weight of every set that pair crosses. Weights
//! are `2^e` with integer exponents and pair costs are compared exactly.
//!
//! A depth-first preorder of the tree turns it into an ordering in which
//! each set has at most twice as many alternations as tree crossings.
//! Cost: `O(n^2)` candidate pairs per round, `n - 1` rounds, each pair
//! evaluated with word-parallel popcounts per weight level.

use std::cmp::Ordering as Cmp;

use crate::bits::{xor_and_popcount, BitVector};
use crate::error::{Error, Result};
use crate::ordering::Ordering;
use crate::set_system::VectorFamily;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanningTree {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl SpanningTree {
    /// Validates that `edges` is a spanning tree of `0..n`.
    pub fn new(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParams("spanning tree needs n >= 1".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidParams(format!(
                "a tree on {n} vertices has {} edges, got {}",
                n - 1,
                edges.len()
            )));
        }
        let mut uf = UnionFind::new(n);
        for &(u, v) in &edges {
            if u >= n || v >= n || u == v {
                return Err(Error::InvalidParams(format!("bad tree edge {u}-{v}")));
            }
            if !uf.union(u, v) {
                return Err(Error::InvalidParams(format!("tree edge {u}-{v} closes a cycle")));
            }
        }
        Ok(SpanningTree { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Edge-list text, edges as stored.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj.iter_mut().for_each(|a| a.sort_unstable());
        adj
    }
}

struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

/// Crossing count of every set against a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingProfile {
    pub per_set: Vec<usize>,
    pub max: usize,
}

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::SizeMismatch { expected, got });
    }
    Ok(())
}

pub fn crossing_profile(tree: &SpanningTree, f: &VectorFamily) -> Result<CrossingProfile> {
    check_len(tree.n, f.t())?;
    let per_set: Vec<usize> = f
        .vectors()
        .iter()
        .map(|s| tree.edges.iter().filter(|&&(u, v)| s.get(u) != s.get(v)).count())
        .collect();
    let max = per_set.iter().copied().max().unwrap_or(0);
    Ok(CrossingProfile { per_set, max })
}

/// Per-set weights `2^e`, stored as exponents relative to a running offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightState {
    exponents: Vec<u32>,
    offset: u64,
}

impl WeightState {
    pub fn new(sets: usize) -> Self {
        WeightState {
            exponents: vec![0; sets],
            offset: 0,
        }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Total amount subtracted from every exponent so far.
    pub fn offset(&self) -> u64 {
        self.offset
    }

    /// Doubles the weight of each listed set.
    pub fn double<I: IntoIterator<Item = usize>>(&mut self, sets: I) {
        for s in sets {
            self.exponents[s] += 1;
        }
    }

    /// Divides all weights by the smallest one so the minimum exponent is 0.
    pub fn renormalize(&mut self) {
        if let Some(&min) = self.exponents.iter().min() {
            if min > 0 {
                self.exponents.iter_mut().for_each(|e| *e -= min);
                self.offset += min as u64;
            }
        }
    }

    /// Sets grouped by exponent, highest exponent first.
    fn levels(&self) -> Vec<(u32, BitVector)> {
        let m = self.exponents.len();
        let mut by_exp: std::collections::BTreeMap<u32, BitVector> = Default::default();
        for (s, &e) in self.exponents.iter().enumerate() {
            by_exp.entry(e).or_insert_with(|| BitVector::zeros(m)).set(s, true);
        }
        by_exp.into_iter().rev().collect()
    }
}

/// `columns[u]` has bit `s` set iff point `u` belongs to set `s`.
fn columns_of(f: &VectorFamily) -> Vec<BitVector> {
    let m = f.len();
    let mut cols = vec![BitVector::zeros(m); f.t()];
    for (s, v) in f.vectors().iter().enumerate() {
        for u in v.iter_ones() {
            cols[u].set(s, true);
        }
    }
    cols
}

/// Exact `sum 2^e` over the sets separating a pair, in little-endian limbs.
#[derive(Debug, Clone, PartialEq, Eq)]
struct WideCost(Vec<u64>);

impl WideCost {
    fn zero(limbs: usize) -> Self {
        WideCost(vec![0; limbs])
    }

    fn clear(&mut self) {
        self.0.iter_mut().for_each(|l| *l = 0);
    }

    fn add_shifted(&mut self, value: u64, shift: u32) {
        let word = (shift / 64) as usize;
        let bit = shift % 64;
        let wide = (value as u128) << bit;
        let mut carry = 0u128;
        let parts = [wide as u64, (wide >> 64) as u64];
        for (i, limb) in self.0[word..].iter_mut().enumerate() {
            if i >= parts.len() && carry == 0 {
                break;
            }
            let add = parts.get(i).copied().unwrap_or(0) as u128 + carry;
            let sum = *limb as u128 + add;
            *limb = sum as u64;
            carry = sum >> 64;
        }
    }

    fn cmp(&self, other: &Self) -> Cmp {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

/// The cross-component pair `(u, v)`, `u < v`, of least exact weight,
/// ties broken by smallest `(u, v)`. `component[x]` identifies the tree
/// fragment of `x`; returns `None` when everything is one component.
pub fn select_pair(columns: &[BitVector], weights: &WeightState, component: &[usize]) -> Option<(usize, usize)> {
    let levels = weights.levels();
    let max_exp = levels.first().map_or(0, |(e, _)| *e);
    let sets = weights.exponents.len() as u64;
    let count_bits = 64 - sets.leading_zeros();
    let n = columns.len();
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    let mut candidates = pairs.filter(|&(u, v)| component[u] != component[v]);

    if max_exp + count_bits < 127 {
        let mut best: Option<(u128, usize, usize)> = None;
        for (u, v) in candidates {
            let (cu, cv) = (columns[u].words(), columns[v].words());
            let bound = best.map_or(u128::MAX, |b| b.0);
            let mut cost = 0u128;
            // Levels run from the heaviest down, so partial sums only grow.
            for (e, mask) in &levels {
                cost += (xor_and_popcount(cu, cv, mask.words()) as u128) << e;
                if cost >= bound {
                    break;
                }
            }
            if cost < bound {
                best = Some((cost, u, v));
            }
        }
        best.map(|(_, u, v)| (u, v))
    } else {
        let limbs = (max_exp + count_bits) as usize / 64 + 2;
        let mut best: Option<(WideCost, usize, usize)> = None;
        let mut cost = WideCost::zero(limbs);
        for (u, v) in candidates.by_ref() {
            cost.clear();
            let (cu, cv) = (columns[u].words(), columns[v].words());
            for (e, mask) in &levels {
                cost.add_shifted(xor_and_popcount(cu, cv, mask.words()) as u64, *e);
            }
            match &mut best {
                Some((b, bu, bv)) => {
                    if cost.cmp(b) == Cmp::Less {
                        b.0.copy_from_slice(&cost.0);
                        (*bu, *bv) = (u, v);
                    }
                }
                None => best = Some((cost.clone(), u, v)),
            }
        }
        best.map(|(_, u, v)| (u, v))
    }
}

/// Greedy multiplicative-weights spanning tree over the points `0..f.t()`.
pub fn build_low_crossing_tree(f: &VectorFamily) -> Result<SpanningTree> {
    let n = f.t();
    if n == 0 {
        return Err(Error::InvalidParams("vector length must be at least 1".into()));
    }
    let columns = columns_of(f);
    let mut weights = WeightState::new(f.len());
    let mut uf = UnionFind::new(n);
    let mut edges = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let component: Vec<usize> = (0..n).map(|x| uf.find(x)).collect();
        let (u, v) = select_pair(&columns, &weights, &component)
            .expect("a forest with more than one component has a cross pair");
        weights.double(columns[u].xor(&columns[v]).iter_ones());
        weights.renormalize();
        uf.union(u, v);
        edges.push((u, v));
    }
    SpanningTree::new(n, edges)
}

/// Depth-first preorder from vertex 0, visiting children in increasing index.
pub fn tree_to_order(tree: &SpanningTree) -> Ordering {
    let adj = tree.adjacency();
    let mut seen = vec![false; tree.n];
    let mut perm = Vec::with_capacity(tree.n);
    let mut stack = vec![0usize];
    while let Some(x) = stack.pop() {
        if std::mem::replace(&mut seen[x], true) {
            continue;
        }
        perm.push(x);
        stack.extend(adj[x].iter().rev().filter(|&&y| !seen[y]));
    }
    Ordering::from_perm(perm).expect("preorder of a spanning tree is a permutation")
}

pub fn low_crossing_order(f: &VectorFamily) -> Result<Ordering> {
    Ok(tree_to_order(&build_low_crossing_tree(f)?))
}

/// Alternations of every set after permuting its coordinates by `ord`.
pub fn alternation_profile(f: &VectorFamily, ord: &Ordering) -> Result<Vec<usize>> {
    check_len(f.t(), ord.len())?;
    Ok(f.vectors()
        .iter()
        .map(|s| s.permuted(ord.perm()).alternations())
        .collect())
}

pub fn max_alternations(f: &VectorFamily, ord: &Ordering) -> Result<usize> {
    Ok(alternation_profile(f, ord)?.into_iter().max().unwrap_or(0))
}

/// Outcome of checking `alternations <= 2 * crossings` set by set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub crossings: CrossingProfile,
    pub alternations: Vec<usize>,
    /// Indices of sets breaking the inequality; empty on success.
    pub violations: Vec<usize>,
}

impl Certificate {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn max_alternations(&self) -> usize {
        self.alternations.iter().copied().max().unwrap_or(0)
    }
}

pub fn certify(tree: &SpanningTree, ord: &Ordering, f: &VectorFamily) -> Result<Certificate> {
    let crossings = crossing_profile(tree, f)?;
    let alternations = alternation_profile(f, ord)?;
    let violations = alternations
        .iter()
        .zip(&crossings.per_set)
        .enumerate()
        .filter(|(_, (a, c))| **a > 2 * **c)
        .map(|(s, _)| s)
        .collect();
    Ok(Certificate {
        crossings,
        alternations,
        violations,
    })
}
