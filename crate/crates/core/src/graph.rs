//! Simple undirected graphs stored as symmetric bit matrices.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::io::Read;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::guard::{falling_factorial, Guard};
use crate::ordering::Ordering;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    rows: Vec<BitVector>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges())
            .finish()
    }
}

/// Distinct vertex indices of some graph, in caller-chosen order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexList(Vec<usize>);

impl VertexList {
    pub fn new(vertices: Vec<usize>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for &v in &vertices {
            if v >= n {
                return Err(Error::InvalidVertexList(format!("vertex {v} out of range for n = {n}")));
            }
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidVertexList(format!("vertex {v} repeated")));
            }
        }
        Ok(VertexList(vertices))
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }
}

impl std::fmt::Display for VertexList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            rows: vec![BitVector::zeros(n); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Inserts `{u, v}`; inserting an existing edge is a no-op.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(Error::InvalidParams(format!("edge {u}-{v} out of range for n = {n}")));
        }
        if u == v {
            return Err(Error::InvalidParams(format!("self-loop at {u}")));
        }
        self.rows[u].set(v, true);
        self.rows[v].set(u, true);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u].set(v, false);
        self.rows[v].set(u, false);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u].get(v)
    }

    /// Characteristic vector of `N(v)`.
    #[inline]
    pub fn row(&self, v: usize) -> &BitVector {
        &self.rows[v]
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[v].iter_ones()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(BitVector::count_ones).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n() {
            out.extend(self.rows[u].iter_ones().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{}\n", self.n());
        for (u, v) in self.edges() {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn read_edge_list<R: Read>(mut reader: R) -> std::io::Result<Result<Self>> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        Ok(parse_edge_list(&text))
    }

    pub fn induced_subgraph(&self, s: &VertexList) -> Graph {
        let s = s.as_slice();
        let mut h = Graph::empty(s.len());
        for (i, &u) in s.iter().enumerate() {
            for (j, &v) in s.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    h.rows[i].set(j, true);
                    h.rows[j].set(i, true);
                }
            }
        }
        h
    }

    /// Number of distinct `m x m` adjacency matrices over all ordered
    /// `m`-tuples of distinct vertices.
    pub fn count_distinct_induced(&self, m: usize, guard: &Guard) -> Result<usize> {
        let n = self.n();
        if m > n {
            return Err(Error::InvalidParams(format!("subgraph size {m} exceeds n = {n}")));
        }
        if m == 0 {
            return Err(Error::InvalidParams("subgraph size must be positive".into()));
        }
        if m * (m - 1) / 2 > 128 {
            return Err(Error::InvalidParams(format!(
                "subgraph size {m} too large for packed matrices"
            )));
        }
        let tuples = falling_factorial(n as u64, m as u64).ok_or(Error::Overflow("tuple count"))?;
        guard.check(tuples)?;

        let mut seen: HashSet<u128> = HashSet::new();
        let mut tuple = Vec::with_capacity(m);
        let mut used = vec![false; n];
        self.extend_tuples(m, &mut tuple, &mut used, 0, 0, &mut seen);
        Ok(seen.len())
    }

    // Each new vertex i appends its i adjacency bits to earlier tuple
    // members; the packing is canonical for the matrix on [m].
    fn extend_tuples(
        &self,
        m: usize,
        tuple: &mut Vec<usize>,
        used: &mut [bool],
        key: u128,
        bit: u32,
        seen: &mut HashSet<u128>,
    ) {
        if tuple.len() == m {
            seen.insert(key);
            return;
        }
        for v in 0..self.n() {
            if used[v] {
                continue;
            }
            let mut k = key;
            for (j, &u) in tuple.iter().enumerate() {
                if self.has_edge(u, v) {
                    k |= 1u128 << (bit + j as u32);
                }
            }
            let nbit = bit + tuple.len() as u32;
            used[v] = true;
            tuple.push(v);
            self.extend_tuples(m, tuple, used, k, nbit, seen);
            tuple.pop();
            used[v] = false;
        }
    }

    /// Peels a minimum-degree vertex (smallest index on ties) until empty.
    ///
    /// Returns the peel order and the largest forward degree under it,
    /// which equals the degeneracy.
    pub fn degeneracy_order(&self) -> (Ordering, usize) {
        let n = self.n();
        let mut deg: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut queue: BTreeSet<(usize, usize)> = (0..n).map(|v| (deg[v], v)).collect();
        let mut removed = vec![false; n];
        let mut perm = Vec::with_capacity(n);
        let mut p = 0;
        while let Some((d, v)) = queue.pop_first() {
            p = p.max(d);
            removed[v] = true;
            perm.push(v);
            for w in self.neighbors(v) {
                if !removed[w] {
                    queue.remove(&(deg[w], w));
                    deg[w] -= 1;
                    queue.insert((deg[w], w));
                }
            }
        }
        let ord = Ordering::from_perm(perm).expect("peel order is a permutation");
        (ord, p)
    }

    /// Neighbors of `v` placed after it in `ord`.
    pub fn forward_degree(&self, ord: &Ordering, v: usize) -> usize {
        let pv = ord.position_of(v);
        self.neighbors(v).filter(|&w| ord.position_of(w) > pv).count()
    }
}

/// Parses the edge-list text format: a vertex count line, then `u v` lines.
/// Blank lines and lines starting with `#` are skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing vertex count".into(),
    })?;
    let n: usize = header.parse().map_err(|_| Error::Parse {
        line: ln,
        msg: format!("expected vertex count, found {header:?}"),
    })?;
    let mut g = Graph::empty(n);
    for (ln, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [a, b] = toks.as_slice() else {
            return Err(Error::Parse {
                line: ln,
                msg: format!("expected \"u v\", found {l:?}"),
            });
        };
        let parse = |t: &str| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line: ln,
                msg: format!("bad vertex index {t:?}"),
            })
        };
        let (u, v) = (parse(a)?, parse(b)?);
        if u >= n || v >= n {
            return Err(Error::Parse {
                line: ln,
                msg: format!("endpoint out of range in {u} {v} (n = {n})"),
            });
        }
        if u == v {
            return Err(Error::Parse {
                line: ln,
                msg: format!("self-loop at {u}"),
            });
        }
        g.add_edge(u, v)?;
    }
    Ok(g)
}

/// Graph families available to the generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphKind {
    Gnp { n: usize, p: f64 },
    Path { n: usize },
    Cycle { n: usize },
    Clique { n: usize },
    Star { n: usize },
    Empty { n: usize },
}

/// Deterministic for a fixed `(kind, seed)`; only `Gnp` consumes randomness.
pub fn generate(kind: GraphKind, seed: u64) -> Result<Graph> {
    match kind {
        GraphKind::Gnp { n, p } => {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParams(format!("edge probability {p} not in [0, 1]")));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(p) {
                        g.add_edge(u, v)?;
                    }
                }
            }
            Ok(g)
        }
        GraphKind::Path { n } => {
            let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
            Graph::from_edges(n, &edges)
        }
        GraphKind::Cycle { n } => {
            if n < 3 {
                return Err(Error::InvalidParams(format!("cycle needs n >= 3, got {n}")));
            }
            let mut edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
            edges.push((n - 1, 0));
            Graph::from_edges(n, &edges)
        }
        GraphKind::Clique { n } => {
            let mut g = Graph::empty(n);
            for u in 0..n {
                for v in u + 1..n {
                    g.add_edge(u, v)?;
                }
            }
            Ok(g)
        }
        GraphKind::Star { n } => {
            let edges: Vec<_> = (1..n).map(|v| (0, v)).collect();
            Graph::from_edges(n, &edges)
        }
        GraphKind::Empty { n } => Ok(Graph::empty(n)),
    }
}

/// Parses a probability written as a decimal (`0.25`) or a ratio (`1/4`).
pub fn parse_probability(s: &str) -> Result<f64> {
    let bad = || Error::InvalidParams(format!("bad probability {s:?}"));
    let p = match s.split_once('/') {
        Some((a, b)) => {
            let a: u64 = a.trim().parse().map_err(|_| bad())?;
            let b: u64 = b.trim().parse().map_err(|_| bad())?;
            if b == 0 {
                return Err(bad());
            }
            a as f64 / b as f64
        }
        None => s.trim().parse::<f64>().map_err(|_| bad())?,
    };
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(bad())
    }
}

/// Every labelled graph on `n` vertices, indexed by the bit pattern over
/// sorted vertex pairs. Only sensible for `n <= 6`.
pub fn all_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let total = 1u64 << pairs.len();
    (0..total).map(move |mask| {
        let mut g = Graph::empty(n);
        for (i, &(u, v)) in pairs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    })
}
