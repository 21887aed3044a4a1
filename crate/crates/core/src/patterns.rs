//! The bipartite patterns `U(k, d)` and `K_{s,t}`: construction, detection,
//! and the shatter bound that `U(k, d)`-freeness implies.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexList};
use crate::guard::{binomial, Guard};
use crate::set_system::{robust_shatter_threshold, MAX_TRACE_BITS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatternParams {
    k: usize,
    d: usize,
}

impl PatternParams {
    pub fn new(k: usize, d: usize) -> Result<Self> {
        if k == 0 || d == 0 {
            return Err(Error::InvalidParams(format!(
                "pattern needs k >= 1 and d >= 1, got k = {k}, d = {d}"
            )));
        }
        if d > MAX_TRACE_BITS {
            return Err(Error::InvalidParams(format!("d = {d} too large")));
        }
        Ok(PatternParams { k, d })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `|B| = k * 2^d`.
    pub fn b_size(&self) -> Option<usize> {
        self.k.checked_mul(1usize.checked_shl(self.d as u32)?)
    }
}

/// A built `U(k, d)` with its two sides.
#[derive(Debug, Clone)]
pub struct UPattern {
    pub graph: Graph,
    pub a_side: VertexList,
    pub b_side: VertexList,
}

/// Two vertex lists forming a pattern copy inside a host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub a_side: VertexList,
    pub b_side: VertexList,
}

/// `U(k, d)`: vertices `0..d` form `A`; the `B` vertices come in blocks of
/// `k`, one block per subset `C` of `A` in increasing binary order (bit `i`
/// of `C` stands for vertex `i`), each adjacent to exactly `C`.
pub fn build_u(k: usize, d: usize, guard: &Guard) -> Result<UPattern> {
    let params = PatternParams::new(k, d)?;
    let b = params.b_size().ok_or(Error::Overflow("U(k,d) size"))?;
    let n = b.checked_add(d).ok_or(Error::Overflow("U(k,d) size"))?;
    guard.check((n as u128).saturating_mul(d as u128))?;
    let mut g = Graph::empty(n);
    for c in 0..1usize << d {
        for j in 0..k {
            let v = d + c * k + j;
            for i in (0..d).filter(|i| c >> i & 1 == 1) {
                g.add_edge(i, v)?;
            }
        }
    }
    Ok(UPattern {
        graph: g,
        a_side: VertexList::new((0..d).collect(), n)?,
        b_side: VertexList::new((d..n).collect(), n)?,
    })
}

#[inline]
fn trace_on(g: &Graph, a: &[usize], v: usize) -> usize {
    a.iter()
        .enumerate()
        .fold(0, |acc, (i, &u)| acc | (g.has_edge(u, v) as usize) << i)
}

/// Searches for disjoint `X`, `Y` with `G[X, Y]` a copy of `U(k, d)`.
///
/// Edges inside `X` or `Y` do not matter, so it suffices to scan `d`-sets `A`
/// and count, for each `C` of `A`, the outside vertices whose trace on `A` is
/// `C`. The first `A` in lexicographic order wins; `B` takes the `k`
/// smallest vertices of each trace, listed trace by trace.
pub fn contains_u(g: &Graph, k: usize, d: usize, guard: &Guard) -> Result<Option<Witness>> {
    let params = PatternParams::new(k, d)?;
    let n = g.n();
    if d > n {
        return Ok(None);
    }
    let full = 1usize << d;
    let sets = binomial(n as u64, d as u64)
        .and_then(|b| b.checked_mul(full as u128))
        .ok_or(Error::Overflow("U(k,d) search"))?;
    guard.check(sets)?;
    if params.b_size().is_none_or(|b| b + d > n) {
        return Ok(None);
    }

    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); full];
    for a in (0..n).combinations(d) {
        buckets.iter_mut().for_each(Vec::clear);
        let mut in_a = vec![false; n];
        a.iter().for_each(|&u| in_a[u] = true);
        for v in (0..n).filter(|&v| !in_a[v]) {
            let bucket = &mut buckets[trace_on(g, &a, v)];
            if bucket.len() < k {
                bucket.push(v);
            }
        }
        if buckets.iter().all(|b| b.len() >= k) {
            let b: Vec<usize> = buckets.iter().flatten().copied().collect();
            return Ok(Some(Witness {
                a_side: VertexList::new(a, n)?,
                b_side: VertexList::new(b, n)?,
            }));
        }
    }
    Ok(None)
}

/// Checks that `G[a, b]` is a copy of `U(k, |a|)`: the sides are disjoint and
/// every subset of `a` is the trace of exactly `k` vertices of `b`.
pub fn is_u_copy(g: &Graph, a: &VertexList, b: &VertexList, k: usize) -> bool {
    let (a, b) = (a.as_slice(), b.as_slice());
    if a.iter().any(|u| b.contains(u)) || a.len() > MAX_TRACE_BITS {
        return false;
    }
    let mut counts = vec![0usize; 1 << a.len()];
    for &v in b {
        counts[trace_on(g, a, v)] += 1;
    }
    counts.iter().all(|&c| c == k)
}

/// Searches for a (not necessarily induced) `K_{s,t}`: an `s`-set with at
/// least `t` common neighbors. Returns the first `s`-set in lexicographic
/// order and its `t` smallest common neighbors.
pub fn contains_kst(g: &Graph, s: usize, t: usize, guard: &Guard) -> Result<Option<Witness>> {
    if s == 0 || t == 0 {
        return Err(Error::InvalidParams("K_{s,t} needs s, t >= 1".into()));
    }
    let n = g.n();
    if s + t > n {
        return Ok(None);
    }
    guard.check(binomial(n as u64, s as u64).ok_or(Error::Overflow("K_{s,t} search"))?)?;
    for set in (0..n).combinations(s) {
        let mut common = g.row(set[0]).clone();
        for &u in &set[1..] {
            common.intersect_with(g.row(u));
        }
        if common.count_ones() >= t {
            let b: Vec<usize> = common.iter_ones().take(t).collect();
            return Ok(Some(Witness {
                a_side: VertexList::new(set, n)?,
                b_side: VertexList::new(b, n)?,
            }));
        }
    }
    Ok(None)
}

/// Upper bound on the primal shatter function of the adjacency rows of any
/// `U(k, d)`-free graph on `n` vertices.
///
/// If `t` coordinates carried `robust_shatter_threshold(t, d, k + d)` distinct
/// projections, some `d` of them would be shattered `k + 2d` times; dropping
/// the at most `d` rows that belong to `A` itself still leaves `k` vertices
/// per trace, i.e. a copy of `U(k, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShatterBound {
    n: usize,
    d: usize,
    k: usize,
}

pub fn shatter_bound_for_ufree(n: usize, d: usize, k: usize) -> Result<ShatterBound> {
    PatternParams::new(k, d)?;
    Ok(ShatterBound { n, d, k })
}

impl ShatterBound {
    /// The bound at `t`; `None` for `t <= d`, where it is not claimed.
    pub fn eval(&self, t: usize) -> Result<Option<u128>> {
        if t > self.n {
            return Err(Error::InvalidParams(format!("t = {t} exceeds n = {}", self.n)));
        }
        if t <= self.d {
            return Ok(None);
        }
        let th = robust_shatter_threshold(t as u64, self.d as u64, (self.k + self.d) as u64)?;
        Ok(Some(th - 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};

    fn g() -> Guard {
        Guard::default()
    }

    #[test]
    fn build_u_examples() {
        let u = build_u(1, 1, &g()).unwrap();
        assert_eq!(u.graph.n(), 3);
        assert_eq!(u.a_side.as_slice(), &[0]);
        assert_eq!(u.b_side.as_slice(), &[1, 2]);
        // C = {} is vertex 1, C = {a} is vertex 2
        assert_eq!(u.graph.edges(), vec![(0, 2)]);

        let u = build_u(2, 2, &g()).unwrap();
        assert_eq!(u.graph.n(), 10);
        assert_eq!(u.graph.edge_count(), 2 * 2 * 2);
        assert!(is_u_copy(&u.graph, &u.a_side, &u.b_side, 2));

        assert!(build_u(0, 2, &g()).is_err());
        assert!(build_u(1, 3, &Guard::new(5)).is_err());
    }

    #[test]
    fn u_dd_contains_every_bipartite_pattern() {
        // Each of the 16 bipartite patterns on 2+2 vertices appears as
        // G[X, Y] with X = A and Y two B-vertices, one per required trace.
        let u = build_u(2, 2, &g()).unwrap();
        let b_of = |c: usize, j: usize| 2 + c * 2 + j;
        for pattern in 0u32..16 {
            let want = |x: usize, y: usize| pattern >> (2 * y + x) & 1 == 1;
            let c0 = (0..2).filter(|&x| want(x, 0)).fold(0, |a, x| a | 1 << x);
            let c1 = (0..2).filter(|&x| want(x, 1)).fold(0, |a, x| a | 1 << x);
            let ys = [b_of(c0, 0), b_of(c1, 1)];
            for x in 0..2 {
                for (yi, &y) in ys.iter().enumerate() {
                    assert_eq!(u.graph.has_edge(x, y), want(x, yi));
                }
            }
            // induced: no edges inside X or Y
            assert!(!u.graph.has_edge(0, 1) && !u.graph.has_edge(ys[0], ys[1]));
        }
    }

    #[test]
    fn contains_u_examples() {
        let u = build_u(2, 2, &g()).unwrap();
        let w = contains_u(&u.graph, 2, 2, &g()).unwrap().unwrap();
        assert!(is_u_copy(&u.graph, &w.a_side, &w.b_side, 2));

        let k3 = generate(GraphKind::Clique { n: 3 }, 0).unwrap();
        assert_eq!(contains_u(&k3, 1, 1, &g()).unwrap(), None);

        let p3 = generate(GraphKind::Path { n: 3 }, 0).unwrap();
        let w = contains_u(&p3, 1, 1, &g()).unwrap().unwrap();
        assert_eq!(w.a_side.as_slice(), &[0]);
        // trace {} first (vertex 2), then trace {a} (vertex 1)
        assert_eq!(w.b_side.as_slice(), &[2, 1]);

        let big = generate(GraphKind::Empty { n: 200 }, 0).unwrap();
        assert!(matches!(contains_u(&big, 1, 3, &g()), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn u_duality() {
        for (k, d) in [(1, 1), (2, 1), (1, 2), (2, 2), (3, 2), (1, 3)] {
            let u = build_u(k, d, &g()).unwrap();
            assert!(contains_u(&u.graph, k, d, &g()).unwrap().is_some(), "k={k} d={d}");
            assert!(contains_u(&u.graph, k + 1, d, &g()).unwrap().is_none(), "k={k} d={d}");
        }
    }

    #[test]
    fn kst_examples() {
        let c4 = generate(GraphKind::Cycle { n: 4 }, 0).unwrap();
        let w = contains_kst(&c4, 2, 2, &g()).unwrap().unwrap();
        assert_eq!(w.a_side.as_slice(), &[0, 2]);
        assert_eq!(w.b_side.as_slice(), &[1, 3]);

        let c5 = generate(GraphKind::Cycle { n: 5 }, 0).unwrap();
        assert_eq!(contains_kst(&c5, 2, 2, &g()).unwrap(), None);

        let star = generate(GraphKind::Star { n: 6 }, 0).unwrap();
        let w = contains_kst(&star, 1, 5, &g()).unwrap().unwrap();
        assert_eq!(w.a_side.as_slice(), &[0]);
        assert_eq!(w.b_side.as_slice(), &[1, 2, 3, 4, 5]);
    }

    #[test]
    fn shatter_bound_examples() {
        let b = shatter_bound_for_ufree(20, 1, 1).unwrap();
        // 1 + (2 + 1 - 1) * 2 * C(10, 1) + 1 - 1
        assert_eq!(b.eval(10).unwrap(), Some(41));
        assert_eq!(b.eval(1).unwrap(), None);
        let b = shatter_bound_for_ufree(20, 2, 2).unwrap();
        assert_eq!(b.eval(5).unwrap(), Some(robust_shatter_threshold(5, 2, 4).unwrap() - 1));
        assert_eq!(b.eval(2).unwrap(), None);
        assert!(b.eval(21).is_err());
    }
}
