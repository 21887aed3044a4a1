//! Test corpora: projective norm graphs and induced samples.

pub mod field;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexList};
use crate::guard::Guard;

pub use field::{find_irreducible, FieldElem, FieldSpec};

/// Projective norm graph over `GF(q^(d-1)) x GF(q)*`.
///
/// Vertex `(A, a)` gets index `rank(A) * (q - 1) + (a - 1)`, where `rank` is
/// the lexicographic rank of `A`'s coefficient vector. Distinct `(A, a)` and
/// `(B, b)` are adjacent iff `N(A + B) = a * b`.
pub fn build_norm_graph(q: u64, d: usize, guard: &Guard) -> Result<Graph> {
    if d < 2 {
        return Err(Error::InvalidParams(format!("norm graphs need d >= 2, got {d}")));
    }
    let field = FieldSpec::with_degree(q, d - 1)?;
    let size = field.order()?;
    let n = size.checked_mul(q - 1).ok_or(Error::Overflow("norm graph size"))? as usize;
    guard.check((n as u128) * (n as u128).saturating_sub(1) / 2)?;

    let elems: Vec<FieldElem> = field.elements()?.collect();
    let norms = elems.iter().map(|a| field.norm(a)).collect::<Result<Vec<u64>>>()?;
    let per = (q - 1) as usize;
    let mut g = Graph::empty(n);
    for (ra, a_elem) in elems.iter().enumerate() {
        for (rb, b_elem) in elems.iter().enumerate().skip(ra) {
            let nsum = norms[field.rank(&field.add(a_elem, b_elem)) as usize];
            for a in 1..q {
                for b in 1..q {
                    let (u, v) = (ra * per + (a - 1) as usize, rb * per + (b - 1) as usize);
                    if u < v && nsum == a * b % q {
                        g.add_edge(u, v)?;
                    }
                }
            }
        }
    }
    Ok(g)
}

/// `q^(d-1) * (q - 1)`.
pub fn norm_graph_order(q: u64, d: usize) -> Option<u64> {
    q.checked_pow(d.checked_sub(1)? as u32)?.checked_mul(q.checked_sub(1)?)
}

/// Deterministic random induced subgraphs: `count` samples for each entry of
/// `sizes`, each on a uniformly random vertex subset kept in ascending order.
pub fn hereditary_closure_sample(g: &Graph, sizes: &[usize], count: usize, seed: u64) -> Result<Vec<Graph>> {
    if let Some(&s) = sizes.iter().find(|&&s| s == 0 || s > g.n()) {
        return Err(Error::InvalidParams(format!("sample size {s} not in 1..={}", g.n())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(sizes.len() * count);
    for &s in sizes {
        for _ in 0..count {
            let mut vs = rand::seq::index::sample(&mut rng, g.n(), s).into_vec();
            vs.sort_unstable();
            out.push(g.induced_subgraph(&VertexList::new(vs, g.n())?));
        }
    }
    Ok(out)
}
