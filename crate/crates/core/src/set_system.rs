//! Families of binary vectors: projections, shatter functions and
//! (robust) shattered coordinate sets.

use std::collections::HashSet;
use std::fmt::Write as _;

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::guard::{binomial, Guard};

/// Largest coordinate set whose trace table is materialized (2^d counters).
pub const MAX_TRACE_BITS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorFamily {
    t: usize,
    vectors: Vec<BitVector>,
    distinct_required: bool,
}

impl VectorFamily {
    pub fn new(t: usize, vectors: Vec<BitVector>, distinct_required: bool) -> Result<Self> {
        if let Some(bad) = vectors.iter().find(|v| v.len() != t) {
            return Err(Error::SizeMismatch {
                expected: t,
                got: bad.len(),
            });
        }
        if distinct_required {
            let mut seen = HashSet::with_capacity(vectors.len());
            for v in &vectors {
                if !seen.insert(v) {
                    return Err(Error::ContractViolation(format!(
                        "duplicate vector {v} in a family that requires distinct vectors"
                    )));
                }
            }
        }
        Ok(VectorFamily {
            t,
            vectors,
            distinct_required,
        })
    }

    /// Parses one `0`/`1` string per vector.
    pub fn from_strs(strs: &[&str], distinct_required: bool) -> Result<Self> {
        let vectors = strs
            .iter()
            .enumerate()
            .map(|(i, s)| {
                BitVector::parse01(s).ok_or_else(|| Error::Parse {
                    line: i + 1,
                    msg: format!("not a 0/1 string: {s:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let t = vectors.first().map_or(0, BitVector::len);
        VectorFamily::new(t, vectors, distinct_required)
    }

    /// Rows of the adjacency matrix; rows may repeat.
    pub fn rows_of(g: &Graph) -> Self {
        VectorFamily {
            t: g.n(),
            vectors: g.rows().to_vec(),
            distinct_required: false,
        }
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[BitVector] {
        &self.vectors
    }

    pub fn distinct_required(&self) -> bool {
        self.distinct_required
    }

    pub fn distinct_count(&self) -> usize {
        self.vectors.iter().collect::<HashSet<_>>().len()
    }

    /// Header line `t count`, then one 0/1 line per vector.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.t, self.vectors.len());
        for v in &self.vectors {
            let _ = writeln!(s, "{v}");
        }
        s
    }

    pub fn parse(text: &str, distinct_required: bool) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let bad_header = || Error::Parse {
            line: ln,
            msg: format!("expected \"t count\", found {header:?}"),
        };
        let (t, count) = header.split_whitespace().collect_tuple().ok_or_else(bad_header)?;
        let t: usize = t.parse().map_err(|_| bad_header())?;
        let count: usize = count.parse().map_err(|_| bad_header())?;
        let mut vectors = Vec::with_capacity(count);
        for (ln, l) in lines {
            let v = BitVector::parse01(l).ok_or_else(|| Error::Parse {
                line: ln,
                msg: format!("not a 0/1 string: {l:?}"),
            })?;
            if v.len() != t {
                return Err(Error::Parse {
                    line: ln,
                    msg: format!("vector has length {}, expected {t}", v.len()),
                });
            }
            vectors.push(v);
        }
        if vectors.len() != count {
            return Err(Error::SizeMismatch {
                expected: count,
                got: vectors.len(),
            });
        }
        VectorFamily::new(t, vectors, distinct_required)
    }

    fn check_coords(&self, size: usize) -> Result<()> {
        if size > self.t {
            return Err(Error::InvalidParams(format!(
                "coordinate set size {size} exceeds vector length {}",
                self.t
            )));
        }
        Ok(())
    }

    fn guard_subsets(&self, size: usize, guard: &Guard) -> Result<()> {
        let sets = binomial(self.t as u64, size as u64).ok_or(Error::Overflow("coordinate subsets"))?;
        guard.check(sets)
    }

    /// Trace of every vector on `coords`, bit `j` = coordinate `coords[j]`.
    fn traces<'a>(&'a self, coords: &'a [usize]) -> impl Iterator<Item = usize> + 'a {
        self.vectors.iter().map(move |v| v.project_u64(coords) as usize)
    }
}

/// Sorted distinct coordinates of a vector family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordSet(Vec<usize>);

impl CoordSet {
    pub fn new(mut coords: Vec<usize>, t: usize) -> Result<Self> {
        coords.sort_unstable();
        if coords.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParams("repeated coordinate".into()));
        }
        if coords.last().is_some_and(|&c| c >= t) {
            return Err(Error::InvalidParams(format!("coordinate out of range for t = {t}")));
        }
        Ok(CoordSet(coords))
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
}

impl std::fmt::Display for CoordSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{{}}}", self.0.iter().join(","))
    }
}

/// Number of adjacent unequal entries.
pub fn alternations(v: &BitVector) -> usize {
    v.alternations()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShatterMode {
    /// Every coordinate subset, subject to the guard.
    Exact,
    /// `trials` random subsets; the result is a lower bound.
    Sampled { trials: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShatterValue {
    pub value: usize,
    /// `false` when the value is only a certified lower bound.
    pub exact: bool,
}

fn distinct_projections(f: &VectorFamily, coords: &[usize]) -> usize {
    if coords.len() <= 64 {
        f.vectors
            .iter()
            .map(|v| v.project_u64(coords))
            .collect::<HashSet<_>>()
            .len()
    } else {
        f.vectors
            .iter()
            .map(|v| v.project(coords))
            .collect::<HashSet<_>>()
            .len()
    }
}

/// Primal shatter function `g(t0)`: the most distinct projections onto any
/// `t0` coordinates.
pub fn primal_shatter(f: &VectorFamily, t0: usize, mode: ShatterMode, guard: &Guard) -> Result<ShatterValue> {
    f.check_coords(t0)?;
    match mode {
        ShatterMode::Exact => {
            f.guard_subsets(t0, guard)?;
            let cap = f.distinct_count();
            let mut best = 0;
            for coords in (0..f.t).combinations(t0) {
                best = best.max(distinct_projections(f, &coords));
                if best == cap {
                    break;
                }
            }
            Ok(ShatterValue {
                value: best,
                exact: true,
            })
        }
        ShatterMode::Sampled { trials, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut best = 0;
            for _ in 0..trials {
                let mut coords = rand::seq::index::sample(&mut rng, f.t, t0).into_vec();
                coords.sort_unstable();
                best = best.max(distinct_projections(f, &coords));
            }
            Ok(ShatterValue {
                value: best,
                exact: false,
            })
        }
    }
}

fn check_t_d(t: u64, d: u64) -> Result<()> {
    if d > t {
        return Err(Error::InvalidParams(format!("need d <= t, got d = {d}, t = {t}")));
    }
    Ok(())
}

/// `sum_{i < d} C(t, i)`: families with more distinct vectors shatter a `d`-set.
pub fn sauer_threshold(t: u64, d: u64) -> Result<u128> {
    check_t_d(t, d)?;
    (0..d).try_fold(0u128, |acc, i| {
        binomial(t, i)
            .and_then(|b| acc.checked_add(b))
            .ok_or(Error::Overflow("sauer_threshold"))
    })
}

/// `1 + (k + d - 1) * 2^d * C(t, d) + sum_{i < d} C(t, i)`: this many distinct
/// length-`t` vectors force a `d`-set shattered `k + d` times.
pub fn robust_shatter_threshold(t: u64, d: u64, k: u64) -> Result<u128> {
    check_t_d(t, d)?;
    if k < 1 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    let ovf = || Error::Overflow("robust_shatter_threshold");
    let pow = 1u128.checked_shl(d as u32).filter(|_| d < 128).ok_or_else(ovf)?;
    let core = ((k + d - 1) as u128)
        .checked_mul(pow)
        .and_then(|x| x.checked_mul(binomial(t, d)?))
        .ok_or_else(ovf)?;
    core.checked_add(1)
        .and_then(|x| x.checked_add(sauer_threshold(t, d).ok()?))
        .ok_or_else(ovf)
}

fn check_trace_width(d: usize) -> Result<()> {
    if d > MAX_TRACE_BITS {
        return Err(Error::InvalidParams(format!(
            "coordinate sets larger than {MAX_TRACE_BITS} are not supported"
        )));
    }
    Ok(())
}

/// Lexicographically smallest `d`-set on which the family realizes all
/// `2^d` patterns.
pub fn find_shattered(f: &VectorFamily, d: usize, guard: &Guard) -> Result<Option<CoordSet>> {
    f.check_coords(d)?;
    check_trace_width(d)?;
    let full = 1usize << d;
    if f.distinct_count() < full {
        return Ok(None);
    }
    f.guard_subsets(d, guard)?;
    let mut seen = vec![false; full];
    for coords in (0..f.t).combinations(d) {
        seen.iter_mut().for_each(|s| *s = false);
        let mut hits = 0;
        for tr in f.traces(&coords) {
            if !std::mem::replace(&mut seen[tr], true) {
                hits += 1;
                if hits == full {
                    break;
                }
            }
        }
        if hits == full {
            return Ok(Some(CoordSet(coords)));
        }
    }
    Ok(None)
}

/// A coordinate set shattered `r` times, with the multiplicity of each trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RobustShattering {
    pub coords: CoordSet,
    /// `counts[c]` = vectors whose trace is `c` (bit `j` = coordinate `j` of the set).
    pub counts: Vec<usize>,
}

/// Lexicographically smallest `d`-set on which every trace is realized by at
/// least `r` distinct vectors. The family must be declared distinct.
pub fn find_robust_shattered(f: &VectorFamily, d: usize, r: usize, guard: &Guard) -> Result<Option<RobustShattering>> {
    if !f.distinct_required {
        return Err(Error::ContractViolation(
            "robust shattering counts distinct vectors; family must be marked distinct".into(),
        ));
    }
    f.check_coords(d)?;
    check_trace_width(d)?;
    let full = 1usize << d;
    if f.len() < full.saturating_mul(r) {
        return Ok(None);
    }
    f.guard_subsets(d, guard)?;
    let mut counts = vec![0usize; full];
    for coords in (0..f.t).combinations(d) {
        counts.iter_mut().for_each(|c| *c = 0);
        for tr in f.traces(&coords) {
            counts[tr] += 1;
        }
        if counts.iter().all(|&c| c >= r) {
            return Ok(Some(RobustShattering {
                coords: CoordSet(coords),
                counts,
            }));
        }
    }
    Ok(None)
}

/// Size of the largest shattered coordinate set (0 for empty families).
pub fn vc_dimension(f: &VectorFamily, guard: &Guard) -> Result<usize> {
    let mut d = 0;
    while d < f.t && d < MAX_TRACE_BITS && find_shattered(f, d + 1, guard)?.is_some() {
        d += 1;
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, GraphKind};

    fn fam(strs: &[&str]) -> VectorFamily {
        VectorFamily::from_strs(strs, false).unwrap()
    }

    fn cube(t: usize) -> VectorFamily {
        let vs = (0..1u32 << t)
            .map(|x| BitVector::from_bools((0..t).map(|i| x >> i & 1 == 1)))
            .collect();
        VectorFamily::new(t, vs, true).unwrap()
    }

    #[test]
    fn rows_of_examples() {
        let k3 = generate(GraphKind::Clique { n: 3 }, 0).unwrap();
        assert_eq!(VectorFamily::rows_of(&k3), fam(&["011", "101", "110"]));
        let e3 = Graph::empty(3);
        assert_eq!(VectorFamily::rows_of(&e3), fam(&["000", "000", "000"]));
        let p3 = generate(GraphKind::Path { n: 3 }, 0).unwrap();
        assert_eq!(VectorFamily::rows_of(&p3), fam(&["010", "101", "010"]));
    }

    #[test]
    fn primal_shatter_examples() {
        let g = Guard::default();
        let ex = ShatterMode::Exact;
        assert_eq!(
            primal_shatter(&fam(&["00", "01", "10", "11"]), 2, ex, &g)
                .unwrap()
                .value,
            4
        );
        let k3 = generate(GraphKind::Clique { n: 3 }, 0).unwrap();
        assert_eq!(primal_shatter(&VectorFamily::rows_of(&k3), 1, ex, &g).unwrap().value, 2);
        let e3 = VectorFamily::rows_of(&Graph::empty(3));
        assert_eq!(primal_shatter(&e3, 2, ex, &g).unwrap().value, 1);
        assert!(primal_shatter(&e3, 4, ex, &g).is_err());
        assert!(matches!(
            primal_shatter(&cube(10), 5, ex, &Guard::new(100)),
            Err(Error::GuardExceeded { needed: 252, .. })
        ));
        let s = primal_shatter(
            &cube(10),
            5,
            ShatterMode::Sampled { trials: 3, seed: 1 },
            &Guard::new(1),
        )
        .unwrap();
        assert_eq!(
            s,
            ShatterValue {
                value: 32,
                exact: false
            }
        );
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(sauer_threshold(3, 2), Ok(4));
        assert_eq!(robust_shatter_threshold(10, 1, 1), Ok(22));
        assert_eq!(robust_shatter_threshold(4, 2, 2), Ok(78));
        assert_eq!(sauer_threshold(5, 0), Ok(0));
        assert!(sauer_threshold(2, 3).is_err());
        assert!(robust_shatter_threshold(4, 2, 0).is_err());
    }

    #[test]
    fn find_shattered_examples() {
        let g = Guard::default();
        let got = find_shattered(&fam(&["00", "01", "10", "11"]), 2, &g).unwrap();
        assert_eq!(got.unwrap().as_slice(), &[0, 1]);
        // Brute force over the three pairs: {0,1} traces 00,00,01,01,10 and
        // {0,2} traces 00,01,00,01,10 miss 11; {1,2} sees all four.
        let got = find_shattered(&fam(&["000", "001", "010", "011", "100"]), 2, &g).unwrap();
        assert_eq!(got.unwrap().as_slice(), &[1, 2]);
        assert_eq!(find_shattered(&fam(&["000", "111"]), 2, &g).unwrap(), None);
    }

    #[test]
    fn robust_shattered_examples() {
        let g = Guard::default();
        let r = find_robust_shattered(&cube(3), 1, 2, &g).unwrap().unwrap();
        assert_eq!(r.coords.as_slice(), &[0]);
        assert_eq!(r.counts, vec![4, 4]);

        let two = VectorFamily::from_strs(&["000", "111"], true).unwrap();
        assert_eq!(find_robust_shattered(&two, 1, 2, &g).unwrap(), None);

        let r = find_robust_shattered(&cube(4), 2, 4, &g).unwrap().unwrap();
        assert_eq!(r.coords.as_slice(), &[0, 1]);
        assert_eq!(r.counts, vec![4; 4]);

        assert!(matches!(
            VectorFamily::from_strs(&["01", "01"], true),
            Err(Error::ContractViolation(_))
        ));
        assert!(matches!(
            find_robust_shattered(&fam(&["01", "10"]), 1, 1, &g),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn vc_examples() {
        let g = Guard::default();
        assert_eq!(vc_dimension(&fam(&["00", "01", "10", "11"]), &g), Ok(2));
        assert_eq!(vc_dimension(&fam(&["000", "111"]), &g), Ok(1));
        assert_eq!(vc_dimension(&fam(&["0110"]), &g), Ok(0));
    }

    #[test]
    fn text_round_trip() {
        let f = fam(&["0110", "1111", "0000"]);
        assert_eq!(f.to_text(), "4 3\n0110\n1111\n0000\n");
        assert_eq!(VectorFamily::parse(&f.to_text(), false).unwrap(), f);
        assert!(VectorFamily::parse("4 2\n0110\n", false).is_err());
        assert!(VectorFamily::parse("4 1\n011\n", false).is_err());
    }

    #[test]
    fn sauer_perles_shelah_exhaustive_t3() {
        let g = Guard::default();
        let all = cube(3);
        for mask in 0u32..256 {
            let vs: Vec<BitVector> = (0..8)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| all.vectors()[i].clone())
                .collect();
            let size = vs.len() as u128;
            let f = VectorFamily::new(3, vs, true).unwrap();
            if size > sauer_threshold(3, 2).unwrap() {
                assert!(find_shattered(&f, 2, &g).unwrap().is_some(), "mask {mask:#x}");
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_family() -> impl Strategy<Value = VectorFamily> {
            (1usize..9).prop_flat_map(|t| {
                proptest::collection::vec(proptest::collection::vec(any::<bool>(), t), 0..20).prop_map(move |rows| {
                    let vs = rows.into_iter().map(BitVector::from_bools).collect();
                    VectorFamily::new(t, vs, false).unwrap()
                })
            })
        }

        proptest! {
            #[test]
            fn shatter_function_monotone_and_capped(f in arb_family()) {
                let g = Guard::default();
                let distinct = f.distinct_count();
                let mut prev = 0;
                for t0 in 0..=f.t() {
                    let v = primal_shatter(&f, t0, ShatterMode::Exact, &g).unwrap().value;
                    prop_assert!(v >= prev);
                    prop_assert!(v <= distinct.min(1 << t0));
                    prev = v;
                }
            }

            #[test]
            fn vc_agrees_with_shatter_function(f in arb_family()) {
                let g = Guard::default();
                let d = vc_dimension(&f, &g).unwrap();
                if !f.is_empty() {
                    let gd = primal_shatter(&f, d, ShatterMode::Exact, &g).unwrap().value;
                    prop_assert_eq!(gd, 1 << d);
                }
                if d < f.t() {
                    let gd1 = primal_shatter(&f, d + 1, ShatterMode::Exact, &g).unwrap().value;
                    prop_assert!(gd1 < 1 << (d + 1));
                }
            }
        }
    }
}
