//! Adjacency labels.
//!
//! Two schemes share one [`LabelSet`] container:
//!
//! * interval: a vertex stores its position and the maximal runs of its
//!   neighbors' positions;
//! * degeneracy: a vertex stores its position and the positions of the
//!   neighbors placed after it.
//!
//! [`adjacent`] decides adjacency from two labels and nothing else.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use crate::bits::BitVector;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::guard::Guard;
use crate::ordering::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    Interval,
    Degeneracy,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Interval => "interval",
            Scheme::Degeneracy => "degeneracy",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interval" => Ok(Scheme::Interval),
            "degeneracy" => Ok(Scheme::Degeneracy),
            _ => Err(Error::InvalidParams(format!("unknown scheme {s:?}"))),
        }
    }
}

/// Bits of a position field: `ceil(log2 n)`, at least 1.
pub fn position_width(n: usize) -> usize {
    if n <= 1 {
        1
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Position plus the maximal runs `[lo, hi]` of neighbor positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntervalLabel {
    pos: usize,
    intervals: Vec<(usize, usize)>,
}

impl IntervalLabel {
    /// Validates the runs against a graph on `n` vertices: sorted, disjoint,
    /// separated by at least one gap, in range, and avoiding `pos`.
    pub fn new(pos: usize, intervals: Vec<(usize, usize)>, n: usize) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        if pos >= n {
            return bad(format!("position {pos} out of range for n = {n}"));
        }
        for (i, &(lo, hi)) in intervals.iter().enumerate() {
            if lo > hi || hi >= n {
                return bad(format!("bad interval [{lo}, {hi}] for n = {n}"));
            }
            if lo <= pos && pos <= hi {
                return bad(format!("interval [{lo}, {hi}] contains own position {pos}"));
            }
            if i > 0 && intervals[i - 1].1 + 1 >= lo {
                return bad(format!("interval [{lo}, {hi}] overlaps or touches its predecessor"));
            }
        }
        Ok(IntervalLabel { pos, intervals })
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn intervals(&self) -> &[(usize, usize)] {
        &self.intervals
    }

    pub fn contains(&self, p: usize) -> bool {
        let i = self.intervals.partition_point(|&(_, hi)| hi < p);
        self.intervals.get(i).is_some_and(|&(lo, _)| lo <= p)
    }
}

/// Position plus the positions of later neighbors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegeneracyLabel {
    pos: usize,
    fwd: Vec<usize>,
}

impl DegeneracyLabel {
    pub fn new(pos: usize, fwd: Vec<usize>, n: usize) -> Result<Self> {
        if pos >= n {
            return Err(Error::InvalidParams(format!("position {pos} out of range for n = {n}")));
        }
        if fwd.windows(2).any(|w| w[0] >= w[1]) || fwd.first().is_some_and(|&q| q <= pos) {
            return Err(Error::InvalidParams(format!(
                "forward list of position {pos} must be strictly increasing and after it"
            )));
        }
        if fwd.last().is_some_and(|&q| q >= n) {
            return Err(Error::InvalidParams(format!("forward entry out of range for n = {n}")));
        }
        Ok(DegeneracyLabel { pos, fwd })
    }

    pub fn pos(&self) -> usize {
        self.pos
    }

    pub fn fwd(&self) -> &[usize] {
        &self.fwd
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Label {
    Interval(IntervalLabel),
    Degeneracy(DegeneracyLabel),
}

impl Label {
    pub fn scheme(&self) -> Scheme {
        match self {
            Label::Interval(_) => Scheme::Interval,
            Label::Degeneracy(_) => Scheme::Degeneracy,
        }
    }

    pub fn pos(&self) -> usize {
        match self {
            Label::Interval(l) => l.pos,
            Label::Degeneracy(l) => l.pos,
        }
    }

    /// Number of variable-length entries: runs or forward neighbors.
    pub fn entries(&self) -> usize {
        match self {
            Label::Interval(l) => l.intervals.len(),
            Label::Degeneracy(l) => l.fwd.len(),
        }
    }

    /// Information bits: position plus endpoints, no framing.
    pub fn info_bits(&self, n: usize) -> usize {
        let w = position_width(n);
        match self {
            Label::Interval(l) => w * (1 + 2 * l.intervals.len()),
            Label::Degeneracy(l) => w * (1 + l.fwd.len()),
        }
    }

    /// Bits of the self-delimiting wire form (see [`Label::write_bits`]).
    pub fn serialized_bits(&self, n: usize) -> usize {
        self.info_bits(n) + 8 * varint_groups(self.entries())
    }

    /// Appends `pos` (fixed width), the entry count as a varint (7 data bits
    /// and a continuation bit per byte), then each endpoint at fixed width.
    pub fn write_bits(&self, n: usize, out: &mut BitVector) {
        let w = position_width(n);
        push_fixed(out, self.pos(), w);
        push_varint(out, self.entries());
        match self {
            Label::Interval(l) => l.intervals.iter().for_each(|&(lo, hi)| {
                push_fixed(out, lo, w);
                push_fixed(out, hi, w);
            }),
            Label::Degeneracy(l) => l.fwd.iter().for_each(|&q| push_fixed(out, q, w)),
        }
    }

    pub fn read_bits(scheme: Scheme, n: usize, input: &BitVector, cursor: &mut usize) -> Result<Self> {
        let w = position_width(n);
        let pos = read_fixed(input, cursor, w)?;
        let k = read_varint(input, cursor)?;
        match scheme {
            Scheme::Interval => {
                let mut iv = Vec::with_capacity(k.min(n));
                for _ in 0..k {
                    let lo = read_fixed(input, cursor, w)?;
                    let hi = read_fixed(input, cursor, w)?;
                    iv.push((lo, hi));
                }
                IntervalLabel::new(pos, iv, n).map(Label::Interval)
            }
            Scheme::Degeneracy => {
                let fwd = (0..k)
                    .map(|_| read_fixed(input, cursor, w))
                    .collect::<Result<Vec<_>>>()?;
                DegeneracyLabel::new(pos, fwd, n).map(Label::Degeneracy)
            }
        }
    }
}

fn varint_groups(mut x: usize) -> usize {
    let mut g = 1;
    while x >= 0x80 {
        x >>= 7;
        g += 1;
    }
    g
}

fn push_fixed(out: &mut BitVector, x: usize, width: usize) {
    for i in (0..width).rev() {
        out.push(x >> i & 1 == 1);
    }
}

fn push_varint(out: &mut BitVector, mut x: usize) {
    loop {
        let more = x >= 0x80;
        out.push(more);
        push_fixed(out, x & 0x7f, 7);
        x >>= 7;
        if !more {
            break;
        }
    }
}

fn read_fixed(input: &BitVector, cursor: &mut usize, width: usize) -> Result<usize> {
    if *cursor + width > input.len() {
        return Err(Error::Parse {
            line: 0,
            msg: format!("bit stream truncated at bit {}", *cursor),
        });
    }
    let mut x = 0usize;
    for _ in 0..width {
        x = x << 1 | input.get(*cursor) as usize;
        *cursor += 1;
    }
    Ok(x)
}

fn read_varint(input: &BitVector, cursor: &mut usize) -> Result<usize> {
    let mut x = 0usize;
    for group in 0.. {
        if group * 7 >= usize::BITS as usize {
            return Err(Error::Parse {
                line: 0,
                msg: "varint too long".into(),
            });
        }
        let more = read_fixed(input, cursor, 1)? == 1;
        x |= read_fixed(input, cursor, 7)? << (7 * group);
        if !more {
            break;
        }
    }
    Ok(x)
}

/// Decides adjacency from two labels alone.
///
/// Interval labels are adjacent iff each position lies in the other's runs;
/// degeneracy labels iff either position is in the other's forward list.
pub fn adjacent(a: &Label, b: &Label) -> Result<bool> {
    if a.pos() == b.pos() {
        return Err(Error::EqualPositions(a.pos()));
    }
    match (a, b) {
        (Label::Interval(x), Label::Interval(y)) => Ok(x.contains(y.pos) && y.contains(x.pos)),
        (Label::Degeneracy(x), Label::Degeneracy(y)) => {
            Ok(x.fwd.binary_search(&y.pos).is_ok() || y.fwd.binary_search(&x.pos).is_ok())
        }
        _ => Err(Error::SchemeMismatch),
    }
}

/// One label per vertex, indexed by original vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSet {
    scheme: Scheme,
    labels: Vec<Label>,
    ordering: Ordering,
}

impl LabelSet {
    /// Checks the scheme is uniform and the positions form a permutation.
    pub fn new(scheme: Scheme, labels: Vec<Label>) -> Result<Self> {
        if labels.iter().any(|l| l.scheme() != scheme) {
            return Err(Error::SchemeMismatch);
        }
        let mut perm = vec![usize::MAX; labels.len()];
        for (v, l) in labels.iter().enumerate() {
            let p = l.pos();
            if p >= labels.len() {
                return Err(Error::InvalidParams(format!("position {p} out of range")));
            }
            if perm[p] != usize::MAX {
                return Err(Error::EqualPositions(p));
            }
            perm[p] = v;
        }
        Ok(LabelSet {
            scheme,
            ordering: Ordering::from_perm(perm)?,
            labels,
        })
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> Option<&Label> {
        self.labels.get(v)
    }

    /// The ordering implied by the positions.
    pub fn ordering(&self) -> &Ordering {
        &self.ordering
    }

    pub fn cost(&self) -> BitCost {
        let n = self.n();
        let info: Vec<usize> = self.labels.iter().map(|l| l.info_bits(n)).collect();
        let serialized: Vec<usize> = self.labels.iter().map(|l| l.serialized_bits(n)).collect();
        BitCost {
            position_width: position_width(n),
            max_info: info.iter().copied().max().unwrap_or(0),
            mean_info: if n == 0 {
                0.0
            } else {
                info.iter().sum::<usize>() as f64 / n as f64
            },
            max_serialized: serialized.iter().copied().max().unwrap_or(0),
            max_entries: self.labels.iter().map(Label::entries).max().unwrap_or(0),
            info,
        }
    }

    /// Text form: `scheme n`, then `v pos k e_1 .. e_m` per vertex.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.scheme, self.n());
        for (v, l) in self.labels.iter().enumerate() {
            let _ = write!(s, "{v} {} {}", l.pos(), l.entries());
            match l {
                Label::Interval(x) => x.intervals.iter().for_each(|(lo, hi)| {
                    let _ = write!(s, " {lo} {hi}");
                }),
                Label::Degeneracy(x) => x.fwd.iter().for_each(|q| {
                    let _ = write!(s, " {q}");
                }),
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (ln, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let mut h = header.split_whitespace();
        let scheme: Scheme = h
            .next()
            .ok_or_else(|| perr(ln, "missing scheme".into()))?
            .parse()
            .map_err(|e: Error| perr(ln, e.to_string()))?;
        let n: usize = h
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| perr(ln, "missing vertex count".into()))?;
        let mut slots: Vec<Option<Label>> = vec![None; n];
        for (ln, l) in lines {
            let nums = l
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| perr(ln, format!("bad number {t:?}"))))
                .collect::<Result<Vec<_>>>()?;
            let [v, pos, k, rest @ ..] = nums.as_slice() else {
                return Err(perr(ln, "expected \"v pos k ...\"".into()));
            };
            let per = if scheme == Scheme::Interval { 2 } else { 1 };
            if rest.len() != k * per {
                return Err(perr(ln, format!("expected {} entries, found {}", k * per, rest.len())));
            }
            if *v >= n || slots[*v].is_some() {
                return Err(perr(ln, format!("vertex {v} out of range or repeated")));
            }
            let label = match scheme {
                Scheme::Interval => {
                    IntervalLabel::new(*pos, rest.chunks(2).map(|c| (c[0], c[1])).collect(), n).map(Label::Interval)
                }
                Scheme::Degeneracy => DegeneracyLabel::new(*pos, rest.to_vec(), n).map(Label::Degeneracy),
            }
            .map_err(|e| perr(ln, e.to_string()))?;
            slots[*v] = Some(label);
        }
        let labels = slots
            .into_iter()
            .enumerate()
            .map(|(v, l)| l.ok_or_else(|| perr(0, format!("no label for vertex {v}"))))
            .collect::<Result<Vec<_>>>()?;
        LabelSet::new(scheme, labels)
    }

    /// All labels back to back in vertex order, in the wire format.
    pub fn to_bits(&self) -> BitVector {
        let mut out = BitVector::zeros(0);
        self.labels.iter().for_each(|l| l.write_bits(self.n(), &mut out));
        out
    }

    pub fn from_bits(scheme: Scheme, n: usize, bits: &BitVector) -> Result<Self> {
        let mut cursor = 0;
        let labels = (0..n)
            .map(|_| Label::read_bits(scheme, n, bits, &mut cursor))
            .collect::<Result<Vec<_>>>()?;
        if cursor != bits.len() {
            return Err(Error::Parse {
                line: 0,
                msg: format!("{} trailing bits", bits.len() - cursor),
            });
        }
        LabelSet::new(scheme, labels)
    }
}

/// Label size accounting for one [`LabelSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct BitCost {
    pub position_width: usize,
    /// Information bits per vertex.
    pub info: Vec<usize>,
    pub max_info: usize,
    pub mean_info: f64,
    pub max_serialized: usize,
    /// Most intervals (or forward neighbors) in any label.
    pub max_entries: usize,
}

/// Maximal runs of 1s in `row` read in position order.
fn runs_under(row: &BitVector, ord: &Ordering) -> Vec<(usize, usize)> {
    let mut runs = Vec::new();
    let mut start = None;
    for p in 0..ord.len() {
        let on = row.get(ord.vertex_at(p));
        match (on, start) {
            (true, None) => start = Some(p),
            (false, Some(s)) => {
                runs.push((s, p - 1));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push((s, ord.len() - 1));
    }
    runs
}

fn check_order(g: &Graph, ord: &Ordering) -> Result<()> {
    if g.n() != ord.len() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            got: ord.len(),
        });
    }
    Ok(())
}

pub fn encode_intervals(g: &Graph, ord: &Ordering) -> Result<LabelSet> {
    check_order(g, ord)?;
    let n = g.n();
    let labels = (0..n)
        .map(|v| IntervalLabel::new(ord.position_of(v), runs_under(g.row(v), ord), n).map(Label::Interval))
        .collect::<Result<Vec<_>>>()?;
    LabelSet::new(Scheme::Interval, labels)
}

/// Forward-neighbor labels under an arbitrary ordering.
pub fn encode_forward(g: &Graph, ord: &Ordering) -> Result<LabelSet> {
    check_order(g, ord)?;
    let n = g.n();
    let labels = (0..n)
        .map(|v| {
            let pv = ord.position_of(v);
            let mut fwd: Vec<usize> = g.neighbors(v).map(|w| ord.position_of(w)).filter(|&q| q > pv).collect();
            fwd.sort_unstable();
            DegeneracyLabel::new(pv, fwd, n).map(Label::Degeneracy)
        })
        .collect::<Result<Vec<_>>>()?;
    LabelSet::new(Scheme::Degeneracy, labels)
}

/// Forward-neighbor labels under the degeneracy peel order, so every list
/// has at most `degeneracy(g)` entries.
pub fn encode_degeneracy(g: &Graph) -> LabelSet {
    let (ord, _) = g.degeneracy_order();
    encode_forward(g, &ord).expect("peel order matches the graph")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mismatch {
    pub u: usize,
    pub v: usize,
    pub in_graph: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub mismatches: Vec<Mismatch>,
    pub pairs_checked: usize,
    pub cost: BitCost,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Decodes every vertex pair from labels and compares with the graph.
pub fn verify_labeling(g: &Graph, ls: &LabelSet) -> Result<VerifyReport> {
    if g.n() != ls.n() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            got: ls.n(),
        });
    }
    let n = g.n();
    let mut mismatches = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let decoded = adjacent(&ls.labels[u], &ls.labels[v])?;
            let in_graph = g.has_edge(u, v);
            if decoded != in_graph {
                mismatches.push(Mismatch { u, v, in_graph });
            }
        }
    }
    Ok(VerifyReport {
        mismatches,
        pairs_checked: n * n.saturating_sub(1) / 2,
        cost: ls.cost(),
    })
}

/// Smallest per-vertex label length `l` with `2^(l * m) >= num_graphs`,
/// i.e. `ceil(log2(num_graphs) / m)`.
pub fn bits_lower_bound(num_graphs: u128, m: usize) -> Result<u32> {
    if num_graphs == 0 || m == 0 {
        return Err(Error::InvalidParams("bits_lower_bound needs positive inputs".into()));
    }
    // ceil(log2 N), exact for integers
    let log = if num_graphs == 1 {
        0
    } else {
        128 - (num_graphs - 1).leading_zeros()
    };
    Ok(log.div_ceil(m as u32))
}

/// A graph whose vertices are all syntactically valid labels.
#[derive(Debug, Clone)]
pub struct UniversalGraph {
    pub scheme: Scheme,
    pub n: usize,
    pub graph: Graph,
    pub labels: Vec<Label>,
    index: HashMap<Label, usize>,
}

impl UniversalGraph {
    pub fn vertex_of(&self, label: &Label) -> Option<usize> {
        self.index.get(label).copied()
    }
}

fn runs_of_mask(mask: u64, n: usize) -> Vec<(usize, usize)> {
    let bits = BitVector::from_bools((0..n).map(|i| mask >> i & 1 == 1));
    runs_under(&bits, &Ordering::identity(n))
}

fn label_space(n: usize, scheme: Scheme, max_entries: usize) -> Result<Vec<Label>> {
    let mut out = Vec::new();
    for pos in 0..n {
        for mask in 0u64..1 << n {
            if mask >> pos & 1 == 1 {
                continue;
            }
            let label = match scheme {
                Scheme::Interval => {
                    let runs = runs_of_mask(mask, n);
                    if runs.len() > max_entries {
                        continue;
                    }
                    Label::Interval(IntervalLabel::new(pos, runs, n)?)
                }
                Scheme::Degeneracy => {
                    if mask & ((1u64 << pos) - 1) != 0 || mask.count_ones() as usize > max_entries {
                        continue;
                    }
                    let fwd = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                    Label::Degeneracy(DegeneracyLabel::new(pos, fwd, n)?)
                }
            };
            out.push(label);
        }
    }
    Ok(out)
}

/// Builds the label graph for `n`-vertex inputs with at most `max_entries`
/// intervals (or forward neighbors) per label. Labels sharing a position are
/// never adjacent: no embedding uses two of them.
///
/// The guard bounds both the raw label space `n * 2^(n-1)` and the number of
/// label pairs decoded.
pub fn build_universal(n: usize, scheme: Scheme, max_entries: usize, guard: &Guard) -> Result<UniversalGraph> {
    if n == 0 || n > 40 {
        return Err(Error::InvalidParams(format!(
            "universal graph needs 1 <= n <= 40, got {n}"
        )));
    }
    guard.check((n as u128) << (n - 1))?;
    let labels = label_space(n, scheme, max_entries)?;
    let size = labels.len();
    guard.check((size as u128) * (size as u128 - 1) / 2)?;
    let mut graph = Graph::empty(size);
    for i in 0..size {
        for j in i + 1..size {
            if labels[i].pos() != labels[j].pos() && adjacent(&labels[i], &labels[j])? {
                graph.add_edge(i, j)?;
            }
        }
    }
    let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
    Ok(UniversalGraph {
        scheme,
        n,
        graph,
        labels,
        index,
    })
}

/// Whether mapping each vertex of `g` to the universal vertex carrying its
/// label is an induced embedding.
pub fn verify_universal(u: &UniversalGraph, g: &Graph, ls: &LabelSet) -> Result<bool> {
    if g.n() != ls.n() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            got: ls.n(),
        });
    }
    if ls.scheme() != u.scheme {
        return Err(Error::SchemeMismatch);
    }
    let image = ls
        .labels()
        .iter()
        .enumerate()
        .map(|(v, l)| u.vertex_of(l).ok_or(Error::UnmappedLabel(v)))
        .collect::<Result<Vec<_>>>()?;
    let n = g.n();
    for a in 0..n {
        for b in a + 1..n {
            if image[a] == image[b] || u.graph.has_edge(image[a], image[b]) != g.has_edge(a, b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
