//! Counted sparsity over edge-induced subgraphs.
//!
//! Each [`Family`] bounds the edges a subgraph may span in terms of its
//! spanned vertices and its balanced and unbalanced connected components.
//! All bounds are additive over components, so a graph has a violating
//! subset exactly when it has a connected one; [`check_counts`] scans every
//! subset anyway and serves as the oracle for the connected-search version.
//!
//! Subsets are evaluated with a reusable union-find carrying gain
//! potentials, reset between masks by a touched list.

use std::fmt;
use std::str::FromStr;

use crate::error::Result;
use crate::graph::{ColoredGraph, EdgeSubset};

/// A sparsity family, identified by its count bound.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Family {
    /// `2n' - c' - 3c0'`, one global degree of freedom.
    ReflectionLaman,
    /// `2n' - 2c' - 3c0'`, two global degrees of freedom.
    Ross,
    /// `2n' - c' - 2c0'`.
    Reflection22,
    /// `n' - c0'`.
    Reflection11,
    /// `2n' - (c' + c0')`, color-blind.
    Sparse21,
    /// `2n' - 2(c' + c0')`, color-blind.
    Sparse22,
    /// `2n' - 3(c' + c0')`, color-blind.
    Laman,
}

impl Family {
    pub const ALL: [Family; 7] = [
        Family::ReflectionLaman,
        Family::Ross,
        Family::Reflection22,
        Family::Reflection11,
        Family::Sparse21,
        Family::Sparse22,
        Family::Laman,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::ReflectionLaman => "reflection-laman",
            Family::Ross => "ross",
            Family::Reflection22 => "reflection-22",
            Family::Reflection11 => "reflection-11",
            Family::Sparse21 => "sparse-21",
            Family::Sparse22 => "sparse-22",
            Family::Laman => "laman",
        }
    }

    /// Edge budget for a subgraph spanning `spanned` vertices with the given
    /// numbers of unbalanced and balanced components.
    pub fn bound(self, spanned: usize, unbalanced: usize, balanced: usize) -> i64 {
        let n = spanned as i64;
        let cu = unbalanced as i64;
        let cb = balanced as i64;
        match self {
            Family::ReflectionLaman => 2 * n - cu - 3 * cb,
            Family::Ross => 2 * n - 2 * cu - 3 * cb,
            Family::Reflection22 => 2 * n - cu - 2 * cb,
            Family::Reflection11 => n - cb,
            Family::Sparse21 => 2 * n - (cu + cb),
            Family::Sparse22 => 2 * n - 2 * (cu + cb),
            Family::Laman => 2 * n - 3 * (cu + cb),
        }
    }

    /// Edge count a member on `vertices` vertices must hit exactly.
    pub fn global_target(self, vertices: usize) -> i64 {
        let n = vertices as i64;
        match self {
            Family::ReflectionLaman => 2 * n - 1,
            Family::Ross => 2 * n - 2,
            Family::Reflection22 => 2 * n - 1,
            Family::Reflection11 => n,
            Family::Sparse21 => 2 * n - 1,
            Family::Sparse22 => 2 * n - 2,
            Family::Laman => 2 * n - 3,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Family, String> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// A subset whose edge count exceeds its family bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountWitness {
    pub edges: EdgeSubset,
    pub spanned: usize,
    pub edge_count: usize,
    pub unbalanced: usize,
    pub balanced: usize,
    pub bound: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub family: Family,
    /// The violation found, inclusion-minimal; `None` when all counts hold.
    pub witness: Option<CountWitness>,
}

impl CountReport {
    pub fn passes(&self) -> bool {
        self.witness.is_none()
    }
}

/// Union-find with gain potentials, reusable across masks. `reset` touches
/// only the vertices the previous mask used.
pub(crate) struct CountScratch {
    active: Vec<bool>,
    parent: Vec<usize>,
    size: Vec<u32>,
    potential: Vec<bool>,
    unbalanced: Vec<bool>,
    touched: Vec<usize>,
}

pub(crate) struct SubsetCounts {
    pub spanned: usize,
    pub unbalanced: usize,
    pub balanced: usize,
}

impl CountScratch {
    pub(crate) fn new(vertices: usize) -> CountScratch {
        CountScratch {
            active: vec![false; vertices],
            parent: vec![0; vertices],
            size: vec![0; vertices],
            potential: vec![false; vertices],
            unbalanced: vec![false; vertices],
            touched: Vec::with_capacity(vertices),
        }
    }

    fn reset(&mut self) {
        for &v in &self.touched {
            self.active[v] = false;
        }
        self.touched.clear();
    }

    fn init(&mut self, v: usize) {
        if !self.active[v] {
            self.active[v] = true;
            self.parent[v] = v;
            self.size[v] = 1;
            self.potential[v] = false;
            self.unbalanced[v] = false;
            self.touched.push(v);
        }
    }

    fn find(&self, mut v: usize) -> (usize, bool) {
        let mut gain = false;
        while self.parent[v] != v {
            gain ^= self.potential[v];
            v = self.parent[v];
        }
        (v, gain)
    }

    fn join(&mut self, a: usize, b: usize, gain: bool) {
        self.init(a);
        self.init(b);
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        let relative = pa ^ gain ^ pb;
        if ra == rb {
            if relative {
                self.unbalanced[ra] = true;
            }
            return;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.potential[small] = relative;
        self.size[big] += self.size[small];
        if self.unbalanced[small] {
            self.unbalanced[big] = true;
        }
    }

    pub(crate) fn measure(&mut self, g: &ColoredGraph, subset: EdgeSubset) -> SubsetCounts {
        self.reset();
        for e in subset.iter() {
            let edge = g.edge(e);
            self.join(edge.tail, edge.head, edge.gain.0);
        }
        let mut unbalanced = 0;
        let mut balanced = 0;
        for &v in &self.touched {
            if self.parent[v] == v {
                if self.unbalanced[v] {
                    unbalanced += 1;
                } else {
                    balanced += 1;
                }
            }
        }
        SubsetCounts {
            spanned: self.touched.len(),
            unbalanced,
            balanced,
        }
    }
}

fn violation(
    g: &ColoredGraph,
    family: Family,
    subset: EdgeSubset,
    scratch: &mut CountScratch,
) -> Option<CountWitness> {
    let counts = scratch.measure(g, subset);
    let bound = family.bound(counts.spanned, counts.unbalanced, counts.balanced);
    let edge_count = subset.len();
    if (edge_count as i64) > bound {
        Some(CountWitness {
            edges: subset,
            spanned: counts.spanned,
            edge_count,
            unbalanced: counts.unbalanced,
            balanced: counts.balanced,
            bound,
        })
    } else {
        None
    }
}

/// Remove edges one at a time, keeping the violation, until none can go.
fn shrink(
    g: &ColoredGraph,
    family: Family,
    mut subset: EdgeSubset,
    scratch: &mut CountScratch,
) -> CountWitness {
    'outer: loop {
        for e in subset.iter() {
            let candidate = subset.without(e);
            if candidate.is_empty() {
                continue;
            }
            if violation(g, family, candidate, scratch).is_some() {
                subset = candidate;
                continue 'outer;
            }
        }
        return violation(g, family, subset, scratch)
            .expect("shrink called on a non-violating subset");
    }
}

/// Check every nonempty edge subset against the family bound. The witness,
/// when present, is the inclusion-minimal shrink of the numerically first
/// violating mask, so reruns agree bit for bit.
pub fn check_counts(g: &ColoredGraph, family: Family) -> Result<CountReport> {
    #[cfg(feature = "parallel")]
    {
        check_counts_par(g, family)
    }
    #[cfg(not(feature = "parallel"))]
    {
        check_counts_seq(g, family)
    }
}

pub fn check_counts_seq(g: &ColoredGraph, family: Family) -> Result<CountReport> {
    g.all_edges()?;
    let total: u128 = 1u128 << g.edge_count();
    let mut scratch = CountScratch::new(g.vertex_count());
    let mut found = None;
    let mut mask: u128 = 1;
    while mask < total {
        if let Some(w) = violation(g, family, EdgeSubset(mask as u64), &mut scratch) {
            found = Some(w);
            break;
        }
        mask += 1;
    }
    Ok(finish(g, family, found, &mut scratch))
}

/// Same scan and same witness as [`check_counts_seq`], with the mask range
/// split into fixed chunks searched in parallel; the first violating chunk
/// in mask order wins.
#[cfg(feature = "parallel")]
pub fn check_counts_par(g: &ColoredGraph, family: Family) -> Result<CountReport> {
    use rayon::prelude::*;

    g.all_edges()?;
    let total: u128 = 1u128 << g.edge_count();
    const CHUNK: u128 = 1 << 14;
    let chunks = (total - 1).div_ceil(CHUNK);
    let found = (0..chunks as u64).into_par_iter().find_map_first(|c| {
        let start = 1 + c as u128 * CHUNK;
        let end = (start + CHUNK).min(total);
        let mut scratch = CountScratch::new(g.vertex_count());
        let mut mask = start;
        while mask < end {
            if let Some(w) = violation(g, family, EdgeSubset(mask as u64), &mut scratch) {
                return Some(w);
            }
            mask += 1;
        }
        None
    });
    let mut scratch = CountScratch::new(g.vertex_count());
    Ok(finish(g, family, found, &mut scratch))
}

fn finish(
    g: &ColoredGraph,
    family: Family,
    found: Option<CountWitness>,
    scratch: &mut CountScratch,
) -> CountReport {
    let witness = found.map(|w| shrink(g, family, w.edges, scratch));
    CountReport { family, witness }
}

/// Check only connected edge subsets, each enumerated exactly once by a
/// grow-and-forbid search, stopping at the first violation. Equivalent in
/// verdict to the full scan: the bounds add over components, so a minimal
/// violating subset is connected.
pub fn connected_subgraph_check(g: &ColoredGraph, family: Family) -> Result<CountReport> {
    g.all_edges()?;
    let mut incident = vec![Vec::new(); g.vertex_count()];
    for (i, e) in g.edges().iter().enumerate() {
        incident[e.tail].push(i);
        if e.head != e.tail {
            incident[e.head].push(i);
        }
    }
    let mut scratch = CountScratch::new(g.vertex_count());
    for start in 0..g.edge_count() {
        let forbidden = EdgeSubset((1u64 << start) - 1);
        let seed = EdgeSubset::EMPTY.with(start);
        if let Some(w) = explore(g, family, seed, forbidden, &incident, &mut scratch) {
            let witness = shrink(g, family, w.edges, &mut scratch);
            return Ok(CountReport {
                family,
                witness: Some(witness),
            });
        }
    }
    Ok(CountReport {
        family,
        witness: None,
    })
}

fn explore(
    g: &ColoredGraph,
    family: Family,
    subset: EdgeSubset,
    mut forbidden: EdgeSubset,
    incident: &[Vec<usize>],
    scratch: &mut CountScratch,
) -> Option<CountWitness> {
    if let Some(w) = violation(g, family, subset, scratch) {
        return Some(w);
    }
    let mut candidates = EdgeSubset::EMPTY;
    for e in subset.iter() {
        let edge = g.edge(e);
        for v in [edge.tail, edge.head] {
            for &other in &incident[v] {
                candidates = candidates.with(other);
            }
        }
    }
    candidates = candidates.minus(subset).minus(forbidden);
    for c in candidates.iter() {
        if let Some(w) = explore(g, family, subset.with(c), forbidden, incident, scratch) {
            return Some(w);
        }
        forbidden = forbidden.with(c);
    }
    None
}

/// Membership: the global edge count is exact and no subset violates.
/// The map-graph family is decided structurally instead: every connected
/// component of the whole vertex set carries exactly one independent cycle
/// and that cycle has gain 1.
pub fn is_member(g: &ColoredGraph, family: Family) -> Result<bool> {
    if family == Family::Reflection11 {
        return Ok(is_unbalanced_map_graph(g));
    }
    if g.edge_count() as i64 != family.global_target(g.vertex_count()) {
        return Ok(false);
    }
    Ok(connected_subgraph_check(g, family)?.passes())
}

fn is_unbalanced_map_graph(g: &ColoredGraph) -> bool {
    let n = g.vertex_count();
    if g.edge_count() != n {
        return false;
    }
    let mut scratch = CountScratch::new(n);
    for v in 0..n {
        scratch.init(v);
    }
    for e in g.edges() {
        scratch.join(e.tail, e.head, e.gain.0);
    }
    let mut edges_at = vec![0usize; n];
    for e in g.edges() {
        let (root, _) = scratch.find(e.tail);
        edges_at[root] += 1;
    }
    (0..n).all(|v| {
        if scratch.parent[v] != v {
            return true;
        }
        edges_at[v] as u32 == scratch.size[v] && scratch.unbalanced[v]
    })
}

/// True when the whole edge set breaks the two-freedom bound but every
/// proper subset obeys it: a minimal dependent set of the associated
/// matroid.
pub fn is_ross_circuit(g: &ColoredGraph) -> Result<bool> {
    g.all_edges()?;
    if g.edge_count() == 0 {
        return Ok(false);
    }
    let mut scratch = CountScratch::new(g.vertex_count());
    let full = EdgeSubset::full(g.edge_count());
    if violation(g, Family::Ross, full, &mut scratch).is_none() {
        return Ok(false);
    }
    let total: u128 = 1u128 << g.edge_count();
    let mut mask: u128 = 1;
    while mask < total - 1 {
        if violation(g, Family::Ross, EdgeSubset(mask as u64), &mut scratch).is_some() {
            return Ok(false);
        }
        mask += 1;
    }
    Ok(true)
}

/// Dependence of a subset in the two-freedom matroid: some sub-subset
/// breaks the bound.
pub(crate) fn ross_dependent(g: &ColoredGraph, subset: EdgeSubset) -> bool {
    let mut scratch = CountScratch::new(g.vertex_count());
    let mut s = subset.0;
    while s != 0 {
        if violation(g, Family::Ross, EdgeSubset(s), &mut scratch).is_some() {
            return true;
        }
        s = (s - 1) & subset.0;
    }
    false
}
