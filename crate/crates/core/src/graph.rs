//! Gain graphs over the two-element group and their symmetric double covers.
//!
//! A [`ColoredGraph`] is a finite multigraph (loops and parallel edges
//! allowed) whose edges carry a [`Color`]. Color `1` marks edges that swap
//! the two sheets of the double cover; the gain of a closed walk is the xor
//! of its edge colors, and a subgraph is *balanced* when every cycle it
//! contains has gain `0`. Edge order is significant everywhere: it is the
//! order of the input file and every search, witness, and construction is
//! deterministic with respect to it.

use std::fmt;

use crate::error::{Error, Result};

/// Edge color in the two-element group; `0` is the identity.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Color(pub bool);

impl Color {
    pub const ZERO: Color = Color(false);
    pub const ONE: Color = Color(true);

    pub fn from_bit(bit: u64) -> Option<Color> {
        match bit {
            0 => Some(Color::ZERO),
            1 => Some(Color::ONE),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        self.0 as u8
    }

    pub fn is_identity(self) -> bool {
        !self.0
    }

    /// Sign of the x-coordinate under the mirror action of this color.
    pub fn x_sign(self) -> i64 {
        if self.0 {
            -1
        } else {
            1
        }
    }
}

impl std::ops::BitXor for Color {
    type Output = Color;
    fn bitxor(self, rhs: Color) -> Color {
        Color(self.0 ^ rhs.0)
    }
}

impl std::ops::BitXorAssign for Color {
    fn bitxor_assign(&mut self, rhs: Color) {
        self.0 ^= rhs.0;
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub gain: Color,
}

impl Edge {
    pub fn new(tail: usize, head: usize, gain: Color) -> Edge {
        Edge { tail, head, gain }
    }

    pub fn is_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// A multigraph with colored edges in a fixed canonical order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ColoredGraph {
    vertices: usize,
    edges: Vec<Edge>,
}

impl ColoredGraph {
    pub fn new(vertices: usize, edges: Vec<Edge>) -> Result<ColoredGraph> {
        for (index, e) in edges.iter().enumerate() {
            if e.tail >= vertices || e.head >= vertices {
                return Err(Error::InvalidEdge { index, vertices });
            }
        }
        Ok(ColoredGraph { vertices, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> &Edge {
        &self.edges[index]
    }

    /// The subset containing every edge. Errors beyond the 64-edge
    /// enumeration range.
    pub fn all_edges(&self) -> Result<EdgeSubset> {
        if self.edges.len() > 64 {
            return Err(Error::TooManyEdges {
                count: self.edges.len(),
            });
        }
        Ok(EdgeSubset::full(self.edges.len()))
    }

    /// Graph with the same vertices and one edge removed; the remaining
    /// edges keep their relative order.
    pub fn without_edge(&self, index: usize) -> ColoredGraph {
        let mut edges = self.edges.clone();
        edges.remove(index);
        ColoredGraph {
            vertices: self.vertices,
            edges,
        }
    }

    pub fn with_edge(&self, e: Edge) -> Result<ColoredGraph> {
        let mut edges = self.edges.clone();
        edges.push(e);
        ColoredGraph::new(self.vertices, edges)
    }

    /// The standalone subgraph induced by an edge subset: spanned vertices
    /// are renumbered in increasing order, edges keep their relative order.
    /// Returns the subgraph plus the original vertex and edge indices.
    pub fn edge_induced(&self, subset: EdgeSubset) -> (ColoredGraph, Vec<usize>, Vec<usize>) {
        let mut vertex_map = vec![usize::MAX; self.vertices];
        let mut vertices = Vec::new();
        let mut edge_ids = Vec::new();
        for e in subset.iter() {
            for v in [self.edges[e].tail, self.edges[e].head] {
                if vertex_map[v] == usize::MAX {
                    vertex_map[v] = 0;
                    vertices.push(v);
                }
            }
            edge_ids.push(e);
        }
        vertices.sort_unstable();
        for (new, &old) in vertices.iter().enumerate() {
            vertex_map[old] = new;
        }
        let edges = edge_ids
            .iter()
            .map(|&e| {
                let old = self.edges[e];
                Edge::new(vertex_map[old.tail], vertex_map[old.head], old.gain)
            })
            .collect();
        (
            ColoredGraph {
                vertices: vertices.len(),
                edges,
            },
            vertices,
            edge_ids,
        )
    }

    /// Symmetric double cover. Color-0 edges lift to two sheet-preserving
    /// copies, color-1 edges to two sheet-swapping copies.
    pub fn lift(&self) -> LiftGraph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(index, e)| LiftedEdge {
                quotient_edge: index,
                copies: [
                    (
                        LiftVertex::new(e.tail, Color::ZERO),
                        LiftVertex::new(e.head, e.gain),
                    ),
                    (
                        LiftVertex::new(e.tail, Color::ONE),
                        LiftVertex::new(e.head, e.gain ^ Color::ONE),
                    ),
                ],
            })
            .collect();
        LiftGraph {
            quotient_vertices: self.vertices,
            edges,
        }
    }

    /// Gain of a cycle given as an edge subset. The subset must support a
    /// single closed walk: connected, every vertex of even degree.
    pub fn cycle_gain(&self, cycle: EdgeSubset) -> Result<Color> {
        if cycle.is_empty() {
            return Err(Error::NotACycle);
        }
        let mut degree = vec![0usize; self.vertices];
        let mut gain = Color::ZERO;
        for e in cycle.iter() {
            let edge = &self.edges[e];
            degree[edge.tail] += 1;
            degree[edge.head] += 1;
            gain ^= edge.gain;
        }
        if degree.iter().any(|&d| d % 2 != 0) {
            return Err(Error::NotACycle);
        }
        let comps = self.components(cycle);
        if comps.len() != 1 {
            return Err(Error::NotACycle);
        }
        Ok(gain)
    }

    /// Connected components of the subgraph induced by an edge subset,
    /// ordered by smallest vertex. Isolated vertices are not components.
    pub fn components(&self, subset: EdgeSubset) -> Vec<Component> {
        let mut uf = GainUnionFind::new(self.vertices);
        for e in subset.iter() {
            let edge = &self.edges[e];
            uf.join(edge.tail, edge.head, edge.gain);
        }
        let mut by_root: Vec<(usize, Component)> = Vec::new();
        for e in subset.iter() {
            let edge = &self.edges[e];
            for v in [edge.tail, edge.head] {
                let (root, _) = uf.find(v);
                match by_root.iter_mut().find(|(r, _)| *r == root) {
                    Some((_, c)) => {
                        if !c.vertices.contains(&v) {
                            c.vertices.push(v);
                        }
                    }
                    None => by_root.push((
                        root,
                        Component {
                            vertices: vec![v],
                            edges: Vec::new(),
                            balanced: !uf.unbalanced(root),
                        },
                    )),
                }
            }
            let (root, _) = uf.find(edge.tail);
            let c = &mut by_root.iter_mut().find(|(r, _)| *r == root).unwrap().1;
            c.edges.push(e);
        }
        let mut comps: Vec<Component> = by_root.into_iter().map(|(_, c)| c).collect();
        for c in &mut comps {
            c.vertices.sort_unstable();
        }
        comps.sort_by_key(|c| c.vertices[0]);
        comps
    }

    /// Recolor so that every edge of the given spanning tree has color `0`.
    /// Every other edge receives the gain of its fundamental cycle, so the
    /// gain of every cycle of the graph is unchanged.
    pub fn recolor_tree_identity(&self, tree: EdgeSubset) -> Result<ColoredGraph> {
        let potential = self.tree_potentials(tree)?;
        let edges = self
            .edges
            .iter()
            .enumerate()
            .map(|(index, e)| {
                let gain = if tree.contains(index) {
                    Color::ZERO
                } else {
                    potential[e.tail] ^ e.gain ^ potential[e.head]
                };
                Edge::new(e.tail, e.head, gain)
            })
            .collect();
        Ok(ColoredGraph {
            vertices: self.vertices,
            edges,
        })
    }

    /// Gain of the tree path from vertex 0's component root to each vertex.
    /// Errors unless the subset is a spanning tree of the whole vertex set.
    pub(crate) fn tree_potentials(&self, tree: EdgeSubset) -> Result<Vec<Color>> {
        if self.vertices == 0 {
            return if tree.is_empty() {
                Ok(Vec::new())
            } else {
                Err(Error::NotASpanningTree)
            };
        }
        if tree.len() != self.vertices - 1 {
            return Err(Error::NotASpanningTree);
        }
        let mut adjacency = vec![Vec::new(); self.vertices];
        for e in tree.iter() {
            let edge = &self.edges[e];
            if edge.is_loop() {
                return Err(Error::NotASpanningTree);
            }
            adjacency[edge.tail].push((edge.head, edge.gain));
            adjacency[edge.head].push((edge.tail, edge.gain));
        }
        let mut potential = vec![None; self.vertices];
        let mut stack = vec![0usize];
        potential[0] = Some(Color::ZERO);
        while let Some(v) = stack.pop() {
            let base = potential[v].unwrap();
            for &(w, gain) in &adjacency[v] {
                if potential[w].is_none() {
                    potential[w] = Some(base ^ gain);
                    stack.push(w);
                }
            }
        }
        if potential.iter().any(|p| p.is_none()) {
            return Err(Error::NotASpanningTree);
        }
        Ok(potential.into_iter().map(|p| p.unwrap()).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    /// True when every cycle inside the component has gain `0`.
    pub balanced: bool,
}

/// Set of edge indices as a bitmask; enumeration range is 64 edges.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct EdgeSubset(pub u64);

impl EdgeSubset {
    pub const EMPTY: EdgeSubset = EdgeSubset(0);

    pub fn full(len: usize) -> EdgeSubset {
        assert!(len <= 64);
        if len == 64 {
            EdgeSubset(u64::MAX)
        } else {
            EdgeSubset((1u64 << len) - 1)
        }
    }

    pub fn from_indices(indices: &[usize]) -> EdgeSubset {
        let mut mask = 0u64;
        for &i in indices {
            assert!(i < 64);
            mask |= 1 << i;
        }
        EdgeSubset(mask)
    }

    pub fn contains(self, index: usize) -> bool {
        index < 64 && self.0 & (1 << index) != 0
    }

    pub fn with(self, index: usize) -> EdgeSubset {
        assert!(index < 64);
        EdgeSubset(self.0 | (1 << index))
    }

    pub fn without(self, index: usize) -> EdgeSubset {
        EdgeSubset(self.0 & !(1 << index))
    }

    pub fn union(self, other: EdgeSubset) -> EdgeSubset {
        EdgeSubset(self.0 | other.0)
    }

    pub fn intersect(self, other: EdgeSubset) -> EdgeSubset {
        EdgeSubset(self.0 & other.0)
    }

    pub fn minus(self, other: EdgeSubset) -> EdgeSubset {
        EdgeSubset(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: EdgeSubset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Display for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for EdgeSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Vertex of the double cover: a quotient vertex plus a sheet.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct LiftVertex {
    pub vertex: usize,
    pub sheet: Color,
}

impl LiftVertex {
    pub fn new(vertex: usize, sheet: Color) -> LiftVertex {
        LiftVertex { vertex, sheet }
    }

    /// Index in `0..2n` with sheet 0 first.
    pub fn index(self, quotient_vertices: usize) -> usize {
        self.vertex + quotient_vertices * self.sheet.bit() as usize
    }

    pub fn swapped(self) -> LiftVertex {
        LiftVertex::new(self.vertex, self.sheet ^ Color::ONE)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedEdge {
    pub quotient_edge: usize,
    /// Copy 0 starts on sheet 0, copy 1 on sheet 1.
    pub copies: [(LiftVertex, LiftVertex); 2],
}

/// The symmetric double cover of a colored graph. The sheet-swap involution
/// is an automorphism exchanging the two copies of every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftGraph {
    quotient_vertices: usize,
    edges: Vec<LiftedEdge>,
}

impl LiftGraph {
    pub fn vertex_count(&self) -> usize {
        2 * self.quotient_vertices
    }

    pub fn quotient_vertex_count(&self) -> usize {
        self.quotient_vertices
    }

    /// Number of lifted edges, two per quotient edge.
    pub fn edge_count(&self) -> usize {
        2 * self.edges.len()
    }

    pub fn edges(&self) -> &[LiftedEdge] {
        &self.edges
    }

    /// Reconstruct the quotient from the sheet-0 copies.
    pub fn quotient(&self) -> ColoredGraph {
        let edges = self
            .edges
            .iter()
            .map(|le| {
                let (a, b) = le.copies[0];
                Edge::new(a.vertex, b.vertex, b.sheet)
            })
            .collect();
        ColoredGraph {
            vertices: self.quotient_vertices,
            edges,
        }
    }

    /// True when the selected quotient edges induce a connected subgraph of
    /// the cover (both copies of every selected edge are taken).
    pub fn edges_connected(&self, quotient_edges: EdgeSubset) -> bool {
        let n2 = self.vertex_count();
        let mut uf = GainUnionFind::new(n2);
        let mut touched = Vec::new();
        for le in &self.edges {
            if !quotient_edges.contains(le.quotient_edge) {
                continue;
            }
            for (a, b) in le.copies {
                let ia = a.index(self.quotient_vertices);
                let ib = b.index(self.quotient_vertices);
                uf.join(ia, ib, Color::ZERO);
                touched.push(ia);
                touched.push(ib);
            }
        }
        if touched.is_empty() {
            return false;
        }
        let (root, _) = uf.find(touched[0]);
        touched.iter().all(|&v| uf.find(v).0 == root)
    }
}

/// Union-find over vertices with gain potentials: `find` returns the gain of
/// the implicit tree path to the root, and roots remember whether any edge
/// closed an unbalanced cycle.
pub(crate) struct GainUnionFind {
    parent: Vec<usize>,
    size: Vec<u32>,
    /// Gain from a vertex to its parent.
    potential: Vec<bool>,
    unbalanced: Vec<bool>,
}

impl GainUnionFind {
    pub(crate) fn new(n: usize) -> GainUnionFind {
        GainUnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
            potential: vec![false; n],
            unbalanced: vec![false; n],
        }
    }

    pub(crate) fn find(&self, mut v: usize) -> (usize, bool) {
        let mut gain = false;
        while self.parent[v] != v {
            gain ^= self.potential[v];
            v = self.parent[v];
        }
        (v, gain)
    }

    pub(crate) fn join(&mut self, a: usize, b: usize, gain: Color) {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        let relative = pa ^ gain.0 ^ pb;
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

    pub(crate) fn unbalanced(&self, root: usize) -> bool {
        self.unbalanced[root]
    }
}
