//! Structural decompositions behind the direction-network constructions.
//!
//! Two decompositions are computed here. The tree-and-map split cuts an
//! edge set with the one-freedom count into a spanning tree and a spanning
//! map graph whose cycles all have gain 1; the graph is then recolored so
//! the tree carries color 0 everywhere. The circuit decomposition extracts
//! the minimal dependent sets of the two-freedom matroid, one per non-basis
//! edge, and contracts them to produce a smaller quotient graph with one
//! gain-1 loop standing in for each contracted circuit.
//!
//! Everything is deterministic: trees are searched in lexicographic edge
//! order, bases are grown greedily in edge order, and deletions scan
//! ascending.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{Color, ColoredGraph, Edge, EdgeSubset};
use crate::sparsity::{self, Family};

/// A spanning tree plus an unbalanced spanning map graph, with the graph
/// recolored so every tree edge has color 0.
#[derive(Clone, Debug)]
pub struct TreeMapDecomposition {
    pub tree: EdgeSubset,
    pub map_part: EdgeSubset,
    /// Same graph, switched so the tree is identity-colored. Cycle gains
    /// are unchanged.
    pub recolored: ColoredGraph,
}

/// First tree in lexicographic order whose complement is an unbalanced map
/// graph on the full vertex set.
pub fn decompose_tree_map(g: &ColoredGraph) -> Result<TreeMapDecomposition> {
    let all = g.all_edges()?;
    let n = g.vertex_count();
    let m = g.edge_count();
    if n == 0 || m != 2 * n - 1 {
        return Err(Error::NoDecomposition);
    }
    for combo in (0..m).combinations(n - 1) {
        let tree = EdgeSubset::from_indices(&combo);
        if g.tree_potentials(tree).is_err() {
            continue;
        }
        let map_part = all.minus(tree);
        if sparsity::is_member(&restriction(g, map_part), Family::Reflection11)? {
            let recolored = g.recolor_tree_identity(tree)?;
            return Ok(TreeMapDecomposition {
                tree,
                map_part,
                recolored,
            });
        }
    }
    Err(Error::NoDecomposition)
}

/// The subset's edges on the full original vertex set, indices compacted.
fn restriction(g: &ColoredGraph, subset: EdgeSubset) -> ColoredGraph {
    let edges = subset.iter().map(|e| *g.edge(e)).collect();
    ColoredGraph::new(g.vertex_count(), edges).expect("subset edges stay in range")
}

/// Verify the decomposition in the double cover: the tree must lift to two
/// disjoint spanning trees, and the map part must lift to one connected
/// unicyclic component per quotient component.
pub fn lift_structure_check(g: &ColoredGraph, dec: &TreeMapDecomposition) -> bool {
    let n = g.vertex_count();
    let lift = g.lift();

    let mut uf = PlainUnionFind::new(2 * n);
    let mut acyclic = true;
    for le in lift.edges() {
        if !dec.tree.contains(le.quotient_edge) {
            continue;
        }
        for (a, b) in le.copies {
            if !uf.join(a.index(n), b.index(n)) {
                acyclic = false;
            }
        }
    }
    let tree_ok =
        acyclic && uf.component_count() == 2 && uf.component_sizes().iter().all(|&s| s == n);

    let mut uf = PlainUnionFind::new(2 * n);
    for le in lift.edges() {
        if !dec.map_part.contains(le.quotient_edge) {
            continue;
        }
        for (a, b) in le.copies {
            uf.join(a.index(n), b.index(n));
        }
    }
    let mut edges_at = vec![0usize; 2 * n];
    for le in lift.edges() {
        if dec.map_part.contains(le.quotient_edge) {
            edges_at[uf.find(le.copies[0].0.index(n))] += 1;
            edges_at[uf.find(le.copies[1].0.index(n))] += 1;
        }
    }
    let quotient_components = g.components(dec.map_part).len();
    let unicyclic = (0..2 * n)
        .filter(|&v| uf.find(v) == v)
        .all(|root| edges_at[root] == uf.size(root));
    let map_ok = unicyclic && uf.component_count() == quotient_components;

    tree_ok && map_ok
}

struct PlainUnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl PlainUnionFind {
    fn new(n: usize) -> PlainUnionFind {
        PlainUnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    /// False when both ends were already connected.
    fn join(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] {
            (ra, rb)
        } else {
            (rb, ra)
        };
        self.parent[small] = big;
        self.size[big] += self.size[small];
        true
    }

    fn size(&self, root: usize) -> usize {
        self.size[root]
    }

    fn component_count(&self) -> usize {
        (0..self.parent.len())
            .filter(|&v| self.parent[v] == v)
            .count()
    }

    fn component_sizes(&self) -> Vec<usize> {
        (0..self.parent.len())
            .filter(|&v| self.parent[v] == v)
            .map(|v| self.size[v])
            .collect()
    }
}

/// Greedy basis of the two-freedom matroid in canonical edge order.
pub fn ross_basis(g: &ColoredGraph) -> Result<EdgeSubset> {
    g.all_edges()?;
    let mut basis = EdgeSubset::EMPTY;
    for e in 0..g.edge_count() {
        if !sparsity::ross_dependent(g, basis.with(e)) {
            basis = basis.with(e);
        }
    }
    Ok(basis)
}

/// The unique minimal dependent subset of `basis + edge`: delete edges in
/// ascending order while dependence survives. One pass suffices because a
/// basis plus one edge contains exactly one circuit.
pub fn fundamental_circuit(g: &ColoredGraph, basis: EdgeSubset, edge: usize) -> Result<EdgeSubset> {
    let mut circuit = basis.with(edge);
    if !sparsity::ross_dependent(g, circuit) {
        return Err(Error::Internal(format!(
            "edge {edge} closes no circuit over the given basis"
        )));
    }
    for f in basis.iter() {
        let candidate = circuit.without(f);
        if sparsity::ross_dependent(g, candidate) {
            circuit = candidate;
        }
    }
    Ok(circuit)
}

/// Circuits of the two-freedom matroid and the graph obtained by
/// contracting them.
#[derive(Clone, Debug)]
pub struct CircuitDecomposition {
    pub basis: EdgeSubset,
    /// Non-basis edges, ascending; `circuits[k]` closes over `extras[k]`.
    pub extras: Vec<usize>,
    pub circuits: Vec<EdgeSubset>,
    /// Original graph with each multi-vertex circuit contracted to a point,
    /// circuit-internal edges dropped, and one gain-1 loop appended per
    /// contracted point. Single-loop circuits stay as they are.
    pub reduced: ColoredGraph,
    /// Original vertex to reduced vertex.
    pub contraction_map: Vec<usize>,
    /// Original edge index behind each surviving reduced edge, in reduced
    /// order; appended loops follow these.
    pub surviving: Vec<usize>,
}

pub fn find_ross_circuits(g: &ColoredGraph) -> Result<CircuitDecomposition> {
    let basis = ross_basis(g)?;
    let all = g.all_edges()?;
    let extras: Vec<usize> = all.minus(basis).indices();
    let circuits: Vec<EdgeSubset> = extras
        .iter()
        .map(|&e| fundamental_circuit(g, basis, e))
        .collect::<Result<_>>()?;

    let n = g.vertex_count();
    let mut class_of = vec![usize::MAX; n];
    let mut contracted: Vec<bool> = Vec::new();
    let mut next = 0usize;
    for v in 0..n {
        if class_of[v] != usize::MAX {
            continue;
        }
        let home = circuits
            .iter()
            .find(|c| c.iter().any(|e| g.edge(e).tail == v || g.edge(e).head == v));
        match home {
            Some(c) => {
                let mut vertices: Vec<usize> = Vec::new();
                for e in c.iter() {
                    vertices.push(g.edge(e).tail);
                    vertices.push(g.edge(e).head);
                }
                vertices.sort_unstable();
                vertices.dedup();
                let multi = vertices.len() > 1;
                for &w in &vertices {
                    class_of[w] = next;
                }
                contracted.push(multi);
                next += 1;
            }
            None => {
                class_of[v] = next;
                contracted.push(false);
                next += 1;
            }
        }
    }

    let in_circuit: EdgeSubset = circuits
        .iter()
        .fold(EdgeSubset::EMPTY, |acc, &c| acc.union(c));
    let mut edges = Vec::new();
    let mut surviving = Vec::new();
    for (index, e) in g.edges().iter().enumerate() {
        let (a, b) = (class_of[e.tail], class_of[e.head]);
        if a == b && contracted[a] {
            continue;
        }
        if in_circuit.contains(index) && a == b {
            // A single-loop circuit keeps its loop.
            debug_assert!(e.is_loop());
        }
        edges.push(Edge::new(a, b, e.gain));
        surviving.push(index);
    }
    for (class, &multi) in contracted.iter().enumerate() {
        if multi {
            edges.push(Edge::new(class, class, Color::ONE));
        }
    }
    let reduced = ColoredGraph::new(next, edges)?;
    Ok(CircuitDecomposition {
        basis,
        extras,
        circuits,
        reduced,
        contraction_map: class_of,
        surviving,
    })
}

/// The designated cycle edge of a circuit: decompose the circuit, order the
/// map part's components by least edge index, strip leaves off the first
/// component to expose its cycle, and take the least-index cycle edge whose
/// recolored gain is 1. Returns the index in the ambient graph.
pub fn special_edge(g: &ColoredGraph, circuit: EdgeSubset) -> Result<usize> {
    let (sub, _vertices, edge_ids) = g.edge_induced(circuit);
    let dec = decompose_tree_map(&sub)?;
    let mut components = dec.recolored.components(dec.map_part);
    components.sort_by_key(|c| c.edges.iter().copied().min());
    let first = components
        .first()
        .ok_or_else(|| Error::Internal("map part of a circuit is empty".into()))?;

    let mut live: Vec<usize> = first.edges.clone();
    loop {
        let mut degree = vec![0usize; sub.vertex_count()];
        for &e in &live {
            let edge = sub.edge(e);
            degree[edge.tail] += 1;
            degree[edge.head] += 1;
        }
        let before = live.len();
        live.retain(|&e| {
            let edge = sub.edge(e);
            edge.is_loop() || (degree[edge.tail] > 1 && degree[edge.head] > 1)
        });
        if live.len() == before {
            break;
        }
    }
    live.sort_unstable();
    let local = live
        .iter()
        .copied()
        .find(|&e| dec.recolored.edge(e).gain == Color::ONE)
        .ok_or_else(|| {
            Error::Internal("cycle of the first map component has no gain-1 edge".into())
        })?;
    Ok(edge_ids[local])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::build;

    fn doubled_triangle_minus() -> ColoredGraph {
        build(3, &[(0, 1, 0), (0, 1, 1), (1, 2, 0), (1, 2, 1), (2, 0, 0)])
    }

    fn pendant() -> ColoredGraph {
        build(
            4,
            &[
                (0, 1, 0),
                (0, 1, 1),
                (1, 2, 0),
                (1, 2, 1),
                (2, 0, 0),
                (3, 2, 0),
                (3, 0, 0),
            ],
        )
    }

    #[test]
    fn tree_map_split_of_lone_loop() {
        let g = build(1, &[(0, 0, 1)]);
        let dec = decompose_tree_map(&g).unwrap();
        assert!(dec.tree.is_empty());
        assert_eq!(dec.map_part, EdgeSubset::from_indices(&[0]));
        assert_eq!(dec.recolored, g);
        assert!(lift_structure_check(&g, &dec));
    }

    #[test]
    fn tree_map_split_picks_first_unbalanced_complement() {
        let g = doubled_triangle_minus();
        let dec = decompose_tree_map(&g).unwrap();
        // {0,2} leaves a balanced triangle behind and is skipped; {0,3} is
        // the first tree whose complement has an unbalanced cycle.
        assert_eq!(dec.tree, EdgeSubset::from_indices(&[0, 3]));
        assert_eq!(dec.map_part, EdgeSubset::from_indices(&[1, 2, 4]));
        let gains: Vec<u8> = dec.recolored.edges().iter().map(|e| e.gain.bit()).collect();
        assert_eq!(gains, vec![0, 1, 1, 0, 1]);
        assert!(lift_structure_check(&g, &dec));
    }

    #[test]
    fn tree_map_split_respects_edge_count() {
        let triangle = build(3, &[(0, 1, 0), (1, 2, 0), (2, 0, 0)]);
        assert!(matches!(
            decompose_tree_map(&triangle),
            Err(Error::NoDecomposition)
        ));
    }

    #[test]
    fn non_member_with_right_count_has_no_split() {
        // One-freedom edge count but a balanced tight subgraph blocks every
        // split into tree plus unbalanced map.
        let g = build(
            5,
            &[
                (0, 1, 0),
                (0, 2, 0),
                (0, 3, 0),
                (1, 2, 0),
                (1, 3, 0),
                (2, 3, 0),
                (0, 4, 1),
                (1, 4, 1),
                (2, 4, 1),
            ],
        );
        assert!(matches!(
            decompose_tree_map(&g),
            Err(Error::NoDecomposition)
        ));
    }

    #[test]
    fn greedy_basis_values() {
        assert_eq!(
            ross_basis(&doubled_triangle_minus()).unwrap(),
            EdgeSubset::from_indices(&[0, 1, 2, 3])
        );
        assert_eq!(
            ross_basis(&build(2, &[(0, 1, 0), (0, 1, 1), (0, 0, 1)])).unwrap(),
            EdgeSubset::from_indices(&[0, 1])
        );
        assert_eq!(
            ross_basis(&pendant()).unwrap(),
            EdgeSubset::from_indices(&[0, 1, 2, 3, 5, 6])
        );
        // All colors 0: the two-freedom matroid sees a plain graph.
        let k4 = build(
            4,
            &[
                (0, 1, 0),
                (0, 2, 0),
                (0, 3, 0),
                (1, 2, 0),
                (1, 3, 0),
                (2, 3, 0),
            ],
        );
        assert_eq!(
            ross_basis(&k4).unwrap(),
            EdgeSubset::from_indices(&[0, 1, 2, 3, 4])
        );
    }

    #[test]
    fn circuit_extraction_on_fixtures() {
        let g = doubled_triangle_minus();
        let dec = find_ross_circuits(&g).unwrap();
        assert_eq!(dec.extras, vec![4]);
        assert_eq!(dec.circuits, vec![EdgeSubset::full(5)]);
        assert_eq!(dec.reduced, build(1, &[(0, 0, 1)]));
        assert_eq!(dec.contraction_map, vec![0, 0, 0]);
        assert!(dec.surviving.is_empty());

        let g2 = build(2, &[(0, 1, 0), (0, 1, 1), (0, 0, 1)]);
        let dec = find_ross_circuits(&g2).unwrap();
        assert_eq!(dec.extras, vec![2]);
        assert_eq!(dec.circuits, vec![EdgeSubset::from_indices(&[2])]);
        // A single-loop circuit is not contracted; the graph is unchanged.
        assert_eq!(dec.reduced, g2);
        assert_eq!(dec.contraction_map, vec![0, 1]);
        assert_eq!(dec.surviving, vec![0, 1, 2]);

        let p = pendant();
        let dec = find_ross_circuits(&p).unwrap();
        assert_eq!(dec.extras, vec![4]);
        assert_eq!(
            dec.circuits,
            vec![EdgeSubset::from_indices(&[0, 1, 2, 3, 4])]
        );
        assert_eq!(dec.contraction_map, vec![0, 0, 0, 1]);
        assert_eq!(dec.surviving, vec![5, 6]);
        assert_eq!(dec.reduced, build(2, &[(1, 0, 0), (1, 0, 0), (0, 0, 1)]));
    }

    #[test]
    fn circuits_pass_one_freedom_counts() {
        for entry in crate::corpus::corpus() {
            let g = &entry.graph;
            if !sparsity::is_member(g, Family::ReflectionLaman).unwrap() {
                continue;
            }
            let dec = find_ross_circuits(g).unwrap();
            for &c in &dec.circuits {
                let sub = restriction(g, c);
                assert!(
                    sparsity::check_counts(&sub, Family::ReflectionLaman)
                        .unwrap()
                        .passes(),
                    "{}: circuit {c} violates the one-freedom count",
                    entry.name
                );
                let (standalone, _, _) = g.edge_induced(c);
                assert!(sparsity::is_ross_circuit(&standalone).unwrap());
            }
        }
    }

    #[test]
    fn circuits_are_vertex_disjoint() {
        for entry in crate::corpus::corpus() {
            let g = &entry.graph;
            if !sparsity::is_member(g, Family::ReflectionLaman).unwrap() {
                continue;
            }
            let dec = find_ross_circuits(g).unwrap();
            let mut seen = vec![false; g.vertex_count()];
            for &c in &dec.circuits {
                let (_, vertices, _) = g.edge_induced(c);
                for v in vertices {
                    assert!(!seen[v], "{}: circuits share vertex {v}", entry.name);
                    seen[v] = true;
                }
            }
        }
    }

    #[test]
    fn designated_cycle_edges() {
        let g = doubled_triangle_minus();
        assert_eq!(special_edge(&g, EdgeSubset::full(5)).unwrap(), 1);

        let p = pendant();
        assert_eq!(
            special_edge(&p, EdgeSubset::from_indices(&[0, 1, 2, 3, 4])).unwrap(),
            1
        );

        let g2 = build(2, &[(0, 1, 0), (0, 1, 1), (0, 0, 1)]);
        assert_eq!(
            special_edge(&g2, EdgeSubset::from_indices(&[2])).unwrap(),
            2
        );
    }

    #[test]
    fn split_lifts_verify_on_fixtures() {
        for entry in crate::corpus::corpus() {
            let g = &entry.graph;
            if !sparsity::is_member(g, Family::ReflectionLaman).unwrap() {
                continue;
            }
            let dec = decompose_tree_map(g).unwrap();
            assert!(lift_structure_check(g, &dec), "{}", entry.name);
        }
    }
}
