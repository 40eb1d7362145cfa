//! Named test graphs, seeded random members, and a small-graph census.
//!
//! The named entries are hand-built fixtures with known verdicts; the
//! generators grow random family members deterministically from a seed. The
//! census enumerates every colored graph with the one-freedom edge count on
//! a given tiny vertex set, up to relabeling.

use std::collections::HashSet;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Color, ColoredGraph, Edge};
use crate::sparsity::{connected_subgraph_check, is_member, Family};

const GENERATION_RESTARTS: usize = 32;
const STALE_LIMIT: usize = 128;

/// Build a graph from `(tail, head, gain)` triples; panics on bad input.
pub fn build(vertices: usize, edges: &[(usize, usize, u64)]) -> ColoredGraph {
    let edges = edges
        .iter()
        .map(|&(tail, head, gain)| {
            Edge::new(
                tail,
                head,
                Color::from_bit(gain).expect("gain must be 0 or 1"),
            )
        })
        .collect();
    ColoredGraph::new(vertices, edges).expect("fixture edges out of range")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Analytic,
    Generated { seed: u64 },
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub graph: ColoredGraph,
    pub provenance: Provenance,
}

impl CorpusEntry {
    fn analytic(name: &'static str, graph: ColoredGraph) -> CorpusEntry {
        CorpusEntry {
            name,
            graph,
            provenance: Provenance::Analytic,
        }
    }
}

/// Path on `vertices` vertices with every edge doubled in both colors.
pub fn doubled_path(vertices: usize) -> ColoredGraph {
    let mut edges = Vec::new();
    for i in 0..vertices.saturating_sub(1) {
        edges.push((i, i + 1, 0));
        edges.push((i, i + 1, 1));
    }
    build(vertices, &edges)
}

/// [`doubled_path`] plus a color-1 loop at vertex 0, appended last.
pub fn doubled_path_loop(vertices: usize) -> ColoredGraph {
    let mut edges = Vec::new();
    for i in 0..vertices.saturating_sub(1) {
        edges.push((i, i + 1, 0));
        edges.push((i, i + 1, 1));
    }
    edges.push((0, 0, 1));
    build(vertices, &edges)
}

/// The fixture list. Generated entries are deterministic in their seeds and
/// re-verified by tests, so this function panics only if a fixture breaks.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut entries = vec![
        CorpusEntry::analytic("lone-loop", build(1, &[(0, 0, 1)])),
        CorpusEntry::analytic(
            "doubled-edge-loop",
            build(2, &[(0, 1, 0), (0, 1, 1), (0, 0, 1)]),
        ),
        CorpusEntry::analytic(
            "doubled-triangle-minus",
            build(3, &[(0, 1, 0), (0, 1, 1), (1, 2, 0), (1, 2, 1), (2, 0, 0)]),
        ),
        CorpusEntry::analytic(
            "circuit-pendant",
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
            ),
        ),
        CorpusEntry::analytic("doubled-pair", build(2, &[(0, 1, 0), (0, 1, 1)])),
        CorpusEntry::analytic("doubled-path-4", doubled_path(4)),
        CorpusEntry::analytic("doubled-path-loop-4", doubled_path_loop(4)),
        CorpusEntry::analytic("triangle", build(3, &[(0, 1, 0), (1, 2, 0), (2, 0, 0)])),
        CorpusEntry::analytic(
            "complete-four",
            build(
                4,
                &[
                    (0, 1, 0),
                    (0, 2, 0),
                    (0, 3, 0),
                    (1, 2, 0),
                    (1, 3, 0),
                    (2, 3, 0),
                ],
            ),
        ),
        // Balanced despite the colors: every cycle through the apex uses two
        // mirror edges. Tight edge total, member of nothing interesting.
        CorpusEntry::analytic(
            "complete-four-star",
            build(
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
            ),
        ),
        // Same skeleton with an unbalanced apex: two-freedom-tight overall,
        // but the balanced complete subgraph stops the one-freedom count.
        CorpusEntry::analytic(
            "complete-four-apex",
            build(
                5,
                &[
                    (0, 1, 0),
                    (0, 2, 0),
                    (0, 3, 0),
                    (1, 2, 0),
                    (1, 3, 0),
                    (2, 3, 0),
                    (3, 4, 0),
                    (3, 4, 1),
                    (0, 4, 0),
                ],
            ),
        ),
        CorpusEntry::analytic(
            "two-islands",
            build(
                4,
                &[
                    (0, 1, 0),
                    (0, 1, 1),
                    (0, 0, 1),
                    (1, 1, 1),
                    (2, 3, 0),
                    (2, 3, 1),
                    (2, 2, 1),
                ],
            ),
        ),
    ];
    let generated: [(&'static str, usize, u64, Family); 6] = [
        ("generated-one-freedom-5", 5, 11, Family::ReflectionLaman),
        ("generated-one-freedom-6", 6, 12, Family::ReflectionLaman),
        ("generated-two-freedom-5", 5, 21, Family::Ross),
        ("generated-two-freedom-6", 6, 22, Family::Ross),
        ("generated-collapse-5", 5, 31, Family::Reflection22),
        ("generated-map-5", 5, 41, Family::Reflection11),
    ];
    for (name, vertices, seed, family) in generated {
        let graph = generate(vertices, seed, family)
            .unwrap_or_else(|e| panic!("fixture {name} failed to generate: {e}"));
        entries.push(CorpusEntry {
            name,
            graph,
            provenance: Provenance::Generated { seed },
        });
    }
    entries
}

/// Grow a random member of the family by accepting uniformly proposed edges
/// that keep every count satisfied, restarting when stuck. Loops are always
/// proposed with color 1. Deterministic in the seed.
pub fn generate(vertices: usize, seed: u64, family: Family) -> Result<ColoredGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = family.global_target(vertices);
    if target < 0 {
        return Err(Error::GenerationFailed { attempts: 0 });
    }
    let target = target as usize;
    for _ in 0..GENERATION_RESTARTS {
        let mut g = ColoredGraph::new(vertices, Vec::new())?;
        let mut stale = 0;
        while g.edge_count() < target && stale < STALE_LIMIT {
            let tail = rng.gen_range(0..vertices);
            let head = rng.gen_range(0..vertices);
            let gain = if tail == head {
                Color::ONE
            } else {
                Color(rng.gen())
            };
            let candidate = g.with_edge(Edge::new(tail, head, gain))?;
            if connected_subgraph_check(&candidate, family)?.passes() {
                g = candidate;
                stale = 0;
            } else {
                stale += 1;
            }
        }
        if g.edge_count() == target && is_member(&g, family)? {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailed {
        attempts: GENERATION_RESTARTS,
    })
}

/// Relabeling-invariant form: the lexicographically least sorted triple list
/// over all vertex permutations.
pub(crate) fn canonical_form(g: &ColoredGraph) -> Vec<(u8, u8, u8)> {
    let n = g.vertex_count();
    assert!(n <= 8, "canonical form is sized for tiny graphs");
    (0..n)
        .permutations(n)
        .map(|perm| {
            let mut triples: Vec<(u8, u8, u8)> = g
                .edges()
                .iter()
                .map(|e| {
                    let a = perm[e.tail] as u8;
                    let b = perm[e.head] as u8;
                    (a.min(b), a.max(b), e.gain.bit())
                })
                .collect();
            triples.sort_unstable();
            triples
        })
        .min()
        .unwrap_or_default()
}

/// Every colored graph on exactly `vertices` vertices with `2n - 1` edges,
/// one per isomorphism class. Pairs carry at most two edges, vertices at
/// most one loop.
pub fn extremal_universe(vertices: usize) -> Vec<ColoredGraph> {
    assert!((1..=4).contains(&vertices), "census is sized for n <= 4");
    let target = 2 * vertices - 1;
    let pairs: Vec<(usize, usize)> = (0..vertices).tuple_combinations().collect();
    // Pair states: multiset of colors on the pair, at most two edges.
    const PAIR_GAINS: [&[u8]; 6] = [&[], &[0], &[1], &[0, 0], &[0, 1], &[1, 1]];
    const LOOP_GAINS: [&[u8]; 3] = [&[], &[0], &[1]];
    let digits = pairs.len() + vertices;
    let mut radix = vec![6u64; pairs.len()];
    radix.extend(std::iter::repeat_n(3u64, vertices));
    let total: u64 = radix.iter().product();
    let mut seen: HashSet<Vec<(u8, u8, u8)>> = HashSet::new();
    let mut out = Vec::new();
    let mut state = vec![0usize; digits];
    for code in 0..total {
        let mut rest = code;
        let mut count = 0;
        for (d, &r) in radix.iter().enumerate() {
            state[d] = (rest % r) as usize;
            rest /= r;
            count += if d < pairs.len() {
                PAIR_GAINS[state[d]].len()
            } else {
                LOOP_GAINS[state[d]].len()
            };
        }
        if count != target {
            continue;
        }
        let mut triples = Vec::with_capacity(target);
        for (d, &(a, b)) in pairs.iter().enumerate() {
            for &gain in PAIR_GAINS[state[d]] {
                triples.push((a, b, gain as u64));
            }
        }
        for v in 0..vertices {
            for &gain in LOOP_GAINS[state[pairs.len() + v]] {
                triples.push((v, v, gain as u64));
            }
        }
        let g = build(vertices, &triples);
        let canon = canonical_form(&g);
        if seen.insert(canon.clone()) {
            let canon_triples: Vec<(usize, usize, u64)> = canon
                .iter()
                .map(|&(a, b, gain)| (a as usize, b as usize, gain as u64))
                .collect();
            out.push(build(vertices, &canon_triples));
        }
    }
    out
}
