//! End-to-end acceptance checks tying the three rigidity routes together.
//! Each test prints one `acceptance <name>: PASS/FAIL (tally)` line; run
//! with `--nocapture` to see them. A FAIL line is always followed by the
//! failing assertion so the suite cannot pass silently.

use rayon::prelude::*;
use refrig_core::corpus::{corpus, extremal_universe, CorpusEntry};
use refrig_core::decomposition::{decompose_tree_map, find_ross_circuits, lift_structure_check};
use refrig_core::direction_network::{
    build_system, collapse_directions, edge_delta, is_special_pair, perp_assignment,
    random_directions, realization_space, special_pair, strongly_faithful_witness,
};
use refrig_core::rigidity::{
    directions_from_points, generic_rank, random_placement, rigidity_matrix,
};
use refrig_core::sparsity::{check_counts, connected_subgraph_check, is_member, CountWitness};
use refrig_core::{Color, ColoredGraph, Edge, Family, Vec2};

use num::Zero;

fn report(name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("acceptance {name}: {verdict} ({detail})");
    assert!(pass, "acceptance {name}: {detail}");
}

fn members_of(family: Family) -> Vec<CorpusEntry> {
    corpus()
        .into_iter()
        .filter(|e| is_member(&e.graph, family).unwrap())
        .collect()
}

/// The combinatorial count and the generic rank must agree on minimal
/// rigidity over every colored graph with the tight edge total on up to
/// four vertices, one representative per relabeling class.
#[test]
fn main_theorem_equivalence() {
    let graphs: Vec<ColoredGraph> = (1..=4).flat_map(extremal_universe).collect();
    let verdicts: Vec<(bool, bool)> = graphs
        .par_iter()
        .map(|g| {
            let member = is_member(g, Family::ReflectionLaman).unwrap();
            let rigid = generic_rank(g, 0xACCE) == 2 * g.vertex_count() - 1;
            (member, rigid)
        })
        .collect();
    let members = verdicts.iter().filter(|v| v.0).count();
    let disagreements = verdicts.iter().filter(|v| v.0 != v.1).count();
    report(
        "main-theorem-equivalence",
        disagreements == 0,
        &format!(
            "{} graphs, {} rigid, {} disagreements between counts and rank",
            graphs.len(),
            members,
            disagreements
        ),
    );
}

/// Every one-freedom member of the corpus yields a verified special pair
/// within the retry budget.
#[test]
fn special_pair_construction() {
    let entries = members_of(Family::ReflectionLaman);
    let failures: Vec<String> = entries
        .par_iter()
        .filter_map(|entry| {
            let g = &entry.graph;
            let pair = match special_pair(g, 0xC0DE) {
                Ok(pair) => pair,
                Err(e) => return Some(format!("{}: {e}", entry.name)),
            };
            let special = is_special_pair(g, &pair.directions).unwrap();
            let faithful =
                (0..g.edge_count()).all(|e| !edge_delta(g, e, &pair.realization).is_zero());
            let dual = realization_space(g, &perp_assignment(&pair.directions))
                .unwrap()
                .dimension();
            if special && faithful && dual == 1 {
                None
            } else {
                Some(format!(
                    "{}: special={special} faithful={faithful} dual-dimension={dual}",
                    entry.name
                ))
            }
        })
        .collect();
    report(
        "special-pair-construction",
        !entries.is_empty() && failures.is_empty(),
        &format!(
            "{} one-freedom members, failures: [{}]",
            entries.len(),
            failures.join("; ")
        ),
    );
}

/// On corpus graphs with the tight edge total that fail the count check,
/// no sampled direction assignment forms a special pair.
#[test]
fn special_pair_necessity() {
    let entries: Vec<CorpusEntry> = corpus()
        .into_iter()
        .filter(|e| {
            e.graph.edge_count() == 2 * e.graph.vertex_count() - 1
                && !is_member(&e.graph, Family::ReflectionLaman).unwrap()
        })
        .collect();
    let mut sampled = 0usize;
    let mut offenders = Vec::new();
    for entry in &entries {
        for seed in 0..20u64 {
            let d = random_directions(&entry.graph, 0x5EED_0000 + seed);
            sampled += 1;
            if is_special_pair(&entry.graph, &d).unwrap() {
                offenders.push(format!("{} seed {seed}", entry.name));
            }
        }
    }
    report(
        "special-pair-necessity",
        !entries.is_empty() && offenders.is_empty(),
        &format!(
            "{} non-member graphs, {sampled} assignments sampled, {} formed special pairs",
            entries.len(),
            offenders.len()
        ),
    );
}

/// Two-freedom members have two-dimensional realization spaces under random
/// directions, with a realization keeping all lifted points distinct.
#[test]
fn two_freedom_realizations() {
    let entries = members_of(Family::Ross);
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for entry in &entries {
        let g = &entry.graph;
        for seed in 0..5u64 {
            let d = random_directions(g, 0xD00D_0000 + seed);
            let dim = realization_space(g, &d).unwrap().dimension();
            let witness = strongly_faithful_witness(g, &d).unwrap();
            let distinct = witness.as_ref().is_some_and(|points| {
                let lifted: Vec<Vec2> = points
                    .iter()
                    .flat_map(|p| [p.clone(), p.mirror()])
                    .collect();
                (0..lifted.len()).all(|i| (i + 1..lifted.len()).all(|j| lifted[i] != lifted[j]))
            });
            checked += 1;
            if dim != 2 || !distinct {
                failures.push(format!(
                    "{} seed {seed}: dimension={dim} distinct-witness={distinct}",
                    entry.name
                ));
            }
        }
    }
    report(
        "two-freedom-realizations",
        !entries.is_empty() && failures.is_empty(),
        &format!(
            "{} two-freedom members x 5 seeds, {checked} spaces, failures: [{}]",
            entries.len(),
            failures.join("; ")
        ),
    );
}

/// Two-freedom-plus-one members collapse under constructed directions: the
/// realization space is one-dimensional and spanned by the vertical
/// translation.
#[test]
fn collapse_realizations() {
    let entries = members_of(Family::Reflection22);
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for entry in &entries {
        let g = &entry.graph;
        for seed in 0..5u64 {
            match collapse_directions(g, 0xC011_0000 + seed) {
                Ok(d) => {
                    let space = realization_space(g, &d).unwrap();
                    let vertical_only = space.dimension() == 1 && {
                        let b = &space.basis[0];
                        let xs_vanish = (0..g.vertex_count()).all(|v| b[2 * v].is_zero());
                        let ys_equal =
                            (0..g.vertex_count()).all(|v| b[2 * v + 1] == b[1]) && !b[1].is_zero();
                        xs_vanish && ys_equal
                    };
                    checked += 1;
                    if !vertical_only {
                        failures.push(format!(
                            "{} seed {seed}: dimension={}",
                            entry.name,
                            space.dimension()
                        ));
                    }
                }
                Err(e) => failures.push(format!("{} seed {seed}: {e}", entry.name)),
            }
        }
    }
    report(
        "collapse-realizations",
        !entries.is_empty() && failures.is_empty(),
        &format!(
            "{} members x 5 seeds, {checked} collapses verified, failures: [{}]",
            entries.len(),
            failures.join("; ")
        ),
    );
}

/// Exchanging roles between placements and directions preserves rank: the
/// rigidity matrix at a placement has the same rank as the constraint
/// system whose realizations keep every edge parallel to the perpendicular
/// of its own vector, and the two matrices agree row for row.
#[test]
fn rank_transfer() {
    let mut compared = 0usize;
    let mut failures = Vec::new();
    for entry in corpus() {
        let g = &entry.graph;
        let mut done = 0u32;
        let mut seed = 0xA11F_0000u64;
        while done < 3 {
            let points = random_placement(g, seed);
            seed += 1;
            if seed - 0xA11F_0000 > 64 {
                failures.push(format!("{}: placements keep collapsing", entry.name));
                break;
            }
            let Ok(d) = directions_from_points(g, &points) else {
                continue;
            };
            let rigid = rigidity_matrix(g, &points);
            let system = build_system(g, &d).unwrap();
            if rigid.rank() != system.rank() || rigid.rows() != system.rows() {
                failures.push(format!("{} placement {done}", entry.name));
            }
            compared += 1;
            done += 1;
        }
    }
    report(
        "rank-transfer",
        failures.is_empty(),
        &format!(
            "{compared} placements, ranks and rows agree, failures: [{}]",
            failures.join("; ")
        ),
    );
}

fn circuit_vertices(g: &ColoredGraph, circuit: refrig_core::EdgeSubset) -> Vec<usize> {
    let mut vs: Vec<usize> = circuit
        .iter()
        .flat_map(|e| [g.edge(e).tail, g.edge(e).head])
        .collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// Structure of one-freedom members: circuits are vertex-disjoint and the
/// contracted graph stays a two-freedom-plus-one member; every
/// two-freedom-plus-one member splits into a tree and an unbalanced map
/// graph whose lift is two spanning trees; and a two-freedom member
/// absorbs any legal extra edge into the two-freedom-plus-one family.
#[test]
fn structural_decompositions() {
    let mut failures = Vec::new();

    let one_freedom = members_of(Family::ReflectionLaman);
    for entry in &one_freedom {
        let g = &entry.graph;
        match find_ross_circuits(g) {
            Ok(dec) => {
                for i in 0..dec.circuits.len() {
                    for j in i + 1..dec.circuits.len() {
                        let a = circuit_vertices(g, dec.circuits[i]);
                        let b = circuit_vertices(g, dec.circuits[j]);
                        if a.iter().any(|v| b.contains(v)) {
                            failures
                                .push(format!("{}: circuits {i},{j} share a vertex", entry.name));
                        }
                    }
                }
                if !is_member(&dec.reduced, Family::Reflection22).unwrap() {
                    failures.push(format!("{}: reduced graph fails the count", entry.name));
                }
            }
            Err(e) => failures.push(format!("{}: {e}", entry.name)),
        }
    }

    let collapse_family = members_of(Family::Reflection22);
    for entry in &collapse_family {
        match decompose_tree_map(&entry.graph) {
            Ok(dec) => {
                if !lift_structure_check(&entry.graph, &dec) {
                    failures.push(format!("{}: split does not lift to two trees", entry.name));
                }
            }
            Err(e) => failures.push(format!("{}: no tree and map split: {e}", entry.name)),
        }
    }

    let two_freedom = members_of(Family::Ross);
    let mut augmentations = 0usize;
    for entry in &two_freedom {
        let g = &entry.graph;
        let n = g.vertex_count();
        for u in 0..n {
            for v in u..n {
                let gains: &[Color] = if u == v {
                    &[Color::ONE]
                } else {
                    &[Color::ZERO, Color::ONE]
                };
                for &gain in gains {
                    let aug = g.with_edge(Edge::new(u, v, gain)).unwrap();
                    augmentations += 1;
                    if !is_member(&aug, Family::Reflection22).unwrap() {
                        failures.push(format!("{} plus ({u},{v},{gain})", entry.name));
                    }
                }
            }
        }
    }

    report(
        "structural-decompositions",
        !one_freedom.is_empty() && !two_freedom.is_empty() && failures.is_empty(),
        &format!(
            "{} circuit decompositions, {} splits, {augmentations} augmentations, failures: [{}]",
            one_freedom.len(),
            collapse_family.len(),
            failures.join("; ")
        ),
    );
}

fn witness_is_genuine(g: &ColoredGraph, family: Family, w: &CountWitness) -> bool {
    let comps = g.components(w.edges);
    let spanned: usize = comps.iter().map(|c| c.vertices.len()).sum();
    let balanced = comps.iter().filter(|c| c.balanced).count();
    let unbalanced = comps.len() - balanced;
    spanned == w.spanned
        && balanced == w.balanced
        && unbalanced == w.unbalanced
        && (w.edge_count as i64) > family.bound(spanned, unbalanced, balanced)
        && w.edges.len() == w.edge_count
}

/// The pruned connected-subset scan and the literal all-subsets scan give
/// the same verdict for every family, and any witness either returns is a
/// genuine violation when recounted from scratch.
#[test]
fn count_oracle_equivalence() {
    let mut comparisons = 0usize;
    let mut failures = Vec::new();
    for entry in corpus() {
        let g = &entry.graph;
        if g.edge_count() > 12 {
            continue;
        }
        for family in Family::ALL {
            let full = check_counts(g, family).unwrap();
            let pruned = connected_subgraph_check(g, family).unwrap();
            comparisons += 1;
            if full.passes() != pruned.passes() {
                failures.push(format!("{} {family}: verdicts differ", entry.name));
            }
            for report in [&full, &pruned] {
                if let Some(w) = &report.witness {
                    if !witness_is_genuine(g, family, w) {
                        failures.push(format!("{} {family}: witness does not recount", entry.name));
                    }
                }
            }
        }
    }
    report(
        "count-oracle-equivalence",
        failures.is_empty(),
        &format!(
            "{comparisons} graph-family pairs, failures: [{}]",
            failures.join("; ")
        ),
    );
}
