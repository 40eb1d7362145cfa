//! Symmetric frameworks and their rigidity matrices.
//!
//! A placement assigns each quotient vertex a point; mirror copies are
//! implied. The rigidity matrix has one row per edge: with `D` the edge
//! vector `M(c) p_j - p_i`, the `p_j` block holds `M(c) D` and the `p_i`
//! block holds `-D`, which is half the gradient of the squared length. Its
//! kernel always contains the vertical translation, so the rank is at most
//! `2n - 1` and a framework is infinitesimally rigid exactly at that rank.
//!
//! The same rows appear when the edge vectors themselves are used as a
//! direction assignment, which ties rank questions here to the realization
//! spaces in [`crate::direction_network`]. Generic rank is measured by
//! sampling integer placements and keeping the best of a few exact ranks.
//!
//! [`certify`] runs the count check, the generic rank, and the special-pair
//! construction side by side and insists they tell one story.

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::direction_network::{self, DirectionAssignment, SAMPLE_BOUND};
use crate::error::{Error, Result};
use crate::graph::ColoredGraph;
use crate::linalg::{q_string, QMatrix, Vec2, Q};
use crate::sparsity::{self, CountWitness, Family};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Placements tried per generic-rank measurement.
const RANK_SEEDS: u64 = 5;

/// Integer placement sampled from `seed`, one point per quotient vertex.
pub fn random_placement(g: &ColoredGraph, seed: u64) -> Vec<Vec2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..g.vertex_count())
        .map(|_| {
            Vec2::from_ints(
                rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND),
                rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND),
            )
        })
        .collect()
}

/// Squared length of every edge in the double cover.
pub fn edge_lengths(g: &ColoredGraph, points: &[Vec2]) -> Vec<Q> {
    (0..g.edge_count())
        .map(|e| {
            let d = direction_network::edge_delta(g, e, points);
            d.dot(&d)
        })
        .collect()
}

/// One row per edge; collapsed edges contribute zero rows rather than
/// failing, so the matrix is defined at every placement.
pub fn rigidity_matrix(g: &ColoredGraph, points: &[Vec2]) -> QMatrix {
    let mut matrix = QMatrix::new(2 * g.vertex_count());
    for e in 0..g.edge_count() {
        let edge = g.edge(e);
        let delta = direction_network::edge_delta(g, e, points);
        let head_block = delta.apply(edge.gain);
        let mut row = vec![Q::zero(); 2 * g.vertex_count()];
        row[2 * edge.head] += head_block.x;
        row[2 * edge.head + 1] += head_block.y;
        row[2 * edge.tail] -= delta.x;
        row[2 * edge.tail + 1] -= delta.y;
        matrix.push_row(row);
    }
    matrix
}

pub fn is_infinitesimally_rigid(g: &ColoredGraph, points: &[Vec2]) -> bool {
    rigidity_matrix(g, points).rank() == 2 * g.vertex_count() - 1
}

/// Rigid, and no edge is redundant: deleting any one row drops the rank.
pub fn is_minimally_rigid(g: &ColoredGraph, points: &[Vec2]) -> bool {
    if !is_infinitesimally_rigid(g, points) {
        return false;
    }
    (0..g.edge_count())
        .all(|e| rigidity_matrix(&g.without_edge(e), points).rank() == 2 * g.vertex_count() - 2)
}

fn placement_rank(g: &ColoredGraph, placement_seed: u64) -> usize {
    rigidity_matrix(g, &random_placement(g, placement_seed)).rank()
}

/// Best rank over a few placements derived from `seed`.
pub fn generic_rank(g: &ColoredGraph, seed: u64) -> usize {
    #[cfg(feature = "parallel")]
    {
        generic_rank_par(g, seed)
    }
    #[cfg(not(feature = "parallel"))]
    {
        generic_rank_seq(g, seed)
    }
}

pub fn generic_rank_seq(g: &ColoredGraph, seed: u64) -> usize {
    (0..RANK_SEEDS)
        .map(|k| placement_rank(g, seed.wrapping_add(k)))
        .max()
        .expect("at least one placement")
}

#[cfg(feature = "parallel")]
pub fn generic_rank_par(g: &ColoredGraph, seed: u64) -> usize {
    (0..RANK_SEEDS)
        .into_par_iter()
        .map(|k| placement_rank(g, seed.wrapping_add(k)))
        .max()
        .expect("at least one placement")
}

/// Edge vectors of a placement as a direction assignment. With these
/// directions the constraint rows coincide with the rigidity matrix rows,
/// so ranks transfer between the two systems.
pub fn directions_from_points(g: &ColoredGraph, points: &[Vec2]) -> Result<DirectionAssignment> {
    (0..g.edge_count())
        .map(|e| {
            let d = direction_network::edge_delta(g, e, points);
            if d.is_zero() {
                Err(Error::CollapsedEdge { edge: e })
            } else {
                Ok(d)
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub edges: Vec<usize>,
    pub spanned: usize,
    pub edge_count: usize,
    pub unbalanced: usize,
    pub balanced: usize,
    pub bound: i64,
}

impl WitnessReport {
    fn from_witness(w: &CountWitness) -> WitnessReport {
        WitnessReport {
            edges: w.edges.indices(),
            spanned: w.spanned,
            edge_count: w.edge_count,
            unbalanced: w.unbalanced,
            balanced: w.balanced,
            bound: w.bound,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CombinatorialReport {
    pub verdict: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessReport>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericReport {
    pub rank: usize,
    pub target: usize,
    pub minimal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpecialPairReport {
    pub directions: Vec<[String; 2]>,
    pub realization: Vec<[String; 2]>,
}

/// Verdicts of the three routes side by side. Serializes to a stable JSON
/// shape; rationals are printed as `numerator/denominator`.
#[derive(Clone, Debug, Serialize)]
pub struct CertificationReport {
    pub combinatorial: CombinatorialReport,
    pub numeric: NumericReport,
    pub special_pair: Option<SpecialPairReport>,
    pub agreement: bool,
}

fn pair_strings(points: &[Vec2]) -> Vec<[String; 2]> {
    points
        .iter()
        .map(|p| [q_string(&p.x), q_string(&p.y)])
        .collect()
}

/// Decide minimal generic rigidity three independent ways and cross-check.
///
/// The combinatorial route runs the count check at the tight edge total,
/// the numeric route measures generic rank, and the constructive route
/// builds a special pair when the counts say one exists. Any disagreement
/// is an internal error carrying the full report; an agreeing report is
/// returned whether the verdict is positive or negative.
pub fn certify(g: &ColoredGraph, seed: u64) -> Result<CertificationReport> {
    let n = g.vertex_count();
    let target = (2 * n).saturating_sub(1);
    let counts = sparsity::check_counts(g, Family::ReflectionLaman)?;
    let member = counts.passes() && g.edge_count() == target;

    let rank = generic_rank(g, seed);
    let minimal = rank == target && g.edge_count() == target;

    let special_pair = if member {
        match direction_network::special_pair(g, seed) {
            Ok(pair) => Some(SpecialPairReport {
                directions: pair_strings(&pair.directions),
                realization: pair_strings(&pair.realization),
            }),
            Err(Error::RetriesExhausted { .. }) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };

    let agreement = member == minimal && member == special_pair.is_some();
    let report = CertificationReport {
        combinatorial: CombinatorialReport {
            verdict: member,
            witness: counts.witness.as_ref().map(WitnessReport::from_witness),
        },
        numeric: NumericReport {
            rank,
            target,
            minimal,
        },
        special_pair,
        agreement,
    };
    if agreement {
        Ok(report)
    } else {
        Err(Error::InternalDisagreement {
            report: Box::new(report),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build, corpus};
    use crate::linalg::{q_int, Q};
    use num::Zero;

    fn lone_loop() -> ColoredGraph {
        build(1, &[(0, 0, 1)])
    }

    #[test]
    fn loop_row_is_four_x() {
        // The constraint row for the same loop and the same point prints as
        // (-2x, 0); the rigidity row doubles it with the opposite sign
        // because the head block passes through the mirror a second time.
        let g = lone_loop();
        let m = rigidity_matrix(&g, &[Vec2::from_ints(3, 7)]);
        assert_eq!(m.rows(), &[vec![q_int(12), q_int(0)]]);
    }

    #[test]
    fn loop_rank_drops_on_the_mirror() {
        let g = lone_loop();
        assert_eq!(rigidity_matrix(&g, &[Vec2::from_ints(1, 5)]).rank(), 1);
        assert_eq!(rigidity_matrix(&g, &[Vec2::from_ints(0, 5)]).rank(), 0);
    }

    #[test]
    fn rank_transfers_to_the_constraint_system() {
        for entry in corpus() {
            let g = &entry.graph;
            for seed in [11u64, 12, 13] {
                let points = random_placement(g, seed);
                let Ok(directions) = directions_from_points(g, &points) else {
                    continue;
                };
                let rigid = rigidity_matrix(g, &points);
                let system = direction_network::build_system(g, &directions).unwrap();
                assert_eq!(rigid.rows(), system.rows(), "{}", entry.name);
            }
        }
    }

    #[test]
    fn rows_are_half_the_length_gradient() {
        let g = build(3, &[(0, 1, 0), (0, 1, 1), (1, 2, 0), (1, 2, 1), (2, 0, 0)]);
        let p = random_placement(&g, 2);
        let q = random_placement(&g, 3);
        let eps = crate::linalg::q_ratio(1, 7);
        let moved: Vec<Vec2> = p
            .iter()
            .zip(&q)
            .map(|(a, b)| a.add(&b.scale(&eps)))
            .collect();
        let flat_q: Vec<Q> = q.iter().flat_map(|v| [v.x.clone(), v.y.clone()]).collect();
        let lengths = edge_lengths(&g, &p);
        let moved_lengths = edge_lengths(&g, &moved);
        let q_lengths = edge_lengths(&g, &q);
        let gradient = rigidity_matrix(&g, &p).mul_vec(&flat_q);
        for e in 0..g.edge_count() {
            let expected = &lengths[e]
                + Q::from_integer(2.into()) * &eps * &gradient[e]
                + &eps * &eps * &q_lengths[e];
            assert_eq!(moved_lengths[e], expected);
        }
    }

    #[test]
    fn identity_colored_rows_are_rotation_invariant() {
        // Rotating a placement by (3/5, 4/5) preserves the rank when every
        // gain is the identity; mirror rows would not commute with it.
        let g = build(3, &[(0, 1, 0), (1, 2, 0), (2, 0, 0)]);
        let p = random_placement(&g, 5);
        let rotated: Vec<Vec2> = p
            .iter()
            .map(|v| {
                Vec2::new(
                    crate::linalg::q_ratio(3, 5) * &v.x - crate::linalg::q_ratio(4, 5) * &v.y,
                    crate::linalg::q_ratio(4, 5) * &v.x + crate::linalg::q_ratio(3, 5) * &v.y,
                )
            })
            .collect();
        assert_eq!(
            rigidity_matrix(&g, &p).rank(),
            rigidity_matrix(&g, &rotated).rank()
        );
    }

    #[test]
    fn vertical_translation_is_always_flexible() {
        for entry in corpus() {
            let g = &entry.graph;
            let p = random_placement(g, 23);
            let m = rigidity_matrix(g, &p);
            let vt: Vec<Q> = (0..2 * g.vertex_count())
                .map(|i| q_int((i % 2 == 1) as i64))
                .collect();
            assert!(m.mul_vec(&vt).iter().all(Q::is_zero), "{}", entry.name);
            assert!(m.rank() < 2 * g.vertex_count(), "{}", entry.name);
        }
    }

    #[test]
    fn doubled_edge_loop_is_minimally_rigid() {
        let g = build(2, &[(0, 1, 0), (0, 1, 1), (0, 0, 1)]);
        assert_eq!(generic_rank(&g, 1), 3);
        assert_eq!(generic_rank_seq(&g, 1), 3);
        let p = random_placement(&g, 1);
        assert!(is_infinitesimally_rigid(&g, &p));
        assert!(is_minimally_rigid(&g, &p));
    }

    #[test]
    fn redundant_edge_defeats_minimality() {
        let g = build(2, &[(0, 1, 0), (0, 1, 1), (0, 0, 1), (1, 1, 1)]);
        let p = random_placement(&g, 4);
        assert!(!is_minimally_rigid(&g, &p));
    }

    #[test]
    fn collapsed_placement_is_rejected_for_directions() {
        let g = build(2, &[(0, 1, 0)]);
        let points = vec![Vec2::from_ints(2, 2), Vec2::from_ints(2, 2)];
        assert!(matches!(
            directions_from_points(&g, &points),
            Err(Error::CollapsedEdge { edge: 0 })
        ));
    }

    #[test]
    fn certify_agrees_on_a_member() {
        let report = certify(&lone_loop(), 7).unwrap();
        assert!(report.agreement);
        assert!(report.combinatorial.verdict);
        assert!(report.numeric.minimal);
        assert_eq!(report.numeric.rank, 1);
        assert!(report.special_pair.is_some());
    }

    #[test]
    fn certify_agrees_on_a_non_member() {
        // Two rigid islands: the edge total is tight but the counts fail
        // and the rank falls short, and both routes say so together.
        let g = build(
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
        );
        let report = certify(&g, 7).unwrap();
        assert!(report.agreement);
        assert!(!report.combinatorial.verdict);
        assert!(report.combinatorial.witness.is_some());
        assert!(!report.numeric.minimal);
        assert!(report.special_pair.is_none());
    }

    #[test]
    fn report_serializes_stably() {
        let report = certify(&lone_loop(), 7).unwrap();
        let a = serde_json::to_string_pretty(&report).unwrap();
        let b = serde_json::to_string_pretty(&certify(&lone_loop(), 7).unwrap()).unwrap();
        assert_eq!(a, b);
        assert!(a.contains("\"agreement\": true"));
    }
}
