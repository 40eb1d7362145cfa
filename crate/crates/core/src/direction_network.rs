//! Direction networks on the quotient graph, over exact rationals.
//!
//! An assignment gives every edge a nonzero direction vector. A realization
//! is a placement of the quotient vertices whose edge vectors, taken in the
//! double cover, are all perpendicular to the assigned directions; the
//! constraint row for edge `ij` with color `c` reads
//! `<M(c) p_j - p_i, d_ij> = 0`, where `M(1)` is the mirror. The vertical
//! translation solves every system, so the realization space never has
//! dimension zero. A realization is *faithful* when no edge vector
//! vanishes, and an assignment pair `(d, perp(d))` is *special* when `d`
//! admits a faithful realization while `perp(d)` admits only the collapsed
//! ones.
//!
//! Constructions here follow a sample-and-verify discipline: candidates are
//! drawn near the deterministic tree-and-map assignment, every required
//! property is then checked exactly, and failures resample with fresh
//! randomness. Nothing returned has been certified by anything weaker than
//! exact rational linear algebra.

use num::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomposition::{self, CircuitDecomposition, TreeMapDecomposition};
use crate::error::{Error, Result};
use crate::graph::{ColoredGraph, EdgeSubset};
use crate::linalg::{q_int, QMatrix, Vec2, Q, Z};
use crate::sparsity::{self, Family};

/// One direction per edge, in canonical edge order.
pub type DirectionAssignment = Vec<Vec2>;

/// Retry budget for every sample-and-verify construction.
pub const MAX_ATTEMPTS: usize = 32;

/// Integer sampling box for random directions and placements.
pub(crate) const SAMPLE_BOUND: i64 = 1 << 20;

/// First evaluation point for combining kernel basis vectors.
const WITNESS_BASE: i64 = 1 << 16;

/// Constraint rows for the given edges only; `directions` is indexed by
/// original edge index and entries outside `rows` are ignored.
pub fn build_subsystem(g: &ColoredGraph, rows: EdgeSubset, directions: &[Vec2]) -> Result<QMatrix> {
    if directions.len() != g.edge_count() {
        return Err(Error::Internal(format!(
            "{} directions for {} edges",
            directions.len(),
            g.edge_count()
        )));
    }
    let mut matrix = QMatrix::new(2 * g.vertex_count());
    for e in rows.iter() {
        let d = &directions[e];
        if d.is_zero() {
            return Err(Error::ZeroDirection { edge: e });
        }
        let edge = g.edge(e);
        let mut row = vec![Q::zero(); 2 * g.vertex_count()];
        let head_coeff = d.apply(edge.gain);
        row[2 * edge.head] += head_coeff.x;
        row[2 * edge.head + 1] += head_coeff.y;
        row[2 * edge.tail] -= &d.x;
        row[2 * edge.tail + 1] -= &d.y;
        matrix.push_row(row);
    }
    Ok(matrix)
}

/// One constraint row per edge.
pub fn build_system(g: &ColoredGraph, directions: &[Vec2]) -> Result<QMatrix> {
    build_subsystem(g, g.all_edges()?, directions)
}

#[derive(Clone, Debug)]
pub struct RealizationSpace {
    /// Kernel basis; each vector lists `x_0, y_0, x_1, y_1, ...`.
    pub basis: Vec<Vec<Q>>,
    pub rank: usize,
}

impl RealizationSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

pub fn realization_space(g: &ColoredGraph, directions: &[Vec2]) -> Result<RealizationSpace> {
    let system = build_system(g, directions)?;
    let rank = system.rank();
    let basis = system.nullspace();
    debug_assert_eq!(rank + basis.len(), 2 * g.vertex_count());
    Ok(RealizationSpace { basis, rank })
}

#[derive(Clone, Debug)]
pub struct PairClassification {
    pub dimension: usize,
    /// Every realization collapses every edge.
    pub collapsed_only: bool,
    /// Some realization collapses no edge.
    pub faithful_exists: bool,
    pub witness: Option<Vec<Vec2>>,
}

/// Decide how the realization space treats edge vectors: all collapsed,
/// somewhere faithful, or in between. The faithful witness, when one
/// exists, is built from the kernel basis and verified exactly.
pub fn classify(g: &ColoredGraph, directions: &[Vec2]) -> Result<PairClassification> {
    let space = realization_space(g, directions)?;
    let funcs: Vec<Functional> = (0..g.edge_count()).map(Functional::Edge).collect();
    let collapsed_only = funcs
        .iter()
        .all(|f| vanishes_identically(g, f, &space.basis));
    let witness = faithful_combination(g, &space.basis, &funcs);
    Ok(PairClassification {
        dimension: space.dimension(),
        collapsed_only,
        faithful_exists: witness.is_some(),
        witness,
    })
}

/// Faithful realization with all lifted points distinct: on top of the edge
/// functionals, every pair of points must differ, every point must differ
/// from every mirrored point, and no point may sit on the mirror.
pub fn strongly_faithful_witness(
    g: &ColoredGraph,
    directions: &[Vec2],
) -> Result<Option<Vec<Vec2>>> {
    let space = realization_space(g, directions)?;
    let n = g.vertex_count();
    let mut funcs: Vec<Functional> = (0..g.edge_count()).map(Functional::Edge).collect();
    for u in 0..n {
        for v in u..n {
            if u != v {
                funcs.push(Functional::PointPair {
                    u,
                    v,
                    mirrored: false,
                });
            }
            funcs.push(Functional::PointPair {
                u,
                v,
                mirrored: true,
            });
        }
    }
    Ok(faithful_combination(g, &space.basis, &funcs))
}

pub fn perp_assignment(directions: &[Vec2]) -> DirectionAssignment {
    directions.iter().map(Vec2::perp).collect()
}

/// `(d, perp(d))` is special when `d` has a faithful realization and
/// `perp(d)` leaves only the vertical translation.
pub fn is_special_pair(g: &ColoredGraph, directions: &[Vec2]) -> Result<bool> {
    let primal = classify(g, directions)?;
    if !primal.faithful_exists {
        return Ok(false);
    }
    let dual = realization_space(g, &perp_assignment(directions))?;
    Ok(dual.dimension() == 1)
}

/// Independent nonzero integer directions on every edge.
pub fn random_directions(g: &ColoredGraph, seed: u64) -> DirectionAssignment {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..g.edge_count())
        .map(|_| sample_nonzero(&mut rng))
        .collect()
}

/// Directions under which a two-freedom-plus-one member collapses: the
/// realization space is exactly the vertical translation. Built from the
/// tree-and-map split when one exists (tree edges share one direction off
/// both axes, map edges point along the horizontal axis, pulled back
/// through the recoloring switch), otherwise sampled at random; either way
/// the collapse is verified exactly and failures resample.
pub fn collapse_directions(g: &ColoredGraph, seed: u64) -> Result<DirectionAssignment> {
    if !sparsity::is_member(g, Family::Reflection22)? {
        return Err(Error::NotMember {
            family: Family::Reflection22,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let split = decomposition::decompose_tree_map(g).ok();
    for _ in 0..MAX_ATTEMPTS {
        let directions = match &split {
            Some(dec) => tree_map_directions(g, dec, Vec2::from_ints(1, 0), &mut rng),
            None => (0..g.edge_count())
                .map(|_| sample_nonzero(&mut rng))
                .collect(),
        };
        let class = classify(g, &directions)?;
        if class.collapsed_only && class.dimension == 1 {
            return Ok(directions);
        }
    }
    Err(Error::RetriesExhausted {
        attempts: MAX_ATTEMPTS,
    })
}

/// Tree edges get one random direction with both coordinates nonzero, map
/// edges get `axis`, all in the recolored frame; each edge is then pulled
/// back through the mirror at its tail's switch color so the assignment
/// applies to the original coloring.
fn tree_map_directions(
    g: &ColoredGraph,
    dec: &TreeMapDecomposition,
    axis: Vec2,
    rng: &mut ChaCha8Rng,
) -> DirectionAssignment {
    let sigma = g
        .tree_potentials(dec.tree)
        .expect("decomposition tree was validated");
    let v = sample_off_axes(rng);
    (0..g.edge_count())
        .map(|e| {
            let base = if dec.tree.contains(e) { &v } else { &axis };
            base.apply(sigma[g.edge(e).tail])
        })
        .collect()
}

/// Special directions for a standalone circuit: the designated cycle edge's
/// direction is induced by a faithful realization of the rest, and the
/// whole assignment is verified to form a special pair. Returns the
/// designated edge with the assignment.
pub fn circuit_special_directions(
    g: &ColoredGraph,
    seed: u64,
) -> Result<(usize, DirectionAssignment)> {
    if !sparsity::is_ross_circuit(g)? {
        return Err(Error::NotRossCircuit);
    }
    let special = decomposition::special_edge(g, g.all_edges()?)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MAX_ATTEMPTS {
        if let Some((directions, _)) = circuit_attempt(g, special, attempt, &mut rng)? {
            return Ok((special, directions));
        }
    }
    Err(Error::RetriesExhausted {
        attempts: MAX_ATTEMPTS,
    })
}

/// One sampling round for a circuit: assign the non-designated edges near
/// the construction, demand a two-dimensional realization space with a
/// faithful witness moving the designated edge, induce that edge's
/// direction perpendicular to its witness vector, and accept only if the
/// completed assignment is a special pair.
fn circuit_attempt(
    g: &ColoredGraph,
    special: usize,
    attempt: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<(DirectionAssignment, Vec<Vec2>)>> {
    let all = g.all_edges()?;
    let rest = all.without(special);
    let mut directions = circuit_base_directions(g, special, attempt, rng)?;
    let system = build_subsystem(g, rest, &directions)?;
    let basis = system.nullspace();
    if basis.len() != 2 {
        return Ok(None);
    }
    let mut funcs: Vec<Functional> = rest.iter().map(Functional::Edge).collect();
    funcs.push(Functional::Edge(special));
    let Some(witness) = faithful_combination(g, &basis, &funcs) else {
        return Ok(None);
    };
    directions[special] = edge_delta(g, special, &witness).perp();
    if !is_special_pair(g, &directions)? {
        return Ok(None);
    }
    Ok(Some((directions, witness)))
}

/// Construction frame for a circuit, minus its designated edge: tree edges
/// share a random off-axes direction, map edges are vertical, everything is
/// pulled back through the recoloring switch. From the second attempt on,
/// every coordinate is jittered by a shrinking rational step to leave the
/// degenerate locus of the pure construction.
fn circuit_base_directions(
    g: &ColoredGraph,
    special: usize,
    attempt: usize,
    rng: &mut ChaCha8Rng,
) -> Result<DirectionAssignment> {
    let dec = decomposition::decompose_tree_map(g)?;
    let sigma = g
        .tree_potentials(dec.tree)
        .expect("decomposition tree was validated");
    let v = sample_off_axes(rng);
    let vertical = Vec2::from_ints(0, 1);
    let jitter = if attempt == 0 {
        None
    } else {
        Some(Q::new(Z::one(), num::pow(Z::from(2), 10 + 10 * attempt)))
    };
    let mut out = Vec::with_capacity(g.edge_count());
    for e in 0..g.edge_count() {
        if e == special {
            out.push(Vec2::zero());
            continue;
        }
        let mut base = if dec.tree.contains(e) {
            v.clone()
        } else {
            vertical.clone()
        };
        if let Some(scale) = &jitter {
            let dx = q_int(rng.gen_range(-1024..=1024)) * scale;
            let dy = q_int(rng.gen_range(-1024..=1024)) * scale;
            base = Vec2::new(base.x + dx, base.y + dy);
        }
        out.push(base.apply(sigma[g.edge(e).tail]));
    }
    Ok(out)
}

/// A special pair for a one-freedom member, with a faithful realization of
/// the primal side.
#[derive(Clone, Debug)]
pub struct SpecialPair {
    pub directions: DirectionAssignment,
    pub realization: Vec<Vec2>,
    /// Normalized basis: the greedy basis with each circuit's designated
    /// edge swapped out for the edge that closed it.
    pub basis: EdgeSubset,
    /// Designated edge of each circuit, ascending by closing edge.
    pub special_edges: Vec<usize>,
}

/// Construct and verify a special pair of direction assignments for a
/// one-freedom member.
///
/// The basis edges are sampled (circuit interiors near their construction
/// frame, the rest at random) and accepted only after every staged check
/// passes exactly: each circuit alone must already form a special pair with
/// its induced direction, the contracted quotient must collapse under the
/// perpendicular assignment, the basis rows must be independent with a
/// faithful witness, and finally the full pair must classify as special.
pub fn special_pair(g: &ColoredGraph, seed: u64) -> Result<SpecialPair> {
    if !sparsity::is_member(g, Family::ReflectionLaman)? {
        return Err(Error::NotMember {
            family: Family::ReflectionLaman,
        });
    }
    let dec = decomposition::find_ross_circuits(g)?;
    let specials: Vec<usize> = dec
        .circuits
        .iter()
        .map(|&c| decomposition::special_edge(g, c))
        .collect::<Result<_>>()?;
    let mut basis = dec.basis;
    for (k, &extra) in dec.extras.iter().enumerate() {
        basis = basis.with(extra).without(specials[k]);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MAX_ATTEMPTS {
        if let Some(pair) = special_pair_attempt(g, &dec, &specials, basis, attempt, &mut rng)? {
            return Ok(pair);
        }
    }
    Err(Error::RetriesExhausted {
        attempts: MAX_ATTEMPTS,
    })
}

fn special_pair_attempt(
    g: &ColoredGraph,
    dec: &CircuitDecomposition,
    specials: &[usize],
    basis: EdgeSubset,
    attempt: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Option<SpecialPair>> {
    let mut directions = vec![Vec2::zero(); g.edge_count()];

    // Each circuit must stand alone as a special pair around its designated
    // edge; the designated direction is induced there and carried over.
    for (k, &circuit) in dec.circuits.iter().enumerate() {
        let (sub, _, edge_ids) = g.edge_induced(circuit);
        let local_special = edge_ids
            .iter()
            .position(|&e| e == specials[k])
            .expect("designated edge lies in its circuit");
        let Some((local, _)) = circuit_attempt(&sub, local_special, attempt, rng)? else {
            return Ok(None);
        };
        for (i, &global) in edge_ids.iter().enumerate() {
            directions[global] = local[i].clone();
        }
    }

    for e in basis.iter() {
        if directions[e].is_zero() {
            directions[e] = sample_nonzero(rng);
        }
    }

    // The contracted quotient must collapse under the perpendicular
    // directions, with fresh random directions on the stand-in loops.
    let mut delta: Vec<Vec2> = dec
        .surviving
        .iter()
        .map(|&orig| directions[orig].perp())
        .collect();
    for _ in dec.surviving.len()..dec.reduced.edge_count() {
        delta.push(sample_nonzero(rng));
    }
    if realization_space(&dec.reduced, &delta)?.dimension() != 1 {
        return Ok(None);
    }

    // The normalized basis rows must be independent and solvable without
    // collapsing any basis edge.
    let system = build_subsystem(g, basis, &directions)?;
    if system.rank() != basis.len() {
        return Ok(None);
    }
    let funcs: Vec<Functional> = basis.iter().map(Functional::Edge).collect();
    if faithful_combination(g, &system.nullspace(), &funcs).is_none() {
        return Ok(None);
    }

    let class = classify(g, &directions)?;
    let Some(realization) = class.witness else {
        return Ok(None);
    };
    if realization_space(g, &perp_assignment(&directions))?.dimension() != 1 {
        return Ok(None);
    }
    Ok(Some(SpecialPair {
        directions,
        realization,
        basis,
        special_edges: specials.to_vec(),
    }))
}

/// Edge vector of `e` at a placement, taken in the double cover.
pub fn edge_delta(g: &ColoredGraph, e: usize, points: &[Vec2]) -> Vec2 {
    let edge = g.edge(e);
    points[edge.head].apply(edge.gain).sub(&points[edge.tail])
}

/// Linear quantity that must stay nonzero at a faithful placement.
enum Functional {
    Edge(usize),
    PointPair { u: usize, v: usize, mirrored: bool },
}

impl Functional {
    fn eval(&self, g: &ColoredGraph, points: &[Vec2]) -> Vec2 {
        match *self {
            Functional::Edge(e) => edge_delta(g, e, points),
            Functional::PointPair { u, v, mirrored } => {
                let other = if mirrored {
                    points[v].mirror()
                } else {
                    points[v].clone()
                };
                points[u].sub(&other)
            }
        }
    }
}

fn vector_points(v: &[Q]) -> Vec<Vec2> {
    v.chunks(2)
        .map(|c| Vec2::new(c[0].clone(), c[1].clone()))
        .collect()
}

fn vanishes_identically(g: &ColoredGraph, f: &Functional, basis: &[Vec<Q>]) -> bool {
    basis.iter().all(|b| f.eval(g, &vector_points(b)).is_zero())
}

/// Point in the span of `basis` at which every functional is nonzero, found
/// by evaluating the combination `sum t^k b_k` at successive integers `t`.
/// Each functional component is a polynomial of degree below the dimension,
/// so `len(funcs) * dim + 1` values always contain a good one; `None` means
/// some functional vanishes on the whole span and no such point exists.
fn faithful_combination(
    g: &ColoredGraph,
    basis: &[Vec<Q>],
    funcs: &[Functional],
) -> Option<Vec<Vec2>> {
    for f in funcs {
        if vanishes_identically(g, f, basis) {
            return None;
        }
    }
    if basis.is_empty() {
        return if funcs.is_empty() {
            Some(Vec::new())
        } else {
            None
        };
    }
    let attempts = funcs.len() * basis.len() + 1;
    let mut t = q_int(WITNESS_BASE);
    for _ in 0..attempts {
        let mut combo = vec![Q::zero(); basis[0].len()];
        let mut power = Q::one();
        for b in basis {
            for (acc, entry) in combo.iter_mut().zip(b) {
                *acc += entry * &power;
            }
            power *= &t;
        }
        let points = vector_points(&combo);
        if funcs.iter().all(|f| !f.eval(g, &points).is_zero()) {
            return Some(points);
        }
        t += q_int(1);
    }
    unreachable!("witness search exhausted more values than its root bound")
}

fn sample_nonzero(rng: &mut ChaCha8Rng) -> Vec2 {
    loop {
        let v = Vec2::from_ints(
            rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND),
            rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND),
        );
        if !v.is_zero() {
            return v;
        }
    }
}

fn sample_off_axes(rng: &mut ChaCha8Rng) -> Vec2 {
    loop {
        let v = Vec2::from_ints(
            rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND),
            rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND),
        );
        if !v.x.is_zero() && !v.y.is_zero() {
            return v;
        }
    }
}
