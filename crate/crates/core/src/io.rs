//! Plain-text formats for graphs, direction assignments, and placements.
//!
//! A graph file starts with a header line `n <vertex count>` followed by
//! one `tail head gain` line per edge, gains 0 or 1. `#` starts a comment
//! and blank lines are skipped; emitted files are canonical, so parsing an
//! emitted graph reproduces it byte for byte.
//!
//! Direction and point files carry exact rationals as `numerator/denominator`
//! in lowest terms; bare integers are accepted on input.

use std::str::FromStr;

use num::{BigInt, Zero};

use crate::error::{Error, Result};
use crate::graph::{Color, ColoredGraph, Edge};
use crate::linalg::{q_string, Vec2, Q};

fn parse_error(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Lines with comments stripped, paired with 1-based line numbers.
fn content_lines(input: &str) -> impl Iterator<Item = (usize, &str)> {
    input
        .lines()
        .enumerate()
        .map(|(i, raw)| {
            let text = raw.split('#').next().unwrap_or("").trim();
            (i + 1, text)
        })
        .filter(|(_, text)| !text.is_empty())
}

pub fn parse_graph(input: &str) -> Result<ColoredGraph> {
    let mut lines = content_lines(input);
    let (line, header) = lines
        .next()
        .ok_or_else(|| parse_error(1, "missing header line `n <count>`"))?;
    let vertices = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", count] => count
            .parse::<usize>()
            .map_err(|e| parse_error(line, format!("bad vertex count `{count}`: {e}")))?,
        _ => {
            return Err(parse_error(
                line,
                format!("expected `n <count>`, got `{header}`"),
            ))
        }
    };
    let mut edges = Vec::new();
    for (line, text) in lines {
        let fields: Vec<&str> = text.split_whitespace().collect();
        let [tail, head, gain] = fields[..] else {
            return Err(parse_error(
                line,
                format!("expected `tail head gain`, got `{text}`"),
            ));
        };
        let tail = tail
            .parse::<usize>()
            .map_err(|e| parse_error(line, format!("bad tail `{tail}`: {e}")))?;
        let head = head
            .parse::<usize>()
            .map_err(|e| parse_error(line, format!("bad head `{head}`: {e}")))?;
        let gain = gain
            .parse::<u64>()
            .ok()
            .and_then(Color::from_bit)
            .ok_or_else(|| parse_error(line, format!("gain must be 0 or 1, got `{gain}`")))?;
        edges.push(Edge::new(tail, head, gain));
    }
    ColoredGraph::new(vertices, edges)
}

/// Canonical text form; [`parse_graph`] inverts it exactly.
pub fn emit_graph(g: &ColoredGraph) -> String {
    let mut out = format!("n {}\n", g.vertex_count());
    for e in g.edges() {
        out.push_str(&format!("{} {} {}\n", e.tail, e.head, e.gain));
    }
    out
}

fn parse_rational(field: &str, line: usize) -> Result<Q> {
    let (numer, denom) = match field.split_once('/') {
        Some((n, d)) => (n, d),
        None => (field, "1"),
    };
    let numer = BigInt::from_str(numer)
        .map_err(|e| parse_error(line, format!("bad numerator `{numer}`: {e}")))?;
    let denom = BigInt::from_str(denom)
        .map_err(|e| parse_error(line, format!("bad denominator `{denom}`: {e}")))?;
    if denom.is_zero() {
        return Err(parse_error(line, "zero denominator"));
    }
    Ok(Q::new(numer, denom))
}

/// Lines of `<index> <x> <y>` with rational coordinates, indexed 0-based
/// against `count` slots; every slot must be covered exactly once.
fn parse_indexed_vectors(input: &str, count: usize, what: &str) -> Result<Vec<Vec2>> {
    let mut out: Vec<Option<Vec2>> = vec![None; count];
    for (line, text) in content_lines(input) {
        let fields: Vec<&str> = text.split_whitespace().collect();
        let [index, x, y] = fields[..] else {
            return Err(parse_error(
                line,
                format!("expected `<{what}> <x> <y>`, got `{text}`"),
            ));
        };
        let index = index
            .parse::<usize>()
            .map_err(|e| parse_error(line, format!("bad {what} `{index}`: {e}")))?;
        if index >= count {
            return Err(parse_error(
                line,
                format!("{what} {index} out of range, expected below {count}"),
            ));
        }
        if out[index].is_some() {
            return Err(parse_error(line, format!("{what} {index} given twice")));
        }
        out[index] = Some(Vec2::new(
            parse_rational(x, line)?,
            parse_rational(y, line)?,
        ));
    }
    out.into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| parse_error(1, format!("{what} {i} missing"))))
        .collect()
}

pub fn parse_directions(input: &str, edge_count: usize) -> Result<Vec<Vec2>> {
    parse_indexed_vectors(input, edge_count, "edge")
}

pub fn parse_points(input: &str, vertex_count: usize) -> Result<Vec<Vec2>> {
    parse_indexed_vectors(input, vertex_count, "vertex")
}

fn emit_indexed_vectors(vectors: &[Vec2]) -> String {
    let mut out = String::new();
    for (i, v) in vectors.iter().enumerate() {
        out.push_str(&format!("{} {} {}\n", i, q_string(&v.x), q_string(&v.y)));
    }
    out
}

pub fn emit_directions(directions: &[Vec2]) -> String {
    emit_indexed_vectors(directions)
}

pub fn emit_points(points: &[Vec2]) -> String {
    emit_indexed_vectors(points)
}
