//! Exact rational linear algebra.
//!
//! Everything downstream depends on ranks and kernels being exact, so
//! matrices hold arbitrary-precision rationals. Rank runs fraction-free
//! (integerize rows, then Bareiss elimination, whose divisions are exact);
//! kernels come from rational row reduction and every returned basis vector
//! is checked against the original matrix.

use num::{BigInt, BigRational, Integer, One, Zero};

use crate::graph::Color;

pub type Z = BigInt;
pub type Q = BigRational;

pub fn q_int(value: i64) -> Q {
    Q::from_integer(Z::from(value))
}

pub fn q_ratio(numer: i64, denom: i64) -> Q {
    assert!(denom != 0, "zero denominator");
    Q::new(Z::from(numer), Z::from(denom))
}

/// `numer/denom` in lowest terms with a positive denominator.
pub fn q_string(value: &Q) -> String {
    format!("{}/{}", value.numer(), value.denom())
}

/// A planar vector with exact rational coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Vec2 {
    pub x: Q,
    pub y: Q,
}

impl Vec2 {
    pub fn new(x: Q, y: Q) -> Vec2 {
        Vec2 { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Vec2 {
        Vec2::new(q_int(x), q_int(y))
    }

    pub fn zero() -> Vec2 {
        Vec2::from_ints(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn add(&self, other: &Vec2) -> Vec2 {
        Vec2::new(&self.x + &other.x, &self.y + &other.y)
    }

    pub fn sub(&self, other: &Vec2) -> Vec2 {
        Vec2::new(&self.x - &other.x, &self.y - &other.y)
    }

    pub fn scale(&self, factor: &Q) -> Vec2 {
        Vec2::new(&self.x * factor, &self.y * factor)
    }

    pub fn dot(&self, other: &Vec2) -> Q {
        &self.x * &other.x + &self.y * &other.y
    }

    /// Counterclockwise quarter turn.
    pub fn perp(&self) -> Vec2 {
        Vec2::new(-self.y.clone(), self.x.clone())
    }

    /// Reflection across the vertical axis.
    pub fn mirror(&self) -> Vec2 {
        Vec2::new(-self.x.clone(), self.y.clone())
    }

    /// Apply the mirror when the color is nontrivial.
    pub fn apply(&self, color: Color) -> Vec2 {
        if color.is_identity() {
            self.clone()
        } else {
            self.mirror()
        }
    }

    pub fn cross(&self, other: &Vec2) -> Q {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn is_parallel_to(&self, other: &Vec2) -> bool {
        self.cross(other).is_zero()
    }
}

/// Dense matrix of rationals with a fixed column count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    cols: usize,
    rows: Vec<Vec<Q>>,
}

impl QMatrix {
    pub fn new(cols: usize) -> QMatrix {
        QMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Q>>) -> QMatrix {
        assert!(rows.iter().all(|r| r.len() == cols));
        QMatrix { cols, rows }
    }

    pub fn push_row(&mut self, row: Vec<Q>) {
        assert_eq!(row.len(), self.cols);
        self.rows.push(row);
    }

    pub fn col_count(&self) -> usize {
        self.cols
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Q>] {
        &self.rows
    }

    pub fn mul_vec(&self, v: &[Q]) -> Vec<Q> {
        assert_eq!(v.len(), self.cols);
        self.rows
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Rank by Bareiss elimination on the integerized rows. Every division
    /// in the update is exact, so no rational reduction happens in the loop.
    pub fn rank(&self) -> usize {
        let mut m: Vec<Vec<Z>> = self.rows.iter().map(|row| integerize(row)).collect();
        let row_count = m.len();
        let mut rank = 0usize;
        let mut prev = Z::one();
        for col in 0..self.cols {
            let Some(pivot) = (rank..row_count).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            for r in (rank + 1)..row_count {
                for c in 0..self.cols {
                    if c == col {
                        continue;
                    }
                    let num = &m[rank][col] * &m[r][c] - &m[r][col] * &m[rank][c];
                    m[r][c] = num / &prev;
                }
                m[r][col] = Z::zero();
            }
            prev = m[rank][col].clone();
            rank += 1;
            if rank == row_count {
                break;
            }
        }
        rank
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }

    /// Basis of the right kernel, one vector per free column of the reduced
    /// row echelon form. With no rows the kernel is everything and the
    /// standard basis is returned.
    pub fn nullspace(&self) -> Vec<Vec<Q>> {
        let mut m = self.rows.clone();
        let row_count = m.len();
        let mut pivot_cols = Vec::new();
        let mut rank = 0usize;
        for col in 0..self.cols {
            let Some(pivot) = (rank..row_count).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, pivot);
            let inv = m[rank][col].recip();
            for entry in &mut m[rank][col..] {
                *entry *= &inv;
            }
            let pivot_row = m[rank].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r == rank || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (entry, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *entry -= &factor * p;
                }
            }
            pivot_cols.push(col);
            rank += 1;
            if rank == row_count {
                break;
            }
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![Q::zero(); self.cols];
            v[free] = Q::one();
            for (r, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -m[r][free].clone();
            }
            debug_assert!(
                self.mul_vec(&v).iter().all(|entry| entry.is_zero()),
                "kernel vector fails to annihilate the matrix"
            );
            basis.push(v);
        }
        basis
    }
}

/// Scale a rational row by the lcm of its denominators.
fn integerize(row: &[Q]) -> Vec<Z> {
    let mut lcm = Z::one();
    for q in row {
        lcm = lcm.lcm(q.denom());
    }
    row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
}
