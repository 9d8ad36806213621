//! Smith normal form over the integers and finitely generated abelian groups.

use std::fmt;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{self, ArithError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SnfError {
    #[error("matrix must have at least one row and one column (got {rows}x{cols})")]
    EmptyMatrix { rows: usize, cols: usize },
    #[error("expected {expected} entries for the given shape, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("group {0} has an infinite cyclic summand")]
    Infinite(AbelianGroup),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i128>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i128>) -> Result<Self, SnfError> {
        if rows == 0 || cols == 0 {
            return Err(SnfError::EmptyMatrix { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(SnfError::ShapeMismatch { expected: rows * cols, got: entries.len() });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn from_rows<R: AsRef<[i128]>>(rows: &[R]) -> Result<Self, SnfError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(SnfError::ShapeMismatch { expected: rows.len() * cols, got: row.len() });
            }
            entries.extend_from_slice(row);
        }
        Self::new(rows.len(), cols, entries)
    }

    pub fn diagonal(values: &[i128]) -> Result<Self, SnfError> {
        let n = values.len();
        let mut entries = vec![0; n * n];
        for (i, &v) in values.iter().enumerate() {
            entries[i * n + i] = v;
        }
        Self::new(n, n, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i128 {
        self.entries[r * self.cols + c]
    }

    fn at(&mut self, r: usize, c: usize) -> &mut i128 {
        &mut self.entries[r * self.cols + c]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for c in 0..self.cols {
                self.entries.swap(a * self.cols + c, b * self.cols + c);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for r in 0..self.rows {
                self.entries.swap(r * self.cols + a, r * self.cols + b);
            }
        }
    }

    /// row[dst] -= k * row[src]
    fn row_axpy(&mut self, dst: usize, src: usize, k: i128) -> Result<(), ArithError> {
        for c in 0..self.cols {
            let v = arith::sub(self.get(dst, c), arith::mul(k, self.get(src, c))?)?;
            *self.at(dst, c) = v;
        }
        Ok(())
    }

    /// col[dst] -= k * col[src]
    fn col_axpy(&mut self, dst: usize, src: usize, k: i128) -> Result<(), ArithError> {
        for r in 0..self.rows {
            let v = arith::sub(self.get(r, dst), arith::mul(k, self.get(r, src))?)?;
            *self.at(r, dst) = v;
        }
        Ok(())
    }
}

/// A finitely generated abelian group `Z/d₁ ⊕ … ⊕ Z/dₖ` in invariant-factor form.
///
/// Factors satisfy `d₁ | d₂ | …`, are never 1, and a factor 0 is a copy of Z
/// (zeros sort last, since every integer divides 0).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AbelianGroup {
    factors: Vec<i128>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup::default()
    }

    pub fn cyclic(order: i128) -> Result<Self, SnfError> {
        Self::from_cyclic_orders(&[order])
    }

    /// Normalizes an arbitrary direct sum of cyclic groups `⊕ Z/nᵢ`.
    pub fn from_cyclic_orders(orders: &[i128]) -> Result<Self, SnfError> {
        if orders.is_empty() {
            return Ok(Self::trivial());
        }
        smith_normal_form(&IntMatrix::diagonal(orders)?)
    }

    pub fn factors(&self) -> &[i128] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.iter().filter(|&&d| d == 0).count()
    }

    pub fn is_finite(&self) -> bool {
        self.rank() == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Group order, or `None` for an infinite group.
    pub fn order(&self) -> Option<i128> {
        if !self.is_finite() {
            return None;
        }
        self.factors.iter().try_fold(1i128, |acc, &d| acc.checked_mul(d))
    }

    pub fn direct_sum(&self, other: &AbelianGroup) -> Result<AbelianGroup, SnfError> {
        let orders: Vec<i128> = self.factors.iter().chain(&other.factors).copied().collect();
        Self::from_cyclic_orders(&orders)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("0");
        }
        for (i, d) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            match d {
                0 => f.write_str("Z")?,
                d => write!(f, "Z/{d}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for AbelianGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Cokernel of `m`, read as `m.rows()` relations on `m.cols()` generators.
///
/// Elementary row/column reduction, pivoting on the smallest nonzero entry
/// of the trailing block. Entry growth is checked.
pub fn smith_normal_form(m: &IntMatrix) -> Result<AbelianGroup, SnfError> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut diag = Vec::new();

    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = smallest_nonzero(&a, t) else {
                break;
            };
            a.swap_rows(t, pr);
            a.swap_cols(t, pc);
            let pivot = a.get(t, t);

            let mut dirty = false;
            for r in t + 1..rows {
                let q = a.get(r, t) / pivot;
                a.row_axpy(r, t, q)?;
                dirty |= a.get(r, t) != 0;
            }
            for c in t + 1..cols {
                let q = a.get(t, c) / pivot;
                a.col_axpy(c, t, q)?;
                dirty |= a.get(t, c) != 0;
            }
            if dirty {
                continue;
            }

            // Pivot must divide the whole trailing block.
            let offender = (t + 1..rows)
                .flat_map(|r| (t + 1..cols).map(move |c| (r, c)))
                .find(|&(r, c)| a.get(r, c) % pivot != 0);
            match offender {
                Some((r, _)) => a.row_axpy(t, r, -1)?,
                None => break,
            }
        }
        diag.push(arith::abs(a.get(t, t))?);
    }

    // Generators beyond the number of relations are free.
    diag.extend(std::iter::repeat_n(0, cols.saturating_sub(rows)));

    let mut finite: Vec<i128> = diag.iter().copied().filter(|&d| d > 1).collect();
    finite.sort_unstable();
    let zeros = diag.iter().filter(|&&d| d == 0).count();
    finite.extend(std::iter::repeat_n(0, zeros));
    Ok(AbelianGroup { factors: finite })
}

fn smallest_nonzero(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    (t..a.rows)
        .flat_map(|r| (t..a.cols).map(move |c| (r, c)))
        .filter(|&(r, c)| a.get(r, c) != 0)
        .min_by_key(|&(r, c)| a.get(r, c).unsigned_abs())
}

/// `|Hom(G, Z/2)| = 2^k`, where `k` counts the even invariant factors.
pub fn two_torsion_order(g: &AbelianGroup) -> Result<i128, SnfError> {
    if !g.is_finite() {
        return Err(SnfError::Infinite(g.clone()));
    }
    let even = g.factors.iter().filter(|&&d| d % 2 == 0).count() as u32;
    1i128.checked_shl(even).ok_or(SnfError::Arith(ArithError::Overflow("two-torsion order")))
}
