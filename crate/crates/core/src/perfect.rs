//! Perfectness (equitable partition) checks and parameter matrices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::torus::{Cell, ColoringError, PeriodicColoring};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("matrix must have k >= 1 rows")]
    Empty,
    #[error("declared k = {declared} but {rows} rows")]
    RowCount { declared: usize, rows: usize },
    #[error("row {row} has {len} entries, expected {k}")]
    RowLength { row: usize, len: usize, k: usize },
    #[error("row {row} sums to {sum}, expected 2n = {expected}")]
    RowSum { row: usize, sum: usize, expected: usize },
    #[error("malformed matrix JSON: {0}")]
    Json(String),
}

/// The `k x k` matrix `(a_ij)`: a cell of color `i` has `a_ij` neighbors of
/// color `j`. Indices here are 0-based; colors are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ParameterMatrix {
    pub n: usize,
    pub k: usize,
    pub rows: Vec<Vec<usize>>,
}

impl ParameterMatrix {
    /// Checks shape and that every row sums to `2n`.
    pub fn new(n: usize, rows: Vec<Vec<usize>>) -> Result<Self, MatrixError> {
        let k = rows.len();
        if k == 0 {
            return Err(MatrixError::Empty);
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != k {
                return Err(MatrixError::RowLength { row, len: r.len(), k });
            }
            let sum: usize = r.iter().sum();
            if sum != 2 * n {
                return Err(MatrixError::RowSum { row, sum, expected: 2 * n });
            }
        }
        Ok(Self { n, k, rows })
    }

    pub fn from_json_str(s: &str) -> Result<Self, MatrixError> {
        let m: ParameterMatrix = serde_json::from_str(s).map_err(|e| MatrixError::Json(e.to_string()))?;
        if m.rows.len() != m.k {
            return Err(MatrixError::RowCount { declared: m.k, rows: m.rows.len() });
        }
        Self::new(m.n, m.rows)
    }

    /// Entry for 1-based colors `i`, `j`.
    pub fn get(&self, i: usize, j: usize) -> usize {
        self.rows[i - 1][j - 1]
    }

    /// The matrix with colors renamed: new color `p + 1` is old color
    /// `order[p]`.
    pub fn permuted(&self, order: &[usize]) -> ParameterMatrix {
        let rows = order
            .iter()
            .map(|&i| order.iter().map(|&j| self.get(i, j)).collect())
            .collect();
        ParameterMatrix { n: self.n, k: self.k, rows }
    }

    /// Transpose along the anti-diagonal: the matrix of the color-reversed
    /// coloring.
    pub fn reversed(&self) -> ParameterMatrix {
        let order: Vec<usize> = (1..=self.k).rev().collect();
        self.permuted(&order)
    }

    pub fn is_tridiagonal(&self) -> bool {
        (0..self.k).all(|i| (0..self.k).all(|j| i.abs_diff(j) <= 1 || self.rows[i][j] == 0))
    }

    /// Relative class sizes forced by `|C_i| a_ij = |C_j| a_ji`, scaled to
    /// the smallest positive integer vector. `None` if the color graph is
    /// disconnected or the double-counting identities are inconsistent.
    pub fn class_size_ratios(&self) -> Option<Vec<u64>> {
        // Rationals as (num, den), propagated along the color graph from color 1.
        let k = self.k;
        let mut ratio: Vec<Option<(u64, u64)>> = vec![None; k];
        ratio[0] = Some((1, 1));
        let mut stack = vec![0];
        while let Some(i) = stack.pop() {
            let (num, den) = ratio[i].unwrap();
            for j in 0..k {
                if i == j || self.rows[i][j] == 0 {
                    continue;
                }
                if self.rows[j][i] == 0 {
                    return None;
                }
                let (a, b) = reduce(num * self.rows[i][j] as u64, den * self.rows[j][i] as u64);
                match ratio[j] {
                    None => {
                        ratio[j] = Some((a, b));
                        stack.push(j);
                    }
                    Some(r) if r != (a, b) => return None,
                    Some(_) => {}
                }
            }
        }
        let ratio: Vec<(u64, u64)> = ratio.into_iter().collect::<Option<_>>()?;
        let lcm = ratio.iter().fold(1u64, |acc, &(_, d)| num_integer::lcm(acc, d));
        let scaled: Vec<u64> = ratio.iter().map(|&(a, d)| a * (lcm / d)).collect();
        let g = scaled.iter().fold(0u64, |acc, &x| num_integer::gcd(acc, x));
        Some(scaled.into_iter().map(|x| x / g).collect())
    }

    /// Exact class sizes on a torus of `cells` cells, if they are integral.
    pub fn class_sizes_on(&self, cells: usize) -> Option<Vec<usize>> {
        let w = self.class_size_ratios()?;
        let total: u64 = w.iter().sum();
        if !(cells as u64).is_multiple_of(total) {
            return None;
        }
        let scale = cells as u64 / total;
        Some(w.into_iter().map(|x| (x * scale) as usize).collect())
    }
}

fn reduce(a: u64, b: u64) -> (u64, u64) {
    let g = num_integer::gcd(a, b);
    (a / g, b / g)
}

/// Two same-colored cells with different neighbor color counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NotPerfectWitness {
    pub cell_a: Cell,
    pub cell_b: Cell,
    pub color: usize,
    pub counts_a: Vec<usize>,
    pub counts_b: Vec<usize>,
}

/// Entry `j - 1` counts the neighbor slots of `cell` colored `j`; the
/// entries sum to `2n`.
pub fn neighbor_color_counts(
    coloring: &PeriodicColoring,
    cell: &Cell,
) -> Result<Vec<usize>, ColoringError> {
    Ok(counts_at(coloring, coloring.torus().index(cell)?))
}

/// [`neighbor_color_counts`] by row-major index.
pub fn counts_at(coloring: &PeriodicColoring, index: usize) -> Vec<usize> {
    let mut counts = vec![0; coloring.k()];
    for (_, j) in coloring.torus().neighbors(index) {
        counts[coloring.color_at(j) - 1] += 1;
    }
    counts
}

/// Parameter matrix, or the first (row-major) pair of cells that breaks
/// perfectness.
pub fn compute_parameter_matrix(
    coloring: &PeriodicColoring,
) -> Result<ParameterMatrix, NotPerfectWitness> {
    let k = coloring.k();
    let mut rows: Vec<Option<(usize, Vec<usize>)>> = vec![None; k];
    for index in 0..coloring.len() {
        let color = coloring.color_at(index);
        let counts = counts_at(coloring, index);
        match &rows[color - 1] {
            None => rows[color - 1] = Some((index, counts)),
            Some((first, seen)) if *seen != counts => {
                let torus = coloring.torus();
                return Err(NotPerfectWitness {
                    cell_a: torus.cell(*first),
                    cell_b: torus.cell(index),
                    color,
                    counts_a: seen.clone(),
                    counts_b: counts,
                });
            }
            Some(_) => {}
        }
    }
    // Every color occurs, so every row was filled.
    let rows = rows.into_iter().map(|r| r.expect("color occurs").1).collect();
    Ok(ParameterMatrix { n: coloring.n(), k, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(pattern: &[usize]) -> PeriodicColoring {
        let k = *pattern.iter().max().unwrap();
        PeriodicColoring::new(vec![pattern.len()], k, pattern.to_vec()).unwrap()
    }

    #[test]
    fn counts_on_short_cycles() {
        let at0 = Cell::new(vec![0]);
        assert_eq!(neighbor_color_counts(&cycle(&[1, 2]), &at0).unwrap(), vec![0, 2]);
        assert_eq!(neighbor_color_counts(&cycle(&[1, 1, 2]), &at0).unwrap(), vec![1, 1]);
        let mono = PeriodicColoring::new(vec![3, 1, 2], 1, vec![1; 6]).unwrap();
        assert_eq!(counts_at(&mono, 4), vec![6]);
    }

    #[test]
    fn matrix_of_reflective_cycle() {
        let m = compute_parameter_matrix(&cycle(&[1, 2, 3, 2])).unwrap();
        assert_eq!(m.rows, vec![vec![0, 2, 0], vec![1, 0, 1], vec![0, 2, 0]]);
        assert!(m.is_tridiagonal());
    }

    #[test]
    fn diagonal_stripes_matrix() {
        let pattern = [1, 2, 3, 2];
        let c = PeriodicColoring::from_fn(vec![4, 4], |x| pattern[(x[0] + x[1]) % 4]).unwrap();
        let m = compute_parameter_matrix(&c).unwrap();
        assert_eq!(m.rows, vec![vec![0, 4, 0], vec![2, 0, 2], vec![0, 4, 0]]);
    }

    #[test]
    fn perturbed_checkerboard_is_not_perfect() {
        let mut cells: Vec<usize> = (0..16).map(|i| 1 + (i / 4 + i % 4) % 2).collect();
        cells[5] = 2;
        let c = PeriodicColoring::new(vec![4, 4], 2, cells).unwrap();
        let w = compute_parameter_matrix(&c).unwrap_err();
        assert_eq!(w.color, 2);
        assert_eq!(w.cell_a, Cell::new(vec![0, 1]));
        assert_eq!(w.cell_b, Cell::new(vec![0, 3]));
        assert_eq!(w.counts_a, vec![3, 1]);
        assert_eq!(w.counts_b, vec![4, 0]);
        assert_ne!(w.counts_a, w.counts_b);
    }

    #[test]
    fn class_sizes_from_matrix() {
        let m = ParameterMatrix::new(2, vec![vec![0, 4, 0, 0, 0], vec![1, 0, 3, 0, 0], vec![0, 2, 0, 2, 0], vec![0, 0, 3, 0, 1], vec![0, 0, 0, 4, 0]]).unwrap();
        assert_eq!(m.class_size_ratios(), Some(vec![1, 4, 6, 4, 1]));
        assert_eq!(m.class_sizes_on(16), Some(vec![1, 4, 6, 4, 1]));
        assert_eq!(m.class_sizes_on(8), None);

        let asym = ParameterMatrix::new(1, vec![vec![0, 2], vec![0, 2]]).unwrap();
        assert_eq!(asym.class_size_ratios(), None);
    }

    #[test]
    fn matrix_validation() {
        assert_eq!(
            ParameterMatrix::new(1, vec![vec![1, 0], vec![1, 1]]),
            Err(MatrixError::RowSum { row: 0, sum: 1, expected: 2 })
        );
        assert!(ParameterMatrix::from_json_str(r#"{"n":1,"k":2,"rows":[[1,1],[2,0]]}"#).is_ok());
        assert!(matches!(
            ParameterMatrix::from_json_str(r#"{"n":1,"k":3,"rows":[[1,1],[2,0]]}"#),
            Err(MatrixError::RowCount { .. })
        ));
    }

    #[test]
    fn permute_and_reverse() {
        let m = ParameterMatrix::new(1, vec![vec![1, 1, 0], vec![1, 0, 1], vec![0, 2, 0]]).unwrap();
        assert_eq!(m.reversed().rows, vec![vec![0, 2, 0], vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(m.permuted(&[1, 2, 3]), m);
    }
}
