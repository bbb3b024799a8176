//! Periodic colorings of `Z^n` realized on rectangular tori.
//!
//! A coloring with periods `(p_1, ..., p_n)` is stored as a dense row-major
//! array over the fundamental box, last coordinate fastest. Adjacency is the
//! grid adjacency reduced modulo the periods and is treated as a multigraph:
//! when a period is 1 or 2 the two directions along that axis can land on the
//! same cell (or on the cell itself), and both slots are kept. Every cell
//! therefore has exactly `2n` neighbor slots, as in `Z^n`.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("declared dimension {declared} but {periods} periods given")]
    DimensionMismatch { declared: usize, periods: usize },
    #[error("period along axis {axis} is zero")]
    ZeroPeriod { axis: usize },
    #[error("number of colors must be at least 1")]
    ZeroColors,
    #[error("expected {expected} cells, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("color {color} at index {index} is outside 1..={k}")]
    ColorOutOfRange { index: usize, color: usize, k: usize },
    #[error("color {color} never occurs")]
    MissingColor { color: usize },
    #[error("cell {0:?} is not a valid cell of this torus")]
    InvalidCell(Vec<usize>),
    #[error("source set is empty")]
    EmptySource,
    #[error("malformed coloring JSON: {0}")]
    Json(String),
}

/// Sign of a unit direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// A signed unit vector `±e^axis`. `axis` is 0-based; it is printed 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction {
    pub axis: usize,
    pub sign: Sign,
}

impl Direction {
    pub fn new(axis: usize, sign: Sign) -> Self {
        Self { axis, sign }
    }

    pub fn plus(axis: usize) -> Self {
        Self::new(axis, Sign::Plus)
    }

    pub fn minus(axis: usize) -> Self {
        Self::new(axis, Sign::Minus)
    }

    /// All `2n` directions in slot order: `+e1, -e1, +e2, -e2, ...`.
    pub fn all(n: usize) -> impl Iterator<Item = Direction> {
        (0..n).flat_map(|axis| [Direction::plus(axis), Direction::minus(axis)])
    }

    /// Position of this direction in [`Direction::all`].
    pub fn slot(self) -> usize {
        2 * self.axis + usize::from(self.sign == Sign::Minus)
    }

    pub fn from_slot(slot: usize) -> Self {
        let sign = if slot.is_multiple_of(2) { Sign::Plus } else { Sign::Minus };
        Self::new(slot / 2, sign)
    }

    pub fn signum(self) -> i64 {
        match self.sign {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl std::ops::Neg for Direction {
    type Output = Direction;

    fn neg(self) -> Direction {
        let sign = match self.sign {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        };
        Direction::new(self.axis, sign)
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign == Sign::Plus { '+' } else { '-' };
        write!(f, "{s}e{}", self.axis + 1)
    }
}

impl Serialize for Direction {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Representative of a `Z^n` vertex modulo the period lattice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cell(pub Vec<usize>);

impl Cell {
    pub fn new(coords: impl Into<Vec<usize>>) -> Self {
        Cell(coords.into())
    }

    pub fn coords(&self) -> &[usize] {
        &self.0
    }
}

impl From<Vec<usize>> for Cell {
    fn from(v: Vec<usize>) -> Self {
        Cell(v)
    }
}

/// Geometry of a rectangular torus: periods, strides and neighbor lookup.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Torus {
    periods: Vec<usize>,
    strides: Vec<usize>,
    len: usize,
}

impl Torus {
    pub fn new(periods: Vec<usize>) -> Result<Self, ColoringError> {
        if periods.is_empty() {
            return Err(ColoringError::ZeroDimension);
        }
        if let Some(axis) = periods.iter().position(|&p| p == 0) {
            return Err(ColoringError::ZeroPeriod { axis });
        }
        let mut strides = vec![1; periods.len()];
        for axis in (0..periods.len() - 1).rev() {
            strides[axis] = strides[axis + 1] * periods[axis + 1];
        }
        let len = strides[0] * periods[0];
        Ok(Self { periods, strides, len })
    }

    pub fn n(&self) -> usize {
        self.periods.len()
    }

    pub fn periods(&self) -> &[usize] {
        &self.periods
    }

    /// Number of cells in the fundamental box.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when some period is below 3, so wrapped neighbors coincide.
    pub fn has_short_period(&self) -> bool {
        self.periods.iter().any(|&p| p < 3)
    }

    pub fn contains(&self, cell: &Cell) -> bool {
        cell.0.len() == self.n() && cell.0.iter().zip(&self.periods).all(|(&c, &p)| c < p)
    }

    pub fn index(&self, cell: &Cell) -> Result<usize, ColoringError> {
        if !self.contains(cell) {
            return Err(ColoringError::InvalidCell(cell.0.clone()));
        }
        Ok(cell.0.iter().zip(&self.strides).map(|(c, s)| c * s).sum())
    }

    /// Index of an arbitrary lattice point, reduced modulo the periods.
    pub fn index_of_point(&self, point: &[i64]) -> usize {
        point
            .iter()
            .zip(&self.periods)
            .zip(&self.strides)
            .map(|((&x, &p), &s)| x.rem_euclid(p as i64) as usize * s)
            .sum()
    }

    pub fn coord(&self, index: usize, axis: usize) -> usize {
        (index / self.strides[axis]) % self.periods[axis]
    }

    pub fn cell(&self, index: usize) -> Cell {
        Cell((0..self.n()).map(|axis| self.coord(index, axis)).collect())
    }

    /// The cell reached from `index` by one step in `dir`, wrapping.
    pub fn step(&self, index: usize, dir: Direction) -> usize {
        let p = self.periods[dir.axis];
        let s = self.strides[dir.axis];
        let c = self.coord(index, dir.axis);
        let next = match dir.sign {
            Sign::Plus => (c + 1) % p,
            Sign::Minus => (c + p - 1) % p,
        };
        index - c * s + next * s
    }

    /// Neighbor slots in [`Direction::all`] order, with multiplicity.
    pub fn neighbors(&self, index: usize) -> impl Iterator<Item = (Direction, usize)> + '_ {
        Direction::all(self.n()).map(move |d| (d, self.step(index, d)))
    }

    /// Multi-source BFS distance over the torus multigraph.
    pub fn distances(&self, sources: &[usize]) -> Result<Vec<usize>, ColoringError> {
        if sources.is_empty() {
            return Err(ColoringError::EmptySource);
        }
        let mut dist = vec![usize::MAX; self.len];
        let mut queue = VecDeque::with_capacity(self.len);
        for &s in sources {
            if dist[s] != 0 {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for (_, w) in self.neighbors(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }
}

/// A coloring of `Z^n` with a rectangular period, colors `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PeriodicColoring {
    torus: Torus,
    k: usize,
    cells: Vec<usize>,
}

impl PeriodicColoring {
    /// Validates that the array covers the torus, every color lies in
    /// `1..=k`, and every color occurs.
    pub fn new(periods: Vec<usize>, k: usize, cells: Vec<usize>) -> Result<Self, ColoringError> {
        let torus = Torus::new(periods)?;
        if k == 0 {
            return Err(ColoringError::ZeroColors);
        }
        if cells.len() != torus.len() {
            return Err(ColoringError::LengthMismatch { expected: torus.len(), found: cells.len() });
        }
        let mut seen = vec![false; k + 1];
        for (index, &color) in cells.iter().enumerate() {
            if color == 0 || color > k {
                return Err(ColoringError::ColorOutOfRange { index, color, k });
            }
            seen[color] = true;
        }
        if let Some(color) = (1..=k).find(|&c| !seen[c]) {
            return Err(ColoringError::MissingColor { color });
        }
        Ok(Self { torus, k, cells })
    }

    /// Builds a coloring from a function of the cell coordinates; `k` is
    /// taken as the largest color produced.
    pub fn from_fn(
        periods: Vec<usize>,
        mut f: impl FnMut(&[usize]) -> usize,
    ) -> Result<Self, ColoringError> {
        let torus = Torus::new(periods)?;
        let cells: Vec<usize> = (0..torus.len()).map(|i| f(&torus.cell(i).0)).collect();
        let k = cells.iter().copied().max().unwrap_or(0);
        Self::new(torus.periods, k, cells)
    }

    pub fn torus(&self) -> &Torus {
        &self.torus
    }

    pub fn n(&self) -> usize {
        self.torus.n()
    }

    pub fn periods(&self) -> &[usize] {
        self.torus.periods()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Row-major color array.
    pub fn colors(&self) -> &[usize] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn color_at(&self, index: usize) -> usize {
        self.cells[index]
    }

    pub fn color(&self, cell: &Cell) -> Result<usize, ColoringError> {
        Ok(self.cells[self.torus.index(cell)?])
    }

    /// Color of an arbitrary lattice point of `Z^n`.
    pub fn color_of_point(&self, point: &[i64]) -> usize {
        self.cells[self.torus.index_of_point(point)]
    }

    /// Indices of the cells of `color`, in row-major order.
    pub fn class(&self, color: usize) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.cells[i] == color).collect()
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.cells {
            sizes[c - 1] += 1;
        }
        sizes
    }

    pub fn has_short_period(&self) -> bool {
        self.torus.has_short_period()
    }

    /// The `2n` neighbors of `cell`, `+e1, -e1, +e2, ...`, with multiplicity.
    pub fn neighbors(&self, cell: &Cell) -> Result<Vec<Cell>, ColoringError> {
        let index = self.torus.index(cell)?;
        Ok(self.torus.neighbors(index).map(|(_, j)| self.torus.cell(j)).collect())
    }

    /// BFS distance from `source` to every cell, indexed row-major.
    pub fn distance_from_set(&self, source: &[Cell]) -> Result<Vec<usize>, ColoringError> {
        let indices = source
            .iter()
            .map(|c| self.torus.index(c))
            .collect::<Result<Vec<_>, _>>()?;
        self.torus.distances(&indices)
    }

    /// Relabels color `i` as `k + 1 - i`.
    pub fn reverse_colors(&self) -> PeriodicColoring {
        let k = self.k;
        self.relabel(|c| k + 1 - c)
    }

    /// Applies a color bijection. The caller guarantees `f` permutes `1..=k`.
    pub fn relabel(&self, f: impl Fn(usize) -> usize) -> PeriodicColoring {
        PeriodicColoring {
            torus: self.torus.clone(),
            k: self.k,
            cells: self.cells.iter().map(|&c| f(c)).collect(),
        }
    }

    /// Cell `x` receives the old color of `x - offset`.
    pub fn translate(&self, offset: &[i64]) -> PeriodicColoring {
        let n = self.n();
        let mut point = vec![0i64; n];
        let cells = (0..self.len())
            .map(|i| {
                for (axis, p) in point.iter_mut().enumerate() {
                    *p = self.torus.coord(i, axis) as i64 - offset.get(axis).copied().unwrap_or(0);
                }
                self.color_of_point(&point)
            })
            .collect();
        PeriodicColoring { torus: self.torus.clone(), k: self.k, cells }
    }

    pub fn to_json(&self) -> ColoringFile {
        ColoringFile {
            n: self.n(),
            periods: self.periods().to_vec(),
            k: self.k,
            cells: self.cells.clone(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self, ColoringError> {
        let file: ColoringFile =
            serde_json::from_str(s).map_err(|e| ColoringError::Json(e.to_string()))?;
        file.try_into()
    }
}

/// On-disk form: `{"n", "periods", "k", "cells"}`, cells row-major, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColoringFile {
    pub n: usize,
    pub periods: Vec<usize>,
    pub k: usize,
    pub cells: Vec<usize>,
}

impl TryFrom<ColoringFile> for PeriodicColoring {
    type Error = ColoringError;

    fn try_from(file: ColoringFile) -> Result<Self, ColoringError> {
        if file.n == 0 {
            return Err(ColoringError::ZeroDimension);
        }
        if file.n != file.periods.len() {
            return Err(ColoringError::DimensionMismatch {
                declared: file.n,
                periods: file.periods.len(),
            });
        }
        PeriodicColoring::new(file.periods, file.k, file.cells)
    }
}

impl Serialize for PeriodicColoring {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}
