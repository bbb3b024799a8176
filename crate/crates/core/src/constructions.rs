//! Coloring families: the three 1-D perfect colorings, reducible and
//! cylindrical lifts, the reducible matrix family, and the Gray-code lift of
//! the Hamming weight coloring, which reaches `2n + 1` colors.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perfect::ParameterMatrix;
use crate::torus::{ColoringError, PeriodicColoring};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("number of colors must be at least 1")]
    InvalidK,
    #[error("delta has no nonzero entry")]
    AllZeroDelta,
    #[error("delta entries must lie in {{-1, 0, 1}}")]
    DeltaOutOfRange,
    #[error("invalid reducible matrix parameters: {0}")]
    InvalidSpec(String),
    #[error("target dimension {target} is not larger than {source_dim}")]
    DimensionNotLarger { source_dim: usize, target: usize },
    #[error("binary word has odd length {0}")]
    OddLength(usize),
    #[error("gray coordinate {0} is outside 0..=3")]
    GrayCoordinate(usize),
    #[error("expected a 1-dimensional pattern, got dimension {0}")]
    NotOneDimensional(usize),
    #[error(transparent)]
    Coloring(#[from] ColoringError),
}

/// The three 1-D period shapes with `k` colors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OneDimKind {
    /// `1, 2, ..., k, k-1, ..., 2`, period `2k - 2`.
    Reflective,
    /// `1, 1, 2, ..., k, k-1, ..., 2`, period `2k - 1`.
    LeftDoubled,
    /// `1, 1, 2, ..., k, k, k-1, ..., 2`, period `2k`.
    BothDoubled,
}

impl OneDimKind {
    pub const ALL: [OneDimKind; 3] = [OneDimKind::Reflective, OneDimKind::LeftDoubled, OneDimKind::BothDoubled];

    /// `(eps1, eps2)` of the lifted parameter matrix.
    pub fn epsilons(self) -> (usize, usize) {
        match self {
            OneDimKind::Reflective => (2, 2),
            OneDimKind::LeftDoubled => (1, 2),
            OneDimKind::BothDoubled => (1, 1),
        }
    }
}

impl fmt::Display for OneDimKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OneDimKind::Reflective => "reflective",
            OneDimKind::LeftDoubled => "left-doubled",
            OneDimKind::BothDoubled => "both-doubled",
        })
    }
}

impl FromStr for OneDimKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.replace('_', "-").as_str() {
            "reflective" => Ok(OneDimKind::Reflective),
            "left-doubled" => Ok(OneDimKind::LeftDoubled),
            "both-doubled" => Ok(OneDimKind::BothDoubled),
            other => Err(format!("unknown kind `{other}`")),
        }
    }
}

/// One period of the 1-D coloring. For `k = 1` every kind is the constant
/// coloring (period 1, or 2 for `BothDoubled`).
pub fn one_dim_pattern(k: usize, kind: OneDimKind) -> Result<PeriodicColoring, ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::InvalidK);
    }
    let mut seq: Vec<usize> = Vec::with_capacity(2 * k);
    if kind != OneDimKind::Reflective && k > 1 {
        seq.push(1);
    }
    seq.extend(1..=k);
    if kind == OneDimKind::BothDoubled {
        seq.push(k);
    }
    seq.extend((2..k).rev());
    Ok(PeriodicColoring::new(vec![seq.len()], k, seq)?)
}

/// `phi(x) = pattern(delta · x)`. Axes with `delta_j != 0` get the pattern's
/// period; the others get period 1.
pub fn lift_reducible(pattern: &PeriodicColoring, delta: &[i8]) -> Result<PeriodicColoring, ConstructionError> {
    if pattern.n() != 1 {
        return Err(ConstructionError::NotOneDimensional(pattern.n()));
    }
    if delta.iter().any(|d| !(-1..=1).contains(d)) {
        return Err(ConstructionError::DeltaOutOfRange);
    }
    if delta.iter().all(|&d| d == 0) {
        return Err(ConstructionError::AllZeroDelta);
    }
    let p = pattern.periods()[0];
    let periods = delta.iter().map(|&d| if d == 0 { 1 } else { p }).collect();
    let colors = pattern.colors();
    let lifted = PeriodicColoring::from_fn(periods, |x| {
        let s: i64 = x.iter().zip(delta).map(|(&xi, &d)| xi as i64 * d as i64).sum();
        colors[s.rem_euclid(p as i64) as usize]
    })?;
    Ok(lifted)
}

/// Parameters of the reducible matrix family: `r` nonzero entries of
/// `delta`, end multipliers `eps1`, `eps2` in `{1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducibleMatrixSpec {
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub eps1: usize,
    pub eps2: usize,
}

pub fn reducible_matrix(spec: ReducibleMatrixSpec) -> Result<ParameterMatrix, ConstructionError> {
    let ReducibleMatrixSpec { n, k, r, eps1, eps2 } = spec;
    let invalid = |why: &str| Err(ConstructionError::InvalidSpec(why.into()));
    if k == 0 {
        return invalid("k must be at least 1");
    }
    if r == 0 || r > n {
        return invalid("r must lie in 1..=n");
    }
    if ![1, 2].contains(&eps1) || ![1, 2].contains(&eps2) {
        return invalid("eps1 and eps2 must be 1 or 2");
    }
    let two_n = 2 * n;
    let mut rows = vec![vec![0usize; k]; k];
    if k == 1 {
        rows[0][0] = two_n;
    } else {
        rows[0][0] = two_n - eps1 * r;
        rows[0][1] = eps1 * r;
        for (i, row) in rows.iter_mut().enumerate().take(k - 1).skip(1) {
            row[i - 1] = r;
            row[i] = two_n - 2 * r;
            row[i + 1] = r;
        }
        rows[k - 1][k - 2] = eps2 * r;
        rows[k - 1][k - 1] = two_n - eps2 * r;
    }
    ParameterMatrix::new(n, rows).map_err(|e| ConstructionError::InvalidSpec(e.to_string()))
}

/// Whether `matrix`, read in its given order, belongs to the reducible family.
pub fn is_reducible_matrix(matrix: &ParameterMatrix) -> bool {
    let n = matrix.n;
    (1..=n).any(|r| {
        [1, 2].iter().any(|&eps1| {
            [1, 2].iter().any(|&eps2| {
                reducible_matrix(ReducibleMatrixSpec { n, k: matrix.k, r, eps1, eps2 })
                    .is_ok_and(|m| m.rows == matrix.rows)
            })
        })
    })
}

/// Adds `target - m` nonessential axes of period 1.
pub fn cylindrical_lift(coloring: &PeriodicColoring, target: usize) -> Result<PeriodicColoring, ConstructionError> {
    let m = coloring.n();
    if target <= m {
        return Err(ConstructionError::DimensionNotLarger { source_dim: m, target });
    }
    let mut periods = coloring.periods().to_vec();
    periods.resize(target, 1);
    // Trailing axes of period 1 leave the row-major layout unchanged.
    Ok(PeriodicColoring::new(periods, coloring.k(), coloring.colors().to_vec())?)
}

/// A vertex of the hypercube `{0,1}^{2n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryWord(Vec<u8>);

impl BinaryWord {
    pub fn new(bits: Vec<u8>) -> Result<Self, ConstructionError> {
        if !bits.len().is_multiple_of(2) {
            return Err(ConstructionError::OddLength(bits.len()));
        }
        Ok(BinaryWord(bits.into_iter().map(|b| b & 1).collect()))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&b| b as usize).sum()
    }

    /// Word whose bits are the binary digits of `value`, most significant first.
    pub fn from_index(value: usize, len: usize) -> Self {
        BinaryWord((0..len).map(|i| ((value >> (len - 1 - i)) & 1) as u8).collect())
    }

    pub fn index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
    }
}

const G0: [usize; 4] = [0, 1, 3, 2]; // g0(ab) indexed by 2a + b: 00->0, 01->1, 10->3, 11->2
const G0_INV: [[u8; 2]; 4] = [[0, 0], [0, 1], [1, 1], [1, 0]];

/// Pairwise Gray transform `{0,1}^{2n} -> {0,1,2,3}^n`.
pub fn gray_point(word: &BinaryWord) -> Vec<usize> {
    word.0.chunks_exact(2).map(|p| G0[2 * p[0] as usize + p[1] as usize]).collect()
}

/// Inverse of [`gray_point`]; coordinates are taken modulo nothing and must
/// lie in `0..=3`.
pub fn gray_inverse(point: &[usize]) -> Result<BinaryWord, ConstructionError> {
    let mut bits = Vec::with_capacity(2 * point.len());
    for &x in point {
        let pair = G0_INV.get(x).ok_or(ConstructionError::GrayCoordinate(x))?;
        bits.extend_from_slice(pair);
    }
    Ok(BinaryWord(bits))
}

/// A coloring of the hypercube `{0,1}^{2n}`, colors indexed by
/// [`BinaryWord::index`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypercubeColoring {
    pub n: usize,
    pub k: usize,
    pub colors: Vec<usize>,
}

impl HypercubeColoring {
    pub fn dimension(&self) -> usize {
        2 * self.n
    }

    pub fn color(&self, word: &BinaryWord) -> usize {
        self.colors[word.index()]
    }

    /// Parameter matrix counted on the hypercube itself (degree `2n`), or
    /// `None` if the coloring is not perfect there.
    pub fn parameter_matrix(&self) -> Option<ParameterMatrix> {
        let dim = self.dimension();
        let mut rows: Vec<Option<Vec<usize>>> = vec![None; self.k];
        for v in 0..self.colors.len() {
            let mut counts = vec![0; self.k];
            for b in 0..dim {
                counts[self.colors[v ^ (1 << b)] - 1] += 1;
            }
            let slot = &mut rows[self.colors[v] - 1];
            match slot {
                None => *slot = Some(counts),
                Some(seen) if *seen != counts => return None,
                Some(_) => {}
            }
        }
        let rows = rows.into_iter().collect::<Option<Vec<_>>>()?;
        ParameterMatrix::new(self.n, rows).ok()
    }
}

/// `psi(x) = wt(x) + 1` on `{0,1}^{2n}`.
pub fn hamming_distance_coloring(n: usize) -> HypercubeColoring {
    let dim = 2 * n;
    let colors = (0..1usize << dim).map(|v| v.count_ones() as usize + 1).collect();
    HypercubeColoring { n, k: dim + 1, colors }
}

/// `phi(x) = psi(g^{-1}(x mod 4))` on the torus with all periods 4.
pub fn gray_transform(psi: &HypercubeColoring) -> Result<PeriodicColoring, ConstructionError> {
    let periods = vec![4; psi.n];
    let coloring = PeriodicColoring::from_fn(periods, |x| {
        let word = gray_inverse(x).expect("torus coordinates lie in 0..4");
        psi.color(&word)
    })?;
    Ok(coloring)
}

/// The Gray lift of the Hamming weight coloring: `2n + 1` colors on the
/// `4 x ... x 4` torus.
pub fn gray_lift(n: usize) -> Result<PeriodicColoring, ConstructionError> {
    if n == 0 {
        return Err(ColoringError::ZeroDimension.into());
    }
    gray_transform(&hamming_distance_coloring(n))
}
