//! Fixtures shared by the benchmarks.

use gridreg::{gray_lift, lift_reducible, one_dim_pattern, OneDimKind, ParameterMatrix, PeriodicColoring, SearchConfig};

pub fn gray(n: usize) -> PeriodicColoring {
    gray_lift(n).expect("n >= 1")
}

pub fn stripes(k: usize, delta: &[i8]) -> PeriodicColoring {
    lift_reducible(&one_dim_pattern(k, OneDimKind::Reflective).expect("k >= 1"), delta).expect("valid delta")
}

/// Reflective 3-color stripes on the 4 x 4 torus.
pub fn stripes_search(workers: usize) -> SearchConfig {
    let mut cfg = SearchConfig::new(2, 3, vec![4, 4]);
    cfg.target = Some(ParameterMatrix::new(2, vec![vec![0, 4, 0], vec![2, 0, 2], vec![0, 4, 0]]).expect("row sums 4"));
    cfg.workers = workers;
    cfg
}
