//! Distance regular colorings: standard orders, degree triples, and the
//! matrix-level validators (monotone degrees, segment strictness, repeated
//! triples, and the `2n + 1` color bound for irreducible colorings).

use serde::Serialize;
use thiserror::Error;

use crate::perfect::{compute_parameter_matrix, NotPerfectWitness, ParameterMatrix};
use crate::structure::{detect_reducible, Reduction};
use crate::torus::{Cell, PeriodicColoring};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DistRegError {
    #[error("coloring is not perfect: cells {:?} and {:?} of color {} differ", .0.cell_a, .0.cell_b, .0.color)]
    NotPerfect(NotPerfectWitness),
    #[error("no color order makes the parameter matrix tridiagonal")]
    NoStandardOrder,
    /// The tridiagonal matrix shape and the BFS layering disagree. For a
    /// connected tridiagonal matrix this cannot happen, so it marks a bug.
    #[error("cell {cell:?} has level {level} but lies at distance {distance} from the first color")]
    LayeringMismatch { cell: Cell, level: usize, distance: usize },
    #[error("matrix is not tridiagonal under the given order")]
    NotTridiagonal,
    #[error("degree sequences are not monotone: {0}")]
    MonotonicityViolation(TheoremViolation),
}

/// A failed validator: which check, the 1-based color position, and why.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremViolation {
    pub check: &'static str,
    pub index: usize,
    pub detail: String,
}

impl std::fmt::Display for TheoremViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} at color {}: {}", self.check, self.index, self.detail)
    }
}

/// `(l, k, u)`: neighbors in the previous, same and next layer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct DegreeTriple {
    pub l: usize,
    #[serde(rename = "k")]
    pub k_inner: usize,
    pub u: usize,
}

impl DegreeTriple {
    pub fn new(l: usize, k_inner: usize, u: usize) -> Self {
        Self { l, k_inner, u }
    }

    /// The triple seen under the reversed order.
    pub fn flipped(self) -> Self {
        Self::new(self.u, self.k_inner, self.l)
    }
}

/// A color ordering under which the parameter matrix is tridiagonal.
/// `colors()[p]` is the original color placed at layer `p + 1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct StandardOrder(Vec<usize>);

impl StandardOrder {
    /// The identity order on `k` colors, not checked against any matrix.
    pub fn identity(k: usize) -> Self {
        StandardOrder((1..=k).collect())
    }

    pub fn colors(&self) -> &[usize] {
        &self.0
    }

    pub fn k(&self) -> usize {
        self.0.len()
    }

    pub fn reversed(&self) -> Self {
        StandardOrder(self.0.iter().rev().copied().collect())
    }

    /// `levels()[c]` is the 1-based layer of original color `c`; index 0 unused.
    pub fn levels(&self) -> Vec<usize> {
        let mut levels = vec![0; self.0.len() + 1];
        for (p, &c) in self.0.iter().enumerate() {
            levels[c] = p + 1;
        }
        levels
    }
}

/// Boundaries of the three segments: `l < u` on `1..=i1`, `l = u` on
/// `i1+1..i2`, `l > u` on `i2..=k`. `degenerate` is set when an outer
/// segment is empty and the boundary fell back to `1` or `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SegmentPartition {
    pub i1: usize,
    pub i2: usize,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DRReport {
    pub n: usize,
    pub k: usize,
    pub periods: Vec<usize>,
    pub short_period: bool,
    pub matrix: ParameterMatrix,
    pub order: StandardOrder,
    pub triples: Vec<DegreeTriple>,
    pub segments: SegmentPartition,
    pub bfs_verified: bool,
    pub reducibility: Option<Reduction>,
}

/// Orders along the color graph when it is a simple path; the order whose
/// first color has the smaller original index comes first.
pub fn find_standard_orders(matrix: &ParameterMatrix) -> Vec<StandardOrder> {
    let k = matrix.k;
    if k == 1 {
        return vec![StandardOrder(vec![1])];
    }
    let adjacent = |i: usize, j: usize| i != j && (matrix.rows[i][j] > 0 || matrix.rows[j][i] > 0);
    let degree: Vec<usize> = (0..k).map(|i| (0..k).filter(|&j| adjacent(i, j)).count()).collect();
    if degree.iter().any(|&d| d == 0 || d > 2) {
        return Vec::new();
    }
    let Some(start) = degree.iter().position(|&d| d == 1) else {
        return Vec::new();
    };
    let mut path = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(next) = (0..k).find(|&j| j != prev && adjacent(cur, j)) {
        path.push(next);
        prev = cur;
        cur = next;
        if path.len() > k {
            return Vec::new();
        }
    }
    if path.len() != k {
        // A path plus a disjoint cycle.
        return Vec::new();
    }
    let forward = StandardOrder(path.into_iter().map(|c| c + 1).collect());
    let backward = forward.reversed();
    vec![forward, backward]
}

/// Reads the three diagonals under `order`; `l_1` and `u_k` are 0.
pub fn degree_triples(
    matrix: &ParameterMatrix,
    order: &StandardOrder,
) -> Result<Vec<DegreeTriple>, DistRegError> {
    let m = matrix.permuted(order.colors());
    if !m.is_tridiagonal() {
        return Err(DistRegError::NotTridiagonal);
    }
    let k = m.k;
    Ok((0..k)
        .map(|i| {
            let l = if i > 0 { m.rows[i][i - 1] } else { 0 };
            let u = if i + 1 < k { m.rows[i][i + 1] } else { 0 };
            DegreeTriple::new(l, m.rows[i][i], u)
        })
        .collect())
}

/// Lower degrees nondecreasing over `2..=k`, upper degrees nonincreasing
/// over `1..=k-1`. Reports the first offending 1-based position.
pub fn validate_monotonicity(triples: &[DegreeTriple]) -> Result<(), TheoremViolation> {
    let k = triples.len();
    for i in 1..k {
        // position i + 1 (1-based) against position i
        if i >= 2 && triples[i].l < triples[i - 1].l {
            return Err(TheoremViolation {
                check: "monotonicity",
                index: i + 1,
                detail: format!("l_{} = {} < l_{} = {}", i + 1, triples[i].l, i, triples[i - 1].l),
            });
        }
        if i + 1 < k && triples[i].u > triples[i - 1].u {
            return Err(TheoremViolation {
                check: "monotonicity",
                index: i + 1,
                detail: format!("u_{} = {} > u_{} = {}", i + 1, triples[i].u, i, triples[i - 1].u),
            });
        }
    }
    Ok(())
}

pub fn compute_segments(triples: &[DegreeTriple]) -> Result<SegmentPartition, DistRegError> {
    validate_monotonicity(triples).map_err(DistRegError::MonotonicityViolation)?;
    let k = triples.len();
    let last_lower = triples.iter().rposition(|t| t.l < t.u);
    let first_upper = triples.iter().position(|t| t.l > t.u);
    Ok(SegmentPartition {
        i1: last_lower.map_or(1, |i| i + 1),
        i2: first_upper.map_or(k, |i| i + 1),
        degenerate: last_lower.is_none() || first_upper.is_none(),
    })
}

/// Consecutive lower degrees differ before `I1`, consecutive upper degrees
/// differ after `I2`.
pub fn validate_strictness(
    triples: &[DegreeTriple],
    segments: &SegmentPartition,
) -> Result<(), TheoremViolation> {
    let k = triples.len();
    for i in 1..segments.i1.min(k) {
        if triples[i - 1].l == triples[i].l {
            return Err(TheoremViolation {
                check: "strictness",
                index: i,
                detail: format!("l_{i} = l_{} = {} inside the first segment", i + 1, triples[i].l),
            });
        }
    }
    for i in (segments.i2 + 1)..=k {
        if triples[i - 1].u == triples[i - 2].u {
            return Err(TheoremViolation {
                check: "strictness",
                index: i,
                detail: format!("u_{i} = u_{} = {} inside the last segment", i - 1, triples[i - 1].u),
            });
        }
    }
    Ok(())
}

/// Between two equal triples at interior positions, every color has `l = u`.
pub fn validate_repeated_triples_shape(triples: &[DegreeTriple]) -> Result<(), TheoremViolation> {
    let k = triples.len();
    if k < 3 {
        return Ok(());
    }
    let interior = 1..k - 1;
    for i in interior.clone() {
        for j in (i + 1)..interior.end {
            if triples[i] != triples[j] {
                continue;
            }
            if let Some(m) = (i + 1..j).find(|&m| triples[m].l != triples[m].u) {
                return Err(TheoremViolation {
                    check: "repeated-triples",
                    index: m + 1,
                    detail: format!(
                        "colors {} and {} share a triple but color {} has l = {} != u = {}",
                        i + 1,
                        j + 1,
                        m + 1,
                        triples[m].l,
                        triples[m].u
                    ),
                });
            }
        }
    }
    Ok(())
}

/// Irreducible colorings have at most `2n + 1` colors.
pub fn validate_color_bound(report: &DRReport) -> Result<(), TheoremViolation> {
    if report.reducibility.is_some() || report.k <= 2 * report.n + 1 {
        return Ok(());
    }
    Err(TheoremViolation {
        check: "color-bound",
        index: report.k,
        detail: format!("irreducible coloring with k = {} > 2n + 1 = {}", report.k, 2 * report.n + 1),
    })
}

/// Full check under the first standard order.
pub fn check_distance_regular(coloring: &PeriodicColoring) -> Result<DRReport, DistRegError> {
    let matrix = compute_parameter_matrix(coloring).map_err(DistRegError::NotPerfect)?;
    let order = find_standard_orders(&matrix)
        .into_iter()
        .next()
        .ok_or(DistRegError::NoStandardOrder)?;
    report_for_order(coloring, matrix, order)
}

/// One report per standard order (two for `k >= 2`).
pub fn distance_regular_reports(coloring: &PeriodicColoring) -> Result<Vec<DRReport>, DistRegError> {
    let matrix = compute_parameter_matrix(coloring).map_err(DistRegError::NotPerfect)?;
    let orders = find_standard_orders(&matrix);
    if orders.is_empty() {
        return Err(DistRegError::NoStandardOrder);
    }
    orders
        .into_iter()
        .map(|order| report_for_order(coloring, matrix.clone(), order))
        .collect()
}

fn report_for_order(
    coloring: &PeriodicColoring,
    matrix: ParameterMatrix,
    order: StandardOrder,
) -> Result<DRReport, DistRegError> {
    let triples = degree_triples(&matrix, &order)?;
    verify_layering(coloring, &order)?;
    let segments = compute_segments(&triples)?;
    Ok(DRReport {
        n: coloring.n(),
        k: coloring.k(),
        periods: coloring.periods().to_vec(),
        short_period: coloring.has_short_period(),
        matrix,
        order,
        triples,
        segments,
        bfs_verified: true,
        reducibility: detect_reducible(coloring),
    })
}

/// Every cell's layer equals one plus its distance to the first layer.
pub fn verify_layering(coloring: &PeriodicColoring, order: &StandardOrder) -> Result<(), DistRegError> {
    let levels = order.levels();
    let first = coloring.class(order.colors()[0]);
    let dist = coloring
        .torus()
        .distances(&first)
        .expect("every color occurs, so the first class is nonempty");
    for (index, &d) in dist.iter().enumerate() {
        let level = levels[coloring.color_at(index)];
        if level != d + 1 {
            return Err(DistRegError::LayeringMismatch {
                cell: coloring.torus().cell(index),
                level,
                distance: d,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(l: usize, k: usize, u: usize) -> DegreeTriple {
        DegreeTriple::new(l, k, u)
    }

    fn triples_from(ls: &[usize], us: &[usize], two_n: usize) -> Vec<DegreeTriple> {
        ls.iter().zip(us).map(|(&l, &u)| t(l, two_n - l - u, u)).collect()
    }

    fn reflective3() -> ParameterMatrix {
        ParameterMatrix::new(1, vec![vec![0, 2, 0], vec![1, 0, 1], vec![0, 2, 0]]).unwrap()
    }

    #[test]
    fn standard_orders_of_tridiagonal_matrix() {
        let orders = find_standard_orders(&reflective3());
        assert_eq!(orders, vec![StandardOrder(vec![1, 2, 3]), StandardOrder(vec![3, 2, 1])]);
    }

    #[test]
    fn standard_orders_recovered_after_permutation() {
        let m = reflective3().permuted(&[2, 1, 3]);
        let orders = find_standard_orders(&m);
        assert_eq!(orders.len(), 2);
        for o in &orders {
            assert!(m.permuted(o.colors()).is_tridiagonal());
        }
        assert_eq!(orders[0], StandardOrder(vec![2, 1, 3]));
        assert_eq!(orders[1], StandardOrder(vec![3, 1, 2]));
    }

    #[test]
    fn star_color_graph_has_no_order() {
        // color 1 adjacent to 2, 3, 4
        let m = ParameterMatrix::new(
            2,
            vec![vec![1, 1, 1, 1], vec![4, 0, 0, 0], vec![4, 0, 0, 0], vec![4, 0, 0, 0]],
        )
        .unwrap();
        assert!(find_standard_orders(&m).is_empty());

        let cyc = ParameterMatrix::new(1, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        assert!(find_standard_orders(&cyc).is_empty());
    }

    #[test]
    fn triples_read_diagonals() {
        let order = StandardOrder::identity(3);
        assert_eq!(
            degree_triples(&reflective3(), &order).unwrap(),
            vec![t(0, 0, 2), t(1, 0, 1), t(2, 0, 0)]
        );
        let mono = ParameterMatrix::new(3, vec![vec![6]]).unwrap();
        assert_eq!(degree_triples(&mono, &StandardOrder::identity(1)).unwrap(), vec![t(0, 6, 0)]);
        let bad = reflective3().permuted(&[2, 1, 3]);
        assert_eq!(degree_triples(&bad, &order), Err(DistRegError::NotTridiagonal));
    }

    #[test]
    fn monotonicity_checks() {
        let gray2 = triples_from(&[0, 1, 2, 3, 4], &[4, 3, 2, 1, 0], 4);
        assert!(validate_monotonicity(&gray2).is_ok());
        // lower degrees must not drop after position 2
        let bad = triples_from(&[0, 2, 1], &[2, 0, 0], 2);
        assert_eq!(validate_monotonicity(&bad).unwrap_err().index, 3);
        let bad_u = triples_from(&[0, 1, 1, 2], &[1, 0, 1, 0], 2);
        assert_eq!(validate_monotonicity(&bad_u).unwrap_err().index, 3);
        assert!(validate_monotonicity(&[t(0, 1, 1), t(2, 0, 0)]).is_ok());
        assert!(validate_monotonicity(&[t(0, 2, 0)]).is_ok());
    }

    #[test]
    fn segments() {
        let gray2 = triples_from(&[0, 1, 2, 3, 4], &[4, 3, 2, 1, 0], 4);
        assert_eq!(compute_segments(&gray2).unwrap(), SegmentPartition { i1: 2, i2: 4, degenerate: false });
        let stripes = vec![t(0, 0, 4), t(2, 0, 2), t(4, 0, 0)];
        assert_eq!(compute_segments(&stripes).unwrap(), SegmentPartition { i1: 1, i2: 3, degenerate: false });
        let flat = vec![t(0, 0, 4), t(2, 0, 2), t(2, 0, 2), t(2, 0, 2), t(4, 0, 0)];
        assert_eq!(compute_segments(&flat).unwrap(), SegmentPartition { i1: 1, i2: 5, degenerate: false });
        assert_eq!(
            compute_segments(&[t(0, 4, 0)]).unwrap(),
            SegmentPartition { i1: 1, i2: 1, degenerate: true }
        );
        let bad = triples_from(&[0, 2, 1], &[2, 0, 0], 2);
        assert!(matches!(compute_segments(&bad), Err(DistRegError::MonotonicityViolation(_))));
    }

    #[test]
    fn strictness() {
        let gray2 = triples_from(&[0, 1, 2, 3, 4], &[4, 3, 2, 1, 0], 4);
        let seg = compute_segments(&gray2).unwrap();
        assert!(validate_strictness(&gray2, &seg).is_ok());

        // l_2 = l_3 = 1 with l < u through color 3
        let flat_start = triples_from(&[0, 1, 1, 2, 4], &[4, 3, 3, 2, 0], 6);
        let seg = compute_segments(&flat_start).unwrap();
        assert_eq!(seg.i1, 3);
        assert_eq!(validate_strictness(&flat_start, &seg).unwrap_err().index, 2);

        let two = vec![t(0, 1, 1), t(2, 0, 0)];
        assert!(validate_strictness(&two, &compute_segments(&two).unwrap()).is_ok());
    }

    #[test]
    fn repeated_triples() {
        let ok = vec![t(0, 0, 4), t(1, 2, 1), t(2, 0, 2), t(1, 2, 1), t(4, 0, 0)];
        assert!(validate_repeated_triples_shape(&ok).is_ok());
        let stripes4 = vec![t(0, 0, 4), t(2, 0, 2), t(2, 0, 2), t(4, 0, 0)];
        assert!(validate_repeated_triples_shape(&stripes4).is_ok());
        let bad = vec![t(0, 0, 4), t(1, 2, 1), t(1, 0, 3), t(1, 2, 1), t(4, 0, 0)];
        assert_eq!(validate_repeated_triples_shape(&bad).unwrap_err().index, 3);
    }

    fn fake_report(n: usize, k: usize, reducible: bool) -> DRReport {
        let reducibility = reducible.then(|| Reduction {
            delta: vec![1; n],
            pattern: PeriodicColoring::new(vec![k], k, (1..=k).collect()).unwrap(),
        });
        DRReport {
            n,
            k,
            periods: vec![k; n],
            short_period: false,
            matrix: ParameterMatrix { n, k, rows: vec![vec![0; k]; k] },
            order: StandardOrder::identity(k),
            triples: Vec::new(),
            segments: SegmentPartition { i1: 1, i2: k, degenerate: false },
            bfs_verified: true,
            reducibility,
        }
    }

    #[test]
    fn color_bound() {
        assert!(validate_color_bound(&fake_report(2, 5, false)).is_ok());
        assert!(validate_color_bound(&fake_report(2, 9, true)).is_ok());
        let err = validate_color_bound(&fake_report(2, 6, false)).unwrap_err();
        assert_eq!(err.check, "color-bound");
    }

    #[test]
    fn check_on_cycles() {
        let c = PeriodicColoring::new(vec![4], 3, vec![1, 2, 3, 2]).unwrap();
        let r = check_distance_regular(&c).unwrap();
        assert_eq!(r.triples, vec![t(0, 0, 2), t(1, 0, 1), t(2, 0, 0)]);
        assert!(r.bfs_verified);

        let mono = PeriodicColoring::new(vec![2, 2], 1, vec![1; 4]).unwrap();
        let r = check_distance_regular(&mono).unwrap();
        assert_eq!(r.k, 1);
        assert!(r.short_period);

        // perfect, but color graph 1-2-3-1 is a triangle
        let tri = PeriodicColoring::new(vec![3], 3, vec![1, 2, 3]).unwrap();
        assert_eq!(check_distance_regular(&tri), Err(DistRegError::NoStandardOrder));

        let not_perfect = PeriodicColoring::new(vec![5], 2, vec![1, 1, 2, 2, 2]).unwrap();
        assert!(matches!(check_distance_regular(&not_perfect), Err(DistRegError::NotPerfect(_))));
    }

    #[test]
    fn both_reports_are_reversals() {
        let c = PeriodicColoring::new(vec![5], 3, vec![1, 1, 2, 3, 2]).unwrap();
        let reports = distance_regular_reports(&c).unwrap();
        assert_eq!(reports.len(), 2);
        let flipped: Vec<_> = reports[0].triples.iter().rev().map(|t| t.flipped()).collect();
        assert_eq!(reports[1].triples, flipped);
        assert_eq!(reports[1].order, reports[0].order.reversed());
    }
}
