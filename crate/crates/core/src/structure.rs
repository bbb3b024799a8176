//! Vertex-level structure of distance regular colorings: lower, inner and
//! upper direction sets, the inclusion and opposition lemmas, hyperplane
//! recovery for repeated degree triples, and reducibility detection.
//!
//! Components of `G(C_i ∪ C_{i+1})` are taken on the torus. A torus
//! component may be the image of several components in `Z^n`; requiring
//! constancy over the torus component is then a stronger check.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::distreg::{degree_triples, DegreeTriple, DistRegError, StandardOrder};
use crate::perfect::compute_parameter_matrix;
use crate::torus::{Cell, Direction, PeriodicColoring};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StructureError {
    #[error("coloring is not distance regular: {0}")]
    NotDistanceRegular(#[from] DistRegError),
    #[error("cell {cell:?} at layer {level} has a neighbor {neighbor:?} at layer {neighbor_level}")]
    NotLayered { cell: Cell, level: usize, neighbor: Cell, neighbor_level: usize },
    #[error("not an ascending chain at position {position}")]
    NotAChain { position: usize },
    #[error("invalid cell {0:?}")]
    InvalidCell(Cell),
    #[error("nested direction sets fail between chain positions {position} and {}", position + 1)]
    ChainViolation { position: usize },
    #[error("inclusion fails for adjacent cells {lower:?} and {upper:?}")]
    InclusionViolated { lower: Cell, upper: Cell },
    #[error("layers {i} and {} have different degree triples", i + 1)]
    TriplesDiffer { i: usize },
    #[error("opposition fails at cell {cell:?}: {detail}")]
    OppositionViolated { cell: Cell, detail: String },
    #[error("hyperplane normal is not constant on the component of cell {cell:?}")]
    InconsistentDelta { cell: Cell },
    #[error("lower/upper lemma fails at layer {level}: {detail}")]
    LemmaViolated { level: usize, detail: String },
}

/// `L(x)`, `I(x)`, `U(x)`: directions to the previous, same and next layer.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DirectionSets {
    pub lower: BTreeSet<Direction>,
    pub inner: BTreeSet<Direction>,
    pub upper: BTreeSet<Direction>,
}

impl DirectionSets {
    pub fn sizes(&self) -> DegreeTriple {
        DegreeTriple::new(self.lower.len(), self.inner.len(), self.upper.len())
    }

    /// Compact signature such as `L{-e1} I{} U{+e1}`.
    pub fn signature(&self) -> String {
        let fmt = |s: &BTreeSet<Direction>| s.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
        format!("L{{{}}} I{{{}}} U{{{}}}", fmt(&self.lower), fmt(&self.inner), fmt(&self.upper))
    }
}

fn negated(set: &BTreeSet<Direction>) -> BTreeSet<Direction> {
    set.iter().map(|&d| -d).collect()
}

/// `delta · x = c` with `delta` over `{-1, 0, 1}` and first nonzero entry `+1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct HyperplaneSpec {
    pub delta: Vec<i8>,
    pub c: i64,
}

impl HyperplaneSpec {
    pub fn dot(&self, point: &[i64]) -> i64 {
        self.delta.iter().zip(point).map(|(&d, &x)| d as i64 * x).sum()
    }
}

/// Hyperplane pair recovered for one component of `G(C_i ∪ C_{i+1})`.
/// Layer `i` lies on `M(delta, c)` and layer `i + 1` on
/// `M(delta, next_offset)`, offsets taken modulo `modulus`, the period of
/// `delta · x` on the torus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentHyperplane {
    pub hyperplane: HyperplaneSpec,
    pub next_offset: i64,
    pub modulus: i64,
    pub cells: usize,
}

/// Witness that `phi(x) = pattern(delta · x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reduction {
    pub delta: Vec<i8>,
    pub pattern: PeriodicColoring,
}

struct Layers<'a> {
    coloring: &'a PeriodicColoring,
    levels: Vec<usize>,
}

impl<'a> Layers<'a> {
    fn new(coloring: &'a PeriodicColoring, order: &StandardOrder) -> Self {
        Self { coloring, levels: order.levels() }
    }

    fn level(&self, index: usize) -> usize {
        self.levels[self.coloring.color_at(index)]
    }

    fn sets(&self, index: usize) -> Result<DirectionSets, StructureError> {
        let torus = self.coloring.torus();
        let here = self.level(index);
        let mut sets = DirectionSets { lower: BTreeSet::new(), inner: BTreeSet::new(), upper: BTreeSet::new() };
        for (d, j) in torus.neighbors(index) {
            let there = self.level(j);
            let target = match there as i64 - here as i64 {
                -1 => &mut sets.lower,
                0 => &mut sets.inner,
                1 => &mut sets.upper,
                _ => {
                    return Err(StructureError::NotLayered {
                        cell: torus.cell(index),
                        level: here,
                        neighbor: torus.cell(j),
                        neighbor_level: there,
                    })
                }
            };
            target.insert(d);
        }
        Ok(sets)
    }

    fn all_sets(&self) -> Result<Vec<DirectionSets>, StructureError> {
        (0..self.coloring.len()).map(|i| self.sets(i)).collect()
    }
}

/// Direction sets of `cell` with layers given by `order`.
pub fn direction_sets(
    coloring: &PeriodicColoring,
    order: &StandardOrder,
    cell: &Cell,
) -> Result<DirectionSets, StructureError> {
    let index = coloring.torus().index(cell).map_err(|_| StructureError::InvalidCell(cell.clone()))?;
    Layers::new(coloring, order).sets(index)
}

/// For adjacent `x` (layer `i`) and `y` (layer `i + 1`): `L(x) ⊆ L(y)` and
/// `U(x) ⊇ U(y)`.
pub fn verify_inclusion(coloring: &PeriodicColoring, order: &StandardOrder) -> Result<(), StructureError> {
    let layers = Layers::new(coloring, order);
    let sets = layers.all_sets()?;
    let torus = coloring.torus();
    for x in 0..coloring.len() {
        for (_, y) in torus.neighbors(x) {
            if layers.level(y) != layers.level(x) + 1 {
                continue;
            }
            if !sets[x].lower.is_subset(&sets[y].lower) || !sets[x].upper.is_superset(&sets[y].upper) {
                return Err(StructureError::InclusionViolated { lower: torus.cell(x), upper: torus.cell(y) });
            }
        }
    }
    Ok(())
}

/// Checks that `chain` ascends one layer per step between adjacent cells,
/// then that the lower sets nest upward and the upper sets nest downward.
pub fn verify_ascending_chains(
    coloring: &PeriodicColoring,
    order: &StandardOrder,
    chain: &[Cell],
) -> Result<(), StructureError> {
    let torus = coloring.torus();
    let layers = Layers::new(coloring, order);
    let indices = chain
        .iter()
        .map(|c| torus.index(c).map_err(|_| StructureError::InvalidCell(c.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    for (position, pair) in indices.windows(2).enumerate() {
        let adjacent = torus.neighbors(pair[0]).any(|(_, j)| j == pair[1]);
        if !adjacent || layers.level(pair[1]) != layers.level(pair[0]) + 1 {
            return Err(StructureError::NotAChain { position: position + 1 });
        }
    }
    let sets = indices.iter().map(|&i| layers.sets(i)).collect::<Result<Vec<_>, _>>()?;
    for (position, pair) in sets.windows(2).enumerate() {
        if !pair[0].lower.is_subset(&pair[1].lower) || !pair[0].upper.is_superset(&pair[1].upper) {
            return Err(StructureError::ChainViolation { position: position + 1 });
        }
    }
    Ok(())
}

fn triples_for(coloring: &PeriodicColoring, order: &StandardOrder) -> Result<Vec<DegreeTriple>, StructureError> {
    let matrix = compute_parameter_matrix(coloring).map_err(DistRegError::NotPerfect)?;
    Ok(degree_triples(&matrix, order)?)
}

/// Connected components of the subgraph induced by layers `i` and `i + 1`.
fn slab_components(layers: &Layers<'_>, i: usize) -> Vec<Vec<usize>> {
    let coloring = layers.coloring;
    let torus = coloring.torus();
    let inside = |x: usize| {
        let l = layers.level(x);
        l == i || l == i + 1
    };
    let mut seen = vec![false; coloring.len()];
    let mut components = Vec::new();
    for start in 0..coloring.len() {
        if seen[start] || !inside(start) {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for (_, y) in torus.neighbors(x) {
                if !seen[y] && inside(y) {
                    seen[y] = true;
                    comp.push(y);
                    queue.push_back(y);
                }
            }
        }
        comp.sort_unstable();
        components.push(comp);
    }
    components
}

fn opposition_components(
    coloring: &PeriodicColoring,
    order: &StandardOrder,
    i: usize,
) -> Result<(Vec<Vec<usize>>, Vec<DirectionSets>), StructureError> {
    let triples = triples_for(coloring, order)?;
    if i == 0 || i >= triples.len() || triples[i - 1] != triples[i] {
        return Err(StructureError::TriplesDiffer { i });
    }
    let layers = Layers::new(coloring, order);
    let sets = layers.all_sets()?;
    let torus = coloring.torus();
    let components = slab_components(&layers, i);
    for comp in &components {
        let first = &sets[comp[0]];
        for &x in comp {
            let s = &sets[x];
            let fail = |detail: &str| StructureError::OppositionViolated { cell: torus.cell(x), detail: detail.into() };
            if s.lower != negated(&s.upper) {
                return Err(fail("L(x) != -U(x)"));
            }
            if s.inner != negated(&s.inner) {
                return Err(fail("I(x) != -I(x)"));
            }
            if s != first {
                return Err(fail("direction sets vary within the component"));
            }
        }
    }
    Ok((components, sets))
}

/// For layers `i`, `i + 1` with equal triples: on each component of
/// `G(C_i ∪ C_{i+1})`, `L = -U` and `I = -I`, constant over the component.
/// Returns the number of components.
pub fn verify_opposition(
    coloring: &PeriodicColoring,
    order: &StandardOrder,
    i: usize,
) -> Result<usize, StructureError> {
    opposition_components(coloring, order, i).map(|(c, _)| c.len())
}

/// Recovers `M(delta, c)` and `M(delta, c ± 1)` for every component of
/// `G(C_i ∪ C_{i+1})`. `delta` is read off the upper directions of a layer
/// `i` cell; every edge inside the component is checked to move `delta · x`
/// by exactly the layer difference.
pub fn recover_hyperplane(
    coloring: &PeriodicColoring,
    order: &StandardOrder,
    i: usize,
) -> Result<Vec<ComponentHyperplane>, StructureError> {
    let (components, sets) = opposition_components(coloring, order, i)?;
    let layers = Layers::new(coloring, order);
    let torus = coloring.torus();
    let n = coloring.n();
    let mut out = Vec::with_capacity(components.len());
    for comp in components {
        let v = *comp.iter().find(|&&x| layers.level(x) == i).expect("layer i cell in component");
        let mut delta = vec![0i8; n];
        for d in &sets[v].upper {
            delta[d.axis] = d.signum() as i8;
        }
        let members: BTreeSet<usize> = comp.iter().copied().collect();
        for &x in &comp {
            for (d, y) in torus.neighbors(x) {
                if !members.contains(&y) {
                    continue;
                }
                let step = delta[d.axis] as i64 * d.signum();
                if layers.level(y) as i64 - layers.level(x) as i64 != step {
                    return Err(StructureError::InconsistentDelta { cell: torus.cell(x) });
                }
            }
        }
        let modulus = delta
            .iter()
            .zip(torus.periods())
            .filter(|(&d, _)| d != 0)
            .fold(0usize, |g, (_, &p)| num_integer::gcd(g, p)) as i64;
        let point: Vec<i64> = torus.cell(v).0.iter().map(|&x| x as i64).collect();
        let mut spec = HyperplaneSpec { delta, c: 0 };
        let mut c = spec.dot(&point);
        let mut next = c + 1;
        if spec.delta.iter().find(|&&d| d != 0) == Some(&-1) {
            spec.delta.iter_mut().for_each(|d| *d = -*d);
            c = -c;
            next = -next;
        }
        spec.c = c.rem_euclid(modulus);
        out.push(ComponentHyperplane {
            hyperplane: spec,
            next_offset: next.rem_euclid(modulus),
            modulus,
            cells: comp.len(),
        });
    }
    Ok(out)
}

/// Canonical `delta` candidates: by support size, then support positions,
/// then signs with `+` before `-`; the first nonzero entry is always `+1`.
pub fn canonical_deltas(n: usize) -> Vec<Vec<i8>> {
    let mut out = Vec::new();
    for r in 1..=n {
        for support in combinations(n, r) {
            for mask in 0..(1u32 << (r - 1)) {
                let mut delta = vec![0i8; n];
                for (pos, &axis) in support.iter().enumerate() {
                    let negative = pos > 0 && (mask >> (r - 1 - pos)) & 1 == 1;
                    delta[axis] = if negative { -1 } else { 1 };
                }
                out.push(delta);
            }
        }
    }
    out
}

fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for a in start..n {
            cur.push(a);
            go(a + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}

/// Whether the color depends only on `delta · x`; if so, the induced 1-D
/// coloring reduced to its minimal period.
pub fn reduce_along(coloring: &PeriodicColoring, delta: &[i8]) -> Option<PeriodicColoring> {
    let torus = coloring.torus();
    let modulus = delta
        .iter()
        .zip(torus.periods())
        .filter(|(&d, _)| d != 0)
        .fold(0usize, |g, (_, &p)| num_integer::gcd(g, p));
    if modulus == 0 {
        return None;
    }
    let mut pattern = vec![0usize; modulus];
    for index in 0..coloring.len() {
        let s: i64 = (0..coloring.n()).map(|a| delta[a] as i64 * torus.coord(index, a) as i64).sum();
        let slot = &mut pattern[s.rem_euclid(modulus as i64) as usize];
        let color = coloring.color_at(index);
        if *slot == 0 {
            *slot = color;
        } else if *slot != color {
            return None;
        }
    }
    let period = (1..=modulus)
        .find(|&p| modulus % p == 0 && (0..modulus).all(|s| pattern[s] == pattern[s % p]))
        .unwrap_or(modulus);
    pattern.truncate(period);
    PeriodicColoring::new(vec![period], coloring.k(), pattern).ok()
}

/// First `delta` (in [`canonical_deltas`] order) along which the coloring
/// factors through a 1-D coloring.
pub fn detect_reducible(coloring: &PeriodicColoring) -> Option<Reduction> {
    canonical_deltas(coloring.n())
        .into_iter()
        .find_map(|delta| reduce_along(coloring, &delta).map(|pattern| Reduction { delta, pattern }))
}

/// 0-based axes `j` along which `phi(x) != phi(x + e^j)` for some `x`.
pub fn essential_variables(coloring: &PeriodicColoring) -> BTreeSet<usize> {
    let torus = coloring.torus();
    (0..coloring.n())
        .filter(|&axis| {
            (0..coloring.len())
                .any(|i| coloring.color_at(i) != coloring.color_at(torus.step(i, Direction::plus(axis))))
        })
        .collect()
}

pub fn is_cylindrical(coloring: &PeriodicColoring) -> bool {
    essential_variables(coloring).len() < coloring.n()
}

/// If `l_i = l_{i+1}` then `u_i <= l_i` and `-U(x) ⊆ L(x)` on layer `i`;
/// symmetrically if `u_i = u_{i-1}` then `l_i <= u_i` and `-L(x) ⊆ U(x)`.
pub fn verify_lower_upper_lemma(
    coloring: &PeriodicColoring,
    order: &StandardOrder,
) -> Result<(), StructureError> {
    let triples = triples_for(coloring, order)?;
    let k = triples.len();
    let layers = Layers::new(coloring, order);
    let sets = layers.all_sets()?;
    for level in 1..=k {
        let t = triples[level - 1];
        let flat_lower = level < k && t.l == triples[level].l;
        let flat_upper = level > 1 && t.u == triples[level - 2].u;
        if flat_lower && t.u > t.l {
            return Err(StructureError::LemmaViolated { level, detail: format!("l_i = l_(i+1) but u_i = {} > l_i = {}", t.u, t.l) });
        }
        if flat_upper && t.l > t.u {
            return Err(StructureError::LemmaViolated { level, detail: format!("u_i = u_(i-1) but l_i = {} > u_i = {}", t.l, t.u) });
        }
        if !flat_lower && !flat_upper {
            continue;
        }
        for x in (0..coloring.len()).filter(|&x| layers.level(x) == level) {
            let s = &sets[x];
            if flat_lower && !negated(&s.upper).is_subset(&s.lower) {
                return Err(StructureError::LemmaViolated { level, detail: "-U(x) not inside L(x)".into() });
            }
            if flat_upper && !negated(&s.lower).is_subset(&s.upper) {
                return Err(StructureError::LemmaViolated { level, detail: "-L(x) not inside U(x)".into() });
            }
        }
    }
    Ok(())
}

/// Whether two layers in `2..=k-1` share a degree triple.
pub fn has_repeated_interior_triples(triples: &[DegreeTriple]) -> bool {
    let k = triples.len();
    if k < 4 {
        return false;
    }
    let interior = &triples[1..k - 1];
    interior.iter().enumerate().any(|(a, t)| interior[a + 1..].contains(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(pattern: &[usize]) -> PeriodicColoring {
        let k = *pattern.iter().max().unwrap();
        PeriodicColoring::new(vec![pattern.len()], k, pattern.to_vec()).unwrap()
    }

    fn dirs(ds: &[Direction]) -> BTreeSet<Direction> {
        ds.iter().copied().collect()
    }

    #[test]
    fn direction_sets_on_reflective_cycle() {
        let c = cycle(&[1, 2, 3, 2]);
        let order = StandardOrder::identity(3);
        let s0 = direction_sets(&c, &order, &Cell::new(vec![0])).unwrap();
        assert!(s0.lower.is_empty() && s0.inner.is_empty());
        assert_eq!(s0.upper, dirs(&[Direction::plus(0), Direction::minus(0)]));
        let s1 = direction_sets(&c, &order, &Cell::new(vec![1])).unwrap();
        assert_eq!(s1.lower, dirs(&[Direction::minus(0)]));
        assert_eq!(s1.upper, dirs(&[Direction::plus(0)]));
        assert!(s1.inner.is_empty());
    }

    #[test]
    fn monochromatic_is_all_inner() {
        let c = PeriodicColoring::new(vec![2, 3], 1, vec![1; 6]).unwrap();
        let s = direction_sets(&c, &StandardOrder::identity(1), &Cell::new(vec![1, 1])).unwrap();
        assert_eq!(s.inner.len(), 4);
        assert_eq!(s.sizes(), DegreeTriple::new(0, 4, 0));
    }

    #[test]
    fn jump_is_not_layered() {
        let c = cycle(&[1, 2, 3]);
        let err = direction_sets(&c, &StandardOrder::identity(3), &Cell::new(vec![0])).unwrap_err();
        assert!(matches!(err, StructureError::NotLayered { .. }));
    }

    #[test]
    fn chains() {
        let c = cycle(&[1, 2, 3, 2]);
        let order = StandardOrder::identity(3);
        assert!(verify_ascending_chains(&c, &order, &[Cell::new(vec![2])]).is_ok());
        let chain = [Cell::new(vec![0]), Cell::new(vec![1]), Cell::new(vec![2])];
        assert!(verify_ascending_chains(&c, &order, &chain).is_ok());
        let gap = [Cell::new(vec![0]), Cell::new(vec![2])];
        assert_eq!(verify_ascending_chains(&c, &order, &gap), Err(StructureError::NotAChain { position: 1 }));
    }

    #[test]
    fn opposition_needs_equal_triples() {
        let c = cycle(&[1, 2, 3, 2]);
        let order = StandardOrder::identity(3);
        assert_eq!(verify_opposition(&c, &order, 1), Err(StructureError::TriplesDiffer { i: 1 }));
        let mono = cycle(&[1]);
        assert_eq!(verify_opposition(&mono, &StandardOrder::identity(1), 1), Err(StructureError::TriplesDiffer { i: 1 }));
    }

    #[test]
    fn opposition_on_long_cycle() {
        let c = cycle(&[1, 2, 3, 4, 3, 2]);
        let order = StandardOrder::identity(4);
        assert_eq!(verify_opposition(&c, &order, 2), Ok(2));
        let planes = recover_hyperplane(&c, &order, 2).unwrap();
        assert_eq!(planes.len(), 2);
        assert_eq!(planes[0].hyperplane, HyperplaneSpec { delta: vec![1], c: 1 });
        assert_eq!(planes[0].next_offset, 2);
        // second component descends as x grows
        assert_eq!(planes[1].hyperplane, HyperplaneSpec { delta: vec![1], c: 5 });
        assert_eq!(planes[1].next_offset, 4);
    }

    #[test]
    fn delta_enumeration_order() {
        let d = canonical_deltas(2);
        assert_eq!(d, vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![1, -1]]);
        let d3 = canonical_deltas(3);
        assert_eq!(d3.len(), 13);
        assert_eq!(d3[0], vec![1, 0, 0]);
        assert_eq!(d3[9], vec![1, 1, 1]);
        assert_eq!(d3[12], vec![1, -1, -1]);
    }

    #[test]
    fn reducibility_of_simple_colorings() {
        let mono = PeriodicColoring::new(vec![2, 2], 1, vec![1; 4]).unwrap();
        let r = detect_reducible(&mono).unwrap();
        assert_eq!(r.delta, vec![1, 0]);
        assert_eq!(r.pattern.colors(), &[1]);

        let p = [1, 1, 2];
        let c = PeriodicColoring::from_fn(vec![3, 3, 1], |x| p[(x[0] + x[1]) % 3]).unwrap();
        let r = detect_reducible(&c).unwrap();
        assert_eq!(r.delta, vec![1, 1, 0]);
        assert_eq!(r.pattern.colors(), &[1, 1, 2]);

        // a 2x2 block pattern that no single linear form explains
        let block = PeriodicColoring::new(vec![2, 2], 2, vec![1, 1, 1, 2]).unwrap();
        assert!(detect_reducible(&block).is_none());
    }

    #[test]
    fn essential_axes() {
        let p = [1, 2, 3, 2];
        let c = PeriodicColoring::from_fn(vec![4, 1], |x| p[x[0]]).unwrap();
        assert_eq!(essential_variables(&c), BTreeSet::from([0]));
        assert!(is_cylindrical(&c));
        let mono = PeriodicColoring::new(vec![2, 2], 1, vec![1; 4]).unwrap();
        assert!(essential_variables(&mono).is_empty());
    }

    #[test]
    fn repeated_interior() {
        let t = DegreeTriple::new;
        assert!(has_repeated_interior_triples(&[t(0, 0, 4), t(2, 0, 2), t(2, 0, 2), t(4, 0, 0)]));
        assert!(!has_repeated_interior_triples(&[t(0, 0, 4), t(1, 0, 3), t(2, 0, 2), t(3, 0, 1), t(4, 0, 0)]));
        // end colors do not count
        assert!(!has_repeated_interior_triples(&[t(0, 1, 1), t(1, 0, 1), t(1, 1, 0)]));
    }

    #[test]
    fn lemma_on_doubled_cycle() {
        let c = cycle(&[1, 1, 2, 3, 3, 2]);
        assert!(verify_lower_upper_lemma(&c, &StandardOrder::identity(3)).is_ok());
    }
}
