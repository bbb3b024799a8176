//! Exhaustive search at desk scale.
//!
//! The search is matrix-first: a target parameter matrix fixes, for every
//! colored cell, an upper bound on each neighbor color count, and also fixes
//! the exact size of every color class on the torus. Cells are colored in
//! row-major order with cell `0` pinned to color 1 (every coloring has such a
//! translate). A cell whose assigned neighbor counts stay within its row can
//! always be completed to the row exactly, since rows sum to `2n`, so the
//! `<=` check alone is the full pruning rule.
//!
//! Completed assignments are re-verified against the target with the
//! perfectness checker; the pruning is never trusted as a proof.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;
use thiserror::Error;

use crate::constructions::is_reducible_matrix;
use crate::distreg::{
    check_distance_regular, compute_segments, degree_triples, find_standard_orders, validate_color_bound,
    validate_monotonicity, validate_repeated_triples_shape, validate_strictness, DRReport, StandardOrder,
};
use crate::perfect::{compute_parameter_matrix, ParameterMatrix};
use crate::structure::has_repeated_interior_triples;
use crate::torus::{PeriodicColoring, Torus};

/// Default node budget when none is configured.
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    /// A found coloring failed re-verification or a theorem check.
    #[error("internal verification failure: {0}")]
    Verification(String),
}

/// Which matrix-level validators a candidate passes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FilterFlags {
    pub monotone: bool,
    pub strict: bool,
    pub repeated_shape: bool,
    /// Reducible family member or `k <= 2n + 1`.
    pub within_bound: bool,
    pub reducible_family: bool,
    /// Repeated interior triples only occur for reducible-family matrices.
    pub reduc_consistent: bool,
}

impl FilterFlags {
    pub fn passes_all(&self) -> bool {
        self.monotone && self.strict && self.repeated_shape && self.within_bound && self.reduc_consistent
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixCandidate {
    pub matrix: ParameterMatrix,
    pub flags: FilterFlags,
}

fn flags_for(matrix: &ParameterMatrix) -> FilterFlags {
    let triples = degree_triples(matrix, &StandardOrder::identity(matrix.k)).expect("candidates are tridiagonal");
    let monotone = validate_monotonicity(&triples).is_ok();
    let strict = compute_segments(&triples)
        .map(|s| validate_strictness(&triples, &s).is_ok())
        .unwrap_or(false);
    let reducible_family = is_reducible_matrix(matrix);
    FilterFlags {
        monotone,
        strict,
        repeated_shape: validate_repeated_triples_shape(&triples).is_ok(),
        within_bound: reducible_family || matrix.k <= 2 * matrix.n + 1,
        reducible_family,
        reduc_consistent: reducible_family || !has_repeated_interior_triples(&triples),
    }
}

/// All tridiagonal `k x k` matrices with row sums `2n`, `u_i >= 1` for
/// `i < k` and `l_i >= 1` for `i > 1`, in lexicographic row-major order.
pub fn enumerate_matrices(n: usize, k: usize) -> Vec<MatrixCandidate> {
    fn rows_from(i: usize, n: usize, k: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<ParameterMatrix>) {
        if i == k {
            out.push(ParameterMatrix { n, k, rows: cur.clone() });
            return;
        }
        let two_n = 2 * n;
        let ls = if i == 0 { 0..=0 } else { 1..=two_n };
        for l in ls {
            let us = if i + 1 == k { 0..=0 } else { 1..=two_n - l };
            for u in us {
                if l + u > two_n {
                    continue;
                }
                let mut row = vec![0; k];
                if i > 0 {
                    row[i - 1] = l;
                }
                row[i] = two_n - l - u;
                if i + 1 < k {
                    row[i + 1] = u;
                }
                cur.push(row);
                rows_from(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
    }
    if n == 0 || k == 0 {
        return Vec::new();
    }
    let mut matrices = Vec::new();
    rows_from(0, n, k, &mut Vec::with_capacity(k), &mut matrices);
    matrices.sort_by(|a, b| a.rows.cmp(&b.rows));
    matrices
        .into_iter()
        .map(|matrix| MatrixCandidate { flags: flags_for(&matrix), matrix })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchConfig {
    pub n: usize,
    pub k: usize,
    pub periods: Vec<usize>,
    /// Without a target every candidate from [`enumerate_matrices`] is tried.
    pub target: Option<ParameterMatrix>,
    pub workers: usize,
    pub budget: u64,
}

impl SearchConfig {
    pub fn new(n: usize, k: usize, periods: Vec<usize>) -> Self {
        Self { n, k, periods, target: None, workers: 1, budget: DEFAULT_BUDGET }
    }

    fn validate(&self) -> Result<(), SearchError> {
        let bad = |s: String| Err(SearchError::InvalidConfig(s));
        if self.n == 0 || self.k == 0 {
            return bad("n and k must be positive".into());
        }
        if self.periods.len() != self.n || self.periods.contains(&0) {
            return bad(format!("need {} positive periods, got {:?}", self.n, self.periods));
        }
        if self.budget == 0 {
            return bad("budget must be positive".into());
        }
        if let Some(t) = &self.target {
            if t.n != self.n || t.k != self.k {
                return bad(format!("target matrix is for n={}, k={}", t.n, t.k));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    Complete,
    BudgetExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Canonical forms, sorted and deduplicated.
    pub colorings: Vec<PeriodicColoring>,
    pub nodes: u64,
    pub status: SearchStatus,
}

struct Budget {
    limit: u64,
    used: AtomicU64,
    exceeded: AtomicBool,
}

impl Budget {
    fn new(limit: u64) -> Self {
        Self { limit, used: AtomicU64::new(0), exceeded: AtomicBool::new(false) }
    }

    /// Adds `nodes`; returns false once the limit is passed.
    fn charge(&self, nodes: u64) -> bool {
        let total = self.used.fetch_add(nodes, Ordering::Relaxed) + nodes;
        if total > self.limit {
            self.exceeded.store(true, Ordering::Relaxed);
        }
        !self.exceeded.load(Ordering::Relaxed)
    }
}

const FLUSH_EVERY: u64 = 1 << 12;

/// Backtracking state for one target matrix on one torus.
struct Engine<'a> {
    degree: usize,
    k: usize,
    neighbors: &'a [usize],
    rows: &'a [usize],
    sizes: &'a [usize],
    colors: Vec<usize>,
    counts: Vec<usize>,
    used: Vec<usize>,
    pending: u64,
    budget: &'a Budget,
    aborted: bool,
}

impl<'a> Engine<'a> {
    fn new(plan: &'a Plan, budget: &'a Budget) -> Self {
        let len = plan.sizes_len;
        Self {
            degree: plan.degree,
            k: plan.k,
            neighbors: &plan.neighbors,
            rows: &plan.rows,
            sizes: &plan.sizes,
            colors: vec![0; len],
            counts: vec![0; len * plan.k],
            used: vec![0; plan.k + 1],
            pending: 0,
            budget,
            aborted: false,
        }
    }

    fn row(&self, color: usize, j: usize) -> usize {
        self.rows[(color - 1) * self.k + (j - 1)]
    }

    fn assign(&mut self, x: usize, c: usize) -> bool {
        self.colors[x] = c;
        self.used[c] += 1;
        let slots = &self.neighbors[x * self.degree..(x + 1) * self.degree];
        for &y in slots {
            self.counts[y * self.k + c - 1] += 1;
        }
        if self.used[c] > self.sizes[c - 1] {
            return false;
        }
        for &y in slots {
            let cy = self.colors[y];
            if cy != 0 && self.counts[y * self.k + c - 1] > self.row(cy, c) {
                return false;
            }
        }
        (1..=self.k).all(|j| self.counts[x * self.k + j - 1] <= self.row(c, j))
    }

    fn unassign(&mut self, x: usize) {
        let c = self.colors[x];
        for &y in &self.neighbors[x * self.degree..(x + 1) * self.degree] {
            self.counts[y * self.k + c - 1] -= 1;
        }
        self.used[c] -= 1;
        self.colors[x] = 0;
    }

    fn tick(&mut self) -> bool {
        self.pending += 1;
        if self.pending >= FLUSH_EVERY {
            let n = std::mem::take(&mut self.pending);
            if !self.budget.charge(n) {
                self.aborted = true;
            }
        }
        !self.aborted
    }

    fn flush(&mut self) {
        let n = std::mem::take(&mut self.pending);
        if !self.budget.charge(n) {
            self.aborted = true;
        }
    }

    /// Visits every consistent completion of cells `depth..stop`.
    fn dfs(&mut self, depth: usize, stop: usize, visit: &mut dyn FnMut(&[usize])) {
        if self.aborted {
            return;
        }
        if depth == stop {
            visit(&self.colors);
            return;
        }
        let choices = if depth == 0 { 1..=1 } else { 1..=self.k };
        for c in choices {
            if !self.tick() {
                return;
            }
            if self.assign(depth, c) {
                self.dfs(depth + 1, stop, visit);
            }
            self.unassign(depth);
            if self.aborted {
                return;
            }
        }
    }
}

/// Precomputed adjacency and targets shared by all workers.
struct Plan {
    degree: usize,
    k: usize,
    sizes_len: usize,
    neighbors: Vec<usize>,
    rows: Vec<usize>,
    sizes: Vec<usize>,
}

impl Plan {
    fn new(torus: &Torus, target: &ParameterMatrix) -> Option<Self> {
        let sizes = target.class_sizes_on(torus.len())?;
        let degree = 2 * torus.n();
        let neighbors = (0..torus.len()).flat_map(|x| torus.neighbors(x).map(|(_, y)| y)).collect();
        Some(Self {
            degree,
            k: target.k,
            sizes_len: torus.len(),
            neighbors,
            rows: target.rows.iter().flatten().copied().collect(),
            sizes,
        })
    }
}

fn verify_found(
    torus: &Torus,
    target: &ParameterMatrix,
    colors: &[usize],
) -> Result<PeriodicColoring, SearchError> {
    let coloring = PeriodicColoring::new(torus.periods().to_vec(), target.k, colors.to_vec())
        .map_err(|e| SearchError::Verification(e.to_string()))?;
    match compute_parameter_matrix(&coloring) {
        Ok(m) if m == *target => {}
        Ok(m) => return Err(SearchError::Verification(format!("found matrix {:?}, wanted {:?}", m.rows, target.rows))),
        Err(w) => return Err(SearchError::Verification(format!("found coloring is not perfect: {w:?}"))),
    }
    if !find_standard_orders(target).is_empty() {
        check_distance_regular(&coloring).map_err(|e| SearchError::Verification(e.to_string()))?;
    }
    Ok(coloring)
}

/// Searches one target on one torus, charging `budget`.
fn search_target(
    torus: &Torus,
    target: &ParameterMatrix,
    workers: usize,
    budget: &Budget,
) -> Result<BTreeSet<PeriodicColoring>, SearchError> {
    let Some(plan) = Plan::new(torus, target) else {
        return Ok(BTreeSet::new());
    };
    let len = torus.len();
    // Split on the first row: the cells whose leading coordinate is 0.
    let split = (len / torus.periods()[0]).max(1);
    let mut prefixes: Vec<Vec<usize>> = Vec::new();
    {
        let mut engine = Engine::new(&plan, budget);
        engine.dfs(0, split, &mut |colors| prefixes.push(colors[..split].to_vec()));
        engine.flush();
        if engine.aborted {
            return Ok(BTreeSet::new());
        }
    }
    if split == len {
        return prefixes.iter().map(|p| verify_found(torus, target, p)).map(|r| r.map(|c| canonical_form(&c))).collect();
    }

    let next = AtomicUsize::new(0);
    let results: Mutex<Result<BTreeSet<PeriodicColoring>, SearchError>> = Mutex::new(Ok(BTreeSet::new()));
    let work = || {
        let mut engine = Engine::new(&plan, budget);
        let mut local = BTreeSet::new();
        let mut error = None;
        loop {
            let i = next.fetch_add(1, Ordering::Relaxed);
            if i >= prefixes.len() || engine.aborted || error.is_some() {
                break;
            }
            for (x, &c) in prefixes[i].iter().enumerate() {
                let ok = engine.assign(x, c);
                debug_assert!(ok);
            }
            engine.dfs(split, len, &mut |colors| {
                if error.is_some() {
                    return;
                }
                match verify_found(torus, target, colors) {
                    Ok(c) => {
                        local.insert(canonical_form(&c));
                    }
                    Err(e) => error = Some(e),
                }
            });
            for x in (0..split).rev() {
                engine.unassign(x);
            }
        }
        engine.flush();
        let mut shared = results.lock().unwrap();
        match (error, &mut *shared) {
            (Some(e), r @ Ok(_)) => *r = Err(e),
            (None, Ok(set)) => set.extend(local),
            _ => {}
        }
    };
    let workers = workers.clamp(1, prefixes.len().max(1));
    if workers == 1 {
        work();
    } else {
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(work);
            }
        });
    }
    results.into_inner().unwrap()
}

/// Backtracking search for colorings realizing the target (or every
/// candidate matrix when no target is set) on the configured torus.
pub fn search_colorings(config: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    config.validate()?;
    let torus = Torus::new(config.periods.clone()).map_err(|e| SearchError::InvalidConfig(e.to_string()))?;
    let targets: Vec<ParameterMatrix> = match &config.target {
        Some(t) => vec![t.clone()],
        None => enumerate_matrices(config.n, config.k).into_iter().map(|c| c.matrix).collect(),
    };
    let budget = Budget::new(config.budget);
    let mut found = BTreeSet::new();
    for target in &targets {
        found.extend(search_target(&torus, target, config.workers, &budget)?);
        if budget.exceeded.load(Ordering::Relaxed) {
            break;
        }
    }
    Ok(SearchOutcome {
        colorings: found.into_iter().collect(),
        nodes: budget.used.load(Ordering::Relaxed),
        status: status_of(&budget),
    })
}

fn status_of(budget: &Budget) -> SearchStatus {
    if budget.exceeded.load(Ordering::Relaxed) {
        SearchStatus::BudgetExceeded
    } else {
        SearchStatus::Complete
    }
}

/// For each color, its new label; index 0 unused.
fn relabelings(coloring: &PeriodicColoring) -> Option<Vec<Vec<usize>>> {
    let matrix = compute_parameter_matrix(coloring).ok()?;
    let orders = find_standard_orders(&matrix);
    if orders.is_empty() {
        return None;
    }
    Some(orders.iter().map(StandardOrder::levels).collect())
}

/// Lexicographically least color array over all translations and color
/// relabelings. Distance regular colorings are relabeled only by their two
/// standard orders, so the result is itself in standard order; any other
/// coloring is relabeled by first occurrence, which is the least choice over
/// all `k!` permutations.
pub fn canonical_form(coloring: &PeriodicColoring) -> PeriodicColoring {
    let torus = coloring.torus();
    let len = coloring.len();
    let n = coloring.n();
    let coords: Vec<Vec<i64>> = (0..len).map(|i| torus.cell(i).0.iter().map(|&x| x as i64).collect()).collect();
    let labelings = relabelings(coloring);
    let mut best: Option<Vec<usize>> = None;
    let mut shifted = vec![0usize; len];
    let mut point = vec![0i64; n];
    for offset in &coords {
        for (x, slot) in shifted.iter_mut().enumerate() {
            for a in 0..n {
                point[a] = coords[x][a] + offset[a];
            }
            *slot = coloring.color_of_point(&point);
        }
        let candidates: Vec<Vec<usize>> = match &labelings {
            Some(ls) => ls.iter().map(|map| shifted.iter().map(|&c| map[c]).collect()).collect(),
            None => {
                let mut map = vec![0usize; coloring.k() + 1];
                let mut next = 0;
                let relabeled = shifted
                    .iter()
                    .map(|&c| {
                        if map[c] == 0 {
                            next += 1;
                            map[c] = next;
                        }
                        map[c]
                    })
                    .collect();
                vec![relabeled]
            }
        };
        for cand in candidates {
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
    }
    PeriodicColoring::new(coloring.periods().to_vec(), coloring.k(), best.expect("torus is nonempty"))
        .expect("relabeling preserves validity")
}

/// The same coloring on its smallest rectangular period.
pub fn minimal_period(coloring: &PeriodicColoring) -> PeriodicColoring {
    let torus = coloring.torus();
    let periods: Vec<usize> = (0..coloring.n())
        .map(|axis| {
            let p = torus.periods()[axis];
            (1..=p)
                .filter(|d| p.is_multiple_of(*d))
                .find(|&d| {
                    (0..coloring.len()).all(|i| {
                        let mut point: Vec<i64> = torus.cell(i).0.iter().map(|&x| x as i64).collect();
                        point[axis] += d as i64;
                        coloring.color_of_point(&point) == coloring.color_at(i)
                    })
                })
                .unwrap_or(p)
        })
        .collect();
    let reduced = PeriodicColoring::from_fn(periods.clone(), |x| {
        let point: Vec<i64> = x.iter().map(|&v| v as i64).collect();
        coloring.color_of_point(&point)
    })
    .expect("reduction keeps every color");
    PeriodicColoring::new(periods, coloring.k(), reduced.colors().to_vec()).expect("same colors")
}

/// Image under an axis permutation (`perm[a]` is the new axis of old axis
/// `a`) composed with reflections of the flagged old axes.
pub fn apply_grid_symmetry(coloring: &PeriodicColoring, perm: &[usize], flips: &[bool]) -> PeriodicColoring {
    let n = coloring.n();
    let mut periods = vec![0; n];
    for a in 0..n {
        periods[perm[a]] = coloring.periods()[a];
    }
    let reordered = PeriodicColoring::from_fn(periods.clone(), |y| {
        let point: Vec<i64> = (0..n)
            .map(|a| {
                let v = y[perm[a]] as i64;
                if flips[a] {
                    -v
                } else {
                    v
                }
            })
            .collect();
        coloring.color_of_point(&point)
    })
    .expect("symmetry keeps every color");
    PeriodicColoring::new(periods, coloring.k(), reordered.colors().to_vec()).expect("same colors")
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for a in 0..used.len() {
            if !used[a] {
                used[a] = true;
                cur.push(a);
                go(cur, used, out);
                cur.pop();
                used[a] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

fn class_key(coloring: &PeriodicColoring) -> (Vec<usize>, Vec<usize>) {
    let c = canonical_form(&minimal_period(coloring));
    (c.periods().to_vec(), c.colors().to_vec())
}

/// Class key up to translations, color relabeling, and grid automorphisms
/// (axis permutations and reflections).
pub fn grid_symmetry_key(coloring: &PeriodicColoring) -> (Vec<usize>, Vec<usize>) {
    let n = coloring.n();
    let mut best = None;
    for perm in permutations(n) {
        for mask in 0..(1u32 << n) {
            let flips: Vec<bool> = (0..n).map(|a| (mask >> a) & 1 == 1).collect();
            let key = class_key(&apply_grid_symmetry(coloring, &perm, &flips));
            if best.as_ref().is_none_or(|b| key < *b) {
                best = Some(key);
            }
        }
    }
    best.expect("at least the identity symmetry")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub representative: PeriodicColoring,
    pub report: DRReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub n: usize,
    pub k: usize,
    pub max_period: usize,
    pub classes: Vec<ClassReport>,
    pub classes_up_to_grid_symmetry: usize,
    pub candidates: usize,
    pub nodes: u64,
    pub status: SearchStatus,
}

/// All period tuples in `1..=max_period`, lexicographic.
pub fn period_tuples(n: usize, max_period: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=max_period).map(move |p| {
                    let mut t = prefix.clone();
                    t.push(p);
                    t
                })
            })
            .collect();
    }
    out
}

/// Distance regular `k`-colorings of `Z^n` with every period at most
/// `max_period`, up to translation and color reordering. Classes are keyed
/// by their canonical minimal-period representative.
pub fn classify(
    n: usize,
    k: usize,
    max_period: usize,
    workers: usize,
    budget: u64,
) -> Result<Classification, SearchError> {
    if n == 0 || k == 0 || max_period == 0 {
        return Err(SearchError::InvalidConfig("n, k and max_period must be positive".into()));
    }
    // A matrix and its reversal describe the same colorings up to relabeling.
    let candidates: Vec<ParameterMatrix> = enumerate_matrices(n, k)
        .into_iter()
        .map(|c| c.matrix)
        .filter(|m| m.reversed().rows >= m.rows)
        .collect();
    let budget = Budget::new(budget);
    let mut classes: BTreeMap<(Vec<usize>, Vec<usize>), PeriodicColoring> = BTreeMap::new();
    'outer: for periods in period_tuples(n, max_period) {
        let torus = Torus::new(periods).expect("positive periods");
        for target in &candidates {
            for found in search_target(&torus, target, workers, &budget)? {
                let rep = canonical_form(&minimal_period(&found));
                classes.entry((rep.periods().to_vec(), rep.colors().to_vec())).or_insert(rep);
            }
            if budget.exceeded.load(Ordering::Relaxed) {
                break 'outer;
            }
        }
    }
    let mut reports = Vec::with_capacity(classes.len());
    let mut symmetric = BTreeSet::new();
    for rep in classes.into_values() {
        let report = check_distance_regular(&rep).map_err(|e| SearchError::Verification(e.to_string()))?;
        validate_color_bound(&report).map_err(|v| SearchError::Verification(v.to_string()))?;
        symmetric.insert(grid_symmetry_key(&rep));
        reports.push(ClassReport { representative: rep, report });
    }
    Ok(Classification {
        n,
        k,
        max_period,
        classes_up_to_grid_symmetry: symmetric.len(),
        classes: reports,
        candidates: candidates.len(),
        nodes: budget.used.load(Ordering::Relaxed),
        status: status_of(&budget),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{gray_lift, lift_reducible, one_dim_pattern, OneDimKind};

    fn rows(m: &[&[usize]]) -> Vec<Vec<usize>> {
        m.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn enumerate_small() {
        let one = enumerate_matrices(1, 1);
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].matrix.rows, vec![vec![2]]);

        let c = enumerate_matrices(1, 3);
        let passing: Vec<_> = c.iter().filter(|c| c.flags.passes_all()).map(|c| c.matrix.rows.clone()).collect();
        for want in [
            rows(&[&[0, 2, 0], &[1, 0, 1], &[0, 2, 0]]),
            rows(&[&[1, 1, 0], &[1, 0, 1], &[0, 2, 0]]),
            rows(&[&[1, 1, 0], &[1, 0, 1], &[0, 1, 1]]),
        ] {
            assert!(passing.contains(&want), "{want:?}");
        }
        // the fourth is the reversal of the left-doubled matrix
        assert_eq!(passing.len(), 4);
        assert!(passing.contains(&rows(&[&[0, 2, 0], &[1, 0, 1], &[0, 1, 1]])));
        let sorted = {
            let mut s = c.clone();
            s.sort_by(|a, b| a.matrix.rows.cmp(&b.matrix.rows));
            s
        };
        assert_eq!(sorted, c);
    }

    #[test]
    fn canonical_form_is_translation_invariant() {
        let g = gray_lift(2).unwrap();
        let base = canonical_form(&g);
        for dx in 0..4 {
            for dy in 0..4 {
                assert_eq!(canonical_form(&g.translate(&[dx, dy])), base);
            }
        }
        let g1 = gray_lift(1).unwrap();
        assert_eq!(canonical_form(&g1.reverse_colors()), canonical_form(&g1));
        assert_eq!(canonical_form(&g1).colors(), &[1, 2, 3, 2]);
    }

    #[test]
    fn canonical_form_of_non_perfect() {
        let c = PeriodicColoring::new(vec![3], 2, vec![2, 1, 2]).unwrap();
        assert_eq!(canonical_form(&c).colors(), &[1, 1, 2]);
    }

    #[test]
    fn minimal_period_reduces() {
        let p = one_dim_pattern(3, OneDimKind::Reflective).unwrap();
        let doubled = PeriodicColoring::new(vec![8], 3, [p.colors(), p.colors()].concat()).unwrap();
        assert_eq!(minimal_period(&doubled), p);
        let stripes = PeriodicColoring::from_fn(vec![4, 4], |x| p.colors()[x[0]]).unwrap();
        assert_eq!(minimal_period(&stripes).periods(), &[4, 1]);
    }

    #[test]
    fn monochromatic_search() {
        let mut cfg = SearchConfig::new(2, 1, vec![3, 2]);
        cfg.target = Some(ParameterMatrix::new(2, vec![vec![4]]).unwrap());
        let out = search_colorings(&cfg).unwrap();
        assert_eq!(out.colorings.len(), 1);
        assert_eq!(out.colorings[0].colors(), &[1; 6]);
        assert_eq!(out.status, SearchStatus::Complete);
    }

    #[test]
    fn stripes_search_finds_lifts_and_product() {
        let target = ParameterMatrix::new(2, rows(&[&[0, 4, 0], &[2, 0, 2], &[0, 4, 0]])).unwrap();
        let mut cfg = SearchConfig::new(2, 3, vec![4, 4]);
        cfg.target = Some(target);
        let out = search_colorings(&cfg).unwrap();
        let p = one_dim_pattern(3, OneDimKind::Reflective).unwrap();
        let mut lifts: BTreeSet<_> = [[1i8, 1], [1, -1]]
            .iter()
            .map(|d| canonical_form(&lift_reducible(&p, d).unwrap()))
            .collect();
        // 1 + (x mod 2) + (y mod 2) has the same matrix
        let product = PeriodicColoring::from_fn(vec![4, 4], |x| 1 + x[0] % 2 + x[1] % 2).unwrap();
        lifts.insert(canonical_form(&product));
        assert_eq!(out.colorings.iter().cloned().collect::<BTreeSet<_>>(), lifts);
    }

    #[test]
    fn budget_is_reported() {
        let target = ParameterMatrix::new(2, rows(&[&[0, 4, 0], &[2, 0, 2], &[0, 4, 0]])).unwrap();
        let mut cfg = SearchConfig::new(2, 3, vec![4, 4]);
        cfg.target = Some(target);
        cfg.budget = 10;
        let out = search_colorings(&cfg).unwrap();
        assert_eq!(out.status, SearchStatus::BudgetExceeded);
    }

    #[test]
    fn config_validation() {
        let mut cfg = SearchConfig::new(2, 3, vec![4]);
        assert!(matches!(search_colorings(&cfg), Err(SearchError::InvalidConfig(_))));
        cfg.periods = vec![4, 4];
        cfg.target = Some(ParameterMatrix::new(1, rows(&[&[0, 2, 0], &[1, 0, 1], &[0, 2, 0]])).unwrap());
        assert!(matches!(search_colorings(&cfg), Err(SearchError::InvalidConfig(_))));
    }

    #[test]
    fn classify_one_dim_two_colors() {
        let c = classify(1, 2, 6, 1, DEFAULT_BUDGET).unwrap();
        let periods: Vec<usize> = c.classes.iter().map(|c| c.representative.periods()[0]).collect();
        assert_eq!(periods, vec![2, 3, 4]);
    }

    #[test]
    fn symmetry_key_merges_rotated_stripes() {
        let p = one_dim_pattern(3, OneDimKind::Reflective).unwrap();
        let a = lift_reducible(&p, &[1, 0]).unwrap();
        let b = lift_reducible(&p, &[0, 1]).unwrap();
        assert_ne!(class_key(&a), class_key(&b));
        assert_eq!(grid_symmetry_key(&a), grid_symmetry_key(&b));
        let d1 = lift_reducible(&p, &[1, 1]).unwrap();
        let d2 = lift_reducible(&p, &[1, -1]).unwrap();
        assert_eq!(grid_symmetry_key(&d1), grid_symmetry_key(&d2));
    }
}
