#![allow(dead_code)]

use gridreg::PeriodicColoring;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Colors indexed row-major with the last coordinate fastest, read through
/// plain integer points of `Z^n`.
pub struct Grid {
    pub periods: Vec<usize>,
    pub k: usize,
    pub cells: Vec<usize>,
}

impl Grid {
    pub fn of(c: &PeriodicColoring) -> Self {
        Grid { periods: c.periods().to_vec(), k: c.k(), cells: c.colors().to_vec() }
    }

    pub fn at(&self, point: &[i64]) -> usize {
        let mut idx = 0usize;
        for (x, &p) in point.iter().zip(&self.periods) {
            idx = idx * p + x.rem_euclid(p as i64) as usize;
        }
        self.cells[idx]
    }

    pub fn points(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &p in &self.periods {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..p as i64).map(move |x| {
                        let mut v = prefix.clone();
                        v.push(x);
                        v
                    })
                })
                .collect();
        }
        out
    }

    pub fn counts(&self, point: &[i64]) -> Vec<usize> {
        let mut counts = vec![0; self.k];
        for axis in 0..point.len() {
            for step in [1i64, -1] {
                let mut q = point.to_vec();
                q[axis] += step;
                counts[self.at(&q) - 1] += 1;
            }
        }
        counts
    }
}

pub enum Verdict {
    Perfect(Vec<Vec<usize>>),
    /// first cell of the color, first disagreeing cell, color
    NotPerfect(Vec<usize>, Vec<usize>, usize),
}

/// Recounts neighbor colors point by point in `Z^n`.
pub fn oracle_verdict(c: &PeriodicColoring) -> Verdict {
    let g = Grid::of(c);
    let mut rows: Vec<Option<(Vec<i64>, Vec<usize>)>> = vec![None; g.k];
    for p in g.points() {
        let color = g.at(&p);
        let counts = g.counts(&p);
        match &rows[color - 1] {
            None => rows[color - 1] = Some((p, counts)),
            Some((first, want)) if *want != counts => {
                let as_usize = |v: &[i64]| v.iter().map(|&x| x as usize).collect();
                return Verdict::NotPerfect(as_usize(first), as_usize(&p), color);
            }
            _ => {}
        }
    }
    Verdict::Perfect(rows.into_iter().map(|r| r.unwrap().1).collect())
}

/// BFS distances from color-1 points computed by repeated relaxation on
/// integer points.
pub fn oracle_distances(c: &PeriodicColoring, source_color: usize) -> Vec<usize> {
    let g = Grid::of(c);
    let pts = g.points();
    let idx = |p: &[i64]| {
        let mut i = 0usize;
        for (x, &per) in p.iter().zip(&g.periods) {
            i = i * per + x.rem_euclid(per as i64) as usize;
        }
        i
    };
    let mut d: Vec<usize> = pts.iter().map(|p| if g.at(p) == source_color { 0 } else { usize::MAX }).collect();
    loop {
        let mut changed = false;
        for p in &pts {
            for axis in 0..p.len() {
                for step in [1i64, -1] {
                    let mut q = p.clone();
                    q[axis] += step;
                    let (a, b) = (idx(p), idx(&q));
                    if d[b] != usize::MAX && d[b] + 1 < d[a] {
                        d[a] = d[b] + 1;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            return d;
        }
    }
}

pub fn random_coloring(rng: &mut ChaCha8Rng, n: usize, max_period: usize, max_k: usize) -> PeriodicColoring {
    loop {
        let periods: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=max_period)).collect();
        let len: usize = periods.iter().product();
        let k = rng.gen_range(1..=max_k.min(len));
        let cells: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=k)).collect();
        if let Ok(c) = PeriodicColoring::new(periods, k, cells) {
            return c;
        }
    }
}
