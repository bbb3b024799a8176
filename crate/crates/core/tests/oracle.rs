mod common;

use std::collections::BTreeSet;

use gridreg::search::{minimal_period, period_tuples, DEFAULT_BUDGET};
use gridreg::*;

/// Every coloring of every small torus, filtered by distance regularity.
fn brute_force_classes(n: usize, k: usize, max_period: usize) -> BTreeSet<PeriodicColoring> {
    let mut out = BTreeSet::new();
    for periods in period_tuples(n, max_period) {
        let len: usize = periods.iter().product();
        let total = k.pow(len as u32);
        for code in 0..total {
            let mut rest = code;
            let cells: Vec<usize> = (0..len)
                .map(|_| {
                    let c = rest % k + 1;
                    rest /= k;
                    c
                })
                .collect();
            let Ok(c) = PeriodicColoring::new(periods.clone(), k, cells) else { continue };
            if check_distance_regular(&c).is_ok() {
                out.insert(canonical_form(&minimal_period(&c)));
            }
        }
    }
    out
}

#[test]
fn classify_matches_brute_force() {
    for (n, k, max_period) in [(1, 2, 6), (1, 3, 6), (1, 4, 8), (2, 2, 3), (2, 3, 3), (2, 2, 4)] {
        let got: BTreeSet<_> = classify(n, k, max_period, 2, DEFAULT_BUDGET)
            .unwrap()
            .classes
            .into_iter()
            .map(|c| c.representative)
            .collect();
        assert_eq!(got, brute_force_classes(n, k, max_period), "n={n} k={k} max_period={max_period}");
    }
}

#[test]
fn search_matches_brute_force_on_one_torus() {
    let target = ParameterMatrix::new(2, vec![vec![0, 4, 0], vec![2, 0, 2], vec![0, 4, 0]]).unwrap();
    let mut cfg = SearchConfig::new(2, 3, vec![4, 4]);
    cfg.target = Some(target.clone());
    let got: BTreeSet<_> = search_colorings(&cfg).unwrap().colorings.into_iter().collect();
    let mut want = BTreeSet::new();
    // cell 0 pinned to color 1 as in the search
    for code in 0..3usize.pow(15) {
        let mut rest = code;
        let cells: Vec<usize> = std::iter::once(1)
            .chain((0..15).map(|_| {
                let c = rest % 3 + 1;
                rest /= 3;
                c
            }))
            .collect();
        let Ok(c) = PeriodicColoring::new(vec![4, 4], 3, cells) else { continue };
        if let common::Verdict::Perfect(rows) = common::oracle_verdict(&c) {
            if rows == target.rows {
                want.insert(canonical_form(&c));
            }
        }
    }
    assert_eq!(got, want);
}

#[test]
fn random_colorings_agree_with_recount() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..300 {
        let c = common::random_coloring(&mut rng, 3, 3, 3);
        match (common::oracle_verdict(&c), compute_parameter_matrix(&c)) {
            (common::Verdict::Perfect(rows), Ok(m)) => assert_eq!(rows, m.rows),
            (common::Verdict::NotPerfect(a, b, color), Err(w)) => {
                assert_eq!((w.cell_a.0, w.cell_b.0, w.color), (a, b, color));
            }
            _ => panic!("verdicts differ on {c:?}"),
        }
    }
}
