//! Combined structural report for one coloring.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::distreg::{
    check_distance_regular, validate_color_bound, validate_monotonicity, validate_repeated_triples_shape,
    validate_strictness, DRReport,
};
use crate::perfect::{compute_parameter_matrix, NotPerfectWitness, ParameterMatrix};
use crate::structure::{
    detect_reducible, essential_variables, has_repeated_interior_triples, recover_hyperplane, verify_inclusion,
    verify_lower_upper_lemma, ComponentHyperplane, DirectionSets, Reduction,
};
use crate::torus::PeriodicColoring;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub pass: bool,
    pub detail: Option<String>,
}

impl CheckResult {
    fn from_result<E: ToString>(r: Result<(), E>) -> Self {
        match r {
            Ok(()) => CheckResult { pass: true, detail: None },
            Err(e) => CheckResult { pass: false, detail: Some(e.to_string()) },
        }
    }
}

/// Outcomes of every structural validator on a distance regular coloring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremChecks {
    pub monotonicity: CheckResult,
    pub strictness: CheckResult,
    pub repeated_triples: CheckResult,
    pub inclusion: CheckResult,
    pub lower_upper_lemma: CheckResult,
    pub color_bound: CheckResult,
    /// Repeated interior triples imply a reducible coloring.
    pub reducible_if_repeated: CheckResult,
}

impl TheoremChecks {
    pub fn all_pass(&self) -> bool {
        [
            &self.monotonicity,
            &self.strictness,
            &self.repeated_triples,
            &self.inclusion,
            &self.lower_upper_lemma,
            &self.color_bound,
            &self.reducible_if_repeated,
        ]
        .iter()
        .all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<(&'static str, &CheckResult)> {
        [
            ("monotonicity", &self.monotonicity),
            ("strictness", &self.strictness),
            ("repeated_triples", &self.repeated_triples),
            ("inclusion", &self.inclusion),
            ("lower_upper_lemma", &self.lower_upper_lemma),
            ("color_bound", &self.color_bound),
            ("reducible_if_repeated", &self.reducible_if_repeated),
        ]
        .into_iter()
        .filter(|(_, c)| !c.pass)
        .collect()
    }
}

pub fn theorem_checks(coloring: &PeriodicColoring, report: &DRReport) -> TheoremChecks {
    let triples = &report.triples;
    let strictness = match crate::distreg::compute_segments(triples) {
        Ok(seg) => CheckResult::from_result(validate_strictness(triples, &seg)),
        Err(e) => CheckResult { pass: false, detail: Some(e.to_string()) },
    };
    let reducible_if_repeated = if has_repeated_interior_triples(triples) && report.reducibility.is_none() {
        CheckResult { pass: false, detail: Some("repeated interior triples but no reducing delta".into()) }
    } else {
        CheckResult { pass: true, detail: None }
    };
    TheoremChecks {
        monotonicity: CheckResult::from_result(validate_monotonicity(triples)),
        strictness,
        repeated_triples: CheckResult::from_result(validate_repeated_triples_shape(triples)),
        inclusion: CheckResult::from_result(verify_inclusion(coloring, &report.order)),
        lower_upper_lemma: CheckResult::from_result(verify_lower_upper_lemma(coloring, &report.order)),
        color_bound: CheckResult::from_result(validate_color_bound(report)),
        reducible_if_repeated,
    }
}

/// Histogram of direction-set signatures over the cells of one layer.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerHistogram {
    pub layer: usize,
    pub color: usize,
    pub signatures: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayerHyperplanes {
    pub layer: usize,
    pub components: Vec<ComponentHyperplane>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AnalysisReport {
    pub n: usize,
    pub k: usize,
    pub periods: Vec<usize>,
    pub short_period: bool,
    pub matrix: Option<ParameterMatrix>,
    pub not_perfect: Option<NotPerfectWitness>,
    pub distance_regular: Option<DRReport>,
    pub failure: Option<String>,
    /// 1-based.
    pub essential_axes: Vec<usize>,
    pub cylindrical: bool,
    pub reducibility: Option<Reduction>,
    pub direction_histograms: Vec<LayerHistogram>,
    pub hyperplanes: Vec<LayerHyperplanes>,
    pub checks: Option<TheoremChecks>,
}

pub fn analyze(coloring: &PeriodicColoring) -> AnalysisReport {
    let essential: Vec<usize> = essential_variables(coloring).into_iter().map(|a| a + 1).collect();
    let (matrix, not_perfect) = match compute_parameter_matrix(coloring) {
        Ok(m) => (Some(m), None),
        Err(w) => (None, Some(w)),
    };
    let dr = check_distance_regular(coloring);
    let mut out = AnalysisReport {
        n: coloring.n(),
        k: coloring.k(),
        periods: coloring.periods().to_vec(),
        short_period: coloring.has_short_period(),
        matrix,
        not_perfect,
        distance_regular: None,
        failure: None,
        cylindrical: essential.len() < coloring.n(),
        essential_axes: essential,
        reducibility: detect_reducible(coloring),
        direction_histograms: Vec::new(),
        hyperplanes: Vec::new(),
        checks: None,
    };
    let report = match dr {
        Ok(r) => r,
        Err(e) => {
            out.failure = Some(e.to_string());
            return out;
        }
    };
    let levels = report.order.levels();
    let mut hist: Vec<BTreeMap<String, usize>> = vec![BTreeMap::new(); coloring.k()];
    for index in 0..coloring.len() {
        let cell = coloring.torus().cell(index);
        let sets: DirectionSets = crate::structure::direction_sets(coloring, &report.order, &cell)
            .expect("accepted colorings are layered");
        *hist[levels[coloring.color_at(index)] - 1].entry(sets.signature()).or_insert(0) += 1;
    }
    out.direction_histograms = hist
        .into_iter()
        .enumerate()
        .map(|(p, signatures)| LayerHistogram { layer: p + 1, color: report.order.colors()[p], signatures })
        .collect();
    for layer in 1..report.k {
        if report.triples[layer - 1] == report.triples[layer] {
            if let Ok(components) = recover_hyperplane(coloring, &report.order, layer) {
                out.hyperplanes.push(LayerHyperplanes { layer, components });
            }
        }
    }
    out.checks = Some(theorem_checks(coloring, &report));
    out.distance_regular = Some(report);
    out
}
