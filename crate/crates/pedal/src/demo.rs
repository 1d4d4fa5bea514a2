//! The packaged two-state demonstration: three credence claims on a
//! measured model, the bounds optimum, and the validity-based bound, all
//! checked against their expected exact values.
//!
//! The scenario: an agent is 3/5 sure that `G(A -> [p]B)` and 3/5 sure
//! that `G(C -> [q]D)`, and asks how confident to be in
//! `G [(?A;p)+(?C;q)](B|D)`. Over the two-state frame below the tight
//! answer is exactly 1/5.
//!
//! The demo prints two weight readings for the three-valuation model.
//! The headline credences (3/5, 3/5, 1/5) require the weights
//! `v1 -> 2/5, v2 -> 1/5, v3 -> 2/5`; assigning 2/5, 2/5, 1/5 instead
//! (reading the valuation list in display order) yields 4/5 for the
//! first claim, so the demo reports both.

use std::collections::BTreeMap;

use crate::bounds::{frechet_lower_bound, solve_bounds, BoundsLimits, BoundsQuery, BoundsResult};
use crate::credence::{Cell, PedalModel};
use crate::decision::DecisionLimits;
use crate::kripke::{Frame, ProgramValuation, Relation, StateSet};
use crate::rational::{format_rational, rat, Rational};
use crate::syntax::{parse_credence, parse_formula, Formula, Signature};

pub const CLAIM_AB: &str = "G(A -> [p]B)";
pub const CLAIM_CD: &str = "G(C -> [q]D)";
pub const CLAIM_MIX: &str = "G [(?A;p)+(?C;q)](B|D)";

pub fn signature() -> Signature {
    Signature::new(["A", "B", "C", "D"], ["p", "q"])
}

/// Two states: `s = 0` satisfies `A` and `C`, `t = 1` satisfies `B` and
/// `D`; the global relation is universal.
pub fn frame() -> Frame {
    let mut vf = BTreeMap::new();
    vf.insert("A".to_string(), StateSet::from_states(2, [0]));
    vf.insert("B".to_string(), StateSet::from_states(2, [1]));
    vf.insert("C".to_string(), StateSet::from_states(2, [0]));
    vf.insert("D".to_string(), StateSet::from_states(2, [1]));
    Frame::new(2, vf, Relation::universal(2))
}

/// The three displayed valuations: `v1` sends `p` across and loops `q`,
/// `v2` sends both across, `v3` mirrors `v1`.
pub fn valuations() -> [ProgramValuation; 3] {
    let v = |p: &[(usize, usize)], q: &[(usize, usize)]| -> ProgramValuation {
        let mut m = BTreeMap::new();
        m.insert("p".to_string(), Relation::from_pairs(2, p.iter().copied()));
        m.insert("q".to_string(), Relation::from_pairs(2, q.iter().copied()));
        m
    };
    [
        v(&[(0, 1)], &[(0, 0)]),
        v(&[(0, 1)], &[(0, 1)]),
        v(&[(0, 0)], &[(0, 1)]),
    ]
}

fn model_with_weights(weights: [Rational; 3]) -> PedalModel {
    let [v1, v2, v3] = valuations();
    PedalModel::new(
        frame(),
        vec![
            Cell { weight: weights[0].clone(), valuations: vec![v1] },
            Cell { weight: weights[1].clone(), valuations: vec![v2] },
            Cell { weight: weights[2].clone(), valuations: vec![v3] },
        ],
    )
}

/// Weights that reproduce the headline credences 3/5, 3/5, 1/5.
pub fn model_corrected() -> PedalModel {
    model_with_weights([rat(2, 5), rat(1, 5), rat(2, 5)])
}

/// Weights read off the display order (2/5, 2/5, 1/5); the first claim
/// then carries credence 4/5.
pub fn model_display_order() -> PedalModel {
    model_with_weights([rat(2, 5), rat(2, 5), rat(1, 5)])
}

#[derive(Debug, Clone)]
pub struct DemoReport {
    /// `(formula, credence)` at state `s` with the corrected weights.
    pub corrected: Vec<(String, Rational)>,
    /// Same claims with the display-order weights.
    pub display_order: Vec<(String, Rational)>,
    pub bound_min: Rational,
    pub bound_attained: bool,
    pub frechet: Rational,
    /// Whether every value equals its expected exact value.
    pub ok: bool,
}

fn claims(sig: &Signature) -> Vec<Formula> {
    [CLAIM_AB, CLAIM_CD, CLAIM_MIX]
        .iter()
        .map(|text| parse_formula(text, sig).expect("demo formulas parse"))
        .collect()
}

/// Run the whole scenario and compare against the expected values.
pub fn run_demo() -> DemoReport {
    let sig = signature();
    let claims = claims(&sig);

    let corrected_model = model_corrected();
    let corrected: Vec<(String, Rational)> = claims
        .iter()
        .map(|f| (f.to_string(), corrected_model.mu(0, f)))
        .collect();

    let display_model = model_display_order();
    let display_order: Vec<(String, Rational)> = claims
        .iter()
        .map(|f| (f.to_string(), display_model.mu(0, f)))
        .collect();

    let query = BoundsQuery {
        frame: frame(),
        state: 0,
        constraints: vec![
            parse_credence(&format!("P({CLAIM_AB}) >= 3/5"), &sig).expect("parses"),
            parse_credence(&format!("P({CLAIM_CD}) >= 3/5"), &sig).expect("parses"),
        ],
        query: claims[2].clone(),
    };
    let (bound_min, bound_attained) =
        match solve_bounds(&query, &BoundsLimits::default()).expect("demo bounds solve") {
            BoundsResult::Bounded(b) => (b.minimum, b.min_attained),
            BoundsResult::Infeasible => (rat(-1, 1), false),
        };

    let frechet = frechet_lower_bound(
        &[
            (claims[0].clone(), rat(3, 5)),
            (claims[1].clone(), rat(3, 5)),
        ],
        &claims[2],
        &DecisionLimits::default(),
    )
    .expect("demo frechet")
    .unwrap_or_else(|| rat(-1, 1));

    let ok = corrected.iter().map(|(_, v)| v.clone()).collect::<Vec<_>>()
        == vec![rat(3, 5), rat(3, 5), rat(1, 5)]
        && display_order[0].1 == rat(4, 5)
        && bound_min == rat(1, 5)
        && bound_attained
        && frechet == rat(1, 5);

    DemoReport {
        corrected,
        display_order,
        bound_min,
        bound_attained,
        frechet,
        ok,
    }
}

impl DemoReport {
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str("two-state demonstration (s = 0, t = 1, universal rbox)\n");
        out.push_str("credences with weights v1 -> 2/5, v2 -> 1/5, v3 -> 2/5:\n");
        for (formula, value) in &self.corrected {
            out.push_str(&format!("  mu(s, {formula}) = {}\n", format_rational(value)));
        }
        out.push_str("display-order weights v1 -> 2/5, v2 -> 2/5, v3 -> 1/5 instead give:\n");
        for (formula, value) in &self.display_order {
            out.push_str(&format!("  mu(s, {formula}) = {}\n", format_rational(value)));
        }
        out.push_str(&format!(
            "min credence = {}; frechet = {}; attained = {}\n",
            format_rational(&self.bound_min),
            format_rational(&self.frechet),
            self.bound_attained,
        ));
        out.push_str(&format!(
            "expected values {}\n",
            if self.ok { "reproduced" } else { "NOT reproduced" }
        ));
        out
    }

    pub fn render_json(&self) -> String {
        let claim = |pairs: &[(String, Rational)]| -> serde_json::Value {
            serde_json::Value::Object(
                pairs
                    .iter()
                    .map(|(f, v)| (f.clone(), serde_json::Value::String(format_rational(v))))
                    .collect(),
            )
        };
        let value = serde_json::json!({
            "correctedWeights": claim(&self.corrected),
            "displayOrderWeights": claim(&self.display_order),
            "min": format_rational(&self.bound_min),
            "minAttained": self.bound_attained,
            "frechet": format_rational(&self.frechet),
            "ok": self.ok,
        });
        serde_json::to_string_pretty(&value).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::credence::validate_pedal;

    #[test]
    fn the_demo_reproduces_every_expected_value() {
        let report = run_demo();
        assert!(report.ok, "{}", report.render_text());
        assert_eq!(report.corrected[0].1, rat(3, 5));
        assert_eq!(report.corrected[1].1, rat(3, 5));
        assert_eq!(report.corrected[2].1, rat(1, 5));
        assert_eq!(report.display_order[0].1, rat(4, 5));
        assert_eq!(report.bound_min, rat(1, 5));
        assert_eq!(report.frechet, rat(1, 5));
    }

    #[test]
    fn both_models_validate() {
        assert!(validate_pedal(&model_corrected()).is_empty());
        assert!(validate_pedal(&model_display_order()).is_empty());
    }

    #[test]
    fn renderings_mention_the_key_numbers() {
        let report = run_demo();
        let text = report.render_text();
        assert!(text.contains("min credence = 1/5"));
        assert!(text.contains("frechet = 1/5"));
        let json = report.render_json();
        assert!(json.contains("\"min\": \"1/5\""));
    }
}
