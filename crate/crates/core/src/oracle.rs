//! Brute-force ground truth: exact evaluation on grids of valuations.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};

use crate::etr::{canonical_assignment, encode, in_domain, EncodingRequest, EtrError, Formula};
use crate::model::{instantiate, ModelKind, ParametricModel};
use crate::polyalg::{format_rational, rat, Polynomial, Rational, Valuation};
use crate::qualitative::ParameterLayout;
use crate::quantitative::deciding_value;
use crate::types::{Quantifier, Relop};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GridKind {
    /// `k / (n + 1)` for `k = 1..n`.
    GpInterior,
    /// `k / n` for `k = 0..n`.
    WdClosed,
    /// `0` and `1`.
    Boolean,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    pub resolution: u32,
    pub kind: GridKind,
}

impl GridSpec {
    pub fn new(resolution: u32, kind: GridKind) -> GridSpec {
        GridSpec { resolution, kind }
    }

    /// Sample values for a single parameter, increasing.
    pub fn values(&self) -> Vec<Rational> {
        let n = self.resolution.max(1) as i64;
        match self.kind {
            GridKind::GpInterior => (1..=n).map(|k| rat(k, n + 1)).collect(),
            GridKind::WdClosed => (0..=n).map(|k| rat(k, n)).collect(),
            GridKind::Boolean => vec![Rational::zero(), Rational::one()],
        }
    }

    /// All grid valuations of `params`, the first parameter varying slowest.
    pub fn valuations(&self, params: &[String]) -> Vec<Valuation> {
        let values = self.values();
        let mut out = vec![Valuation::new()];
        for p in params {
            out = out
                .into_iter()
                .flat_map(|v| {
                    values.iter().map(move |x| {
                        let mut w = v.clone();
                        w.insert(p.clone(), x.clone());
                        w
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleWitness {
    pub val: Valuation,
    pub value: Rational,
    pub verdict: bool,
}

/// A grid point where an encoding disagrees with exact evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub val: Valuation,
    pub expected: bool,
    pub encoded: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OracleReport {
    pub checked: usize,
    pub witnesses: Vec<OracleWitness>,
    pub counterexamples: Vec<Counterexample>,
}

fn valuation_json(val: &Valuation) -> Value {
    Value::Object(
        val.iter()
            .map(|(k, v)| (k.clone(), Value::String(format_rational(v))))
            .collect(),
    )
}

impl OracleReport {
    pub fn to_json(&self) -> Value {
        json!({
            "checked": self.checked,
            "witnesses": self.witnesses.iter().map(|w| json!({
                "val": valuation_json(&w.val),
                "value": format_rational(&w.value),
                "verdict": w.verdict,
            })).collect::<Vec<_>>(),
            "counterexamples": self.counterexamples.iter().map(|c| json!({
                "val": valuation_json(&c.val),
                "expected": c.expected,
                "encoded": c.encoded,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Exact decision at every well-defined grid point. Points that do not
/// give a well-defined instantiation are skipped and not counted. The
/// witnesses are the points where the comparison holds.
pub fn sweep(
    model: &ParametricModel,
    quantifier: Quantifier,
    relop: Relop,
    threshold: &Rational,
    grid: &GridSpec,
) -> OracleReport {
    let mut report = OracleReport::default();
    for val in grid.valuations(&model.params) {
        let Ok((value, _)) = deciding_value(model, &val, quantifier, relop) else {
            continue;
        };
        report.checked += 1;
        if relop.holds(&value, threshold) {
            report.witnesses.push(OracleWitness {
                val,
                value,
                verdict: true,
            });
        }
    }
    report
}

/// Truth of the query at `val`: inside the domain and the exact deciding
/// value meets 1/2.
pub fn expected_answer(
    model: &ParametricModel,
    val: &Valuation,
    req: &EncodingRequest,
) -> Result<bool, EtrError> {
    if !in_domain(model, val, req.domain)? {
        return Ok(false);
    }
    let (value, _) = deciding_value(model, val, req.quantifier, req.relop)?;
    Ok(req.relop.holds(&value, &rat(1, 2)))
}

/// Compares `formula` under the canonical assignment of `aux_req` with
/// the truth of `truth_req` at every grid point.
pub fn cross_check_formula(
    model: &ParametricModel,
    formula: &Formula,
    aux_req: &EncodingRequest,
    truth_req: &EncodingRequest,
    grid: &GridSpec,
) -> Result<OracleReport, EtrError> {
    let mut report = OracleReport::default();
    for val in grid.valuations(&model.params) {
        let asg = canonical_assignment(model, &val, aux_req)?;
        let encoded = formula.eval(&asg)?;
        let expected = expected_answer(model, &val, truth_req)?;
        report.checked += 1;
        if expected {
            let (value, _) = deciding_value(model, &val, truth_req.quantifier, truth_req.relop)?;
            report.witnesses.push(OracleWitness {
                val: val.clone(),
                value,
                verdict: true,
            });
        }
        if encoded != expected {
            report.counterexamples.push(Counterexample {
                val,
                expected,
                encoded,
            });
        }
    }
    Ok(report)
}

/// The encoding of `req` evaluated under canonical auxiliary values must
/// agree with exact evaluation at every grid point.
pub fn cross_check(
    model: &ParametricModel,
    req: &EncodingRequest,
    grid: &GridSpec,
) -> Result<OracleReport, EtrError> {
    let formula = encode(model, req)?;
    cross_check_formula(model, &formula, req, req, grid)
}

/// Cross-check of a deliberately wrong encoding: the one for the mirrored
/// comparison (`<=` for `>=`, `<` for `>`), judged against `req`.
pub fn cross_check_mirrored(
    model: &ParametricModel,
    req: &EncodingRequest,
    grid: &GridSpec,
) -> Result<OracleReport, EtrError> {
    let mirrored = EncodingRequest {
        relop: req.relop.flip(),
        ..*req
    };
    let formula = encode(model, &mirrored)?;
    cross_check_formula(model, &formula, &mirrored, req, grid)
}

/// Whether the instantiation at `val` is well-defined.
pub fn is_well_defined(model: &ParametricModel, val: &Valuation) -> bool {
    instantiate(model, val).is_ok()
}

/// A random well-defined valuation for a model with the given layout.
/// Every value is a multiple of `1 / denominator`; group members get a
/// uniformly random composition of one.
pub fn random_wd_valuation<R: Rng>(
    layout: &ParameterLayout,
    rng: &mut R,
    denominator: u32,
) -> Valuation {
    let d = denominator.max(1) as i64;
    let mut val = Valuation::new();
    for p in layout.bernoulli.iter().chain(&layout.free) {
        val.insert(p.clone(), rat(rng.gen_range(0..=d), d));
    }
    for members in &layout.groups {
        let mut cuts: Vec<i64> = (1..members.len()).map(|_| rng.gen_range(0..=d)).collect();
        cuts.push(0);
        cuts.push(d);
        cuts.sort_unstable();
        for (k, p) in members.iter().enumerate() {
            val.insert(p.clone(), rat(cuts[k + 1] - cuts[k], d));
        }
    }
    val
}

/// A random simple model: every row is either a single successor, a
/// Bernoulli split `x` / `1 - x` over one parameter, or a constant split.
/// The first parameter is `x`, the second `y`.
pub fn random_simple_model<R: Rng>(
    rng: &mut R,
    kind: ModelKind,
    max_states: usize,
    max_params: usize,
) -> ParametricModel {
    let n = rng.gen_range(2..=max_states.max(2));
    let names = ["x", "y", "z", "w"];
    let num_params = rng.gen_range(1..=max_params.clamp(1, names.len()));
    let params: Vec<String> = names[..num_params].iter().map(|s| s.to_string()).collect();
    let states: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
    let mut targets = std::collections::BTreeSet::new();
    targets.insert(rng.gen_range(1..n));
    let actions = match kind {
        ModelKind::Pmc => vec![crate::model::CHAIN_ACTION.to_string()],
        ModelKind::Pmdp => vec!["a".to_string(), "b".to_string()],
    };
    let mut choices = Vec::with_capacity(n);
    for _ in 0..n {
        let k = match kind {
            ModelKind::Pmc => 1,
            ModelKind::Pmdp => rng.gen_range(1..=2),
        };
        let mut row = Vec::new();
        for a in 0..k {
            let mut succ: Vec<usize> = (0..n).collect();
            succ.shuffle(rng);
            let transitions = match rng.gen_range(0..4) {
                0 => vec![(succ[0], Polynomial::one())],
                1 | 2 => {
                    let x = &params[rng.gen_range(0..num_params)];
                    vec![
                        (succ[0], Polynomial::var(x)),
                        (succ[1], Polynomial::one_minus(x)),
                    ]
                }
                _ => {
                    let c = rat(rng.gen_range(1..4), 4);
                    vec![
                        (succ[0], Polynomial::constant(c.clone())),
                        (succ[1], Polynomial::constant(Rational::one() - c)),
                    ]
                }
            };
            row.push(crate::model::Choice {
                action: a,
                transitions,
            });
        }
        choices.push(row);
    }
    ParametricModel {
        kind,
        params,
        states,
        actions,
        init: 0,
        targets,
        choices,
    }
}
