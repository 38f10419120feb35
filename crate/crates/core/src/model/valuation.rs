use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::model::{Choice, ConcreteModel, ModelError, ParametricModel, TransitionRef};
use crate::polyalg::{Rational, Valuation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValuationClass {
    /// Well-defined and no non-zero label vanishes.
    GraphPreserving,
    /// Well-defined, every parameter in {0, 1}, some label vanishes.
    Boolean,
    /// Well-defined but not graph-preserving.
    WellDefined,
    NotWellDefined(String),
}

/// Result of [`classify_valuation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValuationReport {
    pub class: ValuationClass,
    pub well_defined: bool,
    pub graph_preserving: bool,
    /// Every parameter of the model is mapped to 0 or 1.
    pub boolean: bool,
    /// Transitions whose label evaluates to zero.
    pub vanish: BTreeSet<TransitionRef>,
}

/// Evaluates every label of `model` at `val` and classifies the valuation.
pub fn classify_valuation(
    model: &ParametricModel,
    val: &Valuation,
) -> Result<ValuationReport, ModelError> {
    for p in &model.params {
        if !val.contains_key(p) {
            return Err(ModelError::Poly(
                crate::polyalg::PolyError::MissingParameter(p.clone()),
            ));
        }
    }
    let mut vanish = BTreeSet::new();
    let mut reason: Option<String> = None;
    for (s, chs) in model.choices.iter().enumerate() {
        for (c, ch) in chs.iter().enumerate() {
            let mut sum = Rational::zero();
            for (t, label) in &ch.transitions {
                let v = label.eval(val)?;
                if v.is_zero() {
                    vanish.insert(TransitionRef {
                        state: s,
                        choice: c,
                        succ: *t,
                    });
                } else if v < Rational::zero() && reason.is_none() {
                    reason = Some(format!(
                        "label {} on {} [{}] -> {} evaluates to {}",
                        label, model.states[s], model.actions[ch.action], model.states[*t], v
                    ));
                }
                sum += v;
            }
            if !sum.is_one() && reason.is_none() {
                reason = Some(format!(
                    "row {} [{}] sums to {}",
                    model.states[s], model.actions[ch.action], sum
                ));
            }
        }
    }
    let boolean = model
        .params
        .iter()
        .all(|p| val[p].is_zero() || val[p].is_one());
    let class = match (&reason, vanish.is_empty(), boolean) {
        (Some(r), _, _) => ValuationClass::NotWellDefined(r.clone()),
        (None, true, _) => ValuationClass::GraphPreserving,
        (None, false, true) => ValuationClass::Boolean,
        (None, false, false) => ValuationClass::WellDefined,
    };
    Ok(ValuationReport {
        well_defined: reason.is_none(),
        graph_preserving: reason.is_none() && vanish.is_empty(),
        boolean,
        class,
        vanish,
    })
}

/// Instantiates a well-defined valuation. Vanishing transitions are dropped.
pub fn instantiate(model: &ParametricModel, val: &Valuation) -> Result<ConcreteModel, ModelError> {
    let mut choices = Vec::with_capacity(model.states.len());
    for (s, chs) in model.choices.iter().enumerate() {
        let mut row = Vec::with_capacity(chs.len());
        for ch in chs {
            let mut sum = Rational::zero();
            let mut transitions = Vec::with_capacity(ch.transitions.len());
            for (t, label) in &ch.transitions {
                let v = label.eval(val)?;
                if v < Rational::zero() {
                    return Err(ModelError::NotWellDefined(format!(
                        "label {} on {} -> {} evaluates to {}",
                        label, model.states[s], model.states[*t], v
                    )));
                }
                sum += &v;
                if !v.is_zero() {
                    transitions.push((*t, v));
                }
            }
            if !sum.is_one() {
                return Err(ModelError::NotWellDefined(format!(
                    "row {} [{}] sums to {}",
                    model.states[s], model.actions[ch.action], sum
                )));
            }
            row.push(Choice {
                action: ch.action,
                transitions,
            });
        }
        choices.push(row);
    }
    Ok(ConcreteModel {
        states: model.states.clone(),
        actions: model.actions.clone(),
        init: model.init,
        targets: model.targets.clone(),
        choices,
    })
}
