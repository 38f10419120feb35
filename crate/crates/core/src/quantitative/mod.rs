//! Exact reachability: numeric values at a valuation and symbolic
//! solution functions.

mod elimination;
mod exact;

use thiserror::Error;

use crate::model::{instantiate, ModelError, ParametricModel, Strategy};
use crate::polyalg::{PolyError, Rational, Valuation};
use crate::types::{Mode, Quantifier, Relop};

pub use elimination::{
    per_state_solution_functions, solution_function, solution_function_with, EliminationLimits,
};
pub use exact::{
    enumerate_extremum, mc_reach_exact, mc_reach_values, mdp_reach_extremum_exact, Extremum,
    SELF_CHECK_STATES,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuantError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("expected a Markov chain")]
    NotAChain,
    #[error("linear system is singular")]
    Singular,
    #[error("state elimination exceeded the size limit ({0} terms)")]
    EliminationBlowup(usize),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

/// Value deciding `quantifier σ. Pr^σ(reach) relop threshold` at `val`,
/// with the optimal strategy for models with choices.
pub fn deciding_value(
    model: &ParametricModel,
    val: &Valuation,
    quantifier: Quantifier,
    relop: Relop,
) -> Result<(Rational, Option<Strategy>), QuantError> {
    let concrete = instantiate(model, val)?;
    if concrete.is_chain() {
        return Ok((mc_reach_exact(&concrete)?, None));
    }
    let mode = Mode::deciding(quantifier, relop);
    let ext = mdp_reach_extremum_exact(&concrete, mode)?;
    Ok((ext.values[concrete.init].clone(), Some(ext.strategy)))
}

/// Decides `quantifier σ. Pr^σ(reach) relop threshold` at a well-defined
/// valuation.
pub fn compare_at(
    model: &ParametricModel,
    val: &Valuation,
    quantifier: Quantifier,
    relop: Relop,
    threshold: &Rational,
) -> Result<bool, QuantError> {
    let (v, _) = deciding_value(model, val, quantifier, relop)?;
    Ok(relop.holds(&v, threshold))
}
