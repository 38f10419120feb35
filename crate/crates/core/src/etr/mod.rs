//! Existential real-arithmetic encodings of reachability queries, SMT-LIB
//! output and solver answers.

mod encode;
mod formula;
mod smt;

use thiserror::Error;

use crate::model::ModelError;
use crate::quantitative::QuantError;

pub use encode::{
    canonical_assignment, check_witness, encode, encode_boolean, encode_domain, encode_gp,
    encode_pmc, encode_pmc_solution_function, encode_pmdp, encode_strategy_minimality, encode_wd,
    in_domain, induced_with_zero_sinks, p_var, q_var, r_var, strategy_optimality_atoms,
    EncodingRequest, PmdpVariant, Style,
};
pub use formula::{Assignment, Atom, Cmp, Formula};
pub use smt::{
    formula_to_smt, parse_solver_model, to_smt_script, to_smt_script_with, SolverStatus,
    SolverVerdict,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EtrError {
    #[error("expected a parametric Markov chain")]
    NotPmc,
    #[error("encoding variable {0} clashes with a parameter name")]
    NameClash(String),
    #[error("{0}")]
    UnsupportedStyle(String),
    #[error("variable {0} has no value")]
    MissingVariable(String),
    #[error("cannot parse solver output: {0}")]
    UnparseableModel(String),
    #[error(transparent)]
    Quant(#[from] QuantError),
    #[error(transparent)]
    Model(#[from] ModelError),
}
