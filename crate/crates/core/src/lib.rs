//! Parameter synthesis for parametric Markov chains (pMCs) and parametric
//! Markov decision processes (pMDPs).
//!
//! Transition probabilities are polynomials over rational coefficients.
//! The crate answers questions of the form "is there a valuation of the
//! parameters under which the probability of reaching the targets meets a
//! threshold", in several ways:
//!
//! * [`quantitative`] evaluates instantiated models exactly and computes
//!   solution functions by state elimination.
//! * [`qualitative`] decides the threshold-0 and threshold-1 questions on
//!   the underlying graph.
//! * [`etr`] encodes threshold queries as existential real arithmetic and
//!   prints them as SMT-LIB scripts for an external solver ([`solver`]).
//! * [`reductions`] builds the gadget models that relate these problems
//!   to polynomial inequalities and 3-SAT.
//! * [`oracle`] cross-checks encodings against exact evaluation on grids.
//!
//! All arithmetic is exact ([`polyalg::Rational`] is a big rational).

pub mod cli;
pub mod etr;
pub mod graph;
pub mod io;
pub mod model;
pub mod oracle;
pub mod polyalg;
pub mod qualitative;
pub mod quantitative;
pub mod reductions;
pub mod solver;
pub mod types;
