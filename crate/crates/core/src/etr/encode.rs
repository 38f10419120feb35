//! Reachability queries as existential real-arithmetic formulas.
//!
//! Per state `s` the encodings use a real `p_s` for the reachability
//! probability, a Boolean `q_s` for "the target is reached with positive
//! probability" and a real rank `r_s` that strictly decreases along a path
//! towards the targets. The threshold inside an encoding is always 1/2.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::graph::{can_reach, exists_distance, forall_attractor, target_mask};
use crate::model::{instantiate, ParametricModel, Strategy};
use crate::polyalg::{rat, Polynomial, Rational, Valuation};
use crate::quantitative::{
    mc_reach_values, mdp_reach_extremum_exact, per_state_solution_functions, solution_function,
};
use crate::types::{Domain, Mode, Quantifier, Relop};

use super::formula::{positive_at_half, Assignment, Cmp, Formula};
use super::EtrError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Style {
    /// Variables per state and one equation (or inequation) per state.
    Equations,
    /// Only the parameters, via the solution function (chains and
    /// graph-preserving valuations only).
    SolutionFunction,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingRequest {
    pub quantifier: Quantifier,
    pub relop: Relop,
    pub domain: Domain,
    pub style: Style,
}

/// Which of the four nondeterministic encodings applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PmdpVariant {
    ExistsUpper,
    ExistsLower,
    ForallUpper,
    ForallLower,
}

impl PmdpVariant {
    pub fn of(quantifier: Quantifier, relop: Relop) -> PmdpVariant {
        match (quantifier, relop.is_upper()) {
            (Quantifier::Exists, true) => PmdpVariant::ExistsUpper,
            (Quantifier::Exists, false) => PmdpVariant::ExistsLower,
            (Quantifier::Forall, true) => PmdpVariant::ForallUpper,
            (Quantifier::Forall, false) => PmdpVariant::ForallLower,
        }
    }

    pub fn mode(self) -> Mode {
        match self {
            PmdpVariant::ExistsUpper | PmdpVariant::ForallLower => Mode::Min,
            PmdpVariant::ExistsLower | PmdpVariant::ForallUpper => Mode::Max,
        }
    }

    /// Whether positivity needs a rank-decreasing successor under every
    /// action (otherwise under some action).
    fn positivity_for_all_actions(self) -> bool {
        self.mode() == Mode::Min
    }
}

pub fn p_var(model: &ParametricModel, s: usize) -> String {
    format!("p_{}", model.states[s])
}

pub fn q_var(model: &ParametricModel, s: usize) -> String {
    format!("q_{}", model.states[s])
}

pub fn r_var(model: &ParametricModel, s: usize) -> String {
    format!("r_{}", model.states[s])
}

fn check_names(model: &ParametricModel) -> Result<(), EtrError> {
    let params: BTreeSet<&String> = model.params.iter().collect();
    for s in 0..model.num_states() {
        for name in [p_var(model, s), q_var(model, s), r_var(model, s)] {
            if params.contains(&name) {
                return Err(EtrError::NameClash(name));
            }
        }
    }
    Ok(())
}

fn half() -> Polynomial {
    Polynomial::constant(rat(1, 2))
}

fn zero() -> Polynomial {
    Polynomial::zero()
}

fn one() -> Polynomial {
    Polynomial::one()
}

/// Every non-zero label lies in `[0, 1]` and every row sums to one.
pub fn encode_wd(model: &ParametricModel) -> Formula {
    let mut parts = Vec::new();
    for row in model.choices.iter().flatten() {
        let mut sum = Polynomial::zero();
        for (_, label) in &row.transitions {
            parts.push(Formula::atom(zero(), Cmp::Le, label.clone()));
            parts.push(Formula::atom(label.clone(), Cmp::Le, one()));
            sum += label;
        }
        parts.push(Formula::atom(sum, Cmp::Eq, one()));
    }
    Formula::and(parts)
}

/// [`encode_wd`] plus strict positivity of every non-constant label.
pub fn encode_gp(model: &ParametricModel) -> Formula {
    let strict = model
        .labels()
        .filter(|(_, l)| !l.is_constant())
        .map(|(_, l)| Formula::atom(l.clone(), Cmp::Gt, zero()))
        .collect::<Vec<_>>();
    Formula::and(std::iter::once(encode_wd(model)).chain(strict))
}

/// [`encode_wd`] plus `x * (1 - x) = 0` for every parameter.
pub fn encode_boolean(model: &ParametricModel) -> Formula {
    let pins = model.params.iter().map(|x| {
        Formula::atom(
            &Polynomial::var(x) * &Polynomial::one_minus(x),
            Cmp::Eq,
            zero(),
        )
    });
    Formula::and(std::iter::once(encode_wd(model)).chain(pins.collect::<Vec<_>>()))
}

pub fn encode_domain(model: &ParametricModel, domain: Domain) -> Formula {
    match domain {
        Domain::Wd => encode_wd(model),
        Domain::Gp => encode_gp(model),
        Domain::Boolean => encode_boolean(model),
    }
}

struct Vars<'a> {
    model: &'a ParametricModel,
}

impl Vars<'_> {
    fn p(&self, s: usize) -> Polynomial {
        Polynomial::var(&p_var(self.model, s))
    }

    fn r(&self, s: usize) -> Polynomial {
        Polynomial::var(&r_var(self.model, s))
    }

    fn q(&self, s: usize) -> Formula {
        Formula::boolean(q_var(self.model, s))
    }

    /// `sum_{s'} P(s, c, s') * p_{s'}`
    fn expectation(&self, s: usize, c: usize) -> Polynomial {
        let mut sum = Polynomial::zero();
        for (t, label) in &self.model.choices[s][c].transitions {
            sum += &(label * &self.p(*t));
        }
        sum
    }

    /// `OR_{s'} (P(s, c, s') > 0 AND q_{s'} [AND r_s > r_{s'}])`
    fn progress(&self, s: usize, c: usize, ranked: bool) -> Formula {
        Formula::or(
            self.model.choices[s][c]
                .transitions
                .iter()
                .map(|(t, label)| {
                    let mut parts = vec![Formula::atom(label.clone(), Cmp::Gt, zero()), self.q(*t)];
                    if ranked {
                        parts.push(Formula::atom(self.r(s), Cmp::Gt, self.r(*t)));
                    }
                    Formula::and(parts)
                })
                .collect::<Vec<_>>(),
        )
    }

    /// Positivity condition over the actions of `s`, conjunctive or
    /// disjunctive.
    fn positivity(&self, s: usize, all_actions: bool, ranked: bool) -> Formula {
        let per_action = (0..self.model.choices[s].len()).map(|c| self.progress(s, c, ranked));
        if all_actions {
            Formula::and(per_action.collect::<Vec<_>>())
        } else {
            Formula::or(per_action.collect::<Vec<_>>())
        }
    }

    /// `q_s` holds exactly for the states with positive reachability:
    /// `q_s <-> positivity-with-rank`, and the unranked positivity forces
    /// `q_s` so that `q` cannot undershoot.
    fn positivity_constraints(&self, s: usize, all_actions: bool) -> Formula {
        Formula::and([
            Formula::iff(self.q(s), self.positivity(s, all_actions, true)),
            Formula::implies(self.positivity(s, all_actions, false), self.q(s)),
        ])
    }

    fn target_constraints(&self, s: usize) -> Formula {
        Formula::and([self.q(s), Formula::atom(self.p(s), Cmp::Eq, one())])
    }

    fn threshold(&self, relop: Relop) -> Formula {
        Formula::atom(self.p(self.model.init), relop.into(), half())
    }
}

fn require_chain(model: &ParametricModel) -> Result<(), EtrError> {
    if model.is_pmc() {
        Ok(())
    } else {
        Err(EtrError::NotPmc)
    }
}

/// Chain encoding. On graph-preserving valuations the zero states are
/// fixed by the graph; otherwise positivity flags and ranks determine them.
pub fn encode_pmc(
    model: &ParametricModel,
    relop: Relop,
    domain: Domain,
) -> Result<Formula, EtrError> {
    require_chain(model)?;
    check_names(model)?;
    let v = Vars { model };
    let targets = target_mask(model.num_states(), &model.targets);
    let mut parts = Vec::new();
    if domain == Domain::Gp {
        let positive = can_reach(&model.underlying_graph(), &targets);
        for s in 0..model.num_states() {
            parts.push(if targets[s] {
                Formula::atom(v.p(s), Cmp::Eq, one())
            } else if !positive[s] {
                Formula::atom(v.p(s), Cmp::Eq, zero())
            } else {
                Formula::atom(v.p(s), Cmp::Eq, v.expectation(s, 0))
            });
        }
    } else {
        for (s, &is_target) in targets.iter().enumerate() {
            if is_target {
                parts.push(v.target_constraints(s));
                continue;
            }
            parts.push(v.positivity_constraints(s, true));
            parts.push(Formula::implies(
                Formula::not(v.q(s)),
                Formula::atom(v.p(s), Cmp::Eq, zero()),
            ));
            parts.push(Formula::implies(
                v.q(s),
                Formula::atom(v.p(s), Cmp::Eq, v.expectation(s, 0)),
            ));
        }
    }
    parts.push(v.threshold(relop));
    parts.push(encode_domain(model, domain));
    Ok(Formula::and(parts))
}

/// Sign-split comparison of the solution function `f / g` against 1/2,
/// over the parameters only, conjoined with graph preservation.
pub fn encode_pmc_solution_function(
    model: &ParametricModel,
    relop: Relop,
) -> Result<Formula, EtrError> {
    require_chain(model)?;
    let sf = solution_function(model)?;
    let f = sf.num().clone();
    let g = sf.den().clone();
    let half_g = g.scale(&rat(1, 2));
    let cmp: Cmp = relop.into();
    let flipped: Cmp = relop.flip().into();
    let split = Formula::or([
        Formula::and([
            Formula::atom(g.clone(), Cmp::Gt, zero()),
            Formula::atom(f.clone(), cmp, half_g.clone()),
        ]),
        Formula::and([
            Formula::atom(g, Cmp::Lt, zero()),
            Formula::atom(f, flipped, half_g),
        ]),
    ]);
    Ok(Formula::and([split, encode_gp(model)]))
}

/// The four nondeterministic encodings, selected by quantifier and
/// direction of the comparison.
pub fn encode_pmdp(
    model: &ParametricModel,
    quantifier: Quantifier,
    relop: Relop,
    domain: Domain,
) -> Result<Formula, EtrError> {
    check_names(model)?;
    let variant = PmdpVariant::of(quantifier, relop);
    let v = Vars { model };
    let targets = target_mask(model.num_states(), &model.targets);
    let mut parts = Vec::new();
    for (s, &is_target) in targets.iter().enumerate() {
        if is_target {
            parts.push(v.target_constraints(s));
            continue;
        }
        parts.push(v.positivity_constraints(s, variant.positivity_for_all_actions()));
        parts.push(Formula::implies(
            Formula::not(v.q(s)),
            Formula::atom(v.p(s), Cmp::Eq, zero()),
        ));
        let actions = 0..model.choices[s].len();
        let bellman = match variant {
            PmdpVariant::ExistsUpper => Formula::or(
                actions
                    .map(|c| Formula::atom(v.p(s), Cmp::Eq, v.expectation(s, c)))
                    .collect::<Vec<_>>(),
            ),
            // The chosen action must itself make progress, otherwise an end
            // component could carry any value.
            PmdpVariant::ExistsLower => Formula::or(
                actions
                    .map(|c| {
                        Formula::and([
                            Formula::atom(v.p(s), Cmp::Eq, v.expectation(s, c)),
                            v.progress(s, c, true),
                        ])
                    })
                    .collect::<Vec<_>>(),
            ),
            PmdpVariant::ForallUpper => Formula::and(
                actions
                    .map(|c| Formula::atom(v.p(s), Cmp::Ge, v.expectation(s, c)))
                    .collect::<Vec<_>>(),
            ),
            PmdpVariant::ForallLower => Formula::and(
                actions
                    .map(|c| Formula::atom(v.p(s), Cmp::Le, v.expectation(s, c)))
                    .collect::<Vec<_>>(),
            ),
        };
        parts.push(Formula::implies(v.q(s), bellman));
    }
    parts.push(v.threshold(relop));
    parts.push(encode_domain(model, domain));
    Ok(Formula::and(parts))
}

/// Dispatches on model kind and style.
pub fn encode(model: &ParametricModel, req: &EncodingRequest) -> Result<Formula, EtrError> {
    match req.style {
        Style::SolutionFunction => {
            if !model.is_pmc() || req.domain != Domain::Gp {
                return Err(EtrError::UnsupportedStyle(
                    "the solution-function style needs a chain and the gp domain".into(),
                ));
            }
            encode_pmc_solution_function(model, req.relop)
        }
        Style::Equations => {
            if model.is_pmc() {
                encode_pmc(model, req.relop, req.domain)
            } else {
                encode_pmdp(model, req.quantifier, req.relop, req.domain)
            }
        }
    }
}

/// Canonical values of the auxiliary variables at `val`: exact optimal
/// probabilities, positivity flags and a rank fitting the encoding. Returns
/// the parameter values alone when `val` is not well-defined.
pub fn canonical_assignment(
    model: &ParametricModel,
    val: &Valuation,
    req: &EncodingRequest,
) -> Result<Assignment, EtrError> {
    let mut asg = Assignment {
        reals: val.clone(),
        bools: Default::default(),
    };
    if req.style == Style::SolutionFunction {
        return Ok(asg);
    }
    let Ok(concrete) = instantiate(model, val) else {
        return Ok(asg);
    };
    let n = model.num_states();
    let targets = target_mask(n, &model.targets);
    let topo = concrete.topology();
    let (values, rank): (Vec<Rational>, Vec<Option<usize>>) = if model.is_pmc() {
        (
            mc_reach_values(&concrete)?,
            exists_distance(&topo, &targets),
        )
    } else {
        let variant = PmdpVariant::of(req.quantifier, req.relop);
        let ext = mdp_reach_extremum_exact(&concrete, variant.mode())?;
        let rank = match variant {
            PmdpVariant::ExistsUpper | PmdpVariant::ForallLower => {
                forall_attractor(&topo, &targets)
            }
            PmdpVariant::ForallUpper => exists_distance(&topo, &targets),
            PmdpVariant::ExistsLower => {
                // Distance to the targets using value-attaining actions only.
                let optimal: Vec<Vec<Vec<usize>>> = (0..n)
                    .map(|s| {
                        concrete.choices[s]
                            .iter()
                            .filter(|ch| {
                                let e =
                                    ch.transitions.iter().fold(Rational::zero(), |acc, (t, p)| {
                                        acc + p * &ext.values[*t]
                                    });
                                e == ext.values[s]
                            })
                            .map(|ch| ch.transitions.iter().map(|(t, _)| *t).collect())
                            .collect()
                    })
                    .collect();
                exists_distance(&optimal, &targets)
            }
        };
        (ext.values, rank)
    };
    for s in 0..n {
        asg.reals.insert(p_var(model, s), values[s].clone());
        asg.bools.insert(q_var(model, s), !values[s].is_zero());
        let r = rank[s].unwrap_or(n + 1);
        asg.reals
            .insert(r_var(model, s), Rational::from_integer(r.into()));
    }
    Ok(asg)
}

/// States whose optimal value is zero on graph-preserving valuations.
fn zero_states(model: &ParametricModel, mode: Mode) -> Vec<bool> {
    let targets = target_mask(model.num_states(), &model.targets);
    let topo = model.underlying_graph();
    match mode {
        Mode::Min => forall_attractor(&topo, &targets)
            .iter()
            .map(|l| l.is_none())
            .collect(),
        Mode::Max => can_reach(&topo, &targets).iter().map(|r| !r).collect(),
    }
}

/// The chain induced by `strategy` with the zero states of `mode` turned
/// into non-target sinks.
pub fn induced_with_zero_sinks(
    model: &ParametricModel,
    strategy: &Strategy,
    mode: Mode,
) -> Result<ParametricModel, EtrError> {
    let sinks = zero_states(model, mode);
    let mut pmc = model.induced_pmc(strategy)?;
    for (s, z) in sinks.iter().enumerate() {
        if *z {
            pmc.choices[s][0].transitions = vec![(s, Polynomial::one())];
        }
    }
    Ok(pmc)
}

/// Cross-multiplied Bellman optimality conditions for `strategy`. With
/// `h_s / g_s` the per-state solution functions of the induced chain
/// (zero states made sinks, each `g_s` positive at the all-1/2 point),
/// the atoms say `h_s / g_s <= sum P(s, a, s') h_{s'} / g_{s'}` for every
/// action `a` (`>=` for `Mode::Max`), plus `g_s > 0` for every state.
/// Returns the atoms and the pair `(h_init, g_init)`.
pub fn strategy_optimality_atoms(
    model: &ParametricModel,
    strategy: &Strategy,
    mode: Mode,
) -> Result<(Vec<Formula>, (Polynomial, Polynomial)), EtrError> {
    let pmc = induced_with_zero_sinks(model, strategy, mode)?;
    let sinks = zero_states(model, mode);
    let n = model.num_states();
    let fractions: Vec<(Polynomial, Polynomial)> = per_state_solution_functions(&pmc)?
        .into_iter()
        .map(|rf| {
            let (num, den) = rf.into_parts();
            let (flipped, den) = positive_at_half(&den);
            (if flipped { -num } else { num }, den)
        })
        .collect();
    let others = |s: usize| -> Polynomial {
        (0..n)
            .filter(|&o| o != s)
            .fold(Polynomial::one(), |acc, o| &acc * &fractions[o].1)
    };
    let scaled: Vec<Polynomial> = (0..n).map(|s| &fractions[s].0 * &others(s)).collect();
    let cmp = match mode {
        Mode::Min => Cmp::Le,
        Mode::Max => Cmp::Ge,
    };
    let mut atoms: Vec<Formula> = fractions
        .iter()
        .map(|(_, g)| Formula::atom(g.clone(), Cmp::Gt, zero()))
        .collect();
    for s in 0..n {
        if model.targets.contains(&s) || sinks[s] {
            continue;
        }
        for ch in &model.choices[s] {
            let mut rhs = Polynomial::zero();
            for (t, label) in &ch.transitions {
                rhs += &(label * &scaled[*t]);
            }
            atoms.push(Formula::atom(scaled[s].clone(), cmp, rhs));
        }
    }
    let init = fractions[model.init].clone();
    Ok((atoms, init))
}

/// Certificate that `strategy` is optimal for the universal quantifier and
/// meets the threshold at the initial state, on graph-preserving
/// valuations.
pub fn encode_strategy_minimality(
    model: &ParametricModel,
    strategy: &Strategy,
    relop: Relop,
) -> Result<Formula, EtrError> {
    let mode = Mode::deciding(Quantifier::Forall, relop);
    let (atoms, (h, g)) = strategy_optimality_atoms(model, strategy, mode)?;
    let threshold = Formula::atom(h, relop.into(), g.scale(&rat(1, 2)));
    Ok(Formula::and(
        atoms
            .into_iter()
            .chain([threshold, encode_gp(model)])
            .collect::<Vec<_>>(),
    ))
}

/// Exact re-verification of a candidate valuation.
pub fn check_witness(
    model: &ParametricModel,
    quantifier: Quantifier,
    relop: Relop,
    threshold: &Rational,
    val: &Valuation,
) -> Result<bool, EtrError> {
    Ok(crate::quantitative::compare_at(
        model, val, quantifier, relop, threshold,
    )?)
}

/// Whether `val` lies in the valuation domain.
pub fn in_domain(
    model: &ParametricModel,
    val: &Valuation,
    domain: Domain,
) -> Result<bool, EtrError> {
    let report = crate::model::classify_valuation(model, val)?;
    Ok(match domain {
        Domain::Wd => report.well_defined,
        Domain::Gp => report.graph_preserving,
        Domain::Boolean => report.well_defined && report.boolean,
    })
}
