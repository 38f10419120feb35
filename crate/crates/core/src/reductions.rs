//! Model constructions that transfer one decision problem into another.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::{Cnf3, PolySystem};
use crate::model::{Choice, ModelBuilder, ModelError, ModelKind, ParametricModel, CHAIN_ACTION};
use crate::polyalg::{rat, Polynomial, Rational, Valuation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("threshold {0} is not strictly between 0 and 1")]
    ThresholdOutOfRange(Rational),
    #[error("model is not simple: {0}")]
    NotSimple(String),
    #[error("constant polynomial has no parameter to absorb a positive constant")]
    NoParameters,
    #[error("polynomial system is empty")]
    EmptySystem,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Picks a name not in `taken` and reserves it.
fn fresh(base: &str, taken: &mut BTreeSet<String>) -> String {
    let mut name = base.to_string();
    let mut k = 1;
    while taken.contains(&name) {
        name = format!("{base}_{k}");
        k += 1;
    }
    taken.insert(name.clone());
    name
}

fn add_state(model: &mut ParametricModel, name: String) -> usize {
    model.states.push(name);
    model.choices.push(Vec::new());
    model.states.len() - 1
}

fn action_id(model: &mut ParametricModel, name: &str) -> usize {
    let name = if model.kind == ModelKind::Pmc {
        CHAIN_ACTION
    } else {
        name
    };
    match model.actions.iter().position(|a| a == name) {
        Some(i) => i,
        None => {
            model.actions.push(name.to_string());
            model.actions.len() - 1
        }
    }
}

fn set_row(
    model: &mut ParametricModel,
    s: usize,
    action: &str,
    transitions: Vec<(usize, Polynomial)>,
) {
    let a = action_id(model, action);
    let transitions = transitions
        .into_iter()
        .filter(|(_, p)| !p.is_zero())
        .collect();
    model.choices[s] = vec![Choice {
        action: a,
        transitions,
    }];
}

/// Prepends a state that moves to the old initial state with probability
/// 1/2 and otherwise splits the remaining mass so that the new value is
/// `1/2 * old + 1/2 * (1 - lambda)`. Accepts `0 <= lambda < 1`.
fn shift_threshold(model: &ParametricModel, lambda: &Rational) -> ParametricModel {
    let mut m = model.clone();
    let mut taken: BTreeSet<String> = m.states.iter().cloned().collect();
    let init = add_state(&mut m, fresh("shift_init", &mut taken));
    let goal = add_state(&mut m, fresh("shift_goal", &mut taken));
    let sink = add_state(&mut m, fresh("shift_sink", &mut taken));
    let half = rat(1, 2);
    let old = m.init;
    set_row(
        &mut m,
        init,
        CHAIN_ACTION,
        vec![
            (old, Polynomial::constant(half.clone())),
            (
                goal,
                Polynomial::constant(&half * (Rational::one() - lambda)),
            ),
            (sink, Polynomial::constant(&half * lambda)),
        ],
    );
    set_row(&mut m, goal, CHAIN_ACTION, vec![(goal, Polynomial::one())]);
    set_row(&mut m, sink, CHAIN_ACTION, vec![(sink, Polynomial::one())]);
    m.targets.insert(goal);
    m.init = init;
    m
}

/// Rewrites `Pr ⋈ lambda` into `Pr' ⋈ 1/2`: the new model satisfies
/// `Pr' = 1/2 * Pr + 1/2 * (1 - lambda)` for every valuation and strategy.
pub fn normalize_threshold(
    model: &ParametricModel,
    lambda: &Rational,
) -> Result<ParametricModel, ReductionError> {
    if !lambda.is_positive() || *lambda >= Rational::one() {
        return Err(ReductionError::ThresholdOutOfRange(lambda.clone()));
    }
    Ok(shift_threshold(model, lambda))
}

/// Prepends, per parameter `x`, two states `s_x` (loop `x`, exit `1 - x`)
/// and `s'_x` (loop `1 - x`, exit `x`). Reachability is unchanged on
/// graph-preserving valuations and zero on every other well-defined one.
pub fn gp_gadget(model: &ParametricModel) -> Result<ParametricModel, ReductionError> {
    if let Some(reason) = model.simplicity_violation() {
        return Err(ReductionError::NotSimple(reason));
    }
    let mut m = model.clone();
    let mut taken: BTreeSet<String> = m.states.iter().cloned().collect();
    let mut next = m.init;
    for x in model.params.iter().rev() {
        let a = add_state(&mut m, fresh(&format!("gp_{x}_a"), &mut taken));
        let b = add_state(&mut m, fresh(&format!("gp_{x}_b"), &mut taken));
        set_row(
            &mut m,
            a,
            CHAIN_ACTION,
            vec![(a, Polynomial::var(x)), (b, Polynomial::one_minus(x))],
        );
        set_row(
            &mut m,
            b,
            CHAIN_ACTION,
            vec![(b, Polynomial::one_minus(x)), (next, Polynomial::var(x))],
        );
        next = a;
    }
    m.init = next;
    Ok(m)
}

/// `a * prod x^e[x] * prod (1 - x)^e'[x]`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonNegTerm {
    pub a: Rational,
    pub e: BTreeMap<String, u32>,
    pub e_prime: BTreeMap<String, u32>,
}

impl NonNegTerm {
    /// The factors in chain order: per parameter, the `1 - x` factors
    /// before the `x` factors.
    pub fn factors(&self) -> Vec<Polynomial> {
        let vars: BTreeSet<&String> = self.e.keys().chain(self.e_prime.keys()).collect();
        let mut out = Vec::new();
        for v in vars {
            for _ in 0..self.e_prime.get(v).copied().unwrap_or(0) {
                out.push(Polynomial::one_minus(v));
            }
            for _ in 0..self.e.get(v).copied().unwrap_or(0) {
                out.push(Polynomial::var(v));
            }
        }
        out
    }

    pub fn product(&self) -> Polynomial {
        self.factors()
            .iter()
            .fold(Polynomial::one(), |acc, f| &acc * f)
    }

    pub fn polynomial(&self) -> Polynomial {
        self.product().scale(&self.a)
    }
}

/// `f = sum_i a_i h_i + b` with `a_i > 0`, `h_i` products of `x` and
/// `1 - x`, and `b <= 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonNegCombination {
    pub terms: Vec<NonNegTerm>,
    pub b: Rational,
}

impl NonNegCombination {
    pub fn expand(&self) -> Polynomial {
        let mut p = Polynomial::constant(self.b.clone());
        for t in &self.terms {
            p += &t.polynomial();
        }
        p
    }
}

fn sorted_factors(m: &crate::polyalg::Monomial) -> Vec<String> {
    m.factors()
        .iter()
        .flat_map(|(v, e)| std::iter::repeat_n(v.to_string(), *e as usize))
        .collect()
}

/// Rewrites `-x_1 ... x_d` as `-1 + sum_i (1 - x_i) x_{i+1} ... x_d` for
/// every negative term. A positive constant is absorbed as `b*x + b*(1-x)`
/// with the alphabetically first parameter of `f`.
pub fn rewrite_nonneg_combination(f: &Polynomial) -> Result<NonNegCombination, ReductionError> {
    let mut terms = Vec::new();
    let mut b = Rational::zero();
    for (m, c) in f.terms() {
        if m.is_one() {
            b += c;
            continue;
        }
        if c.is_positive() {
            terms.push(NonNegTerm {
                a: c.clone(),
                e: m.factors()
                    .iter()
                    .map(|(v, e)| (v.to_string(), *e))
                    .collect(),
                e_prime: BTreeMap::new(),
            });
            continue;
        }
        let a = -c.clone();
        let xs = sorted_factors(m);
        for i in 0..xs.len() {
            let mut e: BTreeMap<String, u32> = BTreeMap::new();
            for x in &xs[i + 1..] {
                *e.entry(x.clone()).or_insert(0) += 1;
            }
            terms.push(NonNegTerm {
                a: a.clone(),
                e,
                e_prime: [(xs[i].clone(), 1)].into_iter().collect(),
            });
        }
        b -= &a;
    }
    if b.is_positive() {
        let Some(x) = f.vars().into_iter().next() else {
            return Err(ReductionError::NoParameters);
        };
        let x = x.to_string();
        terms.push(NonNegTerm {
            a: b.clone(),
            e: [(x.clone(), 1)].into_iter().collect(),
            e_prime: BTreeMap::new(),
        });
        terms.push(NonNegTerm {
            a: b.clone(),
            e: BTreeMap::new(),
            e_prime: [(x, 1)].into_iter().collect(),
        });
        b = Rational::zero();
    }
    Ok(NonNegCombination { terms, b })
}

/// A simple acyclic pMC whose solution function is `(f + a_shift) / b_scale`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyPmcResult {
    pub pmc: ParametricModel,
    pub a_shift: Rational,
    pub b_scale: Rational,
}

/// Builds a tree of coin chains, one per term of the non-negative
/// combination of `f`. Leftover probability mass goes to a sink. The
/// parameters of the result are `params` plus any variable of `f`.
pub fn poly_to_pmc(f: &Polynomial, params: &[String]) -> PolyPmcResult {
    let (terms, b) = match rewrite_nonneg_combination(f) {
        Ok(c) => (c.terms, c.b),
        Err(_) => (Vec::new(), f.constant_term()),
    };
    let a_shift = if b.is_negative() {
        -b.clone()
    } else {
        Rational::zero()
    };
    let b_prime = &b + &a_shift;
    let sum_a: Rational = terms.iter().fold(Rational::zero(), |acc, t| acc + &t.a);
    let b_scale = &sum_a + &b_prime + Rational::one();

    let mut builder = ModelBuilder::new(ModelKind::Pmc);
    builder.params(params);
    for v in f.vars() {
        builder.param(&v);
    }
    builder.init("init");
    let c = |x: &Rational| Polynomial::constant(x / &b_scale);
    for (i, t) in terms.iter().enumerate() {
        let i = i + 1;
        let factors = t.factors();
        let goal = format!("goal{i}");
        let step = |j: usize| {
            if j < factors.len() {
                format!("t{i}_{}", j + 1)
            } else {
                goal.clone()
            }
        };
        builder.transition_poly("init", "", &step(0), c(&t.a));
        for (j, label) in factors.iter().enumerate() {
            let here = step(j);
            builder.transition_poly(&here, "", &step(j + 1), label.clone());
            builder.transition_poly(&here, "", "sink", &Polynomial::one() - label);
        }
        builder.transition_poly(&goal, "", &goal, Polynomial::one());
        builder.target(&goal);
    }
    if b_prime.is_positive() {
        builder.transition_poly("init", "", "goal0", c(&b_prime));
        builder.transition_poly("goal0", "", "goal0", Polynomial::one());
        builder.target("goal0");
    }
    builder.transition_poly("init", "", "sink", c(&Rational::one()));
    builder.transition_poly("sink", "", "sink", Polynomial::one());
    let pmc = builder
        .build()
        .expect("polynomial chain construction is valid");
    PolyPmcResult {
        pmc,
        a_shift,
        b_scale,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sat3Variant {
    /// Acyclic clause chain; satisfiable iff target reachable with
    /// positive probability at some Boolean valuation.
    Positive,
    /// Variable gadget chain plus clause fan; satisfiable iff target
    /// reached almost surely at some well-defined valuation.
    AlmostSure,
    /// Clause chain closed into a loop with the failure state as target;
    /// satisfiable iff target missed with positive probability.
    Unsure,
}

pub fn coin_param(var: usize) -> String {
    format!("xt{var}")
}

pub fn choice_param(clause: usize, pos: usize) -> String {
    format!("y_{clause}_{pos}")
}

fn encode_literal(lit: i32) -> (Polynomial, Polynomial) {
    let x = coin_param(lit.unsigned_abs() as usize);
    if lit > 0 {
        (Polynomial::var(&x), Polynomial::one_minus(&x))
    } else {
        (Polynomial::one_minus(&x), Polynomial::var(&x))
    }
}

/// Builds the model of a 3-CNF for the chosen variant.
pub fn sat3_to_pmc(cnf: &Cnf3, variant: Sat3Variant) -> ParametricModel {
    let k = cnf.num_vars;
    let m = cnf.clauses.len();
    let mut b = ModelBuilder::new(ModelKind::Pmc);
    b.params((1..=k).map(coin_param));
    for i in 1..=m {
        b.params((1..=3).map(|j| choice_param(i, j)));
    }
    match variant {
        Sat3Variant::Positive | Sat3Variant::Unsure => {
            let c = |i: usize| format!("c{i}");
            b.init(&c(1));
            for (i0, clause) in cnf.clauses.iter().enumerate() {
                let i = i0 + 1;
                for (j0, &lit) in clause.iter().enumerate() {
                    let l = format!("l_{i}_{}", j0 + 1);
                    b.transition_poly(&c(i), "", &l, Polynomial::var(&choice_param(i, j0 + 1)));
                    let (enc, not_enc) = encode_literal(lit);
                    b.transition_poly(&l, "", &c(i + 1), enc);
                    b.transition_poly(&l, "", "bot", not_enc);
                }
            }
            if variant == Sat3Variant::Positive {
                b.transition_poly(&c(m + 1), "", &c(m + 1), Polynomial::one());
                b.target(&c(m + 1));
                if !b.has_state("bot") {
                    b.state("bot");
                }
                b.transition_poly("bot", "", "bot", Polynomial::one());
            } else {
                if m == 0 {
                    b.transition_poly(&c(1), "", &c(1), Polynomial::one());
                } else {
                    b.transition_poly(&c(m + 1), "", &c(1), Polynomial::one());
                }
                b.transition_poly("bot", "", "bot", Polynomial::one());
                b.target("bot");
            }
        }
        Sat3Variant::AlmostSure => {
            let v = |i: usize| format!("v{i}");
            b.init(&v(0));
            for i in 1..=k {
                let x = coin_param(i);
                let pos = format!("x{i}");
                let neg = format!("nx{i}");
                b.transition_poly(&v(i - 1), "", &pos, Polynomial::var(&x));
                b.transition_poly(&v(i - 1), "", &neg, Polynomial::one_minus(&x));
                b.transition_poly(&pos, "", &v(i), Polynomial::var(&x));
                b.transition_poly(&pos, "", "bot", Polynomial::one_minus(&x));
                b.transition_poly(&neg, "", &v(i), Polynomial::one_minus(&x));
                b.transition_poly(&neg, "", "bot", Polynomial::var(&x));
            }
            let share = Polynomial::constant(rat(1, m as i64 + 1));
            for j in 1..=m {
                b.transition_poly(&v(k), "", &format!("c{j}"), share.clone());
            }
            b.transition_poly(&v(k), "", "T", share);
            for (j0, clause) in cnf.clauses.iter().enumerate() {
                let j = j0 + 1;
                let mut merged: Vec<(String, Polynomial)> = Vec::new();
                for (r0, &lit) in clause.iter().enumerate() {
                    let var = lit.unsigned_abs();
                    let state = if lit > 0 {
                        format!("x{var}")
                    } else {
                        format!("nx{var}")
                    };
                    let y = Polynomial::var(&choice_param(j, r0 + 1));
                    match merged.iter_mut().find(|(s, _)| *s == state) {
                        Some((_, p)) => *p += &y,
                        None => merged.push((state, y)),
                    }
                }
                for (state, label) in merged {
                    b.transition_poly(&format!("c{j}"), "", &state, label);
                }
            }
            b.transition_poly("T", "", "T", Polynomial::one());
            b.transition_poly("bot", "", "bot", Polynomial::one());
            b.target("T");
        }
    }
    b.build().expect("3-CNF construction is valid")
}

/// The Boolean valuation encoding `assignment`, selecting in every clause
/// the first literal made true (or the first literal if none is).
pub fn sat3_valuation(cnf: &Cnf3, assignment: &[bool]) -> Valuation {
    let mut val = Valuation::new();
    for (i, &a) in assignment.iter().enumerate() {
        val.insert(coin_param(i + 1), if a { rat(1, 1) } else { rat(0, 1) });
    }
    for (i0, clause) in cnf.clauses.iter().enumerate() {
        let pick = clause
            .iter()
            .position(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
            .unwrap_or(0);
        for j in 0..3 {
            let v = if j == pick { rat(1, 1) } else { rat(0, 1) };
            val.insert(choice_param(i0 + 1, j + 1), v);
        }
    }
    val
}

/// One action per polynomial `f_i`, each leading with probability one into
/// a chain whose reachability probability is `1/2 + f_i / (2 B_i)`. Every
/// strategy stays below 1/2 exactly when every `f_i` is negative.
pub fn bcon4ineq_to_pmdp(system: &PolySystem) -> Result<ParametricModel, ReductionError> {
    if system.polys.is_empty() {
        return Err(ReductionError::EmptySystem);
    }
    let mut out = ParametricModel {
        kind: ModelKind::Pmdp,
        params: system.vars.clone(),
        states: vec!["start".to_string()],
        actions: Vec::new(),
        init: 0,
        targets: BTreeSet::new(),
        choices: vec![Vec::new()],
    };
    for (i, f) in system.polys.iter().enumerate() {
        let i = i + 1;
        let sub = poly_to_pmc(f, &system.vars);
        let lambda = &sub.a_shift / &sub.b_scale;
        let shifted = shift_threshold(&sub.pmc, &lambda);
        for p in &shifted.params {
            if !out.params.contains(p) {
                out.params.push(p.clone());
            }
        }
        let offset = out.states.len();
        let go = action_id(&mut out, "go");
        for (s, name) in shifted.states.iter().enumerate() {
            out.states.push(format!("f{i}_{name}"));
            let ch = &shifted.choices[s][0];
            out.choices.push(vec![Choice {
                action: go,
                transitions: ch
                    .transitions
                    .iter()
                    .map(|(t, l)| (t + offset, l.clone()))
                    .collect(),
            }]);
        }
        out.targets
            .extend(shifted.targets.iter().map(|t| t + offset));
        let a = action_id(&mut out, &format!("alpha{i}"));
        out.choices[0].push(Choice {
            action: a,
            transitions: vec![(shifted.init + offset, Polynomial::one())],
        });
    }
    out.check_valid()?;
    Ok(out)
}

/// The coin tree model and, per `(state, lo, hi)`, the fresh parameter of
/// the coin that splits the choices `lo..hi` of that state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoinTreePmc {
    pub pmc: ParametricModel,
    pub coins: BTreeMap<(usize, usize, usize), String>,
}

/// Replaces every nondeterministic choice by a binary tree of coin flips
/// over fresh parameters, so that Boolean values of the fresh parameters
/// select deterministic strategies.
pub fn pmdp_exists_to_pmc(model: &ParametricModel) -> Result<CoinTreePmc, ReductionError> {
    if let Some(reason) = model.simplicity_violation() {
        return Err(ReductionError::NotSimple(reason));
    }
    let mut out = ParametricModel {
        kind: ModelKind::Pmc,
        params: model.params.clone(),
        states: model.states.clone(),
        actions: vec![CHAIN_ACTION.to_string()],
        init: model.init,
        targets: model.targets.clone(),
        choices: vec![Vec::new(); model.num_states()],
    };
    let mut taken_states: BTreeSet<String> = model.states.iter().cloned().collect();
    let mut taken_params: BTreeSet<String> = model.params.iter().cloned().collect();

    struct Ctx<'a> {
        model: &'a ParametricModel,
        out: ParametricModel,
        taken_states: &'a mut BTreeSet<String>,
        taken_params: &'a mut BTreeSet<String>,
        coins: BTreeMap<(usize, usize, usize), String>,
    }

    fn leaf(ctx: &mut Ctx, s: usize, c: usize) -> usize {
        let name = format!("{}__{}", ctx.model.states[s], ctx.model.action_name(s, c));
        let name = fresh(&name, ctx.taken_states);
        let idx = add_state(&mut ctx.out, name);
        let row = ctx.model.choices[s][c].transitions.clone();
        set_row(&mut ctx.out, idx, CHAIN_ACTION, row);
        idx
    }

    // Fills `node` with a coin over the choices `lo..hi` of state `s`.
    fn tree(ctx: &mut Ctx, s: usize, node: usize, lo: usize, hi: usize) {
        let mid = lo + (hi - lo).div_ceil(2);
        let z = fresh(
            &format!("z_{}_{}", ctx.model.states[s], lo + 1),
            ctx.taken_params,
        );
        ctx.out.params.push(z.clone());
        ctx.coins.insert((s, lo, hi), z.clone());
        let child = |ctx: &mut Ctx, a: usize, b: usize| {
            if b - a == 1 {
                leaf(ctx, s, a)
            } else {
                let name = fresh(
                    &format!("{}__n{}", ctx.model.states[s], a + 1),
                    ctx.taken_states,
                );
                let idx = add_state(&mut ctx.out, name);
                tree(ctx, s, idx, a, b);
                idx
            }
        };
        let left = child(ctx, lo, mid);
        let right = child(ctx, mid, hi);
        set_row(
            &mut ctx.out,
            node,
            CHAIN_ACTION,
            vec![
                (left, Polynomial::var(&z)),
                (right, Polynomial::one_minus(&z)),
            ],
        );
    }

    let mut ctx = Ctx {
        model,
        out: out.clone(),
        taken_states: &mut taken_states,
        taken_params: &mut taken_params,
        coins: BTreeMap::new(),
    };
    for s in 0..model.num_states() {
        let k = model.choices[s].len();
        if k == 1 {
            let row = model.choices[s][0].transitions.clone();
            set_row(&mut ctx.out, s, CHAIN_ACTION, row);
        } else {
            tree(&mut ctx, s, s, 0, k);
        }
    }
    let coins = ctx.coins;
    out = ctx.out;
    out.check_valid()?;
    Ok(CoinTreePmc { pmc: out, coins })
}

/// The valuation of the fresh coin parameters of [`pmdp_exists_to_pmc`]
/// that selects the given strategy, extended by `base`. Unset parameters
/// default to 1/2.
pub fn strategy_valuation(
    model: &ParametricModel,
    tree: &CoinTreePmc,
    strategy: &crate::model::Strategy,
    base: &Valuation,
) -> Valuation {
    let mut val = base.clone();
    for (s, &c) in strategy.0.iter().enumerate() {
        let (mut lo, mut hi) = (0, model.choices[s].len());
        while hi - lo > 1 {
            let mid = lo + (hi - lo).div_ceil(2);
            let go_left = c < mid;
            val.insert(
                tree.coins[&(s, lo, hi)].clone(),
                if go_left { rat(1, 1) } else { rat(0, 1) },
            );
            if go_left {
                hi = mid;
            } else {
                lo = mid;
            }
        }
    }
    for p in &tree.pmc.params {
        val.entry(p.clone()).or_insert_with(|| rat(1, 2));
    }
    val
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::parse_polynomial;
    use crate::quantitative::solution_function;

    #[test]
    fn negative_term_rewriting() {
        let f = parse_polynomial("-2*x^2*y + y").unwrap();
        let c = rewrite_nonneg_combination(&f).unwrap();
        assert_eq!(c.b, rat(-2, 1));
        let shown: Vec<String> = c
            .terms
            .iter()
            .map(|t| {
                format!(
                    "{}:{}",
                    t.a,
                    t.factors()
                        .iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        assert_eq!(shown, ["2:-x + 1,x,y", "2:-x + 1,y", "2:-y + 1", "1:y"]);
        assert_eq!(c.expand(), f);
    }

    #[test]
    fn positive_constant_is_absorbed() {
        let f = parse_polynomial("x + 3").unwrap();
        let c = rewrite_nonneg_combination(&f).unwrap();
        assert_eq!(c.b, rat(0, 1));
        assert_eq!(c.expand(), f);
        assert_eq!(
            rewrite_nonneg_combination(&parse_polynomial("3").unwrap()),
            Err(ReductionError::NoParameters)
        );
    }

    #[test]
    fn polynomial_chain_values() {
        let f = parse_polynomial("-2*x^2*y + y").unwrap();
        let r = poly_to_pmc(&f, &[]);
        assert_eq!(r.a_shift, rat(2, 1));
        assert_eq!(r.b_scale, rat(8, 1));
        assert!(r.pmc.is_simple());
        let sf = solution_function(&r.pmc).unwrap();
        let expected = parse_polynomial("-1/4*x^2*y + 1/8*y + 1/4").unwrap();
        assert_eq!(
            sf,
            crate::polyalg::RationalFunction::from_polynomial(expected)
        );
    }

    #[test]
    fn zero_polynomial_chain() {
        let r = poly_to_pmc(&Polynomial::zero(), &[]);
        assert_eq!(r.a_shift, rat(0, 1));
        assert_eq!(r.b_scale, rat(1, 1));
        assert!(solution_function(&r.pmc).unwrap().num().is_zero());
    }

    #[test]
    fn threshold_range() {
        let m = poly_to_pmc(&parse_polynomial("x").unwrap(), &[]).pmc;
        assert!(normalize_threshold(&m, &rat(1, 3)).is_ok());
        assert!(normalize_threshold(&m, &rat(0, 1)).is_err());
        assert!(normalize_threshold(&m, &rat(1, 1)).is_err());
    }
}
