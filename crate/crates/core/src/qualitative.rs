//! Qualitative reachability: zero and one states, graph-consistent classes
//! of valuations and the qualitative decision problems.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::graph::{
    almost_sure_exists, almost_sure_forall, can_reach, forall_attractor, target_mask,
};
use crate::model::{
    instantiate, ConcreteModel, ModelError, ParametricModel, Strategy, Topology, TransitionRef,
};
use crate::polyalg::{int, rat, Polynomial, Rational, Valuation};
use crate::quantitative::{mdp_reach_extremum_exact, QuantError};
use crate::types::{Domain, Mode, Quantifier, Relop};

/// Zero and one states of a concrete model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSetReport {
    /// Minimal reachability probability is zero.
    pub zero_exists: BTreeSet<usize>,
    /// Maximal reachability probability is zero.
    pub zero_forall: BTreeSet<usize>,
    /// Maximal reachability probability is one.
    pub one_exists: BTreeSet<usize>,
    /// Minimal reachability probability is one.
    pub one_forall: BTreeSet<usize>,
}

fn to_set(mask: impl IntoIterator<Item = bool>) -> BTreeSet<usize> {
    mask.into_iter()
        .enumerate()
        .filter_map(|(i, b)| b.then_some(i))
        .collect()
}

/// Zero and one states of a topology with the given targets.
pub fn qualitative_states_of(topo: &Topology, targets: &BTreeSet<usize>) -> StateSetReport {
    let t = target_mask(topo.len(), targets);
    let attractor = forall_attractor(topo, &t);
    StateSetReport {
        zero_exists: to_set(attractor.iter().map(Option::is_none)),
        zero_forall: to_set(can_reach(topo, &t).into_iter().map(|b| !b)),
        one_exists: to_set(almost_sure_exists(topo, &t)),
        one_forall: to_set(almost_sure_forall(topo, &t)),
    }
}

pub fn qualitative_states(model: &ConcreteModel) -> StateSetReport {
    qualitative_states_of(&model.topology(), &model.targets)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QualKind {
    /// Probability greater than zero.
    Positive,
    /// Probability below one.
    Unsure,
    /// Probability equal to zero.
    Safety,
    /// Probability equal to one.
    AlmostSure,
}

impl QualKind {
    pub const ALL: [QualKind; 4] = [
        QualKind::Positive,
        QualKind::Unsure,
        QualKind::Safety,
        QualKind::AlmostSure,
    ];

    /// The threshold comparison expressing this kind.
    pub fn relop(self) -> Relop {
        match self {
            QualKind::Positive => Relop::Gt,
            QualKind::Unsure => Relop::Lt,
            QualKind::Safety => Relop::Le,
            QualKind::AlmostSure => Relop::Ge,
        }
    }

    pub fn threshold(self) -> Rational {
        match self {
            QualKind::Positive | QualKind::Safety => Rational::zero(),
            QualKind::Unsure | QualKind::AlmostSure => Rational::one(),
        }
    }

    /// Whether the initial state satisfies the property under the given
    /// strategy quantifier.
    pub fn holds(self, quantifier: Quantifier, report: &StateSetReport, init: usize) -> bool {
        use QualKind::*;
        use Quantifier::*;
        match (self, quantifier) {
            (Positive, Exists) => !report.zero_forall.contains(&init),
            (Positive, Forall) => !report.zero_exists.contains(&init),
            (Unsure, Exists) => !report.one_forall.contains(&init),
            (Unsure, Forall) => !report.one_exists.contains(&init),
            (Safety, Exists) => report.zero_exists.contains(&init),
            (Safety, Forall) => report.zero_forall.contains(&init),
            (AlmostSure, Exists) => report.one_exists.contains(&init),
            (AlmostSure, Forall) => report.one_forall.contains(&init),
        }
    }

    /// Same as [`QualKind::holds`], computing only the state set needed.
    pub fn holds_on(
        self,
        quantifier: Quantifier,
        topo: &Topology,
        targets: &[bool],
        init: usize,
    ) -> bool {
        use QualKind::*;
        use Quantifier::*;
        let chain = topo.iter().all(|chs| chs.len() <= 1);
        let one_exists = |topo: &Topology| {
            if chain {
                almost_sure_forall(topo, targets)[init]
            } else {
                almost_sure_exists(topo, targets)[init]
            }
        };
        match (self, quantifier) {
            (Positive, Exists) => can_reach(topo, targets)[init],
            (Positive, Forall) => forall_attractor(topo, targets)[init].is_some(),
            (Unsure, Exists) => !almost_sure_forall(topo, targets)[init],
            (Unsure, Forall) => !one_exists(topo),
            (Safety, Exists) => forall_attractor(topo, targets)[init].is_none(),
            (Safety, Forall) => !can_reach(topo, targets)[init],
            (AlmostSure, Exists) => one_exists(topo),
            (AlmostSure, Forall) => almost_sure_forall(topo, targets)[init],
        }
    }
}

/// Does some valuation in `domain` satisfy `quantifier σ. Pr^σ(reach) kind`?
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QualProblem {
    pub kind: QualKind,
    pub quantifier: Quantifier,
    pub domain: Domain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QualAnswer {
    pub answer: bool,
    pub witness: Option<Valuation>,
    pub strategy_witness: Option<Strategy>,
}

/// A label awaiting classification: the transition, its Bernoulli variable
/// with a flag for the `1 - x` form, or the members of its simplex sum.
type PendingLabel = (TransitionRef, Option<String>, bool, Option<Vec<String>>);

/// How the parameters of a model are constrained by well-definedness.
///
/// Bernoulli parameters occur only as labels `x` and `1 - x` of a row that
/// sums to one. A simplex group is a set of parameters that occur only in
/// rows whose labels are sums of distinct group members, each member used
/// exactly once per row. Simple models have no simplex groups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterLayout {
    pub bernoulli: Vec<String>,
    pub groups: Vec<Vec<String>>,
    /// Declared parameters that occur in no label.
    pub free: Vec<String>,
    labels: BTreeMap<TransitionRef, LabelKind>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum LabelKind {
    Constant,
    Var(usize),
    OneMinus(usize),
    GroupSum(usize, u64),
}

/// Per-parameter position of a graph-consistent class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Zero,
    Interior,
    One,
}

/// A graph-consistent class described by Bernoulli levels and the support
/// of each simplex group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassPattern {
    pub levels: Vec<Level>,
    pub supports: Vec<u64>,
}

const MAX_GROUP: usize = 63;

fn row_group_terms(p: &Polynomial) -> Option<Vec<String>> {
    let mut out = Vec::new();
    for (m, c) in p.terms() {
        if !c.is_one() || m.degree() != 1 {
            return None;
        }
        out.push(m.factors()[0].0.to_string());
    }
    Some(out)
}

impl ParameterLayout {
    pub fn of(model: &ParametricModel) -> Result<ParameterLayout, ModelError> {
        let used: BTreeSet<String> = model
            .labels()
            .flat_map(|(_, l)| l.vars().into_iter().map(|v| v.to_string()))
            .collect();
        let mut bernoulli: Vec<String> = Vec::new();
        let mut groups: Vec<Vec<String>> = Vec::new();
        let mut role: BTreeMap<String, (bool, usize)> = BTreeMap::new();
        let mut pending: Vec<PendingLabel> = Vec::new();
        let not_simple = |s: usize, why: &str| {
            ModelError::NotSimple(format!("row of state {}: {}", model.states[s], why))
        };

        for (s, chs) in model.choices.iter().enumerate() {
            for (c, ch) in chs.iter().enumerate() {
                let sum: Polynomial = ch.transitions.iter().map(|(_, l)| l.clone()).sum();
                let r = |t: usize| TransitionRef {
                    state: s,
                    choice: c,
                    succ: t,
                };
                if sum.is_one() {
                    for (t, l) in &ch.transitions {
                        if let Some(k) = l.as_constant() {
                            if k < Rational::zero() {
                                return Err(not_simple(s, "negative constant label"));
                            }
                            pending.push((r(*t), None, false, None));
                        } else if let Some(v) = l.as_var() {
                            pending.push((r(*t), Some(v.to_string()), false, None));
                        } else if let Some(v) = l.as_one_minus_var() {
                            pending.push((r(*t), Some(v.to_string()), true, None));
                        } else {
                            return Err(not_simple(
                                s,
                                &format!("label {l} is not x, 1 - x or a constant"),
                            ));
                        }
                    }
                    continue;
                }
                let Some(members) = row_group_terms(&sum) else {
                    return Err(not_simple(s, &format!("labels sum to {sum}")));
                };
                let mut seen = 0usize;
                for (t, l) in &ch.transitions {
                    let Some(vars) = row_group_terms(l) else {
                        return Err(not_simple(
                            s,
                            &format!("label {l} is not a sum of parameters"),
                        ));
                    };
                    seen += vars.len();
                    pending.push((r(*t), None, false, Some(vars)));
                }
                if seen != members.len() {
                    return Err(not_simple(s, "a parameter occurs twice in the row"));
                }
                let mut sorted = members.clone();
                sorted.sort();
                match groups.iter().position(|g| *g == sorted) {
                    Some(_) => {}
                    None => {
                        if sorted.len() > MAX_GROUP {
                            return Err(not_simple(s, "row has too many parameters"));
                        }
                        for v in &sorted {
                            if role.contains_key(v) {
                                return Err(not_simple(
                                    s,
                                    &format!(
                                        "parameter {v} is shared between rows of different shape"
                                    ),
                                ));
                            }
                            role.insert(v.clone(), (true, groups.len()));
                        }
                        groups.push(sorted);
                    }
                }
            }
        }
        for (_, var, _, _) in &pending {
            if let Some(v) = var {
                match role.get(v) {
                    Some((true, _)) => {
                        return Err(ModelError::NotSimple(format!(
                            "parameter {v} is used both as a coin and in a sum row"
                        )))
                    }
                    Some((false, _)) => {}
                    None => {
                        role.insert(v.clone(), (false, bernoulli.len()));
                        bernoulli.push(v.clone());
                    }
                }
            }
        }
        let mut labels = BTreeMap::new();
        for (r, var, one_minus, group_vars) in pending {
            let kind = match (var, group_vars) {
                (Some(v), _) => {
                    let i = role[&v].1;
                    if one_minus {
                        LabelKind::OneMinus(i)
                    } else {
                        LabelKind::Var(i)
                    }
                }
                (None, Some(vars)) => {
                    let g = role[&vars[0]].1;
                    let mut mask = 0u64;
                    for v in &vars {
                        match role.get(v) {
                            Some((true, gi)) if *gi == g => {}
                            _ => {
                                return Err(ModelError::NotSimple(format!(
                                    "label mixes parameters of different rows ({v})"
                                )))
                            }
                        }
                        let pos = groups[g].iter().position(|x| x == v).unwrap();
                        mask |= 1 << pos;
                    }
                    LabelKind::GroupSum(g, mask)
                }
                (None, None) => LabelKind::Constant,
            };
            labels.insert(r, kind);
        }
        let free = model
            .params
            .iter()
            .filter(|p| !used.contains(*p))
            .cloned()
            .collect();
        Ok(ParameterLayout {
            bernoulli,
            groups,
            free,
            labels,
        })
    }

    pub fn is_simple(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn num_params(&self) -> usize {
        self.bernoulli.len() + self.groups.iter().map(Vec::len).sum::<usize>() + self.free.len()
    }

    /// The pattern whose class is the set of graph-preserving valuations.
    pub fn interior_pattern(&self) -> ClassPattern {
        ClassPattern {
            levels: vec![Level::Interior; self.bernoulli.len()],
            supports: self.groups.iter().map(|g| full_mask(g.len())).collect(),
        }
    }

    /// A valuation in the class of `pattern`: Bernoulli parameters at 0,
    /// `interior` or 1, group members uniform on their support.
    pub fn valuation(&self, pattern: &ClassPattern, interior: &Rational) -> Valuation {
        let mut val = Valuation::new();
        for (i, p) in self.bernoulli.iter().enumerate() {
            let v = match pattern.levels[i] {
                Level::Zero => Rational::zero(),
                Level::One => Rational::one(),
                Level::Interior => interior.clone(),
            };
            val.insert(p.clone(), v);
        }
        for (g, members) in self.groups.iter().enumerate() {
            let mask = pattern.supports[g];
            let share = Rational::new(1.into(), (mask.count_ones() as i64).into());
            for (k, p) in members.iter().enumerate() {
                let v = if mask >> k & 1 == 1 {
                    share.clone()
                } else {
                    Rational::zero()
                };
                val.insert(p.clone(), v);
            }
        }
        for p in &self.free {
            val.insert(p.clone(), interior.clone());
        }
        val
    }

    /// A second valuation of the same class that differs from the
    /// representative wherever the class leaves room.
    pub fn alternative_valuation(&self, pattern: &ClassPattern) -> Valuation {
        let mut val = self.valuation(pattern, &rat(1, 3));
        for (g, members) in self.groups.iter().enumerate() {
            let mask = pattern.supports[g];
            let idx: Vec<usize> = (0..members.len()).filter(|k| mask >> k & 1 == 1).collect();
            let total: i64 = (1..=idx.len() as i64).sum();
            for (w, &k) in idx.iter().enumerate() {
                val.insert(members[k].clone(), rat(w as i64 + 1, total));
            }
        }
        val
    }

    fn vanishes(&self, kind: LabelKind, pattern: &ClassPattern) -> bool {
        match kind {
            LabelKind::Constant => false,
            LabelKind::Var(i) => pattern.levels[i] == Level::Zero,
            LabelKind::OneMinus(i) => pattern.levels[i] == Level::One,
            LabelKind::GroupSum(g, mask) => pattern.supports[g] & mask == 0,
        }
    }

    /// Transitions that vanish on the class of `pattern`.
    pub fn vanish_set(&self, pattern: &ClassPattern) -> BTreeSet<TransitionRef> {
        self.labels
            .iter()
            .filter(|(_, k)| self.vanishes(**k, pattern))
            .map(|(r, _)| *r)
            .collect()
    }

    fn vanish_bits(&self, pattern: &ClassPattern) -> Vec<bool> {
        self.labels
            .values()
            .map(|k| self.vanishes(*k, pattern))
            .collect()
    }

    /// Topology of the model instantiated anywhere in the class of
    /// `pattern`.
    pub fn topology(&self, model: &ParametricModel, pattern: &ClassPattern) -> Topology {
        model
            .choices
            .iter()
            .enumerate()
            .map(|(s, chs)| {
                chs.iter()
                    .enumerate()
                    .map(|(c, ch)| {
                        ch.transitions
                            .iter()
                            .filter(|(t, _)| {
                                let r = TransitionRef {
                                    state: s,
                                    choice: c,
                                    succ: *t,
                                };
                                !self.vanishes(self.labels[&r], pattern)
                            })
                            .map(|(t, _)| *t)
                            .collect()
                    })
                    .collect()
            })
            .collect()
    }

    /// All class patterns of well-defined valuations, each Bernoulli level
    /// ordered by `order` and group supports by increasing size. The first
    /// parameter varies slowest.
    pub fn patterns(&self, order: &[Level]) -> PatternIter {
        let group_supports = self
            .groups
            .iter()
            .map(|g| {
                let mut all: Vec<u64> = (1..=full_mask(g.len())).collect();
                all.sort_by_key(|m| (m.count_ones(), *m));
                all
            })
            .collect();
        PatternIter::new(self.bernoulli.len(), order.to_vec(), group_supports)
    }

    /// Boolean patterns: Bernoulli parameters at 0 or 1, exactly one group
    /// member set to one.
    pub fn boolean_patterns(&self) -> PatternIter {
        let group_supports = self
            .groups
            .iter()
            .map(|g| (0..g.len()).map(|k| 1u64 << k).collect())
            .collect();
        PatternIter::new(
            self.bernoulli.len(),
            vec![Level::Zero, Level::One],
            group_supports,
        )
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Mixed-radix enumeration of class patterns.
pub struct PatternIter {
    levels: Vec<Level>,
    supports: Vec<Vec<u64>>,
    digits: Option<Vec<usize>>,
    radices: Vec<usize>,
    nb: usize,
}

impl PatternIter {
    fn new(nb: usize, levels: Vec<Level>, supports: Vec<Vec<u64>>) -> Self {
        let mut radices = vec![levels.len(); nb];
        radices.extend(supports.iter().map(Vec::len));
        let digits = radices
            .iter()
            .all(|&r| r > 0)
            .then(|| vec![0; radices.len()]);
        PatternIter {
            levels,
            supports,
            digits,
            radices,
            nb,
        }
    }
}

impl Iterator for PatternIter {
    type Item = ClassPattern;

    fn next(&mut self) -> Option<ClassPattern> {
        let digits = self.digits.as_mut()?;
        let pattern = ClassPattern {
            levels: digits[..self.nb].iter().map(|&d| self.levels[d]).collect(),
            supports: digits[self.nb..]
                .iter()
                .enumerate()
                .map(|(g, &d)| self.supports[g][d])
                .collect(),
        };
        let mut i = digits.len();
        loop {
            if i == 0 {
                self.digits = None;
                break;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < self.radices[i] {
                break;
            }
            digits[i] = 0;
        }
        Some(pattern)
    }
}

/// A maximal graph-consistent set of well-defined valuations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphClass {
    pub pattern: ClassPattern,
    pub representative: Valuation,
    pub vanish: BTreeSet<TransitionRef>,
}

/// Limits for the qualitative deciders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QualLimits {
    /// Largest number of parameters for which classes are enumerated.
    pub max_params: usize,
}

impl Default for QualLimits {
    fn default() -> Self {
        QualLimits { max_params: 12 }
    }
}

/// One representative per graph-consistent class, with distinct vanish
/// sets. Representatives use 0, 1/2 and 1 for coin parameters.
pub fn graph_consistent_partition(model: &ParametricModel) -> Result<Vec<GraphClass>, ModelError> {
    let layout = ParameterLayout::of(model)?;
    let half = rat(1, 2);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for pattern in layout.patterns(&[Level::Zero, Level::Interior, Level::One]) {
        if seen.insert(layout.vanish_bits(&pattern)) {
            out.push(GraphClass {
                representative: layout.valuation(&pattern, &half),
                vanish: layout.vanish_set(&pattern),
                pattern,
            });
        }
    }
    Ok(out)
}

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum QualError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Quant(#[from] QuantError),
}

fn strategy_witness(
    model: &ParametricModel,
    val: &Valuation,
    problem: &QualProblem,
) -> Result<Option<Strategy>, QualError> {
    if model.is_pmc() || problem.quantifier == Quantifier::Forall {
        return Ok(None);
    }
    let concrete = instantiate(model, val)?;
    let mode = Mode::deciding(Quantifier::Exists, problem.kind.relop());
    Ok(Some(mdp_reach_extremum_exact(&concrete, mode)?.strategy))
}

/// Decides a qualitative problem with the default limits.
pub fn decide_qualitative(
    model: &ParametricModel,
    problem: &QualProblem,
) -> Result<QualAnswer, QualError> {
    decide_qualitative_with(model, problem, &QualLimits::default())
}

/// Decides a qualitative problem.
///
/// Graph-preserving questions and positive reachability over well-defined
/// valuations are decided at a single interior valuation. Other
/// well-defined questions search the graph-consistent classes, and Boolean
/// questions search the Boolean valuations. Both searches stop at the first
/// witness.
pub fn decide_qualitative_with(
    model: &ParametricModel,
    problem: &QualProblem,
    limits: &QualLimits,
) -> Result<QualAnswer, QualError> {
    let layout = ParameterLayout::of(model)?;
    let half = rat(1, 2);
    let targets = target_mask(model.num_states(), &model.targets);
    let holds = |pattern: &ClassPattern| {
        let topo = layout.topology(model, pattern);
        problem
            .kind
            .holds_on(problem.quantifier, &topo, &targets, model.init)
    };
    let found = match (problem.domain, problem.kind) {
        (Domain::Gp, _) | (Domain::Wd, QualKind::Positive) => {
            let p = layout.interior_pattern();
            holds(&p).then_some(p)
        }
        (Domain::Wd, _) => {
            if layout.num_params() > limits.max_params {
                return Err(ModelError::LimitExceeded(format!(
                    "{} parameters exceed the class enumeration limit of {}",
                    layout.num_params(),
                    limits.max_params
                ))
                .into());
            }
            let mut seen = HashSet::new();
            layout
                .patterns(&[Level::Zero, Level::One, Level::Interior])
                .filter(|p| seen.insert(layout.vanish_bits(p)))
                .find(|p| holds(p))
        }
        (Domain::Boolean, _) => {
            let mut seen = HashSet::new();
            layout
                .boolean_patterns()
                .filter(|p| seen.insert(layout.vanish_bits(p)))
                .find(|p| holds(p))
        }
    };
    match found {
        None => Ok(QualAnswer {
            answer: false,
            witness: None,
            strategy_witness: None,
        }),
        Some(pattern) => {
            let mut val = layout.valuation(&pattern, &half);
            if problem.domain == Domain::Boolean {
                for p in &layout.free {
                    val.insert(p.clone(), int(0));
                }
            }
            let strategy = strategy_witness(model, &val, problem)?;
            Ok(QualAnswer {
                answer: true,
                witness: Some(val),
                strategy_witness: strategy,
            })
        }
    }
}
