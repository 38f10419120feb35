//! Parametric Markov chains and Markov decision processes.

mod builder;
mod valuation;

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::polyalg::{PolyError, Polynomial, Rational, Valuation};

pub use builder::ModelBuilder;
pub use valuation::{classify_valuation, instantiate, ValuationClass, ValuationReport};

/// Action name used for the single choice of every state of a chain.
pub const CHAIN_ACTION: &str = "tau";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Pmc,
    Pmdp,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelKind::Pmc => write!(f, "pmc"),
            ModelKind::Pmdp => write!(f, "pmdp"),
        }
    }
}

/// One enabled action of a state together with its successor distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Choice<L> {
    pub action: usize,
    pub transitions: Vec<(usize, L)>,
}

/// A pMC or pMDP. A pMC is the special case with one choice per state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParametricModel {
    pub kind: ModelKind,
    pub params: Vec<String>,
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub init: usize,
    pub targets: BTreeSet<usize>,
    pub choices: Vec<Vec<Choice<Polynomial>>>,
}

/// A model whose labels are concrete probabilities. Vanishing transitions
/// are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConcreteModel {
    pub states: Vec<String>,
    pub actions: Vec<String>,
    pub init: usize,
    pub targets: BTreeSet<usize>,
    pub choices: Vec<Vec<Choice<Rational>>>,
}

/// Identifies a transition by state, choice index within the state and
/// successor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionRef {
    pub state: usize,
    pub choice: usize,
    pub succ: usize,
}

/// Successor sets per state and per choice.
pub type Topology = Vec<Vec<Vec<usize>>>;

/// A memoryless deterministic strategy, stored as a choice index per state.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strategy(pub Vec<usize>);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("valuation is not well-defined: {0}")]
    NotWellDefined(String),
    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),
    #[error("unknown state '{0}'")]
    UnknownState(String),
    #[error("unknown parameter '{0}'")]
    UnknownParameter(String),
    #[error("invalid model: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("model is not simple: {0}")]
    NotSimple(String),
    #[error("limit exceeded: {0}")]
    LimitExceeded(String),
}

/// Structural problems found by [`ParametricModel::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoAction(String),
    EmptyRow(String, String),
    DuplicateSuccessor(String, String, String),
    DuplicateAction(String, String),
    ZeroLabel(String, String, String),
    UnknownParameter(String, String),
    ChainWithChoices(String),
    BadIndex(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoAction(s) => write!(f, "state {s} has no action"),
            Violation::EmptyRow(s, a) => write!(f, "action {a} of state {s} has no successor"),
            Violation::DuplicateSuccessor(s, a, t) => {
                write!(f, "successor {t} listed twice for {s} [{a}]")
            }
            Violation::DuplicateAction(s, a) => write!(f, "action {a} listed twice for state {s}"),
            Violation::ZeroLabel(s, a, t) => write!(f, "zero label on {s} [{a}] -> {t}"),
            Violation::UnknownParameter(s, p) => {
                write!(f, "label at state {s} uses undeclared parameter {p}")
            }
            Violation::ChainWithChoices(s) => {
                write!(f, "state {s} of a pmc has more than one action")
            }
            Violation::BadIndex(msg) => write!(f, "index out of range: {msg}"),
        }
    }
}

impl ParametricModel {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn is_pmc(&self) -> bool {
        self.kind == ModelKind::Pmc
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn action_name(&self, s: usize, choice: usize) -> &str {
        &self.actions[self.choices[s][choice].action]
    }

    /// Resolves a comma separated list of state names.
    pub fn resolve_states(&self, names: &[String]) -> Result<BTreeSet<usize>, ModelError> {
        names
            .iter()
            .map(|n| {
                self.state_index(n)
                    .ok_or_else(|| ModelError::UnknownState(n.clone()))
            })
            .collect()
    }

    /// All structural violations. Empty when the model is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.states.len();
        if self.init >= n {
            out.push(Violation::BadIndex(format!("initial state {}", self.init)));
        }
        for t in &self.targets {
            if *t >= n {
                out.push(Violation::BadIndex(format!("target {t}")));
            }
        }
        if self.choices.len() != n {
            out.push(Violation::BadIndex(format!(
                "{} transition blocks for {} states",
                self.choices.len(),
                n
            )));
            return out;
        }
        let params: BTreeSet<&str> = self.params.iter().map(String::as_str).collect();
        for (s, choices) in self.choices.iter().enumerate() {
            let sname = &self.states[s];
            if choices.is_empty() {
                out.push(Violation::NoAction(sname.clone()));
            }
            if self.kind == ModelKind::Pmc && choices.len() > 1 {
                out.push(Violation::ChainWithChoices(sname.clone()));
            }
            let mut seen_actions = BTreeSet::new();
            for ch in choices {
                let Some(aname) = self.actions.get(ch.action) else {
                    out.push(Violation::BadIndex(format!(
                        "action {} at {sname}",
                        ch.action
                    )));
                    continue;
                };
                if !seen_actions.insert(ch.action) {
                    out.push(Violation::DuplicateAction(sname.clone(), aname.clone()));
                }
                if ch.transitions.is_empty() {
                    out.push(Violation::EmptyRow(sname.clone(), aname.clone()));
                }
                let mut seen = BTreeSet::new();
                for (t, label) in &ch.transitions {
                    let Some(tname) = self.states.get(*t) else {
                        out.push(Violation::BadIndex(format!("successor {t} at {sname}")));
                        continue;
                    };
                    if !seen.insert(*t) {
                        out.push(Violation::DuplicateSuccessor(
                            sname.clone(),
                            aname.clone(),
                            tname.clone(),
                        ));
                    }
                    if label.is_zero() {
                        out.push(Violation::ZeroLabel(
                            sname.clone(),
                            aname.clone(),
                            tname.clone(),
                        ));
                    }
                    for v in label.vars() {
                        if !params.contains(v.as_ref()) {
                            out.push(Violation::UnknownParameter(sname.clone(), v.to_string()));
                        }
                    }
                }
            }
        }
        out
    }

    /// Errors with every violation when the model is invalid.
    pub fn check_valid(&self) -> Result<(), ModelError> {
        let v = self.validate();
        if v.is_empty() {
            Ok(())
        } else {
            Err(ModelError::Invalid(v))
        }
    }

    /// Simple models use only labels `x`, `1 - x` and non-negative
    /// constants, and every row sums to one syntactically.
    pub fn is_simple(&self) -> bool {
        self.simplicity_violation().is_none()
    }

    /// The first reason why the model is not simple, if any.
    pub fn simplicity_violation(&self) -> Option<String> {
        for (s, choices) in self.choices.iter().enumerate() {
            for ch in choices {
                let mut sum = Polynomial::zero();
                for (t, label) in &ch.transitions {
                    let ok = match label.as_constant() {
                        Some(c) => c >= Rational::zero(),
                        None => label.as_var().is_some() || label.as_one_minus_var().is_some(),
                    };
                    if !ok {
                        return Some(format!(
                            "label {} on {} -> {} is not of the form x, 1 - x or a constant",
                            label, self.states[s], self.states[*t]
                        ));
                    }
                    sum += label;
                }
                if !sum.is_one() {
                    return Some(format!(
                        "row of {} [{}] sums to {} instead of 1",
                        self.states[s], self.actions[ch.action], sum
                    ));
                }
            }
        }
        None
    }

    pub fn require_simple(&self) -> Result<(), ModelError> {
        match self.simplicity_violation() {
            None => Ok(()),
            Some(reason) => Err(ModelError::NotSimple(reason)),
        }
    }

    /// Successor sets of non-zero labels per state and choice.
    pub fn underlying_graph(&self) -> Topology {
        self.choices
            .iter()
            .map(|chs| {
                chs.iter()
                    .map(|ch| ch.transitions.iter().map(|(t, _)| *t).collect())
                    .collect()
            })
            .collect()
    }

    pub fn num_strategies(&self) -> u128 {
        self.choices
            .iter()
            .map(|c| c.len() as u128)
            .fold(1u128, |a, b| a.saturating_mul(b))
    }

    /// The pMC obtained by resolving every choice with `strategy`.
    pub fn induced_pmc(&self, strategy: &Strategy) -> Result<ParametricModel, ModelError> {
        if strategy.0.len() != self.states.len() {
            return Err(ModelError::InvalidStrategy(format!(
                "strategy covers {} states, model has {}",
                strategy.0.len(),
                self.states.len()
            )));
        }
        let mut choices = Vec::with_capacity(self.states.len());
        for (s, &c) in strategy.0.iter().enumerate() {
            let Some(ch) = self.choices[s].get(c) else {
                return Err(ModelError::InvalidStrategy(format!(
                    "state {} has no choice {}",
                    self.states[s], c
                )));
            };
            choices.push(vec![Choice {
                action: 0,
                transitions: ch.transitions.clone(),
            }]);
        }
        Ok(ParametricModel {
            kind: ModelKind::Pmc,
            params: self.params.clone(),
            states: self.states.clone(),
            actions: vec![CHAIN_ACTION.to_string()],
            init: self.init,
            targets: self.targets.clone(),
            choices,
        })
    }

    /// All memoryless deterministic strategies in lexicographic order of
    /// their choice vectors.
    pub fn enumerate_strategies(&self) -> StrategyIter {
        StrategyIter::new(self.choices.iter().map(Vec::len).collect())
    }

    /// Copy of the model with a different initial state.
    pub fn with_init(&self, init: usize) -> ParametricModel {
        let mut m = self.clone();
        m.init = init;
        m
    }

    pub fn with_targets(&self, targets: BTreeSet<usize>) -> ParametricModel {
        let mut m = self.clone();
        m.targets = targets;
        m
    }

    /// Every non-constant label of the model.
    pub fn labels(&self) -> impl Iterator<Item = (TransitionRef, &Polynomial)> {
        self.choices.iter().enumerate().flat_map(|(s, chs)| {
            chs.iter().enumerate().flat_map(move |(c, ch)| {
                ch.transitions.iter().map(move |(t, l)| {
                    (
                        TransitionRef {
                            state: s,
                            choice: c,
                            succ: *t,
                        },
                        l,
                    )
                })
            })
        })
    }

    /// A valuation mapping every parameter to the same value.
    pub fn uniform_valuation(&self, value: &Rational) -> Valuation {
        self.params
            .iter()
            .map(|p| (p.clone(), value.clone()))
            .collect()
    }
}

impl ConcreteModel {
    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn topology(&self) -> Topology {
        self.choices
            .iter()
            .map(|chs| {
                chs.iter()
                    .map(|ch| ch.transitions.iter().map(|(t, _)| *t).collect())
                    .collect()
            })
            .collect()
    }

    pub fn is_chain(&self) -> bool {
        self.choices.iter().all(|c| c.len() == 1)
    }

    /// The Markov chain induced by a strategy.
    pub fn induced(&self, strategy: &Strategy) -> Result<ConcreteModel, ModelError> {
        if strategy.0.len() != self.states.len() {
            return Err(ModelError::InvalidStrategy("length mismatch".into()));
        }
        let mut choices = Vec::with_capacity(self.states.len());
        for (s, &c) in strategy.0.iter().enumerate() {
            let ch = self.choices[s].get(c).ok_or_else(|| {
                ModelError::InvalidStrategy(format!("state {} has no choice {}", self.states[s], c))
            })?;
            choices.push(vec![ch.clone()]);
        }
        Ok(ConcreteModel {
            states: self.states.clone(),
            actions: self.actions.clone(),
            init: self.init,
            targets: self.targets.clone(),
            choices,
        })
    }

    pub fn enumerate_strategies(&self) -> StrategyIter {
        StrategyIter::new(self.choices.iter().map(Vec::len).collect())
    }

    /// Checks that every row is a probability distribution.
    pub fn is_stochastic(&self) -> bool {
        self.choices.iter().all(|chs| {
            !chs.is_empty()
                && chs.iter().all(|ch| {
                    ch.transitions.iter().all(|(_, p)| *p > Rational::zero())
                        && ch
                            .transitions
                            .iter()
                            .fold(Rational::zero(), |a, (_, p)| a + p)
                            .is_one()
                })
        })
    }
}

/// Iterator over memoryless deterministic strategies.
pub struct StrategyIter {
    sizes: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl StrategyIter {
    fn new(sizes: Vec<usize>) -> Self {
        let next = if sizes.iter().all(|&k| k > 0) {
            Some(vec![0; sizes.len()])
        } else {
            None
        };
        StrategyIter { sizes, next }
    }
}

impl Iterator for StrategyIter {
    type Item = Strategy;

    fn next(&mut self) -> Option<Strategy> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        let mut i = succ.len();
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if succ[i] + 1 < self.sizes[i] {
                succ[i] += 1;
                advanced = true;
                break;
            }
            succ[i] = 0;
        }
        if advanced {
            self.next = Some(succ);
        }
        Some(Strategy(cur))
    }
}
