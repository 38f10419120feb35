use std::collections::BTreeSet;

use crate::model::{Choice, ModelError, ModelKind, ParametricModel, CHAIN_ACTION};
use crate::polyalg::{parse_polynomial, Polynomial};

/// Name based incremental construction of a [`ParametricModel`].
///
/// States and actions are numbered in order of first mention. For chains
/// the action argument of [`ModelBuilder::transition`] is ignored.
#[derive(Debug, Clone)]
pub struct ModelBuilder {
    kind: ModelKind,
    params: Vec<String>,
    states: Vec<String>,
    actions: Vec<String>,
    init: Option<String>,
    targets: Vec<String>,
    rows: Vec<Vec<Choice<Polynomial>>>,
    error: Option<ModelError>,
}

impl ModelBuilder {
    pub fn new(kind: ModelKind) -> Self {
        ModelBuilder {
            kind,
            params: Vec::new(),
            states: Vec::new(),
            actions: Vec::new(),
            init: None,
            targets: Vec::new(),
            rows: Vec::new(),
            error: None,
        }
    }

    pub fn param(&mut self, name: &str) -> &mut Self {
        if !self.params.iter().any(|p| p == name) {
            self.params.push(name.to_string());
        }
        self
    }

    pub fn params<I: IntoIterator<Item = S>, S: AsRef<str>>(&mut self, names: I) -> &mut Self {
        for n in names {
            self.param(n.as_ref());
        }
        self
    }

    /// Declares a state and returns its index.
    pub fn state(&mut self, name: &str) -> usize {
        if let Some(i) = self.states.iter().position(|s| s == name) {
            return i;
        }
        self.states.push(name.to_string());
        self.rows.push(Vec::new());
        self.states.len() - 1
    }

    pub fn states<I: IntoIterator<Item = S>, S: AsRef<str>>(&mut self, names: I) -> &mut Self {
        for n in names {
            self.state(n.as_ref());
        }
        self
    }

    pub fn has_state(&self, name: &str) -> bool {
        self.states.iter().any(|s| s == name)
    }

    fn action(&mut self, name: &str) -> usize {
        let name = if self.kind == ModelKind::Pmc {
            CHAIN_ACTION
        } else {
            name
        };
        if let Some(i) = self.actions.iter().position(|a| a == name) {
            return i;
        }
        self.actions.push(name.to_string());
        self.actions.len() - 1
    }

    pub fn init(&mut self, name: &str) -> &mut Self {
        self.state(name);
        self.init = Some(name.to_string());
        self
    }

    pub fn target(&mut self, name: &str) -> &mut Self {
        self.state(name);
        self.targets.push(name.to_string());
        self
    }

    pub fn targets<I: IntoIterator<Item = S>, S: AsRef<str>>(&mut self, names: I) -> &mut Self {
        for n in names {
            self.target(n.as_ref());
        }
        self
    }

    /// Adds a transition whose label is given in polynomial syntax.
    pub fn transition(&mut self, from: &str, action: &str, to: &str, label: &str) -> &mut Self {
        match parse_polynomial(label) {
            Ok(p) => self.transition_poly(from, action, to, p),
            Err(e) => {
                self.error.get_or_insert(ModelError::Poly(e));
                self
            }
        }
    }

    pub fn transition_poly(
        &mut self,
        from: &str,
        action: &str,
        to: &str,
        label: Polynomial,
    ) -> &mut Self {
        for v in label.vars() {
            self.param(&v);
        }
        let s = self.state(from);
        let t = self.state(to);
        let a = self.action(action);
        let row = match self.rows[s].iter().position(|c| c.action == a) {
            Some(i) => i,
            None => {
                self.rows[s].push(Choice {
                    action: a,
                    transitions: Vec::new(),
                });
                self.rows[s].len() - 1
            }
        };
        self.rows[s][row].transitions.push((t, label));
        self
    }

    /// Finishes the model and checks it against [`ParametricModel::validate`].
    pub fn build(&self) -> Result<ParametricModel, ModelError> {
        if let Some(e) = &self.error {
            return Err(e.clone());
        }
        let init_name = self
            .init
            .clone()
            .or_else(|| self.states.first().cloned())
            .ok_or_else(|| ModelError::UnknownState("<no states>".into()))?;
        let index = |n: &str| self.states.iter().position(|s| s == n).unwrap();
        let targets: BTreeSet<usize> = self.targets.iter().map(|t| index(t)).collect();
        let mut actions = self.actions.clone();
        if actions.is_empty() {
            actions.push(CHAIN_ACTION.to_string());
        }
        let m = ParametricModel {
            kind: self.kind,
            params: self.params.clone(),
            states: self.states.clone(),
            actions,
            init: index(&init_name),
            targets,
            choices: self.rows.clone(),
        };
        m.check_valid()?;
        Ok(m)
    }
}
