//! Small enums shared by the analysis modules.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::polyalg::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relop {
    Lt,
    Le,
    Gt,
    Ge,
}

impl Relop {
    pub const ALL: [Relop; 4] = [Relop::Lt, Relop::Le, Relop::Gt, Relop::Ge];

    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relop::Lt => lhs < rhs,
            Relop::Le => lhs <= rhs,
            Relop::Gt => lhs > rhs,
            Relop::Ge => lhs >= rhs,
        }
    }

    /// The complementary relation: `a op b` is false iff `a op.negate() b`.
    pub fn negate(self) -> Relop {
        match self {
            Relop::Lt => Relop::Ge,
            Relop::Le => Relop::Gt,
            Relop::Gt => Relop::Le,
            Relop::Ge => Relop::Lt,
        }
    }

    /// The relation with its arguments swapped: `a op b` iff `b op.flip() a`.
    pub fn flip(self) -> Relop {
        match self {
            Relop::Lt => Relop::Gt,
            Relop::Le => Relop::Ge,
            Relop::Gt => Relop::Lt,
            Relop::Ge => Relop::Le,
        }
    }

    /// True for `<` and `<=`, which ask for an upper bound.
    pub fn is_upper(self) -> bool {
        matches!(self, Relop::Lt | Relop::Le)
    }

    pub fn is_strict(self) -> bool {
        matches!(self, Relop::Lt | Relop::Gt)
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relop::Lt => "<",
            Relop::Le => "<=",
            Relop::Gt => ">",
            Relop::Ge => ">=",
        }
    }
}

impl fmt::Display for Relop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Relop {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lt" | "<" => Ok(Relop::Lt),
            "le" | "<=" => Ok(Relop::Le),
            "gt" | ">" => Ok(Relop::Gt),
            "ge" | ">=" => Ok(Relop::Ge),
            other => Err(format!("unknown relation '{other}'")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Exists,
    Forall,
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantifier::Exists => write!(f, "exists"),
            Quantifier::Forall => write!(f, "forall"),
        }
    }
}

/// Optimisation direction for extremal reachability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Min,
    Max,
}

impl Mode {
    /// The extremum that decides `quantifier σ: Pr^σ relop λ`.
    pub fn deciding(quantifier: Quantifier, relop: Relop) -> Mode {
        match (quantifier, relop.is_upper()) {
            (Quantifier::Exists, true) | (Quantifier::Forall, false) => Mode::Min,
            (Quantifier::Exists, false) | (Quantifier::Forall, true) => Mode::Max,
        }
    }
}

/// Region of valuations a question ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// Well-defined valuations.
    Wd,
    /// Graph-preserving valuations.
    Gp,
    /// Well-defined valuations with every parameter in {0, 1}.
    Boolean,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Domain::Wd => write!(f, "wd"),
            Domain::Gp => write!(f, "gp"),
            Domain::Boolean => write!(f, "bool"),
        }
    }
}
