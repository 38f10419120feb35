//! Quantifier-free formulas over real and Boolean variables with
//! polynomial atoms.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::polyalg::{Polynomial, Rational};
use crate::types::Relop;

use super::EtrError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cmp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Cmp {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Cmp::Lt => lhs < rhs,
            Cmp::Le => lhs <= rhs,
            Cmp::Eq => lhs == rhs,
            Cmp::Ge => lhs >= rhs,
            Cmp::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Eq => "=",
            Cmp::Ge => ">=",
            Cmp::Gt => ">",
        }
    }
}

impl From<Relop> for Cmp {
    fn from(r: Relop) -> Cmp {
        match r {
            Relop::Lt => Cmp::Lt,
            Relop::Le => Cmp::Le,
            Relop::Gt => Cmp::Gt,
            Relop::Ge => Cmp::Ge,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Atom {
    pub lhs: Polynomial,
    pub cmp: Cmp,
    pub rhs: Polynomial,
}

/// All variables are implicitly existentially quantified. Real variables
/// occur only inside atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Bool(String),
    Atom(Atom),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

/// Values for the variables of a formula.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    pub reals: BTreeMap<String, Rational>,
    pub bools: BTreeMap<String, bool>,
}

impl Formula {
    pub fn constant(b: bool) -> Formula {
        if b {
            Formula::True
        } else {
            Formula::False
        }
    }

    pub fn boolean(name: impl Into<String>) -> Formula {
        Formula::Bool(name.into())
    }

    /// An atom, folded to a constant when both sides differ by a constant.
    pub fn atom(lhs: Polynomial, cmp: Cmp, rhs: Polynomial) -> Formula {
        let diff = &lhs - &rhs;
        if let Some(c) = diff.as_constant() {
            return Formula::constant(cmp.holds(&c, &Rational::zero()));
        }
        Formula::Atom(Atom { lhs, cmp, rhs })
    }

    /// Conjunction that flattens nested conjunctions, drops `true`,
    /// removes duplicates and short-circuits on `false`.
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out: Vec<Formula> = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(inner) => {
                    for q in inner {
                        if !out.contains(&q) {
                            out.push(q);
                        }
                    }
                }
                other => {
                    if !out.contains(&other) {
                        out.push(other);
                    }
                }
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out: Vec<Formula> = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(inner) => {
                    for q in inner {
                        if !out.contains(&q) {
                            out.push(q);
                        }
                    }
                }
                other => {
                    if !out.contains(&other) {
                        out.push(other);
                    }
                }
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(inner) => *inner,
            other => Formula::Not(Box::new(other)),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        match (a, b) {
            (Formula::True, b) => b,
            (Formula::False, _) | (_, Formula::True) => Formula::True,
            (a, Formula::False) => Formula::not(a),
            (a, b) => Formula::Implies(Box::new(a), Box::new(b)),
        }
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        match (a, b) {
            (Formula::True, x) | (x, Formula::True) => x,
            (Formula::False, x) | (x, Formula::False) => Formula::not(x),
            (a, b) => Formula::Iff(Box::new(a), Box::new(b)),
        }
    }

    /// Top-level conjuncts.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::And(parts) => parts.iter().collect(),
            other => vec![other],
        }
    }

    /// Real and Boolean variables occurring in the formula.
    pub fn variables(&self) -> (BTreeSet<String>, BTreeSet<String>) {
        let mut reals = BTreeSet::new();
        let mut bools = BTreeSet::new();
        self.collect_vars(&mut reals, &mut bools);
        (reals, bools)
    }

    fn collect_vars(&self, reals: &mut BTreeSet<String>, bools: &mut BTreeSet<String>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Bool(b) => {
                bools.insert(b.clone());
            }
            Formula::Atom(a) => {
                for v in a.lhs.vars().into_iter().chain(a.rhs.vars()) {
                    reals.insert(v.to_string());
                }
            }
            Formula::Not(f) => f.collect_vars(reals, bools),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_vars(reals, bools);
                }
            }
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_vars(reals, bools);
                b.collect_vars(reals, bools);
            }
        }
    }

    /// Exact evaluation under a total assignment.
    pub fn eval(&self, asg: &Assignment) -> Result<bool, EtrError> {
        Ok(match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Bool(b) => *asg
                .bools
                .get(b)
                .ok_or_else(|| EtrError::MissingVariable(b.clone()))?,
            Formula::Atom(a) => {
                let l = eval_poly(&a.lhs, asg)?;
                let r = eval_poly(&a.rhs, asg)?;
                a.cmp.holds(&l, &r)
            }
            Formula::Not(f) => !f.eval(asg)?,
            Formula::And(fs) => {
                for f in fs {
                    if !f.eval(asg)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(fs) => {
                for f in fs {
                    if f.eval(asg)? {
                        return Ok(true);
                    }
                }
                false
            }
            Formula::Implies(a, b) => !a.eval(asg)? || b.eval(asg)?,
            Formula::Iff(a, b) => a.eval(asg)? == b.eval(asg)?,
        })
    }
}

fn eval_poly(p: &Polynomial, asg: &Assignment) -> Result<Rational, EtrError> {
    for v in p.vars() {
        if !asg.reals.contains_key(&*v) {
            return Err(EtrError::MissingVariable(v.to_string()));
        }
    }
    Ok(p.eval(&asg.reals).expect("all variables assigned"))
}

/// Flips the sign of a polynomial that is negative at the all-1/2 point.
/// Returns whether it flipped.
pub(crate) fn positive_at_half(p: &Polynomial) -> (bool, Polynomial) {
    let half: BTreeMap<String, Rational> = p
        .vars()
        .into_iter()
        .map(|v| (v.to_string(), crate::polyalg::rat(1, 2)))
        .collect();
    let v = p.eval(&half).expect("all variables assigned");
    if v.is_negative() {
        (true, -p.clone())
    } else {
        (false, p.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::{parse_polynomial, rat};

    fn p(s: &str) -> Polynomial {
        parse_polynomial(s).unwrap()
    }

    #[test]
    fn constant_atoms_fold() {
        assert_eq!(Formula::atom(p("x + 1"), Cmp::Gt, p("x")), Formula::True);
        assert_eq!(Formula::atom(p("x"), Cmp::Lt, p("x")), Formula::False);
        assert!(matches!(
            Formula::atom(p("x"), Cmp::Gt, p("0")),
            Formula::Atom(_)
        ));
    }

    #[test]
    fn strict_atom_at_zero_is_false() {
        let f = Formula::atom(p("x"), Cmp::Gt, p("0"));
        let mut asg = Assignment::default();
        asg.reals.insert("x".into(), rat(0, 1));
        assert!(!f.eval(&asg).unwrap());
        assert!(Formula::True.eval(&Assignment::default()).unwrap());
        assert_eq!(
            f.eval(&Assignment::default()),
            Err(EtrError::MissingVariable("x".into()))
        );
    }

    #[test]
    fn connectives_simplify() {
        let q = Formula::boolean("q");
        assert_eq!(Formula::and([Formula::True, q.clone(), q.clone()]), q);
        assert_eq!(Formula::or([Formula::False, q.clone()]), q);
        assert_eq!(Formula::implies(Formula::True, q.clone()), q);
        assert_eq!(Formula::iff(Formula::False, q.clone()), Formula::not(q));
    }
}
