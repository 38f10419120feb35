//! SMT-LIB 2.6 serialization and parsing of solver answers.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::polyalg::{rat, Polynomial, Rational, Valuation};

use super::formula::Formula;
use super::EtrError;

fn symbol(name: &str) -> String {
    let simple = !name.is_empty()
        && !name.starts_with(|c: char| c.is_ascii_digit())
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.');
    if simple {
        name.to_string()
    } else {
        format!("|{name}|")
    }
}

fn rational(c: &Rational) -> String {
    let abs = c.abs();
    let body = if abs.is_integer() {
        abs.numer().to_string()
    } else {
        format!("(/ {} {})", abs.numer(), abs.denom())
    };
    if c.is_negative() {
        format!("(- {body})")
    } else {
        body
    }
}

fn polynomial(p: &Polynomial) -> String {
    let terms: Vec<String> = p
        .terms()
        .map(|(m, c)| {
            if m.is_one() {
                return rational(c);
            }
            let mut factors = Vec::new();
            if !c.is_one() {
                factors.push(rational(c));
            }
            for (v, e) in m.factors() {
                for _ in 0..*e {
                    factors.push(symbol(v));
                }
            }
            if factors.len() == 1 {
                factors.pop().unwrap()
            } else {
                format!("(* {})", factors.join(" "))
            }
        })
        .collect();
    match terms.len() {
        0 => "0".to_string(),
        1 => terms.into_iter().next().unwrap(),
        _ => format!("(+ {})", terms.join(" ")),
    }
}

/// Prefix form of a formula.
pub fn formula_to_smt(f: &Formula) -> String {
    match f {
        Formula::True => "true".into(),
        Formula::False => "false".into(),
        Formula::Bool(b) => symbol(b),
        Formula::Atom(a) => format!(
            "({} {} {})",
            a.cmp.symbol(),
            polynomial(&a.lhs),
            polynomial(&a.rhs)
        ),
        Formula::Not(g) => format!("(not {})", formula_to_smt(g)),
        Formula::And(gs) => format!(
            "(and {})",
            gs.iter().map(formula_to_smt).collect::<Vec<_>>().join(" ")
        ),
        Formula::Or(gs) => format!(
            "(or {})",
            gs.iter().map(formula_to_smt).collect::<Vec<_>>().join(" ")
        ),
        Formula::Implies(a, b) => format!("(=> {} {})", formula_to_smt(a), formula_to_smt(b)),
        Formula::Iff(a, b) => format!("(= {} {})", formula_to_smt(a), formula_to_smt(b)),
    }
}

/// A complete script: logic, declarations in name order, one assertion
/// per top-level conjunct, `check-sat` and `get-model`. `extra_reals` are
/// declared even if they do not occur (typically the model parameters).
pub fn to_smt_script_with(f: &Formula, extra_reals: &[String]) -> String {
    let (mut reals, bools) = f.variables();
    reals.extend(extra_reals.iter().cloned());
    let mut decls: Vec<(&String, &str)> = reals.iter().map(|r| (r, "Real")).collect();
    decls.extend(bools.iter().map(|b| (b, "Bool")));
    decls.sort();
    let mut out = String::from("(set-logic QF_NRA)\n");
    for (name, sort) in decls {
        out.push_str(&format!("(declare-const {} {sort})\n", symbol(name)));
    }
    for c in f.conjuncts() {
        out.push_str(&format!("(assert {})\n", formula_to_smt(c)));
    }
    out.push_str("(check-sat)\n(get-model)\n");
    out
}

pub fn to_smt_script(f: &Formula) -> String {
    to_smt_script_with(f, &[])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverStatus {
    Sat,
    Unsat,
    Unknown,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverVerdict {
    pub status: SolverStatus,
    /// Present only for `Sat` with every parameter value rational.
    pub witness: Option<Valuation>,
    /// Some parameter value was not a rational literal expression.
    pub irrational: bool,
    pub raw_model: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn parse_sexps(text: &str) -> Result<Vec<Sexp>, EtrError> {
    let mut stack: Vec<Vec<Sexp>> = vec![Vec::new()];
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            '(' => {
                chars.next();
                stack.push(Vec::new());
            }
            ')' => {
                chars.next();
                let list = stack.pop().unwrap();
                let parent = stack
                    .last_mut()
                    .ok_or_else(|| EtrError::UnparseableModel("unbalanced ')'".into()))?;
                parent.push(Sexp::List(list));
            }
            ';' => while chars.next().is_some_and(|c| c != '\n') {},
            c if c.is_whitespace() => {
                chars.next();
            }
            '|' | '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some(d) if d == c => break,
                        Some(d) => s.push(d),
                        None => {
                            return Err(EtrError::UnparseableModel("unterminated literal".into()))
                        }
                    }
                }
                stack.last_mut().unwrap().push(Sexp::Atom(s));
            }
            _ => {
                let mut s = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_whitespace() || d == '(' || d == ')' {
                        break;
                    }
                    s.push(d);
                    chars.next();
                }
                stack.last_mut().unwrap().push(Sexp::Atom(s));
            }
        }
    }
    if stack.len() != 1 {
        return Err(EtrError::UnparseableModel("unbalanced '('".into()));
    }
    Ok(stack.pop().unwrap())
}

fn numeral(s: &str) -> Option<Rational> {
    if let Some((int, frac)) = s.split_once('.') {
        if int.is_empty()
            || !int.bytes().all(|b| b.is_ascii_digit())
            || !frac.bytes().all(|b| b.is_ascii_digit())
        {
            return None;
        }
        let digits: BigInt = format!("{int}{frac}").parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        Some(Rational::new(digits, scale))
    } else if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) {
        Some(Rational::from_integer(s.parse().ok()?))
    } else {
        None
    }
}

/// Evaluates a rational literal expression built from numerals and
/// `+ - * /`. Anything else (such as algebraic root objects) gives `None`.
fn rational_value(e: &Sexp) -> Option<Rational> {
    match e {
        Sexp::Atom(a) => numeral(a),
        Sexp::List(items) => {
            let (Sexp::Atom(op), args) = items.split_first()? else {
                return None;
            };
            let vals: Vec<Rational> = args.iter().map(rational_value).collect::<Option<_>>()?;
            match (op.as_str(), vals.as_slice()) {
                ("-", [x]) => Some(-x.clone()),
                ("-", [x, rest @ ..]) => Some(rest.iter().fold(x.clone(), |a, b| a - b)),
                ("+", _) => Some(vals.iter().fold(Rational::zero(), |a, b| a + b)),
                ("*", _) => Some(vals.iter().fold(Rational::one(), |a, b| a * b)),
                ("/", [x, y]) if !y.is_zero() => Some(x / y),
                _ => None,
            }
        }
    }
}

/// Reads the status line and the `define-fun` values of `params`.
/// Parameters absent from the model are unconstrained and set to 1/2.
pub fn parse_solver_model(text: &str, params: &[String]) -> Result<SolverVerdict, EtrError> {
    let sexps = parse_sexps(text)?;
    let status = match sexps.first() {
        Some(Sexp::Atom(a)) if a == "sat" => SolverStatus::Sat,
        Some(Sexp::Atom(a)) if a == "unsat" => SolverStatus::Unsat,
        Some(Sexp::Atom(a)) if a == "unknown" => SolverStatus::Unknown,
        _ => SolverStatus::Error,
    };
    let mut verdict = SolverVerdict {
        status,
        witness: None,
        irrational: false,
        raw_model: text.to_string(),
    };
    if status != SolverStatus::Sat {
        return Ok(verdict);
    }
    let wanted: BTreeSet<&str> = params.iter().map(String::as_str).collect();
    let mut witness = Valuation::new();
    let mut stack: Vec<&Sexp> = sexps.iter().skip(1).collect();
    while let Some(e) = stack.pop() {
        let Sexp::List(items) = e else { continue };
        match items.as_slice() {
            [Sexp::Atom(kw), Sexp::Atom(name), Sexp::List(args), _sort, value]
                if kw == "define-fun" =>
            {
                if !args.is_empty() || !wanted.contains(name.as_str()) {
                    continue;
                }
                match rational_value(value) {
                    Some(v) => {
                        witness.insert(name.clone(), v);
                    }
                    None => verdict.irrational = true,
                }
            }
            _ => stack.extend(items.iter()),
        }
    }
    if !verdict.irrational {
        for p in params {
            witness.entry(p.clone()).or_insert_with(|| rat(1, 2));
        }
        verdict.witness = Some(witness);
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::etr::formula::Cmp;
    use crate::polyalg::parse_polynomial;

    #[test]
    fn atom_serialization() {
        let f = Formula::atom(
            Polynomial::var("x"),
            Cmp::Ge,
            Polynomial::constant(rat(1, 2)),
        );
        assert_eq!(formula_to_smt(&f), "(>= x (/ 1 2))");
        let script = to_smt_script(&Formula::True);
        assert!(script.contains("(assert true)"));
        let p = parse_polynomial("-3/2*x*y^2 + x - 2").unwrap();
        assert_eq!(polynomial(&p), "(+ (* (- (/ 3 2)) x y y) x (- 2))");
        assert_eq!(symbol("x_R'"), "|x_R'|");
    }

    #[test]
    fn solver_models() {
        let params = vec!["x".to_string(), "y".to_string()];
        let v = parse_solver_model("sat\n(\n  (define-fun x () Real\n    (/ 1.0 2.0))\n  (define-fun q_s0 () Bool true)\n)\n", &params).unwrap();
        assert_eq!(v.status, SolverStatus::Sat);
        let w = v.witness.unwrap();
        assert_eq!(w["x"], rat(1, 2));
        assert_eq!(w["y"], rat(1, 2));
        let v =
            parse_solver_model("sat\n(model (define-fun x () Real (- 0.25)))", &params).unwrap();
        assert_eq!(v.witness.unwrap()["x"], rat(-1, 4));
        let v = parse_solver_model("unsat\n(error \"model is not available\")", &params).unwrap();
        assert_eq!(v.status, SolverStatus::Unsat);
        assert!(v.witness.is_none());
        let v = parse_solver_model(
            "sat\n((define-fun x () Real (root-obj (+ (^ x 2) (- 2)) 2)))",
            &params,
        )
        .unwrap();
        assert_eq!(v.status, SolverStatus::Sat);
        assert!(v.irrational && v.witness.is_none());
        assert!(parse_solver_model("sat ((", &params).is_err());
    }
}
