use std::collections::BTreeSet;

use crate::io::{is_identifier, strip_comment, syntax, IoError};
use crate::polyalg::{parse_polynomial, PolyError, Polynomial};

/// A list of polynomials over declared variables, read as the strict
/// system `f_i < 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    pub vars: Vec<String>,
    pub polys: Vec<Polynomial>,
}

/// Parses an `@vars` header followed by one polynomial per line. When
/// `degree_bound` is given every polynomial must respect it.
pub fn parse_poly_system(text: &str, degree_bound: Option<u64>) -> Result<PolySystem, IoError> {
    let mut vars: Option<Vec<String>> = None;
    let mut polys = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = strip_comment(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = trimmed.as_ptr() as usize - raw.as_ptr() as usize + 1;
        if let Some(rest) = trimmed.strip_prefix("@vars") {
            if vars.is_some() {
                return Err(syntax(lineno, col, "duplicate @vars directive"));
            }
            let mut v = Vec::new();
            for tok in rest.split_whitespace() {
                if !is_identifier(tok) || v.iter().any(|x| x == tok) {
                    return Err(syntax(lineno, col, format!("invalid variable '{tok}'")));
                }
                v.push(tok.to_string());
            }
            vars = Some(v);
            continue;
        }
        let Some(declared) = &vars else {
            return Err(syntax(lineno, col, "polynomial before the @vars directive"));
        };
        let p = parse_polynomial(trimmed).map_err(|e| match e {
            PolyError::Parse { pos, msg } => syntax(lineno, col + pos, msg),
            other => syntax(lineno, col, other.to_string()),
        })?;
        let known: BTreeSet<&str> = declared.iter().map(String::as_str).collect();
        if let Some(v) = p.vars().iter().find(|v| !known.contains(v.as_ref())) {
            return Err(syntax(lineno, col, format!("undeclared variable '{v}'")));
        }
        if let Some(bound) = degree_bound {
            if p.degree() > bound {
                return Err(IoError::DegreeExceeded {
                    line: lineno,
                    degree: p.degree(),
                    bound,
                });
            }
        }
        polys.push(p);
    }
    Ok(PolySystem {
        vars: vars.unwrap_or_default(),
        polys,
    })
}
