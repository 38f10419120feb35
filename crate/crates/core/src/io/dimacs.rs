use serde::{Deserialize, Serialize};

use crate::io::{syntax, IoError};

/// A CNF formula where every clause has exactly three literals. Literals
/// follow the DIMACS convention: `v` or `-v` for variable `v >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cnf3 {
    pub num_vars: usize,
    pub clauses: Vec<[i32; 3]>,
}

impl Cnf3 {
    pub fn is_satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let v = assignment[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    v
                } else {
                    !v
                }
            })
        })
    }

    /// Brute force satisfiability check.
    pub fn is_satisfiable(&self) -> bool {
        self.satisfying_assignment().is_some()
    }

    pub fn satisfying_assignment(&self) -> Option<Vec<bool>> {
        let n = self.num_vars;
        (0u64..(1u64 << n)).find_map(|bits| {
            let a: Vec<bool> = (0..n).map(|i| bits >> i & 1 == 1).collect();
            self.is_satisfied_by(&a).then_some(a)
        })
    }
}

/// Parses DIMACS CNF. Clauses with fewer than three literals are padded
/// by repeating their last literal.
pub fn parse_dimacs(text: &str) -> Result<Cnf3, IoError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<i32> = Vec::new();
    let mut clause_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(syntax(lineno, 1, "duplicate problem line"));
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(syntax(lineno, 1, "expected 'p cnf <vars> <clauses>'"));
            }
            let v = parts[2]
                .parse()
                .map_err(|_| syntax(lineno, 1, "invalid variable count"))?;
            let c = parts[3]
                .parse()
                .map_err(|_| syntax(lineno, 1, "invalid clause count"))?;
            header = Some((v, c));
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(syntax(lineno, 1, "clause before the problem line"));
        };
        for tok in line.split_whitespace() {
            let col = tok.as_ptr() as usize - raw.as_ptr() as usize + 1;
            let lit: i32 = tok
                .parse()
                .map_err(|_| syntax(lineno, col, format!("invalid literal '{tok}'")))?;
            if current.is_empty() {
                clause_line = lineno;
            }
            if lit == 0 {
                clauses.push(close_clause(&current, clause_line)?);
                current.clear();
                continue;
            }
            if lit.unsigned_abs() as usize > num_vars {
                return Err(syntax(
                    lineno,
                    col,
                    format!("literal {lit} exceeds the variable count"),
                ));
            }
            current.push(lit);
        }
    }
    let Some((num_vars, num_clauses)) = header else {
        return Err(syntax(1, 1, "missing problem line"));
    };
    if !current.is_empty() {
        clauses.push(close_clause(&current, clause_line)?);
    }
    if clauses.len() != num_clauses {
        return Err(IoError::Semantic(format!(
            "problem line announces {num_clauses} clauses, found {}",
            clauses.len()
        )));
    }
    Ok(Cnf3 { num_vars, clauses })
}

fn close_clause(lits: &[i32], line: usize) -> Result<[i32; 3], IoError> {
    match lits.len() {
        0 => Err(syntax(line, 1, "empty clause")),
        1 => Ok([lits[0]; 3]),
        2 => Ok([lits[0], lits[1], lits[1]]),
        3 => Ok([lits[0], lits[1], lits[2]]),
        len => Err(IoError::NotThreeCnf { line, len }),
    }
}
