use std::collections::BTreeSet;
use std::fmt::Write;

use crate::io::{is_identifier, strip_comment, syntax, IoError};
use crate::model::{ModelBuilder, ModelKind, ParametricModel};
use crate::polyalg::{parse_polynomial, PolyError};

struct Header {
    kind: Option<ModelKind>,
    params: Option<Vec<String>>,
    states: Option<Vec<String>>,
    init: Option<String>,
    targets: Option<Vec<String>>,
}

fn column(line: &str, part: &str) -> usize {
    part.as_ptr() as usize - line.as_ptr() as usize + 1
}

fn names(raw: &str, rest: &str, lineno: usize) -> Result<Vec<String>, IoError> {
    let mut out = Vec::new();
    for tok in rest.split_whitespace() {
        if !is_identifier(tok) {
            return Err(syntax(
                lineno,
                column(raw, tok),
                format!("invalid name '{tok}'"),
            ));
        }
        if out.iter().any(|n| n == tok) {
            return Err(syntax(
                lineno,
                column(raw, tok),
                format!("duplicate name '{tok}'"),
            ));
        }
        out.push(tok.to_string());
    }
    Ok(out)
}

/// Parses the textual model format.
pub fn parse_model(text: &str) -> Result<ParametricModel, IoError> {
    let mut header = Header {
        kind: None,
        params: None,
        states: None,
        init: None,
        targets: None,
    };
    struct Line<'a> {
        lineno: usize,
        raw: &'a str,
        from: &'a str,
        action: Option<&'a str>,
        to: &'a str,
        label: &'a str,
    }
    let mut lines = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let body = strip_comment(raw);
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col0 = column(raw, trimmed);
        if let Some(directive) = trimmed.strip_prefix('@') {
            let (key, rest) = match directive.find(char::is_whitespace) {
                Some(k) => (&directive[..k], &directive[k..]),
                None => (directive, ""),
            };
            let dup = |set: bool| -> Result<(), IoError> {
                if set {
                    Err(syntax(lineno, col0, format!("duplicate @{key} directive")))
                } else {
                    Ok(())
                }
            };
            match key {
                "type" => {
                    dup(header.kind.is_some())?;
                    header.kind = Some(match rest.trim() {
                        "pmc" => ModelKind::Pmc,
                        "pmdp" => ModelKind::Pmdp,
                        other => {
                            return Err(syntax(
                                lineno,
                                col0,
                                format!("unknown model type '{other}', expected pmc or pmdp"),
                            ))
                        }
                    });
                }
                "params" => {
                    dup(header.params.is_some())?;
                    header.params = Some(names(raw, rest, lineno)?);
                }
                "states" => {
                    dup(header.states.is_some())?;
                    let s = names(raw, rest, lineno)?;
                    if s.is_empty() {
                        return Err(syntax(lineno, col0, "@states needs at least one state"));
                    }
                    header.states = Some(s);
                }
                "init" => {
                    dup(header.init.is_some())?;
                    let n = names(raw, rest, lineno)?;
                    if n.len() != 1 {
                        return Err(syntax(lineno, col0, "@init takes exactly one state"));
                    }
                    header.init = n.into_iter().next();
                }
                "targets" => {
                    dup(header.targets.is_some())?;
                    header.targets = Some(names(raw, rest, lineno)?);
                }
                other => {
                    return Err(syntax(lineno, col0, format!("unknown directive @{other}")));
                }
            }
            continue;
        }

        let Some(arrow) = body.find("->") else {
            return Err(syntax(
                lineno,
                col0,
                "expected a transition 'state -> state : label'",
            ));
        };
        let lhs = body[..arrow].trim();
        let rhs = &body[arrow + 2..];
        let Some(colon) = rhs.find(':') else {
            return Err(syntax(
                lineno,
                column(raw, rhs),
                "missing ':' before the label",
            ));
        };
        let to = rhs[..colon].trim();
        let label = &rhs[colon + 1..];
        let (from, action) = match lhs.find('[') {
            Some(b) => {
                let from = lhs[..b].trim();
                let inner = &lhs[b + 1..];
                let Some(close) = inner.find(']') else {
                    return Err(syntax(lineno, column(raw, inner), "missing ']'"));
                };
                if !inner[close + 1..].trim().is_empty() {
                    return Err(syntax(
                        lineno,
                        column(raw, inner),
                        "unexpected text after ']'",
                    ));
                }
                let a = inner[..close].trim();
                if !is_identifier(a) {
                    return Err(syntax(
                        lineno,
                        column(raw, inner),
                        format!("invalid action '{a}'"),
                    ));
                }
                (from, Some(a))
            }
            None => (lhs, None),
        };
        if !is_identifier(from) {
            return Err(syntax(lineno, col0, format!("invalid state name '{from}'")));
        }
        if !is_identifier(to) {
            let c = if to.is_empty() {
                column(raw, rhs)
            } else {
                column(raw, to)
            };
            return Err(syntax(lineno, c, format!("invalid state name '{to}'")));
        }
        lines.push(Line {
            lineno,
            raw,
            from,
            action,
            to,
            label,
        });
    }

    let kind = header
        .kind
        .ok_or_else(|| syntax(1, 1, "missing @type directive"))?;
    let states = header
        .states
        .ok_or_else(|| syntax(1, 1, "missing @states directive"))?;
    let init = header
        .init
        .ok_or_else(|| syntax(1, 1, "missing @init directive"))?;
    let params = header.params.unwrap_or_default();
    let targets = header.targets.unwrap_or_default();
    let declared: BTreeSet<&str> = states.iter().map(String::as_str).collect();
    let declared_params: BTreeSet<&str> = params.iter().map(String::as_str).collect();

    let mut b = ModelBuilder::new(kind);
    b.params(&params);
    b.states(&states);
    for name in std::iter::once(&init).chain(targets.iter()) {
        if !declared.contains(name.as_str()) {
            return Err(IoError::Semantic(format!("undeclared state '{name}'")));
        }
    }
    b.init(&init);
    b.targets(&targets);

    for l in &lines {
        for s in [l.from, l.to] {
            if !declared.contains(s) {
                return Err(syntax(
                    l.lineno,
                    column(l.raw, s),
                    format!("undeclared state '{s}'"),
                ));
            }
        }
        let action = match (kind, l.action) {
            (ModelKind::Pmc, None) => "",
            (ModelKind::Pmc, Some(a)) => {
                return Err(syntax(
                    l.lineno,
                    column(l.raw, a),
                    "actions are not allowed in a pmc",
                ))
            }
            (ModelKind::Pmdp, Some(a)) => a,
            (ModelKind::Pmdp, None) => {
                return Err(syntax(
                    l.lineno,
                    column(l.raw, l.from),
                    "pmdp transitions need an action in brackets",
                ))
            }
        };
        let poly = parse_polynomial(l.label).map_err(|e| match e {
            PolyError::Parse { pos, msg } => syntax(l.lineno, column(l.raw, l.label) + pos, msg),
            other => syntax(l.lineno, column(l.raw, l.label), other.to_string()),
        })?;
        for v in poly.vars() {
            if !declared_params.contains(v.as_ref()) {
                return Err(syntax(
                    l.lineno,
                    column(l.raw, l.label),
                    format!("undeclared parameter '{v}'"),
                ));
            }
        }
        b.transition_poly(l.from, action, l.to, poly);
    }
    b.build().map_err(|e| IoError::Semantic(e.to_string()))
}

/// Prints a model in the canonical textual format.
pub fn print_model(model: &ParametricModel) -> String {
    print_model_with_header(model, &[])
}

/// Prints a model preceded by `#` comment lines.
pub fn print_model_with_header(model: &ParametricModel, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "@type {}", model.kind);
    let _ = writeln!(out, "@params {}", model.params.join(" ")).map(|_| ());
    let _ = writeln!(out, "@states {}", model.states.join(" "));
    let _ = writeln!(out, "@init {}", model.states[model.init]);
    let targets: Vec<&str> = model
        .targets
        .iter()
        .map(|&t| model.states[t].as_str())
        .collect();
    let _ = writeln!(out, "@targets {}", targets.join(" "));
    for (s, chs) in model.choices.iter().enumerate() {
        for ch in chs {
            for (t, label) in &ch.transitions {
                match model.kind {
                    ModelKind::Pmc => {
                        let _ = writeln!(
                            out,
                            "{} -> {} : {}",
                            model.states[s], model.states[*t], label
                        );
                    }
                    ModelKind::Pmdp => {
                        let _ = writeln!(
                            out,
                            "{} [{}] -> {} : {}",
                            model.states[s], model.actions[ch.action], model.states[*t], label
                        );
                    }
                }
            }
        }
    }
    out.lines()
        .map(|l| l.trim_end())
        .collect::<Vec<_>>()
        .join("\n")
        + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG4A: &str = "\
@type pmc
@params x y
@states s0 s1 s2 s3
@init s0
@targets s2
s0 -> s1 : x
s0 -> s2 : 1 - x
s1 -> s2 : y
s1 -> s3 : 1 - y
s2 -> s2 : 1
s3 -> s3 : 1
";

    #[test]
    fn canonical_round_trip() {
        let m = parse_model(FIG4A).unwrap();
        assert_eq!(m.num_states(), 4);
        let printed = print_model(&m);
        assert_eq!(
            printed,
            FIG4A.replace("1 - x", "-x + 1").replace("1 - y", "-y + 1")
        );
        assert_eq!(parse_model(&printed).unwrap(), m);
    }

    #[test]
    fn comments_and_blank_lines() {
        let src = format!(
            "# header\n\n{}",
            FIG4A.replace("s1 -> s2 : y", "s1 -> s2 : y   # trailing")
        );
        assert!(parse_model(&src).is_ok());
    }

    #[test]
    fn duplicate_init_is_a_syntax_error() {
        let src = FIG4A.replace("@init s0", "@init s0\n@init s1");
        assert!(matches!(
            parse_model(&src),
            Err(IoError::Syntax { line: 5, .. })
        ));
    }

    #[test]
    fn label_errors_carry_columns() {
        let src = FIG4A.replace("s1 -> s2 : y", "s1 -> s2 : y +* 2");
        match parse_model(&src) {
            Err(IoError::Syntax { line, col, .. }) => {
                assert_eq!(line, 8);
                assert_eq!(col, 15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn undeclared_names() {
        let src = FIG4A.replace("s1 -> s2 : y", "s1 -> s9 : y");
        assert!(matches!(parse_model(&src), Err(IoError::Syntax { .. })));
        let src = FIG4A.replace("s1 -> s2 : y", "s1 -> s2 : z");
        assert!(matches!(parse_model(&src), Err(IoError::Syntax { .. })));
    }

    #[test]
    fn structural_violations_are_semantic() {
        let src = FIG4A.replace("s3 -> s3 : 1\n", "");
        assert!(matches!(parse_model(&src), Err(IoError::Semantic(_))));
    }

    #[test]
    fn pmdp_actions() {
        let src = "@type pmdp\n@params x\n@states a b\n@init a\n@targets b\n\
                   a [go] -> b : x\na [go] -> a : 1 - x\na [stay] -> a : 1\nb [stay] -> b : 1\n";
        let m = parse_model(src).unwrap();
        assert_eq!(m.choices[0].len(), 2);
        assert_eq!(parse_model(&print_model(&m)).unwrap(), m);
    }
}
