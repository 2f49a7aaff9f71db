//! Proof scripts and their text format.
//!
//! ```text
//! goal: K{a} P(b) -> P(b)
//! # comment
//! 1. ?z = a -> (K{?z} P(b) <-> K{a} P(b)) ; axiom SUBK
//! 2. ... ; mp 1 3
//! ```
//!
//! Justifications: `axiom NAME`, `taut`, `mp i j`, `neck i K{t}`,
//! `necas i [?x := t]`, `cnecas i [?x := t]` and
//! `lemma NAME with b1, b2, …` where each binding is `?x := ?y`, `a := t` or
//! `P(args) := formula`.

use std::fmt;

use crate::syntax::{parse_formula, parse_term, print_formula, Formula, Term};

use super::{AxiomId, ProofError};

#[derive(Clone, Debug, PartialEq)]
pub struct ProofScript {
    pub goal: Formula,
    pub steps: Vec<ProofStep>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProofStep {
    pub index: usize,
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Justification {
    Axiom(AxiomId),
    Taut,
    /// `MP(i, j)`: step `j` is `formula_i -> formula_k`.
    Mp(usize, usize),
    NecK(usize, Term),
    NecAs(usize, String, Term),
    /// From `A -> B` infer `[?x := t] A -> B` when `?x` is not free in `B`.
    Cnecas(usize, String, Term),
    Lemma(String, Vec<LemmaBinding>),
}

impl Justification {
    /// Step indices this justification depends on.
    pub fn premises(&self) -> Vec<usize> {
        match self {
            Justification::Axiom(_) | Justification::Taut | Justification::Lemma(..) => vec![],
            Justification::Mp(i, j) => vec![*i, *j],
            Justification::NecK(i, _) | Justification::NecAs(i, ..) | Justification::Cnecas(i, ..) => {
                vec![*i]
            }
        }
    }
}

/// One substitution in a lemma citation, applied in order to the lemma's goal.
#[derive(Clone, Debug, PartialEq)]
pub enum LemmaBinding {
    /// Renames a variable everywhere, binders included.
    Var { from: String, to: String },
    /// Replaces a name by a term.
    Name { from: String, to: Term },
    /// Replaces every occurrence of the atom by a formula.
    Pred { atom: Formula, with: Formula },
}

impl fmt::Display for LemmaBinding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LemmaBinding::Var { from, to } => write!(f, "?{from} := ?{to}"),
            LemmaBinding::Name { from, to } => write!(f, "{from} := {to}"),
            LemmaBinding::Pred { atom, with } => {
                write!(f, "{} := {}", print_formula(atom), print_formula(with))
            }
        }
    }
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom(id) => write!(f, "axiom {id}"),
            Justification::Taut => f.write_str("taut"),
            Justification::Mp(i, j) => write!(f, "mp {i} {j}"),
            Justification::NecK(i, t) => write!(f, "neck {i} K{{{t}}}"),
            Justification::NecAs(i, x, t) => write!(f, "necas {i} [?{x} := {t}]"),
            Justification::Cnecas(i, x, t) => write!(f, "cnecas {i} [?{x} := {t}]"),
            Justification::Lemma(name, bindings) => {
                write!(f, "lemma {name}")?;
                for (n, b) in bindings.iter().enumerate() {
                    f.write_str(if n == 0 { " with " } else { ", " })?;
                    write!(f, "{b}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for ProofScript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "goal: {}", print_formula(&self.goal))?;
        for s in &self.steps {
            writeln!(f, "{}. {} ; {}", s.index, print_formula(&s.formula), s.justification)?;
        }
        Ok(())
    }
}

fn err(line: usize, message: impl Into<String>) -> ProofError {
    ProofError::Script {
        line,
        message: message.into(),
    }
}

pub fn parse_script(text: &str) -> Result<ProofScript, ProofError> {
    let mut goal = None;
    let mut steps: Vec<ProofStep> = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("goal:") {
            if goal.is_some() {
                return Err(err(line, "duplicate goal"));
            }
            if !steps.is_empty() {
                return Err(err(line, "the goal must precede the steps"));
            }
            goal = Some(parse_formula(rest.trim()).map_err(|e| err(line, format!("goal: {e}")))?);
            continue;
        }
        if goal.is_none() {
            return Err(err(line, "expected `goal: <formula>` before the first step"));
        }
        let step = parse_step(content).map_err(|m| err(line, m))?;
        if let Some(prev) = steps.last() {
            if step.index <= prev.index {
                return Err(err(
                    line,
                    format!("step {} does not follow step {}", step.index, prev.index),
                ));
            }
        }
        if let Some(&p) = step.justification.premises().iter().find(|&&p| p >= step.index) {
            return Err(err(line, format!("step {} cites later step {p}", step.index)));
        }
        steps.push(step);
    }
    let goal = goal.ok_or_else(|| err(0, "missing `goal:` line"))?;
    Ok(ProofScript { goal, steps })
}

fn parse_step(content: &str) -> Result<ProofStep, String> {
    let (idx, rest) = content
        .split_once('.')
        .ok_or("expected `<index>. <formula> ; <justification>`")?;
    let index: usize = idx
        .trim()
        .parse()
        .map_err(|_| format!("bad step index `{}`", idx.trim()))?;
    if index == 0 {
        return Err("step indices start at 1".into());
    }
    let (formula, just) = rest.split_once(';').ok_or("missing `;` before the justification")?;
    let formula = parse_formula(formula.trim()).map_err(|e| e.to_string())?;
    let justification = parse_justification(just.trim())?;
    Ok(ProofStep {
        index,
        formula,
        justification,
    })
}

fn parse_justification(text: &str) -> Result<Justification, String> {
    let (head, rest) = match text.split_once(char::is_whitespace) {
        Some((h, r)) => (h, r.trim()),
        None => (text, ""),
    };
    let premise = |s: &str| -> Result<usize, String> { s.parse().map_err(|_| format!("bad step reference `{s}`")) };
    let split_first = |s: &str| -> Result<(usize, String), String> {
        let (i, r) = s
            .split_once(char::is_whitespace)
            .ok_or(format!("`{head}` needs a step and an operator"))?;
        Ok((premise(i)?, r.trim().to_owned()))
    };
    match head {
        "axiom" => Ok(Justification::Axiom(
            rest.parse().map_err(|e: ProofError| e.to_string())?,
        )),
        "taut" if rest.is_empty() => Ok(Justification::Taut),
        "mp" => {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            let [i, j] = parts[..] else {
                return Err("`mp` takes two step numbers".into());
            };
            Ok(Justification::Mp(premise(i)?, premise(j)?))
        }
        "neck" => {
            let (i, op) = split_first(rest)?;
            let inner = op
                .strip_prefix("K{")
                .and_then(|s| s.strip_suffix('}'))
                .ok_or("`neck` expects `K{t}`")?;
            Ok(Justification::NecK(
                i,
                parse_term(inner.trim()).map_err(|e| e.to_string())?,
            ))
        }
        "necas" | "cnecas" => {
            let (i, op) = split_first(rest)?;
            let (x, t) = parse_binder(&op)?;
            Ok(if head == "necas" {
                Justification::NecAs(i, x, t)
            } else {
                Justification::Cnecas(i, x, t)
            })
        }
        "lemma" => {
            let (name, bindings) = match rest.split_once(" with ") {
                Some((n, b)) => (n.trim(), parse_bindings(b)?),
                None => (rest, vec![]),
            };
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err("`lemma` expects a theorem name".into());
            }
            Ok(Justification::Lemma(name.to_owned(), bindings))
        }
        _ => Err(format!("unknown justification `{text}`")),
    }
}

/// `[?x := t]`
fn parse_binder(op: &str) -> Result<(String, Term), String> {
    let inner = op
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or("expected `[?x := t]`")?;
    let (x, t) = inner.split_once(":=").ok_or("expected `[?x := t]`")?;
    let x = x
        .trim()
        .strip_prefix('?')
        .filter(|v| !v.is_empty())
        .ok_or("only variables can be assigned")?;
    Ok((x.to_owned(), parse_term(t.trim()).map_err(|e| e.to_string())?))
}

/// Splits at `sep` outside parentheses, brackets and braces.
fn split_top(text: &str, sep: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' | b'}' => depth -= 1,
            _ => {}
        }
        if depth == 0 && text[i..].starts_with(sep) {
            out.push(text[start..i].to_owned());
            i += sep.len();
            start = i;
            continue;
        }
        i += 1;
    }
    out.push(text[start..].to_owned());
    out
}

fn parse_bindings(text: &str) -> Result<Vec<LemmaBinding>, String> {
    split_top(text, ",")
        .iter()
        .map(|b| {
            let parts = split_top(b, ":=");
            if parts.len() < 2 {
                return Err(format!("binding `{}` should be `lhs := rhs`", b.trim()));
            }
            // Only the first `:=` separates; the right side may contain `<?x := t>`.
            let (lhs, rhs) = (parts[0].trim(), &parts[1..].join(":="));
            let rhs = rhs.trim();
            if let Some(from) = lhs.strip_prefix('?') {
                let to = rhs
                    .strip_prefix('?')
                    .ok_or(format!("variable `{lhs}` can only be renamed to a variable"))?;
                Ok(LemmaBinding::Var {
                    from: from.to_owned(),
                    to: to.to_owned(),
                })
            } else if lhs.starts_with(|c: char| c.is_ascii_lowercase()) {
                Ok(LemmaBinding::Name {
                    from: lhs.to_owned(),
                    to: parse_term(rhs).map_err(|e| e.to_string())?,
                })
            } else {
                let atom = parse_formula(lhs).map_err(|e| e.to_string())?;
                if !matches!(atom, Formula::Pred(..)) {
                    return Err(format!("`{lhs}` is not a predicate atom"));
                }
                Ok(LemmaBinding::Pred {
                    atom,
                    with: parse_formula(rhs).map_err(|e| e.to_string())?,
                })
            }
        })
        .collect()
}
