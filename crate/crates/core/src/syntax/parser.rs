use std::collections::BTreeMap;

use thiserror::Error;

use super::lexer::{tokenize, Token, TokenKind};
use super::{Formula, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("column {}: {kind}", .pos + 1)]
pub struct ParseError {
    /// Character offset into the input.
    pub pos: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("lexical error: {0}")]
    Lexical(String),
    #[error("expected {expected}, found {found}")]
    Unexpected { expected: String, found: String },
    #[error("expected {expected}, found end of input")]
    UnexpectedEnd { expected: String },
    #[error("predicate `{pred}` used with arity {found}, but its arity is {expected}")]
    ArityClash {
        pred: String,
        expected: usize,
        found: usize,
    },
    #[error("predicate `{0}` is not declared in the signature")]
    UndeclaredPredicate(String),
    #[error("assignment binds name `{0}`; only variables may be bound")]
    NameInBinder(String),
}

/// Parses a formula, inferring predicate arities from their first occurrence.
pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    Parser::new(text, None)?.run()
}

/// Parses a formula and checks every predicate against `sig`.
pub fn parse_formula_with(text: &str, sig: &Signature) -> Result<Formula, ParseError> {
    Parser::new(text, Some(sig))?.run()
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text, None)?;
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

struct Parser<'s> {
    tokens: Vec<Token>,
    idx: usize,
    end_pos: usize,
    arities: BTreeMap<String, usize>,
    sig: Option<&'s Signature>,
}

impl<'s> Parser<'s> {
    fn new(text: &str, sig: Option<&'s Signature>) -> Result<Self, ParseError> {
        Ok(Parser {
            tokens: tokenize(text)?,
            idx: 0,
            end_pos: text.chars().count(),
            arities: BTreeMap::new(),
            sig,
        })
    }

    fn run(mut self) -> Result<Formula, ParseError> {
        let f = self.formula()?;
        self.expect_end()?;
        Ok(f)
    }

    fn peek(&self) -> Option<&TokenKind> {
        self.tokens.get(self.idx).map(|t| &t.kind)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.idx).map_or(self.end_pos, |t| t.pos)
    }

    fn error(&self, expected: &str) -> ParseError {
        match self.tokens.get(self.idx) {
            Some(t) => ParseError {
                pos: t.pos,
                kind: ParseErrorKind::Unexpected {
                    expected: expected.into(),
                    found: t.kind.describe(),
                },
            },
            None => ParseError {
                pos: self.end_pos,
                kind: ParseErrorKind::UnexpectedEnd {
                    expected: expected.into(),
                },
            },
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<(), ParseError> {
        if self.peek() == Some(&kind) {
            self.idx += 1;
            Ok(())
        } else {
            Err(self.error(&kind.describe()))
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if self.idx < self.tokens.len() {
            Err(self.error("end of input"))
        } else {
            Ok(())
        }
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implication()?;
        while self.peek() == Some(&TokenKind::Iff) {
            self.idx += 1;
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&TokenKind::Implies) {
            self.idx += 1;
            let rhs = self.implication()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.conjunction()?;
        while self.peek() == Some(&TokenKind::Or) {
            self.idx += 1;
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.unary()?;
        while self.peek() == Some(&TokenKind::And) {
            self.idx += 1;
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Some(TokenKind::Not) => {
                self.idx += 1;
                Ok(Formula::not(self.unary()?))
            }
            Some(TokenKind::Knows) | Some(TokenKind::KnowsDual) => {
                let dual = self.peek() == Some(&TokenKind::KnowsDual);
                self.idx += 1;
                self.expect(TokenKind::LBrace)?;
                let t = self.term()?;
                self.expect(TokenKind::RBrace)?;
                let body = self.unary()?;
                Ok(if dual {
                    Formula::knows_dual(t, body)
                } else {
                    Formula::knows(t, body)
                })
            }
            Some(TokenKind::LBracket) | Some(TokenKind::Lt) => {
                let diamond = self.peek() == Some(&TokenKind::Lt);
                self.idx += 1;
                let var = self.binder()?;
                self.expect(TokenKind::Assign)?;
                let t = self.term()?;
                self.expect(if diamond { TokenKind::Gt } else { TokenKind::RBracket })?;
                let body = self.unary()?;
                Ok(if diamond {
                    Formula::assign_dual(var, t, body)
                } else {
                    Formula::assign(var, t, body)
                })
            }
            _ => self.atom(),
        }
    }

    fn binder(&mut self) -> Result<String, ParseError> {
        match self.peek().cloned() {
            Some(TokenKind::Var(v)) => {
                self.idx += 1;
                Ok(v)
            }
            Some(TokenKind::Name(n)) => Err(ParseError {
                pos: self.pos(),
                kind: ParseErrorKind::NameInBinder(n),
            }),
            _ => Err(self.error("a variable")),
        }
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().cloned() {
            Some(TokenKind::Var(v)) => {
                self.idx += 1;
                Ok(Term::Var(v))
            }
            Some(TokenKind::Name(n)) => {
                self.idx += 1;
                Ok(Term::Name(n))
            }
            _ => Err(self.error("a term")),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        match self.peek().cloned() {
            Some(TokenKind::True) => {
                self.idx += 1;
                Ok(Formula::True)
            }
            Some(TokenKind::False) => {
                self.idx += 1;
                Ok(Formula::False)
            }
            Some(TokenKind::LParen) => {
                self.idx += 1;
                let f = self.formula()?;
                self.expect(TokenKind::RParen)?;
                Ok(f)
            }
            Some(TokenKind::Pred(p)) => {
                let pos = self.pos();
                self.idx += 1;
                let mut args = Vec::new();
                if self.peek() == Some(&TokenKind::LParen) {
                    self.idx += 1;
                    args.push(self.term()?);
                    while self.peek() == Some(&TokenKind::Comma) {
                        self.idx += 1;
                        args.push(self.term()?);
                    }
                    self.expect(TokenKind::RParen)?;
                }
                self.check_arity(&p, args.len(), pos)?;
                Ok(Formula::Pred(p, args))
            }
            Some(TokenKind::Var(_)) | Some(TokenKind::Name(_)) => {
                let lhs = self.term()?;
                self.expect(TokenKind::Eq)?;
                let rhs = self.term()?;
                Ok(Formula::Eq(lhs, rhs))
            }
            _ => Err(self.error("a formula")),
        }
    }

    fn check_arity(&mut self, pred: &str, found: usize, pos: usize) -> Result<(), ParseError> {
        let expected = match self.sig {
            Some(sig) => match sig.arity(pred) {
                Some(n) => n,
                None => {
                    return Err(ParseError {
                        pos,
                        kind: ParseErrorKind::UndeclaredPredicate(pred.into()),
                    })
                }
            },
            None => *self.arities.entry(pred.to_owned()).or_insert(found),
        };
        if expected != found {
            return Err(ParseError {
                pos,
                kind: ParseErrorKind::ArityClash {
                    pred: pred.into(),
                    expected,
                    found,
                },
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str) -> Term {
        Term::var(x)
    }
    fn n(x: &str) -> Term {
        Term::name(x)
    }

    #[test]
    fn distinguishing_formula_desugars() {
        let f = parse_formula("[?x := a] Kh{a} P(?x)").unwrap();
        let expected = Formula::assign(
            "x",
            n("a"),
            Formula::not(Formula::knows(n("a"), Formula::not(Formula::pred("P", vec![v("x")])))),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn reflexivity_atom() {
        assert_eq!(parse_formula("a = a").unwrap(), Formula::eq(n("a"), n("a")));
    }

    #[test]
    fn arity_clash() {
        let e = parse_formula("P(a) & P(a, b)").unwrap_err();
        assert_eq!(
            e.kind,
            ParseErrorKind::ArityClash {
                pred: "P".into(),
                expected: 1,
                found: 2
            }
        );
        assert_eq!(e.pos, 7);
    }

    #[test]
    fn signature_arity_is_global() {
        let mut sig = Signature::default();
        sig.predicates.insert("P".into(), 2);
        assert!(matches!(
            parse_formula_with("P(a)", &sig).unwrap_err().kind,
            ParseErrorKind::ArityClash { .. }
        ));
        assert!(matches!(
            parse_formula_with("Q(a)", &sig).unwrap_err().kind,
            ParseErrorKind::UndeclaredPredicate(_)
        ));
        assert!(parse_formula_with("P(a, ?x)", &sig).is_ok());
    }

    #[test]
    fn name_in_binder() {
        let e = parse_formula("[a := b] P(a)").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::NameInBinder("a".into()));
        assert_eq!(e.pos, 1);
    }

    #[test]
    fn precedence_and_associativity() {
        let p = |s| Formula::pred(s, vec![]);
        assert_eq!(
            parse_formula("A -> B -> C").unwrap(),
            Formula::implies(p("A"), Formula::implies(p("B"), p("C")))
        );
        assert_eq!(
            parse_formula("A <-> B <-> C").unwrap(),
            Formula::iff(Formula::iff(p("A"), p("B")), p("C"))
        );
        assert_eq!(
            parse_formula("A & B | C -> D <-> E").unwrap(),
            Formula::iff(
                Formula::implies(Formula::or(Formula::and(p("A"), p("B")), p("C")), p("D")),
                p("E")
            )
        );
        assert_eq!(
            parse_formula("~A & B").unwrap(),
            Formula::and(Formula::not(p("A")), p("B"))
        );
        assert_eq!(
            parse_formula("K{a} ?x = ?y -> K{a} ?x = ?y").unwrap(),
            Formula::implies(
                Formula::knows(n("a"), Formula::eq(v("x"), v("y"))),
                Formula::knows(n("a"), Formula::eq(v("x"), v("y")))
            )
        );
    }

    #[test]
    fn diamond_assignment() {
        assert_eq!(
            parse_formula("<?x := a> P(?x)").unwrap(),
            Formula::assign_dual("x", n("a"), Formula::pred("P", vec![v("x")]))
        );
    }

    #[test]
    fn grammar_errors() {
        let e = parse_formula("P(a").unwrap_err();
        assert_eq!(e.pos, 3);
        assert!(matches!(e.kind, ParseErrorKind::UnexpectedEnd { .. }));
        assert!(parse_formula("P()").is_err());
        assert!(parse_formula("a").is_err());
        assert!(parse_formula("P(a) Q(b)").is_err());
        assert!(parse_formula("").is_err());
        assert!(parse_formula("K{P} Q").is_err());
    }

    #[test]
    fn zero_ary_predicates() {
        assert_eq!(
            parse_formula("Rain -> Rain").unwrap(),
            Formula::implies(Formula::pred("Rain", vec![]), Formula::pred("Rain", vec![]))
        );
        assert!(parse_formula("Rain & Rain(a)").is_err());
    }

    #[test]
    fn terms() {
        assert_eq!(parse_term("?x").unwrap(), v("x"));
        assert_eq!(parse_term(" bob ").unwrap(), n("bob"));
        assert!(parse_term("Bob").is_err());
        assert!(parse_term("a b").is_err());
    }
}
