use super::parser::{ParseError, ParseErrorKind};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    /// `?ident`, stored without the sigil.
    Var(String),
    /// Lower-case initial identifier.
    Name(String),
    /// Upper-case initial identifier other than the `K`/`Kh` keywords.
    Pred(String),
    Knows,
    KnowsDual,
    True,
    False,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Assign,
    Eq,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Comma,
}

impl TokenKind {
    pub(crate) fn describe(&self) -> String {
        match self {
            TokenKind::Var(v) => format!("variable `?{v}`"),
            TokenKind::Name(n) => format!("name `{n}`"),
            TokenKind::Pred(p) => format!("predicate `{p}`"),
            TokenKind::Knows => "`K`".into(),
            TokenKind::KnowsDual => "`Kh`".into(),
            TokenKind::True => "`true`".into(),
            TokenKind::False => "`false`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::LBrace => "`{`".into(),
            TokenKind::RBrace => "`}`".into(),
            TokenKind::LBracket => "`[`".into(),
            TokenKind::RBracket => "`]`".into(),
            TokenKind::Lt => "`<`".into(),
            TokenKind::Gt => "`>`".into(),
            TokenKind::Assign => "`:=`".into(),
            TokenKind::Eq => "`=`".into(),
            TokenKind::Not => "`~`".into(),
            TokenKind::And => "`&`".into(),
            TokenKind::Or => "`|`".into(),
            TokenKind::Implies => "`->`".into(),
            TokenKind::Iff => "`<->`".into(),
            TokenKind::Comma => "`,`".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    /// Character offset of the first character.
    pub pos: usize,
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

fn is_ident_continue(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let lex_err = |pos: usize, msg: String| ParseError {
        pos,
        kind: ParseErrorKind::Lexical(msg),
    };
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let single = |k: TokenKind| Token { kind: k, pos: start };
        match c {
            '(' => {
                out.push(single(TokenKind::LParen));
                i += 1;
            }
            ')' => {
                out.push(single(TokenKind::RParen));
                i += 1;
            }
            '{' => {
                out.push(single(TokenKind::LBrace));
                i += 1;
            }
            '}' => {
                out.push(single(TokenKind::RBrace));
                i += 1;
            }
            '[' => {
                out.push(single(TokenKind::LBracket));
                i += 1;
            }
            ']' => {
                out.push(single(TokenKind::RBracket));
                i += 1;
            }
            '>' => {
                out.push(single(TokenKind::Gt));
                i += 1;
            }
            '=' => {
                out.push(single(TokenKind::Eq));
                i += 1;
            }
            '~' => {
                out.push(single(TokenKind::Not));
                i += 1;
            }
            '&' => {
                out.push(single(TokenKind::And));
                i += 1;
            }
            '|' => {
                out.push(single(TokenKind::Or));
                i += 1;
            }
            ',' => {
                out.push(single(TokenKind::Comma));
                i += 1;
            }
            ':' => {
                if chars.get(i + 1) == Some(&'=') {
                    out.push(single(TokenKind::Assign));
                    i += 2;
                } else {
                    return Err(lex_err(start, "expected `:=`".into()));
                }
            }
            '-' => {
                if chars.get(i + 1) == Some(&'>') {
                    out.push(single(TokenKind::Implies));
                    i += 2;
                } else {
                    return Err(lex_err(start, "expected `->`".into()));
                }
            }
            '<' => {
                if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                    out.push(single(TokenKind::Iff));
                    i += 3;
                } else {
                    out.push(single(TokenKind::Lt));
                    i += 1;
                }
            }
            '?' => {
                i += 1;
                let s = i;
                if i < chars.len() && is_ident_start(chars[i]) {
                    while i < chars.len() && is_ident_continue(chars[i]) {
                        i += 1;
                    }
                    let id: String = chars[s..i].iter().collect();
                    out.push(Token {
                        kind: TokenKind::Var(id),
                        pos: start,
                    });
                } else {
                    return Err(lex_err(start, "`?` must be followed by an identifier".into()));
                }
            }
            c if is_ident_start(c) => {
                while i < chars.len() && is_ident_continue(chars[i]) {
                    i += 1;
                }
                let id: String = chars[start..i].iter().collect();
                let kind = match id.as_str() {
                    "K" => TokenKind::Knows,
                    "Kh" => TokenKind::KnowsDual,
                    "true" => TokenKind::True,
                    "false" => TokenKind::False,
                    _ if c.is_ascii_uppercase() => TokenKind::Pred(id),
                    _ => TokenKind::Name(id),
                };
                out.push(Token { kind, pos: start });
            }
            other => {
                return Err(lex_err(start, format!("unexpected character `{other}`")));
            }
        }
    }
    Ok(out)
}
