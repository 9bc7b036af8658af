use thiserror::Error;

/// A fully parenthesized product: a strictly binary tree whose leaves carry
/// variable names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Var(String),
    Mul(Box<Term>, Box<Term>),
}

impl Term {
    /// Leaf word, left to right.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Term::Var(v) => out.push(v),
            Term::Mul(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Mul(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }
}

impl std::fmt::Display for Term {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::Mul(l, r) => write!(f, "({l}*{r})"),
        }
    }
}

/// A parsed law: two terms multiplying the same leaf word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawAst {
    pub lhs: Term,
    pub rhs: Term,
    /// Distinct variable names in first-occurrence order.
    pub variables: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("empty side of law")]
    EmptySide,
    #[error("sides multiply different words: left is `{lhs}`, right is `{rhs}`")]
    LeafMismatch { lhs: String, rhs: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Star,
    Eq,
    Ident(String),
}

fn tokenize(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let mut toks = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                toks.push((Tok::LParen, pos));
            }
            ')' => {
                chars.next();
                toks.push((Tok::RParen, pos));
            }
            '*' => {
                chars.next();
                toks.push((Tok::Star, pos));
            }
            '=' => {
                chars.next();
                toks.push((Tok::Eq, pos));
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        name.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                toks.push((Tok::Ident(name), pos));
            }
            _ => {
                return Err(ParseError::Syntax {
                    position: pos,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(toks)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(ParseError::Syntax {
                position: self.here(),
                message: format!("expected {what}"),
            }),
        }
    }

    // term := var | "(" term "*" term ")"
    fn term(&mut self) -> Result<Term, ParseError> {
        match self.bump() {
            Some(Tok::Ident(name)) => Ok(Term::Var(name)),
            Some(Tok::LParen) => {
                let l = self.term()?;
                self.expect(Tok::Star, "`*`")?;
                let r = self.term()?;
                self.expect(Tok::RParen, "closing `)` (unbalanced parenthesis)")?;
                Ok(Term::Mul(Box::new(l), Box::new(r)))
            }
            _ => Err(ParseError::Syntax {
                position: self.here(),
                message: "expected variable or `(`".into(),
            }),
        }
    }

    // side := term | term "*" term   (outermost parentheses optional)
    fn side(&mut self) -> Result<Term, ParseError> {
        let l = self.term()?;
        if self.peek() == Some(&Tok::Star) {
            self.bump();
            let r = self.term()?;
            Ok(Term::Mul(Box::new(l), Box::new(r)))
        } else {
            Ok(l)
        }
    }
}

/// Parse an identity string into a [`LawAst`].
pub fn parse(text: &str) -> Result<LawAst, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() || toks.first().map(|(t, _)| t) == Some(&Tok::Eq) {
        return Err(ParseError::EmptySide);
    }
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let lhs = p.side()?;
    p.expect(Tok::Eq, "`=`")?;
    if p.peek().is_none() {
        return Err(ParseError::EmptySide);
    }
    let rhs = p.side()?;
    if p.peek().is_some() {
        return Err(ParseError::Syntax {
            position: p.here(),
            message: "trailing input after law".into(),
        });
    }

    let lw = lhs.leaves();
    let rw = rhs.leaves();
    if lw != rw {
        return Err(ParseError::LeafMismatch {
            lhs: lw.join(","),
            rhs: rw.join(","),
        });
    }
    let mut variables = Vec::new();
    for v in &lw {
        if !variables.iter().any(|u: &String| u == v) {
            variables.push((*v).to_string());
        }
    }
    Ok(LawAst { lhs, rhs, variables })
}
