use thiserror::Error;

use crate::dsl::Term;

use super::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

type PResult<T> = Result<T, ParseError>;

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

/// Parses a selector list into a term of sort `n`.
///
/// Supported: type and universal selectors, `.class`, `#id`, attribute tests
/// (`[a]`, `=`, `~=`, `^=`, `$=`, `*=`), the four combinators, `,`, and the
/// pseudo-classes `:not`, `:nth-child`, `:nth-last-child`, `:first-child`,
/// `:last-child`, `:only-child` and `:is`/`:where` (leading only). Both `+` and
/// `~` denote "preceded by a sibling".
///
/// ```
/// use multisynth::css::{parse_selector, print_selector};
/// let t = parse_selector("tr td:first-child, tr td:last-child").unwrap();
/// assert_eq!(print_selector(&t), "tr td:first-child, tr td:last-child");
/// ```
pub fn parse_selector(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
    };
    p.ws();
    let t = p.list()?;
    p.ws();
    match p.peek() {
        None => Ok(t),
        Some(c) => Err(p.err(&format!("unexpected '{c}'"))),
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '-' || c == '_'
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError {
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn ws(&mut self) -> bool {
        let start = self.pos;
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
        self.pos > start
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn ident(&mut self) -> PResult<String> {
        let start = self.pos;
        while self.peek().is_some_and(is_ident_char) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected identifier"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn list(&mut self) -> PResult<Term> {
        let mut t = self.complex()?;
        loop {
            self.ws();
            if !self.eat(',') {
                return Ok(t);
            }
            self.ws();
            let r = self.complex()?;
            t = union(t, r);
        }
    }

    fn complex(&mut self) -> PResult<Term> {
        let mut t = self.compound()?;
        loop {
            let had_ws = self.ws();
            let comb = match self.peek() {
                Some('>') => Some(ops::CHILDREN),
                Some('+') | Some('~') => Some(ops::RIGHT_SIBLING),
                _ => None,
            };
            let op = match comb {
                Some(op) => {
                    self.pos += 1;
                    self.ws();
                    op
                }
                None if had_ws && self.starts_compound() => ops::DESCENDANTS,
                None => {
                    if had_ws {
                        // let the caller see the whitespace-free position
                        while self.pos > 0 && self.chars[self.pos - 1].is_whitespace() {
                            self.pos -= 1;
                        }
                    }
                    return Ok(t);
                }
            };
            let r = self.compound()?;
            t = Term::apply_unchecked(op, sorts::N, vec![t, r]);
        }
    }

    fn starts_compound(&self) -> bool {
        matches!(self.peek(), Some(c) if is_ident_char(c) || matches!(c, '*' | '.' | '#' | '[' | ':'))
    }

    fn compound(&mut self) -> PResult<Term> {
        let start = self.pos;
        let mut cur = any();
        if self.chars[self.pos..].starts_with(&[':', 'i', 's', '('])
            || self.chars[self.pos..].starts_with(&[':', 'w', 'h', 'e', 'r', 'e', '('])
        {
            self.pos += if self.chars[self.pos + 1] == 'i' {
                4
            } else {
                7
            };
            self.ws();
            cur = self.list()?;
            self.ws();
            self.expect(')')?;
        }
        if self.eat('*') {
        } else if self.peek().is_some_and(is_ident_char) {
            let tag = self.ident()?;
            cur = tag_equals(cur, &tag);
        }
        loop {
            match self.peek() {
                Some('.') => {
                    self.pos += 1;
                    let c = self.ident()?;
                    cur = has_class(cur, &c);
                }
                Some('#') => {
                    self.pos += 1;
                    let id = self.ident()?;
                    cur = attribute_equals(cur, "id", &id);
                }
                Some('[') => {
                    self.pos += 1;
                    cur = self.attribute(cur)?;
                }
                Some(':') => {
                    cur = self.pseudo(cur)?;
                }
                _ => break,
            }
        }
        if self.pos == start {
            return Err(self.err("expected selector"));
        }
        Ok(cur)
    }

    fn value(&mut self) -> PResult<String> {
        match self.peek() {
            Some(q @ ('"' | '\'')) => {
                self.pos += 1;
                let mut s = String::new();
                loop {
                    match self.peek() {
                        None => return Err(self.err("unterminated string")),
                        Some(c) if c == q => {
                            self.pos += 1;
                            return Ok(s);
                        }
                        Some('\\') => {
                            self.pos += 1;
                            let c = self.peek().ok_or_else(|| self.err("dangling backslash"))?;
                            s.push(c);
                            self.pos += 1;
                        }
                        Some(c) => {
                            s.push(c);
                            self.pos += 1;
                        }
                    }
                }
            }
            _ => self.ident(),
        }
    }

    fn attribute(&mut self, cur: Term) -> PResult<Term> {
        self.ws();
        let name = self.ident()?;
        self.ws();
        if self.eat(']') {
            return Ok(attribute_contains(cur, &name, string("")));
        }
        let op = match self.peek() {
            Some('=') => None,
            Some(c @ ('~' | '^' | '$' | '*')) => {
                self.pos += 1;
                Some(c)
            }
            _ => return Err(self.err("unsupported attribute operator")),
        };
        self.expect('=')?;
        self.ws();
        let v = self.value()?;
        self.ws();
        self.expect(']')?;
        Ok(match op {
            None => attribute_equals(cur, &name, &v),
            Some('~') => attribute_contains(cur, &name, token(&v)),
            Some('^') => attribute_starts_with(cur, &name, &v),
            Some('$') => attribute_ends_with(cur, &name, &v),
            _ => attribute_contains(cur, &name, string(&v)),
        })
    }

    fn pseudo(&mut self, cur: Term) -> PResult<Term> {
        let at = self.pos;
        self.expect(':')?;
        if self.peek() == Some(':') {
            return Err(self.err("pseudo-elements are not supported"));
        }
        let name = self.ident()?.to_ascii_lowercase();
        let unsupported = || ParseError {
            position: at,
            message: format!("unsupported pseudo-class ':{name}'"),
        };
        match name.as_str() {
            "first-child" => Ok(nth_child(cur, int(1))),
            "last-child" => Ok(nth_last_child(cur, int(1))),
            "only-child" => Ok(nth_last_child(nth_child(cur, int(1)), int(1))),
            "not" | "nth-child" | "nth-last-child" => {
                self.expect('(')?;
                self.ws();
                let t = match name.as_str() {
                    "not" => not(cur, self.list()?),
                    "nth-child" => nth_child(cur, self.nth()?),
                    _ => nth_last_child(cur, self.nth()?),
                };
                self.ws();
                self.expect(')')?;
                Ok(t)
            }
            _ => Err(unsupported()),
        }
    }

    fn number(&mut self) -> Option<i64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse().ok()
    }

    /// `an+b`, `odd`, `even` or a plain integer.
    fn nth(&mut self) -> PResult<Term> {
        let start = self.pos;
        if self
            .peek()
            .is_some_and(|c| c.is_ascii_alphabetic() && c != 'n')
        {
            let w = self.ident()?.to_ascii_lowercase();
            return match w.as_str() {
                "odd" => Ok(multiple_offset(2, 1)),
                "even" => Ok(multiple_offset(2, 0)),
                _ => {
                    self.pos = start;
                    Err(self.err("bad nth-child argument"))
                }
            };
        }
        let sign = if self.eat('-') {
            -1
        } else {
            self.eat('+');
            1
        };
        let a = self.number();
        if self.eat('n') || self.eat('N') {
            let a = sign * a.unwrap_or(1);
            self.ws();
            let b = if self.eat('+') {
                self.ws();
                self.number().ok_or_else(|| self.err("expected offset"))?
            } else if self.eat('-') {
                self.ws();
                -self.number().ok_or_else(|| self.err("expected offset"))?
            } else {
                0
            };
            return Ok(multiple_offset(a, b));
        }
        match a {
            Some(a) => Ok(int(sign * a)),
            None => Err(self.err("bad nth-child argument")),
        }
    }
}
