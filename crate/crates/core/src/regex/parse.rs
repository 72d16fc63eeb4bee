use thiserror::Error;

use crate::dsl::Term;

use super::*;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at position {position}")]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

/// Parses conventional regex syntax into a term of sort `e`.
///
/// ```
/// use multisynth::regex::{parse_regex, print_regex};
/// let t = parse_regex("[0-9]+:?[0-9]*").unwrap();
/// assert_eq!(print_regex(&t), "[0-9]+:?[0-9]*");
/// ```
pub fn parse_regex(src: &str) -> Result<Term, ParseError> {
    let mut p = Parser {
        chars: src.chars().collect(),
        pos: 0,
    };
    if p.peek() == Some('^') {
        p.pos += 1;
    }
    let t = p.alt()?;
    if p.peek() == Some('$') && p.pos + 1 == p.chars.len() {
        p.pos += 1;
    }
    match p.peek() {
        None => Ok(t),
        Some(')') => Err(p.err("unbalanced ')'")),
        Some(c) => Err(p.err(&format!("unexpected '{c}'"))),
    }
}

fn escape_char(c: char) -> Option<char> {
    match c {
        'n' => Some('\n'),
        't' => Some('\t'),
        'r' => Some('\r'),
        'f' => Some('\u{0C}'),
        'v' => Some('\u{0B}'),
        c if !c.is_ascii_alphanumeric() => Some(c),
        _ => None,
    }
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn err(&self, msg: &str) -> ParseError {
        ParseError {
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn expect(&mut self, c: char) -> PResult<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected '{c}'")))
        }
    }

    fn at_alt_end(&self) -> bool {
        match self.peek() {
            None | Some('|') | Some(')') => true,
            Some('$') => self.pos + 1 == self.chars.len(),
            _ => false,
        }
    }

    fn alt(&mut self) -> PResult<Term> {
        let mut t = self.seq()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let r = self.seq()?;
            t = alter(t, r);
        }
        Ok(t)
    }

    fn seq(&mut self) -> PResult<Term> {
        let mut items = Vec::new();
        while !self.at_alt_end() {
            items.push(self.repeat()?);
        }
        let mut it = items.into_iter().rev();
        let last = it.next().ok_or_else(|| self.err("empty alternative"))?;
        Ok(it.fold(last, |acc, t| concat(t, acc)))
    }

    fn repeat(&mut self) -> PResult<Term> {
        if self.quantifier_here()?.is_some() {
            return Err(self.err("quantifier without operand"));
        }
        let mut t = self.atom()?;
        while let Some((lo, hi, len)) = self.quantifier_here()? {
            self.pos += len;
            t = match hi {
                Some(hi) => quant(t, lo, hi),
                None => quant_min(t, lo),
            };
            if self.peek() == Some('?') {
                self.pos += 1;
            }
        }
        Ok(t)
    }

    /// Recognises a quantifier at the cursor: `(lo, hi, length)`.
    fn quantifier_here(&self) -> PResult<Option<(i64, Option<i64>, usize)>> {
        match self.peek() {
            Some('*') => Ok(Some((0, None, 1))),
            Some('+') => Ok(Some((1, None, 1))),
            Some('?') => Ok(Some((0, Some(1), 1))),
            Some('{') => self.brace_quantifier(),
            _ => Ok(None),
        }
    }

    fn brace_quantifier(&self) -> PResult<Option<(i64, Option<i64>, usize)>> {
        let rest: String = self.chars[self.pos..].iter().collect();
        let Some(close) = rest.find('}') else {
            return Ok(None);
        };
        let body = &rest[1..close];
        let len = rest[..=close].chars().count();
        let num = |s: &str| -> Option<i64> {
            if !s.is_empty() && s.chars().all(|c| c.is_ascii_digit()) {
                s.parse().ok()
            } else {
                None
            }
        };
        let parsed = match body.split_once(',') {
            None => num(body).map(|m| (m, Some(m))),
            Some((a, "")) => num(a).map(|m| (m, None)),
            Some((a, b)) => match (num(a), num(b)) {
                (Some(m), Some(n)) => Some((m, Some(n))),
                _ => None,
            },
        };
        match parsed {
            Some((m, Some(n))) if m > n => Err(self.err("quantifier bounds out of order")),
            Some((m, hi)) => Ok(Some((m, hi, len))),
            None => Ok(None),
        }
    }

    fn atom(&mut self) -> PResult<Term> {
        let c = self.peek().ok_or_else(|| self.err("unexpected end"))?;
        match c {
            '(' => {
                self.pos += 1;
                if self.peek() == Some('?') {
                    if self.peek_at(1) == Some(':') {
                        self.pos += 2;
                    } else {
                        return Err(self.err("unsupported group syntax"));
                    }
                }
                let t = self.alt()?;
                self.expect(')')?;
                Ok(t)
            }
            '[' => {
                self.pos += 1;
                let s = self.class()?;
                Ok(from_char_set(s))
            }
            '.' => {
                self.pos += 1;
                Ok(from_char_set(any()))
            }
            '\\' => {
                self.pos += 1;
                let s = self.escape()?;
                Ok(from_char_set(s))
            }
            ')' => Err(self.err("unbalanced ')'")),
            ']' => Err(self.err("unbalanced ']'")),
            '^' => Err(self.err("anchor '^' only allowed at the start")),
            '$' => Err(self.err("anchor '$' only allowed at the end")),
            c => {
                self.pos += 1;
                Ok(from_char_set(from_char(c)))
            }
        }
    }

    /// Parses the escape after a backslash into a character-set term.
    fn escape(&mut self) -> PResult<Term> {
        let c = self.peek().ok_or_else(|| self.err("dangling backslash"))?;
        let t = match c {
            'd' | 's' | 'w' => named(&format!("\\{c}")),
            'D' | 'S' | 'W' => negate(named(&format!("\\{}", c.to_ascii_lowercase()))),
            c => match escape_char(c) {
                Some(x) => from_char(x),
                None => return Err(self.err(&format!("unsupported escape '\\{c}'"))),
            },
        };
        self.pos += 1;
        Ok(t)
    }

    fn class_char(&mut self) -> PResult<ClassItem> {
        let c = self.peek().ok_or_else(|| self.err("unterminated class"))?;
        self.pos += 1;
        if c != '\\' {
            return Ok(ClassItem::Char(c));
        }
        let e = self.peek().ok_or_else(|| self.err("dangling backslash"))?;
        if matches!(e, 'd' | 's' | 'w' | 'D' | 'S' | 'W') {
            return Ok(ClassItem::Set(self.escape()?));
        }
        match escape_char(e) {
            Some(x) => {
                self.pos += 1;
                Ok(ClassItem::Char(x))
            }
            None => Err(self.err(&format!("unsupported escape '\\{e}'"))),
        }
    }

    fn class(&mut self) -> PResult<Term> {
        let start = self.pos - 1;
        let negated = self.peek() == Some('^');
        if negated {
            self.pos += 1;
        }
        let mut items: Vec<Term> = Vec::new();
        let mut first = true;
        loop {
            match self.peek() {
                None => {
                    return Err(ParseError {
                        position: start,
                        message: "unterminated class".into(),
                    })
                }
                Some(']') if !first => {
                    self.pos += 1;
                    break;
                }
                _ => {}
            }
            first = false;
            let a = self.class_char()?;
            let is_range = self.peek() == Some('-') && self.peek_at(1).is_some_and(|c| c != ']');
            match a {
                ClassItem::Char(a) if is_range => {
                    self.pos += 1;
                    match self.class_char()? {
                        ClassItem::Char(b) => items.push(range(a, b)),
                        ClassItem::Set(_) => return Err(self.err("class escape as range bound")),
                    }
                }
                ClassItem::Char(a) => items.push(from_char(a)),
                ClassItem::Set(s) => items.push(s),
            }
        }
        let mut it = items.into_iter();
        let first = it.next().ok_or_else(|| self.err("empty class"))?;
        let body = it.fold(first, union);
        Ok(if negated { negate(body) } else { body })
    }
}

enum ClassItem {
    Char(char),
    Set(Term),
}
