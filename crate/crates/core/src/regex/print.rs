use crate::dsl::{Head, Literal, Term};

use super::matcher::class_contains;
use super::*;

const OUTSIDE_META: &str = "\\^$.|?*+()[]{}";
const CLASS_META: &str = "\\]^-[";

fn push_escaped(out: &mut String, c: char, meta: &str) {
    match c {
        '\n' => out.push_str("\\n"),
        '\t' => out.push_str("\\t"),
        '\r' => out.push_str("\\r"),
        '\u{0B}' => out.push_str("\\v"),
        '\u{0C}' => out.push_str("\\f"),
        c if meta.contains(c) => {
            out.push('\\');
            out.push(c);
        }
        c => out.push(c),
    }
}

struct Printer {
    out: String,
    exact: bool,
}

/// Renders a term in conventional regex syntax.
///
/// Alternation associates to the left and concatenation to the right, as in
/// the parser. Character sets that have no direct class syntax (for example a
/// union nested on the right, or `any()` inside a union) are printed as the
/// equivalent class of ranges over the alphabet.
pub fn print_regex(t: &Term) -> String {
    let mut p = Printer {
        out: String::new(),
        exact: true,
    };
    p.top(t);
    p.out
}

/// Whether `parse_regex(print_regex(t))` reproduces `t` exactly.
///
/// Character-set terms print as the expression that lifts them, so this is
/// only meaningful for terms of sort `e`.
pub fn is_structurally_printable(t: &Term) -> bool {
    let mut p = Printer {
        out: String::new(),
        exact: true,
    };
    p.top(t);
    p.exact && t.sort() == sorts::E
}

impl Printer {
    fn top(&mut self, t: &Term) {
        match t.sort() {
            s if s == sorts::E => self.expr(t, 0),
            s if s == sorts::S => self.set_atom(t),
            _ => {
                if let Some(l) = t.literal() {
                    match l {
                        Literal::Char(c) => self.out.push(*c),
                        l => self.out.push_str(&l.to_string()),
                    }
                }
            }
        }
    }

    /// `level`: 0 top, 1 right of concat, 2 left of concat, 3 quantifier operand.
    fn expr(&mut self, t: &Term, level: u8) {
        let Head::Op(op) = t.head() else {
            self.exact = false;
            return;
        };
        let (needs, inner): (u8, fn(&mut Printer, &Term)) = match *op {
            ops::ALTER => (1, |p, t| {
                p.expr(t.child(0), 0);
                p.out.push('|');
                p.expr(t.child(1), 1);
            }),
            ops::CONCAT => (2, |p, t| {
                p.expr(t.child(0), 2);
                p.expr(t.child(1), 1);
            }),
            ops::QUANT | ops::QUANT_MIN => (3, |p, t| p.quantified(t)),
            ops::FROM_CHAR_SET => (u8::MAX, |p, t| p.set_atom(t.child(0))),
            _ => {
                self.exact = false;
                return;
            }
        };
        if level >= needs {
            self.out.push('(');
            inner(self, t);
            self.out.push(')');
        } else {
            inner(self, t);
        }
    }

    fn quantified(&mut self, t: &Term) {
        let lo = int_of(t.child(1));
        let suffix = if t.op() == Some(ops::QUANT_MIN) {
            match lo {
                Some(0) => "*".to_string(),
                Some(1) => "+".to_string(),
                Some(m) if m >= 0 => format!("{{{m},}}"),
                _ => String::new(),
            }
        } else {
            match (lo, int_of(t.child(2))) {
                (Some(0), Some(1)) => "?".to_string(),
                (Some(m), Some(n)) if m == n && m >= 0 => format!("{{{m}}}"),
                (Some(m), Some(n)) if m <= n && m >= 0 => format!("{{{m},{n}}}"),
                _ => String::new(),
            }
        };
        if suffix.is_empty() {
            // no surface syntax for these bounds; print the empty language
            self.exact = false;
            self.out.push_str("[^ -~]");
            return;
        }
        self.expr(t.child(0), 3);
        self.out.push_str(&suffix);
    }

    fn set_atom(&mut self, s: &Term) {
        match s.head() {
            Head::Const(Literal::Named(n)) => self.out.push_str(n),
            Head::Op(ops::ANY) => self.out.push('.'),
            Head::Op(ops::FROM_CHAR) => match char_of(s.child(0)) {
                Some(c) => push_escaped(&mut self.out, c, OUTSIDE_META),
                None => self.extensional(s),
            },
            Head::Op(ops::NEGATE) => {
                let body = s.child(0);
                if let Some(Literal::Named(n)) = body.literal() {
                    self.out.push_str(&n.to_ascii_uppercase());
                    return;
                }
                let mut items = String::new();
                if class_items(body, &mut items) {
                    self.out.push_str("[^");
                    self.out.push_str(&items);
                    self.out.push(']');
                } else {
                    self.extensional(s);
                }
            }
            Head::Op(ops::RANGE) | Head::Op(ops::UNION) => {
                let mut items = String::new();
                if class_items(s, &mut items) {
                    self.out.push('[');
                    self.out.push_str(&items);
                    self.out.push(']');
                } else {
                    self.extensional(s);
                }
            }
            _ => self.extensional(s),
        }
    }

    fn extensional(&mut self, s: &Term) {
        self.exact = false;
        let universe = (ALPHABET_LO..=ALPHABET_HI).chain(EXTRA_WHITESPACE);
        let mut members: Vec<char> = universe.filter(|&c| class_contains(s, c)).collect();
        members.sort_unstable();
        if members.is_empty() {
            self.out.push_str("[^ -~]");
            return;
        }
        if members.len() == (ALPHABET_LO..=ALPHABET_HI).count()
            && members.iter().all(|&c| in_alphabet(c))
        {
            self.out.push('.');
            return;
        }
        if members.len() == 1 {
            push_escaped(&mut self.out, members[0], OUTSIDE_META);
            return;
        }
        self.out.push('[');
        let mut i = 0;
        while i < members.len() {
            let mut j = i;
            while j + 1 < members.len() && members[j + 1] as u32 == members[j] as u32 + 1 {
                j += 1;
            }
            push_escaped(&mut self.out, members[i], CLASS_META);
            if j >= i + 2 {
                self.out.push('-');
                push_escaped(&mut self.out, members[j], CLASS_META);
            } else if j == i + 1 {
                push_escaped(&mut self.out, members[j], CLASS_META);
            }
            i = j + 1;
        }
        self.out.push(']');
    }
}

/// Writes the body of a bracketed class if `s` is a left-nested union of
/// items the class syntax can express.
fn class_items(s: &Term, out: &mut String) -> bool {
    match s.head() {
        Head::Op(ops::UNION) => {
            !matches!(s.child(1).op(), Some(ops::UNION))
                && class_items(s.child(0), out)
                && class_items(s.child(1), out)
        }
        Head::Op(ops::FROM_CHAR) => match char_of(s.child(0)) {
            Some(c) => {
                push_escaped(out, c, CLASS_META);
                true
            }
            None => false,
        },
        Head::Op(ops::RANGE) => match (char_of(s.child(0)), char_of(s.child(1))) {
            (Some(a), Some(b)) => {
                push_escaped(out, a, CLASS_META);
                out.push('-');
                push_escaped(out, b, CLASS_META);
                true
            }
            _ => false,
        },
        Head::Const(Literal::Named(n)) => {
            out.push_str(n);
            true
        }
        Head::Op(ops::NEGATE) => match s.child(0).literal() {
            Some(Literal::Named(n)) => {
                out.push_str(&n.to_ascii_uppercase());
                true
            }
            _ => false,
        },
        _ => false,
    }
}
