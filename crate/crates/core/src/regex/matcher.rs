use std::collections::HashMap;

use crate::dsl::{Head, Literal, Term};

use super::bits::{PosSet, SpanSet};
use super::{in_alphabet, named_contains, ops, sorts};

/// Denotation of a term on one input string.
///
/// Expressions denote the set of accepted spans, character sets denote the
/// positions whose character they contain.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Sem {
    Int(i64),
    Char(char),
    Set(PosSet),
    Rel(SpanSet),
    Bottom,
}

impl Sem {
    pub fn accepts_all(&self) -> bool {
        match self {
            Sem::Rel(r) => r.accepts_all(),
            Sem::Set(s) => s.len() == 1 && s.get(0),
            _ => false,
        }
    }
}

fn clamp(i: i64) -> usize {
    i.max(0) as usize
}

/// Computes the denotation of `t` on `input` from its children's denotations.
pub fn eval_step(t: &Term, kids: &[&Sem], input: &[char]) -> Sem {
    let n = input.len();
    let op = match t.head() {
        Head::Const(Literal::Int(i)) => return Sem::Int(*i),
        Head::Const(Literal::Char(c)) => return Sem::Char(*c),
        Head::Const(Literal::Named(name)) => {
            return Sem::Set(PosSet::from_fn(n, |p| named_contains(name, input[p])))
        }
        Head::Const(_) => return Sem::Bottom,
        Head::Op(op) => *op,
    };
    match op {
        ops::FROM_CHAR => match kids[0] {
            Sem::Char(c) => Sem::Set(PosSet::from_fn(n, |p| input[p] == *c)),
            _ => Sem::Bottom,
        },
        ops::RANGE => match (kids[0], kids[1]) {
            (Sem::Char(a), Sem::Char(b)) => {
                Sem::Set(PosSet::from_fn(n, |p| (*a..=*b).contains(&input[p])))
            }
            _ => Sem::Bottom,
        },
        ops::UNION => match (kids[0], kids[1]) {
            (Sem::Set(a), Sem::Set(b)) => Sem::Set(a.union(b)),
            _ => Sem::Bottom,
        },
        ops::NEGATE => match kids[0] {
            Sem::Set(a) => Sem::Set(PosSet::from_fn(n, |p| in_alphabet(input[p]) && !a.get(p))),
            _ => Sem::Bottom,
        },
        ops::ANY => Sem::Set(PosSet::from_fn(n, |p| in_alphabet(input[p]))),
        ops::FROM_CHAR_SET => match kids[0] {
            Sem::Set(a) => Sem::Rel(SpanSet::from_positions(a)),
            _ => Sem::Bottom,
        },
        ops::QUANT => match (kids[0], kids[1], kids[2]) {
            (Sem::Rel(r), Sem::Int(lo), Sem::Int(hi)) => {
                if *hi < 0 || lo > hi {
                    Sem::Rel(SpanSet::empty(n))
                } else {
                    Sem::Rel(r.repeat(clamp(*lo), clamp(*hi)))
                }
            }
            _ => Sem::Bottom,
        },
        ops::QUANT_MIN => match (kids[0], kids[1]) {
            (Sem::Rel(r), Sem::Int(lo)) => Sem::Rel(r.power(clamp(*lo)).compose(&r.star())),
            _ => Sem::Bottom,
        },
        ops::ALTER => match (kids[0], kids[1]) {
            (Sem::Rel(a), Sem::Rel(b)) => {
                let mut out = a.clone();
                out.union_with(b);
                Sem::Rel(out)
            }
            _ => Sem::Bottom,
        },
        ops::CONCAT => match (kids[0], kids[1]) {
            (Sem::Rel(a), Sem::Rel(b)) => Sem::Rel(a.compose(b)),
            _ => Sem::Bottom,
        },
        _ => Sem::Bottom,
    }
}

fn eval_memo(t: &Term, input: &[char], memo: &mut HashMap<Term, Sem>) -> Sem {
    if let Some(s) = memo.get(t) {
        return s.clone();
    }
    let kids: Vec<Sem> = t
        .children()
        .iter()
        .map(|c| eval_memo(c, input, memo))
        .collect();
    let refs: Vec<&Sem> = kids.iter().collect();
    let s = eval_step(t, &refs, input);
    memo.insert(t.clone(), s.clone());
    s
}

/// Denotation of `t` on `input`, sharing work across repeated sub-terms.
pub fn eval(t: &Term, input: &[char]) -> Sem {
    eval_memo(t, input, &mut HashMap::new())
}

/// Anchored acceptance of `s` by `t`.
///
/// Character-set terms accept exactly the one-character strings they
/// contain; integer and character terms accept nothing.
pub fn match_full(t: &Term, s: &str) -> bool {
    if t.sort() == sorts::I || t.sort() == sorts::C {
        return false;
    }
    let chars: Vec<char> = s.chars().collect();
    eval(t, &chars).accepts_all()
}

/// Membership of a single character in a character-set term.
pub fn class_contains(t: &Term, c: char) -> bool {
    match t.head() {
        Head::Const(Literal::Named(name)) => named_contains(name, c),
        Head::Const(_) => false,
        Head::Op(op) => match *op {
            ops::FROM_CHAR => matches!(t.child(0).literal(), Some(Literal::Char(x)) if *x == c),
            ops::RANGE => match (t.child(0).literal(), t.child(1).literal()) {
                (Some(Literal::Char(a)), Some(Literal::Char(b))) => (*a..=*b).contains(&c),
                _ => false,
            },
            ops::UNION => class_contains(t.child(0), c) || class_contains(t.child(1), c),
            ops::NEGATE => in_alphabet(c) && !class_contains(t.child(0), c),
            ops::ANY => in_alphabet(c),
            _ => false,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;

    fn fig2b() -> Term {
        let digits = || from_char_set(range('0', '9'));
        concat(
            quant_min(digits(), 1),
            concat(quant(lit(':'), 0, 1), quant_min(digits(), 0)),
        )
    }

    #[test]
    fn fig2b_accepts_paper_strings() {
        let t = fig2b();
        for s in ["1991:10", "99999", "0:1", "000:"] {
            assert!(match_full(&t, s), "{s}");
        }
        for s in ["1.01", "", ":", ":1", "1::", "a"] {
            assert!(!match_full(&t, s), "{s}");
        }
    }

    #[test]
    fn anchored_not_substring() {
        assert!(!match_full(&lit('a'), "ba"));
        assert!(match_full(&lit('a'), "a"));
    }

    #[test]
    fn char_set_sort_single_char() {
        let s = range('a', 'c');
        assert!(match_full(&s, "b"));
        assert!(!match_full(&s, ""));
        assert!(!match_full(&s, "bb"));
        assert!(!match_full(&int(3), "3"));
        assert!(!match_full(&ch('x'), "x"));
    }

    #[test]
    fn nullable_star_terminates() {
        let t = quant_min(quant_min(quant(lit('!'), 0, 1), 0), 0);
        assert!(match_full(&t, ""));
        assert!(match_full(&t, "!!!"));
        assert!(!match_full(&t, "!a"));
        let t = quant(quant_min(lit('a'), 0), 3, 1_000_000);
        assert!(match_full(&t, ""));
        assert!(match_full(&t, "aaaa"));
    }

    #[test]
    fn negate_and_any_stay_in_alphabet() {
        let t = from_char_set(negate(from_char('a')));
        assert!(match_full(&t, "b"));
        assert!(!match_full(&t, "a"));
        assert!(!match_full(&t, "\t"));
        assert!(!match_full(&from_char_set(any()), "\n"));
        assert!(match_full(&from_char_set(named("\\s")), "\t"));
    }
}
