//! Regular expressions as terms over a four-sorted DSL.
//!
//! Sorts are integers `i`, characters `c`, character sets `s` and closed
//! expressions `e`. Matching is anchored: a term accepts a string only if it
//! matches the whole of it.

mod bits;
pub mod equiv;
mod matcher;
mod parse;
mod print;

use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::dsl::{DslDefinition, Literal, Term};

pub use bits::SpanSet;
pub use matcher::{class_contains, eval_step, match_full, Sem};
pub use parse::{parse_regex, ParseError};
pub use print::{is_structurally_printable, print_regex};

pub mod sorts {
    use crate::dsl::SortId;
    pub const I: SortId = SortId(0);
    pub const C: SortId = SortId(1);
    pub const S: SortId = SortId(2);
    pub const E: SortId = SortId(3);
}

pub mod ops {
    use crate::dsl::OpId;
    pub const FROM_CHAR: OpId = OpId(0);
    pub const RANGE: OpId = OpId(1);
    pub const UNION: OpId = OpId(2);
    pub const NEGATE: OpId = OpId(3);
    pub const ANY: OpId = OpId(4);
    pub const QUANT: OpId = OpId(5);
    pub const QUANT_MIN: OpId = OpId(6);
    pub const ALTER: OpId = OpId(7);
    pub const CONCAT: OpId = OpId(8);
    pub const FROM_CHAR_SET: OpId = OpId(9);
}

/// Characters that `any()` and `negate` range over: printable ASCII.
pub const ALPHABET_LO: char = ' ';
pub const ALPHABET_HI: char = '~';

pub fn in_alphabet(c: char) -> bool {
    (ALPHABET_LO..=ALPHABET_HI).contains(&c)
}

/// Whitespace characters that `\s` accepts besides the space.
pub const EXTRA_WHITESPACE: [char; 5] = ['\t', '\n', '\r', '\u{0B}', '\u{0C}'];

pub const NAMED_CLASSES: [&str; 3] = ["\\d", "\\s", "\\w"];

pub fn named_contains(name: &str, c: char) -> bool {
    match name {
        "\\d" => c.is_ascii_digit(),
        "\\s" => c == ' ' || EXTRA_WHITESPACE.contains(&c),
        "\\w" => c.is_ascii_alphanumeric() || c == '_',
        _ => false,
    }
}

/// The regex DSL, shared by every caller.
pub fn dsl() -> &'static DslDefinition {
    static DSL: OnceLock<DslDefinition> = OnceLock::new();
    DSL.get_or_init(|| {
        let d = DslDefinition::builder("regex")
            .sort("i")
            .sort("c")
            .sort("s")
            .sort("e")
            .closed("e")
            .op("fromChar", &["c"], "s")
            .op("range", &["c", "c"], "s")
            .commutative_op("union", &["s", "s"], "s")
            .op("negate", &["s"], "s")
            .op("any", &[], "s")
            .op("quant", &["e", "i", "i"], "e")
            .op("quantMin", &["e", "i"], "e")
            .commutative_op("alter", &["e", "e"], "e")
            .op("concat", &["e", "e"], "e")
            .op("fromCharSet", &["s"], "e")
            .build();
        let std = vec![int(0), int(1), named("\\d"), named("\\s"), named("\\w")];
        d.with_standard_components(std)
    })
}

pub fn int(i: i64) -> Term {
    Term::constant(Literal::Int(i), sorts::I)
}

pub fn ch(c: char) -> Term {
    Term::constant(Literal::Char(c), sorts::C)
}

/// A named class such as `\d`, as a character-set constant.
pub fn named(name: &str) -> Term {
    Term::constant(Literal::Named(Arc::from(name)), sorts::S)
}

pub fn from_char(c: char) -> Term {
    Term::apply_unchecked(ops::FROM_CHAR, sorts::S, vec![ch(c)])
}

pub fn range(a: char, b: char) -> Term {
    Term::apply_unchecked(ops::RANGE, sorts::S, vec![ch(a), ch(b)])
}

pub fn union(a: Term, b: Term) -> Term {
    Term::apply_unchecked(ops::UNION, sorts::S, vec![a, b])
}

pub fn negate(s: Term) -> Term {
    Term::apply_unchecked(ops::NEGATE, sorts::S, vec![s])
}

pub fn any() -> Term {
    Term::apply_unchecked(ops::ANY, sorts::S, vec![])
}

pub fn quant(e: Term, lo: i64, hi: i64) -> Term {
    Term::apply_unchecked(ops::QUANT, sorts::E, vec![e, int(lo), int(hi)])
}

pub fn quant_min(e: Term, lo: i64) -> Term {
    Term::apply_unchecked(ops::QUANT_MIN, sorts::E, vec![e, int(lo)])
}

pub fn alter(a: Term, b: Term) -> Term {
    Term::apply_unchecked(ops::ALTER, sorts::E, vec![a, b])
}

pub fn concat(a: Term, b: Term) -> Term {
    Term::apply_unchecked(ops::CONCAT, sorts::E, vec![a, b])
}

pub fn from_char_set(s: Term) -> Term {
    Term::apply_unchecked(ops::FROM_CHAR_SET, sorts::E, vec![s])
}

/// `fromCharSet(fromChar(c))`: the expression matching exactly `c`.
pub fn lit(c: char) -> Term {
    from_char_set(from_char(c))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RegexExample {
    pub input: String,
    pub output: bool,
}

impl RegexExample {
    pub fn new(input: &str, output: bool) -> Self {
        RegexExample {
            input: input.to_string(),
            output,
        }
    }
}

/// Literal integer carried by an `i`-sorted term.
pub(crate) fn int_of(t: &Term) -> Option<i64> {
    match t.literal() {
        Some(Literal::Int(i)) => Some(*i),
        _ => None,
    }
}

pub(crate) fn char_of(t: &Term) -> Option<char> {
    match t.literal() {
        Some(Literal::Char(c)) => Some(*c),
        _ => None,
    }
}
