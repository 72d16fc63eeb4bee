//! CSS selectors as terms, evaluated over a small in-memory document model.
//!
//! Sorts are strings `s`, integers `i` and node sets `n` (the closed sort).
//! Sibling positions are 1-based. The class shorthand `.c` is a whitespace
//! token test on the `class` attribute, carried by a [`Literal::Token`].

mod dom;
mod eval;
mod parse;
mod print;

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::dsl::{DslDefinition, Literal, Term};

pub use dom::{
    load_document, load_document_file, DocError, DomDocument, DomNode, NodeData, NodeId,
};
pub use eval::{eval_step, evaluate_selector, CssSem};
pub use parse::{parse_selector, ParseError};
pub use print::print_selector;

pub mod sorts {
    use crate::dsl::SortId;
    pub const S: SortId = SortId(0);
    pub const I: SortId = SortId(1);
    pub const N: SortId = SortId(2);
}

pub mod ops {
    use crate::dsl::OpId;
    pub const MULTIPLE_OFFSET: OpId = OpId(0);
    pub const ANY: OpId = OpId(1);
    pub const UNION: OpId = OpId(2);
    pub const NOT: OpId = OpId(3);
    pub const TAG_EQUALS: OpId = OpId(4);
    pub const NTH_CHILD: OpId = OpId(5);
    pub const NTH_LAST_CHILD: OpId = OpId(6);
    pub const ATTRIBUTE_EQUALS: OpId = OpId(7);
    pub const ATTRIBUTE_CONTAINS: OpId = OpId(8);
    pub const ATTRIBUTE_STARTS_WITH: OpId = OpId(9);
    pub const ATTRIBUTE_ENDS_WITH: OpId = OpId(10);
    pub const RIGHT_SIBLING: OpId = OpId(11);
    pub const CHILDREN: OpId = OpId(12);
    pub const DESCENDANTS: OpId = OpId(13);
}

pub fn dsl() -> &'static DslDefinition {
    static DSL: OnceLock<DslDefinition> = OnceLock::new();
    DSL.get_or_init(|| {
        let d = DslDefinition::builder("css")
            .sort("s")
            .sort("i")
            .sort("n")
            .closed("n")
            .op("MultipleOffset", &["i", "i"], "i")
            .op("Any", &[], "n")
            .commutative_op("Union", &["n", "n"], "n")
            .op("Not", &["n", "n"], "n")
            .op("TagEquals", &["n", "s"], "n")
            .op("nthChild", &["n", "i"], "n")
            .op("nthLastChild", &["n", "i"], "n")
            .op("AttributeEquals", &["n", "s", "s"], "n")
            .op("AttributeContains", &["n", "s", "s"], "n")
            .op("AttributeStartsWith", &["n", "s", "s"], "n")
            .op("AttributeEndsWith", &["n", "s", "s"], "n")
            .op("RightSibling", &["n", "n"], "n")
            .op("Children", &["n", "n"], "n")
            .op("Descendants", &["n", "n"], "n")
            .build();
        let std = vec![any(), int(1), string("")];
        d.with_standard_components(std)
    })
}

pub fn int(i: i64) -> Term {
    Term::constant(Literal::Int(i), sorts::I)
}

pub fn string(s: &str) -> Term {
    Term::constant(Literal::str(s), sorts::S)
}

/// A whitespace-separated token, as used by `.c` and `[a~=v]`.
pub fn token(s: &str) -> Term {
    Term::constant(Literal::token(s), sorts::S)
}

fn app(op: crate::dsl::OpId, sort: crate::dsl::SortId, kids: Vec<Term>) -> Term {
    Term::apply_unchecked(op, sort, kids)
}

pub fn multiple_offset(a: i64, b: i64) -> Term {
    app(ops::MULTIPLE_OFFSET, sorts::I, vec![int(a), int(b)])
}

pub fn any() -> Term {
    app(ops::ANY, sorts::N, vec![])
}

pub fn union(a: Term, b: Term) -> Term {
    app(ops::UNION, sorts::N, vec![a, b])
}

pub fn not(a: Term, b: Term) -> Term {
    app(ops::NOT, sorts::N, vec![a, b])
}

pub fn tag_equals(n: Term, tag: &str) -> Term {
    app(ops::TAG_EQUALS, sorts::N, vec![n, string(tag)])
}

pub fn nth_child(n: Term, i: Term) -> Term {
    app(ops::NTH_CHILD, sorts::N, vec![n, i])
}

pub fn nth_last_child(n: Term, i: Term) -> Term {
    app(ops::NTH_LAST_CHILD, sorts::N, vec![n, i])
}

pub fn attribute_equals(n: Term, a: &str, v: &str) -> Term {
    app(
        ops::ATTRIBUTE_EQUALS,
        sorts::N,
        vec![n, string(a), string(v)],
    )
}

pub fn attribute_contains(n: Term, a: &str, v: Term) -> Term {
    app(ops::ATTRIBUTE_CONTAINS, sorts::N, vec![n, string(a), v])
}

pub fn attribute_starts_with(n: Term, a: &str, v: &str) -> Term {
    app(
        ops::ATTRIBUTE_STARTS_WITH,
        sorts::N,
        vec![n, string(a), string(v)],
    )
}

pub fn attribute_ends_with(n: Term, a: &str, v: &str) -> Term {
    app(
        ops::ATTRIBUTE_ENDS_WITH,
        sorts::N,
        vec![n, string(a), string(v)],
    )
}

pub fn right_sibling(a: Term, b: Term) -> Term {
    app(ops::RIGHT_SIBLING, sorts::N, vec![a, b])
}

pub fn children(a: Term, b: Term) -> Term {
    app(ops::CHILDREN, sorts::N, vec![a, b])
}

pub fn descendants(a: Term, b: Term) -> Term {
    app(ops::DESCENDANTS, sorts::N, vec![a, b])
}

/// `.c`
pub fn has_class(n: Term, c: &str) -> Term {
    attribute_contains(n, "class", token(c))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CssExample {
    pub node: NodeId,
    pub output: bool,
}
