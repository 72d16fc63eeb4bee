use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::dsl::{Head, Literal, Term};

use super::dom::DomDocument;
use super::ops;

/// Denotation of a CSS term on a document.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CssSem {
    Nodes(FixedBitSet),
    /// Sibling positions `1..=max_siblings`, indexed directly.
    Positions(FixedBitSet),
    Str(Literal),
    Bottom,
}

fn positions(doc: &DomDocument, f: impl Fn(i64) -> bool) -> FixedBitSet {
    let k = doc.max_siblings();
    let mut s = FixedBitSet::with_capacity(k + 1);
    for p in 1..=k {
        if f(p as i64) {
            s.insert(p);
        }
    }
    s
}

fn filter(doc: &DomDocument, base: &FixedBitSet, f: impl Fn(usize) -> bool) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(doc.len());
    for id in base.ones() {
        if f(id) {
            out.insert(id);
        }
    }
    out
}

fn attr_test(
    doc: &DomDocument,
    base: &FixedBitSet,
    name: &Literal,
    value: &Literal,
    op: crate::dsl::OpId,
) -> FixedBitSet {
    let (Some(name), Some(v)) = (name.text(), value.text()) else {
        return FixedBitSet::with_capacity(doc.len());
    };
    let token = matches!(value, Literal::Token(_));
    filter(doc, base, |id| {
        let Some(a) = doc.node(id).attrs.get(name) else {
            return false;
        };
        match op {
            ops::ATTRIBUTE_EQUALS => a == v,
            ops::ATTRIBUTE_CONTAINS if token => a.split_whitespace().any(|w| w == v),
            ops::ATTRIBUTE_CONTAINS => a.contains(v),
            ops::ATTRIBUTE_STARTS_WITH => a.starts_with(v),
            ops::ATTRIBUTE_ENDS_WITH => a.ends_with(v),
            _ => false,
        }
    })
}

/// Computes the denotation of `t` from its children's denotations.
pub fn eval_step(t: &Term, kids: &[&CssSem], doc: &DomDocument) -> CssSem {
    let op = match t.head() {
        Head::Const(Literal::Int(i)) => {
            let i = *i;
            return CssSem::Positions(positions(doc, |p| p == i));
        }
        Head::Const(l) => return CssSem::Str(l.clone()),
        Head::Op(op) => *op,
    };
    use CssSem::*;
    match (op, kids) {
        (ops::MULTIPLE_OFFSET, [Positions(_), Positions(_)]) => {
            let (Some(a), Some(b)) = (int_lit(t.child(0)), int_lit(t.child(1))) else {
                return Bottom;
            };
            Positions(positions(doc, |p| in_progression(a, b, p)))
        }
        (ops::ANY, []) => {
            let mut s = FixedBitSet::with_capacity(doc.len());
            s.insert_range(..);
            Nodes(s)
        }
        (ops::UNION, [Nodes(a), Nodes(b)]) => Nodes(a | b),
        (ops::NOT, [Nodes(a), Nodes(b)]) => {
            let mut s = a.clone();
            s.difference_with(b);
            Nodes(s)
        }
        (ops::TAG_EQUALS, [Nodes(a), Str(tag)]) => match tag.text() {
            Some(tag) => Nodes(filter(doc, a, |id| doc.node(id).tag == tag)),
            None => Bottom,
        },
        (ops::NTH_CHILD, [Nodes(a), Positions(p)]) => Nodes(filter(doc, a, |id| {
            let pos = doc.node(id).position;
            pos > 0 && p.contains(pos)
        })),
        (ops::NTH_LAST_CHILD, [Nodes(a), Positions(p)]) => Nodes(filter(doc, a, |id| {
            let pos = doc.node(id).position_from_end;
            pos > 0 && p.contains(pos)
        })),
        (
            ops::ATTRIBUTE_EQUALS
            | ops::ATTRIBUTE_CONTAINS
            | ops::ATTRIBUTE_STARTS_WITH
            | ops::ATTRIBUTE_ENDS_WITH,
            [Nodes(a), Str(name), Str(value)],
        ) => Nodes(attr_test(doc, a, name, value, op)),
        (ops::RIGHT_SIBLING, [Nodes(a), Nodes(b)]) => {
            let mut preceded = FixedBitSet::with_capacity(doc.len());
            for (_, n) in doc.nodes() {
                let mut seen = false;
                for &c in &n.children {
                    if seen {
                        preceded.insert(c);
                    }
                    seen |= a.contains(c);
                }
            }
            Nodes(b & &preceded)
        }
        (ops::CHILDREN, [Nodes(a), Nodes(b)]) => Nodes(filter(doc, b, |id| {
            doc.node(id).parent.is_some_and(|p| a.contains(p))
        })),
        (ops::DESCENDANTS, [Nodes(a), Nodes(b)]) => {
            // pre-order: parents are numbered before their children
            let mut below = FixedBitSet::with_capacity(doc.len());
            for (id, n) in doc.nodes() {
                if let Some(p) = n.parent {
                    if a.contains(p) || below.contains(p) {
                        below.insert(id);
                    }
                }
            }
            Nodes(b & &below)
        }
        _ => Bottom,
    }
}

fn int_lit(t: &Term) -> Option<i64> {
    match t.literal() {
        Some(Literal::Int(i)) => Some(*i),
        _ => None,
    }
}

/// Whether `p` is in `{b, a+b, 2a+b, ...}`; a negative `a` counts down.
pub(crate) fn in_progression(a: i64, b: i64, p: i64) -> bool {
    if a == 0 {
        return p == b;
    }
    let d = p - b;
    d % a == 0 && d / a >= 0
}

fn eval_memo(t: &Term, doc: &DomDocument, memo: &mut HashMap<Term, CssSem>) -> CssSem {
    if let Some(s) = memo.get(t) {
        return s.clone();
    }
    let kids: Vec<CssSem> = t
        .children()
        .iter()
        .map(|c| eval_memo(c, doc, memo))
        .collect();
    let refs: Vec<&CssSem> = kids.iter().collect();
    let s = eval_step(t, &refs, doc);
    memo.insert(t.clone(), s.clone());
    s
}

pub(crate) fn eval(t: &Term, doc: &DomDocument) -> CssSem {
    eval_memo(t, doc, &mut HashMap::new())
}

/// The nodes selected by `t`, in document order.
pub fn evaluate_selector(t: &Term, doc: &DomDocument) -> Vec<usize> {
    match eval(t, doc) {
        CssSem::Nodes(s) => s.ones().collect(),
        _ => Vec::new(),
    }
}
