use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use indexmap::IndexSet;

use super::{OpId, SortId};

/// A domain literal carried by a constant term.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Literal {
    Int(i64),
    Char(char),
    Str(Arc<str>),
    /// A whitespace-separated word, matched as a token rather than a substring.
    Token(Arc<str>),
    /// A named constant such as the regex class `\d`.
    Named(Arc<str>),
}

impl Literal {
    pub fn str(s: &str) -> Self {
        Literal::Str(Arc::from(s))
    }

    pub fn token(s: &str) -> Self {
        Literal::Token(Arc::from(s))
    }

    pub fn named(s: &str) -> Self {
        Literal::Named(Arc::from(s))
    }

    /// Text of string-like literals.
    pub fn text(&self) -> Option<&str> {
        match self {
            Literal::Str(s) | Literal::Token(s) | Literal::Named(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Int(i) => write!(f, "{i}"),
            Literal::Char(c) => write!(f, "{c}"),
            Literal::Str(s) => write!(f, "{s:?}"),
            Literal::Token(s) => write!(f, "~{s:?}"),
            Literal::Named(s) => write!(f, "{s}"),
        }
    }
}

/// Root of a term: either a constant or an operator application.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Head {
    Const(Literal),
    Op(OpId),
}

struct Node {
    hash: u64,
    size: u32,
    sort: SortId,
    head: Head,
    children: Box<[Term]>,
}

/// An immutable, structurally hashed AST node.
///
/// Cloning is a reference-count bump. Equality and hashing are structural;
/// the hash is computed once at construction so set membership costs a
/// single comparison in the common case.
#[derive(Clone)]
pub struct Term(Arc<Node>);

impl Term {
    pub fn constant(lit: Literal, sort: SortId) -> Term {
        Term::build(Head::Const(lit), sort, Box::new([]))
    }

    /// Applies `op` to `children` without checking signatures.
    ///
    /// Callers that hold a [`super::DslDefinition`] should prefer
    /// [`super::DslDefinition::apply`], which validates arity and sorts.
    pub fn apply_unchecked(op: OpId, ret: SortId, children: Vec<Term>) -> Term {
        Term::build(Head::Op(op), ret, children.into_boxed_slice())
    }

    fn build(head: Head, sort: SortId, children: Box<[Term]>) -> Term {
        let mut h = DefaultHasher::new();
        head.hash(&mut h);
        sort.hash(&mut h);
        for c in children.iter() {
            h.write_u64(c.0.hash);
        }
        let size = 1 + children.iter().map(|c| c.0.size).sum::<u32>();
        Term(Arc::new(Node {
            hash: h.finish(),
            size,
            sort,
            head,
            children,
        }))
    }

    pub fn head(&self) -> &Head {
        &self.0.head
    }

    pub fn op(&self) -> Option<OpId> {
        match self.0.head {
            Head::Op(op) => Some(op),
            Head::Const(_) => None,
        }
    }

    pub fn literal(&self) -> Option<&Literal> {
        match &self.0.head {
            Head::Const(l) => Some(l),
            Head::Op(_) => None,
        }
    }

    pub fn children(&self) -> &[Term] {
        &self.0.children
    }

    pub fn child(&self, i: usize) -> &Term {
        &self.0.children[i]
    }

    pub fn sort(&self) -> SortId {
        self.0.sort
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        self.0.size as usize
    }

    pub fn structural_hash(&self) -> u64 {
        self.0.hash
    }

    /// True iff the term has no sub-term other than itself.
    pub fn is_atomic(&self) -> bool {
        self.0.children.is_empty()
    }

    pub fn ptr_eq(&self, other: &Term) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    /// Reflexive sub-term test: `other ⊑ self`.
    pub fn contains(&self, other: &Term) -> bool {
        if self.size() < other.size() {
            return false;
        }
        if self == other {
            return true;
        }
        self.children().iter().any(|c| c.contains(other))
    }

    /// All sub-terms, including `self`, in pre-order of first occurrence.
    pub fn subterms(&self) -> IndexSet<Term> {
        let mut out = IndexSet::new();
        self.collect_subterms(&mut out);
        out
    }

    fn collect_subterms(&self, out: &mut IndexSet<Term>) {
        if !out.insert(self.clone()) {
            return;
        }
        for c in self.children() {
            c.collect_subterms(out);
        }
    }

    /// Pre-order walk over every node occurrence (duplicates included).
    pub fn walk<'a>(&'a self, f: &mut impl FnMut(&'a Term)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        if Arc::ptr_eq(&self.0, &other.0) {
            return true;
        }
        self.0.hash == other.0.hash
            && self.0.size == other.0.size
            && self.0.sort == other.0.sort
            && self.0.head == other.0.head
            && self.0.children == other.0.children
    }
}

impl Eq for Term {}

impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl Ord for Term {
    /// Size first, then head, then children left to right.
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0
            .size
            .cmp(&other.0.size)
            .then_with(|| self.0.sort.cmp(&other.0.sort))
            .then_with(|| self.0.head.cmp(&other.0.head))
            .then_with(|| self.0.children.cmp(&other.0.children))
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.head {
            Head::Const(l) => write!(f, "{l}"),
            Head::Op(op) => {
                write!(f, "#{}(", op.0)?;
                for (i, c) in self.children().iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c:?}")?;
                }
                write!(f, ")")
            }
        }
    }
}
