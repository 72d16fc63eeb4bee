//! Domain-agnostic DSL definitions and terms.
//!
//! A DSL is a set of sorts, a set of constants, an ordered list of operators
//! with argument/return signatures, and a distinguished closed sort whose
//! terms are complete programs. Constants are never enumerated here; they
//! enter the system through parsed candidates and standard components.

mod term;

use std::fmt;

use indexmap::IndexSet;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use term::{Head, Literal, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SortId(pub u8);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OpId(pub u16);

impl OpId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Operator {
    pub name: String,
    pub arg_sorts: Vec<SortId>,
    pub ret_sort: SortId,
    /// Position in the operator vector; equals declaration order.
    pub index: usize,
    /// Argument order is semantically irrelevant (binary, same argument sorts).
    pub commutative: bool,
}

impl Operator {
    pub fn arity(&self) -> usize {
        self.arg_sorts.len()
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DslError {
    #[error("no candidates")]
    NoCandidates,
    #[error("operator {op} expects {expected} arguments, got {got}")]
    Arity {
        op: String,
        expected: usize,
        got: usize,
    },
    #[error("operator {op} argument {position} has sort {got}, expected {expected}")]
    SortMismatch {
        op: String,
        position: usize,
        expected: String,
        got: String,
    },
    #[error("unknown operator {0}")]
    UnknownOperator(String),
}

/// A DSL: sorts, operators with signatures, closed sort and standard components.
#[derive(Debug, Clone)]
pub struct DslDefinition {
    pub name: String,
    sorts: Vec<String>,
    operators: Vec<Operator>,
    closed_sort: SortId,
    standard_components: Vec<Term>,
}

impl DslDefinition {
    pub fn builder(name: &str) -> DslBuilder {
        DslBuilder {
            name: name.to_string(),
            sorts: Vec::new(),
            operators: Vec::new(),
            closed_sort: None,
        }
    }

    pub fn sorts(&self) -> impl Iterator<Item = SortId> + '_ {
        (0..self.sorts.len()).map(|i| SortId(i as u8))
    }

    pub fn sort_count(&self) -> usize {
        self.sorts.len()
    }

    pub fn sort_name(&self, s: SortId) -> &str {
        &self.sorts[s.0 as usize]
    }

    pub fn sort_by_name(&self, name: &str) -> Option<SortId> {
        self.sorts
            .iter()
            .position(|s| s == name)
            .map(|i| SortId(i as u8))
    }

    pub fn operators(&self) -> &[Operator] {
        &self.operators
    }

    pub fn operator(&self, op: OpId) -> &Operator {
        &self.operators[op.index()]
    }

    pub fn op_by_name(&self, name: &str) -> Option<OpId> {
        self.operators
            .iter()
            .position(|o| o.name == name)
            .map(|i| OpId(i as u16))
    }

    pub fn closed_sort(&self) -> SortId {
        self.closed_sort
    }

    pub fn standard_components(&self) -> &[Term] {
        &self.standard_components
    }

    pub fn with_standard_components(mut self, comps: Vec<Term>) -> Self {
        self.standard_components = comps;
        self
    }

    /// Builds `op(children)` after checking arity and argument sorts.
    pub fn apply(&self, op: OpId, children: Vec<Term>) -> Result<Term, DslError> {
        let o = self.operator(op);
        if o.arity() != children.len() {
            return Err(DslError::Arity {
                op: o.name.clone(),
                expected: o.arity(),
                got: children.len(),
            });
        }
        for (i, (c, s)) in children.iter().zip(&o.arg_sorts).enumerate() {
            if c.sort() != *s {
                return Err(DslError::SortMismatch {
                    op: o.name.clone(),
                    position: i,
                    expected: self.sort_name(*s).to_string(),
                    got: self.sort_name(c.sort()).to_string(),
                });
            }
        }
        Ok(Term::apply_unchecked(op, o.ret_sort, children))
    }

    /// Like [`apply`](Self::apply), looking the operator up by name.
    pub fn apply_named(&self, name: &str, children: Vec<Term>) -> Result<Term, DslError> {
        let op = self
            .op_by_name(name)
            .ok_or_else(|| DslError::UnknownOperator(name.to_string()))?;
        self.apply(op, children)
    }

    /// Prefix rendering, e.g. `concat(quantMin(fromCharSet(range(0,9)),1),...)`.
    pub fn show(&self, t: &Term) -> String {
        let mut s = String::new();
        self.show_into(t, &mut s);
        s
    }

    fn show_into(&self, t: &Term, out: &mut String) {
        use fmt::Write;
        match t.head() {
            Head::Const(l) => {
                let _ = write!(out, "{l}");
            }
            Head::Op(op) => {
                out.push_str(&self.operator(*op).name);
                out.push('(');
                for (i, c) in t.children().iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    self.show_into(c, out);
                }
                out.push(')');
            }
        }
    }

    pub fn op_vector(&self, t: &Term) -> OpVector {
        let mut counts = vec![0.0; self.operators.len()];
        t.walk(&mut |n| {
            if let Some(op) = n.op() {
                counts[op.index()] += 1.0;
            }
        });
        OpVector(counts)
    }

    /// Componentwise mean of the candidates' operator vectors.
    pub fn average_op_vector(&self, programs: &[Term]) -> Result<OpVector, DslError> {
        if programs.is_empty() {
            return Err(DslError::NoCandidates);
        }
        let mut acc = vec![0.0; self.operators.len()];
        for p in programs {
            for (a, v) in acc.iter_mut().zip(self.op_vector(p).0) {
                *a += v;
            }
        }
        let n = programs.len() as f64;
        Ok(OpVector(acc.into_iter().map(|a| a / n).collect()))
    }
}

pub struct DslBuilder {
    name: String,
    sorts: Vec<String>,
    operators: Vec<Operator>,
    closed_sort: Option<SortId>,
}

impl DslBuilder {
    pub fn sort(mut self, name: &str) -> Self {
        assert!(
            !self.sorts.iter().any(|s| s == name),
            "duplicate sort {name}"
        );
        self.sorts.push(name.to_string());
        self
    }

    pub fn closed(mut self, name: &str) -> Self {
        self.closed_sort = Some(self.sort_id(name));
        self
    }

    fn sort_id(&self, name: &str) -> SortId {
        let i = self
            .sorts
            .iter()
            .position(|s| s == name)
            .unwrap_or_else(|| panic!("unknown sort {name}"));
        SortId(i as u8)
    }

    pub fn op(self, name: &str, args: &[&str], ret: &str) -> Self {
        self.op_with(name, args, ret, false)
    }

    pub fn commutative_op(self, name: &str, args: &[&str], ret: &str) -> Self {
        assert!(args.len() == 2 && args[0] == args[1]);
        self.op_with(name, args, ret, true)
    }

    fn op_with(mut self, name: &str, args: &[&str], ret: &str, commutative: bool) -> Self {
        let arg_sorts = args.iter().map(|a| self.sort_id(a)).collect();
        let ret_sort = self.sort_id(ret);
        let index = self.operators.len();
        self.operators.push(Operator {
            name: name.to_string(),
            arg_sorts,
            ret_sort,
            index,
            commutative,
        });
        self
    }

    pub fn build(self) -> DslDefinition {
        DslDefinition {
            name: self.name,
            sorts: self.sorts,
            operators: self.operators,
            closed_sort: self.closed_sort.expect("closed sort not set"),
            standard_components: Vec::new(),
        }
    }
}

/// Per-operator occurrence counts, indexed by [`Operator::index`].
///
/// Counts of a single term are integral; averages over candidate sets are not.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpVector(pub Vec<f64>);

impl OpVector {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn euclidean(&self, other: &OpVector) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Number of operators that `self` uses more than `threshold` times while
    /// `avg` uses them fewer than `threshold` times.
    pub fn hamming(&self, avg: &OpVector, threshold: f64) -> usize {
        self.0
            .iter()
            .zip(&avg.0)
            .filter(|(v, a)| **v > threshold && **a < threshold)
            .count()
    }
}

/// Reflexive-transitive sub-term set of `t`.
pub fn subterms(t: &Term) -> IndexSet<Term> {
    t.subterms()
}

pub fn is_atomic(t: &Term) -> bool {
    t.is_atomic()
}

/// Number of programs in `programs` that contain `t` (each program counts once).
pub fn count_containing(t: &Term, programs: &[Term]) -> usize {
    programs.iter().filter(|p| p.contains(t)).count()
}
