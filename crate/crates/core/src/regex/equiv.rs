//! Bounded language comparison of two regex terms.
//!
//! Both terms are compiled to epsilon-NFAs and explored together by a
//! breadth-first subset construction over one representative character per
//! class of indistinguishable characters. Exploring in length-lexicographic
//! order makes the first disagreement found in each direction the shortest,
//! lexicographically smallest witness.

use std::collections::{HashMap, VecDeque};

use crate::dsl::Term;

use super::matcher::class_contains;
use super::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Comparison {
    Equivalent,
    /// Shortest strings accepted by exactly one side.
    Different {
        left_only: Option<String>,
        right_only: Option<String>,
    },
    /// The exploration exceeded its state budget before finding a witness.
    Unknown,
}

struct Nfa {
    eps: Vec<Vec<u32>>,
    edges: Vec<Vec<(u32, u32)>>,
    start: u32,
    accept: u32,
}

struct Builder<'a> {
    nfa: Nfa,
    classes: &'a mut Vec<Term>,
    bound: i64,
    cap: usize,
    overflow: bool,
}

impl Builder<'_> {
    fn state(&mut self) -> u32 {
        if self.nfa.eps.len() >= self.cap {
            self.overflow = true;
        }
        self.nfa.eps.push(Vec::new());
        self.nfa.edges.push(Vec::new());
        (self.nfa.eps.len() - 1) as u32
    }

    fn eps(&mut self, a: u32, b: u32) {
        self.nfa.eps[a as usize].push(b);
    }

    fn class_id(&mut self, s: &Term) -> u32 {
        match self.classes.iter().position(|c| c == s) {
            Some(i) => i as u32,
            None => {
                self.classes.push(s.clone());
                (self.classes.len() - 1) as u32
            }
        }
    }

    /// Returns the fragment's (entry, exit) states.
    fn build(&mut self, t: &Term) -> (u32, u32) {
        if self.overflow {
            let s = self.state();
            return (s, s);
        }
        match t.op() {
            Some(ops::FROM_CHAR_SET) => {
                let (a, b) = (self.state(), self.state());
                let c = self.class_id(t.child(0));
                self.nfa.edges[a as usize].push((c, b));
                (a, b)
            }
            Some(ops::CONCAT) => {
                let (a1, b1) = self.build(t.child(0));
                let (a2, b2) = self.build(t.child(1));
                self.eps(b1, a2);
                (a1, b2)
            }
            Some(ops::ALTER) => {
                let (a, b) = (self.state(), self.state());
                for k in 0..2 {
                    let (x, y) = self.build(t.child(k));
                    self.eps(a, x);
                    self.eps(y, b);
                }
                (a, b)
            }
            Some(ops::QUANT) => {
                let lo = int_of(t.child(1)).unwrap_or(0);
                let hi = int_of(t.child(2)).unwrap_or(-1);
                let start = self.state();
                if hi < 0 || lo > hi {
                    let dead = self.state();
                    return (start, dead);
                }
                let lo = lo.clamp(0, self.bound);
                let hi = hi.min(self.bound);
                let exit = self.chain(start, t.child(0), lo);
                let end = self.state();
                self.eps(exit, end);
                let mut cur = exit;
                for _ in lo..hi {
                    let (x, y) = self.build(t.child(0));
                    self.eps(cur, x);
                    self.eps(y, end);
                    cur = y;
                }
                (start, end)
            }
            Some(ops::QUANT_MIN) => {
                let lo = int_of(t.child(1)).unwrap_or(0).clamp(0, self.bound);
                let start = self.state();
                let exit = self.chain(start, t.child(0), lo);
                let hub = self.state();
                self.eps(exit, hub);
                let (x, y) = self.build(t.child(0));
                self.eps(hub, x);
                self.eps(y, hub);
                (start, hub)
            }
            _ => {
                let (a, b) = (self.state(), self.state());
                (a, b)
            }
        }
    }

    fn chain(&mut self, start: u32, body: &Term, times: i64) -> u32 {
        let mut cur = start;
        for _ in 0..times {
            let (x, y) = self.build(body);
            self.eps(cur, x);
            cur = y;
        }
        cur
    }
}

fn compile(t: &Term, classes: &mut Vec<Term>, max_len: usize, cap: usize) -> Option<Nfa> {
    let mut b = Builder {
        nfa: Nfa {
            eps: Vec::new(),
            edges: Vec::new(),
            start: 0,
            accept: 0,
        },
        classes,
        // beyond max_len + 1 repetitions nothing changes within the bound
        bound: max_len as i64 + 1,
        cap,
        overflow: false,
    };
    let (s, a) = b.build(t);
    if b.overflow {
        return None;
    }
    b.nfa.start = s;
    b.nfa.accept = a;
    Some(b.nfa)
}

type StateSet = Vec<u32>;

impl Nfa {
    fn close(&self, seed: impl IntoIterator<Item = u32>) -> StateSet {
        let mut seen = vec![false; self.eps.len()];
        let mut stack: Vec<u32> = seed.into_iter().collect();
        let mut out = Vec::new();
        while let Some(s) = stack.pop() {
            if std::mem::replace(&mut seen[s as usize], true) {
                continue;
            }
            out.push(s);
            stack.extend(self.eps[s as usize].iter().copied());
        }
        out.sort_unstable();
        out
    }

    fn step(&self, set: &StateSet, member: &[bool]) -> StateSet {
        let next = set.iter().flat_map(|&s| {
            self.edges[s as usize]
                .iter()
                .filter(|(c, _)| member[*c as usize])
                .map(|&(_, t)| t)
        });
        self.close(next.collect::<Vec<_>>())
    }

    fn accepts(&self, set: &StateSet) -> bool {
        set.binary_search(&self.accept).is_ok()
    }
}

fn literal_chars(t: &Term, out: &mut Vec<char>) {
    t.walk(&mut |n| {
        if let Some(c) = char_of(n) {
            out.push(c);
        }
    });
}

/// One character per class of characters no class term can tell apart.
fn representatives(classes: &[Term], extra: &[char]) -> (Vec<char>, Vec<Vec<bool>>) {
    let mut universe: Vec<char> = (ALPHABET_LO..=ALPHABET_HI)
        .chain(EXTRA_WHITESPACE)
        .chain(extra.iter().copied())
        .collect();
    universe.sort_unstable();
    universe.dedup();
    let mut seen: HashMap<Vec<bool>, usize> = HashMap::new();
    let mut reps = Vec::new();
    let mut members = Vec::new();
    for c in universe {
        let sig: Vec<bool> = classes.iter().map(|s| class_contains(s, c)).collect();
        if seen.contains_key(&sig) {
            continue;
        }
        seen.insert(sig.clone(), reps.len());
        reps.push(c);
        members.push(sig);
    }
    (reps, members)
}

/// Compares the languages of `p` and `g` on strings of length at most `max_len`.
pub fn compare(p: &Term, g: &Term, max_len: usize, max_states: usize) -> Comparison {
    if p == g {
        return Comparison::Equivalent;
    }
    let mut classes = Vec::new();
    let (Some(np), Some(ng)) = (
        compile(p, &mut classes, max_len, max_states),
        compile(g, &mut classes, max_len, max_states),
    ) else {
        return Comparison::Unknown;
    };
    let mut extra = Vec::new();
    literal_chars(p, &mut extra);
    literal_chars(g, &mut extra);
    let (reps, members) = representatives(&classes, &extra);

    let start = (np.close([np.start]), ng.close([ng.start]));
    let mut ids: HashMap<(StateSet, StateSet), usize> = HashMap::new();
    // (pair, parent, char, depth)
    let mut nodes: Vec<((StateSet, StateSet), usize, char, usize)> = Vec::new();
    ids.insert(start.clone(), 0);
    nodes.push((start, usize::MAX, '\0', 0));
    let mut queue = VecDeque::from([0usize]);
    let mut left_only = None;
    let mut right_only = None;
    let mut truncated = false;

    let spell = |nodes: &Vec<((StateSet, StateSet), usize, char, usize)>, mut i: usize| {
        let mut s = Vec::new();
        while nodes[i].1 != usize::MAX {
            s.push(nodes[i].2);
            i = nodes[i].1;
        }
        s.into_iter().rev().collect::<String>()
    };

    while let Some(i) = queue.pop_front() {
        let ((sp, sg), _, _, depth) = &nodes[i];
        let (ap, ag) = (np.accepts(sp), ng.accepts(sg));
        if ap && !ag && left_only.is_none() {
            left_only = Some(spell(&nodes, i));
        }
        if ag && !ap && right_only.is_none() {
            right_only = Some(spell(&nodes, i));
        }
        if left_only.is_some() && right_only.is_some() {
            break;
        }
        if *depth == max_len {
            continue;
        }
        let depth = *depth;
        let (sp, sg) = (sp.clone(), sg.clone());
        for (k, &c) in reps.iter().enumerate() {
            let next = (np.step(&sp, &members[k]), ng.step(&sg, &members[k]));
            if next.0.is_empty() && next.1.is_empty() {
                continue;
            }
            if ids.contains_key(&next) {
                continue;
            }
            if nodes.len() >= max_states {
                truncated = true;
                break;
            }
            ids.insert(next.clone(), nodes.len());
            nodes.push((next, i, c, depth + 1));
            queue.push_back(nodes.len() - 1);
        }
    }
    if left_only.is_some() || right_only.is_some() {
        Comparison::Different {
            left_only,
            right_only,
        }
    } else if truncated {
        Comparison::Unknown
    } else {
        Comparison::Equivalent
    }
}
