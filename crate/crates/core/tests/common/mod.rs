//! Oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use multisynth::dsl::{Head, Literal, Term};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Backtracking regex matcher written straight from the denotations.
pub mod rx {
    use super::*;
    use multisynth::regex::{self as r, ops, sorts};

    fn printable(c: char) -> bool {
        (' '..='~').contains(&c)
    }

    pub fn class_has(t: &Term, c: char) -> bool {
        match t.head() {
            Head::Const(Literal::Named(n)) => match &**n {
                "\\d" => c.is_ascii_digit(),
                "\\s" => matches!(c, ' ' | '\t' | '\n' | '\r' | '\u{0B}' | '\u{0C}'),
                "\\w" => c.is_ascii_alphanumeric() || c == '_',
                _ => false,
            },
            Head::Const(_) => false,
            Head::Op(op) => match *op {
                ops::FROM_CHAR => t.child(0).literal() == Some(&Literal::Char(c)),
                ops::RANGE => match (t.child(0).literal(), t.child(1).literal()) {
                    (Some(Literal::Char(a)), Some(Literal::Char(b))) => *a <= c && c <= *b,
                    _ => false,
                },
                ops::UNION => class_has(t.child(0), c) || class_has(t.child(1), c),
                ops::NEGATE => printable(c) && !class_has(t.child(0), c),
                ops::ANY => printable(c),
                _ => false,
            },
        }
    }

    fn int(t: &Term) -> i64 {
        match t.literal() {
            Some(Literal::Int(i)) => *i,
            _ => panic!("not an integer: {t:?}"),
        }
    }

    struct Matcher {
        s: Vec<char>,
        memo: HashMap<(Term, usize, usize), bool>,
        reps: HashMap<(Term, usize, usize, usize, usize), bool>,
    }

    impl Matcher {
        fn m(&mut self, t: &Term, i: usize, j: usize) -> bool {
            let key = (t.clone(), i, j);
            if let Some(&b) = self.memo.get(&key) {
                return b;
            }
            let b = self.m_raw(t, i, j);
            self.memo.insert(key, b);
            b
        }

        fn m_raw(&mut self, t: &Term, i: usize, j: usize) -> bool {
            if t.sort() == sorts::I || t.sort() == sorts::C {
                return false;
            }
            if t.sort() == sorts::S {
                return j == i + 1 && class_has(t, self.s[i]);
            }
            match t.op().expect("expressions are applications") {
                ops::FROM_CHAR_SET => j == i + 1 && class_has(t.child(0), self.s[i]),
                ops::ALTER => self.m(t.child(0), i, j) || self.m(t.child(1), i, j),
                ops::CONCAT => {
                    (i..=j).any(|k| self.m(t.child(0), i, k) && self.m(t.child(1), k, j))
                }
                ops::QUANT => {
                    let (lo, hi) = (int(t.child(1)), int(t.child(2)));
                    if hi < 0 || lo > hi {
                        return false;
                    }
                    let lo = lo.max(0) as usize;
                    let hi = (hi as usize).min(lo.max(j - i));
                    self.rep(t.child(0), i, j, lo, hi)
                }
                ops::QUANT_MIN => {
                    let lo = int(t.child(1)).max(0) as usize;
                    self.rep(t.child(0), i, j, lo, lo.max(j - i))
                }
                op => panic!("unexpected operator {op:?}"),
            }
        }

        /// Whether `s[i..j]` splits into between `lo` and `hi` blocks of `e`.
        fn rep(&mut self, e: &Term, i: usize, j: usize, lo: usize, hi: usize) -> bool {
            if i == j && lo == 0 {
                return true;
            }
            if hi == 0 {
                return false;
            }
            let key = (e.clone(), i, j, lo, hi);
            if let Some(&b) = self.reps.get(&key) {
                return b;
            }
            let b =
                (i..=j).any(|k| self.m(e, i, k) && self.rep(e, k, j, lo.saturating_sub(1), hi - 1));
            self.reps.insert(key, b);
            b
        }
    }

    /// Whole-string acceptance.
    pub fn accepts(t: &Term, s: &str) -> bool {
        let mut m = Matcher {
            s: s.chars().collect(),
            memo: HashMap::new(),
            reps: HashMap::new(),
        };
        let n = m.s.len();
        m.m(t, 0, n)
    }

    pub const TERM_CHARS: [char; 5] = ['a', 'b', '0', '!', ' '];
    pub const STRING_CHARS: [char; 7] = ['a', 'b', '0', '!', ' ', 'z', '\t'];

    fn gen_set(g: &mut ChaCha8Rng, depth: u32) -> Term {
        let c = |g: &mut ChaCha8Rng| *TERM_CHARS.choose(g).unwrap();
        match g.gen_range(0..if depth == 0 { 4 } else { 6 }) {
            0 | 1 => r::from_char(c(g)),
            2 => {
                let (a, b) = (c(g), c(g));
                r::range(a, b)
            }
            3 => match g.gen_range(0..4) {
                0 => r::any(),
                1 => r::named("\\d"),
                2 => r::named("\\s"),
                _ => r::named("\\w"),
            },
            4 => r::union(gen_set(g, depth - 1), gen_set(g, depth - 1)),
            _ => r::negate(gen_set(g, depth - 1)),
        }
    }

    fn gen_expr(g: &mut ChaCha8Rng, depth: u32) -> Term {
        if depth == 0 {
            return r::from_char_set(gen_set(g, 0));
        }
        match g.gen_range(0..6) {
            0 => r::from_char_set(gen_set(g, 1)),
            1 => r::alter(gen_expr(g, depth - 1), gen_expr(g, depth - 1)),
            2 => r::concat(gen_expr(g, depth - 1), gen_expr(g, depth - 1)),
            3 => {
                let lo = g.gen_range(0..3);
                let hi = g.gen_range(0..4);
                r::quant(gen_expr(g, depth - 1), lo, hi)
            }
            4 => r::quant_min(gen_expr(g, depth - 1), g.gen_range(0..3)),
            _ => r::from_char_set(gen_set(g, 0)),
        }
    }

    /// A random expression term of at most `max_nodes` nodes.
    pub fn random_term(g: &mut ChaCha8Rng, max_nodes: usize) -> Term {
        loop {
            let t = gen_expr(g, 4);
            if t.size() <= max_nodes {
                return t;
            }
        }
    }

    pub fn random_string(g: &mut ChaCha8Rng, max_len: usize) -> String {
        let n = g.gen_range(0..=max_len);
        (0..n).map(|_| *STRING_CHARS.choose(g).unwrap()).collect()
    }
}

/// Node-by-node selector oracle.
pub mod sel {
    use super::*;
    use multisynth::css::{self as c, ops, DomDocument, DomNode, NodeId};

    fn position(doc: &DomDocument, id: NodeId, from_end: bool) -> Option<i64> {
        let p = doc.node(id).parent?;
        let sibs = &doc.node(p).children;
        let i = sibs.iter().position(|&s| s == id)?;
        Some(if from_end { sibs.len() - i } else { i + 1 } as i64)
    }

    fn in_pattern(t: &Term, p: i64) -> bool {
        match t.head() {
            Head::Const(Literal::Int(k)) => p == *k,
            Head::Op(ops::MULTIPLE_OFFSET) => {
                let a = lit_int(t.child(0));
                let b = lit_int(t.child(1));
                (0..=64).any(|m| a * m + b == p)
            }
            _ => false,
        }
    }

    fn lit_int(t: &Term) -> i64 {
        match t.literal() {
            Some(Literal::Int(i)) => *i,
            _ => panic!("not an integer"),
        }
    }

    fn text(t: &Term) -> &str {
        t.literal().and_then(Literal::text).expect("string literal")
    }

    pub fn selects(t: &Term, doc: &DomDocument, id: NodeId) -> bool {
        let n = doc.node(id);
        let op = t.op().expect("node-set terms are applications");
        let k = |i: usize| t.child(i);
        match op {
            ops::ANY => true,
            ops::UNION => selects(k(0), doc, id) || selects(k(1), doc, id),
            ops::NOT => selects(k(0), doc, id) && !selects(k(1), doc, id),
            ops::TAG_EQUALS => selects(k(0), doc, id) && n.tag == text(k(1)),
            ops::NTH_CHILD => {
                selects(k(0), doc, id)
                    && position(doc, id, false).is_some_and(|p| in_pattern(k(1), p))
            }
            ops::NTH_LAST_CHILD => {
                selects(k(0), doc, id)
                    && position(doc, id, true).is_some_and(|p| in_pattern(k(1), p))
            }
            ops::ATTRIBUTE_EQUALS
            | ops::ATTRIBUTE_CONTAINS
            | ops::ATTRIBUTE_STARTS_WITH
            | ops::ATTRIBUTE_ENDS_WITH => {
                if !selects(k(0), doc, id) {
                    return false;
                }
                let Some(a) = n.attrs.get(text(k(1))) else {
                    return false;
                };
                let v = text(k(2));
                match op {
                    ops::ATTRIBUTE_EQUALS => a == v,
                    ops::ATTRIBUTE_CONTAINS => match k(2).literal() {
                        Some(Literal::Token(_)) => a.split_whitespace().any(|w| w == v),
                        _ => a.contains(v),
                    },
                    ops::ATTRIBUTE_STARTS_WITH => a.starts_with(v),
                    _ => a.ends_with(v),
                }
            }
            ops::RIGHT_SIBLING => {
                selects(k(1), doc, id)
                    && n.parent.is_some_and(|p| {
                        doc.node(p)
                            .children
                            .iter()
                            .take_while(|&&s| s != id)
                            .any(|&s| selects(k(0), doc, s))
                    })
            }
            ops::CHILDREN => {
                selects(k(1), doc, id) && n.parent.is_some_and(|p| selects(k(0), doc, p))
            }
            ops::DESCENDANTS => {
                if !selects(k(1), doc, id) {
                    return false;
                }
                let mut cur = n.parent;
                while let Some(p) = cur {
                    if selects(k(0), doc, p) {
                        return true;
                    }
                    cur = doc.node(p).parent;
                }
                false
            }
            op => panic!("unexpected operator {op:?}"),
        }
    }

    pub fn select_all(t: &Term, doc: &DomDocument) -> Vec<NodeId> {
        (0..doc.len()).filter(|&i| selects(t, doc, i)).collect()
    }

    const TAGS: [&str; 4] = ["div", "span", "p", "a"];
    const CLASSES: [&str; 5] = ["x", "y", "x y", "xy", ""];
    const IDS: [&str; 3] = ["a", "b", "ab"];

    fn gen_node(g: &mut ChaCha8Rng, budget: &mut usize, depth: u32) -> DomNode {
        let mut n = DomNode::new(TAGS.choose(g).unwrap());
        if g.gen_bool(0.6) {
            n = n.attr("class", CLASSES.choose(g).unwrap());
        }
        if g.gen_bool(0.3) {
            n = n.attr("id", IDS.choose(g).unwrap());
        }
        if depth < 4 {
            for _ in 0..g.gen_range(0..=4) {
                if *budget == 0 {
                    break;
                }
                *budget -= 1;
                let c = gen_node(g, budget, depth + 1);
                n = n.child(c);
            }
        }
        n
    }

    /// A random document of at most `max_nodes` nodes.
    pub fn random_document(g: &mut ChaCha8Rng, max_nodes: usize) -> DomDocument {
        let mut budget = g.gen_range(0..max_nodes);
        DomDocument::from_tree(&gen_node(g, &mut budget, 0))
    }

    fn gen_pos(g: &mut ChaCha8Rng) -> Term {
        if g.gen_bool(0.5) {
            c::int(g.gen_range(0..4))
        } else {
            c::multiple_offset(g.gen_range(-2..3), g.gen_range(-1..4))
        }
    }

    fn gen_sel(g: &mut ChaCha8Rng, depth: u32) -> Term {
        if depth == 0 {
            return c::any();
        }
        let sub = |g: &mut ChaCha8Rng| gen_sel(g, depth - 1);
        match g.gen_range(0..12) {
            0 => c::any(),
            1 => c::union(sub(g), sub(g)),
            2 => c::not(sub(g), sub(g)),
            3 => c::tag_equals(sub(g), TAGS.choose(g).unwrap()),
            4 => c::nth_child(sub(g), gen_pos(g)),
            5 => c::nth_last_child(sub(g), gen_pos(g)),
            6 => c::attribute_equals(sub(g), "class", CLASSES.choose(g).unwrap()),
            7 => {
                let v = if g.gen_bool(0.5) {
                    c::token(["x", "y"].choose(g).unwrap())
                } else {
                    c::string(["x", "y", " "].choose(g).unwrap())
                };
                c::attribute_contains(sub(g), "class", v)
            }
            8 => {
                let a = ["class", "id"].choose(g).unwrap();
                if g.gen_bool(0.5) {
                    c::attribute_starts_with(sub(g), a, ["x", "a", ""].choose(g).unwrap())
                } else {
                    c::attribute_ends_with(sub(g), a, ["y", "b", ""].choose(g).unwrap())
                }
            }
            9 => c::right_sibling(sub(g), sub(g)),
            10 => c::children(sub(g), sub(g)),
            _ => c::descendants(sub(g), sub(g)),
        }
    }

    /// A random node-set term of at most `max_nodes` nodes.
    pub fn random_selector(g: &mut ChaCha8Rng, max_nodes: usize) -> Term {
        loop {
            let t = gen_sel(g, 3);
            if t.size() <= max_nodes {
                return t;
            }
        }
    }
}

/// A one-sorted integer DSL over a single input `x`.
pub mod toy {
    use std::collections::HashSet;
    use std::sync::OnceLock;

    use super::*;
    use multisynth::dsl::{DslDefinition, OpId};
    use multisynth::engine::{Domain, Interpretation};

    pub const ADD: OpId = OpId(0);
    pub const NEG: OpId = OpId(1);
    pub const DBL: OpId = OpId(2);
    pub const SUCC: OpId = OpId(3);

    pub fn dsl() -> &'static DslDefinition {
        static DSL: OnceLock<DslDefinition> = OnceLock::new();
        DSL.get_or_init(|| {
            DslDefinition::builder("toy")
                .sort("n")
                .closed("n")
                .commutative_op("add", &["n", "n"], "n")
                .op("neg", &["n"], "n")
                .op("dbl", &["n"], "n")
                .op("succ", &["n"], "n")
                .build()
        })
    }

    pub fn x() -> Term {
        Term::constant(Literal::named("x"), dsl().closed_sort())
    }

    pub fn k(i: i64) -> Term {
        Term::constant(Literal::Int(i), dsl().closed_sort())
    }

    pub fn app(op: OpId, kids: Vec<Term>) -> Term {
        dsl().apply(op, kids).expect("well-sorted")
    }

    pub fn eval(t: &Term, x: i64) -> i64 {
        match t.head() {
            Head::Const(Literal::Int(i)) => *i,
            Head::Const(_) => x,
            Head::Op(op) => {
                let v: Vec<i64> = t.children().iter().map(|c| eval(c, x)).collect();
                step(*op, &v)
            }
        }
    }

    fn step(op: OpId, v: &[i64]) -> i64 {
        match op {
            ADD => v[0].wrapping_add(v[1]),
            NEG => v[0].wrapping_neg(),
            DBL => v[0].wrapping_mul(2),
            _ => v[0].wrapping_add(1),
        }
    }

    fn key(v: &[i64]) -> Interpretation {
        Interpretation::Literal(Literal::str(&format!("{v:?}")))
    }

    pub struct ToyDomain {
        pub inputs: Vec<i64>,
        pub outputs: Vec<i64>,
    }

    impl Domain for ToyDomain {
        type Sem = Vec<i64>;

        fn dsl(&self) -> &'static DslDefinition {
            dsl()
        }

        fn print(&self, t: &Term) -> String {
            dsl().show(t)
        }

        fn eval(&self, t: &Term, kids: &[&Vec<i64>]) -> Vec<i64> {
            match t.head() {
                Head::Const(_) => self.inputs.iter().map(|&x| eval(t, x)).collect(),
                Head::Op(op) => (0..self.inputs.len())
                    .map(|i| step(*op, &kids.iter().map(|k| k[i]).collect::<Vec<_>>()))
                    .collect(),
            }
        }

        fn observe(&self, _: &Term, sem: &Vec<i64>) -> Interpretation {
            key(sem)
        }

        fn expected(&self) -> Interpretation {
            key(&self.outputs)
        }

        fn example_count(&self) -> usize {
            self.inputs.len()
        }
    }

    /// Every term buildable from `atoms` in `depth` rounds of operator
    /// application.
    pub fn enumerate(atoms: &[Term], depth: usize) -> Vec<Term> {
        let mut all: Vec<Term> = atoms.to_vec();
        let mut seen: HashSet<Term> = all.iter().cloned().collect();
        for _ in 0..depth {
            let level = all.clone();
            let mut push = |t: Term| {
                if seen.insert(t.clone()) {
                    all.push(t);
                }
            };
            for a in &level {
                for op in [NEG, DBL, SUCC] {
                    push(app(op, vec![a.clone()]));
                }
                for b in &level {
                    push(app(ADD, vec![a.clone(), b.clone()]));
                }
            }
        }
        all
    }

    /// A random term over `atoms` with between one and `max_ops` operators.
    pub fn random_term(g: &mut ChaCha8Rng, atoms: &[Term], max_ops: usize) -> Term {
        fn build(g: &mut ChaCha8Rng, atoms: &[Term], ops: usize) -> Term {
            if ops == 0 {
                return atoms.choose(g).unwrap().clone();
            }
            if g.gen_bool(0.4) {
                let left = g.gen_range(0..ops);
                let a = build(g, atoms, left);
                let b = build(g, atoms, ops - 1 - left);
                app(ADD, vec![a, b])
            } else {
                let op = *[NEG, DBL, SUCC].choose(g).unwrap();
                app(op, vec![build(g, atoms, ops - 1)])
            }
        }
        let ops = g.gen_range(1..=max_ops);
        build(g, atoms, ops)
    }

    pub const INPUT_RANGE: std::ops::RangeInclusive<i64> = -4..=6;

    /// Inputs, picked greedily, on which `gt` differs from every term in
    /// `universe` that differs from it somewhere on [`INPUT_RANGE`].
    pub fn distinguishing_inputs(gt: &Term, universe: &[Term]) -> Vec<i64> {
        let range: Vec<i64> = INPUT_RANGE.collect();
        let mut inputs = vec![range[0]];
        for t in universe {
            let differs_on_e = inputs.iter().any(|&i| eval(t, i) != eval(gt, i));
            if differs_on_e {
                continue;
            }
            if let Some(&i) = range.iter().find(|&&i| eval(t, i) != eval(gt, i)) {
                inputs.push(i);
            }
        }
        inputs
    }

    /// Atoms of `t`, in first-occurrence order.
    pub fn atoms(t: &Term) -> Vec<Term> {
        t.subterms().into_iter().filter(|s| s.is_atomic()).collect()
    }

    pub struct Instance {
        pub ground_truth: Term,
        pub candidates: Vec<Term>,
        pub domain: ToyDomain,
    }

    /// A ground truth of at most three operators over {x, 1, 2}, its atoms as
    /// candidates plus maybe one unrelated fragment, and inputs that tell it
    /// apart from every other program of up to three rounds over those atoms.
    pub fn instance(seed: u64) -> Instance {
        let mut g = rng(seed);
        let pool = [x(), k(1), k(2)];
        let gt = random_term(&mut g, &pool, 3);
        let mut candidates = atoms(&gt);
        if g.gen_bool(0.5) {
            let op = *[NEG, DBL, SUCC].choose(&mut g).unwrap();
            let a = candidates.choose(&mut g).unwrap().clone();
            candidates.push(app(op, vec![a]));
        }
        candidates.shuffle(&mut g);
        let inputs = distinguishing_inputs(&gt, &enumerate(&atoms(&gt), 3));
        let outputs = inputs.iter().map(|&i| eval(&gt, i)).collect();
        Instance {
            ground_truth: gt,
            candidates,
            domain: ToyDomain { inputs, outputs },
        }
    }

    /// Whether `t` computes the expected outputs on every input.
    pub fn fits(t: &Term, d: &ToyDomain) -> bool {
        d.inputs
            .iter()
            .zip(&d.outputs)
            .all(|(&i, &o)| eval(t, i) == o)
    }
}

/// Retrieval scoring recomputed from the formulas.
pub mod qa {
    use std::collections::BTreeMap;

    use super::*;

    pub fn words(q: &str) -> Vec<String> {
        let mut out = Vec::new();
        let mut cur = String::new();
        for c in q.chars() {
            if c.is_alphanumeric() {
                cur.extend(c.to_lowercase());
            } else if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
        }
        if !cur.is_empty() {
            out.push(cur);
        }
        out
    }

    pub fn idf(token: &str, questions: &[String]) -> f64 {
        let n = questions.len() as f64;
        let df = questions
            .iter()
            .filter(|q| words(q).iter().any(|w| w == token))
            .count();
        if df == 0 {
            -(1.0 / (n + 1.0)).ln()
        } else {
            -(df as f64 / n).ln()
        }
    }

    /// Share of `q`'s TF-IDF mass on tokens that `other` also has.
    pub fn tfidf_relevance(q: &str, other: &str, questions: &[String]) -> f64 {
        let mut tf: BTreeMap<String, usize> = BTreeMap::new();
        for w in words(q) {
            *tf.entry(w).or_insert(0) += 1;
        }
        let theirs = words(other);
        let (mut shared, mut total) = (0.0, 0.0);
        for (w, n) in &tf {
            let s = *n as f64 * idf(w, questions);
            total += s;
            if theirs.contains(w) {
                shared += s;
            }
        }
        if total > 0.0 {
            shared / total
        } else {
            0.0
        }
    }

    pub fn lev(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
        for (i, row) in d.iter_mut().enumerate() {
            row[0] = i;
        }
        for j in 0..=b.len() {
            d[0][j] = j;
        }
        for i in 1..=a.len() {
            for j in 1..=b.len() {
                let sub = d[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
                d[i][j] = sub.min(d[i - 1][j] + 1).min(d[i][j - 1] + 1);
            }
        }
        d[a.len()][b.len()]
    }

    /// Indices chosen by scoring every pair, sorting, and admitting greedily.
    pub fn brute_select(
        pairs: &[(String, String)],
        q_star: &str,
        k: usize,
        t: usize,
    ) -> Vec<usize> {
        let questions: Vec<String> = pairs.iter().map(|p| p.0.clone()).collect();
        let mut scored: Vec<(f64, usize)> = pairs
            .iter()
            .enumerate()
            .map(|(i, p)| (tfidf_relevance(q_star, &p.0, &questions), i))
            .collect();
        scored.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut out: Vec<usize> = Vec::new();
        for (_, i) in scored {
            if out.len() == k {
                break;
            }
            if out.iter().all(|&j| lev(&pairs[j].1, &pairs[i].1) >= t) {
                out.push(i);
            }
        }
        out
    }

    const COMMON: [&str; 3] = ["lines", "with", "the"];
    const MEDIUM: [&str; 6] = ["vowel", "digit", "letter", "word", "start", "end"];
    const RARE: [&str; 12] = [
        "hex", "zip", "date", "email", "colon", "comma", "dollar", "tab", "upper", "lower",
        "binary", "slash",
    ];
    const ANSWER_BITS: [&str; 10] = [
        "[0-9]", "[a-z]", ".*", "[AEIOU]", "\\d+", "(a|b)", "x{2}", "!", ":", "[A-Z]+",
    ];

    /// Questions with common tokens in nearly all entries, medium ones in
    /// about a third, rare ones in one or two; answers with near duplicates.
    pub fn planted_corpus(g: &mut ChaCha8Rng, n: usize) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for i in 0..n {
            let mut ws: Vec<&str> = COMMON.iter().copied().filter(|_| g.gen_bool(0.9)).collect();
            for m in MEDIUM {
                if g.gen_bool(0.3) {
                    ws.push(m);
                }
            }
            ws.push(RARE[i % RARE.len()]);
            if g.gen_bool(0.2) {
                ws.push(RARE.choose(g).unwrap());
            }
            ws.shuffle(g);
            let q = ws.join(" ");
            let parts = g.gen_range(1..4);
            let a: String = (0..parts)
                .map(|_| *ANSWER_BITS.choose(g).unwrap())
                .collect();
            out.push((q, a));
        }
        out
    }

    pub fn planted_question(g: &mut ChaCha8Rng) -> String {
        let mut ws = vec![
            COMMON[0],
            *MEDIUM.choose(g).unwrap(),
            *RARE.choose(g).unwrap(),
        ];
        if g.gen_bool(0.5) {
            ws.push("unseen");
        }
        ws.join(" ")
    }
}
