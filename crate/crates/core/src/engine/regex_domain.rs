use crate::dsl::{DslDefinition, Literal, OpId, Term};
use crate::regex::{self, eval_step, ops, sorts, RegexExample, Sem};

use super::{Domain, Interpretation};

/// Regular expressions over the inputs of an example set.
///
/// Terms are observed on every part of every input: character sets by the
/// positions whose character they contain, expressions by the substrings
/// they accept. A closed term's output is whether it accepts the whole input.
pub struct RegexDomain {
    inputs: Vec<Vec<char>>,
    outputs: Vec<bool>,
}

impl RegexDomain {
    pub fn new(examples: &[RegexExample]) -> Self {
        RegexDomain {
            inputs: examples.iter().map(|e| e.input.chars().collect()).collect(),
            outputs: examples.iter().map(|e| e.output).collect(),
        }
    }
}

fn int_lit(t: &Term) -> Option<i64> {
    match t.literal() {
        Some(Literal::Int(i)) => Some(*i),
        _ => None,
    }
}

impl Domain for RegexDomain {
    type Sem = Vec<Sem>;

    fn dsl(&self) -> &'static DslDefinition {
        regex::dsl()
    }

    fn print(&self, t: &Term) -> String {
        regex::print_regex(t)
    }

    fn admissible(&self, op: OpId, args: &[&Term]) -> bool {
        match op {
            ops::QUANT => match (int_lit(args[1]), int_lit(args[2])) {
                (Some(lo), Some(hi)) => 0 <= lo && lo <= hi,
                _ => false,
            },
            ops::QUANT_MIN => int_lit(args[1]).is_some_and(|lo| lo >= 0),
            ops::RANGE => match (args[0].literal(), args[1].literal()) {
                (Some(Literal::Char(a)), Some(Literal::Char(b))) => a <= b,
                _ => false,
            },
            _ => true,
        }
    }

    fn eval(&self, t: &Term, kids: &[&Vec<Sem>]) -> Vec<Sem> {
        let mut refs: Vec<&Sem> = Vec::with_capacity(kids.len());
        self.inputs
            .iter()
            .enumerate()
            .map(|(i, input)| {
                refs.clear();
                refs.extend(kids.iter().map(|k| &k[i]));
                eval_step(t, &refs, input)
            })
            .collect()
    }

    fn observe(&self, t: &Term, sem: &Vec<Sem>) -> Interpretation {
        match t.sort() {
            sorts::E => {
                let mut bits = Vec::new();
                for s in sem {
                    match s {
                        Sem::Rel(r) => {
                            let n = r.n();
                            bits.extend(
                                (0..=n)
                                    .flat_map(|i| (i..=n).map(move |j| (i, j)))
                                    .map(|(i, j)| r.get(i, j)),
                            )
                        }
                        _ => return Interpretation::Bottom,
                    }
                }
                Interpretation::from_bools(bits)
            }
            sorts::S => {
                let mut bits = Vec::new();
                for (s, input) in sem.iter().zip(&self.inputs) {
                    match s {
                        Sem::Set(p) => bits.extend((0..input.len()).map(|i| p.get(i))),
                        _ => return Interpretation::Bottom,
                    }
                }
                Interpretation::from_bools(bits)
            }
            _ => t
                .literal()
                .cloned()
                .map_or(Interpretation::Bottom, Interpretation::Literal),
        }
    }

    fn outputs(&self, _: &Term, sem: &Vec<Sem>) -> Interpretation {
        Interpretation::from_bools(sem.iter().map(Sem::accepts_all))
    }

    fn expected(&self) -> Interpretation {
        Interpretation::from_bools(self.outputs.iter().copied())
    }

    fn example_count(&self) -> usize {
        self.outputs.len()
    }
}
