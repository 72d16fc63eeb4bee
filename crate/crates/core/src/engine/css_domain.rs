use std::sync::Arc;

use crate::css::{self, eval_step, ops, sorts, CssExample, CssSem, DomDocument};
use crate::dsl::{DslDefinition, Literal, OpId, Term};

use super::{Domain, Interpretation};

/// CSS selectors over one document; examples are nodes of that document.
///
/// Node-set terms are observed on the whole document.
pub struct CssDomain {
    doc: Arc<DomDocument>,
    examples: Vec<CssExample>,
}

impl CssDomain {
    pub fn new(doc: Arc<DomDocument>, examples: &[CssExample]) -> Self {
        CssDomain {
            doc,
            examples: examples.to_vec(),
        }
    }

    pub fn document(&self) -> &DomDocument {
        &self.doc
    }
}

impl Domain for CssDomain {
    type Sem = CssSem;

    fn dsl(&self) -> &'static DslDefinition {
        css::dsl()
    }

    fn print(&self, t: &Term) -> String {
        css::print_selector(t)
    }

    fn admissible(&self, op: OpId, args: &[&Term]) -> bool {
        match op {
            ops::MULTIPLE_OFFSET => args
                .iter()
                .all(|a| matches!(a.literal(), Some(Literal::Int(_)))),
            _ => true,
        }
    }

    fn eval(&self, t: &Term, kids: &[&CssSem]) -> CssSem {
        eval_step(t, kids, &self.doc)
    }

    fn observe(&self, t: &Term, sem: &CssSem) -> Interpretation {
        match (t.sort(), sem) {
            (sorts::N, CssSem::Nodes(s)) => Interpretation::Bits(s.clone()),
            (sorts::I, CssSem::Positions(p)) => Interpretation::Bits(p.clone()),
            (_, CssSem::Str(l)) => Interpretation::Literal(l.clone()),
            _ => Interpretation::Bottom,
        }
    }

    fn outputs(&self, _: &Term, sem: &CssSem) -> Interpretation {
        match sem {
            CssSem::Nodes(s) => {
                Interpretation::from_bools(self.examples.iter().map(|e| s.contains(e.node)))
            }
            _ => Interpretation::Bottom,
        }
    }

    fn expected(&self) -> Interpretation {
        Interpretation::from_bools(self.examples.iter().map(|e| e.output))
    }

    fn example_count(&self) -> usize {
        self.examples.len()
    }
}
