//! Sentences lowered onto universe indices for the enumeration hot loop.
//! And/Or chains are flattened to n-ary nodes, so long conjunctions do not
//! recurse per conjunct.

use crate::error::{Error, Result};
use crate::sentence::Sentence;
use crate::world::Universe;

#[derive(Debug, Clone)]
pub(crate) enum Program {
    Const(bool),
    /// Atom index and polarity.
    Lit(u32, bool),
    Not(Box<Program>),
    All(Vec<Program>),
    Any(Vec<Program>),
    Implies(Box<Program>, Box<Program>),
    Iff(Box<Program>, Box<Program>),
}

impl Program {
    pub(crate) fn compile(s: &Sentence, universe: &Universe) -> Result<Program> {
        Ok(match s {
            Sentence::Const(b) => Program::Const(*b),
            Sentence::Atom(a) => Program::Lit(index(a, universe)?, true),
            Sentence::Not(c) => match &**c {
                Sentence::Atom(a) => Program::Lit(index(a, universe)?, false),
                Sentence::Not(inner) => Program::compile(inner, universe)?,
                _ => Program::Not(Box::new(Program::compile(c, universe)?)),
            },
            Sentence::And(..) => Program::All(flatten(s, universe, |s| match s {
                Sentence::And(l, r) => Some((l, r)),
                _ => None,
            })?),
            Sentence::Or(..) => Program::Any(flatten(s, universe, |s| match s {
                Sentence::Or(l, r) => Some((l, r)),
                _ => None,
            })?),
            Sentence::Implies(l, r) => Program::Implies(
                Box::new(Program::compile(l, universe)?),
                Box::new(Program::compile(r, universe)?),
            ),
            Sentence::Iff(l, r) => Program::Iff(
                Box::new(Program::compile(l, universe)?),
                Box::new(Program::compile(r, universe)?),
            ),
        })
    }

    pub(crate) fn is_tautology_const(&self) -> bool {
        matches!(self, Program::Const(true))
    }

    /// `true_set` holds the sorted universe indices of the true atoms.
    pub(crate) fn eval(&self, true_set: &[u32]) -> bool {
        match self {
            Program::Const(b) => *b,
            Program::Lit(i, positive) => true_set.binary_search(i).is_ok() == *positive,
            Program::Not(c) => !c.eval(true_set),
            Program::All(cs) => cs.iter().all(|c| c.eval(true_set)),
            Program::Any(cs) => cs.iter().any(|c| c.eval(true_set)),
            Program::Implies(l, r) => !l.eval(true_set) || r.eval(true_set),
            Program::Iff(l, r) => l.eval(true_set) == r.eval(true_set),
        }
    }
}

fn index(atom: &crate::sentence::Atom, universe: &Universe) -> Result<u32> {
    universe
        .index_of(atom)
        .map(|i| i as u32)
        .ok_or_else(|| Error::UnknownAtom(atom.to_string()))
}

fn flatten<'a>(
    root: &'a Sentence,
    universe: &Universe,
    split: fn(&'a Sentence) -> Option<(&'a Sentence, &'a Sentence)>,
) -> Result<Vec<Program>> {
    let mut out = Vec::new();
    let mut stack = vec![root];
    while let Some(node) = stack.pop() {
        match split(node) {
            Some((l, r)) => {
                stack.push(r);
                stack.push(l);
            }
            None => out.push(Program::compile(node, universe)?),
        }
    }
    Ok(out)
}
