//! The inner propositional language: atoms, sentences, rendering and
//! two-valued evaluation in a single world.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::world::{Universe, World};

pub(crate) const RESERVED: [&str; 3] = ["true", "false", "P"];

/// A propositional atom such as `bird` or `winner_17`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom(String);

impl Atom {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if RESERVED.contains(&name.as_str()) {
            return Err(Error::ReservedAtomName(name));
        }
        if !is_identifier(&name) {
            return Err(Error::InvalidAtomName(name));
        }
        Ok(Atom(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A sentence of the object language. Probability operators never appear
/// inside a sentence; they live one level up in [`ProbAssertion`].
///
/// [`ProbAssertion`]: crate::ProbAssertion
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Sentence {
    Const(bool),
    Atom(Atom),
    Not(Box<Sentence>),
    And(Box<Sentence>, Box<Sentence>),
    Or(Box<Sentence>, Box<Sentence>),
    Implies(Box<Sentence>, Box<Sentence>),
    Iff(Box<Sentence>, Box<Sentence>),
}

impl Sentence {
    pub fn atom(name: &str) -> Result<Self> {
        Atom::new(name).map(Sentence::Atom)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(s: Sentence) -> Self {
        Sentence::Not(Box::new(s))
    }

    pub fn and(l: Sentence, r: Sentence) -> Self {
        Sentence::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Sentence, r: Sentence) -> Self {
        Sentence::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Sentence, r: Sentence) -> Self {
        Sentence::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Sentence, r: Sentence) -> Self {
        Sentence::Iff(Box::new(l), Box::new(r))
    }

    /// Conjunction of all parts as a balanced tree, so that very wide
    /// conjunctions stay shallow. An empty iterator yields `true`.
    pub fn conjunction_of(parts: impl IntoIterator<Item = Sentence>) -> Self {
        let parts: Vec<_> = parts.into_iter().collect();
        balanced(parts, Sentence::and).unwrap_or(Sentence::Const(true))
    }

    /// Disjunction counterpart of [`Sentence::conjunction_of`]; empty is `false`.
    pub fn disjunction_of(parts: impl IntoIterator<Item = Sentence>) -> Self {
        let parts: Vec<_> = parts.into_iter().collect();
        balanced(parts, Sentence::or).unwrap_or(Sentence::Const(false))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(crate::parser::parse_sentence(text)?)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        atoms_of(self)
    }

    fn precedence(&self) -> u8 {
        match self {
            Sentence::Iff(..) => 1,
            Sentence::Implies(..) => 2,
            Sentence::Or(..) => 3,
            Sentence::And(..) => 4,
            Sentence::Not(..) => 5,
            Sentence::Const(_) | Sentence::Atom(_) => 6,
        }
    }
}

fn balanced(mut parts: Vec<Sentence>, join: fn(Sentence, Sentence) -> Sentence) -> Option<Sentence> {
    match parts.len() {
        0 => None,
        1 => parts.pop(),
        n => {
            let right = parts.split_off(n / 2);
            Some(join(balanced(parts, join)?, balanced(right, join)?))
        }
    }
}

/// The exact set of atoms referenced by `s`.
pub fn atoms_of(s: &Sentence) -> BTreeSet<Atom> {
    let mut out = BTreeSet::new();
    let mut stack = vec![s];
    while let Some(node) = stack.pop() {
        match node {
            Sentence::Const(_) => {}
            Sentence::Atom(a) => {
                out.insert(a.clone());
            }
            Sentence::Not(c) => stack.push(c),
            Sentence::And(l, r) | Sentence::Or(l, r) | Sentence::Implies(l, r) | Sentence::Iff(l, r) => {
                stack.push(l);
                stack.push(r);
            }
        }
    }
    out
}

/// Truth value of `s` in `world`; atoms outside the world's true set are false.
pub fn eval_sentence(s: &Sentence, world: &World, universe: &Universe) -> Result<bool> {
    if let Some(unknown) = atoms_of(s).into_iter().find(|a| !universe.contains(a)) {
        return Err(Error::UnknownAtom(unknown.to_string()));
    }
    Ok(eval_in(s, world))
}

fn eval_in(s: &Sentence, world: &World) -> bool {
    match s {
        Sentence::Const(b) => *b,
        Sentence::Atom(a) => world.is_true(a),
        Sentence::Not(c) => !eval_in(c, world),
        Sentence::And(l, r) => eval_in(l, world) && eval_in(r, world),
        Sentence::Or(l, r) => eval_in(l, world) || eval_in(r, world),
        Sentence::Implies(l, r) => !eval_in(l, world) || eval_in(r, world),
        Sentence::Iff(l, r) => eval_in(l, world) == eval_in(r, world),
    }
}

/// Canonical ASCII rendering; parenthesises only where reparsing would
/// otherwise build a different tree. `&` and `|` associate left, `->` and
/// `<->` associate right.
pub fn render(s: &Sentence) -> String {
    s.to_string()
}

impl fmt::Display for Sentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sentence::Const(true) => f.write_str("true"),
            Sentence::Const(false) => f.write_str("false"),
            Sentence::Atom(a) => write!(f, "{a}"),
            Sentence::Not(c) => {
                f.write_str("~")?;
                write_child(f, c, c.precedence() < 5)
            }
            Sentence::And(l, r) => write_binary(f, self, l, r, " & ", false),
            Sentence::Or(l, r) => write_binary(f, self, l, r, " | ", false),
            Sentence::Implies(l, r) => write_binary(f, self, l, r, " -> ", true),
            Sentence::Iff(l, r) => write_binary(f, self, l, r, " <-> ", true),
        }
    }
}

fn write_binary(
    f: &mut fmt::Formatter<'_>,
    node: &Sentence,
    l: &Sentence,
    r: &Sentence,
    op: &str,
    right_assoc: bool,
) -> fmt::Result {
    let level = node.precedence();
    let lp = l.precedence();
    let rp = r.precedence();
    write_child(f, l, lp < level || (right_assoc && lp == level))?;
    f.write_str(op)?;
    write_child(f, r, rp < level || (!right_assoc && rp == level))
}

fn write_child(f: &mut fmt::Formatter<'_>, s: &Sentence, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({s})")
    } else {
        write!(f, "{s}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(text: &str) -> Sentence {
        Sentence::parse(text).unwrap()
    }

    fn a(name: &str) -> Sentence {
        Sentence::atom(name).unwrap()
    }

    #[test]
    fn atom_names() {
        assert!(Atom::new("bird_tweety").is_ok());
        assert!(Atom::new("x1").is_ok());
        assert_eq!(Atom::new("1_bullet"), Err(Error::InvalidAtomName("1_bullet".into())));
        assert_eq!(Atom::new("P"), Err(Error::ReservedAtomName("P".into())));
        assert_eq!(Atom::new("true"), Err(Error::ReservedAtomName("true".into())));
        assert!(Atom::new("").is_err());
        assert!(Atom::new("a-b").is_err());
        // case-sensitive: only the exact reserved spellings are refused
        assert!(Atom::new("p").is_ok());
        assert!(Atom::new("True").is_ok());
    }

    #[test]
    fn atoms_of_examples() {
        let names = |s: &Sentence| atoms_of(s).into_iter().map(|a| a.0).collect::<Vec<_>>();
        assert_eq!(names(&p("bird & ~fly")), ["bird", "fly"]);
        assert!(names(&p("true")).is_empty());
        assert_eq!(names(&p("a | a")), ["a"]);
    }

    #[test]
    fn render_examples() {
        assert_eq!(render(&Sentence::not(a("fly"))), "~fly");
        assert_eq!(render(&Sentence::and(a("bird"), a("penguin"))), "bird & penguin");
        assert_eq!(render(&p("(a & b) & c")), "a & b & c");
        assert_eq!(render(&p("a & (b & c)")), "a & (b & c)");
        assert_eq!(render(&p("(a -> b) -> c")), "(a -> b) -> c");
        assert_eq!(render(&p("a -> (b -> c)")), "a -> b -> c");
        assert_eq!(render(&p("~(a | b) & c")), "~(a | b) & c");
        assert_eq!(render(&p("a | b & c")), "a | b & c");
        assert_eq!(render(&p("(a | b) & c")), "(a | b) & c");
        assert_eq!(render(&p("~~a")), "~~a");
        assert_eq!(render(&p("a <-> b -> c")), "a <-> b -> c");
    }

    #[test]
    fn world_evaluation() {
        let universe = Universe::new(["bird", "penguin", "fly"].map(|n| Atom::new(n).unwrap())).unwrap();
        let world = |atoms: &[&str]| World::new("w", atoms.iter().map(|n| Atom::new(*n).unwrap()));
        assert!(eval_sentence(&p("fly"), &world(&["fly"]), &universe).unwrap());
        assert!(eval_sentence(&p("~fly"), &world(&["bird"]), &universe).unwrap());
        assert!(eval_sentence(&p("bird -> fly"), &world(&["bird", "fly"]), &universe).unwrap());
        assert!(!eval_sentence(&p("bird -> fly"), &world(&["bird"]), &universe).unwrap());
        assert!(eval_sentence(&p("bird <-> fly"), &world(&[]), &universe).unwrap());
        assert_eq!(
            eval_sentence(&p("dragon"), &world(&[]), &universe),
            Err(Error::UnknownAtom("dragon".into()))
        );
    }

    #[test]
    fn wide_conjunction_is_shallow() {
        let parts = (1..=1000).map(|k| a(&format!("x{k}")));
        let s = Sentence::conjunction_of(parts);
        fn depth(s: &Sentence) -> usize {
            match s {
                Sentence::And(l, r) => 1 + depth(l).max(depth(r)),
                _ => 0,
            }
        }
        assert_eq!(depth(&s), 10);
        assert_eq!(atoms_of(&s).len(), 1000);
        assert_eq!(Sentence::conjunction_of([]), Sentence::Const(true));
        assert_eq!(Sentence::disjunction_of([]), Sentence::Const(false));
    }
}
