//! Test support: a truth-table oracle that shares nothing with the engine's
//! evaluation path, plus generators for random sentences and densities.
//!
//! The oracle reads only the public `Sentence` tree. It evaluates by plain
//! recursion over a name-to-bool map and sums masses as `BigRational`
//! directly, where the engine compiles sentences to index programs and sums
//! integer numerators over a common denominator.

use std::collections::{BTreeSet, HashMap};

use betlogic::{Atom, Density, Sentence, World, WorldEntry};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

pub type Assignment = HashMap<String, bool>;

/// Classical truth value of `s`; atoms missing from `a` are false.
pub fn truth(s: &Sentence, a: &Assignment) -> bool {
    match s {
        Sentence::Const(b) => *b,
        Sentence::Atom(atom) => a.get(atom.as_str()).copied().unwrap_or(false),
        Sentence::Not(c) => !truth(c, a),
        Sentence::And(l, r) => truth(l, a) & truth(r, a),
        Sentence::Or(l, r) => truth(l, a) | truth(r, a),
        Sentence::Implies(l, r) => !truth(l, a) | truth(r, a),
        Sentence::Iff(l, r) => truth(l, a) == truth(r, a),
    }
}

/// All `2^n` assignments over `names`.
pub fn assignments(names: &[String]) -> Vec<Assignment> {
    (0..1usize << names.len())
        .map(|bits| {
            names
                .iter()
                .enumerate()
                .map(|(i, n)| (n.clone(), bits >> i & 1 == 1))
                .collect()
        })
        .collect()
}

/// Propositional equivalence by exhaustive truth table.
pub fn equivalent(s: &Sentence, t: &Sentence, names: &[String]) -> bool {
    assignments(names).iter().all(|a| truth(s, a) == truth(t, a))
}

/// A dense joint table: one mass per assignment of `names`.
#[derive(Clone, Debug)]
pub struct Table {
    pub names: Vec<String>,
    pub rows: Vec<(Assignment, BigRational)>,
}

impl Table {
    pub fn prob(&self, s: &Sentence) -> BigRational {
        self.rows
            .iter()
            .filter(|(a, _)| truth(s, a))
            .fold(BigRational::zero(), |acc, (_, m)| acc + m)
    }

    /// `None` when the evidence has probability zero.
    pub fn cond_prob(&self, s: &Sentence, e: &Sentence) -> Option<BigRational> {
        let pe = self.prob(e);
        if pe.is_zero() {
            return None;
        }
        Some(self.prob(&Sentence::and(s.clone(), e.clone())) / pe)
    }

    pub fn atoms(&self) -> Vec<Atom> {
        self.names.iter().map(|n| Atom::new(n.clone()).unwrap()).collect()
    }

    /// The masses in the lexicographic row order used by `dense_from_table`
    /// (first atom most significant, false before true).
    pub fn lexicographic_masses(&self) -> Vec<BigRational> {
        let n = self.names.len();
        (0..1usize << n)
            .map(|row| {
                let wanted: Assignment = self
                    .names
                    .iter()
                    .enumerate()
                    .map(|(i, name)| (name.clone(), row >> (n - 1 - i) & 1 == 1))
                    .collect();
                self.rows.iter().find(|(a, _)| *a == wanted).expect("complete table").1.clone()
            })
            .collect()
    }

    /// The same distribution as a sparse world list: zero-mass worlds
    /// dropped, order shuffled.
    pub fn sparse_density<R: Rng>(&self, rng: &mut R) -> Density {
        let mut entries: Vec<WorldEntry> = self
            .rows
            .iter()
            .enumerate()
            .filter(|(_, (_, m))| !m.is_zero())
            .map(|(i, (a, m))| {
                let true_atoms: BTreeSet<Atom> = a
                    .iter()
                    .filter(|(_, v)| **v)
                    .map(|(k, _)| Atom::new(k.clone()).unwrap())
                    .collect();
                WorldEntry::new(World::new(format!("s{i}"), true_atoms), m.clone())
            })
            .collect();
        entries.shuffle(rng);
        Density::new(self.atoms(), entries).expect("table is a valid density")
    }

    pub fn dense_density(&self) -> Density {
        betlogic::dense_from_table(self.atoms(), self.lexicographic_masses()).expect("table is a valid density")
    }
}

/// Random table over `1..=max_atoms` atoms; masses are random rationals
/// (with some exact zeros) normalised to sum to 1.
pub fn random_table<R: Rng>(rng: &mut R, max_atoms: usize) -> Table {
    let n = rng.gen_range(1..=max_atoms);
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let raw: Vec<BigRational> = (0..1usize << n)
        .map(|_| {
            if rng.gen_bool(0.25) {
                BigRational::zero()
            } else {
                BigRational::new(BigInt::from(rng.gen_range(1..=50u32)), BigInt::from(rng.gen_range(1..=12u32)))
            }
        })
        .collect();
    let mut total: BigRational = raw.iter().fold(BigRational::zero(), |a, m| a + m);
    let raw = if total.is_zero() {
        let mut raw = raw;
        raw[0] = BigRational::one();
        total = BigRational::one();
        raw
    } else {
        raw
    };
    let rows = assignments(&names)
        .into_iter()
        .zip(raw)
        .map(|(a, m)| (a, m / &total))
        .collect();
    Table { names, rows }
}

/// Random sentence over `names` with at most `depth` levels of connectives.
pub fn random_sentence<R: Rng>(rng: &mut R, names: &[String], depth: u32) -> Sentence {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..10) {
            0 => Sentence::Const(rng.gen()),
            _ => Sentence::atom(names.choose(rng).expect("non-empty")).unwrap(),
        };
    }
    let mut sub = || random_sentence(rng, names, depth - 1);
    let (l, r) = (sub(), sub());
    match rng.gen_range(0..5) {
        0 => Sentence::not(l),
        1 => Sentence::and(l, r),
        2 => Sentence::or(l, r),
        3 => Sentence::implies(l, r),
        _ => Sentence::iff(l, r),
    }
}

/// Proptest strategy for sentences over the given atom names.
pub fn arb_sentence(names: Vec<String>) -> impl Strategy<Value = Sentence> {
    let leaf = prop_oneof![
        1 => any::<bool>().prop_map(Sentence::Const),
        6 => proptest::sample::select(names).prop_map(|n| Sentence::atom(&n).unwrap()),
    ];
    leaf.prop_recursive(6, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Sentence::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Sentence::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Sentence::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Sentence::implies(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Sentence::iff(l, r)),
        ]
    })
}

/// Proptest strategy for tables over `x0..x{n-1}` with `1 <= n <= max_atoms`.
pub fn arb_table(max_atoms: usize) -> impl Strategy<Value = Table> {
    (1..=max_atoms).prop_flat_map(|n| {
        proptest::collection::vec(prop_oneof![1 => Just(0u32), 3 => 1..=40u32], 1usize << n).prop_map(move |weights| {
            let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let mut weights = weights;
            if weights.iter().all(|w| *w == 0) {
                weights[0] = 1;
            }
            let total: u32 = weights.iter().sum();
            let rows = assignments(&names)
                .into_iter()
                .zip(weights)
                .map(|(a, w)| (a, BigRational::new(w.into(), total.into())))
                .collect();
            Table { names, rows }
        })
    })
}
