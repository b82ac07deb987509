//! Possible worlds, joint densities and the enumerate-and-sum proof theory.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use indexmap::IndexSet;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::assertion::ProbAssertion;
use crate::compiled::Program;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::rational::{render_decimal, render_fraction};
use crate::sentence::{Atom, Sentence};

/// An exact probability in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Probability(BigRational);

impl Probability {
    pub fn new(value: BigRational) -> Result<Self> {
        if value.is_negative() || value > BigRational::one() {
            return Err(Error::OutOfRange(value));
        }
        Ok(Probability(value))
    }

    pub fn from_ratio(numer: u64, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::OutOfRange(BigRational::zero()));
        }
        Probability::new(BigRational::new(numer.into(), denom.into()))
    }

    pub fn zero() -> Self {
        Probability(BigRational::zero())
    }

    pub fn one() -> Self {
        Probability(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// `1 - p`.
    pub fn complement(&self) -> Probability {
        Probability(BigRational::one() - &self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Four decimal places, rounded half to even.
    pub fn decimal(&self) -> String {
        render_decimal(&self.0, 4)
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_fraction(&self.0))
    }
}

/// The ordered set of declared atoms.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Universe {
    atoms: IndexSet<Atom>,
}

impl Universe {
    pub fn new(atoms: impl IntoIterator<Item = Atom>) -> Result<Self> {
        let mut set = IndexSet::new();
        for atom in atoms {
            if set.contains(&atom) {
                return Err(Error::InvalidDensity(DensityReport {
                    total: BigRational::zero(),
                    violations: vec![Violation::DuplicateAtom { atom: atom.to_string() }],
                }));
            }
            set.insert(atom);
        }
        Ok(Universe { atoms: set })
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn index_of(&self, atom: &Atom) -> Option<usize> {
        self.atoms.get_index_of(atom)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.atoms.iter()
    }
}

/// A truth assignment: the listed atoms are true, every other atom false.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct World {
    pub id: String,
    pub true_atoms: BTreeSet<Atom>,
}

impl World {
    pub fn new(id: impl Into<String>, true_atoms: impl IntoIterator<Item = Atom>) -> Self {
        World { id: id.into(), true_atoms: true_atoms.into_iter().collect() }
    }

    pub fn is_true(&self, atom: &Atom) -> bool {
        self.true_atoms.contains(atom)
    }
}

impl fmt::Display for World {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms: Vec<&str> = self.true_atoms.iter().map(Atom::as_str).collect();
        write!(f, "{} {{{}}}", self.id, atoms.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WorldEntry {
    pub world: World,
    pub mass: BigRational,
}

impl WorldEntry {
    pub fn new(world: World, mass: BigRational) -> Self {
        WorldEntry { world, mass }
    }
}

/// One way in which a candidate density fails to be a probability density.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    DuplicateAtom { atom: String },
    NegativeMass { entry: usize, world: String, mass: BigRational },
    UndeclaredAtom { entry: usize, world: String, atom: String },
    DuplicateWorld { first: usize, second: usize, world: String },
    /// `deficit` is `1 - sum`; negative when the masses overshoot.
    SumNotOne { sum: BigRational, deficit: BigRational },
}

impl Violation {
    /// Index of the offending world entry, when there is one.
    pub fn entry(&self) -> Option<usize> {
        match self {
            Violation::NegativeMass { entry, .. } | Violation::UndeclaredAtom { entry, .. } => Some(*entry),
            Violation::DuplicateWorld { second, .. } => Some(*second),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateAtom { atom } => write!(f, "atom `{atom}` declared twice"),
            Violation::NegativeMass { world, mass, .. } => {
                write!(f, "world `{world}` has negative mass {}", render_fraction(mass))
            }
            Violation::UndeclaredAtom { world, atom, .. } => {
                write!(f, "world `{world}` makes undeclared atom `{atom}` true")
            }
            Violation::DuplicateWorld { world, first, .. } => {
                write!(f, "world `{world}` repeats the assignment of entry {}", first + 1)
            }
            Violation::SumNotOne { sum, deficit } => write!(
                f,
                "masses sum to {} instead of 1 (deficit {})",
                render_fraction(sum),
                render_fraction(deficit)
            ),
        }
    }
}

/// Outcome of checking a candidate density.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DensityReport {
    pub total: BigRational,
    pub violations: Vec<Violation>,
}

impl DensityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for DensityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid, masses sum to {}", render_fraction(&self.total));
        }
        let msgs: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&msgs.join("; "))
    }
}

/// Checks every density invariant over raw parts and reports all failures.
pub fn validate_density(universe: &[Atom], entries: &[WorldEntry]) -> DensityReport {
    let mut violations = Vec::new();
    let mut declared = BTreeSet::new();
    for atom in universe {
        if !declared.insert(atom) {
            violations.push(Violation::DuplicateAtom { atom: atom.to_string() });
        }
    }
    let mut seen: HashMap<&BTreeSet<Atom>, usize> = HashMap::new();
    let mut total = BigRational::zero();
    for (i, entry) in entries.iter().enumerate() {
        if entry.mass.is_negative() {
            violations.push(Violation::NegativeMass {
                entry: i,
                world: entry.world.id.clone(),
                mass: entry.mass.clone(),
            });
        }
        for atom in &entry.world.true_atoms {
            if !declared.contains(atom) {
                violations.push(Violation::UndeclaredAtom {
                    entry: i,
                    world: entry.world.id.clone(),
                    atom: atom.to_string(),
                });
            }
        }
        if let Some(&first) = seen.get(&entry.world.true_atoms) {
            violations.push(Violation::DuplicateWorld { first, second: i, world: entry.world.id.clone() });
        } else {
            seen.insert(&entry.world.true_atoms, i);
        }
        total += &entry.mass;
    }
    if !total.is_one() {
        violations.push(Violation::SumNotOne { deficit: BigRational::one() - &total, sum: total.clone() });
    }
    DensityReport { total, violations }
}

/// Masses rescaled to integers over their least common denominator.
#[derive(Clone, Debug)]
enum ScaledMasses {
    Small(Vec<u64>),
    Big(Vec<BigUint>),
}

/// A validated joint density over a finite set of worlds. Worlds not listed
/// carry mass 0.
#[derive(Clone, Debug)]
pub struct Density {
    universe: Universe,
    entries: Vec<WorldEntry>,
    true_sets: Vec<Box<[u32]>>,
    scale: BigUint,
    masses: ScaledMasses,
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.entries == other.entries
    }
}

impl Eq for Density {}

impl Density {
    pub fn new(universe: Vec<Atom>, entries: Vec<WorldEntry>) -> Result<Self> {
        let report = validate_density(&universe, &entries);
        if !report.is_valid() {
            return Err(Error::InvalidDensity(report));
        }
        let universe = Universe::new(universe)?;
        let true_sets = entries
            .iter()
            .map(|e| {
                let mut idx: Vec<u32> = e
                    .world
                    .true_atoms
                    .iter()
                    .map(|a| universe.index_of(a).expect("validated") as u32)
                    .collect();
                idx.sort_unstable();
                idx.into_boxed_slice()
            })
            .collect();
        let scale = entries
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.mass.denom()));
        let numerators: Vec<BigUint> = entries
            .iter()
            .map(|e| {
                let n = e.mass.numer() * (&scale / e.mass.denom());
                n.to_biguint().expect("masses are non-negative")
            })
            .collect();
        let masses = match numerators.iter().map(|n| n.to_u64()).collect::<Option<Vec<_>>>() {
            Some(small) => ScaledMasses::Small(small),
            None => ScaledMasses::Big(numerators),
        };
        Ok(Density {
            universe,
            entries,
            true_sets,
            scale: scale.to_biguint().expect("positive"),
            masses,
        })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn entries(&self) -> &[WorldEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sums (mass of worlds satisfying `evidence` and `query`, mass of
    /// worlds satisfying `evidence`) in scaled integer units.
    fn tally(&self, query: &Program, evidence: Option<&Program>, exec: Execution) -> (BigUint, BigUint) {
        let n = self.entries.len();
        let evidence = evidence.filter(|p| !p.is_tautology_const());
        let hit = |i: usize| -> (bool, bool) {
            let set = &self.true_sets[i];
            let e = evidence.is_none_or(|p| p.eval(set));
            (e && query.eval(set), e)
        };
        match &self.masses {
            ScaledMasses::Small(m) => {
                let (q, e) = exec.map_reduce(
                    n,
                    || (0u128, 0u128),
                    |i| match hit(i) {
                        (true, true) => (m[i] as u128, m[i] as u128),
                        (false, true) => (0, m[i] as u128),
                        _ => (0, 0),
                    },
                    |a, b| (a.0 + b.0, a.1 + b.1),
                );
                (q.into(), e.into())
            }
            ScaledMasses::Big(m) => exec.map_reduce(
                n,
                || (BigUint::zero(), BigUint::zero()),
                |i| match hit(i) {
                    (true, true) => (m[i].clone(), m[i].clone()),
                    (false, true) => (BigUint::zero(), m[i].clone()),
                    _ => (BigUint::zero(), BigUint::zero()),
                },
                |a, b| (a.0 + b.0, a.1 + b.1),
            ),
        }
    }

    fn ratio(&self, numer: BigUint, denom: &BigUint) -> Probability {
        Probability(BigRational::new(numer.into(), denom.clone().into()))
    }

    /// Probability of `s`: the summed mass of the worlds where it is true.
    pub fn prob(&self, s: &Sentence) -> Result<Probability> {
        self.prob_with(s, Execution::default())
    }

    pub fn prob_with(&self, s: &Sentence, exec: Execution) -> Result<Probability> {
        let program = Program::compile(s, &self.universe)?;
        let (hits, _) = self.tally(&program, None, exec);
        Ok(self.ratio(hits, &self.scale))
    }

    /// `P(s | e) = P(s & e) / P(e)`; an impossible `e` is an error.
    pub fn cond_prob(&self, s: &Sentence, e: &Sentence) -> Result<Probability> {
        self.cond_prob_with(s, e, Execution::default())
    }

    pub fn cond_prob_with(&self, s: &Sentence, e: &Sentence, exec: Execution) -> Result<Probability> {
        let query = Program::compile(s, &self.universe)?;
        let evidence = Program::compile(e, &self.universe)?;
        let (both, given) = self.tally(&query, Some(&evidence), exec);
        if given.is_zero() {
            return Err(Error::ZeroEvidence(e.to_string()));
        }
        Ok(self.ratio(both, &given))
    }

    /// Truth value of a probability assertion under this density.
    pub fn eval_assertion(&self, a: &ProbAssertion) -> Result<bool> {
        let p = self.cond_prob(&a.sentence, &a.evidence)?;
        Ok((p > a.bound) != a.negated)
    }

    /// Entries whose world satisfies `s`, in declaration order.
    pub fn worlds_where(&self, s: &Sentence) -> Result<Vec<&WorldEntry>> {
        let program = Program::compile(s, &self.universe)?;
        Ok(self
            .entries
            .iter()
            .zip(&self.true_sets)
            .filter(|(_, set)| program.eval(set))
            .map(|(e, _)| e)
            .collect())
    }
}

/// Upper bound on the universe size accepted by [`dense_from_table`].
pub const MAX_DENSE_ATOMS: usize = 20;

/// Builds a density with one world per truth assignment, listed in
/// lexicographic order of the universe: the first atom is the most
/// significant bit and false sorts before true.
pub fn dense_from_table(universe: Vec<Atom>, masses: Vec<BigRational>) -> Result<Density> {
    let n = universe.len();
    if n > MAX_DENSE_ATOMS {
        return Err(Error::TooManyAtoms { limit: MAX_DENSE_ATOMS, found: n });
    }
    let expected = 1usize << n;
    if masses.len() != expected {
        return Err(Error::LengthMismatch { atoms: n, expected, found: masses.len() });
    }
    let entries = masses
        .into_iter()
        .enumerate()
        .map(|(row, mass)| {
            let true_atoms = universe
                .iter()
                .enumerate()
                .filter(|(bit, _)| row >> (n - 1 - bit) & 1 == 1)
                .map(|(_, a)| a.clone());
            WorldEntry::new(World::new(format!("w{row}"), true_atoms), mass)
        })
        .collect();
    Density::new(universe, entries)
}

/// The `n`-ticket lottery: atoms `winner_1..winner_n`, one world per
/// ticket in which exactly that ticket wins, each with mass `1/n`.
pub fn lottery_density(n: usize) -> Result<Density> {
    if n == 0 {
        return Err(Error::NoTickets);
    }
    let atoms: Vec<Atom> = (1..=n).map(|k| Atom::new(format!("winner_{k}")).expect("valid")).collect();
    let mass = BigRational::new(BigInt::one(), BigInt::from(n));
    let entries = atoms
        .iter()
        .enumerate()
        .map(|(k, a)| WorldEntry::new(World::new(format!("ticket_{}", k + 1), [a.clone()]), mass.clone()))
        .collect();
    Density::new(atoms, entries)
}

/// One bullet in a six-chamber revolver, spun uniformly. Atom `chamber_k`
/// marks which chamber comes up; `fires` is true only for chamber 1.
pub fn roulette_density() -> Density {
    let chambers: Vec<Atom> = (1..=6).map(|k| Atom::new(format!("chamber_{k}")).expect("valid")).collect();
    let fires = Atom::new("fires").expect("valid");
    let mut universe = vec![fires.clone()];
    universe.extend(chambers.iter().cloned());
    let entries = chambers
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let mut atoms = vec![c.clone()];
            if k == 0 {
                atoms.push(fires.clone());
            }
            WorldEntry::new(World::new(format!("spin_{}", k + 1), atoms), BigRational::new(1.into(), 6.into()))
        })
        .collect();
    Density::new(universe, entries).expect("roulette density is valid")
}

/// The bird-example prior over `bird`, `penguin`, `fly`.
pub fn tweety_density() -> Density {
    let universe = ["bird", "penguin", "fly"].map(|n| Atom::new(n).expect("valid")).to_vec();
    let thousandths = |n: i64| BigRational::new(n.into(), 1000.into());
    // rows: ~b~p~f, ~b~p f, ~b p~f, ~b p f, b~p~f, b~p f, b p~f, b p f
    let masses = [888, 2, 0, 0, 10, 90, 10, 0].map(thousandths).to_vec();
    dense_from_table(universe, masses).expect("tweety table is valid")
}
