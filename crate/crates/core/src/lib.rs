//! Exact propositional probability logic with decision-theoretic acceptance.
//!
//! Beliefs are a finite joint density over possible worlds. The probability
//! of a sentence is the summed mass of the worlds where it holds, computed
//! exactly over rationals. A tentative conclusion is a bet: `S` is accepted
//! given evidence `e` when `P(S | e)` strictly exceeds the breakeven
//! probability of the stakes, and every conclusion is recorded as the
//! assertion `P(S | e) > b` or `~(P(S | e) > b)`. Adding evidence can
//! therefore flip a verdict without falsifying anything said earlier.
//!
//! ```
//! use betlogic::{decide, tweety_density, Payoff, Sentence};
//!
//! let density = tweety_density();
//! let fly = Sentence::parse("fly").unwrap();
//! let bird = Sentence::parse("bird").unwrap();
//! let bet = Payoff::ratio(1, 1, 3, 2).unwrap();
//! let decision = decide(&density, &fly, &bird, &bet).unwrap();
//! assert!(decision.accepted);
//! assert_eq!(decision.conclusion.to_string(), "P(fly | bird) > 3/5");
//! ```

mod assertion;
mod compiled;
mod decision;
mod error;
mod exec;
pub mod parser;
pub mod rational;
mod sentence;
mod session;
mod world;

pub use assertion::ProbAssertion;
pub use decision::{breakeven, decide, decide_batch, decide_pair, decide_with, BetDecision, Loss, Payoff};
pub use error::{Error, Result};
pub use exec::{Execution, PARALLEL_MIN_ITEMS};
pub use parser::{parse_assertion, parse_sentence, ParseError, ParseErrorKind};
pub use sentence::{atoms_of, eval_sentence, render, Atom, Sentence};
pub use session::{ConclusionRecord, Session};
pub use world::{
    dense_from_table, lottery_density, roulette_density, tweety_density, validate_density, Density,
    DensityReport, Probability, Universe, Violation, World, WorldEntry, MAX_DENSE_ATOMS,
};
