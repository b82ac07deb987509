//! Breakeven thresholds and the acceptance rule.
//!
//! A bet on `S` given `e` that wins `w` when right and loses `l` when wrong
//! has zero expected value at `P(S | e) = l / (w + l)`. The reasoner
//! accepts exactly when the conditional probability is strictly above that
//! breakeven point. An unbounded loss sends the breakeven to 1, which no
//! probability can exceed.
//!
//! Low thresholds make the reasoner brave (anything with positive
//! probability clears a threshold near 0); thresholds near 1 make it
//! cautious. The familiar "accept when `P(S) > 1 - ε`" rule is this rule
//! with a fixed threshold `1 - ε`.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::assertion::ProbAssertion;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::rational::render_fraction;
use crate::sentence::Sentence;
use crate::world::{Density, Probability};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Loss {
    Finite(BigRational),
    /// A stake nothing can compensate, such as the bettor's life.
    Unbounded,
}

/// Stakes of a binary bet. Utilities are linear in the stakes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Payoff {
    win: BigRational,
    loss: Loss,
}

impl Payoff {
    pub fn new(win: BigRational, loss: BigRational) -> Result<Self> {
        if !loss.is_positive() {
            return Err(Error::InvalidPayoff(format!("loss must be positive, got {}", render_fraction(&loss))));
        }
        Payoff::with_loss(win, Loss::Finite(loss))
    }

    pub fn unbounded_loss(win: BigRational) -> Result<Self> {
        Payoff::with_loss(win, Loss::Unbounded)
    }

    pub fn with_loss(win: BigRational, loss: Loss) -> Result<Self> {
        if !win.is_positive() {
            return Err(Error::InvalidPayoff(format!("win must be positive, got {}", render_fraction(&win))));
        }
        if let Loss::Finite(l) = &loss {
            if !l.is_positive() {
                return Err(Error::InvalidPayoff(format!("loss must be positive, got {}", render_fraction(l))));
            }
        }
        Ok(Payoff { win, loss })
    }

    /// Convenience for small integer-ratio stakes: `win_n/win_d`, `loss_n/loss_d`.
    pub fn ratio(win_n: i64, win_d: i64, loss_n: i64, loss_d: i64) -> Result<Self> {
        if win_d == 0 || loss_d == 0 {
            return Err(Error::InvalidPayoff("zero denominator".into()));
        }
        Payoff::new(BigRational::new(win_n.into(), win_d.into()), BigRational::new(loss_n.into(), loss_d.into()))
    }

    pub fn win(&self) -> &BigRational {
        &self.win
    }

    pub fn loss(&self) -> &Loss {
        &self.loss
    }

    pub fn breakeven(&self) -> Probability {
        breakeven(self)
    }
}

impl fmt::Display for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.loss {
            Loss::Finite(l) => write!(f, "win {} lose {}", render_fraction(&self.win), render_fraction(l)),
            Loss::Unbounded => write!(f, "win {} lose life", render_fraction(&self.win)),
        }
    }
}

/// `loss / (win + loss)`, or exactly 1 for an unbounded loss.
pub fn breakeven(p: &Payoff) -> Probability {
    let b = match &p.loss {
        Loss::Finite(l) => l / (&p.win + l),
        Loss::Unbounded => BigRational::one(),
    };
    Probability::new(b).expect("positive stakes give a threshold in (0, 1]")
}

/// A bet on `query` given `evidence`, and the conclusion drawn from it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BetDecision {
    pub query: Sentence,
    pub evidence: Sentence,
    pub probability: Probability,
    pub threshold: Probability,
    pub accepted: bool,
    pub conclusion: ProbAssertion,
}

impl BetDecision {
    fn from_probability(query: Sentence, evidence: Sentence, probability: Probability, payoff: &Payoff) -> Self {
        let threshold = breakeven(payoff);
        let accepted = payoff.loss != Loss::Unbounded && probability > threshold;
        let conclusion = ProbAssertion::new(query.clone(), evidence.clone(), threshold.clone(), !accepted);
        BetDecision { query, evidence, probability, threshold, accepted, conclusion }
    }
}

/// Applies the acceptance rule to `query` given `evidence`.
pub fn decide(d: &Density, query: &Sentence, evidence: &Sentence, payoff: &Payoff) -> Result<BetDecision> {
    decide_with(d, query, evidence, payoff, Execution::default())
}

pub fn decide_with(
    d: &Density,
    query: &Sentence,
    evidence: &Sentence,
    payoff: &Payoff,
    exec: Execution,
) -> Result<BetDecision> {
    let probability = d.cond_prob_with(query, evidence, exec)?;
    Ok(BetDecision::from_probability(query.clone(), evidence.clone(), probability, payoff))
}

/// Decides the bet on `query` under `p_for` and, independently, the bet on
/// its negation under `p_against`.
pub fn decide_pair(
    d: &Density,
    query: &Sentence,
    evidence: &Sentence,
    p_for: &Payoff,
    p_against: &Payoff,
) -> Result<(BetDecision, BetDecision)> {
    let yes = decide(d, query, evidence, p_for)?;
    let no = decide(d, &Sentence::not(query.clone()), evidence, p_against)?;
    Ok((yes, no))
}

/// Decides many queries against the same evidence and stakes, one
/// enumeration per query. Results keep the order of `queries`.
pub fn decide_batch(
    d: &Density,
    queries: &[Sentence],
    evidence: &Sentence,
    payoff: &Payoff,
    exec: Execution,
) -> Result<Vec<BetDecision>> {
    // Each query is its own unit of parallel work; the per-query
    // enumeration runs sequentially inside it.
    exec.map_slice(queries, |q| decide_with(d, q, evidence, payoff, Execution::Sequential))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::world::{lottery_density, roulette_density, tweety_density};
    use num_traits::Zero;

    fn s(t: &str) -> Sentence {
        Sentence::parse(t).unwrap()
    }

    fn p(n: u64, d: u64) -> Probability {
        Probability::from_ratio(n, d).unwrap()
    }

    fn one() -> BigRational {
        BigRational::one()
    }

    #[test]
    fn breakeven_values() {
        assert_eq!(breakeven(&Payoff::ratio(1, 1, 1, 1).unwrap()), p(1, 2));
        assert_eq!(breakeven(&Payoff::ratio(1, 1, 3, 2).unwrap()), p(3, 5));
        assert_eq!(breakeven(&Payoff::ratio(3, 2, 1, 1).unwrap()), p(2, 5));
        assert_eq!(breakeven(&Payoff::unbounded_loss(one()).unwrap()), p(1, 1));
        assert_eq!(breakeven(&Payoff::ratio(1, 1, 99, 1).unwrap()), p(99, 100));
    }

    #[test]
    fn breakeven_zeroes_expected_value() {
        // p*win - (1-p)*loss = 0 at the threshold
        for (w, l) in [(1, 1), (1, 99), (7, 3), (2, 5)] {
            let payoff = Payoff::ratio(w, 1, l, 1).unwrap();
            let b = breakeven(&payoff).value().clone();
            let ev = &b * BigRational::from_integer(w.into()) - (one() - &b) * BigRational::from_integer(l.into());
            assert!(ev.is_zero(), "{payoff}");
        }
    }

    #[test]
    fn invalid_payoffs() {
        assert!(Payoff::ratio(0, 1, 1, 1).is_err());
        assert!(Payoff::ratio(1, 1, 0, 1).is_err());
        assert!(Payoff::ratio(-1, 1, 1, 1).is_err());
        assert!(Payoff::ratio(1, 1, -1, 1).is_err());
        assert!(Payoff::unbounded_loss(BigRational::zero()).is_err());
        assert!(Payoff::ratio(1, 0, 1, 1).is_err());
    }

    #[test]
    fn tweety_decisions() {
        let d = tweety_density();
        let bet_fly = Payoff::ratio(1, 1, 3, 2).unwrap();
        let bet_not = Payoff::ratio(3, 2, 1, 1).unwrap();

        let r = decide(&d, &s("fly"), &s("bird"), &bet_fly).unwrap();
        assert!(r.accepted);
        assert_eq!(r.probability, p(9, 11));
        assert_eq!(r.conclusion.to_string(), "P(fly | bird) > 3/5");

        let r = decide(&d, &s("~fly"), &s("bird"), &bet_not).unwrap();
        assert!(!r.accepted);
        assert_eq!(r.probability, p(2, 11));
        assert_eq!(r.conclusion.to_string(), "~(P(~fly | bird) > 2/5)");

        let r = decide(&d, &s("fly"), &s("bird & penguin"), &bet_fly).unwrap();
        assert!(!r.accepted);
        assert_eq!(r.probability, p(0, 1));

        let (yes, no) = decide_pair(&d, &s("fly"), &s("bird"), &bet_fly, &bet_not).unwrap();
        assert!(yes.accepted && !no.accepted);
        let (yes, no) = decide_pair(&d, &s("fly"), &s("bird & penguin"), &bet_fly, &bet_not).unwrap();
        assert!(!yes.accepted && no.accepted);
        assert_eq!(no.conclusion.to_string(), "P(~fly | bird & penguin) > 2/5");

        assert!(matches!(
            decide(&d, &s("fly"), &s("penguin & ~bird"), &bet_fly),
            Err(Error::ZeroEvidence(_))
        ));
    }

    #[test]
    fn roulette_decisions() {
        let d = roulette_density();
        let even = decide(&d, &s("~fires"), &s("true"), &Payoff::ratio(1, 1, 1, 1).unwrap()).unwrap();
        assert!(even.accepted);
        assert_eq!(even.probability, p(5, 6));
        let life = decide(&d, &s("~fires"), &s("true"), &Payoff::unbounded_loss(one()).unwrap()).unwrap();
        assert!(!life.accepted);
        assert_eq!(life.threshold, p(1, 1));
        assert_eq!(life.conclusion.to_string(), "~(P(~fires | true) > 1)");
        let certain = decide(&d, &s("true"), &s("true"), &Payoff::unbounded_loss(one()).unwrap()).unwrap();
        assert_eq!(certain.probability, p(1, 1));
        assert!(!certain.accepted);
    }

    #[test]
    fn ties_are_rejected_on_both_sides() {
        // P(a) = 1/2, thresholds 1/2 and 1/2
        let d = lottery_density(2).unwrap();
        let even = Payoff::ratio(1, 1, 1, 1).unwrap();
        let (yes, no) = decide_pair(&d, &s("winner_1"), &s("true"), &even, &even).unwrap();
        assert!(!yes.accepted && !no.accepted);
        // P = 2/5 with thresholds 2/5 and 3/5
        let d = crate::world::dense_from_table(
            vec![crate::Atom::new("a").unwrap()],
            vec![BigRational::new(3.into(), 5.into()), BigRational::new(2.into(), 5.into())],
        )
        .unwrap();
        let (yes, no) = decide_pair(
            &d,
            &s("a"),
            &s("true"),
            &Payoff::ratio(3, 1, 2, 1).unwrap(),
            &Payoff::ratio(2, 1, 3, 1).unwrap(),
        )
        .unwrap();
        assert_eq!(yes.threshold, p(2, 5));
        assert_eq!(no.threshold, p(3, 5));
        assert!(!yes.accepted && !no.accepted);
    }

    #[test]
    fn batch_matches_individual_decisions() {
        let d = lottery_density(50).unwrap();
        let payoff = Payoff::ratio(1, 1, 9, 1).unwrap();
        let queries: Vec<_> = (1..=50).map(|k| s(&format!("~winner_{k}"))).collect();
        let seq = decide_batch(&d, &queries, &s("true"), &payoff, Execution::Sequential).unwrap();
        let par = decide_batch(&d, &queries, &s("true"), &payoff, Execution::Parallel).unwrap();
        assert_eq!(seq, par);
        for (q, r) in queries.iter().zip(&seq) {
            assert_eq!(r, &decide(&d, q, &s("true"), &payoff).unwrap());
            assert!(r.accepted);
        }
        let bad = [s("winner_1"), s("ghost")];
        assert!(decide_batch(&d, &bad, &s("true"), &payoff, Execution::Parallel).is_err());
    }

    #[test]
    fn payoff_display() {
        assert_eq!(Payoff::ratio(1, 1, 3, 2).unwrap().to_string(), "win 1 lose 3/2");
        assert_eq!(Payoff::unbounded_loss(one()).unwrap().to_string(), "win 1 lose life");
    }
}
