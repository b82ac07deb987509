//! Reasoning sessions: told facts accumulate as a conjunction, and every
//! answer is logged as a bet indexed by the evidence it was made on.

use std::sync::Arc;

use crate::decision::{decide, decide_batch, BetDecision, Payoff};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::sentence::Sentence;
use crate::world::Density;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConclusionRecord {
    /// 1-based position in the conclusion log.
    pub sequence_number: usize,
    pub query: Sentence,
    pub evidence_snapshot: Sentence,
    pub payoff: Payoff,
    pub decision: BetDecision,
    /// Session clock value; ticks on every tell and ask.
    pub timestamp: u64,
}

/// A nonmonotonic reasoning session over one fixed density.
#[derive(Clone, Debug)]
pub struct Session {
    density: Arc<Density>,
    evidence_log: Vec<Sentence>,
    evidence: Sentence,
    conclusions: Vec<ConclusionRecord>,
    clock: u64,
}

impl Session {
    pub fn new(density: impl Into<Arc<Density>>) -> Self {
        Session {
            density: density.into(),
            evidence_log: Vec::new(),
            evidence: Sentence::Const(true),
            conclusions: Vec::new(),
            clock: 0,
        }
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    /// Facts told so far, in order.
    pub fn evidence_log(&self) -> &[Sentence] {
        &self.evidence_log
    }

    /// The conjunction of every told fact (`true` before the first).
    pub fn evidence(&self) -> &Sentence {
        &self.evidence
    }

    pub fn conclusions(&self) -> &[ConclusionRecord] {
        &self.conclusions
    }

    /// Adds `fact` to the evidence. Refused, leaving the session untouched,
    /// when the fact is impossible given the density and earlier facts.
    pub fn tell(&mut self, fact: Sentence) -> Result<()> {
        let combined = if self.evidence_log.is_empty() {
            fact.clone()
        } else {
            Sentence::and(self.evidence.clone(), fact.clone())
        };
        if self.density.prob(&combined)?.is_zero() {
            return Err(Error::Contradiction { fact: fact.to_string(), evidence: self.evidence.to_string() });
        }
        self.evidence_log.push(fact);
        self.evidence = combined;
        self.clock += 1;
        Ok(())
    }

    /// Bets on `query` under the current evidence and logs the result.
    pub fn ask(&mut self, query: Sentence, payoff: Payoff) -> Result<&ConclusionRecord> {
        let decision = decide(&self.density, &query, &self.evidence, &payoff)?;
        Ok(self.record(query, payoff, decision))
    }

    /// Asks every query under the same evidence and stakes. The bets are
    /// evaluated concurrently under `exec` and logged in input order; on
    /// error nothing is logged.
    pub fn ask_batch(&mut self, queries: Vec<Sentence>, payoff: &Payoff, exec: Execution) -> Result<&[ConclusionRecord]> {
        let decisions = decide_batch(&self.density, &queries, &self.evidence, payoff, exec)?;
        let start = self.conclusions.len();
        for (query, decision) in queries.into_iter().zip(decisions) {
            self.record(query, payoff.clone(), decision);
        }
        Ok(&self.conclusions[start..])
    }

    fn record(&mut self, query: Sentence, payoff: Payoff, decision: BetDecision) -> &ConclusionRecord {
        self.clock += 1;
        self.conclusions.push(ConclusionRecord {
            sequence_number: self.conclusions.len() + 1,
            query,
            evidence_snapshot: self.evidence.clone(),
            payoff,
            decision,
            timestamp: self.clock,
        });
        self.conclusions.last().expect("just pushed")
    }

    /// Every point where a repeated bet (same query, same stakes) changed
    /// verdict relative to its previous occurrence, in either direction.
    pub fn flips(&self) -> Vec<(&ConclusionRecord, &ConclusionRecord)> {
        let mut out = Vec::new();
        for (i, later) in self.conclusions.iter().enumerate() {
            let previous = self.conclusions[..i]
                .iter()
                .rev()
                .find(|r| r.query == later.query && r.payoff == later.payoff);
            if let Some(earlier) = previous {
                if earlier.decision.accepted != later.decision.accepted {
                    out.push((earlier, later));
                }
            }
        }
        out
    }

    /// Flips that withdraw a conclusion: a bet accepted earlier and
    /// rejected after more evidence arrived.
    pub fn retractions(&self) -> Vec<(&ConclusionRecord, &ConclusionRecord)> {
        self.flips()
            .into_iter()
            .filter(|(earlier, _)| earlier.decision.accepted)
            .collect()
    }
}
