//! Human-readable and JSON renderings of command results.

use betlogic::{BetDecision, Probability};
use serde::Serialize;
use serde_json::Number;

/// An exact probability as numerator, denominator and a 4-place decimal.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fraction {
    pub num: Number,
    pub den: Number,
    pub dec: String,
}

impl Fraction {
    pub fn of(p: &Probability) -> Self {
        let number = |n: String| n.parse::<Number>().expect("integers are valid JSON numbers");
        Fraction { num: number(p.numer().to_string()), den: number(p.denom().to_string()), dec: p.decimal() }
    }
}

/// The one JSON document every command emits under `--json`. Fields that do
/// not apply are `null`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct JsonReport {
    pub command: String,
    pub query: Option<String>,
    pub evidence: Option<String>,
    pub probability: Option<Fraction>,
    pub threshold: Option<Fraction>,
    pub accepted: Option<bool>,
    pub conclusion: Option<String>,
    pub error: Option<String>,
}

impl JsonReport {
    pub fn new(command: impl Into<String>) -> Self {
        JsonReport { command: command.into(), ..Default::default() }
    }

    pub fn failure(command: impl Into<String>, error: impl ToString) -> Self {
        JsonReport { error: Some(error.to_string()), ..JsonReport::new(command) }
    }

    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Everything the `decide` command reports about one bet.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionReport {
    pub query: String,
    pub evidence: String,
    pub probability: Fraction,
    pub threshold: Fraction,
    pub accepted: bool,
    pub conclusion: String,
}

impl DecisionReport {
    pub fn of(d: &BetDecision) -> Self {
        DecisionReport {
            query: d.query.to_string(),
            evidence: d.evidence.to_string(),
            probability: Fraction::of(&d.probability),
            threshold: Fraction::of(&d.threshold),
            accepted: d.accepted,
            conclusion: d.conclusion.to_string(),
        }
    }

    pub fn json(&self, command: &str) -> JsonReport {
        JsonReport {
            command: command.to_string(),
            query: Some(self.query.clone()),
            evidence: Some(self.evidence.clone()),
            probability: Some(self.probability.clone()),
            threshold: Some(self.threshold.clone()),
            accepted: Some(self.accepted),
            conclusion: Some(self.conclusion.clone()),
            error: None,
        }
    }

    pub fn human(&self) -> String {
        let frac = |f: &Fraction| {
            if f.den.to_string() == "1" {
                format!("{} = {}", f.num, f.dec)
            } else {
                format!("{}/{} ≈ {}", f.num, f.den, f.dec)
            }
        };
        format!(
            "query:       {}\nevidence:    {}\nprobability: {}\nthreshold:   {}\nverdict:     {}\nconclusion:  {}\n",
            self.query,
            self.evidence,
            frac(&self.probability),
            frac(&self.threshold),
            if self.accepted { "accept" } else { "reject" },
            self.conclusion
        )
    }
}

/// `9/11 ≈ 0.8182`, or `1 = 1.0000` for integers.
pub fn show(p: &Probability) -> String {
    if p.denom().to_string() == "1" {
        format!("{p} = {}", p.decimal())
    } else {
        format!("{p} ≈ {}", p.decimal())
    }
}
