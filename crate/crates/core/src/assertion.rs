use std::fmt;

use crate::sentence::Sentence;
use crate::world::Probability;

/// A flat probability statement `P(sentence | evidence) > bound`, or its
/// negation `~(P(sentence | evidence) > bound)`. Every conclusion the
/// reasoner draws has this form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProbAssertion {
    pub sentence: Sentence,
    pub evidence: Sentence,
    pub bound: Probability,
    pub negated: bool,
}

impl ProbAssertion {
    pub fn new(sentence: Sentence, evidence: Sentence, bound: Probability, negated: bool) -> Self {
        ProbAssertion { sentence, evidence, bound, negated }
    }

    pub fn parse(text: &str) -> crate::Result<Self> {
        Ok(crate::parser::parse_assertion(text)?)
    }

    pub fn negate(&self) -> Self {
        ProbAssertion { negated: !self.negated, ..self.clone() }
    }
}

impl fmt::Display for ProbAssertion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let inner = format!(
            "P({} | {}) > {}",
            guard_bar(&self.sentence),
            guard_bar(&self.evidence),
            self.bound
        );
        if self.negated {
            write!(f, "~({inner})")
        } else {
            f.write_str(&inner)
        }
    }
}

/// Renders `s`, wrapping it in parentheses when a top-level `|` would be
/// read as the conditioning bar.
fn guard_bar(s: &Sentence) -> String {
    let text = s.to_string();
    let mut depth = 0i32;
    let bare_bar = text.chars().any(|c| {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '|' if depth == 0 => return true,
            _ => {}
        }
        false
    });
    if bare_bar {
        format!("({text})")
    } else {
        text
    }
}

#[cfg(test)]
mod tests {
    use crate::parser::parse_assertion;

    #[test]
    fn canonical_forms() {
        for text in [
            "P(fly | bird) > 3/5",
            "~(P(~fly | bird) > 2/5)",
            "~(P(fly | bird & penguin) > 3/5)",
            "P(true | true) > 1/2",
            "P((a | b) | (c -> d | e)) > 0",
            "P((a -> b | c) | true) > 1",
        ] {
            let a = parse_assertion(text).unwrap();
            assert_eq!(a.to_string(), text);
            assert_eq!(parse_assertion(&a.to_string()).unwrap(), a);
        }
        assert_eq!(parse_assertion("P(fly|bird)>0.6").unwrap().to_string(), "P(fly | bird) > 3/5");
        assert_eq!(parse_assertion("P(fly) > 0.5").unwrap().to_string(), "P(fly | true) > 1/2");
    }

    #[test]
    fn negate_flips_only_the_polarity() {
        let a = parse_assertion("P(fly | bird) > 0.6").unwrap();
        let n = a.negate();
        assert!(n.negated);
        assert_eq!(n.negate(), a);
    }
}
