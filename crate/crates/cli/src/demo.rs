//! Scripted, self-checking scenarios: the bird example, the lottery and
//! Russian roulette.

use std::fmt::Write as _;

use betlogic::{
    lottery_density, roulette_density, tweety_density, Execution, Payoff, Probability, Sentence, Session,
};
use num_rational::BigRational;
use num_traits::One;
use regex::Regex;

use crate::report::show;

pub const DEFAULT_TICKETS: usize = 10_000;

#[derive(Debug, Clone)]
pub struct DemoRun {
    pub name: &'static str,
    pub transcript: String,
    /// Conclusions in the order they were drawn, as printed.
    pub conclusions: Vec<String>,
    /// Expected outcomes that did not hold, as `expected ..., got ...` lines.
    pub failures: Vec<String>,
    pub checks: usize,
    pub session: Session,
}

impl DemoRun {
    fn new(name: &'static str, session: Session) -> Self {
        DemoRun { name, transcript: String::new(), conclusions: Vec::new(), failures: Vec::new(), checks: 0, session }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn line(&mut self, text: impl AsRef<str>) {
        self.transcript.push_str(text.as_ref());
        self.transcript.push('\n');
    }

    fn check<T: PartialEq + std::fmt::Display>(&mut self, what: &str, expected: T, actual: T) {
        self.checks += 1;
        if expected != actual {
            self.failures.push(format!("{what}: expected {expected}, got {actual}"));
        }
    }

    fn finish(mut self) -> Self {
        if self.passed() {
            let n = self.checks;
            self.line(format!("all {n} checks passed"));
        } else {
            self.line(format!("{} of {} checks FAILED:", self.failures.len(), self.checks));
            for f in self.failures.clone() {
                self.line(format!("  {f}"));
            }
        }
        self
    }
}

/// Rewrites the lottery shorthand `loser_k` to `~winner_k`.
pub fn desugar_lottery(text: &str) -> String {
    let re = Regex::new(r"\bloser_(\d+)\b").expect("valid regex");
    re.replace_all(text, "~winner_$1").into_owned()
}

fn parse(text: &str) -> Sentence {
    Sentence::parse(text).expect("demo sentences are well formed")
}

fn ratio(n: u64, d: u64) -> Probability {
    Probability::from_ratio(n, d).expect("valid")
}

pub fn tweety() -> DemoRun {
    let mut run = DemoRun::new("tweety", Session::new(tweety_density()));
    let bet_fly = Payoff::ratio(1, 1, 3, 2).expect("valid");
    let bet_not = Payoff::ratio(3, 2, 1, 1).expect("valid");
    run.line("bird example: prior over bird, penguin, fly (8 worlds)");
    run.line(format!("stakes on fly:  {bet_fly} (breakeven {})", bet_fly.breakeven()));
    run.line(format!("stakes on ~fly: {bet_not} (breakeven {})", bet_not.breakeven()));

    let script: [(&str, &str, u64, u64, bool); 4] = [
        ("bird", "fly", 9, 11, true),
        ("", "~fly", 2, 11, false),
        ("penguin", "fly", 0, 1, false),
        ("", "~fly", 1, 1, true),
    ];
    for (fact, query, num, den, expect_accept) in script {
        if !fact.is_empty() {
            run.line(format!("tell {fact}"));
            run.session.tell(parse(fact)).expect("facts are possible");
        }
        let payoff = if query == "fly" { bet_fly.clone() } else { bet_not.clone() };
        let record = run.session.ask(parse(query), payoff).expect("evidence is possible").clone();
        let d = &record.decision;
        run.line(format!(
            "ask {query}: P = {} vs b = {} -> {}",
            show(&d.probability),
            show(&d.threshold),
            if d.accepted { "accept" } else { "reject" }
        ));
        run.line(format!("  conclude {}", d.conclusion));
        run.conclusions.push(d.conclusion.to_string());
        run.check(&format!("P({query} | {})", d.evidence), ratio(num, den), d.probability.clone());
        run.check(&format!("accept {query} under {}", d.evidence), expect_accept, d.accepted);
    }

    let expected = [
        "P(fly | bird) > 3/5",
        "~(P(~fly | bird) > 2/5)",
        "~(P(fly | bird & penguin) > 3/5)",
        "P(~fly | bird & penguin) > 2/5",
    ];
    for (i, want) in expected.iter().enumerate() {
        let got = run.conclusions[i].clone();
        run.check(&format!("conclusion {}", i + 1), want.to_string(), got);
    }

    let retractions: Vec<String> = run
        .session
        .retractions()
        .iter()
        .map(|(a, b)| format!("  #{} {}  withdrawn by  #{} {}", a.sequence_number, a.decision.conclusion, b.sequence_number, b.decision.conclusion))
        .collect();
    run.line(format!("retractions: {}", retractions.len()));
    for r in &retractions {
        run.line(r);
    }
    run.check("retractions", 1, retractions.len());
    run.finish()
}

pub fn lottery(tickets: usize) -> DemoRun {
    let density = lottery_density(tickets.max(1)).expect("at least one ticket");
    let mut run = DemoRun::new("lottery", Session::new(density));
    let payoff = Payoff::ratio(1, 1, 9, 1).expect("valid");
    let threshold = payoff.breakeven();
    run.line(format!("lottery: {tickets} tickets, exactly one wins, uniform"));
    run.line(format!("stakes on each loser_k: {payoff} (breakeven {threshold})"));

    let queries: Vec<Sentence> = (1..=tickets).map(|k| parse(&desugar_lottery(&format!("loser_{k}")))).collect();
    let records = run
        .session
        .ask_batch(queries, &payoff, Execution::default())
        .expect("lottery evidence is trivial")
        .to_vec();
    let single = BigRational::new((tickets as u64 - 1).into(), (tickets as u64).into());
    let should_accept = single > *threshold.value();
    let mut accepted = 0;
    for (k, r) in (1..=tickets).zip(&records) {
        let d = &r.decision;
        run.line(format!(
            "ask loser_{k}: P = {} vs b = {} -> {}  {}",
            show(&d.probability),
            threshold,
            if d.accepted { "accept" } else { "reject" },
            d.conclusion
        ));
        run.conclusions.push(d.conclusion.to_string());
        accepted += usize::from(d.accepted);
        if d.accepted != should_accept {
            run.failures.push(format!("loser_{k}: expected accept={should_accept}, got {}", d.accepted));
        }
    }
    run.checks += 1;
    run.line(format!("individually accepted: {accepted} of {tickets}"));

    let everyone_loses = Sentence::conjunction_of((1..=tickets).map(|k| parse(&format!("~winner_{k}"))));
    let r = run.session.ask(everyone_loses, payoff.clone()).expect("lottery evidence is trivial").clone();
    let shown = if tickets > 3 {
        format!("~winner_1 & ~winner_2 & ... & ~winner_{tickets}")
    } else {
        r.query.to_string()
    };
    let verdict = if r.decision.accepted { "accept" } else { "reject" };
    let conclusion = if r.decision.accepted {
        format!("P({shown} | true) > {threshold}")
    } else {
        format!("~(P({shown} | true) > {threshold})")
    };
    run.line(format!(
        "ask loser_1 & ... & loser_{tickets}: P = {} vs b = {threshold} -> {verdict}  {conclusion}",
        show(&r.decision.probability)
    ));
    run.conclusions.push(conclusion);
    run.line("no ticket-by-ticket acceptance licenses the conjunction: it is evaluated directly");
    run.check("P(every ticket loses)", Probability::zero(), r.decision.probability.clone());
    run.check("accept every ticket loses", false, r.decision.accepted);
    run.finish()
}

pub fn roulette() -> DemoRun {
    let mut run = DemoRun::new("roulette", Session::new(roulette_density()));
    let even = Payoff::ratio(1, 1, 1, 1).expect("valid");
    let life = Payoff::unbounded_loss(BigRational::one()).expect("valid");
    run.line("russian roulette: 1 bullet, 6 chambers, cylinder spun");
    for (label, payoff, expect_accept) in [("scenario 1", even, true), ("scenario 2", life, false)] {
        let r = run.session.ask(parse("~fires"), payoff.clone()).expect("trivial evidence").clone();
        let d = &r.decision;
        run.line(format!(
            "{label} ({payoff}): P(~fires) = {} vs b = {} -> {}",
            show(&d.probability),
            show(&d.threshold),
            if d.accepted { "accept" } else { "reject" }
        ));
        run.line(format!("  conclude {}", d.conclusion));
        run.conclusions.push(d.conclusion.to_string());
        run.check(&format!("{label} P(~fires)"), ratio(5, 6), d.probability.clone());
        run.check(&format!("{label} accepted"), expect_accept, d.accepted);
    }
    let mut note = String::new();
    let _ = write!(note, "same uncertainty, different stakes, different verdicts");
    run.line(note);
    run.finish()
}
