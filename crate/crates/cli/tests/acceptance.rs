//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any criterion fails.
//!
//!     cargo test -p betlogic-cli --test acceptance

use std::process::ExitCode;
use std::time::{Duration, Instant};

use betlogic::{
    breakeven, decide, decide_pair, lottery_density, parse_assertion, parse_sentence, roulette_density, tweety_density,
    Density, ParseErrorKind, Payoff, Probability, Sentence,
};
use betlogic_cli::demo;
use betlogic_testkit::{random_sentence, random_table};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const TRIALS: usize = 1000;
const LOTTERY_TICKETS: usize = 10_000;
const LOTTERY_BUDGET: Duration = Duration::from_secs(5);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn s(text: &str) -> Sentence {
    parse_sentence(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn cond(d: &Density, query: &str, evidence: &str) -> Result<Probability, String> {
    d.cond_prob(&s(query), &s(evidence)).map_err(|e| e.to_string())
}

fn tweety_probabilities() -> Outcome {
    let d = tweety_density();
    let fly = cond(&d, "fly", "bird")?;
    let not_fly = cond(&d, "~fly", "bird")?;
    ensure!(*fly.value() == q(9, 11), "P(fly | bird) = {fly}, want 9/11");
    ensure!(*not_fly.value() == q(2, 11), "P(~fly | bird) = {not_fly}, want 2/11");
    ensure!(fly.decimal() == "0.8182", "decimal {} for 9/11", fly.decimal());
    ensure!(not_fly.decimal() == "0.1818", "decimal {} for 2/11", not_fly.decimal());
    let (a, b): (f64, f64) = (fly.decimal().parse().unwrap(), not_fly.decimal().parse().unwrap());
    ensure!((a - 0.82).abs() <= 0.005 && (b - 0.18).abs() <= 0.005, "decimals {a}, {b} not near 0.82, 0.18");
    let fly_p = cond(&d, "fly", "bird & penguin")?;
    let not_fly_p = cond(&d, "~fly", "bird & penguin")?;
    ensure!(fly_p.is_zero(), "P(fly | bird & penguin) = {fly_p}, want 0");
    ensure!(*not_fly_p.value() == BigRational::one(), "P(~fly | bird & penguin) = {not_fly_p}, want 1");
    Ok(format!("9/11 ({}), 2/11 ({}), 0, 1", fly.decimal(), not_fly.decimal()))
}

fn tweety_conclusions(run: &demo::DemoRun) -> Outcome {
    let want = [
        "P(fly | bird) > 3/5",
        "~(P(~fly | bird) > 2/5)",
        "~(P(fly | bird & penguin) > 3/5)",
        "P(~fly | bird & penguin) > 2/5",
    ];
    ensure!(run.conclusions == want, "conclusions {:?}", run.conclusions);
    let flips = run.session.retractions();
    ensure!(flips.len() == 1, "{} retractions, want 1", flips.len());
    ensure!(flips[0].0.query == s("fly"), "retraction concerns {}", flips[0].0.query);
    ensure!(run.passed(), "demo self-checks failed: {:?}", run.failures);
    Ok("four conclusions, one retraction".into())
}

fn breakeven_math() -> Outcome {
    let cases = [((q(1, 1), q(1, 1)), q(1, 2)), ((q(1, 1), q(3, 2)), q(3, 5)), ((q(3, 2), q(1, 1)), q(2, 5))];
    for ((win, loss), want) in cases {
        let stakes = Payoff::new(win, loss).map_err(|e| e.to_string())?;
        let got = breakeven(&stakes);
        ensure!(*got.value() == want, "breakeven({stakes}) = {got}, want {want}");
    }
    let life = Payoff::unbounded_loss(q(1, 1)).map_err(|e| e.to_string())?;
    ensure!(*breakeven(&life).value() == BigRational::one(), "unbounded breakeven is {}", breakeven(&life));
    for (name, d, tautology) in [
        ("tweety", tweety_density(), s("fly | ~fly")),
        ("roulette", roulette_density(), s("fires -> fires")),
    ] {
        let t = decide(&d, &tautology, &Sentence::Const(true), &life).map_err(|e| e.to_string())?;
        ensure!(*t.probability.value() == BigRational::one(), "{name}: tautology probability {}", t.probability);
        ensure!(!t.accepted, "{name}: unbounded loss accepted on a tautology");
    }
    let d = roulette_density();
    let t = decide(&d, &Sentence::Const(true), &Sentence::Const(true), &life).map_err(|e| e.to_string())?;
    ensure!(*t.probability.value() == BigRational::one() && !t.accepted, "`true` under unbounded loss: {t:?}");
    let big = Payoff::unbounded_loss(q(1_000_000_000, 1)).map_err(|e| e.to_string())?;
    let t = decide(&d, &s("fires | ~fires"), &Sentence::Const(true), &big).map_err(|e| e.to_string())?;
    ensure!(!t.accepted, "huge win with unbounded loss accepted");
    Ok("1/2, 3/5, 2/5, unbounded -> 1 and never accepted".into())
}

fn roulette(run: &demo::DemoRun) -> Outcome {
    let d = roulette_density();
    let safe = s("~fires");
    let even = decide(&d, &safe, &Sentence::Const(true), &Payoff::new(q(1, 1), q(1, 1)).unwrap()).map_err(|e| e.to_string())?;
    let life = decide(&d, &safe, &Sentence::Const(true), &Payoff::unbounded_loss(q(1, 1)).unwrap()).map_err(|e| e.to_string())?;
    ensure!(*even.probability.value() == q(5, 6), "P(~fires) = {}", even.probability);
    ensure!(even.accepted, "even-stakes bet rejected");
    ensure!(!life.accepted, "life-stakes bet accepted");
    ensure!(run.passed(), "demo self-checks failed: {:?}", run.failures);
    Ok("5/6 > 1/2 accepted; 5/6 vs 1 rejected".into())
}

fn lottery(run: &demo::DemoRun, elapsed: Duration) -> Outcome {
    let records = run.session.conclusions();
    let nine_tenths = q(9, 10);
    let mut singles = 0;
    for r in records.iter().filter(|r| matches!(&r.query, Sentence::Not(inner) if matches!(**inner, Sentence::Atom(_)))) {
        ensure!(r.decision.accepted, "{} rejected", r.query);
        ensure!(*r.decision.threshold.value() == nine_tenths, "threshold {}", r.decision.threshold);
        ensure!(*r.decision.probability.value() == q(9_999, 10_000), "P({}) = {}", r.query, r.decision.probability);
        singles += 1;
    }
    ensure!(singles == LOTTERY_TICKETS, "{singles} individual tickets decided, want {LOTTERY_TICKETS}");
    let conj = records.last().ok_or("no records")?;
    ensure!(matches!(conj.query, Sentence::And(..)), "last record is not the conjunction");
    ensure!(conj.decision.probability.is_zero(), "conjunction probability {}", conj.decision.probability);
    ensure!(!conj.decision.accepted, "conjunction accepted");
    ensure!(run.passed(), "demo self-checks failed: {:?}", run.failures);
    ensure!(elapsed < LOTTERY_BUDGET, "demo took {elapsed:.2?}");
    let d = lottery_density(LOTTERY_TICKETS).map_err(|e| e.to_string())?;
    let winner_k = d.prob(&s("winner_4711")).map_err(|e| e.to_string())?;
    ensure!(*winner_k.value() == q(1, 10_000), "P(winner_4711) = {winner_k}");
    Ok(format!("{singles} accepted at 9/10, conjunction P = 0 rejected, {elapsed:.2?}"))
}

fn oracle_equivalence(rng: &mut ChaCha8Rng) -> Outcome {
    let one = BigRational::one();
    let mut conditionals = 0;
    for trial in 0..TRIALS {
        let table = random_table(rng, 8);
        let sparse = table.sparse_density(rng);
        let dense = table.dense_density();
        let sq = random_sentence(rng, &table.names, 5);
        let ev = random_sentence(rng, &table.names, 3);
        for (kind, d) in [("sparse", &sparse), ("dense", &dense)] {
            let p = |x: &Sentence| d.prob(x).map(|p| p.value().clone()).map_err(|e| e.to_string());
            let ps = p(&sq)?;
            ensure!(ps == table.prob(&sq), "trial {trial} {kind}: P({sq}) = {ps}, oracle {}", table.prob(&sq));
            ensure!(p(&Sentence::not(sq.clone()))? == &one - &ps, "trial {trial} {kind}: complement fails for {sq}");
            ensure!(p(&Sentence::or(sq.clone(), Sentence::not(sq.clone())))? == one, "trial {trial} {kind}: tautology");
            ensure!(p(&Sentence::Const(true))? == one, "trial {trial} {kind}: P(true) != 1");
            let pe = p(&ev)?;
            let joint = p(&Sentence::and(sq.clone(), ev.clone()))?;
            match (d.cond_prob(&sq, &ev), table.cond_prob(&sq, &ev)) {
                (Ok(c), Some(o)) => {
                    ensure!(*c.value() == o, "trial {trial} {kind}: P({sq} | {ev}) = {c}, oracle {o}");
                    ensure!(joint == c.value() * &pe, "trial {trial} {kind}: chain identity fails");
                    conditionals += 1;
                }
                (Err(betlogic::Error::ZeroEvidence(_)), None) => ensure!(pe.is_zero(), "zero evidence misreported"),
                (got, want) => return Err(format!("trial {trial} {kind}: engine {got:?}, oracle {want:?}")),
            }
        }
    }
    Ok(format!("{TRIALS} densities, {conditionals} conditionals, exact agreement"))
}

fn random_payoff(rng: &mut ChaCha8Rng) -> Payoff {
    let win = q(rng.gen_range(1..=20), rng.gen_range(1..=5));
    if rng.gen_bool(0.1) {
        Payoff::unbounded_loss(win).unwrap()
    } else {
        Payoff::new(win, q(rng.gen_range(1..=20), rng.gen_range(1..=5))).unwrap()
    }
}

fn no_dual_acceptance(rng: &mut ChaCha8Rng) -> Outcome {
    let mut trials = 0;
    let mut one_side = 0;
    while trials < TRIALS {
        let table = random_table(rng, 8);
        let d = if rng.gen() { table.sparse_density(rng) } else { table.dense_density() };
        let query = random_sentence(rng, &table.names, 4);
        let evidence = random_sentence(rng, &table.names, 2);
        if table.prob(&evidence).is_zero() {
            continue;
        }
        let (p_for, p_against) = (random_payoff(rng), random_payoff(rng));
        let sum = breakeven(&p_for).value() + breakeven(&p_against).value();
        if sum < BigRational::one() {
            continue;
        }
        let (yes, no) = decide_pair(&d, &query, &evidence, &p_for, &p_against).map_err(|e| e.to_string())?;
        ensure!(
            !(yes.accepted && no.accepted),
            "both sides accepted: {} / {} with stakes {p_for} and {p_against}",
            yes.conclusion,
            no.conclusion
        );
        one_side += usize::from(yes.accepted || no.accepted);
        trials += 1;
    }
    Ok(format!("{trials} trials, {one_side} with one side accepted, none with both"))
}

const EXAMPLE_SENTENCES: &[&str] = &[
    "bird & ~fly",
    "bird -> penguin -> fly",
    "fly",
    "~fly",
    "bird",
    "bird & penguin",
    "~bird & penguin",
    "~fires",
    "true",
];

const EXAMPLE_ASSERTIONS: &[&str] = &[
    "P(fly | bird) > 0.6",
    "~(P(fly | bird & penguin) > 0.6)",
    "P(fly | bird & penguin) > 0.6",
    "P(true | true) > 0.5",
    "P(fly | bird) > 3/5",
    "~(P(~fly | bird) > 2/5)",
    "~(P(fly | bird & penguin) > 3/5)",
    "P(~fly | bird & penguin) > 2/5",
];

fn parser_round_trip(rng: &mut ChaCha8Rng) -> Outcome {
    let names: Vec<String> = ["bird", "penguin", "fly", "x_1", "Ab9"].iter().map(|n| n.to_string()).collect();
    for trial in 0..TRIALS {
        let ast = random_sentence(rng, &names, 7);
        let text = ast.to_string();
        let back = parse_sentence(&text).map_err(|e| format!("trial {trial}: `{text}`: {e}"))?;
        ensure!(back == ast, "trial {trial}: `{text}` reparsed as {back:?}");
    }
    for text in EXAMPLE_SENTENCES {
        parse_sentence(text).map_err(|e| format!("`{text}`: {e}"))?;
    }
    for text in EXAMPLE_ASSERTIONS {
        let a = parse_assertion(text).map_err(|e| format!("`{text}`: {e}"))?;
        let again = parse_assertion(&a.to_string()).map_err(|e| format!("`{a}`: {e}"))?;
        ensure!(again == a, "`{text}` does not survive its canonical form `{a}`");
    }
    ensure!(s("bird & ~fly") == Sentence::and(s("bird"), Sentence::not(s("fly"))), "`bird & ~fly` misparsed");
    ensure!(
        s("bird -> penguin -> fly") == Sentence::implies(s("bird"), Sentence::implies(s("penguin"), s("fly"))),
        "`->` is not right-associative"
    );
    let err = parse_sentence("bird & (").err().ok_or("`bird & (` parsed")?;
    ensure!(err.offset == 8, "`bird & (` fails at offset {}, want 8", err.offset);
    let nested = parse_assertion("P(a | P(b) > 0.5) > 0.1").err().ok_or("nested P accepted")?;
    ensure!(matches!(nested.kind, ParseErrorKind::NestedProbability), "nested P error: {nested}");
    Ok(format!(
        "{TRIALS} round-trips, {} example sentences and {} assertions parse",
        EXAMPLE_SENTENCES.len(),
        EXAMPLE_ASSERTIONS.len()
    ))
}

fn snapshot_replay(runs: &[&demo::DemoRun]) -> Outcome {
    let mut replayed = 0;
    for run in runs {
        let session = &run.session;
        for r in session.conclusions() {
            let again = decide(session.density(), &r.query, &r.evidence_snapshot, &r.payoff).map_err(|e| e.to_string())?;
            ensure!(again == r.decision, "{} #{} replays differently", run.name, r.sequence_number);
            ensure!(again.conclusion.to_string() == r.decision.conclusion.to_string(), "conclusion text differs");
            replayed += 1;
        }
    }
    ensure!(replayed > LOTTERY_TICKETS, "only {replayed} records replayed");
    Ok(format!("{replayed} records reproduced exactly"))
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0b57);
    let tweety = demo::tweety();
    let started = Instant::now();
    let lottery_run = demo::lottery(LOTTERY_TICKETS);
    let lottery_time = started.elapsed();
    let roulette_run = demo::roulette();

    let results: Vec<(&str, Outcome)> = vec![
        ("1 tweety probabilities exact", tweety_probabilities()),
        ("2 tweety conclusions and retraction", tweety_conclusions(&tweety)),
        ("3 breakeven math", breakeven_math()),
        ("4 roulette", roulette(&roulette_run)),
        ("5 lottery at 10000 tickets", lottery(&lottery_run, lottery_time)),
        ("6 oracle equivalence and axioms", oracle_equivalence(&mut rng)),
        ("7 no dual acceptance", no_dual_acceptance(&mut rng)),
        ("8 parser round-trip", parser_round_trip(&mut rng)),
        ("9 snapshot replay", snapshot_replay(&[&tweety, &lottery_run])),
    ];

    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
