//! Interactive tell/ask loop over one knowledge base.

use std::io::{BufRead, Write};

use betlogic::rational::parse_rational;
use betlogic::{Loss, Payoff, Sentence, Session};

use crate::kb::KnowledgeBase;
use crate::report::{show, DecisionReport, JsonReport};

const HELP: &str = "\
commands:
  tell <sentence>                       add a fact to the evidence
  ask <sentence> win <r> lose <r|life>  bet on a sentence under the current evidence
  ask <sentence> payoff <name>          same, with stakes named in the knowledge base
  history                               told facts and drawn conclusions
  retractions                           conclusions withdrawn by later evidence
  explain <sentence>                    worlds where the sentence holds
  help                                  this text
  quit                                  leave";

/// Output of one REPL command: text for humans, a document for `--json`.
struct Reply {
    text: String,
    json: JsonReport,
}

impl Reply {
    fn ok(command: &str, text: String) -> Self {
        Reply { json: JsonReport { conclusion: Some(text.clone()), ..JsonReport::new(command) }, text }
    }

    fn err(command: &str, message: String) -> Self {
        Reply { text: format!("error: {message}"), json: JsonReport::failure(command, message) }
    }
}

pub struct Repl<'a> {
    kb: &'a KnowledgeBase,
    session: Session,
    json: bool,
}

impl<'a> Repl<'a> {
    pub fn new(kb: &'a KnowledgeBase, json: bool) -> Self {
        Repl { kb, session: Session::new(kb.density.clone()), json }
    }

    pub fn session(&self) -> &Session {
        &self.session
    }

    pub fn run(&mut self, input: &mut dyn BufRead, out: &mut dyn Write, prompt: bool) -> std::io::Result<()> {
        let mut line = String::new();
        loop {
            if prompt {
                write!(out, "> ")?;
                out.flush()?;
            }
            line.clear();
            if input.read_line(&mut line)? == 0 {
                return Ok(());
            }
            let command = line.trim();
            if command.is_empty() || command.starts_with('#') {
                continue;
            }
            if matches!(command, "quit" | "exit") {
                return Ok(());
            }
            let reply = self.execute(command);
            if self.json {
                writeln!(out, "{}", reply.json.to_line())?;
            } else {
                writeln!(out, "{}", reply.text)?;
            }
        }
    }

    fn execute(&mut self, line: &str) -> Reply {
        let (verb, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        match verb {
            "tell" => self.tell(rest),
            "ask" => self.ask(rest),
            "history" => Reply::ok("history", self.history()),
            "retractions" => Reply::ok("retractions", self.retractions()),
            "explain" => self.explain(rest),
            "help" => Reply::ok("help", HELP.to_string()),
            other => Reply::err(other, format!("unknown command `{other}`; try `help`")),
        }
    }

    fn tell(&mut self, text: &str) -> Reply {
        let fact = match Sentence::parse(unquote(text)) {
            Ok(s) => s,
            Err(e) => return Reply::err("tell", e.to_string()),
        };
        match self.session.tell(fact) {
            Ok(()) => {
                let evidence = self.session.evidence().to_string();
                Reply {
                    text: format!("evidence: {evidence}"),
                    json: JsonReport { evidence: Some(evidence), ..JsonReport::new("tell") },
                }
            }
            Err(e) => Reply::err("tell", e.to_string()),
        }
    }

    fn ask(&mut self, text: &str) -> Reply {
        let (sentence, payoff) = match split_stakes(text, self.kb) {
            Ok(parts) => parts,
            Err(e) => return Reply::err("ask", e),
        };
        let query = match Sentence::parse(unquote(sentence)) {
            Ok(s) => s,
            Err(e) => return Reply::err("ask", e.to_string()),
        };
        match self.session.ask(query, payoff) {
            Ok(record) => {
                let d = &record.decision;
                let text = format!(
                    "#{} {}: P = {} vs b = {} -> {}\n  conclude {}",
                    record.sequence_number,
                    d.query,
                    show(&d.probability),
                    show(&d.threshold),
                    if d.accepted { "accept" } else { "reject" },
                    d.conclusion
                );
                Reply { text, json: DecisionReport::of(d).json("ask") }
            }
            Err(e) => Reply::err("ask", e.to_string()),
        }
    }

    fn history(&self) -> String {
        let mut lines = vec![format!("evidence: {}", self.session.evidence())];
        for (i, fact) in self.session.evidence_log().iter().enumerate() {
            lines.push(format!("  fact {}: {fact}", i + 1));
        }
        lines.push(format!("conclusions: {}", self.session.conclusions().len()));
        for r in self.session.conclusions() {
            lines.push(format!("  #{} [{}] {}", r.sequence_number, r.payoff, r.decision.conclusion));
        }
        lines.join("\n")
    }

    fn retractions(&self) -> String {
        let pairs = self.session.retractions();
        let mut lines = vec![format!("retractions: {}", pairs.len())];
        for (a, b) in pairs {
            lines.push(format!(
                "  #{} {}  withdrawn by  #{} {}",
                a.sequence_number, a.decision.conclusion, b.sequence_number, b.decision.conclusion
            ));
        }
        lines.join("\n")
    }

    fn explain(&self, text: &str) -> Reply {
        let s = match Sentence::parse(unquote(text)) {
            Ok(s) => s,
            Err(e) => return Reply::err("explain", e.to_string()),
        };
        match self.kb.density.worlds_where(&s) {
            Ok(rows) => {
                let mut lines = vec![format!("worlds where {s}: {}", rows.len())];
                for e in rows {
                    lines.push(format!("  {}  {}", e.world, betlogic::rational::render_fraction(&e.mass)));
                }
                let prob = self.kb.density.prob(&s).expect("atoms already checked");
                lines.push(format!("total mass: {}", show(&prob)));
                let text = lines.join("\n");
                let mut json = JsonReport::new("explain");
                json.query = Some(s.to_string());
                json.probability = Some(crate::report::Fraction::of(&prob));
                json.conclusion = Some(text.clone());
                Reply { text, json }
            }
            Err(e) => Reply::err("explain", e.to_string()),
        }
    }
}

fn unquote(text: &str) -> &str {
    let t = text.trim();
    t.strip_prefix('"').and_then(|t| t.strip_suffix('"')).unwrap_or(t)
}

/// Splits `<sentence> win <r> lose <r|life>` or `<sentence> payoff <name>`.
fn split_stakes<'t>(text: &'t str, kb: &KnowledgeBase) -> Result<(&'t str, Payoff), String> {
    let words: Vec<&str> = text.split_whitespace().collect();
    let usage = || "usage: ask <sentence> win <r> lose <r|life>  or  ask <sentence> payoff <name>".to_string();
    let cut = |n: usize| -> &'t str {
        // byte position where the trailing n words begin
        let mut end = text.len();
        for _ in 0..n {
            end = text[..end].trim_end().rfind(char::is_whitespace).map_or(0, |i| i);
        }
        text[..end].trim()
    };
    match words.as_slice() {
        [.., "payoff", name] if words.len() > 2 => {
            let payoff = kb.payoffs.get(*name).cloned().ok_or_else(|| format!("no payoff named `{name}`"))?;
            Ok((cut(2), payoff))
        }
        [.., "win", win, "lose", lose] if words.len() > 4 => {
            let win = parse_rational(win).map_err(|e| e.to_string())?;
            let loss = if *lose == "life" {
                Loss::Unbounded
            } else {
                Loss::Finite(parse_rational(lose).map_err(|e| e.to_string())?)
            };
            let payoff = Payoff::with_loss(win, loss).map_err(|e| e.to_string())?;
            Ok((cut(4), payoff))
        }
        _ => Err(usage()),
    }
}
