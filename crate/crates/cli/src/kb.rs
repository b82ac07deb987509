//! Line-oriented knowledge-base files.
//!
//! ```text
//! # comment
//! atoms bird penguin fly
//! world w1 {} 0.888
//! world w2 {fly} 0.002
//! world w5 {bird, fly} 9/100
//! payoff fly_bet win 1 lose 1.5
//! payoff life_bet win 1 lose life
//! ```

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};

use betlogic::rational::parse_rational;
use betlogic::{validate_density, Atom, Density, Loss, Payoff, World, WorldEntry};
use indexmap::IndexMap;
use thiserror::Error;

#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    pub density: Density,
    pub payoffs: IndexMap<String, Payoff>,
}

#[derive(Debug, Error)]
pub enum KbError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid density:\n  {}", .problems.join("\n  "))]
    Invalid { problems: Vec<String> },
}

pub fn load_kb(path: &Path) -> Result<KnowledgeBase, KbError> {
    let text = std::fs::read_to_string(path).map_err(|source| KbError::Io { path: path.to_path_buf(), source })?;
    parse_kb(&text)
}

/// A whitespace-separated word and its 1-based column.
#[derive(Debug, Clone, Copy)]
struct Word<'a> {
    text: &'a str,
    column: usize,
    byte: usize,
}

struct Line<'a> {
    number: usize,
    raw: &'a str,
    words: Vec<Word<'a>>,
}

impl<'a> Line<'a> {
    fn new(number: usize, raw: &'a str) -> Self {
        let raw = raw.split('#').next().unwrap_or("");
        let mut words = Vec::new();
        let mut start = None;
        for (i, c) in raw.char_indices().chain(std::iter::once((raw.len(), ' '))) {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    words.push(Word { text: &raw[s..i], column: raw[..s].chars().count() + 1, byte: s });
                    start = None;
                }
                _ => {}
            }
        }
        Line { number, raw, words }
    }

    fn error(&self, column: usize, message: impl fmt::Display) -> KbError {
        KbError::Parse { line: self.number, column, message: message.to_string() }
    }

    fn end_column(&self) -> usize {
        self.raw.trim_end().chars().count() + 1
    }

    fn word(&self, i: usize, what: &str) -> Result<Word<'a>, KbError> {
        self.words
            .get(i)
            .copied()
            .ok_or_else(|| self.error(self.end_column(), format!("expected {what}")))
    }
}

pub fn parse_kb(text: &str) -> Result<KnowledgeBase, KbError> {
    let mut atoms: Vec<Atom> = Vec::new();
    let mut declared: HashSet<String> = HashSet::new();
    let mut entries: Vec<WorldEntry> = Vec::new();
    let mut entry_lines: Vec<usize> = Vec::new();
    let mut world_ids: HashMap<String, usize> = HashMap::new();
    let mut payoffs = IndexMap::new();

    for (i, raw) in text.lines().enumerate() {
        let line = Line::new(i + 1, raw);
        let Some(directive) = line.words.first() else { continue };
        match directive.text {
            "atoms" => {
                for w in &line.words[1..] {
                    let atom = Atom::new(w.text).map_err(|e| line.error(w.column, e))?;
                    if !declared.insert(w.text.to_string()) {
                        return Err(line.error(w.column, format!("atom `{}` declared twice", w.text)));
                    }
                    atoms.push(atom);
                }
            }
            "world" => {
                let (entry, id_col) = parse_world(&line, &declared)?;
                if let Some(prev) = world_ids.insert(entry.world.id.clone(), line.number) {
                    return Err(line.error(id_col, format!("world id `{}` already used on line {prev}", entry.world.id)));
                }
                entries.push(entry);
                entry_lines.push(line.number);
            }
            "payoff" => {
                let name = line.word(1, "a payoff name")?;
                if payoffs.contains_key(name.text) {
                    return Err(line.error(name.column, format!("payoff `{}` defined twice", name.text)));
                }
                let payoff = parse_stakes(&line, 2)?;
                payoffs.insert(name.text.to_string(), payoff);
            }
            other => {
                return Err(line.error(
                    directive.column,
                    format!("unknown directive `{other}`; expected `atoms`, `world` or `payoff`"),
                ))
            }
        }
    }

    let report = validate_density(&atoms, &entries);
    if !report.is_valid() {
        let problems = report
            .violations
            .iter()
            .map(|v| match v.entry() {
                Some(e) => format!("line {}: {v}", entry_lines[e]),
                None => v.to_string(),
            })
            .collect();
        return Err(KbError::Invalid { problems });
    }
    let density = Density::new(atoms, entries).map_err(|e| KbError::Invalid { problems: vec![e.to_string()] })?;
    Ok(KnowledgeBase { density, payoffs })
}

fn parse_world(line: &Line<'_>, declared: &HashSet<String>) -> Result<(WorldEntry, usize), KbError> {
    let id = line.word(1, "a world id")?;
    if id.text.contains(['{', '}']) {
        return Err(line.error(id.column, "expected a world id before the atom set"));
    }
    // the atom set may contain spaces, so work on the raw text
    let open_byte = line
        .raw
        .find('{')
        .ok_or_else(|| line.error(line.end_column(), "expected `{` opening the set of true atoms"))?;
    let close_byte = line.raw[open_byte..]
        .find('}')
        .map(|n| open_byte + n)
        .ok_or_else(|| line.error(line.end_column(), "expected `}` closing the set of true atoms"))?;
    let col = |byte: usize| line.raw[..byte].chars().count() + 1;
    if !line.raw[id.byte + id.text.len()..open_byte].trim().is_empty() {
        return Err(line.error(id.column, "world id must be a single word"));
    }

    let mut true_atoms = Vec::new();
    let inner = &line.raw[open_byte + 1..close_byte];
    let mut offset = open_byte + 1;
    for part in inner.split(|c: char| c == ',' || c.is_whitespace()) {
        let here = offset;
        offset += part.len() + 1;
        if part.is_empty() {
            continue;
        }
        if !declared.contains(part) {
            return Err(line.error(col(here), format!("undeclared atom `{part}`")));
        }
        true_atoms.push(Atom::new(part).map_err(|e| line.error(col(here), e))?);
    }

    let rest: Vec<&str> = line.raw[close_byte + 1..].split_whitespace().collect();
    let mass_col = line.raw[close_byte + 1..]
        .find(|c: char| !c.is_whitespace())
        .map_or(line.end_column(), |n| col(close_byte + 1 + n));
    let mass = match rest.as_slice() {
        [m] => parse_rational(m).map_err(|e| line.error(mass_col, e))?,
        [] => return Err(line.error(mass_col, "expected a probability after the atom set")),
        [_, extra, ..] => return Err(line.error(mass_col, format!("unexpected `{extra}` after the probability"))),
    };
    Ok((WorldEntry::new(World::new(id.text, true_atoms), mass), id.column))
}

/// Parses `win <r> lose <r|life>` starting at word `from`.
fn parse_stakes(line: &Line<'_>, from: usize) -> Result<Payoff, KbError> {
    let kw = line.word(from, "`win`")?;
    if kw.text != "win" {
        return Err(line.error(kw.column, format!("expected `win`, found `{}`", kw.text)));
    }
    let win_w = line.word(from + 1, "a win amount")?;
    let win = parse_rational(win_w.text).map_err(|e| line.error(win_w.column, e))?;
    let kw = line.word(from + 2, "`lose`")?;
    if kw.text != "lose" {
        return Err(line.error(kw.column, format!("expected `lose`, found `{}`", kw.text)));
    }
    let lose_w = line.word(from + 3, "a loss amount or `life`")?;
    let loss = if lose_w.text == "life" {
        Loss::Unbounded
    } else {
        Loss::Finite(parse_rational(lose_w.text).map_err(|e| line.error(lose_w.column, e))?)
    };
    if let Some(extra) = line.words.get(from + 4) {
        return Err(line.error(extra.column, format!("unexpected `{}`", extra.text)));
    }
    Payoff::with_loss(win, loss).map_err(|e| line.error(win_w.column, e))
}
