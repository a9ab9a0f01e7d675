//! Pirate coalitions under the erasure model and the three tracers.
//!
//! A coalition compares its copies position by position. Where all copies
//! agree the mark is undetected and the common symbol is forced; where they
//! differ the pirates may keep any symbol one of them holds or erase it.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use crate::combin::binomial;
use crate::designs::{io::content_lines, lambda_s, Point};
use crate::error::{Error, Result};
use crate::gossip::{GossipCode, Symbol};

/// Default ceiling on the number of coalitions [`brute_force_trace`] visits.
pub const DEFAULT_BUDGET: u128 = 5_000_000;

/// One position of a pirate word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Entry {
    Symbol(Symbol),
    Erasure,
}

impl Entry {
    pub fn symbol(self) -> Option<Symbol> {
        match self {
            Entry::Symbol(s) => Some(s),
            Entry::Erasure => None,
        }
    }
}

impl fmt::Display for Entry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Entry::Symbol(s) => write!(f, "{s}"),
            Entry::Erasure => f.write_str("e"),
        }
    }
}

impl FromStr for Entry {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "e" {
            return Ok(Entry::Erasure);
        }
        s.parse()
            .map(Entry::Symbol)
            .map_err(|_| format!("`{s}` is neither a symbol nor `e`"))
    }
}

impl Serialize for Entry {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.collect_str(self)
    }
}

/// A word produced by a coalition. Written as space-separated tokens with `e`
/// for an erasure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct PirateWord(pub Vec<Entry>);

impl PirateWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.0
    }

    pub fn from_codeword(row: &[Symbol]) -> Self {
        PirateWord(row.iter().copied().map(Entry::Symbol).collect())
    }

    /// Parses a word file: exactly one non-comment line of tokens.
    pub fn load(text: &str) -> Result<Self> {
        let mut lines = content_lines(text);
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty pirate word file"))?;
        if let Some((extra, _)) = lines.next() {
            return Err(Error::parse(extra, "a word file holds a single line"));
        }
        line.split_whitespace()
            .map(|tok| tok.parse().map_err(|m| Error::parse(line_no, m)))
            .collect::<Result<Vec<_>>>()
            .map(PirateWord)
    }
}

impl fmt::Display for PirateWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.iter().join(" "))
    }
}

impl FromStr for PirateWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(|ch: char| ch.is_whitespace() || ch == ',')
            .filter(|tok| !tok.is_empty())
            .map(|tok| tok.parse().map_err(|m| Error::parse(1, m)))
            .collect::<Result<Vec<_>>>()
            .map(PirateWord)
    }
}

/// Distinct users, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Coalition(Vec<Point>);

impl Coalition {
    pub fn new(members: impl IntoIterator<Item = Point>, m: usize) -> Result<Self> {
        let members: Vec<Point> = members.into_iter().sorted_unstable().collect();
        if members.is_empty() {
            return Err(Error::Parameter("empty coalition".into()));
        }
        if let Some(&p) = members.iter().find(|&&p| p == 0 || p as usize > m) {
            return Err(Error::Parameter(format!("user {p} outside 1..={m}")));
        }
        if !members.iter().all_unique() {
            return Err(Error::Parameter(format!(
                "coalition {members:?} repeats a user"
            )));
        }
        Ok(Coalition(members))
    }

    pub fn members(&self) -> &[Point] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StrategyKind {
    /// Every detected position keeps a member's symbol.
    NoErasures,
    /// Each detected position is erased or kept by a fair seeded coin.
    SelectiveErasures,
    /// Every detected position is erased.
    OnlyErasures,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 3] = [
        StrategyKind::NoErasures,
        StrategyKind::SelectiveErasures,
        StrategyKind::OnlyErasures,
    ];
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "no-erasures" => Ok(StrategyKind::NoErasures),
            "selective-erasures" => Ok(StrategyKind::SelectiveErasures),
            "only-erasures" => Ok(StrategyKind::OnlyErasures),
            _ => Err(Error::Parameter(format!(
                "unknown strategy `{s}` (no-erasures, selective-erasures, only-erasures)"
            ))),
        }
    }
}

/// Callback deciding a detected position: receives the column and the
/// distinct symbols the coalition holds there.
pub type Adversary<'a> = dyn FnMut(usize, &[Symbol]) -> Entry + 'a;

/// How a symbol is picked at a detected position.
pub enum ChoicePolicy<'a> {
    /// Uniform over the members' distinct symbols.
    Random,
    /// The symbol of the lowest-numbered member.
    FirstMember,
    /// Fully caller-controlled. The callback also decides erasures, except
    /// under [`StrategyKind::NoErasures`] where returning one is a model error.
    Adversarial(Box<Adversary<'a>>),
}

impl fmt::Debug for ChoicePolicy<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChoicePolicy::Random => "Random",
            ChoicePolicy::FirstMember => "FirstMember",
            ChoicePolicy::Adversarial(_) => "Adversarial",
        })
    }
}

#[derive(Debug)]
pub struct Strategy<'a> {
    pub kind: StrategyKind,
    pub policy: ChoicePolicy<'a>,
    /// Accept coalitions larger than the code's `c`.
    pub allow_oversize: bool,
}

impl Strategy<'_> {
    pub fn new(kind: StrategyKind) -> Self {
        Strategy {
            kind,
            policy: ChoicePolicy::Random,
            allow_oversize: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Simulation {
    pub word: PirateWord,
    /// The coalition was larger than `c`.
    pub out_of_model: bool,
}

fn check_members(code: &GossipCode, w: &Coalition) -> Result<()> {
    match w.members().last() {
        Some(&p) if p as usize > code.m() => Err(Error::Parameter(format!(
            "user {p} outside 1..={}",
            code.m()
        ))),
        _ => Ok(()),
    }
}

fn column_symbols(code: &GossipCode, w: &Coalition, j: usize) -> Vec<Symbol> {
    w.members()
        .iter()
        .map(|&r| code.symbol(r, j))
        .sorted_unstable()
        .dedup()
        .collect()
}

/// Columns where at least two members hold different symbols.
pub fn detected_positions(code: &GossipCode, w: &Coalition) -> Result<Vec<usize>> {
    check_members(code, w)?;
    let first = code.row(w.members()[0]);
    Ok((0..code.l())
        .filter(|&j| w.members().iter().any(|&r| code.symbol(r, j) != first[j]))
        .collect())
}

pub fn make_pirate_word(
    code: &GossipCode,
    w: &Coalition,
    strategy: &mut Strategy<'_>,
    seed: u64,
) -> Result<Simulation> {
    check_members(code, w)?;
    let out_of_model = w.len() > code.c();
    if out_of_model && !strategy.allow_oversize {
        return Err(Error::Model(format!(
            "coalition of {} exceeds c = {}",
            w.len(),
            code.c()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut word = Vec::with_capacity(code.l());
    for j in 0..code.l() {
        let held = column_symbols(code, w, j);
        if held.len() == 1 {
            word.push(Entry::Symbol(held[0]));
            continue;
        }
        let entry = match (strategy.kind, &mut strategy.policy) {
            (StrategyKind::OnlyErasures, _) => Entry::Erasure,
            (kind, ChoicePolicy::Adversarial(pick)) => {
                let entry = pick(j, &held);
                match entry {
                    Entry::Erasure if kind == StrategyKind::NoErasures => {
                        return Err(Error::Model(format!(
                            "adversary erased column {j} under no-erasures"
                        )))
                    }
                    Entry::Symbol(s) if !held.contains(&s) => {
                        return Err(Error::Model(format!(
                            "adversary chose symbol {s} at column {j}, coalition holds {held:?}"
                        )))
                    }
                    _ => entry,
                }
            }
            (kind, policy) => {
                if kind == StrategyKind::SelectiveErasures && rng.gen_bool(0.5) {
                    Entry::Erasure
                } else {
                    match policy {
                        ChoicePolicy::FirstMember => Entry::Symbol(code.symbol(w.members()[0], j)),
                        _ => Entry::Symbol(held[rng.gen_range(0..held.len())]),
                    }
                }
            }
        };
        word.push(entry);
    }
    Ok(Simulation {
        word: PirateWord(word),
        out_of_model,
    })
}

/// Whether `w` can produce `word`: forced symbols at undetected columns, a
/// held symbol or an erasure at detected ones.
pub fn is_descendant(code: &GossipCode, w: &Coalition, word: &PirateWord) -> bool {
    if word.len() != code.l() || check_members(code, w).is_err() {
        return false;
    }
    word.entries().iter().enumerate().all(|(j, &x)| {
        let mut held = w.members().iter().map(|&r| code.symbol(r, j));
        let first = held.next().expect("coalitions are non-empty");
        let mut detected = false;
        let mut found = x == Entry::Symbol(first);
        for s in held {
            detected |= s != first;
            found |= x == Entry::Symbol(s);
        }
        found || (detected && x == Entry::Erasure)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Rule {
    Nonzero,
    ZeroPattern,
    BruteForce,
    Concatenated,
}

/// A word position and the user it points to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Attribution {
    pub position: usize,
    pub symbol: Symbol,
    pub user: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceReport {
    pub rule: Rule,
    /// Accused users, ascending.
    pub accused: Vec<Point>,
    /// Feasible coalitions, only filled by [`brute_force_trace`].
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub coalitions: Vec<Vec<Point>>,
    pub untraceable: bool,
    /// Per-position evidence behind `accused`, for rules that have it.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub attributions: Vec<Attribution>,
}

impl TraceReport {
    pub(crate) fn from_accused(rule: Rule, accused: Vec<Point>) -> Self {
        TraceReport {
            rule,
            untraceable: accused.is_empty(),
            accused,
            coalitions: Vec::new(),
            attributions: Vec::new(),
        }
    }
}

fn check_length(code: &GossipCode, word: &PirateWord) -> Result<()> {
    if word.len() != code.l() {
        return Err(Error::Parameter(format!(
            "word has {} positions, code length is {}",
            word.len(),
            code.l()
        )));
    }
    Ok(())
}

/// Every traceable symbol names exactly one user. Symbol 0 counts only on
/// zero-tracing codes.
pub fn trace_nonzero(code: &GossipCode, word: &PirateWord) -> Result<TraceReport> {
    check_length(code, word)?;
    let mut attributions = Vec::new();
    for (j, entry) in word.entries().iter().enumerate() {
        let Some(s) = entry.symbol() else { continue };
        if s == 0 && !code.zero_is_tracing() {
            continue;
        }
        let user = code.owner(j, s).ok_or_else(|| {
            Error::Integrity(format!("no codeword holds symbol {s} at column {j}"))
        })?;
        attributions.push(Attribution {
            position: j,
            symbol: s,
            user,
        });
    }
    let accused = attributions
        .iter()
        .map(|a| a.user)
        .sorted_unstable()
        .dedup()
        .collect();
    let mut report = TraceReport::from_accused(Rule::Nonzero, accused);
    report.attributions = attributions;
    Ok(report)
}

/// Accuses every user holding 0 at all zero positions of the word. With no
/// zero in the word the rule does not apply and the report is untraceable.
pub fn trace_only_erasures(code: &GossipCode, word: &PirateWord) -> Result<TraceReport> {
    check_length(code, word)?;
    let zeros: Vec<usize> = word
        .entries()
        .iter()
        .positions(|&x| x == Entry::Symbol(0))
        .collect();
    let accused = if zeros.is_empty() {
        Vec::new()
    } else {
        (1..=code.m() as Point)
            .filter(|&r| zeros.iter().all(|&j| code.symbol(r, j) == 0))
            .collect()
    };
    Ok(TraceReport::from_accused(Rule::ZeroPattern, accused))
}

/// All coalitions of size at most `c` able to produce `word`, by size then
/// lexicographically. Fails when more than `budget` coalitions would be
/// examined.
pub fn brute_force_trace(
    code: &GossipCode,
    word: &PirateWord,
    c: usize,
    budget: u128,
) -> Result<TraceReport> {
    check_length(code, word)?;
    if c == 0 {
        return Err(Error::Parameter("coalition bound must be positive".into()));
    }
    let work: u128 = (1..=c as u64).map(|s| binomial(code.m() as u64, s)).sum();
    if work > budget {
        return Err(Error::Resource(format!(
            "{work} coalitions exceed the budget of {budget}; use the zero-pattern tracer"
        )));
    }
    let mut coalitions = Vec::new();
    for size in 1..=c.min(code.m()) {
        for members in (1..=code.m() as Point).combinations(size) {
            let w = Coalition(members);
            if is_descendant(code, &w, word) {
                coalitions.push(w.0);
            }
        }
    }
    let accused = coalitions
        .iter()
        .flatten()
        .copied()
        .sorted_unstable()
        .dedup()
        .collect();
    let mut report = TraceReport::from_accused(Rule::BruteForce, accused);
    report.coalitions = coalitions;
    Ok(report)
}

/// Undetected positions of any `d`-coalition in a code built from a λ = 1
/// design, by inclusion-exclusion over λ_i.
pub fn undetectable_count(code: &GossipCode, d: usize) -> Result<u64> {
    let design = code
        .provenance()
        .ok_or_else(|| Error::Parameter("code was not built from a design".into()))?;
    if d == 0 || d > design.t() {
        return Err(Error::Parameter(format!(
            "coalition size {d} outside 1..={}",
            design.t()
        )));
    }
    let mut covered: i128 = 0;
    for i in 1..=d {
        let term = binomial(d as u64, i as u64) as i128 * i128::from(lambda_s(design, i)?);
        covered += if i % 2 == 1 { term } else { -term };
    }
    u64::try_from(code.l() as i128 - covered)
        .map_err(|_| Error::Consistency("inclusion-exclusion went negative".into()))
}

/// [`undetectable_count`] cross-checked against a direct count of column keys
/// disjoint from `w`.
pub fn undetectable_count_checked(code: &GossipCode, w: &Coalition) -> Result<u64> {
    check_members(code, w)?;
    let formula = undetectable_count(code, w.len())?;
    let direct = code
        .keys()
        .iter()
        .filter(|key| key.iter().all(|r| !w.members().contains(r)))
        .count() as u64;
    if formula != direct {
        return Err(Error::Consistency(format!(
            "formula gives {formula} undetected columns, keys give {direct}"
        )));
    }
    Ok(direct)
}
