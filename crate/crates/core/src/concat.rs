//! Concatenated codes: each outer symbol `s` is replaced by inner codeword
//! `s̄`, and tracing runs on the outer level first, then falls back to what
//! each segment reveals about the inner codewords behind it.

use std::fmt::Write as _;

use itertools::Itertools;
use serde::Serialize;

use crate::designs::io::{content_lines, parse_numbers};
use crate::designs::Point;
use crate::error::{Error, Result};
use crate::gossip::{load_code, save_code, square_gossip, GossipCode, Symbol};
use crate::tracing::{trace_nonzero, Entry, PirateWord, Rule, TraceReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InnerKind {
    Gossip,
    Frameproof,
}

impl InnerKind {
    fn name(self) -> &'static str {
        match self {
            InnerKind::Gossip => "gossip",
            InnerKind::Frameproof => "frameproof",
        }
    }
}

/// Inner code; row `i` (0-based) is the codeword labelled `ī`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InnerCode {
    q: usize,
    kind: InnerKind,
    rows: Vec<Vec<Symbol>>,
}

impl InnerCode {
    pub fn new(q: usize, kind: InnerKind, rows: Vec<Vec<Symbol>>) -> Result<Self> {
        let len = rows.first().map_or(0, Vec::len);
        if rows.len() < 2 || len == 0 {
            return Err(Error::Structural(
                "inner code needs two non-empty rows".into(),
            ));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != len {
                return Err(Error::Structural(format!(
                    "inner row {i} has {} symbols, expected {len}",
                    row.len()
                )));
            }
            if let Some(s) = row.iter().find(|&&s| usize::from(s) >= q) {
                return Err(Error::Structural(format!(
                    "inner row {i} has symbol {s} outside 0..{q}"
                )));
            }
        }
        if let Some((a, b)) = (0..rows.len())
            .tuple_combinations()
            .find(|&(a, b)| rows[a] == rows[b])
        {
            return Err(Error::Structural(format!(
                "inner rows {a} and {b} coincide"
            )));
        }
        Ok(InnerCode { q, kind, rows })
    }

    pub fn from_gossip(code: &GossipCode) -> Result<Self> {
        InnerCode::new(
            code.q(),
            InnerKind::Gossip,
            code.rows().map(<[Symbol]>::to_vec).collect(),
        )
    }

    /// The binary frameproof code with rows 100, 010, 001, 111.
    pub fn fp342() -> Self {
        let rows = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 1]];
        InnerCode::new(2, InnerKind::Frameproof, rows).expect("builtin rows are distinct")
    }

    /// The square Gossip code on four symbols with rows 1110, 2201, 3022, 0333.
    pub fn square4() -> Self {
        let code = square_gossip(4)
            .and_then(|c| c.permute_columns(&[3, 2, 1, 0]))
            .expect("q = 4 is a valid square code");
        InnerCode::from_gossip(&code).expect("square code rows are distinct")
    }

    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "fp342" => Ok(InnerCode::fp342()),
            "square4" => Ok(InnerCode::square4()),
            _ => Err(Error::Parameter(format!(
                "unknown inner code `{name}` (fp342, square4)"
            ))),
        }
    }

    /// Number of inner codewords.
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn l(&self) -> usize {
        self.rows[0].len()
    }

    pub fn kind(&self) -> InnerKind {
        self.kind
    }

    pub fn rows(&self) -> &[Vec<Symbol>] {
        &self.rows
    }

    /// Inner coalitions (sets of labels) of size at most `max_size` that can
    /// produce `segment`, smallest first.
    pub fn feasible_coalitions(&self, segment: &[Entry], max_size: usize) -> Vec<Vec<usize>> {
        (1..=max_size.min(self.m()))
            .flat_map(|size| (0..self.m()).combinations(size))
            .filter(|labels| self.can_produce(labels, segment))
            .collect()
    }

    fn can_produce(&self, labels: &[usize], segment: &[Entry]) -> bool {
        segment.iter().enumerate().all(|(j, &x)| {
            let first = self.rows[labels[0]][j];
            let detected = labels.iter().any(|&a| self.rows[a][j] != first);
            match x {
                Entry::Erasure => detected,
                Entry::Symbol(s) => labels.iter().any(|&a| self.rows[a][j] == s),
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConcatenatedCode {
    inner: InnerCode,
    outer: GossipCode,
}

pub fn concatenate(inner: InnerCode, outer: GossipCode) -> Result<ConcatenatedCode> {
    if inner.m() != outer.q() {
        return Err(Error::Parameter(format!(
            "inner code has {} codewords but the outer alphabet has {} symbols",
            inner.m(),
            outer.q()
        )));
    }
    Ok(ConcatenatedCode { inner, outer })
}

impl ConcatenatedCode {
    pub fn inner(&self) -> &InnerCode {
        &self.inner
    }

    pub fn outer(&self) -> &GossipCode {
        &self.outer
    }

    pub fn m(&self) -> usize {
        self.outer.m()
    }

    /// Total length `l_out · l_in`.
    pub fn l(&self) -> usize {
        self.outer.l() * self.inner.l()
    }

    /// Codeword of outer user `row` over the inner alphabet.
    pub fn row(&self, row: Point) -> Vec<Symbol> {
        self.outer
            .row(row)
            .iter()
            .flat_map(|&s| self.inner.rows[usize::from(s)].iter().copied())
            .collect()
    }
}

/// One decoded segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segment {
    /// Outer symbol when the segment is exactly an inner codeword.
    pub outer: Entry,
    /// Union of the inner coalitions that can produce the segment.
    pub candidates: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decoded {
    pub outer_word: PirateWord,
    pub segments: Vec<Segment>,
}

/// Splits `word` into inner-length segments and decodes each.
pub fn segment_and_decode(ccode: &ConcatenatedCode, word: &PirateWord) -> Result<Decoded> {
    if word.len() != ccode.l() {
        return Err(Error::Parameter(format!(
            "word has {} positions, concatenated length is {}",
            word.len(),
            ccode.l()
        )));
    }
    let max_size = ccode.outer.c().min(ccode.inner.m());
    let segments: Vec<Segment> = word
        .entries()
        .chunks(ccode.inner.l())
        .map(|seg| {
            let exact = ccode
                .inner
                .rows
                .iter()
                .position(|row| row.iter().zip(seg).all(|(&s, &x)| x == Entry::Symbol(s)));
            let candidates = ccode
                .inner
                .feasible_coalitions(seg, max_size)
                .into_iter()
                .flatten()
                .sorted_unstable()
                .dedup()
                .collect();
            Segment {
                outer: exact.map_or(Entry::Erasure, |s| Entry::Symbol(s as Symbol)),
                candidates,
            }
        })
        .collect();
    let outer_word = PirateWord(segments.iter().map(|s| s.outer).collect());
    Ok(Decoded {
        outer_word,
        segments,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConcatTrace {
    pub decoded: Decoded,
    /// 1 when the outer tracer accused someone, 2 otherwise.
    pub stage: u8,
    pub report: TraceReport,
}

/// Stage 1 traces the decoded outer word. If that accuses nobody, stage 2
/// keeps every user whose outer symbol lies in each segment's candidates.
pub fn concat_trace(ccode: &ConcatenatedCode, word: &PirateWord) -> Result<ConcatTrace> {
    let decoded = segment_and_decode(ccode, word)?;
    let outer = trace_nonzero(&ccode.outer, &decoded.outer_word)?;
    if !outer.untraceable {
        return Ok(ConcatTrace {
            decoded,
            stage: 1,
            report: outer,
        });
    }
    let accused = (1..=ccode.m() as Point)
        .filter(|&u| {
            decoded.segments.iter().enumerate().all(|(j, seg)| {
                seg.candidates
                    .contains(&usize::from(ccode.outer.symbol(u, j)))
            })
        })
        .collect();
    Ok(ConcatTrace {
        decoded,
        stage: 2,
        report: TraceReport::from_accused(Rule::Concatenated, accused),
    })
}

/// Concatenated code file: an `inner M q l kind` header and its rows, then
/// an `outer` line followed by a code file.
pub fn save_ccode(ccode: &ConcatenatedCode) -> String {
    let inner = &ccode.inner;
    let mut out = format!(
        "inner {} {} {} {}\n",
        inner.m(),
        inner.q,
        inner.l(),
        inner.kind.name()
    );
    for row in &inner.rows {
        let _ = writeln!(out, "{}", row.iter().join(" "));
    }
    out.push_str("outer\n");
    out.push_str(&save_code(&ccode.outer));
    out
}

pub fn load_ccode(text: &str) -> Result<ConcatenatedCode> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing `inner M q l kind` header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let ["inner", m, q, l, kind] = fields[..] else {
        return Err(Error::parse(header_line, "expected `inner M q l kind`"));
    };
    let nums = parse_numbers::<usize>(header_line, &format!("{m} {q} {l}"))?;
    let kind = match kind {
        "gossip" => InnerKind::Gossip,
        "frameproof" => InnerKind::Frameproof,
        other => {
            return Err(Error::parse(
                header_line,
                format!("unknown inner kind `{other}`"),
            ))
        }
    };
    let mut rows = Vec::with_capacity(nums[0]);
    for _ in 0..nums[0] {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| Error::parse(header_line, "file ends inside the inner code"))?;
        let row = parse_numbers::<Symbol>(line_no, line)?;
        if row.len() != nums[2] {
            return Err(Error::parse(
                line_no,
                format!("inner row needs {} symbols", nums[2]),
            ));
        }
        rows.push(row);
    }
    match lines.next() {
        Some((_, "outer")) => {}
        Some((line_no, _)) => return Err(Error::parse(line_no, "expected `outer`")),
        None => return Err(Error::parse(header_line, "missing outer code")),
    }
    let rest = lines.map(|(_, line)| line).join("\n");
    let inner = InnerCode::new(nums[1], kind, rows)?;
    concatenate(inner, load_code(&rest)?)
}
