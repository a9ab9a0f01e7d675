//! Gossip codes: q-ary codes whose every column holds each non-zero symbol
//! exactly once.
//!
//! A code is stored by its column keys. Key `j` lists the rows (users,
//! numbered from 1) that receive a non-zero symbol in column `j`, in
//! assignment order: the `s`-th listed row gets symbol `s`. The symbol
//! matrix is derived from the keys once at construction.
//!
//! Columns are indexed from 0 in this API; rows and design points from 1.

mod io;

pub use io::{load_code, save_code};

use std::collections::{BTreeSet, HashSet};

use itertools::Itertools;
use serde::Serialize;

use crate::combin::{binomial, exact_div};
use crate::designs::{Design, Point};
use crate::error::{Error, Result};

pub type Symbol = u16;

/// How non-zero symbols are handed out inside a column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SymbolOrder {
    /// Symbol `s` goes to the `s`-th smallest row of the key.
    #[default]
    Ascending,
    /// Symbol `s` goes to the `s`-th point in the order the design generated
    /// it (cyclic development). Falls back to ascending when the design has
    /// no recorded development.
    Development,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GossipCode {
    m: usize,
    q: usize,
    c: usize,
    keys: Vec<Vec<Point>>,
    zero_rows: Option<Vec<Point>>,
    #[serde(skip)]
    matrix: Vec<Symbol>,
    #[serde(skip)]
    provenance: Option<Design>,
}

impl GossipCode {
    /// Builds a code from column keys. With `zero_is_tracing` the code must be
    /// square in rows and alphabet (`M = q`) and the single row missing from a
    /// key holds the column's 0.
    pub fn from_keys(
        m: usize,
        q: usize,
        c: usize,
        keys: Vec<Vec<Point>>,
        zero_is_tracing: bool,
    ) -> Result<Self> {
        if q < 2 || q > usize::from(Symbol::MAX) {
            return Err(Error::Parameter(format!("alphabet size {q}")));
        }
        if q > m {
            return Err(Error::Parameter(format!(
                "alphabet size {q} exceeds {m} codewords"
            )));
        }
        if c == 0 || c >= q {
            return Err(Error::Parameter(format!(
                "collusion size {c} must satisfy 1 <= c < q = {q}"
            )));
        }
        if zero_is_tracing && m != q {
            return Err(Error::Parameter(format!(
                "zero-tracing codes need M = q, got M = {m}, q = {q}"
            )));
        }
        if keys.is_empty() {
            return Err(Error::Structural("code has no columns".into()));
        }
        for (j, key) in keys.iter().enumerate() {
            if key.len() != q - 1 {
                return Err(Error::Structural(format!(
                    "column {} key has {} rows, expected {}",
                    j + 1,
                    key.len(),
                    q - 1
                )));
            }
            if key.iter().any(|&r| r == 0 || r as usize > m) || !key.iter().all_unique() {
                return Err(Error::Structural(format!(
                    "column {} key {key:?} is not a set of rows in 1..={m}",
                    j + 1
                )));
            }
        }
        let l = keys.len();
        let mut matrix = vec![0 as Symbol; m * l];
        for (j, key) in keys.iter().enumerate() {
            for (s, &row) in key.iter().enumerate() {
                matrix[(row as usize - 1) * l + j] = (s + 1) as Symbol;
            }
        }
        let zero_rows = zero_is_tracing.then(|| {
            keys.iter()
                .map(|key| {
                    (1..=m as Point)
                        .find(|r| !key.contains(r))
                        .expect("M = q leaves exactly one row outside each key")
                })
                .collect()
        });
        Ok(GossipCode {
            m,
            q,
            c,
            keys,
            zero_rows,
            matrix,
            provenance: None,
        })
    }

    /// Builds a code from its symbol matrix (one `Vec` per row).
    pub fn from_matrix(
        q: usize,
        c: usize,
        rows: &[Vec<Symbol>],
        zero_is_tracing: bool,
    ) -> Result<Self> {
        let m = rows.len();
        let l = rows.first().map_or(0, Vec::len);
        if let Some((i, _)) = rows.iter().find_position(|r| r.len() != l) {
            return Err(Error::Structural(format!(
                "row {} has {} symbols, expected {l}",
                i + 1,
                rows[i].len()
            )));
        }
        let mut keys = Vec::with_capacity(l);
        for j in 0..l {
            let mut key = vec![0 as Point; q.saturating_sub(1)];
            for (i, row) in rows.iter().enumerate() {
                let s = usize::from(row[j]);
                if s >= q {
                    return Err(Error::Structural(format!(
                        "symbol {s} at row {}, column {} is outside 0..{q}",
                        i + 1,
                        j + 1
                    )));
                }
                if s > 0 {
                    if key[s - 1] != 0 {
                        return Err(Error::Structural(format!(
                            "symbol {s} appears twice in column {}",
                            j + 1
                        )));
                    }
                    key[s - 1] = (i + 1) as Point;
                }
            }
            if let Some(s) = key.iter().position(|&r| r == 0) {
                return Err(Error::Structural(format!(
                    "symbol {} missing from column {}",
                    s + 1,
                    j + 1
                )));
            }
            keys.push(key);
        }
        GossipCode::from_keys(m, q, c, keys, zero_is_tracing)
    }

    pub(crate) fn with_provenance(mut self, design: Design) -> Self {
        self.provenance = Some(design);
        self
    }

    /// Number of codewords.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn c(&self) -> usize {
        self.c
    }

    /// Code length.
    pub fn l(&self) -> usize {
        self.keys.len()
    }

    pub fn keys(&self) -> &[Vec<Point>] {
        &self.keys
    }

    pub fn zero_is_tracing(&self) -> bool {
        self.zero_rows.is_some()
    }

    /// Row holding the traceable 0 of column `j`, for zero-tracing codes.
    pub fn zero_row(&self, j: usize) -> Option<Point> {
        self.zero_rows.as_ref().map(|z| z[j])
    }

    /// The λ = 1 design this code was built from, if any.
    pub fn provenance(&self) -> Option<&Design> {
        self.provenance.as_ref()
    }

    /// Codeword of user `row` (1-based).
    pub fn row(&self, row: Point) -> &[Symbol] {
        let l = self.l();
        let start = (row as usize - 1) * l;
        &self.matrix[start..start + l]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Symbol]> {
        self.matrix.chunks(self.l())
    }

    pub fn symbol(&self, row: Point, column: usize) -> Symbol {
        self.matrix[(row as usize - 1) * self.l() + column]
    }

    /// The unique row holding `symbol` in `column`, if any.
    pub fn owner(&self, column: usize, symbol: Symbol) -> Option<Point> {
        match symbol {
            0 => self.zero_row(column),
            s => self.keys[column].get(usize::from(s) - 1).copied(),
        }
    }

    /// Number of non-zero entries in a codeword.
    pub fn row_weight(&self, row: Point) -> usize {
        self.row(row).iter().filter(|&&s| s != 0).count()
    }

    pub fn hamming(&self, a: Point, b: Point) -> usize {
        self.row(a)
            .iter()
            .zip(self.row(b))
            .filter(|(x, y)| x != y)
            .count()
    }

    /// Reorders columns: column `j` of the result is column `order[j]` here.
    pub fn permute_columns(&self, order: &[usize]) -> Result<Self> {
        let mut seen = order.to_vec();
        seen.sort_unstable();
        if seen != (0..self.l()).collect::<Vec<_>>() {
            return Err(Error::Parameter(format!(
                "{order:?} is not a permutation of 0..{}",
                self.l()
            )));
        }
        let keys = order.iter().map(|&j| self.keys[j].clone()).collect();
        let mut code = GossipCode::from_keys(self.m, self.q, self.c, keys, self.zero_is_tracing())?;
        code.provenance = self.provenance.clone();
        Ok(code)
    }

    /// Rows and column keys as a set system (points `1..=M`).
    pub fn set_system(&self) -> SetSystem {
        SetSystem {
            points: (1..=self.m as Point).collect(),
            blocks: self
                .keys
                .iter()
                .map(|k| k.iter().copied().collect())
                .collect(),
        }
    }
}

/// Builds the shortest c-Gossip(b, v, k+1) code of a `c-(v, k, 1)` design,
/// one column per block in block order, ascending symbol assignment.
pub fn from_design(design: &Design) -> Result<GossipCode> {
    from_design_with(design, SymbolOrder::Ascending)
}

pub fn from_design_with(design: &Design, order: SymbolOrder) -> Result<GossipCode> {
    if design.lambda() != 1 {
        return Err(Error::Parameter(format!(
            "Gossip codes need λ = 1, design has λ = {}",
            design.lambda()
        )));
    }
    let keys = match (order, design.development()) {
        (SymbolOrder::Development, Some(dev)) => dev.to_vec(),
        _ => design.blocks().to_vec(),
    };
    let code = GossipCode::from_keys(design.v(), design.k() + 1, design.t(), keys, false)?;
    Ok(code.with_provenance(design.clone()))
}

/// Length, weight and distance of a shortest c-Gossip code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CodeParams {
    pub length: u64,
    pub weight: u64,
    pub distance: u64,
}

/// Parameters of the shortest `c`-Gossip code with `M` codewords over `q`
/// symbols: `l = C(M,c)/C(q−1,c)`, `w = C(M−1,c−1)/C(q−2,c−1)` and
/// `d = l − λ̄₂` with `λ̄₂ = C(M−2,q−1)/C(M−c,q−1−c)`.
pub fn code_params(m: u64, q: u64, c: u64) -> Result<CodeParams> {
    if c == 0 || c >= q || q > m {
        return Err(Error::Parameter(format!(
            "need 0 < c < q <= M, got M = {m}, q = {q}, c = {c}"
        )));
    }
    let no_code = |e: Error| Error::NoShortestCode(e.to_string());
    let length = exact_div(binomial(m, c), binomial(q - 1, c), "length").map_err(no_code)?;
    let weight =
        exact_div(binomial(m - 1, c - 1), binomial(q - 2, c - 1), "weight").map_err(no_code)?;
    let avoid_pair = if m >= 2 {
        exact_div(binomial(m - 2, q - 1), binomial(m - c, q - 1 - c), "λ̄₂").map_err(no_code)?
    } else {
        0
    };
    Ok(CodeParams {
        length: length as u64,
        weight: weight as u64,
        distance: (length - avoid_pair.min(length)) as u64,
    })
}

/// The (q−1)-Gossip code whose keys are all (q−1)-subsets of `1..=M`, in
/// lexicographic order.
pub fn full_gossip(m: usize, q: usize) -> Result<GossipCode> {
    if q < 3 || q > m {
        return Err(Error::Parameter(format!(
            "need 3 <= q <= M, got M = {m}, q = {q}"
        )));
    }
    if binomial(m as u64, q as u64 - 1) > 1 << 20 {
        return Err(Error::Resource(format!("C({m}, {}) columns", q - 1)));
    }
    let keys = (1..=m as Point).combinations(q - 1).collect();
    GossipCode::from_keys(m, q, q - 1, keys, false)
}

/// The (q−1)-Gossip(q, q, q) code where 0 also traces: column `j` has its 0
/// at row `j + 1` and symbols `1..q−1` on the other rows in ascending order.
pub fn square_gossip(q: usize) -> Result<GossipCode> {
    if q < 3 {
        return Err(Error::Parameter(format!(
            "square codes need q >= 3, got {q}"
        )));
    }
    let keys = (1..=q as Point)
        .map(|zero| (1..=q as Point).filter(|&r| r != zero).collect())
        .collect();
    GossipCode::from_keys(q, q, q - 1, keys, true)
}

/// True when every c-subset of users is accused by exactly one column.
pub fn is_shortest(code: &GossipCode) -> bool {
    let per_column = binomial(code.q as u64 - 1, code.c as u64);
    if code.l() as u128 * per_column != binomial(code.m as u64, code.c as u64) {
        return false;
    }
    let mut seen = HashSet::new();
    code.keys.iter().all(|key| {
        key.iter()
            .copied()
            .sorted_unstable()
            .combinations(code.c)
            .all(|group| seen.insert(group))
    })
}

/// The c-subsets of users that column `column` can convict.
pub fn accusation_groups(code: &GossipCode, column: usize) -> Result<Vec<Vec<Point>>> {
    let key = code
        .keys
        .get(column)
        .ok_or_else(|| Error::Parameter(format!("column {column} out of range 0..{}", code.l())))?;
    let mut members: Vec<Point> = key.clone();
    if let Some(z) = code.zero_row(column) {
        members.push(z);
    }
    members.sort_unstable();
    Ok(members.into_iter().combinations(code.c).collect())
}

/// True when every codeword of `inner` is a prefix of some codeword of `outer`.
pub fn is_embedded(inner: &GossipCode, outer: &GossipCode) -> Result<bool> {
    if inner.q != outer.q {
        return Err(Error::Parameter(format!(
            "alphabet sizes differ: {} vs {}",
            inner.q, outer.q
        )));
    }
    Ok(rows_embedded(inner.rows(), outer))
}

/// Prefix test for an arbitrary list of words against `outer`.
pub fn rows_embedded<'a>(
    words: impl IntoIterator<Item = &'a [Symbol]>,
    outer: &GossipCode,
) -> bool {
    let prefixes: Vec<&[Symbol]> = outer.rows().collect();
    words
        .into_iter()
        .all(|w| w.len() <= outer.l() && prefixes.iter().any(|row| &row[..w.len()] == w))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    pub points: BTreeSet<Point>,
    pub blocks: Vec<BTreeSet<Point>>,
}

impl SetSystem {
    pub fn new(points: impl IntoIterator<Item = Point>, blocks: &[Vec<Point>]) -> Self {
        SetSystem {
            points: points.into_iter().collect(),
            blocks: blocks.iter().map(|b| b.iter().copied().collect()).collect(),
        }
    }

    /// `X ⊆ X'` and every block is a block of `outer`.
    pub fn is_embedded_in(&self, outer: &SetSystem) -> bool {
        let outer_blocks: HashSet<&BTreeSet<Point>> = outer.blocks.iter().collect();
        self.points.is_subset(&outer.points) && self.blocks.iter().all(|b| outer_blocks.contains(b))
    }
}

/// Set-system form of [`is_embedded`]: rows and keys of `inner` sit inside
/// those of `outer`.
pub fn is_embedded_set_system(inner: &GossipCode, outer: &GossipCode) -> Result<bool> {
    if inner.q != outer.q {
        return Err(Error::Parameter(format!(
            "alphabet sizes differ: {} vs {}",
            inner.q, outer.q
        )));
    }
    Ok(inner.set_system().is_embedded_in(&outer.set_system()))
}
