//! Traceability schemes: each user holds `k` of `v` base keys, and a pirate
//! decoder built from a coalition's keys exposes the users it overlaps most.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combin::{binomial, exact_div, isqrt_ratio};
use crate::designs::io::{content_lines, parse_numbers};
use crate::designs::{cyclic_design, Design, Point};
use crate::error::{Error, Result};
use crate::gossip::{from_design_with, is_shortest, GossipCode, SymbolOrder};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceabilityScheme {
    k: usize,
    v: usize,
    /// `P(1), P(2), ...` in listing order.
    private_keys: Vec<Vec<Point>>,
}

impl TraceabilityScheme {
    pub fn new(k: usize, v: usize, private_keys: Vec<Vec<Point>>) -> Result<Self> {
        if k == 0 || k > v {
            return Err(Error::Parameter(format!(
                "{k} keys per user from {v} base keys"
            )));
        }
        if private_keys.is_empty() {
            return Err(Error::Structural("scheme has no users".into()));
        }
        for (i, key) in private_keys.iter().enumerate() {
            if key.len() != k {
                return Err(Error::Structural(format!(
                    "P({}) has {} keys, expected {k}",
                    i + 1,
                    key.len()
                )));
            }
            if key.iter().any(|&x| x == 0 || x as usize > v) || !key.iter().all_unique() {
                return Err(Error::Structural(format!(
                    "P({}) = {key:?} is not a set of keys in 1..={v}",
                    i + 1
                )));
            }
        }
        Ok(TraceabilityScheme { k, v, private_keys })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of users.
    pub fn b(&self) -> usize {
        self.private_keys.len()
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn private_keys(&self) -> &[Vec<Point>] {
        &self.private_keys
    }

    /// `P(user)`, users numbered from 1.
    pub fn private_key(&self, user: Point) -> Option<&[Point]> {
        self.private_keys
            .get((user as usize).checked_sub(1)?)
            .map(Vec::as_slice)
    }

    fn union_of(&self, coalition: &[Point]) -> Result<Vec<Point>> {
        let mut union = BTreeSet::new();
        for &u in coalition {
            let key = self
                .private_key(u)
                .ok_or_else(|| Error::Parameter(format!("user {u} outside 1..={}", self.b())))?;
            union.extend(key.iter().copied());
        }
        Ok(union.into_iter().collect())
    }
}

/// The key set found in a confiscated decoder.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct PirateDecoder(Vec<Point>);

impl PirateDecoder {
    pub fn new(keys: impl IntoIterator<Item = Point>, ts: &TraceabilityScheme) -> Result<Self> {
        let keys: Vec<Point> = keys.into_iter().sorted_unstable().collect();
        if keys.is_empty() {
            return Err(Error::Parameter("empty decoder".into()));
        }
        if keys.iter().any(|&x| x == 0 || x as usize > ts.v) || !keys.iter().all_unique() {
            return Err(Error::Parameter(format!(
                "decoder {keys:?} is not a set of keys in 1..={}",
                ts.v
            )));
        }
        Ok(PirateDecoder(keys))
    }

    pub fn keys(&self) -> &[Point] {
        &self.0
    }

    /// Whether every key comes from some member of `coalition`.
    pub fn is_feasible(&self, ts: &TraceabilityScheme, coalition: &[Point]) -> Result<bool> {
        let union = ts.union_of(coalition)?;
        Ok(self.0.iter().all(|x| union.binary_search(x).is_ok()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exposure {
    /// All users attaining the largest overlap, ascending.
    pub users: Vec<Point>,
    pub overlap: usize,
}

pub fn ts_trace(ts: &TraceabilityScheme, decoder: &PirateDecoder) -> Exposure {
    let overlaps: Vec<usize> = ts
        .private_keys
        .iter()
        .map(|key| {
            key.iter()
                .filter(|x| decoder.0.binary_search(x).is_ok())
                .count()
        })
        .collect();
    let overlap = overlaps.iter().copied().max().unwrap_or(0);
    let users = overlaps
        .iter()
        .positions(|&o| o == overlap)
        .map(|i| (i + 1) as Point)
        .collect();
    Exposure { users, overlap }
}

/// True when any two private keys share fewer than `c` base keys.
pub fn check_distinctness(ts: &TraceabilityScheme, c: usize) -> bool {
    ts.private_keys
        .iter()
        .tuple_combinations()
        .all(|(a, b)| a.iter().filter(|x| b.contains(x)).count() < c)
}

/// The shortest c-Gossip(b, v, k+1) code whose column keys are the private
/// keys.
pub fn ts_to_gossip(ts: &TraceabilityScheme, c: usize, order: SymbolOrder) -> Result<GossipCode> {
    if c == 0 || c > ts.k {
        return Err(Error::Parameter(format!(
            "c = {c} with {} keys per user",
            ts.k
        )));
    }
    let (v, k) = (ts.v as u64, ts.k as u64);
    let wanted = exact_div(binomial(v, c as u64), binomial(k, c as u64), "user count")
        .map_err(|e| Error::NoShortestCode(e.to_string()))?;
    if ts.b() as u128 != wanted {
        return Err(Error::NoShortestCode(format!(
            "scheme has {} users, a shortest code needs C({v},{c})/C({k},{c}) = {wanted}",
            ts.b()
        )));
    }
    if !check_distinctness(ts, c) {
        return Err(Error::Consistency(format!(
            "two private keys share {c} or more keys, so accusation groups repeat"
        )));
    }
    let design = Design::with_development(c, ts.v, ts.k, 1, ts.private_keys.clone())?;
    let code = from_design_with(&design, order)?;
    debug_assert!(is_shortest(&code));
    Ok(code)
}

/// The scheme formed by a shortest code's column keys, with its traceability
/// strength `w = ⌊√((q−2)/(c−1))⌋`.
pub fn gossip_to_ts(code: &GossipCode) -> Result<(u64, TraceabilityScheme)> {
    if code.c() < 2 {
        return Err(Error::Parameter(
            "traceability strength needs c >= 2".into(),
        ));
    }
    if !is_shortest(code) {
        return Err(Error::NoShortestCode("code is not shortest".into()));
    }
    let w = isqrt_ratio(code.q() as u64 - 2, code.c() as u64 - 1);
    let ts = TraceabilityScheme::new(code.q() - 1, code.m(), code.keys().to_vec())?;
    Ok((w, ts))
}

/// `P(i) = base + (i − 1) mod v`, residues written `1..=v`. Base entries are
/// reduced mod `v` first.
pub fn ts_from_cyclic(base: &[u64], v: u64) -> Result<TraceabilityScheme> {
    if v == 0 {
        return Err(Error::Parameter("modulus must be positive".into()));
    }
    let reduced: Vec<Point> = base
        .iter()
        .map(|&x| ((x + v - 1) % v + 1) as Point)
        .collect();
    if !reduced.iter().all_unique() {
        return Err(Error::Structural(format!(
            "base {base:?} repeats a residue mod {v}"
        )));
    }
    let design = cyclic_design(&reduced, v)?;
    let keys = design
        .development()
        .expect("cyclic designs record their development")
        .to_vec();
    TraceabilityScheme::new(base.len(), v as usize, keys)
}

/// `k` keys drawn uniformly from the coalition's union.
pub fn random_decoder(
    ts: &TraceabilityScheme,
    coalition: &[Point],
    seed: u64,
) -> Result<PirateDecoder> {
    let union = ts.union_of(coalition)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let keys = union.choose_multiple(&mut rng, ts.k).copied();
    PirateDecoder::new(keys, ts)
}

/// `k` keys from the coalition's union, each step adding the key that keeps
/// the largest single-member overlap smallest (lowest key on ties).
pub fn greedy_decoder(ts: &TraceabilityScheme, coalition: &[Point]) -> Result<PirateDecoder> {
    let mut pool = ts.union_of(coalition)?;
    let members: Vec<&[Point]> = coalition
        .iter()
        .map(|&u| ts.private_key(u).expect("validated by union_of"))
        .collect();
    let mut overlap = vec![0usize; members.len()];
    let mut chosen = Vec::with_capacity(ts.k);
    while chosen.len() < ts.k && !pool.is_empty() {
        let (idx, _) = pool
            .iter()
            .enumerate()
            .min_by_key(|&(_, x)| {
                members
                    .iter()
                    .zip(&overlap)
                    .map(|(key, &o)| o + usize::from(key.contains(x)))
                    .max()
            })
            .expect("pool is non-empty");
        let x = pool.remove(idx);
        for (key, o) in members.iter().zip(overlap.iter_mut()) {
            *o += usize::from(key.contains(&x));
        }
        chosen.push(x);
    }
    PirateDecoder::new(chosen, ts)
}

/// Scheme file: `k b v`, then `b` lines of `k` keys in listing order.
pub fn save_scheme(ts: &TraceabilityScheme) -> String {
    let mut out = format!("{} {} {}\n", ts.k, ts.b(), ts.v);
    for key in &ts.private_keys {
        let _ = writeln!(out, "{}", key.iter().join(" "));
    }
    out
}

pub fn load_scheme(text: &str) -> Result<TraceabilityScheme> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header `k b v`"))?;
    let nums = parse_numbers::<usize>(header_line, header)?;
    let [k, b, v] = nums[..] else {
        return Err(Error::parse(header_line, "header needs 3 fields `k b v`"));
    };
    let mut keys = Vec::with_capacity(b);
    for (line_no, line) in lines {
        let key = parse_numbers::<Point>(line_no, line)?;
        if key.len() != k {
            return Err(Error::parse(
                line_no,
                format!("key has {} entries, expected {k}", key.len()),
            ));
        }
        keys.push(key);
    }
    if keys.len() != b {
        return Err(Error::parse(
            header_line,
            format!("header declares {b} users, file has {}", keys.len()),
        ));
    }
    TraceabilityScheme::new(k, v, keys)
}
