//! t-(v, k, λ) set systems.
//!
//! Points are the integers `1..=v`. A [`Design`] stores its blocks sorted;
//! constructions that develop blocks in a meaningful order (cyclic
//! development) additionally keep that order so symbol assignment can follow
//! it later.
//!
//! [`Design`] only enforces the structural invariants (block size, distinct
//! in-range points). Whether the t-subset condition holds is answered by
//! [`verify_design`], which counts every t-subset exactly once.

mod construct;
pub(crate) mod io;

pub use construct::{cyclic_design, embed_sts, inversive_plane, projective_plane, steiner_triple};
pub use io::{load_design, save_design};

use itertools::Itertools;
use serde::Serialize;

use crate::combin::{binomial, colex_rank, exact_div};
use crate::error::{Error, Result};

pub type Point = u32;

/// Largest point count accepted by constructions and the verifier.
pub const MAX_POINTS: usize = 512;

/// Largest number of t-subsets the verifier will tabulate.
pub const MAX_SUBSETS: u128 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Design {
    t: usize,
    v: usize,
    k: usize,
    lambda: u64,
    blocks: Vec<Vec<Point>>,
    development: Option<Vec<Vec<Point>>>,
}

impl Design {
    /// Builds a set system claiming the parameters `t-(v, k, λ)`. Only the
    /// structure is checked here.
    pub fn new(t: usize, v: usize, k: usize, lambda: u64, blocks: Vec<Vec<Point>>) -> Result<Self> {
        check_params(t, v, k)?;
        let blocks = blocks
            .into_iter()
            .enumerate()
            .map(|(i, b)| normalize_block(i, b, v, k))
            .collect::<Result<Vec<_>>>()?;
        if blocks.is_empty() {
            return Err(Error::Structural("design has no blocks".into()));
        }
        Ok(Design {
            t,
            v,
            k,
            lambda,
            blocks,
            development: None,
        })
    }

    /// Like [`Design::new`] but remembers the order in which each block's
    /// points were generated.
    pub fn with_development(
        t: usize,
        v: usize,
        k: usize,
        lambda: u64,
        developed: Vec<Vec<Point>>,
    ) -> Result<Self> {
        let mut design = Design::new(t, v, k, lambda, developed.clone())?;
        design.development = Some(developed);
        Ok(design)
    }

    /// Re-labels the claimed strength and index without touching the blocks.
    pub fn with_params(mut self, t: usize, lambda: u64) -> Result<Self> {
        check_params(t, self.v, self.k)?;
        self.t = t;
        self.lambda = lambda;
        Ok(self)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> u64 {
        self.lambda
    }

    pub fn b(&self) -> usize {
        self.blocks.len()
    }

    /// Blocks in construction order, points ascending.
    pub fn blocks(&self) -> &[Vec<Point>] {
        &self.blocks
    }

    /// Blocks with points in generation order, when the construction has one.
    pub fn development(&self) -> Option<&[Vec<Point>]> {
        self.development.as_deref()
    }

    /// Number of blocks forced by the design property, if integral.
    pub fn forced_b(&self) -> Option<u128> {
        let num = u128::from(self.lambda) * binomial(self.v as u64, self.t as u64);
        let den = binomial(self.k as u64, self.t as u64);
        (den != 0 && num.is_multiple_of(den)).then(|| num / den)
    }
}

fn check_params(t: usize, v: usize, k: usize) -> Result<()> {
    if v == 0 || v > MAX_POINTS {
        return Err(Error::Resource(format!(
            "point count {v} outside 1..={MAX_POINTS}"
        )));
    }
    if k == 0 || k > v {
        return Err(Error::Parameter(format!("block size {k} with {v} points")));
    }
    if t == 0 || t > k {
        return Err(Error::Parameter(format!(
            "strength {t} with block size {k}"
        )));
    }
    Ok(())
}

fn normalize_block(index: usize, mut block: Vec<Point>, v: usize, k: usize) -> Result<Vec<Point>> {
    if block.len() != k {
        return Err(Error::Structural(format!(
            "block {} has {} points, expected {k}",
            index + 1,
            block.len()
        )));
    }
    if let Some(&p) = block.iter().find(|&&p| p == 0 || p as usize > v) {
        return Err(Error::Structural(format!(
            "block {} contains point {p} outside 1..={v}",
            index + 1
        )));
    }
    block.sort_unstable();
    if let Some(w) = block.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Structural(format!(
            "block {} repeats point {}",
            index + 1,
            w[0]
        )));
    }
    Ok(block)
}

/// Outcome of an exhaustive t-subset count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesignReport {
    pub valid: bool,
    /// Lexicographically first t-subset whose count differs from λ.
    pub witness: Option<Vec<Point>>,
    pub witness_count: Option<u64>,
    pub b: usize,
    pub forced_b: Option<u128>,
}

impl DesignReport {
    pub fn into_result(self, design: &Design) -> Result<Self> {
        match (&self.witness, self.witness_count) {
            (Some(w), Some(count)) => Err(Error::NotADesign {
                t: design.t,
                lambda: design.lambda,
                witness: w.clone(),
                count,
            }),
            _ => Ok(self),
        }
    }
}

/// Counts every t-subset of every block and compares with λ.
pub fn verify_design(design: &Design) -> Result<DesignReport> {
    let total = binomial(design.v as u64, design.t as u64);
    if total > MAX_SUBSETS {
        return Err(Error::Resource(format!(
            "{total} {}-subsets exceed the verifier ceiling",
            design.t
        )));
    }
    let mut counts = vec![0u32; total as usize];
    for block in &design.blocks {
        for sub in block.iter().copied().combinations(design.t) {
            counts[colex_rank(&sub) as usize] += 1;
        }
    }
    let witness = (1..=design.v as Point)
        .combinations(design.t)
        .find(|sub| u64::from(counts[colex_rank(sub) as usize]) != design.lambda);
    let witness_count = witness
        .as_ref()
        .map(|w| u64::from(counts[colex_rank(w) as usize]));
    Ok(DesignReport {
        valid: witness.is_none(),
        witness,
        witness_count,
        b: design.b(),
        forced_b: design.forced_b(),
    })
}

/// λ_s: blocks containing a fixed s-subset, `λ·C(v−s, t−s)/C(k−s, t−s)`.
pub fn lambda_s(design: &Design, s: usize) -> Result<u64> {
    if s > design.t {
        return Err(Error::Parameter(format!(
            "s = {s} exceeds strength t = {}",
            design.t
        )));
    }
    let (v, k, t) = (design.v as u64, design.k as u64, design.t as u64);
    let s = s as u64;
    let num = u128::from(design.lambda) * binomial(v - s, t - s);
    exact_div(num, binomial(k - s, t - s), "lambda_s").map(|x| x as u64)
}

/// λ̄_s: blocks disjoint from a fixed s-subset, `λ·C(v−s, k)/C(v−t, k−t)`.
pub fn lambda_bar_s(design: &Design, s: usize) -> Result<u64> {
    if s > design.t {
        return Err(Error::Parameter(format!(
            "s = {s} exceeds strength t = {}",
            design.t
        )));
    }
    let (v, k, t) = (design.v as u64, design.k as u64, design.t as u64);
    let num = u128::from(design.lambda) * binomial(v - s as u64, k);
    exact_div(num, binomial(v - t, k - t), "lambda_bar_s").map(|x| x as u64)
}

fn check_subset(design: &Design, subset: &[Point]) -> Result<()> {
    if subset.iter().any(|&p| p == 0 || p as usize > design.v) || !subset.iter().all_unique() {
        return Err(Error::Parameter(format!(
            "{subset:?} is not a subset of 1..={}",
            design.v
        )));
    }
    Ok(())
}

/// Counts blocks containing `subset` and checks the count against [`lambda_s`].
pub fn lambda_s_checked(design: &Design, subset: &[Point]) -> Result<u64> {
    check_subset(design, subset)?;
    let expected = lambda_s(design, subset.len())?;
    let counted = design
        .blocks
        .iter()
        .filter(|b| subset.iter().all(|p| b.binary_search(p).is_ok()))
        .count() as u64;
    if counted != expected {
        return Err(Error::Consistency(format!(
            "{counted} blocks contain {subset:?}, formula gives {expected}"
        )));
    }
    Ok(counted)
}

/// Counts blocks disjoint from `subset` and checks the count against [`lambda_bar_s`].
pub fn lambda_bar_s_checked(design: &Design, subset: &[Point]) -> Result<u64> {
    check_subset(design, subset)?;
    let expected = lambda_bar_s(design, subset.len())?;
    let counted = design
        .blocks
        .iter()
        .filter(|b| subset.iter().all(|p| b.binary_search(p).is_err()))
        .count() as u64;
    if counted != expected {
        return Err(Error::Consistency(format!(
            "{counted} blocks avoid {subset:?}, formula gives {expected}"
        )));
    }
    Ok(counted)
}
