//! Plain-text design files.
//!
//! ```text
//! # comment
//! t v k lambda b
//! p1 p2 ... pk      (b lines)
//! ```

use std::fmt::Write as _;

use super::{verify_design, Design, Point};
use crate::error::{Error, Result};

/// Serializes blocks in construction order with ascending points.
pub fn save_design(design: &Design) -> String {
    let mut out = format!(
        "{} {} {} {} {}\n",
        design.t(),
        design.v(),
        design.k(),
        design.lambda(),
        design.b()
    );
    for block in design.blocks() {
        let line: Vec<String> = block.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

/// Parses a design file and, unless `skip_verify` is set, checks the design
/// property.
pub fn load_design(text: &str, skip_verify: bool) -> Result<Design> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header `t v k lambda b`"))?;
    let nums = parse_numbers::<u64>(header_line, header)?;
    let [t, v, k, lambda, b] = nums[..] else {
        return Err(Error::parse(
            header_line,
            format!(
                "header needs 5 fields `t v k lambda b`, found {}",
                nums.len()
            ),
        ));
    };
    let mut blocks = Vec::with_capacity(b as usize);
    for (line_no, line) in lines {
        let block = parse_numbers::<Point>(line_no, line)?;
        if block.len() as u64 != k {
            return Err(Error::parse(
                line_no,
                format!("block has {} points, expected {k}", block.len()),
            ));
        }
        blocks.push(block);
    }
    if blocks.len() as u64 != b {
        return Err(Error::parse(
            header_line,
            format!("header declares {b} blocks, file has {}", blocks.len()),
        ));
    }
    let design = Design::new(t as usize, v as usize, k as usize, lambda, blocks)?;
    if !skip_verify {
        verify_design(&design)?.into_result(&design)?;
    }
    Ok(design)
}

/// Non-empty, non-comment lines with their 1-based line numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_numbers<T: std::str::FromStr>(line_no: usize, line: &str) -> Result<Vec<T>> {
    line.split_whitespace()
        .map(|tok| {
            tok.parse::<T>().map_err(|_| {
                Error::parse(line_no, format!("`{tok}` is not a non-negative integer"))
            })
        })
        .collect()
}
