//! Plain-text code files: a header `M q c l [zero_tracing]` followed by `M`
//! rows of `l` space-separated symbols.

use std::fmt::Write as _;

use super::{GossipCode, Symbol};
use crate::designs::io::{content_lines, parse_numbers};
use crate::error::{Error, Result};

const ZERO_TRACING: &str = "zero_tracing";

pub fn save_code(code: &GossipCode) -> String {
    let mut out = format!("{} {} {} {}", code.m(), code.q(), code.c(), code.l());
    if code.zero_is_tracing() {
        out.push(' ');
        out.push_str(ZERO_TRACING);
    }
    out.push('\n');
    for row in code.rows() {
        let line: Vec<String> = row.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

pub fn load_code(text: &str) -> Result<GossipCode> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing header `M q c l [zero_tracing]`"))?;
    let mut fields: Vec<&str> = header.split_whitespace().collect();
    let zero_tracing = fields.last() == Some(&ZERO_TRACING);
    if zero_tracing {
        fields.pop();
    }
    let nums = parse_numbers::<usize>(header_line, &fields.join(" "))?;
    let [m, q, c, l] = nums[..] else {
        return Err(Error::parse(
            header_line,
            format!(
                "header needs `M q c l [zero_tracing]`, found {} numbers",
                nums.len()
            ),
        ));
    };
    let mut rows: Vec<Vec<Symbol>> = Vec::with_capacity(m);
    for (line_no, line) in lines {
        let row = parse_numbers::<Symbol>(line_no, line)?;
        if row.len() != l {
            return Err(Error::parse(
                line_no,
                format!("row has {} symbols, expected {l}", row.len()),
            ));
        }
        if let Some(s) = row.iter().find(|&&s| usize::from(s) >= q) {
            return Err(Error::parse(line_no, format!("symbol {s} outside 0..{q}")));
        }
        rows.push(row);
    }
    if rows.len() != m {
        return Err(Error::parse(
            header_line,
            format!("header declares {m} rows, file has {}", rows.len()),
        ));
    }
    GossipCode::from_matrix(q, c, &rows, zero_tracing)
}
