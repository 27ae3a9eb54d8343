//! Plain-text kernel exchange format.
//!
//! ```text
//! order 2 dim 3
//! 1 1 0.5
//! 1 3 -2
//! ```
//!
//! Indices are one-based. Blank lines and lines starting with `#` are
//! ignored. Values use the scalar's `Display`/`FromStr`, which for `f64` is
//! the shortest representation that parses back to the same bits.

use std::fmt::{Display, Write as _};
use std::str::FromStr;

use super::SymmetricKernel;
use crate::{Error, Result, Scalar};

impl<T: Scalar> SymmetricKernel<T> {
    pub fn to_text(&self) -> String {
        let mut out = format!("order {} dim {}\n", self.order(), self.dim());
        for (key, value) in self.entries() {
            for i in key {
                write!(out, "{} ", i + 1).unwrap();
            }
            writeln!(out, "{value}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self>
    where
        <T as FromStr>::Err: Display,
    {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line_no, header) = lines.next().ok_or(Error::Parse { line: 0, msg: "empty input".into() })?;
        let (order, dim) = parse_header(header).map_err(|msg| Error::Parse { line: line_no, msg })?;
        let mut kernel = SymmetricKernel::new(order, dim).map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
        let mut seen = std::collections::BTreeSet::new();

        for (line_no, line) in lines {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != order + 1 {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected {} indices and a value, got {} fields", order, fields.len()),
                });
            }
            let mut index = Vec::with_capacity(order);
            for f in &fields[..order] {
                let i: usize = f
                    .parse()
                    .map_err(|_| Error::Parse { line: line_no, msg: format!("bad index {f:?}") })?;
                if i == 0 || i > dim {
                    return Err(Error::Parse { line: line_no, msg: format!("index {i} outside 1..={dim}") });
                }
                index.push(i - 1);
            }
            let value: T = fields[order]
                .parse()
                .map_err(|e| Error::Parse { line: line_no, msg: format!("bad value {:?}: {e}", fields[order]) })?;
            index.sort_unstable();
            if !seen.insert(index.clone()) {
                return Err(Error::Parse { line: line_no, msg: format!("duplicate entry {index:?}") });
            }
            kernel.set(&index, value).map_err(|e| Error::Parse { line: line_no, msg: e.to_string() })?;
        }
        Ok(kernel)
    }
}

fn parse_header(line: &str) -> std::result::Result<(usize, usize), String> {
    let f: Vec<&str> = line.split_whitespace().collect();
    match f.as_slice() {
        ["order", q, "dim", n] => {
            let q = q.parse().map_err(|_| format!("bad order {q:?}"))?;
            let n = n.parse().map_err(|_| format!("bad dim {n:?}"))?;
            Ok((q, n))
        }
        _ => Err(format!("expected header `order q dim N`, got {line:?}")),
    }
}
