//! Plain-text formats.
//!
//! Poset files:
//!
//! ```text
//! # a 4-crown with one midpoint
//! points 5
//! label 0 a
//! label 4 m
//! edge 0 4
//! edge 4 2
//! ```
//!
//! `edge x y` means `x < y`; any acyclic relation is accepted and closed
//! transitively. Retraction witnesses are `map <point> -> <point>` lines
//! followed by a `verified: true|false` trailer.

use std::fmt::Write as _;

use thiserror::Error;

use crate::poset::{Poset, PosetError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

fn parse_id(tok: Option<&str>, line: usize, n: usize) -> Result<usize, ParseError> {
    let tok = tok.ok_or_else(|| err(line, "missing point id"))?;
    let id: usize = tok
        .parse()
        .map_err(|_| err(line, format!("`{tok}` is not a point id")))?;
    if id >= n {
        return Err(err(
            line,
            format!("point id {id} out of range (points {n})"),
        ));
    }
    Ok(id)
}

pub fn parse_poset(text: &str) -> Result<Poset, ParseError> {
    let mut n: Option<(usize, usize)> = None;
    let mut labels: Vec<Option<String>> = Vec::new();
    let mut edges = Vec::new();
    let mut last_edge_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        let mut toks = content.split_whitespace();
        let keyword = toks.next().unwrap_or_default();
        match keyword {
            "points" => {
                if n.is_some() {
                    return Err(err(line, "duplicate `points` line"));
                }
                let tok = toks
                    .next()
                    .ok_or_else(|| err(line, "missing point count"))?;
                let count: usize = tok
                    .parse()
                    .map_err(|_| err(line, format!("`{tok}` is not a point count")))?;
                if count > crate::pointset::MAX_POINTS {
                    return Err(err(line, PosetError::TooLarge(count).to_string()));
                }
                n = Some((count, line));
                labels = vec![None; count];
            }
            "label" | "edge" => {
                let (count, _) = n.ok_or_else(|| err(line, "`points` must come first"))?;
                let x = parse_id(toks.next(), line, count)?;
                if keyword == "label" {
                    let name = toks.next().ok_or_else(|| err(line, "missing label name"))?;
                    if name.parse::<usize>().is_ok() {
                        return Err(err(line, format!("label `{name}` must not be numeric")));
                    }
                    if let Some(prev) = labels.iter().position(|l| l.as_deref() == Some(name)) {
                        if prev != x {
                            return Err(err(
                                line,
                                format!("label `{name}` already used by point {prev}"),
                            ));
                        }
                    }
                    labels[x] = Some(name.to_string());
                } else {
                    let y = parse_id(toks.next(), line, count)?;
                    edges.push((x, y));
                    last_edge_line = line;
                }
            }
            other => return Err(err(line, format!("unknown keyword `{other}`"))),
        }
        if let Some(extra) = toks.next() {
            return Err(err(line, format!("unexpected token `{extra}`")));
        }
    }
    let (count, _) = n.ok_or_else(|| err(1, "missing `points` line"))?;
    let poset = Poset::from_relation(count, &edges).map_err(|e| {
        let line = match e {
            PosetError::SelfLoop(x) => text
                .lines()
                .position(|l| {
                    let t: Vec<_> = l.split_whitespace().collect();
                    t.len() == 3 && t[0] == "edge" && t[1] == t[2] && t[1] == x.to_string()
                })
                .map_or(last_edge_line, |i| i + 1),
            _ => last_edge_line,
        };
        err(line, e.to_string())
    })?;
    Ok(poset.with_labels(labels))
}

/// Renders a poset in the file format, listing covering pairs only.
pub fn write_poset(p: &Poset) -> String {
    let mut out = String::new();
    writeln!(out, "points {}", p.len()).unwrap();
    for x in 0..p.len() {
        if let Some(name) = p.label(x) {
            writeln!(out, "label {x} {name}").unwrap();
        }
    }
    for (x, y) in p.covers() {
        writeln!(out, "edge {x} {y}").unwrap();
    }
    out
}

/// Renders a self-map of `p` as a witness file.
pub fn write_witness(p: &Poset, map: &[usize], verified: bool) -> String {
    let mut out = String::new();
    for (x, &y) in map.iter().enumerate() {
        writeln!(out, "map {} -> {}", p.name(x), p.name(y)).unwrap();
    }
    writeln!(out, "verified: {verified}").unwrap();
    out
}

/// Parses a witness file back into a total self-map of `p` and its trailer flag.
pub fn parse_witness(p: &Poset, text: &str) -> Result<(Vec<usize>, bool), ParseError> {
    let mut map = vec![None; p.len()];
    let mut verified = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('#') {
            continue;
        }
        if let Some(flag) = content.strip_prefix("verified:") {
            verified = Some(match flag.trim() {
                "true" => true,
                "false" => false,
                other => return Err(err(line, format!("bad verified flag `{other}`"))),
            });
            continue;
        }
        let rest = content
            .strip_prefix("map ")
            .ok_or_else(|| err(line, "expected `map <point> -> <point>`"))?;
        let (src, dst) = rest
            .split_once("->")
            .ok_or_else(|| err(line, "expected `->`"))?;
        let lookup = |name: &str| {
            p.lookup(name.trim())
                .ok_or_else(|| err(line, format!("unknown point `{}`", name.trim())))
        };
        let (x, y) = (lookup(src)?, lookup(dst)?);
        if map[x].replace(y).is_some() {
            return Err(err(line, format!("point `{}` mapped twice", src.trim())));
        }
    }
    let verified =
        verified.ok_or_else(|| err(text.lines().count().max(1), "missing `verified:` trailer"))?;
    let map = map
        .into_iter()
        .enumerate()
        .map(|(x, y)| y.ok_or_else(|| err(1, format!("point `{}` not mapped", p.name(x)))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok((map, verified))
}
