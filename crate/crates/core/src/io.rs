//! Instance files and search-tree export.
//!
//! # Instance format (`.kp`, version 1)
//!
//! Line-oriented text. Blank lines and lines starting with `#` are ignored.
//! Header lines come first, in any order, then `items <n>` followed by
//! exactly `n` item lines:
//!
//! ```text
//! format_version 1
//! name five-item
//! capacity 20
//! items 5
//! 9 3/2
//! 8 6/5
//! 5 7/10
//! 6 4/5
//! 7 9/10
//! ```
//!
//! Each item line is `<weight> <value>`; the weight is a positive integer
//! and the value a positive integer, fraction `num/den` or decimal. Items
//! are written in the order they were originally supplied, so reading a
//! written instance back restores both the ratio order and the permutation.
//!
//! # Trace export
//!
//! [`export_trace`] writes a Graphviz `digraph`. Each node is a 2x2 record
//! `{id | upper bound}` over `{cardinality | lower bound}`; edges carry the
//! fixings added by the branch.

use std::fmt::Write as _;

use crate::bnb::{NodeStatus, Trace, TraceNode};
use crate::error::{Error, Result};
use crate::model::{canonicalize, Instance, Item, Rational};

pub const FORMAT_VERSION: u32 = 1;
pub const INSTANCE_EXTENSION: &str = "kp";

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

pub fn parse_instance(text: &str) -> Result<Instance> {
    let mut version: Option<u32> = None;
    let mut name: Option<String> = None;
    let mut capacity: Option<u64> = None;
    let mut expected: Option<(usize, usize)> = None;
    let mut items = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if let Some((count, _)) = expected {
            if items.len() < count {
                items.push(parse_item(trimmed, line_no)?);
                continue;
            }
            return Err(parse_err(line_no, "unexpected content after the last item"));
        }
        let (key, rest) = match trimmed.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (trimmed, ""),
        };
        match key {
            "format_version" => {
                let v: u32 = rest
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("format_version: invalid number {rest:?}")))?;
                if v != FORMAT_VERSION {
                    return Err(Error::VersionUnsupported(v));
                }
                version = Some(v);
            }
            "name" => {
                // keep the name verbatim apart from the separating space
                let value = line.trim_start().strip_prefix("name").unwrap_or("");
                name = Some(value.strip_prefix(' ').unwrap_or(value).to_string());
            }
            "capacity" => {
                capacity = Some(
                    rest.parse()
                        .map_err(|_| parse_err(line_no, format!("capacity: invalid integer {rest:?}")))?,
                );
            }
            "items" => {
                let n: usize = rest
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("items: invalid count {rest:?}")))?;
                expected = Some((n, line_no));
            }
            other => return Err(parse_err(line_no, format!("unknown field {other:?}"))),
        }
    }

    let last_line = text.lines().count().max(1);
    if version.is_none() {
        return Err(parse_err(1, "missing format_version"));
    }
    let capacity = capacity.ok_or_else(|| parse_err(last_line, "missing capacity"))?;
    let (count, items_line) = expected.ok_or_else(|| parse_err(last_line, "missing items"))?;
    if items.len() != count {
        return Err(parse_err(
            items_line,
            format!("items: declared {count}, found {}", items.len()),
        ));
    }
    canonicalize(items, capacity, name.unwrap_or_default()).map_err(|e| match e {
        Error::NonPositiveInput { index } => parse_err(
            items_line + 1 + index,
            format!("item {}: weight must be >= 1 and value > 0", index + 1),
        ),
        other => other,
    })
}

fn parse_item(line: &str, line_no: usize) -> Result<Item> {
    let mut fields = line.split_whitespace();
    let (Some(w), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
        return Err(parse_err(line_no, "item: expected `<weight> <value>`"));
    };
    let weight: u64 = w
        .parse()
        .map_err(|_| parse_err(line_no, format!("item weight: invalid integer {w:?}")))?;
    let value: Rational = v
        .parse()
        .map_err(|_| parse_err(line_no, format!("item value: invalid number {v:?}")))?;
    Ok(Item::new(weight, value))
}

pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "format_version {FORMAT_VERSION}");
    if instance.name().is_empty() {
        out.push_str("name\n");
    } else {
        let _ = writeln!(out, "name {}", instance.name());
    }
    let _ = writeln!(out, "capacity {}", instance.capacity());
    let _ = writeln!(out, "items {}", instance.len());
    for item in instance.input_items() {
        let _ = writeln!(out, "{} {}", item.weight, item.value);
    }
    out
}

/// Short decimal for node labels: exact when the value has a terminating
/// expansion (at least one fractional digit), otherwise two rounded places.
pub fn display_decimal(value: Rational) -> String {
    match value.exact_decimal() {
        Some(s) if s.contains('.') => s,
        Some(s) => format!("{s}.0"),
        None => value.to_decimal(2),
    }
}

fn node_style(status: NodeStatus) -> &'static str {
    match status {
        NodeStatus::PrunedAtCreation => "dashed",
        NodeStatus::Infeasible => "dotted",
        _ => "solid",
    }
}

fn node_line(node: &TraceNode) -> String {
    let upper = match node.upper_bound {
        Some(ub) => display_decimal(ub),
        None => "infeasible".to_string(),
    };
    let lower = node.lower_bound.map(display_decimal).unwrap_or_else(|| "-".to_string());
    let mut tooltip = format!("node {}: {}", node.id, node.status.name());
    if let Some(ub) = node.upper_bound {
        let _ = write!(tooltip, "; upper bound {ub}");
    }
    if let Some(lb) = node.lower_bound {
        let _ = write!(tooltip, "; lower bound {lb}");
    }
    format!(
        "  n{id} [label=\"{{{{{id}|{upper}}}|{{{card}|{lower}}}}}\", tooltip=\"{tooltip}\", style={style}];",
        id = node.id,
        card = node.cardinality(),
        style = node_style(node.status),
    )
}

/// Graphviz rendering of a search trace, nodes in id order.
pub fn export_trace(trace: Option<&Trace>) -> Result<String> {
    let trace = trace.ok_or(Error::NoTrace)?;
    let mut out = String::new();
    out.push_str("digraph search_tree {\n");
    let _ = writeln!(out, "  label=\"{}\";", trace.strategy.display_name());
    out.push_str("  labelloc=t;\n");
    out.push_str("  node [shape=record, fontname=\"Helvetica\"];\n");
    out.push_str("  edge [fontname=\"Helvetica\", fontsize=10];\n");
    for node in &trace.nodes {
        out.push_str(&node_line(node));
        out.push('\n');
    }
    for node in &trace.nodes {
        if let Some(parent) = node.parent {
            let _ = writeln!(out, "  n{parent} -> n{} [label=\"{}\"];", node.id, node.label);
        }
    }
    out.push_str("}\n");
    Ok(out)
}
