//! Line-oriented text formats for instances and solutions.
//!
//! Instance files:
//!
//! ```text
//! carp 1
//! vertices N depot D capacity W
//! # comment
//! u v cost demand
//! ```
//!
//! Solution files:
//!
//! ```text
//! solution 1
//! route
//! edge-id from to served
//! ```
//!
//! Vertex indices and edge ids are 1-based in files (an edge id is the
//! 1-based position of its edge line in the instance file); `served` is 0
//! or 1. Everything from `#` to the end of a line is a comment. Files are
//! UTF-8 with LF line endings and decimal integers, so writes are
//! byte-reproducible.

use std::collections::HashMap;

use thiserror::Error;

use crate::instance::{Edge, Graph, Instance, InstanceError, Vertex};
use crate::solution::{Route, Solution, Step};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `{expected}` header")]
    MissingHeader { expected: &'static str },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax {
        line,
        message: message.into(),
    }
}

/// Significant lines with their 1-based line numbers, comments stripped.
fn significant_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            None
        } else {
            Some((i + 1, content))
        }
    })
}

fn parse_field<T: std::str::FromStr>(
    token: &str,
    line: usize,
    what: &str,
) -> Result<T, FormatError> {
    token
        .parse()
        .map_err(|_| syntax(line, format!("invalid {what} `{token}`")))
}

/// Parses an instance file. Vertex indices are converted to 0-based.
pub fn parse_instance(text: &str) -> Result<Instance, FormatError> {
    let mut lines = significant_lines(text);

    let (line, header) = lines
        .next()
        .ok_or(FormatError::MissingHeader { expected: "carp 1" })?;
    if header != "carp 1" {
        return Err(syntax(line, format!("expected `carp 1`, found `{header}`")));
    }

    let (line, decl) = lines.next().ok_or(FormatError::MissingHeader {
        expected: "vertices N depot D capacity W",
    })?;
    let tokens: Vec<&str> = decl.split_whitespace().collect();
    if tokens.len() != 6
        || tokens[0] != "vertices"
        || tokens[2] != "depot"
        || tokens[4] != "capacity"
    {
        return Err(syntax(
            line,
            "expected `vertices N depot D capacity W`".to_string(),
        ));
    }
    let vertex_count: usize = parse_field(tokens[1], line, "vertex count")?;
    let depot_1: usize = parse_field(tokens[3], line, "depot")?;
    let capacity: u64 = parse_field(tokens[5], line, "capacity")?;
    if vertex_count == 0 {
        return Err(syntax(line, "vertex count must be positive"));
    }
    if depot_1 == 0 || depot_1 > vertex_count {
        return Err(syntax(line, format!("depot {depot_1} out of range")));
    }

    let mut edges = Vec::new();
    let mut seen: HashMap<(Vertex, Vertex), usize> = HashMap::new();
    for (line, content) in lines {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 4 {
            return Err(syntax(line, "expected `u v cost demand`"));
        }
        let u1: usize = parse_field(tokens[0], line, "vertex")?;
        let v1: usize = parse_field(tokens[1], line, "vertex")?;
        let cost: u64 = parse_field(tokens[2], line, "cost")?;
        let demand: u64 = parse_field(tokens[3], line, "demand")?;
        if u1 == 0 || u1 > vertex_count || v1 == 0 || v1 > vertex_count {
            return Err(syntax(line, format!("vertex out of range in `{content}`")));
        }
        if u1 == v1 {
            return Err(syntax(line, format!("self-loop at vertex {u1}")));
        }
        let (u, v) = (u1 - 1, v1 - 1);
        let key = (u.min(v), u.max(v));
        if let Some(first) = seen.insert(key, line) {
            return Err(syntax(
                line,
                format!("duplicate of the edge on line {first}"),
            ));
        }
        if demand > capacity {
            return Err(syntax(line, "edge demand exceeds capacity"));
        }
        edges.push(Edge { u, v, cost, demand });
    }

    let graph = Graph::new(vertex_count, edges)?;
    Ok(Instance::new(graph, depot_1 - 1, capacity)?)
}

/// Writes an instance in the canonical form; `parse_instance` inverts it.
pub fn write_instance(instance: &Instance) -> String {
    let mut out = String::from("carp 1\n");
    out.push_str(&format!(
        "vertices {} depot {} capacity {}\n",
        instance.graph.vertex_count(),
        instance.depot + 1,
        instance.capacity
    ));
    for e in instance.graph.edges() {
        out.push_str(&format!(
            "{} {} {} {}\n",
            e.u + 1,
            e.v + 1,
            e.cost,
            e.demand
        ));
    }
    out
}

/// Parses a solution file against its instance. Edge ids and vertices are
/// checked for range; feasibility is left to the validator so tampered
/// files can be loaded and then judged.
pub fn parse_solution(text: &str, instance: &Instance) -> Result<Solution, FormatError> {
    let mut lines = significant_lines(text);
    let (line, header) = lines.next().ok_or(FormatError::MissingHeader {
        expected: "solution 1",
    })?;
    if header != "solution 1" {
        return Err(syntax(
            line,
            format!("expected `solution 1`, found `{header}`"),
        ));
    }

    let edge_count = instance.graph.edges().len();
    let vertex_count = instance.graph.vertex_count();
    let mut routes: Vec<Route> = Vec::new();
    for (line, content) in lines {
        if content == "route" {
            routes.push(Route::default());
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 4 {
            return Err(syntax(line, "expected `route` or `edge-id from to served`"));
        }
        let route = routes
            .last_mut()
            .ok_or_else(|| syntax(line, "step before any `route` line"))?;
        let edge_1: usize = parse_field(tokens[0], line, "edge id")?;
        let from_1: usize = parse_field(tokens[1], line, "vertex")?;
        let to_1: usize = parse_field(tokens[2], line, "vertex")?;
        let served_raw: u8 = parse_field(tokens[3], line, "served flag")?;
        if edge_1 == 0 || edge_1 > edge_count {
            return Err(syntax(line, format!("unknown edge {edge_1}")));
        }
        if from_1 == 0 || from_1 > vertex_count || to_1 == 0 || to_1 > vertex_count {
            return Err(syntax(line, format!("vertex out of range in `{content}`")));
        }
        let served = match served_raw {
            0 => false,
            1 => true,
            other => {
                return Err(syntax(
                    line,
                    format!("served flag must be 0 or 1, got {other}"),
                ))
            }
        };
        route.steps.push(Step {
            edge: edge_1 - 1,
            from: from_1 - 1,
            to: to_1 - 1,
            served,
        });
    }
    Ok(Solution::new(routes))
}

/// Writes a solution in the canonical form; `parse_solution` inverts it.
pub fn write_solution(solution: &Solution, instance: &Instance) -> String {
    debug_assert!(solution
        .routes
        .iter()
        .flat_map(|r| &r.steps)
        .all(|s| s.edge < instance.graph.edges().len()));
    let mut out = String::from("solution 1\n");
    for route in &solution.routes {
        out.push_str("route\n");
        for s in &route.steps {
            out.push_str(&format!(
                "{} {} {} {}\n",
                s.edge + 1,
                s.from + 1,
                s.to + 1,
                u8::from(s.served)
            ));
        }
    }
    out
}
