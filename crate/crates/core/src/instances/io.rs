//! Plain-text instance formats. `#` starts a comment line; blank lines are
//! skipped; ids are 0-indexed.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::objectives::PenaltyCurve;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeList {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub weights: Option<Vec<f64>>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn parse_err(path: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.into(),
        line,
        message: message.into(),
    }
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn field<T: FromStr>(path: &str, line: usize, raw: &str, what: &str) -> Result<T> {
    raw.trim()
        .parse()
        .map_err(|_| parse_err(path, line, format!("bad {what} {raw:?}")))
}

fn nonneg(path: &str, line: usize, v: f64, what: &str) -> Result<f64> {
    if !(v.is_finite() && v >= 0.0) {
        return Err(parse_err(path, line, format!("{what} must be finite and >= 0, got {v}")));
    }
    Ok(v)
}

fn looks_like_header(line: &str) -> bool {
    line.split(',')
        .next()
        .is_some_and(|f| f.trim().parse::<f64>().is_err())
}

/// Edge list: one `u v [w]` per line. Lines without a weight count as 1 when
/// any line carries one. `n` is one past the largest id, or the value of a
/// `# n = N` comment when that is larger.
pub fn parse_edge_list(text: &str, path: &str) -> Result<EdgeList> {
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    let mut weighted = false;
    let mut n = text
        .lines()
        .filter_map(|l| l.trim().strip_prefix('#')?.trim().strip_prefix("n =")?.trim().parse().ok())
        .max()
        .unwrap_or(0);
    for (line, l) in data_lines(text) {
        let parts: Vec<&str> = l.split_whitespace().collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(parse_err(path, line, "expected `u v [w]`"));
        }
        let u: usize = field(path, line, parts[0], "vertex")?;
        let v: usize = field(path, line, parts[1], "vertex")?;
        if u == v {
            return Err(parse_err(path, line, format!("self-loop at {u}")));
        }
        let w = match parts.get(2) {
            Some(raw) => {
                weighted = true;
                nonneg(path, line, field(path, line, raw, "weight")?, "weight")?
            }
            None => 1.0,
        };
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v));
        weights.push(w);
    }
    Ok(EdgeList {
        n,
        edges,
        weights: weighted.then_some(weights),
    })
}

pub fn load_edge_list(path: impl AsRef<Path>) -> Result<EdgeList> {
    let path = path.as_ref();
    parse_edge_list(&read(path)?, &path.display().to_string())
}

pub fn format_edge_list(g: &EdgeList) -> String {
    let mut out = format!("# n = {}\n", g.n);
    for (i, &(u, v)) in g.edges.iter().enumerate() {
        match &g.weights {
            Some(w) => writeln!(out, "{u} {v} {}", w[i]),
            None => writeln!(out, "{u} {v}"),
        }
        .expect("write to string");
    }
    out
}

/// Coverage list: `elem: item item ...`. Elements missing from the file
/// cover nothing. Returns `(universe, covers)` with the universe one past
/// the largest item.
pub fn parse_coverage_list(text: &str, path: &str) -> Result<(usize, Vec<Vec<usize>>)> {
    let mut covers: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<bool> = Vec::new();
    let mut universe = 0;
    for (line, l) in data_lines(text) {
        let (head, tail) = l
            .split_once(':')
            .ok_or_else(|| parse_err(path, line, "expected `elem: item item ...`"))?;
        let e: usize = field(path, line, head, "element")?;
        if e >= covers.len() {
            covers.resize(e + 1, Vec::new());
            seen.resize(e + 1, false);
        }
        if std::mem::replace(&mut seen[e], true) {
            return Err(parse_err(path, line, format!("element {e} listed twice")));
        }
        let mut items = tail
            .split_whitespace()
            .map(|raw| field::<usize>(path, line, raw, "item"))
            .collect::<Result<Vec<_>>>()?;
        items.sort_unstable();
        items.dedup();
        if let Some(&last) = items.last() {
            universe = universe.max(last + 1);
        }
        covers[e] = items;
    }
    Ok((universe, covers))
}

pub fn load_coverage_list(path: impl AsRef<Path>) -> Result<(usize, Vec<Vec<usize>>)> {
    let path = path.as_ref();
    parse_coverage_list(&read(path)?, &path.display().to_string())
}

pub fn format_coverage_list(covers: &[Vec<usize>]) -> String {
    let mut out = String::new();
    for (e, items) in covers.iter().enumerate() {
        let joined: Vec<String> = items.iter().map(|i| i.to_string()).collect();
        writeln!(out, "{e}: {}", joined.join(" ")).expect("write to string");
    }
    out
}

/// Dense non-negative matrix, one comma-separated row per line. Must be
/// rectangular with at least one row.
pub fn parse_similarity_csv(text: &str, path: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, l) in data_lines(text) {
        let row = l
            .split(',')
            .map(|raw| field::<f64>(path, line, raw, "entry").and_then(|v| nonneg(path, line, v, "entry")))
            .collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_err(
                    path,
                    line,
                    format!("row has {} entries, expected {}", row.len(), first.len()),
                ));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err(path, 0, "similarity matrix has no rows"));
    }
    Ok(rows)
}

pub fn load_similarity_csv(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    let path = path.as_ref();
    parse_similarity_csv(&read(path)?, &path.display().to_string())
}

pub fn format_similarity_csv(sim: &[Vec<f64>]) -> String {
    let mut out = String::new();
    for row in sim {
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", cells.join(",")).expect("write to string");
    }
    out
}

/// Two-column `key,value` rows, optional header line. Keys must be exactly
/// `0..len` in any order.
fn parse_indexed_csv(text: &str, path: &str, value_name: &str) -> Result<Vec<f64>> {
    let mut values: Vec<Option<f64>> = Vec::new();
    let mut last_line = 0;
    for (i, (line, l)) in data_lines(text).enumerate() {
        last_line = line;
        if i == 0 && looks_like_header(l) {
            continue;
        }
        let parts: Vec<&str> = l.split(',').collect();
        if parts.len() != 2 {
            return Err(parse_err(path, line, format!("expected `id,{value_name}`")));
        }
        let id: usize = field(path, line, parts[0], "id")?;
        let v: f64 = field(path, line, parts[1], value_name)?;
        if !v.is_finite() {
            return Err(parse_err(path, line, format!("{value_name} must be finite")));
        }
        if id >= values.len() {
            values.resize(id + 1, None);
        }
        if values[id].replace(v).is_some() {
            return Err(parse_err(path, line, format!("id {id} listed twice")));
        }
    }
    values
        .into_iter()
        .enumerate()
        .map(|(id, v)| v.ok_or_else(|| parse_err(path, last_line, format!("id {id} missing"))))
        .collect()
}

/// Costs file: `element,cost` rows; every cost must be `> 0`.
pub fn parse_costs_csv(text: &str, path: &str) -> Result<Vec<f64>> {
    let costs = parse_indexed_csv(text, path, "cost")?;
    if let Some(e) = costs.iter().position(|&c| c <= 0.0) {
        return Err(parse_err(path, 0, format!("cost of element {e} must be > 0")));
    }
    Ok(costs)
}

pub fn load_costs_csv(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    parse_costs_csv(&read(path)?, &path.display().to_string())
}

pub fn format_costs_csv(costs: &[f64]) -> String {
    let mut out = String::from("element,cost\n");
    for (e, c) in costs.iter().enumerate() {
        writeln!(out, "{e},{c}").expect("write to string");
    }
    out
}

/// Penalty file: `size,theta` rows covering sizes `0..=n`.
pub fn parse_penalty_csv(text: &str, path: &str) -> Result<PenaltyCurve> {
    let theta = parse_indexed_csv(text, path, "theta")?;
    PenaltyCurve::new(theta).map_err(|e| parse_err(path, 0, e.to_string()))
}

pub fn load_penalty_csv(path: impl AsRef<Path>) -> Result<PenaltyCurve> {
    let path = path.as_ref();
    parse_penalty_csv(&read(path)?, &path.display().to_string())
}

pub fn format_penalty_csv(curve: &PenaltyCurve) -> String {
    let mut out = String::from("size,theta\n");
    for (s, t) in curve.values().iter().enumerate() {
        writeln!(out, "{s},{t}").expect("write to string");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_of(err: Error) -> usize {
        match err {
            Error::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn edge_list_basics() {
        let g = parse_edge_list("# header\n\n0 1\n1 2 2.5\n", "g").unwrap();
        assert_eq!(g.n, 3);
        assert_eq!(g.edges, vec![(0, 1), (1, 2)]);
        assert_eq!(g.weights, Some(vec![1.0, 2.5]));
        let empty = parse_edge_list("# only comments\n# here\n", "g").unwrap();
        assert_eq!(empty.n, 0);
        assert!(empty.edges.is_empty());
        assert_eq!(line_of(parse_edge_list("0 1\n0 x\n", "g").unwrap_err()), 2);
        assert_eq!(line_of(parse_edge_list("0 1\n\n3 3\n", "g").unwrap_err()), 3);
        assert_eq!(line_of(parse_edge_list("0 1 -1\n", "g").unwrap_err()), 1);
    }

    #[test]
    fn edge_list_round_trip() {
        let g = EdgeList {
            n: 4,
            edges: vec![(0, 3), (1, 2)],
            weights: Some(vec![0.1, 7.0]),
        };
        assert_eq!(parse_edge_list(&format_edge_list(&g), "g").unwrap(), g);
        let plain = EdgeList {
            n: 3,
            edges: vec![(0, 2)],
            weights: None,
        };
        assert_eq!(parse_edge_list(&format_edge_list(&plain), "g").unwrap(), plain);
        // isolated trailing vertices survive through the header
        let sparse = EdgeList {
            n: 6,
            edges: vec![(0, 1)],
            weights: None,
        };
        assert_eq!(parse_edge_list(&format_edge_list(&sparse), "g").unwrap(), sparse);
    }

    #[test]
    fn coverage_list_round_trip() {
        let (m, covers) = parse_coverage_list("0: 1 2\n2: 5\n", "c").unwrap();
        assert_eq!(m, 6);
        assert_eq!(covers, vec![vec![1, 2], vec![], vec![5]]);
        let text = format_coverage_list(&covers);
        assert_eq!(parse_coverage_list(&text, "c").unwrap(), (m, covers));
        assert_eq!(line_of(parse_coverage_list("0: 1\n0: 2\n", "c").unwrap_err()), 2);
        assert_eq!(line_of(parse_coverage_list("0 1\n", "c").unwrap_err()), 1);
    }

    #[test]
    fn similarity_csv_rules() {
        let sim = parse_similarity_csv("1,0.5\n0.25,0\n", "s").unwrap();
        assert_eq!(sim, vec![vec![1.0, 0.5], vec![0.25, 0.0]]);
        assert_eq!(parse_similarity_csv(&format_similarity_csv(&sim), "s").unwrap(), sim);
        assert!(parse_similarity_csv("", "s").is_err());
        assert_eq!(line_of(parse_similarity_csv("1,2\n3\n", "s").unwrap_err()), 2);
        assert_eq!(line_of(parse_similarity_csv("1,-2\n", "s").unwrap_err()), 1);
    }

    #[test]
    fn costs_csv_rules() {
        let costs = parse_costs_csv("element,cost\n1,2.5\n0,1\n", "c").unwrap();
        assert_eq!(costs, vec![1.0, 2.5]);
        assert_eq!(parse_costs_csv(&format_costs_csv(&costs), "c").unwrap(), costs);
        assert!(parse_costs_csv("0,1\n2,1\n", "c").is_err());
        assert!(parse_costs_csv("0,0\n", "c").is_err());
        assert_eq!(line_of(parse_costs_csv("0,1\n0,2\n", "c").unwrap_err()), 2);
    }

    #[test]
    fn penalty_csv_round_trip() {
        let curve = PenaltyCurve::new(vec![0.0, 0.0, 0.5, 1.5]).unwrap();
        let back = parse_penalty_csv(&format_penalty_csv(&curve), "p").unwrap();
        assert_eq!(back, curve);
        assert!(parse_penalty_csv("0,0\n1,2\n2,3\n", "p").is_err());
    }
}
