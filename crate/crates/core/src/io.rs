//! Graph file formats and a small catalog of named graphs.
//!
//! Two interchangeable formats:
//! * edge-list text, one `u v` pair per line, 0-indexed, `#` comments;
//! * JSON `{"n": 4, "edges": [[0,1], ...]}` (optional `lengths`).

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Parse edge-list text.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut edges = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_whitespace();
        let parse = |tok: Option<&str>| -> Result<usize> {
            tok.ok_or_else(|| {
                Error::InvalidParameter(format!("line {}: expected `u v`", lineno + 1))
            })?
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("line {}: bad vertex index", lineno + 1)))
        };
        let u = parse(it.next())?;
        let v = parse(it.next())?;
        if it.next().is_some() {
            return Err(Error::InvalidParameter(format!(
                "line {}: trailing tokens",
                lineno + 1
            )));
        }
        edges.push((u, v));
    }
    Graph::from_edges(&edges)
}

/// Render a graph as edge-list text.
pub fn to_edge_list(g: &Graph) -> String {
    let mut out = String::new();
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

/// Parse the JSON graph format.
pub fn parse_graph_json(text: &str) -> Result<Graph> {
    Ok(serde_json::from_str(text)?)
}

/// Load a graph from a named builtin, a `.json` file, or an edge-list file.
pub fn load_graph(spec: &str) -> Result<Graph> {
    if let Some(g) = builtin_graph(spec) {
        return Ok(g);
    }
    let path = std::path::Path::new(spec);
    if !path.exists() {
        return Err(Error::InvalidParameter(format!(
            "`{spec}` is neither a builtin graph nor a file; builtins: {}",
            BUILTIN_NAMES.join(", ")
        )));
    }
    let text = std::fs::read_to_string(path)?;
    if spec.ends_with(".json") {
        parse_graph_json(&text)
    } else {
        parse_edge_list(&text)
    }
}

/// Names accepted by [`builtin_graph`]; `cN` and `pathN` take a numeric suffix.
pub const BUILTIN_NAMES: &[&str] = &[
    "triangle",
    "k4",
    "petersen",
    "heawood",
    "star3",
    "cN",
    "pathN",
    "spider-L-M",
];

/// Catalog of named test graphs.
pub fn builtin_graph(name: &str) -> Option<Graph> {
    match name {
        "triangle" => Graph::from_edges(&[(0, 1), (1, 2), (2, 0)]).ok(),
        "k4" => Graph::from_edges(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).ok(),
        "star3" => Graph::from_edges(&[(0, 1), (0, 2), (0, 3)]).ok(),
        "petersen" => {
            let mut edges = Vec::new();
            for i in 0..5 {
                edges.push((i, (i + 1) % 5)); // outer cycle
                edges.push((5 + i, 5 + (i + 2) % 5)); // inner pentagram
                edges.push((i, 5 + i)); // spokes
            }
            Graph::from_edges(&edges).ok()
        }
        "heawood" => crate::families::generalized_triangle(2)
            .ok()
            .map(|(g, _)| g),
        _ => {
            if let Some(n) = name.strip_prefix('c').and_then(|s| s.parse::<usize>().ok()) {
                if n >= 3 {
                    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
                    return Graph::from_edges(&edges).ok();
                }
                return None;
            }
            if let Some(n) = name
                .strip_prefix("path")
                .and_then(|s| s.parse::<usize>().ok())
            {
                if n >= 2 {
                    let edges: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
                    return Graph::from_edges(&edges).ok();
                }
                return None;
            }
            // spider-L-M: L legs of M edges each, glued at vertex 0
            if let Some(rest) = name.strip_prefix("spider-") {
                let parts: Vec<&str> = rest.split('-').collect();
                if parts.len() == 2 {
                    if let (Ok(legs), Ok(len)) =
                        (parts[0].parse::<usize>(), parts[1].parse::<usize>())
                    {
                        if legs >= 1 && len >= 1 {
                            return Some(spider(legs, len));
                        }
                    }
                }
            }
            None
        }
    }
}

/// Spider tree: `legs` paths of `len` edges glued at the center vertex 0.
pub fn spider(legs: usize, len: usize) -> Graph {
    let mut edges = Vec::new();
    for l in 0..legs {
        let base = 1 + l * len;
        edges.push((0, base));
        for t in 1..len {
            edges.push((base + t - 1, base + t));
        }
    }
    Graph::from_edges(&edges).expect("spider is connected")
}
