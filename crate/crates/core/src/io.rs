//! Plain-text formats.
//!
//! * hypergraph: `r n m` (plus the token `tripartite` for tripartite files),
//!   then `m` lines of `r` vertex indices;
//! * bipartite graph: `nL nR m`, then `m` lines `l r`;
//! * coloured multigraph: `n m`, then `m` lines `u v colour`;
//! * design: `n k b`, then `b` blocks of `k` points.
//!
//! Writers emit sorted edges; readers accept any edge order.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::constructions::Design;
use crate::error::{Error, Result};
use crate::hypergraph::{BipartiteGraph, TripartiteTripleSystem, UniformHypergraph};
use crate::patterns::{ColoredEdge, ColoredMultigraph};

/// Contents of a hypergraph file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HypergraphFile {
    Plain(UniformHypergraph),
    Tripartite(TripartiteTripleSystem),
}

impl HypergraphFile {
    pub fn hypergraph(&self) -> UniformHypergraph {
        match self {
            HypergraphFile::Plain(h) => h.clone(),
            HypergraphFile::Tripartite(t) => t.to_hypergraph(),
        }
    }
}

/// Non-empty lines with their 1-based line numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn numbers<T: std::str::FromStr>(line: usize, s: &str) -> Result<Vec<T>> {
    s.split_whitespace()
        .map(|tok| tok.parse::<T>().map_err(|_| Error::parse(line, format!("bad integer '{tok}'"))))
        .collect()
}

struct Body<'a> {
    header: (usize, &'a str),
    rows: Vec<(usize, &'a str)>,
}

fn split(text: &str, count_at: usize, width: usize) -> Result<(Vec<String>, Body<'_>)> {
    let mut it = lines(text);
    let header = it.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let tokens: Vec<String> = header.1.split_whitespace().map(str::to_string).collect();
    if tokens.len() < width {
        return Err(Error::parse(header.0, format!("header needs {width} fields")));
    }
    let m: usize = tokens[count_at]
        .parse()
        .map_err(|_| Error::parse(header.0, "bad edge count"))?;
    let rows: Vec<_> = it.collect();
    if rows.len() != m {
        return Err(Error::parse(
            header.0,
            format!("header announces {m} lines, found {}", rows.len()),
        ));
    }
    Ok((tokens, Body { header, rows }))
}

pub fn parse_hypergraph(text: &str) -> Result<HypergraphFile> {
    let (tokens, body) = split(text, 2, 3)?;
    let line = body.header.0;
    let r: usize = tokens[0].parse().map_err(|_| Error::parse(line, "bad uniformity"))?;
    let n: usize = tokens[1].parse().map_err(|_| Error::parse(line, "bad vertex count"))?;
    let tripartite = match tokens.get(3).map(String::as_str) {
        None => false,
        Some("tripartite") => true,
        Some(other) => return Err(Error::parse(line, format!("unknown header token '{other}'"))),
    };
    if tokens.len() > 4 {
        return Err(Error::parse(line, "trailing header tokens"));
    }
    let mut h = UniformHypergraph::new(r, n).map_err(|e| Error::parse(line, e.to_string()))?;
    for (ln, row) in body.rows {
        let e: Vec<usize> = numbers(ln, row)?;
        if e.len() != r {
            return Err(Error::parse(ln, format!("expected {r} vertices, found {}", e.len())));
        }
        if !h.insert(e).map_err(|err| Error::parse(ln, err.to_string()))? {
            return Err(Error::parse(ln, "duplicate edge"));
        }
    }
    if tripartite {
        let t = TripartiteTripleSystem::from_hypergraph(&h).map_err(|e| Error::parse(line, e.to_string()))?;
        Ok(HypergraphFile::Tripartite(t))
    } else {
        Ok(HypergraphFile::Plain(h))
    }
}

pub fn format_hypergraph(h: &UniformHypergraph) -> String {
    let mut out = format!("{} {} {}\n", h.uniformity(), h.n_vertices(), h.edge_count());
    for e in h.edges() {
        push_row(&mut out, e);
    }
    out
}

pub fn format_tripartite(t: &TripartiteTripleSystem) -> String {
    let h = t.to_hypergraph();
    let mut out = format!("3 {} {} tripartite\n", h.n_vertices(), h.edge_count());
    for e in h.edges() {
        push_row(&mut out, e);
    }
    out
}

fn push_row(out: &mut String, row: &[usize]) {
    let mut first = true;
    for v in row {
        if !first {
            out.push(' ');
        }
        first = false;
        write!(out, "{v}").expect("writing to a string");
    }
    out.push('\n');
}

pub fn parse_bipartite(text: &str) -> Result<BipartiteGraph> {
    let (tokens, body) = split(text, 2, 3)?;
    let line = body.header.0;
    if tokens.len() != 3 {
        return Err(Error::parse(line, "bipartite header is 'nL nR m'"));
    }
    let dims: Vec<usize> = numbers(line, body.header.1)?;
    let mut g = BipartiteGraph::new(dims[0], dims[1]);
    for (ln, row) in body.rows {
        let e: Vec<usize> = numbers(ln, row)?;
        if e.len() != 2 {
            return Err(Error::parse(ln, "expected 'l r'"));
        }
        if !g.add_edge(e[0], e[1]).map_err(|err| Error::parse(ln, err.to_string()))? {
            return Err(Error::parse(ln, "duplicate edge"));
        }
    }
    Ok(g)
}

pub fn format_bipartite(g: &BipartiteGraph) -> String {
    let mut out = format!("{} {} {}\n", g.n_left(), g.n_right(), g.edge_count());
    for (l, r) in g.edges() {
        writeln!(out, "{l} {r}").expect("writing to a string");
    }
    out
}

pub fn parse_colored_multigraph(text: &str) -> Result<ColoredMultigraph> {
    let (tokens, body) = split(text, 1, 2)?;
    let line = body.header.0;
    if tokens.len() != 2 {
        return Err(Error::parse(line, "multigraph header is 'n m'"));
    }
    let n: usize = tokens[0].parse().map_err(|_| Error::parse(line, "bad vertex count"))?;
    let mut edges = Vec::with_capacity(body.rows.len());
    for (ln, row) in body.rows {
        let e: Vec<u64> = numbers(ln, row)?;
        if e.len() != 3 {
            return Err(Error::parse(ln, "expected 'u v colour'"));
        }
        edges.push(ColoredEdge {
            u: e[0] as usize,
            v: e[1] as usize,
            color: e[2],
        });
    }
    ColoredMultigraph::new(n, edges).map_err(|e| Error::parse(line, e.to_string()))
}

pub fn format_colored_multigraph(m: &ColoredMultigraph) -> String {
    let mut out = format!("{} {}\n", m.n_vertices(), m.edge_count());
    for e in m.edges() {
        writeln!(out, "{} {} {}", e.u, e.v, e.color).expect("writing to a string");
    }
    out
}

pub fn parse_design(text: &str) -> Result<Design> {
    let (tokens, body) = split(text, 2, 3)?;
    let line = body.header.0;
    if tokens.len() != 3 {
        return Err(Error::parse(line, "design header is 'n k b'"));
    }
    let dims: Vec<usize> = numbers(line, body.header.1)?;
    let mut blocks = Vec::with_capacity(body.rows.len());
    for (ln, row) in body.rows {
        let block: Vec<usize> = numbers(ln, row)?;
        if block.len() != dims[1] {
            return Err(Error::parse(ln, format!("expected {} points", dims[1])));
        }
        blocks.push(block);
    }
    Design::new(dims[0], dims[1], blocks).map_err(|e| Error::parse(line, e.to_string()))
}

pub fn format_design(d: &Design) -> String {
    let mut out = format!("{} {} {}\n", d.n_points(), d.block_size(), d.blocks().len());
    for b in d.blocks() {
        push_row(&mut out, b);
    }
    out
}

pub fn read_hypergraph(path: &Path) -> Result<HypergraphFile> {
    parse_hypergraph(&fs::read_to_string(path)?)
}

pub fn read_bipartite(path: &Path) -> Result<BipartiteGraph> {
    parse_bipartite(&fs::read_to_string(path)?)
}

pub fn read_colored_multigraph(path: &Path) -> Result<ColoredMultigraph> {
    parse_colored_multigraph(&fs::read_to_string(path)?)
}

pub fn read_design(path: &Path) -> Result<Design> {
    parse_design(&fs::read_to_string(path)?)
}
