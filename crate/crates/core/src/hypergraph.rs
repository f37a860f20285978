//! Uniform hypergraphs, bipartite graphs and tripartite triple systems.
//!
//! Vertices are dense `usize` indices. Bipartite adjacency is kept as one bit
//! row per vertex over the opposite side, so common neighbourhoods and
//! codegrees are word-wise intersections. Every edge iterator yields edges in
//! ascending lexicographic order.

use std::collections::BTreeSet;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Side of a [`BipartiteGraph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Left, Side::Right];

    pub fn opposite(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Unordered pair of distinct vertices on one side of a bipartite graph.
///
/// Stored canonically with `u < v`. The derived order (side, then `u`, then
/// `v`) is the enumeration order used everywhere pairs are scanned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexPair {
    pub side: Side,
    pub u: usize,
    pub v: usize,
}

impl VertexPair {
    pub fn new(side: Side, u: usize, v: usize) -> Result<Self> {
        if u == v {
            return Err(Error::InvalidPair(format!("{u} and {v} coincide")));
        }
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        Ok(VertexPair { side, u, v })
    }

    pub fn contains(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }
}

impl fmt::Display for VertexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.side {
            Side::Left => 'L',
            Side::Right => 'R',
        };
        write!(f, "{tag}{{{},{}}}", self.u, self.v)
    }
}

/// `(left, right)` endpoint pair of a bipartite edge.
pub type Edge = (usize, usize);

/// Bipartite graph with parts `0..n_left` and `0..n_right`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BipartiteGraph {
    n_left: usize,
    n_right: usize,
    left_adj: Vec<FixedBitSet>,
    right_adj: Vec<FixedBitSet>,
    edge_count: usize,
}

impl BipartiteGraph {
    pub fn new(n_left: usize, n_right: usize) -> Self {
        BipartiteGraph {
            n_left,
            n_right,
            left_adj: vec![FixedBitSet::with_capacity(n_right); n_left],
            right_adj: vec![FixedBitSet::with_capacity(n_left); n_right],
            edge_count: 0,
        }
    }

    /// Builds a graph from an edge list; duplicates and out-of-range
    /// endpoints are errors.
    pub fn from_edges(
        n_left: usize,
        n_right: usize,
        edges: impl IntoIterator<Item = Edge>,
    ) -> Result<Self> {
        let mut g = BipartiteGraph::new(n_left, n_right);
        for (l, r) in edges {
            if !g.add_edge(l, r)? {
                return Err(Error::InvalidEdge(format!("duplicate edge ({l}, {r})")));
            }
        }
        Ok(g)
    }

    pub fn complete(n_left: usize, n_right: usize) -> Self {
        let mut g = BipartiteGraph::new(n_left, n_right);
        for l in 0..n_left {
            for r in 0..n_right {
                g.add_edge(l, r).expect("in range");
            }
        }
        g
    }

    pub fn n_left(&self) -> usize {
        self.n_left
    }

    pub fn n_right(&self) -> usize {
        self.n_right
    }

    pub fn side_len(&self, side: Side) -> usize {
        match side {
            Side::Left => self.n_left,
            Side::Right => self.n_right,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.edge_count == 0
    }

    fn check_edge(&self, l: usize, r: usize) -> Result<()> {
        if l >= self.n_left {
            return Err(Error::VertexOutOfRange {
                vertex: l,
                limit: self.n_left,
            });
        }
        if r >= self.n_right {
            return Err(Error::VertexOutOfRange {
                vertex: r,
                limit: self.n_right,
            });
        }
        Ok(())
    }

    /// Returns whether the edge was newly inserted.
    pub fn add_edge(&mut self, l: usize, r: usize) -> Result<bool> {
        self.check_edge(l, r)?;
        if self.left_adj[l].contains(r) {
            return Ok(false);
        }
        self.left_adj[l].insert(r);
        self.right_adj[r].insert(l);
        self.edge_count += 1;
        Ok(true)
    }

    /// Returns whether the edge was present.
    pub fn remove_edge(&mut self, l: usize, r: usize) -> bool {
        if l >= self.n_left || r >= self.n_right || !self.left_adj[l].contains(r) {
            return false;
        }
        self.left_adj[l].set(r, false);
        self.right_adj[r].set(l, false);
        self.edge_count -= 1;
        true
    }

    pub fn has_edge(&self, l: usize, r: usize) -> bool {
        l < self.n_left && r < self.n_right && self.left_adj[l].contains(r)
    }

    /// Edges in ascending `(left, right)` order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.left_adj
            .iter()
            .enumerate()
            .flat_map(|(l, row)| row.ones().map(move |r| (l, r)))
    }

    /// Neighbourhood of `v` as a bit row over the opposite side.
    pub fn neighbors(&self, side: Side, v: usize) -> &FixedBitSet {
        match side {
            Side::Left => &self.left_adj[v],
            Side::Right => &self.right_adj[v],
        }
    }

    pub fn degree(&self, side: Side, v: usize) -> usize {
        self.neighbors(side, v).count_ones(..)
    }

    pub fn check_pair(&self, p: VertexPair) -> Result<()> {
        let limit = self.side_len(p.side);
        for x in [p.u, p.v] {
            if x >= limit {
                return Err(Error::InvalidPair(format!(
                    "{p}: vertex {x} not on the {:?} side of size {limit}",
                    p.side
                )));
            }
        }
        if p.u == p.v {
            return Err(Error::InvalidPair(format!("{p}: vertices coincide")));
        }
        Ok(())
    }

    /// Common neighbourhood of a valid pair as a bit row. Panics on
    /// out-of-range pairs; use [`common_neighborhood`] for checked access.
    pub fn common_neighbors(&self, p: VertexPair) -> FixedBitSet {
        let mut row = self.neighbors(p.side, p.u).clone();
        row.intersect_with(self.neighbors(p.side, p.v));
        row
    }

    pub fn codegree(&self, p: VertexPair) -> usize {
        self.neighbors(p.side, p.u)
            .intersection_count(self.neighbors(p.side, p.v))
    }

    /// All same-side pairs in enumeration order (left pairs first).
    pub fn pairs(&self) -> impl Iterator<Item = VertexPair> + '_ {
        Side::BOTH.into_iter().flat_map(move |side| {
            let n = self.side_len(side);
            (0..n).flat_map(move |u| (u + 1..n).map(move |v| VertexPair { side, u, v }))
        })
    }

    pub fn pairs_on(&self, side: Side) -> impl Iterator<Item = VertexPair> + '_ {
        let n = self.side_len(side);
        (0..n).flat_map(move |u| (u + 1..n).map(move |v| VertexPair { side, u, v }))
    }
}

/// Vertices of the opposite part adjacent to both members of `p`, ascending.
pub fn common_neighborhood(g: &BipartiteGraph, p: VertexPair) -> Result<Vec<usize>> {
    g.check_pair(p)?;
    Ok(g.common_neighbors(p).ones().collect())
}

/// Simple undirected graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleGraph {
    adj: Vec<FixedBitSet>,
    edge_count: usize,
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph {
            adj: vec![FixedBitSet::with_capacity(n); n],
            edge_count: 0,
        }
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = SimpleGraph::new(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// Inserts `uv`; loops are errors, repeated edges are ignored.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.adj.len();
        for x in [u, v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, limit: n });
            }
        }
        if u == v {
            return Err(Error::InvalidEdge(format!("loop at {u}")));
        }
        if self.adj[u].contains(v) {
            return Ok(false);
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.edge_count += 1;
        Ok(true)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, row)| row.ones().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn codegree(&self, u: usize, v: usize) -> usize {
        self.adj[u].intersection_count(&self.adj[v])
    }

    pub fn to_hypergraph(&self) -> UniformHypergraph {
        UniformHypergraph::from_edges(2, self.n_vertices(), self.edges().map(|(u, v)| vec![u, v]))
            .expect("simple graph edges are valid 2-sets")
    }

    pub fn from_hypergraph(h: &UniformHypergraph) -> Result<Self> {
        if h.uniformity() != 2 {
            return Err(Error::Parameter(format!(
                "expected a 2-uniform hypergraph, got r = {}",
                h.uniformity()
            )));
        }
        SimpleGraph::from_edges(h.n_vertices(), h.edges().map(|e| (e[0], e[1])))
    }
}

/// r-uniform hypergraph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniformHypergraph {
    r: usize,
    n: usize,
    edges: BTreeSet<Vec<usize>>,
}

impl UniformHypergraph {
    pub fn new(r: usize, n: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::Parameter(format!("uniformity must be at least 2, got {r}")));
        }
        Ok(UniformHypergraph {
            r,
            n,
            edges: BTreeSet::new(),
        })
    }

    /// Builds a hypergraph; each edge is sorted, and malformed or repeated
    /// edges are errors.
    pub fn from_edges(
        r: usize,
        n: usize,
        edges: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self> {
        let mut h = UniformHypergraph::new(r, n)?;
        for e in edges {
            let shown = format!("{e:?}");
            if !h.insert(e)? {
                return Err(Error::InvalidEdge(format!("duplicate edge {shown}")));
            }
        }
        Ok(h)
    }

    fn canonical(&self, mut edge: Vec<usize>) -> Result<Vec<usize>> {
        if edge.len() != self.r {
            return Err(Error::InvalidEdge(format!(
                "edge {edge:?} has {} vertices, expected {}",
                edge.len(),
                self.r
            )));
        }
        edge.sort_unstable();
        if edge.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidEdge(format!("edge {edge:?} repeats a vertex")));
        }
        if let Some(&last) = edge.last() {
            if last >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: last,
                    limit: self.n,
                });
            }
        }
        Ok(edge)
    }

    /// Returns whether the edge was newly inserted.
    pub fn insert(&mut self, edge: Vec<usize>) -> Result<bool> {
        let edge = self.canonical(edge)?;
        Ok(self.edges.insert(edge))
    }

    pub fn remove(&mut self, edge: &[usize]) -> bool {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.remove(&e)
    }

    pub fn contains(&self, edge: &[usize]) -> bool {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.edges.contains(&e)
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> impl Iterator<Item = &[usize]> + '_ {
        self.edges.iter().map(Vec::as_slice)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.contains(&v)).count()
    }

    /// Number of edges containing both `u` and `v`.
    pub fn codegree(&self, u: usize, v: usize) -> Result<usize> {
        if u == v {
            return Err(Error::InvalidPair(format!("{u} and {v} coincide")));
        }
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: x,
                    limit: self.n,
                });
            }
        }
        Ok(self
            .edges
            .iter()
            .filter(|e| e.contains(&u) && e.contains(&v))
            .count())
    }
}

/// One of the three parts `A`, `B`, `C` of a tripartite triple system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Part {
    A,
    B,
    C,
}

impl Part {
    pub const ALL: [Part; 3] = [Part::A, Part::B, Part::C];

    fn slot(self) -> usize {
        match self {
            Part::A => 0,
            Part::B => 1,
            Part::C => 2,
        }
    }
}

/// Which pair of parts a link graph lives on. The link graphs of projection
/// `AB` are indexed by the vertices of `C`, and so on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Projection {
    AB,
    BC,
    AC,
}

impl Projection {
    /// Processing order used by the pipeline.
    pub const ALL: [Projection; 3] = [Projection::AB, Projection::BC, Projection::AC];

    pub fn fixed_part(self) -> Part {
        match self {
            Projection::AB => Part::C,
            Projection::BC => Part::A,
            Projection::AC => Part::B,
        }
    }

    /// Parts on the left and right side of the link graphs.
    pub fn sides(self) -> (Part, Part) {
        match self {
            Projection::AB => (Part::A, Part::B),
            Projection::BC => (Part::B, Part::C),
            Projection::AC => (Part::A, Part::C),
        }
    }

    pub fn from_fixed(part: Part) -> Projection {
        match part {
            Part::C => Projection::AB,
            Part::A => Projection::BC,
            Part::B => Projection::AC,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Projection::AB => "AB",
            Projection::BC => "BC",
            Projection::AC => "AC",
        }
    }
}

/// 3-partite 3-graph on `3n` vertices with `A = 0..n`, `B = n..2n`,
/// `C = 2n..3n`. Triples are stored by local indices `(a, b, c)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TripartiteTripleSystem {
    n: usize,
    edges: BTreeSet<[usize; 3]>,
}

impl TripartiteTripleSystem {
    pub fn new(n: usize) -> Self {
        TripartiteTripleSystem {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_local(n: usize, triples: impl IntoIterator<Item = [usize; 3]>) -> Result<Self> {
        let mut h = TripartiteTripleSystem::new(n);
        for t in triples {
            h.insert_local(t)?;
        }
        Ok(h)
    }

    pub fn part_size(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn insert_local(&mut self, t: [usize; 3]) -> Result<bool> {
        for &x in &t {
            if x >= self.n {
                return Err(Error::VertexOutOfRange {
                    vertex: x,
                    limit: self.n,
                });
            }
        }
        Ok(self.edges.insert(t))
    }

    pub fn contains_local(&self, t: [usize; 3]) -> bool {
        self.edges.contains(&t)
    }

    /// Triples `(a, b, c)` by local index, ascending.
    pub fn triples(&self) -> impl Iterator<Item = [usize; 3]> + '_ {
        self.edges.iter().copied()
    }

    pub fn global(&self, part: Part, local: usize) -> usize {
        part.slot() * self.n + local
    }

    /// Part and local index of a global vertex id.
    pub fn locate(&self, global: usize) -> Option<(Part, usize)> {
        if self.n == 0 || global >= 3 * self.n {
            return None;
        }
        Some((Part::ALL[global / self.n], global % self.n))
    }

    pub fn to_hypergraph(&self) -> UniformHypergraph {
        let n = self.n;
        UniformHypergraph::from_edges(
            3,
            3 * n,
            self.edges.iter().map(|&[a, b, c]| vec![a, n + b, 2 * n + c]),
        )
        .expect("tripartite triples are valid")
    }

    /// Interprets a 3-graph on `3n` vertices with the fixed part ranges.
    pub fn from_hypergraph(h: &UniformHypergraph) -> Result<Self> {
        if h.uniformity() != 3 {
            return Err(Error::Parameter(format!(
                "tripartite systems are 3-uniform, got r = {}",
                h.uniformity()
            )));
        }
        if !h.n_vertices().is_multiple_of(3) {
            return Err(Error::Parameter(format!(
                "vertex count {} is not divisible by 3",
                h.n_vertices()
            )));
        }
        let n = h.n_vertices() / 3;
        let mut t = TripartiteTripleSystem::new(n);
        for e in h.edges() {
            // edges are sorted, so a transversal edge lists A, B, C in order
            if e[0] >= n || e[1] < n || e[1] >= 2 * n || e[2] < 2 * n {
                return Err(Error::InvalidEdge(format!(
                    "edge {e:?} is not transversal to the parts"
                )));
            }
            t.insert_local([e[0], e[1] - n, e[2] - 2 * n])?;
        }
        Ok(t)
    }

    /// Keeps the triples accepted by `keep`.
    pub fn filtered(&self, mut keep: impl FnMut([usize; 3]) -> bool) -> Self {
        TripartiteTripleSystem {
            n: self.n,
            edges: self.edges.iter().copied().filter(|&t| keep(t)).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &TripartiteTripleSystem) -> bool {
        self.edges.is_subset(&other.edges)
    }
}

/// Link graph of `H` at vertex `index` of `fixed_part`: the bipartite graph on
/// the two other parts whose edges complete that vertex to a triple of `H`.
///
/// Fixing `C` gives a graph on `A x B`, fixing `A` one on `B x C`, fixing `B`
/// one on `A x C`; in each case the earlier part is the left side.
pub fn link_graph(
    h: &TripartiteTripleSystem,
    fixed_part: Part,
    index: usize,
) -> Result<BipartiteGraph> {
    let n = h.part_size();
    if index >= n {
        return Err(Error::VertexOutOfRange {
            vertex: index,
            limit: n,
        });
    }
    let mut g = BipartiteGraph::new(n, n);
    for [a, b, c] in h.triples() {
        let edge = match fixed_part {
            Part::C if c == index => Some((a, b)),
            Part::A if a == index => Some((b, c)),
            Part::B if b == index => Some((a, c)),
            _ => None,
        };
        if let Some((l, r)) = edge {
            g.add_edge(l, r)?;
        }
    }
    Ok(g)
}

/// All `n` link graphs of one projection, indexed by the fixed part.
pub fn link_graphs(h: &TripartiteTripleSystem, projection: Projection) -> Vec<BipartiteGraph> {
    let n = h.part_size();
    let mut graphs = vec![BipartiteGraph::new(n, n); n];
    for [a, b, c] in h.triples() {
        let (i, l, r) = match projection {
            Projection::AB => (c, a, b),
            Projection::BC => (a, b, c),
            Projection::AC => (b, a, c),
        };
        graphs[i].add_edge(l, r).expect("local indices are in range");
    }
    graphs
}
