//! Forbidden configurations: expansions, `K_{1,2,q}`, copy detection, pair
//! classification, brooms and frames.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::hypergraph::{BipartiteGraph, Side, SimpleGraph, UniformHypergraph, VertexPair};
use crate::matching::{bipartite_matching, matched_pairs, maximum_matching};

/// Bipartite base graph with ordered bipartition `(X, Y)` (left side is `X`)
/// and a target uniformity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionSpec {
    base: BipartiteGraph,
    r: usize,
}

impl ExpansionSpec {
    pub fn new(base: BipartiteGraph, r: usize) -> Result<Self> {
        if r < 3 {
            return Err(Error::Parameter(format!("expansion needs r >= 3, got {r}")));
        }
        if base.n_right() == 0 {
            return Err(Error::Parameter("expansion needs a nonempty Y side".into()));
        }
        Ok(ExpansionSpec { base, r })
    }

    pub fn base(&self) -> &BipartiteGraph {
        &self.base
    }

    pub fn uniformity(&self) -> usize {
        self.r
    }
}

/// The expansion `G_{X,Y}^{(r)}`.
///
/// Vertex layout: `X` is `0..|X|`, `Y` is `|X|..|X|+|Y|`, and the private
/// `(r-2)`-set of `y_i` follows as block `i` of size `r-2`.
pub fn expand(spec: &ExpansionSpec) -> UniformHypergraph {
    let g = &spec.base;
    let (nx, ny, r) = (g.n_left(), g.n_right(), spec.r);
    let extra = |i: usize| (0..r - 2).map(move |j| nx + ny + i * (r - 2) + j);
    let edges = g.edges().map(|(x, y)| {
        let mut e = vec![x, nx + y];
        e.extend(extra(y));
        e
    });
    UniformHypergraph::from_edges(r, nx + ny + ny * (r - 2), edges)
        .expect("expansion edges are distinct r-sets")
}

/// `K_{s,t}^{(r)}`: the expansion of the complete bipartite graph `K_{s,t}`.
pub fn k_st(s: usize, t: usize, r: usize) -> Result<UniformHypergraph> {
    if s == 0 {
        return Err(Error::Parameter("K_{s,t} needs s >= 1".into()));
    }
    Ok(expand(&ExpansionSpec::new(BipartiteGraph::complete(s, t), r)?))
}

/// `K_{1,2,q}`: vertices `u = 0`, `v = 1`, `w = 2`, `z_i = 3 + i`, with the
/// `2q` triples `{u, w, z_i}` and `{v, w, z_i}`.
pub fn make_k12q(q: usize) -> Result<UniformHypergraph> {
    if q == 0 {
        return Err(Error::Parameter("K_{1,2,q} needs q >= 1".into()));
    }
    let edges = (0..q).flat_map(|i| [vec![0, 2, 3 + i], vec![1, 2, 3 + i]]);
    UniformHypergraph::from_edges(3, q + 3, edges)
}

/// `K_{2,q}` as a 2-uniform pattern: `0, 1` joined to each of `2..2+q`.
pub fn make_k2q_graph(q: usize) -> Result<UniformHypergraph> {
    if q == 0 {
        return Err(Error::Parameter("K_{2,q} needs q >= 1".into()));
    }
    let edges = (0..q).flat_map(|i| [vec![0, 2 + i], vec![1, 2 + i]]);
    UniformHypergraph::from_edges(2, q + 2, edges)
}

/// A forbidden configuration recognised by [`contains_copy`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// `K_{s,t}^{(r)}`.
    Kst { s: usize, t: usize, r: usize },
    /// `K_{1,2,q}` (3-uniform).
    K12q { q: usize },
    /// `K_{2,q}` in a 2-uniform host.
    K2qGraph { q: usize },
    /// Arbitrary expansion `G_{X,Y}^{(r)}`.
    Expansion(ExpansionSpec),
}

impl Pattern {
    pub fn k2t3(t: usize) -> Pattern {
        Pattern::Kst { s: 2, t, r: 3 }
    }

    pub fn uniformity(&self) -> usize {
        match self {
            Pattern::Kst { r, .. } => *r,
            Pattern::K12q { .. } => 3,
            Pattern::K2qGraph { .. } => 2,
            Pattern::Expansion(spec) => spec.uniformity(),
        }
    }

    /// The pattern as a hypergraph, in the vertex layout witnesses refer to.
    pub fn to_hypergraph(&self) -> Result<UniformHypergraph> {
        match self {
            Pattern::Kst { s, t, r } => k_st(*s, *t, *r),
            Pattern::K12q { q } => make_k12q(*q),
            Pattern::K2qGraph { q } => make_k2q_graph(*q),
            Pattern::Expansion(spec) => Ok(expand(spec)),
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            Pattern::Kst { s, t, r } => s + t + t * (r - 2),
            Pattern::K12q { q } => q + 3,
            Pattern::K2qGraph { q } => q + 2,
            Pattern::Expansion(spec) => {
                let g = spec.base();
                g.n_left() + g.n_right() * (spec.uniformity() - 1)
            }
        }
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Kst { s, t, r: 3 } => write!(f, "k23:{s},{t}"),
            Pattern::Kst { s, t, r } => write!(f, "kst:{s},{t},{r}"),
            Pattern::K12q { q } => write!(f, "k12q:{q}"),
            Pattern::K2qGraph { q } => write!(f, "k2q-graph:{q}"),
            Pattern::Expansion(spec) => write!(
                f,
                "expansion({}x{}, {} edges, r={})",
                spec.base().n_left(),
                spec.base().n_right(),
                spec.base().edge_count(),
                spec.uniformity()
            ),
        }
    }
}

impl FromStr for Pattern {
    type Err = Error;

    /// Parses `k23:s,t`, `kst:s,t,r`, `k12q:q` and `k2q-graph:q`.
    fn from_str(id: &str) -> Result<Self> {
        let bad = || Error::Parameter(format!("unrecognised pattern id '{id}'"));
        let (kind, args) = id.split_once(':').ok_or_else(bad)?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|x| x.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        let positive = |x: usize| if x == 0 { Err(bad()) } else { Ok(x) };
        match (kind, nums.as_slice()) {
            ("k23", &[s, t]) => Ok(Pattern::Kst {
                s: positive(s)?,
                t: positive(t)?,
                r: 3,
            }),
            ("kst", &[s, t, r]) if r >= 3 => Ok(Pattern::Kst {
                s: positive(s)?,
                t: positive(t)?,
                r,
            }),
            ("k12q", &[q]) => Ok(Pattern::K12q { q: positive(q)? }),
            ("k2q-graph", &[q]) => Ok(Pattern::K2qGraph { q: positive(q)? }),
            _ => Err(bad()),
        }
    }
}

/// Host vertex assigned to each pattern vertex (indexed by pattern vertex).
pub type Embedding = Vec<usize>;

/// Finds a (not necessarily induced) copy of `pattern` in `h`.
///
/// `K_{2,t}^{(3)}`, `K_{1,2,q}` and `K_{2,q}` use dedicated detectors; other
/// patterns are embedded edge by edge. Witnesses from the dedicated detectors
/// are normalised under the pattern's symmetries (`a < b`, `x_i < y_i`,
/// pairs ascending; `u < v`; leaves ascending).
pub fn contains_copy(h: &UniformHypergraph, pattern: &Pattern) -> Result<Option<Embedding>> {
    if h.uniformity() != pattern.uniformity() {
        return Err(Error::UniformityMismatch {
            host: h.uniformity(),
            pattern: pattern.uniformity(),
        });
    }
    match *pattern {
        Pattern::Kst { s: 2, t, r: 3 } => Ok(find_k2t3(h, t)),
        Pattern::K12q { q } => Ok(find_k12q(h, q)),
        Pattern::K2qGraph { q } => find_k2q_graph(h, q),
        _ => Ok(embed_by_edges(h, &pattern.to_hypergraph()?)),
    }
}

/// Pairs-of-neighbours structure of a 3-graph: `link[a][x]` holds every `y`
/// with `{a, x, y}` an edge.
pub(crate) struct TripleLinks {
    link: Vec<Vec<FixedBitSet>>,
}

impl TripleLinks {
    pub(crate) fn new(h: &UniformHypergraph) -> Self {
        debug_assert_eq!(h.uniformity(), 3);
        let n = h.n_vertices();
        let mut link = vec![vec![FixedBitSet::with_capacity(n); n]; n];
        for e in h.edges() {
            let (a, b, c) = (e[0], e[1], e[2]);
            for (p, x, y) in [(a, b, c), (b, a, c), (c, a, b)] {
                link[p][x].insert(y);
                link[p][y].insert(x);
            }
        }
        TripleLinks { link }
    }

    pub(crate) fn insert(&mut self, e: &[usize]) {
        let (a, b, c) = (e[0], e[1], e[2]);
        for (p, x, y) in [(a, b, c), (b, a, c), (c, a, b)] {
            self.link[p][x].insert(y);
            self.link[p][y].insert(x);
        }
    }

    pub(crate) fn remove(&mut self, e: &[usize]) {
        let (a, b, c) = (e[0], e[1], e[2]);
        for (p, x, y) in [(a, b, c), (b, a, c), (c, a, b)] {
            self.link[p][x].set(y, false);
            self.link[p][y].set(x, false);
        }
    }

    fn n(&self) -> usize {
        self.link.len()
    }

    /// Adjacency lists of the graph on `V \ {a, b}` whose edges `xy` satisfy
    /// `axy, bxy` in `H`, minus the vertices in `skip`.
    fn pair_graph(&self, a: usize, b: usize, skip: &[usize]) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut adj = vec![Vec::new(); n];
        for x in 0..n {
            if x == a || x == b || skip.contains(&x) {
                continue;
            }
            let mut row = self.link[a][x].clone();
            row.intersect_with(&self.link[b][x]);
            for y in row.ones() {
                if y != a && y != b && !skip.contains(&y) {
                    adj[x].push(y);
                }
            }
        }
        adj
    }

    fn k2t_witness(&self, a: usize, b: usize, t: usize, fixed: Option<(usize, usize)>) -> Option<Embedding> {
        let skip: Vec<usize> = fixed.map(|(x, y)| vec![x, y]).unwrap_or_default();
        let need = t - usize::from(fixed.is_some());
        let adj = self.pair_graph(a, b, &skip);
        let edges: usize = adj.iter().map(Vec::len).sum::<usize>() / 2;
        if edges < need {
            return None;
        }
        let mate = maximum_matching(&adj);
        let mut pairs = matched_pairs(&mate);
        if pairs.len() < need {
            return None;
        }
        pairs.truncate(need);
        if let Some((x, y)) = fixed {
            pairs.push((x.min(y), x.max(y)));
            pairs.sort_unstable();
        }
        let mut w = vec![a.min(b), a.max(b)];
        w.extend(pairs.iter().map(|p| p.0));
        w.extend(pairs.iter().map(|p| p.1));
        Some(w)
    }
}

fn find_k2t3(h: &UniformHypergraph, t: usize) -> Option<Embedding> {
    let n = h.n_vertices();
    if t == 0 || n < 2 * t + 2 || h.edge_count() < 2 * t {
        return None;
    }
    let links = TripleLinks::new(h);
    for a in 0..n {
        for b in a + 1..n {
            if let Some(w) = links.k2t_witness(a, b, t, None) {
                return Some(w);
            }
        }
    }
    None
}

/// Looks for a `K_{2,t}^{(3)}` copy using `edge` (which must already be in
/// the structure behind `links`).
pub(crate) fn k2t3_through_edge(links: &TripleLinks, edge: &[usize], t: usize) -> Option<Embedding> {
    if t == 0 {
        return None;
    }
    for i in 0..3 {
        let a = edge[i];
        let (x, y) = match i {
            0 => (edge[1], edge[2]),
            1 => (edge[0], edge[2]),
            _ => (edge[0], edge[1]),
        };
        for b in links.link[x][y].ones() {
            if b == a {
                continue;
            }
            if let Some(w) = links.k2t_witness(a, b, t, Some((x, y))) {
                return Some(w);
            }
        }
    }
    None
}

/// Checks whether adding `edge` to `h` would complete a `K_{2,t}^{(3)}`.
pub fn k2t3_copy_through_edge(h: &UniformHypergraph, edge: &[usize], t: usize) -> Result<Option<Embedding>> {
    if h.uniformity() != 3 {
        return Err(Error::UniformityMismatch {
            host: h.uniformity(),
            pattern: 3,
        });
    }
    let mut g = h.clone();
    g.insert(edge.to_vec())?;
    let mut e = edge.to_vec();
    e.sort_unstable();
    Ok(k2t3_through_edge(&TripleLinks::new(&g), &e, t))
}

fn find_k12q(h: &UniformHypergraph, q: usize) -> Option<Embedding> {
    let n = h.n_vertices();
    if q == 0 || n < q + 3 {
        return None;
    }
    let links = TripleLinks::new(h);
    for u in 0..n {
        for v in u + 1..n {
            for w in 0..n {
                if w == u || w == v {
                    continue;
                }
                let mut row = links.link[u][w].clone();
                row.intersect_with(&links.link[v][w]);
                let zs: Vec<usize> = row.ones().filter(|&z| z != u && z != v).take(q).collect();
                if zs.len() == q {
                    let mut emb = vec![u, v, w];
                    emb.extend(zs);
                    return Some(emb);
                }
            }
        }
    }
    None
}

fn find_k2q_graph(h: &UniformHypergraph, q: usize) -> Result<Option<Embedding>> {
    let g = SimpleGraph::from_hypergraph(h)?;
    let n = g.n_vertices();
    for u in 0..n {
        for v in u + 1..n {
            if g.codegree(u, v) >= q {
                let mut row = g.neighbors(u).clone();
                row.intersect_with(g.neighbors(v));
                let mut emb = vec![u, v];
                emb.extend(row.ones().take(q));
                return Ok(Some(emb));
            }
        }
    }
    Ok(None)
}

/// Embeds `pattern` into `host` by mapping pattern edges to host edges one
/// at a time, keeping the vertex map injective.
fn embed_by_edges(host: &UniformHypergraph, pattern: &UniformHypergraph) -> Option<Embedding> {
    let k = pattern.n_vertices();
    let n = host.n_vertices();
    if k > n || pattern.edge_count() > host.edge_count() {
        return None;
    }
    let pedges: Vec<Vec<usize>> = pattern.edges().map(<[usize]>::to_vec).collect();
    let hedges: Vec<Vec<usize>> = host.edges().map(<[usize]>::to_vec).collect();
    let mut incidence = vec![Vec::new(); n];
    for (i, e) in hedges.iter().enumerate() {
        for &v in e {
            incidence[v].push(i);
        }
    }

    // order pattern edges so each one overlaps the already placed ones as much as possible
    let mut order = Vec::with_capacity(pedges.len());
    let mut covered = vec![false; k];
    let mut placed = vec![false; pedges.len()];
    for _ in 0..pedges.len() {
        let next = (0..pedges.len())
            .filter(|&i| !placed[i])
            .max_by_key(|&i| {
                let overlap = pedges[i].iter().filter(|&&v| covered[v]).count();
                (overlap, std::cmp::Reverse(i))
            })
            .expect("an unplaced edge remains");
        placed[next] = true;
        for &v in &pedges[next] {
            covered[v] = true;
        }
        order.push(next);
    }

    struct Search<'a> {
        pedges: &'a [Vec<usize>],
        hedges: &'a [Vec<usize>],
        incidence: &'a [Vec<usize>],
        order: &'a [usize],
        map: Vec<Option<usize>>,
        used: Vec<bool>,
    }

    impl Search<'_> {
        fn step(&mut self, i: usize) -> bool {
            if i == self.order.len() {
                return self.place_isolated();
            }
            let pe = &self.pedges[self.order[i]];
            let mapped: Vec<usize> = pe.iter().filter_map(|&v| self.map[v]).collect();
            let unmapped: Vec<usize> = pe.iter().copied().filter(|&v| self.map[v].is_none()).collect();
            let candidates: Vec<usize> = match mapped.first() {
                Some(&img) => self.incidence[img].clone(),
                None => (0..self.hedges.len()).collect(),
            };
            for hi in candidates {
                let he = &self.hedges[hi];
                if !mapped.iter().all(|m| he.contains(m)) {
                    continue;
                }
                let free: Vec<usize> = he.iter().copied().filter(|v| !mapped.contains(v)).collect();
                if free.iter().any(|&v| self.used[v]) {
                    continue;
                }
                if self.assign(&unmapped, &free, 0, i) {
                    return true;
                }
            }
            false
        }

        fn assign(&mut self, unmapped: &[usize], free: &[usize], j: usize, i: usize) -> bool {
            if j == unmapped.len() {
                return self.step(i + 1);
            }
            for &h in free {
                if self.used[h] {
                    continue;
                }
                self.used[h] = true;
                self.map[unmapped[j]] = Some(h);
                if self.assign(unmapped, free, j + 1, i) {
                    return true;
                }
                self.map[unmapped[j]] = None;
                self.used[h] = false;
            }
            false
        }

        fn place_isolated(&mut self) -> bool {
            let mut spare = (0..self.used.len()).filter(|&h| !self.used[h]);
            let mut assigned = Vec::new();
            for v in 0..self.map.len() {
                if self.map[v].is_none() {
                    match spare.next() {
                        Some(h) => assigned.push((v, h)),
                        None => return false,
                    }
                }
            }
            for (v, h) in assigned {
                self.map[v] = Some(h);
                self.used[h] = true;
            }
            true
        }
    }

    let mut search = Search {
        pedges: &pedges,
        hedges: &hedges,
        incidence: &incidence,
        order: &order,
        map: vec![None; k],
        used: vec![false; n],
    };
    if search.step(0) {
        Some(search.map.into_iter().map(|m| m.expect("all mapped")).collect())
    } else {
        None
    }
}

/// Classification of a same-side pair relative to `q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairClass {
    Dense,
    Sparse,
    Neither,
}

/// All `q`-dense pairs (codegree at least `q`), left side first.
pub fn dense_pairs(g: &BipartiteGraph, q: usize) -> Vec<VertexPair> {
    g.pairs().filter(|&p| g.codegree(p) >= q).collect()
}

pub fn dense_pairs_on(g: &BipartiteGraph, q: usize, side: Side) -> Vec<VertexPair> {
    g.pairs_on(side).filter(|&p| g.codegree(p) >= q).collect()
}

pub fn count_dense_pairs(g: &BipartiteGraph, q: usize) -> usize {
    g.pairs().filter(|&p| g.codegree(p) >= q).count()
}

/// Vertices of `common` spanned by the `q`-dense pairs lying inside it.
/// `opposite_dense` are the dense pairs of the side `common` lives on.
pub(crate) fn spanned_by_dense(common: &FixedBitSet, opposite_dense: &[VertexPair]) -> BTreeSet<usize> {
    opposite_dense
        .iter()
        .filter(|d| common.contains(d.u) && common.contains(d.v))
        .flat_map(|d| [d.u, d.v])
        .collect()
}

/// Dense iff codegree `>= q`; sparse iff codegree `< q` and the pair lies in
/// some `K_{2,q}` of `g`. In a bipartite graph a same-side pair with
/// codegree `< q` can only sit on the `q`-side of such a copy, which happens
/// exactly when a `q`-dense pair lies inside its common neighbourhood.
pub fn classify_pair(g: &BipartiteGraph, q: usize, p: VertexPair) -> Result<PairClass> {
    if q == 0 {
        return Err(Error::Parameter("q must be at least 1".into()));
    }
    g.check_pair(p)?;
    let common = g.common_neighbors(p);
    if common.count_ones(..) >= q {
        return Ok(PairClass::Dense);
    }
    let opposite = dense_pairs_on(g, q, p.side.opposite());
    if opposite
        .iter()
        .any(|d| common.contains(d.u) && common.contains(d.v))
    {
        Ok(PairClass::Sparse)
    } else {
        Ok(PairClass::Neither)
    }
}

/// A `q`-broom: sparse pairs `{handle, tip}` whose common neighbourhoods all
/// contain one dense pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Broom {
    /// Side holding the handle and the tips.
    pub side: Side,
    pub handle: usize,
    pub tips: Vec<usize>,
    pub dense_pair: VertexPair,
}

impl Broom {
    pub fn size(&self) -> usize {
        self.tips.len()
    }
}

/// Returns a `q`-broom with at least `k` tips if one exists (all qualifying
/// tips of the first handle found are reported).
pub fn find_broom(g: &BipartiteGraph, q: usize, k: usize) -> Result<Option<Broom>> {
    if q < 2 || k == 0 {
        return Err(Error::Parameter(format!(
            "find_broom needs q >= 2 and k >= 1, got q = {q}, k = {k}"
        )));
    }
    for dense in dense_pairs(g, q) {
        let side = dense.side.opposite();
        let common = g.common_neighbors(dense);
        for handle in common.ones() {
            let tips: Vec<usize> = common
                .ones()
                .filter(|&x| x != handle)
                .filter(|&x| {
                    let p = VertexPair::new(side, handle, x).expect("distinct");
                    g.codegree(p) < q
                })
                .collect();
            if tips.len() >= k {
                return Ok(Some(Broom {
                    side,
                    handle,
                    tips,
                    dense_pair: dense,
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ColoredEdge {
    pub u: usize,
    pub v: usize,
    pub color: u64,
}

/// Edge-coloured multigraph; a pair's multiplicity is its number of records,
/// and a pair carries each colour at most once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredMultigraph {
    n_vertices: usize,
    edges: Vec<ColoredEdge>,
}

/// Edges of distinct colours with distinct chosen endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    /// Indices into [`ColoredMultigraph::edges`].
    pub edges: Vec<usize>,
    pub representatives: Vec<usize>,
}

impl Frame {
    pub fn size(&self) -> usize {
        self.edges.len()
    }
}

impl ColoredMultigraph {
    pub fn new(n_vertices: usize, edges: Vec<ColoredEdge>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for e in &edges {
            for x in [e.u, e.v] {
                if x >= n_vertices {
                    return Err(Error::VertexOutOfRange {
                        vertex: x,
                        limit: n_vertices,
                    });
                }
            }
            if e.u == e.v {
                return Err(Error::InvalidEdge(format!("loop at {}", e.u)));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v), e.color)) {
                return Err(Error::InvalidEdge(format!(
                    "pair ({}, {}) repeats colour {}",
                    e.u, e.v, e.color
                )));
            }
        }
        Ok(ColoredMultigraph { n_vertices, edges })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[ColoredEdge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn max_multiplicity(&self) -> usize {
        let mut counts = std::collections::BTreeMap::new();
        for e in &self.edges {
            *counts.entry((e.u.min(e.v), e.u.max(e.v))).or_insert(0usize) += 1;
        }
        counts.values().copied().max().unwrap_or(0)
    }

    pub fn max_color_class(&self) -> usize {
        let mut counts = std::collections::BTreeMap::new();
        for e in &self.edges {
            *counts.entry(e.color).or_insert(0usize) += 1;
        }
        counts.values().copied().max().unwrap_or(0)
    }

    /// Largest frame. Choosing an edge per colour plus distinct endpoints is
    /// a matching between colours and vertices (colour `c` joins `x` when some
    /// edge of colour `c` meets `x`), so a maximum bipartite matching gives
    /// the optimum directly.
    pub fn max_frame(&self) -> Frame {
        let colors: Vec<u64> = self
            .edges
            .iter()
            .map(|e| e.color)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let adj: Vec<Vec<usize>> = colors
            .iter()
            .map(|&c| {
                self.edges
                    .iter()
                    .filter(|e| e.color == c)
                    .flat_map(|e| [e.u, e.v])
                    .collect::<BTreeSet<_>>()
                    .into_iter()
                    .collect()
            })
            .collect();
        let matched = bipartite_matching(self.n_vertices, &adj);
        let mut frame = Frame {
            edges: Vec::new(),
            representatives: Vec::new(),
        };
        for (ci, x) in matched.iter().enumerate() {
            if let Some(x) = *x {
                let idx = self
                    .edges
                    .iter()
                    .position(|e| e.color == colors[ci] && (e.u == x || e.v == x))
                    .expect("matched colour has an edge at its representative");
                frame.edges.push(idx);
                frame.representatives.push(x);
            }
        }
        frame
    }
}

/// Largest `s` admitting an `s`-frame, with a witness.
pub fn max_frame(m: &ColoredMultigraph) -> Frame {
    m.max_frame()
}
