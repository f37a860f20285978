//! Lower-bound constructions: star plus matching, shattered Steiner systems,
//! polarity graphs and the induced 2-matching 4-graph.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::hypergraph::{SimpleGraph, UniformHypergraph};

/// All `k`-subsets of `items`, in lexicographic order.
pub(crate) fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn go(items: &[usize], k: usize, start: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < k - current.len() {
                break;
            }
            current.push(items[i]);
            go(items, k, i + 1, current, out);
            current.pop();
        }
    }
    go(items, k, 0, &mut current, &mut out);
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Every `r`-set through vertex `0`, plus disjoint `r`-sets
/// `{1..r}, {r+1..2r}, ...` filling the remaining vertices greedily.
pub fn star_matching(n: usize, r: usize) -> Result<UniformHypergraph> {
    if r < 3 || n < 2 * r {
        return Err(Error::Parameter(format!("star_matching needs r >= 3 and n >= 2r, got n = {n}, r = {r}")));
    }
    let rest: Vec<usize> = (1..n).collect();
    let star = combinations(&rest, r - 1).into_iter().map(|mut e| {
        e.insert(0, 0);
        e
    });
    let matching = rest.chunks_exact(r).map(<[usize]>::to_vec);
    UniformHypergraph::from_edges(r, n, star.chain(matching))
}

/// A 2-design `S(n, k, 2)`: every pair of points lies in exactly one block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Design {
    n: usize,
    k: usize,
    blocks: Vec<Vec<usize>>,
}

impl Design {
    pub fn new(n: usize, k: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::Parameter(format!("block size {k} is below 2")));
        }
        let mut cover = vec![0u32; n * n];
        let mut sorted = Vec::with_capacity(blocks.len());
        for block in blocks {
            let mut b = block.clone();
            b.sort_unstable();
            b.dedup();
            if b.len() != k {
                return Err(Error::InvalidEdge(format!("block {block:?} does not have {k} distinct points")));
            }
            if let Some(&x) = b.iter().find(|&&x| x >= n) {
                return Err(Error::VertexOutOfRange { vertex: x, limit: n });
            }
            for (i, &x) in b.iter().enumerate() {
                for &y in &b[i + 1..] {
                    cover[x * n + y] += 1;
                }
            }
            sorted.push(b);
        }
        for x in 0..n {
            for y in x + 1..n {
                if cover[x * n + y] != 1 {
                    return Err(Error::Parameter(format!(
                        "pair {{{x},{y}}} lies in {} blocks, not exactly one",
                        cover[x * n + y]
                    )));
                }
            }
        }
        sorted.sort();
        Ok(Design { n, k, blocks: sorted })
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn block_size(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Number of blocks containing each pair, for pairs `x < y`.
    pub fn pair_coverage(&self) -> BTreeMap<(usize, usize), usize> {
        let mut cover = BTreeMap::new();
        for x in 0..self.n {
            for y in x + 1..self.n {
                cover.insert((x, y), 0);
            }
        }
        for b in &self.blocks {
            for (i, &x) in b.iter().enumerate() {
                for &y in &b[i + 1..] {
                    *cover.get_mut(&(x, y)).expect("pair in range") += 1;
                }
            }
        }
        cover
    }
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// The affine plane of prime order `p`: points `(x, y)` numbered `x p + y`,
/// lines `y = m x + b` and verticals `x = c`.
pub fn affine_plane(p: usize) -> Result<Design> {
    if !is_prime(p as u64) {
        return Err(Error::Parameter(format!("{p} is not prime")));
    }
    let point = |x: usize, y: usize| x * p + y;
    let mut blocks = Vec::with_capacity(p * (p + 1));
    for m in 0..p {
        for b in 0..p {
            blocks.push((0..p).map(|x| point(x, (m * x + b) % p)).collect());
        }
    }
    for c in 0..p {
        blocks.push((0..p).map(|y| point(c, y)).collect());
    }
    Design::new(p * p, p, blocks)
}

/// Replaces every block by all of its 3-subsets.
pub fn shatter_design(d: &Design) -> Result<UniformHypergraph> {
    let k = d.block_size();
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::Parameter(format!("block size must be odd and at least 3, got {k}")));
    }
    let edges = d.blocks().iter().flat_map(|b| combinations(b, 3));
    UniformHypergraph::from_edges(3, d.n_points(), edges)
}

/// Points of `PG(2, p)` as normalised vectors (first nonzero coordinate 1).
fn projective_points(p: usize) -> Vec<[usize; 3]> {
    let mut pts = Vec::with_capacity(p * p + p + 1);
    for a in 0..p {
        for b in 0..p {
            pts.push([1, a, b]);
        }
    }
    for a in 0..p {
        pts.push([0, 1, a]);
    }
    pts.push([0, 0, 1]);
    pts
}

/// Polarity graph on the points of `PG(2, p)`: `x ~ y` iff `x . y = 0`,
/// without loops.
pub fn polarity_graph(p: usize) -> Result<SimpleGraph> {
    if !is_prime(p as u64) {
        return Err(Error::Parameter(format!("{p} is not prime")));
    }
    let pts = projective_points(p);
    let mut g = SimpleGraph::new(pts.len());
    for (i, x) in pts.iter().enumerate() {
        for (j, y) in pts.iter().enumerate().skip(i + 1) {
            if (x[0] * y[0] + x[1] * y[1] + x[2] * y[2]) % p == 0 {
                g.add_edge(i, j)?;
            }
        }
    }
    Ok(g)
}

/// 4-sets `{a, b, c, d}` with `ab, cd` edges of `g` and none of
/// `ac, ad, bc, bd`.
pub fn induced_matching_4graph(g: &SimpleGraph) -> UniformHypergraph {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    let mut h = UniformHypergraph::new(4, g.n_vertices()).expect("4 >= 2");
    for (i, &(a, b)) in edges.iter().enumerate() {
        for &(c, d) in &edges[i + 1..] {
            if [c, d].iter().any(|&x| x == a || x == b) {
                continue;
            }
            if g.has_edge(a, c) || g.has_edge(a, d) || g.has_edge(b, c) || g.has_edge(b, d) {
                continue;
            }
            let mut e = vec![a, b, c, d];
            e.sort_unstable();
            h.insert(e).expect("valid 4-set");
        }
    }
    h
}

/// Pairs of hyperedges `a xyz`, `b xyz` of `h` with no `c` in `{x, y, z}`
/// adjacent in `g` to both `a` and `b`.
pub fn common_neighbour_violations(g: &SimpleGraph, h: &UniformHypergraph) -> Vec<(Vec<usize>, usize, usize)> {
    let mut apexes: BTreeMap<Vec<usize>, BTreeSet<usize>> = BTreeMap::new();
    for e in h.edges() {
        for skip in 0..e.len() {
            let rest: Vec<usize> = e.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
            apexes.entry(rest).or_default().insert(e[skip]);
        }
    }
    let mut bad = Vec::new();
    for (base, tops) in &apexes {
        let tops: Vec<usize> = tops.iter().copied().collect();
        for (i, &a) in tops.iter().enumerate() {
            for &b in &tops[i + 1..] {
                if !base.iter().any(|&c| g.has_edge(a, c) && g.has_edge(b, c)) {
                    bad.push((base.clone(), a, b));
                }
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn star_matching_sizes() {
        assert_eq!(star_matching(6, 3).unwrap().edge_count(), 11);
        assert_eq!(star_matching(8, 3).unwrap().edge_count(), 23);
        assert_eq!(star_matching(9, 4).unwrap().edge_count(), 58);
        assert!(star_matching(5, 3).is_err());
        assert!(star_matching(8, 2).is_err());
    }

    #[test]
    fn affine_planes() {
        for (p, blocks) in [(2, 6), (3, 12), (5, 30)] {
            let d = affine_plane(p).unwrap();
            assert_eq!(d.n_points(), p * p);
            assert_eq!(d.blocks().len(), blocks);
            assert!(d.pair_coverage().values().all(|&c| c == 1));
        }
        assert!(affine_plane(4).is_err());
        assert!(affine_plane(1).is_err());
    }

    #[test]
    fn shattering_sizes() {
        assert_eq!(shatter_design(&affine_plane(5).unwrap()).unwrap().edge_count(), 300);
        assert_eq!(shatter_design(&affine_plane(3).unwrap()).unwrap().edge_count(), 12);
        assert!(shatter_design(&affine_plane(2).unwrap()).is_err());
    }

    #[test]
    fn design_validation() {
        assert!(Design::new(3, 2, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).is_ok());
        assert!(Design::new(3, 2, vec![vec![0, 1], vec![0, 2]]).is_err());
        assert!(Design::new(3, 2, vec![vec![0, 1], vec![0, 1], vec![0, 2], vec![1, 2]]).is_err());
        assert!(Design::new(3, 2, vec![vec![0, 3]]).is_err());
    }

    #[test]
    fn polarity_graphs() {
        for (p, n, m) in [(2, 7, 9), (3, 13, 24)] {
            let g = polarity_graph(p).unwrap();
            assert_eq!((g.n_vertices(), g.edge_count()), (n, m));
        }
        for p in [2, 3, 5] {
            let g = polarity_graph(p).unwrap();
            let n = g.n_vertices();
            for u in 0..n {
                for v in u + 1..n {
                    assert!(g.codegree(u, v) <= 1);
                }
            }
        }
    }

    #[test]
    fn induced_matchings() {
        let cycle = SimpleGraph::from_edges(6, (0..6).map(|i| (i, (i + 1) % 6))).unwrap();
        assert_eq!(induced_matching_4graph(&cycle).edge_count(), 3);
        let k4 = SimpleGraph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(induced_matching_4graph(&k4).edge_count(), 0);
        let two = SimpleGraph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(induced_matching_4graph(&two).edge_count(), 1);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(25, 2), 300);
        assert_eq!(binomial(5, 3), 10);
        assert_eq!(binomial(2, 3), 0);
    }
}
