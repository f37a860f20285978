//! Brute-force reference detection, exact Turán numbers for tiny `n`, and
//! random pattern-free instances.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::constructions::combinations;
use crate::error::{Error, Result};
use crate::hypergraph::{TripartiteTripleSystem, UniformHypergraph};
use crate::patterns::{k2t3_through_edge, Embedding, Pattern, TripleLinks};

pub const MAX_PATTERN_VERTICES: usize = 14;
pub const MAX_HOST_VERTICES: usize = 128;

fn mask(e: &[usize]) -> u128 {
    e.iter().fold(0, |m, &v| m | 1u128 << v)
}

/// Vertex-by-vertex embedding search over injective maps.
///
/// Pattern vertices whose transposition is an automorphism form classes
/// that are mapped in increasing order. Each pattern edge is checked as soon
/// as its last vertex is placed.
struct VertexSearch<'a> {
    host_edges: HashSet<u128>,
    host_degree: Vec<usize>,
    n: usize,
    order: Vec<usize>,
    pattern_degree: Vec<usize>,
    /// Pattern edges to test once `order[i]` is placed.
    checks: Vec<Vec<&'a [usize]>>,
    /// Previous member of the twin class, if any.
    twin_before: Vec<Option<usize>>,
    map: Vec<usize>,
    used: Vec<bool>,
}

const UNMAPPED: usize = usize::MAX;

fn twin_classes(p: &UniformHypergraph) -> Vec<usize> {
    let k = p.n_vertices();
    let edges: HashSet<u128> = p.edges().map(mask).collect();
    let swap = |e: &[usize], u: usize, v: usize| {
        let swapped: Vec<usize> = e
            .iter()
            .map(|&x| if x == u { v } else if x == v { u } else { x })
            .collect();
        mask(&swapped)
    };
    let mut class: Vec<usize> = (0..k).collect();
    for u in 0..k {
        if class[u] != u {
            continue;
        }
        for v in u + 1..k {
            if class[v] == v && p.edges().all(|e| edges.contains(&swap(e, u, v))) {
                class[v] = u;
            }
        }
    }
    class
}

impl<'a> VertexSearch<'a> {
    fn new(host: &UniformHypergraph, pattern: &'a UniformHypergraph) -> Self {
        let k = pattern.n_vertices();
        let pattern_degree: Vec<usize> = (0..k).map(|v| pattern.degree(v)).collect();

        // place high-degree vertices first, then grow along edges
        let mut order = Vec::with_capacity(k);
        let mut placed = vec![false; k];
        while order.len() < k {
            let next = (0..k)
                .filter(|&v| !placed[v])
                .max_by_key(|&v| {
                    let links = pattern
                        .edges()
                        .filter(|e| e.contains(&v))
                        .map(|e| e.iter().filter(|&&x| placed[x]).count())
                        .sum::<usize>();
                    (links, pattern_degree[v], std::cmp::Reverse(v))
                })
                .expect("unplaced vertex");
            placed[next] = true;
            order.push(next);
        }
        let position: Vec<usize> = {
            let mut pos = vec![0; k];
            for (i, &v) in order.iter().enumerate() {
                pos[v] = i;
            }
            pos
        };
        let mut checks = vec![Vec::new(); k];
        for e in pattern.edges() {
            let last = e.iter().map(|&v| position[v]).max().expect("nonempty edge");
            checks[last].push(e);
        }
        let class = twin_classes(pattern);
        let mut twin_before = vec![None; k];
        for (i, &v) in order.iter().enumerate() {
            twin_before[v] = order[..i].iter().rev().copied().find(|&u| class[u] == class[v]);
        }
        VertexSearch {
            host_edges: host.edges().map(mask).collect(),
            host_degree: (0..host.n_vertices()).map(|v| host.degree(v)).collect(),
            n: host.n_vertices(),
            order,
            pattern_degree,
            checks,
            twin_before,
            map: vec![UNMAPPED; k],
            used: vec![false; host.n_vertices()],
        }
    }

    fn edges_hold(&self, i: usize) -> bool {
        self.checks[i].iter().all(|e| {
            let m = e.iter().fold(0u128, |m, &v| m | 1u128 << self.map[v]);
            self.host_edges.contains(&m)
        })
    }

    fn place(&mut self, v: usize, h: usize) {
        self.map[v] = h;
        self.used[h] = true;
    }

    fn unplace(&mut self, v: usize) {
        self.used[self.map[v]] = false;
        self.map[v] = UNMAPPED;
    }

    fn search(&mut self, i: usize) -> bool {
        if i == self.order.len() {
            return true;
        }
        let v = self.order[i];
        let lo = self.twin_before[v].map_or(0, |u| self.map[u] + 1);
        for h in lo..self.n {
            if self.used[h] || self.host_degree[h] < self.pattern_degree[v] {
                continue;
            }
            self.place(v, h);
            if self.edges_hold(i) && self.search(i + 1) {
                return true;
            }
            self.unplace(v);
        }
        false
    }

    /// Searches with the vertices of pattern edge `f` mapped onto host edge `e`.
    fn search_anchored(&mut self, f: &[usize], e: &[usize]) -> bool {
        let r = f.len();
        let mut perm: Vec<usize> = (0..r).collect();
        loop {
            let ok = (0..r).all(|j| self.host_degree[e[perm[j]]] >= self.pattern_degree[f[j]]);
            if ok {
                for j in 0..r {
                    self.place(f[j], e[perm[j]]);
                }
                if self.search_rest(0) {
                    return true;
                }
                for &v in f {
                    self.unplace(v);
                }
            }
            if !next_permutation(&mut perm) {
                return false;
            }
        }
    }

    /// Like `search`, but skips vertices already placed and checks every
    /// edge whose vertices are all placed (twin ordering is not applied).
    fn search_rest(&mut self, i: usize) -> bool {
        if i == self.order.len() {
            return true;
        }
        let v = self.order[i];
        if self.map[v] != UNMAPPED {
            return self.placed_edges_hold(i) && self.search_rest(i + 1);
        }
        for h in 0..self.n {
            if self.used[h] || self.host_degree[h] < self.pattern_degree[v] {
                continue;
            }
            self.place(v, h);
            if self.placed_edges_hold(i) && self.search_rest(i + 1) {
                return true;
            }
            self.unplace(v);
        }
        false
    }

    fn placed_edges_hold(&self, i: usize) -> bool {
        self.checks[i].iter().all(|e| {
            if e.iter().any(|&v| self.map[v] == UNMAPPED) {
                return true;
            }
            let m = e.iter().fold(0u128, |m, &v| m | 1u128 << self.map[v]);
            self.host_edges.contains(&m)
        })
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

fn check_sizes(host: &UniformHypergraph, pattern: &UniformHypergraph) -> Result<()> {
    if host.uniformity() != pattern.uniformity() {
        return Err(Error::UniformityMismatch {
            host: host.uniformity(),
            pattern: pattern.uniformity(),
        });
    }
    if pattern.n_vertices() > MAX_PATTERN_VERTICES {
        return Err(Error::SizeLimit(format!(
            "pattern has {} vertices, limit {MAX_PATTERN_VERTICES}",
            pattern.n_vertices()
        )));
    }
    if host.n_vertices() > MAX_HOST_VERTICES {
        return Err(Error::SizeLimit(format!(
            "host has {} vertices, limit {MAX_HOST_VERTICES}",
            host.n_vertices()
        )));
    }
    Ok(())
}

/// Reference embedding search for an arbitrary pattern hypergraph.
pub fn brute_embedding(host: &UniformHypergraph, pattern: &UniformHypergraph) -> Result<Option<Embedding>> {
    check_sizes(host, pattern)?;
    if pattern.n_vertices() > host.n_vertices() || pattern.edge_count() > host.edge_count() {
        return Ok(None);
    }
    let mut s = VertexSearch::new(host, pattern);
    Ok(s.search(0).then(|| s.map.clone()))
}

/// Reference answer for [`crate::patterns::contains_copy`].
pub fn brute_contains(host: &UniformHypergraph, pattern: &Pattern) -> Result<bool> {
    let p = pattern.to_hypergraph()?;
    Ok(brute_embedding(host, &p)?.is_some())
}

/// Whether `host` has a copy of `pattern` using edge `e` (which must be in `host`).
fn copy_through(host: &UniformHypergraph, pattern: &UniformHypergraph, e: &[usize]) -> bool {
    let mut s = VertexSearch::new(host, pattern);
    pattern.edges().any(|f| s.search_anchored(f, e))
}

#[derive(Clone, Debug)]
pub struct ExactResult {
    pub value: usize,
    pub witness: UniformHypergraph,
    pub nodes: u64,
}

/// Largest pattern-free `r`-graph on `n` vertices by branch and bound over
/// the `r`-sets in lexicographic order (include before exclude). A branch is
/// cut when its size plus all remaining candidates cannot beat the
/// incumbent. When the pattern has two or more edges the first candidate is
/// forced in, since any nonempty extremal system can be relabelled to
/// contain `{0, ..., r-1}`.
pub fn exact_turan(n: usize, pattern: &Pattern, budget: u64) -> Result<ExactResult> {
    let p = pattern.to_hypergraph()?;
    let r = p.uniformity();
    let host = UniformHypergraph::new(r, n)?;
    check_sizes(&host, &p)?;
    let candidates = combinations(&(0..n).collect::<Vec<_>>(), r);
    let mut search = Exact {
        pattern: &p,
        candidates: &candidates,
        current: host.clone(),
        best: host,
        nodes: 0,
        budget,
    };
    let forced = p.edge_count() >= 2 && !candidates.is_empty();
    if forced {
        search.current.insert(candidates[0].clone())?;
        search.best = search.current.clone();
    }
    let start = usize::from(forced);
    search.dfs(start).map_err(|_| Error::ExactBudgetExceeded {
        budget,
        best_value: search.best.edge_count(),
        best_edges: search.best.edges().map(<[usize]>::to_vec).collect(),
    })?;
    Ok(ExactResult {
        value: search.best.edge_count(),
        witness: search.best,
        nodes: search.nodes,
    })
}

struct Exact<'a> {
    pattern: &'a UniformHypergraph,
    candidates: &'a [Vec<usize>],
    current: UniformHypergraph,
    best: UniformHypergraph,
    nodes: u64,
    budget: u64,
}

impl Exact<'_> {
    fn dfs(&mut self, idx: usize) -> std::result::Result<(), ()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(());
        }
        let count = self.current.edge_count();
        if count + (self.candidates.len() - idx) <= self.best.edge_count() {
            return Ok(());
        }
        if idx == self.candidates.len() {
            self.best = self.current.clone();
            return Ok(());
        }
        let e = &self.candidates[idx];
        self.current.insert(e.clone()).expect("fresh candidate");
        if !copy_through(&self.current, self.pattern, e) {
            self.dfs(idx + 1)?;
        }
        self.current.remove(e);
        self.dfs(idx + 1)
    }
}

/// `(15 t ceil(log2 t) + 40 t) n^2`.
pub fn turan_upper_bound(t: u64, n: u64) -> u64 {
    let log = if t <= 1 { 0 } else { u64::from(64 - (t - 1).leading_zeros()) };
    (15 * t * log + 40 * t) * n * n
}

/// Greedy `K_{2,t}^{(3)}`-free tripartite system: all `n^3` transversal
/// triples in seeded random order, each kept unless it completes a copy.
/// Small outputs are re-checked with [`brute_embedding`].
pub fn random_free_instance(n: usize, t: usize, seed: u64) -> Result<TripartiteTripleSystem> {
    if n == 0 || t < 2 {
        return Err(Error::Parameter(format!("need n >= 1 and t >= 2, got n = {n}, t = {t}")));
    }
    let mut triples: Vec<[usize; 3]> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).map(move |c| [a, b, c])))
        .collect();
    triples.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let mut system = TripartiteTripleSystem::new(n);
    let mut links = TripleLinks::new(&UniformHypergraph::new(3, 3 * n)?);
    for [a, b, c] in triples {
        let e = [a, n + b, 2 * n + c];
        links.insert(&e);
        if k2t3_through_edge(&links, &e, t).is_some() {
            links.remove(&e);
        } else {
            system.insert_local([a, b, c])?;
        }
    }
    if 2 * t + 2 <= MAX_PATTERN_VERTICES && 3 * n <= MAX_HOST_VERTICES {
        let pattern = Pattern::k2t3(t);
        if let Some(witness) = brute_embedding(&system.to_hypergraph(), &pattern.to_hypergraph()?)? {
            return Err(Error::NotFree {
                pattern: pattern.to_string(),
                witness,
            });
        }
    }
    Ok(system)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::star_matching;
    use crate::patterns::k_st;

    #[test]
    fn brute_examples() {
        let k22 = k_st(2, 2, 3).unwrap();
        assert!(brute_contains(&k22, &Pattern::k2t3(2)).unwrap());
        assert!(!brute_contains(&star_matching(7, 3).unwrap(), &Pattern::k2t3(2)).unwrap());
        let empty = UniformHypergraph::new(3, 10).unwrap();
        assert!(!brute_contains(&empty, &Pattern::k2t3(2)).unwrap());
        assert!(!brute_contains(&empty, &Pattern::K12q { q: 1 }).unwrap());
    }

    #[test]
    fn brute_size_limit() {
        let host = UniformHypergraph::new(3, 20).unwrap();
        assert!(matches!(
            brute_contains(&host, &Pattern::k2t3(7)),
            Err(Error::SizeLimit(_))
        ));
    }

    #[test]
    fn twin_classes_of_k22() {
        // a, b are twins; x_i is paired with y_i, so no other transpositions
        let class = twin_classes(&k_st(2, 2, 3).unwrap());
        assert_eq!(class, vec![0, 0, 2, 3, 2, 3]);
    }

    #[test]
    fn exact_small_values() {
        let p = Pattern::k2t3(2);
        assert_eq!(exact_turan(4, &p, u64::MAX).unwrap().value, 4);
        assert_eq!(exact_turan(5, &p, u64::MAX).unwrap().value, 10);
    }

    #[test]
    fn exact_budget_reports_incumbent() {
        let err = exact_turan(6, &Pattern::k2t3(2), 5).unwrap_err();
        assert!(matches!(err, Error::ExactBudgetExceeded { budget: 5, .. }));
    }

    #[test]
    fn random_instance_examples() {
        let one = random_free_instance(1, 2, 9).unwrap();
        assert_eq!(one.edge_count(), 1);
        assert_eq!(random_free_instance(3, 5, 4).unwrap().edge_count(), 27);
        assert!(random_free_instance(0, 2, 0).is_err());
    }

    #[test]
    fn permutations_cover_all_orders() {
        let mut a = vec![0, 1, 2];
        let mut count = 1;
        while next_permutation(&mut a) {
            count += 1;
        }
        assert_eq!(count, 6);
    }
}
