//! Search for an edge set `M` whose removal destroys at least `|M|/2`
//! `q`-dense pairs.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypergraph::{BipartiteGraph, Edge, Side, VertexPair};
use crate::patterns::{count_dense_pairs, dense_pairs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Step2Mode {
    /// Complete branch and bound; `None` means no qualifying set exists.
    Exhaustive,
    /// Star-shaped candidates only; may miss qualifying sets.
    Star,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Step2Policy {
    pub mode: Step2Mode,
    /// Node limit for one exhaustive search.
    pub budget: u64,
}

impl Step2Policy {
    pub const DEFAULT_BUDGET: u64 = 50_000_000;

    pub fn exhaustive() -> Self {
        Step2Policy {
            mode: Step2Mode::Exhaustive,
            budget: Self::DEFAULT_BUDGET,
        }
    }

    pub fn star() -> Self {
        Step2Policy {
            mode: Step2Mode::Star,
            budget: Self::DEFAULT_BUDGET,
        }
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }
}

/// Number of `q`-dense pairs destroyed by removing `m` from `g`.
pub fn dense_drop(g: &BipartiteGraph, q: usize, m: &[Edge]) -> usize {
    let before = count_dense_pairs(g, q);
    let mut h = g.clone();
    for &(l, r) in m {
        h.remove_edge(l, r);
    }
    before - count_dense_pairs(&h, q)
}

/// `M` qualifies when it is nonempty and `2 * drop >= |M|`.
pub fn qualifies(g: &BipartiteGraph, q: usize, m: &[Edge]) -> bool {
    !m.is_empty() && 2 * dense_drop(g, q, m) >= m.len()
}

pub fn step2_search(g: &BipartiteGraph, q: usize, policy: Step2Policy) -> Result<Option<Vec<Edge>>> {
    if q == 0 {
        return Err(Error::Parameter("q must be at least 1".into()));
    }
    match policy.mode {
        Step2Mode::Exhaustive => exhaustive(g, q, policy.budget),
        Step2Mode::Star => Ok(star(g, q)),
    }
}

const NO_TARGET: usize = usize::MAX;

/// Branch and bound over dense pairs to destroy.
///
/// Destroying a dense pair with codegree `c` needs `c - q + 1` of its
/// columns (common neighbours) cut, one edge per column. Every edge of a
/// minimum qualifying set serves some destroyed pair, so it is reachable by
/// taking the destroyed pairs in index order and, for each one still alive,
/// cutting exactly as many of its columns as needed with edges of that set.
/// Sizes are tried in increasing order and the whole level is explored, so
/// the result is the lexicographically least minimum-size qualifying set.
struct Exhaustive {
    g: BipartiteGraph,
    q: usize,
    targets: Vec<VertexPair>,
    codeg: Vec<usize>,
    left_index: Vec<usize>,
    right_index: Vec<usize>,
    killed: usize,
    chosen: Vec<Edge>,
    best: Option<Vec<Edge>>,
    nodes: u64,
    budget: u64,
}

fn exhaustive(g: &BipartiteGraph, q: usize, budget: u64) -> Result<Option<Vec<Edge>>> {
    let targets = dense_pairs(g, q);
    if targets.is_empty() {
        return Ok(None);
    }
    let (nl, nr) = (g.n_left(), g.n_right());
    let mut left_index = vec![NO_TARGET; nl * nl];
    let mut right_index = vec![NO_TARGET; nr * nr];
    for (i, p) in targets.iter().enumerate() {
        match p.side {
            Side::Left => {
                left_index[p.u * nl + p.v] = i;
                left_index[p.v * nl + p.u] = i;
            }
            Side::Right => {
                right_index[p.u * nr + p.v] = i;
                right_index[p.v * nr + p.u] = i;
            }
        }
    }
    let codeg = targets.iter().map(|&p| g.codegree(p)).collect();
    let max_size = g.edge_count().min(2 * targets.len());
    let mut search = Exhaustive {
        g: g.clone(),
        q,
        targets,
        codeg,
        left_index,
        right_index,
        killed: 0,
        chosen: Vec::new(),
        best: None,
        nodes: 0,
        budget,
    };
    for k in 1..=max_size {
        search.dfs(k, 0)?;
        if search.best.is_some() {
            return Ok(search.best);
        }
    }
    Ok(None)
}

impl Exhaustive {
    fn need(&self, t: usize) -> Option<usize> {
        (self.codeg[t] >= self.q).then(|| self.codeg[t] - self.q + 1)
    }

    /// Dense targets whose codegree changes when edge `(l, r)` toggles.
    fn affected(&self, (l, r): Edge) -> Vec<usize> {
        let (nl, nr) = (self.g.n_left(), self.g.n_right());
        let left = self
            .g
            .neighbors(Side::Right, r)
            .ones()
            .filter(|&y| y != l)
            .map(|y| self.left_index[l * nl + y]);
        let right = self
            .g
            .neighbors(Side::Left, l)
            .ones()
            .filter(|&w| w != r)
            .map(|w| self.right_index[r * nr + w]);
        left.chain(right).filter(|&t| t != NO_TARGET).collect()
    }

    fn cut(&mut self, e: Edge) {
        for t in self.affected(e) {
            self.lower(t);
        }
        self.g.remove_edge(e.0, e.1);
        self.chosen.push(e);
    }

    fn uncut(&mut self) {
        let e = self.chosen.pop().expect("cut before uncut");
        self.g.add_edge(e.0, e.1).expect("edge was present");
        for t in self.affected(e) {
            self.raise(t);
        }
    }

    fn lower(&mut self, t: usize) {
        if self.codeg[t] == self.q {
            self.killed += 1;
        }
        self.codeg[t] -= 1;
    }

    fn raise(&mut self, t: usize) {
        self.codeg[t] += 1;
        if self.codeg[t] == self.q {
            self.killed -= 1;
        }
    }

    fn dfs(&mut self, k: usize, from: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        let used = self.chosen.len();
        if used == k {
            if 2 * self.killed >= k {
                let mut m = self.chosen.clone();
                m.sort_unstable();
                if self.best.as_ref().is_none_or(|b| m < *b) {
                    self.best = Some(m);
                }
            }
            return Ok(());
        }
        let room = k - used;
        let reachable = (0..self.targets.len())
            .filter(|&t| self.need(t).is_some_and(|c| c <= room))
            .count();
        if 2 * (self.killed + reachable) < k {
            return Ok(());
        }
        for t in from..self.targets.len() {
            let Some(need) = self.need(t).filter(|&c| c <= room) else {
                continue;
            };
            let p = self.targets[t];
            let columns: Vec<usize> = self.g.common_neighbors(p).ones().collect();
            let mut pick: Vec<usize> = (0..need).collect();
            loop {
                for ends in 0u32..(1 << need) {
                    for (j, &c) in pick.iter().enumerate() {
                        let x = if ends >> j & 1 == 0 { p.u } else { p.v };
                        let e = match p.side {
                            Side::Left => (x, columns[c]),
                            Side::Right => (columns[c], x),
                        };
                        self.cut(e);
                    }
                    let res = self.dfs(k, t + 1);
                    for _ in 0..need {
                        self.uncut();
                    }
                    res?;
                }
                if !next_combination(&mut pick, columns.len()) {
                    break;
                }
            }
        }
        Ok(())
    }
}

/// Advances `pick` to the next `pick.len()`-subset of `0..n` in lex order.
fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if pick[i] < n - k + i {
            pick[i] += 1;
            for j in i + 1..k {
                pick[j] = pick[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Candidates shaped like stars: for a vertex `a` with dense partners `a_j`
/// and common neighbourhoods `B_j`, all edges from `a` to `B_J` for greedily
/// grown `J`, and for each `v` in some `B_j` the edges `v a_j` with
/// `v` in `B_j`. The first qualifying candidate is returned.
fn star(g: &BipartiteGraph, q: usize) -> Option<Vec<Edge>> {
    let edge = |side: Side, a: usize, b: usize| match side {
        Side::Left => (a, b),
        Side::Right => (b, a),
    };
    for side in Side::BOTH {
        for a in 0..g.side_len(side) {
            let partners: Vec<(usize, Vec<usize>)> = (0..g.side_len(side))
                .filter(|&x| x != a)
                .filter_map(|x| {
                    let p = VertexPair::new(side, a, x).expect("distinct");
                    let common: Vec<usize> = g.common_neighbors(p).ones().collect();
                    (common.len() >= q).then_some((x, common))
                })
                .collect();
            if partners.is_empty() {
                continue;
            }
            let mut union = std::collections::BTreeSet::new();
            let mut remaining: Vec<usize> = (0..partners.len()).collect();
            while !remaining.is_empty() {
                let (pos, _) = remaining
                    .iter()
                    .enumerate()
                    .min_by_key(|&(_, &j)| partners[j].1.iter().filter(|b| !union.contains(*b)).count())
                    .expect("nonempty");
                let j = remaining.remove(pos);
                union.extend(partners[j].1.iter().copied());
                let mut m: Vec<Edge> = union.iter().map(|&b| edge(side, a, b)).collect();
                m.sort_unstable();
                if qualifies(g, q, &m) {
                    return Some(m);
                }
            }
            for &v in &union {
                let mut m: Vec<Edge> = partners
                    .iter()
                    .filter(|(_, common)| common.contains(&v))
                    .map(|&(x, _)| edge(side.opposite(), v, x))
                    .collect();
                m.sort_unstable();
                if qualifies(g, q, &m) {
                    return Some(m);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_force(g: &BipartiteGraph, q: usize) -> Option<Vec<Edge>> {
        let edges: Vec<Edge> = g.edges().collect();
        let mut best: Option<Vec<Edge>> = None;
        for mask in 1u32..(1 << edges.len()) {
            let m: Vec<Edge> = (0..edges.len()).filter(|i| mask >> i & 1 == 1).map(|i| edges[i]).collect();
            if !qualifies(g, q, &m) {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => (m.len(), &m) < (b.len(), b),
            };
            if better {
                best = Some(m);
            }
        }
        best
    }

    #[test]
    fn path_has_no_candidate() {
        let g = BipartiteGraph::from_edges(2, 2, [(0, 0), (1, 0), (1, 1)]).unwrap();
        assert_eq!(step2_search(&g, 2, Step2Policy::exhaustive()).unwrap(), None);
    }

    #[test]
    fn complete_bipartite_examples() {
        for (a, b) in [(2, 2), (2, 3)] {
            let g = BipartiteGraph::complete(a, b);
            let m = step2_search(&g, 2, Step2Policy::exhaustive()).unwrap();
            assert_eq!(m, Some(vec![(0, 0)]));
            assert_eq!(m, brute_force(&g, 2));
        }
    }

    #[test]
    fn budget_is_reported() {
        let g = BipartiteGraph::complete(6, 6);
        let err = step2_search(&g, 2, Step2Policy::exhaustive().with_budget(10)).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { budget: 10 }));
    }

    #[test]
    fn star_candidates_qualify() {
        let g = BipartiteGraph::complete(3, 4);
        let m = step2_search(&g, 2, Step2Policy::star()).unwrap().unwrap();
        assert!(qualifies(&g, 2, &m));
    }

    #[test]
    fn next_combination_enumerates_all() {
        let mut pick = vec![0, 1];
        let mut seen = vec![pick.clone()];
        while next_combination(&mut pick, 4) {
            seen.push(pick.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen.last().unwrap(), &vec![2, 3]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn exhaustive_matches_subset_enumeration(
            nl in 1usize..5,
            nr in 1usize..5,
            bits in proptest::collection::vec(any::<bool>(), 16),
            q in 1usize..4,
        ) {
            let edges = (0..nl).flat_map(|l| (0..nr).map(move |r| (l, r)))
                .filter(|&(l, r)| bits[l * 4 + r]);
            let g = BipartiteGraph::from_edges(nl, nr, edges).unwrap();
            prop_assume!(g.edge_count() <= 12);
            let fast = step2_search(&g, q, Step2Policy::exhaustive()).unwrap();
            prop_assert_eq!(fast, brute_force(&g, q));
        }
    }
}
