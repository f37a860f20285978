//! The `P(q)` edge-deletion procedure that makes a bipartite graph
//! `K_{2,q}`-free, with its frozen `F`/`D`/`S` bookkeeping and ledger.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{BipartiteGraph, Edge, Side, SimpleGraph, UniformHypergraph, VertexPair};
use crate::patterns::{contains_copy, count_dense_pairs, dense_pairs_on, find_broom, spanned_by_dense, Pattern};
use crate::step2::{step2_search, Step2Mode, Step2Policy};

/// Frozen data of a pair that became sparse during the run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRecord {
    /// `S(p)`: vertices of the opposite side covered by dense pairs inside `N(p)`.
    pub s: Vec<usize>,
    /// `F(p)`: edges from the two members of `p` to `S(p)`.
    pub f: Vec<Edge>,
    /// `D(p)`: spanning forest of the dense pairs inside `S(p)`, as vertex pairs.
    pub d: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Witness {
    /// Same-side pairs whose `F` contains the deleted edge.
    Pairs(Vec<VertexPair>),
    /// The whole set removed by the second step.
    Set(Vec<Edge>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deletion {
    pub edge: Edge,
    pub step: u8,
    pub witnesses: Witness,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SparsifyLedger {
    pub alpha: usize,
    pub beta: usize,
    pub m0: usize,
    pub deletions: Vec<Deletion>,
}

#[derive(Clone, Debug)]
pub struct SparsifyOutcome {
    pub graph: BipartiteGraph,
    pub records: BTreeMap<VertexPair, PairRecord>,
    pub ledger: SparsifyLedger,
    /// Pairs in the order their records were assigned.
    pub assignments: Vec<VertexPair>,
    pub passes: usize,
}

impl SparsifyOutcome {
    /// `sum_p |F(p)|` over both sides.
    pub fn total_f(&self) -> usize {
        self.records.values().map(|r| r.f.len()).sum()
    }

    /// The ledger identities every run must satisfy, as `(name, holds)`.
    pub fn ledger_laws(&self, input: &BipartiteGraph, q: usize) -> Vec<(&'static str, bool)> {
        let l = &self.ledger;
        vec![
            (
                "deletions",
                l.alpha + l.beta == input.edge_count() - self.graph.edge_count(),
            ),
            ("step2_paid", l.beta <= 2 * l.m0),
            ("step1_paid", q * l.alpha <= 2 * self.total_f()),
            (
                "records",
                l.deletions.len() == l.alpha + l.beta
                    && l.deletions.iter().filter(|d| d.step == 1).count() == l.alpha,
            ),
        ]
    }
}

fn check_q(q: usize) -> Result<()> {
    if q < 2 || q % 2 == 1 {
        return Err(Error::Parameter(format!("q must be even and at least 2, got {q}")));
    }
    Ok(())
}

fn oriented(side: Side, x: usize, s: usize) -> Edge {
    match side {
        Side::Left => (x, s),
        Side::Right => (s, x),
    }
}

fn pair_record(p: VertexPair, common: &fixedbitset::FixedBitSet, opposite: &[VertexPair]) -> PairRecord {
    let s: Vec<usize> = spanned_by_dense(common, opposite).into_iter().collect();
    let mut f: Vec<Edge> = s
        .iter()
        .flat_map(|&x| [oriented(p.side, p.u, x), oriented(p.side, p.v, x)])
        .collect();
    f.sort_unstable();
    let index: HashMap<usize, usize> = s.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut parent: Vec<usize> = (0..s.len()).collect();
    fn root(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut d = Vec::new();
    for dp in opposite {
        if let (Some(&a), Some(&b)) = (index.get(&dp.u), index.get(&dp.v)) {
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            if ra != rb {
                parent[ra] = rb;
                d.push((dp.u, dp.v));
            }
        }
    }
    PairRecord { s, f, d }
}

/// Per-side counts of `F`-sets containing each edge still present in `g`.
fn f_counts(g: &BipartiteGraph, records: &BTreeMap<VertexPair, PairRecord>) -> [BTreeMap<Edge, Vec<VertexPair>>; 2] {
    let mut counts = [BTreeMap::new(), BTreeMap::new()];
    for (p, rec) in records {
        let side = usize::from(p.side == Side::Right);
        for &e in &rec.f {
            if g.has_edge(e.0, e.1) {
                counts[side].entry(e).or_insert_with(Vec::new).push(*p);
            }
        }
    }
    counts
}

/// Runs `P(q)` to its fixed point.
///
/// Each pass first freezes `S`, `F`, `D` for pairs that are newly sparse and
/// deletes the least edge lying in at least `q/2` frozen `F`-sets of one
/// side, then asks the policy for a set `M` with `2 * drop >= |M|` and
/// deletes it. The loop stops after a pass that deletes nothing.
pub fn sparsify(g: &BipartiteGraph, q: usize, policy: Step2Policy) -> Result<SparsifyOutcome> {
    check_q(q)?;
    let mut work = g.clone();
    let mut records: BTreeMap<VertexPair, PairRecord> = BTreeMap::new();
    let mut assignments = Vec::new();
    let mut ledger = SparsifyLedger {
        m0: count_dense_pairs(g, q),
        ..SparsifyLedger::default()
    };
    let mut passes = 0;
    loop {
        passes += 1;
        let mut changed = false;

        let dense = [dense_pairs_on(&work, q, Side::Left), dense_pairs_on(&work, q, Side::Right)];
        for p in work.pairs() {
            if records.contains_key(&p) {
                continue;
            }
            let common = work.common_neighbors(p);
            if common.count_ones(..) >= q {
                continue;
            }
            let opposite = &dense[usize::from(p.side == Side::Left)];
            if !opposite.iter().any(|d| common.contains(d.u) && common.contains(d.v)) {
                continue;
            }
            records.insert(p, pair_record(p, &common, opposite));
            assignments.push(p);
        }

        let counts = f_counts(&work, &records);
        let threshold = q / 2;
        let trigger = counts
            .iter()
            .flat_map(|side| side.iter().filter(|(_, ps)| ps.len() >= threshold).map(|(e, _)| *e))
            .min();
        if let Some(e) = trigger {
            let witnesses: Vec<VertexPair> = counts
                .iter()
                .filter_map(|side| side.get(&e).filter(|ps| ps.len() >= threshold))
                .flatten()
                .copied()
                .collect();
            work.remove_edge(e.0, e.1);
            ledger.alpha += 1;
            ledger.deletions.push(Deletion {
                edge: e,
                step: 1,
                witnesses: Witness::Pairs(witnesses),
            });
            changed = true;
        }

        if let Some(m) = step2_search(&work, q, policy)? {
            for &e in &m {
                work.remove_edge(e.0, e.1);
                ledger.deletions.push(Deletion {
                    edge: e,
                    step: 2,
                    witnesses: Witness::Set(m.clone()),
                });
            }
            ledger.beta += m.len();
            changed = true;
        }

        if !changed {
            break;
        }
    }
    Ok(SparsifyOutcome {
        graph: work,
        records,
        ledger,
        assignments,
        passes,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClauseResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TerminalReport {
    pub clauses: Vec<ClauseResult>,
}

impl TerminalReport {
    pub fn all_pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }

    pub fn clause(&self, name: &str) -> Option<&ClauseResult> {
        self.clauses.iter().find(|c| c.name == name)
    }
}

/// The bipartite graph as a simple graph: left `i` is `i`, right `j` is `nL + j`.
pub fn to_simple_graph(g: &BipartiteGraph) -> SimpleGraph {
    SimpleGraph::from_edges(
        g.n_left() + g.n_right(),
        g.edges().map(|(l, r)| (l, g.n_left() + r)),
    )
    .expect("bipartite edges are simple")
}

/// Checks the terminal properties of a run on `original` that produced
/// `output` and `records`.
pub fn verify_terminal(
    original: &BipartiteGraph,
    output: &BipartiteGraph,
    q: usize,
    records: &BTreeMap<VertexPair, PairRecord>,
    mode: Step2Mode,
) -> Result<TerminalReport> {
    check_q(q)?;
    let mut clauses = Vec::new();

    let counts = f_counts(output, records);
    let worst = counts
        .iter()
        .flat_map(|side| side.iter().map(|(e, ps)| (ps.len(), *e)))
        .max();
    clauses.push(ClauseResult {
        name: "edge_in_few_f_sets",
        pass: worst.is_none_or(|(c, _)| c <= q / 2),
        detail: match worst {
            Some((c, e)) => format!("max per-side count {c} at edge {e:?}"),
            None => "no surviving edge in any F-set".into(),
        },
    });

    let bad_shape: Vec<String> = records
        .iter()
        .filter(|(_, r)| {
            let (s, f, d) = (r.s.len(), r.f.len(), r.d.len());
            !(f == 2 * s && s < q && d <= s && 2 * d >= s && f <= 4 * d && d < q)
        })
        .map(|(p, r)| format!("{p}: |S|={} |F|={} |D|={}", r.s.len(), r.f.len(), r.d.len()))
        .collect();
    clauses.push(ClauseResult {
        name: "record_sizes",
        pass: bad_shape.is_empty(),
        detail: bad_shape.join("; "),
    });

    let too_big: Vec<String> = records
        .iter()
        .filter(|(p, r)| original.check_pair(**p).is_err() || r.f.len() > 2 * original.codegree(**p))
        .map(|(p, r)| format!("{p}: |F|={}", r.f.len()))
        .collect();
    clauses.push(ClauseResult {
        name: "f_within_original_neighbourhood",
        pass: too_big.is_empty(),
        detail: too_big.join("; "),
    });

    let broom = find_broom(output, q, q / 2)?;
    clauses.push(ClauseResult {
        name: "no_large_broom",
        pass: broom.is_none(),
        detail: broom.map(|b| format!("{b:?}")).unwrap_or_default(),
    });

    if mode == Step2Mode::Exhaustive {
        let h: UniformHypergraph = to_simple_graph(output).to_hypergraph();
        let copy = contains_copy(&h, &Pattern::K2qGraph { q })?;
        clauses.push(ClauseResult {
            name: "k2q_free",
            pass: copy.is_none(),
            detail: copy.map(|w| format!("copy at {w:?}")).unwrap_or_default(),
        });
    }

    Ok(TerminalReport { clauses })
}

/// `|U B_j| > 2|J|` for every nonempty family `J` of dense partners of every
/// vertex, by enumeration (partners are capped at 16 per vertex).
pub fn hall_condition_holds(g: &BipartiteGraph, q: usize) -> bool {
    for side in Side::BOTH {
        for a in 0..g.side_len(side) {
            let commons: Vec<BTreeSet<usize>> = (0..g.side_len(side))
                .filter(|&x| x != a)
                .map(|x| g.common_neighbors(VertexPair { side, u: a.min(x), v: a.max(x) }))
                .filter(|c| c.count_ones(..) >= q)
                .map(|c| c.ones().collect())
                .collect();
            let k = commons.len().min(16);
            for mask in 1u32..(1 << k) {
                let mut union = BTreeSet::new();
                for (j, c) in commons.iter().enumerate().take(k) {
                    if mask >> j & 1 == 1 {
                        union.extend(c.iter().copied());
                    }
                }
                if union.len() <= 2 * mask.count_ones() as usize {
                    return false;
                }
            }
        }
    }
    true
}
