//! Tripartite extraction, the `q`-halving schedule, `P(q)` applied to every
//! link graph of a tripartite 3-graph, and the deletion-bound checks.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::{link_graphs, Projection, TripartiteTripleSystem, UniformHypergraph, VertexPair};
use crate::patterns::{contains_copy, dense_pairs, Pattern};
use crate::sparsify::sparsify;
use crate::step2::Step2Policy;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSchedule {
    pub t: u64,
    pub qs: Vec<u64>,
}

impl QSchedule {
    /// Index of the last level.
    pub fn k(&self) -> usize {
        self.qs.len() - 1
    }
}

/// `q_0` is the largest power of two not above `t^2`; halve while the half
/// is still at least `t`.
pub fn q_schedule(t: u64) -> Result<QSchedule> {
    if !(2..=u32::MAX as u64).contains(&t) {
        return Err(Error::Parameter(format!("schedule needs 2 <= t < 2^32, got {t}")));
    }
    let square = t * t;
    let mut q = 1u64 << (63 - square.leading_zeros());
    let mut qs = vec![q];
    while q / 2 >= t {
        q /= 2;
        qs.push(q);
    }
    Ok(QSchedule { t, qs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extraction {
    /// Original vertices of parts `A`, `B`, `C`, ascending; local index is the position.
    pub parts: [Vec<usize>; 3],
    pub system: TripartiteTripleSystem,
    pub attempts: u64,
}

const MAX_ATTEMPTS: u64 = 1_000_000;

/// Samples equipartitions from `seed` until the transversal triples number
/// at least `ceil(2|H|/9)`.
pub fn extract_tripartite(h: &UniformHypergraph, seed: u64) -> Result<Extraction> {
    if h.uniformity() != 3 {
        return Err(Error::UniformityMismatch {
            host: h.uniformity(),
            pattern: 3,
        });
    }
    let total = h.n_vertices();
    if !total.is_multiple_of(3) {
        return Err(Error::Parameter(format!(
            "vertex count {total} is not divisible by 3"
        )));
    }
    let n = total / 3;
    let need = (2 * h.edge_count()).div_ceil(9);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..total).collect();
    for attempts in 1..=MAX_ATTEMPTS {
        order.shuffle(&mut rng);
        let mut parts: [Vec<usize>; 3] = [
            order[..n].to_vec(),
            order[n..2 * n].to_vec(),
            order[2 * n..].to_vec(),
        ];
        let mut place = vec![(0usize, 0usize); total];
        for (pi, part) in parts.iter_mut().enumerate() {
            part.sort_unstable();
            for (local, &v) in part.iter().enumerate() {
                place[v] = (pi, local);
            }
        }
        let mut system = TripartiteTripleSystem::new(n);
        for e in h.edges() {
            let mut local = [usize::MAX; 3];
            for &v in e {
                let (pi, li) = place[v];
                local[pi] = li;
            }
            if local.iter().all(|&x| x != usize::MAX) {
                system.insert_local(local)?;
            }
        }
        if system.edge_count() >= need {
            return Ok(Extraction {
                parts,
                system,
                attempts,
            });
        }
    }
    Err(Error::Parameter(format!(
        "no good equipartition in {MAX_ATTEMPTS} attempts"
    )))
}

/// Counters of one `P(q)` run on one link graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkRecord {
    pub i: usize,
    pub alpha: usize,
    pub beta: usize,
    /// Dense pairs of the input link graph.
    pub m: usize,
    /// `sum_p |F'(p)|`.
    pub sum_f: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionLedger {
    pub projection: Projection,
    pub links: Vec<LinkRecord>,
    /// Largest `sum_i |F'_i(p)|` over same-side pairs `p`.
    pub max_pair_f: usize,
    /// Largest number of link graphs in which one pair is dense.
    pub max_dense_multiplicity: usize,
    /// Whether every output link graph is `K_{2,q}`-free.
    pub outputs_free: bool,
}

impl ProjectionLedger {
    pub fn alpha(&self) -> usize {
        self.links.iter().map(|l| l.alpha).sum()
    }

    pub fn beta(&self) -> usize {
        self.links.iter().map(|l| l.beta).sum()
    }

    pub fn m(&self) -> usize {
        self.links.iter().map(|l| l.m).sum()
    }

    pub fn sum_f(&self) -> usize {
        self.links.iter().map(|l| l.sum_f).sum()
    }

    pub fn deleted(&self) -> usize {
        self.alpha() + self.beta()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelLedger {
    pub q: u64,
    pub size_before: usize,
    pub size: usize,
    /// In the order `AB`, `BC`, `AC`.
    pub projections: Vec<ProjectionLedger>,
    /// Post-hoc `K_{1,2,q}`-freeness of the level.
    pub k12q_free: bool,
    /// The level is a subset of its input.
    pub nested: bool,
}

/// Runs `P(q)` on all `3n` link graphs and keeps the triples whose three
/// projections all survive.
pub fn apply_pq(h: &TripartiteTripleSystem, q: u64, policy: Step2Policy) -> Result<(TripartiteTripleSystem, LevelLedger)> {
    let qs = usize::try_from(q).map_err(|_| Error::Parameter(format!("q = {q} too large")))?;
    if qs < 2 || qs % 2 == 1 {
        return Err(Error::Parameter(format!("q must be even and at least 2, got {q}")));
    }
    let n = h.part_size();
    let jobs: Vec<(usize, usize, crate::hypergraph::BipartiteGraph)> = Projection::ALL
        .iter()
        .enumerate()
        .flat_map(|(pi, &proj)| link_graphs(h, proj).into_iter().enumerate().map(move |(i, g)| (pi, i, g)))
        .collect();
    let results: Vec<_> = jobs
        .par_iter()
        .map(|(_, _, g)| sparsify(g, qs, policy))
        .collect::<Result<Vec<_>>>()?;

    let mut outputs: [Vec<_>; 3] = std::array::from_fn(|_| Vec::with_capacity(n));
    let mut projections = Vec::with_capacity(3);
    for (pi, &proj) in Projection::ALL.iter().enumerate() {
        let mut pair_f: HashMap<VertexPair, usize> = HashMap::new();
        let mut dense_count: HashMap<VertexPair, usize> = HashMap::new();
        let mut links = Vec::with_capacity(n);
        let mut outputs_free = true;
        for ((_, i, g), out) in jobs.iter().zip(&results).filter(|((p, _, _), _)| *p == pi) {
            for d in dense_pairs(g, qs) {
                *dense_count.entry(d).or_default() += 1;
            }
            for (p, rec) in &out.records {
                *pair_f.entry(*p).or_default() += rec.f.len();
            }
            if !dense_pairs(&out.graph, qs).is_empty() {
                outputs_free = false;
            }
            links.push(LinkRecord {
                i: *i,
                alpha: out.ledger.alpha,
                beta: out.ledger.beta,
                m: out.ledger.m0,
                sum_f: out.total_f(),
            });
            outputs[pi].push(&out.graph);
        }
        projections.push(ProjectionLedger {
            projection: proj,
            links,
            max_pair_f: pair_f.values().copied().max().unwrap_or(0),
            max_dense_multiplicity: dense_count.values().copied().max().unwrap_or(0),
            outputs_free,
        });
    }

    let kept = h.filtered(|[a, b, c]| {
        outputs[0][c].has_edge(a, b) && outputs[1][a].has_edge(b, c) && outputs[2][b].has_edge(a, c)
    });
    let k12q_free = contains_copy(&kept.to_hypergraph(), &Pattern::K12q { q: qs })?.is_none();
    let ledger = LevelLedger {
        q,
        size_before: h.edge_count(),
        size: kept.edge_count(),
        projections,
        k12q_free,
        nested: kept.is_subset_of(h),
    };
    Ok((kept, ledger))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineLedger {
    pub t: u64,
    pub n: usize,
    pub input_size: usize,
    pub schedule: Vec<u64>,
    pub levels: Vec<LevelLedger>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub level: usize,
    pub pass: bool,
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub schedule: QSchedule,
    pub levels: Vec<TripartiteTripleSystem>,
    pub ledger: PipelineLedger,
    pub checks: Vec<Check>,
}

impl PipelineRun {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Rejects inputs containing `K_{2,t}^{(3)}`, then builds `H_0, ..., H_k`
/// down the schedule and evaluates every bound.
pub fn run_pipeline(h: &TripartiteTripleSystem, t: u64, policy: Step2Policy) -> Result<PipelineRun> {
    let schedule = q_schedule(t)?;
    let t_usize = usize::try_from(t).map_err(|_| Error::Parameter(format!("t = {t} too large")))?;
    if let Some(witness) = contains_copy(&h.to_hypergraph(), &Pattern::k2t3(t_usize))? {
        return Err(Error::NotFree {
            pattern: Pattern::k2t3(t_usize).to_string(),
            witness,
        });
    }
    let mut levels = Vec::with_capacity(schedule.qs.len());
    let mut ledgers = Vec::with_capacity(schedule.qs.len());
    let mut current = h.clone();
    for &q in &schedule.qs {
        let (next, ledger) = apply_pq(&current, q, policy)?;
        levels.push(next.clone());
        ledgers.push(ledger);
        current = next;
    }
    let ledger = PipelineLedger {
        t,
        n: h.part_size(),
        input_size: h.edge_count(),
        schedule: schedule.qs.clone(),
        levels: ledgers,
    };
    let checks = check_bounds(&ledger);
    Ok(PipelineRun {
        schedule,
        levels,
        ledger,
        checks,
    })
}

fn ceil_log2(t: u64) -> u64 {
    if t <= 1 {
        0
    } else {
        u64::from(64 - (t - 1).leading_zeros())
    }
}

/// Evaluates the deletion bounds on recorded counts with exact integers.
pub fn check_bounds(ledger: &PipelineLedger) -> Vec<Check> {
    let t = ledger.t;
    let n = ledger.n as u64;
    let tn2 = t * n * n;
    let pairs = n * n.saturating_sub(1);
    let mut checks = Vec::new();
    let mut push = |name: String, level: usize, lhs: u64, rhs: u64, pass: bool| {
        checks.push(Check {
            name,
            level,
            pass,
            lhs,
            rhs,
        });
    };
    for (j, lvl) in ledger.levels.iter().enumerate() {
        let removed = lvl.size_before.saturating_sub(lvl.size) as u64;
        if j == 0 {
            push("first_level_drop".into(), j, removed, 78 * tn2, removed < 78 * tn2);
        } else {
            push("level_drop".into(), j, removed, 30 * tn2, removed < 30 * tn2);
        }
        let link_deleted: u64 = lvl.projections.iter().map(|p| p.deleted() as u64).sum();
        push("edge_accounting".into(), j, removed, link_deleted, removed <= link_deleted);
        for p in &lvl.projections {
            let tag = p.projection.name();
            let (beta, m, f, del) = (p.beta() as u64, p.m() as u64, p.sum_f() as u64, p.deleted() as u64);
            push(format!("step2_deletions:{tag}"), j, beta, 2 * tn2, beta < 2 * tn2);
            push(format!("step2_paid:{tag}"), j, beta, 2 * m, beta <= 2 * m);
            let dense_cap = pairs * t.saturating_sub(1);
            push(format!("dense_pair_total:{tag}"), j, m, dense_cap, m <= dense_cap);
            let mult = p.max_dense_multiplicity as u64;
            push(format!("dense_multiplicity:{tag}"), j, mult, t, mult < t);
            let pf = p.max_pair_f as u64;
            if j == 0 {
                push(format!("pair_f_sum:{tag}"), j, pf, 6 * t * t * t, pf <= 6 * t * t * t);
            } else {
                let cap = 2 * ledger.levels[j - 1].q * t;
                push(format!("pair_f_sum:{tag}"), j, pf, cap, pf < cap);
            }
            let lhs = lvl.q * del;
            let rhs = 2 * f + 2 * tn2 * lvl.q;
            push(format!("link_size_bound:{tag}"), j, lhs, rhs, lhs < rhs);
            let cap = if j == 0 { 26 * tn2 } else { 10 * tn2 };
            push(format!("projection_deletions:{tag}"), j, del, cap, del < cap);
            push(format!("link_k2q_free:{tag}"), j, u64::from(!p.outputs_free), 0, p.outputs_free);
        }
        push("level_k12q_free".into(), j, u64::from(!lvl.k12q_free), 0, lvl.k12q_free);
        push("nested".into(), j, u64::from(!lvl.nested), 0, lvl.nested);
    }
    if let Some(last) = ledger.levels.last() {
        let k = ledger.levels.len() - 1;
        let size = last.size as u64;
        push("final_level_size".into(), k, size, 2 * tn2, size <= 2 * tn2);
    }
    let total = ledger.input_size as u64;
    let cap = (30 * t * ceil_log2(t) + 80 * t) * n * n;
    push("input_size_bound".into(), 0, total, cap, total <= cap);
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_examples() {
        assert_eq!(q_schedule(2).unwrap().qs, vec![4, 2]);
        assert_eq!(q_schedule(3).unwrap().qs, vec![8, 4]);
        assert_eq!(q_schedule(4).unwrap().qs, vec![16, 8, 4]);
        assert!(q_schedule(1).is_err());
    }

    #[test]
    fn ceil_log2_values() {
        let got: Vec<u64> = (1..=9).map(ceil_log2).collect();
        assert_eq!(got, vec![0, 1, 2, 2, 3, 3, 3, 3, 4]);
    }

    #[test]
    fn extraction_examples() {
        let single = UniformHypergraph::from_edges(3, 3, [vec![0, 1, 2]]).unwrap();
        let ex = extract_tripartite(&single, 0).unwrap();
        assert_eq!(ex.system.edge_count(), 1);

        let complete = UniformHypergraph::from_edges(
            3,
            6,
            (0..6).flat_map(|a| (a + 1..6).flat_map(move |b| (b + 1..6).map(move |c| vec![a, b, c]))),
        )
        .unwrap();
        assert_eq!(extract_tripartite(&complete, 3).unwrap().system.edge_count(), 8);

        let empty = UniformHypergraph::new(3, 9).unwrap();
        assert!(extract_tripartite(&empty, 0).unwrap().system.is_empty());
        assert!(extract_tripartite(&UniformHypergraph::new(3, 4).unwrap(), 0).is_err());
    }

    #[test]
    fn extraction_maps_back_to_edges() {
        let h = UniformHypergraph::from_edges(3, 6, [vec![0, 1, 2], vec![3, 4, 5], vec![0, 3, 5]]).unwrap();
        let ex = extract_tripartite(&h, 11).unwrap();
        for [a, b, c] in ex.system.triples() {
            let mut e = vec![ex.parts[0][a], ex.parts[1][b], ex.parts[2][c]];
            e.sort_unstable();
            assert!(h.contains(&e));
        }
    }

    #[test]
    fn single_edge_is_unchanged() {
        let h = TripartiteTripleSystem::from_local(2, [[0, 0, 0]]).unwrap();
        let (out, ledger) = apply_pq(&h, 2, Step2Policy::exhaustive()).unwrap();
        assert_eq!(out, h);
        assert!(ledger.projections.iter().all(|p| p.deleted() == 0 && p.m() == 0));
        let run = run_pipeline(&h, 2, Step2Policy::exhaustive()).unwrap();
        assert!(run.all_pass());
        assert!(run.levels.iter().all(|l| l.edge_count() == 1));
    }

    #[test]
    fn k122_loses_one_triple() {
        // u, v in A; w in B; z_1, z_2 in C
        let h = TripartiteTripleSystem::from_local(2, [[0, 0, 0], [0, 0, 1], [1, 0, 0], [1, 0, 1]]).unwrap();
        let (out, ledger) = apply_pq(&h, 2, Step2Policy::exhaustive()).unwrap();
        assert_eq!(out.edge_count(), 3);
        assert!(ledger.k12q_free);
        let deleted: Vec<usize> = ledger.projections.iter().map(ProjectionLedger::deleted).collect();
        assert_eq!(deleted, vec![0, 0, 1]);
    }

    #[test]
    fn empty_input_passes_everything() {
        let h = TripartiteTripleSystem::new(3);
        let run = run_pipeline(&h, 2, Step2Policy::exhaustive()).unwrap();
        assert!(run.all_pass());
        assert!(run.levels.iter().all(TripartiteTripleSystem::is_empty));
    }

    #[test]
    fn tampered_final_size_fails() {
        let h = TripartiteTripleSystem::from_local(1, [[0, 0, 0]]).unwrap();
        let mut run = run_pipeline(&h, 2, Step2Policy::exhaustive()).unwrap();
        run.ledger.levels.last_mut().unwrap().size = 100;
        let checks = check_bounds(&run.ledger);
        let bad = checks.iter().find(|c| c.name == "final_level_size").unwrap();
        assert!(!bad.pass);
    }

    #[test]
    fn non_free_input_is_rejected() {
        // K_{2,2}^{(3)} needs two apexes in one part and two disjoint pairs across the others
        let h = TripartiteTripleSystem::from_local(2, [[0, 0, 0], [1, 0, 0], [0, 1, 1], [1, 1, 1]]).unwrap();
        assert!(matches!(
            run_pipeline(&h, 2, Step2Policy::exhaustive()),
            Err(Error::NotFree { .. })
        ));
    }
}
