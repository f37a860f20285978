use turan_core::constructions::{polarity_graph, star_matching};
use turan_core::oracle::{brute_contains, random_free_instance};
use turan_core::*;

#[test]
fn seeded_run_n8_t2_passes_every_check() {
    let h = random_free_instance(8, 2, 7).unwrap();
    let run = run_pipeline(&h, 2, Step2Policy::exhaustive()).unwrap();
    let failed: Vec<_> = run.checks.iter().filter(|c| !c.pass).collect();
    assert!(failed.is_empty(), "{failed:?}");
    assert_eq!(run.levels.len(), run.schedule.qs.len());
    for (level, &q) in run.levels.iter().zip(&run.schedule.qs) {
        let pattern = Pattern::K12q { q: q as usize };
        let hg = level.to_hypergraph();
        assert!(contains_copy(&hg, &pattern).unwrap().is_none());
        assert!(!brute_contains(&hg, &pattern).unwrap());
    }
    assert!(run.levels.windows(2).all(|w| w[1].is_subset_of(&w[0])));
    assert!(run.levels[0].is_subset_of(&h));
}

#[test]
fn single_hyperedge_survives_every_level() {
    let h = TripartiteTripleSystem::from_local(1, [[0, 0, 0]]).unwrap();
    let run = run_pipeline(&h, 2, Step2Policy::exhaustive()).unwrap();
    assert!(run.all_pass());
    assert!(run.levels.iter().all(|l| l.edge_count() == 1));
}

#[test]
fn checks_are_deterministic() {
    let h = random_free_instance(6, 3, 11).unwrap();
    let a = run_pipeline(&h, 3, Step2Policy::exhaustive()).unwrap();
    let b = run_pipeline(&h, 3, Step2Policy::exhaustive()).unwrap();
    assert_eq!(a.checks, b.checks);
    assert_eq!(a.levels, b.levels);
}

#[test]
fn dense_pairs_appear_in_few_link_graphs() {
    for seed in 0..5 {
        let t = 2;
        let h = random_free_instance(6, t, seed).unwrap();
        let q = q_schedule(t as u64).unwrap().qs[0] as usize;
        for proj in Projection::ALL {
            let links = link_graphs(&h, proj);
            for p in links[0].pairs() {
                let dense_in = links.iter().filter(|g| g.codegree(p) >= q).count();
                assert!(dense_in < t, "{p} is dense in {dense_in} link graphs");
            }
        }
    }
}

#[test]
fn no_skips_when_the_pattern_cannot_fit() {
    let h = random_free_instance(3, 5, 1).unwrap();
    assert_eq!(h.edge_count(), 27);
}

#[test]
fn constructions_avoid_their_patterns() {
    assert!(contains_copy(&star_matching(7, 3).unwrap(), &Pattern::k2t3(2)).unwrap().is_none());
    for p in [2, 3, 5] {
        let g = polarity_graph(p).unwrap().to_hypergraph();
        assert!(contains_copy(&g, &Pattern::K2qGraph { q: 2 }).unwrap().is_none());
    }
}
