//! Tools for Turán-type experiments on `K_{2,t}^{(3)}` and related
//! hypergraph expansions.

pub mod constructions;
pub mod error;
pub mod hypergraph;
pub mod io;
pub mod matching;
pub mod oracle;
pub mod patterns;
pub mod pipeline;
pub mod sparsify;
pub mod step2;

pub use error::{Error, Result};
pub use hypergraph::{
    common_neighborhood, link_graph, link_graphs, BipartiteGraph, Edge, Part, Projection, Side, SimpleGraph,
    TripartiteTripleSystem, UniformHypergraph, VertexPair,
};
pub use patterns::{
    classify_pair, contains_copy, expand, find_broom, make_k12q, max_frame, Broom, ColoredEdge, ColoredMultigraph,
    Embedding, ExpansionSpec, Frame, PairClass, Pattern,
};
pub use pipeline::{apply_pq, check_bounds, extract_tripartite, q_schedule, run_pipeline, QSchedule};
pub use sparsify::{sparsify, verify_terminal, SparsifyOutcome};
pub use step2::{step2_search, Step2Mode, Step2Policy};
