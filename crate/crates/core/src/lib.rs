//! Rainbow matchings of edge-set families in bipartite graphs under the
//! cooperative condition: every `k` members jointly contain a matching of
//! size `n`.
//!
//! The crate provides brute-force oracles for matching numbers, the network
//! built from a rainbow matching and its unrepresented members, regimentation
//! certificates, rainbow s-t path search, a constructive solver that grows a
//! rainbow matching by local exchanges, instance generators, a counterexample
//! search harness and the file formats used by the command-line tool.

pub mod alternating;
pub mod error;
pub mod format;
pub mod generators;
pub mod graph;
pub mod matching;
pub mod network;
pub mod rainbow_path;
pub mod regimentation;
pub mod rng;
pub mod search;
pub mod solver;

pub use error::Error;
pub use graph::{edge_set, BipartiteGraph, Edge, EdgeFamily, EdgeSet, Matching, RainbowMatching};
pub use matching::{
    cooperative_condition, matching_number, max_matching, rainbow_matching_at_least, rainbow_matching_max, Cooperation,
};
pub use network::{build_network, Arc, ArcSet, Network, NetworkFamily, StPath, Vertex};
pub use rainbow_path::{dichotomy, exhaustive_rainbow_path, greedy_rainbow_tree, Dichotomy, GreedyOutcome, RainbowStPath};
pub use regimentation::{check_structure_lemmas, find_regimentation, verify_regimentation, Regimentation};
pub use rng::SplitMix64;
pub use solver::{solve_main, verify_arrow_statement, ArrowOutcome, SolveMode, SolveOutcome, TrailStep};
