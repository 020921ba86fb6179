//! Fixed benchmark inputs, so every bench measures the same instances.

use rainbow_core::generators::{random_cooperative_family, DEFAULT_DENSITY};
use rainbow_core::{BipartiteGraph, EdgeFamily, EdgeSet, SplitMix64};

/// A random edge subset of `K_{n,n}` holding each edge with probability `density`.
pub fn random_edges(n: usize, density: f64, seed: u64) -> (BipartiteGraph, EdgeSet) {
    let g = BipartiteGraph::complete(n, n).expect("positive sides");
    let mut rng = SplitMix64::new(seed);
    let edges = g.edges().iter().filter(|_| rng.next_f64() < density).copied().collect();
    (g, edges)
}

/// The first `count` cooperative families for `(n, k)` on `K_{n,n}`, seeds
/// counting up from zero.
pub fn cooperative_instances(n: usize, k: usize, count: usize) -> (BipartiteGraph, Vec<EdgeFamily>) {
    let g = BipartiteGraph::complete(n, n).expect("positive sides");
    let fams = (0u64..)
        .filter_map(|seed| random_cooperative_family(n, k, &g, seed, 100_000, DEFAULT_DENSITY).expect("valid parameters"))
        .take(count)
        .collect();
    (g, fams)
}
