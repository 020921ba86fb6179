//! Instance generators. Every generator is a pure function of its parameters
//! and seed; randomness comes from a single [`SplitMix64`] stream.

use crate::error::Error;
use crate::graph::{BipartiteGraph, Edge, EdgeFamily, EdgeSet};
use crate::matching::{cooperative_condition, matching_number};
use crate::rng::SplitMix64;

/// Edge probability used when none is given.
pub const DEFAULT_DENSITY: f64 = 0.4;

/// The extremal family on `K_{n,n}` with `2n + k - 4` members: `n - 1` copies
/// of the diagonal matching, `n - 2` copies of the shifted matching
/// `a_i b_{i+1 mod n}`, and `k - 1` copies of `{a_1 b_2}`. Every `k` members
/// jointly contain a perfect matching, yet the largest rainbow matching has
/// size `n - 1`.
pub fn sharpness_family(n: usize, k: usize) -> Result<(BipartiteGraph, EdgeFamily), Error> {
    if n < 2 || k < 2 {
        return Err(Error::Parameters(format!("need n >= 2 and k >= 2, got n = {n}, k = {k}")));
    }
    let diagonal: EdgeSet = (1..=n).map(|i| Edge::new(i, i)).collect();
    let shifted: EdgeSet = (1..=n).map(|i| Edge::new(i, i % n + 1)).collect();
    let single: EdgeSet = [Edge::new(1, 2)].into_iter().collect();
    let mut sets = vec![diagonal; n - 1];
    sets.extend(std::iter::repeat_n(shifted, n - 2));
    sets.extend(std::iter::repeat_n(single, k - 1));
    Ok((BipartiteGraph::complete(n, n)?, EdgeFamily::new(sets)))
}

/// `2n - 1` uniformly random perfect matchings of `K_{n,n}`.
pub fn drisko_family(n: usize, seed: u64) -> Result<EdgeFamily, Error> {
    if n == 0 {
        return Err(Error::Parameters("need n >= 1".into()));
    }
    let mut rng = SplitMix64::new(seed);
    Ok((0..2 * n - 1).map(|_| random_matching(&mut rng, n, n)).collect())
}

/// `2k - 1` random matchings of `K_{k,k}`, the `i`-th (1-based) of size `min(i, k)`.
pub fn staircase_family(k: usize, seed: u64) -> Result<EdgeFamily, Error> {
    if k == 0 {
        return Err(Error::Parameters("need k >= 1".into()));
    }
    let mut rng = SplitMix64::new(seed);
    Ok((1..2 * k).map(|i| random_matching(&mut rng, k, i.min(k))).collect())
}

/// Random matching of the given size in `K_{n,n}`: shuffle both sides and
/// pair up the first `size` vertices.
fn random_matching(rng: &mut SplitMix64, n: usize, size: usize) -> EdgeSet {
    let mut a: Vec<usize> = (1..=n).collect();
    let mut b: Vec<usize> = (1..=n).collect();
    rng.shuffle(&mut a);
    rng.shuffle(&mut b);
    a.into_iter().zip(b).take(size).map(|(a, b)| Edge::new(a, b)).collect()
}

/// Rejection sampler for families of `2n + k - 3` nonempty edge sets of `g`
/// in which every `k` members jointly contain a matching of size `n`. Each
/// edge joins a member with probability `density`; a member that comes out
/// empty receives one uniformly random edge. Returns `None` after `attempts`
/// rejected families.
pub fn random_cooperative_family(
    n: usize,
    k: usize,
    g: &BipartiteGraph,
    seed: u64,
    attempts: usize,
    density: f64,
) -> Result<Option<EdgeFamily>, Error> {
    let len = (2 * n + k).checked_sub(3).filter(|&l| l > 0).ok_or_else(|| {
        Error::Parameters(format!("2n + k - 3 must be positive, got n = {n}, k = {k}"))
    })?;
    if k == 0 || k > len {
        return Err(Error::KOutOfRange { k, len });
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Parameters(format!("density {density} outside [0, 1]")));
    }
    if matching_number(g.edges()) < n {
        return Ok(None);
    }
    let edges: Vec<Edge> = g.edges().iter().copied().collect();
    let mut rng = SplitMix64::new(seed);
    for _ in 0..attempts {
        let fam: EdgeFamily = (0..len)
            .map(|_| {
                let mut set: EdgeSet = edges.iter().filter(|_| rng.next_f64() < density).copied().collect();
                if set.is_empty() {
                    set.insert(edges[rng.below(edges.len())]);
                }
                set
            })
            .collect();
        if cooperative_condition(&fam, k, n)?.passes() {
            return Ok(Some(fam));
        }
    }
    Ok(None)
}
