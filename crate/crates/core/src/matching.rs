//! Exact matching oracles: the matching number of an edge set, the rainbow
//! matching number of a family, and the cooperative condition.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::error::Error;
use crate::graph::{BipartiteGraph, Edge, EdgeFamily, EdgeSet, Matching, RainbowMatching};

/// Maximum matching inside `edge_subset` by augmenting paths.
///
/// Deterministic: A-vertices are processed in increasing order and
/// neighbours are tried in increasing order.
pub fn max_matching(g: &BipartiteGraph, edge_subset: &EdgeSet) -> Matching {
    debug_assert!(edge_subset.iter().all(|e| g.contains(e)));
    kuhn(edge_subset, g.left_size(), g.right_size())
}

/// Matching number of an edge set, without reference to an ambient graph.
pub fn matching_number(edges: &EdgeSet) -> usize {
    max_matching_of(edges).len()
}

/// Maximum matching of an edge set, sized from the edges themselves.
pub fn max_matching_of(edges: &EdgeSet) -> Matching {
    let (left, right) = edges
        .iter()
        .fold((0, 0), |(l, r), e| (l.max(e.a), r.max(e.b)));
    kuhn(edges, left, right)
}

fn kuhn(edges: &EdgeSet, left: usize, right: usize) -> Matching {
    let mut adj = vec![Vec::new(); left + 1];
    for e in edges {
        adj[e.a].push(e.b);
    }
    let mut match_b: Vec<Option<usize>> = vec![None; right + 1];
    let mut visited = vec![false; right + 1];
    for a in 1..=left {
        visited.iter_mut().for_each(|v| *v = false);
        try_augment(a, &adj, &mut match_b, &mut visited);
    }
    let edges = match_b
        .iter()
        .enumerate()
        .filter_map(|(b, a)| a.map(|a| Edge::new(a, b)))
        .collect();
    Matching::new(edges).expect("augmenting-path search yields a matching")
}

fn try_augment(
    a: usize,
    adj: &[Vec<usize>],
    match_b: &mut [Option<usize>],
    visited: &mut [bool],
) -> bool {
    for &b in &adj[a] {
        if visited[b] {
            continue;
        }
        visited[b] = true;
        let free = match match_b[b] {
            None => true,
            Some(other) => try_augment(other, adj, match_b, visited),
        };
        if free {
            match_b[b] = Some(a);
            return true;
        }
    }
    false
}

/// Maximum rainbow matching by exhaustive backtracking over partial choice
/// functions. Returns `(ν_R, witness)`.
pub fn rainbow_matching_max(fam: &EdgeFamily) -> (usize, RainbowMatching) {
    let rm = RainbowSearch::new(fam, None).run();
    (rm.len(), rm)
}

/// Like [`rainbow_matching_max`] but stops as soon as a rainbow matching of
/// size `target` is found. The returned witness has size `min(ν_R, target)`
/// or more.
pub fn rainbow_matching_at_least(fam: &EdgeFamily, target: usize) -> RainbowMatching {
    RainbowSearch::new(fam, Some(target)).run()
}

struct RainbowSearch<'a> {
    fam: &'a EdgeFamily,
    // Members sorted by (size, contents) so identical copies are adjacent.
    order: Vec<usize>,
    same_as_prev: Vec<bool>,
    used_a: Vec<bool>,
    used_b: Vec<bool>,
    current: Vec<(usize, Edge)>,
    // Choice made at each order position, for symmetry breaking between copies.
    choices: Vec<Option<Edge>>,
    best: Vec<(usize, Edge)>,
    cap: usize,
}

impl<'a> RainbowSearch<'a> {
    fn new(fam: &'a EdgeFamily, target: Option<usize>) -> Self {
        let mut order: Vec<usize> = (0..fam.len()).filter(|&i| !fam.sets()[i].is_empty()).collect();
        order.sort_by(|&i, &j| {
            let (si, sj) = (&fam.sets()[i], &fam.sets()[j]);
            si.len().cmp(&sj.len()).then_with(|| si.cmp(sj)).then(i.cmp(&j))
        });
        let same_as_prev = (0..order.len())
            .map(|p| p > 0 && fam.sets()[order[p]] == fam.sets()[order[p - 1]])
            .collect();
        let (left, right) = fam.extent();
        let mut cap = order.len().min(matching_number(&fam.union()));
        if let Some(t) = target {
            cap = cap.min(t);
        }
        RainbowSearch {
            fam,
            choices: vec![None; order.len()],
            order,
            same_as_prev,
            used_a: vec![false; left + 1],
            used_b: vec![false; right + 1],
            current: Vec::new(),
            best: Vec::new(),
            cap,
        }
    }

    fn run(mut self) -> RainbowMatching {
        self.descend(0);
        let assignment: BTreeMap<usize, Edge> = self.best.into_iter().collect();
        RainbowMatching::from_assignment_unchecked(assignment)
    }

    fn available(&self, e: &Edge) -> bool {
        !self.used_a[e.a] && !self.used_b[e.b]
    }

    /// Upper bound on what the members from `pos` on can still add.
    fn remaining_bound(&self, pos: usize) -> usize {
        self.order[pos..]
            .iter()
            .filter(|&&m| self.fam.sets()[m].iter().any(|e| self.available(e)))
            .count()
    }

    // Returns true once the cap has been reached.
    fn descend(&mut self, pos: usize) -> bool {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
            if self.best.len() >= self.cap {
                return true;
            }
        }
        if pos == self.order.len() {
            return false;
        }
        if self.current.len() + self.remaining_bound(pos) <= self.best.len() {
            return false;
        }
        let member = self.order[pos];
        // Identical copies: if the previous copy was skipped, so is this one;
        // otherwise this copy takes a strictly larger edge.
        let lower = if self.same_as_prev[pos] {
            match self.choices[pos - 1] {
                None => {
                    self.choices[pos] = None;
                    return self.descend(pos + 1);
                }
                Some(e) => Some(e),
            }
        } else {
            None
        };
        let candidates: Vec<Edge> = self.fam.sets()[member]
            .iter()
            .filter(|e| lower.is_none_or(|l| **e > l) && self.available(e))
            .copied()
            .collect();
        for e in candidates {
            self.used_a[e.a] = true;
            self.used_b[e.b] = true;
            self.current.push((member, e));
            self.choices[pos] = Some(e);
            let done = self.descend(pos + 1);
            self.current.pop();
            self.used_a[e.a] = false;
            self.used_b[e.b] = false;
            if done {
                return true;
            }
        }
        self.choices[pos] = None;
        self.descend(pos + 1)
    }
}

/// Outcome of checking that every `k` members jointly contain a matching of size `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cooperation {
    Pass,
    /// Lexicographically least failing index set and its union's matching number.
    Fail { members: Vec<usize>, nu: usize },
}

impl Cooperation {
    pub fn passes(&self) -> bool {
        matches!(self, Cooperation::Pass)
    }
}

pub fn cooperative_condition(fam: &EdgeFamily, k: usize, n: usize) -> Result<Cooperation, Error> {
    if k == 0 || k > fam.len() {
        return Err(Error::KOutOfRange { k, len: fam.len() });
    }
    if n == 0 {
        return Ok(Cooperation::Pass);
    }
    for members in (0..fam.len()).combinations(k) {
        let nu = matching_number(&fam.union_of(members.iter().copied()));
        if nu < n {
            return Ok(Cooperation::Fail { members, nu });
        }
    }
    Ok(Cooperation::Pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge_set;
    use proptest::prelude::*;

    fn brute_force_nu(edges: &EdgeSet) -> usize {
        let list: Vec<Edge> = edges.iter().copied().collect();
        (0u32..1 << list.len())
            .filter_map(|mask| {
                let chosen: Vec<Edge> = (0..list.len())
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| list[i])
                    .collect();
                crate::graph::is_matching(&chosen).then_some(chosen.len())
            })
            .max()
            .unwrap_or(0)
    }

    // Every partial choice function, no pruning.
    fn brute_force_nu_r(fam: &EdgeFamily) -> usize {
        fn go(fam: &EdgeFamily, i: usize, chosen: &mut Vec<Edge>) -> usize {
            if i == fam.len() {
                return chosen.len();
            }
            let mut best = go(fam, i + 1, chosen);
            for e in &fam.sets()[i] {
                if chosen.iter().all(|c| !c.touches(e)) {
                    chosen.push(*e);
                    best = best.max(go(fam, i + 1, chosen));
                    chosen.pop();
                }
            }
            best
        }
        go(fam, 0, &mut Vec::new())
    }

    fn k22() -> BipartiteGraph {
        BipartiteGraph::complete(2, 2).unwrap()
    }

    #[test]
    fn max_matching_examples() {
        let g = k22();
        assert_eq!(max_matching(&g, g.edges()).len(), 2);
        assert_eq!(max_matching(&g, &EdgeSet::new()).len(), 0);
        assert_eq!(max_matching(&g, &edge_set([(1, 1), (1, 2)])).len(), 1);
    }

    #[test]
    fn rainbow_examples() {
        let fam = EdgeFamily::new(vec![edge_set([(1, 1), (2, 2)]), edge_set([(1, 2)])]);
        assert_eq!(brute_force_nu_r(&fam), 1);
        assert_eq!(rainbow_matching_max(&fam).0, 1);

        let fam = EdgeFamily::new(vec![
            edge_set([(1, 1), (2, 2)]),
            edge_set([(1, 2), (2, 1)]),
            edge_set([(1, 1)]),
        ]);
        assert_eq!(brute_force_nu_r(&fam), 2);
        let (size, witness) = rainbow_matching_max(&fam);
        assert_eq!(size, 2);
        witness.verify(&fam).unwrap();

        assert_eq!(rainbow_matching_max(&EdgeFamily::default()).0, 0);
    }

    #[test]
    fn rainbow_handles_identical_copies() {
        // Six copies of one perfect matching of K_{3,3}.
        let pm = edge_set([(1, 1), (2, 2), (3, 3)]);
        let fam = EdgeFamily::new(vec![pm; 6]);
        let (size, witness) = rainbow_matching_max(&fam);
        assert_eq!(size, 3);
        witness.verify(&fam).unwrap();
    }

    #[test]
    fn at_least_stops_at_target() {
        let pm = edge_set([(1, 1), (2, 2), (3, 3)]);
        let fam = EdgeFamily::new(vec![pm; 3]);
        let rm = rainbow_matching_at_least(&fam, 2);
        assert_eq!(rm.len(), 2);
    }

    #[test]
    fn cooperative_examples() {
        let fam = EdgeFamily::new(vec![edge_set([(1, 1), (2, 2)]), edge_set([(1, 2)])]);
        assert_eq!(cooperative_condition(&fam, 2, 2).unwrap(), Cooperation::Pass);

        let fam = EdgeFamily::new(vec![
            edge_set([(1, 1)]),
            edge_set([(1, 2)]),
            edge_set([(1, 1)]),
        ]);
        // {1,2} (0-based {0,1}) and {1,3} both fail; the least one is reported.
        assert_eq!(
            cooperative_condition(&fam, 2, 2).unwrap(),
            Cooperation::Fail {
                members: vec![0, 1],
                nu: 1
            }
        );
        assert_eq!(cooperative_condition(&fam, 2, 0).unwrap(), Cooperation::Pass);
        assert!(matches!(
            cooperative_condition(&fam, 0, 1),
            Err(Error::KOutOfRange { .. })
        ));
        assert!(matches!(
            cooperative_condition(&fam, 4, 1),
            Err(Error::KOutOfRange { .. })
        ));
    }

    fn arb_edge_set(side: usize, max: usize) -> impl Strategy<Value = EdgeSet> {
        proptest::collection::btree_set((1..=side, 1..=side).prop_map(Edge::from), 0..=max)
    }

    fn arb_family() -> impl Strategy<Value = EdgeFamily> {
        proptest::collection::vec(arb_edge_set(3, 5), 0..6).prop_map(EdgeFamily::new)
    }

    proptest! {
        #[test]
        fn max_matching_agrees_with_subset_brute_force(edges in arb_edge_set(4, 8)) {
            let g = BipartiteGraph::complete(4, 4).unwrap();
            let m = max_matching(&g, &edges);
            prop_assert!(m.edges().is_subset(&edges));
            prop_assert_eq!(m.len(), brute_force_nu(&edges));
        }

        #[test]
        fn nu_r_agrees_with_unpruned_enumeration(fam in arb_family()) {
            let (size, witness) = rainbow_matching_max(&fam);
            prop_assert_eq!(size, brute_force_nu_r(&fam));
            prop_assert!(witness.verify(&fam).is_ok());
            prop_assert_eq!(witness.len(), size);
        }

        #[test]
        fn nu_r_bounded_by_nu_and_size(fam in arb_family()) {
            let (size, _) = rainbow_matching_max(&fam);
            prop_assert!(size <= fam.len().min(matching_number(&fam.union())));
        }

        #[test]
        fn nu_r_invariant_under_permutation(fam in arb_family(), seed in any::<u64>()) {
            let mut order: Vec<usize> = (0..fam.len()).collect();
            let mut rng = crate::rng::SplitMix64::new(seed);
            rng.shuffle(&mut order);
            let permuted = fam.permuted(&order);
            prop_assert_eq!(rainbow_matching_max(&fam).0, rainbow_matching_max(&permuted).0);
            prop_assert_eq!(matching_number(&fam.union()), matching_number(&permuted.union()));
        }

        #[test]
        fn full_k_reduces_to_union(fam in arb_family().prop_filter("nonempty", |f| !f.is_empty()), n in 0usize..4) {
            let pass = cooperative_condition(&fam, fam.len(), n).unwrap().passes();
            prop_assert_eq!(pass, matching_number(&fam.union()) >= n);
        }
    }
}
