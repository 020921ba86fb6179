//! Counterexample search over small families of `2k - 1` edge sets in
//! `K_{left,right}` for two strengthenings of the cooperative theorem.
//!
//! Members are encoded as bitmasks over the edges of the ambient graph in
//! lexicographic order. Exhaustive mode walks all multisets of nonempty
//! masks; sampled mode draws members uniformly from the nonempty masks. The
//! space is split into shards that run in parallel, and the counterexample
//! with the least position in the walk is reported.

use rayon::prelude::*;

use crate::error::Error;
use crate::graph::{BipartiteGraph, Edge, EdgeFamily, EdgeSet};
use crate::matching::{matching_number, rainbow_matching_at_least};
use crate::rng::SplitMix64;

/// Graphs with more edges than this cannot be searched.
pub const MAX_EDGES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Conjecture {
    /// Every subfamily `K` with `ν(⋃K) ≥ min(|K|, k)` forces a rainbow matching of size `k`.
    GradedUnions,
    /// Members with `ν ≥ k`, each doubled onto a disjoint copy of the vertex
    /// set, have a rainbow matching using every member.
    DoubledCopies,
}

impl Conjecture {
    pub fn name(&self) -> &'static str {
        match self {
            Conjecture::GradedUnions => "graded-unions",
            Conjecture::DoubledCopies => "doubled-copies",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchParams {
    pub k: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Sampled { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub conjecture: Conjecture,
    pub k: usize,
    /// The family searched; for doubled copies this is before doubling.
    pub family: EdgeFamily,
    /// Largest rainbow matching found in the family that must contain one of
    /// size `required`.
    pub nu_r: usize,
    pub required: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub conjecture: Conjecture,
    pub params: SearchParams,
    pub mode: SearchMode,
    /// Families examined.
    pub checked: u64,
    /// Families that satisfied the hypothesis.
    pub hypothesis_held: u64,
    /// Size of the exhaustive space, when enumerating.
    pub space: Option<u128>,
    pub counterexample: Option<Counterexample>,
}

/// Families checked, families meeting the hypothesis, and the first
/// counterexample with its order key, for one shard.
type ShardResult = (u64, u64, Option<(u64, Counterexample)>);

/// Runs the search. Exhaustive mode fails with [`Error::BudgetExhausted`]
/// when the space is larger than `budget`; sampled mode draws exactly
/// `budget` families.
pub fn conjecture_search(
    conjecture: Conjecture,
    params: SearchParams,
    mode: SearchMode,
    budget: u64,
) -> Result<SearchReport, Error> {
    let SearchParams { k, left, right } = params;
    if k == 0 {
        return Err(Error::Parameters("need k >= 1".into()));
    }
    let g = BipartiteGraph::complete(left, right)?;
    let edges: Vec<Edge> = g.edges().iter().copied().collect();
    if edges.len() > MAX_EDGES {
        return Err(Error::Parameters(format!(
            "graph has {} edges, at most {MAX_EDGES} are supported",
            edges.len()
        )));
    }
    let ctx = Checker {
        conjecture,
        k,
        left,
        right,
        edges,
    };
    let members = 2 * k - 1;
    let masks = (1u32 << ctx.edges.len()) - 1;

    let (checked, held, hit, space) = match mode {
        SearchMode::Exhaustive => {
            let space = multisets(masks as u128, members as u128);
            if space > budget as u128 {
                return Err(Error::BudgetExhausted { budget, checked: 0 });
            }
            // Shard by the first member's mask.
            let shards: Vec<ShardResult> = (1..=masks)
                .into_par_iter()
                .map(|first| {
                    let mut family = vec![first];
                    let mut stats = (0u64, 0u64, None);
                    let mut index = 0u64;
                    walk(&ctx, masks, members, &mut family, &mut stats, &mut index);
                    stats
                })
                .collect();
            let (c, h, hit) = merge(shards);
            (c, h, hit, Some(space))
        }
        SearchMode::Sampled { seed } => {
            const SHARD: u64 = 4096;
            let mut master = SplitMix64::new(seed);
            let seeds: Vec<(u64, u64)> = (0..budget.div_ceil(SHARD)).map(|i| (i, master.next_u64())).collect();
            let shards: Vec<ShardResult> = seeds
                .into_par_iter()
                .map(|(shard, s)| {
                    let mut rng = SplitMix64::new(s);
                    let count = SHARD.min(budget - shard * SHARD);
                    let mut stats = (0u64, 0u64, None);
                    for i in 0..count {
                        let family: Vec<u32> = (0..members).map(|_| 1 + rng.below(masks as usize) as u32).collect();
                        record(&ctx, &family, shard * SHARD + i, &mut stats);
                    }
                    stats
                })
                .collect();
            let (c, h, hit) = merge(shards);
            (c, h, hit, None)
        }
    };
    let counterexample = hit.map(|(_, c)| c);
    if let Some(c) = &counterexample {
        assert!(verify_counterexample(c)?, "search produced a counterexample that does not verify");
    }
    Ok(SearchReport {
        conjecture,
        params,
        mode,
        checked,
        hypothesis_held: held,
        space,
        counterexample,
    })
}

type Stats = (u64, u64, Option<(u64, Counterexample)>);

fn merge(shards: Vec<Stats>) -> (u64, u64, Option<(u64, Counterexample)>) {
    shards.into_iter().fold((0, 0, None), |(c, h, best), (sc, sh, hit)| {
        let best = match (best, hit) {
            (Some(a), Some(b)) => Some(if b.0 < a.0 { b } else { a }),
            (a, b) => a.or(b),
        };
        (c + sc, h + sh, best)
    })
}

/// Number of multisets of size `r` drawn from `n` kinds.
fn multisets(n: u128, r: u128) -> u128 {
    (0..r).fold(1u128, |acc, i| acc * (n + i) / (i + 1))
}

/// Nondecreasing mask sequences extending `family`. `index` counts the
/// families seen in this shard, which with the first mask orders them.
fn walk(ctx: &Checker, masks: u32, members: usize, family: &mut Vec<u32>, stats: &mut Stats, index: &mut u64) {
    if family.len() == members {
        let order = ((family[0] as u64) << 40) | *index;
        *index += 1;
        record(ctx, family, order, stats);
        return;
    }
    let last = *family.last().unwrap();
    for m in last..=masks {
        family.push(m);
        walk(ctx, masks, members, family, stats, index);
        family.pop();
    }
}

fn record(ctx: &Checker, family: &[u32], order: u64, stats: &mut Stats) {
    stats.0 += 1;
    if !ctx.hypothesis(family) {
        return;
    }
    stats.1 += 1;
    if let Some(c) = ctx.conclusion_fails(family) {
        if stats.2.as_ref().is_none_or(|(o, _)| order < *o) {
            stats.2 = Some((order, c));
        }
    }
}

struct Checker {
    conjecture: Conjecture,
    k: usize,
    left: usize,
    right: usize,
    edges: Vec<Edge>,
}

impl Checker {
    fn set(&self, mask: u32) -> EdgeSet {
        self.edges
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, e)| *e)
            .collect()
    }

    fn hypothesis(&self, family: &[u32]) -> bool {
        match self.conjecture {
            Conjecture::GradedUnions => (1u32..1 << family.len()).all(|sub| {
                let union = family
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| sub >> i & 1 == 1)
                    .fold(0u32, |acc, (_, &m)| acc | m);
                matching_number(&self.set(union)) >= (sub.count_ones() as usize).min(self.k)
            }),
            Conjecture::DoubledCopies => family.iter().all(|&m| matching_number(&self.set(m)) >= self.k),
        }
    }

    fn conclusion_fails(&self, family: &[u32]) -> Option<Counterexample> {
        let fam: EdgeFamily = family.iter().map(|&m| self.set(m)).collect();
        let c = Counterexample {
            conjecture: self.conjecture,
            k: self.k,
            nu_r: 0,
            required: 0,
            family: fam,
        };
        let (target, nu_r) = conclusion(&c, self.left, self.right);
        (nu_r < target).then_some(Counterexample {
            nu_r,
            required: target,
            ..c
        })
    }
}

/// Required rainbow size and the size found for the family of `c`.
fn conclusion(c: &Counterexample, left: usize, right: usize) -> (usize, usize) {
    match c.conjecture {
        Conjecture::GradedUnions => (c.k, rainbow_matching_at_least(&c.family, c.k).len()),
        Conjecture::DoubledCopies => {
            let doubled = doubled_family(&c.family, left, right);
            let target = c.family.len();
            (target, rainbow_matching_at_least(&doubled, target).len())
        }
    }
}

/// Each member united with its copy shifted to vertices `a + left`, `b + right`.
pub fn doubled_family(fam: &EdgeFamily, left: usize, right: usize) -> EdgeFamily {
    fam.sets()
        .iter()
        .map(|s| {
            s.iter()
                .flat_map(|e| [*e, Edge::new(e.a + left, e.b + right)])
                .collect()
        })
        .collect()
}

/// Recomputes the hypothesis and the conclusion of `c` from scratch.
pub fn verify_counterexample(c: &Counterexample) -> Result<bool, Error> {
    let (left, right) = c.family.extent();
    let k = c.k;
    if c.family.len() != 2 * k - 1 {
        return Ok(false);
    }
    let hypothesis = match c.conjecture {
        Conjecture::GradedUnions => (1u32..1 << c.family.len()).all(|sub| {
            let members = (0..c.family.len()).filter(|i| sub >> i & 1 == 1);
            matching_number(&c.family.union_of(members)) >= (sub.count_ones() as usize).min(k)
        }),
        Conjecture::DoubledCopies => c.family.sets().iter().all(|s| matching_number(s) >= k),
    };
    let (required, nu_r) = conclusion(c, left.max(1), right.max(1));
    Ok(hypothesis && nu_r < required && nu_r == c.nu_r && required == c.required)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge_set;

    fn params(k: usize, side: usize) -> SearchParams {
        SearchParams {
            k,
            left: side,
            right: side,
        }
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multisets(15, 3), 680);
        assert_eq!(multisets(3, 1), 3);
        assert_eq!(multisets(1, 5), 1);
    }

    #[test]
    fn graded_base_case() {
        let r = conjecture_search(Conjecture::GradedUnions, params(1, 2), SearchMode::Exhaustive, 100).unwrap();
        assert_eq!(r.checked, 15);
        assert_eq!(r.hypothesis_held, 15);
        assert_eq!(r.counterexample, None);
    }

    #[test]
    fn graded_exhaustive_on_k22() {
        let r = conjecture_search(Conjecture::GradedUnions, params(2, 2), SearchMode::Exhaustive, 1000).unwrap();
        assert_eq!(r.checked, 680);
        assert_eq!(r.space, Some(680));
        assert!(r.hypothesis_held > 0);
        assert_eq!(r.counterexample, None);
    }

    #[test]
    fn doubled_exhaustive_on_k22() {
        let r = conjecture_search(Conjecture::DoubledCopies, params(2, 2), SearchMode::Exhaustive, 1000).unwrap();
        // Members with a perfect matching of K_{2,2}: masks containing one of
        // the two perfect matchings, 7 of 15.
        assert_eq!(r.hypothesis_held, multisets(7, 3) as u64);
        assert_eq!(r.counterexample, None);
    }

    #[test]
    fn doubled_three_perfect_matchings() {
        let fam = EdgeFamily::new(vec![
            edge_set([(1, 1), (2, 2)]),
            edge_set([(1, 1), (2, 2)]),
            edge_set([(1, 2), (2, 1)]),
        ]);
        let doubled = doubled_family(&fam, 2, 2);
        assert_eq!(doubled.sets()[0], edge_set([(1, 1), (2, 2), (3, 3), (4, 4)]));
        assert_eq!(rainbow_matching_at_least(&doubled, 3).len(), 3);
    }

    #[test]
    fn budget_exhaustion() {
        assert_eq!(
            conjecture_search(Conjecture::GradedUnions, params(2, 2), SearchMode::Exhaustive, 100),
            Err(Error::BudgetExhausted { budget: 100, checked: 0 })
        );
    }

    #[test]
    fn sampled_is_deterministic() {
        let run = || {
            conjecture_search(
                Conjecture::GradedUnions,
                params(2, 3),
                SearchMode::Sampled { seed: 5 },
                5000,
            )
            .unwrap()
        };
        let r = run();
        assert_eq!(r.checked, 5000);
        assert_eq!(r, run());
    }

    #[test]
    fn counterexample_verification_rejects_non_counterexamples() {
        let c = Counterexample {
            conjecture: Conjecture::GradedUnions,
            k: 2,
            family: EdgeFamily::new(vec![edge_set([(1, 1), (2, 2)]); 3]),
            nu_r: 1,
            required: 2,
        };
        assert!(!verify_counterexample(&c).unwrap());
    }
}
