//! Grows a rainbow matching of size `n` for families of `2n + k - 3` edge
//! sets in which every `k` members jointly contain a matching of size `n`
//! (at most `k - 2` members may be empty).
//!
//! The constructive loop keeps a rainbow matching `M` and improves it one
//! local step at a time:
//!
//! 1. Build the network over `M` and the unrepresented members. A rainbow
//!    s-t path translates to an augmenting path for `M`.
//! 2. Otherwise the network family is regimented. If every inessential
//!    member maps into `M`, one of them takes over an edge of `M` from a
//!    represented member (a swap) and the loop restarts.
//! 3. Otherwise an arc `pq` of an inessential member is backward on a path
//!    `Q`. A maximum matching of `S_p` (the member representing `p`) together
//!    with the inessential members has an edge `ax` with `a` unmatched by `M`,
//!    and `ax` leads either to a direct extension of `M`, to an augmenting
//!    path along the regimentation, or to an augmenting path that doubles
//!    `S_p` and is repaired by switching around the cycle closed by `pq`.
//!
//! Every step is verified. The loop is budgeted; hybrid mode falls back to
//! the exhaustive oracle when it stalls or runs out of budget.

use std::collections::{BTreeMap, VecDeque};

use crate::alternating::{alternating_from_preimages, apply_augmenting, augment, path_to_alternating, rectify, AlternatingPath};
use crate::error::Error;
use crate::graph::{BipartiteGraph, Edge, EdgeFamily, EdgeSet, RainbowMatching};
use crate::matching::{cooperative_condition, max_matching_of, rainbow_matching_at_least, Cooperation};
use crate::network::{build_network, Network, NetworkFamily, StPath, Vertex};
use crate::rainbow_path::exhaustive_rainbow_path;
use crate::regimentation::{find_regimentation, is_backward, Regimentation};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMode {
    Constructive,
    Oracle,
    Hybrid,
}

impl std::str::FromStr for SolveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "constructive" => Ok(SolveMode::Constructive),
            "oracle" => Ok(SolveMode::Oracle),
            "hybrid" => Ok(SolveMode::Hybrid),
            other => Err(Error::Parameters(format!("unknown mode {other:?}"))),
        }
    }
}

/// One entry of the audit trail. Members are 0-based family indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TrailStep {
    /// Symmetric difference with an augmenting path.
    Augment { path: Vec<Edge>, size: usize },
    /// `taken_by` now represents `edge`, which `released` represented before.
    Swap { released: usize, taken_by: usize, edge: Edge },
    /// An edge between two vertices missed by `M` joins directly.
    DirectAdd { member: usize, edge: Edge, size: usize },
    /// Augmenting path that doubles one member, followed by a switch around
    /// `cycle` that removes the second representation.
    Rectify { path: Vec<Edge>, cycle: Vec<Edge>, size: usize },
    /// Witness taken from the exhaustive oracle.
    Oracle { from_size: usize, size: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Solved {
        matching: RainbowMatching,
        trail: Vec<TrailStep>,
        used_fallback: bool,
    },
    /// The `k` members in `failing` jointly have matching number `nu < n`.
    HypothesisFailure { failing: Vec<usize>, nu: usize },
    /// The hypothesis holds but the oracle finds no rainbow matching of size `n`.
    Violation { nu_r: usize },
}

/// Iteration budget used by [`solve_main`].
pub fn default_budget(n: usize, family_len: usize) -> usize {
    4 * n * family_len
}

pub fn solve_main(
    g: &BipartiteGraph,
    fam: &EdgeFamily,
    k: usize,
    n: usize,
    mode: SolveMode,
) -> Result<SolveOutcome, Error> {
    solve_main_with_budget(g, fam, k, n, mode, default_budget(n, fam.len()))
}

pub fn solve_main_with_budget(
    g: &BipartiteGraph,
    fam: &EdgeFamily,
    k: usize,
    n: usize,
    mode: SolveMode,
    budget: usize,
) -> Result<SolveOutcome, Error> {
    if k <= 1 || k > n {
        return Err(Error::Parameters(format!("need 1 < k <= n, got k = {k}, n = {n}")));
    }
    let expected = 2 * n + k - 3;
    if fam.len() != expected {
        return Err(Error::SizeMismatch {
            expected,
            actual: fam.len(),
        });
    }
    let empty = fam.empty_members();
    if empty > k - 2 {
        return Err(Error::TooManyEmpty { empty, allowed: k - 2 });
    }
    g.check_family(fam)?;
    if let Cooperation::Fail { members, nu } = cooperative_condition(fam, k, n)? {
        return Ok(SolveOutcome::HypothesisFailure { failing: members, nu });
    }

    let mut trail = Vec::new();
    let (matching, used_fallback) = match mode {
        SolveMode::Oracle => match oracle(fam, n, 0, &mut trail) {
            Some(m) => (m, false),
            None => return Ok(violation(fam, n)),
        },
        SolveMode::Constructive => (constructive(g, fam, n, budget, &mut trail)?, false),
        SolveMode::Hybrid => match constructive(g, fam, n, budget, &mut trail) {
            Ok(m) => (m, false),
            Err(Error::Stalled(_)) => {
                let from = trail_size(&trail);
                match oracle(fam, n, from, &mut trail) {
                    Some(m) => (m, true),
                    None => return Ok(violation(fam, n)),
                }
            }
            Err(e) => return Err(e),
        },
    };
    assert_eq!(matching.len(), n, "solver returned a matching of the wrong size");
    matching.verify(fam).expect("solver returned an invalid rainbow matching");
    Ok(SolveOutcome::Solved {
        matching,
        trail,
        used_fallback,
    })
}

fn violation(fam: &EdgeFamily, n: usize) -> SolveOutcome {
    SolveOutcome::Violation {
        nu_r: rainbow_matching_at_least(fam, n).len(),
    }
}

fn oracle(fam: &EdgeFamily, n: usize, from_size: usize, trail: &mut Vec<TrailStep>) -> Option<RainbowMatching> {
    let witness = rainbow_matching_at_least(fam, n);
    if witness.len() < n {
        return None;
    }
    trail.push(TrailStep::Oracle { from_size, size: n });
    Some(witness.truncated(n))
}

fn trail_size(trail: &[TrailStep]) -> usize {
    trail
        .iter()
        .rev()
        .find_map(|s| match s {
            TrailStep::Augment { size, .. } | TrailStep::DirectAdd { size, .. } | TrailStep::Rectify { size, .. } => {
                Some(*size)
            }
            TrailStep::Oracle { size, .. } => Some(*size),
            TrailStep::Swap { .. } => None,
        })
        .unwrap_or(0)
}

fn constructive(
    g: &BipartiteGraph,
    fam: &EdgeFamily,
    n: usize,
    budget: usize,
    trail: &mut Vec<TrailStep>,
) -> Result<RainbowMatching, Error> {
    let mut rm = RainbowMatching::empty();
    for _ in 0..budget {
        if rm.len() >= n {
            return Ok(rm.truncated(n));
        }
        let (next, step) = improve(g, fam, &rm).map_err(Error::Stalled)?;
        next.verify(fam).map_err(|e| Error::Stalled(format!("step produced an invalid matching: {e}")))?;
        assert!(
            next.len() == rm.len() + 1 || (next.len() == rm.len() && next != rm),
            "constructive step neither grew nor changed the matching"
        );
        trail.push(step);
        rm = next;
    }
    if rm.len() >= n {
        return Ok(rm.truncated(n));
    }
    Err(Error::Stalled(format!("budget of {budget} iterations exhausted at size {}", rm.len())))
}

/// One constructive step from `rm`, which must be a rainbow matching of
/// `fam` smaller than the target. Fails with [`Error::Stalled`] when no step
/// applies.
pub fn improvement_step(
    g: &BipartiteGraph,
    fam: &EdgeFamily,
    rm: &RainbowMatching,
) -> Result<(RainbowMatching, TrailStep), Error> {
    rm.verify(fam)?;
    improve(g, fam, rm).map_err(Error::Stalled)
}

/// One improvement step. Errors describe why the step could not proceed.
fn improve(g: &BipartiteGraph, fam: &EdgeFamily, rm: &RainbowMatching) -> Result<(RainbowMatching, TrailStep), String> {
    let text = |e: Error| e.to_string();
    let (net, nf) = build_network(g, fam, rm).map_err(text)?;
    if let Some(p) = exhaustive_rainbow_path(&net, &nf).map_err(text)? {
        let alt = path_to_alternating(&net, &nf, &p.path, &p.representation).map_err(text)?;
        let reps: Vec<usize> = p.representation.iter().map(|&pos| nf.member_id(pos)).collect();
        let next = augment(fam, rm, &alt, &reps).map_err(text)?;
        let size = next.len();
        return Ok((next, TrailStep::Augment { path: alt.edges().to_vec(), size }));
    }
    let r = find_regimentation(&net, &nf)
        .map_err(text)?
        .ok_or("no rainbow s-t path and no regimentation")?;
    Step { fam, rm, net: &net, nf: &nf, r: &r }.run()
}

struct Step<'a> {
    fam: &'a EdgeFamily,
    rm: &'a RainbowMatching,
    net: &'a Network,
    nf: &'a NetworkFamily,
    r: &'a Regimentation,
}

impl Step<'_> {
    fn run(&self) -> Result<(RainbowMatching, TrailStep), String> {
        let text = |e: Error| e.to_string();
        let inessential = self.r.inessential(self.nf.len());
        let ie_members: Vec<usize> = inessential.iter().map(|&p| self.nf.member_id(p)).collect();
        let ie_edges = self.fam.union_of(ie_members.iter().copied());

        let Some((pos, pq)) = inessential
            .iter()
            .find_map(|&p| self.nf.set(p).first().map(|a| (p, *a)))
        else {
            return self.swap(&ie_members, &ie_edges);
        };

        let qi = self
            .r
            .paths
            .iter()
            .position(|q| is_backward(&pq, q))
            .ok_or_else(|| format!("inessential arc {pq} is not backward on any path"))?;
        let path_q = &self.r.paths[qi];
        let ell = path_q.position(pq.from).unwrap();
        let b = path_q.position(pq.to).unwrap();
        let p_edge = self.label(pq.from)?;
        let s_p = self.rm.member_of(&p_edge).ok_or("p is not represented")?;
        let s = self.nf.member_id(pos);

        let mut pool: BTreeMap<usize, VecDeque<usize>> = (0..self.r.paths.len())
            .map(|i| (i, self.r.assigned_to(i).into_iter().collect()))
            .collect();

        let mut joint: EdgeSet = self.fam.sets()[s_p].clone();
        joint.extend(ie_edges.iter().copied());
        let matched = self.rm.edges();
        let ax = *max_matching_of(&joint)
            .edges()
            .iter()
            .find(|e| matched.iter().all(|m| m.a != e.a))
            .ok_or("no edge from an unmatched A vertex; the hypothesis fails")?;

        let Some(h) = matched.iter().find(|m| m.b == ax.b).copied() else {
            if let Some(&member) = ie_members.iter().find(|&&m| self.fam.sets()[m].contains(&ax)) {
                let mut assignment = self.rm.assignment().clone();
                assignment.insert(member, ax);
                let next = RainbowMatching::new(self.fam, assignment).map_err(text)?;
                let size = next.len();
                return Ok((next, TrailStep::DirectAdd { member, edge: ax, size }));
            }
            let alt = AlternatingPath::new(vec![ax]).map_err(text)?;
            return self.doubled(&alt, &[s_p], path_q, b, ell, s, pool.get_mut(&qi).unwrap());
        };

        if !self.fam.sets()[s_p].contains(&ax) {
            return Err(format!("{ax} reaches a matched vertex but is not in the member holding p"));
        }
        let hv = self.net.vertex_of(&h).ok_or("matching edge missing from the network")?;
        let qh = self
            .r
            .paths
            .iter()
            .position(|q| q.contains(hv))
            .ok_or("regimentation does not cover h")?;
        let tail = &self.r.paths[qh].vertices()[self.r.paths[qh].position(hv).unwrap()..];
        let mut vertices = vec![Vertex::Source];
        vertices.extend_from_slice(tail);
        let path = StPath::new(vertices).map_err(text)?;

        let mut chosen = vec![ax];
        let mut reps = vec![s_p];
        let holders = pool.get_mut(&qh).unwrap();
        for a in path.arcs().into_iter().skip(1) {
            let pos = holders.pop_front().ok_or("path has too few assigned members")?;
            let pre = self
                .nf
                .preimages(pos, &a)
                .and_then(|p| p.first())
                .ok_or_else(|| format!("assigned member lacks arc {a}"))?;
            chosen.push(*pre);
            reps.push(self.nf.member_id(pos));
        }
        let alt = alternating_from_preimages(self.net, &path, &chosen).map_err(text)?;

        if qh == qi && path_q.position(hv).unwrap() <= ell {
            let next = augment(self.fam, self.rm, &alt, &reps).map_err(text)?;
            let size = next.len();
            return Ok((next, TrailStep::Augment { path: alt.edges().to_vec(), size }));
        }
        self.doubled(&alt, &reps, path_q, b, ell, s, pool.get_mut(&qi).unwrap())
    }

    fn label(&self, v: Vertex) -> Result<Edge, String> {
        self.net.label(v).ok_or_else(|| format!("{v} carries no matching edge"))
    }

    /// Every inessential member lies inside `M`: hand an edge of `M` from the
    /// member representing it to an inessential member containing it.
    fn swap(&self, ie_members: &[usize], ie_edges: &EdgeSet) -> Result<(RainbowMatching, TrailStep), String> {
        let (&released, &edge) = self
            .rm
            .assignment()
            .iter()
            .find(|(_, e)| ie_edges.contains(e))
            .ok_or("inessential members are empty")?;
        let taken_by = *ie_members
            .iter()
            .find(|&&m| self.fam.sets()[m].contains(&edge))
            .unwrap();
        let mut next = self.rm.clone();
        next.reassign(self.fam, &edge, taken_by).map_err(|e| e.to_string())?;
        Ok((next, TrailStep::Swap { released, taken_by, edge }))
    }

    /// Applies `alt`, which leaves the member holding `p` doubled, then
    /// switches around the cycle `p_A q_B, y_b, e_b, ..., e_{l-1}, y_l`.
    #[allow(clippy::too_many_arguments)]
    fn doubled(
        &self,
        alt: &AlternatingPath,
        reps: &[usize],
        path_q: &StPath,
        b: usize,
        ell: usize,
        s: usize,
        holders: &mut VecDeque<usize>,
    ) -> Result<(RainbowMatching, TrailStep), String> {
        let text = |e: Error| e.to_string();
        let ys = path_q.vertices();
        let (p, q) = (self.label(ys[ell])?, self.label(ys[b])?);
        let mut cycle = vec![Edge::new(p.a, q.b)];
        let mut cycle_reps = vec![s];
        for i in b..ell {
            let (y, next) = (self.label(ys[i])?, self.label(ys[i + 1])?);
            cycle.push(y);
            cycle.push(Edge::new(y.a, next.b));
            let pos = holders.pop_front().ok_or("path has too few assigned members")?;
            cycle_reps.push(self.nf.member_id(pos));
        }
        cycle.push(p);
        let candidate = apply_augmenting(self.rm, alt, reps).map_err(text)?;
        let next = rectify(self.fam, &candidate, &cycle, &cycle_reps).map_err(text)?;
        let size = next.len();
        Ok((
            next,
            TrailStep::Rectify {
                path: alt.edges().to_vec(),
                cycle,
                size,
            },
        ))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArrowOutcome {
    /// Hypothesis and conclusion both hold; `witness` is the size found (at least `q`).
    Holds { witness: usize },
    HypothesisFailure { failing: Vec<usize>, nu: usize },
    /// The hypothesis holds and the largest rainbow matching has size `nu_r < q`.
    Counterexample { nu_r: usize },
}

/// Checks the statement "every `k` members have a matching of size `n` in
/// their union, hence a rainbow matching of size `q` exists" on one family
/// of `m` nonempty members.
pub fn verify_arrow_statement(m: usize, k: usize, n: usize, q: usize, fam: &EdgeFamily) -> Result<ArrowOutcome, Error> {
    if fam.len() != m {
        return Err(Error::SizeMismatch {
            expected: m,
            actual: fam.len(),
        });
    }
    let empty = fam.empty_members();
    if empty > 0 {
        return Err(Error::TooManyEmpty { empty, allowed: 0 });
    }
    if q == 0 {
        return Ok(ArrowOutcome::Holds { witness: 0 });
    }
    if let Cooperation::Fail { members, nu } = cooperative_condition(fam, k, n)? {
        return Ok(ArrowOutcome::HypothesisFailure { failing: members, nu });
    }
    let found = rainbow_matching_at_least(fam, q).len();
    Ok(if found >= q {
        ArrowOutcome::Holds { witness: found }
    } else {
        ArrowOutcome::Counterexample { nu_r: found }
    })
}
