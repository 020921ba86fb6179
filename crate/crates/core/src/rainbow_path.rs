//! Rainbow s-t paths in a family of arc sets.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;

use crate::error::Error;
use crate::network::{has_st_path, Arc, ArcSet, Network, NetworkFamily, StPath, Vertex};
use crate::regimentation::{find_regimentation, verify_regimentation, Regimentation};

/// Default inner-vertex bound for [`exhaustive_rainbow_path`].
pub const PATH_SEARCH_BOUND: usize = 8;

/// An s-t path whose `i`-th arc is represented by family position
/// `representation[i]`, all positions distinct.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RainbowStPath {
    pub path: StPath,
    pub representation: Vec<usize>,
}

impl RainbowStPath {
    /// Independent check: one distinct member per arc, each owning its arc.
    pub fn verify(&self, nf: &NetworkFamily) -> bool {
        let arcs = self.path.arcs();
        arcs.len() == self.representation.len()
            && self.representation.iter().collect::<BTreeSet<_>>().len() == arcs.len()
            && arcs
                .iter()
                .zip(&self.representation)
                .all(|(a, &p)| p < nf.len() && nf.set(p).contains(a))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GreedyOutcome {
    Path(RainbowStPath),
    /// Maximal rainbow tree not reaching `t`: its arcs with their members,
    /// and the members left unrepresented.
    Stuck {
        tree: Vec<(Arc, usize)>,
        unrepresented: Vec<usize>,
    },
}

/// Grows a rainbow out-tree from `s`, one new member per arc, always taking
/// the least `(member, arc)` pair that leaves the tree.
pub fn greedy_rainbow_tree(nf: &NetworkFamily) -> GreedyOutcome {
    let mut in_tree = BTreeSet::from([Vertex::Source]);
    let mut parent: BTreeMap<Vertex, (Arc, usize)> = BTreeMap::new();
    let mut used = vec![false; nf.len()];
    let mut order = Vec::new();
    loop {
        let next = (0..nf.len()).filter(|&m| !used[m]).find_map(|m| {
            nf.set(m)
                .iter()
                .find(|a| in_tree.contains(&a.from) && !in_tree.contains(&a.to))
                .map(|a| (m, *a))
        });
        let Some((m, a)) = next else {
            let unrepresented = (0..nf.len()).filter(|&m| !used[m]).collect();
            let tree = order.iter().map(|v| parent[v]).collect();
            return GreedyOutcome::Stuck { tree, unrepresented };
        };
        used[m] = true;
        in_tree.insert(a.to);
        parent.insert(a.to, (a, m));
        order.push(a.to);
        if a.to == Vertex::Target {
            let mut vertices = vec![Vertex::Target];
            let mut representation = Vec::new();
            let mut v = Vertex::Target;
            while let Some(&(arc, member)) = parent.get(&v) {
                representation.push(member);
                vertices.push(arc.from);
                v = arc.from;
            }
            vertices.reverse();
            representation.reverse();
            let path = StPath::new(vertices).expect("tree paths are simple");
            let out = RainbowStPath { path, representation };
            debug_assert!(out.verify(nf));
            return GreedyOutcome::Path(out);
        }
    }
}

/// Complete search for a rainbow s-t path; the first hit in lexicographic
/// order of (vertex sequence, representation) is returned.
pub fn exhaustive_rainbow_path(
    net: &Network,
    nf: &NetworkFamily,
) -> Result<Option<RainbowStPath>, Error> {
    exhaustive_rainbow_path_bounded(net, nf, PATH_SEARCH_BOUND)
}

pub fn exhaustive_rainbow_path_bounded(
    net: &Network,
    nf: &NetworkFamily,
    bound: usize,
) -> Result<Option<RainbowStPath>, Error> {
    if net.inner_count() > bound {
        return Err(Error::BoundExceeded {
            inner: net.inner_count(),
            bound,
        });
    }
    let union = nf.union();
    let mut stack = vec![Vertex::Source];
    Ok(search_paths(&union, nf, &mut stack))
}

fn search_paths(union: &ArcSet, nf: &NetworkFamily, stack: &mut Vec<Vertex>) -> Option<RainbowStPath> {
    // A path with more arcs than members cannot be rainbow.
    if stack.len() > nf.len() {
        return None;
    }
    let v = *stack.last().unwrap();
    let next: Vec<Vertex> = union
        .range(Arc { from: v, to: Vertex::Source }..)
        .take_while(|a| a.from == v)
        .map(|a| a.to)
        .collect();
    for w in next {
        if stack.contains(&w) {
            continue;
        }
        stack.push(w);
        let found = if w == Vertex::Target {
            let path = StPath::new(stack.clone()).expect("simple by construction");
            represent(&path, nf).map(|representation| RainbowStPath { path, representation })
        } else {
            search_paths(union, nf, stack)
        };
        stack.pop();
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Lexicographically least injective representation of the path's arcs.
pub fn represent(path: &StPath, nf: &NetworkFamily) -> Option<Vec<usize>> {
    fn go(arcs: &[Arc], nf: &NetworkFamily, used: &mut Vec<bool>, rep: &mut Vec<usize>) -> bool {
        let Some(a) = arcs.get(rep.len()) else {
            return true;
        };
        for m in 0..nf.len() {
            if !used[m] && nf.set(m).contains(a) {
                used[m] = true;
                rep.push(m);
                if go(arcs, nf, used, rep) {
                    return true;
                }
                rep.pop();
                used[m] = false;
            }
        }
        false
    }
    let arcs = path.arcs();
    let mut rep = Vec::with_capacity(arcs.len());
    go(&arcs, nf, &mut vec![false; nf.len()], &mut rep).then_some(rep)
}

/// First `k`-subset of positions (lexicographic) whose union has no s-t path.
/// Vacuously `None` when the family has fewer than `k` members.
pub fn union_path_condition(nf: &NetworkFamily, k: usize) -> Option<Vec<usize>> {
    (0..nf.len())
        .combinations(k)
        .find(|c| !has_st_path(&nf.union_of(c.iter().copied())))
}

/// Evidence that neither outcome of the dichotomy was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolationReport {
    pub inner_count: usize,
    pub k: usize,
    pub sets: Vec<ArcSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Dichotomy {
    Path(RainbowStPath),
    Certificate(Regimentation),
    Violation(ViolationReport),
}

/// For a family of `inner + k - 1` arc sets in which every `k` members
/// jointly contain an s-t path: a rainbow s-t path if one exists, otherwise a
/// verified regimentation.
pub fn dichotomy(net: &Network, nf: &NetworkFamily, k: usize) -> Result<Dichotomy, Error> {
    if k == 0 {
        return Err(Error::Parameters("k must be at least 1".into()));
    }
    let expected = net.inner_count() + k - 1;
    if nf.len() != expected {
        return Err(Error::SizeMismatch {
            expected,
            actual: nf.len(),
        });
    }
    if let Some(subset) = union_path_condition(nf, k) {
        return Err(Error::HypothesisFailure(subset));
    }
    if let Some(p) = exhaustive_rainbow_path(net, nf)? {
        return Ok(Dichotomy::Path(p));
    }
    if let Some(r) = find_regimentation(net, nf)? {
        if verify_regimentation(net, nf, &r).is_ok() {
            return Ok(Dichotomy::Certificate(r));
        }
    }
    Ok(Dichotomy::Violation(ViolationReport {
        inner_count: net.inner_count(),
        k,
        sets: nf.sets().to_vec(),
    }))
}
