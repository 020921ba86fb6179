//! Bipartite graphs, edge sets, families of edge sets and rainbow matchings.
//!
//! Vertices are identified by side and a 1-based index: `a1..a_left` on the
//! A side and `b1..b_right` on the B side. Families are ordered sequences
//! and member identity is position (0-based in this crate), so repeated sets
//! at different positions are distinct members.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::Error;

/// An edge `a_i b_j` of a bipartite graph. Ordered lexicographically by `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
}

impl Edge {
    pub const fn new(a: usize, b: usize) -> Self {
        Edge { a, b }
    }

    /// True when the two edges share an endpoint.
    pub fn touches(&self, other: &Edge) -> bool {
        self.a == other.a || self.b == other.b
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}b{}", self.a, self.b)
    }
}

impl From<(usize, usize)> for Edge {
    fn from((a, b): (usize, usize)) -> Self {
        Edge { a, b }
    }
}

pub type EdgeSet = BTreeSet<Edge>;

/// Builds an edge set from `(a, b)` pairs.
pub fn edge_set<I: IntoIterator<Item = (usize, usize)>>(pairs: I) -> EdgeSet {
    pairs.into_iter().map(Edge::from).collect()
}

/// A vertex of the bipartite graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GraphVertex {
    A(usize),
    B(usize),
}

impl fmt::Display for GraphVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphVertex::A(i) => write!(f, "a{i}"),
            GraphVertex::B(j) => write!(f, "b{j}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    left: usize,
    right: usize,
    edges: EdgeSet,
}

impl BipartiteGraph {
    pub fn new(left: usize, right: usize, edges: EdgeSet) -> Result<Self, Error> {
        if left == 0 || right == 0 {
            return Err(Error::EmptySide);
        }
        if let Some(e) = edges
            .iter()
            .find(|e| e.a == 0 || e.a > left || e.b == 0 || e.b > right)
        {
            return Err(Error::EdgeOutOfRange(*e));
        }
        Ok(BipartiteGraph { left, right, edges })
    }

    /// The complete bipartite graph `K_{left,right}`.
    pub fn complete(left: usize, right: usize) -> Result<Self, Error> {
        let edges = (1..=left)
            .flat_map(|a| (1..=right).map(move |b| Edge::new(a, b)))
            .collect();
        Self::new(left, right, edges)
    }

    pub fn left_size(&self) -> usize {
        self.left
    }

    pub fn right_size(&self) -> usize {
        self.right
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.edges.contains(e)
    }

    /// Checks that every member of `fam` lives in this graph.
    pub fn check_family(&self, fam: &EdgeFamily) -> Result<(), Error> {
        for set in fam.sets() {
            if let Some(e) = set.iter().find(|e| !self.contains(e)) {
                return Err(Error::EdgeOutOfRange(*e));
            }
        }
        Ok(())
    }
}

/// A set of pairwise disjoint edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Matching {
    edges: EdgeSet,
}

impl Matching {
    pub fn new(edges: EdgeSet) -> Result<Self, Error> {
        if !is_matching(&edges) {
            return Err(Error::NotAMatching);
        }
        Ok(Matching { edges })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn into_edges(self) -> EdgeSet {
        self.edges
    }
}

/// True when no two edges of `edges` share a vertex.
pub fn is_matching<'a, I>(edges: I) -> bool
where
    I: IntoIterator<Item = &'a Edge>,
{
    let mut a_seen = BTreeSet::new();
    let mut b_seen = BTreeSet::new();
    edges
        .into_iter()
        .all(|e| a_seen.insert(e.a) && b_seen.insert(e.b))
}

/// An ordered multiset of edge sets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeFamily {
    sets: Vec<EdgeSet>,
}

impl EdgeFamily {
    pub fn new(sets: Vec<EdgeSet>) -> Self {
        EdgeFamily { sets }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[EdgeSet] {
        &self.sets
    }

    pub fn set(&self, member: usize) -> Option<&EdgeSet> {
        self.sets.get(member)
    }

    /// Union of the members with the given indices.
    pub fn union_of<I: IntoIterator<Item = usize>>(&self, members: I) -> EdgeSet {
        let mut out = EdgeSet::new();
        for i in members {
            out.extend(self.sets[i].iter().copied());
        }
        out
    }

    pub fn union(&self) -> EdgeSet {
        self.union_of(0..self.sets.len())
    }

    pub fn empty_members(&self) -> usize {
        self.sets.iter().filter(|s| s.is_empty()).count()
    }

    /// Largest vertex index used on each side, `(max_a, max_b)`.
    pub fn extent(&self) -> (usize, usize) {
        self.sets.iter().flatten().fold((0, 0), |(ma, mb), e| {
            (ma.max(e.a), mb.max(e.b))
        })
    }

    pub fn permuted(&self, order: &[usize]) -> EdgeFamily {
        EdgeFamily::new(order.iter().map(|&i| self.sets[i].clone()).collect())
    }
}

impl FromIterator<EdgeSet> for EdgeFamily {
    fn from_iter<T: IntoIterator<Item = EdgeSet>>(iter: T) -> Self {
        EdgeFamily::new(iter.into_iter().collect())
    }
}

/// A matching together with an injective assignment of family members to
/// its edges: member `i` is represented by `assignment[i]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RainbowMatching {
    assignment: BTreeMap<usize, Edge>,
}

impl RainbowMatching {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Builds and validates a rainbow matching of `fam`.
    pub fn new(fam: &EdgeFamily, assignment: BTreeMap<usize, Edge>) -> Result<Self, Error> {
        let rm = RainbowMatching { assignment };
        rm.verify(fam)?;
        Ok(rm)
    }

    pub(crate) fn from_assignment_unchecked(assignment: BTreeMap<usize, Edge>) -> Self {
        RainbowMatching { assignment }
    }

    /// Independent validity check against `fam`.
    pub fn verify(&self, fam: &EdgeFamily) -> Result<(), Error> {
        let mut seen = EdgeSet::new();
        for (&member, e) in &self.assignment {
            let set = fam.set(member).ok_or(Error::MemberOutOfRange(member))?;
            if !set.contains(e) {
                return Err(Error::EdgeNotInMember { member, edge: *e });
            }
            if !seen.insert(*e) {
                return Err(Error::RepresentationClash { member });
            }
        }
        if !is_matching(&seen) {
            return Err(Error::NotAMatching);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn assignment(&self) -> &BTreeMap<usize, Edge> {
        &self.assignment
    }

    pub fn edges(&self) -> EdgeSet {
        self.assignment.values().copied().collect()
    }

    pub fn matching(&self) -> Matching {
        Matching { edges: self.edges() }
    }

    pub fn represents(&self, member: usize) -> bool {
        self.assignment.contains_key(&member)
    }

    /// Member represented by `edge`, if any.
    pub fn member_of(&self, edge: &Edge) -> Option<usize> {
        self.assignment
            .iter()
            .find_map(|(&m, e)| (e == edge).then_some(m))
    }

    /// Moves the representation of `edge` from its current member to `to`.
    pub fn reassign(&mut self, fam: &EdgeFamily, edge: &Edge, to: usize) -> Result<usize, Error> {
        let from = self.member_of(edge).ok_or(Error::NotAMatching)?;
        if self.assignment.contains_key(&to) {
            return Err(Error::RepresentationClash { member: to });
        }
        if !fam.set(to).ok_or(Error::MemberOutOfRange(to))?.contains(edge) {
            return Err(Error::EdgeNotInMember {
                member: to,
                edge: *edge,
            });
        }
        self.assignment.remove(&from);
        self.assignment.insert(to, *edge);
        Ok(from)
    }

    /// Keeps the `size` lowest-indexed representations.
    pub fn truncated(&self, size: usize) -> RainbowMatching {
        RainbowMatching {
            assignment: self
                .assignment
                .iter()
                .take(size)
                .map(|(&m, &e)| (m, e))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_has_all_edges() {
        let g = BipartiteGraph::complete(2, 3).unwrap();
        assert_eq!(g.edges().len(), 6);
        assert!(g.contains(&Edge::new(2, 3)));
        assert!(!g.contains(&Edge::new(3, 1)));
    }

    #[test]
    fn rejects_out_of_range_edges() {
        let err = BipartiteGraph::new(2, 2, edge_set([(1, 3)])).unwrap_err();
        assert_eq!(err, Error::EdgeOutOfRange(Edge::new(1, 3)));
        assert_eq!(
            BipartiteGraph::new(0, 2, EdgeSet::new()).unwrap_err(),
            Error::EmptySide
        );
    }

    #[test]
    fn matching_rejects_shared_vertex() {
        assert!(Matching::new(edge_set([(1, 1), (2, 2)])).is_ok());
        assert_eq!(
            Matching::new(edge_set([(1, 1), (1, 2)])).unwrap_err(),
            Error::NotAMatching
        );
    }

    #[test]
    fn rainbow_matching_validation() {
        let fam = EdgeFamily::new(vec![
            edge_set([(1, 1), (2, 2)]),
            edge_set([(1, 2), (2, 1)]),
            edge_set([(1, 1)]),
        ]);
        let ok = RainbowMatching::new(
            &fam,
            BTreeMap::from([(0, Edge::new(2, 2)), (2, Edge::new(1, 1))]),
        );
        assert!(ok.is_ok());

        let not_member = RainbowMatching::new(&fam, BTreeMap::from([(2, Edge::new(2, 2))]));
        assert!(matches!(not_member, Err(Error::EdgeNotInMember { member: 2, .. })));

        let same_edge = RainbowMatching::new(
            &fam,
            BTreeMap::from([(0, Edge::new(1, 1)), (2, Edge::new(1, 1))]),
        );
        assert!(matches!(same_edge, Err(Error::RepresentationClash { .. })));

        let clash = RainbowMatching::new(
            &fam,
            BTreeMap::from([(0, Edge::new(1, 1)), (1, Edge::new(1, 2))]),
        );
        assert_eq!(clash.unwrap_err(), Error::NotAMatching);
    }

    #[test]
    fn reassign_moves_representation() {
        let fam = EdgeFamily::new(vec![edge_set([(1, 1)]), edge_set([(1, 1), (2, 2)])]);
        let mut rm = RainbowMatching::new(&fam, BTreeMap::from([(0, Edge::new(1, 1))])).unwrap();
        let from = rm.reassign(&fam, &Edge::new(1, 1), 1).unwrap();
        assert_eq!(from, 0);
        assert_eq!(rm.member_of(&Edge::new(1, 1)), Some(1));
        assert!(rm.verify(&fam).is_ok());
    }
}
