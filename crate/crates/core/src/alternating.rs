//! Alternating walks in the graph: translating network paths back into
//! augmenting paths, applying symmetric differences, and repairing a member
//! that ends up represented twice.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::graph::{is_matching, Edge, EdgeFamily, GraphVertex, RainbowMatching};
use crate::network::{Network, NetworkFamily, StPath, Vertex};

/// Vertex sequence of a walk along `edges`, checking that consecutive edges
/// meet and no vertex repeats. A closed walk must return to its start.
fn walk_vertices(edges: &[Edge], closed: bool) -> Result<Vec<GraphVertex>, Error> {
    let bad = |msg: &str| Error::InvalidAlternating(msg.to_string());
    let first = *edges.first().ok_or_else(|| bad("empty walk"))?;
    let start = match edges.get(1) {
        None => GraphVertex::A(first.a),
        Some(second) if second.b == first.b && second.a != first.a => GraphVertex::A(first.a),
        Some(second) if second.a == first.a && second.b != first.b => GraphVertex::B(first.b),
        Some(_) => return Err(bad("first two edges do not meet in one vertex")),
    };
    let mut vertices = vec![start];
    let mut cur = start;
    for e in edges {
        cur = match cur {
            GraphVertex::A(a) if a == e.a => GraphVertex::B(e.b),
            GraphVertex::B(b) if b == e.b => GraphVertex::A(e.a),
            _ => return Err(bad("consecutive edges do not meet")),
        };
        vertices.push(cur);
    }
    let body = if closed {
        if vertices.last() != vertices.first() || !edges.len().is_multiple_of(2) {
            return Err(bad("cycle does not close with an even number of edges"));
        }
        &vertices[..vertices.len() - 1]
    } else {
        &vertices[..]
    };
    let distinct: BTreeSet<_> = body.iter().collect();
    if distinct.len() != body.len() {
        return Err(bad("walk repeats a vertex"));
    }
    Ok(vertices)
}

/// A simple path in the graph given by its edges in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlternatingPath {
    edges: Vec<Edge>,
}

impl AlternatingPath {
    pub fn new(edges: Vec<Edge>) -> Result<Self, Error> {
        walk_vertices(&edges, false)?;
        Ok(AlternatingPath { edges })
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Vertices in walking order. A single edge is read from its A end.
    pub fn vertices(&self) -> Vec<GraphVertex> {
        walk_vertices(&self.edges, false).expect("validated on construction")
    }

    /// Edges at even positions: the ones a symmetric difference adds.
    pub fn added_edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter().step_by(2)
    }
}

/// Edges with the member each represents. Unlike [`RainbowMatching`] a member
/// may appear twice, which is the intermediate state repaired by [`rectify`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    pairs: BTreeMap<Edge, usize>,
}

impl Representation {
    pub fn from_rainbow(rm: &RainbowMatching) -> Self {
        Representation {
            pairs: rm.assignment().iter().map(|(&m, &e)| (e, m)).collect(),
        }
    }

    pub fn pairs(&self) -> &BTreeMap<Edge, usize> {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// Members carried by more than one edge.
    pub fn doubled_members(&self) -> Vec<usize> {
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for &m in self.pairs.values() {
            *count.entry(m).or_default() += 1;
        }
        count.into_iter().filter(|&(_, c)| c > 1).map(|(m, _)| m).collect()
    }

    /// Symmetric difference with an alternating walk whose even-position
    /// edges are new (represented by `new_reps` in order) and whose
    /// odd-position edges are current and get dropped with their members.
    pub fn apply(&self, walk: &[Edge], new_reps: &[usize]) -> Result<Representation, Error> {
        let added: Vec<&Edge> = walk.iter().step_by(2).collect();
        if added.len() != new_reps.len() {
            return Err(Error::InvalidAlternating(format!(
                "{} new edges but {} representatives",
                added.len(),
                new_reps.len()
            )));
        }
        let mut pairs = self.pairs.clone();
        for e in walk.iter().skip(1).step_by(2) {
            if pairs.remove(e).is_none() {
                return Err(Error::InvalidAlternating(format!("{e} is not a current edge")));
            }
        }
        for (e, &m) in added.into_iter().zip(new_reps) {
            if self.pairs.contains_key(e) || pairs.insert(*e, m).is_some() {
                return Err(Error::InvalidAlternating(format!("{e} is already present")));
            }
        }
        if !is_matching(pairs.keys()) {
            return Err(Error::NotAMatching);
        }
        Ok(Representation { pairs })
    }

    /// Converts to a rainbow matching, failing when a member is represented twice.
    pub fn into_rainbow(self, fam: &EdgeFamily) -> Result<RainbowMatching, Error> {
        if let Some(&member) = self.doubled_members().first() {
            return Err(Error::RepresentationClash { member });
        }
        let assignment = self.pairs.into_iter().map(|(e, m)| (m, e)).collect();
        RainbowMatching::new(fam, assignment)
    }
}

/// Reads the least preimage for each arc of `path` from the member chosen in
/// `rep` (positions in `nf`), and interleaves the matching edges of the inner
/// vertices the path passes through.
pub fn path_to_alternating(
    net: &Network,
    nf: &NetworkFamily,
    path: &StPath,
    rep: &[usize],
) -> Result<AlternatingPath, Error> {
    let arcs = path.arcs();
    if rep.len() != arcs.len() {
        return Err(Error::InvalidRepresentation(format!(
            "{} arcs but {} representatives",
            arcs.len(),
            rep.len()
        )));
    }
    if rep.iter().collect::<BTreeSet<_>>().len() != rep.len() {
        return Err(Error::InvalidRepresentation("a member represents two arcs".into()));
    }
    let mut chosen = Vec::with_capacity(arcs.len());
    for (a, &pos) in arcs.iter().zip(rep) {
        if pos >= nf.len() || !nf.set(pos).contains(a) {
            return Err(Error::InvalidRepresentation(format!("arc {a} not in member {pos}")));
        }
        let pre = nf
            .preimages(pos, a)
            .and_then(|p| p.first())
            .ok_or(Error::MissingPreimage { member: pos, arc: *a })?;
        chosen.push(*pre);
    }
    alternating_from_preimages(net, path, &chosen)
}

/// Alternating path for `path` given one chosen graph edge per arc.
pub fn alternating_from_preimages(
    net: &Network,
    path: &StPath,
    chosen: &[Edge],
) -> Result<AlternatingPath, Error> {
    let mut edges = Vec::with_capacity(2 * chosen.len());
    for (i, (a, pre)) in path.arcs().iter().zip(chosen).enumerate() {
        if i > 0 {
            let m = net
                .label(a.from)
                .ok_or_else(|| Error::InvalidPath(format!("{} carries no matching edge", a.from)))?;
            edges.push(m);
        }
        let (from_ok, to_ok) = (
            net.label(a.from).map_or(a.from == Vertex::Source, |m| m.a == pre.a),
            net.label(a.to).map_or(a.to == Vertex::Target, |m| m.b == pre.b),
        );
        if !from_ok || !to_ok {
            return Err(Error::InvalidAlternating(format!("{pre} is not a preimage of {a}")));
        }
        edges.push(*pre);
    }
    AlternatingPath::new(edges)
}

/// Augments `rm` along an augmenting path. `new_reps[i]` is the member that
/// represents the `i`-th added edge; members whose edges leave the matching
/// lose their representation.
pub fn augment(
    fam: &EdgeFamily,
    rm: &RainbowMatching,
    alt: &AlternatingPath,
    new_reps: &[usize],
) -> Result<RainbowMatching, Error> {
    let out = apply_augmenting(rm, alt, new_reps)?.into_rainbow(fam)?;
    debug_assert_eq!(out.len(), rm.len() + 1);
    Ok(out)
}

/// Like [`augment`] but tolerates a member ending up represented twice.
pub fn apply_augmenting(
    rm: &RainbowMatching,
    alt: &AlternatingPath,
    new_reps: &[usize],
) -> Result<Representation, Error> {
    if alt.edges().len().is_multiple_of(2) {
        return Err(Error::InvalidAlternating("augmenting paths have odd length".into()));
    }
    Representation::from_rainbow(rm).apply(alt.edges(), new_reps)
}

/// Repairs a representation in which exactly one member is represented twice
/// by switching along an alternating cycle. `cycle` alternates new edges (even
/// positions, represented by `cycle_reps`) with current edges.
pub fn rectify(
    fam: &EdgeFamily,
    candidate: &Representation,
    cycle: &[Edge],
    cycle_reps: &[usize],
) -> Result<RainbowMatching, Error> {
    match candidate.doubled_members().len() {
        0 => return Err(Error::NoDoubleRepresentation),
        1 => {}
        n => {
            return Err(Error::Precondition(format!(
                "{n} members are represented twice"
            )))
        }
    }
    walk_vertices(cycle, true)?;
    let out = candidate.apply(cycle, cycle_reps)?;
    debug_assert_eq!(out.len(), candidate.len());
    out.into_rainbow(fam)
}
