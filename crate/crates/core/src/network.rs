//! Networks over a current rainbow matching, families of arc sets, s-t paths
//! and contraction of a source arc.
//!
//! A network has a source `s`, a target `t` and inner vertices identified by
//! an id. When built from a rainbow matching `M`, inner vertex `i` stands for
//! the `i`-th edge of `M` in sorted order. No arc enters `s` or leaves `t`.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::Error;
use crate::graph::{BipartiteGraph, Edge, EdgeFamily, EdgeSet, RainbowMatching};

/// Ordered `s < inner vertices (by id) < t`, which fixes every
/// lexicographic order used by the searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Vertex {
    Source,
    Inner(usize),
    Target,
}

impl Vertex {
    pub fn inner_id(&self) -> Option<usize> {
        match self {
            Vertex::Inner(i) => Some(*i),
            _ => None,
        }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Vertex::Source => write!(f, "s"),
            Vertex::Target => write!(f, "t"),
            Vertex::Inner(i) => write!(f, "v{i}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arc {
    pub from: Vertex,
    pub to: Vertex,
}

impl Arc {
    /// Rejects arcs into `s`, out of `t`, and loops.
    pub fn new(from: Vertex, to: Vertex) -> Result<Self, Error> {
        let arc = Arc { from, to };
        if from == Vertex::Target || to == Vertex::Source || from == to {
            return Err(Error::InvalidArc(arc));
        }
        Ok(arc)
    }

    pub fn touches(&self, v: Vertex) -> bool {
        self.from == v || self.to == v
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

/// Shorthand for tests and fixtures: `arc(S, I(0))`.
pub fn arc(from: Vertex, to: Vertex) -> Arc {
    Arc::new(from, to).expect("valid arc")
}

pub type ArcSet = BTreeSet<Arc>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    inner: BTreeMap<usize, Option<Edge>>,
    arcs: ArcSet,
}

impl Network {
    /// A network with inner vertices `0..inner_count`, unlabeled.
    pub fn new(inner_count: usize, arcs: ArcSet) -> Result<Self, Error> {
        Self::with_inner((0..inner_count).map(|i| (i, None)).collect(), arcs)
    }

    pub fn with_inner(inner: BTreeMap<usize, Option<Edge>>, arcs: ArcSet) -> Result<Self, Error> {
        let net = Network {
            inner,
            arcs: ArcSet::new(),
        };
        for a in &arcs {
            net.check_arc(a)?;
        }
        Ok(Network { arcs, ..net })
    }

    /// A network whose arcs are the union of the family's members.
    pub fn from_family(inner_count: usize, nf: &NetworkFamily) -> Result<Self, Error> {
        Self::new(inner_count, nf.union())
    }

    fn check_arc(&self, a: &Arc) -> Result<(), Error> {
        Arc::new(a.from, a.to)?;
        for v in [a.from, a.to] {
            if let Vertex::Inner(i) = v {
                if !self.inner.contains_key(&i) {
                    return Err(Error::NotInner(v));
                }
            }
        }
        Ok(())
    }

    pub fn inner_count(&self) -> usize {
        self.inner.len()
    }

    pub fn inner_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.inner.keys().map(|&i| Vertex::Inner(i))
    }

    pub fn is_inner(&self, v: Vertex) -> bool {
        v.inner_id().is_some_and(|i| self.inner.contains_key(&i))
    }

    /// The matching edge an inner vertex stands for, when built from a matching.
    pub fn label(&self, v: Vertex) -> Option<Edge> {
        v.inner_id().and_then(|i| self.inner.get(&i).copied().flatten())
    }

    /// Inner vertex labelled by matching edge `e`.
    pub fn vertex_of(&self, e: &Edge) -> Option<Vertex> {
        self.inner
            .iter()
            .find_map(|(&i, l)| (l.as_ref() == Some(e)).then_some(Vertex::Inner(i)))
    }

    pub fn arcs(&self) -> &ArcSet {
        &self.arcs
    }

    pub fn has_arc(&self, a: &Arc) -> bool {
        self.arcs.contains(a)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        std::iter::once(Vertex::Source)
            .chain(self.inner_vertices())
            .chain(std::iter::once(Vertex::Target))
    }
}

/// An ordered family of arc sets over one network. Each position remembers
/// the graph member it came from and, per arc, every graph edge mapping to it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NetworkFamily {
    sets: Vec<ArcSet>,
    preimages: Vec<BTreeMap<Arc, EdgeSet>>,
    members: Vec<usize>,
}

impl NetworkFamily {
    /// Abstract family without graph preimages; member ids are positions.
    pub fn standalone(sets: Vec<ArcSet>) -> Self {
        let m = sets.len();
        NetworkFamily {
            preimages: vec![BTreeMap::new(); m],
            members: (0..m).collect(),
            sets,
        }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn sets(&self) -> &[ArcSet] {
        &self.sets
    }

    pub fn set(&self, pos: usize) -> &ArcSet {
        &self.sets[pos]
    }

    /// Id of the originating graph-family member for position `pos`.
    pub fn member_id(&self, pos: usize) -> usize {
        self.members[pos]
    }

    pub fn member_ids(&self) -> &[usize] {
        &self.members
    }

    pub fn preimages(&self, pos: usize, a: &Arc) -> Option<&EdgeSet> {
        self.preimages[pos].get(a)
    }

    pub fn union(&self) -> ArcSet {
        self.sets.iter().flatten().copied().collect()
    }

    pub fn union_of<I: IntoIterator<Item = usize>>(&self, positions: I) -> ArcSet {
        positions
            .into_iter()
            .flat_map(|p| self.sets[p].iter().copied())
            .collect()
    }

    /// The family with position `pos` removed.
    pub fn without(&self, pos: usize) -> NetworkFamily {
        let mut out = self.clone();
        out.sets.remove(pos);
        out.preimages.remove(pos);
        out.members.remove(pos);
        out
    }
}

/// A simple directed path `s, v_1, ..., v_c, t`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StPath {
    vertices: Vec<Vertex>,
}

impl StPath {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self, Error> {
        if vertices.len() < 2
            || vertices[0] != Vertex::Source
            || vertices[vertices.len() - 1] != Vertex::Target
        {
            return Err(Error::InvalidPath("must run from s to t".into()));
        }
        let interior = &vertices[1..vertices.len() - 1];
        let mut seen = BTreeSet::new();
        for v in interior {
            if v.inner_id().is_none() || !seen.insert(*v) {
                return Err(Error::InvalidPath(format!(
                    "interior vertex {v} is repeated or not inner"
                )));
            }
        }
        Ok(StPath { vertices })
    }

    /// Path `s, inner ids..., t`.
    pub fn through(ids: &[usize]) -> Result<Self, Error> {
        let mut v = vec![Vertex::Source];
        v.extend(ids.iter().map(|&i| Vertex::Inner(i)));
        v.push(Vertex::Target);
        Self::new(v)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn interior(&self) -> &[Vertex] {
        &self.vertices[1..self.vertices.len() - 1]
    }

    pub fn arcs(&self) -> Vec<Arc> {
        self.vertices
            .windows(2)
            .map(|w| Arc { from: w[0], to: w[1] })
            .collect()
    }

    pub fn arc_count(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&u| u == v)
    }

    /// The vertex after `s`.
    pub fn after_source(&self) -> Vertex {
        self.vertices[1]
    }

    /// The vertex before `t`.
    pub fn before_target(&self) -> Vertex {
        self.vertices[self.vertices.len() - 2]
    }

    /// True when every arc of the path lies in `arcs`.
    pub fn within(&self, arcs: &ArcSet) -> bool {
        self.arcs().iter().all(|a| arcs.contains(a))
    }
}

impl fmt::Display for StPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vertices.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// True when `arcs` contains a directed path from `s` to `t`.
pub fn has_st_path(arcs: &ArcSet) -> bool {
    let mut seen = BTreeSet::from([Vertex::Source]);
    let mut queue = VecDeque::from([Vertex::Source]);
    while let Some(v) = queue.pop_front() {
        for a in arcs.range(Arc { from: v, to: Vertex::Source }..) {
            if a.from != v {
                break;
            }
            if a.to == Vertex::Target {
                return true;
            }
            if seen.insert(a.to) {
                queue.push_back(a.to);
            }
        }
    }
    false
}

/// Every simple s-t path inside `arcs`, in lexicographic order.
pub fn all_st_paths(arcs: &ArcSet) -> Vec<StPath> {
    fn go(arcs: &ArcSet, stack: &mut Vec<Vertex>, out: &mut Vec<StPath>) {
        let v = *stack.last().unwrap();
        let next: Vec<Vertex> = arcs
            .range(Arc { from: v, to: Vertex::Source }..)
            .take_while(|a| a.from == v)
            .map(|a| a.to)
            .collect();
        for w in next {
            if w == Vertex::Target {
                let mut vs = stack.clone();
                vs.push(w);
                out.push(StPath { vertices: vs });
            } else if !stack.contains(&w) {
                stack.push(w);
                go(arcs, stack, out);
                stack.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(arcs, &mut vec![Vertex::Source], &mut out);
    out
}

/// Where a graph edge outside the matching lands in the network.
fn image_of(h: &Edge, by_a: &BTreeMap<usize, Vertex>, by_b: &BTreeMap<usize, Vertex>) -> Arc {
    let from = by_a.get(&h.a).copied().unwrap_or(Vertex::Source);
    let to = by_b.get(&h.b).copied().unwrap_or(Vertex::Target);
    Arc { from, to }
}

/// Builds the network over the image `M` of `rm` and the arc family of the
/// members `rm` does not represent.
///
/// An edge `h = ab` outside `M` maps to `f -> g` when `a` lies on `f ∈ M` and
/// `b` on `g ∈ M`; an unmatched `a` becomes `s`, an unmatched `b` becomes `t`.
pub fn build_network(
    g: &BipartiteGraph,
    fam: &EdgeFamily,
    rm: &RainbowMatching,
) -> Result<(Network, NetworkFamily), Error> {
    g.check_family(fam)?;
    rm.verify(fam)?;
    let matching = rm.edges();
    let mut inner = BTreeMap::new();
    let mut by_a = BTreeMap::new();
    let mut by_b = BTreeMap::new();
    for (i, e) in matching.iter().enumerate() {
        inner.insert(i, Some(*e));
        by_a.insert(e.a, Vertex::Inner(i));
        by_b.insert(e.b, Vertex::Inner(i));
    }
    let mut nf = NetworkFamily::default();
    for (member, set) in fam.sets().iter().enumerate() {
        if rm.represents(member) {
            continue;
        }
        let mut pre: BTreeMap<Arc, EdgeSet> = BTreeMap::new();
        for h in set.iter().filter(|h| !matching.contains(h)) {
            pre.entry(image_of(h, &by_a, &by_b)).or_default().insert(*h);
        }
        nf.sets.push(pre.keys().copied().collect());
        nf.preimages.push(pre);
        nf.members.push(member);
    }
    let net = Network::with_inner(inner, nf.union())?;
    Ok((net, nf))
}

/// Image of one arc under contracting `s -> x` into the new source.
fn contract_arc(a: &Arc, x: Vertex) -> Option<Arc> {
    if a.to == x {
        None
    } else if a.from == Vertex::Source || a.from == x {
        Some(Arc { from: Vertex::Source, to: a.to })
    } else {
        Some(*a)
    }
}

/// Contracts the arc `s -> x`. The merged vertex becomes the new source
/// (still written `s`); inner vertex ids are kept, so paths of the
/// contracted network are directly comparable with the original.
///
/// Arcs `s y` and `x y` become `s' y`, arcs into `x` are removed, and the arc
/// `s x` itself disappears.
pub fn contract_source_edge(
    net: &Network,
    nf: &NetworkFamily,
    x: Vertex,
) -> Result<(Network, NetworkFamily), Error> {
    if !net.is_inner(x) {
        return Err(Error::NotInner(x));
    }
    let mut inner = net.inner.clone();
    inner.remove(&x.inner_id().unwrap());
    let arcs = net.arcs.iter().filter_map(|a| contract_arc(a, x)).collect();
    let mut out = NetworkFamily {
        sets: Vec::with_capacity(nf.len()),
        preimages: Vec::with_capacity(nf.len()),
        members: nf.members.clone(),
    };
    for pos in 0..nf.len() {
        let mut set = ArcSet::new();
        let mut pre: BTreeMap<Arc, EdgeSet> = BTreeMap::new();
        for a in &nf.sets[pos] {
            if let Some(c) = contract_arc(a, x) {
                set.insert(c);
                if let Some(p) = nf.preimages[pos].get(a) {
                    pre.entry(c).or_default().extend(p.iter().copied());
                }
            }
        }
        out.sets.push(set);
        out.preimages.push(pre);
    }
    let net = Network::with_inner(inner, arcs)?;
    Ok((net, out))
}

/// The image of an s-t path under contracting `s -> x`: unchanged when `x`
/// is off the path, otherwise everything up to `x` collapses into the source.
pub fn contract_path(p: &StPath, x: Vertex) -> StPath {
    match p.position(x) {
        None => p.clone(),
        Some(i) => {
            let mut vertices = vec![Vertex::Source];
            vertices.extend_from_slice(&p.vertices[i + 1..]);
            StPath { vertices }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Uncontraction {
    /// Read the contracted source as `s`.
    KeepSource,
    /// Expand the first arc `s' y` into `s x y`.
    ThroughContracted,
}

/// Reverses a contraction on a path of the contracted network.
pub fn uncontract_path(q: &StPath, variant: Uncontraction, x: Vertex) -> Result<StPath, Error> {
    match variant {
        Uncontraction::KeepSource => Ok(q.clone()),
        Uncontraction::ThroughContracted => {
            let mut vertices = Vec::with_capacity(q.vertices.len() + 1);
            vertices.push(Vertex::Source);
            vertices.push(x);
            vertices.extend_from_slice(&q.vertices[1..]);
            StPath::new(vertices)
        }
    }
}
