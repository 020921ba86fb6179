//! Regimentations: systems of internally disjoint s-t paths covering the
//! network, with essential members assigned to paths so that every path `Q`
//! receives exactly `|E(Q)| - 1` members, each containing all arcs of `Q`.
//!
//! Besides the verifier and an exhaustive finder, this module checks the
//! structural consequences a regimentation has when no rainbow s-t path
//! exists, and the exchange property between two regimented families that
//! differ in one member.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use itertools::Itertools;
use thiserror::Error;

use crate::error::Error;
use crate::network::{all_st_paths, has_st_path, Arc, ArcSet, Network, NetworkFamily, StPath, Vertex};
use crate::rainbow_path::{exhaustive_rainbow_path, RainbowStPath};

/// Default inner-vertex bound for [`find_regimentation`].
pub const REGIMENTATION_SEARCH_BOUND: usize = 6;

/// `assignment` maps essential family positions to indices into `paths`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regimentation {
    pub paths: Vec<StPath>,
    pub assignment: BTreeMap<usize, usize>,
}

impl Regimentation {
    pub fn essential(&self) -> impl Iterator<Item = usize> + '_ {
        self.assignment.keys().copied()
    }

    pub fn is_essential(&self, pos: usize) -> bool {
        self.assignment.contains_key(&pos)
    }

    /// Positions of `nf` outside the assignment's domain.
    pub fn inessential(&self, family_len: usize) -> Vec<usize> {
        (0..family_len).filter(|p| !self.is_essential(*p)).collect()
    }

    pub fn path_of(&self, pos: usize) -> Option<&StPath> {
        self.assignment.get(&pos).map(|&q| &self.paths[q])
    }

    /// Members assigned to path index `q`, ascending.
    pub fn assigned_to(&self, q: usize) -> Vec<usize> {
        self.assignment
            .iter()
            .filter(|&(_, &p)| p == q)
            .map(|(&m, _)| m)
            .collect()
    }

    /// Re-keys an assignment given by family member ids to positions in `nf`.
    pub fn from_member_ids(nf: &NetworkFamily, paths: Vec<StPath>, by_member: &BTreeMap<usize, usize>) -> Result<Self, Violation> {
        let mut assignment = BTreeMap::new();
        for (&member, &q) in by_member {
            let pos = nf
                .member_ids()
                .iter()
                .position(|&m| m == member)
                .ok_or(Violation::UnknownMember(member))?;
            assignment.insert(pos, q);
        }
        Ok(Regimentation { paths, assignment })
    }

    /// The assignment keyed by family member ids.
    pub fn member_assignment(&self, nf: &NetworkFamily) -> BTreeMap<usize, usize> {
        self.assignment.iter().map(|(&pos, &q)| (nf.member_id(pos), q)).collect()
    }

    /// Every arc that is backward on some path.
    pub fn backward_union(&self, net: &Network) -> ArcSet {
        self.paths.iter().flat_map(|q| backward_arcs(net, q)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("member {0} does not exist")]
    UnknownMember(usize),
    #[error("path index {0} does not exist")]
    UnknownPath(usize),
    #[error("path {0} uses a vertex outside the network")]
    ForeignVertex(usize),
    #[error("paths {first} and {second} are not internally disjoint")]
    NotDisjoint { first: usize, second: usize },
    #[error("vertex {0} is not covered")]
    Cover(Vertex),
    #[error("member {0} does not contain its path")]
    Containment(usize),
    #[error("path {path} has {assigned} members, needs {required}")]
    Count {
        path: usize,
        assigned: usize,
        required: usize,
    },
}

impl Violation {
    /// The numbered regimentation condition violated, if any.
    pub fn condition(&self) -> Option<u8> {
        match self {
            Violation::Cover(_) => Some(1),
            Violation::Containment(_) => Some(2),
            Violation::Count { .. } => Some(3),
            _ => None,
        }
    }
}

pub fn verify_regimentation(net: &Network, nf: &NetworkFamily, r: &Regimentation) -> Result<(), Violation> {
    for (&m, &q) in &r.assignment {
        if m >= nf.len() {
            return Err(Violation::UnknownMember(m));
        }
        if q >= r.paths.len() {
            return Err(Violation::UnknownPath(q));
        }
    }
    for (i, q) in r.paths.iter().enumerate() {
        if q.interior().iter().any(|&v| !net.is_inner(v)) {
            return Err(Violation::ForeignVertex(i));
        }
    }
    for (i, j) in (0..r.paths.len()).tuple_combinations() {
        let (p, q) = (&r.paths[i], &r.paths[j]);
        if p == q || p.interior().iter().any(|v| q.interior().contains(v)) {
            return Err(Violation::NotDisjoint { first: i, second: j });
        }
    }
    let covered: BTreeSet<Vertex> = r.paths.iter().flat_map(|q| q.vertices().iter().copied()).collect();
    if let Some(v) = net.vertices().find(|v| !covered.contains(v)) {
        return Err(Violation::Cover(v));
    }
    for (&m, &q) in &r.assignment {
        if !r.paths[q].within(nf.set(m)) {
            return Err(Violation::Containment(m));
        }
    }
    for (i, q) in r.paths.iter().enumerate() {
        let assigned = r.assignment.values().filter(|&&p| p == i).count();
        let required = q.arc_count() - 1;
        if assigned != required {
            return Err(Violation::Count { path: i, assigned, required });
        }
    }
    Ok(())
}

/// True when `a` joins two vertices of `q` against the path's direction.
pub fn is_backward(a: &Arc, q: &StPath) -> bool {
    match (q.position(a.from), q.position(a.to)) {
        (Some(i), Some(j)) => j < i,
        _ => false,
    }
}

/// Arcs of `net` that are backward on `q`.
pub fn backward_arcs(net: &Network, q: &StPath) -> ArcSet {
    net.arcs().iter().filter(|a| is_backward(a, q)).copied().collect()
}

/// Arcs from inner vertices off `q` into the first interior vertex of `q`,
/// and from the last interior vertex of `q` to inner vertices off `q`.
/// Returned whether or not they are arcs of `net`. Empty for the path `s, t`.
pub fn useless_arcs(net: &Network, q: &StPath) -> ArcSet {
    if q.interior().is_empty() {
        return ArcSet::new();
    }
    let (first, last) = (q.after_source(), q.before_target());
    net.inner_vertices()
        .filter(|v| !q.contains(*v))
        .flat_map(|v| [Arc { from: v, to: first }, Arc { from: last, to: v }])
        .collect()
}

pub fn find_regimentation(net: &Network, nf: &NetworkFamily) -> Result<Option<Regimentation>, Error> {
    find_regimentation_bounded(net, nf, REGIMENTATION_SEARCH_BOUND)
}

/// Exhaustive search. Path systems are generated by repeatedly choosing the
/// path through the least uncovered inner vertex (fewest interior vertices
/// first, then lexicographically); assignments fill paths in order with the
/// lexicographically least member combinations. The first hit is returned.
pub fn find_regimentation_bounded(
    net: &Network,
    nf: &NetworkFamily,
    bound: usize,
) -> Result<Option<Regimentation>, Error> {
    let mut found = None;
    RegimentationSearch::new(net, nf, bound)?.run(&mut |r| {
        found = Some(r.clone());
        ControlFlow::Break(())
    });
    Ok(found)
}

/// Number of distinct regimentations (path systems and assignments).
pub fn count_regimentations(net: &Network, nf: &NetworkFamily, bound: usize) -> Result<usize, Error> {
    let mut count = 0;
    RegimentationSearch::new(net, nf, bound)?.run(&mut |_| {
        count += 1;
        ControlFlow::Continue(())
    });
    Ok(count)
}

struct RegimentationSearch<'a> {
    nf: &'a NetworkFamily,
    inner: Vec<Vertex>,
}

type Visitor<'v> = dyn FnMut(&Regimentation) -> ControlFlow<()> + 'v;

impl<'a> RegimentationSearch<'a> {
    fn new(net: &Network, nf: &'a NetworkFamily, bound: usize) -> Result<Self, Error> {
        if net.inner_count() > bound {
            return Err(Error::BoundExceeded {
                inner: net.inner_count(),
                bound,
            });
        }
        Ok(RegimentationSearch {
            nf,
            inner: net.inner_vertices().collect(),
        })
    }

    fn run(&self, visit: &mut Visitor<'_>) {
        if self.inner.is_empty() {
            let paths = vec![StPath::new(vec![Vertex::Source, Vertex::Target]).unwrap()];
            let _ = self.assign(&paths, visit);
            return;
        }
        // Every essential member covers one inner vertex.
        if self.nf.len() < self.inner.len() {
            return;
        }
        let _ = self.partition(&self.inner.clone(), &mut Vec::new(), visit);
    }

    fn holders(&self, q: &StPath) -> Vec<usize> {
        (0..self.nf.len()).filter(|&m| q.within(self.nf.set(m))).collect()
    }

    fn partition(&self, remaining: &[Vertex], paths: &mut Vec<StPath>, visit: &mut Visitor<'_>) -> ControlFlow<()> {
        let Some((&least, rest)) = remaining.split_first() else {
            return self.assign(paths, visit);
        };
        for size in 0..=rest.len() {
            for others in rest.iter().copied().combinations(size) {
                let mut block = others.clone();
                block.push(least);
                block.sort();
                for order in block.iter().copied().permutations(block.len()) {
                    let mut vertices = vec![Vertex::Source];
                    vertices.extend(order);
                    vertices.push(Vertex::Target);
                    let q = StPath::new(vertices).expect("distinct inner vertices");
                    if self.holders(&q).len() < q.arc_count() - 1 {
                        continue;
                    }
                    let left: Vec<Vertex> = rest.iter().copied().filter(|v| !others.contains(v)).collect();
                    paths.push(q);
                    let flow = self.partition(&left, paths, visit);
                    paths.pop();
                    flow?;
                }
            }
        }
        ControlFlow::Continue(())
    }

    fn assign(&self, paths: &[StPath], visit: &mut Visitor<'_>) -> ControlFlow<()> {
        let holders: Vec<Vec<usize>> = paths.iter().map(|q| self.holders(q)).collect();
        let mut assignment = BTreeMap::new();
        self.fill(paths, &holders, 0, &mut assignment, visit)
    }

    fn fill(
        &self,
        paths: &[StPath],
        holders: &[Vec<usize>],
        q: usize,
        assignment: &mut BTreeMap<usize, usize>,
        visit: &mut Visitor<'_>,
    ) -> ControlFlow<()> {
        if q == paths.len() {
            return visit(&Regimentation {
                paths: paths.to_vec(),
                assignment: assignment.clone(),
            });
        }
        let quota = paths[q].arc_count() - 1;
        let free: Vec<usize> = holders[q].iter().copied().filter(|m| !assignment.contains_key(m)).collect();
        for chosen in free.into_iter().combinations(quota) {
            for &m in &chosen {
                assignment.insert(m, q);
            }
            let flow = self.fill(paths, holders, q + 1, assignment, visit);
            for m in &chosen {
                assignment.remove(m);
            }
            flow?;
        }
        ControlFlow::Continue(())
    }
}

/// Outcome of checking the structural consequences of a regimentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructureReport {
    /// The family has a rainbow s-t path, so the consequences need not hold.
    HypothesisNotMet(RainbowStPath),
    Checked(StructureChecks),
}

/// One flag per consequence, each checked by direct enumeration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureChecks {
    /// Number of essential members equals the number of inner vertices.
    pub essential_count: bool,
    /// Every arc of an inessential member is backward on some path.
    pub inessential_backward: bool,
    /// Arcs of members assigned to `Q` lie in `E(Q)`, the backward arcs, or `U(Q)`.
    pub essential_confined: bool,
    /// Inessential members contain no s-t path and no arc out of `s`.
    pub inessential_pathless: bool,
    /// The assigned path is the only s-t path inside an essential member.
    pub essential_unique_path: bool,
    /// A member is essential exactly when it contains an s-t path.
    pub essential_iff_path: bool,
}

impl StructureChecks {
    pub fn all_pass(&self) -> bool {
        self.essential_count
            && self.inessential_backward
            && self.essential_confined
            && self.inessential_pathless
            && self.essential_unique_path
            && self.essential_iff_path
    }
}

/// Checks the consequences of `r` for `nf`. `r` must verify; the absence of a
/// rainbow s-t path is established by exhaustive search.
pub fn check_structure_lemmas(net: &Network, nf: &NetworkFamily, r: &Regimentation) -> Result<StructureReport, Error> {
    verify_regimentation(net, nf, r).map_err(|v| Error::Precondition(v.to_string()))?;
    if let Some(p) = exhaustive_rainbow_path(net, nf)? {
        return Ok(StructureReport::HypothesisNotMet(p));
    }
    // Backward arcs over the network and every member's arcs.
    let all_arcs: ArcSet = net.arcs().iter().chain(nf.union().iter()).copied().collect();
    let backward: ArcSet = r
        .paths
        .iter()
        .flat_map(|q| all_arcs.iter().filter(move |a| is_backward(a, q)).copied())
        .collect();
    let inessential = r.inessential(nf.len());

    let essential_count = r.assignment.len() == net.inner_count();
    let inessential_backward = inessential
        .iter()
        .all(|&m| nf.set(m).iter().all(|a| backward.contains(a)));
    let essential_confined = r.paths.iter().enumerate().all(|(i, q)| {
        let own: ArcSet = q.arcs().into_iter().collect();
        let useless = useless_arcs(net, q);
        r.assigned_to(i).iter().all(|&m| {
            nf.set(m)
                .iter()
                .all(|a| own.contains(a) || backward.contains(a) || useless.contains(a))
        })
    });
    let inessential_pathless = inessential.iter().all(|&m| {
        let set = nf.set(m);
        !has_st_path(set) && set.iter().all(|a| a.from != Vertex::Source)
    });
    let essential_unique_path = r
        .assignment
        .iter()
        .all(|(&m, &q)| all_st_paths(nf.set(m)) == [r.paths[q].clone()]);
    let essential_iff_path = (0..nf.len()).all(|m| r.is_essential(m) == has_st_path(nf.set(m)));

    Ok(StructureReport::Checked(StructureChecks {
        essential_count,
        inessential_backward,
        essential_confined,
        inessential_pathless,
        essential_unique_path,
        essential_iff_path,
    }))
}

/// For two regimented families without rainbow s-t paths that differ in one
/// member each (`G` in the first, `H` in the second): either both `G` and `H`
/// are inessential, or they are assigned the same path.
pub fn check_exchange_lemma(
    net: &Network,
    nf_g: &NetworkFamily,
    r_g: &Regimentation,
    nf_h: &NetworkFamily,
    r_h: &Regimentation,
) -> Result<bool, Error> {
    let (g_set, h_set) = single_difference(nf_g, nf_h)?;
    for (nf, r) in [(nf_g, r_g), (nf_h, r_h)] {
        verify_regimentation(net, nf, r).map_err(|v| Error::Precondition(format!("not regimented: {v}")))?;
        if exhaustive_rainbow_path(net, nf)?.is_some() {
            return Err(Error::Precondition("family has a rainbow s-t path".into()));
        }
    }
    let g = nf_g.sets().iter().position(|s| *s == g_set).unwrap();
    let h = nf_h.sets().iter().position(|s| *s == h_set).unwrap();
    Ok(match (r_g.path_of(g), r_h.path_of(h)) {
        (None, None) => true,
        (Some(p), Some(q)) => p == q,
        _ => false,
    })
}

/// The single member of each multiset difference.
fn single_difference(a: &NetworkFamily, b: &NetworkFamily) -> Result<(ArcSet, ArcSet), Error> {
    fn counts(nf: &NetworkFamily) -> BTreeMap<&ArcSet, i64> {
        let mut c: BTreeMap<&ArcSet, i64> = BTreeMap::new();
        for s in nf.sets() {
            *c.entry(s).or_default() += 1;
        }
        c
    }
    let (ca, cb) = (counts(a), counts(b));
    let diff = |x: &BTreeMap<&ArcSet, i64>, y: &BTreeMap<&ArcSet, i64>| -> Vec<ArcSet> {
        x.iter()
            .flat_map(|(s, &n)| {
                let extra = (n - y.get(s).copied().unwrap_or(0)).max(0) as usize;
                std::iter::repeat_n((*s).clone(), extra)
            })
            .collect()
    };
    let (da, db) = (diff(&ca, &cb), diff(&cb, &ca));
    if da.len() != 1 || db.len() != 1 {
        return Err(Error::Precondition(format!(
            "families must differ in exactly one member each, found {} and {}",
            da.len(),
            db.len()
        )));
    }
    Ok((da.into_iter().next().unwrap(), db.into_iter().next().unwrap()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::arc;
    use crate::network::Vertex::{Inner as I, Source as S, Target as T};

    fn arcs(list: &[(Vertex, Vertex)]) -> ArcSet {
        list.iter().map(|&(f, t)| arc(f, t)).collect()
    }

    fn fam(sets: &[&[(Vertex, Vertex)]]) -> NetworkFamily {
        NetworkFamily::standalone(sets.iter().map(|s| arcs(s)).collect())
    }

    fn path(ids: &[usize]) -> StPath {
        StPath::through(ids).unwrap()
    }

    #[test]
    fn backward_examples() {
        let net = Network::new(2, arcs(&[(I(1), I(0)), (I(0), I(1))])).unwrap();
        assert_eq!(backward_arcs(&net, &path(&[0, 1])), arcs(&[(I(1), I(0))]));
        assert!(backward_arcs(&net, &path(&[])).is_empty());
        let fwd = Network::new(2, arcs(&[(I(0), I(1))])).unwrap();
        assert!(backward_arcs(&fwd, &path(&[0, 1])).is_empty());
    }

    #[test]
    fn useless_examples() {
        // y1 = v0, y2 = v1, z = v2
        let net = Network::new(3, ArcSet::new()).unwrap();
        assert_eq!(useless_arcs(&net, &path(&[0, 1])), arcs(&[(I(2), I(0)), (I(1), I(2))]));
        let net2 = Network::new(2, ArcSet::new()).unwrap();
        assert!(useless_arcs(&net2, &path(&[0, 1])).is_empty());
        // s_Q = t_Q = v0, off-path v1
        assert_eq!(useless_arcs(&net2, &path(&[0])), arcs(&[(I(1), I(0)), (I(0), I(1))]));
        assert!(useless_arcs(&net2, &path(&[])).is_empty());
    }

    #[test]
    fn verify_examples() {
        let nf = fam(&[&[(S, I(0)), (I(0), T)]]);
        let net = Network::from_family(1, &nf).unwrap();
        let good = Regimentation {
            paths: vec![path(&[0])],
            assignment: BTreeMap::from([(0, 0)]),
        };
        assert_eq!(verify_regimentation(&net, &nf, &good), Ok(()));

        let empty = Regimentation {
            paths: vec![path(&[0])],
            assignment: BTreeMap::new(),
        };
        assert_eq!(verify_regimentation(&net, &nf, &empty).unwrap_err().condition(), Some(3));

        let net2 = Network::new(2, ArcSet::new()).unwrap();
        let shared = Regimentation {
            paths: vec![path(&[0]), path(&[1, 0])],
            assignment: BTreeMap::new(),
        };
        assert_eq!(
            verify_regimentation(&net2, &nf, &shared),
            Err(Violation::NotDisjoint { first: 0, second: 1 })
        );

        let uncovered = Regimentation {
            paths: vec![path(&[0])],
            assignment: BTreeMap::from([(0, 0)]),
        };
        assert_eq!(verify_regimentation(&net2, &nf, &uncovered), Err(Violation::Cover(I(1))));

        let wrong_member = Regimentation {
            paths: vec![path(&[0])],
            assignment: BTreeMap::from([(0, 0)]),
        };
        let nf_bad = fam(&[&[(S, I(0))]]);
        assert_eq!(
            verify_regimentation(&net, &nf_bad, &wrong_member).unwrap_err().condition(),
            Some(2)
        );
    }

    #[test]
    fn find_examples() {
        let nf = fam(&[&[(S, I(0)), (I(0), T)], &[(S, I(1)), (I(1), T)]]);
        let net = Network::from_family(2, &nf).unwrap();
        let r = find_regimentation(&net, &nf).unwrap().unwrap();
        assert_eq!(r.paths, vec![path(&[0]), path(&[1])]);
        assert_eq!(r.assignment, BTreeMap::from([(0, 0), (1, 1)]));
        assert_eq!(count_regimentations(&net, &nf, 3).unwrap(), 1);

        // No member has an arc out of s.
        let nf = fam(&[&[(I(0), T)], &[(I(1), I(0))]]);
        let net = Network::from_family(2, &nf).unwrap();
        assert_eq!(find_regimentation(&net, &nf).unwrap(), None);

        let nf = fam(&[&[(S, I(0)), (I(0), T)], &[(S, I(0)), (I(0), T)]]);
        let net = Network::from_family(1, &nf).unwrap();
        let r = find_regimentation(&net, &nf).unwrap().unwrap();
        assert_eq!(r.assignment, BTreeMap::from([(0, 0)]));
        assert_eq!(r.inessential(2), vec![1]);
        assert_eq!(count_regimentations(&net, &nf, 3).unwrap(), 2);
    }

    #[test]
    fn find_bound() {
        let net = Network::new(7, ArcSet::new()).unwrap();
        assert!(matches!(
            find_regimentation(&net, &NetworkFamily::default()),
            Err(Error::BoundExceeded { inner: 7, bound: 6 })
        ));
    }

    #[test]
    fn empty_network_is_regimented_by_the_direct_path() {
        let nf = fam(&[&[]]);
        let net = Network::new(0, ArcSet::new()).unwrap();
        let r = find_regimentation(&net, &nf).unwrap().unwrap();
        assert_eq!(r.paths, vec![path(&[])]);
        assert!(r.assignment.is_empty());
    }

    #[test]
    fn structure_checks_pass_on_two_paths() {
        let nf = fam(&[&[(S, I(0)), (I(0), T)], &[(S, I(1)), (I(1), T)]]);
        let net = Network::from_family(2, &nf).unwrap();
        let r = find_regimentation(&net, &nf).unwrap().unwrap();
        match check_structure_lemmas(&net, &nf, &r).unwrap() {
            StructureReport::Checked(c) => assert!(c.all_pass(), "{c:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn structure_checks_need_no_rainbow_path() {
        let nf = fam(&[&[(S, I(0)), (I(0), T)], &[(S, I(0)), (I(0), T)]]);
        let net = Network::from_family(1, &nf).unwrap();
        let r = find_regimentation(&net, &nf).unwrap().unwrap();
        assert!(matches!(
            check_structure_lemmas(&net, &nf, &r).unwrap(),
            StructureReport::HypothesisNotMet(_)
        ));
    }

    #[test]
    fn structure_checks_with_backward_arc_in_inessential_member() {
        // Q = s,v0,v1,v2,t held by three copies; a fourth member has only the
        // backward arc v2 -> v0.
        let q: &[(Vertex, Vertex)] = &[(S, I(0)), (I(0), I(1)), (I(1), I(2)), (I(2), T)];
        let nf = fam(&[q, q, q, &[(I(2), I(0))]]);
        let net = Network::from_family(3, &nf).unwrap();
        let r = find_regimentation(&net, &nf).unwrap().unwrap();
        assert_eq!(r.paths, vec![path(&[0, 1, 2])]);
        assert_eq!(r.inessential(4), vec![3]);
        match check_structure_lemmas(&net, &nf, &r).unwrap() {
            StructureReport::Checked(c) => assert!(c.all_pass(), "{c:?}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn exchange_examples() {
        let p: &[(Vertex, Vertex)] = &[(S, I(0)), (I(0), I(1)), (I(1), T)];
        let p_back: &[(Vertex, Vertex)] = &[(S, I(0)), (I(0), I(1)), (I(1), T), (I(1), I(0))];
        let nf_g = fam(&[p, p]);
        let nf_h = fam(&[p, p_back]);
        let net = Network::from_family(2, &nf_h).unwrap();
        let r_g = find_regimentation(&net, &nf_g).unwrap().unwrap();
        let r_h = find_regimentation(&net, &nf_h).unwrap().unwrap();
        assert!(check_exchange_lemma(&net, &nf_g, &r_g, &nf_h, &r_h).unwrap());

        let nf_g = fam(&[p, p, &[(I(1), I(0))]]);
        let nf_h = fam(&[p, p, &[]]);
        let r_g = find_regimentation(&net, &nf_g).unwrap().unwrap();
        let r_h = find_regimentation(&net, &nf_h).unwrap().unwrap();
        assert!(!r_g.is_essential(2) && !r_h.is_essential(2));
        assert!(check_exchange_lemma(&net, &nf_g, &r_g, &nf_h, &r_h).unwrap());

        let nf_two = fam(&[p_back, p_back]);
        let r_two = find_regimentation(&net, &nf_two).unwrap().unwrap();
        assert!(matches!(
            check_exchange_lemma(&net, &nf_g, &r_g, &nf_two, &r_two),
            Err(Error::Precondition(_))
        ));
    }

    /// For every path `Q` and the largest arc set allowed (its own arcs, all
    /// backward pairs, every arc among off-path inner vertices, and the
    /// useless arcs), `Q` is the only s-t path.
    #[test]
    fn path_uniqueness_under_confinement() {
        for inner in 0..=5usize {
            let net = Network::new(inner, ArcSet::new()).unwrap();
            let ids: Vec<usize> = (0..inner).collect();
            for len in 0..=inner {
                for interior in ids.iter().copied().permutations(len) {
                    let q = StPath::through(&interior).unwrap();
                    let on_q: Vec<Vertex> = q.vertices().to_vec();
                    let off: Vec<Vertex> = net.inner_vertices().filter(|v| !q.contains(*v)).collect();
                    let mut allowed: ArcSet = q.arcs().into_iter().collect();
                    for (i, j) in (0..on_q.len()).tuple_combinations() {
                        if let Ok(a) = Arc::new(on_q[j], on_q[i]) {
                            allowed.insert(a);
                        }
                    }
                    for (&u, &v) in off.iter().cartesian_product(off.iter()) {
                        if u != v {
                            allowed.insert(arc(u, v));
                        }
                    }
                    allowed.extend(useless_arcs(&net, &q));
                    assert_eq!(all_st_paths(&allowed), vec![q.clone()], "Q = {q}");
                }
            }
        }
    }
}
