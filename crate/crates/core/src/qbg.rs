//! The quantum Bruhat graph `QB(W)`, its parabolic version `QB(W^J)`, the
//! level-restricted subgraphs `QB_{b lambda}(W^J)`, shortest-path weights and
//! quantum Deodhar lifts.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{CorootVec, Weight, WeylGroup};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    Up,
    Quantum,
}

/// Edge test in the full graph `QB(W)`: is `w -> w s_beta` an edge, and of which kind?
pub fn qbg_step(group: &WeylGroup, w: usize, root: usize) -> Option<EdgeKind> {
    let target = group.right_reflect(w, root);
    let (lw, lt) = (group.length(w) as i64, group.length(target) as i64);
    let beta = &group.root_system().positive_roots()[root];
    if lt == lw + 1 {
        Some(EdgeKind::Up)
    } else if lt == lw - 2 * beta.coroot_height() + 1 {
        Some(EdgeKind::Quantum)
    } else {
        None
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QbgEdge {
    pub source: usize,
    pub target: usize,
    /// Index of the (positive) label root.
    pub label: usize,
    pub kind: EdgeKind,
    pub weight: CorootVec,
}

/// Keep only edges whose label satisfies `b <lambda, alpha^vee> in Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelFilter {
    pub b: Rational,
    pub lambda: Weight,
}

impl LevelFilter {
    pub fn admits(&self, pairing: i64) -> bool {
        (self.b * Rational::from_integer(pairing as i128)).is_integer()
    }
}

/// A materialized (parabolic, possibly level-restricted) quantum Bruhat graph.
#[derive(Clone, Debug)]
pub struct QBGraph {
    group: Arc<WeylGroup>,
    parabolic: Vec<usize>,
    filter: Option<LevelFilter>,
    vertices: Vec<usize>,
    edges: Vec<QbgEdge>,
    /// `2 rho_J`, kept doubled so that it is integral.
    two_rho_j: Weight,
    /// Outgoing edge indices, indexed by group element.
    out: Vec<Vec<usize>>,
}

/// Build `QB(W^J)`, optionally restricted to `QB_{b lambda}(W^J)`.
pub fn build_qbg(
    group: &Arc<WeylGroup>,
    parabolic: &[usize],
    filter: Option<LevelFilter>,
    bound: usize,
) -> Result<QBGraph> {
    let rs = group.root_system();
    let r = rs.rank();
    if let Some(&bad) = parabolic.iter().find(|&&j| j >= r) {
        return Err(Error::Parse(format!("node {} out of range", bad + 1)));
    }
    if let Some(f) = &filter {
        if f.lambda.rank() != r {
            return Err(Error::RankMismatch {
                expected: r,
                got: f.lambda.rank(),
            });
        }
    }
    let mut parabolic = parabolic.to_vec();
    parabolic.sort_unstable();
    parabolic.dedup();

    let vertices = group.min_coset_reps(&parabolic);
    if vertices.len() > bound {
        return Err(Error::BoundExceeded {
            required: vertices.len(),
            bound,
        });
    }
    let in_j = |coords: &[i64]| (0..r).all(|i| coords[i] == 0 || parabolic.contains(&i));
    let mut two_rho_j = Weight::zero(r);
    for beta in rs.positive_roots() {
        if in_j(beta.coords()) {
            two_rho_j += &rs.root_weight(beta);
        }
    }
    let labels: Vec<usize> = (0..rs.num_positive_roots())
        .filter(|&k| !in_j(rs.positive_roots()[k].coords()))
        .collect();

    let mut edges = Vec::new();
    let mut out = vec![Vec::new(); group.len()];
    for &w in &vertices {
        let lw = group.length(w) as i64;
        for &k in &labels {
            let beta = &rs.positive_roots()[k];
            if let Some(f) = &filter {
                if !f.admits(beta.pair_with(&f.lambda)) {
                    continue;
                }
            }
            let target = group.coset_min_rep(group.right_reflect(w, k), &parabolic);
            let lt = group.length(target) as i64;
            let shift = 2 * beta.coroot_height() - two_rho_j.dot(&beta.coroot());
            let kind = if lt == lw + 1 {
                EdgeKind::Up
            } else if lt == lw - shift + 1 {
                EdgeKind::Quantum
            } else {
                continue;
            };
            let weight = match kind {
                EdgeKind::Up => CorootVec::zero(r),
                EdgeKind::Quantum => beta.coroot(),
            };
            out[w].push(edges.len());
            edges.push(QbgEdge {
                source: w,
                target,
                label: k,
                kind,
                weight,
            });
        }
    }
    Ok(QBGraph {
        group: Arc::clone(group),
        parabolic,
        filter,
        vertices,
        edges,
        two_rho_j,
        out,
    })
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct EdgeRecord {
    pub source: String,
    pub target: String,
    pub label_root: Vec<i64>,
    pub kind: EdgeKind,
    pub weight: Vec<i64>,
}

impl QBGraph {
    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.group
    }

    pub fn parabolic(&self) -> &[usize] {
        &self.parabolic
    }

    pub fn filter(&self) -> Option<&LevelFilter> {
        self.filter.as_ref()
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn edges(&self) -> &[QbgEdge] {
        &self.edges
    }

    pub fn two_rho_j(&self) -> &Weight {
        &self.two_rho_j
    }

    pub fn out_edges(&self, w: usize) -> impl Iterator<Item = &QbgEdge> {
        self.out[w].iter().map(move |&e| &self.edges[e])
    }

    pub fn has_edge(&self, source: usize, target: usize) -> bool {
        self.out_edges(source).any(|e| e.target == target)
    }

    /// Vertices reachable from `source` by a directed path of length at least one.
    pub fn reachable_from(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.group.len()];
        let mut queue = VecDeque::new();
        for e in self.out_edges(source) {
            if !seen[e.target] {
                seen[e.target] = true;
                queue.push_back(e.target);
            }
        }
        while let Some(u) = queue.pop_front() {
            for e in self.out_edges(u) {
                if !seen[e.target] {
                    seen[e.target] = true;
                    queue.push_back(e.target);
                }
            }
        }
        seen
    }

    /// All-pairs shortest paths. With `verify`, every shortest path between a
    /// pair is checked to carry the same weight.
    pub fn shortest_paths(&self, verify: bool) -> Result<PathTable> {
        let n = self.group.len();
        let r = self.group.rank();
        let mut dist = vec![u32::MAX; n * n];
        let mut weight = vec![CorootVec::zero(r); n * n];
        for &s in &self.vertices {
            let row = s * n;
            let mut set = vec![false; n];
            dist[row + s] = 0;
            set[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let du = dist[row + u];
                for e in self.out_edges(u) {
                    let v = e.target;
                    let dv = dist[row + v];
                    if dv == u32::MAX {
                        dist[row + v] = du + 1;
                        weight[row + v] = &weight[row + u] + &e.weight;
                        set[v] = true;
                        queue.push_back(v);
                    } else if verify && dv == du + 1 {
                        let cand = &weight[row + u] + &e.weight;
                        if cand != weight[row + v] {
                            return Err(Error::PathWeightNotUnique {
                                from: self.group.name(s),
                                to: self.group.name(v),
                            });
                        }
                    }
                }
            }
        }
        Ok(PathTable { n, dist, weight })
    }

    pub fn edge_records(&self) -> Vec<EdgeRecord> {
        let rs = self.group.root_system();
        self.edges
            .iter()
            .map(|e| EdgeRecord {
                source: self.group.name(e.source),
                target: self.group.name(e.target),
                label_root: rs.positive_roots()[e.label].coords().to_vec(),
                kind: e.kind,
                weight: e.weight.0.clone(),
            })
            .collect()
    }

    /// Graphviz rendering: up edges solid, quantum edges dashed and labeled by weight.
    pub fn to_dot(&self) -> String {
        let rs = self.group.root_system();
        let mut s = String::from("digraph QBG {\n");
        for &v in &self.vertices {
            let _ = writeln!(s, "  \"{0}\" [label=\"{0}\"];", self.group.name(v));
        }
        for e in &self.edges {
            let root = &rs.positive_roots()[e.label];
            match e.kind {
                EdgeKind::Up => {
                    let _ = writeln!(
                        s,
                        "  \"{}\" -> \"{}\" [style=solid, tooltip=\"{}\"];",
                        self.group.name(e.source),
                        self.group.name(e.target),
                        root
                    );
                }
                EdgeKind::Quantum => {
                    let _ = writeln!(
                        s,
                        "  \"{}\" -> \"{}\" [style=dashed, label=\"{:?}\", tooltip=\"{}\"];",
                        self.group.name(e.source),
                        self.group.name(e.target),
                        e.weight.0,
                        root
                    );
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Distances `l(w => v)` and weights `wt(w => v)` for all vertex pairs.
#[derive(Clone, Debug)]
pub struct PathTable {
    n: usize,
    dist: Vec<u32>,
    weight: Vec<CorootVec>,
}

impl PathTable {
    pub fn distance(&self, from: usize, to: usize) -> Option<u32> {
        let d = self.dist[from * self.n + to];
        (d != u32::MAX).then_some(d)
    }

    pub fn weight(&self, from: usize, to: usize) -> &CorootVec {
        &self.weight[from * self.n + to]
    }
}

/// `(l(w => v), wt(w => v))` in the graph `g`.
pub fn shortest_path_weight(
    g: &QBGraph,
    paths: &PathTable,
    w: usize,
    v: usize,
) -> Result<(u32, CorootVec)> {
    match paths.distance(w, v) {
        Some(d) => Ok((d, paths.weight(w, v).clone())),
        None => Err(Error::Unreachable {
            from: g.group.name(w),
            to: g.group.name(v),
        }),
    }
}

/// Cosets `v W_J` for a fixed `J`, keyed by minimal representative.
#[derive(Clone, Debug)]
pub struct CosetTable {
    parabolic: Vec<usize>,
    rep_of: Vec<usize>,
    members: HashMap<usize, Vec<usize>>,
}

impl CosetTable {
    pub fn new(group: &WeylGroup, parabolic: &[usize]) -> Self {
        let rep_of: Vec<usize> = (0..group.len())
            .map(|w| group.coset_min_rep(w, parabolic))
            .collect();
        let mut members: HashMap<usize, Vec<usize>> = HashMap::new();
        for (w, &rep) in rep_of.iter().enumerate() {
            members.entry(rep).or_default().push(w);
        }
        CosetTable {
            parabolic: parabolic.to_vec(),
            rep_of,
            members,
        }
    }

    pub fn parabolic(&self) -> &[usize] {
        &self.parabolic
    }

    pub fn rep(&self, w: usize) -> usize {
        self.rep_of[w]
    }

    pub fn members(&self, w: usize) -> &[usize] {
        &self.members[&self.rep_of[w]]
    }
}

/// The full quantum Bruhat graph together with its verified shortest-path table.
#[derive(Clone, Debug)]
pub struct FullQbg {
    graph: QBGraph,
    paths: PathTable,
}

impl FullQbg {
    pub fn new(group: &Arc<WeylGroup>) -> Result<Self> {
        let graph = build_qbg(group, &[], None, usize::MAX)?;
        let paths = graph.shortest_paths(true)?;
        for &a in graph.vertices() {
            for &b in graph.vertices() {
                if paths.distance(a, b).is_none() {
                    return Err(Error::Unreachable {
                        from: group.name(a),
                        to: group.name(b),
                    });
                }
            }
        }
        Ok(FullQbg { graph, paths })
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        &self.graph.group
    }

    pub fn graph(&self) -> &QBGraph {
        &self.graph
    }

    pub fn paths(&self) -> &PathTable {
        &self.paths
    }

    pub fn distance(&self, from: usize, to: usize) -> u32 {
        self.paths
            .distance(from, to)
            .expect("QB(W) is strongly connected")
    }

    pub fn weight(&self, from: usize, to: usize) -> &CorootVec {
        self.paths.weight(from, to)
    }

    /// `min(v W_J, <=_w)`: the unique element of `v W_J` closest to `w`.
    pub fn deodhar_lift(&self, v: usize, parabolic: &[usize], w: usize) -> Result<usize> {
        let coset = self.group().coset(v, parabolic);
        self.lift_over(&coset, v, w)
    }

    pub fn deodhar_lift_with(&self, cosets: &CosetTable, v: usize, w: usize) -> Result<usize> {
        self.lift_over(cosets.members(v), v, w)
    }

    fn lift_over(&self, coset: &[usize], v: usize, w: usize) -> Result<usize> {
        let best = coset
            .iter()
            .map(|&x| self.distance(w, x))
            .min()
            .expect("cosets are nonempty");
        let mut minima = coset
            .iter()
            .copied()
            .filter(|&x| self.distance(w, x) == best);
        let first = minima.next().expect("minimum attained");
        if minima.next().is_some() {
            return Err(Error::LiftNotUnique {
                coset: self.group().name(v),
                reference: self.group().name(w),
            });
        }
        Ok(first)
    }
}

/// Exact `b` as a reduced fraction string (`"1/2"`, `"0"`).
pub fn rational_string(b: &Rational) -> String {
    if b.denom().is_one() {
        b.numer().to_string()
    } else {
        format!("{}/{}", b.numer(), b.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i128 = p.trim().parse().map_err(|_| bad())?;
            let q: i128 = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::RootSystem;

    fn group(label: &str) -> Arc<WeylGroup> {
        Arc::new(WeylGroup::new(RootSystem::from_label(label).unwrap()).unwrap())
    }

    #[test]
    fn simple_label_dichotomy() {
        for label in ["A1", "A2", "A3", "B2", "B3", "C3", "G2"] {
            let g = group(label);
            let full = build_qbg(&g, &[], None, usize::MAX).unwrap();
            for w in 0..g.len() {
                for i in 0..g.rank() {
                    let k = g.root_system().simple_root_index(i);
                    let ws = g.right_simple(w, i);
                    let hits: Vec<&QbgEdge> = full.out_edges(w).filter(|e| e.label == k).collect();
                    assert_eq!(hits.len(), 1);
                    let expected = if g.length(ws) > g.length(w) {
                        EdgeKind::Up
                    } else {
                        EdgeKind::Quantum
                    };
                    assert_eq!(hits[0].kind, expected);
                    assert_eq!(hits[0].target, ws);
                }
            }
        }
    }

    #[test]
    fn edge_invariants_full_graph() {
        for label in ["A2", "A3", "B2", "G2"] {
            let g = group(label);
            let rs = g.root_system();
            let full = build_qbg(&g, &[], None, usize::MAX).unwrap();
            assert_eq!(full.vertices().len(), g.len());
            for e in full.edges() {
                let beta = &rs.positive_roots()[e.label];
                match e.kind {
                    EdgeKind::Up => {
                        assert!(e.weight.is_zero());
                        assert_eq!(g.length(e.target), g.length(e.source) + 1);
                        assert!(g.bruhat_le(e.source, e.target));
                    }
                    EdgeKind::Quantum => {
                        assert_eq!(e.weight, beta.coroot());
                        assert_eq!(
                            g.length(e.target) as i64,
                            g.length(e.source) as i64 - 2 * beta.coroot_height() + 1
                        );
                    }
                }
                assert_eq!(qbg_step(&g, e.source, e.label), Some(e.kind));
            }
        }
    }

    #[test]
    fn longest_to_identity_is_quantum_theta() {
        let g = group("A2");
        let full = build_qbg(&g, &[], None, usize::MAX).unwrap();
        let rs = g.root_system();
        let theta = rs.positive_roots().len() - 1;
        let e = full
            .out_edges(g.longest())
            .find(|e| e.label == theta)
            .expect("edge w0 -> e");
        assert_eq!(e.target, 0);
        assert_eq!(e.kind, EdgeKind::Quantum);
        assert_eq!(e.weight, rs.highest_root().coroot());
        // oracle: l(e) = l(w0) - 2 <rho, theta^vee> + 1
        assert_eq!(0, 3 - 2 * 2 + 1);
    }

    #[test]
    fn level_filter_matches_filtered_edge_list() {
        let g = group("A2");
        let j = [1usize];
        let unfiltered = build_qbg(&g, &j, None, usize::MAX).unwrap();
        let lambda = Weight(vec![1, 0]);
        for b in [Rational::new(1, 2), Rational::new(1, 3), Rational::one()] {
            let f = LevelFilter {
                b,
                lambda: lambda.clone(),
            };
            let filtered = build_qbg(&g, &j, Some(f.clone()), usize::MAX).unwrap();
            let rs = g.root_system();
            let oracle: Vec<&QbgEdge> = unfiltered
                .edges()
                .iter()
                .filter(|e| f.admits(rs.positive_roots()[e.label].pair_with(&lambda)))
                .collect();
            assert_eq!(filtered.edges().len(), oracle.len());
            for (a, b) in filtered.edges().iter().zip(oracle) {
                assert_eq!(a, b);
            }
            if b == Rational::one() {
                assert_eq!(filtered.edges(), unfiltered.edges());
            } else {
                // <w1, alpha^vee> = 1 for both labels a1 and a1+a2
                assert!(filtered.edges().is_empty());
            }
        }
    }

    #[test]
    fn parabolic_quantum_length_condition() {
        for label in ["A2", "A3", "B2", "G2"] {
            let g = group(label);
            let rs = g.root_system();
            let r = g.rank();
            for mask in 0..(1u32 << r) {
                let j: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
                let graph = build_qbg(&g, &j, None, usize::MAX).unwrap();
                for e in graph.edges() {
                    assert!(g.is_min_coset_rep(e.source, &j));
                    assert!(g.is_min_coset_rep(e.target, &j));
                    if e.kind == EdgeKind::Quantum {
                        let beta = &rs.positive_roots()[e.label];
                        let two_rho_minus =
                            2 * beta.coroot_height() - graph.two_rho_j().dot(&beta.coroot());
                        assert_eq!(
                            g.length(e.target) as i64,
                            g.length(e.source) as i64 - two_rho_minus + 1
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn shortest_path_examples() {
        let g = group("A2");
        let full = FullQbg::new(&g).unwrap();
        let s1 = g.parse_word("s1").unwrap();
        for w in 0..g.len() {
            let (d, wt) = shortest_path_weight(full.graph(), full.paths(), w, w).unwrap();
            assert_eq!(d, 0);
            assert!(wt.is_zero());
        }
        let (d, wt) = shortest_path_weight(full.graph(), full.paths(), 0, s1).unwrap();
        assert_eq!((d, wt), (1, CorootVec(vec![0, 0])));
        let (d, wt) = shortest_path_weight(full.graph(), full.paths(), s1, 0).unwrap();
        assert_eq!((d, wt), (1, CorootVec(vec![1, 0])));
    }

    #[test]
    fn path_weights_well_defined() {
        for label in ["A2", "B2", "G2", "A3", "B3", "C3"] {
            let g = group(label);
            // FullQbg::new verifies all shortest paths and strong connectivity
            let full = FullQbg::new(&g).unwrap();
            for a in 0..g.len() {
                for b in 0..g.len() {
                    assert!(full.weight(a, b).is_nonnegative());
                }
            }
        }
    }

    #[test]
    fn deodhar_lift_unique_everywhere() {
        for label in ["A2", "A3", "B2"] {
            let g = group(label);
            let full = FullQbg::new(&g).unwrap();
            let r = g.rank();
            for mask in 0..(1u32 << r) {
                let j: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
                let cosets = CosetTable::new(&g, &j);
                for v in g.min_coset_reps(&j) {
                    for w in 0..g.len() {
                        let x = full.deodhar_lift_with(&cosets, v, w).unwrap();
                        assert_eq!(cosets.rep(x), v);
                        if cosets.rep(w) == v {
                            assert_eq!(x, w);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn deodhar_lift_examples() {
        let g = group("A2");
        let full = FullQbg::new(&g).unwrap();
        for w in 0..g.len() {
            assert_eq!(full.deodhar_lift(0, &[0, 1], w).unwrap(), w);
        }
        let s1 = g.parse_word("s1").unwrap();
        let lift = full.deodhar_lift(s1, &[1], g.longest()).unwrap();
        let coset = g.coset(s1, &[1]);
        assert_eq!(coset.len(), 2);
        let brute = *coset
            .iter()
            .min_by_key(|&&x| full.distance(g.longest(), x))
            .unwrap();
        assert_eq!(lift, brute);
    }

    #[test]
    fn dot_and_json_exports() {
        let g = group("A2");
        let full = build_qbg(&g, &[], None, usize::MAX).unwrap();
        let dot = full.to_dot();
        assert!(dot.starts_with("digraph"));
        assert_eq!(
            dot.matches("style=dashed").count(),
            full.edges()
                .iter()
                .filter(|e| e.kind == EdgeKind::Quantum)
                .count()
        );
        let recs = full.edge_records();
        let json = serde_json::to_string(&recs).unwrap();
        let back: Vec<EdgeRecord> = serde_json::from_str(&json).unwrap();
        assert_eq!(back, recs);
        assert!(json.contains("\"kind\":\"quantum\""));
    }

    #[test]
    fn bound_refuses() {
        let g = group("A3");
        assert!(matches!(
            build_qbg(&g, &[], None, 10),
            Err(Error::BoundExceeded { .. })
        ));
    }

    #[test]
    fn rationals_parse() {
        assert_eq!(parse_rational("1/2").unwrap(), Rational::new(1, 2));
        assert_eq!(rational_string(&Rational::new(2, 4)), "1/2");
        assert_eq!(rational_string(&Rational::from_integer(0)), "0");
        assert!(parse_rational("1/0").is_err());
    }
}
