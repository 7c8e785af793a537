//! Alcove walks, lambda-chains and admissible subsets of the quantum alcove model.
//!
//! Alcoves are tracked by an exact rational interior point. The walk starts at
//! `p0 = rho / (M + 1)` (with `M` the height of the highest coroot), which lies
//! in the fundamental alcove, and every step reflects the point in the crossed
//! hyperplane.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qbg::{qbg_step, rational_string, EdgeKind};
use crate::rootsys::{CorootVec, Root, RootSystem, Weight, WeylGroup};
use crate::Rational;

pub const DEFAULT_SEED: u64 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Lex,
    Segment,
    Concat,
    Custom,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Lex => "lex",
            Provenance::Segment => "segment",
            Provenance::Concat => "concat",
            Provenance::Custom => "custom",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainEntry {
    pub root: Root,
    /// Index of `|root|` among the positive roots.
    pub root_index: usize,
    pub height: i64,
    pub complementary_height: i64,
    /// `height / <lambda, root^vee>`, absent when the pairing vanishes.
    pub relative_height: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaChain {
    pub lambda: Weight,
    pub entries: Vec<ChainEntry>,
    pub reduced: bool,
    pub provenance: Provenance,
}

impl LambdaChain {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn roots(&self) -> Vec<Root> {
        self.entries.iter().map(|e| e.root.clone()).collect()
    }

    /// `(root coordinates, height)` pairs, sorted.
    pub fn hyperplane_multiset(&self) -> Vec<(Vec<i64>, i64)> {
        let mut v: Vec<(Vec<i64>, i64)> = self
            .entries
            .iter()
            .map(|e| (e.root.coords().to_vec(), e.height))
            .collect();
        v.sort();
        v
    }
}

/// Number of hyperplanes separating `A_o` from `A_o - lambda`.
pub fn separating_count(rs: &RootSystem, lambda: &Weight) -> usize {
    rs.positive_roots()
        .iter()
        .map(|g| g.pair_with(lambda).unsigned_abs() as usize)
        .sum()
}

type Point = Vec<Rational>;

fn base_point(rs: &RootSystem) -> Point {
    let m = rs.max_coroot_height();
    vec![Rational::new(1, (m + 1) as i128); rs.rank()]
}

fn pair_point(x: &Point, coroot: &CorootVec) -> Rational {
    x.iter()
        .zip(coroot.coords())
        .map(|(a, &c)| *a * Rational::from_integer(c as i128))
        .sum()
}

fn floors(rs: &RootSystem, x: &Point) -> Vec<i64> {
    rs.positive_roots()
        .iter()
        .map(|g| pair_point(x, &g.coroot()).floor().to_integer() as i64)
        .collect()
}

fn shift(x: &Point, lambda: &Weight, sign: i64) -> Point {
    x.iter()
        .zip(lambda.coords())
        .map(|(a, &l)| *a + Rational::from_integer((sign * l) as i128))
        .collect()
}

/// Replay the alcove walk `A_o -(-beta_1)-> A_1 -> ... ` and return the heights
/// `l_i` of the crossed hyperplanes `H_{beta_i, -l_i}`. The walk must cross a
/// wall of the current alcove at every step and end at `A_o - lambda`.
pub fn walk_heights(rs: &RootSystem, lambda: &Weight, roots: &[Root]) -> Result<Vec<i64>> {
    let mut x = base_point(rs);
    let mut k = floors(rs, &x);
    let mut heights = Vec::with_capacity(roots.len());
    for (step, beta) in roots.iter().enumerate() {
        let idx = rs
            .root_index(beta)
            .ok_or_else(|| Error::NotARoot(beta.coords().to_vec()))?;
        let l = if beta.is_positive() {
            -k[idx]
        } else {
            k[idx] + 1
        };
        let bw = rs.root_weight(beta);
        let c = pair_point(&x, &beta.coroot()) + Rational::from_integer(l as i128);
        let next: Point = x
            .iter()
            .zip(bw.coords())
            .map(|(a, &b)| *a - c * Rational::from_integer(b as i128))
            .collect();
        let nk = floors(rs, &next);
        let expected = if beta.is_positive() {
            k[idx] - 1
        } else {
            k[idx] + 1
        };
        let adjacent = nk[idx] == expected
            && nk
                .iter()
                .zip(&k)
                .enumerate()
                .all(|(g, (a, b))| g == idx || a == b);
        if !adjacent {
            return Err(Error::NotAdjacent { step: step + 1 });
        }
        heights.push(l);
        x = next;
        k = nk;
    }
    if k != floors(rs, &shift(&base_point(rs), lambda, -1)) {
        return Err(Error::EndpointMismatch);
    }
    Ok(heights)
}

fn make_chain(
    rs: &RootSystem,
    lambda: &Weight,
    roots: Vec<Root>,
    heights: Vec<i64>,
    provenance: Provenance,
) -> LambdaChain {
    let reduced = roots.len() == separating_count(rs, lambda);
    let entries = roots
        .into_iter()
        .zip(heights)
        .map(|(root, height)| {
            let n = root.pair_with(lambda);
            ChainEntry {
                root_index: rs.root_index(&root).expect("validated root"),
                complementary_height: n - height,
                relative_height: (n != 0).then(|| Rational::new(height as i128, n as i128)),
                height,
                root,
            }
        })
        .collect();
    LambdaChain {
        lambda: lambda.clone(),
        entries,
        reduced,
        provenance,
    }
}

/// Check the height ranges `0 <= l <= n - 1` (positive roots) and
/// `1 <= l <= n` (negative roots), `n = <lambda, beta^vee>`.
pub fn heights_in_range(chain: &LambdaChain) -> bool {
    chain.entries.iter().all(|e| {
        let n = e.root.pair_with(&chain.lambda);
        if e.root.is_positive() {
            0 <= e.height && e.height < n
        } else {
            1 <= e.height && e.height <= n
        }
    })
}

/// Build a chain from a root sequence; heights come from replaying the walk.
pub fn chain_from_roots(
    rs: &RootSystem,
    lambda: &Weight,
    roots: Vec<Root>,
    provenance: Provenance,
) -> Result<LambdaChain> {
    check_rank(rs, lambda)?;
    let heights = walk_heights(rs, lambda, &roots)?;
    Ok(make_chain(rs, lambda, roots, heights, provenance))
}

fn check_rank(rs: &RootSystem, lambda: &Weight) -> Result<()> {
    if lambda.rank() != rs.rank() {
        return Err(Error::RankMismatch {
            expected: rs.rank(),
            got: lambda.rank(),
        });
    }
    Ok(())
}

fn lex_dominant(rs: &RootSystem, lambda: &Weight) -> LambdaChain {
    struct Hyp {
        key: Vec<Rational>,
        root: Root,
        height: i64,
    }
    let mut hyps = Vec::new();
    for g in rs.positive_roots() {
        let n = g.pair_with(lambda);
        for l in 0..n {
            let mut key = vec![Rational::new(l as i128, n as i128)];
            key.extend(
                rs.node_order()
                    .iter()
                    .map(|&i| Rational::new(g.coroot_coords()[i] as i128, n as i128)),
            );
            hyps.push(Hyp {
                key,
                root: g.clone(),
                height: l,
            });
        }
    }
    hyps.sort_by(|a, b| a.key.cmp(&b.key));
    let (roots, heights) = hyps.into_iter().map(|h| (h.root, h.height)).unzip();
    make_chain(rs, lambda, roots, heights, Provenance::Lex)
}

/// The lex lambda-chain for dominant or anti-dominant `lambda`, using the node
/// order of `rs`.
pub fn lex_chain(rs: &RootSystem, lambda: &Weight) -> Result<LambdaChain> {
    check_rank(rs, lambda)?;
    if lambda.is_dominant() {
        let chain = lex_dominant(rs, lambda);
        debug_assert_eq!(
            walk_heights(rs, lambda, &chain.roots()).ok(),
            Some(chain.entries.iter().map(|e| e.height).collect())
        );
        Ok(chain)
    } else if lambda.is_antidominant() {
        let neg = lex_dominant(rs, &-lambda);
        let roots: Vec<Root> = neg.entries.iter().rev().map(|e| e.root.negated()).collect();
        chain_from_roots(rs, lambda, roots, Provenance::Lex)
    } else {
        Err(Error::MixedSignWeight(lambda.0.clone()))
    }
}

struct Crossing {
    t: Rational,
    key: Vec<Rational>,
    root: Root,
}

/// A reduced lambda-chain read off from a straight segment between perturbed
/// interior points of `A_o` and `A_o - lambda`.
pub fn segment_chain(rs: &RootSystem, lambda: &Weight, seed: u64) -> Result<LambdaChain> {
    check_rank(rs, lambda)?;
    let r = rs.rank();
    let m = rs.max_coroot_height();
    const K: i64 = 64;
    let q = (4 * K * m * (m + 1) * r as i64 + 1) as i128;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p0 = base_point(rs);
    let start_floors = floors(rs, &p0);
    let end0 = shift(&p0, lambda, -1);
    let end_floors = floors(rs, &end0);
    for _attempt in 0..256 {
        let mut jitter = |p: &Point| -> Point {
            p.iter()
                .map(|a| *a + Rational::new(rng.gen_range(-K..=K) as i128, q))
                .collect()
        };
        let a = jitter(&p0);
        let b = jitter(&end0);
        if floors(rs, &a) != start_floors || floors(rs, &b) != end_floors {
            continue;
        }
        let mut crossings = Vec::new();
        for g in rs.positive_roots() {
            let cv = g.coroot();
            let (fa, fb) = (pair_point(&a, &cv), pair_point(&b, &cv));
            if fa == fb {
                continue;
            }
            let n = g.pair_with(lambda).abs();
            let (lo, hi) = if fa < fb { (fa, fb) } else { (fb, fa) };
            let first = lo.floor().to_integer() + 1;
            let last = hi.ceil().to_integer() - 1;
            for level in first..=last {
                let t = (Rational::from_integer(level) - fa) / (fb - fa);
                let (root, l) = if fb < fa {
                    (g.clone(), -level)
                } else {
                    (g.negated(), level)
                };
                let mut key = vec![Rational::new(l as i128, n.max(1) as i128)];
                key.extend(
                    rs.node_order()
                        .iter()
                        .map(|&i| Rational::new(g.coroot_coords()[i] as i128, n.max(1) as i128)),
                );
                crossings.push(Crossing { t, key, root });
            }
        }
        crossings.sort_by(|x, y| match x.t.cmp(&y.t) {
            Ordering::Equal => x.key.cmp(&y.key),
            o => o,
        });
        let roots: Vec<Root> = crossings.into_iter().map(|c| c.root).collect();
        if let Ok(chain) = chain_from_roots(rs, lambda, roots, Provenance::Segment) {
            if chain.reduced && heights_in_range(&chain) {
                return Ok(chain);
            }
        }
    }
    Err(Error::Unsupported("no generic segment found".into()))
}

/// `Gamma_lex(lambda^+)` followed by `Gamma_lex(lambda^-)`, with heights recomputed
/// along the concatenated walk.
pub fn concat_chain(rs: &RootSystem, lambda: &Weight) -> Result<LambdaChain> {
    check_rank(rs, lambda)?;
    let (plus, minus) = lambda.split_signs();
    if plus.is_zero() || minus.is_zero() {
        return lex_chain(rs, lambda);
    }
    let mut roots = lex_chain(rs, &plus)?.roots();
    roots.extend(lex_chain(rs, &minus)?.roots());
    chain_from_roots(rs, lambda, roots, Provenance::Concat)
}

/// Parse a comma-separated root list such as `a1,-a2,a1+a2`.
pub fn custom_chain(rs: &RootSystem, lambda: &Weight, spec: &str) -> Result<LambdaChain> {
    let roots = spec
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| rs.parse_root(t))
        .collect::<Result<Vec<_>>>()?;
    chain_from_roots(rs, lambda, roots, Provenance::Custom)
}

/// How a chain should be built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChainSpec {
    Lex,
    Segment(u64),
    Concat,
    Custom(String),
}

impl ChainSpec {
    /// `lex`, `segment`, `segment:7`, `concat`, `custom:a1,-a2`.
    pub fn parse(s: &str, default_seed: u64) -> Result<Self> {
        let s = s.trim();
        match s {
            "lex" => Ok(ChainSpec::Lex),
            "segment" => Ok(ChainSpec::Segment(default_seed)),
            "concat" => Ok(ChainSpec::Concat),
            _ => {
                if let Some(rest) = s.strip_prefix("custom:") {
                    Ok(ChainSpec::Custom(rest.to_string()))
                } else if let Some(rest) = s.strip_prefix("segment:") {
                    rest.parse()
                        .map(ChainSpec::Segment)
                        .map_err(|_| Error::Parse(format!("bad seed {rest:?}")))
                } else {
                    Err(Error::Parse(format!("unknown chain kind {s:?}")))
                }
            }
        }
    }

    pub fn build(&self, rs: &RootSystem, lambda: &Weight) -> Result<LambdaChain> {
        match self {
            ChainSpec::Lex => lex_chain(rs, lambda),
            ChainSpec::Segment(seed) => segment_chain(rs, lambda, *seed),
            ChainSpec::Concat => concat_chain(rs, lambda),
            ChainSpec::Custom(s) => custom_chain(rs, lambda, s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleSubset {
    /// Chain positions (0-based), strictly increasing.
    pub positions: Vec<usize>,
    /// Vertices of the path `Pi(w, A)`, starting at `w`.
    pub path: Vec<usize>,
    /// Positions of the quantum (length-decreasing) steps.
    pub quantum_positions: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetStats {
    pub wt: Weight,
    pub end: usize,
    pub down: CorootVec,
    /// Sum of `sgn(beta_j) * l~_j` over the quantum steps; negative for some
    /// subsets of chains with negative roots.
    pub height: i64,
    /// Number of negative roots among the selected entries.
    pub n: usize,
}

/// Running state of `w r^_{j1} ... r^_{jk}` as an affine map `x -> u x + tau`.
#[derive(Clone)]
struct Frame {
    u: usize,
    tau: Weight,
    down: CorootVec,
    height: i64,
    n: usize,
}

impl Frame {
    fn start(rank: usize, w: usize) -> Self {
        Frame {
            u: w,
            tau: Weight::zero(rank),
            down: CorootVec::zero(rank),
            height: 0,
            n: 0,
        }
    }

    fn step(&self, group: &WeylGroup, e: &ChainEntry, kind: EdgeKind) -> Frame {
        let rs = group.root_system();
        let moved = group.act(self.u, &rs.root_weight(&e.root));
        let mut f = Frame {
            u: group.right_reflect(self.u, e.root_index),
            tau: &self.tau - &(&moved * e.height),
            down: self.down.clone(),
            height: self.height,
            n: self.n + usize::from(!e.root.is_positive()),
        };
        if kind == EdgeKind::Quantum {
            f.down += &rs.positive_roots()[e.root_index].coroot();
            f.height += if e.root.is_positive() {
                e.complementary_height
            } else {
                -e.complementary_height
            };
        }
        f
    }

    fn stats(&self, group: &WeylGroup, lambda: &Weight) -> SubsetStats {
        SubsetStats {
            wt: &group.act(self.u, lambda) - &self.tau,
            end: self.u,
            down: self.down.clone(),
            height: self.height,
            n: self.n,
        }
    }
}

/// All `w`-admissible subsets in lexicographic order of positions, with statistics.
pub fn enumerate_admissible(
    group: &WeylGroup,
    w: usize,
    chain: &LambdaChain,
) -> Vec<(AdmissibleSubset, SubsetStats)> {
    let mut out = Vec::new();
    let mut subset = AdmissibleSubset {
        positions: Vec::new(),
        path: vec![w],
        quantum_positions: Vec::new(),
    };
    let frame = Frame::start(group.rank(), w);
    dfs(group, chain, 0, &frame, &mut subset, &mut out);
    out
}

fn dfs(
    group: &WeylGroup,
    chain: &LambdaChain,
    start: usize,
    frame: &Frame,
    subset: &mut AdmissibleSubset,
    out: &mut Vec<(AdmissibleSubset, SubsetStats)>,
) {
    out.push((subset.clone(), frame.stats(group, &chain.lambda)));
    for j in start..chain.len() {
        let e = &chain.entries[j];
        let Some(kind) = qbg_step(group, frame.u, e.root_index) else {
            continue;
        };
        let next = frame.step(group, e, kind);
        subset.positions.push(j);
        subset.path.push(next.u);
        if kind == EdgeKind::Quantum {
            subset.quantum_positions.push(j);
        }
        dfs(group, chain, j + 1, &next, subset, out);
        if kind == EdgeKind::Quantum {
            subset.quantum_positions.pop();
        }
        subset.path.pop();
        subset.positions.pop();
    }
}

/// Statistics of a single subset (0-based positions), checking admissibility.
pub fn subset_statistics(
    group: &WeylGroup,
    w: usize,
    chain: &LambdaChain,
    positions: &[usize],
) -> Result<SubsetStats> {
    let mut frame = Frame::start(group.rank(), w);
    let mut prev: Option<usize> = None;
    for (step, &j) in positions.iter().enumerate() {
        if j >= chain.len() || prev.is_some_and(|p| p >= j) {
            return Err(Error::Parse(format!(
                "positions must be strictly increasing and below {}",
                chain.len() + 1
            )));
        }
        prev = Some(j);
        let e = &chain.entries[j];
        let kind = qbg_step(group, frame.u, e.root_index).ok_or(Error::NotAdmissible {
            step: step + 1,
            position: j + 1,
        })?;
        frame = frame.step(group, e, kind);
    }
    Ok(frame.stats(group, &chain.lambda))
}

/// Direct evaluation of `wt(w, A) = -w r^_{j1} ... r^_{js}(-lambda)`.
pub fn weight_by_reflections(
    group: &WeylGroup,
    w: usize,
    chain: &LambdaChain,
    positions: &[usize],
) -> Weight {
    let rs = group.root_system();
    let mut x = -&chain.lambda;
    for &j in positions.iter().rev() {
        let e = &chain.entries[j];
        let c = e.root.pair_with(&x) + e.height;
        x = &x - &(&rs.root_weight(&e.root) * c);
    }
    -&group.act(w, &x)
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ChainEntryRecord {
    pub root: Vec<i64>,
    pub sign: i64,
    pub height: i64,
    pub rel_height: Option<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ChainRecord {
    pub lambda: Vec<i64>,
    pub reduced: bool,
    pub provenance: Provenance,
    pub entries: Vec<ChainEntryRecord>,
}

impl From<&LambdaChain> for ChainRecord {
    fn from(c: &LambdaChain) -> Self {
        ChainRecord {
            lambda: c.lambda.0.clone(),
            reduced: c.reduced,
            provenance: c.provenance,
            entries: c
                .entries
                .iter()
                .map(|e| ChainEntryRecord {
                    root: e.root.abs().coords().to_vec(),
                    sign: if e.root.is_positive() { 1 } else { -1 },
                    height: e.height,
                    rel_height: e.relative_height.as_ref().map(rational_string),
                })
                .collect(),
        }
    }
}

/// One row of an admissible-subset table. Positions are 1-based.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleRow {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    pub n: usize,
    pub height: i64,
    pub wt: Vec<i64>,
    pub end: String,
    pub down: Vec<i64>,
}

impl AdmissibleRow {
    pub fn new(group: &WeylGroup, subset: &AdmissibleSubset, stats: &SubsetStats) -> Self {
        AdmissibleRow {
            a: subset.positions.iter().map(|j| j + 1).collect(),
            n: stats.n,
            height: stats.height,
            wt: stats.wt.0.clone(),
            end: group.name(stats.end),
            down: stats.down.0.clone(),
        }
    }
}

/// Table rows ordered by subset size, then lexicographically.
pub fn admissible_table(group: &WeylGroup, w: usize, chain: &LambdaChain) -> Vec<AdmissibleRow> {
    let mut rows: Vec<AdmissibleRow> = enumerate_admissible(group, w, chain)
        .iter()
        .map(|(a, s)| AdmissibleRow::new(group, a, s))
        .collect();
    rows.sort_by(|x, y| x.a.len().cmp(&y.a.len()).then_with(|| x.a.cmp(&y.a)));
    rows
}

impl fmt::Display for ChainEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.root, self.height)
    }
}

impl fmt::Display for LambdaChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
