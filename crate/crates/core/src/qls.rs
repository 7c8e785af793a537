//! Quantum LS paths, their `w`-dependent statistics, and the bijection with
//! admissible subsets of the lex chain.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::alcove::{enumerate_admissible, LambdaChain, Provenance};
use crate::error::{Error, Result};
use crate::qbg::{
    build_qbg, parse_rational, qbg_step, rational_string, CosetTable, FullQbg, LevelFilter,
};
use crate::rootsys::{CorootVec, Weight, WeylGroup};
use crate::Rational;

pub const DEFAULT_QLS_BOUND: usize = 2_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QlsPath {
    /// `0 = b_1 < ... < b_t < b_{t+1} = 1`.
    pub breakpoints: Vec<Rational>,
    /// `sigma_1, ..., sigma_t`, minimal coset representatives.
    pub directions: Vec<usize>,
}

impl QlsPath {
    pub fn segments(&self) -> usize {
        self.directions.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QlsStats {
    pub wt: Weight,
    pub iota_w: usize,
    pub xi_w: CorootVec,
    pub deg_w: i64,
}

/// `QLS(lambda)` for a dominant weight, with cached reachability and lift data.
#[derive(Debug)]
pub struct QlsSpace {
    full: Arc<FullQbg>,
    lambda: Weight,
    parabolic: Vec<usize>,
    cosets: CosetTable,
    reps: Vec<usize>,
    /// Position of each group element in `reps`, if it is a representative.
    rep_pos: Vec<Option<usize>>,
    /// Candidate interior breakpoints in increasing order.
    candidates: Vec<Rational>,
    /// `reach[c][a * |W^J| + b]`: a directed path of positive length from
    /// `reps[a]` to `reps[b]` in `QB_{b_c lambda}(W^J)`.
    reach: Vec<Vec<bool>>,
}

impl QlsSpace {
    pub fn new(full: Arc<FullQbg>, lambda: &Weight) -> Result<Self> {
        let group = Arc::clone(full.group());
        let rs = group.root_system();
        if lambda.rank() != rs.rank() {
            return Err(Error::RankMismatch {
                expected: rs.rank(),
                got: lambda.rank(),
            });
        }
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.0.clone()));
        }
        let parabolic = lambda.zero_nodes();
        let cosets = CosetTable::new(&group, &parabolic);
        let reps = group.min_coset_reps(&parabolic);
        let mut rep_pos = vec![None; group.len()];
        for (i, &v) in reps.iter().enumerate() {
            rep_pos[v] = Some(i);
        }
        let mut cand = BTreeSet::new();
        for beta in rs.positive_roots() {
            let n = beta.pair_with(lambda);
            for a in 1..n {
                cand.insert(Rational::new(a as i128, n as i128));
            }
        }
        let candidates: Vec<Rational> = cand.into_iter().collect();
        let m = reps.len();
        let mut reach = Vec::with_capacity(candidates.len());
        for b in &candidates {
            let g = build_qbg(
                &group,
                &parabolic,
                Some(LevelFilter {
                    b: *b,
                    lambda: lambda.clone(),
                }),
                usize::MAX,
            )?;
            let mut table = vec![false; m * m];
            for (a, &src) in reps.iter().enumerate() {
                let seen = g.reachable_from(src);
                for (t, &dst) in reps.iter().enumerate() {
                    table[a * m + t] = seen[dst];
                }
            }
            reach.push(table);
        }
        Ok(QlsSpace {
            full,
            lambda: lambda.clone(),
            parabolic,
            cosets,
            reps,
            rep_pos,
            candidates,
            reach,
        })
    }

    pub fn group(&self) -> &Arc<WeylGroup> {
        self.full.group()
    }

    pub fn full(&self) -> &Arc<FullQbg> {
        &self.full
    }

    pub fn lambda(&self) -> &Weight {
        &self.lambda
    }

    pub fn parabolic(&self) -> &[usize] {
        &self.parabolic
    }

    pub fn min_coset_reps(&self) -> &[usize] {
        &self.reps
    }

    pub fn candidates(&self) -> &[Rational] {
        &self.candidates
    }

    fn reachable(&self, c: usize, from: usize, to: usize) -> bool {
        let m = self.reps.len();
        match (self.rep_pos[from], self.rep_pos[to]) {
            (Some(a), Some(b)) => self.reach[c][a * m + b],
            _ => false,
        }
    }

    /// All quantum LS paths, in a deterministic order.
    pub fn enumerate(&self) -> Result<Vec<QlsPath>> {
        self.enumerate_bounded(DEFAULT_QLS_BOUND)
    }

    pub fn enumerate_bounded(&self, bound: usize) -> Result<Vec<QlsPath>> {
        let mut out = Vec::new();
        for &s in &self.reps {
            let mut path = QlsPath {
                breakpoints: vec![Rational::zero()],
                directions: vec![s],
            };
            self.extend(0, &mut path, &mut out, bound)?;
        }
        Ok(out)
    }

    fn extend(
        &self,
        next_c: usize,
        path: &mut QlsPath,
        out: &mut Vec<QlsPath>,
        bound: usize,
    ) -> Result<()> {
        let mut done = path.clone();
        done.breakpoints.push(Rational::one());
        out.push(done);
        if out.len() > bound {
            return Err(Error::BoundExceeded {
                required: out.len(),
                bound,
            });
        }
        let last = *path.directions.last().expect("nonempty");
        for c in next_c..self.candidates.len() {
            for &s in &self.reps {
                if s != last && self.reachable(c, last, s) {
                    path.breakpoints.push(self.candidates[c]);
                    path.directions.push(s);
                    self.extend(c + 1, path, out, bound)?;
                    path.breakpoints.pop();
                    path.directions.pop();
                }
            }
        }
        Ok(())
    }

    /// Check the defining conditions of `QLS(lambda)`.
    pub fn validate(&self, path: &QlsPath) -> Result<()> {
        let t = path.directions.len();
        let bad = |m: &str| Err(Error::InvalidQlsPath(m.to_string()));
        if t == 0 || path.breakpoints.len() != t + 1 {
            return bad("need t directions and t+1 breakpoints");
        }
        if !path.breakpoints[0].is_zero() || !path.breakpoints[t].is_one() {
            return bad("breakpoints must start at 0 and end at 1");
        }
        if path.breakpoints.windows(2).any(|p| p[0] >= p[1]) {
            return bad("breakpoints must be strictly increasing");
        }
        if path
            .directions
            .iter()
            .any(|&s| s >= self.group().len() || self.rep_pos[s].is_none())
        {
            return bad("directions must be minimal coset representatives");
        }
        for k in 1..t {
            let b = path.breakpoints[k];
            let Ok(c) = self.candidates.binary_search(&b) else {
                return bad("breakpoint admits no edge label");
            };
            let (prev, cur) = (path.directions[k - 1], path.directions[k]);
            if prev == cur || !self.reachable(c, prev, cur) {
                return bad("consecutive directions are not joined in the level graph");
            }
        }
        Ok(())
    }

    /// `wt(eta) = sum (b_{k+1} - b_k) sigma_k lambda`, checked integral.
    pub fn weight(&self, path: &QlsPath) -> Result<Weight> {
        let r = self.lambda.rank();
        let mut acc = vec![Rational::zero(); r];
        for (k, &s) in path.directions.iter().enumerate() {
            let len = path.breakpoints[k + 1] - path.breakpoints[k];
            for (a, &x) in acc
                .iter_mut()
                .zip(self.group().act(s, &self.lambda).coords())
            {
                *a += len * Rational::from_integer(x as i128);
            }
        }
        let mut coords = Vec::with_capacity(r);
        for a in acc {
            if !a.is_integer() {
                return Err(Error::NonIntegral(format!("weight coordinate {a}")));
            }
            coords.push(a.to_integer() as i64);
        }
        Ok(Weight(coords))
    }

    /// `w_k = min(sigma_k W_J, <=_{w_{k-1}})` for `k = 0..=t`.
    pub fn lifts(&self, path: &QlsPath, w: usize) -> Result<Vec<usize>> {
        let mut ws = vec![w];
        for &s in &path.directions {
            let prev = *ws.last().expect("nonempty");
            ws.push(self.full.deodhar_lift_with(&self.cosets, s, prev)?);
        }
        Ok(ws)
    }

    pub fn statistics(&self, path: &QlsPath, w: usize) -> Result<QlsStats> {
        let ws = self.lifts(path, w)?;
        let r = self.lambda.rank();
        let mut xi = CorootVec::zero(r);
        let mut deg = Rational::zero();
        for k in 1..ws.len() {
            let step = self.full.weight(ws[k - 1], ws[k]);
            xi += step;
            let pairing = Rational::from_integer(self.lambda.dot(step) as i128);
            deg -= (Rational::one() - path.breakpoints[k - 1]) * pairing;
        }
        if !deg.is_integer() {
            return Err(Error::NonIntegral(format!("Deg = {deg}")));
        }
        Ok(QlsStats {
            wt: self.weight(path)?,
            iota_w: *ws.last().expect("nonempty"),
            xi_w: xi,
            deg_w: deg.to_integer() as i64,
        })
    }

    fn check_lex(&self, chain: &LambdaChain) -> Result<()> {
        if chain.provenance != Provenance::Lex {
            return Err(Error::WrongProvenance {
                expected: "lex".into(),
                found: chain.provenance.to_string(),
            });
        }
        if chain.lambda != self.lambda {
            return Err(Error::InvalidQlsPath(
                "chain built for a different weight".into(),
            ));
        }
        Ok(())
    }

    /// The image of an admissible subset (0-based positions) of the lex chain.
    pub fn forward_map(
        &self,
        w: usize,
        chain: &LambdaChain,
        positions: &[usize],
    ) -> Result<QlsPath> {
        self.check_lex(chain)?;
        let group = self.group();
        let mut breakpoints = vec![Rational::zero()];
        let mut directions = Vec::new();
        let mut cur = w;
        for (step, &j) in positions.iter().enumerate() {
            let e = &chain.entries[j];
            let h = e.relative_height.expect("lex chain of a dominant weight");
            if h > *breakpoints.last().expect("nonempty") {
                directions.push(self.cosets.rep(cur));
                breakpoints.push(h);
            }
            if qbg_step(group, cur, e.root_index).is_none() {
                return Err(Error::NotAdmissible {
                    step: step + 1,
                    position: j + 1,
                });
            }
            cur = group.right_reflect(cur, e.root_index);
        }
        directions.push(self.cosets.rep(cur));
        breakpoints.push(Rational::one());
        let path = QlsPath {
            breakpoints,
            directions,
        };
        self.validate(&path)?;
        Ok(path)
    }

    /// The unique admissible subset mapping to `path`, found by exhaustive
    /// search within each relative-height block of the lex chain.
    pub fn inverse_map(&self, w: usize, chain: &LambdaChain, path: &QlsPath) -> Result<Vec<usize>> {
        self.check_lex(chain)?;
        self.validate(path)?;
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); path.segments()];
        for (j, e) in chain.entries.iter().enumerate() {
            let h = e.relative_height.expect("lex chain of a dominant weight");
            if let Ok(k) = path.breakpoints[..path.segments()].binary_search(&h) {
                blocks[k].push(j);
            }
        }
        let mut found = Vec::new();
        let mut chosen = Vec::new();
        self.search_blocks(w, chain, path, &blocks, 0, &mut chosen, &mut found);
        match found.len() {
            1 => {
                let a = found.pop().expect("one preimage");
                if self.forward_map(w, chain, &a)? != *path {
                    return Err(Error::Bijection("preimage does not map back".into()));
                }
                Ok(a)
            }
            0 => Err(Error::Bijection("no admissible preimage".into())),
            n => Err(Error::Bijection(format!("{n} admissible preimages"))),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn search_blocks(
        &self,
        cur: usize,
        chain: &LambdaChain,
        path: &QlsPath,
        blocks: &[Vec<usize>],
        k: usize,
        chosen: &mut Vec<usize>,
        found: &mut Vec<Vec<usize>>,
    ) {
        if k == blocks.len() {
            found.push(chosen.clone());
            return;
        }
        let mut ends = Vec::new();
        let mut sel = Vec::new();
        self.block_dfs(cur, chain, &blocks[k], 0, &mut sel, &mut ends);
        let target = path.directions[k];
        for (end, picks) in ends {
            if picks.is_empty() && k > 0 {
                continue;
            }
            if self.cosets.rep(end) != target {
                continue;
            }
            let len = chosen.len();
            chosen.extend(&picks);
            self.search_blocks(end, chain, path, blocks, k + 1, chosen, found);
            chosen.truncate(len);
        }
    }

    fn block_dfs(
        &self,
        cur: usize,
        chain: &LambdaChain,
        block: &[usize],
        start: usize,
        sel: &mut Vec<usize>,
        ends: &mut Vec<(usize, Vec<usize>)>,
    ) {
        ends.push((cur, sel.clone()));
        let group = self.group();
        for i in start..block.len() {
            let e = &chain.entries[block[i]];
            if qbg_step(group, cur, e.root_index).is_some() {
                sel.push(block[i]);
                self.block_dfs(
                    group.right_reflect(cur, e.root_index),
                    chain,
                    block,
                    i + 1,
                    sel,
                    ends,
                );
                sel.pop();
            }
        }
    }

    pub fn record(&self, path: &QlsPath) -> QlsRecord {
        QlsRecord {
            breakpoints: path.breakpoints.iter().map(rational_string).collect(),
            directions: path
                .directions
                .iter()
                .map(|&s| self.group().name(s))
                .collect(),
            lambda: self.lambda.0.clone(),
        }
    }

    pub fn from_record(&self, rec: &QlsRecord) -> Result<QlsPath> {
        if rec.lambda != self.lambda.0 {
            return Err(Error::InvalidQlsPath(
                "record is for a different weight".into(),
            ));
        }
        let path = QlsPath {
            breakpoints: rec
                .breakpoints
                .iter()
                .map(|b| parse_rational(b))
                .collect::<Result<_>>()?,
            directions: rec
                .directions
                .iter()
                .map(|d| self.group().parse_word(d))
                .collect::<Result<_>>()?,
        };
        self.validate(&path)?;
        Ok(path)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct QlsRecord {
    pub breakpoints: Vec<String>,
    pub directions: Vec<String>,
    pub lambda: Vec<i64>,
}

/// Outcome of checking the bijection for one `w`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BijectionReport {
    pub subsets: usize,
    pub paths: usize,
}

/// Check that `A -> eta` is a bijection `A(w, Gamma_lex) -> QLS(lambda)`
/// matching `wt`, `end`, `down` and `-height` with `wt`, `iota`, `xi` and `Deg`,
/// and that the inverse map recovers `A`.
pub fn verify_bijection(
    space: &QlsSpace,
    chain: &LambdaChain,
    paths: &[QlsPath],
    w: usize,
) -> Result<BijectionReport> {
    let group = space.group();
    let index: HashMap<&QlsPath, usize> = paths.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut hit = vec![false; paths.len()];
    let subsets = enumerate_admissible(group, w, chain);
    for (a, s) in &subsets {
        let eta = space.forward_map(w, chain, &a.positions)?;
        let Some(&i) = index.get(&eta) else {
            return Err(Error::Bijection(format!(
                "image of {:?} is not enumerated",
                a.positions
            )));
        };
        if std::mem::replace(&mut hit[i], true) {
            return Err(Error::Bijection(format!("two subsets map to path {i}")));
        }
        let q = space.statistics(&eta, w)?;
        if q.wt != s.wt || q.iota_w != s.end || q.xi_w != s.down || q.deg_w != -s.height {
            return Err(Error::Bijection(format!(
                "statistics differ for A = {:?} at w = {}",
                a.positions,
                group.name(w)
            )));
        }
        if space.inverse_map(w, chain, &eta)? != a.positions {
            return Err(Error::Bijection(format!(
                "inverse map fails on {:?}",
                a.positions
            )));
        }
    }
    if subsets.len() != paths.len() {
        return Err(Error::Bijection(format!(
            "{} admissible subsets but {} quantum LS paths",
            subsets.len(),
            paths.len()
        )));
    }
    Ok(BijectionReport {
        subsets: subsets.len(),
        paths: paths.len(),
    })
}
