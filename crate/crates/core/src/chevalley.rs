//! Chevalley expansions in the K-theory of the semi-infinite flag manifold, and
//! the quantum Bruhat operators `Q_alpha`, `R_alpha = 1 + Q_alpha`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alcove::{enumerate_admissible, walk_heights, LambdaChain, Provenance};
use crate::coeff::{
    partition_classes, Expansion, GroupAlgElt, LaurentQ, SchubertSymbol, Truncation,
};
use crate::error::{Error, Result};
use crate::qbg::{qbg_step, EdgeKind};
use crate::qls::QlsSpace;
use crate::rootsys::{CorootVec, Root, RootSystem, Weight, WeylGroup};

/// Default `Q`-degree up to which inverse series are compared.
pub const DEFAULT_SERIES_DEGREE: i64 = 4;

/// A polynomial in `Q_1, ..., Q_r`; monomials are keyed by exponent vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QPoly(BTreeMap<CorootVec, i64>);

impl QPoly {
    pub fn monomial(exp: &CorootVec, c: i64) -> Self {
        let mut p = QPoly::default();
        p.add_term(exp, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CorootVec, i64)> {
        self.0.iter().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, exp: &CorootVec) -> i64 {
        self.0.get(exp).copied().unwrap_or(0)
    }

    pub fn add_term(&mut self, exp: &CorootVec, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.0.entry(exp.clone()).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.0.remove(exp);
        }
    }
}

/// An element of `Z[Q][W]`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QWElt(BTreeMap<usize, QPoly>);

impl QWElt {
    pub fn basis(w: usize, rank: usize) -> Self {
        let mut v = QWElt::default();
        v.add_term(w, &CorootVec::zero(rank), 1);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &CorootVec, i64)> {
        self.0
            .iter()
            .flat_map(|(&w, p)| p.terms().map(move |(e, c)| (w, e, c)))
    }

    pub fn coeff(&self, w: usize, exp: &CorootVec) -> i64 {
        self.0.get(&w).map_or(0, |p| p.coeff(exp))
    }

    pub fn add_term(&mut self, w: usize, exp: &CorootVec, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.0.entry(w).or_default();
        slot.add_term(exp, c);
        if slot.is_zero() {
            self.0.remove(&w);
        }
    }

    pub fn add_scaled(&mut self, other: &QWElt, c: i64) {
        for (w, e, k) in other.terms() {
            self.add_term(w, e, c * k);
        }
    }

    /// Drop monomials of total degree above `max_degree`.
    pub fn truncated(&self, max_degree: i64) -> QWElt {
        let mut out = QWElt::default();
        for (w, e, c) in self.terms() {
            if e.total_degree() <= max_degree {
                out.add_term(w, e, c);
            }
        }
        out
    }

    pub fn display(&self, group: &WeylGroup) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(w, e, c)| format!("{c}*Q^{:?}*{}", e.0, group.name(w)))
            .collect();
        parts.join(" + ")
    }
}

/// The quantum Bruhat operator `Q_alpha` for the positive root with index `k`.
pub fn quantum_bruhat_operator(group: &WeylGroup, k: usize, v: &QWElt) -> QWElt {
    let rs = group.root_system();
    let coroot = rs.positive_roots()[k].coroot();
    let mut out = QWElt::default();
    for (w, e, c) in v.terms() {
        match qbg_step(group, w, k) {
            Some(EdgeKind::Up) => out.add_term(group.right_reflect(w, k), e, c),
            Some(EdgeKind::Quantum) => out.add_term(group.right_reflect(w, k), &(e + &coroot), c),
            None => {}
        }
    }
    out
}

/// `Q_alpha` for a root given explicitly; negative roots are rejected.
pub fn quantum_bruhat_operator_root(group: &WeylGroup, alpha: &Root, v: &QWElt) -> Result<QWElt> {
    if !alpha.is_positive() {
        return Err(Error::NegativeRoot);
    }
    let k = group
        .root_system()
        .root_index(alpha)
        .ok_or_else(|| Error::NotARoot(alpha.coords().to_vec()))?;
    Ok(quantum_bruhat_operator(group, k, v))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// An operator word: `(k, Plus)` is `R_beta = 1 + Q_beta`, `(k, Minus)` is
/// `R'_{-beta} = 1 - Q_beta`, for the positive root `beta` with index `k`.
pub type SignedRootSeq = Vec<(usize, Sign)>;

pub fn signed_sequence(chain: &LambdaChain) -> SignedRootSeq {
    chain
        .entries
        .iter()
        .map(|e| {
            (
                e.root_index,
                if e.root.is_positive() {
                    Sign::Plus
                } else {
                    Sign::Minus
                },
            )
        })
        .collect()
}

/// Apply the factors to `w`, first entry first.
pub fn r_operator_product(group: &WeylGroup, seq: &[(usize, Sign)], w: usize) -> QWElt {
    let mut v = QWElt::basis(w, group.rank());
    for &(k, sign) in seq {
        let q = quantum_bruhat_operator(group, k, &v);
        v.add_scaled(&q, if sign == Sign::Plus { 1 } else { -1 });
    }
    v
}

/// The signed `(end, down)` multiset of admissible subsets: the coefficient of
/// `Q^mu v` is the sum of `(-1)^{n(A)}` over `A` with `end = v`, `down = mu`.
pub fn admissible_signed_support(group: &WeylGroup, chain: &LambdaChain, w: usize) -> QWElt {
    let mut out = QWElt::default();
    for (_, s) in enumerate_admissible(group, w, chain) {
        out.add_term(s.end, &s.down, if s.n % 2 == 0 { 1 } else { -1 });
    }
    out
}

/// Apply `R_gamma` for an arbitrary root: `1 + Q_gamma` for positive roots and
/// the inverse series `sum_k (-1)^k Q_{|gamma|}^k` for negative ones, modulo
/// `Q`-degree above `max_degree`.
pub fn apply_r(group: &WeylGroup, gamma: &Root, v: &QWElt, max_degree: i64) -> QWElt {
    let k = group.root_system().root_index(gamma).expect("a root");
    if gamma.is_positive() {
        let mut out = v.clone();
        out.add_scaled(&quantum_bruhat_operator(group, k, v), 1);
        return out.truncated(max_degree);
    }
    apply_inverse_series(group, k, v, max_degree)
}

fn apply_inverse_series(group: &WeylGroup, k: usize, v: &QWElt, max_degree: i64) -> QWElt {
    // Q_beta^2 raises the Q-degree by at least one, so 2N + 1 terms suffice.
    let mut out = v.truncated(max_degree);
    let mut power = out.clone();
    for j in 1..=(2 * max_degree + 1) {
        power = quantum_bruhat_operator(group, k, &power).truncated(max_degree);
        out.add_scaled(&power, if j % 2 == 0 { 1 } else { -1 });
    }
    out
}

/// `gamma_1 = alpha, gamma_2 = s_alpha(beta), gamma_3 = s_alpha s_beta(alpha), ...`
/// ending at `beta`, one root per reflection of the dihedral group.
pub fn ybe_sequence(group: &WeylGroup, alpha: &Root, beta: &Root) -> Result<Vec<Root>> {
    let rs = group.root_system();
    let ia = rs
        .root_index(alpha)
        .ok_or_else(|| Error::NotARoot(alpha.coords().to_vec()))?;
    let ib = rs
        .root_index(beta)
        .ok_or_else(|| Error::NotARoot(beta.coords().to_vec()))?;
    if ia == ib {
        return Err(Error::YbePrecondition(
            "roots are linearly dependent".into(),
        ));
    }
    if rs.inner(alpha, beta) > 0 {
        return Err(Error::YbePrecondition(format!("({alpha}, {beta}) > 0")));
    }
    let sab = group.mul(group.right_reflect(0, ia), group.right_reflect(0, ib));
    let mut m = 1;
    let mut p = sab;
    while p != 0 {
        p = group.mul(p, sab);
        m += 1;
    }
    let mut seq = Vec::with_capacity(m);
    for k in 1..=m {
        let mut x = if k % 2 == 1 {
            alpha.clone()
        } else {
            beta.clone()
        };
        for j in (0..k - 1).rev() {
            let refl = if j % 2 == 0 { alpha } else { beta };
            x = rs.reflect_root(refl, &x);
        }
        seq.push(x);
    }
    debug_assert_eq!(seq.last(), Some(beta));
    Ok(seq)
}

/// Both sides of the Yang-Baxter equation evaluated on every basis element:
/// `(R_{g1} ... R_{gm}(w), R_{gm} ... R_{g1}(w))` for each `w`.
pub fn ybe_sides(
    group: &WeylGroup,
    alpha: &Root,
    beta: &Root,
    max_degree: i64,
) -> Result<Vec<(QWElt, QWElt)>> {
    let seq = ybe_sequence(group, alpha, beta)?;
    Ok((0..group.len())
        .map(|w| {
            let start = QWElt::basis(w, group.rank());
            let lhs = seq
                .iter()
                .rev()
                .fold(start.clone(), |v, g| apply_r(group, g, &v, max_degree));
            let rhs = seq
                .iter()
                .fold(start, |v, g| apply_r(group, g, &v, max_degree));
            (lhs, rhs)
        })
        .collect())
}

/// Ordered pairs of roots with `(alpha, beta) <= 0`, excluding `beta = +-alpha`.
pub fn ybe_pairs(rs: &RootSystem) -> Vec<(Root, Root)> {
    let all: Vec<Root> = rs
        .positive_roots()
        .iter()
        .flat_map(|r| [r.clone(), r.negated()])
        .collect();
    let mut pairs = Vec::new();
    for a in &all {
        for b in &all {
            if rs.root_index(a) != rs.root_index(b) && rs.inner(a, b) <= 0 {
                pairs.push((a.clone(), b.clone()));
            }
        }
    }
    pairs
}

#[derive(Serialize, Deserialize, Debug, Clone, Default, PartialEq, Eq)]
pub struct YbeReport {
    pub pairs_checked: usize,
    pub failures: Vec<String>,
}

/// Check one pair on every Weyl group element.
pub fn verify_ybe(
    group: &WeylGroup,
    alpha: &Root,
    beta: &Root,
    max_degree: i64,
) -> Result<Vec<String>> {
    let sides = ybe_sides(group, alpha, beta, max_degree)?;
    Ok(compare_ybe_sides(group, alpha, beta, &sides))
}

pub fn compare_ybe_sides(
    group: &WeylGroup,
    alpha: &Root,
    beta: &Root,
    sides: &[(QWElt, QWElt)],
) -> Vec<String> {
    sides
        .iter()
        .enumerate()
        .filter(|(_, (l, r))| l != r)
        .map(|(w, _)| format!("({alpha}, {beta}) at {}", group.name(w)))
        .collect()
}

/// `R_alpha` composed with the truncated inverse series, both ways, is the
/// identity modulo `Q`-degree above `max_degree`.
pub fn verify_inverse_series(group: &WeylGroup, max_degree: i64) -> Vec<String> {
    let rs = group.root_system();
    let mut failures = Vec::new();
    for (k, alpha) in rs.positive_roots().iter().enumerate() {
        for w in 0..group.len() {
            let v = QWElt::basis(w, group.rank());
            let a = apply_r(
                group,
                alpha,
                &apply_inverse_series(group, k, &v, max_degree),
                max_degree,
            );
            let b =
                apply_inverse_series(group, k, &apply_r(group, alpha, &v, max_degree), max_degree);
            if a != v || b != v {
                failures.push(format!("inverse of R_{alpha} at {}", group.name(w)));
            }
        }
    }
    failures
}

/// All pairs in `rs` plus the inverse-series check.
pub fn verify_ybe_all(group: &WeylGroup, max_degree: i64) -> Result<YbeReport> {
    let mut report = YbeReport::default();
    for (a, b) in ybe_pairs(group.root_system()) {
        report
            .failures
            .extend(verify_ybe(group, &a, &b, max_degree)?);
        report.pairs_checked += 1;
    }
    report
        .failures
        .extend(verify_inverse_series(group, max_degree));
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Dominant,
    Antidominant,
    General,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Dominant => "dominant",
            Regime::Antidominant => "antidominant",
            Regime::General => "general",
        })
    }
}

/// One summand before the partition sum: `sign q^{qexp} e^{wt} [end t_{down}]`.
struct RawTerm {
    sign: i64,
    qexp: i64,
    wt: Weight,
    end: usize,
    down: CorootVec,
}

fn check_symbol(group: &WeylGroup, lambda: &Weight, x: &SchubertSymbol) -> Result<()> {
    let r = group.rank();
    if lambda.rank() != r || x.xi.rank() != r {
        return Err(Error::RankMismatch {
            expected: r,
            got: if lambda.rank() != r {
                lambda.rank()
            } else {
                x.xi.rank()
            },
        });
    }
    if x.w >= group.len() {
        return Err(Error::UnknownElement(x.w.to_string()));
    }
    if !x.xi.is_nonnegative() {
        return Err(Error::Parse(format!("xi = {:?} is not in Q^vee,+", x.xi.0)));
    }
    Ok(())
}

fn assemble(
    lambda: &Weight,
    x: &SchubertSymbol,
    raw: impl IntoIterator<Item = RawTerm>,
    trunc: Truncation,
) -> Result<Expansion> {
    let par_trivial = lambda.coords().iter().all(|&l| l <= 0);
    let (truncation, classes) = if par_trivial {
        (
            Truncation::exact(),
            vec![(0usize, CorootVec::zero(lambda.rank()), 1i64)],
        )
    } else if trunc.exact {
        return Err(Error::Unsupported(
            "the partition sum is infinite; give truncation bounds".into(),
        ));
    } else {
        (trunc, partition_classes(lambda, trunc.max_par_size))
    };
    let shift = lambda.dot(&x.xi);
    let mut out = Expansion::new(truncation, x.xi.total_degree());
    for t in raw {
        for (size, iota, count) in &classes {
            let extra = &t.down + iota;
            if !truncation.admits(*size, extra.total_degree()) {
                continue;
            }
            let sym = SchubertSymbol::new(t.end, &x.xi + &extra);
            let c = LaurentQ::monomial(t.sign * count, t.qexp - shift - *size as i64);
            out.add_term(&sym, &GroupAlgElt::term(&c, &t.wt));
        }
    }
    Ok(out)
}

fn require_lex(chain: &LambdaChain, lambda: &Weight) -> Result<()> {
    if chain.provenance != Provenance::Lex {
        return Err(Error::WrongProvenance {
            expected: "lex".into(),
            found: chain.provenance.to_string(),
        });
    }
    if chain.lambda != *lambda {
        return Err(Error::Parse(
            "chain was built for a different weight".into(),
        ));
    }
    Ok(())
}

/// The output degree through which an expansion for `lambda` under `trunc`
/// contains every term; `None` when nothing is cut. Since
/// `|chi| <= max(lambda^+) deg(iota(chi))`, the partition-size bound only
/// removes terms above `max_par_size / max(lambda^+)`. Different chains split
/// a translation between `down` and `iota` differently, so expansions from
/// different chains agree only inside this window.
pub fn coherent_degree(lambda: &Weight, trunc: &Truncation) -> Option<i64> {
    let top = lambda.coords().iter().copied().max().unwrap_or(0);
    if top <= 0 || trunc.exact {
        return None;
    }
    Some(trunc.max_down_degree.min(trunc.max_par_size as i64 / top))
}

/// Dominant weights via admissible subsets of the lex chain.
pub fn chevalley_dominant(
    group: &WeylGroup,
    chain: &LambdaChain,
    x: &SchubertSymbol,
    trunc: Truncation,
) -> Result<Expansion> {
    let lambda = &chain.lambda;
    check_symbol(group, lambda, x)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.0.clone()));
    }
    require_lex(chain, lambda)?;
    let raw = enumerate_admissible(group, x.w, chain)
        .into_iter()
        .map(|(_, s)| RawTerm {
            sign: 1,
            qexp: -s.height,
            wt: s.wt,
            end: s.end,
            down: s.down,
        });
    assemble(lambda, x, raw, trunc)
}

/// Dominant weights via quantum LS paths.
pub fn chevalley_dominant_qls(
    space: &QlsSpace,
    x: &SchubertSymbol,
    trunc: Truncation,
) -> Result<Expansion> {
    let lambda = space.lambda();
    check_symbol(space.group(), lambda, x)?;
    let mut raw = Vec::new();
    for eta in space.enumerate()? {
        let s = space.statistics(&eta, x.w)?;
        raw.push(RawTerm {
            sign: 1,
            qexp: s.deg_w,
            wt: s.wt,
            end: s.iota_w,
            down: s.xi_w,
        });
    }
    assemble(lambda, x, raw, trunc)
}

/// Anti-dominant weights: a finite signed sum over the lex chain.
pub fn chevalley_antidominant(
    group: &WeylGroup,
    chain: &LambdaChain,
    x: &SchubertSymbol,
) -> Result<Expansion> {
    let lambda = &chain.lambda;
    check_symbol(group, lambda, x)?;
    if !lambda.is_antidominant() {
        return Err(Error::NotAntiDominant(lambda.0.clone()));
    }
    require_lex(chain, lambda)?;
    let raw = enumerate_admissible(group, x.w, chain)
        .into_iter()
        .map(|(a, s)| RawTerm {
            sign: if a.positions.len() % 2 == 0 { 1 } else { -1 },
            qexp: -s.height,
            wt: s.wt,
            end: s.end,
            down: s.down,
        });
    assemble(lambda, x, raw, Truncation::exact())
}

/// Arbitrary weights and chains, with sign `(-1)^{n(A)}`. Non-reduced chains
/// other than the concatenated lex chain need `allow_unverified`.
pub fn chevalley_general(
    group: &WeylGroup,
    chain: &LambdaChain,
    x: &SchubertSymbol,
    trunc: Truncation,
    allow_unverified: bool,
) -> Result<Expansion> {
    let lambda = &chain.lambda;
    check_symbol(group, lambda, x)?;
    let heights = walk_heights(group.root_system(), lambda, &chain.roots())?;
    if heights.iter().ne(chain.entries.iter().map(|e| &e.height)) {
        return Err(Error::EndpointMismatch);
    }
    if !chain.reduced && chain.provenance != Provenance::Concat && !allow_unverified {
        return Err(Error::UnverifiedChain);
    }
    let raw = enumerate_admissible(group, x.w, chain)
        .into_iter()
        .map(|(_, s)| RawTerm {
            sign: if s.n % 2 == 0 { 1 } else { -1 },
            qexp: -s.height,
            wt: s.wt,
            end: s.end,
            down: s.down,
        });
    assemble(lambda, x, raw, trunc)
}
