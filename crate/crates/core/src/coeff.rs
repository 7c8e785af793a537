//! Coefficient arithmetic: Laurent polynomials in `q`, the group algebra of the
//! weight lattice, truncated expansions over Schubert symbols, and tuples of
//! partitions.

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rootsys::{CorootVec, Weight, WeylGroup};

pub const DEFAULT_MAX_PAR: usize = 4;
pub const DEFAULT_MAX_DEGREE: i64 = 6;

/// A Laurent polynomial in `q` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LaurentQ(BTreeMap<i64, i64>);

impl LaurentQ {
    pub fn zero() -> Self {
        LaurentQ::default()
    }

    pub fn one() -> Self {
        LaurentQ::monomial(1, 0)
    }

    /// `c q^e`.
    pub fn monomial(c: i64, e: i64) -> Self {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert(e, c);
        }
        LaurentQ(m)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, e: i64) -> i64 {
        self.0.get(&e).copied().unwrap_or(0)
    }

    /// `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.0.iter().map(|(&e, &c)| (e, c))
    }

    pub fn add_term(&mut self, c: i64, e: i64) {
        if c == 0 {
            return;
        }
        let slot = self.0.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.0.remove(&e);
        }
    }

    pub fn add_assign(&mut self, other: &LaurentQ) {
        for (e, c) in other.terms() {
            self.add_term(c, e);
        }
    }

    pub fn scale(&self, c: i64) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (e, x) in self.terms() {
            out.add_term(c * x, e);
        }
        out
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> LaurentQ {
        LaurentQ(self.0.iter().map(|(&e, &c)| (e + k, c)).collect())
    }

    /// Value at `q = 1`.
    pub fn at_one(&self) -> i64 {
        self.0.values().sum()
    }
}

impl Add for &LaurentQ {
    type Output = LaurentQ;
    fn add(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &LaurentQ {
    type Output = LaurentQ;
    fn sub(self, rhs: &LaurentQ) -> LaurentQ {
        self + &-rhs
    }
}

impl Neg for &LaurentQ {
    type Output = LaurentQ;
    fn neg(self) -> LaurentQ {
        self.scale(-1)
    }
}

impl Mul for &LaurentQ {
    type Output = LaurentQ;
    fn mul(self, rhs: &LaurentQ) -> LaurentQ {
        let mut out = LaurentQ::zero();
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                out.add_term(x * y, a + b);
            }
        }
        out
    }
}

impl fmt::Display for LaurentQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(e, c)| match e {
                0 => c.to_string(),
                1 => format!("{c}q"),
                _ => format!("{c}q^{e}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// An element of `Z[q, q^-1][P]`: a finite sum of `c(q) e^mu`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<(Weight, LaurentQ)>", from = "Vec<(Weight, LaurentQ)>")]
pub struct GroupAlgElt(BTreeMap<Weight, LaurentQ>);

impl From<GroupAlgElt> for Vec<(Weight, LaurentQ)> {
    fn from(g: GroupAlgElt) -> Self {
        g.0.into_iter().collect()
    }
}

impl From<Vec<(Weight, LaurentQ)>> for GroupAlgElt {
    fn from(v: Vec<(Weight, LaurentQ)>) -> Self {
        let mut g = GroupAlgElt::zero();
        for (mu, c) in v {
            g.add_term(&mu, &c);
        }
        g
    }
}

impl GroupAlgElt {
    pub fn zero() -> Self {
        GroupAlgElt::default()
    }

    /// `e^0`.
    pub fn one(rank: usize) -> Self {
        GroupAlgElt::exp(&Weight::zero(rank))
    }

    /// `e^mu`.
    pub fn exp(mu: &Weight) -> Self {
        GroupAlgElt::term(&LaurentQ::one(), mu)
    }

    /// `c e^mu`.
    pub fn term(c: &LaurentQ, mu: &Weight) -> Self {
        let mut g = GroupAlgElt::zero();
        g.add_term(mu, c);
        g
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, mu: &Weight) -> LaurentQ {
        self.0.get(mu).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &LaurentQ)> {
        self.0.iter()
    }

    pub fn add_term(&mut self, mu: &Weight, c: &LaurentQ) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(mu.clone()).or_default();
        slot.add_assign(c);
        if slot.is_zero() {
            self.0.remove(mu);
        }
    }

    pub fn add_assign(&mut self, other: &GroupAlgElt) {
        for (mu, c) in other.terms() {
            self.add_term(mu, c);
        }
    }

    pub fn scale(&self, c: i64) -> GroupAlgElt {
        self.map_coeffs(|x| x.scale(c))
    }

    pub fn map_coeffs(&self, f: impl Fn(&LaurentQ) -> LaurentQ) -> GroupAlgElt {
        let mut out = GroupAlgElt::zero();
        for (mu, c) in self.terms() {
            out.add_term(mu, &f(c));
        }
        out
    }

    /// Apply `e^mu -> e^{f(mu)}`.
    pub fn map_weights(&self, f: impl Fn(&Weight) -> Weight) -> GroupAlgElt {
        let mut out = GroupAlgElt::zero();
        for (mu, c) in self.terms() {
            out.add_term(&f(mu), c);
        }
        out
    }

    /// Specialize `q = 1`.
    pub fn at_q_one(&self) -> GroupAlgElt {
        self.map_coeffs(|c| LaurentQ::monomial(c.at_one(), 0))
    }
}

impl Add for &GroupAlgElt {
    type Output = GroupAlgElt;
    fn add(self, rhs: &GroupAlgElt) -> GroupAlgElt {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &GroupAlgElt {
    type Output = GroupAlgElt;
    fn sub(self, rhs: &GroupAlgElt) -> GroupAlgElt {
        self + &-rhs
    }
}

impl Neg for &GroupAlgElt {
    type Output = GroupAlgElt;
    fn neg(self) -> GroupAlgElt {
        self.scale(-1)
    }
}

impl Mul for &GroupAlgElt {
    type Output = GroupAlgElt;
    fn mul(self, rhs: &GroupAlgElt) -> GroupAlgElt {
        let mut out = GroupAlgElt::zero();
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                out.add_term(&(a + b), &(x * y));
            }
        }
        out
    }
}

impl fmt::Display for GroupAlgElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(mu, c)| format!("({c})e^{:?}", mu.0))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `x = w t_xi`, or `[O^w] Q^xi` in quantum K-theory.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SchubertSymbol {
    pub w: usize,
    pub xi: CorootVec,
}

impl SchubertSymbol {
    pub fn new(w: usize, xi: CorootVec) -> Self {
        SchubertSymbol { w, xi }
    }
}

impl Ord for SchubertSymbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.xi.cmp(&other.xi).then(self.w.cmp(&other.w))
    }
}

impl PartialOrd for SchubertSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Truncation {
    pub max_par_size: usize,
    pub max_down_degree: i64,
    pub exact: bool,
}

impl Truncation {
    pub fn exact() -> Self {
        Truncation {
            max_par_size: 0,
            max_down_degree: i64::MAX,
            exact: true,
        }
    }

    pub fn bounded(max_par_size: usize, max_down_degree: i64) -> Self {
        Truncation {
            max_par_size,
            max_down_degree,
            exact: false,
        }
    }

    /// Whether a term with `|chi| = size` and degree `deg` of `down + iota(chi)` is kept.
    pub fn admits(&self, size: usize, deg: i64) -> bool {
        self.exact || (size <= self.max_par_size && deg <= self.max_down_degree)
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::bounded(DEFAULT_MAX_PAR, DEFAULT_MAX_DEGREE)
    }
}

/// A finite (possibly truncated) combination of Schubert symbols with
/// coefficients in `Z[q, q^-1][P]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expansion {
    terms: BTreeMap<SchubertSymbol, GroupAlgElt>,
    truncation: Truncation,
    /// Degree of the input `xi`; truncation degrees are measured from here.
    origin_degree: i64,
}

impl Expansion {
    pub fn new(truncation: Truncation, origin_degree: i64) -> Self {
        Expansion {
            terms: BTreeMap::new(),
            truncation,
            origin_degree,
        }
    }

    pub fn exact() -> Self {
        Expansion::new(Truncation::exact(), 0)
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn origin_degree(&self) -> i64 {
        self.origin_degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SchubertSymbol, &GroupAlgElt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, x: &SchubertSymbol) -> GroupAlgElt {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, x: &SchubertSymbol, c: &GroupAlgElt) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(x.clone()).or_default();
        slot.add_assign(c);
        if slot.is_zero() {
            self.terms.remove(x);
        }
    }

    fn merged_truncation(&self, other: &Expansion) -> Result<Truncation> {
        match (self.truncation.exact, other.truncation.exact) {
            (true, _) => Ok(other.truncation),
            (_, true) => Ok(self.truncation),
            _ if self.truncation == other.truncation
                && self.origin_degree == other.origin_degree =>
            {
                Ok(self.truncation)
            }
            _ => Err(Error::TruncationMismatch),
        }
    }

    pub fn try_add(&self, other: &Expansion) -> Result<Expansion> {
        let truncation = self.merged_truncation(other)?;
        let origin_degree = if self.truncation.exact {
            other.origin_degree
        } else {
            self.origin_degree
        };
        let mut out = Expansion {
            terms: self.terms.clone(),
            truncation,
            origin_degree,
        };
        for (x, c) in other.terms() {
            out.add_term(x, c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Expansion) -> Result<Expansion> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Expansion {
        self.map(|g| g.scale(-1))
    }

    /// Multiply every coefficient by a scalar from `Z[q, q^-1][P]`.
    pub fn mul_scalar(&self, s: &GroupAlgElt) -> Expansion {
        self.map(|g| s * g)
    }

    pub fn map(&self, f: impl Fn(&GroupAlgElt) -> GroupAlgElt) -> Expansion {
        let mut out = Expansion {
            terms: BTreeMap::new(),
            truncation: self.truncation,
            origin_degree: self.origin_degree,
        };
        for (x, c) in self.terms() {
            out.add_term(x, &f(c));
        }
        out
    }

    pub fn at_q_one(&self) -> Expansion {
        self.map(GroupAlgElt::at_q_one)
    }

    /// Drop the terms whose `xi` lies more than `max_degree` above the origin.
    pub fn restrict_degree(&self, max_degree: i64) -> Expansion {
        let mut out = self.clone();
        out.terms
            .retain(|x, _| x.xi.total_degree() - self.origin_degree <= max_degree);
        if !out.truncation.exact || max_degree < out.truncation.max_down_degree {
            out.truncation.exact = false;
            out.truncation.max_down_degree = out.truncation.max_down_degree.min(max_degree);
        }
        out
    }

    /// Equality of terms, ignoring truncation metadata.
    pub fn same_terms(&self, other: &Expansion) -> bool {
        self.terms == other.terms
    }

    pub fn to_record(&self, group: &WeylGroup) -> ExpansionRecord {
        ExpansionRecord {
            terms: self
                .terms()
                .map(|(x, c)| TermRecord {
                    w: group.name(x.w),
                    xi: x.xi.0.clone(),
                    coeff: c
                        .terms()
                        .flat_map(|(mu, p)| {
                            p.terms().map(move |(e, k)| CoeffRecord {
                                q_exp: e,
                                weight: mu.0.clone(),
                                c: k,
                            })
                        })
                        .collect(),
                })
                .collect(),
            truncation: self.truncation,
            origin_degree: self.origin_degree,
        }
    }

    pub fn from_record(group: &WeylGroup, rec: &ExpansionRecord) -> Result<Expansion> {
        let mut out = Expansion::new(rec.truncation, rec.origin_degree);
        for t in &rec.terms {
            let x = SchubertSymbol::new(group.parse_word(&t.w)?, CorootVec(t.xi.clone()));
            let mut c = GroupAlgElt::zero();
            for k in &t.coeff {
                c.add_term(&Weight(k.weight.clone()), &LaurentQ::monomial(k.c, k.q_exp));
            }
            out.add_term(&x, &c);
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct CoeffRecord {
    pub q_exp: i64,
    pub weight: Vec<i64>,
    pub c: i64,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TermRecord {
    pub w: String,
    pub xi: Vec<i64>,
    pub coeff: Vec<CoeffRecord>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ExpansionRecord {
    pub terms: Vec<TermRecord>,
    pub truncation: Truncation,
    #[serde(default)]
    pub origin_degree: i64,
}

/// One partition per Dynkin node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartitionTuple {
    pub parts: Vec<Vec<u32>>,
}

impl PartitionTuple {
    pub fn size(&self) -> usize {
        self.parts.iter().flatten().map(|&p| p as usize).sum()
    }

    /// `iota(chi) = sum_i chi^(i)_1 alpha_i^vee`.
    pub fn iota(&self) -> CorootVec {
        CorootVec(
            self.parts
                .iter()
                .map(|p| p.first().copied().unwrap_or(0) as i64)
                .collect(),
        )
    }
}

fn partitions_into(
    n: u32,
    max_len: usize,
    max_part: u32,
    prefix: &mut Vec<u32>,
    out: &mut Vec<Vec<u32>>,
) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    if prefix.len() == max_len {
        return;
    }
    for p in (1..=n.min(max_part)).rev() {
        prefix.push(p);
        partitions_into(n - p, max_len, p, prefix, out);
        prefix.pop();
    }
}

/// Partitions of `n` with at most `max_len` parts.
pub fn partitions(n: u32, max_len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    partitions_into(n, max_len, n, &mut Vec::new(), &mut out);
    out
}

/// All tuples with `chi^(i)` of length at most `max(lambda_i, 0)` and
/// `|chi| <= max_size`, ordered by size and then lexicographically with
/// larger partitions first.
pub fn enumerate_partition_tuples(lambda: &Weight, max_size: usize) -> Vec<PartitionTuple> {
    let lens: Vec<usize> = lambda.coords().iter().map(|&l| l.max(0) as usize).collect();
    let mut out = Vec::new();
    for total in 0..=max_size {
        let mut acc = Vec::new();
        distribute(&lens, 0, total as u32, &mut Vec::new(), &mut acc);
        acc.sort_by_key(|t| Reverse(t.parts.clone()));
        out.extend(acc);
    }
    out
}

fn distribute(
    lens: &[usize],
    i: usize,
    left: u32,
    prefix: &mut Vec<Vec<u32>>,
    out: &mut Vec<PartitionTuple>,
) {
    if i == lens.len() {
        if left == 0 {
            out.push(PartitionTuple {
                parts: prefix.clone(),
            });
        }
        return;
    }
    let cap = if lens[i] == 0 { 0 } else { left };
    for n in 0..=cap {
        for p in partitions(n, lens[i]) {
            prefix.push(p);
            distribute(lens, i + 1, left - n, prefix, out);
            prefix.pop();
        }
    }
}

/// Tuples grouped by `(|chi|, iota(chi))` with multiplicities, in the order
/// of first appearance.
pub fn partition_classes(lambda: &Weight, max_size: usize) -> Vec<(usize, CorootVec, i64)> {
    let mut classes: Vec<(usize, CorootVec, i64)> = Vec::new();
    for t in enumerate_partition_tuples(lambda, max_size) {
        let (s, i) = (t.size(), t.iota());
        match classes.iter_mut().find(|(a, b, _)| *a == s && *b == i) {
            Some(c) => c.2 += 1,
            None => classes.push((s, i, 1)),
        }
    }
    classes
}
