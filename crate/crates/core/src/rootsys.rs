//! Root systems, the weight lattice, and finite Weyl groups.
//!
//! Everything is exact integer arithmetic. Weights are written in the basis of
//! fundamental weights, roots in the basis of simple roots, and coroots in the
//! basis of simple coroots, so that `<lambda, beta^vee>` is a plain dot product.
//!
//! Weyl group elements are identified by their integer action matrix on the
//! simple-root basis. A [`WeylGroup`] enumerates all elements once, sorted by
//! `(length, canonical word)`, and the rest of the crate refers to elements by
//! their index in that enumeration.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default refusal bound for Weyl group enumeration.
pub const DEFAULT_WEYL_BOUND: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl CartanType {
    pub fn from_letter(label: &str) -> Option<Self> {
        Some(match label {
            "A" | "a" => CartanType::A,
            "B" | "b" => CartanType::B,
            "C" | "c" => CartanType::C,
            "D" | "d" => CartanType::D,
            "E" | "e" => CartanType::E,
            "F" | "f" => CartanType::F,
            "G" | "g" => CartanType::G,
            _ => return None,
        })
    }

    pub fn letter(self) -> char {
        match self {
            CartanType::A => 'A',
            CartanType::B => 'B',
            CartanType::C => 'C',
            CartanType::D => 'D',
            CartanType::E => 'E',
            CartanType::F => 'F',
            CartanType::G => 'G',
        }
    }

    fn valid_rank(self, rank: usize) -> bool {
        match self {
            CartanType::A => rank >= 1,
            CartanType::B | CartanType::C => rank >= 2,
            CartanType::D => rank >= 4,
            CartanType::E => (6..=8).contains(&rank),
            CartanType::F => rank == 4,
            CartanType::G => rank == 2,
        }
    }
}

/// An integral weight in the basis of fundamental weights.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Weight(pub Vec<i64>);

/// An element of the coroot lattice in the basis of simple coroots.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CorootVec(pub Vec<i64>);

macro_rules! lattice_ops {
    ($t:ident) => {
        impl $t {
            pub fn zero(rank: usize) -> Self {
                $t(vec![0; rank])
            }

            pub fn rank(&self) -> usize {
                self.0.len()
            }

            pub fn is_zero(&self) -> bool {
                self.0.iter().all(|&x| x == 0)
            }

            pub fn coords(&self) -> &[i64] {
                &self.0
            }
        }

        impl Add for &$t {
            type Output = $t;
            fn add(self, rhs: &$t) -> $t {
                debug_assert_eq!(self.0.len(), rhs.0.len());
                $t(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
            }
        }

        impl Add for $t {
            type Output = $t;
            fn add(self, rhs: $t) -> $t {
                &self + &rhs
            }
        }

        impl AddAssign<&$t> for $t {
            fn add_assign(&mut self, rhs: &$t) {
                debug_assert_eq!(self.0.len(), rhs.0.len());
                for (a, b) in self.0.iter_mut().zip(&rhs.0) {
                    *a += b;
                }
            }
        }

        impl Sub for &$t {
            type Output = $t;
            fn sub(self, rhs: &$t) -> $t {
                debug_assert_eq!(self.0.len(), rhs.0.len());
                $t(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
            }
        }

        impl Sub for $t {
            type Output = $t;
            fn sub(self, rhs: $t) -> $t {
                &self - &rhs
            }
        }

        impl Neg for &$t {
            type Output = $t;
            fn neg(self) -> $t {
                $t(self.0.iter().map(|a| -a).collect())
            }
        }

        impl Neg for $t {
            type Output = $t;
            fn neg(self) -> $t {
                -&self
            }
        }

        impl Mul<i64> for &$t {
            type Output = $t;
            fn mul(self, k: i64) -> $t {
                $t(self.0.iter().map(|a| a * k).collect())
            }
        }
    };
}

lattice_ops!(Weight);
lattice_ops!(CorootVec);

impl CorootVec {
    /// Membership in the positive part of the coroot lattice.
    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().sum()
    }
}

impl Weight {
    pub fn is_dominant(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn is_antidominant(&self) -> bool {
        self.0.iter().all(|&x| x <= 0)
    }

    /// Split into `(lambda^+, lambda^-)` with `lambda = lambda^+ + lambda^-`.
    pub fn split_signs(&self) -> (Weight, Weight) {
        (
            Weight(self.0.iter().map(|&x| x.max(0)).collect()),
            Weight(self.0.iter().map(|&x| x.min(0)).collect()),
        )
    }

    /// The index set `J` of the parabolic subgroup stabilizing a dominant weight.
    pub fn zero_nodes(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] == 0).collect()
    }

    /// `<self, coroot>` without a rank check.
    pub fn dot(&self, coroot: &CorootVec) -> i64 {
        debug_assert_eq!(self.0.len(), coroot.0.len());
        self.0.iter().zip(&coroot.0).map(|(a, b)| a * b).sum()
    }
}

/// `<lambda, alpha^vee>`, rejecting vectors of different rank.
pub fn pair(lambda: &Weight, coroot: &CorootVec) -> Result<i64> {
    if lambda.rank() != coroot.rank() {
        return Err(Error::RankMismatch {
            expected: lambda.rank(),
            got: coroot.rank(),
        });
    }
    Ok(lambda.dot(coroot))
}

/// A root with its coroot. Coordinates are all `>= 0` or all `<= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    coords: Vec<i64>,
    coroot: Vec<i64>,
}

impl Root {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn coroot(&self) -> CorootVec {
        CorootVec(self.coroot.clone())
    }

    pub fn coroot_coords(&self) -> &[i64] {
        &self.coroot
    }

    pub fn is_positive(&self) -> bool {
        self.coords.iter().all(|&c| c >= 0)
    }

    pub fn negated(&self) -> Root {
        Root {
            coords: self.coords.iter().map(|c| -c).collect(),
            coroot: self.coroot.iter().map(|c| -c).collect(),
        }
    }

    /// `|beta|`, the positive root among `+-beta`.
    pub fn abs(&self) -> Root {
        if self.is_positive() {
            self.clone()
        } else {
            self.negated()
        }
    }

    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }

    /// `<rho, beta^vee>`, the height of the coroot.
    pub fn coroot_height(&self) -> i64 {
        self.coroot.iter().sum()
    }

    pub fn pair_with(&self, lambda: &Weight) -> i64 {
        lambda.0.iter().zip(&self.coroot).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Display for Root {
    /// Signed simple-root expression such as `a1+a2` or `-a2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (sign, abs) = if self.is_positive() {
            ("", self.clone())
        } else {
            ("-", self.negated())
        };
        let terms: Vec<String> = abs
            .coords
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| {
                if c == 1 {
                    format!("a{}", i + 1)
                } else {
                    format!("{}a{}", c, i + 1)
                }
            })
            .collect();
        if sign.is_empty() {
            write!(f, "{}", terms.join("+"))
        } else if terms.len() == 1 {
            write!(f, "-{}", terms[0])
        } else {
            write!(f, "-({})", terms.join("+"))
        }
    }
}

/// Cartan data and positive roots of an irreducible finite root system.
#[derive(Clone, Debug)]
pub struct RootSystem {
    cartan_type: CartanType,
    rank: usize,
    /// `cartan[i][j] = <alpha_j, alpha_i^vee>`.
    cartan: Vec<Vec<i64>>,
    /// `(alpha_i, alpha_i) / 2`, normalized so the short roots have value 1.
    symmetrizer: Vec<i64>,
    positive_roots: Vec<Root>,
    root_index: HashMap<Vec<i64>, usize>,
    /// Nodes (0-based) listed from smallest to largest.
    node_order: Vec<usize>,
}

fn cartan_matrix(t: CartanType, n: usize) -> Vec<Vec<i64>> {
    let mut c = vec![vec![0i64; n]; n];
    for (i, row) in c.iter_mut().enumerate() {
        row[i] = 2;
    }
    let mut link = |i: usize, j: usize| {
        c[i][j] = -1;
        c[j][i] = -1;
    };
    match t {
        CartanType::A | CartanType::B | CartanType::C => {
            for i in 0..n - 1 {
                link(i, i + 1);
            }
        }
        CartanType::D => {
            for i in 0..n - 2 {
                link(i, i + 1);
            }
            link(n - 3, n - 1);
        }
        CartanType::E => {
            link(0, 2);
            link(1, 3);
            for i in 2..n - 1 {
                link(i, i + 1);
            }
        }
        CartanType::F => {
            link(0, 1);
            link(1, 2);
            link(2, 3);
        }
        CartanType::G => link(0, 1),
    }
    match t {
        CartanType::B => c[n - 1][n - 2] = -2,
        CartanType::C => c[n - 2][n - 1] = -2,
        CartanType::F => c[2][1] = -2,
        CartanType::G => c[0][1] = -3,
        _ => {}
    }
    c
}

fn weyl_order(t: CartanType, n: usize) -> u128 {
    let fact = |k: usize| (1..=k as u128).product::<u128>();
    match t {
        CartanType::A => fact(n + 1),
        CartanType::B | CartanType::C => (1u128 << n) * fact(n),
        CartanType::D => (1u128 << (n - 1)) * fact(n),
        CartanType::E => match n {
            6 => 51_840,
            7 => 2_903_040,
            _ => 696_729_600,
        },
        CartanType::F => 1152,
        CartanType::G => 12,
    }
}

fn expected_positive_roots(t: CartanType, n: usize) -> usize {
    match t {
        CartanType::A => n * (n + 1) / 2,
        CartanType::B | CartanType::C => n * n,
        CartanType::D => n * (n - 1),
        CartanType::E => match n {
            6 => 36,
            7 => 63,
            _ => 120,
        },
        CartanType::F => 24,
        CartanType::G => 6,
    }
}

/// Parse labels like `"A2"` or `"G2"` into a type and rank.
pub fn parse_type_label(label: &str) -> Result<(CartanType, usize)> {
    let label = label.trim();
    let bad = || Error::InvalidType {
        label: label.chars().take(1).collect(),
        rank: label.get(1..).and_then(|r| r.parse().ok()).unwrap_or(0),
    };
    let letter = label.get(..1).ok_or_else(bad)?;
    let t = CartanType::from_letter(letter).ok_or_else(bad)?;
    let rank: usize = label[1..].parse().map_err(|_| bad())?;
    Ok((t, rank))
}

/// Build a root system from a type letter, rank, and an optional node order
/// (1-based nodes from smallest to largest; defaults to the Bourbaki order).
pub fn build_root_system(
    type_label: &str,
    rank: usize,
    node_order: Option<&[usize]>,
) -> Result<RootSystem> {
    let t = CartanType::from_letter(type_label).ok_or_else(|| Error::InvalidType {
        label: type_label.to_string(),
        rank,
    })?;
    RootSystem::new(t, rank, node_order)
}

impl RootSystem {
    pub fn new(cartan_type: CartanType, rank: usize, node_order: Option<&[usize]>) -> Result<Self> {
        if !cartan_type.valid_rank(rank) {
            return Err(Error::InvalidType {
                label: cartan_type.letter().to_string(),
                rank,
            });
        }
        let node_order = match node_order {
            None => (0..rank).collect(),
            Some(order) => {
                let mut seen = vec![false; rank];
                for &k in order {
                    if k == 0 || k > rank || seen[k - 1] {
                        return Err(Error::InvalidNodeOrder(order.to_vec()));
                    }
                    seen[k - 1] = true;
                }
                if order.len() != rank {
                    return Err(Error::InvalidNodeOrder(order.to_vec()));
                }
                order.iter().map(|k| k - 1).collect()
            }
        };
        let cartan = cartan_matrix(cartan_type, rank);
        let symmetrizer = symmetrizer(&cartan);
        let mut rs = RootSystem {
            cartan_type,
            rank,
            cartan,
            symmetrizer,
            positive_roots: Vec::new(),
            root_index: HashMap::new(),
            node_order,
        };
        rs.generate_roots();
        debug_assert_eq!(
            rs.positive_roots.len(),
            expected_positive_roots(cartan_type, rank)
        );
        Ok(rs)
    }

    /// Convenience constructor from a label such as `"B2"`.
    pub fn from_label(label: &str) -> Result<Self> {
        let (t, rank) = parse_type_label(label)?;
        RootSystem::new(t, rank, None)
    }

    pub fn with_node_order(&self, node_order: &[usize]) -> Result<Self> {
        RootSystem::new(self.cartan_type, self.rank, Some(node_order))
    }

    fn generate_roots(&mut self) {
        let r = self.rank;
        let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
        let mut queue = VecDeque::new();
        for i in 0..r {
            let mut e = vec![0; r];
            e[i] = 1;
            seen.insert(e.clone(), ());
            queue.push_back(e);
        }
        while let Some(v) = queue.pop_front() {
            for i in 0..r {
                let p: i64 = (0..r).map(|j| self.cartan[i][j] * v[j]).sum();
                if p == 0 {
                    continue;
                }
                let mut u = v.clone();
                u[i] -= p;
                if !seen.contains_key(&u) {
                    seen.insert(u.clone(), ());
                    queue.push_back(u);
                }
            }
        }
        let mut pos: Vec<Vec<i64>> = seen
            .into_keys()
            .filter(|v| v.iter().all(|&c| c >= 0))
            .collect();
        pos.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        self.positive_roots = pos
            .into_iter()
            .map(|coords| {
                let coroot = self.coroot_of(&coords);
                Root { coords, coroot }
            })
            .collect();
        self.root_index = self
            .positive_roots
            .iter()
            .enumerate()
            .map(|(k, r)| (r.coords.clone(), k))
            .collect();
    }

    fn coroot_of(&self, b: &[i64]) -> Vec<i64> {
        let r = self.rank;
        let mut twice_norm = 0i64;
        for i in 0..r {
            for j in 0..r {
                twice_norm += b[i] * b[j] * self.symmetrizer[i] * self.cartan[i][j];
            }
        }
        // d_beta = (beta, beta) / 2 in the normalization of `symmetrizer`
        let d_beta = twice_norm / 2;
        (0..r)
            .map(|j| {
                let num = b[j] * self.symmetrizer[j];
                debug_assert_eq!(num % d_beta, 0);
                num / d_beta
            })
            .collect()
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> String {
        format!("{}{}", self.cartan_type.letter(), self.rank)
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn node_order(&self) -> &[usize] {
        &self.node_order
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn expected_positive_root_count(&self) -> usize {
        expected_positive_roots(self.cartan_type, self.rank)
    }

    pub fn weyl_group_order(&self) -> u128 {
        weyl_order(self.cartan_type, self.rank)
    }

    pub fn simple_root(&self, i: usize) -> &Root {
        &self.positive_roots[self.simple_root_index(i)]
    }

    pub fn simple_roots(&self) -> Vec<Root> {
        (0..self.rank)
            .map(|i| self.simple_root(i).clone())
            .collect()
    }

    pub fn simple_root_index(&self, i: usize) -> usize {
        let mut e = vec![0; self.rank];
        e[i] = 1;
        self.root_index[&e]
    }

    /// Index of `|beta|` among the positive roots.
    pub fn root_index(&self, beta: &Root) -> Option<usize> {
        self.root_index.get(beta.abs().coords()).copied()
    }

    /// Look up a (signed) root by simple-root coordinates.
    pub fn root_from_coords(&self, coords: &[i64]) -> Result<Root> {
        if coords.len() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: coords.len(),
            });
        }
        let positive = coords.iter().all(|&c| c >= 0);
        let abs: Vec<i64> = if positive {
            coords.to_vec()
        } else {
            coords.iter().map(|c| -c).collect()
        };
        match self.root_index.get(&abs) {
            Some(&k) if positive => Ok(self.positive_roots[k].clone()),
            Some(&k) => Ok(self.positive_roots[k].negated()),
            None => Err(Error::NotARoot(coords.to_vec())),
        }
    }

    pub fn highest_root(&self) -> &Root {
        self.positive_roots.last().expect("nonempty root system")
    }

    /// `rho`, the sum of the fundamental weights.
    pub fn rho(&self) -> Weight {
        Weight(vec![1; self.rank])
    }

    pub fn fundamental_weight(&self, i: usize) -> Weight {
        let mut v = vec![0; self.rank];
        v[i] = 1;
        Weight(v)
    }

    /// A root written in the basis of fundamental weights.
    pub fn root_weight(&self, beta: &Root) -> Weight {
        let r = self.rank;
        Weight(
            (0..r)
                .map(|k| (0..r).map(|j| self.cartan[k][j] * beta.coords[j]).sum())
                .collect(),
        )
    }

    pub fn pair(&self, lambda: &Weight, beta: &Root) -> Result<i64> {
        if lambda.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: lambda.rank(),
            });
        }
        Ok(beta.pair_with(lambda))
    }

    /// The invariant form `(alpha, beta)` with short roots of squared length 2.
    pub fn inner(&self, a: &Root, b: &Root) -> i64 {
        let r = self.rank;
        let mut s = 0;
        for i in 0..r {
            for j in 0..r {
                s += a.coords[i] * b.coords[j] * self.symmetrizer[i] * self.cartan[i][j];
            }
        }
        s
    }

    /// `beta - <beta, alpha^vee> alpha`.
    pub fn reflect_root(&self, alpha: &Root, beta: &Root) -> Root {
        let p: i64 = self.root_weight(beta).dot(&alpha.coroot());
        let coords: Vec<i64> = beta
            .coords
            .iter()
            .zip(&alpha.coords)
            .map(|(b, a)| b - p * a)
            .collect();
        self.root_from_coords(&coords)
            .expect("reflection of a root is a root")
    }

    /// `max_beta <rho, beta^vee>`, the height of the highest coroot.
    pub fn max_coroot_height(&self) -> i64 {
        self.positive_roots
            .iter()
            .map(Root::coroot_height)
            .max()
            .unwrap_or(0)
    }

    fn check_weight(&self, lambda: &Weight) -> Result<()> {
        if lambda.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: lambda.rank(),
            });
        }
        Ok(())
    }

    pub fn parse_weight(&self, s: &str) -> Result<Weight> {
        let w = Weight(parse_int_list(s)?);
        self.check_weight(&w)?;
        Ok(w)
    }

    pub fn parse_coroot(&self, s: &str) -> Result<CorootVec> {
        let v = CorootVec(parse_int_list(s)?);
        if v.rank() != self.rank {
            return Err(Error::RankMismatch {
                expected: self.rank,
                got: v.rank(),
            });
        }
        Ok(v)
    }

    /// Parse a signed simple-root expression such as `a1`, `-a2`, `a1+a2`,
    /// `-a1-a2` or `2a1+a2` into a root.
    pub fn parse_root(&self, s: &str) -> Result<Root> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty root expression".into()));
        }
        let (global, body) = match s.strip_prefix("-(").and_then(|r| r.strip_suffix(')')) {
            Some(inner) => (-1, inner.to_string()),
            None => (1, s.clone()),
        };
        let mut coords = vec![0i64; self.rank];
        let mut term = String::new();
        let mut sign = 1i64;
        let flush = |term: &str, sign: i64, coords: &mut Vec<i64>| -> Result<()> {
            if term.is_empty() {
                return Ok(());
            }
            let pos = term
                .find(['a', 'α'])
                .ok_or_else(|| Error::Parse(format!("bad root term {term:?}")))?;
            let coef: i64 = if pos == 0 {
                1
            } else {
                term[..pos]
                    .trim_end_matches('*')
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient in {term:?}")))?
            };
            let idx_str = term[pos..].trim_start_matches(['a', 'α']);
            let idx: usize = idx_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad root index in {term:?}")))?;
            if idx == 0 || idx > coords.len() {
                return Err(Error::Parse(format!("root index out of range in {term:?}")));
            }
            coords[idx - 1] += sign * coef;
            Ok(())
        };
        for ch in body.chars() {
            match ch {
                '+' | '-' => {
                    flush(&term, sign, &mut coords)?;
                    term.clear();
                    sign = if ch == '-' { -1 } else { 1 };
                }
                c => term.push(c),
            }
        }
        flush(&term, sign, &mut coords)?;
        let coords: Vec<i64> = coords.into_iter().map(|c| c * global).collect();
        self.root_from_coords(&coords)
    }
}

fn symmetrizer(cartan: &[Vec<i64>]) -> Vec<i64> {
    // d_i C_ij = d_j C_ji; propagate along the Dynkin diagram as fractions.
    let n = cartan.len();
    let mut num = vec![0i64; n];
    let mut den = vec![1i64; n];
    num[0] = 1;
    let mut queue = VecDeque::from([0usize]);
    let mut done = vec![false; n];
    done[0] = true;
    while let Some(i) = queue.pop_front() {
        for j in 0..n {
            if !done[j] && cartan[i][j] != 0 {
                let (mut a, mut b) = (num[i] * cartan[i][j], den[i] * cartan[j][i]);
                if b < 0 {
                    a = -a;
                    b = -b;
                }
                let g = a.gcd(&b);
                num[j] = a / g;
                den[j] = b / g;
                done[j] = true;
                queue.push_back(j);
            }
        }
    }
    let l = den.iter().fold(1i64, |acc, &d| acc.lcm(&d));
    let mut d: Vec<i64> = (0..n).map(|i| num[i] * (l / den[i])).collect();
    let g = d.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    for x in &mut d {
        *x /= g;
    }
    d
}

pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let s = s.trim().trim_start_matches('[').trim_end_matches(']');
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?}")))
        })
        .collect()
}

fn mat_mul(a: &[i64], b: &[i64], r: usize) -> Vec<i64> {
    let mut c = vec![0i64; r * r];
    for i in 0..r {
        for k in 0..r {
            let aik = a[i * r + k];
            if aik == 0 {
                continue;
            }
            for j in 0..r {
                c[i * r + j] += aik * b[k * r + j];
            }
        }
    }
    c
}

fn identity_matrix(r: usize) -> Vec<i64> {
    let mut m = vec![0; r * r];
    for i in 0..r {
        m[i * r + i] = 1;
    }
    m
}

fn apply(m: &[i64], v: &[i64]) -> Vec<i64> {
    let r = v.len();
    (0..r)
        .map(|i| (0..r).map(|j| m[i * r + j] * v[j]).sum())
        .collect()
}

/// A Weyl group element: its action on simple-root coordinates, its length,
/// and the lexicographically smallest reduced word.
#[derive(Clone, Debug)]
pub struct WeylElt {
    rank: usize,
    root_matrix: Vec<i64>,
    weight_matrix: Vec<i64>,
    length: usize,
    word: Vec<usize>,
}

impl PartialEq for WeylElt {
    fn eq(&self, other: &Self) -> bool {
        self.root_matrix == other.root_matrix
    }
}

impl Eq for WeylElt {}

impl std::hash::Hash for WeylElt {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.root_matrix.hash(state);
    }
}

impl PartialOrd for WeylElt {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeylElt {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.length, &self.word).cmp(&(other.length, &other.word))
    }
}

impl WeylElt {
    pub fn length(&self) -> usize {
        self.length
    }

    /// Reduced word as 0-based node indices.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Row-major integer matrix of the action on simple-root coordinates.
    pub fn action_matrix(&self) -> &[i64] {
        &self.root_matrix
    }

    pub fn act(&self, lambda: &Weight) -> Weight {
        Weight(apply(&self.weight_matrix, &lambda.0))
    }

    pub fn act_root_coords(&self, coords: &[i64]) -> Vec<i64> {
        apply(&self.root_matrix, coords)
    }

    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

impl fmt::Display for WeylElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.word.iter().map(|i| format!("s{}", i + 1)).collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// `act(w, lambda)` with a rank check.
pub fn act(w: &WeylElt, lambda: &Weight) -> Result<Weight> {
    if w.rank != lambda.rank() {
        return Err(Error::RankMismatch {
            expected: w.rank,
            got: lambda.rank(),
        });
    }
    Ok(w.act(lambda))
}

/// All elements of a finite Weyl group with multiplication tables for right
/// multiplication by reflections.
#[derive(Debug)]
pub struct WeylGroup {
    rs: RootSystem,
    elems: Vec<WeylElt>,
    index: HashMap<Vec<i64>, usize>,
    /// `reflect[w * |Phi+| + k]` is the index of `w s_{beta_k}`.
    reflect: Vec<usize>,
    inverse: Vec<usize>,
    longest: usize,
}

impl WeylGroup {
    pub fn new(rs: RootSystem) -> Result<Self> {
        Self::with_bound(rs, DEFAULT_WEYL_BOUND)
    }

    pub fn with_bound(rs: RootSystem, bound: usize) -> Result<Self> {
        let order = rs.weyl_group_order();
        if order > bound as u128 {
            return Err(Error::BoundExceeded {
                required: usize::try_from(order).unwrap_or(usize::MAX),
                bound,
            });
        }
        let r = rs.rank;
        let c = &rs.cartan;
        let gen_root: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                let mut m = identity_matrix(r);
                for j in 0..r {
                    m[i * r + j] -= c[i][j];
                }
                m
            })
            .collect();
        let gen_weight: Vec<Vec<i64>> = (0..r)
            .map(|i| {
                let mut m = identity_matrix(r);
                for k in 0..r {
                    m[k * r + i] -= c[k][i];
                }
                m
            })
            .collect();

        // breadth-first closure under right multiplication by simple reflections
        let mut mats: Vec<(Vec<i64>, Vec<i64>)> = vec![(identity_matrix(r), identity_matrix(r))];
        let mut seen: HashMap<Vec<i64>, usize> = HashMap::new();
        seen.insert(mats[0].0.clone(), 0);
        let mut head = 0;
        while head < mats.len() {
            for i in 0..r {
                let rm = mat_mul(&mats[head].0, &gen_root[i], r);
                if !seen.contains_key(&rm) {
                    let wm = mat_mul(&mats[head].1, &gen_weight[i], r);
                    seen.insert(rm.clone(), mats.len());
                    mats.push((rm, wm));
                }
            }
            head += 1;
        }
        debug_assert_eq!(mats.len() as u128, order);

        let lengths: Vec<usize> = mats
            .iter()
            .map(|(m, _)| {
                rs.positive_roots
                    .iter()
                    .filter(|b| apply(m, &b.coords).iter().any(|&x| x < 0))
                    .count()
            })
            .collect();

        // lexicographically smallest reduced word: peel off the smallest left descent
        let mut by_len: Vec<usize> = (0..mats.len()).collect();
        by_len.sort_by_key(|&k| lengths[k]);
        let mut words: Vec<Option<Vec<usize>>> = vec![None; mats.len()];
        for &k in &by_len {
            if lengths[k] == 0 {
                words[k] = Some(Vec::new());
                continue;
            }
            for (i, g) in gen_root.iter().enumerate() {
                let left = mat_mul(g, &mats[k].0, r);
                let kk = seen[&left];
                if lengths[kk] < lengths[k] {
                    let mut w = vec![i];
                    w.extend(words[kk].as_ref().expect("shorter element processed"));
                    words[k] = Some(w);
                    break;
                }
            }
        }

        let mut elems: Vec<WeylElt> = mats
            .into_iter()
            .zip(lengths)
            .zip(words)
            .map(|(((rm, wm), length), word)| WeylElt {
                rank: r,
                root_matrix: rm,
                weight_matrix: wm,
                length,
                word: word.expect("every element has a word"),
            })
            .collect();
        elems.sort();
        let index: HashMap<Vec<i64>, usize> = elems
            .iter()
            .enumerate()
            .map(|(k, e)| (e.root_matrix.clone(), k))
            .collect();

        let np = rs.positive_roots.len();
        let refl_mats: Vec<Vec<i64>> = rs
            .positive_roots
            .iter()
            .map(|beta| {
                // s_beta(v) = v - <v, beta^vee> beta
                let mut m = identity_matrix(r);
                for j in 0..r {
                    let p: i64 = (0..r).map(|i| beta.coroot[i] * c[i][j]).sum();
                    for k in 0..r {
                        m[k * r + j] -= beta.coords[k] * p;
                    }
                }
                m
            })
            .collect();
        let mut reflect = vec![0usize; elems.len() * np];
        for (w, e) in elems.iter().enumerate() {
            for (k, s) in refl_mats.iter().enumerate() {
                reflect[w * np + k] = index[&mat_mul(&e.root_matrix, s, r)];
            }
        }
        let id = identity_matrix(r);
        let mut inverse = vec![0usize; elems.len()];
        for a in 0..elems.len() {
            if inverse[a] != 0 || a == 0 {
                continue;
            }
            for b in 0..elems.len() {
                if mat_mul(&elems[a].root_matrix, &elems[b].root_matrix, r) == id {
                    inverse[a] = b;
                    inverse[b] = a;
                    break;
                }
            }
        }
        let longest = elems.len() - 1;
        Ok(WeylGroup {
            rs,
            elems,
            index,
            reflect,
            inverse,
            longest,
        })
    }

    pub fn root_system(&self) -> &RootSystem {
        &self.rs
    }

    pub fn rank(&self) -> usize {
        self.rs.rank
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elements(&self) -> &[WeylElt] {
        &self.elems
    }

    pub fn element(&self, w: usize) -> &WeylElt {
        &self.elems[w]
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn longest(&self) -> usize {
        self.longest
    }

    pub fn length(&self, w: usize) -> usize {
        self.elems[w].length
    }

    pub fn index_of(&self, w: &WeylElt) -> Option<usize> {
        self.index.get(&w.root_matrix).copied()
    }

    pub fn name(&self, w: usize) -> String {
        self.elems[w].to_string()
    }

    /// `w s_beta` for the positive root with index `k`.
    pub fn right_reflect(&self, w: usize, k: usize) -> usize {
        self.reflect[w * self.rs.positive_roots.len() + k]
    }

    /// `w s_i` for the simple reflection at node `i` (0-based).
    pub fn right_simple(&self, w: usize, i: usize) -> usize {
        self.right_reflect(w, self.rs.simple_root_index(i))
    }

    pub fn inverse(&self, w: usize) -> usize {
        self.inverse[w]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.elems[b]
            .word
            .iter()
            .fold(a, |acc, &i| self.right_simple(acc, i))
    }

    /// Product of simple reflections along a (not necessarily reduced) word.
    pub fn from_word(&self, word: &[usize]) -> Result<usize> {
        let mut w = 0;
        for &i in word {
            if i >= self.rank() {
                return Err(Error::Parse(format!("node {} out of range", i + 1)));
            }
            w = self.right_simple(w, i);
        }
        Ok(w)
    }

    /// Parse `e`, `s1*s2*s1`, `s1s2` or `1,2,1` (1-based nodes).
    pub fn parse_word(&self, s: &str) -> Result<usize> {
        let s = s.trim();
        if s.is_empty() || s == "e" || s == "id" {
            return Ok(0);
        }
        let mut word = Vec::new();
        for tok in s.split(['*', ',', ' ', 's']).filter(|t| !t.is_empty()) {
            let i: usize = tok
                .parse()
                .map_err(|_| Error::UnknownElement(s.to_string()))?;
            if i == 0 || i > self.rank() {
                return Err(Error::UnknownElement(s.to_string()));
            }
            word.push(i - 1);
        }
        self.from_word(&word)
    }

    pub fn act(&self, w: usize, lambda: &Weight) -> Weight {
        self.elems[w].act(lambda)
    }

    pub fn act_root(&self, w: usize, beta: &Root) -> Root {
        let coords = self.elems[w].act_root_coords(&beta.coords);
        self.rs
            .root_from_coords(&coords)
            .expect("Weyl group permutes roots")
    }

    /// Minimal-length representative of `w W_J`.
    pub fn coset_min_rep(&self, w: usize, parabolic: &[usize]) -> usize {
        let mut cur = w;
        loop {
            let next = parabolic
                .iter()
                .map(|&j| self.right_simple(cur, j))
                .find(|&x| self.length(x) < self.length(cur));
            match next {
                Some(x) => cur = x,
                None => return cur,
            }
        }
    }

    pub fn is_min_coset_rep(&self, w: usize, parabolic: &[usize]) -> bool {
        parabolic
            .iter()
            .all(|&j| self.length(self.right_simple(w, j)) > self.length(w))
    }

    /// Elements of the parabolic subgroup `W_J`.
    pub fn parabolic_subgroup(&self, parabolic: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&w| self.coset_min_rep(w, parabolic) == 0)
            .collect()
    }

    /// Elements of the coset `v W_J`.
    pub fn coset(&self, v: usize, parabolic: &[usize]) -> Vec<usize> {
        self.parabolic_subgroup(parabolic)
            .into_iter()
            .map(|u| self.mul(v, u))
            .collect()
    }

    /// `W^J`, the minimal coset representatives, in group order.
    pub fn min_coset_reps(&self, parabolic: &[usize]) -> Vec<usize> {
        (0..self.len())
            .filter(|&w| self.is_min_coset_rep(w, parabolic))
            .collect()
    }

    /// Bruhat order via the subword property.
    pub fn bruhat_le(&self, u: usize, v: usize) -> bool {
        let mut reach = vec![false; self.len()];
        reach[0] = true;
        for &i in &self.elems[v].word {
            let current: Vec<usize> = (0..self.len()).filter(|&x| reach[x]).collect();
            for x in current {
                reach[self.right_simple(x, i)] = true;
            }
        }
        reach[u]
    }
}

/// All Weyl group elements sorted by `(length, canonical word)`.
pub fn enumerate_weyl(rs: &RootSystem, bound: usize) -> Result<Vec<WeylElt>> {
    Ok(WeylGroup::with_bound(rs.clone(), bound)?.elems)
}

/// `coset_min_rep` on standalone elements.
pub fn coset_min_rep(group: &WeylGroup, w: &WeylElt, parabolic: &[usize]) -> Result<WeylElt> {
    let k = group
        .index_of(w)
        .ok_or_else(|| Error::UnknownElement(w.to_string()))?;
    Ok(group.element(group.coset_min_rep(k, parabolic)).clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(label: &str) -> WeylGroup {
        WeylGroup::new(RootSystem::from_label(label).unwrap()).unwrap()
    }

    #[test]
    fn positive_root_counts() {
        for (label, n) in [
            ("A1", 1),
            ("A2", 3),
            ("A3", 6),
            ("B2", 4),
            ("C3", 9),
            ("G2", 6),
            ("D4", 12),
            ("F4", 24),
            ("E6", 36),
        ] {
            let rs = RootSystem::from_label(label).unwrap();
            assert_eq!(rs.num_positive_roots(), n, "{label}");
        }
        let e8 = RootSystem::from_label("E8").unwrap();
        assert_eq!(e8.num_positive_roots(), 120);
    }

    #[test]
    fn invalid_types_rejected() {
        assert!(matches!(
            build_root_system("H", 3, None),
            Err(Error::InvalidType { .. })
        ));
        assert!(matches!(
            build_root_system("B", 1, None),
            Err(Error::InvalidType { .. })
        ));
        assert!(matches!(
            build_root_system("G", 3, None),
            Err(Error::InvalidType { .. })
        ));
        assert!(matches!(
            build_root_system("A", 2, Some(&[1, 1])),
            Err(Error::InvalidNodeOrder(_))
        ));
    }

    #[test]
    fn cartan_invariants() {
        for label in ["A3", "B3", "C3", "D4", "G2", "F4", "E6"] {
            let rs = RootSystem::from_label(label).unwrap();
            let c = rs.cartan_matrix();
            for i in 0..rs.rank() {
                assert_eq!(c[i][i], 2);
                for j in 0..rs.rank() {
                    if i != j {
                        assert!(c[i][j] <= 0);
                    }
                }
                // <rho, alpha_i^vee> = 1
                assert_eq!(rs.simple_root(i).pair_with(&rs.rho()), 1);
                assert_eq!(
                    rs.simple_root(i).coroot_coords(),
                    rs.simple_root(i).coords()
                );
            }
            for beta in rs.positive_roots() {
                assert!(beta.coroot_coords().iter().all(|&x| x >= 0));
                // <beta, beta^vee> = 2
                assert_eq!(rs.root_weight(beta).dot(&beta.coroot()), 2);
            }
        }
    }

    #[test]
    fn g2_coroots() {
        let rs = RootSystem::from_label("G2").unwrap();
        // alpha_1 short, alpha_2 long; 3a1+2a2 is the highest root, long
        let theta = rs.highest_root();
        assert_eq!(theta.coords(), &[3, 2]);
        assert_eq!(theta.coroot_coords(), &[1, 2]);
        let short_top = rs.root_from_coords(&[2, 1]).unwrap();
        assert_eq!(short_top.coroot_coords(), &[2, 3]);
    }

    #[test]
    fn pairing_examples() {
        let rs = RootSystem::from_label("A2").unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let p = pair(&rs.fundamental_weight(i), &rs.simple_root(j).coroot()).unwrap();
                assert_eq!(p, i64::from(i == j));
            }
        }
        assert_eq!(pair(&rs.rho(), &rs.highest_root().coroot()).unwrap(), 2);
        assert_eq!(
            pair(&Weight::zero(2), &rs.highest_root().coroot()).unwrap(),
            0
        );
        assert!(pair(&Weight(vec![1, 0, 0]), &rs.highest_root().coroot()).is_err());
    }

    #[test]
    fn weyl_group_sizes_and_lengths() {
        let a2 = group("A2");
        let mut lens: Vec<usize> = a2.elements().iter().map(|e| e.length()).collect();
        lens.sort();
        assert_eq!(lens, vec![0, 1, 1, 2, 2, 3]);
        assert_eq!(group("A3").len(), 24);
        assert_eq!(group("G2").len(), 12);
        assert_eq!(group("B3").len(), 48);
        assert!(a2.element(0).is_identity());
    }

    #[test]
    fn enumeration_bound_refuses() {
        let rs = RootSystem::from_label("A5").unwrap();
        match enumerate_weyl(&rs, 100) {
            Err(Error::BoundExceeded { required, bound }) => {
                assert_eq!(required, 720);
                assert_eq!(bound, 100);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn longest_element_negates_rho() {
        for label in ["A2", "A3", "B2", "G2", "C3"] {
            let g = group(label);
            let rho = g.root_system().rho();
            assert_eq!(g.act(g.longest(), &rho), -&rho);
            assert_eq!(g.act(0, &rho), rho);
        }
    }

    #[test]
    fn simple_reflection_on_weight() {
        let g = group("A2");
        let s1 = g.parse_word("s1").unwrap();
        // s1(w1 - w2) = w1 - w2 - alpha_1 = (1,-1) - (2,-1) = (-1, 0)
        assert_eq!(g.act(s1, &Weight(vec![1, -1])), Weight(vec![-1, 0]));
    }

    #[test]
    fn lengths_change_by_one_and_words_roundtrip() {
        for label in ["A1", "A2", "A3", "B2", "B3", "C3", "G2"] {
            let g = group(label);
            for w in 0..g.len() {
                for i in 0..g.rank() {
                    let ws = g.right_simple(w, i);
                    assert_eq!(g.length(w).abs_diff(g.length(ws)), 1);
                }
                let e = g.element(w);
                assert_eq!(e.word().len(), e.length());
                assert_eq!(g.from_word(e.word()).unwrap(), w);
            }
        }
    }

    #[test]
    fn action_preserves_pairing() {
        for label in ["A2", "B2", "G2", "A3"] {
            let g = group(label);
            let rs = g.root_system();
            let lambda = Weight((0..rs.rank() as i64).map(|k| 2 * k - 1).collect());
            for w in 0..g.len() {
                let wl = g.act(w, &lambda);
                for beta in rs.positive_roots() {
                    let wb = g.act_root(w, beta);
                    assert_eq!(wl.dot(&wb.coroot()), lambda.dot(&beta.coroot()));
                }
            }
        }
    }

    #[test]
    fn action_composes() {
        let g = group("B2");
        let lambda = Weight(vec![3, -2]);
        for u in 0..g.len() {
            for v in 0..g.len() {
                assert_eq!(g.act(g.mul(u, v), &lambda), g.act(u, &g.act(v, &lambda)));
            }
        }
    }

    #[test]
    fn coset_min_rep_examples() {
        let g = group("A2");
        let j = [1usize];
        // elements of W_J map to e
        for w in g.parabolic_subgroup(&j) {
            assert_eq!(g.coset_min_rep(w, &j), 0);
        }
        for w in 0..g.len() {
            assert_eq!(g.coset_min_rep(w, &[]), w);
        }
        // w0 s2 has the length-2 representative of its coset
        let w0s2 = g.right_simple(g.longest(), 1);
        let rep = g.coset_min_rep(w0s2, &j);
        let brute = g
            .coset(w0s2, &j)
            .into_iter()
            .min_by_key(|&x| g.length(x))
            .unwrap();
        assert_eq!(rep, brute);
        assert_eq!(g.length(rep), 2);
    }

    #[test]
    fn coset_min_rep_is_unique_minimum() {
        for label in ["A2", "A3", "B2", "B3", "G2"] {
            let g = group(label);
            let r = g.rank();
            for mask in 0..(1u32 << r) {
                let j: Vec<usize> = (0..r).filter(|i| mask >> i & 1 == 1).collect();
                for w in 0..g.len() {
                    let coset = g.coset(w, &j);
                    let min_len = coset.iter().map(|&x| g.length(x)).min().unwrap();
                    let minima: Vec<usize> = coset
                        .iter()
                        .copied()
                        .filter(|&x| g.length(x) == min_len)
                        .collect();
                    assert_eq!(minima.len(), 1);
                    let rep = g.coset_min_rep(w, &j);
                    assert_eq!(minima[0], rep);
                    assert!(g.bruhat_le(rep, w));
                }
            }
        }
    }

    #[test]
    fn root_parsing() {
        let rs = RootSystem::from_label("A2").unwrap();
        assert_eq!(rs.parse_root("a1").unwrap().coords(), &[1, 0]);
        assert_eq!(rs.parse_root("-a2").unwrap().coords(), &[0, -1]);
        assert_eq!(rs.parse_root("a1+a2").unwrap().coords(), &[1, 1]);
        assert_eq!(rs.parse_root("-a1-a2").unwrap().coords(), &[-1, -1]);
        assert_eq!(rs.parse_root("-(a1+a2)").unwrap().coords(), &[-1, -1]);
        assert!(rs.parse_root("a1-a2").is_err());
        assert!(rs.parse_root("2a1").is_err());
        let g2 = RootSystem::from_label("G2").unwrap();
        assert_eq!(g2.parse_root("3a1+2a2").unwrap().coords(), &[3, 2]);
        assert_eq!(g2.parse_root("3a1+2a2").unwrap().to_string(), "3a1+2a2");
    }

    #[test]
    fn word_display_and_parse() {
        let g = group("A2");
        assert_eq!(g.name(0), "e");
        let w = g.parse_word("s1*s2").unwrap();
        assert_eq!(g.name(w), "s1*s2");
        assert_eq!(g.parse_word("s2*s1*s2").unwrap(), g.longest());
        assert_eq!(g.name(g.longest()), "s1*s2*s1");
        assert!(g.parse_word("s3").is_err());
    }
}
