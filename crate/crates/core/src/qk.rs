//! The Chevalley formula in the torus-equivariant quantum K-theory of `G/B`
//! and its non-equivariant structure constants in type A.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::alcove::{enumerate_admissible, lex_chain, walk_heights, LambdaChain};
use crate::coeff::{Expansion, GroupAlgElt, LaurentQ, SchubertSymbol};
use crate::error::{Error, Result};
use crate::rootsys::{CorootVec, RootSystem, Weight, WeylGroup};

/// `[O^v] Q^d` is stored as the Schubert symbol `(v, d)`; coefficients carry no `q`.
pub type QkExpansion = Expansion;

/// One summand of the sum over non-empty admissible subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QkContribution {
    pub positions: Vec<usize>,
    pub v: usize,
    pub d: CorootVec,
    pub weight: Weight,
    pub sign: i64,
}

fn check_chain(group: &WeylGroup, i: usize, chain: &LambdaChain) -> Result<Weight> {
    let rs = group.root_system();
    if i >= rs.rank() {
        return Err(Error::Parse(format!("node {} out of range", i + 1)));
    }
    let target = -rs.fundamental_weight(i);
    if chain.lambda != target {
        return Err(Error::EndpointMismatch);
    }
    let heights = walk_heights(rs, &chain.lambda, &chain.roots())?;
    if heights.iter().ne(chain.entries.iter().map(|e| &e.height)) {
        return Err(Error::EndpointMismatch);
    }
    Ok(target)
}

/// The terms `(-1)^{|A|-1} Q^{down} e^{-varpi_i - wt} [O^{end}]` for `A` non-empty.
pub fn qk_contributions(
    group: &WeylGroup,
    i: usize,
    w: usize,
    chain: &LambdaChain,
) -> Result<Vec<QkContribution>> {
    let minus_varpi = check_chain(group, i, chain)?;
    Ok(enumerate_admissible(group, w, chain)
        .into_iter()
        .filter(|(a, _)| !a.positions.is_empty())
        .map(|(a, s)| QkContribution {
            sign: if a.positions.len() % 2 == 1 { 1 } else { -1 },
            weight: &minus_varpi - &s.wt,
            positions: a.positions,
            v: s.end,
            d: s.down,
        })
        .collect())
}

/// `[O^{s_i}] . [O^w]` in `QK_T(G/B)`, with `i` zero-based.
pub fn qk_chevalley(
    group: &WeylGroup,
    i: usize,
    w: usize,
    chain: &LambdaChain,
) -> Result<QkExpansion> {
    if w >= group.len() {
        return Err(Error::UnknownElement(w.to_string()));
    }
    let contributions = qk_contributions(group, i, w, chain)?;
    let rank = group.rank();
    let varpi = group.root_system().fundamental_weight(i);
    let one = LaurentQ::one();
    let mut out = Expansion::exact();
    let lead = SchubertSymbol::new(w, CorootVec::zero(rank));
    out.add_term(&lead, &GroupAlgElt::one(rank));
    out.add_term(
        &lead,
        &GroupAlgElt::term(
            &LaurentQ::monomial(-1, 0),
            &(&group.act(w, &varpi) - &varpi),
        ),
    );
    for c in contributions {
        out.add_term(
            &SchubertSymbol::new(c.v, c.d),
            &GroupAlgElt::term(&one.scale(c.sign), &c.weight),
        );
    }
    Ok(out)
}

/// `[O^w] - e^{-varpi_i} . phi(E)` where `E` is the anti-dominant Chevalley
/// expansion for `-varpi_i` at `q = 1` and `phi` inverts weights; this equals
/// [`qk_chevalley`].
pub fn qk_from_antidominant(
    group: &WeylGroup,
    i: usize,
    w: usize,
    antidominant: &Expansion,
) -> Expansion {
    let rank = group.rank();
    let varpi = group.root_system().fundamental_weight(i);
    let shifted = antidominant
        .at_q_one()
        .map(|c| c.map_weights(|mu| &(-mu) - &varpi).scale(-1));
    let mut out = Expansion::exact();
    out.add_term(
        &SchubertSymbol::new(w, CorootVec::zero(rank)),
        &GroupAlgElt::one(rank),
    );
    for (sym, c) in shifted.terms() {
        out.add_term(sym, c);
    }
    out
}

/// Non-equivariant coefficients `N_{s_i,w}^{v,d}`, keyed by `(w, v, d)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructConstTable {
    pub rank: usize,
    pub i: usize,
    pub entries: BTreeMap<(usize, usize, CorootVec), i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructConstRow {
    pub i: usize,
    pub w: String,
    pub v: String,
    pub d: Vec<i64>,
    #[serde(rename = "N")]
    pub n: i64,
}

impl StructConstTable {
    /// Build the table from `qk_chevalley` with every `e^mu` set to one.
    pub fn compute(group: &WeylGroup, i: usize, chain: &LambdaChain) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for w in 0..group.len() {
            for (sym, c) in qk_chevalley(group, i, w, chain)?.terms() {
                let n: i64 = c.terms().map(|(_, l)| l.coeff(0)).sum();
                if n != 0 {
                    entries.insert((w, sym.w, sym.xi.clone()), n);
                }
            }
        }
        Ok(StructConstTable {
            rank: group.rank(),
            i,
            entries,
        })
    }

    /// Rows with one-based node index and Weyl elements as words.
    pub fn rows(&self, group: &WeylGroup) -> Vec<StructConstRow> {
        self.entries
            .iter()
            .map(|((w, v, d), &n)| StructConstRow {
                i: self.i + 1,
                w: group.name(*w),
                v: group.name(*v),
                d: d.0.clone(),
                n,
            })
            .collect()
    }

    pub fn to_csv(&self, group: &WeylGroup) -> String {
        let mut s = String::from("i,w,v,d,N\n");
        for r in self.rows(group) {
            let d: Vec<String> = r.d.iter().map(i64::to_string).collect();
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                r.i,
                r.w,
                r.v,
                d.join(" "),
                r.n
            ));
        }
        s
    }
}

/// Check a table against the `N in {0, +-1}` theorem: values, signs against
/// a fresh enumeration, and coset uniqueness. Returns the list of violations.
pub fn verify_struct_consts(
    group: &WeylGroup,
    table: &StructConstTable,
    chain: &LambdaChain,
) -> Result<Vec<String>> {
    let i = table.i;
    let mut failures = Vec::new();
    let mut recomputed: BTreeMap<(usize, usize, CorootVec), Vec<i64>> = BTreeMap::new();
    for w in 0..group.len() {
        for c in qk_contributions(group, i, w, chain)? {
            recomputed.entry((w, c.v, c.d)).or_default().push(c.sign);
        }
    }
    for (key, &n) in &table.entries {
        let (w, v, d) = key;
        let label = format!(
            "N(s{}, {}; {}, {:?})",
            i + 1,
            group.name(*w),
            group.name(*v),
            d.0
        );
        if n != 1 && n != -1 {
            failures.push(format!("{label} = {n}"));
        }
        match recomputed.get(key).map(Vec::as_slice) {
            Some([sign]) if *sign == n => {}
            Some([sign]) => {
                failures.push(format!("{label} = {n}, originating subset has sign {sign}"))
            }
            Some(signs) => {
                failures.push(format!("{label} has {} originating subsets", signs.len()))
            }
            None => failures.push(format!("{label} has no originating subset")),
        }
    }
    for (key, signs) in &recomputed {
        let total: i64 = signs.iter().sum();
        if total != 0 && !table.entries.contains_key(key) {
            failures.push(format!("missing entry for {:?}", key));
        }
    }
    let line_bundle = line_bundle_coefficients(group, table);
    let j: Vec<usize> = (0..group.rank()).filter(|&k| k != i).collect();
    for v in 0..group.len() {
        for sigma in group.min_coset_reps(&j) {
            let members: BTreeSet<usize> = group.coset(sigma, &j).into_iter().collect();
            let hits = line_bundle
                .keys()
                .filter(|(w, vv, _)| *vv == v && members.contains(w))
                .count();
            if hits != 1 {
                failures.push(format!(
                    "v = {}, coset of {}: {hits} nonzero coefficients",
                    group.name(v),
                    group.name(sigma)
                ));
            }
        }
    }
    Ok(failures)
}

/// Nonzero coefficients of `[O^w] - [O^{s_i}] . [O^w]`, keyed like the table:
/// `-N` off the diagonal plus the unit term at `(v, v, 0)`.
pub fn line_bundle_coefficients(
    group: &WeylGroup,
    table: &StructConstTable,
) -> BTreeMap<(usize, usize, CorootVec), i64> {
    let mut out: BTreeMap<(usize, usize, CorootVec), i64> = table
        .entries
        .iter()
        .map(|(k, &n)| (k.clone(), -n))
        .collect();
    for w in 0..group.len() {
        *out.entry((w, w, CorootVec::zero(group.rank())))
            .or_insert(0) += 1;
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Type `A_r` structure constants for node `i` (zero-based), computed with the
/// lex chain and verified; violations are hard errors.
pub fn qk_structure_constants(r: usize, i: usize) -> Result<(WeylGroup, StructConstTable)> {
    if r == 0 || r > 3 {
        return Err(Error::Unsupported(format!("type A rank {r} outside 1..=3")));
    }
    let group = WeylGroup::new(RootSystem::from_label(&format!("A{r}"))?)?;
    let chain = lex_chain(
        group.root_system(),
        &-group.root_system().fundamental_weight(i),
    )?;
    let table = StructConstTable::compute(&group, i, &chain)?;
    let failures = verify_struct_consts(&group, &table, &chain)?;
    if !failures.is_empty() {
        return Err(Error::TheoremViolation(failures.join("; ")));
    }
    Ok((group, table))
}

/// Coordinatewise maximum of `down(w, A)` over all `w` and admissible `A` for
/// the lex `(-varpi_i)`-chain in type `A_r`.
pub fn max_degree_scan(r: usize, i: usize) -> Result<CorootVec> {
    if r == 0 || r > 3 {
        return Err(Error::Unsupported(format!("type A rank {r} outside 1..=3")));
    }
    let group = WeylGroup::new(RootSystem::from_label(&format!("A{r}"))?)?;
    let rs = group.root_system();
    if i >= r {
        return Err(Error::Parse(format!("node {} out of range", i + 1)));
    }
    let chain = lex_chain(rs, &-rs.fundamental_weight(i))?;
    let mut max = vec![0i64; r];
    for w in 0..group.len() {
        for (_, s) in enumerate_admissible(&group, w, &chain) {
            for (m, &x) in max.iter_mut().zip(s.down.coords()) {
                *m = (*m).max(x);
            }
        }
    }
    Ok(CorootVec(max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alcove::segment_chain;
    use crate::chevalley::chevalley_antidominant;

    fn type_a(r: usize) -> WeylGroup {
        WeylGroup::new(RootSystem::from_label(&format!("A{r}")).unwrap()).unwrap()
    }

    fn chain_for(group: &WeylGroup, i: usize) -> LambdaChain {
        lex_chain(
            group.root_system(),
            &-group.root_system().fundamental_weight(i),
        )
        .unwrap()
    }

    #[test]
    fn identity_leading_term_vanishes() {
        let g = type_a(2);
        let s1 = g.parse_word("s1").unwrap();
        let e = qk_chevalley(&g, 0, 0, &chain_for(&g, 0)).unwrap();
        assert_eq!(
            e.coeff(&SchubertSymbol::new(0, CorootVec::zero(2))),
            GroupAlgElt::zero()
        );
        let nonequivariant = e.map(|c| {
            let n: i64 = c.terms().map(|(_, l)| l.coeff(0)).sum();
            GroupAlgElt::one(2).scale(n)
        });
        let mut oracle = Expansion::exact();
        oracle.add_term(
            &SchubertSymbol::new(s1, CorootVec::zero(2)),
            &GroupAlgElt::one(2),
        );
        assert_eq!(nonequivariant, oracle);
    }

    #[test]
    fn rejects_wrong_chain() {
        let g = type_a(2);
        let wrong = lex_chain(g.root_system(), &Weight(vec![0, -1])).unwrap();
        assert_eq!(qk_chevalley(&g, 0, 0, &wrong), Err(Error::EndpointMismatch));
    }

    #[test]
    fn fl3_table_matches_enumeration() {
        let g = type_a(2);
        let chain = chain_for(&g, 0);
        let table = StructConstTable::compute(&g, 0, &chain).unwrap();
        let mut oracle = BTreeMap::new();
        for w in 0..g.len() {
            for (a, s) in enumerate_admissible(&g, w, &chain) {
                if !a.positions.is_empty() {
                    let sign = if a.positions.len() % 2 == 1 { 1 } else { -1 };
                    *oracle.entry((w, s.end, s.down)).or_insert(0) += sign;
                }
            }
        }
        oracle.retain(|_, n: &mut i64| *n != 0);
        assert_eq!(table.entries, oracle);
        assert_eq!(
            table
                .entries
                .get(&(0, g.parse_word("s1").unwrap(), CorootVec::zero(2))),
            Some(&1)
        );
        assert!(table.entries.values().all(|n| n.abs() == 1));
    }

    #[test]
    fn structure_constant_theorem() {
        for r in 1..=3 {
            for i in 0..r {
                qk_structure_constants(r, i).unwrap();
            }
        }
        assert!(qk_structure_constants(4, 0).is_err());
    }

    #[test]
    fn own_coset_carries_only_the_unit_term() {
        let g = type_a(2);
        let chain = chain_for(&g, 0);
        let table = StructConstTable::compute(&g, 0, &chain).unwrap();
        for v in 0..g.len() {
            let own: BTreeSet<usize> = g.coset(v, &[1]).into_iter().collect();
            assert!(table
                .entries
                .keys()
                .all(|(w, vv, _)| *vv != v || !own.contains(w)));
        }
    }

    #[test]
    fn chain_independence() {
        for r in 2..=3 {
            let g = type_a(r);
            for i in 0..r {
                let lambda = -g.root_system().fundamental_weight(i);
                let lex = StructConstTable::compute(&g, i, &chain_for(&g, i)).unwrap();
                for seed in [1, 7] {
                    let seg = segment_chain(g.root_system(), &lambda, seed).unwrap();
                    assert_eq!(StructConstTable::compute(&g, i, &seg).unwrap(), lex);
                }
            }
        }
    }

    #[test]
    fn fault_is_detected() {
        let g = type_a(2);
        let chain = chain_for(&g, 1);
        let mut table = StructConstTable::compute(&g, 1, &chain).unwrap();
        assert!(verify_struct_consts(&g, &table, &chain).unwrap().is_empty());
        let first = table.entries.values_mut().next().unwrap();
        *first = -*first;
        assert!(!verify_struct_consts(&g, &table, &chain).unwrap().is_empty());
    }

    #[test]
    fn antidominant_dictionary() {
        for r in 2..=3 {
            let g = type_a(r);
            for i in 0..r {
                let chain = chain_for(&g, i);
                for w in 0..g.len() {
                    let x = SchubertSymbol::new(w, CorootVec::zero(r));
                    let anti = chevalley_antidominant(&g, &chain, &x).unwrap();
                    assert_eq!(
                        qk_from_antidominant(&g, i, w, &anti),
                        qk_chevalley(&g, i, w, &chain).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn max_degree() {
        assert_eq!(max_degree_scan(1, 0).unwrap(), CorootVec(vec![1]));
        let g = type_a(2);
        let chain = chain_for(&g, 0);
        let mut oracle = vec![0i64; 2];
        for w in 0..g.len() {
            for (_, s) in enumerate_admissible(&g, w, &chain) {
                for k in 0..2 {
                    oracle[k] = oracle[k].max(s.down.0[k]);
                }
            }
        }
        assert_eq!(max_degree_scan(2, 0).unwrap(), CorootVec(oracle));
    }

    #[test]
    fn csv_rows() {
        let (g, table) = qk_structure_constants(1, 0).unwrap();
        assert_eq!(table.to_csv(&g), "i,w,v,d,N\n1,e,s1,0,1\n1,s1,e,1,1\n");
    }
}
