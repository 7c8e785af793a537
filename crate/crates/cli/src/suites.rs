//! Verification suites behind `qalcove verify`. Each suite collects both sides
//! of an identity, optionally corrupts one datum, then compares.

use std::sync::Arc;

use qalcove::alcove::{concat_chain, enumerate_admissible, lex_chain, segment_chain, LambdaChain};
use qalcove::chevalley::{
    admissible_signed_support, chevalley_general, coherent_degree, compare_ybe_sides,
    r_operator_product, signed_sequence, verify_inverse_series, ybe_pairs, ybe_sides,
    DEFAULT_SERIES_DEGREE,
};
use qalcove::coeff::{Expansion, GroupAlgElt, SchubertSymbol, Truncation};
use qalcove::qbg::FullQbg;
use qalcove::qk::{verify_struct_consts, StructConstTable};
use qalcove::qls::{verify_bijection, QlsSpace};
use qalcove::rootsys::{CorootVec, Weight, WeylGroup};
use qalcove::{Error, Result};
use serde_json::{json, Value};

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: usize,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.into(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "checks": self.checks,
            "passed": self.passed(),
            "failures": self.failures,
        })
    }
}

/// Two segment chains plus the concatenated chain.
pub fn default_chains(
    group: &WeylGroup,
    lambda: &Weight,
    seeds: &[u64],
) -> Result<Vec<LambdaChain>> {
    let rs = group.root_system();
    let mut chains = seeds
        .iter()
        .map(|&s| segment_chain(rs, lambda, s))
        .collect::<Result<Vec<_>>>()?;
    chains.push(concat_chain(rs, lambda)?);
    Ok(chains)
}

pub fn ybe(group: &WeylGroup, fault: bool) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("ybe");
    let rank = group.rank();
    for (k, (a, b)) in ybe_pairs(group.root_system()).into_iter().enumerate() {
        let mut sides = ybe_sides(group, &a, &b, DEFAULT_SERIES_DEGREE)?;
        if fault && k == 0 {
            sides[0].0.add_term(0, &CorootVec::zero(rank), 1);
        }
        report.checks += sides.len();
        report
            .failures
            .extend(compare_ybe_sides(group, &a, &b, &sides));
    }
    report.checks += group.root_system().num_positive_roots() * group.len();
    report
        .failures
        .extend(verify_inverse_series(group, DEFAULT_SERIES_DEGREE));
    Ok(report)
}

pub fn bijection(
    full: &Arc<FullQbg>,
    lambda: &Weight,
    only_w: Option<usize>,
    fault: bool,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("bijection");
    let group = full.group().clone();
    let space = QlsSpace::new(full.clone(), lambda)?;
    let chain = lex_chain(group.root_system(), lambda)?;
    let paths = space.enumerate()?;
    let ws: Vec<usize> = match only_w {
        Some(w) => vec![w],
        None => (0..group.len()).collect(),
    };
    let mut first = true;
    for w in ws {
        if let Err(e) = verify_bijection(&space, &chain, &paths, w) {
            report.failures.push(format!("w = {}: {e}", group.name(w)));
        }
        for (a, s) in enumerate_admissible(&group, w, &chain) {
            let eta = space.forward_map(w, &chain, &a.positions)?;
            let q = space.statistics(&eta, w)?;
            let mut height = s.height;
            if fault && first {
                height += 1;
            }
            first = false;
            report.checks += 1;
            if s.wt != q.wt || s.end != q.iota_w || s.down != q.xi_w || -height != q.deg_w {
                report.failures.push(format!(
                    "w = {}, A = {:?}: statistics differ from the image path",
                    group.name(w),
                    a.positions.iter().map(|j| j + 1).collect::<Vec<_>>()
                ));
            }
        }
    }
    Ok(report)
}

pub fn chain_independence(
    group: &WeylGroup,
    chains: &[LambdaChain],
    xi: &CorootVec,
    trunc: Truncation,
    fault: bool,
) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("chain-independence");
    let Some((reference, rest)) = chains.split_first() else {
        return Err(Error::Parse("no chains given".into()));
    };
    for w in 0..group.len() {
        let x = SchubertSymbol::new(w, xi.clone());
        let window = |e: Expansion| match coherent_degree(&reference.lambda, &trunc) {
            Some(d) => e.restrict_degree(d),
            None => e,
        };
        let mut base = window(chevalley_general(group, reference, &x, trunc, false)?);
        if fault && w == 0 {
            base.add_term(&x, &GroupAlgElt::one(group.rank()));
        }
        for (k, chain) in rest.iter().enumerate() {
            report.checks += 1;
            if window(chevalley_general(group, chain, &x, trunc, false)?) != base {
                report.failures.push(format!(
                    "w = {}: chain {} ({}) differs from chain 1 ({})",
                    group.name(w),
                    k + 2,
                    chain.provenance,
                    reference.provenance
                ));
            }
        }
    }
    Ok(report)
}

pub fn operator_product(group: &WeylGroup, chains: &[LambdaChain], fault: bool) -> SuiteReport {
    let mut report = SuiteReport::new("operator-product");
    for (k, chain) in chains.iter().enumerate() {
        let seq = signed_sequence(chain);
        for w in 0..group.len() {
            let mut product = r_operator_product(group, &seq, w);
            if fault && k == 0 && w == 0 {
                product.add_term(0, &CorootVec::zero(group.rank()), 1);
            }
            report.checks += 1;
            if product != admissible_signed_support(group, chain, w) {
                report.failures.push(format!(
                    "chain {} ({}), w = {}: operator product differs from the admissible subsets",
                    k + 1,
                    chain.provenance,
                    group.name(w)
                ));
            }
        }
    }
    report
}

pub fn qk_signs(group: &WeylGroup, fault: bool) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("qk-signs");
    let rs = group.root_system();
    for i in 0..rs.rank() {
        let chain = lex_chain(rs, &-rs.fundamental_weight(i))?;
        let mut table = StructConstTable::compute(group, i, &chain)?;
        if fault && i == 0 {
            if let Some(n) = table.entries.values_mut().next() {
                *n = -*n;
            }
        }
        report.checks += table.entries.len();
        report
            .failures
            .extend(verify_struct_consts(group, &table, &chain)?);
    }
    Ok(report)
}
