//! The eight acceptance criteria, one PASS/FAIL line each.

use std::io::Write;
use std::sync::Arc;
use std::time::{Duration, Instant};

use qalcove::alcove::lex_chain;
use qalcove::chevalley::{chevalley_antidominant, chevalley_dominant, chevalley_general};
use qalcove::coeff::{
    Expansion, ExpansionRecord, GroupAlgElt, LaurentQ, SchubertSymbol, Truncation,
};
use qalcove::qbg::FullQbg;
use qalcove::qk::{qk_chevalley, qk_from_antidominant};
use qalcove::rootsys::{CorootVec, RootSystem, Weight, WeylGroup};
use qalcove_cli::suites;
use serde_json::Value;

type Outcome = Result<String, String>;

fn group(label: &str) -> WeylGroup {
    WeylGroup::new(RootSystem::from_label(label).unwrap()).unwrap()
}

fn cli(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("qalcove").chain(args.iter().copied());
    let code = qalcove_cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

fn report(r: &suites::SuiteReport) -> Outcome {
    if r.passed() {
        Ok(format!("{} checks", r.checks))
    } else {
        Err(format!(
            "{} failures, first: {}",
            r.failures.len(),
            r.failures[0]
        ))
    }
}

fn merge(parts: Vec<Outcome>) -> Outcome {
    let mut checks = Vec::new();
    for p in parts {
        checks.push(p?);
    }
    Ok(checks.join("; "))
}

fn worked_table() -> Outcome {
    let (code, out) = cli(&[
        "admissible",
        "--type",
        "A2",
        "--weight",
        "1,-1",
        "--w",
        "s1",
        "--chain",
        "custom:a1,-a2",
        "--format",
        "json",
    ]);
    if code != 0 {
        return Err(format!("exit status {code}"));
    }
    let rows: Value = serde_json::from_str(&out).map_err(|e| e.to_string())?;
    // lambda = (1,-1), s1 lambda = (-1,0); columns A, n(A), height, wt, end, down
    let expected: Value = serde_json::json!([
        {"A": [],     "n": 0, "height": 0, "wt": [-1, 0], "end": "s1",    "down": [0, 0]},
        {"A": [1],    "n": 0, "height": 1, "wt": [1, -1], "end": "e",     "down": [1, 0]},
        {"A": [2],    "n": 1, "height": 0, "wt": [-1, 0], "end": "s1*s2", "down": [0, 0]},
        {"A": [1, 2], "n": 1, "height": 1, "wt": [1, -1], "end": "s2",    "down": [1, 0]},
    ]);
    if rows == expected {
        Ok("4 rows".into())
    } else {
        Err(format!("got {rows}"))
    }
}

fn worked_expansion() -> Outcome {
    let g = group("A2");
    let lambda = Weight(vec![1, -1]);
    let s1 = g.parse_word("s1").unwrap();
    let s2 = g.parse_word("s2").unwrap();
    let s1s2 = g.parse_word("s1*s2").unwrap();
    let s1l = Weight(vec![-1, 0]);
    let mut checked = 0;
    for xi in [[0, 0], [1, 2], [2, 0], [0, 3]] {
        let xi_arg = format!("{},{}", xi[0], xi[1]);
        let (code, out) = cli(&[
            "chevalley",
            "--regime",
            "general",
            "--type",
            "A2",
            "--weight",
            "1,-1",
            "--x",
            "s1",
            "--xi",
            &xi_arg,
            "--chain",
            "custom:a1,-a2",
            "--max-par",
            "3",
            "--max-degree",
            "10",
        ]);
        if code != 0 {
            return Err(format!("exit status {code}"));
        }
        let rec: ExpansionRecord = serde_json::from_str(&out).map_err(|e| e.to_string())?;
        let got = Expansion::from_record(&g, &rec).map_err(|e| e.to_string())?;
        let xi = CorootVec(xi.to_vec());
        let base = -lambda.dot(&xi);
        let mut expected = Expansion::new(Truncation::bounded(3, 10), xi.total_degree());
        for m in 0..=3i64 {
            let at = |k: i64| &xi + &CorootVec(vec![k, 0]);
            let term = |c: i64, e: i64, mu: &Weight| {
                GroupAlgElt::term(&LaurentQ::monomial(c, base - m + e), mu)
            };
            expected.add_term(&SchubertSymbol::new(s1, at(m)), &term(1, 0, &s1l));
            expected.add_term(&SchubertSymbol::new(0, at(m + 1)), &term(1, -1, &lambda));
            expected.add_term(&SchubertSymbol::new(s1s2, at(m)), &term(-1, 0, &s1l));
            expected.add_term(&SchubertSymbol::new(s2, at(m + 1)), &term(-1, -1, &lambda));
        }
        if got != expected {
            return Err(format!("xi = {:?}: expansion differs", xi.0));
        }
        checked += got.len();
    }
    Ok(format!("{checked} terms over 4 values of xi"))
}

fn dominant_weights(rank: usize, max: i64) -> Vec<Weight> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|v: Vec<i64>| (0..=max).map(move |c| [v.clone(), vec![c]].concat()))
            .collect();
    }
    out.into_iter()
        .map(Weight)
        .filter(|w| !w.is_zero())
        .collect()
}

fn bijection_suite() -> Outcome {
    let mut parts = Vec::new();
    for (label, max) in [("A2", 2), ("B2", 2), ("G2", 2), ("A3", 1)] {
        let g = Arc::new(group(label));
        let full = Arc::new(FullQbg::new(&g).map_err(|e| e.to_string())?);
        let mut checks = 0;
        for lambda in dominant_weights(g.rank(), max) {
            let r = suites::bijection(&full, &lambda, None, false)
                .map_err(|e| format!("{label} {lambda:?}: {e}"))?;
            report(&r).map_err(|e| format!("{label} {:?}: {e}", lambda.0))?;
            checks += r.checks;
        }
        parts.push(Ok(format!("{label}: {checks} subsets")));
    }
    merge(parts)
}

fn mixed_weights() -> [Weight; 3] {
    [
        Weight(vec![1, -1]),
        Weight(vec![2, -1]),
        Weight(vec![-1, 1]),
    ]
}

fn chain_independence_suite() -> Outcome {
    let mut parts = Vec::new();
    for label in ["A2", "B2"] {
        let g = group(label);
        for lambda in mixed_weights() {
            let chains = suites::default_chains(&g, &lambda, &[1, 2]).map_err(|e| e.to_string())?;
            for xi in [vec![0, 0], vec![1, 1]] {
                let r = suites::chain_independence(
                    &g,
                    &chains,
                    &CorootVec(xi),
                    Truncation::bounded(8, 4),
                    false,
                )
                .map_err(|e| e.to_string())?;
                parts.push(report(&r).map_err(|e| format!("{label} {:?}: {e}", lambda.0)));
            }
        }
    }
    let n = parts.len();
    merge(parts).map(|_| format!("{n} (type, weight, xi) cases, 3 chains each"))
}

fn ybe_suite() -> Outcome {
    merge(
        ["A2", "B2", "G2"]
            .iter()
            .map(|l| {
                let r = suites::ybe(&group(l), false).map_err(|e| e.to_string())?;
                report(&r).map(|s| format!("{l}: {s}"))
            })
            .collect(),
    )
}

fn operator_suite() -> Outcome {
    let mut checks = 0;
    for label in ["A2", "B2"] {
        let g = group(label);
        for lambda in mixed_weights() {
            let chains = suites::default_chains(&g, &lambda, &[1, 2]).map_err(|e| e.to_string())?;
            let r = suites::operator_product(&g, &chains, false);
            report(&r).map_err(|e| format!("{label} {:?}: {e}", lambda.0))?;
            checks += r.checks;
        }
    }
    Ok(format!("{checks} (chain, w) pairs"))
}

fn qk_suite() -> Outcome {
    merge(
        ["A2", "A3"]
            .iter()
            .map(|l| {
                let r = suites::qk_signs(&group(l), false).map_err(|e| e.to_string())?;
                report(&r).map(|s| format!("{l}: {s}"))
            })
            .collect(),
    )
}

fn specialization_suite() -> Outcome {
    let trunc = Truncation::bounded(2, 4);
    let mut checks = 0;
    for (label, doms) in [
        ("A2", vec![vec![1, 0], vec![0, 1], vec![1, 1], vec![2, 0]]),
        (
            "A3",
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 1]],
        ),
    ] {
        let g = group(label);
        let rs = g.root_system();
        let zero = CorootVec::zero(g.rank());
        for d in doms {
            let dom = Weight(d);
            let anti = -&dom;
            let dom_chain = lex_chain(rs, &dom).map_err(|e| e.to_string())?;
            let anti_chain = lex_chain(rs, &anti).map_err(|e| e.to_string())?;
            for w in 0..g.len() {
                let x = SchubertSymbol::new(w, zero.clone());
                let a = chevalley_general(&g, &dom_chain, &x, trunc, false)
                    .map_err(|e| e.to_string())?;
                let b = chevalley_dominant(&g, &dom_chain, &x, trunc).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!(
                        "{label} {:?}, w = {}: general != dominant",
                        dom.0,
                        g.name(w)
                    ));
                }
                let a = chevalley_general(&g, &anti_chain, &x, trunc, false)
                    .map_err(|e| e.to_string())?;
                let b = chevalley_antidominant(&g, &anti_chain, &x).map_err(|e| e.to_string())?;
                if a != b {
                    return Err(format!(
                        "{label} {:?}, w = {}: general != antidominant",
                        anti.0,
                        g.name(w)
                    ));
                }
                checks += 2;
            }
        }
        for i in 0..g.rank() {
            let chain = lex_chain(rs, &-rs.fundamental_weight(i)).map_err(|e| e.to_string())?;
            for w in 0..g.len() {
                let x = SchubertSymbol::new(w, zero.clone());
                let anti = chevalley_antidominant(&g, &chain, &x).map_err(|e| e.to_string())?;
                let qk = qk_chevalley(&g, i, w, &chain).map_err(|e| e.to_string())?;
                if qk_from_antidominant(&g, i, w, &anti) != qk {
                    return Err(format!(
                        "{label} i = {}, w = {}: dictionary mismatch",
                        i + 1,
                        g.name(w)
                    ));
                }
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} comparisons"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Outcome, u64); 8] = [
        ("1 worked-example table", worked_table, 1),
        ("2 worked-example expansion", worked_expansion, 1),
        ("3 QLS bijection", bijection_suite, 120),
        ("4 chain independence", chain_independence_suite, 60),
        ("5 Yang-Baxter equation", ybe_suite, 30),
        (
            "6 operator product vs admissible subsets",
            operator_suite,
            60,
        ),
        ("7 QK structure constants", qk_suite, 120),
        ("8 specialization coherence", specialization_suite, 60),
    ];
    let mut failed = Vec::new();
    let mut stdout = std::io::stdout();
    for (name, f, limit) in criteria {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > Duration::from_secs(limit) => {
                Err(format!("{detail}; took {elapsed:.2?}, limit {limit}s"))
            }
            o => o,
        };
        let line = match &outcome {
            Ok(detail) => format!("PASS criterion {name}: {detail} ({elapsed:.2?})\n"),
            Err(why) => format!("FAIL criterion {name}: {why} ({elapsed:.2?})\n"),
        };
        // written directly so the lines survive output capture
        stdout.write_all(line.as_bytes()).unwrap();
        if outcome.is_err() {
            failed.push(name);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
