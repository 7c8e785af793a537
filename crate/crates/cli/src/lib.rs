//! Command-line front end for `qalcove`.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on usage errors.

pub mod suites;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qalcove::alcove::{admissible_table, ChainRecord, ChainSpec, LambdaChain, DEFAULT_SEED};
use qalcove::chevalley::{
    chevalley_antidominant, chevalley_dominant, chevalley_dominant_qls, chevalley_general, Regime,
};
use qalcove::coeff::{Expansion, SchubertSymbol, Truncation, DEFAULT_MAX_DEGREE, DEFAULT_MAX_PAR};
use qalcove::qbg::{build_qbg, parse_rational, FullQbg, LevelFilter};
use qalcove::qk::{qk_chevalley, qk_from_antidominant, verify_struct_consts, StructConstTable};
use qalcove::qls::QlsSpace;
use qalcove::rootsys::{CorootVec, RootSystem, Weight, WeylGroup, DEFAULT_WEYL_BOUND};
use qalcove::{Error, Result};
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "qalcove",
    version,
    about = "Quantum alcove model and semi-infinite Chevalley formulas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print a lambda-chain of roots.
    Chain(ChainArgs),
    /// Tabulate admissible subsets and their statistics.
    Admissible(AdmissibleArgs),
    /// List quantum LS paths of a dominant weight.
    Qls(QlsArgs),
    /// Chevalley expansion in the semi-infinite flag manifold.
    Chevalley(ChevalleyArgs),
    /// Quantum Bruhat graph, possibly parabolic or level-restricted.
    Qbg(QbgArgs),
    /// Chevalley formula in equivariant quantum K-theory of G/B.
    QkChevalley(QkChevalleyArgs),
    /// Non-equivariant quantum K-theory structure constants in type A.
    QkConstants(QkConstantsArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
    Csv,
    Dot,
}

#[derive(Args, Debug, Clone)]
struct TypeArgs {
    /// Cartan type label such as A2, B3, G2.
    #[arg(long = "type")]
    cartan: String,
    /// Node order used by the lex chain, a permutation of 1..=rank.
    #[arg(long)]
    node_order: Option<String>,
}

#[derive(Args, Debug, Clone)]
struct ChainSel {
    /// lex | segment[:seed] | concat | custom:<roots>
    #[arg(long, default_value = "lex")]
    chain: String,
    /// Seed for segment chains.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Debug, Clone, Copy)]
struct TruncArgs {
    #[arg(long, env = "QALCOVE_MAX_PAR", default_value_t = DEFAULT_MAX_PAR)]
    max_par: usize,
    #[arg(long, env = "QALCOVE_MAX_DEGREE", default_value_t = DEFAULT_MAX_DEGREE)]
    max_degree: i64,
}

impl TruncArgs {
    fn truncation(self) -> Truncation {
        Truncation::bounded(self.max_par, self.max_degree)
    }
}

#[derive(Args, Debug)]
struct ChainArgs {
    #[command(flatten)]
    ty: TypeArgs,
    /// Weight in fundamental-weight coordinates, e.g. 1,-1.
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
    #[command(flatten)]
    sel: ChainSel,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct AdmissibleArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
    /// Weyl group element as a word, e.g. s1*s2, or e.
    #[arg(long, default_value = "e")]
    w: String,
    #[command(flatten)]
    sel: ChainSel,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct QlsArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[arg(long)]
    weight: String,
    /// Also report the statistics relative to this element.
    #[arg(long)]
    w: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Alcove,
    Qls,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    Dominant,
    Antidominant,
    General,
}

#[derive(Args, Debug)]
struct ChevalleyArgs {
    #[command(flatten)]
    ty: TypeArgs,
    #[arg(long, allow_hyphen_values = true)]
    weight: String,
    #[arg(long, value_enum, default_value_t = RegimeArg::General)]
    regime: RegimeArg,
    /// Finite Weyl group part of x = w t_xi.
    #[arg(long, default_value = "e")]
    x: String,
    /// Translation part of x, in simple coroot coordinates.
    #[arg(long)]
    xi: Option<String>,
    #[command(flatten)]
    sel: ChainSel,
    #[arg(long, value_enum, default_value_t = Mode::Alcove)]
    mode: Mode,
    /// Specialize q to 1.
    #[arg(long)]
    q_one: bool,
    #[command(flatten)]
    trunc: TruncArgs,
    /// Accept non-reduced custom walks.
    #[arg(long)]
    unverified: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct QbgArgs {
    #[command(flatten)]
    ty: TypeArgs,
    /// Parabolic nodes J, e.g. 1,3.
    #[arg(long)]
    parabolic: Option<String>,
    /// Level b of the restriction QB_{b lambda}; needs --weight.
    #[arg(long)]
    level: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
    /// Shorthand for --format dot.
    #[arg(long)]
    dot: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct QkChevalleyArgs {
    #[command(flatten)]
    ty: TypeArgs,
    /// Node i, one-based.
    #[arg(long)]
    i: usize,
    #[arg(long, default_value = "e")]
    w: String,
    #[command(flatten)]
    sel: ChainSel,
    /// Compare with the anti-dominant formula at q = 1.
    #[arg(long)]
    cross_check: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct QkConstantsArgs {
    #[command(flatten)]
    ty: TypeArgs,
    /// Node i, one-based; all nodes if omitted.
    #[arg(long)]
    i: Option<usize>,
    /// Check the structure constant theorem; violations exit with status 1.
    #[arg(long)]
    verify: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Ybe,
    Bijection,
    ChainIndependence,
    OperatorProduct,
    QkSigns,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    suite: Suite,
    #[command(flatten)]
    ty: TypeArgs,
    #[arg(long, allow_hyphen_values = true)]
    weight: Option<String>,
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    xi: Option<String>,
    /// Segment chain seeds for chain-based suites.
    #[arg(long, default_value = "1,2")]
    seeds: String,
    #[command(flatten)]
    trunc: TruncArgs,
    #[arg(long, hide = true)]
    inject_fault: bool,
}

enum Failure {
    Usage(String),
    Verify(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unreachable { .. }
            | Error::PathWeightNotUnique { .. }
            | Error::LiftNotUnique { .. }
            | Error::Bijection(_)
            | Error::NonIntegral(_)
            | Error::TheoremViolation(_) => Failure::Verify(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Output of a successful command, and whether its verification passed.
struct Output {
    text: String,
    verified: bool,
}

impl Output {
    fn ok(text: String) -> Self {
        Output {
            text,
            verified: true,
        }
    }
}

/// Parse `args` (including the program name) and run; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let result = dispatch(&cli.command);
    match result {
        Ok(output) => {
            let mut text = output.text;
            if !text.ends_with('\n') {
                text.push('\n');
            }
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &text).map_err(|e| e.to_string()),
                None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: cannot write output: {e}");
                return EXIT_USAGE;
            }
            if output.verified {
                EXIT_OK
            } else {
                let _ = writeln!(err, "verification failed");
                EXIT_VERIFY
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Verify(msg)) => {
            let _ = writeln!(err, "verification failed: {msg}");
            EXIT_VERIFY
        }
    }
}

fn dispatch(cmd: &Command) -> std::result::Result<Output, Failure> {
    match cmd {
        Command::Chain(a) => cmd_chain(a),
        Command::Admissible(a) => cmd_admissible(a),
        Command::Qls(a) => cmd_qls(a),
        Command::Chevalley(a) => cmd_chevalley(a),
        Command::Qbg(a) => cmd_qbg(a),
        Command::QkChevalley(a) => cmd_qk_chevalley(a),
        Command::QkConstants(a) => cmd_qk_constants(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Parse(format!("bad list entry {t:?}")))
        })
        .collect()
}

fn root_system(ty: &TypeArgs) -> Result<RootSystem> {
    let rs = RootSystem::from_label(&ty.cartan)?;
    match &ty.node_order {
        Some(order) => rs.with_node_order(&parse_list::<usize>(order)?),
        None => Ok(rs),
    }
}

fn weyl_group(ty: &TypeArgs) -> Result<WeylGroup> {
    WeylGroup::new(root_system(ty)?)
}

fn build_chain(group: &WeylGroup, lambda: &Weight, sel: &ChainSel) -> Result<LambdaChain> {
    ChainSpec::parse(&sel.chain, sel.seed)?.build(group.root_system(), lambda)
}

fn json_text(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize")
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("records serialize")
}

fn unsupported_format(f: Format, cmd: &str) -> Failure {
    usage(format!("format {f:?} is not available for {cmd}").to_lowercase())
}

fn list_string(xs: &[i64]) -> String {
    let parts: Vec<String> = xs.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

fn cmd_chain(a: &ChainArgs) -> std::result::Result<Output, Failure> {
    let rs = root_system(&a.ty)?;
    let lambda = rs.parse_weight(&a.weight)?;
    let chain = ChainSpec::parse(&a.sel.chain, a.sel.seed)?.build(&rs, &lambda)?;
    match a.format {
        Format::Json => Ok(Output::ok(json_text(&to_value(&ChainRecord::from(&chain))))),
        Format::Table => {
            let mut s = format!(
                "lambda = {}  provenance = {}  reduced = {}\n",
                list_string(lambda.coords()),
                chain.provenance,
                chain.reduced
            );
            for (k, e) in chain.entries.iter().enumerate() {
                let rel = e
                    .relative_height
                    .as_ref()
                    .map(qalcove::qbg::rational_string)
                    .unwrap_or_else(|| "-".into());
                let _ = writeln!(
                    s,
                    "{:>3}  {:<16} l = {:<3} rel = {}",
                    k + 1,
                    e.root.to_string(),
                    e.height,
                    rel
                );
            }
            Ok(Output::ok(s))
        }
        f => Err(unsupported_format(f, "chain")),
    }
}

fn cmd_admissible(a: &AdmissibleArgs) -> std::result::Result<Output, Failure> {
    let group = weyl_group(&a.ty)?;
    let lambda = group.root_system().parse_weight(&a.weight)?;
    let w = group.parse_word(&a.w)?;
    let chain = build_chain(&group, &lambda, &a.sel)?;
    let rows = admissible_table(&group, w, &chain);
    match a.format {
        Format::Json => Ok(Output::ok(json_text(&to_value(&rows)))),
        Format::Table => {
            let mut s =
                String::from("A        | n(A) | height | wt           | end          | down\n");
            for r in &rows {
                let set: Vec<String> = r.a.iter().map(usize::to_string).collect();
                let _ = writeln!(
                    s,
                    "{:<8} | {:<4} | {:<6} | {:<12} | {:<12} | {}",
                    format!("{{{}}}", set.join(",")),
                    r.n,
                    r.height,
                    list_string(&r.wt),
                    r.end,
                    list_string(&r.down)
                );
            }
            Ok(Output::ok(s))
        }
        Format::Csv => {
            let mut s = String::from("A,n,height,wt,end,down\n");
            for r in &rows {
                let set: Vec<String> = r.a.iter().map(usize::to_string).collect();
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    set.join(" "),
                    r.n,
                    r.height,
                    join_space(&r.wt),
                    r.end,
                    join_space(&r.down)
                );
            }
            Ok(Output::ok(s))
        }
        f => Err(unsupported_format(f, "admissible")),
    }
}

fn join_space(xs: &[i64]) -> String {
    xs.iter().map(i64::to_string).collect::<Vec<_>>().join(" ")
}

fn cmd_qls(a: &QlsArgs) -> std::result::Result<Output, Failure> {
    let group = Arc::new(weyl_group(&a.ty)?);
    let lambda = group.root_system().parse_weight(&a.weight)?;
    let w = a.w.as_deref().map(|s| group.parse_word(s)).transpose()?;
    let full = Arc::new(FullQbg::new(&group)?);
    let space = QlsSpace::new(full, &lambda)?;
    let paths = space.enumerate()?;
    let mut rows = Vec::with_capacity(paths.len());
    for p in &paths {
        let mut row = to_value(&space.record(p));
        if let Some(w) = w {
            let st = space.statistics(p, w)?;
            row["wt"] = json!(st.wt.0);
            row["iota"] = json!(group.name(st.iota_w));
            row["xi"] = json!(st.xi_w.0);
            row["deg"] = json!(st.deg_w);
        }
        rows.push(row);
    }
    match a.format {
        Format::Json => Ok(Output::ok(json_text(&Value::Array(rows)))),
        Format::Table => {
            let mut s = format!("{} paths\n", rows.len());
            for r in &rows {
                let _ = write!(s, "{}  {}", r["breakpoints"], r["directions"]);
                if w.is_some() {
                    let _ = write!(
                        s,
                        "  wt={} iota={} xi={} deg={}",
                        r["wt"], r["iota"], r["xi"], r["deg"]
                    );
                }
                s.push('\n');
            }
            Ok(Output::ok(s))
        }
        f => Err(unsupported_format(f, "qls")),
    }
}

fn expansion_output(
    group: &WeylGroup,
    e: &Expansion,
    format: Format,
    cmd: &str,
) -> std::result::Result<Output, Failure> {
    match format {
        Format::Json => Ok(Output::ok(json_text(&to_value(&e.to_record(group))))),
        Format::Table => {
            let t = e.truncation();
            let mut s = if t.exact {
                String::from("exact\n")
            } else {
                format!(
                    "truncated: |chi| <= {}, degree <= {}\n",
                    t.max_par_size, t.max_down_degree
                )
            };
            for (x, c) in e.terms() {
                let _ = writeln!(
                    s,
                    "[{} t{}]  {}",
                    group.name(x.w),
                    list_string(x.xi.coords()),
                    c
                );
            }
            Ok(Output::ok(s))
        }
        f => Err(unsupported_format(f, cmd)),
    }
}

fn cmd_chevalley(a: &ChevalleyArgs) -> std::result::Result<Output, Failure> {
    let group = Arc::new(weyl_group(&a.ty)?);
    let rs = group.root_system();
    let lambda = rs.parse_weight(&a.weight)?;
    let w = group.parse_word(&a.x)?;
    let xi = match &a.xi {
        Some(s) => rs.parse_coroot(s)?,
        None => CorootVec::zero(rs.rank()),
    };
    let x = SchubertSymbol::new(w, xi);
    let trunc = a.trunc.truncation();
    if a.mode == Mode::Qls && a.regime != RegimeArg::Dominant {
        return Err(usage("--mode qls needs --regime dominant"));
    }
    let regime = match a.regime {
        RegimeArg::Dominant => Regime::Dominant,
        RegimeArg::Antidominant => Regime::Antidominant,
        RegimeArg::General => Regime::General,
    };
    let e = match (regime, a.mode) {
        (Regime::Dominant, Mode::Qls) => {
            let full = Arc::new(FullQbg::new(&group)?);
            chevalley_dominant_qls(&QlsSpace::new(full, &lambda)?, &x, trunc)?
        }
        (Regime::Dominant, Mode::Alcove) => {
            chevalley_dominant(&group, &build_chain(&group, &lambda, &a.sel)?, &x, trunc)?
        }
        (Regime::Antidominant, _) => {
            chevalley_antidominant(&group, &build_chain(&group, &lambda, &a.sel)?, &x)?
        }
        (Regime::General, _) => chevalley_general(
            &group,
            &build_chain(&group, &lambda, &a.sel)?,
            &x,
            trunc,
            a.unverified,
        )?,
    };
    let e = if a.q_one { e.at_q_one() } else { e };
    expansion_output(&group, &e, a.format, "chevalley")
}

fn cmd_qbg(a: &QbgArgs) -> std::result::Result<Output, Failure> {
    let group = Arc::new(weyl_group(&a.ty)?);
    let rs = group.root_system();
    let parabolic: Vec<usize> = match &a.parabolic {
        Some(s) => parse_list::<usize>(s)?
            .into_iter()
            .map(|j| {
                j.checked_sub(1)
                    .ok_or_else(|| Error::Parse("nodes are 1-based".into()))
            })
            .collect::<Result<_>>()?,
        None => Vec::new(),
    };
    let filter = match (&a.level, &a.weight) {
        (Some(b), Some(w)) => Some(LevelFilter {
            b: parse_rational(b)?,
            lambda: rs.parse_weight(w)?,
        }),
        (None, None) => None,
        _ => return Err(usage("--level and --weight go together")),
    };
    let graph = build_qbg(&group, &parabolic, filter, DEFAULT_WEYL_BOUND)?;
    let format = if a.dot { Format::Dot } else { a.format };
    match format {
        Format::Dot => Ok(Output::ok(graph.to_dot())),
        Format::Json => {
            let vertices: Vec<String> = graph.vertices().iter().map(|&v| group.name(v)).collect();
            Ok(Output::ok(json_text(&json!({
                "vertices": vertices,
                "edges": to_value(&graph.edge_records()),
            }))))
        }
        f => Err(unsupported_format(f, "qbg")),
    }
}

fn node_index(rs: &RootSystem, i: usize) -> std::result::Result<usize, Failure> {
    if i == 0 || i > rs.rank() {
        return Err(usage(format!("node {i} outside 1..={}", rs.rank())));
    }
    Ok(i - 1)
}

fn cmd_qk_chevalley(a: &QkChevalleyArgs) -> std::result::Result<Output, Failure> {
    let group = weyl_group(&a.ty)?;
    let rs = group.root_system();
    let i = node_index(rs, a.i)?;
    let w = group.parse_word(&a.w)?;
    let lambda = -rs.fundamental_weight(i);
    let chain = build_chain(&group, &lambda, &a.sel)?;
    let e = qk_chevalley(&group, i, w, &chain)?;
    let mut out = expansion_output(&group, &e, a.format, "qk-chevalley")?;
    if a.cross_check {
        let lex = qalcove::alcove::lex_chain(rs, &lambda)?;
        let anti = chevalley_antidominant(
            &group,
            &lex,
            &SchubertSymbol::new(w, CorootVec::zero(rs.rank())),
        )?;
        if qk_from_antidominant(&group, i, w, &anti) != e {
            out.verified = false;
        }
    }
    Ok(out)
}

fn type_a_rank(rs: &RootSystem) -> std::result::Result<usize, Failure> {
    let label = rs.label();
    if !label.starts_with('A') || rs.rank() > 3 {
        return Err(usage(format!(
            "structure constants need type A of rank at most 3, got {label}"
        )));
    }
    Ok(rs.rank())
}

fn cmd_qk_constants(a: &QkConstantsArgs) -> std::result::Result<Output, Failure> {
    let group = weyl_group(&a.ty)?;
    let rs = group.root_system();
    let r = type_a_rank(rs)?;
    let nodes: Vec<usize> = match a.i {
        Some(i) => vec![node_index(rs, i)?],
        None => (0..r).collect(),
    };
    let mut tables = Vec::new();
    let mut failures = Vec::new();
    for i in nodes {
        let chain = qalcove::alcove::lex_chain(rs, &-rs.fundamental_weight(i))?;
        let table = StructConstTable::compute(&group, i, &chain)?;
        if a.verify {
            failures.extend(verify_struct_consts(&group, &table, &chain)?);
        }
        tables.push(table);
    }
    let text = match a.format {
        Format::Csv => {
            let mut s = String::from("i,w,v,d,N\n");
            for t in &tables {
                s.push_str(
                    t.to_csv(&group)
                        .split_once('\n')
                        .map_or("", |(_, body)| body),
                );
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = tables
                .iter()
                .flat_map(|t| t.rows(&group))
                .map(|r| to_value(&r))
                .collect();
            json_text(&Value::Array(rows))
        }
        f => return Err(unsupported_format(f, "qk-constants")),
    };
    Ok(Output {
        text,
        verified: failures.is_empty(),
    })
}

fn cmd_verify(a: &VerifyArgs) -> std::result::Result<Output, Failure> {
    let group = Arc::new(weyl_group(&a.ty)?);
    let rs = group.root_system();
    let weight = || -> std::result::Result<Weight, Failure> {
        let s = a
            .weight
            .as_deref()
            .ok_or_else(|| usage("this suite needs --weight"))?;
        Ok(rs.parse_weight(s)?)
    };
    let seeds = parse_list::<u64>(&a.seeds)?;
    let fault = a.inject_fault;
    let report = match a.suite {
        Suite::Ybe => suites::ybe(&group, fault)?,
        Suite::Bijection => {
            let lambda = weight()?;
            let w = a.w.as_deref().map(|s| group.parse_word(s)).transpose()?;
            let full = Arc::new(FullQbg::new(&group)?);
            suites::bijection(&full, &lambda, w, fault)?
        }
        Suite::ChainIndependence => {
            let lambda = weight()?;
            let xi = match &a.xi {
                Some(s) => rs.parse_coroot(s)?,
                None => CorootVec::zero(rs.rank()),
            };
            let chains = suites::default_chains(&group, &lambda, &seeds)?;
            suites::chain_independence(&group, &chains, &xi, a.trunc.truncation(), fault)?
        }
        Suite::OperatorProduct => {
            let lambda = weight()?;
            let chains = suites::default_chains(&group, &lambda, &seeds)?;
            suites::operator_product(&group, &chains, fault)
        }
        Suite::QkSigns => {
            type_a_rank(rs)?;
            suites::qk_signs(&group, fault)?
        }
    };
    Ok(Output {
        text: json_text(&report.to_json()),
        verified: report.passed(),
    })
}
