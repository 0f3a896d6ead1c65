mod dot;
mod expr;
mod graphfile;

use std::collections::BTreeSet;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use lpa_core::branching::{act, annihilation_check, nonzero_witness, show_vector};
use lpa_core::chen::{annihilator, annihilator_generators, build_module};
use lpa_core::classify::{chen_witness, classify_graded_ideal};
use lpa_core::ideal::{enumerate_admissible_pairs, quotient_graph, v_h, Origin};
use lpa_core::verify::{verify_graph, SuiteResult, VerifyOptions};
use lpa_core::{catalog, AdmissiblePair, Algebra, BranchingSystem, Field, ModuleVector, Truncation};

use graphfile::GraphFile;

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Failed(String),
    #[error("{0}")]
    Overflow(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
            CliError::Overflow(_) => 3,
        }
    }
}

impl From<lpa_core::Error> for CliError {
    fn from(e: lpa_core::Error) -> Self {
        match e {
            lpa_core::Error::WindowOverflow { .. } => CliError::Overflow(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn parse_field(s: &str) -> Result<Field, String> {
    match s {
        "q" | "Q" => Ok(Field::Rationals),
        _ => {
            let p = s.strip_prefix("p:").ok_or("expected `q` or `p:<prime>`")?;
            let p: u64 = p.parse().map_err(|_| format!("`{p}` is not a number"))?;
            Field::prime(p).map_err(|e| e.to_string())
        }
    }
}

#[derive(Parser)]
#[command(name = "lpa", version, about = "Leavitt path algebras: ideals, quotients and Chen modules")]
struct Cli {
    /// Coefficient field: `q` or `p:<prime>`
    #[arg(long, global = true, default_value = "q", value_parser = parse_field)]
    field: Field,
    /// Print reports as JSON
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PairSelector {
    /// A pair declared in the graph file
    #[arg(long)]
    pair: Option<String>,
    /// Vertices of H, comma separated
    #[arg(long = "h", value_delimiter = ',', conflicts_with = "pair")]
    h: Vec<String>,
    /// Vertices of S, comma separated
    #[arg(long = "s", value_delimiter = ',', conflicts_with = "pair")]
    s: Vec<String>,
}

#[derive(Args)]
struct WindowArg {
    /// Path length bound and bundle sample
    #[arg(long, num_args = 2, value_names = ["L", "N"])]
    window: Option<Vec<usize>>,
}

impl WindowArg {
    fn get(&self) -> CliResult<Truncation> {
        match self.window.as_deref() {
            None => Ok(VerifyOptions::default().window),
            Some(&[l, n]) => Ok(Truncation::new(l, n as u32)?),
            Some(_) => Err(CliError::Input("--window takes two numbers".into())),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the admissible pairs of a graph
    Pairs { file: PathBuf },
    /// Classify the graded ideal of one pair, or of every proper pair
    Classify {
        file: PathBuf,
        #[command(flatten)]
        select: PairSelector,
        #[arg(long, conflicts_with_all = ["pair", "h", "s"])]
        all: bool,
    },
    /// Build the quotient graph of a pair
    Quotient {
        file: PathBuf,
        #[command(flatten)]
        select: PairSelector,
        /// Write the quotient as Graphviz
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Apply an algebra element to a basis element of a module
    Act {
        file: PathBuf,
        /// Module descriptor, e.g. `nc v c` or `sink w`
        #[arg(long)]
        module: String,
        element: String,
        basis: String,
        #[command(flatten)]
        window: WindowArg,
    },
    /// Print the annihilator of a module
    Ann {
        file: PathBuf,
        #[arg(long)]
        module: String,
        /// Check the annihilator on the window L N
        #[arg(long, num_args = 2, value_names = ["L", "N"])]
        verify: Option<Vec<usize>>,
    },
    /// Re-emit a graph file as text, or as JSON with --json
    Convert { file: PathBuf },
    /// Run the verification suites
    Verify {
        file: Option<PathBuf>,
        /// Include the built-in example graphs
        #[arg(long)]
        catalog: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        window: WindowArg,
    },
}

fn load(path: &FsPath) -> CliResult<GraphFile> {
    let src = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    graphfile::parse_any(&src).map_err(|e| CliError::Input(format!("{}:{e}", path.display())))
}

fn select(file: &GraphFile, sel: &PairSelector) -> CliResult<AdmissiblePair> {
    match &sel.pair {
        Some(name) => file.pairs.get(name).cloned().ok_or_else(|| CliError::Input(format!("unknown pair `{name}`"))),
        None => Ok(graphfile::pair_from_names(&file.graph, &sel.h, &sel.s)?),
    }
}

fn emit<T: Serialize>(json: bool, report: &T, human: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(report).expect("reports serialize"));
    } else {
        print!("{}", human());
    }
}

#[derive(Serialize)]
struct PairRecord {
    h: String,
    s: String,
    breaking: String,
    proper: bool,
}

fn cmd_pairs(cli: &Cli, path: &FsPath) -> CliResult<()> {
    let file = load(path)?;
    let g = &file.graph;
    let rows: Vec<PairRecord> = enumerate_admissible_pairs(g)
        .iter()
        .map(|p| PairRecord {
            h: g.set_names(p.h()),
            s: g.set_names(p.s()),
            breaking: g.set_names(&p.breaking(g)),
            proper: p.is_proper(g),
        })
        .collect();
    emit(cli.json, &rows, || {
        let mut out = format!("{} admissible pairs\n", rows.len());
        for r in &rows {
            let flag = if r.proper { "" } else { "  (improper)" };
            out.push_str(&format!("H = {}  S = {}  B_H = {}{flag}\n", r.h, r.s, r.breaking));
        }
        out
    });
    Ok(())
}

#[derive(Serialize)]
struct WitnessRecord {
    kind: &'static str,
    module: String,
}

#[derive(Serialize)]
struct ClassRecord {
    pair: String,
    graded_prime: bool,
    graded_primitive: bool,
    graded_primitive_case: &'static str,
    case_detail: String,
    condition_two: bool,
    primitive: bool,
    chen_witness: Option<WitnessRecord>,
}

fn classify_one(g: &lpa_core::Graph, pair: &AdmissiblePair) -> CliResult<ClassRecord> {
    if !pair.is_proper(g) {
        return Err(CliError::Input(format!("{} is improper: H is the whole vertex set", pair.display(g))));
    }
    let c = classify_graded_ideal(g, pair)?;
    let gp = c.graded_primitive.is_graded_primitive();
    let chen = if gp {
        let w = chen_witness(g, pair)?;
        Some(WitnessRecord { kind: w.label(), module: w.descriptor().display(g) })
    } else {
        None
    };
    Ok(ClassRecord {
        pair: pair.display(g),
        graded_prime: c.graded_prime,
        graded_primitive: gp,
        graded_primitive_case: c.graded_primitive.label(),
        case_detail: c.graded_primitive.display(g),
        condition_two: c.condition_two,
        primitive: c.primitive,
        chen_witness: chen,
    })
}

fn cmd_classify(cli: &Cli, path: &FsPath, sel: &PairSelector, all: bool) -> CliResult<()> {
    let file = load(path)?;
    let g = &file.graph;
    let pairs = if all {
        enumerate_admissible_pairs(g).into_iter().filter(|p| p.is_proper(g)).collect()
    } else {
        vec![select(&file, sel)?]
    };
    let rows = pairs.iter().map(|p| classify_one(g, p)).collect::<CliResult<Vec<_>>>()?;
    let yes = |b: bool| if b { "yes" } else { "no" };
    emit(cli.json, &rows, || {
        let mut out = String::new();
        for r in &rows {
            out.push_str(&format!("{}\n", r.pair));
            out.push_str(&format!("  graded prime:     {}\n", yes(r.graded_prime)));
            out.push_str(&format!("  graded primitive: {} ({})\n", yes(r.graded_primitive), r.case_detail));
            out.push_str(&format!("  primitive:        {}\n", yes(r.primitive)));
            if let Some(w) = &r.chen_witness {
                out.push_str(&format!("  Chen witness:     {} [{}]\n", w.module, w.kind));
            }
        }
        out
    });
    if rows.iter().any(|r| r.condition_two != r.graded_primitive) {
        return Err(CliError::Failed("direct criterion and case analysis disagree".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct VertexRecord {
    name: String,
    primed: bool,
    from: String,
}

#[derive(Serialize)]
struct ArrowRecord {
    name: String,
    src: String,
    tgt: String,
    primed: bool,
    from: String,
}

#[derive(Serialize)]
struct QuotientRecord {
    pair: String,
    vertices: Vec<VertexRecord>,
    edges: Vec<ArrowRecord>,
    bundles: Vec<ArrowRecord>,
}

fn origin<T: Copy>(o: &Origin<T>, name: impl Fn(T) -> String) -> (bool, String) {
    match *o {
        Origin::Inherited(x) => (false, name(x)),
        Origin::Primed(x) => (true, name(x)),
    }
}

fn cmd_quotient(cli: &Cli, path: &FsPath, sel: &PairSelector, dot_out: Option<&FsPath>) -> CliResult<()> {
    let file = load(path)?;
    let g = &file.graph;
    let pair = select(&file, sel)?;
    let q = quotient_graph(g, &pair);
    let qg = &q.graph;
    let vertices = qg
        .vertices()
        .zip(&q.vertex_origin)
        .map(|(v, o)| {
            let (primed, from) = origin(o, |x| g.vertex_name(x).to_string());
            VertexRecord { name: qg.vertex_name(v).into(), primed, from }
        })
        .collect();
    let arrow = |name: &str, r: lpa_core::EdgeRef, primed: bool, from: String| ArrowRecord {
        name: name.into(),
        src: qg.vertex_name(qg.source(r)).into(),
        tgt: qg.vertex_name(qg.range(r)).into(),
        primed,
        from,
    };
    let edges = qg
        .edges()
        .zip(&q.edge_origin)
        .map(|(e, o)| {
            let (primed, from) = origin(o, |x| g.edge_name(x).to_string());
            arrow(qg.edge_name(e), lpa_core::EdgeRef::Edge(e), primed, from)
        })
        .collect();
    let bundles = qg
        .bundles()
        .zip(&q.bundle_origin)
        .map(|(b, o)| {
            let (primed, from) = origin(o, |x| g.bundle_name(x).to_string());
            arrow(qg.bundle_name(b), lpa_core::EdgeRef::Bundle(b, 0), primed, from)
        })
        .collect();
    let report = QuotientRecord { pair: pair.display(g), vertices, edges, bundles };
    if let Some(out) = dot_out {
        let primed: BTreeSet<_> = q.primed_vertices().collect();
        std::fs::write(out, dot::to_dot(qg, &primed))
            .map_err(|e| CliError::Input(format!("{}: {e}", out.display())))?;
    }
    emit(cli.json, &report, || {
        let mut out = format!("quotient by {}\n", report.pair);
        out.push_str(&format!("{} vertices\n", report.vertices.len()));
        for v in &report.vertices {
            let note = if v.primed { format!("  (copy of {})", v.from) } else { String::new() };
            out.push_str(&format!("  {}{note}\n", v.name));
        }
        out.push_str(&format!("{} edges, {} bundles\n", report.edges.len(), report.bundles.len()));
        for a in report.edges.iter().chain(&report.bundles) {
            let note = if a.primed { format!("  (copy of {})", a.from) } else { String::new() };
            out.push_str(&format!("  {}: {} -> {}{note}\n", a.name, a.src, a.tgt));
        }
        out
    });
    Ok(())
}

#[derive(Serialize)]
struct ActRecord {
    module: String,
    element: String,
    basis: String,
    result: String,
}

fn cmd_act(cli: &Cli, path: &FsPath, module: &str, element: &str, basis: &str, window: &WindowArg) -> CliResult<()> {
    let file = load(path)?;
    let g = &file.graph;
    let t = window.get()?;
    let d = expr::parse_module(&file, module).map_err(CliError::Input)?;
    let sys = build_module(g, &d)?;
    let alg = Algebra::new(g, cli.field);
    let a = expr::parse_element(&alg, element).map_err(|e| CliError::Input(format!("element: {e}")))?;
    let m = expr::parse_monomial(g, basis).map_err(|e| CliError::Input(format!("basis element: {e}")))?;
    let x = sys.basis_from_monomial(&m)?;
    let y = act(&sys, &a, &ModuleVector::basis(x.clone()), t)?;
    let report = ActRecord { module: d.display(g), element: alg.display(&a).to_string(), basis: sys.show(&x), result: show_vector(&sys, &y) };
    emit(cli.json, &report, || format!("{}\n", report.result));
    Ok(())
}

#[derive(Serialize)]
struct Check {
    what: String,
    pass: bool,
}

#[derive(Serialize)]
struct AnnRecord {
    module: String,
    annihilator: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pass: Option<bool>,
    checks: Vec<Check>,
}

fn cmd_ann(cli: &Cli, path: &FsPath, module: &str, verify: Option<&[usize]>) -> CliResult<()> {
    let file = load(path)?;
    let g = &file.graph;
    let d = expr::parse_module(&file, module).map_err(CliError::Input)?;
    let ideal = annihilator(g, &d)?;
    let mut report = AnnRecord { module: d.display(g), annihilator: ideal.display(g), pass: None, checks: Vec::new() };
    if let Some(w) = verify {
        let t = WindowArg { window: Some(w.to_vec()) }.get()?;
        let sys = build_module(g, &d)?;
        let alg = Algebra::new(g, cli.field);
        let r = annihilation_check(&sys, &annihilator_generators(&alg, &ideal), t);
        let what = match &r.counterexample {
            None => format!("generators kill the window ({} actions, {} left it)", r.checked, r.overflows),
            Some(c) => format!("generator {} sends {} to {}", c.generator, c.basis_element, c.result),
        };
        report.checks.push(Check { what, pass: r.pass });
        let pair = ideal.pair();
        let mut outside: Vec<(String, lpa_core::Element)> =
            g.complement(pair.h()).into_iter().map(|u| (g.vertex_name(u).to_string(), alg.vertex(u))).collect();
        outside.extend(pair.unbroken(g).into_iter().map(|u| (format!("{}^H", g.vertex_name(u)), v_h(&alg, pair.h(), u))));
        for (name, a) in outside {
            let hit = nonzero_witness(&sys, &a, t);
            let what = match &hit {
                Some(x) => format!("{name} moves {}", sys.show(x)),
                None => format!("{name} acts as zero on the window"),
            };
            report.checks.push(Check { what, pass: hit.is_some() });
        }
        report.pass = Some(report.checks.iter().all(|c| c.pass));
    }
    emit(cli.json, &report, || {
        let mut out = format!("{}\n", report.annihilator);
        for c in &report.checks {
            out.push_str(&format!("  {} {}\n", if c.pass { "ok  " } else { "FAIL" }, c.what));
        }
        if let Some(p) = report.pass {
            out.push_str(if p { "verify: pass\n" } else { "verify: FAIL\n" });
        }
        out
    });
    match report.pass {
        Some(false) => Err(CliError::Failed("annihilator check failed".into())),
        _ => Ok(()),
    }
}

#[derive(Serialize)]
struct SuiteRecord {
    graph: String,
    suite: &'static str,
    pass: bool,
    checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

impl From<SuiteResult> for SuiteRecord {
    fn from(r: SuiteResult) -> Self {
        SuiteRecord { graph: r.graph, suite: r.suite, pass: r.pass, checked: r.checked, detail: r.detail }
    }
}

fn cmd_verify(cli: &Cli, file: Option<&FsPath>, with_catalog: bool, seed: u64, window: &WindowArg) -> CliResult<()> {
    let opts = VerifyOptions { seed, window: window.get()?, field: cli.field, ..VerifyOptions::default() };
    let mut graphs: Vec<(String, lpa_core::Graph)> = Vec::new();
    if with_catalog || file.is_none() {
        graphs.extend(catalog::graphs().into_iter().map(|(n, g)| (n.to_string(), g)));
    }
    if let Some(path) = file {
        graphs.push((path.display().to_string(), load(path)?.graph));
    }
    let rows: Vec<SuiteRecord> = graphs.iter().flat_map(|(n, g)| verify_graph(n, g, &opts)).map(Into::into).collect();
    let failed = rows.iter().filter(|r| !r.pass).count();
    emit(cli.json, &rows, || {
        let mut out = String::new();
        for r in &rows {
            let verdict = if r.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{verdict} {:<10} {:<18} {:>6} checks", r.graph, r.suite, r.checked));
            if let Some(d) = &r.detail {
                out.push_str(&format!("  {d}"));
            }
            out.push('\n');
        }
        out.push_str(&format!("{} suites, {failed} failed\n", rows.len()));
        out
    });
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} suites failed")));
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.command {
        Command::Pairs { file } => cmd_pairs(cli, file),
        Command::Classify { file, select, all } => cmd_classify(cli, file, select, *all),
        Command::Quotient { file, select, dot } => cmd_quotient(cli, file, select, dot.as_deref()),
        Command::Act { file, module, element, basis, window } => cmd_act(cli, file, module, element, basis, window),
        Command::Ann { file, module, verify } => cmd_ann(cli, file, module, verify.as_deref()),
        Command::Convert { file } => {
            let f = load(file)?;
            emit(cli.json, &graphfile::to_doc(&f), || graphfile::emit_text(&f));
            Ok(())
        }
        Command::Verify { file, catalog, seed, window } => cmd_verify(cli, file.as_deref(), *catalog, *seed, window),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("lpa: {e}");
            ExitCode::from(e.code())
        }
    }
}
