//! `twocycle`: compute and verify modules of 2-cycles from the command line.

mod output;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;
use twocycle::catalog::{catalog, find, CatalogEntry};
use twocycle::crossing::{kr_functional, random_generic_drawing, signed_crossing};
use twocycle::forms::{quad_form, Form2, SigmaMode};
use twocycle::homology::{h2_lattice, homology};
use twocycle::modules::{
    check_certificate, decompose, family_counts, Analysis, Certificate, Family, ModuleError,
    Outcome,
};
use twocycle::patterns::{Caps, Truncated};
use twocycle::verify::{verify_theorem, Flags, Status, Theorem, Verdict};
use twocycle::{Graph, GraphError};

use output::{Format, Report};

#[derive(Parser, Debug)]
#[command(
    name = "twocycle",
    version,
    about = "Integral modules of 2-cycles on graphs"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Summary, global = true)]
    output: Format,
    /// Largest number of items any single enumeration may produce.
    #[arg(long, global = true)]
    cap_cycles: Option<usize>,
    /// Time budget in seconds for each graph's enumerations.
    #[arg(long, env = "TWOCYCLE_CAP_SECONDS", global = true)]
    cap_time: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank of L^σ(G).
    Rank {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value = "plain")]
        mode: SigmaMode,
    },
    /// Enumerate generators and compare their span with L^σ(G).
    Generators {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value = "plain")]
        mode: SigmaMode,
        /// Comma-separated families; defaults to the generating set of the mode.
        #[arg(long, value_delimiter = ',')]
        families: Vec<Family>,
    },
    /// Write a 2-cycle over generator families, emitting a certificate.
    Decompose {
        #[command(flatten)]
        graph: GraphArg,
        /// JSON list of `[e, f, value]` triples, or `quad:I` / `basis:I`.
        #[arg(long)]
        form: String,
        #[arg(long, default_value = "plain")]
        mode: SigmaMode,
        #[arg(long, value_delimiter = ',')]
        families: Vec<Family>,
        /// Also write the certificate to this file.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Run a theorem check on a graph, a catalog entry, or `catalog:all`.
    Verify {
        #[command(flatten)]
        graph: GraphArg,
        /// One of main, main-sym, main-skew, kuratowski-connected, separations,
        /// quad-lemma, kuratowski-pairs, symmetric-quads, drawing-force, one-side, all.
        #[arg(long, default_value = "main")]
        theorem: String,
        /// Curated planarity for graph files.
        #[arg(long)]
        planar: Option<bool>,
        /// Curated linklessness for graph files.
        #[arg(long)]
        linkless: Option<bool>,
        /// The graph has a Petersen-family minor.
        #[arg(long)]
        petersen_family: bool,
    },
    /// Homology of the deleted product.
    Homology {
        #[command(flatten)]
        graph: GraphArg,
    },
    /// Crossing functional of random 2-cycles on random drawings.
    Crossing {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value = "plain")]
        mode: SigmaMode,
    },
    /// Re-check a certificate produced by `decompose`.
    CheckCertificate {
        /// Certificate file.
        file: PathBuf,
    },
    /// The built-in graph catalog.
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    /// List entries with their metadata.
    List,
    /// Run theorem checks on every entry.
    RunAll {
        #[arg(long, default_value = "all")]
        theorem: String,
    },
}

#[derive(Args, Debug)]
struct GraphArg {
    /// Graph JSON file, or `catalog:NAME`.
    #[arg(long)]
    graph: String,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Truncated(#[from] Truncated),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Truncated(_) => 3,
        }
    }
}

impl From<ModuleError> for CliError {
    fn from(e: ModuleError) -> Self {
        match e {
            ModuleError::Truncated(t) => CliError::Truncated(t),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl Global {
    fn caps(&self) -> Caps {
        let mut c = Caps::default();
        if let Some(n) = self.cap_cycles {
            c.max_items = n;
        }
        if let Some(s) = self.cap_time.filter(|s| *s > 0.0) {
            c.deadline = Some(Instant::now() + Duration::from_secs_f64(s));
        }
        c
    }
}

enum Source {
    File(Graph),
    Entry(CatalogEntry),
    All,
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))
}

fn source(arg: &str) -> Result<Source, CliError> {
    match arg.strip_prefix("catalog:") {
        Some("all") => Ok(Source::All),
        Some(name) => find(name)
            .map(Source::Entry)
            .ok_or_else(|| CliError::Input(format!("no catalog entry {name:?}"))),
        None => {
            let g = Graph::from_json(&read(arg)?)
                .map_err(|e| CliError::Input(format!("{arg}: {e}")))?;
            Ok(Source::File(g))
        }
    }
}

fn single_graph(arg: &str) -> Result<Graph, CliError> {
    match source(arg)? {
        Source::File(g) => Ok(g),
        Source::Entry(e) => Ok(e.graph()),
        Source::All => Err(CliError::Input(
            "catalog:all is only accepted by verify".into(),
        )),
    }
}

fn families_or_default(f: &[Family], mode: SigmaMode) -> Vec<Family> {
    if f.is_empty() {
        Family::generating(mode)
    } else {
        let mut v = f.to_vec();
        v.sort();
        v.dedup();
        v
    }
}

fn theorems(name: &str) -> Result<Vec<Theorem>, CliError> {
    if name == "all" {
        Ok(Theorem::all())
    } else {
        Theorem::parse(name)
            .map(|t| vec![t])
            .map_err(CliError::Input)
    }
}

// ---------------------------------------------------------------------------

fn cmd_rank(g: &Graph, mode: SigmaMode, caps: Caps) -> Result<Report, CliError> {
    let an = Analysis::new(g, caps);
    let l = an.lattice(mode);
    let basis: Vec<Form2> = l.basis_forms();
    let mut r = Report::new(0);
    r.line(format!("graph: {} vertices, {} edges", g.n(), g.m()));
    r.line(format!("rank L^{mode} = {}", l.rank()));
    r.data = json!({ "vertices": g.n(), "edges": g.m(), "mode": mode, "rank": l.rank(), "basis": basis });
    Ok(r)
}

fn cmd_generators(
    g: &Graph,
    mode: SigmaMode,
    families: &[Family],
    caps: Caps,
) -> Result<Report, CliError> {
    let an = Analysis::new(g, caps);
    let fam = families_or_default(families, mode);
    let set = an.generators_of(mode, &fam)?;
    let span = an.span_report(mode, &fam)?;
    let mut r = Report::new(0);
    for f in &fam {
        let n = set
            .generators
            .iter()
            .filter(|x| x.tag.family() == *f)
            .count();
        r.line(format!("{f}: {n} generators"));
    }
    r.line(format!(
        "span rank {} of {}; L^{mode} / span = {}",
        span.span_rank, span.lattice_rank, span.quotient
    ));
    let described: Vec<String> = set.generators.iter().map(|x| x.tag.describe()).collect();
    r.data = json!({ "report": span, "generators": described });
    Ok(r)
}

fn load_form(arg: &str, an: &Analysis, mode: SigmaMode) -> Result<Form2, CliError> {
    let index = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| CliError::Input(format!("bad index in {arg:?}")))
    };
    if let Some(i) = arg.strip_prefix("quad:") {
        let quads = an.quads()?;
        let q = quads
            .get(index(i)?)
            .ok_or_else(|| CliError::Input(format!("{arg}: only {} quads", quads.len())))?;
        return Ok(mode.apply(&quad_form(an.graph(), q, q.a, q.c).map_err(ModuleError::from)?));
    }
    if let Some(i) = arg.strip_prefix("basis:") {
        let l = an.lattice(mode);
        let i = index(i)?;
        if i >= l.rank() {
            return Err(CliError::Input(format!(
                "{arg}: L^{mode} has rank {}",
                l.rank()
            )));
        }
        return Ok(l.key.form(&l.lattice.basis()[i]));
    }
    serde_json::from_str(&read(arg)?).map_err(|e| CliError::Input(format!("{arg}: {e}")))
}

fn cmd_decompose(
    g: &Graph,
    form: &str,
    mode: SigmaMode,
    families: &[Family],
    out: Option<&PathBuf>,
    caps: Caps,
) -> Result<Report, CliError> {
    let an = Analysis::new(g, caps);
    let d = load_form(form, &an, mode)?;
    let fam = families_or_default(families, mode);
    let rep = decompose(&an, &d, &fam, mode)?;
    let cert = rep.certificate(g);
    if let Some(p) = out {
        let text = serde_json::to_string_pretty(&cert).expect("certificate serializes");
        std::fs::write(p, text + "\n")
            .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
    }
    let mut r = Report::new(if rep.succeeded() { 0 } else { 1 });
    let fam_names: Vec<&str> = fam.iter().map(|f| f.name()).collect();
    match &rep.outcome {
        Outcome::Success { terms } => {
            r.line(format!(
                "decomposed over {} with {} terms",
                fam_names.join("+"),
                terms.len()
            ));
            for (f, n) in family_counts(terms) {
                r.line(format!("  {f}: {n}"));
            }
        }
        Outcome::Failure {
            order,
            lattice_quotient,
            ..
        } => {
            r.line(format!("not in the span of {}", fam_names.join("+")));
            r.line(format!("  order of the form modulo the span: {order}"));
            r.line(format!("  L^{mode} / span = {lattice_quotient}"));
        }
    }
    r.data = json!({ "report": rep, "certificate": cert });
    Ok(r)
}

fn verdict_lines(r: &mut Report, prefix: &str, v: &Verdict) {
    let facts: Vec<String> = v.facts.iter().map(|(k, x)| format!("{k}={x}")).collect();
    r.line(format!(
        "{prefix}{:<22} {:<12} {}",
        v.theorem,
        v.status.to_string(),
        facts.join(" ")
    ));
    if let Some(w) = &v.witness {
        r.line(format!("{prefix}  witness: {w}"));
    }
}

fn run_checks(g: &Graph, flags: &Flags, which: &[Theorem], caps: Caps) -> Vec<Verdict> {
    let an = Analysis::new(g, caps);
    which
        .iter()
        .map(|t| verify_theorem(&an, t, flags))
        .collect()
}

fn merged(verdicts: &[Verdict]) -> Status {
    verdicts
        .iter()
        .fold(Status::NotApplicable, |s, v| s.merge(v.status))
}

fn cmd_verify(
    src: Source,
    which: &[Theorem],
    flags: Flags,
    global: &Global,
) -> Result<Report, CliError> {
    match src {
        Source::File(g) => {
            let vs = run_checks(&g, &flags, which, global.caps());
            let status = merged(&vs);
            let mut r = Report::new(status.exit_code() as u8);
            for v in &vs {
                verdict_lines(&mut r, "", v);
            }
            r.data = json!({ "status": status, "verdicts": vs });
            Ok(r)
        }
        Source::Entry(e) => {
            let vs = run_checks(&e.graph(), &e.flags, which, global.caps());
            let status = merged(&vs);
            let mut r = Report::new(status.exit_code() as u8);
            for v in &vs {
                verdict_lines(&mut r, &format!("{:<14} ", e.name), v);
            }
            r.data = json!({ "entry": e.name, "status": status, "verdicts": vs });
            Ok(r)
        }
        Source::All => Ok(run_catalog(which, global)),
    }
}

fn run_catalog(which: &[Theorem], global: &Global) -> Report {
    let start = Instant::now();
    let cat = catalog();
    let results: Vec<(String, Vec<Verdict>)> = cat
        .par_iter()
        .map(|e| {
            (
                e.name.clone(),
                run_checks(&e.graph(), &e.flags, which, global.caps()),
            )
        })
        .collect();
    let status = results
        .iter()
        .fold(Status::NotApplicable, |s, (_, vs)| s.merge(merged(vs)));
    let mut r = Report::new(status.exit_code() as u8);
    let mut counts = std::collections::BTreeMap::new();
    for (name, vs) in &results {
        for v in vs {
            verdict_lines(&mut r, &format!("{name:<14} "), v);
            *counts.entry(v.status.to_string()).or_insert(0usize) += 1;
        }
    }
    let tally: Vec<String> = counts.iter().map(|(k, n)| format!("{n} {k}")).collect();
    r.line(format!(
        "overall: {status} ({}) in {:.1?}",
        tally.join(", "),
        start.elapsed()
    ));
    let entries: Vec<_> = results
        .iter()
        .map(|(n, vs)| json!({ "entry": n, "status": merged(vs), "verdicts": vs }))
        .collect();
    r.data = json!({ "status": status, "entries": entries });
    r
}

fn cmd_homology(g: &Graph) -> Result<Report, CliError> {
    let h = homology(g);
    let h2 = h2_lattice(g);
    let l = twocycle::forms::two_cycle_lattice(g, SigmaMode::Plain);
    let agree = h2 == l.lattice;
    let mut r = Report::new(if agree { 0 } else { 1 });
    r.line(format!("betti numbers: {:?}", h.betti));
    for (i, t) in h.torsion.iter().enumerate() {
        if !t.is_empty() {
            let t: Vec<String> = t.iter().map(|x| x.to_string()).collect();
            r.line(format!("torsion in degree {i}: {}", t.join(", ")));
        }
    }
    r.line(format!(
        "ker d2 {} L(G) (rank {})",
        if agree { "equals" } else { "DIFFERS FROM" },
        l.rank()
    ));
    r.data = json!({ "homology": h, "rank": l.rank(), "h2_equals_lattice": agree });
    Ok(r)
}

fn cmd_crossing(g: &Graph, seed: u64, trials: usize, mode: SigmaMode) -> Result<Report, CliError> {
    use rand::{Rng, SeedableRng};
    let l = twocycle::forms::two_cycle_lattice(g, mode);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(trials);
    let mut asym = 0usize;
    for t in 0..trials as u64 {
        let dr = random_generic_drawing(g, seed.wrapping_add(t))
            .map_err(|e| CliError::Input(e.to_string()))?;
        let coeffs: Vec<i64> = (0..l.rank()).map(|_| rng.gen_range(-3..=3)).collect();
        let d = l.combine(&coeffs.iter().map(|&c| c.into()).collect::<Vec<_>>());
        values.push(kr_functional(g, &dr, &d).map_err(|e| CliError::Input(e.to_string()))?);
        for f in 0..g.m() {
            for h in 0..g.m() {
                if f != h && !g.adjacent(f, h) {
                    let a = signed_crossing(g, &dr, f, h)
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    let b = signed_crossing(g, &dr, h, f)
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    if a != -b {
                        asym += 1;
                    }
                }
            }
        }
    }
    let nonzero = values.iter().filter(|v| !v.is_zero()).count();
    let mut r = Report::new(if nonzero == 0 && asym == 0 { 0 } else { 1 });
    r.line(format!("{trials} drawings, L^{mode} rank {}", l.rank()));
    r.line(format!(
        "nonzero kr values: {nonzero}; antisymmetry violations: {asym}"
    ));
    r.data = json!({ "mode": mode, "seed": seed, "trials": trials, "values": values, "antisymmetry_violations": asym });
    Ok(r)
}

fn cmd_check(path: &Path, caps: Caps) -> Result<Report, CliError> {
    let text = read(&path.to_string_lossy())?;
    let cert: Certificate = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let c = match check_certificate(&cert, &caps) {
        Ok(c) => c,
        Err(ModuleError::Truncated(t)) => return Err(CliError::Truncated(t)),
        Err(e) => twocycle::modules::CertificateCheck {
            accepted: false,
            reason: e.to_string(),
        },
    };
    let mut r = Report::new(if c.accepted { 0 } else { 1 });
    r.line(format!(
        "{}: {}",
        if c.accepted { "accepted" } else { "rejected" },
        c.reason
    ));
    r.data = json!(c);
    Ok(r)
}

fn cmd_catalog_list() -> Report {
    let mut r = Report::new(0);
    let cat = catalog();
    for e in &cat {
        let g = e.graph();
        let kc = e
            .kuratowski_connected
            .map_or("?".to_string(), |b| b.to_string());
        r.line(format!(
            "{:<14} n={:<3} m={:<3} planar={:<5} petersen={:<5} kc={:<5} {}",
            e.name,
            g.n(),
            g.m(),
            e.flags.planar.map_or("?".into(), |b: bool| b.to_string()),
            e.flags.in_petersen_family_minor,
            kc,
            e.notes
        ));
    }
    r.data = json!(cat);
    r
}

fn run(cli: &Cli) -> Result<Report, CliError> {
    let caps = cli.global.caps();
    match &cli.command {
        Command::Rank { graph, mode } => cmd_rank(&single_graph(&graph.graph)?, *mode, caps),
        Command::Generators {
            graph,
            mode,
            families,
        } => cmd_generators(&single_graph(&graph.graph)?, *mode, families, caps),
        Command::Decompose {
            graph,
            form,
            mode,
            families,
            certificate,
        } => cmd_decompose(
            &single_graph(&graph.graph)?,
            form,
            *mode,
            families,
            certificate.as_ref(),
            caps,
        ),
        Command::Verify {
            graph,
            theorem,
            planar,
            linkless,
            petersen_family,
        } => {
            let flags = Flags {
                planar: *planar,
                in_petersen_family_minor: *petersen_family,
                linkless: *linkless,
            };
            cmd_verify(
                source(&graph.graph)?,
                &theorems(theorem)?,
                flags,
                &cli.global,
            )
        }
        Command::Homology { graph } => cmd_homology(&single_graph(&graph.graph)?),
        Command::Crossing {
            graph,
            seed,
            trials,
            mode,
        } => cmd_crossing(&single_graph(&graph.graph)?, *seed, *trials, *mode),
        Command::CheckCertificate { file } => cmd_check(file, caps),
        Command::Catalog {
            action: CatalogAction::List,
        } => Ok(cmd_catalog_list()),
        Command::Catalog {
            action: CatalogAction::RunAll { theorem },
        } => Ok(run_catalog(&theorems(theorem)?, &cli.global)),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            r.print(cli.global.output);
            ExitCode::from(r.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
