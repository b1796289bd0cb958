use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use silting_core::exact::BoundQuiverAlgebra;
use silting_core::group::{
    b_generators, invariants, pi1_nerve, presentation_from_poset, rewrite_intervals, tietze_simplify,
    with_cover_identifications, FiniteGroup, GroupInvariants, GroupPresentation,
};
use silting_core::model::interval::IntervalModel;
use silting_core::model::silt::explore_partial;
use silting_core::model::tabulated::TabulatedModel;
use silting_core::model::twoterm::{TwoTermModel, TwoTermOptions};
use silting_core::model::{explore_silt_poset, Handle, SiltingPoset};
use silting_core::picture::{build_picture_category, PictureCategory, PictureOptions};
use silting_core::reduction::{validate_zero_auslander, WitnessConfig};
use silting_core::Error;

/// Silting posets, picture categories and picture groups of finite
/// 0-Auslander categories.
#[derive(Parser)]
#[command(name = "silting", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the 0-Auslander axioms.
    Validate {
        #[command(flatten)]
        run: RunConfig,
        /// Skip the enough-injectives check.
        #[arg(long)]
        no_injectives: bool,
    },
    /// Explore the silting poset by mutation.
    SiltPoset {
        #[command(flatten)]
        run: RunConfig,
    },
    /// Build the picture category.
    Picture {
        #[command(flatten)]
        run: RunConfig,
    },
    /// Present the picture group along both routes and compare invariants.
    Picgroup {
        #[command(flatten)]
        run: RunConfig,
        /// Target groups for homomorphism counts: Z<n> or S<n>.
        #[arg(long, value_delimiter = ',', default_value = "Z2,Z3,S3")]
        targets: Vec<String>,
        /// Partial assignments visited per homomorphism count.
        #[arg(long, default_value_t = 1 << 24, value_parser = clap::value_parser!(u64).range(1..))]
        hom_budget: u64,
        /// Generator eliminations per Tietze run.
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        tietze_budget: u64,
    },
}

#[derive(Args)]
struct RunConfig {
    /// Algebra file (two-term) or table (tabulated, `.json` or text).
    input: Option<PathBuf>,
    /// two-term | interval:<n> | tabulated
    #[arg(long, default_value = "two-term")]
    backend: String,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    threads: Option<usize>,
    /// Attach witnesses and rewriting certificates to JSON output.
    #[arg(long)]
    certificates: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the document here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest silting poset explored.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    poset_budget: u64,
    /// Largest multiplicity tried in approximation searches.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    witness_bound: u64,
    /// Largest multisets extended while closing a two-term registry.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    closure_size: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Dot,
    Json,
    Text,
}

/// A finished command: the document and the exit code it maps to.
struct Outcome {
    doc: String,
    code: u8,
}

enum Failure {
    Input(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Lib(Error::MalformedSpec { .. } | Error::InfiniteDimensional(_)) => 2,
            Failure::Lib(Error::BudgetExceeded(_) | Error::HomCountBudgetExceeded(_)) => 3,
            Failure::Lib(Error::UndecidedIdentity(..)) => 4,
            Failure::Lib(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Input(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

type Res<T> = Result<T, Failure>;

fn load(run: &RunConfig) -> Res<Handle> {
    let read = |what: &str| -> Res<(String, String)> {
        let path = run.input.as_ref().ok_or_else(|| Failure::Input(format!("the {what} backend needs an input file")))?;
        let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        Ok((name, text))
    };
    match run.backend.as_str() {
        "two-term" => {
            let (name, text) = read("two-term")?;
            let alg = BoundQuiverAlgebra::parse(&text)?;
            let opts = TwoTermOptions { closure_size: run.closure_size as usize, ..TwoTermOptions::default() };
            Ok(Arc::new(TwoTermModel::with_options(alg, opts)?.with_name(format!("per({name})"))))
        }
        "tabulated" => {
            let (name, text) = read("tabulated")?;
            let is_json = run.input.as_ref().is_some_and(|p| p.extension().is_some_and(|e| e == "json"));
            let m = if is_json { TabulatedModel::from_json(&name, &text)? } else { TabulatedModel::parse(&name, &text)? };
            Ok(Arc::new(m))
        }
        b => {
            let n = b
                .strip_prefix("interval:")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| Failure::Input(format!("unknown backend {b:?}")))?;
            if run.input.is_some() {
                return Err(Failure::Input("the interval backend takes no input file".into()));
            }
            Ok(Arc::new(IntervalModel::new(n)))
        }
    }
}

fn picture_options(run: &RunConfig) -> PictureOptions {
    PictureOptions { witness: WitnessConfig { bound: run.witness_bound as usize, ..WitnessConfig::default() } }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json values serialize") + "\n"
}

fn unsupported(cmd: &str, f: Format) -> Failure {
    Failure::Input(format!("{cmd} has no {} output", if f == Format::Dot { "dot" } else { "such" }))
}

fn validate(run: &RunConfig, no_injectives: bool) -> Res<Outcome> {
    let model = load(run)?;
    let report = validate_zero_auslander(model.as_ref(), !no_injectives);
    let doc = match run.format {
        Format::Text => report.to_text(),
        Format::Json => {
            let mut v = serde_json::to_value(&report).expect("report serializes");
            v["schema"] = json!(1);
            v["passed"] = json!(report.passed());
            pretty(&v)
        }
        f => return Err(unsupported("validate", f)),
    };
    Ok(Outcome { doc, code: if report.passed() { 0 } else { 1 } })
}

fn poset_doc(model: &Handle, poset: &SiltingPoset, format: Format) -> String {
    let m = model.as_ref();
    let label = |i: usize| poset.nodes[i].iter().map(|&x| m.label(x)).collect::<Vec<_>>().join("+");
    let partial = !poset.complete;
    match format {
        Format::Dot => {
            let dot = poset.to_dot(m);
            if partial {
                format!("// partial\n{dot}")
            } else {
                dot
            }
        }
        Format::Json => pretty(&json!({
            "schema": 1,
            "model": m.name(),
            "partial": partial,
            "nodes": (0..poset.len()).map(label).collect::<Vec<_>>(),
            "hasse": poset.hasse,
            "max": (!partial).then_some(poset.max),
            "min": (!partial).then_some(poset.min),
        })),
        Format::Text => {
            let mut s = format!("model {}\n{} silting subcategories{}\n", m.name(), poset.len(), if partial { " (partial)" } else { "" });
            for i in 0..poset.len() {
                let mark = if partial {
                    ""
                } else if i == poset.max { "  max" } else if i == poset.min { "  min" } else { "" };
                s += &format!("{i}: {}{mark}\n", label(i));
            }
            for (u, l) in &poset.hasse {
                s += &format!("{u} > {l}\n");
            }
            s
        }
    }
}

fn silt_poset(run: &RunConfig) -> Res<Outcome> {
    let model = load(run)?;
    let budget = run.poset_budget as usize;
    match explore_silt_poset(model.as_ref(), budget) {
        Ok(p) => Ok(Outcome { doc: poset_doc(&model, &p, run.format), code: 0 }),
        Err(e @ Error::BudgetExceeded(_)) => {
            let p = explore_partial(model.as_ref(), budget)?;
            eprintln!("error: {e}");
            Ok(Outcome { doc: poset_doc(&model, &p, run.format), code: 3 })
        }
        Err(e) => Err(e.into()),
    }
}

fn picture_text(cat: &PictureCategory) -> String {
    let mut s = format!("model {}\n{} objects, {} morphisms\n", cat.model().name(), cat.objects.len(), cat.morphisms.len());
    for o in &cat.objects {
        s += &format!("object {}\n", o.label);
    }
    for f in (0..cat.morphisms.len()).filter(|&f| !cat.morphisms[f].is_identity()) {
        s += &format!("{}\n", cat.describe_morphism(f));
    }
    s
}

fn picture(run: &RunConfig) -> Res<Outcome> {
    let model = load(run)?;
    let cat = build_picture_category(&model, picture_options(run))?;
    let doc = match run.format {
        Format::Dot => cat.to_dot(),
        Format::Json => pretty(&cat.to_json(run.certificates)),
        Format::Text => picture_text(&cat),
    };
    Ok(Outcome { doc, code: 0 })
}

struct Route {
    presentation: GroupPresentation,
    simplified: GroupPresentation,
    log: Value,
    invariants: GroupInvariants,
}

fn route(p: &GroupPresentation, targets: &[FiniteGroup], hom_budget: u64, tietze_budget: u64) -> Res<Route> {
    let t = tietze_simplify(p, tietze_budget as usize)?;
    let invariants = invariants(&t.presentation, targets, hom_budget)?;
    Ok(Route {
        presentation: p.clone(),
        log: json!({ "moves": t.log, "exhausted": t.exhausted }),
        simplified: t.presentation,
        invariants,
    })
}

fn route_json(r: &Route) -> Value {
    json!({
        "presentation": r.presentation.to_json(),
        "simplified": r.simplified.to_json(),
        "tietze": r.log,
        "invariants": r.invariants,
    })
}

fn picgroup(run: &RunConfig, targets: &[String], hom_budget: u64, tietze_budget: u64) -> Res<Outcome> {
    let model = load(run)?;
    let targets: Vec<FiniteGroup> = targets.iter().map(|t| FiniteGroup::parse(t)).collect::<Result<_, _>>()?;
    let budget = run.poset_budget as usize;
    let poset = explore_silt_poset(model.as_ref(), budget)?;
    let pp = presentation_from_poset(&poset)?;
    let cat = build_picture_category(&model, picture_options(run))?;
    let nerve = pi1_nerve(&cat)?;
    let b = b_generators(&cat, budget)?;
    let rewrites = rewrite_intervals(&pp, &poset)?;
    let poset_route = route(&pp.presentation, &targets, hom_budget, tietze_budget)?;
    let nerve_route = route(&nerve.presentation, &targets, hom_budget, tietze_budget)?;
    let identified = route(&with_cover_identifications(&pp, &b)?, &targets, hom_budget, tietze_budget)?;
    let agreement = poset_route.invariants == nerve_route.invariants;
    let identified_agreement = identified.invariants == nerve_route.invariants;
    let b_labels: Vec<&str> = b.objects.iter().map(|&o| cat.object_label(o)).collect();
    let doc = match run.format {
        Format::Json => {
            let mut v = json!({
                "schema": 1,
                "model": model.name(),
                "poset_route": route_json(&poset_route),
                "nerve_route": route_json(&nerve_route),
                "agreement": agreement,
                "identified_route": route_json(&identified),
                "identified_agreement": identified_agreement,
                "b_objects": b_labels,
                "rewriting_verified": b.passed(),
            });
            if run.certificates {
                v["certificates"] = json!({ "intervals": rewrites, "b_rewritings": b.rewritings, "tree": nerve.tree });
            }
            pretty(&v)
        }
        Format::Text => {
            let mut s = format!("model {}\n", model.name());
            for (name, r) in [("poset route", &poset_route), ("nerve route", &nerve_route), ("identified poset route", &identified)] {
                s += &format!("{name}:\n{}", indent(&r.simplified.to_text()));
                s += &format!("  abelianization {}\n", r.invariants.abelianization.describe());
                for (g, c) in &r.invariants.hom_counts {
                    s += &format!("  hom to {g}: {c}\n");
                }
            }
            s += &format!("B objects: {}\n", b_labels.join(" "));
            s += &format!("rewriting verified: {}\n", b.passed());
            s += &format!("agreement: {agreement}\n");
            s += &format!("identified agreement: {identified_agreement}\n");
            s
        }
        f => return Err(unsupported("picgroup", f)),
    };
    Ok(Outcome { doc, code: if agreement && b.passed() { 0 } else { 1 } })
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("  {l}\n")).collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = match &cli.command {
        Command::Validate { run, .. } | Command::SiltPoset { run } | Command::Picture { run } | Command::Picgroup { run, .. } => run,
    };
    if let Some(n) = run.threads {
        silting_core::par::set_threads(n);
    }
    let result = match &cli.command {
        Command::Validate { run, no_injectives } => validate(run, *no_injectives),
        Command::SiltPoset { run } => silt_poset(run),
        Command::Picture { run } => picture(run),
        Command::Picgroup { run, targets, hom_budget, tietze_budget } => picgroup(run, targets, *hom_budget, *tietze_budget),
    };
    match result {
        Ok(out) => {
            let written = match &run.out {
                Some(p) => fs::write(p, &out.doc),
                None => std::io::stdout().write_all(out.doc.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
