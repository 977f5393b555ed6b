use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use symrem::cayley::{self, GreenOutcome};
use symrem::cayley_hyper::{self, CayleyHypergraphInstance};
use symrem::format::{self, AnyHypergraph, EdgeJson, FormatError, InstanceSpec};
use symrem::groups::{symmetric_group_3, Element, FiniteGroup, GroupAction};
use symrem::hypergraph::{self, render_ratio, Hypergraph};
use symrem::removal::{self, Strategy};

#[derive(Parser)]
#[command(name = "symrem", version, about = "Removal sets, symmetrization and Cayley (hyper)graph pipelines")]
struct Cli {
    /// Backtracking node budget for each search.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Count homomorphisms from a template into a graph.
    Count {
        #[arg(long)]
        template: PathBuf,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Find a removal set, optionally symmetrized under an automorphism group.
    Remove {
        #[arg(long)]
        template: PathBuf,
        #[arg(long)]
        graph: PathBuf,
        /// exact, greedy, or external (requires --removal)
        #[arg(long, default_value = "exact")]
        strategy: Strategy,
        /// Generators of an automorphism group of the graph.
        #[arg(long)]
        action: Option<PathBuf>,
        /// Certificate or report whose removal set is checked instead of searched.
        #[arg(long)]
        removal: Option<PathBuf>,
        /// Also write the final certificate to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cayley graphs and solutions of ab = c.
    Cayley {
        #[command(subcommand)]
        command: CayleyCommand,
    },
    /// Progression instances over cyclic products.
    Ap {
        #[command(subcommand)]
        command: ApCommand,
    },
    /// General Cayley hypergraph instances.
    Hyper {
        #[command(subcommand)]
        command: HyperCommand,
    },
    /// Randomized checks of the counting identities and pipelines.
    Check {
        #[arg(long, default_value_t = 20)]
        rounds: usize,
    },
}

#[derive(Args)]
struct CayleyArgs {
    #[arg(long)]
    group: PathBuf,
    /// Connection set, e.g. `1,2` or a JSON list.
    #[arg(long, allow_hyphen_values = true)]
    set: String,
}

#[derive(Subcommand)]
enum CayleyCommand {
    Verify {
        #[command(flatten)]
        args: CayleyArgs,
    },
    Shrink {
        #[command(flatten)]
        args: CayleyArgs,
        #[arg(long, default_value = "exact")]
        strategy: Strategy,
    },
    /// Write the Cayley graph in the hypergraph format.
    Build {
        #[command(flatten)]
        args: CayleyArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ApArgs {
    /// Moduli of the cyclic product, e.g. `5` or `2,3`.
    #[arg(long)]
    moduli: String,
    #[arg(long)]
    t: Option<usize>,
    /// A JSON list of level sets, or an ap-family instance file.
    #[arg(long)]
    sets: PathBuf,
}

#[derive(Subcommand)]
enum ApCommand {
    Verify {
        #[command(flatten)]
        args: ApArgs,
    },
    Shrink {
        #[command(flatten)]
        args: ApArgs,
        #[arg(long, default_value = "exact")]
        strategy: Strategy,
    },
}

#[derive(Args)]
struct HyperArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Group for ap-family instances that do not name one.
    #[arg(long)]
    moduli: Option<String>,
}

#[derive(Subcommand)]
enum HyperCommand {
    /// Write the instance's hypergraph in the hypergraph format.
    Build {
        #[command(flatten)]
        args: HyperArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Shrink the level sets until the template no longer maps in.
    Shrink {
        #[command(flatten)]
        args: HyperArgs,
        /// Defaults to the progression template for ap-family instances.
        #[arg(long)]
        template: Option<PathBuf>,
        #[arg(long, default_value = "exact")]
        strategy: Strategy,
    },
}

enum Failure {
    Input(String),
    Budget(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Budget(_) => 3,
        }
    }
}

impl From<symrem::Error> for Failure {
    fn from(e: symrem::Error) -> Self {
        match e {
            symrem::Error::BudgetExceeded { .. } | symrem::Error::CapExceeded { .. } => Failure::Budget(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        match e {
            FormatError::Invalid { source, field } if matches!(source, symrem::Error::BudgetExceeded { .. }) => {
                Failure::Budget(format!("{field}: {source}"))
            }
            e => Failure::Input(e.to_string()),
        }
    }
}

type Outcome<T> = Result<T, Failure>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Verdict {
    Ok,
    /// An identity or certificate check did not hold.
    Falsified,
    /// The run completed but the supplied input was rejected.
    Rejected,
}

/// What a command computed: structured fields plus the text rendering.
struct Output {
    result: Map<String, Value>,
    lines: Vec<String>,
    verdict: Verdict,
}

impl Output {
    fn new() -> Self {
        Output { result: Map::new(), lines: Vec::new(), verdict: Verdict::Ok }
    }

    fn field(&mut self, key: &str, value: impl Into<Value>) {
        self.result.insert(key.to_string(), value.into());
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    fn require(&mut self, ok: bool) {
        if !ok && self.verdict == Verdict::Ok {
            self.verdict = Verdict::Falsified;
        }
    }
}

struct Inputs(Vec<Value>);

impl Inputs {
    fn read(&mut self, name: &str, path: &Path) -> Outcome<String> {
        let bytes = fs::read(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
        self.0.push(json!({
            "name": name,
            "path": path.display().to_string(),
            "sha256": format!("{:x}", Sha256::digest(&bytes)),
        }));
        String::from_utf8(bytes).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }
}

fn check(ok: bool) -> &'static str {
    if ok {
        "✓"
    } else {
        "✗"
    }
}

fn element_text(group: &FiniteGroup, e: Element) -> String {
    match group.moduli() {
        Some([_]) => group.residues(e)[0].to_string(),
        Some(_) => {
            let r: Vec<String> = group.residues(e).iter().map(u64::to_string).collect();
            format!("({})", r.join(", "))
        }
        None => match group.label(e) {
            symrem::Label::Str(s) => s.clone(),
            l => l.to_string(),
        },
    }
}

fn set_text(group: &FiniteGroup, set: &BTreeSet<Element>) -> String {
    let items: Vec<String> = set.iter().map(|&e| element_text(group, e)).collect();
    format!("{{{}}}", items.join(", "))
}

fn parse_moduli(text: &str) -> Outcome<FiniteGroup> {
    let moduli = text
        .split(',')
        .map(|m| m.trim().parse::<u64>().map_err(|_| Failure::Input(format!("--moduli: bad modulus {m:?}"))))
        .collect::<Outcome<Vec<_>>>()?;
    Ok(FiniteGroup::cyclic_product(&moduli)?)
}

fn write_out(path: &Path, value: &Value) -> Outcome<()> {
    let text = serde_json::to_string_pretty(value).expect("json serializes");
    fs::write(path, text + "\n").map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn cmd_count(inputs: &mut Inputs, template: &Path, graph: &Path, budget: Option<u64>) -> Outcome<Output> {
    let f = format::parse_hypergraph(&inputs.read("template", template)?)?;
    let g = format::parse_hypergraph(&inputs.read("graph", graph)?)?;
    let count = match (&f, &g) {
        (AnyHypergraph::Directed(f), AnyHypergraph::Directed(g)) => hypergraph::count_homomorphisms(f, g, budget)?,
        (AnyHypergraph::Partite(f), AnyHypergraph::Partite(g)) => hypergraph::count_homomorphisms(f, g, budget)?,
        _ => return Err(kind_mismatch(&f, &g)),
    };
    let mut out = Output::new();
    out.field("count", count.count.to_string());
    out.field("total_maps", count.total_maps.to_string());
    out.field("density", render_ratio(&count.density));
    out.field("nodes", count.nodes);
    out.line(format!("count {}", count.count));
    out.line(format!("density {}", render_ratio(&count.density)));
    Ok(out)
}

fn kind_mismatch(f: &AnyHypergraph, g: &AnyHypergraph) -> Failure {
    Failure::Input(format!("template is {} but graph is {}", f.kind(), g.kind()))
}

struct RemoveArgs<'a> {
    strategy: Strategy,
    action: Option<&'a GroupAction>,
    removal: Option<&'a str>,
    budget: Option<u64>,
}

fn run_remove<H: EdgeJson>(template: &H, graph: &H, args: RemoveArgs<'_>, out: &mut Output) -> Outcome<Value> {
    let raw = match (args.strategy, args.removal) {
        (Strategy::External, Some(text)) => {
            let set = format::parse_removal_set(graph, text)?;
            removal::certify_external(template, graph, set, args.budget)?
        }
        (Strategy::External, None) => return Err(Failure::Input("--strategy external needs --removal".into())),
        (_, Some(_)) => return Err(Failure::Input("--removal is only used with --strategy external".into())),
        (s, None) => removal::find_removal(template, graph, s, args.budget)?,
    };
    let raw_json = format::certificate_to_json(graph, &raw);
    out.field("certificate", raw_json.clone());
    out.line(format!("strategy {}", raw.strategy));
    out.line(format!("removal set ({} tuples):", raw.removed_count));
    for e in &raw.removal_set {
        out.line(format!("  {}", graph.edge_to_json(e)));
    }
    out.line(format!("achieved epsilon {}", render_ratio(&raw.achieved_epsilon)));
    out.line(format!("free after removal {}", check(raw.freeness_checked)));
    if !raw.freeness_checked {
        if raw.strategy == Strategy::External {
            out.verdict = Verdict::Rejected;
        } else {
            out.require(false);
        }
    }
    let Some(action) = args.action else {
        return Ok(raw_json);
    };
    let sym = removal::certify_symmetrized(template, graph, &raw, action, "supplied action", args.budget)?;
    let sym_json = format::symmetrized_to_json(graph, &sym);
    out.field("symmetrized", sym_json);
    let c = &sym.certificate;
    out.line(format!("symmetrized removal set ({} tuples):", c.removed_count));
    for e in &c.removal_set {
        out.line(format!("  {}", graph.edge_to_json(e)));
    }
    out.line(format!("size {} ≤ {}·{} {}", c.removed_count, sym.factor, sym.raw_count, check(sym.size_bound_holds)));
    out.line(format!("invariant {}", check(sym.invariant)));
    out.line(format!("free after removal {}", check(c.freeness_checked)));
    out.line(format!("generators are automorphisms of the remainder {}", check(sym.complement_symmetric)));
    out.line(format!("achieved epsilon {}", render_ratio(&c.achieved_epsilon)));
    // an external set that is not a removal set is an input problem, not a falsification
    if out.verdict != Verdict::Rejected {
        out.require(sym.all_checks_pass());
    }
    Ok(format::symmetrized_to_json(graph, &sym))
}

#[allow(clippy::too_many_arguments)]
fn cmd_remove(
    inputs: &mut Inputs,
    template: &Path,
    graph: &Path,
    strategy: Strategy,
    action: Option<&Path>,
    removal_file: Option<&Path>,
    out_path: Option<&Path>,
    budget: Option<u64>,
) -> Outcome<Output> {
    let f = format::parse_hypergraph(&inputs.read("template", template)?)?;
    let g = format::parse_hypergraph(&inputs.read("graph", graph)?)?;
    let action = match action {
        Some(p) => Some(format::parse_action(&g, &inputs.read("action", p)?)?),
        None => None,
    };
    let removal_text = match removal_file {
        Some(p) => Some(inputs.read("removal", p)?),
        None => None,
    };
    let args = RemoveArgs { strategy, action: action.as_ref(), removal: removal_text.as_deref(), budget };
    let mut out = Output::new();
    let cert = match (&f, &g) {
        (AnyHypergraph::Directed(f), AnyHypergraph::Directed(g)) => run_remove(f, g, args, &mut out)?,
        (AnyHypergraph::Partite(f), AnyHypergraph::Partite(g)) => run_remove(f, g, args, &mut out)?,
        _ => return Err(kind_mismatch(&f, &g)),
    };
    if let Some(p) = out_path {
        write_out(p, &cert)?;
    }
    Ok(out)
}

fn cayley_inputs(inputs: &mut Inputs, args: &CayleyArgs) -> Outcome<(FiniteGroup, BTreeSet<Element>)> {
    let group = format::parse_group(&inputs.read("group", &args.group)?)?;
    let set = format::parse_element_list(&group, &args.set)?;
    Ok((group, set))
}

fn cmd_cayley(inputs: &mut Inputs, command: &CayleyCommand, budget: Option<u64>) -> Outcome<Output> {
    let mut out = Output::new();
    match command {
        CayleyCommand::Verify { args } => {
            let (group, set) = cayley_inputs(inputs, args)?;
            let id = cayley::verify_triangle_identity(&group, &set, budget)?;
            out.field("group", group.to_string());
            out.field("set", format::element_set_to_json(&group, &set));
            out.field("hom_count", id.hom_count.to_string());
            out.field("solution_count", id.solution_count);
            out.field("order", id.order);
            out.field("holds", id.holds);
            out.line(format!("group {} set {}", group, set_text(&group, &set)));
            out.line(format!("solutions of ab = c in S: {}", id.solution_count));
            out.line(format!("{} = {}·{} {}", id.hom_count, id.order, id.solution_count, check(id.holds)));
            out.require(id.holds);
        }
        CayleyCommand::Shrink { args, strategy } => {
            let (group, set) = cayley_inputs(inputs, args)?;
            let o = cayley::green_pipeline(&group, &set, *strategy, budget)?;
            let cy = cayley::cayley_graph(&group, &set)?;
            let sound = o.sound(group.order());
            green_report(&mut out, &group, &o, cy.graph());
            out.require(sound);
        }
        CayleyCommand::Build { args, out: path } => {
            let (group, set) = cayley_inputs(inputs, args)?;
            let cy = cayley::cayley_graph(&group, &set)?;
            let graph = format::directed_to_json(cy.graph());
            out.line(format!("Cayley graph of {} with {} edges", group, cy.graph().edge_count()));
            if let Some(p) = path {
                write_out(p, &graph)?;
            } else {
                out.line(graph.to_string());
            }
            out.field("graph", graph);
        }
    }
    Ok(out)
}

fn green_report(
    out: &mut Output,
    group: &FiniteGroup,
    o: &GreenOutcome,
    graph: &symrem::hypergraph::DirectedHypergraph,
) {
    out.field("group", group.to_string());
    out.field("initial_solutions", o.initial_solutions);
    out.field("shrink", format::element_set_to_json(group, &o.shrink));
    out.field("remaining", format::element_set_to_json(group, &o.remaining));
    out.field("remaining_solutions", o.remaining_solutions);
    out.field("raw", format::certificate_to_json(graph, &o.raw));
    out.field("symmetrized", format::symmetrized_to_json(graph, &o.symmetrized));
    out.line(format!("group {}", group));
    out.line(format!("initial solutions {}", o.initial_solutions));
    out.line(format!("raw removal {} edges ({})", o.raw.removed_count, o.raw.strategy));
    let c = &o.symmetrized.certificate;
    out.line(format!(
        "symmetrized removal {} ≤ 3·{} {}",
        c.removed_count,
        o.raw.removed_count,
        check(o.symmetrized.size_bound_holds)
    ));
    out.line(format!("S″ = {}", set_text(group, &o.shrink)));
    out.line(format!("remaining set {}", set_text(group, &o.remaining)));
    out.line(format!("remaining solutions {}", o.remaining_solutions));
}

fn ap_inputs(inputs: &mut Inputs, args: &ApArgs) -> Outcome<(FiniteGroup, usize, Vec<BTreeSet<Element>>)> {
    let group = parse_moduli(&args.moduli)?;
    let (file_t, sets) = format::parse_sets(&group, &inputs.read("sets", &args.sets)?)?;
    let t = match (args.t, file_t) {
        (Some(a), Some(b)) if a != b => {
            return Err(Failure::Input(format!("--t {a} disagrees with t = {b} in the sets file")))
        }
        (Some(t), _) | (None, Some(t)) => t,
        (None, None) => sets.len(),
    };
    Ok((group, t, sets))
}

fn sets_json(group: &FiniteGroup, sets: &[BTreeSet<Element>]) -> Value {
    Value::Array(sets.iter().map(|s| format::element_set_to_json(group, s)).collect())
}

fn cmd_ap(inputs: &mut Inputs, command: &ApCommand, budget: Option<u64>) -> Outcome<Output> {
    let mut out = Output::new();
    match command {
        ApCommand::Verify { args } => {
            let (group, t, sets) = ap_inputs(inputs, args)?;
            let r = cayley_hyper::verify_ap_correspondence(&group, t, &sets, budget)?;
            out.field("group", group.to_string());
            out.field("t", t);
            out.field("sets", sets_json(&group, &sets));
            out.field("ap_count", r.ap_count);
            out.field("hom_count", r.hom_count.to_string());
            out.field("multiplicity", r.multiplicity.to_string());
            out.field("consistent", r.consistent);
            out.line(format!("group {} t {}", group, t));
            out.line(format!("progressions {}", r.ap_count));
            out.line(format!("{} = {}·{} {}", r.hom_count, r.multiplicity, r.ap_count, check(r.consistent)));
            out.require(r.consistent);
        }
        ApCommand::Shrink { args, strategy } => {
            let (group, t, sets) = ap_inputs(inputs, args)?;
            let d = cayley_hyper::diagonal_pipeline(&group, t, sets.clone(), *strategy, budget)?;
            let sound = d.sound(group.order(), t);
            let inst = cayley_hyper::ap_instance(&group, t, sets, budget)?;
            out.field("initial_aps", d.initial_aps);
            out.field("remaining_aps", d.remaining_aps);
            shrink_report(&mut out, &inst, &d.outcome);
            out.line(format!("initial progressions {}", d.initial_aps));
            out.line(format!("remaining progressions {}", d.remaining_aps));
            out.require(sound);
        }
    }
    Ok(out)
}

fn shrink_report(out: &mut Output, inst: &CayleyHypergraphInstance, o: &cayley_hyper::ShrinkOutcome) {
    let group = inst.group();
    let graph = inst.graph();
    let fractions: Vec<String> = o.shrink_fractions(group.order()).iter().map(render_ratio).collect();
    out.field("group", group.to_string());
    out.field("shrink", sets_json(group, &o.shrink));
    out.field("remaining", sets_json(group, &o.remaining));
    out.field("shrink_fractions", fractions.clone());
    out.field("reconstruction_holds", o.reconstruction_holds);
    out.field("raw", format::certificate_to_json(graph, &o.raw));
    out.field("symmetrized", format::symmetrized_to_json(graph, &o.symmetrized));
    out.line(format!("group {} t {}", group, inst.parts()));
    let sym = &o.symmetrized;
    out.line(format!(
        "removal {} raw, {} symmetrized ≤ {}·{} {}",
        o.raw.removed_count,
        sym.certificate.removed_count,
        sym.factor,
        sym.raw_count,
        check(sym.size_bound_holds)
    ));
    for (i, (s, f)) in o.shrink.iter().zip(&fractions).enumerate() {
        out.line(format!("S″_{} = {}  fraction {}", i, set_text(group, s), f));
    }
    out.line(format!("rebuilt instance equals remainder {}", check(o.reconstruction_holds)));
}

fn hyper_instance(inputs: &mut Inputs, args: &HyperArgs, budget: Option<u64>) -> Outcome<CayleyHypergraphInstance> {
    let spec = format::parse_instance(&inputs.read("instance", &args.instance)?)?;
    let fallback = args.moduli.as_deref().map(parse_moduli).transpose()?;
    match spec {
        InstanceSpec::General { group, t, k, psi, sets, subgroup } => {
            Ok(cayley_hyper::build_instance(&group, t, k, psi, sets, subgroup, budget)?)
        }
        InstanceSpec::Ap { group, t, sets } => {
            let group = group
                .or(fallback)
                .ok_or_else(|| Failure::Input("ap-family instance without a group needs --moduli".into()))?;
            let sets = sets
                .iter()
                .enumerate()
                .map(|(i, s)| format::parse_element_set(&group, s, &format!("sets[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(cayley_hyper::ap_instance(&group, t, sets, budget)?)
        }
    }
}

fn cmd_hyper(inputs: &mut Inputs, command: &HyperCommand, budget: Option<u64>) -> Outcome<Output> {
    let mut out = Output::new();
    match command {
        HyperCommand::Build { args, out: path } => {
            let inst = hyper_instance(inputs, args, budget)?;
            let graph = format::partite_to_json(inst.graph());
            out.line(format!(
                "{}-partite {}-uniform hypergraph over {} with {} edges",
                inst.parts(),
                inst.arity(),
                inst.group(),
                inst.graph().edge_count()
            ));
            if let Some(p) = path {
                write_out(p, &graph)?;
            } else {
                out.line(graph.to_string());
            }
            out.field("graph", graph);
        }
        HyperCommand::Shrink { args, template, strategy } => {
            let inst = hyper_instance(inputs, args, budget)?;
            let template = match template {
                Some(p) => match format::parse_hypergraph(&inputs.read("template", p)?)? {
                    AnyHypergraph::Partite(f) => f,
                    AnyHypergraph::Directed(_) => return Err(Failure::Input("template must be partite".into())),
                },
                None => cayley_hyper::complete_partite_template(inst.parts())?,
            };
            let o = cayley_hyper::shrink_level_sets(&inst, &template, *strategy, budget)?;
            let sound = o.reconstruction_holds && o.symmetrized.all_checks_pass();
            shrink_report(&mut out, &inst, &o);
            out.require(sound);
        }
    }
    Ok(out)
}

fn random_subset(rng: &mut ChaCha8Rng, group: &FiniteGroup, skip_identity: bool) -> BTreeSet<Element> {
    group.elements().filter(|&e| !(skip_identity && e == group.identity()) && rng.gen_bool(0.5)).collect()
}

fn cmd_check(rounds: usize, seed: u64, budget: Option<u64>) -> Outcome<Output> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Output::new();
    let mut failures = Vec::new();
    let (mut triangle, mut ap, mut pipelines) = (0usize, 0usize, 0usize);
    for round in 0..rounds {
        let group =
            if round % 4 == 3 { symmetric_group_3() } else { FiniteGroup::cyclic_product(&[rng.gen_range(2..=10)])? };
        let set = random_subset(&mut rng, &group, true);
        let id = cayley::verify_triangle_identity(&group, &set, budget)?;
        triangle += 1;
        if !id.holds {
            failures.push(format!("triangle identity on {} {}", group, set_text(&group, &set)));
        }
        let o = cayley::green_pipeline(&group, &set, Strategy::Greedy, budget)?;
        pipelines += 1;
        if !o.sound(group.order()) {
            failures.push(format!("Cayley shrink on {} {}", group, set_text(&group, &set)));
        }

        let n = rng.gen_range(2..=5);
        let z = FiniteGroup::cyclic_product(&[n])?;
        let sets: Vec<_> = (0..3).map(|_| random_subset(&mut rng, &z, false)).collect();
        let r = cayley_hyper::verify_ap_correspondence(&z, 3, &sets, budget)?;
        ap += 1;
        if !r.consistent {
            failures.push(format!("progression correspondence on {} {}", z, sets_json(&z, &sets)));
        }
        let d = cayley_hyper::diagonal_pipeline(&z, 3, sets.clone(), Strategy::Greedy, budget)?;
        pipelines += 1;
        if !d.sound(n as usize, 3) {
            failures.push(format!("progression shrink on {} {}", z, sets_json(&z, &sets)));
        }
    }
    out.field("triangle_checks", triangle);
    out.field("correspondence_checks", ap);
    out.field("pipeline_checks", pipelines);
    out.field("failures", failures.clone());
    out.line(format!("triangle identity checks {triangle}"));
    out.line(format!("progression correspondence checks {ap}"));
    out.line(format!("pipeline checks {pipelines}"));
    out.line(format!("failures {} {}", failures.len(), check(failures.is_empty())));
    for f in &failures {
        out.line(format!("  {f}"));
    }
    out.require(failures.is_empty());
    Ok(out)
}

fn dispatch(cli: &Cli, inputs: &mut Inputs) -> Outcome<Output> {
    let budget = cli.budget;
    match &cli.command {
        Command::Count { template, graph } => cmd_count(inputs, template, graph, budget),
        Command::Remove { template, graph, strategy, action, removal, out } => cmd_remove(
            inputs,
            template,
            graph,
            *strategy,
            action.as_deref(),
            removal.as_deref(),
            out.as_deref(),
            budget,
        ),
        Command::Cayley { command } => cmd_cayley(inputs, command, budget),
        Command::Ap { command } => cmd_ap(inputs, command, budget),
        Command::Hyper { command } => cmd_hyper(inputs, command, budget),
        Command::Check { rounds } => cmd_check(*rounds, cli.seed, budget),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::iter::once("symrem".to_string()).chain(std::env::args().skip(1)).collect();
    let start = Instant::now();
    let mut inputs = Inputs(Vec::new());
    let result = dispatch(&cli, &mut inputs);
    let micros = start.elapsed().as_micros() as u64;
    let out = match result {
        Ok(out) => out,
        Err(f) => {
            let (Failure::Input(msg) | Failure::Budget(msg)) = &f;
            eprintln!("error: {msg}");
            return ExitCode::from(f.code());
        }
    };
    match cli.format {
        OutputFormat::Structured => {
            let report = json!({
                "command": echo.join(" "),
                "inputs": inputs.0,
                "result": out.result,
                "duration_us": micros,
            });
            println!("{}", serde_json::to_string_pretty(&report).expect("json serializes"));
        }
        OutputFormat::Text => {
            println!("command: {}", echo.join(" "));
            for i in &inputs.0 {
                println!(
                    "input {} {} sha256 {}",
                    i["name"].as_str().unwrap_or(""),
                    i["path"].as_str().unwrap_or(""),
                    i["sha256"].as_str().unwrap_or("")
                );
            }
            for l in &out.lines {
                println!("{l}");
            }
            println!("duration: {micros} µs");
        }
    }
    match out.verdict {
        Verdict::Ok => ExitCode::SUCCESS,
        Verdict::Falsified => {
            eprintln!("error: verification failed");
            ExitCode::from(1)
        }
        Verdict::Rejected => {
            eprintln!("error: the supplied set is not a removal set");
            ExitCode::from(2)
        }
    }
}
