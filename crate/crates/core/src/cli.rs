//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 3 instance too large for the
//! exhaustive solver, 4 an axiom check found a violation.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::axioms::{
    check_axiom_with, refutation_fixtures, search_counterexample_with, violation_fixtures, AlphaCondition, AxiomId,
    CheckConfig, GeneratorConfig, LambdaRange, RuleFamily, Verdict, VerdictStatus,
};
use crate::error::PbError;
use crate::format::{parse_instance, serialize_instance};
use crate::layers::{cost_worthy_layer, greedy_truncation_layer, WorthVector};
use crate::model::{Instance, NeedParameter, WeakRanking};
use crate::reductions::{from_beta_cc, from_subset_sum, from_vertex_cover, from_vertex_cover_with_alpha, Variant};
use crate::rules::{evaluate_rule, Outcome, RuleSpec, Strategy, UtilityFunction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_VIOLATED: i32 = 4;

/// What a CLI invocation printed and how it exited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "pbweak", version, about = "Participatory budgeting rules over weak rankings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compute all optimal budget sets of a rule.
    Solve(SolveArgs),
    /// Print the approval sets a layer derives from the rankings.
    Layer(LayerArgs),
    /// Check an axiom on an instance, on the built-in fixtures, or on random instances.
    CheckAxiom(CheckArgs),
    /// Generate a decision instance from a Subset Sum, Vertex Cover or β-CC instance.
    Gen(GenArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum RuleKind {
    Greedy,
    Costworthy,
    Needbased,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum UtilityArg {
    Card,
    Cost,
    Cover,
}

impl From<UtilityArg> for UtilityFunction {
    fn from(u: UtilityArg) -> Self {
        match u {
            UtilityArg::Card => UtilityFunction::Cardinality,
            UtilityArg::Cost => UtilityFunction::Cost,
            UtilityArg::Cover => UtilityFunction::Coverage,
        }
    }
}

#[derive(Args, Debug, Clone)]
struct RuleArgs {
    #[arg(long, value_enum)]
    rule: RuleKind,
    /// Utility function for the layered rules.
    #[arg(long = "f", value_enum)]
    f: Option<UtilityArg>,
    /// Worth vector, comma separated. Padded with its last entry or
    /// truncated to the number of projects.
    #[arg(long)]
    alpha: Option<String>,
    /// Need parameter, an integer or `p/q`.
    #[arg(long)]
    lambda: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum StrategyArg {
    Exhaustive,
    Dp,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[command(flatten)]
    rule: RuleArgs,
    #[arg(long, value_enum, default_value = "exhaustive")]
    strategy: StrategyArg,
    #[arg(long)]
    json: bool,
    file: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum LayerKind {
    Greedy,
    Costworthy,
}

#[derive(Args, Debug)]
struct LayerArgs {
    #[arg(long, value_enum)]
    kind: LayerKind,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    json: bool,
    file: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum AlphaCondArg {
    Any,
    Flat,
    NotFlat,
    GapBelowTwo,
    GapAtLeastTwo,
    FirstAtMostOne,
    FirstAboveOne,
}

impl From<AlphaCondArg> for AlphaCondition {
    fn from(a: AlphaCondArg) -> Self {
        match a {
            AlphaCondArg::Any => AlphaCondition::Any,
            AlphaCondArg::Flat => AlphaCondition::Flat,
            AlphaCondArg::NotFlat => AlphaCondition::NotFlat,
            AlphaCondArg::GapBelowTwo => AlphaCondition::GapBelowTwo,
            AlphaCondArg::GapAtLeastTwo => AlphaCondition::GapAtLeastTwo,
            AlphaCondArg::FirstAtMostOne => AlphaCondition::FirstAtMostOne,
            AlphaCondArg::FirstAboveOne => AlphaCondition::FirstAboveOne,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum LambdaRangeArg {
    Low,
    Middle,
    Top,
}

impl From<LambdaRangeArg> for LambdaRange {
    fn from(r: LambdaRangeArg) -> Self {
        match r {
            LambdaRangeArg::Low => LambdaRange::UpToOne,
            LambdaRangeArg::Middle => LambdaRange::Middle,
            LambdaRangeArg::Top => LambdaRange::Top,
        }
    }
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    axiom: String,
    #[command(flatten)]
    rule: RuleArgs,
    /// Check the built-in counterexample fixtures matching the rule.
    #[arg(long, conflicts_with_all = ["search", "file"])]
    fixtures: bool,
    /// Search random instances.
    #[arg(long, conflicts_with = "file")]
    search: bool,
    /// Number of applicable random instances to check.
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// With --search and no --alpha: constraint on sampled worth vectors.
    #[arg(long, value_enum, default_value = "any")]
    alpha_cond: AlphaCondArg,
    /// With --search and no --lambda: range of sampled need parameters.
    #[arg(long, value_enum)]
    lambda_range: Option<LambdaRangeArg>,
    #[arg(long, default_value_t = 8)]
    max_projects: usize,
    #[arg(long, default_value_t = 5)]
    max_agents: usize,
    #[arg(long)]
    json: bool,
    file: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Source {
    Subsetsum,
    Vertexcover,
    Betacc,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum VariantArg {
    Greedy,
    Costworthy,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Greedy => Variant::Greedy,
            VariantArg::Costworthy => Variant::CostWorthy,
        }
    }
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long = "from", value_enum)]
    from: Source,
    #[arg(long, value_enum, default_value = "greedy")]
    variant: VariantArg,
    /// Subset Sum values, comma separated.
    #[arg(long)]
    values: Option<String>,
    /// Subset Sum target.
    #[arg(long)]
    target: Option<u64>,
    /// Graph edges as `u-v` pairs, comma separated.
    #[arg(long)]
    edges: Option<String>,
    /// Cover size (Vertex Cover) or committee size (β-CC).
    #[arg(long)]
    k: Option<u64>,
    /// Leading worth vector entries for the cost-worthy Vertex Cover variant.
    #[arg(long)]
    alpha: Option<String>,
    /// Strict rankings separated by `;`, e.g. `x>y>z;y>z>x`.
    #[arg(long)]
    rankings: Option<String>,
    /// β-CC score bound.
    #[arg(long)]
    s: Option<u64>,
    /// Also solve the generated instance and print the answer.
    #[arg(long)]
    decide: bool,
}

enum Failure {
    Invalid(String),
    Capacity(String),
}

impl From<PbError> for Failure {
    fn from(e: PbError) -> Self {
        if e.is_capacity() {
            Failure::Capacity(e.to_string())
        } else {
            Failure::Invalid(e.to_string())
        }
    }
}

type CmdResult = std::result::Result<(i32, String), Failure>;

/// Runs the CLI on `argv` (including the program name) without touching the
/// process's stdout or exit status.
pub fn run_cli<I, T>(argv: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                CliOutput { code, stdout: text, stderr: String::new() }
            } else {
                CliOutput { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Layer(a) => layer(a),
        Command::CheckAxiom(a) => check(a),
        Command::Gen(a) => gen(a),
    };
    match result {
        Ok((code, stdout)) => CliOutput { code, stdout, stderr: String::new() },
        Err(Failure::Invalid(msg)) => {
            CliOutput { code: EXIT_INVALID, stdout: String::new(), stderr: format!("error: {msg}\n") }
        }
        Err(Failure::Capacity(msg)) => {
            CliOutput { code: EXIT_CAPACITY, stdout: String::new(), stderr: format!("error: {msg}\n") }
        }
    }
}

fn read_instance(path: &PathBuf) -> std::result::Result<Instance, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_instance(&text)?)
}

fn parse_list(text: &str, what: &str) -> std::result::Result<Vec<u64>, Failure> {
    text.split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| Failure::Invalid(format!("bad {what} entry `{}`", t.trim()))))
        .collect()
}

fn parse_alpha(text: &str) -> std::result::Result<WorthVector, Failure> {
    Ok(WorthVector::new(parse_list(text, "alpha")?)?)
}

fn parse_lambda(text: &str) -> std::result::Result<NeedParameter, Failure> {
    Ok(text.parse::<NeedParameter>()?)
}

fn require_f(args: &RuleArgs) -> std::result::Result<UtilityFunction, Failure> {
    args.f.map(Into::into).ok_or_else(|| Failure::Invalid("--f is required for layered rules".into()))
}

/// The rule described by the flags, without fitting α to an instance.
fn rule_spec(args: &RuleArgs) -> std::result::Result<RuleSpec, Failure> {
    Ok(match args.rule {
        RuleKind::Greedy => RuleSpec::greedy(require_f(args)?),
        RuleKind::Costworthy => {
            let alpha = args.alpha.as_deref().ok_or_else(|| Failure::Invalid("--alpha is required".into()))?;
            RuleSpec::cost_worthy(require_f(args)?, parse_alpha(alpha)?)
        }
        RuleKind::Needbased => {
            let lambda = args.lambda.as_deref().ok_or_else(|| Failure::Invalid("--lambda is required".into()))?;
            RuleSpec::need_based(parse_lambda(lambda)?)
        }
    })
}

fn outcome_json(outcome: &Outcome) -> serde_json::Value {
    json!({
        "optimal_value": outcome.optimal_value,
        "optimal_sets": outcome.optimal_sets,
        "winners": outcome.winners,
        "flags": { "non_enumerating": outcome.non_enumerating },
    })
}

fn fmt_winners(outcome: &Outcome) -> String {
    let w: Vec<&str> = outcome.winners.iter().map(|p| p.as_str()).collect();
    format!("{{{}}}", w.join(","))
}

fn solve(args: SolveArgs) -> CmdResult {
    let instance = read_instance(&args.file)?;
    let spec = rule_spec(&args.rule)?.adapted_to(&instance);
    let strategy = match args.strategy {
        StrategyArg::Exhaustive => Strategy::Exhaustive,
        StrategyArg::Dp => Strategy::DpIfAvailable,
    };
    let outcome = evaluate_rule(&instance, &spec, strategy)?;
    if args.json {
        return Ok((EXIT_OK, format!("{}\n", outcome_json(&outcome))));
    }
    let mut out = String::new();
    writeln!(out, "rule: {spec}").unwrap();
    writeln!(out, "optimal_value: {}", outcome.optimal_value).unwrap();
    writeln!(out, "optimal_sets:").unwrap();
    for s in &outcome.optimal_sets {
        writeln!(out, "{s}").unwrap();
    }
    writeln!(out, "winners: {}", fmt_winners(&outcome)).unwrap();
    if outcome.non_enumerating {
        writeln!(out, "non_enumerating: true").unwrap();
    }
    Ok((EXIT_OK, out))
}

fn layer(args: LayerArgs) -> CmdResult {
    let instance = read_instance(&args.file)?;
    let profile = match args.kind {
        LayerKind::Greedy => greedy_truncation_layer(&instance),
        LayerKind::Costworthy => {
            let alpha = args.alpha.as_deref().ok_or_else(|| Failure::Invalid("--alpha is required".into()))?;
            cost_worthy_layer(&instance, &parse_alpha(alpha)?.fitted_to(instance.num_projects()))?
        }
    };
    if args.json {
        return Ok((EXIT_OK, format!("{}\n", json!({ "approvals": profile.approvals() }))));
    }
    let mut out = String::new();
    for (i, a) in profile.approvals().iter().enumerate() {
        writeln!(out, "agent {}: {a}", i + 1).unwrap();
    }
    Ok((EXIT_OK, out))
}

fn verdict_code(status: VerdictStatus) -> i32 {
    if status == VerdictStatus::Violated {
        EXIT_VIOLATED
    } else {
        EXIT_OK
    }
}

fn verdict_text(out: &mut String, label: &str, v: &Verdict) {
    writeln!(out, "{label}: {} (trials {}, perturbations {})", v.status, v.trials, v.perturbations).unwrap();
    if let Some(w) = &v.witness {
        writeln!(out, "{w}").unwrap();
    }
}

fn verdict_json(label: &str, v: &Verdict) -> serde_json::Value {
    json!({
        "name": label,
        "status": v.status,
        "trials": v.trials,
        "perturbations": v.perturbations,
        "witness": v.witness.as_ref().map(|w| w.to_string()),
    })
}

fn same_rule_family(fixture: &RuleSpec, wanted: &RuleArgs) -> bool {
    let f = wanted.f.map(UtilityFunction::from);
    match (fixture, wanted.rule) {
        (RuleSpec::GreedyTruncation { f: u }, RuleKind::Greedy) => f.is_none_or(|f| f == *u),
        (RuleSpec::CostWorthy { f: u, .. }, RuleKind::Costworthy) => f.is_none_or(|f| f == *u),
        (RuleSpec::NeedBased { lambda }, RuleKind::Needbased) => match wanted.lambda.as_deref() {
            None => true,
            Some(text) => text.parse::<NeedParameter>().is_ok_and(|l| l == *lambda),
        },
        _ => false,
    }
}

fn check(args: CheckArgs) -> CmdResult {
    let axiom: AxiomId = args.axiom.parse()?;
    let mut out = String::new();
    let mut reports = Vec::new();
    let mut code = EXIT_OK;

    if args.fixtures {
        for fx in violation_fixtures()
            .into_iter()
            .chain(refutation_fixtures())
            .filter(|fx| fx.axiom == axiom && same_rule_family(&fx.spec, &args.rule))
        {
            let v = check_axiom_with(
                axiom,
                &fx.spec,
                &fx.instance,
                &CheckConfig { seed: args.seed, ..CheckConfig::default() },
            )?;
            code = code.max(verdict_code(v.status));
            verdict_text(&mut out, fx.name, &v);
            reports.push(verdict_json(fx.name, &v));
        }
        if reports.is_empty() {
            writeln!(out, "no fixture for {axiom} and this rule").unwrap();
        }
    } else if args.search {
        let family = match args.rule.rule {
            RuleKind::Greedy => RuleFamily::Greedy(require_f(&args.rule)?),
            RuleKind::Costworthy => match args.rule.alpha {
                Some(_) => RuleFamily::Fixed(rule_spec(&args.rule)?),
                None => RuleFamily::CostWorthy(require_f(&args.rule)?, args.alpha_cond.into()),
            },
            RuleKind::Needbased => match (&args.rule.lambda, args.lambda_range) {
                (Some(_), None) => RuleFamily::Fixed(rule_spec(&args.rule)?),
                (None, Some(r)) => RuleFamily::NeedBased(r.into()),
                _ => return Err(Failure::Invalid("give exactly one of --lambda and --lambda-range".into())),
            },
        };
        let gen = GeneratorConfig {
            max_projects: args.max_projects,
            max_agents: args.max_agents,
            ..GeneratorConfig::default()
        };
        let v = search_counterexample_with(axiom, &family, &gen, args.trials, args.seed, &CheckConfig::light())?;
        code = verdict_code(v.status);
        verdict_text(&mut out, "search", &v);
        reports.push(verdict_json("search", &v));
    } else {
        let path = args
            .file
            .as_ref()
            .ok_or_else(|| Failure::Invalid("give an instance file, --fixtures or --search".into()))?;
        let instance = read_instance(path)?;
        let spec = rule_spec(&args.rule)?.adapted_to(&instance);
        let v = check_axiom_with(axiom, &spec, &instance, &CheckConfig { seed: args.seed, ..CheckConfig::default() })?;
        code = verdict_code(v.status);
        let label = path.display().to_string();
        verdict_text(&mut out, &label, &v);
        reports.push(verdict_json(&label, &v));
    }

    if args.json {
        out = format!("{}\n", json!({ "axiom": axiom.to_string(), "reports": reports }));
    }
    Ok((code, out))
}

fn parse_edges(text: &str) -> std::result::Result<Vec<(u32, u32)>, Failure> {
    text.split(',')
        .map(|pair| {
            let bad = || Failure::Invalid(format!("bad edge `{}`", pair.trim()));
            let (u, v) = pair.trim().split_once('-').ok_or_else(bad)?;
            Ok((u.trim().parse().map_err(|_| bad())?, v.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

fn need<T>(value: Option<T>, flag: &str) -> std::result::Result<T, Failure> {
    value.ok_or_else(|| Failure::Invalid(format!("--{flag} is required for this source")))
}

fn gen(args: GenArgs) -> CmdResult {
    let decision = match args.from {
        Source::Subsetsum => {
            let values = parse_list(&need(args.values, "values")?, "value")?;
            from_subset_sum(&values, need(args.target, "target")?, args.variant.into())?
        }
        Source::Vertexcover => {
            let edges = parse_edges(&need(args.edges, "edges")?)?;
            let k = need(args.k, "k")?;
            match (args.variant, args.alpha) {
                (VariantArg::Costworthy, Some(alpha)) => {
                    from_vertex_cover_with_alpha(&edges, k, &parse_list(&alpha, "alpha")?)?
                }
                (variant, _) => from_vertex_cover(&edges, k, variant.into())?,
            }
        }
        Source::Betacc => {
            let profile = need(args.rankings, "rankings")?
                .split(';')
                .map(|r| r.parse::<WeakRanking>())
                .collect::<crate::error::Result<Vec<_>>>()?;
            from_beta_cc(&profile, need(args.k, "k")?, need(args.s, "s")?)?
        }
    };
    let mut out = String::new();
    writeln!(out, "# rule: {}", decision.spec).unwrap();
    writeln!(out, "# question: optimal value {} {}", decision.sense, decision.threshold).unwrap();
    if args.decide {
        let answer = if decision.decide()? { "YES" } else { "NO" };
        writeln!(out, "# answer: {answer}").unwrap();
    }
    out.push_str(&serialize_instance(&decision.instance));
    Ok((EXIT_OK, out))
}
