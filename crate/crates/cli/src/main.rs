use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use logicat::combine::{directed_colimit_logics, fibring_constrained, fibring_unconstrained, product_logic, Combined};
use logicat::dsl::{emit_logic, load, load_str, Environment, MorphismDecl};
use logicat::laws::{self, LawReport};
use logicat::logic::{Answer, Logic};
use logicat::quotient::{
    congruential_closure, equipollence, is_congruential, lindenbaum_delta_check, morphisms_equivalent,
    rigidity_probe, WeakBounds,
};
use logicat::search::Budget;
use logicat::translation::{check_translation, Translation};
use logicat::{corpus, parse, Formula};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "logicat", version, about = "Propositional logics, translations and their combinations")]
struct Cli {
    /// Declarations file to load instead of a shipped corpus file.
    #[arg(long, global = true)]
    file: Option<PathBuf>,
    /// Shipped corpus file: classical, fragments, lukasiewicz, extremes, noncongruential.
    #[arg(long, global = true, default_value = "classical")]
    corpus: String,
    /// Proof length, instance complexity, enumeration complexity, variables; missing entries keep the defaults 40,6,4,2.
    #[arg(long, global = true, value_parser = parse_budget)]
    budget: Option<Budget>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Complexity bound for enumerations and assignments.
    #[arg(long, global = true)]
    bound: Option<usize>,
    /// Number of variables (slice index).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Write the JSON report to this path (`-` for standard output).
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load the declarations and list them.
    #[command(alias = "load")]
    Validate,
    /// Decide a sequent in a logic.
    Prove(ProveArgs),
    /// Apply a morphism to a formula.
    Translate {
        #[arg(long)]
        via: String,
        #[arg(long)]
        formula: String,
    },
    /// Check that a declared morphism is a translation between its logics.
    CheckMorphism {
        #[arg(long)]
        via: String,
    },
    /// Check that a morphism never lowers complexity.
    CheckRegular {
        #[arg(long)]
        via: String,
    },
    /// Fibre two logics over the empty signature.
    Fibre(PairArgs),
    /// Fibre two logics over a shared sublogic.
    FibreShared {
        #[arg(long)]
        shared: String,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Morphism from the shared logic into the left one.
        #[arg(long)]
        via: String,
        /// Morphism into the right logic; defaults to `--via`.
        #[arg(long)]
        via_right: Option<String>,
        #[arg(long)]
        goal: Option<String>,
    },
    /// Product of two logics.
    Product(PairArgs),
    /// Colimit of a chain of translations, given in order.
    ColimitChain {
        #[arg(long, required = true, value_delimiter = ',')]
        via: Vec<String>,
        #[arg(long)]
        goal: Option<String>,
    },
    /// Decide whether two parallel morphisms agree up to interderivability.
    QuotientEqual {
        #[arg(long)]
        via: String,
        #[arg(long)]
        other: String,
    },
    /// Check replacement of interderivables under every connective.
    Congruential {
        #[arg(long)]
        logic: String,
    },
    /// Compare a sequent in a logic and in its congruential closure.
    Closure(ProveArgs),
    /// Check a set of equivalence formulas.
    Lindenbaum {
        #[arg(long)]
        logic: String,
        #[arg(long, required = true)]
        delta: Vec<String>,
    },
    /// Certify that two morphisms are inverse up to interderivability.
    Equipollent {
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long)]
        via: String,
        #[arg(long)]
        back: String,
    },
    /// Compare every endo-translation up to the bound with the identity.
    Rigidity {
        #[arg(long)]
        logic: String,
    },
    /// Run a law suite.
    Laws {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

#[derive(Args)]
struct ProveArgs {
    #[arg(long)]
    logic: String,
    #[arg(long)]
    goal: String,
    #[arg(long = "hyp")]
    hyps: Vec<String>,
}

#[derive(Args)]
struct PairArgs {
    #[arg(long)]
    left: String,
    #[arg(long)]
    right: String,
    /// Formula to decide in the combined logic.
    #[arg(long)]
    goal: Option<String>,
}

fn parse_budget(text: &str) -> std::result::Result<Budget, String> {
    let parts: Vec<usize> = text
        .split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("`{p}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    if parts.is_empty() || parts.len() > 4 {
        return Err("expected one to four comma-separated numbers".into());
    }
    let mut b = Budget::default();
    let slots = [&mut b.max_len, &mut b.max_instance, &mut b.enum_compl, &mut b.vars];
    for (slot, v) in slots.into_iter().zip(parts) {
        *slot = v;
    }
    Ok(b)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Outcome {
    Pass,
    Fail,
    Unknown,
}

impl Outcome {
    fn code(self) -> u8 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Unknown => 2,
        }
    }

    fn of_answer(a: &Answer) -> Self {
        match a.decided() {
            Some(true) => Outcome::Pass,
            Some(false) => Outcome::Fail,
            None => Outcome::Unknown,
        }
    }

    fn of_verdict(label: &str) -> Self {
        match label {
            "certified" | "verified" => Outcome::Pass,
            "refuted" => Outcome::Fail,
            _ => Outcome::Unknown,
        }
    }

    fn and(self, other: Outcome) -> Outcome {
        match (self, other) {
            (Outcome::Fail, _) | (_, Outcome::Fail) => Outcome::Fail,
            (Outcome::Unknown, _) | (_, Outcome::Unknown) => Outcome::Unknown,
            _ => Outcome::Pass,
        }
    }
}

struct Report {
    outcome: Outcome,
    summary: Vec<String>,
    json: Value,
}

struct Ctx {
    env: Environment,
    budget: Budget,
    bound: Option<usize>,
    n: Option<usize>,
}

impl Ctx {
    fn logic(&self, name: &str) -> Result<&Logic> {
        Ok(self.env.logic(name)?)
    }

    fn morphism(&self, name: &str) -> Result<&MorphismDecl> {
        Ok(self.env.morphism(name)?)
    }

    /// The logics at both ends of a declared morphism.
    fn ends(&self, m: &MorphismDecl) -> Result<(&Logic, &Logic)> {
        let end = |name: &str| {
            self.env
                .logic(name)
                .map_err(|_| anyhow!("morphism `{}` must run between logics, `{name}` is not one", m.name))
        };
        Ok((end(&m.source)?, end(&m.target)?))
    }

    fn formula(&self, text: &str, l: &Logic) -> Result<Formula> {
        parse(text, l.signature()).with_context(|| format!("cannot parse `{text}` in {}", l.name()))
    }
}

fn load_env(cli: &Cli) -> Result<Environment> {
    if let Some(path) = &cli.file {
        return Ok(load(path)?);
    }
    let (_, text) = corpus::FILES
        .iter()
        .find(|(file, _)| file.trim_end_matches(".logic") == cli.corpus)
        .ok_or_else(|| anyhow!("no corpus file named `{}`", cli.corpus))?;
    Ok(load_str(text)?)
}

fn translation_json(t: &Translation) -> Value {
    json!({
        "morphism": t.morphism,
        "source": t.source.name(),
        "target": t.target.name(),
        "strict": t.strict.is_some(),
        "status": t.status,
    })
}

fn translation_label(t: &Translation) -> &'static str {
    if t.is_verified() {
        "verified"
    } else if t.is_refuted() {
        "refuted"
    } else {
        "unknown"
    }
}

fn combined(ctx: &Ctx, kind: &str, c: &Combined, goal: Option<&String>) -> Result<Report> {
    let mut summary = vec![format!("{kind}: {} with {} connectives", c.logic.name(), c.logic.signature().len())];
    let mut outcome = Outcome::Pass;
    for (i, leg) in c.legs.iter().enumerate() {
        summary.push(format!("leg {i}: {} -> {}: {}", leg.source.name(), leg.target.name(), translation_label(leg)));
        outcome = outcome.and(Outcome::of_verdict(translation_label(leg)));
    }
    let mut goal_json = Value::Null;
    if let Some(text) = goal {
        let phi = ctx.formula(text, &c.logic)?;
        let a = c.logic.derives(&[], &phi, &ctx.budget)?;
        summary.push(format!("goal {phi}: {}", a.label()));
        outcome = outcome.and(Outcome::of_answer(&a));
        goal_json = json!({ "formula": phi, "answer": a });
    }
    Ok(Report {
        outcome,
        summary,
        json: json!({
            "logic": c.logic.name(),
            "presentation": emit_logic(&c.logic),
            "legs": c.legs.iter().map(translation_json).collect::<Vec<_>>(),
            "goal": goal_json,
        }),
    })
}

fn law_report(r: LawReport) -> Report {
    let outcome = if r.passed() { Outcome::Pass } else { Outcome::Fail };
    Report {
        outcome,
        summary: vec![format!("{}: {} cases, {} failed ({})", r.suite, r.cases, r.failed, r.scope)],
        json: serde_json::to_value(&r).expect("law reports serialize"),
    }
}

fn run_laws(suite: &str, cases: usize, seed: u64, bound: Option<usize>) -> Result<Report> {
    let report = match suite {
        "kleisli" => laws::kleisli_random(cases, seed, 3, bound.unwrap_or(3)),
        "adjunction" => laws::adjunction_triangles(cases, seed, bound.unwrap_or(3)),
        "monad" => laws::monad_laws(cases, seed, bound.unwrap_or(3)),
        "regularity" => laws::regularity_suite(cases, seed, bound.unwrap_or(4)),
        "weak-terminal" => laws::weak_terminal_suite(cases, seed),
        "directed-colimit" => laws::directed_colimit_suite(cases, seed, bound.unwrap_or(3)),
        "minus" => laws::minus_functoriality(cases, seed, bound.unwrap_or(2)),
        "mono" => laws::mono_transfer(cases, seed, bound.unwrap_or(2)),
        "strict-extension" => laws::strict_extension_suite(cases, seed),
        "flexible-extension" => laws::flexible_extension_suite(cases, seed),
        "t-reflects" => laws::t_reflects(3, bound.unwrap_or(3)),
        "units" => {
            let (mut units, bijection) = laws::exhaustive_generated(3, bound.unwrap_or(2));
            units.merge(bijection);
            units
        }
        other => bail!(
            "unknown suite `{other}`; expected one of kleisli, adjunction, monad, regularity, weak-terminal, \
             directed-colimit, minus, mono, strict-extension, flexible-extension, t-reflects, units"
        ),
    };
    Ok(law_report(report))
}

fn run(cli: &Cli) -> Result<Report> {
    let mut r = execute(cli)?;
    r.json = json!({ "command": command_name(&cli.command), "seed": cli.seed, "result": r.json });
    Ok(r)
}

fn execute(cli: &Cli) -> Result<Report> {
    if let Command::Laws { suite, cases } = &cli.command {
        return run_laws(suite, *cases, cli.seed, cli.bound);
    }
    let ctx = Ctx {
        env: load_env(cli)?,
        budget: cli.budget.unwrap_or_default(),
        bound: cli.bound,
        n: cli.n,
    };
    let b = &ctx.budget;
    Ok(match &cli.command {
        Command::Validate => {
            let env = &ctx.env;
            let mut summary = vec![format!(
                "{} signatures, {} logics, {} morphisms",
                env.signatures.len(),
                env.logics.len(),
                env.morphisms.len()
            )];
            for (name, l) in &env.logics {
                summary.push(format!("logic {name}: {} connectives, decidable: {}", l.signature().len(), l.is_decidable()));
            }
            for (name, m) in &env.morphisms {
                summary.push(format!("morphism {name}: {} -> {}", m.source, m.target));
            }
            Report {
                outcome: Outcome::Pass,
                summary,
                json: json!({
                    "declarations": env.order,
                    "signatures": env.signatures.keys().collect::<Vec<_>>(),
                    "logics": env.logics.keys().collect::<Vec<_>>(),
                    "morphisms": env.morphisms.values().map(|m| json!({
                        "name": m.name, "source": m.source, "target": m.target, "morphism": m.flexible,
                    })).collect::<Vec<_>>(),
                }),
            }
        }
        Command::Prove(args) => {
            let l = ctx.logic(&args.logic)?;
            let phi = ctx.formula(&args.goal, l)?;
            let gamma = args.hyps.iter().map(|h| ctx.formula(h, l)).collect::<Result<Vec<_>>>()?;
            let a = l.derives(&gamma, &phi, b)?;
            let mut summary = vec![format!("{}: {} in {}", a.label(), phi, l.name())];
            if let Some(p) = a.evidence().and_then(|e| e.proof()) {
                summary.push(format!("proof of {} steps", p.len()));
            }
            Report {
                outcome: Outcome::of_answer(&a),
                summary,
                json: json!({ "logic": l.name(), "gamma": gamma, "goal": phi, "budget": b, "answer": a }),
            }
        }
        Command::Translate { via, formula } => {
            let m = ctx.morphism(via)?;
            let phi = parse(formula, m.flexible.source()).with_context(|| format!("cannot parse `{formula}`"))?;
            let image = m.flexible.extend(&phi);
            Report {
                outcome: Outcome::Pass,
                summary: vec![format!("{phi} -> {image}")],
                json: json!({ "morphism": m.name, "formula": phi, "image": image }),
            }
        }
        Command::CheckMorphism { via } => {
            let m = ctx.morphism(via)?;
            let (l, l2) = ctx.ends(m)?;
            let t = check_translation(&m.flexible, l, l2, b)?;
            Report {
                outcome: Outcome::of_verdict(translation_label(&t)),
                summary: vec![format!("{}: {} -> {}: {}", m.name, l.name(), l2.name(), translation_label(&t))],
                json: translation_json(&t),
            }
        }
        Command::CheckRegular { via } => {
            let m = ctx.morphism(via)?;
            let (outcome, line, witness) = match m.flexible.regularity() {
                Ok(()) => (Outcome::Pass, format!("{} is regular", m.name), Value::Null),
                Err(theta) => {
                    let image = m.flexible.extend(&theta);
                    (
                        Outcome::Fail,
                        format!("{} is not regular: {theta} goes to {image}", m.name),
                        json!({ "formula": theta, "image": image }),
                    )
                }
            };
            Report {
                outcome,
                summary: vec![line],
                json: json!({ "morphism": m.name, "regular": outcome == Outcome::Pass, "witness": witness }),
            }
        }
        Command::Fibre(args) => {
            let c = fibring_unconstrained(ctx.logic(&args.left)?, ctx.logic(&args.right)?)?;
            combined(&ctx, "fibring", &c, args.goal.as_ref())?
        }
        Command::FibreShared { shared, left, right, via, via_right, goal } => {
            let s = ctx.logic(shared)?;
            let to_left = check_translation(&ctx.morphism(via)?.flexible, s, ctx.logic(left)?, b)?;
            let to_right = check_translation(
                &ctx.morphism(via_right.as_deref().unwrap_or(via))?.flexible,
                s,
                ctx.logic(right)?,
                b,
            )?;
            let c = fibring_constrained(&to_left, &to_right)?;
            combined(&ctx, "constrained fibring", &c, goal.as_ref())?
        }
        Command::Product(args) => {
            let c = product_logic(ctx.logic(&args.left)?, ctx.logic(&args.right)?)?;
            combined(&ctx, "product", &c, args.goal.as_ref())?
        }
        Command::ColimitChain { via, goal } => {
            let mut chain = Vec::new();
            for name in via {
                let m = ctx.morphism(name)?;
                let (l, l2) = ctx.ends(m)?;
                chain.push(check_translation(&m.flexible, l, l2, b)?);
            }
            let c = directed_colimit_logics(&chain)?;
            let mut r = combined(&ctx, "colimit", &c, goal.as_ref())?;
            r.json["chain"] = chain.iter().map(translation_json).collect();
            r
        }
        Command::QuotientEqual { via, other } => {
            let f = ctx.morphism(via)?;
            let g = ctx.morphism(other)?;
            let (l, l2) = ctx.ends(f)?;
            let v = morphisms_equivalent(&f.flexible, &g.flexible, l, l2, b)?;
            Report {
                outcome: Outcome::of_verdict(v.label()),
                summary: vec![format!("{} ~ {}: {}", f.name, g.name, v.label())],
                json: serde_json::to_value(&v)?,
            }
        }
        Command::Congruential { logic } => {
            let l = ctx.logic(logic)?;
            let vars = ctx.n.unwrap_or(b.vars);
            let compl = ctx.bound.unwrap_or(b.enum_compl);
            let v = is_congruential(l, vars, compl, b);
            let mut summary = vec![format!("{} congruential at ({compl}, {vars}): {}", l.name(), v.label())];
            if let Some(w) = v.witness() {
                summary.push(format!(
                    "{} and {} are interderivable but {} and {} are not",
                    w.phi, w.psi, w.context_phi, w.context_psi
                ));
            }
            Report {
                outcome: Outcome::of_verdict(v.label()),
                summary,
                json: serde_json::to_value(&v)?,
            }
        }
        Command::Closure(args) => {
            let l = ctx.logic(&args.logic)?;
            let phi = ctx.formula(&args.goal, l)?;
            let gamma = args.hyps.iter().map(|h| ctx.formula(h, l)).collect::<Result<Vec<_>>>()?;
            let closed = congruential_closure(l, *b)?;
            let before = l.answer(&gamma, &phi, b);
            let after = closed.answer(&gamma, &phi, b);
            Report {
                outcome: Outcome::of_answer(&after),
                summary: vec![format!("{phi}: {} in {}, {} in the closure", before.label(), l.name(), after.label())],
                json: json!({ "logic": l.name(), "gamma": gamma, "goal": phi, "base": before, "closure": after }),
            }
        }
        Command::Lindenbaum { logic, delta } => {
            let l = ctx.logic(logic)?;
            let delta = delta.iter().map(|d| ctx.formula(d, l)).collect::<Result<Vec<_>>>()?;
            let r = lindenbaum_delta_check(l, &delta, b)?;
            let mut outcome = Outcome::Pass;
            let mut summary = Vec::new();
            for c in &r.conditions {
                let o = if c.verdict.passed() {
                    Outcome::Pass
                } else if c.verdict.failed() {
                    Outcome::Fail
                } else {
                    Outcome::Unknown
                };
                outcome = outcome.and(o);
                summary.push(format!("({}) {}: {o:?}", c.condition, c.name).to_lowercase());
            }
            Report { outcome, summary, json: serde_json::to_value(&r)? }
        }
        Command::Equipollent { from, to, via, back } => {
            let l1 = ctx.logic(from)?;
            let l2 = ctx.logic(to)?;
            let h = &ctx.morphism(via)?.flexible;
            let k = &ctx.morphism(back)?.flexible;
            let defaults = WeakBounds::default();
            let bounds = WeakBounds {
                vars: ctx.n.unwrap_or(defaults.vars),
                formula_bound: ctx.bound.unwrap_or(defaults.formula_bound),
                target_bound: ctx.bound.unwrap_or(defaults.target_bound),
                source_bound: defaults.source_bound.max(ctx.bound.unwrap_or(0)),
            };
            let e = equipollence(h, k, l1, l2, &bounds, b)?;
            let parts = [
                ("forth", e.forth.label()),
                ("back", e.back.label()),
                ("back after forth ~ id", e.back_after_forth.label()),
                ("forth after back ~ id", e.forth_after_back.label()),
            ];
            let mut outcome = Outcome::Pass;
            let mut summary = Vec::new();
            for (name, label) in parts {
                outcome = outcome.and(Outcome::of_verdict(label));
                summary.push(format!("{name}: {label}"));
            }
            summary.push(format!(
                "strict isomorphisms: {} of {} candidates",
                e.strict_isomorphisms.found.len(),
                e.strict_isomorphisms.candidates
            ));
            Report { outcome, summary, json: serde_json::to_value(&e)? }
        }
        Command::Rigidity { logic } => {
            let l = ctx.logic(logic)?;
            let r = rigidity_probe(l, ctx.bound.unwrap_or(2), b)?;
            let outcome = match r.rigid {
                Some(true) => Outcome::Pass,
                Some(false) => Outcome::Fail,
                None => Outcome::Unknown,
            };
            let mut summary = vec![format!(
                "{}: {} endomorphisms, {} translations, {} refuted, {} unknown",
                l.name(),
                r.enumerated,
                r.verified.len(),
                r.refuted,
                r.unknown
            )];
            if let Some(c) = r.counterexamples().next() {
                summary.push(format!("not equivalent to the identity: {:?}", c.morphism));
            }
            Report { outcome, summary, json: serde_json::to_value(&r)? }
        }
        Command::Laws { .. } => unreachable!(),
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate => "validate",
        Command::Prove(_) => "prove",
        Command::Translate { .. } => "translate",
        Command::CheckMorphism { .. } => "check-morphism",
        Command::CheckRegular { .. } => "check-regular",
        Command::Fibre(_) => "fibre",
        Command::FibreShared { .. } => "fibre-shared",
        Command::Product(_) => "product",
        Command::ColimitChain { .. } => "colimit-chain",
        Command::QuotientEqual { .. } => "quotient-equal",
        Command::Congruential { .. } => "congruential",
        Command::Closure(_) => "closure",
        Command::Lindenbaum { .. } => "lindenbaum",
        Command::Equipollent { .. } => "equipollent",
        Command::Rigidity { .. } => "rigidity",
        Command::Laws { .. } => "laws",
    }
}

fn emit(cli: &Cli, r: &Report) -> Result<()> {
    let verdict = match r.outcome {
        Outcome::Pass => "pass",
        Outcome::Fail => "fail",
        Outcome::Unknown => "unknown",
    };
    let mut doc = r.json.clone();
    if let Value::Object(map) = &mut doc {
        map.insert("verdict".into(), verdict.into());
    }
    let text = serde_json::to_string_pretty(&doc)? + "\n";
    match &cli.json {
        Some(p) if p.as_os_str() == "-" => print!("{text}"),
        Some(p) => {
            std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?;
        }
        None => {}
    }
    if cli.json.as_ref().is_none_or(|p| p.as_os_str() != "-") {
        for line in &r.summary {
            println!("{line}");
        }
        println!("verdict: {verdict}");
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|r| emit(&cli, &r).map(|()| r.outcome));
    match result {
        Ok(o) => ExitCode::from(o.code()),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
