//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use logicat::combine::{direct_image, fibring_constrained, fibring_unconstrained, inverse_image};
use logicat::corpus;
use logicat::enumerate::{formulas_upto, random_formula};
use logicat::laws::{self, random_flexible, LawReport};
use logicat::logic::{Evidence, Logic, Refutation};
use logicat::quotient::{
    congruential_closure, equipollence, is_congruential, lindenbaum_delta_check, rigidity_probe, CheckVerdict,
    Scope, WeakBounds,
};
use logicat::search::Budget;
use logicat::translation::{check_translation, Status};
use logicat::{parse, Formula, Substitution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<Vec<String>, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn require(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn suite(r: &LawReport) -> Result<String, String> {
    let line = format!("{}: {} cases, {} failed ({})", r.suite, r.cases, r.failed, r.scope);
    match r.failures.first() {
        None => Ok(line),
        Some(f) => Err(format!("{line}; first failure {} : {} vs {}", f.inputs, f.lhs, f.rhs)),
    }
}

fn f(text: &str, l: &Logic) -> Formula {
    parse(text, l.signature()).unwrap()
}

/// Unit laws and the hom-set bijection share one enumeration.
fn generated() -> &'static (LawReport, LawReport) {
    static REPORTS: OnceLock<(LawReport, LawReport)> = OnceLock::new();
    REPORTS.get_or_init(|| laws::exhaustive_generated(3, 2))
}

fn kleisli() -> Outcome {
    let (units, _) = generated();
    let mut out = vec![suite(units)?];
    for (b1, b2, b3) in [(2, 1, 1), (1, 2, 1), (1, 1, 2)] {
        out.push(suite(&laws::kleisli_associativity_exhaustive(3, b1, b2, b3))?);
    }
    out.push(suite(&laws::kleisli_random(5000, 101, 3, 2))?);
    let random = laws::kleisli_random(500, 7, 3, 3);
    require(random.cases >= 500 * 4, "too few random cases")?;
    out.push(suite(&random)?);
    Ok(out)
}

fn adjunction() -> Outcome {
    let (_, bijection) = generated();
    let triangles = laws::adjunction_triangles(50, 13, 3);
    Ok(vec![suite(bijection)?, suite(&triangles)?])
}

fn monad() -> Outcome {
    let r = laws::monad_laws(1000, 17, 3);
    require(r.cases >= 1000, format!("only {} sampled elements", r.cases))?;
    Ok(vec![suite(&r)?])
}

fn regularity() -> Outcome {
    let reg = laws::regularity_suite(200, 19, 4);
    require(reg.cases == 200, "regularity case count")?;
    let wt = laws::weak_terminal_suite(30, 23);
    Ok(vec![suite(&reg)?, suite(&wt)?])
}

fn reflection() -> Outcome {
    let t = laws::t_reflects(3, 3);
    let chains = laws::directed_colimit_suite(20, 29, 3);
    Ok(vec![suite(&t)?, suite(&chains)?])
}

/// Instances of the rules and axioms over small formulas, and hypotheses.
fn provable_queries(l: &Logic) -> Vec<(Vec<Formula>, Formula)> {
    let c = l.calculus().unwrap();
    let fs = formulas_upto(l.signature(), 2, 1);
    let mut out = Vec::new();
    for a in &fs {
        out.push((vec![a.clone()], a.clone()));
        for b in &fs {
            for r in c.rules() {
                let sigma = Substitution::from_images(vec![a.clone(), b.clone(), Formula::var(2)]);
                out.push((r.premises.iter().map(|p| sigma.apply(p)).collect(), sigma.apply(&r.conclusion)));
            }
            for ax in c.axioms() {
                let sigma = Substitution::from_images(vec![a.clone(), b.clone(), Formula::var(0)]);
                out.push((vec![], sigma.apply(&ax.formula)));
            }
        }
    }
    out
}

fn consequence() -> Outcome {
    let budget = Budget::default().with_len(6).with_expansions(20_000);
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let (mut yes, mut checked_semantic) = (0, 0);
    for (file, l) in corpus::all_logics() {
        let Some(c) = l.calculus().cloned() else { continue };
        if let Some(m) = l.matrix() {
            for ax in c.axioms() {
                require(m.holds(&[], &ax.formula), format!("{file}: axiom {} unsound", ax.name))?;
            }
            for r in c.rules() {
                require(m.holds(&r.premises, &r.conclusion), format!("{file}: rule {} unsound", r.name))?;
            }
        }
        for (gamma, phi) in provable_queries(&l) {
            let a = l.derives(&gamma, &phi, &budget).map_err(|e| e.to_string())?;
            let Some(p) = a.evidence().and_then(Evidence::proof) else { continue };
            yes += 1;
            require(p.verifies(&c, &gamma, &phi), format!("{}: proof of {phi} does not check", l.name()))?;
            if let Some(m) = l.matrix() {
                checked_semantic += 1;
                require(m.holds(&gamma, &phi), format!("{}: {phi} proved but not valid", l.name()))?;
            }
            let sigma = Substitution::from_images((0..3).map(|_| random_formula(&mut rng, l.signature(), 3, 2)).collect());
            let sg: Vec<Formula> = gamma.iter().map(|g| sigma.apply(g)).collect();
            require(
                p.substituted(&sigma).verifies(&c, &sg, &sigma.apply(&phi)),
                format!("{}: substituted proof of {phi} fails", l.name()),
            )?;
        }
    }
    require(yes >= 200, format!("only {yes} proofs"))?;
    let cpl1 = corpus::classical_logic("CPL1");
    let calc = cpl1.calculus().unwrap();
    let gamma = [f("x0", &cpl1), f("imp(x0, x1)", &cpl1)];
    let goal = f("x1", &cpl1);
    let mp = cpl1.derives(&gamma, &goal, &Budget::default()).map_err(|e| e.to_string())?;
    let p = mp.evidence().and_then(Evidence::proof).ok_or("modus ponens not proved")?;
    require(p.len() == 3 && p.verifies(calc, &gamma, &goal), "modus ponens proof is not a verified 3-step proof")?;
    let id = f("imp(x0, x0)", &cpl1);
    let a = cpl1.derives(&[], &id, &Budget::default().with_len(5)).map_err(|e| e.to_string())?;
    let q = a.evidence().and_then(Evidence::proof).ok_or("imp(x0, x0) not proved within length 5")?;
    require(q.len() <= 5 && q.verifies(calc, &[], &id), "imp(x0, x0) proof fails")?;
    Ok(vec![
        format!("{yes} proofs round-tripped through random substitutions, {checked_semantic} checked against matrices"),
        format!("x0, imp(x0, x1) |- x1 in {} steps; |- imp(x0, x0) in {} steps", p.len(), q.len()),
    ])
}

fn images() -> Outcome {
    let c1 = corpus::classical_logic("CPL1");
    let luk = corpus::lukasiewicz();
    let targets = [luk.logic("CPL").unwrap().clone(), luk.logic("L3").unwrap().clone()];
    let b = Budget::semantic();
    let mut rng = ChaCha8Rng::seed_from_u64(37);
    let known: Vec<_> = rigidity_probe(&c1, 2, &b).map_err(|e| e.to_string())?.verified.into_iter().map(|e| e.morphism).collect();
    let (mut pairs, mut verified, mut refuted) = (0, 0, 0);
    for i in 0..100 {
        let target = &targets[i % 2];
        // every tenth case is a known endo-translation, so both verdicts occur often
        let h = if i % 10 == 0 {
            known[(i / 10) % known.len()].clone()
        } else {
            random_flexible(&mut rng, c1.signature(), target.signature(), 2).ok_or("no morphism")?
        };
        let t = check_translation(&h, &c1, target, &b).map_err(|e| e.to_string())?;
        require(!matches!(t.status, Status::Unknown { .. }), format!("undecided translation {h:?}"))?;
        let pulled = inverse_image(&h, target).map_err(|e| e.to_string())?;
        let image = direct_image(&h, &c1).map_err(|e| e.to_string())?;
        let mut sequents: Vec<(Vec<Formula>, Formula)> = Vec::new();
        let pres = c1.calculus().unwrap();
        sequents.extend(pres.axioms().iter().map(|a| (vec![], a.formula.clone())));
        sequents.extend(pres.rules().iter().map(|r| (r.premises.clone(), r.conclusion.clone())));
        // L <= f*(L') on the source generators
        let below = sequents.iter().all(|(g, p)| pulled.answer(g, p, &b).is_yes());
        // f_*(L) <= L' on the image generators, generic and substituted
        let ipres = image.calculus().unwrap().clone();
        let random = Substitution::from_images((0..3).map(|_| random_formula(&mut rng, h.target(), 2, 2)).collect());
        let mut image_ok = true;
        for sigma in [Substitution::identity(), random] {
            for a in ipres.axioms() {
                image_ok &= target.answer(&[], &sigma.apply(&a.formula), &b).is_yes();
            }
            for r in ipres.rules() {
                let prem: Vec<Formula> = r.premises.iter().map(|p| sigma.apply(p)).collect();
                image_ok &= target.answer(&prem, &sigma.apply(&r.conclusion), &b).is_yes();
            }
        }
        // pointwise: the inverse image is the pulled-back relation, the direct image
        // contains the pushed-forward source consequences
        for _ in 0..3 {
            let gamma = vec![random_formula(&mut rng, c1.signature(), 2, 2)];
            let phi = random_formula(&mut rng, c1.signature(), 2, 3);
            let img_gamma: Vec<Formula> = gamma.iter().map(|g| h.extend(g)).collect();
            let pulled_yes = pulled.answer(&gamma, &phi, &b).is_yes();
            require(
                pulled_yes == target.answer(&img_gamma, &h.extend(&phi), &b).is_yes(),
                format!("inverse image differs at {phi} along {h:?}"),
            )?;
            if c1.answer(&gamma, &phi, &b).is_yes() {
                let pushed = image.answer(&img_gamma, &h.extend(&phi), &Budget::default().with_len(8).with_expansions(5_000));
                require(!pushed.is_no(), format!("direct image refutes the image of {phi}"))?;
            }
            sequents.push((gamma, phi));
        }
        pairs += sequents.len();
        require(
            t.is_verified() == below && below == image_ok,
            format!("disagreement on {h:?}: translation {}, inverse image {below}, direct image {image_ok}", t.is_verified()),
        )?;
        if t.is_verified() {
            verified += 1;
        } else {
            refuted += 1;
        }
    }
    require(verified > 0 && refuted > 0, "only one verdict occurred")?;
    Ok(vec![format!(
        "100 morphisms into CPL and L3, {pairs} (h, sequent) pairs: {verified} translations, {refuted} refuted, no disagreement"
    )])
}

fn fibring() -> Outcome {
    let env = corpus::fragments();
    let (imp, neg) = (env.logic("IMP").unwrap(), env.logic("NEG").unwrap());
    let budget = Budget::default();
    let fib = fibring_unconstrained(imp, neg).map_err(|e| e.to_string())?;
    require(fib.legs.iter().all(|t| t.is_verified()), "an injection is not verified")?;
    let goal = f("imp#1(imp#1(neg#1(x0), neg#1(x1)), imp#1(x1, x0))", &fib.logic);
    let a = fib.logic.derives(&[], &goal, &budget).map_err(|e| e.to_string())?;
    let p = a.evidence().and_then(Evidence::proof).ok_or("mixed goal not proved in the unconstrained fibring")?;
    require(p.verifies(fib.logic.calculus().unwrap(), &[], &goal), "fibred proof fails")?;
    let share = &env.morphism("share").unwrap().flexible;
    let shared = env.logic("SHARED").unwrap();
    let to_left = check_translation(share, shared, imp, &budget).map_err(|e| e.to_string())?;
    let to_right = check_translation(share, shared, neg, &budget).map_err(|e| e.to_string())?;
    let con = fibring_constrained(&to_left, &to_right).map_err(|e| e.to_string())?;
    require(con.legs.iter().all(|t| t.is_verified()), "a constrained leg is not verified")?;
    let negations = con.logic.signature().of_arity(1).count();
    require(negations == 1, format!("{negations} negations after sharing"))?;
    let goal2 = f("imp#1(imp#1(neg#0(x0), neg#0(x1)), imp#1(x1, x0))", &con.logic);
    let a2 = con.logic.derives(&[], &goal2, &budget).map_err(|e| e.to_string())?;
    let p2 = a2.evidence().and_then(Evidence::proof).ok_or("goal not proved in the constrained fibring")?;
    require(p2.verifies(con.logic.calculus().unwrap(), &[], &goal2), "constrained proof fails")?;
    Ok(vec![
        format!("unconstrained: {} connectives, injections verified, {goal} in {} steps", fib.logic.signature().len(), p.len()),
        format!("shared negation: {} connectives, one negation, {goal2} in {} steps", con.logic.signature().len(), p2.len()),
    ])
}

fn identity_problem() -> Outcome {
    let env = corpus::classical();
    let (c1, c2) = (env.logic("CPL1").unwrap(), env.logic("CPL2").unwrap());
    let h = &env.morphism("h").unwrap().flexible;
    let k = &env.morphism("k").unwrap().flexible;
    let bounds = WeakBounds { vars: 2, formula_bound: 4, ..WeakBounds::default() };
    let e = equipollence(h, k, c1, c2, &bounds, &Budget::default()).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    for (name, v) in [("h", &e.forth), ("k", &e.back)] {
        let c = v.certificate().ok_or(format!("{name} is not a weak equivalence: {}", v.label()))?;
        require(c.conservativity.exact, format!("{name}: conservativity not exact"))?;
        let binary = c.denseness.realized.iter().find(|r| r.n == 2).ok_or("no binary slice")?;
        require(binary.overall == Some(16), format!("{name}: {:?} binary functions realized", binary.overall))?;
        out.push(format!(
            "{name}: conservative on {} sequents (exact), dense with 16 binary functions realized",
            c.conservativity.sequents
        ));
    }
    for (name, v) in [("k.h ~ id", &e.back_after_forth), ("h.k ~ id", &e.forth_after_back)] {
        let c = v.certificate().ok_or(format!("{name}: {}", v.label()))?;
        require(c.scope == Scope::Generators, format!("{name}: not at generator level"))?;
    }
    require(e.is_certified(), "equipollence not certified")?;
    let s = &e.strict_isomorphisms;
    require(s.found.is_empty(), "a strict isomorphism was found")?;
    out.push(format!("k.h ~ id and h.k ~ id on generators; {} strict candidates, none a translation both ways", s.candidates));
    Ok(out)
}

fn rigidity() -> Outcome {
    let c1 = corpus::classical_logic("CPL1");
    let r = rigidity_probe(&c1, 3, &Budget::default()).map_err(|e| e.to_string())?;
    require(r.identity_found && r.unknown == 0, "identity missing or undecided endomorphisms")?;
    require(r.rigid == Some(true), "a verified endo-translation is not ~ id")?;
    let bot = corpus::extremes().logic("BOT").unwrap().clone();
    let rb = rigidity_probe(&bot, 2, &Budget::default()).map_err(|e| e.to_string())?;
    require(rb.rigid == Some(false), "bottom logic reported rigid")?;
    let witness = rb.counterexamples().next().ok_or("no counterexample")?;
    Ok(vec![
        format!("CPL1: {} endomorphisms up to 3, {} translations, all ~ id", r.enumerated, r.verified.len()),
        format!("BOT non-rigid: {:?}", witness.morphism),
    ])
}

fn lindenbaum() -> Outcome {
    let c1 = corpus::classical_logic("CPL1");
    let b = Budget::default();
    let delta = [f("imp(x0, x1)", &c1), f("imp(x1, x0)", &c1)];
    let r = lindenbaum_delta_check(&c1, &delta, &b).map_err(|e| e.to_string())?;
    for c in "abcde".chars() {
        require(r.condition(c).is_some_and(CheckVerdict::passed), format!("condition ({c}) does not pass"))?;
    }
    let mut out = vec!["{imp(x0, x1), imp(x1, x0)} passes (a) to (e)".to_string()];
    for keep in [0usize, 1] {
        let one = [delta[keep].clone()];
        let r = lindenbaum_delta_check(&c1, &one, &b).map_err(|e| e.to_string())?;
        let Some(CheckVerdict::Fail { gamma, phi, refutation: Refutation::CounterValuation { valuation } }) = r.condition('b') else {
            return Err(format!("{{{}}} does not fail (b) with a valuation", one[0]));
        };
        let m = c1.matrix().unwrap();
        let v: BTreeMap<u32, u8> = valuation.clone();
        let designated = |p: &Formula| m.is_designated(m.eval(p, &|i| v.get(&i).copied().unwrap_or(0)));
        require(gamma.iter().all(designated) && !designated(phi), "valuation does not falsify (b)")?;
        out.push(format!("{{{}}} fails (b) at {phi} with valuation {valuation:?}", one[0]));
    }
    Ok(out)
}

fn congruentiality() -> Outcome {
    let b = Budget::default();
    let mut out = Vec::new();
    let luk = corpus::lukasiewicz();
    let classical = corpus::classical();
    for l in [classical.logic("CPL1").unwrap(), classical.logic("CPL2").unwrap(), luk.logic("CPL").unwrap()] {
        let v = is_congruential(l, 2, 4, &b);
        let c = v.certificate().ok_or(format!("{} not confirmed: {}", l.name(), v.label()))?;
        out.push(format!("{} confirmed on {} formulas (exact: {})", l.name(), c.formulas, c.exact));
    }
    let nc = corpus::noncongruential().logic("NC").unwrap().clone();
    let v = is_congruential(&nc, 2, 4, &b);
    let w = v.witness().ok_or(format!("NC not refuted: {}", v.label()))?;
    require(nc.answer(std::slice::from_ref(&w.context_phi), &w.context_psi, &b).is_no() || nc.answer(std::slice::from_ref(&w.context_psi), &w.context_phi, &b).is_no(), "witness does not separate")?;
    out.push(format!("NC refuted: {} -||- {} but not {} -||- {}", w.phi, w.psi, w.context_phi, w.context_psi));
    let env = corpus::fragments();
    let fib = fibring_unconstrained(env.logic("IMP").unwrap(), env.logic("NEG").unwrap()).map_err(|e| e.to_string())?;
    let inner = Budget::default().with_len(7).with_expansions(20_000);
    let cl = congruential_closure(&fib.logic, inner).map_err(|e| e.to_string())?;
    let gamma = [f("neg#1(imp#0(x0, x0))", &fib.logic)];
    let phi = f("neg#1(imp#0(x1, x1))", &fib.logic);
    let before = fib.logic.answer(&gamma, &phi, &inner);
    let after = cl.answer(&gamma, &phi, &inner);
    require(!before.is_yes() && after.is_yes(), format!("closure gives {} over {}", after.label(), before.label()))?;
    out.push(format!("closure of IMP+NEG adds {} |- {phi} (base: {})", gamma[0], before.label()));
    Ok(out)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("Kleisli category laws", kleisli),
        ("adjunction", adjunction),
        ("monad laws", monad),
        ("regularity and weak terminals", regularity),
        ("T reflects iso/mono/epi, directed colimits", reflection),
        ("consequence axioms", consequence),
        ("image equivalences", images),
        ("fibring", fibring),
        ("identity problem", identity_problem),
        ("strong rigidity", rigidity),
        ("Lindenbaum equivalence set", lindenbaum),
        ("congruentiality", congruentiality),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let secs = t.elapsed().as_secs_f64();
        match result {
            Ok(details) => {
                println!("PASS {:>2} {name} ({secs:.1}s)", i + 1);
                for d in details {
                    println!("        {d}");
                }
            }
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    let total = start.elapsed().as_secs_f64();
    println!("{} of 12 criteria passed in {total:.1}s", 12 - failed);
    if total > 300.0 {
        println!("FAIL total runtime above 5 minutes");
        failed += 1;
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
