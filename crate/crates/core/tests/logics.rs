mod common;

use std::sync::Arc;

use common::{boolean_consequence, boolean_tautology, f};
use logicat::combine::{
    direct_image, directed_colimit_logics, fibring_constrained, fibring_unconstrained, inverse_image, product_logic,
};
use logicat::corpus;
use logicat::enumerate::{formulas_upto, random_formula};
use logicat::laws::random_flexible;
use logicat::logic::{Evidence, Logic, Refutation};
use logicat::search::Budget;
use logicat::signature::{all_strict_morphisms, coproduct, product, pushout};
use logicat::translation::{check_translation, Status, Translation, TranslationEvidence};
use logicat::{parse, Error, FlexibleMorphism, Formula, Signature, StrictMorphism, Substitution, Symbol};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn classical() -> (Logic, Logic, FlexibleMorphism, FlexibleMorphism) {
    let env = corpus::classical();
    (
        env.logic("CPL1").unwrap().clone(),
        env.logic("CPL2").unwrap().clone(),
        env.morphism("h").unwrap().flexible.clone(),
        env.morphism("k").unwrap().flexible.clone(),
    )
}

fn small() -> Budget {
    Budget::default().with_len(7).with_expansions(50_000)
}

#[test]
fn the_classical_translation_is_verified() {
    let (c1, c2, h, _) = classical();
    let t = check_translation(&h, &c1, &c2, &Budget::default()).unwrap();
    assert!(t.is_verified(), "{:?}", t.status);
    let pres = c1.calculus().unwrap();
    for a in pres.axioms() {
        assert!(boolean_tautology(&h.extend(&a.formula)), "{}", a.name);
    }
    for r in pres.rules() {
        let premises: Vec<Formula> = r.premises.iter().map(|p| h.extend(p)).collect();
        assert!(boolean_consequence(&premises, &h.extend(&r.conclusion)));
    }
    let Some(TranslationEvidence::Generators { axioms, rules }) = t.evidence() else { panic!() };
    assert_eq!((axioms.len(), rules.len()), (3, 1));
}

#[test]
fn identities_are_translations() {
    for (_, l) in corpus::all_logics() {
        let id = FlexibleMorphism::identity(l.signature().clone());
        assert!(check_translation(&id, &l, &l, &Budget::default()).unwrap().is_verified(), "{}", l.name());
    }
}

#[test]
fn nothing_translates_into_the_least_logic() {
    let (c1, ..) = classical();
    let bot = Logic::bottom(c1.signature().clone());
    let id = FlexibleMorphism::identity(c1.signature().clone());
    let t = check_translation(&id, &c1, &bot, &Budget::default()).unwrap();
    let w = t.witness().expect("refuted");
    assert!(w.gamma.is_empty());
    assert_eq!(w.refutation, Refutation::NotMember);
    assert!(w.source_evidence.proof().unwrap().verifies(c1.calculus().unwrap(), &[], &w.phi));
}

#[test]
fn mismatched_signatures_are_errors() {
    let (c1, c2, h, _) = classical();
    assert!(matches!(check_translation(&h, &c2, &c1, &Budget::default()), Err(Error::SignatureMismatch(_))));
}

#[test]
fn inverse_image_along_the_identity() {
    let (c1, ..) = classical();
    let id = FlexibleMorphism::identity(c1.signature().clone());
    let pulled = inverse_image(&id, &c1).unwrap();
    let b = Budget::semantic();
    for phi in formulas_upto(c1.signature(), 2, 2) {
        let gamma = [Formula::var(0)];
        assert_eq!(pulled.answer(&gamma, &phi, &b).decided(), c1.answer(&gamma, &phi, &b).decided());
    }
    assert!(check_translation(&id, &pulled, &c1, &b).unwrap().is_verified());
}

#[test]
fn pure_negation_fragment_by_inverse_image() {
    let (_, c2, ..) = classical();
    let u = Arc::new(Signature::from_pairs("U", [("neg", 1)]).unwrap());
    let h = FlexibleMorphism::parse_pairs(u.clone(), c2.signature().clone(), [("neg", "neg2(x0)")]).unwrap();
    let frag = inverse_image(&h, &c2).unwrap();
    let b = Budget::semantic();
    let nn = parse("neg(neg(x0))", &u).unwrap();
    assert!(frag.derives(std::slice::from_ref(&nn), &Formula::var(0), &b).unwrap().is_yes());
    assert!(frag.derives(&[Formula::var(0)], &nn, &b).unwrap().is_yes());
    assert!(frag.derives(&[], &nn, &b).unwrap().is_no());
    let t = check_translation(&h, &frag, &c2, &b).unwrap();
    assert!(t.is_verified());
}

/// Source sequents used to sample `⊢ ≤ f⋆(⊢′)`: the generators and small theorems.
fn source_samples(l: &Logic, rng: &mut ChaCha8Rng) -> Vec<(Vec<Formula>, Formula)> {
    let pres = l.calculus().unwrap();
    let mut out: Vec<(Vec<Formula>, Formula)> = pres.axioms().iter().map(|a| (vec![], a.formula.clone())).collect();
    out.extend(pres.rules().iter().map(|r| (r.premises.clone(), r.conclusion.clone())));
    for _ in 0..20 {
        let phi = random_formula(rng, l.signature(), 2, 3);
        let gamma = vec![random_formula(rng, l.signature(), 2, 2)];
        if l.answer(&gamma, &phi, &Budget::semantic()).is_yes() {
            out.push((gamma, phi));
        }
    }
    out
}

/// Direct-image sequents: substitution instances of the translated generators.
fn image_samples(h: &FlexibleMorphism, l: &Logic, rng: &mut ChaCha8Rng) -> Vec<(Vec<Formula>, Formula)> {
    let image = direct_image(h, l).unwrap();
    let pres = image.calculus().unwrap().clone();
    let mut out = Vec::new();
    for _ in 0..3 {
        let sigma =
            Substitution::from_images((0..3).map(|_| random_formula(rng, h.target(), 2, 2)).collect());
        out.extend(pres.axioms().iter().map(|a| (vec![], sigma.apply(&a.formula))));
        out.extend(pres.rules().iter().map(|r| {
            (r.premises.iter().map(|p| sigma.apply(p)).collect(), sigma.apply(&r.conclusion))
        }));
    }
    out
}

#[test]
fn image_conditions_agree_on_random_morphisms() {
    let (c1, ..) = classical();
    let cpl = corpus::lukasiewicz().logic("CPL").unwrap().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let (mut verified, mut refuted) = (0, 0);
    for _ in 0..40 {
        let h = random_flexible(&mut rng, c1.signature(), cpl.signature(), 2).unwrap();
        let t = check_translation(&h, &c1, &cpl, &Budget::semantic()).unwrap();
        let pulled = inverse_image(&h, &cpl).unwrap();
        let below =
            source_samples(&c1, &mut rng).iter().all(|(g, p)| pulled.answer(g, p, &Budget::semantic()).is_yes());
        let image = image_samples(&h, &c1, &mut rng).iter().all(|(g, p)| cpl.answer(g, p, &Budget::semantic()).is_yes());
        assert!(!matches!(t.status, Status::Unknown { .. }));
        assert_eq!(t.is_verified(), below, "{h:?}");
        assert_eq!(below, image, "{h:?}");
        if t.is_verified() {
            verified += 1;
        } else {
            refuted += 1;
        }
    }
    assert!(verified > 0 && refuted > 0, "{verified} verified, {refuted} refuted");
}

#[test]
fn direct_image_along_the_identity_keeps_the_presentation() {
    let (c1, ..) = classical();
    let id = FlexibleMorphism::identity(c1.signature().clone());
    let image = direct_image(&id, &c1).unwrap();
    assert_eq!(image.calculus().unwrap().axioms(), c1.calculus().unwrap().axioms());
    assert_eq!(image.calculus().unwrap().rules(), c1.calculus().unwrap().rules());
}

#[test]
fn direct_image_theorems_are_tautologies_and_target_theorems() {
    let (c1, c2, h, _) = classical();
    let image = direct_image(&h, &c1).unwrap();
    assert!(check_translation(&h, &c1, &c2, &Budget::default()).unwrap().is_verified());
    let mut goals: Vec<Formula> = formulas_upto(c2.signature(), 2, 3);
    goals.extend(formulas_upto(c1.signature(), 2, 2).iter().map(|p| h.extend(p)));
    let mut proved = 0;
    for phi in goals {
        let a = image.answer(&[], &phi, &small());
        if a.is_yes() {
            proved += 1;
            assert!(boolean_tautology(&phi), "{phi}");
            assert!(c2.answer(&[], &phi, &Budget::semantic()).is_yes());
        }
    }
    assert!(proved > 0);
}

#[test]
fn least_and_greatest_logics() {
    let u = corpus::extremes();
    let (bot, top) = (u.logic("BOT").unwrap(), u.logic("TOP").unwrap());
    let b = Budget::default();
    let (x0, x1) = (Formula::var(0), Formula::var(1));
    assert!(bot.derives(std::slice::from_ref(&x0), &x0, &b).unwrap().is_yes());
    assert!(bot.derives(std::slice::from_ref(&x0), &x1, &b).unwrap().is_no());
    assert!(top.derives(&[], &x0, &b).unwrap().is_yes());
}

#[test]
fn strict_morphisms_translate_out_of_bottom_and_into_top() {
    let (c1, ..) = classical();
    let small_sigs = [
        Arc::new(Signature::from_pairs("U", [("neg", 1)]).unwrap()),
        Arc::new(Signature::from_pairs("V", [("a", 1), ("b", 1), ("c", 2)]).unwrap()),
        c1.signature().clone(),
    ];
    for s in &small_sigs {
        for m in all_strict_morphisms(s, c1.signature()) {
            let up = check_translation(&FlexibleMorphism::lift(&m), &Logic::bottom(s.clone()), &c1, &small()).unwrap();
            assert!(up.is_verified());
        }
        for m in all_strict_morphisms(c1.signature(), s) {
            let down = check_translation(&FlexibleMorphism::lift(&m), &c1, &Logic::top(s.clone()), &small()).unwrap();
            assert!(down.is_verified());
        }
    }
}

fn fragments() -> (Logic, Logic) {
    let env = corpus::fragments();
    (env.logic("IMP").unwrap().clone(), env.logic("NEG").unwrap().clone())
}

#[test]
fn unconstrained_fibring_of_the_fragments() {
    let (imp, neg) = fragments();
    let fib = fibring_unconstrained(&imp, &neg).unwrap();
    let co = coproduct(&[imp.signature().clone(), neg.signature().clone()]);
    assert_eq!(fib.logic.signature().as_ref(), co.signature.as_ref());
    assert!(fib.legs.iter().all(Translation::is_verified));
    let l = &fib.logic;
    let a3 = f("imp#1(imp#1(neg#1(x0), neg#1(x1)), imp#1(x1, x0))", l);
    let a = l.derives(&[], &a3, &small()).unwrap();
    assert!(a.evidence().and_then(Evidence::proof).unwrap().verifies(l.calculus().unwrap(), &[], &a3));
    let id = f("imp#0(x0, x0)", l);
    let a = l.derives(&[], &id, &small()).unwrap();
    let p = a.evidence().and_then(Evidence::proof).expect("found by search");
    assert!(p.len() > 1 && p.verifies(l.calculus().unwrap(), &[], &id));
    // the fragments do not talk to each other
    assert!(!l.derives(&[], &f("imp#1(x0, x0)", l), &small()).unwrap().is_yes());
}

#[test]
fn fibring_with_the_empty_logic_is_neutral() {
    let (c1, ..) = classical();
    let empty = Logic::bottom(Arc::new(Signature::empty()));
    let fib = fibring_unconstrained(&c1, &empty).unwrap();
    let inj = fib.legs[0].strict.clone().unwrap();
    assert!(inj.is_bijective());
    let back = FlexibleMorphism::lift(&inj.inverse().unwrap());
    assert!(check_translation(&back, &fib.logic, &c1, &small()).unwrap().is_verified());
    let phi = f("imp(x0, x0)", &c1);
    assert!(fib.logic.derives(&[], &inj.extend(&phi), &small()).unwrap().is_yes());
}

#[test]
fn mediating_translation_out_of_the_fibring() {
    let (imp, neg) = fragments();
    let c1 = corpus::fragments().logic("CPL1").unwrap().clone();
    let fib = fibring_unconstrained(&imp, &neg).unwrap();
    let co = coproduct(&[imp.signature().clone(), neg.signature().clone()]);
    let legs: Vec<StrictMorphism> = [&imp, &neg].iter().map(|l| StrictMorphism::identity(l.signature().clone())).collect();
    let m = co.copair(&legs).unwrap();
    let t = check_translation(&FlexibleMorphism::lift(&m), &fib.logic, &c1, &Budget::default()).unwrap();
    assert!(t.is_verified());
    let matching: Vec<_> = all_strict_morphisms(&co.signature, c1.signature())
        .into_iter()
        .filter(|x| co.injections.iter().zip(&legs).all(|(i, l)| i.then(x).unwrap().map() == l.map()))
        .collect();
    assert_eq!(matching.len(), 1);
    assert_eq!(matching[0].map(), m.map());
}

fn shared_span() -> (Translation, Translation) {
    let env = corpus::fragments();
    let share = env.morphism("share").unwrap().flexible.clone();
    let shared = env.logic("SHARED").unwrap();
    let b = Budget::default();
    (
        check_translation(&share, shared, env.logic("IMP").unwrap(), &b).unwrap(),
        check_translation(&share, shared, env.logic("NEG").unwrap(), &b).unwrap(),
    )
}

#[test]
fn constrained_fibring_shares_negation() {
    let (t1, t2) = shared_span();
    assert!(t1.is_verified() && t2.is_verified());
    let fib = fibring_constrained(&t1, &t2).unwrap();
    let q = pushout(t1.strict.as_ref().unwrap(), t2.strict.as_ref().unwrap()).unwrap();
    assert_eq!(fib.logic.signature().as_ref(), q.signature.as_ref());
    assert_eq!(fib.logic.signature().of_arity(1).count(), 1);
    assert!(fib.legs.iter().all(Translation::is_verified));
    let l = &fib.logic;
    let a3 = f("imp#1(imp#1(neg#0(x0), neg#0(x1)), imp#1(x1, x0))", l);
    assert!(l.derives(&[], &a3, &small()).unwrap().is_yes());
    assert!(l.derives(&[], &f("imp#0(x0, x0)", l), &small()).unwrap().is_yes());
}

#[test]
fn constrained_fibring_over_nothing_is_unconstrained() {
    let (imp, neg) = fragments();
    let empty = Arc::new(Signature::empty());
    let zero = Logic::bottom(empty.clone());
    let leg = |l: &Logic| {
        let m = StrictMorphism::new(empty.clone(), l.signature().clone(), Default::default()).unwrap();
        check_translation(&FlexibleMorphism::lift(&m), &zero, l, &Budget::default()).unwrap()
    };
    let fib = fibring_constrained(&leg(&imp), &leg(&neg)).unwrap();
    let plain = fibring_unconstrained(&imp, &neg).unwrap();
    assert!(fib.logic.signature().same_connectives(plain.logic.signature()));
    assert_eq!(fib.logic.calculus().unwrap().axioms().len(), plain.logic.calculus().unwrap().axioms().len());
}

#[test]
fn constrained_fibring_needs_strict_spans() {
    let (c1, c2, h, _) = classical();
    let t = check_translation(&h, &c1, &c2, &Budget::default()).unwrap();
    assert!(t.strict.is_none());
    assert!(matches!(fibring_constrained(&t, &t), Err(Error::Unsupported(_))));
}

fn diagonal(phi: &Formula) -> Formula {
    match phi {
        Formula::Var(i) => Formula::Var(*i),
        Formula::App(c, args) => Formula::App(Symbol::Tuple(vec![c.clone(), c.clone()]), args.iter().map(diagonal).collect()),
    }
}

#[test]
fn product_of_classical_logic_with_itself() {
    let cpl = corpus::lukasiewicz().logic("CPL").unwrap().clone();
    let p = product_logic(&cpl, &cpl).unwrap();
    let sp = product(&[cpl.signature().clone(), cpl.signature().clone()]).unwrap();
    assert_eq!(p.logic.signature().as_ref(), sp.signature.as_ref());
    assert!(p.legs.iter().all(Translation::is_verified));
    let b = Budget::semantic();
    let fs = formulas_upto(cpl.signature(), 2, 2);
    for phi in &fs {
        for g in [vec![], vec![Formula::var(0)], vec![fs[fs.len() / 2].clone()]] {
            let dg: Vec<Formula> = g.iter().map(diagonal).collect();
            assert_eq!(p.logic.answer(&dg, &diagonal(phi), &b).decided(), cpl.answer(&g, phi, &b).decided());
        }
    }
}

#[test]
fn product_with_the_greatest_logic() {
    let l3 = corpus::lukasiewicz().logic("L3").unwrap().clone();
    let top = Logic::top(l3.signature().clone());
    let p = product_logic(&l3, &top).unwrap();
    let b = Budget::semantic();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let phi = random_formula(&mut rng, l3.signature(), 2, 3);
        let g = vec![random_formula(&mut rng, l3.signature(), 2, 2)];
        let dg: Vec<Formula> = g.iter().map(diagonal).collect();
        assert_eq!(p.logic.answer(&dg, &diagonal(&phi), &b).decided(), l3.answer(&g, &phi, &b).decided());
    }
    let prod = product(&[l3.signature().clone(), top.signature().clone()]).unwrap();
    assert_eq!(prod.signature.len(), l3.signature().len());
}

#[test]
fn chain_colimits() {
    let env = corpus::fragments();
    let (imp, c1) = (env.logic("IMP").unwrap(), env.logic("CPL1").unwrap());
    let id = FlexibleMorphism::identity(imp.signature().clone());
    let single = check_translation(&id, imp, imp, &Budget::default()).unwrap();
    let one = directed_colimit_logics(&[single]).unwrap();
    assert!(one.legs.iter().all(Translation::is_verified));
    let up = check_translation(&env.morphism("up").unwrap().flexible, imp, c1, &Budget::default()).unwrap();
    assert!(up.is_verified());
    let chain = directed_colimit_logics(&[up]).unwrap();
    assert!(chain.legs.iter().all(Translation::is_verified));
    let last = chain.legs[1].strict.clone().unwrap();
    let imp_leg = chain.legs[0].strict.clone().unwrap();
    for text in ["imp(x0, x0)", "imp(imp(neg(x0), neg(x1)), imp(x1, x0))", "imp(x0, imp(x1, x0))"] {
        let phi = f(text, c1);
        let want = c1.calculus().map(|c| Logic::from_calculus("C", c.clone())).unwrap().answer(&[], &phi, &small()).is_yes();
        assert_eq!(chain.logic.answer(&[], &last.extend(&phi), &small()).is_yes(), want, "{text}");
    }
    // the identity chain answers as its stage
    let phi = f("imp(x0, x0)", imp);
    let leg = one.legs[1].strict.clone().unwrap();
    assert!(one.logic.answer(&[], &leg.extend(&phi), &small()).is_yes());
    assert!(!one.logic.answer(&[], &leg.extend(&f("imp(neg(x0), x0)", imp)), &small()).is_yes());
    assert!(imp_leg.is_injective());
}

#[test]
fn verified_translations_compose_without_search() {
    let env = corpus::fragments();
    let (imp, neg, c1) = (env.logic("IMP").unwrap(), env.logic("NEG").unwrap(), env.logic("CPL1").unwrap());
    let up = check_translation(&env.morphism("up").unwrap().flexible, imp, c1, &Budget::default()).unwrap();
    let fib = fibring_unconstrained(c1, neg).unwrap();
    let both = up.then(&fib.legs[0]).unwrap();
    assert!(both.is_verified());
    let Some(TranslationEvidence::Generators { axioms, rules }) = both.evidence() else { panic!("{:?}", both.status) };
    let target = fib.logic.calculus().unwrap();
    let pres = imp.calculus().unwrap();
    for (a, e) in pres.axioms().iter().zip(axioms) {
        assert!(e.proof().unwrap().verifies(target, &[], &both.morphism.extend(&a.formula)));
    }
    for (r, e) in pres.rules().iter().zip(rules) {
        let premises: Vec<Formula> = r.premises.iter().map(|p| both.morphism.extend(p)).collect();
        assert!(e.proof().unwrap().verifies(target, &premises, &both.morphism.extend(&r.conclusion)));
    }
    // semantic generator evidence composes without transport
    let (c1, c2, h, k) = classical();
    let th = check_translation(&h, &c1, &c2, &Budget::default()).unwrap();
    let tk = check_translation(&k, &c2, &c1, &Budget::default()).unwrap();
    let round = th.then(&tk).unwrap();
    assert!(round.is_verified());
    assert_eq!(round.morphism, h.then(&k).unwrap());
}

#[test]
fn lifted_extremes_commute_with_lifting() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for (_, l) in corpus::all_logics() {
        let s = l.signature().clone();
        let bot = Logic::bottom(s.clone());
        let top = Logic::top(s.clone());
        assert_eq!(bot.signature().as_ref(), s.as_ref());
        assert_eq!(top.signature().as_ref(), s.as_ref());
        for m in all_strict_morphisms(&s, &s).into_iter().take(6) {
            let lifted = FlexibleMorphism::lift(&m);
            assert!(check_translation(&lifted, &bot, &Logic::bottom(s.clone()), &small()).unwrap().is_verified());
            assert!(check_translation(&lifted, &top, &Logic::top(s.clone()), &small()).unwrap().is_verified());
        }
        // every sampled sequent of a logic holds in the greatest logic
        for _ in 0..20 {
            let phi = random_formula(&mut rng, &s, 2, 2);
            let g = [random_formula(&mut rng, &s, 2, 2)];
            let n = rng.gen_range(0..2);
            assert!(top.answer(&g[..n], &phi, &Budget::semantic()).is_yes());
        }
    }
}
