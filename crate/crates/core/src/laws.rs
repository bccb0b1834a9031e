//! Law suites for strict and flexible morphisms, the adjunction and the monad.
//!
//! Every suite returns a [`LawReport`]. Exhaustive suites enumerate all signatures
//! up to renaming (one per arity profile) and all morphisms within a complexity
//! bound; randomized suites draw from a seeded ChaCha generator.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::enumerate::{enumerate_slice, formulas_upto, random_formula, random_slice_member};
use crate::flexible::{
    find_morphism, is_weak_terminal, kleisli_compose, weak_terminal_witness, FlexibleMorphism,
};
use crate::formula::Formula;
use crate::monad::{
    counit, flat, kleisli_via_monad, minus_on, mu, sharp_into, slice_signature,
    t_map, t_signature, unit,
};
use crate::signature::{all_strict_morphisms, chain_colimit, Signature, StrictMorphism, Symbol};

#[derive(Debug, Clone, Serialize)]
pub struct LawFailure {
    pub inputs: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct LawReport {
    pub suite: String,
    pub seed: u64,
    pub cases: u64,
    pub scope: String,
    pub failed: u64,
    pub failures: Vec<LawFailure>,
}

const MAX_RECORDED: usize = 20;

impl LawReport {
    fn new(suite: &str, seed: u64, scope: impl Into<String>) -> Self {
        LawReport {
            suite: suite.to_string(),
            seed,
            cases: 0,
            scope: scope.into(),
            failed: 0,
            failures: Vec::new(),
        }
    }

    /// Records one case; `lhs == rhs` passes.
    fn check<T: PartialEq + std::fmt::Debug>(&mut self, inputs: impl FnOnce() -> String, lhs: T, rhs: T) {
        self.cases += 1;
        if lhs != rhs {
            self.failed += 1;
            if self.failures.len() < MAX_RECORDED {
                self.failures.push(LawFailure {
                    inputs: inputs(),
                    lhs: format!("{lhs:?}"),
                    rhs: format!("{rhs:?}"),
                });
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn merge(&mut self, other: LawReport) {
        self.cases += other.cases;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < MAX_RECORDED {
                self.failures.push(f);
            }
        }
    }
}

/// One signature per arity profile: `k_i/0`, `u_i/1`, `b_i/2`, … with at most
/// `max_connectives` connectives of arity at most `max_arity`.
pub fn profile_signatures(max_connectives: usize, max_arity: usize) -> Vec<Arc<Signature>> {
    fn go(arity: usize, max_arity: usize, left: usize, counts: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if arity > max_arity {
            out.push(counts.clone());
            return;
        }
        for k in 0..=left {
            counts.push(k);
            go(arity + 1, max_arity, left - k, counts, out);
            counts.pop();
        }
    }
    let mut profiles = Vec::new();
    go(0, max_arity, max_connectives, &mut Vec::new(), &mut profiles);
    profiles.into_iter().map(|p| Arc::new(profile_signature(&p))).collect()
}

const PREFIXES: [&str; 4] = ["k", "u", "b", "t"];

/// The signature with `counts[n]` connectives of arity `n`.
pub fn profile_signature(counts: &[usize]) -> Signature {
    let name: String = counts.iter().map(|c| c.to_string()).collect();
    let mut sig = Signature::new(format!("p{name}"));
    for (arity, &k) in counts.iter().enumerate() {
        for i in 0..k {
            let name = format!("{}{i}", PREFIXES.get(arity).copied().unwrap_or("c"));
            sig.add(Symbol::name(&name).unwrap(), arity).unwrap();
        }
    }
    sig
}

/// A random signature with 1..=`max_connectives` connectives of arity ≤ `max_arity`.
pub fn random_signature<R: Rng + ?Sized>(rng: &mut R, max_connectives: usize, max_arity: usize) -> Arc<Signature> {
    let total = rng.gen_range(1..=max_connectives);
    let mut counts = vec![0usize; max_arity + 1];
    for _ in 0..total {
        counts[rng.gen_range(0..=max_arity)] += 1;
    }
    Arc::new(profile_signature(&counts))
}

/// A random flexible morphism with assignments of complexity ≤ `bound`, if every
/// needed slice of the target is inhabited.
pub fn random_flexible<R: Rng + ?Sized>(
    rng: &mut R,
    source: &Arc<Signature>,
    target: &Arc<Signature>,
    bound: usize,
) -> Option<FlexibleMorphism> {
    let mut assignment = BTreeMap::new();
    for (c, n) in source.connectives() {
        let phi = match random_slice_member(rng, target, n, bound) {
            Some(phi) => phi,
            None => enumerate_slice(target, n, bound).choose(rng)?.clone(),
        };
        assignment.insert(c.clone(), phi);
    }
    FlexibleMorphism::new(source.clone(), target.clone(), assignment).ok()
}

/// Random signature pair admitting a morphism, and one such morphism.
fn random_case<R: Rng + ?Sized>(rng: &mut R, max_connectives: usize, bound: usize) -> (Arc<Signature>, Arc<Signature>, FlexibleMorphism) {
    loop {
        let a = random_signature(rng, max_connectives, 2);
        let b = random_signature(rng, max_connectives, 2);
        if let Some(h) = random_flexible(rng, &a, &b, bound) {
            return (a, b, h);
        }
    }
}

fn random_from<R: Rng + ?Sized>(rng: &mut R, source: &Arc<Signature>, max_connectives: usize, bound: usize) -> (Arc<Signature>, FlexibleMorphism) {
    loop {
        let b = random_signature(rng, max_connectives, 2);
        if let Some(h) = random_flexible(rng, source, &b, bound) {
            return (b, h);
        }
    }
}

/// Calls `visit` on every flexible morphism `source → target` with assignments of
/// complexity ≤ `bound`.
pub fn for_each_flexible(
    source: &Arc<Signature>,
    target: &Arc<Signature>,
    bound: usize,
    visit: &mut dyn FnMut(&FlexibleMorphism),
) {
    let choices: Vec<(Symbol, usize)> = source.connectives().map(|(c, a)| (c.clone(), a)).collect();
    let mut slices: BTreeMap<usize, Vec<Formula>> = BTreeMap::new();
    for (_, a) in &choices {
        slices.entry(*a).or_insert_with(|| enumerate_slice(target, *a, bound));
    }
    let mut current = BTreeMap::new();
    #[allow(clippy::too_many_arguments)]
    fn go(
        i: usize,
        choices: &[(Symbol, usize)],
        slices: &BTreeMap<usize, Vec<Formula>>,
        current: &mut BTreeMap<Symbol, Formula>,
        src: &Arc<Signature>,
        tgt: &Arc<Signature>,
        visit: &mut dyn FnMut(&FlexibleMorphism),
    ) {
        if i == choices.len() {
            let h = FlexibleMorphism::new_unchecked(src.clone(), tgt.clone(), current.clone());
            visit(&h);
            return;
        }
        let (c, a) = &choices[i];
        for phi in &slices[a] {
            current.insert(c.clone(), phi.clone());
            go(i + 1, choices, slices, current, src, tgt, visit);
        }
        current.remove(c);
    }
    go(0, &choices, &slices, &mut current, source, target, visit);
}

/// Unit laws and the `♯`/`♭` round trip over every morphism between profile
/// signatures. Returns `(unit laws, hom-set bijection)`.
pub fn exhaustive_generated(max_connectives: usize, bound: usize) -> (LawReport, LawReport) {
    let scope = format!("all signatures with <= {max_connectives} connectives of arity <= 2, assignments of complexity <= {bound}");
    let mut units = LawReport::new("kleisli-unit", 0, scope.clone());
    let mut bijection = LawReport::new("sharp-flat", 0, scope);
    let profiles = profile_signatures(max_connectives, 2);
    for a in &profiles {
        let id_a = FlexibleMorphism::identity(a.clone());
        for b in &profiles {
            let id_b = FlexibleMorphism::identity(b.clone());
            let tb = Arc::new(t_signature(b, 2, bound));
            for_each_flexible(a, b, bound, &mut |h| {
                let inputs = || format!("{h:?}");
                units.check(inputs, h.then(&id_b).unwrap(), h.clone());
                units.check(inputs, id_a.then(h).unwrap(), h.clone());
                let f = sharp_into(h, tb.clone()).unwrap();
                let back = flat(&f, b.clone()).unwrap();
                bijection.check(inputs, &back, h);
                bijection.check(inputs, sharp_into(&back, tb.clone()).unwrap(), f);
            });
        }
    }
    (units, bijection)
}

fn sub_signature(sig: &Signature, symbols: &BTreeSet<Symbol>) -> Arc<Signature> {
    let mut out = Signature::new(format!("{}|", sig.name()));
    for s in symbols {
        out.add(s.clone(), sig.arity(s).unwrap()).unwrap();
    }
    Arc::new(out)
}

/// Associativity of `•`, exhaustive after restricting each morphism to the
/// connectives that influence the result (which loses nothing, since composites
/// are computed connective by connective).
///
/// `h1 : {c/n} → Σ2` ranges over the slices of `Σ2` up to `b1`,
/// `h2 : Σ2 → Σ3` over assignments up to `b2` on the connectives of `h1(c)`,
/// `h3 : Σ3 → Σ4` over assignments up to `b3` on the connectives of those images.
pub fn kleisli_associativity_exhaustive(max_connectives: usize, b1: usize, b2: usize, b3: usize) -> LawReport {
    let scope = format!(
        "all signatures with <= {max_connectives} connectives of arity <= 2; complexities h1 <= {b1}, h2 <= {b2}, h3 <= {b3}"
    );
    let mut report = LawReport::new("kleisli-associativity", 0, scope);
    let profiles = profile_signatures(max_connectives, 2);
    for s2 in &profiles {
        for n in 0..=2usize {
            let one = Arc::new(Signature::new("one").with("c", n));
            for phi in enumerate_slice(s2, n, b1) {
                let supp: BTreeSet<Symbol> = phi.symbols().into_iter().cloned().collect();
                let s2_sub = sub_signature(s2, &supp);
                let h1 = FlexibleMorphism::new(one.clone(), s2_sub.clone(), BTreeMap::from([("c".into(), phi.clone())])).unwrap();
                for s3 in &profiles {
                    for_each_flexible(&s2_sub, s3, b2, &mut |h2| {
                        let used: BTreeSet<Symbol> = h2
                            .assignment()
                            .values()
                            .flat_map(|f| f.symbols().into_iter().cloned())
                            .collect();
                        let s3_sub = sub_signature(s3, &used);
                        let h2 = FlexibleMorphism::new_unchecked(s2_sub.clone(), s3_sub.clone(), h2.assignment().clone());
                        let h21 = h1.then(&h2).unwrap();
                        for s4 in &profiles {
                            for_each_flexible(&s3_sub, s4, b3, &mut |h3| {
                                let lhs = h1.then(&h2.then(h3).unwrap()).unwrap();
                                let rhs = h21.then(h3).unwrap();
                                report.check(|| format!("h1={h1:?} h2={h2:?} h3={h3:?}"), lhs, rhs);
                            });
                        }
                    });
                }
            }
        }
    }
    report
}

/// Seeded random unit, associativity and Kleisli-identity cases.
pub fn kleisli_random(cases: usize, seed: u64, max_connectives: usize, bound: usize) -> LawReport {
    let scope = format!("random signatures with <= {max_connectives} connectives, assignments of complexity <= {bound}");
    let mut report = LawReport::new("kleisli", seed, scope);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let (a, b, h1) = random_case(&mut rng, max_connectives, bound);
        let (c, h2) = random_from(&mut rng, &b, max_connectives, bound);
        let (_, h3) = random_from(&mut rng, &c, max_connectives, bound);
        let inputs = || format!("h1={h1:?} h2={h2:?} h3={h3:?}");
        report.check(inputs, h1.then(&FlexibleMorphism::identity(b.clone())).unwrap(), h1.clone());
        report.check(inputs, FlexibleMorphism::identity(a.clone()).then(&h1).unwrap(), h1.clone());
        let left = h1.then(&h2).unwrap().then(&h3).unwrap();
        let right = h1.then(&h2.then(&h3).unwrap()).unwrap();
        report.check(inputs, left, right);
        report.check(inputs, kleisli_compose(&h2, &h1).unwrap(), kleisli_via_monad(&h1, &h2).unwrap());
    }
    report
}

/// Triangle identities of `(+) ⊣ (−)` on random signatures, checked on actual
/// morphisms restricted to slice elements up to `bound`.
pub fn adjunction_triangles(signatures: usize, seed: u64, bound: usize) -> LawReport {
    let scope = format!("{signatures} random signatures, slice elements of complexity <= {bound}");
    let mut report = LawReport::new("adjunction", seed, scope);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..signatures {
        let sig = random_signature(&mut rng, 3, 2);
        // ε_{Σ⁺} • (η_Σ)⁺ = id_{Σ⁺}
        let eta = unit(sig.clone());
        let left = FlexibleMorphism::lift(&eta)
            .then(&counit(eta.target().clone(), sig.clone()).unwrap())
            .unwrap();
        report.check(|| format!("{sig:?}"), left, FlexibleMorphism::identity(sig.clone()));
        // (ε_Σ)⁻ ∘ η_{T(Σ)} = id_{T(Σ)}
        let t = Arc::new(t_signature(&sig, 2, bound));
        let eta_t = unit(t.clone());
        let eps = counit(t.clone(), sig.clone()).unwrap();
        let eps_minus = minus_on(&eps, eta_t.target().clone()).unwrap();
        let round = eta_t.then(&eps_minus).unwrap();
        for (c, _) in t.connectives() {
            report.check(|| format!("{sig:?} at {c}"), round.apply(c), Some(c));
        }
    }
    report
}

/// Monad laws on sampled elements of `T²Σ` and `T³Σ`.
pub fn monad_laws(samples: usize, seed: u64, bound: usize) -> LawReport {
    let scope = format!("{samples} sampled elements per law, inner complexity <= {bound}");
    let mut report = LawReport::new("monad", seed, scope);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    while done < samples {
        let sig = random_signature(&mut rng, 3, 2);
        // a finite piece D of T(Σ) and elements of T(D) ⊆ T²(Σ)
        let d = Arc::new(sample_slices(&mut rng, &sig, 4, bound));
        if d.is_empty() {
            continue;
        }
        // μ ∘ η_T = id and μ ∘ T(η) = id on D
        let eta_d = unit(d.clone());
        let m = mu(eta_d.target().clone()).unwrap();
        let law1 = eta_d.then(&m).unwrap();
        let t_eta = t_map(&unit(sig.clone()), d.clone()).unwrap();
        let m2 = mu(t_eta.target().clone()).unwrap();
        let law2 = t_eta.then(&m2).unwrap();
        for (c, _) in d.connectives() {
            report.check(|| format!("{sig:?} at {c}"), law1.apply(c), Some(c));
            report.check(|| format!("{sig:?} at {c}"), law2.apply(c), Some(c));
            done += 1;
        }
        // associativity on W ⊆ T(V), V ⊆ T(D)
        let v = Arc::new(sample_slices(&mut rng, &d, 3, 2));
        if v.is_empty() {
            continue;
        }
        let w = Arc::new(sample_slices(&mut rng, &v, 3, 2));
        if w.is_empty() {
            continue;
        }
        let mu_v = mu(v.clone()).unwrap();
        let t_mu = t_map(&mu_v, w.clone()).unwrap();
        let lhs = t_mu.then(&mu(t_mu.target().clone()).unwrap()).unwrap();
        let mu_w = mu(w.clone()).unwrap();
        let rhs = mu_w.then(&mu(mu_w.target().clone()).unwrap()).unwrap();
        for (c, _) in w.connectives() {
            report.check(|| format!("{sig:?} at {c}"), lhs.apply(c), rhs.apply(c));
            done += 1;
        }
    }
    report
}

/// Up to `per_arity` random slice formulas of each arity `0..=2`, as a sub-signature of `T(sig)`.
fn sample_slices<R: Rng + ?Sized>(rng: &mut R, sig: &Signature, per_arity: usize, bound: usize) -> Signature {
    let mut formulas = Vec::new();
    for n in 0..=2 {
        for _ in 0..per_arity {
            if let Some(phi) = random_slice_member(rng, sig, n, bound) {
                formulas.push(phi);
            }
        }
    }
    slice_signature(format!("T({})", sig.name()), formulas).unwrap()
}

/// The regularity criterion against brute force: `ȟ` lowers the complexity of some
/// formula over `x0, x1` of complexity ≤ `bound` exactly when the criterion fails.
pub fn regularity_suite(cases: usize, seed: u64, bound: usize) -> LawReport {
    let scope = format!("{cases} random morphisms, formulas over x0, x1 of complexity <= {bound}");
    let mut report = LawReport::new("regularity", seed, scope);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let (_, _, mut h) = random_case(&mut rng, 3, 3);
        // force some collapses so both verdicts are exercised
        if rng.gen_bool(0.4) {
            let unary: Vec<Symbol> = h.source().of_arity(1).cloned().collect();
            if let Some(u) = unary.choose(&mut rng) {
                let mut a = h.assignment().clone();
                a.insert(u.clone(), Formula::Var(0));
                h = FlexibleMorphism::new(h.source().clone(), h.target().clone(), a).unwrap();
            }
        }
        let brute = formulas_upto(h.source(), 2, bound)
            .iter()
            .all(|theta| h.extend(theta).complexity() >= theta.complexity());
        let witness_ok = match h.regularity() {
            Ok(()) => true,
            Err(theta) => h.extend(&theta).complexity() < theta.complexity(),
        };
        report.check(|| format!("{h:?}"), (h.is_regular(), true), (brute, witness_ok));
    }
    report
}

/// The weak-terminal predicate against constructive existence: a morphism from a
/// random source plus probes of arity 0..=3 exists exactly when the predicate holds,
/// and the fixed recipe produces one.
pub fn weak_terminal_suite(cases: usize, seed: u64) -> LawReport {
    let mut report = LawReport::new("weak-terminal", seed, format!("{cases} random (source, candidate) pairs"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let probe = Arc::new(profile_signature(&[1, 1, 1, 1]));
    for _ in 0..cases {
        let source = random_signature(&mut rng, 4, 3);
        let candidate = random_signature(&mut rng, 3, 3);
        let predicate = is_weak_terminal(&candidate);
        let exists = find_morphism(&source, &candidate, 3).is_some()
            && find_morphism(&probe, &candidate, 3).is_some();
        let recipe = weak_terminal_witness(source.clone(), candidate.clone()).is_ok();
        report.check(|| format!("{source:?} into {candidate:?}"), (predicate, predicate), (exists, recipe));
    }
    report
}

/// `T` reflects isomorphisms, monomorphisms and epimorphisms: for every strict
/// morphism between profile signatures, injectivity/surjectivity of `f̂` on slices
/// up to `bound` matches the connective map.
pub fn t_reflects(max_connectives: usize, bound: usize) -> LawReport {
    let scope = format!("all strict morphisms between signatures with <= {max_connectives} connectives of arity <= 2, slices up to {bound}");
    let mut report = LawReport::new("t-reflects", 0, scope);
    let profiles = profile_signatures(max_connectives, 2);
    for a in &profiles {
        let src_slices: Vec<Vec<Formula>> = (0..=2).map(|n| enumerate_slice(a, n, bound)).collect();
        for b in &profiles {
            let tgt_slices: Vec<BTreeSet<Formula>> =
                (0..=2).map(|n| enumerate_slice(b, n, bound).into_iter().collect()).collect();
            for f in all_strict_morphisms(a, b) {
                let mut injective = true;
                let mut surjective = true;
                for n in 0..=2 {
                    let image: BTreeSet<Formula> = src_slices[n].iter().map(|p| f.extend(p)).collect();
                    injective &= image.len() == src_slices[n].len();
                    surjective &= image == tgt_slices[n];
                }
                report.check(
                    || format!("{f:?}"),
                    (injective, surjective, injective && surjective),
                    (f.is_injective(), f.is_surjective(), f.is_bijective()),
                );
            }
        }
    }
    report
}

/// `T` preserves directed colimits: on random three-stage chains the map from the
/// set-level colimit of the slices to the slices of the colimit signature is a bijection.
pub fn directed_colimit_suite(chains: usize, seed: u64, bound: usize) -> LawReport {
    let scope = format!("{chains} random 3-stage chains, slices up to {bound}");
    let mut report = LawReport::new("directed-colimit", seed, scope);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut built = 0;
    while built < chains {
        let stages: Vec<Arc<Signature>> = (0..3).map(|_| random_signature(&mut rng, 3, 2)).collect();
        let mut steps = Vec::new();
        for w in stages.windows(2) {
            let options = all_strict_morphisms(&w[0], &w[1]);
            if let Some(f) = options.choose(&mut rng) {
                steps.push(f.clone());
            }
        }
        if steps.len() != 2 {
            continue;
        }
        built += 1;
        let colim = chain_colimit(&steps).unwrap();
        for n in 0..=2 {
            let (bijective, detail) = slice_colimit_bijective(&stages, &steps, &colim.legs, &colim.signature, n, bound);
            report.check(|| format!("{steps:?} n={n}: {detail}"), bijective, true);
        }
    }
    report
}

fn slice_colimit_bijective(
    stages: &[Arc<Signature>],
    steps: &[StrictMorphism],
    legs: &[StrictMorphism],
    colim: &Signature,
    n: usize,
    bound: usize,
) -> (bool, String) {
    let elems: Vec<(usize, Formula)> = stages
        .iter()
        .enumerate()
        .flat_map(|(i, s)| enumerate_slice(s, n, bound).into_iter().map(move |f| (i, f)))
        .collect();
    let index: BTreeMap<&(usize, Formula), usize> = elems.iter().enumerate().map(|(k, e)| (e, k)).collect();
    let mut uf: UnionFind<usize> = UnionFind::new(elems.len());
    for (k, (i, phi)) in elems.iter().enumerate() {
        if let Some(step) = steps.get(*i) {
            let image = (i + 1, step.extend(phi));
            uf.union(k, index[&image]);
        }
    }
    let mut class_image: BTreeMap<usize, Formula> = BTreeMap::new();
    for (k, (i, phi)) in elems.iter().enumerate() {
        let image = legs[*i].extend(phi);
        match class_image.get(&uf.find(k)) {
            Some(prev) if *prev != image => return (false, format!("not well defined at {phi}")),
            _ => {
                class_image.insert(uf.find(k), image);
            }
        }
    }
    let images: BTreeSet<&Formula> = class_image.values().collect();
    if images.len() != class_image.len() {
        return (false, "not injective".into());
    }
    let target: BTreeSet<Formula> = enumerate_slice(colim, n, bound).into_iter().collect();
    if images.len() != target.len() || !images.iter().all(|f| target.contains(*f)) {
        return (false, "not surjective".into());
    }
    (true, format!("{} classes", images.len()))
}

/// Functoriality of `(−)`: `(h2 • h1)⁻ = h2⁻ ∘ h1⁻` on a truncation of `T(Σ)`.
pub fn minus_functoriality(cases: usize, seed: u64, bound: usize) -> LawReport {
    let mut report = LawReport::new("minus-functor", seed, format!("{cases} random pairs, truncation at {bound}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let (a, b, h1) = random_case(&mut rng, 2, 2);
        let (_, h2) = random_from(&mut rng, &b, 2, 2);
        let domain = Arc::new(t_signature(&a, 2, bound));
        let m1 = minus_on(&h1, domain.clone()).unwrap();
        let m2 = minus_on(&h2, m1.target().clone()).unwrap();
        let composite = m1.then(&m2).unwrap();
        let direct = minus_on(&h1.then(&h2).unwrap(), domain).unwrap();
        report.check(|| format!("h1={h1:?} h2={h2:?}"), composite.map().clone(), direct.map().clone());
    }
    report
}

/// `h` is left-cancellable in `S_f` (tested against every pair of morphisms from a
/// one-connective signature with assignments up to `bound`) iff `h⁻` is injective
/// on the same truncation.
pub fn mono_transfer(cases: usize, seed: u64, bound: usize) -> LawReport {
    let mut report = LawReport::new("mono-transfer", seed, format!("{cases} random morphisms, slices up to {bound}"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let (a, _, h) = random_case(&mut rng, 2, 2);
        let domain = Arc::new(t_signature(&a, 2, bound));
        let m = minus_on(&h, domain).unwrap();
        let minus_mono = m.is_injective();
        let mut cancellable = true;
        'outer: for n in 0..=2 {
            let probe = Arc::new(Signature::new("probe").with("c", n));
            let gs = crate::flexible::all_flexible_morphisms(&probe, &a, bound);
            let mut seen = BTreeSet::new();
            for g in &gs {
                if !seen.insert(g.then(&h).unwrap()) {
                    cancellable = false;
                    break 'outer;
                }
            }
        }
        report.check(|| format!("{h:?}"), cancellable, minus_mono);
    }
    report
}

/// Every `S_f`-isomorphism between profile signatures with assignments up to
/// `bound` has complexity-one assignments and is regular. The returned list holds
/// the isomorphisms that are not lifts of strict morphisms (argument permutations).
pub fn isomorphism_search(max_connectives: usize, bound: usize) -> (LawReport, Vec<FlexibleMorphism>) {
    let scope = format!("pairs of signatures with <= {max_connectives} connectives of arity <= 2, assignments <= {bound}");
    let mut report = LawReport::new("isomorphisms", 0, scope);
    let mut permuting = Vec::new();
    let profiles = profile_signatures(max_connectives, 2);
    for a in &profiles {
        for b in &profiles {
            if a.len() != b.len() {
                continue;
            }
            let forth = crate::flexible::all_flexible_morphisms(a, b, bound);
            let back = crate::flexible::all_flexible_morphisms(b, a, bound);
            let id_a = FlexibleMorphism::identity(a.clone());
            let id_b = FlexibleMorphism::identity(b.clone());
            for h in &forth {
                for g in &back {
                    if h.then(g).unwrap() == id_a && g.then(h).unwrap() == id_b {
                        report.check(|| format!("{h:?}"), (h.preserves_complexity(), h.is_regular()), (true, true));
                        if h.as_strict().is_none() {
                            permuting.push(h.clone());
                        }
                    }
                }
            }
        }
    }
    (report, permuting)
}

/// Facts about lifts of strict morphisms, checked on profile signatures:
/// lifts preserve complexity, `(+)` is injective, and a morphism preserves the
/// complexity of all formulas up to `bound` iff every assignment is a connective
/// applied to a permutation of the variables.
pub fn lift_facts(max_connectives: usize, bound: usize) -> LawReport {
    let mut report = LawReport::new("lifts", 0, format!("signatures with <= {max_connectives} connectives, formulas up to {bound}"));
    let profiles = profile_signatures(max_connectives, 2);
    for a in &profiles {
        let thetas = formulas_upto(a, 2, bound);
        for b in &profiles {
            let strict = all_strict_morphisms(a, b);
            let lifts: BTreeSet<FlexibleMorphism> = strict.iter().map(FlexibleMorphism::lift).collect();
            report.check(|| format!("{a:?} -> {b:?}"), lifts.len(), strict.len());
            for_each_flexible(a, b, 1, &mut |h| {
                let brute = thetas.iter().all(|t| h.extend(t).complexity() == t.complexity());
                report.check(|| format!("{h:?}"), brute, h.preserves_complexity());
                if h.as_strict().is_some() {
                    report.check(|| format!("{h:?}"), brute, true);
                }
            });
        }
    }
    report
}

/// Strict extension laws on random formulas: functoriality, complexity and
/// variable preservation, and compatibility with substitution.
pub fn strict_extension_suite(cases: usize, seed: u64) -> LawReport {
    let mut report = LawReport::new("strict-extension", seed, format!("{cases} random formulas"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let a = random_signature(&mut rng, 3, 2);
        let b = random_signature(&mut rng, 3, 2);
        let c = random_signature(&mut rng, 3, 2);
        let (Some(f), Some(g)) = (
            all_strict_morphisms(&a, &b).choose(&mut rng).cloned(),
            all_strict_morphisms(&b, &c).choose(&mut rng).cloned(),
        ) else {
            continue;
        };
        let theta = random_formula(&mut rng, &a, 3, 5);
        let inputs = || format!("{f:?} {g:?} {theta}");
        report.check(inputs, f.then(&g).unwrap().extend(&theta), g.extend(&f.extend(&theta)));
        report.check(inputs, f.extend(&theta).complexity(), theta.complexity());
        report.check(inputs, f.extend(&theta).variables(), theta.variables());
        let sigma = crate::formula::Substitution::from_images(
            (0..3).map(|_| random_formula(&mut rng, &a, 3, 3)).collect(),
        );
        let sigma2 = crate::formula::Substitution::from_images(
            (0..3).map(|i| f.extend(&sigma.image(i))).collect(),
        );
        report.check(inputs, sigma2.apply(&f.extend(&theta)), f.extend(&sigma.apply(&theta)));
    }
    report
}

/// Flexible extension facts: variables preserved, and `ȟ` on generator formulas
/// recovers `h`.
pub fn flexible_extension_suite(cases: usize, seed: u64) -> LawReport {
    let mut report = LawReport::new("flexible-extension", seed, format!("{cases} random morphisms"));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..cases {
        let (a, _, h) = random_case(&mut rng, 3, 3);
        let theta = random_formula(&mut rng, &a, 3, 5);
        report.check(|| format!("{h:?} {theta}"), h.extend(&theta).variables(), theta.variables());
        for (c, n) in a.connectives() {
            report.check(|| format!("{h:?} at {c}"), h.extend(&Formula::generator(c.clone(), n)), h.get(c).unwrap().clone());
        }
        let lift_check = FlexibleMorphism::lift(&StrictMorphism::identity(a.clone()));
        report.check(|| format!("{a:?}"), lift_check, FlexibleMorphism::identity(a.clone()));
    }
    report
}
