//! Interderivability of morphisms, congruentiality, weak equivalence, rigidity
//! probes and Lindenbaum equivalence sets.
//!
//! Bulk checks over a decidable logic switch proof search off and answer from
//! the deciding provider; the verdicts are the same and proofs are not needed.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde::Serialize;

use crate::combine::Combined;
use crate::enumerate::{compositions, enumerate_slice, formulas_upto};
use crate::error::{Error, Result};
use crate::flexible::{all_flexible_morphisms, FlexibleMorphism};
use crate::formula::Formula;
use crate::logic::{Answer, Logic, Provider, Refutation};
use crate::matrix::Matrix;
use crate::search::Budget;
use crate::signature::{all_strict_morphisms, coproduct};
use crate::translation::{check_translation, Translation};

/// Outcome of a certifying check.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict<C, W> {
    Certified { certificate: C },
    Refuted { witness: W },
    Unknown { reason: String },
}

impl<C, W> Verdict<C, W> {
    pub fn is_certified(&self) -> bool {
        matches!(self, Verdict::Certified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown { .. })
    }

    pub fn certificate(&self) -> Option<&C> {
        match self {
            Verdict::Certified { certificate } => Some(certificate),
            _ => None,
        }
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Refuted { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Certified { .. } => "certified",
            Verdict::Refuted { .. } => "refuted",
            Verdict::Unknown { .. } => "unknown",
        }
    }
}

fn bulk(l: &Logic, budget: &Budget) -> Budget {
    if l.is_decidable() {
        Budget { max_len: 0, ..*budget }
    } else {
        *budget
    }
}

/// The matrix of `l` when it decides every query.
pub fn deciding_matrix(l: &Logic) -> Option<&Matrix> {
    l.matrix().filter(|_| l.is_decidable())
}

/// True when `l` is known to be congruential without enumeration: a deciding
/// matrix whose designation classes form a congruence, the extreme logics, and
/// meets, products and inverse images of such logics.
pub fn certified_congruential(l: &Logic) -> bool {
    match l.provider() {
        Provider::Presented { .. } => deciding_matrix(l).is_some_and(Matrix::designation_is_congruence),
        Provider::Bottom | Provider::Top => true,
        Provider::Meet(parts) => parts.iter().all(certified_congruential),
        Provider::Product { factors, .. } => factors.iter().all(certified_congruential),
        Provider::InverseImage { target, .. } => certified_congruential(target),
        _ => false,
    }
}

fn domain(n: usize) -> Vec<u32> {
    (0..n as u32).collect()
}

/// One element per value vector over `x0..x_{vars-1}` when `l` has a deciding
/// matrix (the first in canonical order), otherwise every formula.
fn representatives(l: &Logic, formulas: Vec<Formula>, vars: usize) -> Vec<Formula> {
    let Some(m) = deciding_matrix(l) else {
        return formulas;
    };
    let dom = domain(vars);
    let mut seen = HashSet::new();
    formulas
        .into_iter()
        .filter(|phi| seen.insert(m.value_vector(phi, &dom)))
        .collect()
}

// ---------------------------------------------------------------------------
// f ∼ g

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "scope", rename_all = "snake_case")]
pub enum Scope {
    /// The codomain is congruential, so agreement on generators is enough.
    Generators,
    /// Checked on every formula up to the bounds.
    Bounded { vars: usize, max_compl: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ConnectiveCheck {
    pub connective: String,
    pub f_image: Formula,
    pub g_image: Formula,
    pub answer: Answer,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceCertificate {
    pub f: FlexibleMorphism,
    pub g: FlexibleMorphism,
    pub reflexive: bool,
    pub connectives: Vec<ConnectiveCheck>,
    pub formulas_checked: usize,
    pub scope: Scope,
}

/// A formula whose two images are not interderivable.
#[derive(Clone, Debug, Serialize)]
pub struct Inequivalence {
    pub formula: Formula,
    pub f_image: Formula,
    pub g_image: Formula,
    pub refutation: Refutation,
}

pub type Equivalence = Verdict<EquivalenceCertificate, Inequivalence>;

/// Decides `f ∼ g`: `f̌(φ) ⊣⊢′ ǧ(φ)` for every `φ`.
pub fn morphisms_equivalent(
    f: &FlexibleMorphism,
    g: &FlexibleMorphism,
    l: &Logic,
    l2: &Logic,
    budget: &Budget,
) -> Result<Equivalence> {
    let parallel = f.source().same_connectives(g.source())
        && f.target().same_connectives(g.target())
        && f.source().same_connectives(l.signature())
        && f.target().same_connectives(l2.signature());
    if !parallel {
        return Err(Error::SignatureMismatch(format!(
            "morphisms are not parallel from {} to {}",
            l.signature().name(),
            l2.signature().name()
        )));
    }
    let scope = if certified_congruential(l2) {
        Scope::Generators
    } else {
        Scope::Bounded {
            vars: budget.vars,
            max_compl: budget.enum_compl,
        }
    };
    if f == g {
        return Ok(Verdict::Certified {
            certificate: EquivalenceCertificate {
                f: f.clone(),
                g: g.clone(),
                reflexive: true,
                connectives: Vec::new(),
                formulas_checked: 0,
                scope,
            },
        });
    }
    let b = bulk(l2, budget);
    let mut unknown: Option<String> = None;
    let mut connectives = Vec::new();
    for (c, n) in f.source().connectives() {
        let phi = Formula::generator(c.clone(), n);
        let (fi, gi) = (f.extend(&phi), g.extend(&phi));
        let answer = l2.interderivable(&fi, &gi, &b);
        match &answer {
            Answer::No { refutation } => {
                return Ok(Verdict::Refuted {
                    witness: Inequivalence {
                        formula: phi,
                        f_image: fi,
                        g_image: gi,
                        refutation: refutation.clone(),
                    },
                })
            }
            Answer::Unknown { reason } => {
                unknown.get_or_insert_with(|| format!("{c}: {reason}"));
            }
            Answer::Yes { .. } => {}
        }
        connectives.push(ConnectiveCheck {
            connective: c.to_string(),
            f_image: fi,
            g_image: gi,
            answer,
        });
    }
    let mut formulas_checked = 0;
    if let Scope::Bounded { vars, max_compl } = scope {
        for phi in formulas_upto(f.source(), vars, max_compl) {
            let (fi, gi) = (f.extend(&phi), g.extend(&phi));
            formulas_checked += 1;
            if fi == gi {
                continue;
            }
            match l2.interderivable(&fi, &gi, &b) {
                Answer::No { refutation } => {
                    return Ok(Verdict::Refuted {
                        witness: Inequivalence {
                            formula: phi,
                            f_image: fi,
                            g_image: gi,
                            refutation,
                        },
                    })
                }
                Answer::Unknown { reason } => {
                    unknown.get_or_insert_with(|| format!("{phi}: {reason}"));
                }
                Answer::Yes { .. } => {}
            }
        }
    }
    if let Some(reason) = unknown {
        return Ok(Verdict::Unknown { reason });
    }
    Ok(Verdict::Certified {
        certificate: EquivalenceCertificate {
            f: f.clone(),
            g: g.clone(),
            reflexive: false,
            connectives,
            formulas_checked,
            scope,
        },
    })
}

// ---------------------------------------------------------------------------
// congruentiality

#[derive(Clone, Debug, Serialize)]
pub struct CongruenceCertificate {
    pub logic: String,
    pub vars: usize,
    pub max_compl: usize,
    pub formulas: usize,
    /// Interderivable pairs of distinct representatives that were tested.
    pub pairs: usize,
    pub replacements: usize,
    /// The verdict holds beyond the bounds.
    pub exact: bool,
}

/// Interderivable `phi`, `psi` whose replacement in argument `position` of
/// `connective` breaks interderivability.
#[derive(Clone, Debug, Serialize)]
pub struct CongruenceViolation {
    pub connective: String,
    pub position: usize,
    pub phi: Formula,
    pub psi: Formula,
    pub context_phi: Formula,
    pub context_psi: Formula,
    pub refutation: Refutation,
}

pub type Congruentiality = Verdict<CongruenceCertificate, CongruenceViolation>;

/// Checks replacement of interderivable formulas over `x0..x_{vars-1}` with
/// complexity ≤ `max_compl`, in every argument position of every connective.
/// The remaining arguments are fresh variables.
pub fn is_congruential(l: &Logic, vars: usize, max_compl: usize, budget: &Budget) -> Congruentiality {
    let b = bulk(l, budget);
    let formulas = formulas_upto(l.signature(), vars, max_compl);
    let count = formulas.len();
    let reps = representatives(l, formulas, vars);
    let mut unknown: Option<String> = None;

    // partition into interderivability classes, comparing with each class head
    let mut classes: Vec<Vec<Formula>> = Vec::new();
    match deciding_matrix(l) {
        Some(m) => {
            let dom = domain(vars);
            let mut by_mask: BTreeMap<Vec<bool>, usize> = BTreeMap::new();
            for phi in reps {
                let mask = m.designation_mask(&m.value_vector(&phi, &dom));
                let i = *by_mask.entry(mask).or_insert_with(|| {
                    classes.push(Vec::new());
                    classes.len() - 1
                });
                classes[i].push(phi);
            }
        }
        None => {
            'next: for phi in reps {
                for class in classes.iter_mut() {
                    match l.interderivable(&class[0], &phi, &b) {
                        Answer::Yes { .. } => {
                            class.push(phi);
                            continue 'next;
                        }
                        Answer::Unknown { reason } => {
                            unknown.get_or_insert_with(|| format!("{} ⊣⊢ {}: {reason}", class[0], phi));
                        }
                        Answer::No { .. } => {}
                    }
                }
                classes.push(vec![phi]);
            }
        }
    }

    let mut pairs = 0;
    let mut replacements = 0;
    let connectives: Vec<_> = l.signature().connectives().map(|(c, a)| (c.clone(), a)).collect();
    for class in &classes {
        let head = &class[0];
        for other in &class[1..] {
            pairs += 1;
            for (c, arity) in &connectives {
                for position in 0..*arity {
                    let context = |x: &Formula| {
                        let args = (0..*arity)
                            .map(|j| {
                                if j == position {
                                    x.clone()
                                } else {
                                    Formula::Var((vars + j) as u32)
                                }
                            })
                            .collect();
                        Formula::App(c.clone(), args)
                    };
                    let (cp, cq) = (context(head), context(other));
                    replacements += 1;
                    match l.interderivable(&cp, &cq, &b) {
                        Answer::No { refutation } => {
                            return Verdict::Refuted {
                                witness: CongruenceViolation {
                                    connective: c.to_string(),
                                    position,
                                    phi: head.clone(),
                                    psi: other.clone(),
                                    context_phi: cp,
                                    context_psi: cq,
                                    refutation,
                                },
                            }
                        }
                        Answer::Unknown { reason } => {
                            unknown.get_or_insert_with(|| format!("{cp} ⊣⊢ {cq}: {reason}"));
                        }
                        Answer::Yes { .. } => {}
                    }
                }
            }
        }
    }
    if let Some(reason) = unknown {
        return Verdict::Unknown { reason };
    }
    Verdict::Certified {
        certificate: CongruenceCertificate {
            logic: l.name().to_string(),
            vars,
            max_compl,
            formulas: count,
            pairs,
            replacements,
            exact: certified_congruential(l),
        },
    }
}

/// The logic `l` extended by replacement of interderivable formulas, iterated to
/// a fixpoint over the subformulas of each query; `inner` bounds the base
/// queries made while merging.
pub fn congruential_closure(l: &Logic, inner: Budget) -> Result<Logic> {
    Logic::new(
        format!("c({})", l.name()),
        l.signature().clone(),
        Provider::Closure {
            base: Box::new(l.clone()),
            inner,
        },
    )
}

// ---------------------------------------------------------------------------
// weak equivalence

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WeakBounds {
    /// Largest slice index `n`.
    pub vars: usize,
    /// Complexity bound for the formulas of conservativity sequents.
    pub formula_bound: usize,
    /// Complexity bound for the target slice elements that must be reached.
    pub target_bound: usize,
    /// Complexity bound for the source formulas searched for them.
    pub source_bound: usize,
}

impl Default for WeakBounds {
    fn default() -> Self {
        WeakBounds {
            vars: 2,
            formula_bound: 4,
            target_bound: 4,
            source_bound: 6,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Conservativity {
    /// Sequents `⊢ φ` and `γ ⊢ φ` covered, counted with repetition-free formulas.
    pub sequents: usize,
    pub formula_bound: usize,
    /// Decided by truth tables on both sides.
    pub exact: bool,
}

/// A target slice element and a source formula whose image is interderivable with it.
#[derive(Clone, Debug, Serialize)]
pub struct DenseMatch {
    pub n: usize,
    pub target: Formula,
    pub source: Formula,
    pub image: Formula,
    /// Number of target slice elements in the same class.
    pub covers: usize,
    /// `source` is above the source bound; it was looked for because the class
    /// is known to be reachable.
    pub beyond_bound: bool,
}

/// Number of interderivability classes of slice `n` reached by images.
#[derive(Clone, Debug, Serialize)]
pub struct Realized {
    pub n: usize,
    pub within_bound: usize,
    /// Classes reached by images of arbitrary source formulas, when computable.
    pub overall: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Denseness {
    pub targets: usize,
    pub matches: Vec<DenseMatch>,
    pub realized: Vec<Realized>,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct WeakEquivalenceCertificate {
    pub morphism: FlexibleMorphism,
    pub bounds: WeakBounds,
    pub conservativity: Conservativity,
    pub denseness: Denseness,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "failure", rename_all = "snake_case")]
pub enum WeakEquivalenceFailure {
    /// The sequent and its image get different verdicts.
    NotConservative {
        gamma: Vec<Formula>,
        phi: Formula,
        source: Answer,
        target: Answer,
    },
    /// No source formula of slice `n` has an image interderivable with `target`.
    /// `exact` means no source formula of any complexity does.
    NotDense { n: usize, target: Formula, exact: bool },
}

pub type WeakEquivalence = Verdict<WeakEquivalenceCertificate, WeakEquivalenceFailure>;

/// Checks that `h` is conservative (`Γ ⊢ φ` iff `ȟ[Γ] ⊢′ ȟ(φ)`, for `|Γ| ≤ 1`)
/// and dense (every target slice element is interderivable with an image).
pub fn weak_equivalence(
    h: &FlexibleMorphism,
    l: &Logic,
    l2: &Logic,
    bounds: &WeakBounds,
    budget: &Budget,
) -> Result<WeakEquivalence> {
    if !h.source().same_connectives(l.signature()) || !h.target().same_connectives(l2.signature()) {
        return Err(Error::SignatureMismatch(format!(
            "morphism does not run from {} to {}",
            l.signature().name(),
            l2.signature().name()
        )));
    }
    let conservativity = match conservative(h, l, l2, bounds, budget) {
        Ok(c) => c,
        Err(v) => return Ok(v),
    };
    let denseness = match dense(h, l, l2, bounds, budget) {
        Ok(d) => d,
        Err(v) => return Ok(v),
    };
    Ok(Verdict::Certified {
        certificate: WeakEquivalenceCertificate {
            morphism: h.clone(),
            bounds: *bounds,
            conservativity,
            denseness,
        },
    })
}

fn not_conservative(
    h: &FlexibleMorphism,
    l: &Logic,
    l2: &Logic,
    gamma: Vec<Formula>,
    phi: Formula,
    b1: &Budget,
    b2: &Budget,
) -> WeakEquivalence {
    let image: Vec<Formula> = gamma.iter().map(|g| h.extend(g)).collect();
    Verdict::Refuted {
        witness: WeakEquivalenceFailure::NotConservative {
            source: l.answer(&gamma, &phi, b1),
            target: l2.answer(&image, &h.extend(&phi), b2),
            gamma,
            phi,
        },
    }
}

#[allow(clippy::result_large_err)]
fn conservative(
    h: &FlexibleMorphism,
    l: &Logic,
    l2: &Logic,
    bounds: &WeakBounds,
    budget: &Budget,
) -> std::result::Result<Conservativity, WeakEquivalence> {
    let (b1, b2) = (bulk(l, budget), bulk(l2, budget));
    let formulas = formulas_upto(l.signature(), bounds.vars, bounds.formula_bound);
    let sequents = formulas.len() * (formulas.len() + 1);
    if let (Some(m1), Some(m2)) = (deciding_matrix(l), deciding_matrix(l2)) {
        // a sequent's verdict on either side depends only on designation masks
        let dom = domain(bounds.vars);
        let mut classes: BTreeMap<(Vec<bool>, Vec<bool>), Formula> = BTreeMap::new();
        for phi in formulas {
            let a = m1.designation_mask(&m1.value_vector(&phi, &dom));
            let b = m2.designation_mask(&m2.value_vector(&h.extend(&phi), &dom));
            classes.entry((a, b)).or_insert(phi);
        }
        let all = |m: &[bool]| m.iter().all(|x| *x);
        let sub = |x: &[bool], y: &[bool]| x.iter().zip(y).all(|(p, q)| !*p || *q);
        for ((a, b), phi) in &classes {
            if all(a) != all(b) {
                return Err(not_conservative(h, l, l2, vec![], phi.clone(), &b1, &b2));
            }
        }
        for ((a1, b1m), gamma) in &classes {
            for ((a2, b2m), phi) in &classes {
                if sub(a1, a2) != sub(b1m, b2m) {
                    return Err(not_conservative(h, l, l2, vec![gamma.clone()], phi.clone(), &b1, &b2));
                }
            }
        }
        return Ok(Conservativity {
            sequents,
            formula_bound: bounds.formula_bound,
            exact: true,
        });
    }
    let mut unknown: Option<String> = None;
    let mut check = |gamma: &[Formula], phi: &Formula| -> Option<WeakEquivalence> {
        let image: Vec<Formula> = gamma.iter().map(|g| h.extend(g)).collect();
        let s = l.answer(gamma, phi, &b1);
        let t = l2.answer(&image, &h.extend(phi), &b2);
        match (s.decided(), t.decided()) {
            (Some(x), Some(y)) if x != y => Some(Verdict::Refuted {
                witness: WeakEquivalenceFailure::NotConservative {
                    gamma: gamma.to_vec(),
                    phi: phi.clone(),
                    source: s,
                    target: t,
                },
            }),
            (Some(_), Some(_)) => None,
            _ => {
                unknown.get_or_insert_with(|| format!("verdict on {phi} undecided"));
                None
            }
        }
    };
    for phi in &formulas {
        if let Some(v) = check(&[], phi) {
            return Err(v);
        }
    }
    for gamma in &formulas {
        for phi in &formulas {
            if let Some(v) = check(std::slice::from_ref(gamma), phi) {
                return Err(v);
            }
        }
    }
    match unknown {
        Some(reason) => Err(Verdict::Unknown { reason }),
        None => Ok(Conservativity {
            sequents,
            formula_bound: bounds.formula_bound,
            exact: false,
        }),
    }
}

/// States reached by images of source formulas: the value vector of `ȟ(θ)` over
/// `x0..x_{n-1}`, the set of variables of `θ`, and a least-complexity `θ`.
type State = (Vec<u8>, u32);

/// Give up on truth-table bookkeeping above this many states.
const STATE_CAP: usize = 4096;

/// Levels searched past the source bound for a class known to be reachable.
const EXTRA_LEVELS: usize = 8;

fn image_vector(m: &Matrix, image: &Formula, args: &[&Vec<u8>], rows: usize) -> Vec<u8> {
    (0..rows).map(|r| m.eval(image, &|i| args[i as usize][r])).collect()
}

fn reachable_by_level(
    h: &FlexibleMorphism,
    m: &Matrix,
    n: usize,
    bound: usize,
) -> Option<HashMap<State, Formula>> {
    let rows = m.values().pow(n as u32);
    let dom = domain(n);
    let mut found: HashMap<State, Formula> = HashMap::new();
    let mut levels: Vec<Vec<(State, Formula)>> = Vec::new();
    let base: Vec<(State, Formula)> = (0..n as u32)
        .map(|i| ((m.value_vector(&Formula::Var(i), &dom), 1u32 << i), Formula::Var(i)))
        .collect();
    for (s, f) in &base {
        found.insert(s.clone(), f.clone());
    }
    levels.push(base);
    let connectives: Vec<_> = h.source().connectives().map(|(c, a)| (c.clone(), a)).collect();
    for k in 1..=bound {
        let mut level = Vec::new();
        for (c, arity) in &connectives {
            let image = h.get(c).expect("total assignment");
            for split in compositions(k - 1, *arity) {
                let mut tuples: Vec<Vec<&(State, Formula)>> = vec![Vec::new()];
                for &part in &split {
                    tuples = tuples
                        .into_iter()
                        .flat_map(|t| {
                            levels[part].iter().map(move |x| {
                                let mut t = t.clone();
                                t.push(x);
                                t
                            })
                        })
                        .collect();
                }
                for t in tuples {
                    let vecs: Vec<&Vec<u8>> = t.iter().map(|((v, _), _)| v).collect();
                    let vars = t.iter().fold(0u32, |acc, ((_, s), _)| acc | s);
                    let state = (image_vector(m, image, &vecs, rows), vars);
                    if !found.contains_key(&state) {
                        let args = t.iter().map(|(_, f)| f.clone()).collect();
                        let phi = Formula::App(c.clone(), args);
                        found.insert(state.clone(), phi.clone());
                        level.push((state, phi));
                    }
                }
            }
        }
        if found.len() > STATE_CAP {
            return None;
        }
        levels.push(level);
    }
    Some(found)
}

/// Every state reachable by images of source formulas of any complexity.
fn reachable_closure(h: &FlexibleMorphism, m: &Matrix, n: usize) -> Option<HashSet<State>> {
    let rows = m.values().pow(n as u32);
    let dom = domain(n);
    let mut all: Vec<State> = (0..n as u32)
        .map(|i| (m.value_vector(&Formula::Var(i), &dom), 1u32 << i))
        .collect();
    let mut seen: HashSet<State> = all.iter().cloned().collect();
    let connectives: Vec<_> = h.source().connectives().map(|(c, a)| (c.clone(), a)).collect();
    let mut fresh_from = 0;
    loop {
        let before = all.len();
        let mut added = Vec::new();
        for (c, arity) in &connectives {
            let image = h.get(c).expect("total assignment");
            // tuples over all states with at least one from the last round
            if *arity > 0 && before == 0 {
                continue;
            }
            let total = before.checked_pow(*arity as u32)?;
            for code in 0..total.max(1) {
                let mut idx = Vec::with_capacity(*arity);
                let mut rest = code;
                for _ in 0..*arity {
                    idx.push(rest % before.max(1));
                    rest /= before.max(1);
                }
                if *arity > 0 && idx.iter().all(|i| *i < fresh_from) {
                    continue;
                }
                if *arity == 0 && fresh_from > 0 {
                    continue;
                }
                let vecs: Vec<&Vec<u8>> = idx.iter().map(|i| &all[*i].0).collect();
                let vars = idx.iter().fold(0u32, |acc, i| acc | all[*i].1);
                let state = (image_vector(m, image, &vecs, rows), vars);
                if seen.insert(state.clone()) {
                    added.push(state);
                }
            }
        }
        if added.is_empty() {
            return Some(seen);
        }
        fresh_from = before;
        all.extend(added);
        if all.len() > STATE_CAP {
            return None;
        }
    }
}

#[allow(clippy::result_large_err)]
fn dense(
    h: &FlexibleMorphism,
    l: &Logic,
    l2: &Logic,
    bounds: &WeakBounds,
    budget: &Budget,
) -> std::result::Result<Denseness, WeakEquivalence> {
    let mut targets = 0;
    let mut matches = Vec::new();
    let mut realized = Vec::new();
    let mut exact = true;
    for n in 0..=bounds.vars {
        let slice = enumerate_slice(l2.signature(), n, bounds.target_bound);
        if slice.is_empty() {
            continue;
        }
        targets += slice.len();
        let full = if n == 0 { 0 } else { u32::MAX >> (32 - n) };
        let reach = deciding_matrix(l2).and_then(|m| reachable_by_level(h, m, n, bounds.source_bound).map(|r| (m, r)));
        let Some((m, reach)) = reach else {
            exact = false;
            matches.extend(dense_by_queries(h, l, l2, n, slice, bounds, budget)?);
            continue;
        };
        let dom = domain(n);
        let mut within: BTreeMap<Vec<bool>, &Formula> = BTreeMap::new();
        for ((v, vars), phi) in &reach {
            if *vars == full {
                let mask = m.designation_mask(v);
                let keep = within.get(&mask).is_none_or(|old| (phi.complexity(), phi) < (old.complexity(), *old));
                if keep {
                    within.insert(mask, phi);
                }
            }
        }
        let closure = reachable_closure(h, m, n);
        let overall: Option<HashSet<Vec<bool>>> = closure.as_ref().map(|c| {
            c.iter()
                .filter(|(_, vars)| *vars == full)
                .map(|(v, _)| m.designation_mask(v))
                .collect()
        });
        realized.push(Realized {
            n,
            within_bound: within.len(),
            overall: overall.as_ref().map(HashSet::len),
        });
        let mut needed: BTreeMap<Vec<bool>, (Formula, usize)> = BTreeMap::new();
        for phi in slice {
            let mask = m.designation_mask(&m.value_vector(&phi, &dom));
            needed.entry(mask).or_insert((phi, 0)).1 += 1;
        }
        for (mask, (target, covers)) in needed {
            let mut found = within.get(&mask).map(|f| ((*f).clone(), false));
            if found.is_none() && overall.as_ref().is_some_and(|o| o.contains(&mask)) {
                // the class is reachable: keep searching past the bound for a witness
                found = (bounds.source_bound + 1..=bounds.source_bound + EXTRA_LEVELS).find_map(|bound| {
                    reachable_by_level(h, m, n, bound)?
                        .into_iter()
                        .filter(|((v, vars), _)| *vars == full && m.designation_mask(v) == mask)
                        .map(|(_, phi)| phi)
                        .min_by(|a, b| (a.complexity(), a).cmp(&(b.complexity(), b)))
                        .map(|phi| (phi, true))
                });
            }
            match found {
                Some((source, beyond_bound)) => matches.push(DenseMatch {
                    n,
                    image: h.extend(&source),
                    source,
                    target,
                    covers,
                    beyond_bound,
                }),
                None => {
                    return Err(match &overall {
                        Some(o) if !o.contains(&mask) => Verdict::Refuted {
                            witness: WeakEquivalenceFailure::NotDense { n, target, exact: true },
                        },
                        _ => Verdict::Unknown {
                            reason: format!("no image within complexity {} matches {target}", bounds.source_bound),
                        },
                    })
                }
            }
        }
    }
    Ok(Denseness {
        targets,
        matches,
        realized,
        exact,
    })
}

#[allow(clippy::result_large_err)]
fn dense_by_queries(
    h: &FlexibleMorphism,
    l: &Logic,
    l2: &Logic,
    n: usize,
    slice: Vec<Formula>,
    bounds: &WeakBounds,
    budget: &Budget,
) -> std::result::Result<Vec<DenseMatch>, WeakEquivalence> {
    let b = bulk(l2, budget);
    let sources = enumerate_slice(l.signature(), n, bounds.source_bound);
    let mut out = Vec::new();
    for target in slice {
        let mut unknown = None;
        let hit = sources.iter().find(|theta| match l2.interderivable(&target, &h.extend(theta), &b) {
            Answer::Yes { .. } => true,
            Answer::Unknown { reason } => {
                unknown.get_or_insert(reason);
                false
            }
            Answer::No { .. } => false,
        });
        match (hit, unknown) {
            (Some(source), _) => out.push(DenseMatch {
                n,
                image: h.extend(source),
                source: source.clone(),
                target,
                covers: 1,
                beyond_bound: false,
            }),
            (None, Some(reason)) => return Err(Verdict::Unknown { reason }),
            (None, None) => {
                return Err(Verdict::Refuted {
                    witness: WeakEquivalenceFailure::NotDense { n, target, exact: false },
                })
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// equipollence

#[derive(Clone, Debug, Serialize)]
pub struct Equipollence {
    pub forth: WeakEquivalence,
    pub back: WeakEquivalence,
    /// `k•h ∼ id`.
    pub back_after_forth: Equivalence,
    /// `h•k ∼ id`.
    pub forth_after_back: Equivalence,
    pub strict_isomorphisms: StrictIsomorphisms,
}

impl Equipollence {
    /// Both maps are weak equivalences and mutually inverse up to `∼`.
    pub fn is_certified(&self) -> bool {
        self.forth.is_certified()
            && self.back.is_certified()
            && self.back_after_forth.is_certified()
            && self.forth_after_back.is_certified()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StrictIsomorphisms {
    /// Arity-preserving bijections of connectives tried.
    pub candidates: usize,
    /// Those that are translations in both directions.
    pub found: Vec<FlexibleMorphism>,
}

/// Certifies that `h: l1 → l2` and `k: l2 → l1` are inverse isomorphisms up to
/// interderivability.
pub fn equipollence(
    h: &FlexibleMorphism,
    k: &FlexibleMorphism,
    l1: &Logic,
    l2: &Logic,
    bounds: &WeakBounds,
    budget: &Budget,
) -> Result<Equipollence> {
    let kh = h.then(k)?;
    let hk = k.then(h)?;
    Ok(Equipollence {
        forth: weak_equivalence(h, l1, l2, bounds, budget)?,
        back: weak_equivalence(k, l2, l1, bounds, budget)?,
        back_after_forth: morphisms_equivalent(&kh, &FlexibleMorphism::identity(l1.signature().clone()), l1, l1, budget)?,
        forth_after_back: morphisms_equivalent(&hk, &FlexibleMorphism::identity(l2.signature().clone()), l2, l2, budget)?,
        strict_isomorphisms: strict_isomorphisms(l1, l2, budget)?,
    })
}

/// Searches the bijective signature morphisms `l1 → l2` whose lifts are
/// translations in both directions.
pub fn strict_isomorphisms(l1: &Logic, l2: &Logic, budget: &Budget) -> Result<StrictIsomorphisms> {
    let mut candidates = 0;
    let mut found = Vec::new();
    for f in all_strict_morphisms(l1.signature(), l2.signature()) {
        let Some(inverse) = f.inverse() else { continue };
        candidates += 1;
        let forth = FlexibleMorphism::lift(&f);
        if !check_translation(&forth, l1, l2, &bulk(l2, budget))?.is_verified() {
            continue;
        }
        if check_translation(&FlexibleMorphism::lift(&inverse), l2, l1, &bulk(l1, budget))?.is_verified() {
            found.push(forth);
        }
    }
    Ok(StrictIsomorphisms { candidates, found })
}

// ---------------------------------------------------------------------------
// rigidity

#[derive(Clone, Debug, Serialize)]
pub struct RigidityEntry {
    pub morphism: FlexibleMorphism,
    pub identity: bool,
    /// `None` when the equivalence check was inconclusive.
    pub equivalent_to_identity: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RigidityReport {
    pub logic: String,
    pub bound: usize,
    pub enumerated: usize,
    pub verified: Vec<RigidityEntry>,
    pub refuted: usize,
    pub unknown: usize,
    pub identity_found: bool,
    /// Every verified endo-translation is `∼ id`; `None` if some check was inconclusive.
    pub rigid: Option<bool>,
}

impl RigidityReport {
    /// Verified endo-translations not equivalent to the identity.
    pub fn counterexamples(&self) -> impl Iterator<Item = &RigidityEntry> {
        self.verified.iter().filter(|e| e.equivalent_to_identity == Some(false))
    }
}

/// Enumerates the flexible endomorphisms of `l` with assignments of complexity
/// ≤ `bound` and compares every verified endo-translation with the identity.
pub fn rigidity_probe(l: &Logic, bound: usize, budget: &Budget) -> Result<RigidityReport> {
    let sig = l.signature();
    let id = FlexibleMorphism::identity(sig.clone());
    let b = bulk(l, budget);
    let mut report = RigidityReport {
        logic: l.name().to_string(),
        bound,
        enumerated: 0,
        verified: Vec::new(),
        refuted: 0,
        unknown: 0,
        identity_found: false,
        rigid: Some(true),
    };
    for h in all_flexible_morphisms(sig, sig, bound) {
        report.enumerated += 1;
        let t = check_translation(&h, l, l, &b)?;
        if t.is_refuted() {
            report.refuted += 1;
            continue;
        }
        if !t.is_verified() {
            report.unknown += 1;
            report.rigid = None;
            continue;
        }
        let identity = h == id;
        report.identity_found |= identity;
        let eq = match morphisms_equivalent(&h, &id, l, l, &b)? {
            Verdict::Certified { .. } => Some(true),
            Verdict::Refuted { .. } => Some(false),
            Verdict::Unknown { .. } => None,
        };
        report.rigid = match (report.rigid, eq) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (None, _) | (_, None) => None,
            _ => Some(true),
        };
        report.verified.push(RigidityEntry {
            morphism: h,
            identity,
            equivalent_to_identity: eq,
        });
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Lindenbaum equivalence sets

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum CheckVerdict {
    Pass {
        instances: usize,
    },
    Fail {
        gamma: Vec<Formula>,
        phi: Formula,
        refutation: Refutation,
    },
    Unknown {
        reason: String,
    },
}

impl CheckVerdict {
    pub fn passed(&self) -> bool {
        matches!(self, CheckVerdict::Pass { .. })
    }

    pub fn failed(&self) -> bool {
        matches!(self, CheckVerdict::Fail { .. })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionReport {
    pub condition: char,
    pub name: &'static str,
    pub verdict: CheckVerdict,
}

#[derive(Clone, Debug, Serialize)]
pub struct LindenbaumDelta {
    pub logic: String,
    pub delta: Vec<Formula>,
    pub conditions: Vec<ConditionReport>,
}

impl LindenbaumDelta {
    pub fn passes_all(&self) -> bool {
        self.conditions.iter().all(|c| c.verdict.passed())
    }

    pub fn condition(&self, c: char) -> Option<&CheckVerdict> {
        self.conditions.iter().find(|r| r.condition == c).map(|r| &r.verdict)
    }
}

/// `Δ(φ, ψ)`: each element with `x0 ↦ φ`, `x1 ↦ ψ`.
fn delta_at(delta: &[Formula], phi: &Formula, psi: &Formula) -> Vec<Formula> {
    delta.iter().map(|d| d.instantiate(&[phi.clone(), psi.clone()])).collect()
}

fn check_sequents(l: &Logic, sequents: Vec<(Vec<Formula>, Formula)>, budget: &Budget) -> CheckVerdict {
    let instances = sequents.len();
    let mut unknown = None;
    for (gamma, phi) in sequents {
        match l.answer(&gamma, &phi, budget) {
            Answer::No { refutation } => return CheckVerdict::Fail { gamma, phi, refutation },
            Answer::Unknown { reason } => {
                unknown.get_or_insert(reason);
            }
            Answer::Yes { .. } => {}
        }
    }
    match unknown {
        Some(reason) => CheckVerdict::Unknown { reason },
        None => CheckVerdict::Pass { instances },
    }
}

/// Checks the conditions making `Δ` a set of equivalence formulas for `l`:
/// (a) `⊢ φΔφ`, (b) `φΔψ ⊢ ψΔφ`, (c) `φΔψ ∪ ψΔχ ⊢ φΔχ`,
/// (d) `⋃ φᵢΔψᵢ ⊢ c(φ⃗)Δc(ψ⃗)` and (e) `φ ⊣⊢ ψ` iff `⊢ φΔψ`.
///
/// Conditions (a) to (d) are checked on distinct variables, which covers every
/// instance by structurality. Condition (e) is checked on formulas up to the
/// budget's enumeration bounds.
pub fn lindenbaum_delta_check(l: &Logic, delta: &[Formula], budget: &Budget) -> Result<LindenbaumDelta> {
    for d in delta {
        l.signature().check(d)?;
        if !d.in_slice(2) {
            return Err(Error::InvalidDelta(format!("{d} does not have exactly the variables x0, x1")));
        }
    }
    let b = bulk(l, budget);
    let x = Formula::Var;
    let mut conditions = Vec::new();

    let reflexive = delta.iter().map(|d| (vec![], d.instantiate(&[x(0), x(0)]))).collect();
    conditions.push(('a', "reflexivity", check_sequents(l, reflexive, &b)));

    let forward = delta_at(delta, &x(0), &x(1));
    let symmetric = delta_at(delta, &x(1), &x(0)).into_iter().map(|d| (forward.clone(), d)).collect();
    conditions.push(('b', "symmetry", check_sequents(l, symmetric, &b)));

    let mut chain = forward.clone();
    chain.extend(delta_at(delta, &x(1), &x(2)));
    let transitive = delta_at(delta, &x(0), &x(2)).into_iter().map(|d| (chain.clone(), d)).collect();
    conditions.push(('c', "transitivity", check_sequents(l, transitive, &b)));

    let mut replacement = Vec::new();
    for (c, arity) in l.signature().connectives() {
        let left = Formula::App(c.clone(), (0..arity as u32).map(x).collect());
        let right = Formula::App(c.clone(), (arity as u32..2 * arity as u32).map(x).collect());
        let hyps: Vec<Formula> = (0..arity as u32)
            .flat_map(|i| delta_at(delta, &x(i), &x(arity as u32 + i)))
            .collect();
        for d in delta_at(delta, &left, &right) {
            replacement.push((hyps.clone(), d));
        }
    }
    conditions.push(('d', "replacement", check_sequents(l, replacement, &b)));

    conditions.push(('e', "lindenbaum biconditional", biconditional(l, delta, &b)));

    Ok(LindenbaumDelta {
        logic: l.name().to_string(),
        delta: delta.to_vec(),
        conditions: conditions
            .into_iter()
            .map(|(condition, name, verdict)| ConditionReport {
                condition,
                name,
                verdict,
            })
            .collect(),
    })
}

fn biconditional(l: &Logic, delta: &[Formula], b: &Budget) -> CheckVerdict {
    let reps = representatives(l, formulas_upto(l.signature(), b.vars, b.enum_compl), b.vars);
    let mut instances = 0;
    let mut unknown = None;
    for phi in &reps {
        for psi in &reps {
            instances += 1;
            let inter = l.interderivable(phi, psi, b);
            let mut theorems = Some(true);
            let mut missing = None;
            for d in delta_at(delta, phi, psi) {
                match l.answer(&[], &d, b) {
                    Answer::No { refutation } => {
                        theorems = Some(false);
                        missing = Some((d, refutation));
                        break;
                    }
                    Answer::Unknown { reason } => {
                        theorems = None;
                        unknown.get_or_insert(reason);
                    }
                    Answer::Yes { .. } => {}
                }
            }
            match (inter, theorems) {
                (Answer::Yes { .. }, Some(false)) => {
                    let (phi, refutation) = missing.expect("refuted element");
                    return CheckVerdict::Fail {
                        gamma: vec![],
                        phi,
                        refutation,
                    };
                }
                (Answer::No { .. }, Some(true)) => {
                    // one direction of φ ⊣⊢ ψ fails although ⊢ φΔψ
                    let (gamma, goal) = match l.answer(std::slice::from_ref(phi), psi, b) {
                        Answer::No { .. } => (phi.clone(), psi.clone()),
                        _ => (psi.clone(), phi.clone()),
                    };
                    let refutation = l
                        .answer(std::slice::from_ref(&gamma), &goal, b)
                        .refutation()
                        .cloned()
                        .expect("refuted direction");
                    return CheckVerdict::Fail {
                        gamma: vec![gamma],
                        phi: goal,
                        refutation,
                    };
                }
                (Answer::Unknown { reason }, _) => {
                    unknown.get_or_insert(reason);
                }
                _ => {}
            }
        }
    }
    match unknown {
        Some(reason) => CheckVerdict::Unknown { reason },
        None => CheckVerdict::Pass { instances },
    }
}

// ---------------------------------------------------------------------------
// colimits of congruential logics

/// Colimit of the chain `first → … ` of translations, made congruential: the
/// chain colimit over the coproduct of the stage signatures, passed through
/// [`congruential_closure`]. The legs are the coproduct injections.
pub fn qfc_directed_colimit(first: &Logic, chain: &[Translation], inner: Budget) -> Result<Combined> {
    let mut stages = vec![first.clone()];
    for (i, t) in chain.iter().enumerate() {
        if !t.source.signature().same_connectives(stages[i].signature()) {
            return Err(Error::NotComposable(format!("chain breaks at step {i}")));
        }
        stages.push((*t.target).clone());
    }
    let steps: Vec<FlexibleMorphism> = chain.iter().map(|t| t.morphism.clone()).collect();
    let co = coproduct(&stages.iter().map(|l| l.signature().clone()).collect::<Vec<_>>());
    let names: Vec<&str> = stages.iter().map(Logic::name).collect();
    let base = Logic::new(
        format!("colim({})", names.join(", ")),
        co.signature.clone(),
        Provider::ChainColimit {
            stages: stages.clone(),
            steps,
        },
    )?;
    let logic = congruential_closure(&base, inner)?;
    let target = Arc::new(logic.clone());
    let legs = stages
        .iter()
        .zip(&co.injections)
        .map(|(l, inj)| {
            Translation::by_construction(
                FlexibleMorphism::lift(inj),
                Arc::new(l.clone()),
                target.clone(),
                "cocone leg of a chain colimit",
            )
        })
        .collect();
    Ok(Combined { logic, legs })
}
