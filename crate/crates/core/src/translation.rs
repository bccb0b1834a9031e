//! Translations: signature morphisms that preserve derivability.

use std::sync::Arc;

use serde::Serialize;

use crate::calculus::Calculus;
use crate::enumerate::formulas_upto;
use crate::error::{Error, Result};
use crate::flexible::FlexibleMorphism;
use crate::formula::{Formula, Substitution};
use crate::logic::{Answer, Evidence, Logic, Provider, Refutation};
use crate::proof::{Justification, Proof, Step};
use crate::search::Budget;
use crate::signature::StrictMorphism;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TranslationEvidence {
    /// One target derivation per source axiom and per source rule.
    Generators { axioms: Vec<Evidence>, rules: Vec<Evidence> },
    /// The defining clause of the construction makes the morphism a translation.
    Construction { reason: String },
    Composed {
        first: Box<TranslationEvidence>,
        second: Box<TranslationEvidence>,
    },
}

impl TranslationEvidence {
    /// Proofs for every generator, if all generator evidence is a proof.
    fn generator_proofs(&self) -> Option<(Vec<Proof>, Vec<Proof>)> {
        match self {
            TranslationEvidence::Generators { axioms, rules } => {
                let a = axioms.iter().map(|e| e.proof().cloned()).collect::<Option<Vec<_>>>()?;
                let r = rules.iter().map(|e| e.proof().cloned()).collect::<Option<Vec<_>>>()?;
                Some((a, r))
            }
            _ => None,
        }
    }
}

/// A source-derivable sequent whose image is refuted in the target.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub gamma: Vec<Formula>,
    pub phi: Formula,
    pub image_gamma: Vec<Formula>,
    pub image_phi: Formula,
    pub source_evidence: Evidence,
    pub refutation: Refutation,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Verified { evidence: TranslationEvidence },
    Refuted { witness: Box<Witness> },
    Unknown { reason: String },
}

#[derive(Clone, Debug)]
pub struct Translation {
    pub morphism: FlexibleMorphism,
    pub strict: Option<StrictMorphism>,
    pub source: Arc<Logic>,
    pub target: Arc<Logic>,
    pub status: Status,
}

impl Translation {
    pub fn is_verified(&self) -> bool {
        matches!(self.status, Status::Verified { .. })
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self.status, Status::Refuted { .. })
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.status {
            Status::Refuted { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn evidence(&self) -> Option<&TranslationEvidence> {
        match &self.status {
            Status::Verified { evidence } => Some(evidence),
            _ => None,
        }
    }

    /// A translation that holds by the defining clause of a construction.
    pub fn by_construction(
        morphism: FlexibleMorphism,
        source: Arc<Logic>,
        target: Arc<Logic>,
        reason: impl Into<String>,
    ) -> Translation {
        Translation {
            strict: morphism.as_strict(),
            morphism,
            source,
            target,
            status: Status::Verified {
                evidence: TranslationEvidence::Construction { reason: reason.into() },
            },
        }
    }

    /// `next • self`. Verified composites need no new search: generator proofs are
    /// transported along `next` when both sides have them.
    pub fn then(&self, next: &Translation) -> Result<Translation> {
        let morphism = self.morphism.then(&next.morphism)?;
        let status = match (&self.status, &next.status) {
            (Status::Verified { evidence: e1 }, Status::Verified { evidence: e2 }) => Status::Verified {
                evidence: compose_evidence(e1, e2, &next.morphism, &next.target).unwrap_or_else(|| {
                    TranslationEvidence::Composed {
                        first: Box::new(e1.clone()),
                        second: Box::new(e2.clone()),
                    }
                }),
            },
            _ => Status::Unknown {
                reason: "a factor is not verified".into(),
            },
        };
        Ok(Translation {
            strict: morphism.as_strict(),
            morphism,
            source: self.source.clone(),
            target: next.target.clone(),
            status,
        })
    }
}

fn compose_evidence(
    first: &TranslationEvidence,
    second: &TranslationEvidence,
    g: &FlexibleMorphism,
    target: &Logic,
) -> Option<TranslationEvidence> {
    let (a1, r1) = first.generator_proofs()?;
    let (a2, r2) = second.generator_proofs()?;
    let calculus = target.calculus()?;
    let axioms = a1
        .iter()
        .map(|p| proof_evidence(p.translate(g, &a2, &r2)?, calculus))
        .collect::<Option<Vec<_>>>()?;
    let rules = r1
        .iter()
        .map(|p| proof_evidence(p.translate(g, &a2, &r2)?, calculus))
        .collect::<Option<Vec<_>>>()?;
    Some(TranslationEvidence::Generators { axioms, rules })
}

fn proof_evidence(proof: Proof, calculus: &Calculus) -> Option<Evidence> {
    let phi = proof.conclusion()?.clone();
    let used = proof.used_hypotheses();
    proof.verifies(calculus, &used, &phi).then_some(Evidence::Proof { proof, used })
}

/// The one-step source derivation of axiom `index`.
fn axiom_proof(calculus: &Calculus, index: usize) -> Evidence {
    let proof = Proof {
        steps: vec![Step {
            formula: calculus.axioms()[index].formula.clone(),
            justification: Justification::Axiom {
                index,
                subst: Substitution::identity(),
            },
        }],
    };
    Evidence::Proof { proof, used: vec![] }
}

/// The source derivation of rule `index` from its premises.
fn rule_proof(calculus: &Calculus, index: usize) -> Evidence {
    let rule = &calculus.rules()[index];
    let mut steps: Vec<Step> = rule
        .premises
        .iter()
        .map(|p| Step {
            formula: p.clone(),
            justification: Justification::Hypothesis,
        })
        .collect();
    steps.push(Step {
        formula: rule.conclusion.clone(),
        justification: Justification::Rule {
            index,
            subst: Substitution::identity(),
            premises: (0..rule.premises.len()).collect(),
        },
    });
    let proof = Proof { steps };
    let used = proof.used_hypotheses();
    Evidence::Proof { proof, used }
}

/// Generator evidence when every translated axiom and rule occurs verbatim in `target`.
fn verbatim(source: &Calculus, h: &FlexibleMorphism, target: &Calculus) -> Option<TranslationEvidence> {
    let axioms = source
        .axioms()
        .iter()
        .map(|a| {
            let image = h.extend(&a.formula);
            let index = target.axioms().iter().position(|b| b.formula == image)?;
            Some(axiom_proof(target, index))
        })
        .collect::<Option<Vec<_>>>()?;
    let rules = source
        .rules()
        .iter()
        .map(|r| {
            let premises: Vec<Formula> = r.premises.iter().map(|p| h.extend(p)).collect();
            let conclusion = h.extend(&r.conclusion);
            let index = target
                .rules()
                .iter()
                .position(|s| s.premises == premises && s.conclusion == conclusion)?;
            Some(rule_proof(target, index))
        })
        .collect::<Option<Vec<_>>>()?;
    Some(TranslationEvidence::Generators { axioms, rules })
}

fn same_provider(a: &Logic, b: &Logic) -> bool {
    if !a.signature().same_connectives(b.signature()) {
        return false;
    }
    match (a.provider(), b.provider()) {
        (
            Provider::Presented {
                calculus: c1,
                matrix: m1,
                matrix_complete: k1,
            },
            Provider::Presented {
                calculus: c2,
                matrix: m2,
                matrix_complete: k2,
            },
        ) => c1 == c2 && m1 == m2 && k1 == k2,
        (Provider::Bottom, Provider::Bottom) | (Provider::Top, Provider::Top) => true,
        _ => a.name() == b.name(),
    }
}

/// Checks that `h` translates `l` into `l2`.
///
/// With a generating presentation of `l` the check is exact up to budget: every
/// translated axiom must be derivable and every translated rule derivable from its
/// translated premises. Without one, a bounded audit of small sequents can only
/// refute.
pub fn check_translation(h: &FlexibleMorphism, l: &Logic, l2: &Logic, budget: &Budget) -> Result<Translation> {
    if !h.source().same_connectives(l.signature()) || !h.target().same_connectives(l2.signature()) {
        return Err(Error::SignatureMismatch(format!(
            "{:?} does not run from {} to {}",
            h,
            l.signature().name(),
            l2.signature().name()
        )));
    }
    let source = Arc::new(l.clone());
    let target = Arc::new(l2.clone());
    let identity = h.assignment().iter().all(|(c, phi)| *phi == Formula::generator(c.clone(), phi.variables().len()));
    if identity && same_provider(l, l2) {
        return Ok(Translation::by_construction(h.clone(), source, target, "identity"));
    }
    if let Provider::InverseImage { morphism, target: t } = l.provider() {
        if morphism == h && same_provider(t, l2) {
            return Ok(Translation::by_construction(h.clone(), source, target, "inverse image"));
        }
    }
    if matches!(l2.provider(), Provider::Top) {
        return Ok(Translation::by_construction(h.clone(), source, target, "target derives everything"));
    }
    let status = match l.presentation() {
        Some(pres) => generators(&pres, h, l2, budget),
        None => audit(h, l, l2, budget),
    };
    Ok(Translation {
        strict: h.as_strict(),
        morphism: h.clone(),
        source,
        target,
        status,
    })
}

fn generators(pres: &Calculus, h: &FlexibleMorphism, l2: &Logic, budget: &Budget) -> Status {
    if let Some(evidence) = l2.calculus().and_then(|t| verbatim(pres, h, t)) {
        return Status::Verified { evidence };
    }
    let mut axioms = Vec::new();
    let mut rules = Vec::new();
    let mut unknown = None;
    for (i, a) in pres.axioms().iter().enumerate() {
        let image = h.extend(&a.formula);
        match l2.answer(&[], &image, budget) {
            Answer::Yes { evidence } => axioms.push(evidence),
            Answer::No { refutation } => {
                return Status::Refuted {
                    witness: Box::new(Witness {
                        gamma: vec![],
                        phi: a.formula.clone(),
                        image_gamma: vec![],
                        image_phi: image,
                        source_evidence: axiom_proof(pres, i),
                        refutation,
                    }),
                }
            }
            Answer::Unknown { reason } => {
                unknown = unknown.or(Some(format!("axiom `{}`: {reason}", a.name)));
            }
        }
    }
    for (i, r) in pres.rules().iter().enumerate() {
        let premises: Vec<Formula> = r.premises.iter().map(|p| h.extend(p)).collect();
        let image = h.extend(&r.conclusion);
        match l2.answer(&premises, &image, budget) {
            Answer::Yes { evidence } => rules.push(evidence),
            Answer::No { refutation } => {
                return Status::Refuted {
                    witness: Box::new(Witness {
                        gamma: r.premises.clone(),
                        phi: r.conclusion.clone(),
                        image_gamma: premises,
                        image_phi: image,
                        source_evidence: rule_proof(pres, i),
                        refutation,
                    }),
                }
            }
            Answer::Unknown { reason } => {
                unknown = unknown.or(Some(format!("rule `{}`: {reason}", r.name)));
            }
        }
    }
    match unknown {
        Some(reason) => Status::Unknown { reason },
        None => Status::Verified {
            evidence: TranslationEvidence::Generators { axioms, rules },
        },
    }
}

/// Sequents with at most one hypothesis over formulas of complexity ≤ 2.
fn audit(h: &FlexibleMorphism, l: &Logic, l2: &Logic, budget: &Budget) -> Status {
    let formulas = formulas_upto(l.signature(), budget.vars.max(1), budget.enum_compl.min(2));
    let contexts: Vec<Vec<Formula>> = std::iter::once(vec![])
        .chain(formulas.iter().map(|f| vec![f.clone()]))
        .collect();
    for gamma in &contexts {
        for phi in &formulas {
            let Answer::Yes { evidence } = l.answer(gamma, phi, budget) else {
                continue;
            };
            let image_gamma: Vec<Formula> = gamma.iter().map(|g| h.extend(g)).collect();
            let image_phi = h.extend(phi);
            if let Answer::No { refutation } = l2.answer(&image_gamma, &image_phi, budget) {
                return Status::Refuted {
                    witness: Box::new(Witness {
                        gamma: gamma.clone(),
                        phi: phi.clone(),
                        image_gamma,
                        image_phi,
                        source_evidence: evidence,
                        refutation,
                    }),
                };
            }
        }
    }
    Status::Unknown {
        reason: format!(
            "no generating presentation; audit of {} sequents found no counterexample",
            contexts.len() * formulas.len()
        ),
    }
}
