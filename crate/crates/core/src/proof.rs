//! Proof objects: checkable sequences of formulas with justifications.

use serde::Serialize;

use crate::calculus::Calculus;
use crate::flexible::FlexibleMorphism;
use crate::formula::{Formula, Substitution};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "by", rename_all = "snake_case")]
pub enum Justification {
    Hypothesis,
    Axiom {
        index: usize,
        subst: Substitution,
    },
    Rule {
        index: usize,
        subst: Substitution,
        premises: Vec<usize>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub formula: Formula,
    #[serde(flatten)]
    pub justification: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Proof {
    pub steps: Vec<Step>,
}

impl Proof {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn conclusion(&self) -> Option<&Formula> {
        self.steps.last().map(|s| &s.formula)
    }

    /// The finite part of the context the proof actually uses.
    pub fn used_hypotheses(&self) -> Vec<Formula> {
        let mut out: Vec<Formula> = self
            .steps
            .iter()
            .filter(|s| s.justification == Justification::Hypothesis)
            .map(|s| s.formula.clone())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Checks every step against `calculus` and `gamma` and that the last step is `phi`.
    pub fn check(&self, calculus: &Calculus, gamma: &[Formula], phi: &Formula) -> Result<(), String> {
        let last = self.steps.last().ok_or("empty proof")?;
        for (i, step) in self.steps.iter().enumerate() {
            calculus
                .signature()
                .check(&step.formula)
                .map_err(|e| format!("step {i}: {e}"))?;
            match &step.justification {
                Justification::Hypothesis => {
                    if !gamma.contains(&step.formula) {
                        return Err(format!("step {i}: `{}` is not a hypothesis", step.formula));
                    }
                }
                Justification::Axiom { index, subst } => {
                    let axiom = calculus
                        .axioms()
                        .get(*index)
                        .ok_or_else(|| format!("step {i}: no axiom {index}"))?;
                    if subst.apply(&axiom.formula) != step.formula {
                        return Err(format!("step {i}: not an instance of axiom `{}`", axiom.name));
                    }
                }
                Justification::Rule {
                    index,
                    subst,
                    premises,
                } => {
                    let rule = calculus
                        .rules()
                        .get(*index)
                        .ok_or_else(|| format!("step {i}: no rule {index}"))?;
                    if premises.len() != rule.premises.len() {
                        return Err(format!("step {i}: rule `{}` needs {} premises", rule.name, rule.premises.len()));
                    }
                    for (p, scheme) in premises.iter().zip(&rule.premises) {
                        if *p >= i {
                            return Err(format!("step {i}: premise {p} is not earlier"));
                        }
                        if self.steps[*p].formula != subst.apply(scheme) {
                            return Err(format!("step {i}: premise {p} does not match rule `{}`", rule.name));
                        }
                    }
                    if subst.apply(&rule.conclusion) != step.formula {
                        return Err(format!("step {i}: not an instance of rule `{}`", rule.name));
                    }
                }
            }
        }
        if &last.formula != phi {
            return Err(format!("proof ends in `{}`, not `{phi}`", last.formula));
        }
        Ok(())
    }

    pub fn verifies(&self, calculus: &Calculus, gamma: &[Formula], phi: &Formula) -> bool {
        self.check(calculus, gamma, phi).is_ok()
    }

    /// The proof of `σ̃[Γ] ⊢ σ̃(φ)` obtained by pushing `sigma` through every step.
    pub fn substituted(&self, sigma: &Substitution) -> Proof {
        let steps = self
            .steps
            .iter()
            .map(|s| Step {
                formula: sigma.apply(&s.formula),
                justification: match &s.justification {
                    Justification::Hypothesis => Justification::Hypothesis,
                    Justification::Axiom { index, subst } => Justification::Axiom {
                        index: *index,
                        subst: sigma.after(subst),
                    },
                    Justification::Rule {
                        index,
                        subst,
                        premises,
                    } => Justification::Rule {
                        index: *index,
                        subst: sigma.after(subst),
                        premises: premises.clone(),
                    },
                },
            })
            .collect();
        Proof { steps }
    }

    /// Transports a proof along a translation `g` whose generators are witnessed by
    /// `axiom_proofs[k]` (a proof of `ǧ(B_k)`) and `rule_proofs[j]` (a proof of the
    /// translated conclusion from the translated premises).
    ///
    /// Returns `None` if the witnesses do not have the expected shape.
    pub fn translate(&self, g: &FlexibleMorphism, axiom_proofs: &[Proof], rule_proofs: &[Proof]) -> Option<Proof> {
        let mut out: Vec<Step> = Vec::new();
        let mut position: Vec<usize> = Vec::with_capacity(self.steps.len());
        for step in &self.steps {
            let image = g.extend(&step.formula);
            let (witness, subst, premises): (&Proof, &Substitution, &[usize]) = match &step.justification {
                Justification::Hypothesis => {
                    out.push(Step {
                        formula: image,
                        justification: Justification::Hypothesis,
                    });
                    position.push(out.len() - 1);
                    continue;
                }
                Justification::Axiom { index, subst } => (axiom_proofs.get(*index)?, subst, &[]),
                Justification::Rule {
                    index,
                    subst,
                    premises,
                } => (rule_proofs.get(*index)?, subst, premises),
            };
            // ǧ(σ̃ψ) = (ǧ∘σ)~(ǧψ)
            let lifted = Substitution::from_pairs(subst.support().map(|(i, f)| (i, g.extend(f))));
            let inlined = witness.substituted(&lifted);
            let mut local = Vec::with_capacity(inlined.steps.len());
            for s in inlined.steps {
                let justification = match s.justification {
                    Justification::Hypothesis => {
                        let hit = premises
                            .iter()
                            .map(|p| position[*p])
                            .find(|q| out[*q].formula == s.formula)?;
                        local.push(hit);
                        continue;
                    }
                    Justification::Rule {
                        index,
                        subst,
                        premises,
                    } => Justification::Rule {
                        index,
                        subst,
                        premises: premises.iter().map(|p| local[*p]).collect(),
                    },
                    axiom => axiom,
                };
                out.push(Step {
                    formula: s.formula,
                    justification,
                });
                local.push(out.len() - 1);
            }
            let last = *local.last()?;
            if out[last].formula != image {
                return None;
            }
            position.push(last);
        }
        let last = *position.last()?;
        if last + 1 != out.len() {
            let copy = out[last].clone();
            out.push(copy);
        }
        Some(Proof { steps: out })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::calculus::Rule;
    use crate::formula::parse;
    use crate::signature::Signature;

    fn mp_calculus() -> Calculus {
        let s = Arc::new(Signature::from_pairs("I", [("imp", 2)]).unwrap());
        let mp = Rule {
            name: "MP".into(),
            premises: vec![parse("x0", &s).unwrap(), parse("imp(x0, x1)", &s).unwrap()],
            conclusion: parse("x1", &s).unwrap(),
        };
        Calculus::new(s, vec![], vec![mp]).unwrap()
    }

    fn mp_proof(c: &Calculus) -> (Vec<Formula>, Formula, Proof) {
        let s = c.signature();
        let a = parse("x0", s).unwrap();
        let ab = parse("imp(x0, x1)", s).unwrap();
        let b = parse("x1", s).unwrap();
        let proof = Proof {
            steps: vec![
                Step {
                    formula: a.clone(),
                    justification: Justification::Hypothesis,
                },
                Step {
                    formula: ab.clone(),
                    justification: Justification::Hypothesis,
                },
                Step {
                    formula: b.clone(),
                    justification: Justification::Rule {
                        index: 0,
                        subst: Substitution::identity(),
                        premises: vec![0, 1],
                    },
                },
            ],
        };
        (vec![a, ab], b, proof)
    }

    #[test]
    fn modus_ponens_checks() {
        let c = mp_calculus();
        let (gamma, phi, proof) = mp_proof(&c);
        assert_eq!(proof.check(&c, &gamma, &phi), Ok(()));
        assert_eq!(proof.used_hypotheses().len(), 2);
    }

    #[test]
    fn forward_reference_fails() {
        let c = mp_calculus();
        let (gamma, phi, mut proof) = mp_proof(&c);
        proof.steps.rotate_right(1);
        if let Justification::Rule { premises, .. } = &mut proof.steps[0].justification {
            *premises = vec![1, 2];
        }
        let conclusion = proof.steps.remove(0);
        proof.steps.insert(0, conclusion.clone());
        proof.steps.push(Step {
            formula: phi.clone(),
            justification: conclusion.justification,
        });
        assert!(!proof.verifies(&c, &gamma, &phi));
    }

    #[test]
    fn substitution_is_pushed_through() {
        let c = mp_calculus();
        let (gamma, phi, proof) = mp_proof(&c);
        let s = c.signature();
        let sigma = Substitution::from_pairs([(0, parse("imp(x1, x2)", s).unwrap()), (1, Formula::Var(0))]);
        let moved = proof.substituted(&sigma);
        let gamma: Vec<Formula> = gamma.iter().map(|g| sigma.apply(g)).collect();
        assert_eq!(moved.check(&c, &gamma, &sigma.apply(&phi)), Ok(()));
    }
}
