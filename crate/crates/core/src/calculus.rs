//! Hilbert calculi: axiom schemes and rule schemes over a signature.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flexible::FlexibleMorphism;
use crate::formula::Formula;
use crate::signature::Signature;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Axiom {
    pub name: String,
    pub formula: Formula,
}

/// A rule scheme with at least one premise.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Rule {
    pub name: String,
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Calculus {
    signature: Arc<Signature>,
    axioms: Vec<Axiom>,
    rules: Vec<Rule>,
}

impl Calculus {
    pub fn new(signature: Arc<Signature>, axioms: Vec<Axiom>, rules: Vec<Rule>) -> Result<Self> {
        for a in &axioms {
            signature.check(&a.formula)?;
        }
        for r in &rules {
            if r.premises.is_empty() {
                return Err(Error::InvalidCalculus(format!(
                    "rule `{}` has no premises; state it as an axiom",
                    r.name
                )));
            }
            for p in &r.premises {
                signature.check(p)?;
            }
            signature.check(&r.conclusion)?;
        }
        Ok(Calculus {
            signature,
            axioms,
            rules,
        })
    }

    /// The calculus with no axioms and no rules; it generates the least logic.
    pub fn empty(signature: Arc<Signature>) -> Self {
        Calculus {
            signature,
            axioms: Vec::new(),
            rules: Vec::new(),
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn axioms(&self) -> &[Axiom] {
        &self.axioms
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty() && self.rules.is_empty()
    }

    /// Union of presentations over the same signature. Duplicates are kept once.
    pub fn join(calculi: &[&Calculus]) -> Result<Calculus> {
        let first = calculi
            .first()
            .ok_or_else(|| Error::InvalidCalculus("join of no calculi".into()))?;
        let mut out = Calculus::empty(first.signature.clone());
        for c in calculi {
            if !c.signature.same_connectives(&first.signature) {
                return Err(Error::SignatureMismatch(format!(
                    "cannot join calculi over {} and {}",
                    first.signature.name(),
                    c.signature.name()
                )));
            }
            out.absorb(c.axioms.iter().cloned(), c.rules.iter().cloned());
        }
        Ok(out)
    }

    fn absorb(&mut self, axioms: impl IntoIterator<Item = Axiom>, rules: impl IntoIterator<Item = Rule>) {
        for a in axioms {
            if !self.axioms.iter().any(|b| b.formula == a.formula) {
                self.axioms.push(a);
            }
        }
        for r in rules {
            if !self
                .rules
                .iter()
                .any(|s| s.premises == r.premises && s.conclusion == r.conclusion)
            {
                self.rules.push(r);
            }
        }
    }

    /// The presentation pushed along `h`: axioms `ȟ[axioms]` and rules `ȟ[rules]`.
    pub fn direct_image(&self, h: &FlexibleMorphism) -> Result<Calculus> {
        if !h.source().same_connectives(&self.signature) {
            return Err(Error::SignatureMismatch(format!(
                "morphism source {} is not the calculus signature {}",
                h.source().name(),
                self.signature.name()
            )));
        }
        let mut out = Calculus::empty(h.target().clone());
        out.absorb(
            self.axioms.iter().map(|a| Axiom {
                name: a.name.clone(),
                formula: h.extend(&a.formula),
            }),
            self.rules.iter().map(|r| Rule {
                name: r.name.clone(),
                premises: r.premises.iter().map(|p| h.extend(p)).collect(),
                conclusion: h.extend(&r.conclusion),
            }),
        );
        Ok(out)
    }

    /// Adds the translations of other presentations, as in a union along a cocone.
    pub fn extend_with(&mut self, other: &Calculus) -> Result<()> {
        if !other.signature.is_subsignature_of(&self.signature) {
            return Err(Error::SignatureMismatch(format!(
                "{} is not contained in {}",
                other.signature.name(),
                self.signature.name()
            )));
        }
        self.absorb(other.axioms.iter().cloned(), other.rules.iter().cloned());
        Ok(())
    }

    /// Same presentation over a signature with the same connectives.
    pub fn over(&self, signature: Arc<Signature>) -> Result<Calculus> {
        Calculus::new(signature, self.axioms.clone(), self.rules.clone())
    }
}

impl Serialize for Calculus {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Calculus", 3)?;
        st.serialize_field("signature", self.signature.as_ref())?;
        st.serialize_field("axioms", &self.axioms)?;
        st.serialize_field("rules", &self.rules)?;
        st.end()
    }
}
