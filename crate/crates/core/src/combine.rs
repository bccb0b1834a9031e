//! Combinations of logics: images along morphisms, fibring, products, chain colimits.

use std::sync::Arc;

use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::flexible::FlexibleMorphism;
use crate::logic::{Logic, Provider};
use crate::search::Budget;
use crate::signature::{chain_colimit, coproduct, product, pushout, Signature, StrictMorphism};
use crate::translation::{check_translation, Translation};

/// A combined logic together with its cocone (or cone) of translations.
#[derive(Clone, Debug)]
pub struct Combined {
    pub logic: Logic,
    pub legs: Vec<Translation>,
}

/// `f⋆(⊢′)` over the source of `h`: `Γ ⊢ ψ` iff `ȟ[Γ] ⊢′ ȟ(ψ)`.
pub fn inverse_image(h: &FlexibleMorphism, target: &Logic) -> Result<Logic> {
    Logic::new(
        format!("{}^-1({})", target.name(), h.source().name()),
        h.source().clone(),
        Provider::InverseImage {
            morphism: h.clone(),
            target: Box::new(target.clone()),
        },
    )
}

/// The logic over the target of `h` presented by the translated axioms and rules.
pub fn direct_image(h: &FlexibleMorphism, l: &Logic) -> Result<Logic> {
    let pres = l
        .presentation()
        .ok_or_else(|| Error::Unsupported(format!("`{}` has no generating presentation", l.name())))?;
    Ok(Logic::from_calculus(
        format!("{}_*({})", h.target().name(), l.name()),
        pres.direct_image(h)?,
    ))
}

fn presentation(l: &Logic) -> Result<Calculus> {
    l.presentation()
        .ok_or_else(|| Error::Unsupported(format!("`{}` has no generating presentation", l.name())))
}

/// Union of the presentations pushed along `legs` into `signature`, plus the
/// legs as translations that hold by construction.
fn glue(name: String, signature: Arc<Signature>, parts: &[Logic], legs: &[StrictMorphism]) -> Result<Combined> {
    let mut calculus = Calculus::empty(signature.clone());
    for (l, leg) in parts.iter().zip(legs) {
        calculus.extend_with(&presentation(l)?.direct_image(&FlexibleMorphism::lift(leg))?)?;
    }
    let logic = Logic::from_calculus(name, calculus);
    let target = Arc::new(logic.clone());
    let budget = Budget::default();
    let legs = parts
        .iter()
        .zip(legs)
        .map(|(l, leg)| check_translation(&FlexibleMorphism::lift(leg), l, &target, &budget))
        .collect::<Result<Vec<_>>>()?;
    debug_assert!(legs.iter().all(Translation::is_verified));
    Ok(Combined { logic, legs })
}

/// Fibring without shared symbols: the coproduct of the signatures with the union
/// of the injected presentations.
pub fn fibring_unconstrained(l1: &Logic, l2: &Logic) -> Result<Combined> {
    let co = coproduct(&[l1.signature().clone(), l2.signature().clone()]);
    glue(
        format!("{}+{}", l1.name(), l2.name()),
        co.signature.clone(),
        &[l1.clone(), l2.clone()],
        &co.injections,
    )
}

/// Fibring over a shared logic along a span of strict translations `l1 ← l0 → l2`.
pub fn fibring_constrained(to_left: &Translation, to_right: &Translation) -> Result<Combined> {
    let (Some(f1), Some(f2)) = (&to_left.strict, &to_right.strict) else {
        return Err(Error::Unsupported(
            "constrained fibring is defined for spans of strict morphisms".into(),
        ));
    };
    let q = pushout(f1, f2)?;
    glue(
        format!("{}+{}/{}", to_left.target.name(), to_right.target.name(), to_left.source.name()),
        q.signature.clone(),
        &[(*to_left.target).clone(), (*to_right.target).clone()],
        &q.legs,
    )
}

/// Binary product: `Γ ⊢ ψ` iff both projected sequents hold.
pub fn product_logic(l1: &Logic, l2: &Logic) -> Result<Combined> {
    let p = product(&[l1.signature().clone(), l2.signature().clone()])?;
    let logic = Logic::new(
        format!("{}*{}", l1.name(), l2.name()),
        p.signature.clone(),
        Provider::Product {
            factors: vec![l1.clone(), l2.clone()],
            projections: p.projections.clone(),
        },
    )?;
    let source = Arc::new(logic.clone());
    let legs = [l1, l2]
        .iter()
        .zip(&p.projections)
        .map(|(l, proj)| {
            Translation::by_construction(
                FlexibleMorphism::lift(proj),
                source.clone(),
                Arc::new((*l).clone()),
                "projection of a product",
            )
        })
        .collect();
    Ok(Combined { logic, legs })
}

/// Colimit of a finite chain of strict translations `l0 → l1 → … → lk`.
pub fn directed_colimit_logics(chain: &[Translation]) -> Result<Combined> {
    let steps = chain
        .iter()
        .map(|t| {
            t.strict
                .clone()
                .ok_or_else(|| Error::Unsupported("chain colimits need strict translations".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut stages: Vec<Logic> = vec![(*chain[0].source).clone()];
    for (i, t) in chain.iter().enumerate() {
        if !t.source.signature().same_connectives(stages.last().unwrap().signature()) {
            return Err(Error::NotComposable(format!("chain breaks at step {i}")));
        }
        stages.push((*t.target).clone());
    }
    let q = chain_colimit(&steps)?;
    let names: Vec<&str> = stages.iter().map(|l| l.name()).collect();
    glue(format!("colim({})", names.join(", ")), q.signature.clone(), &stages, &q.legs)
}
