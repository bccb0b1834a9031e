//! The slice signature `T(Σ)` and the adjunction data `η`, `ε`, `μ`, `(−)`, `♯`, `♭`.
//!
//! `T(Σ)` has one `n`-ary connective `[φ]` for every `φ ∈ F(Σ)[n]`, so it is
//! never finite. Every construction here works on a finite sub-signature of it:
//! either a truncation by complexity or the image of some finite map.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::enumerate::enumerate_slice;
use crate::error::{Error, Result};
use crate::flexible::FlexibleMorphism;
use crate::formula::Formula;
use crate::signature::{Signature, StrictMorphism, Symbol};

/// The slice a formula belongs to, if its variables are an initial segment.
pub fn slice_arity(phi: &Formula) -> Option<usize> {
    let n = phi.variables().len();
    phi.in_slice(n).then_some(n)
}

/// `T(Σ)` truncated to arities `≤ max_arity` and complexity `≤ max_compl`.
pub fn t_signature(sig: &Signature, max_arity: usize, max_compl: usize) -> Signature {
    let mut out = Signature::new(format!("T({})", sig.name()));
    for n in 0..=max_arity {
        for phi in enumerate_slice(sig, n, max_compl) {
            out.add(Symbol::slice(phi), n).expect("slices are disjoint");
        }
    }
    out
}

/// The finite sub-signature of `T(Σ)` spanned by `formulas`.
pub fn slice_signature(name: impl Into<String>, formulas: impl IntoIterator<Item = Formula>) -> Result<Signature> {
    let mut out = Signature::new(name);
    for phi in formulas {
        let n = slice_arity(&phi).ok_or_else(|| Error::SliceViolation {
            symbol: format!("[{phi}]"),
            formula: phi.to_string(),
            arity: phi.variables().len(),
        })?;
        let s = Symbol::slice(phi);
        if !out.contains(&s) {
            out.add(s, n)?;
        }
    }
    Ok(out)
}

/// `ε̌`: evaluates a formula over slice connectives by substitution, `[ψ](χ⃗) ↦ ψ[x⃗ | χ⃗]`.
/// Returns `None` when a non-slice connective occurs.
pub fn flatten(phi: &Formula) -> Option<Formula> {
    match phi {
        Formula::Var(i) => Some(Formula::Var(*i)),
        Formula::App(Symbol::Slice(psi), args) => {
            let args = args.iter().map(flatten).collect::<Option<Vec<_>>>()?;
            Some(psi.instantiate(&args))
        }
        Formula::App(..) => None,
    }
}

fn image_morphism(
    source: Arc<Signature>,
    name: String,
    image: impl Fn(&Symbol, usize) -> Result<Formula>,
) -> Result<StrictMorphism> {
    let mut pairs = Vec::new();
    for (c, a) in source.connectives() {
        pairs.push((c.clone(), image(c, a)?));
    }
    let target = Arc::new(slice_signature(name, pairs.iter().map(|(_, f)| f.clone()))?);
    let map = pairs.into_iter().map(|(c, f)| (c, Symbol::slice(f))).collect();
    StrictMorphism::new(source, target, map)
}

/// `η_Σ = j_Σ : Σ → T(Σ)`, `c ↦ [c(x⃗)]`, with codomain the generator slices.
pub fn unit(sig: Arc<Signature>) -> StrictMorphism {
    let name = format!("T({})", sig.name());
    image_morphism(sig, name, |c, a| Ok(Formula::generator(c.clone(), a)))
        .expect("generators lie in their slices")
}

/// `ε` restricted to a finite sub-signature of `T(base)`: `[φ] ↦ φ`.
pub fn counit(tsig: Arc<Signature>, base: Arc<Signature>) -> Result<FlexibleMorphism> {
    let mut assignment = BTreeMap::new();
    for (c, _) in tsig.connectives() {
        let phi = c
            .as_slice()
            .ok_or_else(|| Error::SignatureMismatch(format!("{c} is not a slice connective")))?;
        assignment.insert(c.clone(), phi.clone());
    }
    FlexibleMorphism::new(tsig, base, assignment)
}

/// `μ` restricted to a finite sub-signature of `T(T(Σ))`: `[Φ] ↦ [ε̌(Φ)]`.
pub fn mu(ttsig: Arc<Signature>) -> Result<StrictMorphism> {
    let name = format!("mu({})", ttsig.name());
    image_morphism(ttsig, name, |c, _| {
        c.as_slice()
            .and_then(flatten)
            .ok_or_else(|| Error::SignatureMismatch(format!("{c} is not a doubly sliced connective")))
    })
}

/// `T(f)` restricted to a finite sub-signature of `T(Σ)`: `[φ] ↦ [f̂(φ)]`.
pub fn t_map(f: &StrictMorphism, domain: Arc<Signature>) -> Result<StrictMorphism> {
    let name = format!("T({})", f.target().name());
    image_morphism(domain, name, |c, _| {
        let phi = c
            .as_slice()
            .ok_or_else(|| Error::SignatureMismatch(format!("{c} is not a slice connective")))?;
        f.try_extend(phi)
    })
}

/// `h⁻` restricted to a finite sub-signature of `T(Σ)`: `[φ] ↦ [ȟ(φ)]`.
pub fn minus_on(h: &FlexibleMorphism, domain: Arc<Signature>) -> Result<StrictMorphism> {
    let name = format!("T({})", h.target().name());
    image_morphism(domain, name, |c, _| {
        let phi = c
            .as_slice()
            .ok_or_else(|| Error::SignatureMismatch(format!("{c} is not a slice connective")))?;
        h.try_extend(phi)
    })
}

/// `h⁻` on the truncation of `T(source)` at `max_compl`, arities up to the source's maximum.
pub fn minus(h: &FlexibleMorphism, max_compl: usize) -> StrictMorphism {
    let domain = t_signature(h.source(), h.source().max_arity(), max_compl);
    minus_on(h, Arc::new(domain)).expect("truncations contain only slice connectives")
}

/// `h♯ : Σ → T(Σ')`, with codomain the slices actually used.
pub fn sharp(h: &FlexibleMorphism) -> StrictMorphism {
    let name = format!("T({})", h.target().name());
    image_morphism(h.source().clone(), name, |c, _| Ok(h.get(c).unwrap().clone()))
        .expect("assignments lie in their slices")
}

/// `h♯` landing in a given sub-signature of `T(Σ')`.
pub fn sharp_into(h: &FlexibleMorphism, tsig: Arc<Signature>) -> Result<StrictMorphism> {
    let map = h
        .assignment()
        .iter()
        .map(|(c, phi)| (c.clone(), Symbol::slice(phi.clone())))
        .collect();
    StrictMorphism::new(h.source().clone(), tsig, map)
}

/// `f♭` for `f : Σ → T(base)`.
pub fn flat(f: &StrictMorphism, base: Arc<Signature>) -> Result<FlexibleMorphism> {
    let mut assignment = BTreeMap::new();
    for (c, d) in f.map() {
        let phi = d
            .as_slice()
            .ok_or_else(|| Error::SignatureMismatch(format!("{d} is not a slice connective")))?;
        assignment.insert(c.clone(), phi.clone());
    }
    FlexibleMorphism::new(f.source().clone(), base, assignment)
}

/// The right-hand side of the Kleisli identity, `(μ ∘ T(f2♯) ∘ f1♯)♭`, built from
/// actual morphisms rather than by substitution.
pub fn kleisli_via_monad(f1: &FlexibleMorphism, f2: &FlexibleMorphism) -> Result<FlexibleMorphism> {
    if !f1.target().same_connectives(f2.source()) {
        return Err(Error::NotComposable("Kleisli pair does not chain".into()));
    }
    let s1 = sharp(f1);
    let t = t_map(&sharp(f2), s1.target().clone())?;
    let m = mu(t.target().clone())?;
    let composite = s1.then(&t)?.then(&m)?;
    flat(&composite, f2.target().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn sig() -> Arc<Signature> {
        Arc::new(Signature::from_pairs("S", [("neg", 1), ("imp", 2)]).unwrap())
    }

    #[test]
    fn unit_sends_connectives_to_generators() {
        let eta = unit(Arc::new(Signature::from_pairs("N", [("neg", 1)]).unwrap()));
        let image = eta.apply(&"neg".into()).unwrap();
        assert_eq!(image.to_string(), "[neg(x0)]");
        assert_eq!(eta.target().arity(image), Some(1));
    }

    #[test]
    fn flatten_substitutes() {
        let s = sig();
        let inner = Symbol::slice(parse("imp(x0, neg(x1))", &s).unwrap());
        let neg = Symbol::slice(parse("neg(x0)", &s).unwrap());
        let phi = Formula::App(inner, vec![Formula::App(neg, vec![Formula::Var(1)]), Formula::Var(0)]);
        assert_eq!(flatten(&phi).unwrap(), parse("imp(neg(x1), neg(x0))", &s).unwrap());
    }

    #[test]
    fn minus_of_identity_is_identity() {
        let s = sig();
        let m = minus(&FlexibleMorphism::identity(s.clone()), 2);
        assert!(m.map().iter().all(|(a, b)| a == b));
        assert_eq!(m.source().len(), t_signature(&s, 2, 2).len());
    }

    #[test]
    fn sharp_flat_round_trip() {
        let s = sig();
        let h = FlexibleMorphism::parse_pairs(s.clone(), s.clone(), [("neg", "imp(x0, x0)"), ("imp", "imp(x1, x0)")]).unwrap();
        assert_eq!(flat(&sharp(&h), s).unwrap(), h);
    }

    #[test]
    fn truncation_counts() {
        let s = sig();
        let t = t_signature(&s, 2, 2);
        // slice 1: one of complexity 0, two of complexity 1, six of complexity 2
        assert_eq!(t.of_arity(0).count(), 0);
        assert_eq!(t.of_arity(1).count(), 9);
    }
}
