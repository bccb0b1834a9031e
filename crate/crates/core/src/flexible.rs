//! Flexible morphisms: connectives sent to formulas of the matching slice.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::enumerate::enumerate_slice;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::signature::{Signature, StrictMorphism, Symbol};

/// A morphism of `S_f`, stored in its `♯` form: each `n`-ary connective of the
/// source is assigned a target formula whose variable set is exactly `{x0..x_{n-1}}`.
#[derive(Clone, PartialEq, Eq)]
pub struct FlexibleMorphism {
    source: Arc<Signature>,
    target: Arc<Signature>,
    assignment: BTreeMap<Symbol, Formula>,
}

impl FlexibleMorphism {
    pub fn new(
        source: Arc<Signature>,
        target: Arc<Signature>,
        assignment: BTreeMap<Symbol, Formula>,
    ) -> Result<Self> {
        for (c, arity) in source.connectives() {
            let phi = assignment
                .get(c)
                .ok_or_else(|| Error::Unmapped(c.to_string()))?;
            target.check(phi)?;
            if !phi.in_slice(arity) {
                return Err(Error::SliceViolation {
                    symbol: c.to_string(),
                    formula: phi.to_string(),
                    arity,
                });
            }
        }
        if let Some(extra) = assignment.keys().find(|k| !source.contains(k)) {
            return Err(Error::UnknownConnective(extra.to_string()));
        }
        Ok(FlexibleMorphism {
            source,
            target,
            assignment,
        })
    }

    /// Parses `(connective, formula)` pairs against the two signatures.
    pub fn parse_pairs<'a>(
        source: Arc<Signature>,
        target: Arc<Signature>,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut assignment = BTreeMap::new();
        for (c, text) in pairs {
            assignment.insert(Symbol::name(c)?, crate::formula::parse(text, &target)?);
        }
        FlexibleMorphism::new(source, target, assignment)
    }

    pub(crate) fn new_unchecked(
        source: Arc<Signature>,
        target: Arc<Signature>,
        assignment: BTreeMap<Symbol, Formula>,
    ) -> Self {
        FlexibleMorphism {
            source,
            target,
            assignment,
        }
    }

    /// The identity of `S_f` on `sig`, i.e. `j_Σ`: `c ↦ c(x0, …, x_{n-1})`.
    pub fn identity(sig: Arc<Signature>) -> Self {
        let assignment = sig
            .connectives()
            .map(|(c, a)| (c.clone(), Formula::generator(c.clone(), a)))
            .collect();
        FlexibleMorphism {
            source: sig.clone(),
            target: sig,
            assignment,
        }
    }

    /// The functor `(+)`: `f ↦ (j_{Σ'} ∘ f)♭`.
    pub fn lift(f: &StrictMorphism) -> Self {
        let assignment = f
            .source()
            .connectives()
            .map(|(c, a)| (c.clone(), Formula::generator(f.map()[c].clone(), a)))
            .collect();
        FlexibleMorphism {
            source: f.source().clone(),
            target: f.target().clone(),
            assignment,
        }
    }

    pub fn source(&self) -> &Arc<Signature> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Signature> {
        &self.target
    }

    pub fn assignment(&self) -> &BTreeMap<Symbol, Formula> {
        &self.assignment
    }

    pub fn get(&self, c: &Symbol) -> Option<&Formula> {
        self.assignment.get(c)
    }

    /// The extension `ȟ`: `ȟ(c(ψ⃗)) = h(c)[x⃗ | ȟ(ψ⃗)]`, variables fixed.
    pub fn extend(&self, phi: &Formula) -> Formula {
        match phi {
            Formula::Var(i) => Formula::Var(*i),
            Formula::App(c, args) => {
                let image = self
                    .assignment
                    .get(c)
                    .unwrap_or_else(|| panic!("connective {c} is not in the source signature"));
                let args: Vec<Formula> = args.iter().map(|a| self.extend(a)).collect();
                image.instantiate(&args)
            }
        }
    }

    pub fn try_extend(&self, phi: &Formula) -> Result<Formula> {
        self.source.check(phi)?;
        Ok(self.extend(phi))
    }

    /// Kleisli composite `next • self`: `c ↦ ňext(self(c))`.
    pub fn then(&self, next: &FlexibleMorphism) -> Result<FlexibleMorphism> {
        if !self.target.same_connectives(&next.source) {
            return Err(Error::NotComposable(format!(
                "target {} differs from source {}",
                self.target.name(),
                next.source.name()
            )));
        }
        let assignment = self
            .assignment
            .iter()
            .map(|(c, phi)| (c.clone(), next.extend(phi)))
            .collect();
        Ok(FlexibleMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            assignment,
        })
    }

    /// The strict morphism this is a lift of, if every assignment is a generator formula.
    pub fn as_strict(&self) -> Option<StrictMorphism> {
        let mut map = BTreeMap::new();
        for (c, phi) in &self.assignment {
            match phi {
                Formula::App(d, args)
                    if args.iter().enumerate().all(|(i, a)| *a == Formula::Var(i as u32)) =>
                {
                    map.insert(c.clone(), d.clone());
                }
                _ => return None,
            }
        }
        StrictMorphism::new(self.source.clone(), self.target.clone(), map).ok()
    }

    /// `Ok(())` if no unary connective is sent to the bare variable; otherwise a
    /// formula whose complexity strictly drops under the extension.
    pub fn regularity(&self) -> std::result::Result<(), Formula> {
        for (c, phi) in &self.assignment {
            if self.source.arity(c) == Some(1) && *phi == Formula::Var(0) {
                return Err(Formula::App(c.clone(), vec![Formula::Var(0)]));
            }
        }
        Ok(())
    }

    pub fn is_regular(&self) -> bool {
        self.regularity().is_ok()
    }

    /// Every assignment is a single connective applied to a permutation of
    /// `x0..x_{n-1}`. These are exactly the morphisms whose extension preserves
    /// the complexity of every formula.
    pub fn preserves_complexity(&self) -> bool {
        self.assignment.values().all(|phi| match phi {
            Formula::App(_, args) => {
                let mut seen = vec![false; args.len()];
                args.iter().all(|a| match a {
                    Formula::Var(i) if (*i as usize) < seen.len() && !seen[*i as usize] => {
                        seen[*i as usize] = true;
                        true
                    }
                    _ => false,
                })
            }
            Formula::Var(_) => false,
        })
    }

    pub fn max_assignment_complexity(&self) -> usize {
        self.assignment.values().map(Formula::complexity).max().unwrap_or(0)
    }

    /// Connectives occurring in some assigned formula.
    pub fn image_signature(&self) -> Signature {
        let mut sig = Signature::new(format!("im({})", self.target.name()));
        for phi in self.assignment.values() {
            for s in phi.symbols() {
                if !sig.contains(s) {
                    let _ = sig.add(s.clone(), self.target.arity(s).unwrap_or(0));
                }
            }
        }
        sig
    }
}

impl fmt::Debug for FlexibleMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {{", self.source.name(), self.target.name())?;
        for (i, (c, phi)) in self.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, " {c} -> {phi}")?;
        }
        f.write_str(" }")
    }
}

impl Serialize for FlexibleMorphism {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let assignment: BTreeMap<String, String> = self
            .assignment
            .iter()
            .map(|(c, phi)| (c.to_string(), phi.to_string()))
            .collect();
        let mut st = serializer.serialize_struct("FlexibleMorphism", 3)?;
        st.serialize_field("source", self.source.name())?;
        st.serialize_field("target", self.target.name())?;
        st.serialize_field("assignment", &assignment)?;
        st.end()
    }
}

/// Ordered by assignment only; used to collect morphisms with a fixed source and target.
impl PartialOrd for FlexibleMorphism {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FlexibleMorphism {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.assignment().cmp(other.assignment())
    }
}

/// `h2 • h1`.
pub fn kleisli_compose(h2: &FlexibleMorphism, h1: &FlexibleMorphism) -> Result<FlexibleMorphism> {
    h1.then(h2)
}

/// A constant and a connective of arity at least two.
pub fn is_weak_terminal(sig: &Signature) -> bool {
    sig.of_arity(0).next().is_some() && sig.connectives().any(|(_, a)| a >= 2)
}

/// The fixed recipe into a weak terminal signature: an `n`-ary connective goes to
/// a tree of `k`-ary applications over `x0..x_{n-1}`, gaps filled with the constant.
pub fn weak_terminal_witness(source: Arc<Signature>, target: Arc<Signature>) -> Result<FlexibleMorphism> {
    let constant = target.of_arity(0).next().cloned();
    let wide = target
        .connectives()
        .filter(|(_, a)| *a >= 2)
        .min_by_key(|(_, a)| *a)
        .map(|(c, a)| (c.clone(), a));
    let (Some(constant), Some((wide, k))) = (constant, wide) else {
        return Err(Error::SignatureMismatch(format!(
            "{} has no constant or no connective of arity at least two",
            target.name()
        )));
    };
    let unit = Formula::App(constant, Vec::new());
    let mut assignment = BTreeMap::new();
    for (c, n) in source.connectives() {
        let phi = if n == 0 {
            unit.clone()
        } else {
            let mut items: Vec<Formula> = (0..n as u32).map(Formula::Var).collect();
            loop {
                let mut next = Vec::new();
                for chunk in items.chunks(k) {
                    let mut args = chunk.to_vec();
                    args.resize(k, unit.clone());
                    next.push(Formula::App(wide.clone(), args));
                }
                items = next;
                if items.len() == 1 {
                    break;
                }
            }
            items.pop().unwrap()
        };
        assignment.insert(c.clone(), phi);
    }
    FlexibleMorphism::new(source, target, assignment)
}

/// First morphism found by searching each slice up to `bound`, or `None` if some
/// connective's slice is empty within the bound.
pub fn find_morphism(source: &Arc<Signature>, target: &Arc<Signature>, bound: usize) -> Option<FlexibleMorphism> {
    let mut assignment = BTreeMap::new();
    for (c, n) in source.connectives() {
        let phi = enumerate_slice(target, n, bound).into_iter().next()?;
        assignment.insert(c.clone(), phi);
    }
    Some(FlexibleMorphism::new_unchecked(source.clone(), target.clone(), assignment))
}

/// Every flexible morphism `source → target` with assignments of complexity ≤ `bound`.
pub fn all_flexible_morphisms(
    source: &Arc<Signature>,
    target: &Arc<Signature>,
    bound: usize,
) -> Vec<FlexibleMorphism> {
    let mut slices: BTreeMap<usize, Vec<Formula>> = BTreeMap::new();
    let choices: Vec<(Symbol, usize)> = source.connectives().map(|(c, a)| (c.clone(), a)).collect();
    for (_, a) in &choices {
        slices
            .entry(*a)
            .or_insert_with(|| enumerate_slice(target, *a, bound));
    }
    let mut out = Vec::new();
    let mut current = BTreeMap::new();
    fn go(
        i: usize,
        choices: &[(Symbol, usize)],
        slices: &BTreeMap<usize, Vec<Formula>>,
        current: &mut BTreeMap<Symbol, Formula>,
        src: &Arc<Signature>,
        tgt: &Arc<Signature>,
        out: &mut Vec<FlexibleMorphism>,
    ) {
        if i == choices.len() {
            out.push(FlexibleMorphism::new_unchecked(src.clone(), tgt.clone(), current.clone()));
            return;
        }
        let (c, a) = &choices[i];
        for phi in &slices[a] {
            current.insert(c.clone(), phi.clone());
            go(i + 1, choices, slices, current, src, tgt, out);
        }
        current.remove(c);
    }
    go(0, &choices, &slices, &mut current, source, target, &mut out);
    out
}

/// Number of morphisms [`all_flexible_morphisms`] would produce, without building them.
pub fn count_flexible_morphisms(source: &Signature, target: &Signature, bound: usize) -> usize {
    let mut sizes: BTreeMap<usize, usize> = BTreeMap::new();
    source.connectives().fold(1usize, |acc, (_, a)| {
        let s = *sizes
            .entry(a)
            .or_insert_with(|| enumerate_slice(target, a, bound).len());
        acc.saturating_mul(s)
    })
}
