//! Signatures, strict morphisms and their componentwise (co)limits.
//!
//! A signature is a finite map from connective symbols to arities. Symbols are
//! either user names or structured identifiers produced by the constructions in
//! this module: coproduct tags, product tuples, and slice formulas (the
//! connectives of the formula-slice signature `T(Σ)`).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formula::Formula;

/// Characters that may not appear inside a connective name.
const RESERVED: &[char] = &['(', ')', ',', '[', ']', '{', '}', ':', ';', '=', '/', '|', '-'];

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Name(Arc<str>),
    /// Connective of a coproduct: summand index and the summand's symbol.
    Tag(usize, Box<Symbol>),
    /// Connective of a product: one symbol per factor.
    Tuple(Vec<Symbol>),
    /// Connective of a slice signature `T(Σ)`: a formula in `F(Σ)[n]`.
    Slice(Box<Formula>),
}

impl Symbol {
    /// Validated user-level name.
    pub fn name(name: &str) -> Result<Symbol> {
        if is_valid_name(name) {
            Ok(Symbol::Name(Arc::from(name)))
        } else {
            Err(Error::InvalidName(name.to_string()))
        }
    }

    pub fn tag(index: usize, symbol: Symbol) -> Symbol {
        Symbol::Tag(index, Box::new(symbol))
    }

    pub fn slice(formula: Formula) -> Symbol {
        Symbol::Slice(Box::new(formula))
    }

    pub fn as_slice(&self) -> Option<&Formula> {
        match self {
            Symbol::Slice(f) => Some(f),
            _ => None,
        }
    }
}

impl From<&str> for Symbol {
    /// Unchecked conversion for literals; use [`Symbol::name`] for untrusted input.
    fn from(name: &str) -> Self {
        debug_assert!(is_valid_name(name), "invalid connective name {name:?}");
        Symbol::Name(Arc::from(name))
    }
}

pub(crate) fn is_ident_char(c: char) -> bool {
    !c.is_whitespace() && !RESERVED.contains(&c)
}

pub(crate) fn looks_like_variable(s: &str) -> bool {
    s.len() > 1 && s.starts_with('x') && s[1..].bytes().all(|b| b.is_ascii_digit())
}

pub fn is_valid_name(name: &str) -> bool {
    !name.is_empty()
        && name.chars().all(is_ident_char)
        && !name.starts_with(|c: char| c.is_ascii_digit())
        && !looks_like_variable(name)
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Name(n) => f.write_str(n),
            Symbol::Tag(i, s) => write!(f, "{s}#{i}"),
            Symbol::Tuple(parts) => {
                f.write_str("<")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("&")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(">")
            }
            Symbol::Slice(phi) => write!(f, "[{phi}]"),
        }
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    name: String,
    connectives: BTreeMap<Symbol, usize>,
}

impl Signature {
    pub fn new(name: impl Into<String>) -> Self {
        Signature {
            name: name.into(),
            connectives: BTreeMap::new(),
        }
    }

    pub fn empty() -> Self {
        Signature::new("empty")
    }

    /// Builds a signature from `(name, arity)` pairs, validating names.
    pub fn from_pairs<'a>(
        name: impl Into<String>,
        pairs: impl IntoIterator<Item = (&'a str, usize)>,
    ) -> Result<Self> {
        let mut sig = Signature::new(name);
        for (n, a) in pairs {
            sig.add(Symbol::name(n)?, a)?;
        }
        Ok(sig)
    }

    pub fn add(&mut self, symbol: Symbol, arity: usize) -> Result<()> {
        if self.connectives.contains_key(&symbol) {
            return Err(Error::DuplicateConnective(symbol.to_string()));
        }
        self.connectives.insert(symbol, arity);
        Ok(())
    }

    pub fn with(mut self, symbol: impl Into<Symbol>, arity: usize) -> Self {
        self.connectives.insert(symbol.into(), arity);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn arity(&self, symbol: &Symbol) -> Option<usize> {
        self.connectives.get(symbol).copied()
    }

    pub fn contains(&self, symbol: &Symbol) -> bool {
        self.connectives.contains_key(symbol)
    }

    pub fn connectives(&self) -> impl Iterator<Item = (&Symbol, usize)> + '_ {
        self.connectives.iter().map(|(s, a)| (s, *a))
    }

    pub fn of_arity(&self, n: usize) -> impl Iterator<Item = &Symbol> + '_ {
        self.connectives
            .iter()
            .filter(move |(_, a)| **a == n)
            .map(|(s, _)| s)
    }

    pub fn len(&self) -> usize {
        self.connectives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.connectives.is_empty()
    }

    pub fn max_arity(&self) -> usize {
        self.connectives.values().copied().max().unwrap_or(0)
    }

    /// Arities that have at least one connective, ascending.
    pub fn used_arities(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.connectives.values().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Same connectives with the same arities (names are ignored).
    pub fn same_connectives(&self, other: &Signature) -> bool {
        self.connectives == other.connectives
    }

    /// Every connective of `self` occurs in `other` with the same arity.
    pub fn is_subsignature_of(&self, other: &Signature) -> bool {
        self.connectives
            .iter()
            .all(|(s, a)| other.arity(s) == Some(*a))
    }

    /// Checks that `phi` is well formed over this signature.
    pub fn check(&self, phi: &Formula) -> Result<()> {
        match phi {
            Formula::Var(_) => Ok(()),
            Formula::App(c, args) => {
                let arity = self
                    .arity(c)
                    .ok_or_else(|| Error::UnknownConnective(c.to_string()))?;
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: c.to_string(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| self.check(a))
            }
        }
    }

    /// The trivial signature with one connective for each arity. Its support is infinite,
    /// so it cannot be built here.
    pub fn terminal() -> Result<Signature> {
        Err(Error::Unsupported(
            "the terminal signature has one connective of every arity and infinite support".into(),
        ))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {{", self.name)?;
        for (i, (s, a)) in self.connectives.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, " {s}/{a}")?;
        }
        f.write_str(" }")
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct ConnectiveJson {
    id: String,
    arity: usize,
}

#[derive(Deserialize)]
struct SignatureJson {
    name: String,
    connectives: Vec<ConnectiveJson>,
}

impl Serialize for Signature {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut items: Vec<ConnectiveJson> = self
            .connectives
            .iter()
            .map(|(s, a)| ConnectiveJson {
                id: s.to_string(),
                arity: *a,
            })
            .collect();
        items.sort_by(|a, b| a.id.cmp(&b.id));
        let mut st = serializer.serialize_struct("Signature", 2)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("connectives", &items)?;
        st.end()
    }
}

impl Signature {
    /// Canonical JSON: connectives sorted by identifier.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("signature serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Signature> {
        let raw: SignatureJson = serde_json::from_str(text)
            .map_err(|e| Error::Parse(crate::ParseError::new(e.to_string(), e.line(), e.column())))?;
        let mut sig = Signature::new(raw.name);
        for c in raw.connectives {
            sig.add(Symbol::name(&c.id)?, c.arity)?;
        }
        Ok(sig)
    }
}

/// Arity-preserving map of connectives.
#[derive(Clone, PartialEq, Eq)]
pub struct StrictMorphism {
    source: Arc<Signature>,
    target: Arc<Signature>,
    map: BTreeMap<Symbol, Symbol>,
}

impl StrictMorphism {
    pub fn new(
        source: Arc<Signature>,
        target: Arc<Signature>,
        map: BTreeMap<Symbol, Symbol>,
    ) -> Result<Self> {
        for (c, arity) in source.connectives() {
            let image = map.get(c).ok_or_else(|| Error::Unmapped(c.to_string()))?;
            if target.arity(image) != Some(arity) {
                return Err(Error::BadImage {
                    symbol: c.to_string(),
                    image: image.to_string(),
                    arity,
                });
            }
        }
        if let Some(extra) = map.keys().find(|k| !source.contains(k)) {
            return Err(Error::UnknownConnective(extra.to_string()));
        }
        Ok(StrictMorphism {
            source,
            target,
            map,
        })
    }

    pub fn from_pairs<'a>(
        source: Arc<Signature>,
        target: Arc<Signature>,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (a, b) in pairs {
            map.insert(Symbol::name(a)?, Symbol::name(b)?);
        }
        StrictMorphism::new(source, target, map)
    }

    pub fn identity(sig: Arc<Signature>) -> Self {
        let map = sig.connectives().map(|(c, _)| (c.clone(), c.clone())).collect();
        StrictMorphism {
            source: sig.clone(),
            target: sig,
            map,
        }
    }

    pub fn source(&self) -> &Arc<Signature> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Signature> {
        &self.target
    }

    pub fn map(&self) -> &BTreeMap<Symbol, Symbol> {
        &self.map
    }

    pub fn apply(&self, c: &Symbol) -> Option<&Symbol> {
        self.map.get(c)
    }

    /// The extension `f̂` to formula algebras: variables fixed, connectives renamed.
    pub fn extend(&self, phi: &Formula) -> Formula {
        match phi {
            Formula::Var(i) => Formula::Var(*i),
            Formula::App(c, args) => {
                let image = self
                    .map
                    .get(c)
                    .unwrap_or_else(|| panic!("connective {c} is not in the source signature"));
                Formula::App(image.clone(), args.iter().map(|a| self.extend(a)).collect())
            }
        }
    }

    /// Checked extension: validates `phi` over the source first.
    pub fn try_extend(&self, phi: &Formula) -> Result<Formula> {
        self.source.check(phi)?;
        Ok(self.extend(phi))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &StrictMorphism) -> Result<StrictMorphism> {
        if !self.target.same_connectives(&next.source) {
            return Err(Error::NotComposable(format!(
                "target {} differs from source {}",
                self.target.name(),
                next.source.name()
            )));
        }
        let map = self
            .map
            .iter()
            .map(|(c, d)| (c.clone(), next.map[d].clone()))
            .collect();
        Ok(StrictMorphism {
            source: self.source.clone(),
            target: next.target.clone(),
            map,
        })
    }

    /// Restriction of `self` to a subsignature of its source.
    pub fn restrict(&self, sub: Arc<Signature>) -> Result<StrictMorphism> {
        if !sub.is_subsignature_of(&self.source) {
            return Err(Error::SignatureMismatch(format!(
                "{} is not a subsignature of {}",
                sub.name(),
                self.source.name()
            )));
        }
        let map = sub
            .connectives()
            .map(|(c, _)| (c.clone(), self.map[c].clone()))
            .collect();
        Ok(StrictMorphism {
            source: sub,
            target: self.target.clone(),
            map,
        })
    }

    /// Injective at every arity level (monomorphism in the strict category).
    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.map.values().all(|d| seen.insert(d))
    }

    /// Surjective at every arity level (epimorphism in the strict category).
    pub fn is_surjective(&self) -> bool {
        let image: std::collections::BTreeSet<&Symbol> = self.map.values().collect();
        self.target.connectives().all(|(d, _)| image.contains(d))
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn inverse(&self) -> Option<StrictMorphism> {
        if !self.is_bijective() {
            return None;
        }
        let map = self.map.iter().map(|(c, d)| (d.clone(), c.clone())).collect();
        Some(StrictMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            map,
        })
    }
}

impl fmt::Debug for StrictMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {{", self.source.name(), self.target.name())?;
        for (i, (c, d)) in self.map.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, " {c} -> {d}")?;
        }
        f.write_str(" }")
    }
}

/// All strict morphisms between two finite signatures.
pub fn all_strict_morphisms(source: &Arc<Signature>, target: &Arc<Signature>) -> Vec<StrictMorphism> {
    let choices: Vec<(Symbol, Vec<Symbol>)> = source
        .connectives()
        .map(|(c, a)| (c.clone(), target.of_arity(a).cloned().collect()))
        .collect();
    let mut out = Vec::new();
    let mut current = BTreeMap::new();
    fn go(
        i: usize,
        choices: &[(Symbol, Vec<Symbol>)],
        current: &mut BTreeMap<Symbol, Symbol>,
        src: &Arc<Signature>,
        tgt: &Arc<Signature>,
        out: &mut Vec<StrictMorphism>,
    ) {
        if i == choices.len() {
            out.push(StrictMorphism {
                source: src.clone(),
                target: tgt.clone(),
                map: current.clone(),
            });
            return;
        }
        let (c, options) = &choices[i];
        for d in options {
            current.insert(c.clone(), d.clone());
            go(i + 1, choices, current, src, tgt, out);
        }
        current.remove(c);
    }
    go(0, &choices, &mut current, source, target, &mut out);
    out
}

/// Coproduct of signatures with its injections.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub signature: Arc<Signature>,
    pub injections: Vec<StrictMorphism>,
}

pub fn coproduct(summands: &[Arc<Signature>]) -> Coproduct {
    let name = if summands.is_empty() {
        "empty".to_string()
    } else {
        summands.iter().map(|s| s.name()).collect::<Vec<_>>().join("+")
    };
    let mut sig = Signature::new(name);
    for (i, s) in summands.iter().enumerate() {
        for (c, a) in s.connectives() {
            sig.connectives.insert(Symbol::tag(i, c.clone()), a);
        }
    }
    let sig = Arc::new(sig);
    let injections = summands
        .iter()
        .enumerate()
        .map(|(i, s)| StrictMorphism {
            source: s.clone(),
            target: sig.clone(),
            map: s
                .connectives()
                .map(|(c, _)| (c.clone(), Symbol::tag(i, c.clone())))
                .collect(),
        })
        .collect();
    Coproduct {
        signature: sig,
        injections,
    }
}

impl Coproduct {
    /// The mediating morphism `[f_0, …, f_k]` for a cocone with a common target.
    pub fn copair(&self, legs: &[StrictMorphism]) -> Result<StrictMorphism> {
        if legs.len() != self.injections.len() {
            return Err(Error::SignatureMismatch(format!(
                "cocone has {} legs, coproduct has {} summands",
                legs.len(),
                self.injections.len()
            )));
        }
        let target = legs
            .first()
            .map(|l| l.target.clone())
            .unwrap_or_else(|| Arc::new(Signature::empty()));
        let mut map = BTreeMap::new();
        for (i, (inj, leg)) in self.injections.iter().zip(legs).enumerate() {
            if !inj.source.same_connectives(&leg.source) || !leg.target.same_connectives(&target) {
                return Err(Error::SignatureMismatch(format!("cocone leg {i} does not fit")));
            }
            for (c, d) in &leg.map {
                map.insert(Symbol::tag(i, c.clone()), d.clone());
            }
        }
        StrictMorphism::new(self.signature.clone(), target, map)
    }
}

/// Product of signatures with its projections.
#[derive(Clone, Debug)]
pub struct Product {
    pub signature: Arc<Signature>,
    pub projections: Vec<StrictMorphism>,
}

/// Levelwise cartesian product. The empty product would be the terminal signature,
/// which is refused.
pub fn product(factors: &[Arc<Signature>]) -> Result<Product> {
    if factors.is_empty() {
        return Signature::terminal().map(|_| unreachable!());
    }
    let name = factors.iter().map(|s| s.name()).collect::<Vec<_>>().join("*");
    let mut sig = Signature::new(name);
    let mut arities: Vec<usize> = factors.iter().flat_map(|f| f.used_arities()).collect();
    arities.sort_unstable();
    arities.dedup();
    for n in arities {
        let mut tuples: Vec<Vec<Symbol>> = vec![Vec::new()];
        for f in factors {
            let level: Vec<&Symbol> = f.of_arity(n).collect();
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    level.iter().map(move |s| {
                        let mut t = t.clone();
                        t.push((*s).clone());
                        t
                    })
                })
                .collect();
        }
        for t in tuples {
            sig.connectives.insert(Symbol::Tuple(t), n);
        }
    }
    let sig = Arc::new(sig);
    let projections = factors
        .iter()
        .enumerate()
        .map(|(i, f)| StrictMorphism {
            source: sig.clone(),
            target: f.clone(),
            map: sig
                .connectives()
                .map(|(c, _)| match c {
                    Symbol::Tuple(parts) => (c.clone(), parts[i].clone()),
                    _ => unreachable!("product connectives are tuples"),
                })
                .collect(),
        })
        .collect();
    Ok(Product {
        signature: sig,
        projections,
    })
}

impl Product {
    /// The mediating morphism `⟨f_0, …, f_k⟩` for a cone with a common source.
    pub fn pair(&self, legs: &[StrictMorphism]) -> Result<StrictMorphism> {
        if legs.len() != self.projections.len() || legs.is_empty() {
            return Err(Error::SignatureMismatch("cone does not match the product".into()));
        }
        let source = legs[0].source.clone();
        for (leg, proj) in legs.iter().zip(&self.projections) {
            if !leg.source.same_connectives(&source) || !leg.target.same_connectives(&proj.target) {
                return Err(Error::SignatureMismatch("cone legs do not fit".into()));
            }
        }
        let map = source
            .connectives()
            .map(|(c, _)| {
                let parts = legs.iter().map(|l| l.map[c].clone()).collect();
                (c.clone(), Symbol::Tuple(parts))
            })
            .collect();
        StrictMorphism::new(source, self.signature.clone(), map)
    }
}

/// A cocone produced by gluing a coproduct along identifications.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub signature: Arc<Signature>,
    pub legs: Vec<StrictMorphism>,
}

/// Coproduct of `summands` modulo the equivalence generated by `glue`.
/// Each class is represented by its least tagged symbol.
fn glue_coproduct(
    summands: &[Arc<Signature>],
    glue: &[(Symbol, Symbol)],
    name: String,
) -> Result<Quotient> {
    let co = coproduct(summands);
    let symbols: Vec<(&Symbol, usize)> = co.signature.connectives().collect();
    let index: BTreeMap<&Symbol, usize> =
        symbols.iter().enumerate().map(|(i, (s, _))| (*s, i)).collect();
    let mut uf: UnionFind<usize> = UnionFind::new(symbols.len());
    for (a, b) in glue {
        let (ia, ib) = (index[a], index[b]);
        if symbols[ia].1 != symbols[ib].1 {
            return Err(Error::SignatureMismatch(format!("cannot identify {a} with {b}")));
        }
        uf.union(ia, ib);
    }
    // symbols are sorted, so the first member seen for each root is the least
    let mut rep_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..symbols.len() {
        rep_of_root.entry(uf.find(i)).or_insert(i);
    }
    let mut sig = Signature::new(name);
    for &r in rep_of_root.values() {
        sig.connectives.insert(symbols[r].0.clone(), symbols[r].1);
    }
    let sig = Arc::new(sig);
    let rep = |s: &Symbol| symbols[rep_of_root[&uf.find(index[s])]].0.clone();
    let legs = co
        .injections
        .iter()
        .map(|inj| StrictMorphism {
            source: inj.source.clone(),
            target: sig.clone(),
            map: inj.map.iter().map(|(c, t)| (c.clone(), rep(t))).collect(),
        })
        .collect();
    Ok(Quotient {
        signature: sig,
        legs,
    })
}

/// Pushout of a span `left ← shared → right` of strict morphisms.
pub fn pushout(to_left: &StrictMorphism, to_right: &StrictMorphism) -> Result<Quotient> {
    if !to_left.source.same_connectives(&to_right.source) {
        return Err(Error::SignatureMismatch("span legs have different sources".into()));
    }
    let glue: Vec<(Symbol, Symbol)> = to_left
        .source
        .connectives()
        .map(|(c, _)| {
            (
                Symbol::tag(0, to_left.map[c].clone()),
                Symbol::tag(1, to_right.map[c].clone()),
            )
        })
        .collect();
    let name = format!("{}+{}/{}", to_left.target.name(), to_right.target.name(), to_left.source.name());
    glue_coproduct(&[to_left.target.clone(), to_right.target.clone()], &glue, name)
}

/// Colimit of a finite chain `Σ0 → Σ1 → … → Σk`, built as a glued coproduct.
/// An empty list of steps is not a chain; use a single identity for one object.
pub fn chain_colimit(steps: &[StrictMorphism]) -> Result<Quotient> {
    let Some(first) = steps.first() else {
        return Err(Error::Unsupported("a chain needs at least one morphism".into()));
    };
    let mut stages = vec![first.source.clone()];
    for (i, s) in steps.iter().enumerate() {
        if !s.source.same_connectives(stages.last().unwrap()) {
            return Err(Error::NotComposable(format!("chain breaks at step {i}")));
        }
        stages.push(s.target.clone());
    }
    let mut glue = Vec::new();
    for (i, s) in steps.iter().enumerate() {
        for (c, d) in &s.map {
            glue.push((Symbol::tag(i, c.clone()), Symbol::tag(i + 1, d.clone())));
        }
    }
    glue_coproduct(&stages, &glue, "colim".to_string())
}

impl Quotient {
    /// Checks the universal property against a competing cocone: returns the
    /// unique mediating morphism if the legs agree on identified connectives.
    pub fn mediate(&self, legs: &[StrictMorphism]) -> Result<StrictMorphism> {
        if legs.len() != self.legs.len() || legs.is_empty() {
            return Err(Error::SignatureMismatch("cocone does not match".into()));
        }
        let target = legs[0].target.clone();
        let mut map: BTreeMap<Symbol, Symbol> = BTreeMap::new();
        for (own, other) in self.legs.iter().zip(legs) {
            for (c, rep) in &own.map {
                let image = other
                    .map
                    .get(c)
                    .ok_or_else(|| Error::Unmapped(c.to_string()))?;
                match map.get(rep) {
                    Some(prev) if prev != image => {
                        return Err(Error::SignatureMismatch(format!(
                            "cocone is not compatible at {rep}: {prev} vs {image}"
                        )))
                    }
                    _ => {
                        map.insert(rep.clone(), image.clone());
                    }
                }
            }
        }
        StrictMorphism::new(self.signature.clone(), target, map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig(name: &str, pairs: &[(&str, usize)]) -> Arc<Signature> {
        Arc::new(Signature::from_pairs(name, pairs.iter().copied()).unwrap())
    }

    #[test]
    fn names_are_validated() {
        assert!(Symbol::name("neg").is_ok());
        assert!(Symbol::name("neg'").is_ok());
        assert!(Symbol::name("x3").is_err());
        assert!(Symbol::name("a(b").is_err());
        assert!(Symbol::name("").is_err());
        assert!(Symbol::name("x").is_ok());
    }

    #[test]
    fn extension_renames_connectives() {
        let s = sig("S", &[("neg", 1), ("imp", 2)]);
        let t = sig("T", &[("neg'", 1), ("or'", 2)]);
        let f = StrictMorphism::from_pairs(s, t, [("neg", "neg'"), ("imp", "or'")]).unwrap();
        let phi = Formula::app("neg", vec![Formula::app("imp", vec![Formula::var(0), Formula::var(1)])]);
        let expected = Formula::app("neg'", vec![Formula::app("or'", vec![Formula::var(0), Formula::var(1)])]);
        assert_eq!(f.extend(&phi), expected);
    }

    #[test]
    fn bad_images_are_rejected() {
        let s = sig("S", &[("neg", 1)]);
        let t = sig("T", &[("or", 2)]);
        assert!(matches!(
            StrictMorphism::from_pairs(s.clone(), t.clone(), [("neg", "or")]),
            Err(Error::BadImage { .. })
        ));
        assert!(matches!(
            StrictMorphism::from_pairs(s, t, []),
            Err(Error::Unmapped(_))
        ));
    }

    #[test]
    fn coproduct_tags_summands() {
        let a = sig("A", &[("neg", 1)]);
        let b = sig("B", &[("or", 2)]);
        let co = coproduct(&[a, b]);
        let got: Vec<String> = co.signature.connectives().map(|(s, a)| format!("{s}/{a}")).collect();
        assert_eq!(got, vec!["neg#0/1", "or#1/2"]);
    }

    #[test]
    fn empty_summand_is_neutral() {
        let a = sig("A", &[("neg", 1), ("imp", 2)]);
        let co = coproduct(&[Arc::new(Signature::empty()), a.clone()]);
        assert_eq!(co.signature.len(), a.len());
        // the injection from A is a bijection, so A ≅ ∅ ⊔ A
        assert!(co.injections[1].is_bijective());
    }

    #[test]
    fn product_is_levelwise() {
        let a = sig("A", &[("neg", 1), ("imp", 2)]);
        let b = sig("B", &[("sim", 1)]);
        let p = product(&[a, b]).unwrap();
        let got: Vec<String> = p.signature.connectives().map(|(s, a)| format!("{s}/{a}")).collect();
        assert_eq!(got, vec!["<neg&sim>/1"]);
    }

    #[test]
    fn empty_product_is_refused() {
        assert!(matches!(product(&[]), Err(Error::Unsupported(_))));
        assert!(matches!(Signature::terminal(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn pushout_glues_shared_negation() {
        let shared = sig("N", &[("neg", 1)]);
        let l = sig("L", &[("neg", 1), ("imp", 2)]);
        let r = sig("R", &[("neg", 1), ("or", 2)]);
        let f = StrictMorphism::from_pairs(shared.clone(), l, [("neg", "neg")]).unwrap();
        let g = StrictMorphism::from_pairs(shared, r, [("neg", "neg")]).unwrap();
        let p = pushout(&f, &g).unwrap();
        assert_eq!(p.signature.of_arity(1).count(), 1);
        assert_eq!(p.signature.len(), 3);
        assert_eq!(p.legs[0].apply(&"neg".into()), p.legs[1].apply(&"neg".into()));
    }

    #[test]
    fn pushout_over_empty_span_is_coproduct() {
        let e = Arc::new(Signature::empty());
        let l = sig("L", &[("neg", 1)]);
        let r = sig("R", &[("neg", 1)]);
        let f = StrictMorphism::new(e.clone(), l.clone(), BTreeMap::new()).unwrap();
        let g = StrictMorphism::new(e, r.clone(), BTreeMap::new()).unwrap();
        let p = pushout(&f, &g).unwrap();
        assert!(p.signature.same_connectives(&coproduct(&[l, r]).signature));
    }

    #[test]
    fn json_is_sorted_and_roundtrips() {
        let s = sig("S", &[("neg", 1), ("and", 2), ("top", 0)]);
        let json = s.to_json();
        assert_eq!(
            json,
            r#"{"name":"S","connectives":[{"id":"and","arity":2},{"id":"neg","arity":1},{"id":"top","arity":0}]}"#
        );
        assert_eq!(Signature::from_json(&json).unwrap(), *s);
    }
}
