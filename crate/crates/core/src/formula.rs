//! Formulas over a signature, substitutions, and the prefix syntax.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{ParseError, Result};
use crate::signature::{is_ident_char, Signature, Symbol};

/// A propositional formula. Variables are indexed naturals `x0, x1, …`.
///
/// The derived order puts variables before applications; [`canonical_cmp`]
/// refines it by complexity first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Var(u32),
    App(Symbol, Vec<Formula>),
}

impl Formula {
    pub fn var(i: u32) -> Formula {
        Formula::Var(i)
    }

    pub fn app(symbol: impl Into<Symbol>, args: Vec<Formula>) -> Formula {
        Formula::App(symbol.into(), args)
    }

    /// `c(x0, …, x_{n-1})`, the generator formula of an `n`-ary connective.
    pub fn generator(symbol: Symbol, arity: usize) -> Formula {
        Formula::App(symbol, (0..arity as u32).map(Formula::Var).collect())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Formula::Var(_))
    }

    pub fn as_var(&self) -> Option<u32> {
        match self {
            Formula::Var(i) => Some(*i),
            _ => None,
        }
    }

    /// Number of connective occurrences.
    pub fn complexity(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::App(_, args) => 1 + args.iter().map(Formula::complexity).sum::<usize>(),
        }
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<u32>) {
        match self {
            Formula::Var(i) => {
                out.insert(*i);
            }
            Formula::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn max_var(&self) -> Option<u32> {
        match self {
            Formula::Var(i) => Some(*i),
            Formula::App(_, args) => args.iter().filter_map(Formula::max_var).max(),
        }
    }

    /// Membership in the slice `F(Σ)[n]`: the variable set is exactly `{x0, …, x_{n-1}}`.
    pub fn in_slice(&self, n: usize) -> bool {
        let vars = self.variables();
        vars.len() == n && vars.iter().enumerate().all(|(i, v)| *v as usize == i)
    }

    /// Set of connectives occurring in the formula.
    pub fn symbols(&self) -> BTreeSet<&Symbol> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut out);
        out
    }

    fn collect_symbols<'a>(&'a self, out: &mut BTreeSet<&'a Symbol>) {
        if let Formula::App(c, args) = self {
            out.insert(c);
            args.iter().for_each(|a| a.collect_symbols(out));
        }
    }

    /// Simultaneous replacement `self[x0, …, x_{k-1} | args]`; variables beyond `args` stay put.
    pub fn instantiate(&self, args: &[Formula]) -> Formula {
        match self {
            Formula::Var(i) => args
                .get(*i as usize)
                .cloned()
                .unwrap_or(Formula::Var(*i)),
            Formula::App(c, sub) => {
                Formula::App(c.clone(), sub.iter().map(|a| a.instantiate(args)).collect())
            }
        }
    }

    /// Renames every variable through `f`.
    pub fn map_vars(&self, f: &mut impl FnMut(u32) -> u32) -> Formula {
        match self {
            Formula::Var(i) => Formula::Var(f(*i)),
            Formula::App(c, args) => {
                Formula::App(c.clone(), args.iter().map(|a| a.map_vars(f)).collect())
            }
        }
    }

    /// Every subformula in post-order (children before parents), duplicates included.
    pub fn subformulas(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        self.collect_subformulas(&mut out);
        out
    }

    fn collect_subformulas<'a>(&'a self, out: &mut Vec<&'a Formula>) {
        if let Formula::App(_, args) = self {
            args.iter().for_each(|a| a.collect_subformulas(out));
        }
        out.push(self);
    }

    /// Replaces the argument at `position` of the top connective.
    pub fn replace_arg(&self, position: usize, with: Formula) -> Option<Formula> {
        match self {
            Formula::App(c, args) if position < args.len() => {
                let mut args = args.clone();
                args[position] = with;
                Some(Formula::App(c.clone(), args))
            }
            _ => None,
        }
    }
}

/// Complexity first, then the structural order.
pub fn canonical_cmp(a: &Formula, b: &Formula) -> std::cmp::Ordering {
    a.complexity().cmp(&b.complexity()).then_with(|| a.cmp(b))
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(i) => write!(f, "x{i}"),
            Formula::App(c, args) if args.is_empty() => write!(f, "{c}"),
            Formula::App(c, args) => {
                write!(f, "{c}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Formula {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A finite-support map from variables to formulas; identity elsewhere.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Substitution {
    map: BTreeMap<u32, Formula>,
}

impl Substitution {
    pub fn identity() -> Self {
        Substitution::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (u32, Formula)>) -> Self {
        let mut s = Substitution::default();
        for (i, phi) in pairs {
            s.insert(i, phi);
        }
        s
    }

    /// `x_i ↦ images[i]`.
    pub fn from_images(images: Vec<Formula>) -> Self {
        Substitution::from_pairs(images.into_iter().enumerate().map(|(i, f)| (i as u32, f)))
    }

    /// Binds `x_i`; trivial bindings `x_i ↦ x_i` are dropped to keep the support minimal.
    pub fn insert(&mut self, var: u32, phi: Formula) {
        if phi == Formula::Var(var) {
            self.map.remove(&var);
        } else {
            self.map.insert(var, phi);
        }
    }

    pub fn get(&self, var: u32) -> Option<&Formula> {
        self.map.get(&var)
    }

    pub fn image(&self, var: u32) -> Formula {
        self.map.get(&var).cloned().unwrap_or(Formula::Var(var))
    }

    pub fn support(&self) -> impl Iterator<Item = (u32, &Formula)> + '_ {
        self.map.iter().map(|(i, f)| (*i, f))
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    /// The homomorphic extension `σ̃`.
    pub fn apply(&self, phi: &Formula) -> Formula {
        if self.map.is_empty() {
            return phi.clone();
        }
        match phi {
            Formula::Var(i) => self.image(*i),
            Formula::App(c, args) => {
                Formula::App(c.clone(), args.iter().map(|a| self.apply(a)).collect())
            }
        }
    }

    /// `self ⋆ first`: apply `first`, then `self`. Its extension is `σ̃_self ∘ σ̃_first`.
    pub fn after(&self, first: &Substitution) -> Substitution {
        let mut out = Substitution::default();
        for (i, phi) in &first.map {
            out.insert(*i, self.apply(phi));
        }
        for (i, phi) in &self.map {
            if !first.map.contains_key(i) {
                out.insert(*i, phi.clone());
            }
        }
        out
    }
}

/// `σ2 ⋆ σ1`.
pub fn compose_substitutions(sigma2: &Substitution, sigma1: &Substitution) -> Substitution {
    sigma2.after(sigma1)
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (i, phi)) in self.map.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "x{i} := {phi}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for Substitution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut m = serializer.serialize_map(Some(self.map.len()))?;
        for (i, phi) in &self.map {
            m.serialize_entry(&format!("x{i}"), &phi.to_string())?;
        }
        m.end()
    }
}

/// Parses prefix syntax against `sig`.
///
/// Connective names are matched literally, longest first, so structured
/// identifiers such as `neg#0` or `[imp(x0, x1)]` parse back to themselves.
pub fn parse(text: &str, sig: &Signature) -> Result<Formula> {
    let mut p = Parser::new(text, sig);
    p.skip_ws();
    let phi = p.formula()?;
    p.skip_ws();
    if p.pos < text.len() {
        return Err(p.error("unexpected trailing input").into());
    }
    Ok(phi)
}

pub(crate) struct Parser<'a> {
    text: &'a str,
    pub(crate) pos: usize,
    names: Vec<(String, Symbol, usize)>,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &'a str, sig: &Signature) -> Self {
        let mut names: Vec<(String, Symbol, usize)> = sig
            .connectives()
            .map(|(s, a)| (s.to_string(), s.clone(), a))
            .collect();
        names.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| a.0.cmp(&b.0)));
        Parser {
            text,
            pos: 0,
            names,
        }
    }

    pub(crate) fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::at_offset(message, self.text, self.pos)
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    pub(crate) fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn boundary_at(&self, offset: usize) -> bool {
        self.text[offset..]
            .chars()
            .next()
            .is_none_or(|c| !is_ident_char(c))
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    pub(crate) fn formula(&mut self) -> Result<Formula> {
        self.skip_ws();
        let rest = self.rest();
        if let Some(digits) = rest.strip_prefix('x') {
            let len = digits.bytes().take_while(u8::is_ascii_digit).count();
            if len > 0 && self.boundary_at(self.pos + 1 + len) {
                let index: u32 = digits[..len]
                    .parse()
                    .map_err(|_| self.error("variable index out of range"))?;
                self.pos += 1 + len;
                return Ok(Formula::Var(index));
            }
        }
        let matched = self
            .names
            .iter()
            .find(|(n, _, _)| rest.starts_with(n.as_str()) && self.boundary_at(self.pos + n.len()))
            .cloned();
        let Some((name, symbol, arity)) = matched else {
            let word: String = rest.chars().take_while(|c| is_ident_char(*c)).collect();
            if word.is_empty() {
                return Err(self.error("expected a formula").into());
            }
            return Err(crate::Error::UnknownConnective(word));
        };
        self.pos += name.len();
        let mut args = Vec::new();
        if self.eat('(')
            && !self.eat(')') {
                loop {
                    args.push(self.formula()?);
                    if self.eat(')') {
                        break;
                    }
                    if !self.eat(',') {
                        return Err(self.error("expected `,` or `)`").into());
                    }
                }
            }
        if args.len() != arity {
            return Err(crate::Error::ArityMismatch {
                symbol: name,
                expected: arity,
                found: args.len(),
            });
        }
        Ok(Formula::App(symbol, args))
    }
}
