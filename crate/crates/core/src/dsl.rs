//! The declaration language for signatures, logics and morphisms.
//!
//! ```text
//! file      = { decl } ;
//! decl      = signature | logic | morphism ;
//! signature = "signature" IDENT "{" [ conn { "," conn } ] "}" ;
//! conn      = IDENT "/" INT ;
//! logic     = "logic" IDENT ":" IDENT ( "=" ( "bottom" | "top" ) ";" | "{" { item } "}" ) ;
//! item      = "axiom" IDENT ":" formula ";"
//!           | "rule" IDENT ":" formula { "," formula } "|-" formula ";"
//!           | "matrix" [ "complete" ] "{" "values" INT ";" "designated" INT { "," INT } ";"
//!             { "table" IDENT "=" "[" [ INT { "," INT } ] "]" ";" } "}" ;
//! morphism  = "morphism" IDENT ":" IDENT "->" IDENT ( "flexible" | "strict" )
//!             "{" [ assign { "," assign } ] "}" ;
//! assign    = IDENT "->" formula ;
//! ```
//!
//! `#` starts a comment that runs to the end of the line. Matrix tables list
//! values in mixed radix with the first argument most significant. Morphism
//! endpoints name either logics or signatures.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::calculus::{Axiom, Calculus, Rule};
use crate::error::{Error, ParseError, Result};
use crate::flexible::FlexibleMorphism;
use crate::formula::{Formula, Parser};
use crate::logic::{Logic, Provider};
use crate::matrix::Matrix;
use crate::signature::{Signature, StrictMorphism, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MorphismKind {
    Strict,
    Flexible,
}

#[derive(Clone, Debug)]
pub struct MorphismDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    pub kind: MorphismKind,
    pub flexible: FlexibleMorphism,
    pub strict: Option<StrictMorphism>,
}

/// Everything declared in a file, in declaration order.
#[derive(Clone, Debug, Default)]
pub struct Environment {
    pub signatures: BTreeMap<String, Arc<Signature>>,
    pub logics: BTreeMap<String, Logic>,
    pub morphisms: BTreeMap<String, MorphismDecl>,
    pub order: Vec<String>,
}

impl Environment {
    pub fn logic(&self, name: &str) -> Result<&Logic> {
        self.logics
            .get(name)
            .ok_or_else(|| Error::Unsupported(format!("no logic named `{name}`")))
    }

    pub fn morphism(&self, name: &str) -> Result<&MorphismDecl> {
        self.morphisms
            .get(name)
            .ok_or_else(|| Error::Unsupported(format!("no morphism named `{name}`")))
    }

    pub fn signature(&self, name: &str) -> Result<&Arc<Signature>> {
        if let Some(s) = self.signatures.get(name) {
            return Ok(s);
        }
        self.logics
            .get(name)
            .map(Logic::signature)
            .ok_or_else(|| Error::Unsupported(format!("no signature or logic named `{name}`")))
    }

    fn claim(&mut self, name: &str, at: ParseError) -> Result<()> {
        if self.order.iter().any(|n| n == name) {
            return Err(ParseError { message: format!("`{name}` is already declared"), ..at }.into());
        }
        self.order.push(name.to_string());
        Ok(())
    }
}

/// Parses and validates a whole file.
pub fn load_str(text: &str) -> Result<Environment> {
    // blank out comments so that offsets stay valid
    let mut stripped = String::with_capacity(text.len());
    for line in text.split_inclusive('\n') {
        match line.find('#') {
            Some(i) => {
                stripped.push_str(&line[..i]);
                stripped.extend(line[i..].chars().map(|c| if c == '\n' { '\n' } else { ' ' }));
            }
            None => stripped.push_str(line),
        }
    }
    let mut cur = Cursor { text: &stripped, pos: 0 };
    let mut env = Environment::default();
    loop {
        cur.ws();
        if cur.done() {
            return Ok(env);
        }
        let at = cur.err("");
        match cur.ident()?.as_str() {
            "signature" => signature_decl(&mut cur, &mut env)?,
            "logic" => logic_decl(&mut cur, &mut env)?,
            "morphism" => morphism_decl(&mut cur, &mut env)?,
            other => {
                return Err(ParseError {
                    message: format!("expected `signature`, `logic` or `morphism`, found `{other}`"),
                    ..at
                }
                .into())
            }
        }
    }
}

pub fn load(path: impl AsRef<std::path::Path>) -> Result<Environment> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(ParseError::new(format!("cannot read {}: {e}", path.display()), 0, 0)))?;
    load_str(&text)
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn ws(&mut self) {
        let t = self.rest().trim_start();
        self.pos = self.text.len() - t.len();
    }

    fn done(&self) -> bool {
        self.pos >= self.text.len()
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::at_offset(message, self.text, self.pos)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(self.err(message).into())
    }

    fn ident(&mut self) -> Result<String> {
        self.ws();
        let rest = self.rest();
        let len = rest
            .char_indices()
            .find(|(i, c)| !(c.is_ascii_alphanumeric() || *c == '_' || (*i > 0 && *c == '\'')))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 || rest.starts_with(|c: char| c.is_ascii_digit()) {
            return self.fail("expected a name");
        }
        self.pos += len;
        Ok(rest[..len].to_string())
    }

    fn int(&mut self) -> Result<usize> {
        self.ws();
        let rest = self.rest();
        let len = rest.bytes().take_while(u8::is_ascii_digit).count();
        if len == 0 {
            return self.fail("expected a number");
        }
        let n = rest[..len].parse().map_err(|_| self.err("number out of range"))?;
        self.pos += len;
        Ok(n)
    }

    fn peek(&mut self, token: &str) -> bool {
        self.ws();
        self.rest().starts_with(token)
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.peek(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            self.fail(format!("expected `{token}`"))
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        let save = self.pos;
        match self.ident() {
            Ok(w) if w == word => true,
            _ => {
                self.pos = save;
                false
            }
        }
    }

    fn formula(&mut self, sig: &Signature) -> Result<Formula> {
        self.ws();
        let start = self.pos;
        let mut p = Parser::new(self.text, sig);
        p.pos = self.pos;
        match p.formula() {
            Ok(phi) => {
                self.pos = p.pos;
                Ok(phi)
            }
            Err(Error::Parse(e)) => Err(e.into()),
            Err(other) => {
                self.pos = start;
                self.fail(other.to_string())
            }
        }
    }

    /// Wraps a semantic error with the current location.
    fn locate<T>(&self, r: Result<T>) -> Result<T> {
        r.map_err(|e| match e {
            Error::Parse(p) => Error::Parse(p),
            other => Error::Parse(self.err(other.to_string())),
        })
    }
}

fn signature_decl(cur: &mut Cursor<'_>, env: &mut Environment) -> Result<()> {
    let at = cur.err("");
    let name = cur.ident()?;
    env.claim(&name, at)?;
    cur.expect("{")?;
    let mut sig = Signature::new(name.clone());
    if !cur.eat("}") {
        loop {
            let c = cur.ident()?;
            cur.expect("/")?;
            let arity = cur.int()?;
            let sym = cur.locate(Symbol::name(&c))?;
            cur.locate(sig.add(sym, arity))?;
            if cur.eat("}") {
                break;
            }
            cur.expect(",")?;
        }
    }
    env.signatures.insert(name, Arc::new(sig));
    Ok(())
}

fn logic_decl(cur: &mut Cursor<'_>, env: &mut Environment) -> Result<()> {
    let at = cur.err("");
    let name = cur.ident()?;
    env.claim(&name, at)?;
    cur.expect(":")?;
    let sig_name = cur.ident()?;
    let sig = match env.signatures.get(&sig_name) {
        Some(s) => s.clone(),
        None => return cur.fail(format!("unknown signature `{sig_name}`")),
    };
    if cur.eat("=") {
        let logic = if cur.keyword("bottom") {
            Logic::bottom(sig)
        } else if cur.keyword("top") {
            Logic::top(sig)
        } else {
            return cur.fail("expected `bottom` or `top`");
        };
        cur.expect(";")?;
        env.logics.insert(name.clone(), logic.renamed(name));
        return Ok(());
    }
    cur.expect("{")?;
    let mut axioms = Vec::new();
    let mut rules = Vec::new();
    let mut matrix = None;
    let mut complete = false;
    while !cur.eat("}") {
        if cur.keyword("axiom") {
            let label = cur.ident()?;
            cur.expect(":")?;
            let formula = cur.formula(&sig)?;
            cur.expect(";")?;
            axioms.push(Axiom { name: label, formula });
        } else if cur.keyword("rule") {
            let label = cur.ident()?;
            cur.expect(":")?;
            let mut premises = vec![cur.formula(&sig)?];
            while cur.eat(",") {
                premises.push(cur.formula(&sig)?);
            }
            cur.expect("|-")?;
            let conclusion = cur.formula(&sig)?;
            cur.expect(";")?;
            rules.push(Rule {
                name: label,
                premises,
                conclusion,
            });
        } else if cur.keyword("matrix") {
            if matrix.is_some() {
                return cur.fail("a logic has at most one matrix");
            }
            complete = cur.keyword("complete");
            matrix = Some(matrix_block(cur, &sig)?);
        } else {
            return cur.fail("expected `axiom`, `rule`, `matrix` or `}`");
        }
    }
    let calculus = if axioms.is_empty() && rules.is_empty() {
        None
    } else {
        Some(cur.locate(Calculus::new(sig.clone(), axioms, rules))?)
    };
    let logic = cur.locate(Logic::presented(name.clone(), sig, calculus, matrix, complete))?;
    env.logics.insert(name, logic);
    Ok(())
}

fn matrix_block(cur: &mut Cursor<'_>, sig: &Arc<Signature>) -> Result<Matrix> {
    cur.expect("{")?;
    if !cur.keyword("values") {
        return cur.fail("expected `values`");
    }
    let values = cur.int()?;
    cur.expect(";")?;
    if !cur.keyword("designated") {
        return cur.fail("expected `designated`");
    }
    let mut designated = vec![cur.int()?];
    while cur.eat(",") {
        designated.push(cur.int()?);
    }
    cur.expect(";")?;
    let mut tables = BTreeMap::new();
    while cur.keyword("table") {
        let c = cur.ident()?;
        cur.expect("=")?;
        cur.expect("[")?;
        let mut entries = Vec::new();
        if !cur.eat("]") {
            loop {
                let v = cur.int()?;
                entries.push(u8::try_from(v).map_err(|_| cur.err("table value out of range"))?);
                if cur.eat("]") {
                    break;
                }
                cur.expect(",")?;
            }
        }
        cur.expect(";")?;
        let sym = cur.locate(Symbol::name(&c))?;
        if tables.insert(sym, entries).is_some() {
            return cur.fail(format!("second table for `{c}`"));
        }
    }
    cur.expect("}")?;
    let designated: Vec<u8> = designated.into_iter().map(|d| d.min(255) as u8).collect();
    cur.locate(Matrix::new(sig.clone(), values, &designated, tables))
}

fn morphism_decl(cur: &mut Cursor<'_>, env: &mut Environment) -> Result<()> {
    let at = cur.err("");
    let name = cur.ident()?;
    env.claim(&name, at)?;
    cur.expect(":")?;
    let source = cur.ident()?;
    cur.expect("->")?;
    let target = cur.ident()?;
    let (Ok(s), Ok(t)) = (env.signature(&source).cloned(), env.signature(&target).cloned()) else {
        return cur.fail(format!("unknown endpoint in `{source} -> {target}`"));
    };
    let kind = if cur.keyword("strict") {
        MorphismKind::Strict
    } else if cur.keyword("flexible") {
        MorphismKind::Flexible
    } else {
        return cur.fail("expected `strict` or `flexible`");
    };
    cur.expect("{")?;
    let mut assignment: BTreeMap<Symbol, Formula> = BTreeMap::new();
    let mut strict_map: BTreeMap<Symbol, Symbol> = BTreeMap::new();
    if !cur.eat("}") {
        loop {
            let c = cur.ident()?;
            let sym = cur.locate(Symbol::name(&c))?;
            cur.expect("->")?;
            match kind {
                MorphismKind::Flexible => {
                    let phi = cur.formula(&t)?;
                    assignment.insert(sym, phi);
                }
                MorphismKind::Strict => {
                    let d = cur.ident()?;
                    strict_map.insert(sym, cur.locate(Symbol::name(&d))?);
                }
            }
            if cur.eat("}") {
                break;
            }
            cur.expect(",")?;
        }
    }
    let (flexible, strict) = match kind {
        MorphismKind::Flexible => (cur.locate(FlexibleMorphism::new(s, t, assignment))?, None),
        MorphismKind::Strict => {
            let f = cur.locate(StrictMorphism::new(s, t, strict_map))?;
            (FlexibleMorphism::lift(&f), Some(f))
        }
    };
    env.morphisms.insert(
        name.clone(),
        MorphismDecl {
            name,
            source,
            target,
            kind,
            flexible,
            strict,
        },
    );
    Ok(())
}

/// Printable DSL names for the connectives of `sig`: plain names are kept, tagged,
/// tuple and slice connectives are spelled with underscores.
pub fn dsl_names(sig: &Signature) -> BTreeMap<Symbol, String> {
    fn spell(s: &Symbol) -> String {
        match s {
            Symbol::Name(n) => n.to_string(),
            Symbol::Tag(i, inner) => format!("{}_{i}", spell(inner)),
            Symbol::Tuple(parts) => parts.iter().map(spell).collect::<Vec<_>>().join("_"),
            Symbol::Slice(phi) => {
                let text: String = phi
                    .to_string()
                    .chars()
                    .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
                    .collect();
                format!("s_{}", text.trim_matches('_'))
            }
        }
    }
    let mut out = BTreeMap::new();
    let mut taken: Vec<String> = Vec::new();
    for (c, _) in sig.connectives() {
        let base = spell(c);
        let mut name = base.clone();
        let mut k = 1;
        while taken.contains(&name) || !crate::signature::is_valid_name(&name) {
            name = format!("{base}_{k}");
            k += 1;
        }
        taken.push(name.clone());
        out.insert(c.clone(), name);
    }
    out
}

fn spell_formula(phi: &Formula, names: &BTreeMap<Symbol, String>) -> String {
    match phi {
        Formula::Var(i) => format!("x{i}"),
        Formula::App(c, args) if args.is_empty() => names[c].clone(),
        Formula::App(c, args) => {
            let inner: Vec<String> = args.iter().map(|a| spell_formula(a, names)).collect();
            format!("{}({})", names[c], inner.join(", "))
        }
    }
}

/// Renders a logic (and its signature) back into declarations. Oracle providers
/// without a presentation are rendered as their signature plus a comment.
pub fn emit_logic(l: &Logic) -> String {
    let sig = l.signature();
    let names = dsl_names(sig);
    let sig_name = format!("{}_sig", ident(l.name()));
    let mut out = String::new();
    let conns: Vec<String> = sig
        .connectives()
        .map(|(c, a)| format!("{}/{a}", names[c]))
        .collect();
    let _ = writeln!(out, "signature {sig_name} {{ {} }}", conns.join(", "));
    match l.provider() {
        Provider::Bottom => {
            let _ = writeln!(out, "logic {} : {sig_name} = bottom;", ident(l.name()));
        }
        Provider::Top => {
            let _ = writeln!(out, "logic {} : {sig_name} = top;", ident(l.name()));
        }
        Provider::Presented {
            calculus,
            matrix,
            matrix_complete,
        } => {
            let _ = writeln!(out, "logic {} : {sig_name} {{", ident(l.name()));
            if let Some(c) = calculus {
                for a in c.axioms() {
                    let _ = writeln!(out, "  axiom {}: {};", ident(&a.name), spell_formula(&a.formula, &names));
                }
                for r in c.rules() {
                    let premises: Vec<String> = r.premises.iter().map(|p| spell_formula(p, &names)).collect();
                    let _ = writeln!(
                        out,
                        "  rule {}: {} |- {};",
                        ident(&r.name),
                        premises.join(", "),
                        spell_formula(&r.conclusion, &names)
                    );
                }
            }
            if let Some(m) = matrix {
                let designated: Vec<String> = m.designated().iter().map(u8::to_string).collect();
                let _ = writeln!(
                    out,
                    "  matrix{} {{ values {}; designated {};",
                    if *matrix_complete && calculus.is_some() { " complete" } else { "" },
                    m.values(),
                    designated.join(", ")
                );
                for (c, _) in sig.connectives() {
                    let t: Vec<String> = m.table(c).unwrap_or(&[]).iter().map(u8::to_string).collect();
                    let _ = writeln!(out, "    table {} = [{}];", names[c], t.join(", "));
                }
                let _ = writeln!(out, "  }}");
            }
            let _ = writeln!(out, "}}");
        }
        _ => {
            let _ = writeln!(out, "# logic {} is an oracle without a finite presentation", l.name());
        }
    }
    out
}

fn ident(name: &str) -> String {
    let s: String = name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' { c } else { '_' })
        .collect();
    if s.is_empty() || s.starts_with(|c: char| c.is_ascii_digit()) {
        format!("l_{s}")
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "
        signature N { neg/1, imp/2 }   # classical connectives
        logic C : N {
            axiom A1: imp(x0, imp(x1, x0));
            rule MP: x0, imp(x0, x1) |- x1;
            matrix complete { values 2; designated 1; table neg = [1, 0]; table imp = [1, 1, 0, 1]; }
        }
        logic B : N = bottom;
        morphism id : C -> C flexible { neg -> neg(x0), imp -> imp(x0, x1) }
    ";

    #[test]
    fn loads_declarations() {
        let env = load_str(SMALL).unwrap();
        assert_eq!(env.logics.len(), 2);
        assert_eq!(env.morphisms.len(), 1);
        assert_eq!(env.logic("C").unwrap().calculus().unwrap().rules().len(), 1);
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let text = format!("{SMALL}\nlogic C : N = top;");
        let err = load_str(&text).unwrap_err();
        assert!(err.to_string().contains("already declared"), "{err}");
    }

    #[test]
    fn slice_violation_is_located() {
        let text = "signature N { imp/2 } morphism m : N -> N flexible { imp -> imp(x0, x0) }";
        let Error::Parse(e) = load_str(text).unwrap_err() else { panic!() };
        assert!(e.message.contains("exactly the variables"), "{}", e.message);
        assert_eq!(e.line, 1);
    }

    #[test]
    fn emitted_logics_reload() {
        let env = load_str(SMALL).unwrap();
        let text = emit_logic(env.logic("C").unwrap());
        let again = load_str(&text).unwrap();
        let c = again.logics.values().next().unwrap();
        assert_eq!(c.calculus().unwrap().axioms().len(), 1);
        assert!(c.matrix().is_some());
    }
}
