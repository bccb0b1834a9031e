//! Bounded backward proof search for Hilbert calculi.
//!
//! Goals are terms whose variables are either rigid (the object variables of the
//! query) or metavariables introduced when a scheme is instantiated. A goal is
//! closed by a hypothesis, an axiom instance, or a rule whose conclusion unifies
//! with it, after which the premises become goals. Search is iterative deepening
//! on the size of the proof tree, so the first proof found is a smallest one.

use std::collections::HashMap;
use std::rc::Rc;

use serde::Serialize;

use crate::calculus::Calculus;
use crate::formula::{Formula, Substitution};
use crate::proof::{Justification, Proof, Step};
use crate::signature::Symbol;

/// Resource bounds shared by every bounded procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Budget {
    /// Maximum proof length (tree size); `0` disables proof search.
    pub max_len: usize,
    /// Maximum complexity of a formula bound to a scheme variable.
    pub max_instance: usize,
    /// Formula complexity bound for enumerations.
    pub enum_compl: usize,
    /// Number of variables for enumerations.
    pub vars: usize,
    /// Search nodes expanded per query before giving up.
    pub expansions: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_len: 40,
            max_instance: 6,
            enum_compl: 4,
            vars: 2,
            expansions: 200_000,
        }
    }
}

impl Budget {
    /// A budget that answers from semantic providers only.
    pub fn semantic() -> Self {
        Budget {
            max_len: 0,
            ..Budget::default()
        }
    }

    pub fn with_len(self, max_len: usize) -> Self {
        Budget { max_len, ..self }
    }

    pub fn with_expansions(self, expansions: usize) -> Self {
        Budget { expansions, ..self }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Proof),
    /// No proof within the length and instance bounds.
    Exhausted,
    /// The expansion cap was hit first.
    Capped,
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Term {
    Rigid(u32),
    Meta(u32),
    App(u16, Rc<[Term]>),
}

#[derive(Clone)]
enum Kind {
    Hyp,
    Axiom { index: usize, metas: Vec<(u32, u32)> },
    Rule { index: usize, metas: Vec<(u32, u32)>, order: Rc<[usize]> },
}

#[derive(Clone)]
struct Node {
    goal: Term,
    kind: Kind,
}

struct Scheme {
    term: Term,
    vars: Vec<u32>,
}

struct RuleScheme {
    premises: Vec<Scheme>,
    conclusion: Scheme,
    order: Rc<[usize]>,
}

struct Ctx<'a> {
    symbols: Vec<Symbol>,
    hyps: Vec<Term>,
    axioms: Vec<Scheme>,
    rules: Vec<RuleScheme>,
    bindings: Vec<Option<Term>>,
    trail: Vec<u32>,
    nodes: Vec<Node>,
    memo: HashMap<Term, usize>,
    max_instance: usize,
    expansions: usize,
    cap: usize,
    capped: bool,
    found: Option<Vec<Node>>,
    _calculus: &'a Calculus,
}

fn to_term(phi: &Formula, index: &HashMap<&Symbol, u16>, var: &mut impl FnMut(u32) -> Term) -> Term {
    match phi {
        Formula::Var(i) => var(*i),
        Formula::App(c, args) => Term::App(
            index[c],
            args.iter().map(|a| to_term(a, index, var)).collect::<Vec<_>>().into(),
        ),
    }
}

fn scheme(phi: &Formula, index: &HashMap<&Symbol, u16>) -> Scheme {
    Scheme {
        term: to_term(phi, index, &mut |i| Term::Rigid(i)),
        vars: phi.variables().into_iter().collect(),
    }
}

impl<'a> Ctx<'a> {
    fn new(calculus: &'a Calculus, gamma: &[Formula], budget: &Budget, goal: &Formula) -> Self {
        let symbols: Vec<Symbol> = calculus.signature().connectives().map(|(c, _)| c.clone()).collect();
        let index: HashMap<&Symbol, u16> = symbols.iter().enumerate().map(|(i, c)| (c, i as u16)).collect();
        let rigid = |phi: &Formula| to_term(phi, &index, &mut |i| Term::Rigid(i));
        let axioms = calculus.axioms().iter().map(|a| scheme(&a.formula, &index)).collect();
        let rules = calculus
            .rules()
            .iter()
            .map(|r| {
                let mut order: Vec<usize> = (0..r.premises.len()).collect();
                // largest premise first: it constrains the shared metavariables most
                order.sort_by_key(|k| std::cmp::Reverse(r.premises[*k].complexity()));
                RuleScheme {
                    premises: r.premises.iter().map(|p| scheme(p, &index)).collect(),
                    conclusion: scheme(&r.conclusion, &index),
                    order: order.into(),
                }
            })
            .collect();
        let widest = gamma
            .iter()
            .chain(std::iter::once(goal))
            .map(Formula::complexity)
            .max()
            .unwrap_or(0);
        Ctx {
            hyps: gamma.iter().map(rigid).collect(),
            symbols: symbols.clone(),
            axioms,
            rules,
            bindings: Vec::new(),
            trail: Vec::new(),
            nodes: Vec::new(),
            memo: HashMap::new(),
            max_instance: budget.max_instance.max(widest),
            expansions: 0,
            cap: budget.expansions,
            capped: false,
            found: None,
            _calculus: calculus,
        }
    }

    fn deref<'t>(&'t self, mut t: &'t Term) -> &'t Term {
        while let Term::Meta(m) = t {
            match &self.bindings[*m as usize] {
                Some(b) => t = b,
                None => break,
            }
        }
        t
    }

    fn resolve(&self, t: &Term) -> Term {
        match self.deref(t) {
            Term::App(c, args) => Term::App(*c, args.iter().map(|a| self.resolve(a)).collect::<Vec<_>>().into()),
            other => other.clone(),
        }
    }

    fn complexity(&self, t: &Term) -> usize {
        match self.deref(t) {
            Term::App(_, args) => 1 + args.iter().map(|a| self.complexity(a)).sum::<usize>(),
            _ => 0,
        }
    }

    fn occurs(&self, m: u32, t: &Term) -> bool {
        match self.deref(t) {
            Term::Meta(n) => *n == m,
            Term::Rigid(_) => false,
            Term::App(_, args) => args.iter().any(|a| self.occurs(m, a)),
        }
    }

    fn bind(&mut self, m: u32, t: Term) -> bool {
        if self.occurs(m, &t) || self.complexity(&t) > self.max_instance {
            return false;
        }
        self.bindings[m as usize] = Some(t);
        self.trail.push(m);
        true
    }

    fn unify(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.deref(a).clone();
        let b = self.deref(b).clone();
        match (&a, &b) {
            (Term::Meta(x), Term::Meta(y)) if x == y => true,
            (Term::Meta(x), _) => self.bind(*x, b),
            (_, Term::Meta(y)) => self.bind(*y, a),
            (Term::Rigid(x), Term::Rigid(y)) => x == y,
            (Term::App(c, xs), Term::App(d, ys)) => {
                c == d && xs.iter().zip(ys.iter()).all(|(x, y)| self.unify(x, y))
            }
            _ => false,
        }
    }

    fn mark(&self) -> (usize, usize, usize) {
        (self.trail.len(), self.bindings.len(), self.nodes.len())
    }

    fn undo(&mut self, (trail, bindings, nodes): (usize, usize, usize)) {
        while self.trail.len() > trail {
            let m = self.trail.pop().unwrap();
            self.bindings[m as usize] = None;
        }
        self.bindings.truncate(bindings);
        self.nodes.truncate(nodes);
    }

    fn instantiate(&mut self, s: &Term, metas: &[(u32, u32)]) -> Term {
        match s {
            Term::Rigid(i) => Term::Meta(metas.iter().find(|(v, _)| v == i).unwrap().1),
            Term::App(c, args) => Term::App(
                *c,
                args.iter().map(|a| self.instantiate(a, metas)).collect::<Vec<_>>().into(),
            ),
            Term::Meta(_) => unreachable!("schemes contain no metavariables"),
        }
    }

    fn fresh(&mut self, vars: &[u32], metas: &mut Vec<(u32, u32)>) {
        for v in vars {
            if !metas.iter().any(|(w, _)| w == v) {
                metas.push((*v, self.bindings.len() as u32));
                self.bindings.push(None);
            }
        }
    }

    fn key(&self, goal: &Term) -> Term {
        fn rename(t: &Term, seen: &mut Vec<u32>) -> Term {
            match t {
                Term::Meta(m) => {
                    let k = seen.iter().position(|x| x == m).unwrap_or_else(|| {
                        seen.push(*m);
                        seen.len() - 1
                    });
                    Term::Meta(k as u32)
                }
                Term::Rigid(i) => Term::Rigid(*i),
                Term::App(c, args) => Term::App(*c, args.iter().map(|a| rename(a, seen)).collect::<Vec<_>>().into()),
            }
        }
        rename(&self.resolve(goal), &mut Vec::new())
    }

    fn solve(&mut self, goal: &Term, budget: usize, k: &mut dyn FnMut(&mut Ctx<'a>, usize) -> bool) -> bool {
        if budget == 0 || self.capped {
            return false;
        }
        self.expansions += 1;
        if self.expansions > self.cap {
            self.capped = true;
            return false;
        }
        let key = self.key(goal);
        if self.memo.get(&key).is_some_and(|b| *b >= budget) {
            return false;
        }
        let mut called = false;
        let mut wrapped = |ctx: &mut Ctx<'a>, rest: usize| {
            called = true;
            k(ctx, rest)
        };
        if self.alternatives(goal, budget, &mut wrapped) {
            return true;
        }
        if !called && !self.capped {
            let entry = self.memo.entry(key).or_insert(0);
            *entry = (*entry).max(budget);
        }
        false
    }

    fn alternatives(&mut self, goal: &Term, budget: usize, k: &mut dyn FnMut(&mut Ctx<'a>, usize) -> bool) -> bool {
        for h in 0..self.hyps.len() {
            let m = self.mark();
            let hyp = self.hyps[h].clone();
            if self.unify(goal, &hyp) {
                self.nodes.push(Node {
                    goal: goal.clone(),
                    kind: Kind::Hyp,
                });
                if k(self, budget - 1) {
                    return true;
                }
            }
            self.undo(m);
        }
        for a in 0..self.axioms.len() {
            let m = self.mark();
            let mut metas = Vec::new();
            let (term, vars) = (self.axioms[a].term.clone(), self.axioms[a].vars.clone());
            self.fresh(&vars, &mut metas);
            let inst = self.instantiate(&term, &metas);
            if self.unify(goal, &inst) {
                self.nodes.push(Node {
                    goal: goal.clone(),
                    kind: Kind::Axiom { index: a, metas },
                });
                if k(self, budget - 1) {
                    return true;
                }
            }
            self.undo(m);
        }
        for r in 0..self.rules.len() {
            let n = self.rules[r].premises.len();
            if budget < 1 + n {
                continue;
            }
            let m = self.mark();
            let mut metas = Vec::new();
            let concl = self.rules[r].conclusion.term.clone();
            let mut vars = self.rules[r].conclusion.vars.clone();
            for p in &self.rules[r].premises {
                vars.extend(&p.vars);
            }
            self.fresh(&vars, &mut metas);
            let inst = self.instantiate(&concl, &metas);
            if self.unify(goal, &inst) {
                let order = self.rules[r].order.clone();
                let premises: Vec<Term> = order
                    .iter()
                    .map(|p| {
                        let s = self.rules[r].premises[*p].term.clone();
                        self.instantiate(&s, &metas)
                    })
                    .collect();
                self.nodes.push(Node {
                    goal: goal.clone(),
                    kind: Kind::Rule { index: r, metas, order },
                });
                if self.solve_all(&premises, 0, budget - 1, k) {
                    return true;
                }
            }
            self.undo(m);
        }
        false
    }

    fn solve_all(
        &mut self,
        goals: &[Term],
        i: usize,
        budget: usize,
        k: &mut dyn FnMut(&mut Ctx<'a>, usize) -> bool,
    ) -> bool {
        if i == goals.len() {
            return k(self, budget);
        }
        // every later goal needs at least one step
        let reserve = goals.len() - i - 1;
        if budget <= reserve {
            return false;
        }
        let goal = goals[i].clone();
        self.solve(&goal, budget - reserve, &mut |ctx, rest| {
            ctx.solve_all(goals, i + 1, rest + reserve, k)
        })
    }

    fn to_formula(&self, t: &Term) -> Formula {
        match self.deref(t) {
            Term::Rigid(i) => Formula::Var(*i),
            // any formula will do for an unconstrained metavariable
            Term::Meta(_) => Formula::Var(0),
            Term::App(c, args) => Formula::App(
                self.symbols[*c as usize].clone(),
                args.iter().map(|a| self.to_formula(a)).collect(),
            ),
        }
    }

    fn substitution(&self, metas: &[(u32, u32)]) -> Substitution {
        Substitution::from_pairs(metas.iter().map(|(v, m)| (*v, self.to_formula(&Term::Meta(*m)))))
    }

    /// Linearizes the recorded pre-order tree into a proof, sharing repeated formulas.
    fn build(&self, nodes: &[Node]) -> Proof {
        fn walk(ctx: &Ctx<'_>, nodes: &[Node], pos: &mut usize, steps: &mut Vec<Step>, seen: &mut HashMap<Formula, usize>) -> usize {
            let node = &nodes[*pos];
            *pos += 1;
            let formula = ctx.to_formula(&node.goal);
            let justification = match &node.kind {
                Kind::Hyp => Justification::Hypothesis,
                Kind::Axiom { index, metas } => Justification::Axiom {
                    index: *index,
                    subst: ctx.substitution(metas),
                },
                Kind::Rule { index, metas, order } => {
                    let mut premises = vec![0; order.len()];
                    for p in order.iter() {
                        premises[*p] = walk(ctx, nodes, pos, steps, seen);
                    }
                    Justification::Rule {
                        index: *index,
                        subst: ctx.substitution(metas),
                        premises,
                    }
                }
            };
            if let Some(i) = seen.get(&formula) {
                return *i;
            }
            steps.push(Step {
                formula: formula.clone(),
                justification,
            });
            seen.insert(formula, steps.len() - 1);
            steps.len() - 1
        }
        let mut steps = Vec::new();
        walk(self, nodes, &mut 0, &mut steps, &mut HashMap::new());
        Proof { steps }
    }
}

/// Searches for a proof of `gamma ⊢ phi` within `budget`.
pub fn search(calculus: &Calculus, gamma: &[Formula], phi: &Formula, budget: &Budget) -> SearchOutcome {
    let mut ctx = Ctx::new(calculus, gamma, budget, phi);
    let index: HashMap<&Symbol, u16> = ctx.symbols.iter().enumerate().map(|(i, c)| (c, i as u16)).collect();
    let goal = to_term(phi, &index, &mut |i| Term::Rigid(i));
    for size in 1..=budget.max_len {
        let found = ctx.solve(&goal, size, &mut |ctx, _| {
            ctx.found = Some(ctx.nodes.clone());
            true
        });
        if found {
            let nodes = ctx.found.take().unwrap();
            let mut proof = ctx.build(&nodes);
            // a shared final formula may have been emitted before the root
            if proof.conclusion() != Some(phi) {
                let i = proof.steps.iter().position(|s| &s.formula == phi).unwrap();
                let copy = proof.steps[i].clone();
                proof.steps.push(copy);
            }
            return SearchOutcome::Found(proof);
        }
        if ctx.capped {
            return SearchOutcome::Capped;
        }
    }
    SearchOutcome::Exhausted
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::calculus::{Axiom, Rule};
    use crate::formula::parse;
    use crate::signature::Signature;

    fn lukasiewicz() -> Calculus {
        let s = Arc::new(Signature::from_pairs("CPL1", [("neg", 1), ("imp", 2)]).unwrap());
        let p = |t: &str| parse(t, &s).unwrap();
        let axioms = vec![
            Axiom { name: "A1".into(), formula: p("imp(x0, imp(x1, x0))") },
            Axiom { name: "A2".into(), formula: p("imp(imp(x0, imp(x1, x2)), imp(imp(x0, x1), imp(x0, x2)))") },
            Axiom { name: "A3".into(), formula: p("imp(imp(neg(x0), neg(x1)), imp(x1, x0))") },
        ];
        let rules = vec![Rule { name: "MP".into(), premises: vec![p("x0"), p("imp(x0, x1)")], conclusion: p("x1") }];
        Calculus::new(s.clone(), axioms, rules).unwrap()
    }

    #[test]
    fn modus_ponens_in_three_steps() {
        let c = lukasiewicz();
        let s = c.signature().clone();
        let gamma = vec![parse("x0", &s).unwrap(), parse("imp(x0, x1)", &s).unwrap()];
        let phi = parse("x1", &s).unwrap();
        let SearchOutcome::Found(proof) = search(&c, &gamma, &phi, &Budget::default()) else {
            panic!("no proof")
        };
        assert_eq!(proof.len(), 3);
        assert_eq!(proof.check(&c, &gamma, &phi), Ok(()));
    }

    #[test]
    fn identity_in_five_steps() {
        let c = lukasiewicz();
        let phi = parse("imp(x0, x0)", c.signature()).unwrap();
        let SearchOutcome::Found(proof) = search(&c, &[], &phi, &Budget::default().with_len(5)) else {
            panic!("no proof")
        };
        assert_eq!(proof.len(), 5);
        assert_eq!(proof.check(&c, &[], &phi), Ok(()));
    }

    #[test]
    fn unprovable_variable_is_exhausted() {
        let c = lukasiewicz();
        let out = search(&c, &[], &Formula::Var(0), &Budget::default().with_len(6));
        assert!(matches!(out, SearchOutcome::Exhausted | SearchOutcome::Capped));
    }
}
