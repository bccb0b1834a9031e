//! Logics as signatures with a consequence provider, and three-valued derivability.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::calculus::Calculus;
use crate::error::{Error, Result};
use crate::flexible::FlexibleMorphism;
use crate::formula::Formula;
use crate::matrix::{Matrix, Valuation};
use crate::proof::Proof;
use crate::search::{search, Budget, SearchOutcome};
use crate::signature::{Signature, StrictMorphism, Symbol};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Answer {
    Yes { evidence: Evidence },
    No { refutation: Refutation },
    Unknown { reason: String },
}

impl Answer {
    pub fn yes(evidence: Evidence) -> Self {
        Answer::Yes { evidence }
    }

    pub fn no(refutation: Refutation) -> Self {
        Answer::No { refutation }
    }

    pub fn unknown(reason: impl Into<String>) -> Self {
        Answer::Unknown { reason: reason.into() }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Answer::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Answer::No { .. })
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Answer::Unknown { .. })
    }

    pub fn evidence(&self) -> Option<&Evidence> {
        match self {
            Answer::Yes { evidence } => Some(evidence),
            _ => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match self {
            Answer::No { refutation } => Some(refutation),
            _ => None,
        }
    }

    /// `Some(true)` for Yes, `Some(false)` for No.
    pub fn decided(&self) -> Option<bool> {
        match self {
            Answer::Yes { .. } => Some(true),
            Answer::No { .. } => Some(false),
            Answer::Unknown { .. } => None,
        }
    }

    /// Short verdict label.
    pub fn label(&self) -> &'static str {
        match self {
            Answer::Yes { .. } => "yes",
            Answer::No { .. } => "no",
            Answer::Unknown { .. } => "unknown",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// A checkable proof, with the hypotheses it actually uses.
    Proof { proof: Proof, used: Vec<Formula> },
    /// A matrix that is declared complete validates the sequent.
    Semantic,
    /// The conclusion is one of the hypotheses.
    Membership,
    /// The provider derives everything.
    Top,
    /// Every component derives its projection of the sequent.
    Components { parts: Vec<Evidence> },
    /// The least stage of a chain that derives the sequent.
    Stage { index: usize, evidence: Box<Evidence> },
    /// Derivability of the translated sequent in the target.
    Pulled { evidence: Box<Evidence> },
    /// Replacement of interderivable subformulas turned the goal into `via`.
    Closure {
        via: Formula,
        merges: Vec<(Formula, Formula)>,
        evidence: Box<Evidence>,
    },
    /// Composite of generator evidence along a chain of translations.
    Composed,
}

impl Evidence {
    pub fn proof(&self) -> Option<&Proof> {
        match self {
            Evidence::Proof { proof, .. } => Some(proof),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Refutation {
    /// A valuation designating every hypothesis but not the conclusion.
    CounterValuation { valuation: Valuation },
    /// The least logic derives only members of the context.
    NotMember,
    Component { index: usize, refutation: Box<Refutation> },
    AllStages { stages: Vec<Refutation> },
    Pulled { refutation: Box<Refutation> },
}

#[derive(Clone, Debug)]
pub enum Provider {
    /// A calculus and/or a matrix. A matrix next to a calculus is declared sound
    /// for it; `matrix_complete` further declares it complete. A matrix alone
    /// defines the logic.
    Presented {
        calculus: Option<Calculus>,
        matrix: Option<Matrix>,
        matrix_complete: bool,
    },
    /// `Γ ⊢ φ` iff `φ ∈ Γ`.
    Bottom,
    /// Everything is derivable.
    Top,
    Meet(Vec<Logic>),
    /// A chain ordered by strength.
    DirectedSup(Vec<Logic>),
    InverseImage { morphism: FlexibleMorphism, target: Box<Logic> },
    Product { factors: Vec<Logic>, projections: Vec<StrictMorphism> },
    /// Chain of logics with flexible translations between consecutive stages,
    /// over the coproduct of the stage signatures (stage `i` tags its connectives `i`).
    ChainColimit { stages: Vec<Logic>, steps: Vec<FlexibleMorphism> },
    /// Bounded congruential closure: replacement of interderivable subformulas.
    Closure { base: Box<Logic>, inner: Budget },
}

#[derive(Clone, Debug)]
pub struct Logic {
    name: String,
    signature: Arc<Signature>,
    provider: Provider,
}

impl Logic {
    pub fn new(name: impl Into<String>, signature: Arc<Signature>, provider: Provider) -> Result<Self> {
        let logic = Logic {
            name: name.into(),
            signature,
            provider,
        };
        logic.validate()?;
        Ok(logic)
    }

    fn validate(&self) -> Result<()> {
        let same = |other: &Signature| -> Result<()> {
            if other.same_connectives(&self.signature) {
                Ok(())
            } else {
                Err(Error::SignatureMismatch(format!(
                    "{} is not over {}",
                    other.name(),
                    self.signature.name()
                )))
            }
        };
        match &self.provider {
            Provider::Presented { calculus, matrix, .. } => {
                if calculus.is_none() && matrix.is_none() {
                    return Err(Error::InvalidCalculus(format!("logic `{}` has no provider", self.name)));
                }
                if let Some(c) = calculus {
                    same(c.signature())?;
                }
                if let Some(m) = matrix {
                    same(m.signature())?;
                }
            }
            Provider::Meet(parts) | Provider::DirectedSup(parts) => {
                if parts.is_empty() {
                    return Err(Error::Unsupported("empty family of logics".into()));
                }
                for p in parts {
                    same(&p.signature)?;
                }
            }
            Provider::InverseImage { morphism, target } => {
                same(morphism.source())?;
                if !morphism.target().same_connectives(&target.signature) {
                    return Err(Error::SignatureMismatch("morphism target is not the logic signature".into()));
                }
            }
            Provider::Product { factors, projections } => {
                if factors.len() != projections.len() {
                    return Err(Error::SignatureMismatch("one projection per factor".into()));
                }
                for (f, p) in factors.iter().zip(projections) {
                    same(p.source())?;
                    if !p.target().same_connectives(&f.signature) {
                        return Err(Error::SignatureMismatch("projection target is not the factor".into()));
                    }
                }
            }
            Provider::ChainColimit { stages, steps } => {
                if stages.is_empty() || steps.len() + 1 != stages.len() {
                    return Err(Error::Unsupported("a chain needs one map between consecutive stages".into()));
                }
                for (i, s) in steps.iter().enumerate() {
                    if !s.source().same_connectives(&stages[i].signature)
                        || !s.target().same_connectives(&stages[i + 1].signature)
                    {
                        return Err(Error::SignatureMismatch(format!("chain map {i} does not connect its stages")));
                    }
                }
            }
            Provider::Closure { base, .. } => same(&base.signature)?,
            Provider::Bottom | Provider::Top => {}
        }
        Ok(())
    }

    pub fn presented(
        name: impl Into<String>,
        signature: Arc<Signature>,
        calculus: Option<Calculus>,
        matrix: Option<Matrix>,
        matrix_complete: bool,
    ) -> Result<Self> {
        Logic::new(
            name,
            signature,
            Provider::Presented {
                calculus,
                matrix,
                matrix_complete,
            },
        )
    }

    pub fn from_calculus(name: impl Into<String>, calculus: Calculus) -> Self {
        let signature = calculus.signature().clone();
        Logic::presented(name, signature, Some(calculus), None, false).expect("a calculus is a provider")
    }

    pub fn from_matrix(name: impl Into<String>, matrix: Matrix) -> Self {
        let signature = matrix.signature().clone();
        Logic::presented(name, signature, None, Some(matrix), true).expect("a matrix is a provider")
    }

    /// The least logic over `sig`.
    pub fn bottom(sig: Arc<Signature>) -> Self {
        Logic {
            name: format!("bot({})", sig.name()),
            signature: sig,
            provider: Provider::Bottom,
        }
    }

    /// The greatest logic over `sig`.
    pub fn top(sig: Arc<Signature>) -> Self {
        Logic {
            name: format!("top({})", sig.name()),
            signature: sig,
            provider: Provider::Top,
        }
    }

    /// Conjunction of the providers.
    pub fn meet(l1: &Logic, l2: &Logic) -> Result<Self> {
        Logic::new(
            format!("meet({}, {})", l1.name, l2.name),
            l1.signature.clone(),
            Provider::Meet(vec![l1.clone(), l2.clone()]),
        )
    }

    /// Supremum of a chain `l_0 ≤ l_1 ≤ …`.
    pub fn directed_sup(chain: &[Logic]) -> Result<Self> {
        let first = chain.first().ok_or_else(|| Error::Unsupported("empty chain".into()))?;
        let names: Vec<&str> = chain.iter().map(|l| l.name.as_str()).collect();
        Logic::new(
            format!("sup({})", names.join(", ")),
            first.signature.clone(),
            Provider::DirectedSup(chain.to_vec()),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn provider(&self) -> &Provider {
        &self.provider
    }

    pub fn calculus(&self) -> Option<&Calculus> {
        match &self.provider {
            Provider::Presented { calculus, .. } => calculus.as_ref(),
            _ => None,
        }
    }

    pub fn matrix(&self) -> Option<&Matrix> {
        match &self.provider {
            Provider::Presented { matrix, .. } => matrix.as_ref(),
            _ => None,
        }
    }

    /// A generating presentation, when the provider has one: the calculus itself,
    /// the empty calculus for the least logic and `⊢ x0` for the greatest.
    pub fn presentation(&self) -> Option<Calculus> {
        match &self.provider {
            Provider::Presented { calculus, .. } => calculus.clone(),
            Provider::Bottom => Some(Calculus::empty(self.signature.clone())),
            Provider::Top => Some(
                Calculus::new(
                    self.signature.clone(),
                    vec![crate::calculus::Axiom {
                        name: "all".into(),
                        formula: Formula::Var(0),
                    }],
                    vec![],
                )
                .expect("x0 is a formula over any signature"),
            ),
            _ => None,
        }
    }

    /// True if every query is answered Yes or No.
    pub fn is_decidable(&self) -> bool {
        match &self.provider {
            Provider::Presented {
                calculus,
                matrix,
                matrix_complete,
            } => matrix.is_some() && (*matrix_complete || calculus.is_none()),
            Provider::Bottom | Provider::Top => true,
            Provider::Meet(parts) => parts.iter().all(Logic::is_decidable),
            Provider::DirectedSup(parts) => parts.iter().all(Logic::is_decidable),
            Provider::InverseImage { target, .. } => target.is_decidable(),
            Provider::Product { factors, .. } => factors.iter().all(Logic::is_decidable),
            Provider::ChainColimit { stages, .. } => stages.iter().all(Logic::is_decidable),
            Provider::Closure { .. } => false,
        }
    }

    /// Decides `gamma ⊢ phi` within `budget`.
    pub fn derives(&self, gamma: &[Formula], phi: &Formula, budget: &Budget) -> Result<Answer> {
        for f in gamma.iter().chain(std::iter::once(phi)) {
            self.signature.check(f)?;
        }
        Ok(self.answer(gamma, phi, budget))
    }

    /// `derives` for formulas already known to be over the signature.
    pub fn answer(&self, gamma: &[Formula], phi: &Formula, budget: &Budget) -> Answer {
        match &self.provider {
            Provider::Presented {
                calculus,
                matrix,
                matrix_complete,
            } => presented(calculus.as_ref(), matrix.as_ref(), *matrix_complete, gamma, phi, budget),
            Provider::Bottom => {
                if gamma.contains(phi) {
                    Answer::yes(Evidence::Membership)
                } else {
                    Answer::no(Refutation::NotMember)
                }
            }
            Provider::Top => Answer::yes(Evidence::Top),
            Provider::Meet(parts) => all_of(parts.iter().map(|l| l.answer(gamma, phi, budget))),
            Provider::DirectedSup(chain) => {
                any_stage((0..chain.len()).map(|i| (i, chain[i].answer(gamma, phi, budget))))
            }
            Provider::InverseImage { morphism, target } => {
                let gamma: Vec<Formula> = gamma.iter().map(|g| morphism.extend(g)).collect();
                pulled(target.answer(&gamma, &morphism.extend(phi), budget))
            }
            Provider::Product { factors, projections } => all_of(factors.iter().zip(projections).map(|(l, p)| {
                let gamma: Vec<Formula> = gamma.iter().map(|g| p.extend(g)).collect();
                l.answer(&gamma, &p.extend(phi), budget)
            })),
            Provider::ChainColimit { stages, steps } => chain_colimit(stages, steps, gamma, phi, budget),
            Provider::Closure { base, inner } => closure(base, inner, gamma, phi, budget),
        }
    }

    /// `phi ⊣⊢ psi`: Yes needs both directions, No needs one refuted direction.
    pub fn interderivable(&self, phi: &Formula, psi: &Formula, budget: &Budget) -> Answer {
        if phi == psi {
            return Answer::yes(Evidence::Membership);
        }
        let forward = self.answer(std::slice::from_ref(phi), psi, budget);
        if forward.is_no() {
            return forward;
        }
        let backward = self.answer(std::slice::from_ref(psi), phi, budget);
        match (forward, backward) {
            (_, b @ Answer::No { .. }) => b,
            (Answer::Yes { evidence: a }, Answer::Yes { evidence: b }) => {
                Answer::yes(Evidence::Components { parts: vec![a, b] })
            }
            (Answer::Unknown { reason }, _) | (_, Answer::Unknown { reason }) => Answer::Unknown { reason },
            _ => unreachable!(),
        }
    }

    /// True when every counter-valuation of the attached matrix also refutes the
    /// congruential closure: designation-equivalence is a congruence of the matrix.
    pub fn refutations_survive_closure(&self) -> bool {
        match &self.provider {
            Provider::Presented { matrix: Some(m), .. } => m.designation_is_congruence(),
            Provider::Bottom | Provider::Top => true,
            _ => false,
        }
    }
}

fn presented(
    calculus: Option<&Calculus>,
    matrix: Option<&Matrix>,
    complete: bool,
    gamma: &[Formula],
    phi: &Formula,
    budget: &Budget,
) -> Answer {
    if let Some(m) = matrix {
        if let Err(valuation) = m.consequence(gamma, phi) {
            return Answer::no(Refutation::CounterValuation { valuation });
        }
    }
    let mut reason = "no proof provider".to_string();
    if let Some(c) = calculus {
        if budget.max_len > 0 {
            match search(c, gamma, phi, budget) {
                SearchOutcome::Found(proof) => {
                    let used = proof.used_hypotheses();
                    return Answer::yes(Evidence::Proof { proof, used });
                }
                SearchOutcome::Exhausted => {
                    reason = format!("no proof within length {}", budget.max_len);
                }
                SearchOutcome::Capped => {
                    reason = format!("search cap of {} expansions reached", budget.expansions);
                }
            }
        } else {
            reason = "proof search disabled".into();
        }
    }
    if matrix.is_some() && (complete || calculus.is_none()) {
        return Answer::yes(Evidence::Semantic);
    }
    Answer::unknown(reason)
}

fn all_of(answers: impl Iterator<Item = Answer>) -> Answer {
    let mut parts = Vec::new();
    let mut unknown = None;
    for (index, a) in answers.enumerate() {
        match a {
            Answer::Yes { evidence } => parts.push(evidence),
            Answer::No { refutation } => {
                return Answer::no(Refutation::Component {
                    index,
                    refutation: Box::new(refutation),
                })
            }
            Answer::Unknown { reason } => unknown = unknown.or(Some(format!("component {index}: {reason}"))),
        }
    }
    match unknown {
        Some(reason) => Answer::Unknown { reason },
        None => Answer::yes(Evidence::Components { parts }),
    }
}

fn any_stage(answers: impl Iterator<Item = (usize, Answer)>) -> Answer {
    let mut stages = Vec::new();
    let mut unknown = None;
    for (index, a) in answers {
        match a {
            Answer::Yes { evidence } => {
                return Answer::yes(Evidence::Stage {
                    index,
                    evidence: Box::new(evidence),
                })
            }
            Answer::No { refutation } => stages.push(refutation),
            Answer::Unknown { reason } => unknown = unknown.or(Some(format!("stage {index}: {reason}"))),
        }
    }
    match unknown {
        Some(reason) => Answer::Unknown { reason },
        None => Answer::no(Refutation::AllStages { stages }),
    }
}

fn pulled(a: Answer) -> Answer {
    match a {
        Answer::Yes { evidence } => Answer::yes(Evidence::Pulled {
            evidence: Box::new(evidence),
        }),
        Answer::No { refutation } => Answer::no(Refutation::Pulled {
            refutation: Box::new(refutation),
        }),
        u => u,
    }
}

/// Highest stage tag occurring in `phi`.
fn max_stage(phi: &Formula) -> usize {
    phi.symbols()
        .into_iter()
        .filter_map(|s| match s {
            Symbol::Tag(i, _) => Some(*i),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// `θ^{(j)}`: pushes every connective tagged `i ≤ j` to stage `j` along the chain.
pub fn push_to_stage(phi: &Formula, j: usize, steps: &[FlexibleMorphism]) -> Formula {
    match phi {
        Formula::Var(i) => Formula::Var(*i),
        Formula::App(Symbol::Tag(i, c), args) => {
            let args: Vec<Formula> = args.iter().map(|a| push_to_stage(a, j, steps)).collect();
            let mut image = Formula::generator((**c).clone(), args.len());
            for step in &steps[*i..j] {
                image = step.extend(&image);
            }
            image.instantiate(&args)
        }
        Formula::App(c, _) => panic!("untagged connective {c} in a chain colimit formula"),
    }
}

fn chain_colimit(stages: &[Logic], steps: &[FlexibleMorphism], gamma: &[Formula], phi: &Formula, budget: &Budget) -> Answer {
    let from = gamma.iter().chain(std::iter::once(phi)).map(max_stage).max().unwrap_or(0);
    any_stage((from..stages.len()).map(|j| {
        let g: Vec<Formula> = gamma.iter().map(|f| push_to_stage(f, j, steps)).collect();
        (j, stages[j].answer(&g, &push_to_stage(phi, j, steps), budget))
    }))
}

fn closure(base: &Logic, inner: &Budget, gamma: &[Formula], phi: &Formula, budget: &Budget) -> Answer {
    let direct = base.answer(gamma, phi, budget);
    match &direct {
        Answer::Yes { .. } => return direct,
        Answer::No { .. } if base.refutations_survive_closure() => return direct,
        _ => {}
    }
    let mut universe: BTreeSet<Formula> = BTreeSet::new();
    for f in gamma.iter().chain(std::iter::once(phi)) {
        universe.extend(f.subformulas().into_iter().cloned());
    }
    let universe: Vec<Formula> = universe.into_iter().collect();
    let index: HashMap<&Formula, usize> = universe.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let n = universe.len();
    let mut classes = UnionFind::<usize>::new(n);
    let mut merges: Vec<(Formula, Formula)> = Vec::new();
    let mut cache: HashMap<(usize, usize), bool> = HashMap::new();
    let mut entails = |a: usize, b: usize| -> bool {
        *cache
            .entry((a, b))
            .or_insert_with(|| base.answer(std::slice::from_ref(&universe[a]), &universe[b], inner).is_yes())
    };
    loop {
        let mut changed = false;
        // seeds: a ⊢ b and b ⊢ a up to the current classes
        for a in 0..n {
            for b in a + 1..n {
                if classes.equiv(a, b) {
                    continue;
                }
                let ca: Vec<usize> = (0..n).filter(|x| classes.equiv(*x, a)).collect();
                let cb: Vec<usize> = (0..n).filter(|x| classes.equiv(*x, b)).collect();
                let there = ca.iter().any(|x| cb.iter().any(|y| entails(*x, *y)));
                if there && cb.iter().any(|y| ca.iter().any(|x| entails(*y, *x))) {
                    classes.union(a, b);
                    merges.push((universe[a].clone(), universe[b].clone()));
                    changed = true;
                }
            }
        }
        // replacement: same head, argument-wise equivalent
        for a in 0..n {
            for b in a + 1..n {
                if classes.equiv(a, b) {
                    continue;
                }
                if let (Formula::App(c, xs), Formula::App(d, ys)) = (&universe[a], &universe[b]) {
                    if c == d && xs.iter().zip(ys).all(|(x, y)| classes.equiv(index[x], index[y])) {
                        classes.union(a, b);
                        merges.push((universe[a].clone(), universe[b].clone()));
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let target = index[phi];
    let mut context: Vec<Formula> = gamma.to_vec();
    for g in gamma {
        let gi = index[g];
        context.extend((0..n).filter(|x| *x != gi && classes.equiv(*x, gi)).map(|x| universe[x].clone()));
    }
    for x in (0..n).filter(|x| *x != target && classes.equiv(*x, target)) {
        let via = &universe[x];
        let evidence = if context.contains(via) {
            Some(Evidence::Membership)
        } else {
            base.answer(&context, via, budget).evidence().cloned()
        };
        if let Some(evidence) = evidence {
            return Answer::yes(Evidence::Closure {
                via: via.clone(),
                merges,
                evidence: Box::new(evidence),
            });
        }
    }
    match direct {
        Answer::Unknown { reason } => Answer::unknown(format!("closure found no replacement; base: {reason}")),
        _ => Answer::unknown("base refutation need not survive the closure"),
    }
}
