//! Bounded enumeration of formulas and seeded random generation.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::formula::{canonical_cmp, Formula};
use crate::signature::{Signature, Symbol};

/// All formulas over `sig` whose variables are among `x0..x_{nvars-1}`, grouped
/// by complexity `0..=max_compl`. Each level is sorted canonically.
pub fn formulas_by_level(sig: &Signature, nvars: usize, max_compl: usize) -> Vec<Vec<Formula>> {
    let connectives: Vec<(Symbol, usize)> = sig.connectives().map(|(s, a)| (s.clone(), a)).collect();
    let mut levels: Vec<Vec<Formula>> = Vec::with_capacity(max_compl + 1);
    levels.push((0..nvars as u32).map(Formula::Var).collect());
    for c in 1..=max_compl {
        let mut level = Vec::new();
        for (symbol, arity) in &connectives {
            // distribute the remaining c - 1 connective occurrences over the arguments
            for split in compositions(c - 1, *arity) {
                let mut partial: Vec<Vec<Formula>> = vec![Vec::new()];
                for &k in &split {
                    let mut next = Vec::with_capacity(partial.len() * levels[k].len());
                    for prefix in &partial {
                        for arg in &levels[k] {
                            let mut p = prefix.clone();
                            p.push(arg.clone());
                            next.push(p);
                        }
                    }
                    partial = next;
                    if partial.is_empty() {
                        break;
                    }
                }
                level.extend(partial.into_iter().map(|args| Formula::App(symbol.clone(), args)));
            }
        }
        level.sort();
        levels.push(level);
    }
    levels
}

/// Ordered ways to write `total` as a sum of `parts` naturals.
pub(crate) fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Formulas over variables `x0..x_{nvars-1}` with complexity at most `max_compl`, canonically ordered.
pub fn formulas_upto(sig: &Signature, nvars: usize, max_compl: usize) -> Vec<Formula> {
    formulas_by_level(sig, nvars, max_compl).into_iter().flatten().collect()
}

/// The bounded slice `F(Σ)[n]`: exact variable set `{x0..x_{n-1}}`, complexity ≤ `max_compl`.
pub fn enumerate_slice(sig: &Signature, n: usize, max_compl: usize) -> Vec<Formula> {
    formulas_upto(sig, n, max_compl)
        .into_iter()
        .filter(|f| f.in_slice(n))
        .collect()
}

/// Uniformly chosen shape with exactly `compl` connectives if one exists, else
/// the largest reachable complexity below it.
pub fn random_formula<R: Rng + ?Sized>(
    rng: &mut R,
    sig: &Signature,
    nvars: usize,
    max_compl: usize,
) -> Formula {
    let compl = rng.gen_range(0..=max_compl);
    random_formula_exact(rng, sig, nvars.max(1), compl)
}

fn random_formula_exact<R: Rng + ?Sized>(
    rng: &mut R,
    sig: &Signature,
    nvars: usize,
    compl: usize,
) -> Formula {
    let connectives: Vec<(&Symbol, usize)> = sig.connectives().collect();
    let leaves: Vec<&Symbol> = sig.of_arity(0).collect();
    if compl == 0 || connectives.is_empty() {
        return Formula::Var(rng.gen_range(0..nvars as u32));
    }
    // a connective of arity 0 only fits when exactly one occurrence is left
    let usable: Vec<&(&Symbol, usize)> = connectives
        .iter()
        .filter(|(_, a)| if compl == 1 { true } else { *a > 0 })
        .collect();
    let Some(&&(symbol, arity)) = usable.choose(rng) else {
        if let Some(c) = leaves.choose(rng) {
            return Formula::App((*c).clone(), Vec::new());
        }
        return Formula::Var(rng.gen_range(0..nvars as u32));
    };
    if arity == 0 {
        return Formula::App(symbol.clone(), Vec::new());
    }
    let mut budget = compl - 1;
    let mut sizes = vec![0usize; arity];
    while budget > 0 {
        sizes[rng.gen_range(0..arity)] += 1;
        budget -= 1;
    }
    let args = sizes
        .into_iter()
        .map(|k| random_formula_exact(rng, sig, nvars, k))
        .collect();
    Formula::App(symbol.clone(), args)
}

/// Random member of the slice `F(Σ)[n]` with complexity ≤ `max_compl`, if the
/// bounded slice is non-empty among a fixed number of attempts.
pub fn random_slice_member<R: Rng + ?Sized>(
    rng: &mut R,
    sig: &Signature,
    n: usize,
    max_compl: usize,
) -> Option<Formula> {
    for _ in 0..256 {
        let phi = random_formula(rng, sig, n.max(1), max_compl);
        if phi.in_slice(n) {
            return Some(phi);
        }
    }
    None
}

/// Sorts canonically and removes duplicates.
pub fn canonicalize(mut formulas: Vec<Formula>) -> Vec<Formula> {
    formulas.sort_by(canonical_cmp);
    formulas.dedup();
    formulas
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn unary_slice() {
        let sig = Signature::from_pairs("N", [("neg", 1)]).unwrap();
        let got = enumerate_slice(&sig, 1, 2);
        let want: Vec<Formula> = ["x0", "neg(x0)", "neg(neg(x0))"]
            .iter()
            .map(|t| parse(t, &sig).unwrap())
            .collect();
        assert_eq!(got, want);
        assert!(enumerate_slice(&sig, 2, 5).is_empty());
    }

    #[test]
    fn complexity_zero_is_the_variable() {
        let sig = Signature::from_pairs("S", [("neg", 1), ("imp", 2)]).unwrap();
        assert_eq!(enumerate_slice(&sig, 1, 0), vec![Formula::Var(0)]);
    }

    #[test]
    fn level_sizes() {
        let sig = Signature::from_pairs("S", [("neg", 1), ("imp", 2)]).unwrap();
        let sizes: Vec<usize> = formulas_by_level(&sig, 2, 4).iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![2, 6, 30, 186, 1290]);
    }

    #[test]
    fn constants_fill_nullary_slices() {
        let sig = Signature::from_pairs("S", [("top", 0), ("and", 2)]).unwrap();
        let s0 = enumerate_slice(&sig, 0, 3);
        assert_eq!(s0.len(), 2);
        assert!(s0.iter().all(|f| f.variables().is_empty()));
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(3, 2).len(), 4);
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
        assert!(compositions(1, 0).is_empty());
    }
}
