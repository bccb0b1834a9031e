#![allow(dead_code)]

use logicat::logic::Logic;
use logicat::{parse, Formula};

/// Boolean value of a formula over `neg`/`imp` or `neg2`/`or2`, computed directly.
pub fn boolean_value(phi: &Formula, v: &dyn Fn(u32) -> bool) -> bool {
    match phi {
        Formula::Var(i) => v(*i),
        Formula::App(c, args) => match (c.to_string().as_str(), args.as_slice()) {
            ("neg" | "neg2", [a]) => !boolean_value(a, v),
            ("imp", [a, b]) => !boolean_value(a, v) || boolean_value(b, v),
            ("or2", [a, b]) => boolean_value(a, v) || boolean_value(b, v),
            (other, _) => panic!("unexpected connective {other}"),
        },
    }
}

/// Truth-table consequence by enumerating every row of the occurring variables.
pub fn boolean_consequence(gamma: &[Formula], phi: &Formula) -> bool {
    let mut vars: Vec<u32> = gamma.iter().chain(std::iter::once(phi)).flat_map(Formula::variables).collect();
    vars.sort();
    vars.dedup();
    (0..1u32 << vars.len()).all(|row| {
        let v = |i: u32| row >> vars.iter().position(|x| *x == i).unwrap() & 1 == 1;
        !gamma.iter().all(|g| boolean_value(g, &v)) || boolean_value(phi, &v)
    })
}

pub fn boolean_tautology(phi: &Formula) -> bool {
    boolean_consequence(&[], phi)
}

pub fn f(text: &str, l: &Logic) -> Formula {
    parse(text, l.signature()).unwrap()
}
