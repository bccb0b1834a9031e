//! Finite logical matrices.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::signature::{Signature, Symbol};

/// A finite matrix: values `0..k`, a designated subset and one table per connective.
///
/// Tables are stored in mixed radix with the first argument most significant, so
/// the entry for `(a0, …, a_{n-1})` sits at `a0·kⁿ⁻¹ + … + a_{n-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    signature: Arc<Signature>,
    values: usize,
    designated: Vec<bool>,
    tables: BTreeMap<Symbol, Vec<u8>>,
}

/// A valuation of the occurring variables.
pub type Valuation = BTreeMap<u32, u8>;

/// A connective name and its truth function.
pub type TableFn<'a> = (&'a str, &'a dyn Fn(&[u8]) -> u8);

impl Matrix {
    pub fn new(
        signature: Arc<Signature>,
        values: usize,
        designated: &[u8],
        tables: BTreeMap<Symbol, Vec<u8>>,
    ) -> Result<Self> {
        if values == 0 || values > 16 {
            return Err(Error::InvalidMatrix(format!("{values} values (supported: 1..=16)")));
        }
        let mut mask = vec![false; values];
        for &d in designated {
            if d as usize >= values {
                return Err(Error::InvalidMatrix(format!("designated value {d} out of range")));
            }
            mask[d as usize] = true;
        }
        if !mask.iter().any(|d| *d) {
            return Err(Error::InvalidMatrix("no designated value".into()));
        }
        for (c, arity) in signature.connectives() {
            let table = tables
                .get(c)
                .ok_or_else(|| Error::InvalidMatrix(format!("no table for `{c}`")))?;
            let size = values.pow(arity as u32);
            if table.len() != size {
                return Err(Error::InvalidMatrix(format!(
                    "table for `{c}` has {} entries, expected {size}",
                    table.len()
                )));
            }
            if let Some(v) = table.iter().find(|v| **v as usize >= values) {
                return Err(Error::InvalidMatrix(format!("table for `{c}` contains value {v}")));
            }
        }
        if let Some(extra) = tables.keys().find(|k| !signature.contains(k)) {
            return Err(Error::InvalidMatrix(format!("table for unknown connective `{extra}`")));
        }
        Ok(Matrix {
            signature,
            values,
            designated: mask,
            tables,
        })
    }

    /// Builds a matrix from tables given as functions of the argument values.
    pub fn from_fns(
        signature: Arc<Signature>,
        values: usize,
        designated: &[u8],
        fns: &[TableFn<'_>],
    ) -> Result<Self> {
        let mut tables = BTreeMap::new();
        for (name, f) in fns {
            let sym = Symbol::name(name)?;
            let arity = signature
                .arity(&sym)
                .ok_or_else(|| Error::UnknownConnective(name.to_string()))?;
            let mut table = Vec::with_capacity(values.pow(arity as u32));
            let mut args = vec![0u8; arity];
            for idx in 0..values.pow(arity as u32) {
                let mut rest = idx;
                for slot in args.iter_mut().rev() {
                    *slot = (rest % values) as u8;
                    rest /= values;
                }
                table.push(f(&args));
            }
            tables.insert(sym, table);
        }
        Matrix::new(signature, values, designated, tables)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn values(&self) -> usize {
        self.values
    }

    pub fn designated(&self) -> Vec<u8> {
        (0..self.values as u8).filter(|v| self.designated[*v as usize]).collect()
    }

    pub fn is_designated(&self, v: u8) -> bool {
        self.designated[v as usize]
    }

    pub fn table(&self, c: &Symbol) -> Option<&[u8]> {
        self.tables.get(c).map(Vec::as_slice)
    }

    /// The same tables over a renamed signature, following `rename` on connectives.
    pub fn relabel(&self, signature: Arc<Signature>, rename: impl Fn(&Symbol) -> Symbol) -> Result<Matrix> {
        let tables = self.tables.iter().map(|(c, t)| (rename(c), t.clone())).collect();
        Matrix::new(signature, self.values, &self.designated(), tables)
    }

    fn apply(&self, c: &Symbol, args: &[u8]) -> u8 {
        let table = &self.tables[c];
        let idx = args.iter().fold(0usize, |acc, a| acc * self.values + *a as usize);
        table[idx]
    }

    /// Value of `phi` where variable `x_i` takes `valuation(i)`.
    pub fn eval(&self, phi: &Formula, valuation: &dyn Fn(u32) -> u8) -> u8 {
        match phi {
            Formula::Var(i) => valuation(*i),
            Formula::App(c, args) => {
                let vals: Vec<u8> = args.iter().map(|a| self.eval(a, valuation)).collect();
                self.apply(c, &vals)
            }
        }
    }

    /// The truth table of `phi` over the variables `vars`: entry `r` is the value
    /// under the `r`-th valuation in mixed radix (first variable most significant).
    pub fn value_vector(&self, phi: &Formula, vars: &[u32]) -> Vec<u8> {
        let rows = self.values.pow(vars.len() as u32);
        match phi {
            Formula::Var(i) => {
                let pos = vars
                    .iter()
                    .position(|v| v == i)
                    .expect("variable outside the valuation domain");
                let stride = self.values.pow((vars.len() - 1 - pos) as u32);
                (0..rows).map(|r| ((r / stride) % self.values) as u8).collect()
            }
            Formula::App(c, args) => {
                let cols: Vec<Vec<u8>> = args.iter().map(|a| self.value_vector(a, vars)).collect();
                let mut buf = vec![0u8; args.len()];
                (0..rows)
                    .map(|r| {
                        for (slot, col) in buf.iter_mut().zip(&cols) {
                            *slot = col[r];
                        }
                        self.apply(c, &buf)
                    })
                    .collect()
            }
        }
    }

    /// Decides `gamma ⊨ phi`; on failure returns a valuation designating all of
    /// `gamma` but not `phi`.
    pub fn consequence(&self, gamma: &[Formula], phi: &Formula) -> std::result::Result<(), Valuation> {
        let mut vars: Vec<u32> = phi.variables().into_iter().collect();
        for g in gamma {
            vars.extend(g.variables());
        }
        vars.sort_unstable();
        vars.dedup();
        let goal = self.value_vector(phi, &vars);
        let hyps: Vec<Vec<u8>> = gamma.iter().map(|g| self.value_vector(g, &vars)).collect();
        for r in 0..goal.len() {
            if !self.is_designated(goal[r]) && hyps.iter().all(|h| self.is_designated(h[r])) {
                return Err(self.row_valuation(&vars, r));
            }
        }
        Ok(())
    }

    pub fn holds(&self, gamma: &[Formula], phi: &Formula) -> bool {
        self.consequence(gamma, phi).is_ok()
    }

    /// The valuation indexed by row `r` of a value vector over `vars`.
    pub fn row_valuation(&self, vars: &[u32], r: usize) -> Valuation {
        let mut out = Valuation::new();
        let mut rest = r;
        for v in vars.iter().rev() {
            out.insert(*v, (rest % self.values) as u8);
            rest /= self.values;
        }
        out
    }

    /// True if "both designated or both undesignated" is a congruence of the tables.
    /// Then interderivable formulas agree on designation under every valuation
    /// and so does every context around them: the matrix logic is congruential.
    pub fn designation_is_congruence(&self) -> bool {
        self.tables.iter().all(|(c, table)| {
            let arity = self.signature.arity(c).unwrap_or(0) as u32;
            (0..table.len()).all(|idx| {
                (0..arity).all(|pos| {
                    let stride = self.values.pow(arity - 1 - pos);
                    let own = (idx / stride) % self.values;
                    (0..self.values).all(|other| {
                        let jdx = idx - own * stride + other * stride;
                        self.designated[own] != self.designated[other]
                            || self.designated[table[idx] as usize] == self.designated[table[jdx] as usize]
                    })
                })
            })
        })
    }

    /// Designation pattern of a value vector, one bit per row.
    pub fn designation_mask(&self, vector: &[u8]) -> Vec<bool> {
        vector.iter().map(|v| self.is_designated(*v)).collect()
    }
}

impl Serialize for Matrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let tables: BTreeMap<String, &Vec<u8>> =
            self.tables.iter().map(|(c, t)| (c.to_string(), t)).collect();
        let mut st = serializer.serialize_struct("Matrix", 3)?;
        st.serialize_field("values", &self.values)?;
        st.serialize_field("designated", &self.designated())?;
        st.serialize_field("tables", &tables)?;
        st.end()
    }
}

/// The two-element Boolean matrix for a signature whose connectives are named by
/// their classical meaning: `neg`, `imp`, `or`, `and` (optionally suffixed, as in `or2`).
pub fn boolean(signature: Arc<Signature>) -> Result<Matrix> {
    let mut tables = BTreeMap::new();
    for (c, arity) in signature.connectives() {
        let name = c.to_string();
        let base = name.trim_end_matches(|ch: char| ch.is_ascii_digit() || ch == '\'');
        let f: fn(&[u8]) -> u8 = match (base, arity) {
            ("neg" | "not", 1) => |a| 1 - a[0],
            ("imp", 2) => |a| u8::from(a[0] == 0 || a[1] == 1),
            ("or", 2) => |a| a[0] | a[1],
            ("and", 2) => |a| a[0] & a[1],
            ("top", 0) => |_| 1,
            ("bot", 0) => |_| 0,
            _ => return Err(Error::InvalidMatrix(format!("no Boolean reading for `{name}/{arity}`"))),
        };
        let size = 2usize.pow(arity as u32);
        let table = (0..size)
            .map(|idx| {
                let args: Vec<u8> = (0..arity).map(|k| ((idx >> (arity - 1 - k)) & 1) as u8).collect();
                f(&args)
            })
            .collect();
        tables.insert(c.clone(), table);
    }
    Matrix::new(signature, 2, &[1], tables)
}
