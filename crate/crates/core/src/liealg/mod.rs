//! Commutation tables of integral algebras over the field of rational
//! functions in the parameters.
//!
//! A bracket is decomposed by matching coefficients: every σ/∂ slot of
//! every operator is brought to a common denominator, and each term is
//! split into a coordinate-and-jet monomial (a row of the linear system)
//! and a parameter polynomial (the scalar entry).

mod ratfun;
mod relations;

pub use ratfun::RatFun;
pub use relations::{
    casimir_check, planar_generators, planar_relations, spatial_generators, spatial_relations, table_and_relations,
    verify_relations,
    CasimirReport, Relation, RelationReport, RelationResult,
};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::coeffring::{Denominator, Expression, Monomial, Polynomial, Symbol};
use crate::diffop::MultiIndex;
use crate::spinop::PauliOperator;

#[derive(Debug, Clone, Error)]
pub enum LieError {
    #[error("generator names are not unique: `{0}`")]
    DuplicateName(String),
    #[error("generators `{0}` and `{1}` are equal")]
    DuplicateGenerator(String, String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generators are linearly dependent: {}", render(.0))]
    Dependent(Vec<(RatFun, String)>),
    #[error("operator is not in the span of the generators; residual {0}")]
    NotInSpan(Box<PauliOperator>),
}

#[derive(Clone, Debug)]
pub struct GeneratorSet {
    names: Vec<String>,
    ops: Vec<PauliOperator>,
    central: Vec<String>,
}

impl GeneratorSet {
    pub fn new(gens: Vec<(String, PauliOperator)>) -> Result<GeneratorSet, LieError> {
        let mut seen = BTreeSet::new();
        for (k, (n, op)) in gens.iter().enumerate() {
            if !seen.insert(n.clone()) {
                return Err(LieError::DuplicateName(n.clone()));
            }
            if let Some((m, _)) = gens[..k].iter().find(|(_, o)| o == op) {
                return Err(LieError::DuplicateGenerator(m.clone(), n.clone()));
            }
        }
        let (names, ops) = gens.into_iter().unzip();
        Ok(GeneratorSet {
            names,
            ops,
            central: Vec::new(),
        })
    }

    pub fn with_central(mut self, names: &[&str]) -> Result<GeneratorSet, LieError> {
        for n in names {
            self.index(n)?;
            self.central.push(n.to_string());
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn central(&self) -> &[String] {
        &self.central
    }

    pub fn get(&self, name: &str) -> Result<&PauliOperator, LieError> {
        Ok(&self.ops[self.index(name)?])
    }

    pub fn index(&self, name: &str) -> Result<usize, LieError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| LieError::UnknownGenerator(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &PauliOperator)> {
        self.names.iter().map(String::as_str).zip(&self.ops)
    }

    /// `Σ c_k g_k`; coefficients with non-constant denominators are not
    /// representable as operators.
    pub fn combine(&self, coeffs: &[RatFun]) -> Option<PauliOperator> {
        let mut out = PauliOperator::zero(self.ops.first()?.dim());
        for (c, g) in coeffs.iter().zip(&self.ops) {
            if !c.is_zero() {
                out = out.add(&g.scale(&c.to_expression()?));
            }
        }
        Some(out)
    }
}

type Key = (usize, MultiIndex, Monomial);

fn common_denominator<'a>(ops: impl Iterator<Item = &'a PauliOperator>) -> Denominator {
    ops.flat_map(|op| op.triples().map(|(_, _, c)| c.den().clone()).collect::<Vec<_>>())
        .fold(Denominator::one(), |acc, d| acc.lcm(&d))
}

fn cofactor(big: &Denominator, small: &Denominator) -> Polynomial {
    let own: BTreeMap<_, _> = small.factors().collect();
    big.factors().fold(Polynomial::one(), |acc, (b, e)| {
        acc.mul(&b.poly().pow(e - own.get(b).copied().unwrap_or(0)))
    })
}

/// Coordinates of `op` against the basis of coordinate-and-jet monomials
/// per slot, after multiplying by `d`.
fn coordinates(op: &PauliOperator, d: &Denominator) -> BTreeMap<Key, Polynomial> {
    let mut out: BTreeMap<Key, Polynomial> = BTreeMap::new();
    for (mu, beta, c) in op.triples() {
        let num = c.num().mul(&cofactor(d, c.den()));
        for (m, k) in num.terms() {
            let (param, rest) = m.split(|s| matches!(s, Symbol::Param(_)));
            let slot = out.entry((mu, beta, rest)).or_insert_with(Polynomial::zero);
            *slot = slot.add(&Polynomial::term(k.clone(), param));
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// Unique `c` with `p = Σ c_k g_k`.
pub fn decompose(p: &PauliOperator, gens: &GeneratorSet) -> Result<Vec<RatFun>, LieError> {
    let n = gens.len();
    let d = common_denominator(gens.ops.iter().chain(std::iter::once(p)));
    let cols: Vec<BTreeMap<Key, Polynomial>> = gens
        .ops
        .iter()
        .chain(std::iter::once(p))
        .map(|op| coordinates(op, &d))
        .collect();
    let keys: BTreeSet<&Key> = cols.iter().flat_map(|c| c.keys()).collect();
    let mut rows: Vec<Vec<RatFun>> = keys
        .iter()
        .map(|k| {
            cols.iter()
                .map(|c| c.get(*k).map_or_else(RatFun::zero, |q| RatFun::from_poly(q.clone())))
                .collect()
        })
        .collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    // every column pivots or returns, so the pivot row equals the column
    for col in 0..n {
        let r = col;
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            let mut combo = vec![(RatFun::one(), gens.names[col].clone())];
            for &(row, pc) in &pivots {
                let c = &rows[row][col];
                if !c.is_zero() {
                    combo.push((c.neg(), gens.names[pc].clone()));
                }
            }
            return Err(LieError::Dependent(combo));
        };
        rows.swap(r, pr);
        let inv = rows[r][col].inv().unwrap();
        rows[r] = rows[r].iter().map(|v| v.mul(&inv)).collect();
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v = v.sub(&f.mul(pv));
                }
            }
        }
        pivots.push((r, col));
    }
    let coeffs: Vec<RatFun> = (0..n).map(|k| rows[k][n].clone()).collect();
    if rows[n..].iter().any(|row| !row[n].is_zero()) {
        let residual = gens.combine(&coeffs).map_or_else(|| p.clone(), |s| p.sub(&s));
        return Err(LieError::NotInSpan(Box::new(residual)));
    }
    Ok(coeffs)
}

#[derive(Clone, Debug)]
pub enum Bracket {
    Span(Vec<RatFun>),
    Outside(PauliOperator),
}

#[derive(Clone, Debug)]
pub struct StructureTable {
    names: Vec<String>,
    central: Vec<String>,
    brackets: Vec<Vec<Bracket>>,
}

pub fn commutation_table(gens: &GeneratorSet) -> Result<StructureTable, LieError> {
    let n = gens.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    let results: Vec<Result<Bracket, LieError>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            if i == j {
                return Ok(Bracket::Span(vec![RatFun::zero(); n]));
            }
            let c = gens.ops[i].commutator(&gens.ops[j]);
            match decompose(&c, gens) {
                Ok(v) => Ok(Bracket::Span(v)),
                Err(LieError::NotInSpan(r)) => Ok(Bracket::Outside(*r)),
                Err(e) => Err(e),
            }
        })
        .collect();
    let mut brackets = vec![Vec::with_capacity(n); n];
    for ((i, _), b) in pairs.into_iter().zip(results) {
        brackets[i].push(b?);
    }
    Ok(StructureTable {
        names: gens.names.clone(),
        central: gens.central.clone(),
        brackets,
    })
}

fn render(terms: &[(RatFun, String)]) -> String {
    let parts: Vec<String> = terms
        .iter()
        .filter(|(c, _)| !c.is_zero())
        .map(|(c, n)| {
            if *c == RatFun::one() {
                n.clone()
            } else if *c == RatFun::one().neg() {
                format!("-{n}")
            } else {
                format!("({c})*{n}")
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

impl StructureTable {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn central(&self) -> &[String] {
        &self.central
    }

    fn index(&self, name: &str) -> Result<usize, LieError> {
        self.names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| LieError::UnknownGenerator(name.to_string()))
    }

    pub fn bracket(&self, a: &str, b: &str) -> Result<&Bracket, LieError> {
        Ok(&self.brackets[self.index(a)?][self.index(b)?])
    }

    pub fn coefficients(&self, i: usize, j: usize) -> Option<&[RatFun]> {
        match &self.brackets[i][j] {
            Bracket::Span(v) => Some(v),
            Bracket::Outside(_) => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.non_closure().is_empty()
    }

    /// Ordered pairs whose bracket leaves the span, with the residual.
    pub fn non_closure(&self) -> Vec<(String, String, &PauliOperator)> {
        let mut out = Vec::new();
        for (i, row) in self.brackets.iter().enumerate() {
            for (j, b) in row.iter().enumerate() {
                if let Bracket::Outside(r) = b {
                    out.push((self.names[i].clone(), self.names[j].clone(), r));
                }
            }
        }
        out
    }

    /// `[g_i, g_j]` as a linear combination, or `outside span`.
    pub fn render(&self, i: usize, j: usize) -> String {
        match &self.brackets[i][j] {
            Bracket::Span(v) => render(&v.iter().cloned().zip(self.names.iter().cloned()).collect::<Vec<_>>()),
            Bracket::Outside(r) => format!("outside span, residual {r}"),
        }
    }

    /// Rows and columns keyed by generator name.
    pub fn export(&self) -> BTreeMap<String, BTreeMap<String, String>> {
        let mut out = BTreeMap::new();
        for (i, a) in self.names.iter().enumerate() {
            let row: BTreeMap<String, String> = self.names.iter().enumerate().map(|(j, b)| (b.clone(), self.render(i, j))).collect();
            out.insert(a.clone(), row);
        }
        out
    }

    /// Pairs violating `c_ij = −c_ji`.
    pub fn antisymmetry_violations(&self) -> Vec<(String, String)> {
        let n = self.names.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i..n {
                let ok = match (self.coefficients(i, j), self.coefficients(j, i)) {
                    (Some(a), Some(b)) => a.iter().zip(b).all(|(x, y)| x.add(y).is_zero()),
                    _ => false,
                };
                if !ok {
                    out.push((self.names[i].clone(), self.names[j].clone()));
                }
            }
        }
        out
    }

    /// Triples `i < j < k` where the cyclic sum of double brackets, computed
    /// from the stored constants alone, is nonzero.
    pub fn jacobi_violations(&self) -> Vec<(String, String, String)> {
        let n = self.names.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if !self.jacobi_holds(i, j, k) {
                        out.push((self.names[i].clone(), self.names[j].clone(), self.names[k].clone()));
                    }
                }
            }
        }
        out
    }

    fn jacobi_holds(&self, i: usize, j: usize, k: usize) -> bool {
        let n = self.names.len();
        let mut total = vec![RatFun::zero(); n];
        for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
            let Some(ab) = self.coefficients(a, b) else {
                return false;
            };
            for (m, cm) in ab.iter().enumerate() {
                if cm.is_zero() {
                    continue;
                }
                let Some(mc) = self.coefficients(m, c) else {
                    return false;
                };
                for (l, v) in mc.iter().enumerate() {
                    total[l] = total[l].add(&cm.mul(v));
                }
            }
        }
        total.iter().all(RatFun::is_zero)
    }
}

impl fmt::Display for StructureTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.names.len();
        for i in 0..n {
            for j in i + 1..n {
                writeln!(f, "[{}, {}] = {}", self.names[i], self.names[j], self.render(i, j))?;
            }
        }
        Ok(())
    }
}

/// `c` as an operator scalar, for relations whose constants are
/// polynomial in the parameters.
pub fn scalar(e: Expression) -> RatFun {
    RatFun::from_expression(&e).expect("parameter polynomial")
}
