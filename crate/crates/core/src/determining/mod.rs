//! Determining equations of `[H, X] = 0` for the general first-order
//! ansatz `X = Σ_μ σ_μ (½{F_μk, p_k} + φ_μ)`, generated stage by stage in
//! powers of the momenta.
//!
//! Every jet and parameter is real, so `T = i[H, X]`, written as
//! `Σ t_{μβ} σ_μ p^β`, yields for each slot one real-part and one
//! imaginary-part condition. Second-order slots form the Killing and spin
//! blocks. First-order real parts give the gradient systems for `φ`; their
//! imaginary parts are differential consequences of the second stage.
//! Zeroth-order parts are reduced modulo the solved gradient systems only
//! when the first stage is closed, that is when every first-order
//! imaginary part vanishes. Otherwise the gradient systems carry open
//! second-order constraints, every nonzero part is kept, and those that
//! would vanish under reduction are listed in `reducible`.

mod check;
mod reference;

pub use check::{ansatz_bindings, check_solution, specialize_conditions, ConditionReport, SolutionReport};
pub use reference::{match_paper, reference_block, reference_names, references_for, MatchReport, ReferenceBlock};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::coeffring::{Bindings, Coord, Denominator, Dim, ExprError, Expression, Jet, Monomial, Symbol};
use crate::diffop::{symmetrize, MultiIndex, ScalarDiffOp};
use crate::spinop::PauliOperator;

#[derive(Debug, Clone, Error)]
pub enum DeterminingError {
    #[error("unbound functions: {}", .0.join(", "))]
    Unbound(Vec<String>),
    #[error("cannot solve `{0} = 0` for a single first derivative of a spin coefficient")]
    Unsolvable(String),
    #[error("operator is not of the first-order ansatz form: {0}")]
    NotAnsatz(String),
    #[error("reference data: {0}")]
    Reference(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Stage {
    Second,
    First,
    Zeroth,
}

impl Stage {
    pub const ALL: [Stage; 3] = [Stage::Second, Stage::First, Stage::Zeroth];

    /// Momentum order of the slots read at this stage.
    pub fn order(self) -> u32 {
        match self {
            Stage::Second => 2,
            Stage::First => 1,
            Stage::Zeroth => 0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Second => "second",
            Stage::First => "first",
            Stage::Zeroth => "zeroth",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stage {
    type Err = String;

    fn from_str(s: &str) -> Result<Stage, String> {
        Stage::ALL
            .into_iter()
            .find(|st| st.as_str() == s)
            .ok_or_else(|| format!("unknown stage `{s}` (expected second, first or zeroth)"))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Part {
    Re,
    Im,
}

impl fmt::Display for Part {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Part::Re => write!(f, "re"),
            Part::Im => write!(f, "im"),
        }
    }
}

/// Names of the unknown functions and of the potentials.
#[derive(Clone, Debug)]
pub struct Ansatz {
    pub dim: Dim,
    /// `(σ index, Some(k))` is the coefficient of `p_k`; `(σ index, None)` is `φ`.
    pub names: BTreeMap<(usize, Option<Coord>), String>,
    pub v0: String,
    pub v1: String,
}

impl Ansatz {
    /// 2D: `A0, B0, phi0` on `σ₀` and `A1, B1, phi1` on `σ₃`.
    /// 3D: `A0, B0, C0, phi0` on `σ₀` and `Aj, Bj, Cj, phij` on `σ_j`.
    pub fn standard(dim: Dim) -> Ansatz {
        let mut names = BTreeMap::new();
        let letters = ["A", "B", "C"];
        let sigmas: &[(usize, usize)] = match dim {
            Dim::Two => &[(0, 0), (3, 1)],
            Dim::Three => &[(0, 0), (1, 1), (2, 2), (3, 3)],
        };
        for &(mu, label) in sigmas {
            for &c in dim.coords() {
                names.insert((mu, Some(c)), format!("{}{label}", letters[c.index()]));
            }
            names.insert((mu, None), format!("phi{label}"));
        }
        Ansatz {
            dim,
            names,
            v0: "V0".into(),
            v1: "V1".into(),
        }
    }

    /// Active Pauli components: diagonal only in the plane.
    pub fn sigmas(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.names.keys().map(|(m, _)| *m).collect();
        s.dedup();
        s
    }

    pub fn name(&self, mu: usize, c: Option<Coord>) -> &str {
        &self.names[&(mu, c)]
    }

    pub fn phi_names(&self) -> BTreeSet<String> {
        self.names
            .iter()
            .filter(|((_, c), _)| c.is_none())
            .map(|(_, n)| n.clone())
            .collect()
    }

    fn jet(&self, name: &str) -> Expression {
        Expression::jet(Jet::free(name, self.dim.all_coords()))
    }

    /// Components whose momentum coefficients are fixed by the second
    /// stage: `σ₀, σ₃` in the plane, `σ₀` in space.
    pub fn killing_sigmas(&self) -> Vec<usize> {
        match self.dim {
            Dim::Two => vec![0, 3],
            Dim::Three => vec![0],
        }
    }

    /// Parameters of the second-stage solution.
    pub fn killing_params(&self) -> Vec<String> {
        match self.dim {
            Dim::Two => ["omega0", "omega1", "a0", "a1", "b0", "b1"].map(String::from).to_vec(),
            Dim::Three => ["a1", "a2", "a3", "b1", "b2", "b3"].map(String::from).to_vec(),
        }
    }

    /// General solution of the Killing block:
    /// plane `A_μ = ω_μ y + a_μ`, `B_μ = −ω_μ x + b_μ`;
    /// space `A₀ = b₁ − a₃y + a₂z`, `B₀ = b₂ + a₃x − a₁z`, `C₀ = b₃ − a₂x + a₁y`.
    pub fn killing_solution(&self) -> BTreeMap<(usize, Coord), Expression> {
        let p = Expression::param;
        let c = Expression::coord;
        let mut out = BTreeMap::new();
        match self.dim {
            Dim::Two => {
                for (mu, l) in [(0, 0), (3, 1)] {
                    let w = p(&format!("omega{l}"));
                    out.insert((mu, Coord::X), w.mul(&c(Coord::Y)).add(&p(&format!("a{l}"))));
                    out.insert((mu, Coord::Y), w.mul(&c(Coord::X)).neg().add(&p(&format!("b{l}"))));
                }
            }
            Dim::Three => {
                let a = |k: usize| p(&format!("a{k}"));
                let b = |k: usize| p(&format!("b{k}"));
                let (x, y, z) = (c(Coord::X), c(Coord::Y), c(Coord::Z));
                out.insert((0, Coord::X), b(1).sub(&a(3).mul(&y)).add(&a(2).mul(&z)));
                out.insert((0, Coord::Y), b(2).add(&a(3).mul(&x)).sub(&a(1).mul(&z)));
                out.insert((0, Coord::Z), b(3).sub(&a(2).mul(&x)).add(&a(1).mul(&y)));
            }
        }
        out
    }

    /// Coefficient function of `p_k` on `σ_μ`, after the stage's substitution.
    fn coefficient(&self, mu: usize, k: Coord, stage: Stage) -> Expression {
        if stage != Stage::Second {
            if let Some(v) = self.killing_solution().remove(&(mu, k)) {
                return v;
            }
        }
        self.jet(self.name(mu, Some(k)))
    }

    /// `X` for the stage, with `ħ = 1`.
    pub fn operator(&self, stage: Stage) -> PauliOperator {
        let dim = self.dim;
        let mut x = PauliOperator::zero(dim);
        for mu in self.sigmas() {
            let mut op = ScalarDiffOp::scalar(dim, self.jet(self.name(mu, None)));
            for &k in dim.coords() {
                let p = ScalarDiffOp::momentum(dim, k, &Expression::one());
                op = op.add(&symmetrize(&self.coefficient(mu, k, stage), &p));
            }
            x = x.add(&PauliOperator::component(mu, op));
        }
        x
    }

    /// `H` with formal potentials.
    pub fn hamiltonian(&self) -> PauliOperator {
        let v0 = self.jet(&self.v0);
        let v1 = self.jet(&self.v1);
        match self.dim {
            Dim::Two => crate::catalog::hamiltonian_2d(&v0, &v1, &Expression::one()),
            Dim::Three => crate::catalog::hamiltonian_3d(&v0, &v1, &Expression::one()),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Equation {
    pub block: String,
    pub sigma: usize,
    pub beta: MultiIndex,
    pub part: Part,
    /// Polynomial left-hand side of `expr = 0`.
    pub expr: Expression,
    /// Registered-base product the raw coefficient was multiplied by.
    pub multiplier: Denominator,
}

impl Equation {
    pub fn label(&self) -> String {
        format!("{} s{} {} {}", self.block, self.sigma, self.beta, self.part)
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.expr)
    }
}

#[derive(Clone, Debug)]
pub struct DeterminingSystem {
    pub dim: Dim,
    pub stage: Stage,
    pub equations: Vec<Equation>,
    /// Conditions implied by earlier stages, kept for inspection.
    pub consequences: Vec<Equation>,
    /// Indices into `equations` that vanish modulo the first-stage
    /// gradient systems.
    pub reducible: Vec<usize>,
}

impl DeterminingSystem {
    pub fn len(&self) -> usize {
        self.equations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn block(&self, name: &str) -> Vec<&Equation> {
        self.equations.iter().filter(|e| e.block == name).collect()
    }

    pub fn block_counts(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for e in &self.equations {
            *out.entry(e.block.clone()).or_insert(0) += 1;
        }
        out
    }

    pub fn expressions(&self) -> Vec<Expression> {
        self.equations.iter().map(|e| e.expr.clone()).collect()
    }

    pub fn function_names(&self) -> BTreeSet<Arc<str>> {
        self.equations
            .iter()
            .flat_map(|e| e.expr.function_names())
            .collect()
    }
}

/// `t_{μβ}` of `T = Σ t_{μβ} σ_μ p^β` for slots of the given order.
fn momentum_slots(t: &PauliOperator, order: u32) -> Vec<(usize, MultiIndex, Expression)> {
    let i = Expression::i();
    t.triples()
        .filter(|(_, b, _)| b.order() == order)
        .map(|(m, b, c)| (m, b, c.mul(&i.pow(b.order()))))
        .collect()
}

fn block_name(dim: Dim, stage: Stage, sigma: usize) -> &'static str {
    match (stage, dim, sigma) {
        (Stage::Second, Dim::Three, s) if s != 0 => "spin",
        (Stage::Second, _, _) => "killing",
        (Stage::First, Dim::Three, 0) => "phi0",
        (Stage::First, _, _) => "phi",
        (Stage::Zeroth, _, _) => "zeroth",
    }
}

/// `i[H, X]` for the stage's ansatz.
pub fn commutator_for(ansatz: &Ansatz, stage: Stage) -> PauliOperator {
    ansatz
        .hamiltonian()
        .commutator(&ansatz.operator(stage))
        .scale(&Expression::i())
}

struct Collector {
    seen: BTreeSet<Expression>,
}

impl Collector {
    /// Clears denominators, drops zeros and scalar duplicates.
    fn equation(&mut self, block: &str, sigma: usize, beta: MultiIndex, part: Part, e: &Expression) -> Option<Equation> {
        if e.is_zero() {
            return None;
        }
        let (expr, multiplier) = e.clear_denominator();
        if !self.seen.insert(expr.monic()) {
            return None;
        }
        Some(Equation {
            block: block.to_string(),
            sigma,
            beta,
            part,
            expr,
            multiplier,
        })
    }
}

pub fn generate(dim: Dim, stage: Stage) -> Result<DeterminingSystem, DeterminingError> {
    generate_with(&Ansatz::standard(dim), stage)
}

pub fn generate_with(ansatz: &Ansatz, stage: Stage) -> Result<DeterminingSystem, DeterminingError> {
    let dim = ansatz.dim;
    let t = commutator_for(ansatz, stage);
    let mut col = Collector { seen: BTreeSet::new() };
    let mut equations = Vec::new();
    let mut consequences = Vec::new();
    let mut reducible = Vec::new();
    let solved = match stage {
        Stage::Zeroth => Some(solve_gradients(ansatz, &t)?),
        _ => None,
    };
    let closed = momentum_slots(&t, 1).iter().all(|(_, _, c)| c.imag_part().is_zero());
    for (mu, beta, c) in momentum_slots(&t, stage.order()) {
        let block = block_name(dim, stage, mu);
        for (part, e) in [(Part::Re, c.real_part()), (Part::Im, c.imag_part())] {
            let vanishes = stage == Stage::Zeroth && reduce(&e, solved.as_ref().unwrap(), ansatz).is_zero();
            let keep = match (stage, part) {
                (Stage::First, Part::Im) => false,
                (Stage::Zeroth, _) => !(closed && vanishes),
                _ => true,
            };
            if let Some(eq) = col.equation(if keep { block } else { "consequence" }, mu, beta, part, &e) {
                if !keep {
                    consequences.push(eq);
                    continue;
                }
                if vanishes {
                    reducible.push(equations.len());
                }
                equations.push(eq);
            }
        }
    }
    Ok(DeterminingSystem {
        dim,
        stage,
        equations,
        consequences,
        reducible,
    })
}

/// First-stage gradient equations solved as `φ_{μ,k} = …`, keyed by
/// `(φ name, k)`.
pub type Gradients = BTreeMap<(String, Coord), Expression>;

fn solve_gradients(ansatz: &Ansatz, t_zeroth_stage: &PauliOperator) -> Result<Gradients, DeterminingError> {
    let phis = ansatz.phi_names();
    let mut out = Gradients::new();
    for (_, _, c) in momentum_slots(t_zeroth_stage, 1) {
        let e = c.real_part();
        if e.is_zero() {
            continue;
        }
        let (name, k, value) = solve_for_phi_derivative(&e, &phis)?;
        out.insert((name, k), value);
    }
    Ok(out)
}

/// Solves `e = 0` for its unique first derivative of a `φ`, which must
/// enter linearly with a constant coefficient.
fn solve_for_phi_derivative(e: &Expression, phis: &BTreeSet<String>) -> Result<(String, Coord, Expression), DeterminingError> {
    let cands: Vec<Jet> = e
        .jets()
        .into_iter()
        .filter(|j| phis.contains(&*j.name) && j.order() == 1)
        .collect();
    let [jet] = cands.as_slice() else {
        return Err(DeterminingError::Unsolvable(e.to_string()));
    };
    let sym = Symbol::Jet(jet.clone());
    let var = Monomial::var(sym.clone(), 1);
    let mut coef = Expression::zero();
    let mut rest = Expression::zero();
    for (m, c) in e.num().terms() {
        let t = Expression::from_poly(crate::coeffring::Polynomial::term(c.clone(), m.clone()));
        match m.exponent(&sym) {
            0 => rest = rest.add(&t),
            1 => {
                let q = m.div(&var).unwrap();
                coef = coef.add(&Expression::from_poly(crate::coeffring::Polynomial::term(c.clone(), q)));
            }
            _ => return Err(DeterminingError::Unsolvable(e.to_string())),
        }
    }
    let Some(k) = coef.as_constant() else {
        return Err(DeterminingError::Unsolvable(e.to_string()));
    };
    let inv = k.inv().ok_or_else(|| DeterminingError::Unsolvable(e.to_string()))?;
    // the denominator is common to `rest` and the whole equation
    let value = Expression::new(rest.num().clone(), e.den().clone()).scale(&inv).neg();
    let c = Coord::ALL.into_iter().find(|c| jet.deriv[c.index()] == 1).unwrap();
    Ok((jet.name.to_string(), c, value))
}

/// Replaces every derivative of a `φ` using the solved gradients,
/// differentiating the solved value for higher derivatives.
pub fn reduce(e: &Expression, solved: &Gradients, ansatz: &Ansatz) -> Expression {
    let phis = ansatz.phi_names();
    reduce_inner(e, solved, &phis)
}

fn reduce_inner(e: &Expression, solved: &Gradients, phis: &BTreeSet<String>) -> Expression {
    e.map_symbols(&mut |s| {
        let j = s.as_jet()?;
        if j.order() == 0 || !phis.contains(&*j.name) {
            return None;
        }
        let c = Coord::ALL.into_iter().find(|c| j.deriv[c.index()] > 0)?;
        let base = solved.get(&(j.name.to_string(), c))?;
        let mut rest = j.deriv;
        rest[c.index()] -= 1;
        Some(reduce_inner(&base.partial(rest), solved, phis))
    })
}

/// Solved first-stage gradients for the standard ansatz.
pub fn gradients(dim: Dim) -> Result<Gradients, DeterminingError> {
    let ansatz = Ansatz::standard(dim);
    solve_gradients(&ansatz, &commutator_for(&ansatz, Stage::First))
}

/// The whole staged system: second, first and zeroth.
pub fn generate_all(dim: Dim) -> Result<Vec<DeterminingSystem>, DeterminingError> {
    Stage::ALL.into_iter().map(|s| generate(dim, s)).collect()
}

/// Bindings turning a Killing-substituted system back into jets, used to
/// compare stages.
pub fn killing_bindings(ansatz: &Ansatz) -> Bindings {
    let mut b = Bindings::new();
    for ((mu, k), v) in ansatz.killing_solution() {
        b.set_function(ansatz.name(mu, Some(k)), v);
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_counts() {
        let counts: Vec<usize> = Stage::ALL.iter().map(|&s| generate(Dim::Two, s).unwrap().len()).collect();
        assert_eq!(counts, vec![6, 4, 2]);
    }

    #[test]
    fn planar_killing_contains_mixed_slot() {
        let sys = generate(Dim::Two, Stage::Second).unwrap();
        let beta = MultiIndex([1, 1, 0]);
        let eq = sys.equations.iter().find(|e| e.sigma == 0 && e.beta == beta).unwrap();
        let a = Expression::jet(Jet::free("A0", Dim::Two.all_coords()).with_deriv([0, 1, 0]));
        let b = Expression::jet(Jet::free("B0", Dim::Two.all_coords()).with_deriv([1, 0, 0]));
        assert_eq!(eq.expr.monic(), a.add(&b).monic());
    }

    #[test]
    fn spatial_counts() {
        let second = generate(Dim::Three, Stage::Second).unwrap();
        assert_eq!(second.block("spin").len(), 18);
        assert_eq!(second.block("killing").len(), 6);
        let first = generate(Dim::Three, Stage::First).unwrap();
        assert_eq!(first.block("phi").len(), 9);
        assert_eq!(first.block("phi0").len(), 3);
        assert_eq!(first.consequences.len(), 9);
        let zeroth = generate(Dim::Three, Stage::Zeroth).unwrap();
        assert_eq!(zeroth.len(), 8);
        let im: Vec<usize> = (0..8).filter(|&k| zeroth.equations[k].part == Part::Im).collect();
        assert_eq!(zeroth.reducible, im);
    }
}
