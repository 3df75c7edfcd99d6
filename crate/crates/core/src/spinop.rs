//! Pauli-matrix-valued differential operators `Σ_μ P_μ σ_μ` with `σ₀ = I`.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeffring::{Bindings, Coord, Dim, ExprError, Expression, GaussianRational};
use crate::diffop::{levi_civita, MultiIndex, ScalarDiffOp};

/// Product of Pauli matrices: `σ_a σ_b = c · σ_m`.
pub fn sigma_product(a: usize, b: usize) -> (GaussianRational, usize) {
    match (a, b) {
        (0, b) => (GaussianRational::one(), b),
        (a, 0) => (GaussianRational::one(), a),
        (a, b) if a == b => (GaussianRational::one(), 0),
        (a, b) => {
            let c = 6 - a - b;
            let eps = levi_civita(a - 1, b - 1, c - 1);
            (&GaussianRational::i() * &GaussianRational::from_int(eps), c)
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PauliOperator {
    dim: Dim,
    comps: [ScalarDiffOp; 4],
}

impl PauliOperator {
    pub fn zero(dim: Dim) -> PauliOperator {
        PauliOperator {
            dim,
            comps: std::array::from_fn(|_| ScalarDiffOp::zero(dim)),
        }
    }

    pub fn identity(dim: Dim) -> PauliOperator {
        PauliOperator::sigma(dim, 0)
    }

    /// The bare matrix `σ_μ`.
    pub fn sigma(dim: Dim, mu: usize) -> PauliOperator {
        PauliOperator::component(mu, ScalarDiffOp::identity(dim))
    }

    /// `op · σ_μ`.
    pub fn component(mu: usize, op: ScalarDiffOp) -> PauliOperator {
        let mut out = PauliOperator::zero(op.dim());
        out.comps[mu] = op;
        out
    }

    /// `op · σ₀`.
    pub fn scalar(op: ScalarDiffOp) -> PauliOperator {
        PauliOperator::component(0, op)
    }

    /// Multiplication by the function `f` times `σ_μ`.
    pub fn function(dim: Dim, mu: usize, f: Expression) -> PauliOperator {
        PauliOperator::component(mu, ScalarDiffOp::scalar(dim, f))
    }

    pub fn from_components(comps: [ScalarDiffOp; 4]) -> PauliOperator {
        let dim = comps[0].dim();
        PauliOperator { dim, comps }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn components(&self) -> &[ScalarDiffOp; 4] {
        &self.comps
    }

    pub fn get(&self, mu: usize) -> &ScalarDiffOp {
        &self.comps[mu]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// No `σ₁`, `σ₂` components.
    pub fn is_diagonal(&self) -> bool {
        self.comps[1].is_zero() && self.comps[2].is_zero()
    }

    pub fn order(&self) -> Option<u32> {
        self.comps.iter().filter_map(|c| c.order()).max()
    }

    pub fn add(&self, other: &PauliOperator) -> PauliOperator {
        PauliOperator {
            dim: self.dim,
            comps: std::array::from_fn(|m| self.comps[m].add(&other.comps[m])),
        }
    }

    pub fn sub(&self, other: &PauliOperator) -> PauliOperator {
        PauliOperator {
            dim: self.dim,
            comps: std::array::from_fn(|m| self.comps[m].sub(&other.comps[m])),
        }
    }

    pub fn neg(&self) -> PauliOperator {
        self.map_components(|c| c.neg())
    }

    /// Left multiplication by the scalar function `f`.
    pub fn scale(&self, f: &Expression) -> PauliOperator {
        self.map_components(|c| c.scale(f))
    }

    pub fn scale_const(&self, k: &GaussianRational) -> PauliOperator {
        self.scale(&Expression::constant(k.clone()))
    }

    pub fn map_components(&self, f: impl Fn(&ScalarDiffOp) -> ScalarDiffOp) -> PauliOperator {
        PauliOperator {
            dim: self.dim,
            comps: std::array::from_fn(|m| f(&self.comps[m])),
        }
    }

    pub fn substitute(&self, bindings: &Bindings) -> Result<PauliOperator, ExprError> {
        let mut comps = Vec::with_capacity(4);
        for c in &self.comps {
            comps.push(c.try_map_coefficients(|e| e.substitute(bindings))?);
        }
        Ok(PauliOperator {
            dim: self.dim,
            comps: comps.try_into().unwrap(),
        })
    }

    /// Operator product, composing components through the σ table.
    pub fn mul(&self, other: &PauliOperator) -> PauliOperator {
        let mut out = PauliOperator::zero(self.dim);
        for a in 0..4 {
            if self.comps[a].is_zero() {
                continue;
            }
            for b in 0..4 {
                if other.comps[b].is_zero() {
                    continue;
                }
                let (k, m) = sigma_product(a, b);
                let term = self.comps[a].compose(&other.comps[b]);
                out.comps[m] = out.comps[m].add(&term.scale(&Expression::constant(k)));
            }
        }
        out
    }

    pub fn commutator(&self, other: &PauliOperator) -> PauliOperator {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn anticommutator(&self, other: &PauliOperator) -> PauliOperator {
        self.mul(other).add(&other.mul(self))
    }

    /// Formal adjoint; the Pauli matrices are Hermitian.
    pub fn adjoint(&self) -> PauliOperator {
        self.map_components(|c| c.adjoint())
    }

    pub fn is_hermitian(&self) -> bool {
        self.sub(&self.adjoint()).is_zero()
    }

    pub fn apply_to_spinor(&self, psi: &Spinor) -> Spinor {
        let [p0, p1, p2, p3] = &self.comps;
        let [u, d] = &psi.0;
        let mut du = BTreeMap::new();
        let mut dd = BTreeMap::new();
        let ap = |op: &ScalarDiffOp, f: &Expression, cache: &mut BTreeMap<[u8; 3], Expression>| {
            op.terms().fold(Expression::zero(), |acc, (b, c)| {
                acc.add(&c.mul(&cached_partial(f, b.0, cache)))
            })
        };
        let i = Expression::i();
        let up = ap(p0, u, &mut du)
            .add(&ap(p3, u, &mut du))
            .add(&ap(p1, d, &mut dd))
            .sub(&i.mul(&ap(p2, d, &mut dd)));
        let down = ap(p0, d, &mut dd)
            .sub(&ap(p3, d, &mut dd))
            .add(&ap(p1, u, &mut du))
            .add(&i.mul(&ap(p2, u, &mut du)));
        Spinor([up, down])
    }

    /// Some nonzero `(σ_μ, ∂^β, coefficient)` triple, for diagnostics.
    pub fn first_nonzero(&self) -> Option<(usize, MultiIndex, Expression)> {
        self.triples().next().map(|(m, b, c)| (m, b, c.clone()))
    }

    /// All `(σ_μ, ∂^β, coefficient)` triples in canonical order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, MultiIndex, &Expression)> {
        self.comps
            .iter()
            .enumerate()
            .flat_map(|(m, c)| c.terms().map(move |(b, e)| (m, *b, e)))
    }
}

impl fmt::Display for PauliOperator {
    /// `(σ_μ, coefficient, ∂-monomial)` triples joined by `;`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut any = false;
        for (m, b, c) in self.triples() {
            if any {
                write!(f, "; ")?;
            }
            any = true;
            write!(f, "(s{m}, {c}, {b})")?;
        }
        if !any {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Two-component spinor of functions.
/// `∂^β f`, built from the cached derivative one order lower.
fn cached_partial(f: &Expression, beta: [u8; 3], cache: &mut BTreeMap<[u8; 3], Expression>) -> Expression {
    if let Some(v) = cache.get(&beta) {
        return v.clone();
    }
    let v = match beta.iter().position(|&k| k > 0) {
        None => f.clone(),
        Some(k) => {
            let mut lower = beta;
            lower[k] -= 1;
            cached_partial(f, lower, cache).differentiate(Coord::ALL[k])
        }
    };
    cache.insert(beta, v.clone());
    v
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Spinor(pub [Expression; 2]);

impl Spinor {
    pub fn new(up: Expression, down: Expression) -> Spinor {
        Spinor([up, down])
    }

    pub fn zero() -> Spinor {
        Spinor([Expression::zero(), Expression::zero()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, other: &Spinor) -> Spinor {
        Spinor([self.0[0].add(&other.0[0]), self.0[1].add(&other.0[1])])
    }

    pub fn scale(&self, f: &Expression) -> Spinor {
        Spinor([f.mul(&self.0[0]), f.mul(&self.0[1])])
    }
}

impl fmt::Display for Spinor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0[0], self.0[1])
    }
}
