//! Scalar linear differential operators `Σ c_β ∂^β` in normal form, with
//! every coefficient standing to the left of every derivative.

use std::collections::BTreeMap;
use std::fmt;

use crate::coeffring::{Coord, Dim, Expression, GaussianRational};

/// A derivative multi-index `(βx, βy, βz)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct MultiIndex(pub [u8; 3]);

impl MultiIndex {
    pub const ZERO: MultiIndex = MultiIndex([0; 3]);

    pub fn unit(c: Coord) -> MultiIndex {
        let mut b = [0; 3];
        b[c.index()] = 1;
        MultiIndex(b)
    }

    pub fn order(self) -> u32 {
        self.0.iter().map(|&b| b as u32).sum()
    }

    pub fn plus(self, other: MultiIndex) -> MultiIndex {
        MultiIndex([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    pub fn minus(self, other: MultiIndex) -> MultiIndex {
        MultiIndex([
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
        ])
    }

    /// All `γ ≤ self` componentwise.
    pub fn below(self) -> impl Iterator<Item = MultiIndex> {
        let [a, b, c] = self.0;
        (0..=a).flat_map(move |i| (0..=b).flat_map(move |j| (0..=c).map(move |k| MultiIndex([i, j, k]))))
    }

    /// `Π binom(self_c, γ_c)`
    pub fn binomial(self, gamma: MultiIndex) -> i64 {
        (0..3)
            .map(|c| binom(self.0[c] as i64, gamma.0[c] as i64))
            .product()
    }

    /// All multi-indices of exactly the given order in `dim`.
    pub fn of_order(dim: Dim, order: u8) -> Vec<MultiIndex> {
        let n = dim.coords().len();
        let mut out = Vec::new();
        for i in 0..=order {
            for j in 0..=(order - i) {
                let k = order - i - j;
                if n == 2 && k > 0 {
                    continue;
                }
                out.push(MultiIndex([i, j, k]));
            }
        }
        out.sort();
        out
    }
}

fn binom(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl Ord for MultiIndex {
    /// Higher total order first, then lexicographic with `x` leading.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .order()
            .cmp(&self.order())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for c in Coord::ALL {
            let e = self.0[c.index()];
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "d{}", c.name())?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ScalarDiffOp {
    dim: Dim,
    terms: BTreeMap<MultiIndex, Expression>,
}

impl ScalarDiffOp {
    pub fn zero(dim: Dim) -> ScalarDiffOp {
        ScalarDiffOp {
            dim,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(dim: Dim) -> ScalarDiffOp {
        ScalarDiffOp::scalar(dim, Expression::one())
    }

    /// Multiplication by `f`.
    pub fn scalar(dim: Dim, f: Expression) -> ScalarDiffOp {
        ScalarDiffOp::term(dim, MultiIndex::ZERO, f)
    }

    pub fn term(dim: Dim, beta: MultiIndex, c: Expression) -> ScalarDiffOp {
        let mut op = ScalarDiffOp::zero(dim);
        op.add_term(beta, c);
        op
    }

    pub fn partial(dim: Dim, c: Coord) -> ScalarDiffOp {
        ScalarDiffOp::term(dim, MultiIndex::unit(c), Expression::one())
    }

    /// `p_c = −iħ ∂_c`
    pub fn momentum(dim: Dim, c: Coord, hbar: &Expression) -> ScalarDiffOp {
        ScalarDiffOp::term(dim, MultiIndex::unit(c), hbar.mul(&Expression::i()).neg())
    }

    /// `L_k = ε_kmn x_m p_n`. In two dimensions only `k = z` exists:
    /// `L₃ = iħ(y∂x − x∂y)`.
    pub fn angular_momentum(dim: Dim, k: Coord, hbar: &Expression) -> ScalarDiffOp {
        let mut op = ScalarDiffOp::zero(dim);
        for m in Coord::ALL {
            for n in Coord::ALL {
                let eps = levi_civita(k.index(), m.index(), n.index());
                if eps == 0 || !dim.contains(m) || !dim.contains(n) {
                    continue;
                }
                let p = ScalarDiffOp::momentum(dim, n, hbar);
                let term = ScalarDiffOp::scalar(dim, Expression::coord(m).scale(&GaussianRational::from_int(eps)))
                    .compose(&p);
                op = op.add(&term);
            }
        }
        op
    }

    /// `Σ_c ∂_c²`
    pub fn laplacian(dim: Dim) -> ScalarDiffOp {
        let mut op = ScalarDiffOp::zero(dim);
        for &c in dim.coords() {
            let mut b = [0; 3];
            b[c.index()] = 2;
            op.add_term(MultiIndex(b), Expression::one());
        }
        op
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Expression)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, beta: MultiIndex) -> Expression {
        self.terms.get(&beta).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|b| b.order()).max()
    }

    pub fn add_term(&mut self, beta: MultiIndex, c: Expression) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&beta) {
            Some(slot) => {
                *slot = slot.add(&c);
                if slot.is_zero() {
                    self.terms.remove(&beta);
                }
            }
            None => {
                self.terms.insert(beta, c);
            }
        }
    }

    pub fn add(&self, other: &ScalarDiffOp) -> ScalarDiffOp {
        let mut out = self.clone();
        for (b, c) in &other.terms {
            out.add_term(*b, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ScalarDiffOp) -> ScalarDiffOp {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ScalarDiffOp {
        self.map_coefficients(|c| c.neg())
    }

    /// Left multiplication by the function `f`.
    pub fn scale(&self, f: &Expression) -> ScalarDiffOp {
        self.map_coefficients(|c| f.mul(c))
    }

    pub fn map_coefficients(&self, f: impl Fn(&Expression) -> Expression) -> ScalarDiffOp {
        let mut out = ScalarDiffOp::zero(self.dim);
        for (b, c) in &self.terms {
            out.add_term(*b, f(c));
        }
        out
    }

    pub fn try_map_coefficients<E>(
        &self,
        f: impl Fn(&Expression) -> Result<Expression, E>,
    ) -> Result<ScalarDiffOp, E> {
        let mut out = ScalarDiffOp::zero(self.dim);
        for (b, c) in &self.terms {
            out.add_term(*b, f(c)?);
        }
        Ok(out)
    }

    /// Normal form of `self ∘ other` by the Leibniz rule
    /// `∂^α ∘ b = Σ_{γ≤α} binom(α,γ) (∂^γ b) ∂^{α−γ}`.
    pub fn compose(&self, other: &ScalarDiffOp) -> ScalarDiffOp {
        let mut out = ScalarDiffOp::zero(self.dim);
        let mut derivs: BTreeMap<(MultiIndex, MultiIndex), Expression> = BTreeMap::new();
        for (alpha, a) in &self.terms {
            for gamma in alpha.below() {
                let k = alpha.binomial(gamma);
                for (beta, b) in &other.terms {
                    let db = derivs
                        .entry((*beta, gamma))
                        .or_insert_with(|| b.partial(gamma.0))
                        .clone();
                    if db.is_zero() {
                        continue;
                    }
                    let c = a.mul(&db).scale(&GaussianRational::from_int(k));
                    out.add_term(alpha.minus(gamma).plus(*beta), c);
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &ScalarDiffOp) -> ScalarDiffOp {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn anticommutator(&self, other: &ScalarDiffOp) -> ScalarDiffOp {
        self.compose(other).add(&other.compose(self))
    }

    /// Action on a function: `Σ c_β ∂^β f`.
    pub fn apply(&self, f: &Expression) -> Expression {
        self.terms
            .iter()
            .fold(Expression::zero(), |acc, (b, c)| acc.add(&c.mul(&f.partial(b.0))))
    }

    /// Formal adjoint with every symbol real: `Σ (−1)^{|β|} ∂^β ∘ c̄_β`.
    pub fn adjoint(&self) -> ScalarDiffOp {
        let mut out = ScalarDiffOp::zero(self.dim);
        for (b, c) in &self.terms {
            let sign = if b.order() % 2 == 0 { 1 } else { -1 };
            let d = ScalarDiffOp::term(self.dim, *b, Expression::int(sign));
            out = out.add(&d.compose(&ScalarDiffOp::scalar(self.dim, c.conj())));
        }
        out
    }
}

/// `½(f∘D + D∘f)`, the symmetrized product of a function with an operator.
pub fn symmetrize(f: &Expression, d: &ScalarDiffOp) -> ScalarDiffOp {
    let fop = ScalarDiffOp::scalar(d.dim(), f.clone());
    fop.anticommutator(d).scale(&Expression::ratio(1, 2))
}

/// Totally antisymmetric symbol on indices `0..3`.
pub fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

impl fmt::Display for ScalarDiffOp {
    /// One `coefficient * derivative` pair per term, highest order first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (b, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "[{c}]*{b}")?;
        }
        Ok(())
    }
}
