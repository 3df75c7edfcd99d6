//! Restricted rational functions: a polynomial numerator over a power product
//! of registered irreducible denominator bases.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use super::poly::{Monomial, Polynomial};
use super::symbol::{Coord, Dim, Jet, JetRule, Symbol};
use super::{ExprError, GaussianRational};

/// An irreducible polynomial allowed to appear in denominators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Base {
    Coord(Coord),
    /// `x² + y²`
    Rho2,
    /// `x² + y² + z²`
    R2,
    User(Arc<Polynomial>),
}

impl Base {
    pub const BUILTIN: [Base; 5] = [
        Base::Coord(Coord::X),
        Base::Coord(Coord::Y),
        Base::Coord(Coord::Z),
        Base::Rho2,
        Base::R2,
    ];

    pub fn poly(&self) -> Polynomial {
        let sq = |c| Polynomial::coord(c).pow(2);
        match self {
            Base::Coord(c) => Polynomial::coord(*c),
            Base::Rho2 => sq(Coord::X).add(&sq(Coord::Y)),
            Base::R2 => sq(Coord::X).add(&sq(Coord::Y)).add(&sq(Coord::Z)),
            Base::User(p) => (**p).clone(),
        }
    }
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Coord(c) => write!(f, "{}", c.name()),
            other => write!(f, "({})", other.poly()),
        }
    }
}

/// Power product of bases, stored as base → positive exponent.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Denominator(BTreeMap<Base, u32>);

impl Denominator {
    pub fn one() -> Denominator {
        Denominator::default()
    }

    pub fn base(b: Base, e: u32) -> Denominator {
        let mut d = Denominator::one();
        if e > 0 {
            d.0.insert(b, e);
        }
        d
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Base, u32)> {
        self.0.iter().map(|(b, e)| (b, *e))
    }

    pub fn poly(&self) -> Polynomial {
        self.0
            .iter()
            .fold(Polynomial::one(), |acc, (b, e)| acc.mul(&b.poly().pow(*e)))
    }

    pub fn mul(&self, other: &Denominator) -> Denominator {
        let mut out = self.clone();
        for (b, e) in &other.0 {
            *out.0.entry(b.clone()).or_insert(0) += e;
        }
        out
    }

    pub fn lcm(&self, other: &Denominator) -> Denominator {
        let mut out = self.clone();
        for (b, e) in &other.0 {
            let slot = out.0.entry(b.clone()).or_insert(0);
            *slot = (*slot).max(*e);
        }
        out
    }

    /// `self / other` assuming `other` divides `self`.
    fn cofactor(&self, other: &Denominator) -> Denominator {
        let mut out = Denominator::one();
        for (b, e) in &self.0 {
            let f = other.0.get(b).copied().unwrap_or(0);
            if *e > f {
                out.0.insert(b.clone(), e - f);
            }
        }
        out
    }

    /// Product of each base once.
    fn radical(&self) -> Denominator {
        Denominator(self.0.keys().map(|b| (b.clone(), 1)).collect())
    }
}

impl fmt::Display for Denominator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (b, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{b}")?;
            } else {
                write!(f, "{b}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Canonical rational expression. Two expressions are equal iff their
/// difference normalizes to zero, iff they are structurally equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Expression {
    num: Polynomial,
    den: Denominator,
}

impl Expression {
    pub fn new(num: Polynomial, den: Denominator) -> Expression {
        canonicalize(num, den)
    }

    pub fn zero() -> Expression {
        Expression::default()
    }

    pub fn one() -> Expression {
        Expression::from_poly(Polynomial::one())
    }

    pub fn int(n: i64) -> Expression {
        Expression::constant(GaussianRational::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Expression {
        Expression::constant(GaussianRational::ratio(n, d))
    }

    pub fn i() -> Expression {
        Expression::constant(GaussianRational::i())
    }

    pub fn constant(c: GaussianRational) -> Expression {
        Expression::from_poly(Polynomial::constant(c))
    }

    pub fn from_poly(p: Polynomial) -> Expression {
        Expression {
            num: p,
            den: Denominator::one(),
        }
    }

    pub fn symbol(s: Symbol) -> Expression {
        Expression::from_poly(Polynomial::symbol(s))
    }

    pub fn coord(c: Coord) -> Expression {
        Expression::symbol(Symbol::Coord(c))
    }

    pub fn param(name: &str) -> Expression {
        Expression::symbol(Symbol::param(name))
    }

    pub fn jet(j: Jet) -> Expression {
        Expression::symbol(Symbol::Jet(j))
    }

    /// `1 / b^e` for a registered base.
    pub fn inverse_base(b: Base, e: u32) -> Expression {
        Expression {
            num: Polynomial::one(),
            den: Denominator::base(b, e),
        }
    }

    /// `x² + y²`
    pub fn rho2() -> Expression {
        Expression::from_poly(Base::Rho2.poly())
    }

    /// `x² + y² + z²`
    pub fn r2() -> Expression {
        Expression::from_poly(Base::R2.poly())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Denominator {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn scale(&self, k: &GaussianRational) -> Expression {
        Expression {
            num: self.num.scale(k),
            den: if k.is_zero() {
                Denominator::one()
            } else {
                self.den.clone()
            },
        }
    }

    pub fn add(&self, other: &Expression) -> Expression {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if self.den.is_one() {
                return Expression::from_poly(num);
            }
            return canonicalize(num, self.den.clone());
        }
        let l = self.den.lcm(&other.den);
        let a = self.num.mul(&l.cofactor(&self.den).poly());
        let b = other.num.mul(&l.cofactor(&other.den).poly());
        canonicalize(a.add(&b), l)
    }

    pub fn sub(&self, other: &Expression) -> Expression {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Expression {
        Expression {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Expression) -> Expression {
        if self.is_zero() || other.is_zero() {
            return Expression::zero();
        }
        let num = self.num.mul(&other.num);
        if self.den.is_one() && other.den.is_one() {
            return Expression::from_poly(num);
        }
        canonicalize(num, self.den.mul(&other.den))
    }

    pub fn pow(&self, e: u32) -> Expression {
        let mut acc = Expression::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse, provided the numerator factors as a nonzero
    /// constant times registered bases (built-in ones plus `extra`).
    pub fn inverse(&self, extra: &[Base]) -> Result<Expression, ExprError> {
        if self.is_zero() {
            return Err(ExprError::DivisionByZero);
        }
        let mut rest = self.num.clone();
        let mut factors = Denominator::one();
        let bases = Base::BUILTIN.iter().chain(extra.iter());
        for b in bases {
            let bp = b.poly();
            while rest.as_constant().is_none() {
                match rest.div_exact(&bp) {
                    Some(q) => {
                        rest = q;
                        factors = factors.mul(&Denominator::base(b.clone(), 1));
                    }
                    None => break,
                }
            }
        }
        let c = rest
            .as_constant()
            .ok_or_else(|| ExprError::UnregisteredDenominator(self.num.to_string()))?;
        let c_inv = c.inv().ok_or(ExprError::DivisionByZero)?;
        Ok(canonicalize(self.den.poly().scale(&c_inv), factors))
    }

    pub fn div(&self, other: &Expression, extra: &[Base]) -> Result<Expression, ExprError> {
        Ok(self.mul(&other.inverse(extra)?))
    }

    pub fn differentiate(&self, c: Coord) -> Expression {
        let dnum = self.num.derivative(c);
        if self.den.is_one() {
            return Expression::from_poly(dnum);
        }
        // d(N/D) = (N'·B − N·Σ e_b b'·(B/b)) / (D·B), B the radical of D.
        let radical = self.den.radical();
        let mut top = dnum.mul(&radical.poly());
        for (b, e) in self.den.factors() {
            let db = b.poly().derivative(c);
            if db.is_zero() {
                continue;
            }
            let others = radical.cofactor(&Denominator::base(b.clone(), 1));
            let term = self
                .num
                .mul(&db)
                .mul(&others.poly())
                .scale(&GaussianRational::from_int(e as i64));
            top = top.sub(&term);
        }
        canonicalize(top, self.den.mul(&radical))
    }

    pub fn partial(&self, beta: [u8; 3]) -> Expression {
        let mut out = self.clone();
        for c in Coord::ALL {
            for _ in 0..beta[c.index()] {
                if out.is_zero() {
                    return out;
                }
                out = out.differentiate(c);
            }
        }
        out
    }

    pub fn conj(&self) -> Expression {
        Expression {
            num: self.num.conj(),
            den: self.den.clone(),
        }
    }

    /// Real part, treating every symbol as real.
    pub fn real_part(&self) -> Expression {
        canonicalize(self.num.map_coefficients(GaussianRational::real_part), self.den.clone())
    }

    /// Imaginary part, treating every symbol as real.
    pub fn imag_part(&self) -> Expression {
        canonicalize(self.num.map_coefficients(GaussianRational::imag_part), self.den.clone())
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.num.symbols()
    }

    pub fn jets(&self) -> BTreeSet<Jet> {
        self.symbols()
            .into_iter()
            .filter_map(|s| s.as_jet().cloned())
            .collect()
    }

    /// Names of the formal functions occurring (through any derivative).
    pub fn function_names(&self) -> BTreeSet<Arc<str>> {
        self.jets().into_iter().map(|j| j.name).collect()
    }

    pub fn params(&self) -> BTreeSet<Arc<str>> {
        self.symbols()
            .into_iter()
            .filter_map(|s| match s {
                Symbol::Param(p) => Some(p),
                _ => None,
            })
            .collect()
    }

    pub fn depends_on_coords(&self) -> bool {
        !self.den.is_one() || self.symbols().iter().any(|s| !s.is_param())
    }

    /// Replaces each symbol for which `f` returns a value, simultaneously,
    /// and renormalizes.
    pub fn map_symbols(&self, f: &mut impl FnMut(&Symbol) -> Option<Expression>) -> Expression {
        let mut cache: BTreeMap<Symbol, Option<Expression>> = BTreeMap::new();
        for s in self.num.symbols() {
            let v = f(&s);
            cache.insert(s, v);
        }
        if cache.values().all(Option::is_none) {
            return self.clone();
        }
        let mut acc = Expression::zero();
        for (m, c) in self.num.terms() {
            let mut kept: Vec<(Symbol, u32)> = Vec::new();
            let mut t = Expression::constant(c.clone());
            for (s, e) in m.factors() {
                match &cache[s] {
                    Some(v) => t = t.mul(&v.pow(*e)),
                    None => kept.push((s.clone(), *e)),
                }
            }
            let kept = Polynomial::term(GaussianRational::one(), Monomial::from_factors(kept));
            acc = acc.add(&t.mul(&Expression::from_poly(kept)));
        }
        acc.mul(&Expression {
            num: Polynomial::one(),
            den: self.den.clone(),
        })
    }

    /// Simultaneous substitution of parameters and formal functions. Every
    /// derivative jet of a bound function receives the corresponding
    /// derivative of the bound value.
    pub fn substitute(&self, bindings: &Bindings) -> Result<Expression, ExprError> {
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let mut err = None;
        let out = self.map_symbols(&mut |s| match s {
            Symbol::Coord(_) => None,
            Symbol::Param(p) => bindings.params.get(p).cloned(),
            Symbol::Jet(j) => match bindings.jet_value(j) {
                Ok(v) => v,
                Err(e) => {
                    err.get_or_insert(e);
                    None
                }
            },
        });
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    pub fn evaluate_with(
        &self,
        value: &impl Fn(&Symbol) -> Option<GaussianRational>,
    ) -> Result<GaussianRational, ExprError> {
        let n = self
            .num
            .evaluate(value)
            .map_err(|s| ExprError::Unbound(s.to_string()))?;
        let d = self
            .den
            .poly()
            .evaluate(value)
            .map_err(|s| ExprError::Unbound(s.to_string()))?;
        if d.is_zero() {
            return Err(ExprError::Pole);
        }
        Ok(&n / &d)
    }

    /// Exact value at a point with all parameters bound.
    pub fn evaluate(
        &self,
        point: &BTreeMap<Coord, GaussianRational>,
        params: &BTreeMap<String, GaussianRational>,
    ) -> Result<GaussianRational, ExprError> {
        self.evaluate_with(&|s| match s {
            Symbol::Coord(c) => point.get(c).cloned(),
            Symbol::Param(p) => params.get(&**p).cloned(),
            Symbol::Jet(_) => None,
        })
    }

    /// Numerator after multiplying through by the denominator, together with
    /// the multiplier used.
    pub fn clear_denominator(&self) -> (Expression, Denominator) {
        (Expression::from_poly(self.num.clone()), self.den.clone())
    }

    /// Scales to a unit leading coefficient (zero stays zero).
    pub fn monic(&self) -> Expression {
        Expression {
            num: self.num.monic(),
            den: self.den.clone(),
        }
    }
}

fn canonicalize(mut num: Polynomial, den: Denominator) -> Expression {
    if num.is_zero() {
        return Expression::zero();
    }
    let mut out = Denominator::one();
    for (b, mut e) in den.0 {
        match &b {
            Base::Coord(c) => {
                let s = Symbol::Coord(*c);
                let k = num.min_exponent(&s).min(e);
                if k > 0 {
                    let m = Monomial::var(s, k);
                    num = Polynomial::from_terms(
                        num.terms().map(|(n, c)| (n.div(&m).unwrap(), c.clone())),
                    );
                    e -= k;
                }
            }
            _ => {
                let bp = b.poly();
                // Rho2 and R2 vanish at (1, i, 0); a multiple must too.
                let on_zero_set = [GaussianRational::one(), GaussianRational::i(), GaussianRational::zero()];
                if matches!(b, Base::Rho2 | Base::R2) && !num.vanishes_at_coords(&on_zero_set) {
                    out.0.insert(b, e);
                    continue;
                }
                while e > 0 {
                    match num.div_exact(&bp) {
                        Some(q) => {
                            num = q;
                            e -= 1;
                        }
                        None => break,
                    }
                }
            }
        }
        if e > 0 {
            out.0.insert(b, e);
        }
    }
    Expression { num, den: out }
}

impl fmt::Display for Expression {
    /// Canonical text form, parseable back by the expression grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

macro_rules! expr_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Expression> for &Expression {
            type Output = Expression;
            fn $m(self, rhs: &Expression) -> Expression {
                Expression::$m(self, rhs)
            }
        }
    };
}
expr_binop!(Add, add);
expr_binop!(Sub, sub);
expr_binop!(Mul, mul);

impl Neg for &Expression {
    type Output = Expression;
    fn neg(self) -> Expression {
        Expression::neg(self)
    }
}


impl From<Coord> for Expression {
    fn from(c: Coord) -> Expression {
        Expression::coord(c)
    }
}

impl From<i64> for Expression {
    fn from(n: i64) -> Expression {
        Expression::int(n)
    }
}

/// Values for parameters and formal functions used by `substitute`.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    params: BTreeMap<Arc<str>, Expression>,
    functions: BTreeMap<Arc<str>, Expression>,
}

impl Bindings {
    pub fn new() -> Bindings {
        Bindings::default()
    }

    pub fn param(mut self, name: &str, value: Expression) -> Bindings {
        self.params.insert(name.into(), value);
        self
    }

    pub fn function(mut self, name: &str, value: Expression) -> Bindings {
        self.functions.insert(name.into(), value);
        self
    }

    pub fn set_param(&mut self, name: &str, value: Expression) {
        self.params.insert(name.into(), value);
    }

    pub fn set_function(&mut self, name: &str, value: Expression) {
        self.functions.insert(name.into(), value);
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty() && self.functions.is_empty()
    }

    pub fn binds_function(&self, name: &str) -> bool {
        self.functions.contains_key(name)
    }

    pub fn function_value(&self, name: &str) -> Option<&Expression> {
        self.functions.get(name)
    }

    pub fn function_names(&self) -> impl Iterator<Item = &Arc<str>> {
        self.functions.keys()
    }

    /// Value of a jet under these bindings, `None` when its function is free.
    fn jet_value(&self, j: &Jet) -> Result<Option<Expression>, ExprError> {
        let Some(e) = self.functions.get(&j.name) else {
            return Ok(None);
        };
        let inconsistent = |reason: &str| ExprError::InconsistentBinding {
            name: j.name.to_string(),
            reason: reason.to_string(),
        };
        match &j.rule {
            JetRule::Free(deps) => {
                for c in Coord::ALL {
                    if !deps.contains(c) && !e.differentiate(c).is_zero() {
                        return Err(inconsistent(&format!(
                            "value depends on {} but the function does not",
                            c.name()
                        )));
                    }
                }
                Ok(Some(e.partial(j.deriv)))
            }
            JetRule::Radial(dim) => {
                let coords = dim.coords();
                for (a, &ca) in coords.iter().enumerate() {
                    for &cb in &coords[a + 1..] {
                        let ang = Expression::coord(cb)
                            .mul(&e.differentiate(ca))
                            .sub(&Expression::coord(ca).mul(&e.differentiate(cb)));
                        if !ang.is_zero() {
                            return Err(inconsistent("value is not a function of the radius"));
                        }
                    }
                }
                if *dim == Dim::Two && !e.differentiate(Coord::Z).is_zero() {
                    return Err(inconsistent("value depends on z"));
                }
                // d/du = (1/(2x)) ∂x on radial functions.
                let half_over_x = Expression::inverse_base(Base::Coord(Coord::X), 1)
                    .scale(&GaussianRational::ratio(1, 2));
                let mut v = e.clone();
                for _ in 0..j.deriv[0] {
                    v = v.differentiate(Coord::X).mul(&half_over_x);
                }
                Ok(Some(v))
            }
            JetRule::Antiderivative(of) => {
                if !e.differentiate(Coord::Y).is_zero() || !e.differentiate(Coord::Z).is_zero() {
                    return Err(inconsistent("antiderivative value must depend on x only"));
                }
                if let Some(f) = self.functions.get(of) {
                    if e.differentiate(Coord::X) != *f {
                        return Err(inconsistent(&format!(
                            "x-derivative of the value differs from the bound {of}"
                        )));
                    }
                }
                Ok(Some(e.clone()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::symbol::CoordSet;

    fn x() -> Expression {
        Expression::coord(Coord::X)
    }
    fn y() -> Expression {
        Expression::coord(Coord::Y)
    }
    fn z() -> Expression {
        Expression::coord(Coord::Z)
    }

    #[test]
    fn expansion_identity() {
        let lhs = x().add(&y()).mul(&x().sub(&y()));
        assert_eq!(lhs, x().mul(&x()).sub(&y().mul(&y())));
    }

    #[test]
    fn registered_base_cancels() {
        let inv = Expression::inverse_base(Base::Rho2, 1);
        assert!(Expression::rho2().mul(&inv).is_one());
    }

    #[test]
    fn additive_inverse_is_canonical_zero() {
        let g = Expression::param("gamma");
        let a = g.mul(&Expression::i().mul(&x()));
        let b = g.mul(&Expression::i().neg().mul(&x()));
        let s = a.add(&b);
        assert!(s.is_zero());
        assert_eq!(s, Expression::zero());
    }

    #[test]
    fn unregistered_division_rejected() {
        let e = x().add(&Expression::one());
        assert!(matches!(
            Expression::one().div(&e, &[]),
            Err(ExprError::UnregisteredDenominator(_))
        ));
        assert!(matches!(Expression::one().div(&Expression::zero(), &[]), Err(ExprError::DivisionByZero)));
    }

    #[test]
    fn inverse_of_product_of_bases() {
        let e = Expression::int(2).mul(&x()).mul(&x()).mul(&Expression::r2());
        let inv = e.inverse(&[]).unwrap();
        assert!(e.mul(&inv).is_one());
    }

    #[test]
    fn derivative_of_inverse_square() {
        let e = Expression::inverse_base(Base::R2, 1);
        let d = e.differentiate(Coord::X);
        let expected = Expression::int(-2).mul(&x()).mul(&Expression::inverse_base(Base::R2, 2));
        assert_eq!(d, expected);
    }

    #[test]
    fn jet_derivative_rules() {
        let v1 = Expression::jet(Jet::free("V1", CoordSet::XY));
        assert_eq!(
            v1.differentiate(Coord::X),
            Expression::jet(Jet::free("V1", CoordSet::XY).with_deriv([1, 0, 0]))
        );
        let f = Jet::radial("f", Dim::Two);
        let fd = Expression::jet(f.clone()).differentiate(Coord::Y);
        assert_eq!(fd, Expression::int(2).mul(&y()).mul(&Expression::jet(f.with_deriv([1, 0, 0]))));
        let w = Expression::jet(Jet::antiderivative("W", "V1"));
        assert_eq!(
            w.differentiate(Coord::X),
            Expression::jet(Jet::free("V1", CoordSet::X))
        );
        assert!(w.differentiate(Coord::Y).is_zero());
    }

    #[test]
    fn classical_limit_substitution() {
        let hbar = Expression::param("hbar");
        let v0 = hbar.pow(2).mul(&Expression::inverse_base(Base::R2, 1));
        let b = Bindings::new().param("hbar", Expression::zero());
        assert!(v0.substitute(&b).unwrap().is_zero());
    }

    #[test]
    fn jet_binding_propagates_to_derivatives() {
        let v1x = Expression::jet(Jet::free("V1", CoordSet::XYZ).with_deriv([1, 0, 0]));
        let b = Bindings::new().function("V1", Expression::inverse_base(Base::R2, 1));
        let expected = Expression::int(-2).mul(&x()).mul(&Expression::inverse_base(Base::R2, 2));
        assert_eq!(v1x.substitute(&b).unwrap(), expected);
    }

    #[test]
    fn partial_evaluation() {
        let e = x().add(&Expression::param("gamma").mul(&y()));
        let b = Bindings::new().param("gamma", Expression::zero());
        assert_eq!(e.substitute(&b).unwrap(), x());
    }

    #[test]
    fn radial_binding_requires_radial_value() {
        let f1 = Expression::jet(Jet::radial("f", Dim::Three).with_deriv([1, 0, 0]));
        let ok = Bindings::new().function("f", Expression::inverse_base(Base::R2, 1));
        // f(u) = 1/u  ⇒  f'(u) = −1/u²
        assert_eq!(
            f1.substitute(&ok).unwrap(),
            Expression::inverse_base(Base::R2, 2).neg()
        );
        let bad = Bindings::new().function("f", x());
        assert!(matches!(
            f1.substitute(&bad),
            Err(ExprError::InconsistentBinding { .. })
        ));
    }

    #[test]
    fn free_binding_respects_dependencies() {
        let v = Expression::jet(Jet::free("V1", CoordSet::X));
        let bad = Bindings::new().function("V1", y());
        assert!(v.substitute(&bad).is_err());
    }

    #[test]
    fn evaluation() {
        let e = Expression::inverse_base(Base::R2, 1);
        let pt: BTreeMap<_, _> = [(Coord::X, 1), (Coord::Y, 2), (Coord::Z, 2)]
            .into_iter()
            .map(|(c, v)| (c, GaussianRational::from_int(v)))
            .collect();
        let params = BTreeMap::new();
        assert_eq!(e.evaluate(&pt, &params).unwrap(), GaussianRational::ratio(1, 9));
        let pole: BTreeMap<_, _> = Coord::ALL.iter().map(|c| (*c, GaussianRational::zero())).collect();
        assert!(matches!(e.evaluate(&pole, &params), Err(ExprError::Pole)));
        let sym = x().mul(&x()).sub(&y().mul(&y()));
        let p33: BTreeMap<_, _> = [(Coord::X, 3), (Coord::Y, 3)]
            .into_iter()
            .map(|(c, v)| (c, GaussianRational::from_int(v)))
            .collect();
        assert!(sym.evaluate(&p33, &params).unwrap().is_zero());
        let gx = Expression::param("gamma").mul(&x());
        let p2: BTreeMap<_, _> = [(Coord::X, GaussianRational::from_int(2))].into_iter().collect();
        let g: BTreeMap<_, _> = [("gamma".to_string(), GaussianRational::ratio(1, 2))].into_iter().collect();
        assert!(gx.evaluate(&p2, &g).unwrap().is_one());
        assert!(matches!(gx.evaluate(&p2, &params), Err(ExprError::Unbound(_))));
        let _ = z();
    }
}
