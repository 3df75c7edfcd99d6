//! Quotients of polynomials in the parameters, the scalar field of
//! structure constants.

use std::fmt;

use crate::coeffring::{Expression, GaussianRational, Polynomial, Symbol};

/// `num / den` with `den` nonzero. Equality is by cross-multiplication,
/// so the representation need not be reduced.
#[derive(Clone, Debug)]
pub struct RatFun {
    num: Polynomial,
    den: Polynomial,
}

impl RatFun {
    pub fn zero() -> RatFun {
        RatFun::from_poly(Polynomial::zero())
    }

    pub fn one() -> RatFun {
        RatFun::from_poly(Polynomial::one())
    }

    pub fn constant(c: GaussianRational) -> RatFun {
        RatFun::from_poly(Polynomial::constant(c))
    }

    pub fn from_poly(num: Polynomial) -> RatFun {
        RatFun {
            num,
            den: Polynomial::one(),
        }
    }

    /// `None` unless `e` is a polynomial in the parameters alone.
    pub fn from_expression(e: &Expression) -> Option<RatFun> {
        let params_only = e.num().symbols().iter().all(|s| matches!(s, Symbol::Param(_)));
        (e.den().is_one() && params_only).then(|| RatFun::from_poly(e.num().clone()))
    }

    pub fn new(num: Polynomial, den: Polynomial) -> Option<RatFun> {
        (!den.is_zero()).then(|| RatFun { num, den }.normalized())
    }

    pub fn num(&self) -> &Polynomial {
        &self.num
    }

    pub fn den(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Cancels monomial content and exact polynomial quotients; makes
    /// the denominator monic.
    fn normalized(mut self) -> RatFun {
        if self.num.is_zero() {
            return RatFun::zero();
        }
        if let Some(q) = self.num.div_exact(&self.den) {
            return RatFun::from_poly(q);
        }
        for s in self.den.symbols() {
            let k = self.num.min_exponent(&s).min(self.den.min_exponent(&s));
            if k > 0 {
                let m = Polynomial::symbol(s).pow(k);
                self.num = self.num.div_exact(&m).unwrap();
                self.den = self.den.div_exact(&m).unwrap();
            }
        }
        let lc = self.den.leading().unwrap().1.inv().unwrap();
        RatFun {
            num: self.num.scale(&lc),
            den: self.den.scale(&lc),
        }
    }

    pub fn add(&self, o: &RatFun) -> RatFun {
        if self.den == o.den {
            return RatFun {
                num: self.num.add(&o.num),
                den: self.den.clone(),
            }
            .normalized();
        }
        RatFun {
            num: self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            den: self.den.mul(&o.den),
        }
        .normalized()
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFun) -> RatFun {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFun) -> RatFun {
        RatFun {
            num: self.num.mul(&o.num),
            den: self.den.mul(&o.den),
        }
        .normalized()
    }

    pub fn inv(&self) -> Option<RatFun> {
        RatFun::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFun) -> Option<RatFun> {
        Some(self.mul(&o.inv()?))
    }

    /// The value as an expression when the denominator is constant.
    pub fn to_expression(&self) -> Option<Expression> {
        let c = self.den.as_constant()?.inv()?;
        Some(Expression::from_poly(self.num.scale(&c)))
    }
}

impl PartialEq for RatFun {
    fn eq(&self, o: &RatFun) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl Eq for RatFun {}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(name: &str) -> RatFun {
        RatFun::from_expression(&Expression::param(name)).unwrap()
    }

    #[test]
    fn field_operations() {
        let g = p("gamma");
        let h = p("hbar");
        let q = g.div(&h).unwrap();
        assert_eq!(q.mul(&h), g);
        assert_eq!(q.sub(&q), RatFun::zero());
        assert_eq!(q.inv().unwrap(), h.div(&g).unwrap());
        assert!(RatFun::zero().inv().is_none());
        let s = g.add(&h).div(&g.add(&h)).unwrap();
        assert_eq!(s, RatFun::one());
        assert!(s.den().is_one());
    }

    #[test]
    fn rejects_coordinates() {
        assert!(RatFun::from_expression(&Expression::coord(crate::coeffring::Coord::X)).is_none());
        assert!(RatFun::from_expression(&Expression::inverse_base(crate::coeffring::Base::R2, 1)).is_none());
    }
}
