//! Sparse multivariate polynomials over the Gaussian rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::symbol::{Coord, Symbol};
use super::GaussianRational;

/// A power product of symbols, stored sorted by symbol with positive
/// exponents. Ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(s: Symbol, e: u32) -> Monomial {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial(vec![(s, e)])
        }
    }

    pub fn from_factors(mut factors: Vec<(Symbol, u32)>) -> Monomial {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Symbol, u32)> = Vec::with_capacity(factors.len());
        for (s, e) in factors {
            match out.last_mut() {
                Some((t, f)) if *t == s => *f += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn exponent(&self, s: &Symbol) -> u32 {
        self.0
            .binary_search_by(|(t, _)| t.cmp(s))
            .map(|i| self.0[i].1)
            .unwrap_or(0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0.clone(), a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (s, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 == *s {
                let f = other.0[j].1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((s.clone(), e - f)),
                }
                j += 1;
            } else if j < other.0.len() && other.0[j].0 < *s {
                return None;
            } else {
                out.push((s.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Splits into the factors accepted by `keep` and the rest.
    pub fn split(&self, keep: impl Fn(&Symbol) -> bool) -> (Monomial, Monomial) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(s, _)| keep(s));
        (Monomial(a), Monomial(b))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((sa, ea)), Some((sb, eb))) => match sa.cmp(sb) {
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, (s, e)) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, "*")?;
            }
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Polynomial with Gaussian-rational coefficients; zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial::default()
    }

    pub fn one() -> Polynomial {
        Polynomial::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Polynomial {
        Polynomial::term(c, Monomial::one())
    }

    pub fn term(c: GaussianRational, m: Monomial) -> Polynomial {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn symbol(s: Symbol) -> Polynomial {
        Polynomial::term(GaussianRational::one(), Monomial::var(s, 1))
    }

    pub fn coord(c: Coord) -> Polynomial {
        Polynomial::symbol(Symbol::Coord(c))
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Monomial, GaussianRational)>) -> Polynomial {
        let mut p = Polynomial::zero();
        for (m, c) in it {
            p.add_term(m, &c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// The constant value, if this polynomial has no symbols.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn leading(&self) -> Option<(&Monomial, &GaussianRational)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &GaussianRational) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, k: &GaussianRational) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self.terms.iter().map(|(n, c)| (n.mul(m), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = Polynomial::zero();
        for (m, c) in &small.terms {
            for (n, d) in &large.terms {
                out.add_term(m.mul(n), &(c * d));
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, c: Coord) -> Polynomial {
        let mut out = Polynomial::zero();
        for (m, k) in &self.terms {
            for (idx, (s, e)) in m.factors().iter().enumerate() {
                let ds = s.derivative(c);
                if ds.is_zero() {
                    continue;
                }
                let mut rest: Vec<(Symbol, u32)> = m.factors().to_vec();
                rest[idx].1 -= 1;
                let rest = Monomial::from_factors(rest);
                let factor = k * &GaussianRational::from_int(*e as i64);
                for (dm, dc) in ds.terms() {
                    out.add_term(rest.mul(dm), &(&factor * dc));
                }
            }
        }
        out
    }

    /// Exact quotient `self / g`, or `None` when `g` does not divide `self`.
    /// A single divisor forms a Gröbner basis of its ideal, so a nonzero
    /// remainder term is conclusive.
    pub fn div_exact(&self, g: &Polynomial) -> Option<Polynomial> {
        let (lm, lc) = g.leading()?;
        let lc_inv = lc.inv()?;
        let mut rem = self.clone();
        let mut quot = Polynomial::zero();
        while let Some((m, c)) = rem.leading() {
            let qm = m.div(lm)?;
            let qc = c * &lc_inv;
            rem = rem.sub(&g.mul_monomial(&qm, &qc));
            quot.add_term(qm, &qc);
        }
        Some(quot)
    }

    /// Whether the polynomial vanishes identically once the coordinates
    /// take the given values; other symbols stay formal.
    pub fn vanishes_at_coords(&self, point: &[GaussianRational; 3]) -> bool {
        let mut rest: BTreeMap<Monomial, GaussianRational> = BTreeMap::new();
        'terms: for (m, c) in &self.terms {
            let mut v = c.clone();
            let mut other = Vec::new();
            for (s, e) in &m.0 {
                match s {
                    Symbol::Coord(k) => {
                        let x = &point[k.index()];
                        if x.is_zero() {
                            continue 'terms;
                        }
                        v = &v * &x.pow(*e);
                    }
                    _ => other.push((s.clone(), *e)),
                }
            }
            let slot = rest.entry(Monomial(other)).or_insert_with(GaussianRational::zero);
            *slot = &*slot + &v;
        }
        rest.values().all(GaussianRational::is_zero)
    }

    /// Largest `e` such that the coordinate power `c^e` divides every term.
    pub fn min_exponent(&self, s: &Symbol) -> u32 {
        self.terms.keys().map(|m| m.exponent(s)).min().unwrap_or(0)
    }

    pub fn symbols(&self) -> std::collections::BTreeSet<Symbol> {
        self.terms
            .keys()
            .flat_map(|m| m.factors().iter().map(|(s, _)| s.clone()))
            .collect()
    }

    pub fn map_coefficients(&self, f: impl Fn(&GaussianRational) -> GaussianRational) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn conj(&self) -> Polynomial {
        self.map_coefficients(GaussianRational::conj)
    }

    /// Evaluates with every symbol supplied by `value`; the first missing
    /// symbol is returned as the error.
    pub fn evaluate(
        &self,
        value: &impl Fn(&Symbol) -> Option<GaussianRational>,
    ) -> Result<GaussianRational, Symbol> {
        let mut powers: BTreeMap<&Symbol, Vec<Scaled>> = BTreeMap::new();
        for m in self.terms.keys() {
            for (s, e) in m.factors() {
                if !powers.contains_key(s) {
                    let v = value(s).ok_or_else(|| s.clone())?;
                    powers.insert(s, vec![Scaled::from(&GaussianRational::one()), Scaled::from(&v)]);
                }
                let table = powers.get_mut(s).unwrap();
                while table.len() <= *e as usize {
                    let next = table.last().unwrap().mul(&table[1]);
                    table.push(next);
                }
            }
        }
        // Unreduced sums keyed by denominator; reduced once at the end.
        let mut sums: BTreeMap<BigInt, (BigInt, BigInt)> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut t = Scaled::from(c);
            for (s, e) in m.factors() {
                t = t.mul(&powers[s][*e as usize]);
            }
            let slot = sums.entry(t.den).or_default();
            slot.0 += t.re;
            slot.1 += t.im;
        }
        let mut acc = GaussianRational::zero();
        for (den, (re, im)) in sums {
            acc += &GaussianRational::new(BigRational::new(re, den.clone()), BigRational::new(im, den));
        }
        Ok(acc)
    }

    /// Normalizes to unit leading coefficient; used to compare up to scalars.
    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => Polynomial::zero(),
            Some((_, lc)) => self.scale(&lc.inv().unwrap()),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative_axis();
            let mag = if negative { -c } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

/// `(re + i·im) / den` with integer parts, not reduced.
struct Scaled {
    re: BigInt,
    im: BigInt,
    den: BigInt,
}

impl Scaled {
    fn from(g: &GaussianRational) -> Scaled {
        let den = g.re().denom().lcm(g.im().denom());
        Scaled {
            re: g.re().numer() * (&den / g.re().denom()),
            im: g.im().numer() * (&den / g.im().denom()),
            den,
        }
    }

    fn mul(&self, o: &Scaled) -> Scaled {
        Scaled {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
            den: &self.den * &o.den,
        }
    }
}
