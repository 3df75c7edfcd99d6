//! Text grammar for expressions:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := number | identifier | '(' expr ')'
//! ```
//!
//! Identifiers resolve, in order, to `i`, the active coordinates, aliases,
//! declared parameters and declared functions. A function name may carry a
//! derivative suffix: `V1_xy` is `∂x∂y V1`, `f_uu` the second `u`-derivative
//! of a radial function.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::expr::{Base, Expression};
use super::poly::Polynomial;
use super::symbol::{Coord, Dim, Jet, JetRule};
use super::{ExprError, GaussianRational};

/// Symbol declarations the parser resolves identifiers against.
#[derive(Clone, Debug)]
pub struct Context {
    dim: Dim,
    params: BTreeSet<Arc<str>>,
    functions: BTreeMap<Arc<str>, JetRule>,
    aliases: BTreeMap<String, Expression>,
    bases: Vec<Base>,
    auto_params: bool,
}

impl Context {
    pub fn new(dim: Dim) -> Context {
        Context {
            dim,
            params: BTreeSet::new(),
            functions: BTreeMap::new(),
            aliases: BTreeMap::new(),
            bases: Vec::new(),
            auto_params: false,
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn param(mut self, name: &str) -> Context {
        self.params.insert(name.into());
        self
    }

    pub fn params<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Context {
        for n in names {
            self.params.insert(n.into());
        }
        self
    }

    /// Declares a free function of every active coordinate.
    pub fn function(self, name: &str) -> Context {
        let deps = self.dim.all_coords();
        self.function_with(name, JetRule::Free(deps))
    }

    pub fn function_with(mut self, name: &str, rule: JetRule) -> Context {
        self.functions.insert(name.into(), rule);
        self
    }

    pub fn alias(mut self, name: &str, value: Expression) -> Context {
        self.aliases.insert(name.to_string(), value);
        self
    }

    /// Unknown identifiers become parameters instead of errors.
    pub fn auto_params(mut self, on: bool) -> Context {
        self.auto_params = on;
        self
    }

    /// Registers an additional irreducible denominator base.
    pub fn register_base(mut self, p: Polynomial) -> Context {
        self.bases.push(Base::User(Arc::new(p)));
        self
    }

    pub fn extra_bases(&self) -> &[Base] {
        &self.bases
    }

    pub fn parse(&self, text: &str) -> Result<Expression, ExprError> {
        let tokens = lex(text)?;
        let mut p = Parser {
            ctx: self,
            tokens,
            pos: 0,
        };
        let e = p.expr()?;
        match p.peek() {
            (Tok::End, _) => Ok(e),
            (t, at) => Err(ExprError::Parse {
                pos: at,
                msg: format!("unexpected {}", t.describe()),
            }),
        }
    }

    fn resolve(&self, name: &str, at: usize) -> Result<Expression, ExprError> {
        if name == "i" {
            return Ok(Expression::i());
        }
        if let Some(c) = self.dim.coords().iter().find(|c| c.name() == name) {
            return Ok(Expression::coord(*c));
        }
        if let Some(a) = self.aliases.get(name) {
            return Ok(a.clone());
        }
        if self.params.contains(name) {
            return Ok(Expression::param(name));
        }
        if let Some(e) = self.resolve_function(name, at)? {
            return Ok(e);
        }
        if self.auto_params {
            return Ok(Expression::param(name));
        }
        Err(ExprError::UnknownIdentifier {
            pos: at,
            name: name.to_string(),
        })
    }

    fn resolve_function(&self, name: &str, at: usize) -> Result<Option<Expression>, ExprError> {
        let (base, suffix) = match name.split_once('_') {
            Some((b, s)) => (b, Some(s)),
            None => (name, None),
        };
        let Some(rule) = self.functions.get(base) else {
            return Ok(None);
        };
        let jet = Jet {
            name: base.into(),
            deriv: [0; 3],
            rule: rule.clone(),
        };
        let Some(suffix) = suffix else {
            return Ok(Some(Expression::jet(jet)));
        };
        let bad = || ExprError::Parse {
            pos: at,
            msg: format!("bad derivative suffix in `{name}`"),
        };
        if suffix.is_empty() {
            return Err(bad());
        }
        if let JetRule::Radial(_) = rule {
            if !suffix.chars().all(|c| c == 'u') {
                return Err(bad());
            }
            return Ok(Some(Expression::jet(jet.with_deriv([suffix.len() as u8, 0, 0]))));
        }
        let mut e = Expression::jet(jet);
        for ch in suffix.chars() {
            let c = match ch {
                'x' => Coord::X,
                'y' => Coord::Y,
                'z' if self.dim == Dim::Three => Coord::Z,
                _ => return Err(bad()),
            };
            e = e.differentiate(c);
        }
        Ok(Some(e))
    }
}

impl Default for Context {
    fn default() -> Self {
        Context::new(Dim::Three)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Op(char),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(n) => format!("number {n}"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Op(c) => format!("`{c}`"),
            Tok::End => "end of input".to_string(),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ExprError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let (at, c) = chars[k];
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let mut int = String::new();
            while k < chars.len() && chars[k].1.is_ascii_digit() {
                int.push(chars[k].1);
                k += 1;
            }
            let mut value = BigRational::from_integer(int.parse::<BigInt>().unwrap());
            if k < chars.len() && chars[k].1 == '.' {
                k += 1;
                let mut frac = String::new();
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    frac.push(chars[k].1);
                    k += 1;
                }
                if frac.is_empty() {
                    return Err(ExprError::Parse {
                        pos: at,
                        msg: "digits expected after decimal point".into(),
                    });
                }
                let scale = BigInt::from(10).pow(frac.len() as u32);
                value += BigRational::new(frac.parse::<BigInt>().unwrap(), scale);
            }
            out.push((Tok::Num(value), at));
        } else if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while k < chars.len() && (chars[k].1.is_ascii_alphanumeric() || chars[k].1 == '_') {
                s.push(chars[k].1);
                k += 1;
            }
            out.push((Tok::Ident(s), at));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), at));
            k += 1;
        } else {
            return Err(ExprError::Parse {
                pos: at,
                msg: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    ctx: &'a Context,
    tokens: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> (Tok, usize) {
        self.tokens[self.pos].clone()
    }

    fn bump(&mut self) -> (Tok, usize) {
        let t = self.peek();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek().0 == Tok::Op(op) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expression, ExprError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expression, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek().0 == Tok::Op('/') {
                let at = self.bump().1;
                let rhs = self.unary()?;
                acc = acc.div(&rhs, self.ctx.extra_bases()).map_err(|e| locate(e, at))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expression, ExprError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expression, ExprError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let (tok, at) = self.bump();
        let Tok::Num(n) = tok else {
            return Err(ExprError::Parse {
                pos: at,
                msg: "integer exponent expected".into(),
            });
        };
        if !n.denom().is_one() {
            return Err(ExprError::Parse {
                pos: at,
                msg: "exponent must be an integer".into(),
            });
        }
        let e: u32 = n.numer().try_into().map_err(|_| ExprError::Parse {
            pos: at,
            msg: "exponent too large".into(),
        })?;
        let p = base.pow(e);
        if negative {
            p.inverse(self.ctx.extra_bases()).map_err(|err| locate(err, at))
        } else {
            Ok(p)
        }
    }

    fn atom(&mut self) -> Result<Expression, ExprError> {
        let (tok, at) = self.bump();
        match tok {
            Tok::Num(n) => {
                if n.is_zero() {
                    Ok(Expression::zero())
                } else {
                    Ok(Expression::constant(GaussianRational::from_rational(n)))
                }
            }
            Tok::Ident(name) => self.ctx.resolve(&name, at),
            Tok::Op('(') => {
                let e = self.expr()?;
                let (close, cat) = self.bump();
                if close != Tok::Op(')') {
                    return Err(ExprError::Parse {
                        pos: cat,
                        msg: format!("expected `)`, found {}", close.describe()),
                    });
                }
                Ok(e)
            }
            other => Err(ExprError::Parse {
                pos: at,
                msg: format!("unexpected {}", other.describe()),
            }),
        }
    }
}

fn locate(e: ExprError, at: usize) -> ExprError {
    match e {
        ExprError::UnregisteredDenominator(d) => ExprError::Parse {
            pos: at,
            msg: format!("denominator `{d}` is not a product of registered bases"),
        },
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_square_3d() {
        let ctx = Context::new(Dim::Three);
        let e = ctx.parse("1/(x^2+y^2+z^2)").unwrap();
        assert_eq!(e, Expression::inverse_base(Base::R2, 1));
        assert_eq!(e.to_string(), "(1)/((x^2 + y^2 + z^2))");
    }

    #[test]
    fn expansion_cancels() {
        let ctx = Context::new(Dim::Two);
        assert!(ctx.parse("(x+y)^2 - x^2 - 2*x*y - y^2").unwrap().is_zero());
    }

    #[test]
    fn unregistered_denominator_reports_position() {
        let ctx = Context::new(Dim::Two);
        match ctx.parse("1/(x+1)") {
            Err(ExprError::Parse { pos, msg }) => {
                assert_eq!(pos, 1);
                assert!(msg.contains("registered"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors() {
        let ctx = Context::new(Dim::Two);
        assert!(matches!(ctx.parse("x +"), Err(ExprError::Parse { pos: 3, .. })));
        assert!(matches!(ctx.parse("(x"), Err(ExprError::Parse { .. })));
        assert!(matches!(ctx.parse("x $ y"), Err(ExprError::Parse { pos: 2, .. })));
        assert!(matches!(
            ctx.parse("q + x"),
            Err(ExprError::UnknownIdentifier { pos: 0, .. })
        ));
        // z is not a coordinate in two dimensions
        assert!(ctx.parse("z").is_err());
    }

    #[test]
    fn jets_and_aliases() {
        let ctx = Context::new(Dim::Two)
            .function("V1")
            .alias("xi", Context::new(Dim::Two).parse("y/x").unwrap());
        let e = ctx.parse("V1_xy").unwrap();
        assert_eq!(e.to_string(), "V1_xy");
        let xi = ctx.parse("1/(1+xi^2)").unwrap();
        assert_eq!(xi, Context::new(Dim::Two).parse("x^2/(x^2+y^2)").unwrap());
    }

    #[test]
    fn negative_exponent_and_decimal() {
        let ctx = Context::new(Dim::Two).param("c");
        assert_eq!(ctx.parse("x^-2").unwrap(), Expression::inverse_base(Base::Coord(Coord::X), 2));
        assert_eq!(ctx.parse("0.25*c").unwrap(), ctx.parse("c/4").unwrap());
    }
}
