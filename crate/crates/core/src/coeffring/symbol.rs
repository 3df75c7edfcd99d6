//! Symbols of the coefficient ring: coordinates, constant parameters and
//! jet variables (formal functions together with their partial derivatives).

use std::fmt;
use std::sync::Arc;

use super::poly::Polynomial;
use super::GaussianRational;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Coord {
    X,
    Y,
    Z,
}

impl Coord {
    pub const ALL: [Coord; 3] = [Coord::X, Coord::Y, Coord::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Coord {
        Coord::ALL[i]
    }

    pub fn name(self) -> &'static str {
        match self {
            Coord::X => "x",
            Coord::Y => "y",
            Coord::Z => "z",
        }
    }
}

/// Spatial dimension of the active coordinate mode.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub fn coords(self) -> &'static [Coord] {
        match self {
            Dim::Two => &Coord::ALL[..2],
            Dim::Three => &Coord::ALL[..],
        }
    }

    pub fn all_coords(self) -> CoordSet {
        match self {
            Dim::Two => CoordSet::XY,
            Dim::Three => CoordSet::XYZ,
        }
    }

    pub fn contains(self, c: Coord) -> bool {
        c.index() < self.coords().len()
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Two => write!(f, "2d"),
            Dim::Three => write!(f, "3d"),
        }
    }
}

/// A set of coordinates, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CoordSet(u8);

impl CoordSet {
    pub const X: CoordSet = CoordSet(0b001);
    pub const XY: CoordSet = CoordSet(0b011);
    pub const XYZ: CoordSet = CoordSet(0b111);

    pub fn contains(self, c: Coord) -> bool {
        self.0 & (1 << c.index()) != 0
    }

    pub fn iter(self) -> impl Iterator<Item = Coord> {
        Coord::ALL.into_iter().filter(move |c| self.contains(*c))
    }
}

/// How a formal function responds to coordinate differentiation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum JetRule {
    /// Arbitrary function of the listed coordinates.
    Free(CoordSet),
    /// Function of `u = x²+y²` (2D) or `u = x²+y²+z²` (3D). The jet's
    /// derivative index counts `d/du` derivatives in its first slot.
    Radial(Dim),
    /// `W(x)` with `∂x W = F(x)` for the named `F`; constant in `y` and `z`.
    Antiderivative(Arc<str>),
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Jet {
    pub name: Arc<str>,
    pub deriv: [u8; 3],
    pub rule: JetRule,
}

impl Jet {
    pub fn free(name: &str, deps: CoordSet) -> Jet {
        Jet {
            name: name.into(),
            deriv: [0; 3],
            rule: JetRule::Free(deps),
        }
    }

    pub fn radial(name: &str, dim: Dim) -> Jet {
        Jet {
            name: name.into(),
            deriv: [0; 3],
            rule: JetRule::Radial(dim),
        }
    }

    pub fn antiderivative(name: &str, of: &str) -> Jet {
        Jet {
            name: name.into(),
            deriv: [0; 3],
            rule: JetRule::Antiderivative(of.into()),
        }
    }

    /// The underived jet of the same function.
    pub fn base(&self) -> Jet {
        Jet {
            deriv: [0; 3],
            ..self.clone()
        }
    }

    pub fn order(&self) -> u32 {
        self.deriv.iter().map(|&d| d as u32).sum()
    }

    pub fn with_deriv(&self, deriv: [u8; 3]) -> Jet {
        Jet {
            deriv,
            ..self.clone()
        }
    }

    /// Partial derivative with respect to `c`, following the jet's rule.
    /// Never expands the function itself: the result is a polynomial in
    /// coordinates and jets.
    pub fn derivative(&self, c: Coord) -> Polynomial {
        match &self.rule {
            JetRule::Free(deps) => {
                if !deps.contains(c) {
                    return Polynomial::zero();
                }
                let mut d = self.deriv;
                d[c.index()] += 1;
                Polynomial::symbol(Symbol::Jet(self.with_deriv(d)))
            }
            JetRule::Radial(dim) => {
                if !dim.contains(c) {
                    return Polynomial::zero();
                }
                let mut d = self.deriv;
                d[0] += 1;
                Polynomial::symbol(Symbol::Jet(self.with_deriv(d)))
                    .mul(&Polynomial::symbol(Symbol::Coord(c)))
                    .scale(&GaussianRational::from_int(2))
            }
            JetRule::Antiderivative(of) => {
                if c != Coord::X {
                    return Polynomial::zero();
                }
                Polynomial::symbol(Symbol::Jet(Jet::free(of, CoordSet::X)))
            }
        }
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)?;
        match self.rule {
            JetRule::Free(_) => {
                if self.order() > 0 {
                    write!(f, "_")?;
                    for c in Coord::ALL {
                        for _ in 0..self.deriv[c.index()] {
                            write!(f, "{}", c.name())?;
                        }
                    }
                }
            }
            JetRule::Radial(_) => {
                if self.deriv[0] > 0 {
                    write!(f, "_")?;
                    for _ in 0..self.deriv[0] {
                        write!(f, "u")?;
                    }
                }
            }
            JetRule::Antiderivative(_) => {}
        }
        Ok(())
    }
}

/// Variables of the polynomial ring. The derived order puts coordinates
/// before parameters before jets, each group alphabetical.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Symbol {
    Coord(Coord),
    Param(Arc<str>),
    Jet(Jet),
}

impl Symbol {
    pub fn param(name: &str) -> Symbol {
        Symbol::Param(name.into())
    }

    pub fn is_coord(&self) -> bool {
        matches!(self, Symbol::Coord(_))
    }

    pub fn is_param(&self) -> bool {
        matches!(self, Symbol::Param(_))
    }

    pub fn as_jet(&self) -> Option<&Jet> {
        match self {
            Symbol::Jet(j) => Some(j),
            _ => None,
        }
    }

    pub fn derivative(&self, c: Coord) -> Polynomial {
        match self {
            Symbol::Coord(d) if *d == c => Polynomial::one(),
            Symbol::Coord(_) | Symbol::Param(_) => Polynomial::zero(),
            Symbol::Jet(j) => j.derivative(c),
        }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Coord(c) => write!(f, "{}", c.name()),
            Symbol::Param(p) => write!(f, "{p}"),
            Symbol::Jet(j) => write!(f, "{j}"),
        }
    }
}

impl From<Coord> for Symbol {
    fn from(c: Coord) -> Symbol {
        Symbol::Coord(c)
    }
}

impl From<Jet> for Symbol {
    fn from(j: Jet) -> Symbol {
        Symbol::Jet(j)
    }
}
