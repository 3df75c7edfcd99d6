//! Action of the diagonal phase gauge `U = diag(e^{iα}, e^{−iα})`,
//! `α = α(y/x)`, on the planar potentials.

use crate::coeffring::{Base, Coord, Expression};

fn inv_x2() -> Expression {
    Expression::inverse_base(Base::Coord(Coord::X), 2)
}

/// `(Ṽ₀, Ṽ₁)` with `Ṽ₁ = V₁ + α̇/x²` and
/// `Ṽ₀ = V₀ + (1 + y²/x²)(α̇²/(2x²) + α̇V₁)`, where `α̇` is already written
/// in `x, y`.
pub fn apply_gauge(v0: &Expression, v1: &Expression, alpha_dot: &Expression) -> (Expression, Expression) {
    let y = Expression::coord(Coord::Y);
    let v1t = v1.add(&alpha_dot.mul(&inv_x2()));
    let factor = Expression::one().add(&y.pow(2).mul(&inv_x2()));
    let inner = alpha_dot
        .pow(2)
        .mul(&inv_x2())
        .mul(&Expression::ratio(1, 2))
        .add(&alpha_dot.mul(v1));
    let v0t = v0.add(&factor.mul(&inner));
    (v0t, v1t)
}

/// `V₀ − ½(x²+y²)V₁²`, unchanged by [`apply_gauge`].
pub fn gauge_invariant(v0: &Expression, v1: &Expression) -> Expression {
    v0.sub(&Expression::rho2().mul(&v1.pow(2)).mul(&Expression::ratio(1, 2)))
}
