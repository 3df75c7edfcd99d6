use crate::coeffring::{Base, Bindings, Coord, Dim, Expression, Jet, Symbol};
use crate::diffop::{levi_civita, MultiIndex};
use crate::spinop::PauliOperator;

use super::{Ansatz, DeterminingError, DeterminingSystem, Stage};

#[derive(Clone, Debug)]
pub struct SolutionReport {
    /// `(equation label, residual)` in system order.
    pub residuals: Vec<(String, Expression)>,
}

impl SolutionReport {
    pub fn all_zero(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    pub fn nonzero(&self) -> Vec<&(String, Expression)> {
        self.residuals.iter().filter(|(_, r)| !r.is_zero()).collect()
    }
}

/// Substitutes `bindings` into every equation. Functions may be bound to
/// themselves (or to other jets) to stay formal; parameters may stay free.
pub fn check_solution(system: &DeterminingSystem, bindings: &Bindings) -> Result<SolutionReport, DeterminingError> {
    let unbound: Vec<String> = system
        .function_names()
        .into_iter()
        .filter(|n| !bindings.binds_function(n))
        .map(|n| n.to_string())
        .collect();
    if !unbound.is_empty() {
        return Err(DeterminingError::Unbound(unbound));
    }
    let mut residuals = Vec::new();
    for eq in &system.equations {
        residuals.push((eq.label(), eq.expr.substitute(bindings)?));
    }
    Ok(SolutionReport { residuals })
}

fn at_origin(e: &Expression) -> Expression {
    e.map_symbols(&mut |s| match s {
        Symbol::Coord(_) => Some(Expression::zero()),
        _ => None,
    })
}

/// Reads the ansatz functions off a first-order operator with `ħ = 1`:
/// the `∂_k` coefficient is `−i F_μk` and the zeroth-order part is
/// `φ_μ − (i/2) Σ_k ∂_k F_μk`. Also binds the second-stage parameters.
pub fn ansatz_bindings(ansatz: &Ansatz, x: &PauliOperator) -> Result<Bindings, DeterminingError> {
    let dim = ansatz.dim;
    let sigmas = ansatz.sigmas();
    let mut b = Bindings::new();
    let i = Expression::i();
    let mut coeffs = std::collections::BTreeMap::new();
    for mu in 0..4 {
        let comp = x.get(mu);
        if !sigmas.contains(&mu) {
            if !comp.is_zero() {
                return Err(DeterminingError::NotAnsatz(format!("component s{mu} is outside the ansatz")));
            }
            continue;
        }
        if comp.order().unwrap_or(0) > 1 {
            return Err(DeterminingError::NotAnsatz(format!("component s{mu} has order above one")));
        }
        let mut div = Expression::zero();
        for &k in dim.coords() {
            let f = comp.coefficient(MultiIndex::unit(k)).mul(&i);
            div = div.add(&f.differentiate(k));
            b.set_function(ansatz.name(mu, Some(k)), f.clone());
            coeffs.insert((mu, k), f);
        }
        let phi = comp
            .coefficient(MultiIndex::ZERO)
            .add(&div.mul(&i).mul(&Expression::ratio(1, 2)));
        b.set_function(ansatz.name(mu, None), phi);
    }
    let p = |name: &str, v: Expression| (name.to_string(), v);
    let params: Vec<(String, Expression)> = match dim {
        Dim::Two => {
            let mut out = Vec::new();
            for (mu, l) in [(0, 0), (3, 1)] {
                let a = &coeffs[&(mu, Coord::X)];
                let bb = &coeffs[&(mu, Coord::Y)];
                out.push(p(&format!("a{l}"), at_origin(a)));
                out.push(p(&format!("b{l}"), at_origin(bb)));
                out.push(p(&format!("omega{l}"), at_origin(&a.differentiate(Coord::Y))));
            }
            out
        }
        Dim::Three => {
            let a0 = &coeffs[&(0, Coord::X)];
            let b0 = &coeffs[&(0, Coord::Y)];
            let c0 = &coeffs[&(0, Coord::Z)];
            vec![
                p("b1", at_origin(a0)),
                p("b2", at_origin(b0)),
                p("b3", at_origin(c0)),
                p("a1", at_origin(&c0.differentiate(Coord::Y))),
                p("a2", at_origin(&a0.differentiate(Coord::Z))),
                p("a3", at_origin(&b0.differentiate(Coord::X))),
            ]
        }
    };
    let mut pb = Bindings::new();
    for (n, v) in &params {
        pb.set_param(n, v.clone());
        b.set_param(n, v.clone());
    }
    for ((mu, k), v) in ansatz.killing_solution() {
        if v.substitute(&pb)? != coeffs[&(mu, k)] {
            return Err(DeterminingError::NotAnsatz(format!(
                "coefficient of p_{} on s{mu} is not of the second-stage form",
                k.name()
            )));
        }
    }
    Ok(b)
}

#[derive(Clone, Debug)]
pub struct ConditionCase {
    pub name: String,
    pub expect_zero: bool,
    pub report: SolutionReport,
}

impl ConditionCase {
    pub fn passed(&self) -> bool {
        self.report.all_zero() == self.expect_zero
    }
}

#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub cases: Vec<ConditionCase>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.passed())
    }
}

/// `φ_j = ½a_j − Σ_i b_i ε_ikj x_k / r² + Σ_i s_i (−½δ_ij + x_i x_j / r²)`,
/// the spin part of `Σ a_i J_i + b_i Π_i + s_i S_i`.
fn superintegrable_phi(j: Coord) -> Expression {
    let inv_r2 = Expression::inverse_base(Base::R2, 1);
    let p = |n: String| Expression::param(&n);
    let mut out = p(format!("a{}", j.index() + 1)).mul(&Expression::ratio(1, 2));
    for i in Coord::ALL {
        for k in Coord::ALL {
            let eps = levi_civita(i.index(), k.index(), j.index());
            if eps != 0 {
                let t = p(format!("b{}", i.index() + 1))
                    .mul(&Expression::coord(k))
                    .mul(&inv_r2)
                    .mul(&Expression::int(eps));
                out = out.sub(&t);
            }
        }
        let s = p(format!("s{}", i.index() + 1));
        let mut t = Expression::coord(i).mul(&Expression::coord(j)).mul(&inv_r2);
        if i == j {
            t = t.sub(&Expression::ratio(1, 2));
        }
        out = out.add(&s.mul(&t));
    }
    out
}

fn spin_momentum_zero(ansatz: &Ansatz, b: &mut Bindings) {
    for mu in 1..4 {
        for k in Coord::ALL {
            b.set_function(ansatz.name(mu, Some(k)), Expression::zero());
        }
    }
    b.set_function(ansatz.name(0, None), Expression::zero());
}

/// Consistency of the spatial first-stage system with the two potential
/// classes: the inverse-square potential with translations kept, and an
/// arbitrary radial potential with rotations only. A steeper power serves
/// as the negative control.
pub fn specialize_conditions(system: &DeterminingSystem) -> Result<ConditionReport, DeterminingError> {
    if system.dim != Dim::Three || system.stage != Stage::First {
        return Err(DeterminingError::NotAnsatz("expected the spatial first-stage system".into()));
    }
    let ansatz = Ansatz::standard(Dim::Three);
    let mut cases = Vec::new();

    let mut inverse_square = Bindings::new();
    spin_momentum_zero(&ansatz, &mut inverse_square);
    for j in Coord::ALL {
        inverse_square.set_function(ansatz.name(j.index() + 1, None), superintegrable_phi(j));
    }
    let mut steep = inverse_square.clone();
    inverse_square.set_function(&ansatz.v1, Expression::inverse_base(Base::R2, 1));
    steep.set_function(&ansatz.v1, Expression::inverse_base(Base::R2, 2));
    cases.push(ConditionCase {
        name: "translations with V1 = 1/r^2".into(),
        expect_zero: true,
        report: check_solution(system, &inverse_square)?,
    });

    let mut radial = Bindings::new();
    spin_momentum_zero(&ansatz, &mut radial);
    for j in Coord::ALL {
        let a = Expression::param(&format!("a{}", j.index() + 1));
        radial.set_function(ansatz.name(j.index() + 1, None), a.mul(&Expression::ratio(1, 2)));
        radial.set_param(&format!("b{}", j.index() + 1), Expression::zero());
    }
    radial.set_function(&ansatz.v1, Expression::jet(Jet::radial(&ansatz.v1, Dim::Three)));
    cases.push(ConditionCase {
        name: "rotations with radial V1".into(),
        expect_zero: true,
        report: check_solution(system, &radial)?,
    });

    cases.push(ConditionCase {
        name: "translations with V1 = 1/r^4".into(),
        expect_zero: false,
        report: check_solution(system, &steep)?,
    });
    Ok(ConditionReport { cases })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::determining::generate;

    fn w_solution(ansatz: &Ansatz) -> Bindings {
        let w = Expression::param("w");
        let c = Expression::coord;
        let mut b = Bindings::new();
        let vals = [
            ((1, Coord::X), Expression::zero()),
            ((2, Coord::X), c(Coord::Z).mul(&w)),
            ((3, Coord::X), c(Coord::Y).mul(&w).neg()),
            ((1, Coord::Y), c(Coord::Z).mul(&w).neg()),
            ((2, Coord::Y), Expression::zero()),
            ((3, Coord::Y), c(Coord::X).mul(&w)),
            ((1, Coord::Z), c(Coord::Y).mul(&w)),
            ((2, Coord::Z), c(Coord::X).mul(&w).neg()),
            ((3, Coord::Z), Expression::zero()),
        ];
        for ((mu, k), v) in vals {
            b.set_function(ansatz.name(mu, Some(k)), v);
        }
        b
    }

    fn formal_v1(ansatz: &Ansatz, b: &mut Bindings) {
        b.set_function(&ansatz.v1, Expression::jet(Jet::free(&ansatz.v1, Dim::Three.all_coords())));
    }

    #[test]
    fn universal_spin_solution() {
        let ansatz = Ansatz::standard(Dim::Three);
        let sys = generate(Dim::Three, Stage::Second).unwrap();
        let spin = DeterminingSystem {
            equations: sys.block("spin").into_iter().cloned().collect(),
            ..sys
        };
        let mut b = w_solution(&ansatz);
        formal_v1(&ansatz, &mut b);
        assert!(check_solution(&spin, &b).unwrap().all_zero());
    }

    #[test]
    fn single_component_leaves_residual() {
        let ansatz = Ansatz::standard(Dim::Three);
        let sys = generate(Dim::Three, Stage::Second).unwrap();
        let spin = DeterminingSystem {
            equations: sys.block("spin").into_iter().cloned().collect(),
            ..sys
        };
        let mut b = Bindings::new();
        for mu in 1..4 {
            for k in Coord::ALL {
                b.set_function(ansatz.name(mu, Some(k)), Expression::zero());
            }
        }
        b.set_function("A1", Expression::one());
        formal_v1(&ansatz, &mut b);
        let report = check_solution(&spin, &b).unwrap();
        let v1 = Expression::jet(Jet::free("V1", Dim::Three.all_coords()));
        let target = Expression::int(2).mul(&Expression::coord(Coord::Z)).mul(&v1);
        assert!(report.nonzero().iter().any(|(_, r)| r.monic() == target.monic()));
    }

    #[test]
    fn unbound_functions_are_listed() {
        let sys = generate(Dim::Two, Stage::Second).unwrap();
        match check_solution(&sys, &Bindings::new()) {
            Err(DeterminingError::Unbound(names)) => assert!(names.contains(&"A0".to_string())),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn trivial_solution() {
        let sys = generate(Dim::Three, Stage::Second).unwrap();
        let mut b = Bindings::new();
        for n in sys.function_names() {
            b.set_function(&n, Expression::zero());
        }
        assert!(check_solution(&sys, &b).unwrap().all_zero());
    }

    #[test]
    fn solvability_conditions() {
        let sys = generate(Dim::Three, Stage::First).unwrap();
        let report = specialize_conditions(&sys).unwrap();
        for c in &report.cases {
            assert!(c.passed(), "{}: {:?}", c.name, c.report.nonzero());
        }
    }
}
