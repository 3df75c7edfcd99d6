//! The Hamiltonians and integrals of motion under study, addressable by
//! stable identifiers, plus gauge action on two-dimensional potentials.

mod gauge;
mod probe;

pub use gauge::{apply_gauge, gauge_invariant};
pub use probe::{numeric_probe, ProbeConfig, ProbeReport};

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::coeffring::{Base, Bindings, Coord, CoordSet, Dim, Expression, GaussianRational, Jet};
use crate::diffop::{levi_civita, symmetrize, ScalarDiffOp};
use crate::spinop::PauliOperator;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SystemId {
    Superintegrable2d,
    Radial2d,
    Cartesian2d,
    Superintegrable3d,
    Spherical3d,
}

impl SystemId {
    pub const ALL: [SystemId; 5] = [
        SystemId::Superintegrable2d,
        SystemId::Radial2d,
        SystemId::Cartesian2d,
        SystemId::Superintegrable3d,
        SystemId::Spherical3d,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SystemId::Superintegrable2d => "2d-superintegrable",
            SystemId::Radial2d => "2d-radial",
            SystemId::Cartesian2d => "2d-cartesian",
            SystemId::Superintegrable3d => "3d-superintegrable",
            SystemId::Spherical3d => "3d-spherical",
        }
    }

    pub fn dim(self) -> Dim {
        match self {
            SystemId::Superintegrable3d | SystemId::Spherical3d => Dim::Three,
            _ => Dim::Two,
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SystemId {
    type Err = String;

    fn from_str(s: &str) -> Result<SystemId, String> {
        SystemId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| {
                let known: Vec<_> = SystemId::ALL.iter().map(|id| id.as_str()).collect();
                format!("unknown system `{s}` (known: {})", known.join(", "))
            })
    }
}

/// Whether construction asserts `[H, X] = 0` for every listed integral.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Mode {
    Verified,
    Raw,
}

/// `ħ = 1`, or `ħ` kept as the parameter `hbar`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum HbarMode {
    Off,
    Tracked,
}

impl HbarMode {
    pub fn value(self) -> Expression {
        match self {
            HbarMode::Off => Expression::one(),
            HbarMode::Tracked => Expression::param("hbar"),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum CatalogError {
    #[error("{system}: [H, {integral}] has nonzero coefficient {coefficient} at s{sigma} {beta}")]
    NotAnIntegral {
        system: String,
        integral: String,
        sigma: usize,
        beta: String,
        coefficient: String,
    },
}

#[derive(Clone, Debug)]
pub struct SystemSpec {
    pub name: String,
    pub dim: Dim,
    pub hamiltonian: PauliOperator,
    pub integrals: Vec<(String, PauliOperator)>,
    pub params: Vec<String>,
    pub v0: Expression,
    pub v1: Expression,
}

/// Outcome of `[H, X]` for one integral.
#[derive(Clone, Debug)]
pub struct IntegralCheck {
    pub name: String,
    pub residual: PauliOperator,
}

impl IntegralCheck {
    pub fn passed(&self) -> bool {
        self.residual.is_zero()
    }

    /// Either `0` or one offending `(σ, ∂, coefficient)` triple.
    pub fn detail(&self) -> String {
        match self.residual.first_nonzero() {
            None => "0".to_string(),
            Some((m, b, c)) => format!("nonzero coefficient at s{m} {b}: {c}"),
        }
    }
}

impl SystemSpec {
    pub fn integral(&self, name: &str) -> Option<&PauliOperator> {
        self.integrals.iter().find(|(n, _)| n == name).map(|(_, x)| x)
    }

    pub fn check_integral(&self, name: &str, x: &PauliOperator) -> IntegralCheck {
        IntegralCheck {
            name: name.to_string(),
            residual: self.hamiltonian.commutator(x),
        }
    }

    pub fn check_integrals(&self) -> Vec<IntegralCheck> {
        self.integrals
            .iter()
            .map(|(n, x)| self.check_integral(n, x))
            .collect()
    }

    /// `σ₃ X` for every listed integral.
    pub fn check_sigma3_doubling(&self) -> Vec<IntegralCheck> {
        let s3 = PauliOperator::sigma(self.dim, 3);
        self.integrals
            .iter()
            .map(|(n, x)| self.check_integral(&format!("s3*{n}"), &s3.mul(x)))
            .collect()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hamiltonian.is_hermitian()
    }

    /// Adds `extra` to `V₀` without re-verifying.
    pub fn with_v0_extra(&self, extra: &Expression) -> SystemSpec {
        let mut out = self.clone();
        out.v0 = self.v0.add(extra);
        out.hamiltonian = self
            .hamiltonian
            .add(&PauliOperator::function(self.dim, 0, extra.clone()));
        out
    }

    fn verified(self, mode: Mode) -> Result<SystemSpec, CatalogError> {
        if mode == Mode::Verified {
            for check in self.check_integrals() {
                if let Some((sigma, beta, c)) = check.residual.first_nonzero() {
                    return Err(CatalogError::NotAnIntegral {
                        system: self.name.clone(),
                        integral: check.name,
                        sigma,
                        beta: beta.to_string(),
                        coefficient: c.to_string(),
                    });
                }
            }
        }
        Ok(self)
    }
}

fn x() -> Expression {
    Expression::coord(Coord::X)
}

fn y() -> Expression {
    Expression::coord(Coord::Y)
}

fn half() -> Expression {
    Expression::ratio(1, 2)
}

fn inv_r2() -> Expression {
    Expression::inverse_base(Base::R2, 1)
}

/// `−½ħ²Δ σ₀ + V₀ σ₀`
fn kinetic_plus_v0(dim: Dim, v0: &Expression, hbar: &Expression) -> PauliOperator {
    let k = hbar.pow(2).mul(&Expression::ratio(-1, 2));
    PauliOperator::scalar(ScalarDiffOp::laplacian(dim).scale(&k).add(&ScalarDiffOp::scalar(dim, v0.clone())))
}

/// `−½Δ + V₀ + V₁σ₃L₃ + ½σ₃(L₃V₁)` in the plane.
pub fn hamiltonian_2d(v0: &Expression, v1: &Expression, hbar: &Expression) -> PauliOperator {
    let dim = Dim::Two;
    let l3 = ScalarDiffOp::angular_momentum(dim, Coord::Z, hbar);
    let spin_orbit = l3
        .scale(v1)
        .add(&ScalarDiffOp::scalar(dim, l3.apply(v1).mul(&half())));
    kinetic_plus_v0(dim, v0, hbar).add(&PauliOperator::component(3, spin_orbit))
}

/// `−½Δ + V₀ + ½{V₁, σ·L}` in space.
pub fn hamiltonian_3d(v0: &Expression, v1: &Expression, hbar: &Expression) -> PauliOperator {
    let dim = Dim::Three;
    let mut h = kinetic_plus_v0(dim, v0, hbar);
    for k in Coord::ALL {
        let lk = ScalarDiffOp::angular_momentum(dim, k, hbar);
        h = h.add(&PauliOperator::component(k.index() + 1, symmetrize(v1, &lk)));
    }
    h
}

/// `I ± σ₃`
fn i_pm(sign: i64) -> PauliOperator {
    PauliOperator::identity(Dim::Two).add(&PauliOperator::sigma(Dim::Two, 3).scale(&Expression::int(sign)))
}

/// The planar Hamiltonian with `V₀ = ½γ²(x²+y²)`, `V₁ = γ` and its eight
/// integrals `L±, X±, Y±, I±`.
pub fn superintegrable_2d(gamma: &Expression, hbar: HbarMode, mode: Mode) -> Result<SystemSpec, CatalogError> {
    let dim = Dim::Two;
    let h = hbar.value();
    let v0 = gamma.pow(2).mul(&half()).mul(&Expression::rho2());
    let v1 = gamma.clone();
    let l3 = ScalarDiffOp::angular_momentum(dim, Coord::Z, &h);
    let ih = Expression::i().mul(&h);
    let mut integrals = Vec::new();
    for (sign, tag) in [(1, "+"), (-1, "-")] {
        let s = Expression::int(sign);
        let ipm = i_pm(sign);
        // X± = (iħ∂x ∓ γy)(I ± σ₃), Y± = (iħ∂y ± γx)(I ± σ₃)
        let xop = ScalarDiffOp::partial(dim, Coord::X)
            .scale(&ih)
            .add(&ScalarDiffOp::scalar(dim, s.mul(gamma).mul(&y()).neg()));
        let yop = ScalarDiffOp::partial(dim, Coord::Y)
            .scale(&ih)
            .add(&ScalarDiffOp::scalar(dim, s.mul(gamma).mul(&x())));
        integrals.push((format!("L{tag}"), PauliOperator::scalar(l3.clone()).mul(&ipm)));
        integrals.push((format!("X{tag}"), PauliOperator::scalar(xop).mul(&ipm)));
        integrals.push((format!("Y{tag}"), PauliOperator::scalar(yop).mul(&ipm)));
        integrals.push((format!("I{tag}"), ipm));
    }
    let mut params: Vec<String> = gamma.params().iter().map(|p| p.to_string()).collect();
    if hbar == HbarMode::Tracked {
        params.push("hbar".into());
    }
    SystemSpec {
        name: SystemId::Superintegrable2d.to_string(),
        dim,
        hamiltonian: hamiltonian_2d(&v0, &v1, &h),
        integrals,
        params,
        v0,
        v1,
    }
    .verified(mode)
}

/// Formal radial `V₀(ρ)`, `V₁(ρ)` with `X = (ω₀ + ω₁σ₃)L₃`.
pub fn radial_2d(hbar: HbarMode, mode: Mode) -> Result<SystemSpec, CatalogError> {
    let dim = Dim::Two;
    let h = hbar.value();
    let v0 = Expression::jet(Jet::radial("V0", dim));
    let v1 = Expression::jet(Jet::radial("V1", dim));
    let l3 = ScalarDiffOp::angular_momentum(dim, Coord::Z, &h);
    let w = PauliOperator::function(dim, 0, Expression::param("omega0"))
        .add(&PauliOperator::function(dim, 3, Expression::param("omega1")));
    let integral = w.mul(&PauliOperator::scalar(l3));
    let mut params = vec!["omega0".to_string(), "omega1".to_string()];
    if hbar == HbarMode::Tracked {
        params.push("hbar".into());
    }
    SystemSpec {
        name: SystemId::Radial2d.to_string(),
        dim,
        hamiltonian: hamiltonian_2d(&v0, &v1, &h),
        integrals: vec![("X".into(), integral)],
        params,
        v0,
        v1,
    }
    .verified(mode)
}

/// Formal `V₁(x)`, `F(x)` with `V₀ = ½y²V₁² + F` and `X = −iħ∂y − σ₃W`,
/// `W' = V₁`.
pub fn cartesian_2d(hbar: HbarMode, mode: Mode) -> Result<SystemSpec, CatalogError> {
    let dim = Dim::Two;
    let h = hbar.value();
    let v1 = Expression::jet(Jet::free("V1", CoordSet::X));
    let f = Expression::jet(Jet::free("F", CoordSet::X));
    let w = Expression::jet(Jet::antiderivative("W", "V1"));
    let v0 = y().pow(2).mul(&v1.pow(2)).mul(&half()).add(&f);
    let integral = PauliOperator::scalar(ScalarDiffOp::momentum(dim, Coord::Y, &h))
        .sub(&PauliOperator::function(dim, 3, w));
    let mut params = Vec::new();
    if hbar == HbarMode::Tracked {
        params.push("hbar".into());
    }
    SystemSpec {
        name: SystemId::Cartesian2d.to_string(),
        dim,
        hamiltonian: hamiltonian_2d(&v0, &v1, &h),
        integrals: vec![("X".into(), integral)],
        params,
        v0,
        v1,
    }
    .verified(mode)
}

/// `J_k = L_k + ½ħσ_k`
pub fn total_angular_momentum(k: Coord, hbar: &Expression) -> PauliOperator {
    let dim = Dim::Three;
    PauliOperator::scalar(ScalarDiffOp::angular_momentum(dim, k, hbar))
        .add(&PauliOperator::function(dim, k.index() + 1, hbar.mul(&half())))
}

/// `Π_i = p_i − (ħ/r²) ε_ikl x_k σ_l`
pub fn modified_momentum(i: Coord, hbar: &Expression) -> PauliOperator {
    let dim = Dim::Three;
    let mut out = PauliOperator::scalar(ScalarDiffOp::momentum(dim, i, hbar));
    for k in Coord::ALL {
        for l in Coord::ALL {
            let eps = levi_civita(i.index(), k.index(), l.index());
            if eps == 0 {
                continue;
            }
            let c = hbar
                .mul(&inv_r2())
                .mul(&Expression::coord(k))
                .scale(&GaussianRational::from_int(-eps));
            out = out.add(&PauliOperator::function(dim, l.index() + 1, c));
        }
    }
    out
}

/// `S_i = ħ(−½σ_i + x_i (r·σ)/r²)`
pub fn modified_spin(i: Coord, hbar: &Expression) -> PauliOperator {
    let dim = Dim::Three;
    let mut out = PauliOperator::function(dim, i.index() + 1, hbar.mul(&Expression::ratio(-1, 2)));
    for j in Coord::ALL {
        let c = hbar
            .mul(&Expression::coord(i))
            .mul(&Expression::coord(j))
            .mul(&inv_r2());
        out = out.add(&PauliOperator::function(dim, j.index() + 1, c));
    }
    out
}

/// `V₀ = ħ²/r²`, `V₁ = ħ/r²` with the nine integrals `J_i, Π_i, S_i`.
pub fn superintegrable_3d(hbar: HbarMode, mode: Mode) -> Result<SystemSpec, CatalogError> {
    let h = hbar.value();
    let v0 = h.pow(2).mul(&inv_r2());
    let v1 = h.mul(&inv_r2());
    let mut integrals = Vec::new();
    for (k, c) in Coord::ALL.into_iter().enumerate() {
        integrals.push((format!("J{}", k + 1), total_angular_momentum(c, &h)));
    }
    for (k, c) in Coord::ALL.into_iter().enumerate() {
        integrals.push((format!("Pi{}", k + 1), modified_momentum(c, &h)));
    }
    for (k, c) in Coord::ALL.into_iter().enumerate() {
        integrals.push((format!("S{}", k + 1), modified_spin(c, &h)));
    }
    let params = match hbar {
        HbarMode::Off => vec![],
        HbarMode::Tracked => vec!["hbar".to_string()],
    };
    SystemSpec {
        name: SystemId::Superintegrable3d.to_string(),
        dim: Dim::Three,
        hamiltonian: hamiltonian_3d(&v0, &v1, &h),
        integrals,
        params,
        v0,
        v1,
    }
    .verified(mode)
}

/// Formal radial `V₀(r)`, `V₁(r)` with the total angular momentum.
pub fn spherical_3d(hbar: HbarMode, mode: Mode) -> Result<SystemSpec, CatalogError> {
    let dim = Dim::Three;
    let h = hbar.value();
    let v0 = Expression::jet(Jet::radial("V0", dim));
    let v1 = Expression::jet(Jet::radial("V1", dim));
    let integrals = Coord::ALL
        .into_iter()
        .enumerate()
        .map(|(k, c)| (format!("J{}", k + 1), total_angular_momentum(c, &h)))
        .collect();
    let params = match hbar {
        HbarMode::Off => vec![],
        HbarMode::Tracked => vec!["hbar".to_string()],
    };
    SystemSpec {
        name: SystemId::Spherical3d.to_string(),
        dim,
        hamiltonian: hamiltonian_3d(&v0, &v1, &h),
        integrals,
        params,
        v0,
        v1,
    }
    .verified(mode)
}

/// Builds a catalog system with `γ` as the symbolic parameter `gamma`.
pub fn build(id: SystemId, hbar: HbarMode, mode: Mode) -> Result<SystemSpec, CatalogError> {
    match id {
        SystemId::Superintegrable2d => superintegrable_2d(&Expression::param("gamma"), hbar, mode),
        SystemId::Radial2d => radial_2d(hbar, mode),
        SystemId::Cartesian2d => cartesian_2d(hbar, mode),
        SystemId::Superintegrable3d => superintegrable_3d(hbar, mode),
        SystemId::Spherical3d => spherical_3d(hbar, mode),
    }
}

/// Binds `V₀`, `V₁` of a formal system to concrete values.
pub fn specialize(spec: &SystemSpec, bindings: &Bindings) -> Result<SystemSpec, crate::coeffring::ExprError> {
    let mut out = spec.clone();
    out.hamiltonian = spec.hamiltonian.substitute(bindings)?;
    out.v0 = spec.v0.substitute(bindings)?;
    out.v1 = spec.v1.substitute(bindings)?;
    out.integrals = spec
        .integrals
        .iter()
        .map(|(n, x)| Ok((n.clone(), x.substitute(bindings)?)))
        .collect::<Result<_, crate::coeffring::ExprError>>()?;
    Ok(out)
}
