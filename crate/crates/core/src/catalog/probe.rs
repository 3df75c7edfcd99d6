//! Randomized exact check of `[H, X] = 0` that never composes operators:
//! `H(Xψ)` and `X(Hψ)` are computed by application and compared pointwise.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::SystemSpec;
use crate::coeffring::{Bindings, Coord, Dim, ExprError, Expression, GaussianRational, JetRule};
use crate::diffop::MultiIndex;
use crate::spinop::{PauliOperator, Spinor};

#[derive(Clone, Copy, Debug)]
pub struct ProbeConfig {
    pub spinors: usize,
    pub points: usize,
    pub max_degree: u8,
    pub seed: u64,
}

impl Default for ProbeConfig {
    fn default() -> ProbeConfig {
        ProbeConfig {
            spinors: 20,
            points: 100,
            max_degree: 3,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub integral: String,
    pub evaluations: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<String>,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.mismatches == 0 && self.evaluations > 0
    }
}

fn small_rational(rng: &mut ChaCha8Rng, nonzero: bool) -> GaussianRational {
    loop {
        let n: i64 = rng.gen_range(-7..=7);
        if nonzero && n == 0 {
            continue;
        }
        let d: i64 = rng.gen_range(1..=4);
        return GaussianRational::ratio(n, d);
    }
}

fn small_complex(rng: &mut ChaCha8Rng) -> GaussianRational {
    let re = small_rational(rng, false);
    let im = small_rational(rng, false);
    GaussianRational::new(re.re().clone(), im.re().clone())
}

fn monomial(beta: MultiIndex) -> Expression {
    Coord::ALL.iter().fold(Expression::one(), |acc, &c| {
        acc.mul(&Expression::coord(c).pow(beta.0[c.index()] as u32))
    })
}

/// Random polynomial of degree at most `deg` in the coordinates of `dim`.
pub fn random_polynomial(rng: &mut ChaCha8Rng, dim: Dim, deg: u8, complex: bool) -> Expression {
    let mut out = Expression::zero();
    for k in 0..=deg {
        for beta in MultiIndex::of_order(dim, k) {
            let c = if complex {
                small_complex(rng)
            } else {
                small_rational(rng, false)
            };
            out = out.add(&monomial(beta).mul(&Expression::constant(c)));
        }
    }
    out
}

fn univariate(coeffs: &[GaussianRational], t: &Expression) -> Expression {
    coeffs.iter().enumerate().fold(Expression::zero(), |acc, (k, c)| {
        acc.add(&t.pow(k as u32).mul(&Expression::constant(c.clone())))
    })
}

fn formal_functions(ops: &[&PauliOperator]) -> BTreeMap<Arc<str>, JetRule> {
    let mut out = BTreeMap::new();
    for op in ops {
        for (_, _, c) in op.triples() {
            for j in c.jets() {
                out.entry(j.name.clone()).or_insert(j.rule.clone());
            }
        }
    }
    out
}

/// Random polynomial values for every formal function and parameter that
/// appears in the system; derivative rules are honoured.
pub fn random_specialization(spec: &SystemSpec, rng: &mut ChaCha8Rng) -> Bindings {
    let mut ops: Vec<&PauliOperator> = vec![&spec.hamiltonian];
    ops.extend(spec.integrals.iter().map(|(_, x)| x));
    let funcs = formal_functions(&ops);
    let mut b = Bindings::new();
    let mut x_coeffs: BTreeMap<Arc<str>, Vec<GaussianRational>> = BTreeMap::new();
    let x = Expression::coord(Coord::X);
    for (name, rule) in &funcs {
        match rule {
            JetRule::Free(deps) if deps.iter().eq([Coord::X]) => {
                let cs: Vec<_> = (0..3).map(|_| small_rational(rng, false)).collect();
                b.set_function(name, univariate(&cs, &x));
                x_coeffs.insert(name.clone(), cs);
            }
            JetRule::Free(deps) => {
                let mut v = Expression::zero();
                for k in 0..=2u8 {
                    for beta in MultiIndex::of_order(Dim::Three, k) {
                        if Coord::ALL.iter().any(|c| beta.0[c.index()] > 0 && !deps.contains(*c)) {
                            continue;
                        }
                        v = v.add(&monomial(beta).mul(&Expression::constant(small_rational(rng, false))));
                    }
                }
                b.set_function(name, v);
            }
            JetRule::Radial(dim) => {
                let u = dim
                    .coords()
                    .iter()
                    .fold(Expression::zero(), |acc, &c| acc.add(&Expression::coord(c).pow(2)));
                let cs: Vec<_> = (0..3).map(|_| small_rational(rng, false)).collect();
                b.set_function(name, univariate(&cs, &u));
            }
            JetRule::Antiderivative(_) => {}
        }
    }
    for (name, rule) in &funcs {
        if let JetRule::Antiderivative(of) = rule {
            let cs = x_coeffs.get(of).cloned().unwrap_or_default();
            let mut w = Expression::constant(small_rational(rng, false));
            for (k, c) in cs.iter().enumerate() {
                let k1 = GaussianRational::ratio(1, k as i64 + 1);
                w = w.add(&x.pow(k as u32 + 1).mul(&Expression::constant(c * &k1)));
            }
            b.set_function(name, w);
        }
    }
    for p in &spec.params {
        b.set_param(p, Expression::constant(small_rational(rng, true)));
    }
    b
}

fn random_point(rng: &mut ChaCha8Rng) -> BTreeMap<Coord, GaussianRational> {
    Coord::ALL
        .into_iter()
        .map(|c| (c, small_rational(rng, true)))
        .collect()
}

fn value(e: &Expression, point: &BTreeMap<Coord, GaussianRational>) -> Result<GaussianRational, ExprError> {
    e.evaluate(point, &BTreeMap::new())
}

/// One report per listed integral of `spec`.
/// Evaluations, mismatches and the first mismatch for one spinor.
type Tally = (usize, usize, Option<String>);

pub fn numeric_probe(spec: &SystemSpec, config: &ProbeConfig) -> Result<Vec<ProbeReport>, ExprError> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let bindings = random_specialization(spec, &mut rng);
    let h = spec.hamiltonian.substitute(&bindings)?;
    let points: Vec<_> = (0..config.points).map(|_| random_point(&mut rng)).collect();
    let spinors: Vec<Spinor> = (0..config.spinors)
        .map(|_| {
            Spinor::new(
                random_polynomial(&mut rng, spec.dim, config.max_degree, true),
                random_polynomial(&mut rng, spec.dim, config.max_degree, true),
            )
        })
        .collect();
    let h_psi: Vec<Spinor> = spinors.par_iter().map(|s| h.apply_to_spinor(s)).collect();
    let mut out = Vec::new();
    for (name, x) in &spec.integrals {
        let x = x.substitute(&bindings)?;
        let per_spinor: Vec<Result<Tally, ExprError>> = spinors
            .par_iter()
            .zip(&h_psi)
            .map(|(psi, hpsi)| {
                let hx = h.apply_to_spinor(&x.apply_to_spinor(psi));
                let xh = x.apply_to_spinor(hpsi);
                let (mut evaluations, mut mismatches, mut first) = (0, 0, None);
                for p in &points {
                    for k in 0..2 {
                        let a = value(&hx.0[k], p)?;
                        let b = value(&xh.0[k], p)?;
                        evaluations += 1;
                        if a != b {
                            mismatches += 1;
                            first.get_or_insert_with(|| {
                                let at: Vec<String> = p.iter().map(|(c, v)| format!("{}={v}", c.name())).collect();
                                format!("component {k} at ({}): {a} != {b}", at.join(", "))
                            });
                        }
                    }
                }
                Ok((evaluations, mismatches, first))
            })
            .collect();
        let mut report = ProbeReport {
            integral: name.clone(),
            evaluations: 0,
            mismatches: 0,
            first_mismatch: None,
        };
        for r in per_spinor {
            let (e, m, f) = r?;
            report.evaluations += e;
            report.mismatches += m;
            if report.first_mismatch.is_none() {
                report.first_mismatch = f;
            }
        }
        out.push(report);
    }
    Ok(out)
}
