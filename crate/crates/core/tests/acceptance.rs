//! End-to-end acceptance run. Prints one line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use spinorbit::catalog::{
    apply_gauge, build, gauge_invariant, numeric_probe, superintegrable_2d, HbarMode, Mode, ProbeConfig, SystemId,
    SystemSpec,
};
use spinorbit::coeffring::{Base, Bindings, Context, Coord, Dim, Expression, GaussianRational, JetRule};
use spinorbit::determining::{
    check_solution, generate, match_paper, reference_block, references_for, Ansatz, DeterminingSystem, Stage,
};
use spinorbit::diffop::{MultiIndex, ScalarDiffOp};
use spinorbit::liealg::{casimir_check, planar_generators, table_and_relations, verify_relations};
use spinorbit::spinop::PauliOperator;

const PLANAR_BUDGET: Duration = Duration::from_secs(10);
const SPATIAL_BUDGET: Duration = Duration::from_secs(60);
const PROBE_SPINORS: usize = 20;
const PROBE_POINTS: usize = 100;
const COMPOSE_INSTANCES: usize = 200;
const GAUGE_INSTANCES: usize = 50;
const SEED: u64 = 0x5eed;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn failures(spec: &SystemSpec, checks: &[spinorbit::catalog::IntegralCheck]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("{} [H, {}]: {}", spec.name, c.name, c.detail()))
        .collect()
}

fn superintegrable_plane() -> Outcome {
    let start = Instant::now();
    let spec = build(SystemId::Superintegrable2d, HbarMode::Off, Mode::Raw).unwrap();
    let checks = spec.check_integrals();
    let elapsed = start.elapsed();
    let bad = failures(&spec, &checks);
    let ok = checks.len() == 8 && bad.is_empty() && elapsed < PLANAR_BUDGET;
    outcome(ok, format!("{} integrals, {} nonzero, {elapsed:.2?} (budget {PLANAR_BUDGET:?}) {}", checks.len(), bad.len(), bad.join("; ")))
}

fn superintegrable_space() -> Outcome {
    let start = Instant::now();
    let spec = build(SystemId::Superintegrable3d, HbarMode::Off, Mode::Raw).unwrap();
    let checks = spec.check_integrals();
    let elapsed = start.elapsed();
    let bad = failures(&spec, &checks);
    let ok = checks.len() == 9 && bad.is_empty() && elapsed < SPATIAL_BUDGET;
    outcome(ok, format!("{} integrals, {} nonzero, {elapsed:.2?} (budget {SPATIAL_BUDGET:?}) {}", checks.len(), bad.len(), bad.join("; ")))
}

/// `[X±, Y±]` expanded directly and compared with `±4iγħ I±`.
fn cocycle_by_expansion(hbar: HbarMode) -> bool {
    let gens = planar_generators(hbar).unwrap();
    let h = hbar.value();
    [("+", 4), ("-", -4)].into_iter().all(|(s, k)| {
        let x = gens.get(&format!("X{s}")).unwrap();
        let y = gens.get(&format!("Y{s}")).unwrap();
        let i = gens.get(&format!("I{s}")).unwrap();
        let c = Expression::param("gamma").mul(&h).mul(&Expression::i()).mul(&Expression::int(k));
        x.commutator(y) == i.scale(&c)
    })
}

fn algebra_structure() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (two_d, label) in [(true, "planar"), (false, "spatial")] {
        for hbar in [HbarMode::Off, HbarMode::Tracked] {
            let (table, rels) = table_and_relations(two_d, hbar).unwrap();
            let report = verify_relations(&table, &rels);
            let failed: Vec<_> = report.results.iter().filter(|r| !r.passed).map(|r| r.label.clone()).collect();
            let good = table.is_closed()
                && table.antisymmetry_violations().is_empty()
                && table.jacobi_violations().is_empty()
                && failed.is_empty()
                && report.surplus.is_empty();
            ok &= good;
            notes.push(format!("{label}/{hbar:?}: {} relations{}", report.results.len(), if good { "" } else { " FAILED" }));
            for f in failed {
                notes.push(format!("failed {f}"));
            }
        }
    }
    for hbar in [HbarMode::Off, HbarMode::Tracked] {
        let c = cocycle_by_expansion(hbar);
        ok &= c;
        notes.push(format!("cocycle by expansion {hbar:?}: {c}"));
    }
    outcome(ok, notes.join(", "))
}

fn casimirs() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for hbar in [HbarMode::Off, HbarMode::Tracked] {
        let r = casimir_check(hbar).unwrap();
        let bad: Vec<_> = r.checks.iter().filter(|(_, x)| !x.is_zero()).map(|(n, _)| n.clone()).collect();
        ok &= r.checks.len() == 18 && bad.is_empty();
        notes.push(format!("{hbar:?}: {} identities, nonzero {bad:?}", r.checks.len()));
    }
    outcome(ok, notes.join(", "))
}

fn determining_systems() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let mut planar_total = 0;
    for dim in [Dim::Two, Dim::Three] {
        for stage in Stage::ALL {
            let sys = generate(dim, stage).unwrap();
            if dim == Dim::Two {
                planar_total += sys.len();
            }
            let counts = sys.block_counts();
            let want: &[(&str, usize)] = match (dim, stage) {
                (Dim::Three, Stage::Second) => &[("spin", 18)],
                (Dim::Three, Stage::First) => &[("phi", 9), ("phi0", 3)],
                (Dim::Three, Stage::Zeroth) => &[("zeroth", 8)],
                _ => &[],
            };
            for (block, n) in want {
                let got = counts.get(*block).copied().unwrap_or(0);
                ok &= got == *n;
                notes.push(format!("3d {stage} {block} {got}"));
            }
            for name in references_for(dim, stage) {
                let reference = reference_block(name).unwrap();
                let exprs: Vec<Expression> = sys
                    .equations
                    .iter()
                    .filter(|e| reference.blocks.contains(&e.block.as_str()))
                    .map(|e| e.expr.clone())
                    .collect();
                let m = match_paper(&exprs, &reference.equations);
                ok &= m.passed();
                let how = if m.bijection {
                    "bijection"
                } else if m.span_equal {
                    "equal spans"
                } else {
                    "unmatched"
                };
                notes.push(format!("{name} {how}"));
            }
        }
    }
    ok &= planar_total == 12;
    notes.insert(0, format!("2d total {planar_total}"));
    outcome(ok, notes.join(", "))
}

/// Coefficient of `σ_μ p_k` set to `−w ε_{μkl} x_l`, with `V₁` formal.
fn universal_solution() -> Outcome {
    let ansatz = Ansatz::standard(Dim::Three);
    let sys = generate(Dim::Three, Stage::Second).unwrap();
    let spin = DeterminingSystem {
        equations: sys.block("spin").into_iter().cloned().collect(),
        ..sys
    };
    let w = Expression::param("w");
    let c = Expression::coord;
    let mut b = Bindings::new();
    let table = [
        [Expression::zero(), c(Coord::Z).mul(&w).neg(), c(Coord::Y).mul(&w)],
        [c(Coord::Z).mul(&w), Expression::zero(), c(Coord::X).mul(&w).neg()],
        [c(Coord::Y).mul(&w).neg(), c(Coord::X).mul(&w), Expression::zero()],
    ];
    for (mu, row) in table.iter().enumerate() {
        for (k, v) in Coord::ALL.into_iter().zip(row) {
            b.set_function(ansatz.name(mu + 1, Some(k)), v.clone());
        }
    }
    let v1 = Context::new(Dim::Three).function(&ansatz.v1).parse(&ansatz.v1).unwrap();
    b.set_function(&ansatz.v1, v1);
    let report = check_solution(&spin, &b).unwrap();
    let bad = report.nonzero();
    outcome(
        bad.is_empty() && spin.len() == 18,
        format!("{} equations, {} nonzero residuals", spin.len(), bad.len()),
    )
}

fn integrable_families() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for id in [SystemId::Radial2d, SystemId::Cartesian2d, SystemId::Spherical3d] {
        for hbar in [HbarMode::Off, HbarMode::Tracked] {
            let spec = build(id, hbar, Mode::Raw).unwrap();
            let formal = spec.v0.jets().len() + spec.v1.jets().len() > 0;
            let checks = spec.check_integrals();
            let bad = failures(&spec, &checks);
            ok &= formal && bad.is_empty();
            notes.push(format!("{id}/{hbar:?} {} integrals, {} nonzero", checks.len(), bad.len()));
        }
    }
    let cart = build(SystemId::Cartesian2d, HbarMode::Off, Mode::Raw).unwrap();
    let x = cart.integral("X").unwrap();
    let antideriv = x.triples().any(|(_, _, c)| c.jets().iter().any(|j| matches!(j.rule, JetRule::Antiderivative(_))));
    ok &= antideriv;
    notes.push(format!("antiderivative in X: {antideriv}"));
    outcome(ok, notes.join(", "))
}

fn gauge() -> Outcome {
    let ctx = Context::new(Dim::Two).params(["gamma", "c"]).function("V0").function("V1");
    let xi = Expression::coord(Coord::Y).mul(&Expression::inverse_base(Base::Coord(Coord::X), 1));
    let (v0, v1) = (ctx.parse("V0").unwrap(), ctx.parse("V1").unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut exact = 0;
    let mut invariant = 0;
    for _ in 0..GAUGE_INSTANCES {
        let mut a = Expression::zero();
        for k in 0..rng.gen_range(1..=4u32) {
            let q = GaussianRational::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
            a = a.add(&xi.pow(k).mul(&Expression::constant(q)));
        }
        let (v0t, v1t) = apply_gauge(&v0, &v1, &a);
        // Ṽ₁ = V₁ + α̇/x², Ṽ₀ = V₀ + (1 + y²/x²)(α̇²/(2x²) + α̇V₁), assembled from text
        let text = format!("({a})");
        let want_v1 = ctx.parse(&format!("V1 + {text}/x^2")).unwrap();
        let want_v0 = ctx.parse(&format!("V0 + (1 + y^2/x^2)*({text}^2/(2*x^2) + {text}*V1)")).unwrap();
        exact += usize::from(v0t == want_v0 && v1t == want_v1);
        invariant += usize::from(gauge_invariant(&v0t, &v1t) == gauge_invariant(&v0, &v1));
    }
    let spec = superintegrable_2d(&Expression::param("gamma"), HbarMode::Off, Mode::Raw).unwrap();
    let zero = gauge_invariant(&spec.v0, &spec.v1).is_zero();
    outcome(
        exact == GAUGE_INSTANCES && invariant == GAUGE_INSTANCES && zero,
        format!("exact {exact}/{GAUGE_INSTANCES}, invariant {invariant}/{GAUGE_INSTANCES}, superintegrable invariant zero: {zero}"),
    )
}

fn classical_limit() -> Outcome {
    let ctx = Context::new(Dim::Three).param("hbar");
    let spec = build(SystemId::Superintegrable3d, HbarMode::Tracked, Mode::Raw).unwrap();
    let potentials = spec.v0 == ctx.parse("hbar^2/(x^2+y^2+z^2)").unwrap() && spec.v1 == ctx.parse("hbar/(x^2+y^2+z^2)").unwrap();
    let at_zero = Bindings::new().param("hbar", Expression::zero());
    let vanish = spec.v0.substitute(&at_zero).unwrap().is_zero() && spec.v1.substitute(&at_zero).unwrap().is_zero();
    let checks = spec.check_integrals();
    let bad = failures(&spec, &checks);
    let mut planar_free = true;
    for id in [SystemId::Superintegrable2d, SystemId::Radial2d, SystemId::Cartesian2d] {
        let s = build(id, HbarMode::Tracked, Mode::Raw).unwrap();
        planar_free &= [&s.v0, &s.v1].iter().all(|v| !v.params().iter().any(|p| &**p == "hbar"));
    }
    outcome(
        potentials && vanish && bad.is_empty() && checks.len() == 9 && planar_free,
        format!(
            "potentials {potentials}, vanish at hbar = 0 {vanish}, {} of {} commutators nonzero, planar potentials hbar-free {planar_free}",
            bad.len(),
            checks.len()
        ),
    )
}

fn random_poly(rng: &mut ChaCha8Rng, dim: Dim, deg: u8) -> Expression {
    let mut out = Expression::zero();
    for k in 0..=deg {
        for beta in MultiIndex::of_order(dim, k) {
            let q = GaussianRational::ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3));
            let q = &q + &(&GaussianRational::from_int(rng.gen_range(-1..=1)) * &GaussianRational::i());
            let m = dim
                .coords()
                .iter()
                .fold(Expression::one(), |acc, &c| acc.mul(&Expression::coord(c).pow(beta.0[c.index()] as u32)));
            out = out.add(&m.mul(&Expression::constant(q)));
        }
    }
    out
}

fn random_op(rng: &mut ChaCha8Rng, dim: Dim) -> ScalarDiffOp {
    let mut out = ScalarDiffOp::zero(dim);
    for k in 0..=2 {
        for beta in MultiIndex::of_order(dim, k) {
            if rng.gen_bool(0.4) {
                out = out.add(&ScalarDiffOp::term(dim, beta, random_poly(rng, dim, 2)));
            }
        }
    }
    out
}

fn independent_oracle() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let config = ProbeConfig {
        spinors: PROBE_SPINORS,
        points: PROBE_POINTS,
        seed: SEED,
        ..ProbeConfig::default()
    };
    for id in SystemId::ALL {
        let spec = build(id, HbarMode::Off, Mode::Raw).unwrap();
        let mut targets = vec![spec.clone()];
        if id.dim() == Dim::Two {
            let s3 = PauliOperator::sigma(Dim::Two, 3);
            let mut doubled = spec.clone();
            doubled.integrals = spec.integrals.iter().map(|(n, x)| (format!("s3*{n}"), s3.mul(x))).collect();
            targets.push(doubled);
        }
        for t in targets {
            let reports = numeric_probe(&t, &config).unwrap();
            let evals: usize = reports.iter().map(|r| r.evaluations).sum();
            let bad: Vec<_> = reports.iter().filter(|r| !r.passed()).map(|r| r.integral.clone()).collect();
            ok &= bad.is_empty() && reports.len() == t.integrals.len();
            notes.push(format!("{} {} pairs {evals} evaluations{}", id, reports.len(), if bad.is_empty() { String::new() } else { format!(" FAILED {bad:?}") }));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut agree = 0;
    for n in 0..COMPOSE_INSTANCES {
        let dim = if n % 2 == 0 { Dim::Two } else { Dim::Three };
        let (a, b) = (random_op(&mut rng, dim), random_op(&mut rng, dim));
        let f = random_poly(&mut rng, dim, 4);
        agree += usize::from(a.compose(&b).apply(&f) == a.apply(&b.apply(&f)));
    }
    ok &= agree == COMPOSE_INSTANCES;
    notes.push(format!("compose vs apply {agree}/{COMPOSE_INSTANCES}"));
    outcome(ok, notes.join(", "))
}

fn sigma3_doubling() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for id in [SystemId::Superintegrable2d, SystemId::Radial2d, SystemId::Cartesian2d] {
        let spec = build(id, HbarMode::Off, Mode::Raw).unwrap();
        let checks = spec.check_sigma3_doubling();
        let bad = failures(&spec, &checks);
        ok &= bad.is_empty() && checks.len() == spec.integrals.len();
        notes.push(format!("{id} {} of {} nonzero", bad.len(), checks.len()));
    }
    outcome(ok, notes.join(", "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("planar superintegrability", superintegrable_plane),
        ("spatial superintegrability", superintegrable_space),
        ("algebra structure", algebra_structure),
        ("casimir identities", casimirs),
        ("determining systems", determining_systems),
        ("universal spin solution", universal_solution),
        ("integrable families", integrable_families),
        ("gauge action", gauge),
        ("classical limit", classical_limit),
        ("independent oracle", independent_oracle),
        ("sigma3 doubling", sigma3_doubling),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let tag = if o.passed { "PASS" } else { "FAIL" };
        failed += usize::from(!o.passed);
        println!("{tag} {:>2} {name} [{:.2?}]: {}", k + 1, start.elapsed(), o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
