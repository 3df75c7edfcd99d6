use crate::catalog::{apply_gauge, gauge_invariant, numeric_probe, ProbeConfig};
use crate::catalog::{build, superintegrable_2d, HbarMode, Mode, SystemId, SystemSpec};
use crate::coeffring::{Base, Bindings, Context, Coord, Dim, Expression};
use crate::determining::{generate, match_paper, reference_block, references_for, DeterminingSystem, Stage};
use crate::liealg::{casimir_check, table_and_relations, verify_relations};

use super::{Check, CliError, Session, Space};

fn usage(m: impl std::fmt::Display) -> CliError {
    CliError::Usage(m.to_string())
}

fn hbar_mode(on: bool) -> HbarMode {
    if on {
        HbarMode::Tracked
    } else {
        HbarMode::Off
    }
}

fn spec_for(system: SystemId, gamma: Option<&str>, hbar: HbarMode) -> Result<SystemSpec, CliError> {
    match gamma {
        None => build(system, hbar, Mode::Raw).map_err(usage),
        Some(text) if system == SystemId::Superintegrable2d => {
            let g = Context::new(Dim::Two).params(["gamma", "hbar"]).parse(text).map_err(usage)?;
            if g.depends_on_coords() {
                return Err(usage("--gamma must not depend on the coordinates"));
            }
            superintegrable_2d(&g, hbar, Mode::Raw).map_err(usage)
        }
        Some(_) => Err(usage(format!("--gamma applies only to {}", SystemId::Superintegrable2d))),
    }
}

pub(super) fn verify(
    s: &mut Session,
    system: SystemId,
    gamma: Option<&str>,
    hbar: bool,
    probe: Option<usize>,
    v0_extra: Option<&str>,
) -> Result<(), CliError> {
    let mut spec = spec_for(system, gamma, hbar_mode(hbar))?;
    if let Some(text) = v0_extra {
        let mut ctx = Context::new(system.dim()).params(["gamma", "hbar"]);
        for p in &spec.params {
            ctx = ctx.param(p);
        }
        spec = spec.with_v0_extra(&ctx.parse(text).map_err(usage)?);
    }
    for c in spec.check_integrals() {
        s.push(Check::new(format!("commutator [H, {}]", c.name), c.passed(), c.detail()));
    }
    if system.dim() == Dim::Two {
        for c in spec.check_sigma3_doubling() {
            s.push(Check::new(format!("doubling [H, {}]", c.name), c.passed(), c.detail()));
        }
    }
    s.push(Check::new("hermitian H", spec.is_hermitian(), ""));
    for (n, x) in &spec.integrals {
        s.push(Check::new(format!("hermitian {n}"), x.is_hermitian(), ""));
    }
    if let Some(n) = probe {
        let config = ProbeConfig {
            spinors: n,
            seed: s.global.seed,
            ..ProbeConfig::default()
        };
        let reports = numeric_probe(&spec, &config).map_err(usage)?;
        for r in reports {
            let detail = match &r.first_mismatch {
                None => format!("{} evaluations agree, seed {}", r.evaluations, config.seed),
                Some(m) => format!("{} of {} evaluations differ, seed {}; {m}", r.mismatches, r.evaluations, config.seed),
            };
            s.push(Check::new(format!("probe [H, {}]", r.integral), r.passed(), detail));
        }
    }
    Ok(())
}

/// Counts per block asserted for the standard ansatz.
fn expected_count(dim: Dim, stage: Stage, block: &str) -> Option<usize> {
    match (dim, stage, block) {
        (Dim::Two, Stage::Second, "killing") => Some(6),
        (Dim::Two, Stage::First, "phi") => Some(4),
        (Dim::Two, Stage::Zeroth, "zeroth") => Some(2),
        (Dim::Three, Stage::Second, "killing") => Some(6),
        (Dim::Three, Stage::Second, "spin") => Some(18),
        (Dim::Three, Stage::First, "phi") => Some(9),
        (Dim::Three, Stage::First, "phi0") => Some(3),
        (Dim::Three, Stage::Zeroth, "zeroth") => Some(8),
        _ => None,
    }
}

fn match_check(s: &mut Session, sys: &DeterminingSystem, name: &str) -> Result<(), CliError> {
    let block = reference_block(name).map_err(usage)?;
    let selected: Vec<_> = sys
        .equations
        .iter()
        .filter(|e| block.blocks.contains(&e.block.as_str()))
        .collect();
    let exprs: Vec<Expression> = selected.iter().map(|e| e.expr.clone()).collect();
    let r = match_paper(&exprs, &block.equations);
    let labels = |ix: &[usize]| ix.iter().map(|&k| selected[k].label()).collect::<Vec<_>>().join("; ");
    let lines = |ix: &[usize]| ix.iter().map(|&k| block.lines[k].clone()).collect::<Vec<_>>().join("; ");
    let detail = if r.bijection {
        format!("bijection up to scalars, {} pairs", r.pairs.len())
    } else if r.span_equal {
        format!(
            "equal spans, {} scalar pairs; combinations: {}",
            r.pairs.len(),
            labels(&r.combined_generated)
        )
    } else {
        format!(
            "unmatched generated: [{}]; unmatched reference: [{}]",
            labels(&r.unmatched_generated),
            lines(&r.unmatched_reference)
        )
    };
    s.push(Check::new(format!("match {name}"), r.passed(), detail));
    Ok(())
}

pub(super) fn determining(s: &mut Session, space: Space, stage: Option<Stage>, matching: bool) -> Result<(), CliError> {
    let dim = match space {
        Space::Two => Dim::Two,
        Space::Three => Dim::Three,
    };
    let stages: Vec<Stage> = stage.map_or_else(|| Stage::ALL.to_vec(), |st| vec![st]);
    let mut total = 0;
    for st in &stages {
        let sys = generate(dim, *st).map_err(usage)?;
        total += sys.len();
        for (k, e) in sys.equations.iter().enumerate() {
            let mark = if sys.reducible.contains(&k) { " (reducible)" } else { "" };
            s.list(format!("  {} {}{mark}: {}", st, e.label(), e));
        }
        for (block, n) in sys.block_counts() {
            let want = expected_count(dim, *st, &block);
            let detail = match want {
                Some(w) => format!("expected {w}"),
                None => "no expected count".to_string(),
            };
            s.push(Check::new(format!("count {st} {block}: {n} equations"), want.is_none_or(|w| w == n), detail));
        }
        if !sys.consequences.is_empty() {
            s.push(Check::new(
                format!("consequences {st}: {} equations", sys.consequences.len()),
                true,
                "implied by earlier stages",
            ));
        }
        if !sys.reducible.is_empty() {
            s.push(Check::new(
                format!("reducible {st}: {} equations", sys.reducible.len()),
                true,
                "vanish modulo the first-stage gradient systems",
            ));
        }
        if matching {
            let refs = references_for(dim, *st);
            if refs.is_empty() {
                s.push(Check::new(format!("match {st}: no reference"), true, "informational"));
            }
            for name in refs {
                match_check(s, &sys, name)?;
            }
        }
    }
    if stages.len() == Stage::ALL.len() && dim == Dim::Two {
        s.push(Check::new(format!("count total: {total} equations"), total == 12, "expected 12"));
    }
    Ok(())
}

pub(super) fn algebra(s: &mut Session, system: Space, casimir: bool, relations: bool, hbar: bool) -> Result<(), CliError> {
    let mode = hbar_mode(hbar);
    if casimir && system == Space::Three {
        return Err(usage("--casimir applies to the 2d algebra"));
    }
    let (table, rels) = table_and_relations(system == Space::Two, mode).map_err(usage)?;
    for line in table.to_string().lines() {
        s.list(format!("  {line}"));
    }
    let open: Vec<String> = table.non_closure().iter().map(|(a, b, _)| format!("[{a}, {b}]")).collect();
    s.push(Check::new("closure", open.is_empty(), open.join("; ")));
    let anti: Vec<String> = table
        .antisymmetry_violations()
        .iter()
        .map(|(a, b)| format!("({a}, {b})"))
        .collect();
    s.push(Check::new("antisymmetry", anti.is_empty(), anti.join("; ")));
    let jac: Vec<String> = table
        .jacobi_violations()
        .iter()
        .map(|(a, b, c)| format!("({a}, {b}, {c})"))
        .collect();
    s.push(Check::new("jacobi", jac.is_empty(), jac.join("; ")));
    if relations {
        let report = verify_relations(&table, &rels);
        for r in &report.results {
            s.push(Check::new(
                format!("relation {}: {}", r.family, r.label),
                r.passed,
                format!("computed {}", r.computed),
            ));
        }
        s.push(Check::new("relation surplus", true, report.surplus.join("; ")));
    }
    if casimir {
        let report = casimir_check(mode).map_err(usage)?;
        for (name, residual) in &report.checks {
            let detail = match residual.first_nonzero() {
                None => "0".to_string(),
                Some((m, b, c)) => format!("nonzero coefficient at s{m} {b}: {c}"),
            };
            s.push(Check::new(format!("casimir {name}"), residual.is_zero(), detail));
        }
    }
    Ok(())
}

fn gauge_context() -> Context {
    let xi = Expression::coord(Coord::Y).mul(&Expression::inverse_base(Base::Coord(Coord::X), 1));
    Context::new(Dim::Two).auto_params(true).alias("xi", xi)
}

pub(super) fn gauge(s: &mut Session, alpha_dot: &str, v0: &str, v1: &str) -> Result<(), CliError> {
    let ctx = gauge_context();
    let parse = |t: &str| ctx.parse(t).map_err(usage);
    let (a, v0, v1) = (parse(alpha_dot)?, parse(v0)?, parse(v1)?);
    let (v0t, v1t) = apply_gauge(&v0, &v1, &a);
    s.push(Check::new("gauged V0", true, v0t.to_string()));
    s.push(Check::new("gauged V1", true, v1t.to_string()));
    let before = gauge_invariant(&v0, &v1);
    let after = gauge_invariant(&v0t, &v1t);
    s.push(Check::new("invariant", before == after, format!("V0 - rho^2 V1^2/2 = {after}")));
    Ok(())
}

pub(super) fn limit(s: &mut Session, system: SystemId) -> Result<(), CliError> {
    let spec = build(system, HbarMode::Tracked, Mode::Raw).map_err(usage)?;
    let zero = Bindings::new().param("hbar", Expression::zero());
    for (name, v) in [("V0", &spec.v0), ("V1", &spec.v1)] {
        let at_zero = v.substitute(&zero).map_err(usage)?;
        if v.params().iter().any(|p| &**p == "hbar") {
            s.push(Check::new(
                format!("{name} vanishes at hbar = 0"),
                at_zero.is_zero(),
                format!("{v} -> {at_zero}"),
            ));
        } else {
            s.push(Check::new(format!("{name} independent of hbar"), at_zero == *v, v.to_string()));
        }
    }
    for c in spec.check_integrals() {
        s.push(Check::new(format!("commutator [H, {}] with hbar", c.name), c.passed(), c.detail()));
    }
    Ok(())
}
