//! Checked-in transcriptions of determining blocks and the comparison of
//! generated systems against them.
//!
//! Data format: one equation `lhs = rhs` per line, `let NAME = expr`
//! abbreviations, `#` comments.

use std::collections::BTreeMap;

use crate::coeffring::{Context, Dim, Expression, GaussianRational, Monomial};

use super::{Ansatz, DeterminingError, Stage};

#[derive(Clone, Debug)]
pub struct ReferenceBlock {
    pub name: &'static str,
    pub dim: Dim,
    pub stage: Stage,
    /// Generated block names the reference covers.
    pub blocks: &'static [&'static str],
    pub lines: Vec<String>,
    pub equations: Vec<Expression>,
}

struct Source {
    name: &'static str,
    dim: Dim,
    stage: Stage,
    blocks: &'static [&'static str],
    text: &'static str,
}

const SOURCES: [Source; 5] = [
    Source {
        name: "planar-gradients",
        dim: Dim::Two,
        stage: Stage::First,
        blocks: &["phi"],
        text: include_str!("../../data/planar_gradients.txt"),
    },
    Source {
        name: "planar-potential",
        dim: Dim::Two,
        stage: Stage::Zeroth,
        blocks: &["zeroth"],
        text: include_str!("../../data/planar_potential.txt"),
    },
    Source {
        name: "spatial-spin",
        dim: Dim::Three,
        stage: Stage::Second,
        blocks: &["spin"],
        text: include_str!("../../data/spatial_spin.txt"),
    },
    Source {
        name: "spatial-phi",
        dim: Dim::Three,
        stage: Stage::First,
        blocks: &["phi"],
        text: include_str!("../../data/spatial_phi.txt"),
    },
    Source {
        name: "spatial-phi0",
        dim: Dim::Three,
        stage: Stage::First,
        blocks: &["phi0"],
        text: include_str!("../../data/spatial_phi0.txt"),
    },
];

pub fn reference_names() -> Vec<&'static str> {
    SOURCES.iter().map(|s| s.name).collect()
}

/// References that apply to a generated stage.
pub fn references_for(dim: Dim, stage: Stage) -> Vec<&'static str> {
    SOURCES
        .iter()
        .filter(|s| s.dim == dim && s.stage == stage)
        .map(|s| s.name)
        .collect()
}

fn context(dim: Dim) -> Context {
    let ansatz = Ansatz::standard(dim);
    let mut ctx = Context::new(dim);
    for n in ansatz.names.values() {
        ctx = ctx.function(n);
    }
    ctx = ctx.function(&ansatz.v0).function(&ansatz.v1);
    for p in ansatz.killing_params() {
        ctx = ctx.param(&p);
    }
    ctx
}

pub fn parse_reference(text: &str, dim: Dim) -> Result<(Vec<String>, Vec<Expression>), DeterminingError> {
    let mut ctx = context(dim);
    let mut lines = Vec::new();
    let mut eqs = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let err = |m: String| DeterminingError::Reference(format!("line {}: {m}", n + 1));
        if let Some(def) = line.strip_prefix("let ") {
            let (name, value) = def.split_once('=').ok_or_else(|| err("`let` without `=`".into()))?;
            let v = ctx.parse(value.trim()).map_err(|e| err(e.to_string()))?;
            ctx = ctx.alias(name.trim(), v);
            continue;
        }
        let (lhs, rhs) = line.split_once('=').ok_or_else(|| err("equation without `=`".into()))?;
        let l = ctx.parse(lhs.trim()).map_err(|e| err(e.to_string()))?;
        let r = ctx.parse(rhs.trim()).map_err(|e| err(e.to_string()))?;
        lines.push(line.to_string());
        eqs.push(l.sub(&r));
    }
    Ok((lines, eqs))
}

pub fn reference_block(name: &str) -> Result<ReferenceBlock, DeterminingError> {
    let src = SOURCES
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| DeterminingError::Reference(format!("unknown reference `{name}`")))?;
    let (lines, equations) = parse_reference(src.text, src.dim)?;
    Ok(ReferenceBlock {
        name: src.name,
        dim: src.dim,
        stage: src.stage,
        blocks: src.blocks,
        lines,
        equations,
    })
}

#[derive(Clone, Debug, Default)]
pub struct MatchReport {
    /// Generated index paired with the reference index equal up to a scalar.
    pub pairs: Vec<(usize, usize)>,
    pub bijection: bool,
    pub span_equal: bool,
    /// Generated equations in the reference span without a scalar partner.
    pub combined_generated: Vec<usize>,
    pub unmatched_generated: Vec<usize>,
    pub unmatched_reference: Vec<usize>,
}

impl MatchReport {
    pub fn passed(&self) -> bool {
        self.bijection || self.span_equal
    }
}

type Vector = BTreeMap<Monomial, GaussianRational>;

fn vector(e: &Expression) -> Vector {
    e.clear_denominator()
        .0
        .num()
        .terms()
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect()
}

/// Row echelon basis keyed by pivot (the largest monomial of each row).
#[derive(Default)]
struct Echelon {
    rows: BTreeMap<Monomial, Vector>,
}

impl Echelon {
    fn reduce(&self, mut v: Vector) -> Vector {
        for (pivot, row) in self.rows.iter().rev() {
            let Some(c) = v.get(pivot).cloned() else {
                continue;
            };
            for (m, r) in row {
                let slot = v.entry(m.clone()).or_insert_with(GaussianRational::zero);
                *slot -= &(&c * r);
                if slot.is_zero() {
                    v.remove(m);
                }
            }
        }
        v
    }

    fn contains(&self, v: &Vector) -> bool {
        self.reduce(v.clone()).is_empty()
    }

    fn insert(&mut self, v: Vector) -> bool {
        let v = self.reduce(v);
        let Some((pivot, lead)) = v.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) else {
            return false;
        };
        let inv = lead.inv().unwrap();
        let row: Vector = v.into_iter().map(|(m, c)| (m, &c * &inv)).collect();
        self.rows.insert(pivot, row);
        true
    }
}

fn span(vs: &[Vector]) -> Echelon {
    let mut e = Echelon::default();
    for v in vs {
        e.insert(v.clone());
    }
    e
}

/// Pairs equations equal up to a nonzero constant; when that fails,
/// compares linear spans over the Gaussian rationals.
pub fn match_paper(generated: &[Expression], reference: &[Expression]) -> MatchReport {
    let norm = |e: &Expression| e.clear_denominator().0.monic();
    let gen_n: Vec<Expression> = generated.iter().map(norm).collect();
    let ref_n: Vec<Expression> = reference.iter().map(norm).collect();
    let mut used = vec![false; ref_n.len()];
    let mut report = MatchReport::default();
    let mut lone = Vec::new();
    for (g, ge) in gen_n.iter().enumerate() {
        match (0..ref_n.len()).find(|&r| !used[r] && ref_n[r] == *ge) {
            Some(r) => {
                used[r] = true;
                report.pairs.push((g, r));
            }
            None => lone.push(g),
        }
    }
    report.bijection = lone.is_empty() && used.iter().all(|&u| u);
    let gv: Vec<Vector> = generated.iter().map(vector).collect();
    let rv: Vec<Vector> = reference.iter().map(vector).collect();
    let gs = span(&gv);
    let rs = span(&rv);
    for g in lone {
        if rs.contains(&gv[g]) {
            report.combined_generated.push(g);
        } else {
            report.unmatched_generated.push(g);
        }
    }
    for (r, v) in rv.iter().enumerate() {
        if !gs.contains(v) {
            report.unmatched_reference.push(r);
        }
    }
    report.span_equal = report.unmatched_generated.is_empty() && report.unmatched_reference.is_empty();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::determining::generate;

    fn check(name: &str) -> MatchReport {
        let block = reference_block(name).unwrap();
        let sys = generate(block.dim, block.stage).unwrap();
        let gen: Vec<Expression> = sys
            .equations
            .iter()
            .filter(|e| block.blocks.contains(&e.block.as_str()))
            .map(|e| e.expr.clone())
            .collect();
        match_paper(&gen, &block.equations)
    }

    #[test]
    fn all_references_parse() {
        for n in reference_names() {
            let b = reference_block(n).unwrap();
            assert!(!b.equations.is_empty(), "{n}");
        }
    }

    #[test]
    fn planar_references_match() {
        for n in ["planar-gradients", "planar-potential"] {
            let r = check(n);
            assert!(r.passed(), "{n}: {r:?}");
        }
    }

    #[test]
    fn spatial_references_match() {
        for n in ["spatial-spin", "spatial-phi", "spatial-phi0"] {
            let r = check(n);
            assert!(r.passed(), "{n}: {r:?}");
            assert!(r.bijection, "{n}: {r:?}");
        }
    }

    #[test]
    fn deleted_reference_equation_is_reported() {
        let block = reference_block("planar-gradients").unwrap();
        let sys = generate(Dim::Two, Stage::First).unwrap();
        let r = match_paper(&sys.expressions(), &block.equations[1..]);
        assert!(!r.passed());
        assert_eq!(r.unmatched_generated.len(), 1);
    }
}
