//! The planar and spatial integral algebras: bases, defining relations
//! and the planar Casimir operators.

use super::{commutation_table, render, scalar, Bracket, GeneratorSet, LieError, RatFun, StructureTable};
use crate::catalog::{modified_momentum, modified_spin, superintegrable_2d, total_angular_momentum, HbarMode, Mode};
use crate::coeffring::{Coord, Expression, GaussianRational};
use crate::diffop::levi_civita;
use crate::spinop::PauliOperator;

/// `L±, X±, Y±, I±` with `I±` central.
pub fn planar_generators(hbar: HbarMode) -> Result<GeneratorSet, LieError> {
    let spec = superintegrable_2d(&Expression::param("gamma"), hbar, Mode::Raw).expect("raw catalog build");
    let names = ["L+", "X+", "Y+", "I+", "L-", "X-", "Y-", "I-"];
    let gens = names
        .iter()
        .map(|n| (n.to_string(), spec.integral(n).expect("catalog integral").clone()))
        .collect();
    GeneratorSet::new(gens)?.with_central(&["I+", "I-"])
}

/// `J_i − S_i`, `Π_i`, `S_i`.
pub fn spatial_generators(hbar: HbarMode) -> Result<GeneratorSet, LieError> {
    let h = hbar.value();
    let mut gens = Vec::new();
    for (k, c) in Coord::ALL.into_iter().enumerate() {
        let j = total_angular_momentum(c, &h).sub(&modified_spin(c, &h));
        gens.push((format!("J{}-S{}", k + 1, k + 1), j));
    }
    for (k, c) in Coord::ALL.into_iter().enumerate() {
        gens.push((format!("Pi{}", k + 1), modified_momentum(c, &h)));
    }
    for (k, c) in Coord::ALL.into_iter().enumerate() {
        gens.push((format!("S{}", k + 1), modified_spin(c, &h)));
    }
    GeneratorSet::new(gens)
}

/// Expected `[a, b] = Σ c·g`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub family: String,
    pub a: String,
    pub b: String,
    pub rhs: Vec<(RatFun, String)>,
}

impl Relation {
    pub fn new(family: &str, a: &str, b: &str, rhs: Vec<(RatFun, String)>) -> Relation {
        Relation {
            family: family.to_string(),
            a: a.to_string(),
            b: b.to_string(),
            rhs,
        }
    }

    pub fn label(&self) -> String {
        format!("[{}, {}] = {}", self.a, self.b, render(&self.rhs))
    }
}

fn i_times(e: Expression) -> RatFun {
    scalar(e.mul(&Expression::i()))
}

/// Two commuting centrally extended planar Euclidean algebras.
pub fn planar_relations(hbar: HbarMode) -> Vec<Relation> {
    let h = hbar.value();
    let gamma = Expression::param("gamma");
    let mut out = Vec::new();
    for (s, t) in [("+", "-"), ("-", "+")] {
        let sign = if s == "+" { 1 } else { -1 };
        let n = |g: &str| format!("{g}{s}");
        out.push(Relation::new("rotation", &n("L"), &n("X"), vec![(i_times(h.scale(&GaussianRational::from_int(2))), n("Y"))]));
        out.push(Relation::new("rotation", &n("L"), &n("Y"), vec![(i_times(h.scale(&GaussianRational::from_int(-2))), n("X"))]));
        out.push(Relation::new(
            "central extension",
            &n("X"),
            &n("Y"),
            vec![(i_times(gamma.mul(&h).scale(&GaussianRational::from_int(4 * sign))), n("I"))],
        ));
        for g in ["L", "X", "Y"] {
            out.push(Relation::new("central", &n("I"), &n(g), vec![]));
        }
        if s == "+" {
            for a in ["L", "X", "Y", "I"] {
                for b in ["L", "X", "Y", "I"] {
                    out.push(Relation::new("direct sum", &n(a), &format!("{b}{t}"), vec![]));
                }
            }
        }
    }
    out
}

/// Euclidean relations of `{J − S, Π}`, rotation relations of `{S}`,
/// and elementwise commutation of the two spans.
pub fn spatial_relations(hbar: HbarMode) -> Vec<Relation> {
    let h = hbar.value();
    let mut out = Vec::new();
    let k = |i: usize| format!("J{i}-S{i}");
    let p = |i: usize| format!("Pi{i}");
    let s = |i: usize| format!("S{i}");
    let rot = |i: usize, j: usize, name: &dyn Fn(usize) -> String| -> Vec<(RatFun, String)> {
        (1..=3)
            .filter_map(|l| {
                let e = levi_civita(i - 1, j - 1, l - 1);
                (e != 0).then(|| (i_times(h.scale(&GaussianRational::from_int(e))), name(l)))
            })
            .collect()
    };
    for i in 1..=3 {
        for j in 1..=3 {
            if i < j {
                out.push(Relation::new("orbital rotations", &k(i), &k(j), rot(i, j, &k)));
                out.push(Relation::new("momenta commute", &p(i), &p(j), vec![]));
                out.push(Relation::new("spin rotations", &s(i), &s(j), rot(i, j, &s)));
            }
            out.push(Relation::new("momenta rotate", &k(i), &p(j), rot(i, j, &p)));
            out.push(Relation::new("momenta and spin commute", &p(i), &s(j), vec![]));
            out.push(Relation::new("rotations and spin commute", &k(i), &s(j), vec![]));
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct RelationResult {
    pub family: String,
    pub label: String,
    pub passed: bool,
    pub computed: String,
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub results: Vec<RelationResult>,
    /// Nonzero brackets of the table that no expected relation covers.
    pub surplus: Vec<String>,
}

impl RelationReport {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }
}

pub fn verify_relations(table: &StructureTable, expected: &[Relation]) -> RelationReport {
    let names = table.names();
    let mut covered = vec![vec![false; names.len()]; names.len()];
    let mut results = Vec::new();
    for rel in expected {
        let idx = |n: &str| names.iter().position(|m| m == n);
        let (Some(i), Some(j)) = (idx(&rel.a), idx(&rel.b)) else {
            results.push(RelationResult {
                family: rel.family.clone(),
                label: rel.label(),
                passed: false,
                computed: "unknown generator".into(),
            });
            continue;
        };
        covered[i][j] = true;
        covered[j][i] = true;
        let passed = match &table.brackets[i][j] {
            Bracket::Span(c) => {
                let mut want = vec![RatFun::zero(); names.len()];
                let mut known = true;
                for (v, n) in &rel.rhs {
                    match idx(n) {
                        Some(m) => want[m] = want[m].add(v),
                        None => known = false,
                    }
                }
                known && want == *c
            }
            Bracket::Outside(_) => false,
        };
        results.push(RelationResult {
            family: rel.family.clone(),
            label: rel.label(),
            passed,
            computed: table.render(i, j),
        });
    }
    let mut surplus = Vec::new();
    for i in 0..names.len() {
        for j in i + 1..names.len() {
            let zero = matches!(&table.brackets[i][j], Bracket::Span(c) if c.iter().all(RatFun::is_zero));
            if !covered[i][j] && !zero {
                surplus.push(format!("[{}, {}] = {}", names[i], names[j], table.render(i, j)));
            }
        }
    }
    RelationReport { results, surplus }
}

/// Named residuals; every one must vanish.
#[derive(Clone, Debug)]
pub struct CasimirReport {
    pub checks: Vec<(String, PauliOperator)>,
}

impl CasimirReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, r)| r.is_zero())
    }
}

/// `C± = X±² + Y±² ± 4γ L± I±` commute with every generator and
/// `H = (C₊ + C₋)/8`.
pub fn casimir_check(hbar: HbarMode) -> Result<CasimirReport, LieError> {
    let spec = superintegrable_2d(&Expression::param("gamma"), hbar, Mode::Raw).expect("raw catalog build");
    let gens = planar_generators(hbar)?;
    let gamma = Expression::param("gamma");
    let mut casimirs = Vec::new();
    for (s, sign) in [("+", 1), ("-", -1)] {
        let g = |n: &str| gens.get(&format!("{n}{s}")).cloned();
        let (l, x, y, i) = (g("L")?, g("X")?, g("Y")?, g("I")?);
        let c = x
            .mul(&x)
            .add(&y.mul(&y))
            .add(&l.mul(&i).scale(&gamma.scale(&GaussianRational::from_int(4 * sign))));
        casimirs.push((format!("C{s}"), c));
    }
    let mut checks = Vec::new();
    for (cn, c) in &casimirs {
        for (gn, g) in gens.iter() {
            checks.push((format!("[{cn}, {gn}]"), c.commutator(g)));
        }
    }
    checks.push(("[C+, C-]".into(), casimirs[0].1.commutator(&casimirs[1].1)));
    let sum = casimirs[0].1.add(&casimirs[1].1).scale_const(&GaussianRational::ratio(1, 8));
    checks.push(("H - (C+ + C-)/8".into(), spec.hamiltonian.sub(&sum)));
    Ok(CasimirReport { checks })
}

/// The planar and spatial tables with their expected relations.
pub fn table_and_relations(two_d: bool, hbar: HbarMode) -> Result<(StructureTable, Vec<Relation>), LieError> {
    if two_d {
        Ok((commutation_table(&planar_generators(hbar)?)?, planar_relations(hbar)))
    } else {
        Ok((commutation_table(&spatial_generators(hbar)?)?, spatial_relations(hbar)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn planar_relations_hold() {
        for hbar in [HbarMode::Off, HbarMode::Tracked] {
            let (t, rels) = table_and_relations(true, hbar).unwrap();
            assert!(t.is_closed());
            let r = verify_relations(&t, &rels);
            assert!(r.passed(), "{:?}", r.results.iter().filter(|x| !x.passed).collect::<Vec<_>>());
            assert!(r.surplus.is_empty(), "{:?}", r.surplus);
            assert!(t.antisymmetry_violations().is_empty());
            assert!(t.jacobi_violations().is_empty());
        }
    }

    #[test]
    fn spatial_relations_hold() {
        for hbar in [HbarMode::Off, HbarMode::Tracked] {
            let (t, rels) = table_and_relations(false, hbar).unwrap();
            assert!(t.is_closed());
            let r = verify_relations(&t, &rels);
            assert!(r.passed(), "{:?}", r.results.iter().filter(|x| !x.passed).collect::<Vec<_>>());
            assert!(r.surplus.is_empty(), "{:?}", r.surplus);
            assert!(t.antisymmetry_violations().is_empty());
            assert!(t.jacobi_violations().is_empty());
        }
    }

    #[test]
    fn corrupted_relation_fails() {
        let (t, _) = table_and_relations(false, HbarMode::Off).unwrap();
        let bad = Relation::new("corrupted", "Pi1", "Pi2", vec![(RatFun::constant(GaussianRational::i()), "Pi3".into())]);
        let r = verify_relations(&t, &[bad]);
        assert!(!r.passed());
        assert_eq!(r.results[0].computed, "0");
    }

    #[test]
    fn casimirs() {
        for hbar in [HbarMode::Off, HbarMode::Tracked] {
            let r = casimir_check(hbar).unwrap();
            let bad: Vec<_> = r.checks.iter().filter(|(_, x)| !x.is_zero()).map(|(n, _)| n).collect();
            assert!(bad.is_empty(), "{bad:?}");
            assert_eq!(r.checks.len(), 18);
        }
    }
}
