use std::collections::BTreeMap;

use proptest::prelude::*;

use spinorbit::catalog::{apply_gauge, gauge_invariant};
use spinorbit::coeffring::{Base, Context, Coord, Dim, Expression, GaussianRational, Jet, JetRule};
use spinorbit::diffop::{MultiIndex, ScalarDiffOp};
use spinorbit::spinop::{PauliOperator, Spinor};

fn gaussian() -> impl Strategy<Value = GaussianRational> {
    (-5i64..=5, 1i64..=3, -2i64..=2).prop_map(|(n, d, m)| {
        &GaussianRational::ratio(n, d) + &(&GaussianRational::from_int(m) * &GaussianRational::i())
    })
}

fn coord3() -> impl Strategy<Value = Coord> {
    prop_oneof![Just(Coord::X), Just(Coord::Y), Just(Coord::Z)]
}

fn base() -> impl Strategy<Value = Base> {
    prop_oneof![Just(Base::Coord(Coord::X)), Just(Base::Rho2), Just(Base::R2)]
}

fn leaf(jets: bool) -> BoxedStrategy<Expression> {
    let plain = prop_oneof![
        gaussian().prop_map(Expression::constant),
        coord3().prop_map(Expression::coord),
        Just(Expression::param("gamma")),
    ];
    if !jets {
        return plain.boxed();
    }
    prop_oneof![
        3 => plain,
        1 => Just(Expression::jet(Jet::free("V", Dim::Three.all_coords()))),
        1 => Just(Expression::jet(Jet::radial("R", Dim::Three))),
    ]
    .boxed()
}

fn expr_with(jets: bool) -> impl Strategy<Value = Expression> {
    leaf(jets).prop_recursive(3, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.sub(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(&b)),
            (inner, base()).prop_map(|(a, b)| a.mul(&Expression::inverse_base(b, 1))),
        ]
    })
}

fn expr() -> impl Strategy<Value = Expression> {
    expr_with(true)
}

fn nonzero_rational() -> impl Strategy<Value = GaussianRational> {
    (prop_oneof![-6i64..=-1, 1i64..=6], 1i64..=4).prop_map(|(n, d)| GaussianRational::ratio(n, d))
}

fn point() -> impl Strategy<Value = BTreeMap<Coord, GaussianRational>> {
    (nonzero_rational(), nonzero_rational(), nonzero_rational())
        .prop_map(|(x, y, z)| BTreeMap::from([(Coord::X, x), (Coord::Y, y), (Coord::Z, z)]))
}

fn params() -> impl Strategy<Value = BTreeMap<String, GaussianRational>> {
    gaussian().prop_map(|g| BTreeMap::from([("gamma".to_string(), g)]))
}

fn poly2(max_deg: u8) -> impl Strategy<Value = Expression> {
    let n: usize = (0..=max_deg).map(|k| MultiIndex::of_order(Dim::Two, k).len()).sum();
    proptest::collection::vec(gaussian(), n).prop_map(move |cs| {
        let monomials = (0..=max_deg).flat_map(|k| MultiIndex::of_order(Dim::Two, k));
        monomials.zip(cs).fold(Expression::zero(), |acc, (b, c)| {
            let m = Expression::coord(Coord::X)
                .pow(b.0[0] as u32)
                .mul(&Expression::coord(Coord::Y).pow(b.0[1] as u32));
            acc.add(&m.mul(&Expression::constant(c)))
        })
    })
}

/// Order ≤ 2 in the plane with polynomial coefficients.
fn scalar_op() -> impl Strategy<Value = ScalarDiffOp> {
    let betas: Vec<MultiIndex> = (0..=2).flat_map(|k| MultiIndex::of_order(Dim::Two, k)).collect();
    proptest::collection::vec((proptest::sample::select(betas), poly2(2)), 1..4).prop_map(|terms| {
        terms.into_iter().fold(ScalarDiffOp::zero(Dim::Two), |acc, (b, c)| {
            acc.add(&ScalarDiffOp::term(Dim::Two, b, c))
        })
    })
}

fn pauli_op() -> impl Strategy<Value = PauliOperator> {
    [scalar_op(), scalar_op(), scalar_op(), scalar_op()]
        .prop_map(|[a, b, c, d]| PauliOperator::from_components([a, b, c, d]))
}

fn diagonal_op() -> impl Strategy<Value = PauliOperator> {
    (scalar_op(), scalar_op()).prop_map(|(a, d)| {
        PauliOperator::from_components([a, ScalarDiffOp::zero(Dim::Two), ScalarDiffOp::zero(Dim::Two), d])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in expr(), b in expr(), c in expr()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.sub(&a), Expression::zero());
    }

    #[test]
    fn mixed_partials_commute(e in expr(), c1 in coord3(), c2 in coord3()) {
        prop_assert_eq!(e.differentiate(c1).differentiate(c2), e.differentiate(c2).differentiate(c1));
    }

    #[test]
    fn leibniz(a in expr(), b in expr(), c in coord3()) {
        let lhs = a.mul(&b).differentiate(c);
        let rhs = a.differentiate(c).mul(&b).add(&a.mul(&b.differentiate(c)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn angular_derivatives_kill_radial_functions(k in 0u8..3, c in gaussian(), planar in any::<bool>()) {
        let dim = if planar { Dim::Two } else { Dim::Three };
        let r = Expression::jet(Jet::radial("R", dim));
        let s = if planar { Expression::rho2() } else { Expression::r2() };
        let f = r.pow(2).add(&s.pow(k as u32).mul(&Expression::constant(c))).mul(&r);
        let pairs: &[(Coord, Coord)] = if planar {
            &[(Coord::X, Coord::Y)]
        } else {
            &[(Coord::X, Coord::Y), (Coord::Y, Coord::Z), (Coord::Z, Coord::X)]
        };
        for &(a, b) in pairs {
            let ang = Expression::coord(b).mul(&f.differentiate(a)).sub(&Expression::coord(a).mul(&f.differentiate(b)));
            prop_assert!(ang.is_zero(), "{}", ang);
        }
    }

    #[test]
    fn printed_form_parses_back(e in expr()) {
        let ctx = Context::new(Dim::Three)
            .param("gamma")
            .function("V")
            .function_with("R", JetRule::Radial(Dim::Three));
        let text = e.to_string();
        prop_assert_eq!(ctx.parse(&text).unwrap(), e, "{}", text);
    }

    #[test]
    fn evaluation_is_a_ring_map(a in expr_with(false), b in expr_with(false), p in point(), g in params()) {
        let ev = |e: &Expression| e.evaluate(&p, &g).unwrap();
        prop_assert_eq!(ev(&a.add(&b)), &ev(&a) + &ev(&b));
        prop_assert_eq!(ev(&a.mul(&b)), &ev(&a) * &ev(&b));
        prop_assert_eq!(ev(&a.sub(&b)), &ev(&a) - &ev(&b));
    }

    #[test]
    fn operator_jacobi(a in scalar_op(), b in scalar_op(), c in scalar_op()) {
        let j = a.commutator(&b.commutator(&c))
            .add(&b.commutator(&c.commutator(&a)))
            .add(&c.commutator(&a.commutator(&b)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn pauli_jacobi(a in pauli_op(), b in pauli_op(), c in pauli_op()) {
        let j = a.commutator(&b.commutator(&c))
            .add(&b.commutator(&c.commutator(&a)))
            .add(&c.commutator(&a.commutator(&b)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn spinor_application_respects_products(p in pauli_op(), q in pauli_op(), u in poly2(4), d in poly2(4)) {
        let psi = Spinor::new(u, d);
        prop_assert_eq!(
            p.mul(&q).apply_to_spinor(&psi),
            p.apply_to_spinor(&q.apply_to_spinor(&psi))
        );
    }

    #[test]
    fn diagonal_operators_close(p in diagonal_op(), q in diagonal_op()) {
        prop_assert!(p.commutator(&q).is_diagonal());
        prop_assert!(p.mul(&q).is_diagonal());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn composition_agrees_with_application(a in scalar_op(), b in scalar_op(), f in poly2(4)) {
        prop_assert_eq!(a.compose(&b).apply(&f), a.apply(&b.apply(&f)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn gauge_preserves_invariant(cs in proptest::collection::vec(gaussian().prop_map(|g| g.real_part()), 1..4), v0 in poly2(2), v1 in poly2(1)) {
        let xi = Expression::coord(Coord::Y).mul(&Expression::inverse_base(Base::Coord(Coord::X), 1));
        let alpha_dot = cs.iter().enumerate().fold(Expression::zero(), |acc, (k, c)| {
            acc.add(&xi.pow(k as u32).mul(&Expression::constant(c.clone())))
        });
        let (v0t, v1t) = apply_gauge(&v0, &v1, &alpha_dot);
        prop_assert_eq!(gauge_invariant(&v0t, &v1t), gauge_invariant(&v0, &v1));
    }
}

#[test]
fn momentum_position_commutator_with_hbar() {
    let hbar = Expression::param("hbar");
    for k in Coord::ALL {
        let p = ScalarDiffOp::momentum(Dim::Three, k, &hbar);
        for l in Coord::ALL {
            let x = ScalarDiffOp::scalar(Dim::Three, Expression::coord(l));
            let want = if k == l {
                ScalarDiffOp::scalar(Dim::Three, hbar.mul(&Expression::i()).neg())
            } else {
                ScalarDiffOp::zero(Dim::Three)
            };
            assert_eq!(p.commutator(&x), want, "{k:?} {l:?}");
        }
    }
}
