//! Property tests for the exact scalar, polynomial and operator layers.

use crgeom::exact::{rat, GaussianRational as Gr};
use crgeom::heis::{parse_expression, HeisPoly, Mono};
use crgeom::opalg::OpPoly;
use proptest::prelude::*;

fn gr() -> impl Strategy<Value = Gr> {
    (-20i64..=20, 1i64..=12, -20i64..=20, 1i64..=12)
        .prop_map(|(a, b, c, d)| Gr::new(rat(a, b), rat(c, d)))
}

fn mono(n: usize) -> impl Strategy<Value = Mono> {
    (
        prop::collection::vec(0u32..3, n),
        prop::collection::vec(0u32..3, n),
        0u32..3,
    )
        .prop_map(|(z, zb, t)| Mono::from_exponents(&z, &zb, t))
}

fn poly(n: usize) -> impl Strategy<Value = HeisPoly> {
    prop::collection::vec((mono(n), gr()), 0..5).prop_map(|ts| {
        let mut p = HeisPoly::zero();
        for (m, c) in ts {
            p.add_term(m, c);
        }
        p
    })
}

fn oppoly() -> impl Strategy<Value = OpPoly> {
    prop::collection::vec((0u32..3, 0u32..3, gr()), 0..4).prop_map(|ts| {
        let mut p = OpPoly::zero();
        for (a, b, c) in ts {
            p.add_assign(&OpPoly::db().pow(a).mul(&OpPoly::t().pow(b)).scale(&c));
        }
        p
    })
}

proptest! {
    #[test]
    fn gaussian_field_laws(a in gr(), b in gr(), c in gr()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a * &a.conj()).im.clone(), rat(0, 1));
        if !b.is_zero() {
            prop_assert_eq!(&a.checked_div(&b).unwrap() * &b, a.clone());
        }
        prop_assert_eq!(Gr::parse(&a.render()).unwrap(), a);
    }

    #[test]
    fn gaussian_json_round_trip(a in gr()) {
        let s = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Gr>(&s).unwrap(), a);
    }

    #[test]
    fn poly_ring_laws(p in poly(2), q in poly(2), r in poly(2)) {
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.mul(&q).conj(), p.conj().mul(&q.conj()));
    }

    #[test]
    fn leibniz_for_frame_fields(p in poly(2), q in poly(2)) {
        let pq = p.mul(&q);
        for a in 1..=2 {
            prop_assert_eq!(pq.apply_z(a), p.apply_z(a).mul(&q).add(&p.mul(&q.apply_z(a))));
            prop_assert_eq!(pq.apply_zb(a), p.apply_zb(a).mul(&q).add(&p.mul(&q.apply_zb(a))));
        }
        prop_assert_eq!(pq.apply_t(), p.apply_t().mul(&q).add(&p.mul(&q.apply_t())));
    }

    #[test]
    fn render_parse_round_trip(p in poly(3)) {
        prop_assert_eq!(parse_expression(&p.render(), 3).unwrap(), p);
    }

    #[test]
    fn poly_wire_round_trip(p in poly(2)) {
        let s = serde_json::to_string(&p.to_wire(2)).unwrap();
        let w = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(HeisPoly::from_wire(&w), p);
    }

    #[test]
    fn adjoint_is_an_antimultiplicative_involution(p in oppoly(), q in oppoly()) {
        prop_assert_eq!(p.adjoint().adjoint(), p.clone());
        prop_assert_eq!(p.mul(&q).adjoint(), q.adjoint().mul(&p.adjoint()));
    }

    #[test]
    fn operator_action_is_multiplicative(p in oppoly(), q in oppoly(), f in poly(2)) {
        prop_assert_eq!(p.mul(&q).apply(&f, 2), p.apply(&q.apply(&f, 2), 2));
    }
}
