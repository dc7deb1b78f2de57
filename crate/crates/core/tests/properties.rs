use num_bigint::BigInt;
use proptest::prelude::*;

use osclat_core::automorphism::{
    gamma_coset_base, gamma_generators, integer_s_set, is_gamma_preserving, Isomorphism,
};
use osclat_core::classify::{
    admissible_xi, all_cells, classify_spec, reduce_fundamental, ClassifyOptions, FundamentalPoint,
    LatticeSpec, PointClass,
};
use osclat_core::group::{gamma_member, GroupElement, IntMat2, Mat2, Osc, StructureMatrix};
use osclat_core::scalar::{rat, AngleBase, AngleSymbol, ExactScalar, Rational, Sign};

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
}

fn scalar() -> impl Strategy<Value = ExactScalar> {
    (rational(), rational()).prop_map(|(a, b)| ExactScalar::new(a, b, 3).unwrap())
}

fn nonzero_scalar() -> impl Strategy<Value = ExactScalar> {
    scalar().prop_filter("nonzero", |x| !x.is_zero())
}

fn angle() -> impl Strategy<Value = AngleSymbol> {
    (0usize..4, 0u64..5).prop_map(|(i, k)| AngleSymbol::new(AngleBase::ALL[i], k))
}

fn structure() -> impl Strategy<Value = StructureMatrix> {
    (angle(), rational(), rational(), any::<bool>()).prop_map(|(l, x, y, hex)| {
        if hex {
            let p = FundamentalPoint::hexagonal();
            StructureMatrix::new(l, p.x().clone(), p.y().clone()).unwrap()
        } else {
            let y = if y == rat(0, 1) { rat(1, 2) } else { y };
            StructureMatrix::new(
                l,
                ExactScalar::from_rational(x),
                ExactScalar::from_rational(y),
            )
            .unwrap()
        }
    })
}

fn element() -> impl Strategy<Value = GroupElement> {
    (scalar(), rational(), rational(), -6i64..6).prop_map(|(z, a, b, t)| {
        GroupElement::new(
            z,
            [ExactScalar::from_rational(a), ExactScalar::from_rational(b)],
            t,
        )
    })
}

fn gamma_element(r: u64) -> impl Strategy<Value = GroupElement> {
    (-9i64..9, -9i64..9, -9i64..9).prop_map(move |(p, q, c)| {
        let z = rat(r as i64 * p * q, 2) + rat(c, 1);
        GroupElement::new(
            ExactScalar::from_rational(z),
            [ExactScalar::from_int(p), ExactScalar::from_int(q)],
            0,
        )
    })
}

proptest! {
    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn reciprocal(a in nonzero_scalar()) {
        prop_assert!((&a * &a.recip()).is_one());
    }

    #[test]
    fn sign_matches_floating_point(a in scalar()) {
        let f = a.to_f64();
        if f.abs() > 1e-9 {
            prop_assert_eq!(a.sign() == Sign::Pos, f > 0.0);
        }
        prop_assert_eq!(a.sign() == Sign::Zero, a.is_zero());
    }

    #[test]
    fn display_parses_back(a in scalar()) {
        let back: ExactScalar = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn floor_brackets(a in scalar()) {
        let f = ExactScalar::from_bigint(a.floor());
        prop_assert!(f <= a);
        prop_assert!(a < &f + ExactScalar::one());
    }

    #[test]
    fn trig_addition(l in angle(), s in -12i64..12, t in -12i64..12) {
        let (cs, ss) = l.trig_multiple(s);
        let (ct, st) = l.trig_multiple(t);
        let (c, sn) = l.trig_multiple(s + t);
        prop_assert_eq!(c, &cs * &ct - &ss * &st);
        prop_assert_eq!(sn, &ss * &ct + &cs * &st);
    }

    #[test]
    fn exp_is_additive(b in structure(), s in -8i64..8, t in -8i64..8) {
        prop_assert_eq!(b.exp(s).mul(&b.exp(t)), b.exp(s + t));
        prop_assert!(b.exp(t).det().is_one());
    }

    #[test]
    fn group_axioms(b in structure(), r in 1u64..7, g in element(), h in element(), k in element()) {
        let grp = Osc::standard(r, b);
        prop_assert_eq!(
            grp.multiply(&grp.multiply(&g, &h), &k),
            grp.multiply(&g, &grp.multiply(&h, &k))
        );
        prop_assert!(grp.multiply(&g, &grp.invert(&g)).is_identity());
        prop_assert!(grp.multiply(&grp.invert(&g), &g).is_identity());
        prop_assert_eq!(grp.multiply(&g, &GroupElement::identity()), g.clone());
    }

    #[test]
    fn gamma_is_closed(
        b in structure(),
        (r, g, h) in (1u64..7).prop_flat_map(|r| (Just(r), gamma_element(r), gamma_element(r))),
    ) {
        let grp = Osc::standard(r, b);
        prop_assert!(gamma_member(&g, r) && gamma_member(&h, r));
        prop_assert!(gamma_member(&grp.multiply(&g, &h), r));
        prop_assert!(gamma_member(&grp.invert(&g), r));
    }

    #[test]
    fn gamma_preserving_automorphisms(
        cell_idx in 0usize..72,
        s_idx in 0usize..12,
        i in -3i64..6,
        j in -3i64..6,
        m in rational(),
        g in element(),
        h in element(),
    ) {
        let cell = all_cells(4)[cell_idx].clone();
        let b = cell.point.structure(cell.lambda).unwrap();
        let set = integer_s_set(&b);
        let (s, mu) = set[s_idx % set.len()].clone();
        let base = gamma_coset_base(&s, cell.r);
        let ri = cell.r as i64;
        let bv = [
            ExactScalar::from_rational(&base[0] + rat(i, ri)),
            ExactScalar::from_rational(&base[1] + rat(j, ri)),
        ];
        let grp = Osc::standard(cell.r, b);
        let phi = Isomorphism::automorphism(
            &grp, mu, ExactScalar::from_int(mu as i64), ExactScalar::from_rational(m), bv, s.to_mat2(),
        ).unwrap();
        prop_assert!(is_gamma_preserving(&phi, cell.r));
        for gen in gamma_generators() {
            prop_assert!(gamma_member(&phi.apply(&gen), cell.r));
        }
        prop_assert_eq!(
            phi.apply(&grp.multiply(&g, &h)),
            grp.multiply(&phi.apply(&g), &phi.apply(&h))
        );
        let inv = phi.inverse().unwrap();
        prop_assert_eq!(inv.apply(&phi.apply(&g)), g.clone());
        let twice = phi.compose(&phi).unwrap();
        prop_assert_eq!(twice.apply(&g), phi.apply(&phi.apply(&g)));
    }

    #[test]
    fn classification_is_idempotent(cell_idx in 0usize..90, pick in 0usize..1000, z in rational()) {
        let cell = all_cells(5)[cell_idx].clone();
        let b = cell.point.structure(cell.lambda).unwrap();
        let pts = admissible_xi(cell.r, &b.exp_integer().unwrap());
        let xi = pts[pick % pts.len()].clone();
        let spec = LatticeSpec::new(cell.r, b, xi, ExactScalar::from_rational(z));
        let opts = ClassifyOptions::default();
        let data = classify_spec(&spec, &opts).unwrap().data;
        let again = classify_spec(&data.to_spec().unwrap(), &opts).unwrap().data;
        prop_assert_eq!(again, data);
    }

    #[test]
    fn reduction_lands_in_half_domain(x in rational(), y in rational()) {
        prop_assume!(y != rat(0, 1));
        let (x, y) = (ExactScalar::from_rational(x), ExactScalar::from_rational(y));
        let red = reduce_fundamental(&x, &y).unwrap();
        let p = red.point.clone();
        prop_assert!(FundamentalPoint::new(p.x().clone(), p.y().clone()).is_ok());
        let c = red.conjugator.to_mat2();
        let lhs = c.mul(&osclat_core::group::bxy_matrix(&x, &y).unwrap()).mul(&c.inverse().unwrap());
        let sign = ExactScalar::from_int(if red.flip { -1 } else { 1 });
        prop_assert_eq!(lhs, osclat_core::group::bxy_matrix(p.x(), p.y()).unwrap().scale(&sign));
        let twice = reduce_fundamental(p.x(), p.y()).unwrap();
        prop_assert_eq!(twice.point, p);
        prop_assert!(twice.conjugator.is_identity() && !twice.flip);
    }

    #[test]
    fn det_of_exp_minus_identity(l in angle(), class_idx in 0usize..6) {
        let point = match osclat_core::classify::lattice::required_point(l) {
            Some(p) => p,
            None => PointClass::ALL[class_idx].sample(),
        };
        let e = point.structure(l).unwrap().exp_integer().unwrap();
        let a = e.to_mat2().sub(&Mat2::identity()).det();
        let (c, _) = l.trig();
        prop_assert_eq!(a.clone(), ExactScalar::from_int(2) - ExactScalar::from_int(2) * c);
        let v = a.to_integer().unwrap();
        prop_assert!(v >= BigInt::from(0) && v <= BigInt::from(4));
    }

    #[test]
    fn s_set_commutes(class_idx in 0usize..6) {
        let p = PointClass::ALL[class_idx].sample();
        let b = p.structure(AngleSymbol::new(AngleBase::Pi, 0)).unwrap();
        for (s, mu) in integer_s_set(&b) {
            let sm = s.to_mat2();
            prop_assert_eq!(sm.mul(b.bxy()), b.bxy().mul(&sm).scale(&ExactScalar::from_int(mu as i64)));
            prop_assert_eq!(s.det(), BigInt::from(mu));
            prop_assert!(s != IntMat2::from_i64(0, 0, 0, 0));
        }
    }
}
