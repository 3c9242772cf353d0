use std::sync::OnceLock;

use a1tower::field::{make_field, rat, ratio, Field, FieldElem};
use a1tower::groebner::{ideal_member, is_unit_ideal, normal_form, Ideal};
use a1tower::poly::{parse_poly, Monomial, MonomialOrder, Poly, PolyRing, Ring};
use a1tower::schemes::{
    compose, evaluate_morphism, fiber_product, maps_equal, point_on, QuasiAffine, RatPoint,
};
use a1tower::tower::{build_modified, endpoint, Breaks, TowerContext, Variant};
use proptest::prelude::*;

fn tower() -> &'static TowerContext {
    static CTX: OnceLock<TowerContext> = OnceLock::new();
    CTX.get_or_init(|| {
        let k = make_field(rat(1), rat(2), rat(3)).unwrap();
        TowerContext::build(&k, 3, Breaks::default()).unwrap()
    })
}

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (-9i64..=9, 1i64..=5)
}

/// Points of `Y_n` built from branch points: each `x_j` is some `l_i`, so every `y_j` is 0.
fn branch_point(k: &Field, x0: (i64, i64), picks: &[usize]) -> RatPoint {
    let mut c = vec![k.from_rational(ratio(x0.0, x0.1))];
    for &i in picks {
        c.push(k.param(i % 3 + 1));
        c.push(k.zero());
    }
    RatPoint::new(c)
}

fn ring3() -> Ring {
    let k = make_field(rat(1), rat(2), rat(3)).unwrap();
    PolyRing::from_names(["x", "y", "z"], &k, MonomialOrder::Grevlex).unwrap()
}

fn poly_strategy() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..3, 0u32..3, 0u32..2), -4i64..=4), 1..5).prop_map(|terms| {
        let r = ring3();
        let k = r.field().clone();
        Poly::from_terms(
            &r,
            terms
                .into_iter()
                .map(|((a, b, c), v)| (Monomial::new(vec![a, b, c]), k.from_int(v))),
        )
    })
}

fn fixed_ideal() -> Ideal {
    let r = ring3();
    let gens = ["x^2 - y*z + 1", "x*y - z", "y^2 - x*z"].map(|g| parse_poly(g, &r).unwrap());
    Ideal::new(&r, gens).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_additive(p in poly_strategy(), q in poly_strategy()) {
        let i = fixed_ideal();
        let lhs = normal_form(&(&p + &q), &i).unwrap();
        let rhs = normal_form(&(&normal_form(&p, &i).unwrap() + &normal_form(&q, &i).unwrap()), &i).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn combinations_are_members(p in poly_strategy(), q in poly_strategy()) {
        let i = fixed_ideal();
        let g = &i.generators()[0];
        let h = &i.generators()[2];
        prop_assert!(ideal_member(&(&(&p * g) + &(&q * h)), &i).unwrap());
    }

    #[test]
    fn unit_ideals_have_no_small_zeros(p in poly_strategy(), c in 1i64..=3) {
        let r = ring3();
        let k = r.field().clone();
        let shifted = &(&p * &p) + &Poly::from_int(&r, c);
        let i = Ideal::new(&r, [shifted.clone(), Poly::var(&r, 0)]).unwrap();
        if is_unit_ideal(&i).unwrap() {
            for a in -2i64..=2 {
                for b in -2i64..=2 {
                    let pt = [k.zero(), k.from_int(a), k.from_int(b)];
                    prop_assert!(!shifted.evaluate(&pt).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn composition_matches_evaluation(x0 in small_rational(), picks in prop::collection::vec(0usize..3, 3)) {
        let t = tower();
        let k = &t.field;
        for n in 2..=3 {
            let p = branch_point(k, x0, &picks[..n]);
            prop_assert!(point_on(&t.y[n], &p).unwrap());
            for (outer, inner) in [(&t.phi[n - 1], &t.psi[n]), (&t.psi[n - 1], &t.phi[n]), (&t.psi[n - 1], &t.psi[n])] {
                let direct = evaluate_morphism(&compose(outer, inner).unwrap(), &p).unwrap();
                let stepwise = evaluate_morphism(outer, &evaluate_morphism(inner, &p).unwrap()).unwrap();
                prop_assert_eq!(direct, stepwise);
            }
        }
    }

    #[test]
    fn modified_maps_are_slices_of_h(num in prop::sample::select(vec![-7i64, -3, -2, -1, 1, 2, 3, 5]), den in 1i64..=4) {
        let t = tower();
        let k = &t.field;
        let a = k.from_rational(ratio(num, den));
        let m = build_modified(t, &a, Variant::Plain).unwrap();
        let h = endpoint(&t.cover.h, &a, &t.cover.e).unwrap();
        prop_assert!(maps_equal(&h, &m.map).unwrap());
        let got = evaluate_morphism(&m.map, &RatPoint::new(vec![k.zero(), k.lambda()])).unwrap();
        prop_assert_eq!(got, RatPoint::new(vec![a.clone(), k.zero(), &a * &k.lambda()]));
        let tilde = build_modified(t, &a, Variant::Tilde).unwrap();
        let got = evaluate_morphism(&tilde.map, &RatPoint::new(vec![k.zero(), -&k.lambda()])).unwrap();
        prop_assert_eq!(got, RatPoint::new(vec![a.clone(), k.zero(), -&(&a * &k.lambda())]));
    }

    #[test]
    fn rho_is_constant_along_branch_lines(x0 in small_rational(), i in 1usize..=3) {
        let t = tower();
        let k = &t.field;
        let l = k.param(i);
        let x0 = k.from_rational(ratio(x0.0, x0.1));
        let got = evaluate_morphism(&t.rho1, &RatPoint::new(vec![x0.clone(), l.clone(), k.zero()])).unwrap();
        prop_assert_eq!(got, RatPoint::new(vec![x0, l, k.zero()]));
    }
}

/// Pairs of named points over the same base point have exactly one lift to the product.
#[test]
fn fiber_product_points_on_named_points() {
    let t = tower();
    let fp = fiber_product(&t.psi[1], &t.phi[1], None).unwrap();
    let product = QuasiAffine::affine("Y1 x_A1 Y1", &fp.ring);
    let named = [&t.alpha[1], &t.beta[1]];
    let mut pairs = 0;
    for p in named {
        for q in named {
            let over_p = evaluate_morphism(&t.psi[1], p).unwrap();
            let over_q = evaluate_morphism(&t.phi[1], q).unwrap();
            match fp.pair(p, q) {
                Ok(z) => {
                    assert_eq!(over_p, over_q);
                    assert!(point_on(&product, &z).unwrap());
                    assert_eq!(&evaluate_morphism(&fp.left, &z).unwrap(), p);
                    assert_eq!(&evaluate_morphism(&fp.right, &z).unwrap(), q);
                    pairs += 1;
                }
                Err(_) => assert_ne!(over_p, over_q),
            }
        }
    }
    // (alpha1, beta1) and (beta1, alpha1)
    assert_eq!(pairs, 2);
}

/// Both presentations of `Y_2` see the same points on a sample grid.
#[test]
fn point_sets_agree_across_presentations() {
    let t = tower();
    let k = &t.field;
    let fp = fiber_product(&t.psi[1], &t.phi[1], None).unwrap();
    let product = QuasiAffine::affine("Y1 x_A1 Y1", &fp.ring);
    let vals = [k.zero(), k.one(), k.from_int(2), k.lambda(), -&k.lambda()];
    let mut on = 0;
    for idx in 0..vals.len().pow(5) {
        let c: Vec<FieldElem> = (0..5)
            .map(|j| vals[idx / vals.len().pow(j) % vals.len()].clone())
            .collect();
        let closed = RatPoint::new(c.clone());
        let tensor = RatPoint::new(vec![
            c[0].clone(),
            c[1].clone(),
            c[2].clone(),
            c[1].clone(),
            c[3].clone(),
            c[4].clone(),
        ]);
        let a_on = point_on(&t.y[2], &closed).unwrap();
        assert_eq!(
            a_on,
            point_on(&product, &tensor).unwrap(),
            "{closed} vs {tensor}"
        );
        on += a_on as usize;
    }
    assert!(on > 0);
    assert!(point_on(&t.y[2], &t.alpha[2]).unwrap() && point_on(&t.y[2], &t.beta[2]).unwrap());
}
