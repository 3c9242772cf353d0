use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::groebner::Ideal;
use crate::poly::Poly;
use crate::rigidity::{
    certify_e_with_budget, certify_gm_with_budget, certify_nonreduced_line_with_budget,
    search_small_e_maps, RigidityStatus, SEARCH_RADIUS,
};
use crate::schemes::{
    compose, evaluate_morphism, excluded_violation, localize, localized_iso, maps_equal,
    morphism_avoids_excluded, point_on, QuasiAffine, RatPoint, RingMap,
};
use crate::tower::{
    build_modified, check_nisnevich, endpoint, fiber_of_phi, lift_to_level, presentation_matches,
    product_matches_w, x_index, FiberKind, Variant,
};

use super::{Suite, Verdict};

fn pt(coords: Vec<FieldElem>) -> RatPoint {
    RatPoint::new(coords)
}

/// `m(p)` after confirming `p` lies on the domain.
fn eval_on(
    m: &RingMap,
    domain: &QuasiAffine,
    p: &RatPoint,
    v: &mut Verdict,
) -> Result<Option<RatPoint>> {
    if !point_on(domain, p)? {
        v.failures
            .push(format!("{p} is not a point of {}", domain.label()));
        return Ok(None);
    }
    Ok(Some(evaluate_morphism(m, p)?))
}

fn expect_point(v: &mut Verdict, what: &str, got: Option<RatPoint>, want: &RatPoint) {
    if let Some(got) = got {
        v.require(&got == want, || {
            format!("{what}: got {got}, expected {want}")
        });
    }
}

pub(super) fn c1(s: &Suite) -> Result<Verdict> {
    let e = &s.ctx.cover.e;
    let g = &e.ideal().generators()[0];
    let jac = Ideal::new(
        e.ring(),
        [g.clone(), g.partial_derivative(0), g.partial_derivative(1)],
    )?;
    let mut v = Verdict::new();
    let gb = jac.groebner_basis()?;
    v.require(gb.is_unit(), || {
        let polys: Vec<String> = gb.polys().iter().map(|p| p.to_string()).collect();
        format!("Jacobian ideal {jac} has basis [{}]", polys.join(", "))
    });
    v.evidence = Some(serde_json::to_value(gb.summary()).expect("serializable"));
    Ok(v)
}

pub(super) fn c2(s: &Suite) -> Result<Verdict> {
    let mut v = Verdict::new();
    for n in 1..=s.cfg.n {
        let ok = presentation_matches(s.ctx, n)?;
        v.require(ok, || {
            format!("level {n}: iterated pullback differs from {}", s.ctx.x[n])
        });
    }
    Ok(v)
}

pub(super) fn c3(s: &Suite) -> Result<Verdict> {
    let ctx = s.ctx;
    let mut v = Verdict::new();
    let mut maps: Vec<&RingMap> = Vec::new();
    for i in 1..=s.cfg.n {
        maps.push(&ctx.phi[i]);
        maps.push(&ctx.psi[i]);
    }
    maps.push(&ctx.rho1);
    for m in maps {
        if let Some(bad) = m.first_violation()? {
            v.failures.push(format!(
                "{m}\nsends a relation to {bad}, nonzero in {}",
                m.target()
            ));
        }
    }
    for i in 1..=s.cfg.n {
        for m in [&ctx.phi[i], &ctx.psi[i]] {
            let ok = morphism_avoids_excluded(m, &ctx.x[i], &ctx.x[i - 1])?;
            v.require(ok, || {
                format!("{} meets the excluded locus of {}", m.label(), ctx.x[i - 1])
            });
        }
    }
    Ok(v)
}

pub(super) fn c4(s: &Suite) -> Result<Verdict> {
    let ctx = s.ctx;
    let mut v = Verdict::new();
    if s.cfg.n < 2 {
        v.skipped = Some("needs n >= 2".into());
        return Ok(v);
    }
    for n in 2..=s.cfg.n {
        let a = compose(&ctx.phi[n - 1], &ctx.psi[n])?;
        let b = compose(&ctx.psi[n - 1], &ctx.phi[n])?;
        let ok = maps_equal(&a, &b)?;
        v.require(ok, || format!("level {n}: {a}\ndiffers from\n{b}"));
    }
    Ok(v)
}

pub(super) fn c5(s: &Suite) -> Result<Verdict> {
    let ctx = s.ctx;
    let mut v = Verdict::new();
    for i in 1..=s.cfg.n {
        for (name, p) in [("alpha", &ctx.alpha[i]), ("beta", &ctx.beta[i])] {
            let ok = point_on(&ctx.x[i], p)?;
            v.require(ok, || format!("{name}{i} = {p} is not on {}", ctx.x[i]));
        }
    }
    let k = &ctx.field;
    let zero = pt(vec![k.zero()]);
    let one = pt(vec![k.one()]);
    let (a1, b1) = (&ctx.alpha[1], &ctx.beta[1]);
    expect_point(
        &mut v,
        "psi1(alpha1)",
        Some(evaluate_morphism(&ctx.psi[1], a1)?),
        &zero,
    );
    expect_point(
        &mut v,
        "phi1(beta1)",
        Some(evaluate_morphism(&ctx.phi[1], b1)?),
        &zero,
    );
    expect_point(
        &mut v,
        "psi1(beta1)",
        Some(evaluate_morphism(&ctx.psi[1], b1)?),
        &one,
    );
    expect_point(
        &mut v,
        "phi1(alpha1)",
        Some(evaluate_morphism(&ctx.phi[1], a1)?),
        &one,
    );
    Ok(v)
}

pub(super) fn c6(s: &Suite) -> Result<Verdict> {
    let ctx = s.ctx;
    let mut v = Verdict::new();
    for n in 1..=s.cfg.n {
        let (a, b) = (&ctx.alpha[n], &ctx.beta[n]);
        let what = |m: &str, p: &str| format!("{m}{n}({p}{n})");
        expect_point(
            &mut v,
            &what("psi", "alpha"),
            Some(evaluate_morphism(&ctx.psi[n], a)?),
            &ctx.beta[n - 1],
        );
        expect_point(
            &mut v,
            &what("psi", "beta"),
            Some(evaluate_morphism(&ctx.psi[n], b)?),
            &ctx.alpha[n - 1],
        );
        expect_point(
            &mut v,
            &what("phi", "alpha"),
            Some(evaluate_morphism(&ctx.phi[n], a)?),
            &ctx.alpha[n - 1],
        );
        v.require(a != b, || format!("alpha{n} = beta{n} = {a}"));
    }
    Ok(v)
}

pub(super) fn c7(s: &Suite) -> Result<Verdict> {
    let ctx = s.ctx;
    let k = &ctx.field;
    let mut v = Verdict::new();
    let y1 = ctx.y[1].ring();
    let x0 = Poly::var(y1.ring(), 0);
    let loc = localize(y1, &x0)?;
    let inverse = RingMap::from_strs(
        "rho1^-1",
        &ctx.a1e,
        &loc.ring,
        &["x0", "x1", &format!("{}*y1", loc.var)],
    )?;
    let ok = localized_iso(&ctx.rho1, &x0, &inverse)?;
    v.require(ok, || {
        format!(
            "{}\nis not inverted by\n{inverse}\nafter inverting x0",
            ctx.rho1
        )
    });

    let p = pt(vec![k.zero(), k.zero(), k.lambda()]);
    let on_source = point_on(&QuasiAffine::affine("A1 x E", &ctx.a1e), &p)?;
    v.require(on_source, || format!("{p} is not on A1 x E"));
    let image = evaluate_morphism(&ctx.rho1, &p)?;
    let origin = pt(vec![k.zero(); 3]);
    v.require(image == origin, || {
        format!("rho1{p} = {image}, expected {origin}")
    });
    let inside = point_on(&ctx.x[1], &image)?;
    v.require(!inside, || {
        format!("rho1{p} = {image} lies in {}", ctx.x[1])
    });
    Ok(v)
}

pub(super) fn c8(s: &Suite) -> Result<Verdict> {
    let out = check_nisnevich(s.ctx)?;
    let mut v = Verdict::new();
    let c = &s.ctx.cover;
    v.require(out.open_inclusion, || {
        format!(
            "{} is not the inclusion of A1 minus 0 ({})",
            c.p2.label(),
            c.v2
        )
    });
    v.require(out.etale, || {
        format!("2*y1 vanishes at a point of {}", c.v1)
    });
    v.require(out.fiber_single_point, || {
        format!(
            "the fiber of p1 over 0 in {} is not the single point (0, L)",
            c.v1
        )
    });
    v.require(out.w_matches, || {
        format!("{} differs from {}", c.w_product, c.w)
    });
    v.evidence = Some(serde_json::to_value(out).expect("serializable"));
    Ok(v)
}

pub(super) fn c9(s: &Suite) -> Result<Verdict> {
    let ctx = s.ctx;
    let c = &ctx.cover;
    let mut v = Verdict::new();
    for (h, p, dom) in [(&c.h1, &c.p1, &c.v1), (&c.h2, &c.p2, &c.v2)] {
        let over = compose(&ctx.psi[1], h)?;
        let ok = maps_equal(&over, p)?;
        v.require(ok, || {
            format!("psi1 . {} = {over}, expected {p}", h.label())
        });
        if let Some(bad) = h.first_violation()? {
            v.failures.push(format!("{h} sends a relation to {bad}"));
        } else if let Some(e) = excluded_violation(h, dom, &ctx.x[1])? {
            v.failures
                .push(format!("{h} maps part of {} into V{e}", dom.label()));
        }
    }
    Ok(v)
}

pub(super) fn c10(s: &Suite) -> Result<Verdict> {
    let ctx = s.ctx;
    let c = &ctx.cover;
    let k = &ctx.field;
    let mut v = Verdict::new();
    let h_at_1 = endpoint(&c.h, &k.one(), &c.e)?;
    let ok = maps_equal(&h_at_1, &c.h1)?;
    v.require(ok, || format!("{h_at_1} differs from {}", c.h1));
    let h2_w = compose(&c.h2, &c.w_to_v2)?;
    let h_at_0 = endpoint(&c.h, &k.zero(), &c.e)?;
    let ok = maps_equal(&h_at_0, &h2_w)?;
    v.require(ok, || format!("{h_at_0} differs from {h2_w}"));

    for n in 1..=s.cfg.n {
        let hn = lift_to_level(ctx, n, &c.h, &c.p_line_w, &c.line_w)?;
        let h1n = lift_to_level(ctx, n, &c.h1, &c.p1, &c.w)?;
        let h2n = lift_to_level(ctx, n, &c.h2, &c.p2, &c.v2)?;
        let base = &h1n.product.ring;
        let top = endpoint(&hn.map, &k.one(), base)?;
        let ok = maps_equal(&top, &h1n.map)?;
        v.require(ok, || {
            format!("level {n}: H^n(1) = {top}\ndiffers from {}", h1n.map)
        });

        // W x X_n -> V2 x X_n, identity on the X_n coordinates
        let (src, tgt) = (&h2n.product.ring, base);
        let tr = tgt.ring();
        let images = (0..src.nvars())
            .map(|i| Poly::var(tr, if i == 0 { 0 } else { i + 1 }))
            .collect();
        let pr = RingMap::new("W x X_n -> V2 x X_n", src, tgt, images)?.checked()?;
        let bottom_expected = compose(&h2n.map, &pr)?;
        let bottom = endpoint(&hn.map, &k.zero(), base)?;
        let ok = maps_equal(&bottom, &bottom_expected)?;
        v.require(ok, || {
            format!("level {n}: H^n(0) = {bottom}\ndiffers from {bottom_expected}")
        });
    }
    Ok(v)
}

pub(super) fn c11(s: &Suite) -> Result<Verdict> {
    let ctx = s.ctx;
    let c = &ctx.cover;
    let k = &ctx.field;
    let mut v = Verdict::new();
    let plus = pt(vec![k.zero(), k.lambda()]);
    let one = pt(vec![k.one()]);
    let got = eval_on(&c.h1, &c.v1, &plus, &mut v)?;
    expect_point(&mut v, "h1(0, L)", got, &ctx.alpha[1]);
    let got = eval_on(&c.h2, &c.v2, &one, &mut v)?;
    expect_point(&mut v, "h2(1)", got, &ctx.beta[1]);
    for n in 0..=s.cfg.n {
        let l1 = lift_to_level(ctx, n, &c.h1, &c.p1, &c.v1)?;
        let p = l1.product.pair(&plus, &ctx.beta[n])?;
        let got = eval_on(&l1.map, &l1.domain, &p, &mut v)?;
        expect_point(
            &mut v,
            &format!("h1^{n}((0, L), beta{n})"),
            got,
            &ctx.alpha[n + 1],
        );
        let l2 = lift_to_level(ctx, n, &c.h2, &c.p2, &c.v2)?;
        let p = l2.product.pair(&one, &ctx.alpha[n])?;
        let got = eval_on(&l2.map, &l2.domain, &p, &mut v)?;
        expect_point(
            &mut v,
            &format!("h2^{n}((1), alpha{n})"),
            got,
            &ctx.beta[n + 1],
        );
    }
    Ok(v)
}

pub(super) fn c12(s: &Suite) -> Result<Verdict> {
    let ctx = s.ctx;
    let mut v = Verdict::new();
    for n in 1..=s.cfg.n {
        let m = n - 1;
        // last x-coordinate of alpha_m is 1 for m even, of beta_m for m odd
        for (name, q, last_is_one) in [
            ("alpha", &ctx.alpha[m], m % 2 == 0),
            ("beta", &ctx.beta[m], m % 2 == 1),
        ] {
            let expected = if last_is_one {
                FiberKind::EllipticE
            } else {
                FiberKind::NonreducedPuncturedLine
            };
            let f = fiber_of_phi(ctx, n, q)?;
            v.require(f.kind == expected, || {
                format!("phi{n}^-1({name}{m}): {:?}, expected {expected:?}", f.kind)
            });
            v.require(f.verified, || {
                format!(
                    "phi{n}^-1({name}{m}) = {}\nis not isomorphic to {} via\n{}\n{}",
                    f.fiber, f.model, f.to_model, f.from_model
                )
            });
            let a = &q.coords()[x_index(m)];
            v.require(a.is_one() == last_is_one, || {
                format!("{name}{m} = {q} has unexpected x{m}")
            });
        }
    }
    Ok(v)
}

pub(super) fn c13(s: &Suite) -> Result<Verdict> {
    let k = &s.ctx.field;
    let (d, budget) = (s.cfg.degree_bound, s.cfg.budget);
    let mut v = Verdict::new();
    let e = certify_e_with_budget(k, d, budget)?;
    let gm = certify_gm_with_budget(k, d, budget)?;
    let nr = certify_nonreduced_line_with_budget(k, d, budget)?;
    // a found map is a failure regardless; otherwise an unfinished slice is a budget outcome
    let certs = [&e, &gm, &nr];
    if !certs
        .iter()
        .any(|c| matches!(c.status, RigidityStatus::FoundMap(_)))
    {
        if let Some(b) = certs.iter().find_map(|c| match c.status {
            RigidityStatus::Inconclusive(b) => Some(b),
            _ => None,
        }) {
            return Err(Error::BudgetExceeded(b));
        }
    }
    for cert in [&e, &gm, &nr] {
        v.require(cert.certified(), || {
            format!("{:?} at degree bound {d}: {:?}", cert.target, cert.status)
        });
    }
    // independent cross-check of each certified E slice
    if e.certified() {
        for slice in e.slices.iter().filter(|s| !s.vacuous) {
            if let Some((x, y)) = search_small_e_maps(k, slice.degree, SEARCH_RADIUS) {
                v.failures.push(format!(
                    "degree {} certified, yet x = {x:?}, y = {y:?} solves y^2 = f(x)",
                    slice.degree
                ));
            }
        }
    }
    // constant maps are solutions once nonconstancy is dropped
    let f = crate::poly::build_f(s.ctx.cover.e.ring(), "x1")?;
    for i in 1..=3 {
        let l = k.param(i);
        let val = f.evaluate(&[l.clone(), k.zero()])?;
        v.require(val.is_zero(), || {
            format!("constant map ({l}, 0) does not lie on E")
        });
    }
    v.evidence = Some(serde_json::json!({ "E": e, "Gm": gm, "nonreduced": nr }));
    Ok(v)
}

pub(super) fn c14(s: &Suite) -> Result<Verdict> {
    let ctx = s.ctx;
    let c = &ctx.cover;
    let k = &ctx.field;
    let mut v = Verdict::new();
    let plus = pt(vec![k.zero(), k.lambda()]);
    let minus = pt(vec![k.zero(), -&k.lambda()]);
    for a in [
        k.from_int(2),
        k.from_int(-1),
        k.from_rational(crate::field::ratio(1, 2)),
    ] {
        let plain = build_modified(ctx, &a, Variant::Plain)?;
        let tilde = build_modified(ctx, &a, Variant::Tilde)?;
        let ha = endpoint(&c.h, &a, &c.e)?;
        let ok = maps_equal(&ha, &plain.map)?;
        v.require(ok, || format!("H({a}) = {ha} differs from {}", plain.map));

        let q_plus = evaluate_morphism(&ctx.rho1, &pt(vec![a.clone(), k.zero(), k.lambda()]))?;
        let got = eval_on(&plain.map, &plain.domain, &plus, &mut v)?;
        expect_point(&mut v, &format!("h1^a(0, L), a = {a}"), got, &q_plus);
        let q_minus = evaluate_morphism(&ctx.rho1, &pt(vec![a.clone(), k.zero(), -&k.lambda()]))?;
        let got = eval_on(&tilde.map, &tilde.domain, &minus, &mut v)?;
        expect_point(&mut v, &format!("h1~^a(0, -L), a = {a}"), got, &q_minus);
    }
    let ok = product_matches_w(ctx, &c.v1_tilde)?;
    v.require(ok, || {
        format!("{} x_A1 V2 differs from {}", c.v1_tilde, c.w)
    });

    let ar = ctx.a1e.ring();
    for i in 1..=3 {
        let l = k.param(i);
        // rho1 on the line through (l_i, 0) keeps x1 = l_i, y1 = 0
        let slice = [
            Poly::var(ar, 0),
            Poly::constant(ar, l.clone()),
            Poly::zero(ar),
        ];
        for (j, img) in ctx.rho1.images().iter().enumerate().skip(1) {
            let r = img.substitute(&slice)?;
            let want = if j == 1 { l.clone() } else { k.zero() };
            v.require(r.as_constant() == Some(want.clone()), || {
                format!("rho1 on A1 x {{({l}, 0)}}: coordinate {j} is {r}")
            });
        }
        let at0 = evaluate_morphism(&ctx.rho1, &pt(vec![k.zero(), l.clone(), k.zero()]))?;
        let got = eval_on(&c.h2, &c.v2, &pt(vec![l.clone()]), &mut v)?;
        expect_point(&mut v, &format!("h2({l})"), got, &at0);
    }
    Ok(v)
}
