//! The tower `Y_n ⊇ X_n` over `K`, its structure maps, the points
//! `alpha_n`, `beta_n`, and the two-piece cover of the line used to glue
//! maps into `X_{n+1}`.
//!
//! Level `i` lives in `K[x0, x1, y1, ..., xi, yi]` modulo
//! `y_j^2 - x_{j-1}^2 f(x_j)`, `1 <= j <= i`. Tower rings use a weighted
//! order with `deg y = 3`, `deg x = 1`, which makes `y_j^2` the leading term
//! of every relation; the relations are then already a Gröbner basis.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::groebner::{ideal_equal, is_unit_ideal, Ideal};
use crate::poly::{build_f, default_budget, MonomialOrder, Poly, PolyRing, Ring, VarSet};
use crate::schemes::{
    check_iso, compose, evaluate_morphism, excluded_violation, fiber_product, line_times,
    locus_covered, maps_equal, point_on, quasi_affine_iso, FiberProduct, PresentedRing,
    QuasiAffine, RatPoint, RingMap,
};

/// Deliberate corruptions of the construction, used to exercise failure paths.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Breaks {
    /// Keep `(l1, 0)` in `V1`.
    pub retain_lambda1_point: bool,
    /// Do not remove the origin from `X1` (hence from every `X_n`).
    pub keep_origin: bool,
    /// Use `y1 -> y1` instead of `y1 -> x0*y1` in `rho1`.
    pub corrupt_rho: bool,
    /// Remove `(0, L)` from `V1` as well as `(0, -L)`.
    pub exclude_plus_lambda: bool,
}

const X_WEIGHT: u32 = 1;
const Y_WEIGHT: u32 = 3;

/// Position of `x_j` in the level ring.
pub fn x_index(j: usize) -> usize {
    if j == 0 {
        0
    } else {
        2 * j - 1
    }
}

/// Position of `y_j` (`j >= 1`) in the level ring.
pub fn y_index(j: usize) -> usize {
    2 * j
}

fn level_names(i: usize) -> Vec<String> {
    let mut names = vec!["x0".to_string()];
    for j in 1..=i {
        names.push(format!("x{j}"));
        names.push(format!("y{j}"));
    }
    names
}

/// Ring with the given `x`/`y` names, weighted so `y` dominates.
fn weighted_ring(field: &Field, names: Vec<String>, budget: u64) -> Result<Ring> {
    let weights: Vec<u32> = names
        .iter()
        .map(|n| {
            if n.starts_with('y') {
                Y_WEIGHT
            } else {
                X_WEIGHT
            }
        })
        .collect();
    Ok(PolyRing::with_budget(
        VarSet::new(names)?,
        field.clone(),
        MonomialOrder::Weighted(weights.into()),
        budget,
    ))
}

/// `y^2 - c^2 f(x)` for polynomials `c`, `x`, `y` of one ring.
fn curve_relation(y: &Poly, c: &Poly, x: &Poly) -> Result<Poly> {
    let ring = y.ring();
    let f = build_f(
        &PolyRing::from_names(["t"], ring.field(), MonomialOrder::Grevlex)?,
        "t",
    )?;
    let fx = f.substitute_into(std::slice::from_ref(x), ring)?;
    Ok(&(y * y) - &(&(c * c) * &fx))
}

fn const_poly(ring: &Ring, c: &FieldElem) -> Poly {
    Poly::constant(ring, c.clone())
}

/// The elliptic curve, the line and the pieces of the cover.
pub struct CoverDatum {
    /// `K[x1, y1]/(y1^2 - f(x1))`.
    pub e: PresentedRing,
    pub v1: QuasiAffine,
    pub v1_tilde: QuasiAffine,
    pub v2: QuasiAffine,
    /// `V1 ∖ {(0, L)}`, the ring of `E`.
    pub w: QuasiAffine,
    /// `V1 ×_{A1} V2` as an honest fiber product.
    pub w_product: QuasiAffine,
    pub w_fiber: FiberProduct,
    pub p1: RingMap,
    pub p2: RingMap,
    /// `W -> V2`, the second projection in point coordinates.
    pub w_to_v2: RingMap,
    pub h1: RingMap,
    pub h2: RingMap,
    /// `A1 × W` with the line coordinate `x0` first.
    pub line_w: QuasiAffine,
    /// `A1 × W -> A1`, `(x0, x1, y1) -> x1`.
    pub p_line_w: RingMap,
    /// Restriction of `rho1` to `A1 × W`.
    pub h: RingMap,
}

pub struct TowerContext {
    pub field: Field,
    pub n: usize,
    pub breaks: Breaks,
    pub budget: u64,
    /// `Y_0 = A1 = K[x0]`.
    pub line: PresentedRing,
    /// `Y_0, ..., Y_{n+1}` (one level above `n`, for lifts).
    pub y: Vec<QuasiAffine>,
    pub x: Vec<QuasiAffine>,
    /// `phi[i]` is the projection `Y_i -> Y_{i-1}`; `phi[0]` is the identity of `Y_0`.
    pub phi: Vec<RingMap>,
    pub psi: Vec<RingMap>,
    /// `Y_i -> A1`, `x0 -> x0`.
    pub to_line: Vec<RingMap>,
    /// `K[x0, x1, y1]/(y1^2 - f(x1))`.
    pub a1e: PresentedRing,
    pub rho1: RingMap,
    pub alpha: Vec<RatPoint>,
    pub beta: Vec<RatPoint>,
    pub cover: CoverDatum,
}

impl TowerContext {
    pub fn build(field: &Field, n: usize, breaks: Breaks) -> Result<TowerContext> {
        Self::build_with_budget(field, n, breaks, default_budget())
    }

    /// As [`TowerContext::build`], with an explicit Gröbner step budget for every ring.
    pub fn build_with_budget(
        field: &Field,
        n: usize,
        breaks: Breaks,
        budget: u64,
    ) -> Result<TowerContext> {
        if n == 0 {
            return Err(Error::Config("tower height must be at least 1".into()));
        }
        let top = n + 1;
        let mut y = Vec::with_capacity(top + 1);
        let mut x = Vec::with_capacity(top + 1);
        for i in 0..=top {
            let ring = weighted_ring(field, level_names(i), budget)?;
            let v = |j: usize| Poly::var(&ring, j);
            let gens = (1..=i)
                .map(|j| curve_relation(&v(y_index(j)), &v(x_index(j - 1)), &v(x_index(j))))
                .collect::<Result<Vec<_>>>()?;
            let pres = PresentedRing::new(Ideal::new(&ring, gens)?);
            let excluded = if breaks.keep_origin {
                Vec::new()
            } else {
                (1..=i)
                    .map(|j| Ideal::new(&ring, [v(x_index(j - 1)), v(x_index(j)), v(y_index(j))]))
                    .collect::<Result<Vec<_>>>()?
            };
            let label = if i == 0 {
                "A1".to_string()
            } else {
                format!("Y{i}")
            };
            y.push(QuasiAffine::affine(label, &pres));
            let label = if i == 0 {
                "A1".to_string()
            } else {
                format!("X{i}")
            };
            x.push(QuasiAffine::new(label, &pres, excluded)?);
        }
        let line = y[0].ring().clone();

        let mut phi = vec![RingMap::identity(&line)];
        let mut psi = vec![RingMap::identity(&line)];
        let mut to_line = vec![RingMap::identity(&line)];
        for i in 1..=top {
            let (src, tgt) = (y[i - 1].ring(), y[i].ring());
            let r = tgt.ring();
            let phi_images = (0..src.nvars()).map(|j| Poly::var(r, j)).collect();
            let psi_images = (0..src.nvars())
                .map(|j| Poly::var(r, if j == 0 { 1 } else { j + 2 }))
                .collect();
            let mut f = RingMap::new(format!("phi{i}"), src, tgt, phi_images)?;
            let mut g = RingMap::new(format!("psi{i}"), src, tgt, psi_images)?;
            f.verify()?;
            g.verify()?;
            phi.push(f);
            psi.push(g);
            let mut t = RingMap::new(format!("Phi{i}"), &line, tgt, vec![Poly::var(r, 0)])?;
            t.verify()?;
            to_line.push(t);
        }

        let a1e_ring = weighted_ring(field, level_names(1), budget)?;
        let av = |j: usize| Poly::var(&a1e_ring, j);
        let a1e = PresentedRing::new(Ideal::new(
            &a1e_ring,
            [curve_relation(&av(2), &Poly::one(&a1e_ring), &av(1))?],
        )?);
        let rho_y = if breaks.corrupt_rho {
            av(2)
        } else {
            &av(0) * &av(2)
        };
        let mut rho1 = RingMap::new("rho1", y[1].ring(), &a1e, vec![av(0), av(1), rho_y])?;
        rho1.verify()?;

        let (alpha, beta) = alternating_points(field, top);
        let cover = build_cover(field, &breaks, budget, &line, &y[1], &rho1)?;
        Ok(TowerContext {
            field: field.clone(),
            n,
            breaks,
            budget,
            line,
            y,
            x,
            phi,
            psi,
            to_line,
            a1e,
            rho1,
            alpha,
            beta,
            cover,
        })
    }

    pub fn point(&self, coords: Vec<FieldElem>) -> RatPoint {
        RatPoint::new(coords)
    }

    /// Text dump of every constructed object.
    pub fn dump(&self) -> String {
        let mut out = Vec::new();
        for (i, (yi, xi)) in self.y.iter().zip(&self.x).enumerate().skip(1) {
            out.push(format!("{yi}"));
            out.push(format!("{xi}"));
            out.push(format!("{}", self.phi[i]));
            out.push(format!("{}", self.psi[i]));
            out.push(format!("alpha{i} = {}", self.alpha[i]));
            out.push(format!("beta{i} = {}", self.beta[i]));
        }
        out.push(format!("{}", self.rho1));
        let c = &self.cover;
        for q in [&c.v1, &c.v1_tilde, &c.v2, &c.w, &c.w_product, &c.line_w] {
            out.push(format!("{q}"));
        }
        for m in [&c.p1, &c.p2, &c.h1, &c.h2, &c.h] {
            out.push(format!("{m}"));
        }
        out.join("\n")
    }
}

/// `alpha_i`, `beta_i` for `0 <= i <= top`, as coordinate vectors.
/// Level 0 holds the base points `alpha_0 = 1`, `beta_0 = 0` of the line.
fn alternating_points(field: &Field, top: usize) -> (Vec<RatPoint>, Vec<RatPoint>) {
    let (zero, one, lam) = (field.zero(), field.one(), field.lambda());
    // factor values (x_i, y_i) of alpha1 and beta1
    let a_fac = [zero.clone(), lam];
    let b_fac = [one.clone(), zero.clone()];
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for i in 0..=top {
        let mut a = vec![one.clone()];
        let mut b = vec![zero.clone()];
        for j in 1..=i {
            let (fa, fb) = if j % 2 == 1 {
                (&a_fac, &b_fac)
            } else {
                (&b_fac, &a_fac)
            };
            a.extend(fa.iter().cloned());
            b.extend(fb.iter().cloned());
        }
        alpha.push(RatPoint::new(a));
        beta.push(RatPoint::new(b));
    }
    (alpha, beta)
}

fn build_cover(
    field: &Field,
    breaks: &Breaks,
    budget: u64,
    line: &PresentedRing,
    y1: &QuasiAffine,
    rho1: &RingMap,
) -> Result<CoverDatum> {
    let er = weighted_ring(field, vec!["x1".into(), "y1".into()], budget)?;
    let (ex, ey) = (Poly::var(&er, 0), Poly::var(&er, 1));
    let e = PresentedRing::new(Ideal::new(
        &er,
        [curve_relation(&ey, &Poly::one(&er), &ex)?],
    )?);
    let lam = const_poly(&er, &field.lambda());

    let first = if breaks.retain_lambda1_point { 2 } else { 1 };
    let branch: Vec<Ideal> = (first..=3)
        .map(|i| Ideal::new(&er, [&ex - &const_poly(&er, &field.param(i)), ey.clone()]))
        .collect::<Result<_>>()?;
    let minus = Ideal::new(&er, [ex.clone(), &ey + &lam])?;
    let plus = Ideal::new(&er, [ex.clone(), &ey - &lam])?;

    let mut v1_ex = branch.clone();
    v1_ex.push(minus.clone());
    if breaks.exclude_plus_lambda {
        v1_ex.push(plus.clone());
    }
    let v1 = QuasiAffine::new("V1", &e, v1_ex.clone())?;
    let mut tilde_ex = branch;
    tilde_ex.push(plus.clone());
    let v1_tilde = QuasiAffine::new("V1~", &e, tilde_ex)?;
    let mut w_ex = v1_ex;
    w_ex.push(plus);
    let w = QuasiAffine::new("W", &e, w_ex)?;

    let v2r = weighted_ring(field, vec!["x1".into()], budget)?;
    let v2p = PresentedRing::free(&v2r);
    let v2 = QuasiAffine::new("V2", &v2p, vec![Ideal::new(&v2r, [Poly::var(&v2r, 0)])?])?;

    let mut p1 = RingMap::from_strs("p1", line, &e, &["x1"])?;
    let mut p2 = RingMap::from_strs("p2", line, &v2p, &["x1"])?;
    p1.verify()?;
    p2.verify()?;
    let w_fiber = fiber_product(&p1, &p2, None)?;
    let w_product = w_fiber.quasi_affine("V1 x_A1 V2", &v1, &v2)?;
    let mut w_to_v2 = RingMap::from_strs("W->V2", &v2p, &e, &["x1"])?;
    w_to_v2.verify()?;

    let mut h1 = RingMap::from_strs("h1", y1.ring(), &e, &["1", "x1", "y1"])?;
    let mut h2 = RingMap::from_strs("h2", y1.ring(), &v2p, &["0", "x1", "0"])?;
    h1.verify()?;
    h2.verify()?;

    let line_w = line_times(&w, "x0")?.with_label("A1 x W");
    let lw = line_w.ring().ring();
    let h_images = rho1
        .images()
        .iter()
        .map(|p| p.embed_into(lw))
        .collect::<Result<Vec<_>>>()?;
    let mut h = RingMap::new("H", y1.ring(), line_w.ring(), h_images)?;
    h.verify()?;
    let mut p_line_w = RingMap::from_strs("pW", line, line_w.ring(), &["x1"])?;
    p_line_w.verify()?;

    Ok(CoverDatum {
        e,
        v1,
        v1_tilde,
        v2,
        w,
        w_product,
        w_fiber,
        p1,
        p2,
        w_to_v2,
        h1,
        h2,
        line_w,
        p_line_w,
        h,
    })
}

/// `Y_n` built as `Y_{n-1} ×_{Y_{n-2}} Y_{n-1}` (along `psi_{n-1}`, `phi_{n-1}`)
/// is isomorphic to the closed form, compatibly with the excluded loci of `X_n`.
pub fn presentation_matches(ctx: &TowerContext, n: usize) -> Result<bool> {
    if n == 0 || n > ctx.n + 1 {
        return Err(Error::Config(format!(
            "level {n} outside 1..={}",
            ctx.n + 1
        )));
    }
    if n == 1 {
        // the closed form is the definition; compare against a fresh copy
        let fresh = PresentedRing::new(Ideal::new(
            ctx.y[1].ring().ring(),
            ctx.y[1].ring().ideal().generators().to_vec(),
        )?);
        let there = RingMap::new(
            "id",
            ctx.y[1].ring(),
            &fresh,
            RingMap::identity(&fresh).images().to_vec(),
        )?;
        let back = RingMap::new(
            "id",
            &fresh,
            ctx.y[1].ring(),
            RingMap::identity(ctx.y[1].ring()).images().to_vec(),
        )?;
        return check_iso(&there, &back);
    }
    let fp = fiber_product(&ctx.psi[n - 1], &ctx.phi[n - 1], None)?;
    let closed = ctx.y[n].ring();
    let (cr, tr) = (closed.ring(), fp.ring.ring());
    let m = ctx.y[n - 1].ring().nvars();

    // closed -> tensor: first n-1 levels from the left factor, the last level
    // from the right factor's top coordinates
    let mut to_tensor: Vec<Poly> = (0..m).map(|j| Poly::var(tr, j)).collect();
    to_tensor.push(Poly::var(tr, m + x_index(n - 1)));
    to_tensor.push(Poly::var(tr, m + y_index(n - 1)));
    let f = RingMap::new("closed->tensor", closed, &fp.ring, to_tensor)?;

    // tensor -> closed: left factor is phi_n, right factor is psi_n
    let mut to_closed: Vec<Poly> = ctx.phi[n].images().to_vec();
    to_closed.extend(ctx.psi[n].images().iter().cloned());
    let g = RingMap::new("tensor->closed", &fp.ring, closed, to_closed)?;
    debug_assert_eq!(g.images().len(), tr.nvars());
    let _ = cr;

    let tensor_x = fp.quasi_affine(
        format!("X{} x X{}", n - 1, n - 1),
        &ctx.x[n - 1],
        &ctx.x[n - 1],
    )?;
    quasi_affine_iso(&f, &g, &tensor_x, &ctx.x[n])
}

/// `H(t)`: the homotopy `h: A1 × U -> X` restricted to the slice at `t`.
/// The line coordinate is the first variable of `h`'s target; `base` is `U`.
pub fn endpoint(h: &RingMap, t: &FieldElem, base: &PresentedRing) -> Result<RingMap> {
    let src = h.target().ring();
    if src.nvars() != base.nvars() + 1 {
        return Err(Error::ArityMismatch {
            expected: base.nvars() + 1,
            got: src.nvars(),
        });
    }
    let br = base.ring();
    let mut slice = vec![Poly::constant(br, t.clone())];
    slice.extend((0..base.nvars()).map(|i| Poly::var(br, i)));
    let images = h
        .images()
        .iter()
        .map(|p| p.substitute_into(&slice, br))
        .collect::<Result<Vec<_>>>()?;
    RingMap::new(format!("{}({t})", h.label()), h.source(), base, images)?.checked()
}

/// `m × id` on `domain ×_{A1} X_n`, landing in `X_{n+1} = X1 ×_{A1} X_n`.
pub struct Lift {
    pub domain: QuasiAffine,
    pub product: FiberProduct,
    pub map: RingMap,
}

/// Lifts `m: domain -> X1` over `p: domain -> A1` to level `n`.
pub fn lift_to_level(
    ctx: &TowerContext,
    n: usize,
    m: &RingMap,
    p: &RingMap,
    domain: &QuasiAffine,
) -> Result<Lift> {
    if n > ctx.n {
        return Err(Error::Config(format!(
            "level {n} above the tower height {}",
            ctx.n
        )));
    }
    let over = compose(&ctx.psi[1], m)?;
    if !maps_equal(&over, p)? {
        return Err(Error::CompatibilityFailure(format!(
            "psi1 . {} differs from {}",
            m.label(),
            p.label()
        )));
    }
    let product = fiber_product(p, &ctx.to_line[n], None)?;
    let domain =
        product.quasi_affine(format!("{} x_A1 X{n}", domain.label()), domain, &ctx.x[n])?;
    let mut images = m
        .images()
        .iter()
        .map(|q| product.left.pullback(q))
        .collect::<Result<Vec<_>>>()?;
    let right = product.right.images();
    for k in 1..=n {
        images.push(right[x_index(k)].clone());
        images.push(right[y_index(k)].clone());
    }
    let map = RingMap::new(
        format!("{}^{n}", m.label()),
        ctx.y[n + 1].ring(),
        &product.ring,
        images,
    )?
    .checked()?;
    if let Some(e) = excluded_violation(&map, &domain, &ctx.x[n + 1])? {
        return Err(Error::NotWellDefined(format!(
            "{} meets the excluded locus V{e}",
            map.label()
        )));
    }
    Ok(Lift {
        domain,
        product,
        map,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    Plain,
    Tilde,
}

/// `h1^a = rho1(a)` on `V1` (plain) or on `V1~` (tilde).
pub struct Modified {
    pub domain: QuasiAffine,
    pub map: RingMap,
}

pub fn build_modified(ctx: &TowerContext, a: &FieldElem, variant: Variant) -> Result<Modified> {
    if a.is_zero() {
        return Err(Error::ZeroParameter);
    }
    let c = &ctx.cover;
    let er = c.e.ring();
    let slice = [
        Poly::constant(er, a.clone()),
        Poly::var(er, 0),
        Poly::var(er, 1),
    ];
    let images = ctx
        .rho1
        .images()
        .iter()
        .map(|p| p.substitute_into(&slice, er))
        .collect::<Result<Vec<_>>>()?;
    let (domain, name) = match variant {
        Variant::Plain => (&c.v1, "h1^a"),
        Variant::Tilde => (&c.v1_tilde, "h1~^a"),
    };
    let map = RingMap::new(format!("{name}[a={a}]"), ctx.y[1].ring(), &c.e, images)?.checked()?;
    if let Some(e) = excluded_violation(&map, domain, &ctx.x[1])? {
        return Err(Error::NotWellDefined(format!(
            "{} meets the excluded locus V{e}",
            map.label()
        )));
    }
    Ok(Modified {
        domain: domain.clone(),
        map,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FiberKind {
    EllipticE,
    NonreducedPuncturedLine,
}

/// A fiber of `phi_n` over a point, with the comparison maps to its model.
pub struct FiberClass {
    pub kind: FiberKind,
    pub fiber: QuasiAffine,
    pub model: QuasiAffine,
    /// `fiber -> model`, as a ring map from the model's ring.
    pub to_model: RingMap,
    pub from_model: RingMap,
    pub verified: bool,
}

pub fn fiber_of_phi(ctx: &TowerContext, n: usize, q: &RatPoint) -> Result<FiberClass> {
    if n == 0 || n > ctx.n + 1 {
        return Err(Error::Config(format!(
            "level {n} outside 1..={}",
            ctx.n + 1
        )));
    }
    let base = &ctx.x[n - 1];
    if q.len() != base.ring().nvars() {
        return Err(Error::ArityMismatch {
            expected: base.ring().nvars(),
            got: q.len(),
        });
    }
    if !point_on(base, q)? {
        return Err(Error::PointNotOnVariety(base.label().to_string()));
    }
    let fr = weighted_ring(
        &ctx.field,
        vec![format!("x{n}"), format!("y{n}")],
        ctx.budget,
    )?;
    let mut slice: Vec<Poly> = q
        .coords()
        .iter()
        .map(|c| Poly::constant(&fr, c.clone()))
        .collect();
    slice.push(Poly::var(&fr, 0));
    slice.push(Poly::var(&fr, 1));
    let top = &ctx.x[n];
    let fiber_ring = PresentedRing::new(top.ring().ideal().map(&slice, &fr)?);
    let mut excluded = Vec::new();
    for e in top.excluded() {
        let ei = e.map(&slice, &fr)?;
        if !is_unit_ideal(&ei)? {
            excluded.push(ei);
        }
    }
    let fiber = QuasiAffine::new(format!("phi{n}^-1{q}"), &fiber_ring, excluded)?;

    let a = &q.coords()[x_index(n - 1)];
    let (kind, model, to_model, from_model) = if !a.is_zero() {
        let model = QuasiAffine::affine("E", &ctx.cover.e);
        let inv = a.invert()?;
        let to = RingMap::new(
            "fiber->E",
            model.ring(),
            &fiber_ring,
            vec![Poly::var(&fr, 0), Poly::var(&fr, 1).scale(&inv)],
        )?;
        let er = ctx.cover.e.ring();
        let from = RingMap::new(
            "E->fiber",
            &fiber_ring,
            model.ring(),
            vec![Poly::var(er, 0), Poly::var(er, 1).scale(a)],
        )?;
        (FiberKind::EllipticE, model, to, from)
    } else {
        let nr = weighted_ring(&ctx.field, vec!["x".into(), "y".into()], ctx.budget)?;
        let (nx, ny) = (Poly::var(&nr, 0), Poly::var(&nr, 1));
        let pres = PresentedRing::new(Ideal::new(&nr, [&ny * &ny])?);
        let model = QuasiAffine::new(
            "Spec K[x,y]/(y^2) minus origin",
            &pres,
            vec![Ideal::new(&nr, [nx.clone(), ny.clone()])?],
        )?;
        let to = RingMap::new(
            "fiber->model",
            &pres,
            &fiber_ring,
            vec![Poly::var(&fr, 0), Poly::var(&fr, 1)],
        )?;
        let from = RingMap::new("model->fiber", &fiber_ring, &pres, vec![nx, ny])?;
        (FiberKind::NonreducedPuncturedLine, model, to, from)
    };
    let verified = quasi_affine_iso(&to_model, &from_model, &fiber, &model)?;
    Ok(FiberClass {
        kind,
        fiber,
        model,
        to_model,
        from_model,
        verified,
    })
}

/// The conditions making `p1 ⊔ p2` an elementary Nisnevich cover of the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NisnevichOutcome {
    /// `p2` is the inclusion of `A1 ∖ {0}`.
    pub open_inclusion: bool,
    /// `2y` has no zero on `V1`.
    pub etale: bool,
    /// `p1^-1(0) ∩ V1` is the single reduced point `(0, L)`.
    pub fiber_single_point: bool,
    /// `V1 ×_{A1} V2` agrees with `V1 ∖ {(0, L)}`.
    pub w_matches: bool,
}

impl NisnevichOutcome {
    pub fn ok(&self) -> bool {
        self.open_inclusion && self.etale && self.fiber_single_point && self.w_matches
    }
}

pub fn check_nisnevich(ctx: &TowerContext) -> Result<NisnevichOutcome> {
    let c = &ctx.cover;
    let k = &ctx.field;
    let er = c.e.ring();
    let (ex, ey) = (Poly::var(er, 0), Poly::var(er, 1));
    let lam = Poly::constant(er, k.lambda());

    // (a) p2 is an isomorphism of rings whose excluded locus is V(x)
    let inv = RingMap::new(
        "p2^-1",
        c.v2.ring(),
        &ctx.line,
        vec![Poly::var(ctx.line.ring(), 0)],
    )?;
    let origin = Ideal::new(ctx.line.ring(), [Poly::var(ctx.line.ring(), 0)])?;
    let open_inclusion = check_iso(&c.p2, &inv)?
        && c.v2.excluded().len() == 1
        && ideal_equal(&c.v2.excluded()[0], &c.p2.pullback_ideal(&origin)?)?;

    // (b) the ramification locus of p1 lies in the excluded points
    let ram = c.e.ideal().with([&ey * &Poly::from_int(er, 2)])?;
    let etale = locus_covered(&ram, c.v1.excluded())?;

    // (c) the fiber over 0 is {(0, L), (0, -L)}, reduced, with only (0, L) kept
    let fiber = c.e.ideal().with([ex.clone()])?;
    let split = Ideal::new(er, [ex.clone(), &(&ey - &lam) * &(&ey + &lam)])?;
    let minus = c.e.ideal().with([ex.clone(), &ey + &lam])?;
    let plus_point = RatPoint::new(vec![k.zero(), k.lambda()]);
    let fiber_single_point = !k.lambda().is_zero()
        && ideal_equal(&fiber, &split)?
        && locus_covered(&minus, c.v1.excluded())?
        && point_on(&c.v1, &plus_point)?;

    let w_matches = product_matches_w(ctx, &c.v1)?;

    Ok(NisnevichOutcome {
        open_inclusion,
        etale,
        fiber_single_point,
        w_matches,
    })
}

/// `piece ×_{A1} V2` (over `p1`, `p2`) agrees with `W` as a quasi-affine variety.
pub fn product_matches_w(ctx: &TowerContext, piece: &QuasiAffine) -> Result<bool> {
    let c = &ctx.cover;
    let product = &c.w_fiber;
    let qa = product.quasi_affine(format!("{} x_A1 V2", piece.label()), piece, &c.v2)?;
    let er = c.e.ring();
    let wr = product.ring.ring();
    let to_pts = RingMap::new(
        "W->pts",
        &c.e,
        &product.ring,
        vec![Poly::var(wr, 0), Poly::var(wr, 1)],
    )?;
    let from_pts = RingMap::new(
        "pts->W",
        &product.ring,
        &c.e,
        vec![Poly::var(er, 0), Poly::var(er, 1), Poly::var(er, 0)],
    )?;
    quasi_affine_iso(&to_pts, &from_pts, &qa, &c.w)
}

/// `evaluate_morphism` for a lift at a pair of compatible points.
pub fn evaluate_lift(lift: &Lift, p: &RatPoint, q: &RatPoint) -> Result<RatPoint> {
    evaluate_morphism(&lift.map, &lift.product.pair(p, q)?)
}
