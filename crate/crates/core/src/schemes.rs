//! Presented rings `K[vars]/I`, ring maps between them, quasi-affine
//! varieties with excluded closed loci, fiber products and rational points.
//!
//! Ring maps are written contravariantly: a `RingMap` with source `S` and
//! target `T` sends each variable of `S` to a polynomial over `T`, and so
//! describes a morphism `Spec T -> Spec S`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::groebner::{ideal_member, is_unit_ideal, normal_form, radical_member, Ideal};
use crate::poly::{parse_poly, same_ring, Poly, PolyRing, Ring, VarSet};

/// `K[vars]/I`. Cloning shares the ideal and its cached basis.
#[derive(Clone)]
pub struct PresentedRing {
    ideal: Arc<Ideal>,
}

impl PresentedRing {
    pub fn new(ideal: Ideal) -> PresentedRing {
        PresentedRing {
            ideal: Arc::new(ideal),
        }
    }

    /// The polynomial ring itself, with the zero ideal.
    pub fn free(ring: &Ring) -> PresentedRing {
        Self::new(Ideal::zero(ring))
    }

    pub fn from_strs(ring: &Ring, gens: &[&str]) -> Result<PresentedRing> {
        let gens = gens
            .iter()
            .map(|g| parse_poly(g, ring))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(Ideal::new(ring, gens)?))
    }

    pub fn ring(&self) -> &Ring {
        self.ideal.ring()
    }

    pub fn ideal(&self) -> &Ideal {
        &self.ideal
    }

    pub fn nvars(&self) -> usize {
        self.ring().nvars()
    }

    pub fn var(&self, name: &str) -> Result<Poly> {
        Poly::var_named(self.ring(), name)
    }

    pub fn parse(&self, text: &str) -> Result<Poly> {
        parse_poly(text, self.ring())
    }

    /// Whether `p` is zero in the quotient.
    pub fn is_zero(&self, p: &Poly) -> Result<bool> {
        ideal_member(p, &self.ideal)
    }

    /// Same ring and literally the same generators.
    pub fn same_as(&self, other: &PresentedRing) -> bool {
        Arc::ptr_eq(&self.ideal, &other.ideal)
            || (**self.ring() == **other.ring()
                && self.ideal.generators() == other.ideal.generators())
    }

    fn check_same(&self, other: &PresentedRing) -> Result<()> {
        if self.same_as(other) {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{self} vs {other}")))
        }
    }
}

impl fmt::Display for PresentedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "K[{}]/{}",
            self.ring().vars().names().join(", "),
            self.ideal
        )
    }
}

impl fmt::Debug for PresentedRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Algebra map `source -> target` given by the images of the source variables.
#[derive(Clone)]
pub struct RingMap {
    label: String,
    source: PresentedRing,
    target: PresentedRing,
    images: Vec<Poly>,
    verified: bool,
}

impl RingMap {
    pub fn new(
        label: impl Into<String>,
        source: &PresentedRing,
        target: &PresentedRing,
        images: Vec<Poly>,
    ) -> Result<RingMap> {
        if images.len() != source.nvars() {
            return Err(Error::ArityMismatch {
                expected: source.nvars(),
                got: images.len(),
            });
        }
        for p in &images {
            same_ring(p.ring(), target.ring())?;
        }
        Ok(RingMap {
            label: label.into(),
            source: source.clone(),
            target: target.clone(),
            images,
            verified: false,
        })
    }

    pub fn from_strs(
        label: impl Into<String>,
        source: &PresentedRing,
        target: &PresentedRing,
        images: &[&str],
    ) -> Result<RingMap> {
        let images = images
            .iter()
            .map(|s| target.parse(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(label, source, target, images)
    }

    pub fn identity(r: &PresentedRing) -> RingMap {
        let images = (0..r.nvars()).map(|i| Poly::var(r.ring(), i)).collect();
        RingMap {
            label: "id".into(),
            source: r.clone(),
            target: r.clone(),
            images,
            verified: true,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> RingMap {
        self.label = label.into();
        self
    }

    pub fn source(&self) -> &PresentedRing {
        &self.source
    }

    pub fn target(&self) -> &PresentedRing {
        &self.target
    }

    pub fn images(&self) -> &[Poly] {
        &self.images
    }

    pub fn image(&self, var: &str) -> Result<&Poly> {
        let i = self
            .source
            .ring()
            .vars()
            .index(var)
            .ok_or_else(|| Error::UnknownVariable(var.to_string()))?;
        Ok(&self.images[i])
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Image of a source-ring polynomial.
    pub fn pullback(&self, p: &Poly) -> Result<Poly> {
        same_ring(p.ring(), self.source.ring())?;
        p.substitute_into(&self.images, self.target.ring())
    }

    pub fn pullback_ideal(&self, i: &Ideal) -> Result<Ideal> {
        same_ring(i.ring(), self.source.ring())?;
        i.map(&self.images, self.target.ring())
    }

    /// The first source relation whose image is nonzero in the target.
    pub fn first_violation(&self) -> Result<Option<Poly>> {
        for g in self.source.ideal().generators() {
            let img = self.pullback(g)?;
            if !self.target.is_zero(&img)? {
                return Ok(Some(g.clone()));
            }
        }
        Ok(None)
    }

    pub fn verify(&mut self) -> Result<bool> {
        self.verified = self.first_violation()?.is_none();
        Ok(self.verified)
    }

    /// Verifies, turning an ill-defined map into `NotWellDefined`.
    pub fn checked(mut self) -> Result<RingMap> {
        if let Some(g) = self.first_violation()? {
            return Err(Error::NotWellDefined(format!(
                "{}: relation {g} not preserved",
                self.label
            )));
        }
        self.verified = true;
        Ok(self)
    }

    /// Marks a map whose well-definedness holds by construction.
    pub(crate) fn trusted(mut self) -> RingMap {
        self.verified = true;
        self
    }
}

impl fmt::Display for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .source
            .ring()
            .vars()
            .names()
            .iter()
            .zip(&self.images)
            .map(|(v, p)| format!("{v} -> {p}"))
            .collect();
        write!(f, "{}: {}", self.label, parts.join(", "))
    }
}

impl fmt::Debug for RingMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn verify_ring_map(m: &mut RingMap) -> Result<bool> {
    m.verify()
}

/// The morphism `outer ∘ inner`: `inner` maps into the variety `outer` starts from.
pub fn compose(outer: &RingMap, inner: &RingMap) -> Result<RingMap> {
    outer.target.check_same(&inner.source)?;
    let images = outer
        .images
        .iter()
        .map(|p| inner.pullback(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(RingMap {
        label: format!("{} . {}", outer.label, inner.label),
        source: outer.source.clone(),
        target: inner.target.clone(),
        images,
        verified: outer.verified && inner.verified,
    })
}

/// Equal as maps: every variable image agrees modulo the target ideal.
pub fn maps_equal(a: &RingMap, b: &RingMap) -> Result<bool> {
    same_ring(a.source.ring(), b.source.ring())?;
    same_ring(a.target.ring(), b.target.ring())?;
    for (p, q) in a.images.iter().zip(&b.images) {
        if !a.target.is_zero(&(p - q))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `f: A -> B` and `g: B -> A` are well defined and mutually inverse.
pub fn check_iso(f: &RingMap, g: &RingMap) -> Result<bool> {
    f.source.check_same(&g.target)?;
    f.target.check_same(&g.source)?;
    for m in [f, g] {
        if !m.verified && m.first_violation()?.is_some() {
            return Ok(false);
        }
    }
    for (m, n) in [(f, g), (g, f)] {
        let ring = m.source.ring();
        for (i, img) in m.images.iter().enumerate() {
            let back = n.pullback(img)?;
            if !m.source.is_zero(&(&back - &Poly::var(ring, i)))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// A `K`-point, coordinates indexed by the variables of its ambient ring.
#[derive(Clone, PartialEq, Eq)]
pub struct RatPoint {
    coords: Vec<FieldElem>,
}

impl RatPoint {
    pub fn new(coords: Vec<FieldElem>) -> RatPoint {
        RatPoint { coords }
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn concat(&self, other: &RatPoint) -> RatPoint {
        RatPoint {
            coords: self.coords.iter().chain(&other.coords).cloned().collect(),
        }
    }
}

impl fmt::Display for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(FieldElem::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl fmt::Debug for RatPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `Spec(ring) ∖ ∪ V(excluded_k)`.
#[derive(Clone)]
pub struct QuasiAffine {
    label: String,
    ring: PresentedRing,
    excluded: Vec<Ideal>,
}

impl QuasiAffine {
    pub fn new(
        label: impl Into<String>,
        ring: &PresentedRing,
        excluded: Vec<Ideal>,
    ) -> Result<QuasiAffine> {
        for e in &excluded {
            same_ring(e.ring(), ring.ring())?;
        }
        Ok(QuasiAffine {
            label: label.into(),
            ring: ring.clone(),
            excluded,
        })
    }

    pub fn affine(label: impl Into<String>, ring: &PresentedRing) -> QuasiAffine {
        QuasiAffine {
            label: label.into(),
            ring: ring.clone(),
            excluded: Vec::new(),
        }
    }

    /// Excluded ideals given as generator strings.
    pub fn from_strs(
        label: impl Into<String>,
        ring: &PresentedRing,
        excluded: &[&[&str]],
    ) -> Result<QuasiAffine> {
        let excluded = excluded
            .iter()
            .map(|gens| {
                let gens = gens
                    .iter()
                    .map(|g| ring.parse(g))
                    .collect::<Result<Vec<_>>>()?;
                Ideal::new(ring.ring(), gens)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(label, ring, excluded)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn ring(&self) -> &PresentedRing {
        &self.ring
    }

    pub fn excluded(&self) -> &[Ideal] {
        &self.excluded
    }

    pub fn with_label(mut self, label: impl Into<String>) -> QuasiAffine {
        self.label = label.into();
        self
    }
}

impl fmt::Display for QuasiAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.label, self.ring)?;
        for e in &self.excluded {
            write!(f, " \\ V{e}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QuasiAffine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn point_on(x: &QuasiAffine, p: &RatPoint) -> Result<bool> {
    let n = x.ring.nvars();
    if p.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: p.len(),
        });
    }
    for g in x.ring.ideal().generators() {
        if !g.evaluate(&p.coords)?.is_zero() {
            return Ok(false);
        }
    }
    for e in &x.excluded {
        let mut all_zero = true;
        for g in e.generators() {
            if !g.evaluate(&p.coords)?.is_zero() {
                all_zero = false;
                break;
            }
        }
        if all_zero {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Image of a point of the morphism's source variety (the map's target ring).
pub fn evaluate_morphism(m: &RingMap, p: &RatPoint) -> Result<RatPoint> {
    let n = m.target.nvars();
    if p.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: p.len(),
        });
    }
    let coords = m
        .images
        .iter()
        .map(|img| img.evaluate(&p.coords))
        .collect::<Result<Vec<_>>>()?;
    Ok(RatPoint { coords })
}

/// `V(j) ⊆ ∪ V(covers)`, all ideals in one ring.
///
/// Walks the choices of one generator per cover ideal, pruning a branch as
/// soon as the product chosen so far lies in the radical of `j`.
pub fn locus_covered(j: &Ideal, covers: &[Ideal]) -> Result<bool> {
    if is_unit_ideal(j)? {
        return Ok(true);
    }
    for c in covers {
        let mut inside = true;
        for g in c.generators() {
            if !radical_member(g, j)? {
                inside = false;
                break;
            }
        }
        if inside {
            return Ok(true);
        }
    }
    fn go(j: &Ideal, covers: &[Ideal], prefix: &Poly) -> Result<bool> {
        let Some((first, rest)) = covers.split_first() else {
            return radical_member(prefix, j);
        };
        if !prefix.is_constant() && radical_member(prefix, j)? {
            return Ok(true);
        }
        for g in first.generators() {
            if !go(j, rest, &(prefix * g))? {
                return Ok(false);
            }
        }
        Ok(true)
    }
    go(j, covers, &Poly::one(j.ring()))
}

/// The first excluded ideal of `y` whose pullback meets `x` outside its own
/// excluded locus, or `None` if the morphism `x -> y` is defined on all of `x`.
pub fn excluded_violation(m: &RingMap, x: &QuasiAffine, y: &QuasiAffine) -> Result<Option<Ideal>> {
    m.source.check_same(&y.ring)?;
    m.target.check_same(&x.ring)?;
    for e in &y.excluded {
        let j = x.ring.ideal().sum(&m.pullback_ideal(e)?)?;
        if !locus_covered(&j, &x.excluded)? {
            return Ok(Some(e.clone()));
        }
    }
    Ok(None)
}

pub fn morphism_avoids_excluded(m: &RingMap, x: &QuasiAffine, y: &QuasiAffine) -> Result<bool> {
    Ok(excluded_violation(m, x, y)?.is_none())
}

/// Isomorphism of quasi-affines: `f: X -> Y` and `g: Y -> X` (as ring maps
/// `f: Y.ring -> X.ring`, `g: X.ring -> Y.ring`) are mutually inverse and
/// both respect the excluded loci.
pub fn quasi_affine_iso(
    f: &RingMap,
    g: &RingMap,
    x: &QuasiAffine,
    y: &QuasiAffine,
) -> Result<bool> {
    Ok(
        check_iso(f, g)?
            && morphism_avoids_excluded(f, x, y)?
            && morphism_avoids_excluded(g, y, x)?,
    )
}

/// `A ⊗_C B` for `f: C -> A`, `g: C -> B`, with both coprojections.
pub struct FiberProduct {
    pub ring: PresentedRing,
    pub left: RingMap,
    pub right: RingMap,
    pub f: RingMap,
    pub g: RingMap,
}

impl FiberProduct {
    /// The unique point of the product over a compatible pair.
    pub fn pair(&self, p: &RatPoint, q: &RatPoint) -> Result<RatPoint> {
        let (a, b) = (
            evaluate_morphism(&self.f, p)?,
            evaluate_morphism(&self.g, q)?,
        );
        if a != b {
            return Err(Error::CompatibilityFailure(format!(
                "{p} and {q} lie over {a} and {b}"
            )));
        }
        Ok(p.concat(q))
    }

    /// The base-change morphism over `A`: pulls back the excluded ideals of
    /// both factors.
    pub fn quasi_affine(
        &self,
        label: impl Into<String>,
        x: &QuasiAffine,
        y: &QuasiAffine,
    ) -> Result<QuasiAffine> {
        x.ring.check_same(&self.f.target)?;
        y.ring.check_same(&self.g.target)?;
        let mut excluded = Vec::new();
        for e in &x.excluded {
            excluded.push(self.left.pullback_ideal(e)?);
        }
        for e in &y.excluded {
            excluded.push(self.right.pullback_ideal(e)?);
        }
        QuasiAffine::new(label, &self.ring, excluded)
    }
}

/// Fiber product presentation. The second factor's variables are renamed to
/// `right_names` when given, otherwise kept unless they collide.
pub fn fiber_product(
    f: &RingMap,
    g: &RingMap,
    right_names: Option<&[String]>,
) -> Result<FiberProduct> {
    f.source.check_same(&g.source)?;
    let (a, b) = (&f.target, &g.target);
    let mut names: Vec<String> = a.ring().vars().names().to_vec();
    let na = names.len();
    match right_names {
        Some(given) => {
            if given.len() != b.nvars() {
                return Err(Error::ArityMismatch {
                    expected: b.nvars(),
                    got: given.len(),
                });
            }
            names.extend(given.iter().cloned());
        }
        None => {
            for v in b.ring().vars().names() {
                let vs = VarSet::new(names.clone())?;
                let name = if vs.index(v).is_some() {
                    vs.fresh(v)
                } else {
                    v.clone()
                };
                names.push(name);
            }
        }
    }
    let vars = VarSet::new(names)?;
    let order = a.ring().order().concat(na, b.ring().order(), b.nvars());
    let budget = a.ring().budget().max(b.ring().budget());
    let ring = PolyRing::with_budget(vars, a.ring().field().clone(), order, budget);

    let into_a: Vec<Poly> = (0..na).map(|i| Poly::var(&ring, i)).collect();
    let into_b: Vec<Poly> = (0..b.nvars()).map(|i| Poly::var(&ring, na + i)).collect();
    let mut gens = Vec::new();
    for p in a.ideal().generators() {
        gens.push(p.substitute_into(&into_a, &ring)?);
    }
    for p in b.ideal().generators() {
        gens.push(p.substitute_into(&into_b, &ring)?);
    }
    for (fi, gi) in f.images.iter().zip(&g.images) {
        gens.push(&fi.substitute_into(&into_a, &ring)? - &gi.substitute_into(&into_b, &ring)?);
    }
    let product = PresentedRing::new(Ideal::new(&ring, gens)?);
    let left = RingMap::new("pr1", a, &product, into_a)?.trusted();
    let right = RingMap::new("pr2", b, &product, into_b)?.trusted();
    Ok(FiberProduct {
        ring: product,
        left,
        right,
        f: f.clone(),
        g: g.clone(),
    })
}

/// `R[u]/(1 - u s)` with the inclusion `R -> R[u]/(1 - u s)`.
pub struct Localization {
    pub ring: PresentedRing,
    pub var: String,
    pub inclusion: RingMap,
}

pub fn localize(r: &PresentedRing, s: &Poly) -> Result<Localization> {
    same_ring(s.ring(), r.ring())?;
    let (ext, mut names) = r.ring().extend(&["u"]);
    let u = Poly::var_named(&ext, &names[0])?;
    let mut gens = r
        .ideal()
        .generators()
        .iter()
        .map(|g| g.embed_into(&ext))
        .collect::<Result<Vec<_>>>()?;
    gens.push(&Poly::one(&ext) - &(&u * &s.embed_into(&ext)?));
    let ring = PresentedRing::new(Ideal::new(&ext, gens)?);
    let images = (0..r.nvars()).map(|i| Poly::var(&ext, i)).collect();
    let inclusion = RingMap::new("loc", r, &ring, images)?.trusted();
    Ok(Localization {
        ring,
        var: names.remove(0),
        inclusion,
    })
}

/// Whether `m: A -> B` becomes an isomorphism after inverting `s ∈ A` (and
/// its image in `B`), with inverse `inverse: B -> A[1/s]`.
pub fn localized_iso(m: &RingMap, s: &Poly, inverse: &RingMap) -> Result<bool> {
    let la = localize(&m.source, s)?;
    let lb = localize(&m.target, &m.pullback(s)?)?;
    inverse.source.check_same(&m.target)?;
    inverse.target.check_same(&la.ring)?;
    let (ra, rb) = (la.ring.ring(), lb.ring.ring());

    let mut images = m
        .images
        .iter()
        .map(|p| p.embed_into(rb))
        .collect::<Result<Vec<_>>>()?;
    images.push(Poly::var_named(rb, &lb.var)?);
    let m_loc = RingMap::new(format!("{}[1/s]", m.label), &la.ring, &lb.ring, images)?;

    let mut inv_images = inverse.images.clone();
    inv_images.push(Poly::var_named(ra, &la.var)?);
    let inv_loc = RingMap::new(
        format!("{}[1/s]", inverse.label),
        &lb.ring,
        &la.ring,
        inv_images,
    )?;
    check_iso(&m_loc, &inv_loc)
}

/// `A¹ × U`, with the line coordinate `var` placed first.
pub fn line_times(u: &QuasiAffine, var: &str) -> Result<QuasiAffine> {
    let r = u.ring.ring();
    let mut names = vec![var.to_string()];
    names.extend(r.vars().names().iter().cloned());
    let order = crate::poly::MonomialOrder::Grevlex.concat(1, r.order(), r.nvars());
    let ring = PolyRing::with_budget(VarSet::new(names)?, r.field().clone(), order, r.budget());
    let shift: Vec<Poly> = (0..r.nvars()).map(|i| Poly::var(&ring, i + 1)).collect();
    let gens = u
        .ring
        .ideal()
        .generators()
        .iter()
        .map(|g| g.substitute_into(&shift, &ring))
        .collect::<Result<Vec<_>>>()?;
    let pres = PresentedRing::new(Ideal::new(&ring, gens)?);
    let excluded = u
        .excluded
        .iter()
        .map(|e| e.map(&shift, &ring))
        .collect::<Result<Vec<_>>>()?;
    QuasiAffine::new(format!("A1 x {}", u.label), &pres, excluded)
}

/// Remainder of `p` in a presented ring, for witnesses.
pub fn reduce(r: &PresentedRing, p: &Poly) -> Result<Poly> {
    normal_form(p, r.ideal())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, rat, Field};
    use crate::poly::MonomialOrder;

    fn k() -> Field {
        make_field(rat(1), rat(2), rat(3)).unwrap()
    }

    const F1: &str = "(x1^3 - 6*x1^2 + 11*x1 - 6)";

    fn y1(k: &Field) -> PresentedRing {
        let r = PolyRing::from_names(["x0", "x1", "y1"], k, MonomialOrder::Grevlex).unwrap();
        PresentedRing::from_strs(&r, &[&format!("y1^2 - x0^2*{F1}")]).unwrap()
    }

    fn line(k: &Field, v: &str) -> PresentedRing {
        PresentedRing::free(&PolyRing::from_names([v], k, MonomialOrder::Grevlex).unwrap())
    }

    fn a1e(k: &Field) -> PresentedRing {
        let r = PolyRing::from_names(["x0", "x1", "y1"], k, MonomialOrder::Grevlex).unwrap();
        PresentedRing::from_strs(&r, &[&format!("y1^2 - {F1}")]).unwrap()
    }

    fn x1(k: &Field) -> QuasiAffine {
        QuasiAffine::from_strs("X1", &y1(k), &[&["x0", "x1", "y1"]]).unwrap()
    }

    fn pt(k: &Field, c: &[(i64, i64)]) -> RatPoint {
        RatPoint::new(c.iter().map(|&(a, b)| k.elem(rat(a), rat(b))).collect())
    }

    #[test]
    fn ring_map_examples() {
        let k = k();
        let mut rho =
            RingMap::from_strs("rho1", &y1(&k), &a1e(&k), &["x0", "x1", "x0*y1"]).unwrap();
        assert!(verify_ring_map(&mut rho).unwrap());
        let mut psi = RingMap::from_strs("psi1", &line(&k, "x"), &y1(&k), &["x1"]).unwrap();
        assert!(verify_ring_map(&mut psi).unwrap());
        let mut bad = RingMap::from_strs("bad", &y1(&k), &y1(&k), &["x0", "x1", "x1"]).unwrap();
        assert!(!verify_ring_map(&mut bad).unwrap());
        assert!(matches!(bad.checked(), Err(Error::NotWellDefined(_))));
    }

    #[test]
    fn iso_examples() {
        let k = k();
        let a = line(&k, "x");
        assert!(check_iso(&RingMap::identity(&a), &RingMap::identity(&a)).unwrap());
        let shift = RingMap::from_strs("s", &a, &a, &["x + 1"]).unwrap();
        assert!(!check_iso(&shift, &RingMap::identity(&a)).unwrap());
        let back = RingMap::from_strs("s-1", &a, &a, &["x - 1"]).unwrap();
        assert!(check_iso(&shift, &back).unwrap());
    }

    #[test]
    fn fiber_product_of_two_surfaces() {
        let k = k();
        let (y, base) = (y1(&k), line(&k, "x"));
        let psi = RingMap::from_strs("psi1", &base, &y, &["x1"]).unwrap();
        let phi = RingMap::from_strs("phi1", &base, &y, &["x0"]).unwrap();
        let fp = fiber_product(&psi, &phi, None).unwrap();
        assert_eq!(
            fp.ring.ring().vars().names(),
            &["x0", "x1", "y1", "x0_2", "x1_2", "y1_2"]
        );

        let r2 = PolyRing::from_names(["x0", "x1", "y1", "x2", "y2"], &k, MonomialOrder::Grevlex)
            .unwrap();
        let closed = PresentedRing::from_strs(
            &r2,
            &[
                &format!("y1^2 - x0^2*{F1}"),
                &format!("y2^2 - x1^2*{}", F1.replace("x1", "x2")),
            ],
        )
        .unwrap();
        let to_closed = RingMap::from_strs(
            "t",
            &fp.ring,
            &closed,
            &["x0", "x1", "y1", "x1", "x2", "y2"],
        )
        .unwrap()
        .checked()
        .unwrap();
        let from_closed =
            RingMap::from_strs("f", &closed, &fp.ring, &["x0", "x1", "y1", "x1_2", "y1_2"])
                .unwrap()
                .checked()
                .unwrap();
        assert!(check_iso(&to_closed, &from_closed).unwrap());

        // point functor: (alpha1, beta1) pairs, (alpha1, alpha1) does not
        let alpha = pt(&k, &[(1, 0), (0, 0), (0, 1)]);
        let beta = pt(&k, &[(0, 0), (1, 0), (0, 0)]);
        let ab = fp.pair(&alpha, &beta).unwrap();
        assert_eq!(evaluate_morphism(&fp.left, &ab).unwrap(), alpha);
        assert_eq!(evaluate_morphism(&fp.right, &ab).unwrap(), beta);
        assert!(matches!(
            fp.pair(&alpha, &alpha),
            Err(Error::CompatibilityFailure(_))
        ));
        let x2 = fp.quasi_affine("X2", &x1(&k), &x1(&k)).unwrap();
        assert!(point_on(&x2, &ab).unwrap());
        assert_eq!(
            evaluate_morphism(&from_closed, &ab).unwrap(),
            pt(&k, &[(1, 0), (0, 0), (0, 1), (1, 0), (0, 0)])
        );
    }

    #[test]
    fn diagonal_and_point_base() {
        let k = k();
        let a = line(&k, "x");
        let id = RingMap::identity(&a);
        let fp = fiber_product(&id, &id, None).unwrap();
        let diag = RingMap::from_strs("d", &fp.ring, &a, &["x", "x"])
            .unwrap()
            .checked()
            .unwrap();
        assert!(check_iso(&fp.left, &diag).unwrap());

        let r0 = PolyRing::from_names(Vec::<String>::new(), &k, MonomialOrder::Grevlex).unwrap();
        let pt_ring = PresentedRing::free(&r0);
        let to_x = RingMap::new("c", &pt_ring, &y1(&k), vec![])
            .unwrap()
            .checked()
            .unwrap();
        let to_pt = RingMap::identity(&pt_ring);
        let fp = fiber_product(&to_x, &to_pt, None).unwrap();
        let y = y1(&k);
        let back = RingMap::from_strs("p", &fp.ring, &y, &["x0", "x1", "y1"]).unwrap();
        assert!(check_iso(&fp.left, &back).unwrap());
    }

    #[test]
    fn point_on_examples() {
        let k = k();
        let x = x1(&k);
        assert!(point_on(&x, &pt(&k, &[(1, 0), (0, 0), (0, 1)])).unwrap());
        assert!(!point_on(&x, &pt(&k, &[(0, 0), (0, 0), (0, 0)])).unwrap());
        assert!(point_on(
            &QuasiAffine::affine("Y1", &y1(&k)),
            &pt(&k, &[(0, 0), (0, 0), (0, 0)])
        )
        .unwrap());
        assert!(matches!(
            point_on(&x, &pt(&k, &[(0, 0)])),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn exclusion_safety_examples() {
        let k = k();
        let er = PolyRing::from_names(["x1", "y1"], &k, MonomialOrder::Grevlex).unwrap();
        let e = PresentedRing::from_strs(&er, &[&format!("y1^2 - {F1}")]).unwrap();
        let v1 = QuasiAffine::from_strs(
            "V1",
            &e,
            &[
                &["x1 - 1", "y1"],
                &["x1 - 2", "y1"],
                &["x1 - 3", "y1"],
                &["x1", "y1 + L"],
            ],
        )
        .unwrap();
        let h1 = RingMap::from_strs("h1", &y1(&k), &e, &["1", "x1", "y1"])
            .unwrap()
            .checked()
            .unwrap();
        assert!(morphism_avoids_excluded(&h1, &v1, &x1(&k)).unwrap());

        let v2 = QuasiAffine::from_strs("V2", &line(&k, "x"), &[&["x"]]).unwrap();
        let h2 = RingMap::from_strs("h2", &y1(&k), v2.ring(), &["0", "x", "0"])
            .unwrap()
            .checked()
            .unwrap();
        assert!(morphism_avoids_excluded(&h2, &v2, &x1(&k)).unwrap());

        let a1 = QuasiAffine::affine("A1", &line(&k, "t"));
        let c = RingMap::from_strs("c", &y1(&k), a1.ring(), &["0", "0", "0"])
            .unwrap()
            .checked()
            .unwrap();
        assert!(!morphism_avoids_excluded(&c, &a1, &x1(&k)).unwrap());
        assert!(excluded_violation(&c, &a1, &x1(&k)).unwrap().is_some());
    }

    #[test]
    fn localized_iso_examples() {
        let k = k();
        let rho = RingMap::from_strs("rho1", &y1(&k), &a1e(&k), &["x0", "x1", "x0*y1"]).unwrap();
        let x0 = y1(&k).var("x0").unwrap();
        let la = localize(&y1(&k), &x0).unwrap();
        let inv = RingMap::from_strs("inv", &a1e(&k), &la.ring, &["x0", "x1", "u*y1"]).unwrap();
        assert!(localized_iso(&rho, &x0, &inv).unwrap());

        let one = Poly::one(y1(&k).ring());
        let l1 = localize(&y1(&k), &one).unwrap();
        let inv1 = RingMap::from_strs("inv", &a1e(&k), &l1.ring, &["x0", "x1", "u*y1"]).unwrap();
        assert!(!localized_iso(&rho, &one, &inv1).unwrap());

        let a = line(&k, "x");
        let l = localize(&a, &Poly::one(a.ring())).unwrap();
        let back = RingMap::from_strs("i", &a, &l.ring, &["x"]).unwrap();
        assert!(localized_iso(&RingMap::identity(&a), &Poly::one(a.ring()), &back).unwrap());
    }

    #[test]
    fn evaluation_and_composition() {
        let k = k();
        let (y, base) = (y1(&k), line(&k, "x"));
        let phi = RingMap::from_strs("phi1", &base, &y, &["x0"])
            .unwrap()
            .checked()
            .unwrap();
        let beta = pt(&k, &[(0, 0), (1, 0), (0, 0)]);
        assert_eq!(evaluate_morphism(&phi, &beta).unwrap(), pt(&k, &[(0, 0)]));
        let id = RingMap::identity(&y);
        assert_eq!(evaluate_morphism(&id, &beta).unwrap(), beta);

        let rho = RingMap::from_strs("rho1", &y, &a1e(&k), &["x0", "x1", "x0*y1"])
            .unwrap()
            .checked()
            .unwrap();
        let comp = compose(&phi, &rho).unwrap();
        assert!(comp.is_verified());
        let q = pt(&k, &[(2, 0), (0, 0), (0, 1)]);
        assert_eq!(
            evaluate_morphism(&comp, &q).unwrap(),
            evaluate_morphism(&phi, &evaluate_morphism(&rho, &q).unwrap()).unwrap()
        );
        assert!(compose(&rho, &phi).is_err());
    }
}
