//! Bounded-degree certificates that the line admits no nonconstant map into
//! `E`, `G_m`, or the punctured double line `Spec K[x,y]/(y^2) ∖ {0}`.
//!
//! Each exact degree `e` of the parametrization is one slice: the unknowns
//! are the coefficients of the component polynomials, the equations are the
//! coefficients in `t` of the defining relation, and nonconstancy is imposed
//! by inverting the leading coefficient with an extra variable. A slice whose
//! coefficient ideal is the unit ideal has no solution over the algebraic
//! closure. This is a shadow of rigidity below a degree bound, not a proof
//! for all degrees.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};
use crate::groebner::{radical_member, BasisSummary, Ideal};
use crate::poly::{build_f, default_budget, Monomial, MonomialOrder, Poly, PolyRing, Ring, VarSet};

/// Coefficient range `[-r, r]` of the explicit-map search.
pub const SEARCH_RADIUS: i64 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RigidTarget {
    EllipticE,
    Gm,
    NonreducedPuncturedLine,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum RigidityStatus {
    CertifiedNoNonconstant,
    /// A slice has a proper coefficient ideal, so maps of that degree exist
    /// over the algebraic closure. The witness names the slice and, when the
    /// small-coefficient search finds one, an explicit map.
    FoundMap(String),
    Inconclusive(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceEvidence {
    pub degree: u32,
    /// No unknowns can satisfy the degree count (e.g. `2 deg y = 3 deg x` odd).
    pub vacuous: bool,
    pub unknowns: usize,
    pub equations: usize,
    pub basis: Option<BasisSummary>,
    pub wall_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidityCertificate {
    pub target: RigidTarget,
    pub degree_bound: u32,
    pub status: RigidityStatus,
    pub slices: Vec<SliceEvidence>,
    /// Extra facts checked along the way (nilpotent images, reductions).
    pub notes: Vec<String>,
}

impl RigidityCertificate {
    pub fn certified(&self) -> bool {
        self.status == RigidityStatus::CertifiedNoNonconstant
    }
}

/// Generic polynomial `sum c_i t^i` with `c_i` the given ring variables.
fn generic(ring: &Ring, coeffs: &[usize], t: usize) -> Poly {
    let tv = Poly::var(ring, t);
    let mut out = Poly::zero(ring);
    for (i, &c) in coeffs.iter().enumerate() {
        out = &out + &(&Poly::var(ring, c) * &tv.pow(i as u32));
    }
    out
}

/// Coefficients of `p` in the variable `t`, moved into `target` (which lacks `t`).
fn coefficients_in(p: &Poly, t: usize, target: &Ring) -> Result<Vec<Poly>> {
    let mut by_degree: BTreeMap<u32, Vec<(Monomial, FieldElem)>> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut e = m.exponents().to_vec();
        let d = e.remove(t);
        by_degree
            .entry(d)
            .or_default()
            .push((Monomial::new(e), c.clone()));
    }
    Ok(by_degree
        .into_values()
        .map(|terms| Poly::from_terms(target, terms))
        .collect())
}

/// Unknown-coefficient rings: `names` plus the Rabinowitsch variable `u`,
/// and the same with `t` appended for building the relation.
fn slice_rings(field: &Field, names: Vec<String>, budget: u64) -> Result<(Ring, Ring)> {
    let mut with_u = names;
    with_u.push("u".into());
    let mut with_t = with_u.clone();
    with_t.push("t".into());
    Ok((
        PolyRing::with_budget(
            VarSet::new(with_u)?,
            field.clone(),
            MonomialOrder::Grevlex,
            budget,
        ),
        PolyRing::with_budget(
            VarSet::new(with_t)?,
            field.clone(),
            MonomialOrder::Grevlex,
            budget,
        ),
    ))
}

enum SliceOutcome {
    Unit(SliceEvidence),
    Proper(SliceEvidence, String),
    Budget(SliceEvidence, u64),
}

fn run_slice(degree: u32, ideal: Ideal, unknowns: usize) -> Result<SliceOutcome> {
    let start = Instant::now();
    let equations = ideal.generators().len();
    let gb = ideal.groebner_basis();
    let mut ev = SliceEvidence {
        degree,
        vacuous: false,
        unknowns,
        equations,
        basis: None,
        wall_ms: 0,
    };
    ev.wall_ms = start.elapsed().as_millis() as u64;
    Ok(match gb {
        Ok(gb) => {
            ev.basis = Some(gb.summary());
            if gb.is_unit() {
                SliceOutcome::Unit(ev)
            } else {
                let shown: Vec<String> = gb.polys().iter().take(6).map(|p| p.to_string()).collect();
                let w = format!(
                    "degree {degree}: proper coefficient ideal, basis starts [{}]",
                    shown.join(", ")
                );
                SliceOutcome::Proper(ev, w)
            }
        }
        Err(Error::BudgetExceeded(b)) => SliceOutcome::Budget(ev, b),
        Err(e) => return Err(e),
    })
}

fn assemble(target: RigidTarget, d: u32, outcomes: Vec<SliceOutcome>) -> RigidityCertificate {
    let mut status = RigidityStatus::CertifiedNoNonconstant;
    let mut slices = Vec::new();
    for o in outcomes {
        match o {
            SliceOutcome::Unit(e) => slices.push(e),
            SliceOutcome::Proper(e, w) => {
                if !matches!(status, RigidityStatus::FoundMap(_)) {
                    status = RigidityStatus::FoundMap(w);
                }
                slices.push(e);
            }
            SliceOutcome::Budget(e, b) => {
                if status == RigidityStatus::CertifiedNoNonconstant {
                    status = RigidityStatus::Inconclusive(b);
                }
                slices.push(e);
            }
        }
    }
    RigidityCertificate {
        target,
        degree_bound: d,
        status,
        slices,
        notes: Vec::new(),
    }
}

fn vacuous(degree: u32) -> SliceOutcome {
    SliceOutcome::Unit(SliceEvidence {
        degree,
        vacuous: true,
        unknowns: 0,
        equations: 0,
        basis: None,
        wall_ms: 0,
    })
}

/// Coefficient ideal for `x(t)` of exact degree `e` and `y(t)` of degree `3e/2`
/// on `y^2 = f(x)`, with `1 - u * lc(x)` appended. `None` when `3e` is odd.
pub fn e_slice_ideal(field: &Field, e: u32, budget: u64) -> Result<Option<Ideal>> {
    if (3 * e) % 2 == 1 {
        return Ok(None);
    }
    let m = 3 * e / 2;
    let mut names: Vec<String> = (0..=e).map(|i| format!("a{i}")).collect();
    names.extend((0..=m).map(|i| format!("b{i}")));
    let (ring, ring_t) = slice_rings(field, names, budget)?;
    let nx = e as usize + 1;
    let ny = m as usize + 1;
    let t = ring_t.nvars() - 1;
    let x = generic(&ring_t, &(0..nx).collect::<Vec<_>>(), t);
    let y = generic(&ring_t, &(nx..nx + ny).collect::<Vec<_>>(), t);
    let f = build_f(&ring_t, "t")?;
    let mut images: Vec<Poly> = (0..t).map(|i| Poly::var(&ring_t, i)).collect();
    images.push(x);
    let fx = f.substitute(&images)?;
    let relation = &(&y * &y) - &fx;
    let mut gens = coefficients_in(&relation, t, &ring)?;
    let u = Poly::var(&ring, nx + ny);
    gens.push(&Poly::one(&ring) - &(&u * &Poly::var(&ring, nx - 1)));
    Ok(Some(Ideal::new(&ring, gens)?))
}

pub fn certify_e(field: &Field, d: u32) -> Result<RigidityCertificate> {
    certify_e_with_budget(field, d, default_budget())
}

pub fn certify_e_with_budget(field: &Field, d: u32, budget: u64) -> Result<RigidityCertificate> {
    if d == 0 {
        return Err(Error::Config("degree bound must be at least 1".into()));
    }
    let ideals = (1..=d)
        .map(|e| Ok((e, e_slice_ideal(field, e, budget)?)))
        .collect::<Result<Vec<_>>>()?;
    let outcomes: Vec<SliceOutcome> = ideals
        .into_iter()
        .map(|(e, ideal)| match ideal {
            None => Ok(vacuous(e)),
            Some(i) => {
                let n = i.ring().nvars() - 1;
                // an explicit solution settles the slice without a basis
                if let Some((x, y)) = search_small_e_maps(field, e, SEARCH_RADIUS) {
                    let ev = SliceEvidence {
                        degree: e,
                        vacuous: false,
                        unknowns: n,
                        equations: i.generators().len(),
                        basis: None,
                        wall_ms: 0,
                    };
                    let w = format!(
                        "degree {e}: explicit map x = {}, y = {}",
                        render_upoly(&x),
                        render_upoly(&y)
                    );
                    return Ok(SliceOutcome::Proper(ev, w));
                }
                run_slice(e, i, n)
            }
        })
        .collect::<Result<_>>()?;
    Ok(assemble(RigidTarget::EllipticE, d, outcomes))
}

/// Coefficient ideal for `u(t)` of exact degree `e` and `v(t)` of degree `<= d`
/// with `u v = 1`, leading coefficient of `u` inverted.
pub fn gm_slice_ideal(field: &Field, e: u32, d: u32, budget: u64) -> Result<Ideal> {
    let mut names: Vec<String> = (0..=e).map(|i| format!("a{i}")).collect();
    names.extend((0..=d).map(|i| format!("b{i}")));
    let (ring, ring_t) = slice_rings(field, names, budget)?;
    let nu = e as usize + 1;
    let nv = d as usize + 1;
    let t = ring_t.nvars() - 1;
    let u = generic(&ring_t, &(0..nu).collect::<Vec<_>>(), t);
    let v = generic(&ring_t, &(nu..nu + nv).collect::<Vec<_>>(), t);
    let relation = &(&u * &v) - &Poly::one(&ring_t);
    let mut gens = coefficients_in(&relation, t, &ring)?;
    let w = Poly::var(&ring, nu + nv);
    gens.push(&Poly::one(&ring) - &(&w * &Poly::var(&ring, nu - 1)));
    Ideal::new(&ring, gens)
}

pub fn certify_gm(field: &Field, d: u32) -> Result<RigidityCertificate> {
    certify_gm_with_budget(field, d, default_budget())
}

pub fn certify_gm_with_budget(field: &Field, d: u32, budget: u64) -> Result<RigidityCertificate> {
    if d == 0 {
        return Err(Error::Config("degree bound must be at least 1".into()));
    }
    let ideals = (1..=d)
        .map(|e| Ok((e, gm_slice_ideal(field, e, d, budget)?)))
        .collect::<Result<Vec<_>>>()?;
    let outcomes: Vec<SliceOutcome> = ideals
        .into_iter()
        .map(|(e, i)| {
            let n = i.ring().nvars() - 1;
            run_slice(e, i, n)
        })
        .collect::<Result<_>>()?;
    Ok(assemble(RigidTarget::Gm, d, outcomes))
}

/// Every coefficient of `y(t)` lies in the radical of the coefficient ideal of
/// `y(t)^2 = 0`, i.e. the image of `y` under any map `K[x,y]/(y^2) -> K[t]` is 0.
pub fn nilpotent_image_vanishes(field: &Field, d: u32, budget: u64) -> Result<bool> {
    let names: Vec<String> = (0..=d).map(|i| format!("b{i}")).collect();
    let (ring, ring_t) = slice_rings(field, names, budget)?;
    let t = ring_t.nvars() - 1;
    let y = generic(&ring_t, &(0..=d as usize).collect::<Vec<_>>(), t);
    let ideal = Ideal::new(&ring, coefficients_in(&(&y * &y), t, &ring)?)?;
    for i in 0..=d as usize {
        if !radical_member(&Poly::var(&ring, i), &ideal)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn certify_nonreduced_line(field: &Field, d: u32) -> Result<RigidityCertificate> {
    certify_nonreduced_line_with_budget(field, d, default_budget())
}

pub fn certify_nonreduced_line_with_budget(
    field: &Field,
    d: u32,
    budget: u64,
) -> Result<RigidityCertificate> {
    let vanishes = match nilpotent_image_vanishes(field, d, budget) {
        Ok(v) => v,
        Err(Error::BudgetExceeded(b)) => {
            return Ok(RigidityCertificate {
                target: RigidTarget::NonreducedPuncturedLine,
                degree_bound: d,
                status: RigidityStatus::Inconclusive(b),
                slices: Vec::new(),
                notes: vec!["nilpotent check exceeded the budget".into()],
            })
        }
        Err(e) => return Err(e),
    };
    let mut cert = certify_gm_with_budget(field, d, budget)?;
    cert.target = RigidTarget::NonreducedPuncturedLine;
    if vanishes {
        cert.notes
            .push(format!("y(t)^2 = 0 forces y(t) = 0 for deg y <= {d}"));
        cert.notes
            .push("x(t) avoids 0, so x(t) is a unit of K[t]".into());
    } else {
        cert.status =
            RigidityStatus::FoundMap(format!("a nonzero square-zero y(t) of degree <= {d}"));
    }
    Ok(cert)
}

/// Univariate polynomials over `K` as coefficient vectors, low degree first.
fn upoly_mul(a: &[FieldElem], b: &[FieldElem], zero: &FieldElem) -> Vec<FieldElem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![zero.clone(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn trim(mut p: Vec<FieldElem>) -> Vec<FieldElem> {
    while p.last().is_some_and(FieldElem::is_zero) {
        p.pop();
    }
    p
}

fn render_upoly(p: &[FieldElem]) -> String {
    let terms: Vec<String> = p
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| match i {
            0 => format!("({c})"),
            1 => format!("({c})*t"),
            _ => format!("({c})*t^{i}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// `f(x(t))` for `f = (x - l1)(x - l2)(x - l3)`.
fn f_of(field: &Field, x: &[FieldElem]) -> Vec<FieldElem> {
    let zero = field.zero();
    let mut acc = vec![field.one()];
    for i in 1..=3 {
        let mut factor = x.to_vec();
        if factor.is_empty() {
            factor.push(zero.clone());
        }
        factor[0] = &factor[0] - &field.param(i);
        acc = upoly_mul(&acc, &factor, &zero);
    }
    trim(acc)
}

/// A square root of `target` whose coefficients are integers in `[-r, r]`, if any.
fn small_sqrt(field: &Field, target: &[FieldElem], r: i64) -> Option<Vec<FieldElem>> {
    let zero = field.zero();
    if target.is_empty() {
        return Some(Vec::new());
    }
    if (target.len() - 1) % 2 == 1 {
        return None;
    }
    let m = (target.len() - 1) / 2;
    let small = |c: &FieldElem| -> bool {
        c.is_rational()
            && c.re().is_integer()
            && c.re().numer().magnitude() <= &num_bigint::BigUint::from(r.unsigned_abs())
    };
    for lead in (-r..=r).filter(|&c| c != 0) {
        let lead = field.from_int(lead);
        if &lead * &lead != target[2 * m] {
            continue;
        }
        // coefficients from the top down: target[m + k] fixes y[k]
        let mut y = vec![zero.clone(); m + 1];
        y[m] = lead.clone();
        let two_lead = &lead + &lead;
        let mut ok = true;
        for k in (0..m).rev() {
            // subtract the pairs (i, j) with i, j in (k, m), i + j = m + k
            let mut pairs = zero.clone();
            for i in (k + 1)..m {
                let j = m + k - i;
                if j > k && j < m {
                    pairs = &pairs + &(&y[i] * &y[j]);
                }
            }
            let val = (&target[m + k] - &pairs).checked_div(&two_lead).ok()?;
            if !small(&val) {
                ok = false;
                break;
            }
            y[k] = val;
        }
        if ok && trim(upoly_mul(&y, &y, &zero)) == target {
            return Some(y);
        }
    }
    None
}

/// Exhaustive search over `x(t)` of exact degree `e` with integer coefficients
/// in `[-r, r]` for a `y(t)` with coefficients in the same range and
/// `y^2 = f(x)`. Degree 0 allows constant maps.
pub fn search_small_e_maps(
    field: &Field,
    e: u32,
    r: i64,
) -> Option<(Vec<FieldElem>, Vec<FieldElem>)> {
    let width = (2 * r + 1) as usize;
    let n = e as usize + 1;
    let total = width.pow(n as u32);
    for idx in 0..total {
        let mut rest = idx;
        let mut x = Vec::with_capacity(n);
        for _ in 0..n {
            x.push(field.from_int((rest % width) as i64 - r));
            rest /= width;
        }
        if e > 0 && x[n - 1].is_zero() {
            continue;
        }
        let target = f_of(field, &x);
        if let Some(y) = small_sqrt(field, &target, r) {
            return Some((x, y));
        }
    }
    None
}
