//! Buchberger's algorithm over `K` and the decision procedures built on it:
//! ideal membership, ideal equality, unit-ideal and radical-membership tests.

use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::poly::{same_ring, Monomial, MonomialOrder, Poly, Ring};

/// A reduced Gröbner basis together with the order it was computed under.
#[derive(Debug, Clone)]
pub struct GroebnerBasis {
    order: MonomialOrder,
    basis: Vec<Poly>,
    steps: u64,
}

/// Size statistics of a basis, for reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BasisSummary {
    pub order: String,
    pub size: usize,
    pub max_degree: u32,
    pub is_unit: bool,
    pub reduction_steps: u64,
}

impl GroebnerBasis {
    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn polys(&self) -> &[Poly] {
        &self.basis
    }

    pub fn is_unit(&self) -> bool {
        matches!(self.basis.as_slice(), [g] if g.is_constant())
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn summary(&self) -> BasisSummary {
        BasisSummary {
            order: self.order.to_string(),
            size: self.basis.len(),
            max_degree: self
                .basis
                .iter()
                .filter_map(Poly::total_degree)
                .max()
                .unwrap_or(0),
            is_unit: self.is_unit(),
            reduction_steps: self.steps,
        }
    }
}

/// A finitely generated ideal, with a write-once cache of its reduced basis
/// under the ring's order.
pub struct Ideal {
    ring: Ring,
    generators: Vec<Poly>,
    gb: OnceLock<Arc<GroebnerBasis>>,
}

impl Clone for Ideal {
    fn clone(&self) -> Self {
        let gb = OnceLock::new();
        if let Some(b) = self.gb.get() {
            let _ = gb.set(b.clone());
        }
        Ideal {
            ring: self.ring.clone(),
            generators: self.generators.clone(),
            gb,
        }
    }
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(Poly::to_string).collect();
        write!(f, "<{}>", gens.join(", "))
    }
}

impl Ideal {
    /// Zero generators are dropped.
    pub fn new(ring: &Ring, generators: impl IntoIterator<Item = Poly>) -> Result<Ideal> {
        let mut gens = Vec::new();
        for g in generators {
            same_ring(g.ring(), ring)?;
            if !g.is_zero() {
                gens.push(g);
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            generators: gens,
            gb: OnceLock::new(),
        })
    }

    pub fn zero(ring: &Ring) -> Ideal {
        Ideal {
            ring: ring.clone(),
            generators: Vec::new(),
            gb: OnceLock::new(),
        }
    }

    pub fn unit(ring: &Ring) -> Ideal {
        Ideal::new(ring, [Poly::one(ring)]).expect("same ring")
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn generators(&self) -> &[Poly] {
        &self.generators
    }

    /// `self + <extra>`.
    pub fn with(&self, extra: impl IntoIterator<Item = Poly>) -> Result<Ideal> {
        Ideal::new(&self.ring, self.generators.iter().cloned().chain(extra))
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        same_ring(&self.ring, &other.ring)?;
        self.with(other.generators.iter().cloned())
    }

    /// Generated by all pairwise products of generators.
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        same_ring(&self.ring, &other.ring)?;
        let mut gens = Vec::with_capacity(self.generators.len() * other.generators.len());
        for a in &self.generators {
            for b in &other.generators {
                gens.push(a * b);
            }
        }
        Ideal::new(&self.ring, gens)
    }

    /// Image of the generators under a substitution into `target`.
    pub fn map(&self, images: &[Poly], target: &Ring) -> Result<Ideal> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.substitute_into(images, target))
            .collect::<Result<Vec<_>>>()?;
        Ideal::new(target, gens)
    }

    /// Same generators in a ring with the same variables (possibly another
    /// order or budget).
    pub fn moved_to(&self, ring: &Ring) -> Ideal {
        Ideal {
            ring: ring.clone(),
            generators: self.generators.iter().map(|g| g.reorder(ring)).collect(),
            gb: OnceLock::new(),
        }
    }

    /// The reduced Gröbner basis under the ring's order (cached).
    pub fn groebner_basis(&self) -> Result<Arc<GroebnerBasis>> {
        if let Some(gb) = self.gb.get() {
            return Ok(gb.clone());
        }
        let gb = Arc::new(compute_basis(&self.ring, &self.generators)?);
        let _ = self.gb.set(gb.clone());
        Ok(self.gb.get().cloned().unwrap_or(gb))
    }
}

/// Reduced Gröbner basis of `ideal` under `order`. Cached when `order` is the
/// ring's own order.
pub fn buchberger(ideal: &Ideal, order: &MonomialOrder) -> Result<Arc<GroebnerBasis>> {
    if order == ideal.ring.order() {
        return ideal.groebner_basis();
    }
    let ring = ideal.ring.reordered(order.clone());
    let gens: Vec<Poly> = ideal.generators.iter().map(|g| g.reorder(&ring)).collect();
    Ok(Arc::new(compute_basis(&ring, &gens)?))
}

struct Reducer {
    steps: u64,
    budget: u64,
}

impl Reducer {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        if self.steps > self.budget {
            Err(Error::BudgetExceeded(self.budget))
        } else {
            Ok(())
        }
    }

    /// Full reduction of `p` by `basis` (monic elements).
    fn reduce(&mut self, p: &Poly, basis: &[Poly]) -> Result<Poly> {
        let ring = p.ring().clone();
        let mut rest = p.clone();
        let mut remainder: Vec<(Monomial, FieldElem)> = Vec::new();
        while let Some((lm, lc)) = rest.terms().first().cloned() {
            let divisor = basis
                .iter()
                .find(|g| g.leading_monomial().is_some_and(|gm| gm.divides(&lm)));
            match divisor {
                Some(g) => {
                    let gm = g.leading_monomial().expect("nonzero");
                    let shift = gm.quotient_of(&lm);
                    let c = &lc / g.leading_coeff().expect("nonzero");
                    rest = rest.sub_mul_term(&c, &shift, g);
                    self.tick()?;
                }
                None => {
                    rest.pop_leading();
                    remainder.push((lm, lc));
                }
            }
        }
        Ok(Poly::from_sorted(&ring, remainder))
    }
}

fn s_polynomial(f: &Poly, g: &Poly) -> Poly {
    let fm = f.leading_monomial().expect("nonzero");
    let gm = g.leading_monomial().expect("nonzero");
    let lcm = fm.lcm(gm);
    let fc = f
        .leading_coeff()
        .expect("nonzero")
        .invert()
        .expect("nonzero");
    let gc = g
        .leading_coeff()
        .expect("nonzero")
        .invert()
        .expect("nonzero");
    let a = f.mul_term(&fm.quotient_of(&lcm), &fc);
    a.sub_mul_term(&gc, &gm.quotient_of(&lcm), g)
}

fn compute_basis(ring: &Ring, generators: &[Poly]) -> Result<GroebnerBasis> {
    let order = ring.order().clone();
    let mut red = Reducer {
        steps: 0,
        budget: ring.budget(),
    };
    let mut basis: Vec<Poly> = Vec::new();
    let mut pending: HashSet<(usize, usize)> = HashSet::new();
    let mut unit = false;

    let add = |h: Poly, basis: &mut Vec<Poly>, pending: &mut HashSet<(usize, usize)>| -> bool {
        let h = h.monic();
        let k = basis.len();
        for i in 0..k {
            pending.insert((i, k));
        }
        let is_const = h.is_constant();
        basis.push(h);
        is_const
    };

    for g in generators {
        let h = red.reduce(g, &basis)?;
        if !h.is_zero() && add(h, &mut basis, &mut pending) {
            unit = true;
            break;
        }
    }

    while !unit && !pending.is_empty() {
        // normal strategy: smallest lcm first
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = lcm_of(&basis, **a);
                let lb = lcm_of(&basis, **b);
                order
                    .sugar_degree(&la)
                    .cmp(&order.sugar_degree(&lb))
                    .then_with(|| order.cmp(&la, &lb))
                    .then_with(|| a.cmp(b))
            })
            .expect("nonempty");
        pending.remove(&(i, j));

        let (mi, mj) = (
            basis[i].leading_monomial().expect("nonzero").clone(),
            basis[j].leading_monomial().expect("nonzero").clone(),
        );
        if mi.is_coprime(&mj) {
            continue;
        }
        let lcm = mi.lcm(&mj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading_monomial().expect("nonzero").divides(&lcm)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j]);
        red.tick()?;
        let h = red.reduce(&s, &basis)?;
        if !h.is_zero() && add(h, &mut basis, &mut pending) {
            unit = true;
        }
    }

    if unit {
        return Ok(GroebnerBasis {
            order,
            basis: vec![Poly::one(ring)],
            steps: red.steps,
        });
    }
    let basis = interreduce(basis, &mut red)?;
    Ok(GroebnerBasis {
        order,
        basis,
        steps: red.steps,
    })
}

fn lcm_of(basis: &[Poly], (i, j): (usize, usize)) -> Monomial {
    basis[i]
        .leading_monomial()
        .expect("nonzero")
        .lcm(basis[j].leading_monomial().expect("nonzero"))
}

fn interreduce(mut basis: Vec<Poly>, red: &mut Reducer) -> Result<Vec<Poly>> {
    // drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<Poly> = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let gm = g.leading_monomial().expect("nonzero");
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let hm = h.leading_monomial().expect("nonzero");
            j != i && hm.divides(gm) && (hm != gm || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    basis = keep;
    for i in 0..basis.len() {
        let others: Vec<Poly> = basis
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, g)| g.clone())
            .collect();
        basis[i] = red.reduce(&basis[i], &others)?.monic();
    }
    let ring_order = basis.first().map(|g| g.ring().order().clone());
    if let Some(order) = ring_order {
        basis.sort_by(|a, b| {
            order.cmp(
                b.leading_monomial().expect("nonzero"),
                a.leading_monomial().expect("nonzero"),
            )
        });
    }
    Ok(basis)
}

/// The unique remainder of `p` modulo the reduced basis of `ideal`.
pub fn normal_form(p: &Poly, ideal: &Ideal) -> Result<Poly> {
    same_ring(p.ring(), &ideal.ring)?;
    let gb = ideal.groebner_basis()?;
    let mut red = Reducer {
        steps: 0,
        budget: ideal.ring.budget(),
    };
    red.reduce(p, gb.polys())
}

pub fn ideal_member(p: &Poly, ideal: &Ideal) -> Result<bool> {
    Ok(normal_form(p, ideal)?.is_zero())
}

/// Mutual generator membership.
pub fn ideal_equal(a: &Ideal, b: &Ideal) -> Result<bool> {
    same_ring(&a.ring, &b.ring)?;
    for g in a.generators() {
        if !ideal_member(g, b)? {
            return Ok(false);
        }
    }
    for g in b.generators() {
        if !ideal_member(g, a)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_unit_ideal(ideal: &Ideal) -> Result<bool> {
    Ok(ideal.groebner_basis()?.is_unit())
}

/// `p` lies in the radical of `ideal` iff `ideal + <1 - u p>` is the unit
/// ideal in the ring extended by a fresh variable `u`.
pub fn radical_member(p: &Poly, ideal: &Ideal) -> Result<bool> {
    same_ring(p.ring(), &ideal.ring)?;
    if p.is_zero() {
        return Ok(true);
    }
    let (ext, names) = ideal.ring.extend(&["u"]);
    let u = Poly::var_named(&ext, &names[0])?;
    let lift = |q: &Poly| q.embed_into(&ext);
    let mut gens = ideal
        .generators
        .iter()
        .map(lift)
        .collect::<Result<Vec<_>>>()?;
    gens.push(&Poly::one(&ext) - &(&u * &lift(p)?));
    is_unit_ideal(&Ideal::new(&ext, gens)?)
}

/// `V(ideal) ⊆ V(target)`: every generator of `target` is in the radical.
pub fn locus_contained(ideal: &Ideal, target: &Ideal) -> Result<bool> {
    for g in target.generators() {
        if !radical_member(g, ideal)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{make_field, rat};
    use crate::poly::{parse_poly, PolyRing};

    fn ring(names: &[&str], order: MonomialOrder) -> Ring {
        let k = make_field(rat(1), rat(2), rat(3)).unwrap();
        PolyRing::from_names(names.iter().copied(), &k, order).unwrap()
    }

    fn ideal(r: &Ring, gens: &[&str]) -> Ideal {
        Ideal::new(r, gens.iter().map(|g| parse_poly(g, r).unwrap())).unwrap()
    }

    const E: &str = "y^2 - (x^3 - 6*x^2 + 11*x - 6)";

    #[test]
    fn principal_ideal_is_its_own_basis() {
        let r = ring(&["x", "y"], MonomialOrder::Grevlex);
        let i = ideal(&r, &[E]);
        let gb = i.groebner_basis().unwrap();
        assert_eq!(gb.polys(), &[parse_poly(E, &r).unwrap().monic()]);
    }

    #[test]
    fn hand_checked_basis() {
        // <x^2, xy + y^2> under grevlex x > y. S(xy+y^2, x^2) = x(xy+y^2) - y x^2
        // = x y^2, which reduces by (xy + y^2)*y to -y^3. Then S(x^2, y^3) is
        // coprime and S(xy+y^2, y^3) = y^2(xy+y^2) - x y^3 = y^4 -> 0.
        let r = ring(&["x", "y"], MonomialOrder::Grevlex);
        let i = ideal(&r, &["x^2", "x*y + y^2"]);
        let gb = i.groebner_basis().unwrap();
        let expected: Vec<Poly> = ["y^3", "x^2", "x*y + y^2"]
            .iter()
            .map(|s| parse_poly(s, &r).unwrap())
            .collect();
        assert_eq!(gb.polys(), expected.as_slice());
        assert!(ideal_member(&parse_poly("y^3", &r).unwrap(), &i).unwrap());
    }

    #[test]
    fn unit_ideal() {
        let r = ring(&["x", "y"], MonomialOrder::Grevlex);
        let i = ideal(&r, &["1"]);
        assert!(is_unit_ideal(&i).unwrap());
        assert_eq!(i.groebner_basis().unwrap().polys(), &[Poly::one(&r)]);
    }

    #[test]
    fn normal_form_examples() {
        let r = ring(&["x0", "x1", "y1"], MonomialOrder::Grevlex);
        let i = ideal(&r, &["y1^2 - (x1^3 - 6*x1^2 + 11*x1 - 6)"]);
        let g = i.generators()[0].clone();
        assert!(normal_form(&g, &i).unwrap().is_zero());
        let pulled = parse_poly("y1^2*x0^2 - x0^2*(x1^3 - 6*x1^2 + 11*x1 - 6)", &r).unwrap();
        assert!(normal_form(&pulled, &i).unwrap().is_zero());

        let r2 = ring(&["x", "y"], MonomialOrder::Grevlex);
        let xy = ideal(&r2, &["x", "y"]);
        assert_eq!(normal_form(&Poly::one(&r2), &xy).unwrap(), Poly::one(&r2));
    }

    #[test]
    fn membership_and_equality() {
        let r = ring(&["x", "y"], MonomialOrder::Grevlex);
        assert!(ideal_equal(&ideal(&r, &["x", "y"]), &ideal(&r, &["x + y", "y"])).unwrap());
        assert!(!ideal_member(&parse_poly("x", &r).unwrap(), &ideal(&r, &["x^2"])).unwrap());
        // smoothness of E
        let jac = ideal(&r, &[E, "2*y", "3*x^2 - 12*x + 11"]);
        assert!(is_unit_ideal(&jac).unwrap());
    }

    #[test]
    fn radical_examples() {
        let r = ring(&["x", "y"], MonomialOrder::Grevlex);
        let x = parse_poly("x", &r).unwrap();
        let y = parse_poly("y", &r).unwrap();
        assert!(radical_member(&x, &ideal(&r, &["x^2"])).unwrap());
        assert!(!radical_member(&y, &ideal(&r, &[E, "x"])).unwrap());
        assert!(!radical_member(&Poly::one(&r), &ideal(&r, &["x"])).unwrap());
    }

    #[test]
    fn ring_mismatch() {
        let r = ring(&["x", "y"], MonomialOrder::Grevlex);
        let s = ring(&["a"], MonomialOrder::Grevlex);
        let p = parse_poly("a", &s).unwrap();
        assert!(matches!(
            ideal_member(&p, &ideal(&r, &["x"])),
            Err(Error::RingMismatch(_))
        ));
        assert!(matches!(Ideal::new(&r, [p]), Err(Error::RingMismatch(_))));
    }

    #[test]
    fn budget_is_enforced() {
        let r = ring(&["x", "y", "z"], MonomialOrder::Grevlex).rebudgeted(3);
        let i = ideal(&r, &["x^2 - y*z + z", "y^2 - x*z + 1", "z^2 - x*y + x"]);
        assert_eq!(i.groebner_basis().unwrap_err(), Error::BudgetExceeded(3));
    }

    #[test]
    fn basis_is_independent_of_generator_order() {
        let r = ring(&["x", "y", "z"], MonomialOrder::Grevlex);
        let gens = ["x^2 - y*z + 1", "x*y - z^2", "y^2*z - x + 2"];
        let a = ideal(&r, &gens).groebner_basis().unwrap();
        let rev: Vec<&str> = gens.iter().rev().copied().collect();
        let b = ideal(&r, &rev).groebner_basis().unwrap();
        assert_eq!(a.polys(), b.polys());
        let other = buchberger(&ideal(&r, &gens), &MonomialOrder::Lex).unwrap();
        assert_eq!(other.order(), &MonomialOrder::Lex);
    }
}
