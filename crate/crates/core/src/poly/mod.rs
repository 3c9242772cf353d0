//! Sparse multivariate polynomials over `K` with a fixed variable list and
//! monomial order.

mod order;
mod parse;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

pub use order::{Monomial, MonomialOrder};
pub use parse::parse_poly;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElem};

/// Default reduction budget for Gröbner computations in a ring.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "A1TOWER_BUDGET";

pub fn default_budget() -> u64 {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

/// Ordered list of distinct variable names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarSet {
    names: Vec<String>,
}

fn valid_ident(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "L"
}

impl VarSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<VarSet> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        for (i, n) in names.iter().enumerate() {
            if !valid_ident(n) {
                return Err(Error::InvalidVarSet(format!(
                    "`{n}` is not a valid variable name"
                )));
            }
            if names[..i].contains(n) {
                return Err(Error::InvalidVarSet(format!("duplicate variable `{n}`")));
            }
        }
        Ok(VarSet { names })
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// A name not yet in the set, derived from `base`.
    pub fn fresh(&self, base: &str) -> String {
        if self.index(base).is_none() {
            return base.to_string();
        }
        (2..)
            .map(|k| format!("{base}_{k}"))
            .find(|n| self.index(n).is_none())
            .expect("unbounded")
    }
}

/// The polynomial ring `K[vars]` with its monomial order and reduction budget.
#[derive(Debug)]
pub struct PolyRing {
    vars: VarSet,
    field: Field,
    order: MonomialOrder,
    budget: u64,
}

pub type Ring = Arc<PolyRing>;

impl PartialEq for PolyRing {
    /// The budget is a resource limit, not part of the ring's identity.
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.field == other.field && self.order == other.order
    }
}

impl PolyRing {
    pub fn new(vars: VarSet, field: Field, order: MonomialOrder) -> Ring {
        Self::with_budget(vars, field, order, default_budget())
    }

    pub fn with_budget(vars: VarSet, field: Field, order: MonomialOrder, budget: u64) -> Ring {
        if let MonomialOrder::Weighted(w) = &order {
            assert!(w.iter().all(|&x| x > 0), "weights must be positive");
        }
        Arc::new(PolyRing {
            vars,
            field,
            order,
            budget,
        })
    }

    /// Convenience constructor from variable names.
    pub fn from_names<S: Into<String>>(
        names: impl IntoIterator<Item = S>,
        field: &Field,
        order: MonomialOrder,
    ) -> Result<Ring> {
        Ok(Self::new(VarSet::new(names)?, field.clone(), order))
    }

    pub fn vars(&self) -> &VarSet {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// Same variables and field under a different order.
    pub fn reordered(&self, order: MonomialOrder) -> Ring {
        Self::with_budget(self.vars.clone(), self.field.clone(), order, self.budget)
    }

    /// Same ring with a different budget.
    pub fn rebudgeted(&self, budget: u64) -> Ring {
        Self::with_budget(
            self.vars.clone(),
            self.field.clone(),
            self.order.clone(),
            budget,
        )
    }

    /// Appends fresh variables derived from `bases`; returns the new ring and
    /// the chosen names.
    pub fn extend(&self, bases: &[&str]) -> (Ring, Vec<String>) {
        let mut names = self.vars.names.clone();
        let mut added = Vec::new();
        for base in bases {
            let vs = VarSet {
                names: names.clone(),
            };
            let name = vs.fresh(base);
            names.push(name.clone());
            added.push(name);
        }
        let order = self.order.extend(self.nvars(), bases.len());
        let ring = Self::with_budget(VarSet { names }, self.field.clone(), order, self.budget);
        (ring, added)
    }
}

pub(crate) fn same_ring(a: &Ring, b: &Ring) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(Error::RingMismatch(format!(
            "[{}] vs [{}]",
            a.vars.names.join(","),
            b.vars.names.join(",")
        )))
    }
}

/// A polynomial: terms sorted by descending monomial, no zero coefficients.
#[derive(Clone)]
pub struct Poly {
    ring: Ring,
    terms: Vec<(Monomial, FieldElem)>,
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring)
            && self.terms == other.terms
    }
}

impl Eq for Poly {}

impl Poly {
    pub fn zero(ring: &Ring) -> Poly {
        Poly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &Ring, c: FieldElem) -> Poly {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn one(ring: &Ring) -> Poly {
        Self::constant(ring, ring.field.one())
    }

    pub fn from_int(ring: &Ring, n: i64) -> Poly {
        Self::constant(ring, ring.field.from_int(n))
    }

    pub fn monomial(ring: &Ring, m: Monomial, c: FieldElem) -> Poly {
        assert_eq!(m.len(), ring.nvars());
        if c.is_zero() {
            Self::zero(ring)
        } else {
            Poly {
                ring: ring.clone(),
                terms: vec![(m, c)],
            }
        }
    }

    /// The variable at `index`.
    pub fn var(ring: &Ring, index: usize) -> Poly {
        Self::monomial(ring, Monomial::var(ring.nvars(), index), ring.field.one())
    }

    pub fn var_named(ring: &Ring, name: &str) -> Result<Poly> {
        let i = ring
            .vars
            .index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var(ring, i))
    }

    /// Builds a polynomial from arbitrary (possibly repeated, zero, unsorted) terms.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, FieldElem)>) -> Poly {
        let mut acc: HashMap<Monomial, FieldElem> = HashMap::new();
        for (m, c) in terms {
            assert_eq!(m.len(), ring.nvars());
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let order = ring.order.clone();
        terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, FieldElem)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    /// The constant value, if the polynomial is constant.
    pub fn as_constant(&self) -> Option<FieldElem> {
        match self.terms.as_slice() {
            [] => Some(self.ring.field.zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|(m, _)| m)
    }

    pub fn leading_coeff(&self) -> Option<&FieldElem> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.exponents()[var]).max()
    }

    /// Coefficient of the monomial `m` (zero if absent).
    pub fn coeff(&self, m: &Monomial) -> FieldElem {
        self.terms
            .iter()
            .find(|(t, _)| t == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(|| self.ring.field.zero())
    }

    /// Indices of variables that occur.
    pub fn support_vars(&self) -> Vec<usize> {
        (0..self.ring.nvars())
            .filter(|&i| self.terms.iter().any(|(m, _)| m.exponents()[i] > 0))
            .collect()
    }

    fn cmp_mono(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.ring.order.cmp(a, b)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match self.cmp_mono(ma, mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), if negate { -cb } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if negate { ca - cb } else { ca + cb };
                    if !c.is_zero() {
                        out.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        out.extend(
            other.terms[j..]
                .iter()
                .map(|(m, c)| (m.clone(), if negate { -c } else { c.clone() })),
        );
        Poly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn checked_add(&self, other: &Poly) -> Result<Poly> {
        same_ring(&self.ring, &other.ring)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Poly) -> Result<Poly> {
        same_ring(&self.ring, &other.ring)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        same_ring(&self.ring, &other.ring)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.ring));
        }
        let (small, big) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = Poly::zero(&self.ring);
        for (m, c) in &small.terms {
            acc = acc.merge(&big.mul_term(m, c), false);
        }
        Ok(acc)
    }

    /// `c * m * self`; multiplication by a term preserves the term order.
    pub fn mul_term(&self, m: &Monomial, c: &FieldElem) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.ring);
        }
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(t, d)| (t.mul(m), d * c)).collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Poly {
        self.mul_term(&Monomial::one(self.ring.nvars()), c)
    }

    /// `self - c*m*g` in one pass.
    pub(crate) fn sub_mul_term(&self, c: &FieldElem, m: &Monomial, g: &Poly) -> Poly {
        self.merge(&g.mul_term(m, c), true)
    }

    /// Terms must already be sorted descending with nonzero coefficients.
    pub(crate) fn from_sorted(ring: &Ring, terms: Vec<(Monomial, FieldElem)>) -> Poly {
        Poly {
            ring: ring.clone(),
            terms,
        }
    }

    /// Removes and returns the leading term.
    pub(crate) fn pop_leading(&mut self) -> Option<(Monomial, FieldElem)> {
        if self.terms.is_empty() {
            None
        } else {
            Some(self.terms.remove(0))
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading_coeff() {
            Some(c) if !c.is_one() => self.scale(&c.invert().expect("nonzero leading coeff")),
            _ => self.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one(&self.ring);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn evaluate(&self, point: &[FieldElem]) -> Result<FieldElem> {
        let n = self.ring.nvars();
        if point.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: point.len(),
            });
        }
        let field = &self.ring.field;
        for p in point {
            if p.field() != field {
                return Err(Error::MixedFieldSpecs);
            }
        }
        let mut total = field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = &t * &x.pow(e);
                }
            }
            total = &total + &t;
        }
        Ok(total)
    }

    /// Ring homomorphism sending variable `i` to `images[i]`; the target ring
    /// is taken from the images.
    pub fn substitute(&self, images: &[Poly]) -> Result<Poly> {
        match images.first() {
            Some(p) => {
                let target = p.ring.clone();
                self.substitute_into(images, &target)
            }
            None => Err(Error::ArityMismatch {
                expected: self.ring.nvars(),
                got: 0,
            }),
        }
    }

    /// Ring homomorphism `K[vars] -> target` sending variable `i` to `images[i]`.
    pub fn substitute_into(&self, images: &[Poly], target: &Ring) -> Result<Poly> {
        let n = self.ring.nvars();
        if images.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                got: images.len(),
            });
        }
        for img in images {
            same_ring(&img.ring, target)?;
        }
        if self.ring.field != target.field {
            return Err(Error::MixedFieldSpecs);
        }
        let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::one(target)]; n];
        let mut acc = Poly::zero(target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            acc = acc.merge(&t, false);
        }
        Ok(acc)
    }

    /// Substitution by variable name; every variable occurring in `self` must
    /// have an image.
    pub fn substitute_named(&self, images: &HashMap<String, Poly>, target: &Ring) -> Result<Poly> {
        let full: Vec<Poly> = self
            .ring
            .vars
            .names
            .iter()
            .enumerate()
            .map(|(i, name)| match images.get(name) {
                Some(p) => Ok(p.clone()),
                None if self.support_vars().contains(&i) => Err(Error::MissingImage(name.clone())),
                None => Ok(Poly::zero(target)),
            })
            .collect::<Result<_>>()?;
        self.substitute_into(&full, target)
    }

    /// Re-expresses the polynomial in another ring whose variable names
    /// include all variables occurring here.
    pub fn embed_into(&self, target: &Ring) -> Result<Poly> {
        let images: Vec<Poly> = (0..self.ring.nvars())
            .map(|i| {
                let name = &self.ring.vars.names[i];
                match target.vars.index(name) {
                    Some(j) => Ok(Poly::var(target, j)),
                    None if self.support_vars().contains(&i) => {
                        Err(Error::UnknownVariable(name.clone()))
                    }
                    None => Ok(Poly::zero(target)),
                }
            })
            .collect::<Result<_>>()?;
        self.substitute_into(&images, target)
    }

    /// Moves the polynomial into a ring with the same variables and a
    /// different order (re-sorting terms).
    pub fn reorder(&self, ring: &Ring) -> Poly {
        assert_eq!(self.ring.vars, ring.vars);
        Poly::from_terms(ring, self.terms.iter().cloned())
    }

    pub fn partial_derivative(&self, var: usize) -> Poly {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponents()[var] > 0)
            .map(|(m, c)| {
                let mut e = m.exponents().to_vec();
                let k = e[var];
                e[var] -= 1;
                (Monomial::new(e), c.scale(&crate::field::rat(k as i64)))
            });
        Poly::from_terms(&self.ring, terms)
    }
}

macro_rules! poly_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&Poly> for &Poly {
            type Output = Poly;
            /// Panics on ring mismatch; use the `checked_*` form to handle it.
            fn $method(self, rhs: &Poly) -> Poly {
                self.$checked(rhs).expect("polynomial arithmetic")
            }
        }
        impl std::ops::$trait<Poly> for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                self.$checked(&rhs).expect("polynomial arithmetic")
            }
        }
    };
}

poly_binop!(Add, add, checked_add);
poly_binop!(Sub, sub, checked_sub);
poly_binop!(Mul, mul, checked_mul);

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

/// Binary ring operations, for the checked entry point [`poly_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

pub fn poly_arith(p: &Poly, q: &Poly, op: PolyOp) -> Result<Poly> {
    match op {
        PolyOp::Add => p.checked_add(q),
        PolyOp::Sub => p.checked_sub(q),
        PolyOp::Mul => p.checked_mul(q),
    }
}

/// `f(x) = (x - l1)(x - l2)(x - l3)` in the variable `var` of `ring`.
pub fn build_f(ring: &Ring, var: &str) -> Result<Poly> {
    let x = Poly::var_named(ring, var)?;
    let field = ring.field();
    let mut f = Poly::one(ring);
    for i in 1..=3 {
        f = &f * &(&x - &Poly::constant(ring, field.param(i)));
    }
    Ok(f)
}

/// Dense univariate coefficient list, lowest degree first, trailing zeros trimmed.
fn dense_univariate(p: &Poly, var: usize) -> Result<Vec<FieldElem>> {
    let field = p.ring.field();
    let deg = p.degree_in(var).unwrap_or(0) as usize;
    let mut coeffs = vec![field.zero(); deg + 1];
    for (m, c) in &p.terms {
        if m.exponents()
            .iter()
            .enumerate()
            .any(|(i, &e)| i != var && e > 0)
        {
            return Err(Error::RingMismatch(format!(
                "expected a polynomial in `{}` only",
                p.ring.vars.names[var]
            )));
        }
        coeffs[m.exponents()[var] as usize] = c.clone();
    }
    trim(&mut coeffs);
    Ok(coeffs)
}

fn trim(c: &mut Vec<FieldElem>) {
    while c.last().is_some_and(FieldElem::is_zero) {
        c.pop();
    }
}

fn rem_dense(mut a: Vec<FieldElem>, b: &[FieldElem]) -> Vec<FieldElem> {
    let lead_inv = b
        .last()
        .expect("nonzero divisor")
        .invert()
        .expect("nonzero");
    while a.len() >= b.len() {
        let shift = a.len() - b.len();
        let q = a.last().unwrap() * &lead_inv;
        for (i, bc) in b.iter().enumerate() {
            a[shift + i] = &a[shift + i] - &(&q * bc);
        }
        a.pop();
        trim(&mut a);
    }
    a
}

/// Monic gcd of two univariate polynomials in variable `var` (Euclid over `K`).
pub fn univariate_gcd(p: &Poly, q: &Poly, var: usize) -> Result<Poly> {
    same_ring(&p.ring, &q.ring)?;
    let mut a = dense_univariate(p, var)?;
    let mut b = dense_univariate(q, var)?;
    while !b.is_empty() {
        let r = rem_dense(a, &b);
        a = b;
        b = r;
    }
    let ring = &p.ring;
    let g = Poly::from_terms(
        ring,
        a.into_iter().enumerate().map(|(k, c)| {
            let mut e = vec![0; ring.nvars()];
            e[var] = k as u32;
            (Monomial::new(e), c)
        }),
    );
    Ok(g.monic())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&parse::render(self))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
