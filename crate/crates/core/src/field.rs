//! Exact arithmetic in `Q` and in the quadratic extension `K = Q(L)` with
//! `L^2 = -l1*l2*l3`.
//!
//! When `-l1*l2*l3` is a rational square the extension collapses to `Q`; in that
//! case `L` is folded into the rational part and every element has `b = 0`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Parses `"3"`, `"-1/2"` style literals.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let text = text.trim();
    let bad = || Error::Config(format!("not a rational number: `{text}`"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(Rational::new(num, den))
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Square root of a rational in lowest terms `p/q`: square iff `p*q` is a
/// perfect square, since `gcd(p, q) = 1`.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    let p = x.numer();
    let q = x.denom();
    let pq = p * q;
    let root = int_sqrt(&pq)?;
    // sqrt(p/q) = sqrt(pq)/q
    Some(Rational::new(root, q.clone()))
}

/// The parameter triple and the derived discriminant of `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    lambdas: [Rational; 3],
    disc: Rational,
    sqrt_disc: Option<Rational>,
}

impl FieldSpec {
    pub fn lambdas(&self) -> &[Rational; 3] {
        &self.lambdas
    }

    /// `-l1*l2*l3`, the square of `L`.
    pub fn disc(&self) -> &Rational {
        &self.disc
    }

    pub fn is_square(&self) -> bool {
        self.sqrt_disc.is_some()
    }

    pub fn sqrt_disc(&self) -> Option<&Rational> {
        self.sqrt_disc.as_ref()
    }
}

/// Shared handle to a [`FieldSpec`]; cheap to clone.
#[derive(Debug, Clone)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl std::ops::Deref for Field {
    type Target = FieldSpec;
    fn deref(&self) -> &FieldSpec {
        &self.0
    }
}

/// Builds the field for the parameters `(l1, l2, l3)`.
///
/// Rejects zero or repeated parameters: `f = (x-l1)(x-l2)(x-l3)` must be
/// squarefree for the curve `y^2 = f(x)` to be smooth.
pub fn make_field(l1: Rational, l2: Rational, l3: Rational) -> Result<Field> {
    let lambdas = [l1, l2, l3];
    if let Some(i) = lambdas.iter().position(Zero::is_zero) {
        return Err(Error::DegenerateParameters(format!(
            "lambda{} is zero",
            i + 1
        )));
    }
    for i in 0..3 {
        for j in i + 1..3 {
            if lambdas[i] == lambdas[j] {
                return Err(Error::DegenerateParameters(format!(
                    "lambda{} = lambda{} = {}",
                    i + 1,
                    j + 1,
                    lambdas[i]
                )));
            }
        }
    }
    Ok(make_field_unchecked(lambdas))
}

/// Like [`make_field`] but only rejects zeros; repeated parameters are
/// accepted. Used by fault injection to build deliberately singular curves.
pub fn make_field_allow_repeated(l1: Rational, l2: Rational, l3: Rational) -> Result<Field> {
    let lambdas = [l1, l2, l3];
    if let Some(i) = lambdas.iter().position(Zero::is_zero) {
        return Err(Error::DegenerateParameters(format!(
            "lambda{} is zero",
            i + 1
        )));
    }
    Ok(make_field_unchecked(lambdas))
}

fn make_field_unchecked(lambdas: [Rational; 3]) -> Field {
    let disc = -(&lambdas[0] * &lambdas[1] * &lambdas[2]);
    let sqrt_disc = rational_sqrt(&disc);
    Field(Arc::new(FieldSpec {
        lambdas,
        disc,
        sqrt_disc,
    }))
}

/// Binary field operations, for the checked entry point [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn field_arith(x: &FieldElem, y: &FieldElem, op: FieldOp) -> Result<FieldElem> {
    match op {
        FieldOp::Add => x.checked_add(y),
        FieldOp::Sub => x.checked_sub(y),
        FieldOp::Mul => x.checked_mul(y),
        FieldOp::Div => x.checked_div(y),
    }
}

/// An element `a + b*L` of `K`.
#[derive(Clone)]
pub struct FieldElem {
    a: Rational,
    b: Rational,
    field: Field,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b && self.field == other.field
    }
}

impl Eq for FieldElem {}

impl Field {
    pub fn elem(&self, a: Rational, b: Rational) -> FieldElem {
        match &self.sqrt_disc {
            Some(root) if !b.is_zero() => FieldElem {
                a: a + b * root,
                b: Rational::zero(),
                field: self.clone(),
            },
            _ => FieldElem {
                a,
                b,
                field: self.clone(),
            },
        }
    }

    pub fn from_rational(&self, a: Rational) -> FieldElem {
        FieldElem {
            a,
            b: Rational::zero(),
            field: self.clone(),
        }
    }

    pub fn from_int(&self, n: i64) -> FieldElem {
        self.from_rational(rat(n))
    }

    pub fn zero(&self) -> FieldElem {
        self.from_rational(Rational::zero())
    }

    pub fn one(&self) -> FieldElem {
        self.from_rational(Rational::one())
    }

    /// The distinguished square root `L` of the discriminant.
    pub fn lambda(&self) -> FieldElem {
        self.elem(Rational::zero(), Rational::one())
    }

    /// The parameter `l_i` (1-based) as a field element.
    pub fn param(&self, i: usize) -> FieldElem {
        self.from_rational(self.lambdas[i - 1].clone())
    }
}

impl FieldElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Rational part.
    pub fn re(&self) -> &Rational {
        &self.a
    }

    /// Coefficient of `L`.
    pub fn im(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// `a^2 - b^2 * disc`, multiplicative.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - &self.b * &self.b * self.field.disc()
    }

    fn same_field(&self, other: &FieldElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::MixedFieldSpecs)
        }
    }

    pub fn checked_add(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(FieldElem {
            a: &self.a + &other.a,
            b: &self.b + &other.b,
            field: self.field.clone(),
        })
    }

    pub fn checked_sub(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        Ok(FieldElem {
            a: &self.a - &other.a,
            b: &self.b - &other.b,
            field: self.field.clone(),
        })
    }

    pub fn checked_mul(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        let (a, b) = if self.b.is_zero() && other.b.is_zero() {
            (&self.a * &other.a, Rational::zero())
        } else {
            // (a + bL)(c + dL) = (ac + bd*disc) + (ad + bc)L
            (
                &self.a * &other.a + &self.b * &other.b * self.field.disc(),
                &self.a * &other.b + &self.b * &other.a,
            )
        };
        Ok(FieldElem {
            a,
            b,
            field: self.field.clone(),
        })
    }

    pub fn invert(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.b.is_zero() {
            return Ok(FieldElem {
                a: self.a.recip(),
                b: Rational::zero(),
                field: self.field.clone(),
            });
        }
        // (a + bL)^-1 = (a - bL) / (a^2 - b^2 disc); the norm is nonzero
        // because L is irrational whenever b survives construction.
        let n = self.norm();
        Ok(FieldElem {
            a: &self.a / &n,
            b: -&self.b / &n,
            field: self.field.clone(),
        })
    }

    pub fn checked_div(&self, other: &FieldElem) -> Result<FieldElem> {
        self.same_field(other)?;
        self.checked_mul(&other.invert()?)
    }

    pub fn pow(&self, mut e: u32) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiply by a rational scalar.
    pub fn scale(&self, r: &Rational) -> FieldElem {
        FieldElem {
            a: &self.a * r,
            b: &self.b * r,
            field: self.field.clone(),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            /// Panics if the operands belong to different fields.
            fn $method(self, rhs: &FieldElem) -> FieldElem {
                self.$checked(rhs).expect("field arithmetic")
            }
        }
        impl $trait<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, rhs: FieldElem) -> FieldElem {
                (&self).$checked(&rhs).expect("field arithmetic")
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem {
            a: -&self.a,
            b: -&self.b,
            field: self.field.clone(),
        }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl FieldElem {
    /// Text form in the polynomial grammar. `atomic` wraps sums in parentheses.
    pub(crate) fn render(&self, atomic: bool) -> String {
        if self.b.is_zero() {
            return fmt_rational(&self.a);
        }
        let lam = if self.b.is_one() {
            "L".to_string()
        } else if (-&self.b).is_one() {
            "-L".to_string()
        } else {
            format!("{}*L", fmt_rational(&self.b))
        };
        if self.a.is_zero() {
            return lam;
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let mag = if self.b.abs().is_one() {
            "L".to_string()
        } else {
            format!("{}*L", fmt_rational(&self.b.abs()))
        };
        let body = format!("{} {} {}", fmt_rational(&self.a), sign, mag);
        if atomic {
            format!("({body})")
        } else {
            body
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn default_field() -> Field {
        make_field(rat(1), rat(2), rat(3)).unwrap()
    }

    #[test]
    fn make_field_examples() {
        let k = default_field();
        assert_eq!(*k.disc(), rat(-6));
        assert!(!k.is_square());

        assert!(matches!(
            make_field(rat(-1), rat(2), rat(2)),
            Err(Error::DegenerateParameters(_))
        ));
        assert!(matches!(
            make_field(rat(0), rat(2), rat(3)),
            Err(Error::DegenerateParameters(_))
        ));

        let q = make_field(rat(-1), rat(2), ratio(1, 2)).unwrap();
        assert_eq!(*q.disc(), rat(1));
        assert!(q.is_square());
        assert_eq!(q.sqrt_disc(), Some(&rat(1)));
    }

    #[test]
    fn square_detection_with_denominators() {
        // -(1)(-4)(1/9) = 4/9
        let k = make_field(rat(1), rat(-4), ratio(1, 9)).unwrap();
        assert_eq!(k.sqrt_disc(), Some(&ratio(2, 3)));
        // -(1)(-2)(1/9) = 2/9, not a square
        let k = make_field(rat(1), rat(-2), ratio(1, 9)).unwrap();
        assert!(!k.is_square());
    }

    #[test]
    fn arithmetic_examples() {
        let k = default_field();
        let l = k.lambda();
        assert_eq!(&l * &l, k.from_int(-6));
        let one_plus = &k.one() + &l;
        let one_minus = &k.one() - &l;
        assert_eq!(&one_plus + &one_minus, k.from_int(2));
        let two = k.from_int(2);
        assert_eq!((&two + &l) * (&two - &l), k.from_int(10));
    }

    #[test]
    fn inversion_examples() {
        let k = default_field();
        assert_eq!(k.lambda().invert().unwrap(), k.elem(rat(0), ratio(-1, 6)));
        assert!(k.zero().is_zero());
        assert_eq!(
            k.from_int(2).invert().unwrap(),
            k.from_rational(ratio(1, 2))
        );
        assert_eq!(k.zero().invert(), Err(Error::DivisionByZero));
        assert_eq!(
            field_arith(&k.one(), &k.zero(), FieldOp::Div),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn mixed_specs_rejected() {
        let k = default_field();
        let k2 = make_field(rat(2), rat(3), rat(5)).unwrap();
        assert_eq!(
            field_arith(&k.one(), &k2.one(), FieldOp::Add),
            Err(Error::MixedFieldSpecs)
        );
        // structurally equal specs are the same field
        let k3 = default_field();
        assert!(field_arith(&k.one(), &k3.one(), FieldOp::Mul).is_ok());
    }

    #[test]
    fn lambda_folds_when_square() {
        let q = make_field(rat(-1), rat(2), ratio(1, 2)).unwrap();
        let l = q.lambda();
        assert!(l.is_rational());
        assert_eq!(l, q.one());
    }

    #[test]
    fn render_forms() {
        let k = default_field();
        assert_eq!(k.elem(rat(1), rat(-2)).render(true), "(1 - 2*L)");
        assert_eq!(k.lambda().render(true), "L");
        assert_eq!(k.from_rational(ratio(-3, 4)).to_string(), "-3/4");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_rat() -> impl Strategy<Value = Rational> {
            (-20i64..20, 1i64..7).prop_map(|(n, d)| ratio(n, d))
        }

        fn elem(k: Field) -> impl Strategy<Value = FieldElem> {
            (small_rat(), small_rat()).prop_map(move |(a, b)| k.elem(a, b))
        }

        proptest! {
            #[test]
            fn field_axioms(
                x in elem(default_field()),
                y in elem(default_field()),
                z in elem(default_field()),
            ) {
                prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
                prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
                prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
                prop_assert_eq!(&x * &y, &y * &x);
                if !x.is_zero() {
                    prop_assert!((&x * &x.invert().unwrap()).is_one());
                }
            }

            #[test]
            fn norm_is_multiplicative(x in elem(default_field()), y in elem(default_field())) {
                prop_assert_eq!((&x * &y).norm(), x.norm() * y.norm());
            }

            #[test]
            fn make_field_rejects_exactly_degenerate(a in -4i64..5, b in -4i64..5, c in -4i64..5) {
                let res = make_field(rat(a), rat(b), rat(c));
                let degenerate = a == 0 || b == 0 || c == 0 || a == b || b == c || a == c;
                prop_assert_eq!(res.is_err(), degenerate);
            }
        }
    }
}
