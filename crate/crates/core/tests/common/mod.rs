//! Ideal membership cross-checked against a bounded-cofactor linear system.
//!
//! For `p` and generators `g_i` the oracle searches for `q_i` with
//! `deg q_i <= D - deg g_i` and `sum q_i g_i = p` by exact Gaussian
//! elimination. A solution proves membership; no solution at bound `D` proves
//! nothing beyond that bound, so the oracle is rerun with a larger bound
//! before a disagreement is reported.

use std::collections::HashMap;

use a1tower::field::{make_field, rat, Field, Rational};
use a1tower::groebner::{ideal_member, Ideal};
use a1tower::poly::{Monomial, MonomialOrder, Poly, PolyRing, Ring};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn monomials_up_to(nvars: usize, deg: u32) -> Vec<Monomial> {
    fn go(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() == n {
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur.push(e);
            go(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(nvars, deg, &mut Vec::new(), &mut out);
    out
}

fn rational_coeffs(p: &Poly) -> HashMap<Monomial, Rational> {
    p.terms()
        .iter()
        .map(|(m, c)| {
            assert!(c.is_rational());
            (m.clone(), c.re().clone())
        })
        .collect()
}

/// Whether `p` is a combination of `gens` with cofactor degrees bounded by `bound`.
pub fn oracle_member(p: &Poly, gens: &[Poly], bound: u32) -> bool {
    let n = p.ring().nvars();
    // columns: one unknown per (generator, cofactor monomial)
    let mut columns: Vec<HashMap<Monomial, Rational>> = Vec::new();
    for g in gens {
        let dg = g.total_degree().unwrap();
        if dg > bound {
            continue;
        }
        for m in monomials_up_to(n, bound - dg) {
            let one = p.ring().field().one();
            columns.push(rational_coeffs(&g.mul_term(&m, &one)));
        }
    }
    let rhs = rational_coeffs(p);
    let mut rows: Vec<Monomial> = columns.iter().flat_map(|c| c.keys().cloned()).collect();
    rows.extend(rhs.keys().cloned());
    rows.sort();
    rows.dedup();
    let ncols = columns.len();
    let mut matrix: Vec<Vec<Rational>> = rows
        .iter()
        .map(|m| {
            let mut row: Vec<Rational> = columns
                .iter()
                .map(|c| c.get(m).cloned().unwrap_or_else(Rational::zero))
                .collect();
            row.push(rhs.get(m).cloned().unwrap_or_else(Rational::zero));
            row
        })
        .collect();
    // row echelon form, then look for an inconsistent row 0 = c
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(r) = (pivot_row..matrix.len()).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(pivot_row, r);
        let inv = Rational::from_integer(1.into()) / matrix[pivot_row][col].clone();
        let pivot: Vec<Rational> = matrix[pivot_row].iter().map(|v| v * &inv).collect();
        for (i, row) in matrix.iter_mut().enumerate() {
            if i != pivot_row && !row[col].is_zero() {
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(&pivot).skip(col) {
                    *v -= &f * pv;
                }
            }
        }
        matrix[pivot_row] = pivot;
        pivot_row += 1;
    }
    matrix[pivot_row..].iter().all(|row| row[ncols].is_zero())
}

fn random_poly(rng: &mut ChaCha8Rng, ring: &Ring, max_deg: u32, max_terms: usize) -> Poly {
    let mons = monomials_up_to(ring.nvars(), max_deg);
    let k = ring.field();
    let nterms = rng.gen_range(1..=max_terms);
    let terms = (0..nterms).map(|_| {
        let m = mons[rng.gen_range(0..mons.len())].clone();
        let mut c = rng.gen_range(-3i64..=3);
        if c == 0 {
            c = 1;
        }
        (m, k.from_int(c))
    });
    Poly::from_terms(ring, terms)
}

pub fn field() -> Field {
    make_field(rat(1), rat(2), rat(3)).unwrap()
}

/// Outcome of [`run_oracle_comparison`].
#[derive(Debug, Default)]
pub struct OracleTally {
    pub ideals: usize,
    pub agree: usize,
    pub yes: usize,
    pub no: usize,
    pub disagreements: Vec<String>,
}

/// Random ideals in at most three variables, generators of degree at most
/// three; one constructed member and one perturbed candidate per ideal.
pub fn run_oracle_comparison(count: usize, seed: u64) -> OracleTally {
    let k = field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = ["x", "y", "z"];
    let orders = [
        MonomialOrder::Grevlex,
        MonomialOrder::Lex,
        MonomialOrder::Block { split: 1 },
    ];
    let mut tally = OracleTally::default();
    while tally.ideals < count {
        let nvars = rng.gen_range(1..=3);
        let order = orders[rng.gen_range(0..orders.len())].clone();
        let ring = PolyRing::from_names(names[..nvars].iter().copied(), &k, order).unwrap();
        let ngens = rng.gen_range(1..=3);
        let gens: Vec<Poly> = (0..ngens)
            .map(|_| {
                let d = rng.gen_range(1..=3);
                random_poly(&mut rng, &ring, d, 3)
            })
            .filter(|g| !g.is_zero())
            .collect();
        if gens.is_empty() {
            continue;
        }
        tally.ideals += 1;
        let ideal = Ideal::new(&ring, gens.clone()).unwrap();

        let mut member = Poly::zero(&ring);
        for g in &gens {
            member = &member + &(&random_poly(&mut rng, &ring, 1, 2) * g);
        }
        let member_ok = ideal_member(&member, &ideal).unwrap();

        // a perturbed candidate, whose status is decided independently
        let candidate = &member + &random_poly(&mut rng, &ring, 1, 1);
        let gb_says = ideal_member(&candidate, &ideal).unwrap();
        let dp = candidate.total_degree().unwrap_or(0);
        let dg = gens.iter().filter_map(Poly::total_degree).max().unwrap();
        // no solution at a finite bound is not a proof, so retry higher before calling it a mismatch
        let oracle = oracle_member(&candidate, &gens, dp + dg + 2)
            || (gb_says && oracle_member(&candidate, &gens, dp + dg + 5));
        if member_ok && gb_says == oracle {
            tally.agree += 1;
        } else {
            tally.disagreements.push(format!("{ideal}: member {member} -> {member_ok}, candidate {candidate} gb {gb_says} oracle {oracle}"));
        }
        if gb_says {
            tally.yes += 1;
        } else {
            tally.no += 1;
        }
    }
    tally
}
