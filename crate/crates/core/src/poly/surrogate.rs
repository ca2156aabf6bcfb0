//! Rational surrogate of a polynomial with algebraic coefficients.
//!
//! With leaves `theta_1..theta_k` of degrees `d_i`, the coefficients live in
//! the algebra `A = Q[x_1..x_k] / (p_1(x_1), ..., p_k(x_k))` of dimension
//! `K = prod d_i`. The determinant of multiplication by `p(z)` on `A` is the
//! product of `p^sigma(z)` over all `K` tuples of conjugates, a rational
//! polynomial whose roots include every root of `p`. It is computed by exact
//! determinants at `deg(p) * K + 1` integer points and interpolation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::algebraic::leaf::leaf;
use crate::algebraic::{AlgebraicNumber, MPoly};
use crate::exact::{common_denominator, Rational};
use crate::poly::{AlgPoly, QPoly};
use crate::{Error, Result};

/// Largest algebra dimension handled.
const MAX_DIM: u64 = 4096;

/// Rational polynomial vanishing at every root of `p` (and at the roots of its conjugates).
pub fn norm_surrogate(p: &AlgPoly) -> Result<QPoly> {
    if let Some(q) = p.as_qpoly() {
        return Ok(q.clone());
    }
    let coeffs = p.coeffs();
    let nums = clear_denominators(&coeffs);
    let mut dims: BTreeMap<u32, usize> = BTreeMap::new();
    for n in &nums {
        for id in n.leaves() {
            dims.insert(id, leaf(id).degree());
        }
    }
    let k: u64 = dims.values().map(|&d| d as u64).product();
    if k > MAX_DIM {
        return Err(Error::limit("surrogate", format!("algebra of dimension {k}")));
    }
    let basis = basis(&dims);
    let index: BTreeMap<Vec<(u32, u32)>, usize> =
        basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
    let deg = p.deg() * k as usize;
    let mut xs = Vec::with_capacity(deg + 1);
    let mut ys = Vec::with_capacity(deg + 1);
    for j in 0..=deg {
        let z = Rational::from(j as i64 - (deg as i64) / 2);
        let mut e = MPoly::zero();
        let mut zp = Rational::one();
        for n in &nums {
            e = e.add(&n.scale(&zp));
            zp = &zp * &z;
        }
        ys.push(det(&mult_matrix(&e, &basis, &index)));
        xs.push(z);
    }
    Ok(interpolate(&xs, &ys).primitive())
}

/// Coefficient numerators over a common denominator.
fn clear_denominators(coeffs: &[AlgebraicNumber]) -> Vec<MPoly> {
    let mut dens: Vec<MPoly> = vec![];
    for c in coeffs {
        if c.den().as_rational().is_none() && !dens.contains(c.den()) {
            dens.push(c.den().clone());
        }
    }
    coeffs
        .iter()
        .map(|c| {
            let mut n = c.num().clone();
            for d in &dens {
                if d != c.den() {
                    n = n.mul(d);
                }
            }
            n
        })
        .collect()
}

/// Monomials `prod x_i^e_i`, `e_i < d_i`.
fn basis(dims: &BTreeMap<u32, usize>) -> Vec<Vec<(u32, u32)>> {
    let mut out: Vec<Vec<(u32, u32)>> = vec![vec![]];
    for (&id, &d) in dims {
        let mut next = vec![];
        for m in &out {
            for e in 0..d as u32 {
                let mut m2 = m.clone();
                if e > 0 {
                    m2.push((id, e));
                }
                next.push(m2);
            }
        }
        out = next;
    }
    out
}

fn mono_poly(m: &[(u32, u32)]) -> MPoly {
    m.iter().fold(MPoly::constant(Rational::one()), |acc, &(id, e)| acc.mul(&MPoly::leaf(id).pow(e)))
}

fn mult_matrix(e: &MPoly, basis: &[Vec<(u32, u32)>], index: &BTreeMap<Vec<(u32, u32)>, usize>) -> Vec<Vec<Rational>> {
    let k = basis.len();
    let mut m = vec![vec![Rational::zero(); k]; k];
    for (col, b) in basis.iter().enumerate() {
        let prod = e.mul(&mono_poly(b));
        for (mono, c) in prod.terms() {
            let row = index[&mono.to_vec()];
            m[row][col] = c.clone();
        }
    }
    m
}

/// Exact determinant by fraction-free elimination.
fn det(m: &[Vec<Rational>]) -> Rational {
    let k = m.len();
    let den = common_denominator(m.iter().flatten());
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|v| v.numer() * (&den / v.denom())).collect())
        .collect();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !a[r][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        for r in c + 1..k {
            for j in c + 1..k {
                let v = &a[r][j] * &a[c][c] - &a[r][c] * &a[c][j];
                a[r][j] = v / &prev;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[c][c].clone();
    }
    let d = Rational::from_integer(prev * sign);
    d / Rational::from_integer(num_traits::pow(den, k))
}

/// Newton interpolation through `(xs, ys)`.
fn interpolate(xs: &[Rational], ys: &[Rational]) -> QPoly {
    let n = xs.len();
    let mut coef = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
        }
    }
    let mut p = QPoly::constant(coef[n - 1].clone());
    for i in (0..n - 1).rev() {
        p = p.mul(&QPoly::new(vec![-&xs[i], Rational::one()])).add(&QPoly::constant(coef[i].clone()));
    }
    p
}
