//! Resultants of multivariate polynomials with respect to one variable.
//!
//! The base implementation expands the Sylvester matrix (actual degrees in
//! the eliminated variable) by fraction-free Bareiss elimination over the
//! polynomial coefficient ring. When both operands have degree >= 3 in the
//! variable, a subresultant PRS computes the same value much faster; the two
//! paths are cross-checked in the test suite.

use num_bigint::BigInt;
use num_traits::One;

use super::poly::MultiPoly;
use crate::error::Error;
use crate::Result;

/// Fraction-free pseudo-remainder of f by g with respect to variable `v`:
/// lc_v(g)^(deg_v f - deg_v g + 1) · f = q·g + r with deg_v r < deg_v g.
pub fn pseudo_rem(f: &MultiPoly, g: &MultiPoly, v: usize) -> Result<MultiPoly> {
    let dg = g.degree_in(v);
    if dg == 0 {
        return Err(Error::ConstantInVariable(
            g.vars().names().get(v).cloned().unwrap_or_default(),
        ));
    }
    let df = f.degree_in(v);
    if f.is_zero() {
        return Ok(f.clone());
    }
    let mut n: i64 = df as i64 - dg as i64 + 1;
    let gcoeffs = g.coeffs_in(v);
    let glc = &gcoeffs[dg as usize];
    let vars = f.vars().clone();
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(v) >= dg {
        let d = r.degree_in(v);
        let rcoeffs = r.coeffs_in(v);
        let rlc = &rcoeffs[d as usize];
        // r = glc·r - rlc·v^(d-dg)·g
        let shift = monomial_power(&vars, v, d - dg)?;
        let sub = g.mul(&rlc.mul(&shift)?)?;
        r = r.mul(glc)?.sub(&sub)?;
        n -= 1;
    }
    while n > 0 {
        r = r.mul(glc)?;
        n -= 1;
    }
    Ok(r)
}

fn monomial_power(vars: &std::sync::Arc<super::poly::VarSet>, v: usize, e: u32) -> Result<MultiPoly> {
    let mut exps = vec![0u32; vars.len()];
    exps[v] = e;
    MultiPoly::from_terms(vars, [(exps, BigInt::one())])
}

/// Resultant of f and g with respect to variable `v`, using actual degrees.
pub fn resultant(f: &MultiPoly, g: &MultiPoly, v: usize) -> Result<MultiPoly> {
    let name = || f.vars().names().get(v).cloned().unwrap_or_default();
    let (df, dg) = (f.degree_in(v), g.degree_in(v));
    if df == 0 || dg == 0 {
        return Err(Error::ConstantInVariable(name()));
    }
    if df >= 3 && dg >= 3 {
        resultant_prs(f, g, v)
    } else {
        resultant_sylvester(f, g, v)
    }
}

/// Sylvester determinant via fraction-free Bareiss elimination.
pub fn resultant_sylvester(f: &MultiPoly, g: &MultiPoly, v: usize) -> Result<MultiPoly> {
    let vars = f.vars().clone();
    let (m, n) = (f.degree_in(v) as usize, g.degree_in(v) as usize);
    let fc = f.coeffs_in(v);
    let gc = g.coeffs_in(v);
    let size = m + n;
    let zero = MultiPoly::zero(&vars);
    let mut mat: Vec<Vec<MultiPoly>> = vec![vec![zero.clone(); size]; size];
    // n rows of f coefficients (highest first), then m rows of g
    for i in 0..n {
        for (j, c) in fc.iter().rev().enumerate() {
            mat[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in gc.iter().rev().enumerate() {
            mat[n + i][i + j] = c.clone();
        }
    }
    bareiss_det(mat, &vars)
}

fn bareiss_det(
    mut mat: Vec<Vec<MultiPoly>>,
    vars: &std::sync::Arc<super::poly::VarSet>,
) -> Result<MultiPoly> {
    let n = mat.len();
    let mut sign_flip = false;
    let mut prev = MultiPoly::constant(vars, 1);
    for k in 0..n {
        if mat[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !mat[r][k].is_zero());
            match swap {
                Some(r) => {
                    mat.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return Ok(MultiPoly::zero(vars)),
            }
        }
        if k == n - 1 {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = mat[k][k].mul(&mat[i][j])?;
                let b = mat[i][k].mul(&mat[k][j])?;
                mat[i][j] = a.sub(&b)?.exact_div(&prev)?;
            }
            mat[i][k] = MultiPoly::zero(vars);
        }
        prev = mat[k][k].clone();
    }
    let det = mat[n - 1][n - 1].clone();
    Ok(if sign_flip { det.neg() } else { det })
}

/// Resultant via the subresultant polynomial remainder sequence
/// (Cohen, *A Course in Computational Algebraic Number Theory*, Alg. 3.3.7,
/// without the content optimization).
pub fn resultant_prs(f: &MultiPoly, g: &MultiPoly, v: usize) -> Result<MultiPoly> {
    let vars = f.vars().clone();
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut negate = false;
    if a.degree_in(v) < b.degree_in(v) {
        if a.degree_in(v) % 2 == 1 && b.degree_in(v) % 2 == 1 {
            negate = !negate;
        }
        std::mem::swap(&mut a, &mut b);
    }
    let lc_in = |p: &MultiPoly| -> MultiPoly {
        let d = p.degree_in(v) as usize;
        p.coeffs_in(v).swap_remove(d)
    };
    let mut g_prev = MultiPoly::constant(&vars, 1);
    let mut h = MultiPoly::constant(&vars, 1);
    loop {
        let (da, db) = (a.degree_in(v), b.degree_in(v));
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            negate = !negate;
        }
        let r = pseudo_rem(&a, &b, v)?;
        a = b;
        let divisor = g_prev.mul(&h.pow(delta)?)?;
        b = if r.is_zero() { r } else { r.exact_div(&divisor)? };
        g_prev = lc_in(&a);
        h = match delta {
            0 => h,
            1 => g_prev.clone(),
            _ => g_prev.pow(delta)?.exact_div(&h.pow(delta - 1)?)?,
        };
        if b.is_zero() {
            // positive-degree gcd: resultant vanishes
            return Ok(MultiPoly::zero(&vars));
        }
        if b.degree_in(v) == 0 {
            break;
        }
    }
    let da = a.degree_in(v);
    let lcb = lc_in(&b);
    let res = if da == 1 {
        lcb
    } else {
        lcb.pow(da)?.exact_div(&h.pow(da - 1)?)?
    };
    Ok(if negate { res.neg() } else { res })
}
