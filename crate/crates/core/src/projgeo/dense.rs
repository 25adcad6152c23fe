//! Dense coefficient vectors in the monomial bases of [`super::monomials`].

use super::monomials::{basis, mul_table};
use crate::scalars::field::Field;

/// Product of a degree-`a` vector and a degree-`b` vector.
pub fn dmul<F: Field>(ctx: &F::Ctx, t: usize, a: usize, x: &[F], b: usize, y: &[F]) -> Vec<F> {
    let tab = mul_table(t, a, b);
    let n = basis(t, a + b).len();
    let lb = y.len();
    let mut out = vec![F::zero(ctx); n];
    for (i, u) in x.iter().enumerate() {
        if u.is_zero() {
            continue;
        }
        for (j, v) in y.iter().enumerate() {
            if !v.is_zero() {
                let k = tab[i * lb + j] as usize;
                out[k] = out[k].add(&u.mul(v));
            }
        }
    }
    out
}

/// Values of all degree-`d` monomials at `coords`.
pub fn monomial_values<F: Field>(ctx: &F::Ctx, t: usize, d: usize, coords: &[F]) -> Vec<F> {
    if d == 0 {
        return vec![F::one(ctx)];
    }
    let lower = monomial_values(ctx, t, d - 1, coords);
    let bd = basis(t, d);
    let bl = basis(t, d - 1);
    bd.exps
        .iter()
        .map(|e| {
            let j = e.iter().position(|&x| x > 0).unwrap();
            let mut f = e.clone();
            f[j] -= 1;
            lower[bl.index_of(&f).unwrap()].mul(&coords[j])
        })
        .collect()
}

pub fn dot<F: Field>(ctx: &F::Ctx, x: &[F], y: &[F]) -> F {
    x.iter().zip(y).fold(F::zero(ctx), |acc, (a, b)| if a.is_zero() || b.is_zero() { acc } else { acc.add(&a.mul(b)) })
}

pub fn is_zero_vec<F: Field>(v: &[F]) -> bool {
    v.iter().all(|x| x.is_zero())
}

pub fn scale_vec<F: Field>(v: &[F], c: &F) -> Vec<F> {
    v.iter().map(|x| x.mul(c)).collect()
}

pub fn add_vec<F: Field>(x: &[F], y: &[F]) -> Vec<F> {
    x.iter().zip(y).map(|(a, b)| a.add(b)).collect()
}

pub fn sub_vec<F: Field>(x: &[F], y: &[F]) -> Vec<F> {
    x.iter().zip(y).map(|(a, b)| a.sub(b)).collect()
}
