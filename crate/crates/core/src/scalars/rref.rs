//! Fraction-free Gauss-Jordan elimination over the parameter polynomial ring.
//!
//! Rows are cleared of denominators, eliminated with exact divisions by the
//! previous pivot, and only the final pivot rows are turned back into
//! reduced fractions.

use super::coeff::Coeff;
use super::poly::Poly;
use super::{FieldSpec, RatFn, Repr, Scalar};
use crate::projgeo::linalg::Echelon;
use rayon::prelude::*;
use std::sync::Arc;

fn lcm<C: Coeff>(a: &Poly<C>, b: &Poly<C>) -> Poly<C> {
    if b.is_one() || a == b {
        return a.clone();
    }
    if a.is_one() {
        return b.clone();
    }
    let g = a.gcd(b);
    a.mul(&b.div_exact(&g).unwrap())
}

fn clear_row<C: Coeff>(row: &[RatFn<C>], one: &C) -> Vec<Poly<C>> {
    let mut l = Poly::constant(one.clone());
    for x in row {
        if !x.num.is_zero() {
            l = lcm(&l, &x.den);
        }
    }
    row.iter()
        .map(|x| {
            if x.num.is_zero() {
                Poly::zero()
            } else if x.den == l {
                x.num.clone()
            } else {
                x.num.mul(&l.div_exact(&x.den).unwrap())
            }
        })
        .collect()
}

const PAR_THRESHOLD: usize = 24;

fn ff_gauss_jordan<C: Coeff>(mut m: Vec<Vec<Poly<C>>>, ncols: usize, one: &C) -> (Vec<Vec<RatFn<C>>>, Vec<usize>) {
    let nrows = m.len();
    let mut prev = Poly::constant(one.clone());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let best = (r..nrows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].nterms());
        let Some(i) = best else { continue };
        m.swap(r, i);
        let (head, rest) = m.split_at_mut(r);
        let (prow, tail) = rest.split_first_mut().unwrap();
        let prow: &Vec<Poly<C>> = prow;
        let p = prow[c].clone();
        let step = |row: &mut Vec<Poly<C>>| {
            let a = row[c].clone();
            for j in 0..ncols {
                if j == c {
                    continue;
                }
                let x = &row[j];
                let y = &prow[j];
                if x.is_zero() && (a.is_zero() || y.is_zero()) {
                    continue;
                }
                let mut v = x.mul(&p);
                if !a.is_zero() && !y.is_zero() {
                    v = v.sub(&a.mul(y));
                }
                row[j] = v.div_exact(&prev).expect("fraction-free step must divide exactly");
            }
            row[c] = Poly::zero();
        };
        if nrows * ncols > PAR_THRESHOLD * PAR_THRESHOLD {
            head.par_iter_mut().for_each(step);
            tail.par_iter_mut().for_each(step);
        } else {
            head.iter_mut().for_each(step);
            tail.iter_mut().for_each(step);
        }
        prev = p;
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    // every pivot entry now equals the last pivot
    let rows: Vec<Vec<RatFn<C>>> = m
        .into_par_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    if x.is_zero() {
                        RatFn { num: x, den: Poly::constant(one.clone()) }
                    } else {
                        RatFn::reduce(x, prev.clone())
                    }
                })
                .collect()
        })
        .collect();
    (rows, pivots)
}

pub(crate) fn bareiss_rref(spec: &Arc<FieldSpec>, rows: Vec<Vec<Scalar>>, ncols: usize) -> Echelon<Scalar> {
    if rows.is_empty() {
        return Echelon::empty(ncols);
    }
    let wrap = |reprs: Vec<Vec<Repr>>| -> Vec<Vec<Scalar>> {
        reprs.into_iter().map(|r| r.into_iter().map(|x| Scalar::from_repr(spec, x)).collect()).collect()
    };
    if spec.characteristic == 0 {
        let one = num_traits::One::one();
        let polys: Vec<Vec<Poly<_>>> = rows
            .iter()
            .map(|r| {
                let q: Vec<RatFn<_>> = r
                    .iter()
                    .map(|s| match &s.repr {
                        Repr::Q(x) => x.clone(),
                        Repr::P(_) => panic!("field mismatch"),
                    })
                    .collect();
                clear_row(&q, &one)
            })
            .collect();
        let (out, pivots) = ff_gauss_jordan(polys, ncols, &one);
        let rows = wrap(out.into_iter().map(|r| r.into_iter().map(Repr::Q).collect()).collect());
        Echelon::from_parts(ncols, rows, pivots)
    } else {
        let one = super::coeff::ModP::new(1, spec.characteristic);
        let polys: Vec<Vec<Poly<_>>> = rows
            .iter()
            .map(|r| {
                let q: Vec<RatFn<_>> = r
                    .iter()
                    .map(|s| match &s.repr {
                        Repr::P(x) => x.clone(),
                        Repr::Q(_) => panic!("field mismatch"),
                    })
                    .collect();
                clear_row(&q, &one)
            })
            .collect();
        let (out, pivots) = ff_gauss_jordan(polys, ncols, &one);
        let rows = wrap(out.into_iter().map(|r| r.into_iter().map(Repr::P).collect()).collect());
        Echelon::from_parts(ncols, rows, pivots)
    }
}
