//! Dense reduced row echelon forms over any [`Field`].

use crate::scalars::field::Field;
use rayon::prelude::*;

/// Canonical reduced row echelon form: pivot entries are one and pivot
/// columns are zero outside their pivot row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Echelon<F: Field> {
    pub ncols: usize,
    pub rows: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Echelon<F> {
    pub fn empty(ncols: usize) -> Self {
        Echelon { ncols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn from_parts(ncols: usize, rows: Vec<Vec<F>>, pivots: Vec<usize>) -> Self {
        debug_assert_eq!(rows.len(), pivots.len());
        Echelon { ncols, rows, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Columns without a pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ncols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ncols).filter(|&c| !is_pivot[c]).collect()
    }

    /// Residue of `v` after clearing every pivot coordinate.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let a = out[p].clone();
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    out[j] = out[j].sub(&a.mul(x));
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Basis of `{x : rows · x = 0}`, one vector per free column, each with a
    /// one in its free column.
    pub fn nullspace(&self, ctx: &F::Ctx) -> Vec<Vec<F>> {
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut v = vec![F::zero(ctx); self.ncols];
                v[f] = F::one(ctx);
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if !row[f].is_zero() {
                        v[p] = row[f].neg();
                    }
                }
                v
            })
            .collect()
    }
}

const PAR_ROWS: usize = 64;

/// Plain Gauss-Jordan elimination with pivot normalization.
pub fn gauss_jordan<F: Field>(ctx: &F::Ctx, mut m: Vec<Vec<F>>, ncols: usize) -> Echelon<F> {
    let nrows = m.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(i) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, i);
        let inv = m[r][c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for x in m[r].iter_mut() {
                if !x.is_zero() {
                    *x = x.mul(&inv);
                }
            }
        }
        let (head, rest) = m.split_at_mut(r);
        let (prow, tail) = rest.split_first_mut().unwrap();
        let prow: &Vec<F> = prow;
        let step = |row: &mut Vec<F>| {
            if row[c].is_zero() {
                return;
            }
            let a = row[c].clone();
            for j in c..ncols {
                if !prow[j].is_zero() {
                    row[j] = row[j].sub(&a.mul(&prow[j]));
                }
            }
        };
        if nrows > PAR_ROWS {
            head.par_iter_mut().for_each(step);
            tail.par_iter_mut().for_each(step);
        } else {
            head.iter_mut().for_each(step);
            tail.iter_mut().for_each(step);
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    let _ = ctx;
    Echelon::from_parts(ncols, m, pivots)
}

pub fn rref<F: Field>(ctx: &F::Ctx, rows: Vec<Vec<F>>, ncols: usize) -> Echelon<F> {
    F::rref(ctx, rows, ncols)
}

pub fn rank<F: Field>(ctx: &F::Ctx, rows: Vec<Vec<F>>, ncols: usize) -> usize {
    rref(ctx, rows, ncols).rank()
}

/// Basis of the right kernel of the matrix with the given rows.
pub fn kernel<F: Field>(ctx: &F::Ctx, rows: Vec<Vec<F>>, ncols: usize) -> Vec<Vec<F>> {
    rref(ctx, rows, ncols).nullspace(ctx)
}

/// Reduced echelon form of the right kernel, read off without a second
/// elimination.
///
/// Eliminating with the column order reversed puts each pivot at the last
/// nonzero entry of its row, so the kernel vector attached to a free column
/// `f` is zero before `f`, one at `f`, and zero at every other free column.
pub fn kernel_echelon<F: Field>(ctx: &F::Ctx, rows: Vec<Vec<F>>, ncols: usize) -> Echelon<F> {
    let rev: Vec<Vec<F>> = rows.into_iter().map(|mut r| {
        r.reverse();
        r
    }).collect();
    let e = rref(ctx, rev, ncols);
    let pivots: Vec<usize> = e.pivots.iter().map(|&p| ncols - 1 - p).collect();
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..ncols).filter(|&c| !is_pivot[c]).collect();
    let out: Vec<Vec<F>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![F::zero(ctx); ncols];
            v[f] = F::one(ctx);
            for (row, &p) in e.rows.iter().zip(&pivots) {
                let x = &row[ncols - 1 - f];
                if !x.is_zero() {
                    v[p] = x.neg();
                }
            }
            v
        })
        .collect();
    Echelon::from_parts(ncols, out, free)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::{Fq, Q61};
    use crate::scalars::{FieldSpec, Scalar};

    fn fq(v: i64) -> Fq {
        Fq::new(v, Q61)
    }

    #[test]
    fn rank_and_kernel_small() {
        let rows = vec![vec![fq(1), fq(2), fq(3)], vec![fq(2), fq(4), fq(6)], vec![fq(0), fq(1), fq(1)]];
        let e = rref(&Q61, rows.clone(), 3);
        assert_eq!(e.rank(), 2);
        let k = e.nullspace(&Q61);
        assert_eq!(k.len(), 1);
        for r in &rows {
            let dot = r.iter().zip(&k[0]).fold(fq(0), |acc, (a, b)| acc.add(&a.mul(b)));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn bareiss_agrees_with_plain_elimination() {
        let s = FieldSpec::new(0, &["a", "b"]).unwrap();
        let p = |t: &str| Scalar::parse(&s, t).unwrap();
        let rows = vec![
            vec![p("a"), p("1"), p("b"), p("a*b")],
            vec![p("a^2"), p("a"), p("a*b"), p("a^2*b")],
            vec![p("1/a"), p("b"), p("1"), p("a+b")],
        ];
        let fast = rref(&s, rows.clone(), 4);
        let slow = gauss_jordan(&s, rows, 4);
        assert_eq!(fast, slow);
        assert_eq!(fast.rank(), 2);
    }

    #[test]
    fn kernel_echelon_is_canonical() {
        let s = FieldSpec::new(0, &["a"]).unwrap();
        let p = |t: &str| Scalar::parse(&s, t).unwrap();
        let rows = vec![vec![p("1"), p("a"), p("0"), p("2"), p("a^2")], vec![p("0"), p("1"), p("1"), p("a"), p("3")]];
        let k = kernel_echelon(&s, rows.clone(), 5);
        let again = rref(&s, k.rows.clone(), 5);
        assert_eq!(k, again);
        for v in &k.rows {
            for r in &rows {
                let dot = r.iter().zip(v).fold(p("0"), |acc, (x, y)| acc.add(&x.mul(y)));
                assert!(dot.is_zero());
            }
        }
    }
}
