//! Subspaces of a single graded piece `U_d`, stored in reduced echelon form.

use super::dense::{dmul, is_zero_vec, monomial_values};
use super::linalg::{kernel_echelon, rref, Echelon};
use super::monomials::basis;
use super::{evaluation_row, GradedPoly, ProjAut, ProjError, ProjPoint};
use crate::scalars::field::Field;
use std::fmt;

#[derive(Clone)]
pub struct Subspace<F: Field> {
    t: usize,
    degree: usize,
    ctx: F::Ctx,
    ech: Echelon<F>,
}

impl<F: Field> PartialEq for Subspace<F> {
    fn eq(&self, o: &Self) -> bool {
        self.t == o.t && self.degree == o.degree && self.ech == o.ech
    }
}

impl<F: Field> Eq for Subspace<F> {}

impl<F: Field> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(t={}, d={}, dim={})", self.t, self.degree, self.dim())
    }
}

impl<F: Field> Subspace<F> {
    pub fn ambient_dim(t: usize, d: usize) -> usize {
        basis(t, d).len()
    }

    pub fn from_spanning(ctx: &F::Ctx, t: usize, d: usize, vecs: Vec<Vec<F>>) -> Self {
        let n = Self::ambient_dim(t, d);
        let vecs: Vec<Vec<F>> = vecs.into_iter().filter(|v| !is_zero_vec(v)).collect();
        debug_assert!(vecs.iter().all(|v| v.len() == n));
        Subspace { t, degree: d, ctx: ctx.clone(), ech: rref(ctx, vecs, n) }
    }

    /// Span of `vecs` when it is known to sit inside `ambient`.
    ///
    /// If every vector lies in `ambient` and a cheap rank bound already
    /// reaches `dim ambient`, the span is `ambient` itself and no elimination
    /// is needed; otherwise falls back to [`Self::from_spanning`].
    pub fn from_spanning_within(ctx: &F::Ctx, vecs: Vec<Vec<F>>, ambient: &Self) -> Self {
        let (t, d) = (ambient.t, ambient.degree);
        let n = Self::ambient_dim(t, d);
        if vecs.len() >= ambient.dim()
            && F::rank_lower_bound(ctx, &vecs, n).map(|b| b.rank) == Some(ambient.dim())
            && vecs.iter().all(|v| ambient.contains(v))
        {
            return ambient.clone();
        }
        Self::from_spanning(ctx, t, d, vecs)
    }

    pub fn from_polys(ctx: &F::Ctx, t: usize, d: usize, polys: &[GradedPoly<F>]) -> Result<Self, ProjError> {
        let mut vecs = Vec::with_capacity(polys.len());
        for p in polys {
            if p.degree() != d {
                return Err(ProjError::DegreeMismatch(p.degree(), d));
            }
            vecs.push(p.to_dense());
        }
        Ok(Self::from_spanning(ctx, t, d, vecs))
    }

    /// `{v : c·v = 0 for every constraint row c}`.
    pub fn from_constraints(ctx: &F::Ctx, t: usize, d: usize, rows: Vec<Vec<F>>) -> Self {
        let n = Self::ambient_dim(t, d);
        Subspace { t, degree: d, ctx: ctx.clone(), ech: kernel_echelon(ctx, rows, n) }
    }

    pub fn full(ctx: &F::Ctx, t: usize, d: usize) -> Self {
        let n = Self::ambient_dim(t, d);
        let rows = (0..n).map(|i| (0..n).map(|j| if i == j { F::one(ctx) } else { F::zero(ctx) }).collect()).collect();
        Subspace { t, degree: d, ctx: ctx.clone(), ech: Echelon::from_parts(n, rows, (0..n).collect()) }
    }

    pub fn zero(ctx: &F::Ctx, t: usize, d: usize) -> Self {
        Subspace { t, degree: d, ctx: ctx.clone(), ech: Echelon::empty(Self::ambient_dim(t, d)) }
    }

    /// Degree-`d` forms vanishing at each of the given points.
    pub fn vanishing_at(ctx: &F::Ctx, t: usize, d: usize, points: &[&ProjPoint<F>]) -> Self {
        let rows = points.iter().map(|p| evaluation_row(t, d, p)).collect();
        Self::from_constraints(ctx, t, d, rows)
    }

    /// Degree-`d` forms vanishing to order two at `p`: the form and all its
    /// first partials vanish there. First-order Taylor conditions need no
    /// divided powers, so this is valid in every characteristic.
    pub fn double_vanishing(ctx: &F::Ctx, t: usize, d: usize, p: &ProjPoint<F>) -> Self {
        if d == 0 {
            return Self::zero(ctx, t, 0);
        }
        let mut rows = vec![evaluation_row(t, d, p)];
        let lower = monomial_values(ctx, t, d - 1, p.coords());
        let bl = basis(t, d - 1);
        let bd = basis(t, d);
        for j in 0..=t {
            rows.push(
                bd.exps
                    .iter()
                    .map(|e| {
                        if e[j] == 0 {
                            return F::zero(ctx);
                        }
                        let mut f = e.clone();
                        f[j] -= 1;
                        F::from_i64(ctx, e[j] as i64).mul(&lower[bl.index_of(&f).unwrap()])
                    })
                    .collect(),
            );
        }
        Self::from_constraints(ctx, t, d, rows)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn codim(&self) -> usize {
        self.ech.ncols - self.ech.rank()
    }

    pub fn echelon(&self) -> &Echelon<F> {
        &self.ech
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.ech.rows
    }

    pub fn basis_polys(&self) -> Vec<GradedPoly<F>> {
        self.ech.rows.iter().map(|r| GradedPoly::from_dense(&self.ctx, self.t, self.degree, r)).collect()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.ech.contains(v)
    }

    pub fn contains_poly(&self, f: &GradedPoly<F>) -> bool {
        f.degree() == self.degree && self.contains(&f.to_dense())
    }

    pub fn is_subspace_of(&self, o: &Self) -> bool {
        self.degree == o.degree && self.ech.rows.iter().all(|r| o.contains(r))
    }

    /// Residue of `v` modulo the subspace; zero exactly on members.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        self.ech.reduce(v)
    }

    /// Coordinates of the class of `v` in `U_d / self`, indexed by free columns.
    pub fn quotient_coords(&self, v: &[F]) -> Vec<F> {
        let r = self.reduce(v);
        self.ech.free_columns().into_iter().map(|c| r[c].clone()).collect()
    }

    fn check(&self, o: &Self) -> Result<(), ProjError> {
        if self.degree != o.degree || self.t != o.t {
            return Err(ProjError::DegreeMismatch(self.degree, o.degree));
        }
        Ok(())
    }

    pub fn sum(&self, o: &Self) -> Result<Self, ProjError> {
        self.check(o)?;
        let mut v = self.ech.rows.clone();
        v.extend(o.ech.rows.iter().cloned());
        Ok(Self::from_spanning(&self.ctx, self.t, self.degree, v))
    }

    /// Linear functionals vanishing on the subspace.
    pub fn annihilator(&self) -> Vec<Vec<F>> {
        self.ech.nullspace(&self.ctx)
    }

    pub fn intersect(&self, o: &Self) -> Result<Self, ProjError> {
        self.check(o)?;
        if self.is_subspace_of(o) {
            return Ok(self.clone());
        }
        if o.is_subspace_of(self) {
            return Ok(o.clone());
        }
        let mut rows = self.annihilator();
        rows.extend(o.annihilator());
        Ok(Self::from_constraints(&self.ctx, self.t, self.degree, rows))
    }

    /// Span of all products `a·b`, living in degree `deg a + deg b`.
    pub fn product(&self, o: &Self) -> Self {
        let d = self.degree + o.degree;
        let mut v = Vec::with_capacity(self.dim() * o.dim());
        for a in &self.ech.rows {
            for b in &o.ech.rows {
                v.push(dmul(&self.ctx, self.t, self.degree, a, o.degree, b));
            }
        }
        Self::from_spanning(&self.ctx, self.t, d, v)
    }

    /// `{g·f : g ∈ self}`.
    pub fn times_poly(&self, f: &GradedPoly<F>) -> Self {
        let fv = f.to_dense();
        let v = self.ech.rows.iter().map(|a| dmul(&self.ctx, self.t, self.degree, a, f.degree(), &fv)).collect();
        Self::from_spanning(&self.ctx, self.t, self.degree + f.degree(), v)
    }

    /// Image under `ϕ^k`.
    pub fn apply_aut(&self, phi: &ProjAut<F>, k: i64) -> Self {
        let v = self.ech.rows.iter().map(|r| phi.apply_dense(k, self.degree, r)).collect();
        Self::from_spanning(&self.ctx, self.t, self.degree, v)
    }

    /// `dim self / sub`, or an error when `sub ⊄ self`.
    pub fn quotient_dim(&self, sub: &Self) -> Result<usize, ProjError> {
        self.check(sub)?;
        if !sub.is_subspace_of(self) {
            return Err(ProjError::Shape("not a subspace".into()));
        }
        Ok(self.dim() - sub.dim())
    }
}
