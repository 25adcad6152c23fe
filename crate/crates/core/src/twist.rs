//! The twisted ring `S = S(φ)`: the graded vector space of `U` with product
//! `f ⋆ g = ϕ^{deg g}(f) · g`, its left ideals, and point modules.

use crate::projgeo::dense::dmul;
use crate::projgeo::linalg::kernel;
use crate::projgeo::monomials::basis;
use crate::projgeo::{orbit_point, GradedPoly, ProjAut, ProjError, ProjPoint, Subspace};
use crate::report::{Check, Method, Report};
use crate::scalars::field::Field;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("twisted rings need t >= 2, got t = {0}")]
    TooSmall(usize),
    #[error(transparent)]
    Proj(#[from] ProjError),
}

#[derive(Clone, Debug)]
pub struct TwistRing<F: Field> {
    phi: ProjAut<F>,
}

impl<F: Field> TwistRing<F> {
    pub fn new(phi: ProjAut<F>) -> Result<Self, TwistError> {
        if phi.t() < 2 {
            return Err(TwistError::TooSmall(phi.t()));
        }
        Ok(TwistRing { phi })
    }

    pub fn t(&self) -> usize {
        self.phi.t()
    }

    pub fn ctx(&self) -> &F::Ctx {
        self.phi.ctx()
    }

    pub fn phi(&self) -> &ProjAut<F> {
        &self.phi
    }

    /// `f ⋆ g = ϕ^{deg g}(f) · g`.
    pub fn twist_mul(&self, f: &GradedPoly<F>, g: &GradedPoly<F>) -> GradedPoly<F> {
        let v = self.twist_mul_dense(f.degree(), &f.to_dense(), g.degree(), &g.to_dense());
        GradedPoly::from_dense(self.ctx(), self.t(), f.degree() + g.degree(), &v)
    }

    pub fn twist_mul_dense(&self, df: usize, f: &[F], dg: usize, g: &[F]) -> Vec<F> {
        let tf = self.phi.apply_dense(dg as i64, df, f);
        dmul(self.ctx(), self.t(), df, &tf, dg, g)
    }

    /// `(Σ S ⋆ g_j)_d`, spanned by brute-force products `m ⋆ g_j` over the
    /// monomials `m` of degree `d − deg g_j`.
    pub fn left_ideal_piece(&self, gens: &[GradedPoly<F>], d: usize) -> Subspace<F> {
        let mut vecs = Vec::new();
        for g in gens.iter().filter(|g| g.degree() <= d) {
            let e = d - g.degree();
            let gv = g.to_dense();
            let n = basis(self.t(), e).len();
            for i in 0..n {
                let mut m = vec![F::zero(self.ctx()); n];
                m[i] = F::one(self.ctx());
                vecs.push(self.twist_mul_dense(e, &m, g.degree(), &gv));
            }
        }
        Subspace::from_spanning(self.ctx(), self.t(), d, vecs)
    }

    /// Common zero of a `t`-dimensional space of linear forms.
    fn point_of_forms(&self, forms: Vec<Vec<F>>) -> Option<ProjPoint<F>> {
        let k = kernel(self.ctx(), forms, self.t() + 1);
        if k.len() != 1 {
            return None;
        }
        ProjPoint::new(k.into_iter().next().unwrap()).ok()
    }

    /// Point sequence of `P(d) = S / S⋆(𝔪_d)_1`, computed as the common zero
    /// of the linear forms `x` with `x ⋆ e_n = 0` in degree `n + 1`.
    pub fn point_sequence(&self, d: &ProjPoint<F>, len: usize) -> Vec<Option<ProjPoint<F>>> {
        let t = self.t();
        let ideal_gens = Subspace::vanishing_at(self.ctx(), t, 1, &[d]).basis_polys();
        let mut out = Vec::with_capacity(len);
        let mut prev = self.left_ideal_piece(&ideal_gens, 0);
        for n in 0..len {
            let next = self.left_ideal_piece(&ideal_gens, n + 1);
            // a class spanning the one-dimensional (S/I)_n
            let free = prev.echelon().free_columns();
            let Some(&col) = free.first() else {
                out.push(None);
                prev = next;
                continue;
            };
            let mut e = vec![F::zero(self.ctx()); basis(t, n).len()];
            e[col] = F::one(self.ctx());
            // x ↦ class of x ⋆ e in (S/I)_{n+1}, as a matrix with one row per coordinate
            let images: Vec<Vec<F>> = (0..=t)
                .map(|i| {
                    let mut x = vec![F::zero(self.ctx()); t + 1];
                    x[i] = F::one(self.ctx());
                    next.quotient_coords(&self.twist_mul_dense(1, &x, n, &e))
                })
                .collect();
            let q = images[0].len();
            let forms = kernel(self.ctx(), transpose(self.ctx(), &images, q), t + 1);
            out.push(self.point_of_forms(forms));
            prev = next;
        }
        out
    }

    /// Compares the computed point sequence with `φ^n(d)` and checks that
    /// the truncation `P(d)_{≥n}` has the sequence of `P(φ^n(d))`.
    pub fn point_sequence_report(&self, d: &ProjPoint<F>, len: usize, truncations: usize) -> Report {
        let mut rep = Report::new("point_sequence", Method::Direct);
        let seq = self.point_sequence(d, len + truncations);
        for (n, p) in seq.iter().take(len).enumerate() {
            let want = orbit_point(&self.phi, d, -(n as i64));
            let ok = p.as_ref() == Some(&want);
            rep.check(Check::with(format!("entry {n} equals phi^{n}(d)"), ok, format!("computed {}, expected {want}", show(p))));
        }
        for n in 1..=truncations {
            let dn = orbit_point(&self.phi, d, -(n as i64));
            let shifted = self.point_sequence(&dn, len);
            let ok = shifted.iter().zip(&seq[n..]).all(|(a, b)| a.is_some() && a == b);
            rep.check(Check::new(format!("P(d)>={n} has the sequence of P(phi^{n}(d))"), ok));
        }
        rep
    }
}

fn show<F: Field>(p: &Option<ProjPoint<F>>) -> String {
    p.as_ref().map_or("none".into(), |p| p.to_string())
}

pub(crate) fn transpose<F: Field>(ctx: &F::Ctx, m: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    (0..ncols).map(|j| m.iter().map(|r| r.get(j).cloned().unwrap_or_else(|| F::zero(ctx))).collect()).collect()
}
