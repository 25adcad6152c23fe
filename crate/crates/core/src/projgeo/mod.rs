//! Graded polynomial ring `U = k[x_0..x_t]`, points and automorphisms of
//! `ℙ^t`, and degreewise subspace algebra.
//!
//! Matrices act on column vectors of homogeneous coordinates. The algebra
//! automorphism attached to a matrix `M` is precomposition, `f ↦ f(M·x)`, so
//! `f(d) = 0` exactly when `ϕ(f)` vanishes at `M⁻¹·d`.

pub mod dense;
pub mod linalg;
pub mod monomials;
pub mod special;
pub mod subspace;
pub mod text;

use crate::scalars::field::Field;
use dense::{dmul, monomial_values};
use monomials::{basis, Exp};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};
pub use subspace::Subspace;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("duplicate point {0}")]
    DuplicatePoint(String),
    #[error("the zero vector is not a point")]
    ZeroPoint,
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Homogeneous polynomial of fixed degree in `x_0..x_t`.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedPoly<F: Field> {
    t: usize,
    degree: usize,
    ctx: F::Ctx,
    terms: BTreeMap<Exp, F>,
}

impl<F: Field> GradedPoly<F> {
    pub fn zero(ctx: &F::Ctx, t: usize, degree: usize) -> Self {
        GradedPoly { t, degree, ctx: ctx.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ctx: &F::Ctx, t: usize) -> Self {
        Self::monomial(ctx, &vec![0; t + 1], F::one(ctx))
    }

    pub fn var(ctx: &F::Ctx, t: usize, i: usize) -> Self {
        let mut e = vec![0; t + 1];
        e[i] = 1;
        Self::monomial(ctx, &e, F::one(ctx))
    }

    pub fn monomial(ctx: &F::Ctx, exp: &[u32], c: F) -> Self {
        let t = exp.len() - 1;
        let degree = exp.iter().sum::<u32>() as usize;
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp.to_vec(), c);
        }
        GradedPoly { t, degree, ctx: ctx.clone(), terms }
    }

    /// From a coefficient vector in the degree-`d` monomial basis.
    pub fn from_dense(ctx: &F::Ctx, t: usize, d: usize, v: &[F]) -> Self {
        let b = basis(t, d);
        assert_eq!(v.len(), b.len());
        let terms = b.exps.iter().zip(v).filter(|(_, c)| !c.is_zero()).map(|(e, c)| (e.clone(), c.clone())).collect();
        GradedPoly { t, degree: d, ctx: ctx.clone(), terms }
    }

    pub fn to_dense(&self) -> Vec<F> {
        let b = basis(self.t, self.degree);
        let mut v = vec![F::zero(&self.ctx); b.len()];
        for (e, c) in &self.terms {
            v[b.index_of(e).unwrap()] = c.clone();
        }
        v
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

    pub fn terms(&self) -> &BTreeMap<Exp, F> {
        &self.terms
    }

    pub fn coeff(&self, exp: &[u32]) -> F {
        self.terms.get(exp).cloned().unwrap_or_else(|| F::zero(&self.ctx))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Result<Self, ProjError> {
        if self.degree != o.degree {
            return Err(ProjError::DegreeMismatch(self.degree, o.degree));
        }
        let mut terms = self.terms.clone();
        for (e, c) in &o.terms {
            let s = match terms.get(e) {
                Some(x) => x.add(c),
                None => c.clone(),
            };
            if s.is_zero() {
                terms.remove(e);
            } else {
                terms.insert(e.clone(), s);
            }
        }
        Ok(GradedPoly { t: self.t, degree: self.degree, ctx: self.ctx.clone(), terms })
    }

    pub fn sub(&self, o: &Self) -> Result<Self, ProjError> {
        self.add(&o.scale(&F::from_i64(&self.ctx, -1)))
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(&self.ctx, self.t, self.degree);
        }
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x.mul(c))).collect();
        GradedPoly { t: self.t, degree: self.degree, ctx: self.ctx.clone(), terms }
    }

    /// Commutative product in `U`.
    pub fn mul(&self, o: &Self) -> Self {
        let v = dmul(&self.ctx, self.t, self.degree, &self.to_dense(), o.degree, &o.to_dense());
        Self::from_dense(&self.ctx, self.t, self.degree + o.degree, &v)
    }

    pub fn eval(&self, p: &ProjPoint<F>) -> F {
        assert_eq!(p.coords.len(), self.t + 1);
        let mut acc = F::zero(&self.ctx);
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (x, &k) in p.coords.iter().zip(e) {
                for _ in 0..k {
                    term = term.mul(x);
                }
            }
            acc = acc.add(&term);
        }
        acc
    }

    /// `f(p) = 0`, tested without normalizing partial sums.
    pub fn vanishes_at(&self, p: &ProjPoint<F>) -> bool {
        assert_eq!(p.coords.len(), self.t + 1);
        let terms: Vec<F> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut term = c.clone();
                for (x, &k) in p.coords.iter().zip(e) {
                    for _ in 0..k {
                        term = term.mul(x);
                    }
                }
                term
            })
            .collect();
        F::sum_is_zero(&terms)
    }

    /// Applies `f ↦ g(f)` coefficientwise into another field.
    pub fn map_coeffs<G: Field>(&self, ctx: &G::Ctx, f: impl Fn(&F) -> Option<G>) -> Option<GradedPoly<G>> {
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let v = f(c)?;
            if !v.is_zero() {
                terms.insert(e.clone(), v);
            }
        }
        Some(GradedPoly { t: self.t, degree: self.degree, ctx: ctx.clone(), terms })
    }
}

impl<F: Field> fmt::Display for GradedPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::render_poly(self))
    }
}

impl<F: Field> fmt::Debug for GradedPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[deg {}] {}", self.degree, self)
    }
}

/// Point of `ℙ^t`, scaled so the first nonzero coordinate is one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint<F: Field> {
    coords: Vec<F>,
}

impl<F: Field> ProjPoint<F> {
    pub fn new(coords: Vec<F>) -> Result<Self, ProjError> {
        let Some(lead) = coords.iter().find(|x| !x.is_zero()) else {
            return Err(ProjError::ZeroPoint);
        };
        let inv = lead.inv().unwrap();
        let coords = coords.iter().map(|x| x.mul(&inv)).collect();
        Ok(ProjPoint { coords })
    }

    pub fn coords(&self) -> &[F] {
        &self.coords
    }

    pub fn t(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn ctx(&self) -> F::Ctx {
        self.coords[0].ctx()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> Option<G>) -> Option<ProjPoint<G>> {
        let c: Option<Vec<G>> = self.coords.iter().map(f).collect();
        ProjPoint::new(c?).ok()
    }
}

impl<F: Field> fmt::Display for ProjPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.render()).collect();
        write!(f, "({})", parts.join(":"))
    }
}

impl<F: Field> fmt::Debug for ProjPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

type Mat<F> = Vec<Vec<F>>;

type MatCache<K, F> = Mutex<HashMap<K, Arc<Mat<F>>>>;

struct AutMemo<F: Field> {
    powers: MatCache<i64, F>,
    images: MatCache<(i64, usize), F>,
}

/// Automorphism of `ℙ^t` as a normalized invertible matrix with its inverse.
///
/// Powers of the matrix and the induced action on each `U_d` are memoized
/// behind a mutex shared by clones.
#[derive(Clone)]
pub struct ProjAut<F: Field> {
    t: usize,
    ctx: F::Ctx,
    matrix: Mat<F>,
    inverse: Mat<F>,
    memo: Arc<AutMemo<F>>,
}

impl<F: Field> PartialEq for ProjAut<F> {
    fn eq(&self, o: &Self) -> bool {
        self.matrix == o.matrix
    }
}

impl<F: Field> fmt::Debug for ProjAut<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.matrix.iter().map(|r| format!("[{}]", r.iter().map(|x| x.render()).collect::<Vec<_>>().join(", "))).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

pub fn mat_mul<F: Field>(ctx: &F::Ctx, a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![F::zero(ctx); m]; n];
    for i in 0..n {
        for k in 0..b.len() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].add(&a[i][k].mul(&b[k][j]));
                }
            }
        }
    }
    out
}

fn mat_inverse<F: Field>(ctx: &F::Ctx, m: &Mat<F>) -> Option<Mat<F>> {
    let n = m.len();
    let rows: Vec<Vec<F>> = (0..n)
        .map(|i| {
            let mut r = m[i].clone();
            r.extend((0..n).map(|j| if i == j { F::one(ctx) } else { F::zero(ctx) }));
            r
        })
        .collect();
    let e = linalg::rref(ctx, rows, 2 * n);
    if e.rank() < n || e.pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(e.rows.iter().map(|r| r[n..].to_vec()).collect())
}

impl<F: Field> ProjAut<F> {
    pub fn new(ctx: &F::Ctx, matrix: Mat<F>) -> Result<Self, ProjError> {
        let n = matrix.len();
        if n < 2 || matrix.iter().any(|r| r.len() != n) {
            return Err(ProjError::Shape("automorphism matrix must be square of size t+1 >= 2".into()));
        }
        let inverse = mat_inverse(ctx, &matrix).ok_or(ProjError::NotInvertible)?;
        let lead = matrix.iter().flatten().find(|x| !x.is_zero()).unwrap().clone();
        let li = lead.inv().unwrap();
        let matrix: Mat<F> = matrix.iter().map(|r| r.iter().map(|x| x.mul(&li)).collect()).collect();
        let inverse: Mat<F> = inverse.iter().map(|r| r.iter().map(|x| x.mul(&lead)).collect()).collect();
        Ok(ProjAut {
            t: n - 1,
            ctx: ctx.clone(),
            matrix,
            inverse,
            memo: Arc::new(AutMemo { powers: Mutex::new(HashMap::new()), images: Mutex::new(HashMap::new()) }),
        })
    }

    pub fn identity(ctx: &F::Ctx, t: usize) -> Self {
        let m = (0..=t).map(|i| (0..=t).map(|j| if i == j { F::one(ctx) } else { F::zero(ctx) }).collect()).collect();
        Self::new(ctx, m).unwrap()
    }

    pub fn diagonal(ctx: &F::Ctx, entries: &[F]) -> Result<Self, ProjError> {
        let n = entries.len();
        let m = (0..n).map(|i| (0..n).map(|j| if i == j { entries[i].clone() } else { F::zero(ctx) }).collect()).collect();
        Self::new(ctx, m)
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn ctx(&self) -> &F::Ctx {
        &self.ctx
    }

    pub fn matrix(&self) -> &Mat<F> {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &Mat<F> {
        &self.inverse
    }

    /// The automorphism `φ⁻¹`.
    pub fn inverse(&self) -> Self {
        Self::new(&self.ctx, self.inverse.clone()).unwrap()
    }

    /// `M^k` for any integer `k`, memoized.
    pub fn power(&self, k: i64) -> Arc<Mat<F>> {
        if let Some(m) = self.memo.powers.lock().unwrap().get(&k) {
            return m.clone();
        }
        let m = if k == 0 {
            let n = self.t + 1;
            (0..n).map(|i| (0..n).map(|j| if i == j { F::one(&self.ctx) } else { F::zero(&self.ctx) }).collect()).collect()
        } else if k > 0 {
            mat_mul(&self.ctx, &self.matrix, &self.power(k - 1))
        } else {
            mat_mul(&self.ctx, &self.inverse, &self.power(k + 1))
        };
        let m = Arc::new(m);
        self.memo.powers.lock().unwrap().entry(k).or_insert(m).clone()
    }

    /// `M^k · v` on raw coordinates.
    pub fn act(&self, k: i64, v: &[F]) -> Vec<F> {
        let m = self.power(k);
        m.iter()
            .map(|row| row.iter().zip(v).fold(F::zero(&self.ctx), |acc, (a, b)| acc.add(&a.mul(b))))
            .collect()
    }

    /// Images `ϕ^k(m)` of the degree-`d` basis monomials, as dense vectors.
    pub fn monomial_images(&self, k: i64, d: usize) -> Arc<Mat<F>> {
        if let Some(m) = self.memo.images.lock().unwrap().get(&(k, d)) {
            return m.clone();
        }
        let imgs: Mat<F> = if d == 0 {
            vec![vec![F::one(&self.ctx)]]
        } else if d == 1 {
            // ϕ^k(x_j) = Σ_l (M^k)_{jl} x_l, and x_l has index l in degree 1
            self.power(k).as_ref().clone()
        } else {
            let lower = self.monomial_images(k, d - 1);
            let lin = self.monomial_images(k, 1);
            let bd = basis(self.t, d);
            let bl = basis(self.t, d - 1);
            bd.exps
                .iter()
                .map(|e| {
                    let j = e.iter().position(|&x| x > 0).unwrap();
                    let mut f = e.clone();
                    f[j] -= 1;
                    let i = bl.index_of(&f).unwrap();
                    dmul(&self.ctx, self.t, d - 1, &lower[i], 1, &lin[j])
                })
                .collect()
        };
        let imgs = Arc::new(imgs);
        self.memo.images.lock().unwrap().entry((k, d)).or_insert(imgs).clone()
    }

    /// `ϕ^k` applied to a dense degree-`d` vector.
    pub fn apply_dense(&self, k: i64, d: usize, v: &[F]) -> Vec<F> {
        if k == 0 {
            return v.to_vec();
        }
        let imgs = self.monomial_images(k, d);
        let n = v.len();
        let mut out = vec![F::zero(&self.ctx); n];
        for (c, img) in v.iter().zip(imgs.iter()) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(img) {
                if !x.is_zero() {
                    *o = o.add(&c.mul(x));
                }
            }
        }
        out
    }
}

/// `ϕ^power(f)`, the substitution `x ↦ M^power · x`.
pub fn apply_aut<F: Field>(phi: &ProjAut<F>, f: &GradedPoly<F>, power: i64) -> GradedPoly<F> {
    let v = phi.apply_dense(power, f.degree(), &f.to_dense());
    GradedPoly::from_dense(phi.ctx(), f.t(), f.degree(), &v)
}

/// `c_i = φ^{-i}(c)`.
pub fn orbit_point<F: Field>(phi: &ProjAut<F>, c: &ProjPoint<F>, i: i64) -> ProjPoint<F> {
    ProjPoint::new(phi.act(-i, c.coords())).expect("automorphisms preserve nonzero vectors")
}

/// `(⋂ 𝔪_{d_i}^{e_i})_d`; powers are built as span products of the linear
/// piece, which works in every characteristic.
pub fn vanishing_subspace<F: Field>(
    ctx: &F::Ctx,
    t: usize,
    points: &[(ProjPoint<F>, usize)],
    d: usize,
) -> Result<Subspace<F>, ProjError> {
    for (i, (p, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(q, _)| q == p) {
            return Err(ProjError::DuplicatePoint(p.to_string()));
        }
        if p.t() != t {
            return Err(ProjError::Shape(format!("point {p} is not in P^{t}")));
        }
    }
    let simple: Vec<&ProjPoint<F>> = points.iter().filter(|(_, e)| *e <= 1).map(|(p, _)| p).collect();
    let mut acc = Subspace::vanishing_at(ctx, t, d, &simple);
    for (p, e) in points.iter().filter(|(_, e)| *e > 1) {
        acc = acc.intersect(&fat_point_piece(ctx, t, p, *e, d))?;
    }
    Ok(acc)
}

/// `(𝔪_p^e)_d` as the span of `e`-fold products of `(𝔪_p)_1` times `U_{d-e}`.
pub fn fat_point_piece<F: Field>(ctx: &F::Ctx, t: usize, p: &ProjPoint<F>, e: usize, d: usize) -> Subspace<F> {
    if e == 0 {
        return Subspace::full(ctx, t, d);
    }
    if d < e {
        return Subspace::zero(ctx, t, d);
    }
    let lin = Subspace::vanishing_at(ctx, t, 1, &[p]);
    let mut pw = lin.clone();
    for _ in 1..e {
        pw = pw.product(&lin);
    }
    pw.product(&Subspace::full(ctx, t, d - e))
}

/// Evaluation row of the degree-`d` monomials at `p`.
pub fn evaluation_row<F: Field>(t: usize, d: usize, p: &ProjPoint<F>) -> Vec<F> {
    monomial_values(&p.ctx(), t, d, p.coords())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{FieldSpec, Scalar};

    fn s(spec: &Arc<crate::scalars::FieldSpec>, t: &str) -> Scalar {
        Scalar::parse(spec, t).unwrap()
    }

    #[test]
    fn diagonal_action_on_linear_form() {
        let spec = FieldSpec::new(0, &["p", "q"]).unwrap();
        let phi = ProjAut::diagonal(&spec, &[s(&spec, "1"), s(&spec, "p"), s(&spec, "q")]).unwrap();
        let x1 = GradedPoly::var(&spec, 2, 1);
        assert_eq!(apply_aut(&phi, &x1, 1), x1.scale(&s(&spec, "p")));
        assert_eq!(apply_aut(&phi, &x1, -2), x1.scale(&s(&spec, "p^-2")));
    }

    #[test]
    fn normalization_scales_first_entry() {
        let spec = FieldSpec::rationals();
        let m = vec![vec![s(&spec, "2"), s(&spec, "4")], vec![s(&spec, "0"), s(&spec, "6")]];
        let phi = ProjAut::new(&spec, m).unwrap();
        assert!(phi.matrix()[0][0].is_one());
        assert_eq!(phi.matrix()[1][1], s(&spec, "3"));
        let id = mat_mul(&spec, phi.matrix(), phi.inverse_matrix());
        assert!(id[0][0].is_one() && id[1][1].is_one() && id[0][1].is_zero());
    }

    #[test]
    fn singular_matrix_rejected() {
        let spec = FieldSpec::rationals();
        let m = vec![vec![s(&spec, "1"), s(&spec, "2")], vec![s(&spec, "2"), s(&spec, "4")]];
        assert!(matches!(ProjAut::new(&spec, m), Err(ProjError::NotInvertible)));
    }

    #[test]
    fn diagonal_orbit_closed_form() {
        let spec = FieldSpec::new(0, &["p1", "p2"]).unwrap();
        let phi = ProjAut::diagonal(&spec, &[s(&spec, "1"), s(&spec, "p1"), s(&spec, "p2")]).unwrap();
        let c = ProjPoint::new(vec![s(&spec, "1"), s(&spec, "1"), s(&spec, "1")]).unwrap();
        for n in 0..5i64 {
            let want = ProjPoint::new(vec![s(&spec, "1"), s(&spec, &format!("p1^{n}")), s(&spec, &format!("p2^{n}"))]).unwrap();
            assert_eq!(orbit_point(&phi, &c, -n), want);
        }
        assert_eq!(orbit_point(&phi, &c, 0), c);
    }

    #[test]
    fn jordan_block_orbit_closed_form() {
        let spec = FieldSpec::rationals();
        let m = vec![
            vec![s(&spec, "1"), s(&spec, "1"), s(&spec, "0")],
            vec![s(&spec, "0"), s(&spec, "1"), s(&spec, "1")],
            vec![s(&spec, "0"), s(&spec, "0"), s(&spec, "1")],
        ];
        let phi = ProjAut::new(&spec, m).unwrap();
        let c = ProjPoint::new(vec![s(&spec, "0"), s(&spec, "0"), s(&spec, "1")]).unwrap();
        for n in -4i64..6 {
            let want = ProjPoint::new(vec![Scalar::ratio(&spec, n * (n - 1), 2).unwrap(), Scalar::from_int(&spec, n), s(&spec, "1")]).unwrap();
            assert_eq!(orbit_point(&phi, &c, -n), want, "n = {n}");
        }
    }

    #[test]
    fn fat_point_dimension() {
        let spec = FieldSpec::rationals();
        let p = ProjPoint::new(vec![s(&spec, "1"), s(&spec, "2"), s(&spec, "3")]).unwrap();
        for m in 1..6 {
            let v = vanishing_subspace(&spec, 2, &[(p.clone(), 2)], m).unwrap();
            assert_eq!(v.dim(), monomials::dim_u(2, m) - 3, "m = {m}");
        }
        let one = vanishing_subspace(&spec, 2, &[(p.clone(), 1)], 1).unwrap();
        assert_eq!(one.dim(), 2);
        assert!(matches!(
            vanishing_subspace(&spec, 2, &[(p.clone(), 1), (p, 2)], 3),
            Err(ProjError::DuplicatePoint(_))
        ));
    }
}
