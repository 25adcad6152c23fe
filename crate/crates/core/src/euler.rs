//! Eulerian derivatives `D_p f = (f(py) − f(y))/(py − y)` acting on a
//! window of the Laurent polynomial ring `k[y^{±1}]`, the operators
//! `w_i = y^{-1} + (p_i − 1)D_{p_i}`, and the dimensions of the graded
//! pieces of the algebras they generate.
//!
//! Every operator here sends `y^k` to a scalar multiple of `y^{k−1}`, so a
//! word of length `n` is determined by the function `k ↦ λ(k)` with
//! `w(y^k) = λ(k) y^{k−n}`.

use crate::projgeo::linalg::rref;
use crate::projgeo::monomials::dim_u;
use crate::projgeo::{GradedPoly, ProjAut};
use crate::report::{Check, DegreeRow, Method, Report};
use crate::scalars::field::{Field, Fq};
use crate::scalars::{FieldSpec, Scalar, Specialization};
use crate::twist::TwistRing;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EulerError {
    #[error("result leaves the window [-{0}, {0}]")]
    WindowTooSmall(usize),
    #[error("Eulerian derivative with p = 0")]
    ZeroParameter,
    #[error("D_1 needs characteristic zero")]
    DerivativeInPositiveCharacteristic,
    #[error("parameters do not specialize")]
    Specialization,
}

/// `Σ_{|k| ≤ m} a_k y^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentWindow<F: Field> {
    m: usize,
    coeffs: Vec<F>,
}

impl<F: Field> LaurentWindow<F> {
    pub fn zero(ctx: &F::Ctx, m: usize) -> Self {
        LaurentWindow { m, coeffs: vec![F::zero(ctx); 2 * m + 1] }
    }

    /// `y^k`.
    pub fn monomial(ctx: &F::Ctx, m: usize, k: i64) -> Self {
        let mut w = Self::zero(ctx, m);
        w.coeffs[(k + m as i64) as usize] = F::one(ctx);
        w
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coeff(&self, k: i64) -> &F {
        &self.coeffs[(k + self.m as i64) as usize]
    }

    /// `(exponent, coefficient)` for the nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &F)> {
        let m = self.m as i64;
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (i as i64 - m, c))
    }

    pub fn scale(&self, s: &F) -> Self {
        LaurentWindow { m: self.m, coeffs: self.coeffs.iter().map(|c| c.mul(s)).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        LaurentWindow { m: self.m, coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EulerOp<F: Field> {
    /// `D_p`; `p = 1` is `d/dy`.
    D(F),
    /// `y^k ↦ y^{k−1}`.
    YInv,
    /// `y^{-1} + (p − 1) D_p`, which sends `y^k` to `p^k y^{k−1}`.
    W(F),
    /// `s · op`.
    Scaled(F, Box<EulerOp<F>>),
    /// Composition; the last entry acts first.
    Word(Vec<EulerOp<F>>),
}

impl<F: Field> EulerOp<F> {
    /// Number of steps the exponent drops.
    pub fn length(&self) -> usize {
        match self {
            EulerOp::Word(v) => v.iter().map(|o| o.length()).sum(),
            EulerOp::Scaled(_, o) => o.length(),
            _ => 1,
        }
    }

    pub fn validate(&self, ctx: &F::Ctx) -> Result<(), EulerError> {
        match self {
            EulerOp::D(p) | EulerOp::W(p) => {
                if p.is_zero() {
                    Err(EulerError::ZeroParameter)
                } else if matches!(self, EulerOp::D(_)) && p.is_one() && F::characteristic(ctx) != 0 {
                    Err(EulerError::DerivativeInPositiveCharacteristic)
                } else {
                    Ok(())
                }
            }
            EulerOp::YInv => Ok(()),
            EulerOp::Scaled(_, o) => o.validate(ctx),
            EulerOp::Word(v) => v.iter().try_for_each(|o| o.validate(ctx)),
        }
    }

    /// `λ` with `op(y^k) = λ y^{k − length}`.
    pub fn factor(&self, ctx: &F::Ctx, k: i64) -> F {
        match self {
            EulerOp::YInv => F::one(ctx),
            EulerOp::D(p) if p.is_one() => F::from_i64(ctx, k),
            EulerOp::D(p) => {
                let pk = p.pow_i(k).expect("nonzero parameter");
                pk.sub(&F::one(ctx)).div(&p.sub(&F::one(ctx))).expect("p ≠ 1")
            }
            EulerOp::W(p) => p.pow_i(k).expect("nonzero parameter"),
            EulerOp::Scaled(s, o) => s.mul(&o.factor(ctx, k)),
            EulerOp::Word(v) => {
                let mut acc = F::one(ctx);
                let mut e = k;
                for o in v.iter().rev() {
                    acc = acc.mul(&o.factor(ctx, e));
                    e -= o.length() as i64;
                }
                acc
            }
        }
    }

    pub fn compose(&self, inner: &Self) -> Self {
        EulerOp::Word(vec![self.clone(), inner.clone()])
    }

    pub fn map<G: Field>(&self, f: &impl Fn(&F) -> Option<G>) -> Option<EulerOp<G>> {
        Some(match self {
            EulerOp::D(p) => EulerOp::D(f(p)?),
            EulerOp::YInv => EulerOp::YInv,
            EulerOp::W(p) => EulerOp::W(f(p)?),
            EulerOp::Scaled(s, o) => EulerOp::Scaled(f(s)?, Box::new(o.map(f)?)),
            EulerOp::Word(v) => EulerOp::Word(v.iter().map(|o| o.map(f)).collect::<Option<_>>()?),
        })
    }
}

/// Exact image of `f`; fails if a nonzero term would leave the window.
pub fn apply_op<F: Field>(op: &EulerOp<F>, f: &LaurentWindow<F>) -> Result<LaurentWindow<F>, EulerError> {
    let ctx = f.coeffs[0].ctx();
    op.validate(&ctx)?;
    let m = f.m as i64;
    let len = op.length() as i64;
    let mut out = LaurentWindow::zero(&ctx, f.m);
    for (k, c) in f.terms() {
        let v = c.mul(&op.factor(&ctx, k));
        if v.is_zero() {
            continue;
        }
        if k - len < -m {
            return Err(EulerError::WindowTooSmall(f.m));
        }
        out.coeffs[(k - len + m) as usize] = v;
    }
    Ok(out)
}

/// `w_j w_i = p_j^{-1} p_i w_i w_j` on every window monomial that stays in
/// the window, with `p_0 = 1`.
pub fn relation_check<F: Field>(ctx: &F::Ctx, ps: &[F], i: usize, j: usize, m: usize) -> Result<bool, EulerError> {
    let p = |k: usize| if k == 0 { F::one(ctx) } else { ps[k - 1].clone() };
    let (wi, wj) = (EulerOp::W(p(i)), EulerOp::W(p(j)));
    let ratio = p(i).div(&p(j)).ok_or(EulerError::ZeroParameter)?;
    for k in -(m as i64) + 2..=m as i64 {
        let y = LaurentWindow::monomial(ctx, m, k);
        let lhs = apply_op(&wj, &apply_op(&wi, &y)?)?;
        let rhs = apply_op(&wi, &apply_op(&wj, &y)?)?.scale(&ratio);
        if !lhs.sub(&rhs).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `x_j ⋆ x_i = p_j^{-1} p_i x_i ⋆ x_j` in `S(φ)` for
/// `φ = diag(1, p_1^{-1}, …, p_t^{-1})`, via the twisted product.
pub fn twist_relation_check(ctx: &Arc<FieldSpec>, ps: &[Scalar], i: usize, j: usize) -> bool {
    let t = ps.len();
    let one = Scalar::one(ctx);
    let mut diag = vec![one.clone()];
    diag.extend(ps.iter().map(|p| p.inv().expect("nonzero parameter")));
    let ring = TwistRing::new(ProjAut::diagonal(ctx, &diag).expect("invertible")).expect("t ≥ 2");
    let p = |k: usize| if k == 0 { one.clone() } else { ps[k - 1].clone() };
    let ratio = p(i).checked_div(&p(j)).expect("nonzero parameter");
    let xi = GradedPoly::var(ctx, t, i);
    let xj = GradedPoly::var(ctx, t, j);
    let lhs = ring.twist_mul(&xj, &xi);
    let rhs = ring.twist_mul(&xi, &xj).scale(&ratio);
    lhs.sub(&rhs).map(|r| r.is_zero()).unwrap_or(false)
}

fn words<F: Field>(gens: &[EulerOp<F>], n: usize) -> Vec<EulerOp<F>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w: Vec<EulerOp<F>>| {
                gens.iter().map(move |g| {
                    let mut v = w.clone();
                    v.push(g.clone());
                    v
                })
            })
            .collect();
    }
    out.into_iter().map(EulerOp::Word).collect()
}

/// Rank of the length-`n` words in `gens` as maps on the window `[−m, m]`.
///
/// Row `w` records `λ_w(k)` for every `k` with `k − n ≥ −m`.
pub fn algebra_dimension<F: Field>(ctx: &F::Ctx, gens: &[EulerOp<F>], n: usize, m: usize) -> Result<usize, EulerError> {
    for g in gens {
        g.validate(ctx)?;
    }
    word_rank(ctx, gens, n, m)
}

fn word_rank<F: Field>(ctx: &F::Ctx, gens: &[EulerOp<F>], n: usize, m: usize) -> Result<usize, EulerError> {
    if n > 2 * m {
        return Err(EulerError::WindowTooSmall(m));
    }
    let ks: Vec<i64> = (n as i64 - m as i64..=m as i64).collect();
    let rows: Vec<Vec<F>> = words(gens, n).iter().map(|w| ks.iter().map(|&k| w.factor(ctx, k)).collect()).collect();
    Ok(rref(ctx, rows, ks.len()).rank())
}

/// Every length-`n` word kills `y^0, …, y^{n−1}`.
pub fn kills_low_powers<F: Field>(ctx: &F::Ctx, gens: &[EulerOp<F>], n: usize) -> bool {
    words(gens, n).iter().all(|w| (0..n as i64).all(|k| w.factor(ctx, k).is_zero()))
}

/// `dim` of the degree-`n` piece for `n ≤ nmax`, compared with
/// `C(n+t,t) − n` where `t = |gens|`, at two window sizes.
///
/// Symbolic parameters are specialized to residues modulo a large prime;
/// the specialized rank bounds the true rank from below. From above, each
/// `λ_w` is a combination of the `C(n+t,t)` functions
/// `k ↦ k^{e_0} p_1^{e_1 k} ⋯` with `Σ e ≤ n`, and the `n` vanishing
/// conditions at `k = 0..n−1` are independent on that space.
pub fn dimension_report(gens: &[EulerOp<Scalar>], nmax: usize, windows: (usize, usize), seed: u64) -> Result<Report, EulerError> {
    let spec = match gens.iter().find_map(|g| match g {
        EulerOp::D(p) | EulerOp::W(p) => Some(p.spec().clone()),
        _ => None,
    }) {
        Some(s) => s,
        None => return Err(EulerError::ZeroParameter),
    };
    for g in gens {
        g.validate(&spec)?;
    }
    let t = gens.len();
    let (sp, fgens) = (seed..seed + 16)
        .find_map(|s| {
            let sp = Specialization::seeded(&spec, s);
            let fg: Option<Vec<EulerOp<Fq>>> = gens.iter().map(|g| g.map(&|x: &Scalar| sp.apply(x))).collect();
            let fg = fg?;
            let same_kind = |a: &EulerOp<Scalar>, b: &EulerOp<Fq>| match (a, b) {
                (EulerOp::D(x), EulerOp::D(y)) | (EulerOp::W(x), EulerOp::W(y)) => x.is_one() == y.is_one() && !y.is_zero(),
                _ => true,
            };
            gens.iter().zip(&fg).all(|(a, b)| same_kind(a, b)).then_some((sp, fg))
        })
        .ok_or(EulerError::Specialization)?;
    let method = if spec.params.is_empty() && spec.characteristic != 0 {
        Method::Direct
    } else {
        Method::Certified { modulus: sp.q, seed }
    };
    let mut rep = Report::new("euler_dimension", method);
    for n in 0..=nmax {
        let a = word_rank(&sp.q, &fgens, n, windows.0)?;
        let b = word_rank(&sp.q, &fgens, n, windows.1)?;
        rep.row(DegreeRow::new(n, dim_u(t, n) - n, a));
        rep.check(Check::with(format!("degree {n}: rank saturated"), a == b, format!("windows {} and {}: {a} and {b}", windows.0, windows.1)));
        rep.check(Check::new(format!("degree {n}: words kill y^0..y^{}", n as i64 - 1), kills_low_powers(&spec, gens, n)));
    }
    rep.note("rank on a finite window; faithfulness argued by saturation across two windows");
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::field::Q61;

    fn fq(v: i64) -> Fq {
        Fq::new(v, Q61)
    }

    #[test]
    fn eulerian_derivative_on_monomials() {
        let s = FieldSpec::new(0, &["p"]).unwrap();
        let p = Scalar::param(&s, "p").unwrap();
        let y3 = LaurentWindow::monomial(&s, 5, 3);
        let out = apply_op(&EulerOp::D(p.clone()), &y3).unwrap();
        assert_eq!(out.coeff(2), &Scalar::parse(&s, "p^2 + p + 1").unwrap());
        let out = apply_op(&EulerOp::W(p.clone()), &y3).unwrap();
        assert_eq!(out.coeff(2), &Scalar::parse(&s, "p^3").unwrap());
        let out = apply_op(&EulerOp::D(Scalar::one(&s)), &y3).unwrap();
        assert_eq!(out.coeff(2), &Scalar::from_int(&s, 3));
        let out = apply_op(&EulerOp::D(p), &LaurentWindow::monomial(&s, 5, -2)).unwrap();
        assert_eq!(out.coeff(-3), &Scalar::parse(&s, "-1/p - 1/p^2").unwrap());
    }

    #[test]
    fn window_underflow_is_reported() {
        let y = LaurentWindow::<Fq>::monomial(&Q61, 3, -3);
        assert_eq!(apply_op(&EulerOp::YInv, &y), Err(EulerError::WindowTooSmall(3)));

    }

    #[test]
    fn derivative_needs_characteristic_zero() {
        let y = LaurentWindow::<Fq>::monomial(&7u64, 3, 2);
        let one = Fq::new(1, 7);
        assert_eq!(apply_op(&EulerOp::D(one), &y), Err(EulerError::DerivativeInPositiveCharacteristic));
    }

    #[test]
    fn w_operators_quasi_commute() {
        let s = FieldSpec::new(0, &["p1", "p2"]).unwrap();
        let ps = vec![Scalar::param(&s, "p1").unwrap(), Scalar::param(&s, "p2").unwrap()];
        for i in 0..=2 {
            for j in 0..=2 {
                assert!(relation_check(&s, &ps, i, j, 5).unwrap());
                assert!(twist_relation_check(&s, &ps, i, j));
            }
        }
    }

    #[test]
    fn small_dimensions() {
        let gens = vec![EulerOp::D(fq(3)), EulerOp::D(fq(7))];
        assert_eq!(algebra_dimension(&Q61, &gens, 1, 8).unwrap(), 2);
        assert_eq!(algebra_dimension(&Q61, &gens, 2, 8).unwrap(), 4);
        assert!(kills_low_powers(&Q61, &gens, 3));
    }
}
