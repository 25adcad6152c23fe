//! Pushing symbolic objects through a [`Specialization`] into `GF(q)`.
//!
//! Every map here is a ring homomorphism applied entrywise, so ranks of
//! specialized matrices are lower bounds for the symbolic ranks.

use super::{GradedPoly, ProjAut, ProjPoint, Subspace};
use crate::scalars::field::Fq;
use crate::scalars::{Scalar, Specialization};

pub fn vec(sp: &Specialization, v: &[Scalar]) -> Option<Vec<Fq>> {
    v.iter().map(|x| sp.apply(x)).collect()
}

pub fn point(sp: &Specialization, p: &ProjPoint<Scalar>) -> Option<ProjPoint<Fq>> {
    p.map(|x| sp.apply(x))
}

pub fn poly(sp: &Specialization, f: &GradedPoly<Scalar>) -> Option<GradedPoly<Fq>> {
    f.map_coeffs(&sp.q, |x| sp.apply(x))
}

/// `None` when an entry has a vanishing denominator or the image is singular.
pub fn aut(sp: &Specialization, phi: &ProjAut<Scalar>) -> Option<ProjAut<Fq>> {
    let m: Option<Vec<Vec<Fq>>> = phi.matrix().iter().map(|r| vec(sp, r)).collect();
    ProjAut::new(&sp.q, m?).ok()
}

/// Specialized spanning set; its span may be smaller than the original.
pub fn subspace(sp: &Specialization, s: &Subspace<Scalar>) -> Option<Subspace<Fq>> {
    let rows: Option<Vec<Vec<Fq>>> = s.basis().iter().map(|r| vec(sp, r)).collect();
    Some(Subspace::from_spanning(&sp.q, s.t(), s.degree(), rows?))
}
