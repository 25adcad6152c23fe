//! Geometry of orbit windows: distinctness, general position of the points
//! `c_i = φ^{-i}(c)` degree by degree, explicit hypersurfaces through them,
//! and the determinant lemma behind general position for diagonal `φ`.
//!
//! Everything here is evidence on a finite window. General position in
//! degree `d` means the evaluation matrix of the degree-`d` monomials at the
//! window points has full column rank.

use crate::projgeo::linalg::{kernel_echelon, rref};
use crate::projgeo::monomials::basis;
use crate::projgeo::{evaluation_row, orbit_point, GradedPoly, ProjAut, ProjPoint};
use crate::report::{Check, Method, Report};
use crate::scalars::coeff::Rat;
use crate::scalars::field::Field;
use crate::scalars::poly::{Mono, Poly, MAX_VARS};
use num_traits::One;
use serde::Serialize;
use thiserror::Error;

/// Largest matrix size accepted by [`symbolic_determinant`].
pub const DET_SIZE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitCertError {
    #[error("determinant of size {0} exceeds the limit {1}")]
    SizeLimit(usize, usize),
    #[error("exponents must be strictly increasing")]
    NotIncreasing,
    #[error("expected {expected} exponents, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("too many variables for the polynomial kernel")]
    TooManyVariables,
}

/// The points `c_i` for a chosen list of indices.
#[derive(Clone, Debug)]
pub struct OrbitWindow<F: Field> {
    phi: ProjAut<F>,
    c: ProjPoint<F>,
    indices: Vec<i64>,
    points: Vec<ProjPoint<F>>,
}

impl<F: Field> OrbitWindow<F> {
    pub fn new(phi: ProjAut<F>, c: ProjPoint<F>, indices: Vec<i64>) -> Self {
        let points = indices.iter().map(|&i| orbit_point(&phi, &c, i)).collect();
        OrbitWindow { phi, c, indices, points }
    }

    /// Indices `lo..=hi`.
    pub fn contiguous(phi: ProjAut<F>, c: ProjPoint<F>, lo: i64, hi: i64) -> Self {
        Self::new(phi, c, (lo..=hi).collect())
    }

    /// The points whose index satisfies `keep`.
    pub fn restrict(&self, keep: impl Fn(i64) -> bool) -> Self {
        let (indices, points) =
            self.indices.iter().zip(&self.points).filter(|(i, _)| keep(**i)).map(|(i, p)| (*i, p.clone())).unzip();
        OrbitWindow { phi: self.phi.clone(), c: self.c.clone(), indices, points }
    }

    /// Same automorphism and base point, different indices.
    pub fn with_indices(&self, indices: Vec<i64>) -> Self {
        Self::new(self.phi.clone(), self.c.clone(), indices)
    }

    pub fn phi(&self) -> &ProjAut<F> {
        &self.phi
    }

    pub fn base_point(&self) -> &ProjPoint<F> {
        &self.c
    }

    pub fn indices(&self) -> &[i64] {
        &self.indices
    }

    pub fn points(&self) -> &[ProjPoint<F>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn t(&self) -> usize {
        self.phi.t()
    }

    pub fn ctx(&self) -> &F::Ctx {
        self.phi.ctx()
    }

    /// Rows `(f_1(c_j), …, f_N(c_j))`, one per window point.
    pub fn evaluation_matrix(&self, d: usize) -> Vec<Vec<F>> {
        self.points.iter().map(|p| evaluation_row(self.t(), d, p)).collect()
    }
}

/// True iff the window points are pairwise distinct.
pub fn distinctness_check<F: Field>(w: &OrbitWindow<F>) -> bool {
    let pts = w.points();
    (0..pts.len()).all(|i| pts[..i].iter().all(|q| q != &pts[i]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    GeneralPosition,
    HypersurfaceFound,
    /// Fewer points than forms, imposing independent conditions; a
    /// hypersurface exists by counting and none is computed.
    Underdetermined,
}

#[derive(Clone, Debug)]
pub struct PositionCertificate<F: Field> {
    pub degree: usize,
    pub verdict: Verdict,
    pub witness: Option<GradedPoly<F>>,
    pub method: Method,
    /// Rank of the evaluation matrix (a lower bound under `Certified`).
    pub rank: usize,
    /// `C(t+d,d)`.
    pub ncols: usize,
    pub npoints: usize,
    /// The witness vanishes at every window point, checked by evaluation.
    pub verified: bool,
}

impl<F: Field> PositionCertificate<F> {
    /// A hypersurface through fewer than `C(t+d,d)` points always exists and
    /// says nothing about the orbit.
    pub fn is_meaningful(&self) -> bool {
        self.npoints >= self.ncols
    }
}

/// Full column rank of the evaluation matrix gives general position in
/// degree `d`; otherwise the first canonical kernel vector is a
/// hypersurface through every window point.
pub fn position_certificate<F: Field>(w: &OrbitWindow<F>, d: usize) -> PositionCertificate<F> {
    let ctx = w.ctx();
    let t = w.t();
    let rows = w.evaluation_matrix(d);
    let ncols = basis(t, d).len();
    let npoints = rows.len();
    if let Some(b) = F::rank_lower_bound(ctx, &rows, ncols) {
        if b.rank == npoints && npoints < ncols {
            return PositionCertificate {
                degree: d,
                verdict: Verdict::Underdetermined,
                witness: None,
                method: Method::Certified { modulus: b.modulus, seed: b.seed },
                rank: npoints,
                ncols,
                npoints,
                verified: true,
            };
        }
        if b.rank == ncols {
            return PositionCertificate {
                degree: d,
                verdict: Verdict::GeneralPosition,
                witness: None,
                method: Method::Certified { modulus: b.modulus, seed: b.seed },
                rank: ncols,
                ncols,
                npoints,
                verified: true,
            };
        }
    }
    let method = Method::exact::<F>(ctx);
    let rank = rref(ctx, rows.clone(), ncols).rank();
    if rank == ncols {
        return PositionCertificate {
            degree: d,
            verdict: Verdict::GeneralPosition,
            witness: None,
            method,
            rank,
            ncols,
            npoints,
            verified: true,
        };
    }
    let ker = kernel_echelon(ctx, rows, ncols);
    let f = GradedPoly::from_dense(ctx, t, d, &ker.rows[0]);
    let verified = w.points().iter().all(|p| f.eval(p).is_zero());
    PositionCertificate {
        degree: d,
        verdict: Verdict::HypersurfaceFound,
        witness: Some(f),
        method,
        rank,
        ncols,
        npoints,
        verified,
    }
}

/// True iff `f` and `g` agree up to a nonzero scalar.
pub fn proportional<F: Field>(f: &GradedPoly<F>, g: &GradedPoly<F>) -> bool {
    if f.degree() != g.degree() || f.is_zero() || g.is_zero() {
        return false;
    }
    let (e, a) = f.terms().iter().next_back().unwrap();
    let b = g.coeff(e);
    if b.is_zero() {
        return false;
    }
    g.scale(a).sub(&f.scale(&b)).map(|r| r.is_zero()).unwrap_or(false)
}

/// Outcome of the determinant lemma check for one exponent sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeterminantCheck {
    pub t: usize,
    pub d: usize,
    pub exponents: Vec<u32>,
    pub nonzero: bool,
    pub terms: usize,
    /// Exponent vector of `x_0..x_t` in the lex-leading monomial.
    pub leading: Option<Vec<u32>>,
    /// `f_1^{a_1} ⋯ f_N^{a_N}` with `f_1 < ⋯ < f_N`.
    pub predicted: Vec<u32>,
    pub matches: bool,
}

/// `det(f_i^{a_j})` for the degree-`d` monomials `f_1 < ⋯ < f_N` in lex
/// order with `x_t` most significant, expanded by fraction-free elimination.
pub fn symbolic_determinant(t: usize, d: usize, a: &[u32]) -> Result<DeterminantCheck, OrbitCertError> {
    let b = basis(t, d);
    let n = b.len();
    if n > DET_SIZE_LIMIT {
        return Err(OrbitCertError::SizeLimit(n, DET_SIZE_LIMIT));
    }
    if a.len() != n {
        return Err(OrbitCertError::WrongLength { expected: n, got: a.len() });
    }
    if a.windows(2).any(|p| p[0] >= p[1]) {
        return Err(OrbitCertError::NotIncreasing);
    }
    if t + 1 > MAX_VARS {
        return Err(OrbitCertError::TooManyVariables);
    }
    // x_i is stored as polynomial variable t - i, so the kernel's
    // lexicographic order puts x_t first
    let mono = |e: &[u32], k: u32| {
        let mut m: Mono = [0; MAX_VARS];
        for (i, &x) in e.iter().enumerate() {
            m[t - i] = u16::try_from(x * k).expect("exponent fits");
        }
        m
    };
    let m: Vec<Vec<Poly<Rat>>> =
        b.exps.iter().map(|e| a.iter().map(|&k| Poly::monomial(mono(e, k), Rat::one())).collect()).collect();
    let det = bareiss_det(m);
    let mut predicted = vec![0u32; t + 1];
    for (e, &k) in b.exps.iter().zip(a) {
        for (p, &x) in predicted.iter_mut().zip(e) {
            *p += x * k;
        }
    }
    let leading = (!det.is_zero()).then(|| (0..=t).map(|i| det.lm()[t - i] as u32).collect::<Vec<u32>>());
    let matches = leading.as_deref() == Some(&predicted[..]);
    Ok(DeterminantCheck {
        t,
        d,
        exponents: a.to_vec(),
        nonzero: !det.is_zero(),
        terms: det.nterms(),
        leading,
        predicted,
        matches,
    })
}

/// Bareiss determinant with row exchanges.
fn bareiss_det(mut m: Vec<Vec<Poly<Rat>>>) -> Poly<Rat> {
    let n = m.len();
    if n == 0 {
        return Poly::constant(Rat::one());
    }
    let mut sign = false;
    let mut prev = Poly::constant(Rat::one());
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
            return Poly::zero();
        };
        if p != k {
            m.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev).expect("Bareiss quotients are exact");
            }
            m[i][k] = Poly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// One line of the JSON certificate stream.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateRecord {
    pub side: String,
    pub degree: usize,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub window: Vec<i64>,
    pub field: String,
    pub method: Method,
    pub rank: usize,
    pub ncols: usize,
    pub meaningful: bool,
}

/// Evidence for one side of the orbit.
#[derive(Clone, Debug, Serialize)]
pub struct SideEvidence {
    pub side: String,
    pub window: Vec<i64>,
    pub dmax: usize,
    /// First degree with a hypersurface through at least `C(t+d,d)` window
    /// points, with that hypersurface.
    pub obstruction: Option<(usize, String)>,
    pub summary: String,
    pub certificates: Vec<CertificateRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NoetherianEvidence {
    pub sides: Vec<SideEvidence>,
    pub report: Report,
}

impl NoetherianEvidence {
    pub fn side(&self, name: &str) -> Option<&SideEvidence> {
        self.sides.iter().find(|s| s.side == name)
    }
}

fn side_evidence<F: Field>(name: &str, w: &OrbitWindow<F>, dmax: usize) -> (SideEvidence, Vec<PositionCertificate<F>>) {
    let certs: Vec<PositionCertificate<F>> = (1..=dmax).map(|d| position_certificate(w, d)).collect();
    let field = F::field_label(w.ctx());
    let records: Vec<CertificateRecord> = certs
        .iter()
        .map(|c| CertificateRecord {
            side: name.to_string(),
            degree: c.degree,
            verdict: c.verdict,
            witness: c.witness.as_ref().map(|f| f.to_string()),
            window: w.indices().to_vec(),
            field: field.clone(),
            method: c.method.clone(),
            rank: c.rank,
            ncols: c.ncols,
            meaningful: c.is_meaningful(),
        })
        .collect();
    let obstruction = certs
        .iter()
        .find(|c| c.verdict == Verdict::HypersurfaceFound && c.is_meaningful())
        .map(|c| (c.degree, c.witness.as_ref().unwrap().to_string()));
    let summary = match &obstruction {
        Some((d, f)) => format!("hypersurface {f} = 0 of degree {d} through all {} window points", w.len()),
        None => format!("no obstruction found up to degree {dmax} on {} window points", w.len()),
    };
    let ev = SideEvidence {
        side: name.to_string(),
        window: w.indices().to_vec(),
        dmax,
        obstruction,
        summary,
        certificates: records,
    };
    (ev, certs)
}

/// Position certificates for `d = 1..=dmax` on the sides `i ≥ 0`, `i ≤ −1`,
/// the whole window, and each extra named index list.
///
/// This is finite evidence: general position on a window does not prove
/// critical density, and a hypersurface through window points only shows
/// that the points it meets are not in general position.
pub fn noetherian_report<F: Field>(w: &OrbitWindow<F>, dmax: usize, probes: &[(String, Vec<i64>)]) -> NoetherianEvidence {
    let mut windows = vec![
        ("nonnegative".to_string(), w.restrict(|i| i >= 0)),
        ("negative".to_string(), w.restrict(|i| i <= -1)),
        ("full".to_string(), w.clone()),
    ];
    windows.extend(probes.iter().map(|(n, idx)| (n.clone(), w.with_indices(idx.clone()))));
    let mut report = Report::new("noetherian_evidence", Method::exact::<F>(w.ctx()));
    let mut sides = Vec::new();
    for (name, sub) in &windows {
        let (ev, certs) = side_evidence(name, sub, dmax);
        report.check(Check::new(format!("{name}: window points distinct"), distinctness_check(sub)));
        for c in &certs {
            if c.verdict == Verdict::HypersurfaceFound {
                report.check(Check::new(format!("{name}: degree {} witness vanishes on the window", c.degree), c.verified));
            }
        }
        report.note(format!("{name}: {}", ev.summary));
        sides.push(ev);
    }
    report.note("window-bounded evidence, not a proof of critical density");
    NoetherianEvidence { sides, report }
}

/// Degree-`d` report for one window: a row of rank versus `C(t+d,d)` per
/// degree, passing when the verdict is general position.
pub fn general_position_report<F: Field>(w: &OrbitWindow<F>, dmax: usize) -> Report {
    let mut rep = Report::new("general_position", Method::exact::<F>(w.ctx()));
    for d in 1..=dmax {
        let c = position_certificate(w, d);
        if let Method::Certified { .. } = c.method {
            rep.method = c.method.clone();
        }
        rep.row(crate::report::DegreeRow::new(d, c.ncols, c.rank));
    }
    rep.note(format!("window indices {:?}", w.indices()));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeo::text::parse_poly;
    use crate::scalars::field::{Fq, Q61};
    use crate::scalars::{FieldSpec, Scalar};

    fn fq(v: i64) -> Fq {
        Fq::new(v, Q61)
    }

    #[test]
    fn identity_orbit_is_not_distinct() {
        let phi = ProjAut::<Fq>::identity(&Q61, 2);
        let c = ProjPoint::new(vec![fq(1), fq(2), fq(3)]).unwrap();
        assert!(!distinctness_check(&OrbitWindow::contiguous(phi, c, 0, 1)));
    }

    #[test]
    fn permutation_orbit_repeats() {
        let m = vec![vec![fq(0), fq(1), fq(0)], vec![fq(0), fq(0), fq(1)], vec![fq(1), fq(0), fq(0)]];
        let phi = ProjAut::new(&Q61, m).unwrap();
        let c = ProjPoint::new(vec![fq(1), fq(2), fq(5)]).unwrap();
        assert!(!distinctness_check(&OrbitWindow::contiguous(phi, c, -2, 2)));
    }

    #[test]
    fn generic_diagonal_is_in_general_position() {
        let s = FieldSpec::new(0, &["p1", "p2"]).unwrap();
        let phi = ProjAut::diagonal(&s, &[Scalar::one(&s), Scalar::param(&s, "p1").unwrap(), Scalar::param(&s, "p2").unwrap()])
            .unwrap();
        let c = ProjPoint::new(vec![Scalar::one(&s); 3]).unwrap();
        let w = OrbitWindow::contiguous(phi, c, -6, 6);
        assert!(distinctness_check(&w));
        for d in 1..=2 {
            assert_eq!(position_certificate(&w, d).verdict, Verdict::GeneralPosition);
        }
    }

    #[test]
    fn block_of_size_three_lies_on_a_conic() {
        let s = FieldSpec::rationals();
        let i = |v: i64| Scalar::from_int(&s, v);
        let m = vec![vec![i(1), i(1), i(0)], vec![i(0), i(1), i(1)], vec![i(0), i(0), i(1)]];
        let phi = ProjAut::new(&s, m).unwrap();
        let c = ProjPoint::new(vec![i(0), i(0), i(1)]).unwrap();
        let w = OrbitWindow::contiguous(phi, c, -6, 6);
        assert_eq!(position_certificate(&w, 1).verdict, Verdict::GeneralPosition);
        let cert = position_certificate(&w, 2);
        assert_eq!(cert.verdict, Verdict::HypersurfaceFound);
        assert!(cert.verified);
        let conic = parse_poly(&s, 2, "x0*x2 + 1/2*x2*x1 - 1/2*x1^2", Some(2)).unwrap();
        assert!(proportional(cert.witness.as_ref().unwrap(), &conic));
    }

    #[test]
    fn vandermonde_determinant() {
        let r = symbolic_determinant(2, 1, &[0, 1, 2]).unwrap();
        assert!(r.nonzero && r.matches);
        assert_eq!(r.terms, 6);
        assert_eq!(r.leading, Some(vec![0, 1, 2]));
    }

    #[test]
    fn determinant_rejects_bad_exponents() {
        assert_eq!(symbolic_determinant(2, 1, &[0, 2, 2]), Err(OrbitCertError::NotIncreasing));
        assert!(matches!(symbolic_determinant(2, 1, &[0, 2]), Err(OrbitCertError::WrongLength { .. })));
        assert!(matches!(symbolic_determinant(2, 5, &(0..21).collect::<Vec<_>>()), Err(OrbitCertError::SizeLimit(21, 20))));
    }

    fn wierd(p: u64) -> OrbitWindow<Scalar> {
        let s = FieldSpec::new(p, &["y"]).unwrap();
        let y = Scalar::param(&s, "y").unwrap();
        let phi = ProjAut::diagonal(&s, &[Scalar::one(&s), y.clone(), y.add(&Scalar::one(&s))]).unwrap();
        let c = ProjPoint::new(vec![Scalar::one(&s); 3]).unwrap();
        OrbitWindow::contiguous(phi, c, -3, 3)
    }

    #[test]
    fn frobenius_orbit_lies_on_a_line_and_a_conic() {
        for p in [2u64, 3] {
            let w = wierd(p);
            let s = w.ctx().clone();
            let neg = w.with_indices(vec![-1, -(p as i64), -(p as i64).pow(2), -(p as i64).pow(3)]);
            let cert = position_certificate(&neg, 1);
            assert_eq!(cert.verdict, Verdict::HypersurfaceFound);
            assert!(cert.verified && cert.is_meaningful());
            let line = parse_poly(&s, 2, "x0 + x1 - x2", Some(1)).unwrap();
            assert!(proportional(cert.witness.as_ref().unwrap(), &line));
            let pos = w.with_indices((0..6).map(|k| (p as i64).pow(k)).collect());
            let cert = position_certificate(&pos, 2);
            assert_eq!(cert.verdict, Verdict::HypersurfaceFound);
            assert!(cert.verified && cert.is_meaningful());
            let conic = parse_poly(&s, 2, "x1*x2 + x2*x0 - x0*x1", Some(2)).unwrap();
            assert!(proportional(cert.witness.as_ref().unwrap(), &conic));
        }
    }

    #[test]
    fn zero_coordinate_gives_a_coordinate_hyperplane() {
        let s = FieldSpec::new(0, &["p1", "p2"]).unwrap();
        let phi = ProjAut::diagonal(&s, &[Scalar::one(&s), Scalar::param(&s, "p1").unwrap(), Scalar::param(&s, "p2").unwrap()])
            .unwrap();
        let c = ProjPoint::new(vec![Scalar::one(&s), Scalar::zero(&s), Scalar::one(&s)]).unwrap();
        let w = OrbitWindow::contiguous(phi, c, -4, 4);
        let ev = noetherian_report(&w, 1, &[]);
        let x1 = GradedPoly::<Scalar>::var(&s, 2, 1);
        for side in &ev.sides {
            assert_eq!(side.obstruction.as_ref().map(|o| o.1.clone()), Some(x1.to_string()));
        }
    }

    #[test]
    fn determinant_leading_terms_for_conics() {
        for a in [[0u32, 1, 2, 3, 4, 5], [0, 2, 3, 5, 7, 8]] {
            let r = symbolic_determinant(2, 2, &a).unwrap();
            assert!(r.nonzero && r.matches, "{r:?}");
        }
        let r = symbolic_determinant(2, 1, &[0, 2, 5]).unwrap();
        assert_eq!(r.leading, Some(vec![0, 2, 5]));
    }
}
