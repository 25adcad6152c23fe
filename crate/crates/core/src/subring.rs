//! The point subalgebra `R = R(φ,c) = k⟨V⟩ ⊆ S(φ)` with `V = (𝔪_c)_1`:
//! graded pieces computed two ways, the modules `T^B ⊇ R`, subfactors of
//! principal left ideals, point-ideal families and the opposite ring.
//!
//! Orbit points are `c_i = φ^{-i}(c)`. The closed form of `R_n` is the space
//! of degree-`n` forms vanishing at `c_0, …, c_{n-1}`.

pub mod certify;

use crate::projgeo::monomials::{basis, dim_u};
use crate::projgeo::{orbit_point, GradedPoly, ProjAut, ProjError, ProjPoint, Subspace};
use crate::report::{Check, DegreeRow, Method, Report};
use crate::scalars::field::Field;
use crate::twist::{TwistError, TwistRing};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubringError {
    #[error("orbit points c_{0} and c_{1} coincide")]
    NotDistinct(i64, i64),
    #[error("form is not in R_{0}")]
    NotInSubring(usize),
    #[error("index {0} lies outside the window {1}")]
    OutsideWindow(usize, usize),
    #[error(transparent)]
    Twist(#[from] TwistError),
    #[error(transparent)]
    Proj(#[from] ProjError),
}

/// Finite subset `B ⊆ [0, window)` of the naturals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexSet {
    members: BTreeSet<usize>,
    window: usize,
}

impl IndexSet {
    pub fn new(members: impl IntoIterator<Item = usize>, window: usize) -> Result<Self, SubringError> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&m) = members.iter().find(|&&m| m >= window) {
            return Err(SubringError::OutsideWindow(m, window));
        }
        Ok(IndexSet { members, window })
    }

    /// `[0, window)`, standing in for all of `ℕ`.
    pub fn everything(window: usize) -> Self {
        IndexSet { members: (0..window).collect(), window }
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// `|A_n ∩ B|` with `A_n = {0, …, n−1}`.
    pub fn count_below(&self, n: usize) -> usize {
        self.members.range(..n).count()
    }
}

type Memo<F> = Arc<Mutex<HashMap<usize, Subspace<F>>>>;

/// Twisted ring, base point and an orbit window on which the points are
/// verified pairwise distinct.
#[derive(Clone)]
pub struct SubringCtx<F: Field> {
    ring: TwistRing<F>,
    c: ProjPoint<F>,
    window: usize,
    closed: Memo<F>,
    generated: Memo<F>,
}

impl<F: Field> SubringCtx<F> {
    /// Checks that `c_i`, `|i| ≤ window`, are pairwise distinct.
    pub fn new(ring: TwistRing<F>, c: ProjPoint<F>, window: usize) -> Result<Self, SubringError> {
        if c.t() != ring.t() {
            return Err(ProjError::Shape(format!("c has {} coordinates, expected {}", c.t() + 1, ring.t() + 1)).into());
        }
        let w = window as i64;
        let mut seen: HashMap<ProjPoint<F>, i64> = HashMap::new();
        for i in -w..=w {
            let p = orbit_point(ring.phi(), &c, i);
            if let Some(&j) = seen.get(&p) {
                return Err(SubringError::NotDistinct(j, i));
            }
            seen.insert(p, i);
        }
        Ok(SubringCtx { ring, c, window, closed: Default::default(), generated: Default::default() })
    }

    pub fn from_aut(phi: ProjAut<F>, c: ProjPoint<F>, window: usize) -> Result<Self, SubringError> {
        Self::new(TwistRing::new(phi)?, c, window)
    }

    pub fn ring(&self) -> &TwistRing<F> {
        &self.ring
    }

    pub fn phi(&self) -> &ProjAut<F> {
        self.ring.phi()
    }

    pub fn t(&self) -> usize {
        self.ring.t()
    }

    pub fn ctx(&self) -> &F::Ctx {
        self.ring.ctx()
    }

    pub fn base_point(&self) -> &ProjPoint<F> {
        &self.c
    }

    pub fn window(&self) -> usize {
        self.window
    }

    /// `c_i = φ^{-i}(c)`.
    pub fn point(&self, i: i64) -> ProjPoint<F> {
        orbit_point(self.phi(), &self.c, i)
    }

    /// `V = (𝔪_c)_1`.
    pub fn v_space(&self) -> Subspace<F> {
        Subspace::vanishing_at(self.ctx(), self.t(), 1, &[&self.c])
    }

    fn vanishing(&self, d: usize, idx: impl IntoIterator<Item = i64>) -> Subspace<F> {
        let pts: Vec<ProjPoint<F>> = idx.into_iter().map(|i| self.point(i)).collect();
        let refs: Vec<&ProjPoint<F>> = pts.iter().collect();
        Subspace::vanishing_at(self.ctx(), self.t(), d, &refs)
    }

    /// `{f ∈ U_n : f(c_i) = 0, 0 ≤ i < n}`.
    pub fn r_piece_closed(&self, n: usize) -> Subspace<F> {
        if let Some(s) = self.closed.lock().unwrap().get(&n) {
            return s.clone();
        }
        let s = self.vanishing(n, 0..n as i64);
        self.closed.lock().unwrap().insert(n, s.clone());
        s
    }

    /// `V^n`, built as `R_n = R_{n−1} ⋆ V = ϕ(R_{n−1}) · V`.
    pub fn r_piece_generated(&self, n: usize) -> Subspace<F> {
        if let Some(s) = self.generated.lock().unwrap().get(&n) {
            return s.clone();
        }
        let s = if n == 0 {
            Subspace::full(self.ctx(), self.t(), 0)
        } else {
            let prev = self.r_piece_generated(n - 1);
            let v = self.v_space();
            let mut vecs = Vec::with_capacity(prev.dim() * v.dim());
            for r in prev.basis() {
                for x in v.basis() {
                    vecs.push(self.ring.twist_mul_dense(n - 1, r, 1, x));
                }
            }
            // for symbolic fields this avoids a large elimination when the
            // products provably fill the closed form
            Subspace::from_spanning_within(self.ctx(), vecs, &self.r_piece_closed(n))
        };
        self.generated.lock().unwrap().insert(n, s.clone());
        s
    }

    /// `(T^B)_n = {f ∈ U_n : f(c_i) = 0 for i ∈ A_n \ B}`.
    pub fn t_module_piece(&self, b: &IndexSet, n: usize) -> Subspace<F> {
        self.vanishing(n, (0..n).filter(|&i| !b.contains(i)).map(|i| i as i64))
    }

    pub fn hilbert_report(&self, nmax: usize) -> Report {
        let mut rep = Report::new("hilbert", Method::Direct);
        for n in 0..=nmax {
            rep.row(DegreeRow::new(n, dim_u(self.t(), n) - n, self.r_piece_closed(n).dim()));
        }
        rep
    }

    /// `V^n` equals the closed form, as canonical echelon forms.
    pub fn ring_equality_report(&self, nmax: usize) -> Report {
        let mut rep = Report::new("ring_equality", Method::Direct);
        for n in 0..=nmax {
            let g = self.r_piece_generated(n);
            let c = self.r_piece_closed(n);
            rep.check(Check::with(format!("degree {n}"), g == c, format!("generated dim {}, closed dim {}", g.dim(), c.dim())));
        }
        rep
    }

    /// `dim (T^B / R)_n = |A_n ∩ B|`.
    pub fn m_dimension_report(&self, b: &IndexSet, nmax: usize) -> Report {
        let mut rep = Report::new("module_hilbert", Method::Direct);
        for n in 0..=nmax {
            let t = self.t_module_piece(b, n);
            let r = self.r_piece_closed(n);
            let ok = r.is_subspace_of(&t);
            rep.check(Check::new(format!("R_{n} inside T^B_{n}"), ok));
            rep.row(DegreeRow::new(n, b.count_below(n), t.dim() - r.dim()));
        }
        rep
    }

    /// `M^B = ⊕_{j∈B} M^{{j}}` degreewise: the pieces `T^{{j}}_n` are
    /// independent modulo `R_n` and together span `T^B_n`.
    pub fn m_decomposition_check(&self, b: &IndexSet, nmax: usize) -> Report {
        let mut rep = Report::new("module_decomposition", Method::Direct);
        for n in 0..=nmax {
            let r = &self.r_piece_closed(n);
            let mut sum = r.clone();
            let mut expected = 0;
            for &j in b.members() {
                let single = IndexSet { members: [j].into(), window: b.window };
                let tj = self.t_module_piece(&single, n);
                expected += tj.dim() - r.dim();
                sum = sum.sum(&tj).expect("same degree");
            }
            let tb = self.t_module_piece(b, n);
            rep.check(Check::new(format!("degree {n}: sum spans T^B"), sum == tb));
            rep.row(DegreeRow::new(n, expected, sum.dim() - r.dim()));
        }
        rep
    }

    /// `ann_R(e) = R ∩ 𝔪_{c_{−1}}` for a generator `e` of `M^{{j}}` in
    /// degree `j + 1`, plus the Hilbert function of `M^{{j}}`.
    pub fn one_point_annihilator(&self, j: usize, mmax: usize) -> Report {
        let mut rep = Report::new("one_point_annihilator", Method::Direct);
        let single = IndexSet { members: [j].into(), window: j + 1 };
        for n in 0..=j + mmax + 1 {
            let dim = self.t_module_piece(&single, n).dim() - self.r_piece_closed(n).dim();
            rep.row(DegreeRow::new(n, usize::from(n > j), dim));
        }
        let tj = self.t_module_piece(&single, j + 1);
        let rj = self.r_piece_closed(j + 1);
        let Some(e) = tj.basis().iter().find(|v| !rj.contains(v)).cloned() else {
            rep.check(Check::new("generator exists", false));
            return rep;
        };
        let cm1 = self.point(-1);
        for m in 0..=mmax {
            let rm = self.r_piece_closed(m);
            let target = self.r_piece_closed(m + j + 1);
            // kernel of r ↦ class of r ⋆ e in U / R
            let images: Vec<Vec<F>> = rm.basis().iter().map(|r| target.quotient_coords(&self.ring.twist_mul_dense(m, r, j + 1, &e))).collect();
            let q = target.codim();
            let coeffs = crate::projgeo::linalg::kernel(self.ctx(), crate::twist::transpose(self.ctx(), &images, q), rm.dim());
            let ann_vecs: Vec<Vec<F>> = coeffs
                .iter()
                .map(|c| {
                    let mut v = vec![F::zero(self.ctx()); basis(self.t(), m).len()];
                    for (k, r) in rm.basis().iter().enumerate() {
                        if !c[k].is_zero() {
                            for (o, x) in v.iter_mut().zip(r) {
                                *o = o.add(&c[k].mul(x));
                            }
                        }
                    }
                    v
                })
                .collect();
            let ann = Subspace::from_spanning(self.ctx(), self.t(), m, ann_vecs);
            let want = rm.intersect(&Subspace::vanishing_at(self.ctx(), self.t(), m, &[&cm1])).unwrap();
            rep.check(Check::with(format!("degree {m}: annihilator equals R ∩ m_(c_-1)"), ann == want, format!("dims {} vs {}", ann.dim(), want.dim())));
        }
        rep
    }

    fn zero_set(&self, f: &GradedPoly<F>, upto: usize) -> BTreeSet<usize> {
        (0..upto).filter(|&i| f.eval(&self.point(i as i64)).is_zero()).collect()
    }

    fn require_in_r(&self, f: &GradedPoly<F>) -> Result<(), SubringError> {
        if !self.r_piece_closed(f.degree()).contains_poly(f) {
            return Err(SubringError::NotInSubring(f.degree()));
        }
        Ok(())
    }

    /// `(S f ∩ R) / R f ≅ M^B[−n]` with `B = (D − n) ∩ ℕ`, where `D` is the
    /// zero set of `f` on the orbit and `n = deg f`.
    pub fn subfactor_first_type(&self, f: &GradedPoly<F>, mmax: usize) -> Result<SubfactorReport, SubringError> {
        self.require_in_r(f)?;
        let n = f.degree();
        let d = self.zero_set(f, mmax.max(n) + 1);
        let b: BTreeSet<usize> = d.iter().filter(|&&i| i >= n).map(|&i| i - n).collect();
        let mut rep = Report::new("subfactor_first_type", Method::Direct);
        let fv = f.to_dense();
        for m in n..=mmax {
            let sf = self.ring.left_ideal_piece(std::slice::from_ref(f), m);
            let rm = self.r_piece_closed(m);
            let cap = sf.intersect(&rm)?;
            let r_lower = self.r_piece_closed(m - n);
            let rf_vecs = r_lower.basis().iter().map(|r| self.ring.twist_mul_dense(m - n, r, n, &fv)).collect();
            let rf = Subspace::from_spanning(self.ctx(), self.t(), m, rf_vecs);
            rep.check(Check::new(format!("degree {m}: Rf inside Sf ∩ R"), rf.is_subspace_of(&cap)));
            let predicted = b.range(..m - n).count();
            rep.row(DegreeRow::new(m, predicted, cap.dim() - rf.dim()));
        }
        Ok(SubfactorReport { zero_set: d.into_iter().collect(), predicted_set: b.into_iter().collect(), report: rep })
    }

    /// `S / (R + S f) ≅ M^D` and `R + S f = T^{ℕ∖D}` degreewise.
    pub fn subfactor_second_type(&self, f: &GradedPoly<F>, mmax: usize) -> Result<SubfactorReport, SubringError> {
        self.require_in_r(f)?;
        let d = self.zero_set(f, mmax + 1);
        let mut rep = Report::new("subfactor_second_type", Method::Direct);
        for m in 0..=mmax {
            let sf = self.ring.left_ideal_piece(std::slice::from_ref(f), m);
            let sum = self.r_piece_closed(m).sum(&sf)?;
            let t = self.vanishing(m, d.range(..m).map(|&i| i as i64));
            rep.check(Check::new(format!("degree {m}: R + Sf = T^(N minus D)"), sum == t));
            rep.row(DegreeRow::new(m, d.range(..m).count(), sum.codim()));
        }
        let dset: Vec<usize> = d.into_iter().collect();
        Ok(SubfactorReport { zero_set: dset.clone(), predicted_set: dset, report: rep })
    }

    /// `J^{(i)}`: `(R ∩ 𝔪_{c_i})_n` for `n ≤ i` and `(R ∩ 𝔪_{c_i}²)_n` above.
    pub fn point_ideal_piece(&self, i: usize, n: usize) -> Subspace<F> {
        let ci = self.point(i as i64);
        let r = self.r_piece_closed(n);
        let m = if n <= i {
            Subspace::vanishing_at(self.ctx(), self.t(), n, &[&ci])
        } else {
            Subspace::double_vanishing(self.ctx(), self.t(), n, &ci)
        };
        r.intersect(&m).expect("same degree")
    }

    pub fn point_ideal_family(&self, i: usize, nmax: usize) -> PointIdealFamily<F> {
        let mut rep = Report::new("point_ideal_family", Method::Direct);
        let pieces: Vec<Subspace<F>> = (0..=nmax.max(i + 1)).map(|n| self.point_ideal_piece(i, n)).collect();
        let v = self.r_piece_closed(1);
        for n in 0..pieces.len() {
            let r = self.r_piece_closed(n);
            let predicted = if n <= i { 1 } else { self.t() };
            rep.row(DegreeRow::new(n, predicted, r.dim() - pieces[n].dim()));
            if n + 1 < pieces.len() {
                rep.check(Check::new(format!("R_1 J_{n} inside J_{}", n + 1), self.left_mul_inside(&v, &pieces[n], &pieces[n + 1])));
            }
            if n > i {
                let sq = Subspace::double_vanishing(self.ctx(), self.t(), n, &self.point(i as i64));
                let ok = pieces[n].is_subspace_of(&sq);
                rep.check(Check::new(format!("J_{n} inside m_(c_{i})^2"), ok));
            }
        }
        // coset representatives spanning (R/J)_{i+1}
        let r = self.r_piece_closed(i + 1);
        let j = &pieces[i + 1];
        let mut acc = j.clone();
        let mut quotient = Vec::new();
        for v in r.basis() {
            if !acc.contains(v) {
                quotient.push(v.clone());
                acc = acc.sum(&Subspace::from_spanning(self.ctx(), self.t(), i + 1, vec![v.clone()])).unwrap();
            }
        }
        PointIdealFamily { i, pieces, quotient, report: rep }
    }

    /// Whether `A ⋆ X ⊆ Y` for subspaces `A ⊆ R_a`, `X ⊆ U_x`.
    fn left_mul_inside(&self, a: &Subspace<F>, x: &Subspace<F>, y: &Subspace<F>) -> bool {
        a.basis().iter().all(|r| x.basis().iter().all(|v| y.contains(&self.ring.twist_mul_dense(a.degree(), r, x.degree(), v))))
    }

    /// Two members of the family at `i`, obtained from two different
    /// codimension-one subspaces `L_k ⊇ J_{i+1}` of `R_{i+1}`.
    pub fn truncation_collision(&self, i: usize, nmax: usize) -> Collision<F> {
        let fam = self.point_ideal_family(i, nmax);
        let mut rep = Report::new("truncation_collision", Method::Direct);
        rep.absorb(fam.report.clone());
        let nmax = nmax.max(i + 2);
        let q = &fam.quotient;
        let mk = |skip: usize| -> Vec<Subspace<F>> {
            let mut l = fam.pieces[i + 1].basis().to_vec();
            l.extend(q.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, v)| v.clone()));
            let l = Subspace::from_spanning(self.ctx(), self.t(), i + 1, l);
            (0..=nmax)
                .map(|n| {
                    let j = if n < fam.pieces.len() { fam.pieces[n].clone() } else { self.point_ideal_piece(i, n) };
                    if n <= i {
                        return j;
                    }
                    let rl = self.r_piece_closed(n - i - 1);
                    let mut vecs = j.basis().to_vec();
                    for r in rl.basis() {
                        for v in l.basis() {
                            vecs.push(self.ring.twist_mul_dense(n - i - 1, r, i + 1, v));
                        }
                    }
                    Subspace::from_spanning(self.ctx(), self.t(), n, vecs)
                })
                .collect()
        };
        let first = mk(0);
        let second = mk(1.min(q.len().saturating_sub(1)));
        let v = self.r_piece_closed(1);
        for (name, ideal) in [("first", &first), ("second", &second)] {
            for n in 0..=nmax {
                let r = self.r_piece_closed(n);
                let ok = ideal[n].is_subspace_of(&r) && r.dim() - ideal[n].dim() == 1;
                rep.check(Check::with(format!("{name} ideal: dim (R/I)_{n} = 1"), ok, format!("{}", r.dim() - ideal[n].dim())));
                if n < nmax {
                    rep.check(Check::new(format!("{name} ideal: R_1 I_{n} inside I_{}", n + 1), self.left_mul_inside(&v, &ideal[n], &ideal[n + 1])));
                }
            }
        }
        let equal_up_to = (0..=nmax).take_while(|&n| first[n] == second[n]).last();
        rep.check(Check::with(
            "ideals agree exactly through degree i",
            equal_up_to == Some(i),
            format!("agree through {equal_up_to:?}"),
        ));
        Collision { i, first, second, equal_up_to, report: rep }
    }

    /// `f ↦ ϕ^{−m}(f)` on `U_m` is an anti-isomorphism `S(φ) → S(φ^{−1})`
    /// carrying `R(φ,c)` onto `R(φ^{−1}, φ(c))`.
    pub fn opposite_ring_check(&self, pairs: usize, nmax: usize, seed: u64) -> Result<Report, SubringError> {
        let mut rep = Report::new("opposite_ring", Method::Direct);
        let other = self.opposite_pairs(&mut rep, pairs, seed)?;
        let phi = self.phi();
        for n in 0..=nmax {
            let r = self.r_piece_closed(n);
            let target = other.r_piece_closed(n);
            // ϕ^{-n} is invertible, so images of a basis stay independent
            let inside = r.basis().iter().all(|v| target.contains(&phi.apply_dense(-(n as i64), n, v)));
            let ok = inside && r.dim() == target.dim();
            rep.check(Check::with(format!("degree {n}: image of R_n is R'_n"), ok, format!("dims {} and {}", r.dim(), target.dim())));
        }
        Ok(rep)
    }

    /// The opposite ring `S(φ^{−1})` with `c' = φ(c)`, after checking
    /// `ψ(f⋆g) = ψ(g)⋆'ψ(f)` on random pairs of linear forms.
    pub(crate) fn opposite_pairs(&self, rep: &mut Report, pairs: usize, seed: u64) -> Result<SubringCtx<F>, SubringError> {
        let phi = self.phi();
        let inv = phi.inverse();
        // inv's matrix is μ·M^{-1}; on U_m its substitution is μ^m ϕ^{-1}
        let (r0, c0) = (0..=self.t())
            .flat_map(|r| (0..=self.t()).map(move |c| (r, c)))
            .find(|&(r, c)| !phi.inverse_matrix()[r][c].is_zero())
            .unwrap();
        let mu = inv.matrix()[r0][c0].div(&phi.inverse_matrix()[r0][c0]).unwrap();
        if !mu.is_one() {
            rep.note(format!("normalized inverse differs from M^-1 by {}", mu.render()));
        }
        let other = SubringCtx::from_aut(inv, self.point(-1), self.window)?;
        let psi = |f: &GradedPoly<F>| crate::projgeo::apply_aut(phi, f, -(f.degree() as i64));
        let one = GradedPoly::one(self.ctx(), self.t());
        rep.check(Check::new("identity maps to identity", psi(&one) == one));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rand_form = |rng: &mut ChaCha8Rng, d: usize| {
            let n = basis(self.t(), d).len();
            let v: Vec<F> = (0..n).map(|_| F::from_i64(self.ctx(), rng.gen_range(-9..=9))).collect();
            GradedPoly::from_dense(self.ctx(), self.t(), d, &v)
        };
        for k in 0..pairs {
            let f = rand_form(&mut rng, 1);
            let g = rand_form(&mut rng, 1);
            let lhs = psi(&self.ring.twist_mul(&f, &g)).scale(&mu.pow_i((f.degree() * g.degree()) as i64).unwrap());
            let rhs = other.ring.twist_mul(&psi(&g), &psi(&f));
            rep.check(Check::new(format!("pair {k}: psi(f*g) = psi(g)*'psi(f)"), lhs == rhs));
        }
        Ok(other)
    }

    /// A form in `R_n` with small random coordinates in the echelon basis
    /// of `sub` (which should lie in `R_n`).
    pub fn random_member(&self, sub: &Subspace<F>, seed: u64) -> GradedPoly<F> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut v = vec![F::zero(self.ctx()); basis(self.t(), sub.degree()).len()];
        for b in sub.basis() {
            let c = F::from_i64(self.ctx(), rng.gen_range(1..=30));
            for (o, x) in v.iter_mut().zip(b) {
                *o = o.add(&c.mul(x));
            }
        }
        GradedPoly::from_dense(self.ctx(), self.t(), sub.degree(), &v)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SubfactorReport {
    pub zero_set: Vec<usize>,
    pub predicted_set: Vec<usize>,
    pub report: Report,
}

#[derive(Clone, Debug)]
pub struct PointIdealFamily<F: Field> {
    pub i: usize,
    /// `J_0, J_1, …`
    pub pieces: Vec<Subspace<F>>,
    /// Coset representatives of a basis of `(R/J)_{i+1}`.
    pub quotient: Vec<Vec<F>>,
    pub report: Report,
}

#[derive(Clone, Debug)]
pub struct Collision<F: Field> {
    pub i: usize,
    pub first: Vec<Subspace<F>>,
    pub second: Vec<Subspace<F>>,
    /// Last degree through which the two ideals coincide.
    pub equal_up_to: Option<usize>,
    pub report: Report,
}
