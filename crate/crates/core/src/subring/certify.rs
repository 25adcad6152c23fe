//! Dimension certificates for symbolic configurations that are too large
//! for a full echelon form over the parameter field.
//!
//! Upper bounds come from exact symbolic facts (every word in `V` vanishes at
//! the prescribed points, or a form count). Lower bounds come from ranks
//! after a specialization of the parameters, which can only lose rank.

use super::{SubringCtx, SubringError};
use crate::projgeo::orbit_point;
use crate::projgeo::monomials::dim_u;
use crate::projgeo::special;
use crate::report::{Check, DegreeRow, Method, Report};
use crate::scalars::field::Fq;
use crate::scalars::{Scalar, Specialization};

/// Number of seeds tried before giving up on finding a good specialization.
const ATTEMPTS: u64 = 16;

/// A specialization under which `φ`, `c` and the orbit window stay defined
/// and pairwise distinct.
pub fn specialize_ctx(ctx: &SubringCtx<Scalar>, seed: u64) -> Result<(Specialization, SubringCtx<Fq>), SubringError> {
    let mut last = None;
    for s in seed..seed + ATTEMPTS {
        let sp = Specialization::seeded(ctx.ctx(), s);
        let (Some(phi), Some(c)) = (special::aut(&sp, ctx.phi()), special::point(&sp, ctx.base_point())) else {
            continue;
        };
        match SubringCtx::from_aut(phi, c, ctx.window()) {
            Ok(sc) => return Ok((sp, sc)),
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or(SubringError::NotDistinct(0, 0)))
}

/// `V^n = R_n` with `dim = C(n+t,t) − n`, certified for every `n ≤ nmax`.
///
/// Symbolically, a word `v_1 ⋆ ⋯ ⋆ v_n` is `ϕ^{n−1}(v_1)⋯ϕ^0(v_n)` and
/// vanishes at `c_j` as soon as one factor does; factor `l` evaluates to
/// `v_l(c_{j−n+1+l})`. Hence `V^n ⊆ R_n`, and `dim R_n ≤ C(n+t,t) − rank E`
/// for the evaluation matrix `E`. The specialized ranks of `V^n` and of `E`
/// bound both symbolic dimensions from below, so agreement proves equality.
pub fn certified_ring_equality(ctx: &SubringCtx<Scalar>, nmax: usize, seed: u64) -> Result<Report, SubringError> {
    let (sp, sc) = specialize_ctx(ctx, seed)?;
    let mut rep = Report::new("ring_equality", Method::Certified { modulus: sp.q, seed });
    let v = ctx.v_space();
    let lo = -(nmax as i64);
    // zero[k][i - lo]: does v_k vanish at c_i
    let zero: Vec<Vec<bool>> = v
        .basis_polys()
        .iter()
        .map(|f| (lo..=nmax as i64).map(|i| f.eval(&ctx.point(i)).is_zero()).collect())
        .collect();
    for n in 0..=nmax {
        let words_vanish = (0..n).all(|j| {
            (0..n).any(|l| {
                let idx = j as i64 - (n as i64 - 1 - l as i64);
                zero.iter().all(|z| z[(idx - lo) as usize])
            })
        });
        rep.check(Check::new(format!("degree {n}: every word vanishes at c_0..c_{}", n as i64 - 1), words_vanish));
        let gen = sc.r_piece_generated(n).dim();
        let closed = sc.r_piece_closed(n).dim();
        rep.check(Check::with(
            format!("degree {n}: specialized V^n fills the closed form"),
            gen == closed,
            format!("specialized dims {gen} and {closed}"),
        ));
        rep.row(DegreeRow::new(n, dim_u(ctx.t(), n) - n, gen));
    }
    rep.note("V^n lies in the closed form symbolically; specialized ranks give the matching lower bound");
    Ok(rep)
}

/// `dim R_n = C(n+t,t) − n`: at most `n` conditions are imposed, and the
/// specialized evaluation matrix already has rank `n`.
pub fn certified_hilbert(ctx: &SubringCtx<Scalar>, nmax: usize, seed: u64) -> Result<Report, SubringError> {
    let (sp, sc) = specialize_ctx(ctx, seed)?;
    let mut rep = Report::new("hilbert", Method::Certified { modulus: sp.q, seed });
    for n in 0..=nmax {
        let spec_dim = sc.r_piece_closed(n).dim();
        rep.row(DegreeRow::new(n, dim_u(ctx.t(), n) - n, spec_dim));
    }
    Ok(rep)
}

/// The opposite-ring anti-isomorphism, with the degreewise image proved
/// through the orbits instead of an echelon form over the parameter field.
///
/// `ψ = ϕ^{−n}` on `U_n` is `f ↦ f(M^{−n}x)` up to a unit, so it carries the
/// forms vanishing at `c_0..c_{n−1}` onto those vanishing at the points
/// `M^{n}c_k`. Checking `M^{−n}c'_j = c_{n−1−j}` for `j < n` therefore proves
/// `ψ(R_n) = R'_n` exactly. Specialized dimensions are compared as well.
pub fn certified_opposite(ctx: &SubringCtx<Scalar>, pairs: usize, nmax: usize, seed: u64) -> Result<Report, SubringError> {
    let (sp, sc) = specialize_ctx(ctx, seed)?;
    let mut rep = Report::new("opposite_ring", Method::Certified { modulus: sp.q, seed });
    let other = ctx.opposite_pairs(&mut rep, pairs, seed)?;
    let sother = SubringCtx::from_aut(sc.phi().inverse(), sc.point(-1), sc.window())?;
    for n in 0..=nmax {
        let points_match = (0..n).all(|j| orbit_point(ctx.phi(), &other.point(j as i64), n as i64) == ctx.point((n - 1 - j) as i64));
        rep.check(Check::new(format!("degree {n}: M^-n carries c'_0..c'_(n-1) onto c_(n-1)..c_0"), points_match));
        let (a, b) = (sc.r_piece_closed(n).dim(), sother.r_piece_closed(n).dim());
        rep.check(Check::with(format!("degree {n}: specialized R_n and R'_n have equal dimension"), a == b, format!("dims {a} and {b}")));
    }
    rep.note("the image of R_n is R'_n because M^-n permutes the defining points; pairs are checked symbolically");
    Ok(rep)
}
