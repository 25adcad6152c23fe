//! The field abstraction used by every degreewise computation, plus a fast
//! word-sized prime field used as a specialization target.

use super::coeff::{is_prime, mulmod, ModP};
use crate::projgeo::linalg::{gauss_jordan, Echelon};
use std::fmt::{self, Debug};
use std::hash::Hash;

pub trait Field: Clone + PartialEq + Eq + Hash + Debug + Send + Sync + 'static {
    type Ctx: Clone + Debug + PartialEq + Send + Sync + 'static;

    fn ctx(&self) -> Self::Ctx;
    fn zero(ctx: &Self::Ctx) -> Self;
    fn one(ctx: &Self::Ctx) -> Self;
    fn from_i64(ctx: &Self::Ctx, v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn characteristic(ctx: &Self::Ctx) -> u64;
    fn render(&self) -> String;
    fn field_label(ctx: &Self::Ctx) -> String;

    fn is_one(&self) -> bool {
        *self == Self::one(&self.ctx())
    }

    fn div(&self, o: &Self) -> Option<Self> {
        o.inv().map(|i| self.mul(&i))
    }

    fn pow_i(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut b = base;
        let mut acc = Self::one(&self.ctx());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Some(acc)
    }

    /// Reduced row echelon form of `rows`; implementations may pick any
    /// elimination strategy as long as the result is the canonical RREF.
    fn rref(ctx: &Self::Ctx, rows: Vec<Vec<Self>>, ncols: usize) -> Echelon<Self> {
        gauss_jordan(ctx, rows, ncols)
    }

    /// Whether `Σ items` is zero; fields with expensive normalization can
    /// skip reducing intermediate sums.
    fn sum_is_zero(items: &[Self]) -> bool {
        match items.split_first() {
            None => true,
            Some((a, rest)) => rest.iter().fold(a.clone(), |acc, x| acc.add(x)).is_zero(),
        }
    }

    /// Whether elements carry formal parameters.
    fn is_parametric(_ctx: &Self::Ctx) -> bool {
        false
    }

    /// A cheap lower bound for the rank of `rows`, or `None` when the field
    /// offers no shortcut.
    fn rank_lower_bound(_ctx: &Self::Ctx, _rows: &[Vec<Self>], _ncols: usize) -> Option<RankBound> {
        None
    }
}

/// Rank observed over `GF(modulus)` after specializing with `seed`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankBound {
    pub rank: usize,
    pub modulus: u64,
    pub seed: u64,
}

/// Mersenne prime 2^61 - 1, the default specialization modulus.
pub const Q61: u64 = (1u64 << 61) - 1;

/// Element of the prime field of order `q` (`q < 2^63`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fq {
    pub v: u64,
    pub q: u64,
}

impl Fq {
    pub fn new(v: i64, q: u64) -> Self {
        Fq { v: v.rem_euclid(q as i64) as u64, q }
    }

    pub fn checked_modulus(q: u64) -> Option<u64> {
        (is_prime(q) && q < (1u64 << 63)).then_some(q)
    }
}

impl Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl From<ModP> for Fq {
    fn from(m: ModP) -> Self {
        Fq { v: m.v, q: m.p }
    }
}

impl Field for Fq {
    type Ctx = u64;

    fn ctx(&self) -> u64 {
        self.q
    }
    fn zero(q: &u64) -> Self {
        Fq { v: 0, q: *q }
    }
    fn one(q: &u64) -> Self {
        Fq { v: 1, q: *q }
    }
    fn from_i64(q: &u64, v: i64) -> Self {
        Fq::new(v, *q)
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn is_one(&self) -> bool {
        self.v == 1
    }
    fn add(&self, o: &Self) -> Self {
        let s = self.v + o.v;
        Fq { v: if s >= self.q { s - self.q } else { s }, q: self.q }
    }
    fn sub(&self, o: &Self) -> Self {
        Fq { v: if self.v >= o.v { self.v - o.v } else { self.v + self.q - o.v }, q: self.q }
    }
    fn mul(&self, o: &Self) -> Self {
        Fq { v: mulmod(self.v, o.v, self.q), q: self.q }
    }
    fn neg(&self) -> Self {
        Fq { v: if self.v == 0 { 0 } else { self.q - self.v }, q: self.q }
    }
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        Some(Fq::from(ModP { v: self.v, p: self.q }.pow(self.q - 2)))
    }
    fn characteristic(q: &u64) -> u64 {
        *q
    }
    fn render(&self) -> String {
        self.v.to_string()
    }
    fn field_label(q: &u64) -> String {
        format!("GF({q})")
    }
}
