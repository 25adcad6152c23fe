//! Prime-field coefficients: rationals in characteristic zero, residues mod p otherwise.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::{self, Debug};
use std::hash::Hash;

/// Coefficient ring of the parameter polynomials.
///
/// Elements carry whatever context they need (the modulus for `ModP`), so
/// constants are produced from an existing element with the `*_like` methods.
pub trait Coeff: Clone + PartialEq + Eq + Hash + Debug + Send + Sync + 'static {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn int_like(&self, v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Panics on zero; callers test first.
    fn inv(&self) -> Self;
    fn characteristic(&self) -> u64;
    /// Text accepted back by the scalar parser.
    fn render(&self) -> String;
    /// True when the printed form needs no sign handling.
    fn is_negative(&self) -> bool;
}

pub type Rat = BigRational;

impl Coeff for Rat {
    fn zero_like(&self) -> Self {
        Rat::zero()
    }
    fn one_like(&self) -> Self {
        Rat::one()
    }
    fn int_like(&self, v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn render(&self) -> String {
        if self.denom().is_one() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// Residue modulo a prime `p < 2^63`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModP {
    pub v: u64,
    pub p: u64,
}

impl ModP {
    pub fn new(v: i64, p: u64) -> Self {
        let r = v.rem_euclid(p as i64) as u64;
        ModP { v: r, p }
    }

    pub fn from_bigint(v: &BigInt, p: u64) -> Self {
        let r = v % BigInt::from(p);
        let r = if r.is_negative() { r + BigInt::from(p) } else { r };
        ModP { v: r.to_u64().unwrap(), p }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = ModP { v: 1 % self.p, p: self.p };
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl Debug for ModP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.v, self.p)
    }
}

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

impl Coeff for ModP {
    fn zero_like(&self) -> Self {
        ModP { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        ModP { v: 1, p: self.p }
    }
    fn int_like(&self, v: i64) -> Self {
        ModP::new(v, self.p)
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn is_one(&self) -> bool {
        self.v == 1
    }
    fn add(&self, o: &Self) -> Self {
        let s = self.v + o.v;
        ModP { v: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
    fn sub(&self, o: &Self) -> Self {
        let v = if self.v >= o.v { self.v - o.v } else { self.v + self.p - o.v };
        ModP { v, p: self.p }
    }
    fn mul(&self, o: &Self) -> Self {
        ModP { v: mulmod(self.v, o.v, self.p), p: self.p }
    }
    fn neg(&self) -> Self {
        ModP { v: if self.v == 0 { 0 } else { self.p - self.v }, p: self.p }
    }
    fn inv(&self) -> Self {
        assert!(self.v != 0, "inverse of zero residue");
        self.pow(self.p - 2)
    }
    fn characteristic(&self) -> u64 {
        self.p
    }
    fn render(&self) -> String {
        self.v.to_string()
    }
    fn is_negative(&self) -> bool {
        false
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    // deterministic Miller-Rabin for 64-bit inputs
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = ModP { v: a % n, p: n }.pow(d).v;
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
