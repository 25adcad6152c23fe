//! Exact scalars: the fraction field of a polynomial ring in named
//! transcendental parameters over ℚ or 𝔽_p.
//!
//! A [`Scalar`] is a reduced fraction whose denominator has leading
//! coefficient one in graded-lex order, so equality is structural.

pub mod coeff;
pub mod field;
pub mod parse;
pub mod poly;

mod ops;
mod rref;

use coeff::{Coeff, ModP, Rat};
use field::{Field, Fq, Q61};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use parse::{parse_expr, Expr};
use poly::{Mono, Poly, MAX_VARS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("division by zero")]
    DivideByZero,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("unknown parameter {0:?}")]
    UnknownParam(String),
    #[error("parse error {0}")]
    Parse(String),
    #[error("scalars live in different fields")]
    FieldMismatch,
}

/// Characteristic plus the ordered names of the transcendental parameters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub characteristic: u64,
    pub params: Vec<String>,
}

fn reserved_name(s: &str) -> bool {
    s.len() > 1 && s.starts_with('x') && s[1..].chars().all(|c| c.is_ascii_digit())
}

impl FieldSpec {
    pub fn new(characteristic: u64, params: &[&str]) -> Result<Arc<FieldSpec>, ScalarError> {
        Self::from_owned(characteristic, params.iter().map(|s| s.to_string()).collect())
    }

    pub fn from_owned(characteristic: u64, params: Vec<String>) -> Result<Arc<FieldSpec>, ScalarError> {
        if characteristic != 0 && !coeff::is_prime(characteristic) {
            return Err(ScalarError::InvalidField(format!("{characteristic} is not prime")));
        }
        if characteristic >= 1 << 62 {
            return Err(ScalarError::InvalidField("characteristic too large".into()));
        }
        if params.len() > MAX_VARS {
            return Err(ScalarError::InvalidField(format!("at most {MAX_VARS} parameters")));
        }
        for (i, p) in params.iter().enumerate() {
            let ok = p.chars().next().is_some_and(|c| c.is_alphabetic())
                && p.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !ok || reserved_name(p) {
                return Err(ScalarError::InvalidField(format!("bad parameter name {p:?}")));
            }
            if params[..i].contains(p) {
                return Err(ScalarError::InvalidField(format!("duplicate parameter {p:?}")));
            }
        }
        Ok(Arc::new(FieldSpec { characteristic, params }))
    }

    pub fn rationals() -> Arc<FieldSpec> {
        Arc::new(FieldSpec { characteristic: 0, params: Vec::new() })
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.params.iter().position(|p| p == name)
    }

    /// The same characteristic with extra parameters appended.
    pub fn extended(&self, extra: &[&str]) -> Result<Arc<FieldSpec>, ScalarError> {
        let mut params = self.params.clone();
        params.extend(extra.iter().map(|s| s.to_string()));
        Self::from_owned(self.characteristic, params)
    }

    pub fn label(&self) -> String {
        let base = if self.characteristic == 0 { "Q".to_string() } else { format!("GF({})", self.characteristic) };
        if self.params.is_empty() {
            base
        } else {
            format!("{}({})", base, self.params.join(","))
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) struct RatFn<C: Coeff> {
    pub(crate) num: Poly<C>,
    pub(crate) den: Poly<C>,
}

impl<C: Coeff> RatFn<C> {
    fn one_c(&self) -> C {
        self.den.lc().one_like()
    }

    fn poly(p: Poly<C>, one: &C) -> Self {
        RatFn { num: p, den: Poly::constant(one.clone()) }
    }

    fn reduce(num: Poly<C>, den: Poly<C>) -> Self {
        let one = den.lc().one_like();
        if num.is_zero() {
            return RatFn { num, den: Poly::constant(one) };
        }
        let (mut num, mut den) = if den.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_one() {
                (num, den)
            } else {
                (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
            }
        };
        if !den.lc().is_one() {
            let c = den.lc().inv();
            num = num.scale(&c);
            den = den.scale(&c);
        }
        RatFn { num, den }
    }

    fn is_poly(&self) -> bool {
        self.den.is_one()
    }

    fn add(&self, o: &Self) -> Self {
        if self.num.is_zero() {
            return o.clone();
        }
        if o.num.is_zero() {
            return self.clone();
        }
        if self.is_poly() && o.is_poly() {
            return RatFn { num: self.num.add(&o.num), den: self.den.clone() };
        }
        if self.den == o.den {
            return RatFn::reduce(self.num.add(&o.num), self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        if g.is_one() {
            let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
            return RatFn::reduce_by(num, self.den.mul(&o.den), None);
        }
        let b1 = self.den.div_exact(&g).unwrap();
        let d1 = o.den.div_exact(&g).unwrap();
        let num = self.num.mul(&d1).add(&o.num.mul(&b1));
        RatFn::reduce_by(num, b1.mul(&o.den), Some(&g))
    }

    /// Cancels only against `hint` (Henrici): other factors are already coprime.
    fn reduce_by(num: Poly<C>, den: Poly<C>, hint: Option<&Poly<C>>) -> Self {
        let one = den.lc().one_like();
        if num.is_zero() {
            return RatFn { num, den: Poly::constant(one) };
        }
        let (mut num, mut den) = match hint {
            Some(h) => {
                let g = num.gcd(h);
                if g.is_one() {
                    (num, den)
                } else {
                    (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
                }
            }
            None => (num, den),
        };
        if !den.lc().is_one() {
            let c = den.lc().inv();
            num = num.scale(&c);
            den = den.scale(&c);
        }
        RatFn { num, den }
    }

    fn neg(&self) -> Self {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    fn mul(&self, o: &Self) -> Self {
        if self.num.is_zero() || o.num.is_zero() {
            return RatFn::poly(Poly::zero(), &self.one_c());
        }
        if self.is_poly() && o.is_poly() {
            return RatFn { num: self.num.mul(&o.num), den: self.den.clone() };
        }
        let g1 = if o.den.is_one() { None } else { Some(self.num.gcd(&o.den)) };
        let g2 = if self.den.is_one() { None } else { Some(o.num.gcd(&self.den)) };
        let cancel = |p: &Poly<C>, g: &Option<Poly<C>>| match g {
            Some(g) if !g.is_one() => p.div_exact(g).unwrap(),
            _ => p.clone(),
        };
        let num = cancel(&self.num, &g1).mul(&cancel(&o.num, &g2));
        let den = cancel(&self.den, &g2).mul(&cancel(&o.den, &g1));
        RatFn::reduce_by(num, den, None)
    }

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            return None;
        }
        Some(RatFn::reduce_by(self.den.clone(), self.num.clone(), None))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub(crate) enum Repr {
    Q(RatFn<Rat>),
    P(RatFn<ModP>),
}

/// Element of `Frac(F[params])`, `F` the prime field of the attached spec.
#[derive(Clone)]
pub struct Scalar {
    spec: Arc<FieldSpec>,
    pub(crate) repr: Repr,
}

impl PartialEq for Scalar {
    fn eq(&self, o: &Self) -> bool {
        self.repr == o.repr
    }
}
impl Eq for Scalar {}

impl Hash for Scalar {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.repr.hash(h)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

macro_rules! binop {
    ($a:expr, $b:expr, $f:ident) => {
        match (&$a.repr, &$b.repr) {
            (Repr::Q(x), Repr::Q(y)) => Scalar { spec: $a.spec.clone(), repr: Repr::Q(x.$f(y)) },
            (Repr::P(x), Repr::P(y)) => Scalar { spec: $a.spec.clone(), repr: Repr::P(x.$f(y)) },
            _ => panic!("scalars from different fields"),
        }
    };
}

impl Scalar {
    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn from_int(spec: &Arc<FieldSpec>, v: i64) -> Scalar {
        Self::from_bigint(spec, &BigInt::from(v))
    }

    pub fn from_bigint(spec: &Arc<FieldSpec>, v: &BigInt) -> Scalar {
        let repr = if spec.characteristic == 0 {
            let one = Rat::one();
            Repr::Q(RatFn::poly(Poly::constant(Rat::from_integer(v.clone())), &one))
        } else {
            let one = ModP::new(1, spec.characteristic);
            Repr::P(RatFn::poly(Poly::constant(ModP::from_bigint(v, spec.characteristic)), &one))
        };
        Scalar { spec: spec.clone(), repr }
    }

    pub fn zero(spec: &Arc<FieldSpec>) -> Scalar {
        Self::from_int(spec, 0)
    }

    pub fn one(spec: &Arc<FieldSpec>) -> Scalar {
        Self::from_int(spec, 1)
    }

    pub fn ratio(spec: &Arc<FieldSpec>, n: i64, d: i64) -> Result<Scalar, ScalarError> {
        Self::from_int(spec, n).checked_div(&Self::from_int(spec, d))
    }

    pub fn param_at(spec: &Arc<FieldSpec>, i: usize) -> Scalar {
        assert!(i < spec.params.len());
        let repr = if spec.characteristic == 0 {
            let one = Rat::one();
            Repr::Q(RatFn::poly(Poly::var(i, one.clone()), &one))
        } else {
            let one = ModP::new(1, spec.characteristic);
            Repr::P(RatFn::poly(Poly::var(i, one), &one))
        };
        Scalar { spec: spec.clone(), repr }
    }

    pub fn param(spec: &Arc<FieldSpec>, name: &str) -> Result<Scalar, ScalarError> {
        let i = spec.param_index(name).ok_or_else(|| ScalarError::UnknownParam(name.into()))?;
        Ok(Self::param_at(spec, i))
    }

    pub fn parse(spec: &Arc<FieldSpec>, text: &str) -> Result<Scalar, ScalarError> {
        let e = parse_expr(text).map_err(|e| ScalarError::Parse(e.to_string()))?;
        Self::eval_expr(spec, &e)
    }

    pub fn eval_expr(spec: &Arc<FieldSpec>, e: &Expr) -> Result<Scalar, ScalarError> {
        Ok(match e {
            Expr::Int(n) => Self::from_bigint(spec, n),
            Expr::Ident(s) => Self::param(spec, s)?,
            Expr::Add(a, b) => Self::eval_expr(spec, a)?.add(&Self::eval_expr(spec, b)?),
            Expr::Sub(a, b) => Self::eval_expr(spec, a)?.sub(&Self::eval_expr(spec, b)?),
            Expr::Mul(a, b) => Self::eval_expr(spec, a)?.mul(&Self::eval_expr(spec, b)?),
            Expr::Div(a, b) => Self::eval_expr(spec, a)?.checked_div(&Self::eval_expr(spec, b)?)?,
            Expr::Neg(a) => Self::eval_expr(spec, a)?.neg(),
            Expr::Pow(a, k) => Self::eval_expr(spec, a)?.pow(*k)?,
        })
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Q(x) => x.num.is_zero(),
            Repr::P(x) => x.num.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Q(x) => x.num.is_one() && x.den.is_one(),
            Repr::P(x) => x.num.is_one() && x.den.is_one(),
        }
    }

    /// True when no parameter occurs.
    pub fn is_constant(&self) -> bool {
        match &self.repr {
            Repr::Q(x) => x.num.is_constant() && x.den.is_constant(),
            Repr::P(x) => x.num.is_constant() && x.den.is_constant(),
        }
    }

    /// Bitmask of parameters that occur in numerator or denominator.
    pub fn param_mask(&self) -> u32 {
        match &self.repr {
            Repr::Q(x) => x.num.vars() | x.den.vars(),
            Repr::P(x) => x.num.vars() | x.den.vars(),
        }
    }

    pub fn depends_on(&self, name: &str) -> bool {
        match self.spec.param_index(name) {
            Some(i) => self.param_mask() & (1 << i) != 0,
            None => false,
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        binop!(self, o, add)
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        binop!(self, o, sub)
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        binop!(self, o, mul)
    }

    pub fn neg(&self) -> Scalar {
        let repr = match &self.repr {
            Repr::Q(x) => Repr::Q(x.neg()),
            Repr::P(x) => Repr::P(x.neg()),
        };
        Scalar { spec: self.spec.clone(), repr }
    }

    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        let repr = match &self.repr {
            Repr::Q(x) => Repr::Q(x.inv().ok_or(ScalarError::DivideByZero)?),
            Repr::P(x) => Repr::P(x.inv().ok_or(ScalarError::DivideByZero)?),
        };
        Ok(Scalar { spec: self.spec.clone(), repr })
    }

    pub fn checked_div(&self, o: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, k: i64) -> Result<Scalar, ScalarError> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut b = base;
        let mut acc = Scalar::one(&self.spec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Same element viewed in a field whose parameter list contains ours.
    pub fn embed(&self, target: &Arc<FieldSpec>) -> Result<Scalar, ScalarError> {
        if target.characteristic != self.spec.characteristic {
            return Err(ScalarError::FieldMismatch);
        }
        let mut map = [0usize; MAX_VARS];
        for (i, name) in self.spec.params.iter().enumerate() {
            map[i] = target.param_index(name).ok_or_else(|| ScalarError::UnknownParam(name.clone()))?;
        }
        fn remap<C: Coeff>(p: &Poly<C>, map: &[usize; MAX_VARS], n: usize) -> Poly<C> {
            Poly::from_terms(
                p.terms()
                    .iter()
                    .map(|(m, c)| {
                        let mut mm: Mono = [0; MAX_VARS];
                        for i in 0..n {
                            mm[map[i]] = m[i];
                        }
                        (mm, c.clone())
                    })
                    .collect(),
            )
        }
        let n = self.spec.params.len();
        let repr = match &self.repr {
            Repr::Q(x) => Repr::Q(RatFn { num: remap(&x.num, &map, n), den: remap(&x.den, &map, n) }),
            Repr::P(x) => Repr::P(RatFn { num: remap(&x.num, &map, n), den: remap(&x.den, &map, n) }),
        };
        Ok(Scalar { spec: target.clone(), repr })
    }

    /// Rational value when the scalar is a parameter-free element of ℚ.
    pub fn to_rational(&self) -> Option<Rat> {
        match &self.repr {
            Repr::Q(x) if self.is_constant() => {
                let n = x.num.constant_value().cloned().unwrap_or_else(Rat::zero);
                Some(n / x.den.lc().clone())
            }
            _ => None,
        }
    }

    pub(crate) fn from_repr(spec: &Arc<FieldSpec>, repr: Repr) -> Scalar {
        Scalar { spec: spec.clone(), repr }
    }

    pub fn numerator_terms(&self) -> usize {
        match &self.repr {
            Repr::Q(x) => x.num.nterms(),
            Repr::P(x) => x.num.nterms(),
        }
    }
}

/// Membership in `k^×`; for a field element this is just being nonzero.
pub fn is_prime_field_unit(a: &Scalar) -> bool {
    !a.is_zero()
}

fn render_poly<C: Coeff>(p: &Poly<C>, names: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().iter().enumerate() {
        let neg = c.is_negative();
        let mag = if neg { c.neg() } else { c.clone() };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        for (i, &e) in m.iter().enumerate() {
            if e == 1 {
                factors.push(names[i].clone());
            } else if e > 1 {
                factors.push(format!("{}^{}", names[i], e));
            }
        }
        if factors.is_empty() {
            out.push_str(&mag.render());
        } else {
            if !mag.is_one() {
                out.push_str(&mag.render());
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

fn render_ratfn<C: Coeff>(x: &RatFn<C>, names: &[String]) -> String {
    let n = render_poly(&x.num, names);
    if x.den.is_one() {
        return n;
    }
    let d = render_poly(&x.den, names);
    let n = if x.num.nterms() > 1 { format!("({n})") } else { n };
    let d = if x.den.nterms() > 1 || x.den.is_constant() || d.contains(['*', '/']) { format!("({d})") } else { d };
    format!("{n}/{d}")
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match &self.repr {
            Repr::Q(x) => render_ratfn(x, &self.spec.params),
            Repr::P(x) => render_ratfn(x, &self.spec.params),
        };
        f.write_str(&s)
    }
}

impl Field for Scalar {
    type Ctx = Arc<FieldSpec>;

    fn ctx(&self) -> Arc<FieldSpec> {
        self.spec.clone()
    }
    fn zero(ctx: &Arc<FieldSpec>) -> Self {
        Scalar::zero(ctx)
    }
    fn one(ctx: &Arc<FieldSpec>) -> Self {
        Scalar::one(ctx)
    }
    fn from_i64(ctx: &Arc<FieldSpec>, v: i64) -> Self {
        Scalar::from_int(ctx, v)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Scalar::is_one(self)
    }
    fn add(&self, o: &Self) -> Self {
        Scalar::add(self, o)
    }
    fn sub(&self, o: &Self) -> Self {
        Scalar::sub(self, o)
    }
    fn mul(&self, o: &Self) -> Self {
        Scalar::mul(self, o)
    }
    fn neg(&self) -> Self {
        Scalar::neg(self)
    }
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self).ok()
    }
    fn characteristic(ctx: &Arc<FieldSpec>) -> u64 {
        ctx.characteristic
    }
    fn render(&self) -> String {
        self.to_string()
    }
    fn field_label(ctx: &Arc<FieldSpec>) -> String {
        ctx.label()
    }
    fn rref(ctx: &Arc<FieldSpec>, rows: Vec<Vec<Self>>, ncols: usize) -> crate::projgeo::linalg::Echelon<Self> {
        rref::bareiss_rref(ctx, rows, ncols)
    }
    /// Groups terms by denominator and clears denominators by plain
    /// multiplication, so no polynomial gcd is ever taken.
    fn sum_is_zero(items: &[Self]) -> bool {
        fn clear<C: Coeff>(fs: Vec<&RatFn<C>>) -> bool {
            let mut groups: Vec<(Poly<C>, Poly<C>)> = Vec::new();
            for f in fs {
                match groups.iter_mut().find(|(d, _)| *d == f.den) {
                    Some((_, n)) => *n = n.add(&f.num),
                    None => groups.push((f.den.clone(), f.num.clone())),
                }
            }
            groups.retain(|(_, n)| !n.is_zero());
            let mut total = Poly::zero();
            for (j, (_, n)) in groups.iter().enumerate() {
                let mut term = n.clone();
                for (l, (d, _)) in groups.iter().enumerate() {
                    if l != j {
                        term = term.mul(d);
                    }
                }
                total = total.add(&term);
            }
            total.is_zero()
        }
        let q: Option<Vec<&RatFn<Rat>>> = items.iter().map(|x| if let Repr::Q(r) = &x.repr { Some(r) } else { None }).collect();
        if let Some(q) = q {
            return clear(q);
        }
        let p: Option<Vec<&RatFn<ModP>>> = items.iter().map(|x| if let Repr::P(r) = &x.repr { Some(r) } else { None }).collect();
        p.map(clear).unwrap_or(false)
    }

    fn is_parametric(ctx: &Arc<FieldSpec>) -> bool {
        !ctx.params.is_empty()
    }
    /// Rank after a specialization of the parameters, which never exceeds
    /// the symbolic rank.
    fn rank_lower_bound(ctx: &Arc<FieldSpec>, rows: &[Vec<Self>], ncols: usize) -> Option<field::RankBound> {
        if ctx.params.is_empty() {
            return None;
        }
        (1..=3).find_map(|seed| {
            let sp = Specialization::seeded(ctx, seed);
            let m: Option<Vec<Vec<Fq>>> = rows.iter().map(|r| r.iter().map(|x| sp.apply(x)).collect()).collect();
            m.map(|m| field::RankBound { rank: crate::projgeo::linalg::gauss_jordan(&sp.q, m, ncols).rank(), modulus: sp.q, seed })
        })
    }
}

/// Ring homomorphism from a parameter field into a word-sized prime field,
/// sending each parameter to a fixed residue.
///
/// Ranks can only drop under such a map, so a full rank observed after
/// specializing certifies full rank over the parameter field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Specialization {
    pub q: u64,
    pub values: Vec<u64>,
}

impl Specialization {
    /// Characteristic zero maps into GF(2^61 - 1); characteristic p maps
    /// into GF(p) itself.
    pub fn seeded(spec: &FieldSpec, seed: u64) -> Specialization {
        let q = if spec.characteristic == 0 { Q61 } else { spec.characteristic };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = spec.params.iter().map(|_| rng.gen_range(2..q.max(3))).map(|v| v % q).collect();
        Specialization { q, values }
    }

    pub fn apply(&self, s: &Scalar) -> Option<Fq> {
        let q = self.q;
        let vals: Vec<Fq> = self.values.iter().map(|&v| Fq { v, q }).collect();
        let mono = |m: &Mono| {
            let mut acc = Fq::one(&q);
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    acc = acc.mul(&vals[i].pow_i(e as i64).unwrap());
                }
            }
            acc
        };
        let fadd = |a: &Fq, b: &Fq| Field::add(a, b);
        let fmul = |a: &Fq, b: &Fq| Field::mul(a, b);
        let (n, d) = match &s.repr {
            Repr::Q(x) => {
                let coef = |c: &Rat| {
                    let n = ModP::from_bigint(c.numer(), q);
                    let d = ModP::from_bigint(c.denom(), q);
                    (d.v != 0).then(|| Fq::from(n.mul(&d.inv())))
                };
                (
                    x.num.eval_map(Fq::zero(&q), coef, mono, fadd, fmul)?,
                    x.den.eval_map(Fq::zero(&q), coef, mono, fadd, fmul)?,
                )
            }
            Repr::P(x) => {
                if x.den.lc().p != q {
                    return None;
                }
                let coef = |c: &ModP| Some(Fq::from(*c));
                (
                    x.num.eval_map(Fq::zero(&q), coef, mono, fadd, fmul)?,
                    x.den.eval_map(Fq::zero(&q), coef, mono, fadd, fmul)?,
                )
            }
        };
        n.div(&d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec2() -> Arc<FieldSpec> {
        FieldSpec::new(0, &["p1", "p2"]).unwrap()
    }

    #[test]
    fn self_division_is_one() {
        let s = spec2();
        let p1 = Scalar::param(&s, "p1").unwrap();
        assert!(p1.checked_div(&p1).unwrap().is_one());
    }

    #[test]
    fn characteristic_two_addition() {
        let s = FieldSpec::new(2, &["y"]).unwrap();
        let y = Scalar::param(&s, "y").unwrap();
        let r = y.add(&Scalar::one(&s));
        assert_eq!(r, Scalar::parse(&s, "y+1").unwrap());
        assert_eq!(r.add(&Scalar::one(&s)), y);
    }

    #[test]
    fn fraction_reduces_by_gcd() {
        let s = FieldSpec::new(0, &["y"]).unwrap();
        let r = Scalar::parse(&s, "(y^2-1)/(y-1)").unwrap();
        assert_eq!(r, Scalar::parse(&s, "y+1").unwrap());
        assert_eq!(r.to_string(), "y + 1");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let s = spec2();
        let p1 = Scalar::param(&s, "p1").unwrap();
        assert_eq!(p1.checked_div(&Scalar::zero(&s)), Err(ScalarError::DivideByZero));
        assert!(Scalar::parse(&s, "1/(p1-p1)").is_err());
    }

    #[test]
    fn unit_test_is_nonzero_test() {
        let s = spec2();
        assert!(is_prime_field_unit(&Scalar::ratio(&s, 3, 2).unwrap()));
        assert!(!is_prime_field_unit(&Scalar::zero(&s)));
        assert!(is_prime_field_unit(&Scalar::param(&s, "p1").unwrap()));
    }

    #[test]
    fn denominators_are_monic() {
        let s = spec2();
        let a = Scalar::parse(&s, "1/(2*p1 + 4)").unwrap();
        assert_eq!(a.to_string(), "1/2/(p1 + 2)");
        let back = Scalar::parse(&s, &a.to_string()).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn print_parse_roundtrip() {
        let s = spec2();
        for t in ["p1^2*p2 - 3/2*p1 + 1", "(p1 - p2)/(p1*p2 + 1)", "-7/3", "p2^-3", "(1/p1 + 1/p2)^2"] {
            let a = Scalar::parse(&s, t).unwrap();
            assert_eq!(Scalar::parse(&s, &a.to_string()).unwrap(), a, "{t} -> {a}");
        }
    }

    #[test]
    fn embedding_renames_parameters() {
        let s = spec2();
        let big = FieldSpec::new(0, &["y1", "p2", "p1"]).unwrap();
        let a = Scalar::parse(&s, "p1^2 + p2/3").unwrap();
        let b = a.embed(&big).unwrap();
        assert_eq!(b, Scalar::parse(&big, "p1^2 + p2/3").unwrap());
    }

    #[test]
    fn specialization_is_a_homomorphism() {
        let s = spec2();
        let sp = Specialization::seeded(&s, 7);
        let a = Scalar::parse(&s, "(p1 + 1)/(p2 - 3)").unwrap();
        let b = Scalar::parse(&s, "p1^3 - p2/5").unwrap();
        let fa = sp.apply(&a).unwrap();
        let fb = sp.apply(&b).unwrap();
        assert_eq!(sp.apply(&a.mul(&b)).unwrap(), Field::mul(&fa, &fb));
        assert_eq!(sp.apply(&a.add(&b)).unwrap(), Field::add(&fa, &fb));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(FieldSpec::new(4, &[]).is_err());
        assert!(FieldSpec::new(0, &["a", "a"]).is_err());
        assert!(FieldSpec::new(0, &["x1"]).is_err());
    }
}
