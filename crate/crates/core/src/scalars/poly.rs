//! Sparse multivariate polynomials over a prime-field coefficient type.
//!
//! Terms are kept sorted descending in graded-lex order (total degree first,
//! then the exponent of the first variable, and so on). The gcd is the
//! classical content/primitive-part recursion on the last occurring variable.

use super::coeff::Coeff;
use std::cmp::Ordering;
use std::collections::HashMap;

pub const MAX_VARS: usize = 8;
pub type Mono = [u16; MAX_VARS];
pub const ONE_MONO: Mono = [0; MAX_VARS];

#[inline]
pub fn mono_deg(m: &Mono) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

#[inline]
pub fn mono_cmp(a: &Mono, b: &Mono) -> Ordering {
    mono_deg(a).cmp(&mono_deg(b)).then_with(|| a.cmp(b))
}

#[inline]
pub fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    let mut r = [0u16; MAX_VARS];
    for i in 0..MAX_VARS {
        r[i] = a[i].checked_add(b[i]).expect("parameter exponent overflow");
    }
    r
}

#[inline]
pub fn mono_div(a: &Mono, b: &Mono) -> Option<Mono> {
    let mut r = [0u16; MAX_VARS];
    for i in 0..MAX_VARS {
        r[i] = a[i].checked_sub(b[i])?;
    }
    Some(r)
}

#[inline]
fn mono_min(a: &Mono, b: &Mono) -> Mono {
    let mut r = [0u16; MAX_VARS];
    for i in 0..MAX_VARS {
        r[i] = a[i].min(b[i]);
    }
    r
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly<C: Coeff> {
    terms: Vec<(Mono, C)>,
}

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn constant(c: C) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(ONE_MONO, c)] }
        }
    }

    pub fn var(i: usize, one: C) -> Self {
        let mut m = ONE_MONO;
        m[i] = 1;
        Poly { terms: vec![(m, one)] }
    }

    pub fn monomial(m: Mono, c: C) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Builds from arbitrary terms, combining duplicates and dropping zeros.
    pub fn from_terms(mut raw: Vec<(Mono, C)>) -> Self {
        raw.sort_by(|a, b| mono_cmp(&b.0, &a.0));
        let mut terms: Vec<(Mono, C)> = Vec::with_capacity(raw.len());
        for (m, c) in raw {
            match terms.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = lc.add(&c),
                _ => terms.push((m, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Mono, C)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == ONE_MONO)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == ONE_MONO && self.terms[0].1.is_one()
    }

    pub fn constant_value(&self) -> Option<&C> {
        if self.terms.len() == 1 && self.terms[0].0 == ONE_MONO {
            Some(&self.terms[0].1)
        } else {
            None
        }
    }

    pub fn lc(&self) -> &C {
        &self.terms[0].1
    }

    pub fn lm(&self) -> &Mono {
        &self.terms[0].0
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map(|t| mono_deg(&t.0)).unwrap_or(0)
    }

    /// Bitmask of variables that occur.
    pub fn vars(&self) -> u32 {
        let mut mask = 0u32;
        for (m, _) in &self.terms {
            for (i, &e) in m.iter().enumerate() {
                if e > 0 {
                    mask |= 1 << i;
                }
            }
        }
        mask
    }

    pub fn degree_in(&self, v: usize) -> u16 {
        self.terms.iter().map(|(m, _)| m[v]).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Self {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (*m, x.mul(c))).collect() }
    }

    pub fn mul_term(&self, mono: &Mono, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, x)| (mono_mul(m, mono), x.mul(c))).collect() }
    }

    fn merge(&self, o: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &o.terms[j];
            match mono_cmp(ma, mb) {
                Ordering::Greater => {
                    out.push((*ma, ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((*mb, if negate { cb.neg() } else { cb.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = if negate { ca.sub(cb) } else { ca.add(cb) };
                    if !s.is_zero() {
                        out.push((*ma, s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(self.terms[i..].iter().cloned());
        for (m, c) in &o.terms[j..] {
            out.push((*m, if negate { c.neg() } else { c.clone() }));
        }
        Poly { terms: out }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.merge(o, true)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.constant_value() {
            return o.scale(c);
        }
        if let Some(c) = o.constant_value() {
            return self.scale(c);
        }
        if self.terms.len() == 1 {
            return o.mul_term(&self.terms[0].0, &self.terms[0].1);
        }
        if o.terms.len() == 1 {
            return self.mul_term(&o.terms[0].0, &o.terms[0].1);
        }
        let mut acc: HashMap<Mono, C> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = mono_mul(ma, mb);
                let p = ca.mul(cb);
                match acc.get_mut(&m) {
                    Some(x) => *x = x.add(&p),
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        let mut terms: Vec<(Mono, C)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| mono_cmp(&b.0, &a.0));
        Poly { terms }
    }

    pub fn pow(&self, mut e: u32, one: &C) -> Self {
        let mut base = self.clone();
        let mut acc = Poly::constant(one.clone());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Quotient when `d` divides `self` exactly, `None` otherwise.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Poly::zero());
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.inv()));
        }
        if d.terms.len() == 1 {
            let (dm, dc) = &d.terms[0];
            let inv = dc.inv();
            let mut terms = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                terms.push((mono_div(m, dm)?, c.mul(&inv)));
            }
            return Some(Poly { terms });
        }
        let (dm, dc) = (&d.terms[0].0, &d.terms[0].1);
        let dinv = dc.inv();
        let mut rem = self.clone();
        let mut quot: Vec<(Mono, C)> = Vec::new();
        while !rem.is_zero() {
            let (rm, rc) = &rem.terms[0];
            let qm = mono_div(rm, dm)?;
            let qc = rc.mul(&dinv);
            rem = rem.sub(&d.mul_term(&qm, &qc));
            quot.push((qm, qc));
        }
        Some(Poly { terms: quot })
    }

    /// Scales so the leading coefficient is one.
    pub fn monic(&self) -> Self {
        if self.is_zero() || self.lc().is_one() {
            return self.clone();
        }
        self.scale(&self.lc().inv())
    }

    fn mono_content(&self) -> Mono {
        let mut m = self.terms[0].0;
        for (x, _) in &self.terms[1..] {
            m = mono_min(&m, x);
        }
        m
    }

    fn div_mono(&self, m: &Mono) -> Self {
        if *m == ONE_MONO {
            return self.clone();
        }
        Poly { terms: self.terms.iter().map(|(x, c)| (mono_div(x, m).unwrap(), c.clone())).collect() }
    }

    fn one_from(&self, other: &Self) -> C {
        if let Some((_, c)) = self.terms.first() {
            c.one_like()
        } else {
            other.terms[0].1.one_like()
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        let one = self.one_from(o);
        if self.is_constant() || o.is_constant() {
            return Poly::constant(one);
        }
        let ma = self.mono_content();
        let mb = o.mono_content();
        let m = mono_min(&ma, &mb);
        let g = gcd_core(&self.div_mono(&ma), &o.div_mono(&mb), &one);
        g.mul_term(&m, &one).monic()
    }

    /// Coefficients in `v`, indexed by the exponent of `v`.
    pub fn to_univariate(&self, v: usize) -> Vec<Self> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Mono, C)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let mut mm = *m;
            let e = mm[v] as usize;
            mm[v] = 0;
            buckets[e].push((mm, c.clone()));
        }
        // removing one variable from a sorted list keeps grlex order only up to
        // ties in degree, so re-sort each bucket
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    pub fn from_univariate(v: usize, coeffs: &[Self]) -> Self {
        let mut raw = Vec::new();
        for (e, c) in coeffs.iter().enumerate() {
            for (m, x) in &c.terms {
                let mut mm = *m;
                mm[v] = e as u16;
                raw.push((mm, x.clone()));
            }
        }
        Poly::from_terms(raw)
    }

    /// Substitutes values for every variable and returns the resulting coefficient.
    pub fn eval_all(&self, vals: &[C]) -> C {
        let zero = vals
            .first()
            .map(|v| v.zero_like())
            .or_else(|| self.terms.first().map(|t| t.1.zero_like()));
        let mut acc = match zero {
            Some(z) => z,
            None => panic!("cannot evaluate an empty polynomial without context"),
        };
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = t.mul(&vals[i]);
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Maps coefficients into another ring and evaluates monomials there.
    pub fn eval_map<T, FC, FM>(&self, zero: T, coef: FC, mut mono: FM, add: impl Fn(&T, &T) -> T, mul: impl Fn(&T, &T) -> T) -> Option<T>
    where
        FC: Fn(&C) -> Option<T>,
        FM: FnMut(&Mono) -> T,
    {
        let mut acc = zero;
        for (m, c) in &self.terms {
            let v = mul(&coef(c)?, &mono(m));
            acc = add(&acc, &v);
        }
        Some(acc)
    }
}

fn top_var(mask: u32) -> usize {
    31 - mask.leading_zeros() as usize
}

fn trim<C: Coeff>(u: &mut Vec<Poly<C>>) {
    while u.len() > 1 && u.last().is_some_and(|c| c.is_zero()) {
        u.pop();
    }
}

fn content<C: Coeff>(u: &[Poly<C>], one: &C) -> Poly<C> {
    let mut g = Poly::zero();
    for c in u {
        if c.is_zero() {
            continue;
        }
        g = if g.is_zero() { c.monic() } else { c.gcd(&g) };
        if g.is_constant() {
            return Poly::constant(one.clone());
        }
    }
    g
}

/// Primitive part with the leading numeric coefficient scaled to one.
fn primitive<C: Coeff>(u: &[Poly<C>], one: &C) -> Vec<Poly<C>> {
    let c = content(u, one);
    let mut out: Vec<Poly<C>> = if c.is_constant() {
        u.to_vec()
    } else {
        u.iter().map(|x| x.div_exact(&c).expect("content divides")).collect()
    };
    trim(&mut out);
    let lead = out.last().unwrap().lc().inv();
    for x in out.iter_mut() {
        *x = x.scale(&lead);
    }
    out
}

/// Pseudo-remainder of `a` by `b`, both univariate with polynomial coefficients.
fn prem<C: Coeff>(a: &[Poly<C>], b: &[Poly<C>]) -> Vec<Poly<C>> {
    let db = b.len() - 1;
    let lcb = &b[db];
    let mut r = a.to_vec();
    trim(&mut r);
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let lcr = r[dr].clone();
        for x in r.iter_mut() {
            *x = x.mul(lcb);
        }
        for (j, bj) in b.iter().enumerate().take(db + 1) {
            let idx = j + dr - db;
            r[idx] = r[idx].sub(&lcr.mul(bj));
        }
        trim(&mut r);
        if dr == 0 {
            break;
        }
    }
    r
}

fn gcd_core<C: Coeff>(a: &Poly<C>, b: &Poly<C>, one: &C) -> Poly<C> {
    if a.is_constant() || b.is_constant() {
        return Poly::constant(one.clone());
    }
    let (va, vb) = (a.vars(), b.vars());
    if va & vb == 0 {
        return Poly::constant(one.clone());
    }
    if a == b {
        return a.monic();
    }
    let v = top_var(va | vb);
    if va & (1 << v) == 0 {
        let cb = content(&b.to_univariate(v), one);
        return a.gcd(&cb);
    }
    if vb & (1 << v) == 0 {
        let ca = content(&a.to_univariate(v), one);
        return ca.gcd(b);
    }
    let ua = a.to_univariate(v);
    let ub = b.to_univariate(v);
    let gc = content(&ua, one).gcd(&content(&ub, one));
    let mut pa = primitive(&ua, one);
    let mut pb = primitive(&ub, one);
    if pa.len() < pb.len() {
        std::mem::swap(&mut pa, &mut pb);
    }
    let g = loop {
        let r = prem(&pa, &pb);
        if r.len() == 1 && r[0].is_zero() {
            break pb;
        }
        if r.len() == 1 {
            break vec![Poly::constant(one.clone())];
        }
        pa = pb;
        pb = primitive(&r, one);
    };
    let g = primitive(&g, one);
    Poly::from_univariate(v, &g).mul(&gc).monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::coeff::{ModP, Rat};

    fn q(v: i64) -> Rat {
        Rat::from_integer(v.into())
    }

    fn x(i: usize) -> Poly<Rat> {
        Poly::var(i, q(1))
    }

    #[test]
    fn gcd_of_difference_of_squares() {
        let one = Poly::constant(q(1));
        let a = x(0).mul(&x(0)).sub(&one);
        let b = x(0).sub(&one);
        assert_eq!(a.gcd(&b), b);
        assert_eq!(a.div_exact(&b).unwrap(), x(0).add(&one));
    }

    #[test]
    fn gcd_multivariate_common_factor() {
        let one = Poly::constant(q(1));
        let common = x(0).mul(&x(1)).add(&x(2)).add(&one);
        let a = common.mul(&x(0).sub(&x(2)));
        let b = common.mul(&x(1).add(&x(0).mul(&x(0))));
        assert_eq!(a.gcd(&b), common.monic());
    }

    #[test]
    fn gcd_with_monomial_content() {
        let a = x(0).mul(&x(0)).mul(&x(1));
        let b = x(0).mul(&x(1)).mul(&x(1)).add(&x(0).mul(&x(2)));
        assert_eq!(a.gcd(&b), x(0));
    }

    #[test]
    fn gcd_mod_p() {
        let one = ModP::new(1, 3);
        let y = Poly::var(0, one);
        let c = Poly::constant(one);
        // (y+1)^3 = y^3 + 1 in characteristic 3
        let a = y.add(&c).pow(3, &one);
        let b = y.pow(3, &one).add(&c);
        assert_eq!(a, b);
        let g = a.gcd(&y.mul(&y).sub(&c));
        assert_eq!(g, y.add(&c));
    }

    #[test]
    fn exact_division_detects_non_divisor() {
        let one = Poly::constant(q(1));
        let a = x(0).mul(&x(1)).add(&one);
        assert!(a.div_exact(&x(0)).is_none());
        assert!(a.div_exact(&x(0).add(&one)).is_none());
    }
}
