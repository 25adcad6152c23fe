//! Monomial bases of `U_d = k[x_0..x_t]_d` and cached multiplication tables.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub type Exp = Vec<u32>;

/// Degree-`d` monomials in `x_0..x_t`, increasing in lex order with
/// `x_0 < x_1 < … < x_t` (so `x_0^d` comes first and `x_t^d` last).
#[derive(Debug)]
pub struct MonomialBasis {
    pub t: usize,
    pub d: usize,
    pub exps: Vec<Exp>,
    index: HashMap<Exp, usize>,
}

impl MonomialBasis {
    fn build(t: usize, d: usize) -> Self {
        let mut exps = Vec::new();
        let mut cur = vec![0u32; t + 1];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exp>) {
            if i + 1 == cur.len() {
                cur[i] = left;
                out.push(cur.clone());
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        rec(0, d as u32, &mut cur, &mut exps);
        exps.sort_by(|a, b| lex_cmp(a, b));
        let index = exps.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        MonomialBasis { t, d, exps, index }
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn index_of(&self, e: &[u32]) -> Option<usize> {
        self.index.get(e).copied()
    }
}

/// Lex comparison with `x_t` the most significant variable.
pub fn lex_cmp(a: &[u32], b: &[u32]) -> std::cmp::Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

type BasisCache = Mutex<HashMap<(usize, usize), Arc<MonomialBasis>>>;
type TableCache = Mutex<HashMap<(usize, usize, usize), Arc<Vec<u32>>>>;

fn basis_cache() -> &'static BasisCache {
    static C: OnceLock<BasisCache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

fn table_cache() -> &'static TableCache {
    static C: OnceLock<TableCache> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn basis(t: usize, d: usize) -> Arc<MonomialBasis> {
    if let Some(b) = basis_cache().lock().unwrap().get(&(t, d)) {
        return b.clone();
    }
    let b = Arc::new(MonomialBasis::build(t, d));
    basis_cache().lock().unwrap().entry((t, d)).or_insert(b).clone()
}

/// `table[i * len(b) + j]` is the index in degree `a + b` of the product of
/// monomial `i` of degree `a` and monomial `j` of degree `b`.
pub fn mul_table(t: usize, a: usize, b: usize) -> Arc<Vec<u32>> {
    if let Some(x) = table_cache().lock().unwrap().get(&(t, a, b)) {
        return x.clone();
    }
    let ba = basis(t, a);
    let bb = basis(t, b);
    let bc = basis(t, a + b);
    let mut table = Vec::with_capacity(ba.len() * bb.len());
    let mut e = vec![0u32; t + 1];
    for x in &ba.exps {
        for y in &bb.exps {
            for k in 0..=t {
                e[k] = x[k] + y[k];
            }
            table.push(bc.index_of(&e).unwrap() as u32);
        }
    }
    let table = Arc::new(table);
    table_cache().lock().unwrap().entry((t, a, b)).or_insert(table).clone()
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r as usize
}

/// `dim U_d = C(t + d, d)`.
pub fn dim_u(t: usize, d: usize) -> usize {
    binomial(t + d, d)
}
