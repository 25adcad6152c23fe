//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use twistlab::scalars::field::{Fq, Q61};
use twistlab::{FieldSpec, ProjAut, ProjPoint, Scalar, SubringCtx};

/// `diag(1, p_1, …, p_t)` over `Q(p_1..p_t)` with `c = (1:…:1)`.
pub fn generic_diag(t: usize) -> (Arc<FieldSpec>, ProjAut<Scalar>, ProjPoint<Scalar>) {
    let names: Vec<String> = (1..=t).map(|i| format!("p{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let s = FieldSpec::new(0, &refs).expect("valid field");
    let mut d = vec![Scalar::one(&s)];
    d.extend(refs.iter().map(|n| Scalar::param(&s, n).expect("declared parameter")));
    let phi = ProjAut::diagonal(&s, &d).expect("invertible");
    let c = ProjPoint::new(vec![Scalar::one(&s); t + 1]).expect("nonzero point");
    (s, phi, c)
}

/// `diag(1, 3, 7, 11)` truncated to `P^t` over GF(2^61 − 1).
pub fn prime_field_diag(t: usize, window: usize) -> SubringCtx<Fq> {
    let entries: Vec<Fq> = [1, 3, 7, 11][..=t].iter().map(|&v| Fq::new(v, Q61)).collect();
    let phi = ProjAut::diagonal(&Q61, &entries).expect("invertible");
    let c = ProjPoint::new(vec![Fq::new(1, Q61); t + 1]).expect("nonzero point");
    SubringCtx::from_aut(phi, c, window).expect("distinct orbit")
}
