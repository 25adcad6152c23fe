//! Plain-text forms of polynomials, points and matrices.
//!
//! Variables are `x0, x1, …`; every other identifier is a field parameter.
//! Polynomials look like `x0^2*x1 + (p1/p2)*x2^3`, points like `(1:p1:p2)`
//! and matrices like `[[1,0],[0,p]]` or `1,0;0,p`.

use super::monomials::lex_cmp;
use super::{GradedPoly, ProjAut, ProjError, ProjPoint};
use crate::scalars::field::Field;
use crate::scalars::parse::{parse_expr, Expr};
use crate::scalars::{FieldSpec, Scalar};
use std::collections::BTreeMap;
use std::sync::Arc;

fn coeff_text(c: &str) -> String {
    let body = c.strip_prefix('-').unwrap_or(c);
    if body.contains([' ', '/', '*', '(', '^']) || body.chars().any(|ch| ch.is_alphabetic()) {
        format!("({c})")
    } else {
        c.to_string()
    }
}

/// Terms ordered with the lex-largest monomial first.
pub fn render_poly<F: Field>(f: &GradedPoly<F>) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut terms: Vec<_> = f.terms().iter().collect();
    terms.sort_by(|a, b| lex_cmp(b.0, a.0));
    let mut out = String::new();
    for (i, (e, c)) in terms.into_iter().enumerate() {
        let vars: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(j, &k)| if k == 1 { format!("x{j}") } else { format!("x{j}^{k}") })
            .collect();
        let c = c.render();
        let (neg, mag) = match c.strip_prefix('-') {
            Some(m) if !m.contains([' ']) => (true, m.to_string()),
            _ => (false, c.clone()),
        };
        let body = if vars.is_empty() {
            coeff_text(&mag)
        } else if mag == "1" {
            vars.join("*")
        } else {
            format!("{}*{}", coeff_text(&mag), vars.join("*"))
        };
        match (i, neg) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(&body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    out
}

fn var_index(name: &str) -> Option<usize> {
    let rest = name.strip_prefix('x')?;
    if rest.is_empty() || !rest.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    rest.parse().ok()
}

type Sparse = BTreeMap<Vec<u32>, Scalar>;

fn sp_add(a: &Sparse, b: &Sparse, sign: bool) -> Sparse {
    let mut out = a.clone();
    for (e, c) in b {
        let c = if sign { c.clone() } else { c.neg() };
        let v = match out.get(e) {
            Some(x) => x.add(&c),
            None => c,
        };
        if v.is_zero() {
            out.remove(e);
        } else {
            out.insert(e.clone(), v);
        }
    }
    out
}

fn sp_mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (e, c) in a {
        for (f, d) in b {
            let g: Vec<u32> = e.iter().zip(f).map(|(x, y)| x + y).collect();
            let term: Sparse = [(g, c.mul(d))].into_iter().collect();
            out = sp_add(&out, &term, true);
        }
    }
    out
}

fn sp_scalar(sp: &Sparse) -> Option<Scalar> {
    match sp.len() {
        0 => None,
        1 => sp.iter().next().filter(|(e, _)| e.iter().all(|&k| k == 0)).map(|(_, c)| c.clone()),
        _ => None,
    }
}

fn eval_sparse(spec: &Arc<FieldSpec>, t: usize, e: &Expr) -> Result<Sparse, ProjError> {
    let err = |m: String| ProjError::Parse(m);
    let constant = |c: Scalar| -> Sparse {
        if c.is_zero() {
            Sparse::new()
        } else {
            [(vec![0; t + 1], c)].into_iter().collect()
        }
    };
    Ok(match e {
        Expr::Int(n) => constant(Scalar::from_bigint(spec, n)),
        Expr::Ident(s) => match var_index(s) {
            Some(i) if i <= t => {
                let mut v = vec![0; t + 1];
                v[i] = 1;
                [(v, Scalar::one(spec))].into_iter().collect()
            }
            Some(i) => return Err(err(format!("variable x{i} outside x0..x{t}"))),
            None => constant(Scalar::param(spec, s).map_err(|e| err(e.to_string()))?),
        },
        Expr::Add(a, b) => sp_add(&eval_sparse(spec, t, a)?, &eval_sparse(spec, t, b)?, true),
        Expr::Sub(a, b) => sp_add(&eval_sparse(spec, t, a)?, &eval_sparse(spec, t, b)?, false),
        Expr::Mul(a, b) => sp_mul(&eval_sparse(spec, t, a)?, &eval_sparse(spec, t, b)?),
        Expr::Neg(a) => sp_add(&Sparse::new(), &eval_sparse(spec, t, a)?, false),
        Expr::Div(a, b) => {
            let d = eval_sparse(spec, t, b)?;
            let d = sp_scalar(&d).ok_or_else(|| err("can only divide by a nonzero scalar".into()))?;
            let inv = d.inv().map_err(|e| err(e.to_string()))?;
            eval_sparse(spec, t, a)?.into_iter().map(|(e, c)| (e, c.mul(&inv))).collect()
        }
        Expr::Pow(a, k) => {
            let base = eval_sparse(spec, t, a)?;
            if let Some(s) = sp_scalar(&base) {
                constant(s.pow(*k).map_err(|e| err(e.to_string()))?)
            } else if *k < 0 {
                return Err(err("negative power of a non-constant".into()));
            } else {
                let mut acc = constant(Scalar::one(spec));
                for _ in 0..*k {
                    acc = sp_mul(&acc, &base);
                }
                acc
            }
        }
    })
}

/// Parses a homogeneous form in `x0..x_t`. The zero form needs `degree`.
pub fn parse_poly(spec: &Arc<FieldSpec>, t: usize, src: &str, degree: Option<usize>) -> Result<GradedPoly<Scalar>, ProjError> {
    let e = parse_expr(src).map_err(|e| ProjError::Parse(e.to_string()))?;
    let sp = eval_sparse(spec, t, &e)?;
    let degs: Vec<usize> = sp.keys().map(|e| e.iter().sum::<u32>() as usize).collect();
    let d = match (degs.first(), degree) {
        (Some(&d), Some(want)) if d != want => return Err(ProjError::DegreeMismatch(d, want)),
        (Some(&d), _) => d,
        (None, Some(want)) => want,
        (None, None) => return Err(ProjError::Parse("degree of the zero form is ambiguous".into())),
    };
    if degs.iter().any(|&x| x != d) {
        return Err(ProjError::NotHomogeneous);
    }
    let mut out = GradedPoly::zero(spec, t, d);
    for (e, c) in sp {
        out = out.add(&GradedPoly::monomial(spec, &e, c))?;
    }
    Ok(out)
}

/// Splits on `sep` outside parentheses and brackets.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn strip_outer(s: &str, open: char, close: char) -> Option<&str> {
    let s = s.trim();
    let inner = s.strip_prefix(open)?.strip_suffix(close)?;
    // make sure the outer pair actually matches
    let mut depth = 0i32;
    for c in inner.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return None;
        }
    }
    Some(inner)
}

pub fn parse_point(spec: &Arc<FieldSpec>, src: &str) -> Result<ProjPoint<Scalar>, ProjError> {
    let inner = strip_outer(src, '(', ')').ok_or_else(|| ProjError::Parse(format!("point must look like (a:b:…), got {src:?}")))?;
    let coords = split_top(inner, ':')
        .into_iter()
        .map(|c| Scalar::parse(spec, c.trim()).map_err(|e| ProjError::Parse(e.to_string())))
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() < 2 {
        return Err(ProjError::Shape("a point needs at least two coordinates".into()));
    }
    ProjPoint::new(coords)
}

pub fn parse_matrix(spec: &Arc<FieldSpec>, src: &str) -> Result<Vec<Vec<Scalar>>, ProjError> {
    let rows: Vec<&str> = match strip_outer(src, '[', ']') {
        Some(inner) => split_top(inner, ',')
            .into_iter()
            .map(|r| strip_outer(r, '[', ']').ok_or_else(|| ProjError::Parse(format!("bad matrix row {r:?}"))))
            .collect::<Result<_, _>>()?,
        None => split_top(src, ';'),
    };
    let m = rows
        .into_iter()
        .map(|r| {
            split_top(r, ',')
                .into_iter()
                .map(|c| Scalar::parse(spec, c.trim()).map_err(|e| ProjError::Parse(e.to_string())))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(ProjError::Shape("matrix must be square".into()));
    }
    Ok(m)
}

pub fn parse_aut(spec: &Arc<FieldSpec>, src: &str) -> Result<ProjAut<Scalar>, ProjError> {
    ProjAut::new(spec, parse_matrix(spec, src)?)
}

pub fn render_matrix<F: Field>(m: &[Vec<F>]) -> String {
    let rows: Vec<String> = m.iter().map(|r| format!("[{}]", r.iter().map(|x| x.render()).collect::<Vec<_>>().join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_round_trip() {
        let spec = FieldSpec::new(0, &["p1", "p2"]).unwrap();
        for src in ["x0^2*x1 + (p1/p2)*x2^3", "x1*x2 + x0*x2 - x0*x1", "-3*x0 + (1/2)*x1", "(p1 + 1)*x0*x1"] {
            let f = parse_poly(&spec, 2, src, None).unwrap();
            let g = parse_poly(&spec, 2, &render_poly(&f), None).unwrap();
            assert_eq!(f, g, "{src} -> {}", render_poly(&f));
        }
    }

    #[test]
    fn rejects_bad_polys() {
        let spec = FieldSpec::new(0, &["p"]).unwrap();
        assert_eq!(parse_poly(&spec, 2, "x0 + x1^2", None), Err(ProjError::NotHomogeneous));
        assert!(parse_poly(&spec, 1, "x2", None).is_err());
        assert!(parse_poly(&spec, 2, "x0/x1", None).is_err());
        assert!(parse_poly(&spec, 2, "q*x0", None).is_err());
        assert_eq!(parse_poly(&spec, 2, "x0 - x0", Some(1)).unwrap().degree(), 1);
    }

    #[test]
    fn points_and_matrices() {
        let spec = FieldSpec::new(0, &["p"]).unwrap();
        let pt = parse_point(&spec, "(2:2*p:(p+1)*2)").unwrap();
        assert_eq!(pt.to_string(), "(1:p:p + 1)");
        let a = parse_matrix(&spec, "[[1,0],[0,p]]").unwrap();
        let b = parse_matrix(&spec, "1,0;0,p").unwrap();
        assert_eq!(a, b);
        assert!(parse_matrix(&spec, "1,0;0").is_err());
        assert!(parse_point(&spec, "(0:0)").is_err());
    }
}
