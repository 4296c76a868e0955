//! Frobenius powers and digit decomposition.

use super::{Polynomial, Term, MAX_EXPONENT};
use crate::error::{Error, Result};

/// q = p^e with an overflow guard.
pub fn q_power(p: u64, e: u32) -> Result<u64> {
    let mut q: u64 = 1;
    for _ in 0..e {
        q = q
            .checked_mul(p)
            .filter(|&v| v < MAX_EXPONENT)
            .ok_or(Error::ExponentOverflow(u64::MAX))?;
    }
    Ok(q)
}

/// f^{p^e}, computed coefficientwise: in characteristic p the q-th power map
/// sends sum(c_a x^a) to sum(c_a x^{q a}) because c^q = c on the prime field.
pub fn bracket_power(f: &Polynomial, e: u32) -> Result<Polynomial> {
    assert!(e >= 1);
    let ctx = f.context();
    let q = q_power(ctx.p(), e)?;
    let mut terms = Vec::with_capacity(f.terms().len());
    for t in f.terms() {
        let mut exps = Vec::with_capacity(t.exps.len());
        for &a in &t.exps {
            let v = a as u64 * q;
            if v >= MAX_EXPONENT {
                return Err(Error::ExponentOverflow(v));
            }
            exps.push(v as u32);
        }
        terms.push((exps, t.coeff));
    }
    Ok(Polynomial::from_terms(ctx, terms))
}

/// Generators of the bracket power I^{[q]}: each generator raised to the q-th
/// power.
pub fn bracket_power_ideal(gens: &[Polynomial], e: u32) -> Result<Vec<Polynomial>> {
    gens.iter().map(|g| bracket_power(g, e)).collect()
}

/// Digit decomposition: writes f = sum_b (c_b)^q x^b with every digit
/// exponent b strictly below q componentwise. Returns the pairs (b, c_b) with
/// c_b nonzero, sorted ascending in b under the context order. These are the
/// coordinates of f in the monomial basis of the Frobenius pushforward of the
/// polynomial ring.
pub fn frobenius_decompose(f: &Polynomial, e: u32) -> Result<Vec<(Vec<u32>, Polynomial)>> {
    assert!(e >= 1);
    let ctx = f.context();
    let q = q_power(ctx.p(), e)? as u32;
    let mut buckets: std::collections::BTreeMap<Vec<u32>, Vec<(Vec<u32>, u64)>> =
        std::collections::BTreeMap::new();
    for Term { exps, coeff } in f.terms() {
        let mut digit = Vec::with_capacity(exps.len());
        let mut quot = Vec::with_capacity(exps.len());
        for &m in exps {
            digit.push(m % q);
            quot.push(m / q);
        }
        buckets.entry(digit).or_default().push((quot, *coeff));
    }
    let mut out: Vec<(Vec<u32>, Polynomial)> = buckets
        .into_iter()
        .map(|(b, raw)| (b, Polynomial::from_terms(ctx, raw)))
        .collect();
    out.sort_by(|a, b| ctx.cmp_exps(&a.0, &b.0));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_polynomial, MonomialOrder, PolyContext};
    use std::sync::Arc;

    fn ctx(p: u64, vars: &[&str]) -> Arc<PolyContext> {
        PolyContext::new(p, vars, MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn bracket_power_examples() {
        let c2 = ctx(2, &["x", "y"]);
        let x = parse_polynomial(&c2, "x").unwrap();
        let y = parse_polynomial(&c2, "y").unwrap();
        assert_eq!(bracket_power(&x, 1).unwrap().to_string(), "x^2");
        assert_eq!(bracket_power(&y, 1).unwrap().to_string(), "y^2");

        let c3 = ctx(3, &["x", "y"]);
        let f = parse_polynomial(&c3, "x + y").unwrap();
        assert_eq!(bracket_power(&f, 1).unwrap().to_string(), "x^3 + y^3");

        let c3z = ctx(3, &["x", "y", "z"]);
        let g = parse_polynomial(&c3z, "x^2 - y*z").unwrap();
        assert_eq!(
            bracket_power(&g, 1).unwrap(),
            parse_polynomial(&c3z, "x^6 - y^3*z^3").unwrap()
        );
    }

    #[test]
    fn decompose_examples() {
        let c2 = ctx(2, &["x"]);
        let f = parse_polynomial(&c2, "x^3").unwrap();
        let d = frobenius_decompose(&f, 1).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].0, vec![1]);
        assert_eq!(d[0].1.to_string(), "x");

        let c2xyz = ctx(2, &["x", "y", "z"]);
        let f = parse_polynomial(&c2xyz, "x^2 + y*z").unwrap();
        let d = frobenius_decompose(&f, 1).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].0, vec![0, 0, 0]);
        assert_eq!(d[0].1.to_string(), "x");
        assert_eq!(d[1].0, vec![0, 1, 1]);
        assert_eq!(d[1].1.to_string(), "1");

        let c3 = ctx(3, &["x", "y"]);
        let f = parse_polynomial(&c3, "y^3 + x^2*y").unwrap();
        let d = frobenius_decompose(&f, 1).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].0, vec![0, 0]);
        assert_eq!(d[0].1.to_string(), "y");
        assert_eq!(d[1].0, vec![2, 1]);
        assert_eq!(d[1].1.to_string(), "1");
    }

    fn reassemble(ctx: &Arc<PolyContext>, d: &[(Vec<u32>, Polynomial)], e: u32) -> Polynomial {
        let mut acc = Polynomial::zero(ctx);
        for (b, c) in d {
            let cq = bracket_power(c, e).unwrap();
            acc = acc.add(&cq.mul_term(b, 1));
        }
        acc
    }

    #[test]
    fn reassembly_is_identity() {
        let c3 = ctx(3, &["x", "y"]);
        for text in ["x^7*y + 2*x^4 + y^5 + 1", "x^9 + y^9", "2*x*y"] {
            let f = parse_polynomial(&c3, text).unwrap();
            for e in 1..=2 {
                let d = frobenius_decompose(&f, e).unwrap();
                assert_eq!(reassemble(&c3, &d, e), f);
                for (b, _) in &d {
                    let q = q_power(3, e).unwrap() as u32;
                    assert!(b.iter().all(|&bi| bi < q));
                }
            }
        }
    }

    #[test]
    fn twist_by_qth_power_multiplies_digits() {
        let c2 = ctx(2, &["x", "y"]);
        let f = parse_polynomial(&c2, "x^3 + x*y^2 + y").unwrap();
        let g = parse_polynomial(&c2, "x + y^2").unwrap();
        for e in 1..=2 {
            let gq = bracket_power(&g, e).unwrap();
            let lhs = frobenius_decompose(&f.mul(&gq), e).unwrap();
            let rhs: Vec<(Vec<u32>, Polynomial)> = frobenius_decompose(&f, e)
                .unwrap()
                .into_iter()
                .map(|(b, c)| (b, c.mul(&g)))
                .collect();
            assert_eq!(lhs, rhs);
        }
    }
}
