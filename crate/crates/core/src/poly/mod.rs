//! Exact multivariate polynomials over F_p with a fixed monomial-order
//! context and the Frobenius-specific decompositions built on top of them.

mod frobenius;
mod order;
mod parse;

pub use frobenius::{bracket_power, bracket_power_ideal, frobenius_decompose, q_power};
pub use order::MonomialOrder;
pub use parse::parse_polynomial;

use crate::arith;
use crate::error::{Error, Result};
use num_rational::Rational64;
use num_traits::Zero;
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

pub const MAX_EXPONENT: u64 = 1 << 31;

/// Ambient data every polynomial refers to: the characteristic, the
/// variables, the monomial order and the grading weights. Budgets for the
/// Groebner layer travel with the context so they reach every computation
/// made over it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyContext {
    p: u64,
    var_names: Vec<String>,
    order: MonomialOrder,
    var_degrees: Vec<Rational64>,
    budget: u64,
}

/// Default pair-reduction budget per Groebner-basis call.
pub const DEFAULT_BUDGET: u64 = 1_000_000;

impl PolyContext {
    pub fn new(p: u64, var_names: &[&str], order: MonomialOrder) -> Result<Arc<PolyContext>> {
        let degrees = vec![Rational64::from_integer(1); var_names.len()];
        PolyContext::with_degrees(p, var_names, order, degrees)
    }

    pub fn with_degrees(
        p: u64,
        var_names: &[&str],
        order: MonomialOrder,
        var_degrees: Vec<Rational64>,
    ) -> Result<Arc<PolyContext>> {
        if !arith::is_prime(p) || p > (1 << 31) - 1 {
            return Err(Error::Invalid(format!(
                "characteristic must be a prime in [2, 2^31-1], got {p}"
            )));
        }
        if var_degrees.len() != var_names.len() {
            return Err(Error::Invalid("one degree per variable required".into()));
        }
        if var_degrees.iter().any(|d| *d <= Rational64::zero()) {
            return Err(Error::Invalid("grading weights must be positive".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in var_names {
            if name.is_empty() || !seen.insert(*name) {
                return Err(Error::Invalid(format!("bad variable list: `{name}`")));
            }
        }
        Ok(Arc::new(PolyContext {
            p,
            var_names: var_names.iter().map(|s| s.to_string()).collect(),
            order,
            var_degrees,
            budget: DEFAULT_BUDGET,
        }))
    }

    pub fn set_budget(self: &Arc<Self>, budget: u64) -> Arc<PolyContext> {
        let mut ctx = (**self).clone();
        ctx.budget = budget;
        Arc::new(ctx)
    }

    /// Same ring data but a different monomial order (used for elimination).
    pub(crate) fn with_order(
        self: &Arc<Self>,
        order: MonomialOrder,
        extra_vars: &[&str],
    ) -> Arc<PolyContext> {
        let mut ctx = (**self).clone();
        ctx.order = order;
        for v in extra_vars {
            ctx.var_names.push(v.to_string());
            ctx.var_degrees.push(Rational64::from_integer(1));
        }
        Arc::new(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.var_names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.var_names
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn var_degrees(&self) -> &[Rational64] {
        &self.var_degrees
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.var_names.iter().position(|v| v == name)
    }

    pub fn weighted_degree(&self, exps: &[u32]) -> Rational64 {
        exps.iter()
            .zip(self.var_degrees.iter())
            .map(|(&e, d)| Rational64::from_integer(e as i64) * d)
            .sum()
    }

    pub(crate) fn cmp_exps(&self, a: &[u32], b: &[u32]) -> Ordering {
        self.order.cmp_exps(a, b)
    }
}

pub(crate) fn same_context(a: &Arc<PolyContext>, b: &Arc<PolyContext>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub exps: Vec<u32>,
    pub coeff: u64,
}

/// A polynomial over F_p: nonzero terms sorted descending in the context
/// order, leading term first. Immutable after construction.
#[derive(Debug, Clone)]
pub struct Polynomial {
    ctx: Arc<PolyContext>,
    terms: Vec<Term>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_context(&self.ctx, &other.ctx) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ctx: &Arc<PolyContext>) -> Polynomial {
        Polynomial {
            ctx: ctx.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ctx: &Arc<PolyContext>) -> Polynomial {
        Polynomial::constant(ctx, 1)
    }

    pub fn constant(ctx: &Arc<PolyContext>, c: u64) -> Polynomial {
        let c = c % ctx.p;
        let terms = if c == 0 {
            Vec::new()
        } else {
            vec![Term {
                exps: vec![0; ctx.nvars()],
                coeff: c,
            }]
        };
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn variable(ctx: &Arc<PolyContext>, i: usize) -> Polynomial {
        assert!(i < ctx.nvars());
        let mut exps = vec![0; ctx.nvars()];
        exps[i] = 1;
        Polynomial::monomial(ctx, exps, 1)
    }

    pub fn monomial(ctx: &Arc<PolyContext>, exps: Vec<u32>, coeff: u64) -> Polynomial {
        assert_eq!(exps.len(), ctx.nvars());
        let coeff = coeff % ctx.p;
        let terms = if coeff == 0 {
            Vec::new()
        } else {
            vec![Term { exps, coeff }]
        };
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    /// Build from raw (exps, coeff) pairs; combines duplicates.
    pub fn from_terms(ctx: &Arc<PolyContext>, raw: Vec<(Vec<u32>, u64)>) -> Polynomial {
        let mut map: std::collections::BTreeMap<Vec<u32>, u64> = std::collections::BTreeMap::new();
        for (exps, c) in raw {
            assert_eq!(exps.len(), ctx.nvars());
            let entry = map.entry(exps).or_insert(0);
            *entry = arith::add(*entry, c % ctx.p, ctx.p);
        }
        let mut terms: Vec<Term> = map
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(exps, coeff)| Term { exps, coeff })
            .collect();
        terms.sort_by(|a, b| ctx.cmp_exps(&b.exps, &a.exps));
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    pub fn context(&self) -> &Arc<PolyContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn leading_term(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|t| t.exps.iter().all(|&e| e == 0))
    }

    pub fn constant_term(&self) -> u64 {
        self.terms
            .iter()
            .find(|t| t.exps.iter().all(|&e| e == 0))
            .map(|t| t.coeff)
            .unwrap_or(0)
    }

    /// Weighted total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<Rational64> {
        self.terms
            .iter()
            .map(|t| self.ctx.weighted_degree(&t.exps))
            .max()
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t0) => {
                let d = self.ctx.weighted_degree(&t0.exps);
                self.terms
                    .iter()
                    .all(|t| self.ctx.weighted_degree(&t.exps) == d)
            }
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        assert!(same_context(&self.ctx, &other.ctx));
        let p = self.ctx.p;
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match self.ctx.cmp_exps(&self.terms[i].exps, &other.terms[j].exps) {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = arith::add(self.terms[i].coeff, other.terms[j].coeff, p);
                    if c != 0 {
                        out.push(Term {
                            exps: self.terms[i].exps.clone(),
                            coeff: c,
                        });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Polynomial {
            ctx: self.ctx.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Polynomial {
        let p = self.ctx.p;
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: t.exps.clone(),
                    coeff: arith::neg(t.coeff, p),
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: u64) -> Polynomial {
        let p = self.ctx.p;
        let c = c % p;
        if c == 0 {
            return Polynomial::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: t.exps.clone(),
                    coeff: arith::mul(t.coeff, c, p),
                })
                .collect(),
        }
    }

    /// Multiply by the monomial c * x^m.
    pub fn mul_term(&self, m: &[u32], c: u64) -> Polynomial {
        let p = self.ctx.p;
        let c = c % p;
        if c == 0 {
            return Polynomial::zero(&self.ctx);
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    exps: exp_mul(&t.exps, m),
                    coeff: arith::mul(t.coeff, c, p),
                })
                .collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        assert!(same_context(&self.ctx, &other.ctx));
        let p = self.ctx.p;
        if self.is_zero() || other.is_zero() {
            return Polynomial::zero(&self.ctx);
        }
        let mut map: std::collections::BTreeMap<Vec<u32>, u64> = std::collections::BTreeMap::new();
        for a in &self.terms {
            for b in &other.terms {
                let exps = exp_mul(&a.exps, &b.exps);
                let c = arith::mul(a.coeff, b.coeff, p);
                let entry = map.entry(exps).or_insert(0);
                *entry = arith::add(*entry, c, p);
            }
        }
        let mut terms: Vec<Term> = map
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(exps, coeff)| Term { exps, coeff })
            .collect();
        terms.sort_by(|a, b| self.ctx.cmp_exps(&b.exps, &a.exps));
        Polynomial {
            ctx: self.ctx.clone(),
            terms,
        }
    }

    pub fn pow(&self, mut n: u64) -> Polynomial {
        let mut acc = Polynomial::one(&self.ctx);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Make the leading coefficient 1.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            None => self.clone(),
            Some(t) => self.scale(arith::inv(t.coeff, self.ctx.p)),
        }
    }

    /// Exact division; returns `None` when `self` is not a polynomial
    /// multiple of `divisor`.
    pub fn div_exact(&self, divisor: &Polynomial) -> Option<Polynomial> {
        assert!(same_context(&self.ctx, &divisor.ctx));
        let p = self.ctx.p;
        let lt = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot: Vec<(Vec<u32>, u64)> = Vec::new();
        while let Some(r0) = rem.leading_term() {
            let m = exp_div(&r0.exps, &lt.exps)?;
            let c = arith::mul(r0.coeff, arith::inv(lt.coeff, p), p);
            quot.push((m.clone(), c));
            rem = rem.sub(&divisor.mul_term(&m, c));
        }
        Some(Polynomial::from_terms(&self.ctx, quot))
    }

    /// Re-interpret in a context with more variables appended at the end.
    pub(crate) fn extend_to(&self, ctx: &Arc<PolyContext>) -> Polynomial {
        assert!(ctx.nvars() >= self.ctx.nvars());
        let pad = ctx.nvars() - self.ctx.nvars();
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .map(|t| {
                let mut exps = t.exps.clone();
                exps.extend(std::iter::repeat(0).take(pad));
                Term {
                    exps,
                    coeff: t.coeff,
                }
            })
            .collect();
        terms.sort_by(|a, b| ctx.cmp_exps(&b.exps, &a.exps));
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }

    /// Drop trailing auxiliary variables; all terms must be free of them.
    pub(crate) fn restrict_to(&self, ctx: &Arc<PolyContext>) -> Polynomial {
        let n = ctx.nvars();
        let mut terms: Vec<Term> = self
            .terms
            .iter()
            .map(|t| {
                debug_assert!(t.exps[n..].iter().all(|&e| e == 0));
                Term {
                    exps: t.exps[..n].to_vec(),
                    coeff: t.coeff,
                }
            })
            .collect();
        terms.sort_by(|a, b| ctx.cmp_exps(&b.exps, &a.exps));
        Polynomial {
            ctx: ctx.clone(),
            terms,
        }
    }
}

#[inline]
pub(crate) fn exp_mul(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter()
        .zip(b.iter())
        .map(|(&x, &y)| {
            let s = x as u64 + y as u64;
            assert!(s < MAX_EXPONENT, "exponent overflow");
            s as u32
        })
        .collect()
}

#[inline]
pub(crate) fn exp_div(a: &[u32], b: &[u32]) -> Option<Vec<u32>> {
    let mut out = Vec::with_capacity(a.len());
    for (&x, &y) in a.iter().zip(b.iter()) {
        if x < y {
            return None;
        }
        out.push(x - y);
    }
    Some(out)
}

#[inline]
pub(crate) fn exp_divides(b: &[u32], a: &[u32]) -> bool {
    b.iter().zip(a.iter()).all(|(&y, &x)| y <= x)
}

#[inline]
pub(crate) fn exp_lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b.iter()).map(|(&x, &y)| x.max(y)).collect()
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = self.ctx.var_names();
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const = t.exps.iter().all(|&e| e == 0);
            if t.coeff != 1 || is_const {
                factors.push(t.coeff.to_string());
            }
            for (j, &e) in t.exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(names[j].clone()),
                    _ => factors.push(format!("{}^{}", names[j], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx2() -> Arc<PolyContext> {
        PolyContext::new(3, &["x", "y"], MonomialOrder::Grevlex).unwrap()
    }

    #[test]
    fn add_cancels() {
        let ctx = PolyContext::new(2, &["x"], MonomialOrder::Grevlex).unwrap();
        let x = Polynomial::variable(&ctx, 0);
        assert!(x.add(&x).is_zero());
    }

    #[test]
    fn mul_and_pow() {
        let ctx = ctx2();
        let x = Polynomial::variable(&ctx, 0);
        let y = Polynomial::variable(&ctx, 1);
        let f = x.add(&y);
        let f3 = f.pow(3);
        // (x+y)^3 = x^3 + y^3 in characteristic 3
        let expect = x.pow(3).add(&y.pow(3));
        assert_eq!(f3, expect);
    }

    #[test]
    fn div_exact_roundtrip() {
        let ctx = ctx2();
        let x = Polynomial::variable(&ctx, 0);
        let y = Polynomial::variable(&ctx, 1);
        let a = x.add(&y.scale(2));
        let b = x.mul(&x).add(&y);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(b.div_exact(&a).is_none());
    }

    #[test]
    fn homogeneity_weighted() {
        let ctx = PolyContext::with_degrees(
            2,
            &["x", "y"],
            MonomialOrder::Grevlex,
            vec![Rational64::new(1, 2), Rational64::from_integer(1)],
        )
        .unwrap();
        // x^2 and y both have weighted degree 1
        let f = Polynomial::from_terms(&ctx, vec![(vec![2, 0], 1), (vec![0, 1], 1)]);
        assert!(f.is_homogeneous());
        let g = Polynomial::from_terms(&ctx, vec![(vec![1, 0], 1), (vec![0, 1], 1)]);
        assert!(!g.is_homogeneous());
    }
}
